use super::*;
use crate::error::Error;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn space(n: usize) -> ModeSpace {
    ModeSpace::new(n).unwrap()
}

fn assert_op_close(a: &Operator, b: &Operator, tol: f64) {
    assert_eq!(a.spaces(), b.spaces());
    let diff = a.sub(b).unwrap();
    let max = diff.max_abs();
    assert!(max < tol, "operators differ by {max:.3e} (tol {tol:.1e})");
}

#[test]
fn annihilator_entries() {
    let a = annihilator(space(3));
    let m = a.matrix();
    assert_eq!(m[(0, 1)], c(1.0, 0.0));
    assert_eq!(m[(1, 2)], c(2f64.sqrt(), 0.0));
    let nonzero: usize = m.iter().filter(|v| v.norm_sqr() > 0.0).count();
    assert_eq!(nonzero, 2);
}

#[test]
fn annihilator_lowers_fock_one() {
    let s = space(4);
    let one = StateVector::basis(vec![s], &[1]).unwrap();
    let lowered = annihilator(s).apply(&one).unwrap();
    let zero = StateVector::basis(vec![s], &[0]).unwrap();
    assert_eq!(lowered, zero);
}

#[test]
fn commutator_is_identity_except_top_level() {
    for n in [2usize, 5, 16] {
        let s = space(n);
        let a = annihilator(s);
        let ad = creator(s);
        let comm = a.matmul(&ad).unwrap().sub(&ad.matmul(&a).unwrap()).unwrap();
        for i in 0..n {
            for j in 0..n {
                let expected = if i != j {
                    0.0
                } else if i == n - 1 {
                    1.0 - n as f64
                } else {
                    1.0
                };
                let entry = comm.matrix()[(i, j)];
                if i != j {
                    assert_eq!(entry, c(0.0, 0.0), "cutoff {n} ({i},{j})");
                } else {
                    // sqrt(k) rounds, so the squared values are exact only to
                    // a couple of ulps of k.
                    assert!(
                        (entry - c(expected, 0.0)).norm() <= 1e-12 * n as f64,
                        "cutoff {n} ({i},{j}): {entry}"
                    );
                }
            }
        }
    }
}

#[test]
fn quadrature_zero_angle_is_q() {
    let s = space(5);
    let a = annihilator(s);
    let q = a
        .add(&a.dagger())
        .unwrap()
        .scale(c(1.0 / 2f64.sqrt(), 0.0));
    assert_op_close(&quadrature(s, 0.0), &q, 1e-15);
}

#[test]
fn quadrature_half_pi_is_p() {
    let s = space(3);
    let p = quadrature(s, std::f64::consts::FRAC_PI_2);
    // i (a^dagger - a) / sqrt(2)
    let r = 1.0 / 2f64.sqrt();
    assert!((p.matrix()[(1, 0)] - c(0.0, r)).norm() < 1e-15);
    assert!((p.matrix()[(0, 1)] - c(0.0, -r)).norm() < 1e-15);
    assert!((p.matrix()[(2, 1)] - c(0.0, 2f64.sqrt() * r)).norm() < 1e-15);
}

#[test]
fn vacuum_quadrature_variance_is_half_for_any_angle() {
    let s = space(12);
    let vac = StateVector::vacuum(vec![s]).unwrap();
    for k in 0..8 {
        let phi = k as f64 * std::f64::consts::PI / 8.0;
        let x = quadrature(s, phi);
        let x2 = x.matmul(&x).unwrap();
        let v = x2.expectation(&vac).unwrap().re;
        assert!((v - 0.5).abs() < 1e-12, "variance {v} at phi {phi}");
    }
}

#[test]
fn displacement_zero_is_identity() {
    let s = space(12);
    let d = displacement(s, c(0.0, 0.0)).unwrap();
    assert_op_close(&d, &identity(s), 1e-14);
}

#[test]
fn displaced_vacuum_matches_coherent_expansion() {
    let s = space(24);
    let d = displacement(s, c(1.0, 0.0)).unwrap();
    let vac = StateVector::vacuum(vec![s]).unwrap();
    let disp = d.apply(&vac).unwrap();
    // Closed-form coherent amplitudes as the independent oracle.
    let mut expected = 0.5f64.exp().recip();
    assert!((disp.amp(0).re - 0.606_530_659_7).abs() < 1e-9);
    let mut fact = 1.0f64;
    for n in 0..20 {
        if n > 0 {
            fact *= n as f64;
            expected = (-0.5f64).exp() / fact.sqrt();
        }
        assert!(
            (disp.amp(n) - c(expected, 0.0)).norm() < 1e-10,
            "amplitude {n}"
        );
    }
}

#[test]
fn displacement_inverse_and_unitarity() {
    let s = space(30);
    let beta = c(1.2, -0.7);
    let d = displacement(s, beta).unwrap();
    let dinv = displacement(s, -beta).unwrap();
    assert_op_close(&d.matmul(&dinv).unwrap(), &identity(s), 1e-8);
    assert_op_close(&d.matmul(&d.dagger()).unwrap(), &identity(s), 1e-8);
}

#[test]
fn displacement_guard_rejects_small_cutoff() {
    let err = displacement(space(8), c(2.0, 0.0)).unwrap_err();
    match err {
        Error::Truncation { required, cutoff } => {
            assert_eq!(cutoff, 8);
            assert_eq!(required, 26);
        }
        other => panic!("expected truncation error, got {other:?}"),
    }
}

#[test]
fn squeeze_zero_is_identity() {
    let s = space(12);
    let sq = squeeze_op(s, 0.0, 0.0).unwrap();
    assert_op_close(&sq, &identity(s), 1e-14);
}

#[test]
fn squeeze_conjugation_identity() {
    // S a S^dagger = a cosh(eta) - a^dagger e^{i phi} sinh(eta). Truncated
    // squeeze operators converge slowly in the column index (a squeezed |j>
    // at eta = 1 is centered near 3.8 j), so the identity is checked on the
    // low block of a roomy space.
    let s = space(200);
    let eta = 1.0;
    let sq = squeeze_op(s, eta, 0.0).unwrap();
    let a = annihilator(s);
    let lhs = sq.matmul(&a).unwrap().matmul(&sq.dagger()).unwrap();
    let rhs = a
        .scale(c(eta.cosh(), 0.0))
        .sub(&a.dagger().scale(c(eta.sinh(), 0.0)))
        .unwrap();
    let diff = lhs.sub(&rhs).unwrap();
    let mut max = 0.0f64;
    for i in 0..10 {
        for j in 0..10 {
            max = max.max(diff.matrix()[(i, j)].norm());
        }
    }
    assert!(max < 1e-8, "lower block differs by {max:.3e}");

    // With a nonzero squeeze phase the raised term carries e^{i phi}.
    let phi = 0.7;
    let sq = squeeze_op(s, eta, phi).unwrap();
    let lhs = sq.matmul(&a).unwrap().matmul(&sq.dagger()).unwrap();
    let rhs = a
        .scale(c(eta.cosh(), 0.0))
        .sub(&a.dagger().scale(C64::from_polar(eta.sinh(), phi)))
        .unwrap();
    let diff = lhs.sub(&rhs).unwrap();
    let mut max = 0.0f64;
    for i in 0..10 {
        for j in 0..10 {
            max = max.max(diff.matrix()[(i, j)].norm());
        }
    }
    assert!(max < 1e-8, "phase block differs by {max:.3e}");
}

#[test]
fn squeeze_unitarity() {
    let s = space(40);
    let sq = squeeze_op(s, 1.0, 0.4).unwrap();
    assert_op_close(&sq.matmul(&sq.dagger()).unwrap(), &identity(s), 1e-8);
}

#[test]
fn matrix_exp_zero_is_identity() {
    let s = space(6);
    let zero = identity(s).scale(c(0.0, 0.0));
    let e = matrix_exp(&zero, 1e-12).unwrap();
    assert_op_close(&e, &identity(s), 1e-14);
}

#[test]
fn matrix_exp_diagonal_phase() {
    let s = space(2);
    let mut m = ndarray::Array2::zeros((2, 2));
    m[(1, 1)] = c(0.0, std::f64::consts::PI);
    let op = Operator::from_matrix(vec![s], m).unwrap();
    let e = matrix_exp(&op, 1e-12).unwrap();
    assert!((e.matrix()[(0, 0)] - c(1.0, 0.0)).norm() < 1e-12);
    assert!((e.matrix()[(1, 1)] - c(-1.0, 0.0)).norm() < 1e-12);
    assert!(e.matrix()[(0, 1)].norm() < 1e-14);
}

#[test]
fn matrix_exp_two_mode_squeezer_gives_pair_amplitudes() {
    // exp(g(a^dagger b^dagger - a b)) |00> has amplitude tanh(g)^n / cosh(g)
    // on the diagonal pair states |n,n>.
    let g = 0.105f64;
    let s = space(16);
    let a = annihilator(s);
    let id = identity(s);
    let ab = a.tensor(&a);
    let gen = ab.dagger().sub(&ab).unwrap().scale(c(g, 0.0));
    let u = matrix_exp(&gen, 1e-12).unwrap();
    let vac = StateVector::vacuum(vec![s, s]).unwrap();
    let out = u.apply(&vac).unwrap();
    let t = g.tanh();
    for n in 0..16usize {
        let expected = t.powi(n as i32) / g.cosh();
        let idx = n * 16 + n;
        assert!(
            (out.amp(idx) - c(expected, 0.0)).norm() < 1e-10,
            "pair amplitude {n}"
        );
    }
    // Off-diagonal pairs stay empty.
    assert!(out.amp(1).norm() < 1e-14);
    assert!(out.amp(16 * 2 + 3).norm() < 1e-14);
    drop(id);
}

#[test]
fn matrix_exp_rejects_zero_tolerance() {
    let s = space(4);
    let gen = annihilator(s);
    assert!(matches!(
        matrix_exp(&gen, 0.0),
        Err(Error::Convergence { .. })
    ));
}

#[test]
fn tensor_identities() {
    let s2 = space(2);
    let s3 = space(3);
    let i6 = identity(s2).tensor(&identity(s3));
    for i in 0..6 {
        for j in 0..6 {
            let expected = if i == j { 1.0 } else { 0.0 };
            assert_eq!(i6.matrix()[(i, j)], c(expected, 0.0));
        }
    }
}

#[test]
fn tensor_basis_ordering() {
    // |0> (x) |1> sits at flat index 1 when mode 0 is slowest.
    let s = space(2);
    let zero = StateVector::basis(vec![s], &[0]).unwrap();
    let one = StateVector::basis(vec![s], &[1]).unwrap();
    let prod = zero.tensor(&one);
    assert_eq!(prod.amp(1), c(1.0, 0.0));
    assert_eq!(prod.norm_sqr(), 1.0);
}

#[test]
fn tensor_mixed_product_property() {
    let s = space(3);
    let a = annihilator(s);
    let id = identity(s);
    let left = a.tensor(&id).matmul(&id.tensor(&a)).unwrap();
    let right = a.tensor(&a);
    assert_op_close(&left, &right, 1e-15);
}

#[test]
fn tensor_is_associative() {
    let ops = [annihilator(space(2)), creator(space(3)), number_operator(space(2))];
    let left = ops[0].tensor(&ops[1]).tensor(&ops[2]);
    let right = ops[0].tensor(&ops[1].tensor(&ops[2]));
    assert_eq!(left, right);
}

#[test]
fn contract_vacuum_bra_picks_out_branch() {
    let s = space(4);
    let psi = {
        let mut amps = ndarray::Array1::zeros(4);
        amps[0] = c(0.6, 0.0);
        amps[2] = c(0.0, 0.8);
        StateVector::new(vec![s], amps).unwrap()
    };
    let zero = StateVector::basis(vec![s], &[0]).unwrap();
    let joint = zero.tensor(&psi);
    let out = joint.contract_bra(&zero, &[0]).unwrap();
    assert!((out.amp(0) - psi.amp(0)).norm() < 1e-15);
    assert!((out.amp(2) - psi.amp(2)).norm() < 1e-15);

    let one = StateVector::basis(vec![s], &[1]).unwrap();
    let nothing = joint.contract_bra(&one, &[0]).unwrap();
    assert!(nothing.norm() < 1e-15);
}

#[test]
fn contract_bra_mode_mismatch_is_rejected() {
    let joint = StateVector::vacuum(vec![space(3), space(4)]).unwrap();
    let bra = StateVector::vacuum(vec![space(5)]).unwrap();
    assert!(matches!(
        joint.contract_bra(&bra, &[1]),
        Err(Error::ModeMismatch(_))
    ));
}

#[test]
fn contract_bra_completeness_preserves_norm() {
    // Summing |<n|psi>|^2 over an orthonormal bra basis returns the norm.
    let s1 = space(3);
    let s2 = space(4);
    let mut amps = ndarray::Array1::zeros(12);
    for (i, v) in amps.iter_mut().enumerate() {
        *v = c(0.1 + 0.05 * i as f64, 0.02 * i as f64 - 0.1);
    }
    let psi = StateVector::new(vec![s1, s2], amps).unwrap().normalized().unwrap();
    let mut total = 0.0;
    for n in 0..3 {
        let bra = StateVector::basis(vec![s1], &[n]).unwrap();
        total += psi.contract_bra(&bra, &[0]).unwrap().norm_sqr();
    }
    assert!((total - 1.0).abs() < 1e-10);
}

#[test]
fn partial_trace_of_product_state_is_pure() {
    let s = space(4);
    let mut amps = ndarray::Array1::zeros(4);
    amps[0] = c(0.8, 0.0);
    amps[3] = c(0.0, 0.6);
    let psi = StateVector::new(vec![s], amps).unwrap();
    let vac = StateVector::vacuum(vec![s]).unwrap();
    let joint = psi.tensor(&vac);
    let rho = joint.partial_trace(&[0]).unwrap();
    assert!((rho.trace().re - 1.0).abs() < 1e-12);
    // Purity tr(rho^2) = 1 for a product state.
    let purity = rho.matmul(&rho).unwrap().trace().re;
    assert!((purity - 1.0).abs() < 1e-12);
}

#[test]
fn partial_trace_of_bell_pair_is_maximally_mixed() {
    let s = space(2);
    let mut amps = ndarray::Array1::zeros(4);
    let r = 1.0 / 2f64.sqrt();
    amps[0] = c(r, 0.0);
    amps[3] = c(r, 0.0);
    let bell = StateVector::new(vec![s, s], amps).unwrap();
    for keep in [[0usize], [1usize]] {
        let rho = bell.partial_trace(&keep).unwrap();
        assert!((rho.matrix()[(0, 0)] - c(0.5, 0.0)).norm() < 1e-14);
        assert!((rho.matrix()[(1, 1)] - c(0.5, 0.0)).norm() < 1e-14);
        assert!(rho.matrix()[(0, 1)].norm() < 1e-14);
    }
}

#[test]
fn partial_trace_of_two_mode_squeezed_vacuum_is_thermal() {
    let g = 0.105f64;
    let s = space(16);
    let a = annihilator(s);
    let ab = a.tensor(&a);
    let gen = ab.dagger().sub(&ab).unwrap().scale(c(g, 0.0));
    let u = matrix_exp(&gen, 1e-12).unwrap();
    let vac = StateVector::vacuum(vec![s, s]).unwrap();
    let tmsv = u.apply(&vac).unwrap();
    let rho = tmsv.partial_trace(&[0]).unwrap();
    assert!((rho.trace().re - 1.0).abs() < 1e-10);
    let n_op = number_operator(s);
    let mean_n = n_op.expectation_density(&rho).unwrap().re;
    let expected = g.sinh() * g.sinh();
    assert!(
        (mean_n - expected).abs() < 1e-6,
        "thermal occupation {mean_n} vs {expected}"
    );
    // Off-diagonal elements vanish for a thermal marginal.
    assert!(rho.matrix()[(0, 1)].norm() < 1e-12);
}

#[test]
fn coherent_guard_values() {
    assert_eq!(coherent_cutoff_guard(c(0.0, 0.0)), 10);
    assert_eq!(coherent_cutoff_guard(c(4.0, 0.0)), 50);
    assert_eq!(squeezed_cutoff_guard(0.0) % 2, 0);
    assert_eq!(squeezed_cutoff_guard(1.0), 22);
}
