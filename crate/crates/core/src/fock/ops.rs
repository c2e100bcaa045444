//! Operator constructors: ladder, quadrature, displacement, squeeze, and the
//! scaling-and-squaring matrix exponential they are built on.

use super::{C64, ModeSpace, Operator};
use crate::error::{Error, Result};
use ndarray::Array2;

/// Default tolerance for [`matrix_exp`].
pub const DEFAULT_EXP_TOL: f64 = 1e-12;

/// Cutoff needed to hold a coherent amplitude `beta` with comfortable headroom.
pub fn coherent_cutoff_guard(beta: C64) -> usize {
    let b = beta.norm();
    (b * b + 6.0 * b + 10.0).ceil() as usize
}

/// Cutoff needed for squeezing strength `eta`; always even.
pub fn squeezed_cutoff_guard(eta: f64) -> usize {
    let s = eta.sinh();
    let n = (10.0 + 8.0 * s * s).ceil() as usize;
    n + n % 2
}

pub fn identity(space: ModeSpace) -> Operator {
    let mat = Array2::from_diag_elem(space.dim(), C64::new(1.0, 0.0));
    Operator::from_matrix(vec![space], mat).expect("square by construction")
}

/// Annihilation operator: <n-1|a|n> = sqrt(n).
pub fn annihilator(space: ModeSpace) -> Operator {
    let d = space.dim();
    let mut mat = Array2::zeros((d, d));
    for n in 1..d {
        mat[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    Operator::from_matrix(vec![space], mat).expect("square by construction")
}

/// Creation operator, the conjugate transpose of [`annihilator`].
pub fn creator(space: ModeSpace) -> Operator {
    annihilator(space).dagger()
}

/// Number operator a^dagger a.
pub fn number_operator(space: ModeSpace) -> Operator {
    let d = space.dim();
    let mut mat = Array2::zeros((d, d));
    for n in 0..d {
        mat[(n, n)] = C64::new(n as f64, 0.0);
    }
    Operator::from_matrix(vec![space], mat).expect("square by construction")
}

/// Quadrature X_phi = (a e^{-i phi} + a^dagger e^{i phi}) / sqrt(2).
///
/// phi = 0 gives the position-like quadrature q, phi = pi/2 the momentum-like p.
pub fn quadrature(space: ModeSpace, phi: f64) -> Operator {
    let a = annihilator(space);
    let em = C64::from_polar(1.0 / 2f64.sqrt(), -phi);
    let ep = C64::from_polar(1.0 / 2f64.sqrt(), phi);
    a.scale(em)
        .add(&a.dagger().scale(ep))
        .expect("same space")
}

/// Displacement operator D(beta) = exp(beta a^dagger - beta* a).
pub fn displacement(space: ModeSpace, beta: C64) -> Result<Operator> {
    let required = coherent_cutoff_guard(beta);
    if space.cutoff() < required {
        return Err(Error::Truncation {
            required,
            cutoff: space.cutoff(),
        });
    }
    let a = annihilator(space);
    let gen = a
        .dagger()
        .scale(beta)
        .sub(&a.scale(beta.conj()))
        .expect("same space");
    matrix_exp(&gen, DEFAULT_EXP_TOL)
}

/// Squeeze operator S(xi) = exp((xi a^dagger^2 - xi* a^2) / 2), xi = eta e^{i phi}.
pub fn squeeze_op(space: ModeSpace, eta: f64, phi: f64) -> Result<Operator> {
    if eta < 0.0 {
        return Err(Error::Params(format!(
            "squeezing strength must be nonnegative, got {eta}"
        )));
    }
    let required = squeezed_cutoff_guard(eta);
    if space.cutoff() < required {
        return Err(Error::Truncation {
            required,
            cutoff: space.cutoff(),
        });
    }
    let xi = C64::from_polar(eta, phi);
    let a = annihilator(space);
    let a2 = a.matmul(&a).expect("same space");
    let half = C64::new(0.5, 0.0);
    let gen = a2
        .dagger()
        .scale(xi * half)
        .sub(&a2.scale(xi.conj() * half))
        .expect("same space");
    matrix_exp(&gen, DEFAULT_EXP_TOL)
}

fn one_norm(mat: &Array2<C64>) -> f64 {
    let mut max = 0.0f64;
    for col in mat.columns() {
        let s: f64 = col.iter().map(|c| c.norm()).sum();
        max = max.max(s);
    }
    max
}

/// Matrix exponential by scaling-and-squaring with an adaptive Taylor series.
///
/// The argument is scaled by 2^-s until its 1-norm is below 1/4, the series is
/// summed until the running term falls below a share of `tol` (order capped at
/// 64), and the result is squared s times.
pub fn matrix_exp(op: &Operator, tol: f64) -> Result<Operator> {
    if !(tol > 0.0) {
        return Err(Error::Convergence {
            achieved: f64::INFINITY,
            tol,
        });
    }
    if op.matrix().iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::Params("matrix exponential of non-finite entries".into()));
    }
    let d = op.dim();
    let norm = one_norm(op.matrix());
    let theta = 0.25f64;
    let s = if norm > theta {
        (norm / theta).log2().ceil() as u32
    } else {
        0
    };
    if s > 64 {
        return Err(Error::Convergence {
            achieved: norm,
            tol,
        });
    }
    let scale = C64::new((0.5f64).powi(s as i32), 0.0);
    let a = op.matrix().mapv(|c| c * scale);

    let eye = Array2::from_diag_elem(d, C64::new(1.0, 0.0));
    let mut sum = eye.clone();
    let mut term = eye;
    // Series error compounds through the squarings; tighten accordingly.
    let series_tol = tol / (2.0f64.powi(s as i32) * d as f64).max(1.0);
    let mut converged = false;
    let mut last = f64::INFINITY;
    for k in 1..=64u32 {
        term = term.dot(&a).mapv(|c| c / C64::new(k as f64, 0.0));
        sum += &term;
        last = one_norm(&term);
        if last <= series_tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Convergence {
            achieved: last,
            tol,
        });
    }
    let mut result = sum;
    for _ in 0..s {
        result = result.dot(&result);
    }
    Operator::from_matrix(op.spaces().to_vec(), result)
}
