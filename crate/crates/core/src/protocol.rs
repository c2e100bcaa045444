//! The weak-measurement state-engineering pipeline: pre-selection at an
//! unbalanced beam splitter, parametric coupling of signal and transmitted
//! idler, and single-photon postselection.
//!
//! Two routes are provided. The first-order route applies the conditional
//! operator `1 - (g alpha/sqrt2) a - (g/(sqrt2 alpha eps)) a^dagger` to the
//! pointer. The exact route builds all three modes, evolves them under
//! `exp(g(a^dagger b_t^dagger - a b_t))` and contracts the detection bra; it
//! is the internal oracle for the first-order formulas.

use crate::error::{Error, Result};
use crate::fock::{
    annihilator, identity, matrix_exp, quadrature, tensor_states, C64, ModeSpace, Operator,
    StateVector, DEFAULT_EXP_TOL,
};
use crate::states::{coherent_state, PointerInput, PointerKind};
use serde::{Deserialize, Serialize};

pub const DEFAULT_COUPLING: f64 = 0.105;
pub const DEFAULT_IDLER_AMPLITUDE: f64 = 0.01;
pub const DEFAULT_IMBALANCE: f64 = 0.1;
pub const DEFAULT_SIGNAL_CUTOFF: usize = 40;
pub const DEFAULT_IDLER_CUTOFF: usize = 6;

/// The experiment knobs: coupling, idler amplitude, splitter imbalance,
/// pointer input and basis cutoffs.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ProtocolParams {
    /// Dimensionless parametric coupling (squeezing parameter of the crystal).
    pub g: f64,
    /// Weak coherent idler amplitude; |alpha| < 1.
    pub alpha: C64,
    /// Beam-splitter imbalance, in (0, 0.5].
    pub epsilon: f64,
    pub pointer: PointerKind,
    pub signal_cutoff: usize,
    pub idler_cutoff: usize,
}

impl Default for ProtocolParams {
    fn default() -> Self {
        ProtocolParams {
            g: DEFAULT_COUPLING,
            alpha: C64::new(DEFAULT_IDLER_AMPLITUDE, 0.0),
            epsilon: DEFAULT_IMBALANCE,
            pointer: PointerKind::Vacuum,
            signal_cutoff: DEFAULT_SIGNAL_CUTOFF,
            idler_cutoff: DEFAULT_IDLER_CUTOFF,
        }
    }
}

impl ProtocolParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.g >= 0.0) {
            return Err(Error::Params(format!("coupling g must be >= 0, got {}", self.g)));
        }
        let a = self.alpha.norm();
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::Params(format!(
                "idler amplitude must satisfy 0 < |alpha| < 1, got |alpha| = {a}"
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 0.5) {
            return Err(Error::Params(format!(
                "imbalance epsilon must lie in (0, 0.5], got {}",
                self.epsilon
            )));
        }
        if self.signal_cutoff < 2 {
            return Err(Error::Params("signal cutoff must be at least 2".into()));
        }
        if self.idler_cutoff < 4 {
            return Err(Error::Params(format!(
                "idler cutoff must be at least 4, got {}",
                self.idler_cutoff
            )));
        }
        if let PointerKind::SqueezedVacuum { eta, .. } = self.pointer {
            if eta < 0.0 {
                return Err(Error::Params("squeezing strength must be >= 0".into()));
            }
        }
        Ok(())
    }

    pub fn with_pointer(mut self, pointer: PointerKind) -> Self {
        self.pointer = pointer;
        self
    }

    /// Cutoff actually used for the signal mode: the stored default, expanded
    /// if the pointer needs more room.
    pub fn effective_signal_cutoff(&self) -> usize {
        let mut c = self.signal_cutoff.max(self.pointer.required_cutoff());
        if matches!(self.pointer, PointerKind::SqueezedVacuum { .. }) && c % 2 != 0 {
            c += 1;
        }
        c
    }

    pub fn signal_space(&self) -> Result<ModeSpace> {
        ModeSpace::new(self.effective_signal_cutoff())
    }

    pub fn idler_space(&self) -> Result<ModeSpace> {
        ModeSpace::new(self.idler_cutoff)
    }

    pub fn build_pointer(&self) -> Result<StateVector> {
        PointerInput::new(self.pointer, self.signal_space()?).build()
    }
}

/// Beam-splitter scattering description with |T|^2 + |R|^2 = 1.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BeamSplitterSpec {
    pub theta: f64,
    pub phi_t: f64,
    pub phi_r: f64,
}

impl BeamSplitterSpec {
    pub fn new(theta: f64, phi_t: f64, phi_r: f64) -> Self {
        BeamSplitterSpec { theta, phi_t, phi_r }
    }

    /// The symmetric 50:50 splitter used by the detection stage.
    pub fn balanced_symmetric() -> Self {
        BeamSplitterSpec::new(std::f64::consts::FRAC_PI_4, 0.0, std::f64::consts::FRAC_PI_2)
    }

    pub fn transmittance(&self) -> C64 {
        C64::from_polar(self.theta.cos(), self.phi_t)
    }

    pub fn reflectance(&self) -> C64 {
        C64::from_polar(self.theta.sin(), self.phi_r)
    }

    /// The 2x2 scattering matrix mapping input to output mode operators.
    pub fn scattering_matrix(&self) -> [[C64; 2]; 2] {
        let t = self.transmittance();
        let r = self.reflectance();
        [[t, r], [-r.conj(), t.conj()]]
    }

    /// Fock-space unitary V with V^dagger a_k V = sum_j U_kj a_j.
    ///
    /// The scattering matrix is in SU(2); it is diagonalized analytically and
    /// the bilinear generator sum_jk H_jk a_j^dagger a_k is exponentiated.
    pub fn fock_unitary(&self, space_a: ModeSpace, space_b: ModeSpace) -> Result<Operator> {
        let u = self.scattering_matrix();
        // Eigen-decomposition of the unitary 2x2 block: U = W diag(e^{i l}) W^dag.
        // H = -i log U then has the same eigenvectors with eigenvalues l.
        let tr = u[0][0] + u[1][1];
        let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
        let disc = (tr * tr - det * C64::new(4.0, 0.0)).sqrt();
        let l1 = (tr + disc) * C64::new(0.5, 0.0);
        let l2 = (tr - disc) * C64::new(0.5, 0.0);
        let phase = |l: C64| C64::new(l.im.atan2(l.re), 0.0);
        let (t1, t2) = (phase(l1), phase(l2));
        // Eigenvectors of U for l1 and l2.
        let (v1, v2) = if u[0][1].norm() > 1e-14 {
            (
                [u[0][1], l1 - u[0][0]],
                [u[0][1], l2 - u[0][0]],
            )
        } else if u[1][0].norm() > 1e-14 {
            (
                [l1 - u[1][1], u[1][0]],
                [l2 - u[1][1], u[1][0]],
            )
        } else {
            ([C64::new(1.0, 0.0), C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), C64::new(1.0, 0.0)])
        };
        let norm = |v: [C64; 2]| {
            let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            [v[0] / n, v[1] / n]
        };
        let (v1, v2) = (norm(v1), norm(v2));
        // H_jk = sum_m theta_m v_m[j] v_m[k]^* , so that -iH generates U.
        let mut h = [[C64::new(0.0, 0.0); 2]; 2];
        for j in 0..2 {
            for k in 0..2 {
                h[j][k] = t1 * v1[j] * v1[k].conj() + t2 * v2[j] * v2[k].conj();
            }
        }
        let a = annihilator(space_a).tensor(&identity(space_b));
        let b = identity(space_a).tensor(&annihilator(space_b));
        let modes = [a, b];
        let mut gen: Option<Operator> = None;
        for j in 0..2 {
            for k in 0..2 {
                let term = modes[j]
                    .dagger()
                    .matmul(&modes[k])?
                    .scale(h[j][k] * C64::new(0.0, 1.0));
                gen = Some(match gen {
                    None => term,
                    Some(g) => g.add(&term)?,
                });
            }
        }
        matrix_exp(&gen.expect("two modes"), DEFAULT_EXP_TOL)
    }
}

/// Weak values of the idler quadratures A and B between the pre- and
/// post-selected states.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WeakValues {
    pub a: C64,
    pub b: C64,
}

/// Amplitudes of the transmitted and reflected arms after the unbalanced
/// splitter: (alpha (1-eps)/sqrt2, i alpha (1+eps)/sqrt2).
pub fn preselection_amplitudes(alpha: C64, epsilon: f64) -> (C64, C64) {
    let r = 2f64.sqrt().recip();
    let t = alpha * C64::new(r * (1.0 - epsilon), 0.0);
    let refl = alpha * C64::new(0.0, r * (1.0 + epsilon));
    (t, refl)
}

/// First-order weak values: A_w = alpha/2 - 1/(2 alpha eps),
/// B_w = i/(2 alpha eps) + i alpha/2.
pub fn weak_values(alpha: C64, epsilon: f64) -> Result<WeakValues> {
    if alpha.norm() * epsilon.abs() == 0.0 {
        return Err(Error::OrthogonalPostselection);
    }
    let half = C64::new(0.5, 0.0);
    let inv = (alpha * C64::new(2.0 * epsilon, 0.0)).inv();
    let i = C64::new(0.0, 1.0);
    Ok(WeakValues {
        a: alpha * half - inv,
        b: i * inv + i * alpha * half,
    })
}

/// Zeroth-order success probability |alpha eps|^2 of the single-photon click.
pub fn postselection_probability(alpha: C64, epsilon: f64) -> f64 {
    (alpha.norm() * epsilon).powi(2)
}

/// Coefficient record of the conditional superposition.
///
/// Sign convention: the conditional state is
/// `direct |phi> - photon_subtracted a|phi> - photon_added a^dagger|phi>`
/// (for a coherent pointer the a-term folds into `direct`).
#[derive(Debug, Clone, Copy, Serialize)]
pub enum ConditionalCoefficients {
    CoherentPointer { direct: C64, photon_added: C64 },
    SqueezedPointer {
        direct: C64,
        photon_subtracted: C64,
        photon_added: C64,
    },
}

/// Normalized conditional pointer state plus success-probability bookkeeping.
#[derive(Debug, Clone)]
pub struct ConditionalOutput {
    pub state: StateVector,
    /// Zeroth-order click probability |alpha eps|^2.
    pub p_zeroth: f64,
    /// Squared norm of the unnormalized conditional vector times its branch
    /// weight (first-order route) or of the exact contraction (exact route).
    pub p_model: f64,
    pub coefficients: ConditionalCoefficients,
}

fn conditional_coefficients(params: &ProtocolParams) -> Result<ConditionalCoefficients> {
    let g = C64::new(params.g, 0.0);
    let root2 = C64::new(2f64.sqrt(), 0.0);
    let added = g / (root2 * params.alpha * C64::new(params.epsilon, 0.0));
    Ok(match params.pointer {
        PointerKind::Vacuum => ConditionalCoefficients::CoherentPointer {
            direct: C64::new(1.0, 0.0),
            photon_added: added,
        },
        PointerKind::Coherent { beta } => ConditionalCoefficients::CoherentPointer {
            direct: C64::new(1.0, 0.0) - g * beta * params.alpha / root2,
            photon_added: added,
        },
        PointerKind::SqueezedVacuum { .. } => ConditionalCoefficients::SqueezedPointer {
            direct: C64::new(1.0, 0.0),
            photon_subtracted: g * params.alpha / root2,
            photon_added: added,
        },
    })
}

/// First-order conditional pointer state.
///
/// Applies `1 - (g alpha/sqrt2) a - (g/(sqrt2 alpha eps)) a^dagger` to the
/// pointer input and normalizes. The photon-subtraction term is kept even for
/// squeezed pointers, where it is negligibly small but physical.
pub fn conditional_state_first_order(params: &ProtocolParams) -> Result<ConditionalOutput> {
    params.validate()?;
    weak_values(params.alpha, params.epsilon)?;
    let space = params.signal_space()?;
    let pointer = params.build_pointer()?;
    let a = annihilator(space);
    let root2 = C64::new(2f64.sqrt(), 0.0);
    let sub_coeff = C64::new(params.g, 0.0) * params.alpha / root2;
    let add_coeff = C64::new(params.g, 0.0)
        / (root2 * params.alpha * C64::new(params.epsilon, 0.0));
    let raw = pointer
        .add(&a.apply(&pointer)?.scale(-sub_coeff))?
        .add(&a.dagger().apply(&pointer)?.scale(-add_coeff))?;
    let p_zeroth = postselection_probability(params.alpha, params.epsilon);
    let p_model = p_zeroth * raw.norm_sqr();
    Ok(ConditionalOutput {
        state: raw.normalized()?,
        p_zeroth,
        p_model,
        coefficients: conditional_coefficients(params)?,
    })
}

/// The single-photon detection bra, expressed as a ket on (transmitted,
/// reflected): (|1>_t|0>_r - i|0>_t|1>_r)/sqrt2.
pub fn detection_ket(idler: ModeSpace) -> Result<StateVector> {
    let t1r0 = StateVector::basis(vec![idler, idler], &[1, 0])?;
    let t0r1 = StateVector::basis(vec![idler, idler], &[0, 1])?;
    let r = C64::new(2f64.sqrt().recip(), 0.0);
    t1r0.scale(r).add(&t0r1.scale(C64::new(0.0, -1.0) * r))
}

/// Full three-mode input (signal, transmitted idler, reflected idler).
fn three_mode_input(params: &ProtocolParams) -> Result<StateVector> {
    let idler = params.idler_space()?;
    let (alpha_t, alpha_r) = preselection_amplitudes(params.alpha, params.epsilon);
    let pointer = params.build_pointer()?;
    let ket_t = coherent_state(alpha_t, idler)?;
    let ket_r = coherent_state(alpha_r, idler)?;
    tensor_states(&[&pointer, &ket_t, &ket_r])
}

/// Evolution unitary exp(g(a^dagger b_t^dagger - a b_t)) on signal (x)
/// transmitted idler, extended by the identity on the reflected arm.
fn evolution_unitary(params: &ProtocolParams) -> Result<Operator> {
    let signal = params.signal_space()?;
    let idler = params.idler_space()?;
    let ab = annihilator(signal).tensor(&annihilator(idler));
    let gen = ab.dagger().sub(&ab)?.scale(C64::new(params.g, 0.0));
    let u_st = matrix_exp(&gen, DEFAULT_EXP_TOL)?;
    Ok(u_st.tensor(&identity(idler)))
}

/// Exact conditional pointer state: evolve the three-mode input and contract
/// the single-photon detection bra on the idler arms.
pub fn conditional_state_exact(params: &ProtocolParams) -> Result<ConditionalOutput> {
    params.validate()?;
    weak_values(params.alpha, params.epsilon)?;
    let input = three_mode_input(params)?;
    let evolved = if params.g == 0.0 {
        input
    } else {
        evolution_unitary(params)?.apply(&input)?
    };
    let bra = detection_ket(params.idler_space()?)?;
    let contracted = evolved.contract_bra(&bra, &[1, 2])?;
    let p_model = contracted.norm_sqr();
    Ok(ConditionalOutput {
        state: contracted.normalized()?,
        p_zeroth: postselection_probability(params.alpha, params.epsilon),
        p_model,
        coefficients: conditional_coefficients(params)?,
    })
}

/// Which modeling route to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelPath {
    /// First order in the coupling g (the analytic route).
    FirstOrder,
    /// Full unitary evolution in the truncated space.
    Exact,
}

/// Signal marginal without postselection.
#[derive(Debug, Clone)]
pub struct NonpostselectedPointer {
    pub density: Operator,
    /// Mean of the position-like quadrature q.
    pub q_mean: f64,
    /// Variance of q.
    pub q_variance: f64,
}

/// Pointer marginal after the interaction when no postselection is performed.
///
/// The exact route evolves all three modes and traces out both idler arms.
/// The first-order route keeps terms linear in g, for which the q shift is
/// `g sqrt2 Re[alpha_t]` on top of the input moments.
pub fn nonpostselected_pointer(
    params: &ProtocolParams,
    path: ModelPath,
) -> Result<NonpostselectedPointer> {
    params.validate()?;
    let signal = params.signal_space()?;
    let density = match path {
        ModelPath::Exact => {
            let input = three_mode_input(params)?;
            let evolved = if params.g == 0.0 {
                input
            } else {
                evolution_unitary(params)?.apply(&input)?
            };
            evolved.partial_trace(&[0])?
        }
        ModelPath::FirstOrder => {
            let pointer = params.build_pointer()?;
            let rho0 = pointer.partial_trace(&[0])?;
            let (alpha_t, _) = preselection_amplitudes(params.alpha, params.epsilon);
            // Idler expectations of the quadratures A and B in the coherent arm.
            let mean_a = 2f64.sqrt() * alpha_t.re;
            let mean_b = -(2f64.sqrt()) * alpha_t.im;
            let q = quadrature(signal, 0.0);
            let p = quadrature(signal, std::f64::consts::FRAC_PI_2);
            let h_eff = p
                .scale(C64::new(mean_a, 0.0))
                .sub(&q.scale(C64::new(mean_b, 0.0)))?;
            let comm = h_eff.matmul(&rho0)?.sub(&rho0.matmul(&h_eff)?)?;
            rho0.add(&comm.scale(C64::new(0.0, -params.g)))?
        }
    };
    let q = quadrature(signal, 0.0);
    let q2 = q.matmul(&q)?;
    let q_mean = q.expectation_density(&density)?.re;
    let q_second = q2.expectation_density(&density)?.re;
    Ok(NonpostselectedPointer {
        q_mean,
        q_variance: q_second - q_mean * q_mean,
        density,
    })
}
