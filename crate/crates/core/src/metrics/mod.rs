//! Verification quantities: fidelity, photon statistics, squeezing, Wigner
//! functions and the postselected-vs-plain SNR ratio.

pub mod deviations;
mod wigner;

pub use wigner::{
    wigner_closed_spac, wigner_closed_spasv, wigner_integral_guarded, wigner_numeric,
    wigner_numeric_density, GridSpec, WignerGrid,
};

use crate::error::{Error, Result};
use crate::fock::{annihilator, quadrature, C64, StateVector};
use crate::protocol::{
    conditional_state_exact, conditional_state_first_order, nonpostselected_pointer,
    postselection_probability, preselection_amplitudes, weak_values, ModelPath, ProtocolParams,
};
use crate::states::{coherent_state, PointerKind};
use serde::Serialize;

/// Uhlmann-Jozsa fidelity |<s1|s2>|^2 for pure states.
pub fn fidelity(s1: &StateVector, s2: &StateVector) -> Result<f64> {
    Ok(s1.inner(s2)?.norm_sqr())
}

/// Mean photon number, second-order correlation at zero delay, and Mandel Q.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PhotonStats {
    pub mean_n: f64,
    pub g2: f64,
    pub mandel_q: f64,
}

/// Photon statistics computed by ladder-operator application in the truncated
/// space: mean_n = |a psi|^2 and <a^dag^2 a^2> = |a^2 psi|^2.
///
/// The Mandel Q is taken from the number variance, so the identity
/// `mandel_q = mean_n (g2 - 1)` is a genuine cross-check of two routes.
pub fn photon_stats(state: &StateVector) -> Result<PhotonStats> {
    if state.num_modes() != 1 {
        return Err(Error::ModeMismatch(
            "photon statistics are defined for a single mode".into(),
        ));
    }
    let a = annihilator(state.spaces()[0]);
    let lowered = a.apply(state)?;
    let mean_n = lowered.norm_sqr();
    let twice = a.apply(&lowered)?;
    let pair_moment = twice.norm_sqr();
    let g2 = if mean_n > 1e-300 {
        pair_moment / (mean_n * mean_n)
    } else {
        0.0
    };
    // Number variance route for Q: <n^2> = <a^dag^2 a^2> + <n>.
    let var_n = pair_moment + mean_n - mean_n * mean_n;
    let mandel_q = if mean_n > 1e-300 {
        var_n / mean_n - 1.0
    } else {
        0.0
    };
    Ok(PhotonStats {
        mean_n,
        g2,
        mandel_q,
    })
}

/// Quadrature squeezing S_phi = (Delta X_phi)^2 - 1/2.
///
/// Negative values certify squeezing below the vacuum level; the floor is -1/2.
pub fn squeezing(state: &StateVector, phi: f64) -> Result<f64> {
    if state.num_modes() != 1 {
        return Err(Error::ModeMismatch(
            "squeezing is defined for a single mode".into(),
        ));
    }
    let x = quadrature(state.spaces()[0], phi);
    let applied = x.apply(state)?;
    let mean = state.inner(&applied)?.re;
    let second = applied.norm_sqr();
    Ok(second - mean * mean - 0.5)
}

/// Minimum of S_phi over a uniform scan of quadrature angles.
pub fn min_squeezing(state: &StateVector, angles: usize) -> Result<f64> {
    let mut best = f64::INFINITY;
    for k in 0..angles.max(2) {
        let phi = std::f64::consts::PI * k as f64 / angles.max(2) as f64;
        best = best.min(squeezing(state, phi)?);
    }
    Ok(best)
}

/// Closed-form moments of the conditional coherent-pointer superposition
/// `N (k1 |beta> - k2 a^dag |beta>)`: (mean photon number, <a^dag^2 a^2>).
pub fn spac_photon_moments_closed(beta: C64, k1: C64, k2: C64) -> (f64, f64) {
    let b2 = beta.norm_sqr();
    let nsq = spac_norm_sqr_inv(beta, k1, k2).recip();
    let cross_n = (k1 * k2.conj() * (beta + beta * b2)).re;
    let mean_n = nsq * (k1.norm_sqr() * b2 - 2.0 * cross_n
        + k2.norm_sqr() * (3.0 * b2 + b2 * b2 + 1.0));
    let cross_a2 = (k1 * k2.conj() * (2.0 * b2 * beta + b2 * b2 * beta)).re;
    let pair = nsq * (k1.norm_sqr() * b2 * b2 - 2.0 * cross_a2
        + k2.norm_sqr() * (5.0 * b2 * b2 + b2 * b2 * b2 + 4.0 * b2));
    (mean_n, pair)
}

/// Closed-form inverse squared normalization of `k1|beta> - k2 a^dag|beta>`.
pub fn spac_norm_sqr_inv(beta: C64, k1: C64, k2: C64) -> f64 {
    k1.norm_sqr() + k2.norm_sqr() * (1.0 + beta.norm_sqr()) - 2.0 * (k1 * k2.conj() * beta).re
}

/// Closed-form q-moments of the same superposition: (<q>, <q^2>).
///
/// The cross term of the second moment uses the mixed matrix element
/// <beta| a q^2 |beta>; the three base moments are h1-h3/w1-w3 style
/// coherent-state expectations.
pub fn spac_q_moments_closed(beta: C64, k1: C64, k2: C64) -> (f64, f64) {
    let b2 = beta.norm_sqr();
    let re_b = beta.re;
    let root2 = 2f64.sqrt();
    let nsq = spac_norm_sqr_inv(beta, k1, k2).recip();
    let h1 = root2 * re_b;
    let h2 = root2 * (2.0 + b2) * re_b;
    let h3 = (C64::new(1.0 + b2, 0.0) + beta * beta) / root2;
    let q_mean = nsq
        * (k1.norm_sqr() * h1 + k2.norm_sqr() * h2 - 2.0 * (k1 * k2.conj() * h3).re);
    let re_b2 = (beta * beta).re;
    let w1 = 0.5 * (2.0 * re_b2 + 2.0 * b2 + 1.0);
    let w2 = 0.5 * (3.0 + 7.0 * b2 + 2.0 * b2 * b2 + 2.0 * (3.0 + b2) * re_b2);
    let w3 = (beta * C64::new(3.0 + 2.0 * b2, 0.0)
        + beta * beta * beta
        + beta.conj() * C64::new(2.0 + b2, 0.0))
        * C64::new(0.5, 0.0);
    let q_second = nsq
        * (k1.norm_sqr() * w1 + k2.norm_sqr() * w2 - 2.0 * (k1 * k2.conj() * w3).re);
    (q_mean, q_second)
}

/// Signal-to-noise comparison between the postselected and plain runs.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SnrReport {
    /// Ratio of the two SNRs; the shared run count N cancels.
    pub chi: f64,
    pub r_post_per_sqrt_n: f64,
    pub r_non_per_sqrt_n: f64,
    /// Postselected pointer shift along the measurement axis.
    pub delta_q: f64,
    /// Nonpostselected pointer shift along the same axis.
    pub delta_q_prime: f64,
    pub variance_post: f64,
    pub variance_non: f64,
    /// Success probability used inside sqrt(N P_s) (zeroth order).
    pub p_success: f64,
}

/// SNR ratio chi = [sqrt(P_s) dq / sigma_post] / [dq' / sigma_non] for a
/// coherent pointer of amplitude beta.
///
/// The measurement axis is the quadrature X_theta with theta = arg(beta), so
/// the report is invariant under a global phase of beta. Moments are computed
/// numerically from the selected model path; P_s is the zeroth-order |alpha
/// eps|^2 bookkeeping value.
pub fn snr_ratio(params: &ProtocolParams, beta: C64, path: ModelPath) -> Result<SnrReport> {
    if params.g == 0.0 {
        return Err(Error::Degenerate(
            "both pointer shifts vanish at g = 0; the SNR ratio is undefined",
        ));
    }
    let run = params.with_pointer(PointerKind::Coherent { beta });
    run.validate()?;
    weak_values(run.alpha, run.epsilon)?;
    let axis = if beta.norm() > 0.0 { beta.arg() } else { 0.0 };
    let space = run.signal_space()?;
    let x = quadrature(space, axis);
    let x2 = x.matmul(&x)?;

    let reference = coherent_state(beta, space)?;
    let base_mean = x.expectation(&reference)?.re;

    let post = match path {
        ModelPath::FirstOrder => conditional_state_first_order(&run)?,
        ModelPath::Exact => conditional_state_exact(&run)?,
    };
    let mean_post = x.expectation(&post.state)?.re;
    let second_post = x2.expectation(&post.state)?.re;
    let variance_post = second_post - mean_post * mean_post;
    let delta_q = mean_post - base_mean;

    let non = nonpostselected_pointer(&run, path)?;
    let mean_non = x.expectation_density(&non.density)?.re;
    let second_non = x2.expectation_density(&non.density)?.re;
    let variance_non = second_non - mean_non * mean_non;
    let delta_q_prime = mean_non - base_mean;
    if delta_q_prime == 0.0 {
        return Err(Error::Degenerate(
            "the nonpostselected pointer shift vanishes; the SNR ratio is undefined",
        ));
    }

    let p_success = postselection_probability(run.alpha, run.epsilon);
    let r_post = p_success.sqrt() * delta_q / variance_post.sqrt();
    let r_non = delta_q_prime / variance_non.sqrt();
    Ok(SnrReport {
        chi: r_post / r_non,
        r_post_per_sqrt_n: r_post,
        r_non_per_sqrt_n: r_non,
        delta_q,
        delta_q_prime,
        variance_post,
        variance_non,
        p_success,
    })
}

/// First-order nonpostselected shift along the axis-theta quadrature:
/// g sqrt2 Re[alpha_t e^{i theta}]. Used as a closed-form cross-check.
pub fn nonpostselected_shift_closed(params: &ProtocolParams, axis: f64) -> f64 {
    let (alpha_t, _) = preselection_amplitudes(params.alpha, params.epsilon);
    params.g * 2f64.sqrt() * (alpha_t * C64::from_polar(1.0, axis)).re
}
