//! Dense complex linear algebra over truncated Fock spaces.
//!
//! Everything else in the crate is built from these primitives: mode spaces,
//! state vectors over tensor products of modes, dense operators, Kronecker
//! composition, bra contraction and partial traces. The basis ordering is
//! row-major over the ordered mode list, first-listed mode slowest.

mod ops;

pub use ops::{
    annihilator, coherent_cutoff_guard, creator, displacement, identity, matrix_exp,
    number_operator, quadrature, squeeze_op, squeezed_cutoff_guard, DEFAULT_EXP_TOL,
};

use crate::error::{Error, Result};
use ndarray::{Array1, Array2};
use num_complex::Complex64;

pub type C64 = Complex64;

/// A single bosonic mode truncated to the basis |0>..|cutoff-1>.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeSpace {
    cutoff: usize,
}

impl ModeSpace {
    pub fn new(cutoff: usize) -> Result<Self> {
        if cutoff < 2 {
            return Err(Error::Params(format!(
                "mode cutoff must be at least 2, got {cutoff}"
            )));
        }
        Ok(ModeSpace { cutoff })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.cutoff
    }
}

fn total_dim(spaces: &[ModeSpace]) -> usize {
    spaces.iter().map(|s| s.dim()).product()
}

/// Row-major strides for the given mode list (mode 0 slowest).
fn strides(spaces: &[ModeSpace]) -> Vec<usize> {
    let n = spaces.len();
    let mut st = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        st[i] = st[i + 1] * spaces[i + 1].dim();
    }
    st
}

/// Complex amplitude vector over a truncated Fock basis of one mode or a
/// tensor product of modes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    spaces: Vec<ModeSpace>,
    amps: Array1<C64>,
}

impl StateVector {
    pub fn new(spaces: Vec<ModeSpace>, amps: Array1<C64>) -> Result<Self> {
        let dim = total_dim(&spaces);
        if spaces.is_empty() {
            return Err(Error::Params("state needs at least one mode".into()));
        }
        if amps.len() != dim {
            return Err(Error::DimensionMismatch {
                left: amps.len(),
                right: dim,
            });
        }
        Ok(StateVector { spaces, amps })
    }

    /// Basis state |n_0, n_1, ...> over the given modes.
    pub fn basis(spaces: Vec<ModeSpace>, occupations: &[usize]) -> Result<Self> {
        if occupations.len() != spaces.len() {
            return Err(Error::ModeMismatch(format!(
                "{} occupations for {} modes",
                occupations.len(),
                spaces.len()
            )));
        }
        for (n, s) in occupations.iter().zip(&spaces) {
            if *n >= s.cutoff() {
                return Err(Error::Index {
                    index: *n,
                    cutoff: s.cutoff(),
                });
            }
        }
        let st = strides(&spaces);
        let idx: usize = occupations.iter().zip(&st).map(|(n, s)| n * s).sum();
        let mut amps = Array1::zeros(total_dim(&spaces));
        amps[idx] = C64::new(1.0, 0.0);
        Ok(StateVector { spaces, amps })
    }

    pub fn vacuum(spaces: Vec<ModeSpace>) -> Result<Self> {
        let occ = vec![0usize; spaces.len()];
        Self::basis(spaces, &occ)
    }

    pub fn spaces(&self) -> &[ModeSpace] {
        &self.spaces
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn num_modes(&self) -> usize {
        self.spaces.len()
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amps
    }

    pub fn amp(&self, i: usize) -> C64 {
        self.amps[i]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Inner product <self|other>.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.spaces != other.spaces {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Returns the state scaled to unit norm.
    pub fn normalized(&self) -> Result<StateVector> {
        let n = self.norm();
        if n < 1e-300 {
            return Err(Error::Degenerate("cannot normalize a zero vector"));
        }
        let mut out = self.clone();
        out.amps.mapv_inplace(|c| c / n);
        Ok(out)
    }

    pub fn scale(&self, factor: C64) -> StateVector {
        let mut out = self.clone();
        out.amps.mapv_inplace(|c| c * factor);
        out
    }

    pub fn add(&self, other: &StateVector) -> Result<StateVector> {
        if self.spaces != other.spaces {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        let mut out = self.clone();
        out.amps = &out.amps + &other.amps;
        Ok(out)
    }

    /// Kronecker product with another state; `self`'s modes come first.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut spaces = self.spaces.clone();
        spaces.extend_from_slice(&other.spaces);
        let mut amps = Array1::zeros(self.dim() * other.dim());
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            for (j, b) in other.amps.iter().enumerate() {
                amps[i * other.dim() + j] = *a * *b;
            }
        }
        StateVector { spaces, amps }
    }

    /// Partial inner product with a bra living on a subset of modes.
    ///
    /// `bra` is given as a ket; its amplitudes are conjugated here. The result
    /// is the (unnormalized) state on the remaining modes; its squared norm is
    /// the postselection probability for that branch.
    pub fn contract_bra(&self, bra: &StateVector, bra_modes: &[usize]) -> Result<StateVector> {
        if bra_modes.len() != bra.num_modes() {
            return Err(Error::ModeMismatch(format!(
                "bra has {} modes but {} indices were given",
                bra.num_modes(),
                bra_modes.len()
            )));
        }
        if bra_modes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::ModeMismatch(
                "bra mode indices must be strictly increasing".into(),
            ));
        }
        if bra_modes.iter().any(|&m| m >= self.num_modes()) {
            return Err(Error::ModeMismatch("bra mode index out of range".into()));
        }
        for (k, &m) in bra_modes.iter().enumerate() {
            if bra.spaces[k] != self.spaces[m] {
                return Err(Error::ModeMismatch(format!(
                    "bra mode {k} has cutoff {} but state mode {m} has cutoff {}",
                    bra.spaces[k].cutoff(),
                    self.spaces[m].cutoff()
                )));
            }
        }
        if bra_modes.len() == self.num_modes() {
            return Err(Error::ModeMismatch(
                "bra covers every mode; use inner() for a full overlap".into(),
            ));
        }

        let kept: Vec<usize> = (0..self.num_modes())
            .filter(|m| !bra_modes.contains(m))
            .collect();
        let kept_spaces: Vec<ModeSpace> = kept.iter().map(|&m| self.spaces[m]).collect();
        let out_dim = total_dim(&kept_spaces);
        let mut out = Array1::<C64>::zeros(out_dim);

        let st = strides(&self.spaces);
        let bra_st = strides(&bra.spaces);
        let kept_st = strides(&kept_spaces);
        let dims: Vec<usize> = self.spaces.iter().map(|s| s.dim()).collect();

        for (idx, a) in self.amps.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            // Decompose the flat index into per-mode occupations.
            let mut bra_idx = 0usize;
            let mut kept_idx = 0usize;
            let mut k_bra = 0usize;
            let mut k_kept = 0usize;
            for m in 0..dims.len() {
                let digit = (idx / st[m]) % dims[m];
                if k_bra < bra_modes.len() && bra_modes[k_bra] == m {
                    bra_idx += digit * bra_st[k_bra];
                    k_bra += 1;
                } else {
                    kept_idx += digit * kept_st[k_kept];
                    k_kept += 1;
                }
            }
            out[kept_idx] += bra.amps[bra_idx].conj() * *a;
        }

        Ok(StateVector {
            spaces: kept_spaces,
            amps: out,
        })
    }

    /// Reduced density matrix over the `keep` modes (in their original order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Operator> {
        if keep.is_empty() {
            return Err(Error::ModeMismatch("must keep at least one mode".into()));
        }
        if keep.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::ModeMismatch(
                "kept mode indices must be strictly increasing".into(),
            ));
        }
        if keep.iter().any(|&m| m >= self.num_modes()) {
            return Err(Error::ModeMismatch("kept mode index out of range".into()));
        }
        let env: Vec<usize> = (0..self.num_modes())
            .filter(|m| !keep.contains(m))
            .collect();
        let kept_spaces: Vec<ModeSpace> = keep.iter().map(|&m| self.spaces[m]).collect();
        let kept_dim = total_dim(&kept_spaces);
        let env_spaces: Vec<ModeSpace> = env.iter().map(|&m| self.spaces[m]).collect();
        let env_dim = total_dim(&env_spaces).max(1);

        // Rearrange amplitudes into a (kept, env) matrix; rho = M M^dagger.
        let st = strides(&self.spaces);
        let kept_st = strides(&kept_spaces);
        let env_st = if env.is_empty() {
            Vec::new()
        } else {
            strides(&env_spaces)
        };
        let dims: Vec<usize> = self.spaces.iter().map(|s| s.dim()).collect();
        let mut m = Array2::<C64>::zeros((kept_dim, env_dim));
        for (idx, a) in self.amps.iter().enumerate() {
            let mut ki = 0usize;
            let mut ei = 0usize;
            let mut k_keep = 0usize;
            let mut k_env = 0usize;
            for mode in 0..dims.len() {
                let digit = (idx / st[mode]) % dims[mode];
                if k_keep < keep.len() && keep[k_keep] == mode {
                    ki += digit * kept_st[k_keep];
                    k_keep += 1;
                } else {
                    ei += digit * env_st[k_env];
                    k_env += 1;
                }
            }
            m[(ki, ei)] = *a;
        }
        let mh = m.t().mapv(|c| c.conj());
        let rho = m.dot(&mh);
        Operator::from_matrix(kept_spaces, rho)
    }
}

/// Dense complex matrix acting on a mode space or tensor space.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    spaces: Vec<ModeSpace>,
    mat: Array2<C64>,
}

impl Operator {
    pub fn from_matrix(spaces: Vec<ModeSpace>, mat: Array2<C64>) -> Result<Self> {
        let dim = total_dim(&spaces);
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::DimensionMismatch {
                left: mat.nrows(),
                right: dim,
            });
        }
        Ok(Operator { spaces, mat })
    }

    pub fn spaces(&self) -> &[ModeSpace] {
        &self.spaces
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.mat
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.spaces != self.spaces {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: state.dim(),
            });
        }
        Ok(StateVector {
            spaces: state.spaces.clone(),
            amps: self.mat.dot(&state.amps),
        })
    }

    pub fn matmul(&self, other: &Operator) -> Result<Operator> {
        if self.spaces != other.spaces {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(Operator {
            spaces: self.spaces.clone(),
            mat: self.mat.dot(&other.mat),
        })
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Operator {
        Operator {
            spaces: self.spaces.clone(),
            mat: self.mat.t().mapv(|c| c.conj()),
        }
    }

    pub fn scale(&self, factor: C64) -> Operator {
        Operator {
            spaces: self.spaces.clone(),
            mat: self.mat.mapv(|c| c * factor),
        }
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        if self.spaces != other.spaces {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(Operator {
            spaces: self.spaces.clone(),
            mat: &self.mat + &other.mat,
        })
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// Kronecker product; `self`'s modes come first.
    pub fn tensor(&self, other: &Operator) -> Operator {
        let mut spaces = self.spaces.clone();
        spaces.extend_from_slice(&other.spaces);
        Operator {
            spaces,
            mat: ndarray::linalg::kron(&self.mat, &other.mat),
        }
    }

    /// <state|self|state>.
    pub fn expectation(&self, state: &StateVector) -> Result<C64> {
        let applied = self.apply(state)?;
        state.inner(&applied)
    }

    /// tr(self * rho) for a density matrix on the same space.
    pub fn expectation_density(&self, rho: &Operator) -> Result<C64> {
        if self.spaces != rho.spaces {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: rho.dim(),
            });
        }
        let prod = self.mat.dot(&rho.mat);
        Ok(prod.diag().iter().sum())
    }

    pub fn trace(&self) -> C64 {
        self.mat.diag().iter().sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Kronecker composite of a list of states, honoring the ordering convention.
pub fn tensor_states(parts: &[&StateVector]) -> Result<StateVector> {
    let (first, rest) = parts
        .split_first()
        .ok_or_else(|| Error::Params("tensor of an empty list".into()))?;
    let mut acc = (*first).clone();
    for p in rest {
        acc = acc.tensor(p);
    }
    Ok(acc)
}

/// Kronecker composite of a list of operators.
pub fn tensor_operators(parts: &[&Operator]) -> Result<Operator> {
    let (first, rest) = parts
        .split_first()
        .ok_or_else(|| Error::Params("tensor of an empty list".into()))?;
    let mut acc = (*first).clone();
    for p in rest {
        acc = acc.tensor(p);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests;
