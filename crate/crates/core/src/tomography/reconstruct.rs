//! From configuration outcomes to PTM entries.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::plan::sqpt_recombination;
use super::prior::Prior;
use super::Estimate;
use crate::{Error, Result};

/// Measured outcomes `M_ij = ⟨P_i⟩_{Φ(ρ_j)}`, keyed by `(i, j)`.
pub type Measurements = BTreeMap<(usize, usize), Estimate>;

/// One reconstructed entry `Γ̂_ij`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryEstimate {
    pub i: usize,
    pub j: usize,
    pub value: f64,
    pub std_error: f64,
    /// Configurations combined into this entry (0 when fixed by the prior).
    pub n_configs: usize,
}

fn lookup(m: &Measurements, i: usize, j: usize) -> Result<Estimate> {
    m.get(&(i, j))
        .copied()
        .ok_or(Error::MissingMeasurement { i, j })
}

fn known(i: usize, j: usize, value: f64) -> EntryEstimate {
    EntryEstimate {
        i,
        j,
        value,
        std_error: 0.0,
        n_configs: 0,
    }
}

/// `Γ̂_i0 = M̂_i0`, `Γ̂_ij = M̂_ij − M̂_i0`.
///
/// Entries (or reference values `Γ_i0`) fixed by the prior are used directly,
/// so under a unital prior the identification is `Γ̂_ij = M̂_ij`. Standard errors
/// of subtracted entries add in quadrature; covariance between entries sharing
/// `M̂_i0` is not tracked.
pub fn reconstruct_dptm(
    entries: &[(usize, usize)],
    measurements: &Measurements,
    prior: &Prior,
) -> Result<Vec<EntryEstimate>> {
    entries
        .iter()
        .map(|&(i, j)| {
            if let Some(v) = prior.known_value(i, j) {
                return Ok(known(i, j, v));
            }
            let mij = lookup(measurements, i, j)?;
            if j == 0 {
                return Ok(EntryEstimate {
                    i,
                    j,
                    value: mij.value,
                    std_error: mij.std_error,
                    n_configs: 1,
                });
            }
            let (reference, reference_se, extra) = match prior.known_value(i, 0) {
                Some(v) => (v, 0.0, 0),
                None => {
                    let mi0 = lookup(measurements, i, 0)?;
                    (mi0.value, mi0.std_error, 1)
                }
            };
            Ok(EntryEstimate {
                i,
                j,
                value: mij.value - reference,
                std_error: mij.std_error.hypot(reference_se),
                n_configs: 1 + extra,
            })
        })
        .collect()
}

/// `Γ̂_ij = Σ_k M̂_ik (β_Q⁻¹)^{⊗n}_{kj}` with `SE = √(Σ_k c_k² SE_ik²)`.
pub fn reconstruct_sqpt(
    entries: &[(usize, usize)],
    measurements: &Measurements,
    prior: &Prior,
    n: usize,
) -> Result<Vec<EntryEstimate>> {
    entries
        .iter()
        .map(|&(i, j)| {
            if let Some(v) = prior.known_value(i, j) {
                return Ok(known(i, j, v));
            }
            let terms = sqpt_recombination(j, n);
            let mut value = 0.0;
            let mut var = 0.0;
            for &(k, c) in &terms {
                let m = lookup(measurements, i, k)?;
                value += c * m.value;
                var += c * c * m.std_error * m.std_error;
            }
            Ok(EntryEstimate {
                i,
                j,
                value,
                std_error: var.sqrt(),
                n_configs: terms.len(),
            })
        })
        .collect()
}

/// Generic inversion `Γ = α⁻¹ p β⁻¹` for Pauli measurements (`α = 𝟙`), given the
/// full outcome matrix `p_ij`.
pub fn reconstruct_generic(outcomes: &DMatrix<f64>, beta_inverse: &DMatrix<f64>) -> DMatrix<f64> {
    outcomes * beta_inverse
}

/// Dense outcome matrix from a complete measurement map.
pub fn outcome_matrix(measurements: &Measurements, size: usize) -> Result<DMatrix<f64>> {
    let mut p = DMatrix::zeros(size, size);
    for i in 0..size {
        for j in 0..size {
            p[(i, j)] = lookup(measurements, i, j)?.value;
        }
    }
    Ok(p)
}
