//! Parameter extraction for the two-qubit correlated depolarizing channel,
//! using `Γ₄₄ = 1 − p` and `Γ₆₆ = (1 − p)(μp − p + 1)`.

use serde::{Deserialize, Serialize};

use super::Estimate;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrDepolParams {
    pub p: f64,
    pub p_std_error: f64,
    pub mu: f64,
    pub mu_std_error: f64,
    /// Out-of-range results are reported, not clamped.
    pub warnings: Vec<String>,
}

const DEGENERACY_TOL: f64 = 1e-12;

/// `p = 1 − Γ₄₄`, `μ = (Γ₆₆/Γ₄₄ − 1 + p)/p`, errors by first-order propagation
/// treating the two inputs as independent.
pub fn extract_corr_depol_params(g44: &Estimate, g66: &Estimate) -> Result<CorrDepolParams> {
    let a = g44.value;
    let b = g66.value;
    if a <= DEGENERACY_TOL {
        return Err(Error::Indeterminate("Γ44 must be positive"));
    }
    let p = 1.0 - a;
    if p.abs() <= DEGENERACY_TOL {
        return Err(Error::Indeterminate("p = 0 leaves μ unconstrained"));
    }
    let mu = (b / a - a) / p;

    // ∂μ/∂Γ66 and ∂μ/∂Γ44 of μ(a, b) = (b/a − a)/(1 − a)
    let dmu_db = 1.0 / (a * p);
    let dmu_da = ((-b / (a * a) - 1.0) * p + (b / a - a)) / (p * p);
    let mu_std_error = (dmu_da * g44.std_error).hypot(dmu_db * g66.std_error);

    let mut warnings = Vec::new();
    if !(0.0..=1.0).contains(&p) {
        warnings.push(format!("p = {p} outside [0, 1]"));
    }
    if !(0.0..=1.0).contains(&mu) {
        warnings.push(format!("mu = {mu} outside [0, 1]"));
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(CorrDepolParams {
        p,
        p_std_error: g44.std_error,
        mu,
        mu_std_error,
        warnings,
    })
}
