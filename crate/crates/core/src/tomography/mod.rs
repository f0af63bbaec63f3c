//! Experimental configurations, shot sampling, reconstruction and cost accounting.
//!
//! [`run_protocol`] ties the pieces together: it plans the configurations for a
//! set of requested PTM entries, evaluates each one (exactly or with a finite
//! shot budget) and recombines the outcomes with the protocol's reconstruction
//! rule. Every configuration draws from its own RNG stream seeded from
//! `(master_seed, protocol, i, j)`, so results do not depend on evaluation order.

mod params;
mod plan;
mod prior;
mod reconstruct;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{KrausChannel, PauliTransferMatrix};
use crate::pauli::{pauli_expectation, vectorize, DensityMatrix, PauliString};
use crate::states::{protocol_state, Protocol};
use crate::{Error, Result, PSD_TOL};

pub use params::{extract_corr_depol_params, CorrDepolParams};
pub use plan::{
    all_entries, configurations_per_entry, entry_configurations, entry_cost, full_plan_sizes,
    plan_configurations, scaling_row, sqpt_column_nnz, sqpt_recombination, unitality_test_entries,
    Configuration, FullPlanSizes, Plan, ScalingRow, COST_MAX_QUBITS,
};
pub use prior::{KnownEntry, Prior, PriorKind};
pub use reconstruct::{
    outcome_matrix, reconstruct_dptm, reconstruct_generic, reconstruct_sqpt, EntryEstimate,
    Measurements,
};

/// Shot budget per configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shots {
    /// Infinite statistics: outcomes are exact expectation values.
    Exact,
    Count(u64),
}

impl fmt::Display for Shots {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shots::Exact => f.write_str("exact"),
            Shots::Count(n) => write!(f, "{n}"),
        }
    }
}

impl FromStr for Shots {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("exact") {
            return Ok(Shots::Exact);
        }
        let n: u64 = s.parse().map_err(|_| {
            Error::Malformed(format!("shots must be an integer or \"exact\", got {s:?}"))
        })?;
        if n < 2 {
            return Err(Error::InvalidParameter {
                name: "shots",
                value: n as f64,
                reason: "at least 2 shots are needed for a standard error",
            });
        }
        Ok(Shots::Count(n))
    }
}

impl Serialize for Shots {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Shots::Exact => s.serialize_str("exact"),
            Shots::Count(n) => s.serialize_u64(*n),
        }
    }
}

impl<'de> Deserialize<'de> for Shots {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Count(u64),
            Label(String),
        }
        match Repr::deserialize(d)? {
            Repr::Count(n) => Ok(Shots::Count(n)),
            Repr::Label(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// A configuration outcome. Exact estimates have `std_error = 0` and no shots.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
    pub shots: Option<u64>,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            std_error: 0.0,
            shots: None,
        }
    }
}

/// `⟨P_i⟩_{Φ(ρ_j)}` as a dense trace.
pub fn exact_expectation(ch: &KrausChannel, i: usize, j: usize, protocol: Protocol) -> Result<f64> {
    let n = ch.n();
    let p = PauliString::new(n, i)?;
    let out = ch.apply(&protocol_state(protocol, j, n)?)?;
    pauli_expectation(&p, &out)
}

/// `(Γ · vec(ρ_j))_i`.
pub fn exact_expectation_via_ptm(
    ptm: &PauliTransferMatrix,
    i: usize,
    j: usize,
    protocol: Protocol,
) -> Result<f64> {
    let n = ptm.n();
    PauliString::new(n, i)?;
    let r = vectorize(&protocol_state(protocol, j, n)?);
    Ok(ptm.matrix().row(i).transpose().dot(r.coeffs()))
}

/// Evaluates both routes and fails if they disagree by more than `1e-10`.
pub fn exact_expectation_checked(
    ch: &KrausChannel,
    ptm: &PauliTransferMatrix,
    i: usize,
    j: usize,
    protocol: Protocol,
) -> Result<f64> {
    let dense = exact_expectation(ch, i, j, protocol)?;
    let linear = exact_expectation_via_ptm(ptm, i, j, protocol)?;
    let gap = (dense - linear).abs();
    if gap > 1e-10 {
        return Err(Error::Inconsistent(gap));
    }
    Ok(dense)
}

/// Draws `shots` ±1 outcomes with `p(+1) = (1 + expectation)/2`.
///
/// `value = (n₊ − n₋)/N`, `std_error = √((1 − value²)/N)`.
pub fn sample_expectation(expectation: f64, shots: u64, seed: u64) -> Result<Estimate> {
    if shots < 2 {
        return Err(Error::InvalidParameter {
            name: "shots",
            value: shots as f64,
            reason: "at least 2 shots are needed for a standard error",
        });
    }
    let p_plus = (1.0 + expectation) / 2.0;
    if !(-PSD_TOL..=1.0 + PSD_TOL).contains(&p_plus) {
        return Err(Error::InvalidProbability(p_plus));
    }
    let p_plus = p_plus.clamp(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_plus = Binomial::new(shots, p_plus)
        .map_err(|_| Error::InvalidProbability(p_plus))?
        .sample(&mut rng);
    let n = shots as f64;
    let value = (2.0 * n_plus as f64 - n) / n;
    let std_error = ((1.0 - value * value).max(0.0) / n).sqrt();
    Ok(Estimate {
        value,
        std_error,
        shots: Some(shots),
    })
}

/// Samples one configuration of `ch`. The identity observable is rejected:
/// its outcome is fixed by normalization and is never sampled.
pub fn sample_configuration(
    ch: &KrausChannel,
    cfg: &Configuration,
    shots: u64,
    seed: u64,
) -> Result<Estimate> {
    if cfg.i == 0 {
        return Err(Error::InvalidParameter {
            name: "i",
            value: 0.0,
            reason: "the identity observable is never sampled",
        });
    }
    let exact = exact_expectation(ch, cfg.i, cfg.j, cfg.protocol)?;
    sample_expectation(exact, shots, seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable per-configuration seed.
pub fn configuration_seed(master_seed: u64, cfg: &Configuration) -> u64 {
    let tag = match cfg.protocol {
        Protocol::Dptm => 0x4450_544d,
        Protocol::Sqpt => 0x5351_5054,
    };
    let mut h = splitmix64(master_seed);
    for word in [tag, cfg.i as u64, cfg.j as u64] {
        h = splitmix64(h ^ word);
    }
    h
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub i: usize,
    pub j: usize,
    pub value: f64,
    pub std_error: f64,
}

/// Output of one protocol run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TomographyResult {
    pub protocol: Protocol,
    pub n: usize,
    pub prior: Prior,
    pub master_seed: u64,
    pub shots: Shots,
    pub configurations: Vec<Configuration>,
    pub configuration_count: usize,
    pub measurements: Vec<MeasurementRecord>,
    pub entries: Vec<EntryEstimate>,
}

impl TomographyResult {
    pub fn entry(&self, i: usize, j: usize) -> Option<&EntryEstimate> {
        self.entries.iter().find(|e| e.i == i && e.j == j)
    }

    pub fn estimate(&self, i: usize, j: usize) -> Option<Estimate> {
        self.entry(i, j).map(|e| Estimate {
            value: e.value,
            std_error: e.std_error,
            shots: match self.shots {
                Shots::Exact => None,
                Shots::Count(n) => Some(n),
            },
        })
    }
}

/// Outcome of every configuration of `plan`, keyed by `(i, j)`.
pub fn measure_plan(
    ch: &KrausChannel,
    plan: &Plan,
    shots: Shots,
    master_seed: u64,
) -> Result<Measurements> {
    let n = ch.n();
    if plan.n != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: plan.n,
        });
    }
    let mut inputs: Vec<(Protocol, usize)> = plan
        .configurations
        .iter()
        .map(|c| (c.protocol, c.j))
        .collect();
    inputs.sort_unstable();
    inputs.dedup();
    let outputs: BTreeMap<(Protocol, usize), DensityMatrix> = inputs
        .par_iter()
        .map(|&(protocol, j)| Ok(((protocol, j), ch.apply(&protocol_state(protocol, j, n)?)?)))
        .collect::<Result<_>>()?;

    plan.configurations
        .par_iter()
        .map(|cfg| {
            let out = &outputs[&(cfg.protocol, cfg.j)];
            let exact = pauli_expectation(&PauliString::new(n, cfg.i)?, out)?;
            let est = match shots {
                // the identity observable reads the trace; nothing to sample
                _ if cfg.i == 0 => Estimate::exact(exact),
                Shots::Exact => Estimate::exact(exact),
                Shots::Count(k) => {
                    sample_expectation(exact, k, configuration_seed(master_seed, cfg))?
                }
            };
            Ok(((cfg.i, cfg.j), est))
        })
        .collect()
}

/// Reconstructs the requested entries from a measurement map.
pub fn reconstruct(
    protocol: Protocol,
    entries: &[(usize, usize)],
    measurements: &Measurements,
    prior: &Prior,
    n: usize,
) -> Result<Vec<EntryEstimate>> {
    match protocol {
        Protocol::Dptm => reconstruct_dptm(entries, measurements, prior),
        Protocol::Sqpt => reconstruct_sqpt(entries, measurements, prior, n),
    }
}

/// Plan, measure and reconstruct.
pub fn run_protocol(
    ch: &KrausChannel,
    entries: &[(usize, usize)],
    protocol: Protocol,
    prior: &Prior,
    shots: Shots,
    master_seed: u64,
) -> Result<TomographyResult> {
    if let Shots::Count(k) = shots {
        if k < 2 {
            return Err(Error::InvalidParameter {
                name: "shots",
                value: k as f64,
                reason: "at least 2 shots are needed for a standard error",
            });
        }
    }
    let n = ch.n();
    let plan = plan_configurations(entries, protocol, prior, n)?;
    let measurements = measure_plan(ch, &plan, shots, master_seed)?;
    let estimates = reconstruct(protocol, &plan.entries, &measurements, prior, n)?;
    Ok(TomographyResult {
        protocol,
        n,
        prior: prior.clone(),
        master_seed,
        shots,
        configuration_count: plan.configurations.len(),
        configurations: plan.configurations,
        measurements: measurements
            .iter()
            .map(|(&(i, j), e)| MeasurementRecord {
                i,
                j,
                value: e.value,
                std_error: e.std_error,
            })
            .collect(),
        entries: estimates,
    })
}

/// Side-by-side view of one entry across protocols.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub i: usize,
    pub j: usize,
    pub analytic: Option<f64>,
    pub dptm: Option<EntryEstimate>,
    pub sqpt: Option<EntryEstimate>,
    pub dptm_deviation: Option<f64>,
    pub sqpt_deviation: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub dptm_configurations: usize,
    pub sqpt_configurations: usize,
    pub rows: Vec<ComparisonRow>,
}

pub fn compare(
    dptm: &TomographyResult,
    sqpt: &TomographyResult,
    analytic: Option<&PauliTransferMatrix>,
) -> Comparison {
    let mut keys: Vec<(usize, usize)> = dptm
        .entries
        .iter()
        .chain(&sqpt.entries)
        .map(|e| (e.i, e.j))
        .collect();
    keys.sort_unstable();
    keys.dedup();
    let rows = keys
        .into_iter()
        .map(|(i, j)| {
            let reference = analytic.map(|g| g.entry(i, j));
            let d = dptm.entry(i, j).copied();
            let q = sqpt.entry(i, j).copied();
            let dev = |e: Option<EntryEstimate>| Some((e?.value - reference?).abs());
            ComparisonRow {
                i,
                j,
                analytic: reference,
                dptm_deviation: dev(d),
                sqpt_deviation: dev(q),
                dptm: d,
                sqpt: q,
            }
        })
        .collect();
    Comparison {
        dptm_configurations: dptm.configuration_count,
        sqpt_configurations: sqpt.configuration_count,
        rows,
    }
}
