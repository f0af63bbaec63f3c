//! Configuration planning and cost accounting.
//!
//! A configuration is one (observable `P_i`, input state `ρ_k`) pair. The
//! planner works purely on indices, so cost-only queries accept qubit counts
//! beyond the dense simulation limit.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::prior::Prior;
use crate::states::Protocol;
use crate::{Error, Result};

/// Largest qubit count accepted by the index-only cost functions.
pub const COST_MAX_QUBITS: usize = 15;

pub(crate) fn check_cost_qubits(n: usize) -> Result<()> {
    if (1..=COST_MAX_QUBITS).contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedQubits(n))
    }
}

fn check_entry(i: usize, j: usize, n: usize) -> Result<()> {
    let bound = 1usize << (2 * n);
    for index in [i, j] {
        if index >= bound {
            return Err(Error::IndexOutOfRange { index, n, bound });
        }
    }
    Ok(())
}

/// One (observable, input state) pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Configuration {
    /// Observable Pauli index.
    pub i: usize,
    /// Input-state index within the protocol's family.
    pub j: usize,
    pub protocol: Protocol,
}

// nonzero rows of each single-qubit column of β_Q⁻¹
const COLUMNS: [&[(usize, f64)]; 4] = [
    &[(0, 0.5), (3, 0.5)],
    &[(0, -0.5), (1, 1.0), (3, -0.5)],
    &[(0, -0.5), (2, 1.0), (3, -0.5)],
    &[(0, -0.5), (3, 0.5)],
];

/// Number of nonzeros in column `j` of `(β_Q⁻¹)^{⊗n}`, without expanding it.
pub fn sqpt_column_nnz(j: usize, n: usize) -> usize {
    (0..n)
        .map(|m| COLUMNS[(j >> (2 * (n - 1 - m))) & 3].len())
        .product()
}

/// Column `j` of `(β_Q⁻¹)^{⊗n}` as `(row k, coefficient)` pairs, nonzeros only.
///
/// Built digit by digit from the single-qubit inverse, so it never forms the
/// dense matrix.
pub fn sqpt_recombination(j: usize, n: usize) -> Vec<(usize, f64)> {
    let mut terms = vec![(0usize, 1.0f64)];
    for m in 0..n {
        let digit = (j >> (2 * (n - 1 - m))) & 3;
        terms = terms
            .iter()
            .flat_map(|&(k, c)| COLUMNS[digit].iter().map(move |&(r, v)| (k * 4 + r, c * v)))
            .collect();
    }
    terms
}

/// Configurations that feed entry `Γ_ij` under `prior`, as `(i, k)` pairs.
pub fn entry_configurations(
    protocol: Protocol,
    i: usize,
    j: usize,
    n: usize,
    prior: &Prior,
) -> Result<Vec<(usize, usize)>> {
    check_cost_qubits(n)?;
    check_entry(i, j, n)?;
    if prior.known_value(i, j).is_some() {
        return Ok(Vec::new());
    }
    Ok(match protocol {
        Protocol::Dptm => {
            if j == 0 || prior.known_value(i, 0).is_some() {
                vec![(i, j)]
            } else {
                vec![(i, j), (i, 0)]
            }
        }
        Protocol::Sqpt => sqpt_recombination(j, n)
            .into_iter()
            .map(|(k, _)| (i, k))
            .collect(),
    })
}

/// Number of configurations needed for `Γ_ij` alone.
pub fn entry_cost(
    protocol: Protocol,
    i: usize,
    j: usize,
    n: usize,
    prior: &Prior,
) -> Result<usize> {
    if protocol == Protocol::Sqpt {
        check_cost_qubits(n)?;
        check_entry(i, j, n)?;
        return Ok(if prior.known_value(i, j).is_some() {
            0
        } else {
            sqpt_column_nnz(j, n)
        });
    }
    Ok(entry_configurations(protocol, i, j, n, prior)?.len())
}

/// A deduplicated set of configurations covering a set of requested entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Plan {
    pub protocol: Protocol,
    pub n: usize,
    pub entries: Vec<(usize, usize)>,
    pub configurations: Vec<Configuration>,
}

impl Plan {
    pub fn len(&self) -> usize {
        self.configurations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configurations.is_empty()
    }
}

pub fn plan_configurations(
    entries: &[(usize, usize)],
    protocol: Protocol,
    prior: &Prior,
    n: usize,
) -> Result<Plan> {
    let mut set = BTreeSet::new();
    let mut uniq = BTreeSet::new();
    for &(i, j) in entries {
        uniq.insert((i, j));
        set.extend(entry_configurations(protocol, i, j, n, prior)?);
        if prior.check_unitality && j != 0 {
            // validation measurement of the non-unital column
            set.insert((i, 0));
        }
    }
    Ok(Plan {
        protocol,
        n,
        entries: uniq.into_iter().collect(),
        configurations: set
            .into_iter()
            .map(|(i, j)| Configuration { i, j, protocol })
            .collect(),
    })
}

/// Every `(i, j)` of the `4^n × 4^n` matrix.
pub fn all_entries(n: usize) -> Vec<(usize, usize)> {
    let size = 1usize << (2 * n);
    (0..size)
        .flat_map(|i| (0..size).map(move |j| (i, j)))
        .collect()
}

/// The unitality test: the non-unital column `Γ_i0`, `i ≥ 1`.
pub fn unitality_test_entries(n: usize) -> Vec<(usize, usize)> {
    (1..1usize << (2 * n)).map(|i| (i, 0)).collect()
}

/// Closed-form full-PTM DPTM plan sizes for each prior.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullPlanSizes {
    pub general: u64,
    pub cptp: u64,
    pub unital: u64,
    pub pauli: u64,
}

pub fn full_plan_sizes(n: usize) -> Result<FullPlanSizes> {
    check_cost_qubits(n)?;
    let d2 = 1u64 << (2 * n);
    Ok(FullPlanSizes {
        general: d2 * d2,
        cptp: d2 * (d2 - 1),
        unital: (d2 - 1) * (d2 - 1),
        pauli: d2 - 1,
    })
}

/// Per-entry cost summary at one qubit count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    /// `d⁴` configurations for a full process tomography.
    pub full_tomography: u64,
    pub sqpt_min: u64,
    pub sqpt_max: u64,
    pub dptm_min: u64,
    pub dptm_max: u64,
}

/// Single-entry costs with no prior. A column of `(β_Q⁻¹)^{⊗n}` factorizes
/// over digits, so its extreme sizes are the per-digit extremes raised to `n`;
/// DPTM costs are taken at `j = 0` and `j ≠ 0`.
pub fn scaling_row(n: usize) -> Result<ScalingRow> {
    check_cost_qubits(n)?;
    let prior = Prior::none();
    let per_digit: Vec<u64> = (0..4).map(|d| sqpt_column_nnz(d, 1) as u64).collect();
    let exponent = n as u32;
    let dptm_reference = entry_cost(Protocol::Dptm, 1, 0, n, &prior)? as u64;
    let dptm_other = entry_cost(Protocol::Dptm, 1, 1, n, &prior)? as u64;
    let d2 = 1u64 << (2 * n);
    Ok(ScalingRow {
        n,
        full_tomography: d2 * d2,
        sqpt_min: per_digit.iter().min().unwrap().pow(exponent),
        sqpt_max: per_digit.iter().max().unwrap().pow(exponent),
        dptm_min: dptm_reference.min(dptm_other),
        dptm_max: dptm_reference.max(dptm_other),
    })
}

/// Entries grouped by the configurations they use, for reporting.
pub fn configurations_per_entry(
    entries: &[(usize, usize)],
    protocol: Protocol,
    prior: &Prior,
    n: usize,
) -> Result<BTreeMap<(usize, usize), usize>> {
    entries
        .iter()
        .map(|&(i, j)| Ok(((i, j), entry_cost(protocol, i, j, n, prior)?)))
        .collect()
}
