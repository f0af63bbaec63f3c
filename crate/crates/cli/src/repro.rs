//! The two numerical studies: single-qubit amplitude damping and the
//! two-qubit correlated depolarizing channel.

use std::fmt::Write as _;

use anyhow::Result;
use clap::ValueEnum;
use serde::Serialize;

use dptm::channel::{amplitude_damping, correlated_depolarizing, kraus_to_ptm, KrausChannel};
use dptm::states::Protocol;
use dptm::tomography::{
    extract_corr_depol_params, run_protocol, CorrDepolParams, EntryEstimate, Prior, PriorKind,
    Shots, TomographyResult,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Study {
    AmpDamp,
    CorrDepol,
}

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub i: usize,
    pub j: usize,
    pub analytic: f64,
    pub dptm: EntryEstimate,
    pub sqpt: EntryEstimate,
    /// `|Γ̂ − Γ| / SE`; infinite when a nonzero deviation has zero SE.
    pub dptm_sigmas: f64,
    pub sqpt_sigmas: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Counts {
    pub dptm: usize,
    pub sqpt: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Extracted {
    pub dptm: CorrDepolParams,
    pub sqpt: CorrDepolParams,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub study: Study,
    pub master_seed: u64,
    pub shots: u64,
    pub gate_sigmas: f64,
    pub configurations: Counts,
    pub expected_configurations: Counts,
    pub rows: Vec<Row>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameters: Option<Extracted>,
    pub pass: bool,
    pub failures: Vec<String>,
}

struct Setup {
    channel: KrausChannel,
    entries: Vec<(usize, usize)>,
    dptm_prior: Prior,
    sqpt_prior: Prior,
    shots: u64,
    expected: Counts,
}

fn setup(study: Study) -> Result<Setup> {
    Ok(match study {
        Study::AmpDamp => {
            // Γ10 = Γ20 = 0 is model knowledge: damping never creates X or Y coherence from 𝟙
            let prior = Prior::new(PriorKind::Cptp)
                .with_known(1, 0, 0.0)
                .with_known(2, 0, 0.0);
            Setup {
                channel: amplitude_damping(0.25)?,
                entries: vec![(1, 1), (2, 2), (3, 0), (3, 3)],
                dptm_prior: prior.clone(),
                sqpt_prior: prior,
                shots: 512,
                expected: Counts { dptm: 4, sqpt: 8 },
            }
        }
        Study::CorrDepol => Setup {
            channel: correlated_depolarizing(0.25, 0.75)?,
            entries: vec![(4, 4), (6, 6)],
            dptm_prior: Prior::new(PriorKind::Unital),
            sqpt_prior: Prior::none(),
            shots: 2048,
            expected: Counts { dptm: 2, sqpt: 15 },
        },
    })
}

fn sigmas(estimate: &EntryEstimate, analytic: f64) -> f64 {
    let dev = (estimate.value - analytic).abs();
    if estimate.std_error > 0.0 {
        dev / estimate.std_error
    } else if dev == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

fn entry(result: &TomographyResult, i: usize, j: usize) -> EntryEstimate {
    *result
        .entry(i, j)
        .expect("every requested entry is reconstructed")
}

pub fn run(study: Study, master_seed: u64, shots: Option<u64>, gate_sigmas: f64) -> Result<Report> {
    let s = setup(study)?;
    let shots = shots.unwrap_or(s.shots);
    let budget = Shots::Count(shots);
    let dptm = run_protocol(
        &s.channel,
        &s.entries,
        Protocol::Dptm,
        &s.dptm_prior,
        budget,
        master_seed,
    )?;
    let sqpt = run_protocol(
        &s.channel,
        &s.entries,
        Protocol::Sqpt,
        &s.sqpt_prior,
        budget,
        master_seed,
    )?;
    let analytic = kraus_to_ptm(&s.channel)?;

    let mut failures = Vec::new();
    let rows: Vec<Row> = s
        .entries
        .iter()
        .map(|&(i, j)| {
            let g = analytic.entry(i, j);
            let d = entry(&dptm, i, j);
            let q = entry(&sqpt, i, j);
            Row {
                i,
                j,
                analytic: g,
                dptm_sigmas: sigmas(&d, g),
                sqpt_sigmas: sigmas(&q, g),
                dptm: d,
                sqpt: q,
            }
        })
        .collect();
    for row in &rows {
        for (name, est, k) in [
            ("dptm", &row.dptm, row.dptm_sigmas),
            ("sqpt", &row.sqpt, row.sqpt_sigmas),
        ] {
            if k > gate_sigmas {
                failures.push(format!(
                    "{name} G[{},{}] = {:.6} ± {:.6}, analytic {:.6}: {k:.2} SE > {gate_sigmas}",
                    row.i, row.j, est.value, est.std_error, row.analytic
                ));
            }
        }
    }

    let configurations = Counts {
        dptm: dptm.configuration_count,
        sqpt: sqpt.configuration_count,
    };
    if configurations.dptm != s.expected.dptm || configurations.sqpt != s.expected.sqpt {
        failures.push(format!(
            "configuration counts dptm {} sqpt {}, expected {} and {}",
            configurations.dptm, configurations.sqpt, s.expected.dptm, s.expected.sqpt
        ));
    }

    let parameters = match study {
        Study::AmpDamp => None,
        Study::CorrDepol => {
            let params = |r: &TomographyResult| {
                extract_corr_depol_params(&r.estimate(4, 4).unwrap(), &r.estimate(6, 6).unwrap())
            };
            Some(Extracted {
                dptm: params(&dptm)?,
                sqpt: params(&sqpt)?,
            })
        }
    };

    Ok(Report {
        study,
        master_seed,
        shots,
        gate_sigmas,
        configurations,
        expected_configurations: s.expected,
        rows,
        parameters,
        pass: failures.is_empty(),
        failures,
    })
}

/// Per-entry table with one line per `(i, j)`.
pub fn rows_csv(report: &Report) -> String {
    let mut out = String::from(
        "i,j,analytic,dptm_value,dptm_std_error,dptm_sigmas,sqpt_value,sqpt_std_error,sqpt_sigmas\n",
    );
    for r in &report.rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.i,
            r.j,
            r.analytic,
            r.dptm.value,
            r.dptm.std_error,
            r.dptm_sigmas,
            r.sqpt.value,
            r.sqpt.std_error,
            r.sqpt_sigmas
        )
        .unwrap();
    }
    out
}
