use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dptm::channel::kraus_to_ptm;
use dptm::io::{results_to_csv, ChannelSpec, PtmExport};
use dptm::states::Protocol;
use dptm::tomography::{
    compare, entry_cost, full_plan_sizes, plan_configurations, run_protocol, scaling_row,
    Comparison, FullPlanSizes, Prior, PriorKind, ScalingRow, Shots, TomographyResult,
    COST_MAX_QUBITS,
};

mod parse;
mod repro;

#[derive(Parser)]
#[command(name = "dptm", version)]
#[command(about = "Pauli transfer matrix tomography: simulate, reconstruct, count configurations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the analytic PTM of a channel
    Exact(ExactArgs),
    /// Run DPTM and/or sQPT on a simulated channel
    Tomo(TomoArgs),
    /// Count experimental configurations
    Cost(CostArgs),
    /// Reproduce one of the reference studies and check it statistically
    Repro(ReproArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProtocolChoice {
    Dptm,
    Sqpt,
    Both,
}

impl ProtocolChoice {
    fn protocols(self) -> Vec<Protocol> {
        match self {
            Self::Dptm => vec![Protocol::Dptm],
            Self::Sqpt => vec![Protocol::Sqpt],
            Self::Both => vec![Protocol::Dptm, Protocol::Sqpt],
        }
    }
}

#[derive(Args)]
struct Output {
    /// Output file (standard output when absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Output {
    fn write(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => {
                fs::write(path, text).with_context(|| format!("writing {}", path.display()))
            }
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn write_json<T: Serialize>(&self, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(&text)
    }
}

#[derive(Args)]
struct ExactArgs {
    /// Channel spec file or inline `model=name,key=value,...`
    #[arg(long)]
    channel: String,
    /// Include the Choi matrix
    #[arg(long)]
    choi: bool,
    /// Include the CPTP validity report
    #[arg(long)]
    report: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct PriorArgs {
    #[arg(long, default_value = "none")]
    prior: PriorKind,
    /// Entries known in advance, `i,j=value;...`
    #[arg(long)]
    known: Option<String>,
    /// Also measure column 0 so unitality can be checked
    #[arg(long)]
    check_unitality: bool,
}

impl PriorArgs {
    fn build(&self) -> Result<Prior> {
        let mut prior = Prior::new(self.prior);
        prior.check_unitality = self.check_unitality;
        for (i, j, value) in parse::known(self.known.as_deref().unwrap_or(""))? {
            prior = prior.with_known(i, j, value);
        }
        Ok(prior)
    }
}

#[derive(Args)]
struct TomoArgs {
    /// Channel spec file or inline `model=name,key=value,...`
    #[arg(long)]
    channel: String,
    #[arg(long, value_enum, default_value = "both")]
    protocol: ProtocolChoice,
    /// `i,j;i,j;...` or `full`
    #[arg(long, default_value = "full")]
    entries: String,
    #[command(flatten)]
    prior: PriorArgs,
    /// Shots per configuration, or `exact`
    #[arg(long, default_value = "1024")]
    shots: Shots,
    #[arg(long, env = "DPTM_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct CostArgs {
    /// Qubit count
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, value_enum, default_value = "both")]
    protocol: ProtocolChoice,
    #[arg(long, default_value = "none")]
    prior: PriorKind,
    /// Entries to cost individually and as a plan, `i,j;...` or `full`
    #[arg(long)]
    entries: Option<String>,
    /// Emit the per-entry scaling table for n = 1..=max-n instead
    #[arg(long)]
    table: bool,
    #[arg(long, default_value_t = 8)]
    max_n: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ReproArgs {
    #[arg(value_enum)]
    study: repro::Study,
    #[arg(long, env = "DPTM_SEED", default_value_t = 0)]
    seed: u64,
    /// Override the study's shot count
    #[arg(long)]
    shots: Option<u64>,
    /// Allowed deviation in standard errors
    #[arg(long, default_value_t = 4.0)]
    gate: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

fn exact(args: ExactArgs) -> Result<()> {
    let spec = parse::channel(&args.channel)?;
    let export = PtmExport::from_spec(&spec, args.choi, args.report)?;
    args.output.write_json(&export)
}

#[derive(Serialize)]
struct TomoOutput {
    channel: ChannelSpec,
    results: Vec<TomographyResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    comparison: Option<Comparison>,
}

fn tomo(args: TomoArgs) -> Result<()> {
    let spec = parse::channel(&args.channel)?;
    let channel = spec.build()?;
    let entries = parse::entries(&args.entries, channel.n())?;
    let prior = args.prior.build()?;
    let results = args
        .protocol
        .protocols()
        .into_iter()
        .map(|p| run_protocol(&channel, &entries, p, &prior, args.shots, args.seed))
        .collect::<dptm::Result<Vec<_>>>()?;
    if args.format == Format::Csv {
        return args.output.write(&results_to_csv(&results)?);
    }
    let comparison = match results.as_slice() {
        [d, q] => Some(compare(d, q, Some(&kraus_to_ptm(&channel)?))),
        _ => None,
    };
    args.output.write_json(&TomoOutput {
        channel: spec,
        results,
        comparison,
    })
}

#[derive(Serialize)]
struct ProtocolCost {
    protocol: Protocol,
    min: u64,
    max: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    plan_configurations: Option<usize>,
}

#[derive(Serialize)]
struct EntryCost {
    i: usize,
    j: usize,
    protocol: Protocol,
    configurations: usize,
}

#[derive(Serialize)]
struct CostReport {
    n: usize,
    prior: PriorKind,
    /// Full-PTM DPTM plan sizes for each prior.
    full_plan: FullPlanSizes,
    protocols: Vec<ProtocolCost>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    entries: Vec<EntryCost>,
}

fn scaling_csv(rows: &[ScalingRow]) -> String {
    let mut out = String::from("n,full_tomography,sqpt_min,sqpt_max,dptm_min,dptm_max\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.n, r.full_tomography, r.sqpt_min, r.sqpt_max, r.dptm_min, r.dptm_max
        ));
    }
    out
}

fn cost(args: CostArgs) -> Result<()> {
    if args.table {
        let rows = (1..=args.max_n)
            .map(scaling_row)
            .collect::<dptm::Result<Vec<_>>>()?;
        return match args.format {
            Format::Csv => args.output.write(&scaling_csv(&rows)),
            Format::Json => args.output.write_json(&rows),
        };
    }
    if args.format == Format::Csv {
        bail!("csv output is only available with --table");
    }
    let n = args.n;
    let row = scaling_row(n)?;
    let prior = Prior::new(args.prior);
    let entries = match &args.entries {
        Some(text) if text.trim() == "full" && n > 3 => {
            bail!(
                "--entries full is limited to n <= 3 ({} entries at n = {n})",
                1u128 << (4 * n)
            )
        }
        Some(text) => parse::entries(text, n)?,
        None => Vec::new(),
    };

    let mut protocols = Vec::new();
    let mut per_entry = Vec::new();
    for protocol in args.protocol.protocols() {
        let (min, max) = match protocol {
            Protocol::Dptm => (row.dptm_min, row.dptm_max),
            Protocol::Sqpt => (row.sqpt_min, row.sqpt_max),
        };
        let plan_size = if entries.is_empty() {
            None
        } else {
            Some(plan_configurations(&entries, protocol, &prior, n)?.len())
        };
        protocols.push(ProtocolCost {
            protocol,
            min,
            max,
            plan_configurations: plan_size,
        });
        for &(i, j) in &entries {
            per_entry.push(EntryCost {
                i,
                j,
                protocol,
                configurations: entry_cost(protocol, i, j, n, &prior)?,
            });
        }
    }
    args.output.write_json(&CostReport {
        n,
        prior: args.prior,
        full_plan: full_plan_sizes(n)?,
        protocols,
        entries: per_entry,
    })
}

fn repro(args: ReproArgs) -> Result<bool> {
    let report = repro::run(args.study, args.seed, args.shots, args.gate)?;
    match args.format {
        Format::Json => args.output.write_json(&report)?,
        Format::Csv => args.output.write(&repro::rows_csv(&report))?,
    }
    for failure in &report.failures {
        eprintln!("FAIL {failure}");
    }
    Ok(report.pass)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Exact(args) => exact(args).map(|()| true),
        Command::Tomo(args) => tomo(args).map(|()| true),
        Command::Cost(args) => {
            if args.n > COST_MAX_QUBITS || args.max_n > COST_MAX_QUBITS {
                Err(anyhow::anyhow!(
                    "cost mode supports at most {COST_MAX_QUBITS} qubits"
                ))
            } else {
                cost(args).map(|()| true)
            }
        }
        Command::Repro(args) => repro(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
