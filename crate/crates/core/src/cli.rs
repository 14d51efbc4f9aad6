//! The `qfilter` command line.
//!
//! Exit codes: 0 on success, 1 for usage errors, 2 for runtime or domain
//! errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::channel::{apply_filters, pauli_channel_state, FilterElement, PauliNoiseSpec};
use crate::error::Error;
use crate::qstate::{
    bell_diagonal_weights, bell_state, concurrence, fidelity_pure, mutual_information, BellLabel, BellWeights,
    DensityMatrix,
};
use crate::recover::{
    argmax, linspace, optimal_magnitude, plan_recovery, ratio_scan, sweep, Metric, Strategy, SweepPoint,
    CHANNEL_FILTER_AXIS,
};
use crate::tomo::{self, Sampling, TomographyRecord, DEFAULT_DARK_PROB};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

/// Column order of sweep CSV output.
pub const SWEEP_HEADER: &str = "gamma_a,gamma_b,strategy,mutual_info_bits,concurrence,transmission";

/// Column order of ratio-scan CSV output.
pub const INSET_HEADER: &str = "gamma_a,ratio,gamma_b,mutual_info_bits,concurrence,transmission";

#[derive(Debug, Parser)]
#[command(name = "qfilter", version, about = "Local-filter recovery of quantum information through noisy polarization channels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mutual information, concurrence and transmission versus channel filter strength.
    Curves(CurvesArgs),
    /// Mutual information versus the ratio of the two filter magnitudes.
    Inset(InsetArgs),
    /// Optimal compensating filter for one channel filter strength.
    Optimize(OptimizeArgs),
    /// Simulated polarization tomography.
    #[command(subcommand)]
    Tomo(TomoCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseType {
    Bitflip,
    Phaseflip,
}

impl NoiseType {
    pub fn spec(self, p: f64) -> crate::Result<PauliNoiseSpec> {
        match self {
            NoiseType::Bitflip => PauliNoiseSpec::bit_flip(p),
            NoiseType::Phaseflip => PauliNoiseSpec::phase_flip(p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct CurvesArgs {
    #[arg(long, value_enum, default_value = "bitflip")]
    pub noise: NoiseType,
    /// Noise weight.
    #[arg(long, default_value_t = 0.33)]
    pub p: f64,
    #[arg(long, default_value_t = 1.2)]
    pub gamma_a_max: f64,
    /// Number of grid points over [0, gamma_a_max].
    #[arg(long, default_value_t = 60)]
    pub steps: usize,
    #[arg(long, value_enum, default_value = "none")]
    pub strategy: Strategy,
    /// Multiplier applied to the reported mutual information.
    #[arg(long, default_value_t = 0.9)]
    pub normalization: f64,
    /// Output file; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct InsetArgs {
    /// Channel filter strengths, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0.820, 0.857, 0.869])]
    pub gamma_a: Vec<f64>,
    #[arg(long, default_value_t = 1.5)]
    pub ratio_max: f64,
    /// Number of ratio grid points over [0, ratio_max].
    #[arg(long, default_value_t = 1501)]
    pub steps: usize,
    #[arg(long, value_enum, default_value = "bitflip")]
    pub noise: NoiseType,
    #[arg(long, default_value_t = 0.33)]
    pub p: f64,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long, value_enum, default_value = "bitflip")]
    pub noise: NoiseType,
    #[arg(long, default_value_t = 0.33)]
    pub p: f64,
    #[arg(long)]
    pub gamma_a: f64,
}

#[derive(Debug, Subcommand)]
pub enum TomoCommand {
    /// Simulate coincidence counts for a named state.
    Simulate(SimulateArgs),
    /// Reconstruct a density matrix from a tomography record.
    Reconstruct(ReconstructArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// A Bell label (phi+, phi-, psi+, psi-) or bitflip / phaseflip.
    #[arg(long, default_value = "phi+")]
    pub state: String,
    /// Noise weight for bitflip / phaseflip states.
    #[arg(long, default_value_t = 0.33)]
    pub p: f64,
    /// Expected number of pairs per setting.
    #[arg(long, default_value_t = 1e5)]
    pub exposure: f64,
    #[arg(long, default_value_t = DEFAULT_DARK_PROB)]
    pub dark_prob: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use rounded expected counts instead of Poisson draws.
    #[arg(long)]
    pub exact: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    /// Pure Bell state to report fidelity against.
    #[arg(long, default_value = "phi+")]
    pub target: String,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::UnknownBellLabel(_) => CliError::Usage(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("qfilter: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command) -> CliResult<()> {
    match command {
        Command::Curves(a) => cmd_curves(a),
        Command::Inset(a) => cmd_inset(a),
        Command::Optimize(a) => cmd_optimize(a),
        Command::Tomo(TomoCommand::Simulate(a)) => cmd_tomo_simulate(a),
        Command::Tomo(TomoCommand::Reconstruct(a)) => cmd_tomo_reconstruct(a),
    }
}

fn open_output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    match path {
        None => Ok(Box::new(BufWriter::new(io::stdout()))),
        Some(p) if p.as_os_str() == "-" => Ok(Box::new(BufWriter::new(io::stdout()))),
        Some(p) => {
            let f = File::create(p)
                .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", p.display())))?;
            Ok(Box::new(BufWriter::new(f)))
        }
    }
}

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> CliResult<()> {
    let mut out = open_output(path)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::Runtime(e.to_string()))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn check_p(p: f64) -> CliResult<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(CliError::Usage(format!("--p must lie in [0, 1], got {p}")));
    }
    Ok(())
}

/// Writes sweep points as CSV with [`SWEEP_HEADER`].
pub fn write_sweep_csv<W: Write>(out: W, points: &[SweepPoint]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    for p in points {
        w.serialize(p).map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_curves(a: &CurvesArgs) -> CliResult<()> {
    check_p(a.p)?;
    if a.steps < 2 {
        return Err(CliError::Usage(format!("--steps must be >= 2, got {}", a.steps)));
    }
    if !(a.gamma_a_max > 0.0 && a.gamma_a_max.is_finite()) {
        return Err(CliError::Usage(format!("--gamma-a-max must be > 0, got {}", a.gamma_a_max)));
    }
    if !(a.normalization > 0.0 && a.normalization <= 1.0) {
        return Err(CliError::Usage(format!(
            "--normalization must lie in (0, 1], got {}",
            a.normalization
        )));
    }
    let noise = a.noise.spec(a.p)?;
    let grid = linspace(0.0, a.gamma_a_max, a.steps);
    let points = sweep(&noise, &grid, a.strategy, a.normalization)?;
    match a.format {
        Format::Csv => {
            let out = open_output(a.output.as_deref())?;
            write_sweep_csv(out, &points)
        }
        Format::Json => write_json(a.output.as_deref(), &points),
    }
}

#[derive(Serialize)]
struct InsetRow {
    gamma_a: f64,
    ratio: f64,
    gamma_b: f64,
    mutual_info_bits: f64,
    concurrence: f64,
    transmission: f64,
}

/// Location of the maxima of one ratio series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InsetSummary {
    pub gamma_a: f64,
    pub argmax_ratio_mutual_info: f64,
    pub argmax_ratio_concurrence: f64,
    pub closed_form_ratio: f64,
}

pub fn inset_summaries(noise: &PauliNoiseSpec, gammas: &[f64], ratios: &[f64]) -> crate::Result<Vec<(InsetSummary, Vec<SweepPoint>)>> {
    let rho = pauli_channel_state(noise);
    let t = crate::qstate::correlation_matrix(&rho)?;
    gammas
        .iter()
        .map(|&ga| {
            let pts = ratio_scan(noise, ga, ratios)?;
            let mi = argmax(&pts, Metric::MutualInformation).expect("non-empty grid");
            let cc = argmax(&pts, Metric::Concurrence).expect("non-empty grid");
            let closed = optimal_magnitude(&t, &CHANNEL_FILTER_AXIS, ga)? / ga;
            Ok((
                InsetSummary {
                    gamma_a: ga,
                    argmax_ratio_mutual_info: ratios[mi],
                    argmax_ratio_concurrence: ratios[cc],
                    closed_form_ratio: closed,
                },
                pts,
            ))
        })
        .collect()
}

pub fn cmd_inset(a: &InsetArgs) -> CliResult<()> {
    check_p(a.p)?;
    if a.gamma_a.is_empty() || a.gamma_a.iter().any(|g| !(*g > 0.0)) {
        return Err(CliError::Usage("--gamma-a values must be > 0".into()));
    }
    if a.steps < 2 || !(a.ratio_max > 0.0) {
        return Err(CliError::Usage("--steps must be >= 2 and --ratio-max > 0".into()));
    }
    let noise = a.noise.spec(a.p)?;
    let ratios = linspace(0.0, a.ratio_max, a.steps);
    let series = inset_summaries(&noise, &a.gamma_a, &ratios)?;

    let mut out = open_output(a.output.as_deref())?;
    {
        let mut w = csv::Writer::from_writer(&mut out);
        for (_, pts) in &series {
            for (p, &r) in pts.iter().zip(&ratios) {
                w.serialize(InsetRow {
                    gamma_a: p.gamma_a,
                    ratio: r,
                    gamma_b: p.gamma_b,
                    mutual_info_bits: p.mutual_info,
                    concurrence: p.concurrence,
                    transmission: p.transmission,
                })
                .map_err(|e| CliError::Runtime(e.to_string()))?;
            }
        }
        w.flush()?;
    }
    for (s, _) in &series {
        writeln!(
            out,
            "# argmax gamma_a={} mutual_info_ratio={} concurrence_ratio={} closed_form_ratio={:.6}",
            s.gamma_a, s.argmax_ratio_mutual_info, s.argmax_ratio_concurrence, s.closed_form_ratio
        )?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct OptimizeReport {
    noise: NoiseType,
    p: f64,
    gamma_a: f64,
    gamma_b_opt: f64,
    orientation_b: [f64; 3],
    predicted_concurrence: f64,
    predicted_mutual_info_bits: f64,
    nothing_to_recover: bool,
}

pub fn cmd_optimize(a: &OptimizeArgs) -> CliResult<()> {
    check_p(a.p)?;
    let noise = a.noise.spec(a.p)?;
    let rho = pauli_channel_state(&noise);
    let fa = FilterElement::new(a.gamma_a, CHANNEL_FILTER_AXIS)?;
    let plan = plan_recovery(&rho, &fa)?;
    let fb = FilterElement::new(plan.gamma_b_opt, plan.orientation_b)?;
    let filtered = apply_filters(&rho, &fa, &fb)?;
    let report = OptimizeReport {
        noise: a.noise,
        p: a.p,
        gamma_a: a.gamma_a,
        gamma_b_opt: plan.gamma_b_opt,
        orientation_b: *plan.orientation_b.as_array(),
        predicted_concurrence: plan.predicted_concurrence,
        predicted_mutual_info_bits: mutual_information(&filtered.state)?,
        nothing_to_recover: plan.nothing_to_recover,
    };
    write_json(None, &report)
}

/// Resolves a state name for `tomo simulate`.
pub fn named_state(name: &str, p: f64) -> crate::Result<DensityMatrix> {
    match name.to_ascii_lowercase().as_str() {
        "bitflip" => Ok(pauli_channel_state(&PauliNoiseSpec::bit_flip(p)?)),
        "phaseflip" => Ok(pauli_channel_state(&PauliNoiseSpec::phase_flip(p)?)),
        other => Ok(bell_state(other.parse::<BellLabel>()?)),
    }
}

pub fn cmd_tomo_simulate(a: &SimulateArgs) -> CliResult<()> {
    check_p(a.p)?;
    let rho = named_state(&a.state, a.p)?;
    let sampling = if a.exact { Sampling::Expected } else { Sampling::Poisson };
    let record = tomo::simulate_counts_with(
        &rho,
        &tomo::standard_settings(),
        a.exposure,
        a.dark_prob,
        a.seed,
        sampling,
    )?;
    write_json(a.output.as_deref(), &record)
}

#[derive(Serialize)]
struct Fidelity {
    target: String,
    value: f64,
}

#[derive(Serialize)]
struct ReconstructReport {
    state: DensityMatrix,
    concurrence: f64,
    mutual_info_bits: f64,
    bell_weights: BellWeights,
    fidelity: Fidelity,
}

pub fn cmd_tomo_reconstruct(a: &ReconstructArgs) -> CliResult<()> {
    let target = a.target.parse::<BellLabel>()?;
    let text = std::fs::read_to_string(&a.input)
        .map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", a.input.display())))?;
    let record: TomographyRecord = serde_json::from_str(&text)
        .map_err(|e| CliError::Runtime(format!("malformed tomography record: {e}")))?;
    let rho = tomo::reconstruct(&record)?;
    let report = ReconstructReport {
        concurrence: concurrence(&rho)?,
        mutual_info_bits: mutual_information(&rho)?,
        bell_weights: bell_diagonal_weights(&rho)?,
        fidelity: Fidelity {
            target: target.name().to_string(),
            value: fidelity_pure(&rho, &bell_state(target))?,
        },
        state: rho,
    };
    write_json(a.output.as_deref(), &report)
}
