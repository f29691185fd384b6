//! Command line front end: ingestion, pipeline wiring, verification
//! campaigns, and report emission.
//!
//! Exit codes of `diagnose` encode the verdict: 0 certified/likely, 1
//! likely-not/violation, 2 inconclusive; operational errors exit 3.

// clap help strings show JSON shapes like [[re,im],..]; they are not links
#![allow(rustdoc::broken_intra_doc_links)]

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use hsz_core::diagnostics::{self, DiagnosisInput, VerdictConfig};
use hsz_core::error::Error;
use hsz_core::lmatrix;
use hsz_core::matrix;
use hsz_core::schur::SchurParams;
use hsz_core::series::PowerSeries;
use hsz_core::transforms;
use hsz_core::verify::{run_campaign, CampaignConfig};
use hsz_core::weights::{self, GammaFamily, WeightFamily};
use hsz_core::MomentSequence;

#[derive(Parser)]
#[command(
    name = "hsz",
    version,
    about = "Schur parameters of unit-circle measures and Helson-Szego diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derive Schur parameters from a weight, moments, or a Taylor series.
    Gamma(GammaArgs),
    /// Taylor coefficients of the Schur function with given parameters.
    Theta(ThetaArgs),
    /// Dump a triangular section or its one-step factor matrix.
    Lmatrix(LmatrixArgs),
    /// Seeded randomized campaign over the matrix identities.
    Verify(VerifyArgs),
    /// Full diagnostic report; the exit code encodes the verdict.
    Diagnose(DiagnoseArgs),
    /// Moment-side finite-section sweeps only (Riesz and conjugation).
    Riesz(RieszArgs),
}

#[derive(Args, Clone)]
struct SourceArgs {
    /// Builtin weight family: constant, cosine:c1[,..], zero:p, zero-squared.
    #[arg(long, value_name = "FAMILY")]
    weight: Option<String>,
    /// Weight samples CSV (angle-in-turns,value on a uniform grid).
    #[arg(long, value_name = "FILE")]
    weight_csv: Option<PathBuf>,
    /// Inline JSON moments: numbers or [re,im] pairs.
    #[arg(long, value_name = "JSON")]
    moments: Option<String>,
    /// Moments JSON file: {"moments": [[re,im],..]}.
    #[arg(long, value_name = "FILE")]
    moments_file: Option<PathBuf>,
    /// Inline JSON Taylor coefficients of a Schur function.
    #[arg(long, value_name = "JSON")]
    theta: Option<String>,
    /// Series JSON file: {"coeffs": [[re,im],..]}.
    #[arg(long, value_name = "FILE")]
    theta_file: Option<PathBuf>,
    /// Inline JSON Schur parameters: numbers or [re,im] pairs.
    #[arg(long, value_name = "JSON")]
    gamma: Option<String>,
    /// Parameters JSON file: {"gamma": [[re,im],..], "terminal_unimodular": b}.
    #[arg(long, value_name = "FILE")]
    gamma_file: Option<PathBuf>,
    /// Synthetic parameter family: geometric:q[,len], spike:i,v, harmonic:c[,len].
    #[arg(long, value_name = "FAMILY")]
    family: Option<String>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct GammaArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Truncation order of the derived parameter sequence.
    #[arg(long, default_value_t = 32)]
    order: usize,
    /// Weight sampling grid; defaults to 8x the required moment order.
    #[arg(long)]
    grid: Option<usize>,
    /// Cross-route consistency tolerance.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ThetaArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Order of the emitted Taylor series.
    #[arg(long, default_value_t = 32)]
    order: usize,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MatrixKind {
    /// The triangular section.
    L,
    /// The one-step factor matrix.
    Factor,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Route {
    Product,
    Direct,
}

#[derive(Args)]
struct LmatrixArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Section size.
    #[arg(long, default_value_t = 8)]
    size: usize,
    #[arg(long, value_enum, default_value_t = MatrixKind::L)]
    matrix: MatrixKind,
    /// Construction route for the triangular section.
    #[arg(long, value_enum, default_value_t = Route::Product)]
    route: Route,
    /// Parameter truncation order when the source is not already a sequence.
    #[arg(long, default_value_t = 64)]
    order: usize,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Number of random sequences.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Section size for the identity suite.
    #[arg(long, default_value_t = 12)]
    size: usize,
    /// Support length of random sequences.
    #[arg(long, default_value_t = 16)]
    support: usize,
    /// Largest modulus of a random entry.
    #[arg(long, default_value_t = 0.95)]
    max_modulus: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Residual bound for a pass.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Args)]
struct DiagnoseArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Sweep sizes, ascending.
    #[arg(long, value_delimiter = ',', default_values_t = vec![4usize, 8, 16, 32, 64, 128])]
    sizes: Vec<usize>,
    /// Minimum parameter truncation order (grown to 4x the largest sweep size).
    #[arg(long, default_value_t = 64)]
    order: usize,
    #[arg(long)]
    grid: Option<usize>,
    /// Quadrature nodes for the Szego identity check.
    #[arg(long, default_value_t = 2048)]
    quad: usize,
    /// Quadruple consistency tolerance.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Directory for report.json and the sweep CSVs.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct RieszArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, value_delimiter = ',', default_values_t = vec![4usize, 8, 16, 32, 64])]
    sizes: Vec<usize>,
    #[arg(long)]
    grid: Option<usize>,
    /// Also sweep the conjugation ratio.
    #[arg(long, default_value_t = true)]
    conjugation: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// A resolved input source.
enum Source {
    Gamma(SchurParams, String),
    Moments(MomentSequence, String),
    Theta(PowerSeries, String),
    Weight(Vec<f64>, String),
}

fn parse_complex_list(text: &str) -> Result<Vec<Complex64>, Error> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let items = value
        .as_array()
        .ok_or_else(|| Error::Inconsistent("expected a JSON array".into()))?;
    items.iter().map(weights::complex_from_json).collect()
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Inconsistent(format!("cannot read {}: {e}", path.display())))
}

impl SourceArgs {
    fn resolve(&self) -> Result<Source, Error> {
        let given = [
            self.weight.is_some(),
            self.weight_csv.is_some(),
            self.moments.is_some(),
            self.moments_file.is_some(),
            self.theta.is_some(),
            self.theta_file.is_some(),
            self.gamma.is_some(),
            self.gamma_file.is_some(),
            self.family.is_some(),
        ]
        .iter()
        .filter(|&&x| x)
        .count();
        if given != 1 {
            return Err(Error::Inconsistent(format!(
                "exactly one source must be given, found {given}"
            )));
        }
        if let Some(name) = &self.weight {
            let family = WeightFamily::parse(name)?;
            return Ok(Source::Weight(Vec::new(), family.describe()));
        }
        if let Some(path) = &self.weight_csv {
            let samples = weights::parse_weight_csv(&read(path)?)?;
            return Ok(Source::Weight(
                samples,
                format!("weight CSV {}", path.display()),
            ));
        }
        if let Some(text) = &self.moments {
            let m = MomentSequence::new(parse_complex_list(text)?)?;
            return Ok(Source::Moments(m, "inline moments".into()));
        }
        if let Some(path) = &self.moments_file {
            let m = MomentSequence::from_json(&read(path)?)?;
            return Ok(Source::Moments(
                m,
                format!("moments file {}", path.display()),
            ));
        }
        if let Some(text) = &self.theta {
            let series = PowerSeries::new(parse_complex_list(text)?);
            return Ok(Source::Theta(series, "inline series".into()));
        }
        if let Some(path) = &self.theta_file {
            let series = PowerSeries::from_json(&read(path)?)?;
            return Ok(Source::Theta(
                series,
                format!("series file {}", path.display()),
            ));
        }
        if let Some(text) = &self.gamma {
            let params = match SchurParams::from_json(text) {
                Ok(p) => p,
                Err(_) => SchurParams::regular(parse_complex_list(text)?)?,
            };
            return Ok(Source::Gamma(params, "inline gamma".into()));
        }
        if let Some(path) = &self.gamma_file {
            let params = SchurParams::from_json(&read(path)?)?;
            return Ok(Source::Gamma(
                params,
                format!("gamma file {}", path.display()),
            ));
        }
        let family = GammaFamily::parse(self.family.as_ref().expect("one source"))?;
        Ok(Source::Gamma(family.synthesize()?, family.describe()))
    }

    fn weight_family(&self) -> Option<&str> {
        self.weight.as_deref()
    }
}

/// Samples a named weight family at a grid wide enough for `order` moments.
fn sample_weight(name: &str, order: usize, grid: Option<usize>) -> Result<Vec<f64>, Error> {
    let family = WeightFamily::parse(name)?;
    let need = 8 * (order + 1);
    let grid = grid.unwrap_or(need.next_power_of_two()).max(need);
    Ok(family.sample(grid))
}

struct GammaOutcome {
    params: SchurParams,
    trusted: usize,
    cross_check: Option<f64>,
    description: String,
}

/// Resolves any source into a parameter sequence; moment sources are
/// cross-checked against the Levinson route.
fn gamma_from_source(
    source: &SourceArgs,
    order: usize,
    grid: Option<usize>,
    tol: f64,
) -> Result<GammaOutcome, Error> {
    let resolved = source.resolve()?;
    let (moments, description) = match resolved {
        Source::Gamma(params, description) => {
            let trusted = params.len();
            return Ok(GammaOutcome {
                params,
                trusted,
                cross_check: None,
                description,
            });
        }
        Source::Theta(series, description) => {
            let out = transforms::schur_algorithm(&series, order.min(series.order()))?;
            return Ok(GammaOutcome {
                params: out.params,
                trusted: out.trusted,
                cross_check: None,
                description,
            });
        }
        Source::Weight(samples, description) => {
            let (samples, moment_order) = if samples.is_empty() {
                (
                    sample_weight(
                        source.weight_family().expect("weight source"),
                        order + 1,
                        grid,
                    )?,
                    order + 1,
                )
            } else {
                // a user-supplied grid caps how many moments are extractable
                let cap = samples.len() / 8;
                (samples, (order + 1).min(cap))
            };
            (
                transforms::moments_from_weight(&samples, moment_order)?,
                description,
            )
        }
        Source::Moments(m, description) => (m, description),
    };
    let order = order.min(moments.order().saturating_sub(1));
    let route = transforms::gamma_from_moments(&moments, order)?;
    let levinson = transforms::levinson_verblunsky(&moments)?;
    let check_order = order.min(24).min(levinson.params.len());
    let discrepancy = (0..check_order)
        .map(|j| (route.params.get(j) - levinson.params.get(j)).norm())
        .fold(0.0, f64::max);
    if discrepancy > tol {
        return Err(Error::Provenance(format!(
            "Levinson and Schur-algorithm routes disagree by {discrepancy:.3e}"
        )));
    }
    Ok(GammaOutcome {
        params: route.params,
        trusted: route.trusted,
        cross_check: Some(discrepancy),
        description,
    })
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Error> {
    let mut body = text.to_string();
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match out {
        Some(path) => std::fs::write(path, &body)
            .map_err(|e| Error::Inconsistent(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn complex_rows_csv(values: impl Iterator<Item = Complex64>) -> String {
    let mut out = String::from("index,re,im\n");
    for (k, v) in values.enumerate() {
        out.push_str(&format!("{},{},{}\n", k, v.re, v.im));
    }
    out
}

fn cmd_gamma(args: &GammaArgs) -> Result<(), Error> {
    let outcome = gamma_from_source(&args.source, args.order, args.grid, args.tol)?;
    let text = match args.format {
        Format::Json => {
            let mut value = serde_json::to_value(&outcome.params)?;
            let obj = value.as_object_mut().expect("object");
            obj.insert(
                "provenance".into(),
                serde_json::json!({
                    "source": outcome.description,
                    "input_digest": hsz_core::input_digest(outcome.description.as_bytes()),
                    "order": args.order,
                    "trusted": outcome.trusted,
                    "cross_check_discrepancy": outcome.cross_check,
                    "levinson_convention": outcome
                        .cross_check
                        .map(|_| transforms::LEVINSON_CONVENTION),
                    "seed": args.seed,
                    "version": hsz_core::VERSION,
                }),
            );
            serde_json::to_string_pretty(&value)?
        }
        Format::Csv => complex_rows_csv(outcome.params.entries().iter().copied()),
    };
    emit(&text, args.out.as_ref())
}

fn cmd_theta(args: &ThetaArgs) -> Result<(), Error> {
    let outcome = gamma_from_source(&args.source, args.order, args.grid, args.tol)?;
    let series = transforms::inverse_schur(&outcome.params, args.order);
    let text = match args.format {
        Format::Json => {
            let mut value = serde_json::to_value(&series)?;
            let obj = value.as_object_mut().expect("object");
            obj.insert(
                "provenance".into(),
                serde_json::json!({
                    "source": outcome.description,
                    "order": args.order,
                    "version": hsz_core::VERSION,
                }),
            );
            serde_json::to_string_pretty(&value)?
        }
        Format::Csv => complex_rows_csv(series.coeffs().iter().copied()),
    };
    emit(&text, args.out.as_ref())
}

fn cmd_lmatrix(args: &LmatrixArgs) -> Result<(), Error> {
    let outcome = gamma_from_source(&args.source, args.order, args.grid, args.tol)?;
    let section = match (args.matrix, args.route) {
        (MatrixKind::Factor, _) => lmatrix::factor_matrix(&outcome.params, args.size)?,
        (MatrixKind::L, Route::Product) => lmatrix::l_matrix_product(&outcome.params, args.size)?,
        (MatrixKind::L, Route::Direct) => lmatrix::l_matrix_direct(&outcome.params, args.size)?,
    };
    let text = match args.format {
        Format::Json => matrix::to_json(&section),
        Format::Csv => matrix::to_csv(&section),
    };
    emit(&text, args.out.as_ref())
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool, Error> {
    let report = run_campaign(&CampaignConfig {
        trials: args.trials,
        size: args.size,
        support: args.support,
        max_modulus: args.max_modulus,
        seed: args.seed,
        tolerance: args.tol,
        ..CampaignConfig::default()
    })?;
    println!(
        "identity residuals over {} trials (size {}, support {}, seed {}):",
        args.trials, args.size, args.support, args.seed
    );
    println!("  factorization   {:.3e}", report.max_factorization);
    println!("  rank-one        {:.3e}", report.max_rank_one);
    println!("  contractivity   {:.3e}", report.max_contractivity);
    println!("  defect identity {:.3e}", report.max_eigen);
    println!("  sigma bound     {:.3e}", report.max_sigma_bound);
    println!("  cross-route     {:.3e}", report.max_cross_route);
    println!("  round trip      {:.3e}", report.max_round_trip);
    println!(
        "max {:.3e} {} tolerance {:.1e}: {}",
        report.overall_max,
        if report.passed { "within" } else { "EXCEEDS" },
        args.tol,
        if report.passed { "pass" } else { "fail" }
    );
    Ok(report.passed)
}

fn cmd_diagnose(args: &DiagnoseArgs) -> Result<i32, Error> {
    let max_sweep = args.sizes.iter().copied().max().unwrap_or(16);
    let wanted_order = args.order.max(4 * max_sweep);
    let config = VerdictConfig {
        sweep_sizes: args.sizes.clone(),
        order: wanted_order,
        quad_points: args.quad,
        consistency_tol: args.tol,
        seed: args.seed,
        ..VerdictConfig::default()
    };
    let input = match args.source.resolve()? {
        Source::Gamma(params, _) => DiagnosisInput::Gamma(params),
        Source::Moments(m, _) => DiagnosisInput::Moments(m),
        Source::Theta(series, _) => {
            let out = transforms::schur_algorithm(&series, wanted_order.min(series.order()))?;
            DiagnosisInput::Gamma(out.params)
        }
        Source::Weight(samples, _) => {
            let mut moment_order = (2 * max_sweep).max(wanted_order + 1);
            let samples = if samples.is_empty() {
                sample_weight(
                    args.source.weight_family().expect("weight source"),
                    moment_order,
                    args.grid,
                )?
            } else {
                moment_order = moment_order.min(samples.len() / 8);
                samples
            };
            DiagnosisInput::Moments(transforms::moments_from_weight(&samples, moment_order)?)
        }
    };
    let report = diagnostics::hsz_verdict(&input, &config)?;
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::Inconsistent(format!("cannot create {}: {e}", dir.display())))?;
        std::fs::write(dir.join("report.json"), report.to_json())
            .map_err(|e| Error::Inconsistent(format!("cannot write report: {e}")))?;
        for (name, body) in report.sweep_csvs() {
            std::fs::write(dir.join(&name), body)
                .map_err(|e| Error::Inconsistent(format!("cannot write {name}: {e}")))?;
        }
    }
    println!("{}", report.to_json());
    Ok(report.verdict.exit_code())
}

fn cmd_riesz(args: &RieszArgs) -> Result<(), Error> {
    let max_sweep = args.sizes.iter().copied().max().unwrap_or(16);
    let moments = match args.source.resolve()? {
        Source::Moments(m, _) => m,
        Source::Weight(samples, _) => {
            let mut moment_order = 2 * max_sweep;
            let samples = if samples.is_empty() {
                sample_weight(
                    args.source.weight_family().expect("weight source"),
                    moment_order,
                    args.grid,
                )?
            } else {
                moment_order = moment_order.min(samples.len() / 8);
                samples
            };
            transforms::moments_from_weight(&samples, moment_order)?
        }
        _ => {
            return Err(Error::Inconsistent(
                "the riesz oracle needs a weight or moments source".into(),
            ))
        }
    };
    let riesz = diagnostics::riesz_sweep(&moments, &args.sizes)?;
    let conjugation = if args.conjugation {
        Some(diagnostics::conjugation_sweep(&moments, &args.sizes)?)
    } else {
        None
    };
    let text = match args.format {
        Format::Json => serde_json::to_string_pretty(&serde_json::json!({
            "riesz": riesz,
            "conjugation": conjugation,
            "version": hsz_core::VERSION,
        }))?,
        Format::Csv => {
            let mut out = String::from("n,riesz,conjugation\n");
            for (k, p) in riesz.iter().enumerate() {
                let conj = conjugation
                    .as_ref()
                    .map(|c| c[k].value.to_string())
                    .unwrap_or_default();
                out.push_str(&format!("{},{},{}\n", p.n, p.value, conj));
            }
            out
        }
    };
    emit(&text, args.out.as_ref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome: Result<i32, Error> = match &cli.command {
        Command::Gamma(args) => cmd_gamma(args).map(|()| 0),
        Command::Theta(args) => cmd_theta(args).map(|()| 0),
        Command::Lmatrix(args) => cmd_lmatrix(args).map(|()| 0),
        Command::Verify(args) => cmd_verify(args).map(|ok| if ok { 0 } else { 1 }),
        Command::Diagnose(args) => cmd_diagnose(args),
        Command::Riesz(args) => cmd_riesz(args).map(|()| 0),
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(3)
        }
    }
}
