//! The `improper` command-line tool.
//!
//! Exit codes: 0 success, 1 I/O or parse error, 2 domain rejection (invalid
//! pair, violated channel assumption), 3 verification-suite failure.

pub mod matrix_file;
pub mod report;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::analog::circularize;
use crate::capacity::{capacity_loss, check_assumptions, solve_capacity, ChannelSpec};
use crate::entropy::{
    complex_gaussian_entropy, knn_entropy, neeser_massey_bound, SAMPLES_PER_NEIGHBOR,
};
use crate::error::Error;
use crate::linalg::ComplexMatrix;
use crate::rng::derive_seed;
use crate::second_order::{
    circularity_spectrum, empirical_pair, sample_gaussian, validate_pair, SecondOrderPair,
};
use crate::verify::{run_suite, Suite, VerifyConfig};

use matrix_file::{read_matrix, write_matrix, MatrixFile};
use report::{append_csv_row, write_json, Report, RunManifest};

pub const EXIT_OK: u8 = 0;
pub const EXIT_IO: u8 = 1;
pub const EXIT_REJECTED: u8 = 2;
pub const EXIT_VERIFY_FAILED: u8 = 3;

pub const CAPACITY_CSV_HEADER: [&str; 7] = [
    "n",
    "S",
    "lambda_max",
    "capacity_nats",
    "delta_c_nats",
    "water_level",
    "seed",
];

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "improper",
    version,
    about = "Second-order tools for improper complex random vectors"
)]
pub struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Monte Carlo sample count.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub samples: usize,
    /// Print entropies and capacities in bits instead of nats.
    #[arg(long, global = true)]
    pub bits: bool,
    /// Directory for report files.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Check that (C, P) is a valid covariance pair.
    Validate(PairArgs),
    /// Gaussian entropy of a pair and the proper-Gaussian bound.
    Entropy(PairArgs),
    /// Capacity of y = Hx + z under an average power budget.
    Capacity(CapacityArgs),
    /// Sample the circular analog of a Gaussian pair.
    AnalogSample(AnalogArgs),
    /// Run a seeded property suite.
    Verify(VerifyArgs),
}

#[derive(Debug, clap::Args, Serialize)]
pub struct PairArgs {
    /// Covariance matrix file.
    #[arg(long)]
    pub cov: PathBuf,
    /// Complementary covariance matrix file (zero if omitted).
    #[arg(long)]
    pub pcov: Option<PathBuf>,
}

#[derive(Debug, clap::Args, Serialize)]
pub struct CapacityArgs {
    /// Channel matrix H.
    #[arg(long)]
    pub channel: PathBuf,
    /// Noise covariance C_z.
    #[arg(long)]
    pub noise_cov: PathBuf,
    /// Noise complementary covariance P_z (zero if omitted).
    #[arg(long)]
    pub noise_pcov: Option<PathBuf>,
    /// Power budget S.
    #[arg(long)]
    pub power: f64,
    /// Also report the loss of designing for proper noise.
    #[arg(long)]
    pub loss: bool,
}

#[derive(Debug, clap::Args, Serialize)]
pub struct AnalogArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    /// Neighbour count of the entropy estimate.
    #[arg(long, default_value_t = crate::entropy::DEFAULT_K)]
    pub k: usize,
}

#[derive(Debug, clap::Args, Serialize)]
pub struct VerifyArgs {
    /// algebra, entropy, analog, capacity or all.
    #[arg(long, default_value = "all")]
    pub suite: Suite,
    /// Neighbour count of the entropy estimates.
    #[arg(long, default_value_t = crate::entropy::DEFAULT_K)]
    pub k: usize,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn io(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_IO,
            message: message.into(),
        }
    }

    fn rejected(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_REJECTED,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DimensionMismatch(_) | Error::NonFinite(_) => EXIT_IO,
            _ => EXIT_REJECTED,
        };
        Self {
            code,
            message: format!("{}: {e}", e.code()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::io(e.to_string())
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    EXIT_OK
                }
                _ => EXIT_IO,
            };
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn execute(cli: &Cli) -> Result<u8, Failure> {
    if let Some(dir) = &cli.output {
        fs::create_dir_all(dir).map_err(|e| Failure::io(format!("{}: {e}", dir.display())))?;
    }
    let flags = serde_json::to_value(cli).expect("flags serialize");
    match &cli.command {
        Command::Validate(a) => cmd_validate(cli, a, flags),
        Command::Entropy(a) => cmd_entropy(cli, a, flags),
        Command::Capacity(a) => cmd_capacity(cli, a, flags),
        Command::AnalogSample(a) => cmd_analog_sample(cli, a, flags),
        Command::Verify(a) => cmd_verify(cli, a, flags),
    }
}

fn read(path: &Path) -> Result<ComplexMatrix, Failure> {
    read_matrix(path).map_err(Failure::io)
}

fn read_pair(args: &PairArgs) -> Result<(ComplexMatrix, ComplexMatrix), Failure> {
    let c = read(&args.cov)?;
    let p = match &args.pcov {
        Some(path) => read(path)?,
        None => ComplexMatrix::zeros(c.nrows(), c.ncols()),
    };
    Ok((c, p))
}

fn unit(cli: &Cli) -> &'static str {
    if cli.bits {
        "bits"
    } else {
        "nats"
    }
}

/// Display transform for information quantities held in nats.
fn info(cli: &Cli, nats: f64) -> f64 {
    if cli.bits {
        nats / std::f64::consts::LN_2
    } else {
        nats
    }
}

fn emit_report<T: Serialize>(cli: &Cli, manifest: &RunManifest, result: &T) -> Result<(), Failure> {
    if let Some(dir) = &cli.output {
        write_json(&dir.join("report.json"), &Report { manifest, result })?;
    }
    Ok(())
}

fn fmt_list(xs: &[f64]) -> String {
    let items: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(", "))
}

fn cmd_validate(cli: &Cli, args: &PairArgs, flags: Value) -> Result<u8, Failure> {
    let manifest = RunManifest::new("validate", flags, cli.seed);
    let (c, p) = read_pair(args)?;
    let validity = validate_pair(&c, &p)?;
    let lambdas = if validity.valid {
        Some(circularity_spectrum(&SecondOrderPair::zero_mean(c, p)?)?.lambdas)
    } else {
        None
    };
    if validity.valid {
        println!("valid, lambda_max={}", validity.max_lambda.unwrap_or(0.0));
        println!("lambdas: {}", fmt_list(lambdas.as_deref().unwrap_or(&[])));
    } else {
        println!("invalid: {}", validity.reason);
        if let Some(l) = validity.max_lambda {
            println!("lambda_max={l}");
        }
    }
    emit_report(
        cli,
        &manifest,
        &json!({ "validity": validity, "lambdas": lambdas }),
    )?;
    Ok(if validity.valid {
        EXIT_OK
    } else {
        EXIT_REJECTED
    })
}

fn cmd_entropy(cli: &Cli, args: &PairArgs, flags: Value) -> Result<u8, Failure> {
    let manifest = RunManifest::new("entropy", flags, cli.seed);
    let (c, p) = read_pair(args)?;
    let validity = validate_pair(&c, &p)?;
    if !validity.valid {
        return Err(Failure::rejected(format!(
            "invalid pair: {}",
            validity.reason
        )));
    }
    let pair = SecondOrderPair::zero_mean(c, p)?;
    let spectrum = circularity_spectrum(&pair)?;
    let h = complex_gaussian_entropy(&pair)?.value;
    let bound = neeser_massey_bound(&pair.c)?.value;
    let u = unit(cli);
    println!("entropy: {} {u}", info(cli, h));
    println!("proper_bound: {} {u}", info(cli, bound));
    println!("gap: {} {u}", info(cli, bound - h));
    println!("lambdas: {}", fmt_list(&spectrum.lambdas));
    emit_report(
        cli,
        &manifest,
        &json!({
            "entropy_nats": h,
            "proper_bound_nats": bound,
            "gap_nats": bound - h,
            "lambdas": spectrum.lambdas,
        }),
    )?;
    Ok(EXIT_OK)
}

fn cmd_capacity(cli: &Cli, args: &CapacityArgs, flags: Value) -> Result<u8, Failure> {
    let manifest = RunManifest::new("capacity", flags, cli.seed);
    let h = read(&args.channel)?;
    let cz = read(&args.noise_cov)?;
    let pz = match &args.noise_pcov {
        Some(path) => read(path)?,
        None => ComplexMatrix::zeros(cz.nrows(), cz.ncols()),
    };
    let noise = SecondOrderPair::zero_mean(cz, pz)?;
    let spec = ChannelSpec::new(h, noise, args.power);

    let violations = check_assumptions(&spec);
    if !violations.is_empty() {
        for v in &violations {
            println!("violation: {v}");
        }
        emit_report(cli, &manifest, &json!({ "violations": violations }))?;
        let kinds: Vec<String> = violations.iter().map(|v| v.kind.to_string()).collect();
        return Err(Failure::rejected(format!(
            "assumptions violated: {}",
            kinds.join(", ")
        )));
    }

    let r = solve_capacity(&spec)?;
    let loss = if args.loss {
        Some(capacity_loss(&spec)?)
    } else {
        None
    };
    let u = unit(cli);
    println!("capacity: {} {u}", info(cli, r.capacity_nats));
    println!("water_level: {}", r.water_level);
    println!("noise_lambdas: {}", fmt_list(&r.spectrum.lambdas));
    if let Some(l) = &loss {
        println!("capacity_loss: {} {u}", info(cli, l.delta_c_nats));
        println!("mus: {}", fmt_list(&l.mus));
    }

    if let Some(dir) = &cli.output {
        write_matrix(&dir.join("input_cov.json"), &r.input_pair.c)?;
        write_matrix(&dir.join("input_pcov.json"), &r.input_pair.p)?;
        let row = [
            spec.dim().to_string(),
            spec.power.to_string(),
            r.spectrum.max().to_string(),
            r.capacity_nats.to_string(),
            loss.as_ref()
                .map(|l| l.delta_c_nats.to_string())
                .unwrap_or_default(),
            r.water_level.to_string(),
            cli.seed.to_string(),
        ];
        append_csv_row(&dir.join("capacity.csv"), &CAPACITY_CSV_HEADER, &row)?;
    }
    emit_report(
        cli,
        &manifest,
        &json!({
            "capacity_nats": r.capacity_nats,
            "water_level": r.water_level,
            "noise_lambdas": r.spectrum.lambdas,
            "input_cov": MatrixFile::from_matrix(&r.input_pair.c),
            "input_pcov": MatrixFile::from_matrix(&r.input_pair.p),
            "delta_c_nats": loss.as_ref().map(|l| l.delta_c_nats),
            "mus": loss.as_ref().map(|l| l.mus.clone()),
        }),
    )?;
    Ok(EXIT_OK)
}

fn cmd_analog_sample(cli: &Cli, args: &AnalogArgs, flags: Value) -> Result<u8, Failure> {
    let manifest = RunManifest::new("analog-sample", flags, cli.seed);
    let (c, p) = read_pair(&args.pair)?;
    let validity = validate_pair(&c, &p)?;
    if !validity.valid {
        return Err(Failure::rejected(format!(
            "invalid pair: {}",
            validity.reason
        )));
    }
    let pair = SecondOrderPair::zero_mean(c, p)?;
    let x = sample_gaussian(&pair, cli.samples, derive_seed(cli.seed, 0))?;
    let analog = circularize(&x, derive_seed(cli.seed, 1));
    let emp = empirical_pair(&analog)?;
    let spectrum = circularity_spectrum(&pair)?;
    let bound = neeser_massey_bound(&pair.c)?.value;
    let h = complex_gaussian_entropy(&pair).ok().map(|e| e.value);
    let h_analog = if analog.count() >= SAMPLES_PER_NEIGHBOR * args.k {
        Some(knn_entropy(&analog, args.k)?)
    } else {
        None
    };

    let u = unit(cli);
    println!("samples: {}", analog.count());
    println!("lambdas: {}", fmt_list(&spectrum.lambdas));
    if let Some(h) = h {
        println!("gaussian_entropy: {} {u}", info(cli, h));
    }
    match &h_analog {
        Some(e) => println!(
            "analog_entropy_estimate: {} {u} (stderr {})",
            info(cli, e.value),
            info(cli, e.stderr_or_zero())
        ),
        None => println!(
            "analog_entropy_estimate: skipped (fewer than {} samples)",
            SAMPLES_PER_NEIGHBOR * args.k
        ),
    }
    println!("proper_bound: {} {u}", info(cli, bound));
    println!("analog_max_abs_pcov: {}", emp.p.camax());

    if let Some(dir) = &cli.output {
        let n = analog.dim();
        let mut text = String::new();
        let header: Vec<String> = (0..n)
            .flat_map(|i| [format!("re_{i}"), format!("im_{i}")])
            .collect();
        text.push_str(&header.join(","));
        text.push('\n');
        for v in analog.vectors() {
            let row: Vec<String> = v
                .iter()
                .flat_map(|z| [z.re.to_string(), z.im.to_string()])
                .collect();
            text.push_str(&row.join(","));
            text.push('\n');
        }
        fs::write(dir.join("samples.csv"), text)?;
    }
    emit_report(
        cli,
        &manifest,
        &json!({
            "samples": analog.count(),
            "lambdas": spectrum.lambdas,
            "gaussian_entropy_nats": h,
            "analog_entropy_estimate": h_analog,
            "proper_bound_nats": bound,
            "analog_cov": MatrixFile::from_matrix(&emp.c),
            "analog_pcov": MatrixFile::from_matrix(&emp.p),
        }),
    )?;
    Ok(EXIT_OK)
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs, flags: Value) -> Result<u8, Failure> {
    let manifest = RunManifest::new("verify", flags, cli.seed);
    let config = VerifyConfig {
        seed: cli.seed,
        samples: cli.samples,
        k: args.k,
    };
    let results = run_suite(args.suite, &config);
    for r in &results {
        println!("{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} properties, {} failed", results.len(), failed);
    emit_report(
        cli,
        &manifest,
        &json!({ "suite": args.suite, "properties": results }),
    )?;
    Ok(if failed == 0 {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}
