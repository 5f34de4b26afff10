//! The `qwr` command line.
//!
//! Every seeded command takes one `--seed`; steps draw their own sub-seeds
//! from it by name, so identical arguments give byte-identical outputs.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use qwr_core::cone::{self, ConeInput, ReduceConfig};
use qwr_core::metrics::{self, DEFAULT_BUDGET};
use qwr_core::pipeline::{self, ApplicConfig, PipelineConfig};
use qwr_core::randapplic::{self, RandomCodeSpec};
use qwr_core::{copygauge, fixtures, rng, robustify, thicken, CssCode, PauliKind, Rational, TransformReport};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::format::{self, CodeFile};
use crate::report::ReportFile;

/// Metadata key recording the first Z-row produced by the interval edges of a thickening.
pub const PRODUCT_EDGE_KEY: &str = "product_edge_rows_from";

#[derive(Parser, Debug)]
#[command(name = "qwr", version, about = "Weight reduction for CSS quantum codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check commutation and print the parameter ledger.
    Validate { input: PathBuf },
    /// Parameters with distances, reasonableness and connectivity.
    Params {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ParamsDistance::Auto)]
        distance: ParamsDistance,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Minimum weight of a nontrivial logical of one kind.
    Distance {
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Copy qubits and gauge X-stabilizers down to weight 3.
    CopyGauge {
        input: PathBuf,
        output: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        plan: Option<PathBuf>,
    },
    /// Product with an interval, keeping each Z-stabilizer at one height.
    Thicken {
        input: PathBuf,
        output: PathBuf,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long, default_value_t = 3)]
        target_w: usize,
        #[arg(long, value_enum, default_value_t = Strategy::Random)]
        strategy: Strategy,
        #[arg(long, default_value_t = thicken::DEFAULT_RETRIES)]
        retries: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Replace Z-stabilizers by induced ones through a mapping cone.
    Cone {
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        cone: ConeArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Make every Z-stabilizer's support graph connected.
    Connect {
        input: PathBuf,
        output: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Cone with graphs augmented to a target Cheeger constant.
    ImproveSoundness {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, value_parser = parse_rational)]
        target_h: Rational,
        #[command(flatten)]
        cone: ConeArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run the full weight-reduction pipeline.
    Reduce {
        input: PathBuf,
        output: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Sample random codes, thicken, reduce and balance; print scaling rows.
    ReduceApplic {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, value_parser = parse_rational)]
        beta: Rational,
        #[arg(long, value_parser = parse_rational)]
        ell_factor: Option<Rational>,
        /// Independent runs per size; run `i` uses a sub-seed derived from `--seed`.
        #[arg(long, default_value_t = 1)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Final code, written only for a single size and run.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Sample a random code and its diagnostics.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_rational)]
        beta: Rational,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        diagnostics: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a named code family.
    GenFixture {
        #[arg(value_enum)]
        name: Fixture,
        /// Torus side for toric and fig1, cube side for punctured-sphere.
        #[arg(long)]
        size: Option<usize>,
        /// Number of sides of the merged fig1 face.
        #[arg(long, default_value_t = 6)]
        face: usize,
        /// Destination; standard output when absent.
        output: Option<PathBuf>,
    },
}

#[derive(clap::Args, Debug, Clone)]
pub struct ConeArgs {
    /// `auto` or a JSON file holding a list of qubit sets.
    #[arg(long, default_value = "auto")]
    sets: String,
    /// `auto`, `none`, or a comma-separated list of Z-stabilizer indices.
    #[arg(long, default_value = "auto")]
    direct_z: String,
    #[arg(long)]
    ell_prime: Option<usize>,
    #[arg(long, default_value_t = cone::DEFAULT_CELLULATION_THRESHOLD)]
    threshold: usize,
    #[arg(long, default_value_t = thicken::DEFAULT_RETRIES)]
    retries: usize,
    /// Stop after the cone, without the dual thickening and cellulation.
    #[arg(long)]
    no_reduce: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    X,
    Z,
}

impl From<Kind> for PauliKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::X => PauliKind::X,
            Kind::Z => PauliKind::Z,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    Estimate,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamsDistance {
    None,
    Exact,
    Estimate,
    /// Exact within the budget, otherwise an estimate.
    Auto,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Random,
    Coloring,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fixture {
    Toric,
    Steane,
    Fig1,
    PuncturedSphere,
}

/// Parses `a/b`, an integer, or a finite decimal such as `0.5`.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        let digits = u32::try_from(frac.len()).map_err(|_| format!("bad number {s:?}"))?;
        let denom = 10u64.checked_pow(digits).ok_or_else(|| format!("too many decimals in {s:?}"))?;
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| format!("bad number {s:?}"))? };
        let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| format!("bad number {s:?}"))? };
        let numer = int.checked_mul(denom).and_then(|v| v.checked_add(frac)).ok_or_else(|| format!("{s:?} overflows"))?;
        return Ok(Rational::new(numer, denom));
    }
    let r: Rational = s.parse().map_err(|_| format!("expected a/b, an integer or a decimal, got {s:?}"))?;
    Ok(r)
}

/// Thread cap from `QWR_THREADS`; unset or `0` leaves the choice to rayon.
pub fn thread_cap() -> Result<Option<usize>, CliError> {
    match std::env::var("QWR_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(0) => Ok(None),
            Ok(t) => Ok(Some(t)),
            Err(_) => Err(CliError::Usage(format!("QWR_THREADS must be a non-negative integer, got {v:?}"))),
        },
    }
}

fn print_json<T: Serialize>(value: &T) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(format::to_json_pretty(value).as_bytes());
}

fn write_report(path: Option<&Path>, report: ReportFile) -> Result<(), CliError> {
    if let Some(p) = path {
        format::write_text(p, &format::to_json_pretty(&report))?;
    }
    Ok(())
}

fn derived(input: &CodeFile, code: CssCode, step: &str) -> CodeFile {
    let mut meta = input.meta.clone();
    meta.remove(PRODUCT_EDGE_KEY);
    meta.insert("last_transform".into(), step.into());
    CodeFile { code, meta }
}

fn direct_rows(spec: &str, file: &CodeFile) -> Result<Vec<usize>, CliError> {
    match spec {
        "auto" => {
            let from = file.meta.get(PRODUCT_EDGE_KEY).and_then(Value::as_u64).map(|v| v as usize);
            Ok(from.map_or_else(Vec::new, |f| (f..file.code.hz().num_rows()).collect()))
        }
        "none" | "" => Ok(Vec::new()),
        list => list
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("--direct-z: bad index {t:?}"))))
            .collect(),
    }
}

fn cone_input(args: &ConeArgs, file: &CodeFile) -> Result<ConeInput, CliError> {
    let direct = direct_rows(&args.direct_z, file)?;
    if args.sets == "auto" {
        return Ok(ConeInput::from_supports(file.code.clone(), direct));
    }
    let q_sets: Vec<Vec<usize>> = format::read_json(Path::new(&args.sets))?;
    Ok(ConeInput { base: file.code.clone(), direct_z: direct, q_sets })
}

fn reduce_config(args: &ConeArgs) -> ReduceConfig {
    ReduceConfig { ell_prime: args.ell_prime, threshold: args.threshold, max_retries: args.retries }
}

fn cone_config(args: &ConeArgs, input: &ConeInput) -> Value {
    json!({
        "sets": args.sets,
        "direct_z": input.direct_z,
        "ell_prime": args.ell_prime,
        "threshold": args.threshold,
        "retries": args.retries,
        "reduce": !args.no_reduce,
    })
}

/// Cones with the given complexes and, unless disabled, reduces the result.
fn cone_and_reduce(
    args: &ConeArgs,
    input: &ConeInput,
    complexes: &[cone::BComplex],
    seed: u64,
) -> Result<(CssCode, Vec<TransformReport>), CliError> {
    let (coned, layout, report) = cone::cone_code(input, complexes)?;
    let mut reports = vec![report];
    if args.no_reduce {
        return Ok((coned, reports));
    }
    let (reduced, report) = cone::reduce_cone(&coned, &layout, &reduce_config(args), rng::derive(seed, "reduce-cone"))?;
    reports.push(report);
    Ok((reduced, reports))
}

fn params_json(code: &CssCode, mode: ParamsDistance, budget: u64, trials: usize, seed: u64) -> Result<Value, CliError> {
    let mut params = code.validate()?;
    match mode {
        ParamsDistance::None => {}
        ParamsDistance::Exact => {
            params.d_x = Some(metrics::distance_exact(code, PauliKind::X, budget)?.tagged());
            params.d_z = Some(metrics::distance_exact(code, PauliKind::Z, budget)?.tagged());
        }
        ParamsDistance::Estimate => {
            params.d_x = Some(metrics::distance_estimate(code, PauliKind::X, trials, rng::derive(seed, "distance-x"))?.tagged());
            params.d_z = Some(metrics::distance_estimate(code, PauliKind::Z, trials, rng::derive(seed, "distance-z"))?.tagged());
        }
        ParamsDistance::Auto => {
            let (dx, dz) = metrics::distances(code, budget, trials, seed)?;
            params.d_x = Some(dx);
            params.d_z = Some(dz);
        }
    }
    Ok(json!({
        "params": params,
        "reasonable": code.is_reasonable().is_reasonable(),
        "connected": code.is_connected(),
    }))
}

#[derive(Serialize)]
struct SweepRow {
    n: usize,
    run: usize,
    seed: u64,
    #[serde(flatten)]
    row: pipeline::ScalingRow,
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Validate { input } => {
            let file = format::read_code(&input)?;
            print_json(&file.code.validate()?);
        }
        Command::Params { input, distance, budget, trials, seed } => {
            let file = format::read_code(&input)?;
            print_json(&params_json(&file.code, distance, budget, trials, seed)?);
        }
        Command::Distance { input, kind, method, budget, trials, seed } => {
            let file = format::read_code(&input)?;
            file.code.check_commutation()?;
            let result = match method {
                Method::Exact => metrics::distance_exact(&file.code, kind.into(), budget)?,
                Method::Estimate => metrics::distance_estimate(&file.code, kind.into(), trials, seed)?,
            };
            print_json(&result);
        }
        Command::CopyGauge { input, output, report, plan } => {
            let file = format::read_code(&input)?;
            let (code, xplan, rep) = copygauge::x_reduce(&file.code)?;
            format::write_code(&output, &derived(&file, code, "copy-gauge"))?;
            if let Some(p) = plan {
                format::write_text(&p, &format::to_json_pretty(&xplan))?;
            }
            write_report(report.as_deref(), ReportFile::new("copy-gauge", None, json!({}), vec![rep]))?;
        }
        Command::Thicken { input, output, ell, target_w, strategy, retries, seed, report } => {
            let file = format::read_code(&input)?;
            let p = file.code.validate()?;
            let (ell, heights) = match strategy {
                Strategy::Coloring => {
                    let (formula, h) = thicken::choose_heights_coloring(&file.code);
                    (ell.unwrap_or(formula.max(2)), h)
                }
                Strategy::Random => {
                    let ell = ell.unwrap_or_else(|| thicken::suggested_ell(p.q_z, p.w_z, p.n, target_w).max(2));
                    (ell, thicken::choose_heights_random(&file.code, ell, target_w, rng::derive(seed, "thicken-heights"), retries)?)
                }
            };
            let (code, mut rep) = thicken::thicken(&file.code, ell, &heights)?;
            rep.seed = Some(seed);
            let out = derived(&file, code, "thicken").with_meta(PRODUCT_EDGE_KEY, p.n_z);
            format::write_code(&output, &out)?;
            let config = json!({
                "ell": ell,
                "target_w": target_w,
                "strategy": format!("{strategy:?}").to_lowercase(),
                "retries": retries,
                "heights": heights.heights,
            });
            write_report(report.as_deref(), ReportFile::new("thicken", Some(seed), config, vec![rep]))?;
        }
        Command::Cone { input, output, cone: args, seed, report } => {
            let file = format::read_code(&input)?;
            file.code.check_commutation()?;
            let ci = cone_input(&args, &file)?;
            let complexes = ci.complexes()?;
            let (code, reps) = cone_and_reduce(&args, &ci, &complexes, seed)?;
            format::write_code(&output, &derived(&file, code, "cone"))?;
            write_report(report.as_deref(), ReportFile::new("cone", Some(seed), cone_config(&args, &ci), reps))?;
        }
        Command::Connect { input, output, report } => {
            let file = format::read_code(&input)?;
            let (code, plan, rep) = robustify::connect(&file.code)?;
            format::write_code(&output, &derived(&file, code, "connect"))?;
            write_report(report.as_deref(), ReportFile::new("connect", None, json!({ "plan": plan }), vec![rep]))?;
        }
        Command::ImproveSoundness { input, output, target_h, cone: args, seed, report } => {
            let file = format::read_code(&input)?;
            let ci = cone_input(&args, &file)?;
            let (complexes, augmentations, rep) =
                robustify::improve_soundness(&file.code, &ci.q_sets, target_h, rng::derive(seed, "augment"))?;
            let (code, reps) = cone_and_reduce(&args, &ci, &complexes, seed)?;
            format::write_code(&output, &derived(&file, code, "improve-soundness"))?;
            let summary: Vec<Value> = augmentations
                .iter()
                .map(|a| json!({ "added": a.added, "cheeger": a.cheeger, "degree_increase": a.degree_increase, "rounds": a.rounds }))
                .collect();
            print_json(&summary);
            let mut config = cone_config(&args, &ci);
            config["target_h"] = json!(target_h);
            let mut all = vec![rep];
            all.extend(reps);
            write_report(report.as_deref(), ReportFile::new("improve-soundness", Some(seed), config, all))?;
        }
        Command::Reduce { input, output, config, seed, report } => {
            let file = format::read_code(&input)?;
            let cfg: PipelineConfig = match config {
                Some(p) => format::read_json(&p)?,
                None => PipelineConfig::default(),
            };
            let (code, reps) = pipeline::reduce_full(&file.code, &cfg, seed)?;
            format::write_code(&output, &derived(&file, code, "reduce"))?;
            let cfg = serde_json::to_value(&cfg).expect("config serializes");
            write_report(report.as_deref(), ReportFile::new("reduce", Some(seed), cfg, reps))?;
        }
        Command::ReduceApplic { n, beta, ell_factor, runs, seed, config, out, report } => {
            let mut cfg: ApplicConfig = match config {
                Some(p) => format::read_json(&p)?,
                None => ApplicConfig::default(),
            };
            if let Some(c) = ell_factor {
                cfg.ell_factor = c;
            }
            let jobs: Vec<(usize, usize)> = n.iter().flat_map(|&n| (0..runs).map(move |r| (n, r))).collect();
            if out.is_some() && jobs.len() != 1 {
                return Err(CliError::Usage("--out needs a single --n and --runs 1".into()));
            }
            let job_seed = |r: usize| if runs == 1 { seed } else { rng::derive_index(seed, r as u64) };
            let mut builder = rayon::ThreadPoolBuilder::new();
            if let Some(t) = thread_cap()? {
                builder = builder.num_threads(t);
            }
            let pool = builder.build().map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
            let results: Vec<_> = pool.install(|| {
                jobs.par_iter()
                    .map(|&(n, r)| pipeline::reduce_applic(&RandomCodeSpec::new(n, beta, job_seed(r)), &cfg))
                    .collect()
            });
            let mut rows = Vec::with_capacity(jobs.len());
            let mut all_reports = Vec::new();
            for (&(n, r), res) in jobs.iter().zip(results) {
                let (code, reps, row, _) = res?;
                rows.push(SweepRow { n, run: r, seed: job_seed(r), row });
                if let Some(p) = &out {
                    format::write_code(p, &CodeFile::new(code).with_meta("last_transform", "reduce-applic"))?;
                }
                all_reports.extend(reps);
            }
            print_json(&rows);
            let config = json!({ "n": n, "beta": beta, "runs": runs, "applic": cfg });
            write_report(report.as_deref(), ReportFile::new("reduce-applic", Some(seed), config, all_reports))?;
        }
        Command::Random { n, beta, seed, diagnostics, out } => {
            let (code, diag) = randapplic::build_applic_code(&RandomCodeSpec::new(n, beta, seed))?;
            if let Some(p) = diagnostics {
                format::write_text(&p, &format::to_json_pretty(&diag))?;
            }
            if let Some(p) = out {
                format::write_code(&p, &CodeFile::new(code.clone()).with_meta("last_transform", "random"))?;
            }
            print_json(&code.validate()?);
        }
        Command::GenFixture { name, size, face, output } => {
            let (code, label) = match name {
                Fixture::Toric => (fixtures::try_toric(size.unwrap_or(3))?, "toric"),
                Fixture::Steane => (fixtures::steane(), "steane"),
                Fixture::Fig1 => (fixtures::try_fig1(size.unwrap_or(3), face)?, "fig1"),
                Fixture::PuncturedSphere => (fixtures::try_punctured_sphere(size.unwrap_or(2))?, "punctured-sphere"),
            };
            let mut file = CodeFile::new(code).with_meta("family", label);
            if let Some(s) = size.filter(|_| name != Fixture::Steane) {
                file = file.with_meta("size", s);
            }
            if name == Fixture::Fig1 {
                file = file.with_meta("face", face);
            }
            match output {
                Some(p) => format::write_code(&p, &file)?,
                None => {
                    let _ = std::io::stdout().lock().write_all(format::code_to_json(&file).as_bytes());
                }
            }
        }
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(std::io::stderr().lock(), "{}", e.payload());
            e.exit_code()
        }
    }
}
