use clap::{Parser, Subcommand, ValueEnum};
use ldpc_cs::analysis::{
    bernoulli_union_bound, bernoulli_union_bound_chernoff, ensemble_exponent, measurement_bound, prop3_rate_bound,
    rate_function, EntropyScale,
};
use ldpc_cs::bp::MultiBasis;
use ldpc_cs::codes::{
    column_regular, ensemble_e, expurgate_first_coordinate, peg, LinearCode, DEFAULT_ENUMERATION_CAP,
};
use ldpc_cs::cs_bp::{bp_omp, bp_sp, mbbp_omp, mmpc_omp, CodeGraph, CsBpParams};
use ldpc_cs::greedy::{omp, sp, ReconResult};
use ldpc_cs::sensing::{coherence, SensingMatrix};
use ldpc_cs_harness::alist::{read_alist, write_alist};
use ldpc_cs_harness::experiment::{
    cutoff_density, Algorithm, Experiment, ExperimentConfig, SignalChoice, DEFAULT_CUTOFF_THRESHOLD,
};
use ldpc_cs_harness::report::{read_csv, to_csv, write_csv, write_svg};
use ldpc_cs_harness::HarnessError;
use rand::SeedableRng;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "ldpc-cs",
    version,
    about = "LDPC-code sensing matrices and BP-based sparse reconstruction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CodeKind {
    EnsembleE,
    ColRegular,
    Peg,
}

#[derive(Clone, Copy, ValueEnum)]
enum Curve {
    Exponent,
    RateFunction,
    Bounds,
}

#[derive(Clone, Copy, ValueEnum)]
enum YScaling {
    Normalized,
    PmOne,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a parity-check matrix and write it as alist.
    GenCode {
        #[arg(long, value_enum)]
        kind: CodeKind,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        checks: usize,
        /// Row weight (ensemble-e).
        #[arg(long)]
        wr: Option<usize>,
        /// Column weight (col-regular, peg).
        #[arg(long)]
        wc: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print code and sensing-matrix properties.
    MatrixInfo {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        expurgate: bool,
    },
    /// Tabulate an analysis curve as CSV.
    Analyze {
        #[arg(long, value_enum)]
        curve: Curve,
        /// `key=value` pairs, comma separated or repeated.
        #[arg(long, value_delimiter = ',')]
        params: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reconstruct a sparse vector from one observation.
    Decode {
        #[arg(long)]
        code: PathBuf,
        /// Whitespace-separated observation values.
        #[arg(long)]
        y: PathBuf,
        #[arg(long)]
        alg: Algorithm,
        #[arg(long)]
        k: usize,
        #[arg(long = "L", default_value_t = ldpc_cs::bp::DEFAULT_LIST_SIZE)]
        list_size: usize,
        #[arg(long = "B", default_value_t = ldpc_cs::bp::DEFAULT_BIAS)]
        bias: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "binary")]
        signal: SignalArg,
        /// Units of `y`: unit-norm columns or raw +-1 columns.
        #[arg(long, value_enum, default_value = "normalized")]
        scaling: YScaling,
    },
    /// Run a Monte-Carlo experiment from a TOML config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's CSV path; `-` writes to stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Draw results CSV as an SVG chart.
    Plot {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Log-scale error axis (zeros drawn at 1e-4).
        #[arg(long)]
        log_y: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SignalArg {
    Binary,
    Gaussian,
}

impl From<SignalArg> for SignalChoice {
    fn from(s: SignalArg) -> Self {
        match s {
            SignalArg::Binary => SignalChoice::Binary,
            SignalArg::Gaussian => SignalChoice::Gaussian,
        }
    }
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Config(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<ldpc_cs::Error> for Failure {
    fn from(e: ldpc_cs::Error) -> Self {
        match e {
            ldpc_cs::Error::InvalidParameter(_) | ldpc_cs::Error::Infeasible(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Runtime(format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) if p != Path::new("-") => std::fs::write(p, text).map_err(|e| io_err(p, e)),
        _ => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_code(path: &Path, expurgate: bool) -> Result<LinearCode, Failure> {
    let h = read_alist(path)?;
    let code = LinearCode::from_parity(h)?;
    Ok(if expurgate {
        expurgate_first_coordinate(&code)?
    } else {
        code
    })
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::GenCode {
            kind,
            m,
            checks,
            wr,
            wc,
            seed,
            out,
        } => {
            let need = |v: Option<usize>, flag: &str| {
                v.ok_or_else(|| Failure::Usage(format!("--{flag} is required for this kind")))
            };
            let h = match kind {
                CodeKind::EnsembleE => ensemble_e(m, checks, need(wr, "wr")?, seed)?,
                CodeKind::ColRegular => column_regular(m, checks, need(wc, "wc")?, seed)?,
                CodeKind::Peg => peg(m, checks, &vec![need(wc, "wc")?; m], seed)?,
            };
            write_alist(&out, &h)?;
            Ok(())
        }
        Command::MatrixInfo { code, expurgate } => matrix_info(&code, expurgate),
        Command::Analyze { curve, params, out } => {
            let text = analyze(curve, &params)?;
            emit(out.as_deref(), &text)
        }
        Command::Decode {
            code,
            y,
            alg,
            k,
            list_size,
            bias,
            seed,
            signal,
            scaling,
        } => {
            let code = load_code(&code, false)?;
            let text = std::fs::read_to_string(&y).map_err(|e| io_err(&y, e))?;
            let obs = text
                .split_whitespace()
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|_| Failure::Usage(format!("bad observation value {t:?}")))
                })
                .collect::<Result<Vec<f64>, _>>()?;
            let res = decode(code, &obs, alg, k, list_size, bias, seed, signal.into(), scaling)?;
            let mut s = String::new();
            writeln!(s, "index,message,value").unwrap();
            for (&j, &v) in res.estimate.support().iter().zip(res.estimate.values()) {
                writeln!(s, "{j},{},{v}", j + 1).unwrap();
            }
            eprintln!(
                "residual_norm={} iterations={} converged={} padded={:?}",
                res.residual_norm, res.iterations, res.converged, res.padded
            );
            emit(None, &s)
        }
        Command::Simulate { config, csv, plot } => {
            let cfg = ExperimentConfig::load(&config)?;
            let csv = csv.or_else(|| cfg.output.csv.clone());
            let plot = plot.or_else(|| cfg.output.plot.clone());
            let exp = Experiment::new(cfg)?;
            let rows = exp.run();
            match csv.as_deref() {
                Some(p) if p != Path::new("-") => write_csv(p, &rows)?,
                _ => print!("{}", to_csv(&rows)?),
            }
            if let Some(p) = plot {
                write_svg(&p, &rows, true)?;
            }
            eprintln!(
                "cut-off density at {DEFAULT_CUTOFF_THRESHOLD}: {}",
                cutoff_density(&rows, DEFAULT_CUTOFF_THRESHOLD)?
            );
            Ok(())
        }
        Command::Plot { input, out, log_y } => {
            let rows = read_csv(&input)?;
            write_svg(&out, &rows, log_y)?;
            Ok(())
        }
    }
}

fn matrix_info(path: &Path, expurgate: bool) -> Result<(), Failure> {
    let code = load_code(path, expurgate)?;
    let h = code.parity_check();
    let rw = h.row_weights();
    let cw = h.col_weights();
    let range = |v: &[usize]| {
        format!(
            "{}..{}",
            v.iter().min().copied().unwrap_or(0),
            v.iter().max().copied().unwrap_or(0)
        )
    };
    println!("length m: {}", code.length());
    println!("checks: {}", h.rows());
    println!("rank: {}", h.rank());
    println!("dimension s: {}", code.dimension());
    println!("rate: {}", code.rate());
    println!("row weights: {}", range(&rw));
    println!("column weights: {}", range(&cw));
    match h.girth() {
        Some(g) => println!("girth: {g}"),
        None => println!("girth: none (cycle-free)"),
    }
    println!("contains all-ones word: {}", code.contains_all_ones());
    if code.dimension() <= DEFAULT_ENUMERATION_CAP {
        let mat = SensingMatrix::new(code)?;
        let rep = coherence(&mat, DEFAULT_ENUMERATION_CAP)?;
        println!("columns N: {}", mat.n_cols());
        println!("coherence mu: {}", rep.mu);
        let show = |v: Option<usize>| v.map_or("unbounded".to_string(), |k| k.to_string());
        println!("window holds up to K: {}", show(rep.window_ok_for_k));
        println!("OMP guarantee up to K: {}", show(rep.omp_guarantee_max_k));
    } else {
        println!("dimension above {DEFAULT_ENUMERATION_CAP}: spectrum not enumerated");
    }
    Ok(())
}

fn parse_params(params: &[String]) -> Result<BTreeMap<String, f64>, Failure> {
    params
        .iter()
        .filter(|p| !p.is_empty())
        .map(|p| {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| Failure::Usage(format!("expected key=value, found {p:?}")))?;
            let v = v
                .parse::<f64>()
                .map_err(|_| Failure::Usage(format!("bad number for {k}: {v:?}")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

fn analyze(curve: Curve, params: &[String]) -> Result<String, Failure> {
    let mut p = parse_params(params)?;
    let mut take = |key: &str, default: Option<f64>| -> Result<f64, Failure> {
        p.remove(key)
            .or(default)
            .ok_or_else(|| Failure::Usage(format!("missing parameter {key}")))
    };
    let mut s = String::new();
    match curve {
        Curve::Exponent => {
            let rate = take("rate", None)?;
            let wr = take("wr", Some(3.0))? as u32;
            let step = take("step", Some(1e-3))?;
            if !(step > 0.0 && step <= 0.5) {
                return Err(Failure::Usage("step must lie in (0, 0.5]".into()));
            }
            writeln!(s, "theta,b_theta").unwrap();
            let n = (1.0 / step).round() as usize;
            for i in 1..n {
                let theta = i as f64 * step;
                writeln!(s, "{theta},{}", ensemble_exponent(theta, rate, wr)?).unwrap();
            }
        }
        Curve::RateFunction => {
            let step = take("step", Some(0.05))?;
            let max = take("max", Some(0.9))?;
            writeln!(s, "x,exact,quadratic,theta_star").unwrap();
            let n = (max / step + 1e-9).floor() as usize;
            for i in 1..=n {
                let x = i as f64 * step;
                let r = rate_function(x)?;
                writeln!(s, "{x},{},{},{}", r.exact, r.quadratic, r.theta_star).unwrap();
            }
        }
        Curve::Bounds => {
            let n = take("n", Some(1023.0))? as u64;
            let m = take("m", Some(160.0))? as u64;
            let kmax = take("kmax", Some(30.0))? as u64;
            writeln!(
                s,
                "K,measurement_bound,binary_rip_rate,union_bound_ln,union_bound_chernoff_ln"
            )
            .unwrap();
            for k in 2..=kmax {
                writeln!(
                    s,
                    "{k},{},{},{},{}",
                    measurement_bound(k, n)?,
                    prop3_rate_bound(k, EntropyScale::OverK)?,
                    bernoulli_union_bound(m, n, k)?,
                    bernoulli_union_bound_chernoff(m, n, k)?
                )
                .unwrap();
            }
        }
    }
    if let Some(k) = p.keys().next() {
        return Err(Failure::Usage(format!("unknown parameter {k}")));
    }
    Ok(s)
}

#[allow(clippy::too_many_arguments)]
fn decode(
    code: LinearCode,
    y: &[f64],
    alg: Algorithm,
    k: usize,
    list_size: usize,
    bias: f64,
    seed: u64,
    signal: SignalChoice,
    scaling: YScaling,
) -> Result<ReconResult, Failure> {
    let m = code.length();
    if y.len() != m {
        return Err(Failure::Usage(format!(
            "observation has {} entries, code length is {m}",
            y.len()
        )));
    }
    let root = (m as f64).sqrt();
    let (y_norm, y_pm): (Vec<f64>, Vec<f64>) = match scaling {
        YScaling::Normalized => (y.to_vec(), y.iter().map(|v| v * root).collect()),
        YScaling::PmOne => (y.iter().map(|v| v / root).collect(), y.to_vec()),
    };
    let params = CsBpParams {
        signal: signal.kind(),
        list_size,
        bias,
        ..CsBpParams::default()
    };
    let res = match alg {
        Algorithm::Omp => omp(&SensingMatrix::new(code)?, &y_norm, k, 0.0)?,
        Algorithm::Sp => sp(&SensingMatrix::new(code)?, &y_norm, k)?,
        Algorithm::BpOmp => bp_omp(&CodeGraph::new(code)?, &y_pm, k, &params, seed)?,
        Algorithm::BpSp => bp_sp(&CodeGraph::new(code)?, &y_pm, k, &params, seed)?,
        Algorithm::MmpcOmp => mmpc_omp(&CodeGraph::new(code)?, &y_pm, k, &params, seed)?,
        Algorithm::MbbpOmp => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let bases = MultiBasis::with_systematic_forms(code.parity_check(), 3, &mut rng)?;
            mbbp_omp(&CodeGraph::new(code)?, &bases, &y_pm, k, &params, seed)?
        }
    };
    Ok(res)
}
