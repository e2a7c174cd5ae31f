use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use simplectra::clt::{sigma, sigma_exact, sigma_oracle_with, sigma_table, SigmaParams};
use simplectra::complex::{adjacency_matrix, parse_complex};
use simplectra::lm::{centered_scaled, sample_lm, LMParams, LMSample};
use simplectra::mc::{estimate, run_experiment, write_outputs, ExperimentConfig};
use simplectra::spectral::{eigenvalues_sym, kolmogorov_distance, moment, Spectrum};
use simplectra::words::{class_summary, pair_tag, Enumerator, RawSentence, DEFAULT_BUDGET};
use simplectra::{Error, SCHEMA};

#[derive(Parser)]
#[command(name = "simplectra", version, about = "Spectra of Linial-Meshulam random complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample Y^d_{n,p} and write it in the complex text format.
    Sample {
        #[command(flatten)]
        lm: LmArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eigenvalues, moments and the distance to the semicircle law.
    Spectrum(SpectrumArgs),
    /// Count and dump classes of closed words and sentences.
    Enumerate(EnumerateArgs),
    /// Limiting covariances sigma(k,l).
    Sigma(SigmaArgs),
    /// Run a Monte Carlo experiment from a JSON or TOML config.
    Mc {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
        /// Output directory; defaults to the config's `output`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone, Copy)]
struct LmArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    seed: u64,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Complex file; sampled from the flags below when absent.
    #[arg(long = "in", conflicts_with_all = ["n", "d", "p", "seed"])]
    input: Option<PathBuf>,
    #[arg(long, requires_all = ["d", "p", "seed"])]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Highest moment order reported.
    #[arg(long = "k-moments", default_value_t = 4)]
    k_moments: u32,
    #[arg(long, value_enum, default_value_t = MatrixKind::Auto)]
    matrix: MatrixKind,
    /// Directory for eigenvalues.csv and moments.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MatrixKind {
    /// H_n when p is known and inside (0, 1), otherwise the adjacency matrix.
    Auto,
    Adjacency,
    Centered,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Words,
    Pairs,
    H,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    d: usize,
    /// Word steps; comma-separated list in mode h.
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<usize>,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long, conflicts_with = "all_s", required_unless_present = "all_s")]
    s: Option<usize>,
    #[arg(long)]
    all_s: bool,
    #[arg(long, value_enum, default_value_t = Mode::Words)]
    mode: Mode,
    /// File receiving one JSON summary per class.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SigmaArgs {
    #[arg(long)]
    d: usize,
    #[arg(long = "p-inf")]
    p_inf: String,
    #[arg(long = "K", conflicts_with_all = ["k", "l"], required_unless_present_all = ["k", "l"])]
    table: Option<usize>,
    #[arg(long, requires = "l")]
    k: Option<usize>,
    #[arg(long, requires = "k")]
    l: Option<usize>,
    /// Also evaluate through exhaustive enumeration.
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn budget() -> Result<u64, Error> {
    match std::env::var("SIMPLECTRA_BUDGET") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("SIMPLECTRA_BUDGET={v:?} is not an integer"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

/// Prints the summary, or writes it to `out` and prints only a pointer.
fn emit(mut summary: Value, out: Option<&Path>) -> Result<(), Error> {
    summary["schema"] = json!(SCHEMA);
    let text = match out {
        Some(path) => {
            fs::write(path, serde_json::to_string_pretty(&summary)? + "\n")?;
            json!({"schema": SCHEMA, "out": path}).to_string()
        }
        None => serde_json::to_string_pretty(&summary)?,
    };
    // A closed pipe (`| head`) is not an error.
    match writeln!(io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn cmd_sample(lm: LmArgs, out: Option<PathBuf>) -> Result<(), Error> {
    let sample = sample_lm(LMParams::new(lm.n, lm.d, lm.p, lm.seed)?)?;
    let text = sample.to_text();
    let mut summary = json!({
        "command": "sample",
        "params": sample.params,
        "facets": sample.present.len(),
    });
    match &out {
        Some(path) => {
            fs::write(path, &text)?;
            summary["out"] = json!(path);
        }
        None => summary["complex"] = json!(text),
    }
    emit(summary, None)
}

fn load_input(path: &Path) -> Result<(simplectra::complex::PureComplex, usize, Option<LMSample>), Error> {
    let text = fs::read_to_string(path)?;
    if text.trim_start().starts_with('{') {
        let sample = LMSample::from_text(&text)?;
        Ok((sample.complex(), sample.params.n, Some(sample)))
    } else {
        let (x, n) = parse_complex(&text)?;
        Ok((x, n, None))
    }
}

fn cmd_spectrum(args: SpectrumArgs) -> Result<(), Error> {
    let (x, n, sample) = match &args.input {
        Some(path) => load_input(path)?,
        None => {
            let (Some(n), Some(d), Some(p), Some(seed)) = (args.n, args.d, args.p, args.seed) else {
                return Err(Error::InvalidArgument("give --in or all of --n --d --p --seed".into()));
            };
            let sample = sample_lm(LMParams::new(n, d, p, seed)?)?;
            (sample.complex(), n, Some(sample))
        }
    };
    let d = x.dim();
    let usable = sample.as_ref().filter(|s| s.params.p > 0.0 && s.params.p < 1.0);
    let centered = match args.matrix {
        MatrixKind::Adjacency => false,
        MatrixKind::Centered => {
            if usable.is_none() {
                return Err(Error::InvalidArgument("centered matrix needs p inside (0, 1)".into()));
            }
            true
        }
        MatrixKind::Auto => usable.is_some(),
    };
    let esd: Spectrum = if centered {
        eigenvalues_sym(&centered_scaled(usable.expect("checked above"))?.h)?
    } else {
        eigenvalues_sym(&adjacency_matrix(&x, d - 1)?.to_dmatrix())?
    };
    let moments: Vec<f64> = (0..=args.k_moments).map(|k| moment(&esd, k)).collect();
    let mut summary = json!({
        "command": "spectrum",
        "n": n,
        "d": d,
        "p": sample.as_ref().map(|s| s.params.p),
        "seed": sample.as_ref().map(|s| s.params.seed),
        "matrix": if centered { "centered" } else { "adjacency" },
        "moments": moments,
        "kolmogorov_distance": kolmogorov_distance(&esd, d),
    });
    match &args.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join("eigenvalues.csv"), esd.to_csv())?;
            summary["schema"] = json!(SCHEMA);
            fs::write(dir.join("moments.json"), serde_json::to_string_pretty(&summary)? + "\n")?;
            summary["out"] = json!(dir);
        }
        None => summary["eigenvalues"] = json!(esd.eigs),
    }
    emit(summary, None)
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<(), Error> {
    let ks: Vec<usize> = match args.mode {
        Mode::Words | Mode::Pairs if args.k.len() != 1 => {
            return Err(Error::InvalidArgument("--k takes a single value outside mode h".into()))
        }
        Mode::Words => {
            if args.l.is_some() {
                return Err(Error::InvalidArgument("--l is only used in mode pairs".into()));
            }
            args.k.clone()
        }
        Mode::Pairs => {
            let l = args.l.ok_or_else(|| Error::InvalidArgument("mode pairs needs --l".into()))?;
            vec![args.k[0], l]
        }
        Mode::H => args.k.clone(),
    };
    let d = args.d;
    let h = ks.len();
    let total: usize = ks.iter().sum();
    let s_values: Vec<usize> = match args.s {
        Some(s) => vec![s],
        None => (d + 1..=total / 2 + d * h).collect(),
    };
    let enumerator = Enumerator::with_budget(budget()?);
    let mut dump = Vec::new();
    let mut rows = Vec::new();
    let mut states = 0;
    for &s in &s_values {
        let (mut count, mut minus, mut plus, mut sub) = (0u64, 0u64, 0u64, 0u64);
        let mut visitor = |r: &RawSentence| {
            count += 1;
            let tag = (args.mode == Mode::Pairs).then(|| pair_tag(d, ks[0], ks[1], s, r.supp_d));
            match tag {
                Some(simplectra::words::ClassTag::Minus) => minus += 1,
                Some(simplectra::words::ClassTag::Plus) => plus += 1,
                Some(simplectra::words::ClassTag::Subleading) => sub += 1,
                None => {}
            }
            if args.out.is_some() {
                dump.push((s, r.to_sentence(), tag));
            }
        };
        states += enumerator.visit(d, &ks, s, &mut visitor)?;
        let mut row = json!({"s": s, "count": count});
        if args.mode == Mode::Pairs {
            row["tags"] = json!({"minus": minus, "plus": plus, "subleading": sub});
        }
        rows.push(row);
    }
    let mut summary = json!({
        "command": "enumerate",
        "mode": match args.mode { Mode::Words => "words", Mode::Pairs => "pairs", Mode::H => "h" },
        "d": d,
        "ks": ks,
        "counts": rows,
        "states_visited": states,
    });
    if let Some(path) = &args.out {
        let mut text = String::new();
        for (s, a, tag) in &dump {
            let mut entry = serde_json::to_value(class_summary(a, *tag)?)?;
            entry["s"] = json!(s);
            text.push_str(&serde_json::to_string(&entry)?);
            text.push('\n');
        }
        fs::write(path, text)?;
        summary["dump"] = json!(path);
    }
    emit(summary, None)
}

fn cmd_sigma(args: SigmaArgs) -> Result<(), Error> {
    let params = SigmaParams::parse(args.d, &args.p_inf)?;
    let enumerator = Enumerator::with_budget(budget()?);
    let mut summary = json!({"command": "sigma", "d": args.d, "p_inf": args.p_inf});
    if let Some(k_max) = args.table {
        let table = sigma_table(k_max, &params)?;
        summary["K"] = json!(k_max);
        summary["matrix"] = json!(table.matrix);
        summary["min_eigenvalue"] = json!(table.min_eigenvalue);
        if args.oracle {
            let mut all_equal = true;
            let mut oracle = Vec::with_capacity(k_max + 1);
            for (k, exact_row) in table.exact.iter().enumerate() {
                let mut row = Vec::with_capacity(k_max + 1);
                for (l, exact) in exact_row.iter().enumerate() {
                    let o = sigma_oracle_with(&enumerator, k, l, &params)?;
                    all_equal &= &o == exact;
                    row.push(rational_to_f64(&o));
                }
                oracle.push(row);
            }
            summary["oracle"] = json!(oracle);
            summary["equal"] = json!(all_equal);
        }
    } else {
        let (k, l) = (args.k.expect("clap requires k"), args.l.expect("clap requires l"));
        let exact = sigma_exact(k, l, &params);
        summary["k"] = json!(k);
        summary["l"] = json!(l);
        summary["closed"] = json!(sigma(k, l, &params));
        summary["closed_exact"] = json!(exact.to_string());
        if args.oracle {
            let o = sigma_oracle_with(&enumerator, k, l, &params)?;
            summary["oracle"] = json!(rational_to_f64(&o));
            summary["oracle_exact"] = json!(o.to_string());
            summary["equal"] = json!(o == exact);
        }
    }
    emit(summary, args.out.as_deref())
}

fn rational_to_f64(r: &num_rational::BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

fn cmd_mc(config: &Path, workers: Option<usize>, out: Option<PathBuf>) -> Result<(), Error> {
    let mut config = ExperimentConfig::from_path(config)?;
    if workers.is_some() {
        config.workers = workers;
        config.validate()?;
    }
    let dir = out
        .or_else(|| config.output.clone())
        .ok_or_else(|| Error::InvalidArgument("no output directory: pass --out or set `output`".into()))?;
    let records = run_experiment(&config)?;
    let reports = estimate(&records, &config)?;
    write_outputs(&dir, &config, &records, &reports)?;
    let summary = json!({
        "command": "mc",
        "out": dir,
        "records": records.len(),
        "statistics": config.statistic_names(),
        "reports": reports.iter().map(|r| json!({
            "n": r.n,
            "p": r.p,
            "mean": r.mean,
            "scaled_covariance": r.scaled_covariance,
            "normality": r.normality,
        })).collect::<Vec<_>>(),
    });
    emit(summary, None)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Sample { lm, out } => cmd_sample(lm, out),
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Sigma(args) => cmd_sigma(args),
        Command::Mc { config, workers, out } => cmd_mc(&config, workers, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExceeded { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
