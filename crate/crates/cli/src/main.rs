//! Command-line front end: orbit censuses, coding tables, flowers, round
//! trips and the sampling experiment, with text, CSV, JSON and SVG output.
//!
//! Exit codes: 0 success, 1 rejected input, 2 internal-consistency
//! failure. The last one means the input was fine but a result that is
//! guaranteed to hold (a round trip closing, a hull chain interleaving)
//! failed numerically, so it is the interesting one in CI.

mod examples;
mod svg;

use std::collections::BTreeMap;
use std::env;
use std::fmt;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use flower_iet::bridge::{round_trip, round_trip_all, BridgeError, RoundTripReport};
use flower_iet::ergopt::{run_experiment, ExperimentConfig, SampleRecord};
use flower_iet::exact::{parse_rational, rational, CirclePoint, Rational};
use flower_iet::flower::{flower_from_orbit, FlowerError};
use flower_iet::iet::{flower_from_iet, DeckShuffler, IetError, Side};
use flower_iet::orbits::{interlacing_tally, orbit_from_word};
use flower_iet::symbolic::Word;
use num::{BigInt, One, ToPrimitive, Zero};
use serde_json::json;

use examples::cmd_example;

/// Flowers of the doubling map and deck-shuffler interval exchanges.
#[derive(Parser)]
#[command(name = "flower-iet", version)]
struct Cli {
    /// Optional key=value file supplying defaults for long flags.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output format. [default: text]
    #[arg(long, global = true, value_enum)]
    out: Option<OutFormat>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Text,
    Csv,
    Json,
}

impl FromStr for OutFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(OutFormat::Text),
            "csv" => Ok(OutFormat::Csv),
            "json" => Ok(OutFormat::Json),
            other => Err(format!(
                "unknown output format {other:?} (expected text, csv or json)"
            )),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Census of interlacing numbers over all orbits up to a period cap.
    OrbitsTally {
        /// Largest orbit period to enumerate (1..=20). [default: 14]
        #[arg(long)]
        max_period: Option<usize>,
    },
    /// Reproduce one of the three worked examples.
    Example {
        /// Which example (1, 2 or 3).
        n: u8,
        /// Also write the figure (step graph plus flower) as SVG.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// Binary A/B itinerary and H value of one point under a shuffler.
    IetCode {
        /// Comma-separated interval lengths summing to 1, e.g. "2/5,1/5,1/5,1/5".
        #[arg(long)]
        lengths: String,
        /// The point to code, a rational in [0, 1).
        #[arg(long)]
        x: String,
        /// Orbit steps before truncating. [default: 64]
        #[arg(long)]
        depth: Option<usize>,
    },
    /// The flower containing the image of the coding map H.
    IetFlower {
        /// Comma-separated interval lengths summing to 1.
        #[arg(long)]
        lengths: String,
        /// Coding depth for the hull endpoints. [default: 256]
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Canonical flower of a periodic orbit of the doubling map.
    OrbitFlower {
        /// Binary word labelling the orbit, e.g. "0011".
        #[arg(long)]
        word: String,
    },
    /// Verify orbit -> flower -> shuffler -> orbit closes exactly.
    RoundTrip {
        /// Single orbit to check.
        #[arg(long, conflicts_with_all = ["all", "max_period"])]
        word: Option<String>,
        /// Check every orbit up to the period cap instead.
        #[arg(long)]
        all: bool,
        /// Period cap for --all (1..=20). [default: 14]
        #[arg(long)]
        max_period: Option<usize>,
        /// Worker threads; 0 picks the rayon default. [default: 0]
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Sample random trig polynomials and tally their maximizing orbits.
    Ergopt {
        /// Top frequency; must be odd. [default: 3]
        #[arg(long)]
        degree: Option<u32>,
        /// Number of unit-sphere coefficient samples. [default: 1000]
        #[arg(long)]
        samples: Option<u64>,
        /// Orbit enumeration cap. [default: 14]
        #[arg(long)]
        max_period: Option<usize>,
        /// Master seed; sample i draws from RNG stream (seed, i). [default: 0]
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads; 0 picks the rayon default. [default: 0]
        #[arg(long)]
        threads: Option<usize>,
        /// Also write the per-sample log as CSV.
        #[arg(long, value_name = "PATH")]
        log_csv: Option<PathBuf>,
    },
    /// Draw a flower (from a word) or a step graph plus flower (from lengths).
    Render {
        /// Deck shuffler lengths to draw.
        #[arg(long, conflicts_with = "word")]
        lengths: Option<String>,
        /// Periodic orbit word to draw.
        #[arg(long)]
        word: Option<String>,
        /// Output SVG path.
        #[arg(long, value_name = "PATH")]
        svg: PathBuf,
        /// Coding depth when the length grid is too large to walk. [default: 256]
        #[arg(long)]
        depth: Option<usize>,
    },
}

/// Exit 1: the input was rejected. Exit 2: a guaranteed result failed.
#[derive(Debug)]
pub(crate) enum Failure {
    Validation(String),
    Internal(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal consistency failure: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = Config::load(cli.config.as_deref())?;
    let out = match cli.out {
        Some(o) => o,
        None => cfg.get("out")?.unwrap_or(OutFormat::Text),
    };
    let text = match cli.command {
        Command::OrbitsTally { max_period } => {
            cmd_orbits_tally(setting(max_period, &cfg, "max-period", 14)?, out)?
        }
        Command::Example { n, svg } => cmd_example(n, svg.as_deref(), out)?,
        Command::IetCode { lengths, x, depth } => {
            cmd_iet_code(&lengths, &x, setting(depth, &cfg, "depth", 64)?, out)?
        }
        Command::IetFlower { lengths, depth } => {
            cmd_iet_flower(&lengths, setting(depth, &cfg, "depth", 256)?, out)?
        }
        Command::OrbitFlower { word } => cmd_orbit_flower(&word, out)?,
        Command::RoundTrip {
            word,
            all,
            max_period,
            threads,
        } => cmd_round_trip(
            word.as_deref(),
            all,
            setting(max_period, &cfg, "max-period", 14)?,
            thread_count(threads, &cfg)?,
            out,
        )?,
        Command::Ergopt {
            degree,
            samples,
            max_period,
            seed,
            threads,
            log_csv,
        } => cmd_ergopt(
            ExperimentConfig {
                degree: setting(degree, &cfg, "degree", 3)?,
                samples: setting(samples, &cfg, "samples", 1000)?,
                max_period: setting(max_period, &cfg, "max-period", 14)?,
                seed: setting(seed, &cfg, "seed", 0)?,
                threads: thread_count(threads, &cfg)?,
            },
            log_csv.as_deref(),
            out,
        )?,
        Command::Render {
            lengths,
            word,
            svg,
            depth,
        } => cmd_render(
            lengths.as_deref(),
            word.as_deref(),
            &svg,
            setting(depth, &cfg, "depth", 256)?,
        )?,
    };
    if !text.is_empty() {
        print!("{text}");
    }
    Ok(())
}

// ---------- shared plumbing ----------

/// Defaults from a `key=value` file; keys are the long flag names.
struct Config(BTreeMap<String, String>);

impl Config {
    fn load(path: Option<&Path>) -> Result<Config, Failure> {
        let mut map = BTreeMap::new();
        if let Some(p) = path {
            let text = fs::read_to_string(p).map_err(|e| {
                Failure::Validation(format!("cannot read config {}: {e}", p.display()))
            })?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let Some((k, v)) = line.split_once('=') else {
                    return Err(Failure::Validation(format!(
                        "config line {}: expected key=value, got {line:?}",
                        lineno + 1
                    )));
                };
                map.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
        Ok(Config(map))
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, Failure>
    where
        T::Err: fmt::Display,
    {
        match self.0.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|e| Failure::Validation(format!("config key {key}={raw:?}: {e}"))),
        }
    }
}

/// Flag beats config file beats built-in default.
fn setting<T: FromStr>(flag: Option<T>, cfg: &Config, key: &str, default: T) -> Result<T, Failure>
where
    T::Err: fmt::Display,
{
    match flag {
        Some(v) => Ok(v),
        None => Ok(cfg.get(key)?.unwrap_or(default)),
    }
}

/// Threads additionally fall back to FLOWER_IET_THREADS before 0 (= auto).
fn thread_count(flag: Option<usize>, cfg: &Config) -> Result<usize, Failure> {
    if let Some(t) = flag {
        return Ok(t);
    }
    if let Some(t) = cfg.get("threads")? {
        return Ok(t);
    }
    match env::var("FLOWER_IET_THREADS") {
        Ok(raw) => raw
            .parse()
            .map_err(|e| Failure::Validation(format!("FLOWER_IET_THREADS={raw:?}: {e}"))),
        Err(_) => Ok(0),
    }
}

pub(crate) fn invalid<E: fmt::Display>(e: E) -> Failure {
    Failure::Validation(e.to_string())
}

/// Parsing and grid-size problems blame the input; a violated hull chain
/// or collapsed petal means the shuffler-to-flower theorem failed.
pub(crate) fn iet_failure(e: IetError) -> Failure {
    match e {
        IetError::HullChainViolated { .. }
        | IetError::CollapsedPetal { .. }
        | IetError::FlowerInvalid(_) => Failure::Internal(e.to_string()),
        other => Failure::Validation(other.to_string()),
    }
}

fn flower_failure(e: FlowerError) -> Failure {
    match e {
        FlowerError::Invalid(_) => Failure::Internal(e.to_string()),
        other => Failure::Validation(other.to_string()),
    }
}

fn bridge_failure(e: BridgeError) -> Failure {
    match e {
        BridgeError::ZeroMassSide { .. } => Failure::Internal(e.to_string()),
        BridgeError::Iet(inner) => iet_failure(inner),
        other => Failure::Validation(other.to_string()),
    }
}

fn parse_lengths(s: &str) -> Result<Vec<Rational>, Failure> {
    s.split(',')
        .map(|part| parse_rational(part).map_err(Failure::Validation))
        .collect()
}

fn parse_unit_point(s: &str) -> Result<Rational, Failure> {
    let x = parse_rational(s).map_err(Failure::Validation)?;
    if x < Rational::zero() || x >= Rational::one() {
        return Err(Failure::Validation(format!("point {x} must lie in [0, 1)")));
    }
    Ok(x)
}

fn shuffler(lengths: &str) -> Result<DeckShuffler, Failure> {
    DeckShuffler::new(parse_lengths(lengths)?).map_err(iet_failure)
}

fn check_period_cap(max_period: usize) -> Result<(), Failure> {
    if (1..=20).contains(&max_period) {
        Ok(())
    } else {
        Err(Failure::Validation(format!(
            "max period must be between 1 and 20, got {max_period}"
        )))
    }
}

fn check_depth(depth: usize) -> Result<(), Failure> {
    if (1..=1_000_000).contains(&depth) {
        Ok(())
    } else {
        Err(Failure::Validation(format!(
            "depth must be between 1 and 1000000, got {depth}"
        )))
    }
}

pub(crate) fn r2f(r: &Rational) -> f64 {
    r.to_f64().expect("value fits in f64")
}

pub(crate) fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    let mut s = String::new();
    for (i, item) in items.into_iter().enumerate() {
        if i > 0 {
            s.push_str(sep);
        }
        write!(s, "{item}").unwrap();
    }
    s
}

fn symbols_string(symbols: &[u8]) -> String {
    symbols.iter().map(|&s| char::from(b'0' + s)).collect()
}

pub(crate) fn interval_label(t: &DeckShuffler, x: &CirclePoint) -> String {
    let k = t.iet().interval_of(x, Side::Right);
    let m = t.m();
    if k < m {
        format!("A_{}", k + 1)
    } else {
        format!("B_{}", k + 1 - m)
    }
}

pub(crate) fn write_svg(path: &Path, content: &str) -> Result<(), Failure> {
    fs::write(path, content)
        .map_err(|e| Failure::Validation(format!("cannot write {}: {e}", path.display())))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn no_csv() -> Failure {
    Failure::Validation("csv output is not available for this command; use text or json".to_string())
}

fn in_pool<T: Send>(threads: usize, work: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    if threads == 0 {
        return Ok(work());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::Validation(format!("cannot build a {threads}-thread pool: {e}")))?;
    Ok(pool.install(work))
}

// ---------- commands ----------

fn cmd_orbits_tally(max_period: usize, out: OutFormat) -> Result<String, Failure> {
    check_period_cap(max_period)?;
    let tally = interlacing_tally(max_period).map_err(invalid)?;
    Ok(match out {
        OutFormat::Text => {
            let mut s = String::new();
            for (i, e) in &tally {
                writeln!(s, "{i} | {} | {}", e.count, e.simplest).unwrap();
            }
            s
        }
        OutFormat::Csv => {
            let mut s = String::from("interlacing,orbits,simplest\n");
            for (i, e) in &tally {
                writeln!(s, "{i},{},{}", e.count, e.simplest).unwrap();
            }
            s
        }
        OutFormat::Json => {
            let rows: Vec<serde_json::Value> = tally
                .iter()
                .map(|(i, e)| {
                    json!({
                        "interlacing": i,
                        "orbits": e.count,
                        "simplest": e.simplest.to_string(),
                    })
                })
                .collect();
            serde_json::to_string_pretty(&json!({"max_period": max_period, "tally": rows}))
                .unwrap()
                + "\n"
        }
    })
}

fn cmd_iet_code(lengths: &str, x: &str, depth: usize, out: OutFormat) -> Result<String, Failure> {
    check_depth(depth)?;
    let t = shuffler(lengths)?;
    let x = parse_unit_point(x)?;
    let code = t.ab_coding(&CirclePoint::new(x.clone()), depth);
    Ok(match out {
        OutFormat::Text => {
            let mut s = String::new();
            writeln!(s, "x = {x}").unwrap();
            if code.prefix.is_empty() {
                writeln!(s, "prefix: (empty)").unwrap();
            } else {
                writeln!(s, "prefix: {}", symbols_string(&code.prefix)).unwrap();
            }
            match &code.cycle {
                Some(c) => writeln!(s, "cycle: {c} (period {})", c.len()).unwrap(),
                None => writeln!(s, "cycle: not found within depth {depth}").unwrap(),
            }
            match &code.error_bound {
                None => writeln!(s, "H(x) = {}", code.value).unwrap(),
                Some(e) => writeln!(s, "H(x) = {} (error <= {e})", code.value).unwrap(),
            }
            s
        }
        OutFormat::Json => {
            serde_json::to_string_pretty(&json!({
                "x": x.to_string(),
                "prefix": symbols_string(&code.prefix),
                "cycle": code.cycle.as_ref().map(ToString::to_string),
                "period": code.cycle.as_ref().map(Word::len),
                "value": code.value.to_string(),
                "error_bound": code.error_bound.as_ref().map(ToString::to_string),
            }))
            .unwrap()
                + "\n"
        }
        OutFormat::Csv => return Err(no_csv()),
    })
}

fn cmd_iet_flower(lengths: &str, depth: usize, out: OutFormat) -> Result<String, Failure> {
    check_depth(depth)?;
    let t = shuffler(lengths)?;
    let f = flower_from_iet(&t, depth).map_err(iet_failure)?;
    let measure = f
        .petals()
        .iter()
        .fold(Rational::zero(), |acc, p| acc + p.length());
    Ok(match out {
        OutFormat::Text => {
            let mut s = String::new();
            writeln!(s, "lengths: {}", join(t.iet().lengths(), ", ")).unwrap();
            writeln!(s, "petals:").unwrap();
            for petal in f.petals() {
                writeln!(s, "  {petal}").unwrap();
            }
            writeln!(s, "measure: {measure}").unwrap();
            s
        }
        OutFormat::Json => {
            serde_json::to_string_pretty(&json!({
                "lengths": t.iet().lengths().iter().map(ToString::to_string).collect::<Vec<_>>(),
                "flower": f.to_json(),
                "measure": measure.to_string(),
            }))
            .unwrap()
                + "\n"
        }
        OutFormat::Csv => return Err(no_csv()),
    })
}

fn cmd_orbit_flower(word: &str, out: OutFormat) -> Result<String, Failure> {
    let w = Word::parse(word, 2).map_err(invalid)?;
    let orbit = orbit_from_word(&w, 2).map_err(invalid)?;
    let interlacing = orbit.interlacing_number().map_err(invalid)?;
    let f = flower_from_orbit(&orbit).map_err(flower_failure)?;
    let measure = f
        .petals()
        .iter()
        .fold(Rational::zero(), |acc, p| acc + p.length());
    Ok(match out {
        OutFormat::Text => {
            let mut s = String::new();
            writeln!(s, "word: {}", orbit.word()).unwrap();
            writeln!(s, "period: {}", orbit.period()).unwrap();
            writeln!(s, "interlacing: {interlacing}").unwrap();
            writeln!(s, "petals:").unwrap();
            for petal in f.petals() {
                writeln!(s, "  {petal}").unwrap();
            }
            writeln!(s, "measure: {measure}").unwrap();
            s
        }
        OutFormat::Json => {
            serde_json::to_string_pretty(&json!({
                "word": orbit.word().to_string(),
                "period": orbit.period(),
                "interlacing": interlacing,
                "flower": f.to_json(),
            }))
            .unwrap()
                + "\n"
        }
        OutFormat::Csv => return Err(no_csv()),
    })
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

const RT_CSV_HEADER: &str = "word,interlacing,conjugacy,inverse_coding,flower_containment\n";

fn rt_csv_row(r: &RoundTripReport) -> String {
    format!(
        "{},{},{},{},{}\n",
        r.word, r.interlacing, r.conjugacy, r.inverse_coding, r.flower_containment
    )
}

fn cmd_round_trip(
    word: Option<&str>,
    all: bool,
    max_period: usize,
    threads: usize,
    out: OutFormat,
) -> Result<String, Failure> {
    match (word, all) {
        (Some(w), false) => round_trip_one(w, out),
        (None, true) => round_trip_batch(max_period, threads, out),
        _ => Err(Failure::Validation(
            "pass exactly one of --word or --all".to_string(),
        )),
    }
}

fn round_trip_one(word: &str, out: OutFormat) -> Result<String, Failure> {
    let w = Word::parse(word, 2).map_err(invalid)?;
    let orbit = orbit_from_word(&w, 2).map_err(invalid)?;
    let report = round_trip(&orbit).map_err(bridge_failure)?;
    let text = match out {
        OutFormat::Text => {
            let mut s = String::new();
            writeln!(s, "word: {}", report.word).unwrap();
            writeln!(s, "interlacing: {}", report.interlacing).unwrap();
            writeln!(s, "lengths: {}", join(report.shuffler.iet().lengths(), ", ")).unwrap();
            writeln!(s, "flower:").unwrap();
            for petal in report.flower.petals() {
                writeln!(s, "  {petal}").unwrap();
            }
            writeln!(s, "conjugacy: {}", pass(report.conjugacy)).unwrap();
            writeln!(s, "inverse coding: {}", pass(report.inverse_coding)).unwrap();
            writeln!(s, "flower containment: {}", pass(report.flower_containment)).unwrap();
            for fail in &report.failures {
                writeln!(s, "  {fail}").unwrap();
            }
            s
        }
        OutFormat::Json => serde_json::to_string_pretty(&report.to_json()).unwrap() + "\n",
        OutFormat::Csv => {
            let mut s = String::from(RT_CSV_HEADER);
            s.push_str(&rt_csv_row(&report));
            s
        }
    };
    if report.all_pass() {
        Ok(text)
    } else {
        print!("{text}");
        Err(Failure::Internal(format!(
            "round trip failed for {}",
            report.word
        )))
    }
}

fn round_trip_batch(max_period: usize, threads: usize, out: OutFormat) -> Result<String, Failure> {
    check_period_cap(max_period)?;
    let reports = in_pool(threads, || round_trip_all(max_period))?.map_err(bridge_failure)?;
    let failed = reports.iter().filter(|r| !r.all_pass()).count();
    let text = match out {
        OutFormat::Text => {
            let mut s = String::new();
            for r in &reports {
                if r.all_pass() {
                    writeln!(s, "{} | {} | pass", r.word, r.interlacing).unwrap();
                } else {
                    writeln!(s, "{} | {} | FAIL: {}", r.word, r.interlacing, r.failures.join("; "))
                        .unwrap();
                }
            }
            if failed == 0 {
                writeln!(s, "checked {} orbits up to period {max_period}: all pass", reports.len())
                    .unwrap();
            } else {
                writeln!(
                    s,
                    "checked {} orbits up to period {max_period}: {failed} FAILED",
                    reports.len()
                )
                .unwrap();
            }
            s
        }
        OutFormat::Csv => {
            let mut s = String::from(RT_CSV_HEADER);
            for r in &reports {
                s.push_str(&rt_csv_row(r));
            }
            s
        }
        OutFormat::Json => {
            serde_json::to_string_pretty(&json!({
                "max_period": max_period,
                "orbits": reports.len(),
                "failures": failed,
                "reports": reports.iter().map(RoundTripReport::to_json).collect::<Vec<_>>(),
            }))
            .unwrap()
                + "\n"
        }
    };
    if failed == 0 {
        Ok(text)
    } else {
        print!("{text}");
        Err(Failure::Internal(format!(
            "{failed} of {} round trips failed",
            reports.len()
        )))
    }
}

fn cmd_ergopt(
    cfg: ExperimentConfig,
    log_csv: Option<&Path>,
    out: OutFormat,
) -> Result<String, Failure> {
    let result = run_experiment(&cfg).map_err(invalid)?;
    if let Some(path) = log_csv {
        fs::write(path, experiment_log_csv(cfg.degree, &result.records))
            .map_err(|e| Failure::Validation(format!("cannot write {}: {e}", path.display())))?;
        eprintln!("wrote {}", path.display());
    }
    let ties = result.records.iter().filter(|r| r.tied).count();
    Ok(match out {
        OutFormat::Text => {
            let mut s = String::new();
            writeln!(
                s,
                "degree {}, {} samples, max period {}, seed {}",
                cfg.degree, cfg.samples, cfg.max_period, cfg.seed
            )
            .unwrap();
            writeln!(s, "interlacing | samples").unwrap();
            for (i, n) in &result.tally {
                writeln!(s, "{i} | {n}").unwrap();
            }
            writeln!(s, "ties: {ties}").unwrap();
            s
        }
        OutFormat::Csv => {
            let mut s = String::from("interlacing,samples\n");
            for (i, n) in &result.tally {
                writeln!(s, "{i},{n}").unwrap();
            }
            s
        }
        OutFormat::Json => {
            let tally: BTreeMap<String, u64> = result
                .tally
                .iter()
                .map(|(i, n)| (i.to_string(), *n))
                .collect();
            serde_json::to_string_pretty(&json!({
                "degree": cfg.degree,
                "samples": cfg.samples,
                "max_period": cfg.max_period,
                "seed": cfg.seed,
                "tally": tally,
                "ties": ties,
            }))
            .unwrap()
                + "\n"
        }
    })
}

fn experiment_log_csv(degree: u32, records: &[SampleRecord]) -> String {
    let mut columns = vec!["sample_id".to_string()];
    for k in (1..=degree).step_by(2) {
        columns.push(format!("a{k}"));
        columns.push(format!("b{k}"));
    }
    columns.extend(["argmax_word", "integral", "interlacing", "tied"].map(String::from));
    let mut s = columns.join(",");
    s.push('\n');
    for r in records {
        write!(s, "{}", r.sample_id).unwrap();
        for c in &r.coefficients {
            write!(s, ",{c}").unwrap();
        }
        writeln!(
            s,
            ",{},{},{},{}",
            r.argmax_word, r.integral, r.interlacing, r.tied
        )
        .unwrap();
    }
    s
}

fn cmd_render(
    lengths: Option<&str>,
    word: Option<&str>,
    svg_path: &Path,
    depth: usize,
) -> Result<String, Failure> {
    check_depth(depth)?;
    match (lengths, word) {
        (Some(l), None) => {
            let t = shuffler(l)?;
            let f = flower_from_iet(&t, depth).map_err(iet_failure)?;
            // exact plateaus when the grid is walkable, sampled steps if not
            let segments: Vec<(f64, f64, f64)> = if t.iet().grid_size() <= BigInt::from(65_536) {
                t.h_graph(16)
                    .map_err(iet_failure)?
                    .plateaus
                    .iter()
                    .map(|p| (r2f(&p.lo), r2f(&p.hi), r2f(&p.value)))
                    .collect()
            } else {
                (0i64..1024)
                    .map(|k| {
                        let v = t.ab_coding(&CirclePoint::new(rational(k, 1024)), depth).value;
                        (k as f64 / 1024.0, (k + 1) as f64 / 1024.0, r2f(&v))
                    })
                    .collect()
            };
            write_svg(svg_path, &svg::graph_and_flower_svg(&segments, &f, &[]))?;
            Ok(String::new())
        }
        (None, Some(w)) => {
            let word = Word::parse(w, 2).map_err(invalid)?;
            let orbit = orbit_from_word(&word, 2).map_err(invalid)?;
            let f = flower_from_orbit(&orbit).map_err(flower_failure)?;
            let marks: Vec<f64> = orbit.points().iter().map(CirclePoint::to_f64).collect();
            write_svg(svg_path, &svg::flower_svg(&f, &marks))?;
            Ok(String::new())
        }
        _ => Err(Failure::Validation(
            "pass exactly one of --lengths or --word".to_string(),
        )),
    }
}
