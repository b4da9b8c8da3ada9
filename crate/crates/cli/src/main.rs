//! `cosign`: exact cosine sign correlations from the command line.
//!
//! Results go to standard output; progress and diagnostics go to standard
//! error. Exit codes: 0 success, 2 argument or validation error, 3 overflow,
//! 4 engine disagreement, 5 verification failure.

mod output;

use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use cosign_core::bounds::verify_prefix_bounds;
use cosign_core::fourier::pairwise_law_table;
use cosign_core::search::{find_minimum, verify_p3_theorem, verify_power_ladder, SearchOptions};
use cosign_core::{
    exact_probability_cells, exact_probability_sweep, montecarlo, sign_spectrum, Configuration,
    Error,
};

use output::{approx, rational_json, OutputRecord};

const EXIT_PARSE: i32 = 2;
const EXIT_OVERFLOW: i32 = 3;
const EXIT_DISAGREEMENT: i32 = 4;
const EXIT_VERIFICATION: i32 = 5;

#[derive(Parser)]
#[command(
    name = "cosign",
    version,
    about = "Exact cosine sign correlations of integer frequency sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineChoice {
    Sweep,
    Cells,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyTarget {
    /// Finite-case verification that {1,3,9} is the unique triple at 1/9.
    P3,
    /// The powers-of-three ladder P(1,3,...,3^(n-1)) = 3^-(n-1).
    Ladder,
    /// Pairwise law: P = 1/2 or |2P-1| = 1/(pq) for every pair.
    Pairs,
    /// Prefix bounds: P > P(prefix)/3 under the 12*lcm rule, plus the
    /// sandwich bracket.
    Sandwich,
}

#[derive(Subcommand)]
enum Command {
    /// Exact probability that all cosines share a sign.
    Exact {
        /// Frequencies: comma-separated and/or repeated arguments.
        #[arg(required = true)]
        freqs: Vec<String>,
        /// Which exact engine to run; `both` cross-checks them.
        #[arg(long, value_enum, default_value_t = EngineChoice::Sweep)]
        engine: EngineChoice,
        /// Divide the frequencies by their gcd first.
        #[arg(long)]
        normalize: bool,
        #[arg(long)]
        json: bool,
    },
    /// Maximal sign-agreement intervals with their polarity.
    Spectrum {
        #[arg(required = true)]
        freqs: Vec<String>,
        #[arg(long)]
        normalize: bool,
        #[arg(long)]
        json: bool,
    },
    /// Minimum of P over all normalized n-tuples with entries <= max.
    Search {
        /// Tuple length.
        #[arg(long)]
        n: usize,
        /// Largest allowed frequency.
        #[arg(long)]
        max: u64,
        /// Enable the Monte-Carlo prefilter.
        #[arg(long)]
        mc: bool,
        #[arg(long, default_value_t = 20_000)]
        mc_samples: u64,
        #[arg(long, default_value_t = 5.0)]
        mc_margin: f64,
        /// Disable the exact pruning rules.
        #[arg(long)]
        no_prune: bool,
        /// Worker threads (default: COSIGN_WORKERS or all logical cores).
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Re-run a verification suite and report pass/fail.
    Verify {
        #[arg(value_enum)]
        target: VerifyTarget,
        /// Ladder height (for `ladder`).
        #[arg(long, default_value_t = 6)]
        max_n: u32,
        /// Largest frequency (for `pairs`).
        #[arg(long, default_value_t = 40)]
        max: u64,
        /// Number of randomized instances (for `sandwich`).
        #[arg(long, default_value_t = 200)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Seeded Monte-Carlo estimate of P.
    Mc {
        #[arg(required = true)]
        freqs: Vec<String>,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        normalize: bool,
        #[arg(long)]
        json: bool,
    },
    /// Pairwise probability table over a range of frequencies.
    Pairs {
        #[arg(long, default_value_t = 40)]
        max: u64,
        /// Emit configuration,numerator,denominator,decimal rows.
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        json: bool,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::EmptyConfiguration
            | Error::ZeroFrequency
            | Error::NotStrictlyIncreasing { .. } => EXIT_PARSE,
            Error::Overflow { .. } | Error::LcmOverflow { .. } => EXIT_OVERFLOW,
            Error::Internal(_) => EXIT_DISAGREEMENT,
        };
        Failure::new(code, err.to_string())
    }
}

fn main() {
    // Die quietly when a downstream pipe closes instead of panicking.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    if let Err(failure) = run(cli) {
        eprintln!("error: {}", failure.message);
        std::process::exit(failure.code);
    }
}

fn parse_freqs(raw: &[String], normalize: bool) -> Result<Configuration, Failure> {
    let mut freqs: Vec<u64> = Vec::new();
    for token in raw.iter().flat_map(|arg| arg.split(',')) {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        let value: u64 = token
            .parse()
            .map_err(|_| Failure::new(EXIT_PARSE, format!("invalid frequency `{token}`")))?;
        freqs.push(value);
    }
    let config = Configuration::new(freqs)?;
    Ok(if normalize { config.normalize() } else { config })
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Exact {
            freqs,
            engine,
            normalize,
            json,
        } => cmd_exact(&freqs, engine, normalize, json),
        Command::Spectrum {
            freqs,
            normalize,
            json,
        } => cmd_spectrum(&freqs, normalize, json),
        Command::Search {
            n,
            max,
            mc,
            mc_samples,
            mc_margin,
            no_prune,
            workers,
            seed,
            json,
        } => {
            let options = SearchOptions {
                mc_prefilter: mc,
                mc_samples,
                mc_margin,
                prune: !no_prune,
                workers: resolve_workers(workers),
                seed,
                progress: true,
            };
            cmd_search(n, max, options, json)
        }
        Command::Verify {
            target,
            max_n,
            max,
            instances,
            seed,
            json,
        } => cmd_verify(target, max_n, max, instances, seed, json),
        Command::Mc {
            freqs,
            samples,
            seed,
            normalize,
            json,
        } => cmd_mc(&freqs, samples, seed, normalize, json),
        Command::Pairs { max, csv, json } => cmd_pairs(max, csv, json),
    }
}

fn resolve_workers(flag: Option<usize>) -> usize {
    if let Some(w) = flag {
        return w;
    }
    if let Ok(env) = std::env::var("COSIGN_WORKERS") {
        if let Ok(w) = env.parse::<usize>() {
            return w;
        }
        eprintln!("ignoring non-numeric COSIGN_WORKERS=`{env}`");
    }
    0 // all logical cores
}

fn cmd_exact(
    raw: &[String],
    engine: EngineChoice,
    normalize: bool,
    json: bool,
) -> Result<(), Failure> {
    let started = Instant::now();
    let config = parse_freqs(raw, normalize)?;
    let (value, engine_name) = match engine {
        EngineChoice::Sweep => (exact_probability_sweep(&config)?, "sweep"),
        EngineChoice::Cells => (exact_probability_cells(&config)?, "cells"),
        EngineChoice::Both => {
            let by_sweep = exact_probability_sweep(&config)?;
            let by_cells = exact_probability_cells(&config)?;
            if by_sweep != by_cells {
                return Err(Failure::new(
                    EXIT_DISAGREEMENT,
                    format!("engines disagree on {config}: sweep {by_sweep}, cells {by_cells}"),
                ));
            }
            if !json {
                println!("P{config} = {} [sweep]", approx(&by_sweep));
                println!("P{config} = {} [cells]", approx(&by_cells));
                return Ok(());
            }
            (by_sweep, "both")
        }
    };
    if json {
        OutputRecord::new(
            "exact",
            json!({ "freqs": config.freqs(), "engine": engine_name, "normalize": normalize }),
            rational_json(&value),
            engine_name,
            started,
        )
        .print();
    } else {
        println!("P{config} = {}", approx(&value));
    }
    Ok(())
}

fn cmd_spectrum(raw: &[String], normalize: bool, json: bool) -> Result<(), Failure> {
    let started = Instant::now();
    let config = parse_freqs(raw, normalize)?;
    let spectrum = sign_spectrum(&config)?;
    if json {
        OutputRecord::new(
            "spectrum",
            json!({ "freqs": config.freqs(), "normalize": normalize }),
            json!({
                "intervals": spectrum.intervals,
                "total_measure": rational_json(&spectrum.total_measure),
            }),
            "sweep",
            started,
        )
        .print();
    } else {
        for interval in &spectrum.intervals {
            println!(
                "{} .. {}, {}",
                interval.start,
                interval.end,
                interval.polarity.symbol()
            );
        }
        println!(
            "total measure: {} over {} intervals",
            approx(&spectrum.total_measure),
            spectrum.intervals.len()
        );
    }
    Ok(())
}

fn cmd_search(n: usize, max: u64, options: SearchOptions, json: bool) -> Result<(), Failure> {
    let started = Instant::now();
    if n < 1 || (max as u128) < n as u128 {
        return Err(Failure::new(
            EXIT_PARSE,
            format!("infeasible search bounds: n = {n}, max = {max}"),
        ));
    }
    if options.mc_prefilter && options.mc_samples == 0 {
        return Err(Failure::new(EXIT_PARSE, "--mc-samples must be at least 1"));
    }
    eprintln!(
        "searching {n}-tuples up to {max} (prune {}, mc {})",
        options.prune,
        options.mc_prefilter
    );
    let report = find_minimum(n, max, &options)?;
    if json {
        OutputRecord::new(
            "search",
            json!({
                "n": n, "a_max": max,
                "mc_prefilter": options.mc_prefilter,
                "mc_samples": options.mc_samples,
                "mc_margin": options.mc_margin,
                "prune": options.prune,
                "workers": options.workers,
                "seed": options.seed,
            }),
            serde_json::to_value(&report).expect("serializable"),
            "sweep",
            started,
        )
        .print();
    } else {
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    }
    Ok(())
}

fn verification_failure(target: &str) -> Failure {
    Failure::new(
        EXIT_VERIFICATION,
        format!("verification `{target}` failed: expected claim not reproduced"),
    )
}

fn cmd_verify(
    target: VerifyTarget,
    max_n: u32,
    max: u64,
    instances: usize,
    seed: u64,
    json: bool,
) -> Result<(), Failure> {
    let started = Instant::now();
    match target {
        VerifyTarget::P3 => {
            let verdict = verify_p3_theorem()?;
            if json {
                OutputRecord::new(
                    "verify",
                    json!({ "target": "p3" }),
                    serde_json::to_value(&verdict).expect("serializable"),
                    "cells+sweep",
                    started,
                )
                .print();
            } else {
                println!(
                    "swept {} configurations; attaining P <= 1/9: {}",
                    verdict.swept.len(),
                    verdict
                        .attaining
                        .iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                );
                println!("holds: {}", verdict.holds);
            }
            if !verdict.holds {
                return Err(verification_failure("p3"));
            }
        }
        VerifyTarget::Ladder => {
            let entries = verify_power_ladder(max_n)?;
            let all_ok = entries.iter().all(|e| e.ok);
            if json {
                OutputRecord::new(
                    "verify",
                    json!({ "target": "ladder", "max_n": max_n }),
                    serde_json::to_value(&entries).expect("serializable"),
                    "sweep",
                    started,
                )
                .print();
            } else {
                for e in &entries {
                    println!(
                        "{} P{} = {} (expected {})",
                        if e.ok { "ok  " } else { "FAIL" },
                        e.config,
                        e.value,
                        e.expected
                    );
                }
            }
            if !all_ok {
                return Err(verification_failure("ladder"));
            }
        }
        VerifyTarget::Pairs => {
            let records = pairwise_law_table(max)?;
            let failures: Vec<_> = records.iter().filter(|r| !r.law_holds).collect();
            if json {
                OutputRecord::new(
                    "verify",
                    json!({ "target": "pairs", "max": max }),
                    json!({
                        "pairs": records.len(),
                        "violations": failures.len(),
                        "records": records,
                    }),
                    "sweep",
                    started,
                )
                .print();
            } else {
                for r in &failures {
                    println!("FAIL ({}, {}): P = {}", r.a, r.b, r.probability);
                }
                println!(
                    "pairwise law holds for {}/{} pairs up to {max}",
                    records.len() - failures.len(),
                    records.len()
                );
            }
            if !failures.is_empty() {
                return Err(verification_failure("pairs"));
            }
        }
        VerifyTarget::Sandwich => {
            let report = verify_prefix_bounds(instances, seed)?;
            if json {
                OutputRecord::new(
                    "verify",
                    json!({ "target": "sandwich", "instances": instances, "seed": seed }),
                    serde_json::to_value(&report).expect("serializable"),
                    "sweep",
                    started,
                )
                .print();
            } else {
                for check in report.checks.iter().filter(|c| !c.lemma_holds || !c.sandwich_holds) {
                    println!(
                        "FAIL {}: P = {}, prefix {}",
                        check.config, check.probability, check.prefix_probability
                    );
                }
                println!(
                    "prefix bounds hold on {}/{} spread instances (seed {seed})",
                    report
                        .checks
                        .iter()
                        .filter(|c| c.lemma_holds && c.sandwich_holds)
                        .count(),
                    report.checks.len()
                );
            }
            if !report.holds {
                return Err(verification_failure("sandwich"));
            }
        }
    }
    Ok(())
}

fn cmd_mc(
    raw: &[String],
    samples: u64,
    seed: u64,
    normalize: bool,
    json: bool,
) -> Result<(), Failure> {
    let started = Instant::now();
    if samples == 0 {
        return Err(Failure::new(EXIT_PARSE, "samples must be at least 1"));
    }
    let config = parse_freqs(raw, normalize)?;
    let estimate = montecarlo::estimate(&config, samples, seed);
    if json {
        OutputRecord::new(
            "mc",
            json!({ "freqs": config.freqs(), "samples": samples, "seed": seed }),
            serde_json::to_value(estimate).expect("serializable"),
            "montecarlo",
            started,
        )
        .print();
    } else {
        println!(
            "P{config} \u{2248} {:.6} \u{b1} {:.6} ({} samples, seed {})",
            estimate.estimate, estimate.stderr, estimate.samples, estimate.seed
        );
    }
    Ok(())
}

fn cmd_pairs(max: u64, csv: bool, json: bool) -> Result<(), Failure> {
    let started = Instant::now();
    if max < 2 {
        return Err(Failure::new(EXIT_PARSE, "--max must be at least 2"));
    }
    let records = pairwise_law_table(max)?;
    if json {
        OutputRecord::new(
            "pairs",
            json!({ "max": max }),
            serde_json::to_value(&records).expect("serializable"),
            "sweep",
            started,
        )
        .print();
    } else if csv {
        println!("configuration,numerator,denominator,decimal");
        for r in &records {
            println!(
                "{} {},{},{},{}",
                r.a,
                r.b,
                r.probability.numer_string(),
                r.probability.denom_string(),
                r.probability.decimal_string(12)
            );
        }
    } else {
        for r in &records {
            println!(
                "P({}, {}) = {}  [ratio {}/{}]",
                r.a,
                r.b,
                approx(&r.probability),
                r.ratio.p,
                r.ratio.q
            );
        }
    }
    Ok(())
}
