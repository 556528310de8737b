//! Command-line front end for exact computations on random-partition
//! increments: enumeration, coefficient tables, law round-trips, CRP and
//! two-parameter sampling, and the verification subcommands.
//!
//! Exit codes: 0 success/verified, 1 mathematical verification failed,
//! 2 usage error (bad flags, malformed files, out-of-domain arguments).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num::BigInt;

use increments_core::coefficients::{genfun_expand, r_via_bruteforce, r_via_formula};
use increments_core::combinatorics::{
    all_compositions, enumerate_compositions, enumerate_set_partitions,
};
use increments_core::gaps::{
    block_size_distribution, gap_size_distribution, verify_partial_sum_identity,
    BinarySequenceLaw,
};
use increments_core::lawfile;
use increments_core::laws::{
    forward_map, invert_map, random_partially_exchangeable_law, IncrementLaw, PartitionLaw,
};
use increments_core::models::{
    crp_increment_probs, crp_law, sample_crp_many, sample_two_parameter_many,
    verify_theorem2, CrpParameter, Theorem2Outcome, TwoParameter,
};
use increments_core::Rational;

/// Brute-force work grows with Bell(n); past this, demand --force.
const DEFAULT_CAP: usize = 12;

#[derive(Parser)]
#[command(name = "increments", version, about = "Exact arithmetic for increments of random partitions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RMethod {
    Formula,
    Bruteforce,
    Genfun,
}

#[derive(Clone, Copy, ValueEnum)]
enum SamplerKind {
    Crp,
    TwoParam,
}

#[derive(Subcommand)]
enum Command {
    /// List compositions of n, grouped by part count, decreasing dictionary order
    Compositions {
        n: usize,
        /// Restrict to compositions with exactly K parts
        #[arg(long)]
        k: Option<usize>,
    },
    /// List all set partitions of {1..n} as restricted-growth sequences
    Partitions {
        n: usize,
        #[arg(long)]
        force: bool,
    },
    /// Print the table of coefficients r(d; b) over S_{n,k}
    Rtable {
        n: usize,
        k: usize,
        #[arg(long, value_enum, default_value_t = RMethod::Formula)]
        method: RMethod,
        #[arg(long)]
        force: bool,
    },
    /// Map a partition law to the law of its increments
    Forward {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        output: Option<PathBuf>,
        /// Treat missing compositions as zero probability
        #[arg(long)]
        allow_sparse: bool,
    },
    /// Recover the partition law from an increment law (triangular solve)
    Invert {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        output: Option<PathBuf>,
        /// Treat missing compositions as zero probability
        #[arg(long)]
        allow_sparse: bool,
    },
    /// Write the exact CRP(theta) partition law
    Crp {
        n: usize,
        /// Rational like 3/2, or "zero" / "inf"
        #[arg(long)]
        theta: String,
        #[arg(long = "out")]
        output: Option<PathBuf>,
    },
    /// Draw seeded samples, one restricted-growth sequence per line
    Sample {
        #[arg(value_enum)]
        kind: SamplerKind,
        n: usize,
        #[arg(long)]
        theta: String,
        /// Discount parameter for the two-parameter sampler
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Round-trip random partially exchangeable laws through forward + invert
    CheckTheorem1 {
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        force: bool,
    },
    /// Check an increment law against the CRP characterization
    CheckTheorem2 {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        allow_sparse: bool,
    },
    /// Verify the generating-function expansion against the r coefficients
    CheckGenfun {
        n: usize,
        #[arg(long)]
        force: bool,
    },
    /// Verify the CRP gap representation and the partial-sum identity for m = 1..n
    CheckGaps {
        n: usize,
        #[arg(long)]
        theta: String,
        #[arg(long)]
        force: bool,
    },
}

enum CliError {
    /// Verification failed: exit 1.
    Verification(String),
    /// Usage or input problem: exit 2.
    Usage(String),
}

impl From<increments_core::Error> for CliError {
    fn from(e: increments_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn parse_rational(s: &str) -> Result<Rational, CliError> {
    let bad = || CliError::Usage(format!("cannot parse rational {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let numer = BigInt::from_str(a.trim()).map_err(|_| bad())?;
            let denom = BigInt::from_str(b.trim()).map_err(|_| bad())?;
            if denom == BigInt::from(0) {
                return Err(CliError::Usage(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(numer, denom))
        }
        None => Ok(Rational::from_integer(
            BigInt::from_str(s.trim()).map_err(|_| bad())?,
        )),
    }
}

fn parse_theta(s: &str) -> Result<CrpParameter, CliError> {
    match s.trim().to_ascii_lowercase().as_str() {
        "zero" | "0" => Ok(CrpParameter::Zero),
        "inf" | "infinity" => Ok(CrpParameter::Infinity),
        other => Ok(CrpParameter::theta(parse_rational(other)?)?),
    }
}

fn check_cap(n: usize, force: bool, what: &str) -> Result<(), CliError> {
    if n > DEFAULT_CAP && !force {
        return Err(CliError::Usage(format!(
            "{what} at n={n} exceeds the default cap of {DEFAULT_CAP}; pass --force to override"
        )));
    }
    Ok(())
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_partition_law(path: &PathBuf, allow_sparse: bool) -> Result<PartitionLaw, CliError> {
    Ok(lawfile::partition_law_from_str(&read_file(path)?, allow_sparse)?)
}

fn load_increment_law(path: &PathBuf, allow_sparse: bool) -> Result<IncrementLaw, CliError> {
    Ok(lawfile::increment_law_from_str(&read_file(path)?, allow_sparse)?)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Compositions { n, k } => {
            if n == 0 {
                return Err(CliError::Usage("n must be positive".into()));
            }
            let list = match k {
                Some(k) => enumerate_compositions(n, k)?,
                None => all_compositions(n),
            };
            for c in list {
                println!("{c}");
            }
            Ok(())
        }
        Command::Partitions { n, force } => {
            check_cap(n, force, "partition enumeration")?;
            for p in enumerate_set_partitions(n)? {
                println!("{p}");
            }
            Ok(())
        }
        Command::Rtable { n, k, method, force } => {
            if matches!(method, RMethod::Bruteforce) {
                check_cap(n, force, "brute-force r table")?;
            }
            let comps = enumerate_compositions(n, k)?;
            println!("# S_{{{n},{k}}} in decreasing dictionary order:");
            for c in &comps {
                println!("# {c}");
            }
            println!("# rows: d, columns: b");
            for d in &comps {
                let mut line = String::new();
                let poly = matches!(method, RMethod::Genfun).then(|| genfun_expand(d));
                for b in &comps {
                    let v = match method {
                        RMethod::Formula => r_via_formula(d, b)?,
                        RMethod::Bruteforce => r_via_bruteforce(d, b)?,
                        RMethod::Genfun => poly.as_ref().unwrap().coefficient_for(b),
                    };
                    if !line.is_empty() {
                        line.push(' ');
                    }
                    write!(line, "{v}").unwrap();
                }
                println!("{line}");
            }
            Ok(())
        }
        Command::Forward { input, output, allow_sparse } => {
            let p = load_partition_law(&input, allow_sparse)?;
            let report = p.validate();
            if !report.valid {
                return Err(CliError::Usage(format!(
                    "input is not a valid partition law: {}",
                    report.issues.join("; ")
                )));
            }
            emit(&output, &lawfile::increment_law_to_string(&forward_map(&p)))
        }
        Command::Invert { input, output, allow_sparse } => {
            let q = load_increment_law(&input, allow_sparse)?;
            let inv = invert_map(&q);
            emit(&output, &lawfile::partition_law_to_string(&inv.law))?;
            if inv.feasible {
                Ok(())
            } else {
                Err(CliError::Verification(format!(
                    "increment law is not realizable by a partially exchangeable partition:\n  {}",
                    inv.issues.join("\n  ")
                )))
            }
        }
        Command::Crp { n, theta, output } => {
            let param = parse_theta(&theta)?;
            emit(&output, &lawfile::partition_law_to_string(&crp_law(n, &param)?))
        }
        Command::Sample { kind, n, theta, alpha, count, seed } => {
            if n == 0 {
                return Err(CliError::Usage("n must be positive".into()));
            }
            let samples = match kind {
                SamplerKind::Crp => {
                    if alpha.is_some() {
                        return Err(CliError::Usage("--alpha only applies to two-param".into()));
                    }
                    sample_crp_many(n, &parse_theta(&theta)?, seed, count)
                }
                SamplerKind::TwoParam => {
                    let alpha = parse_rational(
                        alpha.as_deref().ok_or_else(|| {
                            CliError::Usage("two-param requires --alpha".into())
                        })?,
                    )?;
                    let params = TwoParameter::new(alpha, parse_rational(&theta)?)?;
                    sample_two_parameter_many(n, &params, seed, count)
                }
            };
            for s in samples {
                println!("{s}");
            }
            Ok(())
        }
        Command::CheckTheorem1 { n, trials, force } => {
            check_cap(n, force, "theorem 1 round-trip")?;
            if n == 0 {
                return Err(CliError::Usage("n must be positive".into()));
            }
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x1c4e);
            for trial in 0..trials {
                let p = random_partially_exchangeable_law(n, &mut rng)?;
                let inv = invert_map(&forward_map(&p));
                if !inv.feasible || inv.law != p {
                    return Err(CliError::Verification(format!(
                        "round-trip failed at trial {trial}"
                    )));
                }
            }
            println!("theorem 1 round-trip: {trials} random laws at n={n} recovered exactly");
            Ok(())
        }
        Command::CheckTheorem2 { input, allow_sparse } => {
            let q = load_increment_law(&input, allow_sparse)?;
            let inv = invert_map(&q);
            if !inv.feasible {
                return Err(CliError::Verification(format!(
                    "not realizable by a partially exchangeable partition:\n  {}",
                    inv.issues.join("\n  ")
                )));
            }
            match verify_theorem2(&q, &inv.law) {
                Ok(Theorem2Outcome::Recovered(param)) => {
                    println!("theta = {param}");
                    Ok(())
                }
                Ok(Theorem2Outcome::Counterexample(msg)) => {
                    Err(CliError::Verification(format!("counterexample: {msg}")))
                }
                Err(increments_core::Error::NotApplicable(msg)) => {
                    Err(CliError::Verification(format!("hypothesis failed: {msg}")))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::CheckGenfun { n, force } => {
            check_cap(n, force, "generating-function check")?;
            if n == 0 {
                return Err(CliError::Usage("n must be positive".into()));
            }
            for k in 1..=n {
                let comps = enumerate_compositions(n, k)?;
                for d in &comps {
                    let poly = genfun_expand(d);
                    for b in &comps {
                        let expected = r_via_formula(d, b)?;
                        if poly.coefficient_for(b) != expected {
                            return Err(CliError::Verification(format!(
                                "coefficient mismatch at d={d}, b={b}"
                            )));
                        }
                    }
                    let expected: num::BigUint = d
                        .parts()
                        .iter()
                        .enumerate()
                        .map(|(i, &di)| num::pow::pow(num::BigUint::from(i + 1), di - 1))
                        .product();
                    if poly.eval_at_ones() != expected {
                        return Err(CliError::Verification(format!(
                            "mass at all-ones mismatch for d={d}"
                        )));
                    }
                }
            }
            println!("generating-function identity verified for all d, n={n}");
            Ok(())
        }
        Command::CheckGaps { n, theta, force } => {
            check_cap(n, force, "gap-representation check")?;
            let param = parse_theta(&theta)?;
            for m in 1..=n {
                let p = crp_law(m, &param)?;
                let y = BinarySequenceLaw::independent(&crp_increment_probs(m, &param))?;
                if block_size_distribution(&p) != gap_size_distribution(&y) {
                    return Err(CliError::Verification(format!(
                        "gap distribution differs from block-size distribution at n={m}"
                    )));
                }
                let report = verify_partial_sum_identity(&p, &y)?;
                if !report.matches {
                    return Err(CliError::Verification(format!(
                        "partial-sum identity fails at n={m}, first mismatch m={}",
                        report.first_mismatch.unwrap()
                    )));
                }
            }
            println!("gap representation of CRP({theta}) verified for n = 1..{n}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
