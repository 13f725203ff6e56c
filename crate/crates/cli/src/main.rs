use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use h3nr_core::certify::{certify, search_primes, validate, APolicy, ConstructionParams, Verdict};
use h3nr_core::oracle::{arrangement_agreement, conic_agreement, conic_corpus, exceptional_prime_set, ExceptionalPrimes};
use h3nr_core::PrimeField;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const EXIT_FAILED: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "h3nr", version, about = "Certify nonzero unramified degree-3 classes on explicit quadric bundles over P^2(F_p)")]
struct Cli {
    /// Print every check record (certify) or extra detail.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify one parameter set and write the JSON certificate.
    Certify(CertifyArgs),
    /// Re-check a certificate file.
    Validate {
        path: PathBuf,
    },
    /// Certify every prime in a range.
    Search(SearchArgs),
    /// Run one of the test oracles.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct Triples {
    /// Coefficients of l_1 as `b,c,d`.
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true, default_value = "1,1,2")]
    l1: [i64; 3],
    /// Coefficients of l_2 as `b,c,d`.
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true, default_value = "3,3,1")]
    l2: [i64; 3],
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    p: u64,
    /// Integer, or `auto` for the smallest positive nonsquare.
    #[arg(long, value_parser = parse_a, allow_hyphen_values = true, default_value = "auto")]
    a: APolicy,
    #[command(flatten)]
    triples: Triples,
    /// Certificate path; without it only the verdict is printed.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    min: u64,
    #[arg(long)]
    max: u64,
    #[arg(long, value_parser = parse_a, allow_hyphen_values = true, default_value = "auto")]
    a: APolicy,
    #[command(flatten)]
    triples: Triples,
    /// Table path; defaults to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleName {
    Arrangements,
    Conic,
    Exceptional,
}

#[derive(Args)]
struct OracleArgs {
    name: OracleName,
    #[arg(long, default_value_t = 13)]
    p: u64,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Degree bound for confirming zero verdicts.
    #[arg(long, default_value_t = 4)]
    max_deg: usize,
    /// Degree bound for trying to contradict nonzero verdicts.
    #[arg(long, default_value_t = 1)]
    refute_deg: usize,
    /// Degree of the random symbol entries.
    #[arg(long, default_value_t = 1)]
    entry_deg: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    triples: Triples,
    /// Report path; defaults to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_triple(s: &str) -> Result<[i64; 3], String> {
    let v: Vec<i64> = s
        .split(',')
        .map(|c| c.trim().parse::<i64>().map_err(|e| format!("{c:?}: {e}")))
        .collect::<Result<_, _>>()?;
    v.try_into().map_err(|v: Vec<i64>| format!("expected 3 entries, got {}", v.len()))
}

fn parse_a(s: &str) -> Result<APolicy, String> {
    match s {
        "auto" => Ok(APolicy::Auto),
        _ => s.parse().map(APolicy::Fixed).map_err(|e| format!("{s:?}: {e}")),
    }
}

/// Exit code and message for a failed run.
struct Failure(u8, String);

type Run = Result<u8, Failure>;

fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure(EXIT_INVALID, format!("error: {e}"))
}

fn write_out(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure(EXIT_IO, format!("error: writing {}: {e}", path.display())))
}

/// Writes to `out` if given, otherwise prints.
fn emit(out: Option<&Path>, contents: &str) -> Result<(), Failure> {
    match out {
        Some(path) => write_out(path, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn run_certify(args: &CertifyArgs, verbose: bool) -> Run {
    let Triples { l1, l2 } = args.triples;
    let params = match args.a {
        APolicy::Auto => ConstructionParams::with_auto_a(args.p, l1, l2),
        APolicy::Fixed(a) => ConstructionParams::new(args.p, a, l1, l2),
    }
    .map_err(invalid)?;
    let cert = certify(&params);
    if let Some(path) = &args.out {
        write_out(path, &cert.to_json())?;
    }
    if verbose {
        for r in cert.conditions.records() {
            let status = serde_json::to_value(r.status).expect("serializable");
            eprintln!("{}: {}", r.name, status.as_str().unwrap_or_default());
        }
    }
    println!("p={} a={} {}", params.p(), params.a(), cert.verdict);
    Ok(if cert.verdict().is_certified() { 0 } else { EXIT_FAILED })
}

fn run_validate(path: &Path) -> Run {
    let json = fs::read_to_string(path).map_err(|e| Failure(EXIT_IO, format!("error: reading {}: {e}", path.display())))?;
    let report = validate(&json);
    if report.is_valid() {
        println!("VALID");
        return Ok(0);
    }
    println!("FAILED");
    for p in &report.problems {
        println!("  {p}");
    }
    Ok(EXIT_FAILED)
}

fn run_search(args: &SearchArgs) -> Run {
    let Triples { l1, l2 } = args.triples;
    let rows = search_primes(args.min, args.max, l1, l2, args.a).map_err(invalid)?;
    let mut table = String::new();
    for row in &rows {
        let a = row.a.map_or_else(|| "-".to_string(), |a| a.to_string());
        let (verdict, check) = match &row.verdict {
            Verdict::Certified => ("CERTIFIED", "-"),
            Verdict::Failed(name) => ("FAILED", name.as_str()),
        };
        writeln!(table, "{}\t{a}\t{verdict}\t{check}", row.p).expect("string write");
    }
    emit(args.out.as_deref(), &table)?;
    let certified = rows.iter().filter(|r| r.verdict.is_certified()).count();
    if args.out.is_some() {
        println!("{} primes, {certified} certified", rows.len());
    }
    Ok(if certified > 0 { 0 } else { EXIT_FAILED })
}

fn run_oracle(args: &OracleArgs) -> Run {
    let field = || PrimeField::new(args.p).map_err(invalid);
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let (report, ok) = match args.name {
        OracleName::Arrangements => {
            let a = arrangement_agreement(field()?, args.samples, &mut rng);
            (format!("arrangements p={} seed={}: {}/{} agree\n", args.p, args.seed, a.agree, a.samples), a.is_full())
        }
        OracleName::Conic => {
            let corpus = conic_corpus(field()?, args.samples, args.entry_deg, &mut rng);
            let c = conic_agreement(&corpus, args.max_deg, args.refute_deg);
            let report = format!(
                "conic p={} seed={} max-deg={} refute-deg={}: {} symbols, {}/{} zero verdicts confirmed, \
                 {} nonzero verdicts, {} contradicted\n",
                args.p,
                args.seed,
                args.max_deg,
                args.refute_deg,
                c.samples,
                c.zero_confirmed,
                c.zero,
                c.nonzero,
                c.nonzero_contradicted
            );
            (report, c.is_consistent())
        }
        OracleName::Exceptional => {
            let Triples { l1, l2 } = args.triples;
            let set = exceptional_prime_set(l1, l2).map_err(invalid)?;
            let primes = match set {
                ExceptionalPrimes::All => "all".to_string(),
                ExceptionalPrimes::Finite(s) => s.iter().map(u64::to_string).collect::<Vec<_>>().join(" "),
            };
            (format!("exceptional primes: {primes}\n"), true)
        }
    };
    emit(args.out.as_deref(), &report)?;
    Ok(if ok { 0 } else { EXIT_FAILED })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Certify(args) => run_certify(args, cli.verbose),
        Command::Validate { path } => run_validate(path),
        Command::Search(args) => run_search(args),
        Command::Oracle(args) => run_oracle(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("{msg}");
            ExitCode::from(code)
        }
    }
}
