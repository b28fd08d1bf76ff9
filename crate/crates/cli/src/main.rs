mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use taufact_core::classifier::{self, ConditionInterpretation, ConditionReport};
use taufact_core::engine::{self, PrimeCheckVerdict, SignConvention, SignedFactorization};
use taufact_core::signatures::{self, format_witness, TableEntry, TableSpec, TableStream, Verdict};
use taufact_core::verify::{self, CheckParams, DiscrepancyReport, Path, TheoremCheck, TheoremId};
use taufact_core::{
    factor, mu_related, signature_of, tau_related, ClassTable, EnumConfig, Error, Modulus,
    Signature, SignatureSolver,
};

use config::Config;

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAPABILITY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "taufact",
    version,
    about = "Atoms, primes and factorizations of integers under congruence modulo n"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Flat TOML file with caps and cache settings.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Oracle,
    Theorem,
    Signature,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Reading {
    Default,
    Alternative,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Prime factorization of x.
    Factor {
        #[arg(long, allow_negative_numbers = true)]
        x: i64,
    },
    /// Whether x and y are related modulo n.
    Relate {
        #[arg(long, allow_negative_numbers = true)]
        x: i64,
        #[arg(long, allow_negative_numbers = true)]
        y: i64,
        #[arg(long)]
        n: u64,
        /// x ≡ y (mod n).
        #[arg(long, conflicts_with = "mu", required_unless_present = "mu")]
        tau: bool,
        /// x ≡ ±y (mod n).
        #[arg(long)]
        mu: bool,
    },
    /// Atom verdict, with a witness when reducible.
    Atom {
        #[arg(long, allow_negative_numbers = true)]
        x: i64,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value = "all")]
        method: Method,
    },
    /// Prime verdict: certified, or a bounded search for a counterexample.
    Prime {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        n: u64,
        /// Largest multiple of x to scan; defaults to 100x.
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Proper signed factorizations of x, filtered to those related modulo n.
    Enumerate {
        #[arg(long, allow_negative_numbers = true)]
        x: i64,
        /// Without n every proper signed factorization is listed.
        #[arg(long)]
        n: Option<u64>,
        /// One entry per sign vector instead of per distinct multiset.
        #[arg(long)]
        all_signs: bool,
        #[arg(long)]
        max_parts: Option<usize>,
    },
    /// The ±-classes modulo an odd prime and their labels.
    Classes {
        #[arg(long)]
        n: u64,
    },
    /// Exhaustive signature table for an odd prime.
    Table {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 4)]
        max_per_class: u32,
        /// Counts of the x0 class to include, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0")]
        x0_levels: Vec<u32>,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        /// Ignore and do not populate the cache.
        #[arg(long)]
        no_cache: bool,
    },
    /// Run theorem checks.
    Verify {
        /// Check id such as Thm3.5.
        #[arg(required_unless_present = "all", conflicts_with = "all")]
        id: Option<String>,
        #[arg(long)]
        all: bool,
        /// Override the check's size parameter.
        #[arg(long, conflicts_with = "all")]
        limit: Option<u64>,
    },
    /// Smallest positive integer with a given signature, e.g. "x1^3*x2".
    Instantiate {
        #[arg(long)]
        signature: String,
        #[arg(long)]
        n: u64,
    },
    /// Compare decision paths over a range.
    Sweep {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 2)]
        lo: i64,
        #[arg(long)]
        hi: Option<i64>,
        #[arg(long, value_delimiter = ',', default_value = "oracle,theorem")]
        paths: Vec<String>,
    },
    /// Evaluate the three conditions for x0^k * x_i^m * x_j.
    Conditions {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        j: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 0)]
        k: u32,
        #[arg(long, value_enum, default_value = "both")]
        reading: Reading,
    },
    /// Score both condition readings against the signature solver.
    Score {
        #[arg(long, value_delimiter = ',', default_value = "5,7,11")]
        moduli: Vec<u64>,
        #[arg(long, default_value_t = 4)]
        count_cap: u32,
    },
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnsupportedModulus(_)
            | Error::TableTooLarge { .. }
            | Error::TooManyPartitions { .. }
            | Error::PrimeSearchExhausted { .. }
            | Error::NoGenerator(_)
            | Error::Overflow => EXIT_CAPABILITY,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: if e.kind() == io::ErrorKind::BrokenPipe { 0 } else { EXIT_CAPABILITY },
            message: e.to_string(),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        let broken_pipe =
            matches!(e.kind(), csv::ErrorKind::Io(io) if io.kind() == io::ErrorKind::BrokenPipe);
        Failure {
            code: if broken_pipe { 0 } else { EXIT_CAPABILITY },
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type Outcome = Result<u8, Failure>;

struct Ctx {
    format: Format,
    config: Config,
    out: BufWriter<io::Stdout>,
}

impl Ctx {
    fn json<T: Serialize>(&mut self, value: &T) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut self.out, value)?;
        writeln!(self.out)
    }

    fn csv(&mut self) -> csv::Writer<&mut BufWriter<io::Stdout>> {
        csv::Writer::from_writer(&mut self.out)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match &cli.config {
        Some(p) => match Config::load(p) {
            Ok(c) => c,
            Err(msg) => {
                eprintln!("error: {msg}");
                return ExitCode::from(EXIT_USAGE);
            }
        },
        None => Config::default(),
    };
    let format = match cli.format {
        Some(f) => f,
        None => match config.format.as_deref() {
            None | Some("text") => Format::Text,
            Some("json") => Format::Json,
            Some("csv") => Format::Csv,
            Some(other) => {
                eprintln!("error: unknown format `{other}` in config");
                return ExitCode::from(EXIT_USAGE);
            }
        },
    };
    let mut ctx = Ctx {
        format,
        config,
        out: BufWriter::new(io::stdout()),
    };
    let result = run(cli.command, &mut ctx);
    let flushed = ctx.out.flush();
    match (result, flushed) {
        (Ok(code), Ok(())) => ExitCode::from(code),
        // downstream reader closed early, e.g. `| head`
        (Err(f), _) if f.code == 0 => ExitCode::SUCCESS,
        (Ok(_), Err(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        (Err(f), _) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
        (Ok(_), Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CAPABILITY)
        }
    }
}

fn run(command: Command, ctx: &mut Ctx) -> Outcome {
    match command {
        Command::Factor { x } => cmd_factor(ctx, x),
        Command::Relate { x, y, n, mu, .. } => cmd_relate(ctx, x, y, n, mu),
        Command::Atom { x, n, method } => cmd_atom(ctx, x, n, method),
        Command::Prime { x, n, bound } => cmd_prime(ctx, x, n, bound),
        Command::Enumerate {
            x,
            n,
            all_signs,
            max_parts,
        } => cmd_enumerate(ctx, x, n, all_signs, max_parts),
        Command::Classes { n } => cmd_classes(ctx, n),
        Command::Table {
            n,
            max_per_class,
            x0_levels,
            out,
            cache_dir,
            no_cache,
        } => {
            let cache = if no_cache {
                None
            } else {
                ctx.config.resolve_cache_dir(cache_dir)
            };
            cmd_table(ctx, n, max_per_class, &x0_levels, out.as_deref(), cache.as_deref())
        }
        Command::Verify { id, all, limit } => cmd_verify(ctx, id.filter(|_| !all), limit),
        Command::Instantiate { signature, n } => cmd_instantiate(ctx, &signature, n),
        Command::Sweep { n, lo, hi, paths } => cmd_sweep(ctx, n, lo, hi, &paths),
        Command::Conditions {
            n,
            i,
            j,
            m,
            k,
            reading,
        } => cmd_conditions(ctx, n, i, j, m, k, reading),
        Command::Score { moduli, count_cap } => cmd_score(ctx, &moduli, count_cap),
    }
}

#[derive(Serialize)]
struct PrimePower {
    prime: u64,
    exponent: u32,
}

#[derive(Serialize)]
struct FactorOut {
    x: i64,
    sign: i8,
    factors: Vec<PrimePower>,
    text: String,
}

fn cmd_factor(ctx: &mut Ctx, x: i64) -> Outcome {
    let f = factor(x)?;
    let out = FactorOut {
        x,
        sign: f.sign(),
        factors: f
            .factors()
            .iter()
            .map(|&(prime, exponent)| PrimePower { prime, exponent })
            .collect(),
        text: f.to_string(),
    };
    match ctx.format {
        Format::Text => writeln!(ctx.out, "{}", out.text)?,
        Format::Json => ctx.json(&out)?,
        Format::Csv => {
            let mut w = ctx.csv();
            w.write_record(["prime", "exponent"])?;
            for p in &out.factors {
                w.write_record([p.prime.to_string(), p.exponent.to_string()])?;
            }
            w.flush()?;
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct RelateOut {
    x: i64,
    y: i64,
    n: u64,
    relation: &'static str,
    related: bool,
}

fn cmd_relate(ctx: &mut Ctx, x: i64, y: i64, n: u64, mu: bool) -> Outcome {
    let modulus = Modulus::new(n)?;
    let (relation, related) = if mu {
        ("mu", mu_related(x, y, modulus))
    } else {
        ("tau", tau_related(x, y, modulus))
    };
    let out = RelateOut {
        x,
        y,
        n,
        relation,
        related,
    };
    match ctx.format {
        Format::Text => writeln!(ctx.out, "{related}")?,
        Format::Json => ctx.json(&out)?,
        Format::Csv => {
            let mut w = ctx.csv();
            w.serialize(&out)?;
            w.flush()?;
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct PathResult {
    method: &'static str,
    is_atom: bool,
    rule: Option<String>,
    witness: Option<String>,
    skipped: Option<String>,
}

#[derive(Serialize)]
struct AtomOut {
    x: i64,
    n: u64,
    results: Vec<PathResult>,
    agree: bool,
}

fn cmd_atom(ctx: &mut Ctx, x: i64, n: u64, method: Method) -> Outcome {
    let modulus = Modulus::new(n)?;
    let all = method == Method::All;
    let mut results = Vec::new();
    if all || method == Method::Oracle {
        let witness = engine::find_proper_tau_factorization(x, modulus)?;
        results.push(PathResult {
            method: "oracle",
            is_atom: witness.is_none(),
            rule: None,
            witness: witness.map(|w| w.to_string()),
            skipped: None,
        });
    }
    if all || method == Method::Theorem {
        match classifier::classify_atom(x, modulus) {
            Ok(v) => results.push(PathResult {
                method: "theorem",
                is_atom: v.is_atom,
                rule: Some(v.rule.to_string()),
                witness: None,
                skipped: None,
            }),
            Err(e @ Error::UnsupportedModulus(_)) if all => {
                results.push(skipped("theorem", e.to_string()))
            }
            Err(e) => return Err(e.into()),
        }
    }
    if all || method == Method::Signature {
        if modulus.is_odd_prime() {
            let table = ClassTable::cached(n)?;
            let s = signature_of(x, &table)?;
            let verdict = SignatureSolver::new(table.q()).decide(&s);
            results.push(PathResult {
                method: "signature",
                is_atom: verdict.is_atom(),
                rule: Some(s.to_string()),
                witness: verdict.witness().map(format_witness),
                skipped: None,
            });
        } else if all {
            results.push(skipped("signature", format!("modulus {n} is not an odd prime")));
        } else {
            return Err(Error::UnsupportedModulus(n).into());
        }
    }
    let ran: Vec<&PathResult> = results.iter().filter(|r| r.skipped.is_none()).collect();
    let agree = ran.windows(2).all(|w| w[0].is_atom == w[1].is_atom);
    let out = AtomOut { x, n, results, agree };
    match ctx.format {
        Format::Text => {
            for r in &out.results {
                if let Some(why) = &r.skipped {
                    writeln!(ctx.out, "{:<10} skipped ({why})", r.method)?;
                    continue;
                }
                let verdict = if r.is_atom { "atom" } else { "reducible" };
                write!(ctx.out, "{:<10} {verdict}", r.method)?;
                if let Some(rule) = &r.rule {
                    write!(ctx.out, "  [{rule}]")?;
                }
                if let Some(w) = &r.witness {
                    write!(ctx.out, "  witness {w}")?;
                }
                writeln!(ctx.out)?;
            }
            if all {
                let line = if out.agree { "all paths agree" } else { "paths disagree" };
                writeln!(ctx.out, "{line}")?;
            }
        }
        Format::Json => ctx.json(&out)?,
        Format::Csv => {
            let mut w = ctx.csv();
            w.write_record(["x", "n", "method", "is_atom", "rule", "witness", "skipped"])?;
            for r in &out.results {
                w.write_record([
                    x.to_string(),
                    n.to_string(),
                    r.method.to_string(),
                    r.is_atom.to_string(),
                    r.rule.clone().unwrap_or_default(),
                    r.witness.clone().unwrap_or_default(),
                    r.skipped.clone().unwrap_or_default(),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(if out.agree { 0 } else { EXIT_MISMATCH })
}

fn skipped(method: &'static str, reason: String) -> PathResult {
    PathResult {
        method,
        is_atom: false,
        rule: None,
        witness: None,
        skipped: Some(reason),
    }
}

#[derive(Serialize)]
struct PrimeOut {
    x: u64,
    n: u64,
    bound: u64,
    #[serde(flatten)]
    verdict: PrimeCheckVerdict,
}

fn cmd_prime(ctx: &mut Ctx, x: u64, n: u64, bound: Option<u64>) -> Outcome {
    let modulus = Modulus::new(n)?;
    let mut bound = bound.unwrap_or_else(|| engine::default_prime_bound(x));
    if let Some(cap) = ctx.config.prime_bound_cap {
        bound = bound.min(cap).max(x);
    }
    let verdict = engine::is_tau_prime_check(x, modulus, bound)?;
    let out = PrimeOut {
        x,
        n,
        bound,
        verdict,
    };
    match ctx.format {
        Format::Text => match &out.verdict {
            PrimeCheckVerdict::ConfirmedPrime => writeln!(ctx.out, "{x} is a tau_{n}-prime")?,
            PrimeCheckVerdict::CounterexampleFound {
                multiple,
                factorization,
            } => writeln!(
                ctx.out,
                "{x} is not a tau_{n}-prime: counterexample {multiple} = {factorization}"
            )?,
            PrimeCheckVerdict::NoCounterexampleUpTo { bound } => writeln!(
                ctx.out,
                "{x} is not certified; no counterexample among multiples up to {bound}"
            )?,
        },
        Format::Json => ctx.json(&out)?,
        Format::Csv => {
            let (verdict, multiple, factorization) = match &out.verdict {
                PrimeCheckVerdict::ConfirmedPrime => ("confirmed_prime", String::new(), String::new()),
                PrimeCheckVerdict::CounterexampleFound {
                    multiple,
                    factorization,
                } => (
                    "counterexample_found",
                    multiple.to_string(),
                    factorization.to_string(),
                ),
                PrimeCheckVerdict::NoCounterexampleUpTo { .. } => {
                    ("no_counterexample_up_to", String::new(), String::new())
                }
            };
            let mut w = ctx.csv();
            w.write_record(["x", "n", "bound", "verdict", "multiple", "factorization"])?;
            w.write_record([
                x.to_string(),
                n.to_string(),
                bound.to_string(),
                verdict.to_string(),
                multiple,
                factorization,
            ])?;
            w.flush()?;
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct EnumerateOut {
    x: i64,
    n: Option<u64>,
    sign_convention: &'static str,
    count: usize,
    factorizations: Vec<SignedFactorization>,
}

fn cmd_enumerate(
    ctx: &mut Ctx,
    x: i64,
    n: Option<u64>,
    all_signs: bool,
    max_parts: Option<usize>,
) -> Outcome {
    let filter = n.map(Modulus::new).transpose()?;
    let mut cfg = EnumConfig {
        max_parts,
        sign_convention: if all_signs {
            SignConvention::AllSignPatterns
        } else {
            SignConvention::CanonicalSigns
        },
        ..EnumConfig::default()
    };
    if let Some(cap) = ctx.config.partition_cap {
        cfg.partition_cap = cap;
    }
    let factorizations: Vec<SignedFactorization> =
        engine::enumerate_signed_factorizations(x, filter, &cfg)?
            .into_iter()
            .filter(|f| f.is_proper())
            .collect();
    let out = EnumerateOut {
        x,
        n,
        sign_convention: if all_signs { "all_sign_patterns" } else { "canonical" },
        count: factorizations.len(),
        factorizations,
    };
    match ctx.format {
        Format::Text => {
            for f in &out.factorizations {
                writeln!(ctx.out, "{f}")?;
            }
            writeln!(ctx.out, "{} factorizations", out.count)?;
        }
        Format::Json => ctx.json(&out)?,
        Format::Csv => {
            let mut w = ctx.csv();
            w.write_record(["unit", "parts"])?;
            for f in &out.factorizations {
                let parts: Vec<String> = f.parts.iter().map(|p| p.to_string()).collect();
                w.write_record([f.unit.to_string(), parts.join(" ")])?;
            }
            w.flush()?;
        }
    }
    Ok(0)
}

fn cmd_classes(ctx: &mut Ctx, n: u64) -> Outcome {
    let table = ClassTable::build(n)?;
    let classes = table.classes();
    match ctx.format {
        Format::Text => {
            writeln!(ctx.out, "n={} base={} q={}", table.n(), table.base(), table.q())?;
            for (k, residues) in classes.iter().enumerate() {
                let label = if k == 0 { "z".to_string() } else { format!("x{}", k - 1) };
                let rs: Vec<String> = residues.iter().map(|r| r.to_string()).collect();
                writeln!(ctx.out, "{label:<4} {}", rs.join(" "))?;
            }
        }
        Format::Json => writeln!(ctx.out, "{}", table.to_json())?,
        Format::Csv => {
            let mut w = ctx.csv();
            w.write_record(["label", "representative", "residues"])?;
            for (k, residues) in classes.iter().enumerate() {
                let (label, rep) = if k == 0 {
                    ("z".to_string(), 0)
                } else {
                    (format!("x{}", k - 1), table.representative(k as u32 - 1))
                };
                let rs: Vec<String> = residues.iter().map(|r| r.to_string()).collect();
                w.write_record([label, rep.to_string(), rs.join(" ")])?;
            }
            w.flush()?;
        }
    }
    Ok(0)
}

fn write_table<W: Write>(
    out: &mut W,
    format: Format,
    q: u32,
    entries: impl Iterator<Item = TableEntry>,
) -> io::Result<()> {
    match format {
        Format::Text => signatures::write_table_text(out, entries),
        Format::Json => signatures::write_table_json(out, entries),
        Format::Csv => signatures::write_table_csv(out, q, entries),
    }
}

fn cmd_table(
    ctx: &mut Ctx,
    n: u64,
    max_per_class: u32,
    x0_levels: &[u32],
    out: Option<&FsPath>,
    cache: Option<&FsPath>,
) -> Outcome {
    let cap = ctx.config.table_cap.unwrap_or(signatures::DEFAULT_TABLE_CAP);
    let spec = TableSpec::new(n, max_per_class, x0_levels, cap)?;
    let q = spec.q;
    let ext = match ctx.format {
        Format::Text => "txt",
        Format::Json => "json",
        Format::Csv => "csv",
    };
    let started = Instant::now();
    let entries = spec.entry_count();
    let cached = cache.map(|dir| dir.join(format!("{}.{ext}", spec.cache_stem())));

    match &cached {
        Some(path) if path.exists() => {
            eprintln!("cache hit {}", path.display());
        }
        Some(path) => {
            let dir = path.parent().expect("cache file has a parent");
            std::fs::create_dir_all(dir)?;
            let tmp = path.with_extension(format!("{ext}.partial"));
            let mut w = BufWriter::new(File::create(&tmp)?);
            write_table(&mut w, ctx.format, q, TableStream::new(spec.clone()))?;
            w.into_inner().map_err(|e| e.into_error())?.sync_all()?;
            std::fs::rename(&tmp, path)?;
        }
        None => {}
    }

    match (&cached, out) {
        (Some(path), Some(dest)) => {
            std::fs::copy(path, dest)?;
        }
        (Some(path), None) => {
            io::copy(&mut File::open(path)?, &mut ctx.out)?;
        }
        (None, Some(dest)) => {
            let mut w = BufWriter::new(File::create(dest)?);
            write_table(&mut w, ctx.format, q, TableStream::new(spec))?;
            w.flush()?;
        }
        (None, None) => write_table(&mut ctx.out, ctx.format, q, TableStream::new(spec))?,
    }
    eprintln!(
        "{entries} entries for n={n} in {:.2}s",
        started.elapsed().as_secs_f64()
    );
    Ok(0)
}

#[derive(Serialize)]
struct VerifyOut {
    passed: bool,
    checks: Vec<TheoremCheck>,
}

fn cmd_verify(ctx: &mut Ctx, id: Option<String>, limit: Option<u64>) -> Outcome {
    let checks = match id {
        Some(id) => {
            let id: TheoremId = id.parse()?;
            vec![verify::run_theorem_check(id, CheckParams { limit })?]
        }
        None => TheoremId::ALL
            .into_iter()
            .map(|id| verify::run_theorem_check(id, CheckParams::default()))
            .collect::<Result<_, _>>()?,
    };
    let out = VerifyOut {
        passed: checks.iter().all(|c| c.passed),
        checks,
    };
    match ctx.format {
        Format::Text => {
            verify::write_checks_text(&mut ctx.out, &out.checks)?;
            let errata: usize = out.checks.iter().map(|c| c.errata.len()).sum();
            let passed = out.checks.iter().filter(|c| c.passed).count();
            writeln!(
                ctx.out,
                "{passed}/{} checks passed, {errata} errata noted",
                out.checks.len()
            )?;
        }
        Format::Json => ctx.json(&out)?,
        Format::Csv => {
            let mut w = ctx.csv();
            w.write_record(["id", "passed", "limit", "cases", "witnesses", "errata", "notes"])?;
            for c in &out.checks {
                w.write_record([
                    c.id.to_string(),
                    c.passed.to_string(),
                    c.limit.to_string(),
                    c.cases.to_string(),
                    c.witnesses.join("; "),
                    c.errata.join("; "),
                    c.notes.join("; "),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(if out.passed { 0 } else { EXIT_MISMATCH })
}

#[derive(Serialize)]
struct InstantiateOut {
    signature: String,
    n: u64,
    x: i64,
    factorization: String,
}

fn cmd_instantiate(ctx: &mut Ctx, signature: &str, n: u64) -> Outcome {
    let table = ClassTable::cached(n)?;
    let s = Signature::parse(signature, table.q())?;
    let x = verify::instantiate_signature(&s, &table)?;
    let out = InstantiateOut {
        signature: s.to_string(),
        n,
        x,
        factorization: factor(x)?.to_string(),
    };
    match ctx.format {
        Format::Text => writeln!(ctx.out, "{x}")?,
        Format::Json => ctx.json(&out)?,
        Format::Csv => {
            let mut w = ctx.csv();
            w.serialize(&out)?;
            w.flush()?;
        }
    }
    Ok(0)
}

fn cmd_sweep(ctx: &mut Ctx, n: u64, lo: i64, hi: Option<i64>, paths: &[String]) -> Outcome {
    let modulus = Modulus::new(n)?;
    let paths: Vec<Path> = paths
        .iter()
        .map(|p| p.parse::<Path>())
        .collect::<Result<_, _>>()?;
    let cap = ctx.config.sweep_cap.unwrap_or(verify::DEFAULT_SWEEP_CAP);
    let hi = hi.unwrap_or(cap);
    if hi > cap {
        return Err(usage(format!("hi = {hi} exceeds the sweep cap {cap}")));
    }
    let started = Instant::now();
    let report: DiscrepancyReport = verify::sweep_compare(modulus, lo, hi, &paths)?;
    match ctx.format {
        Format::Text => report.write_text(&mut ctx.out)?,
        Format::Json => writeln!(ctx.out, "{}", report.to_json())?,
        Format::Csv => {
            let mut w = ctx.csv();
            let mut header = vec!["x".to_string()];
            header.extend(report.paths.iter().map(|p| p.id().to_string()));
            header.push("rule".into());
            w.write_record(&header)?;
            for m in &report.mismatches {
                let mut row = vec![m.x.to_string()];
                row.extend(m.verdicts.values().map(|a| a.to_string()));
                row.push(m.rule.map(|r| r.to_string()).unwrap_or_default());
                w.write_record(&row)?;
            }
            w.flush()?;
        }
    }
    eprintln!(
        "swept {} values in {:.2}s",
        report.checked,
        started.elapsed().as_secs_f64()
    );
    Ok(if report.passed() { 0 } else { EXIT_MISMATCH })
}

#[derive(Serialize)]
struct ConditionsRow {
    reading: ConditionInterpretation,
    #[serde(flatten)]
    report: ConditionReport,
}

#[derive(Serialize)]
struct ConditionsOut {
    n: u64,
    i: u32,
    j: u32,
    m: u32,
    k: u32,
    signature: String,
    signature_verdict: &'static str,
    readings: Vec<ConditionsRow>,
}

fn cmd_conditions(ctx: &mut Ctx, n: u64, i: u32, j: u32, m: u32, k: u32, reading: Reading) -> Outcome {
    let g = classifier::GeneralizationInstance::new(n, i, j, m, k)?;
    let readings = match reading {
        Reading::Default => vec![ConditionInterpretation::Default],
        Reading::Alternative => vec![ConditionInterpretation::Alternative],
        Reading::Both => ConditionInterpretation::ALL.to_vec(),
    };
    let s = g.signature();
    let verdict = signatures::signature_is_atom(&s);
    let out = ConditionsOut {
        n,
        i,
        j,
        m,
        k,
        signature: s.to_string(),
        signature_verdict: verdict.label(),
        readings: readings
            .into_iter()
            .map(|r| ConditionsRow {
                reading: r,
                report: classifier::check_generalization_conditions(&g, r),
            })
            .collect(),
    };
    match ctx.format {
        Format::Text => {
            writeln!(ctx.out, "{} under n={n}: {}", out.signature, out.signature_verdict)?;
            for r in &out.readings {
                let c = &r.report;
                writeln!(
                    ctx.out,
                    "{:<12} holds={} divisor={} zero_sum={} partial_sum={}",
                    r.reading.id(),
                    c.holds,
                    c.divisor_condition,
                    c.zero_sum_condition,
                    c.partial_sum_condition
                )?;
            }
        }
        Format::Json => ctx.json(&out)?,
        Format::Csv => {
            let mut w = ctx.csv();
            w.write_record(["reading", "holds", "divisor", "zero_sum", "partial_sum", "verdict"])?;
            for r in &out.readings {
                let c = &r.report;
                w.write_record([
                    r.reading.id().to_string(),
                    c.holds.to_string(),
                    c.divisor_condition.to_string(),
                    c.zero_sum_condition.to_string(),
                    c.partial_sum_condition.to_string(),
                    out.signature_verdict.to_string(),
                ])?;
            }
            w.flush()?;
        }
    }
    // a reducible signature passing the conditions would refute the criterion
    let refuted = verdict != Verdict::Atom && out.readings.iter().any(|r| r.report.holds);
    Ok(if refuted { EXIT_MISMATCH } else { 0 })
}

fn cmd_score(ctx: &mut Ctx, moduli: &[u64], count_cap: u32) -> Outcome {
    let scores = verify::score_interpretations(moduli, count_cap)?;
    match ctx.format {
        Format::Text => {
            for r in &scores.rows {
                writeln!(
                    ctx.out,
                    "{:<12} n={:<3} shapes={:<5} hold={:<5} violations={:<3} misses={:<4} m0_unsat={}",
                    r.interpretation.id(),
                    r.n,
                    r.shape_matching,
                    r.conditions_hold,
                    r.soundness_violations.len(),
                    r.permitted_misses,
                    r.m_zero_unsatisfiable
                )?;
                for s in &r.soundness_violations {
                    writeln!(ctx.out, "    violation: {s}")?;
                }
            }
            let adj = scores.adjudicated.map(|i| i.id()).unwrap_or("none");
            writeln!(ctx.out, "adjudicated: {adj}")?;
        }
        Format::Json => ctx.json(&scores)?,
        Format::Csv => {
            let mut w = ctx.csv();
            w.write_record([
                "reading",
                "n",
                "shapes",
                "hold",
                "violations",
                "misses",
                "m0_unsat",
            ])?;
            for r in &scores.rows {
                w.write_record([
                    r.interpretation.id().to_string(),
                    r.n.to_string(),
                    r.shape_matching.to_string(),
                    r.conditions_hold.to_string(),
                    r.soundness_violations.len().to_string(),
                    r.permitted_misses.to_string(),
                    r.m_zero_unsatisfiable.to_string(),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(if scores.adjudicated.is_some() { 0 } else { EXIT_MISMATCH })
}
