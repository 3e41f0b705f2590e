//! `enumtree`: divisor-pair trees, their sequences and checks from the shell.

mod output;
mod verify;

use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use enumtree::analytics::{
    prime_representation, ratio_closed_form, roots_mod_p, row_stats_direct, row_stats_recursive,
};
use enumtree::classify::scan_violations;
use enumtree::monoid::index_to_word;
use enumtree::{
    f_hat_inverse, tree_rows, DivisorPair, EnumerablePoly, Error, NodeIndex, Poly, SSeqKernel,
    DEFAULT_NODE_BUDGET,
};
use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use output::{JsonInt, OutputRecord, SeqRecord};

#[derive(Debug, Parser)]
#[command(
    name = "enumtree",
    version,
    about = "Divisor-pair trees of x^2+1, x^2+x+1, x^2+2x-1 and x^2+3x+1"
)]
struct Cli {
    /// Largest number of tree nodes or sequence terms one command may produce.
    #[arg(long, global = true, env = "ENUMTREE_MAX_NODES", default_value_t = DEFAULT_NODE_BUDGET,
          value_parser = clap::value_parser!(u64).range(1..))]
    max_nodes: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TreeFormat {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SeqFormat {
    Bfile,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emit the tree breadth first, rows 0 through DEPTH.
    Tree {
        poly: EnumerablePoly,
        #[arg(long)]
        depth: u32,
        #[arg(long, value_enum, default_value_t = TreeFormat::Json)]
        format: TreeFormat,
    },
    /// Emit the second-component sequence S(1), ..., S(COUNT).
    Seq {
        poly: EnumerablePoly,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[arg(long, value_enum, default_value_t = SeqFormat::Bfile)]
        format: SeqFormat,
    },
    /// Find the matrix, word and tree index of the pair (M, N).
    Inverse {
        poly: EnumerablePoly,
        m: BigUint,
        n: BigUint,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// List the tree indices whose second component is N.
    Fiber {
        poly: EnumerablePoly,
        n: BigUint,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Run a self-check suite and print a JSON summary.
    Verify {
        #[arg(value_enum)]
        suite: verify::Suite,
        #[arg(long)]
        bound: u64,
    },
    /// Look for pairs breaking the enumerability criterion.
    ///
    /// Coefficients are constant term first and follow `--`, e.g.
    /// `scan -- 1 5 1 --nmax 10` for x^2 + 5x + 1.
    Scan {
        /// Coefficients, optionally followed by `--nmax N`.
        #[arg(trailing_var_arg = true, allow_hyphen_values = true, required = true)]
        args: Vec<String>,
        #[arg(long)]
        nmax: Option<u64>,
    },
    /// Row sums of first components, second components and ratios.
    Stats {
        poly: EnumerablePoly,
        /// Last row to report.
        #[arg(long)]
        rows: u32,
    },
    /// Write a prime as an alternating quotient of values of the polynomial.
    Primerep {
        poly: EnumerablePoly,
        p: BigUint,
        /// A root of the polynomial modulo P; all roots when omitted.
        #[arg(long)]
        n: Option<BigUint>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
    Io(io::Error),
    VerifyFailed,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::VerifyFailed => 1,
            CliError::Core(Error::BudgetExceeded { .. }) => 2,
            CliError::Core(Error::Vanishing { .. }) => 4,
            CliError::Core(_) | CliError::Usage(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

type Out<'a> = BufWriter<io::StdoutLock<'a>>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli, &mut out).and_then(|()| out.flush().map_err(CliError::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            match &e {
                CliError::Core(err) => eprintln!("error: {err}"),
                CliError::Usage(msg) => eprintln!("error: {msg}"),
                CliError::Io(err) => eprintln!("error: {err}"),
                CliError::VerifyFailed => {}
            }
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli, out: &mut Out) -> Result<(), CliError> {
    let budget = cli.max_nodes;
    match cli.command {
        Command::Tree {
            poly,
            depth,
            format,
        } => cmd_tree(out, poly, depth, format, budget),
        Command::Seq {
            poly,
            count,
            format,
        } => cmd_seq(out, poly, count, format, budget),
        Command::Inverse { poly, m, n, format } => cmd_inverse(out, poly, m, n, format),
        Command::Fiber { poly, n, format } => cmd_fiber(out, poly, n, format),
        Command::Verify { suite, bound } => {
            let summary = verify::run(suite, bound, budget)?;
            serde_json::to_writer(&mut *out, &summary)?;
            writeln!(out)?;
            if summary.failures.is_empty() {
                Ok(())
            } else {
                Err(CliError::VerifyFailed)
            }
        }
        Command::Scan { args, nmax } => cmd_scan(out, &args, nmax),
        Command::Stats { poly, rows } => cmd_stats(out, poly, rows, budget),
        Command::Primerep { poly, p, n } => cmd_primerep(out, poly, p, n),
    }
}

fn cmd_tree(
    out: &mut Out,
    f: EnumerablePoly,
    depth: u32,
    format: TreeFormat,
    budget: u64,
) -> Result<(), CliError> {
    let mut k = 1u64;
    for (row, pairs) in tree_rows(f, depth, budget)?.enumerate() {
        for p in pairs {
            let index = NodeIndex::new(k)?;
            let word = index_to_word(&index).to_string();
            match format {
                TreeFormat::Json => {
                    let rec = OutputRecord {
                        index: k.into(),
                        m: p.m().into(),
                        n: p.n().into(),
                        word,
                        row: row as u64,
                    };
                    serde_json::to_writer(&mut *out, &rec)?;
                    writeln!(out)?;
                }
                TreeFormat::Text => {
                    let word = if word.is_empty() {
                        "I".to_string()
                    } else {
                        word
                    };
                    writeln!(out, "{:indent$}{p}  #{k} {word}", "", indent = 2 * row)?;
                }
            }
            k += 1;
        }
    }
    Ok(())
}

fn cmd_seq(
    out: &mut Out,
    f: EnumerablePoly,
    count: u64,
    format: SeqFormat,
    budget: u64,
) -> Result<(), CliError> {
    if count > budget {
        return Err(Error::BudgetExceeded {
            requested: count.into(),
            budget,
        }
        .into());
    }
    let count = usize::try_from(count).map_err(|_| CliError::Usage("count too large".into()))?;
    let kernel = SSeqKernel::new(f);
    for (i, value) in kernel.s_prefix(count).into_iter().enumerate() {
        let k = i as u64 + 1;
        match format {
            SeqFormat::Bfile => writeln!(out, "{k} {value}")?,
            SeqFormat::Json => {
                serde_json::to_writer(
                    &mut *out,
                    &SeqRecord {
                        k: k.into(),
                        value: value.into(),
                    },
                )?;
                writeln!(out)?;
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct InverseReport {
    m: JsonInt,
    n: JsonInt,
    word: String,
    compact: String,
    matrix: [JsonInt; 4],
    index: JsonInt,
    exponents: Vec<JsonInt>,
    chain: Vec<[JsonInt; 2]>,
}

fn cmd_inverse(
    out: &mut Out,
    f: EnumerablePoly,
    m: BigUint,
    n: BigUint,
    format: ReportFormat,
) -> Result<(), CliError> {
    let pair = DivisorPair::of(f, m, n)?;
    let trace = f_hat_inverse(f, &pair)?;
    let matrix = trace.matrix();
    match format {
        ReportFormat::Text => {
            writeln!(out, "pair: {pair}")?;
            writeln!(out, "word: {}", trace.word)?;
            writeln!(out, "compact: {}", trace.word.compact())?;
            writeln!(out, "matrix: {matrix}")?;
            writeln!(out, "index: {}", trace.index)?;
            let exps: Vec<String> = trace.exponents.iter().map(ToString::to_string).collect();
            writeln!(out, "exponents: {}", exps.join(" "))?;
            let chain: Vec<String> = trace.pairs.iter().map(ToString::to_string).collect();
            writeln!(out, "chain: {}", chain.join(" -> "))?;
        }
        ReportFormat::Json => {
            let [a, b, c, d] = matrix.entries();
            let report = InverseReport {
                m: pair.m().into(),
                n: pair.n().into(),
                word: trace.word.to_string(),
                compact: trace.word.compact(),
                matrix: [a.into(), b.into(), c.into(), d.into()],
                index: trace.index.value().into(),
                exponents: trace.exponents.iter().map(JsonInt::from).collect(),
                chain: trace
                    .pairs
                    .iter()
                    .map(|p| [p.m().into(), p.n().into()])
                    .collect(),
            };
            serde_json::to_writer(&mut *out, &report)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct FiberReport {
    n: JsonInt,
    value: JsonInt,
    indices: Vec<JsonInt>,
    tau: u64,
    verdict: &'static str,
}

fn cmd_fiber(
    out: &mut Out,
    f: EnumerablePoly,
    n: BigUint,
    format: ReportFormat,
) -> Result<(), CliError> {
    let kernel = SSeqKernel::new(f);
    let fiber = kernel.fiber(&n)?;
    let verdict = if n.is_zero() {
        "unit"
    } else if kernel.is_f_prime_via_fiber(&n)? {
        "prime"
    } else {
        "composite"
    };
    match format {
        ReportFormat::Text => {
            let idx: Vec<String> = fiber.iter().map(ToString::to_string).collect();
            writeln!(
                out,
                "value: {} = {}",
                f.poly().display_at(&n),
                f.abs_eval(&n)
            )?;
            writeln!(out, "indices: {}", idx.join(" "))?;
            writeln!(out, "tau: {}", fiber.len())?;
            writeln!(out, "verdict: {verdict}")?;
        }
        ReportFormat::Json => {
            let report = FiberReport {
                value: f.abs_eval(&n).into(),
                n: n.into(),
                indices: fiber.iter().map(|k| k.value().into()).collect(),
                tau: fiber.len() as u64,
                verdict,
            };
            serde_json::to_writer(&mut *out, &report)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Splits the trailing arguments of `scan` into coefficients and `--nmax`.
fn parse_scan_args(args: &[String], nmax: Option<u64>) -> Result<(Poly, u64), CliError> {
    let mut coeffs = Vec::new();
    let mut nmax = nmax;
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let value = if a == "--nmax" {
            Some(
                it.next()
                    .ok_or_else(|| CliError::Usage("--nmax needs a value".into()))?
                    .as_str(),
            )
        } else {
            a.strip_prefix("--nmax=")
        };
        if let Some(v) = value {
            nmax = Some(
                v.parse()
                    .map_err(|_| CliError::Usage(format!("bad --nmax value {v:?}")))?,
            );
            continue;
        }
        let c: BigInt = a
            .parse()
            .map_err(|_| CliError::Usage(format!("bad coefficient {a:?}")))?;
        coeffs.push(c);
    }
    let poly = Poly::new(coeffs);
    if poly.is_zero() {
        return Err(CliError::Usage(
            "the zero polynomial vanishes everywhere".into(),
        ));
    }
    let nmax = nmax.ok_or_else(|| CliError::Usage("scan needs --nmax".into()))?;
    Ok((poly, nmax))
}

fn cmd_scan(out: &mut Out, args: &[String], nmax: Option<u64>) -> Result<(), CliError> {
    let (poly, nmax) = parse_scan_args(args, nmax)?;
    let report = scan_violations(&poly, nmax)?;
    writeln!(out, "f = {poly}")?;
    for v in &report.violations {
        writeln!(out, "{} ({}, {}): {}", v.side, v.m, v.n, v.detail())?;
    }
    for n in &report.incomplete {
        writeln!(out, "unchecked n = {n}: value not fully factored")?;
    }
    if report.violations.is_empty() {
        writeln!(out, "no violations up to {nmax}")?;
    } else {
        writeln!(out, "{} violations up to {nmax}", report.violations.len())?;
    }
    Ok(())
}

#[derive(Serialize)]
struct StatsRecord {
    k: u32,
    m_sum: JsonInt,
    n_sum: JsonInt,
    ratio_sum: String,
    mean_ratio: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    matches_recursion: Option<bool>,
}

fn cmd_stats(out: &mut Out, f: EnumerablePoly, rows: u32, budget: u64) -> Result<(), CliError> {
    for k in 0..=rows {
        let s = row_stats_direct(f, k, budget)?;
        let matches_recursion = (f == EnumerablePoly::Phi0)
            .then(|| row_stats_recursive(k) == s && ratio_closed_form(k) == s.ratio_sum);
        let mean = s.mean_ratio();
        let rec = StatsRecord {
            k,
            m_sum: s.m_sum.into(),
            n_sum: s.n_sum.into(),
            ratio_sum: s.ratio_sum.to_string(),
            mean_ratio: mean.numer().to_f64().unwrap_or(f64::NAN)
                / mean.denom().to_f64().unwrap_or(f64::NAN),
            matches_recursion,
        };
        serde_json::to_writer(&mut *out, &rec)?;
        writeln!(out)?;
    }
    Ok(())
}

fn cmd_primerep(
    out: &mut Out,
    f: EnumerablePoly,
    p: BigUint,
    n: Option<BigUint>,
) -> Result<(), CliError> {
    let roots: Vec<BigUint> = match n {
        Some(n) => vec![n],
        None => {
            let small = p
                .to_u64()
                .ok_or_else(|| CliError::Usage("give --n for primes above 2^64".into()))?;
            roots_mod_p(f, small)?
                .into_iter()
                .map(BigUint::from)
                .collect()
        }
    };
    if roots.is_empty() {
        writeln!(out, "{p} divides no value of {}", f.poly())?;
    }
    for n in roots {
        let rep = prime_representation(f, &p, &n)?;
        writeln!(out, "{rep}")?;
    }
    Ok(())
}
