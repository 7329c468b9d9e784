use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mulpart::table::{
    build_spf_with_budget, generate_table, generate_table_parallel, write_bfile, write_csv_row,
    Method, Quantity, CSV_HEADER, DEFAULT_SIEVE_BUDGET,
};
use mulpart::{
    compare_reference, factorize, mu_closed, nu1, nu2, parse_bfile, CountQuery, Counter, Error,
    Oracle, OracleLimits, SpfTable, TableRow,
};

const EXIT_USAGE: u8 = 1;
const EXIT_MISMATCH: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

/// Count factorizations of integers exactly.
#[derive(Parser, Debug)]
#[command(name = "mulpart", version)]
struct Cli {
    #[command(flatten)]
    budgets: Budgets,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Budgets {
    /// Largest m the brute-force oracle will enumerate.
    #[arg(long, global = true, env = "MULPART_ORACLE_MAX_M", default_value_t = mulpart::oracle::DEFAULT_MAX_M)]
    oracle_max_m: u64,
    /// Largest k the brute-force oracle will enumerate.
    #[arg(long, global = true, env = "MULPART_ORACLE_MAX_K", default_value_t = mulpart::oracle::DEFAULT_MAX_K)]
    oracle_max_k: u32,
    /// Largest sieve limit for table generation.
    #[arg(long, global = true, env = "MULPART_SIEVE_BUDGET", default_value_t = DEFAULT_SIEVE_BUDGET)]
    sieve_budget: u64,
}

impl Budgets {
    fn oracle(&self) -> Oracle {
        Oracle::new(OracleLimits {
            max_m: self.oracle_max_m,
            max_k: self.oracle_max_k,
        })
    }

    fn sieve(&self, limit: u64) -> Result<SpfTable, Failure> {
        build_spf_with_budget(limit, self.sieve_budget).map_err(Failure::from)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count the factorizations of one integer.
    Count(CountArgs),
    /// Tabulate a count over m = 2..=max (1..=max for totals).
    Table(TableArgs),
    /// Cross-check closed forms, recursions and the oracle on a grid.
    Verify(VerifyArgs),
    /// Time closed-form against recursive table generation.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CountMethod {
    Closed,
    Recursive,
    Oracle,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[arg(long)]
    m: u64,
    #[arg(long)]
    k: u32,
    /// Lower bound on every factor.
    #[arg(long, default_value_t = 1)]
    ell: u64,
    #[arg(long, value_enum, default_value_t = CountMethod::Recursive)]
    method: CountMethod,
    /// Count ordered tuples instead of nondecreasing ones.
    #[arg(long)]
    ordered: bool,
    /// With the oracle, also list the nondecreasing tuples.
    #[arg(long, short)]
    verbose: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Bfile,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TableMethod {
    Closed,
    Recursive,
}

#[derive(Args, Debug)]
struct QuantityArgs {
    /// Number of factors; omit with --total.
    #[arg(long, conflicts_with = "total")]
    k: Option<u32>,
    /// Sum over every number of factors (needs --ell >= 2).
    #[arg(long)]
    total: bool,
    #[arg(long, default_value_t = 1)]
    ell: u64,
    /// Ordered tuples instead of nondecreasing ones.
    #[arg(long)]
    ordered: bool,
    #[arg(long, value_enum, default_value_t = TableMethod::Closed)]
    method: TableMethod,
}

impl QuantityArgs {
    fn quantity(&self) -> Result<Quantity, Failure> {
        let q = match (self.total, self.k, self.ordered) {
            (true, _, false) => Quantity::MuTotal { ell: self.ell },
            (true, _, true) => Quantity::NuTotal { ell: self.ell },
            (false, Some(k), true) => Quantity::Nu { k, ell: self.ell },
            (false, Some(k), false) => Quantity::Mu {
                k,
                ell: self.ell,
                method: match self.method {
                    TableMethod::Closed => Method::Closed,
                    TableMethod::Recursive => Method::Recursive,
                },
            },
            (false, None, _) => return Err(Failure::usage("either --k or --total is required")),
        };
        q.validate().map_err(|e| Failure::usage(e.to_string()))?;
        Ok(q)
    }
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long)]
    max: u64,
    #[command(flatten)]
    quantity: QuantityArgs,
    #[arg(long, value_enum, default_value_t = Format::Bfile)]
    format: Format,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Compare the table against this b-file and exit 2 on any mismatch.
    #[arg(long)]
    reference: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    max: u64,
    #[arg(long, default_value_t = 4)]
    k_max: u32,
    #[arg(long, default_value_t = 2)]
    ell_max: u64,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long)]
    max: u64,
    #[arg(long, default_value_t = 4)]
    k: u32,
    #[arg(long, default_value_t = 1)]
    ell: u64,
    /// Also time the brute-force oracle.
    #[arg(long)]
    oracle: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Mismatch(String),
    Internal(String),
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure::Usage(msg.into())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Indivisible { .. } => Failure::Internal(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn exit_code(f: &Failure) -> u8 {
    match f {
        Failure::Usage(_) => EXIT_USAGE,
        Failure::Mismatch(_) => EXIT_MISMATCH,
        Failure::Internal(_) => EXIT_INTERNAL,
    }
}

fn cmd_count(args: &CountArgs, budgets: &Budgets) -> Result<(), Failure> {
    let q = CountQuery::new(args.m, args.k, args.ell).map_err(|e| Failure::usage(e.to_string()))?;
    if args.method == CountMethod::Closed {
        if q.m < 2 {
            return Err(Failure::usage("the closed forms need m > 1"));
        }
        if !args.ordered && q.k > 4 {
            return Err(Failure::usage("the closed forms cover k <= 4"));
        }
        if q.ell > 2 {
            return Err(Failure::usage("the closed forms cover --ell 1 or 2"));
        }
    }
    if args.verbose && (args.method != CountMethod::Oracle || args.ordered) {
        return Err(Failure::usage("--verbose lists tuples only for the unordered oracle"));
    }
    let value = match (args.method, args.ordered) {
        (CountMethod::Closed, false) => mu_closed(&factorize(q.m)?, q.k, q.ell)?,
        (CountMethod::Closed, true) if q.ell == 1 => nu1(&factorize(q.m)?, q.k)?,
        (CountMethod::Closed, true) => nu2(&factorize(q.m)?, q.k)?,
        (CountMethod::Recursive, false) => Counter::new().mu_rec(q)?,
        (CountMethod::Recursive, true) => Counter::new().nu_rec(q)?,
        (CountMethod::Oracle, true) => budgets.oracle().count_ordered(q.m, q.k, q.ell)?,
        (CountMethod::Oracle, false) => {
            let tuples = budgets.oracle().enum_nondecreasing(q.m, q.k, q.ell)?;
            if args.verbose {
                for t in &tuples {
                    let parts: Vec<String> = t.iter().map(u64::to_string).collect();
                    println!("{}", parts.join(" "));
                }
            }
            tuples.len().into()
        }
    };
    println!("{value}");
    Ok(())
}

fn write_rows<W: Write>(
    out: &mut W,
    format: Format,
    rows: impl Iterator<Item = mulpart::Result<TableRow>>,
    mut keep: impl FnMut(&TableRow),
) -> Result<(), Failure> {
    if format == Format::Csv {
        writeln!(out, "{CSV_HEADER}")?;
    }
    for row in rows {
        let row = row?;
        match format {
            Format::Csv => write_csv_row(out, &row)?,
            Format::Bfile => write_bfile(out, &row)?,
        }
        keep(&row);
    }
    out.flush()?;
    Ok(())
}

fn cmd_table(args: &TableArgs, budgets: &Budgets) -> Result<(), Failure> {
    let quantity = args.quantity.quantity()?;
    if args.max < 2 {
        return Err(Failure::usage("--max must be at least 2"));
    }
    if args.threads == 0 {
        return Err(Failure::usage("--threads must be positive"));
    }
    let reference = match &args.reference {
        Some(path) => Some(parse_bfile(BufReader::new(File::open(path)?))?),
        None => None,
    };
    let spf = budgets.sieve(args.max)?;

    let mut kept: Vec<TableRow> = Vec::new();
    let keep = |row: &TableRow| {
        if reference.is_some() {
            kept.push(row.clone());
        }
    };
    let rows: Box<dyn Iterator<Item = mulpart::Result<TableRow>>> = if args.threads > 1 {
        let rows = generate_table_parallel(args.max, quantity, &spf, args.threads)?;
        Box::new(rows.into_iter().map(Ok))
    } else {
        Box::new(generate_table(args.max, quantity, &spf)?)
    };
    match &args.out {
        Some(path) => {
            let mut out = BufWriter::new(File::create(path)?);
            write_rows(&mut out, args.format, rows, keep)?;
        }
        None => {
            let stdout = io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            write_rows(&mut out, args.format, rows, keep)?;
        }
    }

    if let Some(reference) = reference {
        let report = compare_reference(kept.into_iter().map(Ok), &reference)?;
        // keep stdout clean for the table itself
        eprint!("{report}");
        if !report.is_clean() {
            return Err(Failure::Mismatch(format!(
                "{} mismatches against the reference",
                report.mismatches.len()
            )));
        }
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, budgets: &Budgets) -> Result<(), Failure> {
    if args.max < 2 {
        return Err(Failure::usage("--max must be at least 2"));
    }
    if args.k_max == 0 || args.ell_max == 0 {
        return Err(Failure::usage("--k-max and --ell-max must be positive"));
    }
    let oracle = budgets.oracle();
    if args.max > oracle.limits().max_m || args.k_max > oracle.limits().max_k {
        return Err(Failure::usage(format!(
            "grid exceeds the oracle budget (m <= {}, k <= {})",
            oracle.limits().max_m,
            oracle.limits().max_k
        )));
    }
    let mut counter = Counter::new();
    let mut checked = 0u64;
    for m in 2..=args.max {
        let sig = factorize(m)?;
        for k in 1..=args.k_max {
            for ell in 1..=args.ell_max {
                let brute = mulpart::ExactCount::from(oracle.enum_nondecreasing(m, k, ell)?.len());
                let rec = counter.mu_for(&sig, k, ell)?;
                let mut disagree = (rec != brute).then(|| format!("recursive {rec}"));
                if disagree.is_none() && k <= 4 && ell <= 2 {
                    let closed = mu_closed(&sig, k, ell)?;
                    disagree = (closed != brute).then(|| format!("closed {closed}"));
                }
                if let Some(what) = disagree {
                    println!("mismatch: mu_{ell}({m}, {k}): {what}, oracle {brute}");
                    return Err(Failure::Mismatch("verification failed".into()));
                }
                checked += 1;
            }
        }
        counter.clear();
    }
    println!(
        "verified {checked} queries: m in [2, {}], k <= {}, ell <= {}",
        args.max, args.k_max, args.ell_max
    );
    Ok(())
}

fn time_rows(label: &str, rows: u64, run: impl FnOnce() -> Result<(), Failure>) -> Result<(), Failure> {
    let start = Instant::now();
    run()?;
    let secs = start.elapsed().as_secs_f64();
    let rate = if secs > 0.0 { rows as f64 / secs } else { f64::INFINITY };
    println!("[timing] {label:<10} rows={rows} seconds={secs:.6} rows_per_second={rate:.0}");
    Ok(())
}

fn cmd_bench(args: &BenchArgs, budgets: &Budgets) -> Result<(), Failure> {
    if args.max < 2 {
        return Err(Failure::usage("--max must be at least 2"));
    }
    let oracle = budgets.oracle();
    if args.oracle && (args.max > oracle.limits().max_m || args.k > oracle.limits().max_k) {
        return Err(Failure::usage(format!(
            "oracle benchmark refused: --max {} exceeds the oracle budget {}",
            args.max,
            oracle.limits().max_m
        )));
    }
    let closed = Quantity::Mu { k: args.k, ell: args.ell, method: Method::Closed };
    let recursive = Quantity::Mu { k: args.k, ell: args.ell, method: Method::Recursive };
    closed.validate().map_err(|e| Failure::usage(e.to_string()))?;
    let spf = budgets.sieve(args.max)?;
    let rows = args.max - 1;
    println!(
        "bench: mu_{}(m, {}) for m in [2, {}], threads={}",
        args.ell, args.k, args.max, args.threads
    );
    let run = |q: Quantity| -> Result<(), Failure> {
        if args.threads > 1 {
            generate_table_parallel(args.max, q, &spf, args.threads)?;
        } else {
            for row in generate_table(args.max, q, &spf)? {
                row?;
            }
        }
        Ok(())
    };
    time_rows("closed", rows, || run(closed))?;
    time_rows("recursive", rows, || run(recursive))?;
    if args.oracle {
        time_rows("oracle", rows, || {
            for m in 2..=args.max {
                oracle.enum_nondecreasing(m, args.k, args.ell)?;
            }
            Ok(())
        })?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Count(args) => cmd_count(args, &cli.budgets),
        Command::Table(args) => cmd_table(args, &cli.budgets),
        Command::Verify(args) => cmd_verify(args, &cli.budgets),
        Command::Bench(args) => cmd_bench(args, &cli.budgets),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let msg = match &f {
                Failure::Usage(m) => format!("error: {m}"),
                Failure::Mismatch(m) => format!("mismatch: {m}"),
                Failure::Internal(m) => format!("internal error: {m}"),
            };
            eprintln!("{msg}");
            ExitCode::from(exit_code(&f))
        }
    }
}
