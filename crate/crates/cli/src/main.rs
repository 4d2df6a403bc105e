//! `kingdom` - domination polynomials of chessboard graphs from the command
//! line.
//!
//! Exit codes: 0 success, 1 verification or equivalence failure, 2 usage
//! error, 3 guard violation or unsupported board.

use std::fmt;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::json;

use kingdom::board::{BoardSpec, BoundaryMode, Family, SpecParseError};
use kingdom::matching::{self, MatchingError};
use kingdom::oracle::{self, OracleError};
use kingdom::poly::DominationPolynomial;
use kingdom::transfer::{self, TransferError, TransferOptions};

#[derive(Parser)]
#[command(name = "kingdom", version, about = "Domination polynomials of king and wazir boards")]
struct Cli {
    /// Machine-readable JSON output
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads (default: available parallelism)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Method {
    #[default]
    Auto,
    Transfer,
    Oracle,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the full domination polynomial
    Poly {
        /// Board spec, e.g. king:8x8, wazir:4x4, king:6x6:torus, king:3x3x3
        board: String,
        #[arg(long, value_enum, default_value_t)]
        method: Method,
        /// Override the oracle size guard
        #[arg(long)]
        force: bool,
        /// Keep dead DP states (debugging; must not change results)
        #[arg(long)]
        no_prune: bool,
    },
    /// Evaluate the domination polynomial at an integer point
    Eval {
        board: String,
        #[arg(short, long, allow_hyphen_values = true, default_value_t = -1)]
        z: i64,
        #[arg(long, value_enum, default_value_t)]
        method: Method,
        #[arg(long)]
        force: bool,
        #[arg(long)]
        no_prune: bool,
    },
    /// Scan P(z) over a rectangle of board sizes (columns m, rows n)
    #[command(group(ArgGroup::new("mode").args(["free", "cyl_x", "cyl_y", "torus"])))]
    Table {
        /// Piece family: king or wazir
        family: String,
        #[arg(long)]
        free: bool,
        #[arg(long)]
        cyl_x: bool,
        #[arg(long)]
        cyl_y: bool,
        #[arg(long)]
        torus: bool,
        /// Column range, e.g. 1..8 or 5
        #[arg(short)]
        m: RangeArg,
        /// Row range
        #[arg(short)]
        n: RangeArg,
        #[arg(short, long, allow_hyphen_values = true, default_value_t = -1)]
        z: i64,
        /// Annotate king/free cells against (-1)^(ceil(m/2)ceil(n/2))
        #[arg(long)]
        check_theorem: bool,
        /// CSV instead of aligned text
        #[arg(long)]
        csv: bool,
    },
    /// Run both engines and compare polynomials coefficient for coefficient
    Compare {
        board: String,
        #[arg(long)]
        force: bool,
    },
    /// Check the parity matching, exhaustively or on random samples
    VerifyMatching {
        board: Option<String>,
        #[arg(long = "board", value_name = "BOARD")]
        board_flag: Option<String>,
        #[arg(long)]
        exhaustive: bool,
        /// Number of random samples (mutually exclusive with --exhaustive)
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        force: bool,
    },
    /// Print the domination number (smallest k with N_k > 0)
    DominationNumber {
        board: String,
        #[arg(long, value_enum, default_value_t)]
        method: Method,
        #[arg(long)]
        force: bool,
    },
}

/// `A..B` or a single value.
#[derive(Clone, Copy, Debug)]
struct RangeArg {
    lo: usize,
    hi: usize,
}

impl FromStr for RangeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.parse::<usize>().map_err(|_| format!("bad range {s:?}"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b)?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        Ok(RangeArg { lo, hi })
    }
}

enum CliError {
    /// exit 1: a verification or cross-engine equivalence failure
    Verification(String),
    /// exit 2: bad invocation
    Usage(String),
    /// exit 3: size guard or unsupported board
    Guard(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Verification(m) | CliError::Usage(m) | CliError::Guard(m) => write!(f, "{m}"),
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Guard(_) => 3,
        }
    }
}

impl From<SpecParseError> for CliError {
    fn from(e: SpecParseError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        CliError::Guard(e.to_string())
    }
}

impl From<TransferError> for CliError {
    fn from(e: TransferError) -> Self {
        match e {
            TransferError::Board(b) => CliError::Usage(b.to_string()),
            other => CliError::Guard(other.to_string()),
        }
    }
}

impl From<MatchingError> for CliError {
    fn from(e: MatchingError) -> Self {
        match e {
            MatchingError::Oracle(o) => o.into(),
            MatchingError::UnsupportedFamily | MatchingError::UnsupportedBoundary => {
                CliError::Guard(format!("matching undefined: {e}"))
            }
            MatchingError::NotDominating => CliError::Verification(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("kingdom: --threads must be at least 1");
            return ExitCode::from(2);
        }
        // Ignore the error if a pool already exists (tests call run twice).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("kingdom: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn parse_board(s: &str) -> Result<BoardSpec, CliError> {
    Ok(s.parse::<BoardSpec>()?)
}

/// transfer when the board is 2-d and within the frontier guards, else oracle
fn pick_method(method: Method, spec: &BoardSpec) -> Method {
    match method {
        Method::Auto => {
            let transferable = spec.ndim() == 2
                && spec.dims().iter().min().copied().unwrap_or(0) <= transfer::MAX_FRONTIER
                && spec.dims().iter().max().copied().unwrap_or(0) <= transfer::MAX_SWEEP;
            if transferable {
                Method::Transfer
            } else {
                Method::Oracle
            }
        }
        m => m,
    }
}

fn compute_polynomial(
    spec: &BoardSpec,
    method: Method,
    force: bool,
    no_prune: bool,
) -> Result<(DominationPolynomial, &'static str), CliError> {
    let opts = TransferOptions { prune: !no_prune };
    match pick_method(method, spec) {
        Method::Transfer => Ok((transfer::transfer_polynomial_opt(spec, &opts)?, "transfer")),
        Method::Oracle => Ok((oracle::enumerate_polynomial(spec, force)?, "oracle")),
        Method::Auto => unreachable!("pick_method resolves auto"),
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Poly { board, method, force, no_prune } => {
            let spec = parse_board(board)?;
            let (p, used) = compute_polynomial(&spec, *method, *force, *no_prune)?;
            if cli.json {
                println!("{}", serde_json::to_string(&p.to_json(&spec.to_string())).unwrap());
            } else {
                println!("board:  {spec}");
                println!("method: {used}");
                println!("nverts: {}", p.nverts());
                println!("gamma:  {}", p.domination_number());
                let coeffs: Vec<String> = p.coeffs().iter().map(|c| c.to_string()).collect();
                println!("coeffs: {}", coeffs.join(" "));
                println!("P(-1) = {}", p.eval_i64(-1));
                println!("P(1)  = {}", p.eval_i64(1));
            }
            Ok(())
        }

        Command::Eval { board, z, method, force, no_prune } => {
            let spec = parse_board(board)?;
            let opts = TransferOptions { prune: !no_prune };
            let (value, used) = match pick_method(*method, &spec) {
                Method::Transfer => {
                    (transfer::transfer_eval_opt(&spec, *z, &opts)?.0, "transfer")
                }
                Method::Oracle => {
                    if *z == -1 {
                        (oracle::eval_signed_count(&spec, *force)?, "oracle")
                    } else {
                        (oracle::enumerate_polynomial(&spec, *force)?.eval_i64(*z), "oracle")
                    }
                }
                Method::Auto => unreachable!(),
            };
            if cli.json {
                println!(
                    "{}",
                    json!({"board": spec.to_string(), "z": z, "value": value.to_string(), "method": used})
                );
            } else {
                println!("P({z}) = {value}   [{spec}, {used}]");
            }
            Ok(())
        }

        Command::Table { family, free: _, cyl_x, cyl_y, torus, m, n, z, check_theorem, csv } => {
            let family = match family.as_str() {
                "king" => Family::King,
                "wazir" => Family::Wazir,
                other => return Err(CliError::Usage(format!("unknown family {other:?}"))),
            };
            let mode = if *cyl_x {
                BoundaryMode::CylX
            } else if *cyl_y {
                BoundaryMode::CylY
            } else if *torus {
                BoundaryMode::Torus
            } else {
                BoundaryMode::Free
            };
            if *check_theorem && !(family == Family::King && mode == BoundaryMode::Free) {
                return Err(CliError::Usage(
                    "--check-theorem applies to king boards with free boundaries".into(),
                ));
            }
            let scan = transfer::table_scan(family, mode, (m.lo, m.hi), (n.lo, n.hi), *z)?;
            let theorem_cell =
                |m: usize, n: usize| BigInt::from(if (m.div_ceil(2) * n.div_ceil(2)) % 2 == 0 { 1 } else { -1 });
            let mut mismatches = Vec::new();
            if *check_theorem {
                for (i, &nv) in scan.n_values.iter().enumerate() {
                    for (j, &mv) in scan.m_values.iter().enumerate() {
                        if scan.rows[i][j] != theorem_cell(mv, nv) {
                            mismatches.push((mv, nv, scan.rows[i][j].clone()));
                        }
                    }
                }
            }
            if cli.json {
                let rows: Vec<Vec<String>> = scan
                    .rows
                    .iter()
                    .map(|r| r.iter().map(BigInt::to_string).collect())
                    .collect();
                let mut obj = json!({
                    "family": family.to_string(),
                    "boundary": mode.to_string(),
                    "z": z,
                    "m": scan.m_values,
                    "n": scan.n_values,
                    "rows": rows,
                });
                if *check_theorem {
                    obj["theorem_mismatches"] = json!(mismatches
                        .iter()
                        .map(|(m, n, v)| json!({"m": m, "n": n, "value": v.to_string()}))
                        .collect::<Vec<_>>());
                }
                println!("{obj}");
            } else if *csv {
                let header: Vec<String> = scan.m_values.iter().map(usize::to_string).collect();
                println!("n\\m,{}", header.join(","));
                for (i, &nv) in scan.n_values.iter().enumerate() {
                    let cells: Vec<String> = scan.rows[i].iter().map(BigInt::to_string).collect();
                    println!("{nv},{}", cells.join(","));
                }
            } else {
                let width = scan
                    .rows
                    .iter()
                    .flatten()
                    .map(|v| v.to_string().len())
                    .chain(scan.m_values.iter().map(|m| m.to_string().len()))
                    .max()
                    .unwrap_or(1)
                    + 2;
                print!("{:>5}", "n\\m");
                for mv in &scan.m_values {
                    print!("{mv:>width$}");
                }
                println!();
                for (i, &nv) in scan.n_values.iter().enumerate() {
                    print!("{nv:>5}");
                    for (j, v) in scan.rows[i].iter().enumerate() {
                        let mark = if *check_theorem && *v != theorem_cell(scan.m_values[j], nv) {
                            "!"
                        } else {
                            ""
                        };
                        print!("{:>width$}", format!("{v}{mark}"));
                    }
                    println!();
                }
                if *check_theorem {
                    if mismatches.is_empty() {
                        println!("theorem check: all cells match (-1)^(ceil(m/2)ceil(n/2))");
                    } else {
                        for (mv, nv, v) in &mismatches {
                            println!("theorem check: m={mv} n={nv} has {v}");
                        }
                    }
                }
            }
            if !mismatches.is_empty() {
                return Err(CliError::Verification(format!(
                    "{} cells deviate from the theorem pattern",
                    mismatches.len()
                )));
            }
            Ok(())
        }

        Command::Compare { board, force } => {
            let spec = parse_board(board)?;
            if spec.ndim() != 2 {
                return Err(CliError::Guard(
                    "compare needs a 2-d board (the frontier engine is 2-d only)".into(),
                ));
            }
            let t0 = Instant::now();
            let via_oracle = oracle::enumerate_polynomial(&spec, *force)?;
            let oracle_ms = t0.elapsed().as_secs_f64() * 1e3;
            let t1 = Instant::now();
            let via_transfer = transfer::transfer_polynomial(&spec)?;
            let transfer_ms = t1.elapsed().as_secs_f64() * 1e3;
            let equal = via_oracle == via_transfer;
            let first_diff = via_oracle
                .coeffs()
                .iter()
                .zip(via_transfer.coeffs())
                .position(|(a, b)| a != b);
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "board": spec.to_string(),
                        "equal": equal,
                        "nverts": via_oracle.nverts(),
                        "first_difference": first_diff,
                        "oracle_ms": oracle_ms,
                        "transfer_ms": transfer_ms,
                    })
                );
            } else {
                println!("board:    {spec}");
                println!("oracle:   {oracle_ms:.2} ms");
                println!("transfer: {transfer_ms:.2} ms");
                if equal {
                    println!("polynomials are identical ({} coefficients)", via_oracle.nverts() + 1);
                }
            }
            if equal {
                Ok(())
            } else {
                let k = first_diff.expect("unequal polynomials differ somewhere");
                Err(CliError::Verification(format!(
                    "engines disagree at coefficient N_{k}: oracle {} vs transfer {}",
                    via_oracle.coeffs()[k],
                    via_transfer.coeffs()[k]
                )))
            }
        }

        Command::VerifyMatching { board, board_flag, exhaustive, samples, seed, force } => {
            let board = match (board, board_flag) {
                (Some(b), None) | (None, Some(b)) => b,
                (Some(_), Some(_)) => {
                    return Err(CliError::Usage("give the board once (positional or --board)".into()))
                }
                (None, None) => return Err(CliError::Usage("missing board spec".into())),
            };
            let spec = parse_board(board)?;
            if *exhaustive && samples.is_some() {
                return Err(CliError::Usage("--exhaustive and --samples are mutually exclusive".into()));
            }
            match samples {
                None => {
                    let report = matching::verify_theorem(&spec, *force)?;
                    if cli.json {
                        println!("{}", serde_json::to_string(&report).unwrap());
                    } else {
                        println!("board:           {}", report.board);
                        println!("dominating sets: {}", report.dominating_sets);
                        println!("pairs:           {}", report.pairs);
                        println!("fixed points:    {}", report.fixed_points);
                        println!("signed sum:      {} (expected {})", report.signed_sum, report.expected_sign);
                        println!("involution:      {}", ok(report.involution_ok));
                        println!("parity flip:     {}", ok(report.parity_ok));
                        println!("closure:         {}", ok(report.closure_ok));
                        println!("unique fixed pt: {}", ok(report.unique_fixed_point));
                        println!("signed count:    {}", ok(report.signed_ok));
                        for v in &report.violations {
                            println!("violation: {v}");
                        }
                    }
                    if report.pass() {
                        Ok(())
                    } else {
                        Err(CliError::Verification(format!(
                            "matching verification failed with {} recorded violations",
                            report.violations.len()
                        )))
                    }
                }
                Some(k) => {
                    let report = matching::sampled_check(&spec, *k, *seed)?;
                    if cli.json {
                        println!("{}", serde_json::to_string(&report).unwrap());
                    } else {
                        println!("board:        {}", report.board);
                        println!("trials:       {}", report.trials);
                        println!("pairs:        {}", report.pairs);
                        println!("fixed points: {}", report.fixed_points);
                        println!("violations:   {}", report.violations.len());
                        for v in &report.violations {
                            println!("violation: {v}");
                        }
                    }
                    if report.pass() {
                        Ok(())
                    } else {
                        Err(CliError::Verification(format!(
                            "{} sampled violations",
                            report.violations.len()
                        )))
                    }
                }
            }
        }

        Command::DominationNumber { board, method, force } => {
            let spec = parse_board(board)?;
            let (p, used) = compute_polynomial(&spec, *method, *force, false)?;
            let gamma = p.domination_number();
            if cli.json {
                println!("{}", json!({"board": spec.to_string(), "gamma": gamma, "method": used}));
            } else {
                println!("gamma({spec}) = {gamma}   [{used}]");
            }
            Ok(())
        }
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAIL"
    }
}
