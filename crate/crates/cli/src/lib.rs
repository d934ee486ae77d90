//! `waring`: Waring numbers of finite fields, explicit sum-of-powers
//! decompositions in matrix rings and finite rings, and table scans.
//!
//! Exit codes: 0 on success, 1 on a usage error, 2 on a domain error (the
//! error's variant name is printed on stderr).

pub mod fixtures;
pub mod scan;

use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{error::ErrorKind, Args, CommandFactory, Parser, Subcommand};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use waring_core::decomposition::decompose_field;
use waring_core::gamma::{default_uncoverable_bound, gamma_max, uncoverable_fields};
use waring_core::matrix::{decompose_matrix_auto, decompose_matrix_with_row};
use waring_core::ring::{decompose_ring_element, decompose_ring_element_with_row};
use waring_core::spectral::{
    sarkozy_find_pair, sarkozy_min_size, sarkozy_threshold, spectrum, spectrum_bruteforce, multisets_match,
    verify_appendix_lemmas,
};
use waring_core::tables::{best_matrix_row, best_ring_row};
use waring_core::{field_of_order, gamma, FqElem, MatrixSpace, RingSpec, WaringError};

use fixtures::{run_suite, Suite};
use scan::{run_scan, Bound, Format, ScanError, ScanJob, DEFAULT_CHUNK_SIZE};

#[derive(Parser, Debug)]
#[command(name = "waring", version, about = "Waring numbers over finite fields and finite rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// γ(k, q) for a single field.
    Gamma {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        q: u64,
    },
    /// Scan γ(k, q) over all prime powers up to a bound.
    Table(TableArgs),
    /// Uncoverable fields for one k.
    Uncoverable {
        #[arg(long)]
        k: u64,
        #[arg(long, default_value = "auto", value_parser = parse_bound)]
        bound: Bound,
    },
    /// Maximum γ(k, q) over coverable fields.
    GammaMax {
        #[arg(long)]
        k: u64,
    },
    /// Eigenvalues of the k-th power Cayley digraph of F_q.
    Spectral {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        q: u64,
        /// Also compare against a dense eigen-solve.
        #[arg(long)]
        bruteforce: bool,
    },
    /// Look for two elements of a set whose difference is a k-th power.
    Sarkozy(SarkozyArgs),
    /// Exact check of the two polynomial inequalities behind the bounds.
    Lemmas {
        #[arg(long, default_value_t = 10)]
        x_max: u64,
        #[arg(long, default_value_t = 200)]
        y_window: u64,
    },
    /// Minimal decomposition of an element of F_q.
    DecomposeField {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        q: u64,
        /// Element code or polynomial in g, e.g. "g+1".
        #[arg(long)]
        y: String,
    },
    /// Decomposition of a square matrix over F_q.
    DecomposeMatrix {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        q: u64,
        /// Rows separated by ';', entries by ',', e.g. "g,0;0,g".
        #[arg(long)]
        a: String,
        /// Skip the witness-count row guard.
        #[arg(long)]
        no_row: bool,
    },
    /// Decomposition of an element of a finite commutative ring.
    DecomposeRing {
        #[arg(long)]
        k: u64,
        /// Ring, e.g. "zn:55", "polyq:p=3,s=1,f=x^2+1,e=2", "prod:zn:7|zn:11".
        #[arg(long)]
        ring: String,
        #[arg(long)]
        alpha: String,
        /// Skip the witness-count row guard (no zero padding).
        #[arg(long)]
        no_row: bool,
    },
    /// Compare freshly computed values with the embedded golden tables.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        kmin: Option<u64>,
        #[arg(long)]
        kmax: Option<u64>,
        #[arg(long)]
        qmax: Option<u64>,
    },
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long, conflicts_with_all = ["kmin", "kmax"])]
    k: Option<u64>,
    #[arg(long, requires = "kmax")]
    kmin: Option<u64>,
    #[arg(long)]
    kmax: Option<u64>,
    /// Alias for a fixed bound.
    #[arg(long, conflicts_with = "bound")]
    qmax: Option<u64>,
    #[arg(long, value_parser = parse_bound)]
    bound: Option<Bound>,
    /// Keep covered fields with γ in A..B, e.g. "gamma=3..6".
    #[arg(long, value_parser = parse_filter)]
    filter: Option<RangeInclusive<u32>>,
    #[arg(long)]
    csv: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = default_jobs())]
    jobs: usize,
    /// Checkpoint file; an existing checkpoint is resumed.
    #[arg(long, requires = "out")]
    resume: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CHUNK_SIZE, hide = true)]
    chunk_size: usize,
    #[arg(long, hide = true)]
    stop_after_chunks: Option<usize>,
}

#[derive(Args, Debug)]
struct SarkozyArgs {
    #[arg(long)]
    k: u64,
    #[arg(long)]
    q: u64,
    /// Comma-separated element codes.
    #[arg(long, conflicts_with = "random")]
    set: Option<String>,
    /// Size of a random set.
    #[arg(long, required_unless_present = "set")]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn parse_bound(s: &str) -> Result<Bound, String> {
    if s == "auto" {
        return Ok(Bound::Auto);
    }
    s.parse::<u64>()
        .map(Bound::Fixed)
        .map_err(|_| format!("expected 'auto' or a positive integer, got {s:?}"))
}

fn parse_filter(s: &str) -> Result<RangeInclusive<u32>, String> {
    let bad = || format!("expected gamma=A..B, got {s:?}");
    let range = s.strip_prefix("gamma=").ok_or_else(bad)?;
    let (a, b) = range.split_once("..").ok_or_else(bad)?;
    let a: u32 = a.parse().map_err(|_| bad())?;
    let b: u32 = b.parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

enum Failure {
    Domain(WaringError),
    Io(std::io::Error),
    Usage(String),
}

impl From<WaringError> for Failure {
    fn from(e: WaringError) -> Self {
        Failure::Domain(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<ScanError> for Failure {
    fn from(e: ScanError) -> Self {
        match e {
            ScanError::Domain(e) => Failure::Domain(e),
            ScanError::Io(e) => Failure::Io(e),
        }
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    return 0;
                }
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 1,
                _ => 1,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            let _ = writeln!(err, "{}", Cli::command().render_usage());
            1
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {}: {e}", e.name());
            2
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: IoError: {e}");
            2
        }
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string(value).expect("report serializes");
    writeln!(out, "{text}")?;
    Ok(())
}

#[derive(Serialize)]
struct GammaOut {
    k: u64,
    q: u64,
    coverable: bool,
    gamma: Option<u32>,
}

#[derive(Serialize)]
struct UncoverableOut {
    k: u64,
    fields: Vec<u64>,
}

#[derive(Serialize)]
struct GammaMaxOut {
    k: u64,
    gamma_max: u32,
}

#[derive(Serialize)]
struct Lambda {
    re: f64,
    im: f64,
    abs: f64,
}

#[derive(Serialize)]
struct SpectralOut {
    k: u64,
    q: u64,
    d: u32,
    trivial: u64,
    lambdas: Vec<Lambda>,
    sum_sq: f64,
    n_star: f64,
    bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    bruteforce_match: Option<bool>,
}

#[derive(Serialize)]
struct SarkozyOut {
    k: u64,
    q: u64,
    threshold: f64,
    min_size: u64,
    set_size: usize,
    above_threshold: bool,
    pair: Option<[String; 2]>,
}

#[derive(Serialize)]
struct DecompositionOut {
    ambient: &'static str,
    structure: String,
    k: u64,
    target: String,
    witnesses: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_polys: Option<Vec<String>>,
    row_bound: Option<u32>,
    verified: bool,
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match cmd {
        Command::Gamma { k, q } => {
            let r = gamma(k, q)?;
            emit(
                out,
                &GammaOut {
                    k,
                    q,
                    coverable: r.is_coverable(),
                    gamma: r.gamma(),
                },
            )
        }
        Command::Table(args) => table(args, out),
        Command::Uncoverable { k, bound } => {
            let bound = match bound {
                Bound::Auto => default_uncoverable_bound(k),
                Bound::Fixed(n) => n,
            };
            emit(
                out,
                &UncoverableOut {
                    k,
                    fields: uncoverable_fields(k, bound)?,
                },
            )
        }
        Command::GammaMax { k } => emit(out, &GammaMaxOut { k, gamma_max: gamma_max(k)? }),
        Command::Spectral { k, q, bruteforce } => {
            let ctx = field_of_order(q)?;
            let rep = spectrum(&ctx, k);
            let bruteforce_match = if bruteforce {
                let dense = spectrum_bruteforce(&ctx, k)?;
                Some(multisets_match(&rep.eigenvalue_multiset(), &dense, 1e-6))
            } else {
                None
            };
            emit(
                out,
                &SpectralOut {
                    k,
                    q,
                    d: rep.d,
                    trivial: rep.trivial,
                    lambdas: rep
                        .lambdas
                        .iter()
                        .map(|l| Lambda {
                            re: l.re,
                            im: l.im,
                            abs: l.norm(),
                        })
                        .collect(),
                    sum_sq: rep.sum_sq,
                    n_star: rep.n_star,
                    bound: rep.bound,
                    bruteforce_match,
                },
            )
        }
        Command::Sarkozy(args) => sarkozy(args, out),
        Command::Lemmas { x_max, y_window } => {
            let rep = verify_appendix_lemmas(x_max, y_window)?;
            emit(out, &rep)?;
            if rep.quartic_violations.is_empty() && rep.cubic_violations.is_empty() {
                Ok(())
            } else {
                Err(WaringError::VerificationFailed("inequality violated".into()).into())
            }
        }
        Command::DecomposeField { k, q, y } => {
            let ctx = field_of_order(q)?;
            let y = ctx.parse_elem(&y)?;
            let d = decompose_field(&ctx, y, k)?;
            if !d.verify(&ctx) {
                return Err(WaringError::VerificationFailed("field decomposition".into()).into());
            }
            emit(
                out,
                &DecompositionOut {
                    ambient: "field",
                    structure: format!("F_{q}"),
                    k,
                    target: ctx.format_poly(y),
                    witnesses: d.witnesses.iter().map(|&w| ctx.format_poly(w)).collect(),
                    witness_polys: None,
                    row_bound: None,
                    verified: true,
                },
            )
        }
        Command::DecomposeMatrix { k, q, a, no_row } => {
            let ctx = Arc::new(field_of_order(q)?);
            let n = a.split(';').count();
            let space = MatrixSpace::new(&ctx, n);
            let a = space.parse(&a)?;
            let row = if no_row { None } else { best_matrix_row(k, q) };
            let d = match row {
                Some(row) => decompose_matrix_with_row(&ctx, &a, k, row)?,
                None => decompose_matrix_auto(&ctx, &a, k)?,
            };
            if !d.verify(&space) {
                return Err(WaringError::VerificationFailed("matrix decomposition".into()).into());
            }
            emit(
                out,
                &DecompositionOut {
                    ambient: "matrix",
                    structure: format!("Mat_{n}(F_{q})"),
                    k,
                    target: a.to_string(),
                    witnesses: d.witnesses.iter().map(|w| w.to_string()).collect(),
                    witness_polys: d.witness_polys.as_ref().map(|ps| ps.iter().map(|p| p.to_string()).collect()),
                    row_bound: row.map(|r| r.m),
                    verified: true,
                },
            )
        }
        Command::DecomposeRing { k, ring, alpha, no_row } => {
            let r = RingSpec::parse(&ring)?;
            let alpha = r.parse_elem(&alpha)?;
            let row = if no_row { None } else { best_ring_row(k, r.order() as u128) };
            let d = match row {
                Some(row) => decompose_ring_element_with_row(&r, alpha, k, row)?,
                None => decompose_ring_element(&r, alpha, k)?,
            };
            if !d.verify(&r) {
                return Err(WaringError::VerificationFailed("ring decomposition".into()).into());
            }
            emit(
                out,
                &DecompositionOut {
                    ambient: "ring",
                    structure: r.describe(),
                    k,
                    target: r.format_elem(alpha),
                    witnesses: d.witnesses.iter().map(|&w| r.format_elem(w)).collect(),
                    witness_polys: None,
                    row_bound: row.map(|r| r.n),
                    verified: true,
                },
            )
        }
        Command::Verify { suite, kmin, kmax, qmax } => {
            let (dmin, dmax) = suite.default_ks();
            let kmin = kmin.unwrap_or(dmin);
            let kmax = kmax.unwrap_or(dmax.max(kmin));
            let rep = run_suite(suite, kmin, kmax, qmax)?;
            let text = serde_json::to_string_pretty(&rep).expect("report serializes");
            writeln!(out, "{text}")?;
            if rep.pass {
                Ok(())
            } else {
                let failed: Vec<String> = rep.results.iter().filter(|r| !r.pass).map(|r| r.k.to_string()).collect();
                Err(WaringError::VerificationFailed(format!("mismatch for k = {}", failed.join(", "))).into())
            }
        }
    }
}

fn table(args: TableArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let ks = match (args.k, args.kmin, args.kmax) {
        (Some(k), None, None) => k..=k,
        (None, Some(a), Some(b)) if a <= b => a..=b,
        (None, None, Some(b)) => b..=b,
        (None, Some(a), Some(b)) => return Err(Failure::Usage(format!("--kmin {a} exceeds --kmax {b}"))),
        _ => return Err(Failure::Usage("one of --k or --kmax is required".into())),
    };
    if *ks.start() == 0 {
        return Err(Failure::Usage("--k must be positive".into()));
    }
    let bound = match (args.qmax, args.bound) {
        (Some(q), _) => Bound::Fixed(q),
        (None, Some(b)) => b,
        (None, None) => Bound::Auto,
    };
    if args.jobs == 0 {
        return Err(Failure::Usage("--jobs must be at least 1".into()));
    }
    let job = ScanJob {
        ks,
        bound,
        filter: args.filter,
        format: if args.csv { Format::Csv } else { Format::Json },
        out: args.out,
        jobs: args.jobs,
        checkpoint: args.resume,
        chunk_size: args.chunk_size,
        stop_after_chunks: args.stop_after_chunks,
    };
    run_scan(&job, out)?;
    Ok(())
}

fn sarkozy(args: SarkozyArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let ctx = field_of_order(args.q)?;
    let set: Vec<FqElem> = match (&args.set, args.random) {
        (Some(text), _) => text
            .split(',')
            .map(|s| ctx.parse_elem(s))
            .collect::<waring_core::Result<Vec<_>>>()?,
        (None, Some(n)) => {
            if n > args.q as usize {
                return Err(Failure::Usage(format!("--random {n} exceeds q = {}", args.q)));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let mut codes: Vec<u32> = sample(&mut rng, args.q as usize, n).into_iter().map(|i| i as u32).collect();
            codes.sort_unstable();
            codes.into_iter().map(FqElem).collect()
        }
        (None, None) => return Err(Failure::Usage("one of --set or --random is required".into())),
    };
    let threshold = sarkozy_threshold(args.k, args.q);
    let pair = sarkozy_find_pair(&ctx, args.k, &set).map(|(x, y)| [ctx.format_poly(x), ctx.format_poly(y)]);
    emit(
        out,
        &SarkozyOut {
            k: args.k,
            q: args.q,
            threshold,
            min_size: sarkozy_min_size(args.k, args.q),
            set_size: set.len(),
            above_threshold: set.len() as f64 > threshold,
            pair,
        },
    )
}
