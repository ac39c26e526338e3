use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use wpvol_core::asymptotics::{eval_volume_exact, lambda_intensity, VolumeEvaluator};
use wpvol_core::qpi::{Interval, Rational};
use wpvol_core::recursion::{fill_signatures, FillStats};
use wpvol_core::verify::{self, AsymptoticConfig, SuiteReport};
use wpvol_core::{store, CoeffTable, Convention, Error, Signature};

#[derive(Parser)]
#[command(
    name = "wpvol",
    version,
    about = "Weil-Petersson volume tables and large-genus checks"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct Global {
    /// Cache file (defaults to $WPVOL_CACHE; no cache if neither is set)
    #[arg(long, global = true, env = "WPVOL_CACHE")]
    cache: Option<PathBuf>,
    /// Neither read nor write the cache
    #[arg(long, global = true)]
    no_cache: bool,
    /// Working precision in bits
    #[arg(long, global = true, default_value_t = 128, value_parser = clap::value_parser!(u32).range(64..))]
    precision: u32,
    #[arg(long, global = true, value_enum, default_value_t = Conv::Paper)]
    convention: Conv,
    /// Worker threads (defaults to all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the main output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Conv {
    Paper,
    Half,
}

impl From<Conv> for Convention {
    fn from(c: Conv) -> Self {
        match c {
            Conv::Paper => Convention::Paper,
            Conv::Half => Convention::Half,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Fill every coefficient with 2g-2+n <= chi-max and n <= n-max
    Fill {
        #[arg(long)]
        chi_max: u32,
        #[arg(long, default_value_t = 5)]
        n_max: u32,
    },
    /// Evaluate V_(g,n)(x)
    Eval {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: u32,
        /// Comma-separated lengths (integers, decimals or p/q); zeros if omitted
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x: Vec<String>,
    },
    /// Residual table as CSV
    Residuals {
        #[arg(long, default_value_t = 2)]
        g_min: u32,
        #[arg(long, default_value_t = 8)]
        g_max: u32,
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Comma-separated per-coordinate grid
        #[arg(long, value_delimiter = ',', default_values_t = verify::GRID.to_vec())]
        grid: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        order: u32,
        /// Taylor threshold (default 2N+2)
        #[arg(long)]
        a: Option<u32>,
    },
    /// Run check suites; exit code 0 iff all pass
    Check(CheckArgs),
    /// Poisson intensity of closed geodesics with length in [a, b]
    Lambda {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
    },
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    /// Table range for the exact and ratio suites
    #[arg(long, default_value_t = 12)]
    chi_max: u32,
    #[arg(long, default_value_t = 5)]
    n_max: u32,
    /// Genus range for the asymptotic suites
    #[arg(long, default_value_t = 2)]
    g_min: u32,
    #[arg(long, default_value_t = 8)]
    g_max: u32,
    #[arg(long, default_value_t = 1)]
    order: u32,
    #[arg(long)]
    a: Option<u32>,
    /// Largest genus of the n=1, x=2 first-order gap sequence (starts at 4)
    #[arg(long, default_value_t = 12)]
    gap_g_max: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    All,
    Exact,
    Ratios,
    Sequence,
    Identities,
    Residuals,
    Derivative,
    Cuts,
}

struct Session {
    table: CoeffTable,
    cache: Option<PathBuf>,
}

impl Session {
    fn open(g: &Global) -> Result<Self, Error> {
        let conv: Convention = g.convention.into();
        let cache = if g.no_cache { None } else { g.cache.clone() };
        let table = match &cache {
            Some(p) if p.exists() => store::load(p, conv)?,
            _ => CoeffTable::new(conv),
        };
        Ok(Self { table, cache })
    }

    fn ensure(&mut self, targets: &[Signature]) -> Result<FillStats, Error> {
        let stats = fill_signatures(&mut self.table, targets);
        if stats.computed > 0 {
            if let Some(p) = &self.cache {
                store::save(&self.table, p)?;
            }
        }
        Ok(stats)
    }
}

fn emit(g: &Global, text: &str) -> Result<(), Error> {
    match &g.out {
        Some(p) => Ok(std::fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn range_targets(chi_max: u32, n_max: u32) -> Vec<Signature> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        for g in 0..=chi_max {
            if let Some(s) = Signature::checked(g as i64, n as i64) {
                if s.euler_abs() <= chi_max {
                    out.push(s);
                }
            }
        }
    }
    out
}

/// Exact value of a decimal (`-1.25`), fraction (`3/4`) or integer.
fn parse_exact(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let q: BigInt = q.trim().parse().ok()?;
        if q == BigInt::from(0) {
            return None;
        }
        return Some(Rational::new(p.trim().parse().ok()?, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty()
        || !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let digits: BigInt = format!("0{int}{frac}").parse().ok()?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let r = Rational::new(digits, den);
    Some(if neg { -r } else { r })
}

fn cmd_fill(g: &Global, chi_max: u32, n_max: u32) -> Result<(), Error> {
    let mut s = Session::open(g)?;
    let start = Instant::now();
    let stats = s.ensure(&range_targets(chi_max, n_max))?;
    let mut text = format!(
        "signatures: {}\ncomputed: {}\nreused: {}\nentries: {}\nelapsed: {:.3}s\n",
        stats.signatures,
        stats.computed,
        stats.reused,
        s.table.len(),
        start.elapsed().as_secs_f64()
    );
    match &s.cache {
        Some(p) if stats.computed > 0 => {
            text.push_str(&format!("cache: written {}\n", p.display()))
        }
        Some(p) => text.push_str(&format!("cache: unchanged {}\n", p.display())),
        None => text.push_str("cache: none\n"),
    }
    emit(g, &text)
}

fn cmd_eval(g: &Global, genus: u32, n: u32, x: &[String]) -> Result<(), Error> {
    let sig = Signature::new(genus, n)?;
    let x: Vec<String> = if x.is_empty() {
        vec!["0".into(); n as usize]
    } else {
        x.to_vec()
    };
    if x.len() != n as usize {
        return Err(Error::ArityMismatch {
            expected: n as usize,
            got: x.len(),
        });
    }
    let mut s = Session::open(g)?;
    s.ensure(&[sig])?;
    let prec = g.precision;
    let digits = (prec as f64 * std::f64::consts::LOG10_2) as usize - 4;
    let exact: Option<Vec<Rational>> = x.iter().map(|v| parse_exact(v)).collect();
    let ev = VolumeEvaluator::new(sig, &s.table, prec)?;
    let label = format!("V_{sig}({})", x.join(","));
    let mut text = String::new();
    let value = match exact {
        Some(xs) => {
            let v = eval_volume_exact(sig, &xs, &s.table)?;
            text.push_str(&format!("{label} = {v}\n"));
            v.enclose(prec + 16)
        }
        None => {
            let xs = x
                .iter()
                .map(|v| {
                    v.parse::<f64>()
                        .ok()
                        .filter(|f| f.is_finite())
                        .map(Interval::from_f64)
                        .ok_or_else(|| Error::InvalidArgument(format!("bad length `{v}`")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            ev.eval(&xs)?
        }
    };
    let ratio = value.div(ev.vgn(), prec + 16);
    text.push_str(&format!(
        "{label} ~ {} (enclosure width {})\n",
        value.to_sci_string(digits),
        value.width().to_sci_string(3)
    ));
    text.push_str(&format!("{label}/V ~ {}\n", ratio.to_sci_string(digits)));
    emit(g, &text)
}

#[allow(clippy::too_many_arguments)]
fn cmd_residuals(
    g: &Global,
    g_min: u32,
    g_max: u32,
    n: u32,
    grid: &[f64],
    order: u32,
    a: Option<u32>,
) -> Result<(), Error> {
    if g_min > g_max {
        return Err(Error::InvalidArgument("empty genus range".into()));
    }
    if grid.is_empty() || grid.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::InvalidArgument(
            "grid needs non-negative finite values".into(),
        ));
    }
    let cfg = AsymptoticConfig {
        ns: vec![n],
        g_min,
        g_max,
        order,
        threshold: a.unwrap_or(2 * order + 2),
        prec: g.precision,
    };
    let mut s = Session::open(g)?;
    s.ensure(&verify::residual_signatures(&cfg))?;
    let pts = verify::grid_points(n as usize, grid);
    let mut rows = Vec::new();
    for genus in g_min..=g_max {
        let sig = Signature::new(genus, n)?;
        rows.extend(verify::residual_rows(
            sig,
            &s.table,
            order,
            cfg.threshold,
            &pts,
            g.precision,
        )?);
    }
    emit(g, &verify::residuals_csv(&rows))
}

fn cmd_check(g: &Global, c: &CheckArgs) -> Result<bool, Error> {
    let want = |s: Suite| c.suite == Suite::All || c.suite == s;
    let prec = g.precision;
    let cfg = AsymptoticConfig {
        ns: vec![1, 2],
        g_min: c.g_min,
        g_max: c.g_max,
        order: c.order,
        threshold: c.a.unwrap_or(2 * c.order + 2),
        prec,
    };
    let mut s = Session::open(g)?;
    let mut targets = Vec::new();
    if want(Suite::Exact) || want(Suite::Ratios) || want(Suite::Identities) {
        targets.extend(range_targets(c.chi_max, c.n_max));
    }
    if want(Suite::Residuals) {
        targets.extend(verify::residual_signatures(&cfg));
        for genus in 4..=c.gap_g_max {
            targets.push(Signature::new(genus, 1)?);
        }
    }
    if want(Suite::Derivative) {
        targets.extend(range_targets(2 * c.g_max, 2));
    }
    if want(Suite::Cuts) {
        targets.extend(verify::cut_signatures(&[1, 2], c.g_max));
    }
    let stats = s.ensure(&targets)?;
    eprintln!(
        "table ready: {} signatures, {} computed, {} reused",
        stats.signatures, stats.computed, stats.reused
    );
    let t = &s.table;
    let mut reports: Vec<SuiteReport> = Vec::new();
    if want(Suite::Exact) {
        reports.push(verify::exact_suite(t)?);
    }
    if want(Suite::Ratios) {
        reports.push(verify::ratio_suite(t, 4096)?);
    }
    if want(Suite::Sequence) {
        reports.push(verify::sequence_suite(30)?);
    }
    if want(Suite::Identities) {
        reports.push(verify::identity_suite(t, c.seed, 100)?);
    }
    if want(Suite::Residuals) {
        let mut rep = verify::residual_suite(t, &cfg)?;
        if c.gap_g_max > 4 {
            let (vals, dec) = verify::gap_sequence(1, &[2.0], 4..=c.gap_g_max, t, prec)?;
            let detail = vals
                .iter()
                .map(|(genus, v)| format!("g={genus}: {:.4e}", v.mid_f64()))
                .collect::<Vec<_>>()
                .join(", ");
            rep.lines.push(verify::CheckLine {
                label: "n=1 x=2 first-order gap decreasing".into(),
                pass: dec,
                detail,
            });
        }
        reports.push(rep);
    }
    if want(Suite::Derivative) {
        reports.push(verify::derivative_suite(
            t,
            &[1, 2],
            &[1, 2],
            c.g_min,
            c.g_max,
            prec,
        )?);
    }
    if want(Suite::Cuts) {
        reports.push(verify::cut_suite(t, &[1, 2], 2, c.g_min, c.g_max, prec)?);
    }
    let mut text = String::new();
    for r in &reports {
        text.push_str(&r.render());
    }
    let ok = reports.iter().all(|r| r.passed());
    for r in &reports {
        text.push_str(&format!(
            "suite {}: {}\n",
            r.name,
            if r.passed() { "pass" } else { "fail" }
        ));
    }
    emit(g, &text)?;
    Ok(ok)
}

fn cmd_lambda(g: &Global, a: f64, b: f64) -> Result<(), Error> {
    let v = lambda_intensity(a, b, g.precision)?;
    let digits = (g.precision as f64 * std::f64::consts::LOG10_2) as usize - 4;
    let text = format!(
        "lambda({a}, {b}) = {}\nerror bound: {}\n",
        v.to_sci_string(digits),
        v.width().to_sci_string(3)
    );
    emit(g, &text)
}

fn run(cli: Cli) -> Result<bool, Error> {
    if let Some(k) = cli.global.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    let g = &cli.global;
    match &cli.cmd {
        Command::Fill { chi_max, n_max } => cmd_fill(g, *chi_max, *n_max)?,
        Command::Eval { g: genus, n, x } => cmd_eval(g, *genus, *n, x)?,
        Command::Residuals {
            g_min,
            g_max,
            n,
            grid,
            order,
            a,
        } => cmd_residuals(g, *g_min, *g_max, *n, grid, *order, *a)?,
        Command::Check(c) => return cmd_check(g, c),
        Command::Lambda { a, b } => cmd_lambda(g, *a, *b)?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
