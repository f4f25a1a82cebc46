//! Command-line front end. The binary only forwards `std::env::args` to [`run`].
//!
//! Settings come from defaults, then an optional `--config` file of
//! `key = value` lines (`#` starts a comment), then flags. Exit codes:
//! 0 success, 1 invariant failure, 2 configuration or parse error,
//! 3 numerical failure.

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand};

use crate::algebras::separation_table;
use crate::error::{Error, Result};
use crate::io::{format_float, CsvTable};
use crate::kernels::{kernel_pt, kernel_pt_oracle, HalfPlanePoint};
use crate::projections::generic_position_certificate;
use crate::quadrature::{HalfLineRule, PlaneRule};
use crate::spectral::{gamma_on_grid, spectral_table, CompactifiedGrid, MAX_N};
use crate::symbols::VerticalSymbol;
use crate::transforms::{build_image_element, HalfLineProfile};
use crate::verify::{checks_table, run_suite, separation_runs, Suite, SuiteParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Environment variable capping the worker-thread count.
pub const THREADS_ENV: &str = "POLYBERGMAN_THREADS";

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Pole { .. } | Error::NonFinite { .. } | Error::NoConvergence { .. } => EXIT_NUMERICAL,
        Error::Certification { .. } | Error::NotSeparable { .. } => EXIT_INVARIANT,
        _ => EXIT_CONFIG,
    }
}

/// `t^k e^{-rt}`, written `texp:k:r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSpec {
    pub power: u32,
    pub rate: f64,
}

impl ProfileSpec {
    pub fn profile(&self) -> Result<HalfLineProfile> {
        HalfLineProfile::power_exp(self.power, self.rate)
    }
}

impl fmt::Display for ProfileSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "texp:{}:{}", self.power, self.rate)
    }
}

impl FromStr for ProfileSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("profile must be texp:k:rate, got {s:?}"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        if parts.len() != 3 || parts[0] != "texp" {
            return Err(bad());
        }
        let power = parts[1].parse().map_err(|_| bad())?;
        let rate: f64 = parts[2].parse().map_err(|_| bad())?;
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(bad());
        }
        Ok(Self { power, rate })
    }
}

/// Rectangular grid of half-plane points, written `x0:x1:nx:y0:y1:ny`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl PointGrid {
    pub fn points(&self) -> Vec<HalfPlanePoint> {
        self.ys
            .iter()
            .flat_map(|&y| self.xs.iter().map(move |&x| HalfPlanePoint { x, y }))
            .collect()
    }
}

fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![a];
    }
    let h = (b - a) / (count - 1) as f64;
    (0..count).map(|i| if i + 1 == count { b } else { a + i as f64 * h }).collect()
}

impl FromStr for PointGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("zgrid must be x0:x1:nx:y0:y1:ny with y0, y1 > 0, got {s:?}"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        if parts.len() != 6 {
            return Err(bad());
        }
        let num = |i: usize| parts[i].parse::<f64>().map_err(|_| bad());
        let count = |i: usize| match parts[i].parse::<usize>() {
            Ok(c) if c >= 1 => Ok(c),
            _ => Err(bad()),
        };
        let (x0, x1, y0, y1) = (num(0)?, num(1)?, num(3)?, num(4)?);
        if !(x0.is_finite() && x1.is_finite() && y0 > 0.0 && y1 > 0.0 && y1.is_finite()) {
            return Err(bad());
        }
        Ok(Self {
            xs: linspace(x0, x1, count(2)?),
            ys: linspace(y0, y1, count(5)?),
        })
    }
}

/// Fully resolved settings of one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub n: usize,
    pub alpha: f64,
    pub symbol: VerticalSymbol,
    pub grid: CompactifiedGrid,
    /// Gauss–Laguerre order for the kernel oracle; adaptive quadrature when unset.
    pub nodes: Option<usize>,
    /// Relative tolerance for closed form vs oracle in `kernel`.
    pub tol: f64,
    pub out: Option<PathBuf>,
    pub suite: Suite,
    pub z: Vec<HalfPlanePoint>,
    pub w: Vec<HalfPlanePoint>,
    pub profile: ProfileSpec,
    pub zgrid: PointGrid,
    pub seed: u64,
    pub plane: PlaneRule,
}

impl Default for RunConfig {
    fn default() -> Self {
        let i = HalfPlanePoint { x: 0.0, y: 1.0 };
        Self {
            n: 2,
            alpha: 2.0,
            symbol: VerticalSymbol::indicator(0.0, 1.0).expect("valid interval"),
            grid: "log:0.01:100:50".parse().expect("valid grid"),
            nodes: None,
            tol: 1e-6,
            out: None,
            suite: Suite::All,
            z: vec![i],
            w: vec![i],
            profile: ProfileSpec { power: 1, rate: 1.0 },
            zgrid: "-2:2:5:0.5:2:4".parse().expect("valid grid"),
            seed: 7,
            plane: PlaneRule::acceptance(),
        }
    }
}

/// Keys accepted in config files (flags use the same names).
pub const CONFIG_KEYS: [&str; 13] = [
    "n", "alpha", "symbol", "grid", "nodes", "tol", "out", "suite", "z", "w", "profile", "zgrid", "seed",
];

fn detail(e: Error) -> String {
    match e {
        Error::Parse(m) => m,
        other => other.to_string(),
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("invalid value {value:?} for {key}")))
}

fn parse_points(value: &str) -> Result<Vec<HalfPlanePoint>> {
    let pts = value
        .split(';')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect::<Result<Vec<HalfPlanePoint>>>()?;
    if pts.is_empty() {
        return Err(Error::Parse("expected at least one point".into()));
    }
    Ok(pts)
}

impl RunConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "n" => {
                let n: usize = parse_value(key, value)?;
                if n == 0 || n > MAX_N {
                    return Err(Error::Parse(format!("n must lie in 1..={MAX_N}, got {n}")));
                }
                self.n = n;
            }
            "alpha" => {
                let a: f64 = parse_value(key, value)?;
                if !(a > 0.0 && a.is_finite()) {
                    return Err(Error::Parse(format!("alpha must be positive, got {value}")));
                }
                self.alpha = a;
            }
            "symbol" => self.symbol = value.parse()?,
            "grid" => self.grid = value.parse()?,
            "nodes" => {
                let m: usize = parse_value(key, value)?;
                if m == 0 {
                    return Err(Error::Parse("nodes must be positive".into()));
                }
                self.nodes = Some(m);
            }
            "tol" => {
                let t: f64 = parse_value(key, value)?;
                if !(t > 0.0) {
                    return Err(Error::Parse(format!("tol must be positive, got {value}")));
                }
                self.tol = t;
            }
            "out" => self.out = Some(PathBuf::from(value)),
            "suite" => self.suite = value.parse()?,
            "z" => self.z = parse_points(value)?,
            "w" => self.w = parse_points(value)?,
            "profile" => self.profile = value.parse()?,
            "zgrid" => self.zgrid = value.parse()?,
            "seed" => self.seed = parse_value(key, value)?,
            _ => return Err(Error::Parse(format!("unknown setting {key:?}"))),
        }
        Ok(())
    }

    /// Applies every line of a config file body.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", i + 1)))?;
            self.set(key.trim(), value)
                .map_err(|e| Error::Parse(format!("line {}: {}", i + 1, detail(e))))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.apply_text(&text)
    }

    fn suite_params(&self) -> SuiteParams {
        SuiteParams {
            n: self.n,
            alpha: self.alpha,
            seed: self.seed,
            plane: self.plane,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "polybergman", version, about = "Spectral functions, kernels and transforms of vertical Toeplitz operators on poly-Bergman spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// File of `key = value` settings; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Polyanalyticity order (1..=16).
    #[arg(long, global = true)]
    pub n: Option<String>,
    /// Width parameter of a_0 = indicator of [0, alpha/2).
    #[arg(long, global = true)]
    pub alpha: Option<String>,
    /// `indicator:c:d`, `indicator:c:inf` or `const:v`.
    #[arg(long, global = true)]
    pub symbol: Option<String>,
    /// `log:a:b:count` or `lin:a:b:count`, optionally with `:ends`.
    #[arg(long, global = true)]
    pub grid: Option<String>,
    /// Gauss–Laguerre nodes for the kernel oracle.
    #[arg(long, global = true)]
    pub nodes: Option<String>,
    /// Relative tolerance for closed form vs oracle.
    #[arg(long, global = true)]
    pub tol: Option<String>,
    /// Output CSV path; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<String>,
    /// specfun, spectral, projections, kernels, algebras, separation, transforms or all.
    #[arg(long, global = true)]
    pub suite: Option<String>,
    /// Points `z` for `kernel`, separated by `;` (`i`, `1+2i` or `x,y`).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// Points `w` for `kernel`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub w: Option<String>,
    /// Profile `a` for `transform`, `texp:k:rate`.
    #[arg(long, global = true)]
    pub profile: Option<String>,
    /// Evaluation grid for `transform`, `x0:x1:nx:y0:y1:ny`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub zgrid: Option<String>,
    /// Seed for random words and states.
    #[arg(long, global = true)]
    pub seed: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Spectral function of the symbol on the grid.
    Gamma,
    /// Kernel of P_T: closed form next to the quadrature oracle.
    Kernel,
    /// Image element h = R^*(a M_n) on a grid of points.
    Transform,
    /// Run an invariant suite.
    Verify,
    /// Generic-position certificate on the grid.
    Certify,
}

impl Cli {
    fn flag_values(&self) -> Vec<(&'static str, &str)> {
        let flags = [
            ("n", &self.n),
            ("alpha", &self.alpha),
            ("symbol", &self.symbol),
            ("grid", &self.grid),
            ("nodes", &self.nodes),
            ("tol", &self.tol),
            ("out", &self.out),
            ("suite", &self.suite),
            ("z", &self.z),
            ("w", &self.w),
            ("profile", &self.profile),
            ("zgrid", &self.zgrid),
            ("seed", &self.seed),
        ];
        flags
            .into_iter()
            .filter_map(|(k, v)| v.as_deref().map(|v| (k, v)))
            .collect()
    }

    /// Defaults, then the config file, then flags.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(path).map_err(|e| match e {
                Error::Io(m) => Error::Parse(m),
                other => other,
            })?;
        }
        for (k, v) in self.flag_values() {
            cfg.set(k, v).map_err(|e| Error::Parse(format!("--{k}: {}", detail(e))))?;
        }
        Ok(cfg)
    }
}

/// What a command produced: a table plus a status code.
#[derive(Debug)]
pub struct Outcome {
    pub table: CsvTable,
    pub code: i32,
    /// Human-readable lines for stderr.
    pub messages: Vec<String>,
}

pub fn cmd_gamma(cfg: &RunConfig) -> Result<Outcome> {
    let rows = gamma_on_grid(cfg.n, &cfg.symbol, &cfg.grid)?;
    Ok(Outcome {
        table: spectral_table(&rows)?,
        code: EXIT_OK,
        messages: vec![format!("gamma for {} with n = {} on {} points", cfg.symbol, cfg.n, rows.len())],
    })
}

pub fn cmd_kernel(cfg: &RunConfig) -> Result<Outcome> {
    let rule = match cfg.nodes {
        Some(m) => HalfLineRule::gauss_laguerre(m)?,
        None => HalfLineRule::default_adaptive().clone(),
    };
    let mut table = CsvTable::new([
        "z_re", "z_im", "w_re", "w_im", "j", "k", "closed_re", "closed_im", "oracle_re", "oracle_im", "abs_err",
        "rel_err",
    ]);
    let mut worst: f64 = 0.0;
    for &z in &cfg.z {
        for &w in &cfg.w {
            let closed = kernel_pt(cfg.n, z, w)?;
            let oracle = kernel_pt_oracle(cfg.n, z, w, &rule)?;
            for j in 1..=cfg.n {
                for k in 1..=cfg.n {
                    let (c, o) = (closed.entry(j, k), oracle.entry(j, k));
                    let abs = (c - o).norm();
                    let rel = if o.norm() > 0.0 { abs / o.norm() } else { abs };
                    worst = worst.max(rel);
                    table.push(vec![
                        format_float(z.x),
                        format_float(z.y),
                        format_float(w.x),
                        format_float(w.y),
                        j.to_string(),
                        k.to_string(),
                        format_float(c.re),
                        format_float(c.im),
                        format_float(o.re),
                        format_float(o.im),
                        format_float(abs),
                        format_float(rel),
                    ])?;
                }
            }
        }
    }
    let code = if worst <= cfg.tol { EXIT_OK } else { EXIT_INVARIANT };
    Ok(Outcome {
        table,
        code,
        messages: vec![format!("largest relative deviation from the oracle: {worst:e} (tolerance {:e})", cfg.tol)],
    })
}

pub fn cmd_transform(cfg: &RunConfig) -> Result<Outcome> {
    let a = cfg.profile.profile()?;
    let mut table = CsvTable::new(["x", "y", "component", "re", "im"]);
    let points = cfg.zgrid.points();
    for &z in &points {
        let h = build_image_element(cfg.n, &a, z)?;
        for (k, v) in h.iter().enumerate() {
            table.push(vec![
                format_float(z.x),
                format_float(z.y),
                (k + 1).to_string(),
                format_float(v.re),
                format_float(v.im),
            ])?;
        }
    }
    Ok(Outcome {
        table,
        code: EXIT_OK,
        messages: vec![format!("h for a = {} at {} points", cfg.profile, points.len())],
    })
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Outcome> {
    let params = cfg.suite_params();
    let checks = run_suite(cfg.suite, &params)?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    let mut messages: Vec<String> = checks.iter().map(ToString::to_string).collect();
    messages.push(format!("{} checks, {failed} failed", checks.len()));
    let table = if cfg.suite == Suite::Separation {
        separation_table(&separation_runs(&params, 50)?)
    } else {
        checks_table(&checks)
    };
    Ok(Outcome {
        table,
        code: if failed == 0 { EXIT_OK } else { EXIT_INVARIANT },
        messages,
    })
}

pub fn cmd_certify(cfg: &RunConfig) -> Result<Outcome> {
    let report = generic_position_certificate(cfg.n, &cfg.grid)?;
    Ok(Outcome {
        table: report.to_table(),
        code: EXIT_OK,
        messages: vec![format!(
            "generic position holds on {} points: min log margin {} at x = {}, k = {}",
            cfg.grid.interior().len(),
            report.min_ln_margin,
            report.argmin.0,
            report.argmin.1
        )],
    })
}

pub fn execute(command: Command, cfg: &RunConfig) -> Result<Outcome> {
    match command {
        Command::Gamma => cmd_gamma(cfg),
        Command::Kernel => cmd_kernel(cfg),
        Command::Transform => cmd_transform(cfg),
        Command::Verify => cmd_verify(cfg),
        Command::Certify => cmd_certify(cfg),
    }
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = match value.trim().parse() {
        Ok(t) if t >= 1 => t,
        _ => return Err(Error::Parse(format!("{THREADS_ENV} must be a positive integer, got {value:?}"))),
    };
    // a pool may already exist when called twice in one process; keep it
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

/// Parses arguments, runs the command, writes output, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return EXIT_CONFIG;
    }
    let cfg = match cli.resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let outcome = match execute(cli.command, &cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    for m in &outcome.messages {
        eprintln!("{m}");
    }
    let written = match &cfg.out {
        Some(path) => outcome.table.write_atomic(path),
        None => {
            print!("{}", outcome.table.to_string_lossy());
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_CONFIG;
    }
    outcome.code
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_text_and_overrides() {
        let mut cfg = RunConfig::default();
        cfg.apply_text("# comment\nn = 4\n\nalpha=3 # trailing\nsymbol = const:2\nz = i; 1+2i\n").unwrap();
        assert_eq!(cfg.n, 4);
        assert_eq!(cfg.alpha, 3.0);
        assert_eq!(cfg.symbol.to_string(), "const:2");
        assert_eq!(cfg.z.len(), 2);
        assert!(cfg.apply_text("n 4").is_err());
        assert!(cfg.apply_text("bogus = 1").is_err());
        assert!(cfg.apply_text("n = 17").is_err());
        assert!(cfg.apply_text("w = 1-1i").is_err());
    }

    #[test]
    fn grids_and_profiles() {
        let g: PointGrid = "-1:1:3:0.5:1:2".parse().unwrap();
        assert_eq!(g.xs, vec![-1.0, 0.0, 1.0]);
        assert_eq!(g.points().len(), 6);
        assert!("0:1:2:0:1:2".parse::<PointGrid>().is_err());
        let p: ProfileSpec = "texp:2:1.5".parse().unwrap();
        assert_eq!(p.to_string(), "texp:2:1.5");
        assert!("texp:2:0".parse::<ProfileSpec>().is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::NoConvergence { estimate: 1.0 }), EXIT_NUMERICAL);
        assert_eq!(exit_code(&Error::Parse("x".into())), EXIT_CONFIG);
        assert_eq!(
            exit_code(&Error::Certification { x: 1.0, k: 1, reason: String::new() }),
            EXIT_INVARIANT
        );
    }
}
