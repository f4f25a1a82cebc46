//! Spectral functions `γ^{n,a}(x) = ∫₀^∞ a(y/2x) N_n(y) N_n(y)^t dy` of
//! Toeplitz operators with vertical symbols.
//!
//! Indicator and constant symbols reduce to incomplete integrals of
//! `ℓ_j ℓ_k`, which are `e^{-y}` times a polynomial. Those are evaluated with
//! fixed Gauss rules that are exact for such integrands (up to rounding)
//! rather than through the monomial expansion, whose alternating integer
//! coefficients cancel catastrophically once `n` passes about 8. General
//! symbols fall back on adaptive quadrature.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::io::{format_float, CsvTable};
use crate::quadrature::{integrate_interval, integrate_tail, GaussLaguerre, GaussLegendre, HalfLineRule};
use crate::specfun::laguerre_ell_vec;
use crate::symbols::{SymbolKind, VerticalSymbol};

/// Largest supported matrix size.
pub const MAX_N: usize = 16;

/// A point of the compactified half-line `[0, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    Zero,
    Finite(f64),
    Infinity,
}

impl Point {
    pub fn is_endpoint(&self) -> bool {
        !matches!(self, Point::Finite(_))
    }

    /// Numeric value, with `Infinity` mapped to `f64::INFINITY`.
    pub fn value(&self) -> f64 {
        match *self {
            Point::Zero => 0.0,
            Point::Finite(x) => x,
            Point::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Zero => f.write_str("0"),
            Point::Finite(x) => f.write_str(&format_float(*x)),
            Point::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Point {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "+inf" => Ok(Point::Infinity),
            t => {
                let x: f64 = t.parse().map_err(|_| Error::Parse(format!("not a point: {t:?}")))?;
                if x == 0.0 {
                    Ok(Point::Zero)
                } else if x > 0.0 && x.is_finite() {
                    Ok(Point::Finite(x))
                } else if x == f64::INFINITY {
                    Ok(Point::Infinity)
                } else {
                    Err(Error::Parse(format!("point must lie in [0, inf], got {t}")))
                }
            }
        }
    }
}

/// Sample points of `[0, ∞]`: a strictly increasing positive interior plus
/// optional endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct CompactifiedGrid {
    interior: Vec<f64>,
    includes_zero: bool,
    includes_infinity: bool,
}

impl CompactifiedGrid {
    pub fn new(interior: Vec<f64>, includes_zero: bool, includes_infinity: bool) -> Result<Self> {
        if interior.is_empty() {
            return Err(Error::InvalidParameter("grid interior must be nonempty".into()));
        }
        if interior.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(Error::InvalidParameter(
                "grid interior points must be positive and finite".into(),
            ));
        }
        if interior.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("grid interior must be strictly increasing".into()));
        }
        Ok(Self {
            interior,
            includes_zero,
            includes_infinity,
        })
    }

    /// `count` points spaced geometrically on `[a, b]`.
    pub fn log(a: f64, b: f64, count: usize) -> Result<Self> {
        let ok = a > 0.0 && a.is_finite() && b.is_finite() && (b > a || count == 1 && b == a);
        if !ok || count == 0 {
            return Err(Error::InvalidParameter(format!("bad log grid {a}:{b}:{count}")));
        }
        if count == 1 {
            return Self::new(vec![a], false, false);
        }
        let r = (b / a).ln() / (count - 1) as f64;
        let mut pts: Vec<f64> = (0..count).map(|i| a * (i as f64 * r).exp()).collect();
        pts[count - 1] = b;
        Self::new(pts, false, false)
    }

    /// `count` equally spaced points on `[a, b]`.
    pub fn linear(a: f64, b: f64, count: usize) -> Result<Self> {
        if !(a > 0.0 && b > a && b.is_finite()) || count < 2 {
            return Err(Error::InvalidParameter(format!("bad linear grid {a}:{b}:{count}")));
        }
        let h = (b - a) / (count - 1) as f64;
        let pts = (0..count).map(|i| a + i as f64 * h).collect();
        Self::new(pts, false, false)
    }

    pub fn with_endpoints(mut self) -> Self {
        self.includes_zero = true;
        self.includes_infinity = true;
        self
    }

    pub fn interior(&self) -> &[f64] {
        &self.interior
    }

    pub fn includes_zero(&self) -> bool {
        self.includes_zero
    }

    pub fn includes_infinity(&self) -> bool {
        self.includes_infinity
    }

    /// All points in increasing order, endpoints included when flagged.
    pub fn points(&self) -> Vec<Point> {
        let mut pts = Vec::with_capacity(self.interior.len() + 2);
        if self.includes_zero {
            pts.push(Point::Zero);
        }
        pts.extend(self.interior.iter().map(|&x| Point::Finite(x)));
        if self.includes_infinity {
            pts.push(Point::Infinity);
        }
        pts
    }

    pub fn len(&self) -> usize {
        self.interior.len() + self.includes_zero as usize + self.includes_infinity as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Parses `log:a:b:count` or `lin:a:b:count`; a trailing `:ends` adds both endpoints.
impl FromStr for CompactifiedGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let bad = || Error::Parse(format!("grid must be log:a:b:count or lin:a:b:count, got {s:?}"));
        if parts.len() != 4 && !(parts.len() == 5 && parts[4] == "ends") {
            return Err(bad());
        }
        let a: f64 = parts[1].parse().map_err(|_| bad())?;
        let b: f64 = parts[2].parse().map_err(|_| bad())?;
        let count: usize = parts[3].parse().map_err(|_| bad())?;
        let grid = match parts[0] {
            "log" => Self::log(a, b, count)?,
            "lin" => Self::linear(a, b, count)?,
            _ => return Err(bad()),
        };
        Ok(if parts.len() == 5 { grid.with_endpoints() } else { grid })
    }
}

/// `γ^{n,a}` at one point of `[0, ∞]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMatrix {
    pub x: Point,
    pub entries: DMatrix<f64>,
}

impl SpectralMatrix {
    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    /// Entry `(j, k)`, 1-based.
    pub fn entry(&self, j: usize, k: usize) -> f64 {
        self.entries[(j - 1, k - 1)]
    }

    pub fn symmetry_defect(&self) -> f64 {
        (&self.entries - self.entries.transpose()).norm()
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::InvalidParameter(format!("n must be in 1..={MAX_N}, got {n}")));
    }
    Ok(())
}

fn check_x(x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain {
            function: "spectral function",
            requirement: "0 < x < inf",
            value: x.to_string(),
        });
    }
    Ok(())
}

fn outer_accumulate(m: &mut DMatrix<f64>, ell: &[f64], w: f64) {
    let n = m.nrows();
    for j in 0..n {
        let wj = w * ell[j];
        for k in j..n {
            m[(j, k)] += wj * ell[k];
        }
    }
}

fn symmetrize_upper(mut m: DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    for j in 0..n {
        for k in 0..j {
            m[(j, k)] = m[(k, j)];
        }
    }
    m
}

fn tail_rule() -> &'static GaussLaguerre {
    static RULE: OnceLock<GaussLaguerre> = OnceLock::new();
    RULE.get_or_init(|| GaussLaguerre::new(20).expect("20 nodes is in range"))
}

fn head_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(24).expect("24 nodes is valid"))
}

/// Windows shorter than this are integrated directly by Gauss–Legendre.
const HEAD_LIMIT: f64 = 1.0;

/// `∫_s^∞ N_n N_n^t dy`. After the shift `y = s + t` the integrand is
/// `e^{-s} e^{-t}` times a polynomial of degree `≤ 2n − 2` in `t`, which the
/// 20-node Gauss–Laguerre rule integrates exactly.
pub fn laguerre_tail_matrix(n: usize, s: f64) -> DMatrix<f64> {
    if s <= 0.0 {
        return DMatrix::identity(n, n);
    }
    let mut m = DMatrix::zeros(n, n);
    if s == f64::INFINITY {
        return m;
    }
    let rule = tail_rule();
    for (&t, &w) in rule.nodes().iter().zip(rule.weights()) {
        // weights carry e^{-t}; undo the e^{-t} inside ℓ_j ℓ_k
        let ell = laguerre_ell_vec(n, s + t);
        outer_accumulate(&mut m, &ell, w * t.exp());
    }
    symmetrize_upper(m)
}

fn legendre_window(n: usize, s1: f64, s2: f64) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for (y, w) in head_rule().mapped(s1, s2) {
        outer_accumulate(&mut m, &laguerre_ell_vec(n, y), w);
    }
    symmetrize_upper(m)
}

/// `∫₀^s N_n N_n^t dy`.
pub fn laguerre_head_matrix(n: usize, s: f64) -> DMatrix<f64> {
    if s <= 0.0 {
        DMatrix::zeros(n, n)
    } else if s <= HEAD_LIMIT {
        legendre_window(n, 0.0, s)
    } else {
        DMatrix::identity(n, n) - laguerre_tail_matrix(n, s)
    }
}

/// `∫_{s1}^{s2} N_n N_n^t dy` for `0 ≤ s1 ≤ s2 ≤ ∞`.
pub fn laguerre_window_matrix(n: usize, s1: f64, s2: f64) -> DMatrix<f64> {
    if s2 == f64::INFINITY {
        laguerre_tail_matrix(n, s1)
    } else if s2 - s1 <= HEAD_LIMIT {
        legendre_window(n, s1, s2)
    } else if s1 > HEAD_LIMIT {
        laguerre_tail_matrix(n, s1) - laguerre_tail_matrix(n, s2)
    } else {
        laguerre_head_matrix(n, s2) - laguerre_head_matrix(n, s1)
    }
}

/// Quadrature oracle for the entry `(j, k)` (1-based) of `γ^{n,a}(x)`.
pub fn gamma_entry_quadrature(j: usize, k: usize, a: &VerticalSymbol, x: f64) -> Result<f64> {
    check_x(x)?;
    if j == 0 || k == 0 || j > MAX_N || k > MAX_N {
        return Err(Error::IndexOutOfRange { index: j.max(k), n: MAX_N });
    }
    let f = |y: f64| {
        let ell = laguerre_ell_vec(j.max(k), y);
        a.evaluate(y / (2.0 * x)) * ell[j - 1] * ell[k - 1]
    };
    let mut cuts: Vec<f64> = a.breakpoints().iter().map(|b| 2.0 * x * b).collect();
    let last = cuts.last().copied().unwrap_or(0.0);
    cuts.insert(0, 0.0);
    cuts.push(last + 40.0 + 4.0 * j.max(k) as f64);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += integrate_interval(f, w[0], w[1], 1e-13, 4)?;
    }
    let tail = cuts[cuts.len() - 1];
    total += integrate_tail(f, tail, HalfLineRule::default_laguerre(), 1.0)?;
    Ok(total)
}

/// Scalar spectral function `γ^{(n),a}(x) = ∫₀^∞ a(y/2x) ℓ_{n−1}(y)² dy`, by quadrature.
pub fn gamma_true(n: usize, a: &VerticalSymbol, x: f64) -> Result<f64> {
    check_n(n)?;
    gamma_entry_quadrature(n, n, a, x)
}

/// `γ^{n,a}(x)` by quadrature for every entry.
pub fn gamma_matrix_quadrature(n: usize, a: &VerticalSymbol, x: f64) -> Result<SpectralMatrix> {
    check_n(n)?;
    check_x(x)?;
    let mut m = DMatrix::zeros(n, n);
    for j in 1..=n {
        for k in j..=n {
            let v = gamma_entry_quadrature(j, k, a, x)?;
            m[(j - 1, k - 1)] = v;
            m[(k - 1, j - 1)] = v;
        }
    }
    Ok(SpectralMatrix {
        x: Point::Finite(x),
        entries: m,
    })
}

/// `γ^{n,a}(x)` for `x > 0`; closed form for indicator and constant symbols.
pub fn gamma_matrix(n: usize, a: &VerticalSymbol, x: f64) -> Result<SpectralMatrix> {
    check_n(n)?;
    check_x(x)?;
    match a.kind() {
        SymbolKind::Constant(v) => Ok(SpectralMatrix {
            x: Point::Finite(x),
            entries: DMatrix::identity(n, n) * v,
        }),
        SymbolKind::Indicator { c, d } => {
            let s1 = 2.0 * x * c;
            let s2 = d.map_or(f64::INFINITY, |d| 2.0 * x * d);
            Ok(SpectralMatrix {
                x: Point::Finite(x),
                entries: laguerre_window_matrix(n, s1, s2),
            })
        }
        SymbolKind::General => gamma_matrix_quadrature(n, a, x),
    }
}

/// `γ^{n,a}` at any point of `[0, ∞]`; endpoints use the boundary limits.
pub fn gamma_matrix_at(n: usize, a: &VerticalSymbol, x: Point) -> Result<SpectralMatrix> {
    check_n(n)?;
    let (at_zero, at_infinity) = boundary_limits(n, a)?;
    match x {
        Point::Zero => Ok(SpectralMatrix { x, entries: at_zero }),
        Point::Infinity => Ok(SpectralMatrix {
            x,
            entries: at_infinity,
        }),
        Point::Finite(v) => gamma_matrix(n, a, v),
    }
}

/// `(lim_{x→0} γ^{n,a}, lim_{x→∞} γ^{n,a}) = (a^{+∞} I, a^0 I)`.
pub fn boundary_limits(n: usize, a: &VerticalSymbol) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    check_n(n)?;
    let (a0, ainf) = a.limits();
    let id = DMatrix::<f64>::identity(n, n);
    Ok((&id * ainf, id * a0))
}

/// Closed form of `γ^{a_k}(x)` for the canonical family: `e^{−2(k−1)x}(1 − e^{−2x})`
/// for `k < n` and `e^{−2(n−1)x}` for `k = n`.
pub fn gamma_indicator_closed(k: usize, n: usize, x: f64) -> Result<f64> {
    Ok(ln_gamma_indicator_closed(k, n, x)?.exp())
}

/// Natural logarithm of [`gamma_indicator_closed`]; finite for every `x > 0`.
pub fn ln_gamma_indicator_closed(k: usize, n: usize, x: f64) -> Result<f64> {
    if k == 0 || k > n {
        return Err(Error::IndexOutOfRange { index: k, n });
    }
    check_x(x)?;
    let base = -2.0 * (k - 1) as f64 * x;
    if k == n {
        Ok(base)
    } else {
        Ok(base + (-(-2.0 * x).exp_m1()).ln())
    }
}

/// `γ^{n,a_0}(x) = ∫₀^{αx} N_n N_n^t dy` for `a_0 = χ_[0,α/2)`.
pub fn gamma_a0_matrix(n: usize, alpha: f64, x: f64) -> Result<SpectralMatrix> {
    check_n(n)?;
    check_x(x)?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    Ok(SpectralMatrix {
        x: Point::Finite(x),
        entries: laguerre_head_matrix(n, alpha * x),
    })
}

/// `γ^{n,a}` at every grid point, in grid order.
pub fn gamma_on_grid(n: usize, a: &VerticalSymbol, grid: &CompactifiedGrid) -> Result<Vec<SpectralMatrix>> {
    grid.points()
        .into_par_iter()
        .map(|p| gamma_matrix_at(n, a, p))
        .collect()
}

/// CSV with columns `x, gamma_1_1, gamma_1_2, …` (row-major).
pub fn spectral_table(rows: &[SpectralMatrix]) -> Result<CsvTable> {
    let n = rows.first().map_or(0, SpectralMatrix::n);
    let mut header = vec!["x".to_string()];
    for j in 1..=n {
        for k in 1..=n {
            header.push(format!("gamma_{j}_{k}"));
        }
    }
    let mut table = CsvTable::new(header);
    for r in rows {
        if r.n() != n {
            return Err(Error::Dimension { expected: n, got: r.n() });
        }
        let mut row = vec![r.x.to_string()];
        for j in 0..n {
            for k in 0..n {
                row.push(format_float(r.entries[(j, k)]));
            }
        }
        table.push(row)?;
    }
    Ok(table)
}
