//! Integration rules on the half-line and on the upper half-plane.
//!
//! These are the oracles every closed form is checked against, so they are
//! deliberately plain: Gauss–Laguerre with exponential rescaling, adaptive
//! Gauss–Kronrod on a truncated interval, and a tensor trapezoid rule on a
//! box of the half-plane (uniform in `u`, geometric in `v`).

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Scalar values a quadrature rule can accumulate.
pub trait Sample:
    Copy + Send + Sync + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn magnitude(&self) -> f64;
    fn is_finite_sample(&self) -> bool;
}

impl Sample for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn is_finite_sample(&self) -> bool {
        self.is_finite()
    }
}

impl Sample for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_finite_sample(&self) -> bool {
        self.is_finite()
    }
}

fn checked<T: Sample>(value: T, at: f64) -> Result<T> {
    if value.is_finite_sample() {
        Ok(value)
    } else {
        Err(Error::NonFinite { at })
    }
}

/// Largest Gauss–Laguerre order whose recurrence stays inside double range.
pub const MAX_LAGUERRE_NODES: usize = 256;

/// Gauss–Laguerre rule for `∫₀^∞ e^{-x} f(x) dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLaguerre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// `w_i e^{x_i}`, for integrands that carry their own decay.
    scaled_weights: Vec<f64>,
}

impl GaussLaguerre {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 || m > MAX_LAGUERRE_NODES {
            return Err(Error::InvalidParameter(format!(
                "Gauss-Laguerre order must be in 1..={MAX_LAGUERRE_NODES}, got {m}"
            )));
        }
        // Golub–Welsch: Jacobi matrix with diagonal 2k+1 and off-diagonal k.
        let jacobi = DMatrix::from_fn(m, m, |i, j| {
            if i == j {
                (2 * i + 1) as f64
            } else if i + 1 == j {
                j as f64
            } else if j + 1 == i {
                i as f64
            } else {
                0.0
            }
        });
        let mut guesses: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
        guesses.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));

        let mut nodes = Vec::with_capacity(m);
        let mut weights = Vec::with_capacity(m);
        let mut scaled_weights = Vec::with_capacity(m);
        for guess in guesses {
            let mut x = guess.max(f64::MIN_POSITIVE);
            for _ in 0..20 {
                let (lm, dlm) = laguerre_with_derivative(m, x);
                let dx = lm / dlm;
                x -= dx;
                if dx.abs() <= 2.0 * f64::EPSILON * x {
                    break;
                }
            }
            let (_, dlm) = laguerre_with_derivative(m, x);
            // w = 1 / (x L_m'(x)^2)
            let ln_w = -x.ln() - 2.0 * dlm.abs().ln();
            nodes.push(x);
            weights.push(ln_w.exp());
            scaled_weights.push((ln_w + x).exp());
        }
        Ok(Self {
            nodes,
            weights,
            scaled_weights,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫₀^∞ e^{-x} f(x) dx`.
    pub fn integrate_weighted<T: Sample>(&self, f: impl Fn(f64) -> T) -> Result<T> {
        let mut acc = T::default();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + checked(f(x), x)? * w;
        }
        Ok(acc)
    }

    /// `∫₀^∞ f(x) dx` for an `f` that decays at least like `e^{-x}`.
    pub fn integrate<T: Sample>(&self, f: impl Fn(f64) -> T) -> Result<T> {
        let mut acc = T::default();
        for (&x, &w) in self.nodes.iter().zip(&self.scaled_weights) {
            if w == 0.0 {
                continue;
            }
            acc = acc + checked(f(x), x)? * w;
        }
        Ok(acc)
    }
}

/// `(L_m(x), L_m'(x))`, both by forward recurrence.
fn laguerre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let (mut prev, mut cur) = (0.0, 1.0);
    let (mut dprev, mut dcur) = (0.0, 0.0);
    for j in 0..m {
        let a = (2 * j + 1) as f64 - x;
        let k = (j + 1) as f64;
        let next = (a * cur - j as f64 * prev) / k;
        let dnext = (a * dcur - cur - j as f64 * dprev) / k;
        prev = cur;
        cur = next;
        dprev = dcur;
        dcur = dnext;
    }
    (cur, dcur)
}

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("Gauss-Legendre order must be positive".into()));
        }
        let mut nodes = vec![0.0; m];
        let mut weights = vec![0.0; m];
        for i in 0..m.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
            let mut deriv = 1.0;
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(m, x);
                deriv = dp;
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(m, x);
            if dp.is_finite() {
                deriv = dp;
            }
            let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
            nodes[i] = -x;
            nodes[m - 1 - i] = x;
            weights[i] = w;
            weights[m - 1 - i] = w;
        }
        Ok(Self { nodes, weights })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<T: Sample>(&self, a: f64, b: f64, f: impl Fn(f64) -> T) -> Result<T> {
        let mut acc = T::default();
        for (x, w) in self.mapped(a, b) {
            acc = acc + checked(f(x), x)? * w;
        }
        Ok(acc)
    }
}

fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let (mut prev, mut cur) = (1.0, x);
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 1..m {
        let next = ((2 * k + 1) as f64 * x * cur - k as f64 * prev) / (k + 1) as f64;
        prev = cur;
        cur = next;
    }
    let deriv = m as f64 * (x * cur - prev) / (x * x - 1.0);
    (cur, deriv)
}

const KRONROD_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights for the odd-indexed Kronrod nodes (and the centre).
const GAUSS7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
    absolute: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<T: Sample>(f: &impl Fn(f64) -> T, a: f64, b: f64) -> Result<Segment<T>> {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let centre = checked(f(mid), mid)?;
    let mut kronrod = centre * KRONROD_WEIGHTS[7];
    let mut gauss = centre * GAUSS7_WEIGHTS[3];
    let mut absolute = centre.magnitude() * KRONROD_WEIGHTS[7];
    for i in 0..7 {
        let dx = half * KRONROD_NODES[i];
        let lo = checked(f(mid - dx), mid - dx)?;
        let hi = checked(f(mid + dx), mid + dx)?;
        let pair = lo + hi;
        kronrod = kronrod + pair * KRONROD_WEIGHTS[i];
        absolute += (lo.magnitude() + hi.magnitude()) * KRONROD_WEIGHTS[i];
        if i % 2 == 1 {
            gauss = gauss + pair * GAUSS7_WEIGHTS[i / 2];
        }
    }
    let value = kronrod * half;
    let error = (kronrod - gauss).magnitude() * half.abs();
    Ok(Segment {
        a,
        b,
        value,
        error,
        absolute: absolute * half.abs(),
    })
}

const MAX_SEGMENTS: usize = 20_000;

/// Globally adaptive Gauss–Kronrod (7/15) on `[a, b]`, starting from
/// `pieces` equal sub-intervals. Stops when the summed error estimate drops
/// below `rel_tol·|I|` (or `1e-15` of the absolute integral).
pub fn integrate_interval<T: Sample>(
    f: impl Fn(f64) -> T,
    a: f64,
    b: f64,
    rel_tol: f64,
    pieces: usize,
) -> Result<T> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter(format!("interval [{a}, {b}] must be finite")));
    }
    if a == b {
        return Ok(T::default());
    }
    let pieces = pieces.max(1);
    let width = (b - a) / pieces as f64;
    let mut heap = BinaryHeap::with_capacity(4 * pieces);
    for i in 0..pieces {
        let lo = a + i as f64 * width;
        let hi = if i + 1 == pieces { b } else { lo + width };
        heap.push(kronrod15(&f, lo, hi)?);
    }
    loop {
        let (mut value, mut error, mut absolute) = (T::default(), 0.0, 0.0);
        for s in heap.iter() {
            value = value + s.value;
            error += s.error;
            absolute += s.absolute;
        }
        let target = (rel_tol * value.magnitude()).max(1e-15 * absolute);
        if error <= target {
            return Ok(value);
        }
        if heap.len() >= MAX_SEGMENTS {
            return Err(Error::NoConvergence { estimate: error });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval exhausted at machine precision
            return Ok(value);
        }
        heap.push(kronrod15(&f, worst.a, mid)?);
        heap.push(kronrod15(&f, mid, worst.b)?);
    }
}

/// Kind tag of a [`HalfLineRule`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    GaussLaguerre,
    TruncatedAdaptive,
}

/// A rule for `∫₀^∞ f(t) dt` where the caller declares a decay rate `δ`
/// with `|f(t)| ≲ C e^{-δt}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfLineRule {
    kind: RuleKind,
    laguerre: Option<GaussLaguerre>,
    /// Truncation point in units of `1/δ` for the adaptive kind.
    span: f64,
    tol: f64,
}

impl HalfLineRule {
    /// `m`-node Gauss–Laguerre, rescaled by the decay hint.
    pub fn gauss_laguerre(m: usize) -> Result<Self> {
        Ok(Self {
            kind: RuleKind::GaussLaguerre,
            laguerre: Some(GaussLaguerre::new(m)?),
            span: 0.0,
            tol: 0.0,
        })
    }

    /// Adaptive Gauss–Kronrod on `[0, span/δ]`.
    pub fn truncated_adaptive(span: f64, tol: f64) -> Result<Self> {
        if !(span > 0.0 && tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "truncated rule needs span > 0 and tol > 0, got {span}, {tol}"
            )));
        }
        Ok(Self {
            kind: RuleKind::TruncatedAdaptive,
            laguerre: None,
            span,
            tol,
        })
    }

    /// The shared 128-node Gauss–Laguerre rule.
    pub fn default_laguerre() -> &'static HalfLineRule {
        static RULE: OnceLock<HalfLineRule> = OnceLock::new();
        RULE.get_or_init(|| HalfLineRule::gauss_laguerre(128).expect("128 nodes is in range"))
    }

    /// Adaptive rule used by the kernel and transform oracles: `[0, 90/δ]`, tolerance `1e-13`.
    pub fn default_adaptive() -> &'static HalfLineRule {
        static RULE: OnceLock<HalfLineRule> = OnceLock::new();
        RULE.get_or_init(|| HalfLineRule::truncated_adaptive(90.0, 1e-13).expect("valid"))
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    /// Nodes of the unscaled rule (empty for the adaptive kind).
    pub fn nodes(&self) -> &[f64] {
        self.laguerre.as_ref().map_or(&[], |r| r.nodes())
    }

    /// Weights of the unscaled rule (empty for the adaptive kind).
    pub fn weights(&self) -> &[f64] {
        self.laguerre.as_ref().map_or(&[], |r| r.weights())
    }
}

/// `∫₀^∞ f(t) dt` for `f` decaying at rate `decay`.
pub fn integrate_halfline<T: Sample>(
    f: impl Fn(f64) -> T,
    rule: &HalfLineRule,
    decay: f64,
) -> Result<T> {
    if !(decay > 0.0 && decay.is_finite()) {
        return Err(Error::InvalidParameter(format!("decay hint must be positive, got {decay}")));
    }
    match (&rule.kind, &rule.laguerre) {
        (RuleKind::GaussLaguerre, Some(gl)) => {
            let inv = 1.0 / decay;
            Ok(gl.integrate(|s| f(s * inv))? * inv)
        }
        _ => {
            let end = rule.span / decay;
            let pieces = (rule.span / 2.0).ceil() as usize;
            integrate_interval(f, 0.0, end, rule.tol, pieces)
        }
    }
}

/// `∫_a^∞ f(t) dt` by shifting onto the half-line.
pub fn integrate_tail<T: Sample>(
    f: impl Fn(f64) -> T,
    a: f64,
    rule: &HalfLineRule,
    decay: f64,
) -> Result<T> {
    integrate_halfline(|s| f(a + s), rule, decay)
}

/// Truncated box `[-x_extent, x_extent] × [y_min, y_max]` of the half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneRule {
    pub x_extent: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nu: usize,
    pub nv: usize,
}

impl Default for PlaneRule {
    fn default() -> Self {
        Self {
            x_extent: 40.0,
            y_min: 0.05,
            y_max: 40.0,
            nu: 512,
            nv: 256,
        }
    }
}

impl PlaneRule {
    pub fn new(x_extent: f64, y_min: f64, y_max: f64, nu: usize, nv: usize) -> Result<Self> {
        let rule = Self {
            x_extent,
            y_min,
            y_max,
            nu,
            nv,
        };
        rule.validate()?;
        Ok(rule)
    }

    /// Resolution used by the acceptance checks: the default box with the
    /// strip below `v = 1e-4` dropped instead of `v = 0.05`.
    pub fn acceptance() -> Self {
        Self {
            y_min: 1e-4,
            ..Self::default()
        }
    }

    /// Doubles the box in every direction (`x_extent`, `y_max`, `1/y_min`) and
    /// both node counts, so the `u` spacing is unchanged. Truncation, not node
    /// spacing, dominates the error of the default rule.
    pub fn refined(&self) -> Self {
        Self {
            x_extent: 2.0 * self.x_extent,
            y_min: 0.5 * self.y_min,
            y_max: 2.0 * self.y_max,
            nu: 2 * self.nu,
            nv: 2 * self.nv,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.x_extent > 0.0
            && self.y_min > 0.0
            && self.y_min < self.y_max
            && self.y_max.is_finite()
            && self.nu >= 8
            && self.nv >= 8;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid plane rule {self:?}")))
        }
    }

    /// Uniform trapezoid nodes in `u`.
    pub fn u_nodes(&self) -> Vec<(f64, f64)> {
        let h = 2.0 * self.x_extent / (self.nu - 1) as f64;
        (0..self.nu)
            .map(|i| {
                let w = if i == 0 || i + 1 == self.nu { 0.5 * h } else { h };
                (-self.x_extent + i as f64 * h, w)
            })
            .collect()
    }

    /// Geometric nodes in `v`; trapezoid in `ln v`, so the weight carries the Jacobian `v`.
    pub fn v_nodes(&self) -> Vec<(f64, f64)> {
        let ds = (self.y_max / self.y_min).ln() / (self.nv - 1) as f64;
        (0..self.nv)
            .map(|j| {
                let v = self.y_min * (j as f64 * ds).exp();
                let w = if j == 0 || j + 1 == self.nv { 0.5 * ds } else { ds };
                (v, v * w)
            })
            .collect()
    }
}

/// `∫∫ f(u, v) du dv` over the truncated box. Rows are evaluated in parallel
/// and summed in order, so the result does not depend on the thread count.
pub fn integrate_plane<T: Sample>(f: impl Fn(f64, f64) -> T + Sync, rule: &PlaneRule) -> Result<T> {
    rule.validate()?;
    let us = rule.u_nodes();
    let rows: Vec<Result<T>> = rule
        .v_nodes()
        .into_par_iter()
        .map(|(v, wv)| {
            let mut acc = T::default();
            for &(u, wu) in &us {
                acc = acc + checked(f(u, v), u)? * wu;
            }
            Ok(acc * wv)
        })
        .collect();
    let mut total = T::default();
    for row in rows {
        total = total + row?;
    }
    Ok(total)
}
