//! Discretized transforms `R_n`, `R_n^*` between `(L₂(ℝ₊))^n` and the
//! upper half-plane, and elements `h = R^*(a M_n)` of the image of `P_T`.
//!
//! Single-point evaluations use adaptive quadrature. Whole-plane samples
//! (needed by the reproducing and round-trip checks) go through
//! [`PlaneField`], which evaluates `∫ e^{itu} c(t, v) dt` for all nodes of a
//! [`PlaneRule`] on one shared composite Gauss–Legendre grid in `t`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::algebras::CVector;
use crate::error::{Error, Result};
use crate::kernels::HalfPlanePoint;
use crate::projections::m_vector;
use crate::quadrature::{integrate_halfline, integrate_interval, integrate_plane, GaussLegendre, HalfLineRule, PlaneRule};
use crate::specfun::laguerre_ell_vec;

type ProfileFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

fn inv_sqrt_2pi() -> f64 {
    1.0 / (2.0 * PI).sqrt()
}

/// A function `a: ℝ₊ → ℂ` with a declared decay rate `δ` (`|a(t)| ≲ e^{-δt}`).
#[derive(Clone)]
pub struct HalfLineProfile {
    func: Option<ProfileFn>,
    decay: f64,
}

impl fmt::Debug for HalfLineProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HalfLineProfile")
            .field("zero", &self.func.is_none())
            .field("decay", &self.decay)
            .finish()
    }
}

impl HalfLineProfile {
    pub fn new(f: impl Fn(f64) -> Complex64 + Send + Sync + 'static, decay: f64) -> Result<Self> {
        if !(decay > 0.0 && decay.is_finite()) {
            return Err(Error::InvalidParameter(format!("decay must be positive, got {decay}")));
        }
        Ok(Self {
            func: Some(Arc::new(f)),
            decay,
        })
    }

    pub fn real(f: impl Fn(f64) -> f64 + Send + Sync + 'static, decay: f64) -> Result<Self> {
        Self::new(move |t| Complex64::new(f(t), 0.0), decay)
    }

    /// `t^k e^{-rt}`.
    pub fn power_exp(k: u32, rate: f64) -> Result<Self> {
        Self::real(move |t| t.powi(k as i32) * (-rate * t).exp(), rate)
    }

    /// The zero function.
    pub fn zero() -> Self {
        Self { func: None, decay: 1.0 }
    }

    pub fn is_zero(&self) -> bool {
        self.func.is_none()
    }

    pub fn decay(&self) -> f64 {
        self.decay
    }

    pub fn evaluate(&self, t: f64) -> Complex64 {
        self.func.as_ref().map_or(Complex64::new(0.0, 0.0), |f| f(t))
    }

    /// `∫₀^∞ |a(t)|² dt`.
    pub fn norm_sq(&self) -> Result<f64> {
        if self.is_zero() {
            return Ok(0.0);
        }
        integrate_halfline(|t| self.evaluate(t).norm_sqr(), HalfLineRule::default_adaptive(), 2.0 * self.decay)
    }
}

/// `f = (f_1, …, f_n)^t ∈ (L₂(ℝ₊))^n`.
#[derive(Debug, Clone)]
pub struct VectorProfile {
    components: Vec<HalfLineProfile>,
}

impl VectorProfile {
    pub fn new(components: Vec<HalfLineProfile>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter("a vector profile needs components".into()));
        }
        Ok(Self { components })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            components: vec![HalfLineProfile::zero(); n.max(1)],
        }
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[HalfLineProfile] {
        &self.components
    }

    /// Slowest decay rate among the nonzero components.
    pub fn decay(&self) -> f64 {
        self.components
            .iter()
            .filter(|c| !c.is_zero())
            .map(HalfLineProfile::decay)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(HalfLineProfile::is_zero)
    }

    pub fn evaluate(&self, t: f64) -> CVector {
        CVector::from_iterator(self.n(), self.components.iter().map(|c| c.evaluate(t)))
    }

    pub fn norm_sq(&self) -> Result<f64> {
        self.components.iter().map(HalfLineProfile::norm_sq).sum()
    }
}

fn check_n(n: usize, got: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if n != got {
        return Err(Error::Dimension { expected: n, got });
    }
    Ok(())
}

/// Half-line integration with the √t behaviour at the origin removed by `t = s²`.
fn integrate_sqrt_origin(f: impl Fn(f64) -> Complex64, decay: f64) -> Result<Complex64> {
    // ∫₀^T f(t) dt = ∫₀^{√T} 2s f(s²) ds
    let end = (90.0 / decay).sqrt();
    integrate_interval(|s| f(s * s) * (2.0 * s), 0.0, end, 1e-13, 24)
}

/// `(R_n^* f)(z) = (1/√2π) ∫₀^∞ e^{itx} √(2t) N_n(2ty)^t f(t) dt`.
pub fn apply_rn_star(n: usize, f: &VectorProfile, z: HalfPlanePoint) -> Result<Complex64> {
    check_n(n, f.n())?;
    if f.is_zero() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let decay = f.decay() + z.y;
    let value = integrate_sqrt_origin(
        |t| {
            let ell = laguerre_ell_vec(n, 2.0 * t * z.y);
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, c) in f.components().iter().enumerate() {
                if !c.is_zero() {
                    acc += c.evaluate(t) * ell[k];
                }
            }
            // ℓ_k(2ty) already carries e^{-ty}
            Complex64::from_polar((2.0 * t).sqrt(), t * z.x) * acc
        },
        decay,
    )?;
    Ok(value * inv_sqrt_2pi())
}

/// `h(z) = (1/√2π) ∫₀^∞ e^{itz} √(2t) a(t) M_n(t) dt`, an element of the image of `P_T`.
pub fn build_image_element(n: usize, a: &HalfLineProfile, z: HalfPlanePoint) -> Result<CVector> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let mut out = CVector::zeros(n);
    if a.is_zero() {
        return Ok(out);
    }
    let decay = a.decay() + z.y;
    for k in 0..n {
        out[k] = integrate_sqrt_origin(
            |t| {
                let m = gamma_sqrt(k + 1, n, t);
                Complex64::from_polar((2.0 * t).sqrt() * (-t * z.y).exp() * m, t * z.x) * a.evaluate(t)
            },
            decay,
        )? * inv_sqrt_2pi();
    }
    Ok(out)
}

fn gamma_sqrt(k: usize, n: usize, t: f64) -> f64 {
    if t <= 0.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    crate::spectral::gamma_indicator_closed(k, n, t).map_or(0.0, f64::sqrt)
}

/// `(R_n φ)(x) = (1/√2π) ∫∫ e^{-ixu} φ(u, v) √(2x) N_n(2xv) dv du` for `x > 0`,
/// by plane quadrature.
pub fn apply_rn(
    n: usize,
    phi: impl Fn(f64, f64) -> Complex64 + Sync,
    x: f64,
    rule: &PlaneRule,
) -> Result<CVector> {
    check_rn_point(n, x)?;
    let mut out = CVector::zeros(n);
    let scale = (2.0 * x).sqrt() * inv_sqrt_2pi();
    for k in 0..n {
        out[k] = integrate_plane(
            |u, v| {
                let ell = laguerre_ell_vec(k + 1, 2.0 * x * v)[k];
                Complex64::from_polar(ell, -x * u) * phi(u, v)
            },
            rule,
        )? * scale;
    }
    Ok(out)
}

fn check_rn_point(n: usize, x: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain {
            function: "R_n",
            requirement: "x > 0",
            value: x.to_string(),
        });
    }
    Ok(())
}

/// Composite Gauss–Legendre grid on `[0, T]` in `t`, with `t = w s²` on the
/// first panel so `√t` endpoint behaviour is integrated accurately.
#[derive(Debug, Clone)]
struct TGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

fn panel_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(16).expect("16 nodes is valid"))
}

impl TGrid {
    fn new(decay: f64, x_extent: f64) -> Self {
        let end = 40.0 / decay;
        // keep ω·h ≲ 5 on every panel for |u| ≤ x_extent
        let width = (10.0 / x_extent).min(0.5).min(end);
        let rule = panel_rule();
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for (s, w) in rule.mapped(0.0, 1.0) {
            nodes.push(width * s * s);
            weights.push(2.0 * width * s * w);
        }
        let panels = ((end - width) / width).ceil().max(0.0) as usize;
        for p in 0..panels {
            let a = width * (p + 1) as f64;
            for (t, w) in rule.mapped(a, a + width) {
                nodes.push(t);
                weights.push(w);
            }
        }
        Self { nodes, weights }
    }
}

/// Samples of a (vector-valued) function on every node of a [`PlaneRule`].
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneField {
    rule: PlaneRule,
    us: Vec<(f64, f64)>,
    vs: Vec<(f64, f64)>,
    components: usize,
    data: Vec<Complex64>,
}

impl PlaneField {
    pub fn rule(&self) -> &PlaneRule {
        &self.rule
    }

    pub fn components(&self) -> usize {
        self.components
    }

    /// `(u, weight)` nodes.
    pub fn u_nodes(&self) -> &[(f64, f64)] {
        &self.us
    }

    /// `(v, weight)` nodes.
    pub fn v_nodes(&self) -> &[(f64, f64)] {
        &self.vs
    }

    /// Sample at `(u_i, v_j)`.
    pub fn at(&self, j: usize, i: usize) -> &[Complex64] {
        let start = (j * self.us.len() + i) * self.components;
        &self.data[start..start + self.components]
    }

    /// `Σ w_u w_v Σ_c |F_c|²`.
    pub fn norm_sq(&self) -> f64 {
        let mut total = 0.0;
        for (j, &(_, wv)) in self.vs.iter().enumerate() {
            let mut row = 0.0;
            for (i, &(_, wu)) in self.us.iter().enumerate() {
                row += wu * self.at(j, i).iter().map(Complex64::norm_sqr).sum::<f64>();
            }
            total += wv * row;
        }
        total
    }

    /// `∫∫ Σ_c g_c(u, v) F_c(u, v)` with `g` evaluated at each node.
    pub fn integrate_against(
        &self,
        g: impl Fn(f64, f64, &mut [Complex64]) + Sync,
    ) -> Complex64 {
        let rows: Vec<Complex64> = self
            .vs
            .par_iter()
            .enumerate()
            .map(|(j, &(v, wv))| {
                let mut buf = vec![Complex64::new(0.0, 0.0); self.components];
                let mut row = Complex64::new(0.0, 0.0);
                for (i, &(u, wu)) in self.us.iter().enumerate() {
                    g(u, v, &mut buf);
                    let f = self.at(j, i);
                    let s: Complex64 = buf.iter().zip(f).map(|(a, b)| a * b).sum();
                    row += s * wu;
                }
                row * wv
            })
            .collect();
        rows.into_iter().sum()
    }

    /// `F(u, v) = (1/√2π) ∫₀^T e^{itu} c(t, v) dt` on every node. `coeffs(v, t, out)`
    /// writes `c(t, v)` per component; `decay` bounds `|c(t, v)| ≲ e^{-(decay + v) t}`.
    fn fourier_sample(
        rule: &PlaneRule,
        components: usize,
        decay: f64,
        coeffs: impl Fn(f64, f64, &mut [Complex64]) + Sync,
    ) -> Result<Self> {
        rule.validate()?;
        let us = rule.u_nodes();
        let vs = rule.v_nodes();
        let grid = TGrid::new(decay, rule.x_extent);
        let nq = grid.nodes.len();
        let nu = us.len();
        // e^{i t_q u_i}, row-major in q
        let phases: Vec<Complex64> = (0..nq)
            .into_par_iter()
            .flat_map_iter(|q| {
                let t = grid.nodes[q];
                us.iter().map(move |&(u, _)| Complex64::from_polar(1.0, t * u))
            })
            .collect();
        let scale = inv_sqrt_2pi();
        let rows: Vec<Vec<Complex64>> = vs
            .par_iter()
            .map(|&(v, _)| {
                let mut row = vec![Complex64::new(0.0, 0.0); nu * components];
                let mut c = vec![Complex64::new(0.0, 0.0); components];
                for q in 0..nq {
                    let t = grid.nodes[q];
                    if t * (decay + v) > 60.0 {
                        break;
                    }
                    coeffs(v, t, &mut c);
                    let w = grid.weights[q] * scale;
                    let ph = &phases[q * nu..(q + 1) * nu];
                    for (comp, &cv) in c.iter().enumerate() {
                        let cw = cv * w;
                        if cw == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        for (i, p) in ph.iter().enumerate() {
                            row[i * components + comp] += cw * p;
                        }
                    }
                }
                row
            })
            .collect();
        let mut data = Vec::with_capacity(vs.len() * nu * components);
        for r in rows {
            if r.iter().any(|z| !z.is_finite()) {
                return Err(Error::NonFinite { at: f64::NAN });
            }
            data.extend(r);
        }
        Ok(Self {
            rule: *rule,
            us,
            vs,
            components,
            data,
        })
    }
}

/// `h = R^*(a M_n)` (see [`build_image_element`]) on every node of `rule`.
pub fn sample_image_element(n: usize, a: &HalfLineProfile, rule: &PlaneRule) -> Result<PlaneField> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    PlaneField::fourier_sample(rule, n, a.decay(), |v, t, out| {
        let base = (2.0 * t).sqrt() * (-t * v).exp();
        let av = a.evaluate(t);
        match m_vector(n, t.max(f64::MIN_POSITIVE)) {
            Ok(m) => {
                for k in 0..n {
                    out[k] = av * (base * m[k]);
                }
            }
            Err(_) => out.iter_mut().for_each(|o| *o = Complex64::new(0.0, 0.0)),
        }
    })
}

/// `R_n^* f` on every node of `rule`.
pub fn sample_rn_star(n: usize, f: &VectorProfile, rule: &PlaneRule) -> Result<PlaneField> {
    check_n(n, f.n())?;
    let decay = if f.is_zero() { 1.0 } else { f.decay() };
    PlaneField::fourier_sample(rule, 1, decay, |v, t, out| {
        let ell = laguerre_ell_vec(n, 2.0 * t * v);
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in f.components().iter().enumerate() {
            if !c.is_zero() {
                acc += c.evaluate(t) * ell[k];
            }
        }
        out[0] = acc * (2.0 * t).sqrt();
    })
}

/// [`apply_rn`] on a pre-sampled scalar field.
pub fn apply_rn_sampled(n: usize, field: &PlaneField, x: f64) -> Result<CVector> {
    check_rn_point(n, x)?;
    if field.components() != 1 {
        return Err(Error::Dimension {
            expected: 1,
            got: field.components(),
        });
    }
    let scale = (2.0 * x).sqrt() * inv_sqrt_2pi();
    let phases: Vec<Complex64> = field.us.iter().map(|&(u, w)| Complex64::from_polar(w, -x * u)).collect();
    let mut out = CVector::zeros(n);
    for (j, &(v, wv)) in field.vs.iter().enumerate() {
        let mut row = Complex64::new(0.0, 0.0);
        for (i, p) in phases.iter().enumerate() {
            row += p * field.at(j, i)[0];
        }
        let ell = laguerre_ell_vec(n, 2.0 * x * v);
        for k in 0..n {
            out[k] += row * (wv * ell[k]);
        }
    }
    Ok(out * Complex64::new(scale, 0.0))
}
