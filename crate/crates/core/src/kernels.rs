//! Reproducing kernels: the matrix kernel of `P_T` on `(A²(Π))^n`, the scalar
//! kernel `K^γ` of the image `A^γ`, and their quadrature oracles.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::algebras::{CMatrix, CVector};
use crate::error::{Error, Result};
use crate::io::{format_float, CsvTable};
use crate::quadrature::{integrate_halfline, HalfLineRule, PlaneRule};
use crate::spectral::gamma_indicator_closed;
use crate::specfun::{laguerre_ell_vec, laplace_tj};
use crate::transforms::{build_image_element, sample_image_element, HalfLineProfile};

/// A point `z = x + iy` of the upper half-plane (`y > 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint {
    pub x: f64,
    pub y: f64,
}

impl HalfPlanePoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && y > 0.0) {
            return Err(Error::Domain {
                function: "HalfPlanePoint",
                requirement: "finite x and y > 0",
                value: format!("{x}{y:+}i"),
            });
        }
        Ok(Self { x, y })
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }
}

impl fmt::Display for HalfPlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", format_float(self.x), format_float(self.y))
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("not a number: {s:?}")))
}

fn parse_imag(s: &str) -> Result<f64> {
    match s.trim() {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        other => parse_f64(other),
    }
}

/// Accepts `x,y` or complex notation such as `i`, `2i`, `0.5+1.5i`, `-1-0.2i` (the
/// last would be rejected: `y` must be positive).
impl FromStr for HalfPlanePoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((a, b)) = s.split_once(',') {
            return Self::new(parse_f64(a)?, parse_f64(b)?);
        }
        let Some(body) = s.strip_suffix('i') else {
            return Err(Error::Parse(format!("{s:?} is not a point of the upper half-plane")));
        };
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
        let (x, y) = match split {
            Some(i) => (parse_f64(&body[..i])?, parse_imag(&body[i..])?),
            None => (0.0, parse_imag(body)?),
        };
        Self::new(x, y)
    }
}

/// An `n × n` kernel value `K(z, w)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    pub z: HalfPlanePoint,
    pub w: HalfPlanePoint,
    pub entries: CMatrix,
}

impl KernelMatrix {
    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    /// 1-based entry.
    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        self.entries[(j - 1, k - 1)]
    }

    /// Largest entrywise `|K_jk − K'_jk| / |K'_jk|` (absolute where `K'_jk = 0`).
    pub fn max_relative_error(&self, reference: &KernelMatrix) -> f64 {
        self.entries
            .iter()
            .zip(reference.entries.iter())
            .map(|(a, b)| {
                let d = (a - b).norm();
                if b.norm() > 0.0 {
                    d / b.norm()
                } else {
                    d
                }
            })
            .fold(0.0, f64::max)
    }
}

/// `G_m(z, w) = −1 / (π (z − w̄ + m i)²)`.
pub fn g_kernel(m: usize, z: HalfPlanePoint, w: HalfPlanePoint) -> Complex64 {
    let d = z.as_complex() - w.as_complex().conj() + Complex64::new(0.0, m as f64);
    -1.0 / (PI * d * d)
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    Ok(())
}

/// Closed form of the kernel of `P_T`:
/// `K_nn = G_{2(n−1)}`, `K_jk = G_{j+k−2} − G_{j+k}` for `j, k < n`, and
/// `K_jn = K_nj = tJ(p)/π` with `p = −i(z − w̄) + j + n − 2`.
pub fn kernel_pt(n: usize, z: HalfPlanePoint, w: HalfPlanePoint) -> Result<KernelMatrix> {
    check_n(n)?;
    let mut k = CMatrix::zeros(n, n);
    let zeta = z.as_complex() - w.as_complex().conj();
    for j in 1..n {
        for l in j..n {
            let v = g_kernel(j + l - 2, z, w) - g_kernel(j + l, z, w);
            k[(j - 1, l - 1)] = v;
            k[(l - 1, j - 1)] = v;
        }
        let p = Complex64::new(0.0, -1.0) * zeta + (j + n - 2) as f64;
        let v = laplace_tj(p)? / PI;
        k[(j - 1, n - 1)] = v;
        k[(n - 1, j - 1)] = v;
    }
    k[(n - 1, n - 1)] = g_kernel(2 * (n - 1), z, w);
    Ok(KernelMatrix { z, w, entries: k })
}

/// `K(z, w) = (1/π) ∫₀^∞ t e^{it(x−u)} e^{−t(y+v)} P_γ(t) dt`, entry by entry.
pub fn kernel_pt_oracle(n: usize, z: HalfPlanePoint, w: HalfPlanePoint, rule: &HalfLineRule) -> Result<KernelMatrix> {
    check_n(n)?;
    let mut k = CMatrix::zeros(n, n);
    let decay = z.y + w.y;
    let dx = z.x - w.x;
    for j in 1..=n {
        for l in j..=n {
            let v = integrate_halfline(
                |t| {
                    let p = (gamma_indicator_closed(j, n, t).unwrap_or(0.0) * gamma_indicator_closed(l, n, t).unwrap_or(0.0)).sqrt();
                    Complex64::from_polar(t * (-t * decay).exp() * p, t * dx)
                },
                rule,
                decay,
            )? / PI;
            k[(j - 1, l - 1)] = v;
            k[(l - 1, j - 1)] = v;
        }
    }
    Ok(KernelMatrix { z, w, entries: k })
}

/// How [`kernel_kgamma`] evaluates `K^γ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KGammaMethod {
    /// `(1/π) ∫ e^{it(x−u)} t N_n(2ty)^t P_γ(t) N_n(2tv) dt`.
    Quadrature,
    /// The same integral written through `φ_n`, `φ_{n−1}` and `φ(t) = −1 + √(1 − e^{−2t})`.
    PhiRepresentation,
}

/// `φ(t) = −1 + √(1 − e^{−2t})`, computed without cancellation.
pub fn phi_defect(t: f64) -> f64 {
    let e = (-2.0 * t).exp();
    -e / (1.0 + (1.0 - e).sqrt())
}

/// `φ_m(t, y) = Σ_{j=1}^m e^{−(j−1)t} ℓ_{j−1}(2ty)`.
pub fn phi_m(m: usize, t: f64, y: f64) -> Result<f64> {
    if !(t > 0.0 && y > 0.0) {
        return Err(Error::Domain {
            function: "phi_m",
            requirement: "t > 0 and y > 0",
            value: format!("t = {t}, y = {y}"),
        });
    }
    Ok(laguerre_ell_vec(m, 2.0 * t * y)
        .iter()
        .enumerate()
        .map(|(j, l)| (-(j as f64) * t).exp() * l)
        .sum())
}

/// `K^γ(z, w)`, the reproducing kernel of `A^γ`.
pub fn kernel_kgamma(n: usize, z: HalfPlanePoint, w: HalfPlanePoint, method: KGammaMethod) -> Result<Complex64> {
    check_n(n)?;
    let decay = z.y + w.y;
    let dx = z.x - w.x;
    let value = integrate_halfline(
        |t| {
            let (a, b) = match method {
                KGammaMethod::Quadrature => {
                    let (ny, nv) = (laguerre_ell_vec(n, 2.0 * t * z.y), laguerre_ell_vec(n, 2.0 * t * w.y));
                    let mut a = 0.0;
                    let mut b = 0.0;
                    for k in 1..=n {
                        let m = gamma_indicator_closed(k, n, t).unwrap_or(0.0).sqrt();
                        a += ny[k - 1] * m;
                        b += nv[k - 1] * m;
                    }
                    (a, b)
                }
                KGammaMethod::PhiRepresentation => {
                    let f = phi_defect(t);
                    let side = |y: f64| {
                        let ell = laguerre_ell_vec(n, 2.0 * t * y);
                        let mut full = 0.0;
                        let mut head = 0.0;
                        for (j, l) in ell.iter().enumerate() {
                            let term = (-(j as f64) * t).exp() * l;
                            full += term;
                            if j + 1 < n {
                                head += term;
                            }
                        }
                        full + f * head
                    };
                    (side(z.y), side(w.y))
                }
            };
            Complex64::from_polar(t * a * b, t * dx)
        },
        HalfLineRule::default_adaptive(),
        decay,
    )?;
    Ok(value / PI)
}

/// Entrywise pieces `(1/π) ∫ e^{it(x−u)} t ℓ_{j−1}(2ty) P_γ(t)_{jk} ℓ_{k−1}(2tv) dt`;
/// they sum to `K^γ(z, w)`.
pub fn kernel_kgamma_entries(n: usize, z: HalfPlanePoint, w: HalfPlanePoint) -> Result<CMatrix> {
    check_n(n)?;
    let decay = z.y + w.y;
    let dx = z.x - w.x;
    let mut out = CMatrix::zeros(n, n);
    for j in 1..=n {
        for k in 1..=n {
            out[(j - 1, k - 1)] = integrate_halfline(
                |t| {
                    let ly = laguerre_ell_vec(j, 2.0 * t * z.y)[j - 1];
                    let lv = laguerre_ell_vec(k, 2.0 * t * w.y)[k - 1];
                    let p = (gamma_indicator_closed(j, n, t).unwrap_or(0.0) * gamma_indicator_closed(k, n, t).unwrap_or(0.0)).sqrt();
                    Complex64::from_polar(t * ly * p * lv, t * dx)
                },
                HalfLineRule::default_adaptive(),
                decay,
            )? / PI;
        }
    }
    Ok(out)
}

/// Gram matrix `[K(z_i, z_j)]` in `n × n` blocks.
pub fn gram_matrix(n: usize, points: &[HalfPlanePoint]) -> Result<CMatrix> {
    check_n(n)?;
    let m = points.len();
    let mut g = CMatrix::zeros(n * m, n * m);
    for (i, &zi) in points.iter().enumerate() {
        for (j, &zj) in points.iter().enumerate() {
            let k = kernel_pt(n, zi, zj)?;
            g.view_mut((i * n, j * n), (n, n)).copy_from(&k.entries);
        }
    }
    Ok(g)
}

/// Hermitian defect and smallest eigenvalue of a Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramReport {
    pub hermitian_defect: f64,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

pub fn gram_report(g: &CMatrix) -> GramReport {
    let hermitian_defect = (g - g.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let sym = (g + g.adjoint()) * Complex64::new(0.5, 0.0);
    let ev = SymmetricEigen::new(sym).eigenvalues;
    GramReport {
        hermitian_defect,
        min_eigenvalue: ev.iter().copied().fold(f64::INFINITY, f64::min),
        max_eigenvalue: ev.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    }
}

/// `‖(P_T h)(z) − h(z)‖` for one evaluation point.
#[derive(Debug, Clone, PartialEq)]
pub struct ReproducingResidual {
    pub z: HalfPlanePoint,
    /// `h(z)` from its defining integral.
    pub expected: CVector,
    /// `∫_Π K(z, w) h(w) dA(w)` by plane quadrature.
    pub reproduced: CVector,
    pub absolute: f64,
    /// `absolute / ‖h(z)‖`; `0` when `h(z) = 0`.
    pub relative: f64,
}

/// Reproduces `h = R^*(a M_n) ∈ Im P_T` at each `z` through `∫ K(z, w) h(w) dA(w)`.
pub fn reproducing_check(
    n: usize,
    a: &HalfLineProfile,
    points: &[HalfPlanePoint],
    rule: &PlaneRule,
) -> Result<Vec<ReproducingResidual>> {
    check_n(n)?;
    if a.is_zero() {
        return Ok(points
            .iter()
            .map(|&z| ReproducingResidual {
                z,
                expected: CVector::zeros(n),
                reproduced: CVector::zeros(n),
                absolute: 0.0,
                relative: 0.0,
            })
            .collect());
    }
    let field = sample_image_element(n, a, rule)?;
    let us = field.u_nodes();
    let mut out = Vec::with_capacity(points.len());
    for &z in points {
        let rows: Result<Vec<CVector>> = field
            .v_nodes()
            .par_iter()
            .enumerate()
            .map(|(j, &(v, wv))| {
                let mut acc = CVector::zeros(n);
                for (i, &(u, wu)) in us.iter().enumerate() {
                    let w = HalfPlanePoint { x: u, y: v };
                    let k = kernel_pt(n, z, w)?;
                    let h = CVector::from_column_slice(field.at(j, i));
                    acc += (k.entries * h) * Complex64::new(wu, 0.0);
                }
                Ok(acc * Complex64::new(wv, 0.0))
            })
            .collect();
        let reproduced = rows?.into_iter().fold(CVector::zeros(n), |a, b| a + b);
        let expected = build_image_element(n, a, z)?;
        let absolute = (&reproduced - &expected).norm();
        let scale = expected.norm();
        out.push(ReproducingResidual {
            z,
            relative: if scale > 0.0 { absolute / scale } else { 0.0 },
            expected,
            reproduced,
            absolute,
        });
    }
    Ok(out)
}

/// CSV of `K(z, w)` entries: `z_re, z_im, w_re, w_im, j, k, re, im`.
pub fn kernel_table(values: &[KernelMatrix]) -> CsvTable {
    let mut t = CsvTable::new(["z_re", "z_im", "w_re", "w_im", "j", "k", "re", "im"]);
    for m in values {
        for j in 1..=m.n() {
            for k in 1..=m.n() {
                let e = m.entry(j, k);
                t.push(vec![
                    format_float(m.z.x),
                    format_float(m.z.y),
                    format_float(m.w.x),
                    format_float(m.w.y),
                    j.to_string(),
                    k.to_string(),
                    format_float(e.re),
                    format_float(e.im),
                ])
                .expect("row width matches header");
            }
        }
    }
    t
}
