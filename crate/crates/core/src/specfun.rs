//! Special functions behind the closed forms: Gamma, digamma, the harmonic
//! function, Nielsen's beta, the Laplace transforms `J(p)` and `-J'(p)`, and
//! the normalized Laguerre functions `ℓ_k`.
//!
//! Everything here accepts complex arguments where the kernels need them
//! (`p = -i(z - w̄) + j + n - 2` is complex off the imaginary axis).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Euler–Mascheroni constant, `γ = -ψ(1)`.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `B_{2k} / (2k)` for k = 1..7.
const DIGAMMA_ASYMPTOTIC: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
];

/// Below this real part the digamma recurrence is applied before the asymptotic series.
const DIGAMMA_SHIFT: f64 = 10.0;

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

fn pole(function: &'static str, z: Complex64) -> Error {
    Error::Pole {
        function,
        re: z.re,
        im: z.im,
    }
}

fn require_positive_real_part(function: &'static str, z: Complex64) -> Result<()> {
    if z.re > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            function,
            requirement: "Re z > 0",
            value: format!("{z}"),
        })
    }
}

/// `ln Γ(z)` on `Re z >= 1/2` (Lanczos, g = 7). The imaginary part is not
/// reduced to the principal branch; only `exp` of differences is used.
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut series = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + series.ln()
}

/// Gamma function.
pub fn gamma_fn(z: impl Into<Complex64>) -> Result<Complex64> {
    let z = z.into();
    if is_nonpositive_integer(z) {
        return Err(pole("gamma", z));
    }
    if z.re < 0.5 {
        let reflected = ln_gamma_right(1.0 - z).exp();
        return Ok(PI / ((PI * z).sin() * reflected));
    }
    Ok(ln_gamma_right(z).exp())
}

/// `Γ(a) / Γ(b)` without forming either factor, so large arguments do not overflow.
pub fn gamma_ratio(a: impl Into<Complex64>, b: impl Into<Complex64>) -> Result<Complex64> {
    let (mut a, mut b) = (a.into(), b.into());
    if is_nonpositive_integer(a) {
        return Err(pole("gamma", a));
    }
    if is_nonpositive_integer(b) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut scale = Complex64::new(1.0, 0.0);
    // Γ(s) = Γ(s + 1) / s
    while a.re < 0.5 {
        scale /= a;
        a += 1.0;
    }
    while b.re < 0.5 {
        scale *= b;
        b += 1.0;
    }
    Ok(scale * (ln_gamma_right(a) - ln_gamma_right(b)).exp())
}

/// Euler's Beta function `B(a, b) = Γ(a)Γ(b)/Γ(a+b)`.
pub fn beta_fn(a: impl Into<Complex64>, b: impl Into<Complex64>) -> Result<Complex64> {
    let (a, b) = (a.into(), b.into());
    Ok(gamma_ratio(a, a + b)? * gamma_fn(b)?)
}

/// Digamma `ψ(z) = Γ'(z)/Γ(z)`.
///
/// Upward recurrence `ψ(z) = ψ(z+1) - 1/z` until `Re z >= 10`, then the
/// asymptotic series through `B_14`. Reflection handles `Re z < 0`.
pub fn digamma(z: impl Into<Complex64>) -> Result<Complex64> {
    let z = z.into();
    if is_nonpositive_integer(z) {
        return Err(pole("digamma", z));
    }
    if z.re < 0.0 {
        let cot = (PI * z).cos() / (PI * z).sin();
        return Ok(digamma(1.0 - z)? - PI * cot);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.re < DIGAMMA_SHIFT {
        acc -= 1.0 / w;
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut tail = Complex64::new(0.0, 0.0);
    let mut power = inv2;
    for &c in &DIGAMMA_ASYMPTOTIC {
        tail += c * power;
        power *= inv2;
    }
    Ok(acc + w.ln() - 0.5 * inv - tail)
}

/// Harmonic function `H(z) = ψ(z+1) + γ`; `H(n)` is the n-th harmonic number.
pub fn harmonic(z: impl Into<Complex64>) -> Result<Complex64> {
    let z = z.into();
    digamma(z + 1.0).map(|psi| psi + EULER_GAMMA)
}

/// Nielsen's beta function `β(z) = ½(ψ((z+1)/2) - ψ(z/2))`, `Re z > 0`.
pub fn nielsen_beta(z: impl Into<Complex64>) -> Result<Complex64> {
    let z = z.into();
    require_positive_real_part("nielsen_beta", z)?;
    Ok(0.5 * (digamma(0.5 * (z + 1.0))? - digamma(0.5 * z)?))
}

/// `J(p) = ∫₀^∞ e^{-pt} (1 - e^{-2t})^{1/2} dt = (√π/4) Γ(p/2) / Γ(p/2 + 3/2)`.
pub fn laplace_j(p: impl Into<Complex64>) -> Result<Complex64> {
    let p = p.into();
    require_positive_real_part("laplace_j", p)?;
    let half = 0.5 * p;
    Ok(0.25 * PI.sqrt() * gamma_ratio(half, half + 1.5)?)
}

/// `∫₀^∞ t e^{-pt} (1 - e^{-2t})^{1/2} dt = -J'(p) = J(p) (β(p) + 1/(p+1))`.
pub fn laplace_tj(p: impl Into<Complex64>) -> Result<Complex64> {
    let p = p.into();
    require_positive_real_part("laplace_tj", p)?;
    Ok(laplace_j(p)? * (nielsen_beta(p)? + 1.0 / (p + 1.0)))
}

/// `∫₀^∞ t^m e^{-pt} (1 - e^{-2t})^{1/2} dt = (-1)^m J^{(m)}(p)`, by central
/// differences of [`laplace_j`] with step `h`. Only `m = 0, 1` have closed forms.
pub fn laplace_moment(m: usize, p: impl Into<Complex64>, h: f64) -> Result<Complex64> {
    let p = p.into();
    require_positive_real_part("laplace_moment", p)?;
    if !(h > 0.0) || p.re - 0.5 * m as f64 * h <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "finite-difference step {h} leaves the half-plane Re p > 0"
        )));
    }
    // m-th central difference: Σ_i (-1)^i C(m,i) J(p + (m/2 - i) h) / h^m
    let mut acc = Complex64::new(0.0, 0.0);
    let mut binom = 1.0;
    for i in 0..=m {
        let shift = (0.5 * m as f64 - i as f64) * h;
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binom * laplace_j(p + shift)?;
        binom = binom * (m - i) as f64 / (i + 1) as f64;
    }
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * acc / h.powi(m as i32))
}

/// Laguerre polynomial `L_k(y)` by the three-term recurrence.
pub fn laguerre_poly(k: usize, y: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for j in 0..k {
        let next = ((2 * j + 1) as f64 - y) * cur - j as f64 * prev;
        prev = cur;
        cur = next / (j + 1) as f64;
    }
    cur
}

/// Normalized Laguerre function `ℓ_k(y) = (-1)^k e^{-y/2} L_k(y)`, orthonormal on ℝ₊.
pub fn laguerre_ell(k: usize, y: f64) -> Result<f64> {
    if !(y >= 0.0) {
        return Err(Error::Domain {
            function: "laguerre_ell",
            requirement: "y >= 0",
            value: format!("{y}"),
        });
    }
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * (-0.5 * y).exp() * laguerre_poly(k, y))
}

/// `N_n(y) = (ℓ_0(y), …, ℓ_{n-1}(y))` in one recurrence pass. `y` must be nonnegative.
pub fn laguerre_ell_vec(n: usize, y: f64) -> Vec<f64> {
    let damp = (-0.5 * y).exp();
    let mut out = Vec::with_capacity(n);
    let (mut prev, mut cur) = (0.0, 1.0);
    for j in 0..n {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        out.push(sign * damp * cur);
        let next = ((2 * j + 1) as f64 - y) * cur - j as f64 * prev;
        prev = cur;
        cur = next / (j + 1) as f64;
    }
    out
}

/// Ascending coefficients of `L_k`: `L_k(y) = Σ_i (-1)^i C(k,i) y^i / i!`.
pub fn laguerre_coefficients(k: usize) -> Vec<f64> {
    let mut coef = Vec::with_capacity(k + 1);
    let mut binom = 1.0;
    let mut fact = 1.0;
    for i in 0..=k {
        if i > 0 {
            binom = binom * (k + 1 - i) as f64 / i as f64;
            fact *= i as f64;
        }
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        coef.push(sign * binom / fact);
    }
    coef
}
