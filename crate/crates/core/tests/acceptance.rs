//! Acceptance criteria 1–7. Runs without the libtest harness so every
//! criterion prints one PASS/FAIL line; the process fails if any criterion does.
//!
//! Reference values come from oracles written here: composite Simpson rules,
//! explicit Laguerre sums and Gamma-function closed forms.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2, PI};
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polybergman::algebras::{
    evaluate_word, random_distinct_pair, separate, Alphabet, CMatrix, Generator, GeneratorWord, Letter, PureState,
};
use polybergman::kernels::{
    gram_matrix, gram_report, kernel_kgamma, kernel_pt, reproducing_check, HalfPlanePoint, KGammaMethod,
};
use polybergman::projections::{generic_position_certificate, p_gamma};
use polybergman::quadrature::PlaneRule;
use polybergman::specfun::{digamma, laplace_j, laplace_tj, nielsen_beta};
use polybergman::spectral::{
    boundary_limits, gamma_indicator_closed, gamma_matrix, CompactifiedGrid, Point,
};
use polybergman::symbols::{canonical_family, VerticalSymbol};
use polybergman::transforms::{apply_rn_sampled, sample_image_element, sample_rn_star, HalfLineProfile, VectorProfile};

type C = Complex64;

/// Composite Simpson rule with `m` (even) panels.
fn simpson(f: impl Fn(f64) -> C, a: f64, b: f64, m: usize) -> C {
    let h = (b - a) / m as f64;
    let mut acc = f(a) + f(b);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += f(a + i as f64 * h) * w;
    }
    acc * (h / 3.0)
}

/// `∫₀^T f(t) dt` through `t = s²`, which smooths `√t`-type behaviour at 0.
fn simpson_sq(f: impl Fn(f64) -> C, end: f64, m: usize) -> C {
    simpson(|s| f(s * s) * (2.0 * s), 0.0, end.sqrt(), m)
}

/// `ℓ_k(y) = (−1)^k e^{−y/2} L_k(y)` from the explicit sum of `L_k`.
fn ell(k: usize, y: f64) -> f64 {
    let mut sum = 0.0;
    let mut binom = 1.0;
    let mut fact = 1.0;
    for i in 0..=k {
        if i > 0 {
            binom *= (k + 1 - i) as f64 / i as f64;
            fact *= i as f64;
        }
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * binom * y.powi(i as i32) / fact;
    }
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * (-0.5 * y).exp() * sum
}

/// `γ^{a_k}(t)` from its definition as `∫_{2t(k−1)}^{2tk} e^{−y} dy` (to `∞` for `k = n`).
fn gamma_k(k: usize, n: usize, t: f64) -> f64 {
    let lo = (-2.0 * (k - 1) as f64 * t).exp();
    if k == n {
        lo
    } else {
        lo - (-2.0 * k as f64 * t).exp()
    }
}

/// `∫_lo^hi ℓ_j(y) ℓ_l(y) dy` for all `j, l < n` by composite Simpson.
fn window_oracle(n: usize, lo: f64, hi: f64) -> DMatrix<f64> {
    let m = 2 * (((hi - lo) / 0.004).ceil() as usize).max(100);
    let h = (hi - lo) / m as f64;
    let mut acc = DMatrix::<f64>::zeros(n, n);
    for i in 0..=m {
        let w = if i == 0 || i == m { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
        let y = lo + i as f64 * h;
        let v: Vec<f64> = (0..n).map(|j| ell(j, y)).collect();
        for j in 0..n {
            for l in 0..n {
                acc[(j, l)] += w * v[j] * v[l];
            }
        }
    }
    acc * (h / 3.0)
}

fn pt(x: f64, y: f64) -> HalfPlanePoint {
    HalfPlanePoint::new(x, y).expect("upper half-plane")
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(failures: &[String], summary: String) -> Outcome {
    Outcome {
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            summary
        } else {
            format!("{summary}; {}", failures.join("; "))
        },
    }
}

fn check(failures: &mut Vec<String>, ok: bool, what: impl FnOnce() -> String) {
    if !ok {
        failures.push(what());
    }
}

fn criterion_1() -> Outcome {
    let mut fails = Vec::new();
    let psi1 = digamma(1.0).unwrap().re;
    check(&mut fails, (psi1 + 0.577_215_664_901_532_9).abs() < 1e-12, || format!("psi(1) = {psi1}"));
    let b1 = nielsen_beta(1.0).unwrap().re;
    let bh = nielsen_beta(0.5).unwrap().re;
    check(&mut fails, (b1 - LN_2).abs() < 1e-10, || format!("beta(1) = {b1}"));
    check(&mut fails, (bh - FRAC_PI_2).abs() < 1e-10, || format!("beta(1/2) = {bh}"));
    for (p, v) in [(1.0, FRAC_PI_4), (2.0, 1.0 / 3.0), (4.0, 2.0 / 15.0)] {
        let j = laplace_j(p).unwrap();
        check(&mut fails, (j.re - v).abs() < 1e-10 && j.im == 0.0, || format!("J({p}) = {j}"));
    }
    let mut worst: f64 = 0.0;
    for p in [C::new(1.5, 0.0), C::new(2.0, 0.0), C::new(3.0, 0.0), C::new(7.0, 0.0), C::new(3.0, 2.0)] {
        let q = simpson_sq(|t| (-p * t).exp() * (t * (1.0 - (-2.0 * t).exp()).sqrt()), 80.0 / p.re, 40_000);
        let e = (laplace_tj(p).unwrap() - q).norm() / q.norm();
        worst = worst.max(e);
        check(&mut fails, e < 1e-8, || format!("tJ({p}) off by {e:e}"));
    }
    outcome(&fails, format!("tJ vs quadrature worst relative error {worst:.2e}"))
}

fn criterion_2() -> Outcome {
    let mut fails = Vec::new();
    let grid = CompactifiedGrid::log(0.01, 20.0, 60).unwrap();
    let mut worst: f64 = 0.0;
    let mut partition: f64 = 0.0;
    for n in 1..=6 {
        let family = canonical_family(n).unwrap();
        for &x in grid.interior() {
            let mut scalar = 0.0;
            let mut total = DMatrix::<f64>::zeros(n, n);
            for k in 1..=n {
                let closed = gamma_indicator_closed(k, n, x).unwrap();
                worst = worst.max((closed - gamma_k(k, n, x)).abs());
                scalar += closed;
                // γ^{n,a_k}(x)_{jl} = ∫ over y ∈ [2x(k−1), 2xk) of ℓ_j ℓ_l
                let lo = 2.0 * x * (k - 1) as f64;
                let hi = if k == n { lo + 90.0 } else { 2.0 * x * k as f64 };
                let m = gamma_matrix(n, family.member(k).unwrap(), x).unwrap().entries;
                worst = worst.max((&m - window_oracle(n, lo, hi)).amax());
                total += m;
            }
            partition = partition
                .max((scalar - 1.0).abs())
                .max((total - DMatrix::identity(n, n)).amax());
        }
    }
    check(&mut fails, worst < 1e-9, || format!("closed form vs quadrature {worst:e}"));
    check(&mut fails, partition < 1e-12, || format!("partition defect {partition:e}"));

    // first-order behaviour at x → 0 is 2x·(d − c)·n in Frobenius norm, so n = 2 and short
    // intervals keep the deviation inside 5e−4 at x = 1e−4
    let n = 2;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut symbols = vec![VerticalSymbol::a0(2.0).unwrap()];
    for _ in 0..3 {
        let c = if rng.random_bool(0.3) { 0.0 } else { rng.random_range(0.05..2.0) };
        let len = rng.random_range(0.1..1.0);
        symbols.push(VerticalSymbol::indicator(c, c + len).unwrap());
    }
    let mut boundary: f64 = 0.0;
    for a in &symbols {
        let (lim0, lim_inf) = boundary_limits(n, a).unwrap();
        let expect0 = DMatrix::<f64>::identity(n, n) * a.evaluate(1e300);
        let expect_inf = DMatrix::<f64>::identity(n, n) * a.evaluate(0.0);
        check(&mut fails, lim0 == expect0 && lim_inf == expect_inf, || format!("limits of {a}"));
        let d0 = (gamma_matrix(n, a, 1e-4).unwrap().entries - &expect0).norm();
        let d1 = (gamma_matrix(n, a, 1e4).unwrap().entries - &expect_inf).norm();
        boundary = boundary.max(d0).max(d1);
        check(&mut fails, d0 < 5e-4 && d1 < 5e-4, || format!("{a}: {d0:e}, {d1:e}"));
    }
    outcome(
        &fails,
        format!("closed form error {worst:.2e}, partition {partition:.2e}, boundary {boundary:.2e}"),
    )
}

fn criterion_3() -> Outcome {
    let mut fails = Vec::new();
    let grid = CompactifiedGrid::log(0.01, 100.0, 40).unwrap();
    let mut worst: f64 = 0.0;
    for n in 1..=8 {
        for &x in grid.interior() {
            let p = p_gamma(n, Point::Finite(x)).unwrap();
            let rank = p.eigenvalues().get(1).map_or(0.0, |e| e.abs());
            let trace = (p.trace() - 1.0).abs();
            worst = worst.max(p.idempotency_defect()).max(p.symmetry_defect()).max(rank).max(trace);
        }
        let mut enn = DMatrix::<f64>::zeros(n, n);
        enn[(n - 1, n - 1)] = 1.0;
        let mut e11 = DMatrix::<f64>::zeros(n, n);
        e11[(0, 0)] = 1.0;
        check(&mut fails, p_gamma(n, Point::Zero).unwrap().entries == enn, || format!("P(0), n = {n}"));
        check(&mut fails, p_gamma(n, Point::Infinity).unwrap().entries == e11, || format!("P(inf), n = {n}"));
        match generic_position_certificate(n, &grid) {
            Ok(r) => {
                // smallest margin is γ^{a_n}(100) = e^{−200(n−1)}
                let expected = -200.0 * (n - 1) as f64;
                check(&mut fails, (r.min_ln_margin - expected).abs() < 1e-9, || {
                    format!("n = {n}: min log margin {}", r.min_ln_margin)
                });
            }
            Err(e) => fails.push(format!("certificate n = {n}: {e}")),
        }
    }
    check(&mut fails, worst < 1e-12, || format!("projection defect {worst:e}"));
    outcome(&fails, format!("projection defects {worst:.2e}, certificate passes for n = 1..8"))
}

/// Independent `(1/π) ∫ t e^{it(x−u)} e^{−t(y+v)} P_γ(t) dt`.
fn kernel_oracle(n: usize, z: HalfPlanePoint, w: HalfPlanePoint) -> CMatrix {
    let decay = z.y + w.y;
    let dx = z.x - w.x;
    CMatrix::from_fn(n, n, |j, k| {
        simpson_sq(
            |t| {
                let p = (gamma_k(j + 1, n, t) * gamma_k(k + 1, n, t)).sqrt();
                C::from_polar(t * (-t * decay).exp() * p, t * dx)
            },
            80.0 / decay,
            40_000,
        ) / PI
    })
}

/// Independent `(1/π) ∫ e^{it(x−u)} t N_n(2ty)^t P_γ(t) N_n(2tv) dt`.
fn kgamma_oracle(n: usize, z: HalfPlanePoint, w: HalfPlanePoint) -> C {
    let decay = z.y + w.y;
    simpson_sq(
        |t| {
            let side = |y: f64| (0..n).map(|k| ell(k, 2.0 * t * y) * gamma_k(k + 1, n, t).sqrt()).sum::<f64>();
            C::from_polar(t * side(z.y) * side(w.y), t * (z.x - w.x))
        },
        90.0 / decay,
        40_000,
    ) / PI
}

fn criterion_4() -> Outcome {
    let mut fails = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let random_point = |rng: &mut ChaCha8Rng| pt(rng.random_range(-2.0..2.0), rng.random_range(0.2..2.5));
    let pairs: Vec<(HalfPlanePoint, HalfPlanePoint)> =
        (0..25).map(|_| (random_point(&mut rng), random_point(&mut rng))).collect();
    let mut worst: f64 = 0.0;
    for n in 1..=4 {
        for &(z, w) in &pairs {
            let k = kernel_pt(n, z, w).unwrap();
            let o = kernel_oracle(n, z, w);
            for (a, b) in k.entries.iter().zip(o.iter()) {
                worst = worst.max((a - b).norm() / b.norm());
            }
        }
    }
    check(&mut fails, worst < 1e-6, || format!("closed form vs oracle {worst:e}"));
    let mut bergman: f64 = 0.0;
    for &(z, w) in &pairs {
        let d = z.as_complex() - w.as_complex().conj();
        let b = -1.0 / (PI * d * d);
        bergman = bergman.max((kernel_pt(1, z, w).unwrap().entry(1, 1) - b).norm() / b.norm());
    }
    check(&mut fails, bergman < 1e-10, || format!("n = 1 Bergman reduction {bergman:e}"));
    let points: Vec<HalfPlanePoint> = pairs.iter().take(6).map(|p| p.0).collect();
    let mut min_ev = f64::INFINITY;
    for n in 1..=4 {
        min_ev = min_ev.min(gram_report(&gram_matrix(n, &points).unwrap()).min_eigenvalue);
    }
    check(&mut fails, min_ev > -1e-10, || format!("Gram min eigenvalue {min_ev:e}"));
    let mut phi: f64 = 0.0;
    for n in 1..=4 {
        for &(z, w) in pairs.iter().skip(6).take(10) {
            let a = kernel_kgamma(n, z, w, KGammaMethod::PhiRepresentation).unwrap();
            let b = kgamma_oracle(n, z, w);
            phi = phi.max((a - b).norm() / b.norm());
        }
    }
    check(&mut fails, phi < 1e-8, || format!("phi-representation vs quadrature {phi:e}"));
    outcome(
        &fails,
        format!("oracle {worst:.2e}, Bergman {bergman:.2e}, Gram min eig {min_ev:.2e}, phi {phi:.2e}"),
    )
}

/// `h(z)` for `a = t e^{−t}`, `n = 2`: the second component has the closed form
/// `Γ(5/2) / (√π (2 − iz)^{5/2})`; the first is integrated here.
fn image_element_oracle(z: HalfPlanePoint) -> [C; 2] {
    let zc = z.as_complex();
    let s = C::new(2.0, 0.0) - C::i() * zc;
    let h2 = 0.75 * PI.sqrt() / (PI.sqrt() * s.powf(2.5));
    let h1 = simpson_sq(
        |t| (C::i() * zc * t).exp() * ((2.0 * t).sqrt() * t * (-t).exp() * (1.0 - (-2.0 * t).exp()).sqrt()),
        80.0 / (1.0 + z.y),
        40_000,
    ) / (2.0 * PI).sqrt();
    [h1, h2]
}

fn criterion_5() -> Outcome {
    let mut fails = Vec::new();
    let a = HalfLineProfile::power_exp(1, 1.0).unwrap();
    let zs = [pt(0.0, 1.0), pt(1.0, 2.0)];
    let coarse = PlaneRule::acceptance();
    let fine = coarse.refined();
    let residuals = |rule: &PlaneRule| -> Vec<f64> {
        reproducing_check(2, &a, &zs, rule)
            .unwrap()
            .iter()
            .map(|r| {
                let [h1, h2] = image_element_oracle(r.z);
                let d = ((r.reproduced[0] - h1).norm_sqr() + (r.reproduced[1] - h2).norm_sqr()).sqrt();
                d / (h1.norm_sqr() + h2.norm_sqr()).sqrt()
            })
            .collect()
    };
    let r0 = residuals(&coarse);
    let r1 = residuals(&fine);
    for i in 0..zs.len() {
        check(&mut fails, r0[i] < 1e-3, || format!("z = {}: residual {:e}", zs[i], r0[i]));
        check(&mut fails, r1[i] < r0[i], || format!("z = {}: refinement {:e} -> {:e}", zs[i], r0[i], r1[i]));
    }
    outcome(
        &fails,
        format!(
            "residuals z=i {:.2e} -> {:.2e}, z=1+2i {:.2e} -> {:.2e}",
            r0[0], r1[0], r0[1], r1[1]
        ),
    )
}

fn state_value(s: &PureState, m: &CMatrix) -> C {
    s.vector().dotc(&(m * s.vector()))
}

fn criterion_6() -> Outcome {
    let mut fails = Vec::new();
    let alpha = 2.0;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let offdiag = |m: &CMatrix| {
        let mut r: f64 = 0.0;
        for j in 0..m.nrows() {
            for k in 0..m.ncols() {
                if j != k {
                    r = r.max(m[(j, k)].norm());
                }
            }
        }
        r
    };
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let n = 2 + i % 4;
        let w = GeneratorWord::random(&mut rng, Alphabet::ProjectionSystem, n, 6).unwrap();
        let m0 = evaluate_word(&w, n, alpha, Point::Zero).unwrap();
        let mi = evaluate_word(&w, n, alpha, Point::Infinity).unwrap();
        let mut d = offdiag(&m0).max(offdiag(&mi));
        for j in 1..n - 1 {
            d = d.max((m0[(j, j)] - mi[(j, j)]).norm());
        }
        worst = worst.max(d);
    }
    check(&mut fails, worst < 1e-10, || format!("projection words outside D_n^(1,n): {worst:e}"));
    let mut worst_t: f64 = 0.0;
    for i in 0..200 {
        let n = 1 + i % 5;
        let w = GeneratorWord::random(&mut rng, Alphabet::ToeplitzSystem, n, 6).unwrap();
        let m0 = evaluate_word(&w, n, alpha, Point::Zero).unwrap();
        let mi = evaluate_word(&w, n, alpha, Point::Infinity).unwrap();
        worst_t = worst_t.max(offdiag(&m0)).max(offdiag(&mi));
    }
    check(&mut fails, worst_t < 1e-10, || format!("Toeplitz words outside D_n: {worst_t:e}"));

    let mut separated = 0;
    let mut longest = 0;
    for (alphabet, ns) in [(Alphabet::ProjectionSystem, 2..=5), (Alphabet::ToeplitzSystem, 1..=5)] {
        let ns: Vec<usize> = ns.collect();
        for i in 0..100 {
            let n = ns[i % ns.len()];
            let (s1, s2) = random_distinct_pair(&mut rng, alphabet, n);
            match separate(&s1, &s2, alphabet, n, alpha, 5) {
                Ok(sep) => {
                    let m1 = evaluate_word(&sep.word, n, alpha, s1.x()).unwrap();
                    let m2 = evaluate_word(&sep.word, n, alpha, s2.x()).unwrap();
                    let gap = (state_value(&s1, &m1) - state_value(&s2, &m2)).norm();
                    longest = longest.max(sep.word.len());
                    if gap > 1e-8 && sep.word.len() <= 5 {
                        separated += 1;
                    } else {
                        fails.push(format!("word {} gives gap {gap:e}", sep.word));
                    }
                }
                Err(e) => fails.push(format!("{alphabet} n = {n}: {e}")),
            }
        }
    }
    let p = GeneratorWord::new(vec![Letter::new(Generator::PGamma)]).unwrap();
    for n in 1..=5 {
        let f0 = state_value(
            &PureState::basis(Point::Zero, 1, n).unwrap(),
            &evaluate_word(&p, n, alpha, Point::Zero).unwrap(),
        );
        let finf = state_value(
            &PureState::basis(Point::Infinity, 1, n).unwrap(),
            &evaluate_word(&p, n, alpha, Point::Infinity).unwrap(),
        );
        let expected0 = if n == 1 { 1.0 } else { 0.0 };
        check(&mut fails, f0 == C::new(expected0, 0.0) && finf == C::new(1.0, 0.0), || {
            format!("n = {n}: f(0,e1) = {f0}, f(inf,e1) = {finf}")
        });
    }
    outcome(
        &fails,
        format!(
            "word defects {worst:.1e}/{worst_t:.1e}, {separated}/200 pairs separated (longest word {longest})"
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut fails = Vec::new();
    let n = 2;
    let f = VectorProfile::new(vec![
        HalfLineProfile::power_exp(1, 1.0).unwrap(),
        HalfLineProfile::power_exp(2, 1.5).unwrap(),
    ])
    .unwrap();
    // ∫ t^{2k} e^{−2rt} dt = (2k)! / (2r)^{2k+1}
    let norm_f = 2.0 / 8.0 + 24.0 / 243.0;
    let a = HalfLineProfile::power_exp(1, 1.0).unwrap();
    let norm_a = 0.25;
    let xs = [0.3, 1.0, 2.5];
    let errors = |rule: &PlaneRule| -> (f64, f64, f64) {
        let field = sample_rn_star(n, &f, rule).unwrap();
        let mut round: f64 = 0.0;
        for &x in &xs {
            let back = apply_rn_sampled(n, &field, x).unwrap();
            let exact = [x * (-x).exp(), x * x * (-1.5 * x).exp()];
            let d = ((back[0] - exact[0]).norm_sqr() + (back[1] - exact[1]).norm_sqr()).sqrt();
            round = round.max(d / (exact[0] * exact[0] + exact[1] * exact[1]).sqrt());
        }
        let iso = ((field.norm_sq() / norm_f).sqrt() - 1.0).abs();
        let image = sample_image_element(n, &a, rule).unwrap();
        let image_iso = ((image.norm_sq() / norm_a).sqrt() - 1.0).abs();
        (round, iso, image_iso)
    };
    let coarse = PlaneRule::acceptance();
    let e0 = errors(&coarse);
    let e1 = errors(&coarse.refined());
    for (name, a, b) in [("round trip", e0.0, e1.0), ("isometry", e0.1, e1.1), ("image isometry", e0.2, e1.2)] {
        check(&mut fails, a < 1e-2, || format!("{name} {a:e}"));
        check(&mut fails, b < a, || format!("{name} did not improve: {a:e} -> {b:e}"));
    }
    outcome(
        &fails,
        format!(
            "round trip {:.2e} -> {:.2e}, isometry {:.2e} -> {:.2e}, image {:.2e} -> {:.2e}",
            e0.0, e1.0, e0.1, e1.1, e0.2, e1.2
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 7] = [
        ("special functions", criterion_1, Duration::from_secs(5)),
        ("spectral functions", criterion_2, Duration::from_secs(30)),
        ("projections", criterion_3, Duration::from_secs(10)),
        ("kernels", criterion_4, Duration::from_secs(60)),
        ("reproducing property", criterion_5, Duration::from_secs(60)),
        ("algebras", criterion_6, Duration::from_secs(60)),
        ("transforms", criterion_7, Duration::from_secs(120)),
    ];
    let mut all = true;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *budget;
        let pass = out.passed && in_time;
        all &= pass;
        println!(
            "{} criterion {} ({name}): {} [{:.2}s of {}s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            out.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if !all {
        std::process::exit(1);
    }
}
