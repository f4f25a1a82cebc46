//! Invariant suites run by `polybergman verify`. Each check records the
//! measured defect next to its tolerance.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebras::{
    evaluate_word, max_abs, membership, pure_state_apply, random_distinct_pair, sample_word, separate, Alphabet, Generator,
    GeneratorWord, Letter, PureState, Separation,
};
use crate::error::{Error, Result};
use crate::io::{format_float, CsvTable};
use crate::kernels::{
    g_kernel, gram_matrix, gram_report, kernel_kgamma, kernel_pt, kernel_pt_oracle, reproducing_check, HalfPlanePoint,
    KGammaMethod,
};
use crate::projections::{generic_position_certificate, p_gamma, q_projection};
use crate::quadrature::{integrate_halfline, GaussLaguerre, HalfLineRule, PlaneRule};
use crate::specfun::{digamma, laguerre_ell_vec, laplace_j, laplace_tj, nielsen_beta, EULER_GAMMA};
use crate::spectral::{
    boundary_limits, gamma_indicator_closed, gamma_matrix, gamma_matrix_quadrature, CompactifiedGrid, Point, MAX_N,
};
use crate::symbols::{canonical_family, VerticalSymbol};
use crate::transforms::{
    apply_rn_sampled, build_image_element, sample_image_element, sample_rn_star, HalfLineProfile, VectorProfile,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Specfun,
    Spectral,
    Projections,
    Kernels,
    Algebras,
    Separation,
    Transforms,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] = [
        Suite::Specfun,
        Suite::Spectral,
        Suite::Projections,
        Suite::Kernels,
        Suite::Algebras,
        Suite::Separation,
        Suite::Transforms,
    ];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Specfun => "specfun",
            Suite::Spectral => "spectral",
            Suite::Projections => "projections",
            Suite::Kernels => "kernels",
            Suite::Algebras => "algebras",
            Suite::Separation => "separation",
            Suite::Transforms => "transforms",
            Suite::All => "all",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.to_string() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// One verified invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}/{}: {:e} (tolerance {:e})",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite,
            self.name,
            self.measured,
            self.tolerance
        )
    }
}

/// Parameters shared by every suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteParams {
    pub n: usize,
    pub alpha: f64,
    pub seed: u64,
    pub plane: PlaneRule,
}

impl Default for SuiteParams {
    fn default() -> Self {
        Self {
            n: 3,
            alpha: 2.0,
            seed: 7,
            plane: PlaneRule::acceptance(),
        }
    }
}

struct Recorder {
    suite: Suite,
    checks: Vec<Check>,
}

impl Recorder {
    fn new(suite: Suite) -> Self {
        Self { suite, checks: Vec::new() }
    }

    /// Passes when `measured ≤ tolerance`.
    fn at_most(&mut self, name: impl Into<String>, measured: f64, tolerance: f64) {
        self.checks.push(Check {
            suite: self.suite,
            name: name.into(),
            measured,
            tolerance,
            passed: measured <= tolerance,
        });
    }

    /// Passes when `measured ≥ bound`.
    fn at_least(&mut self, name: impl Into<String>, measured: f64, bound: f64) {
        self.checks.push(Check {
            suite: self.suite,
            name: name.into(),
            measured,
            tolerance: bound,
            passed: measured >= bound,
        });
    }
}

/// Runs one suite (or every suite for [`Suite::All`]).
pub fn run_suite(suite: Suite, params: &SuiteParams) -> Result<Vec<Check>> {
    if params.n == 0 || params.n > MAX_N {
        return Err(Error::InvalidParameter(format!("n must lie in 1..={MAX_N}, got {}", params.n)));
    }
    match suite {
        Suite::All => {
            let mut all = Vec::new();
            for s in Suite::EACH {
                all.extend(run_suite(s, params)?);
            }
            Ok(all)
        }
        Suite::Specfun => specfun_suite(),
        Suite::Spectral => spectral_suite(params),
        Suite::Projections => projections_suite(params),
        Suite::Kernels => kernels_suite(params),
        Suite::Algebras => algebras_suite(params),
        Suite::Separation => {
            let runs = separation_runs(params, 50)?;
            let mut r = Recorder::new(Suite::Separation);
            let failures = runs.iter().filter(|(_, _, s)| s.is_err()).count();
            r.at_most("random pairs separated with words of length <= 5", failures as f64, 0.0);
            Ok(r.checks)
        }
        Suite::Transforms => transforms_suite(params),
    }
}

/// CSV with columns `suite, check, status, measured, tolerance`.
pub fn checks_table(checks: &[Check]) -> CsvTable {
    let mut t = CsvTable::new(["suite", "check", "status", "measured", "tolerance"]);
    for c in checks {
        t.push(vec![
            c.suite.to_string(),
            c.name.clone(),
            if c.passed { "pass" } else { "fail" }.to_string(),
            format_float(c.measured),
            format_float(c.tolerance),
        ])
        .expect("row width matches header");
    }
    t
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

fn specfun_suite() -> Result<Vec<Check>> {
    let mut r = Recorder::new(Suite::Specfun);
    r.at_most("digamma(1) = -euler_gamma", (digamma(1.0)?.re + EULER_GAMMA).abs(), 1e-12);
    let mut worst: f64 = 0.0;
    for z in [Complex64::new(0.3, 0.0), Complex64::new(2.5, 1.5), Complex64::new(0.7, -4.0)] {
        worst = worst.max((digamma(z + 1.0)? - digamma(z)? - 1.0 / z).norm());
    }
    r.at_most("digamma recurrence", worst, 1e-12);
    r.at_most("beta(1) = ln 2", (nielsen_beta(1.0)?.re - LN_2).abs(), 1e-10);
    r.at_most("beta(1/2) = pi/2", (nielsen_beta(0.5)?.re - PI / 2.0).abs(), 1e-10);
    let j = [(1.0, PI / 4.0), (2.0, 1.0 / 3.0), (4.0, 2.0 / 15.0)];
    let worst = j
        .iter()
        .map(|&(p, v)| laplace_j(p).map(|x| (x.re - v).abs()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    r.at_most("J(1), J(2), J(4) closed forms", worst, 1e-10);
    let mut worst: f64 = 0.0;
    for p in [
        Complex64::new(1.5, 0.0),
        Complex64::new(2.0, 0.0),
        Complex64::new(3.0, 0.0),
        Complex64::new(7.0, 0.0),
        Complex64::new(3.0, 2.0),
    ] {
        let q = integrate_halfline(
            |t| (-p * t).exp() * (t * (-(-2.0 * t).exp_m1()).sqrt()),
            HalfLineRule::default_adaptive(),
            p.re,
        )?;
        worst = worst.max(rel(laplace_tj(p)?, q));
    }
    r.at_most("tJ(p) against quadrature", worst, 1e-8);
    let rule = GaussLaguerre::new(64)?;
    let m = 8;
    let mut gram = DMatrix::<f64>::zeros(m, m);
    for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
        // ∫ ℓ_j ℓ_k dy = ∫ e^{-y} L_j L_k dy
        let ell = laguerre_ell_vec(m, x);
        for j in 0..m {
            for k in 0..m {
                gram[(j, k)] += w * x.exp() * ell[j] * ell[k];
            }
        }
    }
    r.at_most(
        "Laguerre functions orthonormal",
        (gram - DMatrix::identity(m, m)).amax(),
        1e-12,
    );
    Ok(r.checks)
}

fn spectral_suite(p: &SuiteParams) -> Result<Vec<Check>> {
    let mut r = Recorder::new(Suite::Spectral);
    let n = p.n;
    let grid = CompactifiedGrid::log(0.01, 20.0, 60)?;
    let family = canonical_family(n)?;
    let mut closed_vs_quad: f64 = 0.0;
    let mut partition: f64 = 0.0;
    let mut symmetry: f64 = 0.0;
    for &x in grid.interior() {
        let mut sum = 0.0;
        for k in 1..=n {
            let closed = gamma_indicator_closed(k, n, x)?;
            let q = gamma_matrix_quadrature(n, family.member(k)?, x)?;
            closed_vs_quad = closed_vs_quad.max((closed - q.entry(1, 1)).abs());
            symmetry = symmetry.max(q.symmetry_defect());
            sum += closed;
        }
        partition = partition.max((sum - 1.0).abs());
    }
    r.at_most("closed form vs quadrature (canonical family)", closed_vs_quad, 1e-9);
    r.at_most("sum of gamma^{a_k} = 1", partition, 1e-12);
    r.at_most("gamma matrices symmetric", symmetry, 1e-12);
    let mut symbols = vec![VerticalSymbol::a0(p.alpha)?];
    symbols.push(VerticalSymbol::indicator(0.0, 0.5)?);
    symbols.push(VerticalSymbol::indicator(0.2, 1.0)?);
    let mut worst: f64 = 0.0;
    for a in &symbols {
        let (at_zero, at_inf) = boundary_limits(n.min(2), a)?;
        worst = worst.max((gamma_matrix(n.min(2), a, 1e-4)?.entries - at_zero).norm());
        worst = worst.max((gamma_matrix(n.min(2), a, 1e4)?.entries - at_inf).norm());
    }
    r.at_most("boundary limits at x = 1e-4 and 1e4", worst, 5e-4);
    Ok(r.checks)
}

fn projections_suite(p: &SuiteParams) -> Result<Vec<Check>> {
    let mut r = Recorder::new(Suite::Projections);
    let n = p.n;
    let grid = CompactifiedGrid::log(0.01, 100.0, 40)?;
    let (mut idem, mut sym, mut rank): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for &x in grid.interior() {
        let pg = p_gamma(n, Point::Finite(x))?;
        idem = idem.max(pg.idempotency_defect());
        sym = sym.max(pg.symmetry_defect());
        let ev = pg.eigenvalues();
        rank = rank.max(ev.get(1).map_or(0.0, |e| e.abs()));
    }
    r.at_most("P_gamma idempotent", idem, 1e-12);
    r.at_most("P_gamma symmetric", sym, 1e-12);
    r.at_most("P_gamma rank one", rank, 1e-12);
    let zero = (p_gamma(n, Point::Zero)?.entries - q_projection(n, n)?.entries).amax();
    let inf = (p_gamma(n, Point::Infinity)?.entries - q_projection(1, n)?.entries).amax();
    r.at_most("P_gamma(0) = E_nn and P_gamma(inf) = E_11", zero.max(inf), 0.0);
    match generic_position_certificate(n, &grid) {
        Ok(_) => r.at_most("generic position certificate on [0.01, 100]", 0.0, 0.0),
        Err(Error::Certification { .. }) => r.at_most("generic position certificate on [0.01, 100]", 1.0, 0.0),
        Err(e) => return Err(e),
    }
    Ok(r.checks)
}

fn sample_points() -> Vec<HalfPlanePoint> {
    [(0.0, 1.0), (0.5, 0.2), (-1.3, 0.7), (2.0, 1.5), (0.1, 3.0), (-0.4, 0.35)]
        .iter()
        .map(|&(x, y)| HalfPlanePoint { x, y })
        .collect()
}

fn kernels_suite(p: &SuiteParams) -> Result<Vec<Check>> {
    let mut r = Recorder::new(Suite::Kernels);
    let n = p.n;
    let pts = sample_points();
    let (mut oracle, mut herm): (f64, f64) = (0.0, 0.0);
    for &z in &pts[..3] {
        for &w in &pts[3..] {
            let k = kernel_pt(n, z, w)?;
            oracle = oracle.max(k.max_relative_error(&kernel_pt_oracle(n, z, w, HalfLineRule::default_adaptive())?));
            let back = kernel_pt(n, w, z)?;
            herm = herm.max(max_abs(&(k.entries - back.entries.adjoint())));
        }
    }
    r.at_most("closed form vs oracle", oracle, 1e-6);
    r.at_most("Hermitian symmetry", herm, 1e-10);
    let mut bergman: f64 = 0.0;
    for &z in &pts[..3] {
        for &w in &pts[3..] {
            let b = -1.0 / (PI * (z.as_complex() - w.as_complex().conj()).powi(2));
            bergman = bergman.max(rel(kernel_pt(1, z, w)?.entry(1, 1), b));
            bergman = bergman.max(rel(g_kernel(0, z, w), b));
            bergman = bergman.max(rel(kernel_kgamma(1, z, w, KGammaMethod::Quadrature)?, b));
        }
    }
    r.at_most("n = 1 reduces to the Bergman kernel", bergman, 1e-10);
    let g = gram_report(&gram_matrix(n, &pts)?);
    r.at_least("Gram matrix positive semidefinite", g.min_eigenvalue, -1e-10);
    let mut phi: f64 = 0.0;
    for &z in &pts[..2] {
        for &w in &pts[2..] {
            let a = kernel_kgamma(n, z, w, KGammaMethod::Quadrature)?;
            let b = kernel_kgamma(n, z, w, KGammaMethod::PhiRepresentation)?;
            phi = phi.max(rel(b, a));
        }
    }
    r.at_most("phi-representation of K^gamma", phi, 1e-8);
    let a = HalfLineProfile::power_exp(1, 1.0)?;
    let res = reproducing_check(n, &a, &[pts[0]], &p.plane)?;
    r.at_most("reproducing property at z = i", res[0].relative, 1e-3);
    Ok(r.checks)
}

fn random_words(alphabet: Alphabet, p: &SuiteParams, count: usize) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let grid = CompactifiedGrid::log(0.05, 20.0, 8)?.with_endpoints();
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let w = GeneratorWord::random(&mut rng, alphabet, p.n, 6)?;
        let m = membership(&sample_word(&w, p.n, p.alpha, &grid)?, alphabet.algebra(), 1e-10)?;
        worst = worst.max(m.residual);
    }
    Ok(worst)
}

fn algebras_suite(p: &SuiteParams) -> Result<Vec<Check>> {
    let mut r = Recorder::new(Suite::Algebras);
    r.at_most(
        "projection-system words lie in D_n^{1,n}",
        random_words(Alphabet::ProjectionSystem, p, 200)?,
        1e-10,
    );
    r.at_most("toeplitz-system words lie in D_n", random_words(Alphabet::ToeplitzSystem, p, 200)?, 1e-10);
    let n = p.n.max(2);
    let pg = GeneratorWord::new(vec![Letter::new(Generator::PGamma)])?;
    let at_zero = pure_state_apply(&PureState::basis(Point::Zero, 1, n)?, &evaluate_word(&pg, n, p.alpha, Point::Zero)?)?;
    let at_inf = pure_state_apply(
        &PureState::basis(Point::Infinity, 1, n)?,
        &evaluate_word(&pg, n, p.alpha, Point::Infinity)?,
    )?;
    r.at_most(
        "f_{0,e_1}(P_gamma) = 0 and f_{inf,e_1}(P_gamma) = 1",
        at_zero.norm().max((at_inf - 1.0).norm()),
        0.0,
    );
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut gauge: f64 = 0.0;
    for _ in 0..20 {
        let w = GeneratorWord::random(&mut rng, Alphabet::ToeplitzSystem, p.n, 4)?;
        let (s, _) = random_distinct_pair(&mut rng, Alphabet::ToeplitzSystem, p.n);
        let m = evaluate_word(&w, p.n, p.alpha, s.x())?;
        let rotated = PureState::new(s.x(), s.vector() * Complex64::from_polar(1.0, 0.7))?;
        gauge = gauge.max((pure_state_apply(&s, &m)? - pure_state_apply(&rotated, &m)?).norm());
    }
    r.at_most("pure states are gauge invariant", gauge, 1e-14);
    Ok(r.checks)
}

/// Random distinct pure-state pairs and the separating word found for each,
/// over both alphabets (the projection alphabet only for `n ≥ 2`).
pub fn separation_runs(
    p: &SuiteParams,
    pairs_per_alphabet: usize,
) -> Result<Vec<(PureState, PureState, Result<Separation>)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut out = Vec::new();
    let alphabets: &[Alphabet] = if p.n >= 2 {
        &[Alphabet::ProjectionSystem, Alphabet::ToeplitzSystem]
    } else {
        &[Alphabet::ToeplitzSystem]
    };
    for &alphabet in alphabets {
        for _ in 0..pairs_per_alphabet {
            let (s1, s2) = random_distinct_pair(&mut rng, alphabet, p.n);
            let found = separate(&s1, &s2, alphabet, p.n, p.alpha, 5);
            if let Err(e) = &found {
                if !matches!(e, Error::NotSeparable { .. }) {
                    return Err(e.clone());
                }
            }
            out.push((s1, s2, found));
        }
    }
    Ok(out)
}

fn transforms_suite(p: &SuiteParams) -> Result<Vec<Check>> {
    let mut r = Recorder::new(Suite::Transforms);
    let h = build_image_element(1, &HalfLineProfile::power_exp(0, 1.0)?, HalfPlanePoint { x: 0.0, y: 1.0 })?;
    r.at_most("h(i) = 1/(4 sqrt 2) for a = e^{-t}", (h[0] - 0.25 * std::f64::consts::FRAC_1_SQRT_2).norm(), 1e-12);
    let n = p.n;
    let comps = (0..n)
        .map(|k| HalfLineProfile::power_exp(k as u32 + 1, 1.0 + 0.5 * k as f64))
        .collect::<Result<Vec<_>>>()?;
    let f = VectorProfile::new(comps)?;
    let field = sample_rn_star(n, &f, &p.plane)?;
    let mut round: f64 = 0.0;
    for x in [0.3, 1.0, 2.5] {
        let back = apply_rn_sampled(n, &field, x)?;
        let e = f.evaluate(x);
        round = round.max((back - &e).norm() / e.norm());
    }
    r.at_most("R_n R_n^* f = f", round, 1e-2);
    r.at_most("R_n^* isometric", (field.norm_sq() / f.norm_sq()? - 1.0).abs(), 1e-2);
    let a = HalfLineProfile::power_exp(1, 1.0)?;
    let img = sample_image_element(n, &a, &p.plane)?;
    r.at_most("image elements keep the norm of a", (img.norm_sq() / a.norm_sq()? - 1.0).abs(), 1e-2);
    Ok(r.checks)
}
