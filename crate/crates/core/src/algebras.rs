//! Sampled matrix-valued functions on `[0, ∞]`, the algebras `D_n`,
//! `D_n^{1,n}`, `D_n^{ℂI}`, generator words, pure states and separation.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::io::{format_float, CsvTable};
use crate::projections::{p_gamma, q_projection};
use crate::spectral::{gamma_a0_matrix, CompactifiedGrid, Point};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Default gap a separating word must exceed.
pub const SEPARATION_THRESHOLD: f64 = 1e-8;

fn to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|v| Complex64::new(v, 0.0))
}

/// An `n×n` matrix function sampled on a [`CompactifiedGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledMatrixFunction {
    n: usize,
    grid: CompactifiedGrid,
    values: Vec<CMatrix>,
}

impl SampledMatrixFunction {
    /// `values` must follow `grid.points()` order.
    pub fn new(n: usize, grid: CompactifiedGrid, values: Vec<CMatrix>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Dimension {
                expected: grid.len(),
                got: values.len(),
            });
        }
        for v in &values {
            if v.nrows() != n || v.ncols() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: v.nrows().max(v.ncols()),
                });
            }
            if v.iter().any(|z| !z.is_finite()) {
                return Err(Error::InvalidParameter("sampled values must be finite".into()));
            }
        }
        Ok(Self { n, grid, values })
    }

    pub fn from_fn(
        n: usize,
        grid: &CompactifiedGrid,
        f: impl Fn(Point) -> Result<CMatrix>,
    ) -> Result<Self> {
        let values = grid.points().into_iter().map(f).collect::<Result<Vec<_>>>()?;
        Self::new(n, grid.clone(), values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grid(&self) -> &CompactifiedGrid {
        &self.grid
    }

    pub fn values(&self) -> &[CMatrix] {
        &self.values
    }

    pub fn at_zero(&self) -> Result<&CMatrix> {
        if self.grid.includes_zero() {
            Ok(&self.values[0])
        } else {
            Err(Error::MissingEndpoint("zero"))
        }
    }

    pub fn at_infinity(&self) -> Result<&CMatrix> {
        if self.grid.includes_infinity() {
            Ok(&self.values[self.values.len() - 1])
        } else {
            Err(Error::MissingEndpoint("infinity"))
        }
    }
}

/// The three algebras of matrix functions on `[0, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algebra {
    /// `M(0)`, `M(∞)` diagonal.
    D,
    /// Additionally `M_jj(0) = M_jj(∞)` for `2 ≤ j ≤ n − 1`.
    D1n,
    /// `M(0) = M(∞) ∈ ℂI`.
    DCI,
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algebra::D => "D_n",
            Algebra::D1n => "D_n^{1,n}",
            Algebra::DCI => "D_n^{CI}",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Membership {
    pub member: bool,
    pub residual: f64,
}

fn offdiag_max(m: &CMatrix) -> f64 {
    let mut r: f64 = 0.0;
    for j in 0..m.nrows() {
        for k in 0..m.ncols() {
            if j != k {
                r = r.max(m[(j, k)].norm());
            }
        }
    }
    r
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc: f64, z| acc.max(z.norm()))
}

/// Max-norm distance from `m` to the scalar matrices.
fn scalar_distance(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mean = m.trace() / n as f64;
    let mut r = offdiag_max(m);
    for j in 0..n {
        r = r.max((m[(j, j)] - mean).norm());
    }
    r
}

/// Checks the endpoint conditions of `algebra`; `residual` is the largest violation.
pub fn membership(m: &SampledMatrixFunction, algebra: Algebra, tol: f64) -> Result<Membership> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let (m0, minf) = (m.at_zero()?, m.at_infinity()?);
    let n = m.n();
    let residual = match algebra {
        Algebra::D => offdiag_max(m0).max(offdiag_max(minf)),
        Algebra::D1n => {
            let mut r = offdiag_max(m0).max(offdiag_max(minf));
            for j in 1..n.saturating_sub(1) {
                r = r.max((m0[(j, j)] - minf[(j, j)]).norm());
            }
            r
        }
        Algebra::DCI => scalar_distance(m0)
            .max(scalar_distance(minf))
            .max(max_abs(&(m0 - minf))),
    };
    Ok(Membership {
        member: residual <= tol,
        residual,
    })
}

/// Generators of the two algebras.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    PGamma,
    /// `Q_j`, 1-based.
    Q(usize),
    /// `γ^{n,a_0}`.
    GammaA0,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: Generator,
    pub adjoint: bool,
}

impl Letter {
    pub fn new(generator: Generator) -> Self {
        Self {
            generator,
            adjoint: false,
        }
    }

    /// Value of the letter at `x`.
    pub fn value(&self, n: usize, alpha: f64, x: Point) -> Result<CMatrix> {
        let m = match self.generator {
            Generator::PGamma => to_complex(&p_gamma(n, x)?.entries),
            Generator::Q(j) => to_complex(&q_projection(j, n)?.entries),
            Generator::GammaA0 => match x {
                Point::Zero => CMatrix::zeros(n, n),
                Point::Infinity => CMatrix::identity(n, n),
                Point::Finite(x) => to_complex(&gamma_a0_matrix(n, alpha, x)?.entries),
            },
        };
        Ok(if self.adjoint { m.adjoint() } else { m })
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.generator {
            Generator::PGamma => f.write_str("P")?,
            Generator::Q(j) => write!(f, "Q{j}")?,
            Generator::GammaA0 => f.write_str("G")?,
        }
        if self.adjoint {
            f.write_str("'")?;
        }
        Ok(())
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (body, adjoint) = match s.strip_suffix('\'') {
            Some(b) => (b, true),
            None => (s, false),
        };
        let generator = match body {
            "P" => Generator::PGamma,
            "G" => Generator::GammaA0,
            _ => match body.strip_prefix('Q').map(str::parse::<usize>) {
                Some(Ok(j)) if j >= 1 => Generator::Q(j),
                _ => return Err(Error::Parse(format!("unknown letter {s:?}"))),
            },
        };
        Ok(Self { generator, adjoint })
    }
}

/// Generator alphabets: `{P_γ, Q_j}` and `{γ^{n,a_0}, Q_j}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alphabet {
    ProjectionSystem,
    ToeplitzSystem,
}

impl Alphabet {
    pub fn letters(&self, n: usize) -> Vec<Letter> {
        let head = match self {
            Alphabet::ProjectionSystem => Generator::PGamma,
            Alphabet::ToeplitzSystem => Generator::GammaA0,
        };
        std::iter::once(head)
            .chain((1..=n).map(Generator::Q))
            .map(Letter::new)
            .collect()
    }

    /// The algebra the alphabet generates.
    pub fn algebra(&self) -> Algebra {
        match self {
            Alphabet::ProjectionSystem => Algebra::D1n,
            Alphabet::ToeplitzSystem => Algebra::D,
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Alphabet::ProjectionSystem => "projection-system",
            Alphabet::ToeplitzSystem => "toeplitz-system",
        })
    }
}

impl FromStr for Alphabet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "projection-system" | "projection" => Ok(Alphabet::ProjectionSystem),
            "toeplitz-system" | "toeplitz" => Ok(Alphabet::ToeplitzSystem),
            _ => Err(Error::Parse(format!("unknown alphabet {s:?}"))),
        }
    }
}

/// A nonempty product of generators, read left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorWord {
    letters: Vec<Letter>,
}

impl GeneratorWord {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidParameter("a word needs at least one letter".into()));
        }
        Ok(Self { letters })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// A uniformly random word of length `1..=max_len` over `alphabet`.
    pub fn random(rng: &mut impl Rng, alphabet: Alphabet, n: usize, max_len: usize) -> Result<Self> {
        if max_len == 0 {
            return Err(Error::InvalidParameter("max_len must be positive".into()));
        }
        let letters = alphabet.letters(n);
        let len = rng.random_range(1..=max_len);
        Self::new(
            (0..len)
                .map(|_| {
                    let mut l = letters[rng.random_range(0..letters.len())];
                    l.adjoint = rng.random_bool(0.5);
                    l
                })
                .collect(),
        )
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for GeneratorWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(s.split('*').map(|p| p.trim().parse()).collect::<Result<Vec<_>>>()?)
    }
}

fn check_letters(w: &GeneratorWord, n: usize) -> Result<()> {
    for l in w.letters() {
        if let Generator::Q(j) = l.generator {
            if j == 0 || j > n {
                return Err(Error::InvalidParameter(format!(
                    "alphabet mismatch: letter {l} does not exist for n = {n}"
                )));
            }
        }
    }
    Ok(())
}

/// Left-to-right product of the letter values at `x`.
pub fn evaluate_word(w: &GeneratorWord, n: usize, alpha: f64, x: Point) -> Result<CMatrix> {
    check_letters(w, n)?;
    let mut acc = CMatrix::identity(n, n);
    for l in w.letters() {
        acc *= l.value(n, alpha, x)?;
    }
    Ok(acc)
}

/// The word sampled on every point of `grid`.
pub fn sample_word(
    w: &GeneratorWord,
    n: usize,
    alpha: f64,
    grid: &CompactifiedGrid,
) -> Result<SampledMatrixFunction> {
    SampledMatrixFunction::from_fn(n, grid, |x| evaluate_word(w, n, alpha, x))
}

/// A vector state `f_{x,v}(M) = ⟨M(x) v, v⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    x: Point,
    v: CVector,
}

impl PureState {
    /// `v` must be a unit vector; at the endpoints it must be a unimodular
    /// multiple of a basis vector.
    pub fn new(x: Point, v: CVector) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::InvalidState("empty vector".into()));
        }
        if let Point::Finite(t) = x {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidState(format!("x must be positive, got {t}")));
            }
        }
        let norm = v.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("vector norm is {norm}, expected 1")));
        }
        if x.is_endpoint() {
            let big = v.iter().filter(|z| z.norm() > 1e-12).count();
            if big != 1 {
                return Err(Error::InvalidState(format!(
                    "at the endpoint {x} only basis vectors define pure states"
                )));
            }
        }
        Ok(Self { x, v })
    }

    /// The state at `x` given by the basis vector `e_j` (1-based).
    pub fn basis(x: Point, j: usize, n: usize) -> Result<Self> {
        if j == 0 || j > n {
            return Err(Error::IndexOutOfRange { index: j, n });
        }
        let mut v = CVector::zeros(n);
        v[j - 1] = Complex64::new(1.0, 0.0);
        Self::new(x, v)
    }

    pub fn x(&self) -> Point {
        self.x
    }

    pub fn vector(&self) -> &CVector {
        &self.v
    }

    pub fn n(&self) -> usize {
        self.v.len()
    }

    /// Same state: same point and vectors equal up to a unimodular factor.
    pub fn same_state(&self, other: &PureState) -> bool {
        self.x == other.x && self.n() == other.n() && (self.v.dotc(&other.v).norm() - 1.0).abs() < 1e-12
    }
}

/// `⟨M v, v⟩`.
pub fn pure_state_apply(s: &PureState, m: &CMatrix) -> Result<Complex64> {
    let n = s.n();
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::Dimension {
            expected: n,
            got: m.nrows(),
        });
    }
    Ok(s.v.dotc(&(m * &s.v)))
}

/// A word found by [`separate`] and the gap it achieves.
#[derive(Debug, Clone, PartialEq)]
pub struct Separation {
    pub word: GeneratorWord,
    pub gap: f64,
}

/// Searches words by increasing length; at the first length where some word
/// separates the states by more than [`SEPARATION_THRESHOLD`], returns the
/// word of that length with the largest gap.
pub fn separate(
    s1: &PureState,
    s2: &PureState,
    alphabet: Alphabet,
    n: usize,
    alpha: f64,
    max_len: usize,
) -> Result<Separation> {
    if s1.n() != n || s2.n() != n {
        return Err(Error::Dimension {
            expected: n,
            got: if s1.n() != n { s1.n() } else { s2.n() },
        });
    }
    if s1.same_state(s2) {
        return Err(Error::InvalidState("the two states coincide".into()));
    }
    if max_len == 0 {
        return Err(Error::InvalidParameter("max_len must be positive".into()));
    }
    let letters = alphabet.letters(n);
    let at1: Vec<CMatrix> = letters
        .iter()
        .map(|l| l.value(n, alpha, s1.x))
        .collect::<Result<_>>()?;
    let at2: Vec<CMatrix> = letters
        .iter()
        .map(|l| l.value(n, alpha, s2.x))
        .collect::<Result<_>>()?;

    // frontier of (word indices, product at x1 applied to v1, product at x2 applied to v2);
    // f(w) = v^H W v, so carrying W v from the right keeps every step a matrix-vector product
    let mut frontier: Vec<(Vec<usize>, CVector, CVector)> =
        vec![(Vec::new(), s1.v.clone(), s2.v.clone())];
    let mut best_gap: f64 = 0.0;
    for _len in 1..=max_len {
        let mut next = Vec::with_capacity(frontier.len() * letters.len());
        let mut best: Option<(Vec<usize>, f64)> = None;
        for (word, w1, w2) in &frontier {
            for i in 0..letters.len() {
                let u1 = &at1[i] * w1;
                let u2 = &at2[i] * w2;
                // the new letter is prepended: W' = A_i W
                let gap = (s1.v.dotc(&u1) - s2.v.dotc(&u2)).norm();
                let mut idx = Vec::with_capacity(word.len() + 1);
                idx.push(i);
                idx.extend_from_slice(word);
                if best.as_ref().is_none_or(|(_, g)| gap > *g) {
                    best = Some((idx.clone(), gap));
                }
                next.push((idx, u1, u2));
            }
        }
        if let Some((idx, gap)) = best {
            best_gap = best_gap.max(gap);
            if gap > SEPARATION_THRESHOLD {
                let word = GeneratorWord::new(idx.into_iter().map(|i| letters[i]).collect())?;
                return Ok(Separation { word, gap });
            }
        }
        frontier = next;
    }
    Err(Error::NotSeparable { max_len, best_gap })
}

/// Whether `(s1, s2)` define the same state on the algebra generated by
/// `alphabet`. Besides literal equality this covers the identification
/// `f_{0,e_j} = f_{∞,e_j}` for `2 ≤ j ≤ n − 1` in `D_n^{1,n}`, and the
/// degenerate case `n = 1`, where `P_γ = Q_1 = 1` generate only the scalars.
pub fn equivalent_on(alphabet: Alphabet, s1: &PureState, s2: &PureState) -> bool {
    if s1.same_state(s2) {
        return true;
    }
    if alphabet == Alphabet::ProjectionSystem && s1.n() == 1 {
        return true;
    }
    if alphabet.algebra() != Algebra::D1n || !(s1.x.is_endpoint() && s2.x.is_endpoint()) {
        return false;
    }
    let n = s1.n();
    let index = |s: &PureState| s.v.iter().position(|z| z.norm() > 0.5);
    match (index(s1), index(s2)) {
        (Some(a), Some(b)) => a == b && a >= 1 && a + 2 <= n,
        _ => false,
    }
}

fn random_unit(rng: &mut impl Rng, n: usize) -> CVector {
    loop {
        let v = CVector::from_fn(n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let norm = v.norm();
        if norm > 1e-3 {
            return v / Complex64::new(norm, 0.0);
        }
    }
}

/// A random pure state: an endpoint with probability 1/4 each, otherwise an
/// interior point in `[0.05, 5]` with a random unit vector.
pub fn random_pure_state(rng: &mut impl Rng, n: usize) -> PureState {
    let pick = rng.random_range(0..4);
    let x = match pick {
        0 => Point::Zero,
        1 => Point::Infinity,
        _ => Point::Finite(rng.random_range(0.05..5.0)),
    };
    if x.is_endpoint() {
        PureState::basis(x, rng.random_range(1..=n), n).expect("index in range")
    } else {
        PureState::new(x, random_unit(rng, n)).expect("unit vector")
    }
}

/// A random pair of states that are distinct on the algebra generated by `alphabet`.
pub fn random_distinct_pair(rng: &mut impl Rng, alphabet: Alphabet, n: usize) -> (PureState, PureState) {
    loop {
        let s1 = random_pure_state(rng, n);
        // sometimes reuse the point, so same-point pairs are exercised
        let s2 = if rng.random_bool(0.25) && !s1.x.is_endpoint() {
            PureState::new(s1.x, random_unit(rng, n)).expect("unit vector")
        } else {
            random_pure_state(rng, n)
        };
        if !equivalent_on(alphabet, &s1, &s2) {
            return (s1, s2);
        }
    }
}

/// CSV of separation results: `state1, state2, word, gap`.
pub fn separation_table(results: &[(PureState, PureState, Result<Separation>)]) -> CsvTable {
    let describe = |s: &PureState| {
        let v: Vec<String> = s
            .v
            .iter()
            .map(|z| {
                let sign = if z.im.is_sign_negative() { "" } else { "+" };
                format!("{}{sign}{}i", format_float(z.re), format_float(z.im))
            })
            .collect();
        format!("({}; {})", s.x, v.join(" "))
    };
    let mut t = CsvTable::new(["state1", "state2", "word", "gap"]);
    for (s1, s2, r) in results {
        let (word, gap) = match r {
            Ok(sep) => (sep.word.to_string(), format_float(sep.gap)),
            Err(Error::NotSeparable { best_gap, .. }) => ("none".into(), format_float(*best_gap)),
            Err(e) => (format!("error: {e}"), String::new()),
        };
        t.push(vec![describe(s1), describe(s2), word, gap])
            .expect("row width matches header");
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::gamma_indicator_closed;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid() -> CompactifiedGrid {
        CompactifiedGrid::log(0.01, 50.0, 20).unwrap().with_endpoints()
    }

    fn word(s: &str) -> GeneratorWord {
        s.parse().unwrap()
    }

    #[test]
    fn membership_examples() {
        let g = grid();
        for n in [1, 2, 4] {
            let id = SampledMatrixFunction::from_fn(n, &g, |_| Ok(CMatrix::identity(n, n))).unwrap();
            for alg in [Algebra::D, Algebra::D1n, Algebra::DCI] {
                let m = membership(&id, alg, 1e-12).unwrap();
                assert!(m.member && m.residual == 0.0);
            }
        }
        let p = sample_word(&word("P"), 3, 2.0, &g).unwrap();
        let m = membership(&p, Algebra::D1n, 1e-12).unwrap();
        assert!(m.member && m.residual == 0.0);
        assert!(!membership(&p, Algebra::DCI, 1e-12).unwrap().member);
        let g0 = sample_word(&word("G"), 3, 2.0, &g).unwrap();
        assert!(membership(&g0, Algebra::D, 1e-12).unwrap().member);
        assert!(!membership(&g0, Algebra::DCI, 1e-12).unwrap().member);
        let no_ends = CompactifiedGrid::log(0.1, 1.0, 3).unwrap();
        let f = SampledMatrixFunction::from_fn(2, &no_ends, |_| Ok(CMatrix::identity(2, 2))).unwrap();
        assert!(matches!(membership(&f, Algebra::D, 1e-9), Err(Error::MissingEndpoint(_))));
    }

    #[test]
    fn word_examples() {
        let n = 3;
        for j in 1..=n {
            let q = evaluate_word(&word(&format!("Q{j}")), n, 2.0, Point::Finite(0.4)).unwrap();
            assert_eq!(q, to_complex(&q_projection(j, n).unwrap().entries));
        }
        let x = 0.7;
        let m = evaluate_word(&word("Q1*P*Q3"), n, 2.0, Point::Finite(x)).unwrap();
        let expected = (gamma_indicator_closed(1, n, x).unwrap() * gamma_indicator_closed(3, n, x).unwrap()).sqrt();
        assert!((m[(0, 2)].re - expected).abs() < 1e-15);
        assert!(m.iter().enumerate().all(|(i, z)| i == 6 || z.norm() == 0.0));
        let p = evaluate_word(&word("P"), n, 2.0, Point::Finite(x)).unwrap();
        let pp = evaluate_word(&word("P*P'"), n, 2.0, Point::Finite(x)).unwrap();
        assert!(max_abs(&(p - pp)) < 1e-15);
        assert!(evaluate_word(&word("Q4"), 3, 2.0, Point::Zero).is_err());
        assert_eq!(word("Q1*P*G'").to_string(), "Q1*P*G'");
        assert!("".parse::<GeneratorWord>().is_err());
    }

    #[test]
    fn pure_state_examples() {
        let n = 3;
        let s0 = PureState::basis(Point::Zero, 1, n).unwrap();
        let sinf = PureState::basis(Point::Infinity, 1, n).unwrap();
        let p0 = evaluate_word(&word("P"), n, 2.0, Point::Zero).unwrap();
        let pinf = evaluate_word(&word("P"), n, 2.0, Point::Infinity).unwrap();
        assert_eq!(pure_state_apply(&s0, &p0).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(pure_state_apply(&sinf, &pinf).unwrap(), Complex64::new(1.0, 0.0));
        let v = CVector::from_vec(vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8), Complex64::new(0.0, 0.0)]);
        let s = PureState::new(Point::Finite(1.0), v.clone()).unwrap();
        assert!((pure_state_apply(&s, &CMatrix::identity(3, 3)).unwrap().re - 1.0).abs() < 1e-15);
        assert!(PureState::new(Point::Zero, v).is_err());
        assert!(PureState::new(Point::Finite(1.0), CVector::from_element(2, Complex64::new(1.0, 0.0))).is_err());
        assert!(pure_state_apply(&s, &CMatrix::identity(2, 2)).is_err());
    }

    #[test]
    fn separation_examples() {
        let n = 3;
        let s0 = PureState::basis(Point::Zero, 1, n).unwrap();
        let sinf = PureState::basis(Point::Infinity, 1, n).unwrap();
        let sep = separate(&s0, &sinf, Alphabet::ProjectionSystem, n, 2.0, 5).unwrap();
        assert_eq!(sep.word.to_string(), "P");
        assert!((sep.gap - 1.0).abs() < 1e-15);

        let a = PureState::basis(Point::Finite(0.5), 1, n).unwrap();
        let b = PureState::basis(Point::Finite(0.5), 2, n).unwrap();
        for alphabet in [Alphabet::ProjectionSystem, Alphabet::ToeplitzSystem] {
            let sep = separate(&a, &b, alphabet, n, 2.0, 5).unwrap();
            assert_eq!(sep.word.len(), 1);
            assert!((sep.gap - 1.0).abs() < 1e-12);
        }

        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut v = CVector::zeros(n);
        v[0] = h;
        v[n - 1] = h;
        let s1 = PureState::new(Point::Finite(1.0), v.clone()).unwrap();
        let s2 = PureState::new(Point::Finite(2.0), v).unwrap();
        let sep = separate(&s1, &s2, Alphabet::ProjectionSystem, n, 2.0, 5).unwrap();
        let bound = 0.5 * (gamma_indicator_closed(n, n, 1.0).unwrap() - gamma_indicator_closed(n, n, 2.0).unwrap());
        assert!(sep.gap >= bound, "{} < {bound}", sep.gap);

        // f_{0,e_2} and f_{∞,e_2} agree on D_3^{1,3}
        let m0 = PureState::basis(Point::Zero, 2, n).unwrap();
        let minf = PureState::basis(Point::Infinity, 2, n).unwrap();
        assert!(equivalent_on(Alphabet::ProjectionSystem, &m0, &minf));
        assert!(matches!(
            separate(&m0, &minf, Alphabet::ProjectionSystem, n, 2.0, 4),
            Err(Error::NotSeparable { .. })
        ));
        assert!(separate(&m0, &minf, Alphabet::ToeplitzSystem, n, 2.0, 4).is_ok());
        assert!(separate(&a, &a, Alphabet::ToeplitzSystem, n, 2.0, 4).is_err());
    }

    #[test]
    fn random_pairs_separate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=4 {
            for alphabet in [Alphabet::ProjectionSystem, Alphabet::ToeplitzSystem] {
                if n == 1 && alphabet == Alphabet::ProjectionSystem {
                    continue;
                }
                for _ in 0..5 {
                    let (s1, s2) = random_distinct_pair(&mut rng, alphabet, n);
                    let sep = separate(&s1, &s2, alphabet, n, 2.0, 5);
                    assert!(sep.is_ok(), "{s1:?} {s2:?} {sep:?}");
                }
            }
        }
    }
}
