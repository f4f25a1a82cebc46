//! The projection system `P_γ = M_n M_n^t`, `Q_1, …, Q_n`, and a pointwise
//! certificate of generic position.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::io::{format_float, CsvTable};
use crate::spectral::{gamma_indicator_closed, ln_gamma_indicator_closed, CompactifiedGrid, Point};

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    Ok(())
}

/// `M_n(x) = (√γ^{a_1}(x), …, √γ^{a_n}(x))^t` for `x > 0`.
pub fn m_vector(n: usize, x: f64) -> Result<DVector<f64>> {
    check_n(n)?;
    let mut v = DVector::zeros(n);
    for k in 1..=n {
        v[k - 1] = gamma_indicator_closed(k, n, x)?.sqrt();
    }
    Ok(v)
}

/// `M_n` as a unit-vector field on `[0, ∞]`, with `M_n(0) = e_n` and `M_n(∞) = e_1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnitVectorField {
    n: usize,
}

impl UnitVectorField {
    pub fn new(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn endpoint_zero(&self) -> DVector<f64> {
        let mut e = DVector::zeros(self.n);
        e[self.n - 1] = 1.0;
        e
    }

    pub fn endpoint_infinity(&self) -> DVector<f64> {
        let mut e = DVector::zeros(self.n);
        e[0] = 1.0;
        e
    }

    pub fn evaluate(&self, x: Point) -> Result<DVector<f64>> {
        match x {
            Point::Zero => Ok(self.endpoint_zero()),
            Point::Infinity => Ok(self.endpoint_infinity()),
            Point::Finite(x) => m_vector(self.n, x),
        }
    }
}

/// A real symmetric matrix expected to be an orthogonal projection.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionMatrix {
    pub entries: DMatrix<f64>,
}

impl ProjectionMatrix {
    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    /// `‖P² − P‖_F`.
    pub fn idempotency_defect(&self) -> f64 {
        (&self.entries * &self.entries - &self.entries).norm()
    }

    /// `‖P − P^t‖_F`.
    pub fn symmetry_defect(&self) -> f64 {
        (&self.entries - self.entries.transpose()).norm()
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }

    /// Eigenvalues sorted by decreasing magnitude.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let sym = (&self.entries + self.entries.transpose()) * 0.5;
        let mut ev: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
        ev
    }
}

/// `P_γ(x) = M_n(x) M_n(x)^t`; `P_γ(0) = E_nn`, `P_γ(∞) = E_11`.
pub fn p_gamma(n: usize, x: Point) -> Result<ProjectionMatrix> {
    let m = UnitVectorField::new(n)?.evaluate(x)?;
    Ok(ProjectionMatrix {
        entries: &m * m.transpose(),
    })
}

/// `Q_j = E_jj`.
pub fn q_projection(j: usize, n: usize) -> Result<ProjectionMatrix> {
    check_n(n)?;
    if j == 0 || j > n {
        return Err(Error::IndexOutOfRange { index: j, n });
    }
    let mut e = DMatrix::zeros(n, n);
    e[(j - 1, j - 1)] = 1.0;
    Ok(ProjectionMatrix { entries: e })
}

/// One row of the certificate: `ln γ^{a_k}(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginRow {
    pub x: f64,
    pub k: usize,
    pub ln_margin: f64,
}

/// Outcome of [`generic_position_certificate`].
#[derive(Debug, Clone, PartialEq)]
pub struct GenericPositionReport {
    pub n: usize,
    pub rows: Vec<MarginRow>,
    /// Smallest `ln γ^{a_k}(x)` over the grid, with its location.
    pub min_ln_margin: f64,
    pub argmin: (f64, usize),
    /// Largest `|‖M_n(x)‖ − 1|` over the grid.
    pub max_norm_defect: f64,
}

impl GenericPositionReport {
    /// The minimal margin as a plain number; may underflow to `0` even though
    /// the certificate passed in log space.
    pub fn min_margin(&self) -> f64 {
        self.min_ln_margin.exp()
    }

    /// CSV with columns `x, k, log_margin, margin`.
    pub fn to_table(&self) -> CsvTable {
        let mut t = CsvTable::new(["x", "k", "log_margin", "margin"]);
        for r in &self.rows {
            t.push(vec![
                format_float(r.x),
                r.k.to_string(),
                format_float(r.ln_margin),
                format_float(r.ln_margin.exp()),
            ])
            .expect("row width matches header");
        }
        t
    }
}

/// Norm defect tolerated by the certificate.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Checks at every interior grid point that every `γ^{a_k}(x) > 0` (in log
/// space) and that `‖M_n(x)‖ = 1`. Endpoints of the grid are ignored.
pub fn generic_position_certificate(n: usize, grid: &CompactifiedGrid) -> Result<GenericPositionReport> {
    check_n(n)?;
    let per_point: Vec<Result<(Vec<MarginRow>, f64)>> = grid
        .interior()
        .par_iter()
        .map(|&x| {
            let mut rows = Vec::with_capacity(n);
            let mut sum = 0.0;
            for k in 1..=n {
                let ln_margin = ln_gamma_indicator_closed(k, n, x)?;
                if !ln_margin.is_finite() {
                    return Err(Error::Certification {
                        x,
                        k,
                        reason: "gamma is not strictly positive".into(),
                    });
                }
                sum += ln_margin.exp();
                rows.push(MarginRow { x, k, ln_margin });
            }
            let defect = (sum.sqrt() - 1.0).abs();
            if defect > NORM_TOLERANCE {
                return Err(Error::Certification {
                    x,
                    k: 0,
                    reason: format!("|M_n(x)| deviates from 1 by {defect:e}"),
                });
            }
            Ok((rows, defect))
        })
        .collect();
    let mut rows = Vec::with_capacity(n * grid.interior().len());
    let mut max_norm_defect: f64 = 0.0;
    for r in per_point {
        let (r, d) = r?;
        rows.extend(r);
        max_norm_defect = max_norm_defect.max(d);
    }
    let worst = rows
        .iter()
        .min_by(|a, b| a.ln_margin.total_cmp(&b.ln_margin))
        .copied()
        .expect("grid interior is nonempty");
    Ok(GenericPositionReport {
        n,
        min_ln_margin: worst.ln_margin,
        argmin: (worst.x, worst.k),
        rows,
        max_norm_defect,
    })
}
