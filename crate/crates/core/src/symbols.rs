//! Vertical symbols `a(Im z)` with limits at `0` and `+∞`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

type SymbolFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Closed-form tag of a symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SymbolKind {
    /// `χ_[c,d)`, with `d = None` for `[c, ∞)`.
    Indicator { c: f64, d: Option<f64> },
    Constant(f64),
    General,
}

/// A bounded function of `y = Im z` with declared one-sided limits.
#[derive(Clone)]
pub struct VerticalSymbol {
    kind: SymbolKind,
    func: Option<SymbolFn>,
    limit_zero: f64,
    limit_infinity: f64,
    bound: f64,
    breakpoints: Vec<f64>,
}

impl fmt::Debug for VerticalSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VerticalSymbol")
            .field("kind", &self.kind)
            .field("limit_zero", &self.limit_zero)
            .field("limit_infinity", &self.limit_infinity)
            .field("bound", &self.bound)
            .finish()
    }
}

impl VerticalSymbol {
    /// `χ_[c,d)`; pass `f64::INFINITY` for `d` to get `χ_[c,∞)`.
    pub fn indicator(c: f64, d: f64) -> Result<Self> {
        if !(c >= 0.0 && c.is_finite() && d > c) || d.is_nan() {
            return Err(Error::InvalidInterval { c, d });
        }
        let d = d.is_finite().then_some(d);
        Ok(Self {
            kind: SymbolKind::Indicator { c, d },
            func: None,
            limit_zero: if c == 0.0 { 1.0 } else { 0.0 },
            limit_infinity: if d.is_none() { 1.0 } else { 0.0 },
            bound: 1.0,
            breakpoints: [Some(c).filter(|&c| c > 0.0), d].into_iter().flatten().collect(),
        })
    }

    /// The symbol `a_0 = χ_[0, α/2)`.
    pub fn a0(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
        }
        Self::indicator(0.0, 0.5 * alpha)
    }

    pub fn constant(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::InvalidParameter(format!("constant symbol must be finite, got {value}")));
        }
        Ok(Self {
            kind: SymbolKind::Constant(value),
            func: None,
            limit_zero: value,
            limit_infinity: value,
            bound: value.abs(),
            breakpoints: Vec::new(),
        })
    }

    /// A piecewise-continuous symbol with user-declared limits. `breakpoints`
    /// lists the jump locations in `y`; quadrature splits there.
    pub fn general(
        func: impl Fn(f64) -> f64 + Send + Sync + 'static,
        limit_zero: f64,
        limit_infinity: f64,
        bound: f64,
        mut breakpoints: Vec<f64>,
    ) -> Result<Self> {
        if !(limit_zero.is_finite() && limit_infinity.is_finite() && bound.is_finite()) {
            return Err(Error::InvalidParameter("symbol limits and bound must be finite".into()));
        }
        if limit_zero.abs() > bound || limit_infinity.abs() > bound {
            return Err(Error::InvalidParameter(format!(
                "limits ({limit_zero}, {limit_infinity}) exceed declared bound {bound}"
            )));
        }
        if breakpoints.iter().any(|b| !(b.is_finite() && *b > 0.0)) {
            return Err(Error::InvalidParameter("breakpoints must be positive and finite".into()));
        }
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup();
        Ok(Self {
            kind: SymbolKind::General,
            func: Some(Arc::new(func)),
            limit_zero,
            limit_infinity,
            bound,
            breakpoints,
        })
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    pub fn evaluate(&self, y: f64) -> f64 {
        match (&self.kind, &self.func) {
            (SymbolKind::Indicator { c, d }, _) => {
                if y >= *c && d.is_none_or(|d| y < d) {
                    1.0
                } else {
                    0.0
                }
            }
            (SymbolKind::Constant(v), _) => *v,
            (SymbolKind::General, Some(f)) => f(y),
            (SymbolKind::General, None) => unreachable!("general symbols always carry a function"),
        }
    }

    /// `(a^0, a^{+∞})`.
    pub fn limits(&self) -> (f64, f64) {
        (self.limit_zero, self.limit_infinity)
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// `(inf a, sup a)` as far as it is known: exact for indicators and
    /// constants, `±bound` otherwise.
    pub fn range(&self) -> (f64, f64) {
        match self.kind {
            SymbolKind::Indicator { c, d } => {
                if c == 0.0 && d.is_none() {
                    (1.0, 1.0)
                } else {
                    (0.0, 1.0)
                }
            }
            SymbolKind::Constant(v) => (v, v),
            SymbolKind::General => (-self.bound, self.bound),
        }
    }

    /// Jump locations in `y`, sorted.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }
}

impl fmt::Display for VerticalSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SymbolKind::Indicator { c, d: Some(d) } => write!(f, "indicator:{c}:{d}"),
            SymbolKind::Indicator { c, d: None } => write!(f, "indicator:{c}:inf"),
            SymbolKind::Constant(v) => write!(f, "const:{v}"),
            SymbolKind::General => f.write_str("general"),
        }
    }
}

fn parse_number(s: &str) -> Result<f64> {
    let s = s.trim();
    match s.to_ascii_lowercase().as_str() {
        "inf" | "infinity" | "+inf" => Ok(f64::INFINITY),
        _ => s
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("not a number: {s:?}"))),
    }
}

/// Parses `indicator:c:d` (with `d` possibly `inf`) or `const:c`.
impl FromStr for VerticalSymbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        match parts.as_slice() {
            ["indicator", c, d] => Self::indicator(parse_number(c)?, parse_number(d)?),
            ["const", c] => Self::constant(parse_number(c)?),
            _ => Err(Error::Parse(format!(
                "symbol must be indicator:c:d or const:c, got {s:?}"
            ))),
        }
    }
}

/// Free-function form of [`VerticalSymbol::indicator`].
pub fn make_indicator(c: f64, d: f64) -> Result<VerticalSymbol> {
    VerticalSymbol::indicator(c, d)
}

/// Free-function form of [`VerticalSymbol::limits`].
pub fn limits(a: &VerticalSymbol) -> (f64, f64) {
    a.limits()
}

/// `a_k = χ_[k-1,k)` for `k < n` and `a_n = χ_[n-1,∞)`.
#[derive(Debug, Clone)]
pub struct CanonicalFamily {
    n: usize,
    members: Vec<VerticalSymbol>,
}

impl CanonicalFamily {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[VerticalSymbol] {
        &self.members
    }

    /// Member `a_k`, 1-based.
    pub fn member(&self, k: usize) -> Result<&VerticalSymbol> {
        if k == 0 || k > self.n {
            return Err(Error::IndexOutOfRange { index: k, n: self.n });
        }
        Ok(&self.members[k - 1])
    }

    pub fn sum_at(&self, y: f64) -> f64 {
        self.members.iter().map(|a| a.evaluate(y)).sum()
    }
}

pub fn canonical_family(n: usize) -> Result<CanonicalFamily> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let members = (1..=n)
        .map(|k| {
            let c = (k - 1) as f64;
            let d = if k < n { k as f64 } else { f64::INFINITY };
            VerticalSymbol::indicator(c, d)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CanonicalFamily { n, members })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indicator_limits() {
        let a0 = VerticalSymbol::a0(2.0).unwrap();
        assert_eq!(a0.limits(), (1.0, 0.0));
        assert_eq!(make_indicator(0.0, f64::INFINITY).unwrap().limits(), (1.0, 1.0));
        assert_eq!(make_indicator(1.0, 2.0).unwrap().limits(), (0.0, 0.0));
        assert_eq!(limits(&VerticalSymbol::constant(0.3).unwrap()), (0.3, 0.3));
        assert!(matches!(
            make_indicator(2.0, 1.0),
            Err(Error::InvalidInterval { .. })
        ));
        assert!(make_indicator(1.0, 1.0).is_err());
        assert!(make_indicator(-1.0, 1.0).is_err());
    }

    #[test]
    fn half_open_convention() {
        let a = make_indicator(1.0, 2.0).unwrap();
        assert_eq!(a.evaluate(1.0), 1.0);
        assert_eq!(a.evaluate(2.0), 0.0);
        assert_eq!(a.evaluate(0.999), 0.0);
    }

    #[test]
    fn canonical_family_shapes() {
        let one = canonical_family(1).unwrap();
        assert_eq!(one.members()[0].limits(), (1.0, 1.0));
        let two = canonical_family(2).unwrap();
        assert_eq!(two.members()[0].to_string(), "indicator:0:1");
        assert_eq!(two.members()[1].to_string(), "indicator:1:inf");
        let three = canonical_family(3).unwrap();
        assert_eq!(three.sum_at(1.5), 1.0);
        assert_eq!(three.member(3).unwrap().limits(), (0.0, 1.0));
        assert!(three.member(4).is_err());
        assert!(canonical_family(0).is_err());
    }

    #[test]
    fn parse_round_trip() {
        for s in ["indicator:1:2", "indicator:0:inf", "const:0.5"] {
            let a: VerticalSymbol = s.parse().unwrap();
            assert_eq!(a.to_string(), s);
        }
        assert!("indicator:2:1".parse::<VerticalSymbol>().is_err());
        assert!("box:1".parse::<VerticalSymbol>().is_err());
        assert!("const:x".parse::<VerticalSymbol>().is_err());
    }

    #[test]
    fn general_symbol() {
        let a = VerticalSymbol::general(|y| (-y).exp(), 1.0, 0.0, 1.0, vec![]).unwrap();
        assert_eq!(a.evaluate(0.0), 1.0);
        assert_eq!(a.limits(), (1.0, 0.0));
        assert!(VerticalSymbol::general(|_| 0.0, 2.0, 0.0, 1.0, vec![]).is_err());
    }
}
