//! Exact arithmetic on the circle.
//!
//! Everything downstream (orbits, flowers, interval exchanges) decides
//! membership questions at interval endpoints, so floating point is out of
//! the question. Points on the circle `R/Z` are arbitrary-precision
//! rationals reduced modulo 1.

use std::cmp::Ordering;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational. Always stored reduced with positive
/// denominator (guaranteed by `num`).
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("expansion degree must be at least 2, got {0}")]
    DegreeTooSmall(u32),
}

/// Convenience constructor for small rationals.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parse a rational from the external "p/q" (or bare "p") form.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    s.trim()
        .parse::<Rational>()
        .map_err(|e| format!("invalid rational {s:?}: {e}"))
}

/// A point of the circle `R/Z`, stored as the unique representative in
/// `[0, 1)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CirclePoint(Rational);

impl CirclePoint {
    /// Reduce an arbitrary rational modulo 1.
    pub fn new(r: Rational) -> Self {
        let f = r.floor();
        CirclePoint(r - f)
    }

    pub fn zero() -> Self {
        CirclePoint(Rational::zero())
    }

    pub fn from_ints(num: i64, den: i64) -> Self {
        Self::new(rational(num, den))
    }

    /// The representative in `[0, 1)`.
    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn into_value(self) -> Rational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Image under the expanding map `E_d(x) = d x mod 1`.
    pub fn expand(&self, d: u32) -> Result<CirclePoint, ExactError> {
        if d < 2 {
            return Err(ExactError::DegreeTooSmall(d));
        }
        Ok(CirclePoint::new(&self.0 * Rational::from(BigInt::from(d))))
    }

    /// `E_2`, the doubling map. Infallible shorthand for the dominant case.
    pub fn double(&self) -> CirclePoint {
        CirclePoint::new(&self.0 + &self.0)
    }

    /// The antipodal point `x + 1/2`.
    pub fn antipode(&self) -> CirclePoint {
        CirclePoint::new(&self.0 + rational(1, 2))
    }

    /// Translate by an arbitrary rational (mod 1).
    pub fn add(&self, r: &Rational) -> CirclePoint {
        CirclePoint::new(&self.0 + r)
    }

    /// Counterclockwise distance from `self` to `other`: the unique
    /// `t in [0, 1)` with `self + t = other`.
    pub fn dist_ccw(&self, other: &CirclePoint) -> Rational {
        let d = &other.0 - &self.0;
        if d.is_negative() {
            d + Rational::one()
        } else {
            d
        }
    }

    /// Midpoint of the counterclockwise arc from `self` to `other`.
    pub fn midpoint_ccw(&self, other: &CirclePoint) -> CirclePoint {
        let half = self.dist_ccw(other) / rational(2, 1);
        self.add(&half)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().expect("rational in [0,1) fits in f64")
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CirclePoint({})", self.0)
    }
}

/// Result of [`circular_sort`]: entries in increasing order of value, plus
/// any values that occurred more than once. Duplicates are kept in the
/// entry list; callers decide whether they are an error.
#[derive(Debug, Clone)]
pub struct SortedCircle<L> {
    pub entries: Vec<(CirclePoint, L)>,
    pub duplicates: Vec<CirclePoint>,
}

/// Sort labelled points by their circle value (total order on `[0, 1)`).
/// The sort is stable, so equal points keep their input order.
pub fn circular_sort<L>(mut items: Vec<(CirclePoint, L)>) -> SortedCircle<L> {
    items.sort_by(|a, b| a.0.cmp(&b.0));
    let mut duplicates = Vec::new();
    for w in items.windows(2) {
        if w[0].0 == w[1].0 && duplicates.last() != Some(&w[0].0) {
            duplicates.push(w[0].0.clone());
        }
    }
    SortedCircle {
        entries: items,
        duplicates,
    }
}

/// Total order comparison helper for raw rationals (used by callers that
/// work on `[0, 1)` directly rather than through `CirclePoint`).
pub fn cmp_rational(a: &Rational, b: &Rational) -> Ordering {
    a.cmp(b)
}
