//! Flowers: finite unions of closed arcs whose translates by `1/d` tile the
//! circle.
//!
//! A `d`-flower `F` has total measure `1/d`, its petals are pairwise
//! disjoint closed arcs, and the interiors of the translates `F + i/d`
//! (`i = 1, …, d-1`) miss the petal interiors. For `d = 2` the petal count
//! is odd and petal endpoints pair up antipodally. The maximal invariant
//! set `∩ E_d^{-k}(F)` is the attractor the rest of the crate studies.

use std::collections::BTreeSet;
use std::collections::HashSet;
use std::fmt;

use num::{BigInt, One, Zero};

use crate::exact::{circular_sort, rational, CirclePoint, Rational};
use crate::orbits::PeriodicOrbit;
use crate::symbolic::Word;

/// A closed arc, counterclockwise from `left` to `right`. `left == right`
/// denotes a single point, never the full circle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    left: CirclePoint,
    right: CirclePoint,
}

impl Arc {
    pub fn new(left: CirclePoint, right: CirclePoint) -> Arc {
        Arc { left, right }
    }

    pub fn point(x: CirclePoint) -> Arc {
        Arc {
            left: x.clone(),
            right: x,
        }
    }

    pub fn left(&self) -> &CirclePoint {
        &self.left
    }

    pub fn right(&self) -> &CirclePoint {
        &self.right
    }

    pub fn is_point(&self) -> bool {
        self.left == self.right
    }

    pub fn length(&self) -> Rational {
        self.left.dist_ccw(&self.right)
    }

    pub fn contains(&self, x: &CirclePoint) -> bool {
        self.left.dist_ccw(x) <= self.length()
    }

    pub fn contains_interior(&self, x: &CirclePoint) -> bool {
        let d = self.left.dist_ccw(x);
        !d.is_zero() && d < self.length()
    }

    /// Membership in the half-open arc `[left, right)`.
    pub fn contains_half_open(&self, x: &CirclePoint) -> bool {
        self.left.dist_ccw(x) < self.length()
    }

    pub fn translate(&self, t: &Rational) -> Arc {
        Arc {
            left: self.left.add(t),
            right: self.right.add(t),
        }
    }

    pub fn midpoint(&self) -> CirclePoint {
        self.left.midpoint_ccw(&self.right)
    }

    /// Whether two closed arcs meet. Neither may be the full circle.
    pub fn intersects(&self, other: &Arc) -> bool {
        self.contains(&other.left)
            || self.contains(&other.right)
            || other.contains(&self.left)
            || other.contains(&self.right)
    }

    /// Whether the open arcs meet. Point arcs have empty interior.
    pub fn interiors_intersect(&self, other: &Arc) -> bool {
        if self.is_point() || other.is_point() {
            return false;
        }
        self.contains_interior(&other.left)
            || self.contains_interior(&other.right)
            || other.contains_interior(&self.left)
            || other.contains_interior(&self.right)
            || self.left == other.left
            || self.right == other.right
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.left, self.right)
    }
}

/// A failed flower axiom, with enough data to point at the culprit petals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Petals `a` and `b` (indices into the input list) are not disjoint.
    Overlap { a: usize, b: usize },
    /// Total petal length differs from `1/d`.
    WrongTotalMeasure { total: Rational, expected: Rational },
    /// The interior of petal `petal` meets the interior of petal `other`
    /// translated by `shift/d`.
    AntipodalInteriorIntersection {
        petal: usize,
        other: usize,
        shift: u32,
    },
    /// Degree-2 flowers must have an odd number of petals.
    EvenPetalCount { count: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Overlap { a, b } => write!(f, "petals {a} and {b} overlap"),
            Violation::WrongTotalMeasure { total, expected } => {
                write!(f, "total petal measure is {total}, expected {expected}")
            }
            Violation::AntipodalInteriorIntersection {
                petal,
                other,
                shift,
            } => write!(
                f,
                "interior of petal {petal} meets petal {other} shifted by {shift} d-ths"
            ),
            Violation::EvenPetalCount { count } => {
                write!(f, "degree-2 flower has an even number of petals ({count})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FlowerError {
    #[error("flower degree must be at least 2, got {0}")]
    DegreeTooSmall(u32),
    #[error("a flower needs at least one petal")]
    NoPetals,
    #[error("petal {0} is a single point; petals must be non-degenerate arcs")]
    DegeneratePetal(usize),
    #[error("flower axioms violated: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("this construction is specific to degree 2, got degree {0}")]
    RequiresDegreeTwo(u32),
    #[error(
        "orbit {0} is the fixed point 0; its flower would need 0 inside a petal, \
         which the orbit construction excludes"
    )]
    FixedPointOrbit(Word),
    #[error("set is not forward-invariant: image of {0} is missing")]
    NotForwardInvariant(CirclePoint),
}

fn format_violations(vs: &[Violation]) -> String {
    vs.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Check the flower axioms for a petal list. Empty result means valid.
/// Assumes `d >= 2` and non-degenerate arcs; `Flower::new` screens those.
pub fn validate_petals(petals: &[Arc], d: u32) -> Vec<Violation> {
    let mut violations = Vec::new();
    for a in 0..petals.len() {
        for b in a + 1..petals.len() {
            if petals[a].intersects(&petals[b]) {
                violations.push(Violation::Overlap { a, b });
            }
        }
    }
    let total: Rational = petals.iter().map(Arc::length).sum();
    let expected = rational(1, d as i64);
    if total != expected {
        violations.push(Violation::WrongTotalMeasure { total, expected });
    }
    for shift in 1..d {
        let t = rational(shift as i64, d as i64);
        for (j, other) in petals.iter().enumerate() {
            let moved = other.translate(&t);
            for (i, petal) in petals.iter().enumerate() {
                if petal.interiors_intersect(&moved) {
                    violations.push(Violation::AntipodalInteriorIntersection {
                        petal: i,
                        other: j,
                        shift,
                    });
                }
            }
        }
    }
    if d == 2 && petals.len() % 2 == 0 {
        violations.push(Violation::EvenPetalCount {
            count: petals.len(),
        });
    }
    violations
}

/// A validated `d`-flower. Petals are stored in circular order (ascending
/// left endpoint).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flower {
    petals: Vec<Arc>,
    d: u32,
}

impl Flower {
    /// Validate and canonicalize a petal list. The four geometric axioms
    /// are all checked exactly; any failure is reported, not just the
    /// first.
    pub fn new(petals: Vec<Arc>, d: u32) -> Result<Flower, FlowerError> {
        if d < 2 {
            return Err(FlowerError::DegreeTooSmall(d));
        }
        if petals.is_empty() {
            return Err(FlowerError::NoPetals);
        }
        if let Some(i) = petals.iter().position(Arc::is_point) {
            return Err(FlowerError::DegeneratePetal(i));
        }
        let violations = validate_petals(&petals, d);
        if !violations.is_empty() {
            return Err(FlowerError::Invalid(violations));
        }
        let mut petals = petals;
        petals.sort_by(|a, b| a.left().cmp(b.left()));
        Ok(Flower { petals, d })
    }

    pub fn petals(&self) -> &[Arc] {
        &self.petals
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn contains(&self, x: &CirclePoint) -> bool {
        self.petals.iter().any(|p| p.contains(x))
    }

    pub fn contains_interior(&self, x: &CirclePoint) -> bool {
        self.petals.iter().any(|p| p.contains_interior(x))
    }

    /// Index of the petal containing `x`, if any.
    pub fn petal_containing(&self, x: &CirclePoint) -> Option<usize> {
        self.petals.iter().position(|p| p.contains(x))
    }

    /// The preimage of `x` under `E_d` selected inside the flower, using
    /// the right-continuous convention: of the `d` preimages, the unique
    /// one lying in the half-open petals `[left, right)`.
    ///
    /// The flower axioms make the half-open petals and their translates a
    /// partition of the circle, so the selection is total and unambiguous.
    pub fn preimage_select(&self, x: &CirclePoint) -> CirclePoint {
        let d = rational(self.d as i64, 1);
        for i in 0..self.d {
            let y = CirclePoint::new((x.value() + rational(i as i64, 1)) / &d);
            if self.petals.iter().any(|p| p.contains_half_open(&y)) {
                return y;
            }
        }
        unreachable!("half-open petals of a valid flower tile the circle under E_d");
    }

    /// The `k`-th approximation `F ∩ E_d^{-1}(F) ∩ … ∩ E_d^{-k}(F)` to the
    /// maximal invariant set, as a disjoint list of closed arcs. Arcs that
    /// degenerate to points are kept explicitly.
    pub fn maximal_invariant_approx(&self, k: usize) -> Vec<Arc> {
        let mut cur = self.petals.clone();
        for _ in 0..k {
            let pre = preimage_arcs(&cur, self.d);
            cur = intersect_arc_unions(&pre, &self.petals);
        }
        cur
    }

    /// External JSON form: `{"d": d, "petals": [["p/q", "r/s"], …]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "d": self.d,
            "petals": self
                .petals
                .iter()
                .map(|p| serde_json::json!([p.left().to_string(), p.right().to_string()]))
                .collect::<Vec<_>>(),
        })
    }
}

/// Preimages of a disjoint arc family under `E_d`: each arc contributes `d`
/// arcs of a `d`-th of its length.
fn preimage_arcs(arcs: &[Arc], d: u32) -> Vec<Arc> {
    let dr = rational(d as i64, 1);
    let mut out = Vec::with_capacity(arcs.len() * d as usize);
    for arc in arcs {
        let len = arc.length() / &dr;
        for i in 0..d {
            let left = CirclePoint::new((arc.left().value() + rational(i as i64, 1)) / &dr);
            let right = left.add(&len);
            out.push(Arc { left, right });
        }
    }
    out
}

/// Closed linear segment in `[0, 1]`; `hi` may be `1`, meaning the circle
/// point `0` approached from below.
#[derive(Debug, Clone)]
struct Segment {
    lo: Rational,
    hi: Rational,
}

fn linearize(arcs: &[Arc]) -> Vec<Segment> {
    let one = Rational::one();
    let mut segs = Vec::new();
    for arc in arcs {
        let lo = arc.left().value().clone();
        let hi = &lo + arc.length();
        if hi <= one {
            segs.push(Segment { lo, hi });
        } else {
            segs.push(Segment {
                lo,
                hi: one.clone(),
            });
            segs.push(Segment {
                lo: Rational::zero(),
                hi: hi - &one,
            });
        }
    }
    segs.sort_by(|a, b| a.lo.cmp(&b.lo));
    segs
}

/// Intersection of two disjoint closed arc unions, returned disjoint and
/// sorted, with point components kept.
fn intersect_arc_unions(a: &[Arc], b: &[Arc]) -> Vec<Arc> {
    let sa = linearize(a);
    let sb = linearize(b);
    let mut pieces: Vec<Segment> = Vec::new();
    for x in &sa {
        for y in &sb {
            let lo = if x.lo >= y.lo { x.lo.clone() } else { y.lo.clone() };
            let hi = if x.hi <= y.hi { x.hi.clone() } else { y.hi.clone() };
            if lo <= hi {
                pieces.push(Segment { lo, hi });
            }
        }
    }
    pieces.sort_by(|p, q| p.lo.cmp(&q.lo).then_with(|| p.hi.cmp(&q.hi)));
    pieces.dedup_by(|p, q| p.lo == q.lo && p.hi == q.hi);

    // re-join a piece ending at 1 with a piece starting at 0 into one arc
    // wrapping through zero; otherwise map segments straight back
    let one = Rational::one();
    let wrap_tail = pieces.iter().position(|p| p.hi == one && p.lo != one);
    let wrap_head = pieces.iter().position(|p| p.lo.is_zero());
    let mut arcs = Vec::new();
    match (wrap_head, wrap_tail) {
        (Some(h), Some(t)) if h != t && !(pieces[h].hi == one) => {
            let left = CirclePoint::new(pieces[t].lo.clone());
            let right = CirclePoint::new(pieces[h].hi.clone());
            for (i, p) in pieces.iter().enumerate() {
                if i != h && i != t {
                    arcs.push(segment_to_arc(p));
                }
            }
            arcs.push(Arc { left, right });
        }
        _ => {
            for p in &pieces {
                arcs.push(segment_to_arc(p));
            }
        }
    }
    arcs.sort_by(|x, y| x.left().cmp(y.left()));
    arcs
}

fn segment_to_arc(s: &Segment) -> Arc {
    Arc {
        left: CirclePoint::new(s.lo.clone()),
        right: CirclePoint::new(s.hi.clone()),
    }
}

/// The canonical flower of a non-fixed periodic orbit of `E_2`: cut the
/// circle at the exact midpoints of every gap between a block of orbit
/// points and the adjacent block of antiorbit points, and take the arcs
/// covering the orbit blocks. Petal count equals the interlacing number,
/// all orbit points are interior, and `0` never lands in a petal.
pub fn flower_from_orbit(o: &PeriodicOrbit) -> Result<Flower, FlowerError> {
    if o.degree() != 2 {
        return Err(FlowerError::RequiresDegreeTwo(o.degree()));
    }
    if o.period() == 1 {
        return Err(FlowerError::FixedPointOrbit(o.word().clone()));
    }
    let anti: Vec<CirclePoint> = o.points().iter().map(CirclePoint::antipode).collect();
    let mut labelled: Vec<(CirclePoint, bool)> =
        o.points().iter().cloned().map(|p| (p, true)).collect();
    labelled.extend(anti.into_iter().map(|p| (p, false)));
    let sorted = circular_sort(labelled);
    assert!(sorted.duplicates.is_empty(), "orbit meets its antiorbit");
    let pts = &sorted.entries;
    let n = pts.len();

    let mut petals = Vec::new();
    for i in 0..n {
        let prev = (i + n - 1) % n;
        if pts[i].1 && !pts[prev].1 {
            // i opens a block of orbit points; walk to its end
            let left = pts[prev].0.midpoint_ccw(&pts[i].0);
            let mut j = i;
            while pts[(j + 1) % n].1 {
                j = (j + 1) % n;
            }
            let right = pts[j].0.midpoint_ccw(&pts[(j + 1) % n].0);
            petals.push(Arc { left, right });
        }
    }
    let flower = Flower::new(petals, 2)?;
    debug_assert!(
        !flower.contains(&CirclePoint::zero()),
        "orbit flower of {} contains 0",
        o.word()
    );
    Ok(flower)
}

/// Number of `d`-adic intervals `[j/d^n, (j+1)/d^n)` meeting a finite
/// forward-invariant set.
pub fn complexity_adic(
    y: &BTreeSet<CirclePoint>,
    d: u32,
    n: usize,
) -> Result<usize, FlowerError> {
    for x in y {
        let image = x
            .expand(d)
            .map_err(|_| FlowerError::DegreeTooSmall(d))?;
        if !y.contains(&image) {
            return Err(FlowerError::NotForwardInvariant(x.clone()));
        }
    }
    let scale = Rational::from(BigInt::from(d).pow(n as u32));
    let cells: HashSet<BigInt> = y
        .iter()
        .map(|x| (x.value() * &scale).floor().to_integer())
        .collect();
    Ok(cells.len())
}
