//! From a flower-supported periodic orbit back to a deck shuffler.
//!
//! The uniform measure on a periodic orbit inside a flower has a
//! cumulative distribution function `h(x) = μ([0, x])` that collapses each
//! gap of the support to a point. Reading off the masses of the petals
//! (splitting the petal containing 1/2 at 1/2) produces a deck shuffler
//! `T` conjugate to angle doubling on the orbit: `h⁻ ∘ E_2 = T ∘ h⁻` where
//! `h⁻(x) = μ([0, x))` is the left-continuous variant. `round_trip` checks
//! the whole loop orbit → flower → shuffler → coding → orbit, exactly.

use num::Zero;
use rayon::prelude::*;

use crate::exact::{rational, CirclePoint, Rational};
use crate::flower::{flower_from_orbit, Arc, Flower, FlowerError};
use crate::iet::{flower_from_iet, DeckShuffler, IetError};
use crate::orbits::{orbit_from_word, OrbitError, PeriodicOrbit};
use crate::symbolic::{coding, enumerate_lyndon, SymbolicError, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BridgeError {
    #[error("the flower contains 0; an invariant measure supported inside it would need an atom at 0, so no circle map can arise")]
    FlowerContainsZero,
    #[error("orbit point {0} is not in the interior of any petal")]
    PointNotInterior(CirclePoint),
    #[error("petal {index} carries no orbit point; remove it and use the smaller flower")]
    EmptyPetal { index: usize },
    #[error("orbit {0} is a fixed point; the correspondence needs period at least 2")]
    FixedPointOrbit(Word),
    #[error("this construction is specific to degree 2, got degree {0}")]
    RequiresDegreeTwo(u32),
    #[error("interval {side} would have zero length: the petal containing 1/2 has all its mass on one side")]
    ZeroMassSide { side: &'static str },
    #[error(transparent)]
    Flower(#[from] FlowerError),
    #[error(transparent)]
    Iet(#[from] IetError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

/// The uniform invariant measure on a periodic orbit: weight `1/period`
/// per point, the unique invariant probability measure on the cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitMeasure {
    orbit: PeriodicOrbit,
    sorted: Vec<CirclePoint>,
}

impl OrbitMeasure {
    pub fn new(orbit: PeriodicOrbit) -> OrbitMeasure {
        let mut sorted = orbit.points().to_vec();
        sorted.sort();
        OrbitMeasure { orbit, sorted }
    }

    pub fn orbit(&self) -> &PeriodicOrbit {
        &self.orbit
    }

    pub fn period(&self) -> usize {
        self.orbit.period()
    }

    /// Number of support points strictly below `x`.
    fn rank(&self, x: &CirclePoint) -> usize {
        self.sorted.partition_point(|p| p < x)
    }

    /// `μ([0, x])`, the right-continuous CDF.
    pub fn cdf_at(&self, x: &CirclePoint) -> Rational {
        let upto = self.sorted.partition_point(|p| p <= x);
        rational(upto as i64, self.period() as i64)
    }

    /// `μ([0, x))`, the left-continuous CDF.
    pub fn cdf_left_at(&self, x: &CirclePoint) -> Rational {
        rational(self.rank(x) as i64, self.period() as i64)
    }
}

/// The exact CDF of an orbit measure inside a flower: values at every
/// support point and every petal endpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CdfMap {
    support: Vec<(CirclePoint, Rational)>,
    endpoint_values: Vec<(CirclePoint, Rational)>,
    flower: Flower,
}

impl CdfMap {
    /// `(x, μ([0, x]))` for each support point, in increasing order.
    pub fn support(&self) -> &[(CirclePoint, Rational)] {
        &self.support
    }

    /// `(e, μ([0, e]))` for each petal endpoint, in petal order
    /// (left, right, left, right, …).
    pub fn endpoint_values(&self) -> &[(CirclePoint, Rational)] {
        &self.endpoint_values
    }

    pub fn flower(&self) -> &Flower {
        &self.flower
    }
}

fn check_preconditions(mu: &OrbitMeasure, f: &Flower) -> Result<(), BridgeError> {
    if f.degree() != 2 {
        return Err(BridgeError::RequiresDegreeTwo(f.degree()));
    }
    if mu.orbit().degree() != 2 {
        return Err(BridgeError::RequiresDegreeTwo(mu.orbit().degree()));
    }
    if mu.period() == 1 {
        return Err(BridgeError::FixedPointOrbit(mu.orbit().word().clone()));
    }
    if f.contains(&CirclePoint::zero()) {
        return Err(BridgeError::FlowerContainsZero);
    }
    for x in mu.orbit().points() {
        if !f.contains_interior(x) {
            return Err(BridgeError::PointNotInterior(x.clone()));
        }
    }
    for (index, petal) in f.petals().iter().enumerate() {
        if !mu.orbit().points().iter().any(|x| petal.contains(x)) {
            return Err(BridgeError::EmptyPetal { index });
        }
    }
    Ok(())
}

/// The CDF `h(x) = μ([0, x])` of an orbit measure supported inside a
/// flower, tabulated at support points and petal endpoints.
pub fn cdf(mu: &OrbitMeasure, f: &Flower) -> Result<CdfMap, BridgeError> {
    check_preconditions(mu, f)?;
    let support = mu
        .sorted
        .iter()
        .map(|x| (x.clone(), mu.cdf_at(x)))
        .collect();
    let endpoint_values = f
        .petals()
        .iter()
        .flat_map(|p| [p.left().clone(), p.right().clone()])
        .map(|e| {
            let v = mu.cdf_at(&e);
            (e, v)
        })
        .collect();
    Ok(CdfMap {
        support,
        endpoint_values,
        flower: f.clone(),
    })
}

/// The deck shuffler induced by an orbit measure inside a `(2m−1)`-petal
/// flower: interval lengths are the petal masses
/// `μ(P_1), …, μ(P_{m−1}), μ(P_m ∩ [0,1/2)), μ(P_m ∩ [1/2,1)), μ(P_{m+1}), …`
/// where `P_m` is the petal containing 1/2 (always the `m`-th petal after
/// 0, since petal endpoints pair antipodally and 0 is outside).
pub fn iet_from_flower(mu: &OrbitMeasure, f: &Flower) -> Result<DeckShuffler, BridgeError> {
    check_preconditions(mu, f)?;
    let count = f.petals().len();
    let m = (count + 1) / 2;
    let half = CirclePoint::from_ints(1, 2);
    let middle = &f.petals()[m - 1];
    assert!(
        middle.contains_interior(&half),
        "petal {} of a valid zero-free flower must contain 1/2",
        m - 1
    );

    let period = rational(mu.period() as i64, 1);
    let mass = |petal: &Arc| -> Rational {
        let n = mu.orbit().points().iter().filter(|x| petal.contains(x)).count();
        rational(n as i64, 1) / &period
    };
    let mut lengths = vec![Rational::zero(); 2 * m];
    for i in 0..m - 1 {
        lengths[i] = mass(&f.petals()[i]);
        lengths[m + 1 + i] = mass(&f.petals()[m + i]);
    }
    // split the middle petal's mass at 1/2; orbit points never equal 1/2
    // (its forward orbit is the fixed point, not a cycle)
    let below = mu
        .orbit()
        .points()
        .iter()
        .filter(|x| middle.contains(x) && *x < &half)
        .count();
    let inside = mu
        .orbit()
        .points()
        .iter()
        .filter(|x| middle.contains(x))
        .count();
    if below == 0 {
        return Err(BridgeError::ZeroMassSide { side: "A_m" });
    }
    if below == inside {
        return Err(BridgeError::ZeroMassSide { side: "B_1" });
    }
    lengths[m - 1] = rational(below as i64, 1) / &period;
    lengths[m] = rational((inside - below) as i64, 1) / &period;
    Ok(DeckShuffler::new(lengths)?)
}

/// Outcome of the full correspondence check for one orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundTripReport {
    pub word: Word,
    pub interlacing: usize,
    pub flower: Flower,
    pub shuffler: DeckShuffler,
    /// `h⁻(E_2 x) = T(h⁻ x)` at every orbit point.
    pub conjugacy: bool,
    /// `H(h⁻ x) = x` with matching itineraries at every orbit point.
    pub inverse_coding: bool,
    /// Every orbit point lies in the flower extracted from the shuffler.
    pub flower_containment: bool,
    /// Human-readable witnesses for any failed check.
    pub failures: Vec<String>,
}

impl RoundTripReport {
    pub fn all_pass(&self) -> bool {
        self.conjugacy && self.inverse_coding && self.flower_containment
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "word": self.word.to_string(),
            "interlacing": self.interlacing,
            "flower": self.flower.to_json(),
            "lengths": self
                .shuffler
                .iet()
                .lengths()
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>(),
            "checks": {
                "conjugacy": self.conjugacy,
                "inverse_coding": self.inverse_coding,
                "flower_containment": self.flower_containment,
            },
        })
    }
}

/// Build the canonical flower and induced shuffler of an orbit, then
/// verify the correspondence exactly: conjugacy on the support, inversion
/// of the coding map, and containment in the extracted flower.
pub fn round_trip(o: &PeriodicOrbit) -> Result<RoundTripReport, BridgeError> {
    let flower = flower_from_orbit(o).map_err(|e| match e {
        FlowerError::FixedPointOrbit(w) => BridgeError::FixedPointOrbit(w),
        other => BridgeError::Flower(other),
    })?;
    let mu = OrbitMeasure::new(o.clone());
    let shuffler = iet_from_flower(&mu, &flower)?;
    let mut failures = Vec::new();

    let mut conjugacy = true;
    for x in o.points() {
        let lhs = CirclePoint::new(mu.cdf_left_at(&x.double()));
        let rhs = shuffler.apply(&CirclePoint::new(mu.cdf_left_at(x)));
        if lhs != rhs {
            conjugacy = false;
            failures.push(format!(
                "conjugacy fails at {x}: h(E x) = {lhs} but T(h x) = {rhs}"
            ));
        }
    }

    let depth = o.period() + 2;
    let mut inverse_coding = true;
    for x in o.points() {
        let h = CirclePoint::new(mu.cdf_left_at(x));
        let code = shuffler.ab_coding(&h, depth);
        let value_ok = code.is_exact() && &code.value == x.value();
        let itinerary = coding(x, 2, o.period()).expect("binary coding");
        let word_ok = code.cycle.as_ref().map(Word::symbols) == Some(itinerary.symbols());
        if !(value_ok && word_ok) {
            inverse_coding = false;
            failures.push(format!(
                "inverse coding fails at {x}: H({h}) = {}",
                code.value
            ));
        }
    }

    let extracted = flower_from_iet(&shuffler, depth)?;
    let mut flower_containment = true;
    for x in o.points() {
        if !extracted.contains(x) {
            flower_containment = false;
            failures.push(format!("{x} escapes the flower extracted from the shuffler"));
        }
    }

    Ok(RoundTripReport {
        word: o.word().clone(),
        interlacing: o.interlacing_number()?,
        flower,
        shuffler,
        conjugacy,
        inverse_coding,
        flower_containment,
        failures,
    })
}

/// Round-trip every orbit of period 2..=max_period, in (period, word)
/// order. The fixed point (words "0" and "1") has no induced shuffler and
/// is skipped.
pub fn round_trip_all(max_period: usize) -> Result<Vec<RoundTripReport>, BridgeError> {
    let mut words = enumerate_lyndon(2, max_period)?;
    words.sort();
    words
        .into_par_iter()
        .filter(|w| w.len() > 1)
        .map(|w| round_trip(&orbit_from_word(&w, 2)?))
        .collect()
}
