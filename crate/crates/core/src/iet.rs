//! Interval exchange transformations with exact rational arithmetic, the
//! deck-shuffler family, and their binary codings.
//!
//! A deck shuffler on `2m` intervals `A_1 < … < A_m < B_1 < … < B_m`
//! riffles the two halves: the images interleave as
//! `T(B_1) < T(A_1) < T(B_2) < … < T(B_m) < T(A_m)`. Coding a point by
//! which half its iterates visit gives the map `H(x) = Σ χ_B(Tⁿx)/2^(n+1)`,
//! which semiconjugates the shuffler to angle doubling; `flower_from_iet`
//! recovers the flower that contains the image of `H`.

use std::collections::{HashMap, HashSet};

use num::{BigInt, Integer, One, ToPrimitive, Zero};

use crate::exact::{rational, CirclePoint, Rational};
use crate::flower::{Arc, Flower, FlowerError};
use crate::symbolic::Word;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IetError {
    #[error("an interval exchange needs at least one interval")]
    NoIntervals,
    #[error("interval {0} has non-positive length")]
    NonPositiveLength(usize),
    #[error("interval lengths sum to {0}, expected exactly 1")]
    WrongTotalLength(Rational),
    #[error("permutation must be a bijection on 0..{intervals}")]
    NotAPermutation { intervals: usize },
    #[error("{lengths} lengths but permutation of size {permutation}")]
    LengthPermutationMismatch { lengths: usize, permutation: usize },
    #[error("a deck shuffler needs an even number of intervals, got {0}")]
    OddIntervalCount(usize),
    #[error("length denominators give a grid of {0} points, too large to walk exhaustively")]
    GridTooLarge(BigInt),
    #[error(
        "hull chain violated: {lower_desc} = {lower} should not exceed {upper_desc} = {upper}"
    )]
    HullChainViolated {
        lower_desc: String,
        lower: Rational,
        upper_desc: String,
        upper: Rational,
    },
    #[error("petal {index} of the extracted flower collapsed to the point {at}")]
    CollapsedPetal { index: usize, at: Rational },
    #[error("extracted petals failed flower validation: {0}")]
    FlowerInvalid(#[from] FlowerError),
}

/// Which side a point is approached from. `Right` is the point itself
/// (intervals are left-closed right-open); `Left` is the virtual point
/// `x⁻`, whose itinerary follows left-open right-closed intervals. `x = 0`
/// on the left side means the limit at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
}

/// An interval exchange of `[0, 1)`: interval `k` (0-based) is translated
/// so the pieces end up in the order given by `permutation`, where
/// `permutation[k]` is the image position of interval `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Iet {
    lengths: Vec<Rational>,
    permutation: Vec<usize>,
    lefts: Vec<Rational>,
    translations: Vec<Rational>,
}

impl Iet {
    pub fn new(lengths: Vec<Rational>, permutation: Vec<usize>) -> Result<Iet, IetError> {
        if lengths.is_empty() {
            return Err(IetError::NoIntervals);
        }
        if lengths.len() != permutation.len() {
            return Err(IetError::LengthPermutationMismatch {
                lengths: lengths.len(),
                permutation: permutation.len(),
            });
        }
        if let Some(i) = lengths.iter().position(|l| l <= &Rational::zero()) {
            return Err(IetError::NonPositiveLength(i));
        }
        let total = lengths.iter().fold(Rational::zero(), |a, b| a + b);
        if !total.is_one() {
            return Err(IetError::WrongTotalLength(total));
        }
        let n = lengths.len();
        let mut seen = vec![false; n];
        for &p in &permutation {
            if p >= n || seen[p] {
                return Err(IetError::NotAPermutation { intervals: n });
            }
            seen[p] = true;
        }

        let mut lefts = Vec::with_capacity(n);
        let mut acc = Rational::zero();
        for l in &lengths {
            lefts.push(acc.clone());
            acc += l;
        }
        let mut inverse = vec![0usize; n];
        for (k, &p) in permutation.iter().enumerate() {
            inverse[p] = k;
        }
        let mut translations = vec![Rational::zero(); n];
        let mut image_left = Rational::zero();
        for &k in &inverse {
            translations[k] = &image_left - &lefts[k];
            image_left += &lengths[k];
        }
        Ok(Iet {
            lengths,
            permutation,
            lefts,
            translations,
        })
    }

    pub fn intervals(&self) -> usize {
        self.lengths.len()
    }

    pub fn lengths(&self) -> &[Rational] {
        &self.lengths
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn translation(&self, k: usize) -> &Rational {
        &self.translations[k]
    }

    /// `(left, right)` endpoints of interval `k`, as numbers in `[0, 1]`.
    pub fn interval_bounds(&self, k: usize) -> (Rational, Rational) {
        (self.lefts[k].clone(), &self.lefts[k] + &self.lengths[k])
    }

    /// Index of the interval containing `x` (or containing the virtual
    /// point `x⁻` for `Side::Left`).
    pub fn interval_of(&self, x: &CirclePoint, side: Side) -> usize {
        match side {
            Side::Right => self.lefts.partition_point(|l| l <= x.value()) - 1,
            Side::Left => {
                if x.is_zero() {
                    self.lengths.len() - 1
                } else {
                    self.lefts.partition_point(|l| l < x.value()) - 1
                }
            }
        }
    }

    pub fn apply_side(&self, x: &CirclePoint, side: Side) -> CirclePoint {
        let k = self.interval_of(x, side);
        CirclePoint::new(x.value() + &self.translations[k])
    }

    pub fn apply(&self, x: &CirclePoint) -> CirclePoint {
        self.apply_side(x, Side::Right)
    }

    /// No proper prefix of intervals maps onto itself.
    pub fn is_irreducible(&self) -> bool {
        let mut max = 0;
        for j in 0..self.permutation.len() - 1 {
            max = max.max(self.permutation[j]);
            if max == j {
                return false;
            }
        }
        true
    }

    /// First `n` symbols of the interval itinerary of `x`, 1-based.
    pub fn natural_coding(&self, x: &CirclePoint, n: usize) -> Vec<usize> {
        let mut word = Vec::with_capacity(n);
        let mut cur = x.clone();
        for _ in 0..n {
            let k = self.interval_of(&cur, Side::Right);
            word.push(k + 1);
            cur = CirclePoint::new(cur.value() + &self.translations[k]);
        }
        word
    }

    /// Walk the forward orbit of every discontinuity (interior interval
    /// endpoint) for up to `horizon` steps, reporting the first revisit of
    /// a discontinuity or of an already-tracked point. 0 is neither
    /// tracked nor a collision target: the first image block starts at 0,
    /// so every exchange maps some endpoint there. For rational lengths
    /// every orbit is periodic, so a violation always exists and
    /// `NoCollision` only means the horizon was too small.
    pub fn keane_check(&self, horizon: usize) -> KeaneOutcome {
        let discontinuities: Vec<CirclePoint> = (1..self.lengths.len())
            .map(|k| CirclePoint::new(self.lefts[k].clone()))
            .collect();
        let mut seen: HashSet<CirclePoint> = discontinuities.iter().cloned().collect();
        for (k, start) in discontinuities.iter().enumerate() {
            let mut cur = start.clone();
            for step in 1..=horizon {
                cur = self.apply(&cur);
                if seen.contains(&cur) {
                    return KeaneOutcome::Violation {
                        endpoint: k + 1,
                        step,
                        at: cur,
                    };
                }
                seen.insert(cur.clone());
            }
        }
        KeaneOutcome::NoCollision { steps: horizon }
    }

    /// Least common denominator of the lengths; every endpoint orbit lives
    /// on the grid with this many points.
    pub fn grid_size(&self) -> BigInt {
        self.lengths
            .iter()
            .fold(BigInt::one(), |acc, l| acc.lcm(l.denom()))
    }

    /// External JSON form; the permutation is emitted 1-based to match the
    /// usual mathematical notation.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "lengths": self.lengths.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
            "permutation": self.permutation.iter().map(|p| p + 1).collect::<Vec<_>>(),
        })
    }
}

/// Outcome of `keane_check`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KeaneOutcome {
    /// The orbit of the left endpoint of interval `endpoint` hit a
    /// discontinuity or an already-tracked point `at` after `step`
    /// applications.
    Violation {
        endpoint: usize,
        step: usize,
        at: CirclePoint,
    },
    /// No collision within the horizon. Satisfied-so-far: for exact
    /// rational lengths a larger horizon would always find one.
    NoCollision { steps: usize },
}

/// The deck-shuffler IET on intervals `A_1 … A_m B_1 … B_m` with image
/// order `T(B_1) < T(A_1) < T(B_2) < T(A_2) < …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeckShuffler {
    iet: Iet,
    m: usize,
}

impl DeckShuffler {
    pub fn new(lengths: Vec<Rational>) -> Result<DeckShuffler, IetError> {
        if lengths.is_empty() || lengths.len() % 2 != 0 {
            return Err(IetError::OddIntervalCount(lengths.len()));
        }
        let m = lengths.len() / 2;
        let permutation = (0..2 * m)
            .map(|k| if k < m { 2 * k + 1 } else { 2 * (k - m) })
            .collect();
        Ok(DeckShuffler {
            iet: Iet::new(lengths, permutation)?,
            m,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn iet(&self) -> &Iet {
        &self.iet
    }

    /// Whether interval `k` belongs to the second half `B`.
    pub fn is_b(&self, k: usize) -> bool {
        k >= self.m
    }

    pub fn apply(&self, x: &CirclePoint) -> CirclePoint {
        self.iet.apply(x)
    }

    /// The `{0,1}` itinerary of `x` with respect to `A`, `B`, with exact
    /// orbit hashing. If the orbit closes within `depth` steps the result
    /// is the exact value of `H(x)` as prefix + cycle; otherwise the first
    /// `depth` symbols with the truncation error bound `2^(-depth)`.
    pub fn ab_coding(&self, x: &CirclePoint, depth: usize) -> CodingResult {
        self.ab_coding_side(x, Side::Right, depth)
    }

    /// `ab_coding` of the virtual point `x⁻` when `side` is `Left`; this
    /// computes the left limit of `H` at `x` (at 1 when `x = 0`).
    pub fn ab_coding_side(&self, x: &CirclePoint, side: Side, depth: usize) -> CodingResult {
        let mut seen: HashMap<CirclePoint, usize> = HashMap::new();
        let mut symbols: Vec<u8> = Vec::new();
        let mut cur = x.clone();
        for step in 0..=depth {
            if let Some(&first) = seen.get(&cur) {
                let prefix = symbols[..first].to_vec();
                let cycle = symbols[first..].to_vec();
                let value = coding_value(&prefix, Some(&cycle));
                return CodingResult {
                    prefix,
                    cycle: Some(Word::new(cycle, 2).expect("cycle is non-empty binary")),
                    value,
                    error_bound: None,
                };
            }
            if step == depth {
                break;
            }
            seen.insert(cur.clone(), step);
            let k = self.iet.interval_of(&cur, side);
            symbols.push(if self.is_b(k) { 1 } else { 0 });
            cur = self.iet.apply_side(&cur, side);
        }
        let value = coding_value(&symbols, None);
        let error_bound = Rational::new(BigInt::one(), BigInt::one() << depth);
        CodingResult {
            prefix: symbols,
            cycle: None,
            value,
            error_bound: Some(error_bound),
        }
    }

    /// The full plateau decomposition of `H`: maximal half-open intervals
    /// of constancy, which for rational lengths tile `[0, 1)` (every point
    /// is periodic). `resolution` additionally samples the graph at the
    /// points `i/resolution` for rendering.
    pub fn h_graph(&self, resolution: usize) -> Result<HGraph, IetError> {
        let grid = self.iet.grid_size();
        if grid > BigInt::from(2_000_000) {
            return Err(IetError::GridTooLarge(grid));
        }
        let depth = grid.to_usize().expect("grid fits in usize") + 1;
        let one = Rational::one();
        let mut plateaus: Vec<Plateau> = Vec::new();
        let mut x = Rational::zero();
        while x < one {
            let point = CirclePoint::new(x.clone());
            let coding = self.ab_coding(&point, depth);
            let cycle = coding.cycle.expect("rational orbits close within the grid");
            assert!(coding.prefix.is_empty(), "rational IET orbits are purely periodic");
            let period = cycle.len();
            // the plateau extends right until some iterate reaches the end
            // of its interval
            let mut min_gap: Option<Rational> = None;
            let mut y = point.clone();
            for _ in 0..period {
                let k = self.iet.interval_of(&y, Side::Right);
                let (_, right) = self.iet.interval_bounds(k);
                let gap = right - y.value();
                if min_gap.as_ref().map_or(true, |g| &gap < g) {
                    min_gap = Some(gap);
                }
                y = self.iet.apply(&y);
            }
            let hi = &x + min_gap.expect("period is positive");
            plateaus.push(Plateau {
                lo: x,
                hi: hi.clone(),
                value: coding.value,
                cycle,
                period,
            });
            x = hi;
            assert!(plateaus.len() <= 2_000_001, "plateau walk failed to terminate");
        }
        let samples = (0..resolution)
            .map(|i| {
                let s = rational(i as i64, resolution as i64);
                let value = plateaus
                    .iter()
                    .find(|p| p.lo <= s && s < p.hi)
                    .expect("plateaus tile [0,1)")
                    .value
                    .clone();
                (s, value)
            })
            .collect();
        Ok(HGraph { plateaus, samples })
    }

    /// External JSON form; deck shufflers omit the (implied) permutation.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "lengths": self.iet.lengths.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// One itinerary of a point under a deck shuffler.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodingResult {
    /// Symbols before the cycle starts (empty whenever the orbit is purely
    /// periodic, which holds for every point of a rational IET).
    pub prefix: Vec<u8>,
    /// First-return cycle, when one was found within the depth.
    pub cycle: Option<Word>,
    /// `H(x)`: exact when a cycle was found, else the truncated sum.
    pub value: Rational,
    /// `2^(-depth)` bound when truncated; `None` means exact.
    pub error_bound: Option<Rational>,
}

impl CodingResult {
    pub fn is_exact(&self) -> bool {
        self.error_bound.is_none()
    }
}

fn coding_value(prefix: &[u8], cycle: Option<&[u8]>) -> Rational {
    let mut acc = Rational::zero();
    let mut scale = rational(1, 2);
    for &s in prefix {
        if s == 1 {
            acc += &scale;
        }
        scale /= rational(2, 1);
    }
    if let Some(c) = cycle {
        let mut top = BigInt::zero();
        for &s in c {
            top = top * BigInt::from(2) + BigInt::from(s);
        }
        let denom = (BigInt::one() << c.len()) - 1;
        acc += scale * rational(2, 1) * Rational::new(top, denom);
    }
    acc
}

/// A maximal interval `[lo, hi)` on which `H` is constant; all its points
/// share the cycle word and are periodic with its length as exact period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plateau {
    pub lo: Rational,
    pub hi: Rational,
    pub value: Rational,
    pub cycle: Word,
    pub period: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HGraph {
    pub plateaus: Vec<Plateau>,
    /// `(x, H(x))` at `x = i/resolution`, for rendering.
    pub samples: Vec<(Rational, Rational)>,
}

/// The flower containing the image of `H`: compute the closed convex hull
/// of `H` on each interval (exactly when orbits close within `depth`
/// steps, else with a `2^(-depth)` bound), check the interleaving chain
///
/// `0 ≤ hull(B_1)−1/2 ≤ hull(A_1) ≤ hull(B_2)−1/2 ≤ … ≤ hull(A_m) ≤ hull(B_1) ≤ …`
///
/// and cut the circle at the exact midpoints of the gaps between adjacent
/// hulls. The hulls of `A_m` and `B_1` merge into the petal containing
/// 1/2, giving `2m−1` petals whose endpoints pair antipodally, so the
/// result is a valid flower of total measure exactly 1/2.
///
/// A chain violation or a collapsed petal would contradict the structure
/// theorem for deck shufflers and is reported as an error with witnesses.
pub fn flower_from_iet(t: &DeckShuffler, depth: usize) -> Result<Flower, IetError> {
    let m = t.m();
    let half = rational(1, 2);

    // hull of H on interval k: [H(left), lim_{x→right⁻} H(x)]
    let hull = |k: usize| -> (Rational, Rational, Rational) {
        let (left, right) = t.iet().interval_bounds(k);
        let lo = t.ab_coding_side(&CirclePoint::new(left), Side::Right, depth);
        let hi = t.ab_coding_side(&CirclePoint::new(right), Side::Left, depth);
        let err = lo.error_bound.unwrap_or_else(Rational::zero)
            + hi.error_bound.unwrap_or_else(Rational::zero);
        (lo.value, hi.value, err)
    };

    // blocks in linear circle order: B_1−1/2, A_1, B_2−1/2, A_2, …, then
    // the same shifted by 1/2; each block is (inf, sup, error, name)
    let mut blocks: Vec<(Rational, Rational, Rational, String)> = Vec::with_capacity(4 * m);
    for i in 0..m {
        let (inf, sup, err) = hull(m + i);
        blocks.push((inf - &half, sup - &half, err, format!("hull(B_{}) - 1/2", i + 1)));
        let (inf, sup, err) = hull(i);
        blocks.push((inf, sup, err, format!("hull(A_{})", i + 1)));
    }
    for i in 0..2 * m {
        let (inf, sup, err, name) = blocks[i].clone();
        let name = name
            .strip_suffix(" - 1/2")
            .map(str::to_owned)
            .unwrap_or_else(|| format!("{name} + 1/2"));
        blocks.push((inf + &half, sup + &half, err, name));
    }

    for i in 0..4 * m {
        let (gap_lo, gap_lo_err, lo_desc) = {
            let b = &blocks[i];
            (b.1.clone(), b.2.clone(), b.3.clone())
        };
        let wrap = if i + 1 == 4 * m { Rational::one() } else { Rational::zero() };
        let next = &blocks[(i + 1) % (4 * m)];
        let gap_hi = &next.0 + wrap;
        if gap_lo > &gap_hi + &gap_lo_err + &next.2 {
            return Err(IetError::HullChainViolated {
                lower_desc: format!("sup {lo_desc}"),
                lower: gap_lo,
                upper_desc: format!("inf {}", next.3),
                upper: gap_hi,
            });
        }
    }

    // midpoint cut after block i (linear coordinates, may exceed 1)
    let cut = |i: usize| -> Rational {
        let wrap = if i + 1 == 4 * m { Rational::one() } else { Rational::zero() };
        (&blocks[i].1 + &blocks[(i + 1) % (4 * m)].0 + wrap) / rational(2, 1)
    };

    // petal spans in block indices: A_1 … A_{m−1}, then A_m ∪ B_1 merged,
    // then B_2 … B_m
    let mut spans: Vec<(usize, usize)> = Vec::with_capacity(2 * m - 1);
    for i in 1..m {
        spans.push((2 * i - 1, 2 * i - 1));
    }
    spans.push((2 * m - 1, 2 * m));
    for i in 1..m {
        spans.push((2 * m + 2 * i, 2 * m + 2 * i));
    }

    let mut petals = Vec::with_capacity(spans.len());
    for (index, (first, last)) in spans.into_iter().enumerate() {
        let left = cut(first - 1);
        let right = cut(last);
        if left >= right {
            return Err(IetError::CollapsedPetal { index, at: left });
        }
        petals.push(Arc::new(
            CirclePoint::new(left),
            CirclePoint::new(right),
        ));
    }
    Ok(Flower::new(petals, 2)?)
}
