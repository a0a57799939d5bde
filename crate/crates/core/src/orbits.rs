//! Periodic orbits of the expanding maps `E_d` and their interlacing
//! numbers.
//!
//! A cyclic word `w` of length `p` over `{0, …, d-1}` names the periodic
//! point `k/(d^p - 1)` where `k` reads `w` base `d`; the orbit's itinerary
//! is `w` itself. The words `0` and `1` both normalize to the fixed point
//! `0` (for `k = d^p - 1` the quotient is `1 ≡ 0 mod 1`), so those two
//! degenerate orbits share their point but keep distinct labels.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num::{BigInt, One};
use rayon::prelude::*;

use crate::exact::{circular_sort, CirclePoint, ExactError, Rational};
use crate::symbolic::{enumerate_lyndon, SymbolicError, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrbitError {
    #[error("word alphabet {word_alphabet} does not match degree {d}")]
    AlphabetMismatch { word_alphabet: u8, d: u32 },
    #[error("interlacing numbers are defined for degree 2, got {0}")]
    InterlacingRequiresDegreeTwo(u32),
    #[error("set is not forward-invariant: image of {0} is missing")]
    NotForwardInvariant(CirclePoint),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

/// An exact periodic orbit of `E_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicOrbit {
    word: Word,
    points: Vec<CirclePoint>,
    d: u32,
}

impl PeriodicOrbit {
    /// Canonical cyclic label. Its itinerary is the label itself except for
    /// the degenerate word `1` (alphabet max repeated), whose point `0`
    /// codes as `0`.
    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn period(&self) -> usize {
        self.points.len()
    }

    /// Orbit points in dynamical order; `points()[0]` is the point labelled
    /// by `word()`.
    pub fn points(&self) -> &[CirclePoint] {
        &self.points
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn point_set(&self) -> BTreeSet<CirclePoint> {
        self.points.iter().cloned().collect()
    }

    /// The antipodal orbit `points + 1/2` (degree 2 only).
    pub fn antiorbit(&self) -> Result<Vec<CirclePoint>, OrbitError> {
        if self.d != 2 {
            return Err(OrbitError::InterlacingRequiresDegreeTwo(self.d));
        }
        Ok(self.points.iter().map(CirclePoint::antipode).collect())
    }

    /// Number of maximal circular blocks of orbit points in the circular
    /// order on orbit ∪ antiorbit. Always odd; equals 1 exactly for the
    /// Sturmian orbits.
    pub fn interlacing_number(&self) -> Result<usize, OrbitError> {
        let anti = self.antiorbit()?;
        let mut labelled: Vec<(CirclePoint, bool)> =
            self.points.iter().cloned().map(|p| (p, true)).collect();
        labelled.extend(anti.into_iter().map(|p| (p, false)));
        let sorted = circular_sort(labelled);
        // a periodic orbit never meets its own antipode: two points mapping
        // to a common image cannot lie on one cycle
        assert!(
            sorted.duplicates.is_empty(),
            "orbit and antiorbit of {} intersect",
            self.word
        );
        let labels: Vec<bool> = sorted.entries.iter().map(|e| e.1).collect();
        let n = labels.len();
        let blocks = (0..n).filter(|&i| labels[i] && !labels[(i + 1) % n]).count();
        Ok(blocks)
    }
}

/// Build the periodic orbit named by a cyclic word. The word is reduced to
/// its canonical (primitive, least-rotation) form first, so powers and
/// rotations of the same cycle produce identical orbits.
pub fn orbit_from_word(w: &Word, d: u32) -> Result<PeriodicOrbit, OrbitError> {
    if u32::from(w.alphabet()) != d {
        return Err(OrbitError::AlphabetMismatch {
            word_alphabet: w.alphabet(),
            d,
        });
    }
    let word = w.canonical();
    let p = word.len();
    let denom = BigInt::from(d).pow(p as u32) - BigInt::one();
    let start = CirclePoint::new(Rational::new(word.base_d_value(), denom));
    let mut points = Vec::with_capacity(p);
    let mut cur = start.clone();
    for _ in 0..p {
        points.push(cur.clone());
        cur = cur.expand(d)?;
        if cur == start {
            break;
        }
    }
    debug_assert_eq!(cur, start, "orbit of {word} failed to close up");
    Ok(PeriodicOrbit { word, points, d })
}

/// Census entry: how many orbits share an interlacing number, and the
/// simplest (shortest, then lexicographically least) word among them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TallyEntry {
    pub count: usize,
    pub simplest: Word,
}

/// Interlacing census over all binary Lyndon words of length at most
/// `max_period`. Orbits are processed in `(length, lex)` order with a
/// deterministic merge, so the tally is reproducible across thread counts.
pub fn interlacing_tally(max_period: usize) -> Result<BTreeMap<usize, TallyEntry>, OrbitError> {
    let words = enumerate_lyndon(2, max_period)?;
    let per_word: Vec<(usize, Word)> = words
        .into_par_iter()
        .map(|w| {
            let orbit = orbit_from_word(&w, 2)?;
            Ok((orbit.interlacing_number()?, w))
        })
        .collect::<Result<_, OrbitError>>()?;
    let mut tally: BTreeMap<usize, TallyEntry> = BTreeMap::new();
    for (interlacing, word) in per_word {
        tally
            .entry(interlacing)
            .and_modify(|e| e.count += 1)
            .or_insert(TallyEntry {
                count: 1,
                simplest: word,
            });
    }
    Ok(tally)
}

/// Points of a finite forward-invariant set with at least two preimages
/// inside the set. Rejects sets that are not closed under `E_d`.
pub fn critical_points(
    k: &BTreeSet<CirclePoint>,
    d: u32,
) -> Result<BTreeSet<CirclePoint>, OrbitError> {
    let mut in_degree: HashMap<&CirclePoint, usize> = HashMap::new();
    for x in k {
        let image = x.expand(d)?;
        match k.get(&image) {
            Some(y) => *in_degree.entry(y).or_insert(0) += 1,
            None => return Err(OrbitError::NotForwardInvariant(x.clone())),
        }
    }
    Ok(in_degree
        .into_iter()
        .filter(|&(_, deg)| deg >= 2)
        .map(|(y, _)| y.clone())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::coding;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn orbit(s: &str) -> PeriodicOrbit {
        orbit_from_word(&w(s), 2).unwrap()
    }

    fn pt(n: i64, d: i64) -> CirclePoint {
        CirclePoint::from_ints(n, d)
    }

    #[test]
    fn orbit_0011_is_the_fifths_cycle() {
        let o = orbit("0011");
        assert_eq!(o.period(), 4);
        assert_eq!(
            o.points(),
            &[pt(1, 5), pt(2, 5), pt(4, 5), pt(3, 5)],
            "0011 reads as 3, so the orbit starts at 3/15 = 1/5"
        );
    }

    #[test]
    fn orbit_0001101_lives_over_127() {
        let o = orbit("0001101");
        let expected: Vec<CirclePoint> = [13, 26, 52, 104, 81, 35, 70]
            .iter()
            .map(|&n| pt(n, 127))
            .collect();
        assert_eq!(o.points(), expected.as_slice());
    }

    #[test]
    fn degenerate_words_share_the_fixed_point() {
        let zero = orbit("0");
        let one = orbit("1");
        assert_eq!(zero.points(), &[CirclePoint::zero()]);
        assert_eq!(one.points(), &[CirclePoint::zero()]);
        assert_eq!(zero.word(), &w("0"));
        assert_eq!(one.word(), &w("1"));
    }

    #[test]
    fn rotations_and_powers_normalize() {
        let a = orbit("0110");
        assert_eq!(a.word(), &w("0011"));
        assert_eq!(a.point_set(), orbit("0011").point_set());
        let b = orbit("0101");
        assert_eq!(b.word(), &w("01"));
        assert_eq!(b.points(), &[pt(1, 3), pt(2, 3)]);
    }

    #[test]
    fn itinerary_recovers_the_word() {
        // the label is the doubling itinerary of the first point, except
        // for the degenerate label "1" whose point 0 codes as "0"
        for word in enumerate_lyndon(2, 10).unwrap() {
            let o = orbit_from_word(&word, 2).unwrap();
            let itinerary = coding(&o.points()[0], 2, o.period()).unwrap();
            if word == w("1") {
                assert_eq!(itinerary, w("0"));
            } else {
                assert_eq!(itinerary, word, "itinerary mismatch for {word}");
            }
        }
    }

    #[test]
    fn interlacing_frozen_examples() {
        assert_eq!(orbit("0").interlacing_number().unwrap(), 1);
        assert_eq!(orbit("1").interlacing_number().unwrap(), 1);
        assert_eq!(orbit("01").interlacing_number().unwrap(), 1);
        assert_eq!(orbit("0011").interlacing_number().unwrap(), 3);
        assert_eq!(orbit("0001101").interlacing_number().unwrap(), 5);
        assert_eq!(orbit("000100111").interlacing_number().unwrap(), 7);
    }

    #[test]
    fn interlacing_is_odd_and_equals_half_the_switch_count() {
        // independent route: count label switches around the circle; blocks
        // of orbit points are exactly half of them
        for word in enumerate_lyndon(2, 10).unwrap() {
            let o = orbit_from_word(&word, 2).unwrap();
            let mut labelled: Vec<(CirclePoint, bool)> =
                o.points().iter().cloned().map(|p| (p, true)).collect();
            labelled.extend(o.antiorbit().unwrap().into_iter().map(|p| (p, false)));
            let sorted = circular_sort(labelled);
            let labels: Vec<bool> = sorted.entries.iter().map(|e| e.1).collect();
            let n = labels.len();
            let switches = (0..n).filter(|&i| labels[i] != labels[(i + 1) % n]).count();
            let got = o.interlacing_number().unwrap();
            assert_eq!(switches % 2, 0);
            assert_eq!(got, switches / 2, "switch count mismatch for {word}");
            assert_eq!(got % 2, 1, "interlacing of {word} is even");
        }
    }

    #[test]
    fn tally_up_to_period_four() {
        // hand census: of the eight words up to length 4 only 0011 has
        // interlacing 3, the rest are Sturmian
        let tally = interlacing_tally(4).unwrap();
        assert_eq!(tally.len(), 2);
        assert_eq!(tally[&1].count, 7);
        assert_eq!(tally[&1].simplest, w("0"));
        assert_eq!(tally[&3].count, 1);
        assert_eq!(tally[&3].simplest, w("0011"));
    }

    #[test]
    fn tally_agrees_with_direct_recount() {
        let tally = interlacing_tally(8).unwrap();
        let total: usize = tally.values().map(|e| e.count).sum();
        assert_eq!(total, enumerate_lyndon(2, 8).unwrap().len());
        for (interlacing, entry) in &tally {
            assert_eq!(
                orbit_from_word(&entry.simplest, 2)
                    .unwrap()
                    .interlacing_number()
                    .unwrap(),
                *interlacing
            );
        }
    }

    #[test]
    fn single_orbits_have_no_critical_points() {
        for word in enumerate_lyndon(2, 10).unwrap() {
            let o = orbit_from_word(&word, 2).unwrap();
            let crit = critical_points(&o.point_set(), 2).unwrap();
            assert!(crit.is_empty(), "unexpected critical points for {word}");
        }
    }

    #[test]
    fn critical_points_against_preimage_oracle() {
        // union of an orbit with its antiorbit is forward-invariant, and
        // every orbit point gains a second preimage
        let o = orbit("0011");
        let mut k = o.point_set();
        k.extend(o.antiorbit().unwrap());
        let crit = critical_points(&k, 2).unwrap();
        // oracle: x is critical iff both halves x/2 and x/2 + 1/2 lie in K
        let oracle: BTreeSet<CirclePoint> = k
            .iter()
            .filter(|x| {
                let half = CirclePoint::new(x.value() / crate::exact::rational(2, 1));
                k.contains(&half) && k.contains(&half.antipode())
            })
            .cloned()
            .collect();
        assert_eq!(crit, oracle);
        assert_eq!(crit, o.point_set(), "orbit points acquire both preimages");

        // two orbits over coprime denominators stay preimage-disjoint
        let mut union = orbit("0011").point_set();
        union.extend(orbit("0001101").point_set());
        let crit = critical_points(&union, 2).unwrap();
        let oracle: BTreeSet<CirclePoint> = union
            .iter()
            .filter(|x| {
                let half = CirclePoint::new(x.value() / crate::exact::rational(2, 1));
                union.contains(&half) && union.contains(&half.antipode())
            })
            .cloned()
            .collect();
        assert_eq!(crit, oracle);
        assert!(crit.is_empty());
    }

    #[test]
    fn critical_points_rejects_non_invariant_sets() {
        let mut k = BTreeSet::new();
        k.insert(pt(1, 5));
        let err = critical_points(&k, 2).unwrap_err();
        assert_eq!(err, OrbitError::NotForwardInvariant(pt(1, 5)));
    }

    #[test]
    fn fixed_point_with_its_other_preimage() {
        let k: BTreeSet<CirclePoint> = [CirclePoint::zero(), pt(1, 2)].into_iter().collect();
        let crit = critical_points(&k, 2).unwrap();
        assert_eq!(crit, [CirclePoint::zero()].into_iter().collect());
    }

    #[test]
    fn alphabet_must_match_degree() {
        assert!(matches!(
            orbit_from_word(&w("0011"), 3),
            Err(OrbitError::AlphabetMismatch { .. })
        ));
    }
}
