//! Ergodic optimization over periodic orbits of the doubling map.
//!
//! A trigonometric polynomial is integrated exactly against the uniform
//! measure on every periodic orbit up to a period cap; the argmax orbit is
//! the pseudo maximizing measure for that observable. `run_experiment`
//! repeats this for a seeded batch of random polynomials drawn uniformly
//! from the coefficient sphere (odd frequencies only, since every even
//! frequency is cohomologous to an odd one) and tallies the interlacing
//! numbers of the winners.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::orbits::{orbit_from_word, OrbitError, PeriodicOrbit};
use crate::symbolic::{enumerate_lyndon, SymbolicError, Word};

/// Two integrals closer than this are treated as equal when picking the
/// maximizer; ties are broken by (period, lexicographic word) and flagged.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ErgoptError {
    #[error("degree must be odd, got {0}; even frequencies carry no information here (see reduce_to_odd)")]
    EvenDegree(u32),
    #[error("need at least one sample")]
    NoSamples,
    #[error("need max_period >= 1 to have any orbits to integrate against")]
    NoOrbits,
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
}

/// A finite trigonometric polynomial Σ a_k cos(2πkx) + b_k sin(2πkx)
/// with double-precision coefficients, frequencies k ≥ 1.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    coefficients: BTreeMap<u32, (f64, f64)>,
}

impl TrigPoly {
    pub fn new(coefficients: BTreeMap<u32, (f64, f64)>) -> TrigPoly {
        assert!(
            !coefficients.contains_key(&0),
            "frequency 0 is a constant term, not part of a trig polynomial here"
        );
        TrigPoly { coefficients }
    }

    pub fn zero() -> TrigPoly {
        TrigPoly {
            coefficients: BTreeMap::new(),
        }
    }

    /// The polynomial with the sphere-ordered odd coefficients
    /// (a_1, b_1, a_3, b_3, …, a_degree, b_degree).
    pub fn from_odd_coefficients(degree: u32, coefficients: &[f64]) -> TrigPoly {
        assert_eq!(degree % 2, 1, "odd frequencies only");
        assert_eq!(coefficients.len() as u32, degree + 1);
        let mut map = BTreeMap::new();
        for (i, k) in (1..=degree).step_by(2).enumerate() {
            map.insert(k, (coefficients[2 * i], coefficients[2 * i + 1]));
        }
        TrigPoly { coefficients: map }
    }

    pub fn coefficients(&self) -> &BTreeMap<u32, (f64, f64)> {
        &self.coefficients
    }

    /// Largest frequency present, 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.coefficients.keys().next_back().copied().unwrap_or(0)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .map(|(&k, &(a, b))| {
                let t = TAU * k as f64 * x;
                a * t.cos() + b * t.sin()
            })
            .sum()
    }

    pub fn eval(&self, x: &crate::exact::CirclePoint) -> f64 {
        self.eval_f64(x.to_f64())
    }

    pub fn scale(&self, c: f64) -> TrigPoly {
        TrigPoly {
            coefficients: self
                .coefficients
                .iter()
                .map(|(&k, &(a, b))| (k, (c * a, c * b)))
                .collect(),
        }
    }

    /// Replace every term of even frequency 2^j·k (k odd) by the same
    /// coefficients at frequency k. Valid against any doubling-invariant
    /// measure: cos(2πkx) ∘ E_2 − cos(2πkx) is a coboundary, so both
    /// frequencies integrate identically. Colliding coefficients sum.
    pub fn reduce_to_odd(&self) -> TrigPoly {
        let mut map: BTreeMap<u32, (f64, f64)> = BTreeMap::new();
        for (&k, &(a, b)) in &self.coefficients {
            let mut k = k;
            while k % 2 == 0 {
                k /= 2;
            }
            let entry = map.entry(k).or_insert((0.0, 0.0));
            entry.0 += a;
            entry.1 += b;
        }
        TrigPoly { coefficients: map }
    }
}

/// The integral of `f` against the uniform invariant measure on the orbit.
pub fn integrate_orbit(f: &TrigPoly, o: &PeriodicOrbit) -> f64 {
    let sum: f64 = o.points().iter().map(|x| f.eval(x)).sum();
    sum / o.period() as f64
}

/// One enumerated orbit with its Fourier averages precomputed: the
/// integral of any polynomial of degree ≤ max_freq against the orbit is a
/// dot product with these tables.
#[derive(Debug, Clone)]
pub struct OrbitEntry {
    word: Word,
    period: usize,
    interlacing: usize,
    /// cos_avg[k−1] = mean of cos(2πk·x) over the orbit, k = 1..=max_freq.
    cos_avg: Vec<f64>,
    sin_avg: Vec<f64>,
}

impl OrbitEntry {
    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn interlacing(&self) -> usize {
        self.interlacing
    }
}

/// All periodic orbits up to a period cap, sorted by (period, word),
/// with Fourier averages for frequencies 1..=max_freq.
#[derive(Debug, Clone)]
pub struct OrbitTable {
    entries: Vec<OrbitEntry>,
    max_freq: u32,
}

impl OrbitTable {
    pub fn new(max_period: usize, max_freq: u32) -> Result<OrbitTable, ErgoptError> {
        if max_period == 0 {
            return Err(ErgoptError::NoOrbits);
        }
        let mut words = enumerate_lyndon(2, max_period)?;
        words.sort();
        // "0" and "1" both label the fixed point (0.111… = 1 ≡ 0), the one
        // point-set collision among Lyndon words; keep one entry per
        // measure so fixed-point wins are not flagged as self-ties
        words.retain(|w| w.symbols() != [1]);
        let entries = words
            .into_par_iter()
            .map(|word| {
                let orbit = orbit_from_word(&word, 2)?;
                let interlacing = orbit.interlacing_number()?;
                let points: Vec<f64> = orbit.points().iter().map(|x| x.to_f64()).collect();
                let mut cos_avg = Vec::with_capacity(max_freq as usize);
                let mut sin_avg = Vec::with_capacity(max_freq as usize);
                for k in 1..=max_freq {
                    let mut c = 0.0;
                    let mut s = 0.0;
                    for &x in &points {
                        let t = TAU * k as f64 * x;
                        c += t.cos();
                        s += t.sin();
                    }
                    cos_avg.push(c / points.len() as f64);
                    sin_avg.push(s / points.len() as f64);
                }
                Ok(OrbitEntry {
                    word,
                    period: orbit.period(),
                    interlacing,
                    cos_avg,
                    sin_avg,
                })
            })
            .collect::<Result<Vec<_>, ErgoptError>>()?;
        Ok(OrbitTable { entries, max_freq })
    }

    pub fn entries(&self) -> &[OrbitEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn integral(&self, index: usize, f: &TrigPoly) -> f64 {
        assert!(
            f.degree() <= self.max_freq,
            "orbit table holds frequencies up to {}, polynomial has degree {}",
            self.max_freq,
            f.degree()
        );
        let entry = &self.entries[index];
        f.coefficients
            .iter()
            .map(|(&k, &(a, b))| {
                let i = (k - 1) as usize;
                a * entry.cos_avg[i] + b * entry.sin_avg[i]
            })
            .sum()
    }

    /// Index, integral, and tie flag of the maximizing orbit. Entries are
    /// sorted by (period, word), so the first entry within TIE_TOLERANCE
    /// of the maximum is the deterministic tie-break winner.
    fn pick(&self, f: &TrigPoly, scratch: &mut Vec<f64>) -> (usize, f64, bool) {
        scratch.clear();
        scratch.extend((0..self.entries.len()).map(|i| self.integral(i, f)));
        let max = scratch.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut pick = None;
        let mut contenders = 0usize;
        for (i, &v) in scratch.iter().enumerate() {
            if v >= max - TIE_TOLERANCE {
                contenders += 1;
                if pick.is_none() {
                    pick = Some(i);
                }
            }
        }
        let index = pick.expect("nonempty table");
        (index, scratch[index], contenders > 1)
    }
}

/// The winning orbit for one polynomial.
#[derive(Debug, Clone)]
pub struct Maximizer {
    pub orbit: PeriodicOrbit,
    pub value: f64,
    /// Another enumerated orbit came within TIE_TOLERANCE of the winner.
    pub tied: bool,
}

/// The orbit maximizing the integral of `f` among all periodic orbits of
/// period ≤ max_period; ties broken by (period, lexicographic word).
pub fn pseudo_maximizer(f: &TrigPoly, max_period: usize) -> Result<Maximizer, ErgoptError> {
    let table = OrbitTable::new(max_period, f.degree().max(1))?;
    let mut scratch = Vec::new();
    let (index, value, tied) = table.pick(f, &mut scratch);
    let orbit = orbit_from_word(table.entries[index].word(), 2)?;
    Ok(Maximizer { orbit, value, tied })
}

/// Draw the coefficient vector (a_1, b_1, a_3, b_3, …, a_deg, b_deg)
/// uniformly from the unit sphere: independent standard normals,
/// normalized. Odd frequencies only.
pub fn sample_sphere_coefficients<R: Rng>(degree: u32, rng: &mut R) -> Vec<f64> {
    assert_eq!(degree % 2, 1, "odd frequencies only");
    let n = (degree + 1) as usize;
    loop {
        let raw: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = raw.iter().map(|z| z * z).sum::<f64>().sqrt();
        if norm > 1e-150 {
            return raw.iter().map(|z| z / norm).collect();
        }
    }
}

pub fn sample_sphere<R: Rng>(degree: u32, rng: &mut R) -> TrigPoly {
    TrigPoly::from_odd_coefficients(degree, &sample_sphere_coefficients(degree, rng))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    /// Odd; the highest frequency sampled.
    pub degree: u32,
    pub samples: u64,
    /// Orbit enumeration cap.
    pub max_period: usize,
    pub seed: u64,
    /// Worker threads; 0 uses the global default.
    pub threads: usize,
}

impl ExperimentConfig {
    pub fn new(degree: u32, samples: u64, seed: u64) -> ExperimentConfig {
        ExperimentConfig {
            degree,
            samples,
            max_period: 14,
            seed,
            threads: 0,
        }
    }

    fn validate(&self) -> Result<(), ErgoptError> {
        if self.degree % 2 == 0 {
            return Err(ErgoptError::EvenDegree(self.degree));
        }
        if self.samples == 0 {
            return Err(ErgoptError::NoSamples);
        }
        if self.max_period == 0 {
            return Err(ErgoptError::NoOrbits);
        }
        Ok(())
    }
}

/// One sample's outcome, enough to reconstruct the draw and the winner.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord {
    pub sample_id: u64,
    /// Sphere-ordered coefficients (a_1, b_1, a_3, b_3, …).
    pub coefficients: Vec<f64>,
    pub argmax_word: Word,
    pub integral: f64,
    pub interlacing: usize,
    pub tied: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    /// interlacing number → how many samples' winners had it.
    pub tally: BTreeMap<usize, u64>,
    pub records: Vec<SampleRecord>,
}

/// Integrate `samples` random sphere polynomials against every orbit up
/// to the period cap and tally the winners' interlacing numbers.
/// Deterministic for a fixed seed regardless of thread count: sample i
/// draws from its own RNG stream (seed, i) and the tally is merged in
/// sample order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult, ErgoptError> {
    cfg.validate()?;
    let body = || -> Result<ExperimentResult, ErgoptError> {
        let table = OrbitTable::new(cfg.max_period, cfg.degree)?;
        let records: Vec<SampleRecord> = (0..cfg.samples)
            .into_par_iter()
            .map_init(
                Vec::new,
                |scratch, sample_id| {
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                    rng.set_stream(sample_id);
                    let coefficients = sample_sphere_coefficients(cfg.degree, &mut rng);
                    let f = TrigPoly::from_odd_coefficients(cfg.degree, &coefficients);
                    let (index, integral, tied) = table.pick(&f, scratch);
                    let entry = &table.entries()[index];
                    SampleRecord {
                        sample_id,
                        coefficients,
                        argmax_word: entry.word().clone(),
                        integral,
                        interlacing: entry.interlacing(),
                        tied,
                    }
                },
            )
            .collect();
        let mut tally = BTreeMap::new();
        for record in &records {
            *tally.entry(record.interlacing).or_insert(0) += 1;
        }
        Ok(ExperimentResult { tally, records })
    };
    if cfg.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .expect("thread pool")
            .install(body)
    } else {
        body()
    }
}
