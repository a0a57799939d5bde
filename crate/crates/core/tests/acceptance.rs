//! Release gate: the ten checks this library promises to pass, one test
//! per criterion. Each prints a single `criterion ...: PASS` line on
//! success (visible with `--nocapture`); a failure panics with witnesses.
//! Tolerances and runtime budgets are pinned here, next to the checks
//! they govern.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num::integer::Roots;
use num::{BigInt, One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use flower_iet::bridge::round_trip_all;
use flower_iet::ergopt::{run_experiment, ExperimentConfig, OrbitTable, TrigPoly};
use flower_iet::exact::rational;
use flower_iet::flower::{complexity_adic, Arc};
use flower_iet::iet::{flower_from_iet, DeckShuffler};
use flower_iet::orbits::{interlacing_tally, orbit_from_word};
use flower_iet::symbolic::{
    enumerate_lyndon, is_sturmian_complexity, prefix_complexity, SymbolicOrbitSet, Word,
};
use flower_iet::{CirclePoint, Rational};

fn pass(name: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    assert!(
        elapsed < budget,
        "criterion {name} exceeded its {budget:?} budget: took {elapsed:?}"
    );
    println!("criterion {name}: PASS ({elapsed:.2?})");
}

fn shuffler(lengths: &[(i64, i64)]) -> DeckShuffler {
    DeckShuffler::new(lengths.iter().map(|&(n, d)| rational(n, d)).collect()).unwrap()
}

fn word(s: &str) -> Word {
    Word::parse(s, 2).unwrap()
}

#[test]
fn criterion_01_orbit_census() {
    let started = Instant::now();
    let words = enumerate_lyndon(2, 14).unwrap();
    assert_eq!(words.len(), 2_538, "binary Lyndon words up to length 14");
    let tally = interlacing_tally(14).unwrap();
    let expected = [
        (1, 65, "0"),
        (3, 470, "0011"),
        (5, 1006, "0001101"),
        (7, 742, "000100111"),
        (9, 227, "0001011101"),
        (11, 28, "000100111011"),
    ];
    assert_eq!(tally.len(), expected.len(), "interlacing values seen");
    for (interlacing, count, simplest) in expected {
        let entry = tally
            .get(&interlacing)
            .unwrap_or_else(|| panic!("no orbits with interlacing {interlacing}"));
        assert_eq!(entry.count, count, "orbit count at interlacing {interlacing}");
        assert_eq!(
            entry.simplest.to_string(),
            simplest,
            "simplest orbit at interlacing {interlacing}"
        );
    }
    pass("1 (orbit census)", started, Duration::from_secs(10));
}

#[test]
fn criterion_02_five_plateaus() {
    let started = Instant::now();
    let t = shuffler(&[(2, 5), (1, 5), (1, 5), (1, 5)]);
    let graph = t.h_graph(16).unwrap();
    let values: Vec<Rational> = graph.plateaus.iter().map(|p| p.value.clone()).collect();
    let expected: Vec<Rational> = [3, 6, 12, 17, 24].iter().map(|&n| rational(n, 31)).collect();
    assert_eq!(values, expected, "plateau values");
    for p in &graph.plateaus {
        assert_eq!(p.period, 5, "period on [{}, {})", p.lo, p.hi);
    }
    pass("2 (five plateaus)", started, Duration::from_secs(10));
}

#[test]
fn criterion_03_ten_plateaus_and_their_flower() {
    let started = Instant::now();
    let t = shuffler(&[(3, 10), (2, 10), (2, 10), (3, 10)]);
    let graph = t.h_graph(16).unwrap();
    let values: Vec<Rational> = graph.plateaus.iter().map(|p| p.value.clone()).collect();
    let expected: Vec<Rational> = [
        (1, 9),
        (1, 5),
        (2, 9),
        (2, 5),
        (4, 9),
        (5, 9),
        (3, 5),
        (7, 9),
        (4, 5),
        (8, 9),
    ]
    .iter()
    .map(|&(n, d)| rational(n, d))
    .collect();
    assert_eq!(values, expected, "plateau values");
    let periods: Vec<usize> = graph.plateaus.iter().map(|p| p.period).collect();
    assert_eq!(periods, [6, 4, 6, 4, 6, 6, 4, 6, 4, 6]);
    // construction validates the flower axioms; petal count and orbit
    // containment are the open part
    let f = flower_from_iet(&t, 64).unwrap();
    assert_eq!(f.petals().len(), 3, "petal count");
    for w in ["000111", "0011"] {
        let orbit = orbit_from_word(&word(w), 2).unwrap();
        for x in orbit.points() {
            assert!(f.contains(x), "flower misses {x} from orbit {w}");
        }
    }
    pass("3 (ten plateaus + flower)", started, Duration::from_secs(10));
}

/// ccw gap from `x` to the nearest point of `p`, zero inside.
fn dist_to_arc(p: &Arc, x: &CirclePoint) -> Rational {
    if p.contains(x) {
        return num::Zero::zero();
    }
    x.dist_ccw(p.left()).min(p.right().dist_ccw(x))
}

#[test]
fn criterion_04_golden_shuffler_at_bounded_precision() {
    let started = Instant::now();
    // b = (sqrt(5) - 1)/8 truncated to 120 fractional bits, a = 1/2 - 2b
    let root = Roots::sqrt(&(BigInt::from(5) << 240u32));
    let b = Rational::new(root - (BigInt::one() << 120), BigInt::one() << 123);
    let a = rational(1, 2) - rational(2, 1) * &b;
    let t = DeckShuffler::new(vec![
        a.clone(),
        &b + rational(1, 4),
        b.clone(),
        rational(1, 4),
    ])
    .unwrap();
    let depth = 60;
    let h_tolerance = Rational::new(BigInt::one(), BigInt::one() << 58);

    // the period-2 component [a+b, a+b+1/4) <-> [3/4, 1)
    for (x, expected) in [(&a + &b, rational(1, 3)), (rational(3, 4), rational(2, 3))] {
        let coding = t.ab_coding(&CirclePoint::new(x.clone()), depth);
        let err = (&coding.value - &expected).abs();
        assert!(
            err <= h_tolerance,
            "H({x}) = {} is off by {err}",
            coding.value
        );
    }

    // codings sampled from the complementary (rotation) component stay
    // within the Sturmian factor budget
    let mut samples: Vec<Vec<u8>> = Vec::new();
    for k in 0i64..16 {
        let x = CirclePoint::new(rational(k, 16) * (&a + &b));
        samples.push(t.ab_coding(&x, depth).prefix);
    }
    for k in 0i64..8 {
        let x = CirclePoint::new(rational(3, 4) - &b + rational(k, 8) * &b);
        samples.push(t.ab_coding(&x, depth).prefix);
    }
    assert!(samples.iter().all(|s| s.len() == depth));
    for n in 1..=12 {
        let c = prefix_complexity(&samples, n);
        assert!(c <= n + 1, "complexity C({n}) = {c} exceeds {}", n + 1);
    }

    let f = flower_from_iet(&t, depth).unwrap();
    assert_eq!(f.petals().len(), 3, "petal count");
    let smallest = f.petals().iter().min_by_key(|p| p.length()).unwrap();
    let two_thirds = CirclePoint::from_ints(2, 3);
    let gap = dist_to_arc(smallest, &two_thirds);
    let petal_tolerance = Rational::new(BigInt::one(), BigInt::one() << 40);
    assert!(
        gap <= petal_tolerance,
        "smallest petal {smallest} misses 2/3 by {gap}"
    );
    pass("4 (golden shuffler)", started, Duration::from_secs(30));
}

#[test]
fn criterion_05_round_trip_every_orbit() {
    let started = Instant::now();
    let reports = round_trip_all(14).unwrap();
    // every Lyndon word up to length 14 except the two labels of the
    // fixed point
    assert_eq!(reports.len(), 2_536, "orbits round-tripped");
    let failures: Vec<String> = reports
        .iter()
        .filter(|r| !r.all_pass())
        .map(|r| r.word.to_string())
        .collect();
    assert!(failures.is_empty(), "round-trip failures: {failures:?}");
    pass("5 (round trip)", started, Duration::from_secs(120));
}

#[test]
fn criterion_06_complexity_increments_bounded_by_interlacing() {
    let started = Instant::now();
    for w in enumerate_lyndon(2, 14).unwrap() {
        let orbit = orbit_from_word(&w, 2).unwrap();
        let p = orbit.interlacing_number().unwrap();
        let y: BTreeSet<CirclePoint> = orbit.point_set();
        let c: Vec<usize> = (0..=15)
            .map(|n| complexity_adic(&y, 2, n).unwrap())
            .collect();
        for n in 0..=14 {
            assert!(
                c[n + 1] - c[n] <= p,
                "orbit {w}: C({}) - C({n}) = {} exceeds interlacing {p}",
                n + 1,
                c[n + 1] - c[n]
            );
        }
        for n in 1..=15 {
            assert!(
                c[n] <= p * n + c[1],
                "orbit {w}: C({n}) = {} exceeds {p}*{n} + {}",
                c[n],
                c[1]
            );
        }
    }
    pass("6 (complexity bound)", started, Duration::from_secs(60));
}

#[test]
fn criterion_07_interlacing_one_means_sturmian() {
    let started = Instant::now();
    let words = enumerate_lyndon(2, 14).unwrap();
    assert_eq!(words.len(), 2_538);
    for w in words {
        let orbit = orbit_from_word(&w, 2).unwrap();
        let interlacing = orbit.interlacing_number().unwrap();
        let set = SymbolicOrbitSet::new([w.clone()]).unwrap();
        // past n = period the factor count is constant, so this horizon
        // decides the bound for all n
        let sturmian = is_sturmian_complexity(&set, w.len());
        assert_eq!(
            interlacing == 1,
            sturmian,
            "orbit {w}: interlacing {interlacing}, sturmian {sturmian}"
        );
    }
    pass("7 (sturmian equivalence)", started, Duration::from_secs(60));
}

#[test]
fn criterion_08_monotone_and_intertwining_fuzz() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    for trial in 0..500 {
        let m = rng.gen_range(1..=3usize);
        let n = 2 * m;
        let q = rng.gen_range(n as i64..=60);
        // n - 1 distinct cuts of [0, q] make n positive integer parts
        let mut cuts: Vec<i64> = rand::seq::index::sample(&mut rng, (q - 1) as usize, n - 1)
            .into_iter()
            .map(|i| i as i64 + 1)
            .collect();
        cuts.sort_unstable();
        cuts.insert(0, 0);
        cuts.push(q);
        let lengths: Vec<Rational> =
            cuts.windows(2).map(|w| rational(w[1] - w[0], q)).collect();
        let t = DeckShuffler::new(lengths).unwrap();
        // orbits of grid points stay on the grid, so q + 1 steps close
        // every cycle
        let depth = q as usize + 1;
        let h = |i: i64| {
            let coding = t.ab_coding(&CirclePoint::from_ints(i, q), depth);
            assert!(coding.is_exact(), "trial {trial}: grid coding truncated");
            coding.value
        };
        for _ in 0..100 {
            let i = rng.gen_range(0..q);
            let j = rng.gen_range(0..q);
            let (lo, hi) = (i.min(j), i.max(j));
            let (h_lo, h_hi) = (h(lo), h(hi));
            assert!(
                h_lo <= h_hi,
                "trial {trial}: H({lo}/{q}) = {h_lo} > H({hi}/{q}) = {h_hi}"
            );
            let image = t.apply(&CirclePoint::from_ints(lo, q));
            let h_image = t.ab_coding(&image, depth).value;
            let doubled = CirclePoint::new(h_lo * rational(2, 1)).into_value();
            assert_eq!(h_image, doubled, "trial {trial}: H(T({lo}/{q})) != 2 H({lo}/{q})");
        }
    }
    pass("8 (monotone/intertwining fuzz)", started, Duration::from_secs(120));
}

#[test]
fn criterion_09_pseudo_maximizers_have_low_interlacing() {
    let started = Instant::now();
    let run = |degree: u32, samples: u64| {
        let mut cfg = ExperimentConfig::new(degree, samples, 42);
        cfg.max_period = 14;
        run_experiment(&cfg).unwrap()
    };

    let cubic = run(3, 5_000);
    assert!(
        cubic.tally.keys().all(|&i| i <= 3),
        "degree-3 winner above interlacing 3: {:?}",
        cubic.tally
    );
    let three = *cubic.tally.get(&3).unwrap_or(&0) as f64 / 5_000.0;
    assert!(
        (0.15..=0.30).contains(&three),
        "interlacing-3 fraction {three} outside [0.15, 0.30]"
    );

    let quintic = run(5, 1_000);
    assert!(
        quintic.tally.keys().all(|&i| i <= 5),
        "degree-5 winner above interlacing 5: {:?}",
        quintic.tally
    );

    let linear = run(1, 1_000);
    assert_eq!(
        linear.tally.keys().copied().collect::<Vec<_>>(),
        [1],
        "degree-1 winners must all be rotation orbits"
    );
    pass("9 (pseudo-maximizer experiment)", started, Duration::from_secs(300));
}

#[test]
fn criterion_10_even_terms_integrate_like_their_odd_reduction() {
    let started = Instant::now();
    let max_freq = 6;
    let table = OrbitTable::new(10, max_freq).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0C0);
    let tolerance = 1e-9;
    for trial in 0..200 {
        let f = TrigPoly::new(
            (1..=max_freq)
                .map(|k| {
                    let a: f64 = rng.sample(rand_distr::StandardNormal);
                    let b: f64 = rng.sample(rand_distr::StandardNormal);
                    (k, (a, b))
                })
                .collect(),
        );
        let reduced = f.reduce_to_odd();
        for index in 0..table.len() {
            let gap = (table.integral(index, &f) - table.integral(index, &reduced)).abs();
            assert!(
                gap <= tolerance,
                "trial {trial}, orbit {}: integrals differ by {gap:e}",
                table.entries()[index].word()
            );
        }
    }
    pass("10 (cohomology reduction)", started, Duration::from_secs(60));
}
