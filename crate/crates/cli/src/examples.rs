//! The worked reproductions behind `example {1|2|3}`: two fully rational
//! deck shufflers whose plateau tables are printed exactly, and the
//! golden-ratio shuffler whose phase space splits into a period-2
//! component and a rotation.

use std::collections::BTreeSet;
use std::fmt::Write;
use std::path::Path;

use flower_iet::exact::{rational, CirclePoint, Rational};
use flower_iet::iet::{flower_from_iet, DeckShuffler, HGraph};
use flower_iet::orbits::{orbit_from_word, PeriodicOrbit};
use flower_iet::symbolic::{prefix_complexity, Word};
use num::integer::Roots;
use num::{BigInt, One};
use serde_json::json;

use crate::{
    iet_failure, interval_label, invalid, join, r2f, svg, write_svg, Failure, OutFormat,
};

pub fn cmd_example(n: u8, svg_path: Option<&Path>, out: OutFormat) -> Result<String, Failure> {
    match n {
        1 => rational_example(
            vec![rational(2, 5), rational(1, 5), rational(1, 5), rational(1, 5)],
            svg_path,
            out,
        ),
        2 => rational_example(
            vec![rational(3, 10), rational(2, 10), rational(2, 10), rational(3, 10)],
            svg_path,
            out,
        ),
        3 => golden_example(svg_path, out),
        other => Err(Failure::Validation(format!(
            "example must be 1, 2 or 3, got {other}"
        ))),
    }
}

fn plateau_segments(graph: &HGraph) -> Vec<(f64, f64, f64)> {
    graph
        .plateaus
        .iter()
        .map(|p| (r2f(&p.lo), r2f(&p.hi), r2f(&p.value)))
        .collect()
}

/// Rational lengths: every point is periodic, `H` is a finite staircase
/// and its image splits into finitely many exact orbits.
fn rational_example(
    lengths: Vec<Rational>,
    svg_path: Option<&Path>,
    out: OutFormat,
) -> Result<String, Failure> {
    let t = DeckShuffler::new(lengths).map_err(iet_failure)?;
    let graph = t.h_graph(16).map_err(iet_failure)?;
    let flower = flower_from_iet(&t, 64).map_err(iet_failure)?;

    // one orbit per distinct cycle, keyed by the canonical rotation
    let mut seen: BTreeSet<Word> = BTreeSet::new();
    let mut orbits: Vec<PeriodicOrbit> = Vec::new();
    for p in &graph.plateaus {
        let w = p.cycle.canonical();
        if seen.insert(w.clone()) {
            orbits.push(orbit_from_word(&w, 2).map_err(invalid)?);
        }
    }
    let periods: BTreeSet<usize> = graph.plateaus.iter().map(|p| p.period).collect();

    if let Some(path) = svg_path {
        let marks: Vec<f64> = orbits
            .iter()
            .flat_map(|o| o.points().iter().map(CirclePoint::to_f64))
            .collect();
        write_svg(path, &svg::graph_and_flower_svg(&plateau_segments(&graph), &flower, &marks))?;
    }

    let part = |lo: &Rational| interval_label(&t, &CirclePoint::new(lo.clone()));
    match out {
        OutFormat::Text => {
            let mut s = String::new();
            writeln!(s, "deck shuffler lengths ({})", join(t.iet().lengths(), ", ")).unwrap();
            writeln!(s).unwrap();
            writeln!(s, "plateau | part | cycle | H | period").unwrap();
            for p in &graph.plateaus {
                writeln!(
                    s,
                    "[{}, {}) | {} | {} | {} | {}",
                    p.lo,
                    p.hi,
                    part(&p.lo),
                    p.cycle,
                    p.value,
                    p.period
                )
                .unwrap();
            }
            writeln!(s).unwrap();
            writeln!(s, "periods: {}", join(&periods, ", ")).unwrap();
            writeln!(s, "image orbits:").unwrap();
            for o in &orbits {
                writeln!(s, "  {}: {}", o.word(), join(o.points(), " ")).unwrap();
            }
            writeln!(s, "flower:").unwrap();
            for petal in flower.petals() {
                writeln!(s, "  {petal}").unwrap();
            }
            Ok(s)
        }
        OutFormat::Json => {
            let plateaus: Vec<serde_json::Value> = graph
                .plateaus
                .iter()
                .map(|p| {
                    json!({
                        "lo": p.lo.to_string(),
                        "hi": p.hi.to_string(),
                        "part": part(&p.lo),
                        "cycle": p.cycle.to_string(),
                        "value": p.value.to_string(),
                        "period": p.period,
                    })
                })
                .collect();
            let orbits: Vec<serde_json::Value> = orbits
                .iter()
                .map(|o| {
                    json!({
                        "word": o.word().to_string(),
                        "points": o.points().iter().map(ToString::to_string).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let doc = json!({
                "lengths": t.iet().lengths().iter().map(ToString::to_string).collect::<Vec<_>>(),
                "plateaus": plateaus,
                "orbits": orbits,
                "flower": flower.to_json(),
            });
            Ok(serde_json::to_string_pretty(&doc).unwrap() + "\n")
        }
        OutFormat::Csv => Err(Failure::Validation(
            "csv output is not available for examples; use text or json".to_string(),
        )),
    }
}

/// Lengths `(a, b + 1/4, b, 1/4)` with `b = (sqrt(5) - 1)/8` truncated to
/// 120 fractional bits and `a = 1/2 - 2b`. The truncation keeps all later
/// arithmetic exact while staying within `2^(-120)` of the irrational
/// target, far below anything the depth-60 codings can distinguish.
fn golden_lengths() -> (Rational, Rational, Vec<Rational>) {
    let root = Roots::sqrt(&(BigInt::from(5) << 240u32));
    let b = Rational::new(root - (BigInt::one() << 120), BigInt::one() << 123);
    let a = rational(1, 2) - rational(2, 1) * &b;
    let lengths = vec![a.clone(), &b + rational(1, 4), b.clone(), rational(1, 4)];
    (a, b, lengths)
}

/// The two-component shuffler: `A_22 = [a+b, a+b+1/4)` and `B_2 = [3/4, 1)`
/// swap (an exact 2-cycle), while the rest rotates by `2b`. Both claims
/// are checked, not assumed; a miss is an internal-consistency failure.
fn golden_example(svg_path: Option<&Path>, out: OutFormat) -> Result<String, Failure> {
    let (a, b, lengths) = golden_lengths();
    let t = DeckShuffler::new(lengths).map_err(iet_failure)?;
    let depth = 60;

    let on_a22 = t.ab_coding(&CirclePoint::new(&a + &b), depth);
    let on_b2 = t.ab_coding(&CirclePoint::new(rational(3, 4)), depth);
    if !(on_a22.is_exact() && on_b2.is_exact()) {
        return Err(Failure::Internal(
            "the period-2 component did not close within depth 60".to_string(),
        ));
    }
    if on_a22.value != rational(1, 3) || on_b2.value != rational(2, 3) {
        return Err(Failure::Internal(format!(
            "period-2 component coded to {} and {}, expected 1/3 and 2/3",
            on_a22.value, on_b2.value
        )));
    }

    // sample the rotation component [0, a+b) u [3/4-b, 3/4) and count the
    // distinct factors of the sampled codings
    let mut samples: Vec<Vec<u8>> = Vec::new();
    for k in 0i64..16 {
        let x = CirclePoint::new(rational(k, 16) * (&a + &b));
        samples.push(t.ab_coding(&x, depth).prefix);
    }
    for k in 0i64..8 {
        let x = CirclePoint::new(rational(3, 4) - &b + rational(k, 8) * &b);
        samples.push(t.ab_coding(&x, depth).prefix);
    }
    let counts: Vec<usize> = (1..=12).map(|n| prefix_complexity(&samples, n)).collect();
    if let Some((i, &c)) = counts.iter().enumerate().find(|&(i, &c)| c > i + 2) {
        return Err(Failure::Internal(format!(
            "rotation component has {c} factors of length {}, above the Sturmian bound {}",
            i + 1,
            i + 2
        )));
    }

    let flower = flower_from_iet(&t, depth).map_err(iet_failure)?;
    let smallest = flower
        .petals()
        .iter()
        .min_by_key(|p| p.length())
        .expect("flower has petals");
    if !smallest.contains(&CirclePoint::new(rational(2, 3))) {
        return Err(Failure::Internal(format!(
            "smallest petal {smallest} does not contain 2/3"
        )));
    }

    if let Some(path) = svg_path {
        // the grid is astronomical here, so sample the graph instead of
        // walking plateaus
        let resolution = 1024usize;
        let segments: Vec<(f64, f64, f64)> = (0..resolution)
            .map(|k| {
                let x = CirclePoint::new(rational(k as i64, resolution as i64));
                let v = t.ab_coding(&x, depth).value;
                (
                    k as f64 / resolution as f64,
                    (k + 1) as f64 / resolution as f64,
                    r2f(&v),
                )
            })
            .collect();
        write_svg(
            path,
            &svg::graph_and_flower_svg(&segments, &flower, &[1.0 / 3.0, 2.0 / 3.0]),
        )?;
    }

    match out {
        OutFormat::Text => {
            let mut s = String::new();
            writeln!(s, "deck shuffler lengths (a, b + 1/4, b, 1/4)").unwrap();
            writeln!(
                s,
                "b = (sqrt(5) - 1)/8 truncated to 120 fractional bits ~ {}",
                svg::fmt_num(r2f(&b))
            )
            .unwrap();
            writeln!(s, "a = 1/2 - 2b ~ {}", svg::fmt_num(r2f(&a))).unwrap();
            writeln!(s).unwrap();
            writeln!(s, "period-2 component: A_22 = [a+b, a+b+1/4) <-> B_2 = [3/4, 1)").unwrap();
            writeln!(
                s,
                "H on A_22 = ({})^inf = {} (exact)",
                on_a22.cycle.as_ref().unwrap(),
                on_a22.value
            )
            .unwrap();
            writeln!(
                s,
                "H on B_2 = ({})^inf = {} (exact)",
                on_b2.cycle.as_ref().unwrap(),
                on_b2.value
            )
            .unwrap();
            writeln!(s).unwrap();
            writeln!(s, "rotation component A_1 u A_21 u B_1 = [0, a+b) u [3/4-b, 3/4)").unwrap();
            writeln!(
                s,
                "conjugate to the rotation by 2b ~ {}",
                svg::fmt_num(r2f(&(rational(2, 1) * &b)))
            )
            .unwrap();
            writeln!(
                s,
                "factor counts C(1)..C(12) over {} sampled codings at depth {depth}: {}",
                samples.len(),
                join(&counts, " ")
            )
            .unwrap();
            writeln!(s, "Sturmian bound C(n) <= n + 1: holds").unwrap();
            writeln!(s).unwrap();
            writeln!(s, "flower (endpoints to 12 digits):").unwrap();
            for petal in flower.petals() {
                writeln!(
                    s,
                    "  [{}, {}]",
                    svg::fmt_num(petal.left().to_f64()),
                    svg::fmt_num(petal.right().to_f64())
                )
                .unwrap();
            }
            writeln!(s, "smallest petal contains 2/3: yes").unwrap();
            Ok(s)
        }
        OutFormat::Json => {
            let doc = json!({
                "a": a.to_string(),
                "b": b.to_string(),
                "lengths": t.iet().lengths().iter().map(ToString::to_string).collect::<Vec<_>>(),
                "periodic_component": {
                    "cycles": ["01", "10"],
                    "values": [on_a22.value.to_string(), on_b2.value.to_string()],
                    "exact": true,
                },
                "rotation_component": {
                    "rotation_number": (rational(2, 1) * &b).to_string(),
                    "factor_counts": counts,
                    "sturmian_bound_holds": true,
                },
                "flower": flower.to_json(),
                "smallest_petal_contains_two_thirds": true,
            });
            Ok(serde_json::to_string_pretty(&doc).unwrap() + "\n")
        }
        OutFormat::Csv => Err(Failure::Validation(
            "csv output is not available for examples; use text or json".to_string(),
        )),
    }
}
