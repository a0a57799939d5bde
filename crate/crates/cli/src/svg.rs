//! Hand-emitted SVG for the two figures the tool produces: a flower drawn
//! on the circle and a step graph of the coding map `H`. No timestamps, no
//! randomness, and every float printed through [`fmt_num`], so output for
//! fixed input is byte-identical across runs.

use std::f64::consts::TAU;
use std::fmt::Write;

use flower_iet::flower::Flower;

const PETAL: &str = "#336699";
const SHADOW: &str = "#c8c8c8";
const DOT: &str = "#cc3333";
const FRAME: &str = "#888888";
const LABEL: &str = "#444444";

/// Shortest decimal form with at most 12 significant digits.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return "0".to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (11 - mag).clamp(0, 17) as usize;
    let s = format!("{x:.decimals$}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Screen position of the circle point `t`, counterclockwise from the
/// rightmost point (the y axis points down on screen, hence the sign).
fn on_circle(cx: f64, cy: f64, r: f64, t: f64) -> (f64, f64) {
    let theta = TAU * t;
    (cx + r * theta.cos(), cy - r * theta.sin())
}

fn arc_path(cx: f64, cy: f64, r: f64, left: f64, len: f64) -> String {
    let (x1, y1) = on_circle(cx, cy, r, left);
    let (x2, y2) = on_circle(cx, cy, r, left + len);
    // sweep 0 is counterclockwise on screen because of the y flip
    let large = u8::from(len > 0.5);
    format!(
        "M {} {} A {} {} 0 {} 0 {} {}",
        fmt_num(x1),
        fmt_num(y1),
        fmt_num(r),
        fmt_num(r),
        large,
        fmt_num(x2),
        fmt_num(y2)
    )
}

fn dot(s: &mut String, x: f64, y: f64, r: f64, fill: &str) {
    writeln!(
        s,
        "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{fill}\"/>",
        fmt_num(x),
        fmt_num(y),
        fmt_num(r)
    )
    .unwrap();
}

/// The flower as thick arcs on a guide circle, its antipodal copy as a
/// thin dashed shadow (the two must tile the circle), and marked points.
pub fn flower_group(f: &Flower, marks: &[f64], cx: f64, cy: f64, r: f64) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"{SHADOW}\" stroke-width=\"1\"/>",
        fmt_num(cx),
        fmt_num(cy),
        fmt_num(r)
    )
    .unwrap();
    // tick and label at 0
    let (tx, ty) = on_circle(cx, cy, r, 0.0);
    writeln!(
        s,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{LABEL}\" stroke-width=\"1\"/>",
        fmt_num(tx - 5.0),
        fmt_num(ty),
        fmt_num(tx + 5.0),
        fmt_num(ty)
    )
    .unwrap();
    writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" fill=\"{LABEL}\">0</text>",
        fmt_num(tx + 9.0),
        fmt_num(ty + 4.0)
    )
    .unwrap();

    let arcs: Vec<(f64, f64)> = f
        .petals()
        .iter()
        .map(|p| (p.left().to_f64(), crate::r2f(&p.length())))
        .collect();
    // shadow first so the petals draw over the shared endpoints
    for &(left, len) in &arcs {
        if len == 0.0 {
            let (x, y) = on_circle(cx, cy, r, left + 0.5);
            dot(&mut s, x, y, 3.0, SHADOW);
        } else {
            writeln!(
                s,
                "<path d=\"{}\" fill=\"none\" stroke=\"{SHADOW}\" stroke-width=\"5\" stroke-dasharray=\"4 4\"/>",
                arc_path(cx, cy, r, left + 0.5, len)
            )
            .unwrap();
        }
    }
    for &(left, len) in &arcs {
        if len == 0.0 {
            let (x, y) = on_circle(cx, cy, r, left);
            dot(&mut s, x, y, 5.0, PETAL);
        } else {
            writeln!(
                s,
                "<path d=\"{}\" fill=\"none\" stroke=\"{PETAL}\" stroke-width=\"11\"/>",
                arc_path(cx, cy, r, left, len)
            )
            .unwrap();
        }
    }
    for &m in marks {
        let (x, y) = on_circle(cx, cy, r, m);
        dot(&mut s, x, y, 4.0, DOT);
    }
    s
}

/// Step graph of `H` from horizontal segments `(x_lo, x_hi, value)` in the
/// unit square, drawn into a `side`-sized frame at `(x0, y0)`.
pub fn graph_group(segments: &[(f64, f64, f64)], x0: f64, y0: f64, side: f64) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"{FRAME}\" stroke-width=\"1\"/>",
        fmt_num(x0),
        fmt_num(y0),
        fmt_num(side),
        fmt_num(side)
    )
    .unwrap();
    writeln!(
        s,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{SHADOW}\" stroke-width=\"1\" stroke-dasharray=\"6 6\"/>",
        fmt_num(x0),
        fmt_num(y0 + side),
        fmt_num(x0 + side),
        fmt_num(y0)
    )
    .unwrap();
    for &(lo, hi, v) in segments {
        let y = y0 + side - v * side;
        writeln!(
            s,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{PETAL}\" stroke-width=\"2\"/>",
            fmt_num(x0 + lo * side),
            fmt_num(y),
            fmt_num(x0 + hi * side),
            fmt_num(y)
        )
        .unwrap();
    }
    for (label, x, y) in [
        ("0", x0 - 12.0, y0 + side + 14.0),
        ("1", x0 + side + 4.0, y0 + side + 14.0),
        ("1", x0 - 12.0, y0 + 4.0),
    ] {
        writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" fill=\"{LABEL}\">{label}</text>",
            fmt_num(x),
            fmt_num(y)
        )
        .unwrap();
    }
    s
}

pub fn document(width: u32, height: u32, body: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n<rect width=\"{width}\" height=\"{height}\" \
         fill=\"#ffffff\"/>\n{body}</svg>\n"
    )
}

/// A flower alone.
pub fn flower_svg(f: &Flower, marks: &[f64]) -> String {
    document(460, 460, &flower_group(f, marks, 230.0, 230.0, 180.0))
}

/// Step graph of `H` on the left, the image flower on the right.
pub fn graph_and_flower_svg(segments: &[(f64, f64, f64)], f: &Flower, marks: &[f64]) -> String {
    let mut body = graph_group(segments, 50.0, 50.0, 420.0);
    body.push_str(&flower_group(f, marks, 750.0, 260.0, 180.0));
    document(990, 520, &body)
}
