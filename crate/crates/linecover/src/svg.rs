//! Static SVG drawing of an arrangement in the affine chart `x2 = 1`.

use std::fmt::Write;

use linecover_core::arrangement::IncidenceTable;
use num_bigint::BigInt;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;

fn to_f64(x: &BigInt) -> f64 {
    x.to_string().parse().unwrap_or(f64::NAN)
}

/// Draw the lines clipped to `[-window, window]²`, singular points as dots
/// labelled with `μ`. Objects at infinity are listed below the plot.
pub fn render(t: &IncidenceTable, window: f64) -> String {
    let scale = (SIZE - 2.0 * MARGIN) / (2.0 * window);
    let px = |x: f64| MARGIN + (x + window) * scale;
    let py = |y: f64| SIZE - MARGIN - (y + window) * scale;
    let mut at_infinity = Vec::new();
    let mut s = String::new();
    let height = SIZE + 20.0 * (t.num_lines() as f64 / 6.0).ceil() + 60.0;
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{height}" viewBox="0 0 {SIZE} {height}">"#).unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{w}" height="{w}" fill="none" stroke="#999"/>"##,
        w = SIZE - 2.0 * MARGIN
    )
    .unwrap();
    for (i, l) in t.lines().iter().enumerate() {
        let [a, b, c] = l.coords().clone().map(|v| to_f64(&v));
        if a == 0.0 && b == 0.0 {
            at_infinity.push(format!("L{} = {l}", i + 1));
            continue;
        }
        // a x + b y + c = 0 against the four window edges
        let mut hits: Vec<(f64, f64)> = Vec::new();
        for &e in &[-window, window] {
            if b != 0.0 {
                let y = -(a * e + c) / b;
                if y.abs() <= window {
                    hits.push((e, y));
                }
            }
            if a != 0.0 {
                let x = -(b * e + c) / a;
                if x.abs() <= window {
                    hits.push((x, e));
                }
            }
        }
        hits.sort_by(|p, q| p.partial_cmp(q).unwrap());
        hits.dedup_by(|p, q| (p.0 - q.0).abs() < 1e-9 && (p.1 - q.1).abs() < 1e-9);
        if let (Some(p), Some(q)) = (hits.first(), hits.last()) {
            writeln!(
                s,
                r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#3465a4" stroke-width="1"><title>L{} {l}</title></line>"##,
                px(p.0),
                py(p.1),
                px(q.0),
                py(q.1),
                i + 1
            )
            .unwrap();
        }
    }
    for nu in 0..t.num_points() {
        let x = &t.points()[nu];
        let [a, b, c] = x.coords().clone().map(|v| to_f64(&v));
        let mu = t.mu(nu);
        if c == 0.0 {
            at_infinity.push(format!("{x} (μ={mu})"));
            continue;
        }
        let (u, v) = (a / c, b / c);
        if u.abs() > window || v.abs() > window {
            continue;
        }
        let r = 2.0 + mu as f64;
        writeln!(
            s,
            r##"<circle cx="{:.2}" cy="{:.2}" r="{r}" fill="#cc0000"><title>{x} μ={mu}</title></circle><text x="{:.2}" y="{:.2}" font-size="11" font-family="sans-serif">{mu}</text>"##,
            px(u),
            py(v),
            px(u) + r + 1.0,
            py(v) - r - 1.0
        )
        .unwrap();
    }
    let mut y = SIZE + 10.0;
    for chunk in at_infinity.chunks(4) {
        writeln!(s, r#"<text x="{MARGIN}" y="{y}" font-size="12" font-family="monospace">at infinity: {}</text>"#, chunk.join(", ")).unwrap();
        y += 18.0;
    }
    s.push_str("</svg>\n");
    s
}
