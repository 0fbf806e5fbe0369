//! SVG and TikZ pictures of the junior simplex with the triangulation, the
//! classical markings and, optionally, the CT-subdivision of one character.
//!
//! `Δ` is drawn as an equilateral triangle: `e_x` bottom left, `e_y` bottom
//! right, `e_z` on top. Floating point is used only for these coordinates.

use std::fmt::Write;

use crate::analysis::Analysis;
use crate::ct::Area;
use crate::divisor::prime_name;
use crate::group::Character;

const SIDE: f64 = 600.0;
const MARGIN: f64 = 40.0;

/// Fill colours for `Cx, Cy, Cz, Tyz, Txz, Txy`.
const AREA_COLOURS: [&str; 6] = ["#f4cccc", "#d9ead3", "#cfe2f3", "#e06666", "#6aa84f", "#3d85c6"];

fn area_index(a: Area) -> usize {
    match a {
        Area::C(k) => k,
        Area::T(k) => 3 + k,
    }
}

/// Plane position of a point with numerators `num` over `den`, `y` growing downwards.
fn position(num: [i64; 3], den: i64) -> (f64, f64) {
    let [a, b, c] = num.map(|v| v as f64 / den as f64);
    let height = SIDE * 3f64.sqrt() / 2.0;
    let corners = [(0.0, height), (SIDE, height), (SIDE / 2.0, 0.0)];
    let x = a * corners[0].0 + b * corners[1].0 + c * corners[2].0;
    let y = a * corners[0].1 + b * corners[1].1 + c * corners[2].1;
    (x + MARGIN, y + MARGIN)
}

type Pos = (f64, f64);

struct Scene {
    /// Name, position and vertex marks.
    points: Vec<(String, Pos, String)>,
    /// Corners and CT-area index.
    triangles: Vec<([Pos; 3], Option<usize>)>,
    /// Endpoints and edge mark.
    edges: Vec<(Pos, Pos, Option<String>)>,
    title: String,
}

fn scene(a: &Analysis, chi: Option<Character>) -> Scene {
    let m = &a.model;
    let g = &m.group;
    let fan = &m.fan;
    let pos: Vec<(f64, f64)> = fan.points.iter().map(|p| position(p.num, p.den)).collect();
    let ct = chi.and_then(|c| a.cts[c.index()].as_ref());
    let triangles = fan
        .triangles
        .iter()
        .enumerate()
        .map(|(i, t)| (t.v.map(|v| pos[v]), ct.map(|ct| area_index(ct.areas[i]))))
        .collect();
    let edges = fan
        .edges
        .iter()
        .map(|e| (pos[e.v[0]], pos[e.v[1]], a.marking.edge_mark(e.v[0], e.v[1]).map(|c| g.label(c))))
        .collect();
    let points = (0..fan.points.len())
        .map(|v| {
            let marks: Vec<String> = a.marking.vertex_marks(v).iter().map(|&c| g.label(c)).collect();
            (prime_name(v), pos[v], marks.join(","))
        })
        .collect();
    let title = match chi {
        Some(c) => format!("{} CT({})", g.spec, g.label(c)),
        None => g.spec.to_string(),
    };
    Scene { points, triangles, edges, title }
}

fn midpoint(p: (f64, f64), q: (f64, f64)) -> (f64, f64) {
    ((p.0 + q.0) / 2.0, (p.1 + q.1) / 2.0)
}

pub fn svg(a: &Analysis, chi: Option<Character>) -> String {
    let s = scene(a, chi);
    let w = SIDE + 2.0 * MARGIN;
    let h = SIDE * 3f64.sqrt() / 2.0 + 2.0 * MARGIN;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, "<title>{}</title>", s.title);
    for (corners, area) in &s.triangles {
        let pts: Vec<String> = corners.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let fill = area.map_or("none", |k| AREA_COLOURS[k]);
        let _ = writeln!(out, r#"<polygon points="{}" fill="{fill}" stroke="none"/>"#, pts.join(" "));
    }
    for (p, q, mark) in &s.edges {
        let width = if mark.is_some() { 2.0 } else { 1.0 };
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="{width}"/>"#,
            p.0, p.1, q.0, q.1
        );
        if let Some(label) = mark {
            let (x, y) = midpoint(*p, *q);
            let _ =
                writeln!(out, r##"<text x="{x:.2}" y="{y:.2}" fill="#990000" text-anchor="middle">{label}</text>"##);
        }
    }
    for (name, (x, y), marks) in &s.points {
        let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="black"/>"#);
        let label = if marks.is_empty() { name.clone() } else { format!("{name} [{marks}]") };
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}">{label}</text>"#, x + 5.0, y - 5.0);
    }
    out.push_str("</svg>\n");
    out
}

pub fn tikz(a: &Analysis, chi: Option<Character>) -> String {
    let s = scene(a, chi);
    // TikZ y grows upwards; scale pixels to centimetres.
    let c = |(x, y): (f64, f64)| format!("({:.3},{:.3})", x / 60.0, -y / 60.0);
    let mut out = String::new();
    let _ = writeln!(out, "% {}", s.title);
    out.push_str("\\begin{tikzpicture}\n");
    for (k, colour) in AREA_COLOURS.iter().enumerate() {
        let _ = writeln!(out, "\\definecolor{{area{k}}}{{HTML}}{{{}}}", colour[1..].to_uppercase());
    }
    for (corners, area) in &s.triangles {
        if let Some(k) = area {
            let _ =
                writeln!(out, "\\fill[area{k}] {} -- {} -- {} -- cycle;", c(corners[0]), c(corners[1]), c(corners[2]));
        }
    }
    for (p, q, mark) in &s.edges {
        match mark {
            Some(label) => {
                let _ = writeln!(
                    out,
                    "\\draw[thick] {} -- node[red!60!black, fill=white, inner sep=1pt] {{\\tiny ${label}$}} {};",
                    c(*p),
                    c(*q)
                );
            }
            None => {
                let _ = writeln!(out, "\\draw {} -- {};", c(*p), c(*q));
            }
        }
    }
    for (name, p, marks) in &s.points {
        let label = if marks.is_empty() { format!("${name}$") } else { format!("${name}$ [{marks}]") };
        let _ = writeln!(out, "\\fill {} circle (1.5pt) node[above right] {{\\tiny {label}}};", c(*p));
    }
    out.push_str("\\end{tikzpicture}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn analysis(s: &str) -> Analysis {
        Analysis::new(&s.parse().unwrap(), 0).unwrap()
    }

    #[test]
    fn corners_sit_on_the_equilateral_triangle() {
        let (x, y) = position([0, 0, 3], 3);
        assert_eq!((x, y), (SIDE / 2.0 + MARGIN, MARGIN));
        let (bx, _) = position([1, 1, 1], 3);
        assert!((bx - (SIDE / 2.0 + MARGIN)).abs() < 1e-9);
    }

    #[test]
    fn svg_draws_every_simplex() {
        let a = analysis("1/15:1,5,9");
        let out = svg(&a, None);
        assert_eq!(out.matches("<polygon").count(), 15);
        assert_eq!(out.matches("<circle").count(), 13);
        assert_eq!(out.matches("<line").count(), a.model.fan.edges.len());
        assert!(out.contains("E_4 [1]"));
    }

    #[test]
    fn ct_colouring_uses_the_areas() {
        let a = analysis("1/15:1,5,9");
        let chi = a.model.group.parse_label("1").unwrap();
        let out = svg(&a, Some(chi));
        assert!(out.contains("CT(1)"));
        assert!(!out.contains(r#"fill="none""#));
        assert_eq!(svg(&a, Some(chi)), out);
    }

    #[test]
    fn tikz_is_balanced() {
        let a = analysis("1/3:1,1,1");
        let chi = a.model.group.parse_label("2").unwrap();
        let out = tikz(&a, Some(chi));
        assert!(out.starts_with("% 1/3:1,1,1 CT(2)"));
        assert_eq!(out.matches("\\begin{tikzpicture}").count(), out.matches("\\end{tikzpicture}").count());
        assert_eq!(out.matches("\\fill[area").count(), 3);
    }
}
