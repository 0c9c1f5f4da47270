//! Static SVG figures: the graph of a map, a cobweb of a forward orbit and
//! the layered preimage tree. Output bytes depend only on the inputs.

use std::fmt::Write;

use crate::backward::preimage_tree;
use crate::error::Result;
use crate::plmap::PLMap;
use crate::rat::Rat;

/// Trees deeper than this are drawn without value labels.
pub const LABEL_DEPTH: usize = 8;

const SIZE: f64 = 480.0;
const PAD: f64 = 48.0;

struct Frame {
    lo: f64,
    span: f64,
}

impl Frame {
    fn new(f: &PLMap) -> Self {
        let d = f.domain();
        Frame {
            lo: d.lo.to_f64(),
            span: (d.hi.to_f64() - d.lo.to_f64()).max(f64::MIN_POSITIVE),
        }
    }

    fn px(&self, x: &Rat) -> f64 {
        PAD + (x.to_f64() - self.lo) / self.span * (SIZE - 2.0 * PAD)
    }

    fn py(&self, y: &Rat) -> f64 {
        SIZE - PAD - (y.to_f64() - self.lo) / self.span * (SIZE - 2.0 * PAD)
    }
}

fn header(s: &mut String, w: f64, h: f64, title: &str) {
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}" font-family="monospace" font-size="11">"#
    )
    .unwrap();
    writeln!(s, "<title>{}</title>", escape(title)).unwrap();
    writeln!(s, r#"<rect x="0" y="0" width="{w:.0}" height="{h:.0}" fill="white"/>"#).unwrap();
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn axes(s: &mut String, f: &PLMap, fr: &Frame) {
    let d = f.domain();
    let (x0, x1) = (fr.px(&d.lo), fr.px(&d.hi));
    let (y0, y1) = (fr.py(&d.lo), fr.py(&d.hi));
    writeln!(
        s,
        r##"<rect x="{x0:.3}" y="{y1:.3}" width="{:.3}" height="{:.3}" fill="none" stroke="#888"/>"##,
        x1 - x0,
        y0 - y1
    )
    .unwrap();
    writeln!(
        s,
        r##"<line x1="{x0:.3}" y1="{y0:.3}" x2="{x1:.3}" y2="{y1:.3}" stroke="#aaa" stroke-dasharray="4 3"/>"##
    )
    .unwrap();
    for (v, anchor) in [(&d.lo, "start"), (&d.hi, "end")] {
        writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="{anchor}">{v}</text>"#,
            fr.px(v),
            y0 + 16.0
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{:.3}" y="{:.3}" text-anchor="end">{}</text>"#,
        x0 - 6.0,
        y1 + 4.0,
        d.hi
    )
    .unwrap();
}

fn graph_path(s: &mut String, f: &PLMap, fr: &Frame) {
    let pts: Vec<String> = f
        .breakpoints()
        .iter()
        .map(|(x, y)| format!("{:.3},{:.3}", fr.px(x), fr.py(y)))
        .collect();
    writeln!(
        s,
        r#"<polyline points="{}" fill="none" stroke="black" stroke-width="2"/>"#,
        pts.join(" ")
    )
    .unwrap();
}

/// Graph of `f` with the diagonal and labelled breakpoints.
pub fn render_graph(f: &PLMap) -> String {
    let fr = Frame::new(f);
    let mut s = String::new();
    header(&mut s, SIZE, SIZE, "graph");
    axes(&mut s, f, &fr);
    graph_path(&mut s, f, &fr);
    for (x, y) in f.breakpoints() {
        let (cx, cy) = (fr.px(x), fr.py(y));
        writeln!(s, r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="3" fill="black"/>"#).unwrap();
        let dy = if cy < PAD + 14.0 { 14.0 } else { -6.0 };
        writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">({x}, {y})</text>"#,
            cx,
            cy + dy
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

/// Graph plus the cobweb of `x, f(x), …, f^n(x)`.
pub fn render_cobweb(f: &PLMap, x: &Rat, n: usize) -> Result<String> {
    let orbit = f.orbit(x, n)?;
    let fr = Frame::new(f);
    let mut s = String::new();
    header(&mut s, SIZE, SIZE, &format!("cobweb of {x}"));
    axes(&mut s, f, &fr);
    graph_path(&mut s, f, &fr);
    let mut pts = vec![format!("{:.3},{:.3}", fr.px(x), fr.py(&f.domain().lo))];
    for w in orbit.windows(2) {
        pts.push(format!("{:.3},{:.3}", fr.px(&w[0]), fr.py(&w[1])));
        pts.push(format!("{:.3},{:.3}", fr.px(&w[1]), fr.py(&w[1])));
    }
    writeln!(
        s,
        r##"<polyline points="{}" fill="none" stroke="#c33" stroke-width="1"/>"##,
        pts.join(" ")
    )
    .unwrap();
    writeln!(
        s,
        r##"<circle cx="{:.3}" cy="{:.3}" r="3" fill="#c33"/>"##,
        fr.px(x),
        fr.py(x)
    )
    .unwrap();
    s.push_str("</svg>\n");
    Ok(s)
}

/// Preimage tree of `x` with one row per level; each node sits at its value
/// on the horizontal axis and is joined to its parent.
pub fn render_preimage_tree(f: &PLMap, x: &Rat, depth: usize, node_cap: usize) -> Result<String> {
    let tree = preimage_tree(f, x, depth, node_cap)?;
    let fr = Frame::new(f);
    let row = 56.0;
    let h = 2.0 * PAD + row * depth as f64;
    let labels = depth <= LABEL_DEPTH;
    let mut s = String::new();
    header(&mut s, SIZE, h, &format!("preimage tree of {x}"));
    let y_of = |lvl: usize| PAD + row * lvl as f64;
    let d = f.domain();
    writeln!(
        s,
        r##"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#ccc"/>"##,
        fr.px(&d.lo),
        h - PAD / 2.0,
        fr.px(&d.hi),
        h - PAD / 2.0
    )
    .unwrap();
    for lvl in 1..tree.levels.len() {
        for node in &tree.levels[lvl] {
            let parent = &tree.levels[lvl - 1][node.parent.expect("non-root node has a parent")];
            writeln!(
                s,
                r##"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#555"/>"##,
                fr.px(&parent.value),
                y_of(lvl - 1),
                fr.px(&node.value),
                y_of(lvl)
            )
            .unwrap();
        }
    }
    for (lvl, nodes) in tree.levels.iter().enumerate() {
        for (i, node) in nodes.iter().enumerate() {
            let (cx, cy) = (fr.px(&node.value), y_of(lvl));
            writeln!(s, r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="3" fill="black"/>"#).unwrap();
            if labels {
                // alternate above/below so neighbours do not collide
                let dy = if i % 2 == 0 { -7.0 } else { 15.0 };
                writeln!(
                    s,
                    r#"<text x="{cx:.3}" y="{:.3}" text-anchor="middle" font-size="9">{}</text>"#,
                    cy + dy,
                    node.value
                )
                .unwrap();
            }
        }
        writeln!(s, r#"<text x="4" y="{:.3}">n={lvl}</text>"#, y_of(lvl) + 4.0).unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fixture_map;
    use crate::rat::r;

    #[test]
    fn graph_is_deterministic_and_labelled() {
        let f = fixture_map("fig1").unwrap();
        let a = render_graph(&f);
        assert_eq!(a, render_graph(&f));
        assert!(a.contains("(1/4, 1)"));
        assert!(a.contains("(5/8, 1/2)"));
        assert!(a.starts_with("<svg"));
    }

    #[test]
    fn tent_tree_levels() {
        let t = fixture_map("tent").unwrap();
        let s = render_preimage_tree(&t, &r(1, 1), 3, 100).unwrap();
        assert_eq!(s.matches("<circle").count(), 1 + 1 + 2 + 4);
        assert!(s.contains(">1/8<"));
        let deep = render_preimage_tree(&t, &r(1, 1), 9, 10_000).unwrap();
        assert!(!deep.contains(">1/8<"));
    }

    #[test]
    fn cobweb_has_orbit() {
        let t = fixture_map("tent").unwrap();
        let s = render_cobweb(&t, &r(2, 5), 4).unwrap();
        assert!(s.contains("cobweb of 2/5"));
    }
}
