//! SVG drawing of a curve diagram.
//!
//! Vertical lines `L_1..L_{n-1}` are spaced evenly; the points of each line
//! are stacked one unit apart around the horizontal axis. Boxes are drawn as
//! half-ellipses bulging into their zone, every other arc as a cubic curve
//! leaving and entering its lines horizontally. Punctures are hollow dots,
//! the two endpoints filled dots.

use std::fmt::Write as _;

use thiserror::Error;

use super::{build_arc_graph, ArcRule, Node};
use crate::coords::VirtualCoordinates;

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    pub closed_by_above: bool,
    pub zone_width: f64,
    pub unit: f64,
    pub margin: f64,
    /// Largest width or height accepted, in user units.
    pub max_canvas: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            closed_by_above: false,
            zone_width: 120.0,
            unit: 16.0,
            margin: 40.0,
            max_canvas: 200_000.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RenderError {
    #[error("canvas of {width:.0}x{height:.0} exceeds the limit of {limit:.0}")]
    CanvasTooLarge { width: f64, height: f64, limit: f64 },
}

struct Geometry<'a> {
    s: &'a [u32],
    opts: &'a RenderOptions,
    center_y: f64,
}

impl Geometry<'_> {
    fn x(&self, line: usize) -> f64 {
        self.opts.margin + line as f64 * self.opts.zone_width
    }

    fn y(&self, node: Node) -> f64 {
        let mid = f64::from(self.s[node.line]) + 1.0;
        self.center_y - (f64::from(node.pos) - mid) * self.opts.unit
    }
}

/// Renders `c` as a standalone SVG 1.1 document. Output is a pure function
/// of the inputs.
pub fn render_svg(c: &VirtualCoordinates, opts: &RenderOptions) -> Result<String, RenderError> {
    let n = c.n();
    let s = c.s();
    let smax = s.iter().copied().max().unwrap_or(0);
    let rows = 2.0 * f64::from(smax) + 3.0;
    let width = 2.0 * opts.margin + n as f64 * opts.zone_width;
    let height = 2.0 * opts.margin + rows * opts.unit;
    if !(width <= opts.max_canvas && height <= opts.max_canvas) {
        return Err(RenderError::CanvasTooLarge { width, height, limit: opts.max_canvas });
    }
    let geo = Geometry { s, opts, center_y: height / 2.0 };
    let g = build_arc_graph(c, opts.closed_by_above);

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.2}" height="{height:.2}" viewBox="0 0 {width:.2} {height:.2}">"#
    );
    let _ = writeln!(out, "<title>Curve diagram {c}</title>");
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{width:.2}" height="{height:.2}" fill="white"/>"#);

    let _ = writeln!(out, r##"<g id="lines" stroke="#888888" stroke-width="1.5">"##);
    for line in 1..n {
        let x = geo.x(line);
        let _ = writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}"/>"#,
            opts.margin / 2.0,
            height - opts.margin / 2.0
        );
    }
    out.push_str("</g>\n");

    // Horizontal bulge of a box whose ends are `span` positions apart.
    let max_span = 2.0 * f64::from(smax) + 1.0;
    let bulge = |span: f64| opts.zone_width * 0.35 * span / max_span.max(1.0);

    let mut puncture_points = Vec::with_capacity(n);
    let _ = writeln!(out, r##"<g id="arcs" fill="none" stroke="black" stroke-width="2">"##);
    for (idx, arc) in g.arcs().iter().enumerate() {
        let (x0, y0) = (geo.x(arc.u.line), geo.y(arc.u));
        let (x1, y1) = (geo.x(arc.v.line), geo.y(arc.v));
        let mid = match arc.rule {
            ArcRule::LeftBox | ArcRule::RightBox => {
                let span = f64::from(arc.u.pos.abs_diff(arc.v.pos));
                let rx = bulge(span);
                let ry = (y1 - y0).abs() / 2.0;
                // Left boxes open to the right of L_{i-1}, right boxes to the
                // left of L_i.
                let (dir, sweep) = if arc.rule == ArcRule::LeftBox { (1.0, 0) } else { (-1.0, 1) };
                let (ya, yb) = (y0.max(y1), y0.min(y1));
                let _ = writeln!(
                    out,
                    r#"<path d="M {x0:.2} {ya:.2} A {rx:.2} {ry:.2} 0 0 {sweep} {x0:.2} {yb:.2}"/>"#
                );
                (x0 + dir * rx, (ya + yb) / 2.0)
            }
            ArcRule::Straight | ArcRule::Cross | ArcRule::Closure => {
                let cx = (x0 + x1) / 2.0;
                let dash = if arc.rule == ArcRule::Closure { r#" stroke-dasharray="6 4""# } else { "" };
                let _ = writeln!(
                    out,
                    r#"<path d="M {x0:.2} {y0:.2} C {cx:.2} {y0:.2} {cx:.2} {y1:.2} {x1:.2} {y1:.2}"{dash}/>"#
                );
                (cx, (y0 + y1) / 2.0)
            }
        };
        if g.puncture_arcs().contains(&idx) {
            puncture_points.push(mid);
        }
    }
    out.push_str("</g>\n");

    let _ = writeln!(out, r#"<g id="punctures" fill="white" stroke="black" stroke-width="1.5">"#);
    for (x, y) in puncture_points {
        let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4"/>"#);
    }
    out.push_str("</g>\n");

    let _ = writeln!(out, r#"<g id="endpoints" fill="black">"#);
    for node in [Node::new(0, 1), Node::new(n, 1)] {
        let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="4"/>"#, geo.x(node.line), geo.y(node));
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_three_strands() {
        let svg = render_svg(&VirtualCoordinates::trivial(3), &RenderOptions::default()).unwrap();
        assert!(svg.starts_with("<?xml"));
        assert_eq!(svg.matches("<line ").count(), 2);
        assert_eq!(svg.matches("<path ").count(), 3);
        assert_eq!(svg.matches(r#"r="4""#).count(), 3 + 2);
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn three_strand_example() {
        let c: VirtualCoordinates = "(0,0,2,3,1,0,0)".parse().unwrap();
        let svg = render_svg(&c, &RenderOptions::default()).unwrap();
        // 10 points, two of degree one: 9 arcs, 4 of them boxes
        assert_eq!(svg.matches("<path ").count(), 9);
        assert_eq!(svg.matches(" A ").count(), 4);
        assert_eq!(render_svg(&c, &RenderOptions::default()).unwrap(), svg);
    }

    #[test]
    fn closure_is_drawn() {
        let c: VirtualCoordinates = "(0,0,1,1,0)".parse().unwrap();
        let opts = RenderOptions { closed_by_above: true, ..RenderOptions::default() };
        let svg = render_svg(&c, &opts).unwrap();
        assert_eq!(svg.matches("stroke-dasharray").count(), 2);
    }

    #[test]
    fn oversized_canvas_is_rejected() {
        let c = VirtualCoordinates::from_parts(vec![0, 100_000, 0], vec![0, 1]).unwrap();
        assert!(matches!(
            render_svg(&c, &RenderOptions::default()),
            Err(RenderError::CanvasTooLarge { .. })
        ));
    }
}
