//! Reconstruction of the tight generalised curve diagram encoded by a
//! virtual coordinate tuple.
//!
//! Nodes are the intersection points `c_{i,j}` of the diagram with the
//! vertical lines `L_i`, numbered from bottom to top (`1 <= j <= 2 s_i + 1`);
//! `c_{0,1}` and `c_{n,1}` are the left and right endpoints. Inside zone `i`
//! (between `L_{i-1}` and `L_i`) the arcs are fully determined by
//! `(s_{i-1}, a_i, s_i)`. Writing `b_i = a_i + |s_{i-1} - s_i|`, zone `i`
//! links
//!
//! 1. `c_{i-1,j}` to `c_{i,j}` for `j <= a_i` (straight),
//! 2. `c_{i-1,j}` to `c_{i-1,k}` for `j + k = 2 b_i + 1`, `a_i < j < k`,
//!    when `s_{i-1} > s_i` (left box),
//! 3. `c_{i,j}` to `c_{i,k}` for `j + k = 2 b_i + 1`, `a_i < j < k`,
//!    when `s_i > s_{i-1}` (right box),
//! 4. `c_{i-1,j}` to `c_{i,k}` for `j - k = 2 (s_{i-1} - s_i)`,
//!    `min(j, k) > a_i` (cross).
//!
//! The puncture `p_i` lies on the innermost box `[b_i, b_i + 1]` when a box
//! exists, and on the arc `c_{i-1,a_i+1} - c_{i,a_i+1}` when
//! `s_{i-1} = s_i`.
//!
//! The diagram is a braid diagram (the tuple is *actual*) iff this graph is
//! connected.

use serde::Serialize;

use crate::coords::VirtualCoordinates;
use crate::partition::Partition;

mod render;

pub use render::{render_svg, RenderError, RenderOptions};

/// The point `c_{line,pos}`; `pos` is 1-based from the bottom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Node {
    pub line: usize,
    pub pos: u32,
}

impl Node {
    pub const fn new(line: usize, pos: u32) -> Self {
        Self { line, pos }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArcRule {
    Straight,
    LeftBox,
    RightBox,
    Cross,
    /// Part of the path added above the diagram by [`build_arc_graph`] with
    /// `closed_by_above`.
    Closure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Arc {
    pub u: Node,
    pub v: Node,
    pub zone: usize,
    pub rule: ArcRule,
}

/// Calls `f(rule, u, v)` for every arc of zone `i` between lines with
/// half-counts `left = s_{i-1}` and `right = s_i`. Node positions are
/// reported as `(is_right_line, pos)`.
#[inline]
pub(crate) fn for_each_zone_arc<F>(left: u32, right: u32, a: u32, mut f: F)
where
    F: FnMut(ArcRule, (bool, u32), (bool, u32)),
{
    for j in 1..=a {
        f(ArcRule::Straight, (false, j), (true, j));
    }
    if left > right {
        let b = a + (left - right);
        for j in a + 1..=b {
            f(ArcRule::LeftBox, (false, j), (false, 2 * b + 1 - j));
        }
        let shift = 2 * (left - right);
        for k in a + 1..=2 * right + 1 {
            f(ArcRule::Cross, (false, k + shift), (true, k));
        }
    } else if right > left {
        let b = a + (right - left);
        for j in a + 1..=b {
            f(ArcRule::RightBox, (true, j), (true, 2 * b + 1 - j));
        }
        let shift = 2 * (right - left);
        for j in a + 1..=2 * left + 1 {
            f(ArcRule::Cross, (false, j), (true, j + shift));
        }
    } else {
        for j in a + 1..=2 * left + 1 {
            f(ArcRule::Cross, (false, j), (true, j));
        }
    }
}

/// The two endpoints of the arc carrying puncture `p_i`, in the same
/// `(is_right_line, pos)` form as [`for_each_zone_arc`].
pub(crate) fn zone_puncture(left: u32, right: u32, a: u32) -> ((bool, u32), (bool, u32)) {
    if left > right {
        let b = a + (left - right);
        ((false, b), (false, b + 1))
    } else if right > left {
        let b = a + (right - left);
        ((true, b), (true, b + 1))
    } else {
        ((false, a + 1), (true, a + 1))
    }
}

/// Flat node numbering: `c_{i,j}` maps to `base[i] + j - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeLayout {
    base: Vec<usize>,
    count: Vec<u32>,
}

impl NodeLayout {
    /// Layout for half-counts `s_0..=s_n`; `closed` reserves the extra top
    /// point `c_{i, 2 s_i + 2}` on each interior line.
    pub fn new(s: &[u32], closed: bool) -> Self {
        let n = s.len() - 1;
        let count: Vec<u32> = s
            .iter()
            .enumerate()
            .map(|(i, &si)| {
                let extra = u32::from(closed && i > 0 && i < n);
                2 * si + 1 + extra
            })
            .collect();
        let mut base = Vec::with_capacity(count.len() + 1);
        let mut acc = 0usize;
        for &c in &count {
            base.push(acc);
            acc += c as usize;
        }
        base.push(acc);
        Self { base, count }
    }

    pub fn total(&self) -> usize {
        *self.base.last().unwrap()
    }

    pub fn points_on(&self, line: usize) -> u32 {
        self.count[line]
    }

    pub fn index(&self, node: Node) -> usize {
        debug_assert!(node.pos >= 1 && node.pos <= self.count[node.line]);
        self.base[node.line] + node.pos as usize - 1
    }

    pub fn node(&self, index: usize) -> Node {
        let line = self.base.partition_point(|&b| b <= index) - 1;
        Node::new(line, (index - self.base[line]) as u32 + 1)
    }
}

/// The arcs and punctures of the diagram drawn from a coordinate tuple.
#[derive(Debug, Clone)]
pub struct ArcGraph {
    coords: VirtualCoordinates,
    closed: bool,
    layout: NodeLayout,
    arcs: Vec<Arc>,
    /// `punctures[i - 1]` is the index in `arcs` of the arc carrying `p_i`.
    punctures: Vec<usize>,
}

impl ArcGraph {
    pub fn coords(&self) -> &VirtualCoordinates {
        &self.coords
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn layout(&self) -> &NodeLayout {
        &self.layout
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn puncture_arcs(&self) -> &[usize] {
        &self.punctures
    }

    /// The arc carrying puncture `p_i`, `1 <= i <= n`.
    pub fn puncture_arc(&self, i: usize) -> &Arc {
        &self.arcs[self.punctures[i - 1]]
    }

    pub fn node_count(&self) -> usize {
        self.layout.total()
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.layout.total()];
        for arc in &self.arcs {
            deg[self.layout.index(arc.u)] += 1;
            deg[self.layout.index(arc.v)] += 1;
        }
        deg
    }

    /// Open graphs: `c_{0,1}` and `c_{n,1}` have degree 1 and every other
    /// node degree 2. Closed graphs: every node has degree 2.
    pub fn degree_invariant_holds(&self) -> bool {
        let n = self.coords.n();
        let ends = [
            self.layout.index(Node::new(0, 1)),
            self.layout.index(Node::new(n, 1)),
        ];
        self.degrees().iter().enumerate().all(|(idx, &d)| {
            let expected = if !self.closed && ends.contains(&idx) { 1 } else { 2 };
            d == expected
        })
    }

    /// No two arcs of one zone interleave along the zone boundary (left line
    /// read upwards, then right line read downwards). Arcs sharing an
    /// endpoint do not count as interleaving.
    pub fn zones_non_interleaving(&self) -> bool {
        let n = self.coords.n();
        (1..=n).all(|zone| {
            let key = |node: Node| -> i64 {
                if node.line + 1 == zone {
                    i64::from(node.pos)
                } else {
                    i64::from(u32::MAX) - i64::from(node.pos)
                }
            };
            let chords: Vec<(i64, i64)> = self
                .arcs
                .iter()
                .filter(|arc| arc.zone == zone)
                .map(|arc| {
                    let (x, y) = (key(arc.u), key(arc.v));
                    (x.min(y), x.max(y))
                })
                .collect();
            chords.iter().enumerate().all(|(idx, &(x1, y1))| {
                chords[idx + 1..].iter().all(|&(x2, y2)| {
                    let crosses = (x1 < x2 && x2 < y1 && y1 < y2) || (x2 < x1 && x1 < y2 && y2 < y1);
                    !crosses
                })
            })
        })
    }
}

/// Draws the arcs of the diagram with coordinates `c`.
///
/// With `closed_by_above`, an extra point is put on top of each interior
/// line and the two endpoints are joined through them, making the graph
/// 2-regular without changing its number of components.
pub fn build_arc_graph(c: &VirtualCoordinates, closed_by_above: bool) -> ArcGraph {
    let n = c.n();
    let s = c.s();
    let layout = NodeLayout::new(s, closed_by_above);
    let mut arcs = Vec::with_capacity(layout.total());
    let mut punctures = Vec::with_capacity(n);
    for zone in 1..=n {
        let (left, right, a) = (s[zone - 1], s[zone], c.a_at(zone));
        let to_node = |(is_right, pos): (bool, u32)| Node::new(if is_right { zone } else { zone - 1 }, pos);
        let first = arcs.len();
        for_each_zone_arc(left, right, a, |rule, u, v| {
            arcs.push(Arc { u: to_node(u), v: to_node(v), zone, rule });
        });
        let (pu, pv) = zone_puncture(left, right, a);
        let (pu, pv) = (to_node(pu), to_node(pv));
        let carrier = (first..arcs.len())
            .find(|&idx| {
                let arc = &arcs[idx];
                (arc.u == pu && arc.v == pv) || (arc.u == pv && arc.v == pu)
            })
            .expect("every zone has an arc for its puncture");
        punctures.push(carrier);
    }
    if closed_by_above {
        let top = |line: usize| -> Node {
            if line == 0 || line == n {
                Node::new(line, 1)
            } else {
                Node::new(line, 2 * s[line] + 2)
            }
        };
        for zone in 1..=n {
            arcs.push(Arc { u: top(zone - 1), v: top(zone), zone, rule: ArcRule::Closure });
        }
    }
    ArcGraph { coords: c.clone(), closed: closed_by_above, layout, arcs, punctures }
}

/// Number of connected components of the graph (the `k` of a
/// `k`-generalised diagram).
pub fn component_count(g: &ArcGraph) -> usize {
    let mut p = Partition::new(g.layout.total());
    for arc in &g.arcs {
        p.union(g.layout.index(arc.u), g.layout.index(arc.v));
    }
    p.components()
}

/// Every arc joining two vertically consecutive points of one line carries
/// exactly one puncture.
pub fn tightness_check(g: &ArcGraph) -> bool {
    let mut carried = vec![0u32; g.arcs.len()];
    for &idx in &g.punctures {
        carried[idx] += 1;
    }
    g.arcs.iter().zip(&carried).all(|(arc, &count)| {
        let minimal_box = arc.u.line == arc.v.line && arc.u.pos.abs_diff(arc.v.pos) == 1;
        !minimal_box || count == 1
    })
}

/// Reusable scratch space for deciding actuality without materialising an
/// [`ArcGraph`].
#[derive(Debug, Default)]
pub struct ActualityChecker {
    base: Vec<usize>,
    partition: Partition,
}

impl ActualityChecker {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of components of the (open) diagram of `(s, a)`; `s` has
    /// length `n + 1` and `a` length `n`. The tuple is not re-validated.
    pub fn components(&mut self, s: &[u32], a: &[u32]) -> usize {
        self.base.clear();
        let mut acc = 0usize;
        for &si in s {
            self.base.push(acc);
            acc += 2 * si as usize + 1;
        }
        self.partition.reset(acc);
        for zone in 1..s.len() {
            let (lb, rb) = (self.base[zone - 1], self.base[zone]);
            let part = &mut self.partition;
            for_each_zone_arc(s[zone - 1], s[zone], a[zone - 1], |_, (ur, up), (vr, vp)| {
                let u = if ur { rb } else { lb } + up as usize - 1;
                let v = if vr { rb } else { lb } + vp as usize - 1;
                part.union(u, v);
            });
        }
        self.partition.components()
    }

    pub fn is_actual(&mut self, c: &VirtualCoordinates) -> bool {
        self.components(c.s(), c.a()) == 1
    }
}

/// Whether `c` are the coordinates of a braid (its diagram is connected).
pub fn is_actual(c: &VirtualCoordinates) -> bool {
    ActualityChecker::new().is_actual(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vc(raw: &[i64]) -> VirtualCoordinates {
        VirtualCoordinates::validate((raw.len() - 1) / 2, raw).unwrap()
    }

    fn n(line: usize, pos: u32) -> Node {
        Node::new(line, pos)
    }

    fn has_arc(g: &ArcGraph, x: Node, y: Node, zone: usize, rule: ArcRule) -> bool {
        g.arcs()
            .iter()
            .any(|a| a.zone == zone && a.rule == rule && ((a.u == x && a.v == y) || (a.u == y && a.v == x)))
    }

    #[test]
    fn trivial_two_strands_is_a_path() {
        let g = build_arc_graph(&vc(&[0, 0, 0, 0, 0]), false);
        assert_eq!(g.arcs().len(), 2);
        assert!(has_arc(&g, n(0, 1), n(1, 1), 1, ArcRule::Cross));
        assert!(has_arc(&g, n(1, 1), n(2, 1), 2, ArcRule::Cross));
        assert_eq!(component_count(&g), 1);
        assert!(g.degree_invariant_holds());
        // s_{i-1} = s_i = 0: the lone arc carries the puncture
        assert_eq!(g.puncture_arc(1).u, n(0, 1));
        assert_eq!(g.puncture_arc(2).v, n(2, 1));
    }

    #[test]
    fn sigma_one_arcs() {
        let g = build_arc_graph(&vc(&[0, 0, 1, 1, 0]), false);
        assert_eq!(g.arcs().len(), 4);
        assert!(has_arc(&g, n(1, 1), n(1, 2), 1, ArcRule::RightBox));
        assert!(has_arc(&g, n(0, 1), n(1, 3), 1, ArcRule::Cross));
        assert!(has_arc(&g, n(1, 1), n(2, 1), 2, ArcRule::Straight));
        assert!(has_arc(&g, n(1, 2), n(1, 3), 2, ArcRule::LeftBox));
        let p1 = g.puncture_arc(1);
        assert_eq!((p1.u, p1.v), (n(1, 1), n(1, 2)));
        let p2 = g.puncture_arc(2);
        assert_eq!((p2.u, p2.v), (n(1, 2), n(1, 3)));
        assert_eq!(component_count(&g), 1);
        assert!(tightness_check(&g));
    }

    #[test]
    fn split_two_strand_diagram() {
        let g = build_arc_graph(&vc(&[0, 1, 1, 1, 0]), false);
        assert_eq!(component_count(&g), 2);
        let mut p = Partition::new(g.node_count());
        for arc in g.arcs() {
            p.union(g.layout().index(arc.u), g.layout().index(arc.v));
        }
        let idx = |x| g.layout().index(x);
        assert_eq!(p.find(idx(n(0, 1))), p.find(idx(n(1, 1))));
        assert_eq!(p.find(idx(n(0, 1))), p.find(idx(n(2, 1))));
        assert_eq!(p.find(idx(n(1, 2))), p.find(idx(n(1, 3))));
        assert_ne!(p.find(idx(n(0, 1))), p.find(idx(n(1, 2))));
    }

    #[test]
    fn two_generalised_three_strand_diagram() {
        let g = build_arc_graph(&vc(&[0, 0, 1, 0, 0, 0, 0]), false);
        assert_eq!(component_count(&g), 2);
        assert!(!is_actual(g.coords()));
    }

    #[test]
    fn actual_examples() {
        for k in 1..=5 {
            assert!(is_actual(&vc(&[0, 0, k, 1, 0])));
            assert!(is_actual(&vc(&[0, 1, k, 0, 0])));
            assert!(!is_actual(&vc(&[0, 1, k, 1, 0])));
            assert!(!is_actual(&vc(&[0, 0, k, 0, 0])));
        }
        assert!(is_actual(&vc(&[0, 0, 0, 0, 0])));
        assert!(is_actual(&vc(&[0, 0, 2, 3, 1, 0, 0])));
    }

    #[test]
    fn closure_keeps_components() {
        for raw in [&[0, 0, 1, 1, 0][..], &[0, 1, 1, 1, 0], &[0, 0, 1, 0, 0, 0, 0], &[0, 0, 2, 3, 1, 0, 0]] {
            let c = vc(raw);
            let open = build_arc_graph(&c, false);
            let closed = build_arc_graph(&c, true);
            assert!(closed.degree_invariant_holds());
            assert!(closed.zones_non_interleaving());
            assert_eq!(component_count(&open), component_count(&closed));
        }
        let one = build_arc_graph(&VirtualCoordinates::trivial(1), true);
        assert!(one.degree_invariant_holds());
        assert_eq!(component_count(&one), 1);
    }

    #[test]
    fn layout_round_trip() {
        let l = NodeLayout::new(&[0, 2, 1, 0], false);
        assert_eq!(l.total(), 1 + 5 + 3 + 1);
        for idx in 0..l.total() {
            assert_eq!(l.index(l.node(idx)), idx);
        }
        assert_eq!(l.index(n(1, 1)), 1);
        assert_eq!(l.index(n(2, 1)), 6);
    }

    #[test]
    fn trivial_tightness_is_vacuous() {
        let g = build_arc_graph(&VirtualCoordinates::trivial(4), false);
        assert!(g.arcs().iter().all(|a| a.u.line != a.v.line));
        assert!(tightness_check(&g));
    }
}
