//! Gluing overlapping partial graphs into words, closing words into cycles
//! (plain and s-overlap forms), and the tour -> cycle pipeline with its
//! inverse window extraction.

use crate::digraph::ArcDigraph;
use crate::error::{Error, Result};
use crate::euler::EulerTour;
use crate::graph::{canonical_pair, OrderedPartialGraph, Pair};

/// How a word may be closed into a cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Closure {
    /// Enforce the a-priori length bound L > 2(n-1).
    LengthBound,
    /// Allow short hosts, accepting the result only if every window of the
    /// cycle reproduces the word's window sequence.
    CheckWindows,
}

/// Pair bookkeeping while merging: edges and wildcard groups, with a
/// union-find over groups so groups sharing a pair unify.
struct PairMerge {
    edges: std::collections::BTreeSet<Pair>,
    group_of: std::collections::BTreeMap<Pair, usize>,
    parent: Vec<usize>,
}

impl PairMerge {
    fn new() -> Self {
        PairMerge {
            edges: Default::default(),
            group_of: Default::default(),
            parent: Vec::new(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn add_edge(&mut self, p: Pair) -> Result<()> {
        if self.group_of.contains_key(&p) {
            return Err(Error::GlueConflict(p.0, p.1));
        }
        self.edges.insert(p);
        Ok(())
    }

    /// Add one wildcard group; pairs already present as wildcards pull the
    /// groups together, pairs present as edges are conflicts.
    fn add_group(&mut self, pairs: &[Pair]) -> Result<()> {
        let gid = self.parent.len();
        self.parent.push(gid);
        for &p in pairs {
            if self.edges.contains(&p) {
                return Err(Error::GlueConflict(p.0, p.1));
            }
            match self.group_of.get(&p).copied() {
                Some(other) => {
                    let (a, b) = (self.find(gid), self.find(other));
                    if a != b {
                        self.parent[a] = b;
                    }
                }
                None => {
                    self.group_of.insert(p, gid);
                }
            }
        }
        Ok(())
    }

    fn into_graph(mut self, n: u32, cyclic: bool) -> Result<OrderedPartialGraph> {
        let mut grouped: std::collections::BTreeMap<usize, Vec<Pair>> = Default::default();
        let pairs: Vec<(Pair, usize)> = self.group_of.iter().map(|(&p, &g)| (p, g)).collect();
        for (p, g) in pairs {
            let root = self.find(g);
            grouped.entry(root).or_default().push(p);
        }
        OrderedPartialGraph::new(n, cyclic, self.edges, grouped.into_values())
    }
}

/// The gluing of an overlapping pair: `h` laid over the last `s` vertices of
/// `g`, with no pairs bridging the non-overlap parts. Wildcard groups from
/// both sides persist, unifying where they share a pair in the overlap.
pub fn glue(g: &OrderedPartialGraph, h: &OrderedPartialGraph, s: u32) -> Result<OrderedPartialGraph> {
    if !g.overlaps_by(h, s)? {
        return Err(Error::NoOverlap(s));
    }
    let shift = g.n() - s;
    let mut merge = PairMerge::new();
    for &p in g.edges() {
        merge.add_edge(p)?;
    }
    for &(a, b) in h.edges() {
        merge.add_edge((a + shift, b + shift))?;
    }
    for grp in g.diamond_groups() {
        let pairs: Vec<Pair> = grp.iter().copied().collect();
        merge.add_group(&pairs)?;
    }
    for grp in h.diamond_groups() {
        let pairs: Vec<Pair> = grp.iter().map(|&(a, b)| (a + shift, b + shift)).collect();
        merge.add_group(&pairs)?;
    }
    merge.into_graph(g.n() + h.n() - s, false)
}

fn window_sequence(
    host: &OrderedPartialGraph,
    n: u32,
    step: u32,
    count: u32,
) -> Result<Vec<OrderedPartialGraph>> {
    (0..count).map(|i| host.window_at(i * step + 1, n)).collect()
}

fn close(
    g: &OrderedPartialGraph,
    identify: u32, // how many trailing vertices fold onto the leading ones
) -> Result<OrderedPartialGraph> {
    let m = g.n();
    let keep = m - identify;
    let mut merge = PairMerge::new();
    let remap = |(a, b): Pair| -> Option<Pair> {
        match (a <= keep, b <= keep) {
            (true, true) => Some((a, b)),
            (true, false) => Some(canonical_pair(a, b - keep)),
            (false, false) => None, // folded onto pairs already present
            (false, true) => unreachable!("pairs are stored lo < hi"),
        }
    };
    for &p in g.edges() {
        if let Some(q) = remap(p) {
            merge.add_edge(q).or_else(|e| {
                // remapped edge may coincide with an existing edge
                if merge.edges.contains(&q) {
                    Ok(())
                } else {
                    Err(e)
                }
            })?;
        }
    }
    for grp in g.diamond_groups() {
        let pairs: Vec<Pair> = grp.iter().copied().filter_map(remap).collect();
        if !pairs.is_empty() {
            merge.add_group(&pairs)?;
        }
    }
    merge.into_graph(keep, true)
}

/// Close a word whose ends overlap by n-1 into a cycle with the same
/// n-windows in the same order.
pub fn cyclic_glue(
    g: &OrderedPartialGraph,
    n: u32,
    closure: Closure,
) -> Result<OrderedPartialGraph> {
    let m = g.n();
    if g.cyclic() {
        return Err(Error::GluePrecondition("host must be linear"));
    }
    if m < n + 1 {
        return Err(Error::GluePrecondition("host shorter than one window step"));
    }
    if !g.overlaps_by(g, n - 1)? {
        return Err(Error::GluePrecondition("ends do not overlap"));
    }
    if g.all_pairs().any(|&(a, b)| a <= n - 1 && b >= m - n + 2) {
        return Err(Error::GluePrecondition("pair bridges the two ends"));
    }
    if g.max_pair_span() > n - 1 {
        return Err(Error::GluePrecondition("pair spans more than one window"));
    }
    let len = m - n + 1;
    if len <= 2 * (n - 1) && closure == Closure::LengthBound {
        return Err(Error::GluePrecondition("closed length within twice the overlap"));
    }
    let j = close(g, n - 1)?;
    let want = window_sequence(g, n, 1, len)?;
    let got = window_sequence(&j, n, 1, len)?;
    if want != got {
        return Err(Error::GlueWindowMismatch);
    }
    Ok(j)
}

/// Close a word built from s-overlapping n-windows into a cycle preserving
/// the qualifying windows (starts 1 mod n-s).
pub fn s_cyclic_glue(g: &OrderedPartialGraph, n: u32, s: u32) -> Result<OrderedPartialGraph> {
    if s == n - 1 {
        return cyclic_glue(g, n, Closure::LengthBound);
    }
    let m = g.n();
    let step = n - s;
    if g.cyclic() {
        return Err(Error::GluePrecondition("host must be linear"));
    }
    if m <= n || (m - n) % step != 0 {
        return Err(Error::GluePrecondition("length is not n plus a multiple of the step"));
    }
    if !g.overlaps_by(g, s)? {
        return Err(Error::GluePrecondition("ends do not overlap"));
    }
    if g.all_pairs().any(|&(a, b)| a <= s && b >= m - s + 1) {
        return Err(Error::GluePrecondition("pair bridges the two ends"));
    }
    let k = (m - n) / step;
    let in_some_window = |&(a, b): &Pair| {
        (0..=k).any(|i| {
            let lo = 1 + i * step;
            let hi = n + i * step;
            lo <= a && b <= hi
        })
    };
    if !g.all_pairs().all(in_some_window) {
        return Err(Error::GluePrecondition("pair escapes every qualifying window"));
    }
    if m - s <= 2 * (n - 1) {
        return Err(Error::GluePrecondition("closed length within twice the window"));
    }
    let j = close(g, s)?;
    let want = window_sequence(g, n, step, k + 1)?;
    let got = window_sequence(&j, n, step, k + 1)?;
    if want != got {
        return Err(Error::GlueWindowMismatch);
    }
    Ok(j)
}

/// Glue a tour's payloads in order and close the result. `allow_short`
/// admits hosts below the length bound when the window check passes.
pub fn tour_to_cycle(tour: &EulerTour, d: &ArcDigraph, allow_short: bool) -> Result<OrderedPartialGraph> {
    tour.validate(d)?;
    let (n, s) = (d.window_len, d.overlap);
    let mut acc = d.edges[tour.edges[0]].payload.clone();
    for &e in &tour.edges[1..] {
        acc = glue(&acc, &d.edges[e].payload, s)?;
    }
    if s == n - 1 {
        let closure = if allow_short { Closure::CheckWindows } else { Closure::LengthBound };
        cyclic_glue(&acc, n, closure)
    } else {
        s_cyclic_glue(&acc, n, s)
    }
}

/// Read the qualifying windows of a cycle back as an Euler tour of the
/// digraph whose payloads they are.
pub fn extract_tour(cycle: &OrderedPartialGraph, d: &ArcDigraph) -> Result<EulerTour> {
    if !cycle.cyclic() {
        return Err(Error::GluePrecondition("tour extraction needs a cyclic host"));
    }
    let (n, s) = (d.window_len, d.overlap);
    let step = n - s;
    if cycle.n() % step != 0 {
        return Err(Error::WindowStep(cycle.n(), step));
    }
    let count = cycle.n() / step;
    let mut used = vec![false; d.edge_count()];
    let mut edges = Vec::with_capacity(count as usize);
    for i in 0..count {
        let win = cycle.window_at(i * step + 1, n)?;
        let found = d
            .edges
            .iter()
            .enumerate()
            .find(|(id, e)| !used[*id] && e.payload == win)
            .map(|(id, _)| id)
            .ok_or(Error::BadTour("window payload not in digraph"))?;
        used[found] = true;
        edges.push(found);
    }
    let start_vertex = d.edges[edges[0]].tail;
    let tour = EulerTour { edges, start_vertex };
    tour.validate(d)?;
    Ok(tour)
}

/// The converse of cyclic closing: a linear host with the same n-windows as
/// the cycle, wrap pairs unrolled past the end.
pub fn cycle_to_path(j: &OrderedPartialGraph, n: u32) -> Result<OrderedPartialGraph> {
    if !j.cyclic() {
        return Err(Error::GluePrecondition("host must be cyclic"));
    }
    let len = j.n();
    if len <= 2 * (n - 1) {
        return Err(Error::GluePrecondition("closed length within twice the overlap"));
    }
    if j.max_pair_span() > n - 1 {
        return Err(Error::GluePrecondition("pair spans more than one window"));
    }
    let remap = |&(a, b): &Pair| -> Pair {
        if b - a <= n - 1 {
            (a, b)
        } else {
            (b, a + len) // wrap pair: the short way crosses the seam
        }
    };
    let edges: Vec<Pair> = j.edges().iter().map(remap).collect();
    let groups: Vec<Vec<Pair>> =
        j.diamond_groups().iter().map(|g| g.iter().map(remap).collect()).collect();
    OrderedPartialGraph::new(len + n - 1, false, edges, groups)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{build_arc_digraph, fully_compress};
    use crate::euler::euler_tour;
    use crate::graph::ordered_iso;

    fn g(n: u32, edges: &[Pair], groups: &[&[Pair]]) -> OrderedPartialGraph {
        OrderedPartialGraph::new(n, false, edges.to_vec(), groups.iter().map(|s| s.to_vec()))
            .unwrap()
    }

    #[test]
    fn glue_single_edges() {
        let e = g(2, &[(1, 2)], &[]);
        let j = glue(&e, &e, 1).unwrap();
        assert_eq!(j, g(3, &[(1, 2), (2, 3)], &[]));
    }

    #[test]
    fn five_step_gluing_reproduces_the_partial_word() {
        // the length-5 tour over graphs on [3]: empty; {23}+w13; {12,23}+w13;
        // {12}+w13; {13}
        let payloads = [
            g(3, &[], &[]),
            g(3, &[(2, 3)], &[&[(1, 3)]]),
            g(3, &[(1, 2), (2, 3)], &[&[(1, 3)]]),
            g(3, &[(1, 2)], &[&[(1, 3)]]),
            g(3, &[(1, 3)], &[]),
        ];
        let mut acc = payloads[0].clone();
        for p in &payloads[1..] {
            acc = glue(&acc, p, 2).unwrap();
        }
        let expect = g(7, &[(3, 4), (4, 5), (5, 7)], &[&[(2, 4)], &[(3, 5)], &[(4, 6)]]);
        assert_eq!(acc, expect);

        // and closing it yields the 5-vertex partial cycle
        let closed = cyclic_glue(&acc, 3, Closure::LengthBound).unwrap();
        let expect_cycle = OrderedPartialGraph::new(
            5,
            true,
            [(2, 5), (3, 4), (4, 5)],
            [vec![(2, 4)], vec![(3, 5)], vec![(1, 4)]],
        )
        .unwrap();
        assert_eq!(closed, expect_cycle);
    }

    #[test]
    fn glue_restores_windows() {
        let a = g(3, &[(1, 3), (2, 3)], &[]); // inversion graph of 231
        let b = g(3, &[(1, 2), (1, 3)], &[]); // inversion graph of 312
        let j = glue(&a, &b, 2).unwrap();
        assert_eq!(j.n(), 4);
        assert!(ordered_iso(&j.window_at(1, 3).unwrap(), &a));
        assert!(ordered_iso(&j.window_at(2, 3).unwrap(), &b));
    }

    #[test]
    fn glue_rejects_non_overlap() {
        let empty = OrderedPartialGraph::empty(3, false);
        let tri = g(3, &[(1, 2), (1, 3), (2, 3)], &[]);
        assert!(matches!(glue(&empty, &tri, 2), Err(Error::NoOverlap(2))));
    }

    #[test]
    fn cyclic_glue_guards() {
        // a pair spanning more than one window
        let long = g(6, &[(1, 5)], &[]);
        assert!(matches!(
            cyclic_glue(&long, 3, Closure::LengthBound),
            Err(Error::GluePrecondition(_))
        ));
        // ends that bridge
        let bridge = g(6, &[(2, 5), (1, 6)], &[]);
        assert!(cyclic_glue(&bridge, 3, Closure::LengthBound).is_err());
    }

    #[test]
    fn short_closure_only_with_window_check() {
        let star = fully_compress(&build_arc_digraph(3).unwrap()).unwrap();
        let tour = euler_tour(&star).unwrap();
        assert!(matches!(tour_to_cycle(&tour, &star, false), Err(Error::GluePrecondition(_))));
        let cycle = tour_to_cycle(&tour, &star, true).unwrap();
        let expect = OrderedPartialGraph::new(
            4,
            true,
            [(3, 4), (1, 4)],
            [vec![(1, 3)], vec![(2, 4)]],
        )
        .unwrap();
        assert_eq!(cycle, expect);
    }

    #[test]
    fn full_tour_of_d3_covers_all_windows() {
        let d3 = build_arc_digraph(3).unwrap();
        let tour = euler_tour(&d3).unwrap();
        let cycle = tour_to_cycle(&tour, &d3, false).unwrap();
        assert_eq!(cycle.n(), 8);
        // windows reproduce the tour payloads in order
        for (i, &e) in tour.edges.iter().enumerate() {
            let win = cycle.window_at(i as u32 + 1, 3).unwrap();
            assert_eq!(win, d3.edges[e].payload, "window {i}");
        }
        // and extraction inverts assembly
        assert_eq!(extract_tour(&cycle, &d3).unwrap(), tour);
    }

    #[test]
    fn path_and_cycle_roundtrip() {
        let d3 = build_arc_digraph(3).unwrap();
        let cycle = tour_to_cycle(&euler_tour(&d3).unwrap(), &d3, false).unwrap();
        let path = cycle_to_path(&cycle, 3).unwrap();
        assert_eq!(path.n(), 10);
        let back = cyclic_glue(&path, 3, Closure::LengthBound).unwrap();
        assert_eq!(back, cycle);
    }
}
