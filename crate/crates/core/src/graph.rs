//! Ordered (partial) graphs: the universal container for every object this
//! crate builds or checks. Vertices are `1..=n`, either linearly or
//! cyclically ordered. Pairs are partitioned into edges, non-edges (implicit),
//! and wildcard ("diamond") pairs collected into groups that are selected or
//! dropped jointly.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

pub type Vertex = u32;
/// Unordered pair stored as (lo, hi) with lo < hi.
pub type Pair = (Vertex, Vertex);

/// Bit position of pair `(i, j)`, `1 <= i < j <= n`, in the lexicographic
/// listing (1,2), (1,3), ..., (1,n), (2,3), ..., (n-1,n).
pub fn pair_index(n: u32, i: u32, j: u32) -> u32 {
    debug_assert!(1 <= i && i < j && j <= n);
    (i - 1) * n - i * (i - 1) / 2 + (j - i - 1)
}

/// Inverse of [`pair_index`].
pub fn pair_at(n: u32, mut idx: u32) -> Pair {
    for i in 1..n {
        let row = n - i;
        if idx < row {
            return (i, i + 1 + idx);
        }
        idx -= row;
    }
    unreachable!("pair index out of range")
}

pub fn canonical_pair(a: Vertex, b: Vertex) -> Pair {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderedPartialGraph {
    n: u32,
    cyclic: bool,
    edges: BTreeSet<Pair>,
    diamond_groups: Vec<BTreeSet<Pair>>,
}

/// A `length`-window of a host graph starting at vertex `start`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WindowRef {
    pub start: Vertex,
    pub length: u32,
    pub wraps: bool,
}

impl WindowRef {
    pub fn new(host: &OrderedPartialGraph, start: Vertex, length: u32) -> Result<Self> {
        if start < 1 || start > host.n {
            return Err(Error::VertexRange(start, host.n));
        }
        if length > host.n || length == 0 {
            return Err(Error::WindowTooLong(length, host.n));
        }
        let wraps = start + length - 1 > host.n;
        if wraps && !host.cyclic {
            return Err(Error::WindowRange { start, len: length, n: host.n });
        }
        Ok(WindowRef { start, length, wraps })
    }
}

/// One diamond-free graph realized by a window, with every group selection
/// that produces it. Selections list host group indices, smallest first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub mask: u64,
    pub selections: Vec<Vec<usize>>,
}

impl OrderedPartialGraph {
    pub fn new(
        n: u32,
        cyclic: bool,
        edges: impl IntoIterator<Item = Pair>,
        groups: impl IntoIterator<Item = Vec<Pair>>,
    ) -> Result<Self> {
        let mut seen: BTreeSet<Pair> = BTreeSet::new();
        let mut es = BTreeSet::new();
        for (a, b) in edges {
            let p = canonical_pair(a, b);
            check_pair(n, p)?;
            if !seen.insert(p) {
                return Err(Error::PairConflict(p.0, p.1));
            }
            es.insert(p);
        }
        let mut gs: Vec<BTreeSet<Pair>> = Vec::new();
        for grp in groups {
            let mut set = BTreeSet::new();
            for (a, b) in grp {
                let p = canonical_pair(a, b);
                check_pair(n, p)?;
                if !seen.insert(p) {
                    return Err(Error::PairConflict(p.0, p.1));
                }
                set.insert(p);
            }
            if !set.is_empty() {
                gs.push(set);
            }
        }
        gs.sort();
        Ok(OrderedPartialGraph { n, cyclic, edges: es, diamond_groups: gs })
    }

    pub fn empty(n: u32, cyclic: bool) -> Self {
        OrderedPartialGraph { n, cyclic, edges: BTreeSet::new(), diamond_groups: Vec::new() }
    }

    /// Order-preserving relabel of a graph on arbitrary ordered labels down to
    /// `[n]`. Already-reduced inputs come back unchanged, so this is idempotent.
    pub fn from_labeled(
        labels: &[Vertex],
        edges: &[(Vertex, Vertex)],
        groups: &[Vec<(Vertex, Vertex)>],
    ) -> Result<Self> {
        let ordered: BTreeSet<Vertex> = labels.iter().copied().collect();
        if ordered.len() != labels.len() {
            return Err(Error::NotDistinct);
        }
        let index: std::collections::BTreeMap<Vertex, Vertex> =
            ordered.iter().enumerate().map(|(k, &v)| (v, k as Vertex + 1)).collect();
        let map = |(a, b): (Vertex, Vertex)| -> Result<Pair> {
            let (x, y) = (
                *index.get(&a).ok_or(Error::VertexRange(a, 0))?,
                *index.get(&b).ok_or(Error::VertexRange(b, 0))?,
            );
            Ok(canonical_pair(x, y))
        };
        let es = edges.iter().copied().map(map).collect::<Result<Vec<_>>>()?;
        let gs = groups
            .iter()
            .map(|g| g.iter().copied().map(map).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(ordered.len() as u32, false, es, gs)
    }

    /// Diamond-free linear graph from its pair bitmask.
    pub fn from_bitmask(n: u32, mask: u64) -> Self {
        let total = n * (n - 1) / 2;
        debug_assert!(total <= 63 && mask >> total == 0);
        let edges = (0..total).filter(|b| mask >> b & 1 == 1).map(|b| pair_at(n, b));
        OrderedPartialGraph { n, cyclic: false, edges: edges.collect(), diamond_groups: Vec::new() }
    }

    /// Pair bitmask of a diamond-free graph; `None` when wildcards are present
    /// or the graph is too large to encode.
    pub fn bitmask(&self) -> Option<u64> {
        if !self.diamond_groups.is_empty() || self.n * (self.n - 1) / 2 > 63 {
            return None;
        }
        let mut mask = 0u64;
        for &(i, j) in &self.edges {
            mask |= 1 << pair_index(self.n, i, j);
        }
        Some(mask)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn cyclic(&self) -> bool {
        self.cyclic
    }

    pub fn edges(&self) -> &BTreeSet<Pair> {
        &self.edges
    }

    pub fn diamond_groups(&self) -> &[BTreeSet<Pair>] {
        &self.diamond_groups
    }

    pub fn diamond_pair_count(&self) -> usize {
        self.diamond_groups.iter().map(|g| g.len()).sum()
    }

    pub fn with_cyclic(mut self, cyclic: bool) -> Self {
        self.cyclic = cyclic;
        self
    }

    fn window_positions(&self, w: WindowRef) -> Vec<Vertex> {
        (0..w.length).map(|t| (w.start - 1 + t) % self.n + 1).collect()
    }

    /// Induced ordered partial graph on `length` consecutive vertices, reduced
    /// to `[length]`, together with the host group index behind each retained
    /// wildcard group.
    pub fn window_tagged(&self, w: WindowRef) -> Result<(OrderedPartialGraph, Vec<usize>)> {
        WindowRef::new(self, w.start, w.length)?;
        let verts = self.window_positions(w);
        let mut pos = std::collections::BTreeMap::new();
        for (k, &v) in verts.iter().enumerate() {
            pos.insert(v, k as Vertex + 1);
        }
        let remap = |p: &Pair| -> Option<Pair> {
            match (pos.get(&p.0), pos.get(&p.1)) {
                (Some(&a), Some(&b)) => Some(canonical_pair(a, b)),
                _ => None,
            }
        };
        let edges: BTreeSet<Pair> = self.edges.iter().filter_map(&remap).collect();
        let mut tags = Vec::new();
        let mut groups = Vec::new();
        for (gi, grp) in self.diamond_groups.iter().enumerate() {
            let inside: BTreeSet<Pair> = grp.iter().filter_map(&remap).collect();
            if !inside.is_empty() {
                tags.push(gi);
                groups.push(inside);
            }
        }
        let win = OrderedPartialGraph { n: w.length, cyclic: false, edges, diamond_groups: groups };
        Ok((win, tags))
    }

    pub fn window(&self, w: WindowRef) -> Result<OrderedPartialGraph> {
        Ok(self.window_tagged(w)?.0)
    }

    pub fn window_at(&self, start: Vertex, length: u32) -> Result<OrderedPartialGraph> {
        self.window(WindowRef::new(self, start, length)?)
    }

    /// All diamond-free graphs realized by a window over subsets of the
    /// wildcard groups meeting it, deduplicated, sorted by bitmask. Each
    /// realization keeps every selection (host group indices) producing it.
    pub fn realizations(&self, w: WindowRef) -> Result<Vec<Realization>> {
        let (win, tags) = self.window_tagged(w)?;
        if w.length * (w.length - 1) / 2 > 63 {
            return Err(Error::Guard(format!("window length {} too large to encode", w.length)));
        }
        let base: u64 = win
            .edges
            .iter()
            .map(|&(i, j)| 1u64 << pair_index(win.n, i, j))
            .fold(0, |a, b| a | b);
        let gmasks: Vec<u64> = win
            .diamond_groups
            .iter()
            .map(|g| g.iter().map(|&(i, j)| 1u64 << pair_index(win.n, i, j)).fold(0, |a, b| a | b))
            .collect();
        let mut by_mask: std::collections::BTreeMap<u64, Vec<Vec<usize>>> =
            std::collections::BTreeMap::new();
        for sel in 0u64..(1 << gmasks.len()) {
            let mut mask = base;
            let mut chosen = Vec::new();
            for (k, gm) in gmasks.iter().enumerate() {
                if sel >> k & 1 == 1 {
                    mask |= gm;
                    chosen.push(tags[k]);
                }
            }
            by_mask.entry(mask).or_default().push(chosen);
        }
        Ok(by_mask
            .into_iter()
            .map(|(mask, mut selections)| {
                selections.sort();
                Realization { mask, selections }
            })
            .collect())
    }

    /// Do the last `s` vertices of `self` match the first `s` of `other`,
    /// as ordered partial graphs (grouping included)? Linear hosts only.
    pub fn overlaps_by(&self, other: &OrderedPartialGraph, s: u32) -> Result<bool> {
        let max = self.n.min(other.n) - 1;
        if s < 1 || s > max {
            return Err(Error::OverlapRange { s, max });
        }
        let tail = self.window_at(self.n - s + 1, s)?;
        let head = other.window_at(1, s)?;
        Ok(tail == head)
    }

    /// Largest index span of any pair: `j - i` for linear hosts, cyclic
    /// distance for cyclic ones. 0 when there are no pairs.
    pub fn max_pair_span(&self) -> u32 {
        self.all_pairs()
            .map(|&(i, j)| {
                if self.cyclic {
                    (j - i).min(self.n - (j - i))
                } else {
                    j - i
                }
            })
            .max()
            .unwrap_or(0)
    }

    pub fn all_pairs(&self) -> impl Iterator<Item = &Pair> {
        self.edges.iter().chain(self.diamond_groups.iter().flatten())
    }

    /// Cyclic relabel moving vertex `r+1` to position 1.
    pub fn rotated(&self, r: u32) -> Self {
        debug_assert!(self.cyclic);
        let shift = |v: Vertex| (v + self.n - 1 - r) % self.n + 1;
        let map = |p: &Pair| canonical_pair(shift(p.0), shift(p.1));
        let mut groups: Vec<BTreeSet<Pair>> =
            self.diamond_groups.iter().map(|g| g.iter().map(&map).collect()).collect();
        groups.sort();
        OrderedPartialGraph {
            n: self.n,
            cyclic: true,
            edges: self.edges.iter().map(&map).collect(),
            diamond_groups: groups,
        }
    }

    /// Equality of cyclically ordered graphs: equal after some rotation.
    pub fn cyclic_iso(&self, other: &Self) -> bool {
        if !self.cyclic || !other.cyclic || self.n != other.n {
            return self == other;
        }
        (0..self.n).any(|r| &self.rotated(r) == other)
    }

    /// Deterministic sort key: edge bitmask-as-pairlist first, then groups.
    /// For encodable diamond-free graphs this orders exactly by bitmask.
    pub fn sort_key(&self) -> (u64, Vec<Vec<Pair>>, Vec<Pair>) {
        let mask = if self.diamond_groups.is_empty() { self.bitmask() } else { None };
        (
            mask.unwrap_or(u64::MAX),
            self.diamond_groups.iter().map(|g| g.iter().copied().collect()).collect(),
            self.edges.iter().copied().collect(),
        )
    }

    /// GraphViz rendering: vertices on one rank in order, solid edges,
    /// dashed wildcard pairs colored per group.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph g {\n  rankdir=LR;\n  { rank=same;");
        for v in 1..=self.n {
            out.push_str(&format!(" v{v};"));
        }
        out.push_str(" }\n");
        for v in 1..=self.n {
            out.push_str(&format!("  v{v} [label=\"{v}\", shape=circle];\n"));
        }
        for &(i, j) in &self.edges {
            out.push_str(&format!("  v{i} -- v{j} [style=solid];\n"));
        }
        let palette = ["red", "blue", "green", "orange", "purple", "brown", "cyan", "magenta"];
        for (gi, grp) in self.diamond_groups.iter().enumerate() {
            let color = palette[gi % palette.len()];
            for &(i, j) in grp {
                out.push_str(&format!("  v{i} -- v{j} [style=dashed, color={color}];\n"));
            }
        }
        out.push_str("}\n");
        out
    }
}

fn check_pair(n: u32, (i, j): Pair) -> Result<()> {
    if i < 1 || j > n {
        return Err(Error::VertexRange(j.max(i), n));
    }
    if i == j {
        return Err(Error::PairConflict(i, j));
    }
    Ok(())
}

/// Ordered (partial) isomorphism: equal reduced forms, wildcard grouping
/// compared as a set of sets.
pub fn ordered_iso(a: &OrderedPartialGraph, b: &OrderedPartialGraph) -> bool {
    a.n == b.n && a.edges == b.edges && a.diamond_groups == b.diamond_groups
}

impl fmt::Debug for OrderedPartialGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}[n={} {:?}",
            if self.cyclic { "cycle" } else { "word" },
            self.n,
            self.edges
        )?;
        if !self.diamond_groups.is_empty() {
            write!(f, " diamonds={:?}", self.diamond_groups)?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    n: u32,
    cyclic: bool,
    edges: Vec<Pair>,
    diamond_groups: Vec<Vec<Pair>>,
}

impl Serialize for OrderedPartialGraph {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        RawGraph {
            n: self.n,
            cyclic: self.cyclic,
            edges: self.edges.iter().copied().collect(),
            diamond_groups: self
                .diamond_groups
                .iter()
                .map(|g| g.iter().copied().collect())
                .collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for OrderedPartialGraph {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = RawGraph::deserialize(de)?;
        let g = OrderedPartialGraph::new(raw.n, raw.cyclic, raw.edges, raw.diamond_groups)
            .map_err(serde::de::Error::custom)?;
        Ok(g)
    }
}

impl OrderedPartialGraph {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("graph serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: u32, cyclic: bool, edges: &[Pair], groups: &[&[Pair]]) -> OrderedPartialGraph {
        OrderedPartialGraph::new(
            n,
            cyclic,
            edges.iter().copied(),
            groups.iter().map(|g| g.to_vec()),
        )
        .unwrap()
    }

    /// 8-vertex cycle covering all labeled graphs on [3].
    pub(crate) fn labeled_gucycle_n3() -> OrderedPartialGraph {
        g(8, true, &[(3, 4), (4, 5), (5, 6), (7, 8), (1, 3), (2, 4), (4, 6), (5, 7)], &[])
    }

    /// 5-vertex partial cycle covering all labeled graphs on [3].
    pub(crate) fn labeled_gupcycle_n3() -> OrderedPartialGraph {
        g(5, true, &[(2, 5), (3, 4), (4, 5)], &[&[(2, 4)], &[(3, 5)], &[(1, 4)]])
    }

    #[test]
    fn pair_index_roundtrip() {
        for n in 2..=10u32 {
            for idx in 0..n * (n - 1) / 2 {
                let (i, j) = pair_at(n, idx);
                assert_eq!(pair_index(n, i, j), idx);
            }
        }
        assert_eq!(pair_index(3, 1, 2), 0);
        assert_eq!(pair_index(3, 1, 3), 1);
        assert_eq!(pair_index(3, 2, 3), 2);
    }

    #[test]
    fn reduce_relabels_in_order() {
        let r = OrderedPartialGraph::from_labeled(&[2, 5, 9], &[(2, 5), (5, 9)], &[]).unwrap();
        assert_eq!(r, g(3, false, &[(1, 2), (2, 3)], &[]));
        // identity on, and idempotent over, already-reduced input
        let again =
            OrderedPartialGraph::from_labeled(&[1, 2, 3], &[(1, 2), (2, 3)], &[]).unwrap();
        assert_eq!(again, r);
    }

    #[test]
    fn figure_window_values() {
        let cyc = labeled_gucycle_n3();
        let w = cyc.window_at(3, 3).unwrap();
        assert_eq!(w, g(3, false, &[(1, 2), (2, 3)], &[]));
        // wrap window picks up the pair {7,8} as {1,2}
        let w = cyc.window_at(7, 3).unwrap();
        assert!(w.edges().contains(&(1, 2)));

        let gup = labeled_gupcycle_n3();
        let w = gup.window_at(3, 3).unwrap();
        assert_eq!(w, g(3, false, &[(1, 2), (2, 3)], &[&[(1, 3)]]));
        // full-length window of a linear host is the host itself
        let lin = g(4, false, &[(1, 2), (3, 4)], &[&[(2, 4)]]);
        assert_eq!(lin.window_at(1, 4).unwrap(), lin);
    }

    #[test]
    fn ordered_iso_examples() {
        let a = g(2, false, &[(1, 2)], &[]);
        let b = OrderedPartialGraph::from_labeled(&[4, 7], &[(4, 7)], &[]).unwrap();
        assert!(ordered_iso(&a, &b));
        let p1 = g(3, false, &[(1, 2), (2, 3)], &[]);
        let p2 = g(3, false, &[(1, 2), (1, 3)], &[]);
        assert!(!ordered_iso(&p1, &p2));
        // first two windows of the 5-vertex partial cycle differ
        let gup = labeled_gupcycle_n3();
        let w1 = gup.window_at(1, 3).unwrap();
        let w2 = gup.window_at(2, 3).unwrap();
        assert!(!ordered_iso(&w1, &w2));
    }

    #[test]
    fn realization_counts() {
        let gup = labeled_gupcycle_n3();
        let rs = gup.realizations(WindowRef::new(&gup, 3, 3).unwrap()).unwrap();
        let masks: Vec<u64> = rs.iter().map(|r| r.mask).collect();
        // path {12,23} and triangle
        assert_eq!(masks, vec![0b101, 0b111]);

        // no wildcards -> singleton
        let plain = g(4, false, &[(1, 2)], &[]);
        let rs = plain.realizations(WindowRef::new(&plain, 1, 4).unwrap()).unwrap();
        assert_eq!(rs.len(), 1);

        // k independent singleton groups -> 2^k distinct realizations
        for k in 0..=4u32 {
            let groups: Vec<Vec<Pair>> = (0..k).map(|t| vec![(1, t + 2)]).collect();
            let host = OrderedPartialGraph::new(k + 5, false, [], groups).unwrap();
            let rs = host.realizations(WindowRef::new(&host, 1, k + 5).unwrap()).unwrap();
            assert_eq!(rs.len(), 1 << k);
        }
    }

    #[test]
    fn overlap_examples() {
        let e = g(2, false, &[(1, 2)], &[]);
        assert!(e.overlaps_by(&e, 1).unwrap());
        // inversion graphs of 123 and 321: empty vs triangle, 2-windows differ
        let empty = OrderedPartialGraph::empty(3, false);
        let tri = g(3, false, &[(1, 2), (1, 3), (2, 3)], &[]);
        assert!(!empty.overlaps_by(&tri, 2).unwrap());
        assert!(e.overlaps_by(&e, 2).is_err());

        // all consecutive 3-windows of the 8-vertex cycle overlap by 2
        let cyc = labeled_gucycle_n3();
        for st in 1..=8 {
            let a = cyc.window_at(st, 3).unwrap();
            let b = cyc.window_at(st % 8 + 1, 3).unwrap();
            assert!(a.overlaps_by(&b, 2).unwrap(), "windows {st}");
        }
    }

    #[test]
    fn cyclic_window_count_and_rotation() {
        let cyc = labeled_gupcycle_n3();
        let windows: Vec<_> = (1..=5).map(|s| cyc.window_at(s, 3).unwrap()).collect();
        assert_eq!(windows.len(), 5);
        // rotating by one shifts the window sequence by one
        let rot = cyc.rotated(1);
        for s in 1..=5u32 {
            assert_eq!(rot.window_at(s, 3).unwrap(), cyc.window_at(s % 5 + 1, 3).unwrap());
        }
        assert!(cyc.cyclic_iso(&rot));
    }

    #[test]
    fn pair_invariants_rejected() {
        assert!(OrderedPartialGraph::new(3, false, [(1, 2), (1, 2)], []).is_err());
        assert!(OrderedPartialGraph::new(3, false, [(1, 2)], [vec![(1, 2)]]).is_err());
        assert!(OrderedPartialGraph::new(3, false, [(1, 4)], []).is_err());
        assert!(OrderedPartialGraph::new(3, false, [(2, 2)], []).is_err());
    }

    #[test]
    fn json_roundtrip_is_sorted() {
        let gup = labeled_gupcycle_n3();
        let text = gup.to_json();
        let back = OrderedPartialGraph::from_json(&text).unwrap();
        assert_eq!(back, gup);
        assert!(text.find("\"edges\"").unwrap() < text.find("\"diamond_groups\"").unwrap());
    }
}
