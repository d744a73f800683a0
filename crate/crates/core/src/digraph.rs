//! Overlap multidigraphs. Edges carry whole objects (graphs or permutations)
//! whose first/last windows identify the tail/head vertices; Euler tours of
//! these digraphs become the cycles built in `constructions`.

use crate::error::{Error, Result};
use crate::families::{
    canonical_form, labeled_copy_count, perm_graph, IsoClassCode, Permutation,
};
use crate::graph::{OrderedPartialGraph, Pair};
use crate::guard::guard;
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// Directed multigraph with identified, payload-carrying edges. Parallel
/// edges are first-class; edge ids are dense and assigned in payload order.
#[derive(Clone, Debug)]
pub struct OverlapDigraph<V, P> {
    /// vertices-per-payload (the family window size n)
    pub window_len: u32,
    /// overlap s between consecutive payloads
    pub overlap: u32,
    /// vertex payload codes, sorted; index = vertex id
    pub vertices: Vec<V>,
    pub edges: Vec<DiEdge<P>>,
}

#[derive(Clone, Debug)]
pub struct DiEdge<P> {
    pub tail: usize,
    pub head: usize,
    pub payload: P,
    /// edge ids this edge came from, through compressions
    pub sources: Vec<usize>,
}

/// Arc digraphs over graph payloads; vertex code = pair bitmask.
pub type ArcDigraph = OverlapDigraph<u64, OrderedPartialGraph>;
/// Clustered digraphs over permutation payloads; vertex code = permutation.
pub type ClusteredDigraph = OverlapDigraph<Permutation, Permutation>;

/// A compressible pair of parallel edges, ids ordered `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TwinPair {
    pub a: usize,
    pub b: usize,
}

impl TwinPair {
    pub fn new(e: usize, f: usize) -> Self {
        TwinPair { a: e.min(f), b: e.max(f) }
    }
}

impl<V, P> OverlapDigraph<V, P> {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|e| (e.tail, e.head))
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for e in &self.edges {
            deg[e.tail] += 1;
        }
        deg
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for e in &self.edges {
            deg[e.head] += 1;
        }
        deg
    }
}

fn graphs_on(n: u32) -> impl Iterator<Item = u64> {
    0..1u64 << (n * (n - 1) / 2)
}

/// The arc digraph for labeled graphs on [n]: vertices are the graphs on
/// [n-1], edges the graphs on [n], joined along (n-1)-window overlaps.
pub fn build_arc_digraph(n: u32) -> Result<ArcDigraph> {
    guard((3..=6).contains(&n), || format!("arc digraph limited to 3 <= n <= 6, got {n}"))?;
    let mut edges = Vec::with_capacity(1 << (n * (n - 1) / 2));
    for mask in graphs_on(n) {
        let g = OrderedPartialGraph::from_bitmask(n, mask);
        let tail = g.window_at(1, n - 1)?.bitmask().expect("plain window");
        let head = g.window_at(2, n - 1)?.bitmask().expect("plain window");
        edges.push(DiEdge {
            tail: tail as usize,
            head: head as usize,
            payload: g,
            sources: vec![mask as usize],
        });
    }
    Ok(OverlapDigraph {
        window_len: n,
        overlap: n - 1,
        vertices: graphs_on(n - 1).collect(),
        edges,
    })
}

/// The long pair {1, n} toggled by twin compression.
fn long_pair(n: u32) -> Pair {
    (1, n)
}

/// Payload of the twin of `e`: same pairs with {1, n} toggled.
fn twin_payload(n: u32, payload: &OrderedPartialGraph) -> Result<OrderedPartialGraph> {
    if payload.diamond_groups().iter().any(|g| g.contains(&long_pair(n))) {
        return Err(Error::AlreadyCompressed);
    }
    let mut pairs: Vec<Pair> = payload.edges().iter().copied().collect();
    if let Some(pos) = pairs.iter().position(|&p| p == long_pair(n)) {
        pairs.remove(pos);
    } else {
        pairs.push(long_pair(n));
    }
    OrderedPartialGraph::new(
        n,
        false,
        pairs,
        payload.diamond_groups().iter().map(|g| g.iter().copied().collect()),
    )
}

type PayloadKey = (u64, Vec<Vec<Pair>>, Vec<Pair>);

fn payload_index(d: &ArcDigraph) -> BTreeMap<PayloadKey, usize> {
    d.edges.iter().enumerate().map(|(i, e)| (e.payload.sort_key(), i)).collect()
}

/// The unique edge whose payload toggles the pair {1, n}.
pub fn find_twin(d: &ArcDigraph, e: usize) -> Result<usize> {
    let edge = d.edges.get(e).ok_or(Error::EdgeRange(e))?;
    let twin = twin_payload(d.window_len, &edge.payload)?;
    payload_index(d)
        .get(&twin.sort_key())
        .copied()
        .ok_or(Error::BadTour("twin payload not present"))
}

/// Checks a claimed twin pair against a prebuilt payload index: same
/// endpoints, payloads differing exactly in the pair {1, n}.
fn check_twins(d: &ArcDigraph, index: &BTreeMap<PayloadKey, usize>, p: TwinPair) -> Result<()> {
    let (a, b) = (p.a, p.b);
    if a >= d.edges.len() || b >= d.edges.len() || a == b {
        return Err(Error::NotTwins(a, b));
    }
    if d.edges[a].tail != d.edges[b].tail || d.edges[a].head != d.edges[b].head {
        return Err(Error::NotTwins(a, b));
    }
    let twin = twin_payload(d.window_len, &d.edges[a].payload)?;
    if index.get(&twin.sort_key()) != Some(&b) {
        return Err(Error::NotTwins(a, b));
    }
    Ok(())
}

fn renumber<P: Clone>(
    window_len: u32,
    overlap: u32,
    vertices: Vec<u64>,
    mut edges: Vec<DiEdge<P>>,
    key: impl Fn(&P) -> (u64, Vec<Vec<Pair>>, Vec<Pair>),
) -> OverlapDigraph<u64, P> {
    edges.sort_by(|x, y| key(&x.payload).cmp(&key(&y.payload)).then(x.sources.cmp(&y.sources)));
    OverlapDigraph { window_len, overlap, vertices, edges }
}

/// Replace each twin pair by one edge carrying the shared pairs plus the
/// singleton wildcard group {{1, n}}. Edge ids are reassigned densely in
/// payload order; each new edge records the ids it came from.
pub fn compress_twins(d: &ArcDigraph, pairs: &[TwinPair]) -> Result<ArcDigraph> {
    let n = d.window_len;
    let index = payload_index(d);
    let mut in_pair = vec![false; d.edges.len()];
    for &p in pairs {
        check_twins(d, &index, p)?;
        for e in [p.a, p.b] {
            if in_pair[e] {
                return Err(Error::TwinPairOverlap(e));
            }
            in_pair[e] = true;
        }
    }
    let mut edges: Vec<DiEdge<OrderedPartialGraph>> = Vec::new();
    for (i, e) in d.edges.iter().enumerate() {
        if !in_pair[i] {
            edges.push(e.clone());
        }
    }
    for &p in pairs {
        let keep = &d.edges[p.a];
        let mut shared: Vec<Pair> = keep.payload.edges().iter().copied().collect();
        shared.retain(|&q| q != long_pair(n));
        let mut groups: Vec<Vec<Pair>> =
            keep.payload.diamond_groups().iter().map(|g| g.iter().copied().collect()).collect();
        groups.push(vec![long_pair(n)]);
        let payload = OrderedPartialGraph::new(n, false, shared, groups)?;
        let mut sources = [d.edges[p.a].sources.clone(), d.edges[p.b].sources.clone()].concat();
        sources.sort_unstable();
        edges.push(DiEdge { tail: keep.tail, head: keep.head, payload, sources });
    }
    Ok(renumber(n, d.overlap, d.vertices.clone(), edges, OrderedPartialGraph::sort_key))
}

/// All twin pairs of an uncompressed arc digraph, sorted. Edges whose twin
/// payload is absent (subgraph digraphs like the permutation one) are skipped.
pub fn all_twin_pairs(d: &ArcDigraph) -> Result<Vec<TwinPair>> {
    let index = payload_index(d);
    let mut seen = vec![false; d.edges.len()];
    let mut out = Vec::new();
    for e in 0..d.edges.len() {
        if seen[e] {
            continue;
        }
        let twin = twin_payload(d.window_len, &d.edges[e].payload)?;
        if let Some(&f) = index.get(&twin.sort_key()) {
            seen[e] = true;
            seen[f] = true;
            out.push(TwinPair::new(e, f));
        }
    }
    out.sort();
    Ok(out)
}

/// Fully compressed arc digraph: every twin pair compressed.
pub fn fully_compress(d: &ArcDigraph) -> Result<ArcDigraph> {
    compress_twins(d, &all_twin_pairs(d)?)
}

/// Edges with tail == head.
pub fn find_loops<V, P>(d: &OverlapDigraph<V, P>) -> Vec<usize> {
    (0..d.edges.len()).filter(|&e| d.edges[e].tail == d.edges[e].head).collect()
}

/// Unordered pairs of distinct edges forming a closed walk of length 2.
pub fn find_2tours<V, P>(d: &OverlapDigraph<V, P>) -> Vec<(usize, usize)> {
    let mut by_arc: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, e) in d.edges.iter().enumerate() {
        by_arc.entry((e.tail, e.head)).or_default().push(i);
    }
    let mut out = Vec::new();
    for (&(u, v), fwd) in &by_arc {
        if u == v {
            // two distinct loops at one vertex also close a 2-walk
            for (i, &e) in fwd.iter().enumerate() {
                for &f in &fwd[i + 1..] {
                    out.push((e, f));
                }
            }
            continue;
        }
        if u < v {
            if let Some(bwd) = by_arc.get(&(v, u)) {
                for &e in fwd {
                    for &f in bwd {
                        out.push((e.min(f), e.max(f)));
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// The s-overlap arc digraph for permutation graphs on [n]: vertices are the
/// permutation graphs on [s], edges the permutation graphs on [n]; an edge
/// runs from its first s-window to its last.
pub fn build_perm_digraph(n: u32, s: u32) -> Result<ArcDigraph> {
    guard((2..=7).contains(&n), || format!("permutation digraph limited to n <= 7, got {n}"))?;
    if s < 1 || s >= n {
        return Err(Error::OverlapRange { s, max: n - 1 });
    }
    let vertices: Vec<u64> = {
        let mut v: Vec<u64> = Permutation::all(s)
            .iter()
            .map(|p| perm_graph(p).bitmask().expect("plain"))
            .collect();
        v.sort_unstable();
        v
    };
    let vertex_id: BTreeMap<u64, usize> =
        vertices.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut edges = Vec::new();
    for p in Permutation::all(n) {
        let g = perm_graph(&p);
        let tail = g.window_at(1, s)?.bitmask().expect("plain");
        let head = g.window_at(n - s + 1, s)?.bitmask().expect("plain");
        edges.push(DiEdge {
            tail: vertex_id[&tail],
            head: vertex_id[&head],
            payload: g,
            sources: Vec::new(),
        });
    }
    let mut d = renumber(n, s, vertices, edges, OrderedPartialGraph::sort_key);
    for (i, e) in d.edges.iter_mut().enumerate() {
        e.sources = vec![i];
    }
    Ok(d)
}

/// The clustered graph of s-overlapping n-permutations: vertices S_s, one
/// edge per permutation of [n] from its reduced s-prefix to its reduced
/// s-suffix.
pub fn build_clustered_graph(n: u32, s: u32) -> Result<ClusteredDigraph> {
    guard((2..=7).contains(&n), || format!("clustered graph limited to n <= 7, got {n}"))?;
    if s < 1 || s >= n {
        return Err(Error::OverlapRange { s, max: n - 1 });
    }
    let vertices = Permutation::all(s);
    let vertex_id: BTreeMap<Permutation, usize> =
        vertices.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let mut edges = Vec::new();
    for p in Permutation::all(n) {
        let tail = p.prefix(s as usize).reduce();
        let head = p.suffix(s as usize).reduce();
        let id = edges.len();
        edges.push(DiEdge {
            tail: vertex_id[&tail],
            head: vertex_id[&head],
            payload: p,
            sources: vec![id],
        });
    }
    Ok(OverlapDigraph { window_len: n, overlap: s, vertices, edges })
}

/// The disjoint cycles formed by twin edges in the arc digraph for
/// permutation graphs: (n-2)! of them, each of n-1 twin pairs. Cycles are
/// returned sorted by their smallest edge id, each starting at it.
pub fn find_twin_edge_cycles(d: &ArcDigraph) -> Result<Vec<Vec<TwinPair>>> {
    let pairs = all_twin_pairs(d)?;
    let n = d.window_len as u64;
    let expect_pairs: u64 = (1..=n - 1).product();
    if pairs.len() as u64 != expect_pairs {
        return Err(Error::BadTour("twin pair count is off"));
    }
    // the compressed edges form a functional digraph on the vertices
    let mut next: BTreeMap<usize, TwinPair> = BTreeMap::new();
    for &p in &pairs {
        let tail = d.edges[p.a].tail;
        if next.insert(tail, p).is_some() {
            return Err(Error::BadTour("two twin pairs leave one vertex"));
        }
    }
    let mut visited: BTreeMap<usize, bool> = BTreeMap::new();
    let mut cycles = Vec::new();
    for &start in &pairs {
        if *visited.get(&start.a).unwrap_or(&false) {
            continue;
        }
        let mut cycle = Vec::new();
        let mut cur = start;
        loop {
            visited.insert(cur.a, true);
            cycle.push(cur);
            cur = next[&d.edges[cur.a].head];
            if cur == start {
                break;
            }
        }
        cycles.push(cycle);
    }
    let expect_cycles: u64 = (1..=n.saturating_sub(2)).product();
    let ok = cycles.len() as u64 == expect_cycles
        && cycles.iter().all(|c| c.len() as u64 == n - 1);
    if !ok {
        return Err(Error::BadTour("twin cycles do not have the expected shape"));
    }
    cycles.sort_by_key(|c| c[0]);
    Ok(cycles)
}

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    }
    a / gcd(a, b) * b
}

/// Add parallel copies of every labeled graph until each isomorphism class
/// contributes the same number of edges f = lcm of the class copy counts.
pub fn build_ffold_multigraph(n: u32) -> Result<(ArcDigraph, u64)> {
    guard((3..=5).contains(&n), || format!("f-fold multigraph limited to n <= 5, got {n}"))?;
    let d = build_arc_digraph(n)?;
    let mut class_of: Vec<IsoClassCode> = Vec::with_capacity(d.edges.len());
    let mut copies: BTreeMap<u64, u64> = BTreeMap::new();
    for e in &d.edges {
        let c = canonical_form(&e.payload)?;
        copies.entry(c.canon).or_insert(labeled_copy_count(&c)?);
        class_of.push(c);
    }
    let f = copies.values().copied().fold(1, lcm);
    let mut edges = Vec::new();
    for (i, e) in d.edges.iter().enumerate() {
        let reps = f / copies[&class_of[i].canon];
        for _ in 0..reps {
            edges.push(e.clone());
        }
    }
    Ok((
        renumber(n, n - 1, d.vertices.clone(), edges, OrderedPartialGraph::sort_key),
        f,
    ))
}

/// Is the subgraph of the arc digraph induced by one isomorphism class
/// balanced at every vertex?
pub fn ffold_subgraph_balance(d: &ArcDigraph, class: &IsoClassCode) -> Result<bool> {
    let mut net = vec![0i64; d.vertices.len()];
    for e in &d.edges {
        if canonical_form(&e.payload)? == *class {
            net[e.tail] += 1;
            net[e.head] -= 1;
        }
    }
    Ok(net.iter().all(|&x| x == 0))
}

/// Re-check the defining overlap property on every edge.
pub fn overlap_consistent(d: &ArcDigraph) -> Result<bool> {
    let (n, s) = (d.window_len, d.overlap);
    for e in &d.edges {
        let first = e.payload.window_at(1, s)?;
        let last = e.payload.window_at(n - s + 1, s)?;
        let tail_graph = OrderedPartialGraph::from_bitmask(s, d.vertices[e.tail]);
        let head_graph = OrderedPartialGraph::from_bitmask(s, d.vertices[e.head]);
        // vertices of compressed digraphs stay diamond-free, so compare the
        // realization-free part only when the window has no wildcards
        if first.diamond_groups().is_empty() && first != tail_graph {
            return Ok(false);
        }
        if last.diamond_groups().is_empty() && last != head_graph {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---- serialization ----

pub trait PayloadCodec: Sized {
    fn to_value(&self) -> Value;
    fn from_value(v: &Value) -> Result<Self>;
    fn code_string(&self) -> String;
}

impl PayloadCodec for OrderedPartialGraph {
    fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("graph serializes")
    }
    fn from_value(v: &Value) -> Result<Self> {
        Ok(serde_json::from_value(v.clone())?)
    }
    fn code_string(&self) -> String {
        match self.bitmask() {
            Some(m) => format!("g{}:0x{:x}", self.n(), m),
            None => format!("g{}:partial", self.n()),
        }
    }
}

impl PayloadCodec for Permutation {
    fn to_value(&self) -> Value {
        Value::String(self.to_string())
    }
    fn from_value(v: &Value) -> Result<Self> {
        let s = v.as_str().ok_or_else(|| Error::Parse("expected permutation string".into()))?;
        Permutation::parse(s)
    }
    fn code_string(&self) -> String {
        self.to_string()
    }
}

pub trait VertexCodec: Sized {
    fn code(&self, s: u32) -> String;
    fn decode(text: &str, s: u32) -> Result<Self>;
}

impl VertexCodec for u64 {
    fn code(&self, s: u32) -> String {
        format!("g{}:0x{:x}", s, self)
    }
    fn decode(text: &str, _s: u32) -> Result<Self> {
        let hex = text
            .split_once(":0x")
            .ok_or_else(|| Error::Parse(format!("bad vertex code '{text}'")))?
            .1;
        u64::from_str_radix(hex, 16).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl VertexCodec for Permutation {
    fn code(&self, _s: u32) -> String {
        self.to_string()
    }
    fn decode(text: &str, _s: u32) -> Result<Self> {
        Permutation::parse(text)
    }
}

impl<V: VertexCodec, P: PayloadCodec> OverlapDigraph<V, P> {
    pub fn to_json(&self) -> String {
        let vertices: Vec<String> = self.vertices.iter().map(|v| v.code(self.overlap)).collect();
        let edges: Vec<Value> = self
            .edges
            .iter()
            .enumerate()
            .map(|(id, e)| {
                json!({
                    "id": id,
                    "tail": e.tail,
                    "head": e.head,
                    "payload": e.payload.to_value(),
                    "sources": e.sources,
                })
            })
            .collect();
        let doc = json!({
            "n": self.window_len,
            "s": self.overlap,
            "vertices": vertices,
            "edges": edges,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("digraph serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Value = serde_json::from_str(text)?;
        let n = doc["n"].as_u64().ok_or_else(|| Error::Parse("missing n".into()))? as u32;
        let s = doc["s"].as_u64().ok_or_else(|| Error::Parse("missing s".into()))? as u32;
        let vertices = doc["vertices"]
            .as_array()
            .ok_or_else(|| Error::Parse("missing vertices".into()))?
            .iter()
            .map(|v| {
                V::decode(
                    v.as_str().ok_or_else(|| Error::Parse("vertex code must be a string".into()))?,
                    s,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let mut edges = Vec::new();
        for e in doc["edges"].as_array().ok_or_else(|| Error::Parse("missing edges".into()))? {
            let tail = e["tail"].as_u64().ok_or_else(|| Error::Parse("edge tail".into()))?;
            let head = e["head"].as_u64().ok_or_else(|| Error::Parse("edge head".into()))?;
            let sources = e["sources"]
                .as_array()
                .map(|a| a.iter().filter_map(|x| x.as_u64().map(|v| v as usize)).collect())
                .unwrap_or_default();
            edges.push(DiEdge {
                tail: tail as usize,
                head: head as usize,
                payload: P::from_value(&e["payload"])?,
                sources,
            });
        }
        for e in &edges {
            if e.tail >= vertices.len() || e.head >= vertices.len() {
                return Err(Error::Parse("edge endpoint out of range".into()));
            }
        }
        Ok(OverlapDigraph { window_len: n, overlap: s, vertices, edges })
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph d {\n  rankdir=LR;\n");
        for (i, v) in self.vertices.iter().enumerate() {
            out.push_str(&format!("  n{i} [label=\"{}\"];\n", v.code(self.overlap)));
        }
        for (id, e) in self.edges.iter().enumerate() {
            out.push_str(&format!(
                "  n{} -> n{} [label=\"{}:{}\"];\n",
                e.tail,
                e.head,
                id,
                e.payload.code_string()
            ));
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler;

    #[test]
    fn arc_digraph_shape() {
        let d3 = build_arc_digraph(3).unwrap();
        assert_eq!(d3.vertex_count(), 2);
        assert_eq!(d3.edge_count(), 8);
        assert_eq!(find_loops(&d3).len(), 4); // two loops at each vertex
        let parallel: Vec<_> =
            d3.edges.iter().filter(|e| e.tail == 0 && e.head == 1).collect();
        assert_eq!(parallel.len(), 2);

        let d4 = build_arc_digraph(4).unwrap();
        assert_eq!(d4.vertex_count(), 8);
        assert_eq!(d4.edge_count(), 64);
        assert!(euler::is_balanced(&d4));
        assert!(overlap_consistent(&d4).unwrap());
    }

    #[test]
    fn twin_examples() {
        let d3 = build_arc_digraph(3).unwrap();
        // edge ids in D_n are payload bitmasks
        let empty = 0usize;
        let twin = find_twin(&d3, empty).unwrap();
        assert_eq!(twin, 0b010); // single {1,3} edge
        let triangle = 0b111usize;
        assert_eq!(find_twin(&d3, triangle).unwrap(), 0b101); // drops {1,3}

        let d4 = build_arc_digraph(4).unwrap();
        for e in 0..64 {
            assert_eq!(find_twin(&d4, find_twin(&d4, e).unwrap()).unwrap(), e);
            assert_ne!(find_twin(&d4, e).unwrap(), e);
        }
    }

    #[test]
    fn compression_counts() {
        let d3 = build_arc_digraph(3).unwrap();
        let star = fully_compress(&d3).unwrap();
        assert_eq!(star.edge_count(), 4);
        assert!(star.edges.iter().all(|e| e.payload.diamond_groups().len() == 1));
        assert!(star.edges.iter().all(|e| e.sources.len() == 2));
        // compressing the empty set is the identity
        let same = compress_twins(&d3, &[]).unwrap();
        assert_eq!(same.edge_count(), 8);

        let d4 = build_arc_digraph(4).unwrap();
        assert_eq!(fully_compress(&d4).unwrap().edge_count(), 32);

        // overlapping pairs and non-twins are rejected
        let t = all_twin_pairs(&d3).unwrap();
        assert_eq!(t.len(), 4);
        let bad = [t[0], TwinPair::new(t[0].a, t[1].b)];
        assert!(compress_twins(&d3, &bad).is_err());
        assert!(compress_twins(&d3, &[TwinPair::new(0, 1)]).is_err());
    }

    #[test]
    fn loop_and_two_tour_counts() {
        for n in 3..=5u32 {
            let star = fully_compress(&build_arc_digraph(n).unwrap()).unwrap();
            assert_eq!(find_loops(&star).len() as u64, 1 << (n - 2), "loops at n={n}");
            let expected = (1u64 << (2 * n - 5)) - (1 << (n - 3));
            assert_eq!(find_2tours(&star).len() as u64, expected, "2-tours at n={n}");
        }
    }

    #[test]
    fn perm_digraph_shapes() {
        let p32 = build_perm_digraph(3, 2).unwrap();
        assert_eq!((p32.vertex_count(), p32.edge_count()), (2, 6));
        let p42 = build_perm_digraph(4, 2).unwrap();
        assert_eq!((p42.vertex_count(), p42.edge_count()), (2, 24));
        let p43 = build_perm_digraph(4, 3).unwrap();
        assert_eq!((p43.vertex_count(), p43.edge_count()), (6, 24));
        assert!(euler::is_balanced(&p43));
    }

    #[test]
    fn clustered_matches_perm_digraph() {
        for (n, s) in [(3u32, 2u32), (3, 1), (4, 3), (4, 2), (5, 4), (5, 2)] {
            let o = build_clustered_graph(n, s).unwrap();
            let p = build_perm_digraph(n, s).unwrap();
            assert_eq!(o.edge_count(), p.edge_count());
            for e in &o.edges {
                let g = perm_graph(&e.payload);
                let tail_code = perm_graph(&o.vertices[e.tail]).bitmask().unwrap();
                let head_code = perm_graph(&o.vertices[e.head]).bitmask().unwrap();
                let pe = p
                    .edges
                    .iter()
                    .find(|f| f.payload == g)
                    .expect("payload present on both sides");
                assert_eq!(p.vertices[pe.tail], tail_code, "{e:?}");
                assert_eq!(p.vertices[pe.head], head_code);
            }
        }
    }

    #[test]
    fn clustered_loops_follow_the_definition() {
        let o = build_clustered_graph(3, 2).unwrap();
        let loops: Vec<String> =
            find_loops(&o).iter().map(|&e| o.edges[e].payload.to_string()).collect();
        assert_eq!(loops, ["1,2,3", "3,2,1"]);
    }

    #[test]
    fn twin_edge_cycles() {
        for (n, cycles, len) in [(3u32, 1usize, 2usize), (4, 2, 3), (5, 6, 4)] {
            let p = build_perm_digraph(n, n - 1).unwrap();
            let found = find_twin_edge_cycles(&p).unwrap();
            assert_eq!(found.len(), cycles, "n={n}");
            assert!(found.iter().all(|c| c.len() == len));
        }
    }

    #[test]
    fn ffold_multigraph() {
        let (m, f) = build_ffold_multigraph(3).unwrap();
        assert_eq!(f, 3);
        assert_eq!(m.edge_count(), 12);
        assert!(euler::is_balanced(&m));
        // the triangle contributes three parallel copies
        let tri = m.edges.iter().filter(|e| e.payload.edges().len() == 3).count();
        assert_eq!(tri, 3);

        let (m4, f4) = build_ffold_multigraph(4).unwrap();
        assert_eq!(m4.edge_count() as u64, 11 * f4);
        assert!(euler::is_balanced(&m4));
    }

    #[test]
    fn class_subgraphs_balanced() {
        for n in [3u32, 4] {
            let d = build_arc_digraph(n).unwrap();
            let classes = crate::families::enumerate_family(
                &crate::families::FamilyDescriptor::new(crate::families::FamilyKind::Unlabeled, n)
                    .unwrap(),
            )
            .unwrap();
            for c in classes {
                assert!(ffold_subgraph_balance(&d, &IsoClassCode { n, canon: c }).unwrap());
            }
        }
    }

    #[test]
    fn digraph_json_roundtrip() {
        let d3 = fully_compress(&build_arc_digraph(3).unwrap()).unwrap();
        let text = d3.to_json();
        let back = ArcDigraph::from_json(&text).unwrap();
        assert_eq!(back.edge_count(), 4);
        assert_eq!(back.vertices, d3.vertices);
        for (a, b) in back.edges.iter().zip(&d3.edges) {
            assert_eq!(a.payload, b.payload);
            assert_eq!((a.tail, a.head), (b.tail, b.head));
        }
        let o = build_clustered_graph(3, 2).unwrap();
        let back = ClusteredDigraph::from_json(&o.to_json()).unwrap();
        assert_eq!(back.edge_count(), 6);
    }
}
