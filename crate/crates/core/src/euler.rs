//! Balance and connectivity checks, deterministic Euler tours, exact tour
//! counting through arborescences, and the balanced edge selections used to
//! hit prescribed cycle lengths.

use crate::digraph::{find_2tours, find_loops, ArcDigraph, OverlapDigraph};
use crate::error::{Error, Result};
use crate::guard::guard;
use num_bigint::BigInt;

fn zero() -> BigInt {
    BigInt::from(0)
}
use serde_json::json;
use std::collections::BTreeSet;

/// Closed walk covering each edge id exactly once, canonicalized so the
/// smallest edge id comes first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerTour {
    pub edges: Vec<usize>,
    pub start_vertex: usize,
}

impl EulerTour {
    /// Rotate so the smallest edge id leads; tours compare up to rotation.
    pub fn canonicalize<V, P>(mut self, d: &OverlapDigraph<V, P>) -> Self {
        if let Some(pos) = self
            .edges
            .iter()
            .enumerate()
            .min_by_key(|(_, &e)| e)
            .map(|(i, _)| i)
        {
            self.edges.rotate_left(pos);
            self.start_vertex = d.edges[self.edges[0]].tail;
        }
        self
    }

    /// Check the tour against its digraph: closed, consecutive, each edge once.
    pub fn validate<V, P>(&self, d: &OverlapDigraph<V, P>) -> Result<()> {
        if self.edges.len() != d.edge_count() {
            return Err(Error::BadTour("edge count mismatch"));
        }
        let mut used = vec![false; d.edge_count()];
        let mut at = self.start_vertex;
        for &e in &self.edges {
            let edge = d.edges.get(e).ok_or(Error::EdgeRange(e))?;
            if used[e] {
                return Err(Error::BadTour("repeated edge"));
            }
            used[e] = true;
            if edge.tail != at {
                return Err(Error::BadTour("edges do not chain"));
            }
            at = edge.head;
        }
        if at != self.start_vertex {
            return Err(Error::BadTour("tour does not close"));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&json!({
            "start_vertex": self.start_vertex,
            "edges": self.edges,
        }))
        .expect("tour serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: serde_json::Value = serde_json::from_str(text)?;
        let start_vertex = doc["start_vertex"]
            .as_u64()
            .ok_or_else(|| Error::Parse("missing start_vertex".into()))? as usize;
        let edges = doc["edges"]
            .as_array()
            .ok_or_else(|| Error::Parse("missing edges".into()))?
            .iter()
            .map(|v| v.as_u64().map(|x| x as usize))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Parse("bad edge id".into()))?;
        Ok(EulerTour { edges, start_vertex })
    }
}

pub fn is_balanced<V, P>(d: &OverlapDigraph<V, P>) -> bool {
    d.in_degrees() == d.out_degrees()
}

/// Reachability both ways among all edge-incident vertices. Vertices with no
/// edges are ignored; an edgeless digraph counts as connected.
pub fn is_strongly_connected<V, P>(d: &OverlapDigraph<V, P>) -> bool {
    let active: Vec<usize> = (0..d.vertex_count())
        .filter(|&v| d.edges.iter().any(|e| e.tail == v || e.head == v))
        .collect();
    let Some(&root) = active.first() else { return true };
    let reach = |forward: bool| -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([root]);
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for e in &d.edges {
                let (from, to) = if forward { (e.tail, e.head) } else { (e.head, e.tail) };
                if from == v && seen.insert(to) {
                    stack.push(to);
                }
            }
        }
        seen
    };
    let fwd = reach(true);
    let bwd = reach(false);
    active.iter().all(|v| fwd.contains(v) && bwd.contains(v))
}

/// Deterministic Hierholzer walk: start at the smallest edge-incident vertex,
/// always leave along the smallest unused edge id.
pub fn euler_tour<V, P>(d: &OverlapDigraph<V, P>) -> Result<EulerTour> {
    if !is_balanced(d) {
        return Err(Error::NotBalanced);
    }
    if !is_strongly_connected(d) {
        return Err(Error::NotConnected);
    }
    if d.edge_count() == 0 {
        return Err(Error::BadTour("no edges"));
    }
    // out-edge ids per vertex, ascending
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); d.vertex_count()];
    for (i, e) in d.edges.iter().enumerate() {
        out[e.tail].push(i);
    }
    for list in &mut out {
        list.sort_unstable();
        list.reverse(); // pop from the back = smallest first
    }
    let start = (0..d.vertex_count())
        .find(|&v| !out[v].is_empty())
        .expect("some vertex has an edge");
    let mut stack_v = vec![start];
    let mut stack_e: Vec<usize> = Vec::new();
    let mut circuit = Vec::with_capacity(d.edge_count());
    while let Some(&v) = stack_v.last() {
        if let Some(e) = out[v].pop() {
            stack_v.push(d.edges[e].head);
            stack_e.push(e);
        } else {
            stack_v.pop();
            if let Some(e) = stack_e.pop() {
                circuit.push(e);
            }
        }
    }
    circuit.reverse();
    let tour = EulerTour { edges: circuit, start_vertex: start }.canonicalize(d);
    tour.validate(d)?;
    Ok(tour)
}

/// Exact determinant by fraction-free elimination.
fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut sign = 1i32;
    let mut denom = BigInt::from(1);
    for k in 0..n {
        if m[k][k] == zero() {
            let Some(swap) = (k + 1..n).find(|&r| m[r][k] != zero()) else {
                return zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &denom;
                m[i][j] = v;
            }
            m[i][k] = zero();
        }
        denom = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Number of Euler tours up to rotation: arborescence count at a root times
/// the product over vertices of (out-degree - 1)!.
pub fn count_euler_tours<V, P>(d: &OverlapDigraph<V, P>) -> Result<BigInt> {
    let active: Vec<usize> = (0..d.vertex_count())
        .filter(|&v| d.edges.iter().any(|e| e.tail == v || e.head == v))
        .collect();
    guard(active.len() <= 12, || {
        format!("tour counting limited to 12 active vertices, got {}", active.len())
    })?;
    if !is_balanced(d) || !is_strongly_connected(d) {
        return Err(Error::NotBalanced);
    }
    if d.edge_count() == 0 {
        return Err(Error::BadTour("no edges"));
    }
    let index: std::collections::BTreeMap<usize, usize> =
        active.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let k = active.len();
    // out-degree Laplacian; loops cancel out of it
    let mut lap = vec![vec![zero(); k]; k];
    for e in &d.edges {
        let (t, h) = (index[&e.tail], index[&e.head]);
        if t != h {
            lap[t][t] += 1;
            lap[t][h] -= 1;
        }
    }
    // arborescences toward the root: drop the root's row and column
    let minor: Vec<Vec<BigInt>> =
        (1..k).map(|i| (1..k).map(|j| lap[i][j].clone()).collect()).collect();
    let trees = determinant(minor);
    let mut count = trees;
    for v in &active {
        let deg = d.edges.iter().filter(|e| e.tail == *v).count();
        for x in 1..deg as u64 {
            count *= x;
        }
    }
    Ok(count)
}

/// A balanced edge set of size `t` in the fully compressed arc digraph,
/// assembled from loops and 2-tours in the low range and by complementing
/// such a selection in the high range.
pub fn select_tour_collection(star: &ArcDigraph, t: u64) -> Result<BTreeSet<usize>> {
    let n = star.window_len;
    let total = star.edge_count() as u64; // 2^(C(n,2)-1)
    let low_max = 1u64 << (2 * n - 4);
    let loops = find_loops(star);
    let two_tours = find_2tours(star);

    let pick_low = |t: u64| -> Result<BTreeSet<usize>> {
        let loop_count = loops.len() as u64; // 2^(n-2)
        if t <= loop_count {
            return Ok(loops.iter().take(t as usize).copied().collect());
        }
        let (tours_needed, loops_needed) = if t % 2 == 0 {
            (t / 2 - (1 << (n - 3)), loop_count)
        } else {
            ((t + 1) / 2 - (1 << (n - 3)), loop_count - 1)
        };
        if tours_needed > two_tours.len() as u64 {
            return Err(Error::TourSize(t, low_max, total - low_max, total));
        }
        let mut sel: BTreeSet<usize> = loops.iter().take(loops_needed as usize).copied().collect();
        for &(e, f) in two_tours.iter().take(tours_needed as usize) {
            sel.insert(e);
            sel.insert(f);
        }
        Ok(sel)
    };

    let sel = if t <= low_max {
        pick_low(t)?
    } else if total - low_max <= t && t <= total {
        let small = pick_low(total - t)?;
        (0..star.edge_count()).filter(|e| !small.contains(e)).collect()
    } else {
        return Err(Error::TourSize(t, low_max, total - low_max, total));
    };
    debug_assert_eq!(sel.len() as u64, t);
    Ok(sel)
}

/// In-degree equals out-degree inside the edge subset.
pub fn subset_balanced<V, P>(d: &OverlapDigraph<V, P>, subset: &BTreeSet<usize>) -> bool {
    let mut net = vec![0i64; d.vertex_count()];
    for &e in subset {
        net[d.edges[e].tail] += 1;
        net[d.edges[e].head] -= 1;
    }
    net.iter().all(|&x| x == 0)
}
