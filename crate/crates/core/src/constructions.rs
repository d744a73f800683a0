//! End-to-end pipelines: labeled partial cycles of prescribed lengths,
//! threshold cycles/words from binary-word objects, permutation cycles from
//! tours or numeric cycles, s-overlap cycles, and f-fold unlabeled cycles.

use crate::assembly::tour_to_cycle;
use crate::digraph::{
    build_arc_digraph, build_ffold_multigraph, build_perm_digraph, compress_twins,
    find_twin_edge_cycles, fully_compress, ArcDigraph, TwinPair,
};
use crate::error::{Error, Result};
use crate::euler::{euler_tour, select_tour_collection, EulerTour};
use crate::families::perm_graph;
use crate::graph::{OrderedPartialGraph, Pair};
use crate::words::{verify_perm_ucycle, verify_upword, PartialWord, Token};

/// A partial cycle of length `len` covering every labeled graph on [n]
/// exactly once; `2^C(n,2) - len` twin pairs get compressed, chosen per the
/// loop/2-tour/complement recipe.
pub fn labeled_gupcycle(n: u32, len: u64) -> Result<OrderedPartialGraph> {
    let full = 1u64 << (n * (n - 1) / 2);
    let low_max = 1u64 << (2 * n - 4);
    let in_range =
        (full / 2..=full / 2 + low_max).contains(&len) || (full - low_max..=full).contains(&len);
    if !in_range {
        return Err(Error::LengthRange(len));
    }
    let t = full - len;
    let d = build_arc_digraph(n)?;
    let star = fully_compress(&d)?;
    let selected = select_tour_collection(&star, t)?;
    let pairs: Vec<TwinPair> = selected
        .iter()
        .map(|&e| {
            let src = &star.edges[e].sources;
            TwinPair::new(src[0], src[1])
        })
        .collect();
    let compressed = compress_twins(&d, &pairs)?;
    let tour = euler_tour(&compressed)?;
    let allow_short = len <= 2 * (n as u64 - 1);
    tour_to_cycle(&tour, &compressed, allow_short)
}

fn require_binary_cycle(w: &PartialWord, order: u32) -> Result<()> {
    if !w.cyclic() || w.alphabet_size() != 2 || w.diamond_count() != 0 {
        return Err(Error::NotUniversal);
    }
    if w.len() != 1usize << order {
        return Err(Error::WordLength(w.len(), 1 << order));
    }
    if !verify_upword(w, order)?.exact {
        return Err(Error::NotUniversal);
    }
    Ok(())
}

/// Threshold cycle from a De Bruijn cycle for {0,1}^(n-1): on [2^(n-1)],
/// every position carrying a 1 dominates the n-1 positions before it.
pub fn threshold_gucycle_from_db(w: &PartialWord, n: u32) -> Result<OrderedPartialGraph> {
    if n < 4 {
        return Err(Error::GluePrecondition("threshold cycles need n >= 4"));
    }
    require_binary_cycle(w, n - 1)?;
    let len = w.len() as u32;
    let letters = w.letters().expect("checked diamond-free");
    let mut edges = Vec::new();
    for (idx, &bit) in letters.iter().enumerate() {
        let i = idx as u32 + 1;
        if bit == 1 {
            for back in 1..n {
                let j = (i + len - 1 - back) % len + 1;
                edges.push(crate::graph::canonical_pair(i, j));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    OrderedPartialGraph::new(len, true, edges, [])
}

/// Backward interval of word position `i` (1-based) on the linear vertex set
/// [len+1]: all pairs from vertex i+1 down to n-1 vertices earlier.
fn interval_linear(i: u32, n: u32) -> Vec<Pair> {
    let lo = i.saturating_sub(n - 1); // 0-based floor
    (lo..i).map(|j| (j + 1, i + 1)).collect()
}

/// Threshold partial word from an upword for {0,1}^(n-1): 1-positions
/// contribute their backward interval as edges, wildcard positions as one
/// jointly-selected group each.
pub fn threshold_gupword_from_upword(w: &PartialWord, n: u32) -> Result<OrderedPartialGraph> {
    if w.cyclic() || w.alphabet_size() != 2 {
        return Err(Error::NotUniversal);
    }
    if !verify_upword(w, n - 1)?.exact {
        return Err(Error::NotUniversal);
    }
    let mut edges = Vec::new();
    let mut groups = Vec::new();
    for (idx, tok) in w.tokens().iter().enumerate() {
        let i = idx as u32 + 1;
        match tok {
            Token::Letter(1) => edges.extend(interval_linear(i, n)),
            Token::Letter(_) => {}
            Token::Diamond(allowed) if allowed.is_empty() => groups.push(interval_linear(i, n)),
            Token::Diamond(_) => return Err(Error::NotUniversal),
        }
    }
    OrderedPartialGraph::new(w.len() as u32 + 1, false, edges, groups)
}

/// Cyclic analogue over vertex set [|w|], indices mod |w|; the length bound
/// keeps windows intact through the closure.
pub fn threshold_gupcycle_from_upcycle(w: &PartialWord, n: u32) -> Result<OrderedPartialGraph> {
    if !w.cyclic() || w.alphabet_size() != 2 {
        return Err(Error::NotUniversal);
    }
    let len = w.len() as u32;
    if len <= 2 * (n - 1) {
        return Err(Error::GluePrecondition("cycle shorter than twice the window overlap"));
    }
    if !verify_upword(w, n - 1)?.exact {
        return Err(Error::NotUniversal);
    }
    let interval = |i: u32| -> Vec<Pair> {
        (1..n).map(|back| {
            let j = (i + len - 1 - back) % len + 1;
            crate::graph::canonical_pair(i, j)
        })
        .collect()
    };
    let mut edges = Vec::new();
    let mut groups = Vec::new();
    for (idx, tok) in w.tokens().iter().enumerate() {
        let i = idx as u32 + 1;
        match tok {
            Token::Letter(1) => edges.extend(interval(i)),
            Token::Letter(_) => {}
            Token::Diamond(allowed) if allowed.is_empty() => groups.push(interval(i)),
            Token::Diamond(_) => return Err(Error::NotUniversal),
        }
    }
    edges.sort_unstable();
    edges.dedup();
    OrderedPartialGraph::new(len, true, edges, groups)
}

/// Map a verified numeric cycle's qualifying windows onto an Euler tour of
/// the matching permutation-graph digraph.
fn tour_from_numeric(word: &[u32], d: &ArcDigraph) -> Result<EulerTour> {
    let (n, s) = (d.window_len, d.overlap);
    let cov = verify_perm_ucycle(word, n, s)?;
    if !cov.exact {
        return Err(Error::NotUniversal);
    }
    let mut edges = Vec::new();
    for pat in &cov.order {
        let pat = pat.as_ref().expect("exact coverage leaves no degenerate window");
        let g = perm_graph(pat);
        let id = d
            .edges
            .iter()
            .position(|e| e.payload == g)
            .expect("every pattern is an edge payload");
        edges.push(id);
    }
    let start_vertex = d.edges[edges[0]].tail;
    let tour = EulerTour { edges, start_vertex };
    tour.validate(d)?;
    Ok(tour)
}

/// Cycle on [n!] covering each permutation graph once, from a deterministic
/// Euler tour of the permutation arc digraph.
pub fn perm_gucycle(n: u32) -> Result<(OrderedPartialGraph, EulerTour)> {
    let d = build_perm_digraph(n, n - 1)?;
    let tour = euler_tour(&d)?;
    let cycle = tour_to_cycle(&tour, &d, n == 3)?;
    Ok((cycle, tour))
}

/// Same, but covering S_n in the order of a given universal cycle word.
pub fn perm_gucycle_from_ucycle(n: u32, word: &[u32]) -> Result<OrderedPartialGraph> {
    let d = build_perm_digraph(n, n - 1)?;
    let tour = tour_from_numeric(word, &d)?;
    tour_to_cycle(&tour, &d, n == 3)
}

/// Partial cycle of length n! - i(n-1): compress i of the twin-edge cycles
/// (lexicographically least first), then assemble an Euler tour.
pub fn perm_gupcycle(n: u32, i: u64) -> Result<OrderedPartialGraph> {
    let d = build_perm_digraph(n, n - 1)?;
    let cycles = find_twin_edge_cycles(&d)?;
    if i > cycles.len() as u64 {
        return Err(Error::CycleCount(i, cycles.len() as u64));
    }
    let pairs: Vec<TwinPair> = cycles[..i as usize].iter().flatten().copied().collect();
    let compressed = compress_twins(&d, &pairs)?;
    let tour = euler_tour(&compressed)?;
    let len = compressed.edge_count() as u32;
    tour_to_cycle(&tour, &compressed, len <= 2 * (n - 1))
}

/// s-overlap cycle on [n!(n-s)] from a deterministic Euler tour of the
/// s-overlap permutation digraph.
pub fn sgocycle(n: u32, s: u32) -> Result<OrderedPartialGraph> {
    let d = build_perm_digraph(n, s)?;
    let tour = euler_tour(&d)?;
    tour_to_cycle(&tour, &d, false)
}

/// Same, covering S_n in the order of a verified numeric s-overlap cycle.
pub fn sgocycle_from_ocycle(n: u32, s: u32, word: &[u32]) -> Result<OrderedPartialGraph> {
    let d = build_perm_digraph(n, s)?;
    let tour = tour_from_numeric(word, &d)?;
    tour_to_cycle(&tour, &d, false)
}

/// Cycle covering every n-vertex isomorphism class exactly f times, f the
/// least common multiple of the class sizes.
pub fn ffold_gucycle(n: u32) -> Result<(OrderedPartialGraph, u64)> {
    let (m, f) = build_ffold_multigraph(n)?;
    let tour = euler_tour(&m)?;
    let cycle = tour_to_cycle(&tour, &m, false)?;
    Ok((cycle, f))
}

/// One qualifying-window payload listing of a cycle, for order checks.
pub fn window_payloads(cycle: &OrderedPartialGraph, n: u32, s: u32) -> Result<Vec<OrderedPartialGraph>> {
    let step = n - s;
    if cycle.n() % step != 0 {
        return Err(Error::WindowStep(cycle.n(), step));
    }
    (0..cycle.n() / step).map(|i| cycle.window_at(i * step + 1, n)).collect()
}
