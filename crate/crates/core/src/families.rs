//! The four target families and their codecs: labeled graphs (pair bitmasks),
//! unlabeled isomorphism classes (minimal bitmask over relabelings), threshold
//! graphs (binary build words), and permutation graphs (inversion encoding).

use crate::error::{Error, Result};
use crate::graph::{pair_index, OrderedPartialGraph, Vertex};
use crate::guard::guard;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Labeled,
    Unlabeled,
    Threshold,
    Permutation,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FamilyKind::Labeled => "labeled",
            FamilyKind::Unlabeled => "unlabeled",
            FamilyKind::Threshold => "threshold",
            FamilyKind::Permutation => "permutation",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for FamilyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "labeled" => Ok(FamilyKind::Labeled),
            "unlabeled" => Ok(FamilyKind::Unlabeled),
            "threshold" => Ok(FamilyKind::Threshold),
            "permutation" | "perm" => Ok(FamilyKind::Permutation),
            other => Err(Error::Parse(format!("unknown family kind '{other}'"))),
        }
    }
}

/// Names a target family: member size `n`, window overlap `s` (default n-1),
/// fold multiplicity `f` (default 1, >1 only for unlabeled families).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDescriptor {
    pub kind: FamilyKind,
    pub n: u32,
    pub s: u32,
    pub f: u64,
}

impl FamilyDescriptor {
    pub fn new(kind: FamilyKind, n: u32) -> Result<Self> {
        FamilyDescriptor { kind, n, s: n.saturating_sub(1), f: 1 }.validated()
    }

    pub fn with_overlap(mut self, s: u32) -> Result<Self> {
        self.s = s;
        self.validated()
    }

    pub fn with_fold(mut self, f: u64) -> Result<Self> {
        self.f = f;
        self.validated()
    }

    fn validated(self) -> Result<Self> {
        if self.n < 2 {
            return Err(Error::Parse(format!("family needs n >= 2, got {}", self.n)));
        }
        if self.s < 1 || self.s > self.n - 1 {
            return Err(Error::OverlapRange { s: self.s, max: self.n - 1 });
        }
        if self.f < 1 || (self.f > 1 && !matches!(self.kind, FamilyKind::Unlabeled)) {
            return Err(Error::Parse(format!("fold {} invalid for {}", self.f, self.kind)));
        }
        Ok(self)
    }
}

/// A sequence of distinct positive integers in one-line notation. Not
/// necessarily a permutation of `[n]`; `reduce` maps to one.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn new(values: impl Into<Vec<u32>>) -> Result<Self> {
        let values = values.into();
        let set: std::collections::BTreeSet<u32> = values.iter().copied().collect();
        if set.len() != values.len() || values.is_empty() {
            return Err(Error::NotDistinct);
        }
        Ok(Permutation(values))
    }

    pub fn identity(n: u32) -> Self {
        Permutation((1..=n).collect())
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Order-isomorphic representative in S_n.
    pub fn reduce(&self) -> Permutation {
        reduce_word(&self.0)
    }

    pub fn prefix(&self, s: usize) -> Permutation {
        Permutation(self.0[..s].to_vec())
    }

    pub fn suffix(&self, s: usize) -> Permutation {
        Permutation(self.0[self.0.len() - s..].to_vec())
    }

    /// All of S_n in lexicographic order.
    pub fn all(n: u32) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        let mut used = vec![false; n as usize + 1];
        fn rec(n: u32, cur: &mut Vec<u32>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if cur.len() == n as usize {
                out.push(Permutation(cur.clone()));
                return;
            }
            for v in 1..=n {
                if !used[v as usize] {
                    used[v as usize] = true;
                    cur.push(v);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[v as usize] = false;
                }
            }
        }
        rec(n, &mut cur, &mut used, &mut out);
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let vals: Vec<u32> = if text.contains(',') {
            text.split(',')
                .map(|t| t.trim().parse::<u32>().map_err(|e| Error::Parse(e.to_string())))
                .collect::<Result<_>>()?
        } else {
            text.trim()
                .chars()
                .map(|c| c.to_digit(10).ok_or_else(|| Error::Parse(format!("bad digit '{c}'"))))
                .collect::<Result<_>>()?
        };
        Permutation::new(vals)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p({self})")
    }
}

/// Reduce an arbitrary distinct-value word to its pattern in S_n.
pub fn reduce_word(w: &[u32]) -> Permutation {
    let mut sorted: Vec<u32> = w.to_vec();
    sorted.sort_unstable();
    Permutation(
        w.iter().map(|v| sorted.binary_search(v).unwrap() as u32 + 1).collect(),
    )
}

/// Pairwise comparisons agree at every index pair.
pub fn order_iso_words(u: &Permutation, v: &Permutation) -> Result<bool> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch(u.len(), v.len()));
    }
    Ok(u.reduce() == v.reduce())
}

/// Binary build word of a threshold graph: bit i says vertex i+2 arrives
/// dominating (1) or isolated (0).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ThresholdWord(Vec<u8>);

impl ThresholdWord {
    pub fn new(bits: impl Into<Vec<u8>>) -> Result<Self> {
        let bits = bits.into();
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Alphabet(2, 2));
        }
        Ok(ThresholdWord(bits))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bits: Vec<u8> = text
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Parse(format!("bad threshold bit '{other}'"))),
            })
            .collect::<Result<_>>()?;
        Ok(ThresholdWord(bits))
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for ThresholdWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ThresholdWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t({self})")
    }
}

/// Build the graph on [len+1] left to right: vertex i+1 dominates all earlier
/// vertices when bit i is 1, otherwise arrives isolated.
pub fn threshold_from_word(b: &ThresholdWord) -> OrderedPartialGraph {
    let n = b.len() as u32 + 1;
    let mut edges = Vec::new();
    for (i, &bit) in b.bits().iter().enumerate() {
        let v = i as Vertex + 2;
        if bit == 1 {
            for u in 1..v {
                edges.push((u, v));
            }
        }
    }
    OrderedPartialGraph::new(n, false, edges, []).expect("threshold build is valid")
}

/// Inverse of [`threshold_from_word`] on construction-ordered graphs:
/// repeatedly delete the largest-index dominating vertex, else the
/// largest-index isolated vertex, and check the rebuilt graph matches.
pub fn word_from_threshold(g: &OrderedPartialGraph) -> Result<ThresholdWord> {
    if !g.diamond_groups().is_empty() {
        return Err(Error::NotThreshold);
    }
    let mut alive: Vec<Vertex> = (1..=g.n()).collect();
    let mut bits_rev: Vec<u8> = Vec::new();
    while alive.len() > 1 {
        let deg = |v: Vertex| {
            alive
                .iter()
                .filter(|&&u| u != v && g.edges().contains(&crate::graph::canonical_pair(u, v)))
                .count()
        };
        let dominating = alive.iter().rev().copied().find(|&v| deg(v) == alive.len() - 1);
        let isolated = alive.iter().rev().copied().find(|&v| deg(v) == 0);
        let (v, bit) = match (dominating, isolated) {
            (Some(v), _) => (v, 1),
            (None, Some(v)) => (v, 0),
            (None, None) => return Err(Error::NotThreshold),
        };
        bits_rev.push(bit);
        alive.retain(|&u| u != v);
    }
    bits_rev.reverse();
    let word = ThresholdWord::new(bits_rev)?;
    if threshold_from_word(&word) != *g {
        return Err(Error::NotConstructionOrdered);
    }
    Ok(word)
}

/// Inversion graph: edge {i,j}, i<j, iff p_i > p_j. Arbitrary distinct
/// values are reduced first.
pub fn perm_graph(p: &Permutation) -> OrderedPartialGraph {
    let r = p.reduce();
    let v = r.values();
    let n = v.len() as u32;
    let mut edges = Vec::new();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                edges.push((i as Vertex + 1, j as Vertex + 1));
            }
        }
    }
    OrderedPartialGraph::new(n, false, edges, []).expect("inversion graph is valid")
}

/// Unique p in S_n with `perm_graph(p) == g`, decoded through the inversion
/// table; errors when the table is inconsistent with the input.
pub fn perm_from_graph(g: &OrderedPartialGraph) -> Result<Permutation> {
    if !g.diamond_groups().is_empty() {
        return Err(Error::NotInversionGraph);
    }
    let n = g.n();
    let mut remaining: Vec<u32> = (1..=n).collect();
    let mut values = Vec::with_capacity(n as usize);
    for i in 1..=n {
        let c = (i + 1..=n).filter(|&j| g.edges().contains(&(i, j))).count();
        if c >= remaining.len() {
            return Err(Error::NotInversionGraph);
        }
        values.push(remaining.remove(c));
    }
    let p = Permutation::new(values)?;
    if perm_graph(&p) != *g {
        return Err(Error::NotInversionGraph);
    }
    Ok(p)
}

/// Minimal pair bitmask of a labeled graph over all vertex relabelings.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IsoClassCode {
    pub n: u32,
    pub canon: u64,
}

impl fmt::Display for IsoClassCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}:0x{:x}", self.n, self.canon)
    }
}

impl fmt::Debug for IsoClassCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl IsoClassCode {
    pub fn parse(text: &str) -> Result<Self> {
        let rest = text.strip_prefix('n').ok_or_else(|| Error::Parse(text.into()))?;
        let (n, hex) = rest.split_once(":0x").ok_or_else(|| Error::Parse(text.into()))?;
        Ok(IsoClassCode {
            n: n.parse().map_err(|_| Error::Parse(text.into()))?,
            canon: u64::from_str_radix(hex, 16).map_err(|_| Error::Parse(text.into()))?,
        })
    }
}

fn for_each_permutation(n: u32, mut f: impl FnMut(&[u32])) {
    let mut perm: Vec<u32> = (1..=n).collect();
    // Heap's algorithm, iterative
    let mut c = vec![0usize; n as usize];
    f(&perm);
    let mut i = 0usize;
    while i < n as usize {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            f(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn relabel_mask(n: u32, mask: u64, perm: &[u32]) -> u64 {
    let total = n * (n - 1) / 2;
    let mut out = 0u64;
    for b in 0..total {
        if mask >> b & 1 == 1 {
            let (i, j) = crate::graph::pair_at(n, b);
            let (a, bb) = (perm[i as usize - 1], perm[j as usize - 1]);
            let p = if a < bb { (a, bb) } else { (bb, a) };
            out |= 1 << pair_index(n, p.0, p.1);
        }
    }
    out
}

/// Minimum bitmask over all n! relabelings of a plain graph bitmask.
pub fn canonical_mask(n: u32, mask: u64) -> Result<u64> {
    guard(n <= 8, || format!("canonical form brute force limited to n <= 8, got {n}"))?;
    let mut best = u64::MAX;
    for_each_permutation(n, |perm| {
        let m = relabel_mask(n, mask, perm);
        if m < best {
            best = m;
        }
    });
    Ok(best)
}

/// Canonical isomorphism-class code of a diamond-free ordered graph.
pub fn canonical_form(g: &OrderedPartialGraph) -> Result<IsoClassCode> {
    let mask = g.bitmask().ok_or(Error::NotPlain)?;
    Ok(IsoClassCode { n: g.n(), canon: canonical_mask(g.n(), mask)? })
}

/// Number of labeled graphs on [n] in the class: n!/|Aut|.
pub fn labeled_copy_count(code: &IsoClassCode) -> Result<u64> {
    guard(code.n <= 8, || format!("copy count limited to n <= 8, got {}", code.n))?;
    let mut aut = 0u64;
    for_each_permutation(code.n, |perm| {
        if relabel_mask(code.n, code.canon, perm) == code.canon {
            aut += 1;
        }
    });
    let fact: u64 = (1..=code.n as u64).product();
    Ok(fact / aut)
}

/// Deterministic member list for a family, as codes: pair bitmasks for
/// labeled/threshold/permutation members, canonical masks for unlabeled.
pub fn enumerate_family(d: &FamilyDescriptor) -> Result<Vec<u64>> {
    let n = d.n;
    match d.kind {
        FamilyKind::Labeled => {
            guard(n <= 7, || format!("labeled enumeration limited to n <= 7, got {n}"))?;
            Ok((0..1u64 << (n * (n - 1) / 2)).collect())
        }
        FamilyKind::Threshold => {
            let mut out = Vec::new();
            for w in 0..1u64 << (n - 1) {
                let bits: Vec<u8> = (0..n - 1).map(|i| (w >> (n - 2 - i) & 1) as u8).collect();
                let g = threshold_from_word(&ThresholdWord::new(bits)?);
                out.push(g.bitmask().expect("threshold graphs are plain"));
            }
            Ok(out)
        }
        FamilyKind::Permutation => {
            guard(n <= 8, || format!("permutation enumeration limited to n <= 8, got {n}"))?;
            Ok(Permutation::all(n)
                .iter()
                .map(|p| perm_graph(p).bitmask().expect("plain"))
                .collect())
        }
        FamilyKind::Unlabeled => {
            guard(n <= 8, || format!("unlabeled enumeration limited to n <= 8, got {n}"))?;
            let mut set = std::collections::BTreeSet::new();
            for mask in 0..1u64 << (n * (n - 1) / 2) {
                set.insert(canonical_mask(n, mask)?);
            }
            Ok(set.into_iter().collect())
        }
    }
}

/// Printable member code in the family's own notation.
pub fn member_code_string(d: &FamilyDescriptor, code: u64) -> String {
    match d.kind {
        FamilyKind::Labeled => format!("g{}:0x{:x}", d.n, code),
        FamilyKind::Unlabeled => IsoClassCode { n: d.n, canon: code }.to_string(),
        FamilyKind::Threshold => {
            let g = OrderedPartialGraph::from_bitmask(d.n, code);
            word_from_threshold(&g).map(|w| w.to_string()).unwrap_or_else(|_| format!("0x{code:x}"))
        }
        FamilyKind::Permutation => {
            let g = OrderedPartialGraph::from_bitmask(d.n, code);
            perm_from_graph(&g).map(|p| p.to_string()).unwrap_or_else(|_| format!("0x{code:x}"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_sizes() {
        let lab = FamilyDescriptor::new(FamilyKind::Labeled, 3).unwrap();
        assert_eq!(enumerate_family(&lab).unwrap().len(), 8);
        let unl3 = FamilyDescriptor::new(FamilyKind::Unlabeled, 3).unwrap();
        assert_eq!(enumerate_family(&unl3).unwrap().len(), 4);
        let unl4 = FamilyDescriptor::new(FamilyKind::Unlabeled, 4).unwrap();
        assert_eq!(enumerate_family(&unl4).unwrap().len(), 11);
        let unl5 = FamilyDescriptor::new(FamilyKind::Unlabeled, 5).unwrap();
        assert_eq!(enumerate_family(&unl5).unwrap().len(), 34);
        let thr = FamilyDescriptor::new(FamilyKind::Threshold, 4).unwrap();
        assert_eq!(enumerate_family(&thr).unwrap().len(), 8);
        let per = FamilyDescriptor::new(FamilyKind::Permutation, 4).unwrap();
        assert_eq!(enumerate_family(&per).unwrap().len(), 24);
    }

    #[test]
    fn descriptor_validation() {
        assert!(FamilyDescriptor::new(FamilyKind::Labeled, 1).is_err());
        let d = FamilyDescriptor::new(FamilyKind::Labeled, 4).unwrap();
        assert_eq!(d.s, 3);
        assert!(d.with_overlap(4).is_err());
        assert!(d.with_fold(2).is_err());
        let u = FamilyDescriptor::new(FamilyKind::Unlabeled, 3).unwrap();
        assert_eq!(u.with_fold(3).unwrap().f, 3);
    }

    #[test]
    fn threshold_examples() {
        let empty = threshold_from_word(&ThresholdWord::parse("00").unwrap());
        assert_eq!(empty, OrderedPartialGraph::empty(3, false));
        let tri = threshold_from_word(&ThresholdWord::parse("11").unwrap());
        assert_eq!(tri.edges().len(), 3);
        let single = threshold_from_word(&ThresholdWord::parse("10").unwrap());
        assert_eq!(single.edges().iter().copied().collect::<Vec<_>>(), vec![(1, 2)]);

        assert_eq!(word_from_threshold(&tri).unwrap().to_string(), "11");
        assert_eq!(word_from_threshold(&empty).unwrap().to_string(), "00");
        // a lone {1,3} edge is a threshold graph but not construction-ordered
        let skew = OrderedPartialGraph::new(3, false, [(1, 3)], []).unwrap();
        assert!(matches!(word_from_threshold(&skew), Err(Error::NotConstructionOrdered)));
        // C4 is not threshold at all
        let c4 =
            OrderedPartialGraph::new(4, false, [(1, 2), (2, 3), (3, 4), (1, 4)], []).unwrap();
        assert!(matches!(word_from_threshold(&c4), Err(Error::NotThreshold)));
    }

    #[test]
    fn threshold_roundtrip_exhaustive() {
        for n in 2..=12u32 {
            for w in 0..1u64 << (n - 1) {
                let bits: Vec<u8> = (0..n - 1).map(|i| (w >> (n - 2 - i) & 1) as u8).collect();
                let word = ThresholdWord::new(bits).unwrap();
                let g = threshold_from_word(&word);
                assert_eq!(word_from_threshold(&g).unwrap(), word);
            }
        }
    }

    #[test]
    fn perm_graph_examples() {
        let p = |s: &str| Permutation::parse(s).unwrap();
        assert_eq!(perm_graph(&p("123")), OrderedPartialGraph::empty(3, false));
        let g312 = perm_graph(&p("312"));
        assert_eq!(g312.edges().iter().copied().collect::<Vec<_>>(), vec![(1, 2), (1, 3)]);
        assert_eq!(perm_graph(&p("321")).edges().len(), 3);
        assert_eq!(perm_from_graph(&g312).unwrap(), p("312"));
        assert_eq!(
            perm_from_graph(&OrderedPartialGraph::empty(4, false)).unwrap(),
            p("1234")
        );
    }

    #[test]
    fn inversion_graphs_on_three_vertices() {
        // exactly 6 of the 8 graphs on [3] decode
        let mut ok = 0;
        for mask in 0..8u64 {
            let g = OrderedPartialGraph::from_bitmask(3, mask);
            if let Ok(p) = perm_from_graph(&g) {
                assert_eq!(perm_graph(&p), g);
                ok += 1;
            }
        }
        assert_eq!(ok, 6);
        // the path {12, 23} is not an inversion graph
        let path = OrderedPartialGraph::new(3, false, [(1, 2), (2, 3)], []).unwrap();
        assert!(perm_from_graph(&path).is_err());
    }

    #[test]
    fn perm_roundtrip_exhaustive() {
        for n in 1..=6u32 {
            for p in Permutation::all(n) {
                assert_eq!(perm_from_graph(&perm_graph(&p)).unwrap(), p);
            }
        }
    }

    #[test]
    fn order_iso_examples() {
        let p = |s: &str| Permutation::parse(s).unwrap();
        assert!(order_iso_words(&p("124"), &p("135")).unwrap());
        assert!(!order_iso_words(&p("132"), &p("231")).unwrap());
        assert!(order_iso_words(&p("12"), &p("123")).is_err());
        assert_eq!(reduce_word(&[2, 4, 3]).values(), &[1, 3, 2]);
    }

    #[test]
    fn canonical_form_examples() {
        let tri = canonical_mask(3, 0b111).unwrap();
        let relabeled = canonical_mask(3, 0b111).unwrap();
        assert_eq!(tri, relabeled);
        // paths 1-2-3 and 2-1-3 share a class
        let a = canonical_mask(3, 0b101).unwrap(); // {12, 23}
        let b = canonical_mask(3, 0b011).unwrap(); // {12, 13}
        assert_eq!(a, b);
        assert_ne!(tri, a);
    }

    #[test]
    fn copy_counts() {
        let k3 = IsoClassCode { n: 3, canon: canonical_mask(3, 0b111).unwrap() };
        assert_eq!(labeled_copy_count(&k3).unwrap(), 1);
        let p3 = IsoClassCode { n: 3, canon: canonical_mask(3, 0b101).unwrap() };
        assert_eq!(labeled_copy_count(&p3).unwrap(), 3);
        // copy counts partition the labeled graphs
        for n in 2..=6u32 {
            let d = FamilyDescriptor::new(FamilyKind::Unlabeled, n).unwrap();
            let total: u64 = enumerate_family(&d)
                .unwrap()
                .iter()
                .map(|&c| labeled_copy_count(&IsoClassCode { n, canon: c }).unwrap())
                .sum();
            assert_eq!(total, 1 << (n * (n - 1) / 2));
        }
    }

    #[test]
    fn member_code_strings() {
        let thr = FamilyDescriptor::new(FamilyKind::Threshold, 3).unwrap();
        let g = threshold_from_word(&ThresholdWord::parse("10").unwrap());
        assert_eq!(member_code_string(&thr, g.bitmask().unwrap()), "10");
        let per = FamilyDescriptor::new(FamilyKind::Permutation, 3).unwrap();
        let g = perm_graph(&Permutation::parse("312").unwrap());
        assert_eq!(member_code_string(&per, g.bitmask().unwrap()), "3,1,2");
        let iso = IsoClassCode::parse("n4:0x1b").unwrap();
        assert_eq!(iso.to_string(), "n4:0x1b");
    }
}
