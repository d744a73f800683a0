//! Partial words over finite alphabets, De Bruijn cycles, universal partial
//! words, and the word-side verifiers (coverage for binary words, qualifying
//! windows for permutation cycles).

use crate::error::{Error, Result};
use crate::families::{reduce_word, Permutation};
use crate::guard::guard;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A letter `0..alphabet_size`, or a wildcard carrying its allowed values
/// (empty set = any letter).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Token {
    Letter(u8),
    Diamond(BTreeSet<u8>),
}

impl Token {
    pub fn matches(&self, letter: u8) -> bool {
        match self {
            Token::Letter(l) => *l == letter,
            Token::Diamond(allowed) => allowed.is_empty() || allowed.contains(&letter),
        }
    }

    pub fn is_diamond(&self) -> bool {
        matches!(self, Token::Diamond(_))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct PartialWord {
    tokens: Vec<Token>,
    cyclic: bool,
    alphabet_size: u8,
}

impl PartialWord {
    pub fn new(tokens: Vec<Token>, cyclic: bool, alphabet_size: u8) -> Result<Self> {
        if tokens.is_empty() {
            return Err(Error::Parse("empty word".into()));
        }
        for t in &tokens {
            match t {
                Token::Letter(l) if *l >= alphabet_size => {
                    return Err(Error::Alphabet(*l, alphabet_size))
                }
                Token::Diamond(allowed) => {
                    if let Some(&l) = allowed.iter().find(|&&l| l >= alphabet_size) {
                        return Err(Error::Alphabet(l, alphabet_size));
                    }
                }
                _ => {}
            }
        }
        Ok(PartialWord { tokens, cyclic, alphabet_size })
    }

    pub fn from_letters(letters: &[u8], cyclic: bool, alphabet_size: u8) -> Result<Self> {
        Self::new(letters.iter().map(|&l| Token::Letter(l)).collect(), cyclic, alphabet_size)
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn cyclic(&self) -> bool {
        self.cyclic
    }

    pub fn alphabet_size(&self) -> u8 {
        self.alphabet_size
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn diamond_count(&self) -> usize {
        self.tokens.iter().filter(|t| t.is_diamond()).count()
    }

    /// Plain letters, if the word has no wildcards.
    pub fn letters(&self) -> Option<Vec<u8>> {
        self.tokens
            .iter()
            .map(|t| match t {
                Token::Letter(l) => Some(*l),
                Token::Diamond(_) => None,
            })
            .collect()
    }

    /// Does the window at 1-based position `at` match the diamond-free word
    /// `u` letterwise, wildcards matching anything in their allowed set?
    pub fn covers(&self, u: &[u8], at: usize) -> Result<bool> {
        if at < 1 || (!self.cyclic && at + u.len() - 1 > self.len()) {
            return Err(Error::WordPosition(at, self.len()));
        }
        for &l in u {
            if l >= self.alphabet_size {
                return Err(Error::Alphabet(l, self.alphabet_size));
            }
        }
        Ok(u.iter().enumerate().all(|(t, &l)| {
            let tok = &self.tokens[(at - 1 + t) % self.len()];
            tok.matches(l)
        }))
    }

    /// Lexicographically least rotation (cyclic words only), Booth's algorithm.
    pub fn least_rotation(&self) -> Self {
        debug_assert!(self.cyclic);
        let letters = match self.letters() {
            Some(l) => l,
            None => return self.clone(), // rotation normalization is for plain cycles
        };
        let r = booth(&letters);
        let rotated: Vec<u8> =
            (0..letters.len()).map(|i| letters[(r + i) % letters.len()]).collect();
        PartialWord::from_letters(&rotated, true, self.alphabet_size).expect("valid rotation")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("missing header".into()))?;
        let cyclic = match header.trim() {
            "cyclic" => true,
            "linear" => false,
            other => return Err(Error::Parse(format!("bad header '{other}'"))),
        };
        let body = lines.next().ok_or_else(|| Error::Parse("missing word line".into()))?.trim();
        let mut tokens = Vec::new();
        let mut max_letter = 0u8;
        if body.contains(',') && !body.contains('{') {
            for part in body.split(',') {
                tokens.push(parse_token(part.trim(), &mut max_letter)?);
            }
        } else {
            let mut chars = body.chars().peekable();
            while let Some(c) = chars.next() {
                if c == '*' {
                    if chars.peek() == Some(&'{') {
                        chars.next();
                        let mut inner = String::new();
                        for c in chars.by_ref() {
                            if c == '}' {
                                break;
                            }
                            inner.push(c);
                        }
                        let mut allowed = BTreeSet::new();
                        for part in inner.split(',') {
                            let l = parse_letter(part.trim(), &mut max_letter)?;
                            allowed.insert(l);
                        }
                        tokens.push(Token::Diamond(allowed));
                    } else {
                        tokens.push(Token::Diamond(BTreeSet::new()));
                    }
                } else {
                    tokens.push(Token::Letter(parse_letter(&c.to_string(), &mut max_letter)?));
                }
            }
        }
        PartialWord::new(tokens, cyclic, (max_letter + 1).max(2))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from(if self.cyclic { "cyclic\n" } else { "linear\n" });
        let wide = self.alphabet_size > 10;
        let rendered: Vec<String> = self
            .tokens
            .iter()
            .map(|t| match t {
                Token::Letter(l) => l.to_string(),
                Token::Diamond(allowed) if allowed.is_empty() => "*".to_string(),
                Token::Diamond(allowed) => {
                    let parts: Vec<String> = allowed.iter().map(|l| l.to_string()).collect();
                    format!("*{{{}}}", parts.join(","))
                }
            })
            .collect();
        out.push_str(&rendered.join(if wide { "," } else { "" }));
        out.push('\n');
        out
    }
}

impl fmt::Debug for PartialWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text().replace('\n', " ").trim_end())
    }
}

fn parse_letter(s: &str, max: &mut u8) -> Result<u8> {
    let v: u8 = s.parse().map_err(|_| Error::Parse(format!("bad letter '{s}'")))?;
    *max = (*max).max(v);
    Ok(v)
}

fn parse_token(s: &str, max: &mut u8) -> Result<Token> {
    if s == "*" {
        return Ok(Token::Diamond(BTreeSet::new()));
    }
    if let Some(inner) = s.strip_prefix("*{").and_then(|r| r.strip_suffix('}')) {
        let mut allowed = BTreeSet::new();
        for part in inner.split(',') {
            allowed.insert(parse_letter(part.trim(), max)?);
        }
        return Ok(Token::Diamond(allowed));
    }
    Ok(Token::Letter(parse_letter(s, max)?))
}

/// Booth's least-rotation index.
fn booth(s: &[u8]) -> usize {
    let n = s.len();
    let mut f = vec![-1i64; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let sj = s[j % n];
        let mut i = f[j - k - 1];
        while i != -1 && sj != s[(k + i as usize + 1) % n] {
            if sj < s[(k + i as usize + 1) % n] {
                k = j - i as usize - 1;
            }
            i = f[i as usize];
        }
        if i == -1 && sj != s[k % n] {
            if sj < s[k % n] {
                k = j;
            }
            f[j - k] = -1;
        } else {
            f[j - k] = i + 1;
        }
    }
    k
}

/// Standard De Bruijn digraph walk: vertex = (n-1)-word value, edge = n-word
/// value; smallest unused edge first, from the all-zeros vertex.
fn de_bruijn_tour(a: usize, n: usize) -> Vec<usize> {
    let edge_count = a.pow(n as u32);
    let vert_count = a.pow(n as u32 - 1);
    let mut next_letter = vec![0usize; vert_count]; // per-vertex cursor over out-letters
    let mut stack_v = vec![0usize];
    let mut stack_e: Vec<usize> = Vec::new();
    let mut circuit = Vec::with_capacity(edge_count);
    while let Some(&v) = stack_v.last() {
        if next_letter[v] < a {
            let letter = next_letter[v];
            next_letter[v] += 1;
            let edge = v * a + letter;
            let head = edge % vert_count;
            stack_v.push(head);
            stack_e.push(edge);
        } else {
            stack_v.pop();
            if let Some(e) = stack_e.pop() {
                circuit.push(e);
            }
        }
    }
    circuit.reverse();
    circuit
}

/// De Bruijn cycle for `A^n`, `|A| = a`: cyclic word of length `a^n` whose
/// n-windows cover every word exactly once. Deterministic: smallest-edge
/// Euler walk, then rotated to the least representative.
pub fn de_bruijn_cycle(a: u8, n: u32) -> Result<PartialWord> {
    guard(a >= 2 && (a as u64).pow(n) <= 1_000_000, || {
        format!("de Bruijn cycle guard: {a}^{n} letters")
    })?;
    let tour = de_bruijn_tour(a as usize, n as usize);
    let letters: Vec<u8> = tour.iter().map(|e| (e % a as usize) as u8).collect();
    Ok(PartialWord::from_letters(&letters, true, a)?.least_rotation())
}

/// All De Bruijn cycles up to rotation, each as its least representative,
/// sorted. Exhaustive backtracking over Euler tours anchored at edge 0.
pub fn enumerate_de_bruijn(a: u8, n: u32) -> Result<Vec<PartialWord>> {
    let a_us = a as usize;
    let count_bound = {
        let fact: f64 = (1..=a_us).product::<usize>() as f64;
        fact.powi(a_us.pow(n - 1) as i32) / a_us.pow(n) as f64
    };
    guard(a >= 2 && count_bound <= 10_000.0, || {
        format!("de Bruijn enumeration guard: ~{count_bound:.0} cycles")
    })?;
    let edge_count = a_us.pow(n);
    let vert_count = a_us.pow(n - 1);
    let mut used = vec![false; edge_count];
    let mut seq = Vec::with_capacity(edge_count);
    let mut out = Vec::new();
    // anchor on edge 0 (all-zeros word): one representative per rotation class
    used[0] = true;
    seq.push(0usize);
    fn rec(
        a: usize,
        vert_count: usize,
        edge_count: usize,
        at: usize,
        used: &mut [bool],
        seq: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if seq.len() == edge_count {
            if seq[seq.len() - 1] % vert_count == seq[0] / a {
                out.push(seq.clone());
            }
            return;
        }
        for letter in 0..a {
            let e = at * a + letter;
            if !used[e] {
                used[e] = true;
                seq.push(e);
                rec(a, vert_count, edge_count, e % vert_count, used, seq, out);
                seq.pop();
                used[e] = false;
            }
        }
    }
    let mut tours = Vec::new();
    rec(a_us, vert_count, edge_count, 0, &mut used, &mut seq, &mut tours);
    for tour in tours {
        let letters: Vec<u8> = tour.iter().map(|e| (e % a_us) as u8).collect();
        out.push(PartialWord::from_letters(&letters, true, a)?.least_rotation());
    }
    out.sort_by(|x, y| x.tokens.cmp(&y.tokens));
    out.dedup();
    Ok(out)
}

/// The linear partial word `⋄^{n-1} 0 1^n` over {0,1}.
pub fn upword_diamond(n: u32) -> PartialWord {
    let mut tokens = vec![Token::Diamond(BTreeSet::new()); n as usize - 1];
    tokens.push(Token::Letter(0));
    tokens.extend(std::iter::repeat(Token::Letter(1)).take(n as usize));
    PartialWord::new(tokens, false, 2).expect("formula word is valid")
}

/// Per-word positions hit by a (partial) word's n-windows, with the verdict
/// "every word covered exactly once" and per-window wildcard statistics.
pub struct WordCoverage {
    pub n: u32,
    pub hits: BTreeMap<Vec<u8>, Vec<usize>>,
    pub exact: bool,
    /// wildcard-tokens-per-window histogram: count -> number of windows
    pub diamond_histogram: BTreeMap<usize, usize>,
}

pub fn verify_upword(w: &PartialWord, n: u32) -> Result<WordCoverage> {
    let a = w.alphabet_size();
    guard((a as u64).pow(n) <= 1 << 22, || format!("word coverage guard: {a}^{n} words"))?;
    let positions: Vec<usize> = if w.cyclic() {
        (1..=w.len()).collect()
    } else if w.len() >= n as usize {
        (1..=w.len() - n as usize + 1).collect()
    } else {
        Vec::new()
    };
    let mut hits: BTreeMap<Vec<u8>, Vec<usize>> = BTreeMap::new();
    for idx in 0..(a as u64).pow(n) {
        let mut word = vec![0u8; n as usize];
        let mut v = idx;
        for t in (0..n as usize).rev() {
            word[t] = (v % a as u64) as u8;
            v /= a as u64;
        }
        hits.insert(word, Vec::new());
    }
    let mut diamond_histogram: BTreeMap<usize, usize> = BTreeMap::new();
    for &p in &positions {
        let d = (0..n as usize).filter(|t| w.tokens()[(p - 1 + t) % w.len()].is_diamond()).count();
        *diamond_histogram.entry(d).or_default() += 1;
    }
    for (word, list) in hits.iter_mut() {
        for &p in &positions {
            if w.covers(word, p)? {
                list.push(p);
            }
        }
    }
    let exact = hits.values().all(|l| l.len() == 1);
    Ok(WordCoverage { n, hits, exact, diamond_histogram })
}

/// Coverage of S_n by the qualifying n-windows (starts 1 mod n-s) of a cyclic
/// numeric word, compared up to order isomorphism.
pub struct PermCoverage {
    pub n: u32,
    pub s: u32,
    pub hits: BTreeMap<Permutation, Vec<usize>>,
    pub exact: bool,
    /// reduced patterns of the qualifying windows, in cyclic order
    pub order: Vec<Option<Permutation>>,
}

pub fn verify_perm_ucycle(word: &[u32], n: u32, s: u32) -> Result<PermCoverage> {
    if s < 1 || s >= n {
        return Err(Error::OverlapRange { s, max: n - 1 });
    }
    let fact: usize = (1..=n as usize).product();
    let expected = fact * (n - s) as usize;
    if word.len() != expected {
        return Err(Error::WordLength(word.len(), expected));
    }
    let step = (n - s) as usize;
    let mut hits: BTreeMap<Permutation, Vec<usize>> = BTreeMap::new();
    for p in Permutation::all(n) {
        hits.insert(p, Vec::new());
    }
    let mut order = Vec::new();
    for i in 0..fact {
        let start = i * step; // 0-based
        let window: Vec<u32> = (0..n as usize).map(|t| word[(start + t) % word.len()]).collect();
        let distinct: BTreeSet<u32> = window.iter().copied().collect();
        if distinct.len() != window.len() {
            order.push(None);
            continue;
        }
        let red = reduce_word(&window);
        hits.get_mut(&red).expect("reduced pattern is in S_n").push(start + 1);
        order.push(Some(red));
    }
    let exact = hits.values().all(|l| l.len() == 1);
    Ok(PermCoverage { n, s, hits, exact, order })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(text: &str) -> PartialWord {
        PartialWord::parse(text).unwrap()
    }

    #[test]
    fn covers_examples() {
        let v = w("linear\n*1*");
        assert!(v.covers(&[0, 1, 1], 1).unwrap());
        assert!(v.covers(&[0, 1, 0], 1).unwrap());
        assert!(!v.covers(&[0, 0, 1], 1).unwrap());
        let v = w("linear\n1*1*0");
        assert!(v.covers(&[1, 1, 0], 2).unwrap());
        let v = w("linear\n000");
        assert!(!v.covers(&[0, 0, 1], 1).unwrap());
        assert!(v.covers(&[0, 0, 1], 2).is_err());
    }

    #[test]
    fn covers_restricted_monotone() {
        let unrestricted = w("linear\n*1*");
        let restricted = w("linear\n*{0}1*{1}");
        for a in 0..2u8 {
            for b in 0..2u8 {
                let word = [a, 1, b];
                let wide = unrestricted.covers(&word, 1).unwrap();
                let narrow = restricted.covers(&word, 1).unwrap();
                // shrinking allowed sets never adds covered words
                assert!(!narrow || wide);
            }
        }
        assert!(restricted.covers(&[0, 1, 1], 1).unwrap());
        assert!(!restricted.covers(&[1, 1, 1], 1).unwrap());
    }

    #[test]
    fn de_bruijn_small() {
        let db = de_bruijn_cycle(2, 3).unwrap();
        assert_eq!(db.to_text(), "cyclic\n00010111\n");
        let db1 = de_bruijn_cycle(2, 1).unwrap();
        assert_eq!(db1.to_text(), "cyclic\n01\n");
        let db32 = de_bruijn_cycle(3, 2).unwrap();
        assert_eq!(db32.len(), 9);
        let cov = verify_upword(&db32, 2).unwrap();
        assert!(cov.exact);
    }

    #[test]
    fn de_bruijn_outputs_verify() {
        for (a, n) in [(2u8, 2u32), (2, 3), (2, 4), (3, 2), (3, 3)] {
            let db = de_bruijn_cycle(a, n).unwrap();
            assert!(verify_upword(&db, n).unwrap().exact, "a={a} n={n}");
        }
    }

    #[test]
    fn de_bruijn_enumeration_counts() {
        assert_eq!(enumerate_de_bruijn(2, 2).unwrap().len(), 1);
        assert_eq!(enumerate_de_bruijn(2, 3).unwrap().len(), 2);
        assert_eq!(enumerate_de_bruijn(2, 4).unwrap().len(), 16);
        assert_eq!(enumerate_de_bruijn(3, 2).unwrap().len(), 24);
    }

    #[test]
    fn upword_formula() {
        assert_eq!(upword_diamond(4).to_text(), "linear\n***01111\n");
        assert_eq!(upword_diamond(2).to_text(), "linear\n*011\n");
        let cov = verify_upword(&upword_diamond(3), 3).unwrap();
        assert!(cov.exact);
        assert_eq!(cov.hits.len(), 8);
    }

    #[test]
    fn verify_upword_examples() {
        let db = w("cyclic\n00010111");
        assert!(verify_upword(&db, 3).unwrap().exact);
        let small = w("cyclic\n0011");
        assert!(verify_upword(&small, 2).unwrap().exact);
        let bad = w("cyclic\n0101");
        assert!(!verify_upword(&bad, 2).unwrap().exact);
    }

    #[test]
    fn cover_pair_accounting() {
        // for an upword over {0,1}^n, positions x realized words sum to 2^n
        for n in 2..=6u32 {
            let up = upword_diamond(n);
            let cov = verify_upword(&up, n).unwrap();
            assert!(cov.exact);
            let total: usize = cov.hits.values().map(|v| v.len()).sum();
            assert_eq!(total, 1 << n);
            let windows: usize = cov.diamond_histogram.values().sum();
            assert_eq!(windows, up.len() - n as usize + 1);
            let realized: usize =
                cov.diamond_histogram.iter().map(|(d, c)| c << d).sum();
            assert_eq!(realized, 1 << n);
        }
    }

    #[test]
    fn perm_ucycle_examples() {
        let word = [1u32, 2, 4, 3, 2, 4];
        let cov = verify_perm_ucycle(&word, 3, 2).unwrap();
        assert!(cov.exact);
        let pats: Vec<String> =
            cov.order.iter().map(|p| p.as_ref().unwrap().to_string()).collect();
        assert_eq!(pats, ["1,2,3", "1,3,2", "3,2,1", "2,1,3", "2,3,1", "3,1,2"]);

        let cov = verify_perm_ucycle(&[2u32, 5, 6, 4, 1, 3], 3, 2).unwrap();
        assert!(cov.exact);
        assert!(verify_perm_ucycle(&[1u32, 2, 3], 3, 2).is_err());
    }

    #[test]
    fn word_file_roundtrip() {
        for text in ["cyclic\n00010111\n", "linear\n01100*011110100\n", "linear\n*{1,5}243241\n"] {
            let parsed = PartialWord::parse(text).unwrap();
            assert_eq!(parsed.to_text(), text);
        }
        let restricted = PartialWord::parse("linear\n*{1,5}243241").unwrap();
        assert_eq!(restricted.diamond_count(), 1);
        assert!(matches!(&restricted.tokens()[0], Token::Diamond(s) if s.len() == 2));
        assert!(PartialWord::parse("sideways\n01").is_err());
    }

    #[test]
    fn least_rotation_examples() {
        let v = PartialWord::from_letters(&[1, 0, 0, 1], true, 2).unwrap();
        assert_eq!(v.least_rotation().letters().unwrap(), vec![0, 0, 1, 1]);
        let v = PartialWord::from_letters(&[2, 1, 0], true, 3).unwrap();
        assert_eq!(v.least_rotation().letters().unwrap(), vec![0, 2, 1]);
    }
}
