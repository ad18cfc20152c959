//! Words in the free group F2 = <f, h>, the generators g_i = h^-i f h^i,
//! their ping-pong sets and Stallings-folding rank certificates.

use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Gen {
    F,
    H,
}

/// A single letter: a generator with exponent `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Letter {
    pub gen: Gen,
    pub inverse: bool,
}

impl Letter {
    pub const F: Letter = Letter { gen: Gen::F, inverse: false };
    pub const F_INV: Letter = Letter { gen: Gen::F, inverse: true };
    pub const H: Letter = Letter { gen: Gen::H, inverse: false };
    pub const H_INV: Letter = Letter { gen: Gen::H, inverse: true };
    pub const ALL: [Letter; 4] = [Letter::F, Letter::F_INV, Letter::H, Letter::H_INV];

    pub fn inv(self) -> Letter {
        Letter { gen: self.gen, inverse: !self.inverse }
    }

    fn exp(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A freely reduced word, stored as runs of generator powers. Adjacent runs
/// have different generators and no run has exponent zero.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ReducedWord {
    runs: Vec<(Gen, i64)>,
}

impl ReducedWord {
    pub fn identity() -> Self {
        ReducedWord { runs: Vec::new() }
    }

    pub fn gen_power(gen: Gen, exp: i64) -> Self {
        let mut w = ReducedWord::identity();
        w.push_run(gen, exp);
        w
    }

    pub fn runs(&self) -> &[(Gen, i64)] {
        &self.runs
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.runs.iter().map(|&(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::with_capacity(self.len());
        for &(gen, e) in &self.runs {
            let l = Letter { gen, inverse: e < 0 };
            out.extend(std::iter::repeat_n(l, e.unsigned_abs() as usize));
        }
        out
    }

    fn push_run(&mut self, gen: Gen, exp: i64) {
        if exp == 0 {
            return;
        }
        match self.runs.last_mut() {
            Some((g, e)) if *g == gen => {
                *e += exp;
                if *e == 0 {
                    self.runs.pop();
                }
            }
            _ => self.runs.push((gen, exp)),
        }
    }

    /// `self * other`, reduced.
    pub fn mul(&self, other: &ReducedWord) -> ReducedWord {
        let mut out = self.clone();
        out.mul_assign(other);
        out
    }

    pub fn mul_assign(&mut self, other: &ReducedWord) {
        for &(g, e) in &other.runs {
            self.push_run(g, e);
        }
    }

    pub fn inverse(&self) -> ReducedWord {
        ReducedWord { runs: self.runs.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    pub fn pow(&self, k: i64) -> ReducedWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = ReducedWord::identity();
        for _ in 0..k.unsigned_abs() {
            out.mul_assign(&base);
        }
        out
    }

    /// Parses words such as `h^-2 f h^2`, `f F`, or `1`. Upper-case letters
    /// denote inverses.
    pub fn parse(text: &str) -> Result<ReducedWord> {
        let bad = |m: String| Error::Precondition(format!("bad word '{text}': {m}"));
        let mut w = ReducedWord::identity();
        for tok in text.split(|c: char| c.is_whitespace() || c == '*' || c == ',').filter(|t| !t.is_empty()) {
            if tok == "1" || tok == "e" {
                continue;
            }
            let (base, exp) = match tok.split_once('^') {
                Some((b, e)) => (b, e.parse::<i64>().map_err(|_| bad(format!("exponent in '{tok}'")))?),
                None => (tok, 1),
            };
            let mut chars = base.chars();
            let (c, rest) = (chars.next(), chars.as_str());
            if !rest.is_empty() {
                // a run of plain letters like "fhF"
                if exp != 1 {
                    return Err(bad(format!("exponent on a multi-letter token '{tok}'")));
                }
                for ch in base.chars() {
                    let (g, e) = letter_of(ch).ok_or_else(|| bad(format!("letter '{ch}'")))?;
                    w.push_run(g, e);
                }
                continue;
            }
            let ch = c.ok_or_else(|| bad("empty token".into()))?;
            let (g, e) = letter_of(ch).ok_or_else(|| bad(format!("letter '{ch}'")))?;
            w.push_run(g, e * exp);
        }
        Ok(w)
    }
}

fn letter_of(c: char) -> Option<(Gen, i64)> {
    match c {
        'f' => Some((Gen::F, 1)),
        'F' => Some((Gen::F, -1)),
        'h' => Some((Gen::H, 1)),
        'H' => Some((Gen::H, -1)),
        _ => None,
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.runs.is_empty() {
            return write!(f, "1");
        }
        for (i, &(g, e)) in self.runs.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let c = match g {
                Gen::F => 'f',
                Gen::H => 'h',
            };
            if e == 1 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Freely reduces a letter sequence.
pub fn reduce(letters: &[Letter]) -> ReducedWord {
    let mut w = ReducedWord::identity();
    for l in letters {
        w.push_run(l.gen, l.exp());
    }
    w
}

/// g_i = h^-i f h^i.
pub fn pingpong_generator(i: i64) -> Result<ReducedWord> {
    if i < 0 {
        return Err(Error::Precondition(format!("generator index must be >= 0, got {i}")));
    }
    let mut w = ReducedWord::gen_power(Gen::H, -i);
    w.push_run(Gen::F, 1);
    w.push_run(Gen::H, i);
    Ok(w)
}

/// X_n: reduced words whose leading h^-1 run has length exactly `n` and is
/// followed by a power of f. X_0 holds the words starting with f or f^-1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PingPongSet {
    pub index: usize,
}

impl PingPongSet {
    pub fn contains(&self, w: &ReducedWord) -> bool {
        in_pingpong_set(w, self.index)
    }
}

pub fn in_pingpong_set(w: &ReducedWord, n: usize) -> bool {
    let r = w.runs();
    if n == 0 {
        return matches!(r.first(), Some((Gen::F, _)));
    }
    matches!((r.first(), r.get(1)), (Some(&(Gen::H, e)), Some((Gen::F, _))) if e == -(n as i64))
}

/// All reduced words with `1..=max_len` letters, shortest first, then in
/// letter order f, f^-1, h, h^-1.
pub fn reduced_words(max_len: usize) -> Vec<ReducedWord> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * 3);
        for w in &layer {
            for l in Letter::ALL {
                if w.last().is_some_and(|&p| p == l.inv()) {
                    continue;
                }
                let mut x = w.clone();
                x.push(l);
                next.push(x);
            }
        }
        out.extend(next.iter().map(|w| reduce(w)));
        layer = next;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PingPongWitness {
    pub i: usize,
    pub j: usize,
    pub k: i64,
    pub word: String,
    pub image: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PingPongReport {
    pub d: usize,
    pub k_max: i64,
    pub max_len: usize,
    pub checked: u64,
    pub counterexample: Option<PingPongWitness>,
}

impl PingPongReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Checks g_i^k (X_j) ⊆ X_i for all i ≠ j below `d`, 0 < |k| ≤ `k_max`, and
/// every word of X_j with at most `max_len` letters.
pub fn check_pingpong_inclusion(d: usize, k_max: i64, max_len: usize) -> Result<PingPongReport> {
    if d < 2 || k_max < 1 || max_len < 1 {
        return Err(Error::Precondition(format!(
            "need d >= 2, k_max >= 1, L >= 1 (got d={d}, k_max={k_max}, L={max_len})"
        )));
    }
    let words = reduced_words(max_len);
    let members: Vec<Vec<&ReducedWord>> =
        (0..d).map(|j| words.iter().filter(|w| in_pingpong_set(w, j)).collect()).collect();
    let mut cells = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if i == j {
                continue;
            }
            for k in (-k_max..=k_max).filter(|&k| k != 0) {
                cells.push((i, j, k));
            }
        }
    }
    let results: Vec<(u64, Option<PingPongWitness>)> = cells
        .par_iter()
        .map(|&(i, j, k)| {
            let gk = pingpong_generator(i as i64).expect("non-negative").pow(k);
            let mut checked = 0;
            for w in &members[j] {
                checked += 1;
                let image = gk.mul(w);
                if !in_pingpong_set(&image, i) {
                    let wit = PingPongWitness { i, j, k, word: w.to_string(), image: image.to_string() };
                    return (checked, Some(wit));
                }
            }
            (checked, None)
        })
        .collect();
    let checked = results.iter().map(|r| r.0).sum();
    let counterexample = results.into_iter().find_map(|r| r.1);
    Ok(PingPongReport { d, k_max, max_len, checked, counterexample })
}

/// A labelled graph over the letters f and h; inverse letters are read
/// backwards along edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoldingGraph {
    pub states: usize,
    pub base: usize,
    /// Edges `(from, label, to)`.
    pub edges: Vec<(usize, Gen, usize)>,
    pub folded: bool,
}

impl FoldingGraph {
    /// Wedge of one loop per generator at the base state.
    pub fn wedge(generators: &[ReducedWord]) -> Self {
        let mut states = 1;
        let mut edges = Vec::new();
        for w in generators {
            let letters = w.letters();
            let mut at = 0;
            for (idx, l) in letters.iter().enumerate() {
                let to = if idx + 1 == letters.len() {
                    0
                } else {
                    states += 1;
                    states - 1
                };
                if l.inverse {
                    edges.push((to, l.gen, at));
                } else {
                    edges.push((at, l.gen, to));
                }
                at = to;
            }
        }
        FoldingGraph { states, base: 0, edges, folded: false }
    }

    /// Folds until every state has at most one outgoing and one incoming
    /// edge per label, then renumbers states densely (base stays 0).
    pub fn fold(&mut self) {
        let mut parent: Vec<usize> = (0..self.states).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        loop {
            let mut changed = false;
            let mut out: std::collections::HashMap<(usize, Gen), usize> = Default::default();
            let mut inc: std::collections::HashMap<(usize, Gen), usize> = Default::default();
            for &(u, g, v) in &self.edges {
                let (u, v) = (find(&mut parent, u), find(&mut parent, v));
                for (map, key, val) in [(&mut out, (u, g), v), (&mut inc, (v, g), u)] {
                    match map.get(&key) {
                        Some(&w) => {
                            let (a, b) = (find(&mut parent, w), find(&mut parent, val));
                            if a != b {
                                let (lo, hi) = (a.min(b), a.max(b));
                                parent[hi] = lo;
                                changed = true;
                            }
                        }
                        None => {
                            map.insert(key, val);
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut id = vec![usize::MAX; self.states];
        let mut next = 0;
        for s in 0..self.states {
            let r = find(&mut parent, s);
            if id[r] == usize::MAX {
                id[r] = next;
                next += 1;
            }
            id[s] = id[r];
        }
        let mut edges: Vec<(usize, Gen, usize)> = self.edges.iter().map(|&(u, g, v)| (id[u], g, id[v])).collect();
        edges.sort_unstable();
        edges.dedup();
        self.base = id[self.base];
        self.states = next;
        self.edges = edges;
        self.folded = true;
    }

    /// Repeatedly removes non-base states of degree one.
    pub fn core(&mut self) {
        loop {
            let mut degree = vec![0usize; self.states];
            for &(u, _, v) in &self.edges {
                degree[u] += 1;
                degree[v] += 1;
            }
            let leaf = |s: usize| s != self.base && degree[s] <= 1;
            let before = self.edges.len();
            self.edges.retain(|&(u, _, v)| !leaf(u) && !leaf(v));
            if self.edges.len() == before {
                break;
            }
        }
        let mut used = vec![false; self.states];
        used[self.base] = true;
        for &(u, _, v) in &self.edges {
            used[u] = true;
            used[v] = true;
        }
        let mut id = vec![usize::MAX; self.states];
        let mut next = 0;
        for s in 0..self.states {
            if used[s] {
                id[s] = next;
                next += 1;
            }
        }
        for e in &mut self.edges {
            e.0 = id[e.0];
            e.2 = id[e.2];
        }
        self.base = id[self.base];
        self.states = next;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankCertificate {
    pub rank: usize,
    pub is_basis: bool,
    pub generators: usize,
    pub core_states: usize,
    pub core_edges: usize,
}

/// Rank of the subgroup generated by `generators`, read off the folded
/// core graph.
pub fn stallings_rank(generators: &[ReducedWord]) -> Result<RankCertificate> {
    if generators.is_empty() || generators.iter().any(|w| w.is_empty()) {
        return Err(Error::Precondition("generators must be a nonempty list of nonempty words".into()));
    }
    let mut g = FoldingGraph::wedge(generators);
    g.fold();
    g.core();
    let rank = g.edges.len() + 1 - g.states;
    Ok(RankCertificate {
        rank,
        is_basis: rank == generators.len(),
        generators: generators.len(),
        core_states: g.states,
        core_edges: g.edges.len(),
    })
}

/// A word in abstract symbols G_0..G_{d-1}: `(index, exponent sign)`.
pub type AbstractWord = Vec<(usize, i8)>;

pub fn format_abstract(w: &[(usize, i8)]) -> String {
    w.iter().map(|&(i, e)| if e > 0 { format!("G{i}") } else { format!("G{i}^-1") }).collect::<Vec<_>>().join(" ")
}

/// Nonempty reduced words of length at most `max_len` in G_0..G_{d-1} whose
/// image under G_i -> g_i is trivial in F2.
pub fn relation_search_abstract(d: usize, max_len: usize) -> Result<Vec<AbstractWord>> {
    if d < 2 || max_len < 1 {
        return Err(Error::Precondition(format!("need d >= 2 and L >= 1 (got d={d}, L={max_len})")));
    }
    let symbols: Vec<(usize, i8)> = (0..d).flat_map(|i| [(i, 1i8), (i, -1i8)]).collect();
    let images: Vec<ReducedWord> =
        symbols.iter().map(|&(i, e)| pingpong_generator(i as i64).expect("non-negative").pow(e as i64)).collect();
    let mut found: Vec<AbstractWord> = symbols
        .par_iter()
        .enumerate()
        .flat_map_iter(|(s0, _)| {
            let mut hits = Vec::new();
            let mut stack = vec![images[s0].clone()];
            let mut word = vec![s0];
            search(&symbols, &images, max_len, &mut stack, &mut word, &mut hits);
            hits
        })
        .collect();
    found.sort();
    Ok(found)
}

fn search(
    symbols: &[(usize, i8)],
    images: &[ReducedWord],
    max_len: usize,
    stack: &mut Vec<ReducedWord>,
    word: &mut Vec<usize>,
    hits: &mut Vec<AbstractWord>,
) {
    if stack.last().expect("nonempty stack").is_empty() {
        hits.push(word.iter().map(|&s| symbols[s]).collect());
    }
    if word.len() == max_len {
        return;
    }
    let last = *word.last().expect("nonempty word");
    for s in 0..symbols.len() {
        // s ^ 1 is the inverse symbol
        if s == last ^ 1 {
            continue;
        }
        let mut next = stack.pop().expect("nonempty stack");
        let keep = next.clone();
        next.mul_assign(&images[s]);
        stack.push(keep);
        stack.push(next);
        word.push(s);
        search(symbols, images, max_len, stack, word, hits);
        word.pop();
        stack.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> ReducedWord {
        ReducedWord::parse(s).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert!(reduce(&[Letter::F, Letter::F_INV]).is_empty());
        assert_eq!(w("h^-1 f h").mul(&w("h^-1 f h")), w("h^-1 f^2 h"));
        assert_eq!(pingpong_generator(2).unwrap(), w("h^-2 f h^2"));
        assert_eq!(pingpong_generator(0).unwrap(), w("f"));
        assert_eq!(pingpong_generator(3).unwrap().to_string(), "h^-3 f h^3");
        assert!(pingpong_generator(-1).is_err());
    }

    #[test]
    fn pingpong_membership() {
        assert!(in_pingpong_set(&w("h^-2 f h"), 2));
        assert!(in_pingpong_set(&w("f h^-1"), 0));
        assert!(!in_pingpong_set(&w("f h^-1"), 1));
        assert!(!in_pingpong_set(&w("h^-2 h^-1 f"), 2));
        assert!(in_pingpong_set(&w("h^-3 f"), 3));
        assert!(!in_pingpong_set(&w("h^-1"), 1));
    }

    #[test]
    fn pingpong_sets_are_disjoint() {
        for x in reduced_words(8) {
            let hits = (0..10).filter(|&n| in_pingpong_set(&x, n)).count();
            assert!(hits <= 1, "{x} lies in {hits} sets");
        }
    }

    #[test]
    fn inclusion_example() {
        let image = pingpong_generator(0).unwrap().mul(&w("h^-1 f"));
        assert_eq!(image, w("f h^-1 f"));
        assert!(in_pingpong_set(&image, 0));
        assert!(check_pingpong_inclusion(3, 2, 8).unwrap().passed());
        assert!(check_pingpong_inclusion(1, 1, 1).is_err());
    }

    #[test]
    fn stallings_examples() {
        let c = stallings_rank(&[w("f"), w("h")]).unwrap();
        assert_eq!((c.rank, c.is_basis), (2, true));
        let c = stallings_rank(&[w("f"), w("f^2")]).unwrap();
        assert_eq!((c.rank, c.is_basis), (1, false));
        for d in 2..=10 {
            let gens: Vec<_> = (0..d).map(|i| pingpong_generator(i).unwrap()).collect();
            let c = stallings_rank(&gens).unwrap();
            assert_eq!((c.rank, c.is_basis), (d as usize, true));
            let inv: Vec<_> = gens.iter().map(|g| g.inverse()).collect();
            assert_eq!(stallings_rank(&inv).unwrap().rank, c.rank);
        }
        assert!(stallings_rank(&[]).is_err());
        assert!(stallings_rank(&[ReducedWord::identity()]).is_err());
    }

    #[test]
    fn dependent_generators_are_detected() {
        let c = stallings_rank(&[w("f"), w("h"), w("h f h^-1")]).unwrap();
        assert_eq!((c.rank, c.is_basis), (2, false));
        let c = stallings_rank(&[w("f h"), w("h f")]).unwrap();
        assert_eq!((c.rank, c.is_basis), (2, true));
    }

    #[test]
    fn relation_search_finds_nothing_for_the_generators() {
        assert!(relation_search_abstract(2, 6).unwrap().is_empty());
        assert!(relation_search_abstract(4, 4).unwrap().is_empty());
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["1", "f", "h^-3 f h^3", "f^2 h^-1 f^-1"] {
            assert_eq!(w(s).to_string(), s);
        }
        assert_eq!(w("fFhH"), ReducedWord::identity());
        assert!(ReducedWord::parse("x").is_err());
    }

    fn letters() -> impl Strategy<Value = Vec<Letter>> {
        prop::collection::vec(prop::sample::select(Letter::ALL.to_vec()), 0..24)
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent_and_shortening(ls in letters()) {
            let r = reduce(&ls);
            prop_assert!(r.len() <= ls.len());
            prop_assert_eq!(reduce(&r.letters()), r.clone());
            let l = r.letters();
            prop_assert!(l.windows(2).all(|p| p[0] != p[1].inv()));
        }

        #[test]
        fn multiplication_is_associative(a in letters(), b in letters(), c in letters()) {
            let (a, b, c) = (reduce(&a), reduce(&b), reduce(&c));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert!(a.mul(&a.inverse()).is_empty());
        }

        #[test]
        fn single_generator_has_rank_one(ls in letters()) {
            let r = reduce(&ls);
            prop_assume!(!r.is_empty());
            prop_assert_eq!(stallings_rank(&[r]).unwrap().rank, 1);
        }
    }
}
