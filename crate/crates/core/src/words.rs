//! Normal forms and arithmetic in a graph product of finite groups.
//!
//! Words are stored in the Cartier–Foata form of a graphically reduced word:
//! syllables are grouped by level (one plus the highest level of an earlier
//! syllable that does not commute with it) and sorted by vertex inside each
//! level. Two raw sequences give the same group element iff their normal
//! forms are identical.
//!
//! The generating set is every non-identity element of every vertex group, so
//! the word length of an element equals the number of syllables of its normal
//! form.

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{FiniteGroup, LabeledGraph, VertexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub vertex: u16,
    pub elem: u16,
}

impl Syllable {
    pub fn new(vertex: usize, elem: usize) -> Self {
        Syllable {
            vertex: vertex as u16,
            elem: elem as u16,
        }
    }
}

/// A word in normal form. Only [`GraphProduct`] builds these.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Syllable>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.0
    }

    pub fn syllable_length(&self) -> usize {
        self.0.len()
    }

    /// Sum of the syllable lengths; each non-identity element has length 1.
    pub fn word_length(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "v{}:{}", s.vertex, s.elem)?;
        }
        Ok(())
    }
}

/// A graph product whose vertex groups all have concrete tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphProduct {
    graph: LabeledGraph,
    groups: Vec<FiniteGroup>,
    /// `dependent[v]`: vertices whose syllables do not commute with `v`.
    dependent: Vec<VertexSet>,
}

impl GraphProduct {
    pub fn new(graph: LabeledGraph) -> Result<Self> {
        let groups = (0..graph.vertex_count())
            .map(|v| {
                graph
                    .label(v)
                    .concrete()
                    .cloned()
                    .ok_or(Error::AbstractLabel(v))
            })
            .collect::<Result<Vec<_>>>()?;
        let all = graph.vertices();
        let dependent = (0..graph.vertex_count())
            .map(|v| all.difference(graph.neighbors(v)))
            .collect();
        Ok(GraphProduct {
            graph,
            groups,
            dependent,
        })
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn group(&self, v: usize) -> &FiniteGroup {
        &self.groups[v]
    }

    pub fn vertex_count(&self) -> usize {
        self.groups.len()
    }

    /// All non-identity vertex elements, ordered by vertex then element.
    pub fn generators(&self) -> Vec<Syllable> {
        (0..self.groups.len())
            .flat_map(|v| (1..self.groups[v].order()).map(move |e| Syllable::new(v, e)))
            .collect()
    }

    fn valid(&self, s: Syllable) -> bool {
        let v = s.vertex as usize;
        v < self.groups.len() && s.elem >= 1 && (s.elem as usize) < self.groups[v].order()
    }

    pub fn syllable(&self, vertex: usize, elem: usize) -> Result<Syllable> {
        let s = Syllable::new(vertex, elem);
        if vertex < self.groups.len() && self.valid(s) {
            Ok(s)
        } else {
            Err(Error::InvalidSyllable { vertex, elem })
        }
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        if w.0.iter().all(|&s| self.valid(s)) {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    /// Normal form of a raw syllable sequence.
    pub fn reduce(&self, raw: &[Syllable]) -> Result<Word> {
        if let Some(s) = raw.iter().find(|&&s| !self.valid(s)) {
            return Err(Error::InvalidSyllable {
                vertex: s.vertex as usize,
                elem: s.elem as usize,
            });
        }
        let mut stack = Vec::with_capacity(raw.len());
        for &s in raw {
            self.push(&mut stack, s);
        }
        Ok(self.canonical(stack))
    }

    /// Appends `s` to a graphically reduced sequence, keeping it reduced.
    fn push(&self, stack: &mut Vec<Syllable>, s: Syllable) {
        let u = s.vertex as usize;
        let dep = self.dependent[u];
        for j in (0..stack.len()).rev() {
            let w = stack[j].vertex as usize;
            if w == u {
                let e = self.groups[u].mul(stack[j].elem as usize, s.elem as usize);
                if e == 0 {
                    stack.remove(j);
                } else {
                    stack[j].elem = e as u16;
                }
                return;
            }
            if dep.contains(w) {
                break;
            }
        }
        stack.push(s);
    }

    /// Cartier–Foata ordering of a reduced sequence.
    fn canonical(&self, mut seq: Vec<Syllable>) -> Word {
        let mut last = [0u32; 64];
        let mut keyed: Vec<(u32, Syllable)> = Vec::with_capacity(seq.len());
        for &s in &seq {
            let u = s.vertex as usize;
            let level = 1 + self.dependent[u].iter().map(|w| last[w]).max().unwrap_or(0);
            last[u] = level;
            keyed.push((level, s));
        }
        keyed.sort_by_key(|&(l, s)| (l, s.vertex));
        seq.clear();
        seq.extend(keyed.into_iter().map(|(_, s)| s));
        Word(seq)
    }

    pub fn multiply(&self, x: &Word, y: &Word) -> Result<Word> {
        self.check_word(x)?;
        self.check_word(y)?;
        let mut stack = x.0.clone();
        for &s in &y.0 {
            self.push(&mut stack, s);
        }
        Ok(self.canonical(stack))
    }

    /// `w * s` for a valid generator `s`; no ambient checks.
    pub fn mul_syllable(&self, w: &Word, s: Syllable) -> Word {
        let mut stack = w.0.clone();
        self.push(&mut stack, s);
        self.canonical(stack)
    }

    pub fn inverse(&self, x: &Word) -> Result<Word> {
        self.check_word(x)?;
        let raw: Vec<Syllable> =
            x.0.iter()
                .rev()
                .map(|s| Syllable {
                    vertex: s.vertex,
                    elem: self.groups[s.vertex as usize].inv(s.elem as usize) as u16,
                })
                .collect();
        Ok(self.canonical(raw))
    }

    pub fn equals(&self, x: &Word, y: &Word) -> Result<bool> {
        self.check_word(x)?;
        self.check_word(y)?;
        Ok(x == y)
    }

    /// Word metric distance `|x^-1 y|`.
    pub fn distance(&self, x: &Word, y: &Word) -> Result<usize> {
        Ok(self.multiply(&self.inverse(x)?, y)?.word_length())
    }

    /// Checks the normal-form invariants: valid non-identity syllables,
    /// graphically reduced, canonical ordering.
    pub fn is_normal_form(&self, w: &Word) -> bool {
        if self.check_word(w).is_err() {
            return false;
        }
        let mut stack = Vec::new();
        for &s in &w.0 {
            self.push(&mut stack, s);
        }
        stack.len() == w.0.len() && self.canonical(stack) == *w
    }

    /// Uniform vertex, then uniform non-identity element, `n` times, then
    /// reduced. Deterministic in the generator state.
    pub fn random_word_with<R: Rng>(&self, rng: &mut R, n: usize) -> Word {
        let raw = self.random_raw(rng, n);
        self.reduce(&raw).expect("generated syllables are valid")
    }

    pub fn random_raw<R: Rng>(&self, rng: &mut R, n: usize) -> Vec<Syllable> {
        (0..n)
            .map(|_| {
                let v = rng.gen_range(0..self.groups.len());
                let e = rng.gen_range(1..self.groups[v].order());
                Syllable::new(v, e)
            })
            .collect()
    }

    pub fn random_word(&self, seed: u64, n: usize) -> Word {
        self.random_word_with(&mut ChaCha8Rng::seed_from_u64(seed), n)
    }

    /// Parses `v3:2 v0:1` (or `e` for the identity) and reduces it.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "e" {
            return Ok(Word::empty());
        }
        let raw = text
            .split_whitespace()
            .map(|tok| {
                let bad = || Error::WordSyntax(tok.to_string());
                let (v, e) = tok
                    .strip_prefix('v')
                    .ok_or_else(bad)?
                    .split_once(':')
                    .ok_or_else(bad)?;
                let v: usize = v.parse().map_err(|_| bad())?;
                let e: usize = e.parse().map_err(|_| bad())?;
                self.syllable(v, e)
            })
            .collect::<Result<Vec<_>>>()?;
        self.reduce(&raw)
    }
}

/// Per-vertex injections `G_u -> H_u` between two graph products over the
/// same graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    maps: Vec<Vec<u16>>,
}

impl Embedding {
    pub fn new(
        source: &GraphProduct,
        target: &GraphProduct,
        maps: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = source.vertex_count();
        if target.vertex_count() != n || source.graph.edges() != target.graph.edges() {
            return Err(Error::InvalidEmbedding("graphs differ".into()));
        }
        if maps.len() != n {
            return Err(Error::InvalidEmbedding(format!(
                "expected {n} maps, got {}",
                maps.len()
            )));
        }
        for (u, m) in maps.iter().enumerate() {
            let (k, l) = (source.groups[u].order(), target.groups[u].order());
            if m.len() != k {
                return Err(Error::InvalidEmbedding(format!(
                    "map at vertex {u} has {} entries, group has {k}",
                    m.len()
                )));
            }
            if m[0] != 0 {
                return Err(Error::InvalidEmbedding(format!(
                    "map at vertex {u} moves the identity"
                )));
            }
            let mut seen = vec![false; l];
            for (a, &b) in m.iter().enumerate() {
                if b >= l {
                    return Err(Error::InvalidEmbedding(format!(
                        "image {b} at vertex {u} out of range"
                    )));
                }
                if a != 0 && b == 0 {
                    return Err(Error::InvalidEmbedding(format!(
                        "vertex {u} sends {a} to the identity"
                    )));
                }
                if seen[b] {
                    return Err(Error::InvalidEmbedding(format!(
                        "map at vertex {u} is not injective"
                    )));
                }
                seen[b] = true;
            }
        }
        Ok(Embedding {
            maps: maps
                .into_iter()
                .map(|m| m.into_iter().map(|b| b as u16).collect())
                .collect(),
        })
    }

    pub fn identity(gp: &GraphProduct) -> Self {
        Embedding {
            maps: gp
                .groups
                .iter()
                .map(|g| (0..g.order() as u16).collect())
                .collect(),
        }
    }

    /// Syllable-wise image, reduced in the target.
    pub fn apply(&self, target: &GraphProduct, x: &Word) -> Result<Word> {
        let raw: Vec<Syllable> =
            x.0.iter()
                .map(|s| {
                    let img = self
                        .maps
                        .get(s.vertex as usize)
                        .and_then(|m| m.get(s.elem as usize))
                        .ok_or(Error::AmbientMismatch)?;
                    Ok(Syllable {
                        vertex: s.vertex,
                        elem: *img,
                    })
                })
                .collect::<Result<_>>()?;
        target.reduce(&raw).map_err(|_| Error::AmbientMismatch)
    }
}

/// `Φ(x)`: the image of `x` under the syllable-wise embedding.
pub fn embed_phi(embedding: &Embedding, target: &GraphProduct, x: &Word) -> Result<Word> {
    embedding.apply(target, x)
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use proptest::prelude::*;

    use super::*;
    use crate::graph::VertexGroup;

    fn z(k: usize) -> VertexGroup {
        VertexGroup::cyclic(k).unwrap()
    }

    fn gp(n: usize, labels: &[usize], edges: &[(usize, usize)]) -> GraphProduct {
        assert_eq!(labels.len(), n);
        let g = LabeledGraph::new(labels.iter().map(|&k| z(k)).collect(), edges).unwrap();
        GraphProduct::new(g).unwrap()
    }

    fn s(v: usize, e: usize) -> Syllable {
        Syllable::new(v, e)
    }

    fn closure(p: &GraphProduct) -> HashSet<Word> {
        let gens = p.generators();
        let mut seen: HashSet<Word> = HashSet::from([Word::empty()]);
        let mut frontier = vec![Word::empty()];
        while let Some(w) = frontier.pop() {
            for &g in &gens {
                let x = p.multiply(&w, &p.reduce(&[g]).unwrap()).unwrap();
                if seen.insert(x.clone()) {
                    frontier.push(x);
                }
            }
        }
        seen
    }

    #[test]
    fn cancellation_and_merging() {
        let free = gp(2, &[2, 2], &[]);
        assert_eq!(free.reduce(&[s(0, 1), s(0, 1)]).unwrap(), Word::empty());
        let edge = gp(2, &[2, 3], &[(0, 1)]);
        assert_eq!(
            edge.reduce(&[s(0, 1), s(1, 2), s(0, 1)])
                .unwrap()
                .syllables(),
            &[s(1, 2)]
        );
        let z3 = gp(1, &[3], &[]);
        assert_eq!(
            z3.reduce(&[s(0, 1), s(0, 1)]).unwrap().syllables(),
            &[s(0, 2)]
        );
    }

    #[test]
    fn canonical_order_of_commuting_syllables() {
        let edge = gp(2, &[2, 3], &[(0, 1)]);
        let a = edge.reduce(&[s(1, 1), s(0, 1)]).unwrap();
        let b = edge.reduce(&[s(0, 1), s(1, 1)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.syllables(), &[s(0, 1), s(1, 1)]);
        // Table oracle on Z2 x Z3: both orders give (1, 1).
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let prod = FiniteGroup::product(&z2, &z3).unwrap();
        let (u, v) = (3, 1);
        assert_eq!(prod.mul(u, v), prod.mul(v, u));
    }

    #[test]
    fn invalid_syllables_rejected() {
        let p = gp(2, &[2, 3], &[]);
        assert_eq!(
            p.reduce(&[s(0, 2)]),
            Err(Error::InvalidSyllable { vertex: 0, elem: 2 })
        );
        assert_eq!(
            p.reduce(&[s(1, 0)]),
            Err(Error::InvalidSyllable { vertex: 1, elem: 0 })
        );
        assert_eq!(
            p.reduce(&[s(2, 1)]),
            Err(Error::InvalidSyllable { vertex: 2, elem: 1 })
        );
        let other = gp(3, &[5, 5, 5], &[]);
        let w = other.reduce(&[s(2, 4)]).unwrap();
        assert_eq!(p.multiply(&w, &Word::empty()), Err(Error::AmbientMismatch));
    }

    #[test]
    fn closure_counts() {
        assert_eq!(closure(&gp(2, &[2, 3], &[(0, 1)])).len(), 6);
        assert_eq!(
            closure(&gp(3, &[2, 2, 2], &[(0, 1), (1, 2), (0, 2)])).len(),
            8
        );
    }

    #[test]
    fn lengths() {
        let free = gp(2, &[2, 2], &[]);
        assert_eq!(Word::empty().word_length(), 0);
        let w = free.reduce(&[s(0, 1), s(1, 1), s(0, 1)]).unwrap();
        assert_eq!(w.syllable_length(), 3);
        assert_eq!(w.word_length(), 3);
    }

    #[test]
    fn random_words_deterministic() {
        let p = gp(5, &[2; 5], &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert_eq!(p.random_word(7, 0), Word::empty());
        assert_eq!(p.random_word(7, 30), p.random_word(7, 30));
        assert!(p.random_word(7, 30).syllable_length() <= 30);
    }

    #[test]
    fn parse_and_display() {
        let p = gp(2, &[2, 3], &[]);
        let w = p.parse_word("v1:2 v0:1").unwrap();
        assert_eq!(w.to_string(), "v1:2 v0:1");
        assert_eq!(p.parse_word(&w.to_string()).unwrap(), w);
        assert_eq!(p.parse_word("e").unwrap(), Word::empty());
        assert!(matches!(p.parse_word("x1:1"), Err(Error::WordSyntax(_))));
        assert!(matches!(
            p.parse_word("v0:5"),
            Err(Error::InvalidSyllable { .. })
        ));
    }

    #[test]
    fn embedding_checks() {
        let src = gp(2, &[2, 2], &[]);
        let tgt = gp(2, &[4, 4], &[]);
        assert!(Embedding::new(&src, &tgt, vec![vec![0, 2], vec![0, 1]]).is_ok());
        assert!(Embedding::new(&src, &tgt, vec![vec![0, 0], vec![0, 1]]).is_err());
        assert!(Embedding::new(&src, &tgt, vec![vec![1, 0], vec![0, 1]]).is_err());
        let other = gp(2, &[4, 4], &[(0, 1)]);
        assert!(Embedding::new(&src, &other, vec![vec![0, 2], vec![0, 1]]).is_err());

        let e = Embedding::new(&src, &tgt, vec![vec![0, 2], vec![0, 3]]).unwrap();
        let w = src.reduce(&[s(0, 1), s(1, 1)]).unwrap();
        assert_eq!(
            embed_phi(&e, &tgt, &w).unwrap().syllables(),
            &[s(0, 2), s(1, 3)]
        );
        let id = Embedding::identity(&src);
        assert_eq!(embed_phi(&id, &src, &w).unwrap(), w);
    }

    fn pentagon() -> GraphProduct {
        gp(
            5,
            &[2, 3, 2, 2, 3],
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)],
        )
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent(seed in any::<u64>(), n in 0usize..40) {
            let p = pentagon();
            let raw = p.random_raw(&mut ChaCha8Rng::seed_from_u64(seed), n);
            let w = p.reduce(&raw).unwrap();
            prop_assert!(w.syllable_length() <= n);
            prop_assert!(p.is_normal_form(&w));
            prop_assert_eq!(p.reduce(w.syllables()).unwrap(), w);
        }

        #[test]
        fn group_axioms(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
            let p = pentagon();
            let (x, y, z) = (p.random_word(a, 15), p.random_word(b, 15), p.random_word(c, 15));
            let xy_z = p.multiply(&p.multiply(&x, &y).unwrap(), &z).unwrap();
            let x_yz = p.multiply(&x, &p.multiply(&y, &z).unwrap()).unwrap();
            prop_assert_eq!(xy_z, x_yz);
            prop_assert!(p.multiply(&x, &p.inverse(&x).unwrap()).unwrap().is_empty());
            prop_assert!(p.multiply(&p.inverse(&x).unwrap(), &x).unwrap().is_empty());
        }

        #[test]
        fn shuffle_invariance(seed in any::<u64>(), n in 2usize..30, pick in any::<usize>()) {
            let p = pentagon();
            let w = p.random_word(seed, n);
            let syl = w.syllables().to_vec();
            let swaps: Vec<usize> = (0..syl.len().saturating_sub(1))
                .filter(|&i| p.graph().adjacent(syl[i].vertex as usize, syl[i + 1].vertex as usize))
                .collect();
            if !swaps.is_empty() {
                let i = swaps[pick % swaps.len()];
                let mut shuffled = syl.clone();
                shuffled.swap(i, i + 1);
                prop_assert_eq!(p.reduce(&shuffled).unwrap(), w);
            }
        }

        #[test]
        fn phi_is_homomorphism(a in any::<u64>(), b in any::<u64>()) {
            let src = gp(3, &[2, 2, 3], &[(0, 1)]);
            let tgt = gp(3, &[4, 2, 6], &[(0, 1)]);
            let e = Embedding::new(&src, &tgt, vec![vec![0, 2], vec![0, 1], vec![0, 2, 4]]).unwrap();
            let (x, y) = (src.random_word(a, 12), src.random_word(b, 12));
            let lhs = embed_phi(&e, &tgt, &src.multiply(&x, &y).unwrap()).unwrap();
            let rhs = tgt.multiply(&embed_phi(&e, &tgt, &x).unwrap(), &embed_phi(&e, &tgt, &y).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
