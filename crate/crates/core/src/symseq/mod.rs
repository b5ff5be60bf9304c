//! Finite symmetric sequences: per-arity finite labelled sets with a right
//! action of the symmetric group.
//!
//! Actions are stored as tables for the adjacent transpositions
//! `s_0, .., s_{k-2}`; the action of an arbitrary permutation is evaluated
//! along its adjacent-transposition word. A table set is accepted only if it
//! satisfies the Coxeter relations of `Σ_k`, which makes it a genuine action.

mod canonical;
mod coherence;
mod products;

pub use canonical::{
    canonical_composite, canonical_grid, canonical_shuffle, CompositeRep, GridRep, ShuffleRep,
};
pub use coherence::{
    composition_associativity, composition_associativity_upto, composition_units, graded_associativity, graded_unit, graded_units,
    matrix_associativity, matrix_units, Verdict,
};
pub use products::{
    check_equivariant_bijection, composition_product, enumerate_composites, graded_tensor,
    matrix_tensor, normalize_composite, Product, UnitSeq, ENUMERATION_ARITY_LIMIT,
};
pub(crate) use products::{composite_label, composite_product_upto};

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Anything whose elements carry an arity and a right symmetric action.
///
/// Implemented by [`FinSymSeq`] and by every set operad; the composition
/// product and free modules are generic over it.
pub trait ElemSource {
    type Elem: Clone + Ord + fmt::Debug;

    fn arity_of(&self, e: &Self::Elem) -> usize;

    fn act(&self, e: &Self::Elem, p: &Permutation) -> Self::Elem;

    /// All elements of arity `k`, in a fixed order.
    fn elements(&self, k: usize) -> Result<Vec<Self::Elem>>;

    /// Largest arity with a nonempty component, if bounded.
    fn top_arity(&self) -> Option<usize>;

    fn label(&self, e: &Self::Elem) -> String;
}

/// Address of an element of a [`FinSymSeq`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SeqElem {
    pub arity: usize,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    labels: Vec<String>,
    /// `gens[j][x]` is the index of `x·s_j`.
    gens: Vec<Vec<usize>>,
}

impl Component {
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FinSymSeq {
    components: BTreeMap<usize, Component>,
}

impl FinSymSeq {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Adds (or replaces) the arity-`k` component from labels and
    /// adjacent-transposition tables.
    pub fn set_component(&mut self, k: usize, labels: Vec<String>, gens: Vec<Vec<usize>>) -> Result<()> {
        validate_component(k, &labels, &gens)?;
        if labels.is_empty() {
            self.components.remove(&k);
        } else {
            self.components.insert(k, Component { labels, gens });
        }
        Ok(())
    }

    /// Builds the arity-`k` component from an action given as a closure on
    /// element indices. Only adjacent transpositions are queried; the result
    /// is validated against the Coxeter relations.
    pub fn set_component_from_action<F>(&mut self, k: usize, labels: Vec<String>, act: F) -> Result<()>
    where
        F: Fn(usize, &Permutation) -> usize,
    {
        let n = labels.len();
        let gens = (0..k.saturating_sub(1))
            .map(|j| {
                let s = Permutation::adjacent(k, j);
                (0..n).map(|x| act(x, &s)).collect()
            })
            .collect();
        self.set_component(k, labels, gens)
    }

    /// One point in arity `k` with trivial action.
    pub fn point(k: usize, label: &str) -> Self {
        let mut s = Self::empty();
        s.add_orbit_trivial(k, label);
        s
    }

    /// `Σ_k` as a free orbit in arity `k`; the element labelled `σ` is sent
    /// to `στ` by `τ`.
    pub fn free_orbit(k: usize) -> Self {
        let mut s = Self::empty();
        s.add_orbit_free(k, "");
        s
    }

    pub fn add_orbit_trivial(&mut self, k: usize, label: &str) {
        self.extend_component(k, vec![label.to_string()], |_, _| 0);
    }

    pub fn add_orbit_free(&mut self, k: usize, prefix: &str) {
        let all = Permutation::all(k);
        let labels = all.iter().map(|p| format!("{prefix}{p}")).collect();
        let index: HashMap<Permutation, usize> = all.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        self.extend_component(k, labels, |x, s| index[&all[x].compose(s)]);
    }

    /// The sign orbit: two elements swapped by odd permutations.
    pub fn add_orbit_sign(&mut self, k: usize, prefix: &str) {
        let labels = vec![format!("{prefix}+"), format!("{prefix}-")];
        if k < 2 {
            self.add_orbit_trivial(k, &format!("{prefix}+"));
            return;
        }
        self.extend_component(k, labels, |x, s| if s.sign() < 0 { 1 - x } else { x });
    }

    /// `Σ_k` acting on the positions `0..k` by `i·σ = σ^{-1}(i)`.
    pub fn add_orbit_positions(&mut self, k: usize, prefix: &str) {
        let labels = (0..k).map(|i| format!("{prefix}{}", i + 1)).collect();
        self.extend_component(k, labels, |x, s| s.inverse().apply(x));
    }

    fn extend_component<F>(&mut self, k: usize, new_labels: Vec<String>, act: F)
    where
        F: Fn(usize, &Permutation) -> usize,
    {
        let (mut labels, mut gens) = match self.components.remove(&k) {
            Some(c) => (c.labels, c.gens),
            None => (Vec::new(), vec![Vec::new(); k.saturating_sub(1)]),
        };
        let base = labels.len();
        for j in 0..k.saturating_sub(1) {
            let s = Permutation::adjacent(k, j);
            gens[j].extend((0..new_labels.len()).map(|x| base + act(x, &s)));
        }
        labels.extend(new_labels);
        self.set_component(k, labels, gens).expect("orbit builders produce valid actions");
    }

    /// Disjoint union; labels are kept, so callers must keep them distinct.
    pub fn union(&self, other: &FinSymSeq) -> Result<FinSymSeq> {
        let mut out = self.clone();
        for (&k, c) in &other.components {
            let (mut labels, mut gens) = match out.components.remove(&k) {
                Some(c) => (c.labels, c.gens),
                None => (Vec::new(), vec![Vec::new(); k.saturating_sub(1)]),
            };
            let base = labels.len();
            for (g, og) in gens.iter_mut().zip(&c.gens) {
                g.extend(og.iter().map(|&x| x + base));
            }
            labels.extend(c.labels.iter().cloned());
            out.set_component(k, labels, gens)?;
        }
        Ok(out)
    }

    pub fn component(&self, k: usize) -> Option<&Component> {
        self.components.get(&k)
    }

    pub fn len(&self, k: usize) -> usize {
        self.components.get(&k).map_or(0, |c| c.len())
    }

    pub fn total(&self) -> usize {
        self.components.values().map(|c| c.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Arities with a nonempty component, ascending.
    pub fn arities(&self) -> impl Iterator<Item = usize> + '_ {
        self.components.keys().copied()
    }

    pub fn max_arity(&self) -> Option<usize> {
        self.components.keys().next_back().copied()
    }

    pub fn label_of(&self, k: usize, index: usize) -> &str {
        &self.components[&k].labels[index]
    }

    pub fn index_of(&self, k: usize, label: &str) -> Option<usize> {
        self.components.get(&k)?.labels.iter().position(|l| l == label)
    }

    /// `x·s_j` for the adjacent transposition `s_j`.
    pub fn act_adjacent(&self, k: usize, index: usize, j: usize) -> usize {
        self.components[&k].gens[j][index]
    }

    pub fn act_index(&self, k: usize, index: usize, p: &Permutation) -> usize {
        assert_eq!(p.arity(), k, "acting on arity {k} with a permutation of arity {}", p.arity());
        let gens = &self.components[&k].gens;
        p.adjacent_word().iter().fold(index, |x, &j| gens[j][x])
    }

    /// Smallest index in the `Σ_k`-orbit of `index`.
    pub fn orbit_min(&self, k: usize, index: usize) -> usize {
        let gens: Vec<usize> = (0..k.saturating_sub(1)).collect();
        self.orbit_min_under(k, index, &gens)
    }

    /// Smallest index in the orbit of `index` under the subgroup generated by
    /// the given adjacent transpositions.
    pub fn orbit_min_under(&self, k: usize, index: usize, generators: &[usize]) -> usize {
        if generators.is_empty() {
            return index;
        }
        let gens = &self.components[&k].gens;
        let mut seen = vec![false; gens[0].len()];
        let mut stack = vec![index];
        seen[index] = true;
        let mut best = index;
        while let Some(x) = stack.pop() {
            best = best.min(x);
            for &j in generators {
                let y = gens[j][x];
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        best
    }

    /// Random sequence built from small transitive orbits, with at most
    /// `max_total` elements spread over arities `0..=max_arity`.
    pub fn random<R: Rng>(rng: &mut R, max_arity: usize, max_total: usize) -> FinSymSeq {
        let mut s = FinSymSeq::empty();
        let mut counter = 0usize;
        let orbits = rng.gen_range(1..=4);
        for _ in 0..orbits {
            let k = rng.gen_range(0..=max_arity);
            let kind = rng.gen_range(0..4);
            let size = match kind {
                0 => 1,
                1 => (1..=k).product::<usize>(),
                2 => if k >= 2 { 2 } else { 1 },
                _ => k.max(1),
            };
            if s.total() + size > max_total {
                continue;
            }
            let prefix = format!("o{counter}_");
            counter += 1;
            match kind {
                0 => s.add_orbit_trivial(k, &format!("{prefix}*")),
                1 => s.add_orbit_free(k, &prefix),
                2 => s.add_orbit_sign(k, &prefix),
                _ if k == 0 => s.add_orbit_trivial(k, &format!("{prefix}*")),
                _ => s.add_orbit_positions(k, &prefix),
            }
        }
        s
    }
}

fn validate_component(k: usize, labels: &[String], gens: &[Vec<usize>]) -> Result<()> {
    let n = labels.len();
    let mut sorted: Vec<&String> = labels.iter().collect();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidSequence(format!("duplicate labels in arity {k}")));
    }
    let expected = k.saturating_sub(1);
    if gens.len() != expected {
        return Err(Error::InvalidSequence(format!(
            "arity {k} needs {expected} generator tables, got {}",
            gens.len()
        )));
    }
    for (j, g) in gens.iter().enumerate() {
        if g.len() != n || g.iter().any(|&y| y >= n) {
            return Err(Error::InvalidSequence(format!("table for s_{j} in arity {k} is malformed")));
        }
    }
    let apply = |word: &[usize], x: usize| word.iter().fold(x, |y, &j| gens[j][y]);
    for x in 0..n {
        for j in 0..expected {
            if apply(&[j, j], x) != x {
                return Err(Error::InvalidSequence(format!("s_{j}^2 != 1 in arity {k}")));
            }
            if j + 1 < expected && apply(&[j, j + 1, j, j + 1, j, j + 1], x) != x {
                return Err(Error::InvalidSequence(format!("(s_{j} s_{})^3 != 1 in arity {k}", j + 1)));
            }
            for i in j + 2..expected {
                if apply(&[j, i], x) != apply(&[i, j], x) {
                    return Err(Error::InvalidSequence(format!("s_{j} and s_{i} do not commute in arity {k}")));
                }
            }
        }
    }
    Ok(())
}

impl ElemSource for FinSymSeq {
    type Elem = SeqElem;

    fn arity_of(&self, e: &SeqElem) -> usize {
        e.arity
    }

    fn act(&self, e: &SeqElem, p: &Permutation) -> SeqElem {
        SeqElem {
            arity: e.arity,
            index: self.act_index(e.arity, e.index, p),
        }
    }

    fn elements(&self, k: usize) -> Result<Vec<SeqElem>> {
        Ok((0..self.len(k)).map(|index| SeqElem { arity: k, index }).collect())
    }

    fn top_arity(&self) -> Option<usize> {
        self.max_arity()
    }

    fn label(&self, e: &SeqElem) -> String {
        self.label_of(e.arity, e.index).to_string()
    }
}

// JSON: {"components": {"2": {"elements": ["a","b"], "action": {"2,1": ["b","a"]}}}}
// Action keys are 1-based image lists; values give the image of each element
// in the order of "elements".

#[derive(Serialize, Deserialize)]
struct SeqJson {
    components: BTreeMap<String, ComponentJson>,
}

#[derive(Serialize, Deserialize)]
struct ComponentJson {
    elements: Vec<String>,
    #[serde(default)]
    action: BTreeMap<String, Vec<String>>,
}

fn perm_key(p: &Permutation) -> String {
    p.one_based().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl Serialize for FinSymSeq {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut components = BTreeMap::new();
        for (&k, c) in &self.components {
            let mut action = BTreeMap::new();
            for (j, g) in c.gens.iter().enumerate() {
                let images = g.iter().map(|&y| c.labels[y].clone()).collect();
                action.insert(perm_key(&Permutation::adjacent(k, j)), images);
            }
            components.insert(
                k.to_string(),
                ComponentJson {
                    elements: c.labels.clone(),
                    action,
                },
            );
        }
        SeqJson { components }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FinSymSeq {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SeqJson::deserialize(d)?;
        FinSymSeq::from_json_parts(raw).map_err(serde::de::Error::custom)
    }
}

impl FinSymSeq {
    fn from_json_parts(raw: SeqJson) -> Result<FinSymSeq> {
        let mut out = FinSymSeq::empty();
        for (key, c) in raw.components {
            let k: usize = key
                .parse()
                .map_err(|_| Error::Parse(format!("arity key {key:?} is not a natural number")))?;
            let index: HashMap<&str, usize> = c.elements.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
            let mut parsed: BTreeMap<Permutation, Vec<usize>> = BTreeMap::new();
            for (pk, images) in &c.action {
                let nums: Vec<usize> = pk
                    .split(',')
                    .map(|t| t.trim().parse::<usize>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::Parse(format!("bad permutation key {pk:?}")))?;
                let p = Permutation::from_one_based(&nums)?;
                if p.arity() != k {
                    return Err(Error::Parse(format!("permutation {pk:?} in arity {k}")));
                }
                if images.len() != c.elements.len() {
                    return Err(Error::Parse(format!("action table for {pk:?} has wrong length")));
                }
                let table = images
                    .iter()
                    .map(|l| index.get(l.as_str()).copied().ok_or_else(|| Error::Parse(format!("unknown label {l:?}"))))
                    .collect::<Result<Vec<usize>>>()?;
                parsed.insert(p, table);
            }
            let gens = (0..k.saturating_sub(1))
                .map(|j| {
                    parsed
                        .get(&Permutation::adjacent(k, j))
                        .cloned()
                        .ok_or_else(|| Error::Parse(format!("arity {k}: missing action of adjacent transposition {}", j + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            out.set_component(k, c.elements.clone(), gens)?;
            for (p, table) in &parsed {
                for (x, &y) in table.iter().enumerate() {
                    if out.act_index(k, x, p) != y {
                        return Err(Error::InvalidSequence(format!(
                            "arity {k}: table for {p} disagrees with the generated action"
                        )));
                    }
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn free_orbit_is_free_and_transitive() {
        let s = FinSymSeq::free_orbit(3);
        assert_eq!(s.len(3), 6);
        let e = s.index_of(3, "[1,2,3]").unwrap();
        let images: std::collections::BTreeSet<usize> =
            Permutation::all(3).iter().map(|p| s.act_index(3, e, p)).collect();
        assert_eq!(images.len(), 6);
    }

    #[test]
    fn actions_are_right_actions() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let s = FinSymSeq::random(&mut rng, 4, 64);
            for k in s.arities().collect::<Vec<_>>() {
                let perms = Permutation::all(k);
                for x in 0..s.len(k) {
                    assert_eq!(s.act_index(k, x, &Permutation::identity(k)), x);
                    for a in perms.iter().step_by(5) {
                        for b in perms.iter().step_by(7) {
                            let lhs = s.act_index(k, s.act_index(k, x, a), b);
                            assert_eq!(lhs, s.act_index(k, x, &a.compose(b)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_non_actions() {
        let mut s = FinSymSeq::empty();
        // a 3-cycle on three labels is not an involution
        let err = s.set_component(2, vec!["a".into(), "b".into(), "c".into()], vec![vec![1, 2, 0]]);
        assert!(err.is_err());
        // in arity 3 two involutions must satisfy the braid relation
        let labels: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let err = s.set_component(3, labels, vec![vec![1, 0, 2, 3], vec![0, 2, 1, 3]]);
        assert!(err.is_ok(), "positions-like action on three of four points is a valid action");
        let labels: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let err = s.set_component(3, labels, vec![vec![1, 0, 3, 2], vec![0, 2, 1, 3]]);
        assert!(err.is_err());
    }

    #[test]
    fn json_round_trip() {
        let mut s = FinSymSeq::free_orbit(2);
        s.add_orbit_trivial(0, "u");
        s.add_orbit_positions(3, "p");
        let text = serde_json::to_string(&s).unwrap();
        let back: FinSymSeq = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        let explicit = r#"{"components": {"2": {"elements": ["a","b"], "action": {"2,1": ["b","a"]}}}}"#;
        let parsed: FinSymSeq = serde_json::from_str(explicit).unwrap();
        assert_eq!(parsed.act_adjacent(2, 0, 0), 1);
        let bad = r#"{"components": {"2": {"elements": ["a","b"], "action": {}}}}"#;
        assert!(serde_json::from_str::<FinSymSeq>(bad).is_err());
        let inconsistent = r#"{"components": {"3": {"elements": ["a","b"], "action": {"2,1,3": ["b","a"], "1,3,2": ["b","a"], "3,2,1": ["a","b"]}}}}"#;
        assert!(serde_json::from_str::<FinSymSeq>(inconsistent).is_err());
    }
}
