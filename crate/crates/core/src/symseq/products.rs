use std::collections::{BTreeMap, BTreeSet};

use super::canonical::{assemble, canonical_composite, canonical_grid, canonical_shuffle};
use super::{CompositeRep, ElemSource, FinSymSeq, GridRep, SeqElem, ShuffleRep};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Products whose components involve `k!`-sized enumerations refuse arities
/// above this bound.
pub const ENUMERATION_ARITY_LIMIT: usize = 8;

/// The units of `∘` and `□`. Both are a single point in arity 1; they are
/// kept apart because they play different roles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnitSeq {
    J,
    I,
}

impl UnitSeq {
    pub fn to_seq(self) -> FinSymSeq {
        match self {
            UnitSeq::J => FinSymSeq::point(1, "J"),
            UnitSeq::I => FinSymSeq::point(1, "I"),
        }
    }
}

/// A computed product: the resulting sequence together with the canonical
/// representative behind every element.
#[derive(Clone, Debug)]
pub struct Product<R> {
    pub seq: FinSymSeq,
    reps: BTreeMap<usize, Vec<R>>,
    lookup: BTreeMap<usize, BTreeMap<R, usize>>,
}

impl<R: Clone + Ord> Product<R> {
    fn build<F, L>(per_arity: BTreeMap<usize, Vec<R>>, mut act: F, label: L) -> Result<Product<R>>
    where
        F: FnMut(&R, &Permutation) -> Result<R>,
        L: Fn(&R) -> String,
    {
        let mut seq = FinSymSeq::empty();
        let mut lookup = BTreeMap::new();
        for (&k, reps) in &per_arity {
            if reps.is_empty() {
                continue;
            }
            let index: BTreeMap<R, usize> = reps.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
            if index.len() != reps.len() {
                return Err(Error::InvalidSequence(format!("duplicate representatives in arity {k}")));
            }
            let mut gens = Vec::with_capacity(k.saturating_sub(1));
            for j in 0..k.saturating_sub(1) {
                let s = Permutation::adjacent(k, j);
                let table = reps
                    .iter()
                    .map(|r| {
                        let moved = act(r, &s)?;
                        index.get(&moved).copied().ok_or_else(|| {
                            Error::InvalidSequence(format!("arity {k}: action left the enumerated set"))
                        })
                    })
                    .collect::<Result<Vec<usize>>>()?;
                gens.push(table);
            }
            seq.set_component(k, reps.iter().map(&label).collect(), gens)?;
            lookup.insert(k, index);
        }
        let reps = per_arity.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        Ok(Product { seq, reps, lookup })
    }

    pub fn rep(&self, e: SeqElem) -> &R {
        &self.reps[&e.arity][e.index]
    }

    pub fn reps(&self, k: usize) -> &[R] {
        self.reps.get(&k).map_or(&[], |v| v.as_slice())
    }

    /// Index of a canonical representative.
    pub fn find(&self, k: usize, rep: &R) -> Option<SeqElem> {
        let index = *self.lookup.get(&k)?.get(rep)?;
        Some(SeqElem { arity: k, index })
    }
}

fn perm_label(p: &Permutation) -> String {
    p.to_string()
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < r - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, r, &mut Vec::new(), &mut out);
    out
}

/// The graded tensor `X ⊙ Y`.
pub fn graded_tensor(x: &FinSymSeq, y: &FinSymSeq) -> Result<Product<ShuffleRep>> {
    let mut per_arity: BTreeMap<usize, Vec<ShuffleRep>> = BTreeMap::new();
    for i in x.arities() {
        for j in y.arities() {
            let k = i + j;
            for sel in combinations(k, i) {
                let mut rest = Vec::with_capacity(j);
                let mut images = vec![0; k];
                let mut chosen = sel.iter().peekable();
                for p in 0..k {
                    if chosen.peek() == Some(&&p) {
                        chosen.next();
                    } else {
                        rest.push(p);
                    }
                }
                for (a, &f) in sel.iter().enumerate() {
                    images[f] = a;
                }
                for (b, &f) in rest.iter().enumerate() {
                    images[f] = i + b;
                }
                let tau = Permutation::from_images_unchecked(images);
                for xi in 0..x.len(i) {
                    for yj in 0..y.len(j) {
                        per_arity.entry(k).or_default().push(ShuffleRep {
                            parts: vec![SeqElem { arity: i, index: xi }, SeqElem { arity: j, index: yj }],
                            tau: tau.clone(),
                        });
                    }
                }
            }
        }
    }
    for reps in per_arity.values_mut() {
        reps.sort();
    }
    Product::build(
        per_arity,
        |r, s| {
            canonical_shuffle(
                &[x, y],
                &ShuffleRep {
                    parts: r.parts.clone(),
                    tau: r.tau.compose(s),
                },
            )
        },
        |r| {
            format!(
                "({}/{},{}/{}){}",
                x.label_of(r.parts[0].arity, r.parts[0].index),
                r.parts[0].arity,
                y.label_of(r.parts[1].arity, r.parts[1].index),
                r.parts[1].arity,
                perm_label(&r.tau)
            )
        },
    )
}

/// All grid permutations already in first-appearance form for an `i × j` grid.
fn first_appearance_grids(i: usize, j: usize) -> Vec<Permutation> {
    fn go(
        i: usize,
        j: usize,
        used: &mut Vec<bool>,
        rows: usize,
        cols: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Permutation>,
    ) {
        if cur.len() == i * j {
            out.push(Permutation::from_images_unchecked(cur.clone()));
            return;
        }
        for a in 0..=rows.min(i - 1) {
            for b in 0..=cols.min(j - 1) {
                let c = a * j + b;
                if used[c] {
                    continue;
                }
                used[c] = true;
                cur.push(c);
                go(i, j, used, rows.max(a + 1), cols.max(b + 1), cur, out);
                cur.pop();
                used[c] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(i, j, &mut vec![false; i * j], 0, 0, &mut Vec::new(), &mut out);
    out
}

fn orbit_minima(s: &FinSymSeq, k: usize) -> Vec<usize> {
    (0..s.len(k)).filter(|&x| s.orbit_min(k, x) == x).collect()
}

/// The matrix tensor `X □ Y`.
pub fn matrix_tensor(x: &FinSymSeq, y: &FinSymSeq) -> Result<Product<GridRep>> {
    let mut per_arity: BTreeMap<usize, Vec<GridRep>> = BTreeMap::new();
    for i in x.arities() {
        for j in y.arities() {
            let k = i * j;
            if k > ENUMERATION_ARITY_LIMIT {
                return Err(Error::TooLarge {
                    arity: k,
                    limit: ENUMERATION_ARITY_LIMIT,
                });
            }
            if k == 0 {
                for xi in orbit_minima(x, i) {
                    for yj in orbit_minima(y, j) {
                        per_arity.entry(0).or_default().push(GridRep {
                            parts: vec![SeqElem { arity: i, index: xi }, SeqElem { arity: j, index: yj }],
                            tau: Permutation::identity(0),
                        });
                    }
                }
                continue;
            }
            for tau in first_appearance_grids(i, j) {
                for xi in 0..x.len(i) {
                    for yj in 0..y.len(j) {
                        per_arity.entry(k).or_default().push(GridRep {
                            parts: vec![SeqElem { arity: i, index: xi }, SeqElem { arity: j, index: yj }],
                            tau: tau.clone(),
                        });
                    }
                }
            }
        }
    }
    for reps in per_arity.values_mut() {
        reps.sort();
    }
    Product::build(
        per_arity,
        |r, s| {
            canonical_grid(
                &[x, y],
                &GridRep {
                    parts: r.parts.clone(),
                    tau: r.tau.compose(s),
                },
            )
        },
        |r| {
            format!(
                "({}/{}x{}/{}){}",
                x.label_of(r.parts[0].arity, r.parts[0].index),
                r.parts[0].arity,
                y.label_of(r.parts[1].arity, r.parts[1].index),
                r.parts[1].arity,
                perm_label(&r.tau)
            )
        },
    )
}

/// Restricted growth strings of length `n` with exactly `b` blocks; block
/// numbers appear in order of their minimal element.
fn set_partitions(n: usize, b: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(p: usize, n: usize, b: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if p == n {
            if blocks.len() == b {
                out.push(blocks.clone());
            }
            return;
        }
        if blocks.len() + (n - p) < b {
            return;
        }
        for i in 0..blocks.len() {
            blocks[i].push(p);
            go(p + 1, n, b, blocks, out);
            blocks[i].pop();
        }
        if blocks.len() < b {
            blocks.push(vec![p]);
            go(p + 1, n, b, blocks, out);
            blocks.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, b, &mut Vec::new(), &mut out);
    out
}

/// Non-decreasing sequences of length `len` over `0..n`.
fn multisets(n: usize, len: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i, n, len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, len, &mut Vec::new(), &mut out);
    out
}

fn cartesian<E: Clone>(choices: &[Vec<E>]) -> Vec<Vec<E>> {
    let mut out = vec![Vec::new()];
    for c in choices {
        let mut next = Vec::with_capacity(out.len() * c.len());
        for prefix in &out {
            for e in c {
                let mut v = prefix.clone();
                v.push(e.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Canonical composite representatives of arity `k`, enumerated directly:
/// a set partition of the final positions, inner labels per block, a multiset
/// of arity-0 inners, and an outer element that is minimal in its orbit under
/// the stabilizer of the sorted block list.
pub fn enumerate_composites<S: ElemSource>(outer: &FinSymSeq, inner: &S, k: usize) -> Result<Vec<CompositeRep<S::Elem>>> {
    let nullary = inner.elements(0)?;
    let mut by_size: BTreeMap<usize, Vec<S::Elem>> = BTreeMap::new();
    let mut out = Vec::new();
    for l in outer.arities() {
        let max_blocks = l.min(k);
        let min_blocks = usize::from(k > 0);
        for b in min_blocks..=max_blocks {
            let z = l - b;
            if z > 0 && nullary.is_empty() {
                continue;
            }
            let zero_choices = multisets(nullary.len(), z);
            for partition in set_partitions(k, b) {
                let mut choices = Vec::with_capacity(b);
                for block in &partition {
                    let s = block.len();
                    if let std::collections::btree_map::Entry::Vacant(e) = by_size.entry(s) {
                        e.insert(inner.elements(s)?);
                    }
                    choices.push(by_size[&s].clone());
                }
                for labels in cartesian(&choices) {
                    for zeros in &zero_choices {
                        let mut entries: Vec<(Vec<usize>, S::Elem)> =
                            zeros.iter().map(|&i| (Vec::new(), nullary[i].clone())).collect();
                        entries.extend(partition.iter().cloned().zip(labels.iter().cloned()));
                        let stab: Vec<usize> = (0..l.saturating_sub(1)).filter(|&j| entries[j] == entries[j + 1]).collect();
                        for x in 0..outer.len(l) {
                            if outer.orbit_min_under(l, x, &stab) == x {
                                out.push(assemble(x, entries.clone(), k));
                            }
                        }
                    }
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Largest arity of `X ∘ Y` that can be nonempty.
fn composite_top_arity(x: &FinSymSeq, top_inner: usize) -> usize {
    x.max_arity().map_or(0, |l| l * top_inner)
}

/// Labels a composite representative.
pub(crate) fn composite_label<S: ElemSource>(outer: &FinSymSeq, inner: &S, r: &CompositeRep<S::Elem>) -> String {
    let inners: Vec<String> = r
        .inners
        .iter()
        .map(|e| format!("{}/{}", inner.label(e), inner.arity_of(e)))
        .collect();
    format!(
        "{}<{}>{}",
        outer.label_of(r.inners.len(), r.outer),
        inners.join(","),
        perm_label(&r.tau)
    )
}

/// The composition product over the arities `0..=max_arity`.
pub(crate) fn composite_product_upto<S: ElemSource>(
    outer: &FinSymSeq,
    inner: &S,
    max_arity: usize,
) -> Result<Product<CompositeRep<S::Elem>>> {
    if max_arity > ENUMERATION_ARITY_LIMIT {
        return Err(Error::TooLarge {
            arity: max_arity,
            limit: ENUMERATION_ARITY_LIMIT,
        });
    }
    let mut per_arity = BTreeMap::new();
    for k in 0..=max_arity {
        per_arity.insert(k, enumerate_composites(outer, inner, k)?);
    }
    Product::build(
        per_arity,
        |r, s| {
            canonical_composite(
                outer,
                inner,
                &CompositeRep {
                    outer: r.outer,
                    inners: r.inners.clone(),
                    tau: r.tau.compose(s),
                },
            )
        },
        |r| composite_label(outer, inner, r),
    )
}

/// The composition product `X ∘ Y`.
pub fn composition_product(x: &FinSymSeq, y: &FinSymSeq) -> Result<Product<CompositeRep<SeqElem>>> {
    let top = composite_top_arity(x, y.max_arity().unwrap_or(0));
    composite_product_upto(x, y, top)
}

/// Canonical representative of a composite over `X ∘ Y`.
pub fn normalize_composite(x: &FinSymSeq, y: &FinSymSeq, rep: &CompositeRep<SeqElem>) -> Result<CompositeRep<SeqElem>> {
    for e in &rep.inners {
        if e.index >= y.len(e.arity) {
            return Err(Error::InvalidSequence(format!("inner element {e:?} does not exist")));
        }
    }
    canonical_composite(x, y, rep)
}

/// Checks that `map` is an arity-preserving, equivariant bijection `a → b`.
pub fn check_equivariant_bijection<F>(a: &FinSymSeq, b: &FinSymSeq, map: F) -> std::result::Result<(), String>
where
    F: Fn(SeqElem) -> Option<SeqElem>,
{
    let arities: BTreeSet<usize> = a.arities().chain(b.arities()).collect();
    for k in arities {
        if a.len(k) != b.len(k) {
            return Err(format!("arity {k}: {} elements vs {}", a.len(k), b.len(k)));
        }
        let mut image = vec![None; a.len(k)];
        let mut hit = vec![false; b.len(k)];
        for x in 0..a.len(k) {
            let e = map(SeqElem { arity: k, index: x }).ok_or_else(|| format!("arity {k}: element {x} has no image"))?;
            if e.arity != k || e.index >= b.len(k) {
                return Err(format!("arity {k}: element {x} maps outside arity {k}"));
            }
            if std::mem::replace(&mut hit[e.index], true) {
                return Err(format!("arity {k}: map is not injective at {x}"));
            }
            image[x] = Some(e.index);
        }
        for j in 0..k.saturating_sub(1) {
            for x in 0..a.len(k) {
                let lhs = image[a.act_adjacent(k, x, j)].expect("filled above");
                let rhs = b.act_adjacent(k, image[x].expect("filled above"), j);
                if lhs != rhs {
                    return Err(format!("arity {k}: map is not equivariant for s_{j} at {x}"));
                }
            }
        }
    }
    Ok(())
}
