//! Explicit unit and associativity isomorphisms for `∘`, `⊙` and `□`.
//!
//! Each function builds both sides, maps every element of the source along
//! the coherence isomorphism and checks the map with
//! [`check_equivariant_bijection`]. The outer `Result` carries construction
//! errors, the inner one a description of the first defect.

use std::collections::BTreeMap;

use super::canonical::{canonical_composite, canonical_grid, canonical_shuffle};
use super::products::{
    check_equivariant_bijection, composite_product_upto, composition_product, graded_tensor, matrix_tensor,
    ENUMERATION_ARITY_LIMIT,
};
use super::{CompositeRep, FinSymSeq, GridRep, SeqElem, ShuffleRep, UnitSeq};
use crate::error::Result;
use crate::perm::Permutation;

pub type Verdict = std::result::Result<(), String>;

const UNIT: SeqElem = SeqElem { arity: 1, index: 0 };
const NULLARY: SeqElem = SeqElem { arity: 0, index: 0 };

/// The unit of `⊙`: one point in arity 0.
pub fn graded_unit() -> FinSymSeq {
    FinSymSeq::point(0, "E")
}

/// `J ∘ X ≅ X` and `X ∘ J ≅ X`.
pub fn composition_units(x: &FinSymSeq) -> Result<[Verdict; 2]> {
    let j = UnitSeq::J.to_seq();
    let left = composition_product(&j, x)?;
    let right = composition_product(x, &j)?;
    let l = check_equivariant_bijection(x, &left.seq, |e| {
        let rep = CompositeRep {
            outer: 0,
            inners: vec![e],
            tau: Permutation::identity(e.arity),
        };
        left.find(e.arity, &canonical_composite(&j, x, &rep).ok()?)
    });
    let r = check_equivariant_bijection(x, &right.seq, |e| {
        let rep = CompositeRep {
            outer: e.index,
            inners: vec![UNIT; e.arity],
            tau: Permutation::identity(e.arity),
        };
        right.find(e.arity, &canonical_composite(x, &j, &rep).ok()?)
    });
    Ok([l, r])
}

/// `E ⊙ X ≅ X ≅ X ⊙ E`.
pub fn graded_units(x: &FinSymSeq) -> Result<[Verdict; 2]> {
    let e0 = graded_unit();
    let left = graded_tensor(&e0, x)?;
    let right = graded_tensor(x, &e0)?;
    let l = check_equivariant_bijection(x, &left.seq, |e| {
        let rep = ShuffleRep {
            parts: vec![NULLARY, e],
            tau: Permutation::identity(e.arity),
        };
        left.find(e.arity, &canonical_shuffle(&[&e0, x], &rep).ok()?)
    });
    let r = check_equivariant_bijection(x, &right.seq, |e| {
        let rep = ShuffleRep {
            parts: vec![e, NULLARY],
            tau: Permutation::identity(e.arity),
        };
        right.find(e.arity, &canonical_shuffle(&[x, &e0], &rep).ok()?)
    });
    Ok([l, r])
}

/// `I □ X ≅ X ≅ X □ I`.
pub fn matrix_units(x: &FinSymSeq) -> Result<[Verdict; 2]> {
    let i = UnitSeq::I.to_seq();
    let left = matrix_tensor(&i, x)?;
    let right = matrix_tensor(x, &i)?;
    let l = check_equivariant_bijection(x, &left.seq, |e| {
        let rep = GridRep {
            parts: vec![UNIT, e],
            tau: Permutation::identity(e.arity),
        };
        left.find(e.arity, &canonical_grid(&[&i, x], &rep).ok()?)
    });
    let r = check_equivariant_bijection(x, &right.seq, |e| {
        let rep = GridRep {
            parts: vec![e, UNIT],
            tau: Permutation::identity(e.arity),
        };
        right.find(e.arity, &canonical_grid(&[x, &i], &rep).ok()?)
    });
    Ok([l, r])
}

/// `(X ⊙ Y) ⊙ Z ≅ X ⊙ (Y ⊙ Z)`, both sides flattened to `X ⊙ Y ⊙ Z`.
pub fn graded_associativity(x: &FinSymSeq, y: &FinSymSeq, z: &FinSymSeq) -> Result<Verdict> {
    let xy = graded_tensor(x, y)?;
    let yz = graded_tensor(y, z)?;
    let left = graded_tensor(&xy.seq, z)?;
    let right = graded_tensor(x, &yz.seq)?;
    let factors = [x, y, z];
    let flat_right = right_side(&right.seq, |k, i| {
        let r = right.rep(SeqElem { arity: k, index: i });
        let inner = yz.rep(r.parts[1]);
        let pre = Permutation::block_sum(&[Permutation::identity(r.parts[0].arity), inner.tau.clone()]);
        canonical_shuffle(
            &factors,
            &ShuffleRep {
                parts: vec![r.parts[0], inner.parts[0], inner.parts[1]],
                tau: pre.compose(&r.tau),
            },
        )
    })?;
    Ok(check_equivariant_bijection(&left.seq, &right.seq, |e| {
        let r = left.rep(e);
        let inner = xy.rep(r.parts[0]);
        let pre = Permutation::block_sum(&[inner.tau.clone(), Permutation::identity(r.parts[1].arity)]);
        let flat = canonical_shuffle(
            &factors,
            &ShuffleRep {
                parts: vec![inner.parts[0], inner.parts[1], r.parts[1]],
                tau: pre.compose(&r.tau),
            },
        )
        .ok()?;
        lookup(&flat_right, e.arity, flat)
    }))
}

/// `(X □ Y) □ Z ≅ X □ (Y □ Z)`, both sides flattened to `X □ Y □ Z`.
pub fn matrix_associativity(x: &FinSymSeq, y: &FinSymSeq, z: &FinSymSeq) -> Result<Verdict> {
    let xy = matrix_tensor(x, y)?;
    let yz = matrix_tensor(y, z)?;
    let left = matrix_tensor(&xy.seq, z)?;
    let right = matrix_tensor(x, &yz.seq)?;
    let factors = [x, y, z];
    let flat_right = right_side(&right.seq, |k, i| {
        let r = right.rep(SeqElem { arity: k, index: i });
        let inner = yz.rep(r.parts[1]);
        let pre = Permutation::product(&Permutation::identity(r.parts[0].arity), &inner.tau);
        canonical_grid(
            &factors,
            &GridRep {
                parts: vec![r.parts[0], inner.parts[0], inner.parts[1]],
                tau: pre.compose(&r.tau),
            },
        )
    })?;
    Ok(check_equivariant_bijection(&left.seq, &right.seq, |e| {
        let r = left.rep(e);
        let inner = xy.rep(r.parts[0]);
        let pre = Permutation::product(&inner.tau, &Permutation::identity(r.parts[1].arity));
        let flat = canonical_grid(
            &factors,
            &GridRep {
                parts: vec![inner.parts[0], inner.parts[1], r.parts[1]],
                tau: pre.compose(&r.tau),
            },
        )
        .ok()?;
        lookup(&flat_right, e.arity, flat)
    }))
}

/// `(X ∘ Y) ∘ Z ≅ X ∘ (Y ∘ Z)`: an element `γ(γ(x; y)·τ_1; z)·τ` goes to
/// `γ(x; γ(y_1; z'_1), ..)·(τ_1⟨|z|⟩ ∘ τ)` with `z'` the inners `z`
/// reordered by `τ_1^{-1}`.
pub fn composition_associativity(x: &FinSymSeq, y: &FinSymSeq, z: &FinSymSeq) -> Result<Verdict> {
    composition_associativity_upto(x, y, z, ENUMERATION_ARITY_LIMIT)
}

/// The same isomorphism restricted to arities `≤ max_arity`. Nullary inners
/// let high-arity elements of `X ∘ Y` reach low arities, so `X ∘ Y` is built
/// in full; `Y ∘ Z` is only needed up to `max_arity`.
pub fn composition_associativity_upto(x: &FinSymSeq, y: &FinSymSeq, z: &FinSymSeq, max_arity: usize) -> Result<Verdict> {
    let xy = composition_product(x, y)?;
    let top_yz = y.max_arity().unwrap_or(0) * z.max_arity().unwrap_or(0);
    let yz = composite_product_upto(y, z, top_yz.min(max_arity))?;
    let top = xy.seq.max_arity().unwrap_or(0) * z.max_arity().unwrap_or(0);
    let left = composite_product_upto(&xy.seq, z, top.min(max_arity))?;
    let top = x.max_arity().unwrap_or(0) * yz.seq.max_arity().unwrap_or(0);
    let right = composite_product_upto(x, &yz.seq, top.min(max_arity))?;
    Ok(check_equivariant_bijection(&left.seq, &right.seq, |e| {
        let r = left.rep(e);
        let l = r.inners.len();
        let inner = xy.rep(SeqElem { arity: l, index: r.outer });
        let sizes: Vec<usize> = r.inners.iter().map(|s| s.arity).collect();
        let inv = inner.tau.inverse();
        let reordered: Vec<SeqElem> = (0..l).map(|j| r.inners[inv.apply(j)]).collect();
        let tau = Permutation::block_permute(&inner.tau, &sizes).compose(&r.tau);
        let mut offset = 0;
        let mut middle = Vec::with_capacity(inner.inners.len());
        for ye in &inner.inners {
            let block = reordered[offset..offset + ye.arity].to_vec();
            offset += ye.arity;
            let n: usize = block.iter().map(|s| s.arity).sum();
            let rep = CompositeRep {
                outer: ye.index,
                inners: block,
                tau: Permutation::identity(n),
            };
            middle.push(yz.find(n, &canonical_composite(y, z, &rep).ok()?)?);
        }
        let rep = CompositeRep {
            outer: inner.outer,
            inners: middle,
            tau,
        };
        right.find(e.arity, &canonical_composite(x, &yz.seq, &rep).ok()?)
    }))
}

fn right_side<R: Ord, F>(seq: &FinSymSeq, mut flatten: F) -> Result<BTreeMap<(usize, R), usize>>
where
    F: FnMut(usize, usize) -> Result<R>,
{
    let mut table = BTreeMap::new();
    for k in seq.arities() {
        for i in 0..seq.len(k) {
            table.insert((k, flatten(k, i)?), i);
        }
    }
    Ok(table)
}

fn lookup<R: Ord>(table: &BTreeMap<(usize, R), usize>, k: usize, flat: R) -> Option<SeqElem> {
    let index = *table.get(&(k, flat))?;
    Some(SeqElem { arity: k, index })
}
