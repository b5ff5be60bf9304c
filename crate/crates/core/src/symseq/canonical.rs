//! Canonical representatives for the three quotient constructions.
//!
//! A representative always carries a permutation `tau` on the composite
//! positions; composite position `p` sits at final position `tau^{-1}(p)`.

use std::cmp::Ordering;

use super::{ElemSource, FinSymSeq, SeqElem};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// `(x; y_1, .., y_ℓ; τ)` with `x` an index into the outer arity-`ℓ` component.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CompositeRep<E> {
    pub outer: usize,
    pub inners: Vec<E>,
    pub tau: Permutation,
}

/// `(x_1 ⊙ .. ⊙ x_n)·τ`, each part drawn from its own factor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ShuffleRep {
    pub parts: Vec<SeqElem>,
    pub tau: Permutation,
}

/// `(x_1 □ .. □ x_n)·τ`; cells of the grid are indexed row-major.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridRep {
    pub parts: Vec<SeqElem>,
    pub tau: Permutation,
}

/// Absorbs as much of `tau` into the blocks as possible: returns the block
/// permutations `τ_b` and `ρ` with `tau = (⊕τ_b) ∘ ρ` and the final positions
/// of every block increasing.
pub(crate) fn absorb_blocks(sizes: &[usize], tau: &Permutation) -> (Vec<Permutation>, Permutation) {
    let inv = tau.inverse();
    let mut blocks = Vec::with_capacity(sizes.len());
    let mut offset = 0;
    for &s in sizes {
        let mut local: Vec<usize> = (0..s).collect();
        local.sort_by_key(|&a| inv.apply(offset + a));
        blocks.push(Permutation::from_images_unchecked(local));
        offset += s;
    }
    let rho = Permutation::block_sum(&blocks).inverse().compose(tau);
    (blocks, rho)
}

fn check_sizes(sizes: &[usize], tau: &Permutation) -> Result<()> {
    let total: usize = sizes.iter().sum();
    if total != tau.arity() {
        return Err(Error::ArityMismatch {
            expected: total,
            found: tau.arity(),
        });
    }
    Ok(())
}

/// Canonical form in an iterated graded tensor.
pub fn canonical_shuffle(factors: &[&FinSymSeq], rep: &ShuffleRep) -> Result<ShuffleRep> {
    if factors.len() != rep.parts.len() {
        return Err(Error::ArityMismatch {
            expected: factors.len(),
            found: rep.parts.len(),
        });
    }
    let sizes: Vec<usize> = rep.parts.iter().map(|p| p.arity).collect();
    check_sizes(&sizes, &rep.tau)?;
    let (blocks, rho) = absorb_blocks(&sizes, &rep.tau);
    let parts = rep
        .parts
        .iter()
        .zip(&blocks)
        .zip(factors)
        .map(|((p, b), f)| f.act(p, b))
        .collect();
    Ok(ShuffleRep { parts, tau: rho })
}

/// Row-major cell coordinates of `index` in a grid with the given extents.
pub(crate) fn decode_cell(mut index: usize, extents: &[usize]) -> Vec<usize> {
    let mut cell = vec![0; extents.len()];
    for (c, &e) in cell.iter_mut().zip(extents).rev() {
        *c = index % e;
        index /= e;
    }
    cell
}

pub(crate) fn encode_cell(cell: &[usize], extents: &[usize]) -> usize {
    cell.iter().zip(extents).fold(0, |acc, (&c, &e)| acc * e + c)
}

/// Canonical form in an iterated matrix tensor: coordinates are relabelled
/// in order of first appearance along the final positions. When one part has
/// arity 0 the grid is empty and every part is reduced to its orbit minimum.
pub fn canonical_grid(factors: &[&FinSymSeq], rep: &GridRep) -> Result<GridRep> {
    if factors.len() != rep.parts.len() {
        return Err(Error::ArityMismatch {
            expected: factors.len(),
            found: rep.parts.len(),
        });
    }
    let extents: Vec<usize> = rep.parts.iter().map(|p| p.arity).collect();
    let cells: usize = extents.iter().product();
    if cells != rep.tau.arity() {
        return Err(Error::ArityMismatch {
            expected: cells,
            found: rep.tau.arity(),
        });
    }
    if cells == 0 {
        let parts = rep
            .parts
            .iter()
            .zip(factors)
            .map(|(p, f)| SeqElem {
                arity: p.arity,
                index: f.orbit_min(p.arity, p.index),
            })
            .collect();
        return Ok(GridRep {
            parts,
            tau: Permutation::identity(0),
        });
    }
    let n = extents.len();
    let mut relabel: Vec<Vec<Option<usize>>> = extents.iter().map(|&e| vec![None; e]).collect();
    let mut next = vec![0usize; n];
    let mut images = Vec::with_capacity(cells);
    for m in 0..cells {
        let cell = decode_cell(rep.tau.apply(m), &extents);
        let new_cell: Vec<usize> = cell
            .iter()
            .enumerate()
            .map(|(f, &c)| {
                *relabel[f][c].get_or_insert_with(|| {
                    next[f] += 1;
                    next[f] - 1
                })
            })
            .collect();
        images.push(encode_cell(&new_cell, &extents));
    }
    let parts = rep
        .parts
        .iter()
        .zip(factors)
        .zip(&relabel)
        .map(|((p, f), r)| {
            let r = Permutation::from_images_unchecked(r.iter().map(|x| x.expect("every coordinate appears")).collect());
            f.act(p, &r.inverse())
        })
        .collect();
    Ok(GridRep {
        parts,
        tau: Permutation::from_images_unchecked(images),
    })
}

/// Canonical form of a composite representative modulo the block-absorption
/// and outer-reshuffle relations.
///
/// Step one absorbs the permutation into the inner elements so that every
/// block occupies increasing final positions. Step two sorts the blocks by
/// (final positions, inner element) and moves the outer element along; blocks
/// that compare equal (equal arity-0 inners) leave a Young subgroup acting on
/// the outer element, over which its orbit minimum is taken.
pub fn canonical_composite<S: ElemSource>(
    outer: &FinSymSeq,
    inner: &S,
    rep: &CompositeRep<S::Elem>,
) -> Result<CompositeRep<S::Elem>> {
    let l = rep.inners.len();
    if rep.outer >= outer.len(l) {
        return Err(Error::InvalidSequence(format!(
            "outer index {} out of range in arity {l}",
            rep.outer
        )));
    }
    let sizes: Vec<usize> = rep.inners.iter().map(|e| inner.arity_of(e)).collect();
    check_sizes(&sizes, &rep.tau)?;
    let (blocks, rho) = absorb_blocks(&sizes, &rep.tau);
    let inv = rho.inverse();
    let mut entries: Vec<(Vec<usize>, S::Elem)> = Vec::with_capacity(l);
    let mut offset = 0;
    for (i, (e, b)) in rep.inners.iter().zip(&blocks).enumerate() {
        let finals = (offset..offset + sizes[i]).map(|p| inv.apply(p)).collect();
        entries.push((finals, inner.act(e, b)));
        offset += sizes[i];
    }
    let mut order: Vec<usize> = (0..l).collect();
    order.sort_by(|&a, &b| entries[a].cmp(&entries[b]));
    let sigma = Permutation::from_images_unchecked(order.clone());
    let mut x = outer.act_index(l, rep.outer, &sigma);
    let sorted: Vec<(Vec<usize>, S::Elem)> = order.iter().map(|&i| entries[i].clone()).collect();
    let stab: Vec<usize> = (0..l.saturating_sub(1))
        .filter(|&j| sorted[j].cmp(&sorted[j + 1]) == Ordering::Equal)
        .collect();
    x = outer.orbit_min_under(l, x, &stab);
    Ok(assemble(x, sorted, rep.tau.arity()))
}

/// Builds the representative whose blocks carry the given final positions.
pub(crate) fn assemble<E>(outer: usize, entries: Vec<(Vec<usize>, E)>, n: usize) -> CompositeRep<E> {
    let mut images = vec![0; n];
    let mut offset = 0;
    let mut inners = Vec::with_capacity(entries.len());
    for (finals, e) in entries {
        for (a, &f) in finals.iter().enumerate() {
            images[f] = offset + a;
        }
        offset += finals.len();
        inners.push(e);
    }
    CompositeRep {
        outer,
        inners,
        tau: Permutation::from_images_unchecked(images),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(arity: usize, index: usize) -> SeqElem {
        SeqElem { arity, index }
    }

    #[test]
    fn absorb_blocks_factorizes() {
        let tau = Permutation::from_one_based(&[3, 1, 4, 2, 5]).unwrap();
        let (blocks, rho) = absorb_blocks(&[2, 3], &tau);
        assert_eq!(Permutation::block_sum(&blocks).compose(&rho), tau);
        let inv = rho.inverse();
        assert!(inv.apply(0) < inv.apply(1));
        assert!(inv.apply(2) < inv.apply(3) && inv.apply(3) < inv.apply(4));
    }

    #[test]
    fn block_sum_is_absorbed_into_inners() {
        // (x; y_1, y_2; τ_1 ⊕ τ_2) ~ (x; y_1·τ_1, y_2·τ_2; id)
        let x = FinSymSeq::point(2, "x");
        let y = FinSymSeq::free_orbit(2);
        let swap = Permutation::from_one_based(&[2, 1]).unwrap();
        let id2 = Permutation::identity(2);
        let rep = CompositeRep {
            outer: 0,
            inners: vec![e(2, 0), e(2, 0)],
            tau: Permutation::block_sum(&[swap.clone(), id2.clone()]),
        };
        let absorbed = CompositeRep {
            outer: 0,
            inners: vec![y.act(&e(2, 0), &swap), e(2, 0)],
            tau: Permutation::identity(4),
        };
        let a = canonical_composite(&x, &y, &rep).unwrap();
        let b = canonical_composite(&x, &y, &absorbed).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn outer_action_reshuffles_inners() {
        // (x·π; y_1, y_2; ρ) ~ (x; y_{π^{-1}(1)}, y_{π^{-1}(2)}; π⟨k⟩ ∘ ρ)
        let x = FinSymSeq::free_orbit(2);
        let mut y = FinSymSeq::point(1, "a");
        y.add_orbit_free(2, "b");
        let swap = Permutation::from_one_based(&[2, 1]).unwrap();
        let id = x.index_of(2, "[1,2]").unwrap();
        let rho = Permutation::from_one_based(&[2, 3, 1]).unwrap();
        let lhs = CompositeRep {
            outer: x.act_index(2, id, &swap),
            inners: vec![e(1, 0), e(2, 1)],
            tau: rho.clone(),
        };
        let rhs = CompositeRep {
            outer: id,
            inners: vec![e(2, 1), e(1, 0)],
            tau: Permutation::block_permute(&swap, &[1, 2]).compose(&rho),
        };
        let a = canonical_composite(&x, &y, &lhs).unwrap();
        assert_eq!(a, canonical_composite(&x, &y, &rhs).unwrap());
        assert_eq!(canonical_composite(&x, &y, &a).unwrap(), a);
    }

    #[test]
    fn inconsistent_arities_are_rejected() {
        let x = FinSymSeq::point(2, "x");
        let y = FinSymSeq::point(1, "y");
        let rep = CompositeRep {
            outer: 0,
            inners: vec![e(1, 0), e(1, 0)],
            tau: Permutation::identity(3),
        };
        assert!(matches!(canonical_composite(&x, &y, &rep), Err(Error::ArityMismatch { .. })));
        let rep = CompositeRep {
            outer: 0,
            inners: vec![e(1, 0)],
            tau: Permutation::identity(1),
        };
        assert!(canonical_composite(&x, &y, &rep).is_err());
    }

    #[test]
    fn grid_relabels_by_first_appearance() {
        let x = FinSymSeq::free_orbit(2);
        let tau = Permutation::from_one_based(&[4, 3, 2, 1]).unwrap();
        let rep = GridRep {
            parts: vec![e(2, 0), e(2, 0)],
            tau,
        };
        let c = canonical_grid(&[&x, &x], &rep).unwrap();
        assert!(c.tau.is_identity());
        let swap = x.index_of(2, "[2,1]").unwrap();
        assert_eq!(c.parts, vec![e(2, swap), e(2, swap)]);
        assert_eq!(canonical_grid(&[&x, &x], &c).unwrap(), c);
    }

    #[test]
    fn cell_coding_round_trips() {
        let ext = [2, 3, 4];
        for i in 0..24 {
            assert_eq!(encode_cell(&decode_cell(i, &ext), &ext), i);
        }
    }
}
