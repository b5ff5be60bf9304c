use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::fp::{compose_homs, hom_set, FpHom};
use super::{for_each_tuple, SetOperad};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Outcome of one law check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub law: String,
    pub checked: usize,
    pub failures: usize,
    pub witness: Option<String>,
}

impl LawReport {
    pub fn new(law: &str) -> Self {
        LawReport {
            law: law.to_string(),
            checked: 0,
            failures: 0,
            witness: None,
        }
    }

    pub fn record<F: FnOnce() -> String>(&mut self, ok: bool, witness: F) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn components<P: SetOperad>(op: &P, max_arity: usize) -> Result<Vec<Vec<P::Elem>>> {
    (0..=max_arity)
        .map(|k| match op.elements(k) {
            Ok(e) => Ok(e),
            Err(Error::NotEnumerable(_)) => Ok(Vec::new()),
            Err(e) => Err(e),
        })
        .collect()
}

fn random_perm<R: Rng>(rng: &mut R, k: usize) -> Permutation {
    let mut images: Vec<usize> = (0..k).collect();
    images.shuffle(rng);
    Permutation::from_images(images).expect("shuffled identity")
}

/// Unit, associativity and both equivariance relations.
///
/// Every composite `γ(a; b_1, .., b_ℓ)` with `ℓ ≤ max_arity` and inner total
/// arity `≤ max_arity` is visited in a fixed order until `budget` is spent;
/// associativity attaches further inner tuples to each visited composite, and
/// the equivariance checks pair it with random permutations drawn from `rng`.
pub fn check_operad_laws<P: SetOperad, R: Rng>(op: &P, max_arity: usize, budget: usize, rng: &mut R) -> Result<Vec<LawReport>> {
    let comps = components(op, max_arity)?;
    let unit = op.unit();
    let mut left = LawReport::new("left unit");
    let mut right = LawReport::new("right unit");
    let mut assoc = LawReport::new("associativity");
    let mut inner_eq = LawReport::new("block-sum equivariance");
    let mut outer_eq = LawReport::new("outer-permutation equivariance");
    for elems in &comps {
        for p in elems {
            let k = op.arity_of(p);
            left.record(op.compose(&unit, std::slice::from_ref(p))? == *p, || op.label(p));
            right.record(op.compose(p, &vec![unit.clone(); k])? == *p, || op.label(p));
        }
    }
    let mut err = None;
    let mut visited = 0;
    for l in 0..=max_arity {
        for a in &comps[l] {
            for_each_tuple(&comps, l, max_arity, &mut |bs: &[P::Elem]| {
                if visited >= budget || err.is_some() {
                    return false;
                }
                visited += 1;
                let step = (|| -> Result<()> {
                    let ab = op.compose(a, bs)?;
                    let sizes: Vec<usize> = bs.iter().map(|b| op.arity_of(b)).collect();
                    let total: usize = sizes.iter().sum();
                    // inner permutations: γ(a; b_i·τ_i) = γ(a; b)·(⊕τ_i)
                    let taus: Vec<Permutation> = sizes.iter().map(|&s| random_perm(rng, s)).collect();
                    let moved: Vec<P::Elem> = bs.iter().zip(&taus).map(|(b, t)| op.act(b, t)).collect();
                    let lhs = op.compose(a, &moved)?;
                    let rhs = op.act(&ab, &Permutation::block_sum(&taus));
                    inner_eq.record(lhs == rhs, || format!("{} with {:?}", op.label(a), taus));
                    // outer permutation: γ(a·σ; b) = γ(a; b_{σ^{-1}(·)})·σ⟨k⟩
                    let sigma = random_perm(rng, l);
                    let inv = sigma.inverse();
                    let reordered: Vec<P::Elem> = (0..l).map(|j| bs[inv.apply(j)].clone()).collect();
                    let lhs = op.compose(&op.act(a, &sigma), bs)?;
                    let rhs = op.act(&op.compose(a, &reordered)?, &Permutation::block_permute(&sigma, &sizes));
                    outer_eq.record(lhs == rhs, || format!("{} with {sigma}", op.label(a)));
                    // associativity against a random inner layer
                    if total <= max_arity {
                        let mut remaining = max_arity - total;
                        let mut cs = Some(Vec::with_capacity(total));
                        for _ in 0..total {
                            let choices: Vec<usize> = (0..=remaining).filter(|&s| !comps[s].is_empty()).collect();
                            match choices.choose(rng) {
                                Some(&s) => {
                                    remaining -= s;
                                    cs.as_mut().expect("set above").push(comps[s].choose(rng).expect("nonempty").clone());
                                }
                                None => cs = None,
                            }
                        }
                        if let Some(cs) = cs {
                            let lhs = op.compose(&ab, &cs)?;
                            let mut offset = 0;
                            let mut inner = Vec::with_capacity(l);
                            for (b, &s) in bs.iter().zip(&sizes) {
                                inner.push(op.compose(b, &cs[offset..offset + s])?);
                                offset += s;
                            }
                            let rhs = op.compose(a, &inner)?;
                            assoc.record(lhs == rhs, || format!("{} over {} inner operations", op.label(a), l));
                        }
                    }
                    Ok(())
                })();
                if let Err(e) = step {
                    err = Some(e);
                    return false;
                }
                true
            });
            if let Some(e) = err.take() {
                return Err(e);
            }
        }
    }
    Ok(vec![left, right, assoc, inner_eq, outer_eq])
}

fn all_homs<P: SetOperad>(op: &P, max_size: usize) -> Result<Vec<Vec<Vec<FpHom<P::Elem>>>>> {
    (0..=max_size)
        .map(|a| (0..=max_size).map(|b| hom_set(op, a, b)).collect())
        .collect()
}

/// Category laws of `F(P)`: units exhaustively over sets of size
/// `≤ unit_size`, associativity exhaustively over size `≤ assoc_size`, then
/// `samples` random triples over sizes `≤ unit_size`.
pub fn check_hom_category_laws<P: SetOperad, R: Rng>(
    op: &P,
    unit_size: usize,
    assoc_size: usize,
    samples: usize,
    rng: &mut R,
) -> Result<Vec<LawReport>> {
    let homs = all_homs(op, unit_size.max(assoc_size))?;
    let mut units = LawReport::new("hom unit");
    let mut exhaustive = LawReport::new("hom associativity (exhaustive)");
    let mut sampled = LawReport::new("hom associativity (sampled)");
    for a in 0..=unit_size {
        for b in 0..=unit_size {
            for h in &homs[a][b] {
                let l = compose_homs(op, &FpHom::identity(op, a), h)?;
                let r = compose_homs(op, h, &FpHom::identity(op, b))?;
                units.record(&l == h && &r == h, || format!("{h:?}"));
            }
        }
    }
    let check = |h1: &FpHom<P::Elem>, h2: &FpHom<P::Elem>, h3: &FpHom<P::Elem>| -> Result<bool> {
        let lhs = compose_homs(op, &compose_homs(op, h1, h2)?, h3)?;
        let rhs = compose_homs(op, h1, &compose_homs(op, h2, h3)?)?;
        Ok(lhs == rhs)
    };
    for a in 0..=assoc_size {
        for b in 0..=assoc_size {
            for c in 0..=assoc_size {
                for d in 0..=assoc_size {
                    for h1 in &homs[a][b] {
                        for h2 in &homs[b][c] {
                            for h3 in &homs[c][d] {
                                let ok = check(h1, h2, h3)?;
                                exhaustive.record(ok, || format!("{h1:?} ; {h2:?} ; {h3:?}"));
                            }
                        }
                    }
                }
            }
        }
    }
    let sizes: Vec<usize> = (0..=unit_size).collect();
    for _ in 0..samples {
        let pick = |rng: &mut R| *sizes.choose(rng).expect("nonempty");
        let (a, b, c, d) = (pick(rng), pick(rng), pick(rng), pick(rng));
        let (Some(h1), Some(h2), Some(h3)) = (homs[a][b].choose(rng), homs[b][c].choose(rng), homs[c][d].choose(rng)) else {
            continue;
        };
        let ok = check(h1, h2, h3)?;
        sampled.record(ok, || format!("{h1:?} ; {h2:?} ; {h3:?}"));
    }
    Ok(vec![units, exhaustive, sampled])
}
