//! Right modules, i.e. presheaves on `F(P)`: a module element `m` of arity
//! `k` and a hom `h: X → {0..k-1}` give `m·h` of arity `|X|`.
//!
//! All modules are truncated at a maximal arity so that their underlying
//! symmetric sequences are finite.

use std::collections::BTreeMap;

use super::fp::{compose_homs, hom_set, FpHom};
use super::laws::LawReport;
use super::{OperadMap, SetOperad};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::symseq::{
    canonical_composite, composite_label, composite_product_upto, CompositeRep, ElemSource, FinSymSeq, Product, SeqElem,
};

pub trait RightModule {
    type Op: SetOperad;

    fn operad(&self) -> &Self::Op;

    fn seq(&self) -> &FinSymSeq;

    fn max_arity(&self) -> usize;

    fn act_hom(&self, m: SeqElem, h: &FpHom<<Self::Op as ElemSource>::Elem>) -> Result<SeqElem>;
}

fn check_hom_shape<E>(m: SeqElem, h: &FpHom<E>, max_arity: usize) -> Result<()> {
    if h.target != m.arity {
        return Err(Error::ArityMismatch {
            expected: m.arity,
            found: h.target,
        });
    }
    if h.source > max_arity {
        return Err(Error::TooLarge {
            arity: h.source,
            limit: max_arity,
        });
    }
    Ok(())
}

/// A finite family of elements per arity with a lookup table; the symmetric
/// action is recovered from the hom action along bijections.
struct Tabulated<E> {
    seq: FinSymSeq,
    elems: BTreeMap<usize, Vec<E>>,
    lookup: BTreeMap<usize, BTreeMap<E, usize>>,
}

impl<E: Clone + Ord> Tabulated<E> {
    fn build<A, L>(elems: BTreeMap<usize, Vec<E>>, act: A, label: L) -> Result<Self>
    where
        A: Fn(&E, &Permutation) -> Result<E>,
        L: Fn(&E) -> String,
    {
        let mut seq = FinSymSeq::empty();
        let mut lookup = BTreeMap::new();
        for (&k, es) in &elems {
            let index: BTreeMap<E, usize> = es.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
            let mut gens = Vec::new();
            for j in 0..k.saturating_sub(1) {
                let s = Permutation::adjacent(k, j);
                gens.push(
                    es.iter()
                        .map(|e| {
                            let moved = act(e, &s)?;
                            index
                                .get(&moved)
                                .copied()
                                .ok_or_else(|| Error::InvalidSequence(format!("arity {k}: action leaves the component")))
                        })
                        .collect::<Result<Vec<_>>>()?,
                );
            }
            seq.set_component(k, es.iter().map(&label).collect(), gens)?;
            lookup.insert(k, index);
        }
        Ok(Tabulated { seq, elems, lookup })
    }

    fn get(&self, e: SeqElem) -> &E {
        &self.elems[&e.arity][e.index]
    }

    fn find(&self, k: usize, e: &E) -> Result<SeqElem> {
        self.lookup
            .get(&k)
            .and_then(|l| l.get(e))
            .map(|&index| SeqElem { arity: k, index })
            .ok_or_else(|| Error::InvalidSequence(format!("result not found in arity {k}")))
    }
}

/// An operad as a right module over itself: `m·h = γ(m; p_0, .., p_{k-1})·τ_h`.
pub struct SelfModule<'a, P: SetOperad> {
    op: &'a P,
    max_arity: usize,
    table: Tabulated<P::Elem>,
}

impl<'a, P: SetOperad> SelfModule<'a, P> {
    pub fn new(op: &'a P, max_arity: usize) -> Result<Self> {
        let mut elems = BTreeMap::new();
        for k in 0..=max_arity {
            let es = op.elements(k)?;
            if !es.is_empty() {
                elems.insert(k, es);
            }
        }
        let table = Tabulated::build(elems, |e, s| Ok(op.act(e, s)), |e| op.label(e))?;
        Ok(SelfModule { op, max_arity, table })
    }

    pub fn element(&self, e: SeqElem) -> &P::Elem {
        self.table.get(e)
    }

    pub fn find(&self, e: &P::Elem) -> Result<SeqElem> {
        self.table.find(self.op.arity_of(e), e)
    }
}

impl<P: SetOperad> RightModule for SelfModule<'_, P> {
    type Op = P;

    fn operad(&self) -> &P {
        self.op
    }

    fn seq(&self) -> &FinSymSeq {
        &self.table.seq
    }

    fn max_arity(&self) -> usize {
        self.max_arity
    }

    fn act_hom(&self, m: SeqElem, h: &FpHom<P::Elem>) -> Result<SeqElem> {
        check_hom_shape(m, h, self.max_arity)?;
        let c = self.op.compose(self.table.get(m), &h.labels)?;
        let r = self.op.act(&c, &h.gather_permutation());
        self.table.find(h.source, &r)
    }
}

/// The representable module `F(P)(−, Y)` with `|Y| = target`, acting by
/// precomposition.
pub struct HomModule<'a, P: SetOperad> {
    op: &'a P,
    target: usize,
    max_arity: usize,
    table: Tabulated<FpHom<P::Elem>>,
}

impl<'a, P: SetOperad> HomModule<'a, P> {
    pub fn new(op: &'a P, target: usize, max_arity: usize) -> Result<Self> {
        let mut elems = BTreeMap::new();
        for n in 0..=max_arity {
            let mut hs = hom_set(op, n, target)?;
            hs.sort();
            if !hs.is_empty() {
                elems.insert(n, hs);
            }
        }
        let table = Tabulated::build(
            elems,
            |g, s| compose_homs(op, &FpHom::from_permutation(op, s), g),
            |g| {
                let labels: Vec<String> = g.labels.iter().map(|e| op.label(e)).collect();
                format!("{:?}|{}", g.f, labels.join(","))
            },
        )?;
        Ok(HomModule {
            op,
            target,
            max_arity,
            table,
        })
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn hom(&self, e: SeqElem) -> &FpHom<P::Elem> {
        self.table.get(e)
    }

    pub fn find(&self, g: &FpHom<P::Elem>) -> Result<SeqElem> {
        self.table.find(g.source, g)
    }
}

impl<P: SetOperad> RightModule for HomModule<'_, P> {
    type Op = P;

    fn operad(&self) -> &P {
        self.op
    }

    fn seq(&self) -> &FinSymSeq {
        &self.table.seq
    }

    fn max_arity(&self) -> usize {
        self.max_arity
    }

    fn act_hom(&self, m: SeqElem, h: &FpHom<P::Elem>) -> Result<SeqElem> {
        check_hom_shape(m, h, self.max_arity)?;
        let g = compose_homs(self.op, h, self.table.get(m))?;
        self.table.find(h.source, &g)
    }
}

/// The free module `X ∘ P`, truncated at `max_arity`.
pub struct FreeModule<'a, P: SetOperad> {
    op: &'a P,
    generators: FinSymSeq,
    max_arity: usize,
    product: Product<CompositeRep<P::Elem>>,
}

impl<'a, P: SetOperad> FreeModule<'a, P> {
    pub fn new(op: &'a P, generators: &FinSymSeq, max_arity: usize) -> Result<Self> {
        let product = composite_product_upto(generators, op, max_arity)?;
        Ok(FreeModule {
            op,
            generators: generators.clone(),
            max_arity,
            product,
        })
    }

    pub fn generators(&self) -> &FinSymSeq {
        &self.generators
    }

    pub fn rep(&self, m: SeqElem) -> &CompositeRep<P::Elem> {
        self.product.rep(m)
    }

    /// The class of an arbitrary representative.
    pub fn find(&self, rep: &CompositeRep<P::Elem>) -> Result<SeqElem> {
        let c = canonical_composite(&self.generators, self.op, rep)?;
        self.product
            .find(c.tau.arity(), &c)
            .ok_or_else(|| Error::TooLarge {
                arity: c.tau.arity(),
                limit: self.max_arity,
            })
    }

    pub fn label(&self, m: SeqElem) -> String {
        composite_label(&self.generators, self.op, self.rep(m))
    }
}

impl<P: SetOperad> RightModule for FreeModule<'_, P> {
    type Op = P;

    fn operad(&self) -> &P {
        self.op
    }

    fn seq(&self) -> &FinSymSeq {
        &self.product.seq
    }

    fn max_arity(&self) -> usize {
        self.max_arity
    }

    /// `(x; p; ρ)·h = (x; p_i(z_{block i}); ρ⟨q⟩ ∘ τ_h)` with
    /// `z_j = q_{ρ^{-1}(j)}`: the labels of `h` are fed to the inputs of the
    /// `p_i` in composite order.
    fn act_hom(&self, m: SeqElem, h: &FpHom<P::Elem>) -> Result<SeqElem> {
        check_hom_shape(m, h, self.max_arity)?;
        let rep = self.product.rep(m);
        let inv = rep.tau.inverse();
        let z: Vec<P::Elem> = (0..m.arity).map(|j| h.labels[inv.apply(j)].clone()).collect();
        let mut offset = 0;
        let mut inners = Vec::with_capacity(rep.inners.len());
        for p in &rep.inners {
            let a = self.op.arity_of(p);
            inners.push(self.op.compose(p, &z[offset..offset + a])?);
            offset += a;
        }
        let beta = Permutation::block_permute(&rep.tau, &h.fibre_sizes());
        let moved = CompositeRep {
            outer: rep.outer,
            inners,
            tau: beta.compose(&h.gather_permutation()),
        };
        self.find(&moved)
    }
}

/// Restriction of a `Q`-module along an operad map `P → Q`.
pub struct Restricted<'a, 'b, M: RightModule, P: SetOperad> {
    base: &'a M,
    phi: &'a OperadMap<'b, P, M::Op>,
}

impl<'a, 'b, M: RightModule, P: SetOperad> Restricted<'a, 'b, M, P> {
    /// Validates `phi` on arities up to the module truncation first.
    pub fn new(base: &'a M, phi: &'a OperadMap<'b, P, M::Op>, budget: usize) -> Result<Self> {
        phi.validate(base.max_arity(), budget)?;
        Ok(Restricted { base, phi })
    }
}

impl<M: RightModule, P: SetOperad> RightModule for Restricted<'_, '_, M, P> {
    type Op = P;

    fn operad(&self) -> &P {
        self.phi.source
    }

    fn seq(&self) -> &FinSymSeq {
        self.base.seq()
    }

    fn max_arity(&self) -> usize {
        self.base.max_arity()
    }

    fn act_hom(&self, m: SeqElem, h: &FpHom<P::Elem>) -> Result<SeqElem> {
        let mapped = FpHom {
            source: h.source,
            target: h.target,
            f: h.f.clone(),
            labels: h.labels.iter().map(|e| self.phi.apply(e)).collect(),
        };
        self.base.act_hom(m, &mapped)
    }
}

/// Identity, agreement with the symmetric action, and functoriality
/// `(m·h2)·h = m·(h then h2)` over homs between sets of size `≤ max_size`,
/// enumerated in a fixed order and cut off after `budget` cases per law.
pub fn check_module_laws<M: RightModule>(module: &M, max_size: usize, budget: usize) -> Result<Vec<LawReport>> {
    let op = module.operad();
    let seq = module.seq();
    let top = max_size.min(module.max_arity());
    let mut identity = LawReport::new("module identity");
    let mut symmetric = LawReport::new("module symmetric action");
    let mut functorial = LawReport::new("module functoriality");
    let mut homs: BTreeMap<(usize, usize), Vec<FpHom<<M::Op as ElemSource>::Elem>>> = BTreeMap::new();
    for a in 0..=top {
        for b in 0..=top {
            homs.insert((a, b), hom_set(op, a, b)?);
        }
    }
    for k in seq.arities().filter(|&k| k <= top).collect::<Vec<_>>() {
        for index in 0..seq.len(k) {
            let m = SeqElem { arity: k, index };
            let fixed = module.act_hom(m, &FpHom::identity(op, k))?;
            identity.record(fixed == m, || format!("arity {k} element {index}"));
            for j in 0..k.saturating_sub(1) {
                let s = Permutation::adjacent(k, j);
                let via_hom = module.act_hom(m, &FpHom::from_permutation(op, &s))?;
                let expected = SeqElem {
                    arity: k,
                    index: seq.act_adjacent(k, index, j),
                };
                symmetric.record(via_hom == expected, || format!("arity {k} element {index}, s_{j}"));
            }
        }
    }
    'outer: for k in seq.arities().filter(|&k| k <= top).collect::<Vec<_>>() {
        for index in 0..seq.len(k) {
            let m = SeqElem { arity: k, index };
            for y in 0..=top {
                for h2 in &homs[&(y, k)] {
                    let m2 = module.act_hom(m, h2)?;
                    for x in 0..=top {
                        for h in &homs[&(x, y)] {
                            if functorial.checked >= budget {
                                break 'outer;
                            }
                            let lhs = module.act_hom(m2, h)?;
                            let rhs = module.act_hom(m, &compose_homs(op, h, h2)?)?;
                            functorial.record(lhs == rhs, || format!("arity {k} element {index}, {h:?} then {h2:?}"));
                        }
                    }
                }
            }
        }
    }
    Ok(vec![identity, symmetric, functorial])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::{and_operad, Endomorphism, Initial, Terminal};
    use crate::symseq::{check_equivariant_bijection, UnitSeq};

    fn all_pass(reports: &[LawReport]) -> bool {
        reports.iter().all(|r| r.failures == 0 && r.checked > 0)
    }

    #[test]
    fn free_module_on_unit_is_the_operad() {
        let end = Endomorphism::new(2).unwrap();
        let j = UnitSeq::J.to_seq();
        let free = FreeModule::new(&end, &j, 2).unwrap();
        let own = SelfModule::new(&end, 2).unwrap();
        let res = check_equivariant_bijection(own.seq(), free.seq(), |e| {
            let rep = CompositeRep {
                outer: 0,
                inners: vec![own.element(e).clone()],
                tau: Permutation::identity(e.arity),
            };
            free.find(&rep).ok()
        });
        assert_eq!(res, Ok(()));
        // the bijection intertwines the hom actions
        for h in hom_set(&end, 2, 2).unwrap() {
            for index in 0..own.seq().len(2) {
                let e = SeqElem { arity: 2, index };
                let image = |x: SeqElem| {
                    free.find(&CompositeRep {
                        outer: 0,
                        inners: vec![own.element(x).clone()],
                        tau: Permutation::identity(x.arity),
                    })
                    .unwrap()
                };
                assert_eq!(image(own.act_hom(e, &h).unwrap()), free.act_hom(image(e), &h).unwrap());
            }
        }
    }

    #[test]
    fn module_laws_hold_for_builtin_modules() {
        let end = Endomorphism::new(2).unwrap();
        let mut x = FinSymSeq::free_orbit(2);
        x.add_orbit_trivial(1, "u");
        let free = FreeModule::new(&end, &x, 2).unwrap();
        assert!(all_pass(&check_module_laws(&free, 2, 5_000).unwrap()));
        let own = SelfModule::new(&end, 2).unwrap();
        assert!(all_pass(&check_module_laws(&own, 2, 5_000).unwrap()));
        let yoneda = HomModule::new(&Terminal, 2, 3).unwrap();
        assert!(all_pass(&check_module_laws(&yoneda, 3, 5_000).unwrap()));
    }

    #[test]
    fn empty_generators_give_zero_module() {
        let free = FreeModule::new(&Terminal, &FinSymSeq::empty(), 4).unwrap();
        assert!(free.seq().is_empty());
    }

    #[test]
    fn restriction_along_identity_changes_nothing() {
        let end = Endomorphism::new(2).unwrap();
        let own = SelfModule::new(&end, 2).unwrap();
        let id = OperadMap::new(&end, &end, |e| e.clone());
        let res = Restricted::new(&own, &id, 10_000).unwrap();
        for h in hom_set(&end, 1, 2).unwrap() {
            for index in 0..own.seq().len(2) {
                let m = SeqElem { arity: 2, index };
                assert_eq!(res.act_hom(m, &h).unwrap(), own.act_hom(m, &h).unwrap());
            }
        }
    }

    #[test]
    fn restriction_to_the_initial_operad_keeps_the_sequence() {
        let end = Endomorphism::new(2).unwrap();
        let own = SelfModule::new(&end, 2).unwrap();
        let inc = OperadMap::new(&Initial, &end, |_| end.unit());
        let res = Restricted::new(&own, &inc, 10_000).unwrap();
        assert_eq!(res.seq(), own.seq());
        for k in 0..=2 {
            for index in 0..own.seq().len(k) {
                let m = SeqElem { arity: k, index };
                for sigma in Permutation::all(k) {
                    let h = FpHom::from_permutation(&Initial, &sigma);
                    let expected = SeqElem {
                        arity: k,
                        index: own.seq().act_index(k, index, &sigma),
                    };
                    assert_eq!(res.act_hom(m, &h).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn restricted_yoneda_matches_hom_composition() {
        let end = Endomorphism::new(2).unwrap();
        let and = and_operad();
        let yoneda = HomModule::new(&end, 1, 2).unwrap();
        let inc = OperadMap::new(&and, &end, |e| e.clone());
        let res = Restricted::new(&yoneda, &inc, 10_000).unwrap();
        for n in 0..=2 {
            for h in hom_set(&and, n, 2).unwrap() {
                for index in 0..yoneda.seq().len(2) {
                    let m = SeqElem { arity: 2, index };
                    let g = yoneda.hom(m);
                    let lifted = FpHom {
                        source: h.source,
                        target: h.target,
                        f: h.f.clone(),
                        labels: h.labels.clone(),
                    };
                    let direct = compose_homs(&end, &lifted, g).unwrap();
                    assert_eq!(yoneda.hom(res.act_hom(m, &h).unwrap()), &direct);
                }
            }
        }
        assert!(all_pass(&check_module_laws(&res, 2, 5_000).unwrap()));
    }

    #[test]
    fn invalid_maps_are_rejected() {
        let end = Endomorphism::new(2).unwrap();
        let own = SelfModule::new(&end, 2).unwrap();
        let not = end.from_fn(1, |a| 1 - a[0]);
        let bad = OperadMap::new(&end, &end, move |e: &crate::operad::EndElem| {
            if e.arity == 1 {
                not.clone()
            } else {
                e.clone()
            }
        });
        assert!(matches!(Restricted::new(&own, &bad, 10_000), Err(Error::NotOperadMap(_))));
    }
}
