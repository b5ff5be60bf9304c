//! Boardman–Vogt tensor products, evaluated in a target operad.
//!
//! `P ⊗ Q` is never built as a quotient. Given operad maps `P → T` and
//! `Q → T` whose images interchange, `p ⊗ q` is the common value
//! `γ(p; q, .., q) = γ(q; p, .., p)·τ_{k,l}` in `T`.

use super::fp::FpHom;
use super::module::{FreeModule, RightModule};
use super::{OperadMap, SetOperad};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::symseq::{matrix_tensor, FinSymSeq, GridRep, Product, SeqElem};

/// `γ(p; q, .., q)`.
pub fn bv_element<T: SetOperad>(target: &T, p: &T::Elem, q: &T::Elem) -> Result<T::Elem> {
    let k = target.arity_of(p);
    target.compose(p, &vec![q.clone(); k])
}

/// Checks `γ(p; q, .., q) = γ(q; p, .., p)·τ_{k,l}` in the target.
pub fn check_interchange<T: SetOperad>(target: &T, p: &T::Elem, q: &T::Elem) -> Result<()> {
    let (k, l) = (target.arity_of(p), target.arity_of(q));
    let lhs = target.compose(p, &vec![q.clone(); k])?;
    let rhs = target.act(&target.compose(q, &vec![p.clone(); l])?, &Permutation::transpose(k, l));
    if lhs != rhs {
        return Err(Error::InterchangeViolation {
            p: target.label(p),
            q: target.label(q),
        });
    }
    Ok(())
}

/// Interchange of all enumerable images up to `max_arity`.
pub fn check_interchange_all<P: SetOperad, Q: SetOperad, T: SetOperad>(
    eval_p: &OperadMap<'_, P, T>,
    eval_q: &OperadMap<'_, Q, T>,
    max_arity: usize,
) -> Result<usize> {
    let mut checked = 0;
    let ps: Vec<Vec<P::Elem>> = (0..=max_arity).map(|k| eval_p.source.elements(k).unwrap_or_default()).collect();
    let qs: Vec<Vec<Q::Elem>> = (0..=max_arity).map(|k| eval_q.source.elements(k).unwrap_or_default()).collect();
    for pk in &ps {
        for p in pk {
            let pi = eval_p.apply(p);
            for ql in &qs {
                for q in ql {
                    check_interchange(eval_p.target, &pi, &eval_q.apply(q)).map_err(|_| Error::InterchangeViolation {
                        p: eval_p.source.label(p),
                        q: eval_q.source.label(q),
                    })?;
                    checked += 1;
                }
            }
        }
    }
    Ok(checked)
}

/// `μ(h_1, h_2)`: the product function on lexicographically ordered pairs,
/// labelled at `(y, y')` by `eval_P(p_y) ⊗ eval_Q(q_{y'})`.
pub fn mu_on_homs<P: SetOperad, Q: SetOperad, T: SetOperad>(
    eval_p: &OperadMap<'_, P, T>,
    eval_q: &OperadMap<'_, Q, T>,
    h1: &FpHom<P::Elem>,
    h2: &FpHom<Q::Elem>,
) -> Result<FpHom<T::Elem>> {
    let target = eval_p.target;
    let mut f = Vec::with_capacity(h1.source * h2.source);
    for &a in &h1.f {
        for &b in &h2.f {
            f.push(a * h2.target + b);
        }
    }
    let mut labels = Vec::with_capacity(h1.target * h2.target);
    for p in &h1.labels {
        let pi = eval_p.apply(p);
        for q in &h2.labels {
            let qi = eval_q.apply(q);
            check_interchange(target, &pi, &qi)?;
            labels.push(bv_element(target, &pi, &qi)?);
        }
    }
    Ok(FpHom {
        source: h1.source * h2.source,
        target: h1.target * h2.target,
        f,
        labels,
    })
}

/// The free module `(X □ Y) ∘ T` on which `F(P) × F(Q)` acts through
/// [`mu_on_homs`].
pub struct BvFreeModule<'a, T: SetOperad> {
    pub module: FreeModule<'a, T>,
    pub grid: Product<GridRep>,
}

impl<'a, T: SetOperad> BvFreeModule<'a, T> {
    pub fn seq(&self) -> &FinSymSeq {
        self.module.seq()
    }

    pub fn act_pair<P: SetOperad, Q: SetOperad>(
        &self,
        eval_p: &OperadMap<'_, P, T>,
        eval_q: &OperadMap<'_, Q, T>,
        m: SeqElem,
        h1: &FpHom<P::Elem>,
        h2: &FpHom<Q::Elem>,
    ) -> Result<SeqElem> {
        self.module.act_hom(m, &mu_on_homs(eval_p, eval_q, h1, h2)?)
    }
}

/// Validates both evaluation maps and their interchange on arities
/// `≤ max_arity`, then builds the free module on `X □ Y` truncated there.
pub fn free_module_bv_tensor<'a, P: SetOperad, Q: SetOperad, T: SetOperad>(
    eval_p: &OperadMap<'a, P, T>,
    x: &FinSymSeq,
    eval_q: &OperadMap<'a, Q, T>,
    y: &FinSymSeq,
    max_arity: usize,
    budget: usize,
) -> Result<BvFreeModule<'a, T>> {
    eval_p.validate(max_arity, budget)?;
    eval_q.validate(max_arity, budget)?;
    check_interchange_all(eval_p, eval_q, max_arity)?;
    let grid = matrix_tensor(x, y)?;
    let module = FreeModule::new(eval_p.target, &grid.seq, max_arity)?;
    Ok(BvFreeModule { module, grid })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::{and_operad, hom_set, or_operad, xor_operad, EndElem, Endomorphism, Terminal};
    use crate::symseq::{composition_product, ElemSource, UnitSeq};

    /// `End({0,1}²)` with `(a, b) ↦ 2a + b`.
    fn pairs() -> Endomorphism {
        Endomorphism::new(4).unwrap()
    }

    fn dual(end: &Endomorphism, f: &EndElem) -> EndElem {
        end.from_fn(f.arity, |a| 1 - end.eval(f, &a.iter().map(|x| 1 - x).collect::<Vec<_>>()))
    }

    /// `(a, b) ↦ (f(a), g(b))` coordinatewise.
    fn coordinatewise(end2: &Endomorphism, end4: &Endomorphism, f: &EndElem, g: &EndElem) -> EndElem {
        end4.from_fn(f.arity, |a| {
            let hi: Vec<usize> = a.iter().map(|x| x >> 1).collect();
            let lo: Vec<usize> = a.iter().map(|x| x & 1).collect();
            2 * end2.eval(f, &hi) + end2.eval(g, &lo)
        })
    }

    #[test]
    fn and_or_into_pairs() {
        let end2 = Endomorphism::new(2).unwrap();
        let end4 = pairs();
        let (and, or) = (and_operad(), or_operad());
        let ep = OperadMap::new(&and, &end4, |f: &EndElem| coordinatewise(&end2, &end4, f, &dual(&end2, f)));
        let eq = OperadMap::new(&or, &end4, |g: &EndElem| coordinatewise(&end2, &end4, &dual(&end2, g), g));
        ep.validate(3, 1000).unwrap();
        eq.validate(3, 1000).unwrap();
        let and2 = and.elements(2).unwrap().remove(0);
        let or2 = or.elements(2).unwrap().remove(0);
        let h1 = FpHom::new(&and, 2, 1, vec![0, 0], vec![and2.clone()]).unwrap();
        let h2 = FpHom::new(&or, 2, 1, vec![0, 0], vec![or2.clone()]).unwrap();
        let mu = mu_on_homs(&ep, &eq, &h1, &h2).unwrap();
        assert_eq!(mu.f, vec![0, 0, 0, 0]);
        let and4 = end2.from_fn(4, |a| a.iter().product());
        let or4 = end2.from_fn(4, |a| usize::from(a.contains(&1)));
        assert_eq!(mu.labels[0], coordinatewise(&end2, &end4, &and4, &or4));
    }

    #[test]
    fn full_endomorphisms_do_not_interchange() {
        let end = Endomorphism::new(2).unwrap();
        let and2 = end.from_fn(2, |a| a[0] & a[1]);
        let or2 = end.from_fn(2, |a| a[0] | a[1]);
        assert!(matches!(check_interchange(&end, &and2, &or2), Err(Error::InterchangeViolation { .. })));
        assert!(check_interchange(&end, &and2, &and2).is_ok());
        let id = OperadMap::new(&end, &end, |e: &EndElem| e.clone());
        let h1 = FpHom::new(&end, 2, 1, vec![0, 0], vec![and2]).unwrap();
        let h2 = FpHom::new(&end, 2, 1, vec![0, 0], vec![or2]).unwrap();
        assert!(mu_on_homs(&id, &id, &h1, &h2).is_err());
    }

    #[test]
    fn identity_homs_give_identity() {
        let end = Endomorphism::new(2).unwrap();
        let xor = xor_operad();
        let inc = OperadMap::new(&xor, &end, |e: &EndElem| e.clone());
        let mu = mu_on_homs(&inc, &inc, &FpHom::identity(&xor, 2), &FpHom::identity(&xor, 3)).unwrap();
        assert_eq!(mu, FpHom::identity(&end, 6));
    }

    #[test]
    fn units_recover_the_target() {
        let j = UnitSeq::J.to_seq();
        let t = Terminal;
        let id = OperadMap::new(&t, &t, |e: &usize| *e);
        let m = free_module_bv_tensor(&id, &j, &id, &j, 4, 1000).unwrap();
        for k in 0..=4 {
            assert_eq!(m.seq().len(k), 1);
        }
    }

    #[test]
    fn free_orbits_give_the_product_orbit() {
        let t = Terminal;
        let id = OperadMap::new(&t, &t, |e: &usize| *e);
        let s2 = FinSymSeq::free_orbit(2);
        let m = free_module_bv_tensor(&id, &s2, &id, &s2, 5, 1000).unwrap();
        let direct = crate::symseq::composite_product_upto(&FinSymSeq::free_orbit(4), &t, 5).unwrap();
        for k in 0..=5 {
            assert_eq!(m.seq().len(k), direct.seq.len(k), "arity {k}");
        }
        // without truncation the generators alone match ∘ with the unit
        let c = composition_product(&m.grid.seq, &UnitSeq::J.to_seq()).unwrap();
        assert_eq!(c.seq.len(4), 24);
    }

    #[test]
    fn pair_action_is_functorial() {
        let end = Endomorphism::new(2).unwrap();
        let and = and_operad();
        let inc = OperadMap::new(&and, &end, |e: &EndElem| e.clone());
        let x = FinSymSeq::point(1, "x");
        let m = free_module_bv_tensor(&inc, &x, &inc, &x, 2, 1000).unwrap();
        let gen = SeqElem { arity: 1, index: 0 };
        for h1 in hom_set(&and, 1, 1).unwrap() {
            for h2 in hom_set(&and, 2, 1).unwrap() {
                let r = m.act_pair(&inc, &inc, gen, &h1, &h2).unwrap();
                assert_eq!(r.arity, 2);
            }
        }
    }
}
