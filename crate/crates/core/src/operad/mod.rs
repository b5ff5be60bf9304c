//! Operads in finite sets.
//!
//! An operad here is anything that can compose and act on its elements; the
//! components need not all be enumerable (endomorphism operads grow doubly
//! exponentially), so [`ElemSource::elements`] may fail with
//! [`Error::NotEnumerable`].

mod bv;
mod fp;
mod laws;
mod module;
mod spec;

pub use bv::{bv_element, check_interchange, check_interchange_all, free_module_bv_tensor, mu_on_homs, BvFreeModule};
pub use fp::{compose_homs, hom_set, FpHom};
pub use laws::{check_hom_category_laws, check_operad_laws, LawReport};
pub use module::{check_module_laws, FreeModule, HomModule, Restricted, RightModule, SelfModule};
pub use spec::{load_operad, AnyOperad, Builtin, ComposeEntry, OperadSpec, TableJson, TableOperad};

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::symseq::ElemSource;

/// Components with more elements than this are not enumerated.
pub const ELEMENT_LIMIT: usize = 1 << 16;

pub trait SetOperad: ElemSource {
    fn unit(&self) -> Self::Elem;

    /// `p(p_1, .., p_ℓ)`.
    fn compose(&self, outer: &Self::Elem, inners: &[Self::Elem]) -> Result<Self::Elem>;

    fn name(&self) -> String;
}

/// `p(p_1, .., p_ℓ)·τ`.
pub fn compose_act<P: SetOperad>(op: &P, outer: &P::Elem, inners: &[P::Elem], tau: &Permutation) -> Result<P::Elem> {
    let c = op.compose(outer, inners)?;
    Ok(op.act(&c, tau))
}

fn check_arity<P: ElemSource + ?Sized>(op: &P, outer: &P::Elem, inners: &[P::Elem]) -> Result<()> {
    let k = op.arity_of(outer);
    if k != inners.len() {
        return Err(Error::ArityMismatch {
            expected: k,
            found: inners.len(),
        });
    }
    Ok(())
}

/// The operad with exactly one element in every arity.
#[derive(Clone, Copy, Debug, Default)]
pub struct Terminal;

impl ElemSource for Terminal {
    type Elem = usize;

    fn arity_of(&self, e: &usize) -> usize {
        *e
    }

    fn act(&self, e: &usize, _: &Permutation) -> usize {
        *e
    }

    fn elements(&self, k: usize) -> Result<Vec<usize>> {
        Ok(vec![k])
    }

    fn top_arity(&self) -> Option<usize> {
        None
    }

    fn label(&self, e: &usize) -> String {
        format!("*{e}")
    }
}

impl SetOperad for Terminal {
    fn unit(&self) -> usize {
        1
    }

    fn compose(&self, outer: &usize, inners: &[usize]) -> Result<usize> {
        check_arity(self, outer, inners)?;
        Ok(inners.iter().sum())
    }

    fn name(&self) -> String {
        "terminal".into()
    }
}

/// The initial operad: only the unit, in arity 1.
#[derive(Clone, Copy, Debug, Default)]
pub struct Initial;

impl ElemSource for Initial {
    type Elem = ();

    fn arity_of(&self, _: &()) -> usize {
        1
    }

    fn act(&self, _: &(), _: &Permutation) {}

    fn elements(&self, k: usize) -> Result<Vec<()>> {
        Ok(if k == 1 { vec![()] } else { Vec::new() })
    }

    fn top_arity(&self) -> Option<usize> {
        Some(1)
    }

    fn label(&self, _: &()) -> String {
        "J".into()
    }
}

impl SetOperad for Initial {
    fn unit(&self) {}

    fn compose(&self, _: &(), inners: &[()]) -> Result<()> {
        if inners.len() != 1 {
            return Err(Error::ArityMismatch {
                expected: 1,
                found: inners.len(),
            });
        }
        Ok(())
    }

    fn name(&self) -> String {
        "initial".into()
    }
}

/// A function `S^k → S` on `S = {0, .., n-1}` as a value table; the tuple
/// `(a_1, .., a_k)` sits at index `a_1 n^{k-1} + .. + a_k`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EndElem {
    pub arity: usize,
    pub table: Vec<u8>,
}

impl fmt::Debug for EndElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.arity)?;
        for v in &self.table {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn decode_tuple(mut index: usize, n: usize, k: usize, out: &mut [usize]) {
    for slot in out[..k].iter_mut().rev() {
        *slot = index % n;
        index /= n;
    }
}

fn encode_tuple(a: &[usize], n: usize) -> usize {
    a.iter().fold(0, |acc, &x| acc * n + x)
}

/// The endomorphism operad of an `n`-element set.
#[derive(Clone, Copy, Debug)]
pub struct Endomorphism {
    n: usize,
}

impl Endomorphism {
    pub fn new(n: usize) -> Result<Self> {
        if n > 16 {
            return Err(Error::InvalidOperad(format!("endomorphism operad of a {n}-element set is not supported")));
        }
        Ok(Endomorphism { n })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    fn inputs(&self, k: usize) -> Option<usize> {
        self.n.checked_pow(u32::try_from(k).ok()?)
    }

    /// Builds an element from a function on tuples.
    pub fn from_fn<F: FnMut(&[usize]) -> usize>(&self, k: usize, mut f: F) -> EndElem {
        let count = self.inputs(k).expect("table size fits in memory");
        let mut a = vec![0; k];
        let table = (0..count)
            .map(|i| {
                decode_tuple(i, self.n, k, &mut a);
                let v = f(&a);
                assert!(v < self.n, "value {v} outside the set");
                v as u8
            })
            .collect();
        EndElem { arity: k, table }
    }

    pub fn eval(&self, e: &EndElem, a: &[usize]) -> usize {
        e.table[encode_tuple(a, self.n)] as usize
    }

    pub fn component_size(&self, k: usize) -> Option<usize> {
        let inputs = self.inputs(k)?;
        self.n.checked_pow(u32::try_from(inputs).ok()?)
    }
}

impl ElemSource for Endomorphism {
    type Elem = EndElem;

    fn arity_of(&self, e: &EndElem) -> usize {
        e.arity
    }

    /// `(f·σ)(a_1, .., a_k) = f(a_{σ^{-1}(1)}, .., a_{σ^{-1}(k)})`.
    fn act(&self, e: &EndElem, p: &Permutation) -> EndElem {
        let k = e.arity;
        assert_eq!(p.arity(), k);
        let inv = p.inverse();
        let mut a = vec![0; k];
        let mut b = vec![0; k];
        let table = (0..e.table.len())
            .map(|i| {
                decode_tuple(i, self.n, k, &mut a);
                for (slot, bp) in b.iter_mut().enumerate() {
                    *bp = a[inv.apply(slot)];
                }
                e.table[encode_tuple(&b, self.n)]
            })
            .collect();
        EndElem { arity: k, table }
    }

    fn elements(&self, k: usize) -> Result<Vec<EndElem>> {
        let total = self.component_size(k).filter(|&c| c <= ELEMENT_LIMIT).ok_or(Error::NotEnumerable(k))?;
        let inputs = self.inputs(k).expect("bounded by the component size");
        let mut digits = vec![0usize; inputs];
        Ok((0..total)
            .map(|i| {
                decode_tuple(i, self.n, inputs, &mut digits);
                EndElem {
                    arity: k,
                    table: digits.iter().map(|&d| d as u8).collect(),
                }
            })
            .collect())
    }

    fn top_arity(&self) -> Option<usize> {
        None
    }

    fn label(&self, e: &EndElem) -> String {
        format!("{e:?}")
    }
}

impl SetOperad for Endomorphism {
    fn unit(&self) -> EndElem {
        self.from_fn(1, |a| a[0])
    }

    fn compose(&self, outer: &EndElem, inners: &[EndElem]) -> Result<EndElem> {
        check_arity(self, outer, inners)?;
        let k: usize = inners.iter().map(|e| e.arity).sum();
        let mut args = vec![0; inners.len()];
        Ok(self.from_fn(k, |a| {
            let mut offset = 0;
            for (slot, g) in args.iter_mut().zip(inners) {
                *slot = self.eval(g, &a[offset..offset + g.arity]);
                offset += g.arity;
            }
            self.eval(outer, &args)
        }))
    }

    fn name(&self) -> String {
        format!("endomorphism:{}", self.n)
    }
}

/// The associative operad: the element `σ ∈ Σ_k` stands for the product
/// `μ_k·σ`, which multiplies its inputs in the order `σ^{-1}(1), .., σ^{-1}(k)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Associative;

impl ElemSource for Associative {
    type Elem = Permutation;

    fn arity_of(&self, e: &Permutation) -> usize {
        e.arity()
    }

    fn act(&self, e: &Permutation, p: &Permutation) -> Permutation {
        e.compose(p)
    }

    fn elements(&self, k: usize) -> Result<Vec<Permutation>> {
        if (1..=k).try_fold(1usize, |acc, i| acc.checked_mul(i)).is_none_or(|c| c > ELEMENT_LIMIT) {
            return Err(Error::NotEnumerable(k));
        }
        Ok(Permutation::all(k))
    }

    fn top_arity(&self) -> Option<usize> {
        None
    }

    fn label(&self, e: &Permutation) -> String {
        format!("mu{e}")
    }
}

impl SetOperad for Associative {
    fn unit(&self) -> Permutation {
        Permutation::identity(1)
    }

    fn compose(&self, outer: &Permutation, inners: &[Permutation]) -> Result<Permutation> {
        check_arity(self, outer, inners)?;
        // γ(μ·σ; μ·τ_i) = μ·((⊕_j τ_{σ^{-1}(j)}) ∘ σ⟨k⟩)
        let inv = outer.inverse();
        let reordered: Vec<Permutation> = (0..inners.len()).map(|j| inners[inv.apply(j)].clone()).collect();
        let sizes: Vec<usize> = inners.iter().map(|t| t.arity()).collect();
        Ok(Permutation::block_sum(&reordered).compose(&Permutation::block_permute(outer, &sizes)))
    }

    fn name(&self) -> String {
        "associative".into()
    }
}

type Predicate<E> = Arc<dyn Fn(&E) -> bool + Send + Sync>;
type Enumerator<E> = Arc<dyn Fn(usize) -> Result<Vec<E>> + Send + Sync>;

/// A sub-operad cut out of a parent by a membership predicate. Closure under
/// composition and the symmetric action is checked on every operation.
#[derive(Clone)]
pub struct SubOperad<P: SetOperad> {
    parent: P,
    name: String,
    member: Predicate<P::Elem>,
    enumerate: Option<Enumerator<P::Elem>>,
}

impl<P: SetOperad> fmt::Debug for SubOperad<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubOperad({})", self.name)
    }
}

impl<P: SetOperad + Clone> SubOperad<P> {
    pub fn new<F>(parent: P, name: &str, member: F) -> Self
    where
        F: Fn(&P::Elem) -> bool + Send + Sync + 'static,
    {
        SubOperad {
            parent,
            name: name.to_string(),
            member: Arc::new(member),
            enumerate: None,
        }
    }

    /// Supplies a direct enumeration of the components, for sub-operads much
    /// smaller than their parent.
    pub fn with_enumeration<F>(mut self, f: F) -> Self
    where
        F: Fn(usize) -> Result<Vec<P::Elem>> + Send + Sync + 'static,
    {
        self.enumerate = Some(Arc::new(f));
        self
    }

    pub fn parent(&self) -> &P {
        &self.parent
    }

    pub fn contains(&self, e: &P::Elem) -> bool {
        (self.member)(e)
    }
}

impl<P: SetOperad + Clone> ElemSource for SubOperad<P> {
    type Elem = P::Elem;

    fn arity_of(&self, e: &P::Elem) -> usize {
        self.parent.arity_of(e)
    }

    fn act(&self, e: &P::Elem, p: &Permutation) -> P::Elem {
        self.parent.act(e, p)
    }

    fn elements(&self, k: usize) -> Result<Vec<P::Elem>> {
        match &self.enumerate {
            Some(f) => f(k),
            None => Ok(self.parent.elements(k)?.into_iter().filter(|e| (self.member)(e)).collect()),
        }
    }

    fn top_arity(&self) -> Option<usize> {
        self.parent.top_arity()
    }

    fn label(&self, e: &P::Elem) -> String {
        self.parent.label(e)
    }
}

impl<P: SetOperad + Clone> SetOperad for SubOperad<P> {
    fn unit(&self) -> P::Elem {
        self.parent.unit()
    }

    fn compose(&self, outer: &P::Elem, inners: &[P::Elem]) -> Result<P::Elem> {
        let c = self.parent.compose(outer, inners)?;
        if !(self.member)(&c) {
            return Err(Error::InvalidOperad(format!("{} is not closed under composition", self.name)));
        }
        Ok(c)
    }

    fn name(&self) -> String {
        self.name.clone()
    }
}

/// The sub-operad of `End({0,1})` spanned by the `k`-fold operation `op`
/// (one element per arity `k ≥ 1`). `op` must be associative and commutative.
fn boolean_monoid(name: &str, op: fn(usize, usize) -> usize) -> SubOperad<Endomorphism> {
    let end = Endomorphism::new(2).expect("two-element set");
    let full = move |k: usize| end.from_fn(k, |a| a.iter().copied().reduce(op).expect("k >= 1"));
    SubOperad::new(end, name, move |e: &EndElem| e.arity >= 1 && *e == full(e.arity))
        .with_enumeration(move |k| Ok(if k == 0 { Vec::new() } else { vec![full(k)] }))
}

/// Conjunctions `a_1 ∧ .. ∧ a_k` inside `End({0,1})`.
pub fn and_operad() -> SubOperad<Endomorphism> {
    boolean_monoid("and", |a, b| a & b)
}

/// Disjunctions `a_1 ∨ .. ∨ a_k` inside `End({0,1})`.
pub fn or_operad() -> SubOperad<Endomorphism> {
    boolean_monoid("or", |a, b| a | b)
}

/// Sums `a_1 + .. + a_k` mod 2 inside `End({0,1})`.
pub fn xor_operad() -> SubOperad<Endomorphism> {
    boolean_monoid("xor", |a, b| a ^ b)
}

/// A map of operads given by a function on elements. Nothing is assumed:
/// [`OperadMap::validate`] checks the laws on enumerable arities.
pub struct OperadMap<'a, P: SetOperad, Q: SetOperad> {
    pub source: &'a P,
    pub target: &'a Q,
    f: Box<dyn Fn(&P::Elem) -> Q::Elem + 'a>,
}

impl<'a, P: SetOperad, Q: SetOperad> OperadMap<'a, P, Q> {
    pub fn new<F: Fn(&P::Elem) -> Q::Elem + 'a>(source: &'a P, target: &'a Q, f: F) -> Self {
        OperadMap {
            source,
            target,
            f: Box::new(f),
        }
    }

    pub fn apply(&self, e: &P::Elem) -> Q::Elem {
        (self.f)(e)
    }

    /// Checks arity, unit, equivariance and composition. Compositions are
    /// exhaustive over outer arities `≤ max_arity` and inner tuples whose total
    /// arity is `≤ max_arity`, cut off after `budget` cases.
    pub fn validate(&self, max_arity: usize, budget: usize) -> Result<()> {
        let fail = |msg: String| Err(Error::NotOperadMap(msg));
        if (self.f)(&self.source.unit()) != self.target.unit() {
            return fail("unit is not preserved".into());
        }
        let mut comps: Vec<Vec<P::Elem>> = Vec::new();
        for k in 0..=max_arity {
            let elems = match self.source.elements(k) {
                Ok(e) => e,
                Err(Error::NotEnumerable(_)) => Vec::new(),
                Err(e) => return Err(e),
            };
            for e in &elems {
                let img = (self.f)(e);
                if self.target.arity_of(&img) != k {
                    return fail(format!("arity of {} changes", self.source.label(e)));
                }
                for j in 0..k.saturating_sub(1) {
                    let s = Permutation::adjacent(k, j);
                    if (self.f)(&self.source.act(e, &s)) != self.target.act(&img, &s) {
                        return fail(format!("{} is not mapped equivariantly", self.source.label(e)));
                    }
                }
            }
            comps.push(elems);
        }
        let mut checked = 0;
        for l in 0..=max_arity {
            for outer in &comps[l] {
                let mut ok = Ok(());
                for_each_tuple(&comps, l, max_arity, &mut |inners: &[P::Elem]| {
                    if checked >= budget || ok.is_err() {
                        return false;
                    }
                    checked += 1;
                    let lhs = self.source.compose(outer, inners).map(|c| (self.f)(&c));
                    let imgs: Vec<Q::Elem> = inners.iter().map(|e| (self.f)(e)).collect();
                    let rhs = self.target.compose(&(self.f)(outer), &imgs);
                    match (lhs, rhs) {
                        (Ok(a), Ok(b)) if a == b => {}
                        _ => {
                            ok = Err(Error::NotOperadMap(format!(
                                "composition with outer {} is not preserved",
                                self.source.label(outer)
                            )))
                        }
                    }
                    true
                });
                ok?;
            }
        }
        Ok(())
    }
}

/// Calls `f` on every `l`-tuple drawn from `comps` with total arity at most
/// `max_total`; stops early when `f` returns false.
pub(crate) fn for_each_tuple<E: Clone>(comps: &[Vec<E>], l: usize, max_total: usize, f: &mut dyn FnMut(&[E]) -> bool) {
    fn go<E: Clone>(
        comps: &[Vec<E>],
        l: usize,
        remaining: usize,
        cur: &mut Vec<E>,
        f: &mut dyn FnMut(&[E]) -> bool,
    ) -> bool {
        if cur.len() == l {
            return f(cur);
        }
        for (k, elems) in comps.iter().enumerate().take(remaining + 1) {
            for e in elems {
                cur.push(e.clone());
                let go_on = go(comps, l, remaining - k, cur, f);
                cur.pop();
                if !go_on {
                    return false;
                }
            }
        }
        true
    }
    go(comps, l, max_total, &mut Vec::new(), f);
}
