//! The category `F(P)`: finite sets `{0, .., n-1}` with maps `f: X → Y`
//! labelled by an operation `p_y ∈ P(f^{-1}(y))` for every `y ∈ Y`.
//!
//! The fibre `f^{-1}(y)` is identified with `{0, .., |f^{-1}(y)|-1}` in
//! increasing order.

use serde::{Deserialize, Serialize};

use super::SetOperad;
use crate::error::{Error, Result};
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FpHom<E> {
    pub source: usize,
    pub target: usize,
    pub f: Vec<usize>,
    pub labels: Vec<E>,
}

impl<E: Clone> FpHom<E> {
    pub fn new<P: SetOperad<Elem = E>>(op: &P, source: usize, target: usize, f: Vec<usize>, labels: Vec<E>) -> Result<Self> {
        let h = FpHom {
            source,
            target,
            f,
            labels,
        };
        h.validate(op)?;
        Ok(h)
    }

    pub fn identity<P: SetOperad<Elem = E>>(op: &P, n: usize) -> Self {
        FpHom {
            source: n,
            target: n,
            f: (0..n).collect(),
            labels: vec![op.unit(); n],
        }
    }

    /// The bijection `x ↦ σ(x)` with unit labels.
    pub fn from_permutation<P: SetOperad<Elem = E>>(op: &P, sigma: &Permutation) -> Self {
        let n = sigma.arity();
        FpHom {
            source: n,
            target: n,
            f: sigma.images().to_vec(),
            labels: vec![op.unit(); n],
        }
    }

    pub fn fibre_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.target];
        for &y in &self.f {
            sizes[y] += 1;
        }
        sizes
    }

    pub fn validate<P: SetOperad<Elem = E>>(&self, op: &P) -> Result<()> {
        if self.f.len() != self.source || self.labels.len() != self.target {
            return Err(Error::InvalidOperad("hom has the wrong number of values or labels".into()));
        }
        if let Some(&y) = self.f.iter().find(|&&y| y >= self.target) {
            return Err(Error::InvalidOperad(format!("hom value {y} outside the target")));
        }
        for (y, (size, label)) in self.fibre_sizes().iter().zip(&self.labels).enumerate() {
            if op.arity_of(label) != *size {
                return Err(Error::ArityMismatch {
                    expected: *size,
                    found: op.arity_of(label),
                })
                .map_err(|e| Error::InvalidOperad(format!("label at {y}: {e}")));
            }
        }
        Ok(())
    }

    /// `τ_h` with `τ_h(x) = (position of x in the concatenation of fibres)`;
    /// the operation `γ(m; p_0, .., p_{k-1})·τ_h` has its inputs indexed by `X`.
    pub fn gather_permutation(&self) -> Permutation {
        let sizes = self.fibre_sizes();
        let mut offset = vec![0; self.target];
        for y in 1..self.target {
            offset[y] = offset[y - 1] + sizes[y - 1];
        }
        let images = self
            .f
            .iter()
            .map(|&y| {
                offset[y] += 1;
                offset[y] - 1
            })
            .collect();
        Permutation::from_images(images).expect("fibres partition the source")
    }
}

/// `h` followed by `h2`.
pub fn compose_homs<P: SetOperad>(op: &P, h: &FpHom<P::Elem>, h2: &FpHom<P::Elem>) -> Result<FpHom<P::Elem>> {
    if h.target != h2.source {
        return Err(Error::ArityMismatch {
            expected: h2.source,
            found: h.target,
        });
    }
    let f: Vec<usize> = h.f.iter().map(|&y| h2.f[y]).collect();
    let mut labels = Vec::with_capacity(h2.target);
    for z in 0..h2.target {
        let ys: Vec<usize> = (0..h.target).filter(|&y| h2.f[y] == z).collect();
        // composite position of each x, blocks ordered by y
        let mut pos = vec![usize::MAX; h.source];
        let mut next = 0;
        for &y in &ys {
            for x in (0..h.source).filter(|&x| h.f[x] == y) {
                pos[x] = next;
                next += 1;
            }
        }
        let tau: Vec<usize> = (0..h.source).filter(|&x| f[x] == z).map(|x| pos[x]).collect();
        let inners: Vec<P::Elem> = ys.iter().map(|&y| h.labels[y].clone()).collect();
        let c = op.compose(&h2.labels[z], &inners)?;
        labels.push(op.act(&c, &Permutation::from_images(tau)?));
    }
    Ok(FpHom {
        source: h.source,
        target: h2.target,
        f,
        labels,
    })
}

/// All homs `{0..n-1} → {0..k-1}` in `F(P)`.
pub fn hom_set<P: SetOperad>(op: &P, n: usize, k: usize) -> Result<Vec<FpHom<P::Elem>>> {
    let mut out = Vec::new();
    let mut comps: Vec<Vec<P::Elem>> = Vec::new();
    for s in 0..=n {
        comps.push(op.elements(s)?);
    }
    let count = if n == 0 { 1 } else { k.checked_pow(n as u32).ok_or(Error::TooLarge { arity: n, limit: 0 })? };
    let mut f = vec![0; n];
    for idx in 0..count {
        let mut i = idx;
        for slot in f.iter_mut().rev() {
            *slot = i % k.max(1);
            i /= k.max(1);
        }
        let mut sizes = vec![0; k];
        for &y in &f {
            sizes[y] += 1;
        }
        let mut choices: Vec<Vec<P::Elem>> = vec![Vec::new()];
        for &s in &sizes {
            let mut next = Vec::new();
            for prefix in &choices {
                for e in &comps[s] {
                    let mut v = prefix.clone();
                    v.push(e.clone());
                    next.push(v);
                }
            }
            choices = next;
        }
        for labels in choices {
            out.push(FpHom {
                source: n,
                target: k,
                f: f.clone(),
                labels,
            });
        }
    }
    Ok(out)
}
