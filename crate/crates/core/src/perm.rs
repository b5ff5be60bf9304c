//! Permutations of `{0, .., k-1}`.
//!
//! Internally images are 0-based; the JSON encoding is 1-based
//! (`{"k": 3, "images": [2, 1, 3]}`).
//!
//! Conventions used throughout the crate:
//!
//! * `p.compose(q)` is the function composite `p ∘ q` (apply `q` first).
//! * The group product `στ` is `σ.compose(τ)`.
//! * Permutations act on the right of sequences by re-indexing:
//!   `(t·σ)[i] = t[σ(i)]`, so `(t·σ)·τ = t·(στ)`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(k: usize) -> Self {
        Permutation {
            images: (0..k).collect(),
        }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &x in &images {
            if x >= k || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "{:?} is not a bijection of 0..{}",
                    images, k
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from 1-based images.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidPermutation(format!(
                "{:?} contains 0 in a 1-based encoding",
                images
            )));
        }
        Self::from_images(images.iter().map(|&x| x - 1).collect())
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    /// The adjacent transposition exchanging `j` and `j + 1`.
    pub fn adjacent(k: usize, j: usize) -> Self {
        assert!(j + 1 < k, "adjacent transposition s_{j} out of range for arity {k}");
        let mut images: Vec<usize> = (0..k).collect();
        images.swap(j, j + 1);
        Permutation { images }
    }

    pub fn arity(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x + 1).collect()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.arity(), other.arity(), "composing permutations of different arity");
        Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.arity()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    /// Right action on a sequence: `out[i] = items[σ(i)]`.
    pub fn permute<T: Clone>(&self, items: &[T]) -> Vec<T> {
        assert_eq!(items.len(), self.arity());
        self.images.iter().map(|&x| items[x].clone()).collect()
    }

    /// A word `[j_1, .., j_r]` with `self = s_{j_1} ∘ .. ∘ s_{j_r}`, so that a
    /// right action is evaluated as `x·s_{j_1}` first, then `·s_{j_2}`, ...
    pub fn adjacent_word(&self) -> Vec<usize> {
        // bubble sort: self ∘ s_j swaps positions j and j+1 of the image array
        let mut images = self.images.clone();
        let mut swaps = Vec::new();
        let k = images.len();
        for pass in 0..k {
            let mut changed = false;
            for j in 0..k.saturating_sub(1 + pass) {
                if images[j] > images[j + 1] {
                    images.swap(j, j + 1);
                    swaps.push(j);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        swaps.reverse();
        swaps
    }

    pub fn sign(&self) -> i32 {
        if self.adjacent_word().len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// All permutations of arity `k` in lexicographic order of images.
    pub fn all(k: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut images: Vec<usize> = (0..k).collect();
        loop {
            out.push(Permutation {
                images: images.clone(),
            });
            // next lexicographic permutation
            let Some(i) = (0..k.saturating_sub(1)).rev().find(|&i| images[i] < images[i + 1]) else {
                break;
            };
            let j = (i + 1..k).rev().find(|&j| images[j] > images[i]).unwrap();
            images.swap(i, j);
            images[i + 1..].reverse();
        }
        out
    }

    /// Block sum `τ_1 ⊕ .. ⊕ τ_ℓ`: each block permutes its own range.
    /// The empty list gives the arity-0 identity.
    pub fn block_sum(blocks: &[Permutation]) -> Permutation {
        let mut images = Vec::with_capacity(blocks.iter().map(|b| b.arity()).sum());
        let mut offset = 0;
        for b in blocks {
            images.extend(b.images.iter().map(|&x| x + offset));
            offset += b.arity();
        }
        Permutation { images }
    }

    /// The block permutation `σ⟨k_1, .., k_ℓ⟩` moving whole blocks.
    ///
    /// `sizes` are the block sizes in the source layout; block `i` lands in
    /// slot `σ(i)` of the target layout, whose block sizes are
    /// `k_{σ^{-1}(1)}, .., k_{σ^{-1}(ℓ)}`. This is the permutation with
    /// `γ(x·σ; y_1, .., y_ℓ) = γ(x; y_{σ^{-1}(1)}, .., y_{σ^{-1}(ℓ)})·σ⟨k⟩`.
    pub fn block_permute(sigma: &Permutation, sizes: &[usize]) -> Permutation {
        assert_eq!(sigma.arity(), sizes.len());
        let inv = sigma.inverse();
        let mut target_offset = vec![0; sizes.len()];
        let mut acc = 0;
        for (j, off) in target_offset.iter_mut().enumerate() {
            *off = acc;
            acc += sizes[inv.apply(j)];
        }
        let mut images = Vec::with_capacity(acc);
        for (i, &size) in sizes.iter().enumerate() {
            let base = target_offset[sigma.apply(i)];
            images.extend(base..base + size);
        }
        Permutation { images }
    }

    /// The transpose permutation exchanging rows and columns of a `k × l`
    /// grid: `i·l + j ↦ j·k + i` (0-based).
    pub fn transpose(k: usize, l: usize) -> Permutation {
        let mut images = vec![0; k * l];
        for i in 0..k {
            for j in 0..l {
                images[i * l + j] = j * k + i;
            }
        }
        Permutation { images }
    }

    /// `(i, j) ↦ (σ(i), τ(j))` on lexicographically indexed pairs.
    pub fn product(sigma: &Permutation, tau: &Permutation) -> Permutation {
        let (k, l) = (sigma.arity(), tau.arity());
        let mut images = vec![0; k * l];
        for i in 0..k {
            for j in 0..l {
                images[i * l + j] = sigma.apply(i) * l + tau.apply(j);
            }
        }
        Permutation { images }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.one_based())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Serialize, Deserialize)]
struct PermJson {
    k: usize,
    images: Vec<usize>,
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PermJson {
            k: self.arity(),
            images: self.one_based(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PermJson::deserialize(d)?;
        if raw.k != raw.images.len() {
            return Err(serde::de::Error::custom(format!(
                "k = {} but {} images given",
                raw.k,
                raw.images.len()
            )));
        }
        Permutation::from_one_based(&raw.images).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(images: &[usize]) -> Permutation {
        Permutation::from_one_based(images).unwrap()
    }

    #[test]
    fn block_sum_examples() {
        assert_eq!(Permutation::block_sum(&[p(&[2, 1]), p(&[1])]).one_based(), vec![2, 1, 3]);
        assert_eq!(Permutation::block_sum(&[p(&[1]), p(&[2, 1])]).one_based(), vec![1, 3, 2]);
        let ids = [Permutation::identity(2), Permutation::identity(0), Permutation::identity(3)];
        assert!(Permutation::block_sum(&ids).is_identity());
        assert_eq!(Permutation::block_sum(&[]).arity(), 0);
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(Permutation::transpose(2, 3).one_based(), vec![1, 3, 5, 2, 4, 6]);
        assert_eq!(Permutation::transpose(2, 2).one_based(), vec![1, 3, 2, 4]);
        assert!(Permutation::transpose(1, 5).is_identity());
    }

    #[test]
    fn product_examples() {
        let s = p(&[2, 1]);
        let id = Permutation::identity(2);
        assert_eq!(Permutation::product(&s, &id).one_based(), vec![3, 4, 1, 2]);
        assert_eq!(Permutation::product(&id, &s).one_based(), vec![2, 1, 4, 3]);
        assert!(Permutation::product(&Permutation::identity(3), &Permutation::identity(4)).is_identity());
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_one_based(&[1, 1]).is_err());
        assert!(Permutation::from_one_based(&[0, 1]).is_err());
        assert!(Permutation::from_one_based(&[3, 1]).is_err());
    }

    #[test]
    fn all_counts_and_order() {
        assert_eq!(Permutation::all(0).len(), 1);
        assert_eq!(Permutation::all(4).len(), 24);
        let all = Permutation::all(3);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn block_permute_moves_blocks() {
        // blocks of sizes (1, 2) swapped: [a | b c] -> target layout [b c | a]
        let swap = p(&[2, 1]);
        let beta = Permutation::block_permute(&swap, &[1, 2]);
        assert_eq!(beta.one_based(), vec![3, 1, 2]);
    }

    #[test]
    fn json_is_one_based() {
        let s = serde_json::to_string(&p(&[2, 1, 3])).unwrap();
        assert_eq!(s, r#"{"k":3,"images":[2,1,3]}"#);
        let back: Permutation = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p(&[2, 1, 3]));
        assert!(serde_json::from_str::<Permutation>(r#"{"k":2,"images":[1,1]}"#).is_err());
    }

    fn arb_perm(max: usize) -> impl Strategy<Value = Permutation> {
        (0..=max).prop_flat_map(|k| {
            Just((0..k).collect::<Vec<usize>>())
                .prop_shuffle()
                .prop_map(|v| Permutation::from_images(v).unwrap())
        })
    }

    fn arb_perm_k(k: usize) -> impl Strategy<Value = Permutation> {
        Just((0..k).collect::<Vec<usize>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::from_images(v).unwrap())
    }

    proptest! {
        #[test]
        fn inverse_is_two_sided(a in arb_perm(7)) {
            prop_assert!(a.compose(&a.inverse()).is_identity());
            prop_assert!(a.inverse().compose(&a).is_identity());
        }

        #[test]
        fn adjacent_word_reconstructs(a in arb_perm(7)) {
            let k = a.arity();
            let rebuilt = a
                .adjacent_word()
                .iter()
                .fold(Permutation::identity(k), |acc, &j| acc.compose(&Permutation::adjacent(k, j)));
            prop_assert_eq!(rebuilt, a);
        }

        #[test]
        fn block_sum_associative(a in arb_perm(3), b in arb_perm(3), c in arb_perm(3)) {
            let bc = Permutation::block_sum(&[b.clone(), c.clone()]);
            prop_assert_eq!(
                Permutation::block_sum(&[a.clone(), bc]),
                Permutation::block_sum(&[a, b, c])
            );
        }

        #[test]
        fn transpose_inverse(k in 0usize..6, l in 0usize..6) {
            prop_assert_eq!(Permutation::transpose(k, l).inverse(), Permutation::transpose(l, k));
        }

        #[test]
        fn product_is_homomorphism(
            (s1, s2) in (1usize..5).prop_flat_map(|k| (arb_perm_k(k), arb_perm_k(k))),
            (t1, t2) in (1usize..5).prop_flat_map(|l| (arb_perm_k(l), arb_perm_k(l))),
        ) {
            let lhs = Permutation::product(&s1.compose(&s2), &t1.compose(&t2));
            let rhs = Permutation::product(&s1, &t1).compose(&Permutation::product(&s2, &t2));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn right_action_law(
            (a, b) in (0usize..6).prop_flat_map(|k| (arb_perm_k(k), arb_perm_k(k)))
        ) {
            let items: Vec<usize> = (100..100 + a.arity()).collect();
            prop_assert_eq!(b.permute(&a.permute(&items)), a.compose(&b).permute(&items));
        }
    }
}
