//! Seeded random group elements and valid tuples.

use rand::Rng;

use super::validity::fits;
use super::{GroupElem, GroupTag, SkewCube, SkewCubeTuple};
use crate::error::{Error, Result};
use crate::linalg::{block_diag, random_orthogonal, random_signed_permutation, random_special_orthogonal, Mat, Vector};

/// How orthogonal parts are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrthoSampler {
    /// Haar measure on `O(m)` or `SO(m)`.
    Haar,
    /// Signed permutation matrices. Products `o_1 D_1 o_2 D_2` then stay
    /// of the form `o·D`, so `O·Λ` and `SO·Λ` are closed under composition
    /// on these samples.
    Hyperoctahedral,
}

fn orthogonal_part<R: Rng>(rng: &mut R, m: usize, tag: &GroupTag, sampler: OrthoSampler) -> Result<Mat> {
    Ok(match (tag, sampler) {
        (GroupTag::Lambda, _) => Mat::identity(m, m),
        (GroupTag::OLambda, OrthoSampler::Haar) => random_orthogonal(rng, m),
        (GroupTag::SOLambda, OrthoSampler::Haar) => random_special_orthogonal(rng, m),
        (GroupTag::OLambda, OrthoSampler::Hyperoctahedral) => random_signed_permutation(rng, m, false),
        (GroupTag::SOLambda, OrthoSampler::Hyperoctahedral) => random_signed_permutation(rng, m, true),
        (GroupTag::Product(a, k, b), _) => {
            if *k > m {
                return Err(Error::DimensionMismatch { expected: m, found: *k });
            }
            block_diag(&orthogonal_part(rng, *k, a, sampler)?, &orthogonal_part(rng, m - k, b, sampler)?)
        }
        (GroupTag::Custom(c), _) => return Err(Error::InvalidTuple(format!("no sampler for custom group {}", c.name))),
    })
}

/// A random element with dilation entries uniform in `[lo, hi]`.
pub fn random_group_elem<R: Rng>(rng: &mut R, m: usize, tag: &GroupTag, sampler: OrthoSampler, lo: f64, hi: f64) -> Result<GroupElem> {
    let o = orthogonal_part(rng, m, tag, sampler)?;
    let lambda = Vector::from_fn(m, |_, _| rng.gen_range(lo..=hi));
    GroupElem::from_parts(o, lambda, tag)
}

/// Rejection sampler for valid tuples whose containment and pair margins
/// are at least `min_margin`.
#[derive(Clone, Debug)]
pub struct TupleSampler {
    pub min_margin: f64,
    pub ortho: OrthoSampler,
    /// Dilation entries are drawn from `[size.0, size.1]·s(k, m)` with
    /// `s(k, m) = k^{-1/m}`.
    pub size: (f64, f64),
    pub attempts: usize,
}

impl Default for TupleSampler {
    fn default() -> Self {
        TupleSampler {
            min_margin: 1e-3,
            ortho: OrthoSampler::Haar,
            size: (0.1, 0.5),
            attempts: 1000,
        }
    }
}

impl TupleSampler {
    pub fn hyperoctahedral() -> Self {
        TupleSampler {
            ortho: OrthoSampler::Hyperoctahedral,
            ..TupleSampler::default()
        }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R, m: usize, tag: &GroupTag, k: usize) -> Result<SkewCubeTuple> {
        let scale = (k.max(1) as f64).powf(-1.0 / m.max(1) as f64);
        let (lo, hi) = (self.size.0 * scale, self.size.1 * scale);
        for _ in 0..self.attempts {
            let mut cubes: Vec<SkewCube> = Vec::with_capacity(k);
            for _ in 0..k {
                let mut placed = false;
                for _ in 0..50 {
                    let g = random_group_elem(rng, m, tag, self.ortho, lo, hi)?;
                    let ext: Vec<f64> = (0..m).map(|d| g.matrix.row(d).iter().map(|x| x.abs()).sum::<f64>() + self.min_margin).collect();
                    if ext.iter().any(|&e| e >= 1.0) {
                        continue;
                    }
                    let v = Vector::from_fn(m, |d, _| rng.gen_range(-(1.0 - ext[d])..=(1.0 - ext[d])));
                    let c = SkewCube { v, g };
                    if fits(&cubes, &c, self.min_margin)? {
                        cubes.push(c);
                        placed = true;
                        break;
                    }
                }
                if !placed {
                    break;
                }
            }
            if cubes.len() == k {
                return SkewCubeTuple::new(m, tag.clone(), cubes);
            }
        }
        Err(Error::Capacity(self.attempts))
    }
}

/// A valid tuple from the default sampler.
pub fn random_tuple<R: Rng>(rng: &mut R, m: usize, tag: &GroupTag, k: usize) -> Result<SkewCubeTuple> {
    TupleSampler::default().sample(rng, m, tag, k)
}
