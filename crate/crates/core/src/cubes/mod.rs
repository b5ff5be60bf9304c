//! Skew little cubes: affine embeddings `x ↦ ρ(g)x + v` of the cube
//! `[-1, 1]^m` into itself, with `g` in a dilation group.

pub mod group;
pub mod io;
pub mod laws;
pub mod ops;
pub mod sample;
pub mod validity;

use serde::Serialize;

pub use group::{check_dilation_member, CustomGroup, GroupElem, GroupTag};
pub use io::{ImageCube, ImageTupleJson, TupleJson};
pub use laws::{check_cube_operad_laws, check_interchange_suite, CubeLawConfig, DeviationReport};
pub use ops::{
    compose_tuples, embed_factor, interchange_check, interchange_deviation, pi_map, product_generator, tuple_deviation, InterchangeReport, Side,
};
pub use sample::{random_group_elem, random_tuple, OrthoSampler, TupleSampler};
pub use validity::{containment_margin, face_separation, is_valid, pair_margin, validate_tuple, PairMargin, ValidityReport};

use crate::error::{Error, Result};
use crate::linalg::{max_abs_vec, Vector};
use crate::perm::Permutation;

/// Default validity tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct SkewCube {
    pub v: Vector,
    pub g: GroupElem,
}

impl SkewCube {
    pub fn new(v: Vector, g: GroupElem) -> Result<SkewCube> {
        if v.len() != g.dim() {
            return Err(Error::DimensionMismatch {
                expected: g.dim(),
                found: v.len(),
            });
        }
        Ok(SkewCube { v, g })
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    /// `f_{v,g}(x) = ρ(g)x + v` on the open cube.
    pub fn embed(&self, x: &Vector) -> Result<Vector> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        if x.iter().any(|c| !(c.abs() < 1.0)) {
            return Err(Error::OutsideCube(x.iter().cloned().collect()));
        }
        Ok(&self.g.matrix * x + &self.v)
    }

    /// `f_{v,g} ∘ f_{v',g'}`.
    pub fn then_inner(&self, inner: &SkewCube) -> Result<SkewCube> {
        Ok(SkewCube {
            v: &self.g.matrix * &inner.v + &self.v,
            g: self.g.compose(&inner.g)?,
        })
    }

    pub fn deviation(&self, other: &SkewCube) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        max_abs_vec(&(&self.v - &other.v)).max(self.g.deviation(&other.g))
    }
}

/// An element of `C_m^G(k)`; geometric validity is checked separately by
/// [`validate_tuple`].
#[derive(Clone, Debug, PartialEq)]
pub struct SkewCubeTuple {
    pub m: usize,
    pub tag: GroupTag,
    pub cubes: Vec<SkewCube>,
}

impl SkewCubeTuple {
    pub fn new(m: usize, tag: GroupTag, cubes: Vec<SkewCube>) -> Result<SkewCubeTuple> {
        for c in &cubes {
            if c.dim() != m {
                return Err(Error::DimensionMismatch { expected: m, found: c.dim() });
            }
            if c.g.tag != tag {
                return Err(Error::InvalidTuple(format!("cube over {} in a tuple over {tag}", c.g.tag)));
            }
        }
        Ok(SkewCubeTuple { m, tag, cubes })
    }

    /// The operad unit `[(0, id)]`.
    pub fn unit(m: usize, tag: &GroupTag) -> SkewCubeTuple {
        SkewCubeTuple {
            m,
            tag: tag.clone(),
            cubes: vec![SkewCube {
                v: Vector::zeros(m),
                g: GroupElem::identity(m, tag),
            }],
        }
    }

    pub fn empty(m: usize, tag: &GroupTag) -> SkewCubeTuple {
        SkewCubeTuple {
            m,
            tag: tag.clone(),
            cubes: Vec::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.cubes.len()
    }

    /// Right action of `Σ_k`: cube `i` of `t·σ` is cube `σ(i)` of `t`.
    pub fn act(&self, sigma: &Permutation) -> Result<SkewCubeTuple> {
        if sigma.arity() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: sigma.arity(),
            });
        }
        Ok(SkewCubeTuple {
            m: self.m,
            tag: self.tag.clone(),
            cubes: sigma.permute(&self.cubes),
        })
    }

    /// Right action of `G^k` on frames: `(v_i, g_i·h_i)`. The result need
    /// not be a valid tuple unless each `h_i` contracts the cube.
    pub fn act_frames(&self, hs: &[GroupElem]) -> Result<SkewCubeTuple> {
        if hs.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: hs.len(),
            });
        }
        let cubes = self
            .cubes
            .iter()
            .zip(hs)
            .map(|(c, h)| {
                Ok(SkewCube {
                    v: c.v.clone(),
                    g: c.g.compose(h)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(SkewCubeTuple {
            m: self.m,
            tag: self.tag.clone(),
            cubes,
        })
    }
}

/// A point of `Conf_k(M) × G^k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FramedConfiguration {
    pub m: usize,
    #[serde(serialize_with = "io::ser_vectors")]
    pub points: Vec<Vector>,
    #[serde(serialize_with = "io::ser_frames")]
    pub frames: Vec<GroupElem>,
}

impl FramedConfiguration {
    pub fn k(&self) -> usize {
        self.points.len()
    }

    /// `(points, frames)·σ`, reindexed like [`SkewCubeTuple::act`].
    pub fn act(&self, sigma: &Permutation) -> FramedConfiguration {
        FramedConfiguration {
            m: self.m,
            points: sigma.permute(&self.points),
            frames: sigma.permute(&self.frames),
        }
    }

    pub fn act_frames(&self, hs: &[GroupElem]) -> Result<FramedConfiguration> {
        if hs.len() != self.k() {
            return Err(Error::ArityMismatch {
                expected: self.k(),
                found: hs.len(),
            });
        }
        Ok(FramedConfiguration {
            m: self.m,
            points: self.points.clone(),
            frames: self.frames.iter().zip(hs).map(|(g, h)| g.compose(h)).collect::<Result<_>>()?,
        })
    }

    /// Smallest Euclidean distance between two points; infinite for `k < 2`.
    pub fn min_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.k() {
            for j in i + 1..self.k() {
                best = best.min((&self.points[i] - &self.points[j]).norm());
            }
        }
        best
    }
}
