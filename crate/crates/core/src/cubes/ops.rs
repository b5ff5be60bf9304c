//! Operadic composition, the maps `C_m^G → C_{m+n}^{G×H}` and the
//! comparison map to framed configurations.

use serde::Serialize;

use super::validity::is_valid;
use super::{FramedConfiguration, GroupElem, GroupTag, SkewCube, SkewCubeTuple};
use crate::error::{Error, Result};
use crate::linalg::{block_diag, Mat, Vector};
use crate::perm::Permutation;

/// `γ(outer; inners)`: cube `(v_i, g_i)∘(v'_j, g'_j) = (ρ(g_i)v'_j + v_i, g_i g'_j)`
/// in block order. Inputs and output are checked for validity at `tol`.
pub fn compose_tuples(outer: &SkewCubeTuple, inners: &[SkewCubeTuple], tol: f64) -> Result<SkewCubeTuple> {
    if inners.len() != outer.arity() {
        return Err(Error::ArityMismatch {
            expected: outer.arity(),
            found: inners.len(),
        });
    }
    for t in inners {
        if t.m != outer.m {
            return Err(Error::DimensionMismatch { expected: outer.m, found: t.m });
        }
        if t.tag != outer.tag {
            return Err(Error::InvalidTuple(format!("inner tuple over {} under an outer tuple over {}", t.tag, outer.tag)));
        }
    }
    if !is_valid(outer, tol)? {
        return Err(Error::InvalidTuple("outer tuple is not valid".into()));
    }
    for (i, t) in inners.iter().enumerate() {
        if !is_valid(t, tol)? {
            return Err(Error::InvalidTuple(format!("inner tuple {i} is not valid")));
        }
    }
    let out = compose_unchecked(outer, inners)?;
    if !is_valid(&out, tol / 2.0)? {
        return Err(Error::InvalidTuple("composite failed validation".into()));
    }
    Ok(out)
}

pub(crate) fn compose_unchecked(outer: &SkewCubeTuple, inners: &[SkewCubeTuple]) -> Result<SkewCubeTuple> {
    let mut cubes = Vec::with_capacity(inners.iter().map(|t| t.arity()).sum());
    for (c, t) in outer.cubes.iter().zip(inners) {
        for d in &t.cubes {
            cubes.push(c.then_inner(d)?);
        }
    }
    Ok(SkewCubeTuple {
        m: outer.m,
        tag: outer.tag.clone(),
        cubes,
    })
}

/// Maximal cubewise deviation of centers and matrices; infinite if the
/// shapes differ.
pub fn tuple_deviation(a: &SkewCubeTuple, b: &SkewCubeTuple) -> f64 {
    if a.m != b.m || a.arity() != b.arity() {
        return f64::INFINITY;
    }
    a.cubes.iter().zip(&b.cubes).map(|(x, y)| x.deviation(y)).fold(0.0, f64::max)
}

/// `π(v_1, g_1, .., v_k, g_k) = (v_1, .., v_k, g_1, .., g_k)`.
pub fn pi_map(t: &SkewCubeTuple) -> FramedConfiguration {
    FramedConfiguration {
        m: t.m,
        points: t.cubes.iter().map(|c| c.v.clone()).collect(),
        frames: t.cubes.iter().map(|c| c.g.clone()).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// The tuple occupies the first `m` coordinates.
    Left,
    /// The tuple occupies the last `m` coordinates.
    Right,
}

/// Pads a tuple in dimension `m` to `m + n` with the identity on the other
/// factor, whose group is `other`.
pub fn embed_factor(t: &SkewCubeTuple, n: usize, side: Side, other: &GroupTag) -> Result<SkewCubeTuple> {
    let m = t.m;
    let tag = match side {
        Side::Left => GroupTag::product(t.tag.clone(), m, other.clone()),
        Side::Right => GroupTag::product(other.clone(), n, t.tag.clone()),
    };
    let id = Mat::identity(n, n);
    let cubes = t
        .cubes
        .iter()
        .map(|c| {
            let (v, g, o) = match side {
                Side::Left => (
                    Vector::from_iterator(m + n, c.v.iter().cloned().chain(std::iter::repeat_n(0.0, n))),
                    block_diag(&c.g.matrix, &id),
                    block_diag(&c.g.o, &id),
                ),
                Side::Right => (
                    Vector::from_iterator(m + n, std::iter::repeat_n(0.0, n).chain(c.v.iter().cloned())),
                    block_diag(&id, &c.g.matrix),
                    block_diag(&id, &c.g.o),
                ),
            };
            let ones = std::iter::repeat_n(1.0, n);
            let lambda = match side {
                Side::Left => Vector::from_iterator(m + n, c.g.lambda.iter().cloned().chain(ones)),
                Side::Right => Vector::from_iterator(m + n, ones.chain(c.g.lambda.iter().cloned())),
            };
            SkewCube {
                v,
                g: GroupElem {
                    matrix: g,
                    o,
                    lambda,
                    tag: tag.clone(),
                },
            }
        })
        .collect();
    Ok(SkewCubeTuple { m: m + n, tag, cubes })
}

/// `ι(p ⊗ q)`: cube `i·l + j` has center `(v_i, w_j)` and matrix
/// `diag(g_i, h_j)`.
pub fn product_generator(p: &SkewCubeTuple, q: &SkewCubeTuple) -> Result<SkewCubeTuple> {
    let (m, n) = (p.m, q.m);
    let tag = GroupTag::product(p.tag.clone(), m, q.tag.clone());
    let mut cubes = Vec::with_capacity(p.arity() * q.arity());
    for a in &p.cubes {
        for b in &q.cubes {
            cubes.push(SkewCube {
                v: Vector::from_iterator(m + n, a.v.iter().chain(b.v.iter()).cloned()),
                g: GroupElem {
                    matrix: block_diag(&a.g.matrix, &b.g.matrix),
                    o: block_diag(&a.g.o, &b.g.o),
                    lambda: Vector::from_iterator(m + n, a.g.lambda.iter().chain(b.g.lambda.iter()).cloned()),
                    tag: tag.clone(),
                },
            });
        }
    }
    Ok(SkewCubeTuple { m: m + n, tag, cubes })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InterchangeReport {
    pub k: usize,
    pub l: usize,
    pub deviation: f64,
    /// Distance of the shared value from `product_generator(p, q)`.
    pub generator_deviation: f64,
    pub pass: bool,
}

/// Deviation between `γ(p; q, .., q)` and `γ(q; p, .., p)·tau` evaluated in
/// `C_{m+n}^{G×H}`, with `p` embedded on the left and `q` on the right.
pub fn interchange_deviation(p: &SkewCubeTuple, q: &SkewCubeTuple, tau: &Permutation, tol: f64) -> Result<(SkewCubeTuple, f64)> {
    let pl = embed_factor(p, q.m, Side::Left, &q.tag)?;
    let qr = embed_factor(q, p.m, Side::Right, &p.tag)?;
    let lhs = compose_tuples(&pl, &vec![qr.clone(); p.arity()], tol)?;
    let rhs = compose_tuples(&qr, &vec![pl; q.arity()], tol)?.act(tau)?;
    let dev = tuple_deviation(&lhs, &rhs);
    Ok((lhs, dev))
}

/// Both composites of the interchange relation, compared cubewise.
pub fn interchange_check(p: &SkewCubeTuple, q: &SkewCubeTuple, tol: f64) -> Result<InterchangeReport> {
    let (k, l) = (p.arity(), q.arity());
    let (lhs, deviation) = interchange_deviation(p, q, &Permutation::transpose(k, l), tol)?;
    let generator_deviation = tuple_deviation(&lhs, &product_generator(p, q)?);
    Ok(InterchangeReport {
        k,
        l,
        deviation,
        generator_deviation,
        pass: deviation <= tol && generator_deviation <= tol,
    })
}
