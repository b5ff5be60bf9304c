//! Containment and pairwise disjointness of image boxes.
//!
//! The image of cube `(v, g)` with `g = o·diag(λ)` is the box
//! `{x : |o_d·(x − v)| ≤ λ_d}`, whose face normals are the columns of `o`.
//! The separation margin of two boxes is `−t*`, where `t*` maximizes `t`
//! subject to every face constraint of both boxes holding with slack `t`;
//! it is positive exactly when the closed boxes are disjoint.

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use serde::Serialize;

use super::{SkewCube, SkewCubeTuple};
use crate::error::{Error, Result};
use crate::linalg::{Mat, Vector};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairMargin {
    pub i: usize,
    pub j: usize,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidityReport {
    pub valid: bool,
    pub tol: f64,
    pub containment: Vec<f64>,
    pub pairs: Vec<PairMargin>,
    /// Cubes whose image leaves `[-1, 1]^m`.
    pub outside: Vec<usize>,
    /// Pairs whose images are not separated by `tol`.
    pub overlapping: Vec<(usize, usize)>,
}

/// `min_d (1 − |v_d| − Σ_j |A_dj|)`: the distance from the image box to the
/// boundary along coordinate directions, negative when it leaks out.
pub fn containment_margin(c: &SkewCube) -> f64 {
    let a = &c.g.matrix;
    (0..c.dim())
        .map(|d| 1.0 - c.v[d].abs() - a.row(d).iter().map(|x| x.abs()).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

/// Half-width of the projection of the box of `c` onto `u`.
fn projected_radius(c: &SkewCube, u: &[f64]) -> f64 {
    (0..c.dim())
        .map(|d| {
            let dot: f64 = (0..c.dim()).map(|r| c.g.o[(r, d)] * u[r]).sum();
            c.g.lambda[d] * dot.abs()
        })
        .sum()
}

/// Largest gap between the boxes along a face normal of either box;
/// negative when no face normal separates them.
///
/// A gap `g` certifies a margin of at least `g / (2√m)`.
pub fn face_separation(a: &SkewCube, b: &SkewCube) -> f64 {
    let m = a.dim();
    let mut best = f64::NEG_INFINITY;
    for c in [a, b] {
        for d in 0..m {
            let u: Vec<f64> = (0..m).map(|r| c.g.o[(r, d)]).collect();
            let ca: f64 = (0..m).map(|r| u[r] * a.v[r]).sum();
            let cb: f64 = (0..m).map(|r| u[r] * b.v[r]).sum();
            let gap = (ca - cb).abs() - projected_radius(a, &u) - projected_radius(b, &u);
            best = best.max(gap);
        }
    }
    best
}

/// The separation margin `−t*`, decided by linear programming.
///
/// The solver's answer is polished by solving the system of its active
/// constraints exactly; the reported `t*` is re-evaluated at a feasible
/// point, so it never exceeds the true optimum.
pub fn pair_margin(a: &SkewCube, b: &SkewCube) -> Result<f64> {
    let m = a.dim();
    if b.dim() != m {
        return Err(Error::DimensionMismatch { expected: m, found: b.dim() });
    }
    // rows (n, rhs) of n·x + t ≤ rhs
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::with_capacity(4 * m);
    for c in [a, b] {
        for d in 0..m {
            let u: Vec<f64> = (0..m).map(|r| c.g.o[(r, d)]).collect();
            let center: f64 = (0..m).map(|r| u[r] * c.v[r]).sum();
            let h = c.g.lambda[d];
            rows.push((u.clone(), center + h));
            rows.push((u.iter().map(|x| -x).collect(), h - center));
        }
    }
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let xs: Vec<_> = (0..m).map(|_| lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY))).collect();
    let t = lp.add_var(1.0, (f64::NEG_INFINITY, f64::INFINITY));
    for (n, rhs) in &rows {
        let mut expr: Vec<_> = xs.iter().zip(n).map(|(&x, &c)| (x, c)).collect();
        expr.push((t, 1.0));
        lp.add_constraint(expr, ComparisonOp::Le, *rhs);
    }
    let sol = lp
        .solve()
        .map_err(|e| Error::InvalidTuple(format!("separation program failed: {e}")))?;
    let x: Vec<f64> = xs.iter().map(|&v| sol[v]).collect();
    let value = |x: &[f64]| {
        rows.iter()
            .map(|(n, rhs)| rhs - n.iter().zip(x).map(|(a, b)| a * b).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
    };
    let t_lp = sol.objective();
    let active: Vec<&(Vec<f64>, f64)> = rows
        .iter()
        .filter(|(n, rhs)| rhs - n.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() - t_lp <= 1e-7)
        .collect();
    let sys = Mat::from_fn(active.len(), m + 1, |i, j| if j < m { active[i].0[j] } else { 1.0 });
    let rhs = Vector::from_iterator(active.len(), active.iter().map(|r| r.1));
    let mut best = value(&x);
    if let Ok(z) = sys.svd(true, true).solve(&rhs, 1e-12) {
        best = best.max(value(&z.as_slice()[..m]));
    }
    Ok(-best)
}

/// Whether the pair is separated by at least `tol`, trying the face-normal
/// certificate before the linear program.
fn separated(a: &SkewCube, b: &SkewCube, tol: f64) -> Result<bool> {
    if face_separation(a, b) >= 2.0 * (a.dim() as f64).sqrt() * tol {
        return Ok(true);
    }
    Ok(pair_margin(a, b)? >= tol)
}

/// Full report with every margin computed by the linear program.
pub fn validate_tuple(t: &SkewCubeTuple, tol: f64) -> Result<ValidityReport> {
    for c in &t.cubes {
        if c.dim() != t.m || c.g.dim() != t.m {
            return Err(Error::DimensionMismatch { expected: t.m, found: c.dim() });
        }
    }
    let containment: Vec<f64> = t.cubes.iter().map(containment_margin).collect();
    let outside: Vec<usize> = (0..t.arity()).filter(|&i| containment[i] < -tol).collect();
    let mut pairs = Vec::new();
    let mut overlapping = Vec::new();
    for i in 0..t.arity() {
        for j in i + 1..t.arity() {
            let margin = pair_margin(&t.cubes[i], &t.cubes[j])?;
            if !(margin >= tol) {
                overlapping.push((i, j));
            }
            pairs.push(PairMargin { i, j, margin });
        }
    }
    Ok(ValidityReport {
        valid: outside.is_empty() && overlapping.is_empty(),
        tol,
        containment,
        pairs,
        outside,
        overlapping,
    })
}

/// Validity without the report.
pub fn is_valid(t: &SkewCubeTuple, tol: f64) -> Result<bool> {
    for c in &t.cubes {
        if c.dim() != t.m {
            return Err(Error::DimensionMismatch { expected: t.m, found: c.dim() });
        }
        if containment_margin(c) < -tol {
            return Ok(false);
        }
    }
    for i in 0..t.arity() {
        for j in i + 1..t.arity() {
            if !separated(&t.cubes[i], &t.cubes[j], tol)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Validity of a candidate cube against already accepted ones.
pub(crate) fn fits(cubes: &[SkewCube], c: &SkewCube, margin: f64) -> Result<bool> {
    if containment_margin(c) < margin {
        return Ok(false);
    }
    for other in cubes {
        if !separated(other, c, margin)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubes::{GroupElem, GroupTag};
    use crate::linalg::rotation2;
    use proptest::prelude::*;

    fn cube(v: &[f64], g: Mat, tag: &GroupTag) -> SkewCube {
        SkewCube::new(Vector::from_row_slice(v), GroupElem::new(g, tag).unwrap()).unwrap()
    }

    fn interval(c: f64, r: f64) -> SkewCube {
        cube(&[c], Mat::from_element(1, 1, r), &GroupTag::Lambda)
    }

    #[test]
    fn identity_alone_is_valid_with_zero_margin() {
        let t = SkewCubeTuple::unit(2, &GroupTag::OLambda);
        let r = validate_tuple(&t, 1e-9).unwrap();
        assert!(r.valid);
        assert_eq!(r.containment, vec![0.0]);
    }

    #[test]
    fn equal_cubes_overlap() {
        let c = cube(&[0.0, 0.0], Mat::identity(2, 2) * 0.5, &GroupTag::Lambda);
        let t = SkewCubeTuple::new(2, GroupTag::Lambda, vec![c.clone(), c]).unwrap();
        let r = validate_tuple(&t, 1e-9).unwrap();
        assert!(!r.valid);
        assert_eq!(r.overlapping, vec![(0, 1)]);
        assert!((r.pairs[0].margin + 0.5).abs() < 1e-12);
    }

    #[test]
    fn intervals_on_the_line() {
        let t = SkewCubeTuple::new(1, GroupTag::Lambda, vec![interval(-0.5, 0.25), interval(0.5, 0.25)]).unwrap();
        let r = validate_tuple(&t, 1e-9).unwrap();
        assert!(r.valid);
        // images (-0.75, -0.25) and (0.25, 0.75): half the gap
        assert!((r.pairs[0].margin - 0.25).abs() < 1e-12);
        assert!((r.containment[0] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn touching_is_not_separated() {
        let t = SkewCubeTuple::new(1, GroupTag::Lambda, vec![interval(-0.5, 0.5), interval(0.5, 0.5)]).unwrap();
        let r = validate_tuple(&t, 1e-9).unwrap();
        assert!(!r.valid);
        assert!(r.pairs[0].margin.abs() < 1e-12);
    }

    #[test]
    fn leaking_cube_is_reported() {
        let t = SkewCubeTuple::new(1, GroupTag::Lambda, vec![interval(0.8, 0.3)]).unwrap();
        let r = validate_tuple(&t, 1e-9).unwrap();
        assert_eq!(r.outside, vec![0]);
        assert!(!is_valid(&t, 1e-9).unwrap());
    }

    #[test]
    fn rotated_squares_need_more_than_axis_checks() {
        // two diamonds whose axis-aligned bounding boxes overlap but which
        // are separated along the diagonal
        let tag = GroupTag::SOLambda;
        let g = rotation2(std::f64::consts::FRAC_PI_4) * 0.2;
        let a = cube(&[-0.2, -0.2], g.clone(), &tag);
        let b = cube(&[0.1, 0.1], g, &tag);
        let m = pair_margin(&a, &b).unwrap();
        let gap = 0.3 * 2f64.sqrt() - 0.4;
        assert!(gap > 0.0);
        assert!((m - gap / 2.0).abs() < 1e-12);
        assert!(face_separation(&a, &b) > 0.0);
    }

    /// Axis-aligned boxes decouple by coordinate.
    fn axis_oracle(a: &SkewCube, b: &SkewCube) -> f64 {
        let t = (0..a.dim())
            .map(|d| {
                let (ha, hb) = (a.g.lambda[d], b.g.lambda[d]);
                ha.min(hb).min((ha + hb - (a.v[d] - b.v[d]).abs()) / 2.0)
            })
            .fold(f64::INFINITY, f64::min);
        -t
    }

    proptest! {
        #[test]
        fn lp_matches_axis_aligned_oracle(
            m in 1usize..4,
            seed in proptest::collection::vec(-1.0f64..1.0, 12),
            size in proptest::collection::vec(0.05f64..0.6, 6),
        ) {
            let tag = GroupTag::Lambda;
            let a = cube(&seed[..m], Mat::from_diagonal(&Vector::from_row_slice(&size[..m])), &tag);
            let b = cube(&seed[6..6 + m], Mat::from_diagonal(&Vector::from_row_slice(&size[3..3 + m])), &tag);
            let lp = pair_margin(&a, &b).unwrap();
            prop_assert!((lp - axis_oracle(&a, &b)).abs() < 1e-9, "lp {} oracle {}", lp, axis_oracle(&a, &b));
        }

        #[test]
        fn face_certificate_never_contradicts_lp(
            angles in proptest::collection::vec(0.0f64..6.3, 2),
            centers in proptest::collection::vec(-0.6f64..0.6, 4),
            sizes in proptest::collection::vec(0.05f64..0.4, 4),
        ) {
            let tag = GroupTag::SOLambda;
            let g = |k: usize| rotation2(angles[k]) * Mat::from_diagonal(&Vector::from_row_slice(&sizes[2 * k..2 * k + 2]));
            let a = cube(&centers[..2], g(0), &tag);
            let b = cube(&centers[2..], g(1), &tag);
            let lp = pair_margin(&a, &b).unwrap();
            let gap = face_separation(&a, &b);
            // in the plane, face normals are a complete set of separating axes
            if gap.abs() > 1e-9 {
                prop_assert_eq!(gap > 0.0, lp > 0.0);
            }
            if gap > 0.0 {
                prop_assert!(lp >= gap / (2.0 * 2f64.sqrt()) - 1e-12);
            }
        }

        #[test]
        fn shrinking_preserves_validity(
            centers in proptest::collection::vec(-0.7f64..0.7, 6),
            sizes in proptest::collection::vec(0.05f64..0.3, 6),
            angles in proptest::collection::vec(0.0f64..6.3, 3),
            shrink in proptest::collection::vec(0.1f64..1.0, 6),
        ) {
            let tag = GroupTag::SOLambda;
            let make = |scale: &[f64]| {
                let cubes = (0..3)
                    .map(|i| {
                        let lambda = Vector::from_row_slice(&[sizes[2 * i] * scale[2 * i], sizes[2 * i + 1] * scale[2 * i + 1]]);
                        SkewCube::new(
                            Vector::from_row_slice(&centers[2 * i..2 * i + 2]),
                            GroupElem::from_parts(rotation2(angles[i]), lambda, &tag).unwrap(),
                        )
                        .unwrap()
                    })
                    .collect();
                SkewCubeTuple::new(2, tag.clone(), cubes).unwrap()
            };
            let t = make(&[1.0; 6]);
            if validate_tuple(&t, 1e-9).unwrap().valid {
                prop_assert!(validate_tuple(&make(&shrink), 1e-9).unwrap().valid);
            }
        }
    }
}
