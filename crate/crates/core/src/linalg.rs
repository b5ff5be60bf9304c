//! Small dense linear algebra on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type Mat = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Default tolerance for factorization identities and membership.
pub const EPS_LIN: f64 = 1e-10;
/// Determinants at or below this are treated as singular.
pub const EPS_DET: f64 = 1e-12;

/// Largest absolute entry.
pub fn max_abs(a: &Mat) -> f64 {
    a.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

pub fn max_abs_vec(v: &Vector) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// `‖OᵀO − id‖` in the max-entry norm.
pub fn orthogonality_defect(o: &Mat) -> f64 {
    max_abs(&(o.transpose() * o - Mat::identity(o.nrows(), o.ncols())))
}

/// Largest off-diagonal entry.
pub fn off_diagonal(a: &Mat) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            if i != j {
                worst = worst.max(a[(i, j)].abs());
            }
        }
    }
    worst
}

/// `A = O·R` with `O` orthogonal and `R` upper triangular with positive
/// diagonal. The factorization is unique for invertible `A`, so the result
/// does not depend on how the Householder reflections were signed.
pub fn qr_split(a: &Mat) -> Result<(Mat, Mat)> {
    let m = a.nrows();
    if a.ncols() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: a.ncols(),
        });
    }
    if m == 0 {
        return Ok((Mat::zeros(0, 0), Mat::zeros(0, 0)));
    }
    let qr = a.clone().qr();
    let (mut q, mut r) = (qr.q(), qr.r());
    let diag: Vec<f64> = (0..m).map(|i| r[(i, i)].abs()).collect();
    let det: f64 = diag.iter().product();
    if det <= EPS_DET {
        let hi = diag.iter().cloned().fold(0.0, f64::max);
        let lo = diag.iter().cloned().fold(f64::INFINITY, f64::min);
        return Err(Error::Singular {
            det,
            ratio: if hi > 0.0 { lo / hi } else { 0.0 },
        });
    }
    for i in 0..m {
        if r[(i, i)] < 0.0 {
            q.column_mut(i).neg_mut();
            r.row_mut(i).neg_mut();
        }
    }
    Ok((q, r))
}

/// Block diagonal `diag(a, b)`.
pub fn block_diag(a: &Mat, b: &Mat) -> Mat {
    let (m, n) = (a.nrows(), b.nrows());
    let mut out = Mat::zeros(m + n, m + n);
    out.view_mut((0, 0), (m, m)).copy_from(a);
    out.view_mut((m, m), (n, n)).copy_from(b);
    out
}

/// Rotation of the plane by `theta`.
pub fn rotation2(theta: f64) -> Mat {
    let (s, c) = theta.sin_cos();
    Mat::from_row_slice(2, 2, &[c, -s, s, c])
}

/// A Haar-distributed orthogonal matrix: the sign-fixed QR factor of a
/// Gaussian matrix.
pub fn random_orthogonal<R: Rng>(rng: &mut R, m: usize) -> Mat {
    loop {
        let g = Mat::from_fn(m, m, |_, _| rng.sample::<f64, _>(StandardNormal));
        if let Ok((q, _)) = qr_split(&g) {
            return q;
        }
    }
}

/// A Haar-distributed special orthogonal matrix.
pub fn random_special_orthogonal<R: Rng>(rng: &mut R, m: usize) -> Mat {
    let mut q = random_orthogonal(rng, m);
    if m > 0 && q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}

/// A uniformly random signed permutation matrix.
pub fn random_signed_permutation<R: Rng>(rng: &mut R, m: usize, special: bool) -> Mat {
    use rand::seq::SliceRandom;
    let mut cols: Vec<usize> = (0..m).collect();
    cols.shuffle(rng);
    let mut out = Mat::zeros(m, m);
    for (i, &j) in cols.iter().enumerate() {
        out[(i, j)] = if rng.gen::<bool>() { 1.0 } else { -1.0 };
    }
    if special && m > 0 && out.determinant() < 0.0 {
        out.row_mut(0).neg_mut();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_is_its_own_factor() {
        let a = Mat::from_diagonal(&Vector::from_vec(vec![2.0, 3.0]));
        let (o, r) = qr_split(&a).unwrap();
        assert!(max_abs(&(o - Mat::identity(2, 2))) < 1e-15);
        assert!(max_abs(&(r - a)) < 1e-15);
    }

    #[test]
    fn orthogonal_has_unit_triangle() {
        let a = rotation2(0.7);
        let (o, r) = qr_split(&a).unwrap();
        assert!(max_abs(&(o - &a)) < 1e-15);
        assert!(max_abs(&(r - Mat::identity(2, 2))) < 1e-15);
    }

    #[test]
    fn skew_example() {
        let a = Mat::from_row_slice(2, 2, &[0.0, -2.0, 3.0, 0.0]);
        let (o, r) = qr_split(&a).unwrap();
        assert!(max_abs(&(&o - Mat::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]))) < 1e-15);
        assert!(max_abs(&(&r - Mat::from_row_slice(2, 2, &[3.0, 0.0, 0.0, 2.0]))) < 1e-15);
        assert!(max_abs(&(o * r - a)) < 1e-15);
    }

    #[test]
    fn singular_is_rejected_with_diagnostic() {
        let a = Mat::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        match qr_split(&a) {
            Err(Error::Singular { ratio, .. }) => assert!(ratio < 1e-12),
            other => panic!("{other:?}"),
        }
        assert!(qr_split(&Mat::zeros(2, 3)).is_err());
    }

    #[test]
    fn random_factors_reconstruct() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for m in 1..5 {
            for _ in 0..50 {
                let a = Mat::from_fn(m, m, |_, _| rng.gen_range(-1.0..1.0));
                let Ok((o, r)) = qr_split(&a) else { continue };
                assert!(orthogonality_defect(&o) < 1e-12);
                assert!((0..m).all(|i| r[(i, i)] > 0.0));
                assert!((0..m).all(|i| (0..i).all(|j| r[(i, j)] == 0.0)));
                assert!(max_abs(&(o * r - a)) < 1e-12);
            }
        }
    }

    #[test]
    fn samplers_are_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for m in 1..5 {
            assert!(orthogonality_defect(&random_orthogonal(&mut rng, m)) < 1e-12);
            assert!(random_special_orthogonal(&mut rng, m).determinant() > 0.0);
            let p = random_signed_permutation(&mut rng, m, true);
            assert_eq!(orthogonality_defect(&p), 0.0);
            assert!(p.determinant() > 0.0);
        }
    }

    #[test]
    fn block_diagonal_layout() {
        let a = Mat::from_element(1, 1, 2.0);
        let b = rotation2(0.3);
        let d = block_diag(&a, &b);
        assert_eq!(d[(0, 0)], 2.0);
        assert_eq!(d[(0, 1)], 0.0);
        assert_eq!(d.view((1, 1), (2, 2)), b);
    }
}
