//! Dilation groups, given by their image in `GL(m)`.
//!
//! Every tag describes a subgroup `K·Λ(m)` with `K ⊂ O(m)`: membership of a
//! matrix is decided from its sign-fixed QR factors.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{block_diag, max_abs, off_diagonal, orthogonality_defect, qr_split, Mat, Vector, EPS_LIN};

/// A user-defined orthogonal part, decided by a predicate on `O(m)`.
#[derive(Clone)]
pub struct CustomGroup {
    pub name: String,
    pub member: Arc<dyn Fn(&Mat) -> bool + Send + Sync>,
}

impl CustomGroup {
    pub fn new<F: Fn(&Mat) -> bool + Send + Sync + 'static>(name: &str, member: F) -> Self {
        CustomGroup {
            name: name.to_string(),
            member: Arc::new(member),
        }
    }
}

#[derive(Clone)]
pub enum GroupTag {
    /// Positive diagonal matrices.
    Lambda,
    /// `O(m)·Λ(m)`.
    OLambda,
    /// `SO(m)·Λ(m)`.
    SOLambda,
    /// `G × H` acting block-diagonally on `ℝ^m × ℝ^n`; the `usize` is `m`.
    Product(Box<GroupTag>, usize, Box<GroupTag>),
    Custom(CustomGroup),
}

impl PartialEq for GroupTag {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (GroupTag::Lambda, GroupTag::Lambda) | (GroupTag::OLambda, GroupTag::OLambda) | (GroupTag::SOLambda, GroupTag::SOLambda) => true,
            (GroupTag::Product(a, m, b), GroupTag::Product(c, n, d)) => m == n && a == c && b == d,
            (GroupTag::Custom(a), GroupTag::Custom(b)) => a.name == b.name,
            _ => false,
        }
    }
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupTag::Lambda => write!(f, "Λ"),
            GroupTag::OLambda => write!(f, "O·Λ"),
            GroupTag::SOLambda => write!(f, "SO·Λ"),
            GroupTag::Product(a, m, b) => match **a {
                GroupTag::Product(..) => write!(f, "[{a}]({m})×{b}"),
                _ => write!(f, "{a}({m})×{b}"),
            },
            GroupTag::Custom(c) => write!(f, "custom:{}", c.name),
        }
    }
}

impl fmt::Debug for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

const NAMES: [(&str, fn() -> GroupTag); 8] = [
    ("SO·Λ", || GroupTag::SOLambda),
    ("SO*Lambda", || GroupTag::SOLambda),
    ("SOLambda", || GroupTag::SOLambda),
    ("O·Λ", || GroupTag::OLambda),
    ("O*Lambda", || GroupTag::OLambda),
    ("OLambda", || GroupTag::OLambda),
    ("Λ", || GroupTag::Lambda),
    ("Lambda", || GroupTag::Lambda),
];

impl GroupTag {
    pub fn product(left: GroupTag, m: usize, right: GroupTag) -> GroupTag {
        GroupTag::Product(Box::new(left), m, Box::new(right))
    }

    /// Parses the [`Display`](fmt::Display) form. Custom tags are resolved
    /// against `customs` by name.
    pub fn parse_with(s: &str, customs: &[CustomGroup]) -> Result<GroupTag> {
        let (tag, rest) = Self::parse_prefix(s.trim(), customs)?;
        if !rest.is_empty() {
            return Err(Error::Parse(format!("trailing {rest:?} in group tag {s:?}")));
        }
        Ok(tag)
    }

    pub fn parse(s: &str) -> Result<GroupTag> {
        Self::parse_with(s, &[])
    }

    fn parse_prefix<'a>(s: &'a str, customs: &[CustomGroup]) -> Result<(GroupTag, &'a str)> {
        let (left, rest) = if let Some(inner) = s.strip_prefix('[') {
            let mut depth = 1;
            let close = inner
                .char_indices()
                .find(|&(_, c)| {
                    match c {
                        '[' => depth += 1,
                        ']' => depth -= 1,
                        _ => {}
                    }
                    depth == 0
                })
                .map(|(i, _)| i)
                .ok_or_else(|| Error::Parse(format!("unbalanced bracket in {s:?}")))?;
            (Self::parse_with(&inner[..close], customs)?, &inner[close + 1..])
        } else if let Some(name) = s.strip_prefix("custom:") {
            let end = name.find(['(', '×', ']']).unwrap_or(name.len());
            let c = customs
                .iter()
                .find(|c| c.name == name[..end])
                .ok_or_else(|| Error::Parse(format!("unknown custom group {:?}", &name[..end])))?;
            (GroupTag::Custom(c.clone()), &name[end..])
        } else {
            let (name, make) = NAMES
                .iter()
                .find(|(n, _)| s.starts_with(n))
                .ok_or_else(|| Error::Parse(format!("unknown group tag {s:?}")))?;
            (make(), &s[name.len()..])
        };
        let Some(after) = rest.strip_prefix('(') else {
            return Ok((left, rest));
        };
        let close = after.find(')').ok_or_else(|| Error::Parse(format!("unclosed dimension in {s:?}")))?;
        let m: usize = after[..close]
            .parse()
            .map_err(|_| Error::Parse(format!("bad dimension in {s:?}")))?;
        let after = after[close + 1..]
            .strip_prefix('×')
            .or_else(|| after[close + 1..].strip_prefix('x'))
            .ok_or_else(|| Error::Parse(format!("expected × in {s:?}")))?;
        let (right, rest) = Self::parse_prefix(after, customs)?;
        Ok((GroupTag::product(left, m, right), rest))
    }

    /// Whether an orthogonal matrix lies in the orthogonal part of the group.
    fn contains_orthogonal(&self, o: &Mat, tol: f64) -> std::result::Result<(), String> {
        match self {
            GroupTag::Lambda => {
                let d = max_abs(&(o - Mat::identity(o.nrows(), o.ncols())));
                if d > tol {
                    return Err(format!("orthogonal factor differs from the identity by {d:e}"));
                }
            }
            GroupTag::OLambda => {}
            GroupTag::SOLambda => {
                if o.nrows() > 0 && o.determinant() < 0.0 {
                    return Err("orthogonal factor has determinant -1".into());
                }
            }
            GroupTag::Custom(c) => {
                if !(c.member)(o) {
                    return Err(format!("orthogonal factor rejected by {}", c.name));
                }
            }
            GroupTag::Product(..) => unreachable!("products are split before this point"),
        }
        Ok(())
    }

    /// The factors `(o(g), λ(g))` of a member, or the reason it is not one.
    pub fn split_member(&self, a: &Mat, tol: f64) -> std::result::Result<(Mat, Vector), String> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err("matrix is not square".into());
        }
        if let GroupTag::Product(left, m, right) = self {
            let m = *m;
            if m > n {
                return Err(format!("left factor dimension {m} exceeds {n}"));
            }
            let off = a.view((0, m), (m, n - m)).iter().chain(a.view((m, 0), (n - m, m)).iter()).fold(0.0f64, |w, x| w.max(x.abs()));
            if off > tol {
                return Err(format!("off-block entries up to {off:e}"));
            }
            let (o1, l1) = left.split_member(&a.view((0, 0), (m, m)).into_owned(), tol)?;
            let (o2, l2) = right.split_member(&a.view((m, m), (n - m, n - m)).into_owned(), tol)?;
            let lambda = Vector::from_iterator(n, l1.iter().chain(l2.iter()).cloned());
            return Ok((block_diag(&o1, &o2), lambda));
        }
        let (o, r) = qr_split(a).map_err(|e| e.to_string())?;
        let off = off_diagonal(&r);
        if off > tol {
            return Err(format!("triangular factor has off-diagonal entries up to {off:e}"));
        }
        self.contains_orthogonal(&o, tol)?;
        Ok((o, r.diagonal()))
    }

    pub fn contains(&self, a: &Mat) -> bool {
        self.split_member(a, EPS_LIN).is_ok()
    }
}

/// `check_dilation_member` at tolerance [`EPS_LIN`].
pub fn check_dilation_member(a: &Mat, tag: &GroupTag) -> bool {
    tag.contains(a)
}

/// A group element, stored through its matrix together with the factors
/// `matrix = o·diag(lambda)`.
#[derive(Clone, Debug)]
pub struct GroupElem {
    pub matrix: Mat,
    pub o: Mat,
    pub lambda: Vector,
    pub tag: GroupTag,
}

impl PartialEq for GroupElem {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix && self.tag == other.tag
    }
}

impl GroupElem {
    pub fn new(matrix: Mat, tag: &GroupTag) -> Result<GroupElem> {
        let (o, lambda) = tag.split_member(&matrix, EPS_LIN).map_err(|reason| Error::NotInGroup {
            tag: tag.to_string(),
            reason,
        })?;
        Ok(GroupElem {
            matrix,
            o,
            lambda,
            tag: tag.clone(),
        })
    }

    /// `o·diag(lambda)`, keeping the given factors as they are.
    pub fn from_parts(o: Mat, lambda: Vector, tag: &GroupTag) -> Result<GroupElem> {
        let not_in = |reason: String| Error::NotInGroup {
            tag: tag.to_string(),
            reason,
        };
        if o.nrows() != lambda.len() || o.ncols() != lambda.len() {
            return Err(Error::DimensionMismatch {
                expected: lambda.len(),
                found: o.nrows(),
            });
        }
        if lambda.iter().any(|&x| !(x > 0.0)) {
            return Err(not_in("dilation part has a non-positive entry".into()));
        }
        let defect = orthogonality_defect(&o);
        if defect > EPS_LIN {
            return Err(not_in(format!("orthogonal part is off by {defect:e}")));
        }
        let matrix = &o * Mat::from_diagonal(&lambda);
        tag.split_member(&matrix, EPS_LIN).map_err(not_in)?;
        Ok(GroupElem {
            matrix,
            o,
            lambda,
            tag: tag.clone(),
        })
    }

    pub fn identity(m: usize, tag: &GroupTag) -> GroupElem {
        GroupElem {
            matrix: Mat::identity(m, m),
            o: Mat::identity(m, m),
            lambda: Vector::from_element(m, 1.0),
            tag: tag.clone(),
        }
    }

    pub fn scalar(m: usize, s: f64, tag: &GroupTag) -> Result<GroupElem> {
        GroupElem::from_parts(Mat::identity(m, m), Vector::from_element(m, s), tag)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `self · other`, which must stay in the group.
    pub fn compose(&self, other: &GroupElem) -> Result<GroupElem> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        GroupElem::new(&self.matrix * &other.matrix, &self.tag)
    }

    /// Max-entry distance between the matrices.
    pub fn deviation(&self, other: &GroupElem) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        max_abs(&(&self.matrix - &other.matrix))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rotation2;

    fn diag(x: &[f64]) -> Mat {
        Mat::from_diagonal(&Vector::from_row_slice(x))
    }

    #[test]
    fn membership_examples() {
        assert!(check_dilation_member(&diag(&[2.0, 3.0]), &GroupTag::Lambda));
        let rot = rotation2(0.5) * diag(&[1.0, 2.0]);
        assert!(!check_dilation_member(&rot, &GroupTag::Lambda));
        assert!(check_dilation_member(&rot, &GroupTag::SOLambda));
        let skew = Mat::from_row_slice(2, 2, &[0.0, -2.0, 3.0, 0.0]);
        assert!(check_dilation_member(&skew, &GroupTag::OLambda));
        let shear = Mat::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert!(!check_dilation_member(&shear, &GroupTag::OLambda));
        let reflect = diag(&[-1.0, 2.0]);
        assert!(check_dilation_member(&reflect, &GroupTag::OLambda));
        assert!(!check_dilation_member(&reflect, &GroupTag::SOLambda));
    }

    #[test]
    fn product_membership_is_blockwise() {
        let tag = GroupTag::product(GroupTag::OLambda, 1, GroupTag::Lambda);
        assert!(tag.contains(&diag(&[-0.5, 1.0])));
        assert!(!tag.contains(&block_diag(&diag(&[0.5]), &(diag(&[-1.0]) * 0.5))));
        let mut coupled = diag(&[0.5, 0.5]);
        coupled[(0, 1)] = 0.1;
        assert!(!tag.contains(&coupled));
    }

    #[test]
    fn tags_round_trip_through_text() {
        let c = CustomGroup::new("quarter", |o: &Mat| {
            o.iter().all(|x| x.abs() < 1e-9 || (x.abs() - 1.0).abs() < 1e-9)
        });
        let tags = [
            GroupTag::Lambda,
            GroupTag::OLambda,
            GroupTag::SOLambda,
            GroupTag::product(GroupTag::OLambda, 2, GroupTag::Lambda),
            GroupTag::product(GroupTag::product(GroupTag::Lambda, 1, GroupTag::SOLambda), 3, GroupTag::OLambda),
            GroupTag::product(GroupTag::Custom(c.clone()), 2, GroupTag::Lambda),
        ];
        for t in &tags {
            assert_eq!(&GroupTag::parse_with(&t.to_string(), std::slice::from_ref(&c)).unwrap(), t, "{t}");
        }
        assert_eq!(GroupTag::parse("OLambda").unwrap(), GroupTag::OLambda);
        assert!(GroupTag::parse("Spin").is_err());
        assert!(GroupTag::parse("Λ(2)").is_err());
        assert!(GroupTag::parse("custom:quarter").is_err());
    }

    #[test]
    fn custom_predicates_are_consulted() {
        let c = CustomGroup::new("quarter", |o: &Mat| {
            o.iter().all(|x| x.abs() < 1e-9 || (x.abs() - 1.0).abs() < 1e-9)
        });
        let tag = GroupTag::Custom(c);
        assert!(tag.contains(&(rotation2(std::f64::consts::FRAC_PI_2) * 0.5)));
        assert!(!tag.contains(&(rotation2(0.3) * 0.5)));
    }

    #[test]
    fn parts_are_kept_exactly() {
        let o = rotation2(0.25);
        let lambda = Vector::from_row_slice(&[0.1, 0.3]);
        let g = GroupElem::from_parts(o.clone(), lambda.clone(), &GroupTag::SOLambda).unwrap();
        assert_eq!(g.o, o);
        assert_eq!(g.lambda, lambda);
        assert!(GroupElem::from_parts(o.clone(), lambda.clone(), &GroupTag::Lambda).is_err());
        assert!(GroupElem::from_parts(o, Vector::from_row_slice(&[0.1, 0.0]), &GroupTag::OLambda).is_err());
    }

    #[test]
    fn non_closure_of_general_o_lambda() {
        // (o_1 D_1)(o_2 D_2) has a diagonal triangular factor only when
        // D_1 o_2 D_1^{-1} is orthogonal
        let a = GroupElem::new(diag(&[1.0, 0.5]), &GroupTag::OLambda).unwrap();
        let b = GroupElem::new(rotation2(0.4), &GroupTag::OLambda).unwrap();
        assert!(matches!(a.compose(&b), Err(Error::NotInGroup { .. })));
        let s = GroupElem::new(Mat::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]), &GroupTag::OLambda).unwrap();
        assert!(a.compose(&s).is_ok());
    }
}
