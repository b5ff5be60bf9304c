//! JSON forms of cube tuples.
//!
//! ```json
//! {"m": 2, "group": "O·Λ", "cubes": [{"v": [0.5, 0.0], "g": [[0, -0.25], [0.25, 0]]}]}
//! ```
//!
//! The image form records `f(±½ e_d)` for every cube and coordinate next to
//! the matrices. Centers are recovered as midpoints, so a round trip through
//! it reproduces centers up to the rounding of one addition.

use serde::{Deserialize, Serialize, Serializer};

use super::{CustomGroup, GroupElem, GroupTag, SkewCube, SkewCubeTuple};
use crate::error::{Error, Result};
use crate::linalg::{Mat, Vector};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubeJson {
    pub v: Vec<f64>,
    pub g: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TupleJson {
    pub m: usize,
    pub group: String,
    pub cubes: Vec<CubeJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImageCube {
    /// `f(½ e_d)` for `d = 1..m`.
    pub plus: Vec<Vec<f64>>,
    /// `f(−½ e_d)` for `d = 1..m`.
    pub minus: Vec<Vec<f64>>,
    pub g: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImageTupleJson {
    pub m: usize,
    pub group: String,
    pub cubes: Vec<ImageCube>,
}

pub(crate) fn rows(a: &Mat) -> Vec<Vec<f64>> {
    (0..a.nrows()).map(|i| a.row(i).iter().cloned().collect()).collect()
}

pub(crate) fn from_rows(rows: &[Vec<f64>], m: usize) -> Result<Mat> {
    if rows.len() != m || rows.iter().any(|r| r.len() != m) {
        return Err(Error::Parse(format!("expected a {m}×{m} matrix")));
    }
    Ok(Mat::from_fn(m, m, |i, j| rows[i][j]))
}

pub(crate) fn ser_vectors<S: Serializer>(vs: &[Vector], s: S) -> std::result::Result<S::Ok, S::Error> {
    let raw: Vec<Vec<f64>> = vs.iter().map(|v| v.iter().cloned().collect()).collect();
    raw.serialize(s)
}

pub(crate) fn ser_frames<S: Serializer>(gs: &[GroupElem], s: S) -> std::result::Result<S::Ok, S::Error> {
    let raw: Vec<Vec<Vec<f64>>> = gs.iter().map(|g| rows(&g.matrix)).collect();
    raw.serialize(s)
}

impl SkewCubeTuple {
    pub fn to_json(&self) -> TupleJson {
        TupleJson {
            m: self.m,
            group: self.tag.to_string(),
            cubes: self
                .cubes
                .iter()
                .map(|c| CubeJson {
                    v: c.v.iter().cloned().collect(),
                    g: rows(&c.g.matrix),
                })
                .collect(),
        }
    }

    /// Checks group membership of every matrix; geometric validity is left
    /// to [`validate_tuple`](super::validate_tuple).
    pub fn from_json(raw: &TupleJson, customs: &[CustomGroup]) -> Result<SkewCubeTuple> {
        let tag = GroupTag::parse_with(&raw.group, customs)?;
        let cubes = raw
            .cubes
            .iter()
            .map(|c| {
                if c.v.len() != raw.m {
                    return Err(Error::Parse(format!("center of length {} in dimension {}", c.v.len(), raw.m)));
                }
                SkewCube::new(Vector::from_vec(c.v.clone()), GroupElem::new(from_rows(&c.g, raw.m)?, &tag)?)
            })
            .collect::<Result<_>>()?;
        SkewCubeTuple::new(raw.m, tag, cubes)
    }

    pub fn parse(text: &str) -> Result<SkewCubeTuple> {
        let raw: TupleJson = serde_json::from_str(text)?;
        SkewCubeTuple::from_json(&raw, &[])
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("plain data serializes")
    }

    pub fn to_images(&self) -> ImageTupleJson {
        let m = self.m;
        ImageTupleJson {
            m,
            group: self.tag.to_string(),
            cubes: self
                .cubes
                .iter()
                .map(|c| {
                    let image = |d: usize, s: f64| -> Vec<f64> { (0..m).map(|r| c.v[r] + s * 0.5 * c.g.matrix[(r, d)]).collect() };
                    ImageCube {
                        plus: (0..m).map(|d| image(d, 1.0)).collect(),
                        minus: (0..m).map(|d| image(d, -1.0)).collect(),
                        g: rows(&c.g.matrix),
                    }
                })
                .collect(),
        }
    }

    /// Rebuilds a tuple from its image form, rejecting images that disagree
    /// with the recorded matrices by more than `1e-12`.
    pub fn from_images(raw: &ImageTupleJson, customs: &[CustomGroup]) -> Result<SkewCubeTuple> {
        let m = raw.m;
        let tag = GroupTag::parse_with(&raw.group, customs)?;
        let cubes = raw
            .cubes
            .iter()
            .map(|c| {
                if c.plus.len() != m || c.minus.len() != m || c.plus.iter().chain(&c.minus).any(|p| p.len() != m) {
                    return Err(Error::Parse(format!("image lists must have {m} points of length {m}")));
                }
                let g = GroupElem::new(from_rows(&c.g, m)?, &tag)?;
                let mut v = Vector::zeros(m);
                for r in 0..m {
                    v[r] = (0..m).map(|d| (c.plus[d][r] + c.minus[d][r]) / 2.0).sum::<f64>() / m as f64;
                }
                for d in 0..m {
                    for r in 0..m {
                        let col = c.plus[d][r] - c.minus[d][r];
                        if (col - g.matrix[(r, d)]).abs() > 1e-12 {
                            return Err(Error::Parse(format!("images disagree with the matrix at ({r}, {d})")));
                        }
                    }
                }
                SkewCube::new(v, g)
            })
            .collect::<Result<_>>()?;
        SkewCubeTuple::new(m, tag, cubes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubes::ops::tuple_deviation;
    use crate::cubes::validate_tuple;

    const EXAMPLE: &str = r#"{"m":2, "group":"O·Λ", "cubes":[{"v":[0.5,0.0], "g":[[0,-0.25],[0.25,0]]}]}"#;

    #[test]
    fn example_parses_and_validates() {
        let t = SkewCubeTuple::parse(EXAMPLE).unwrap();
        assert_eq!(t.tag, GroupTag::OLambda);
        assert!(validate_tuple(&t, 1e-9).unwrap().valid);
        let again = SkewCubeTuple::parse(&t.to_json_string()).unwrap();
        assert_eq!(again, t);
    }

    #[test]
    fn images_round_trip() {
        let t = SkewCubeTuple::parse(EXAMPLE).unwrap();
        let text = serde_json::to_string(&t.to_images()).unwrap();
        let back = SkewCubeTuple::from_images(&serde_json::from_str(&text).unwrap(), &[]).unwrap();
        assert!(tuple_deviation(&back, &t) <= 1e-15);
        assert_eq!(back.cubes[0].g, t.cubes[0].g);
    }

    #[test]
    fn inconsistent_images_are_rejected() {
        let t = SkewCubeTuple::parse(EXAMPLE).unwrap();
        let mut raw = t.to_images();
        raw.cubes[0].plus[0][0] += 0.1;
        assert!(SkewCubeTuple::from_images(&raw, &[]).is_err());
    }

    #[test]
    fn bad_inputs_are_parse_or_group_errors() {
        assert!(matches!(SkewCubeTuple::parse("{"), Err(Error::Parse(_))));
        let shear = r#"{"m":2, "group":"O·Λ", "cubes":[{"v":[0,0], "g":[[0.5,0.1],[0,0.5]]}]}"#;
        assert!(matches!(SkewCubeTuple::parse(shear), Err(Error::NotInGroup { .. })));
        let short = r#"{"m":2, "group":"Λ", "cubes":[{"v":[0], "g":[[0.5,0],[0,0.5]]}]}"#;
        assert!(SkewCubeTuple::parse(short).is_err());
    }
}
