//! Deformation retractions of `C_m^G(k)` onto equidiameter and then
//! freewheeling tuples, and the splitting of a freewheeling tuple into a
//! classical equidiameter tuple and a rotation per cube.

use rand::Rng;
use serde::Serialize;

use crate::cubes::io::TupleJson;
use crate::cubes::{containment_margin, pair_margin, tuple_deviation, GroupElem, GroupTag, SkewCube, SkewCubeTuple};
use crate::error::{Error, Result};
use crate::linalg::{max_abs_vec, random_orthogonal, Mat, Vector};

/// Smallest dilation entry over all cubes; `None` for `k = 0`.
pub fn lambda_min(t: &SkewCubeTuple) -> Option<f64> {
    t.cubes.iter().flat_map(|c| c.g.lambda.iter().cloned()).reduce(f64::min)
}

/// Every dilation part is `s·id` for one `s`, entrywise within `tol`.
pub fn is_equidiameter(t: &SkewCubeTuple, tol: f64) -> bool {
    let entries = t.cubes.iter().flat_map(|c| c.g.lambda.iter().cloned());
    let (lo, hi) = entries.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
    t.arity() == 0 || hi - lo <= tol
}

fn common_scalar(t: &SkewCubeTuple) -> f64 {
    t.cubes.iter().flat_map(|c| c.g.lambda.iter().cloned()).fold(0.0, f64::max)
}

/// Distance below which two centers violate the ball criterion at scalar
/// `s`: the circumscribed balls of radius `s√m` must be at least `2√m·tol`
/// apart, which is what an LP margin of `tol` needs in the worst
/// (corner-to-corner) orientation.
fn ball_gap(t: &SkewCubeTuple, s: f64, tol: f64) -> f64 {
    let r = (t.m as f64).sqrt();
    2.0 * s * r + 2.0 * r * tol
}

/// Pairs and cubes violating the ball criterion at the common scalar.
fn ball_violations(t: &SkewCubeTuple, tol: f64) -> (Vec<(usize, usize)>, Vec<usize>) {
    let s = common_scalar(t);
    let root = (t.m as f64).sqrt();
    let gap = ball_gap(t, s, tol);
    let mut pairs = Vec::new();
    for i in 0..t.arity() {
        for j in i + 1..t.arity() {
            if (&t.cubes[i].v - &t.cubes[j].v).norm() < gap {
                pairs.push((i, j));
            }
        }
    }
    let boundary = (0..t.arity())
        .filter(|&i| s * root > 1.0 - max_abs_vec(&t.cubes[i].v) - tol)
        .collect();
    (pairs, boundary)
}

/// The ball oracle: equidiameter with scalar `s`, circumscribed balls
/// `B(v_i, s√m)` pairwise separated and inside the cube, all with slack.
pub fn is_freewheeling(t: &SkewCubeTuple, tol: f64) -> bool {
    if !is_equidiameter(t, tol) {
        return false;
    }
    let (pairs, boundary) = ball_violations(t, tol);
    pairs.is_empty() && boundary.is_empty()
}

fn with_lambdas(t: &SkewCubeTuple, f: impl Fn(&SkewCube) -> Vector) -> Result<SkewCubeTuple> {
    let cubes = t
        .cubes
        .iter()
        .map(|c| {
            let lambda = f(c);
            if lambda == c.g.lambda {
                return Ok(c.clone());
            }
            Ok(SkewCube {
                v: c.v.clone(),
                g: GroupElem::from_parts(c.g.o.clone(), lambda, &c.g.tag)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(SkewCubeTuple {
        m: t.m,
        tag: t.tag.clone(),
        cubes,
    })
}

fn check_time(time: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&time) {
        return Err(Error::InvalidTuple(format!("homotopy time {time} outside [0, 1]")));
    }
    Ok(())
}

/// Interpolates each entry toward `target`, leaving entries already equal
/// to it untouched.
fn toward(lambda: &Vector, target: f64, time: f64) -> Vector {
    lambda.map(|x| if x == target { x } else { (1.0 - time) * x + time * target })
}

/// `(v_i, o(g_i)((1 − t)λ(g_i) + t·λ^min))` with `λ^min` the smallest
/// dilation entry over the whole tuple.
pub fn equidiameter_homotopy(t: &SkewCubeTuple, time: f64) -> Result<SkewCubeTuple> {
    check_time(time)?;
    let Some(target) = lambda_min(t) else {
        return Ok(t.clone());
    };
    with_lambdas(t, |c| toward(&c.g.lambda, target, time))
}

/// Coefficient of the minimal center distance in the freewheeling scalar.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Coefficient {
    /// `1/(2√m)` with the boundary clamp.
    Default,
    /// `√2` without the boundary clamp.
    Literal,
    /// A caller-chosen coefficient, with the boundary clamp.
    Custom(f64),
}

/// `λ^free`: the common scalar at the end of the freewheeling homotopy.
pub fn freewheel_scalar(t: &SkewCubeTuple, coeff: Coefficient, tol: f64) -> Result<f64> {
    if !is_equidiameter(t, tol) {
        return Err(Error::NotEquidiameter);
    }
    let s = common_scalar(t);
    if is_freewheeling(t, tol) {
        return Ok(s);
    }
    let root = (t.m as f64).sqrt();
    let mut d_min = f64::INFINITY;
    for i in 0..t.arity() {
        for j in i + 1..t.arity() {
            d_min = d_min.min((&t.cubes[i].v - &t.cubes[j].v).norm());
        }
    }
    let (c, clamp) = match coeff {
        Coefficient::Default => (1.0 / (2.0 * root), true),
        Coefficient::Literal => (2f64.sqrt(), false),
        Coefficient::Custom(c) => (c, true),
    };
    // twice the ball slack, so the endpoint clears the ball gap despite rounding
    let mut out = s.min(c * (d_min - 4.0 * root * tol));
    if clamp {
        let v_max = t.cubes.iter().map(|c| max_abs_vec(&c.v)).fold(0.0, f64::max);
        out = out.min((1.0 - v_max - 2.0 * tol) / root);
    }
    if !(out > 0.0) {
        return Err(Error::NotFreewheeling);
    }
    Ok(out)
}

/// Shrinks an equidiameter tuple to the scalar [`freewheel_scalar`];
/// freewheeling tuples are fixed for all times.
pub fn freewheeling_homotopy(t: &SkewCubeTuple, time: f64, coeff: Coefficient, tol: f64) -> Result<SkewCubeTuple> {
    check_time(time)?;
    let target = freewheel_scalar(t, coeff, tol)?;
    if is_freewheeling(t, tol) {
        return Ok(t.clone());
    }
    with_lambdas(t, |c| toward(&c.g.lambda, target, time))
}

/// `{(v_i, s·id)}` over `Λ` and the orthogonal parts `o(g_i)`.
pub fn freewheel_split(t: &SkewCubeTuple, tol: f64) -> Result<(SkewCubeTuple, Vec<Mat>)> {
    if !is_freewheeling(t, tol) {
        return Err(Error::NotFreewheeling);
    }
    let s = common_scalar(t);
    let lambda = &GroupTag::Lambda;
    let classical = t
        .cubes
        .iter()
        .map(|c| {
            Ok(SkewCube {
                v: c.v.clone(),
                g: GroupElem::scalar(t.m, s, lambda)?,
            })
        })
        .collect::<Result<_>>()?;
    let rotations = t.cubes.iter().map(|c| c.g.o.clone()).collect();
    Ok((SkewCubeTuple::new(t.m, lambda.clone(), classical)?, rotations))
}

/// Inverse of [`freewheel_split`]: rotates each classical cube by `o_i`
/// inside the group `tag`.
pub fn freewheel_unsplit(classical: &SkewCubeTuple, rotations: &[Mat], tag: &GroupTag) -> Result<SkewCubeTuple> {
    if rotations.len() != classical.arity() {
        return Err(Error::ArityMismatch {
            expected: classical.arity(),
            found: rotations.len(),
        });
    }
    let cubes = classical
        .cubes
        .iter()
        .zip(rotations)
        .map(|(c, o)| {
            Ok(SkewCube {
                v: c.v.clone(),
                g: GroupElem::from_parts(o.clone(), c.g.lambda.clone(), tag)?,
            })
        })
        .collect::<Result<_>>()?;
    SkewCubeTuple::new(classical.m, tag.clone(), cubes)
}

/// The Householder reflection taking the unit diagonal `(1, .., 1)/√m` to
/// the unit vector `u`: it points a corner of the cube along `u`.
fn corner_toward(m: usize, u: &Vector) -> Mat {
    let c = Vector::from_element(m, 1.0 / (m as f64).sqrt());
    let w = &c - u;
    let n2 = w.norm_squared();
    if n2 < 1e-300 {
        return Mat::identity(m, m);
    }
    Mat::identity(m, m) - (&w * w.transpose()) * (2.0 / n2)
}

/// Whether `{(v_i, o_i·s)}` is valid with containment and pair margins at
/// least `tol`.
fn rotated_valid(t: &SkewCubeTuple, s: f64, os: &[Mat], tol: f64) -> Result<bool> {
    let tag = GroupTag::OLambda;
    let cubes: Vec<SkewCube> = t
        .cubes
        .iter()
        .zip(os)
        .map(|(c, o)| {
            Ok(SkewCube {
                v: c.v.clone(),
                g: GroupElem::from_parts(o.clone(), Vector::from_element(t.m, s), &tag)?,
            })
        })
        .collect::<Result<_>>()?;
    if cubes.iter().any(|c| containment_margin(c) < tol) {
        return Ok(false);
    }
    for i in 0..cubes.len() {
        for j in i + 1..cubes.len() {
            if pair_margin(&cubes[i], &cubes[j])? < tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RotationOracle {
    pub samples: usize,
    pub all_valid: bool,
    /// Sample index of the first invalid rotation tuple.
    pub first_invalid: Option<usize>,
}

/// The randomized freewheeling oracle: `random` Haar samples of
/// `(o_1, .., o_k)`, followed by one adversarial sample per violation of
/// the ball criterion, pointing corners at each other or at the boundary.
/// Non-equidiameter tuples are rejected before sampling.
pub fn rotation_oracle<R: Rng>(t: &SkewCubeTuple, random: usize, tol: f64, rng: &mut R) -> Result<RotationOracle> {
    if !is_equidiameter(t, tol) {
        return Ok(RotationOracle {
            samples: 0,
            all_valid: false,
            first_invalid: None,
        });
    }
    let (m, k) = (t.m, t.arity());
    let s = common_scalar(t);
    let mut samples: Vec<Vec<Mat>> = (0..random).map(|_| (0..k).map(|_| random_orthogonal(rng, m)).collect()).collect();
    let (pairs, boundary) = ball_violations(t, tol);
    for (i, j) in pairs {
        let mut os: Vec<Mat> = (0..k).map(|_| random_orthogonal(rng, m)).collect();
        let d = &t.cubes[j].v - &t.cubes[i].v;
        let u = if d.norm() > 0.0 { d.normalize() } else { Vector::from_fn(m, |r, _| if r == 0 { 1.0 } else { 0.0 }) };
        os[i] = corner_toward(m, &u);
        os[j] = corner_toward(m, &-u);
        samples.push(os);
    }
    for i in boundary {
        let mut os: Vec<Mat> = (0..k).map(|_| random_orthogonal(rng, m)).collect();
        let v = &t.cubes[i].v;
        let d = (0..m).max_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs())).unwrap_or(0);
        let u = Vector::from_fn(m, |r, _| if r == d { if v[d] < 0.0 { -1.0 } else { 1.0 } } else { 0.0 });
        os[i] = corner_toward(m, &u);
        samples.push(os);
    }
    for (n, os) in samples.iter().enumerate() {
        if !rotated_valid(t, s, os, tol)? {
            return Ok(RotationOracle {
                samples: samples.len(),
                all_valid: false,
                first_invalid: Some(n),
            });
        }
    }
    Ok(RotationOracle {
        samples: samples.len(),
        all_valid: true,
        first_invalid: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Equidiameter,
    Freewheeling,
}

/// Frames of a homotopy on a time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct HomotopyTrace {
    pub times: Vec<f64>,
    pub frames: Vec<SkewCubeTuple>,
}

#[derive(Serialize)]
struct TraceJson {
    times: Vec<f64>,
    frames: Vec<TupleJson>,
}

/// `samples` equally spaced times in `[0, 1]`.
pub fn time_grid(samples: usize) -> Vec<f64> {
    match samples {
        0 => Vec::new(),
        1 => vec![0.0],
        n => (0..n).map(|i| if i == n - 1 { 1.0 } else { i as f64 / (n - 1) as f64 }).collect(),
    }
}

pub fn trace(t: &SkewCubeTuple, stage: Stage, samples: usize, coeff: Coefficient, tol: f64) -> Result<HomotopyTrace> {
    let times = time_grid(samples);
    let frames = times
        .iter()
        .map(|&s| match stage {
            Stage::Equidiameter => equidiameter_homotopy(t, s),
            Stage::Freewheeling => freewheeling_homotopy(t, s, coeff, tol),
        })
        .collect::<Result<_>>()?;
    Ok(HomotopyTrace { times, frames })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceReport {
    pub frames: usize,
    pub invalid_frames: Vec<usize>,
    /// Largest `dev(frame_i, frame_{i+1}) − Δt·dev(frame_0, frame_last)`.
    pub lipschitz_excess: f64,
    pub pass: bool,
}

impl HomotopyTrace {
    /// Every frame valid at `tol`, and consecutive frames no further apart
    /// than the affine-in-time bound.
    pub fn check(&self, tol: f64) -> Result<TraceReport> {
        let mut invalid_frames = Vec::new();
        for (i, f) in self.frames.iter().enumerate() {
            if !crate::cubes::is_valid(f, tol)? {
                invalid_frames.push(i);
            }
        }
        let total = match (self.frames.first(), self.frames.last()) {
            (Some(a), Some(b)) => tuple_deviation(a, b),
            _ => 0.0,
        };
        let mut excess: f64 = 0.0;
        for i in 1..self.frames.len() {
            let dt = self.times[i] - self.times[i - 1];
            excess = excess.max(tuple_deviation(&self.frames[i - 1], &self.frames[i]) - dt * total);
        }
        Ok(TraceReport {
            frames: self.frames.len(),
            pass: invalid_frames.is_empty() && excess <= 1e-12,
            invalid_frames,
            lipschitz_excess: excess,
        })
    }

    pub fn to_json_string(&self) -> String {
        let raw = TraceJson {
            times: self.times.clone(),
            frames: self.frames.iter().map(|f| f.to_json()).collect(),
        };
        serde_json::to_string_pretty(&raw).expect("plain data serializes")
    }

    /// One row per (sample, cube): `t, cube, v_1..v_m, g_11, g_12, ..` with
    /// matrix entries in row-major order.
    pub fn to_csv(&self) -> Result<String> {
        let m = self.frames.first().map(|f| f.m).unwrap_or(0);
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["t".to_string(), "cube".to_string()];
        header.extend((1..=m).map(|d| format!("v{d}")));
        for r in 1..=m {
            header.extend((1..=m).map(|c| format!("g{r}{c}")));
        }
        let csv_err = |e: csv::Error| Error::Parse(e.to_string());
        w.write_record(&header).map_err(csv_err)?;
        for (time, frame) in self.times.iter().zip(&self.frames) {
            for (i, c) in frame.cubes.iter().enumerate() {
                let mut row = vec![time.to_string(), (i + 1).to_string()];
                row.extend(c.v.iter().map(|x| x.to_string()));
                for r in 0..m {
                    row.extend((0..m).map(|col| c.g.matrix[(r, col)].to_string()));
                }
                w.write_record(&row).map_err(csv_err)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv of numbers is utf-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubes::{random_tuple, validate_tuple};
    use crate::linalg::rotation2;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-9;

    fn scalar_tuple(m: usize, tag: &GroupTag, cubes: &[(Vec<f64>, Mat, f64)]) -> SkewCubeTuple {
        let cs = cubes
            .iter()
            .map(|(v, o, s)| SkewCube {
                v: Vector::from_row_slice(v),
                g: GroupElem::from_parts(o.clone(), Vector::from_element(m, *s), tag).unwrap(),
            })
            .collect();
        SkewCubeTuple::new(m, tag.clone(), cs).unwrap()
    }

    fn line(cubes: &[(f64, f64)]) -> SkewCubeTuple {
        let id = Mat::identity(1, 1);
        scalar_tuple(1, &GroupTag::Lambda, &cubes.iter().map(|&(v, s)| (vec![v], id.clone(), s)).collect::<Vec<_>>())
    }

    #[test]
    fn equidiameter_examples() {
        let tag = GroupTag::SOLambda;
        let t = scalar_tuple(2, &tag, &[(vec![-0.5, 0.0], rotation2(0.3), 0.1), (vec![0.5, 0.0], rotation2(1.0), 0.1)]);
        assert!(is_equidiameter(&t, TOL));
        let mut g = t.cubes[0].g.clone();
        g = GroupElem::from_parts(g.o, Vector::from_row_slice(&[0.1, 0.2]), &tag).unwrap();
        let mut u = t.clone();
        u.cubes[0].g = g;
        assert!(!is_equidiameter(&u, TOL));
        let near = line(&[(-0.5, 0.1), (0.5, 0.1 + TOL / 2.0)]);
        assert!(is_equidiameter(&near, TOL));
    }

    #[test]
    fn ball_oracle_examples() {
        let single = scalar_tuple(2, &GroupTag::Lambda, &[(vec![0.0, 0.0], Mat::identity(2, 2), 0.1)]);
        assert!(is_freewheeling(&single, TOL));
        assert!(is_freewheeling(&line(&[(-0.5, 0.4), (0.5, 0.4)]), TOL));
        // in dimension one the ball of an interval is the interval itself;
        // scalars beyond 0.5 are not even valid here
        assert!(!is_freewheeling(&line(&[(-0.5, 0.5), (0.5, 0.5)]), TOL));
    }

    #[test]
    fn convex_combination_toward_the_minimum() {
        let t = line(&[(-0.5, 0.4), (0.5, 0.2)]);
        let h = equidiameter_homotopy(&t, 0.5).unwrap();
        assert!((h.cubes[0].g.lambda[0] - 0.3).abs() < 1e-15);
        assert_eq!(h.cubes[1].g.lambda[0], 0.2);
        let e = equidiameter_homotopy(&t, 1.0).unwrap();
        assert_eq!(e.cubes[0].g.lambda[0], 0.2);
        assert!(is_equidiameter(&e, 0.0));
        assert_eq!(equidiameter_homotopy(&t, 0.0).unwrap(), t);
        assert!(equidiameter_homotopy(&t, 1.5).is_err());
    }

    #[test]
    fn equidiameter_tuples_are_fixed() {
        let t = scalar_tuple(2, &GroupTag::OLambda, &[(vec![-0.5, 0.0], rotation2(0.3), 0.2), (vec![0.5, 0.2], rotation2(2.0), 0.2)]);
        for s in time_grid(9) {
            assert_eq!(equidiameter_homotopy(&t, s).unwrap(), t);
        }
    }

    #[test]
    fn freewheeling_scalar_examples() {
        // m = 2, centers (±0.3, 0), s = 0.25: 2s√2 ≈ 0.707 > 0.6
        let id = Mat::identity(2, 2);
        let t = scalar_tuple(2, &GroupTag::Lambda, &[(vec![-0.3, 0.0], id.clone(), 0.25), (vec![0.3, 0.0], id.clone(), 0.25)]);
        assert!(validate_tuple(&t, TOL).unwrap().valid);
        assert!(!is_freewheeling(&t, TOL));
        let s = freewheel_scalar(&t, Coefficient::Default, TOL).unwrap();
        assert!((s - 0.6 / (2.0 * 2f64.sqrt())).abs() < 1e-8);
        let end = freewheeling_homotopy(&t, 1.0, Coefficient::Default, TOL).unwrap();
        assert!(is_freewheeling(&end, TOL));
        // k = 1: only the boundary clamp applies
        let one = scalar_tuple(2, &GroupTag::Lambda, &[(vec![0.5, 0.0], id, 0.4)]);
        let s = freewheel_scalar(&one, Coefficient::Default, TOL).unwrap();
        assert!((s - 0.5 / 2f64.sqrt()).abs() < 1e-8);
        // the literal coefficient ignores the boundary and overshoots
        let s = freewheel_scalar(&t, Coefficient::Literal, TOL).unwrap();
        assert_eq!(s, 0.25);
        let rejected = line(&[(-0.5, 0.4), (0.5, 0.2)]);
        assert!(matches!(freewheel_scalar(&rejected, Coefficient::Default, TOL), Err(Error::NotEquidiameter)));
    }

    #[test]
    fn freewheeling_tuples_are_fixed() {
        let t = line(&[(-0.5, 0.4), (0.5, 0.4)]);
        for s in time_grid(5) {
            assert_eq!(freewheeling_homotopy(&t, s, Coefficient::Default, TOL).unwrap(), t);
        }
    }

    #[test]
    fn split_examples() {
        let tag = GroupTag::SOLambda;
        let quarter = rotation2(std::f64::consts::FRAC_PI_2);
        let t = scalar_tuple(2, &tag, &[(vec![0.5, 0.0], quarter.clone(), 0.1)]);
        let (classical, rotations) = freewheel_split(&t, TOL).unwrap();
        assert_eq!(classical.cubes[0].g.matrix, Mat::identity(2, 2) * 0.1);
        assert_eq!(rotations[0], quarter);
        assert_eq!(freewheel_unsplit(&classical, &rotations, &tag).unwrap(), t);
        let plain = scalar_tuple(2, &GroupTag::Lambda, &[(vec![0.5, 0.0], Mat::identity(2, 2), 0.1)]);
        let (classical, rotations) = freewheel_split(&plain, TOL).unwrap();
        assert_eq!(classical, plain);
        assert_eq!(rotations[0], Mat::identity(2, 2));
        let crowded = line(&[(-0.5, 0.5), (0.5, 0.49)]);
        assert!(matches!(freewheel_split(&crowded, TOL), Err(Error::NotFreewheeling)));
    }

    #[test]
    fn rotation_oracle_agrees_on_random_tuples() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for m in 1..=3 {
            for k in 1..=4 {
                let t = random_tuple(&mut rng, m, &GroupTag::OLambda, k).unwrap();
                {
                    let stage = equidiameter_homotopy(&t, 1.0).unwrap();
                    let ball = is_freewheeling(&stage, TOL);
                    let oracle = rotation_oracle(&stage, 10, TOL, &mut rng).unwrap();
                    assert_eq!(ball, oracle.all_valid, "m={m} k={k}");
                    let free = freewheeling_homotopy(&stage, 1.0, Coefficient::Default, TOL).unwrap();
                    assert!(is_freewheeling(&free, TOL));
                    assert!(rotation_oracle(&free, 10, TOL, &mut rng).unwrap().all_valid);
                }
            }
        }
    }

    #[test]
    fn traces_are_valid_and_export() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let t = random_tuple(&mut rng, 2, &GroupTag::SOLambda, 3).unwrap();
        let tr = trace(&t, Stage::Equidiameter, 33, Coefficient::Default, TOL).unwrap();
        assert_eq!(tr.frames[0], t);
        let report = tr.check(TOL).unwrap();
        assert!(report.pass, "{report:?}");
        let csv = tr.to_csv().unwrap();
        assert_eq!(csv.lines().count(), 1 + 33 * 3);
        assert!(csv.starts_with("t,cube,v1,v2,g11,g12,g21,g22"));
        let json: serde_json::Value = serde_json::from_str(&tr.to_json_string()).unwrap();
        assert_eq!(json["times"].as_array().unwrap().len(), 33);
        assert_eq!(time_grid(2), vec![0.0, 1.0]);
    }
}
