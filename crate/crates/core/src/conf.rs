//! Configuration spaces of finite unions of open boxes, evaluation at the
//! origin, and Weiss covers.
//!
//! Weiss checks sample finite subsets; a pass is evidence, never proof.

use rand::seq::index::sample as sample_indices;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cubes::{FramedConfiguration, GroupElem, GroupTag, SkewCubeTuple};
use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::rng::stream;

/// An open axis-aligned box `∏ (lo_d, hi_d)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpenBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl OpenBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<OpenBox> {
        let b = OpenBox { lo, hi };
        b.check()?;
        Ok(b)
    }

    fn check(&self) -> Result<()> {
        if self.lo.len() != self.hi.len() {
            return Err(Error::InvalidRegion("corner lengths differ".into()));
        }
        if self.lo.iter().zip(&self.hi).any(|(l, h)| !(l < h)) {
            return Err(Error::InvalidRegion(format!("empty box {:?}..{:?}", self.lo, self.hi)));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(c, (l, h))| l < c && c < h)
    }

    pub fn contains_box(&self, other: &OpenBox) -> bool {
        (0..self.dim()).all(|d| self.lo[d] <= other.lo[d] && other.hi[d] <= self.hi[d])
    }

    pub fn intersect(&self, other: &OpenBox) -> Option<OpenBox> {
        let lo: Vec<f64> = self.lo.iter().zip(&other.lo).map(|(a, b)| a.max(*b)).collect();
        let hi: Vec<f64> = self.hi.iter().zip(&other.hi).map(|(a, b)| a.min(*b)).collect();
        lo.iter().zip(&hi).all(|(l, h)| l < h).then_some(OpenBox { lo, hi })
    }

    pub fn disjoint(&self, other: &OpenBox) -> bool {
        self.intersect(other).is_none()
    }

    pub fn product(&self, other: &OpenBox) -> OpenBox {
        OpenBox {
            lo: self.lo.iter().chain(&other.lo).cloned().collect(),
            hi: self.hi.iter().chain(&other.hi).cloned().collect(),
        }
    }

    fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(l, h)| h - l).product()
    }
}

/// A finite disjoint union of open boxes in `ℝ^m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RegionJson")]
pub struct BoxRegion {
    pub m: usize,
    pub boxes: Vec<OpenBox>,
}

#[derive(Deserialize)]
struct RegionJson {
    m: usize,
    boxes: Vec<OpenBox>,
}

impl TryFrom<RegionJson> for BoxRegion {
    type Error = Error;

    fn try_from(raw: RegionJson) -> Result<BoxRegion> {
        BoxRegion::new(raw.m, raw.boxes)
    }
}

impl BoxRegion {
    pub fn new(m: usize, boxes: Vec<OpenBox>) -> Result<BoxRegion> {
        for b in &boxes {
            b.check()?;
            if b.dim() != m {
                return Err(Error::DimensionMismatch { expected: m, found: b.dim() });
            }
        }
        for i in 0..boxes.len() {
            for j in i + 1..boxes.len() {
                if !boxes[i].disjoint(&boxes[j]) {
                    return Err(Error::InvalidRegion(format!("boxes {i} and {j} overlap")));
                }
            }
        }
        Ok(BoxRegion { m, boxes })
    }

    /// The cube `(-1, 1)^m`.
    pub fn unit_cube(m: usize) -> BoxRegion {
        BoxRegion {
            m,
            boxes: vec![OpenBox {
                lo: vec![-1.0; m],
                hi: vec![1.0; m],
            }],
        }
    }

    pub fn empty(m: usize) -> BoxRegion {
        BoxRegion { m, boxes: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    /// Index of the box containing `x`.
    pub fn locate(&self, x: &[f64]) -> Option<usize> {
        self.boxes.iter().position(|b| b.contains(x))
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.locate(x).is_some()
    }

    /// A box is connected, so it lies in a disjoint union of open boxes only
    /// if it lies in one of them.
    pub fn contains_region(&self, other: &BoxRegion) -> bool {
        other.boxes.iter().all(|b| self.boxes.iter().any(|c| c.contains_box(b)))
    }

    pub fn intersect(&self, other: &BoxRegion) -> BoxRegion {
        let boxes = self.boxes.iter().flat_map(|a| other.boxes.iter().filter_map(move |b| a.intersect(b))).collect();
        BoxRegion { m: self.m, boxes }
    }

    pub fn product(&self, other: &BoxRegion) -> BoxRegion {
        let boxes = self.boxes.iter().flat_map(|a| other.boxes.iter().map(move |b| a.product(b))).collect();
        BoxRegion { m: self.m + other.m, boxes }
    }

    /// Equality as subsets of `ℝ^m`: same boxes up to order.
    pub fn same_set(&self, other: &BoxRegion) -> bool {
        self.m == other.m && self.contains_region(other) && other.contains_region(self)
    }

    /// A point drawn uniformly from the region.
    pub fn sample_point<R: Rng>(&self, rng: &mut R) -> Option<Vec<f64>> {
        let total: f64 = self.boxes.iter().map(OpenBox::volume).sum();
        if self.boxes.is_empty() || !(total > 0.0) {
            return None;
        }
        loop {
            let mut pick = rng.gen_range(0.0..total);
            let b = self
                .boxes
                .iter()
                .find(|b| {
                    pick -= b.volume();
                    pick < 0.0
                })
                .unwrap_or_else(|| self.boxes.last().expect("nonempty"));
            let x: Vec<f64> = b.lo.iter().zip(&b.hi).map(|(l, h)| rng.gen_range(*l..*h)).collect();
            if b.contains(&x) {
                return Some(x);
            }
        }
    }
}

/// `k` points of the region, pairwise at least `min_sep` apart, with
/// identity frames; rejection sampling with `budget` restarts.
pub fn sample_configuration<R: Rng>(region: &BoxRegion, k: usize, min_sep: f64, rng: &mut R, budget: usize) -> Result<FramedConfiguration> {
    let frame = GroupElem::identity(region.m, &GroupTag::Lambda);
    if k == 0 {
        return Ok(FramedConfiguration {
            m: region.m,
            points: Vec::new(),
            frames: Vec::new(),
        });
    }
    if region.is_empty() {
        return Err(Error::InvalidRegion("cannot sample from an empty region".into()));
    }
    for _ in 0..budget {
        let mut points: Vec<Vector> = Vec::with_capacity(k);
        for _ in 0..100 * k {
            let x = Vector::from_vec(region.sample_point(rng).expect("nonempty region"));
            if points.iter().all(|p| (p - &x).norm() >= min_sep) {
                points.push(x);
                if points.len() == k {
                    return Ok(FramedConfiguration {
                        m: region.m,
                        points,
                        frames: vec![frame; k],
                    });
                }
            }
        }
    }
    Err(Error::Capacity(budget))
}

/// `(f_{v_i,g_i}(0), g_i)` for every cube.
pub fn evaluation_at_origin(t: &SkewCubeTuple) -> Result<FramedConfiguration> {
    let origin = Vector::zeros(t.m);
    Ok(FramedConfiguration {
        m: t.m,
        points: t.cubes.iter().map(|c| c.embed(&origin)).collect::<Result<_>>()?,
        frames: t.cubes.iter().map(|c| c.g.clone()).collect(),
    })
}

fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Disjoint boxes of common half-width `r < ½·(min ℓ∞ distance)` around the
/// distinct points, each clipped to the box of `region` containing it.
pub fn neighborhoods(points: &[Vec<f64>], region: &BoxRegion) -> Result<BoxRegion> {
    let mut distinct: Vec<&Vec<f64>> = Vec::new();
    for p in points {
        if p.len() != region.m {
            return Err(Error::DimensionMismatch { expected: region.m, found: p.len() });
        }
        if !distinct.contains(&p) {
            distinct.push(p);
        }
    }
    let mut min_dist = f64::INFINITY;
    for i in 0..distinct.len() {
        for j in i + 1..distinct.len() {
            min_dist = min_dist.min(linf(distinct[i], distinct[j]));
        }
    }
    let r = if min_dist.is_finite() { 0.45 * min_dist } else { 1.0 };
    let boxes = distinct
        .iter()
        .map(|p| {
            let b = &region.boxes[region
                .locate(p)
                .ok_or_else(|| Error::InvalidRegion(format!("point {p:?} is outside the region")))?];
            Ok(OpenBox {
                lo: p.iter().zip(&b.lo).map(|(x, l)| (x - r).max(*l)).collect(),
                hi: p.iter().zip(&b.hi).map(|(x, h)| (x + r).min(*h)).collect(),
            })
        })
        .collect::<Result<_>>()?;
    Ok(BoxRegion { m: region.m, boxes })
}

/// Given points `s ⊂ M` and `t ⊂ N`, opens `U ∈ Disk(M)` and `V ∈ Disk(N)`
/// with one box per distinct point, so that `U × V ⊇ s × t`.
pub fn build_disjoint_neighborhoods(
    s: &[Vec<f64>],
    region_m: &BoxRegion,
    t: &[Vec<f64>],
    region_n: &BoxRegion,
) -> Result<(BoxRegion, BoxRegion)> {
    Ok((neighborhoods(s, region_m)?, neighborhoods(t, region_n)?))
}

/// A cover of a region.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CoverSpec {
    /// Finitely many members, each a subset of the region.
    Explicit { region: BoxRegion, members: Vec<BoxRegion> },
    /// `{U × V : U ∈ Disk(M), V ∈ Disk(N)}` with at most `max_components`
    /// boxes per factor; members are produced on demand.
    DiskProduct {
        region_m: BoxRegion,
        region_n: BoxRegion,
        max_components: usize,
    },
}

impl CoverSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            CoverSpec::Explicit { region, members } => {
                for (i, u) in members.iter().enumerate() {
                    if u.m != region.m || !region.contains_region(u) {
                        return Err(Error::InvalidRegion(format!("member {i} is not inside the region")));
                    }
                }
            }
            CoverSpec::DiskProduct { .. } => {}
        }
        Ok(())
    }

    pub fn region(&self) -> BoxRegion {
        match self {
            CoverSpec::Explicit { region, .. } => region.clone(),
            CoverSpec::DiskProduct { region_m, region_n, .. } => region_m.product(region_n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeissLevel {
    pub k: usize,
    pub trials: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeissReport {
    pub pass: bool,
    pub levels: Vec<WeissLevel>,
    /// A finite subset contained in no member.
    pub witness: Option<Vec<Vec<f64>>>,
}

/// A family of opens inside an ambient region, queried for a member
/// containing a given finite set.
enum Family<'a> {
    Finite(Vec<&'a BoxRegion>),
    Disks { m: BoxRegion, n: BoxRegion, max: usize },
}

impl Family<'_> {
    fn has_member_containing(&self, xs: &[Vec<f64>]) -> Result<bool> {
        match self {
            Family::Finite(members) => Ok(members.iter().any(|u| xs.iter().all(|x| u.contains(x)))),
            Family::Disks { m, n, max } => {
                let k = m.m;
                let s: Vec<Vec<f64>> = xs.iter().map(|x| x[..k].to_vec()).collect();
                let t: Vec<Vec<f64>> = xs.iter().map(|x| x[k..].to_vec()).collect();
                if s.iter().any(|p| !m.contains(p)) || t.iter().any(|p| !n.contains(p)) {
                    return Ok(false);
                }
                let (u, v) = build_disjoint_neighborhoods(&s, m, &t, n)?;
                let fits = u.boxes.len() <= *max && v.boxes.len() <= *max && m.contains_region(&u) && n.contains_region(&v);
                Ok(fits && xs.iter().all(|x| u.contains(&x[..k]) && v.contains(&x[k..])))
            }
        }
    }

    fn nonempty(&self) -> bool {
        match self {
            Family::Finite(members) => !members.is_empty(),
            Family::Disks { .. } => true,
        }
    }
}

fn weiss_check<R: Rng>(family: &Family<'_>, region: &BoxRegion, k_max: usize, trials: usize, rng: &mut R) -> Result<WeissReport> {
    let mut report = WeissReport {
        pass: true,
        levels: Vec::new(),
        witness: None,
    };
    for k in 0..=k_max {
        let mut level = WeissLevel { k, trials: 0, failures: 0 };
        for _ in 0..trials.max(1) {
            if k > 0 && region.is_empty() {
                break;
            }
            let xs: Vec<Vec<f64>> = (0..k).map(|_| region.sample_point(rng).expect("nonempty region")).collect();
            level.trials += 1;
            let ok = if k == 0 { family.nonempty() } else { family.has_member_containing(&xs)? };
            if !ok {
                level.failures += 1;
                report.pass = false;
                report.witness.get_or_insert(xs);
            }
            if k == 0 {
                break;
            }
        }
        report.levels.push(level);
    }
    Ok(report)
}

/// For every `k ≤ k_max`, `trials` random `k`-subsets of the region must
/// each lie in one member. The empty subset needs a nonempty cover.
pub fn check_weiss_cover(cover: &CoverSpec, k_max: usize, trials: usize, seed: u64) -> Result<WeissReport> {
    cover.validate()?;
    let rng = &mut stream(seed, "weiss", 0);
    match cover {
        CoverSpec::Explicit { region, members } => weiss_check(&Family::Finite(members.iter().collect()), region, k_max, trials, rng),
        CoverSpec::DiskProduct {
            region_m,
            region_n,
            max_components,
        } => weiss_check(
            &Family::Disks {
                m: region_m.clone(),
                n: region_n.clone(),
                max: *max_components,
            },
            &cover.region(),
            k_max,
            trials,
            rng,
        ),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompleteWeissFailure {
    /// The sub-collection, as member indices or as the finite sets whose
    /// neighborhoods formed it.
    pub collection: Vec<String>,
    pub subset: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompleteWeissReport {
    pub pass: bool,
    pub collections: usize,
    pub failures: usize,
    pub witness: Option<CompleteWeissFailure>,
}

/// Samples `collections` sub-collections `U_0` of size `≤ subset_size` with
/// nonempty intersection, and checks that the members inside `⋂ U_0` form a
/// Weiss cover of it for `k ≤ k_max` on `trials` subsets each.
pub fn check_complete_weiss(
    cover: &CoverSpec,
    subset_size: usize,
    k_max: usize,
    collections: usize,
    trials: usize,
    seed: u64,
) -> Result<CompleteWeissReport> {
    cover.validate()?;
    let mut report = CompleteWeissReport {
        pass: true,
        collections: 0,
        failures: 0,
        witness: None,
    };
    for c in 0..collections {
        let rng = &mut stream(seed, "complete-weiss", c as u64);
        let size = rng.gen_range(1..=subset_size.max(1));
        let (names, inter, family) = match cover {
            CoverSpec::Explicit { region, members } => {
                if members.is_empty() {
                    break;
                }
                let picked = sample_indices(rng, members.len(), size.min(members.len())).into_vec();
                let inter = picked.iter().fold(region.clone(), |acc, &i| acc.intersect(&members[i]));
                let inside: Vec<&BoxRegion> = members.iter().filter(|u| inter.contains_region(u)).collect();
                (picked.iter().map(|i| format!("member {i}")).collect::<Vec<_>>(), inter, Family::Finite(inside))
            }
            CoverSpec::DiskProduct {
                region_m,
                region_n,
                max_components,
            } => {
                // members U_j × V_j grown from finite sets sharing a base point
                let region = cover.region();
                let k = region_m.m;
                let base = region.sample_point(rng).expect("nonempty region");
                let (mut um, mut vn) = (region_m.clone(), region_n.clone());
                let mut names = Vec::new();
                for _ in 0..size {
                    let extra = rng.gen_range(0..(*max_components).max(1));
                    let mut xs = vec![base.clone()];
                    xs.extend((0..extra).map(|_| region.sample_point(rng).expect("nonempty region")));
                    let s: Vec<Vec<f64>> = xs.iter().map(|x| x[..k].to_vec()).collect();
                    let t: Vec<Vec<f64>> = xs.iter().map(|x| x[k..].to_vec()).collect();
                    let (u, v) = build_disjoint_neighborhoods(&s, region_m, &t, region_n)?;
                    um = um.intersect(&u);
                    vn = vn.intersect(&v);
                    names.push(format!("{xs:?}"));
                }
                let inter = um.product(&vn);
                let family = Family::Disks {
                    m: um,
                    n: vn,
                    max: *max_components,
                };
                (names, inter, family)
            }
        };
        report.collections += 1;
        if inter.is_empty() {
            continue;
        }
        let r = weiss_check(&family, &inter, k_max, trials, rng)?;
        if !r.pass {
            report.failures += 1;
            report.pass = false;
            if report.witness.is_none() {
                report.witness = Some(CompleteWeissFailure {
                    collection: names,
                    subset: r.witness.unwrap_or_default(),
                });
            }
        }
    }
    Ok(report)
}
