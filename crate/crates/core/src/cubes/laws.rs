//! Seeded law suites for the cube operads and the interchange maps.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::ops::{compose_tuples, interchange_check, interchange_deviation, tuple_deviation};
use super::sample::TupleSampler;
use super::validity::validate_tuple;
use super::{GroupTag, SkewCubeTuple};
use crate::error::Result;
use crate::perm::Permutation;
use crate::rng::stream;

/// Largest deviation seen for one law.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeviationReport {
    pub law: String,
    pub checked: usize,
    pub max_deviation: f64,
    /// Cases that failed outright (an error, or a boolean check).
    pub failures: usize,
    pub pass: bool,
    pub witness: Option<String>,
}

impl DeviationReport {
    pub fn new(law: &str) -> Self {
        DeviationReport {
            law: law.to_string(),
            checked: 0,
            max_deviation: 0.0,
            failures: 0,
            pass: true,
            witness: None,
        }
    }

    pub fn record_deviation(&mut self, dev: f64, tol: f64, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if dev > self.max_deviation || dev.is_nan() {
            self.max_deviation = dev;
        }
        if !(dev <= tol) {
            self.pass = false;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    pub fn record_ok(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            self.pass = false;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct CubeLawConfig {
    pub m: usize,
    pub tag: GroupTag,
    pub trials: usize,
    pub tol: f64,
    pub seed: u64,
    /// Largest arity of sampled outer and middle tuples.
    pub max_arity: usize,
}

impl CubeLawConfig {
    pub fn new(m: usize, tag: GroupTag, trials: usize, tol: f64, seed: u64) -> Self {
        CubeLawConfig {
            m,
            tag,
            trials,
            tol,
            seed,
            max_arity: 3,
        }
    }
}

fn random_perm<R: Rng>(rng: &mut R, k: usize) -> Permutation {
    let mut images: Vec<usize> = (0..k).collect();
    images.shuffle(rng);
    Permutation::from_images(images).expect("shuffled identity")
}

/// Units, associativity, both equivariance relations and validity of
/// composites for `C_m^G`, one seeded random composite per trial.
///
/// Orthogonal parts are drawn from signed permutations, since a general
/// product in `O·Λ` leaves the group.
pub fn check_cube_operad_laws(cfg: &CubeLawConfig) -> Result<Vec<DeviationReport>> {
    let (m, tag, tol) = (cfg.m, &cfg.tag, cfg.tol);
    let sampler = TupleSampler::hyperoctahedral();
    let mut left = DeviationReport::new("left unit");
    let mut right = DeviationReport::new("right unit");
    let mut assoc = DeviationReport::new("associativity");
    let mut inner = DeviationReport::new("block-sum equivariance");
    let mut outer = DeviationReport::new("outer-permutation equivariance");
    let mut valid = DeviationReport::new("composite validity");
    let unit = SkewCubeTuple::unit(m, tag);
    let task = format!("cube-laws/{m}/{tag}");
    for trial in 0..cfg.trials {
        let rng = &mut stream(cfg.seed, &task, trial as u64);
        let witness = || format!("trial {trial}");
        let ka = rng.gen_range(0..=cfg.max_arity);
        let a = sampler.sample(rng, m, tag, ka)?;
        let bs: Vec<SkewCubeTuple> = (0..ka)
            .map(|_| {
                let k = rng.gen_range(0..=cfg.max_arity);
                sampler.sample(rng, m, tag, k)
            })
            .collect::<Result<_>>()?;
        let sizes: Vec<usize> = bs.iter().map(|b| b.arity()).collect();
        let total: usize = sizes.iter().sum();
        let cs: Vec<SkewCubeTuple> = (0..total)
            .map(|_| {
                let k = rng.gen_range(0..=2);
                sampler.sample(rng, m, tag, k)
            })
            .collect::<Result<_>>()?;

        let l = compose_tuples(&unit, std::slice::from_ref(&a), tol)?;
        left.record_deviation(tuple_deviation(&l, &a), 0.0, witness);
        let r = compose_tuples(&a, &vec![unit.clone(); ka], tol)?;
        right.record_deviation(tuple_deviation(&r, &a), 0.0, witness);

        let ab = compose_tuples(&a, &bs, tol)?;
        valid.record_ok(validate_tuple(&ab, tol / 2.0)?.valid, witness);

        let lhs = compose_tuples(&ab, &cs, tol)?;
        let mut offset = 0;
        let mut middle = Vec::with_capacity(ka);
        for (b, &s) in bs.iter().zip(&sizes) {
            middle.push(compose_tuples(b, &cs[offset..offset + s], tol)?);
            offset += s;
        }
        let rhs = compose_tuples(&a, &middle, tol)?;
        assoc.record_deviation(tuple_deviation(&lhs, &rhs), tol, witness);

        let taus: Vec<Permutation> = sizes.iter().map(|&s| random_perm(rng, s)).collect();
        let moved: Vec<SkewCubeTuple> = bs.iter().zip(&taus).map(|(b, t)| b.act(t)).collect::<Result<_>>()?;
        let lhs = compose_tuples(&a, &moved, tol)?;
        let rhs = ab.act(&Permutation::block_sum(&taus))?;
        inner.record_deviation(tuple_deviation(&lhs, &rhs), tol, witness);

        let sigma = random_perm(rng, ka);
        let inv = sigma.inverse();
        let reordered: Vec<SkewCubeTuple> = (0..ka).map(|j| bs[inv.apply(j)].clone()).collect();
        let lhs = compose_tuples(&a.act(&sigma)?, &bs, tol)?;
        let rhs = compose_tuples(&a, &reordered, tol)?.act(&Permutation::block_permute(&sigma, &sizes))?;
        outer.record_deviation(tuple_deviation(&lhs, &rhs), tol, witness);
    }
    Ok(vec![left, right, assoc, inner, outer, valid])
}

/// The interchange relation in `C_{m+n}^{G×H}` on random generator pairs
/// with `k, l ≤ max_arity`, plus a negative control in which the
/// transpose permutation is composed with a transposition.
pub fn check_interchange_suite(trials: usize, max_arity: usize, tol: f64, seed: u64) -> Result<Vec<DeviationReport>> {
    let tags = [GroupTag::Lambda, GroupTag::OLambda, GroupTag::SOLambda];
    let sampler = TupleSampler::default();
    let mut relation = DeviationReport::new("interchange relation");
    let mut generator = DeviationReport::new("product generator");
    let mut control = DeviationReport::new("wrong permutation detected");
    for trial in 0..trials {
        let rng = &mut stream(seed, "interchange", trial as u64);
        let (m, n) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let (g, h) = (tags.choose(rng).expect("nonempty"), tags.choose(rng).expect("nonempty"));
        let (k, l) = (rng.gen_range(0..=max_arity), rng.gen_range(0..=max_arity));
        let p = sampler.sample(rng, m, g, k)?;
        let q = sampler.sample(rng, n, h, l)?;
        let witness = || format!("trial {trial}: m={m} n={n} {g}×{h} k={k} l={l}");
        let r = interchange_check(&p, &q, tol)?;
        relation.record_deviation(r.deviation, tol, witness);
        generator.record_deviation(r.generator_deviation, tol, witness);
        if k * l >= 2 {
            let wrong = Permutation::transpose(k, l).compose(&Permutation::adjacent(k * l, 0));
            let (_, dev) = interchange_deviation(&p, &q, &wrong, tol)?;
            control.record_ok(dev > tol, witness);
        }
    }
    Ok(vec![relation, generator, control])
}
