//! Seeded property suites with deterministic JSON reports.
//!
//! Reports echo the seed and tolerance and contain no timings, so the same
//! `(suite, seed, tol, trials)` always serialize to the same bytes.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::conf::{
    build_disjoint_neighborhoods, check_complete_weiss, check_weiss_cover, evaluation_at_origin, BoxRegion, CoverSpec, OpenBox,
};
use crate::cubes::{
    check_cube_operad_laws, check_interchange_suite, pi_map, random_group_elem, random_tuple, tuple_deviation, CubeLawConfig,
    DeviationReport, GroupElem, GroupTag, OrthoSampler, SkewCubeTuple,
};
use crate::error::{Error, Result};
use crate::operad::{check_hom_category_laws, Endomorphism, LawReport, Terminal};
use crate::perm::Permutation;
use crate::retraction::{
    equidiameter_homotopy, freewheel_split, freewheel_unsplit, freewheeling_homotopy, is_equidiameter, is_freewheeling,
    rotation_oracle, time_grid, trace, Coefficient, Stage,
};
use crate::rng::stream;
use crate::symseq::{
    canonical_grid, composition_associativity_upto, composition_units, graded_associativity, graded_tensor, graded_units,
    matrix_associativity, matrix_tensor, matrix_units, FinSymSeq, GridRep, SeqElem, Verdict, ENUMERATION_ARITY_LIMIT,
};

pub const SUITES: [&str; 6] = ["operad-laws", "interchange", "retraction", "pi", "combinatorial", "weiss"];

pub const BASE_TAGS: [GroupTag; 3] = [GroupTag::Lambda, GroupTag::OLambda, GroupTag::SOLambda];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub tol: f64,
    pub trials: usize,
    pub pass: bool,
    pub checks: Vec<DeviationReport>,
}

impl SuiteReport {
    fn new(suite: &str, seed: u64, tol: f64, trials: usize, checks: Vec<DeviationReport>) -> SuiteReport {
        SuiteReport {
            suite: suite.to_string(),
            seed,
            tol,
            trials,
            pass: checks.iter().all(|c| c.pass),
            checks,
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn check(&self, law: &str) -> Option<&DeviationReport> {
        self.checks.iter().find(|c| c.law == law)
    }
}

/// Default number of trials of each suite.
pub fn default_trials(suite: &str) -> Option<usize> {
    Some(match suite {
        "operad-laws" => 1000,
        "interchange" | "retraction" | "weiss" => 500,
        "pi" => 1000,
        "combinatorial" => 200,
        _ => return None,
    })
}

/// Runs a suite by name; `trials` overrides its default size.
pub fn run_suite(suite: &str, seed: u64, tol: f64, trials: Option<usize>) -> Result<SuiteReport> {
    if !(tol > 0.0) {
        return Err(Error::Parse(format!("tolerance must be positive, got {tol}")));
    }
    let n = trials
        .or_else(|| default_trials(suite))
        .ok_or_else(|| Error::Parse(format!("unknown suite {suite:?}; expected one of {}", SUITES.join(", "))))?;
    if n == 0 {
        return Err(Error::Parse("trials must be at least 1".into()));
    }
    match suite {
        "operad-laws" => operad_law_suite(seed, tol, n, &[1, 2, 3], &BASE_TAGS),
        "interchange" => interchange_suite(seed, tol, n),
        "retraction" => retraction_suite(seed, tol, n),
        "pi" => pi_suite(seed, n),
        "combinatorial" => combinatorial_suite(seed, n),
        "weiss" => weiss_suite(seed, n),
        _ => unreachable!("checked above"),
    }
}

/// Cube operad laws for every `(m, G)` requested, `trials` composites each.
pub fn operad_law_suite(seed: u64, tol: f64, trials: usize, dims: &[usize], tags: &[GroupTag]) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for &m in dims {
        for tag in tags {
            for mut r in check_cube_operad_laws(&CubeLawConfig::new(m, tag.clone(), trials, tol, seed))? {
                r.law = format!("m={m} {tag}: {}", r.law);
                checks.push(r);
            }
        }
    }
    Ok(SuiteReport::new("operad-laws", seed, tol, trials, checks))
}

pub fn interchange_suite(seed: u64, tol: f64, trials: usize) -> Result<SuiteReport> {
    let checks = check_interchange_suite(trials, 3, tol, seed)?;
    Ok(SuiteReport::new("interchange", seed, tol, trials, checks))
}

fn random_setup<R: Rng>(rng: &mut R, max_arity: usize) -> Result<SkewCubeTuple> {
    let m = rng.gen_range(1..=3);
    let tag = BASE_TAGS.choose(rng).expect("nonempty");
    let k = rng.gen_range(0..=max_arity);
    random_tuple(rng, m, tag, k)
}

/// Both homotopies on random tuples with `k ≤ 6`: validity along 33 time
/// samples, endpoints, fixed subspaces, the split round trip, and agreement
/// of the rotation oracle with the ball criterion.
pub fn retraction_suite(seed: u64, tol: f64, trials: usize) -> Result<SuiteReport> {
    const SAMPLES: usize = 33;
    const ROTATIONS: usize = 10;
    let mut frames = DeviationReport::new("equidiameter frames valid");
    let mut endpoint = DeviationReport::new("equidiameter endpoint");
    let mut free_frames = DeviationReport::new("freewheeling frames valid");
    let mut ball = DeviationReport::new("freewheeling endpoint passes ball oracle");
    let mut fix_equi = DeviationReport::new("equidiameter homotopy fixes equidiameter tuples");
    let mut fix_free = DeviationReport::new("freewheeling homotopy fixes freewheeling tuples");
    let mut split = DeviationReport::new("split/unsplit round trip");
    let mut oracle = DeviationReport::new("rotation oracle agrees with ball oracle");
    let coeff = Coefficient::Default;
    for trial in 0..trials {
        let rng = &mut stream(seed, "retraction", trial as u64);
        let t = random_setup(rng, 6)?;
        let w = || format!("trial {trial}: m={} {} k={}", t.m, t.tag, t.arity());
        frames.record_ok(trace(&t, Stage::Equidiameter, SAMPLES, coeff, tol)?.check(tol)?.pass, w);
        let e = equidiameter_homotopy(&t, 1.0)?;
        endpoint.record_ok(is_equidiameter(&e, tol), w);
        let tr = trace(&e, Stage::Freewheeling, SAMPLES, coeff, tol)?;
        free_frames.record_ok(tr.check(tol)?.pass, w);
        let f = tr.frames.last().cloned().unwrap_or_else(|| e.clone());
        ball.record_ok(is_freewheeling(&f, tol), w);
        let mut dev_e: f64 = 0.0;
        let mut dev_f: f64 = 0.0;
        for s in time_grid(SAMPLES) {
            dev_e = dev_e.max(tuple_deviation(&equidiameter_homotopy(&e, s)?, &e));
            dev_f = dev_f.max(tuple_deviation(&freewheeling_homotopy(&f, s, coeff, tol)?, &f));
        }
        fix_equi.record_deviation(dev_e, 0.0, w);
        fix_free.record_deviation(dev_f, 0.0, w);
        match freewheel_split(&f, tol) {
            Ok((classical, rotations)) => {
                split.record_deviation(tuple_deviation(&freewheel_unsplit(&classical, &rotations, &f.tag)?, &f), 1e-12, w)
            }
            Err(_) => split.record_ok(false, w),
        }
        for x in [&t, &e, &f] {
            let r = rotation_oracle(x, ROTATIONS, tol, rng)?;
            let sampled = r.samples >= ROTATIONS || !is_equidiameter(x, tol);
            oracle.record_ok(sampled && r.all_valid == is_freewheeling(x, tol), w);
        }
    }
    let checks = vec![frames, endpoint, free_frames, ball, fix_equi, fix_free, split, oracle];
    Ok(SuiteReport::new("retraction", seed, tol, trials, checks))
}

fn random_perm<R: Rng>(rng: &mut R, k: usize) -> Permutation {
    let mut images: Vec<usize> = (0..k).collect();
    images.shuffle(rng);
    Permutation::from_images(images).expect("shuffled identity")
}

/// `π` against evaluation at the origin, and equivariance of evaluation
/// under `Σ_k` and `G^k`. All comparisons are exact.
pub fn pi_suite(seed: u64, trials: usize) -> Result<SuiteReport> {
    let mut pi = DeviationReport::new("pi_map equals evaluation at the origin");
    let mut sym = DeviationReport::new("symmetric equivariance");
    let mut frames = DeviationReport::new("frame equivariance");
    for trial in 0..trials {
        let rng = &mut stream(seed, "pi", trial as u64);
        let t = random_setup(rng, 6)?;
        let w = || format!("trial {trial}");
        let c = evaluation_at_origin(&t)?;
        pi.record_ok(c == pi_map(&t), w);
        let sigma = random_perm(rng, t.arity());
        sym.record_ok(evaluation_at_origin(&t.act(&sigma)?)? == c.act(&sigma), w);
        // products of signed permutations and dilations stay in every base group
        let hs: Vec<GroupElem> = (0..t.arity())
            .map(|_| random_group_elem(rng, t.m, &t.tag, OrthoSampler::Hyperoctahedral, 0.5, 1.0))
            .collect::<Result<_>>()?;
        frames.record_ok(evaluation_at_origin(&t.act_frames(&hs)?)? == c.act_frames(&hs)?, w);
    }
    Ok(SuiteReport::new("pi", seed, 0.0, trials, vec![pi, sym, frames]))
}

fn record_verdict(r: &mut DeviationReport, v: Verdict, context: impl FnOnce() -> String) {
    let witness = v.clone().err();
    r.record_ok(v.is_ok(), || format!("{}: {}", context(), witness.unwrap_or_default()));
}

fn absorb(r: &mut DeviationReport, laws: &[LawReport]) {
    for l in laws {
        r.checked += l.checked;
        r.failures += l.failures;
        if l.failures > 0 {
            r.pass = false;
            if r.witness.is_none() {
                r.witness = l.witness.as_ref().map(|w| format!("{}: {w}", l.law));
            }
        }
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// A random sequence whose components are free orbits.
pub fn random_free_seq<R: Rng>(rng: &mut R, max_arity: usize, max_orbits: usize) -> FinSymSeq {
    let mut s = FinSymSeq::empty();
    for n in 0..rng.gen_range(1..=max_orbits) {
        s.add_orbit_free(rng.gen_range(0..=max_arity), &format!("f{n}_"));
    }
    s
}

/// `Σ_k □ Σ_l ≅ Σ_{kl}`. Up to [`ENUMERATION_ARITY_LIMIT`] the product is
/// enumerated and must be one free orbit in arity `kl`. Beyond it, random
/// representatives are compared through the group element they name:
/// `(e·α □ e·β)·τ` is `(α × β) ∘ τ`, and canonical forms must agree exactly
/// when these elements do.
pub fn check_free_grid<R: Rng>(k: usize, l: usize, samples: usize, rng: &mut R) -> Result<Verdict> {
    let (x, y) = (FinSymSeq::free_orbit(k), FinSymSeq::free_orbit(l));
    let n = k * l;
    if n <= ENUMERATION_ARITY_LIMIT {
        let g = matrix_tensor(&x, &y)?;
        if g.seq.arities().collect::<Vec<_>>() != vec![n] || g.seq.len(n) != factorial(n) {
            return Ok(Err(format!("Σ_{k}□Σ_{l}: components {:?}", g.seq.arities().map(|a| (a, g.seq.len(a))).collect::<Vec<_>>())));
        }
        let mut seen = vec![false; g.seq.len(n)];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(e) = stack.pop() {
            for j in 0..n.saturating_sub(1) {
                let f = g.seq.act_adjacent(n, e, j);
                if !std::mem::replace(&mut seen[f], true) {
                    stack.push(f);
                }
            }
        }
        return Ok(if seen.iter().all(|&s| s) { Ok(()) } else { Err(format!("Σ_{k}□Σ_{l} is not transitive")) });
    }
    let perm_of = |s: &FinSymSeq, a: usize, e: SeqElem| -> Permutation {
        Permutation::all(a)
            .into_iter()
            .find(|p| s.act_index(a, 0, p) == e.index)
            .expect("free orbits are transitive")
    };
    let name = |r: &GridRep| Permutation::product(&perm_of(&x, k, r.parts[0]), &perm_of(&y, l, r.parts[1])).compose(&r.tau);
    let draw = |rng: &mut R| GridRep {
        parts: vec![
            SeqElem { arity: k, index: rng.gen_range(0..factorial(k)) },
            SeqElem { arity: l, index: rng.gen_range(0..factorial(l)) },
        ],
        tau: random_perm(rng, n),
    };
    for s in 0..samples {
        let a = draw(rng);
        // a second representative of the same element, and an unrelated one
        let shift = GridRep {
            parts: vec![SeqElem { arity: k, index: rng.gen_range(0..factorial(k)) }, a.parts[1]],
            tau: Permutation::identity(n),
        };
        let ga = perm_of(&x, k, a.parts[0]);
        let gs = perm_of(&x, k, shift.parts[0]);
        let rel = Permutation::product(&gs.inverse().compose(&ga), &Permutation::identity(l)).compose(&a.tau);
        let same = GridRep { parts: shift.parts.clone(), tau: rel };
        let other = draw(rng);
        let (ca, cs, co) = (canonical_grid(&[&x, &y], &a)?, canonical_grid(&[&x, &y], &same)?, canonical_grid(&[&x, &y], &other)?);
        if name(&a) != name(&same) {
            return Ok(Err(format!("sample {s}: relation representative names a different element")));
        }
        if ca != cs || name(&ca) != name(&a) {
            return Ok(Err(format!("sample {s}: canonical form is not invariant")));
        }
        if (ca == co) != (name(&a) == name(&other)) {
            return Ok(Err(format!("sample {s}: canonical forms disagree with the group element")));
        }
    }
    Ok(Ok(()))
}

/// Coherence isomorphisms of `∘`, `⊙`, `□`, the free cardinality formula,
/// `Σ_k □ Σ_l ≅ Σ_{kl}` and the category laws of `F(P)` for the terminal and
/// `End({0,1})` operads.
pub fn combinatorial_suite(seed: u64, trials: usize) -> Result<SuiteReport> {
    let mut units = DeviationReport::new("unit bijections");
    let mut graded = DeviationReport::new("graded tensor associativity");
    let mut matrix = DeviationReport::new("matrix tensor associativity");
    let mut comp = DeviationReport::new("composition associativity (arity <= 6)");
    let mut formula = DeviationReport::new("free graded tensor cardinality formula");
    let mut grid = DeviationReport::new("free matrix tensor is a free orbit");
    let mut fp_terminal = DeviationReport::new("F(P) laws, terminal operad, sizes <= 3");
    let mut fp_end = DeviationReport::new("F(P) laws, End(2): units <= 3, associativity exhaustive <= 2 and sampled at 3");
    for trial in 0..trials {
        let rng = &mut stream(seed, "combinatorial/units", trial as u64);
        let x = FinSymSeq::random(rng, 3, 12);
        for v in composition_units(&x)?.into_iter().chain(graded_units(&x)?).chain(matrix_units(&x)?) {
            record_verdict(&mut units, v, || format!("trial {trial}"));
        }
    }
    for trial in 0..(trials / 10).max(1) {
        let rng = &mut stream(seed, "combinatorial/assoc", trial as u64);
        let (x, y, z) = (FinSymSeq::random(rng, 2, 4), FinSymSeq::random(rng, 2, 4), FinSymSeq::random(rng, 2, 4));
        let w = || format!("trial {trial}");
        record_verdict(&mut graded, graded_associativity(&x, &y, &z)?, w);
        record_verdict(&mut matrix, matrix_associativity(&x, &y, &z)?, w);
        record_verdict(&mut comp, composition_associativity_upto(&x, &y, &z, 6)?, w);
    }
    for trial in 0..trials {
        let rng = &mut stream(seed, "combinatorial/free", trial as u64);
        let (x, y) = (random_free_seq(rng, 3, 3), random_free_seq(rng, 3, 3));
        let g = graded_tensor(&x, &y)?;
        let ok = (0..=6).all(|k| {
            let expected: usize = (0..=k).map(|i| x.len(i) * y.len(k - i) * binomial(k, i)).sum();
            g.seq.len(k) == expected
        });
        formula.record_ok(ok, || format!("trial {trial}"));
    }
    let rng = &mut stream(seed, "combinatorial/grid", 0);
    for k in 0..=4 {
        for l in 0..=4 {
            record_verdict(&mut grid, check_free_grid(k, l, 200, rng)?, || format!("k={k} l={l}"));
        }
    }
    absorb(&mut fp_terminal, &check_hom_category_laws(&Terminal, 3, 3, 0, &mut stream(seed, "combinatorial/fp", 0))?);
    let end = Endomorphism::new(2)?;
    absorb(&mut fp_end, &check_hom_category_laws(&end, 3, 2, 10 * trials, &mut stream(seed, "combinatorial/fp", 1))?);
    let checks = vec![units, graded, matrix, comp, formula, grid, fp_terminal, fp_end];
    Ok(SuiteReport::new("combinatorial", seed, 0.0, trials, checks))
}

fn random_region<R: Rng>(rng: &mut R, m: usize) -> BoxRegion {
    if rng.gen_bool(0.5) {
        return BoxRegion::unit_cube(m);
    }
    // two slabs split along the first axis at a random gap
    let cut = rng.gen_range(-0.5..0.5);
    let gap = rng.gen_range(0.0..0.3);
    let mut lo1 = vec![-1.0; m];
    let mut hi1 = vec![1.0; m];
    hi1[0] = cut;
    let mut lo2 = lo1.clone();
    let hi2 = vec![1.0; m];
    lo2[0] = cut + gap;
    lo1[0] = -1.0;
    BoxRegion::new(m, vec![OpenBox { lo: lo1, hi: hi1 }, OpenBox { lo: lo2, hi: hi2 }]).expect("disjoint slabs")
}

fn random_points<R: Rng>(rng: &mut R, region: &BoxRegion, n: usize) -> Vec<Vec<f64>> {
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n);
    for _ in 0..n {
        if !pts.is_empty() && rng.gen_bool(0.2) {
            let p = pts[rng.gen_range(0..pts.len())].clone();
            pts.push(p);
        } else {
            pts.push(region.sample_point(rng).expect("nonempty region"));
        }
    }
    pts
}

fn neighborhoods_ok(points: &[Vec<f64>], region: &BoxRegion, u: &BoxRegion) -> bool {
    let mut distinct: Vec<&Vec<f64>> = Vec::new();
    for p in points {
        if !distinct.contains(&p) {
            distinct.push(p);
        }
    }
    let disjoint = (0..u.boxes.len()).all(|i| (i + 1..u.boxes.len()).all(|j| u.boxes[i].disjoint(&u.boxes[j])));
    disjoint
        && u.boxes.len() == distinct.len()
        && distinct.iter().all(|p| u.boxes.iter().filter(|b| b.contains(p)).count() == 1)
        && region.contains_region(u)
}

/// Boxes of half-width `r` around the points of the `0.2`-grid in
/// `[-1, 1]²`, clipped to the open square, one box per member. For
/// `r > 0.1` every single point is covered while far-apart pairs are not.
pub fn grid_boxes(r: f64) -> Result<Vec<BoxRegion>> {
    let mut out = Vec::new();
    for i in -5..=5 {
        for j in -5..=5 {
            let c = [f64::from(i) * 0.2, f64::from(j) * 0.2];
            let lo = c.iter().map(|x| (x - r).max(-1.0)).collect();
            let hi = c.iter().map(|x| (x + r).min(1.0)).collect();
            out.push(BoxRegion::new(2, vec![OpenBox::new(lo, hi)?])?);
        }
    }
    Ok(out)
}

/// Neighborhood construction, the truncated `Disk(M) × Disk(N)` cover and
/// engineered negative covers.
pub fn weiss_suite(seed: u64, trials: usize) -> Result<SuiteReport> {
    let mut nb = DeviationReport::new("neighborhoods are disjoint, containing and inside the region");
    let mut cover = DeviationReport::new("Disk(M)xDisk(N) is a Weiss cover for k <= 4");
    let mut complete = DeviationReport::new("Disk(M)xDisk(N) is complete for sub-collections of size <= 3");
    let mut negative = DeviationReport::new("negative covers fail with witnesses");
    for trial in 0..2 * trials {
        let rng = &mut stream(seed, "weiss/neighborhoods", trial as u64);
        let (m, n) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let (rm, rn) = (random_region(rng, m), random_region(rng, n));
        let (a, b) = (rng.gen_range(0..=5), rng.gen_range(0..=5));
        let (s, t) = (random_points(rng, &rm, a), random_points(rng, &rn, b));
        let (u, v) = build_disjoint_neighborhoods(&s, &rm, &t, &rn)?;
        let w = || format!("trial {trial}");
        nb.record_ok(neighborhoods_ok(&s, &rm, &u) && neighborhoods_ok(&t, &rn, &v), w);
    }
    let product = CoverSpec::DiskProduct {
        region_m: random_region(&mut stream(seed, "weiss/regions", 0), 2),
        region_n: BoxRegion::unit_cube(1),
        max_components: 4,
    };
    let r = check_weiss_cover(&product, 4, trials, seed)?;
    cover.record_ok(r.pass, || format!("{:?}", r.witness));
    let r = check_complete_weiss(&product, 3, 4, (trials / 5).max(1), 20, seed)?;
    complete.record_ok(r.pass, || format!("{:?}", r.witness));

    let square = BoxRegion::unit_cube(2);
    let grid_cover = CoverSpec::Explicit {
        region: square.clone(),
        members: grid_boxes(0.15)?,
    };
    let r = check_weiss_cover(&grid_cover, 2, trials, seed)?;
    let first_at_two = r.levels[1].failures == 0 && r.levels[2].failures > 0;
    negative.record_ok(first_at_two && r.witness.as_ref().is_some_and(|w| w.len() == 2), || "small boxes".into());
    let half = |lo: f64, hi: f64| BoxRegion::new(2, vec![OpenBox { lo: vec![lo, -1.0], hi: vec![hi, 1.0] }]);
    let gappy = CoverSpec::Explicit {
        region: square.clone(),
        members: vec![square, half(-1.0, 0.5)?, half(-0.5, 1.0)?],
    };
    let r = check_complete_weiss(&gappy, 3, 2, (trials / 5).max(1), 20, seed)?;
    negative.record_ok(!r.pass && r.witness.is_some(), || "missing members inside an intersection".into());
    let empty = CoverSpec::Explicit { region: BoxRegion::unit_cube(1), members: Vec::new() };
    let r = check_weiss_cover(&empty, 2, trials, seed)?;
    negative.record_ok(!r.pass && r.witness == Some(Vec::new()), || "empty cover".into());
    Ok(SuiteReport::new("weiss", seed, 0.0, trials, vec![nb, cover, complete, negative]))
}
