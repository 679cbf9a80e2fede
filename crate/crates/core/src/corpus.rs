//! Seeded random instances and a property harness over them.
//!
//! Families: complete rank-2 fans over a point, rank-3 face fans of random
//! lattice polytopes over a point (Q-factorialized), star subdivisions of the
//! rank-2 and rank-3 orthant over the orthant, and rank-2 fans over the half
//! plane mapping to the affine line. Coefficients are `p/q` with
//! `p ∈ [−5, 5]`, `q ∈ [1, 6]`; no fan has more than 10 rays.

use std::cmp::Ordering;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curves::ample_certificate;
use crate::divisor::{freeness_witnesses, support_function, InvariantDivisor};
use crate::error::{Error, Result};
use crate::exactlin::{primitive, to_rational, ConeH, IntVector, Rat};
use crate::fan::{check_morphism, qfactorialize, star_subdivision, Fan, FanMap};
use crate::mmp::{run_mmp, ContractionKind, Outcome};
use crate::newton::orthant;
use crate::sections::{is_pseudo_effective, Route};

pub const MAX_RAYS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    CompleteSurface,
    FaceFan3,
    Orthant2,
    Orthant3,
    FiberOverLine,
}

impl Family {
    pub const ALL: [Family; 5] =
        [Family::CompleteSurface, Family::FaceFan3, Family::Orthant2, Family::Orthant3, Family::FiberOverLine];

    pub fn name(self) -> &'static str {
        match self {
            Family::CompleteSurface => "complete-surface",
            Family::FaceFan3 => "face-fan-3",
            Family::Orthant2 => "orthant-2",
            Family::Orthant3 => "orthant-3",
            Family::FiberOverLine => "fiber-over-line",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub family: Family,
    pub map: FanMap,
    pub divisor: InvariantDivisor,
}

fn coeff(rng: &mut ChaCha8Rng) -> Rat {
    Rat::new(rng.gen_range(-5i64..=5).into(), rng.gen_range(1i64..=6).into())
}

/// Counterclockwise order by angle from the positive x-axis.
fn angle_cmp(a: &[i64], b: &[i64]) -> Ordering {
    let half = |v: &[i64]| i32::from(v[1] < 0 || (v[1] == 0 && v[0] < 0));
    half(a).cmp(&half(b)).then_with(|| (a[1] * b[0]).cmp(&(a[0] * b[1])))
}

fn cross(a: &[i64], b: &[i64]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

fn random_primitive(rng: &mut ChaCha8Rng, dim: usize, lo: i64, hi: i64) -> IntVector {
    loop {
        let v: IntVector = (0..dim).map(|_| rng.gen_range(lo..=hi)).collect();
        if v.iter().any(|&x| x != 0) {
            return primitive(&v).expect("nonzero");
        }
    }
}

fn complete_surface(rng: &mut ChaCha8Rng) -> Result<Fan> {
    loop {
        let k = rng.gen_range(3..=8);
        let mut rays: Vec<IntVector> = Vec::new();
        while rays.len() < k {
            let v = random_primitive(rng, 2, -5, 5);
            if !rays.contains(&v) {
                rays.push(v);
            }
        }
        rays.sort_by(|a, b| angle_cmp(a, b));
        if (0..k).all(|i| cross(&rays[i], &rays[(i + 1) % k]) > 0) {
            let cones = (0..k).map(|i| vec![i, (i + 1) % k]).collect();
            return Fan::new(2, rays, cones);
        }
    }
}

fn face_fan(rng: &mut ChaCha8Rng) -> Result<Fan> {
    loop {
        let k = rng.gen_range(4..=8);
        let pts: Vec<IntVector> = (0..k).map(|_| (0..3).map(|_| rng.gen_range(-3i64..=3)).collect()).collect();
        let lifted: Vec<_> = pts
            .iter()
            .map(|p| {
                let mut v = to_rational(p);
                v.push(Rat::from_integer(1.into()));
                v
            })
            .collect();
        let hull = ConeH::from_generators(4, &lifted);
        if hull.dim() != 4 || hull.inequalities.iter().any(|h| h[3] <= Rat::from_integer(0.into())) {
            continue;
        }
        let mut rays: Vec<IntVector> = Vec::new();
        let mut cones = Vec::new();
        for h in &hull.inequalities {
            let mut cone = Vec::new();
            for (p, l) in pts.iter().zip(&lifted) {
                if crate::exactlin::dot(h, l) != Rat::from_integer(0.into()) {
                    continue;
                }
                let r = primitive(p)?;
                let i = rays.iter().position(|x| *x == r).unwrap_or_else(|| {
                    rays.push(r);
                    rays.len() - 1
                });
                if !cone.contains(&i) {
                    cone.push(i);
                }
            }
            cones.push(cone);
        }
        // points on a face but not vertices would be non-extreme generators
        let cones: Vec<Vec<usize>> = cones
            .into_iter()
            .map(|c| {
                let g: Vec<_> = c.iter().map(|&i| to_rational(&rays[i])).collect();
                crate::exactlin::extreme_rays(&g).map(|e| e.into_iter().map(|j| c[j]).collect())
            })
            .collect::<Result<_>>()?;
        let used: std::collections::BTreeSet<usize> = cones.iter().flatten().copied().collect();
        let keep: Vec<usize> = used.into_iter().collect();
        let cones: Vec<Vec<usize>> =
            cones.iter().map(|c| c.iter().map(|i| keep.iter().position(|k| k == i).unwrap()).collect()).collect();
        let rays: Vec<IntVector> = keep.iter().map(|&i| rays[i].clone()).collect();
        if rays.len() > MAX_RAYS {
            continue;
        }
        let fan = Fan::new(3, rays, cones)?;
        return Ok(qfactorialize(&fan)?.0);
    }
}

fn orthant_subdivision(rng: &mut ChaCha8Rng, n: usize) -> Result<Fan> {
    let mut fan = orthant(n);
    let steps = rng.gen_range(1..=3);
    while fan.rays().len() < n + steps {
        let v = random_primitive(rng, n, 0, 4);
        if fan.ray_index(&v).is_some() {
            continue;
        }
        fan = star_subdivision(&fan, &v)?;
    }
    Ok(fan)
}

fn over_line(rng: &mut ChaCha8Rng) -> Result<Fan> {
    let k = rng.gen_range(1..=4);
    let mut mid: Vec<IntVector> = Vec::new();
    while mid.len() < k {
        let v = primitive(&[rng.gen_range(1i64..=5), rng.gen_range(-5i64..=5)])?;
        if !mid.contains(&v) {
            mid.push(v);
        }
    }
    // counterclockwise from (0,-1) to (0,1): increasing slope
    mid.sort_by(|a, b| (a[1] * b[0]).cmp(&(b[1] * a[0])));
    let mut rays = vec![vec![0, -1]];
    rays.extend(mid);
    rays.push(vec![0, 1]);
    let cones = (0..rays.len() - 1).map(|i| vec![i, i + 1]).collect();
    Fan::new(2, rays, cones)
}

fn instance_of(rng: &mut ChaCha8Rng, family: Family) -> Result<Instance> {
    let map = match family {
        Family::CompleteSurface => FanMap::to_point(complete_surface(rng)?),
        Family::FaceFan3 => FanMap::to_point(face_fan(rng)?),
        Family::Orthant2 => FanMap::identity(orthant_subdivision(rng, 2)?, orthant(2))?,
        Family::Orthant3 => FanMap::identity(orthant_subdivision(rng, 3)?, orthant(3))?,
        Family::FiberOverLine => {
            let line = Fan::new(1, vec![vec![1]], vec![vec![0]])?;
            FanMap::new(vec![vec![1, 0]], over_line(rng)?, line)?
        }
    };
    let divisor = InvariantDivisor::new((0..map.source.rays().len()).map(|_| coeff(rng)).collect());
    Ok(Instance { family, map, divisor })
}

/// `count` instances cycling through the families. Draws whose map is not
/// proper and projective are discarded and redrawn.
pub fn generate(seed: u64, count: usize) -> Result<Vec<Instance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut i = 0;
    while out.len() < count {
        let family = Family::ALL[i % Family::ALL.len()];
        let inst = instance_of(&mut rng, family)?;
        let f = check_morphism(&inst.map);
        if f.toric && f.proper && f.projective == Some(true) && inst.map.source.rays().len() <= MAX_RAYS {
            out.push(inst);
            i += 1;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InstanceResult {
    pub steps: usize,
    pub divisorial: usize,
    pub flips: usize,
    pub outcome: Option<Outcome>,
    pub psef_lp: bool,
    pub psef_mmp: bool,
    /// Nef Cartier divisors whose freeness witnesses were checked.
    pub freeness_checked: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusReport {
    pub results: Vec<InstanceResult>,
    /// `(instance, error)` for every instance where a check failed.
    pub failures: Vec<(usize, String)>,
}

impl CorpusReport {
    pub fn total(&self) -> usize {
        self.results.len()
    }

    pub fn flips(&self) -> usize {
        self.results.iter().map(|r| r.flips).sum()
    }

    pub fn divisorial(&self) -> usize {
        self.results.iter().map(|r| r.divisorial).sum()
    }

    pub fn count(&self, o: Outcome) -> usize {
        self.results.iter().filter(|r| r.outcome == Some(o)).count()
    }

    pub fn psef_disagreements(&self) -> usize {
        self.results.iter().filter(|r| r.psef_lp != r.psef_mmp).count()
    }

    pub fn freeness_checked(&self) -> usize {
        self.results.iter().map(|r| r.freeness_checked).sum()
    }
}

fn cartier_multiple(fan: &Fan, d: &InvariantDivisor) -> Result<InvariantDivisor> {
    let l = support_function(fan, d)?.cartier_index;
    Ok(d.scale(&Rat::from_integer(l)))
}

/// Runs the MMP (which asserts termination, no repeated fan, ρ drops and
/// the negativity check on every flip), both pseudo-effectivity routes, and
/// the freeness check on nef Cartier divisors: a Cartier multiple of the
/// ample certificate, of the nef MMP output, and zero.
pub fn check_instance(inst: &Instance) -> Result<InstanceResult> {
    let m = &inst.map;
    let t = run_mmp(m, &inst.divisor)?;
    let mut r = InstanceResult {
        steps: t.steps.len(),
        divisorial: t.steps.iter().filter(|s| s.kind == ContractionKind::Divisorial).count(),
        flips: t.steps.iter().filter(|s| s.kind == ContractionKind::Flipping).count(),
        outcome: Some(t.outcome),
        ..Default::default()
    };
    r.psef_mmp = t.outcome == Outcome::Minimal;
    r.psef_lp = is_pseudo_effective(m, &inst.divisor, Route::Lp)?.pseudo_effective;

    let mut nef: Vec<(FanMap, InvariantDivisor)> = vec![(m.clone(), InvariantDivisor::zero(m.source.rays().len()))];
    if let Some(a) = ample_certificate(m)? {
        nef.push((m.clone(), cartier_multiple(&m.source, &a)?));
    }
    if t.outcome == Outcome::Minimal {
        let d = cartier_multiple(&t.model.source, &t.divisor)?;
        nef.push((t.model.clone(), d));
    }
    for (map, d) in &nef {
        freeness_witnesses(map, d)?;
        r.freeness_checked += 1;
    }
    Ok(r)
}

pub fn run_corpus(seed: u64, count: usize) -> Result<CorpusReport> {
    let instances = generate(seed, count)?;
    let mut rep = CorpusReport::default();
    for (i, inst) in instances.iter().enumerate() {
        match check_instance(inst) {
            Ok(r) => rep.results.push(r),
            Err(e) => {
                rep.results.push(InstanceResult::default());
                rep.failures.push((i, e.to_string()));
            }
        }
    }
    Ok(rep)
}

/// Error of the first failing instance, if any.
pub fn first_failure(rep: &CorpusReport) -> Option<Error> {
    rep.failures.first().map(|(i, s)| Error::breach(format!("instance {i}: {s}")))
}
