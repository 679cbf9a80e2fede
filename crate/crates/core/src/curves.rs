//! Wall relations, contracted curve classes, the relative Mori cone and
//! nef tests.
//!
//! Intersection numbers are only computed up to a positive factor per wall:
//! `D · V(ω)` is proportional to `Σ a_ρ d_ρ` where `a` is the wall relation.

use std::collections::{BTreeMap, BTreeSet};

use num::{Signed, Zero};

use crate::divisor::InvariantDivisor;
use crate::error::{Error, Result};
use crate::exactlin::{
    dot, extreme_rays, integer_kernel, primitive, rank_of_int, restrict, span_pivots, to_rational, ConeH, IntVector, Rat, RationalVector,
};
use crate::fan::{check_morphism, Fan, FanMap};

/// Numerical class of a wall curve: the primitive relation `Σ a_ρ v_ρ = 0`
/// indexed by all rays of the fan.
pub type CurveClass = IntVector;

/// A codimension-one cone shared by exactly two maximal cones.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Wall {
    pub rays: Vec<usize>,
    pub cones: [usize; 2],
}

/// All walls of a fan, ordered by their ray sets.
pub fn walls(fan: &Fan) -> Vec<Wall> {
    let mut by_face: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (ci, c) in fan.cones().iter().enumerate() {
        if fan.cone_dim(c) != fan.rank() {
            continue;
        }
        let h = fan.cone_h(c);
        for n in &h.inequalities {
            let face: Vec<usize> =
                c.iter().copied().filter(|&i| dot(n, &to_rational(&fan.rays()[i])).is_zero()).collect();
            by_face.entry(face).or_default().push(ci);
        }
    }
    by_face
        .into_iter()
        .filter(|(_, cs)| cs.len() == 2)
        .map(|(rays, cs)| Wall { rays, cones: [cs[0], cs[1]] })
        .collect()
}

pub fn wall_relation(fan: &Fan, w: &Wall) -> Result<CurveClass> {
    let [a, b] = w.cones;
    let (ca, cb) = (&fan.cones()[a], &fan.cones()[b]);
    if !fan.is_simplicial_cone(ca) || !fan.is_simplicial_cone(cb) {
        return Err(Error::pre("wall relation needs simplicial adjacent cones"));
    }
    let support: Vec<usize> = ca.iter().chain(cb).copied().collect::<BTreeSet<_>>().into_iter().collect();
    let cols = fan.cone_rays(&support);
    let matrix: Vec<IntVector> = (0..fan.rank()).map(|r| cols.iter().map(|v| v[r]).collect()).collect();
    let k = integer_kernel(&matrix, support.len())?;
    if k.len() != 1 {
        return Err(Error::breach(format!("wall {:?} has {} independent relations", w.rays, k.len())));
    }
    let off = support.iter().position(|i| !w.rays.contains(i)).expect("an off-wall ray exists");
    let sign = if k[0][off] < 0 { -1 } else { 1 };
    let mut class = vec![0; fan.rays().len()];
    for (j, &i) in support.iter().enumerate() {
        class[i] = sign * k[0][j];
    }
    let class = primitive(&class)?;
    if support.iter().filter(|i| !w.rays.contains(i)).any(|&i| class[i] <= 0) {
        return Err(Error::breach(format!("off-wall coefficients of {class:?} are not positive")));
    }
    Ok(class)
}

/// `Σ a_ρ d_ρ`, a positive multiple of `D · C`.
pub fn pairing(class: &[i64], d: &InvariantDivisor) -> Rat {
    d.coeffs
        .iter()
        .zip(class)
        .filter(|(_, &a)| a != 0)
        .fold(Rat::zero(), |acc, (x, &a)| acc + x * Rat::from_integer(a.into()))
}

fn check_scope(m: &FanMap) -> Result<()> {
    if !m.source.is_simplicial() {
        return Err(Error::pre("source fan is not simplicial"));
    }
    if !m.source.has_convex_full_support() {
        return Err(Error::pre("source support is not convex and full-dimensional"));
    }
    Ok(())
}

/// Walls whose two adjacent cones map into one common target cone, with
/// their classes.
pub fn contracted_walls(m: &FanMap) -> Result<Vec<(Wall, CurveClass)>> {
    check_scope(m)?;
    let target_cones: Vec<ConeH> = m.target.cones().iter().map(|t| m.target.cone_h(t)).collect();
    let mut out = Vec::new();
    for w in walls(&m.source) {
        let rays: BTreeSet<usize> = w.cones.iter().flat_map(|&c| m.source.cones()[c].iter().copied()).collect();
        let images: Vec<RationalVector> = rays.iter().map(|&i| to_rational(&m.apply(&m.source.rays()[i]))).collect();
        if target_cones.iter().any(|h| images.iter().all(|x| h.contains(x))) {
            let c = wall_relation(&m.source, &w)?;
            out.push((w, c));
        }
    }
    Ok(out)
}

/// A divisor positive on every contracted class, found as the sum of the
/// inner facet normals of the cone they span; `None` if that cone contains
/// a line.
pub fn ample_certificate(m: &FanMap) -> Result<Option<InvariantDivisor>> {
    let classes: BTreeSet<CurveClass> = contracted_walls(m)?.into_iter().map(|(_, c)| c).collect();
    let n = m.source.rays().len();
    if classes.is_empty() {
        return Ok(Some(InvariantDivisor::zero(n)));
    }
    let gens: Vec<RationalVector> = classes.iter().map(|c| to_rational(c)).collect();
    // normals on the span of the classes, extended by zero off the pivot columns
    let cols = span_pivots(&gens, n);
    let local: Vec<RationalVector> = gens.iter().map(|g| restrict(g, &cols)).collect();
    let cone = ConeH::from_generators(cols.len(), &local);
    if !cone.lineality().is_empty() {
        return Ok(None);
    }
    let mut d = vec![Rat::zero(); n];
    for h in &cone.inequalities {
        for (&c, y) in cols.iter().zip(h) {
            d[c] += y;
        }
    }
    let d = InvariantDivisor::new(d);
    if classes.iter().any(|c| !pairing(c, &d).is_positive()) {
        return Err(Error::breach("facet-normal certificate is not positive"));
    }
    Ok(Some(d))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeCone {
    /// Every contracted wall with its class.
    pub walls: Vec<(Wall, CurveClass)>,
    /// Distinct classes spanning extremal rays, sorted.
    pub extremal_rays: Vec<CurveClass>,
    /// Relative Picard number: dimension of the span of the classes.
    pub rho: usize,
}

impl NeCone {
    /// Distinct classes, sorted.
    pub fn generators(&self) -> Vec<CurveClass> {
        self.walls.iter().map(|(_, c)| c.clone()).collect::<BTreeSet<_>>().into_iter().collect()
    }
}

pub fn ne_cone(m: &FanMap) -> Result<NeCone> {
    let flags = check_morphism(m);
    if !flags.toric || !flags.proper {
        return Err(Error::pre("map is not a proper toric morphism"));
    }
    let walls = contracted_walls(m)?;
    let distinct: Vec<CurveClass> =
        walls.iter().map(|(_, c)| c.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    if flags.projective != Some(true) {
        return Err(Error::pre("map is not projective"));
    }
    let rho = rank_of_int(&distinct, m.source.rays().len());
    let gens: Vec<RationalVector> = distinct.iter().map(|c| to_rational(c)).collect();
    let extremal_rays = extreme_rays(&gens)?.into_iter().map(|i| distinct[i].clone()).collect();
    Ok(NeCone { walls, extremal_rays, rho })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nefness {
    pub nef: bool,
    /// First wall where the test fails, with its class and value.
    pub violation: Option<(Wall, CurveClass, Rat)>,
}

/// Nef test over the base (`strict` asks for positivity on every contracted
/// class, i.e. relative ampleness).
pub fn nefness(d: &InvariantDivisor, m: &FanMap, strict: bool) -> Result<Nefness> {
    d.check_len(&m.source)?;
    for (w, c) in contracted_walls(m)? {
        let v = pairing(&c, d);
        if v.is_negative() || (strict && v.is_zero()) {
            return Ok(Nefness { nef: false, violation: Some((w, c, v)) });
        }
    }
    Ok(Nefness { nef: true, violation: None })
}
