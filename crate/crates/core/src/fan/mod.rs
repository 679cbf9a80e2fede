//! Fans, toric morphisms between them, and fan surgery.

mod morphism;
mod surgery;

pub use morphism::{check_morphism, covers, FanMap, MorphismFlags};
pub use surgery::{common_refinement, qfactorialize, regular_subdivision, resolve, star_subdivision};

use std::collections::BTreeSet;
use std::fmt;

use num::{BigInt, One, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{
    dot, integer_kernel, lattice_index, primitive, rank_of_int, to_rational, ConeH, IntVector, Rat, RationalVector,
};

/// A fan in `N = ℤ^rank`, stored as primitive rays plus maximal cones
/// given by sorted ray indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fan {
    rank: usize,
    rays: Vec<IntVector>,
    cones: Vec<Vec<usize>>,
}

impl Fan {
    /// Checks the structural data (lengths, primitivity, indices) and brings
    /// the cone list into canonical order. Cones listed as index subsets of
    /// other cones are dropped. Fan axioms are checked by [`validate_fan`].
    pub fn new(rank: usize, rays: Vec<IntVector>, cones: Vec<Vec<usize>>) -> Result<Fan> {
        let mut seen = BTreeSet::new();
        for r in &rays {
            if r.len() != rank {
                return Err(Error::Dimension(format!("ray {r:?} does not have length {rank}")));
            }
            if &primitive(r)? != r {
                return Err(Error::Malformed(format!("ray {r:?} is not primitive")));
            }
            if !seen.insert(r.clone()) {
                return Err(Error::Malformed(format!("ray {r:?} listed twice")));
            }
        }
        let mut used = vec![false; rays.len()];
        for c in &cones {
            for &i in c {
                if i >= rays.len() {
                    return Err(Error::Malformed(format!("cone {c:?} refers to missing ray {i}")));
                }
                used[i] = true;
            }
        }
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(Error::Malformed(format!("ray {i} lies in no cone")));
        }
        if cones.is_empty() {
            return Err(Error::Malformed("fan has no cones".into()));
        }
        Ok(Self::from_parts(rank, rays, cones))
    }

    pub(crate) fn from_parts(rank: usize, rays: Vec<IntVector>, cones: Vec<Vec<usize>>) -> Fan {
        let sets: BTreeSet<BTreeSet<usize>> = cones.into_iter().map(|c| c.into_iter().collect()).collect();
        let maximal: Vec<Vec<usize>> = sets
            .iter()
            .filter(|c| !sets.iter().any(|d| d != *c && c.is_subset(d)))
            .map(|c| c.iter().copied().collect())
            .collect();
        Fan { rank, rays, cones: maximal }
    }

    /// The fan of a point: rank 0 with the single zero cone.
    pub fn point() -> Fan {
        Fan { rank: 0, rays: vec![], cones: vec![vec![]] }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn ray_index(&self, v: &[i64]) -> Option<usize> {
        self.rays.iter().position(|r| r == v)
    }

    pub fn cone_rays(&self, cone: &[usize]) -> Vec<IntVector> {
        cone.iter().map(|&i| self.rays[i].clone()).collect()
    }

    pub fn cone_h(&self, cone: &[usize]) -> ConeH {
        let gens: Vec<RationalVector> = cone.iter().map(|&i| to_rational(&self.rays[i])).collect();
        ConeH::from_generators(self.rank, &gens)
    }

    pub fn cone_dim(&self, cone: &[usize]) -> usize {
        rank_of_int(&self.cone_rays(cone), self.rank)
    }

    pub fn is_simplicial_cone(&self, cone: &[usize]) -> bool {
        self.cone_dim(cone) == cone.len()
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(|c| self.is_simplicial_cone(c))
    }

    pub fn is_smooth(&self) -> bool {
        self.cones.iter().all(|c| self.is_simplicial_cone(c) && self.multiplicity(c).is_one())
    }

    /// Lattice index of the rays of a cone inside the lattice points of
    /// their span.
    pub fn multiplicity(&self, cone: &[usize]) -> BigInt {
        lattice_index(&self.cone_rays(cone), self.rank)
    }

    /// Whether the ray subset `face` spans a face of the cone on `cone`.
    pub fn is_face(&self, cone: &[usize], face: &[usize]) -> bool {
        if !face.iter().all(|i| cone.contains(i)) {
            return false;
        }
        let h = self.cone_h(cone);
        let mut p = vec![Rat::zero(); self.rank];
        for &i in face {
            for (x, y) in p.iter_mut().zip(&self.rays[i]) {
                *x += Rat::from_integer(BigInt::from(*y));
            }
        }
        let tight = h.tight_inequalities(&p);
        let closure: BTreeSet<usize> = cone
            .iter()
            .copied()
            .filter(|&i| {
                let r = to_rational(&self.rays[i]);
                tight.iter().all(|t| dot(t, &r).is_zero())
            })
            .collect();
        closure == face.iter().copied().collect()
    }

    /// Maximal cones having `tau` as a face.
    pub fn cones_containing(&self, tau: &[usize]) -> Vec<usize> {
        (0..self.cones.len()).filter(|&c| self.is_face(&self.cones[c], tau)).collect()
    }

    /// First maximal cone containing the point `v`.
    pub fn locate(&self, v: &[Rat]) -> Option<usize> {
        self.cones.iter().position(|c| self.cone_h(c).contains(v))
    }

    /// Full-dimensional maximal cones whose union is a convex cone.
    pub fn has_convex_full_support(&self) -> bool {
        if self.cones.iter().any(|c| self.cone_dim(c) != self.rank) {
            return false;
        }
        let all: Vec<RationalVector> = self.rays.iter().map(|r| to_rational(r)).collect();
        let region = ConeH::from_generators(self.rank, &all);
        if !region.equations.is_empty() {
            return false;
        }
        let pieces: Vec<ConeH> = self.cones.iter().map(|c| self.cone_h(c)).collect();
        covers(&region, &pieces)
    }
}

impl fmt::Display for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fan(rank {}, rays {:?}, cones {:?})", self.rank, self.rays, self.cones)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    NotStronglyConvex,
    RayNotExtreme(usize),
    IntersectionNotAFace,
}

/// A failed fan axiom; `cones` indexes the maximal cones involved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub cones: Vec<usize>,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ViolationKind::NotStronglyConvex => write!(f, "cone {:?} is not strongly convex", self.cones),
            ViolationKind::RayNotExtreme(r) => write!(f, "ray {r} is not extreme in cone {:?}", self.cones),
            ViolationKind::IntersectionNotAFace => {
                write!(f, "cones {:?} do not meet in a common face", self.cones)
            }
        }
    }
}

pub fn validate_fan(fan: &Fan) -> Vec<Violation> {
    let hs: Vec<ConeH> = fan.cones.iter().map(|c| fan.cone_h(c)).collect();
    let mut out = Vec::new();
    let mut convex = vec![true; hs.len()];
    for (i, h) in hs.iter().enumerate() {
        if !h.lineality().is_empty() {
            convex[i] = false;
            out.push(Violation { cones: vec![i], kind: ViolationKind::NotStronglyConvex });
            continue;
        }
        for &r in &fan.cones[i] {
            if h.tight_rank(&to_rational(&fan.rays[r])) + 1 != fan.rank {
                out.push(Violation { cones: vec![i], kind: ViolationKind::RayNotExtreme(r) });
            }
        }
    }
    for a in 0..hs.len() {
        for b in a + 1..hs.len() {
            if !(convex[a] && convex[b]) {
                continue;
            }
            let meet = hs[a].intersect(&hs[b]).generators();
            let mut p = vec![Rat::zero(); fan.rank];
            for r in &meet.rays {
                for (x, y) in p.iter_mut().zip(r) {
                    *x += y;
                }
            }
            let ok = face_inside(fan, &fan.cones[a], &hs[a], &p, &hs[b])
                && face_inside(fan, &fan.cones[b], &hs[b], &p, &hs[a]);
            if !ok {
                out.push(Violation { cones: vec![a, b], kind: ViolationKind::IntersectionNotAFace });
            }
        }
    }
    out
}

/// Whether the smallest face of `cone` containing `p` lies in `other`.
fn face_inside(fan: &Fan, cone: &[usize], h: &ConeH, p: &[Rat], other: &ConeH) -> bool {
    let tight = h.tight_inequalities(p);
    cone.iter().all(|&i| {
        let r = to_rational(&fan.rays[i]);
        !tight.iter().all(|t| dot(t, &r).is_zero()) || other.contains(&r)
    })
}

/// Fan together with a check of the fan axioms.
pub fn validated(rank: usize, rays: Vec<IntVector>, cones: Vec<Vec<usize>>) -> Result<Fan> {
    let fan = Fan::new(rank, rays, cones)?;
    let v = validate_fan(&fan);
    if let Some(first) = v.first() {
        return Err(Error::InvalidFan(first.to_string()));
    }
    Ok(fan)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeKind {
    Smooth,
    Simplicial,
    NonSimplicial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeType {
    pub kind: ConeKind,
    /// Lattice index of the rays; only meaningful for simplicial cones.
    pub multiplicity: Option<BigInt>,
}

pub fn classify_cone(fan: &Fan, cone: &[usize]) -> Result<ConeType> {
    if !fan.cones.iter().any(|c| fan.is_face(c, cone)) {
        return Err(Error::pre(format!("{cone:?} is not a cone of the fan")));
    }
    if !fan.is_simplicial_cone(cone) {
        return Ok(ConeType { kind: ConeKind::NonSimplicial, multiplicity: None });
    }
    let m = fan.multiplicity(cone);
    let kind = if m.is_one() { ConeKind::Smooth } else { ConeKind::Simplicial };
    Ok(ConeType { kind, multiplicity: Some(m) })
}

/// Rows of a surjection `N → N/N_τ` whose kernel is the saturation of the
/// span of `tau`.
pub fn quotient_matrix(fan: &Fan, tau: &[usize]) -> Result<Vec<IntVector>> {
    integer_kernel(&fan.cone_rays(tau), fan.rank)
}

/// The star of `tau`: images of the cones containing it in `N/N_τ`.
pub fn star(fan: &Fan, tau: &[usize]) -> Result<Fan> {
    let mut tau: Vec<usize> = tau.to_vec();
    tau.sort_unstable();
    tau.dedup();
    let containing = fan.cones_containing(&tau);
    if containing.is_empty() {
        return Err(Error::pre(format!("{tau:?} is not a cone of the fan")));
    }
    if tau.is_empty() {
        return Ok(fan.clone());
    }
    let p = quotient_matrix(fan, &tau)?;
    if p.is_empty() {
        return Ok(Fan::point());
    }
    let project = |v: &IntVector| -> IntVector { p.iter().map(|row| crate::exactlin::dot_i64(row, v)).collect() };
    let mut rays: Vec<IntVector> = Vec::new();
    let mut index = vec![None; fan.rays.len()];
    for (i, r) in fan.rays.iter().enumerate() {
        if tau.contains(&i) || !containing.iter().any(|&c| fan.cones[c].contains(&i)) {
            continue;
        }
        let img = primitive(&project(r))?;
        let pos = rays.iter().position(|x| *x == img).unwrap_or_else(|| {
            rays.push(img);
            rays.len() - 1
        });
        index[i] = Some(pos);
    }
    let cones = containing
        .iter()
        .map(|&c| fan.cones[c].iter().filter_map(|&i| index[i]).collect())
        .collect();
    Ok(Fan::from_parts(p.len(), rays, cones))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn fan(rank: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Fan {
        Fan::new(rank, rays.iter().map(|r| r.to_vec()).collect(), cones.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    #[test]
    fn validate_examples() {
        let p1 = fan(1, &[&[1], &[-1]], &[&[0], &[1]]);
        assert!(validate_fan(&p1).is_empty());

        let line = fan(2, &[&[1, 0], &[-1, 0]], &[&[0, 1]]);
        let v = validate_fan(&line);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::NotStronglyConvex);

        let overlap = fan(2, &[&[1, 0], &[1, 2], &[1, 1], &[0, 1]], &[&[0, 1], &[2, 3]]);
        let v = validate_fan(&overlap);
        assert_eq!(v, vec![Violation { cones: vec![0, 1], kind: ViolationKind::IntersectionNotAFace }]);
    }

    #[test]
    fn validate_accepts_standard_fans() {
        let p2 = fan(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[0, 2]]);
        assert!(validate_fan(&p2).is_empty());
        let quadric = fan(3, &[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]], &[&[0, 1, 2, 3]]);
        assert!(validate_fan(&quadric).is_empty());
        // a ray inside a 2-cone
        let bad = fan(2, &[&[1, 0], &[0, 1], &[1, 1]], &[&[0, 1, 2]]);
        assert!(validate_fan(&bad).iter().any(|v| v.kind == ViolationKind::RayNotExtreme(2)));
    }

    #[test]
    fn constructor_rejects_bad_rays() {
        assert_eq!(Fan::new(2, vec![vec![2, 0]], vec![vec![0]]).unwrap_err(), Error::Malformed("ray [2, 0] is not primitive".into()));
        assert_eq!(Fan::new(2, vec![vec![0, 0]], vec![vec![0]]).unwrap_err(), Error::ZeroVector);
        assert!(matches!(Fan::new(2, vec![vec![1]], vec![vec![0]]), Err(Error::Dimension(_))));
        assert!(matches!(Fan::new(2, vec![vec![1, 0]], vec![vec![1]]), Err(Error::Malformed(_))));
    }

    #[test]
    fn classify_examples() {
        let f = fan(2, &[&[1, 0], &[0, 1]], &[&[0, 1]]);
        assert_eq!(classify_cone(&f, &[0, 1]).unwrap(), ConeType { kind: ConeKind::Smooth, multiplicity: Some(BigInt::one()) });
        let a1 = fan(2, &[&[1, 0], &[1, 2]], &[&[0, 1]]);
        assert_eq!(
            classify_cone(&a1, &[0, 1]).unwrap(),
            ConeType { kind: ConeKind::Simplicial, multiplicity: Some(BigInt::from(2)) }
        );
        let q = fan(3, &[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]], &[&[0, 1, 2, 3]]);
        assert_eq!(classify_cone(&q, &[0, 1, 2, 3]).unwrap().kind, ConeKind::NonSimplicial);
        // the diagonal is not a face of the square cone
        assert!(classify_cone(&q, &[0, 3]).is_err());
        assert_eq!(classify_cone(&q, &[0, 1]).unwrap().kind, ConeKind::Smooth);
    }

    #[test]
    fn star_examples() {
        let blowup = fan(2, &[&[1, 0], &[0, 1], &[1, 1]], &[&[0, 2], &[2, 1]]);
        let s = star(&blowup, &[2]).unwrap();
        assert_eq!(s.rank(), 1);
        assert_eq!(s.cones().len(), 2);
        let mut rays = s.rays().to_vec();
        rays.sort();
        assert_eq!(rays, vec![vec![-1], vec![1]]);
        assert!(validate_fan(&s).is_empty());

        assert_eq!(star(&blowup, &[]).unwrap(), blowup);
        assert_eq!(star(&blowup, &[0, 2]).unwrap(), Fan::point());
        assert!(star(&blowup, &[0, 1]).is_err());
    }

    #[test]
    fn convex_support() {
        let p2 = fan(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[0, 2]]);
        assert!(p2.has_convex_full_support());
        let blowup = fan(2, &[&[1, 0], &[0, 1], &[1, 1]], &[&[0, 2], &[2, 1]]);
        assert!(blowup.has_convex_full_support());
        let half = fan(2, &[&[1, 0], &[1, 1]], &[&[0, 1]]);
        assert!(half.has_convex_full_support());
        let l_shape = fan(2, &[&[1, 0], &[0, 1], &[-1, 0]], &[&[0, 1], &[1, 2]]);
        assert!(l_shape.has_convex_full_support());
        let nonconvex = fan(2, &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 3]]);
        assert!(!nonconvex.has_convex_full_support());
        let thin = fan(2, &[&[1, 0], &[0, 1]], &[&[0], &[1]]);
        assert!(!thin.has_convex_full_support());
    }
}
