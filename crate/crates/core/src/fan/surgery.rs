use std::collections::BTreeSet;

use itertools::Itertools;
use num::{BigInt, One, Signed, Zero};

use super::{covers, Fan, FanMap};
use crate::error::{Error, Result};
use crate::exactlin::{
    dot, primitive, primitive_rational, smith_normal_form, to_rational, ConeH, IntVector, Rat, RationalVector,
};

/// Stellar subdivision of `fan` at the primitive vector `v`; the new ray is
/// appended after the existing ones.
pub fn star_subdivision(fan: &Fan, v: &[i64]) -> Result<Fan> {
    if v.len() != fan.rank() {
        return Err(Error::Dimension(format!("vector {v:?} does not have length {}", fan.rank())));
    }
    let v = primitive(v)?;
    if fan.ray_index(&v).is_some() {
        return Err(Error::pre(format!("{v:?} is already a ray")));
    }
    let vr = to_rational(&v);
    let k = fan.rays().len();
    let mut cones = Vec::new();
    let mut hit = false;
    for c in fan.cones() {
        let h = fan.cone_h(c);
        if !h.contains(&vr) {
            cones.push(c.clone());
            continue;
        }
        hit = true;
        for n in h.inequalities.iter().filter(|n| dot(n, &vr).is_positive()) {
            let mut facet: Vec<usize> =
                c.iter().copied().filter(|&i| dot(n, &to_rational(&fan.rays()[i])).is_zero()).collect();
            facet.push(k);
            cones.push(facet);
        }
    }
    if !hit {
        return Err(Error::pre(format!("{v:?} lies outside the support")));
    }
    let mut rays = fan.rays().to_vec();
    rays.push(v);
    Ok(Fan::from_parts(fan.rank(), rays, cones))
}

/// Cells of the regular subdivision of the cone over `points` induced by
/// lifting point `i` to height `heights[i]`: the lower facets of the lifted
/// cone, as sorted index lists.
pub fn regular_subdivision(points: &[IntVector], heights: &[Rat]) -> Vec<Vec<usize>> {
    let n = points.first().map_or(0, |p| p.len());
    let mut gens: Vec<RationalVector> = points
        .iter()
        .zip(heights)
        .map(|(p, h)| {
            let mut v = to_rational(p);
            v.push(h.clone());
            v
        })
        .collect();
    let mut up = vec![Rat::zero(); n + 1];
    up[n] = Rat::one();
    gens.push(up);
    let lifted = ConeH::from_generators(n + 1, &gens);
    let mut cells: BTreeSet<Vec<usize>> = BTreeSet::new();
    for normal in &lifted.inequalities {
        if !normal[n].is_positive() {
            continue;
        }
        let cell: Vec<usize> = (0..points.len()).filter(|&i| dot(normal, &gens[i]).is_zero()).collect();
        cells.insert(cell);
    }
    cells.into_iter().collect()
}

/// Heights `B^i` on rays, with `B` raised until every cell is simplicial.
fn lexicographic_triangulation(fan: &Fan) -> Result<Fan> {
    let mut base = BigInt::from(10);
    for _ in 0..8 {
        let heights: Vec<Rat> =
            (0..fan.rays().len()).map(|i| Rat::from_integer(num::pow(base.clone(), i))).collect();
        let mut cones = Vec::new();
        let mut simplicial = true;
        for c in fan.cones() {
            if fan.is_simplicial_cone(c) {
                cones.push(c.clone());
                continue;
            }
            let pts = fan.cone_rays(c);
            let hs: Vec<Rat> = c.iter().map(|&i| heights[i].clone()).collect();
            for cell in regular_subdivision(&pts, &hs) {
                let cell: Vec<usize> = cell.into_iter().map(|j| c[j]).collect();
                simplicial &= fan.is_simplicial_cone(&cell);
                cones.push(cell);
            }
        }
        if simplicial {
            return Ok(Fan::from_parts(fan.rank(), fan.rays().to_vec(), cones));
        }
        base *= 10;
    }
    Err(Error::breach("no generic lifting found for triangulation"))
}

/// Small projective Q-factorialization: a simplicial fan on the same rays
/// and with the same support.
pub fn qfactorialize(fan: &Fan) -> Result<(Fan, FanMap)> {
    let out = if fan.is_simplicial() { fan.clone() } else { lexicographic_triangulation(fan)? };
    let map = FanMap::identity(out.clone(), fan.clone())?;
    Ok((out, map))
}

/// Nonzero lattice point of the half-open parallelepiped of a simplicial
/// cone with the smallest coefficient sum, ties broken lexicographically.
fn parallelepiped_pivot(fan: &Fan, cone: &[usize]) -> Option<IntVector> {
    let rays = fan.cone_rays(cone);
    let k = rays.len();
    let a: Vec<IntVector> = (0..fan.rank()).map(|r| rays.iter().map(|v| v[r]).collect()).collect();
    let snf = smith_normal_form(&a, k);
    let right: Vec<Vec<Rat>> =
        snf.right.iter().map(|row| row.iter().map(|x| Rat::from_integer(x.clone())).collect()).collect();
    let mut best: Option<(Rat, IntVector)> = None;
    let ranges = snf.diagonal.iter().map(|s| {
        let s = i64::try_from(s.clone()).unwrap_or(i64::MAX);
        0..s
    });
    for js in ranges.multi_cartesian_product() {
        let mu: Vec<Rat> = js.iter().zip(&snf.diagonal).map(|(&j, s)| Rat::new(BigInt::from(j), s.clone())).collect();
        let lambda: Vec<Rat> = right
            .iter()
            .map(|row| {
                let x: Rat = row.iter().zip(&mu).fold(Rat::zero(), |acc, (r, m)| acc + r * m);
                &x - x.floor()
            })
            .collect();
        if lambda.iter().all(Zero::is_zero) {
            continue;
        }
        let depth = lambda.iter().fold(Rat::zero(), |acc, l| acc + l);
        let point: IntVector = (0..fan.rank())
            .map(|r| {
                let x = rays.iter().zip(&lambda).fold(Rat::zero(), |acc, (v, l)| acc + l * BigInt::from(v[r]));
                i64::try_from(x.to_integer()).expect("parallelepiped point fits in 64 bits")
            })
            .collect();
        let cand = (depth, point);
        if best.as_ref().map_or(true, |b| cand < *b) {
            best = Some(cand);
        }
    }
    best.map(|(_, p)| p)
}

/// Smooth refinement with the same support, by repeated stellar subdivision
/// of the first singular cone at its shallowest parallelepiped point.
pub fn resolve(fan: &Fan) -> Result<(Fan, FanMap)> {
    let (mut cur, _) = qfactorialize(fan)?;
    loop {
        let Some(c) = cur.cones().iter().find(|c| !cur.multiplicity(c).is_one()).cloned() else {
            break;
        };
        let p = parallelepiped_pivot(&cur, &c).ok_or_else(|| Error::breach("singular cone without interior point"))?;
        cur = star_subdivision(&cur, &p)?;
    }
    let map = FanMap::identity(cur.clone(), fan.clone())?;
    Ok((cur, map))
}

/// Whether `|a| ⊆ |b|`.
pub(crate) fn support_contained(a: &Fan, b: &Fan) -> bool {
    let hb: Vec<ConeH> = b.cones().iter().map(|c| b.cone_h(c)).collect();
    a.cones().iter().all(|c| {
        let region = a.cone_h(c);
        let d = a.cone_dim(c);
        let pieces: Vec<ConeH> =
            hb.iter().map(|h| region.intersect(h)).filter(|p| p.generators().dim(a.rank()) == d).collect();
        covers(&region, &pieces)
    })
}

/// Simplicial fan refining both inputs, built from the full-dimensional
/// pairwise intersections of their cones.
pub fn common_refinement(f1: &Fan, f2: &Fan) -> Result<(Fan, FanMap, FanMap)> {
    if f1.rank() != f2.rank() {
        return Err(Error::Dimension("fans live in lattices of different rank".into()));
    }
    if !support_contained(f1, f2) || !support_contained(f2, f1) {
        return Err(Error::pre("fans have different supports"));
    }
    let n = f1.rank();
    let mut pieces: Vec<Vec<IntVector>> = Vec::new();
    for c1 in f1.cones() {
        let h1 = f1.cone_h(c1);
        let d1 = f1.cone_dim(c1);
        for c2 in f2.cones() {
            if f2.cone_dim(c2) != d1 {
                continue;
            }
            let g = h1.intersect(&f2.cone_h(c2)).generators();
            if g.dim(n) != d1 {
                continue;
            }
            pieces.push(g.rays.iter().map(|r| primitive_rational(r)).collect::<Result<_>>()?);
        }
    }
    let mut rays: Vec<IntVector> = f1.rays().to_vec();
    for r in f2.rays() {
        if !rays.contains(r) {
            rays.push(r.clone());
        }
    }
    let fresh: BTreeSet<IntVector> = pieces.iter().flatten().filter(|r| !rays.contains(r)).cloned().collect();
    rays.extend(fresh);
    let cones: Vec<Vec<usize>> = pieces
        .iter()
        .map(|p| p.iter().map(|r| rays.iter().position(|x| x == r).unwrap()).collect())
        .collect();
    let used: BTreeSet<usize> = cones.iter().flatten().copied().collect();
    if used.len() != rays.len() {
        return Err(Error::breach("refinement lost a ray of an input fan"));
    }
    let z = Fan::from_parts(n, rays, cones);
    let (z, _) = qfactorialize(&z)?;
    let m1 = FanMap::identity(z.clone(), f1.clone())?;
    let m2 = FanMap::identity(z.clone(), f2.clone())?;
    Ok((z, m1, m2))
}
