use std::collections::BTreeSet;

use num::Zero;

use super::{dot, is_zero_vector, normalize_direction, rank_of, rref, RationalMatrix, RationalVector};
use crate::error::{Error, Result};

/// Polyhedral cone in half-space form: `{x : e·x = 0 ∀e, h·x ≥ 0 ∀h}`.
///
/// Normals are kept in primitive integer form so that equal constraints
/// compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeH {
    pub ambient: usize,
    pub equations: Vec<RationalVector>,
    pub inequalities: Vec<RationalVector>,
}

/// Generator form: a lineality basis plus rays modulo the lineality space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeV {
    pub lineality: Vec<RationalVector>,
    pub rays: Vec<RationalVector>,
}

impl ConeV {
    pub fn dim(&self, ambient: usize) -> usize {
        let all: Vec<RationalVector> = self.lineality.iter().chain(&self.rays).cloned().collect();
        rank_of(&all, ambient)
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }
}

fn kernel(rows: &[RationalVector], ncols: usize) -> Vec<RationalVector> {
    RationalMatrix::new(rows.to_vec(), ncols).expect("consistent row lengths").kernel()
}

fn dedup_directions(vs: impl IntoIterator<Item = RationalVector>) -> Vec<RationalVector> {
    let set: BTreeSet<RationalVector> = vs
        .into_iter()
        .filter(|v| !is_zero_vector(v))
        .map(|v| normalize_direction(&v))
        .collect();
    set.into_iter().collect()
}

/// Extreme rays of the pointed cone `{x ∈ ℚ^d : c·x ≥ 0 ∀c}` by the double
/// description method; `cons` must have rank `d`. Two rays are combined
/// only when adjacent: their common tight set has at least `d − 2` members
/// and lies in no other ray's tight set.
fn dd_extreme_rays(cons: &[RationalVector], d: usize) -> Vec<RationalVector> {
    if d == 0 {
        return vec![];
    }
    let words = cons.len().div_ceil(64);
    let bit = |set: &mut Vec<u64>, i: usize| set[i / 64] |= 1 << (i % 64);
    let count = |set: &[u64]| set.iter().map(|w| w.count_ones() as usize).sum::<usize>();

    let mut chosen: Vec<usize> = Vec::new();
    let mut rows: Vec<RationalVector> = Vec::new();
    for (i, c) in cons.iter().enumerate() {
        rows.push(c.clone());
        if rank_of(&rows, d) == rows.len() {
            chosen.push(i);
            if chosen.len() == d {
                break;
            }
        } else {
            rows.pop();
        }
    }
    assert_eq!(chosen.len(), d, "constraints must have full rank");
    let a = RationalMatrix::new(rows, d).expect("square");
    let mut rays: Vec<(RationalVector, Vec<u64>)> = (0..d)
        .map(|j| {
            let mut e = vec![num::BigRational::zero(); d];
            e[j] = num::BigRational::from_integer(1.into());
            let r = normalize_direction(&a.solve(&e).expect("invertible"));
            let mut z = vec![0u64; words];
            for (k, &i) in chosen.iter().enumerate() {
                if k != j {
                    bit(&mut z, i);
                }
            }
            (r, z)
        })
        .collect();

    for (k, c) in cons.iter().enumerate() {
        if chosen.contains(&k) {
            continue;
        }
        let vals: Vec<num::BigRational> = rays.iter().map(|(r, _)| dot(c, r)).collect();
        let zero = num::BigRational::zero();
        let mut next: Vec<(RationalVector, Vec<u64>)> = Vec::new();
        for ((r, z), v) in rays.iter().zip(&vals) {
            if *v > zero {
                next.push((r.clone(), z.clone()));
            } else if v.is_zero() {
                let mut z = z.clone();
                bit(&mut z, k);
                next.push((r.clone(), z));
            }
        }
        for (p, vp) in rays.iter().zip(&vals).filter(|(_, v)| **v > zero) {
            for (n, vn) in rays.iter().zip(&vals).filter(|(_, v)| **v < zero) {
                let common: Vec<u64> = p.1.iter().zip(&n.1).map(|(x, y)| x & y).collect();
                if count(&common) + 2 < d {
                    continue;
                }
                let blocked = rays.iter().any(|(r, z)| {
                    !std::ptr::eq(r, &p.0) && !std::ptr::eq(r, &n.0) && common.iter().zip(z).all(|(c, z)| c & !z == 0)
                });
                if blocked {
                    continue;
                }
                let new: RationalVector = n.0.iter().zip(&p.0).map(|(x, y)| vp * x - vn * y).collect();
                if is_zero_vector(&new) {
                    continue;
                }
                let mut z = common;
                bit(&mut z, k);
                next.push((normalize_direction(&new), z));
            }
        }
        rays = next;
    }
    dedup_directions(rays.into_iter().map(|(r, _)| r))
}

impl ConeH {
    /// Facet description of the cone generated by `gens`: the facet normals
    /// are the extreme rays of the dual cone, computed in coordinates on the
    /// span of the generators.
    pub fn from_generators(ambient: usize, gens: &[RationalVector]) -> Self {
        let gens = dedup_directions(gens.iter().cloned());
        let (basis, _) = rref(gens.clone(), ambient);
        let d = basis.len();
        let equations = dedup_directions(kernel(&basis, ambient));
        let local: Vec<RationalVector> =
            gens.iter().map(|g| basis.iter().map(|b| dot(b, g)).collect()).collect();
        let mut inequalities = BTreeSet::new();
        for k in dd_extreme_rays(&local, d) {
            let mut h = vec![num::BigRational::zero(); ambient];
            for (c, b) in k.iter().zip(&basis) {
                for (x, y) in h.iter_mut().zip(b) {
                    *x += c * y;
                }
            }
            inequalities.insert(normalize_direction(&h));
        }
        ConeH { ambient, equations, inequalities: inequalities.into_iter().collect() }
    }

    pub fn from_inequalities(ambient: usize, equations: Vec<RationalVector>, inequalities: Vec<RationalVector>) -> Self {
        ConeH { ambient, equations: dedup_directions(equations), inequalities: dedup_directions(inequalities) }
    }

    /// The whole ambient space.
    pub fn full(ambient: usize) -> Self {
        ConeH { ambient, equations: vec![], inequalities: vec![] }
    }

    pub fn intersect(&self, other: &ConeH) -> ConeH {
        assert_eq!(self.ambient, other.ambient);
        ConeH::from_inequalities(
            self.ambient,
            self.equations.iter().chain(&other.equations).cloned().collect(),
            self.inequalities.iter().chain(&other.inequalities).cloned().collect(),
        )
    }

    pub fn contains(&self, x: &[num::BigRational]) -> bool {
        self.equations.iter().all(|e| dot(e, x).is_zero())
            && self.inequalities.iter().all(|h| dot(h, x) >= num::BigRational::zero())
    }

    pub fn lineality(&self) -> Vec<RationalVector> {
        let rows: Vec<RationalVector> = self.equations.iter().chain(&self.inequalities).cloned().collect();
        kernel(&rows, self.ambient)
    }

    /// Generators of the cone: the lineality space, and the extreme rays of
    /// the pointed part found by double description on its span.
    pub fn generators(&self) -> ConeV {
        let lineality = self.lineality();
        let mut eqs: Vec<RationalVector> = self.equations.clone();
        eqs.extend(lineality.iter().cloned());
        let basis = kernel(&eqs, self.ambient);
        let s = basis.len();
        let local: Vec<RationalVector> =
            self.inequalities.iter().map(|h| basis.iter().map(|b| dot(h, b)).collect()).collect();
        let rays = dd_extreme_rays(&local, s)
            .into_iter()
            .map(|z| {
                let mut x = vec![num::BigRational::zero(); self.ambient];
                for (c, b) in z.iter().zip(&basis) {
                    for (xi, bi) in x.iter_mut().zip(b) {
                        *xi += c * bi;
                    }
                }
                normalize_direction(&x)
            })
            .collect::<BTreeSet<_>>();
        ConeV { lineality: dedup_directions(lineality), rays: rays.into_iter().collect() }
    }

    pub fn dim(&self) -> usize {
        self.generators().dim(self.ambient)
    }

    /// Rank of the equations together with the inequalities tight at `x`.
    pub fn tight_rank(&self, x: &[num::BigRational]) -> usize {
        let rows: Vec<RationalVector> = self
            .equations
            .iter()
            .cloned()
            .chain(self.inequalities.iter().filter(|h| dot(h, x).is_zero()).cloned())
            .collect();
        rank_of(&rows, self.ambient)
    }

    pub fn tight_inequalities(&self, x: &[num::BigRational]) -> Vec<&RationalVector> {
        self.inequalities.iter().filter(|h| dot(h, x).is_zero()).collect()
    }
}

/// Indices of the generators that span extreme rays of their cone. Among
/// parallel generators the first index is reported.
pub fn extreme_rays(generators: &[RationalVector]) -> Result<Vec<usize>> {
    let Some(first) = generators.first() else {
        return Ok(vec![]);
    };
    let ambient = first.len();
    if generators.iter().any(|g| g.len() != ambient) {
        return Err(Error::Dimension("generators of differing length".into()));
    }
    // work in coordinates on the span, where the cone is full-dimensional
    let cols = super::span_pivots(generators, ambient);
    let local: Vec<RationalVector> = generators.iter().map(|g| super::restrict(g, &cols)).collect();
    let cone = ConeH::from_generators(cols.len(), &local);
    if !cone.lineality().is_empty() {
        return Err(Error::NotStronglyConvex);
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (i, g) in generators.iter().enumerate() {
        if is_zero_vector(g) {
            continue;
        }
        let dir = normalize_direction(g);
        if seen.contains(&dir) {
            continue;
        }
        if cone.tight_rank(&local[i]) + 1 == cols.len() {
            seen.insert(dir);
            out.push(i);
        }
    }
    Ok(out)
}
