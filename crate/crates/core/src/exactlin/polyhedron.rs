use std::collections::BTreeMap;

use num::{BigInt, Signed, Zero};

use super::{clear_denominators, dot, dot_int, rat, ConeH, IntVector, Rat, RationalVector};
use crate::error::{Error, Result};

/// One constraint `⟨normal, x⟩ + offset ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: RationalVector,
    pub offset: Rat,
}

impl Halfspace {
    pub fn holds_at(&self, x: &[Rat]) -> bool {
        dot(&self.normal, x) + &self.offset >= Rat::zero()
    }

    pub fn holds_at_int(&self, x: &[i64]) -> bool {
        dot_int(&self.normal, x) + &self.offset >= Rat::zero()
    }

    /// Positive rescaling that makes `(normal, offset)` a primitive integer row.
    fn normalized(&self) -> Halfspace {
        let mut all = self.normal.clone();
        all.push(self.offset.clone());
        let ints = clear_denominators(&all);
        let g = ints.iter().fold(BigInt::zero(), |g, x| num::Integer::gcd(&g, x));
        if g.is_zero() {
            return self.clone();
        }
        let mut v: Vec<Rat> = ints.into_iter().map(|x| Rat::from_integer(x / &g)).collect();
        let offset = v.pop().unwrap();
        Halfspace { normal: v, offset }
    }
}

/// A system of half-spaces `⟨normal, x⟩ + offset ≥ 0` in a fixed dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfspaceSystem {
    dim: usize,
    constraints: Vec<Halfspace>,
}

impl HalfspaceSystem {
    pub fn new(dim: usize, constraints: Vec<Halfspace>) -> Result<Self> {
        for c in &constraints {
            if c.normal.len() != dim {
                return Err(Error::Dimension(format!("constraint normal has length {}, expected {dim}", c.normal.len())));
            }
            if c.normal.iter().all(Zero::is_zero) {
                return Err(Error::Malformed("half-space with zero normal".into()));
            }
        }
        Ok(Self { dim, constraints })
    }

    #[cfg(test)]
    pub(crate) fn new_unchecked(dim: usize, constraints: Vec<Halfspace>) -> Self {
        Self { dim, constraints }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[Halfspace] {
        &self.constraints
    }

    pub fn push(&mut self, h: Halfspace) {
        assert_eq!(h.normal.len(), self.dim);
        self.constraints.push(h);
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.constraints.iter().all(|c| c.holds_at(x))
    }

    pub fn contains_int(&self, x: &[i64]) -> bool {
        self.constraints.iter().all(|c| c.holds_at_int(x))
    }

    /// Recession cone `{x : ⟨normal, x⟩ ≥ 0}`.
    pub fn recession_cone(&self) -> ConeH {
        ConeH::from_inequalities(self.dim, vec![], self.constraints.iter().map(|c| c.normal.clone()).collect())
    }

    /// Homogenization `{(x,t) : ⟨normal,x⟩ + t·offset ≥ 0, t ≥ 0}`.
    pub fn homogenization(&self) -> ConeH {
        let mut ineqs: Vec<RationalVector> = self
            .constraints
            .iter()
            .map(|c| {
                let mut v = c.normal.clone();
                v.push(c.offset.clone());
                v
            })
            .collect();
        let mut t = vec![Rat::zero(); self.dim + 1];
        t[self.dim] = rat(1);
        ineqs.push(t);
        ConeH::from_inequalities(self.dim + 1, vec![], ineqs)
    }

    /// Whether the polyhedron has no nonzero recession directions. An empty
    /// polyhedron counts as bounded.
    pub fn is_bounded(&self) -> bool {
        if lp_feasible(self).is_none() {
            return true;
        }
        let g = self.recession_cone().generators();
        g.lineality.is_empty() && g.rays.is_empty()
    }
}

/// Fourier–Motzkin elimination chain: `levels[k]` constrains `x_0..x_k`
/// only (entries beyond `k` are zero). `None` when a contradiction appears.
struct Projection {
    levels: Vec<Vec<Halfspace>>,
}

fn dedup(constraints: Vec<Halfspace>) -> Option<Vec<Halfspace>> {
    // keep the tightest offset per normal direction
    let mut best: BTreeMap<RationalVector, Rat> = BTreeMap::new();
    for c in constraints {
        if c.normal.iter().all(Zero::is_zero) {
            if c.offset.is_negative() {
                return None;
            }
            continue;
        }
        let n = c.normalized();
        // scale so that the normal itself is primitive, keeping the offset rational
        let ints = clear_denominators(&n.normal);
        let g = ints.iter().fold(BigInt::zero(), |g, x| num::Integer::gcd(&g, x));
        let f = Rat::from_integer(g);
        let normal: RationalVector = n.normal.iter().map(|x| x / &f).collect();
        let offset = &n.offset / &f;
        best.entry(normal)
            .and_modify(|o| {
                if offset < *o {
                    *o = offset.clone();
                }
            })
            .or_insert(offset);
    }
    Some(best.into_iter().map(|(normal, offset)| Halfspace { normal, offset }).collect())
}

fn project(sys: &HalfspaceSystem) -> Option<Projection> {
    let n = sys.dim;
    let mut current = dedup(sys.constraints.clone())?;
    let mut levels = vec![Vec::new(); n];
    for k in (0..n).rev() {
        levels[k] = current.clone();
        if k == 0 {
            break;
        }
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for c in current {
            if c.normal[k].is_positive() {
                pos.push(c);
            } else if c.normal[k].is_negative() {
                neg.push(c);
            } else {
                rest.push(c);
            }
        }
        for p in &pos {
            for q in &neg {
                let a = p.normal[k].clone();
                let b = -q.normal[k].clone();
                let normal: RationalVector =
                    p.normal.iter().zip(&q.normal).map(|(x, y)| x * &b + y * &a).collect();
                let offset = &p.offset * &b + &q.offset * &a;
                rest.push(Halfspace { normal, offset });
            }
        }
        current = dedup(rest)?;
    }
    if n == 0 {
        dedup(sys.constraints.clone())?;
    }
    Some(Projection { levels })
}

/// Interval for `x_k` given fixed `x_0..x_{k-1}`; `None` if empty.
fn interval(level: &[Halfspace], k: usize, prefix: &[Rat]) -> Option<(Option<Rat>, Option<Rat>)> {
    let (mut lo, mut hi): (Option<Rat>, Option<Rat>) = (None, None);
    for c in level {
        let rest = c.normal[..k].iter().zip(prefix).fold(c.offset.clone(), |acc, (a, x)| acc + a * x);
        let a = &c.normal[k];
        if a.is_zero() {
            if rest.is_negative() {
                return None;
            }
        } else if a.is_positive() {
            let b = -rest / a;
            if lo.as_ref().map_or(true, |l| b > *l) {
                lo = Some(b);
            }
        } else {
            let b = rest / (-a.clone());
            if hi.as_ref().map_or(true, |h| b < *h) {
                hi = Some(b);
            }
        }
    }
    if let (Some(l), Some(h)) = (&lo, &hi) {
        if l > h {
            return None;
        }
    }
    Some((lo, hi))
}

/// Exact feasibility by Fourier–Motzkin elimination with back-substitution.
/// The witness prefers 0 coordinate-wise, then the finite lower bound.
pub fn lp_feasible(sys: &HalfspaceSystem) -> Option<RationalVector> {
    let proj = project(sys)?;
    let mut x: RationalVector = Vec::with_capacity(sys.dim);
    for k in 0..sys.dim {
        let (lo, hi) = interval(&proj.levels[k], k, &x)?;
        let zero = Rat::zero();
        let v = match (&lo, &hi) {
            (l, h) if l.as_ref().map_or(true, |l| *l <= zero) && h.as_ref().map_or(true, |h| *h >= zero) => zero,
            (Some(l), _) => l.clone(),
            (None, Some(h)) => h.clone(),
            (None, None) => zero,
        };
        x.push(v);
    }
    Some(x)
}

fn enumerate(proj: &Projection, k: usize, prefix: &mut Vec<Rat>, out: &mut Vec<IntVector>) -> Result<()> {
    let n = proj.levels.len();
    if k == n {
        out.push(prefix.iter().map(|x| super::to_i64(x)).collect::<Result<_>>()?);
        return Ok(());
    }
    let Some((lo, hi)) = interval(&proj.levels[k], k, prefix) else {
        return Ok(());
    };
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return Err(Error::Unbounded);
    };
    let lo = super::to_i64(&lo.ceil())?;
    let hi = super::to_i64(&hi.floor())?;
    for v in lo..=hi {
        prefix.push(rat(v));
        enumerate(proj, k + 1, prefix, out)?;
        prefix.pop();
    }
    Ok(())
}

/// All lattice points of the polyhedron, in lexicographic order, by
/// recursive coordinate-interval enumeration.
pub fn lattice_points(sys: &HalfspaceSystem, bounded: bool) -> Result<Vec<IntVector>> {
    let Some(proj) = project(sys) else {
        return Ok(vec![]);
    };
    if bounded && !sys.is_bounded() {
        return Err(Error::Unbounded);
    }
    let mut out = Vec::new();
    if sys.dim == 0 {
        out.push(vec![]);
        return Ok(out);
    }
    enumerate(&proj, 0, &mut Vec::new(), &mut out)?;
    Ok(out)
}

/// Lattice points inside the box `lo ≤ x ≤ hi` (coordinate-wise).
pub fn lattice_points_in_box(sys: &HalfspaceSystem, lo: &[i64], hi: &[i64]) -> Result<Vec<IntVector>> {
    let mut boxed = sys.clone();
    for j in 0..sys.dim {
        let mut e = vec![Rat::zero(); sys.dim];
        e[j] = rat(1);
        boxed.push(Halfspace { normal: e.clone(), offset: rat(-lo[j]) });
        boxed.push(Halfspace { normal: e.iter().map(|x| -x.clone()).collect(), offset: rat(hi[j]) });
    }
    lattice_points(&boxed, true)
}

/// Some lattice point of a possibly unbounded pointed polyhedron, or `None`.
///
/// Any lattice point `p + Σ μ_r r` can be shifted by integer multiples of the
/// integral recession rays `r` into `conv(vertices) + Σ [0,1)·r`, so searching
/// the bounding box of that set is exhaustive.
pub fn lattice_point_in(sys: &HalfspaceSystem) -> Result<Option<IntVector>> {
    if lp_feasible(sys).is_none() {
        return Ok(None);
    }
    let gens = sys.homogenization().generators();
    if !gens.lineality.is_empty() {
        return Err(Error::NotPointed);
    }
    let n = sys.dim;
    let mut lo = vec![i64::MAX; n];
    let mut hi = vec![i64::MIN; n];
    let mut ray_lo = vec![Rat::zero(); n];
    let mut ray_hi = vec![Rat::zero(); n];
    for g in &gens.rays {
        let t = &g[n];
        if t.is_positive() {
            for j in 0..n {
                let c = &g[j] / t;
                lo[j] = lo[j].min(super::to_i64(&c.floor())?);
                hi[j] = hi[j].max(super::to_i64(&c.ceil())?);
            }
        } else {
            let r = clear_denominators(&g[..n]);
            for j in 0..n {
                let c = Rat::from_integer(r[j].clone());
                if c.is_negative() {
                    ray_lo[j] += c;
                } else {
                    ray_hi[j] += c;
                }
            }
        }
    }
    if n == 0 {
        return Ok(Some(vec![]));
    }
    for j in 0..n {
        lo[j] += super::to_i64(&ray_lo[j])?;
        hi[j] += super::to_i64(&ray_hi[j])?;
    }
    Ok(lattice_points_in_box(sys, &lo, &hi)?.into_iter().next())
}
