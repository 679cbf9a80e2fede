use num::{Signed, Zero};

use super::contraction::{contract, ContractionKind};
use crate::curves::{nefness, pairing, walls, wall_relation, CurveClass};
use crate::divisor::{pullback, InvariantDivisor};
use crate::error::{Error, Result};
use crate::exactlin::Rat;
use crate::fan::{common_refinement, regular_subdivision, Fan, FanMap};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipResult {
    /// `X⁺ → W`.
    pub to_w: FanMap,
    /// `W → Y`.
    pub w_to_base: FanMap,
    /// `D⁺` on `X⁺`; rays are unchanged so the coefficients carry over.
    pub divisor: InvariantDivisor,
    /// `D · R`, negative.
    pub old_value: Rat,
    /// New walls inside the merged cones with their classes and `D⁺`-values,
    /// all positive.
    pub new_walls: Vec<(CurveClass, Rat)>,
}

impl FlipResult {
    pub fn fan(&self) -> &Fan {
        &self.to_w.source
    }
}

/// Flip of the `d`-negative small contraction of `face`.
///
/// Each merged cone is re-triangulated by the regular subdivision with the
/// coefficients of `d` as lifting heights: the lower hull makes the lifted
/// function strictly convex across every new internal wall, which is the
/// statement `D⁺ · C⁺ > 0`.
pub fn flip(m: &FanMap, face: &[CurveClass], d: &InvariantDivisor) -> Result<FlipResult> {
    d.check_len(&m.source)?;
    let c = contract(m, face)?;
    if c.kind != ContractionKind::Flipping {
        return Err(Error::pre(format!("contraction is {}, not flipping", c.kind.name())));
    }
    let old_value = pairing(&face[0], d);
    if !old_value.is_negative() {
        return Err(Error::pre(format!("divisor is not negative on the face (value {old_value})")));
    }
    let x = &m.source;
    let mut cones: Vec<Vec<usize>> =
        x.cones().iter().filter(|cone| !c.merged_cones.iter().any(|g| cone.iter().all(|i| g.contains(i)))).cloned().collect();
    for g in &c.merged_cones {
        let pts = x.cone_rays(g);
        let hs: Vec<Rat> = g.iter().map(|&i| d.coeffs[i].clone()).collect();
        for cell in regular_subdivision(&pts, &hs) {
            let cell: Vec<usize> = cell.into_iter().map(|j| g[j]).collect();
            if !x.is_simplicial_cone(&cell) {
                return Err(Error::breach(format!("flip cell {cell:?} is not simplicial")));
            }
            cones.push(cell);
        }
    }
    let plus = Fan::new(x.rank(), x.rays().to_vec(), cones)?;
    if plus.rays() != x.rays() {
        return Err(Error::breach("flip changed the ray set"));
    }
    if &plus == x {
        return Err(Error::breach("flip returned the original fan"));
    }
    let mut new_walls = Vec::new();
    for w in walls(&plus) {
        let inside = c.merged_cones.iter().any(|g| {
            w.cones.iter().all(|&k| plus.cones()[k].iter().all(|i| g.contains(i)))
        });
        if !inside {
            continue;
        }
        let class = wall_relation(&plus, &w)?;
        let v = pairing(&class, d);
        if !v.is_positive() {
            return Err(Error::breach(format!("flipped divisor has value {v} on new wall {:?}", w.rays)));
        }
        new_walls.push((class, v));
    }
    let to_w = FanMap::identity(plus, c.target().clone())?;
    Ok(FlipResult { to_w, w_to_base: c.to_base, divisor: d.clone(), old_value, new_walls })
}

/// One side of the negativity comparison: `X → W` with a divisor on `X`.
#[derive(Debug, Clone, Copy)]
pub struct Side<'a> {
    pub map: &'a FanMap,
    pub divisor: &'a InvariantDivisor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Negativity {
    /// Common refinement `Z`.
    pub fan: Fan,
    /// `E = μ*D − ν*D′` on `Z`.
    pub e: InvariantDivisor,
}

/// Checks the hypotheses of the negativity lemma for `f: X → W` with `−D`
/// ample over `W` and `g: X′ → W` with `D′` ample over `W`, then returns
/// `E = μ*D − ν*D′` on a common refinement after asserting that it is
/// effective, exceptional over `W`, and nonzero unless both maps are
/// isomorphisms.
pub fn verify_negativity(mu: Side<'_>, nu: Side<'_>) -> Result<Negativity> {
    let (f, g) = (mu.map, nu.map);
    if f.target != g.target {
        return Err(Error::pre("the two sides have different bases"));
    }
    if !f.is_identity_matrix() || !g.is_identity_matrix() {
        return Err(Error::pre("both sides must be birational"));
    }
    mu.divisor.check_len(&f.source)?;
    nu.divisor.check_len(&g.source)?;
    for (i, r) in f.source.rays().iter().enumerate() {
        if let Some(j) = g.source.ray_index(r) {
            if f.target.ray_index(r).is_some() && mu.divisor.coeffs[i] != nu.divisor.coeffs[j] {
                return Err(Error::pre(format!("pushforwards differ at ray {r:?}")));
            }
        }
    }
    let minus = mu.divisor.scale(&Rat::from_integer((-1).into()));
    if !nefness(&minus, f, true)?.nef {
        return Err(Error::pre("-D is not ample over the base"));
    }
    if !nefness(nu.divisor, g, true)?.nef {
        return Err(Error::pre("D' is not ample over the base"));
    }
    let (z, to_x, to_x2) = common_refinement(&f.source, &g.source)?;
    let e = &pullback(&to_x, mu.divisor)? - &pullback(&to_x2, nu.divisor)?;
    if !e.is_effective() {
        return Err(Error::breach(format!("negativity lemma fails: E = {e} is not effective")));
    }
    for (r, c) in z.rays().iter().zip(&e.coeffs) {
        if !c.is_zero() && f.target.ray_index(r).is_some() {
            return Err(Error::breach(format!("E = {e} is not exceptional over the base")));
        }
    }
    let trivial = f.source == f.target && g.source == g.target;
    if !trivial && e.is_zero() {
        return Err(Error::breach("E vanishes although a side is not an isomorphism"));
    }
    Ok(Negativity { fan: z, e })
}
