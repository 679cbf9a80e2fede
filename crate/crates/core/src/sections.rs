//! Section cones, their Hilbert bases, pseudo-effectivity and Zariski
//! decomposition.
//!
//! Graded lattice points are written `(u, a)` as one vector of length
//! `rank + 1` with the grading last.

use num::{BigInt, Signed, Zero};

use crate::curves::{nefness, CurveClass, Wall};
use crate::divisor::{polytope, pullback, round_down, sections_polytope, support_function, InvariantDivisor};
use crate::error::{Error, Result};
use crate::exactlin::{
    clear_denominators, dot_int, extreme_rays, lattice_point_in, lattice_points, lp_feasible, primitive_rational,
    rank_of_int, to_i64, ConeH, Halfspace, HalfspaceSystem, IntVector, Rat, RationalVector,
};
use crate::fan::{common_refinement, resolve, Fan, FanMap};
use crate::mmp::{contract_face, run_mmp, MmpTrace, Outcome};

/// `{(u, a) : a ≥ 0, ⟨u, v_ρ⟩ + a·d_ρ ≥ 0 ∀ρ}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionCone {
    rank: usize,
    system: HalfspaceSystem,
}

impl SectionCone {
    /// Needs no Q-Cartier hypothesis on `d`.
    pub fn new(fan: &Fan, d: &InvariantDivisor) -> Result<SectionCone> {
        d.check_len(fan)?;
        let n = fan.rank();
        let mut hs: Vec<Halfspace> = fan
            .rays()
            .iter()
            .zip(&d.coeffs)
            .map(|(r, c)| {
                let mut normal = crate::exactlin::to_rational(r);
                normal.push(c.clone());
                Halfspace { normal, offset: Rat::zero() }
            })
            .collect();
        let mut grading = vec![Rat::zero(); n + 1];
        grading[n] = Rat::from_integer(1.into());
        hs.push(Halfspace { normal: grading, offset: Rat::zero() });
        Ok(SectionCone { rank: n, system: HalfspaceSystem::new(n + 1, hs)? })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn system(&self) -> &HalfspaceSystem {
        &self.system
    }

    pub fn cone(&self) -> ConeH {
        ConeH::from_inequalities(
            self.rank + 1,
            vec![],
            self.system.constraints().iter().map(|h| h.normal.clone()).collect(),
        )
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.system.contains_int(x)
    }
}

/// Minimal generating set of `C ∩ ℤ^k` for a pointed cone, sorted.
///
/// A grading `ℓ` positive on `C \ 0` is the sum of the facet normals.
/// Every basis element lies in the parallelepiped of some simplicial
/// subcone on extreme rays, so `ℓ ≤ Σ ℓ(r)` bounds the search; points are
/// then visited by increasing `ℓ` and kept unless some kept `h` has
/// `x − h ∈ C`.
pub fn hilbert_basis_of(cone: &ConeH) -> Result<Vec<IntVector>> {
    let k = cone.ambient;
    let g = cone.generators();
    if !g.is_pointed() {
        return Err(Error::NotPointed);
    }
    if g.rays.is_empty() {
        return Ok(vec![]);
    }
    let mut ell = vec![Rat::zero(); k];
    for h in &cone.inequalities {
        for (a, b) in ell.iter_mut().zip(h) {
            *a += b;
        }
    }
    let ell: RationalVector = clear_denominators(&ell).into_iter().map(Rat::from_integer).collect();
    let rays: Vec<IntVector> = g.rays.iter().map(|r| primitive_rational(r)).collect::<Result<_>>()?;
    let bound: Rat = rays.iter().map(|r| dot_int(&ell, r)).sum();

    let mut hs: Vec<Halfspace> =
        cone.inequalities.iter().map(|h| Halfspace { normal: h.clone(), offset: Rat::zero() }).collect();
    for e in &cone.equations {
        hs.push(Halfspace { normal: e.clone(), offset: Rat::zero() });
        hs.push(Halfspace { normal: e.iter().map(|x| -x.clone()).collect(), offset: Rat::zero() });
    }
    hs.push(Halfspace { normal: ell.iter().map(|x| -x.clone()).collect(), offset: bound });
    let sys = HalfspaceSystem::new(k, hs)?;
    let mut pts: Vec<(Rat, IntVector)> = lattice_points(&sys, true)?
        .into_iter()
        .filter(|p| p.iter().any(|&x| x != 0))
        .map(|p| (dot_int(&ell, &p), p))
        .collect();
    pts.sort();

    let in_cone = |x: &[i64]| sys.constraints().iter().take(sys.constraints().len() - 1).all(|h| h.holds_at_int(x));
    let mut basis: Vec<IntVector> = Vec::new();
    for (_, x) in pts {
        let reducible = basis.iter().any(|h| {
            let diff: IntVector = x.iter().zip(h).map(|(a, b)| a - b).collect();
            in_cone(&diff)
        });
        if !reducible {
            basis.push(x);
        }
    }
    basis.sort_by(|a, b| (a[k - 1], a).cmp(&(b[k - 1], b)));
    Ok(basis)
}

/// Hilbert basis of a section cone, sorted by grading then lexicographically.
pub fn hilbert_basis(c: &SectionCone) -> Result<Vec<IntVector>> {
    hilbert_basis_of(&c.cone())
}

fn check_affine(m: &FanMap) -> Result<()> {
    if m.target.cones().len() != 1 {
        return Err(Error::pre("base is not affine"));
    }
    Ok(())
}

/// Generators of `⊕_a f_*O(aD)` for a Weil divisor over an affine base.
pub fn algebra_generators(m: &FanMap, d: &InvariantDivisor) -> Result<Vec<IntVector>> {
    check_affine(m)?;
    let x = &m.source;
    if rank_of_int(x.rays(), x.rank()) != x.rank() {
        return Err(Error::pre("source support is not full-dimensional"));
    }
    hilbert_basis(&SectionCone::new(x, d)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Non-emptiness of `P_D` (affine base).
    Lp,
    /// Outcome of the MMP for `D`.
    Mmp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PsefWitness {
    /// A rational point of `P_D`.
    Point(RationalVector),
    EmptyPolytope,
    Mmp(Box<MmpTrace>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsefVerdict {
    pub pseudo_effective: bool,
    pub witness: PsefWitness,
}

pub fn is_pseudo_effective(m: &FanMap, d: &InvariantDivisor, route: Route) -> Result<PsefVerdict> {
    match route {
        Route::Lp => {
            check_affine(m)?;
            let sys = sections_polytope(m, d)?;
            Ok(match lp_feasible(&sys) {
                Some(u) => PsefVerdict { pseudo_effective: true, witness: PsefWitness::Point(u) },
                None => PsefVerdict { pseudo_effective: false, witness: PsefWitness::EmptyPolytope },
            })
        }
        Route::Mmp => {
            let t = run_mmp(m, d)?;
            Ok(PsefVerdict { pseudo_effective: t.outcome == Outcome::Minimal, witness: PsefWitness::Mmp(Box::new(t)) })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZariskiResult {
    /// `Z → Y`.
    pub model: FanMap,
    /// `μ: Z → X`, a refinement.
    pub to_source: FanMap,
    pub p: InvariantDivisor,
    pub n: InvariantDivisor,
    pub trace: MmpTrace,
    /// Smallest `ℓ` with `ℓP` Cartier.
    pub cartier_index: BigInt,
    /// Target of the face contraction of `P`, the semi-ampleness certificate.
    pub ample_model: Fan,
}

/// `μ*D = P + N` on a common refinement of a resolution of `X` and the
/// nef model of the MMP for `D`.
pub fn zariski_decompose(m: &FanMap, d: &InvariantDivisor) -> Result<ZariskiResult> {
    d.check_len(&m.source)?;
    let (xr, mu) = resolve(&m.source)?;
    let dr = pullback(&mu, d)?;
    let mr = FanMap::new(m.matrix.clone(), xr.clone(), m.target.clone())?;
    let trace = run_mmp(&mr, &dr)?;
    if trace.outcome != Outcome::Minimal {
        return Err(Error::pre("pseudo-effectivity failed: the MMP ends with a Fano contraction"));
    }
    let (z, _, to_last) = common_refinement(&xr, &trace.model.source)?;
    let p = pullback(&to_last, &trace.divisor)?;
    let to_source = FanMap::identity(z.clone(), m.source.clone())?;
    let n = &pullback(&to_source, d)? - &p;
    if !n.is_effective() {
        return Err(Error::breach(format!("negative part {n} is not effective")));
    }
    let model = FanMap::new(m.matrix.clone(), z.clone(), m.target.clone())?;
    if !nefness(&p, &model, false)?.nef {
        return Err(Error::breach(format!("positive part {p} is not nef")));
    }
    let face = contract_face(&model, &p).map_err(|e| Error::breach(format!("positive part is not semi-ample: {e}")))?;
    let cartier_index = support_function(&z, &p)?.cartier_index;
    Ok(ZariskiResult { model, to_source, p, n, trace, cartier_index, ample_model: face.target().clone() })
}

/// `m_max` from the Cartier index of `P`.
pub fn default_m_max(r: &ZariskiResult) -> Result<usize> {
    let i: i64 = to_i64(&Rat::from_integer(r.cartier_index.clone()))?;
    Ok(4 * i as usize)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CkmFailure {
    NotNef { wall: Wall, class: CurveClass, value: Rat },
    NotEffective { ray: usize, coeff: Rat },
    /// A monomial in exactly one of the two section sets for multiple `m`.
    Sections { m: usize, witness: IntVector },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CkmVerdict {
    pub failure: Option<CkmFailure>,
    /// Multiples checked before stopping.
    pub checked: usize,
}

impl CkmVerdict {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Lattice point of `P_A` outside `P_B`, if any.
fn section_outside(fan: &Fan, a: &InvariantDivisor, b: &InvariantDivisor) -> Result<Option<IntVector>> {
    let pa = polytope(fan, a)?;
    for (r, c) in fan.rays().iter().zip(&b.coeffs) {
        // ⟨u, v⟩ + c ≤ -1 on lattice points, c integral
        let mut sys = pa.clone();
        sys.push(Halfspace {
            normal: r.iter().map(|&x| Rat::from_integer((-x).into())).collect(),
            offset: -c.clone() - Rat::from_integer(1.into()),
        });
        if let Some(u) = lattice_point_in(&sys)? {
            return Ok(Some(u));
        }
    }
    Ok(None)
}

/// Checks that `P` is nef, `N` is effective, and `P_{⌊mP⌋} ∩ M =
/// P_{⌊mμ*D⌋} ∩ M` for `m = 1..=m_max`, exactly.
pub fn verify_ckm(r: &ZariskiResult, d: &InvariantDivisor, m_max: usize) -> Result<CkmVerdict> {
    check_affine(&r.model)?;
    let z = &r.model.source;
    if let Some((wall, class, value)) = nefness(&r.p, &r.model, false)?.violation {
        return Ok(CkmVerdict { failure: Some(CkmFailure::NotNef { wall, class, value }), checked: 0 });
    }
    if let Some((ray, coeff)) = r.n.coeffs.iter().enumerate().find(|(_, c)| c.is_negative()) {
        return Ok(CkmVerdict { failure: Some(CkmFailure::NotEffective { ray, coeff: coeff.clone() }), checked: 0 });
    }
    let pulled = pullback(&r.to_source, d)?;
    for m in 1..=m_max {
        let k = Rat::from_integer(BigInt::from(m));
        let a = round_down(&r.p.scale(&k));
        let b = round_down(&pulled.scale(&k));
        let witness = match section_outside(z, &a, &b)? {
            Some(w) => Some(w),
            None => section_outside(z, &b, &a)?,
        };
        if let Some(witness) = witness {
            return Ok(CkmVerdict { failure: Some(CkmFailure::Sections { m, witness }), checked: m });
        }
    }
    Ok(CkmVerdict { failure: None, checked: m_max })
}

/// Extreme rays of a section cone as primitive graded vectors.
pub fn section_cone_rays(c: &SectionCone) -> Result<Vec<IntVector>> {
    let g = c.cone().generators();
    if !g.is_pointed() {
        return Err(Error::NotPointed);
    }
    let idx = extreme_rays(&g.rays)?;
    idx.into_iter().map(|i| primitive_rational(&g.rays[i])).collect()
}
