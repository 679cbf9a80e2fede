//! Torus-invariant Q-divisors, support functions and section polytopes.
//!
//! Sign convention: the support function of `D = Σ d_ρ D_ρ` takes the value
//! `ψ_D(v_ρ) = −d_ρ` on ray generators, so on a maximal cone σ it is the
//! covector `m_σ` with `⟨m_σ, v_ρ⟩ = −d_ρ`. Sections of `D` are the lattice
//! points of `P_D = {u : ⟨u, v_ρ⟩ + d_ρ ≥ 0}`.

use std::fmt;
use std::ops::{Add, Sub};

use num::{BigInt, Integer, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{
    dot, dot_int, lattice_points, lattice_points_in_box, rat, smith_normal_form, to_rational, Halfspace,
    HalfspaceSystem, IntVector, Rat, RationalVector,
};
use crate::fan::{Fan, FanMap};

/// `Σ d_ρ D_ρ`, coefficients listed in the order of the fan's rays.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InvariantDivisor {
    pub coeffs: Vec<Rat>,
}

impl InvariantDivisor {
    pub fn new(coeffs: Vec<Rat>) -> Self {
        InvariantDivisor { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(to_rational(coeffs))
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![Rat::zero(); n])
    }

    /// `D_i` among `n` rays.
    pub fn prime(n: usize, i: usize) -> Self {
        let mut d = Self::zero(n);
        d.coeffs[i] = Rat::one();
        d
    }

    /// `K = −Σ D_ρ`.
    pub fn canonical(fan: &Fan) -> Self {
        Self::new(vec![rat(-1); fan.rays().len()])
    }

    /// `div(χ^u)`, with coefficients `⟨u, v_ρ⟩`.
    pub fn principal(fan: &Fan, u: &[Rat]) -> Self {
        Self::new(fan.rays().iter().map(|r| dot_int(u, r)).collect())
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.iter().all(|x| !x.is_negative())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|x| x.is_integer())
    }

    pub(crate) fn check_len(&self, fan: &Fan) -> Result<()> {
        if self.len() != fan.rays().len() {
            return Err(Error::Dimension(format!(
                "divisor has {} coefficients but the fan has {} rays",
                self.len(),
                fan.rays().len()
            )));
        }
        Ok(())
    }
}

impl Add for &InvariantDivisor {
    type Output = InvariantDivisor;
    fn add(self, o: &InvariantDivisor) -> InvariantDivisor {
        InvariantDivisor::new(self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &InvariantDivisor {
    type Output = InvariantDivisor;
    fn sub(self, o: &InvariantDivisor) -> InvariantDivisor {
        InvariantDivisor::new(self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for InvariantDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub fn round_down(d: &InvariantDivisor) -> InvariantDivisor {
    InvariantDivisor::new(d.coeffs.iter().map(|x| x.floor()).collect())
}

/// One covector per maximal cone (same order as the fan's cones).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportFunction {
    pub covectors: Vec<RationalVector>,
    /// Smallest `ℓ > 0` with `ℓD` Cartier.
    pub cartier_index: BigInt,
}

impl SupportFunction {
    /// `ψ_D(v)`, or `None` outside the support.
    pub fn eval(&self, fan: &Fan, v: &[Rat]) -> Option<Rat> {
        fan.locate(v).map(|c| dot(&self.covectors[c], v))
    }

    pub fn is_cartier(&self) -> bool {
        self.cartier_index.is_one()
    }
}

/// Solves `⟨m, v_ρ⟩ = −d_ρ` over the rays of one cone. Among all rational
/// solutions the one from the Smith form with free coordinates zero is
/// returned together with the least `ℓ` making `ℓm` integral.
fn cone_covector(rays: &[IntVector], rank: usize, rhs: &[Rat]) -> Option<(RationalVector, BigInt)> {
    let snf = smith_normal_form(rays, rank);
    let ub: Vec<Rat> = snf
        .left
        .iter()
        .map(|row| row.iter().zip(rhs).fold(Rat::zero(), |acc, (u, b)| acc + Rat::from_integer(u.clone()) * b))
        .collect();
    if ub[snf.rank..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut z = vec![Rat::zero(); rank];
    for i in 0..snf.rank {
        z[i] = &ub[i] / Rat::from_integer(snf.diagonal[i].clone());
    }
    let index = z.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let m = snf
        .right
        .iter()
        .map(|row| row.iter().zip(&z).fold(Rat::zero(), |acc, (v, x)| acc + Rat::from_integer(v.clone()) * x))
        .collect();
    Some((m, index))
}

pub fn support_function(fan: &Fan, d: &InvariantDivisor) -> Result<SupportFunction> {
    d.check_len(fan)?;
    let mut covectors = Vec::new();
    let mut index = BigInt::one();
    for c in fan.cones() {
        let rays = fan.cone_rays(c);
        let rhs: Vec<Rat> = c.iter().map(|&i| -d.coeffs[i].clone()).collect();
        let (m, l) = cone_covector(&rays, fan.rank(), &rhs).ok_or(Error::NotQCartier { cone: c.clone() })?;
        index = index.lcm(&l);
        covectors.push(m);
    }
    Ok(SupportFunction { covectors, cartier_index: index })
}

/// `f^*D` for a toric morphism with `D` Q-Cartier on the target: the
/// coefficient at a source ray `v` is `−ψ_D(f(v))`.
pub fn pullback(m: &FanMap, d: &InvariantDivisor) -> Result<InvariantDivisor> {
    let psi = support_function(&m.target, d)?;
    let coeffs = m
        .source
        .rays()
        .iter()
        .map(|r| {
            let img = to_rational(&m.apply(r));
            psi.eval(&m.target, &img)
                .map(|x| -x)
                .ok_or_else(|| Error::pre(format!("image of ray {r:?} leaves the target support")))
        })
        .collect::<Result<_>>()?;
    Ok(InvariantDivisor::new(coeffs))
}

/// `f_*D` for a birational map whose target rays are source rays: keeps the
/// coefficients of the surviving rays.
pub fn pushforward(m: &FanMap, d: &InvariantDivisor) -> Result<InvariantDivisor> {
    d.check_len(&m.source)?;
    if !m.is_identity_matrix() {
        return Err(Error::pre("pushforward needs a birational map with identity matrix"));
    }
    let coeffs = m
        .target
        .rays()
        .iter()
        .map(|r| {
            m.source
                .ray_index(r)
                .map(|i| d.coeffs[i].clone())
                .ok_or_else(|| Error::pre(format!("target ray {r:?} is not a source ray")))
        })
        .collect::<Result<_>>()?;
    Ok(InvariantDivisor::new(coeffs))
}

/// `P_D = {u : ⟨u, v_ρ⟩ + d_ρ ≥ 0}` on the source of a map to an affine base.
pub fn sections_polytope(m: &FanMap, d: &InvariantDivisor) -> Result<HalfspaceSystem> {
    if m.target.cones().len() != 1 {
        return Err(Error::pre("base is not affine"));
    }
    Ok(polytope(&m.source, d)?)
}

pub(crate) fn polytope(fan: &Fan, d: &InvariantDivisor) -> Result<HalfspaceSystem> {
    d.check_len(fan)?;
    HalfspaceSystem::new(
        fan.rank(),
        fan.rays()
            .iter()
            .zip(&d.coeffs)
            .map(|(r, c)| Halfspace { normal: to_rational(r), offset: c.clone() })
            .collect(),
    )
}

/// Lattice points of `P_D`: all of them when `bound` is `None` (the
/// polytope must be bounded), else those with coordinates in `[−b, b]`.
pub fn sections_basis(m: &FanMap, d: &InvariantDivisor, bound: Option<i64>) -> Result<Vec<IntVector>> {
    let sys = sections_polytope(m, d)?;
    match bound {
        None => lattice_points(&sys, true),
        Some(b) => {
            let n = sys.dim();
            lattice_points_in_box(&sys, &vec![-b; n], &vec![b; n])
        }
    }
}

/// For a nef Cartier divisor over an affine base, the covectors `m_σ`
/// returned per maximal cone; each lies in `P_D ∩ M`, so the sections
/// `χ^{m_σ}` generate `O(D)` on every affine chart.
pub fn freeness_witnesses(m: &FanMap, d: &InvariantDivisor) -> Result<Vec<IntVector>> {
    let sys = sections_polytope(m, d)?;
    if m.source.cones().iter().any(|c| m.source.cone_dim(c) != m.source.rank()) {
        return Err(Error::pre("freeness witnesses need full-dimensional maximal cones"));
    }
    let psi = support_function(&m.source, d)?;
    if !psi.is_cartier() {
        return Err(Error::pre("divisor is not Cartier"));
    }
    if !crate::curves::nefness(d, m, false)?.nef {
        return Err(Error::pre("divisor is not nef"));
    }
    psi.covectors
        .iter()
        .map(|c| {
            let u: IntVector = c.iter().map(crate::exactlin::to_i64).collect::<Result<_>>()?;
            if !sys.contains_int(&u) {
                return Err(Error::breach(format!("covector {u:?} of a nef Cartier divisor is not a section")));
            }
            Ok(u)
        })
        .collect()
}
