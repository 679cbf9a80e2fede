//! Minimal, canonical, dlt and log-canonical models of a non-degenerate
//! hypersurface germ from the exponents of its equation.
//!
//! Non-degeneracy is assumed, not checked. The strict transform `X′` enters
//! only through its numerical class: `K_V + X′ ≡ Σ (−1 − ord(v_ρ)) D_ρ`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num::Zero;

use crate::curves::{contracted_walls, nefness, pairing, CurveClass};
use crate::divisor::InvariantDivisor;
use crate::error::{Error, Result};
use crate::exactlin::{
    dot_i64, primitive_rational, to_rational, ConeH, Halfspace, HalfspaceSystem, IntVector, Rat, RationalVector,
};
use crate::fan::{qfactorialize, resolve, Fan, FanMap};
use crate::mmp::{contract_face, run_mmp, MmpTrace, Outcome};

/// Support of `f`, a nonempty set of exponent vectors in `ℤ^{n+1}_{≥0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentSet {
    dim: usize,
    exponents: Vec<IntVector>,
}

impl ExponentSet {
    pub fn new(exponents: Vec<IntVector>) -> Result<ExponentSet> {
        let Some(first) = exponents.first() else {
            return Err(Error::Malformed("empty exponent set".into()));
        };
        let dim = first.len();
        if dim == 0 {
            return Err(Error::Malformed("exponents of length 0".into()));
        }
        for e in &exponents {
            if e.len() != dim {
                return Err(Error::Dimension(format!("exponent {e:?} has length {}, expected {dim}", e.len())));
            }
            if e.iter().any(|&x| x < 0) {
                return Err(Error::Malformed(format!("exponent {e:?} has a negative entry")));
            }
        }
        let exponents: Vec<IntVector> = exponents.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        Ok(ExponentSet { dim, exponents })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn exponents(&self) -> &[IntVector] {
        &self.exponents
    }

    /// `ord(v) = min ⟨m, v⟩`.
    pub fn ord(&self, v: &[i64]) -> i64 {
        self.exponents.iter().map(|m| dot_i64(m, v)).min().unwrap()
    }
}

/// `Γ₊ = conv(E) + ℝ^{n+1}_{≥0}` as half-spaces, from the cone over it.
pub fn newton_polytope(e: &ExponentSet) -> Result<HalfspaceSystem> {
    let n = e.dim();
    let mut gens: Vec<RationalVector> = e
        .exponents()
        .iter()
        .map(|m| {
            let mut g = to_rational(m);
            g.push(Rat::from_integer(1.into()));
            g
        })
        .collect();
    for i in 0..n {
        let mut g = vec![Rat::zero(); n + 1];
        g[i] = Rat::from_integer(1.into());
        gens.push(g);
    }
    let cone = ConeH::from_generators(n + 1, &gens);
    let hs = cone
        .inequalities
        .iter()
        .filter(|h| h[..n].iter().any(|x| !x.is_zero()))
        .map(|h| Halfspace { normal: h[..n].to_vec(), offset: h[n].clone() })
        .collect();
    HalfspaceSystem::new(n, hs)
}

/// Normal fan of `Γ₊` on the positive orthant: one cone
/// `{v ≥ 0 : ⟨m − m′, v⟩ ≤ 0 ∀m′}` per vertex `m`. Rays are the standard
/// basis followed by the remaining rays in sorted order.
pub fn normal_fan(e: &ExponentSet) -> Result<Fan> {
    let n = e.dim();
    let mut cones: Vec<Vec<IntVector>> = Vec::new();
    for m in e.exponents() {
        let mut ineq: Vec<RationalVector> = (0..n)
            .map(|i| {
                let mut g = vec![Rat::zero(); n];
                g[i] = Rat::from_integer(1.into());
                g
            })
            .collect();
        for other in e.exponents() {
            if other != m {
                ineq.push(other.iter().zip(m).map(|(a, b)| Rat::from_integer((a - b).into())).collect());
            }
        }
        let h = ConeH::from_inequalities(n, vec![], ineq);
        if h.dim() != n {
            continue;
        }
        let g = h.generators();
        let mut rays: Vec<IntVector> = g.rays.iter().map(|r| primitive_rational(r)).collect::<Result<_>>()?;
        rays.sort();
        if !cones.contains(&rays) {
            cones.push(rays);
        }
    }
    let basis: Vec<IntVector> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let others: BTreeSet<IntVector> = cones.iter().flatten().filter(|r| !basis.contains(r)).cloned().collect();
    let rays: Vec<IntVector> = basis.into_iter().chain(others).collect();
    let idx = cones
        .iter()
        .map(|c| {
            let mut ix: Vec<usize> = c.iter().map(|r| rays.iter().position(|x| x == r).unwrap()).collect();
            ix.sort();
            ix
        })
        .collect();
    Fan::new(n, rays, idx)
}

pub fn orthant(n: usize) -> Fan {
    let rays = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    Fan::new(n, rays, vec![(0..n).collect()]).expect("orthant is a fan")
}

/// Smooth projective refinement `V → 𝔸^{n+1}` on whose cones `ord` is
/// linear: the normal fan of `Γ₊`, triangulated without new rays, then
/// resolved.
pub fn ambient_resolution(e: &ExponentSet) -> Result<FanMap> {
    let nf = normal_fan(e)?;
    let (q, _) = qfactorialize(&nf)?;
    let (v, _) = resolve(&q)?;
    for c in v.cones() {
        if !ord_is_linear(e, &v, c) {
            return Err(Error::breach(format!("ord is not linear on cone {c:?}")));
        }
    }
    FanMap::identity(v, orthant(e.dim()))
}

/// Some exponent attains the minimum at every ray of the cone, hence
/// on the whole cone.
fn ord_is_linear(e: &ExponentSet, fan: &Fan, c: &[usize]) -> bool {
    e.exponents().iter().any(|m| c.iter().all(|&i| dot_i64(m, &fan.rays()[i]) == e.ord(&fan.rays()[i])))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelType {
    Minimal,
    Canonical,
    Dlt,
    LogCanonical,
}

impl ModelType {
    pub fn name(self) -> &'static str {
        match self {
            ModelType::Minimal => "minimal",
            ModelType::Canonical => "canonical",
            ModelType::Dlt => "dlt",
            ModelType::LogCanonical => "lc",
        }
    }

    fn with_boundary(self) -> bool {
        matches!(self, ModelType::Dlt | ModelType::LogCanonical)
    }
}

impl fmt::Display for ModelType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelType {
    type Err = Error;

    fn from_str(s: &str) -> Result<ModelType> {
        match s {
            "minimal" => Ok(ModelType::Minimal),
            "canonical" => Ok(ModelType::Canonical),
            "dlt" => Ok(ModelType::Dlt),
            "lc" | "log-canonical" => Ok(ModelType::LogCanonical),
            _ => Err(Error::Malformed(format!("unknown model type {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelReport {
    pub model_type: ModelType,
    /// `V → 𝔸^{n+1}`.
    pub ambient: FanMap,
    /// `K + X′` or `K + X′ + E` on `V`.
    pub divisor: InvariantDivisor,
    /// Classes and values of the divisor on the contracted walls of `V`.
    pub wall_values: Vec<(CurveClass, Rat)>,
    pub trace: MmpTrace,
    /// Nef model over the orthant and the transported divisor.
    pub model: FanMap,
    pub model_divisor: InvariantDivisor,
    /// Face contraction of the nef divisor (canonical and lc types).
    pub contracted: Option<Fan>,
    /// `(v, Σv_i − 1 − ord(v))` for each exceptional ray of `V`: the
    /// discrepancy of its divisor over the pair `(𝔸^{n+1}, X)`.
    pub discrepancies: Vec<(IntVector, i64)>,
}

fn is_basis(v: &[i64]) -> bool {
    v.iter().filter(|&&x| x == 1).count() == 1 && v.iter().all(|&x| x == 0 || x == 1)
}

pub fn model(e: &ExponentSet, ty: ModelType) -> Result<ModelReport> {
    let ambient = ambient_resolution(e)?;
    let v = &ambient.source;
    let coeffs: Vec<Rat> = v
        .rays()
        .iter()
        .map(|r| {
            let bump = i64::from(ty.with_boundary() && !is_basis(r));
            Rat::from_integer((-1 - e.ord(r) + bump).into())
        })
        .collect();
    let divisor = InvariantDivisor::new(coeffs);
    let wall_values = contracted_walls(&ambient)?
        .into_iter()
        .map(|(_, c)| {
            let val = pairing(&c, &divisor);
            (c, val)
        })
        .collect();
    let trace = run_mmp(&ambient, &divisor)?;
    if trace.outcome != Outcome::Minimal {
        return Err(Error::breach("MMP over the orthant ended with a Fano contraction"));
    }
    if !nefness(&trace.divisor, &trace.model, false)?.nef {
        return Err(Error::breach("final divisor is not nef"));
    }
    let contracted = match ty {
        ModelType::Canonical | ModelType::LogCanonical => {
            Some(contract_face(&trace.model, &trace.divisor)?.target().clone())
        }
        _ => None,
    };
    let discrepancies = v
        .rays()
        .iter()
        .filter(|r| !is_basis(r))
        .map(|r| (r.clone(), r.iter().sum::<i64>() - 1 - e.ord(r)))
        .collect();
    Ok(ModelReport {
        model_type: ty,
        model: trace.model.clone(),
        model_divisor: trace.divisor.clone(),
        ambient,
        divisor,
        wall_values,
        trace,
        contracted,
        discrepancies,
    })
}
