//! Extremal contractions, flips, the MMP loop and the negativity check.

mod contraction;
mod flip;

use std::collections::HashSet;

use num::Signed;

pub use contraction::{contract, contract_face, ContractionKind, ContractionResult};
pub use flip::{flip, verify_negativity, FlipResult, Negativity, Side};

use crate::curves::{ne_cone, nefness, pairing, CurveClass};
use crate::divisor::{pushforward, InvariantDivisor};
use crate::error::{Error, Result};
use crate::exactlin::{IntVector, Rat};
use crate::fan::{check_morphism, Fan, FanMap};

const MAX_STEPS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    /// The divisor is nef over the base.
    Minimal,
    /// The last step is a Fano contraction on which the divisor is negative.
    FiberType,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipCertificate {
    pub new_walls: Vec<(CurveClass, Rat)>,
    /// `E = μ*D − ν*D⁺` on the common refinement.
    pub negativity: InvariantDivisor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MmpStep {
    pub class: CurveClass,
    pub kind: ContractionKind,
    /// `D · R`.
    pub value: Rat,
    pub rho_before: usize,
    /// `None` after a Fano step.
    pub rho_after: Option<usize>,
    pub removed_ray: Option<IntVector>,
    pub flip: Option<FlipCertificate>,
    /// Fan after the step (the base of the fibration after a Fano step).
    pub fan: Fan,
    /// Divisor after the step; `None` after a Fano step.
    pub divisor: Option<InvariantDivisor>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MmpTrace {
    pub steps: Vec<MmpStep>,
    pub outcome: Outcome,
    /// Last model over the base: the nef model, or the source of the Fano
    /// contraction.
    pub model: FanMap,
    pub divisor: InvariantDivisor,
}

impl MmpTrace {
    pub fn kinds(&self) -> Vec<ContractionKind> {
        self.steps.iter().map(|s| s.kind).collect()
    }
}

fn check_mmp_input(m: &FanMap, d: &InvariantDivisor) -> Result<()> {
    d.check_len(&m.source)?;
    if !m.source.is_simplicial() {
        return Err(Error::pre("source fan is not simplicial; Q-factorialize first"));
    }
    if !m.source.has_convex_full_support() {
        return Err(Error::pre("source support is not convex and full-dimensional"));
    }
    let f = check_morphism(m);
    if !f.toric || !f.proper || f.projective != Some(true) {
        return Err(Error::pre("map is not a proper projective toric morphism"));
    }
    Ok(())
}

/// Candidate contraction for the next step: among the `d`-negative extremal
/// rays, divisorial before flipping before Fano, then the smallest class.
fn choose(m: &FanMap, d: &InvariantDivisor, rays: &[CurveClass]) -> Result<(CurveClass, Rat, ContractionResult)> {
    let mut best: Option<(CurveClass, Rat, ContractionResult)> = None;
    for r in rays {
        let v = pairing(r, d);
        if !v.is_negative() {
            continue;
        }
        let c = contract(m, std::slice::from_ref(r))?;
        let better = match &best {
            None => true,
            Some((br, _, bc)) => (c.kind, r) < (bc.kind, br),
        };
        if better {
            best = Some((r.clone(), v, c));
        }
    }
    best.ok_or_else(|| Error::breach("divisor is not nef but no extremal ray is negative"))
}

/// Runs the MMP for `d` over the base of `m`.
pub fn run_mmp(m: &FanMap, d: &InvariantDivisor) -> Result<MmpTrace> {
    check_mmp_input(m, d)?;
    let mut m = m.clone();
    let mut d = d.clone();
    let mut steps = Vec::new();
    let mut seen: HashSet<Fan> = HashSet::new();
    seen.insert(m.source.clone());
    for _ in 0..MAX_STEPS {
        if nefness(&d, &m, false)?.nef {
            return Ok(MmpTrace { steps, outcome: Outcome::Minimal, model: m, divisor: d });
        }
        let ne = ne_cone(&m)?;
        let (class, value, c) = choose(&m, &d, &ne.extremal_rays)?;
        let rho_before = ne.rho;
        match c.kind {
            ContractionKind::Fano => {
                steps.push(MmpStep {
                    class,
                    kind: c.kind,
                    value,
                    rho_before,
                    rho_after: None,
                    removed_ray: None,
                    flip: None,
                    fan: c.target().clone(),
                    divisor: None,
                });
                return Ok(MmpTrace { steps, outcome: Outcome::FiberType, model: m, divisor: d });
            }
            ContractionKind::Divisorial => {
                if c.removed_rays.len() != 1 {
                    return Err(Error::breach(format!("extremal divisorial contraction removed {:?}", c.removed_rays)));
                }
                let removed = m.source.rays()[c.removed_rays[0]].clone();
                let next_d = pushforward(&c.map, &d)?;
                let next = c.to_base.clone();
                if !next.source.is_simplicial() {
                    return Err(Error::breach("divisorial contraction of an extremal ray is not simplicial"));
                }
                let rho_after = ne_cone(&next).map_err(|e| Error::breach(format!("contracted model: {e}")))?.rho;
                if rho_after + 1 != rho_before {
                    return Err(Error::breach(format!("rho went from {rho_before} to {rho_after}")));
                }
                steps.push(MmpStep {
                    class,
                    kind: c.kind,
                    value,
                    rho_before,
                    rho_after: Some(rho_after),
                    removed_ray: Some(removed),
                    flip: None,
                    fan: next.source.clone(),
                    divisor: Some(next_d.clone()),
                });
                m = next;
                d = next_d;
            }
            ContractionKind::Flipping => {
                let fr = flip(&m, std::slice::from_ref(&class), &d)?;
                if fr.fan().rays() != m.source.rays() {
                    return Err(Error::breach("flip is not small"));
                }
                let neg = verify_negativity(Side { map: &c.map, divisor: &d }, Side { map: &fr.to_w, divisor: &fr.divisor })
                    .map_err(|e| match e {
                        Error::Precondition(s) => Error::breach(format!("flip sides fail the negativity hypotheses: {s}")),
                        e => e,
                    })?;
                let next = FanMap::new(m.matrix.clone(), fr.fan().clone(), m.target.clone())?;
                let rho_after = ne_cone(&next).map_err(|e| Error::breach(format!("flipped model: {e}")))?.rho;
                if rho_after != rho_before {
                    return Err(Error::breach(format!("flip changed rho from {rho_before} to {rho_after}")));
                }
                if !seen.insert(next.source.clone()) {
                    return Err(Error::breach("MMP revisited a fan"));
                }
                steps.push(MmpStep {
                    class,
                    kind: c.kind,
                    value,
                    rho_before,
                    rho_after: Some(rho_after),
                    removed_ray: None,
                    flip: Some(FlipCertificate { new_walls: fr.new_walls.clone(), negativity: neg.e }),
                    fan: next.source.clone(),
                    divisor: Some(fr.divisor.clone()),
                });
                m = next;
                d = fr.divisor;
            }
        }
    }
    Err(Error::breach(format!("MMP did not stop after {MAX_STEPS} steps")))
}
