//! Discrepancies of toric pairs and the terminal / canonical / klt / lc
//! classification.
//!
//! With `B = K + D` (coefficients `d_ρ − 1`) the support function satisfies
//! `ψ_B(v_ρ) = 1 − d_ρ`, and the discrepancy of the divisor of a primitive
//! `v` is `a(v) = ψ_B(v) − 1`.

use std::fmt;

use num::{One, Signed, Zero};

use crate::divisor::{support_function, InvariantDivisor, SupportFunction};
use crate::error::{Error, Result};
use crate::exactlin::{dot_int, lattice_points, primitive, to_rational, Halfspace, HalfspaceSystem, IntVector, Rat};
use crate::fan::Fan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Terminal,
    Canonical,
    Klt,
    Lc,
    NotLc,
    NotQCartier,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Terminal => "terminal",
            Verdict::Canonical => "canonical",
            Verdict::Klt => "klt",
            Verdict::Lc => "lc",
            Verdict::NotLc => "not-lc",
            Verdict::NotQCartier => "not-Q-Cartier",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairClassification {
    pub verdict: Verdict,
    /// Lattice point or ray generator realizing the verdict, if any.
    pub witness: Option<IntVector>,
    /// Cone on which `K + D` has no covector.
    pub witness_cone: Option<Vec<usize>>,
    /// Least discrepancy over exceptional divisors (`D = 0` only; `None` when
    /// there are none, as for rank one).
    pub min_discrepancy: Option<Rat>,
    /// Exceptional primitive points with discrepancy 0 (`D = 0` only).
    pub crepant_points: Vec<IntVector>,
}

fn k_plus_d(fan: &Fan, d: &InvariantDivisor) -> Result<SupportFunction> {
    let b = &InvariantDivisor::canonical(fan) + d;
    support_function(fan, &b)
}

/// `a(v)` for the divisor of the star subdivision at primitive `v ∈ |F|`.
pub fn discrepancy(fan: &Fan, d: &InvariantDivisor, v: &[i64]) -> Result<Rat> {
    if v.len() != fan.rank() {
        return Err(Error::Dimension(format!("vector of length {} in rank {}", v.len(), fan.rank())));
    }
    if v.iter().all(|&x| x == 0) {
        return Err(Error::ZeroVector);
    }
    if primitive(v)? != v {
        return Err(Error::Malformed(format!("{v:?} is not primitive")));
    }
    let psi = k_plus_d(fan, d)?;
    let val = psi.eval(fan, &to_rational(v)).ok_or_else(|| Error::pre(format!("{v:?} is outside the support")))?;
    Ok(val - Rat::one())
}

/// Primitive lattice points `x ≠ 0` of cone `c` with `⟨m, x⟩ ≤ 2`, not
/// ray generators, with their values `⟨m, x⟩`.
fn low_points(fan: &Fan, c: &[usize], m: &[Rat]) -> Result<Vec<(IntVector, Rat)>> {
    let n = fan.rank();
    let h = fan.cone_h(c);
    let mut hs: Vec<Halfspace> = h.inequalities.iter().map(|a| Halfspace { normal: a.clone(), offset: Rat::zero() }).collect();
    for e in &h.equations {
        hs.push(Halfspace { normal: e.clone(), offset: Rat::zero() });
        hs.push(Halfspace { normal: e.iter().map(|x| -x.clone()).collect(), offset: Rat::zero() });
    }
    hs.push(Halfspace { normal: m.iter().map(|x| -x.clone()).collect(), offset: Rat::from_integer(2.into()) });
    let sys = HalfspaceSystem::new(n, hs)?;
    let rays = fan.cone_rays(c);
    Ok(lattice_points(&sys, true)?
        .into_iter()
        .filter(|x| x.iter().any(|&y| y != 0) && !rays.contains(x) && primitive(x).map_or(false, |p| &p == x))
        .map(|x| {
            let v = dot_int(m, &x);
            (x, v)
        })
        .collect())
}

/// Classifies `(X, D)` for a boundary `D` with coefficients in `[0, 1]`
/// (coefficients above 1 give `not-lc` at that ray).
///
/// For `D ≠ 0` the verdict is klt when all coefficients are below 1 and lc
/// otherwise, provided `K + D` is Q-Cartier. For `D = 0` each maximal cone
/// is searched for primitive points with `ψ_K ≤ 2`, which contains every
/// point of negative or zero discrepancy and one of least discrepancy.
pub fn classify_pair(fan: &Fan, d: &InvariantDivisor) -> Result<PairClassification> {
    d.check_len(fan)?;
    if let Some(i) = d.coeffs.iter().position(|c| c.is_negative()) {
        return Err(Error::pre(format!("boundary coefficient {} at ray {i} is negative", d.coeffs[i])));
    }
    let mut out =
        PairClassification { verdict: Verdict::Klt, witness: None, witness_cone: None, min_discrepancy: None, crepant_points: vec![] };
    if let Some(i) = d.coeffs.iter().position(|c| *c > Rat::one()) {
        out.verdict = Verdict::NotLc;
        out.witness = Some(fan.rays()[i].clone());
        return Ok(out);
    }
    let psi = match k_plus_d(fan, d) {
        Ok(p) => p,
        Err(Error::NotQCartier { cone }) => {
            out.verdict = Verdict::NotQCartier;
            out.witness_cone = Some(cone);
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    if !d.is_zero() {
        if let Some(i) = d.coeffs.iter().position(|c| c.is_one()) {
            out.verdict = Verdict::Lc;
            out.witness = Some(fan.rays()[i].clone());
        }
        return Ok(out);
    }
    let mut best: Option<(Rat, IntVector)> = None;
    let mut crepant = std::collections::BTreeSet::new();
    for (c, m) in fan.cones().iter().zip(&psi.covectors) {
        for (x, v) in low_points(fan, c, m)? {
            let a = v - Rat::one();
            if a.is_zero() {
                crepant.insert(x.clone());
            }
            if best.as_ref().map_or(true, |(b, y)| (&a, &x) < (b, y)) {
                best = Some((a, x));
            }
        }
    }
    out.crepant_points = crepant.into_iter().collect();
    out.verdict = match &best {
        Some((a, _)) if a.is_negative() => Verdict::Klt,
        Some((a, _)) if a.is_zero() => Verdict::Canonical,
        _ => Verdict::Terminal,
    };
    if let Some((a, x)) = best {
        out.min_discrepancy = Some(a);
        out.witness = Some(x);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{rat, ratio};

    fn fan(rank: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Fan {
        Fan::new(rank, rays.iter().map(|r| r.to_vec()).collect(), cones.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    fn cone2(a: [i64; 2], b: [i64; 2]) -> Fan {
        fan(2, &[&a, &b], &[&[0, 1]])
    }

    fn half() -> Fan {
        fan(3, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 2]], &[&[0, 1, 2]])
    }

    /// Discrepancy from Cramer's rule in the plane: `ψ_K(v) = ⟨m, v⟩` with
    /// `⟨m, a⟩ = ⟨m, b⟩ = 1`.
    fn cramer(a: [i64; 2], b: [i64; 2], v: [i64; 2]) -> Rat {
        let det = a[0] * b[1] - a[1] * b[0];
        let m = [ratio(b[1] - a[1], det), ratio(a[0] - b[0], det)];
        &m[0] * rat(v[0]) + &m[1] * rat(v[1]) - rat(1)
    }

    #[test]
    fn discrepancy_examples() {
        let z = InvariantDivisor::zero(2);
        assert_eq!(discrepancy(&cone2([1, 0], [1, 2]), &z, &[1, 1]).unwrap(), rat(0));
        assert_eq!(discrepancy(&cone2([1, 0], [-1, 3]), &z, &[0, 1]).unwrap(), ratio(-1, 3));
        assert_eq!(cramer([1, 0], [-1, 3], [0, 1]), ratio(-1, 3));
        assert_eq!(discrepancy(&half(), &InvariantDivisor::zero(3), &[1, 1, 1]).unwrap(), ratio(1, 2));
        assert_eq!(discrepancy(&cone2([1, 0], [1, 2]), &z, &[1, 0]).unwrap(), rat(0));
        assert!(matches!(discrepancy(&cone2([1, 0], [1, 2]), &z, &[-1, 0]), Err(Error::Precondition(_))));
        assert!(matches!(discrepancy(&cone2([1, 0], [1, 2]), &z, &[2, 2]), Err(Error::Malformed(_))));
    }

    #[test]
    fn classification_table() {
        let smooth = cone2([1, 0], [0, 1]);
        let c = classify_pair(&smooth, &InvariantDivisor::zero(2)).unwrap();
        assert_eq!(c.verdict, Verdict::Terminal);
        assert_eq!(c.min_discrepancy, Some(rat(1)));

        let a1 = classify_pair(&cone2([1, 0], [1, 2]), &InvariantDivisor::zero(2)).unwrap();
        assert_eq!(a1.verdict, Verdict::Canonical);
        assert_eq!(a1.crepant_points, vec![vec![1, 1]]);

        let a2 = classify_pair(&cone2([1, 0], [1, 3]), &InvariantDivisor::zero(2)).unwrap();
        assert_eq!(a2.verdict, Verdict::Canonical);
        assert_eq!(a2.crepant_points, vec![vec![1, 1], vec![1, 2]]);

        let third = classify_pair(&cone2([1, 0], [-1, 3]), &InvariantDivisor::zero(2)).unwrap();
        assert_eq!(third.verdict, Verdict::Klt);
        assert_eq!(third.min_discrepancy, Some(ratio(-1, 3)));
        assert_eq!(third.witness, Some(vec![0, 1]));

        let h = classify_pair(&half(), &InvariantDivisor::zero(3)).unwrap();
        assert_eq!(h.verdict, Verdict::Terminal);
        assert_eq!(h.min_discrepancy, Some(ratio(1, 2)));
        assert_eq!(h.witness, Some(vec![1, 1, 1]));
    }

    #[test]
    fn boundaries() {
        let smooth = cone2([1, 0], [0, 1]);
        let half_d = InvariantDivisor::new(vec![ratio(1, 2), rat(0)]);
        assert_eq!(classify_pair(&smooth, &half_d).unwrap().verdict, Verdict::Klt);
        let one = InvariantDivisor::from_ints(&[1, 0]);
        assert_eq!(classify_pair(&smooth, &one).unwrap().verdict, Verdict::Lc);
        let two = InvariantDivisor::from_ints(&[2, 0]);
        assert_eq!(classify_pair(&smooth, &two).unwrap().verdict, Verdict::NotLc);
        let q = fan(3, &[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]], &[&[0, 1, 2, 3]]);
        let c = classify_pair(&q, &InvariantDivisor::new(vec![ratio(1, 2), rat(0), rat(0), rat(0)])).unwrap();
        assert_eq!(c.verdict, Verdict::NotQCartier);
        assert_eq!(c.witness_cone, Some(vec![0, 1, 2, 3]));
        // the quadric cone itself is Gorenstein, with a crepant small resolution
        assert_eq!(classify_pair(&q, &InvariantDivisor::zero(4)).unwrap().verdict, Verdict::Terminal);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn terminal_matches_box_search(p in 1i64..6, q in -5i64..6) {
                prop_assume!(num::Integer::gcd(&p, &q) == 1);
                let f = cone2([1, 0], [q, p]);
                let c = classify_pair(&f, &InvariantDivisor::zero(2)).unwrap();
                // oracle: scan a box for non-ray primitive points of discrepancy ≤ 0
                let mut bad = false;
                for x in -12i64..=12 {
                    for y in 0i64..=12 {
                        let v = [x, y];
                        if v == [1, 0] || v == [q, p] || num::Integer::gcd(&x, &y) != 1 {
                            continue;
                        }
                        let h = f.cone_h(&[0, 1]);
                        if !h.contains(&to_rational(&v)) {
                            continue;
                        }
                        if cramer([1, 0], [q, p], v) <= rat(0) {
                            bad = true;
                        }
                    }
                }
                prop_assert_eq!(c.verdict == Verdict::Terminal, !bad);
            }

            #[test]
            fn simplicial_boundaries_are_klt(c0 in 0i64..6, c1 in 0i64..6, c2 in 0i64..6) {
                let f = fan(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[0, 2]]);
                let d = InvariantDivisor::new(vec![ratio(c0, 6), ratio(c1, 6), ratio(c2, 6)]);
                let v = classify_pair(&f, &d).unwrap().verdict;
                prop_assert!(v <= Verdict::Klt);
            }

            #[test]
            fn discrepancy_is_affine_in_d(c in -4i64..5, x in 1i64..4, y in 1i64..4) {
                prop_assume!(num::Integer::gcd(&x, &y) == 1);
                let f = cone2([1, 0], [0, 1]);
                let v = [x, y];
                let a0 = discrepancy(&f, &InvariantDivisor::zero(2), &v).unwrap();
                let a1 = discrepancy(&f, &InvariantDivisor::from_ints(&[c, 0]), &v).unwrap();
                // ψ shifts by −c·x
                prop_assert_eq!(a1, a0 - rat(c * x));
            }
        }
    }
}
