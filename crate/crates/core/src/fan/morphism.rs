use std::collections::{BTreeMap, BTreeSet};

use num::Zero;

use super::Fan;
use crate::error::{Error, Result};
use crate::exactlin::{dot, dot_i64, normalize_direction, rank_of, to_rational, ConeH, IntVector, Rat, RationalVector};

/// A toric morphism given by an integer matrix (`target.rank` rows,
/// `source.rank` columns) between two fans.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanMap {
    pub matrix: Vec<IntVector>,
    pub source: Fan,
    pub target: Fan,
}

impl FanMap {
    pub fn new(matrix: Vec<IntVector>, source: Fan, target: Fan) -> Result<FanMap> {
        if matrix.len() != target.rank() || matrix.iter().any(|r| r.len() != source.rank()) {
            return Err(Error::Dimension(format!(
                "matrix must be {}x{} to map rank {} to rank {}",
                target.rank(),
                source.rank(),
                source.rank(),
                target.rank()
            )));
        }
        Ok(FanMap { matrix, source, target })
    }

    pub fn identity(source: Fan, target: Fan) -> Result<FanMap> {
        let n = source.rank();
        let matrix = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        FanMap::new(matrix, source, target)
    }

    /// Map of `source` to a point.
    pub fn to_point(source: Fan) -> FanMap {
        FanMap { matrix: vec![], source, target: Fan::point() }
    }

    pub fn apply(&self, v: &[i64]) -> IntVector {
        self.matrix.iter().map(|row| dot_i64(row, v)).collect()
    }

    pub fn apply_rational(&self, v: &[Rat]) -> RationalVector {
        self.matrix.iter().map(|row| dot(&to_rational(row), v)).collect()
    }

    /// First target cone containing the image of source cone `c`.
    pub fn image_cone(&self, c: usize) -> Option<usize> {
        let images: Vec<RationalVector> =
            self.source.cones()[c].iter().map(|&i| to_rational(&self.apply(&self.source.rays()[i]))).collect();
        self.target.cones().iter().position(|t| {
            let h = self.target.cone_h(t);
            images.iter().all(|x| h.contains(x))
        })
    }

    /// `{x : A x ∈ τ}` for target cone `t`.
    pub fn preimage(&self, t: usize) -> ConeH {
        let h = self.target.cone_h(&self.target.cones()[t]);
        let n = self.source.rank();
        let pull = |normal: &RationalVector| -> RationalVector {
            (0..n)
                .map(|j| {
                    normal
                        .iter()
                        .zip(&self.matrix)
                        .fold(Rat::zero(), |acc, (c, row)| acc + c * Rat::from_integer(row[j].into()))
                })
                .collect()
        };
        ConeH::from_inequalities(
            n,
            h.equations.iter().map(pull).collect(),
            h.inequalities.iter().map(pull).collect(),
        )
    }

    pub fn is_identity_matrix(&self) -> bool {
        self.source.rank() == self.target.rank()
            && self.matrix.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == i64::from(i == j)))
    }
}

/// Whether the pieces (cones inside `region` with pairwise intersections
/// that are common faces) cover `region`. Every facet of a piece must lie
/// on the boundary of `region` or be shared with exactly one other piece.
pub fn covers(region: &ConeH, pieces: &[ConeH]) -> bool {
    let d = region.dim();
    let mut facets: BTreeMap<Vec<RationalVector>, usize> = BTreeMap::new();
    let mut any = false;
    for p in pieces {
        let g = p.generators();
        if g.dim(region.ambient) != d {
            continue;
        }
        any = true;
        let mut own = BTreeSet::new();
        for n in &p.inequalities {
            let mut key: Vec<RationalVector> =
                g.rays.iter().filter(|r| dot(n, r).is_zero()).map(|r| normalize_direction(r)).collect();
            if d == 0 || rank_of(&key, region.ambient) + 1 != d {
                continue;
            }
            key.sort();
            own.insert(key);
        }
        for key in own {
            *facets.entry(key).or_default() += 1;
        }
    }
    if !any {
        return d == 0;
    }
    facets.iter().all(|(rays, &count)| match count {
        1 => region.inequalities.iter().any(|h| rays.iter().all(|r| dot(h, r).is_zero())),
        2 => true,
        _ => false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MorphismFlags {
    pub toric: bool,
    pub proper: bool,
    /// `None` when the source is outside the scope of the wall-class test
    /// (not simplicial, or support not convex and full-dimensional).
    pub projective: Option<bool>,
}

pub fn check_morphism(m: &FanMap) -> MorphismFlags {
    let toric = (0..m.source.cones().len()).all(|c| m.image_cone(c).is_some());
    let proper = toric && {
        let hs: Vec<ConeH> = m.source.cones().iter().map(|c| m.source.cone_h(c)).collect();
        (0..m.target.cones().len()).all(|t| {
            let region = m.preimage(t);
            let pieces: Vec<ConeH> = hs.iter().map(|h| region.intersect(h)).collect();
            covers(&region, &pieces)
        })
    };
    let projective = if toric && proper && m.source.is_simplicial() && m.source.has_convex_full_support() {
        crate::curves::ample_certificate(m).ok().map(|c| c.is_some())
    } else {
        None
    };
    MorphismFlags { toric, proper, projective }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fan(rank: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Fan {
        Fan::new(rank, rays.iter().map(|r| r.to_vec()).collect(), cones.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    fn orthant() -> Fan {
        fan(2, &[&[1, 0], &[0, 1]], &[&[0, 1]])
    }

    #[test]
    fn blowup_is_proper_and_projective() {
        let b = fan(2, &[&[1, 0], &[0, 1], &[1, 1]], &[&[0, 2], &[2, 1]]);
        let m = FanMap::identity(b, orthant()).unwrap();
        assert_eq!(check_morphism(&m), MorphismFlags { toric: true, proper: true, projective: Some(true) });
    }

    #[test]
    fn missing_cone_is_not_proper() {
        let part = fan(2, &[&[1, 0], &[1, 1]], &[&[0, 1]]);
        let m = FanMap::identity(part, orthant()).unwrap();
        let f = check_morphism(&m);
        assert!(f.toric);
        assert!(!f.proper);
        assert_eq!(f.projective, None);
    }

    #[test]
    fn complete_fans_over_a_point() {
        let p2 = fan(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[0, 2]]);
        assert_eq!(
            check_morphism(&FanMap::to_point(p2)),
            MorphismFlags { toric: true, proper: true, projective: Some(true) }
        );
        let orth = FanMap::to_point(orthant());
        assert!(!check_morphism(&orth).proper);
    }

    #[test]
    fn projection_to_the_line() {
        let x = fan(2, &[&[0, 1], &[0, -1], &[1, 0]], &[&[2, 0], &[2, 1]]);
        let y = fan(1, &[&[1]], &[&[0]]);
        let m = FanMap::new(vec![vec![1, 0]], x, y).unwrap();
        assert_eq!(check_morphism(&m), MorphismFlags { toric: true, proper: true, projective: Some(true) });
        let bad = FanMap::new(vec![vec![0, 1]], m.source.clone(), m.target.clone()).unwrap();
        assert!(!check_morphism(&bad).toric);
    }

    #[test]
    fn covers_detects_gaps() {
        let region = ConeH::from_generators(2, &[to_rational(&[1, 0]), to_rational(&[0, 1])]);
        let a = ConeH::from_generators(2, &[to_rational(&[1, 0]), to_rational(&[1, 1])]);
        let b = ConeH::from_generators(2, &[to_rational(&[1, 1]), to_rational(&[0, 1])]);
        let c = ConeH::from_generators(2, &[to_rational(&[1, 2]), to_rational(&[0, 1])]);
        assert!(covers(&region, &[a.clone(), b]));
        assert!(!covers(&region, &[a.clone()]));
        assert!(!covers(&region, &[a, c]));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        /// Grid sampling oracle for `f⁻¹|Δ_Y| ⊆ |Δ_X|`.
        fn sampled_proper(m: &FanMap) -> bool {
            let src: Vec<ConeH> = m.source.cones().iter().map(|c| m.source.cone_h(c)).collect();
            let tgt: Vec<ConeH> = m.target.cones().iter().map(|c| m.target.cone_h(c)).collect();
            for x in -6i64..=6 {
                for y in -6i64..=6 {
                    let p = to_rational(&[x, y]);
                    let img = m.apply_rational(&p);
                    if tgt.iter().any(|h| h.contains(&img)) && !src.iter().any(|h| h.contains(&p)) {
                        return false;
                    }
                }
            }
            true
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]
            #[test]
            fn properness_matches_sampling(keep in proptest::collection::vec(any::<bool>(), 4)) {
                // sub-fans of the plane fan with rays at the four axes, over a point or the orthant
                let rays: Vec<IntVector> = vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]];
                let all = [[0usize, 1], [1, 2], [2, 3], [3, 0]];
                let cones: Vec<Vec<usize>> = all.iter().zip(&keep).filter(|(_, k)| **k).map(|(c, _)| c.to_vec()).collect();
                prop_assume!(!cones.is_empty());
                let used: std::collections::BTreeSet<usize> = cones.iter().flatten().copied().collect();
                let idx: Vec<usize> = used.iter().copied().collect();
                let sub_rays: Vec<IntVector> = idx.iter().map(|&i| rays[i].clone()).collect();
                let sub_cones: Vec<Vec<usize>> =
                    cones.iter().map(|c| c.iter().map(|i| idx.iter().position(|j| j == i).unwrap()).collect()).collect();
                let x = Fan::new(2, sub_rays, sub_cones).unwrap();
                for m in [FanMap::to_point(x.clone()), FanMap::identity(x.clone(), orthant()).unwrap()] {
                    let flags = check_morphism(&m);
                    if flags.toric {
                        prop_assert_eq!(flags.proper, sampled_proper(&m));
                    }
                }
            }
        }
    }
}
