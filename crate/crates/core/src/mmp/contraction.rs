use std::collections::{BTreeMap, BTreeSet};

use num::{BigInt, Zero};

use crate::curves::{contracted_walls, pairing, CurveClass, Wall};
use crate::divisor::InvariantDivisor;
use crate::error::{Error, Result};
use crate::exactlin::{
    dot, dot_i64, extreme_rays, integer_kernel, primitive, primitive_rational, rank_of_int, restrict, smith_normal_form,
    span_pivots, to_rational, ConeH, IntVector, RationalMatrix, RationalVector,
};
use crate::fan::{check_morphism, Fan, FanMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ContractionKind {
    Divisorial,
    Flipping,
    Fano,
}

impl ContractionKind {
    pub fn name(self) -> &'static str {
        match self {
            ContractionKind::Divisorial => "divisorial",
            ContractionKind::Flipping => "flipping",
            ContractionKind::Fano => "fano",
        }
    }
}

/// Outcome of merging maximal cones across a set of walls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionResult {
    pub kind: ContractionKind,
    /// `X → Z`.
    pub map: FanMap,
    /// `Z → Y`.
    pub to_base: FanMap,
    /// Source rays that are no longer rays of `Z` (divisorial).
    pub removed_rays: Vec<usize>,
    /// Source ray sets of the merged cones (those that absorbed more than
    /// one maximal cone).
    pub merged_cones: Vec<Vec<usize>>,
    /// Rows of `N → N/L` when the merged cones contain the line space `L`
    /// (fano).
    pub quotient: Option<Vec<IntVector>>,
}

impl ContractionResult {
    pub fn target(&self) -> &Fan {
        &self.map.target
    }
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    parent[i] = r;
    r
}

/// Groups of maximal cones connected through `walls`, each listed as the
/// sorted cone indices; ordered by smallest member.
fn merge_groups(fan: &Fan, walls: &[Wall]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..fan.cones().len()).collect();
    for w in walls {
        let (a, b) = (find(&mut parent, w.cones[0]), find(&mut parent, w.cones[1]));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for c in 0..fan.cones().len() {
        let r = find(&mut parent, c);
        groups.entry(r).or_default().push(c);
    }
    groups.into_values().collect()
}

/// Integer `S` with `P S = I` for a surjective `P`.
fn right_inverse(p: &[IntVector], n: usize) -> Result<Vec<IntVector>> {
    let k = p.len();
    let snf = smith_normal_form(p, n);
    if snf.rank != k || snf.diagonal.iter().any(|d| d != &BigInt::from(1)) {
        return Err(Error::breach("quotient map is not surjective"));
    }
    let mut s = vec![vec![0i64; k]; n];
    for i in 0..n {
        for j in 0..k {
            let v: BigInt = (0..k).map(|t| &snf.right[i][t] * &snf.left[t][j]).sum();
            s[i][j] = i64::try_from(v).map_err(|_| Error::breach("quotient section exceeds 64 bits"))?;
        }
    }
    Ok(s)
}

/// Merge the maximal cones of `m.source` across `walls` and build the
/// resulting fan, classified by what the merged cones look like.
pub(crate) fn contract_walls(m: &FanMap, walls: &[Wall]) -> Result<ContractionResult> {
    let x = &m.source;
    let n = x.rank();
    let groups = merge_groups(x, walls);
    let merged: Vec<Vec<usize>> = groups
        .iter()
        .map(|g| g.iter().flat_map(|&c| x.cones()[c].iter().copied()).collect::<BTreeSet<_>>().into_iter().collect())
        .collect();
    let multi: Vec<Vec<usize>> =
        groups.iter().zip(&merged).filter(|(g, _)| g.len() > 1).map(|(_, r)| r.clone()).collect();

    let hs: Vec<ConeH> = merged.iter().map(|r| x.cone_h(r)).collect();
    let lines: Vec<Vec<RationalVector>> = hs.iter().map(|h| h.lineality()).collect();
    if let Some(l) = lines.iter().find(|l| !l.is_empty()) {
        let l_int: Vec<IntVector> = l.iter().map(|v| primitive_rational(v)).collect::<Result<_>>()?;
        for other in &lines {
            let both: Vec<IntVector> = other.iter().map(|v| primitive_rational(v)).collect::<Result<_>>()?;
            let mut joint = l_int.clone();
            joint.extend(both);
            if rank_of_int(&joint, n) != l_int.len() {
                return Err(Error::breach("merged cones have different line spaces"));
            }
        }
        return fano(m, &merged, &multi, &l_int);
    }

    let mut removed = BTreeSet::new();
    for r in &merged {
        let gens: Vec<RationalVector> = r.iter().map(|&i| to_rational(&x.rays()[i])).collect();
        let ext: BTreeSet<usize> = extreme_rays(&gens)?.into_iter().map(|j| r[j]).collect();
        removed.extend(r.iter().copied().filter(|i| !ext.contains(i)));
    }
    for (g, r) in groups.iter().zip(&merged) {
        if g.len() == 1 && r.iter().any(|i| removed.contains(i)) {
            return Err(Error::breach("a removed ray survives in an unmerged cone"));
        }
    }
    let kind = if removed.is_empty() { ContractionKind::Flipping } else { ContractionKind::Divisorial };
    let keep: Vec<usize> = (0..x.rays().len()).filter(|i| !removed.contains(i)).collect();
    let rays: Vec<IntVector> = keep.iter().map(|&i| x.rays()[i].clone()).collect();
    let cones: Vec<Vec<usize>> = merged
        .iter()
        .map(|r| r.iter().filter_map(|i| keep.iter().position(|k| k == i)).collect())
        .collect();
    let z = Fan::new(n, rays, cones)?;
    Ok(ContractionResult {
        kind,
        map: FanMap::identity(x.clone(), z.clone())?,
        to_base: FanMap::new(m.matrix.clone(), z, m.target.clone())?,
        removed_rays: removed.into_iter().collect(),
        merged_cones: multi,
        quotient: None,
    })
}

fn fano(m: &FanMap, merged: &[Vec<usize>], multi: &[Vec<usize>], lines: &[IntVector]) -> Result<ContractionResult> {
    let x = &m.source;
    let n = x.rank();
    let p = integer_kernel(lines, n)?;
    let k = p.len();
    let project = |v: &IntVector| -> IntVector { p.iter().map(|row| dot_i64(row, v)).collect() };
    let z = if k == 0 {
        Fan::point()
    } else {
        let mut rays: Vec<IntVector> = Vec::new();
        let mut cones = Vec::new();
        for r in merged {
            let mut cone = Vec::new();
            for &i in r {
                let img = project(&x.rays()[i]);
                if img.iter().all(|&c| c == 0) {
                    continue;
                }
                let img = primitive(&img)?;
                let pos = rays.iter().position(|y| *y == img).unwrap_or_else(|| {
                    rays.push(img);
                    rays.len() - 1
                });
                cone.push(pos);
            }
            cones.push(cone);
        }
        // the images of merged cones may carry non-extreme rays; keep only the extreme ones
        let cones = cones
            .into_iter()
            .map(|c: Vec<usize>| {
                let gens: Vec<RationalVector> = c.iter().map(|&i| to_rational(&rays[i])).collect();
                extreme_rays(&gens).map(|e| e.into_iter().map(|j| c[j]).collect::<Vec<usize>>())
            })
            .collect::<Result<Vec<_>>>()?;
        let used: BTreeSet<usize> = cones.iter().flatten().copied().collect();
        let keep: Vec<usize> = (0..rays.len()).filter(|i| used.contains(i)).collect();
        let cones = cones.iter().map(|c| c.iter().map(|i| keep.iter().position(|k| k == i).unwrap()).collect()).collect();
        Fan::new(k, keep.iter().map(|&i| rays[i].clone()).collect(), cones)?
    };
    let s = right_inverse(&p, n)?;
    let to_base: Vec<IntVector> =
        m.matrix.iter().map(|row| (0..k).map(|j| (0..n).map(|i| row[i] * s[i][j]).sum()).collect()).collect();
    let map = FanMap::new(p.clone(), x.clone(), z.clone())?;
    Ok(ContractionResult {
        kind: ContractionKind::Fano,
        map,
        to_base: FanMap::new(to_base, z, m.target.clone())?,
        removed_rays: vec![],
        merged_cones: multi.to_vec(),
        quotient: Some(p),
    })
}

fn check_input(m: &FanMap) -> Result<()> {
    let flags = check_morphism(m);
    if !flags.toric || !flags.proper {
        return Err(Error::pre("map is not a proper toric morphism"));
    }
    if flags.projective != Some(true) {
        return Err(Error::pre("map is not projective with simplicial convex source"));
    }
    Ok(())
}

/// Contraction of the extremal face spanned by `face`: every contracted
/// wall whose class lies on that face is merged.
pub fn contract(m: &FanMap, face: &[CurveClass]) -> Result<ContractionResult> {
    check_input(m)?;
    let nrays = m.source.rays().len();
    if face.is_empty() || face.iter().any(|c| c.len() != nrays) {
        return Err(Error::Dimension("face classes must be indexed by the source rays".into()));
    }
    let walls = contracted_walls(m)?;
    let classes: BTreeSet<CurveClass> = walls.iter().map(|(_, c)| c.clone()).collect();
    let gens: Vec<RationalVector> = classes.iter().map(|c| to_rational(c)).collect();
    let span = rank_of_int(&classes.iter().cloned().collect::<Vec<_>>(), nrays);
    let mut all = classes.iter().cloned().collect::<Vec<_>>();
    all.extend(face.iter().cloned());
    if rank_of_int(&all, nrays) != span {
        return Err(Error::pre(format!("classes {face:?} are not all in the Mori cone")));
    }
    let cols = span_pivots(&gens, nrays);
    let local = |c: &CurveClass| restrict(&to_rational(c), &cols);
    let ne = ConeH::from_generators(cols.len(), &gens.iter().map(|g| restrict(g, &cols)).collect::<Vec<_>>());
    let face_r: Vec<RationalVector> = face.iter().map(local).collect();
    if face_r.iter().any(|c| !ne.contains(c)) {
        return Err(Error::pre(format!("classes {face:?} are not all in the Mori cone")));
    }
    let tight: Vec<&RationalVector> =
        ne.inequalities.iter().filter(|h| face_r.iter().all(|c| dot(h, c).is_zero())).collect();
    let on_face = |c: &CurveClass| {
        let c = local(c);
        tight.iter().all(|h| dot(h, &c).is_zero())
    };
    let span_rank = rank_of_int(face, nrays);
    for c in classes.iter().filter(|c| on_face(c)) {
        let mut with = face.to_vec();
        with.push(c.clone());
        if rank_of_int(&with, nrays) != span_rank {
            return Err(Error::pre(format!("classes {face:?} do not span a face of the Mori cone")));
        }
    }
    let chosen: Vec<Wall> = walls.into_iter().filter(|(_, c)| on_face(c)).map(|(w, _)| w).collect();
    contract_walls(m, &chosen)
}

/// The ample model of a nef divisor: cones merged across every contracted
/// wall on which `d` vanishes.
pub fn contract_face(m: &FanMap, d: &InvariantDivisor) -> Result<ContractionResult> {
    check_input(m)?;
    d.check_len(&m.source)?;
    let mut zero = Vec::new();
    for (w, c) in contracted_walls(m)? {
        let v = pairing(&c, d);
        if v < num::BigRational::zero() {
            return Err(Error::pre(format!("divisor is not nef: value {v} on wall {:?}", w.rays)));
        }
        if v.is_zero() {
            zero.push(w);
        }
    }
    let res = contract_walls(m, &zero)?;
    for r in &res.merged_cones {
        let rows: Vec<RationalVector> = r.iter().map(|&i| to_rational(&m.source.rays()[i])).collect();
        let rhs: Vec<num::BigRational> = r.iter().map(|&i| -d.coeffs[i].clone()).collect();
        let a = RationalMatrix::new(rows, m.source.rank())?;
        if a.solve(&rhs).is_none() {
            return Err(Error::breach(format!("divisor does not descend along merged cone {r:?}")));
        }
    }
    Ok(res)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::curves::ne_cone;
    use crate::exactlin::rat;

    fn fan(rank: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Fan {
        Fan::new(rank, rays.iter().map(|r| r.to_vec()).collect(), cones.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    pub(crate) fn quadric_a() -> Fan {
        fan(3, &[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]], &[&[0, 1, 3], &[0, 2, 3]])
    }

    pub(crate) fn quadric_w() -> Fan {
        fan(3, &[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]], &[&[0, 1, 2, 3]])
    }

    #[test]
    fn hirzebruch_exceptional_ray_is_divisorial() {
        let f1 = fan(2, &[&[1, 0], &[0, 1], &[-1, 1], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]]);
        let m = FanMap::to_point(f1);
        let r = contract(&m, &[vec![1, -1, 1, 0]]).unwrap();
        assert_eq!(r.kind, ContractionKind::Divisorial);
        assert_eq!(r.removed_rays, vec![1]);
        assert_eq!(r.target().rays(), &[vec![1, 0], vec![-1, 1], vec![0, -1]]);
        assert_eq!(r.target().cones().len(), 3);
        assert!(r.target().is_simplicial());
        assert_eq!(ne_cone(&r.to_base).unwrap().rho, 1);

        let fiber = contract(&m, &[vec![0, 1, 0, 1]]).unwrap();
        assert_eq!(fiber.kind, ContractionKind::Fano);
        assert_eq!(fiber.target().rank(), 1);
        assert_eq!(fiber.target().cones().len(), 2);

        assert!(matches!(contract(&m, &[vec![1, 0, 1, 1]]), Err(Error::Precondition(_))));
    }

    #[test]
    fn plane_contracts_to_a_point() {
        let p2 = fan(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[0, 2]]);
        let r = contract(&FanMap::to_point(p2), &[vec![1, 1, 1]]).unwrap();
        assert_eq!(r.kind, ContractionKind::Fano);
        assert_eq!(r.target(), &Fan::point());
        assert_eq!(r.quotient, Some(vec![]));
    }

    #[test]
    fn quadric_small_contraction() {
        let m = FanMap::identity(quadric_a(), quadric_w()).unwrap();
        let r = contract(&m, &[vec![-1, 1, 1, -1]]).unwrap();
        assert_eq!(r.kind, ContractionKind::Flipping);
        assert_eq!(r.merged_cones, vec![vec![0, 1, 2, 3]]);
        assert_eq!(r.target(), &quadric_w());
    }

    #[test]
    fn face_contractions() {
        let b = fan(2, &[&[1, 0], &[0, 1], &[1, 1]], &[&[0, 2], &[2, 1]]);
        let p2 = fan(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[0, 2]]);
        let m = FanMap::to_point(p2.clone());
        let r = contract_face(&m, &InvariantDivisor::from_ints(&[1, 1, 1])).unwrap();
        assert_eq!(r.target(), &p2);

        let m = FanMap::identity(quadric_a(), quadric_w()).unwrap();
        let r = contract_face(&m, &InvariantDivisor::zero(4)).unwrap();
        assert_eq!(r.target(), &quadric_w());
        assert!(matches!(contract_face(&m, &InvariantDivisor::prime(4, 0)), Err(Error::Precondition(_))));

        let orth3 = fan(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], &[&[0, 1, 2]]);
        let v = fan(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]], &[&[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]);
        let m = FanMap::identity(v, orth3.clone()).unwrap();
        let d = InvariantDivisor::new(vec![rat(-1), rat(-1), rat(-1), rat(-3)]);
        let r = contract_face(&m, &d).unwrap();
        assert_eq!(r.target(), &orth3);
        assert_eq!(r.removed_rays, vec![3]);

        let m = FanMap::identity(b.clone(), fan(2, &[&[1, 0], &[0, 1]], &[&[0, 1]])).unwrap();
        assert_eq!(contract_face(&m, &InvariantDivisor::from_ints(&[0, 0, -1])).unwrap().target(), &b);
    }

    #[test]
    fn fano_over_a_line_keeps_the_base_map() {
        let x = fan(2, &[&[0, 1], &[0, -1], &[1, 0]], &[&[2, 0], &[2, 1]]);
        let y = fan(1, &[&[1]], &[&[0]]);
        let m = FanMap::new(vec![vec![1, 0]], x, y.clone()).unwrap();
        let r = contract(&m, &[vec![1, 1, 0]]).unwrap();
        assert_eq!(r.kind, ContractionKind::Fano);
        assert_eq!(r.target().rank(), 1);
        assert_eq!(r.target().rays().len(), 1);
        // the composite X → Z → Y is the original projection
        for v in m.source.rays() {
            assert_eq!(r.to_base.apply(&r.map.apply(v)), m.apply(v));
        }
        assert!(check_morphism(&r.to_base).proper);
    }
}
