//! One PASS/FAIL line per acceptance criterion. Exact throughout.
//!
//! Run with `cargo test --test acceptance`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num::{BigRational, Integer, Signed, Zero};
use toric_mmp::corpus::{check_instance, generate, Instance};
use toric_mmp::curves::{ample_certificate, ne_cone};
use toric_mmp::divisor::{freeness_witnesses, support_function, InvariantDivisor};
use toric_mmp::fan::{Fan, FanMap};
use toric_mmp::mmp::{run_mmp, ContractionKind, MmpTrace, Outcome};
use toric_mmp::newton::{model, orthant, ExponentSet, ModelType};
use toric_mmp::sections::{algebra_generators, is_pseudo_effective, verify_ckm, zariski_decompose, Route};
use toric_mmp::singularities::{classify_pair, discrepancy, Verdict};

type Q = BigRational;
type Check = Result<String, String>;

const SEED: u64 = 2024;
const CORPUS: usize = 100;

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn qr(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn fan(rank: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Fan {
    Fan::new(rank, rays.iter().map(|r| r.to_vec()).collect(), cones.iter().map(|c| c.to_vec()).collect()).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Debug) -> String {
    format!("{e:?}")
}

// ---- oracles ----

/// Gaussian elimination over ℚ for a square system.
fn solve(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        b.swap(c, p);
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = &a[r][c] / &a[c][c];
                for k in 0..n {
                    let t = &f * &a[c][k];
                    a[r][k] -= t;
                }
                let t = &f * &b[c];
                b[r] -= t;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// `Σ c_i d_i`.
fn pair(class: &[i64], d: &[Q]) -> Q {
    class.iter().zip(d).map(|(&c, x)| q(c) * x).sum()
}

/// `Σ c_i v_i`.
fn relation(class: &[i64], rays: &[Vec<i64>]) -> Vec<i64> {
    let n = rays.first().map_or(0, |r| r.len());
    (0..n).map(|k| class.iter().zip(rays).map(|(c, r)| c * r[k]).sum()).collect()
}

/// Covector `m` with `⟨m, v⟩ = t_v` on the rays of a simplicial full cone.
fn covector(rays: &[Vec<i64>], targets: &[Q]) -> Vec<Q> {
    let a = rays.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
    solve(a, targets.to_vec()).expect("simplicial full-dimensional cone")
}

fn box_points(n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|p| (lo..=hi).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out
}

fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

fn ip(m: &[Q], v: &[i64]) -> Q {
    m.iter().zip(v).map(|(a, &b)| a * q(b)).sum()
}

// ---- criteria ----

fn c1_cone_theorem() -> Check {
    let x = fan(2, &[&[1, 0], &[0, 1], &[0, -1]], &[&[0, 1], &[0, 2]]);
    let y = fan(1, &[&[1]], &[&[0]]);
    let m = FanMap::new(vec![vec![1, 0]], x.clone(), y).map_err(err)?;
    let ne = ne_cone(&m).map_err(err)?;
    ensure(ne.extremal_rays.len() == 1 && ne.rho == 1, || format!("rays {:?}, rho {}", ne.extremal_rays, ne.rho))?;
    let r = &ne.extremal_rays[0];
    ensure(relation(r, x.rays()) == vec![0, 0], || format!("{r:?} is not a relation"))?;
    // a half line: every wall class is a positive multiple of the ray
    for g in ne.generators() {
        let k = g.iter().zip(r).find(|(_, b)| **b != 0).map(|(a, b)| qr(*a, *b)).unwrap();
        ensure(k.is_positive() && g.iter().zip(r).all(|(a, b)| q(*a) == &k * q(*b)), || format!("{g:?} off the ray"))?;
    }
    Ok(format!("one extremal ray {r:?}, rho 1"))
}

fn picard_complete_surface(f: &Fan) -> usize {
    f.rays().len() - f.rank()
}

fn c2_trichotomy() -> Check {
    let f1 = fan(2, &[&[1, 0], &[0, 1], &[-1, 1], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]]);
    let t = run_mmp(&FanMap::to_point(f1.clone()), &InvariantDivisor::canonical(&f1)).map_err(err)?;
    ensure(t.kinds() == vec![ContractionKind::Divisorial, ContractionKind::Fano], || format!("F1 trace {:?}", t.kinds()))?;
    let s = &t.steps[0];
    ensure(s.removed_ray == Some(vec![0, 1]), || format!("removed {:?}", s.removed_ray))?;
    let before = picard_complete_surface(&f1);
    let after = picard_complete_surface(&s.fan);
    ensure(
        (s.rho_before, s.rho_after) == (2, Some(1)) && (before, after) == (2, 1),
        || format!("rho {} -> {:?}, oracle {before} -> {after}", s.rho_before, s.rho_after),
    )?;
    ensure(t.steps[1].fan == Fan::point(), || "fano step is not to a point".into())?;
    let p2 = fan(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[0, 2]]);
    let t2 = run_mmp(&FanMap::to_point(p2.clone()), &InvariantDivisor::canonical(&p2)).map_err(err)?;
    ensure(t2.kinds() == vec![ContractionKind::Fano], || format!("P2 trace {:?}", t2.kinds()))?;
    Ok("F1: [divisorial removing (0,1), rho 2->1, fano]; P2: [fano]".into())
}

fn c3_flip() -> Check {
    let rays: &[&[i64]] = &[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]];
    let a = fan(3, rays, &[&[0, 1, 3], &[0, 2, 3]]);
    let w = fan(3, rays, &[&[0, 1, 2, 3]]);
    let d = InvariantDivisor::prime(4, 0);
    let t = run_mmp(&FanMap::identity(a.clone(), w).map_err(err)?, &d).map_err(err)?;
    ensure(t.kinds() == vec![ContractionKind::Flipping], || format!("trace {:?}", t.kinds()))?;
    let s = &t.steps[0];
    ensure(s.fan.rays() == a.rays(), || "flip is not small".into())?;
    ensure(s.fan.cones() == [vec![0, 1, 2], vec![1, 2, 3]], || format!("flipped cones {:?}", s.fan.cones()))?;
    ensure(pair(&s.class, &d.coeffs) == q(-1) && s.value == q(-1), || format!("old value {}", s.value))?;
    let cert = s.flip.as_ref().ok_or("no flip certificate")?;
    let after = s.divisor.as_ref().ok_or("no divisor after flip")?;
    for (c, v) in &cert.new_walls {
        ensure(relation(c, a.rays()) == vec![0, 0, 0], || format!("{c:?} is not a relation"))?;
        ensure(*v == q(1) && pair(c, &after.coeffs) == q(1), || format!("new value {v}"))?;
    }
    let e = &cert.negativity;
    ensure(e.is_effective() && !e.is_zero(), || format!("E = {e}"))?;
    Ok(format!("A -> B small, values -1 -> +1, E = {e}"))
}

fn coeffs_in_range(d: &InvariantDivisor) -> bool {
    d.coeffs.iter().all(|c| c.denom() <= &6.into() && c.abs() <= q(5))
}

struct CorpusRun {
    instances: Vec<Instance>,
    traces: Vec<MmpTrace>,
    elapsed: Duration,
    failures: Vec<String>,
}

fn corpus_run() -> CorpusRun {
    let start = Instant::now();
    let instances = generate(SEED, CORPUS).expect("corpus generation");
    let mut failures = Vec::new();
    for (i, inst) in instances.iter().enumerate() {
        if let Err(e) = check_instance(inst) {
            failures.push(format!("instance {i}: {e}"));
        }
    }
    let elapsed = start.elapsed();
    let traces = instances.iter().filter_map(|i| run_mmp(&i.map, &i.divisor).ok()).collect();
    CorpusRun { instances, traces, elapsed, failures }
}

fn c4_termination(c: &CorpusRun) -> Check {
    ensure(c.instances.len() >= 100, || format!("{} instances", c.instances.len()))?;
    ensure(c.failures.is_empty(), || c.failures.join("; "))?;
    ensure(c.traces.len() == c.instances.len(), || "some MMP run failed".into())?;
    for inst in &c.instances {
        let x = &inst.map.source;
        ensure(x.rank() <= 3 && x.rays().len() <= 10 && x.is_simplicial(), || format!("out of range fan {x}"))?;
        ensure(coeffs_in_range(&inst.divisor), || format!("out of range divisor {}", inst.divisor))?;
    }
    let mut flips = 0;
    for (inst, t) in c.instances.iter().zip(&c.traces) {
        let mut seen = HashSet::new();
        seen.insert(inst.map.source.clone());
        for s in t.steps.iter().filter(|s| s.kind != ContractionKind::Fano) {
            ensure(seen.insert(s.fan.clone()), || format!("repeated fan {}", s.fan))?;
        }
        ensure(matches!(t.outcome, Outcome::Minimal | Outcome::FiberType), || "bad outcome".into())?;
        if t.outcome == Outcome::FiberType {
            let last = t.steps.last().ok_or("fano outcome without a step")?;
            ensure(last.kind == ContractionKind::Fano && last.value.is_negative(), || "fano step not negative".into())?;
        }
        for s in t.steps.iter().filter(|s| s.kind == ContractionKind::Flipping) {
            flips += 1;
            let cert = s.flip.as_ref().ok_or("flip without certificate")?;
            ensure(cert.negativity.is_effective() && !cert.negativity.is_zero(), || {
                format!("negativity E = {}", cert.negativity)
            })?;
            let after = s.divisor.as_ref().ok_or("flip without divisor")?;
            for (cl, v) in &cert.new_walls {
                ensure(v.is_positive() && pair(cl, &after.coeffs) == *v, || format!("new wall value {v}"))?;
            }
        }
    }
    ensure(c.elapsed < Duration::from_secs(60), || format!("took {:?}", c.elapsed))?;
    let nef = c.traces.iter().filter(|t| t.outcome == Outcome::Minimal).count();
    Ok(format!(
        "{} instances, {flips} flips, {nef} nef / {} fano, {:.1}s",
        c.instances.len(),
        c.traces.len() - nef,
        c.elapsed.as_secs_f64()
    ))
}

/// Lattice points of `{u : ⟨u, v⟩ + ⌊m d⌋ ≥ 0}` in a box.
fn sections_in_box(f: &Fan, d: &[Q], m: i64, b: i64) -> BTreeSet<Vec<i64>> {
    let floor: Vec<Q> = d.iter().map(|c| (c * q(m)).floor()).collect();
    box_points(f.rank(), -b, b)
        .into_iter()
        .filter(|u| f.rays().iter().zip(&floor).all(|(v, c)| q(u.iter().zip(v).map(|(a, b)| a * b).sum()) + c >= q(0)))
        .collect()
}

fn c5_zariski() -> Check {
    let x = fan(2, &[&[1, 0], &[0, 1], &[1, 1]], &[&[0, 2], &[1, 2]]);
    let y = fan(2, &[&[1, 0], &[0, 1]], &[&[0, 1]]);
    let m = FanMap::identity(x.clone(), y).map_err(err)?;
    let e = InvariantDivisor::prime(3, 2);
    let r = zariski_decompose(&m, &e).map_err(err)?;
    ensure(r.model.source == x, || format!("model {}", r.model.source))?;
    ensure(r.p.is_zero() && r.n == e, || format!("P = {}, N = {}", r.p, r.n))?;
    let v = verify_ckm(&r, &e, 12).map_err(err)?;
    ensure(v.passed() && v.checked == 12, || format!("{v:?}"))?;
    let orthant_pts: BTreeSet<Vec<i64>> = box_points(2, 0, 6).into_iter().collect();
    for k in 1..=12 {
        let a = sections_in_box(&x, &r.p.coeffs, k, 6);
        let b = sections_in_box(&x, &e.coeffs, k, 6);
        ensure(a == b && a == orthant_pts, || format!("section sets differ at m = {k}"))?;
    }
    Ok("P = 0, N = E, section sets equal for m = 1..12".into())
}

fn c6_psef(c: &CorpusRun) -> Check {
    let mut checked = 0;
    for (i, inst) in c.instances.iter().enumerate() {
        if inst.map.target.cones().len() != 1 {
            continue;
        }
        let lp = is_pseudo_effective(&inst.map, &inst.divisor, Route::Lp).map_err(err)?;
        let mmp = is_pseudo_effective(&inst.map, &inst.divisor, Route::Mmp).map_err(err)?;
        ensure(lp.pseudo_effective == mmp.pseudo_effective, || {
            format!("instance {i}: lp {} mmp {}", lp.pseudo_effective, mmp.pseudo_effective)
        })?;
        checked += 1;
    }
    ensure(checked > 0, || "no affine-base instances".into())?;
    Ok(format!("{checked} affine-base instances agree"))
}

/// Graded points `(u, a)` with `a ≤ 8` and `|u_i| ≤ b` in the section cone.
fn graded_points(f: &Fan, d: &InvariantDivisor, b: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for a in 0..=8 {
        for u in box_points(f.rank(), -b, b) {
            let ok = f
                .rays()
                .iter()
                .zip(&d.coeffs)
                .all(|(v, c)| q(u.iter().zip(v).map(|(x, y)| x * y).sum()) + q(a) * c >= q(0));
            if ok {
                out.push([u, vec![a]].concat());
            }
        }
    }
    out
}

/// Whether `x` is a ℤ≥0-combination of `gens` (all in the cone cut out by
/// `inside`); `weight` is positive on nonzero cone points.
fn representable(
    x: &[i64],
    gens: &[Vec<i64>],
    inside: &dyn Fn(&[i64]) -> bool,
    weight: &dyn Fn(&[i64]) -> Q,
    memo: &mut HashMap<Vec<i64>, bool>,
) -> bool {
    if x.iter().all(|&v| v == 0) {
        return true;
    }
    if let Some(&r) = memo.get(x) {
        return r;
    }
    let mut r = false;
    for g in gens {
        let y: Vec<i64> = x.iter().zip(g).map(|(a, b)| a - b).collect();
        if inside(&y) && weight(&y) < weight(x) && representable(&y, gens, inside, weight, memo) {
            r = true;
            break;
        }
    }
    memo.insert(x.to_vec(), r);
    r
}

fn hilbert_case(name: &str, f: &Fan, d: &InvariantDivisor, b: i64, max_degree: i64) -> Check {
    let gens = algebra_generators(&FanMap::to_point(f.clone()), d).map_err(err)?;
    let n = f.rank();
    let value = |x: &[i64], v: &[i64], c: &Q| q((0..n).map(|k| x[k] * v[k]).sum()) + q(x[n]) * c;
    let inside = |x: &[i64]| x[n] >= 0 && f.rays().iter().zip(&d.coeffs).all(|(v, c)| value(x, v, c) >= q(0));
    let weight = |x: &[i64]| q(x[n]) + f.rays().iter().zip(&d.coeffs).map(|(v, c)| value(x, v, c)).sum::<Q>();
    ensure(gens.iter().all(|g| inside(g)), || format!("{name}: generator outside the cone"))?;
    ensure(gens.iter().all(|g| g[n] <= max_degree), || format!("{name}: degree above {max_degree}"))?;
    let pts = graded_points(f, d, b);
    let mut memo = HashMap::new();
    for p in &pts {
        ensure(representable(p, &gens, &inside, &weight, &mut memo), || format!("{name}: {p:?} not generated"))?;
    }
    for (i, g) in gens.iter().enumerate() {
        let others: Vec<Vec<i64>> = gens.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, h)| h.clone()).collect();
        let mut memo = HashMap::new();
        ensure(!representable(g, &others, &inside, &weight, &mut memo), || format!("{name}: {g:?} is redundant"))?;
    }
    Ok(format!("{name} {} generators cover {} points", gens.len(), pts.len()))
}

fn c7_hilbert() -> Check {
    let a1 = fan(2, &[&[1, 0], &[1, 2]], &[&[0, 1]]);
    let s1 = hilbert_case("A1", &a1, &InvariantDivisor::prime(2, 0), 10, 8)?;
    let quad = fan(3, &[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]], &[&[0, 1, 2, 3]]);
    let s2 = hilbert_case("quadric", &quad, &InvariantDivisor::prime(4, 0), 4, 2)?;
    Ok(format!("{s1}; {s2}"))
}

/// Least discrepancy and crepant points over primitive non-ray points of a
/// simplicial full cone, from the covector of `K` and a box search.
fn discrepancy_oracle(f: &Fan, b: i64) -> (Option<Q>, Vec<Vec<i64>>) {
    let rays = f.cone_rays(&f.cones()[0]);
    let m = covector(&rays, &vec![q(1); rays.len()]);
    let in_cone = |x: &[i64]| {
        let t: Vec<Vec<Q>> = (0..x.len()).map(|k| rays.iter().map(|r| q(r[k])).collect()).collect();
        let l = solve(t, x.iter().map(|&v| q(v)).collect()).unwrap();
        l.iter().all(|c| !c.is_negative())
    };
    let mut min: Option<Q> = None;
    let mut crepant = Vec::new();
    for x in box_points(f.rank(), -b, b) {
        if gcd_all(&x) != 1 || rays.contains(&x) || !in_cone(&x) {
            continue;
        }
        let a = ip(&m, &x) - q(1);
        if a.is_zero() {
            crepant.push(x.clone());
        }
        if min.as_ref().map_or(true, |v| &a < v) {
            min = Some(a);
        }
    }
    crepant.sort();
    (min, crepant)
}

fn c8_singularities() -> Check {
    let smooth = fan(2, &[&[1, 0], &[0, 1]], &[&[0, 1]]);
    let z2 = InvariantDivisor::zero(2);
    let c = classify_pair(&smooth, &z2).map_err(err)?;
    ensure(c.verdict == Verdict::Terminal, || format!("smooth: {}", c.verdict))?;
    let cases: [(&[i64], Verdict, Vec<Vec<i64>>, Q); 3] = [
        (&[1, 2], Verdict::Canonical, vec![vec![1, 1]], q(0)),
        (&[1, 3], Verdict::Canonical, vec![vec![1, 1], vec![1, 2]], q(0)),
        (&[-1, 3], Verdict::Klt, vec![], qr(-1, 3)),
    ];
    for (v, verdict, crepant, min) in cases {
        let f = fan(2, &[&[1, 0], v], &[&[0, 1]]);
        let c = classify_pair(&f, &z2).map_err(err)?;
        let (omin, ocrep) = discrepancy_oracle(&f, 8);
        ensure(c.verdict == verdict, || format!("{v:?}: {}", c.verdict))?;
        ensure(c.crepant_points == crepant && ocrep == crepant, || format!("{v:?}: crepant {:?}", c.crepant_points))?;
        ensure(c.min_discrepancy == Some(min.clone()) && omin == Some(min), || {
            format!("{v:?}: min {:?}", c.min_discrepancy)
        })?;
    }
    let half = fan(3, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 2]], &[&[0, 1, 2]]);
    let z3 = InvariantDivisor::zero(3);
    let c = classify_pair(&half, &z3).map_err(err)?;
    let a = discrepancy(&half, &z3, &[1, 1, 1]).map_err(err)?;
    let m = covector(half.rays(), &[q(1), q(1), q(1)]);
    let oracle = ip(&m, &[1, 1, 1]) - q(1);
    ensure(c.verdict == Verdict::Terminal, || format!("half: {}", c.verdict))?;
    ensure(a == qr(1, 2) && oracle == qr(1, 2), || format!("half: a(1,1,1) = {a}"))?;
    Ok("terminal / canonical [(1,1)] / canonical [(1,1),(1,2)] / klt -1/3 / terminal +1/2".into())
}

fn c9_newton() -> Check {
    let exps = vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]];
    let e = ExponentSet::new(exps.clone()).map_err(err)?;
    let ord = |v: &[i64]| exps.iter().map(|m| m.iter().zip(v).map(|(a, b)| a * b).sum::<i64>()).min().unwrap();
    let r = model(&e, ModelType::Minimal).map_err(err)?;
    let v = &r.ambient.source;
    let rays: BTreeSet<Vec<i64>> = v.rays().iter().cloned().collect();
    let want: BTreeSet<Vec<i64>> = [vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 1]].into_iter().collect();
    ensure(rays == want, || format!("ambient rays {rays:?}"))?;
    let d: Vec<Q> = v.rays().iter().map(|x| q(-1 - ord(x))).collect();
    ensure(r.divisor.coeffs == d, || format!("K + X' = {}", r.divisor))?;
    ensure(!r.wall_values.is_empty(), || "no contracted walls".into())?;
    for (c, val) in &r.wall_values {
        ensure(relation(c, v.rays()) == vec![0, 0, 0], || format!("{c:?} is not a relation"))?;
        ensure(val.is_zero() && pair(c, &d).is_zero(), || format!("wall {c:?} value {val}"))?;
    }
    let can = model(&e, ModelType::Canonical).map_err(err)?;
    ensure(can.contracted.as_ref() == Some(&orthant(3)), || format!("canonical model {:?}", can.contracted))?;
    let dlt = model(&e, ModelType::Dlt).map_err(err)?;
    let removed: Vec<_> = dlt.trace.steps.iter().filter_map(|s| s.removed_ray.clone()).collect();
    ensure(
        dlt.trace.kinds() == vec![ContractionKind::Divisorial] && removed == vec![vec![1, 1, 1]],
        || format!("dlt trace {:?} removing {removed:?}", dlt.trace.kinds()),
    )?;
    Ok(format!("{} walls crepant, canonical model = orthant, dlt contracts (1,1,1)", r.wall_values.len()))
}

fn cartier_multiple(f: &Fan, d: &InvariantDivisor) -> InvariantDivisor {
    let l = support_function(f, d).unwrap().cartier_index;
    d.scale(&Q::from_integer(l))
}

/// Per maximal cone, the covector `m_σ` with `⟨m_σ, v⟩ = −d` on its rays,
/// required integral and in `P_D`.
fn freeness_oracle(f: &Fan, d: &InvariantDivisor) -> Result<Vec<Vec<i64>>, String> {
    let mut out = Vec::new();
    for c in f.cones() {
        let rays = f.cone_rays(c);
        let targets: Vec<Q> = c.iter().map(|&i| -d.coeffs[i].clone()).collect();
        let m = covector(&rays, &targets);
        ensure(m.iter().all(|x| x.is_integer()), || format!("m = {m:?} not integral"))?;
        let ok = f.rays().iter().zip(&d.coeffs).all(|(v, c)| !(ip(&m, v) + c).is_negative());
        ensure(ok, || format!("m = {m:?} outside P_D"))?;
        out.push(m.iter().map(|x| x.to_integer().try_into().unwrap()).collect());
    }
    Ok(out)
}

fn c10_freeness(c: &CorpusRun) -> Check {
    let mut checked = 0;
    for (inst, t) in c.instances.iter().zip(&c.traces) {
        let m = &inst.map;
        let mut nef = vec![(m.clone(), InvariantDivisor::zero(m.source.rays().len()))];
        if let Some(a) = ample_certificate(m).map_err(err)? {
            nef.push((m.clone(), cartier_multiple(&m.source, &a)));
        }
        if t.outcome == Outcome::Minimal {
            nef.push((t.model.clone(), cartier_multiple(&t.model.source, &t.divisor)));
        }
        for (map, d) in &nef {
            if !map.source.cones().iter().all(|c| map.source.cone_dim(c) == map.source.rank()) {
                continue;
            }
            let lib = freeness_witnesses(map, d).map_err(err)?;
            let oracle = freeness_oracle(&map.source, d)?;
            ensure(lib == oracle, || format!("witnesses {lib:?} vs oracle {oracle:?}"))?;
            checked += 1;
        }
    }
    ensure(checked > 0, || "nothing checked".into())?;
    Ok(format!("{checked} nef Cartier divisors free"))
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |n: usize, name: &str, r: Check| {
        match r {
            Ok(s) => println!("PASS {n:>2} {name}: {s}"),
            Err(s) => {
                failed += 1;
                println!("FAIL {n:>2} {name}: {s}");
            }
        }
    };
    report(1, "cone theorem", c1_cone_theorem());
    report(2, "contraction trichotomy", c2_trichotomy());
    report(3, "flip", c3_flip());
    let corpus = corpus_run();
    report(4, "termination corpus", c4_termination(&corpus));
    report(5, "zariski decomposition", c5_zariski());
    report(6, "pseudo-effectivity routes", c6_psef(&corpus));
    report(7, "hilbert basis", c7_hilbert());
    report(8, "singularity table", c8_singularities());
    report(9, "newton models", c9_newton());
    report(10, "freeness", c10_freeness(&corpus));
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
