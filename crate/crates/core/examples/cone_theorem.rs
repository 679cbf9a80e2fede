//! Wall classes, extremal rays and the relative Picard number.

use toric_mmp::curves::{ne_cone, nefness};
use toric_mmp::divisor::InvariantDivisor;
use toric_mmp::fan::{Fan, FanMap};

fn main() -> toric_mmp::Result<()> {
    // A^1 x P^1 over A^1: NE is a half line
    let x = Fan::new(2, vec![vec![1, 0], vec![0, 1], vec![0, -1]], vec![vec![0, 1], vec![0, 2]])?;
    let line = Fan::new(1, vec![vec![1]], vec![vec![0]])?;
    let ne = ne_cone(&FanMap::new(vec![vec![1, 0]], x, line)?)?;
    println!("A1 x P1 / A1: extremal rays {:?}, rho {}", ne.extremal_rays, ne.rho);

    // Hirzebruch surface F_1 over a point
    let f1 = Fan::new(
        2,
        vec![vec![1, 0], vec![0, 1], vec![-1, 1], vec![0, -1]],
        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
    )?;
    let m = FanMap::to_point(f1.clone());
    let ne = ne_cone(&m)?;
    for (w, c) in &ne.walls {
        println!("wall {:?} class {c:?}", w.rays);
    }
    println!("F1: extremal rays {:?}, rho {}", ne.extremal_rays, ne.rho);

    let k = InvariantDivisor::canonical(&f1);
    let anti = k.scale(&(-num::BigRational::from_integer(1.into())));
    println!("-K nef: {}", nefness(&anti, &m, false)?.nef);
    if let Some((w, c, v)) = nefness(&k, &m, false)?.violation {
        println!("K is negative on wall {:?} (class {c:?}): {v}", w.rays);
    }
    Ok(())
}
