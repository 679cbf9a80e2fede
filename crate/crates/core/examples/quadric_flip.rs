//! The flip of the small resolution of the quadric cone.

use toric_mmp::divisor::InvariantDivisor;
use toric_mmp::fan::{Fan, FanMap};
use toric_mmp::mmp::{contract, flip, verify_negativity, Side};

fn main() -> toric_mmp::Result<()> {
    let rays = vec![vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 1]];
    let a = Fan::new(3, rays.clone(), vec![vec![0, 1, 3], vec![0, 2, 3]])?;
    let w = Fan::new(3, rays, vec![vec![0, 1, 2, 3]])?;
    let m = FanMap::identity(a.clone(), w)?;
    let d = InvariantDivisor::prime(4, 0);

    let class = vec![-1, 1, 1, -1];
    let c = contract(&m, std::slice::from_ref(&class))?;
    println!("contraction of {class:?}: {}", c.kind.name());

    let f = flip(&m, &[class], &d)?;
    println!("A cones {:?}", a.cones());
    println!("B cones {:?}", f.fan().cones());
    println!("old value {}", f.old_value);
    for (cl, v) in &f.new_walls {
        println!("new wall class {cl:?} value {v}");
    }

    let n = verify_negativity(Side { map: &c.map, divisor: &d }, Side { map: &f.to_w, divisor: &f.divisor })?;
    println!("common refinement rays {:?}", n.fan.rays());
    println!("E = {} (effective: {})", n.e, n.e.is_effective());
    Ok(())
}
