//! Divisorial, flipping and Fano steps of the MMP.

use toric_mmp::divisor::InvariantDivisor;
use toric_mmp::fan::{Fan, FanMap};
use toric_mmp::mmp::{run_mmp, MmpTrace};

fn show(name: &str, t: &MmpTrace) {
    println!("{name}: outcome {:?}", t.outcome);
    for s in &t.steps {
        println!(
            "  {} class {:?} value {} rho {} -> {:?} removed {:?}",
            s.kind.name(),
            s.class,
            s.value,
            s.rho_before,
            s.rho_after,
            s.removed_ray
        );
    }
}

fn main() -> toric_mmp::Result<()> {
    let f1 = Fan::new(
        2,
        vec![vec![1, 0], vec![0, 1], vec![-1, 1], vec![0, -1]],
        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
    )?;
    show("F1, D = K", &run_mmp(&FanMap::to_point(f1.clone()), &InvariantDivisor::canonical(&f1))?);

    let p2 = Fan::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, -1]], vec![vec![0, 1], vec![1, 2], vec![0, 2]])?;
    show("P2, D = K", &run_mmp(&FanMap::to_point(p2.clone()), &InvariantDivisor::canonical(&p2))?);

    let blowup = Fan::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]], vec![vec![0, 2], vec![1, 2]])?;
    let plane = Fan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1]])?;
    let t = run_mmp(&FanMap::identity(blowup, plane)?, &InvariantDivisor::prime(3, 2))?;
    show("blow-up of A2, D = E", &t);
    Ok(())
}
