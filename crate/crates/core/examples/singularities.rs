//! Discrepancies and the terminal/canonical/klt/lc classification.

use toric_mmp::divisor::InvariantDivisor;
use toric_mmp::exactlin::ratio;
use toric_mmp::fan::Fan;
use toric_mmp::singularities::{classify_pair, discrepancy};

fn main() -> toric_mmp::Result<()> {
    for v in [[0, 1], [1, 2], [1, 3], [-1, 3]] {
        let f = Fan::new(2, vec![vec![1, 0], v.to_vec()], vec![vec![0, 1]])?;
        let c = classify_pair(&f, &InvariantDivisor::zero(2))?;
        println!(
            "<(1,0),{v:?}>: {} min discrepancy {:?} crepant {:?}",
            c.verdict,
            c.min_discrepancy.map(|x| x.to_string()),
            c.crepant_points
        );
    }

    let half = Fan::new(3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 2]], vec![vec![0, 1, 2]])?;
    let z = InvariantDivisor::zero(3);
    println!("<e1,e2,(1,1,2)>: {}, a(1,1,1) = {}", classify_pair(&half, &z)?.verdict, discrepancy(&half, &z, &[1, 1, 1])?);

    let p2 = Fan::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, -1]], vec![vec![0, 1], vec![1, 2], vec![0, 2]])?;
    for d in [
        InvariantDivisor::new(vec![ratio(1, 2), ratio(1, 2), ratio(0, 1)]),
        InvariantDivisor::from_ints(&[1, 1, 1]),
        InvariantDivisor::from_ints(&[2, 0, 0]),
    ] {
        println!("(P2, {d}): {}", classify_pair(&p2, &d)?.verdict);
    }

    let quadric = Fan::new(3, vec![vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 1]], vec![vec![0, 1, 2, 3]])?;
    let c = classify_pair(&quadric, &InvariantDivisor::prime(4, 0))?;
    println!("(quadric cone, D_p1): {} on cone {:?}", c.verdict, c.witness_cone);
    Ok(())
}
