//! Validate a fan, subdivide it, resolve and Q-factorialize.

use toric_mmp::fan::{qfactorialize, resolve, star_subdivision, validate_fan, Fan};

fn main() -> toric_mmp::Result<()> {
    let a2 = Fan::new(2, vec![vec![1, 0], vec![1, 3]], vec![vec![0, 1]])?;
    println!("cone <(1,0),(1,3)> valid: {}", validate_fan(&a2).is_empty());
    println!("multiplicity {}", a2.multiplicity(&[0, 1]));

    let (smooth, _) = resolve(&a2)?;
    println!("resolution rays {:?}", smooth.rays());
    println!("smooth: {}", smooth.is_smooth());

    let blown = star_subdivision(&a2, &[1, 1])?;
    println!("star subdivision at (1,1): cones {:?}", blown.cones());

    let quadric = Fan::new(3, vec![vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 1]], vec![vec![0, 1, 2, 3]])?;
    let (small, _) = qfactorialize(&quadric)?;
    println!("quadric cone Q-factorialized: rays {:?}, cones {:?}", small.rays(), small.cones());

    let bad = Fan::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]], vec![vec![0, 1], vec![0, 2]])?;
    for v in validate_fan(&bad) {
        println!("violation: {v}");
    }
    Ok(())
}
