//! Hilbert bases of section algebras, including a non-Q-Cartier divisor.

use toric_mmp::divisor::{sections_basis, InvariantDivisor};
use toric_mmp::fan::{Fan, FanMap};
use toric_mmp::sections::algebra_generators;

fn main() -> toric_mmp::Result<()> {
    let p1 = Fan::new(1, vec![vec![1], vec![-1]], vec![vec![0], vec![1]])?;
    let s = sections_basis(&FanMap::to_point(p1), &InvariantDivisor::from_ints(&[1, 0]), None)?;
    println!("sections of O(1) on P1: {s:?}");

    let a1 = Fan::new(2, vec![vec![1, 0], vec![1, 2]], vec![vec![0, 1]])?;
    let g = algebra_generators(&FanMap::to_point(a1), &InvariantDivisor::prime(2, 0))?;
    println!("A1 cone, D = D_(1,0): generators (u, degree) {g:?}");

    let quadric = Fan::new(3, vec![vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 1]], vec![vec![0, 1, 2, 3]])?;
    let g = algebra_generators(&FanMap::to_point(quadric), &InvariantDivisor::prime(4, 0))?;
    println!("quadric cone, D = D_p1: generators {g:?}");
    println!("max degree {}", g.iter().map(|x| x[3]).max().unwrap_or(0));
    Ok(())
}
