//! Zariski decomposition and the section-equality check.

use toric_mmp::divisor::InvariantDivisor;
use toric_mmp::exactlin::ratio;
use toric_mmp::fan::{Fan, FanMap};
use toric_mmp::sections::{is_pseudo_effective, verify_ckm, zariski_decompose, Route};

fn main() -> toric_mmp::Result<()> {
    let blowup = Fan::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]], vec![vec![0, 2], vec![1, 2]])?;
    let plane = Fan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1]])?;
    let m = FanMap::identity(blowup, plane)?;

    for d in [
        InvariantDivisor::prime(3, 2),
        InvariantDivisor::from_ints(&[1, 0, 2]),
        InvariantDivisor::new(vec![ratio(1, 1), ratio(1, 2), ratio(1, 1)]),
    ] {
        let r = zariski_decompose(&m, &d)?;
        let v = verify_ckm(&r, &d, 12)?;
        println!("D = {d}: P = {}, N = {}, check passed for m <= {}: {}", r.p, r.n, v.checked, v.passed());
    }

    let minus_e = InvariantDivisor::from_ints(&[0, 0, -1]);
    let lp = is_pseudo_effective(&m, &minus_e, Route::Lp)?;
    let mmp = is_pseudo_effective(&m, &minus_e, Route::Mmp)?;
    println!("-E pseudo-effective: lp {} mmp {}", lp.pseudo_effective, mmp.pseudo_effective);
    Ok(())
}
