//! Property harness over seeded random instances.

use toric_mmp::corpus::{generate, run_corpus};
use toric_mmp::mmp::Outcome;

fn main() -> toric_mmp::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let count = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(20);
    for (i, inst) in generate(seed, count)?.iter().enumerate().take(3) {
        println!("instance {i} ({}): {} rays, D = {}", inst.family, inst.map.source.rays().len(), inst.divisor);
    }
    let rep = run_corpus(seed, count)?;
    println!(
        "{} instances: {} divisorial, {} flips, {} nef, {} fano, {} route disagreements, {} failures",
        rep.total(),
        rep.divisorial(),
        rep.flips(),
        rep.count(Outcome::Minimal),
        rep.count(Outcome::FiberType),
        rep.psef_disagreements(),
        rep.failures.len()
    );
    Ok(())
}
