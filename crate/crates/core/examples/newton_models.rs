//! Minimal, canonical and dlt models of x^2 + y^2 + z^2 = 0 from its Newton polyhedron.

use toric_mmp::newton::{model, normal_fan, ExponentSet, ModelType};

fn main() -> toric_mmp::Result<()> {
    let e = ExponentSet::new(vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]])?;
    let nf = normal_fan(&e)?;
    println!("normal fan rays {:?}", nf.rays());

    for ty in [ModelType::Minimal, ModelType::Canonical, ModelType::Dlt, ModelType::LogCanonical] {
        let r = model(&e, ty)?;
        println!("{ty}: ambient rays {:?}", r.ambient.source.rays());
        println!("  divisor {}", r.divisor);
        for (c, v) in &r.wall_values {
            println!("  wall class {c:?} value {v}");
        }
        let kinds: Vec<&str> = r.trace.steps.iter().map(|s| s.kind.name()).collect();
        println!("  trace {kinds:?}, model rays {:?}", r.model.source.rays());
        if let Some(c) = &r.contracted {
            println!("  contracted to {c}");
        }
        println!("  discrepancies {:?}", r.discrepancies);
    }
    Ok(())
}
