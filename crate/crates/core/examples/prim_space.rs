//! Quasi-orbits, orbit closures and the specialization table.

use bclocal::level::{LevelIndex, LevelModel};
use bclocal::prim::{closure_member, prim_report, quasi_orbit, ExactPoint};

fn main() -> bclocal::Result<()> {
    let field = "Q3".parse()?;
    let level = LevelIndex::new(2, 1);
    let model = LevelModel::new(&field, level)?;

    let one = ExactPoint::one(&field);
    let zero = ExactPoint::zero(&field, 0);
    println!("label of 1: {}", quasi_orbit(&one, level)?);
    println!("label of 0: {}", quasi_orbit(&zero, level)?);
    let down = closure_member(&one, &zero, level)?;
    println!("0 in closure of orbit(1): {} (witness shift {:?})", down.member, down.witness);
    println!("1 in closure of orbit(0): {}", closure_member(&zero, &one, level)?.member);

    let table = prim_report(&model)?;
    println!("\n{}", table.to_markdown());
    Ok(())
}
