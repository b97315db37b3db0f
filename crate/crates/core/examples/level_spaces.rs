//! Finite levels `Y_{n,m}`: strata, the balancing action and the shift.

use bclocal::level::{LevelIndex, LevelModel};
use bclocal::padic::LocalFieldSpec;

fn main() -> bclocal::Result<()> {
    let field: LocalFieldSpec = "Q3".parse()?;
    let model = LevelModel::new(&field, LevelIndex::new(2, 2))?;
    println!("Y_{{{}}} over {field}: {} points", model.level(), model.point_count());
    for (k, size) in model.orbit_decompose()? {
        println!("  stratum {k}: {size} points, |G_(n,m-k)| = {}", model.group_order(model.m() - k));
    }

    let y = model.point(model.stratum(0).start + 1);
    let shifted = model.act(1, &y)?;
    let coarse = model.transition(&shifted, LevelIndex::new(1, 1))?;
    println!("{y} -> shift -> {shifted} -> level 1:1 -> {coarse}");

    let balancing = model.balancing_free_check()?;
    println!("balancing action free: {} ({} orbits)", balancing.pass, balancing.orbits);
    Ok(())
}
