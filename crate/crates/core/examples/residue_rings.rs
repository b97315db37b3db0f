//! Residue rings `O_K / pi^m` and their unit groups for the three kinds of field.

use bclocal::padic::{unit_group, LocalFieldSpec, ResidueRing};

fn main() -> bclocal::Result<()> {
    for desc in ["Q2", "Q3", "Q2u2:x^2+x+1", "Q3[x^2-3]"] {
        let field: LocalFieldSpec = desc.parse()?;
        println!("{field}: p = {}, e = {}, f = {}, q = {}", field.p(), field.e(), field.f(), field.q());
        for m in 1..=3 {
            let ring = ResidueRing::new(&field, m)?;
            let units = unit_group(&ring)?;
            println!(
                "  m = {m}: |O/pi^m| = {}, units of order {} with invariant factors {:?}",
                ring.cardinality(),
                units.order,
                units.invariant_factors
            );
        }
    }

    let ring = ResidueRing::new(&"Q3[x^2-3]".parse()?, 3)?;
    let pi = ring.uniformizer();
    let a = ring.add(&ring.from_int(2), &pi)?;
    let inv = ring.inverse(&a)?.expect("2 + pi is a unit");
    println!("(2 + pi)^-1 = {inv} in O/pi^3, check: {}", ring.mul(&a, &inv)?);
    Ok(())
}
