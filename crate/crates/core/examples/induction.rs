//! Ideal counts, zeta partial sums, induced masses and the window round trip.

use bclocal::bc::Beta;
use bclocal::induction::{
    divergence_witness, ideal_count_coeffs, induce_restrict_roundtrip, induced_partition, splitting_data,
    NumberFieldSpec, WindowMeasure,
};
use bclocal::level::{LevelIndex, LevelMeasure, LevelModel};

fn main() -> bclocal::Result<()> {
    let k: NumberFieldSpec = "Q(i)".parse()?;
    for p in [2, 3, 5, 7, 13] {
        let d = splitting_data(&k, p)?;
        println!("{p} in {k}: {:?}, f = {}", d.splitting, d.f);
    }
    let a = ideal_count_coeffs(&k, 30)?;
    println!("a_1..a_30 = {:?}", &a.coeffs()[1..]);

    for beta in [1.5, 2.0, 4.0] {
        let r = induced_partition(&k, 5, beta, 100_000)?;
        println!("beta = {beta}: Phi(1) ~ {:.6} (tail <= {:.1e})", r.mass, r.tail_bound);
    }
    println!("beta = 1 exceeds 10 at B = {}", divergence_witness(&NumberFieldSpec::Rationals, 1.0, 10.0)?);

    let model = LevelModel::new(&"Q2".parse()?, LevelIndex::new(2, 2))?;
    let nu = LevelMeasure::uniform(&model);
    let nu = WindowMeasure::from_level_measure(&model, &nu, 6, Beta::Int(1))?;
    let report = induce_restrict_roundtrip(&model, &nu)?;
    println!("round trip on [-6, 6]: pass = {}, mass = {}", report.pass, report.induced_mass);
    Ok(())
}
