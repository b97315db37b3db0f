//! Smith normal form, the K_0 quotient and the window K_1 check.

use bclocal::ktheory::{cokernel, ktheory_report, smith_normal_form, IntMatrix};
use bclocal::level::{LevelIndex, LevelModel};

fn main() -> bclocal::Result<()> {
    let a = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let snf = smith_normal_form(&a);
    println!("invariant factors of\n{a}: {:?}", snf.invariant_factors);
    println!("cokernel: {}", cokernel(&a));

    for (desc, n, m) in [("Q2", 1, 1), ("Q3", 2, 1), ("Q5", 2, 2)] {
        let model = LevelModel::new(&desc.parse()?, LevelIndex::new(n, m))?;
        let r = ktheory_report(&model, None)?;
        println!("{desc} {}: K_0 quotient {} , ker(1 - S) rank {}, pass {}", r.level, r.k0.quotient, r.k1_kernel_rank, r.pass);
    }
    Ok(())
}
