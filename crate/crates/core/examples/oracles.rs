// Brute-force oracles: pairings, automorphisms, invertible matrices and the
// character-sum indicator.

use hermitian_cokernels::oracles::{
    automorphisms_by_extension, brute_force_automorphisms, brute_force_invertible_count, exhaustive_character_check,
    pairing_classes, Budget, MatrixField,
};
use hermitian_cokernels::{ExtensionKind, ExtensionSpec, Partition, Result};

pub fn run_example() -> Result<()> {
    let budget = Budget::default();
    let ram = ExtensionSpec::new(3, ExtensionKind::RamifiedOdd, 1, 1)?;
    for gamma in [Partition::new([1, 1]), Partition::new([2]), Partition::new([1])] {
        let c = pairing_classes(&gamma, &ram, budget)?;
        println!(
            "{gamma}: {} perfect pairings, {} classes, |Aut| = {}, Σ|Aut|/|Aut(δ)| = {:?}",
            c.perfect_pairings,
            c.classes.len(),
            c.automorphisms,
            c.orbit_stabilizer_sum()
        );
    }

    let mu = Partition::new([2, 1, 1]);
    let brute = brute_force_automorphisms(&mu, 2, budget)?;
    println!(
        "|Aut {mu}| over Z_2: {} (work {}), by extension {}",
        brute.count,
        brute.work,
        automorphisms_by_extension(&mu, 2)?
    );

    let herm = brute_force_invertible_count(2, 2, MatrixField::Hermitian, budget)?;
    println!("invertible 2×2 Hermitian over F_4: {}", herm.count);

    let unram = ExtensionSpec::new(2, ExtensionKind::Unramified, 1, 1)?;
    let check = exhaustive_character_check(&unram, 2, &Partition::new([1]))?;
    println!("character identity: {}/{} agree", check.agreements, check.instances);
    assert_eq!(check.agreements, check.instances);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
