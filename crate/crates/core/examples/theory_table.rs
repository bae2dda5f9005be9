// Exact finite-n and limiting probabilities, moments and invertible counts.

use hermitian_cokernels::closed_forms::{
    count_invertible_hermitian, count_invertible_symmetric, moment_closed_form, theory_table, TheoryContext,
};
use hermitian_cokernels::{ExtensionKind, ExtensionSpec, Partition, Result};

pub fn run_example() -> Result<()> {
    let spec = ExtensionSpec::new(2, ExtensionKind::Unramified, 1, 1)?;
    let ctx = TheoryContext::new(spec, 40)?;
    let gammas = Partition::enumerate(2, 2);
    for row in theory_table(&ctx, &gammas, 6)? {
        println!("{}", serde_json::to_string(&row)?);
    }
    println!("P(cok ⊗ κ = 0) at n = 2: {}", ctx.corank_probability(0, 2)?);
    for mu in [Partition::new([1]), Partition::new([1, 1])] {
        println!("E #Sur(cok, {mu}) → {}", moment_closed_form(&mu, &spec));
    }
    for n in 1..=3 {
        println!(
            "n = {n}: |GL ∩ H_n(F_4)| = {}, |GL ∩ Sym_n(F_3)| = {}",
            count_invertible_hermitian(n, 2)?,
            count_invertible_symmetric(n, 3)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
