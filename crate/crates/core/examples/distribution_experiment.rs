// Empirical cokernel law against exact finite-n theory.

use hermitian_cokernels::experiment::{run_distribution_experiment, ExperimentConfig};
use hermitian_cokernels::{ExtensionKind, Result};

pub fn run_example() -> Result<()> {
    let mut cfg = ExperimentConfig::new(2, ExtensionKind::Unramified, 4);
    cfg.clamp = 2;
    cfg.samples = 2000;
    cfg.seed = 5;
    let report = run_distribution_experiment(&cfg)?;
    for run in &report.distributions {
        for c in &run.cells {
            println!(
                "{:>6}  {:>5}  {:.4}  theory {}",
                c.cell.to_string(),
                c.count,
                c.frequency,
                c.theory_finite_n.map(|t| format!("{t:.4}")).unwrap_or_else(|| "-".into())
            );
        }
        if let Some(tv) = &run.tv {
            println!("TV = {:.4} ± {:.4}", tv.value, tv.se);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
