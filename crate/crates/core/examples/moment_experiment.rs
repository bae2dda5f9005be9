// Surjection moments of sampled cokernels.

use hermitian_cokernels::experiment::{run_moment_experiment, ExperimentConfig};
use hermitian_cokernels::{ExtensionKind, Partition, Result};

pub fn run_example() -> Result<()> {
    let mut cfg = ExperimentConfig::new(3, ExtensionKind::RamifiedOdd, 6);
    cfg.clamp = 2;
    cfg.samples = 4000;
    let report = run_moment_experiment(&cfg, &[Partition::new([1]), Partition::new([2])])?;
    for m in &report.moments[0].moments {
        println!(
            "μ = {}: mean {:.3} ± {:.3}, finite n {:.3}, limit {}",
            m.mu, m.mean, m.se, m.finite_n, m.closed_form_exact
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
