// Total variation to the limit along an n-ladder, Haar against a skewed law.

use hermitian_cokernels::experiment::{run_universality_sweep, ExperimentConfig};
use hermitian_cokernels::sampler::Sampler;
use hermitian_cokernels::{ExtensionKind, Result};

pub fn run_example() -> Result<()> {
    let mut cfg = ExperimentConfig::new(2, ExtensionKind::Unramified, 2);
    cfg.n_ladder = vec![2, 4, 8];
    cfg.samples = 3000;
    let skew = "0:0.8,1:0.2".parse()?;
    cfg.samplers = vec![Sampler::Haar, Sampler::Eps { dist_y: skew, dist_z: "0:0.5,1:0.5".parse()? }];
    let report = run_universality_sweep(&cfg)?;
    for s in &report.sweep {
        let tvs: Vec<String> = s.points.iter().map(|p| format!("n={}: {:.4}±{:.4}", p.n, p.tv, p.se)).collect();
        println!("{}  {}  non-increasing: {}", s.sampler, tvs.join("  "), s.non_increasing);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
