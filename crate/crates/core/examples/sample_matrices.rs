// Haar and ε-balanced Hermitian samples from keyed streams.

use hermitian_cokernels::sampler::{sample_eps_balanced, sample_haar, sample_stream, EntryDistribution};
use hermitian_cokernels::{ExtensionKind, ExtensionSpec, Result};

pub fn run_example() -> Result<()> {
    let spec = ExtensionSpec::new(3, ExtensionKind::RamifiedOdd, 1, 3)?;
    let a = sample_haar(&spec, 3, &mut sample_stream(42, 0));
    println!("haar sample 0:\n{}", serde_json::to_string(&a.as_matrix().to_json())?);
    assert!(a.as_matrix().hermitian_defect().is_none());

    // same (seed, index), same matrix
    let again = sample_haar(&spec, 3, &mut sample_stream(42, 0));
    assert_eq!(a, again);

    let skew: EntryDistribution = "0:0.7,1:0.3".parse()?;
    let unram = ExtensionSpec::new(2, ExtensionKind::Unramified, 1, 2)?;
    let b = sample_eps_balanced(&unram, 4, &skew, &skew, &mut sample_stream(42, 1))?;
    println!("ε = {} sample:\n{}", skew.epsilon(), serde_json::to_string(&b.as_matrix().to_json())?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
