// Canonical forms under Hermitian congruence.

use hermitian_cokernels::classify::{classify, verify_congruence};
use hermitian_cokernels::cokernel::cokernel_type;
use hermitian_cokernels::sampler::{sample_haar, sample_stream};
use hermitian_cokernels::{ExtensionKind, ExtensionSpec, Result};

pub fn run_example() -> Result<()> {
    for kind in [ExtensionKind::Unramified, ExtensionKind::RamifiedOdd] {
        let spec = ExtensionSpec::new(3, kind, 1, 6)?;
        let a = sample_haar(&spec, 4, &mut sample_stream(11, 0));
        let (y, form) = classify(&a)?;
        let ok = verify_congruence(&a, &y, &form);
        println!("{kind:?}: {}", serde_json::to_string(&form)?);
        println!("  verified = {ok}, cok = {}", cokernel_type(a.as_matrix(), 2)?);
        assert!(ok);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
