// Clamped cokernel types and module map counts.

use hermitian_cokernels::cokernel::{cokernel_type, count_automorphisms, count_submodules, count_surjections};
use hermitian_cokernels::sampler::{sample_haar, sample_stream};
use hermitian_cokernels::{ExtensionKind, ExtensionSpec, Matrix, Partition, Result};

pub fn run_example() -> Result<()> {
    let spec = ExtensionSpec::new(2, ExtensionKind::Unramified, 1, 3)?;
    let d = Matrix::diagonal(spec, &[spec.one(), spec.pi_pow(1), spec.pi_pow(2), spec.zero()]);
    let lambda = cokernel_type(&d, 3)?;
    println!("diag(1, π, π², 0) at clamp 3: {lambda}");
    assert_eq!(lambda.parts(), &[3, 2, 1]);

    for i in 0..5 {
        let a = sample_haar(&spec, 4, &mut sample_stream(7, i));
        println!("sample {i}: {}", cokernel_type(a.as_matrix(), 3)?);
    }

    let q = spec.q();
    let (big, small) = (Partition::new([2, 1]), Partition::new([1]));
    println!("|Aut {big}| = {}", count_automorphisms(&big, q));
    println!("#Sur({big}, {small}) = {}", count_surjections(&big, &small, q)?);
    println!("#{{H ≤ {big} : H ≅ {small}}} = {}", count_submodules(&small, &big, q)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
