// Arithmetic in O/π^M for each extension shape.

use hermitian_cokernels::{ExtensionKind, ExtensionSpec, Result};

pub fn run_example() -> Result<()> {
    let shapes = [
        (2, ExtensionKind::Unramified),
        (3, ExtensionKind::RamifiedOdd),
        (2, ExtensionKind::Ramified2TypeI),
        (2, ExtensionKind::Ramified2TypeII),
    ];
    for (p, kind) in shapes {
        let r = ExtensionSpec::new(p, kind, 1, 4)?;
        let pi = r.uniformizer();
        let a = r.add(r.one(), pi);
        let inv = r.invert_unit(a)?;
        println!("{kind:?} p={p}: θ² = {}θ + {}, q = {}", r.s(), r.t(), r.q());
        println!("  π = {}, σ(π) = {}", r.format_elem(pi), r.format_elem(r.sigma(pi)));
        println!("  (1+π)⁻¹ = {}", r.format_elem(inv));
        assert_eq!(r.mul(a, inv), r.one());
        println!(
            "  v(π³) = {:?}, v(0) = {:?}, T(π) = {}",
            r.valuation(r.pi_pow(3)),
            r.valuation(r.zero()),
            r.trace_map(pi)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
