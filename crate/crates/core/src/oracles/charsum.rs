//! Character-sum form of the indicator `1_{FX = 0}`, evaluated exactly in
//! `Z[ζ_{p^m}]`.
//!
//! For `F : V = R^n → G` and `X ∈ H_n(R)`, the sum runs over
//! `C ∈ Hom_R(Hom_R(W, G), R) ≅ (∏_k R[π^{λ_k}])^n` of `ζ^{tr(C(FX))}`, where
//! `tr` is the trace `x + σ(x)` (unramified) or the map `T` (ramified).
//! Divided by `|G|^n` it must be `1` when `FX = 0` and `0` otherwise.

use serde::{Deserialize, Serialize};

use super::module::FiniteModule;
use crate::error::{Error, Result};
use crate::matrix::HermitianMatrix;
use crate::partition::Partition;
use crate::ring::{ExtensionKind, ExtensionSpec, RingElem};

/// Element of `Z[ζ_{p^m}]` in the power basis `1, ζ, …, ζ^{φ(p^m) − 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclotomic {
    p: u64,
    m: u32,
    coeffs: Vec<i128>,
}

impl Cyclotomic {
    /// `Σ_e counts[e] ζ^e`, reduced modulo `Φ_{p^m}(x) = Σ_{i<p} x^{i p^{m−1}}`.
    pub fn from_exponent_counts(p: u64, m: u32, counts: &[i128]) -> Self {
        let big = p.pow(m) as usize;
        let step = p.pow(m - 1) as usize;
        let phi = big - step;
        assert_eq!(counts.len(), big);
        let mut c = counts.to_vec();
        for e in (phi..big).rev() {
            let v = c[e];
            if v == 0 {
                continue;
            }
            c[e] = 0;
            // x^φ ≡ −Σ_{i ≤ p−2} x^{i·p^{m−1}}
            for i in 0..(p as usize - 1) {
                c[e - phi + i * step] -= v;
            }
        }
        c.truncate(phi);
        Cyclotomic { p, m, coeffs: c }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&v| v == 0)
    }

    /// The rational integer this element equals, if any.
    pub fn as_integer(&self) -> Option<i128> {
        self.coeffs[1..].iter().all(|&v| v == 0).then_some(self.coeffs[0])
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }
}

/// Ring `R` on which the identity is evaluated for a module of type `G`:
/// `O/p^m` with `m = λ₁` (unramified), `O/π^{2m−1}` with `m > 1` and
/// `π^{2m−1} G = 0` (σ(π) = −π), `O/π^{2m}` with `π^{2m} G = 0` (type II).
pub fn charsum_ring(ext: &ExtensionSpec, g: &Partition) -> Result<ExtensionSpec> {
    let l = g.largest();
    let trunc = match ext.kind() {
        ExtensionKind::Unramified => l.max(1),
        ExtensionKind::RamifiedOdd | ExtensionKind::Ramified2TypeI => {
            let m = 2u32.max((l + 1).div_ceil(2));
            2 * m - 1
        }
        ExtensionKind::Ramified2TypeII => 2 * 1u32.max(l.div_ceil(2)),
    };
    ext.with_truncation(trunc)
}

/// Exponent `m` of `ζ_{p^m}` for the ring returned by [`charsum_ring`].
pub fn charsum_exponent(r: &ExtensionSpec) -> u32 {
    let modulus = r.trace_modulus();
    let mut m = 0;
    let mut v = modulus;
    while v > 1 {
        v /= r.p();
        m += 1;
    }
    m
}

/// Largest `|G|^n` accepted.
pub const MAX_CHARACTERS: u128 = 1 << 20;

fn check_instance(f: &[Vec<RingElem>], x: &HermitianMatrix, module: &FiniteModule) -> Result<()> {
    if f.len() != x.n() {
        return Err(Error::Shape(format!("F has {} columns, X is {}x{}", f.len(), x.n(), x.n())));
    }
    if f.iter().any(|v| v.len() != module.rank()) {
        return Err(Error::Shape("F values have the wrong number of components".into()));
    }
    let chars = (module.order() as u128).checked_pow(x.n() as u32).unwrap_or(u128::MAX);
    if chars > MAX_CHARACTERS {
        return Err(Error::InstanceTooLarge(format!("|G|^n = {chars}")));
    }
    Ok(())
}

/// `FX ∈ Hom(W, G) ≅ G^n`: `(FX)(w_j) = Σ_i X_ij F(v_i)`.
fn apply(f: &[Vec<RingElem>], x: &HermitianMatrix, module: &FiniteModule) -> Vec<Vec<RingElem>> {
    let n = x.n();
    (0..n).map(|j| module.combine(&(0..n).map(|i| x.get(i, j)).collect::<Vec<_>>(), f)).collect()
}

/// Direct test of `FX = 0`.
pub fn fx_is_zero(f: &[Vec<RingElem>], x: &HermitianMatrix, g: &Partition) -> Result<bool> {
    let module = FiniteModule::new(x.spec(), g, x.spec().trunc())?;
    check_instance(f, x, &module)?;
    Ok(apply(f, x, &module).iter().all(|v| module.is_zero(v)))
}

/// `(1/|G|^n) Σ_C ζ^{tr(C(FX))}`, required to be `0` or `1`. `X` must live
/// in [`charsum_ring`]`(G)`, and `F(v_i)` is given by its components.
pub fn indicator_character_sum(f: &[Vec<RingElem>], x: &HermitianMatrix, g: &Partition) -> Result<u8> {
    let r = *x.spec();
    if r != charsum_ring(&r, g)? {
        return Err(Error::Config(format!("X must be over O/π^{}", charsum_ring(&r, g)?.trunc())));
    }
    let module = FiniteModule::new(&r, g, r.trunc())?;
    check_instance(f, x, &module)?;
    let alpha = apply(f, x, &module);
    // Hom_R(G, R) ≅ ∏_k R[π^{λ_k}]: y ↦ Σ_k c_k y_k.
    let duals: Vec<Vec<RingElem>> = g
        .parts()
        .iter()
        .map(|&l| r.elements().filter(|&c| r.valuation(c).is_none_or(|v| v + l >= r.trunc())).collect())
        .collect();
    let slots: Vec<(usize, usize)> = (0..x.n()).flat_map(|j| (0..g.len()).map(move |k| (j, k))).collect();
    let m = charsum_exponent(&r);
    let modulus = r.trace_modulus() as usize;
    let mut counts = vec![0i128; modulus];
    let mut choice = vec![0usize; slots.len()];
    let mut total: i128 = 0;
    loop {
        let mut value = RingElem::ZERO;
        for (s, &(j, k)) in slots.iter().enumerate() {
            let c = duals[k][choice[s]];
            value = r.add(value, r.mul(c, alpha[j][k]));
        }
        counts[r.trace_map(value) as usize] += 1;
        total += 1;
        let mut s = 0;
        loop {
            if s == slots.len() {
                break;
            }
            choice[s] += 1;
            if choice[s] < duals[slots[s].1].len() {
                break;
            }
            choice[s] = 0;
            s += 1;
        }
        if s == slots.len() {
            break;
        }
    }
    let sum = Cyclotomic::from_exponent_counts(r.p(), m, &counts);
    if sum.is_zero() {
        Ok(0)
    } else if sum.as_integer() == Some(total) {
        Ok(1)
    } else {
        Err(Error::NonIntegral(format!("character sum {:?} over {} characters", sum.coeffs(), total)))
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct CharSumCheck {
    pub instances: u64,
    pub agreements: u64,
    pub zero_instances: u64,
}

/// Runs both sides over every `X ∈ H_n(R)` and every `F ∈ G^n`.
pub fn exhaustive_character_check(ext: &ExtensionSpec, n: usize, g: &Partition) -> Result<CharSumCheck> {
    let r = charsum_ring(ext, g)?;
    let module = FiniteModule::new(&r, g, r.trunc())?;
    let fs: Vec<Vec<Vec<RingElem>>> = {
        let total = (module.order() as u64).pow(n as u32);
        (0..total)
            .map(|mut code| {
                (0..n)
                    .map(|_| {
                        let v = module.decode((code % module.order() as u64) as usize);
                        code /= module.order() as u64;
                        v
                    })
                    .collect()
            })
            .collect()
    };
    let off = n * n.saturating_sub(1) / 2;
    let xs_total = r.modulus_x().pow(n as u32) * r.order().pow(off as u32);
    if xs_total as u128 * fs.len() as u128 > MAX_CHARACTERS * 16 {
        return Err(Error::InstanceTooLarge(format!("{xs_total} matrices × {} maps", fs.len())));
    }
    let mut out = CharSumCheck::default();
    for code in 0..xs_total {
        let mut c = code;
        let diag: Vec<u64> = (0..n)
            .map(|_| {
                let v = c % r.modulus_x();
                c /= r.modulus_x();
                v
            })
            .collect();
        let upper: Vec<RingElem> = (0..off)
            .map(|_| {
                let v = r.elem_at(c % r.order());
                c /= r.order();
                v
            })
            .collect();
        let x = HermitianMatrix::from_free_entries(r, n, &diag, &upper);
        for f in &fs {
            let direct = fx_is_zero(f, &x, g)?;
            let sum = indicator_character_sum(f, &x, g)?;
            out.instances += 1;
            if (sum == 1) == direct {
                out.agreements += 1;
            }
            if direct {
                out.zero_instances += 1;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_reduction() {
        // 1 + ζ + ζ² = 0 for ζ = ζ_3
        assert!(Cyclotomic::from_exponent_counts(3, 1, &[1, 1, 1]).is_zero());
        // ζ_4² = −1
        assert_eq!(Cyclotomic::from_exponent_counts(2, 2, &[0, 0, 1, 0]).as_integer(), Some(-1));
        // ζ_9^6 + ζ_9^3 + 1 = 0
        let mut c = vec![0; 9];
        c[0] = 1;
        c[3] = 1;
        c[6] = 1;
        assert!(Cyclotomic::from_exponent_counts(3, 2, &c).is_zero());
    }

    #[test]
    fn rings_per_kind() {
        let g = Partition::new(vec![1]);
        let u = ExtensionSpec::new(2, ExtensionKind::Unramified, 0, 1).unwrap();
        assert_eq!(charsum_ring(&u, &g).unwrap().trunc(), 1);
        let t1 = ExtensionSpec::new(3, ExtensionKind::RamifiedOdd, 1, 1).unwrap();
        let r1 = charsum_ring(&t1, &g).unwrap();
        assert_eq!((r1.trunc(), charsum_exponent(&r1)), (3, 2));
        let t2 = ExtensionSpec::new(2, ExtensionKind::Ramified2TypeII, 1, 1).unwrap();
        let r2 = charsum_ring(&t2, &g).unwrap();
        assert_eq!((r2.trunc(), charsum_exponent(&r2)), (2, 1));
    }

    #[test]
    fn single_instances() {
        let g = Partition::new(vec![1]);
        let r = ExtensionSpec::new(2, ExtensionKind::Unramified, 0, 1).unwrap();
        let x = HermitianMatrix::from_free_entries(r, 1, &[1], &[]);
        let f = vec![vec![r.one()]];
        assert_eq!(indicator_character_sum(&f, &x, &g).unwrap(), 0);
        let zero_x = HermitianMatrix::from_free_entries(r, 1, &[0], &[]);
        assert_eq!(indicator_character_sum(&f, &zero_x, &g).unwrap(), 1);
    }
}
