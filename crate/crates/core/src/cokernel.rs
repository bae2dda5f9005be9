//! Cokernel types over the chain ring and counts of maps between finite modules.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::partition::Partition;

/// Type of `cok(A) ⊗ O/π^a` for an `m × n` matrix `A`.
///
/// The matrix is reduced to `O/π^a` and eliminated with valuation pivots: the
/// entry of minimal valuation (smallest `(i, j)` among ties) clears its
/// column by exact division, then its row and column are dropped. Each pivot
/// of valuation `v` contributes a part `v`; once everything left vanishes,
/// each remaining row contributes a part `a`.
pub fn cokernel_type(a: &Matrix, clamp: u32) -> Result<Partition> {
    let spec = a.spec();
    if clamp == 0 || clamp > spec.trunc() {
        return Err(Error::BadClamp { clamp, trunc: spec.trunc() });
    }
    let target = spec.with_truncation(clamp)?;
    let mut m = a.reduce_to(&target)?;
    let r = target;
    let mut rows: Vec<usize> = (0..m.rows()).collect();
    let mut cols: Vec<usize> = (0..m.cols()).collect();
    let mut parts = Vec::new();
    loop {
        let mut best: Option<(u32, usize, usize)> = None;
        for (ri, &i) in rows.iter().enumerate() {
            for (ci, &j) in cols.iter().enumerate() {
                if let Some(v) = r.valuation(m.get(i, j)) {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, ri, ci));
                        if v == 0 {
                            break;
                        }
                    }
                }
            }
            if best.is_some_and(|(v, _, _)| v == 0) {
                break;
            }
        }
        let Some((v, ri, ci)) = best else { break };
        let (pi, pj) = (rows[ri], cols[ci]);
        let piv = m.get(pi, pj);
        let inv = if v == 0 { Some(r.invert_unit(piv)?) } else { None };
        for &i in &rows {
            if i == pi {
                continue;
            }
            let e = m.get(i, pj);
            if e.is_zero() {
                continue;
            }
            let f = match inv {
                Some(u) => r.mul(e, u),
                None => r.div_exact(e, piv).expect("pivot valuation is minimal"),
            };
            let nf = r.neg(f);
            for &j in &cols {
                let w = m.get(pi, j);
                if !w.is_zero() {
                    let val = r.add(m.get(i, j), r.mul(nf, w));
                    m.set(i, j, val);
                }
            }
        }
        if v > 0 {
            parts.push(v);
        }
        rows.remove(ri);
        cols.remove(ci);
    }
    parts.extend(std::iter::repeat_n(clamp, rows.len()));
    Partition::with_clamp(parts, Some(clamp))
}

fn q_pow(q: u64, e: u32) -> BigUint {
    BigUint::from(q).pow(e)
}

/// `|Hom_O(G_λ, G_μ)| = q^{Σ min(λ_i, μ_j)}`.
pub fn count_hom(lambda: &Partition, mu: &Partition, q: u64) -> BigUint {
    let e: u32 = lambda.parts().iter().flat_map(|&l| mu.parts().iter().map(move |&m| l.min(m))).sum();
    q_pow(q, e)
}

fn to_integer(v: BigRational, what: impl FnOnce() -> String) -> Result<BigUint> {
    if !v.is_integer() {
        return Err(Error::NonIntegral(what()));
    }
    v.to_integer().to_biguint().ok_or_else(|| Error::NonIntegral(what()))
}

/// Number of submodules of type `μ` in `G_λ`, by the conjugate-partition
/// product formula evaluated in exact rationals. Zero unless `μ ⊆ λ`.
pub fn count_submodules(mu: &Partition, lambda: &Partition, q: u64) -> Result<BigUint> {
    if !mu.is_contained_in(lambda) {
        return Ok(BigUint::zero());
    }
    let qr = BigRational::from_integer(q.into());
    let qinv = qr.recip();
    let mut acc = BigRational::one();
    for j in 1..=mu.largest() {
        let mj = mu.conjugate_part(j) as i64;
        let lj = lambda.conjugate_part(j) as i64;
        let mj1 = mu.conjugate_part(j + 1) as i64;
        acc *= Pow::pow(&qr, (mj * (lj - mj)) as u32);
        for k in 1..=(mj - mj1) {
            let num = BigRational::one() - Pow::pow(&qinv, (lj - mj + k) as u32);
            let den = BigRational::one() - Pow::pow(&qinv, k as u32);
            acc *= num / den;
        }
    }
    to_integer(acc, || format!("submodules of type {mu} in {lambda}, q = {q}"))
}

/// `|Aut_O(G_μ)|` for residue field size `q`, in the Hillar–Rhea form: with
/// parts sorted ascending `e_1 ≤ … ≤ e_r`, `d_k = max{l : e_l = e_k}` and
/// `c_k = min{l : e_l = e_k}`,
/// `∏ (q^{d_k} − q^{k−1}) · ∏ q^{e_j (r − d_j)} · ∏ q^{(e_i − 1)(r − c_i + 1)}`.
pub fn count_automorphisms(mu: &Partition, q: u64) -> BigUint {
    let mut e: Vec<u32> = mu.parts().to_vec();
    e.reverse();
    let r = e.len() as u32;
    let mut acc = BigUint::one();
    let mut exp: u32 = 0;
    for k in 0..e.len() {
        let d = e.iter().rposition(|&x| x == e[k]).unwrap() as u32 + 1;
        let c = e.iter().position(|&x| x == e[k]).unwrap() as u32 + 1;
        acc *= q_pow(q, d) - q_pow(q, k as u32);
        exp += e[k] * (r - d) + (e[k] - 1) * (r - c + 1);
    }
    acc * q_pow(q, exp)
}

/// `|Sur_O(G_λ, G_μ)|`: kernels of surjections are the submodules with
/// quotient of type `μ`, which are as many as the submodules of type `μ`.
pub fn count_surjections(lambda: &Partition, mu: &Partition, q: u64) -> Result<BigUint> {
    Ok(count_submodules(mu, lambda, q)? * count_automorphisms(mu, q))
}
