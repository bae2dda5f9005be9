//! Module automorphisms of `G_μ`, by literal enumeration and by basis extension.

use std::collections::BTreeMap;

use num_bigint::BigUint;

use super::module::FiniteModule;
use super::{Budget, OracleCount};
use crate::error::Result;
use crate::partition::Partition;
use crate::ring::{ExtensionSpec, RingElem};

fn module_for_q(mu: &Partition, q: u64) -> Result<FiniteModule> {
    let ext = ExtensionSpec::for_residue_size(q, 1)?;
    FiniteModule::new(&ext, mu, mu.largest())
}

/// Counts bijective endomorphisms of `G_μ` over a ring with residue field of
/// size `q`. Endomorphisms are tuples of generator images `g_i` with
/// `π^{μ_i} g_i = 0`. A map is bijective iff its kernel is trivial, and a
/// nonzero kernel always meets the socle `G[π] ≅ κ^r`, on which the map sends
/// the `i`-th basis vector to `h_i = π^{μ_i − 1} g_i`; so the map is bijective
/// iff the `h_i` are independent over `κ`. The candidate images for each
/// generator are tallied by their `h`, and tuples of distinct `h` values are
/// searched depth-first, skipping dependent prefixes.
pub fn brute_force_automorphisms(mu: &Partition, q: u64, budget: Budget) -> Result<OracleCount> {
    let g = module_for_q(mu, q)?;
    let r = g.rank();
    if r == 0 {
        return Ok(OracleCount { count: 1, work: 1 });
    }
    let kappa = ExtensionSpec::for_residue_size(q, 1)?;
    let mut tallies: Vec<Vec<(Vec<RingElem>, u128)>> = Vec::with_capacity(r);
    for &l in g.parts() {
        let mut tally: BTreeMap<Vec<u64>, u128> = BTreeMap::new();
        for idx in g.torsion(l) {
            let h = g.pi_pow_times(l - 1, &g.decode(idx));
            let key: Vec<u64> = h
                .iter()
                .enumerate()
                .map(|(j, &e)| {
                    let comp = g.component_ring(j);
                    let top = comp.div_pi_pow(e, g.parts()[j] - 1).expect("socle element");
                    kappa.index_of(comp.reduce_to(top, &kappa))
                })
                .collect();
            *tally.entry(key).or_insert(0) += 1;
        }
        tallies.push(tally.into_iter().map(|(k, m)| (k.into_iter().map(|i| kappa.elem_at(i)).collect(), m)).collect());
    }
    let bound = tallies.iter().try_fold(1u128, |acc, t| acc.checked_mul(t.len() as u128));
    budget.check(bound.unwrap_or(u128::MAX))?;
    let mut search = IndependentTuples { kappa, tallies: &tallies, count: 0, work: 0 };
    search.run(0, 1, &mut Vec::new())?;
    Ok(OracleCount { count: search.count, work: search.work })
}

struct IndependentTuples<'a> {
    kappa: ExtensionSpec,
    tallies: &'a [Vec<(Vec<RingElem>, u128)>],
    count: u128,
    work: u128,
}

impl IndependentTuples<'_> {
    /// `basis` holds reduced rows `(pivot, row)` with `row[pivot] = 1`;
    /// `weight` is the number of image tuples behind the current prefix.
    fn run(&mut self, level: usize, weight: u128, basis: &mut Vec<(usize, Vec<RingElem>)>) -> Result<()> {
        if level == self.tallies.len() {
            self.count += weight;
            return Ok(());
        }
        let k = self.kappa;
        for (h, mult) in &self.tallies[level] {
            self.work += 1;
            let mut v = h.clone();
            for (piv, row) in basis.iter() {
                let c = v[*piv];
                if !c.is_zero() {
                    for (x, &y) in v.iter_mut().zip(row) {
                        *x = k.sub(*x, k.mul(c, y));
                    }
                }
            }
            let Some(piv) = v.iter().position(|e| !e.is_zero()) else { continue };
            let inv = k.invert_unit(v[piv])?;
            for x in v.iter_mut() {
                *x = k.mul(*x, inv);
            }
            basis.push((piv, v));
            self.run(level + 1, weight * mult, basis)?;
            basis.pop();
        }
        Ok(())
    }
}

/// Counts automorphisms as the number of ordered bases of type `μ`: with
/// parts in decreasing order, the `k`-th image can be any `g` with
/// `π^{μ_k} g = 0` and `π^{μ_k − 1} g` outside the span of the earlier
/// basis vectors. The count of such `g` does not depend on which earlier
/// basis was chosen, so it is computed against the standard one.
pub fn automorphisms_by_extension(mu: &Partition, q: u64) -> Result<BigUint> {
    let g = module_for_q(mu, q)?;
    let mut total = BigUint::from(1u32);
    for (k, &l) in g.parts().iter().enumerate() {
        let mut ext: u64 = 0;
        for idx in 0..g.order() {
            let v = g.decode(idx);
            if !g.killed_by_pi_pow(&v, l) {
                continue;
            }
            let w = g.pi_pow_times(l - 1, &v);
            if w[k..].iter().any(|e| !e.is_zero()) {
                ext += 1;
            }
        }
        total *= ext;
    }
    Ok(total)
}

/// All automorphisms of `g`, each given by the images of the generators.
pub fn enumerate_automorphisms(g: &FiniteModule, budget: Budget) -> Result<Vec<Vec<Vec<RingElem>>>> {
    let mu = Partition::new(g.parts().to_vec());
    let expected = crate::cokernel::count_automorphisms(&mu, g.scalars().q());
    let expected: u128 = expected.try_into().unwrap_or(u128::MAX);
    budget.check(expected.saturating_mul(g.order() as u128))?;
    let cands: Vec<Vec<Vec<RingElem>>> =
        g.parts().iter().map(|&l| g.torsion(l).into_iter().map(|i| g.decode(i)).collect()).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    rec(g, &cands, &g.zero_span(), &mut chosen, &mut out);
    Ok(out)
}

fn rec(
    g: &FiniteModule,
    cands: &[Vec<Vec<RingElem>>],
    span: &super::module::ElemSet,
    chosen: &mut Vec<Vec<RingElem>>,
    out: &mut Vec<Vec<Vec<RingElem>>>,
) {
    let k = chosen.len();
    if k == g.rank() {
        out.push(chosen.clone());
        return;
    }
    let l = g.parts()[k];
    for c in &cands[k] {
        let w = g.pi_pow_times(l - 1, c);
        if span.contains(g.encode(&w)) {
            continue;
        }
        let next = g.extend_span(span, c);
        chosen.push(c.clone());
        rec(g, cands, &next, chosen, out);
        chosen.pop();
    }
}
