//! Brute-force counts of homomorphisms, surjections and submodules.

use std::collections::{BTreeMap, HashMap};

use super::module::{ElemSet, FiniteModule};
use super::{Budget, OracleCount};
use crate::error::Result;
use crate::partition::Partition;
use crate::ring::ExtensionSpec;

fn modules(lambda: &Partition, mu: &Partition, q: u64) -> Result<(FiniteModule, FiniteModule)> {
    let ext = ExtensionSpec::for_residue_size(q, 1)?;
    let b = lambda.largest().max(mu.largest()).max(1);
    Ok((FiniteModule::new(&ext, lambda, b)?, FiniteModule::new(&ext, mu, b)?))
}

/// `|Hom(G_λ, G_μ)|`: a homomorphism is a free choice of generator images
/// `g_i ∈ G_μ` with `π^{λ_i} g_i = 0`.
pub fn brute_force_hom_count(lambda: &Partition, mu: &Partition, q: u64, budget: Budget) -> Result<OracleCount> {
    let (src, dst) = modules(lambda, mu, q)?;
    budget.check(dst.order() as u128 * src.rank().max(1) as u128)?;
    let count = src.parts().iter().map(|&l| dst.torsion(l).len() as u128).product();
    Ok(OracleCount { count, work: dst.order() as u128 * src.rank() as u128 })
}

/// `|Sur(G_λ, G_μ)|` by enumerating generator images one at a time and
/// tracking the submodule they generate; the count of tuples reaching all of
/// `G_μ` is the number of surjections.
pub fn brute_force_surjection_count(lambda: &Partition, mu: &Partition, q: u64, budget: Budget) -> Result<OracleCount> {
    let (src, dst) = modules(lambda, mu, q)?;
    let cands: Vec<Vec<usize>> = src.parts().iter().map(|&l| dst.torsion(l)).collect();
    let mut states: HashMap<ElemSet, u128> = HashMap::new();
    states.insert(dst.zero_span(), 1);
    let mut work: u128 = 0;
    let mut span_cache: HashMap<(ElemSet, usize), ElemSet> = HashMap::new();
    for c in &cands {
        let mut next: HashMap<ElemSet, u128> = HashMap::new();
        for (span, ways) in &states {
            for &g in c {
                work += 1;
                budget.check(work)?;
                let new_span = if span.contains(g) {
                    span.clone()
                } else {
                    span_cache.entry((span.clone(), g)).or_insert_with(|| dst.extend_span(span, &dst.decode(g))).clone()
                };
                *next.entry(new_span).or_insert(0) += ways;
            }
        }
        states = next;
    }
    let count = states.iter().filter(|(s, _)| s.len() == dst.order()).map(|(_, w)| *w).sum();
    Ok(OracleCount { count, work })
}

/// Every submodule of `G_λ`, tallied by isomorphism type. The type is read
/// off from `|π^{j−1} H| / |π^j H| = q^{λ′_j}`.
pub fn brute_force_submodule_types(lambda: &Partition, q: u64, budget: Budget) -> Result<BTreeMap<Partition, u128>> {
    let ext = ExtensionSpec::for_residue_size(q, 1)?;
    let g = FiniteModule::new(&ext, lambda, lambda.largest().max(1))?;
    let mut found: std::collections::HashSet<ElemSet> = std::collections::HashSet::new();
    let mut frontier = vec![g.zero_span()];
    found.insert(g.zero_span());
    let mut work: u128 = 0;
    while let Some(h) = frontier.pop() {
        for x in 0..g.order() {
            if h.contains(x) {
                continue;
            }
            work += g.order() as u128;
            budget.check(work)?;
            let bigger = g.extend_span(&h, &g.decode(x));
            if found.insert(bigger.clone()) {
                frontier.push(bigger);
            }
        }
    }
    let mut tally = BTreeMap::new();
    for h in &found {
        *tally.entry(submodule_type(&g, h, q)).or_insert(0) += 1;
    }
    Ok(tally)
}

fn submodule_type(g: &FiniteModule, h: &ElemSet, q: u64) -> Partition {
    let mut sizes = vec![h.len()];
    let mut cur: Vec<usize> = h.iter().collect();
    while sizes.last().copied().unwrap_or(1) > 1 {
        let mut next = ElemSet::new(g.order());
        for &x in &cur {
            next.insert(g.encode(&g.pi_pow_times(1, &g.decode(x))));
        }
        cur = next.iter().collect();
        sizes.push(next.len());
    }
    let log_q = |n: usize| {
        let mut k = 0u32;
        let mut v = n;
        while v > 1 {
            v /= q as usize;
            k += 1;
        }
        k
    };
    let conj: Vec<u32> = sizes.windows(2).map(|w| log_q(w[0] / w[1])).collect();
    // conj[j-1] = λ′_j; convert back to parts
    let parts: Vec<u32> =
        (1..=conj.first().copied().unwrap_or(0)).map(|i| conj.iter().filter(|&&c| c >= i).count() as u32).collect();
    Partition::new(parts)
}
