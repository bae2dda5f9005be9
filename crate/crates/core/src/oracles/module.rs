//! Explicit finite modules `G_λ = ∏ O/π^{λ_i}` with indexed elements.

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::ring::{ExtensionSpec, RingElem};

/// Dense bitset over module element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ElemSet(Vec<u64>);

impl ElemSet {
    pub fn new(size: usize) -> Self {
        ElemSet(vec![0; size.div_ceil(64)])
    }

    pub fn insert(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, i % 64);
        let fresh = self.0[w] >> b & 1 == 0;
        self.0[w] |= 1 << b;
        fresh
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(w, &bits)| (0..64).filter(move |b| bits >> b & 1 == 1).map(move |b| w * 64 + b))
    }
}

/// `G_λ` over the ring of `ext`, with scalars taken in `O/π^B` for a fixed
/// `B ≥ λ₁`. Component `i` lives in `O/π^{λ_i}`; a component digit pair is
/// also a valid digit pair in any finer truncation, which gives the lifts
/// used when a component acts as a scalar.
#[derive(Clone, Debug)]
pub struct FiniteModule {
    scalars: ExtensionSpec,
    parts: Vec<u32>,
    comps: Vec<ExtensionSpec>,
    strides: Vec<usize>,
    order: usize,
}

/// Largest module handled by the explicit enumerators.
pub const MAX_MODULE_ORDER: usize = 1 << 22;

impl FiniteModule {
    pub fn new(ext: &ExtensionSpec, lambda: &Partition, scalar_trunc: u32) -> Result<Self> {
        let scalar_trunc = scalar_trunc.max(lambda.largest()).max(1);
        let scalars = ext.with_truncation(scalar_trunc)?;
        let mut comps = Vec::new();
        let mut strides = Vec::new();
        let mut order: usize = 1;
        for &l in lambda.parts() {
            let c = ext.with_truncation(l)?;
            strides.push(order);
            order = order
                .checked_mul(c.order() as usize)
                .filter(|&o| o <= MAX_MODULE_ORDER)
                .ok_or(Error::BudgetExceeded { needed: u128::MAX, budget: MAX_MODULE_ORDER as u128 })?;
            comps.push(c);
        }
        Ok(FiniteModule { scalars, parts: lambda.parts().to_vec(), comps, strides, order })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn scalars(&self) -> &ExtensionSpec {
        &self.scalars
    }

    pub fn component_ring(&self, i: usize) -> &ExtensionSpec {
        &self.comps[i]
    }

    pub fn decode(&self, idx: usize) -> Vec<RingElem> {
        self.comps
            .iter()
            .enumerate()
            .map(|(i, c)| c.elem_at(((idx / self.strides[i]) % c.order() as usize) as u64))
            .collect()
    }

    pub fn encode(&self, v: &[RingElem]) -> usize {
        v.iter().zip(&self.comps).zip(&self.strides).map(|((&e, c), &s)| c.index_of(e) as usize * s).sum()
    }

    pub fn zero(&self) -> Vec<RingElem> {
        vec![RingElem::ZERO; self.rank()]
    }

    pub fn generator(&self, i: usize) -> Vec<RingElem> {
        let mut v = self.zero();
        v[i] = self.comps[i].one();
        v
    }

    pub fn add(&self, a: &[RingElem], b: &[RingElem]) -> Vec<RingElem> {
        self.comps.iter().zip(a.iter().zip(b)).map(|(c, (&x, &y))| c.add(x, y)).collect()
    }

    pub fn neg(&self, a: &[RingElem]) -> Vec<RingElem> {
        self.comps.iter().zip(a).map(|(c, &x)| c.neg(x)).collect()
    }

    /// `c · a` for a scalar `c ∈ O/π^B`.
    pub fn scale(&self, c: RingElem, a: &[RingElem]) -> Vec<RingElem> {
        self.comps.iter().zip(a).map(|(r, &x)| r.mul(self.scalars.reduce_to(c, r), x)).collect()
    }

    /// `Σ coeffs[k] · vecs[k]`.
    pub fn combine(&self, coeffs: &[RingElem], vecs: &[Vec<RingElem>]) -> Vec<RingElem> {
        let mut acc = self.zero();
        for (&c, v) in coeffs.iter().zip(vecs) {
            if !c.is_zero() {
                acc = self.add(&acc, &self.scale(c, v));
            }
        }
        acc
    }

    pub fn is_zero(&self, a: &[RingElem]) -> bool {
        a.iter().all(RingElem::is_zero)
    }

    /// `π^k · a = 0`.
    pub fn killed_by_pi_pow(&self, a: &[RingElem], k: u32) -> bool {
        a.iter().zip(&self.comps).zip(&self.parts).all(|((&x, c), &l)| match c.valuation(x) {
            None => true,
            Some(v) => v + k >= l,
        })
    }

    pub fn pi_pow_times(&self, k: u32, a: &[RingElem]) -> Vec<RingElem> {
        self.comps.iter().zip(a).map(|(c, &x)| c.mul(c.pi_pow(k), x)).collect()
    }

    /// Elements killed by `π^k`.
    pub fn torsion(&self, k: u32) -> Vec<usize> {
        (0..self.order).filter(|&i| self.killed_by_pi_pow(&self.decode(i), k)).collect()
    }

    /// Distinct multiples `O·a`.
    pub fn multiples(&self, a: &[RingElem]) -> Vec<usize> {
        let mut seen = ElemSet::new(self.order);
        let l = self.parts.first().copied().unwrap_or(0);
        let ring = self.scalars.with_truncation(l.max(1)).expect("valid truncation");
        let mut out = Vec::new();
        for c in ring.elements() {
            let idx = self.encode(&self.scale(c, a));
            if seen.insert(idx) {
                out.push(idx);
            }
        }
        out
    }

    /// Submodule generated by `base ∪ {g}`, where `base` is a submodule.
    pub fn extend_span(&self, base: &ElemSet, g: &[RingElem]) -> ElemSet {
        let mult: Vec<Vec<RingElem>> = self.multiples(g).into_iter().map(|i| self.decode(i)).collect();
        let mut out = ElemSet::new(self.order);
        for h in base.iter() {
            let hv = self.decode(h);
            for m in &mult {
                out.insert(self.encode(&self.add(&hv, m)));
            }
        }
        out
    }

    pub fn zero_span(&self) -> ElemSet {
        let mut s = ElemSet::new(self.order);
        s.insert(0);
        s
    }

    pub fn span(&self, gens: &[Vec<RingElem>]) -> ElemSet {
        gens.iter().fold(self.zero_span(), |acc, g| self.extend_span(&acc, g))
    }
}
