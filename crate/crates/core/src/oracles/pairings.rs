//! Hermitian pairings `δ : Γ × Γ → K/O` on `Γ = ∏ O/π^{λ_i}`.
//!
//! With `L = λ₁`, a pairing is stored through `δ(e_i, e_j) = π^{−L} c_ij`
//! where `c_ij ∈ π^{L − min(λ_i, λ_j)} O / π^L`. Then
//! `δ(x, y) = π^{−L} Σ x_i σ(y_j) c_ij`, and `δ(y, x) = σ(δ(x, y))` reads
//! `c_ji = η^L σ(c_ij)` with `η = π / σ(π)`.
//!
//! A diagonal value `δ(e_i, e_i)` is also required to lift to a `σ`-fixed
//! element of `K`, as the pairing of a Hermitian matrix does. For odd `p` and
//! for unramified `O` this follows from `σ`-invariance in `K/O`; for ramified
//! `O` at `p = 2` it does not (`δ(e, e) = π^{−1}` on `O/π` is `σ`-invariant
//! modulo `O` but has no fixed lift).

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::automorphisms::enumerate_automorphisms;
use super::module::FiniteModule;
use super::Budget;
use crate::error::Result;
use crate::partition::Partition;
use crate::ring::{ExtensionKind, ExtensionSpec, RingElem};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairingTable {
    pub gamma: Partition,
    /// `r × r` row-major values `c_ij` in `O/π^{λ₁}`.
    pub values: Vec<RingElem>,
}

/// One isomorphism class of perfect pairings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairingClass {
    pub representative: PairingTable,
    pub orbit_size: u128,
    pub stabilizer: u128,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairingClasses {
    pub gamma: Partition,
    pub perfect_pairings: u128,
    pub automorphisms: u128,
    pub classes: Vec<PairingClass>,
}

impl PairingClasses {
    /// `Σ |Aut Γ| / |Aut(Γ, δ)|` over the classes, as an exact quotient sum.
    pub fn orbit_stabilizer_sum(&self) -> Option<u128> {
        self.classes.iter().try_fold(0u128, |acc, c| {
            self.automorphisms.is_multiple_of(c.stabilizer).then(|| acc + self.automorphisms / c.stabilizer)
        })
    }
}

pub(crate) struct PairingSpace {
    module: FiniteModule,
    ring: ExtensionSpec,
    eta_l: RingElem,
    socle: Vec<Vec<RingElem>>,
    /// `O/π^{L+4}` and `η^L` in it, when the lift condition is not automatic.
    wide: Option<(ExtensionSpec, RingElem)>,
}

fn eta(ring: &ExtensionSpec) -> RingElem {
    match ring.kind() {
        ExtensionKind::Unramified => ring.one(),
        ExtensionKind::RamifiedOdd | ExtensionKind::Ramified2TypeI => ring.neg(ring.one()),
        ExtensionKind::Ramified2TypeII => {
            // η = −1 − u⁻¹π since θ² = 2θ + 2u
            let u_inv = ring.invert_unit(ring.from_int(ring.unit_param())).expect("u is a unit");
            ring.sub(ring.neg(ring.one()), ring.mul(u_inv, ring.uniformizer()))
        }
    }
}

impl PairingSpace {
    pub(crate) fn new(gamma: &Partition, ext: &ExtensionSpec) -> Result<Self> {
        let gamma = gamma.unclamped();
        let module = FiniteModule::new(ext, &gamma, gamma.largest())?;
        let ring = *module.scalars();
        let l = gamma.largest();
        let e = eta(&ring);
        let eta_l = (0..l).fold(ring.one(), |acc, _| ring.mul(acc, e));
        let socle = module.torsion(1).into_iter().filter(|&i| i != 0).map(|i| module.decode(i)).collect();
        let wide = if ext.p() == 2 && ext.kind().is_ramified() {
            let w = ext.with_truncation(l + 4)?;
            let ew = eta(&w);
            Some((w, (0..l).fold(w.one(), |acc, _| w.mul(acc, ew))))
        } else {
            None
        };
        Ok(PairingSpace { module, ring, eta_l, socle, wide })
    }

    fn r(&self) -> usize {
        self.module.rank()
    }

    fn twisted_conj(&self, c: RingElem) -> RingElem {
        self.ring.mul(self.eta_l, self.ring.sigma(c))
    }

    fn level(&self) -> u32 {
        self.module.parts().first().copied().unwrap_or(0)
    }

    fn candidates(&self, i: usize, j: usize) -> Vec<RingElem> {
        let parts = self.module.parts();
        let need = self.level() - parts[i].min(parts[j]);
        self.ring
            .elements()
            .filter(|&c| self.ring.valuation(c).is_none_or(|v| v >= need))
            .filter(|&c| i != j || (self.twisted_conj(c) == c && self.has_fixed_lift(c)))
            .collect()
    }

    /// `z = π^{−L} c` has a `σ`-fixed representative in `z + O` iff
    /// `σ(z) − z ∈ {σ(o) − o}`. Writing `σ(z) − z = π^{−L}(η^L σ(c) − c) = w`,
    /// `w` is anti-invariant, so `w = y·(θ − σ(θ))/2` for some `y ∈ Z_2`, and the
    /// condition is that `y` be even; `w` is needed modulo `π^4` only.
    fn has_fixed_lift(&self, c: RingElem) -> bool {
        let Some((w, eta_l)) = self.wide else { return true };
        let l = self.level();
        let diff = w.sub(w.mul(eta_l, w.sigma(c)), c);
        w.div_pi_pow(diff, l).is_some_and(|q| q.y % 2 == 0)
    }

    /// `Σ_j c_ij σ(y_j)` for every `i`; zero for all `i` means `δ(·, y) = 0`.
    fn kills(&self, values: &[RingElem], y: &[RingElem]) -> bool {
        let r = self.r();
        (0..r).all(|i| {
            let mut s = RingElem::ZERO;
            for (j, &yj) in y.iter().enumerate() {
                if !yj.is_zero() {
                    s = self.ring.add(s, self.ring.mul(values[i * r + j], self.ring.sigma(yj)));
                }
            }
            s.is_zero()
        })
    }

    /// Injectivity of `y ↦ δ(·, y)`. A nonzero kernel would contain a nonzero
    /// element killed by `π`, so the socle is scanned.
    pub(crate) fn is_perfect(&self, values: &[RingElem]) -> bool {
        self.socle.iter().all(|y| !self.kills(values, y))
    }

    pub(crate) fn is_hermitian(&self, values: &[RingElem]) -> bool {
        let r = self.r();
        (0..r).all(|i| (0..r).all(|j| values[j * r + i] == self.twisted_conj(values[i * r + j])))
    }

    /// `δ^f(x, y) = δ(f x, f y)`: `c'_ij = Σ_{k,l} a_ik σ(a_jl) c_kl` with
    /// `f(e_i) = Σ_k a_ik e_k`.
    pub(crate) fn transform(&self, values: &[RingElem], f: &[Vec<RingElem>]) -> Vec<RingElem> {
        let r = self.r();
        let ring = &self.ring;
        let mut out = vec![RingElem::ZERO; r * r];
        for i in 0..r {
            for j in 0..r {
                let mut s = RingElem::ZERO;
                for k in 0..r {
                    let a = f[i][k];
                    if a.is_zero() {
                        continue;
                    }
                    for l in 0..r {
                        let b = f[j][l];
                        if b.is_zero() {
                            continue;
                        }
                        s = ring.add(s, ring.mul(ring.mul(a, ring.sigma(b)), values[k * r + l]));
                    }
                }
                out[i * r + j] = s;
            }
        }
        out
    }

    fn all_perfect(&self, budget: Budget) -> Result<Vec<Vec<RingElem>>> {
        let mut out = Vec::new();
        self.for_each_perfect(budget, |v| out.push(v.to_vec()))?;
        Ok(out)
    }

    fn for_each_perfect(&self, budget: Budget, mut visit: impl FnMut(&[RingElem])) -> Result<()> {
        let r = self.r();
        let slots: Vec<(usize, usize)> = (0..r).flat_map(|i| (i..r).map(move |j| (i, j))).collect();
        let cands: Vec<Vec<RingElem>> = slots.iter().map(|&(i, j)| self.candidates(i, j)).collect();
        let tables: u128 = cands.iter().map(|c| c.len() as u128).product();
        budget.check(tables.saturating_mul(self.socle.len() as u128 + 1))?;
        let mut choice = vec![0usize; slots.len()];
        loop {
            let mut values = vec![RingElem::ZERO; r * r];
            for (s, &(i, j)) in slots.iter().enumerate() {
                let c = cands[s][choice[s]];
                values[i * r + j] = c;
                values[j * r + i] = self.twisted_conj(c);
            }
            if self.is_perfect(&values) {
                visit(&values);
            }
            let mut k = 0;
            loop {
                if k == slots.len() {
                    return Ok(());
                }
                choice[k] += 1;
                if choice[k] < cands[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }
}

/// All perfect Hermitian pairings on `Γ`.
pub fn perfect_hermitian_pairings(gamma: &Partition, ext: &ExtensionSpec, budget: Budget) -> Result<Vec<PairingTable>> {
    let space = PairingSpace::new(gamma, ext)?;
    let g = gamma.unclamped();
    Ok(space.all_perfect(budget)?.into_iter().map(|values| PairingTable { gamma: g.clone(), values }).collect())
}

/// `|Φ_Γ|`, the number of perfect Hermitian pairings on `Γ`.
pub fn count_perfect_hermitian_pairings(gamma: &Partition, ext: &ExtensionSpec, budget: Budget) -> Result<u128> {
    let space = PairingSpace::new(gamma, ext)?;
    let mut count = 0u128;
    space.for_each_perfect(budget, |_| count += 1)?;
    Ok(count)
}

/// `|Aut_O(Γ, δ)|`: module automorphisms preserving `δ` on generators.
pub fn count_pairing_preserving_automorphisms(
    delta: &PairingTable,
    ext: &ExtensionSpec,
    budget: Budget,
) -> Result<u128> {
    let space = PairingSpace::new(&delta.gamma, ext)?;
    let auts = enumerate_automorphisms(&space.module, budget)?;
    Ok(auts.iter().filter(|f| space.transform(&delta.values, f) == delta.values).count() as u128)
}

/// Splits `Φ_Γ` into `Aut(Γ)`-orbits, recording orbit and stabilizer sizes.
pub fn pairing_classes(gamma: &Partition, ext: &ExtensionSpec, budget: Budget) -> Result<PairingClasses> {
    let space = PairingSpace::new(gamma, ext)?;
    let all = space.all_perfect(budget)?;
    let auts = enumerate_automorphisms(&space.module, budget)?;
    let phi: HashSet<&Vec<RingElem>> = all.iter().collect();
    let mut seen: HashSet<Vec<RingElem>> = HashSet::new();
    let mut classes = Vec::new();
    let g = gamma.unclamped();
    for delta in &all {
        if seen.contains(delta) {
            continue;
        }
        let mut orbit: HashSet<Vec<RingElem>> = HashSet::new();
        let mut stabilizer = 0u128;
        for f in &auts {
            let image = space.transform(delta, f);
            debug_assert!(phi.contains(&image) && space.is_hermitian(&image));
            if &image == delta {
                stabilizer += 1;
            }
            orbit.insert(image);
        }
        classes.push(PairingClass {
            representative: PairingTable { gamma: g.clone(), values: delta.clone() },
            orbit_size: orbit.len() as u128,
            stabilizer,
        });
        seen.extend(orbit);
    }
    Ok(PairingClasses { gamma: g, perfect_pairings: all.len() as u128, automorphisms: auts.len() as u128, classes })
}
