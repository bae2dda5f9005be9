//! Exact predictions: finite-`n` and limiting cokernel probabilities, moments,
//! corank laws and counts of invertible Hermitian and symmetric matrices.
//!
//! Everything is evaluated in exact rationals; infinite products are cut after
//! `tail_terms` factors and carry a rigorous bound on the omitted tail.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::RwLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cokernel::{count_automorphisms, count_surjections};
use crate::error::{Error, Result};
use crate::oracles::{count_perfect_hermitian_pairings, Budget};
use crate::partition::Partition;
use crate::ring::{ExtensionKind, ExtensionSpec};

/// A real number with an absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Approx {
    pub value: f64,
    pub error: f64,
}

impl Approx {
    pub fn exact(value: f64) -> Self {
        Approx { value, error: 0.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairingCountSource {
    /// Run the enumerator on demand (results are memoized).
    Oracle,
    /// Only use counts already present in the cache.
    Cached,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingCacheEntry {
    pub kind: ExtensionKind,
    pub p: u64,
    pub gamma: Partition,
    pub count: u128,
    /// Work budget the enumeration ran under.
    pub budget: u128,
}

/// Persistent `|Φ_Γ|` table keyed by `(kind, p, Γ)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingCache {
    entries: BTreeMap<String, PairingCacheEntry>,
}

impl PairingCache {
    fn key(kind: ExtensionKind, p: u64, gamma: &Partition) -> String {
        format!("{kind}:{p}:{}", gamma.unclamped())
    }

    pub fn get(&self, kind: ExtensionKind, p: u64, gamma: &Partition) -> Option<&PairingCacheEntry> {
        self.entries.get(&Self::key(kind, p, gamma))
    }

    /// Inserts unless an entry exists; returns the stored entry.
    pub fn insert_if_absent(&mut self, entry: PairingCacheEntry) -> &PairingCacheEntry {
        self.entries.entry(Self::key(entry.kind, entry.p, &entry.gamma)).or_insert(entry)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = &PairingCacheEntry> {
        self.entries.values()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}

pub const MIN_TAIL_TERMS: usize = 20;

/// Exact law of a clamped cokernel, cell by cell.
pub type ClampedLaw = Vec<(Partition, BigRational)>;

/// Parameters shared by all predictions for one extension.
#[derive(Debug)]
pub struct TheoryContext {
    spec: ExtensionSpec,
    tail_terms: usize,
    source: PairingCountSource,
    budget: Budget,
    cache: RwLock<PairingCache>,
    clamped: RwLock<HashMap<(u32, u32), ClampedLaw>>,
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn p_pow_inv(p: u64, e: u32) -> BigRational {
    Pow::pow(rat(p), e).recip()
}

fn to_f64(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

fn to_biguint(v: BigRational, what: impl FnOnce() -> String) -> Result<BigUint> {
    if !v.is_integer() {
        return Err(Error::NonIntegral(what()));
    }
    v.to_integer().to_biguint().ok_or_else(|| Error::NonIntegral(what()))
}

/// `∏_{i=1}^{k} (1 + (−1)^i p^{−i})`.
fn alternating_product(p: u64, k: u32) -> BigRational {
    (1..=k).fold(BigRational::one(), |acc, i| {
        let t = p_pow_inv(p, i);
        acc * if i % 2 == 0 { BigRational::one() + t } else { BigRational::one() - t }
    })
}

/// `∏_{i=1}^{k} (1 − p^{1−2i})`.
fn odd_product(p: u64, k: u32) -> BigRational {
    (1..=k).fold(BigRational::one(), |acc, i| acc * (BigRational::one() - p_pow_inv(p, 2 * i - 1)))
}

/// `∏_{i=1}^{k} (1 − Q^{−i})`.
fn q_factorial_ratio(qq: u64, k: u32) -> BigRational {
    (1..=k).fold(BigRational::one(), |acc, i| acc * (BigRational::one() - p_pow_inv(qq, i)))
}

/// Gaussian binomial `[n choose r]_Q`.
fn gaussian_binomial(n: u32, r: u32, qq: u64) -> BigRational {
    if r > n {
        return BigRational::zero();
    }
    let num = (0..r).fold(BigRational::one(), |acc, i| acc * (Pow::pow(rat(qq), n - i) - BigRational::one()));
    let den = (0..r).fold(BigRational::one(), |acc, i| acc * (Pow::pow(rat(qq), i + 1) - BigRational::one()));
    num / den
}

/// Moment `E #Sur(cok X, G_μ)` of the limiting law: `p^{Σ (2i−1) μ_i}`
/// (unramified) or `p^{Σ ((i−1) μ_i + ⌊μ_i/2⌋)}` (ramified).
pub fn moment_closed_form(mu: &Partition, spec: &ExtensionSpec) -> BigUint {
    let e: u32 = mu
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &m)| if spec.kind().is_ramified() { i as u32 * m + m / 2 } else { (2 * i as u32 + 1) * m })
        .sum();
    BigUint::from(spec.p()).pow(e)
}

/// Invertible matrices in `H_n(F_{p²})`: `p^{n²} ∏_{i ≤ n} (1 + (−1)^i p^{−i})`.
pub fn count_invertible_hermitian(n: u32, p: u64) -> Result<BigUint> {
    let v = Pow::pow(rat(p), n * n) * alternating_product(p, n);
    to_biguint(v, || format!("hermitian count n={n} p={p}"))
}

/// Invertible symmetric `n × n` matrices over `F_p`:
/// `p^{n(n+1)/2} ∏_{i ≤ ⌈n/2⌉} (1 − p^{1−2i})`.
pub fn count_invertible_symmetric(n: u32, p: u64) -> Result<BigUint> {
    let v = Pow::pow(rat(p), n * (n + 1) / 2) * odd_product(p, n.div_ceil(2));
    to_biguint(v, || format!("symmetric count n={n} p={p}"))
}

impl TheoryContext {
    pub fn new(spec: ExtensionSpec, tail_terms: usize) -> Result<Self> {
        if tail_terms < MIN_TAIL_TERMS {
            return Err(Error::Config(format!("tail_terms must be at least {MIN_TAIL_TERMS}")));
        }
        Ok(TheoryContext {
            spec,
            tail_terms,
            source: PairingCountSource::Oracle,
            budget: Budget::default(),
            cache: RwLock::new(PairingCache::default()),
            clamped: RwLock::new(HashMap::new()),
        })
    }

    pub fn with_source(mut self, source: PairingCountSource) -> Self {
        self.source = source;
        self
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_cache(self, cache: PairingCache) -> Self {
        *self.cache.write().expect("cache lock") = cache;
        self
    }

    pub fn spec(&self) -> &ExtensionSpec {
        &self.spec
    }

    pub fn tail_terms(&self) -> usize {
        self.tail_terms
    }

    pub fn p(&self) -> u64 {
        self.spec.p()
    }

    pub fn q(&self) -> u64 {
        self.spec.q()
    }

    fn ramified(&self) -> bool {
        self.spec.kind().is_ramified()
    }

    pub fn cache_snapshot(&self) -> PairingCache {
        self.cache.read().expect("cache lock").clone()
    }

    /// `|Φ_Γ|`, from the cache or, with the oracle source, by enumeration.
    pub fn pairing_count(&self, gamma: &Partition) -> Result<u128> {
        let (kind, p) = (self.spec.kind(), self.spec.p());
        if let Some(e) = self.cache.read().expect("cache lock").get(kind, p, gamma) {
            return Ok(e.count);
        }
        if self.source == PairingCountSource::Cached {
            return Err(Error::PairingUnavailable(format!("{kind}, p = {p}, Γ = {}", gamma.unclamped())));
        }
        let ext = self.spec.with_truncation(1)?;
        let count = count_perfect_hermitian_pairings(gamma, &ext, self.budget)?;
        let entry = PairingCacheEntry { kind, p, gamma: gamma.unclamped(), count, budget: self.budget.max_work };
        Ok(self.cache.write().expect("cache lock").insert_if_absent(entry).count)
    }

    /// `|Φ_Γ| / |Aut_O(Γ)|`.
    pub fn pairing_weight(&self, gamma: &Partition) -> Result<BigRational> {
        let phi = self.pairing_count(gamma)?;
        let aut = count_automorphisms(gamma, self.q());
        Ok(BigRational::new(BigInt::from(phi), BigInt::from(aut)))
    }

    /// The `n`-dependent factor `∏_{j=n−r+1}^{n}(1 − Q^{−j}) · P_{n−r}` with
    /// `Q = p²` (unramified) or `Q = p` (ramified).
    fn finite_factor(&self, r: u32, n: u32) -> BigRational {
        let p = self.p();
        let k = n - r;
        if self.ramified() {
            let first = ((k + 1)..=n).fold(BigRational::one(), |acc, j| acc * (BigRational::one() - p_pow_inv(p, j)));
            first * odd_product(p, k.div_ceil(2))
        } else {
            let first =
                ((k + 1)..=n).fold(BigRational::one(), |acc, j| acc * (BigRational::one() - p_pow_inv(p, 2 * j)));
            first * alternating_product(p, k)
        }
    }

    /// Exact probability that the cokernel of an `n × n` Haar-random
    /// Hermitian matrix is isomorphic to `Γ`.
    pub fn finite_n_haar_probability(&self, gamma: &Partition, n: u32) -> Result<BigRational> {
        let r = gamma.len() as u32;
        if r > n {
            return Ok(BigRational::zero());
        }
        Ok(self.pairing_weight(gamma)? * self.finite_factor(r, n))
    }

    /// `∏_{i ≥ 1}` of the limiting factor, with a bound on the omitted tail.
    /// The tail `∏_{i > K}(1 + x_i)` satisfies `|log| ≤ S / (1 − |x_{K+1}|)`
    /// with `S = Σ_{i>K} |x_i|`, a geometric sum.
    pub fn limit_product(&self) -> Approx {
        let p = self.p() as f64;
        let k = self.tail_terms as u32;
        let (partial, s, first) = if self.ramified() {
            let first = p.powi(1 - 2 * (k as i32 + 1));
            (odd_product(self.p(), k), first / (1.0 - p.powi(-2)), first)
        } else {
            let first = p.powi(-(k as i32 + 1));
            (alternating_product(self.p(), k), first / (1.0 - 1.0 / p), first)
        };
        let v = to_f64(&partial);
        let log_bound = s / (1.0 - first);
        Approx { value: v, error: v * log_bound.exp_m1() + f64::EPSILON * v }
    }

    /// Limiting probability of `Γ` as `n → ∞`.
    pub fn limiting_probability(&self, gamma: &Partition) -> Result<Approx> {
        let w = to_f64(&self.pairing_weight(gamma)?);
        let prod = self.limit_product();
        Ok(Approx { value: w * prod.value, error: w * prod.error + f64::EPSILON * w })
    }

    /// Exact probability that an `n × n` Haar-random Hermitian matrix has
    /// residue corank `r`: `[n, r]_Q · inv(n − r) / |H_n(κ)|`.
    pub fn corank_probability(&self, r: u32, n: u32) -> Result<BigRational> {
        if r > n {
            return Ok(BigRational::zero());
        }
        let p = self.p();
        let (qq, inv, total) = if self.ramified() {
            (p, count_invertible_symmetric(n - r, p)?, Pow::pow(rat(p), n * (n + 1) / 2))
        } else {
            (p * p, count_invertible_hermitian(n - r, p)?, Pow::pow(rat(p), n * n))
        };
        Ok(gaussian_binomial(n, r, qq) * rat(inv) / total)
    }

    /// Limit of [`corank_probability`](Self::corank_probability):
    /// `p^{−r²} / ∏_{i ≤ r}(1 − p^{−2i})` (unramified) or
    /// `p^{−r(r+1)/2} / ∏_{i ≤ r}(1 − p^{−i})` (ramified), times the limit product.
    pub fn corank_limit(&self, r: u32) -> Approx {
        let p = self.p();
        let w = if self.ramified() {
            p_pow_inv(p, r * (r + 1) / 2) / q_factorial_ratio(p, r)
        } else {
            p_pow_inv(p, r * r) / q_factorial_ratio(p * p, r)
        };
        let w = to_f64(&w);
        let prod = self.limit_product();
        Approx { value: w * prod.value, error: w * prod.error + f64::EPSILON * w }
    }

    /// `E #Sur(cok X_n, G_μ)` for `n × n` Haar matrices: the limiting moment
    /// times `#Sur(O^n, G_μ) / |G_μ|^n`.
    pub fn finite_n_moment(&self, mu: &Partition, n: u32) -> Result<BigRational> {
        let q = self.q();
        let a = mu.largest().max(1);
        let free = Partition::new(vec![a; n as usize]);
        let sur = count_surjections(&free, mu, q)?;
        let order = Pow::pow(rat(mu.order(q)), n);
        Ok(rat(moment_closed_form(mu, &self.spec)) * rat(sur) / order)
    }

    /// Exact law of `cok(X_n) ⊗ O/π^a` for Haar `X_n`, recovered from the
    /// finite-`n` moments: `E #Sur(cok, G) = Σ_H P(H) #Sur(H, G)` is
    /// triangular in the containment order, with `#Aut(G)` on the diagonal.
    /// Cells are the types with at most `n` parts, all at most `a`.
    pub fn clamped_distribution(&self, n: u32, a: u32) -> Result<ClampedLaw> {
        if a == 0 {
            return Err(Error::Config("clamp must be at least 1".into()));
        }
        if let Some(d) = self.clamped.read().expect("cache lock").get(&(n, a)) {
            return Ok(d.clone());
        }
        let q = self.q();
        let mut cells = Partition::enumerate(a, n as usize);
        cells.sort_by_key(|g| std::cmp::Reverse(g.size()));
        let mut probs: Vec<BigRational> = Vec::with_capacity(cells.len());
        for (k, g) in cells.iter().enumerate() {
            let mut rest = self.finite_n_moment(g, n)?;
            for (h, ph) in cells[..k].iter().zip(&probs) {
                if ph.is_zero() || h.size() == g.size() || !g.is_contained_in(h) {
                    continue;
                }
                rest -= ph * rat(count_surjections(h, g, q)?);
            }
            probs.push(rest / rat(count_automorphisms(g, q)));
        }
        let out: Vec<(Partition, BigRational)> = cells.into_iter().map(|g| g.clamped(a)).zip(probs).collect();
        self.clamped.write().expect("cache lock").insert((n, a), out.clone());
        Ok(out)
    }

    /// Theory for a clamped cell `cok ⊗ O/π^a ≅ G_cell`. A cell whose parts
    /// are all below `a` is the single module `G_cell`, with a limit; for
    /// `a = 1` the cell is a residue corank, also with a limit; other cells
    /// come from [`clamped_distribution`](Self::clamped_distribution) and
    /// carry no limit.
    pub fn cell_probability(&self, cell: &Partition, n: u32) -> Result<Option<(BigRational, Option<Approx>)>> {
        let Some(a) = cell.clamp_level() else {
            let g = cell.clone();
            return Ok(Some((self.finite_n_haar_probability(&g, n)?, Some(self.limiting_probability(&g)?))));
        };
        if cell.len() as u32 > n {
            return Ok(Some((BigRational::zero(), None)));
        }
        if cell.largest() < a {
            let g = cell.unclamped();
            return Ok(Some((self.finite_n_haar_probability(&g, n)?, Some(self.limiting_probability(&g)?))));
        }
        if a == 1 {
            let r = cell.len() as u32;
            return Ok(Some((self.corank_probability(r, n)?, Some(self.corank_limit(r)))));
        }
        let dist = self.clamped_distribution(n, a)?;
        Ok(dist.into_iter().find(|(c, _)| c == cell).map(|(_, p)| (p, None)))
    }
}

/// One line of the `theory` table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TheoryRow {
    pub gamma: Partition,
    pub pairings: u128,
    pub automorphisms: String,
    pub finite_n: f64,
    pub finite_n_exact: String,
    pub limit: f64,
    pub tail_error: f64,
}

pub fn theory_table(ctx: &TheoryContext, gammas: &[Partition], n: u32) -> Result<Vec<TheoryRow>> {
    gammas
        .iter()
        .map(|g| {
            let finite = ctx.finite_n_haar_probability(g, n)?;
            let lim = ctx.limiting_probability(g)?;
            Ok(TheoryRow {
                gamma: g.clone(),
                pairings: ctx.pairing_count(g)?,
                automorphisms: count_automorphisms(g, ctx.q()).to_string(),
                finite_n: to_f64(&finite),
                finite_n_exact: finite.to_string(),
                limit: lim.value,
                tail_error: lim.error,
            })
        })
        .collect()
}
