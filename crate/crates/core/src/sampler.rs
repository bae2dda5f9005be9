//! Random Hermitian matrices: Haar measure and ε-balanced digit laws.
//!
//! The free digits are `Y_ij` (`i ≤ j`, the `x`-digits) and `Z_ij` (`i < j`,
//! the `y`-digits); everything else follows from `A = σ(Aᵗ)`. Digits are
//! drawn in row-major order over `i ≤ j`, `Y_ij` before `Z_ij`, from a
//! ChaCha stream selected by `(seed, sample_index)`, so a sample depends only
//! on its index and never on scheduling.

use std::fmt;
use std::str::FromStr;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::HermitianMatrix;
use crate::ring::{ExtensionSpec, RingElem};

/// RNG for sample number `index` of a run seeded with `seed`.
pub fn sample_stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Law of a `p`-adic digit whose residue mod `p` follows `residue_probs` and
/// whose higher digits are uniform.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct EntryDistribution {
    residue_probs: Vec<f64>,
    epsilon: f64,
    index: WeightedIndex<f64>,
}

impl PartialEq for EntryDistribution {
    fn eq(&self, other: &Self) -> bool {
        self.residue_probs == other.residue_probs
    }
}

impl EntryDistribution {
    pub fn new(residue_probs: Vec<f64>) -> Result<Self> {
        if residue_probs.len() < 2 {
            return Err(Error::Distribution("need at least two residues".into()));
        }
        if residue_probs.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
            return Err(Error::Distribution("probabilities must lie in [0, 1]".into()));
        }
        let total: f64 = residue_probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Distribution(format!("probabilities sum to {total}")));
        }
        let max = residue_probs.iter().copied().fold(0.0, f64::max);
        let epsilon = 1.0 - max;
        if epsilon <= 0.0 {
            return Err(Error::Distribution("a residue has probability 1".into()));
        }
        let index = WeightedIndex::new(&residue_probs).map_err(|e| Error::Distribution(e.to_string()))?;
        Ok(EntryDistribution { residue_probs, epsilon, index })
    }

    pub fn uniform(p: u64) -> Self {
        EntryDistribution::new(vec![1.0 / p as f64; p as usize]).expect("uniform law is valid")
    }

    pub fn residue_probs(&self) -> &[f64] {
        &self.residue_probs
    }

    /// Largest `ε` with every residue probability at most `1 − ε`.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn modulus(&self) -> u64 {
        self.residue_probs.len() as u64
    }

    /// A digit in `Z/modulus`, where `modulus` is a power of `p`.
    pub fn sample_digit<R: Rng + ?Sized>(&self, modulus: u64, rng: &mut R) -> u64 {
        let p = self.modulus();
        if modulus == 1 {
            return 0;
        }
        let r = self.index.sample(rng) as u64;
        r + p * rng.random_range(0..modulus / p)
    }
}

impl TryFrom<Vec<f64>> for EntryDistribution {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        EntryDistribution::new(v)
    }
}

impl From<EntryDistribution> for Vec<f64> {
    fn from(d: EntryDistribution) -> Self {
        d.residue_probs
    }
}

impl FromStr for EntryDistribution {
    type Err = Error;

    /// `"r0:p0,r1:p1,..."`; residues not listed get probability 0, so the
    /// residue count is one more than the largest listed residue. A JSON
    /// array of probabilities is accepted as well.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('[') {
            let v: Vec<f64> = serde_json::from_str(s)?;
            return EntryDistribution::new(v);
        }
        let mut pairs = Vec::new();
        for tok in s.split(',') {
            let (r, p) =
                tok.split_once(':').ok_or_else(|| Error::Distribution(format!("expected r:p, got `{tok}`")))?;
            let r: usize = r.trim().parse().map_err(|_| Error::Distribution(format!("bad residue `{r}`")))?;
            let p: f64 = p.trim().parse().map_err(|_| Error::Distribution(format!("bad probability `{p}`")))?;
            pairs.push((r, p));
        }
        let len = pairs.iter().map(|&(r, _)| r + 1).max().unwrap_or(0);
        let mut probs = vec![0.0; len];
        for (r, p) in pairs {
            if probs[r] != 0.0 {
                return Err(Error::Distribution(format!("residue {r} listed twice")));
            }
            probs[r] = p;
        }
        EntryDistribution::new(probs)
    }
}

impl fmt::Display for EntryDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.residue_probs.iter().enumerate().map(|(r, p)| format!("{r}:{p}")).collect();
        f.write_str(&s.join(","))
    }
}

/// Haar-random Hermitian matrix: free digits independent and uniform.
pub fn sample_haar<R: Rng + ?Sized>(spec: &ExtensionSpec, n: usize, rng: &mut R) -> HermitianMatrix {
    let (mx, my) = (spec.modulus_x(), spec.modulus_y());
    let mut diag = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        diag.push(rng.random_range(0..mx));
        for _ in i + 1..n {
            let x = rng.random_range(0..mx);
            let y = rng.random_range(0..my);
            upper.push(RingElem { x, y });
        }
    }
    HermitianMatrix::from_free_entries(*spec, n, &diag, &upper)
}

/// Hermitian matrix whose free digits have residues mod `p` drawn from
/// `dist_y` (for `Y`) and `dist_z` (for `Z`), higher digits uniform.
pub fn sample_eps_balanced<R: Rng + ?Sized>(
    spec: &ExtensionSpec,
    n: usize,
    dist_y: &EntryDistribution,
    dist_z: &EntryDistribution,
    rng: &mut R,
) -> Result<HermitianMatrix> {
    for d in [dist_y, dist_z] {
        if d.modulus() != spec.p() {
            return Err(Error::Distribution(format!("{} residues given for p = {}", d.modulus(), spec.p())));
        }
    }
    let (mx, my) = (spec.modulus_x(), spec.modulus_y());
    let mut diag = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        diag.push(dist_y.sample_digit(mx, rng));
        for _ in i + 1..n {
            let x = dist_y.sample_digit(mx, rng);
            let y = dist_z.sample_digit(my, rng);
            upper.push(RingElem { x, y });
        }
    }
    Ok(HermitianMatrix::from_free_entries(*spec, n, &diag, &upper))
}

/// Entry law selector used by the experiment harness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Sampler {
    Haar,
    Eps { dist_y: EntryDistribution, dist_z: EntryDistribution },
}

impl Sampler {
    pub fn label(&self) -> String {
        match self {
            Sampler::Haar => "haar".into(),
            Sampler::Eps { dist_y, dist_z } => format!("eps[y={dist_y};z={dist_z}]"),
        }
    }

    pub fn validate(&self, spec: &ExtensionSpec) -> Result<()> {
        if let Sampler::Eps { dist_y, dist_z } = self {
            for d in [dist_y, dist_z] {
                if d.modulus() != spec.p() {
                    return Err(Error::Distribution(format!("{} residues given for p = {}", d.modulus(), spec.p())));
                }
            }
        }
        Ok(())
    }

    pub fn sample<R: Rng + ?Sized>(&self, spec: &ExtensionSpec, n: usize, rng: &mut R) -> Result<HermitianMatrix> {
        match self {
            Sampler::Haar => Ok(sample_haar(spec, n, rng)),
            Sampler::Eps { dist_y, dist_z } => sample_eps_balanced(spec, n, dist_y, dist_z, rng),
        }
    }
}
