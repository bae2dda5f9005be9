//! Deterministic parallel Monte Carlo over cokernel types, joined with the
//! exact predictions of [`closed_forms`](crate::closed_forms).
//!
//! Sample `i` of a run draws from the ChaCha stream `(seed, i)`, so counts do
//! not depend on the number of worker threads or on scheduling.

pub mod report;
pub mod stats;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_forms::{moment_closed_form, Approx, TheoryContext};
use crate::cokernel::{cokernel_type, count_surjections};
use crate::error::{Error, Result};
use crate::oracles::Budget;
use crate::partition::Partition;
use crate::ring::{ExtensionKind, ExtensionSpec};
use crate::sampler::{sample_stream, Sampler};

pub use report::{
    CellRow, DistributionRun, ExperimentKind, ExperimentReport, MomentRow, MomentRun, ReportFormat, SweepPoint,
    SweepSummary, TvSummary,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub p: u64,
    pub kind: ExtensionKind,
    pub unit_param: i64,
    /// Matrix sizes; a single entry for `dist` and `moments`.
    pub n_ladder: Vec<u32>,
    pub clamp: u32,
    /// Working truncation `M`; defaults to the clamp.
    pub trunc: Option<u32>,
    pub samples: u64,
    pub samplers: Vec<Sampler>,
    pub seed: u64,
    pub threads: Option<usize>,
    pub tail_terms: usize,
    /// Cells with all parts below the clamp are listed with their theory
    /// even when unobserved, up to this module order.
    pub theory_max_order: u64,
    pub oracle_budget: u128,
    pub output: Option<PathBuf>,
    pub format: ReportFormat,
}

impl ExperimentConfig {
    pub fn new(p: u64, kind: ExtensionKind, n: u32) -> Self {
        ExperimentConfig {
            p,
            kind,
            unit_param: 1,
            n_ladder: vec![n],
            clamp: 1,
            trunc: None,
            samples: 1000,
            samplers: vec![Sampler::Haar],
            seed: 0,
            threads: None,
            tail_terms: 40,
            theory_max_order: 1024,
            oracle_budget: 1 << 28,
            output: None,
            format: ReportFormat::Json,
        }
    }

    pub fn spec(&self) -> Result<ExtensionSpec> {
        ExtensionSpec::new(self.p, self.kind, self.unit_param, self.trunc.unwrap_or(self.clamp))
    }

    pub fn validate(&self) -> Result<ExtensionSpec> {
        if self.clamp == 0 {
            return Err(Error::Config("clamp must be at least 1".into()));
        }
        if self.trunc.is_some_and(|m| m < self.clamp) {
            return Err(Error::Config(format!("clamp {} exceeds truncation {}", self.clamp, self.trunc.unwrap_or(0))));
        }
        if self.samples == 0 {
            return Err(Error::Config("need at least one sample".into()));
        }
        if self.n_ladder.is_empty() || self.n_ladder.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("n ladder must be non-empty and strictly increasing".into()));
        }
        if self.samplers.is_empty() {
            return Err(Error::Config("no sampler given".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be positive".into()));
        }
        let spec = self.spec()?;
        for s in &self.samplers {
            s.validate(&spec)?;
        }
        Ok(spec)
    }

    fn theory(&self, spec: &ExtensionSpec) -> Result<TheoryContext> {
        Ok(TheoryContext::new(*spec, self.tail_terms)?.with_budget(Budget::new(self.oracle_budget)))
    }

    fn in_pool<T: Send>(&self, job: impl FnOnce() -> T + Send) -> Result<T> {
        match self.threads {
            Some(t) => {
                let pool =
                    rayon::ThreadPoolBuilder::new().num_threads(t).build().map_err(|e| Error::Config(e.to_string()))?;
                Ok(pool.install(job))
            }
            None => Ok(job()),
        }
    }
}

/// Histogram of `cok(X) ⊗ O/π^a` over samples `0..samples`.
pub fn sample_cell_counts(
    spec: &ExtensionSpec,
    sampler: &Sampler,
    n: u32,
    clamp: u32,
    samples: u64,
    seed: u64,
) -> Result<BTreeMap<Partition, u64>> {
    (0..samples)
        .into_par_iter()
        .try_fold(BTreeMap::new, |mut acc, idx| {
            let x = sampler.sample(spec, n as usize, &mut sample_stream(seed, idx))?;
            *acc.entry(cokernel_type(&x, clamp)?).or_insert(0u64) += 1;
            Ok::<_, Error>(acc)
        })
        .try_reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            Ok(a)
        })
}

fn ratio_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn theory_cells(cfg: &ExperimentConfig, n: u32, q: u64) -> Vec<Partition> {
    let a = cfg.clamp;
    if a == 1 {
        return (0..=n).map(|r| Partition::new(vec![1; r as usize]).clamped(1)).collect();
    }
    Partition::enumerate(a - 1, n as usize)
        .into_iter()
        .filter(|g| g.order(q) <= BigUint::from(cfg.theory_max_order))
        .map(|g| g.clamped(a))
        .collect()
}

/// Theory for a cell, with oracle size limits turned into "no theory".
fn cell_theory(ctx: &TheoryContext, cell: &Partition, n: u32) -> Result<Option<(BigRational, Option<Approx>)>> {
    match ctx.cell_probability(cell, n) {
        Ok(v) => Ok(v),
        Err(Error::BudgetExceeded { .. } | Error::InstanceTooLarge(_) | Error::PairingUnavailable(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn distribution_run(
    cfg: &ExperimentConfig,
    spec: &ExtensionSpec,
    ctx: &TheoryContext,
    sampler: &Sampler,
    n: u32,
) -> Result<DistributionRun> {
    let counts = cfg.in_pool(|| sample_cell_counts(spec, sampler, n, cfg.clamp, cfg.samples, cfg.seed))??;
    let total = cfg.samples;
    let mut keys: Vec<Partition> = counts.keys().cloned().collect();
    for c in theory_cells(cfg, n, spec.q()) {
        if !counts.contains_key(&c) {
            keys.push(c);
        }
    }
    keys.sort();
    let mut cells = Vec::with_capacity(keys.len());
    for cell in keys {
        let count = counts.get(&cell).copied().unwrap_or(0);
        let freq = count as f64 / total as f64;
        let (lo, hi) = stats::wilson_interval(count, total, stats::Z95);
        let theory = cell_theory(ctx, &cell, n)?;
        let (se, z, finite, finite_exact, limit, limit_err) = match &theory {
            Some((f, l)) => {
                let fv = ratio_f64(f);
                let se = stats::binomial_se(fv, total);
                let z = if se > 0.0 { Some((freq - fv) / se) } else { None };
                (se, z, Some(fv), Some(f.to_string()), l.map(|l| l.value), l.map(|l| l.error))
            }
            None => (stats::binomial_se(freq, total), None, None, None, None, None),
        };
        cells.push(CellRow {
            cell,
            count,
            frequency: freq,
            frequency_exact: format!("{count}/{total}"),
            wilson_low: lo,
            wilson_high: hi,
            se,
            theory_finite_n: finite,
            theory_finite_n_exact: finite_exact,
            theory_limit: limit,
            theory_limit_error: limit_err,
            z_score: z,
        });
    }
    let tv = tv_summary(&cells, total);
    let chi = {
        let with: Vec<&CellRow> = cells.iter().filter(|c| c.theory_finite_n.is_some()).collect();
        let mut obs: Vec<u64> = with.iter().map(|c| c.count).collect();
        let mut probs: Vec<f64> = with.iter().map(|c| c.theory_finite_n.unwrap_or(0.0)).collect();
        obs.push(total - obs.iter().sum::<u64>());
        probs.push((1.0 - probs.iter().sum::<f64>()).max(0.0));
        stats::chi_square(&obs, &probs)
    };
    Ok(DistributionRun { sampler: sampler.label(), n, samples: total, cells, tv, chi_square: chi })
}

/// TV against the limit over the cells carrying theory plus one pooled
/// "rest" cell.
fn tv_summary(cells: &[CellRow], total: u64) -> Option<TvSummary> {
    let with: Vec<&CellRow> = cells.iter().filter(|c| c.theory_limit.is_some()).collect();
    if with.is_empty() {
        return None;
    }
    let mut emp: Vec<f64> = with.iter().map(|c| c.frequency).collect();
    let mut th: Vec<f64> = with.iter().map(|c| c.theory_limit.unwrap_or(0.0)).collect();
    let theory_mass: f64 = th.iter().sum();
    let rest_emp = with.iter().map(|c| c.count).sum::<u64>();
    let rest_emp = (total - rest_emp) as f64 / total as f64;
    let rest_th = (1.0 - theory_mass).max(0.0);
    emp.push(rest_emp);
    th.push(rest_th);
    let (value, se) = stats::total_variation(&emp, &th, total);
    let theory_error: f64 = with.iter().map(|c| c.theory_limit_error.unwrap_or(0.0)).sum();
    Some(TvSummary { value, se, theory_error, theory_mass, rest_empirical: rest_emp, rest_theory: rest_th })
}

/// `cok(X) ⊗ O/π^a` frequencies for every sampler and matrix size.
pub fn run_distribution_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let start = Instant::now();
    let spec = cfg.validate()?;
    let ctx = cfg.theory(&spec)?;
    let mut runs = Vec::new();
    for sampler in &cfg.samplers {
        for &n in &cfg.n_ladder {
            runs.push(distribution_run(cfg, &spec, &ctx, sampler, n)?);
        }
    }
    let mut report = ExperimentReport::new(ExperimentKind::Distribution, cfg.clone());
    report.distributions = runs;
    report.runtime_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Sample means of `#Sur(cok X, G_μ)`. The clamp must be at least the largest
/// part of every target, since then the count only depends on `cok ⊗ O/π^a`.
pub fn run_moment_experiment(cfg: &ExperimentConfig, targets: &[Partition]) -> Result<ExperimentReport> {
    let start = Instant::now();
    let spec = cfg.validate()?;
    if let Some(mu) = targets.iter().find(|mu| mu.largest() > cfg.clamp) {
        return Err(Error::Config(format!("clamp {} is below the largest part of {mu}", cfg.clamp)));
    }
    let ctx = cfg.theory(&spec)?;
    let q = spec.q();
    let mut runs = Vec::new();
    for sampler in &cfg.samplers {
        for &n in &cfg.n_ladder {
            let counts = cfg.in_pool(|| sample_cell_counts(&spec, sampler, n, cfg.clamp, cfg.samples, cfg.seed))??;
            let total = BigInt::from(cfg.samples);
            let mut rows = Vec::new();
            for mu in targets {
                let mu = mu.unclamped();
                let (mut s1, mut s2) = (BigInt::zero(), BigInt::zero());
                for (cell, &c) in &counts {
                    let sur = BigInt::from(count_surjections(&cell.unclamped(), &mu, q)?);
                    s1 += &sur * c;
                    s2 += &sur * &sur * c;
                }
                let mean = BigRational::new(s1.clone(), total.clone());
                let second = BigRational::new(s2, total.clone());
                let var = &second - &mean * &mean;
                let nf = cfg.samples as f64;
                // unbiased sample variance
                let var_f = ratio_f64(&var) * nf / (nf - 1.0).max(1.0);
                let se = (var_f.max(0.0) / nf).sqrt();
                let limit = moment_closed_form(&mu, &spec);
                let finite = ctx.finite_n_moment(&mu, n)?;
                let mean_f = ratio_f64(&mean);
                let finite_f = ratio_f64(&finite);
                let limit_f = limit.to_f64().unwrap_or(f64::NAN);
                rows.push(MomentRow {
                    mu: mu.clone(),
                    mean: mean_f,
                    mean_exact: mean.to_string(),
                    se,
                    closed_form: limit_f,
                    closed_form_exact: limit.to_string(),
                    finite_n: finite_f,
                    finite_n_exact: finite.to_string(),
                    relative_error: (mean_f - limit_f).abs() / limit_f,
                    z_score: (se > 0.0).then(|| (mean_f - finite_f) / se),
                });
            }
            runs.push(MomentRun { sampler: sampler.label(), n, samples: cfg.samples, moments: rows });
        }
    }
    let mut report = ExperimentReport::new(ExperimentKind::Moments, cfg.clone());
    report.moments = runs;
    report.runtime_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Distribution runs for every sampler along the ladder, summarized as TV
/// distances to the limit. A sampler's trend counts as non-increasing when
/// each step satisfies `TV_{k+1} ≤ TV_k + 2·sqrt(SE_k² + SE_{k+1}²)`.
pub fn run_universality_sweep(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    if cfg.samplers.len() < 2 {
        return Err(Error::Config("a sweep compares at least two samplers".into()));
    }
    if cfg.n_ladder.len() < 2 {
        return Err(Error::Config("a sweep needs at least two matrix sizes".into()));
    }
    let mut report = run_distribution_experiment(cfg)?;
    report.experiment = ExperimentKind::Sweep;
    let mut sweep = Vec::new();
    for sampler in &cfg.samplers {
        let label = sampler.label();
        let points: Vec<SweepPoint> = report
            .distributions
            .iter()
            .filter(|r| r.sampler == label)
            .map(|r| {
                let tv = r.tv.as_ref();
                SweepPoint {
                    n: r.n,
                    tv: tv.map_or(f64::NAN, |t| t.value),
                    se: tv.map_or(f64::NAN, |t| t.se),
                    theory_error: tv.map_or(f64::NAN, |t| t.theory_error),
                }
            })
            .collect();
        let non_increasing = points.windows(2).all(|w| w[1].tv <= w[0].tv + 2.0 * w[0].se.hypot(w[1].se));
        sweep.push(SweepSummary { sampler: label, points, non_increasing });
    }
    report.sweep = sweep;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_sample_is_one_cell() {
        let mut cfg = ExperimentConfig::new(2, ExtensionKind::Unramified, 3);
        cfg.samples = 1;
        let r = run_distribution_experiment(&cfg).unwrap();
        let observed: Vec<&CellRow> = r.distributions[0].cells.iter().filter(|c| c.count > 0).collect();
        assert_eq!(observed.len(), 1);
        assert_eq!(observed[0].frequency, 1.0);
    }

    #[test]
    fn empty_target_has_unit_moment() {
        let mut cfg = ExperimentConfig::new(3, ExtensionKind::RamifiedOdd, 4);
        cfg.samples = 200;
        let r = run_moment_experiment(&cfg, &[Partition::empty()]).unwrap();
        let m = &r.moments[0].moments[0];
        assert_eq!((m.mean_exact.as_str(), m.se), ("1", 0.0));
        assert!(run_moment_experiment(&cfg, &[Partition::new(vec![2])]).is_err());
    }

    #[test]
    fn config_checks() {
        let mut cfg = ExperimentConfig::new(2, ExtensionKind::Unramified, 3);
        cfg.trunc = Some(1);
        cfg.clamp = 2;
        assert!(cfg.validate().is_err());
        let mut cfg = ExperimentConfig::new(2, ExtensionKind::Unramified, 3);
        cfg.samples = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = ExperimentConfig::new(2, ExtensionKind::RamifiedOdd, 3);
        cfg.samples = 1;
        assert!(cfg.validate().is_err());
    }
}
