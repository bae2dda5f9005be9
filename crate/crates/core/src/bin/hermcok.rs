use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use hermitian_cokernels::classify::{classify, verify_congruence};
use hermitian_cokernels::closed_forms::{theory_table, PairingCache, PairingCountSource, TheoryContext};
use hermitian_cokernels::cokernel::cokernel_type;
use hermitian_cokernels::experiment::{
    run_distribution_experiment, run_moment_experiment, run_universality_sweep, ExperimentConfig, ExperimentReport,
    ReportFormat,
};
use hermitian_cokernels::oracles::{
    automorphisms_by_extension, brute_force_automorphisms, brute_force_invertible_count,
    count_perfect_hermitian_pairings, exhaustive_character_check, Budget, MatrixField,
};
use hermitian_cokernels::sampler::{EntryDistribution, Sampler};
use hermitian_cokernels::{ExtensionKind, ExtensionSpec, HermitianMatrix, Matrix, Partition};

#[derive(Parser)]
#[command(name = "hermcok", version, about = "Cokernels of random Hermitian matrices over quadratic p-adic rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Empirical law of cok ⊗ O/π^a against exact predictions.
    Dist(Common),
    /// Empirical moments E #Sur(cok, G_μ).
    Moments {
        #[command(flatten)]
        common: Common,
        /// Target module types, e.g. `1`, `1.1`, `2`.
        #[arg(long = "mu", required = true)]
        mu: Vec<Partition>,
    },
    /// Haar and ε-balanced samplers along an n ladder, as TV distances.
    Sweep(Common),
    /// Table of |Φ_Γ|, |Aut Γ|, finite-n and limiting probabilities.
    Theory {
        #[command(flatten)]
        ext: ExtArgs,
        #[arg(long, default_value_t = 8)]
        n: u32,
        /// Γ ranges over types with parts below the clamp.
        #[arg(long, default_value_t = 2)]
        clamp: u32,
        #[arg(long, default_value_t = 256)]
        max_order: u64,
        #[arg(long, default_value_t = 40)]
        tail_terms: usize,
        /// JSON cache of pairing counts, read and updated.
        #[arg(long)]
        pairing_cache: Option<PathBuf>,
        /// Only use cached pairing counts.
        #[arg(long)]
        cached_only: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive enumerators.
    Oracle {
        #[command(subcommand)]
        which: OracleCmd,
    },
    /// Congruence normal form of a Hermitian matrix read from JSON.
    Classify {
        #[command(flatten)]
        ext: ExtArgs,
        #[arg(long)]
        trunc: u32,
        /// Rows of `{"x": .., "y": ..}` entries.
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cokernel type of a matrix read from JSON.
    Snf {
        #[command(flatten)]
        ext: ExtArgs,
        #[arg(long)]
        trunc: u32,
        #[arg(long)]
        clamp: Option<u32>,
        #[arg(long)]
        matrix: PathBuf,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Perfect Hermitian pairings on Γ.
    Pairings {
        #[command(flatten)]
        ext: ExtArgs,
        #[arg(long)]
        gamma: Partition,
        #[arg(long, default_value_t = Budget::DEFAULT_WORK)]
        budget: u128,
    },
    /// Automorphisms of G_μ over a DVR with residue field of size q.
    Auts {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        mu: Partition,
        #[arg(long, default_value_t = Budget::DEFAULT_WORK)]
        budget: u128,
    },
    /// Invertible Hermitian (over F_{p²}) or symmetric (over F_p) matrices.
    Invertible {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Field::Hermitian)]
        field: Field,
        #[arg(long, default_value_t = Budget::DEFAULT_WORK)]
        budget: u128,
    },
    /// Character-sum indicator against the direct test, exhaustively.
    Charsum {
        #[command(flatten)]
        ext: ExtArgs,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value = "1")]
        gamma: Partition,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Field {
    Hermitian,
    Symmetric,
}

#[derive(Clone, Copy, ValueEnum)]
enum SamplerArg {
    Haar,
    Eps,
}

#[derive(Args, Clone)]
struct ExtArgs {
    #[arg(long)]
    p: u64,
    #[arg(long = "ext", default_value = "unram")]
    kind: ExtensionKind,
    #[arg(long, default_value_t = 1)]
    unit_param: i64,
}

impl ExtArgs {
    fn spec(&self, trunc: u32) -> anyhow::Result<ExtensionSpec> {
        Ok(ExtensionSpec::new(self.p, self.kind, self.unit_param, trunc)?)
    }
}

#[derive(Args, Clone)]
struct Common {
    #[command(flatten)]
    ext: ExtArgs,
    #[arg(long)]
    n: Option<u32>,
    /// Comma-separated matrix sizes, e.g. `4,8,16`.
    #[arg(long, value_delimiter = ',')]
    n_ladder: Vec<u32>,
    #[arg(long, default_value_t = 1)]
    clamp: u32,
    #[arg(long)]
    trunc: Option<u32>,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, value_enum, default_value_t = SamplerArg::Haar)]
    sampler: SamplerArg,
    /// Residue law of the x-digits, e.g. `0:0.7,1:0.3`.
    #[arg(long)]
    dist_y: Option<EntryDistribution>,
    /// Residue law of the y-digits.
    #[arg(long)]
    dist_z: Option<EntryDistribution>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: ReportFormat,
}

impl Common {
    fn eps_sampler(&self) -> anyhow::Result<Sampler> {
        let (Some(y), Some(z)) = (self.dist_y.clone(), self.dist_z.clone()) else {
            bail!("the eps sampler needs --dist-y and --dist-z");
        };
        Ok(Sampler::Eps { dist_y: y, dist_z: z })
    }

    fn config(&self, sweep: bool) -> anyhow::Result<ExperimentConfig> {
        let ladder = match (self.n, self.n_ladder.is_empty()) {
            (Some(n), true) => vec![n],
            (None, false) => self.n_ladder.clone(),
            (Some(_), false) => bail!("give either --n or --n-ladder"),
            (None, true) => bail!("--n or --n-ladder is required"),
        };
        let mut cfg = ExperimentConfig::new(self.ext.p, self.ext.kind, ladder[0]);
        cfg.unit_param = self.ext.unit_param;
        cfg.n_ladder = ladder;
        cfg.clamp = self.clamp;
        cfg.trunc = self.trunc;
        cfg.samples = self.samples;
        cfg.seed = self.seed;
        cfg.threads = self.threads;
        cfg.output = self.out.clone();
        cfg.format = self.format;
        cfg.samplers = if sweep {
            vec![Sampler::Haar, self.eps_sampler()?]
        } else {
            match self.sampler {
                SamplerArg::Haar => vec![Sampler::Haar],
                SamplerArg::Eps => vec![self.eps_sampler()?],
            }
        };
        Ok(cfg)
    }
}

fn emit(report: &ExperimentReport) -> anyhow::Result<()> {
    if let Some(text) = report.emit()? {
        println!("{text}");
    }
    Ok(())
}

fn write_json(value: &serde_json::Value, out: Option<&PathBuf>) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn read_matrix(spec: ExtensionSpec, path: &PathBuf) -> anyhow::Result<Matrix> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Matrix::from_json(spec, &serde_json::from_str(&text)?)?)
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Dist(c) => emit(&run_distribution_experiment(&c.config(false)?)?)?,
        Command::Moments { common, mu } => emit(&run_moment_experiment(&common.config(false)?, &mu)?)?,
        Command::Sweep(c) => emit(&run_universality_sweep(&c.config(true)?)?)?,
        Command::Theory { ext, n, clamp, max_order, tail_terms, pairing_cache, cached_only, out } => {
            let spec = ext.spec(1)?;
            let cache = match &pairing_cache {
                Some(path) if path.exists() => PairingCache::load(path)?,
                _ => PairingCache::default(),
            };
            let source = if cached_only { PairingCountSource::Cached } else { PairingCountSource::Oracle };
            let ctx = TheoryContext::new(spec, tail_terms)?.with_source(source).with_cache(cache);
            let gammas: Vec<Partition> = Partition::enumerate(clamp.saturating_sub(1), n as usize)
                .into_iter()
                .filter(|g| g.order(spec.q()) <= max_order.into())
                .collect();
            let rows = theory_table(&ctx, &gammas, n)?;
            if let Some(path) = &pairing_cache {
                ctx.cache_snapshot().save(path)?;
            }
            let limit = ctx.limit_product();
            let value = json!({
                "schema": 1,
                "p": ext.p,
                "ext": ext.kind.cli_name(),
                "n": n,
                "limit_product": limit,
                "rows": rows,
            });
            write_json(&value, out.as_ref())?;
        }
        Command::Oracle { which } => {
            let value = match which {
                OracleCmd::Pairings { ext, gamma, budget } => {
                    let spec = ext.spec(1)?;
                    let count = count_perfect_hermitian_pairings(&gamma, &spec, Budget::new(budget))?;
                    json!({
                        "input": {"p": ext.p, "ext": ext.kind.cli_name(), "gamma": gamma.to_string()},
                        "count": count.to_string(),
                        "budget_used": budget,
                    })
                }
                OracleCmd::Auts { q, mu, budget } => {
                    let by_ext = automorphisms_by_extension(&mu, q)?;
                    let literal = brute_force_automorphisms(&mu, q, Budget::new(budget)).ok();
                    json!({
                        "input": {"q": q, "mu": mu.to_string()},
                        "count": by_ext.to_string(),
                        "literal_count": literal.map(|c| c.count.to_string()),
                        "budget_used": literal.map_or(0, |c| c.work),
                    })
                }
                OracleCmd::Invertible { p, n, field, budget } => {
                    let f = match field {
                        Field::Hermitian => MatrixField::Hermitian,
                        Field::Symmetric => MatrixField::Symmetric,
                    };
                    let c = brute_force_invertible_count(n, p, f, Budget::new(budget))?;
                    json!({"input": {"p": p, "n": n, "field": f}, "count": c.count.to_string(), "budget_used": c.work})
                }
                OracleCmd::Charsum { ext, n, gamma } => {
                    let spec = ext.spec(1)?;
                    let c = exhaustive_character_check(&spec, n, &gamma)?;
                    json!({
                        "input": {"p": ext.p, "ext": ext.kind.cli_name(), "n": n, "gamma": gamma.to_string()},
                        "count": c,
                        "budget_used": c.instances,
                    })
                }
            };
            write_json(&value, None)?;
        }
        Command::Classify { ext, trunc, matrix, out } => {
            let spec = ext.spec(trunc)?;
            let a = HermitianMatrix::new(read_matrix(spec, &matrix)?)?;
            let (y, form) = classify(&a)?;
            let verified = verify_congruence(&a, &y, &form);
            write_json(&json!({"Y": y.to_json(), "form": form, "verified": verified}), out.as_ref())?;
        }
        Command::Snf { ext, trunc, clamp, matrix } => {
            let spec = ext.spec(trunc)?;
            let m = read_matrix(spec, &matrix)?;
            let t = cokernel_type(&m, clamp.unwrap_or(trunc))?;
            write_json(&json!({"type": t.to_string(), "partition": t}), None)?;
        }
    }
    Ok(())
}
