//! Report types and their JSON / CSV renderings.

use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::stats::ChiSquareSummary;
use super::ExperimentConfig;
use crate::error::{Error, Result};
use crate::partition::Partition;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(Error::Config(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Distribution,
    Moments,
    Sweep,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellRow {
    pub cell: Partition,
    pub count: u64,
    pub frequency: f64,
    pub frequency_exact: String,
    pub wilson_low: f64,
    pub wilson_high: f64,
    /// Null standard error `sqrt(π(1−π)/N)` when theory exists, else the
    /// plug-in estimate.
    pub se: f64,
    pub theory_finite_n: Option<f64>,
    pub theory_finite_n_exact: Option<String>,
    pub theory_limit: Option<f64>,
    pub theory_limit_error: Option<f64>,
    /// `(frequency − theory_finite_n) / se`.
    pub z_score: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TvSummary {
    pub value: f64,
    pub se: f64,
    /// Sum of the tail bounds of the limits involved.
    pub theory_error: f64,
    pub theory_mass: f64,
    pub rest_empirical: f64,
    pub rest_theory: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionRun {
    pub sampler: String,
    pub n: u32,
    pub samples: u64,
    pub cells: Vec<CellRow>,
    pub tv: Option<TvSummary>,
    pub chi_square: Option<ChiSquareSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    pub mu: Partition,
    pub mean: f64,
    pub mean_exact: String,
    pub se: f64,
    /// Limiting moment.
    pub closed_form: f64,
    pub closed_form_exact: String,
    pub finite_n: f64,
    pub finite_n_exact: String,
    /// `|mean − closed_form| / closed_form`.
    pub relative_error: f64,
    /// `(mean − finite_n) / se`.
    pub z_score: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentRun {
    pub sampler: String,
    pub n: u32,
    pub samples: u64,
    pub moments: Vec<MomentRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub n: u32,
    pub tv: f64,
    pub se: f64,
    pub theory_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub sampler: String,
    pub points: Vec<SweepPoint>,
    pub non_increasing: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema: u32,
    pub experiment: ExperimentKind,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub runtime_seconds: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub distributions: Vec<DistributionRun>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub moments: Vec<MomentRun>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<SweepSummary>,
}

/// Columns of the CSV rendering, also written as its first line.
pub const CSV_COLUMNS: [&str; 13] = [
    "section",
    "sampler",
    "n",
    "key",
    "count",
    "empirical",
    "se",
    "ci_low",
    "ci_high",
    "theory_finite_n",
    "theory_limit",
    "theory_error",
    "z_score",
];

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl ExperimentReport {
    pub fn new(experiment: ExperimentKind, config: ExperimentConfig) -> Self {
        ExperimentReport {
            schema: SCHEMA_VERSION,
            experiment,
            seed: config.seed,
            config,
            runtime_seconds: 0.0,
            distributions: Vec::new(),
            moments: Vec::new(),
            sweep: Vec::new(),
        }
    }

    /// The report with its timing removed, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self {
        ExperimentReport { runtime_seconds: 0.0, ..self.clone() }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Long format: `cell` rows per module type, `tv` rows per run, `moment`
    /// rows per target.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| Error::Config(e.to_string());
        w.write_record(CSV_COLUMNS).map_err(csv_err)?;
        for run in &self.distributions {
            for c in &run.cells {
                w.write_record([
                    "cell".to_string(),
                    run.sampler.clone(),
                    run.n.to_string(),
                    c.cell.to_string(),
                    c.count.to_string(),
                    c.frequency.to_string(),
                    c.se.to_string(),
                    c.wilson_low.to_string(),
                    c.wilson_high.to_string(),
                    opt(c.theory_finite_n),
                    opt(c.theory_limit),
                    opt(c.theory_limit_error),
                    opt(c.z_score),
                ])
                .map_err(csv_err)?;
            }
            if let Some(tv) = &run.tv {
                w.write_record([
                    "tv".to_string(),
                    run.sampler.clone(),
                    run.n.to_string(),
                    String::new(),
                    run.samples.to_string(),
                    tv.value.to_string(),
                    tv.se.to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                    "0".to_string(),
                    tv.theory_error.to_string(),
                    String::new(),
                ])
                .map_err(csv_err)?;
            }
        }
        for run in &self.moments {
            for m in &run.moments {
                w.write_record([
                    "moment".to_string(),
                    run.sampler.clone(),
                    run.n.to_string(),
                    m.mu.to_string(),
                    run.samples.to_string(),
                    m.mean.to_string(),
                    m.se.to_string(),
                    String::new(),
                    String::new(),
                    m.finite_n.to_string(),
                    m.closed_form.to_string(),
                    "0".to_string(),
                    opt(m.z_score),
                ])
                .map_err(csv_err)?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn render(&self, format: ReportFormat) -> Result<String> {
        match format {
            ReportFormat::Json => self.to_json(),
            ReportFormat::Csv => {
                let mut buf = Vec::new();
                self.write_csv(&mut buf)?;
                String::from_utf8(buf).map_err(|e| Error::Config(e.to_string()))
            }
        }
    }

    /// Writes to `config.output` in `config.format`, or returns the text when
    /// no path is set.
    pub fn emit(&self) -> Result<Option<String>> {
        let text = self.render(self.config.format)?;
        match &self.config.output {
            Some(path) => {
                std::fs::write(path, text)?;
                Ok(None)
            }
            None => Ok(Some(text)),
        }
    }
}
