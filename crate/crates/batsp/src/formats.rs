//! File formats: instance JSON, TSPLIB-style explicit matrices, and the
//! canonical report JSON.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use batsp_core::instance::{validate_metric, MetricInstance, ValidationMode};
use batsp_core::solver::PipelineReport;
use serde::{Deserialize, Serialize};

#[derive(Debug, Serialize, Deserialize)]
pub struct InstanceDoc {
    pub name: String,
    pub n: usize,
    pub costs: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl InstanceDoc {
    pub fn from_instance(inst: &MetricInstance) -> Self {
        let costs = (0..inst.n)
            .map(|u| (0..inst.n).map(|v| inst.cost(u, v)).collect())
            .collect();
        InstanceDoc {
            name: inst.name.clone(),
            n: inst.n,
            costs,
            seed: inst.seed,
        }
    }

    pub fn into_instance(self) -> Result<MetricInstance> {
        if self.costs.len() != self.n || self.costs.iter().any(|r| r.len() != self.n) {
            bail!("field 'costs' must be an {0}x{0} matrix", self.n);
        }
        let flat: Vec<f64> = self.costs.into_iter().flatten().collect();
        MetricInstance::from_matrix_unchecked(&self.name, self.n, flat, self.seed)
            .map_err(|e| anyhow!("invalid matrix: {e:?}"))
    }
}

/// TSPLIB-style explicit matrix: DIMENSION, EDGE_WEIGHT_FORMAT FULL_MATRIX,
/// EDGE_WEIGHT_SECTION with n*n numbers. Unsupported keywords warn on stderr.
fn parse_tsplib(text: &str, fallback_name: &str) -> Result<MetricInstance> {
    let mut name = fallback_name.to_string();
    let mut dimension: Option<usize> = None;
    let mut weights: Vec<f64> = Vec::new();
    let mut in_weights = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line == "EOF" {
            continue;
        }
        if in_weights {
            for tok in line.split_whitespace() {
                weights.push(
                    tok.parse::<f64>()
                        .with_context(|| format!("line {}: bad weight '{tok}'", lineno + 1))?,
                );
            }
            continue;
        }
        let (key, value) = match line.split_once(':') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => (line, ""),
        };
        match key {
            "NAME" => name = value.to_string(),
            "DIMENSION" => {
                dimension = Some(
                    value
                        .parse()
                        .with_context(|| format!("line {}: bad DIMENSION", lineno + 1))?,
                )
            }
            "EDGE_WEIGHT_FORMAT" => {
                if value != "FULL_MATRIX" {
                    bail!("unsupported EDGE_WEIGHT_FORMAT '{value}' (only FULL_MATRIX)");
                }
            }
            "EDGE_WEIGHT_TYPE" => {
                if value != "EXPLICIT" {
                    bail!("unsupported EDGE_WEIGHT_TYPE '{value}' (only EXPLICIT)");
                }
            }
            "EDGE_WEIGHT_SECTION" => in_weights = true,
            "TYPE" | "COMMENT" => {}
            other => eprintln!("warning: ignoring unsupported keyword '{other}'"),
        }
    }
    let n = dimension.ok_or_else(|| anyhow!("missing DIMENSION"))?;
    if weights.len() != n * n {
        bail!("EDGE_WEIGHT_SECTION has {} values, expected {}", weights.len(), n * n);
    }
    // Explicit matrices may carry nonzero diagonals; the diagonal is unused.
    for v in 0..n {
        weights[v * n + v] = 0.0;
    }
    MetricInstance::from_matrix_unchecked(&name, n, weights, None)
        .map_err(|e| anyhow!("invalid matrix: {e:?}"))
}

/// Reads JSON or TSPLIB (sniffed by leading '{') and validates the metric.
pub fn parse_instance(path: &Path, mode: ValidationMode) -> Result<MetricInstance> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let fallback = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".to_string());
    let inst = if text.trim_start().starts_with('{') {
        let doc: InstanceDoc =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        doc.into_instance()?
    } else {
        parse_tsplib(&text, &fallback)?
    };
    validate_metric(inst, mode).map_err(|e| anyhow!("metric validation failed: {e:?}"))
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct TourDoc {
    pub tour: Vec<usize>,
    pub bottleneck: f64,
    pub hops: Vec<usize>,
    pub max_hops: usize,
    pub k_used: usize,
    pub ratio_bound: usize,
}

/// On-disk report, versioned. Field order is irrelevant: emission goes
/// through `serde_json::Value`, whose object keys are sorted.
#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct ReportDoc {
    pub schema: String,
    pub instance: String,
    pub n: usize,
    pub tau_star: f64,
    pub beta: f64,
    pub beta_certified: bool,
    pub beta_target: f64,
    pub seed: u64,
    pub k: usize,
    pub ratio: f64,
    pub support_size: usize,
    pub circuit_len: usize,
    pub tour: TourDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree_edges: Option<Vec<(usize, usize)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_trace: Option<Vec<(f64, bool)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct Timings {
    pub total_ms: f64,
}

pub const REPORT_SCHEMA: &str = "batsp-report/1";

impl ReportDoc {
    pub fn from_report(
        inst_name: &str,
        report: &PipelineReport,
        opt: Option<f64>,
        trace: bool,
        timings: Option<Timings>,
    ) -> Self {
        ReportDoc {
            schema: REPORT_SCHEMA.to_string(),
            instance: inst_name.to_string(),
            n: report.n,
            tau_star: report.tau_star,
            beta: report.beta,
            beta_certified: report.beta_certified,
            beta_target: report.beta_target,
            seed: report.seed,
            k: report.k,
            ratio: report.realized_ratio(),
            support_size: report.support_size,
            circuit_len: report.circuit_len,
            tour: TourDoc {
                tour: report.tour.tour.clone(),
                bottleneck: report.tour.bottleneck,
                hops: report.tour.hops.clone(),
                max_hops: report.tour.max_hops,
                k_used: report.tour.k_used,
                ratio_bound: report.tour.ratio_bound,
            },
            tree_edges: report.tree.as_ref().map(|t| t.edges.clone()),
            opt,
            tau_trace: if trace { Some(report.tau_trace.clone()) } else { None },
            timings,
        }
    }

    /// Enough of a `PipelineReport` for independent re-verification.
    pub fn to_report(&self) -> PipelineReport {
        PipelineReport {
            n: self.n,
            tau_star: self.tau_star,
            beta: self.beta,
            beta_certified: self.beta_certified,
            beta_target: self.beta_target,
            seed: self.seed,
            k: self.k,
            tour: batsp_core::shortcut::TourResult {
                tour: self.tour.tour.clone(),
                bottleneck: self.tour.bottleneck,
                hops: self.tour.hops.clone(),
                max_hops: self.tour.max_hops,
                k_used: self.tour.k_used,
                tau_star: self.tau_star,
                ratio_bound: self.tour.ratio_bound,
            },
            tree: None,
            tau_trace: self.tau_trace.clone().unwrap_or_default(),
            support_size: self.support_size,
            circuit_len: self.circuit_len,
        }
    }

    /// Canonical bytes: keys sorted via the `Value` intermediate, trailing
    /// newline, no timestamps.
    pub fn to_canonical_json(&self) -> Result<String> {
        let value = serde_json::to_value(self)?;
        let mut s = serde_json::to_string_pretty(&value)?;
        s.push('\n');
        Ok(s)
    }

    pub fn summary_tsv(&self) -> String {
        let mut s = String::new();
        let _ = write!(
            s,
            "{}\t{}\t{}\t{}\t{}\t{}",
            self.n, self.tau_star, self.beta, self.k, self.tour.bottleneck, self.ratio
        );
        s.push('\n');
        s
    }
}

pub fn instance_to_json(inst: &MetricInstance) -> Result<String> {
    let value = serde_json::to_value(InstanceDoc::from_instance(inst))?;
    let mut s = serde_json::to_string_pretty(&value)?;
    s.push('\n');
    Ok(s)
}
