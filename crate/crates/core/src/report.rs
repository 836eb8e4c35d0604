//! Report assembly and rendering. Reports are plain serializable structs;
//! the text renderers print the same field values the JSON mode emits, so
//! the two modes never disagree on numbers.

use serde::Serialize;

use crate::distribution::{
    similarity_band, BandPolicy, CandidateDistribution, SimilarityBand,
};
use crate::error::{Error, Result};
use crate::fingerprint::MetricKind;
use crate::regret::RegretReport;
use crate::retrieval::HitRateTable;

/// Number of uniform histogram bins on [0, 1].
pub const HISTOGRAM_BINS: usize = 20;

/// Render with the given number of significant digits; plain decimal inside
/// a sane magnitude range, scientific outside it.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i64;
    if (-5..15).contains(&magnitude) {
        let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.*e}", digits.saturating_sub(1))
    }
}

/// Band statistics for one candidate set, or the error that prevented them.
#[derive(Debug, Clone, Serialize)]
pub struct BandRow {
    pub set: usize,
    pub sigma_min: Option<f64>,
    pub sigma_max: Option<f64>,
    pub width: Option<f64>,
    /// sigma_max within 1e-12 of 1 (duplicates under the metric).
    pub degenerate: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BandMedians {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub width: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BandHistograms {
    pub bins: usize,
    pub sigma_min: Vec<usize>,
    pub sigma_max: Vec<usize>,
    pub width: Vec<usize>,
}

/// Per-set bands plus dataset-level medians and histograms. Bad sets are
/// reported in place; they never abort the batch.
#[derive(Debug, Clone, Serialize)]
pub struct BandReport {
    pub metric: String,
    pub rows: Vec<BandRow>,
    pub medians: Option<BandMedians>,
    pub histograms: BandHistograms,
}

/// Compute the all-pairs band report for a batch of sets.
pub fn emit_band_report(
    sets: &[CandidateDistribution],
    metric: MetricKind,
    policy: BandPolicy,
) -> Result<BandReport> {
    emit_band_report_with(sets, metric.name(), |_, dist| similarity_band(dist, metric, policy))
}

/// Band report with a caller-chosen band function (e.g. the true-reference
/// variant).
pub fn emit_band_report_with<F>(
    sets: &[CandidateDistribution],
    metric_label: &str,
    band_of: F,
) -> Result<BandReport>
where
    F: Fn(usize, &CandidateDistribution) -> Result<SimilarityBand>,
{
    if sets.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut rows = Vec::with_capacity(sets.len());
    let mut mins = Vec::new();
    let mut maxes = Vec::new();
    let mut widths = Vec::new();
    for (i, dist) in sets.iter().enumerate() {
        match band_of(i, dist) {
            Ok(band) => {
                mins.push(band.sigma_min);
                maxes.push(band.sigma_max);
                widths.push(band.width());
                rows.push(BandRow {
                    set: i,
                    sigma_min: Some(band.sigma_min),
                    sigma_max: Some(band.sigma_max),
                    width: Some(band.width()),
                    degenerate: band.is_degenerate(),
                    error: None,
                });
            }
            Err(e) => rows.push(BandRow {
                set: i,
                sigma_min: None,
                sigma_max: None,
                width: None,
                degenerate: false,
                error: Some(e.to_string()),
            }),
        }
    }
    let medians = if mins.is_empty() {
        None
    } else {
        Some(BandMedians {
            sigma_min: median(&mut mins.clone()),
            sigma_max: median(&mut maxes.clone()),
            width: median(&mut widths.clone()),
        })
    };
    Ok(BandReport {
        metric: metric_label.to_string(),
        rows,
        medians,
        histograms: BandHistograms {
            bins: HISTOGRAM_BINS,
            sigma_min: histogram(&mins),
            sigma_max: histogram(&maxes),
            width: histogram(&widths),
        },
    })
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).expect("band values are finite"));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

/// 20 uniform bins on [0, 1]; a value of exactly 1 lands in the last bin.
fn histogram(values: &[f64]) -> Vec<usize> {
    let mut bins = vec![0usize; HISTOGRAM_BINS];
    for &v in values {
        let idx = ((v * HISTOGRAM_BINS as f64) as usize).min(HISTOGRAM_BINS - 1);
        bins[idx] += 1;
    }
    bins
}

pub fn render_band_text(report: &BandReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("band report ({} similarity)\n", report.metric));
    out.push_str(&format!(
        "{:<6} {:<22} {:<22} {:<22} {}\n",
        "set", "sigma_min", "sigma_max", "width", "flags"
    ));
    for row in &report.rows {
        match (&row.error, row.sigma_min, row.sigma_max, row.width) {
            (None, Some(lo), Some(hi), Some(w)) => {
                out.push_str(&format!(
                    "{:<6} {:<22} {:<22} {:<22} {}\n",
                    row.set,
                    lo,
                    hi,
                    w,
                    if row.degenerate { "sigma_max=1" } else { "-" }
                ));
            }
            _ => {
                out.push_str(&format!(
                    "{:<6} error: {}\n",
                    row.set,
                    row.error.as_deref().unwrap_or("unknown")
                ));
            }
        }
    }
    if let Some(med) = &report.medians {
        out.push_str(&format!(
            "{:<6} {:<22} {:<22} {:<22}\n",
            "median", med.sigma_min, med.sigma_max, med.width
        ));
    }
    out.push_str(&format!("histogram bins: {}\n", report.histograms.bins));
    out.push_str(&format!("histogram sigma_min: {:?}\n", report.histograms.sigma_min));
    out.push_str(&format!("histogram sigma_max: {:?}\n", report.histograms.sigma_max));
    out.push_str(&format!("histogram width:     {:?}\n", report.histograms.width));
    out
}

pub fn render_regret_text(report: &RegretReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("{:<18} {}\n", "eval metric", report.eval_metric.name()));
    out.push_str(&format!("{:<18} {}\n", "decode metric", report.decode_metric.name()));
    out.push_str(&format!(
        "{:<18} {}\n",
        "space",
        match report.space {
            crate::bayes::SearchSpace::CandidateSet => "candidates",
            crate::bayes::SearchSpace::FullHypercube => "hypercube",
        }
    ));
    out.push_str(&format!("{:<18} {}\n", "eval prediction", report.eval_prediction));
    out.push_str(&format!("{:<18} {}\n", "decode prediction", report.decode_prediction));
    out.push_str(&format!("{:<18} {}\n", "eval utility", report.eval_utility));
    out.push_str(&format!("{:<18} {}\n", "decode utility", report.decode_utility));
    out.push_str(&format!("{:<18} {}\n", "regret", report.regret));
    match (report.bound, report.slack, report.bound_kind) {
        (Some(bound), Some(slack), Some(kind)) => {
            let label = match kind {
                crate::regret::BoundKind::Hr1DecodeUnderSim => "hr1-decode-under-sim",
                crate::regret::BoundKind::SimDecodeUnderHr1 => "sim-decode-under-hr1",
            };
            out.push_str(&format!("{:<18} {} ({})\n", "bound", bound, label));
            out.push_str(&format!("{:<18} {}\n", "slack", slack));
        }
        _ => out.push_str(&format!("{:<18} none\n", "bound")),
    }
    let mut flags = Vec::new();
    if report.degenerate.sigma_max_is_one {
        flags.push("sigma_max=1");
    }
    if report.degenerate.band_undefined {
        flags.push("band-undefined");
    }
    out.push_str(&format!(
        "{:<18} {}\n",
        "degenerate",
        if flags.is_empty() { "none".to_string() } else { flags.join(", ") }
    ));
    out
}

pub fn render_hit_table_text(table: &HitRateTable, mean_tan: Option<f64>) -> String {
    let mut out = String::new();
    out.push_str(&format!("records: {}\n", table.records));
    for (k, rate) in table.ks.iter().zip(&table.rates_percent) {
        out.push_str(&format!("HR@{:<4} {:.2}%\n", k, rate));
    }
    if let Some(mt) = mean_tan {
        out.push_str(&format!("mean tanimoto: {mt}\n"));
    }
    out
}
