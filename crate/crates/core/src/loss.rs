//! Surrogate training losses as pure differentiable functions with analytic
//! gradients, plus the central-difference checker that validates them.
//! No training loop lives here; these are the objectives themselves.

use crate::distribution::CandidateDistribution;
use crate::error::{Error, Result};
use crate::fingerprint::{soft_cosine, Fingerprint, SoftPrediction};

/// Scores this close to 0 or 1 are clamped before entering a logarithm.
pub const LOG_CLAMP_EPS: f64 = 1e-12;

/// A loss evaluation: the scalar and the gradient with respect to each
/// prediction coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct LossValue {
    pub value: f64,
    pub gradient: Option<Vec<f64>>,
}

fn check_dims(y: &Fingerprint, p: &SoftPrediction) -> Result<()> {
    if y.len() != p.len() {
        return Err(Error::Dimension {
            expected: y.len(),
            got: p.len(),
            index: None,
        });
    }
    Ok(())
}

fn clamp(s: f64) -> f64 {
    s.clamp(LOG_CLAMP_EPS, 1.0 - LOG_CLAMP_EPS)
}

/// Binary cross entropy, summed over coordinates. Scores are clamped to
/// [1e-12, 1 - 1e-12] before the logs.
pub fn bce_loss(y: &Fingerprint, p: &SoftPrediction) -> Result<LossValue> {
    check_dims(y, p)?;
    let mut value = 0.0;
    let mut grad = Vec::with_capacity(p.len());
    for (k, &raw) in p.scores().iter().enumerate() {
        let s = clamp(raw);
        let yk = if y.get(k) { 1.0 } else { 0.0 };
        value -= yk * s.ln() + (1.0 - yk) * (1.0 - s).ln();
        grad.push((s - yk) / (s * (1.0 - s)));
    }
    Ok(LossValue { value, gradient: Some(grad) })
}

/// Focal loss with focusing parameter gamma >= 0; gamma = 0 recovers BCE.
pub fn focal_loss(y: &Fingerprint, p: &SoftPrediction, gamma: f64) -> Result<LossValue> {
    if gamma < 0.0 || !gamma.is_finite() {
        return Err(Error::InvalidParameter(format!("gamma must be >= 0, got {gamma}")));
    }
    check_dims(y, p)?;
    let mut value = 0.0;
    let mut grad = Vec::with_capacity(p.len());
    for (k, &raw) in p.scores().iter().enumerate() {
        let s = clamp(raw);
        if y.get(k) {
            let w = (1.0 - s).powf(gamma);
            value -= w * s.ln();
            // gamma * (1-s)^(gamma-1) is identically 0 at gamma = 0
            let dw = if gamma == 0.0 { 0.0 } else { gamma * (1.0 - s).powf(gamma - 1.0) };
            grad.push(dw * s.ln() - w / s);
        } else {
            let w = s.powf(gamma);
            value -= w * (1.0 - s).ln();
            let dw = if gamma == 0.0 { 0.0 } else { gamma * s.powf(gamma - 1.0) };
            grad.push(w / (1.0 - s) - dw * (1.0 - s).ln());
        }
    }
    Ok(LossValue { value, gradient: Some(grad) })
}

/// Soft cosine similarity loss, 1 - p.y / (|p|_2 |y|_2). The true
/// fingerprint must be nonzero; an all-zero prediction scores loss 1 with a
/// zero subgradient.
pub fn cosine_loss(y: &Fingerprint, p: &SoftPrediction) -> Result<LossValue> {
    check_dims(y, p)?;
    if y.is_zero() {
        return Err(Error::ZeroTruth);
    }
    let sum_sq: f64 = p.scores().iter().map(|s| s * s).sum();
    if sum_sq == 0.0 {
        return Ok(LossValue { value: 1.0, gradient: Some(vec![0.0; p.len()]) });
    }
    // same arithmetic as soft_cosine so the two stay identical bit for bit
    let denom = (sum_sq * f64::from(y.popcount())).sqrt();
    let dot = p.dot_fingerprint(y);
    let value = 1.0 - dot / denom;
    let grad = p
        .scores()
        .iter()
        .enumerate()
        .map(|(k, &pk)| {
            let yk = if y.get(k) { 1.0 } else { 0.0 };
            (dot * pk / sum_sq - yk) / denom
        })
        .collect();
    Ok(LossValue { value, gradient: Some(grad) })
}

/// Soft IoU (Tanimoto) loss: 1 - p.y / (|p|_1 + |y|_1 - p.y), valid because
/// y is binary. Two identically-zero inputs score loss 0, matching the
/// both-empty similarity convention.
pub fn iou_loss(y: &Fingerprint, p: &SoftPrediction) -> Result<LossValue> {
    check_dims(y, p)?;
    let inter = p.dot_fingerprint(y);
    let denom = p.l1_norm() + f64::from(y.popcount()) - inter;
    if denom == 0.0 {
        return Ok(LossValue { value: 0.0, gradient: Some(vec![0.0; p.len()]) });
    }
    let value = 1.0 - inter / denom;
    let grad = (0..p.len())
        .map(|k| {
            let yk = if y.get(k) { 1.0 } else { 0.0 };
            // d(-inter/denom)/dp_k with d(inter) = y_k, d(denom) = 1 - y_k
            (inter * (1.0 - yk) - yk * denom) / (denom * denom)
        })
        .collect();
    Ok(LossValue { value, gradient: Some(grad) })
}

/// Contrastive loss with fingerprint-space cosine scoring: the negative
/// log-softmax of the true candidate's cosine score at temperature tau.
/// Computed with max-subtraction so small temperatures stay finite.
pub fn contrastive_fp_cos(
    dist: &CandidateDistribution,
    true_index: usize,
    p: &SoftPrediction,
    tau: f64,
) -> Result<LossValue> {
    if tau <= 0.0 || !tau.is_finite() {
        return Err(Error::InvalidParameter(format!("tau must be > 0, got {tau}")));
    }
    if true_index >= dist.len() {
        return Err(Error::IndexOutOfRange { index: true_index, len: dist.len() });
    }
    if p.len() != dist.bit_len() {
        return Err(Error::Dimension {
            expected: dist.bit_len(),
            got: p.len(),
            index: None,
        });
    }

    let scores: Vec<f64> = dist
        .candidates()
        .iter()
        .map(|c| soft_cosine(p, c))
        .collect::<Result<_>>()?;
    let smax = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let shifted: Vec<f64> = scores.iter().map(|s| ((s - smax) / tau).exp()).collect();
    let z: f64 = shifted.iter().sum();
    let value = (smax - scores[true_index]) / tau + z.ln();

    // dL/ds_j = (softmax_j - 1[j = true]) / tau, chained through the cosine
    let np = p.l2_norm();
    let mut grad = vec![0.0; p.len()];
    if np > 0.0 {
        for (j, cand) in dist.candidates().iter().enumerate() {
            let nc = f64::from(cand.popcount()).sqrt();
            if nc == 0.0 {
                continue; // zero-norm candidate scores a constant 0
            }
            let q = shifted[j] / z;
            let coeff = (q - if j == true_index { 1.0 } else { 0.0 }) / tau;
            if coeff == 0.0 {
                continue;
            }
            let sj = scores[j];
            for (k, g) in grad.iter_mut().enumerate() {
                let ck = if cand.get(k) { 1.0 } else { 0.0 };
                *g += coeff * (ck / (np * nc) - sj * p.scores()[k] / (np * np));
            }
        }
    }
    Ok(LossValue { value, gradient: Some(grad) })
}

/// Threshold a soft prediction into a fingerprint: bit k is set iff the
/// score strictly exceeds the threshold.
pub fn binarize(p: &SoftPrediction, threshold: f64) -> Result<Fingerprint> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "binarization threshold must lie in (0, 1), got {threshold}"
        )));
    }
    let bits: Vec<bool> = p.scores().iter().map(|&s| s > threshold).collect();
    Ok(Fingerprint::from_bits(&bits))
}

/// A loss together with everything it needs except the prediction, so the
/// gradient checker can perturb coordinates uniformly.
#[derive(Debug, Clone, Copy)]
pub enum LossKind<'a> {
    Bce { truth: &'a Fingerprint },
    Focal { truth: &'a Fingerprint, gamma: f64 },
    Cosine { truth: &'a Fingerprint },
    Iou { truth: &'a Fingerprint },
    ContrastiveFpCos { dist: &'a CandidateDistribution, true_index: usize, tau: f64 },
}

impl LossKind<'_> {
    pub fn name(&self) -> &'static str {
        match self {
            LossKind::Bce { .. } => "bce",
            LossKind::Focal { .. } => "focal",
            LossKind::Cosine { .. } => "cosine",
            LossKind::Iou { .. } => "iou",
            LossKind::ContrastiveFpCos { .. } => "contrastive-fp-cos",
        }
    }

    pub fn evaluate(&self, p: &SoftPrediction) -> Result<LossValue> {
        match *self {
            LossKind::Bce { truth } => bce_loss(truth, p),
            LossKind::Focal { truth, gamma } => focal_loss(truth, p, gamma),
            LossKind::Cosine { truth } => cosine_loss(truth, p),
            LossKind::Iou { truth } => iou_loss(truth, p),
            LossKind::ContrastiveFpCos { dist, true_index, tau } => {
                contrastive_fp_cos(dist, true_index, p, tau)
            }
        }
    }
}

/// Compare the analytic gradient against central differences with the given
/// step; returns the maximum over coordinates of
/// |analytic - numeric| / max(1e-8, |numeric|). Every score must sit at
/// least `step` inside (0, 1) so the perturbed points stay in the domain.
pub fn grad_check(loss: &LossKind, p: &SoftPrediction, step: f64) -> Result<f64> {
    if step <= 0.0 {
        return Err(Error::InvalidParameter(format!("step must be > 0, got {step}")));
    }
    for (index, &value) in p.scores().iter().enumerate() {
        if value <= step || value >= 1.0 - step {
            return Err(Error::StepTooLarge { index, value, step });
        }
    }
    let analytic = loss
        .evaluate(p)?
        .gradient
        .expect("all losses produce gradients");

    let mut worst: f64 = 0.0;
    let mut scores = p.scores().to_vec();
    for k in 0..scores.len() {
        let orig = scores[k];
        scores[k] = orig + step;
        let up = loss.evaluate(&SoftPrediction::new(scores.clone())?)?.value;
        scores[k] = orig - step;
        let down = loss.evaluate(&SoftPrediction::new(scores.clone())?)?.value;
        scores[k] = orig;
        let numeric = (up - down) / (2.0 * step);
        let rel = (analytic[k] - numeric).abs() / numeric.abs().max(1e-8);
        worst = worst.max(rel);
    }
    Ok(worst)
}
