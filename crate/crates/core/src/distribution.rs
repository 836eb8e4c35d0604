//! Conditional distributions over candidate fingerprints and the similarity
//! band statistics the regret bounds are stated in.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fingerprint::{Fingerprint, MetricKind};

/// Tolerance inside which a probability vector is silently renormalized to
/// sum to 1; anything further off is rejected as malformed.
pub const PROB_SUM_TOLERANCE: f64 = 1e-6;

/// A candidate set C = {y_1, ..., y_l} with conditional probabilities p_j.
///
/// Probabilities are validated and renormalized at construction; candidates
/// with zero probability are retained because they still shape the band.
/// Duplicate fingerprints are permitted (real candidate databases contain
/// them) and force sigma_max = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateDistribution {
    candidates: Vec<Fingerprint>,
    probs: Vec<f64>,
    m: usize,
}

impl CandidateDistribution {
    pub fn new(candidates: Vec<Fingerprint>, probs: Vec<f64>) -> Result<Self> {
        if candidates.is_empty() {
            return Err(Error::EmptyCandidateSet);
        }
        if probs.len() != candidates.len() {
            return Err(Error::InvalidParameter(format!(
                "{} candidates but {} probabilities",
                candidates.len(),
                probs.len()
            )));
        }
        let m = candidates[0].len();
        for (index, cand) in candidates.iter().enumerate() {
            if cand.len() != m {
                return Err(Error::Dimension {
                    expected: m,
                    got: cand.len(),
                    index: Some(index),
                });
            }
        }
        for (index, &value) in probs.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::BadProbability { index, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOLERANCE {
            return Err(Error::BadProbabilitySum { sum });
        }
        // renormalize only when the drift exceeds float noise, so that
        // serialize -> parse round trips reproduce probabilities bit-exactly
        let probs = if (sum - 1.0).abs() > 1e-12 {
            probs.into_iter().map(|p| p / sum).collect()
        } else {
            probs
        };
        Ok(CandidateDistribution { candidates, probs, m })
    }

    /// Single candidate with probability 1.
    pub fn point_mass(candidate: Fingerprint) -> Self {
        let m = candidate.len();
        CandidateDistribution {
            candidates: vec![candidate],
            probs: vec![1.0],
            m,
        }
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        false // at least one candidate by construction
    }

    /// Bit length m shared by every candidate.
    pub fn bit_len(&self) -> usize {
        self.m
    }

    pub fn candidates(&self) -> &[Fingerprint] {
        &self.candidates
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn candidate(&self, index: usize) -> Result<&Fingerprint> {
        self.candidates
            .get(index)
            .ok_or(Error::IndexOutOfRange { index, len: self.candidates.len() })
    }

    pub fn prob(&self, index: usize) -> Result<f64> {
        self.probs
            .get(index)
            .copied()
            .ok_or(Error::IndexOutOfRange { index, len: self.probs.len() })
    }

    /// Index of the largest probability; ties go to the smallest index.
    pub fn argmax_prob(&self) -> usize {
        let mut best = 0;
        for (i, &p) in self.probs.iter().enumerate().skip(1) {
            if p > self.probs[best] {
                best = i;
            }
        }
        best
    }

    /// Largest conditional probability p_star.
    pub fn p_star(&self) -> f64 {
        self.probs.iter().copied().fold(f64::MIN, f64::max)
    }

    /// Margin between the highest and second-highest probability; equals
    /// p_star when there is a single candidate.
    pub fn margin_delta(&self) -> f64 {
        let i_star = self.argmax_prob();
        let second = self
            .probs
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != i_star)
            .map(|(_, &p)| p)
            .fold(0.0f64, f64::max);
        if self.probs.len() == 1 {
            self.probs[0]
        } else {
            self.probs[i_star] - second
        }
    }
}

/// The (sigma_min, sigma_max) pair of extreme off-diagonal pairwise
/// similarities of a candidate set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityBand {
    pub sigma_min: f64,
    pub sigma_max: f64,
}

impl SimilarityBand {
    pub fn width(&self) -> f64 {
        self.sigma_max - self.sigma_min
    }

    /// sigma_max within 1e-12 of 1, which degenerates several bounds.
    pub fn is_degenerate(&self) -> bool {
        self.sigma_max >= 1.0 - 1e-12
    }
}

/// Whether band computation accepts metrics other than Tanimoto/cosine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BandPolicy {
    /// Tanimoto and cosine only.
    Strict,
    /// Also allow bitwise accuracy and HR@1. Bitwise satisfies the band
    /// axioms; HR@1 produces the degenerate band (0, 0) on duplicate-free
    /// sets.
    AllowAnyMetric,
}

/// Anything that exposes candidate probabilities and a symmetric pairwise
/// similarity with unit diagonal. Implemented by concrete candidate sets
/// under a metric and by abstract similarity-matrix instances, so the regret
/// machinery runs on both.
pub trait PairwiseSimilarity {
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    fn prob(&self, i: usize) -> f64;
    /// U(y_i, y_j); must be symmetric with unit diagonal.
    fn sim(&self, i: usize, j: usize) -> f64;

    /// Expected similarity of predicting candidate i: u_i = sum_j U(y_i, y_j) p_j.
    fn row_expected_utility(&self, i: usize) -> f64 {
        (0..self.len()).map(|j| self.sim(i, j) * self.prob(j)).sum()
    }

    /// Index maximizing u_i; ties go to the smallest index.
    fn sim_argmax(&self) -> usize {
        let mut best = 0;
        let mut best_u = self.row_expected_utility(0);
        for i in 1..self.len() {
            let u = self.row_expected_utility(i);
            if u > best_u {
                best = i;
                best_u = u;
            }
        }
        best
    }

    /// Index of the largest probability; ties go to the smallest index.
    fn prob_argmax(&self) -> usize {
        let mut best = 0;
        for i in 1..self.len() {
            if self.prob(i) > self.prob(best) {
                best = i;
            }
        }
        best
    }

    /// Exact O(l^2) enumeration of the off-diagonal similarity extremes.
    fn band(&self) -> Result<SimilarityBand> {
        let l = self.len();
        if l < 2 {
            return Err(Error::BandUndefined { len: l });
        }
        let mut sigma_min = f64::INFINITY;
        let mut sigma_max = f64::NEG_INFINITY;
        for i in 0..l {
            for j in (i + 1)..l {
                let s = self.sim(i, j);
                sigma_min = sigma_min.min(s);
                sigma_max = sigma_max.max(s);
            }
        }
        Ok(SimilarityBand { sigma_min, sigma_max })
    }
}

/// A candidate distribution viewed through one similarity metric.
pub struct MetricView<'a> {
    dist: &'a CandidateDistribution,
    metric: MetricKind,
}

impl<'a> MetricView<'a> {
    pub fn new(dist: &'a CandidateDistribution, metric: MetricKind) -> Self {
        MetricView { dist, metric }
    }
}

impl PairwiseSimilarity for MetricView<'_> {
    fn len(&self) -> usize {
        self.dist.len()
    }

    fn prob(&self, i: usize) -> f64 {
        self.dist.probs()[i]
    }

    fn sim(&self, i: usize, j: usize) -> f64 {
        self.metric
            .utility(&self.dist.candidates()[i], &self.dist.candidates()[j])
            .expect("candidates share bit length by construction")
    }
}

/// Min/max pairwise off-diagonal similarity over all unordered candidate
/// pairs. Requires at least two candidates; metrics other than
/// Tanimoto/cosine need [`BandPolicy::AllowAnyMetric`].
pub fn similarity_band(
    dist: &CandidateDistribution,
    metric: MetricKind,
    policy: BandPolicy,
) -> Result<SimilarityBand> {
    if policy == BandPolicy::Strict && !metric.is_band_standard() {
        return Err(Error::MetricNotBandEligible { metric: metric.name() });
    }
    MetricView::new(dist, metric).band()
}

/// Band variant measured against one designated reference candidate instead
/// of over all pairs: extremes of U(y_i, y_ref) for i != ref.
pub fn similarity_band_to_reference(
    dist: &CandidateDistribution,
    metric: MetricKind,
    reference: usize,
    policy: BandPolicy,
) -> Result<SimilarityBand> {
    if policy == BandPolicy::Strict && !metric.is_band_standard() {
        return Err(Error::MetricNotBandEligible { metric: metric.name() });
    }
    if reference >= dist.len() {
        return Err(Error::IndexOutOfRange { index: reference, len: dist.len() });
    }
    if dist.len() < 2 {
        return Err(Error::BandUndefined { len: dist.len() });
    }
    let view = MetricView::new(dist, metric);
    let mut sigma_min = f64::INFINITY;
    let mut sigma_max = f64::NEG_INFINITY;
    for i in 0..dist.len() {
        if i == reference {
            continue;
        }
        let s = view.sim(i, reference);
        sigma_min = sigma_min.min(s);
        sigma_max = sigma_max.max(s);
    }
    Ok(SimilarityBand { sigma_min, sigma_max })
}

/// Expected utility of a prediction under the distribution:
/// sum_j U(prediction, y_j) p_j.
pub fn expected_utility(
    dist: &CandidateDistribution,
    prediction: &Fingerprint,
    metric: MetricKind,
) -> Result<f64> {
    if prediction.len() != dist.bit_len() {
        return Err(Error::Dimension {
            expected: dist.bit_len(),
            got: prediction.len(),
            index: None,
        });
    }
    let mut total = 0.0;
    for (cand, &p) in dist.candidates().iter().zip(dist.probs()) {
        total += metric.utility(prediction, cand)? * p;
    }
    Ok(total)
}

/// The row-wise envelope for the expected similarity of candidate i:
/// p_i + sigma_min (1 - p_i) <= u_i <= sigma_max + (1 - sigma_max) p_i.
pub fn row_wise_bounds(
    dist: &CandidateDistribution,
    index: usize,
    band: &SimilarityBand,
) -> Result<(f64, f64)> {
    let p = dist.prob(index)?;
    Ok((
        p + band.sigma_min * (1.0 - p),
        band.sigma_max + (1.0 - band.sigma_max) * p,
    ))
}
