//! Bayes-optimal decoders: exhaustive search over the candidate set or the
//! full {0,1}^m hypercube, the probability-mode decoder for HR@1, top-k,
//! the bitwise-marginal decoder, and the closed-form cosine decoder.

use crate::distribution::{expected_utility, CandidateDistribution};
use crate::error::{Error, Result};
use crate::fingerprint::{Fingerprint, MetricKind};

/// Largest m for which full-hypercube enumeration is allowed (~16.7M points).
pub const MAX_HYPERCUBE_BITS: usize = 24;

/// Where a decoder searches for its prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchSpace {
    /// Restrict predictions to the candidate set.
    CandidateSet,
    /// All 2^m binary vectors; only permitted for m <= 24.
    FullHypercube,
}

impl std::str::FromStr for SearchSpace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "candidates" | "candidateset" | "candidate-set" => Ok(SearchSpace::CandidateSet),
            "hypercube" | "fullhypercube" | "full-hypercube" => Ok(SearchSpace::FullHypercube),
            other => Err(Error::InvalidParameter(format!("unknown search space {other:?}"))),
        }
    }
}

/// Outcome of a decode: the prediction, its exact expected utility, and the
/// chosen candidate index when the search was candidate-restricted.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    pub prediction: Fingerprint,
    pub expected_utility: f64,
    pub argmax_index: Option<usize>,
}

/// Exhaustive expected-utility maximization over the chosen space.
/// Ties break toward the lexicographically smallest bitstring (and then the
/// smallest candidate index, for duplicates in the set).
pub fn bayes_brute_force(
    dist: &CandidateDistribution,
    metric: MetricKind,
    space: SearchSpace,
) -> Result<DecodeResult> {
    match space {
        SearchSpace::CandidateSet => brute_force_candidates(dist, metric),
        SearchSpace::FullHypercube => brute_force_hypercube(dist, metric),
    }
}

fn brute_force_candidates(dist: &CandidateDistribution, metric: MetricKind) -> Result<DecodeResult> {
    let mut best: Option<(usize, f64)> = None;
    for (i, cand) in dist.candidates().iter().enumerate() {
        let u = expected_utility(dist, cand, metric)?;
        let better = match best {
            None => true,
            Some((bi, bu)) => {
                u > bu
                    || (u == bu
                        && cand.lex_cmp(&dist.candidates()[bi]) == std::cmp::Ordering::Less)
            }
        };
        if better {
            best = Some((i, u));
        }
    }
    let (index, utility) = best.expect("candidate set is nonempty");
    Ok(DecodeResult {
        prediction: dist.candidates()[index].clone(),
        expected_utility: utility,
        argmax_index: Some(index),
    })
}

fn brute_force_hypercube(dist: &CandidateDistribution, metric: MetricKind) -> Result<DecodeResult> {
    let m = dist.bit_len();
    if m > MAX_HYPERCUBE_BITS {
        return Err(Error::SearchSpaceTooLarge { m, max: MAX_HYPERCUBE_BITS });
    }
    // Any prediction outside the support has zero HR@1 utility, so the
    // hypercube optimum is already a candidate.
    if metric == MetricKind::Hr1 {
        let mut best = brute_force_candidates(dist, metric)?;
        best.argmax_index = None;
        return Ok(best);
    }

    let cand_words: Vec<u64> = dist.candidates().iter().map(|c| c.words()[0]).collect();
    let cand_pops: Vec<f64> = dist.candidates().iter().map(|c| f64::from(c.popcount())).collect();
    let probs = dist.probs();
    let m_f = m as f64;

    let mut best_x = 0u64;
    let mut best_u = f64::NEG_INFINITY;
    for x in 0..(1u64 << m) {
        let pop_x = x.count_ones();
        let mut u = 0.0;
        match metric {
            MetricKind::Tanimoto => {
                for (j, &c) in cand_words.iter().enumerate() {
                    let union = (x | c).count_ones();
                    u += if union == 0 {
                        probs[j]
                    } else {
                        f64::from((x & c).count_ones()) / f64::from(union) * probs[j]
                    };
                }
            }
            MetricKind::Cosine => {
                if pop_x == 0 {
                    for (j, &cp) in cand_pops.iter().enumerate() {
                        if cp == 0.0 {
                            u += probs[j];
                        }
                    }
                } else {
                    let px = f64::from(pop_x);
                    for (j, &c) in cand_words.iter().enumerate() {
                        if cand_pops[j] > 0.0 {
                            u += f64::from((x & c).count_ones()) / (px * cand_pops[j]).sqrt()
                                * probs[j];
                        }
                    }
                }
            }
            MetricKind::Bitwise => {
                for (j, &c) in cand_words.iter().enumerate() {
                    u += (1.0 - f64::from((x ^ c).count_ones()) / m_f) * probs[j];
                }
            }
            MetricKind::Hr1 => unreachable!(),
        }
        if u > best_u || (u == best_u && x.reverse_bits() < best_x.reverse_bits()) {
            best_u = u;
            best_x = x;
        }
    }

    let prediction = Fingerprint::from_word(best_x, m);
    // recompute through the scalar path so the reported utility matches
    // expected_utility() bit for bit
    let utility = expected_utility(dist, &prediction, metric)?;
    Ok(DecodeResult {
        prediction,
        expected_utility: utility,
        argmax_index: None,
    })
}

/// HR@1 decoder: the candidate with the largest conditional probability;
/// ties go to the smallest index. Duplicate candidates are not merged.
pub fn bayes_hr1(dist: &CandidateDistribution) -> DecodeResult {
    let index = dist.argmax_prob();
    let prediction = dist.candidates()[index].clone();
    let utility = expected_utility(dist, &prediction, MetricKind::Hr1)
        .expect("prediction comes from the set");
    DecodeResult {
        prediction,
        expected_utility: utility,
        argmax_index: Some(index),
    }
}

/// HR@k decoder: indices of the k largest probabilities in descending
/// order; ties place the smaller index first.
pub fn bayes_hrk(dist: &CandidateDistribution, k: usize) -> Result<Vec<usize>> {
    if k == 0 || k > dist.len() {
        return Err(Error::KOutOfRange { k, len: dist.len() });
    }
    let mut order: Vec<usize> = (0..dist.len()).collect();
    order.sort_by(|&a, &b| {
        dist.probs()[b]
            .partial_cmp(&dist.probs()[a])
            .expect("probabilities are finite")
            .then(a.cmp(&b))
    });
    order.truncate(k);
    Ok(order)
}

/// Bitwise-accuracy decoder: bit i is set iff the marginal
/// P(Y_i = 1 | x) exceeds 0.5 strictly; an exact 0.5 resolves to 0.
pub fn bayes_bitwise(dist: &CandidateDistribution) -> DecodeResult {
    let m = dist.bit_len();
    let mut marginals = vec![0.0f64; m];
    for (cand, &p) in dist.candidates().iter().zip(dist.probs()) {
        for k in cand.iter_ones() {
            marginals[k] += p;
        }
    }
    let bits: Vec<bool> = marginals.iter().map(|&p1| p1 > 0.5).collect();
    let prediction = Fingerprint::from_bits(&bits);
    let utility = expected_utility(dist, &prediction, MetricKind::Bitwise)
        .expect("prediction has the set's bit length");
    DecodeResult {
        prediction,
        expected_utility: utility,
        argmax_index: None,
    }
}

/// Closed-form cosine decoder: ranks the per-bit weights
/// w_i = sum_j y_{j,i} p_j / ||y_j|| and returns the support maximizing
/// F(s) = (top-s weight sum) / sqrt(s). Matches the hypercube brute force
/// up to expected-utility ties, at O(l m + m log m) cost.
pub fn bayes_cosine_closed_form(dist: &CandidateDistribution) -> Result<DecodeResult> {
    let m = dist.bit_len();
    let mut weights = vec![0.0f64; m];
    for (index, (cand, &p)) in dist.candidates().iter().zip(dist.probs()).enumerate() {
        let pop = cand.popcount();
        if pop == 0 {
            if p > 0.0 {
                return Err(Error::ZeroVectorSupport { index, prob: p });
            }
            continue;
        }
        let inv_norm = 1.0 / f64::from(pop).sqrt();
        for k in cand.iter_ones() {
            weights[k] += p * inv_norm;
        }
    }

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        weights[b]
            .partial_cmp(&weights[a])
            .expect("weights are finite")
            .then(a.cmp(&b))
    });

    let mut best_s = 1;
    let mut best_f = f64::NEG_INFINITY;
    let mut prefix = 0.0;
    for s in 1..=m {
        prefix += weights[order[s - 1]];
        let f = prefix / (s as f64).sqrt();
        if f > best_f {
            best_f = f;
            best_s = s;
        }
    }

    let prediction = Fingerprint::from_indices(m, &order[..best_s])?;
    let utility = expected_utility(dist, &prediction, MetricKind::Cosine)?;
    Ok(DecodeResult {
        prediction,
        expected_utility: utility,
        argmax_index: None,
    })
}

/// The decoding rule a metric's practitioner would actually run, used as the
/// "decode" side of a regret measurement. Bitwise decoding on the hypercube
/// is the marginal vector; everything else is exhaustive over the requested
/// space, so eval and decode sides agree whenever their metrics do (HR@1
/// aggregates duplicate bitstrings on both sides).
pub(crate) fn decode_rule(
    dist: &CandidateDistribution,
    metric: MetricKind,
    space: SearchSpace,
) -> Result<DecodeResult> {
    match (metric, space) {
        (MetricKind::Bitwise, SearchSpace::FullHypercube) => Ok(bayes_bitwise(dist)),
        _ => bayes_brute_force(dist, metric, space),
    }
}
