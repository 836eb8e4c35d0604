//! Inference-time retrieval: score a soft prediction against every candidate,
//! rank with an explicit tie policy, and aggregate hit rates over a dataset.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fingerprint::{soft_cosine, soft_tanimoto, tanimoto, Fingerprint, SoftPrediction};
use crate::loss::binarize;

/// The similarity used to score candidates at inference time. Cosine is the
/// default; it retrieves better than Tanimoto across training losses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RetrievalSim {
    Cosine,
    Tanimoto,
}

impl std::str::FromStr for RetrievalSim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cosine" | "cos" => Ok(RetrievalSim::Cosine),
            "tanimoto" | "tan" | "iou" => Ok(RetrievalSim::Tanimoto),
            other => Err(Error::InvalidParameter(format!(
                "unknown retrieval similarity {other:?}"
            ))),
        }
    }
}

/// How candidates with exactly equal scores are ordered inside the top-k
/// cut. The score definition leaves tied membership ambiguous; IndexOrder
/// makes runs reproducible and the other two bracket the ambiguity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TiePolicy {
    /// Ties rank by ascending candidate index.
    #[default]
    IndexOrder,
    /// The true candidate ranks first within its tie group.
    Optimistic,
    /// The true candidate ranks last within its tie group.
    Pessimistic,
}

impl std::str::FromStr for TiePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "index" | "indexorder" => Ok(TiePolicy::IndexOrder),
            "opt" | "optimistic" => Ok(TiePolicy::Optimistic),
            "pess" | "pessimistic" => Ok(TiePolicy::Pessimistic),
            other => Err(Error::InvalidParameter(format!("unknown tie policy {other:?}"))),
        }
    }
}

/// Matching scores of one prediction against a candidate set.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredCandidates {
    pub scores: Vec<f64>,
    pub true_index: usize,
    pub tie_policy: TiePolicy,
}

impl ScoredCandidates {
    pub fn new(scores: Vec<f64>, true_index: usize) -> Result<Self> {
        if true_index >= scores.len() {
            return Err(Error::IndexOutOfRange { index: true_index, len: scores.len() });
        }
        Ok(ScoredCandidates { scores, true_index, tie_policy: TiePolicy::default() })
    }

    pub fn with_tie_policy(mut self, policy: TiePolicy) -> Self {
        self.tie_policy = policy;
        self
    }

    /// 1-based rank of the true candidate under the tie policy.
    pub fn true_rank(&self) -> usize {
        let s_true = self.scores[self.true_index];
        let mut higher = 0usize;
        let mut tied_total = 0usize;
        let mut tied_before = 0usize;
        for (j, &s) in self.scores.iter().enumerate() {
            if j == self.true_index {
                continue;
            }
            if s > s_true {
                higher += 1;
            } else if s == s_true {
                tied_total += 1;
                if j < self.true_index {
                    tied_before += 1;
                }
            }
        }
        match self.tie_policy {
            TiePolicy::IndexOrder => higher + tied_before + 1,
            TiePolicy::Optimistic => higher + 1,
            TiePolicy::Pessimistic => higher + tied_total + 1,
        }
    }
}

/// One evaluation instance: a candidate set that contains the truth, and a
/// soft prediction for it. Probabilities are optional; ranking does not need
/// them.
#[derive(Debug, Clone)]
pub struct RetrievalRecord {
    candidates: Vec<Fingerprint>,
    probs: Option<Vec<f64>>,
    true_index: usize,
    prediction: SoftPrediction,
}

impl RetrievalRecord {
    pub fn new(
        candidates: Vec<Fingerprint>,
        probs: Option<Vec<f64>>,
        true_index: usize,
        prediction: SoftPrediction,
    ) -> Result<Self> {
        if candidates.is_empty() {
            return Err(Error::EmptyCandidateSet);
        }
        if true_index >= candidates.len() {
            return Err(Error::IndexOutOfRange { index: true_index, len: candidates.len() });
        }
        let m = candidates[0].len();
        for (index, c) in candidates.iter().enumerate() {
            if c.len() != m {
                return Err(Error::Dimension { expected: m, got: c.len(), index: Some(index) });
            }
        }
        if prediction.len() != m {
            return Err(Error::Dimension { expected: m, got: prediction.len(), index: None });
        }
        if let Some(p) = &probs {
            if p.len() != candidates.len() {
                return Err(Error::InvalidParameter(format!(
                    "{} candidates but {} probabilities",
                    candidates.len(),
                    p.len()
                )));
            }
        }
        Ok(RetrievalRecord { candidates, probs, true_index, prediction })
    }

    pub fn candidates(&self) -> &[Fingerprint] {
        &self.candidates
    }

    pub fn probs(&self) -> Option<&[f64]> {
        self.probs.as_deref()
    }

    pub fn true_index(&self) -> usize {
        self.true_index
    }

    pub fn truth(&self) -> &Fingerprint {
        &self.candidates[self.true_index]
    }

    pub fn prediction(&self) -> &SoftPrediction {
        &self.prediction
    }
}

/// Score the record's prediction against every candidate. Tanimoto scoring
/// uses the soft ratio (the IoU-loss form); cosine uses the soft cosine.
pub fn score_candidates(record: &RetrievalRecord, sim: RetrievalSim) -> Result<ScoredCandidates> {
    let scores: Vec<f64> = record
        .candidates
        .iter()
        .map(|c| match sim {
            RetrievalSim::Cosine => soft_cosine(&record.prediction, c),
            RetrievalSim::Tanimoto => soft_tanimoto(&record.prediction, c),
        })
        .collect::<Result<_>>()?;
    ScoredCandidates::new(scores, record.true_index)
}

/// 1 iff the true candidate's rank is within the top k.
pub fn hit_rate_at_k(scored: &ScoredCandidates, k: usize) -> Result<u8> {
    if k == 0 || k > scored.scores.len() {
        return Err(Error::KOutOfRange { k, len: scored.scores.len() });
    }
    Ok(u8::from(scored.true_rank() <= k))
}

/// Mean hit rates of a dataset, one column per k, as percentages rounded to
/// two decimals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HitRateTable {
    pub ks: Vec<usize>,
    /// Percentages in [0, 100], rounded to two decimals.
    pub rates_percent: Vec<f64>,
    pub records: usize,
}

/// Evaluate mean HR@k over the dataset for every requested k. A k larger
/// than some record's candidate count is clamped to that count (the whole
/// set is always a hit at k = l).
pub fn evaluate_dataset(
    records: &[RetrievalRecord],
    sim: RetrievalSim,
    ks: &[usize],
    tie_policy: TiePolicy,
) -> Result<HitRateTable> {
    if records.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if ks.is_empty() || ks.contains(&0) {
        return Err(Error::InvalidParameter("k list must be nonempty and positive".into()));
    }
    let mut hits = vec![0usize; ks.len()];
    for record in records {
        let scored = score_candidates(record, sim)?.with_tie_policy(tie_policy);
        let rank = scored.true_rank();
        for (col, &k) in ks.iter().enumerate() {
            if rank <= k.min(record.candidates.len()) {
                hits[col] += 1;
            }
        }
    }
    let n = records.len() as f64;
    let rates_percent = hits
        .iter()
        .map(|&h| (h as f64 / n * 10000.0).round() / 100.0)
        .collect();
    Ok(HitRateTable { ks: ks.to_vec(), rates_percent, records: records.len() })
}

/// Mean Tanimoto similarity of the binarized predictions to the true
/// fingerprints.
pub fn mean_tanimoto(records: &[RetrievalRecord], threshold: f64) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut total = 0.0;
    for record in records {
        let bin = binarize(&record.prediction, threshold)?;
        total += tanimoto(&bin, record.truth())?;
    }
    Ok(total / records.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(s: &str) -> Fingerprint {
        Fingerprint::parse(s).unwrap()
    }

    fn soft(v: &[f64]) -> SoftPrediction {
        SoftPrediction::new(v.to_vec()).unwrap()
    }

    fn toy_record(prediction: SoftPrediction, true_index: usize) -> RetrievalRecord {
        RetrievalRecord::new(
            vec![fp("11000"), fp("10100"), fp("10010"), fp("11001")],
            Some(vec![0.05, 0.25, 0.30, 0.40]),
            true_index,
            prediction,
        )
        .unwrap()
    }

    #[test]
    fn scoring_examples() {
        let rec = toy_record(SoftPrediction::from_fingerprint(&fp("11001")), 3);
        let scored = score_candidates(&rec, RetrievalSim::Cosine).unwrap();
        assert_eq!(scored.scores[3], 1.0);
        for &s in &scored.scores[..3] {
            assert!(s < 1.0);
        }

        let single = RetrievalRecord::new(
            vec![fp("101")],
            None,
            0,
            soft(&[0.9, 0.2, 0.4]),
        )
        .unwrap();
        assert_eq!(score_candidates(&single, RetrievalSim::Tanimoto).unwrap().scores.len(), 1);

        let zero = toy_record(soft(&[0.0; 5]), 3);
        let scored = score_candidates(&zero, RetrievalSim::Cosine).unwrap();
        assert!(scored.scores.iter().all(|&s| s == 0.0));
    }

    #[test]
    fn hit_rate_examples() {
        let top = ScoredCandidates::new(vec![0.9, 0.3, 0.5], 0).unwrap();
        assert_eq!(hit_rate_at_k(&top, 1).unwrap(), 1);
        assert_eq!(hit_rate_at_k(&top, 3).unwrap(), 1);

        let bottom = ScoredCandidates::new(vec![0.9, 0.3, 0.5], 1).unwrap();
        assert_eq!(hit_rate_at_k(&bottom, 1).unwrap(), 0);
        assert_eq!(hit_rate_at_k(&bottom, 3).unwrap(), 1); // k = l always hits

        assert!(hit_rate_at_k(&top, 0).is_err());
        assert!(hit_rate_at_k(&top, 4).is_err());
    }

    #[test]
    fn tie_policies_bracket_the_ambiguity() {
        // true candidate ties the leader at a smaller index
        let scored = ScoredCandidates::new(vec![0.9, 0.9, 0.1], 1).unwrap();
        assert_eq!(hit_rate_at_k(&scored.clone().with_tie_policy(TiePolicy::IndexOrder), 1).unwrap(), 0);
        assert_eq!(hit_rate_at_k(&scored.clone().with_tie_policy(TiePolicy::Optimistic), 1).unwrap(), 1);
        assert_eq!(hit_rate_at_k(&scored.with_tie_policy(TiePolicy::Pessimistic), 1).unwrap(), 0);

        let scored = ScoredCandidates::new(vec![0.9, 0.9, 0.1], 0).unwrap();
        assert_eq!(hit_rate_at_k(&scored.clone().with_tie_policy(TiePolicy::IndexOrder), 1).unwrap(), 1);
        assert_eq!(hit_rate_at_k(&scored.with_tie_policy(TiePolicy::Pessimistic), 1).unwrap(), 0);
    }

    #[test]
    fn ranks_are_monotone_in_k() {
        let scored = ScoredCandidates::new(vec![0.2, 0.8, 0.8, 0.5], 0).unwrap();
        let mut prev = 0;
        for k in 1..=4 {
            let h = hit_rate_at_k(&scored, k).unwrap();
            assert!(h >= prev);
            prev = h;
        }
    }

    #[test]
    fn dataset_evaluation() {
        let hit = toy_record(SoftPrediction::from_fingerprint(&fp("11001")), 3);
        let miss = toy_record(SoftPrediction::from_fingerprint(&fp("11001")), 1);
        let table = evaluate_dataset(
            &[hit.clone(), miss.clone()],
            RetrievalSim::Cosine,
            &[1, 2, 4],
            TiePolicy::IndexOrder,
        )
        .unwrap();
        assert_eq!(table.rates_percent[0], 50.0);
        assert_eq!(*table.rates_percent.last().unwrap(), 100.0);
        // columns nondecreasing in k
        for w in table.rates_percent.windows(2) {
            assert!(w[0] <= w[1]);
        }

        // record order does not matter
        let swapped = evaluate_dataset(
            &[miss, hit],
            RetrievalSim::Cosine,
            &[1, 2, 4],
            TiePolicy::IndexOrder,
        )
        .unwrap();
        assert_eq!(table.rates_percent, swapped.rates_percent);

        assert!(matches!(
            evaluate_dataset(&[], RetrievalSim::Cosine, &[1], TiePolicy::IndexOrder),
            Err(Error::EmptyDataset)
        ));
    }

    #[test]
    fn perfect_predictions_hit_everywhere() {
        let rec = toy_record(SoftPrediction::from_fingerprint(&fp("11001")), 3);
        let table =
            evaluate_dataset(&[rec], RetrievalSim::Cosine, &[1, 2, 3, 4], TiePolicy::Pessimistic)
                .unwrap();
        assert!(table.rates_percent.iter().all(|&r| r == 100.0));
    }

    #[test]
    fn optimistic_dominates_index_dominates_pessimistic() {
        let recs: Vec<RetrievalRecord> = (0..4)
            .map(|i| toy_record(soft(&[0.5, 0.5, 0.5, 0.5, 0.5]), i))
            .collect();
        let rates: Vec<Vec<f64>> = [TiePolicy::Optimistic, TiePolicy::IndexOrder, TiePolicy::Pessimistic]
            .iter()
            .map(|&tp| {
                evaluate_dataset(&recs, RetrievalSim::Cosine, &[1, 2], tp)
                    .unwrap()
                    .rates_percent
            })
            .collect();
        for w in rates.windows(2) {
            for (hi, lo) in w[0].iter().zip(&w[1]) {
                assert!(hi >= lo);
            }
        }
    }

    #[test]
    fn binary_predictions_reproduce_the_exact_metrics() {
        use crate::fingerprint::cosine;
        let pred = fp("11001");
        let rec = toy_record(SoftPrediction::from_fingerprint(&pred), 3);
        let cos_scores = score_candidates(&rec, RetrievalSim::Cosine).unwrap();
        let tan_scores = score_candidates(&rec, RetrievalSim::Tanimoto).unwrap();
        for (i, c) in rec.candidates().iter().enumerate() {
            assert!((cos_scores.scores[i] - cosine(&pred, c).unwrap()).abs() < 1e-12);
            assert!((tan_scores.scores[i] - tanimoto(&pred, c).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn mean_tanimoto_examples() {
        let exact = toy_record(SoftPrediction::from_fingerprint(&fp("11001")), 3);
        assert_eq!(mean_tanimoto(&[exact], 0.5).unwrap(), 1.0);

        let rec = RetrievalRecord::new(
            vec![fp("10100")],
            None,
            0,
            SoftPrediction::from_fingerprint(&fp("11000")),
        )
        .unwrap();
        assert!((mean_tanimoto(&[rec], 0.5).unwrap() - 1.0 / 3.0).abs() < 1e-12);

        // strict threshold: all-0.5 scores binarize to the zero vector
        let rec = toy_record(soft(&[0.5; 5]), 3);
        let m = mean_tanimoto(&[rec], 0.5).unwrap();
        assert_eq!(m, 0.0);

        assert!(mean_tanimoto(&[], 0.5).is_err());
    }

    #[test]
    fn record_validation() {
        assert!(RetrievalRecord::new(vec![], None, 0, soft(&[0.5])).is_err());
        assert!(RetrievalRecord::new(vec![fp("10")], None, 1, soft(&[0.5, 0.5])).is_err());
        assert!(RetrievalRecord::new(vec![fp("10")], None, 0, soft(&[0.5, 0.5, 0.5])).is_err());
        assert!(RetrievalRecord::new(vec![fp("10"), fp("011")], None, 0, soft(&[0.5, 0.5])).is_err());
    }
}
