//! Regret measurement between decoders, the similarity-band regret bounds,
//! the tightness and adversarial constructions that achieve them, and the
//! exact regret decomposition identity.

use serde::{Deserialize, Serialize};

use crate::bayes::{bayes_brute_force, decode_rule, DecodeResult, SearchSpace};
use crate::distribution::{
    expected_utility, similarity_band, BandPolicy, CandidateDistribution, PairwiseSimilarity,
    SimilarityBand,
};
use crate::error::{Error, Result};
use crate::fingerprint::{Fingerprint, MetricKind};

/// Degeneracies that void or weaken a bound on a given instance.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegeneracyFlags {
    /// sigma_max >= 1 - 1e-12 (near-duplicate candidates).
    pub sigma_max_is_one: bool,
    /// Fewer than two candidates, so no band exists.
    pub band_undefined: bool,
}

impl DegeneracyFlags {
    pub fn any(&self) -> bool {
        self.sigma_max_is_one || self.band_undefined
    }
}

/// Which theorem supplied the attached bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// HR@1 decoding evaluated under a similarity metric.
    Hr1DecodeUnderSim,
    /// Similarity decoding evaluated under HR@1.
    SimDecodeUnderHr1,
}

/// Everything a band bound needs: the probability extremes and the band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    /// Largest conditional probability.
    pub p_star: f64,
    /// Probability of the similarity decoder's chosen candidate.
    pub p_sim: f64,
    pub band: SimilarityBand,
    /// p_star minus the second-largest probability.
    pub margin_delta: f64,
}

impl BoundInputs {
    pub fn new(p_star: f64, p_sim: f64, band: SimilarityBand, margin_delta: f64) -> Result<Self> {
        if !(0.0..=1.0 + 1e-9).contains(&p_star) || p_sim < -1e-9 || p_sim > p_star + 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "need 0 <= p_sim <= p_star <= 1, got p_sim = {p_sim}, p_star = {p_star}"
            )));
        }
        if margin_delta < -1e-9 || margin_delta > p_star + 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "need 0 <= margin_delta <= p_star, got {margin_delta}"
            )));
        }
        Ok(BoundInputs { p_star, p_sim, band, margin_delta })
    }

    /// Derive the inputs from a distribution: the band under `metric` and the
    /// candidate-restricted similarity decoder's choice for p_sim.
    pub fn from_distribution(dist: &CandidateDistribution, metric: MetricKind) -> Result<Self> {
        let band = similarity_band(dist, metric, BandPolicy::Strict)?;
        let sim = bayes_brute_force(dist, metric, SearchSpace::CandidateSet)?;
        let i_sim = sim.argmax_index.expect("candidate-set decode returns an index");
        BoundInputs::new(dist.p_star(), dist.probs()[i_sim], band, dist.margin_delta())
    }
}

/// A measured regret together with the applicable theorem bound, if any.
#[derive(Debug, Clone, Serialize)]
pub struct RegretReport {
    pub eval_metric: MetricKind,
    pub decode_metric: MetricKind,
    pub space: SearchSpace,
    /// Expected eval-utility lost by decoding with the other rule; never
    /// negative beyond float noise.
    pub regret: f64,
    /// The matching theorem bound, when (eval, decode) fits a pattern and the
    /// search space is the candidate set.
    pub bound: Option<f64>,
    /// bound - regret.
    pub slack: Option<f64>,
    pub bound_kind: Option<BoundKind>,
    pub degenerate: DegeneracyFlags,
    /// E[U_eval(Y, y*_eval)].
    pub eval_utility: f64,
    /// E[U_eval(Y, y*_decode)].
    pub decode_utility: f64,
    #[serde(serialize_with = "ser_fp")]
    pub eval_prediction: Fingerprint,
    #[serde(serialize_with = "ser_fp")]
    pub decode_prediction: Fingerprint,
}

fn ser_fp<S: serde::Serializer>(fp: &Fingerprint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fp.to_bitstring())
}

/// Regret of decoding with `decode_metric` but evaluating under
/// `eval_metric`, both decoders run on the given space. Attaches the
/// theorem bound when the metric pair matches one and the space is the
/// candidate set (the bounds are proved for candidate-restricted decoders).
pub fn regret_of(
    dist: &CandidateDistribution,
    eval_metric: MetricKind,
    decode_metric: MetricKind,
    space: SearchSpace,
) -> Result<RegretReport> {
    let eval_res = bayes_brute_force(dist, eval_metric, space)?;
    let decode_res = decode_rule(dist, decode_metric, space)?;
    let decode_utility = expected_utility(dist, &decode_res.prediction, eval_metric)?;
    let regret = eval_res.expected_utility - decode_utility;

    let mut report = RegretReport {
        eval_metric,
        decode_metric,
        space,
        regret,
        bound: None,
        slack: None,
        bound_kind: None,
        degenerate: DegeneracyFlags::default(),
        eval_utility: eval_res.expected_utility,
        decode_utility,
        eval_prediction: eval_res.prediction.clone(),
        decode_prediction: decode_res.prediction.clone(),
    };

    if space != SearchSpace::CandidateSet {
        return Ok(report);
    }

    match (eval_metric, decode_metric) {
        (m, MetricKind::Hr1) if m.is_band_standard() => {
            attach_bound(&mut report, dist, m, &eval_res, BoundKind::Hr1DecodeUnderSim)?;
        }
        (MetricKind::Hr1, m) if m.is_band_standard() => {
            attach_bound(&mut report, dist, m, &decode_res, BoundKind::SimDecodeUnderHr1)?;
        }
        _ => {}
    }
    Ok(report)
}

fn attach_bound(
    report: &mut RegretReport,
    dist: &CandidateDistribution,
    sim_metric: MetricKind,
    sim_side: &DecodeResult,
    kind: BoundKind,
) -> Result<()> {
    if dist.len() < 2 {
        report.degenerate.band_undefined = true;
        return Ok(());
    }
    let band = similarity_band(dist, sim_metric, BandPolicy::Strict)?;
    let i_sim = sim_side.argmax_index.expect("candidate-set decode returns an index");
    let inputs = BoundInputs::new(dist.p_star(), dist.probs()[i_sim], band, dist.margin_delta())?;
    report.degenerate.sigma_max_is_one = band.is_degenerate();
    let bound = match kind {
        BoundKind::Hr1DecodeUnderSim => bound_hr1_decode_under_sim(&inputs),
        BoundKind::SimDecodeUnderHr1 => bound_sim_decode_under_hr1(&inputs),
    };
    report.bound = Some(bound);
    report.slack = Some(bound - report.regret);
    report.bound_kind = Some(kind);
    Ok(())
}

/// Upper bound on the regret of HR@1 decoding evaluated under a symmetric
/// similarity metric:
/// [(sigma_max - sigma_min)(1 - p_star - p_sim) - (1 - sigma_max)(p_star - p_sim)]_+.
/// The formula is total (valid even at sigma_max = 1) and tight.
pub fn bound_hr1_decode_under_sim(inputs: &BoundInputs) -> f64 {
    let b = &inputs.band;
    let raw = b.width() * (1.0 - inputs.p_star - inputs.p_sim)
        - (1.0 - b.sigma_max) * (inputs.p_star - inputs.p_sim);
    raw.max(0.0)
}

/// Upper bound on the regret of similarity decoding evaluated under HR@1:
/// min(p_star, (sigma_max - sigma_min) / (1 - sigma_max) * (1 - p_star)).
/// When sigma_max is within 1e-12 of 1 the ratio is undefined and the bound
/// reduces to p_star.
pub fn bound_sim_decode_under_hr1(inputs: &BoundInputs) -> f64 {
    let b = &inputs.band;
    if b.is_degenerate() {
        return inputs.p_star;
    }
    let ratio = b.width() / (1.0 - b.sigma_max) * (1.0 - inputs.p_star);
    inputs.p_star.min(ratio)
}

/// Sufficient condition for the HR@1 mode to attain the maximal expected
/// similarity: margin_delta >= (sigma_max - sigma_min) / (1 - sigma_max) * (1 - p_star).
/// Errors on a degenerate band, where the threshold is undefined.
pub fn agreement_condition(inputs: &BoundInputs) -> Result<bool> {
    let b = &inputs.band;
    if b.is_degenerate() {
        return Err(Error::DegenerateBand);
    }
    let threshold = b.width() / (1.0 - b.sigma_max) * (1.0 - inputs.p_star);
    Ok(inputs.margin_delta >= threshold)
}

/// An abstract candidate-set instance given directly by a symmetric
/// similarity matrix with unit diagonal, rather than by realizable
/// bitvectors. The tightness construction emits these; the regret machinery
/// runs on them through [`PairwiseSimilarity`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TightnessInstance {
    sim: Vec<Vec<f64>>,
    probs: Vec<f64>,
    /// Index of the highest-probability candidate (0 by construction).
    pub i_star: usize,
    /// Index of the similarity-optimal candidate (1 by construction).
    pub i_sim: usize,
}

impl PairwiseSimilarity for TightnessInstance {
    fn len(&self) -> usize {
        self.probs.len()
    }

    fn prob(&self, i: usize) -> f64 {
        self.probs[i]
    }

    fn sim(&self, i: usize, j: usize) -> f64 {
        self.sim[i][j]
    }
}

impl TightnessInstance {
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.sim
    }

    /// Measured regret of HR@1 decoding under the abstract similarity:
    /// max_i u_i - u_{i_star}.
    pub fn measured_regret(&self) -> f64 {
        let u_star = self.row_expected_utility(self.i_star);
        let u_best = self.row_expected_utility(self.sim_argmax());
        u_best - u_star
    }

    pub fn bound_inputs(&self) -> Result<BoundInputs> {
        let band = self.band()?;
        BoundInputs::new(
            self.probs[self.i_star],
            self.probs[self.i_sim],
            band,
            self.probs[self.i_star] - second_largest(&self.probs, self.i_star),
        )
    }

    /// The matching theorem bound on this instance.
    pub fn bound(&self) -> Result<f64> {
        Ok(bound_hr1_decode_under_sim(&self.bound_inputs()?))
    }
}

fn second_largest(probs: &[f64], skip: usize) -> f64 {
    probs
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != skip)
        .map(|(_, &p)| p)
        .fold(0.0, f64::max)
}

/// Build the abstract instance on which the HR@1-under-similarity bound is
/// achieved with equality: the similarity-optimal row sits at sigma_max
/// against everything, the mode's remaining similarities at sigma_min, and
/// the leftover mass is spread evenly over the other l - 2 candidates.
/// Fails when parameters are out of range or the leftover mass is large
/// enough to displace the intended mode or similarity optimum.
pub fn construct_tightness_thm2(
    l: usize,
    p_star: f64,
    p_sim: f64,
    sigma_min: f64,
    sigma_max: f64,
) -> Result<TightnessInstance> {
    if l < 3 {
        return Err(Error::InfeasibleConstruction(format!("need l >= 3, got {l}")));
    }
    if !(0.0..=1.0).contains(&sigma_min) || sigma_min > sigma_max || sigma_max >= 1.0 {
        return Err(Error::InfeasibleConstruction(format!(
            "need 0 <= sigma_min <= sigma_max < 1, got ({sigma_min}, {sigma_max})"
        )));
    }
    if p_sim < 0.0 || p_sim > p_star || p_star + p_sim > 1.0 + 1e-12 {
        return Err(Error::InfeasibleConstruction(format!(
            "need 0 <= p_sim <= p_star and p_star + p_sim <= 1, got ({p_star}, {p_sim})"
        )));
    }
    let residual = ((1.0 - p_star - p_sim) / (l - 2) as f64).max(0.0);
    if residual > p_star {
        return Err(Error::InfeasibleConstruction(format!(
            "residual mass {residual} per filler candidate exceeds p_star = {p_star}; \
             the mode would not sit at i_star"
        )));
    }

    let mut probs = vec![residual; l];
    probs[0] = p_star;
    probs[1] = p_sim;

    let mut sim = vec![vec![sigma_min; l]; l];
    for (i, row) in sim.iter_mut().enumerate() {
        row[i] = 1.0;
        if i != 1 {
            row[1] = sigma_max;
        }
    }
    sim[1] = vec![sigma_max; l];
    sim[1][1] = 1.0;

    let inst = TightnessInstance { sim, probs, i_star: 0, i_sim: 1 };

    // the sim decoder must land on i_sim (or on i_star when the bound
    // clamps to zero); a filler row beating both breaks the construction
    let u_star = inst.row_expected_utility(inst.i_star);
    let u_sim = inst.row_expected_utility(inst.i_sim);
    let cap = u_star.max(u_sim);
    for i in 2..l {
        if inst.row_expected_utility(i) > cap + 1e-12 {
            return Err(Error::InfeasibleConstruction(format!(
                "filler candidate {i} outranks both designated rows; reduce the residual mass"
            )));
        }
    }
    Ok(inst)
}

/// The adversarial distribution driving the Tanimoto regret of bitwise
/// decoding toward 1/2: mass 0.5 - eps on 10...0, mass 0.5 - (2m-3) eps on
/// 01...1, and 2 eps on each of the m - 1 first-bit-zero neighbors of the
/// latter. Every marginal lands just below 1/2, so the bitwise decoder
/// outputs the zero vector and earns zero Tanimoto utility.
pub fn construct_worstcase_bitwise(m: usize, epsilon: f64) -> Result<CandidateDistribution> {
    if m < 3 {
        return Err(Error::InvalidParameter(format!("need m >= 3, got {m}")));
    }
    if epsilon <= 0.0 {
        return Err(Error::InvalidParameter(format!("need epsilon > 0, got {epsilon}")));
    }
    if (2 * m - 3) as f64 * epsilon > 0.5 {
        return Err(Error::InvalidParameter(format!(
            "mass 0.5 - (2m-3) eps would be negative for m = {m}, eps = {epsilon}"
        )));
    }

    let mut candidates = Vec::with_capacity(m + 1);
    let mut probs = Vec::with_capacity(m + 1);

    candidates.push(Fingerprint::from_indices(m, &[0])?);
    probs.push(0.5 - epsilon);

    let ybar: Vec<bool> = (0..m).map(|k| k != 0).collect();
    candidates.push(Fingerprint::from_bits(&ybar));
    probs.push(0.5 - (2 * m - 3) as f64 * epsilon);

    for j in 1..m {
        let mut v = ybar.clone();
        v[j] = false;
        candidates.push(Fingerprint::from_bits(&v));
        probs.push(2.0 * epsilon);
    }

    CandidateDistribution::new(candidates, probs)
}

/// The adversarial distribution driving the regret of HR@1 decoding toward
/// its m-dependent worst case: the zero vector narrowly wins the mode while
/// all the mass sits on the all-ones vector and its one-zero neighbors.
/// Accepts epsilon = 0 (the limiting instance; the mode tie resolves to the
/// zero vector, which is listed first).
pub fn construct_worstcase_hr1(m: usize, epsilon: f64) -> Result<CandidateDistribution> {
    if m <= 3 {
        return Err(Error::InvalidParameter(format!("need m > 3, got {m}")));
    }
    let alpha = 1.0 / (m + 2) as f64 - epsilon;
    if alpha < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "alpha = 1/(m+2) - eps is negative for m = {m}, eps = {epsilon}"
        )));
    }

    let mut candidates = Vec::with_capacity(m + 2);
    let mut probs = Vec::with_capacity(m + 2);

    candidates.push(Fingerprint::zeros(m));
    probs.push(1.0 / (m + 2) as f64 + (m + 1) as f64 * epsilon);

    candidates.push(Fingerprint::ones(m));
    probs.push(alpha);

    for j in 0..m {
        let bits: Vec<bool> = (0..m).map(|k| k != j).collect();
        candidates.push(Fingerprint::from_bits(&bits));
        probs.push(alpha);
    }

    CandidateDistribution::new(candidates, probs)
}

/// The three terms of the exact regret decomposition for an arbitrary rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegretDecomposition {
    /// Full eval-metric regret of the rule.
    pub total: f64,
    /// Bayes-level mismatch between the eval- and via-optimal decoders.
    pub bayes_mismatch: f64,
    /// How far the rule sits from the via-Bayes decoder, seen under eval.
    pub residual: f64,
}

/// Split the eval-metric regret of `rule_prediction` into the Bayes mismatch
/// against the `via_metric` decoder plus a residual. The identity
/// total = bayes_mismatch + residual holds by construction.
pub fn decompose_regret(
    dist: &CandidateDistribution,
    rule_prediction: &Fingerprint,
    eval_metric: MetricKind,
    via_metric: MetricKind,
    space: SearchSpace,
) -> Result<RegretDecomposition> {
    let eval_opt = bayes_brute_force(dist, eval_metric, space)?;
    let via_opt = decode_rule(dist, via_metric, space)?;
    let u_rule = expected_utility(dist, rule_prediction, eval_metric)?;
    let u_via = expected_utility(dist, &via_opt.prediction, eval_metric)?;
    Ok(RegretDecomposition {
        total: eval_opt.expected_utility - u_rule,
        bayes_mismatch: eval_opt.expected_utility - u_via,
        residual: u_via - u_rule,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(s: &str) -> Fingerprint {
        Fingerprint::parse(s).unwrap()
    }

    fn toy() -> CandidateDistribution {
        CandidateDistribution::new(
            vec![fp("11000"), fp("10100"), fp("10010"), fp("11001")],
            vec![0.05, 0.25, 0.30, 0.40],
        )
        .unwrap()
    }

    fn toy_inputs() -> BoundInputs {
        BoundInputs::new(
            0.4,
            0.4,
            SimilarityBand { sigma_min: 0.25, sigma_max: 2.0 / 3.0 },
            0.1,
        )
        .unwrap()
    }

    #[test]
    fn toy_regret_examples() {
        let d = toy();
        // the candidate-restricted Tanimoto decoder picks the mode, so HR@1
        // evaluation sees no regret
        let r = regret_of(&d, MetricKind::Hr1, MetricKind::Tanimoto, SearchSpace::CandidateSet)
            .unwrap();
        assert!(r.regret.abs() < 1e-15);

        for metric in [MetricKind::Tanimoto, MetricKind::Cosine, MetricKind::Hr1] {
            let r = regret_of(&d, metric, metric, SearchSpace::CandidateSet).unwrap();
            assert!(r.regret.abs() < 1e-15);
        }

        let r = regret_of(&d, MetricKind::Tanimoto, MetricKind::Bitwise, SearchSpace::FullHypercube)
            .unwrap();
        assert_eq!(r.decode_prediction, fp("10000"));
        assert!((r.regret - 11.0 / 80.0).abs() < 1e-12);
        assert!(r.bound.is_none()); // hypercube reports carry no bound
    }

    #[test]
    fn toy_bound_attachment() {
        let d = toy();
        let r = regret_of(&d, MetricKind::Tanimoto, MetricKind::Hr1, SearchSpace::CandidateSet)
            .unwrap();
        assert_eq!(r.bound_kind, Some(BoundKind::Hr1DecodeUnderSim));
        assert!((r.bound.unwrap() - 1.0 / 12.0).abs() < 1e-12);
        assert!(r.regret.abs() < 1e-15);
        assert!((r.slack.unwrap() - 1.0 / 12.0).abs() < 1e-12);
        assert!(!r.degenerate.any());

        let r = regret_of(&d, MetricKind::Hr1, MetricKind::Tanimoto, SearchSpace::CandidateSet)
            .unwrap();
        assert_eq!(r.bound_kind, Some(BoundKind::SimDecodeUnderHr1));
        assert!((r.bound.unwrap() - 0.4).abs() < 1e-12);
    }

    #[test]
    fn theorem2_bound_values() {
        assert!((bound_hr1_decode_under_sim(&toy_inputs()) - 1.0 / 12.0).abs() < 1e-12);

        let flat = BoundInputs::new(
            0.7,
            0.7,
            SimilarityBand { sigma_min: 0.3, sigma_max: 0.3 },
            0.5,
        )
        .unwrap();
        assert_eq!(bound_hr1_decode_under_sim(&flat), 0.0);
    }

    #[test]
    fn theorem3_bound_values() {
        assert!((bound_sim_decode_under_hr1(&toy_inputs()) - 0.4).abs() < 1e-12);

        let degenerate = BoundInputs::new(
            0.3,
            0.2,
            SimilarityBand { sigma_min: 0.1, sigma_max: 1.0 },
            0.1,
        )
        .unwrap();
        assert_eq!(bound_sim_decode_under_hr1(&degenerate), 0.3);

        let certain = BoundInputs::new(
            1.0,
            0.9,
            SimilarityBand { sigma_min: 0.1, sigma_max: 0.5 },
            1.0,
        )
        .unwrap();
        assert_eq!(bound_sim_decode_under_hr1(&certain), 0.0);
    }

    #[test]
    fn agreement_examples() {
        let flat = BoundInputs::new(
            0.5,
            0.5,
            SimilarityBand { sigma_min: 0.3, sigma_max: 0.3 },
            0.0,
        )
        .unwrap();
        assert!(agreement_condition(&flat).unwrap());

        let certain = BoundInputs::new(
            1.0,
            1.0,
            SimilarityBand { sigma_min: 0.1, sigma_max: 0.6 },
            0.2,
        )
        .unwrap();
        assert!(agreement_condition(&certain).unwrap());

        // toy margin 0.10 < threshold 0.75; the condition is only sufficient
        assert!(!agreement_condition(&toy_inputs()).unwrap());

        let degenerate = BoundInputs::new(
            0.5,
            0.5,
            SimilarityBand { sigma_min: 0.1, sigma_max: 1.0 },
            0.1,
        )
        .unwrap();
        assert!(matches!(agreement_condition(&degenerate), Err(Error::DegenerateBand)));
    }

    #[test]
    fn tightness_example_hits_the_bound() {
        let inst = construct_tightness_thm2(4, 0.4, 0.3, 0.2, 0.6).unwrap();
        let regret = inst.measured_regret();
        let bound = inst.bound().unwrap();
        assert!((regret - 0.08).abs() < 1e-12);
        assert!((regret - bound).abs() < 1e-12);
    }

    #[test]
    fn tightness_flat_band_clamps_to_zero() {
        let inst = construct_tightness_thm2(5, 0.5, 0.2, 0.4, 0.4).unwrap();
        assert!(inst.measured_regret().abs() < 1e-12);
        assert_eq!(inst.bound().unwrap(), 0.0);
    }

    #[test]
    fn tightness_no_residual_mass() {
        let inst = construct_tightness_thm2(3, 0.5, 0.5, 0.1, 0.7).unwrap();
        assert!(inst.measured_regret().abs() < 1e-12);
        assert!(inst.bound().unwrap().abs() < 1e-12);
    }

    #[test]
    fn tightness_rejects_infeasible_parameters() {
        assert!(construct_tightness_thm2(2, 0.4, 0.3, 0.2, 0.6).is_err());
        assert!(construct_tightness_thm2(4, 0.4, 0.5, 0.2, 0.6).is_err());
        assert!(construct_tightness_thm2(4, 0.6, 0.5, 0.2, 0.6).is_err());
        assert!(construct_tightness_thm2(4, 0.4, 0.3, 0.7, 0.6).is_err());
        assert!(construct_tightness_thm2(4, 0.4, 0.3, 0.2, 1.0).is_err());
        // residual 0.85 outweighs p_star = 0.1
        assert!(construct_tightness_thm2(3, 0.1, 0.05, 0.0, 0.5).is_err());
    }

    #[test]
    fn worstcase_bitwise_m3_table() {
        let d = construct_worstcase_bitwise(3, 0.01).unwrap();
        let got: Vec<(String, f64)> = d
            .candidates()
            .iter()
            .zip(d.probs())
            .map(|(c, &p)| (c.to_bitstring(), p))
            .collect();
        assert_eq!(
            got,
            vec![
                ("100".into(), 0.49),
                ("011".into(), 0.47),
                ("001".into(), 0.02),
                ("010".into(), 0.02),
            ]
        );
    }

    #[test]
    fn worstcase_bitwise_behavior() {
        for (m, eps) in [(3usize, 0.01f64), (5, 0.001), (8, 1e-4)] {
            let d = construct_worstcase_bitwise(m, eps).unwrap();
            let bit = crate::bayes::bayes_bitwise(&d);
            assert!(bit.prediction.is_zero(), "bitwise decode must be the zero vector");
            let r = regret_of(&d, MetricKind::Tanimoto, MetricKind::Bitwise, SearchSpace::FullHypercube)
                .unwrap();
            assert!(r.regret >= 0.5 - eps - 1e-12);
        }
        assert!(construct_worstcase_bitwise(8, 0.05).is_err()); // (2m-3) eps > 0.5
        assert!(construct_worstcase_bitwise(2, 0.01).is_err());
        assert!(construct_worstcase_bitwise(3, 0.0).is_err());
    }

    #[test]
    fn worstcase_hr1_m4_masses() {
        let d = construct_worstcase_hr1(4, 0.0).unwrap();
        assert_eq!(d.len(), 6);
        let sixth = 1.0 / 6.0;
        for &p in d.probs() {
            assert!((p - sixth).abs() < 1e-12);
        }
        let strings: Vec<String> = d.candidates().iter().map(|c| c.to_bitstring()).collect();
        assert_eq!(strings, vec!["0000", "1111", "0111", "1011", "1101", "1110"]);
    }

    #[test]
    fn worstcase_hr1_regrets() {
        for (m, eps) in [(4usize, 0.0f64), (6, 1e-4), (8, 1e-3)] {
            let d = construct_worstcase_hr1(m, eps).unwrap();
            let mf = m as f64;

            let r = regret_of(&d, MetricKind::Bitwise, MetricKind::Hr1, SearchSpace::FullHypercube)
                .unwrap();
            let closed = (mf - 2.0) / (mf + 2.0) - 2.0 * mf * eps;
            assert!(
                (r.regret - closed).abs() < 1e-10,
                "m={m} eps={eps}: bitwise regret {} vs closed form {closed}",
                r.regret
            );

            let r = regret_of(&d, MetricKind::Tanimoto, MetricKind::Hr1, SearchSpace::FullHypercube)
                .unwrap();
            let closed = (mf - 1.0) / (mf + 2.0) - (2.0 * mf + 1.0) * eps;
            assert!((r.regret - closed).abs() < 1e-10);
        }
        assert!(construct_worstcase_hr1(3, 0.01).is_err());
        assert!(construct_worstcase_hr1(6, 0.2).is_err()); // alpha < 0
    }

    #[test]
    fn decomposition_identity() {
        let d = toy();
        let pi = fp("10110");
        let dec = decompose_regret(&d, &pi, MetricKind::Tanimoto, MetricKind::Hr1, SearchSpace::CandidateSet)
            .unwrap();
        assert!((dec.total - (dec.bayes_mismatch + dec.residual)).abs() < 1e-12);

        // rule equal to the via decoder: residual vanishes
        let via = decode_rule(&d, MetricKind::Hr1, SearchSpace::CandidateSet).unwrap();
        let dec = decompose_regret(
            &d,
            &via.prediction,
            MetricKind::Tanimoto,
            MetricKind::Hr1,
            SearchSpace::CandidateSet,
        )
        .unwrap();
        assert_eq!(dec.residual, 0.0);

        // rule equal to the eval decoder: total vanishes, residual mirrors
        // the mismatch
        let opt = bayes_brute_force(&d, MetricKind::Tanimoto, SearchSpace::FullHypercube).unwrap();
        let dec = decompose_regret(
            &d,
            &opt.prediction,
            MetricKind::Tanimoto,
            MetricKind::Bitwise,
            SearchSpace::FullHypercube,
        )
        .unwrap();
        assert!(dec.total.abs() < 1e-15);
        assert!((dec.residual + dec.bayes_mismatch).abs() < 1e-15);

        assert!(decompose_regret(&d, &fp("101"), MetricKind::Tanimoto, MetricKind::Hr1, SearchSpace::CandidateSet)
            .is_err());
    }

    #[test]
    fn regret_never_negative() {
        let d = toy();
        for eval in [MetricKind::Tanimoto, MetricKind::Cosine, MetricKind::Bitwise, MetricKind::Hr1] {
            for decode in [MetricKind::Tanimoto, MetricKind::Cosine, MetricKind::Bitwise, MetricKind::Hr1] {
                for space in [SearchSpace::CandidateSet, SearchSpace::FullHypercube] {
                    let r = regret_of(&d, eval, decode, space).unwrap();
                    assert!(r.regret >= -1e-12, "{eval:?} vs {decode:?} in {space:?}: {}", r.regret);
                }
            }
        }
    }

    #[test]
    fn duplicate_candidates_keep_self_regret_at_zero() {
        // the aggregated bitstring 10 outweighs the per-candidate mode 01
        let d = CandidateDistribution::new(
            vec![fp("10"), fp("01"), fp("10")],
            vec![0.3, 0.4, 0.3],
        )
        .unwrap();
        let r = regret_of(&d, MetricKind::Hr1, MetricKind::Hr1, SearchSpace::CandidateSet).unwrap();
        assert_eq!(r.regret, 0.0);
        assert!(r.degenerate.sigma_max_is_one || r.bound.is_none());
    }
}
