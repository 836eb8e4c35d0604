//! Randomized verification of every cross-module property: the regret
//! bounds, the closed-form cosine decoder, the decomposition identity, the
//! tightness and worst-case constructions, gradient correctness, and loss
//! consistency. Each property runs on its own deterministic stream derived
//! from the suite seed, reports its worst observed margin, and passes or
//! fails against the configured tolerances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bayes::{
    bayes_brute_force, bayes_cosine_closed_form, bayes_hr1, bayes_hrk, SearchSpace,
};
use crate::config::Tolerances;
use crate::distribution::{
    expected_utility, similarity_band, BandPolicy, CandidateDistribution, MetricView,
    PairwiseSimilarity,
};
use crate::error::Result;
use crate::fingerprint::{soft_cosine, tanimoto, Fingerprint, MetricKind, SoftPrediction};
use crate::loss::{bce_loss, binarize, cosine_loss, focal_loss, grad_check, iou_loss, LossKind};
use crate::regret::{
    agreement_condition, construct_tightness_thm2, construct_worstcase_bitwise,
    construct_worstcase_hr1, regret_of, BoundInputs, decompose_regret,
};

/// Options for one suite run.
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Trial count for the large sweeps; derived counts scale from it
    /// (closed-form and loss checks run trials/10, tightness trials/100).
    pub trials: usize,
    /// Largest bit length for the bound sweeps.
    pub max_m: usize,
    /// Largest candidate count for the bound sweeps.
    pub max_l: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            trials: 10_000,
            max_m: 16,
            max_l: 32,
            seed: 42,
            tolerances: Tolerances::default(),
        }
    }
}

/// Outcome of one property over its trials.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub skipped: usize,
    /// The extreme value the property tracks; its meaning is in `detail`.
    pub worst: f64,
    pub detail: String,
}

impl PropertyResult {
    fn vacuous(name: &str) -> Self {
        PropertyResult {
            name: name.to_string(),
            passed: true,
            checked: 0,
            skipped: 0,
            worst: 0.0,
            detail: "vacuous: zero trials requested".into(),
        }
    }
}

/// A named check the suite can run.
pub struct Property {
    pub name: &'static str,
    pub run: Box<dyn Fn(&VerifyOptions) -> PropertyResult>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub trials: usize,
    pub properties: Vec<PropertyResult>,
    pub passed: bool,
    pub warning: Option<String>,
}

impl SuiteReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        if let Some(w) = &self.warning {
            out.push_str(&format!("warning: {w}\n"));
        }
        for p in &self.properties {
            out.push_str(&format!(
                "{} {:<24} checked={:<7} skipped={:<6} worst={:<13.6e} {}\n",
                if p.passed { "PASS" } else { "FAIL" },
                p.name,
                p.checked,
                p.skipped,
                p.worst,
                p.detail
            ));
        }
        out.push_str(&format!(
            "suite: {} ({} properties, seed {})\n",
            if self.passed { "PASS" } else { "FAIL" },
            self.properties.len(),
            self.seed
        ));
        out
    }
}

fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Random fingerprint with a given per-bit density; optionally forced
/// nonzero by setting a random bit.
pub fn random_fingerprint(rng: &mut ChaCha8Rng, m: usize, density: f64, nonzero: bool) -> Fingerprint {
    let mut bits: Vec<bool> = (0..m).map(|_| rng.random_bool(density)).collect();
    if nonzero && bits.iter().all(|&b| !b) {
        let k = rng.random_range(0..m);
        bits[k] = true;
    }
    Fingerprint::from_bits(&bits)
}

/// Random candidate distribution: per-set bit density in [0.15, 0.85] and
/// probabilities drawn uniformly from the simplex.
pub fn random_distribution(
    rng: &mut ChaCha8Rng,
    m_range: (usize, usize),
    l_range: (usize, usize),
    nonzero_candidates: bool,
) -> CandidateDistribution {
    let m = rng.random_range(m_range.0..=m_range.1);
    let l = rng.random_range(l_range.0..=l_range.1);
    let density = rng.random_range(0.15..0.85);
    let candidates: Vec<Fingerprint> = (0..l)
        .map(|_| random_fingerprint(rng, m, density, nonzero_candidates))
        .collect();
    // unit-rate exponentials normalized to the simplex
    let mut probs: Vec<f64> = (0..l)
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let sum: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= sum;
    }
    CandidateDistribution::new(candidates, probs).expect("generated probabilities are valid")
}

fn random_interior_soft(rng: &mut ChaCha8Rng, m: usize, margin: f64) -> SoftPrediction {
    SoftPrediction::new((0..m).map(|_| rng.random_range(margin..1.0 - margin)).collect())
        .expect("interior scores are valid")
}

fn random_metric(rng: &mut ChaCha8Rng) -> MetricKind {
    match rng.random_range(0..4u8) {
        0 => MetricKind::Tanimoto,
        1 => MetricKind::Cosine,
        2 => MetricKind::Bitwise,
        _ => MetricKind::Hr1,
    }
}

fn sim_metric(rng: &mut ChaCha8Rng) -> MetricKind {
    if rng.random_bool(0.5) {
        MetricKind::Tanimoto
    } else {
        MetricKind::Cosine
    }
}

/// Row-wise bounds: the expected similarity of every candidate sits inside
/// its probability/band envelope.
pub fn prop_row_wise_bounds(opts: &VerifyOptions) -> PropertyResult {
    let mut rng = rng_for(opts.seed, 1);
    let tol = opts.tolerances.row_bounds;
    let mut worst: f64 = f64::NEG_INFINITY; // largest violation of either side
    let mut checked = 0;
    for _ in 0..opts.trials {
        let d = random_distribution(&mut rng, (4, 64), (2, opts.max_l.max(2)), false);
        let metric = sim_metric(&mut rng);
        let band = similarity_band(&d, metric, BandPolicy::Strict).expect("l >= 2");
        let view = MetricView::new(&d, metric);
        for i in 0..d.len() {
            let u = view.row_expected_utility(i);
            let (lo, hi) = crate::distribution::row_wise_bounds(&d, i, &band).expect("index valid");
            worst = worst.max(lo - u).max(u - hi);
            checked += 1;
        }
    }
    PropertyResult {
        name: "row-wise-bounds".into(),
        passed: worst <= tol,
        checked,
        skipped: 0,
        worst,
        detail: format!("max envelope violation (tolerance {tol:.0e})"),
    }
}

/// Closed-form cosine decoder equals hypercube brute force in expected
/// utility, and its support passes the exchange-optimality check.
pub fn prop_theorem1_closed_form(opts: &VerifyOptions) -> PropertyResult {
    let mut rng = rng_for(opts.seed, 2);
    let trials = (opts.trials / 10).max(1);
    let tol = opts.tolerances.closed_form;
    let mut worst: f64 = 0.0;
    let mut exchange_ok = true;
    for _ in 0..trials {
        let d = random_distribution(&mut rng, (2, 12), (1, 16), true);
        let closed = bayes_cosine_closed_form(&d).expect("support is nonzero");
        let brute = bayes_brute_force(&d, MetricKind::Cosine, SearchSpace::FullHypercube)
            .expect("m <= 12");
        worst = worst.max((closed.expected_utility - brute.expected_utility).abs());

        // exchange optimality: no unselected index may carry a strictly
        // larger weight than a selected one
        let mut weights = vec![0.0f64; d.bit_len()];
        for (cand, &p) in d.candidates().iter().zip(d.probs()) {
            let norm = f64::from(cand.popcount()).sqrt();
            for k in cand.iter_ones() {
                weights[k] += p / norm;
            }
        }
        let selected_min = closed
            .prediction
            .iter_ones()
            .map(|k| weights[k])
            .fold(f64::INFINITY, f64::min);
        let unselected_max = (0..d.bit_len())
            .filter(|&k| !closed.prediction.get(k))
            .map(|k| weights[k])
            .fold(f64::NEG_INFINITY, f64::max);
        if unselected_max > selected_min + 1e-12 {
            exchange_ok = false;
        }
    }
    PropertyResult {
        name: "theorem1-closed-form".into(),
        passed: worst <= tol && exchange_ok,
        checked: trials,
        skipped: 0,
        worst,
        detail: format!(
            "max |closed-form - brute-force| utility gap (tolerance {tol:.0e}); exchange check {}",
            if exchange_ok { "ok" } else { "VIOLATED" }
        ),
    }
}

fn bound_sweep(opts: &VerifyOptions, salt: u64, hr1_decodes: bool) -> PropertyResult {
    let mut rng = rng_for(opts.seed, salt);
    let tol = opts.tolerances.bound_slack;
    let mut worst = f64::INFINITY; // smallest slack
    let mut checked = 0;
    let mut skipped = 0;
    for _ in 0..opts.trials {
        let d = random_distribution(&mut rng, (4, opts.max_m.max(4)), (2, opts.max_l.max(2)), false);
        let metric = sim_metric(&mut rng);
        let (eval, decode) = if hr1_decodes {
            (metric, MetricKind::Hr1)
        } else {
            (MetricKind::Hr1, metric)
        };
        let r = regret_of(&d, eval, decode, SearchSpace::CandidateSet).expect("valid instance");
        if r.degenerate.any() {
            skipped += 1;
            continue;
        }
        let slack = r.slack.expect("bound attaches on candidate-set metric pairs");
        worst = worst.min(slack);
        checked += 1;
    }
    let name = if hr1_decodes { "theorem2-bound" } else { "theorem3-bound" };
    PropertyResult {
        name: name.into(),
        passed: checked == 0 || worst >= -tol,
        checked,
        skipped,
        worst,
        detail: format!("min slack = bound - regret (must stay above -{tol:.0e}); degenerate sets skipped"),
    }
}

/// Theorem bound sweep: HR@1 decoding evaluated under a similarity metric.
pub fn prop_theorem2_bound(opts: &VerifyOptions) -> PropertyResult {
    bound_sweep(opts, 3, true)
}

/// Theorem bound sweep: similarity decoding evaluated under HR@1.
pub fn prop_theorem3_bound(opts: &VerifyOptions) -> PropertyResult {
    bound_sweep(opts, 4, false)
}

/// The tightness construction achieves its bound with equality.
pub fn prop_tightness(opts: &VerifyOptions) -> PropertyResult {
    let mut rng = rng_for(opts.seed, 5);
    let wanted = (opts.trials / 100).max(1);
    let tol = opts.tolerances.tightness;
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    let mut attempts = 0;
    while checked < wanted && attempts < wanted * 200 {
        attempts += 1;
        let l = rng.random_range(3..=12);
        let sigma_min = rng.random_range(0.0..0.9);
        let sigma_max = rng.random_range(sigma_min..0.95);
        let p_star: f64 = rng.random_range(0.05..0.95);
        let p_sim = rng.random_range(0.0..p_star.min(1.0 - p_star));
        let Ok(inst) = construct_tightness_thm2(l, p_star, p_sim, sigma_min, sigma_max) else {
            continue;
        };
        let gap = (inst.measured_regret() - inst.bound().expect("band exists")).abs();
        worst = worst.max(gap);
        checked += 1;
    }
    PropertyResult {
        name: "tightness-thm2".into(),
        passed: checked == wanted && worst <= tol,
        checked,
        skipped: attempts - checked,
        worst,
        detail: format!("max |regret - bound| over feasible draws (tolerance {tol:.0e})"),
    }
}

/// Whenever the agreement condition holds, the mode attains the maximal
/// expected similarity.
pub fn prop_agreement(opts: &VerifyOptions) -> PropertyResult {
    let mut rng = rng_for(opts.seed, 6);
    let tol = opts.tolerances.agreement;
    let mut worst = f64::INFINITY; // smallest (u_mode - u_max), only when condition true
    let mut held = 0;
    let mut checked = 0;
    let mut skipped = 0;
    for _ in 0..opts.trials {
        let d = random_distribution(&mut rng, (4, opts.max_m.max(4)), (2, opts.max_l.max(2)), false);
        let metric = sim_metric(&mut rng);
        let inputs = BoundInputs::from_distribution(&d, metric).expect("l >= 2");
        if inputs.band.is_degenerate() {
            skipped += 1;
            continue;
        }
        checked += 1;
        if !agreement_condition(&inputs).expect("band is nondegenerate") {
            continue;
        }
        held += 1;
        let view = MetricView::new(&d, metric);
        let u_mode = view.row_expected_utility(d.argmax_prob());
        let u_max = view.row_expected_utility(view.sim_argmax());
        worst = worst.min(u_mode - u_max);
    }
    let passed = held == 0 || worst >= -tol;
    let worst = if held == 0 { 0.0 } else { worst };
    PropertyResult {
        name: "agreement-sufficiency".into(),
        passed,
        checked,
        skipped,
        worst,
        detail: format!(
            "condition held {held} times; min u_mode - u_max when it held {worst:.3e} (tolerance {tol:.0e})"
        ),
    }
}

/// The bitwise worst-case family: the bitwise decoder collapses to the zero
/// vector and its Tanimoto regret approaches 1/2 from below as eps shrinks.
pub fn prop_worstcase_bitwise(_opts: &VerifyOptions) -> PropertyResult {
    let mut worst = f64::INFINITY; // minimum margin over the grid
    let mut checked = 0;
    let mut monotone = true;
    let mut decoded_zero = true;
    for &m in &[3usize, 5, 8] {
        let mut prev = f64::NEG_INFINITY;
        for &eps in &[1e-2f64, 1e-3, 1e-4] {
            let d = construct_worstcase_bitwise(m, eps).expect("valid parameters");
            if !crate::bayes::bayes_bitwise(&d).prediction.is_zero() {
                decoded_zero = false;
            }
            let r = regret_of(&d, MetricKind::Tanimoto, MetricKind::Bitwise, SearchSpace::FullHypercube)
                .expect("m <= 24");
            let floor = 0.5 - (2 * m + 2) as f64 * eps;
            worst = worst.min(r.regret - floor);
            if r.regret + 1e-12 < prev {
                monotone = false;
            }
            prev = r.regret;
            checked += 1;
        }
    }
    PropertyResult {
        name: "worstcase-bitwise".into(),
        passed: worst >= -1e-12 && monotone && decoded_zero,
        checked,
        skipped: 0,
        worst,
        detail: format!(
            "min regret margin over 0.5 - (2m+2)eps; monotone {}; zero decode {}",
            monotone, decoded_zero
        ),
    }
}

/// The HR@1 worst-case family: the measured bitwise regret matches its
/// closed form (m-2)/(m+2) - 2 m eps.
pub fn prop_worstcase_hr1(opts: &VerifyOptions) -> PropertyResult {
    let tol = opts.tolerances.worstcase_hr1;
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for &m in &[4usize, 6, 8] {
        for &eps in &[1e-3f64, 1e-4] {
            let d = construct_worstcase_hr1(m, eps).expect("valid parameters");
            let r = regret_of(&d, MetricKind::Bitwise, MetricKind::Hr1, SearchSpace::FullHypercube)
                .expect("m <= 24");
            let mf = m as f64;
            let closed = (mf - 2.0) / (mf + 2.0) - 2.0 * mf * eps;
            worst = worst.max((r.regret - closed).abs());
            checked += 1;
        }
    }
    PropertyResult {
        name: "worstcase-hr1".into(),
        passed: worst <= tol,
        checked,
        skipped: 0,
        worst,
        detail: format!("max |bitwise regret - closed form| (tolerance {tol:.0e})"),
    }
}

/// total = bayes_mismatch + residual, exactly.
pub fn prop_decomposition(opts: &VerifyOptions) -> PropertyResult {
    let mut rng = rng_for(opts.seed, 7);
    let tol = opts.tolerances.identity;
    let mut worst: f64 = 0.0;
    for trial in 0..opts.trials {
        let d = random_distribution(&mut rng, (2, 12), (2, 16), false);
        let pi = random_fingerprint(&mut rng, d.bit_len(), 0.5, false);
        let eval = random_metric(&mut rng);
        let via = random_metric(&mut rng);
        let space = if trial % 4 == 0 {
            SearchSpace::FullHypercube
        } else {
            SearchSpace::CandidateSet
        };
        let dec = decompose_regret(&d, &pi, eval, via, space).expect("dimensions agree");
        worst = worst.max((dec.total - (dec.bayes_mismatch + dec.residual)).abs());
    }
    PropertyResult {
        name: "decomposition-identity".into(),
        passed: worst <= tol,
        checked: opts.trials,
        skipped: 0,
        worst,
        detail: format!("max |total - (mismatch + residual)| (tolerance {tol:.0e})"),
    }
}

/// A 1e-6 central difference carries cancellation roundoff of order
/// |loss| * eps / (2 step); a coordinate whose true slope sits near that
/// floor cannot be adjudicated at 1e-4 no matter how correct the analytic
/// gradient is. Probe each coordinate with a coarse, noise-robust central
/// difference (independent of the gradient code under test) and reject the
/// point when any slope falls below the floor.
fn well_conditioned_point(kind: &LossKind, p: &SoftPrediction) -> bool {
    const PROBE_STEP: f64 = 1e-3;
    let Ok(at) = kind.evaluate(p) else { return false };
    let floor = 5e-5 * (1.0 + at.value.abs());
    let mut scores = p.scores().to_vec();
    for k in 0..scores.len() {
        let orig = scores[k];
        scores[k] = orig + PROBE_STEP;
        let up = kind.evaluate(&SoftPrediction::new(scores.clone()).expect("interior"));
        scores[k] = orig - PROBE_STEP;
        let down = kind.evaluate(&SoftPrediction::new(scores.clone()).expect("interior"));
        scores[k] = orig;
        let (Ok(up), Ok(down)) = (up, down) else { return false };
        if ((up.value - down.value) / (2.0 * PROBE_STEP)).abs() < floor {
            return false;
        }
    }
    true
}

/// Every loss gradient passes its central-difference check at
/// well-conditioned points.
pub fn prop_grad_check(opts: &VerifyOptions) -> PropertyResult {
    let mut rng = rng_for(opts.seed, 8);
    let trials = (opts.trials / 10).max(1);
    let tol = opts.tolerances.grad_check;
    let mut worst: f64 = 0.0;
    let mut worst_loss = "";
    let mut checked = 0;
    let mut skipped = 0;
    let mut attempts = 0;
    while checked < trials && attempts < trials * 10 {
        attempts += 1;
        let m = rng.random_range(2..=16);
        let truth = random_fingerprint(&mut rng, m, 0.5, true);
        // scores well inside (0, 1): large focal gammas flatten the
        // gradient near the boundary long before the clamp matters
        let p = random_interior_soft(&mut rng, m, 0.1);
        let gamma = [0.5, 2.0, 5.0][rng.random_range(0..3usize)];
        let tau = [0.25, 1.0, 4.0][rng.random_range(0..3usize)];
        let dist = random_distribution(&mut rng, (m, m), (2, 8), true);
        let true_index = rng.random_range(0..dist.len());
        let kinds = [
            LossKind::Bce { truth: &truth },
            LossKind::Focal { truth: &truth, gamma },
            LossKind::Cosine { truth: &truth },
            LossKind::Iou { truth: &truth },
            LossKind::ContrastiveFpCos { dist: &dist, true_index, tau },
        ];
        if kinds.iter().any(|kind| !well_conditioned_point(kind, &p)) {
            skipped += 1;
            continue;
        }
        checked += 1;
        for kind in &kinds {
            let err = grad_check(kind, &p, 1e-6).expect("interior point");
            if err > worst {
                worst = err;
                worst_loss = kind.name();
            }
        }
    }
    PropertyResult {
        name: "gradient-check".into(),
        passed: checked == trials && worst < tol,
        checked: checked * 5,
        skipped,
        worst,
        detail: format!("max relative error {worst:.3e}, worst on {worst_loss} (tolerance {tol:.0e})"),
    }
}

/// focal(gamma = 0) = BCE, cosine loss = 1 - soft cosine, and binary-input
/// IoU loss = 1 - Tanimoto.
pub fn prop_loss_consistency(opts: &VerifyOptions) -> PropertyResult {
    let mut rng = rng_for(opts.seed, 9);
    let trials = (opts.trials / 10).max(1);
    let tol = opts.tolerances.loss_consistency;
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let m = rng.random_range(1..=32);
        let truth = random_fingerprint(&mut rng, m, 0.5, true);
        let p = random_interior_soft(&mut rng, m, 1e-6);

        let f = focal_loss(&truth, &p, 0.0).expect("dims agree");
        let b = bce_loss(&truth, &p).expect("dims agree");
        worst = worst.max((f.value - b.value).abs());

        let c = cosine_loss(&truth, &p).expect("nonzero truth");
        worst = worst.max((c.value - (1.0 - soft_cosine(&p, &truth).expect("dims agree"))).abs());

        let bin = binarize(&p, 0.5).expect("threshold in range");
        let i = iou_loss(&truth, &SoftPrediction::from_fingerprint(&bin)).expect("dims agree");
        worst = worst
            .max((i.value - (1.0 - tanimoto(&truth, &bin).expect("dims agree"))).abs());
    }
    PropertyResult {
        name: "loss-consistency".into(),
        passed: worst <= tol,
        checked: trials * 3,
        skipped: 0,
        worst,
        detail: format!("max identity residue (tolerance {tol:.0e})"),
    }
}

/// Decoded predictions dominate every candidate; hypercube decodes dominate
/// candidate-set decodes; HR@k at k = 1 matches HR@1.
pub fn prop_decoder_dominance(opts: &VerifyOptions) -> PropertyResult {
    let mut rng = rng_for(opts.seed, 10);
    let trials = (opts.trials / 20).max(1);
    let mut worst = f64::INFINITY;
    let mut hrk_consistent = true;
    for _ in 0..trials {
        let d = random_distribution(&mut rng, (2, 10), (2, 16), false);
        for metric in [MetricKind::Tanimoto, MetricKind::Cosine, MetricKind::Bitwise, MetricKind::Hr1] {
            let cand = bayes_brute_force(&d, metric, SearchSpace::CandidateSet).expect("valid");
            for c in d.candidates() {
                let u = expected_utility(&d, c, metric).expect("dims agree");
                worst = worst.min(cand.expected_utility - u);
            }
            let hyper = bayes_brute_force(&d, metric, SearchSpace::FullHypercube).expect("m <= 24");
            worst = worst.min(hyper.expected_utility - cand.expected_utility);
        }
        if bayes_hrk(&d, 1).expect("k = 1")[0] != bayes_hr1(&d).argmax_index.unwrap() {
            hrk_consistent = false;
        }
    }
    PropertyResult {
        name: "decoder-dominance".into(),
        passed: worst >= -1e-12 && hrk_consistent,
        checked: trials,
        skipped: 0,
        worst,
        detail: format!("min dominance margin; hrk(1) == hr1 {hrk_consistent}"),
    }
}

/// The full standard property set.
pub fn standard_properties() -> Vec<Property> {
    fn boxed(f: fn(&VerifyOptions) -> PropertyResult) -> Box<dyn Fn(&VerifyOptions) -> PropertyResult> {
        Box::new(f)
    }
    vec![
        Property { name: "row-wise-bounds", run: boxed(prop_row_wise_bounds) },
        Property { name: "theorem1-closed-form", run: boxed(prop_theorem1_closed_form) },
        Property { name: "theorem2-bound", run: boxed(prop_theorem2_bound) },
        Property { name: "theorem3-bound", run: boxed(prop_theorem3_bound) },
        Property { name: "tightness-thm2", run: boxed(prop_tightness) },
        Property { name: "agreement-sufficiency", run: boxed(prop_agreement) },
        Property { name: "worstcase-bitwise", run: boxed(prop_worstcase_bitwise) },
        Property { name: "worstcase-hr1", run: boxed(prop_worstcase_hr1) },
        Property { name: "decomposition-identity", run: boxed(prop_decomposition) },
        Property { name: "gradient-check", run: boxed(prop_grad_check) },
        Property { name: "loss-consistency", run: boxed(prop_loss_consistency) },
        Property { name: "decoder-dominance", run: boxed(prop_decoder_dominance) },
    ]
}

/// Run a property list. Zero trials short-circuits every property into a
/// vacuous pass and attaches a warning.
pub fn run_properties(properties: &[Property], opts: &VerifyOptions) -> SuiteReport {
    if opts.trials == 0 {
        return SuiteReport {
            seed: opts.seed,
            trials: 0,
            properties: properties.iter().map(|p| PropertyResult::vacuous(p.name)).collect(),
            passed: true,
            warning: Some("trials = 0: every property passed vacuously".into()),
        };
    }
    let results: Vec<PropertyResult> = properties.iter().map(|p| (p.run)(opts)).collect();
    let passed = results.iter().all(|r| r.passed);
    SuiteReport {
        seed: opts.seed,
        trials: opts.trials,
        properties: results,
        passed,
        warning: None,
    }
}

/// Run the standard suite.
pub fn run_verify_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    Ok(run_properties(&standard_properties(), opts))
}
