//! Bit-packed molecular fingerprints, the similarity metrics used to compare
//! them, Bayes-optimal decoders over candidate sets, similarity-band regret
//! bounds with their tightness and worst-case constructions, surrogate
//! training losses with analytic gradients, and retrieval evaluation.
//!
//! The [`verify`] module stress-tests every bound and identity on seeded
//! random instances; the companion CLI exposes the same machinery on text
//! candidate-set files.

pub mod bayes;
pub mod config;
pub mod distribution;
pub mod error;
pub mod fingerprint;
pub mod format;
pub mod loss;
pub mod regret;
pub mod report;
pub mod retrieval;
pub mod verify;

pub use bayes::{
    bayes_bitwise, bayes_brute_force, bayes_cosine_closed_form, bayes_hr1, bayes_hrk,
    DecodeResult, SearchSpace, MAX_HYPERCUBE_BITS,
};
pub use config::{OutputFormat, ToolConfig, Tolerances};
pub use distribution::{
    expected_utility, row_wise_bounds, similarity_band, similarity_band_to_reference, BandPolicy,
    CandidateDistribution, MetricView, PairwiseSimilarity, SimilarityBand,
};
pub use error::{Error, Result};
pub use fingerprint::{
    batch_tanimoto, bitwise_accuracy, cosine, soft_cosine, soft_tanimoto, tanimoto, Fingerprint,
    MetricKind, SoftPrediction,
};
pub use loss::{
    bce_loss, binarize, contrastive_fp_cos, cosine_loss, focal_loss, grad_check, iou_loss,
    LossKind, LossValue,
};
pub use regret::{
    agreement_condition, bound_hr1_decode_under_sim, bound_sim_decode_under_hr1,
    construct_tightness_thm2, construct_worstcase_bitwise, construct_worstcase_hr1,
    decompose_regret, regret_of, BoundInputs, BoundKind, DegeneracyFlags, RegretDecomposition,
    RegretReport, TightnessInstance,
};
pub use retrieval::{
    evaluate_dataset, hit_rate_at_k, mean_tanimoto, score_candidates, HitRateTable,
    RetrievalRecord, RetrievalSim, ScoredCandidates, TiePolicy,
};
pub use verify::{
    run_properties, run_verify_suite, standard_properties, Property, PropertyResult, SuiteReport,
    VerifyOptions,
};
