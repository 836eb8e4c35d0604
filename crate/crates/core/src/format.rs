//! Text formats for candidate sets and predictions.
//!
//! Candidate-set files hold one or more sets separated by a `---` line.
//! Within a set, `#` lines are comments, the first data line is `m=<bits>`,
//! an optional `true=<index>` line marks the ground-truth candidate
//! (0-based), and every other line is `<probability> <fingerprint-literal>`
//! or a bare `<fingerprint-literal>` when the set carries no probabilities.
//! Fingerprint literals are `{0,1}` strings of length m or `0x` hex with
//! bit 0 at the MSB of the first digit.
//!
//! Predictions files hold one record per data line: m whitespace-separated
//! scores in [0, 1].

use std::fs;
use std::path::Path;

use crate::distribution::CandidateDistribution;
use crate::error::{Error, Result};
use crate::fingerprint::{Fingerprint, SoftPrediction};
use crate::retrieval::RetrievalRecord;

/// One parsed candidate set, before any probability validation.
#[derive(Debug, Clone)]
pub struct RawSet {
    pub m: usize,
    pub true_index: Option<usize>,
    pub fingerprints: Vec<Fingerprint>,
    /// Present iff every candidate line carried a probability.
    pub probs: Option<Vec<f64>>,
    /// Line number of the set's `m=` header, for diagnostics.
    pub header_line: usize,
}

impl RawSet {
    /// Validate into a distribution; requires probabilities on every line.
    pub fn into_distribution(self) -> Result<CandidateDistribution> {
        let probs = self.probs.ok_or(Error::Parse {
            line: self.header_line,
            message: "set has no probabilities; every candidate line needs `<prob> <literal>`"
                .into(),
        })?;
        CandidateDistribution::new(self.fingerprints, probs).map_err(|e| match e {
            Error::BadProbabilitySum { sum } => Error::Parse {
                line: self.header_line,
                message: format!("probabilities sum to {sum}, outside 1e-6 of 1"),
            },
            other => other,
        })
    }
}

/// Parse every set in a candidate file's text.
pub fn parse_sets(text: &str) -> Result<Vec<RawSet>> {
    let mut sets = Vec::new();
    let mut current: Option<RawSet> = None;
    let mut saw_probs: Option<bool> = None;

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line == "---" {
            let set = current.take().ok_or(Error::Parse {
                line: line_no,
                message: "set separator before any set content".into(),
            })?;
            finish_set(set, &mut sets, line_no)?;
            saw_probs = None;
            continue;
        }
        if let Some(rest) = line.strip_prefix("m=") {
            if current.is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    message: "unexpected second m= header; separate sets with ---".into(),
                });
            }
            let m: usize = rest.trim().parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("cannot parse bit length from {rest:?}"),
            })?;
            if m == 0 {
                return Err(Error::Parse { line: line_no, message: "m must be at least 1".into() });
            }
            current = Some(RawSet {
                m,
                true_index: None,
                fingerprints: Vec::new(),
                probs: Some(Vec::new()),
                header_line: line_no,
            });
            continue;
        }
        let set = current.as_mut().ok_or(Error::Parse {
            line: line_no,
            message: "expected an m=<bits> header before candidate lines".into(),
        })?;
        if let Some(rest) = line.strip_prefix("true=") {
            let t: usize = rest.trim().parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("cannot parse true-candidate index from {rest:?}"),
            })?;
            set.true_index = Some(t);
            continue;
        }

        let tokens: Vec<&str> = line.split_whitespace().collect();
        let (prob, literal) = match tokens.len() {
            1 => (None, tokens[0]),
            2 => {
                let p: f64 = tokens[0].parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("cannot parse probability from {:?}", tokens[0]),
                })?;
                if !p.is_finite() || p < 0.0 {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("probability {p} is not a finite nonnegative number"),
                    });
                }
                (Some(p), tokens[1])
            }
            n => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected `<prob> <literal>` or `<literal>`, got {n} tokens"),
                })
            }
        };

        match (saw_probs, prob.is_some()) {
            (None, has) => saw_probs = Some(has),
            (Some(expected), has) if expected != has => {
                return Err(Error::Parse {
                    line: line_no,
                    message: "cannot mix candidate lines with and without probabilities".into(),
                })
            }
            _ => {}
        }
        if prob.is_none() {
            set.probs = None;
        }

        let fp = Fingerprint::parse_with_len(literal, set.m).map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        set.fingerprints.push(fp);
        if let (Some(probs), Some(p)) = (set.probs.as_mut(), prob) {
            probs.push(p);
        }
    }

    if let Some(set) = current.take() {
        finish_set(set, &mut sets, text.lines().count())?;
    }
    if sets.is_empty() {
        return Err(Error::Parse { line: 1, message: "no candidate sets found".into() });
    }
    Ok(sets)
}

fn finish_set(set: RawSet, sets: &mut Vec<RawSet>, line_no: usize) -> Result<()> {
    if set.fingerprints.is_empty() {
        return Err(Error::Parse {
            line: line_no,
            message: "candidate set has no candidates".into(),
        });
    }
    if let Some(t) = set.true_index {
        if t >= set.fingerprints.len() {
            return Err(Error::Parse {
                line: set.header_line,
                message: format!(
                    "true-candidate index {t} out of range for {} candidates",
                    set.fingerprints.len()
                ),
            });
        }
    }
    sets.push(set);
    Ok(())
}

/// Parse a candidate file into validated distributions.
pub fn parse_candidate_str(text: &str) -> Result<Vec<CandidateDistribution>> {
    parse_sets(text)?.into_iter().map(RawSet::into_distribution).collect()
}

/// File wrapper around [`parse_candidate_str`].
pub fn parse_candidate_file(path: &Path) -> Result<Vec<CandidateDistribution>> {
    parse_candidate_str(&fs::read_to_string(path)?)
}

/// Serialize one set in the candidate-file format. Probabilities use the
/// shortest decimal that round-trips exactly; fingerprints longer than 256
/// bits are written as hex.
pub fn serialize_candidate_set(dist: &CandidateDistribution, true_index: Option<usize>) -> String {
    let mut out = format!("m={}\n", dist.bit_len());
    if let Some(t) = true_index {
        out.push_str(&format!("true={t}\n"));
    }
    for (cand, &p) in dist.candidates().iter().zip(dist.probs()) {
        out.push_str(&format!("{p} {}\n", literal_for(cand)));
    }
    out
}

/// Serialize several sets with `---` separators.
pub fn serialize_candidate_sets(sets: &[(CandidateDistribution, Option<usize>)]) -> String {
    sets.iter()
        .map(|(d, t)| serialize_candidate_set(d, *t))
        .collect::<Vec<_>>()
        .join("---\n")
}

fn literal_for(fp: &Fingerprint) -> String {
    if fp.len() <= 256 {
        fp.to_bitstring()
    } else {
        fp.to_hex()
    }
}

/// Parse a predictions file: one record per data line, m scores each.
pub fn parse_predictions_str(text: &str, m: usize) -> Result<Vec<SoftPrediction>> {
    let mut out = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut scores = Vec::with_capacity(m);
        for token in line.split_whitespace() {
            let v: f64 = token.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("cannot parse score from {token:?}"),
            })?;
            scores.push(v);
        }
        if scores.len() != m {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected {m} scores, got {}", scores.len()),
            });
        }
        out.push(SoftPrediction::new(scores).map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?);
    }
    if out.is_empty() {
        return Err(Error::Parse { line: 1, message: "no prediction records found".into() });
    }
    Ok(out)
}

/// Pair a multi-set candidate file with a predictions file into retrieval
/// records. Every set needs a `true=` marker and the record counts must
/// match.
pub fn build_retrieval_records(
    candidate_text: &str,
    predictions_text: &str,
) -> Result<Vec<RetrievalRecord>> {
    let sets = parse_sets(candidate_text)?;
    let m = sets[0].m;
    for set in &sets {
        if set.m != m {
            return Err(Error::Parse {
                line: set.header_line,
                message: format!("all sets must share one bit length; expected {m}, got {}", set.m),
            });
        }
    }
    let predictions = parse_predictions_str(predictions_text, m)?;
    if predictions.len() != sets.len() {
        return Err(Error::InvalidParameter(format!(
            "{} candidate sets but {} prediction records",
            sets.len(),
            predictions.len()
        )));
    }
    sets.into_iter()
        .zip(predictions)
        .map(|(set, prediction)| {
            let true_index = set.true_index.ok_or(Error::Parse {
                line: set.header_line,
                message: "retrieval sets need a true=<index> line".into(),
            })?;
            RetrievalRecord::new(set.fingerprints, set.probs, true_index, prediction)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY: &str = "\
# worked 5-bit example
m=5
0.05 11000
0.25 10100
0.30 10010
0.40 11001
";

    #[test]
    fn parses_the_toy_file() {
        let dists = parse_candidate_str(TOY).unwrap();
        assert_eq!(dists.len(), 1);
        let d = &dists[0];
        assert_eq!(d.len(), 4);
        assert_eq!(d.bit_len(), 5);
        assert_eq!(d.candidates()[3].to_bitstring(), "11001");
        assert_eq!(d.probs()[3], 0.40);
    }

    #[test]
    fn rejects_bad_probability_sum_with_the_sum() {
        let text = "m=2\n0.5 10\n0.4 01\n";
        let err = parse_candidate_str(text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("0.9"), "diagnostic should name the sum: {msg}");
    }

    #[test]
    fn diagnostics_carry_line_numbers() {
        let err = parse_candidate_str("m=2\n0.5 10\nbogus line here\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));

        let err = parse_candidate_str("0.5 10\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));

        let err = parse_candidate_str("m=2\n0.5 10\n0.5 111\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn hex_literal_round_trips_against_bit_loop() {
        // 4096-bit literal with a recognizable pattern
        let mut bits = vec![false; 4096];
        for k in (0..4096).step_by(7) {
            bits[k] = true;
        }
        let fp = Fingerprint::from_bits(&bits);
        let text = format!("m=4096\n1.0 {}\n", fp.to_hex());
        let parsed = parse_candidate_str(&text).unwrap();
        let got = &parsed[0].candidates()[0];
        assert_eq!(got, &fp);
        // reference bit loop on the hex expansion
        let mut popcount = 0;
        for (k, &expected) in bits.iter().enumerate() {
            if got.get(k) {
                popcount += 1;
                assert!(expected);
            }
        }
        assert_eq!(popcount, fp.popcount());
    }

    #[test]
    fn multi_set_files_and_true_markers() {
        let text = "m=3\ntrue=1\n0.5 100\n0.5 011\n---\nm=3\ntrue=0\n1.0 111\n";
        let sets = parse_sets(text).unwrap();
        assert_eq!(sets.len(), 2);
        assert_eq!(sets[0].true_index, Some(1));
        assert_eq!(sets[1].fingerprints.len(), 1);

        let err = parse_sets("m=2\ntrue=5\n0.5 10\n0.5 01\n").unwrap_err();
        assert!(err.to_string().contains("out of range"));
    }

    #[test]
    fn bare_literal_sets_have_no_probs() {
        let sets = parse_sets("m=3\n101\n010\n").unwrap();
        assert!(sets[0].probs.is_none());
        assert!(sets[0].clone().into_distribution().is_err());

        // mixing forms is rejected
        assert!(parse_sets("m=3\n101\n0.5 010\n").is_err());
    }

    #[test]
    fn round_trip_preserves_values() {
        let dists = parse_candidate_str(TOY).unwrap();
        let text = serialize_candidate_set(&dists[0], None);
        let reparsed = parse_candidate_str(&text).unwrap();
        assert_eq!(dists[0], reparsed[0]);

        // probabilities that need many digits still round-trip exactly
        let d = CandidateDistribution::new(
            vec![Fingerprint::parse("10").unwrap(), Fingerprint::parse("01").unwrap()],
            vec![1.0 / 3.0, 2.0 / 3.0],
        )
        .unwrap();
        let reparsed = parse_candidate_str(&serialize_candidate_set(&d, None)).unwrap();
        assert_eq!(d, reparsed[0]);
    }

    #[test]
    fn predictions_and_retrieval_records() {
        let cands = "m=3\ntrue=0\n0.6 110\n0.4 011\n---\nm=3\ntrue=1\n0.5 100\n0.5 101\n";
        let preds = "0.9 0.8 0.1\n0.2 0.1 0.9\n";
        let records = build_retrieval_records(cands, preds).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].true_index(), 0);
        assert_eq!(records[1].truth().to_bitstring(), "101");

        // missing true marker
        let err = build_retrieval_records("m=3\n0.6 110\n0.4 011\n", "0.9 0.8 0.1\n").unwrap_err();
        assert!(err.to_string().contains("true="));

        // wrong score count
        assert!(parse_predictions_str("0.9 0.8\n", 3).is_err());
        assert!(parse_predictions_str("0.9 0.8 1.5\n", 3).is_err());
    }
}
