//! Bit-packed fingerprints, soft predictions, and the exact utility metrics.
//!
//! A [`Fingerprint`] stores m bits in 64-bit words: bit k lives in word
//! `k / 64` at position `k % 64`, and padding bits past `m - 1` are always
//! zero, so popcount-based kernels never need masking. Textual literals put
//! bit 0 leftmost (`11000` has bits 0 and 1 set), matching the usual
//! bitvector notation for candidate tables.
//!
//! All four utilities return values in [0, 1] and use the extended
//! zero-vector conventions: Tanimoto and cosine of two all-zero vectors are
//! 1, cosine against exactly one all-zero vector is 0.

use std::fmt;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

/// Immutable bit-packed binary vector of length m.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    words: Vec<u64>,
    len: usize,
}

impl Fingerprint {
    /// All-zero fingerprint of length m.
    pub fn zeros(m: usize) -> Self {
        assert!(m >= 1, "fingerprint length must be at least 1");
        Fingerprint {
            words: vec![0; m.div_ceil(WORD_BITS)],
            len: m,
        }
    }

    /// All-ones fingerprint of length m.
    pub fn ones(m: usize) -> Self {
        let mut fp = Self::zeros(m);
        for (k, word) in fp.words.iter_mut().enumerate() {
            let remaining = m - k * WORD_BITS;
            *word = if remaining >= WORD_BITS {
                u64::MAX
            } else {
                (1u64 << remaining) - 1
            };
        }
        fp
    }

    /// Build from explicit bits, leftmost element first.
    pub fn from_bits(bits: &[bool]) -> Self {
        let mut fp = Self::zeros(bits.len());
        for (k, &b) in bits.iter().enumerate() {
            if b {
                fp.words[k / WORD_BITS] |= 1u64 << (k % WORD_BITS);
            }
        }
        fp
    }

    /// Build from pre-packed words (bit k at word k/64, position k%64).
    /// The word count must match ceil(m / 64) and padding bits must be zero.
    pub fn from_words(words: Vec<u64>, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::EmptyFingerprint);
        }
        if words.len() != m.div_ceil(WORD_BITS) {
            return Err(Error::InvalidParameter(format!(
                "{} words cannot hold exactly {m} bits",
                words.len()
            )));
        }
        let tail_bits = m % WORD_BITS;
        if tail_bits != 0 {
            let padding = words[words.len() - 1] >> tail_bits;
            if padding != 0 {
                return Err(Error::InvalidParameter(format!(
                    "padding bits beyond position {} must be zero",
                    m - 1
                )));
            }
        }
        Ok(Fingerprint { words, len: m })
    }

    /// Build a length-m fingerprint with the given bit positions set.
    pub fn from_indices(m: usize, indices: &[usize]) -> Result<Self> {
        let mut fp = Self::zeros(m);
        for &k in indices {
            if k >= m {
                return Err(Error::IndexOutOfRange { index: k, len: m });
            }
            fp.words[k / WORD_BITS] |= 1u64 << (k % WORD_BITS);
        }
        Ok(fp)
    }

    /// Build from the packed low bits of a word (bit i of `value` becomes bit i).
    /// Only valid for m <= 64; used by the hypercube enumerator.
    pub(crate) fn from_word(value: u64, m: usize) -> Self {
        debug_assert!(m <= WORD_BITS);
        let mask = if m == WORD_BITS { u64::MAX } else { (1u64 << m) - 1 };
        Fingerprint {
            words: vec![value & mask],
            len: m,
        }
    }

    /// Parse a textual literal: either a `{0,1}` string or `0x`-prefixed hex
    /// where bit 0 is the most-significant bit of the first hex digit.
    /// The length is inferred: the character count for bitstrings, four bits
    /// per digit for hex.
    pub fn parse(literal: &str) -> Result<Self> {
        if let Some(hex) = literal.strip_prefix("0x").or_else(|| literal.strip_prefix("0X")) {
            Self::parse_hex(literal, hex, hex.len() * 4)
        } else {
            Self::parse_bitstring(literal)
        }
    }

    /// Parse a literal whose bit length m is known from context. Bitstrings
    /// must have exactly m characters. Hex literals are padded with zeros up
    /// to m when short; digits past m must not set any bit.
    pub fn parse_with_len(literal: &str, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::EmptyFingerprint);
        }
        if let Some(hex) = literal.strip_prefix("0x").or_else(|| literal.strip_prefix("0X")) {
            Self::parse_hex(literal, hex, m)
        } else {
            let fp = Self::parse_bitstring(literal)?;
            if fp.len != m {
                return Err(Error::Dimension {
                    expected: m,
                    got: fp.len,
                    index: None,
                });
            }
            Ok(fp)
        }
    }

    fn parse_bitstring(literal: &str) -> Result<Self> {
        if literal.is_empty() {
            return Err(Error::EmptyFingerprint);
        }
        let mut fp = Self::zeros(literal.len());
        for (k, c) in literal.chars().enumerate() {
            match c {
                '0' => {}
                '1' => fp.words[k / WORD_BITS] |= 1u64 << (k % WORD_BITS),
                other => {
                    return Err(Error::BadLiteral {
                        literal: literal.to_string(),
                        reason: format!("unexpected character {other:?} at position {k}"),
                    })
                }
            }
        }
        Ok(fp)
    }

    fn parse_hex(literal: &str, hex: &str, m: usize) -> Result<Self> {
        if hex.is_empty() {
            return Err(Error::BadLiteral {
                literal: literal.to_string(),
                reason: "hex literal has no digits".into(),
            });
        }
        if m == 0 {
            return Err(Error::EmptyFingerprint);
        }
        let mut fp = Self::zeros(m);
        for (d, c) in hex.chars().enumerate() {
            let nibble = c.to_digit(16).ok_or_else(|| Error::BadLiteral {
                literal: literal.to_string(),
                reason: format!("invalid hex digit {c:?}"),
            })? as u64;
            for b in 0..4 {
                // bit 0 of the fingerprint is the MSB of the first digit
                if nibble & (8 >> b) != 0 {
                    let k = d * 4 + b;
                    if k >= m {
                        return Err(Error::BadLiteral {
                            literal: literal.to_string(),
                            reason: format!("bit {k} is set but the fingerprint has only {m} bits"),
                        });
                    }
                    fp.words[k / WORD_BITS] |= 1u64 << (k % WORD_BITS);
                }
            }
        }
        Ok(fp)
    }

    /// Number of bits m.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false // length is always >= 1
    }

    /// Value of bit k.
    pub fn get(&self, k: usize) -> bool {
        assert!(k < self.len);
        self.words[k / WORD_BITS] >> (k % WORD_BITS) & 1 == 1
    }

    /// Number of set bits.
    pub fn popcount(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    fn and_count(&self, other: &Self) -> u32 {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    fn or_count(&self, other: &Self) -> u32 {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a | b).count_ones())
            .sum()
    }

    fn xor_count(&self, other: &Self) -> u32 {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones())
            .sum()
    }

    /// Iterator over the positions of set bits, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let tz = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD_BITS + tz)
                }
            })
        })
    }

    /// Leftmost-bit-first lexicographic comparison ("00..." < "01..." < "10...").
    /// Lengths must match.
    pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter().zip(&other.words) {
            // bit 0 is the leftmost character, so compare bit-reversed words
            let ord = a.reverse_bits().cmp(&b.reverse_bits());
            if ord != std::cmp::Ordering::Equal {
                return ord;
            }
        }
        std::cmp::Ordering::Equal
    }

    /// Render as a `{0,1}` string, bit 0 first.
    pub fn to_bitstring(&self) -> String {
        (0..self.len).map(|k| if self.get(k) { '1' } else { '0' }).collect()
    }

    /// Render as a `0x` literal with `ceil(m / 4)` digits, bit 0 at the MSB
    /// of the first digit.
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4);
        let mut out = String::with_capacity(digits + 2);
        out.push_str("0x");
        for d in 0..digits {
            let mut nibble = 0u32;
            for b in 0..4 {
                let k = d * 4 + b;
                if k < self.len && self.get(k) {
                    nibble |= 8 >> b;
                }
            }
            out.push(char::from_digit(nibble, 16).unwrap());
        }
        out
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

/// Length-m sequence of scores in [0, 1]; a fingerprint prediction before
/// binarization.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftPrediction {
    scores: Vec<f64>,
}

impl SoftPrediction {
    pub fn new(scores: Vec<f64>) -> Result<Self> {
        if scores.is_empty() {
            return Err(Error::EmptyFingerprint);
        }
        for (index, &value) in scores.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) || value.is_nan() {
                return Err(Error::ScoreOutOfRange { index, value });
            }
        }
        Ok(SoftPrediction { scores })
    }

    /// View a binary fingerprint as a soft prediction of 0/1 scores.
    pub fn from_fingerprint(fp: &Fingerprint) -> Self {
        SoftPrediction {
            scores: (0..fp.len()).map(|k| if fp.get(k) { 1.0 } else { 0.0 }).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    /// Euclidean norm of the score vector.
    pub fn l2_norm(&self) -> f64 {
        self.scores.iter().map(|s| s * s).sum::<f64>().sqrt()
    }

    /// Sum of scores.
    pub fn l1_norm(&self) -> f64 {
        self.scores.iter().sum()
    }

    /// Dot product against a binary fingerprint of the same length.
    pub fn dot_fingerprint(&self, fp: &Fingerprint) -> f64 {
        fp.iter_ones().map(|k| self.scores[k]).sum()
    }
}

/// The utility metrics a candidate set can be decoded and evaluated under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Tanimoto,
    Cosine,
    Bitwise,
    Hr1,
}

impl MetricKind {
    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Tanimoto => "tanimoto",
            MetricKind::Cosine => "cosine",
            MetricKind::Bitwise => "bitwise",
            MetricKind::Hr1 => "hr1",
        }
    }

    /// Whether this metric satisfies the band axioms used by the regret
    /// bounds: symmetry and U(y, y) = 1 with a *similarity* reading of the
    /// off-diagonal values. Bitwise and HR@1 satisfy the axioms but are not
    /// the metrics the band analysis is about, so they are opt-in.
    pub fn is_band_standard(self) -> bool {
        matches!(self, MetricKind::Tanimoto | MetricKind::Cosine)
    }

    /// Exact utility U(a, b) for binary vectors of equal length.
    pub fn utility(self, a: &Fingerprint, b: &Fingerprint) -> Result<f64> {
        match self {
            MetricKind::Tanimoto => tanimoto(a, b),
            MetricKind::Cosine => cosine(a, b),
            MetricKind::Bitwise => bitwise_accuracy(a, b),
            MetricKind::Hr1 => {
                check_len(a, b)?;
                Ok(if a == b { 1.0 } else { 0.0 })
            }
        }
    }
}

impl std::str::FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tanimoto" | "tan" | "iou" | "jaccard" => Ok(MetricKind::Tanimoto),
            "cosine" | "cos" => Ok(MetricKind::Cosine),
            "bitwise" | "bit" => Ok(MetricKind::Bitwise),
            "hr1" | "hr@1" => Ok(MetricKind::Hr1),
            other => Err(Error::InvalidParameter(format!("unknown metric {other:?}"))),
        }
    }
}

fn check_len(a: &Fingerprint, b: &Fingerprint) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::Dimension {
            expected: a.len(),
            got: b.len(),
            index: None,
        });
    }
    Ok(())
}

/// Tanimoto (Jaccard) similarity |a AND b| / |a OR b|, with the convention
/// that two all-zero vectors have similarity 1.
pub fn tanimoto(a: &Fingerprint, b: &Fingerprint) -> Result<f64> {
    check_len(a, b)?;
    let union = a.or_count(b);
    if union == 0 {
        return Ok(1.0);
    }
    Ok(f64::from(a.and_count(b)) / f64::from(union))
}

/// Cosine similarity of two binary vectors: 1 when both are all-zero, 0 when
/// exactly one is.
pub fn cosine(a: &Fingerprint, b: &Fingerprint) -> Result<f64> {
    check_len(a, b)?;
    let pa = a.popcount();
    let pb = b.popcount();
    if pa == 0 || pb == 0 {
        return Ok(if pa == 0 && pb == 0 { 1.0 } else { 0.0 });
    }
    // sqrt of the exact integer product keeps e.g. cos(y, y) at exactly 1
    Ok(f64::from(a.and_count(b)) / (f64::from(pa) * f64::from(pb)).sqrt())
}

/// Fraction of bit positions where the two vectors agree.
pub fn bitwise_accuracy(a: &Fingerprint, b: &Fingerprint) -> Result<f64> {
    check_len(a, b)?;
    Ok(1.0 - f64::from(a.xor_count(b)) / a.len() as f64)
}

/// Cosine similarity between a soft prediction and a binary vector, with the
/// same zero conventions as [`cosine`]: 1 when both have zero norm, 0 when
/// exactly one does.
pub fn soft_cosine(p: &SoftPrediction, y: &Fingerprint) -> Result<f64> {
    if p.len() != y.len() {
        return Err(Error::Dimension {
            expected: p.len(),
            got: y.len(),
            index: None,
        });
    }
    let sum_sq: f64 = p.scores().iter().map(|s| s * s).sum();
    let pop = f64::from(y.popcount());
    if sum_sq == 0.0 || pop == 0.0 {
        return Ok(if sum_sq == 0.0 && pop == 0.0 { 1.0 } else { 0.0 });
    }
    Ok(p.dot_fingerprint(y) / (sum_sq * pop).sqrt())
}

/// Soft Tanimoto ratio p.y / (|p|_1 + |y|_1 - p.y), valid because y is
/// binary; equals [`tanimoto`] when p is binary. Both-zero inputs score 1.
pub fn soft_tanimoto(p: &SoftPrediction, y: &Fingerprint) -> Result<f64> {
    if p.len() != y.len() {
        return Err(Error::Dimension {
            expected: p.len(),
            got: y.len(),
            index: None,
        });
    }
    let inter = p.dot_fingerprint(y);
    let denom = p.l1_norm() + f64::from(y.popcount()) - inter;
    if denom == 0.0 {
        // only possible when p is identically zero and y has no set bits
        return Ok(1.0);
    }
    Ok(inter / denom)
}

/// Tanimoto similarity of one query against every candidate, in order.
/// A length mismatch reports the offending candidate index.
pub fn batch_tanimoto(query: &Fingerprint, candidates: &[Fingerprint]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(candidates.len());
    for (index, cand) in candidates.iter().enumerate() {
        if cand.len() != query.len() {
            return Err(Error::Dimension {
                expected: query.len(),
                got: cand.len(),
                index: Some(index),
            });
        }
        let mut inter = 0u32;
        let mut union = 0u32;
        for (a, b) in query.words().iter().zip(cand.words()) {
            inter += (a & b).count_ones();
            union += (a | b).count_ones();
        }
        out.push(if union == 0 {
            1.0
        } else {
            f64::from(inter) / f64::from(union)
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(s: &str) -> Fingerprint {
        Fingerprint::parse(s).unwrap()
    }

    // per-bit reference implementations, independent of the packed kernels
    fn tanimoto_oracle(a: &Fingerprint, b: &Fingerprint) -> f64 {
        let mut inter = 0;
        let mut union = 0;
        for k in 0..a.len() {
            if a.get(k) && b.get(k) {
                inter += 1;
            }
            if a.get(k) || b.get(k) {
                union += 1;
            }
        }
        if union == 0 {
            1.0
        } else {
            inter as f64 / union as f64
        }
    }

    #[test]
    fn tanimoto_examples() {
        assert_eq!(tanimoto(&fp("11000"), &fp("10100")).unwrap(), 1.0 / 3.0);
        let y = fp("10110");
        assert_eq!(tanimoto(&y, &y).unwrap(), 1.0);
        assert_eq!(tanimoto(&fp("00000"), &fp("00000")).unwrap(), 1.0);
        assert_eq!(tanimoto(&fp("00000"), &fp("10000")).unwrap(), 0.0);
    }

    #[test]
    fn cosine_examples() {
        assert_eq!(cosine(&fp("11000"), &fp("10100")).unwrap(), 0.5);
        let y = fp("01101");
        assert_eq!(cosine(&y, &y).unwrap(), 1.0);
        assert_eq!(cosine(&fp("00000"), &fp("10000")).unwrap(), 0.0);
        assert_eq!(cosine(&fp("00000"), &fp("00000")).unwrap(), 1.0);
    }

    #[test]
    fn bitwise_examples() {
        assert_eq!(bitwise_accuracy(&fp("11000"), &fp("10100")).unwrap(), 3.0 / 5.0);
        let y = fp("10101");
        assert_eq!(bitwise_accuracy(&y, &y).unwrap(), 1.0);
        assert_eq!(bitwise_accuracy(&fp("11111"), &fp("00000")).unwrap(), 0.0);
    }

    #[test]
    fn soft_cosine_examples() {
        let p = SoftPrediction::new(vec![0.5, 0.5]).unwrap();
        let v = soft_cosine(&p, &fp("10")).unwrap();
        assert!((v - 1.0 / 2f64.sqrt()).abs() < 1e-12);

        let y = fp("1011");
        let py = SoftPrediction::from_fingerprint(&y);
        assert_eq!(soft_cosine(&py, &y).unwrap(), 1.0);

        let zero = SoftPrediction::new(vec![0.0, 0.0]).unwrap();
        assert_eq!(soft_cosine(&zero, &fp("00")).unwrap(), 1.0);
        assert_eq!(soft_cosine(&zero, &fp("10")).unwrap(), 0.0);
    }

    #[test]
    fn batch_tanimoto_examples() {
        let q = fp("11000");
        let scores = batch_tanimoto(&q, &[fp("11000"), fp("10100")]).unwrap();
        assert_eq!(scores, vec![1.0, 1.0 / 3.0]);

        assert!(batch_tanimoto(&q, &[]).unwrap().is_empty());

        let scores = batch_tanimoto(&fp("00000"), &[fp("10000"), fp("00000")]).unwrap();
        assert_eq!(scores, vec![0.0, 1.0]);

        let err = batch_tanimoto(&q, &[fp("11000"), fp("110")]).unwrap_err();
        match err {
            Error::Dimension { index: Some(1), .. } => {}
            other => panic!("expected indexed dimension error, got {other:?}"),
        }
    }

    #[test]
    fn popcount_path_matches_bit_loop_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7341);
        for &m in &[1usize, 7, 64, 65, 4096] {
            for _ in 0..2000 {
                let a = Fingerprint::from_bits(&(0..m).map(|_| rng.random_bool(0.4)).collect::<Vec<_>>());
                let b = Fingerprint::from_bits(&(0..m).map(|_| rng.random_bool(0.4)).collect::<Vec<_>>());
                assert_eq!(tanimoto(&a, &b).unwrap(), tanimoto_oracle(&a, &b));
            }
        }
    }

    #[test]
    fn hex_literals() {
        // 0xC8 at m = 5: C = 1100, 8 = 1000 -> bits 0,1,4
        assert_eq!(Fingerprint::parse_with_len("0xC8", 5).unwrap(), fp("11001"));
        // short hex is zero-padded up to m
        assert_eq!(Fingerprint::parse_with_len("0x8", 6).unwrap(), fp("100000"));
        // a set bit beyond m-1 is rejected
        assert!(Fingerprint::parse_with_len("0xC9", 5).is_err());
        // standalone literal infers m = 4 * digits
        let h = Fingerprint::parse("0xa8").unwrap();
        assert_eq!(h.len(), 8);
        assert_eq!(h.to_bitstring(), "10101000");
        assert_eq!(Fingerprint::parse(&h.to_hex()).unwrap(), h);
    }

    #[test]
    fn bad_literals() {
        assert!(Fingerprint::parse("10a01").is_err());
        assert!(Fingerprint::parse("").is_err());
        assert!(Fingerprint::parse("0x").is_err());
        assert!(Fingerprint::parse_with_len("110", 5).is_err());
    }

    #[test]
    fn lex_order_is_leftmost_first() {
        assert_eq!(fp("01000").lex_cmp(&fp("10000")), std::cmp::Ordering::Less);
        assert_eq!(fp("10000").lex_cmp(&fp("10000")), std::cmp::Ordering::Equal);
        assert_eq!(fp("00010").lex_cmp(&fp("00001")), std::cmp::Ordering::Greater);
        // crosses a word boundary: the earlier set bit is the greater string
        let mut long_a = vec![false; 70];
        let mut long_b = vec![false; 70];
        long_a[68] = true;
        long_b[67] = true;
        assert_eq!(
            Fingerprint::from_bits(&long_a).lex_cmp(&Fingerprint::from_bits(&long_b)),
            std::cmp::Ordering::Less
        );
    }

    #[test]
    fn padding_stays_zero() {
        let ones = Fingerprint::ones(65);
        assert_eq!(ones.popcount(), 65);
        assert_eq!(ones.words()[1], 1);
        assert_eq!(Fingerprint::ones(64).popcount(), 64);
    }

    #[test]
    fn from_words_validates_padding() {
        let fp = Fingerprint::from_words(vec![0b1011], 4).unwrap();
        assert_eq!(fp.to_bitstring(), "1101");
        assert!(Fingerprint::from_words(vec![0b10000], 4).is_err());
        assert!(Fingerprint::from_words(vec![1, 0], 64).is_err());
        assert!(Fingerprint::from_words(vec![u64::MAX], 64).is_ok());
    }

    #[test]
    fn soft_prediction_validation() {
        assert!(SoftPrediction::new(vec![0.0, 1.0, 0.5]).is_ok());
        assert!(SoftPrediction::new(vec![1.2]).is_err());
        assert!(SoftPrediction::new(vec![-0.1]).is_err());
        assert!(SoftPrediction::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn iter_ones_matches_get() {
        let f = fp("1010001");
        assert_eq!(f.iter_ones().collect::<Vec<_>>(), vec![0, 2, 6]);
    }

    #[test]
    fn metric_names_parse() {
        for kind in [MetricKind::Tanimoto, MetricKind::Cosine, MetricKind::Bitwise, MetricKind::Hr1] {
            assert_eq!(kind.name().parse::<MetricKind>().unwrap(), kind);
        }
        assert_eq!("iou".parse::<MetricKind>().unwrap(), MetricKind::Tanimoto);
        assert!("mahalanobis".parse::<MetricKind>().is_err());
    }
}
