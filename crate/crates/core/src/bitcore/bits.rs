use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A finite binary word. The empty word renders as the empty string.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<bool>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BitsError {
    #[error("invalid binary digit {0:?} at offset {1}")]
    InvalidDigit(char, usize),
    #[error("malformed self-delimiting literal: {0}")]
    MalformedLiteral(&'static str),
    #[error("index {index} out of bounds for string of length {len}")]
    OutOfBounds { index: usize, len: usize },
}

impl BitString {
    pub fn empty() -> Self {
        BitString { bits: Vec::new() }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitString { bits }
    }

    /// `count` copies of one digit.
    pub fn repeat(bit: bool, count: usize) -> Self {
        BitString { bits: vec![bit; count] }
    }

    /// The `len`-digit big-endian rendering of `value`.
    pub fn from_u64(value: u64, len: usize) -> Self {
        let bits = (0..len)
            .map(|i| (value >> (len - 1 - i)) & 1 == 1)
            .collect();
        BitString { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, index: usize) -> Option<bool> {
        self.bits.get(index).copied()
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    /// The first `len` digits (`self↾len`). Panics if `len > self.len()`.
    pub fn prefix(&self, len: usize) -> BitString {
        BitString {
            bits: self.bits[..len].to_vec(),
        }
    }

    pub fn checked_prefix(&self, len: usize) -> Result<BitString, BitsError> {
        if len > self.len() {
            return Err(BitsError::OutOfBounds {
                index: len,
                len: self.len(),
            });
        }
        Ok(self.prefix(len))
    }

    /// Digits from `start` (inclusive) to `end` (exclusive).
    pub fn slice(&self, start: usize, end: usize) -> BitString {
        BitString {
            bits: self.bits[start..end].to_vec(),
        }
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut bits = Vec::with_capacity(self.len() + other.len());
        bits.extend_from_slice(&self.bits);
        bits.extend_from_slice(&other.bits);
        BitString { bits }
    }

    pub fn with_bit(&self, bit: bool) -> BitString {
        let mut out = self.clone();
        out.push(bit);
        out
    }

    /// Improper prefix test: every string is a prefix of itself.
    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        other.bits.starts_with(&self.bits)
    }

    pub fn is_comparable(&self, other: &BitString) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    /// Returns a copy with the digit at `index` inverted.
    pub fn flipped(&self, index: usize) -> BitString {
        let mut out = self.clone();
        out.bits[index] = !out.bits[index];
        out
    }

    /// Every string of length exactly `len`, in lexicographic order.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = BitString> {
        assert!(len < 64, "enumeration of length {len} is not feasible");
        (0..1u64 << len).map(move |v| BitString::from_u64(v, len))
    }

    /// Every string of length at most `max_len`, in length-lexicographic order.
    pub fn all_up_to(max_len: usize) -> impl Iterator<Item = BitString> {
        (0..=max_len).flat_map(BitString::all_of_length)
    }

    /// The length-lexicographic order used for canonical enumeration.
    pub fn length_lex_cmp(&self, other: &BitString) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.bits.cmp(&other.bits))
    }
}

/// Plain lexicographic order (prefixes sort before their extensions).
impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bits.cmp(&other.bits)
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("λ")
        } else {
            write!(f, "\"{self}\"")
        }
    }
}

impl FromStr for BitString {
    type Err = BitsError;

    /// Parses ASCII digits. The empty string and `λ` both denote the empty word.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "λ" {
            return Ok(BitString::empty());
        }
        s.chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(BitsError::InvalidDigit(other, i)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString::from_bits)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand for tests and fixtures. Panics on non-binary input.
pub fn bs(s: &str) -> BitString {
    s.parse().expect("binary literal")
}

/// The n-th string in length-lexicographic order: 0 → λ, 1 → "0", 2 → "1", 3 → "00", ...
pub fn nat_to_string(n: u64) -> BitString {
    // n + 1 in binary, leading 1 dropped.
    let m = n + 1;
    let width = 63 - m.leading_zeros() as usize;
    BitString::from_u64(m, width)
}

/// Inverse of [`nat_to_string`]. Panics if the string is longer than 63 digits.
pub fn string_to_nat(x: &BitString) -> u64 {
    assert!(x.len() < 64, "string too long for a u64 index");
    let body = x.bits().iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
    (1u64 << x.len()) + body - 1
}

/// `1^k 0 x` where `k = |x|`.
pub fn encode_literal(x: &BitString) -> BitString {
    let mut out = BitString::repeat(true, x.len());
    out.push(false);
    out.extend_from(x);
    out
}

/// Inverts [`encode_literal`]; the whole input must be exactly one codeword.
pub fn decode_literal(p: &BitString) -> Result<BitString, BitsError> {
    let k = p
        .bits()
        .iter()
        .position(|b| !b)
        .ok_or(BitsError::MalformedLiteral("missing length terminator"))?;
    let payload = &p.bits()[k + 1..];
    match payload.len().cmp(&k) {
        Ordering::Equal => Ok(BitString::from_bits(payload.to_vec())),
        Ordering::Less => Err(BitsError::MalformedLiteral("payload too short")),
        Ordering::Greater => Err(BitsError::MalformedLiteral("trailing digits")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nat_bijection_examples() {
        assert_eq!(nat_to_string(0), BitString::empty());
        assert_eq!(nat_to_string(1), bs("0"));
        assert_eq!(nat_to_string(2), bs("1"));
        assert_eq!(nat_to_string(3), bs("00"));
        assert_eq!(nat_to_string(6), bs("11"));
        assert_eq!(string_to_nat(&nat_to_string(70)), 70);
    }

    #[test]
    fn nat_bijection_follows_length_lex_order() {
        let strings: Vec<_> = BitString::all_up_to(8).collect();
        for (n, s) in strings.iter().enumerate() {
            assert_eq!(nat_to_string(n as u64), *s);
            assert_eq!(string_to_nat(s), n as u64);
        }
    }

    #[test]
    fn literal_examples() {
        assert_eq!(encode_literal(&bs("")), bs("0"));
        assert_eq!(encode_literal(&bs("1")), bs("101"));
        assert_eq!(encode_literal(&bs("01")), bs("11001"));
    }

    #[test]
    fn literal_roundtrip_exhaustive() {
        for x in BitString::all_up_to(12) {
            assert_eq!(decode_literal(&encode_literal(&x)).unwrap(), x);
        }
    }

    #[test]
    fn literal_decode_rejects_malformed() {
        assert!(decode_literal(&bs("")).is_err());
        assert!(decode_literal(&bs("111")).is_err());
        assert!(decode_literal(&bs("110")).is_err());
        assert!(decode_literal(&bs("1011")).is_err());
    }

    #[test]
    fn prefix_relations() {
        assert!(bs("").is_prefix_of(&bs("1")));
        assert!(bs("01").is_prefix_of(&bs("01")));
        assert!(!bs("01").is_prefix_of(&bs("0")));
        assert!(bs("0").is_comparable(&bs("01")));
        assert!(!bs("00").is_comparable(&bs("01")));
    }

    #[test]
    fn parse_and_render() {
        assert_eq!("λ".parse::<BitString>().unwrap(), BitString::empty());
        assert_eq!(bs("0110").to_string(), "0110");
        assert_eq!(BitString::empty().to_string(), "");
        assert!("012".parse::<BitString>().is_err());
        assert_eq!(bs("0110").checked_prefix(5), Err(BitsError::OutOfBounds { index: 5, len: 4 }));
    }
}
