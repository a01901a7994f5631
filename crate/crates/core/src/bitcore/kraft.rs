//! Kraft sums, prefix-freeness, and the online Kraft–Chaitin allocator.

use std::collections::BTreeMap;

use thiserror::Error;

use super::bits::BitString;
use super::dyadic::DyadicWeight;
use crate::machines::Machine;

/// A pair of distinct codewords where `shorter` is a prefix of `longer`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixViolation {
    pub shorter: BitString,
    pub longer: BitString,
}

/// Exact `Σ 2^{-|w|}`. Duplicates count once (the input is a set).
pub fn kraft_weight<'a, I>(codewords: I) -> DyadicWeight
where
    I: IntoIterator<Item = &'a BitString>,
{
    let mut words: Vec<&BitString> = codewords.into_iter().collect();
    words.sort();
    words.dedup();
    words
        .into_iter()
        .map(|w| DyadicWeight::pow2(-(w.len() as i64)))
        .sum()
}

/// Returns the first violating pair in lexicographic order, or `None` when the
/// set is an antichain under the prefix order.
pub fn check_prefix_free<'a, I>(codewords: I) -> Option<PrefixViolation>
where
    I: IntoIterator<Item = &'a BitString>,
{
    let mut words: Vec<&BitString> = codewords.into_iter().collect();
    words.sort();
    words.dedup();
    // In lexicographic order every extension of w sits directly after w's
    // block, so checking neighbours suffices.
    words.windows(2).find_map(|pair| {
        pair[0].is_prefix_of(pair[1]).then(|| PrefixViolation {
            shorter: pair[0].clone(),
            longer: pair[1].clone(),
        })
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LengthRequest {
    pub index: usize,
    pub requested_length: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KcError {
    #[error("request {index} (length {requested_length}) would push the Kraft sum above 1")]
    Overweight {
        index: usize,
        requested_length: usize,
        /// Codewords issued before the rejected request; they stay valid.
        allocated: Vec<BitString>,
    },
    #[error("shift {shift} leaves total weight {weight} above 1")]
    ShiftTooSmall { shift: u32, weight: DyadicWeight },
}

/// Online Kraft–Chaitin session.
///
/// The free measure is kept as a set of free nodes of pairwise distinct
/// lengths (the binary expansion of `1 - used`). A request of length `d` takes
/// the free node of length `d` if there is one, and otherwise splits the
/// shortest free interval that is still large enough, taking its leftmost part.
/// Free nodes are ordered by address with increasing size, so this is also
/// the leftmost free aligned interval of length `d`.
#[derive(Debug, Clone)]
pub struct KcAllocator {
    free: BTreeMap<usize, BitString>,
    used: DyadicWeight,
    issued: Vec<BitString>,
}

impl Default for KcAllocator {
    fn default() -> Self {
        Self::new()
    }
}

impl KcAllocator {
    pub fn new() -> Self {
        let mut free = BTreeMap::new();
        free.insert(0, BitString::empty());
        KcAllocator {
            free,
            used: DyadicWeight::zero(),
            issued: Vec::new(),
        }
    }

    pub fn used(&self) -> &DyadicWeight {
        &self.used
    }

    pub fn issued(&self) -> &[BitString] {
        &self.issued
    }

    pub fn request(&mut self, requested_length: usize) -> Result<BitString, KcError> {
        let weight = &self.used + &DyadicWeight::pow2(-(requested_length as i64));
        if !weight.le_one() {
            return Err(KcError::Overweight {
                index: self.issued.len(),
                requested_length,
                allocated: self.issued.clone(),
            });
        }
        let (&node_len, _) = self
            .free
            .range(..=requested_length)
            .next_back()
            .expect("free measure covers every request within weight 1");
        let node = self.free.remove(&node_len).expect("present");
        let mut word = node.clone();
        for _ in node_len..requested_length {
            self.free.insert(word.len() + 1, word.with_bit(true));
            word.push(false);
        }
        self.used = weight;
        self.issued.push(word.clone());
        Ok(word)
    }
}

/// Batch driver over a fresh [`KcAllocator`].
pub fn kc_allocate(requests: &[LengthRequest]) -> Result<Vec<BitString>, KcError> {
    let mut session = KcAllocator::new();
    for req in requests {
        session.request(req.requested_length)?;
    }
    Ok(session.issued)
}

/// `g` restricted to `{0..=horizon}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthTable {
    values: Vec<u32>,
}

impl GrowthTable {
    pub fn new(values: Vec<u32>) -> Self {
        assert!(!values.is_empty(), "growth table needs g(0)");
        GrowthTable { values }
    }

    pub fn from_fn(horizon: usize, g: impl Fn(usize) -> u32) -> Self {
        GrowthTable::new((0..=horizon).map(g).collect())
    }

    pub fn horizon(&self) -> usize {
        self.values.len() - 1
    }

    pub fn g(&self, n: usize) -> u32 {
        self.values[n]
    }

    /// `Σ_{n≤L} 2^{-g(n)}`, which equals `Σ_{|x|≤L} 2^{-(|x|+g(|x|))}`.
    pub fn weight(&self) -> DyadicWeight {
        self.values
            .iter()
            .map(|&g| DyadicWeight::pow2(-(g as i64)))
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftPolicy {
    /// The least shift that brings the weight to at most 1.
    Least,
    Fixed(u32),
}

#[derive(Debug, Clone)]
pub struct GrowthMachine {
    pub machine: Machine,
    /// The realized constant `c`: every `x` gets length `|x| + g(|x|) + shift`.
    pub shift: u32,
    pub raw_weight: DyadicWeight,
}

/// Builds a table machine describing every `x` with `|x| ≤ L` by a codeword of
/// length `|x| + g(|x|) + s`, allocated online in length-lexicographic order.
pub fn machine_from_g(g: &GrowthTable, policy: ShiftPolicy) -> Result<GrowthMachine, KcError> {
    let raw_weight = g.weight();
    let shift = match policy {
        ShiftPolicy::Least => {
            let mut s = 0u32;
            while !(&raw_weight * &DyadicWeight::pow2(-(s as i64))).le_one() {
                s += 1;
            }
            s
        }
        ShiftPolicy::Fixed(s) => {
            let weight = &raw_weight * &DyadicWeight::pow2(-(s as i64));
            if !weight.le_one() {
                return Err(KcError::ShiftTooSmall { shift: s, weight });
            }
            s
        }
    };
    let mut session = KcAllocator::new();
    let mut entries = Vec::new();
    for x in BitString::all_up_to(g.horizon()) {
        let len = x.len() + g.g(x.len()) as usize + shift as usize;
        entries.push((session.request(len)?, x));
    }
    let machine = Machine::table(entries).expect("Kraft-Chaitin output is prefix-free");
    Ok(GrowthMachine {
        machine,
        shift,
        raw_weight,
    })
}
