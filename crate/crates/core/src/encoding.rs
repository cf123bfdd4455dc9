//! Classical data layer: index and value regeneration between iterations,
//! rank compaction, and `(index, value)` to basis-code encoding.
//!
//! Every record keeps its original index and value for its whole life.
//! Each iteration assigns fresh consecutive current indexes to the records
//! that survived filtering and replaces their values by ranks among the
//! surviving originals, so both registers shrink with the working set.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::error::{Error, Result};

/// One `(index, value)` data point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairRecord {
    original_index: usize,
    original_value: u64,
    current_index: Option<usize>,
    current_value: u64,
}

impl PairRecord {
    pub fn new(original_index: usize, original_value: u64) -> Self {
        Self {
            original_index,
            original_value,
            current_index: Some(original_index),
            current_value: original_value,
        }
    }

    pub fn original_index(&self) -> usize {
        self.original_index
    }

    pub fn original_value(&self) -> u64 {
        self.original_value
    }

    /// `None` once the record has been filtered out.
    pub fn current_index(&self) -> Option<usize> {
        self.current_index
    }

    pub fn current_value(&self) -> u64 {
        self.current_value
    }

    pub fn is_alive(&self) -> bool {
        self.current_index.is_some()
    }

    /// Drops the record from all later iterations.
    pub fn filter_out(&mut self) {
        self.current_index = None;
    }
}

/// `ceil(log2 n)` for `n >= 1`.
pub fn ceil_log2(n: usize) -> usize {
    match n {
        0 | 1 => 0,
        _ => (usize::BITS - (n - 1).leading_zeros()) as usize,
    }
}

/// Qubits needed to address `n` items: `ceil(log2 n)`, at least 1.
pub fn register_width(n: usize) -> usize {
    ceil_log2(n).max(1)
}

/// The working set `G_i` of one iteration with its register widths and the
/// original-to-current mapping tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemInstance {
    pub iteration: usize,
    pub pairs: Vec<PairRecord>,
    pub idx_qubits: usize,
    pub val_qubits: usize,
    /// original index -> current index
    pub map_i: BTreeMap<usize, usize>,
    /// original value -> current value
    pub map_v: BTreeMap<u64, u64>,
}

impl ProblemInstance {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn total_qubits(&self) -> usize {
        self.idx_qubits + self.val_qubits
    }

    /// Basis code of every pair, in pair order.
    pub fn codes(&self) -> Result<Vec<usize>> {
        self.pairs
            .iter()
            .map(|p| encode_pair(p, self.idx_qubits, self.val_qubits))
            .collect()
    }
}

/// Regenerates current indexes for `records` and assembles iteration
/// `iteration`'s working set.
///
/// At iteration 1 every record is (re)activated and its original index is
/// set to its position. Later iterations skip filtered records and number
/// the survivors consecutively in dataset order. Values are regenerated by
/// [`gen_values`] and written back into `records`.
pub fn gen_indexes(records: &mut [PairRecord], iteration: usize) -> Result<ProblemInstance> {
    if iteration == 0 {
        return Err(Error::InvalidIteration);
    }
    let mut map_i = BTreeMap::new();
    if iteration == 1 {
        for (j, record) in records.iter_mut().enumerate() {
            record.original_index = j;
            record.current_index = Some(j);
            map_i.insert(j, j);
        }
    } else {
        for (j, record) in records.iter_mut().filter(|r| r.is_alive()).enumerate() {
            record.current_index = Some(j);
            map_i.insert(record.original_index, j);
        }
    }
    let pairs: Vec<PairRecord> = records.iter().filter(|r| r.is_alive()).cloned().collect();
    if pairs.is_empty() {
        return Err(Error::EmptyWorkingSet(iteration));
    }
    let instance = gen_values(ProblemInstance {
        iteration,
        idx_qubits: register_width(pairs.len()),
        val_qubits: register_width(pairs.len()),
        pairs,
        map_i,
        map_v: BTreeMap::new(),
    });
    for (record, pair) in records.iter_mut().filter(|r| r.is_alive()).zip(&instance.pairs) {
        record.current_value = pair.current_value;
    }
    Ok(instance)
}

/// Regenerates current values: identity at iteration 1, ranks among the
/// surviving original values afterwards.
///
/// The value register is `ceil(log2 |G_i|)` wide (min 1), widened only if
/// iteration-1 values are not rank-compact.
pub fn gen_values(mut instance: ProblemInstance) -> ProblemInstance {
    instance.map_v.clear();
    if instance.iteration == 1 {
        for pair in &mut instance.pairs {
            pair.current_value = pair.original_value;
            instance.map_v.insert(pair.original_value, pair.original_value);
        }
    } else {
        let ranks = rank(instance.pairs.iter().map(|p| p.original_value));
        for pair in &mut instance.pairs {
            pair.current_value = ranks[&pair.original_value];
            instance.map_v.insert(pair.original_value, pair.current_value);
        }
    }
    let max_value = instance.pairs.iter().map(|p| p.current_value).max().unwrap_or(0);
    let value_bits = (u64::BITS - max_value.leading_zeros()) as usize;
    instance.val_qubits = register_width(instance.pairs.len()).max(value_bits);
    instance
}

/// Index block in the high bits, value block in the low bits.
pub fn encode_pair(record: &PairRecord, idx_qubits: usize, val_qubits: usize) -> Result<usize> {
    let index = record
        .current_index
        .ok_or(Error::FilteredRecord(record.original_index))?;
    if idx_qubits + val_qubits >= usize::BITS as usize {
        return Err(Error::RegisterTooWide(idx_qubits + val_qubits));
    }
    if index >> idx_qubits != 0 {
        return Err(Error::FieldExceedsWidth { field: "index", value: index as u64, width: idx_qubits });
    }
    if record.current_value >> val_qubits != 0 {
        return Err(Error::FieldExceedsWidth {
            field: "value",
            value: record.current_value,
            width: val_qubits,
        });
    }
    Ok(index << val_qubits | record.current_value as usize)
}

/// Order-preserving compaction of distinct values onto `0..n`.
pub fn rank(values: impl IntoIterator<Item = u64>) -> BTreeMap<u64, u64> {
    values
        .into_iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .zip(0..)
        .collect()
}

/// Original values being searched for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetSet {
    values: BTreeSet<u64>,
}

impl TargetSet {
    pub fn new(values: impl IntoIterator<Item = u64>) -> Result<Self> {
        let values: BTreeSet<u64> = values.into_iter().collect();
        if values.is_empty() {
            return Err(Error::EmptyTargetSet);
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &BTreeSet<u64> {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, value: u64) -> bool {
        self.values.contains(&value)
    }

    /// Fails on the first target value absent from `records`.
    pub fn check_present(&self, records: &[PairRecord]) -> Result<()> {
        let present: BTreeSet<u64> = records.iter().map(|r| r.original_value).collect();
        match self.values.iter().find(|v| !present.contains(v)) {
            Some(&missing) => Err(Error::TargetMissing(missing)),
            None => Ok(()),
        }
    }

    /// Positions of the records holding a target value.
    pub fn truth_indexes(&self, records: &[PairRecord]) -> BTreeSet<usize> {
        records
            .iter()
            .enumerate()
            .filter(|(_, r)| self.contains(r.original_value))
            .map(|(j, _)| j)
            .collect()
    }
}

/// Frequency-ranked word list: the word on line `r` has rank `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wordlist {
    words: Vec<String>,
}

impl Wordlist {
    /// One word per line; empty lines are rejected.
    pub fn parse(text: &str) -> Result<Self> {
        let words = text
            .lines()
            .enumerate()
            .map(|(n, line)| {
                let word = line.trim_end_matches('\r');
                if word.trim().is_empty() {
                    Err(Error::EmptyWordlistLine(n + 1))
                } else {
                    Ok(word.to_string())
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { words })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text)
    }

    /// Reads `path`, falling back to the built-in corpus when the file cannot
    /// be read and `fallback` is set.
    pub fn load(path: &Path, fallback: bool) -> Result<Self> {
        match Self::from_path(path) {
            Err(Error::Io { .. }) if fallback => Ok(Self::builtin()),
            other => other,
        }
    }

    /// The 100 most frequent English words.
    pub fn builtin() -> Self {
        Self { words: BUILTIN_WORDS.iter().map(|w| w.to_string()).collect() }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, rank: usize) -> Option<&str> {
        self.words.get(rank).map(String::as_str)
    }

    /// The top `size` words as records whose index and value both equal the rank.
    pub fn records(&self, size: usize) -> Result<Vec<PairRecord>> {
        if size > self.words.len() {
            return Err(Error::NotEnoughWords { available: self.words.len(), requested: size });
        }
        Ok((0..size).map(|r| PairRecord::new(r, r as u64)).collect())
    }
}

/// Loads `size` records from `source`, or from the built-in corpus when
/// `source` is `None`.
pub fn load_wordlist(source: Option<&Path>, size: usize) -> Result<Vec<PairRecord>> {
    match source {
        Some(path) => Wordlist::from_path(path)?.records(size),
        None => Wordlist::builtin().records(size),
    }
}

const BUILTIN_WORDS: [&str; 100] = [
    "the", "be", "to", "of", "and", "a", "in", "that", "have", "i", "it", "for", "not", "on",
    "with", "he", "as", "you", "do", "at", "this", "but", "his", "by", "from", "they", "we",
    "say", "her", "she", "or", "an", "will", "my", "one", "all", "would", "there", "their",
    "what", "so", "up", "out", "if", "about", "who", "get", "which", "go", "me", "when", "make",
    "can", "like", "time", "no", "just", "him", "know", "take", "people", "into", "year", "your",
    "good", "some", "could", "them", "see", "other", "than", "then", "now", "look", "only",
    "come", "its", "over", "think", "also", "back", "after", "use", "two", "how", "our", "work",
    "first", "well", "way", "even", "new", "want", "because", "any", "these", "give", "day",
    "most", "us",
];
