//! Finitely supported sequences over Z with positive values.
//!
//! Zeros are unrepresentable: an entry of 0 is encoded by absence. Only
//! magnitudes are stored since every norm depends on |x_j| alone.

use crate::error::{MorreyError, Result};
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};
use std::path::Path;

/// Sorted, duplicate-free list of (index, value) pairs, values > 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseSequence {
    entries: Vec<(i64, f64)>,
}

impl SparseSequence {
    pub fn empty() -> Self {
        SparseSequence { entries: Vec::new() }
    }

    /// Builds from arbitrary-order pairs. Sorts by index; rejects
    /// duplicates, non-finite values, and values <= 0.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, f64)>) -> Result<Self> {
        let mut entries: Vec<(i64, f64)> = pairs.into_iter().collect();
        entries.sort_by_key(|&(j, _)| j);
        for pair in entries.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(MorreyError::InvalidSequence(format!(
                    "duplicate index {}",
                    pair[0].0
                )));
            }
        }
        for &(j, v) in &entries {
            if !v.is_finite() || v <= 0.0 {
                return Err(MorreyError::InvalidSequence(format!(
                    "value at index {j} must be a positive finite real, got {v}"
                )));
            }
        }
        Ok(SparseSequence { entries })
    }

    /// 0/1 sequence over a support set (indices need not be sorted).
    pub fn indicator(support: impl IntoIterator<Item = i64>) -> Self {
        let mut idx: Vec<i64> = support.into_iter().collect();
        idx.sort_unstable();
        idx.dedup();
        SparseSequence {
            entries: idx.into_iter().map(|j| (j, 1.0)).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(i64, f64)] {
        &self.entries
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> + '_ {
        self.entries.iter().map(|&(j, _)| j)
    }

    pub fn min_index(&self) -> Option<i64> {
        self.entries.first().map(|&(j, _)| j)
    }

    pub fn max_index(&self) -> Option<i64> {
        self.entries.last().map(|&(j, _)| j)
    }

    /// max index - min index, 0 for empty/singleton.
    pub fn span(&self) -> u64 {
        match (self.min_index(), self.max_index()) {
            (Some(a), Some(b)) => b.abs_diff(a),
            _ => 0,
        }
    }

    pub fn value_at(&self, j: i64) -> f64 {
        match self.entries.binary_search_by_key(&j, |&(i, _)| i) {
            Ok(pos) => self.entries[pos].1,
            Err(_) => 0.0,
        }
    }

    pub fn max_value(&self) -> f64 {
        self.entries.iter().fold(0.0, |acc, &(_, v)| acc.max(v))
    }

    /// True when the support is a contiguous integer interval and all
    /// values are bit-identical.
    pub fn is_constant_block(&self) -> bool {
        if self.entries.len() <= 1 {
            return !self.entries.is_empty();
        }
        let v0 = self.entries[0].1;
        let contiguous = self.span() + 1 == self.entries.len() as u64;
        contiguous && self.entries.iter().all(|&(_, v)| v == v0)
    }

    /// Keep entries with |j| <= bound.
    pub fn truncate_abs(&self, bound: i64) -> Self {
        SparseSequence {
            entries: self
                .entries
                .iter()
                .copied()
                .filter(|&(j, _)| j.abs() <= bound)
                .collect(),
        }
    }

    /// Entries scaled by c > 0.
    pub fn scale(&self, c: f64) -> Result<Self> {
        if !c.is_finite() || c <= 0.0 {
            return Err(MorreyError::InvalidSequence(format!(
                "scale factor must be positive, got {c}"
            )));
        }
        Ok(SparseSequence {
            entries: self.entries.iter().map(|&(j, v)| (j, c * v)).collect(),
        })
    }

    /// Distinct values, descending (bit-identical duplicates removed).
    pub fn distinct_values_desc(&self) -> Vec<f64> {
        let mut vals: Vec<f64> = self.entries.iter().map(|&(_, v)| v).collect();
        vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
        vals.dedup();
        vals
    }

    /// 0/1 level set {j : x_j >= gamma}.
    pub fn level_set(&self, gamma: f64) -> SparseSequence {
        SparseSequence {
            entries: self
                .entries
                .iter()
                .filter(|&&(_, v)| v >= gamma)
                .map(|&(j, _)| (j, 1.0))
                .collect(),
        }
    }

    /// 0/1 strict level set {j : x_j > gamma} (used by the gamma-sweep
    /// oracle; the norm engine itself uses `level_set`).
    pub fn strict_level_set(&self, gamma: f64) -> SparseSequence {
        SparseSequence {
            entries: self
                .entries
                .iter()
                .filter(|&&(_, v)| v > gamma)
                .map(|&(j, _)| (j, 1.0))
                .collect(),
        }
    }

    /// Parses either the text form (`<index> <value>` per line, `#`
    /// comments) or the JSON variant `{"entries": [[j, v], ...]}`.
    pub fn parse(input: &str) -> Result<Self> {
        let trimmed = input.trim_start();
        if trimmed.starts_with('{') {
            return Self::parse_json(input);
        }
        Self::parse_text(input)
    }

    fn parse_json(input: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct JsonSeq {
            entries: Vec<(i64, f64)>,
        }
        let parsed: JsonSeq = serde_json::from_str(input).map_err(|e| MorreyError::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        Self::from_pairs(parsed.entries)
    }

    fn parse_text(input: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut last: Option<i64> = None;
        for (lineno, raw) in input.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (js, vs) = match (parts.next(), parts.next(), parts.next()) {
                (Some(j), Some(v), None) => (j, v),
                _ => {
                    return Err(MorreyError::Parse {
                        line: lineno + 1,
                        msg: format!("expected '<index> <value>', got '{line}'"),
                    })
                }
            };
            let j: i64 = js.parse().map_err(|e| MorreyError::Parse {
                line: lineno + 1,
                msg: format!("bad index '{js}': {e}"),
            })?;
            let v: f64 = vs.parse().map_err(|e| MorreyError::Parse {
                line: lineno + 1,
                msg: format!("bad value '{vs}': {e}"),
            })?;
            if let Some(prev) = last {
                if j <= prev {
                    return Err(MorreyError::Parse {
                        line: lineno + 1,
                        msg: format!("indices must be strictly increasing ({prev} then {j})"),
                    });
                }
            }
            last = Some(j);
            entries.push((j, v));
        }
        Self::from_pairs(entries)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let mut text = String::new();
        let file = std::fs::File::open(path)?;
        let mut reader = std::io::BufReader::new(file);
        use std::io::Read;
        reader.read_to_string(&mut text)?;
        Self::parse(&text)
    }

    /// Writes the text form. `{:?}` formatting round-trips f64 exactly.
    pub fn write_text(&self, mut out: impl Write) -> Result<()> {
        for &(j, v) in &self.entries {
            writeln!(out, "{} {:?}", j, v)?;
        }
        Ok(())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        let mut writer = std::io::BufWriter::new(file);
        self.write_text(&mut writer)?;
        writer.flush()?;
        Ok(())
    }

    /// Reads from any buffered source (text or JSON form).
    pub fn read(mut input: impl BufRead) -> Result<Self> {
        let mut text = String::new();
        input.read_to_string(&mut text)?;
        Self::parse(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_zero_and_negative_values() {
        assert!(SparseSequence::from_pairs([(0, 0.0)]).is_err());
        assert!(SparseSequence::from_pairs([(0, -1.0)]).is_err());
    }

    #[test]
    fn rejects_duplicates() {
        assert!(SparseSequence::from_pairs([(3, 1.0), (3, 2.0)]).is_err());
    }

    #[test]
    fn sorts_input() {
        let s = SparseSequence::from_pairs([(5, 1.0), (-2, 3.0)]).unwrap();
        assert_eq!(s.entries(), &[(-2, 3.0), (5, 1.0)]);
    }

    #[test]
    fn text_parse_with_comments() {
        let s = SparseSequence::parse("# header\n-1 2.5\n0 1\n\n7 0.125\n").unwrap();
        assert_eq!(s.entries(), &[(-1, 2.5), (0, 1.0), (7, 0.125)]);
    }

    #[test]
    fn text_rejects_nonincreasing() {
        assert!(SparseSequence::parse("1 1\n0 1\n").is_err());
    }

    #[test]
    fn json_variant() {
        let s = SparseSequence::parse(r#"{"entries": [[0, 1.0], [4, 2.0]]}"#).unwrap();
        assert_eq!(s.entries(), &[(0, 1.0), (4, 2.0)]);
    }

    #[test]
    fn constant_block_detection() {
        let b = SparseSequence::indicator(-3..=3);
        assert!(b.is_constant_block());
        let gap = SparseSequence::indicator([0, 2]);
        assert!(!gap.is_constant_block());
        let uneven = SparseSequence::from_pairs([(0, 1.0), (1, 2.0)]).unwrap();
        assert!(!uneven.is_constant_block());
    }

    proptest! {
        // store/load round-trip is bit-exact
        #[test]
        fn text_roundtrip(pairs in proptest::collection::btree_map(-1000i64..1000, 1e-12f64..1e12, 0..40)) {
            let s = SparseSequence::from_pairs(pairs).unwrap();
            let mut buf = Vec::new();
            s.write_text(&mut buf).unwrap();
            let back = SparseSequence::parse(std::str::from_utf8(&buf).unwrap()).unwrap();
            prop_assert_eq!(s, back);
        }
    }
}
