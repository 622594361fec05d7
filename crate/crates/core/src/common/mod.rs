//! Common factors of an automatic sequence and a Sturmian word.

mod suffix_automaton;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::automatic::{factors::DEFAULT_MAX_ROUNDS, FactorClosure, UniformMorphism};
use crate::sturmian::{self, SturmianSpec, DEFAULT_PREFIX_CAP};
use crate::words::{self, Word};

pub use suffix_automaton::SuffixAutomaton;

/// Per-length common factors, from the empty word up to the first length
/// with an empty intersection (or the length cap).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommonFactorReport {
    #[serde(with = "length_map")]
    pub lengths: BTreeMap<usize, BTreeSet<Word>>,
    pub longest: usize,
    /// Some length had an empty intersection of two certified sets, so no
    /// longer common factor exists.
    pub exhausted: bool,
    /// First length at which either side was not certified complete.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uncertified_at: Option<usize>,
}

impl CommonFactorReport {
    pub fn total_factors(&self) -> usize {
        self.lengths.values().map(BTreeSet::len).sum()
    }

    pub fn at(&self, len: usize) -> Option<&BTreeSet<Word>> {
        self.lengths.get(&len)
    }
}

mod length_map {
    use std::collections::{BTreeMap, BTreeSet};

    use serde::ser::SerializeMap;
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::words::{self, Word};

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<usize, BTreeSet<Word>>,
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        let mut out = serializer.serialize_map(Some(map.len()))?;
        for (len, set) in map {
            let strings: Vec<String> = set.iter().map(|w| words::to_string(w)).collect();
            out.serialize_entry(&len.to_string(), &strings)?;
        }
        out.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<BTreeMap<usize, BTreeSet<Word>>, D::Error> {
        let raw = BTreeMap::<String, Vec<String>>::deserialize(deserializer)?;
        raw.into_iter()
            .map(|(k, v)| {
                let len = k.parse().map_err(serde::de::Error::custom)?;
                Ok((len, v.into_iter().map(String::into_bytes).collect()))
            })
            .collect()
    }
}

/// Intersects certified factor sets length by length, stopping at the first
/// empty intersection.
pub fn common_factors(m: &UniformMorphism, spec: &SturmianSpec, max_len: usize) -> CommonFactorReport {
    common_factors_with_caps(m, spec, max_len, DEFAULT_MAX_ROUNDS, DEFAULT_PREFIX_CAP)
}

pub fn common_factors_with_caps(
    m: &UniformMorphism,
    spec: &SturmianSpec,
    max_len: usize,
    max_rounds: usize,
    prefix_cap: usize,
) -> CommonFactorReport {
    let mut closure = FactorClosure::new(m, max_len);
    let automatic_certified = closure.run(max_rounds);
    let mut lengths = BTreeMap::from([(0, BTreeSet::from([Word::new()]))]);
    let mut longest = 0;
    let mut exhausted = false;
    let mut uncertified_at = None;
    for len in 1..=max_len {
        let automatic = closure.coded(len);
        let sturmian = sturmian::factor_set_with_cap(spec, len, prefix_cap);
        let common: BTreeSet<Word> = automatic.intersection(&sturmian.factors).cloned().collect();
        let certified = automatic_certified && sturmian.certified;
        let empty = common.is_empty();
        if !empty {
            longest = len;
        }
        lengths.insert(len, common);
        if !certified {
            uncertified_at = Some(len);
            break;
        }
        if empty {
            exhausted = true;
            break;
        }
    }
    CommonFactorReport {
        lengths,
        longest,
        exhausted,
        uncertified_at,
    }
}

/// A longest common factor of two finite words with its first occurrences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LongestCommonFactor {
    pub length: usize,
    #[serde(with = "word_string")]
    pub witness: Word,
    /// Start in the first word.
    pub i: usize,
    /// Start in the second word.
    pub j: usize,
}

mod word_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::words::{self, Word};

    pub fn serialize<S: Serializer>(w: &Word, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&words::to_string(w))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Word, D::Error> {
        Ok(String::deserialize(deserializer)?.into_bytes())
    }
}

/// Longest block `x[i..i+L] = a[j..j+L]`, ties broken by least `i`, then
/// least `j`. Linear time: a suffix automaton of `x` is streamed against `a`.
pub fn longest_common_factor_prefix(x: &[u8], a: &[u8]) -> LongestCommonFactor {
    let automaton = SuffixAutomaton::new(x);
    let mut best = (0usize, usize::MAX, usize::MAX);
    for (end, len, first_end) in automaton.matches(a) {
        if len == 0 || len < best.0 {
            continue;
        }
        let candidate = (len, first_end + 1 - len, end + 1 - len);
        if len > best.0 || (candidate.1, candidate.2) < (best.1, best.2) {
            best = candidate;
        }
    }
    match best {
        (0, _, _) => LongestCommonFactor {
            length: 0,
            witness: Word::new(),
            i: 0,
            j: 0,
        },
        (length, i, j) => LongestCommonFactor {
            length,
            witness: x[i..i + length].to_vec(),
            i,
            j,
        },
    }
}

/// Renders a report as a plain-text table, one line per length.
pub fn report_to_text(report: &CommonFactorReport) -> String {
    let mut out = String::new();
    for (len, set) in &report.lengths {
        let listed: Vec<String> = set
            .iter()
            .map(|w| if w.is_empty() { "ε".to_string() } else { words::to_string(w) })
            .collect();
        let line = format!("{len:>3} {:>3}  {}", set.len(), listed.join(" "));
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out.push_str(&format!(
        "longest {}  exhausted {}  total {}\n",
        report.longest,
        report.exhausted,
        report.total_factors()
    ));
    if let Some(len) = report.uncertified_at {
        out.push_str(&format!("uncertified at length {len}\n"));
    }
    out
}
