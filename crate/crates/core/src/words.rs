//! Finite words over single-byte symbols.

use std::collections::BTreeSet;

/// A finite word; symbols are printable ASCII bytes.
pub type Word = Vec<u8>;

/// Distinct length-`n` windows of `word`.
pub fn factors_of(word: &[u8], n: usize) -> BTreeSet<Word> {
    if n == 0 {
        return BTreeSet::from([Word::new()]);
    }
    word.windows(n).map(<[u8]>::to_vec).collect()
}

pub fn to_string(word: &[u8]) -> String {
    word.iter().map(|&b| b as char).collect()
}

/// Serde adapter storing a set of words as a sorted list of strings.
pub mod set_as_strings {
    use std::collections::BTreeSet;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::Word;

    pub fn serialize<S: Serializer>(set: &BTreeSet<Word>, serializer: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = set.iter().map(|w| super::to_string(w)).collect();
        strings.serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<BTreeSet<Word>, D::Error> {
        let strings = Vec::<String>::deserialize(deserializer)?;
        strings
            .into_iter()
            .map(|s| {
                if s.is_ascii() {
                    Ok(s.into_bytes())
                } else {
                    Err(serde::de::Error::custom(format!("non-ASCII word {s:?}")))
                }
            })
            .collect()
    }
}
