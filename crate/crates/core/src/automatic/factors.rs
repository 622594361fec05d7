use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Dfao, Symbol, UniformMorphism};
use crate::words::{self, Word};

/// Default number of closure rounds before giving up on certification.
pub const DEFAULT_MAX_ROUNDS: usize = 64;

/// The length-`n` factors of an infinite word.
///
/// When `certified` is set the set is exactly the factor set of the infinite
/// word; otherwise it is a subset (typically from a finite prefix).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorSet {
    pub length: usize,
    #[serde(with = "words::set_as_strings")]
    pub factors: BTreeSet<Word>,
    pub certified: bool,
    pub provenance: String,
}

impl FactorSet {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn contains(&self, w: &[Symbol]) -> bool {
        self.factors.contains(w)
    }
}

/// Outcome of a membership query against a possibly uncertified factor set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Present,
    Absent,
    /// Not seen, but the factor set was not certified complete.
    Unknown,
}

/// Fixpoint iteration of the letter-level factor sets of `m^j(seed)` for all
/// lengths `1..=n` at once.
///
/// A length-`ℓ` window of `m(w)` lies inside `m(u)` for a factor `u` of `w`
/// with `|u| ≤ ⌈(ℓ−1)/k⌉ + 1 ≤ ℓ`, so round `j + 1` depends only on round
/// `j` at lengths up to `n`. Once a round changes nothing, no later round
/// will, and the sets are the factor sets of the fixed point.
#[derive(Clone, Debug)]
pub struct FactorClosure<'a> {
    morphism: &'a UniformMorphism,
    max_len: usize,
    /// `sets[ℓ]` holds the letter factors of length `ℓ`; `sets[0]` is unused.
    sets: Vec<BTreeSet<Vec<usize>>>,
    rounds: usize,
    stable: bool,
}

impl<'a> FactorClosure<'a> {
    pub fn new(morphism: &'a UniformMorphism, max_len: usize) -> Self {
        let mut sets = vec![BTreeSet::new(); max_len + 1];
        if max_len >= 1 {
            sets[1].insert(vec![morphism.seed()]);
        }
        FactorClosure {
            morphism,
            max_len,
            sets,
            rounds: 0,
            stable: false,
        }
    }

    pub fn sets(&self) -> &[BTreeSet<Vec<usize>>] {
        &self.sets
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn is_stable(&self) -> bool {
        self.stable
    }

    /// Performs one round; returns whether anything changed.
    pub fn step(&mut self) -> bool {
        let k = self.morphism.base() as usize;
        let mut next = vec![BTreeSet::new(); self.max_len + 1];
        for (len, slot) in next.iter_mut().enumerate().skip(1) {
            let span = (len - 1).div_ceil(k) + 1;
            for source_len in 1..=span.min(self.max_len) {
                for u in &self.sets[source_len] {
                    let image = self.morphism.apply(u);
                    for window in image.windows(len) {
                        slot.insert(window.to_vec());
                    }
                }
            }
        }
        debug_assert!(self
            .sets
            .iter()
            .zip(&next)
            .all(|(old, new)| old.is_subset(new)));
        self.rounds += 1;
        let changed = next != self.sets;
        self.sets = next;
        self.stable = !changed;
        changed
    }

    /// Runs until stable or `max_rounds` rounds have been made.
    pub fn run(&mut self, max_rounds: usize) -> bool {
        while !self.stable && self.rounds < max_rounds {
            self.step();
        }
        self.stable
    }

    pub fn coded(&self, len: usize) -> BTreeSet<Word> {
        self.sets[len]
            .iter()
            .map(|u| self.morphism.encode(u))
            .collect()
    }
}

/// Factor set of the coded fixed point of `m`, certified by closure.
pub fn factor_set(m: &UniformMorphism, n: usize) -> FactorSet {
    factor_set_with_cap(m, n, DEFAULT_MAX_ROUNDS)
}

pub fn factor_set_with_cap(m: &UniformMorphism, n: usize, max_rounds: usize) -> FactorSet {
    if n == 0 {
        return FactorSet {
            length: 0,
            factors: BTreeSet::from([Word::new()]),
            certified: true,
            provenance: "empty word".into(),
        };
    }
    let mut closure = FactorClosure::new(m, n);
    let certified = closure.run(max_rounds);
    let provenance = if certified {
        format!(
            "{}-uniform morphism factor closure, stable after {} rounds",
            m.base(),
            closure.rounds()
        )
    } else {
        format!(
            "{}-uniform morphism factor closure, not stable after {} rounds",
            m.base(),
            closure.rounds()
        )
    };
    FactorSet {
        length: n,
        factors: closure.coded(n),
        certified,
        provenance,
    }
}

/// Factor sets of every length `1..=n`, from a single closure run.
pub fn factor_sets_up_to(m: &UniformMorphism, n: usize, max_rounds: usize) -> Vec<FactorSet> {
    let mut closure = FactorClosure::new(m, n);
    let certified = closure.run(max_rounds);
    (1..=n)
        .map(|len| FactorSet {
            length: len,
            factors: closure.coded(len),
            certified,
            provenance: format!(
                "{}-uniform morphism factor closure over lengths 1..={n}, {} after {} rounds",
                m.base(),
                if certified { "stable" } else { "not stable" },
                closure.rounds()
            ),
        })
        .collect()
}

/// Factor set of an automatic sequence given by an automaton, through its
/// uniform-morphism presentation.
pub fn dfao_factor_set(dfao: &Dfao, n: usize) -> FactorSet {
    factor_set(&UniformMorphism::from_dfao(dfao), n)
}

pub fn contains_factor(m: &UniformMorphism, w: &[Symbol]) -> Membership {
    let set = factor_set(m, w.len());
    match (set.contains(w), set.certified) {
        (true, _) => Membership::Present,
        (false, true) => Membership::Absent,
        (false, false) => Membership::Unknown,
    }
}

/// Distinct length-`n` windows of a finite prefix; never certified.
pub fn prefix_factor_set(prefix: &[Symbol], n: usize) -> FactorSet {
    FactorSet {
        length: n,
        factors: words::factors_of(prefix, n),
        certified: false,
        provenance: format!("scan of a length-{} prefix", prefix.len()),
    }
}
