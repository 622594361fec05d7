use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{check_symbol, AutomaticError, Symbol};

/// Order in which the base-k digits of an index are fed to an automaton.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DigitOrder {
    /// Least significant digit first (the canonical internal form).
    Lsd,
    /// Most significant digit first.
    Msd,
}

/// Deterministic finite automaton with output, reading indices
/// least-significant-digit first.
///
/// Construction trims unreachable states and checks that reading extra
/// high-order zeros never changes the output.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DfaoParts", into = "DfaoParts")]
pub struct Dfao {
    base: u32,
    initial: usize,
    transitions: Vec<Vec<usize>>,
    outputs: Vec<Symbol>,
}

/// Serialized shape of a [`Dfao`]: states by index, outputs by symbol.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct DfaoParts {
    base: u32,
    initial: usize,
    outputs: String,
    transitions: Vec<Vec<usize>>,
}

impl From<Dfao> for DfaoParts {
    fn from(d: Dfao) -> Self {
        DfaoParts {
            base: d.base,
            initial: d.initial,
            outputs: d.outputs.iter().map(|&s| s as char).collect(),
            transitions: d.transitions,
        }
    }
}

impl TryFrom<DfaoParts> for Dfao {
    type Error = AutomaticError;

    fn try_from(p: DfaoParts) -> Result<Self, Self::Error> {
        Dfao::new(p.base, p.initial, p.transitions, p.outputs.into_bytes())
    }
}

impl Dfao {
    /// Builds a least-significant-digit-first automaton.
    pub fn new(
        base: u32,
        initial: usize,
        transitions: Vec<Vec<usize>>,
        outputs: Vec<Symbol>,
    ) -> Result<Self, AutomaticError> {
        let raw = RawAutomaton::checked(base, initial, transitions, outputs)?;
        let dfao = raw.trimmed().into_dfao();
        dfao.check_zero_robust()?;
        Ok(dfao)
    }

    /// Builds from a most-significant-digit-first automaton by reversal.
    pub fn from_msd(
        base: u32,
        initial: usize,
        transitions: Vec<Vec<usize>>,
        outputs: Vec<Symbol>,
    ) -> Result<Self, AutomaticError> {
        let raw = RawAutomaton::checked(base, initial, transitions, outputs)?;
        let reversed = raw.trimmed().minimized().reversed();
        let dfao = reversed.minimized().into_dfao();
        dfao.check_zero_robust()?;
        Ok(dfao)
    }

    pub fn with_order(
        order: DigitOrder,
        base: u32,
        initial: usize,
        transitions: Vec<Vec<usize>>,
        outputs: Vec<Symbol>,
    ) -> Result<Self, AutomaticError> {
        match order {
            DigitOrder::Lsd => Self::new(base, initial, transitions, outputs),
            DigitOrder::Msd => Self::from_msd(base, initial, transitions, outputs),
        }
    }

    fn check_zero_robust(&self) -> Result<(), AutomaticError> {
        for (state, row) in self.transitions.iter().enumerate() {
            if self.outputs[row[0]] != self.outputs[state] {
                return Err(AutomaticError::NotZeroRobust { state });
            }
        }
        Ok(())
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn num_states(&self) -> usize {
        self.outputs.len()
    }

    pub fn output(&self, state: usize) -> Symbol {
        self.outputs[state]
    }

    pub fn outputs(&self) -> &[Symbol] {
        &self.outputs
    }

    pub fn next(&self, state: usize, digit: u32) -> usize {
        self.transitions[state][digit as usize]
    }

    pub fn transitions(&self) -> &[Vec<usize>] {
        &self.transitions
    }

    /// State reached from `start` after reading `digits` in order.
    pub fn run(&self, start: usize, digits: impl IntoIterator<Item = u32>) -> usize {
        digits.into_iter().fold(start, |q, c| self.next(q, c))
    }

    /// State reached after reading the `width` lowest digits of `s`
    /// (zero-padded), i.e. the start state of the kernel element `(r, s)`
    /// with `r = width`.
    pub fn state_for_residue(&self, width: u32, s: u64) -> usize {
        self.run(self.initial, lsd_digits_padded(s, self.base, width))
    }

    /// Output symbol `x_n`.
    pub fn evaluate(&self, n: u64) -> Symbol {
        self.evaluate_from(self.initial, n)
    }

    /// Output for index `n` when starting in `state`.
    pub fn evaluate_from(&self, state: usize, n: u64) -> Symbol {
        self.outputs[self.run(state, lsd_digits(n, self.base))]
    }

    /// Output after reading an explicit digit string, least significant first.
    pub fn evaluate_digits(&self, digits: &[u32]) -> Symbol {
        self.outputs[self.run(self.initial, digits.iter().copied())]
    }

    pub fn prefix(&self, len: usize) -> Vec<Symbol> {
        (0..len as u64).map(|n| self.evaluate(n)).collect()
    }

    /// Moore-minimal equivalent automaton together with the map from each
    /// state of `self` to its class in the result.
    pub fn minimize(&self) -> (Dfao, Vec<usize>) {
        let raw = RawAutomaton::from(self);
        let classes = raw.equivalence_classes();
        let minimal = raw.quotient(&classes).into_dfao();
        (minimal, classes)
    }

    /// The same automaton started in `state`, trimmed to what is reachable.
    pub fn restarted(&self, state: usize) -> Dfao {
        let mut raw = RawAutomaton::from(self);
        raw.initial = state;
        raw.trimmed().into_dfao()
    }

    /// The equivalent most-significant-digit-first automaton, minimized.
    /// Its initial state loops on digit 0.
    pub fn to_msd(&self) -> (usize, Vec<Vec<usize>>, Vec<Symbol>) {
        let msd = RawAutomaton::from(self).reversed().minimized();
        debug_assert_eq!(msd.transitions[msd.initial][0], msd.initial);
        (msd.initial, msd.transitions, msd.outputs)
    }
}

pub(crate) fn lsd_digits(mut n: u64, base: u32) -> impl Iterator<Item = u32> {
    let base = base as u64;
    std::iter::from_fn(move || {
        (n > 0).then(|| {
            let digit = (n % base) as u32;
            n /= base;
            digit
        })
    })
}

pub(crate) fn lsd_digits_padded(mut n: u64, base: u32, width: u32) -> impl Iterator<Item = u32> {
    let base = base as u64;
    (0..width).map(move |_| {
        let digit = (n % base) as u32;
        n /= base;
        digit
    })
}

/// Automaton tables without the zero-robustness requirement; used for the
/// intermediate steps of reversal and minimization.
#[derive(Clone, Debug)]
struct RawAutomaton {
    base: u32,
    initial: usize,
    transitions: Vec<Vec<usize>>,
    outputs: Vec<Symbol>,
}

impl From<&Dfao> for RawAutomaton {
    fn from(d: &Dfao) -> Self {
        RawAutomaton {
            base: d.base,
            initial: d.initial,
            transitions: d.transitions.clone(),
            outputs: d.outputs.clone(),
        }
    }
}

impl RawAutomaton {
    fn checked(
        base: u32,
        initial: usize,
        transitions: Vec<Vec<usize>>,
        outputs: Vec<Symbol>,
    ) -> Result<Self, AutomaticError> {
        if base < 2 {
            return Err(AutomaticError::InvalidBase(base));
        }
        if outputs.is_empty() {
            return Err(AutomaticError::EmptyAutomaton);
        }
        if transitions.len() != outputs.len() {
            return Err(AutomaticError::Malformed(format!(
                "{} transition rows for {} states",
                transitions.len(),
                outputs.len()
            )));
        }
        if initial >= outputs.len() {
            return Err(AutomaticError::Malformed(format!("initial state {initial} out of range")));
        }
        for (state, row) in transitions.iter().enumerate() {
            if row.len() != base as usize {
                return Err(AutomaticError::Malformed(format!(
                    "state {state} has {} transitions, expected {base}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&t| t >= outputs.len()) {
                return Err(AutomaticError::Malformed(format!(
                    "state {state} transitions to missing state {bad}"
                )));
            }
        }
        for &symbol in &outputs {
            check_symbol(symbol)?;
        }
        Ok(RawAutomaton {
            base,
            initial,
            transitions,
            outputs,
        })
    }

    fn into_dfao(self) -> Dfao {
        Dfao {
            base: self.base,
            initial: self.initial,
            transitions: self.transitions,
            outputs: self.outputs,
        }
    }

    /// Keeps only states reachable from the initial state, numbered in
    /// breadth-first order (initial state first, digits ascending).
    fn trimmed(&self) -> Self {
        let mut index = vec![usize::MAX; self.outputs.len()];
        let mut order = vec![self.initial];
        index[self.initial] = 0;
        let mut head = 0;
        while head < order.len() {
            let q = order[head];
            head += 1;
            for &t in &self.transitions[q] {
                if index[t] == usize::MAX {
                    index[t] = order.len();
                    order.push(t);
                }
            }
        }
        RawAutomaton {
            base: self.base,
            initial: 0,
            transitions: order
                .iter()
                .map(|&q| self.transitions[q].iter().map(|&t| index[t]).collect())
                .collect(),
            outputs: order.iter().map(|&q| self.outputs[q]).collect(),
        }
    }

    /// Moore partition refinement; returns a class id per state.
    fn equivalence_classes(&self) -> Vec<usize> {
        let mut classes = renumber(self.outputs.iter().map(|&o| vec![o as usize]));
        loop {
            let refined = renumber((0..self.outputs.len()).map(|q| {
                let mut signature = Vec::with_capacity(self.base as usize + 1);
                signature.push(classes[q]);
                signature.extend(self.transitions[q].iter().map(|&t| classes[t]));
                signature
            }));
            let before = classes.iter().max().copied().unwrap_or(0);
            let after = refined.iter().max().copied().unwrap_or(0);
            classes = refined;
            if before == after {
                return classes;
            }
        }
    }

    fn quotient(&self, classes: &[usize]) -> Self {
        let count = classes.iter().max().map_or(0, |m| m + 1);
        let mut transitions = vec![Vec::new(); count];
        let mut outputs = vec![0; count];
        for (q, &class) in classes.iter().enumerate() {
            if transitions[class].is_empty() {
                transitions[class] = self.transitions[q].iter().map(|&t| classes[t]).collect();
                outputs[class] = self.outputs[q];
            }
        }
        RawAutomaton {
            base: self.base,
            initial: classes[self.initial],
            transitions,
            outputs,
        }
    }

    fn minimized(&self) -> Self {
        self.quotient(&self.equivalence_classes())
    }

    /// Automaton reading digits in the opposite order. Its states are the
    /// maps `q ↦ δ*(q, w)` for the reversed input read so far.
    fn reversed(&self) -> Self {
        let n = self.outputs.len();
        let identity: Vec<usize> = (0..n).collect();
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut maps = vec![identity.clone()];
        index.insert(identity, 0);
        let mut transitions: Vec<Vec<usize>> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(id) = queue.pop_front() {
            let mut row = Vec::with_capacity(self.base as usize);
            for digit in 0..self.base as usize {
                let map: Vec<usize> = (0..n)
                    .map(|q| maps[id][self.transitions[q][digit]])
                    .collect();
                let next = match index.get(&map) {
                    Some(&existing) => existing,
                    None => {
                        let fresh = maps.len();
                        index.insert(map.clone(), fresh);
                        maps.push(map);
                        queue.push_back(fresh);
                        fresh
                    }
                };
                row.push(next);
            }
            if transitions.len() <= id {
                transitions.resize(id + 1, Vec::new());
            }
            transitions[id] = row;
        }
        let outputs = maps.iter().map(|m| self.outputs[m[self.initial]]).collect();
        RawAutomaton {
            base: self.base,
            initial: 0,
            transitions,
            outputs,
        }
    }
}

/// Dense ids for a sequence of signatures, in order of first appearance.
fn renumber(signatures: impl Iterator<Item = Vec<usize>>) -> Vec<usize> {
    let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
    signatures
        .map(|sig| {
            let next = ids.len();
            *ids.entry(sig).or_insert(next)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn thue_morse() -> Dfao {
        Dfao::new(2, 0, vec![vec![0, 1], vec![1, 0]], b"01".to_vec()).unwrap()
    }

    /// Characteristic sequence of the powers of 2, read most significant
    /// digit first: none seen / exactly one 1 / more than one 1.
    fn powers_of_two() -> Dfao {
        Dfao::from_msd(
            2,
            0,
            vec![vec![0, 1], vec![1, 2], vec![2, 2]],
            b"010".to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn thue_morse_prefix() {
        assert_eq!(thue_morse().prefix(8), b"01101001");
    }

    #[test]
    fn powers_of_two_values() {
        let d = powers_of_two();
        for n in [1, 2, 4, 8, 1024] {
            assert_eq!(d.evaluate(n), b'1', "n = {n}");
        }
        for n in [0, 3, 5, 6, 7, 1023] {
            assert_eq!(d.evaluate(n), b'0', "n = {n}");
        }
    }

    #[test]
    fn zero_index_reads_empty_string() {
        let d = thue_morse();
        assert_eq!(d.evaluate(0), d.output(d.initial()));
        assert_eq!(d.evaluate_digits(&[0, 0, 0]), d.evaluate(0));
    }

    #[test]
    fn rejects_malformed_tables() {
        assert_eq!(
            Dfao::new(1, 0, vec![vec![0]], b"0".to_vec()),
            Err(AutomaticError::InvalidBase(1))
        );
        assert!(matches!(
            Dfao::new(2, 0, vec![vec![0]], b"0".to_vec()),
            Err(AutomaticError::Malformed(_))
        ));
        assert!(matches!(
            Dfao::new(2, 0, vec![vec![0, 3]], b"0".to_vec()),
            Err(AutomaticError::Malformed(_))
        ));
        assert_eq!(
            Dfao::new(2, 0, vec![], vec![]),
            Err(AutomaticError::EmptyAutomaton)
        );
    }

    #[test]
    fn rejects_zero_sensitive_lsd_automaton() {
        // output flips on every digit, including padding zeros
        assert_eq!(
            Dfao::new(2, 0, vec![vec![1, 1], vec![0, 0]], b"01".to_vec()),
            Err(AutomaticError::NotZeroRobust { state: 0 })
        );
    }

    #[test]
    fn trims_unreachable_states() {
        let d = Dfao::new(
            2,
            1,
            vec![vec![0, 0], vec![1, 2], vec![2, 1]],
            b"x01".to_vec(),
        )
        .unwrap();
        assert_eq!(d.num_states(), 2);
        assert_eq!(d.prefix(8), b"01101001");
    }

    #[test]
    fn minimize_merges_duplicate_states() {
        // Thue-Morse with the "even" state duplicated
        let d = Dfao::new(
            2,
            0,
            vec![vec![2, 1], vec![1, 2], vec![0, 1]],
            b"010".to_vec(),
        )
        .unwrap();
        let (m, classes) = d.minimize();
        assert_eq!(m.num_states(), 2);
        // trimming numbers states breadth-first: old state 2 becomes state 1
        assert_eq!(classes[0], classes[1]);
        assert_ne!(classes[0], classes[2]);
        assert_eq!(m.prefix(64), thue_morse().prefix(64));
    }

    #[test]
    fn msd_round_trip() {
        let d = powers_of_two();
        let (initial, transitions, outputs) = d.to_msd();
        assert_eq!(transitions[initial][0], initial);
        let back = Dfao::from_msd(2, initial, transitions, outputs).unwrap();
        assert_eq!(back.prefix(300), d.prefix(300));
    }

    #[test]
    fn serde_round_trip() {
        let d = powers_of_two();
        let json = serde_json::to_string(&d).unwrap();
        let back: Dfao = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);
    }
}
