use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{AutomaticError, Dfao};

/// Number of `(r, s)` assignments recorded in a report before recording stops.
/// The class partition itself is always complete.
pub const RECORDED_ENTRY_LIMIT: usize = 4096;

/// Largest `k^r` that [`colliding_pair`] will scan.
pub const MAX_RESIDUE_SCAN: u64 = 1 << 32;

/// One kernel element, identified by its lexicographically least `(r, s)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelClass {
    pub id: usize,
    pub r: u32,
    pub s: u64,
    /// Automaton generating `n ↦ x_{n·k^r + s}`.
    pub witness: Dfao,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelEntry {
    pub r: u32,
    pub s: u64,
    pub class: usize,
}

/// The k-kernel `{(x_{n·k^r+s})_n : r ≥ 0, 0 ≤ s < k^r}` partitioned into
/// distinct sequences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelReport {
    #[serde(rename = "Q")]
    pub q: usize,
    /// Least `r` at which exploration stopped producing new classes.
    pub closure_depth: u32,
    pub classes: Vec<KernelClass>,
    /// Class of every explored `(r, s)`, in order of `r` then `s`, truncated
    /// at [`RECORDED_ENTRY_LIMIT`].
    pub class_of: Vec<KernelEntry>,
    pub truncated: bool,
}

impl KernelReport {
    pub fn class_of(&self, r: u32, s: u64) -> Option<usize> {
        self.class_of
            .iter()
            .find(|e| e.r == r && e.s == s)
            .map(|e| e.class)
    }
}

/// Kernel-element equality is Moore equivalence of the state reached after
/// reading the `r` low digits of `s`; both sides are decided on the minimal
/// automaton.
pub fn kernel(dfao: &Dfao) -> KernelReport {
    let (minimal, state_class) = dfao.minimize();
    let k = dfao.base() as u64;
    // class ids in order of first discovery, keyed by minimal state
    let mut id_of_state = vec![usize::MAX; minimal.num_states()];
    let mut classes = Vec::new();
    let mut class_of = Vec::new();
    let mut truncated = false;

    let start = state_class[dfao.initial()];
    let mut level: Vec<(u64, usize)> = vec![(0, start)];
    let mut level_states: BTreeSet<usize> = BTreeSet::from([start]);
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    let mut r = 0u32;
    let mut stride = 1u64;
    loop {
        let mut fresh = false;
        for &q in &level_states {
            fresh |= seen.insert(q);
        }
        for &(s, q) in &level {
            if id_of_state[q] == usize::MAX {
                id_of_state[q] = classes.len();
                classes.push(KernelClass {
                    id: classes.len(),
                    r,
                    s,
                    witness: minimal.restarted(q),
                });
            }
            if class_of.len() < RECORDED_ENTRY_LIMIT {
                class_of.push(KernelEntry { r, s, class: id_of_state[q] });
            } else {
                truncated = true;
            }
        }
        if !fresh {
            break;
        }
        // children of (r, s) are (r + 1, s + c·k^r), reached by reading c
        let next_states: BTreeSet<usize> = level_states
            .iter()
            .flat_map(|&q| (0..dfao.base()).map(move |c| (q, c)))
            .map(|(q, c)| minimal.next(q, c))
            .collect();
        let next_stride = stride.checked_mul(k);
        level = match next_stride {
            Some(_) if level.len() as u64 * k <= RECORDED_ENTRY_LIMIT as u64 => (0..k)
                .flat_map(|c| level.iter().map(move |&(s, q)| (s + c * stride, q, c)))
                .map(|(s, q, c)| (s, minimal.next(q, c as u32)))
                .collect::<Vec<_>>(),
            _ => Vec::new(),
        };
        level.sort_unstable();
        if level.is_empty() {
            // too many residues to list; classes first met here still need a
            // witness, found by a direct search
            for &q in &next_states {
                if id_of_state[q] == usize::MAX {
                    let s = least_residue_reaching(&minimal, r + 1, q)
                        .expect("state is reachable at this depth");
                    id_of_state[q] = classes.len();
                    classes.push(KernelClass {
                        id: classes.len(),
                        r: r + 1,
                        s,
                        witness: minimal.restarted(q),
                    });
                }
            }
            truncated = true;
        }
        level_states = next_states;
        stride = next_stride.unwrap_or(u64::MAX);
        r += 1;
    }
    debug_assert_eq!(seen.len(), minimal.num_states());
    KernelReport {
        q: seen.len(),
        closure_depth: r,
        classes,
        class_of,
        truncated,
    }
}

/// Least `s < k^width` whose padded low digits drive `dfao` from its initial
/// state to `target`. Digits are chosen from the most significant position
/// down, so the first feasible choice at each position gives the least `s`.
fn least_residue_reaching(dfao: &Dfao, width: u32, target: usize) -> Option<u64> {
    let n = dfao.num_states();
    let mut forward = vec![vec![false; n]; width as usize + 1];
    forward[0][dfao.initial()] = true;
    for j in 0..width as usize {
        for q in 0..n {
            if forward[j][q] {
                for c in 0..dfao.base() {
                    forward[j + 1][dfao.next(q, c)] = true;
                }
            }
        }
    }
    if !forward[width as usize][target] {
        return None;
    }
    // choose digits from the top: position j (0 = least significant) is read
    // at step j; we need a state p at step j with forward[j][p], reading c
    // moves to a state that reaches target in width - j - 1 steps
    let k = dfao.base() as u64;
    let mut s = 0u64;
    let mut wanted: BTreeSet<usize> = BTreeSet::from([target]);
    for j in (0..width as usize).rev() {
        // states at step j that can finish into `wanted` with one digit c
        let mut best: Option<(u32, BTreeSet<usize>)> = None;
        for c in 0..dfao.base() {
            let prev: BTreeSet<usize> = (0..n)
                .filter(|&p| forward[j][p] && wanted.contains(&dfao.next(p, c)))
                .collect();
            if !prev.is_empty() {
                best = Some((c, prev));
                break;
            }
        }
        let (c, prev) = best?;
        s += c as u64 * k.pow(j as u32);
        wanted = prev;
    }
    Some(s)
}

/// Lexicographically least `(s₁, s₂)` with `s₁ < s₂ < k^r` and equal kernel
/// sequences `(x_{n·k^r+s₁})_n = (x_{n·k^r+s₂})_n`. Requires `k^r > Q`.
pub fn colliding_pair(dfao: &Dfao, r: u32) -> Result<(u64, u64), AutomaticError> {
    let (minimal, state_class) = dfao.minimize();
    let q = minimal.num_states() as u64;
    let modulus = (dfao.base() as u64)
        .checked_pow(r)
        .filter(|&m| m <= MAX_RESIDUE_SCAN)
        .ok_or(AutomaticError::TooLarge { base: dfao.base(), r })?;
    if modulus <= q {
        return Err(AutomaticError::KernelPrecondition { modulus, q });
    }
    let start = state_class[dfao.initial()];
    let mut first_seen = vec![None; minimal.num_states()];
    let mut best: Option<(u64, u64)> = None;
    for s in 0..modulus {
        let state = minimal.run(start, super::dfao::lsd_digits_padded(s, dfao.base(), r));
        match first_seen[state] {
            None => first_seen[state] = Some(s),
            Some(s1) => {
                if best.is_none_or(|(b1, _)| s1 < b1) {
                    best = Some((s1, s));
                }
            }
        }
    }
    best.ok_or(AutomaticError::NoCollision { r })
}

/// Whether the kernel sequences for `(r, s1)` and `(r, s2)` coincide.
pub fn same_kernel_element(dfao: &Dfao, r: u32, s1: u64, s2: u64) -> bool {
    let (minimal, state_class) = dfao.minimize();
    let start = state_class[dfao.initial()];
    let a = minimal.run(start, super::dfao::lsd_digits_padded(s1, dfao.base(), r));
    let b = minimal.run(start, super::dfao::lsd_digits_padded(s2, dfao.base(), r));
    a == b
}
