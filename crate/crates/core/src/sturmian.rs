//! Sturmian words, computed exactly from floors of quadratic irrationals.
//!
//! Indexing: the word is `a = a₀a₁a₂⋯` with
//!
//! ```text
//! a_m = ⌊(m+2)α + β⌋ − ⌊(m+1)α + β⌋        (m ≥ 0)
//! ```
//!
//! so `a_m` is the first difference of `⌊nα + β⌋` at `n = m + 1`, i.e.
//! [`mechanical_bit`]`(spec, m + 1)`. For `β = 0` this is the characteristic
//! word; `a_m = 1` iff `{(m+2)α} < α`. With `α = (3 − √5)/2` it starts
//! `01001010…`, the Fibonacci word.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::automatic::FactorSet;
use crate::exactnum::{ExactError, QuadraticIrrational};
use crate::words::Word;

/// Default number of symbols scanned by [`factor_set`] before giving up.
pub const DEFAULT_PREFIX_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SturmianError {
    #[error("alpha {0} is rational")]
    RationalAlpha(String),
    #[error("alpha {0} is not in (0, 1)")]
    AlphaOutOfRange(String),
    #[error("beta {0} is not in [0, 1)")]
    BetaOutOfRange(String),
    #[error("cannot parse Sturmian spec `{0}`: expected `alpha=<number> [beta=<number>]`")]
    Parse(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Slope and intercept of a mechanical word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SturmianSpec {
    alpha: QuadraticIrrational,
    beta: QuadraticIrrational,
}

impl SturmianSpec {
    pub fn new(alpha: QuadraticIrrational, beta: QuadraticIrrational) -> Result<Self, SturmianError> {
        check_alpha(&alpha)?;
        let zero = QuadraticIrrational::zero();
        let one = QuadraticIrrational::one();
        if beta.compare(&zero)? == Ordering::Less || beta.compare(&one)? != Ordering::Less {
            return Err(SturmianError::BetaOutOfRange(beta.to_string()));
        }
        // β must share α's field so that nα + β stays representable
        alpha.try_add(&beta)?;
        Ok(Self { alpha, beta })
    }

    /// The characteristic word of slope `alpha` (`β = 0`).
    pub fn characteristic(alpha: QuadraticIrrational) -> Result<Self, SturmianError> {
        Self::new(alpha, QuadraticIrrational::zero())
    }

    pub fn alpha(&self) -> &QuadraticIrrational {
        &self.alpha
    }

    pub fn beta(&self) -> &QuadraticIrrational {
        &self.beta
    }

    pub fn is_characteristic(&self) -> bool {
        self.beta.is_zero()
    }

    /// `⌊nα + β⌋`.
    fn floor_at(&self, n: &BigInt) -> BigInt {
        (&self.alpha.mul_int(n) + &self.beta).floor()
    }

    /// Symbols `a_0 a_1 ⋯` as `b'0'`/`b'1'`.
    pub fn bits(&self) -> Bits<'_> {
        let frac = (&self.alpha + &self.beta).frac();
        Bits { spec: self, frac }
    }
}

fn check_alpha(alpha: &QuadraticIrrational) -> Result<(), SturmianError> {
    if alpha.is_rational() {
        return Err(SturmianError::RationalAlpha(alpha.to_string()));
    }
    if alpha.signum() != Ordering::Greater || alpha.compare(&QuadraticIrrational::one())? != Ordering::Less {
        return Err(SturmianError::AlphaOutOfRange(alpha.to_string()));
    }
    Ok(())
}

impl fmt::Display for SturmianSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alpha={} beta={}", self.alpha, self.beta)
    }
}

impl FromStr for SturmianSpec {
    type Err = SturmianError;

    /// `alpha=<number> [beta=<number>]`, numbers in the `(a+b*sqrt(d))/c`
    /// form; `beta` defaults to 0.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SturmianError::Parse(s.to_string());
        let mut alpha = None;
        let mut beta = None;
        let mut rest = s.trim();
        while !rest.is_empty() {
            let (key, tail) = rest.split_once('=').ok_or_else(bad)?;
            let tail = tail.trim_start();
            // a value ends where the next `key=` begins
            let end = ["alpha=", "beta="]
                .iter()
                .filter_map(|k| tail.find(k))
                .min()
                .unwrap_or(tail.len());
            let value: QuadraticIrrational = tail[..end].trim().parse()?;
            match key.trim() {
                "alpha" if alpha.is_none() => alpha = Some(value),
                "beta" if beta.is_none() => beta = Some(value),
                _ => return Err(bad()),
            }
            rest = tail[end..].trim_start();
        }
        Self::new(
            alpha.ok_or_else(bad)?,
            beta.unwrap_or_else(QuadraticIrrational::zero),
        )
    }
}

impl Serialize for SturmianSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SturmianSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Incremental generator: keeps `{(m+1)α + β}` and emits `1` exactly when
/// adding `α` crosses an integer.
#[derive(Clone, Debug)]
pub struct Bits<'a> {
    spec: &'a SturmianSpec,
    frac: QuadraticIrrational,
}

impl Iterator for Bits<'_> {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        let moved = &self.frac + &self.spec.alpha;
        let one = BigInt::from(1);
        let shifted = moved.add_int(&-&one);
        if shifted.signum() == Ordering::Less {
            self.frac = moved;
            Some(b'0')
        } else {
            self.frac = shifted;
            Some(b'1')
        }
    }
}

/// Bit `a_n` (0 or 1) of the characteristic word of slope `alpha`, computed
/// as `⌊(n+2)α⌋ − ⌊(n+1)α⌋`.
pub fn characteristic_bit(alpha: &QuadraticIrrational, n: u64) -> Result<u8, SturmianError> {
    check_alpha(alpha)?;
    let upper = alpha.mul_int(&BigInt::from(n + 2)).floor();
    let lower = alpha.mul_int(&BigInt::from(n + 1)).floor();
    Ok(small_bit(upper - lower))
}

/// First difference `⌊(n+1)α + β⌋ − ⌊nα + β⌋` of the mechanical sequence;
/// the word symbol `a_m` is `mechanical_bit(spec, m + 1)`.
pub fn mechanical_bit(spec: &SturmianSpec, n: u64) -> u8 {
    let n = BigInt::from(n);
    small_bit(spec.floor_at(&(&n + 1)) - spec.floor_at(&n))
}

fn small_bit(diff: BigInt) -> u8 {
    let bit = diff.to_u8().expect("floor difference is 0 or 1 for 0 < α < 1");
    debug_assert!(bit <= 1);
    bit
}

/// First `len` symbols of the word, as `b'0'`/`b'1'`.
pub fn prefix(spec: &SturmianSpec, len: usize) -> Word {
    spec.bits().take(len).collect()
}

/// Number of 1s among the first `len` symbols, by telescoping:
/// `⌊(len+1)α + β⌋ − ⌊α + β⌋`.
pub fn ones_count(spec: &SturmianSpec, len: u64) -> BigInt {
    spec.floor_at(&BigInt::from(len + 1)) - spec.floor_at(&BigInt::from(1))
}

/// `ones_count(len) − len·α`, exactly.
pub fn ones_excess(spec: &SturmianSpec, len: u64) -> QuadraticIrrational {
    let count = QuadraticIrrational::from_integer(ones_count(spec, len));
    &count - &spec.alpha.mul_int(&BigInt::from(len))
}

/// Length-`n` factors, certified by the complexity count: a Sturmian word has
/// exactly `n + 1` factors of length `n`, so the scan stops as soon as that
/// many have been seen.
pub fn factor_set(spec: &SturmianSpec, n: usize) -> FactorSet {
    factor_set_with_cap(spec, n, DEFAULT_PREFIX_CAP)
}

pub fn factor_set_with_cap(spec: &SturmianSpec, n: usize, prefix_cap: usize) -> FactorSet {
    if n == 0 {
        return FactorSet {
            length: 0,
            factors: [Word::new()].into(),
            certified: true,
            provenance: "empty word".into(),
        };
    }
    let mut seen: HashSet<Word> = HashSet::new();
    let mut window: Word = Vec::with_capacity(n);
    let mut scanned = 0usize;
    for bit in spec.bits().take(prefix_cap) {
        scanned += 1;
        if window.len() == n {
            window.remove(0);
        }
        window.push(bit);
        if window.len() == n && !seen.contains(&window) {
            seen.insert(window.clone());
            if seen.len() == n + 1 {
                break;
            }
        }
    }
    let certified = seen.len() == n + 1;
    let provenance = if certified {
        format!("all {} factors found in a length-{scanned} prefix (complexity n+1)", n + 1)
    } else {
        format!("only {} of {} factors in a length-{scanned} prefix", seen.len(), n + 1)
    };
    FactorSet {
        length: n,
        factors: seen.into_iter().collect(),
        certified,
        provenance,
    }
}
