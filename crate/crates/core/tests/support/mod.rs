//! Independent oracles shared by the integration tests. Nothing here calls the
//! production algorithms it is used to check.
#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use factorbound::automatic::{same_kernel_element, Dfao};
use factorbound::certifier::BoundCertificate;
use factorbound::exactnum::QuadraticIrrational;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn qi(s: &str) -> QuadraticIrrational {
    s.parse().unwrap()
}

// ---------------------------------------------------------------------------
// Fixed-point interval arithmetic

/// `[lo, hi] / 2^bits`, enclosing a real value.
#[derive(Clone, Debug)]
pub struct Interval {
    pub lo: BigInt,
    pub hi: BigInt,
    pub bits: u32,
}

impl Interval {
    /// Encloses `(a + b·√d)/c` from its raw fields, without using any of the
    /// crate's rounding routines.
    pub fn enclose(a: &BigInt, b: &BigInt, d: &BigInt, c: &BigInt, bits: u32) -> Self {
        let scale = BigInt::from(1) << bits;
        // ⌊|b|·√d·2^bits⌋ ≤ |b|·√d·2^bits < that + 1
        let s = (b * b * d * &scale * &scale).sqrt();
        let (surd_lo, surd_hi) = if b.is_negative() {
            (-&s - 1, -s)
        } else if b.is_zero() || d.is_zero() {
            (BigInt::zero(), BigInt::zero())
        } else {
            (s.clone(), s + 1)
        };
        let base = a * &scale;
        let (mut lo, mut hi) = (base.clone() + surd_lo, base + surd_hi);
        if c.is_negative() {
            std::mem::swap(&mut lo, &mut hi);
        }
        Interval {
            lo: lo.div_floor(c),
            hi: hi.div_ceil(c),
            bits,
        }
    }

    pub fn of(x: &QuadraticIrrational, bits: u32) -> Self {
        Self::enclose(x.rational_part(), x.surd_coefficient(), x.radicand(), x.denominator(), bits)
    }

    /// Floor of the enclosed value when the interval does not straddle an integer.
    pub fn floor(&self) -> Option<BigInt> {
        let scale = BigInt::from(1) << self.bits;
        let a = self.lo.div_floor(&scale);
        let b = self.hi.div_floor(&scale);
        (a == b).then_some(a)
    }

    /// Ordering of two enclosed values when the intervals are disjoint.
    pub fn cmp(&self, other: &Interval) -> Option<Ordering> {
        assert_eq!(self.bits, other.bits);
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if other.hi < self.lo {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        let mid: BigInt = (&self.lo + &self.hi) / 2;
        let shift = self.bits.saturating_sub(52);
        let m: BigInt = mid >> shift;
        let m: f64 = m.to_string().parse().unwrap();
        m / 2f64.powi((self.bits - shift) as i32)
    }
}

// ---------------------------------------------------------------------------
// Random quadratic irrationals

pub const SQUAREFREE: [i64; 12] = [2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19];

pub fn random_qi(rng: &mut impl rand::Rng) -> QuadraticIrrational {
    let d = SQUAREFREE[rng.gen_range(0..SQUAREFREE.len())];
    let b = loop {
        let b: i64 = rng.gen_range(-40..=40);
        if b != 0 {
            break b;
        }
    };
    QuadraticIrrational::new(
        BigInt::from(rng.gen_range(-500i64..=500)),
        BigInt::from(b),
        BigInt::from(d),
        BigInt::from(rng.gen_range(1i64..=150)),
    )
    .unwrap()
}

/// A random irrational in (0, 1).
pub fn random_unit_qi(rng: &mut impl rand::Rng) -> QuadraticIrrational {
    random_qi(rng).frac()
}

// ---------------------------------------------------------------------------
// Sequences by definition

/// Iterates a uniform morphism on strings until the prefix is long enough.
pub fn iterate_morphism(images: &[(char, &str)], seed: char, coding: &[(char, char)], len: usize) -> String {
    let map: BTreeMap<char, &str> = images.iter().copied().collect();
    let code: BTreeMap<char, char> = coding.iter().copied().collect();
    let mut w = seed.to_string();
    while w.len() < len {
        w = w.chars().map(|c| map[&c]).collect();
    }
    w.chars().take(len).map(|c| *code.get(&c).unwrap_or(&c)).collect()
}

pub fn thue_morse(len: usize) -> String {
    iterate_morphism(&[('0', "01"), ('1', "10")], '0', &[], len)
}

pub fn rudin_shapiro(len: usize) -> String {
    iterate_morphism(
        &[('a', "ab"), ('b', "ac"), ('c', "db"), ('d', "dc")],
        'a',
        &[('a', '0'), ('b', '0'), ('c', '1'), ('d', '1')],
        len,
    )
}

pub fn period_doubling(len: usize) -> String {
    iterate_morphism(&[('0', "01"), ('1', "00")], '0', &[], len)
}

pub fn powers_of_two(len: usize) -> String {
    (0..len)
        .map(|n| if n > 0 && n & (n - 1) == 0 { '1' } else { '0' })
        .collect()
}

pub fn constant(len: usize) -> String {
    "0".repeat(len)
}

/// Fixed point of 0 → 01, 1 → 0.
pub fn fibonacci_word(len: usize) -> String {
    let mut w = "0".to_string();
    while w.len() < len {
        w = w.chars().map(|c| if c == '0' { "01" } else { "0" }).collect();
    }
    w.truncate(len);
    w
}

/// Builds the first `n` letters of a sequence from its definition.
pub type Oracle = fn(usize) -> String;

/// Fixture file and defining oracle.
pub const AUTOMATIC_FIXTURES: [(&str, Oracle); 5] = [
    ("thue-morse.mor", thue_morse),
    ("rudin-shapiro.mor", rudin_shapiro),
    ("period-doubling.mor", period_doubling),
    ("powers-of-2.dfao", powers_of_two),
    ("constant.mor", constant),
];

pub const STURMIAN_FIXTURES: [&str; 3] = ["fibonacci.sturmian", "silver.sturmian", "sqrt3.sturmian"];

pub fn load_definition(name: &str) -> factorbound::automatic::Definition {
    factorbound::automatic::parse_definition(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

pub fn load_sturmian(name: &str) -> factorbound::sturmian::SturmianSpec {
    std::fs::read_to_string(fixture(name)).unwrap().trim().parse().unwrap()
}

/// Mechanical word by interval evaluation of `⌊(n+2)α+β⌋ − ⌊(n+1)α+β⌋`.
pub fn mechanical_by_intervals(alpha: &QuadraticIrrational, beta: &QuadraticIrrational, len: usize) -> String {
    let floor_at = |m: i64| {
        let x = alpha.mul_int(&BigInt::from(m)).try_add(beta).unwrap();
        Interval::of(&x, 128).floor().expect("non-straddling at 128 bits")
    };
    let mut prev = floor_at(1);
    (0..len)
        .map(|n| {
            let next = floor_at(n as i64 + 2);
            let bit = &next - &prev;
            prev = next;
            if bit.is_zero() { '0' } else { '1' }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Words

pub fn factors_by_scan(word: &[u8], n: usize) -> BTreeSet<Vec<u8>> {
    if n == 0 {
        return BTreeSet::from([Vec::new()]);
    }
    word.windows(n).map(<[u8]>::to_vec).collect()
}

/// Quadratic longest common substring, least `i` then least `j` on ties.
pub fn lcf_brute(x: &[u8], a: &[u8]) -> (usize, usize, usize) {
    let mut best = (0, 0, 0);
    let mut prev = vec![0usize; a.len() + 1];
    let mut cur = vec![0usize; a.len() + 1];
    // run[i][j] = length of common block ending at x[i-1], a[j-1]
    let mut found: Vec<(usize, usize, usize)> = Vec::new();
    for i in 1..=x.len() {
        for j in 1..=a.len() {
            cur[j] = if x[i - 1] == a[j - 1] { prev[j - 1] + 1 } else { 0 };
            if cur[j] > best.0 {
                best = (cur[j], 0, 0);
                found.clear();
            }
            if cur[j] == best.0 && best.0 > 0 {
                found.push((cur[j], i - cur[j], j - cur[j]));
            }
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    found.into_iter().min_by_key(|&(_, i, j)| (i, j)).unwrap_or((0, 0, 0))
}

// ---------------------------------------------------------------------------
// Kernels

/// Number of distinct kernel subsequences `n ↦ x[n·k^r + s]`, `r ≤ max_r`,
/// compared on the prefix available in `x`.
pub fn kernel_by_prefix(x: &[u8], k: usize, max_r: u32, compare: usize) -> (usize, BTreeMap<(u32, usize), usize>) {
    let mut seen: Vec<Vec<u8>> = Vec::new();
    let mut class = BTreeMap::new();
    for r in 0..=max_r {
        let m = k.pow(r);
        for s in 0..m {
            let sub: Vec<u8> = (0..compare).map(|n| x[n * m + s]).collect();
            let id = match seen.iter().position(|t| *t == sub) {
                Some(id) => id,
                None => {
                    seen.push(sub);
                    seen.len() - 1
                }
            };
            class.insert((r, s), id);
        }
    }
    (seen.len(), class)
}

// ---------------------------------------------------------------------------
// Gaps

/// Gap multiset of `{n·θ}`, `0 ≤ n < m`: points are ordered by interval
/// enclosures and the differences then taken exactly.
pub fn gaps_by_sort(theta: &QuadraticIrrational, m: u64) -> Vec<(QuadraticIrrational, u64)> {
    let points: Vec<QuadraticIrrational> = (0..m)
        .map(|n| theta.mul_int(&BigInt::from(n)).frac())
        .collect();
    let mut keyed: Vec<(Interval, usize)> = points
        .iter()
        .enumerate()
        .map(|(i, p)| (Interval::of(p, 256), i))
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0).expect("distinct points separate at 256 bits"));
    let order: Vec<&QuadraticIrrational> = keyed.iter().map(|(_, i)| &points[*i]).collect();
    let mut gaps: Vec<QuadraticIrrational> = order.windows(2).map(|w| w[1] - w[0]).collect();
    gaps.push((order[0] - order[order.len() - 1]).add_int(&BigInt::from(1)));
    let mut keyed_gaps: Vec<(Interval, QuadraticIrrational)> =
        gaps.into_iter().map(|g| (Interval::of(&g, 256), g)).collect();
    keyed_gaps.sort_by(|a, b| a.0.cmp(&b.0).unwrap_or(Ordering::Equal));
    let mut out: Vec<(QuadraticIrrational, u64)> = Vec::new();
    for (_, g) in keyed_gaps {
        match out.iter_mut().find(|(h, _)| *h == g) {
            Some(entry) => entry.1 += 1,
            None => out.push((g, 1)),
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Certificate mutations

/// The five single-field mutations plus `r − 1`, each with the step that must reject it.
pub fn mutations(cert: &BoundCertificate, dfao: &Dfao) -> Vec<(&'static str, BoundCertificate)> {
    let mut out = Vec::new();

    let mut c = cert.clone();
    c.q += 1;
    out.push(("kernel", c));

    let mut c = cert.clone();
    c.r -= 1;
    out.push(("exponent", c));

    let modulus = cert.k.pow(cert.r);
    let distinct = (0..modulus)
        .flat_map(|a| (a + 1..modulus).map(move |b| (a, b)))
        .find(|&(a, b)| !same_kernel_element(dfao, cert.r, a, b));
    let mut c = cert.clone();
    match distinct {
        Some((a, b)) => {
            (c.s1, c.s2, c.delta) = (a, b, b - a);
        }
        // every residue collides (constant sequence): fall back to a reversed pair
        None => (c.s1, c.s2) = (cert.s2, cert.s1),
    }
    out.push(("collision", c));

    let mut c = cert.clone();
    c.epsilon = c.epsilon.mul_int(&BigInt::from(2));
    out.push(("epsilon", c));

    let mut c = cert.clone();
    c.m -= 1;
    out.push(("window", c));

    let mut c = cert.clone();
    c.c -= modulus as u128;
    out.push(("bound", c));

    out
}
