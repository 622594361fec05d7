use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ExactError;

/// Largest prime candidate tried when pulling square factors out of a radicand.
/// Radicands whose square part has a prime factor above this bound are kept
/// as given unless the remaining cofactor is itself a perfect square.
const SQUARE_FACTOR_SEARCH_LIMIT: u32 = 1 << 16;

/// An exact real number `(a + b·√d) / c`.
///
/// Normalized form: `c > 0`, `gcd(a, b, c) = 1`, square factors pulled out of
/// `d`, and rationals stored with `b = d = 0`. Normalized values are equal iff
/// their fields are equal, so the derived `PartialEq`/`Hash` are value
/// equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticIrrational {
    a: BigInt,
    b: BigInt,
    d: BigInt,
    c: BigInt,
}

impl QuadraticIrrational {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        d: impl Into<BigInt>,
        c: impl Into<BigInt>,
    ) -> Result<Self, ExactError> {
        let (a, mut b, d, c) = (a.into(), b.into(), d.into(), c.into());
        if c.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        if d.is_negative() {
            return Err(ExactError::NegativeRadicand(d));
        }
        let (square, rest) = split_square_factor(&d);
        b *= square;
        Ok(Self::from_reduced(a, b, rest, c))
    }

    /// Builds from parts whose radicand already has its square factors removed
    /// (or is the radicand of an existing normalized value).
    fn from_reduced(mut a: BigInt, mut b: BigInt, mut d: BigInt, mut c: BigInt) -> Self {
        debug_assert!(!c.is_zero());
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        if d.is_one() {
            a += &b;
            b = BigInt::zero();
        }
        if b.is_zero() || d.is_zero() {
            b = BigInt::zero();
            d = BigInt::zero();
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        Self { a, b, d, c }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self {
            a: n.into(),
            b: BigInt::zero(),
            d: BigInt::zero(),
            c: BigInt::one(),
        }
    }

    pub fn rational(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self, ExactError> {
        Self::new(p, 0, 0, q)
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    /// `√d`.
    pub fn sqrt(d: impl Into<BigInt>) -> Result<Self, ExactError> {
        Self::new(0, 1, d, 1)
    }

    pub fn rational_part(&self) -> &BigInt {
        &self.a
    }

    pub fn surd_coefficient(&self) -> &BigInt {
        &self.b
    }

    /// The radicand `d`; `0` for rationals.
    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn denominator(&self) -> &BigInt {
        &self.c
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_irrational(&self) -> bool {
        !self.is_rational()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.c.is_one()
    }

    fn common_radicand(&self, other: &Self) -> Option<BigInt> {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => Some(other.d.clone()),
            (_, true) => Some(self.d.clone()),
            _ if self.d == other.d => Some(self.d.clone()),
            _ => None,
        }
    }

    fn mismatch(&self, other: &Self) -> ExactError {
        ExactError::RadicandMismatch(self.d.clone(), other.d.clone())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ExactError> {
        let d = self.common_radicand(other).ok_or_else(|| self.mismatch(other))?;
        Ok(Self::from_reduced(
            &self.a * &other.c + &other.a * &self.c,
            &self.b * &other.c + &other.b * &self.c,
            d,
            &self.c * &other.c,
        ))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ExactError> {
        let d = self.common_radicand(other).ok_or_else(|| self.mismatch(other))?;
        Ok(Self::from_reduced(
            &self.a * &other.a + &self.b * &other.b * &d,
            &self.a * &other.b + &self.b * &other.a,
            d,
            &self.c * &other.c,
        ))
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        Self::from_reduced(&self.a * n, &self.b * n, self.d.clone(), self.c.clone())
    }

    pub fn add_int(&self, n: &BigInt) -> Self {
        Self::from_reduced(&self.a + n * &self.c, self.b.clone(), self.d.clone(), self.c.clone())
    }

    /// `1 / self`, via the conjugate: `c·(a − b√d) / (a² − b²d)`.
    pub fn recip(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let norm = &self.a * &self.a - &self.b * &self.b * &self.d;
        Ok(Self::from_reduced(
            &self.c * &self.a,
            -(&self.c * &self.b),
            self.d.clone(),
            norm,
        ))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, ExactError> {
        self.try_mul(&other.recip()?)
    }

    /// Sign of the value, decided with integer arithmetic only.
    pub fn signum(&self) -> Ordering {
        sign_of(&self.a, &self.b, &self.d)
    }

    /// `⌊b·√d⌋` as an exact integer.
    fn floor_surd(&self) -> BigInt {
        match self.b.sign_cmp() {
            Ordering::Equal => BigInt::zero(),
            Ordering::Greater => (&self.b * &self.b * &self.d).sqrt(),
            Ordering::Less => {
                let s = (&self.b * &self.b * &self.d).sqrt();
                // d is not a perfect square here, so b√d is never an integer
                -s - 1
            }
        }
    }

    pub fn floor(&self) -> BigInt {
        // ⌊(a + y)/c⌋ = ⌊(a + ⌊y⌋)/c⌋ for integer a and positive integer c
        (&self.a + self.floor_surd()).div_floor(&self.c)
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// `self − ⌊self⌋`, in `[0, 1)`.
    pub fn frac(&self) -> Self {
        self.add_int(&-self.floor())
    }

    /// Distance to the nearest integer, `min({q}, 1 − {q})`, in `[0, 1/2]`.
    pub fn dist_to_integers(&self) -> Self {
        let f = self.frac();
        let g = f.one_minus();
        if f.cmp_same_class(&g) == Ordering::Greater {
            g
        } else {
            f
        }
    }

    fn one_minus(&self) -> Self {
        (-self).add_int(&BigInt::one())
    }

    /// Comparison of two values sharing a radicand (or where one is rational).
    fn cmp_same_class(&self, other: &Self) -> Ordering {
        let d = self
            .common_radicand(other)
            .expect("cmp_same_class requires a shared radicand");
        // denominators are positive, so only the numerator's sign matters
        sign_of(
            &(&self.a * &other.c - &other.a * &self.c),
            &(&self.b * &other.c - &other.b * &self.c),
            &d,
        )
    }

    /// Exact three-way comparison.
    ///
    /// Values over different irrational radicands are compared by squaring with
    /// sign tracking, which decides `B√d₁ + C√d₂` but not `A + B√d₁ + C√d₂`
    /// with `A ≠ 0`; that case is reported as
    /// [`ExactError::IncomparableRepresentation`].
    pub fn compare(&self, other: &Self) -> Result<Ordering, ExactError> {
        if self.common_radicand(other).is_some() {
            return Ok(self.cmp_same_class(other));
        }
        let rational = &self.a * &other.c - &other.a * &self.c;
        if !rational.is_zero() {
            return Err(ExactError::IncomparableRepresentation(
                self.d.clone(),
                other.d.clone(),
            ));
        }
        let left = &self.b * &other.c;
        let right = -(&other.b * &self.c);
        let (sl, sr) = (left.sign_cmp(), right.sign_cmp());
        if sl == sr {
            return Ok(sl);
        }
        let l2 = &left * &left * &self.d;
        let r2 = &right * &right * &other.d;
        Ok(match l2.cmp(&r2) {
            Ordering::Greater => sl,
            Ordering::Less => sr,
            Ordering::Equal => Ordering::Equal,
        })
    }
}

/// Sign of `a + b·√d` for `d ≥ 0`.
fn sign_of(a: &BigInt, b: &BigInt, d: &BigInt) -> Ordering {
    let sa = a.sign_cmp();
    let sb = if d.is_zero() { Ordering::Equal } else { b.sign_cmp() };
    if sb == Ordering::Equal || sa == sb {
        return if sa == Ordering::Equal { sb } else { sa };
    }
    if sa == Ordering::Equal {
        return sb;
    }
    // opposite signs: the larger square wins
    match (a * a).cmp(&(b * b * d)) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

/// Splits `d = f²·rest`, pulling out every square of a prime below the search
/// limit and folding perfect squares completely.
fn split_square_factor(d: &BigInt) -> (BigInt, BigInt) {
    if d.is_zero() {
        return (BigInt::one(), BigInt::zero());
    }
    let mut rest = d.clone();
    let mut square = BigInt::one();
    let mut p: u32 = 2;
    while p <= SQUARE_FACTOR_SEARCH_LIMIT {
        let pp = BigInt::from(p) * p;
        if pp > rest {
            break;
        }
        while (&rest % &pp).is_zero() {
            rest /= &pp;
            square *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let root = rest.sqrt();
    if &root * &root == rest {
        square *= root;
        rest = BigInt::one();
    }
    (square, rest)
}

impl PartialOrd for QuadraticIrrational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.compare(other).ok()
    }
}

impl Neg for &QuadraticIrrational {
    type Output = QuadraticIrrational;

    fn neg(self) -> QuadraticIrrational {
        QuadraticIrrational {
            a: -&self.a,
            b: -&self.b,
            d: self.d.clone(),
            c: self.c.clone(),
        }
    }
}

impl Neg for QuadraticIrrational {
    type Output = QuadraticIrrational;

    fn neg(self) -> QuadraticIrrational {
        -&self
    }
}

// The operator impls panic on mixed radicands; use the `try_*` forms when the
// operands may come from different quadratic fields.
macro_rules! forward_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&QuadraticIrrational> for &QuadraticIrrational {
            type Output = QuadraticIrrational;

            fn $method(self, rhs: &QuadraticIrrational) -> QuadraticIrrational {
                self.$try(rhs).expect("radicand mismatch")
            }
        }

        impl $trait<QuadraticIrrational> for QuadraticIrrational {
            type Output = QuadraticIrrational;

            fn $method(self, rhs: QuadraticIrrational) -> QuadraticIrrational {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl fmt::Display for QuadraticIrrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.b.is_negative() { '-' } else { '+' };
        write!(
            f,
            "({}{}{}*sqrt({}))/{}",
            self.a,
            sign,
            self.b.abs(),
            self.d,
            self.c
        )
    }
}

impl FromStr for QuadraticIrrational {
    type Err = ExactError;

    /// Accepts the canonical `(a+b*sqrt(d))/c` form and the shorthands
    /// `a`, `p/q`, `sqrt(d)`, `b*sqrt(d)` and `a±b*sqrt(d)` with or without
    /// parentheses and denominator.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |reason: &str| ExactError::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        if compact.is_empty() {
            return Err(err("empty input"));
        }
        let (numer, denom) = split_denominator(&compact).ok_or_else(|| err("unbalanced parentheses"))?;
        let c = match denom {
            Some(text) => parse_int(text).ok_or_else(|| err("bad denominator"))?,
            None => BigInt::one(),
        };
        let (a, b, d) = parse_numerator(numer).ok_or_else(|| err("expected a+b*sqrt(d)"))?;
        Self::new(a, b, d, c)
    }
}

fn split_denominator(s: &str) -> Option<(&str, Option<&str>)> {
    if let Some(rest) = s.strip_prefix('(') {
        let mut depth = 1usize;
        for (i, ch) in rest.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        let inner = &rest[..i];
                        let tail = &rest[i + 1..];
                        return if tail.is_empty() {
                            Some((inner, None))
                        } else {
                            tail.strip_prefix('/').map(|den| (inner, Some(den)))
                        };
                    }
                }
                _ => {}
            }
        }
        return None;
    }
    // no outer parentheses: a trailing `/c` after the last `)` or anywhere in
    // a plain rational
    match s.rfind('/') {
        Some(pos) if !s[pos..].contains(')') => Some((&s[..pos], Some(&s[pos + 1..]))),
        _ => Some((s, None)),
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('+').unwrap_or(s);
    if digits.is_empty() {
        return None;
    }
    digits.parse().ok()
}

fn parse_numerator(s: &str) -> Option<(BigInt, BigInt, BigInt)> {
    let mut a = BigInt::zero();
    let mut b = BigInt::zero();
    let mut d: Option<BigInt> = None;
    let mut depth = 0usize;
    let mut start = 0usize;
    let mut terms = Vec::new();
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.checked_sub(1)?,
            '+' | '-' if depth == 0 && i > 0 => {
                terms.push(&s[start..i]);
                start = i;
            }
            _ => {}
        }
    }
    terms.push(&s[start..]);
    for term in terms {
        let (negative, body) = match term.as_bytes().first()? {
            b'-' => (true, &term[1..]),
            b'+' => (false, &term[1..]),
            _ => (false, term),
        };
        let Some(sqrt_at) = body.find("sqrt(") else {
            let value = parse_int(body)?;
            a += if negative { -value } else { value };
            continue;
        };
        let coefficient = match &body[..sqrt_at] {
            "" => BigInt::one(),
            head => parse_int(head.strip_suffix('*')?)?,
        };
        let radicand = parse_int(body[sqrt_at + 5..].strip_suffix(')')?)?;
        if d.as_ref().is_some_and(|seen| *seen != radicand) {
            return None;
        }
        d = Some(radicand);
        b += if negative { -coefficient } else { coefficient };
    }
    Some((a, b, d.unwrap_or_default()))
}

impl Serialize for QuadraticIrrational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QuadraticIrrational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
