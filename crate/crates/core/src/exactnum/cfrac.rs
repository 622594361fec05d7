use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{ExactError, QuadraticIrrational};

/// Simple continued fraction `[a₀; a₁, a₂, …]` of a quadratic irrational,
/// with the eventual period when one was detected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuedFraction {
    terms: Vec<BigInt>,
    preperiod: usize,
    period: Option<usize>,
    /// Squarefree radicand of the expanded value, when known. Square factors
    /// too large for trial division are folded against it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radicand: Option<BigInt>,
}

impl ContinuedFraction {
    /// The computed partial quotients: the preperiod followed by one copy of
    /// the period, or the truncated expansion when no period was found.
    pub fn terms(&self) -> &[BigInt] {
        &self.terms
    }

    /// Number of leading terms before the repeating block (includes `a₀`).
    pub fn preperiod(&self) -> usize {
        self.preperiod
    }

    pub fn period(&self) -> Option<usize> {
        self.period
    }

    pub fn is_periodic(&self) -> bool {
        self.period.is_some()
    }

    /// The `i`-th partial quotient, following the period past the stored terms.
    pub fn term(&self, i: usize) -> Option<&BigInt> {
        match self.period {
            Some(p) if i >= self.preperiod => {
                Some(&self.terms[self.preperiod + (i - self.preperiod) % p])
            }
            _ => self.terms.get(i),
        }
    }

    /// The first `count` convergents `p/q`.
    pub fn convergents(&self, count: usize) -> Vec<(BigInt, BigInt)> {
        let mut out = Vec::with_capacity(count);
        let (mut p_prev, mut p) = (BigInt::zero(), BigInt::one());
        let (mut q_prev, mut q) = (BigInt::one(), BigInt::zero());
        for i in 0..count {
            let Some(a) = self.term(i) else { break };
            let p_next = a * &p + &p_prev;
            let q_next = a * &q + &q_prev;
            p_prev = std::mem::replace(&mut p, p_next);
            q_prev = std::mem::replace(&mut q, q_next);
            out.push((p.clone(), q.clone()));
        }
        out
    }

    /// Rebuilds the exact value from the periodic form.
    pub fn to_quadratic(&self) -> Option<QuadraticIrrational> {
        let period = self.period?;
        let block = &self.terms[self.preperiod..self.preperiod + period];
        // y = [block; y] satisfies y = (p·y + p')/(q·y + q')
        let [p, p_prev, q, q_prev] = matrix_product(block);
        let disc = (&p - &q_prev) * (&p - &q_prev) + 4 * &q * &p_prev;
        let (coef, disc) = self.fold_square(disc);
        let tail = QuadraticIrrational::new(&p - &q_prev, coef, disc, 2 * &q).ok()?;
        if self.preperiod == 0 {
            return Some(tail);
        }
        let [e, f, g, h] = matrix_product(&self.terms[..self.preperiod]);
        let numer = tail.mul_int(&e).add_int(&f);
        let denom = tail.mul_int(&g).add_int(&h);
        numer.try_div(&denom).ok()
    }
}

impl ContinuedFraction {
    /// Writes `disc` as `t²·d` for the known radicand `d` when possible.
    fn fold_square(&self, disc: BigInt) -> (BigInt, BigInt) {
        if let Some(d) = self.radicand.as_ref().filter(|d| d.is_positive()) {
            let (t2, rem) = disc.div_rem(d);
            let t = t2.sqrt();
            if rem.is_zero() && &t * &t == t2 {
                return (t, d.clone());
            }
        }
        (BigInt::one(), disc)
    }
}

/// Product of `[[aᵢ, 1], [1, 0]]`, as `[p, p', q, q']`.
fn matrix_product(terms: &[BigInt]) -> [BigInt; 4] {
    let (mut p, mut p_prev) = (BigInt::one(), BigInt::zero());
    let (mut q, mut q_prev) = (BigInt::zero(), BigInt::one());
    for a in terms {
        let p_next = a * &p + &p_prev;
        let q_next = a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
    [p, p_prev, q, q_prev]
}

/// Endless expansion of an irrational `(P + √D)/Q` with `Q | D − P²`.
#[derive(Clone, Debug)]
pub struct PartialQuotients {
    p: BigInt,
    q: BigInt,
    disc: BigInt,
    root: BigInt,
}

impl PartialQuotients {
    pub fn new(x: &QuadraticIrrational) -> Result<Self, ExactError> {
        if x.is_rational() {
            return Err(ExactError::RationalInput(x.to_string()));
        }
        let b = x.surd_coefficient();
        let mut disc = b * b * x.radicand();
        let (mut p, mut q) = if b.is_positive() {
            (x.rational_part().clone(), x.denominator().clone())
        } else {
            (-x.rational_part(), -x.denominator())
        };
        if !(&disc - &p * &p).is_multiple_of(&q) {
            let scale = q.abs();
            p *= &scale;
            disc *= &q * &q;
            q *= scale;
        }
        let root = disc.sqrt();
        Ok(Self { p, q, disc, root })
    }

    fn state(&self) -> (BigInt, BigInt) {
        (self.p.clone(), self.q.clone())
    }
}

impl Iterator for PartialQuotients {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        // ⌊(P + √D)/Q⌋ with ⌊√D⌋ = root and √D never an integer
        let a = if self.q.is_positive() {
            (&self.p + &self.root).div_floor(&self.q)
        } else {
            let numer: BigInt = -&self.p - &self.root - 1;
            numer.div_floor(&-&self.q)
        };
        let p_next = &a * &self.q - &self.p;
        self.q = (&self.disc - &p_next * &p_next) / &self.q;
        self.p = p_next;
        Some(a)
    }
}

/// Expands `q` until its period is found or `max_terms` quotients have been
/// produced; in the latter case the result is flagged non-periodic.
pub fn continued_fraction(
    q: &QuadraticIrrational,
    max_terms: usize,
) -> Result<ContinuedFraction, ExactError> {
    let mut quotients = PartialQuotients::new(q)?;
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut terms = Vec::new();
    while terms.len() < max_terms {
        let state = quotients.state();
        if let Some(&first) = seen.get(&state) {
            return Ok(ContinuedFraction {
                preperiod: first,
                period: Some(terms.len() - first),
                terms,
                radicand: Some(q.radicand().clone()),
            });
        }
        seen.insert(state, terms.len());
        terms.push(quotients.next().expect("expansion is endless"));
    }
    Ok(ContinuedFraction {
        terms,
        preperiod: 0,
        period: None,
        radicand: Some(q.radicand().clone()),
    })
}
