//! Gaps between the points `{n·θ}`, `0 ≤ n < M`, on the unit circle.
//!
//! With convergent denominators `q_k` of `θ` and `η_k = |q_k·θ − p_k|`, every
//! `M ≥ 1` has a unique decomposition `M = r·q_k + q_{k−1} + s` with
//! `1 ≤ r ≤ a_{k+1}` and `0 ≤ s < q_k`. The circle is then cut into
//! `M − q_k` arcs of length `η_k`, `s` arcs of length `η_{k−1} − r·η_k` and
//! `q_k − s` arcs of length `η_{k−1} − (r−1)·η_k`, the last being the largest.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::CertifyError;
use crate::exactnum::{PartialQuotients, QuadraticIrrational};

type QI = QuadraticIrrational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapCount {
    pub length: QuadraticIrrational,
    pub count: u64,
}

/// Arc lengths cut out by `{n·θ}`, `0 ≤ n < M`, ascending, with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapProfile {
    pub theta: QuadraticIrrational,
    #[serde(rename = "M")]
    pub m: u64,
    pub gaps: Vec<GapCount>,
}

impl GapProfile {
    pub fn max_gap(&self) -> &QuadraticIrrational {
        &self.gaps.last().expect("a profile has at least one arc").length
    }

    pub fn distinct(&self) -> usize {
        self.gaps.len()
    }

    pub fn arcs(&self) -> u64 {
        self.gaps.iter().map(|g| g.count).sum()
    }

    /// Total arc length; exactly one for a valid profile.
    pub fn total(&self) -> QuadraticIrrational {
        self.gaps
            .iter()
            .map(|g| g.length.mul_int(&BigInt::from(g.count)))
            .fold(QI::zero(), |acc, x| &acc + &x)
    }

    fn from_counts(theta: &QI, m: u64, raw: Vec<(QI, u64)>) -> Self {
        let mut gaps: Vec<GapCount> = Vec::new();
        let mut raw: Vec<(QI, u64)> = raw.into_iter().filter(|(_, c)| *c > 0).collect();
        raw.sort_by(|a, b| cmp(&a.0, &b.0));
        for (length, count) in raw {
            match gaps.last_mut() {
                Some(last) if last.length == length => last.count += count,
                _ => gaps.push(GapCount { length, count }),
            }
        }
        GapProfile {
            theta: theta.clone(),
            m,
            gaps,
        }
    }
}

fn cmp(a: &QI, b: &QI) -> Ordering {
    a.compare(b).expect("gap lengths share a field")
}

/// One level `k` of the convergent walk: covers `q_k + q_{k−1} ≤ M < q_{k+1} + q_k`.
struct Level {
    q_prev: BigInt,
    q: BigInt,
    eta_prev: QI,
    eta: QI,
    a_next: BigInt,
}

struct Levels {
    quotients: PartialQuotients,
    level: Level,
}

impl Levels {
    fn new(theta: &QI) -> Result<Self, CertifyError> {
        if theta.is_rational() {
            return Err(CertifyError::RationalTheta(theta.to_string()));
        }
        if theta.signum() != Ordering::Greater || cmp(theta, &QI::one()) != Ordering::Less {
            return Err(CertifyError::ThetaOutOfRange(theta.to_string()));
        }
        let mut quotients = PartialQuotients::new(theta)?;
        let a0 = quotients.next().expect("endless expansion");
        debug_assert!(a0.is_zero());
        let a1 = quotients.next().expect("endless expansion");
        Ok(Levels {
            quotients,
            level: Level {
                q_prev: BigInt::zero(),
                q: BigInt::one(),
                eta_prev: QI::one(),
                eta: theta.clone(),
                a_next: a1,
            },
        })
    }

    fn advance(&mut self) {
        let l = &mut self.level;
        let q_next = &l.a_next * &l.q + &l.q_prev;
        let eta_next = &l.eta_prev - &l.eta.mul_int(&l.a_next);
        l.q_prev = std::mem::replace(&mut l.q, q_next);
        l.eta_prev = std::mem::replace(&mut l.eta, eta_next);
        l.a_next = self.quotients.next().expect("endless expansion");
    }

    fn upper(&self) -> BigInt {
        let l = &self.level;
        &l.a_next * &l.q + &l.q_prev + &l.q
    }
}

/// Exact gap profile from the three-distance decomposition.
pub fn gap_profile(theta: &QI, m: u64) -> Result<GapProfile, CertifyError> {
    if m == 0 {
        return Err(CertifyError::EmptyWindow);
    }
    let mut levels = Levels::new(theta)?;
    let big_m = BigInt::from(m);
    while big_m >= levels.upper() {
        levels.advance();
    }
    let l = &levels.level;
    let (r, s) = (&big_m - &l.q_prev).div_rem(&l.q);
    let q = l.q.to_u64().expect("q_k ≤ M");
    let s = s.to_u64().expect("s < q_k");
    let medium = &l.eta_prev - &l.eta.mul_int(&r);
    let large = &l.eta_prev - &l.eta.mul_int(&(&r - 1));
    Ok(GapProfile::from_counts(
        theta,
        m,
        vec![(l.eta.clone(), m - q), (medium, s), (large, q - s)],
    ))
}

/// Largest arc cut out by `{n·θ}`, `0 ≤ n < M`. Since a window of `M`
/// consecutive `n` gives a rotated copy of the same points, the bound holds
/// for every window and every phase.
pub fn max_gap(theta: &QI, m: u64) -> Result<QI, CertifyError> {
    Ok(gap_profile(theta, m)?.max_gap().clone())
}

/// Independent route: sorts the points exactly and measures neighbours.
pub fn gap_profile_by_sort(theta: &QI, m: u64) -> Result<GapProfile, CertifyError> {
    if m == 0 {
        return Err(CertifyError::EmptyWindow);
    }
    if theta.is_rational() {
        return Err(CertifyError::RationalTheta(theta.to_string()));
    }
    let step = theta.frac();
    let mut points = Vec::with_capacity(m as usize);
    let mut x = QI::zero();
    for _ in 0..m {
        points.push(x.clone());
        x = (&x + &step).frac();
    }
    points.sort_by(cmp);
    let mut raw: Vec<(QI, u64)> = points.windows(2).map(|w| (&w[1] - &w[0], 1)).collect();
    let wrap = (&points[0] - points.last().expect("m ≥ 1")).add_int(&BigInt::one());
    raw.push((wrap, 1));
    Ok(GapProfile::from_counts(theta, m, raw))
}

/// Least `M` with `max_gap(θ, M) < ε`. Walks the convergent levels and
/// solves for `r` inside the first level where the bound can drop below `ε`.
pub fn min_window(theta: &QI, epsilon: &QI) -> Result<u64, CertifyError> {
    if epsilon.signum() != Ordering::Greater {
        return Err(CertifyError::NonPositiveEpsilon(epsilon.to_string()));
    }
    let mut levels = Levels::new(theta)?;
    loop {
        let l = &levels.level;
        // want η_{k−1} − (r−1)·η_k < ε, i.e. r − 1 > (η_{k−1} − ε)/η_k
        let t = (&l.eta_prev - epsilon).try_div(&l.eta)?;
        let r = if t.signum() == Ordering::Less {
            BigInt::one()
        } else {
            t.floor() + 2
        };
        if r <= l.a_next {
            let m = r * &l.q + &l.q_prev;
            return m.to_u64().ok_or(CertifyError::WindowTooLarge);
        }
        if l.q.bits() > 64 {
            return Err(CertifyError::WindowTooLarge);
        }
        levels.advance();
    }
}
