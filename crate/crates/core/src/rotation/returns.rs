use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;
use thiserror::Error;

use super::interval::{CircleIntervalSet, IntervalError};
use crate::real::{order, CertifiedReal, RealError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReturnError {
    #[error("membership of step {k} could not be certified")]
    UnresolvedMembership { k: i64 },
    #[error("rotation number {0} is rational")]
    RationalRotation(String),
    #[error("empty set has no gaps")]
    EmptySet,
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error(transparent)]
    Real(#[from] RealError),
}

/// `{k in [-n, n] : frac(x + k gamma) in U}` with the list of steps whose
/// membership stayed unresolved at `cap` bits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReturnScan {
    pub n: u64,
    pub members: Vec<i64>,
    pub unresolved: Vec<i64>,
}

struct Fixed {
    one: BigInt,
    gamma: BigInt,
    base: BigInt,
    /// Endpoint mantissas, each within one unit of the true value.
    ends: Vec<(BigInt, BigInt)>,
}

impl Fixed {
    fn new(u: &CircleIntervalSet, gamma: &CertifiedReal, base: &CertifiedReal, prec: u32) -> Self {
        Fixed {
            one: BigInt::one() << prec as usize,
            gamma: gamma.approx(prec),
            base: base.approx(prec),
            ends: u
                .intervals()
                .iter()
                .map(|(a, b)| (a.approx(prec), b.approx(prec)))
                .collect(),
        }
    }

    /// `Some(member)` when the enclosure decides membership.
    fn decide(&self, k: i64) -> Option<bool> {
        let t = &self.base + &self.gamma * k;
        let err = BigInt::from(k.unsigned_abs()) + 2u32;
        let (fl_lo, _) = (&t - &err).div_mod_floor(&self.one);
        let (fl_hi, _) = (&t + &err).div_mod_floor(&self.one);
        if fl_lo != fl_hi {
            return None;
        }
        let f = t - fl_lo * &self.one;
        let (lo, hi) = (&f - &err, &f + &err);
        for (a, b) in &self.ends {
            if hi < a - 1u32 {
                return Some(false);
            }
            if lo > *a {
                if hi < b - 1u32 {
                    return Some(true);
                }
                if lo > *b {
                    continue;
                }
            }
            return None;
        }
        Some(false)
    }
}

fn precision_for(n: u64) -> u32 {
    64 + 2 * (64 - n.leading_zeros())
}

fn certified_member(
    u: &CircleIntervalSet,
    gamma: &CertifiedReal,
    base: &CertifiedReal,
    k: i64,
    cap: u32,
) -> Result<bool, RealError> {
    let t = base + &(gamma * k);
    let f = t.frac(cap)?;
    for (a, b) in u.intervals() {
        if order(&f, a, cap)? == Ordering::Less {
            return Ok(false);
        }
        if order(&f, b, cap)? == Ordering::Less {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Scans `k in [-n, n]` for `frac(base + k gamma) in U`. Memberships are first
/// decided with fixed-point enclosures at `64 + 2 bitlength(n)` bits, then
/// with doubling precision, and finally by certified comparison up to `cap`.
pub fn scan_returns(
    u: &CircleIntervalSet,
    gamma: &CertifiedReal,
    base: &CertifiedReal,
    n: u64,
    cap: u32,
) -> ReturnScan {
    let mut prec = precision_for(n).min(cap.max(64));
    let mut fixed = Fixed::new(u, gamma, base, prec);
    let mut members = Vec::new();
    let mut unresolved = Vec::new();
    let n = n as i64;
    for k in -n..=n {
        let mut verdict = fixed.decide(k);
        while verdict.is_none() && prec * 2 <= cap {
            prec *= 2;
            fixed = Fixed::new(u, gamma, base, prec);
            verdict = fixed.decide(k);
        }
        let verdict = match verdict {
            Some(v) => Some(v),
            None => certified_member(u, gamma, base, k, cap).ok(),
        };
        match verdict {
            Some(true) => members.push(k),
            Some(false) => {}
            None => unresolved.push(k),
        }
    }
    ReturnScan {
        n: n as u64,
        members,
        unresolved,
    }
}

/// `Ret_U` based at `base`, within `[-n, n]`; fails on the first unresolved step.
pub fn return_set_from(
    u: &CircleIntervalSet,
    gamma: &CertifiedReal,
    base: &CertifiedReal,
    n: u64,
    cap: u32,
) -> Result<Vec<i64>, ReturnError> {
    let scan = scan_returns(u, gamma, base, n, cap);
    match scan.unresolved.first() {
        Some(&k) => Err(ReturnError::UnresolvedMembership { k }),
        None => Ok(scan.members),
    }
}

/// `Ret_U` based at `0`.
pub fn return_set(
    u: &CircleIntervalSet,
    gamma: &CertifiedReal,
    n: u64,
    cap: u32,
) -> Result<Vec<i64>, ReturnError> {
    return_set_from(u, gamma, &CertifiedReal::zero(), n, cap)
}

/// `w[i] = 1` iff `frac(x + (i - n) gamma) in [0, gamma)`, for `i in 0..=2n`.
pub fn sturmian_word(
    gamma: &CertifiedReal,
    x: &CertifiedReal,
    n: u64,
    cap: u32,
) -> Result<Vec<u8>, ReturnError> {
    if gamma.is_rational() {
        return Err(ReturnError::RationalRotation(gamma.to_string()));
    }
    let g = gamma.frac(cap)?;
    let u = CircleIntervalSet::initial(&g, cap)?;
    let members = return_set_from(&u, gamma, x, n, cap)?;
    Ok(indicator(&members, n))
}

/// 0/1 word over `[-n, n]`, index 0 standing for `-n`.
pub fn indicator(members: &[i64], n: u64) -> Vec<u8> {
    let mut w = vec![0u8; 2 * n as usize + 1];
    for &k in members {
        w[(k + n as i64) as usize] = 1;
    }
    w
}

/// `|A| / (2n + 1)`.
pub fn window_density(members: &[i64], n: u64) -> BigRational {
    BigRational::new(BigInt::from(members.len()), BigInt::from(2 * n + 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GapReport {
    pub max_gap: u64,
    /// Set when the value is only bounded by the window, as for a singleton.
    pub window_bounded: bool,
}

/// Largest distance between consecutive members of a sorted set in `[-n, n]`.
pub fn syndetic_gap(members: &[i64], n: u64) -> Result<GapReport, ReturnError> {
    match members {
        [] => Err(ReturnError::EmptySet),
        [_] => Ok(GapReport {
            max_gap: 2 * n + 1,
            window_bounded: true,
        }),
        _ => Ok(GapReport {
            max_gap: members
                .windows(2)
                .map(|w| (w[1] - w[0]).unsigned_abs())
                .max()
                .expect("two members"),
            window_bounded: false,
        }),
    }
}

/// Run-length text, e.g. `1x3 0x2 1x1`.
pub fn run_length(word: &[u8]) -> String {
    let mut out: Vec<String> = Vec::new();
    let mut i = 0;
    while i < word.len() {
        let j = word[i..]
            .iter()
            .position(|&c| c != word[i])
            .map_or(word.len(), |p| i + p);
        out.push(format!("{}x{}", word[i], j - i));
        i = j;
    }
    out.join(" ")
}

/// Density deviation `|d - mu|` as a float, for reporting only.
pub fn deviation(density: &BigRational, mu: &CertifiedReal) -> f64 {
    let d = CertifiedReal::rational(density.clone());
    (&d - mu).to_f64().abs()
}

/// `true` if `|d1 - d2| <= bound` exactly.
pub fn within(d1: &BigRational, d2: &BigRational, bound: &BigRational) -> bool {
    (d1 - d2).abs() <= *bound
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::DEFAULT_PRECISION_CAP as CAP;

    fn half_open(a: CertifiedReal, b: CertifiedReal) -> CircleIntervalSet {
        CircleIntervalSet::from_intervals(vec![(a, b)], CAP).unwrap()
    }

    /// `frac(k gamma)` in f64, for small k only.
    fn frac_f64(x: f64) -> f64 {
        x - x.floor()
    }

    #[test]
    fn worked_window() {
        let g = CertifiedReal::sqrt2_minus_1();
        let u = half_open(CertifiedReal::zero(), CertifiedReal::ratio(1, 2));
        assert_eq!(return_set(&u, &g, 3, CAP).unwrap(), vec![-2, 0, 1, 3]);
        let gf = 2f64.sqrt() - 1.0;
        let oracle: Vec<i64> = (-3..=3)
            .filter(|&k| frac_f64(k as f64 * gf) < 0.5)
            .collect();
        assert_eq!(oracle, vec![-2, 0, 1, 3]);
    }

    #[test]
    fn full_and_empty() {
        let g = CertifiedReal::sqrt2_minus_1();
        let all = return_set(&CircleIntervalSet::full(), &g, 5, CAP).unwrap();
        assert_eq!(all, (-5..=5).collect::<Vec<_>>());
        assert_eq!(window_density(&all, 5), BigRational::one());
        let none = return_set(&CircleIntervalSet::empty(), &g, 5, CAP).unwrap();
        assert!(none.is_empty());
        assert_eq!(
            window_density(&none, 5),
            BigRational::from_integer(0.into())
        );
    }

    #[test]
    fn base_point_membership() {
        let g = CertifiedReal::sqrt2_minus_1();
        let with0 = half_open(CertifiedReal::zero(), CertifiedReal::ratio(1, 5));
        let without0 = half_open(CertifiedReal::ratio(1, 5), CertifiedReal::ratio(2, 5));
        assert!(return_set(&with0, &g, 4, CAP).unwrap().contains(&0));
        assert!(!return_set(&without0, &g, 4, CAP).unwrap().contains(&0));
    }

    #[test]
    fn sturmian_prefix() {
        let g = CertifiedReal::golden_conjugate();
        let w = sturmian_word(&g, &CertifiedReal::zero(), 5, CAP).unwrap();
        let oracle: Vec<u8> = (0..6)
            .map(|k| {
                let gf = (5f64.sqrt() - 1.0) / 2.0;
                u8::from(frac_f64(k as f64 * gf) < gf)
            })
            .collect();
        assert_eq!(&w[5..11], oracle.as_slice());
        assert_eq!(&w[5..11], &[1, 0, 1, 0, 1, 1]);
        assert!(matches!(
            sturmian_word(&CertifiedReal::ratio(1, 3), &CertifiedReal::zero(), 3, CAP),
            Err(ReturnError::RationalRotation(_))
        ));
    }

    #[test]
    fn gaps() {
        let evens: Vec<i64> = (-10..=10).filter(|k| k % 2 == 0).collect();
        assert_eq!(syndetic_gap(&evens, 10).unwrap().max_gap, 2);
        assert!(syndetic_gap(&[3], 10).unwrap().window_bounded);
        assert_eq!(syndetic_gap(&[], 10), Err(ReturnError::EmptySet));
    }

    #[test]
    fn gap_stable_when_window_doubles() {
        let g = CertifiedReal::sqrt2_minus_1();
        let u = half_open(CertifiedReal::ratio(1, 10), CertifiedReal::ratio(3, 10));
        let g1 = syndetic_gap(&return_set(&u, &g, 200, CAP).unwrap(), 200).unwrap();
        let g2 = syndetic_gap(&return_set(&u, &g, 400, CAP).unwrap(), 400).unwrap();
        assert_eq!(g1, g2);
    }

    #[test]
    fn endpoint_hit_is_resolved_exactly() {
        // frac(1 * gamma) is the left endpoint of [gamma, 1)
        let g = CertifiedReal::sqrt2_minus_1();
        let u = half_open(g.clone(), CertifiedReal::one());
        let scan = scan_returns(&u, &g, &CertifiedReal::zero(), 3, 256);
        assert!(scan.unresolved.is_empty());
        assert!(scan.members.contains(&1));
    }

    #[test]
    fn run_length_text() {
        assert_eq!(run_length(&[1, 1, 0, 1]), "1x2 0x1 1x1");
    }
}
