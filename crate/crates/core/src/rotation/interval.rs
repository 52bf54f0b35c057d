use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::real::{order, CertifiedReal, RealError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error(transparent)]
    Real(#[from] RealError),
    #[error("interval [{lo}, {hi}) is not inside [0, 1]")]
    OutOfRange { lo: String, hi: String },
    #[error("cannot parse interval set {0:?}")]
    Parse(String),
}

/// Finite union of half-open intervals `[a, b)` inside `[0, 1)`, kept sorted,
/// disjoint, nonempty and with touching neighbours merged.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CircleIntervalSet {
    intervals: Vec<(CertifiedReal, CertifiedReal)>,
}

fn sort_by_order<T>(
    items: &mut [T],
    key: impl Fn(&T) -> &CertifiedReal,
    cap: u32,
) -> Result<(), RealError> {
    let mut failure = None;
    items.sort_by(|a, b| match order(key(a), key(b), cap) {
        Ok(o) => o,
        Err(e) => {
            failure.get_or_insert(e);
            Ordering::Equal
        }
    });
    failure.map_or(Ok(()), Err)
}

fn max_of(a: &CertifiedReal, b: &CertifiedReal, cap: u32) -> Result<CertifiedReal, RealError> {
    Ok(if order(a, b, cap)? == Ordering::Less {
        b.clone()
    } else {
        a.clone()
    })
}

fn min_of(a: &CertifiedReal, b: &CertifiedReal, cap: u32) -> Result<CertifiedReal, RealError> {
    Ok(if order(a, b, cap)? == Ordering::Greater {
        b.clone()
    } else {
        a.clone()
    })
}

impl CircleIntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full() -> Self {
        CircleIntervalSet {
            intervals: vec![(CertifiedReal::zero(), CertifiedReal::one())],
        }
    }

    /// `[0, alpha)`.
    pub fn initial(alpha: &CertifiedReal, cap: u32) -> Result<Self, IntervalError> {
        Self::from_intervals(vec![(CertifiedReal::zero(), alpha.clone())], cap)
    }

    /// Canonical form of an arbitrary list of `[a, b)` pieces with `0 <= a <= b <= 1`.
    pub fn from_intervals(
        pieces: Vec<(CertifiedReal, CertifiedReal)>,
        cap: u32,
    ) -> Result<Self, IntervalError> {
        let zero = CertifiedReal::zero();
        let one = CertifiedReal::one();
        let mut kept = Vec::with_capacity(pieces.len());
        for (a, b) in pieces {
            let in_range = order(&zero, &a, cap)? != Ordering::Greater
                && order(&b, &one, cap)? != Ordering::Greater;
            match order(&a, &b, cap)? {
                Ordering::Less if in_range => kept.push((a, b)),
                Ordering::Equal if in_range => {}
                _ => {
                    return Err(IntervalError::OutOfRange {
                        lo: a.to_string(),
                        hi: b.to_string(),
                    })
                }
            }
        }
        sort_by_order(&mut kept, |p| &p.0, cap)?;
        let mut merged: Vec<(CertifiedReal, CertifiedReal)> = Vec::with_capacity(kept.len());
        for (a, b) in kept {
            if let Some(last) = merged.last_mut() {
                if order(&a, &last.1, cap)? != Ordering::Greater {
                    last.1 = max_of(&last.1, &b, cap)?;
                    continue;
                }
            }
            merged.push((a, b));
        }
        Ok(CircleIntervalSet { intervals: merged })
    }

    pub fn intervals(&self) -> &[(CertifiedReal, CertifiedReal)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Endpoints in increasing order.
    pub fn boundary(&self) -> Vec<CertifiedReal> {
        self.intervals
            .iter()
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect()
    }

    pub fn union(&self, other: &Self, cap: u32) -> Result<Self, IntervalError> {
        let mut all = self.intervals.clone();
        all.extend(other.intervals.iter().cloned());
        Self::from_intervals(all, cap)
    }

    pub fn intersect(&self, other: &Self, cap: u32) -> Result<Self, IntervalError> {
        let (xs, ys) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < xs.len() && j < ys.len() {
            let lo = max_of(&xs[i].0, &ys[j].0, cap)?;
            let hi = min_of(&xs[i].1, &ys[j].1, cap)?;
            if order(&lo, &hi, cap)? == Ordering::Less {
                out.push((lo, hi));
            }
            if order(&xs[i].1, &ys[j].1, cap)? == Ordering::Less {
                i += 1;
            } else {
                j += 1;
            }
        }
        // pieces of disjoint sorted inputs stay sorted and disjoint
        Self::from_intervals(out, cap)
    }

    pub fn complement(&self, cap: u32) -> Result<Self, IntervalError> {
        let mut out = Vec::new();
        let mut prev = CertifiedReal::zero();
        for (a, b) in &self.intervals {
            out.push((prev, a.clone()));
            prev = b.clone();
        }
        out.push((prev, CertifiedReal::one()));
        Self::from_intervals(out, cap)
    }

    pub fn difference(&self, other: &Self, cap: u32) -> Result<Self, IntervalError> {
        self.intersect(&other.complement(cap)?, cap)
    }

    /// Lebesgue measure, exact.
    pub fn measure(&self) -> CertifiedReal {
        self.intervals
            .iter()
            .fold(CertifiedReal::zero(), |acc, (a, b)| &acc + &(b - a))
    }

    /// Translation by `t` modulo 1, `t` in `[0, 1)`.
    pub fn translate(&self, t: &CertifiedReal, cap: u32) -> Result<Self, IntervalError> {
        let one = CertifiedReal::one();
        let mut out = Vec::with_capacity(self.intervals.len() + 1);
        for (a, b) in &self.intervals {
            let (a2, b2) = (a + t, b + t);
            if order(&a2, &one, cap)? != Ordering::Less {
                out.push((&a2 - &one, &b2 - &one));
            } else if order(&b2, &one, cap)? != Ordering::Greater {
                out.push((a2, b2));
            } else {
                out.push((a2, one.clone()));
                out.push((CertifiedReal::zero(), &b2 - &one));
            }
        }
        Self::from_intervals(out, cap)
    }

    /// Image under `T_gamma^k`, i.e. translation by `frac(k * gamma)`.
    pub fn rotate(&self, gamma: &CertifiedReal, k: i64, cap: u32) -> Result<Self, IntervalError> {
        let shift = (gamma * k).frac(cap)?;
        self.translate(&shift, cap)
    }

    /// Certified membership of a point of `[0, 1)`.
    pub fn contains(&self, x: &CertifiedReal, cap: u32) -> Result<bool, IntervalError> {
        for (a, b) in &self.intervals {
            if order(x, a, cap)? == Ordering::Less {
                return Ok(false);
            }
            if order(x, b, cap)? == Ordering::Less {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Symbolic rendering, e.g. `[0,-1 + sqrt(2))`.
    pub fn symbolic(&self) -> String {
        if self.intervals.is_empty() {
            return "∅".into();
        }
        self.intervals
            .iter()
            .map(|(a, b)| format!("[{a},{b})"))
            .collect::<Vec<_>>()
            .join("∪")
    }

    /// Decimal rendering with `digits` places.
    pub fn decimal(&self, digits: usize) -> String {
        if self.intervals.is_empty() {
            return "∅".into();
        }
        self.intervals
            .iter()
            .map(|(a, b)| format!("[{},{})", a.to_decimal(digits), b.to_decimal(digits)))
            .collect::<Vec<_>>()
            .join("∪")
    }

    /// Parses `a,b` or `a,b;c,d;...` with endpoints in any form [`CertifiedReal::parse`] accepts.
    pub fn parse(text: &str, cap: u32) -> Result<Self, IntervalError> {
        let mut pieces = Vec::new();
        for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (a, b) = part
                .trim_start_matches('[')
                .trim_end_matches(')')
                .split_once(',')
                .ok_or_else(|| IntervalError::Parse(text.into()))?;
            pieces.push((
                CertifiedReal::parse(a.trim())?,
                CertifiedReal::parse(b.trim())?,
            ));
        }
        Self::from_intervals(pieces, cap)
    }
}

impl fmt::Display for CircleIntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.decimal(6))
    }
}
