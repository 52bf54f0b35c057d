//! Certified real numbers.
//!
//! A [`CertifiedReal`] is a rational-affine combination `c0 + c1*x1 + ... + ck*xk`
//! of *base reals* (square roots of non-square integers, and sparse binary digit
//! sums). Every value can be approximated to any precision with a certified error
//! bound, and two values can be ordered by refining both until their error
//! intervals separate.
//!
//! Digit sums with finitely many digits are exact dyadic rationals; combinations
//! built only from them (and rationals) are compared exactly, at any magnitude of
//! digit position, without a precision cap.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Default refinement cap, in bits, used by callers that do not pick one.
pub const DEFAULT_PRECISION_CAP: u32 = 1024;

/// Outcome of a certified comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Comparison {
    Less,
    Greater,
    /// The approximations never separated; the values may be equal.
    UnresolvedAtPrecision,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealError {
    #[error("cannot order {left} and {right} within {precision} bits")]
    Unresolved {
        left: String,
        right: String,
        precision: u32,
    },
    #[error("invalid quadratic irrational (a + sqrt(b))/c with a={a}, b={b}, c={c}")]
    InvalidQuadratic { a: BigInt, b: BigInt, c: BigInt },
    #[error("digit positions must be positive and strictly increasing")]
    InvalidDigits,
    #[error("cannot parse real {0:?}")]
    Parse(String),
}

/// Broad construction kind, as reported to callers and validators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RealKind {
    Rational,
    Quadratic,
    QTree,
    Affine,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum BaseKind {
    /// `sqrt(n)` with `n` positive and not a perfect square.
    Sqrt(BigInt),
    /// `sum 2^-p` over the listed positions.
    DigitSum { label: String, positions: Vec<u64> },
}

#[derive(Debug)]
struct BaseReal {
    kind: BaseKind,
    exact: OnceLock<(BigInt, u64)>,
}

impl PartialEq for BaseReal {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}
impl Eq for BaseReal {}
impl Hash for BaseReal {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.kind.hash(state)
    }
}
impl PartialOrd for BaseReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for BaseReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.kind.cmp(&other.kind)
    }
}

impl BaseReal {
    fn new(kind: BaseKind) -> Arc<Self> {
        Arc::new(BaseReal {
            kind,
            exact: OnceLock::new(),
        })
    }

    fn is_exact(&self) -> bool {
        matches!(self.kind, BaseKind::DigitSum { .. })
    }

    /// Mantissa `m` with `|x - m/2^prec| <= 2^-prec`.
    fn approx(&self, prec: u32) -> BigInt {
        match &self.kind {
            BaseKind::Sqrt(n) => (n << (2 * prec as usize)).sqrt(),
            BaseKind::DigitSum { positions, .. } => {
                let mut m = BigInt::zero();
                for &p in positions.iter().take_while(|&&p| p <= prec as u64) {
                    m += BigInt::one() << (prec as u64 - p) as usize;
                }
                m
            }
        }
    }

    /// Exact dyadic value `m / 2^e` for digit sums.
    fn exact(&self) -> Option<&(BigInt, u64)> {
        match &self.kind {
            BaseKind::Sqrt(_) => None,
            BaseKind::DigitSum { positions, .. } => Some(self.exact.get_or_init(|| {
                let top = positions.last().copied().unwrap_or(0);
                let mut m = BigInt::zero();
                for &p in positions {
                    m += BigInt::one() << (top - p) as usize;
                }
                (m, top)
            })),
        }
    }
}

impl fmt::Display for BaseReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            BaseKind::Sqrt(n) => write!(f, "sqrt({n})"),
            BaseKind::DigitSum { label, .. } => write!(f, "r[{label}]"),
        }
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct Affine {
    constant: BigRational,
    /// Sorted by base, no zero coefficients.
    terms: Vec<(Arc<BaseReal>, BigRational)>,
}

/// A real number queryable to any precision with a certified error bound.
///
/// `Eq` and `Hash` are *structural*: two values are equal when their normal
/// forms coincide, which implies equal values. Use [`compare`] or [`order`] for
/// value comparisons.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CertifiedReal(Arc<Affine>);

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn bit_length(n: &BigInt) -> u64 {
    n.bits()
}

impl CertifiedReal {
    fn from_parts(constant: BigRational, mut terms: Vec<(Arc<BaseReal>, BigRational)>) -> Self {
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Arc<BaseReal>, BigRational)> = Vec::with_capacity(terms.len());
        for (b, c) in terms {
            match merged.last_mut() {
                Some((lb, lc)) if *lb == b => *lc += c,
                _ => merged.push((b, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        CertifiedReal(Arc::new(Affine {
            constant,
            terms: merged,
        }))
    }

    pub fn rational(q: BigRational) -> Self {
        Self::from_parts(q, Vec::new())
    }

    pub fn ratio(numer: i64, denom: i64) -> Self {
        Self::rational(BigRational::new(big(numer), big(denom)))
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(BigRational::from_integer(big(n)))
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    /// `(a + sqrt(b)) / c`. Perfect-square `b` collapses to a rational; square
    /// factors of `b` are pulled out so that equal radicals share one base.
    pub fn quadratic(a: BigInt, b: BigInt, c: BigInt) -> Result<Self, RealError> {
        if c.is_zero() || b.is_negative() {
            return Err(RealError::InvalidQuadratic { a, b, c });
        }
        let denom = BigRational::from_integer(c.clone());
        let root = b.sqrt();
        if &root * &root == b {
            return Ok(Self::rational(BigRational::from_integer(a + root) / denom));
        }
        let mut rad = b;
        let mut outside = BigInt::one();
        let mut f = big(2);
        while &f * &f <= rad && f <= big(1000) {
            let sq = &f * &f;
            while (&rad % &sq).is_zero() {
                rad /= &sq;
                outside *= &f;
            }
            f += 1;
        }
        let constant = BigRational::from_integer(a) / &denom;
        let coeff = BigRational::from_integer(outside) / denom;
        Ok(Self::from_parts(
            constant,
            vec![(BaseReal::new(BaseKind::Sqrt(rad)), coeff)],
        ))
    }

    /// `sqrt(2) - 1`.
    pub fn sqrt2_minus_1() -> Self {
        Self::quadratic(big(-1), big(2), big(1)).expect("valid quadratic")
    }

    /// `(sqrt(5) - 1) / 2`.
    pub fn golden_conjugate() -> Self {
        Self::quadratic(big(-1), big(5), big(2)).expect("valid quadratic")
    }

    /// `sum over p in positions of 2^-p`; positions strictly increasing and >= 1.
    pub fn digit_sum(label: impl Into<String>, positions: Vec<u64>) -> Result<Self, RealError> {
        if positions.is_empty() || positions[0] == 0 || positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(RealError::InvalidDigits);
        }
        Ok(Self::from_parts(
            BigRational::zero(),
            vec![(
                BaseReal::new(BaseKind::DigitSum {
                    label: label.into(),
                    positions,
                }),
                BigRational::one(),
            )],
        ))
    }

    pub fn kind(&self) -> RealKind {
        let a = &self.0;
        match a.terms.as_slice() {
            [] => RealKind::Rational,
            [(b, c)] => match &b.kind {
                BaseKind::Sqrt(_) => RealKind::Quadratic,
                BaseKind::DigitSum { .. } if a.constant.is_zero() && c.is_one() => RealKind::QTree,
                BaseKind::DigitSum { .. } => RealKind::Affine,
            },
            _ => RealKind::Affine,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.0.terms.is_empty()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.0.constant)
    }

    /// True when the value is known exactly (rationals and digit sums only).
    pub fn is_exact(&self) -> bool {
        self.0.terms.iter().all(|(b, _)| b.is_exact())
    }

    /// True when the normal form is the literal zero.
    pub fn is_symbolic_zero(&self) -> bool {
        self.0.terms.is_empty() && self.0.constant.is_zero()
    }

    /// Mantissa `m` with `|self - m / 2^prec| <= 2^-prec`.
    pub fn approx(&self, prec: u32) -> BigInt {
        let a = &self.0;
        let scale = BigRational::from_integer(BigInt::one() << prec as usize);
        let mut sum = &a.constant * &scale;
        if !a.terms.is_empty() {
            let weight: BigRational = a.terms.iter().map(|(_, c)| c.abs()).sum();
            let guard = bit_length(&weight.ceil().to_integer()) as u32 + 2;
            let shift = BigRational::from_integer(BigInt::one() << guard as usize);
            for (b, c) in &a.terms {
                let m = BigRational::from_integer(b.approx(prec + guard));
                sum += c * m / &shift;
            }
        }
        sum.round().to_integer()
    }

    /// Sign of an exact value, if the value is exact.
    pub fn exact_sign(&self) -> Option<Ordering> {
        if !self.is_exact() {
            return None;
        }
        let a = &self.0;
        let mut lcm = a.constant.denom().clone();
        for (_, c) in &a.terms {
            lcm = lcm.lcm(c.denom());
        }
        let top = a
            .terms
            .iter()
            .filter_map(|(b, _)| b.exact().map(|e| e.1))
            .max()
            .unwrap_or(0);
        let mut acc: BigInt = (a.constant.numer() * (&lcm / a.constant.denom())) << top as usize;
        for (b, c) in &a.terms {
            let (m, e) = b.exact().expect("exact base");
            let k = c.numer() * (&lcm / c.denom());
            acc += k * (m << (top - e) as usize);
        }
        Some(match acc.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        })
    }

    /// `floor(self)`, certified.
    pub fn floor(&self, cap: u32) -> Result<BigInt, RealError> {
        if let Some(q) = self.as_rational() {
            return Ok(q.floor().to_integer());
        }
        let mut prec = 16u32.min(cap.max(1));
        loop {
            let m = self.approx(prec);
            let lo = (&m - BigInt::one()).div_floor(&(BigInt::one() << prec as usize));
            let hi = (&m + BigInt::one()).div_floor(&(BigInt::one() << prec as usize));
            if lo == hi {
                return Ok(lo);
            }
            if &hi - &lo == BigInt::one() {
                let hi_real = CertifiedReal::rational(BigRational::from_integer(hi.clone()));
                match order(self, &hi_real, prec) {
                    Ok(Ordering::Less) => return Ok(lo),
                    Ok(_) => return Ok(hi),
                    Err(_) if prec >= cap => {
                        return Err(RealError::Unresolved {
                            left: self.to_string(),
                            right: hi.to_string(),
                            precision: cap,
                        })
                    }
                    Err(_) => {}
                }
            }
            if prec >= cap {
                return Err(RealError::Unresolved {
                    left: self.to_string(),
                    right: "an integer".into(),
                    precision: cap,
                });
            }
            prec = (prec * 2).min(cap);
        }
    }

    /// `self - floor(self)`, as an affine combination of the same bases.
    pub fn frac(&self, cap: u32) -> Result<CertifiedReal, RealError> {
        let n = self.floor(cap)?;
        Ok(self - &CertifiedReal::rational(BigRational::from_integer(n)))
    }

    pub fn scale(&self, k: &BigRational) -> CertifiedReal {
        let a = &self.0;
        Self::from_parts(
            &a.constant * k,
            a.terms.iter().map(|(b, c)| (b.clone(), c * k)).collect(),
        )
    }

    pub fn scale_int(&self, k: i64) -> CertifiedReal {
        self.scale(&BigRational::from_integer(big(k)))
    }

    pub fn to_f64(&self) -> f64 {
        let m = self.approx(64);
        m.to_f64().unwrap_or(f64::NAN) / 2f64.powi(64)
    }

    /// Decimal approximant truncated toward zero at `digits` fractional digits
    /// (within one unit of the last digit).
    pub fn to_decimal(&self, digits: usize) -> String {
        let prec = (digits as f64 * 3.33) as u32 + 16;
        let m = self.approx(prec);
        let ten = BigInt::from(10u32).pow(digits as u32);
        let scaled = (m.abs() * &ten) >> prec as usize;
        let s = format!("{:0>width$}", scaled.to_string(), width = digits + 1);
        let (int, fracpart) = s.split_at(s.len() - digits);
        let sign = if m.is_negative() && !scaled.is_zero() {
            "-"
        } else {
            ""
        };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{fracpart}")
        }
    }

    /// Parses the textual forms accepted on the command line:
    /// `sqrt2m1`, `golden`, `quad:a,b,c`, `p/q`, decimals like `0.3`, integers.
    pub fn parse(text: &str) -> Result<Self, RealError> {
        let t = text.trim();
        let err = || RealError::Parse(text.to_string());
        match t {
            "sqrt2m1" => return Ok(Self::sqrt2_minus_1()),
            "golden" | "phim1" => return Ok(Self::golden_conjugate()),
            _ => {}
        }
        if let Some(rest) = t.strip_prefix("quad:") {
            let parts: Vec<BigInt> = rest
                .split(',')
                .map(|p| p.trim().parse::<BigInt>().map_err(|_| err()))
                .collect::<Result<_, _>>()?;
            if parts.len() != 3 {
                return Err(err());
            }
            return Self::quadratic(parts[0].clone(), parts[1].clone(), parts[2].clone());
        }
        if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            return Ok(Self::rational(BigRational::new(n, d)));
        }
        let (neg, body) = match t.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, t),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        if int.is_empty() && frac.is_empty()
            || !int.chars().all(|c| c.is_ascii_digit())
            || !frac.chars().all(|c| c.is_ascii_digit())
        {
            return Err(err());
        }
        let digits = format!("{int}{frac}");
        let n: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| err())?
        };
        let q = BigRational::new(n, BigInt::from(10u32).pow(frac.len() as u32));
        Ok(Self::rational(if neg { -q } else { q }))
    }
}

impl fmt::Display for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = &self.0;
        let mut first = true;
        if !a.constant.is_zero() || a.terms.is_empty() {
            write!(f, "{}", a.constant)?;
            first = false;
        }
        for (b, c) in &a.terms {
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mag.is_one() {
                write!(f, "{b}")?;
            } else {
                write!(f, "{mag}*{b}")?;
            }
            first = false;
        }
        Ok(())
    }
}

impl Add for &CertifiedReal {
    type Output = CertifiedReal;
    fn add(self, rhs: &CertifiedReal) -> CertifiedReal {
        let mut terms = self.0.terms.clone();
        terms.extend(rhs.0.terms.iter().cloned());
        CertifiedReal::from_parts(&self.0.constant + &rhs.0.constant, terms)
    }
}

impl Sub for &CertifiedReal {
    type Output = CertifiedReal;
    fn sub(self, rhs: &CertifiedReal) -> CertifiedReal {
        self + &(-rhs)
    }
}

impl Neg for &CertifiedReal {
    type Output = CertifiedReal;
    fn neg(self) -> CertifiedReal {
        self.scale(&-BigRational::one())
    }
}

impl Mul<i64> for &CertifiedReal {
    type Output = CertifiedReal;
    fn mul(self, k: i64) -> CertifiedReal {
        self.scale_int(k)
    }
}

/// Certified comparison: refines both values until their enclosures separate,
/// up to `max_precision` bits. Exact values are compared exactly.
/// Equal values always give [`Comparison::UnresolvedAtPrecision`].
pub fn compare(x: &CertifiedReal, y: &CertifiedReal, max_precision: u32) -> Comparison {
    let d = x - y;
    if d.is_rational() {
        return match d.0.constant.cmp(&BigRational::zero()) {
            Ordering::Less => Comparison::Less,
            Ordering::Greater => Comparison::Greater,
            Ordering::Equal => Comparison::UnresolvedAtPrecision,
        };
    }
    let cap = max_precision.max(1);
    let mut prec = 32u32.min(cap);
    loop {
        let m = d.approx(prec);
        if m >= big(2) {
            return Comparison::Greater;
        }
        if m <= big(-2) {
            return Comparison::Less;
        }
        if d.is_exact() {
            return match d.exact_sign() {
                Some(Ordering::Less) => Comparison::Less,
                Some(Ordering::Greater) => Comparison::Greater,
                _ => Comparison::UnresolvedAtPrecision,
            };
        }
        if prec >= cap {
            return Comparison::UnresolvedAtPrecision;
        }
        prec = prec.saturating_mul(2).min(cap);
    }
}

/// Total-order decision used by the interval machinery: `Equal` is returned only
/// when equality is certain (identical normal forms or exact equality).
pub fn order(x: &CertifiedReal, y: &CertifiedReal, cap: u32) -> Result<Ordering, RealError> {
    let d = x - y;
    if d.is_symbolic_zero() {
        return Ok(Ordering::Equal);
    }
    if d.is_exact() {
        return Ok(d.exact_sign().expect("exact"));
    }
    match compare(x, y, cap) {
        Comparison::Less => Ok(Ordering::Less),
        Comparison::Greater => Ok(Ordering::Greater),
        Comparison::UnresolvedAtPrecision => Err(RealError::Unresolved {
            left: x.to_string(),
            right: y.to_string(),
            precision: cap,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_compare() {
        let half = CertifiedReal::ratio(1, 2);
        let third = CertifiedReal::ratio(1, 3);
        for cap in [1, 8, 64, 1024] {
            assert_eq!(compare(&half, &third, cap), Comparison::Greater);
            assert_eq!(compare(&third, &half, cap), Comparison::Less);
        }
    }

    #[test]
    fn sqrt2_minus_one_against_decimal() {
        let x = CertifiedReal::sqrt2_minus_1();
        let y = CertifiedReal::parse("0.41421356").unwrap();
        assert_eq!(compare(&x, &y, 256), Comparison::Greater);
        let z = CertifiedReal::parse("0.41421357").unwrap();
        assert_eq!(compare(&x, &z, 256), Comparison::Less);
    }

    #[test]
    fn self_comparison_is_unresolved() {
        let g = CertifiedReal::golden_conjugate();
        for cap in [8, 64, 512] {
            assert_eq!(compare(&g, &g, cap), Comparison::UnresolvedAtPrecision);
        }
        assert_eq!(order(&g, &g, 64).unwrap(), Ordering::Equal);
    }

    #[test]
    fn approx_within_bound() {
        // sqrt(2) - 1 = 0.41421356237309504880168872...
        let x = CertifiedReal::sqrt2_minus_1();
        let m = x.approx(40);
        let v = m.to_f64().unwrap() / 2f64.powi(40);
        assert!((v - 0.414_213_562_373_095_05).abs() <= 2f64.powi(-40) + 1e-16);
    }

    #[test]
    fn square_factors_share_base() {
        let a = CertifiedReal::quadratic(big(0), big(8), big(2)).unwrap();
        let b = CertifiedReal::quadratic(big(0), big(2), big(1)).unwrap();
        assert_eq!(a, b);
        let c = CertifiedReal::quadratic(big(1), big(9), big(2)).unwrap();
        assert_eq!(c, CertifiedReal::integer(2));
    }

    #[test]
    fn floor_and_frac() {
        let g = CertifiedReal::sqrt2_minus_1();
        let two_g = g.scale_int(2);
        assert_eq!(two_g.floor(256).unwrap(), big(0));
        let three_g = g.scale_int(3);
        assert_eq!(three_g.floor(256).unwrap(), big(1));
        let f = three_g.frac(256).unwrap();
        assert!((f.to_f64() - 0.242_640_687_119_285).abs() < 1e-12);
        assert_eq!((-&g).floor(256).unwrap(), big(-1));
        assert_eq!(CertifiedReal::integer(3).floor(8).unwrap(), big(3));
    }

    #[test]
    fn digit_sums_compare_exactly_beyond_cap() {
        let a = CertifiedReal::digit_sum("a", vec![1, 4, 1000]).unwrap();
        let b = CertifiedReal::digit_sum("b", vec![1, 4, 1001]).unwrap();
        assert_eq!(compare(&a, &b, 64), Comparison::Greater);
        let c = &a - &b;
        assert_eq!(c.exact_sign(), Some(Ordering::Greater));
        let d = CertifiedReal::digit_sum("d", vec![2]).unwrap();
        let quarter = CertifiedReal::ratio(1, 4);
        assert_eq!(order(&d, &quarter, 8).unwrap(), Ordering::Equal);
    }

    #[test]
    fn kinds() {
        assert_eq!(CertifiedReal::ratio(1, 3).kind(), RealKind::Rational);
        assert_eq!(CertifiedReal::sqrt2_minus_1().kind(), RealKind::Quadratic);
        let q = CertifiedReal::digit_sum("0", vec![1, 4]).unwrap();
        assert_eq!(q.kind(), RealKind::QTree);
        assert_eq!(
            (&q + &CertifiedReal::sqrt2_minus_1()).kind(),
            RealKind::Affine
        );
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(CertifiedReal::sqrt2_minus_1().to_decimal(6), "0.414213");
        assert_eq!(CertifiedReal::ratio(1, 2).to_decimal(3), "0.500");
        assert_eq!(CertifiedReal::ratio(-1, 4).to_decimal(2), "-0.25");
    }

    #[test]
    fn parse_forms() {
        assert_eq!(
            CertifiedReal::parse("1/2").unwrap(),
            CertifiedReal::ratio(1, 2)
        );
        assert_eq!(
            CertifiedReal::parse("0.5").unwrap(),
            CertifiedReal::ratio(1, 2)
        );
        assert_eq!(
            CertifiedReal::parse("quad:-1,5,2").unwrap(),
            CertifiedReal::golden_conjugate()
        );
        assert!(CertifiedReal::parse("abc").is_err());
        assert!(CertifiedReal::parse("1/0").is_err());
    }
}
