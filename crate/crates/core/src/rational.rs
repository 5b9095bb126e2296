//! Exact rational arithmetic over arbitrary-precision integers.
//!
//! Besides the [`Rational`] type itself this module provides the three
//! primitives the searches are built on: exact n-th root extraction,
//! ordered enumeration of the Farey sequence, and continued-fraction
//! reconstruction of a rational from a floating-point value.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("value {0} outside [0, 1]")]
    OutOfUnitInterval(String),
    #[error("root degree must be at least 1")]
    ZeroDegree,
    #[error("maximum denominator must be at least 1")]
    ZeroMaxDenominator,
    #[error("cannot parse {0:?} as a rational")]
    Parse(String),
}

/// An exact fraction `num/den` kept in lowest terms with `den > 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational {
    num: BigInt,
    den: BigInt,
}

impl Rational {
    /// Builds the normalized fraction `p/q`.
    pub fn new<P: Into<BigInt>, Q: Into<BigInt>>(p: P, q: Q) -> Result<Self, RationalError> {
        let (p, q) = (p.into(), q.into());
        if q.is_zero() {
            return Err(RationalError::ZeroDenominator);
        }
        Ok(Self::reduce(p, q))
    }

    fn reduce(mut num: BigInt, mut den: BigInt) -> Self {
        debug_assert!(!den.is_zero());
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let g = num.gcd(&den);
        if !g.is_one() {
            num /= &g;
            den /= &g;
        }
        Rational { num, den }
    }

    pub fn from_integer<P: Into<BigInt>>(p: P) -> Self {
        Rational {
            num: p.into(),
            den: BigInt::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn abs(&self) -> Self {
        Rational {
            num: self.num.abs(),
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> Result<Self, RationalError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, exp: u32) -> Self {
        // Powers of a reduced fraction stay reduced.
        Rational {
            num: num_traits::pow(self.num.clone(), exp as usize),
            den: num_traits::pow(self.den.clone(), exp as usize),
        }
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        self.num.div_floor(&self.den)
    }

    /// The value reduced into `[0, 1)`.
    pub fn fract(&self) -> Self {
        Rational {
            num: self.num.mod_floor(&self.den),
            den: self.den.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match (self.num.to_f64(), self.den.to_f64()) {
            (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
            _ => {
                // Scale both down until they fit, keeping the leading bits.
                let shift = self.num.bits().max(self.den.bits()).saturating_sub(1000);
                let n = (&self.num >> shift).to_f64().unwrap_or(f64::NAN);
                let d = (&self.den >> shift).to_f64().unwrap_or(f64::NAN);
                n / d
            }
        }
    }

    /// Numerator and denominator as machine integers, if they fit.
    pub fn to_i64_pair(&self) -> Option<(i64, i64)> {
        Some((self.num.to_i64()?, self.den.to_i64()?))
    }
}

impl Default for Rational {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = RationalError;

    /// Accepts `p`, `p/q`, or a finite decimal such as `-1.25`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RationalError::Parse(s.to_string());
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            return Rational::new(p, q);
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let negative = int.starts_with('-');
            let int_part: BigInt = match int {
                "" | "-" | "+" => BigInt::zero(),
                _ => int.parse().map_err(|_| bad())?,
            };
            let scale = num_traits::pow(BigInt::from(10), frac.len());
            let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
            let magnitude = int_part.abs() * &scale + frac_part;
            let num = if negative { -magnitude } else { magnitude };
            return Rational::new(num, scale);
        }
        let p: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Rational::from_integer(p))
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_integer(v)
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        Rational::reduce(
            &self.num * &rhs.den + &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        Rational::reduce(
            &self.num * &rhs.den - &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        Rational::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &Rational {
    type Output = Rational;
    /// Panics on division by zero; use [`Rational::recip`] for a checked path.
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rational::reduce(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                (&self).$m(rhs)
            }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul, Div::div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

/// Floor of the `n`-th root of `value`, by binary search on the integers.
pub fn integer_nth_root(value: &BigUint, n: u32) -> BigUint {
    assert!(n >= 1, "root degree must be at least 1");
    if n == 1 || value.is_zero() || value.is_one() {
        return value.clone();
    }
    // 2^(ceil(bits/n)) is a strict upper bound on the root.
    let mut lo = BigUint::zero();
    let mut hi = BigUint::one() << (value.bits().div_ceil(n as u64) as usize);
    while &lo + 1u32 < hi {
        let mid: BigUint = (&lo + &hi) >> 1;
        if num_traits::pow(mid.clone(), n as usize) <= *value {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// The exact `n`-th root of `value` when it is a perfect power.
pub fn exact_integer_root(value: &BigUint, n: u32) -> Option<BigUint> {
    let root = integer_nth_root(value, n);
    (num_traits::pow(root.clone(), n as usize) == *value).then_some(root)
}

/// Returns `s` in `[0, 1]` with `s^n = r` exactly, or `None` when `r` is not
/// an `n`-th power in the rationals.
pub fn nth_root_exact(r: &Rational, n: u32) -> Result<Option<Rational>, RationalError> {
    if n == 0 {
        return Err(RationalError::ZeroDegree);
    }
    if r.is_negative() || r > &Rational::one() {
        return Err(RationalError::OutOfUnitInterval(r.to_string()));
    }
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    // p/q reduced is an n-th power iff p and q both are.
    let Some(q) = exact_integer_root(den, n) else {
        return Ok(None);
    };
    let Some(p) = exact_integer_root(num, n) else {
        return Ok(None);
    };
    Ok(Some(Rational::reduce(
        BigInt::from_biguint(Sign::Plus, p),
        BigInt::from_biguint(Sign::Plus, q),
    )))
}

/// Iterator over the Farey sequence of order `max_den` as `(p, q)` pairs,
/// driven by the neighbour recurrence.
///
/// The iterator is restartable from any pair of adjacent terms via
/// [`FareyIter::from_neighbors`], which lets callers split the sequence into
/// independent ranges.
#[derive(Debug, Clone)]
pub struct FareyIter {
    left: (u64, u64),
    right: (u64, u64),
    max_den: u64,
    pending_left: bool,
    done: bool,
}

impl FareyIter {
    pub fn new(max_den: u64) -> Result<Self, RationalError> {
        if max_den == 0 {
            return Err(RationalError::ZeroMaxDenominator);
        }
        Ok(Self::from_neighbors((0, 1), (1, max_den), max_den))
    }

    /// Resumes from two adjacent terms `left < right` of the order-`max_den`
    /// sequence; `left` is the first item yielded.
    pub fn from_neighbors(left: (u64, u64), right: (u64, u64), max_den: u64) -> Self {
        debug_assert_eq!(
            right.0 as u128 * left.1 as u128 - left.0 as u128 * right.1 as u128,
            1,
            "not Farey neighbours"
        );
        FareyIter {
            left,
            right,
            max_den,
            pending_left: true,
            done: false,
        }
    }
}

impl Iterator for FareyIter {
    type Item = (u64, u64);

    fn next(&mut self) -> Option<(u64, u64)> {
        if self.done {
            return None;
        }
        if self.pending_left {
            self.pending_left = false;
            if self.left == (1, 1) {
                self.done = true;
            }
            return Some(self.left);
        }
        let current = self.right;
        if current == (1, 1) {
            self.done = true;
            return Some(current);
        }
        let (a, b) = self.left;
        let (c, d) = current;
        let k = (self.max_den + b) / d;
        self.left = current;
        self.right = (k * c - a, k * d - b);
        Some(current)
    }
}

impl std::iter::FusedIterator for FareyIter {}

/// All reduced fractions in `[0, 1]` with denominator at most `max_den`, in
/// increasing order.
pub fn farey_enumerate(max_den: u64) -> Result<Vec<Rational>, RationalError> {
    Ok(FareyIter::new(max_den)?
        .map(|(p, q)| Rational::from_parts_unchecked(p, q))
        .collect())
}

impl Rational {
    /// Builds `p/q` from parts already known to be coprime with `q > 0`.
    pub(crate) fn from_parts_unchecked(p: u64, q: u64) -> Self {
        debug_assert!(q > 0 && p.gcd(&q) == 1);
        Rational {
            num: BigInt::from(p),
            den: BigInt::from(q),
        }
    }
}

/// Exact dyadic value of a finite non-negative float as `(num, den)`.
fn dyadic_parts(x: f64) -> (BigUint, BigUint) {
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    if e >= 0 {
        (BigUint::from(mant) << (e as usize), BigUint::one())
    } else {
        (BigUint::from(mant), BigUint::one() << ((-e) as usize))
    }
}

/// Smallest-denominator continued-fraction convergent `p/q` of `x` with
/// `q <= max_den` and `|x - p/q| <= tol`.
///
/// The expansion runs on the exact binary value of `x`, so no rounding
/// enters the partial quotients.
pub fn rational_reconstruct(x: f64, max_den: u64, tol: f64) -> Option<Rational> {
    if !(0.0..=1.0).contains(&x) || max_den == 0 || tol.is_nan() || tol <= 0.0 {
        return None;
    }
    let (mut num, mut den) = dyadic_parts(x);
    let max_den = BigUint::from(max_den);
    // Convergent recurrence h_k / k_k.
    let (mut h_prev, mut h) = (BigUint::zero(), BigUint::one());
    let (mut k_prev, mut k) = (BigUint::one(), BigUint::zero());
    while !den.is_zero() {
        let (a, rem) = num.div_rem(&den);
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        if k_next > max_den {
            break;
        }
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        let candidate = Rational::reduce(
            BigInt::from_biguint(Sign::Plus, h.clone()),
            BigInt::from_biguint(Sign::Plus, k.clone()),
        );
        if (x - candidate.to_f64()).abs() <= tol {
            return Some(candidate);
        }
        num = std::mem::replace(&mut den, rem);
    }
    None
}
