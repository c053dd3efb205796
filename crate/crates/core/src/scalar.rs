//! Exact scalars: arbitrary-precision rationals, signed square roots of
//! rationals ("surds"), and the small fixed-denominator label types used for
//! isospin (halves) and hypercharge (thirds).
//!
//! Every Clebsch-Gordan coefficient and every isoscalar factor that has a
//! closed form is a single surd `±√(n/d)`.  Surds multiply freely, but two
//! surds can only be added exactly when their radicands differ by a rational
//! square factor; anything else is reported as [`ScalarError::IncompatibleRadicands`].

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
#[allow(unused_imports)] // float methods come from here when std is absent
use num_traits::Float;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Errors raised by exact scalar arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    /// The two surds have radicands whose ratio is not a rational square, so
    /// their sum is not itself a single surd.
    #[error("incompatible radicands {left} and {right}: the sum is not a single surd")]
    IncompatibleRadicands {
        /// Radicand of the left operand.
        left: String,
        /// Radicand of the right operand.
        right: String,
    },
    /// A surd was constructed from a negative radicand.
    #[error("negative radicand {0}")]
    NegativeRadicand(String),
    /// Division by an exact zero.
    #[error("division by zero")]
    DivisionByZero,
}

/// Build the rational `n / d`.
///
/// # Panics
/// Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Build the integer rational `n`.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// Exact square root of a rational, if it is a perfect rational square.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer();
    let d = r.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(Rational::new(sn, sd))
    } else {
        None
    }
}

/// Nearest `f64` to a rational (correctly rounded for moderate magnitudes).
pub fn rational_to_f64(r: &Rational) -> f64 {
    // Scale so the integer quotient carries well over 53 significant bits,
    // then let the big-integer conversion (round-to-odd + ties-to-even) round.
    if r.is_zero() {
        return 0.0;
    }
    let n = r.numer().magnitude();
    let d = r.denom().magnitude();
    let shift = 128i64 - (n.bits() as i64 - d.bits() as i64);
    let (q, rem) = if shift >= 0 {
        (n << (shift as usize)).div_rem(d)
    } else {
        n.div_rem(&(d << ((-shift) as usize)))
    };
    let q = (q << 1usize) + if rem.is_zero() { 0u32 } else { 1u32 };
    let mag = q.to_f64().unwrap_or(f64::INFINITY) * pow2(-(shift + 1));
    if r.is_negative() {
        -mag
    } else {
        mag
    }
}

/// Exact power of two as `f64` (saturating to 0 / infinity at the extremes).
fn pow2(e: i64) -> f64 {
    let e = e.clamp(-1074, 1023) as i32;
    if e >= -1022 {
        f64::from_bits(((e + 1023) as u64) << 52)
    } else {
        f64::from_bits(1u64 << (e + 1074))
    }
}

/// A signed square root of a non-negative rational: `sign · √radicand`.
///
/// The representation is canonical: the radicand is reduced (as every
/// [`Rational`] is), it equals the square of the value, and the sign is `0`
/// exactly when the radicand is `0`.  Two surds are therefore equal as numbers
/// if and only if they are equal as values of this type.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurdValue {
    sign: i8,
    radicand: Rational,
}

impl Default for SurdValue {
    fn default() -> Self {
        Self::zero()
    }
}

impl SurdValue {
    /// The exact zero.
    pub fn zero() -> Self {
        Self {
            sign: 0,
            radicand: Rational::zero(),
        }
    }

    /// The exact one.
    pub fn one() -> Self {
        Self {
            sign: 1,
            radicand: Rational::one(),
        }
    }

    /// `sign · √radicand`; a zero radicand forces a zero sign.
    pub fn new(sign: i8, radicand: Rational) -> Result<Self, ScalarError> {
        if radicand.is_negative() {
            return Err(ScalarError::NegativeRadicand(alloc::format!("{radicand}")));
        }
        if radicand.is_zero() || sign == 0 {
            return Ok(Self::zero());
        }
        Ok(Self {
            sign: sign.signum(),
            radicand,
        })
    }

    /// The non-negative square root `+√r` of a non-negative rational.
    pub fn sqrt(r: Rational) -> Result<Self, ScalarError> {
        Self::new(1, r)
    }

    /// The value whose square is `|s|` and whose sign is the sign of `s`.
    pub fn from_signed_square(s: Rational) -> Self {
        let sign = if s.is_zero() {
            0
        } else if s.is_negative() {
            -1
        } else {
            1
        };
        Self {
            sign,
            radicand: s.abs(),
        }
    }

    /// The rational `r` viewed as a surd.
    pub fn from_rational(r: &Rational) -> Self {
        let sign = if r.is_zero() {
            0
        } else if r.is_negative() {
            -1
        } else {
            1
        };
        Self {
            sign,
            radicand: r * r,
        }
    }

    /// The integer `n` viewed as a surd.
    pub fn from_int(n: i64) -> Self {
        Self::from_rational(&int(n))
    }

    /// Sign: `-1`, `0` or `+1`.
    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// The radicand, i.e. the square of the value.
    pub fn radicand(&self) -> &Rational {
        &self.radicand
    }

    /// The square of the value carrying the value's sign (`sign · radicand`).
    pub fn signed_square(&self) -> Rational {
        match self.sign {
            -1 => -self.radicand.clone(),
            0 => Rational::zero(),
            _ => self.radicand.clone(),
        }
    }

    /// `true` for the exact zero.
    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// The value as a rational, when the radicand is a perfect square.
    pub fn to_rational(&self) -> Option<Rational> {
        rational_sqrt(&self.radicand).map(|r| if self.sign < 0 { -r } else { r })
    }

    /// Multiplicative inverse.
    pub fn recip(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self {
            sign: self.sign,
            radicand: self.radicand.recip(),
        })
    }

    /// Exact quotient `self / rhs`.
    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        Ok(surd_mul(self, &rhs.recip()?))
    }

    /// Absolute value.
    pub fn abs(&self) -> Self {
        Self {
            sign: self.sign.abs(),
            radicand: self.radicand.clone(),
        }
    }

    /// Nearest double to the value.
    pub fn to_f64(&self) -> f64 {
        surd_to_float(self)
    }

    /// Human-readable form such as `-√(3/10)`, `1/2` or `0`.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let s = if self.sign < 0 { "-" } else { "" };
        match rational_sqrt(&self.radicand) {
            Some(r) => alloc::format!("{s}{r}"),
            None => alloc::format!("{s}√({})", self.radicand),
        }
    }
}

impl fmt::Display for SurdValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

impl PartialOrd for SurdValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SurdValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.signed_square().cmp(&other.signed_square())
    }
}

impl Neg for SurdValue {
    type Output = SurdValue;
    fn neg(self) -> SurdValue {
        SurdValue {
            sign: -self.sign,
            radicand: self.radicand,
        }
    }
}

impl Neg for &SurdValue {
    type Output = SurdValue;
    fn neg(self) -> SurdValue {
        -self.clone()
    }
}

impl Mul for &SurdValue {
    type Output = SurdValue;
    fn mul(self, rhs: &SurdValue) -> SurdValue {
        surd_mul(self, rhs)
    }
}

impl Mul for SurdValue {
    type Output = SurdValue;
    fn mul(self, rhs: SurdValue) -> SurdValue {
        surd_mul(&self, &rhs)
    }
}

/// Exact product of two surds.
pub fn surd_mul(a: &SurdValue, b: &SurdValue) -> SurdValue {
    if a.is_zero() || b.is_zero() {
        return SurdValue::zero();
    }
    SurdValue {
        sign: a.sign * b.sign,
        radicand: &a.radicand * &b.radicand,
    }
}

/// Exact sum of two surds.
///
/// Succeeds when either operand is zero or when the radicands differ by a
/// rational square factor; otherwise the sum is not a single surd and
/// [`ScalarError::IncompatibleRadicands`] is returned.
pub fn surd_add(a: &SurdValue, b: &SurdValue) -> Result<SurdValue, ScalarError> {
    if a.is_zero() {
        return Ok(b.clone());
    }
    if b.is_zero() {
        return Ok(a.clone());
    }
    // a = sa·√ra = sa·q·√rb with q = √(ra/rb) rational.
    let ratio = &a.radicand / &b.radicand;
    let q = rational_sqrt(&ratio).ok_or_else(|| ScalarError::IncompatibleRadicands {
        left: alloc::format!("{}", a.radicand),
        right: alloc::format!("{}", b.radicand),
    })?;
    let coeff = if a.sign < 0 { -q } else { q } + int(b.sign as i64);
    let sign = if coeff.is_zero() {
        0
    } else if coeff.is_negative() {
        -1
    } else {
        1
    };
    SurdValue::new(sign, &coeff * &coeff * &b.radicand)
}

/// Exact difference of two surds; see [`surd_add`].
pub fn surd_sub(a: &SurdValue, b: &SurdValue) -> Result<SurdValue, ScalarError> {
    surd_add(a, &-b)
}

/// Sum of many surds, exact when all radicands are mutually compatible.
pub fn surd_sum<'a, I: IntoIterator<Item = &'a SurdValue>>(
    items: I,
) -> Result<SurdValue, ScalarError> {
    items
        .into_iter()
        .try_fold(SurdValue::zero(), |acc, x| surd_add(&acc, x))
}

/// Correctly rounded double nearest to `sign · √(n/d)`.
pub fn surd_to_float(a: &SurdValue) -> f64 {
    if a.is_zero() {
        return 0.0;
    }
    let n = a.radicand.numer().magnitude();
    let d = a.radicand.denom().magnitude();
    // Choose an even shift 2k so that isqrt(n·4^k / d) has at least 64 bits.
    let target_bits = 2 * 66i64;
    let mut k = (target_bits - (n.bits() as i64 - d.bits() as i64)) / 2;
    if k < 0 {
        k = 0;
    }
    let scaled = n << (2 * k as usize);
    let (quot, rem) = scaled.div_rem(d);
    let s = quot.sqrt();
    let exact = rem.is_zero() && &s * &s == quot;
    // Round-to-odd sticky bit keeps the final ties-to-even rounding correct.
    let s2 = (s << 1usize) + if exact { 0u32 } else { 1u32 };
    let mag = s2.to_f64().unwrap_or(f64::INFINITY) * pow2(-(k + 1));
    if a.sign < 0 {
        -mag
    } else {
        mag
    }
}

/// Rational approximation of `x` with denominator at most `max_den`
/// (best approximation from the continued-fraction convergents).
pub fn rational_approx(x: f64, max_den: u64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let neg = x < 0.0;
    let mut v = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0u128, 1u128, 1u128, 0u128);
    for _ in 0..64 {
        let a = v.floor();
        if a > 1e18 {
            break;
        }
        let ai = a as u128;
        let p2 = ai * p1 + p0;
        let q2 = ai * q1 + q0;
        if q2 > max_den as u128 {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = v - a;
        if frac < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    let r = Rational::new(BigInt::from(p1), BigInt::from(q1));
    Some(if neg { -r } else { r })
}

/// Recover an exact surd from a float whose square is (to within `tol`) a
/// rational with denominator at most `max_den`.
pub fn reconstruct_surd(x: f64, max_den: u64, tol: f64) -> Option<SurdValue> {
    if x.abs() < tol {
        return Some(SurdValue::zero());
    }
    let sq = rational_approx(x * x, max_den)?;
    if (rational_to_f64(&sq) - x * x).abs() > tol {
        return None;
    }
    let sign = if x < 0.0 { -1 } else { 1 };
    SurdValue::new(sign, sq).ok()
}

/// Reconstruct a whole unit-norm vector of surds from floats and confirm the
/// reconstruction exactly: the squares must sum to exactly one.
pub fn reconstruct_unit_vector(values: &[f64]) -> Option<Vec<SurdValue>> {
    let surds: Vec<SurdValue> = values
        .iter()
        .map(|&v| reconstruct_surd(v, RECONSTRUCT_MAX_DEN, RECONSTRUCT_TOL))
        .collect::<Option<_>>()?;
    let norm: Rational = surds.iter().map(|s| s.radicand().clone()).sum();
    if norm.is_one() {
        Some(surds)
    } else {
        None
    }
}

/// Largest denominator tried when reconstructing exact values from floats.
pub const RECONSTRUCT_MAX_DEN: u64 = 1 << 40;
/// Tolerance on the square of a value when reconstructing it exactly.
pub const RECONSTRUCT_TOL: f64 = 1e-10;

macro_rules! small_fraction {
    ($name:ident, $den:expr, $doc:expr) => {
        #[doc = $doc]
        ///
        /// Stored as the integer numerator over a fixed denominator, so
        /// arithmetic and comparisons are exact and cheap.
        #[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
        pub struct $name(pub i32);

        impl $name {
            /// Fixed denominator of this label type.
            pub const DEN: i32 = $den;
            /// Zero.
            pub const ZERO: Self = Self(0);

            /// The value `n` (an integer).
            pub const fn from_int(n: i32) -> Self {
                Self(n * $den)
            }

            /// Numerator over the fixed denominator.
            pub const fn num(self) -> i32 {
                self.0
            }

            /// Value as a double.
            pub fn to_f64(self) -> f64 {
                self.0 as f64 / $den as f64
            }

            /// Value as an exact rational.
            pub fn to_rational(self) -> Rational {
                rat(self.0 as i64, $den)
            }

            /// Convert an exact rational, if its denominator divides the fixed one.
            pub fn from_rational(r: &Rational) -> Option<Self> {
                let scaled = r * int($den);
                if scaled.is_integer() {
                    scaled.to_integer().to_i32().map(Self)
                } else {
                    None
                }
            }

            /// `true` when the value is an integer.
            pub fn is_integer(self) -> bool {
                self.0 % $den == 0
            }

            /// Absolute value.
            pub fn abs(self) -> Self {
                Self(self.0.abs())
            }
        }

        impl Add for $name {
            type Output = Self;
            fn add(self, rhs: Self) -> Self {
                Self(self.0 + rhs.0)
            }
        }

        impl Sub for $name {
            type Output = Self;
            fn sub(self, rhs: Self) -> Self {
                Self(self.0 - rhs.0)
            }
        }

        impl Neg for $name {
            type Output = Self;
            fn neg(self) -> Self {
                Self(-self.0)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let g = self.0.gcd(&$den);
                let (n, d) = (self.0 / g, $den / g);
                if d == 1 {
                    write!(f, "{n}")
                } else {
                    write!(f, "{n}/{d}")
                }
            }
        }
    };
}

small_fraction!(Half, 2, "A multiple of one half (isospin labels `i`, `i3`, `j`, `k`, `m`).");
small_fraction!(Third, 3, "A multiple of one third (hypercharge labels `y`, `μ`).");

impl Half {
    /// One half.
    pub const HALF: Half = Half(1);
}

impl Third {
    /// One (the hypercharge step of the K and L ladders).
    pub const ONE: Third = Third(3);
}

/// `(-1)^e` for an exponent that must be an integer, given as a numerator
/// over `den`.
///
/// # Panics
/// Panics if the exponent is not an integer.
pub fn parity_sign(numerator: i64, den: i64) -> i8 {
    assert!(
        numerator % den == 0,
        "non-integral phase exponent {numerator}/{den}"
    );
    if (numerator / den).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Big integer to a rational.
pub fn from_biguint(n: BigUint) -> Rational {
    Rational::from_integer(BigInt::from_biguint(Sign::Plus, n))
}
