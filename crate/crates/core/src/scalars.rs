//! Exact scalars: arbitrary-precision rationals, half-integer mode labels and
//! the two scalar series that the vertex-operator calculus needs.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseScalarError {
    #[error("malformed rational literal `{0}`")]
    Rational(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("malformed half-integer literal `{0}` (expected `t/2` or an integer)")]
    HalfInt(String),
}

/// An exact rational number, always kept in lowest terms with a positive
/// denominator. Values whose numerator and denominator fit in `i64` are held
/// inline; larger ones spill to `BigRational`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(i64, i64),
    Big(BigRational),
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

fn reduce_i128(n: i128, d: i128) -> Rational {
    debug_assert!(d != 0);
    let g = n.gcd(&d);
    let (mut n, mut d) = (n / g, d / g);
    if d < 0 {
        n = -n;
        d = -d;
    }
    match (i64::try_from(n), i64::try_from(d)) {
        (Ok(n), Ok(d)) => Rational(Repr::Small(n, d)),
        _ => Rational(Repr::Big(BigRational::new_raw(
            BigInt::from(n),
            BigInt::from(d),
        ))),
    }
}

impl Rational {
    fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(r)),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(Repr::Small(n, 1))
    }

    /// `num / den`, reduced. Panics on a zero denominator.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        reduce_i128(i128::from(num), i128::from(den))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    pub fn abs(&self) -> Self {
        match &self.0 {
            Repr::Small(n, d) => reduce_i128(i128::from(*n).abs(), i128::from(*d)),
            Repr::Big(r) => Rational::from_big(r.abs()),
        }
    }

    /// Panics on zero.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        match &self.0 {
            Repr::Small(n, d) => reduce_i128(i128::from(*d), i128::from(*n)),
            Repr::Big(r) => Rational::from_big(r.recip()),
        }
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                (i128::from(*a) * i128::from(*d)).cmp(&(i128::from(*c) * i128::from(*b)))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl From<HalfInt> for Rational {
    fn from(h: HalfInt) -> Self {
        Rational::new(h.twice(), 2)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || ParseScalarError::Rational(s.to_string());
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (
                n.trim().parse::<BigInt>().map_err(|_| bad())?,
                d.trim().parse::<BigInt>().map_err(|_| bad())?,
            ),
            None => (t.parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
        };
        if den.is_zero() {
            return Err(ParseScalarError::ZeroDenominator(s.to_string()));
        }
        Ok(Rational::from_big(BigRational::new(num, den)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn add_ref(a: &Rational, b: &Rational) -> Rational {
    match (&a.0, &b.0) {
        (Repr::Small(p, q), Repr::Small(r, s)) => {
            let (p, q, r, s) = (
                i128::from(*p),
                i128::from(*q),
                i128::from(*r),
                i128::from(*s),
            );
            if q == s {
                reduce_i128(p + r, q)
            } else {
                reduce_i128(p * s + r * q, q * s)
            }
        }
        _ => Rational::from_big(a.to_big() + b.to_big()),
    }
}

fn sub_ref(a: &Rational, b: &Rational) -> Rational {
    add_ref(a, &-b)
}

fn mul_ref(a: &Rational, b: &Rational) -> Rational {
    match (&a.0, &b.0) {
        (Repr::Small(p, q), Repr::Small(r, s)) => {
            // cross-cancel first so the i128 products stay reduced
            let (p, q, r, s) = (
                i128::from(*p),
                i128::from(*q),
                i128::from(*r),
                i128::from(*s),
            );
            let g1 = p.gcd(&s).max(1);
            let g2 = r.gcd(&q).max(1);
            reduce_i128((p / g1) * (r / g2), (q / g2) * (s / g1))
        }
        _ => Rational::from_big(a.to_big() * b.to_big()),
    }
}

fn div_ref(a: &Rational, b: &Rational) -> Rational {
    mul_ref(a, &b.recip())
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $f:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $f(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                $f(&self, rhs)
            }
        }
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                $f(self, rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);
forward_binop!(Div, div, div_ref);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        *self = add_ref(self, rhs);
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        *self = add_ref(self, &rhs);
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        *self = sub_ref(self, rhs);
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        *self = mul_ref(self, rhs);
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small(n, d) => reduce_i128(-i128::from(*n), i128::from(*d)),
            Repr::Big(r) => Rational::from_big(-r),
        }
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// An element of `(1/2)Z`, stored as twice its value.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }

    /// `k + 1/2`.
    pub const fn half_odd(k: i64) -> Self {
        HalfInt { twice: 2 * k + 1 }
    }

    pub const fn twice(self) -> i64 {
        self.twice
    }

    /// True when the value lies in `Z + 1/2`.
    pub const fn is_half_odd(self) -> bool {
        self.twice.rem_euclid(2) == 1
    }

    /// The integer value, if there is one.
    pub fn as_int(self) -> Option<i64> {
        (!self.is_half_odd()).then_some(self.twice / 2)
    }

    /// `self - 1/2` for a half-odd value, which is always an integer.
    pub fn minus_half(self) -> i64 {
        debug_assert!(self.is_half_odd());
        (self.twice - 1) / 2
    }

    pub const fn abs(self) -> Self {
        HalfInt {
            twice: self.twice.abs(),
        }
    }

    pub fn to_rational(self) -> Rational {
        Rational::from(self)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt {
            twice: self.twice + rhs.twice,
        }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt {
            twice: self.twice - rhs.twice,
        }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", self.twice)
    }
}

impl fmt::Debug for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for HalfInt {
    type Err = ParseScalarError;

    /// Accepts `t/2` literals and plain integers.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || ParseScalarError::HalfInt(s.to_string());
        match t.split_once('/') {
            Some((n, d)) => {
                if d.trim() != "2" {
                    return Err(bad());
                }
                Ok(HalfInt::from_twice(n.trim().parse().map_err(|_| bad())?))
            }
            None => Ok(HalfInt::from_int(t.parse().map_err(|_| bad())?)),
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Coefficient of `x^k` in `(1 - x)^e`, expanded about `x = 0`.
///
/// For negative `e` this is the k-th term of an infinite series.
pub fn binom_series_coeff(e: i64, k: u32) -> Rational {
    // (-1)^k * e(e-1)...(e-k+1) / k!
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..i64::from(k) {
        num *= BigInt::from(-(e - i));
        den *= BigInt::from(i + 1);
    }
    Rational::from_big(BigRational::new(num, den))
}

/// Mode coefficient of the `A(z)A*(w)` contraction `-2zw/(z-w)^3` expanded
/// in `|z| > |w|`, at `z^{-m-1/2} w^{-n-1/2}`.
pub fn contraction_coeff(m: HalfInt, n: HalfInt) -> Rational {
    debug_assert!(m.is_half_odd() && n.is_half_odd());
    if (m + n).twice() != 0 || m.twice() < 0 {
        return Rational::zero();
    }
    anticommutator_scalar(m)
}

/// `-(m^2 - 1/4)`, the value of `{A(m), A*(-m)}`.
pub fn anticommutator_scalar(m: HalfInt) -> Rational {
    let t = m.twice();
    // m^2 - 1/4 = (t^2 - 1)/4
    Rational::new(-(t * t - 1), 4)
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.partial_cmp(&Rational::from_int(*other))
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        *self == Rational::from_int(*other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    #[test]
    fn rational_canonical_form() {
        let r = Rational::new(6, -4);
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(Rational::new(0, -7).to_string(), "0");
        assert_eq!(Rational::new(8, 4).to_string(), "2");
        assert_eq!("-6/4".parse::<Rational>().unwrap(), Rational::new(-3, 2));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn halfint_literals() {
        assert_eq!("11/2".parse::<HalfInt>().unwrap(), h(11));
        assert_eq!("-3/2".parse::<HalfInt>().unwrap(), h(-3));
        assert_eq!("4".parse::<HalfInt>().unwrap(), h(8));
        assert!("1/3".parse::<HalfInt>().is_err());
        assert_eq!(h(-3).to_string(), "-3/2");
        assert!(h(-3).is_half_odd());
        assert!(!h(4).is_half_odd());
        assert_eq!(h(5).minus_half(), 2);
        assert_eq!(h(-3).minus_half(), -2);
    }

    #[test]
    fn binom_finite_and_geometric() {
        assert_eq!(binom_series_coeff(1, 0), 1);
        assert_eq!(binom_series_coeff(1, 1), -1);
        assert_eq!(binom_series_coeff(1, 2), 0);
        for k in 0..20 {
            assert_eq!(binom_series_coeff(-1, k), 1);
        }
    }

    /// Multiply the candidate series for (1-x)^{-3} by (1-x) three times and
    /// check the product is 1 through order 12.
    #[test]
    fn binom_minus_three_is_triangular() {
        let order = 12usize;
        let mut series: Vec<Rational> = (0..=order as u32)
            .map(|k| binom_series_coeff(-3, k))
            .collect();
        for (j, c) in series.iter().enumerate() {
            let j = j as i64;
            assert_eq!(*c, Rational::from_int((j + 2) * (j + 1) / 2));
        }
        for _ in 0..3 {
            let mut next = vec![Rational::zero(); order + 1];
            for k in 0..=order {
                next[k] = series[k].clone();
                if k > 0 {
                    next[k] -= &series[k - 1];
                }
            }
            series = next;
        }
        assert_eq!(series[0], 1);
        assert!(series[1..].iter().all(Rational::is_zero));
    }

    #[test]
    fn contraction_examples() {
        assert_eq!(contraction_coeff(h(3), h(-3)), -2);
        assert_eq!(contraction_coeff(h(1), h(-1)), 0);
        assert_eq!(contraction_coeff(h(-3), h(3)), 0);
        assert_eq!(contraction_coeff(h(5), h(-3)), 0);
    }

    /// Read off the contraction coefficients from -2zw * z^{-3} sum C(j+2,2) (w/z)^j.
    #[test]
    fn contraction_matches_series_expansion() {
        for j in 0..10i64 {
            // -2 C(j+2,2) z^{-j-2} w^{j+1}; z^{-m-1/2} => m = j + 3/2, w^{-n-1/2} => n = -j - 3/2.
            let coeff = Rational::from_int(-2) * binom_series_coeff(-3, j as u32);
            let m = h(2 * j + 3);
            assert_eq!(contraction_coeff(m, -m), coeff);
        }
    }

    fn big(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn wide() -> impl Strategy<Value = (i64, i64)> {
        let num = prop_oneof![-50i64..50, any::<i64>()];
        let den = prop_oneof![1i64..50, 1i64..i64::MAX, i64::MIN..-1];
        (num, den)
    }

    #[test]
    fn small_and_big_forms_agree_at_the_edge() {
        let max = Rational::from_int(i64::MAX);
        let sum = &max + &Rational::one();
        assert_eq!(sum.to_string(), "9223372036854775808");
        assert_eq!(&sum - &Rational::one(), max);
        let min = Rational::from_int(i64::MIN);
        assert_eq!((-&min).to_string(), "9223372036854775808");
        assert_eq!(-(-&min), min);
        let tiny = Rational::new(1, i64::MAX);
        assert_eq!((&tiny * &tiny).recip(), &max * &max);
    }

    proptest! {
        #[test]
        fn arithmetic_matches_bigrational(a in wide(), b in wide()) {
            let (x, y) = (Rational::new(a.0, a.1), Rational::new(b.0, b.1));
            let (bx, by) = (big(a.0, a.1), big(b.0, b.1));
            prop_assert_eq!((&x + &y).to_string(), (Rational::from_big(&bx + &by)).to_string());
            prop_assert_eq!((&x - &y).to_string(), (Rational::from_big(&bx - &by)).to_string());
            prop_assert_eq!((&x * &y).to_string(), (Rational::from_big(&bx * &by)).to_string());
            if b.0 != 0 {
                prop_assert_eq!((&x / &y).to_string(), (Rational::from_big(&bx / &by)).to_string());
            }
            prop_assert_eq!(x.cmp(&y), bx.cmp(&by));
            // canonical representation: equal values compare and hash equal
            prop_assert_eq!(&(&x + &y) - &y, x);
        }

        #[test]
        fn contraction_regions_sum_to_anticommutator(k in -40i64..40) {
            let m = HalfInt::half_odd(k);
            let total = contraction_coeff(m, -m) + contraction_coeff(-m, m);
            prop_assert_eq!(total, anticommutator_scalar(m));
        }

        #[test]
        fn plus_and_minus_one_powers_are_inverse(k in 0u32..30) {
            let conv: Rational = (0..=k)
                .map(|i| binom_series_coeff(1, i) * binom_series_coeff(-1, k - i))
                .sum();
            prop_assert_eq!(conv, Rational::from_int(if k == 0 { 1 } else { 0 }));
        }

        #[test]
        fn rational_display_roundtrip(n in -1000i64..1000, d in 1i64..500) {
            let r = Rational::new(n, d);
            prop_assert_eq!(r.to_string().parse::<Rational>().unwrap(), r);
        }
    }
}
