//! Dense univariate polynomials over exact rationals, exact complex
//! rationals, or floating point.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

pub type Rational = BigRational;
pub type ComplexRational = Complex<BigRational>;

/// Coefficient field for [`Poly`].
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(r: &Rational) -> Self;
    /// `i`, when the field contains it.
    fn imag_unit() -> Option<Self>;
    fn to_c64(&self) -> Complex64;
    fn conj(&self) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn div_int(&self, n: i64) -> Self {
        self.clone() * Self::from_rational(&Rational::new(BigInt::one(), BigInt::from(n)))
    }
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn imag_unit() -> Option<Self> {
        None
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }
    fn conj(&self) -> Self {
        self.clone()
    }
}

impl Scalar for ComplexRational {
    fn from_rational(r: &Rational) -> Self {
        Complex::new(r.clone(), Rational::zero())
    }
    fn imag_unit() -> Option<Self> {
        Some(Complex::new(Rational::zero(), Rational::one()))
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }
    fn imag_unit() -> Option<Self> {
        None
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
    fn conj(&self) -> Self {
        *self
    }
}

impl Scalar for Complex64 {
    fn from_rational(r: &Rational) -> Self {
        Complex64::new(rational_to_f64(r), 0.0)
    }
    fn imag_unit() -> Option<Self> {
        Some(Complex64::new(0.0, 1.0))
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite double (`0.1` becomes `1/10`, not the
/// binary expansion), via its shortest round-trip decimal representation.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    parse_rational(&format!("{x:e}"))
}

/// Parses `p/q`, integers, plain decimals, and `1.5e-3` style literals.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let n = parse_rational(num)?;
        let d = parse_rational(den)?;
        if d.is_zero() {
            return None;
        }
        return Some(n / d);
    }
    let (mantissa, exponent) = match text.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    if !all.chars().all(|ch| ch.is_ascii_digit()) {
        return None;
    }
    let mut value = Rational::from_integer(all.parse::<BigInt>().ok()?);
    let shift = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    for _ in 0..shift.unsigned_abs() {
        value = if shift > 0 { value * &ten } else { value / &ten };
    }
    Some(if negative { -value } else { value })
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Polynomial with ascending coefficients; trailing zeros are trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T: Scalar> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// `u`
    pub fn identity() -> Self {
        Poly::new(vec![T::zero(), T::one()])
    }

    pub fn monomial(degree: usize, c: T) -> Self {
        let mut coeffs = vec![T::zero(); degree + 1];
        coeffs[degree] = c;
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn eval(&self, u: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * u.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * T::from_int(k as i64))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = vec![T::zero()];
        coeffs.extend(self.coeffs.iter().enumerate().map(|(k, c)| c.div_int(k as i64 + 1)));
        Poly::new(coeffs)
    }

    /// `∫_a^b p(u) du`, exact over exact fields.
    pub fn integrate(&self, a: &T, b: &T) -> T {
        let anti = self.antiderivative();
        anti.eval(b) - anti.eval(a)
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    /// Coefficientwise complex conjugate.
    pub fn conj(&self) -> Self {
        Poly::new(self.coeffs.iter().map(Scalar::conj).collect())
    }

    /// `p(α u + β)`
    pub fn compose_affine(&self, alpha: &T, beta: &T) -> Self {
        let lin = Poly::new(vec![beta.clone(), alpha.clone()]);
        self.coeffs.iter().rev().fold(Poly::zero(), |acc, c| &(&acc * &lin) + &Poly::constant(c.clone()))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn to_c64(&self) -> Poly<Complex64> {
        self.map(Scalar::to_c64)
    }
}

impl<T: Scalar> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Scalar> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

/// Binomial coefficient as an integer scalar.
pub fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(coeffs: &[i64]) -> Poly<Rational> {
        Poly::new(coeffs.iter().map(|&c| rat(c, 1)).collect())
    }

    #[test]
    fn arithmetic_and_calculus() {
        let p = q(&[1, 2, 3]);
        assert_eq!(p.derivative(), q(&[2, 6]));
        assert_eq!(&p * &q(&[0, 1]), q(&[0, 1, 2, 3]));
        assert_eq!(p.integrate(&rat(-1, 1), &rat(1, 1)), rat(4, 1));
        assert_eq!((&p - &p).degree(), None);
        assert_eq!(p.compose_affine(&rat(2, 1), &rat(1, 1)), q(&[6, 16, 12]));
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("5/2"), Some(rat(5, 2)));
        assert_eq!(parse_rational("-0.25"), Some(rat(-1, 4)));
        assert_eq!(parse_rational("1.5e-3"), Some(rat(3, 2000)));
        assert_eq!(rational_from_f64(0.1), Some(rat(1, 10)));
        assert_eq!(rational_from_f64(10.0), Some(rat(10, 1)));
        assert_eq!(parse_rational("x"), None);
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 3), 1);
    }
}
