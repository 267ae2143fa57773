//! Dual-mode numbers.
//!
//! A [`Scalar`] is either an exact arbitrary-precision rational or a plain
//! `f64`. Arithmetic between two exact values stays exact; as soon as a float
//! is involved the result is a float. Comparisons that must tolerate rounding
//! go through a [`Tolerance`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default relative tolerance for float-mode comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Structural equality: an exact value never equals a float. Use
/// [`Tolerance::eq`] for numeric comparison.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarParseError {
    #[error("empty value")]
    Empty,
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("cannot parse {0:?} as a number")]
    Syntax(String),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(BigRational::one())
    }

    pub fn int(v: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn float(v: f64) -> Self {
        Scalar::Float(v)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => rational_to_f64(r),
            Scalar::Float(f) => *f,
        }
    }

    /// Text that parses back to exactly this value. Unlike `Display`, floats
    /// keep every digit.
    pub fn to_lossless_string(&self) -> String {
        match self {
            Scalar::Exact(_) => self.to_string(),
            Scalar::Float(x) => format!("{x:?}"),
        }
    }

    /// The same value in float representation.
    pub fn to_float(&self) -> Scalar {
        Scalar::Float(self.to_f64())
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Float(f) => Scalar::Float(f.abs()),
        }
    }

    /// Exact structural zero test; floats compare against `0.0` literally.
    pub fn is_literal_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(f) => *f == 0.0,
        }
    }

    pub fn recip(&self) -> Scalar {
        Scalar::one() / self
    }

    pub fn sqrt_f64(&self) -> Scalar {
        Scalar::Float(self.to_f64().sqrt())
    }

    pub fn pow(&self, mut exp: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Parses an integer (`"-5"`), a rational (`"-1/5"`) or a decimal
    /// (`"-0.809"`, `"1e-3"`). Decimals become floats.
    pub fn parse(s: &str) -> Result<Scalar, ScalarParseError> {
        parse_impl(s, false)
    }

    /// Like [`Scalar::parse`] but decimals are converted exactly, so
    /// `"0.25"` becomes `1/4`.
    pub fn parse_exact(s: &str) -> Result<Scalar, ScalarParseError> {
        parse_impl(s, true)
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(f) = r.to_f64() {
        return f;
    }
    // Very large numerators/denominators: scale down by bit length first.
    let n = r.numer();
    let d = r.denom();
    let shift = n.bits().max(d.bits()).saturating_sub(1000);
    let n = (n >> shift as usize).to_f64().unwrap_or(f64::NAN);
    let d = (d >> shift as usize).to_f64().unwrap_or(f64::NAN);
    n / d
}

fn normalize_minus(s: &str) -> String {
    s.trim().replace('\u{2212}', "-")
}

fn parse_int(s: &str) -> Option<BigInt> {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s.strip_prefix('+').unwrap_or(s)).ok()
}

fn parse_decimal_exact(s: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((a, b)) => (a, b),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num = BigInt::from_str(&digits).ok()?;
    if neg {
        num = -num;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Some(r)
}

fn parse_impl(raw: &str, exact_decimals: bool) -> Result<Scalar, ScalarParseError> {
    let s = normalize_minus(raw);
    if s.is_empty() {
        return Err(ScalarParseError::Empty);
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_int(n.trim()).ok_or_else(|| ScalarParseError::Syntax(raw.to_string()))?;
        let d = parse_int(d.trim()).ok_or_else(|| ScalarParseError::Syntax(raw.to_string()))?;
        if d.is_zero() {
            return Err(ScalarParseError::ZeroDenominator(raw.to_string()));
        }
        return Ok(Scalar::Exact(BigRational::new(n, d)));
    }
    if let Some(i) = parse_int(&s) {
        return Ok(Scalar::Exact(BigRational::from_integer(i)));
    }
    if exact_decimals {
        return parse_decimal_exact(&s)
            .map(Scalar::Exact)
            .ok_or_else(|| ScalarParseError::Syntax(raw.to_string()));
    }
    match s.parse::<f64>() {
        Ok(f) if f.is_finite() && parse_decimal_exact(&s).is_some() => Ok(Scalar::Float(f)),
        _ => Err(ScalarParseError::Syntax(raw.to_string())),
    }
}

impl FromStr for Scalar {
    type Err = ScalarParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scalar::parse(s)
    }
}

/// Formats like C's `%.12g`.
fn format_float(f: f64) -> String {
    if f == 0.0 {
        return "0".to_string();
    }
    if !f.is_finite() {
        return f.to_string();
    }
    const SIG: i32 = 12;
    let sci = format!("{:.*e}", (SIG - 1) as usize, f);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-5..SIG).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (SIG - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, f)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Float(x) => f.write_str(&format_float(*x)),
        }
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::int(v)
    }
}

impl From<BigRational> for Scalar {
    fn from(v: BigRational) -> Self {
        Scalar::Exact(v)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;

            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    (a, b) => Scalar::Float(a.to_f64() $op b.to_f64()),
                }
            }
        }

        impl $trait<Scalar> for Scalar {
            type Output = Scalar;

            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }

        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;

            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }

        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;

            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;

    fn div(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                assert!(!b.is_zero(), "division by exact zero");
                Scalar::Exact(a / b)
            }
            (a, b) => Scalar::Float(a.to_f64() / b.to_f64()),
        }
    }
}

impl Div<Scalar> for Scalar {
    type Output = Scalar;

    fn div(self, rhs: Scalar) -> Scalar {
        &self / &rhs
    }
}

impl Div<&Scalar> for Scalar {
    type Output = Scalar;

    fn div(self, rhs: &Scalar) -> Scalar {
        &self / rhs
    }
}

impl Div<Scalar> for &Scalar {
    type Output = Scalar;

    fn div(self, rhs: Scalar) -> Scalar {
        self / &rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(f) => Scalar::Float(-f),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(f) => Scalar::Float(-f),
        }
    }
}

/// Relative tolerance used for every comparison involving a float.
///
/// Two values are equal when `|a − b| ≤ ε·max(1, |a|, |b|)`. Exact operands
/// compare exactly regardless of ε.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance(pub f64);

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance(DEFAULT_TOLERANCE)
    }
}

impl Tolerance {
    pub fn eps(&self) -> f64 {
        self.0
    }

    pub fn cmp(&self, a: &Scalar, b: &Scalar) -> Ordering {
        match (a, b) {
            (Scalar::Exact(x), Scalar::Exact(y)) => x.cmp(y),
            _ => {
                let (x, y) = (a.to_f64(), b.to_f64());
                let scale = 1f64.max(x.abs()).max(y.abs());
                if (x - y).abs() <= self.0 * scale {
                    Ordering::Equal
                } else if x < y {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }

    pub fn sign(&self, a: &Scalar) -> Ordering {
        match a {
            Scalar::Exact(x) => {
                if x.is_zero() {
                    Ordering::Equal
                } else if x.is_positive() {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
            Scalar::Float(x) => {
                if x.abs() <= self.0 {
                    Ordering::Equal
                } else if *x > 0.0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
        }
    }

    pub fn eq(&self, a: &Scalar, b: &Scalar) -> bool {
        self.cmp(a, b) == Ordering::Equal
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        self.sign(a) == Ordering::Equal
    }

    pub fn is_positive(&self, a: &Scalar) -> bool {
        self.sign(a) == Ordering::Greater
    }

    pub fn is_negative(&self, a: &Scalar) -> bool {
        self.sign(a) == Ordering::Less
    }

    pub fn vec_eq(&self, a: &[Scalar], b: &[Scalar]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| self.eq(x, y))
    }
}
