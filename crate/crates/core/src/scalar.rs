//! Coefficient fields.
//!
//! Everything polynomial in this crate is generic over [`Scalar`]. Exact
//! rationals are used for symbolic checks, `f64`/`f32` and their complex
//! counterparts for numerical work.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Arbitrary precision rational number.
pub type Rational = BigRational;

/// What kind of field a scalar type represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarKind {
    Rational,
    Real,
    Complex,
}

impl ScalarKind {
    pub fn is_exact(self) -> bool {
        self == ScalarKind::Rational
    }

    pub fn name(self) -> &'static str {
        match self {
            ScalarKind::Rational => "rational",
            ScalarKind::Real => "real",
            ScalarKind::Complex => "complex",
        }
    }
}

/// A field usable as the coefficient ring of polynomials and matrices.
pub trait Scalar: Num + Neg<Output = Self> + Clone + Debug + Send + Sync + 'static {
    const KIND: ScalarKind;

    fn from_i64(v: i64) -> Self;

    /// Converts an exact rational. Lossy for floating point types.
    fn from_rational(q: &Rational) -> Self;

    /// Absolute value as an `f64` (modulus for complex types).
    fn magnitude(&self) -> f64;

    fn to_c64(&self) -> Complex64;

    /// Real and imaginary part as JSON values. Rationals are written as
    /// `"p/q"` strings so they round-trip exactly.
    fn to_json_parts(&self) -> (Value, Value);

    fn from_json_parts(re: &Value, im: Option<&Value>) -> Result<Self>;

    /// Compact single-value JSON form used inside matrices.
    fn to_json(&self) -> Value {
        let (re, im) = self.to_json_parts();
        match Self::KIND {
            ScalarKind::Complex => json!({ "re": re, "im": im }),
            _ => re,
        }
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Object(map) => {
                let re = map
                    .get("re")
                    .ok_or_else(|| Error::Parse("complex scalar without \"re\"".into()))?;
                Self::from_json_parts(re, map.get("im"))
            }
            other => Self::from_json_parts(other, None),
        }
    }

    fn is_exact() -> bool {
        Self::KIND.is_exact()
    }

    /// Zero test with an absolute tolerance; exact for rationals.
    fn is_negligible(&self, tol: f64) -> bool {
        if Self::is_exact() {
            self.is_zero()
        } else {
            self.magnitude() <= tol
        }
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Ok(i) = s.parse::<BigInt>() {
        return Ok(Rational::from_integer(i));
    }
    // Decimal literal such as "-1.25" or "3e-2": read it exactly.
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = digits.parse().map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    })
}

fn json_to_rational(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::from_integer(BigInt::from(i)))
            } else {
                parse_rational(&n.to_string())
            }
        }
        other => Err(Error::Parse(format!("expected a number, found {other}"))),
    }
}

fn json_to_f64(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| Error::Parse(format!("number out of range: {n}"))),
        Value::String(s) => {
            if let Ok(x) = s.trim().parse::<f64>() {
                Ok(x)
            } else {
                parse_rational(s)?
                    .to_f64()
                    .ok_or_else(|| Error::Parse(format!("number out of range: {s}")))
            }
        }
        other => Err(Error::Parse(format!("expected a number, found {other}"))),
    }
}

fn rational_to_json(q: &Rational) -> Value {
    if q.is_integer() {
        Value::String(q.numer().to_string())
    } else {
        Value::String(format!("{}/{}", q.numer(), q.denom()))
    }
}

fn f64_to_json(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

fn require_real(im: Option<&Value>) -> Result<()> {
    match im {
        None | Some(Value::Null) => Ok(()),
        Some(v) => {
            if json_to_f64(v)? == 0.0 {
                Ok(())
            } else {
                Err(Error::Parse("nonzero imaginary part for a real scalar".into()))
            }
        }
    }
}

impl Scalar for Rational {
    const KIND: ScalarKind = ScalarKind::Rational;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn to_json_parts(&self) -> (Value, Value) {
        (rational_to_json(self), Value::String("0".into()))
    }

    fn from_json_parts(re: &Value, im: Option<&Value>) -> Result<Self> {
        if let Some(im) = im {
            if !matches!(im, Value::Null) && !json_to_rational(im)?.is_zero() {
                return Err(Error::Parse("nonzero imaginary part for a rational scalar".into()));
            }
        }
        json_to_rational(re)
    }
}

macro_rules! real_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const KIND: ScalarKind = ScalarKind::Real;

            fn from_i64(v: i64) -> Self {
                v as $t
            }

            fn from_rational(q: &Rational) -> Self {
                q.to_f64().unwrap_or(f64::NAN) as $t
            }

            fn magnitude(&self) -> f64 {
                self.abs() as f64
            }

            fn to_c64(&self) -> Complex64 {
                Complex64::new(*self as f64, 0.0)
            }

            fn to_json_parts(&self) -> (Value, Value) {
                (f64_to_json(*self as f64), f64_to_json(0.0))
            }

            fn from_json_parts(re: &Value, im: Option<&Value>) -> Result<Self> {
                require_real(im)?;
                Ok(json_to_f64(re)? as $t)
            }
        }
    };
}

real_scalar!(f64);
real_scalar!(f32);

macro_rules! complex_scalar {
    ($t:ty) => {
        impl Scalar for Complex<$t> {
            const KIND: ScalarKind = ScalarKind::Complex;

            fn from_i64(v: i64) -> Self {
                Complex::new(v as $t, 0.0)
            }

            fn from_rational(q: &Rational) -> Self {
                Complex::new(q.to_f64().unwrap_or(f64::NAN) as $t, 0.0)
            }

            fn magnitude(&self) -> f64 {
                self.norm() as f64
            }

            fn to_c64(&self) -> Complex64 {
                Complex64::new(self.re as f64, self.im as f64)
            }

            fn to_json_parts(&self) -> (Value, Value) {
                (f64_to_json(self.re as f64), f64_to_json(self.im as f64))
            }

            fn from_json_parts(re: &Value, im: Option<&Value>) -> Result<Self> {
                let re = json_to_f64(re)?;
                let im = match im {
                    None | Some(Value::Null) => 0.0,
                    Some(v) => json_to_f64(v)?,
                };
                Ok(Complex::new(re as $t, im as $t))
            }
        }
    };
}

complex_scalar!(f64);
complex_scalar!(f32);

/// Converts between scalar kinds through the widest common representation.
pub trait ScalarCast<T: Scalar> {
    fn cast(&self) -> T;
}

impl<T: Scalar> ScalarCast<T> for Rational {
    fn cast(&self) -> T {
        T::from_rational(self)
    }
}

impl ScalarCast<Complex64> for f64 {
    fn cast(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
}

impl ScalarCast<f64> for f64 {
    fn cast(&self) -> f64 {
        *self
    }
}

impl ScalarCast<Complex64> for Complex64 {
    fn cast(&self) -> Complex64 {
        *self
    }
}

/// `(-1)^k` in any scalar type.
pub fn sign<S: Scalar>(k: usize) -> S {
    if k.is_multiple_of(2) {
        S::one()
    } else {
        -S::one()
    }
}

/// Small helper: build a rational `p/q` from machine integers.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Integer as rational.
pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}
