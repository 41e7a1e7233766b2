//! Dual-representation reals: exact rationals or binary64.

use alloc::format;
use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_integer::Roots;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::Ratio<i128>;

/// Equality tolerance on the floating path.
pub const FLOAT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Float(f64),
}

pub fn rat(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

pub(crate) fn checked_add(a: &Rational, b: &Rational) -> Result<Rational> {
    a.checked_add(b).ok_or(Error::Overflow)
}

pub(crate) fn checked_mul(a: &Rational, b: &Rational) -> Result<Rational> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

/// `r - floor(r)`, in `[0, 1)`.
pub fn frac_rational(r: &Rational) -> Rational {
    let n = r.numer().rem_euclid(*r.denom());
    Rational::new(n, *r.denom())
}

pub fn frac_f64(x: f64) -> f64 {
    let f = x - libm::floor(x);
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// Exact square root when `r` is the square of a rational.
pub fn sqrt_rational(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (*r.numer(), *r.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (sn * sn == n && sd * sd == d).then(|| Rational::new(sn, sd))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

impl Scalar {
    pub const ZERO: Scalar = Scalar::Exact(Rational::new_raw(0, 1));

    pub fn from_int(v: i64) -> Self {
        Scalar::Exact(Rational::from_integer(v as i128))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn exact(&self) -> Option<Rational> {
        match self {
            Scalar::Exact(r) => Some(*r),
            Scalar::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => rational_to_f64(r),
            Scalar::Float(x) => *x,
        }
    }

    /// Zero test: exact on the rational path, `|x| <= FLOAT_TOL` otherwise.
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => x.abs() <= FLOAT_TOL,
        }
    }

    /// Reduction mod 1 into `[0, 1)`.
    pub fn frac(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(frac_rational(r)),
            Scalar::Float(x) => Scalar::Float(frac_f64(*x)),
        }
    }

    pub fn try_add(&self, o: &Scalar) -> Result<Scalar> {
        Ok(match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(checked_add(a, b)?),
            _ => Scalar::Float(self.to_f64() + o.to_f64()),
        })
    }

    pub fn try_sub(&self, o: &Scalar) -> Result<Scalar> {
        Ok(match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.checked_sub(b).ok_or(Error::Overflow)?),
            _ => Scalar::Float(self.to_f64() - o.to_f64()),
        })
    }

    pub fn try_mul(&self, o: &Scalar) -> Result<Scalar> {
        Ok(match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(checked_mul(a, b)?),
            _ => Scalar::Float(self.to_f64() * o.to_f64()),
        })
    }

    pub fn try_mul_int(&self, k: i64) -> Result<Scalar> {
        self.try_mul(&Scalar::from_int(k))
    }

    /// `min(t, 1 - t)` for `t` in `[0, 1)`: distance to the nearest integer.
    pub fn nearest_int_distance(&self) -> Scalar {
        match self.frac() {
            Scalar::Exact(t) => {
                let u = Rational::from_integer(1) - t;
                Scalar::Exact(if u < t { u } else { t })
            }
            Scalar::Float(t) => Scalar::Float(t.min(1.0 - t)),
        }
    }

    /// Exact comparison on the rational path, numeric comparison otherwise.
    pub fn cmp_value(&self, o: &Scalar) -> Ordering {
        match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            _ => self.to_f64().partial_cmp(&o.to_f64()).unwrap_or(Ordering::Equal),
        }
    }

    pub fn sqrt(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => match sqrt_rational(r) {
                Some(s) => Scalar::Exact(s),
                None => Scalar::Float(libm::sqrt(rational_to_f64(r))),
            },
            Scalar::Float(x) => Scalar::Float(libm::sqrt(*x)),
        }
    }

    /// Parses `"p/q"`, an integer, or a decimal float. Fractions and
    /// integers are exact; anything else is binary64.
    pub fn parse(s: &str) -> Result<Scalar> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: i128 = n.trim().parse().map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
            let d: i128 = d.trim().parse().map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
            if d == 0 {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            return Ok(Scalar::Exact(Rational::new(n, d)));
        }
        if let Ok(n) = s.parse::<i128>() {
            return Ok(Scalar::Exact(Rational::from_integer(n)));
        }
        match s.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(Scalar::Float(x)),
            _ => Err(Error::Parse(format!("not a number: {s:?}"))),
        }
    }
}

/// `"p/q"` in lowest terms with the sign on the numerator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => f.write_str(&format_rational(r)),
            // Debug formatting of f64 is the shortest round-trip form.
            Scalar::Float(x) => write!(f, "{x:?}"),
        }
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Exact(r)
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Float(x)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        self.try_add(&o).expect("rational overflow")
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        self.try_sub(&o).expect("rational overflow")
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        self.try_mul(&o).expect("rational overflow")
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }
}
