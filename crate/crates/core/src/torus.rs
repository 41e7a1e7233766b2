//! The k-torus, the linear maps Z^d -> T^1 and Z^d -> T^d attached to a
//! frequency vector, and the Euclidean distance to 0 on T^k.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};
use crate::point::{check_dim, Point};
use crate::scalar::{Rational, Scalar};

/// Which torus the rotation lives on: `T^1` (inner product) or `T^d`
/// (coordinatewise product).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TorusKind {
    One,
    Full,
}

impl TorusKind {
    pub fn label(&self) -> &'static str {
        match self {
            TorusKind::One => "1",
            TorusKind::Full => "d",
        }
    }
}

/// Frequency vector in R^d.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaVector(Vec<Scalar>);

impl ThetaVector {
    pub fn new(components: Vec<Scalar>) -> Result<Self> {
        check_dim(components.len())?;
        Ok(ThetaVector(components))
    }

    pub fn from_rationals(rs: &[Rational]) -> Result<Self> {
        Self::new(rs.iter().map(|r| Scalar::Exact(*r)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        ThetaVector(alloc::vec![Scalar::ZERO; dim])
    }

    /// Parses a comma-separated list of scalars, e.g. `"1/3, 1/2"`.
    pub fn parse(s: &str) -> Result<Self> {
        let comps = s.split(',').map(Scalar::parse).collect::<Result<Vec<_>>>()?;
        Self::new(comps)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[Scalar] {
        &self.0
    }

    pub fn is_exact(&self) -> bool {
        self.0.iter().all(Scalar::is_exact)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.frac().is_zero())
    }

    /// Largest denominator over exact components; `None` on the float path.
    pub fn max_denominator(&self) -> Option<i128> {
        self.0.iter().map(|c| c.exact().map(|r| *r.denom())).try_fold(1i128, |acc, d| d.map(|d| acc.max(d)))
    }

    pub fn reduced(&self) -> ThetaVector {
        ThetaVector(self.0.iter().map(Scalar::frac).collect())
    }

    fn check(&self, p: &Point) -> Result<()> {
        if self.dim() == p.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim(), found: p.dim() })
        }
    }
}

impl fmt::Display for ThetaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A point of T^k with every component reduced into `[0, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusPoint(Vec<Scalar>);

impl TorusPoint {
    pub fn new(components: Vec<Scalar>) -> Self {
        TorusPoint(components.iter().map(Scalar::frac).collect())
    }

    pub fn zero(k: usize) -> Self {
        TorusPoint(alloc::vec![Scalar::ZERO; k])
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[Scalar] {
        &self.0
    }

    /// Componentwise addition mod 1.
    pub fn add(&self, o: &TorusPoint) -> Result<TorusPoint> {
        if self.k() != o.k() {
            return Err(Error::DimensionMismatch { expected: self.k(), found: o.k() });
        }
        let comps = self.0.iter().zip(&o.0).map(|(a, b)| a.try_add(b)).collect::<Result<Vec<_>>>()?;
        Ok(TorusPoint::new(comps))
    }

    pub fn neg(&self) -> TorusPoint {
        TorusPoint::new(self.0.iter().map(|c| -*c).collect())
    }
}

/// Nonnegative real stored through its square, so that comparisons and
/// sums of squares stay exact on the rational path even when the root is
/// irrational.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Magnitude {
    squared: Scalar,
}

impl Magnitude {
    pub const ZERO: Magnitude = Magnitude { squared: Scalar::ZERO };

    pub fn from_squared(squared: Scalar) -> Self {
        Magnitude { squared }
    }

    pub fn from_value(v: Scalar) -> Result<Self> {
        Ok(Magnitude { squared: v.try_mul(&v)? })
    }

    pub fn squared(&self) -> Scalar {
        self.squared
    }

    /// The magnitude itself: exact when the square is a rational square.
    pub fn value(&self) -> Scalar {
        self.squared.sqrt()
    }

    pub fn to_f64(&self) -> f64 {
        libm::sqrt(self.squared.to_f64())
    }

    pub fn is_zero(&self) -> bool {
        match self.squared {
            Scalar::Exact(_) => self.squared.is_zero(),
            Scalar::Float(_) => self.to_f64() <= crate::scalar::FLOAT_TOL,
        }
    }

    pub fn cmp_value(&self, o: &Magnitude) -> Ordering {
        self.squared.cmp_value(&o.squared)
    }
}

/// `c^1(p) = <theta, p> mod 1`.
pub fn c_map_1(theta: &ThetaVector, p: &Point) -> Result<TorusPoint> {
    theta.check(p)?;
    let mut acc = Scalar::ZERO;
    for (i, t) in theta.0.iter().enumerate() {
        acc = acc.try_add(&t.frac().try_mul_int(p.coord(i))?.frac())?;
    }
    Ok(TorusPoint::new(alloc::vec![acc]))
}

/// `c^d(p) = [theta, p] mod Z^d`, the coordinatewise product.
pub fn c_map_d(theta: &ThetaVector, p: &Point) -> Result<TorusPoint> {
    theta.check(p)?;
    let comps =
        theta.0.iter().enumerate().map(|(i, t)| t.frac().try_mul_int(p.coord(i))).collect::<Result<Vec<_>>>()?;
    Ok(TorusPoint::new(comps))
}

pub fn c_map(theta: &ThetaVector, p: &Point, kind: TorusKind) -> Result<TorusPoint> {
    match kind {
        TorusKind::One => c_map_1(theta, p),
        TorusKind::Full => c_map_d(theta, p),
    }
}

/// Euclidean distance to 0 on T^k: `sqrt(sum_i min(t_i, 1 - t_i)^2)`.
pub fn torus_distance(t: &TorusPoint) -> Magnitude {
    let mut sq = Scalar::ZERO;
    for c in &t.0 {
        let m = c.nearest_int_distance();
        sq = sq.try_add(&m.try_mul(&m).expect("square of a value in [0, 1/2]")).expect("sum of squares");
    }
    Magnitude::from_squared(sq)
}
