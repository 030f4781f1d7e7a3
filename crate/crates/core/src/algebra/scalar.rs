//! Exact complex-rational scalars carrying physical unit tags.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{BatemanError, Result};
use crate::params::PhysicalParams;

pub type QComplex = Complex<BigRational>;

pub fn q_int(n: i64) -> QComplex {
    Complex::new(BigRational::from_integer(n.into()), BigRational::zero())
}

pub fn q_frac(num: i64, den: i64) -> QComplex {
    Complex::new(
        BigRational::new(num.into(), den.into()),
        BigRational::zero(),
    )
}

pub fn q_gauss(re: i64, im: i64) -> QComplex {
    Complex::new(
        BigRational::from_integer(re.into()),
        BigRational::from_integer(im.into()),
    )
}

pub fn q_i() -> QComplex {
    q_gauss(0, 1)
}

pub fn q_to_f64(z: &QComplex) -> Complex64 {
    Complex64::new(
        z.re.to_f64().unwrap_or(f64::NAN),
        z.im.to_f64().unwrap_or(f64::NAN),
    )
}

/// Integer value of a real rational, if it is one.
pub(crate) fn as_integer(r: &BigRational) -> Option<BigInt> {
    r.is_integer().then(|| r.to_integer())
}

/// Physical unit attached to a scalar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Unit {
    One,
    HbarOmega,
    /// `i * hbar * lambda`; invariant under the combined `i -> -i`, `gamma -> -gamma` map.
    IHbarLambda,
}

impl Unit {
    pub const ALL: [Unit; 3] = [Unit::One, Unit::HbarOmega, Unit::IHbarLambda];

    fn slot(self) -> usize {
        self as usize
    }

    pub fn value(self, params: &PhysicalParams) -> Complex64 {
        match self {
            Unit::One => Complex64::new(1.0, 0.0),
            Unit::HbarOmega => Complex64::new(params.hbar_omega(), 0.0),
            Unit::IHbarLambda => Complex64::new(0.0, params.hbar_lambda()),
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Unit::One => "1",
            Unit::HbarOmega => "hbar*omega",
            Unit::IHbarLambda => "i*hbar*lambda",
        })
    }
}

/// `c0 * 1 + c1 * hbar*omega + c2 * i*hbar*lambda` with exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnitScalar {
    parts: [QComplex; 3],
}

impl UnitScalar {
    pub fn zero() -> Self {
        Self {
            parts: [q_int(0), q_int(0), q_int(0)],
        }
    }

    pub fn one() -> Self {
        Self::tagged(q_int(1), Unit::One)
    }

    pub fn tagged(coeff: QComplex, unit: Unit) -> Self {
        let mut s = Self::zero();
        s.parts[unit.slot()] = coeff;
        s
    }

    pub fn plain(coeff: QComplex) -> Self {
        Self::tagged(coeff, Unit::One)
    }

    pub fn part(&self, unit: Unit) -> &QComplex {
        &self.parts[unit.slot()]
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|p| p.is_zero())
    }

    /// Dimensionless value, if no unit-tagged part is present.
    pub fn as_plain(&self) -> Option<&QComplex> {
        (self.parts[1].is_zero() && self.parts[2].is_zero()).then_some(&self.parts[0])
    }

    pub fn scale(&self, factor: &QComplex) -> Self {
        Self {
            parts: self.parts.clone().map(|p| p * factor),
        }
    }

    /// Product; fails when both factors carry a physical unit.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let tagged = |s: &Self| !(s.parts[1].is_zero() && s.parts[2].is_zero());
        if tagged(self) && tagged(other) {
            return Err(BatemanError::MixedUnits(format!("({self}) * ({other})")));
        }
        let mut out = Self::zero();
        for u in Unit::ALL {
            out.parts[u.slot()] =
                &self.parts[u.slot()] * &other.parts[0] + &self.parts[0] * &other.parts[u.slot()];
        }
        // the plain part was counted twice above
        out.parts[0] = &self.parts[0] * &other.parts[0];
        Ok(out)
    }

    /// Complex conjugation of every coefficient; the unit tags are invariant.
    pub fn conj(&self) -> Self {
        Self {
            parts: self.parts.clone().map(|p| p.conj()),
        }
    }

    pub fn to_complex(&self, params: &PhysicalParams) -> Complex64 {
        Unit::ALL
            .iter()
            .map(|&u| q_to_f64(&self.parts[u.slot()]) * u.value(params))
            .sum()
    }

    /// Integer pair `(p, q)` with `self = p * hbar*omega + q * i*hbar*lambda`.
    pub fn as_eigen_pair(&self) -> Option<(i64, i64)> {
        if !self.parts[0].is_zero() {
            return None;
        }
        let real_int = |z: &QComplex| {
            if z.im.is_zero() {
                as_integer(&z.re).and_then(|n| n.to_i64())
            } else {
                None
            }
        };
        Some((real_int(&self.parts[1])?, real_int(&self.parts[2])?))
    }
}

impl Add for &UnitScalar {
    type Output = UnitScalar;
    fn add(self, rhs: &UnitScalar) -> UnitScalar {
        let mut out = self.clone();
        for (a, b) in out.parts.iter_mut().zip(&rhs.parts) {
            *a = &*a + b;
        }
        out
    }
}

impl Sub for &UnitScalar {
    type Output = UnitScalar;
    fn sub(self, rhs: &UnitScalar) -> UnitScalar {
        self + &(-rhs)
    }
}

impl Neg for &UnitScalar {
    type Output = UnitScalar;
    fn neg(self) -> UnitScalar {
        UnitScalar {
            parts: self.parts.clone().map(|p| -p),
        }
    }
}

impl Mul<&QComplex> for &UnitScalar {
    type Output = UnitScalar;
    fn mul(self, rhs: &QComplex) -> UnitScalar {
        self.scale(rhs)
    }
}

impl From<QComplex> for UnitScalar {
    fn from(z: QComplex) -> Self {
        Self::plain(z)
    }
}

fn fmt_q(z: &QComplex) -> String {
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => z.re.to_string(),
        (true, false) => format!("{}i", z.im),
        _ => {
            let sign = if z.im.is_negative() { "-" } else { "+" };
            format!("({}{}{}i)", z.re, sign, z.im.abs())
        }
    }
}

impl fmt::Display for UnitScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for u in Unit::ALL {
            let p = &self.parts[u.slot()];
            if p.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match u {
                Unit::One => write!(f, "{}", fmt_q(p))?,
                _ if p == &q_int(1) => write!(f, "{u}")?,
                _ => write!(f, "{}*{u}", fmt_q(p))?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_multiply_through_plain_factors() {
        let a = UnitScalar::tagged(q_int(3), Unit::HbarOmega);
        let b = UnitScalar::plain(q_frac(1, 2));
        let p = a.try_mul(&b).unwrap();
        assert_eq!(p, UnitScalar::tagged(q_frac(3, 2), Unit::HbarOmega));
        assert_eq!(p.as_eigen_pair(), None);
    }

    #[test]
    fn mixed_units_are_rejected() {
        let a = UnitScalar::tagged(q_int(1), Unit::HbarOmega);
        let b = UnitScalar::tagged(q_int(1), Unit::IHbarLambda);
        assert!(matches!(a.try_mul(&b), Err(BatemanError::MixedUnits(_))));
    }

    #[test]
    fn plain_products_are_exact() {
        let a = UnitScalar::plain(q_gauss(1, 1));
        let p = a.try_mul(&a.conj()).unwrap();
        assert_eq!(p, UnitScalar::plain(q_int(2)));
    }

    #[test]
    fn eigen_pair_extraction() {
        let s = &UnitScalar::tagged(q_int(2), Unit::HbarOmega)
            + &UnitScalar::tagged(q_int(-1), Unit::IHbarLambda);
        assert_eq!(s.as_eigen_pair(), Some((2, -1)));
        let params = PhysicalParams::default();
        assert_eq!(s.to_complex(&params), Complex64::new(2.0, -0.5));
        assert_eq!(s.to_string(), "2*hbar*omega + -1*i*hbar*lambda");
    }
}
