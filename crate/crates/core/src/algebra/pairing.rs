//! Matrix elements between normalized abstract basis states.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use super::poly::{vacuum_pairing, LadderPoly, Symbol};
use super::scalar::{q_int, QComplex, UnitScalar};
use crate::error::Result;
use crate::params::PhysicalParams;

/// `coeff * sqrt(radicand)` with a squarefree radicand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactValue {
    pub coeff: UnitScalar,
    pub radicand: u64,
}

impl ExactValue {
    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// `(p, q)` in units of `hbar*omega` and `i*hbar*lambda` when the value is such a combination.
    pub fn as_eigen_pair(&self) -> Option<(i64, i64)> {
        if self.coeff.is_zero() {
            return Some((0, 0));
        }
        if self.radicand != 1 {
            return None;
        }
        self.coeff.as_eigen_pair()
    }

    /// Dimensionless rational value, if the radicand is one and no unit is attached.
    pub fn as_plain(&self) -> Option<QComplex> {
        if self.coeff.is_zero() {
            return Some(q_int(0));
        }
        if self.radicand != 1 {
            return None;
        }
        self.coeff.as_plain().cloned()
    }

    pub fn to_complex(&self, params: &PhysicalParams) -> Complex64 {
        self.coeff.to_complex(params) * (self.radicand as f64).sqrt()
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand == 1 {
            write!(f, "{}", self.coeff)
        } else {
            write!(f, "({}) * sqrt({})", self.coeff, self.radicand)
        }
    }
}

/// Unnormalized creator monomial `b1^+^n1 b2^+^n2`.
pub fn ket_monomial(n1: usize, n2: usize) -> LadderPoly {
    let mut w = vec![Symbol::B1Dag; n1];
    w.extend(std::iter::repeat(Symbol::B2Dag).take(n2));
    LadderPoly::word(&w)
}

/// Unnormalized annihilator monomial `b1^m1 b2^m2`, the dual of [`ket_monomial`].
pub fn bra_monomial(m1: usize, m2: usize) -> LadderPoly {
    let mut w = vec![Symbol::B1; m1];
    w.extend(std::iter::repeat(Symbol::B2).take(m2));
    LadderPoly::word(&w)
}

/// `<<m1, m2| op |n1, n2>>` between states `(b^+)^n |vac> / sqrt(n1! n2!)`.
pub fn basis_matrix_element(
    m1: usize,
    m2: usize,
    op: &LadderPoly,
    n1: usize,
    n2: usize,
) -> Result<ExactValue> {
    let ket = op.try_mul(&ket_monomial(n1, n2))?;
    let raw = vacuum_pairing(&bra_monomial(m1, m2), &ket)?;
    let (square_root, radicand) = squarefree_split(&[m1, m2, n1, n2]);
    // raw / sqrt(s^2 r) = raw / (s r) * sqrt(r)
    let denom = BigRational::from_integer(square_root * BigInt::from(radicand));
    let inv = num_complex::Complex::new(denom.recip(), BigRational::from_integer(0.into()));
    Ok(ExactValue {
        coeff: raw.scale(&inv),
        radicand,
    })
}

/// Writes `prod k_i!` as `s^2 * r` with `r` squarefree.
fn squarefree_split(factorials: &[usize]) -> (BigInt, u64) {
    let top = factorials.iter().copied().max().unwrap_or(0);
    let mut square_root = BigInt::from(1);
    let mut radicand = 1u64;
    for p in primes_up_to(top) {
        let exponent: usize = factorials.iter().map(|&n| legendre(n, p)).sum();
        for _ in 0..exponent / 2 {
            square_root *= p;
        }
        if exponent % 2 == 1 {
            radicand *= p as u64;
        }
    }
    (square_root, radicand)
}

/// Exponent of the prime `p` in `n!`.
fn legendre(n: usize, p: usize) -> usize {
    let mut e = 0;
    let mut q = p;
    while q <= n {
        e += n / q;
        q *= p;
    }
    e
}

fn primes_up_to(n: usize) -> Vec<usize> {
    (2..=n)
        .filter(|&k| (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::Unit;

    #[test]
    fn number_operator_element() {
        let n1 = LadderPoly::word(&[Symbol::B1Dag, Symbol::B1]);
        let v = basis_matrix_element(3, 2, &n1, 3, 2).unwrap();
        assert_eq!(v.as_plain(), Some(q_int(3)));
    }

    #[test]
    fn identity_gives_kronecker_delta() {
        let one = LadderPoly::one();
        for m in [(0, 0), (1, 2), (3, 0)] {
            for n in [(0, 0), (1, 2), (3, 0), (2, 1)] {
                let v = basis_matrix_element(m.0, m.1, &one, n.0, n.1).unwrap();
                let expected = if m == n { q_int(1) } else { q_int(0) };
                assert_eq!(v.as_plain(), Some(expected));
            }
        }
    }

    #[test]
    fn off_diagonal_elements_carry_radicals() {
        // <<1,0| b1^+ |0,0>> = 1, <<2,0| b1^+ b1^+ |0,0>> = sqrt(2)
        let c = LadderPoly::word(&[Symbol::B1Dag, Symbol::B1Dag]);
        let v = basis_matrix_element(2, 0, &c, 0, 0).unwrap();
        assert_eq!(v.radicand, 2);
        assert_eq!(v.coeff, UnitScalar::plain(q_int(1)));
        assert!((v.to_complex(&PhysicalParams::default()).re - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(v.as_eigen_pair(), None);
    }

    #[test]
    fn squarefree_split_of_factorials() {
        // 3! * 4! = 144 = 12^2
        assert_eq!(squarefree_split(&[3, 4]), (BigInt::from(12), 1));
        // 5! = 120 = 2^2 * 30
        assert_eq!(squarefree_split(&[5]), (BigInt::from(2), 30));
        assert_eq!(squarefree_split(&[0, 1]), (BigInt::from(1), 1));
    }

    #[test]
    fn unit_tagged_operator() {
        let h = LadderPoly::word(&[Symbol::B2Dag, Symbol::B2])
            .try_scale(&UnitScalar::tagged(q_int(1), Unit::HbarOmega))
            .unwrap();
        let v = basis_matrix_element(0, 2, &h, 0, 2).unwrap();
        assert_eq!(v.as_eigen_pair(), Some((2, 0)));
    }
}
