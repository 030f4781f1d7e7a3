//! Time-dependent linear combinations of ladder symbols.
//!
//! A [`ModeExpansion`] stands for `sqrt(hbar / 2 m omega) * sum_k c_k e^{s_k t} b_k`
//! with exact coefficients `c_k` and exponents `s_k = alpha*lambda + beta*i*omega`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;

use super::poly::{LadderPoly, Substitution, Symbol};
use super::scalar::{q_int, q_to_f64, QComplex, UnitScalar};
use crate::error::{BatemanError, Result};
use crate::fock::CMatrix;
use crate::params::PhysicalParams;
use crate::spectrum::Motion;

/// `s = lambda * lambda_coeff + i * omega * omega_coeff`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RateExponent {
    pub lambda: i32,
    pub omega: i32,
}

impl RateExponent {
    pub const ZERO: RateExponent = RateExponent {
        lambda: 0,
        omega: 0,
    };

    pub fn new(lambda: i32, omega: i32) -> Self {
        Self { lambda, omega }
    }

    pub fn value(&self, params: &PhysicalParams) -> Complex64 {
        Complex64::new(
            f64::from(self.lambda) * params.lambda,
            f64::from(self.omega) * params.omega,
        )
    }

    pub fn neg(self) -> Self {
        Self::new(-self.lambda, -self.omega)
    }

    /// Image under `i -> -i`, `gamma -> -gamma`. Both parts flip sign.
    pub fn conj(self) -> Self {
        self.neg()
    }

    pub fn add(self, other: Self) -> Self {
        Self::new(self.lambda + other.lambda, self.omega + other.omega)
    }

    /// Coefficients `(A, B, C)` of `m s^2 +- gamma s + k = m (A lambda^2 + B omega^2 + i C lambda omega)`,
    /// using `gamma = 2 m lambda` and `k = m (omega^2 + lambda^2)`.
    pub fn eom_coefficients(&self, motion: Motion) -> (i64, i64, i64) {
        let a = i64::from(self.lambda);
        let b = i64::from(self.omega);
        let shift = match motion {
            Motion::Damped => 1,
            Motion::Amplified => -1,
        };
        ((a + shift).pow(2), 1 - b * b, 2 * b * (a + shift))
    }

    /// True when the equation of motion holds identically in `m`, `lambda`, `omega`.
    pub fn solves_exactly(&self, motion: Motion) -> bool {
        self.eom_coefficients(motion) == (0, 0, 0)
    }
}

impl fmt::Display for RateExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*lambda + {}*i*omega", self.lambda, self.omega)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeTerm {
    pub coeff: QComplex,
    pub symbol: Symbol,
    pub rate: RateExponent,
}

/// Sum of [`ModeTerm`]s in canonical order with like terms merged.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeExpansion {
    terms: Vec<ModeTerm>,
}

impl ModeExpansion {
    pub fn new(terms: Vec<ModeTerm>) -> Self {
        let mut merged: BTreeMap<(Symbol, RateExponent), QComplex> = BTreeMap::new();
        for t in terms {
            let slot = merged.entry((t.symbol, t.rate)).or_insert_with(|| q_int(0));
            *slot = &*slot + &t.coeff;
        }
        Self {
            terms: merged
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((symbol, rate), coeff)| ModeTerm {
                    coeff,
                    symbol,
                    rate,
                })
                .collect(),
        }
    }

    pub fn terms(&self) -> &[ModeTerm] {
        &self.terms
    }

    pub fn rates(&self) -> Vec<RateExponent> {
        let mut r: Vec<_> = self.terms.iter().map(|t| t.rate).collect();
        r.dedup();
        r
    }

    /// Symbol-level conjugation of the time-dependent expression.
    pub fn conjugate(&self) -> Self {
        Self::new(
            self.terms
                .iter()
                .map(|t| ModeTerm {
                    coeff: t.coeff.conj(),
                    symbol: t.symbol.partner(),
                    rate: t.rate.conj(),
                })
                .collect(),
        )
    }

    /// The `t = 0` operator as a linear polynomial (without the length prefactor).
    pub fn at_zero(&self) -> LadderPoly {
        let mut p = LadderPoly::zero();
        for t in &self.terms {
            p = p.add(&LadderPoly::linear(&[(t.coeff.clone(), t.symbol)]));
        }
        p
    }

    /// Matrix at time `t`, including the prefactor `sqrt(hbar / 2 m omega)`.
    pub fn matrix(
        &self,
        t: f64,
        params: &PhysicalParams,
        symbol_matrix: impl Fn(Symbol) -> CMatrix,
    ) -> CMatrix {
        let length = (params.hbar / (2.0 * params.m * params.omega)).sqrt();
        let mut out: Option<CMatrix> = None;
        for term in &self.terms {
            let factor = q_to_f64(&term.coeff) * (term.rate.value(params) * t).exp() * length;
            let m = symbol_matrix(term.symbol) * factor;
            out = Some(match out {
                Some(acc) => acc + m,
                None => m,
            });
        }
        out.expect("mode expansion has at least one term")
    }
}

impl fmt::Display for ModeExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                format!(
                    "({}) {} exp[({})t]",
                    UnitScalar::plain(t.coeff.clone()),
                    t.symbol,
                    t.rate
                )
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Builds `(x1 +- x2)/sqrt2` in transformed symbols and attaches each
/// symbol's Heisenberg exponent.
///
/// `sub` maps the original ladder symbols to transformed ones with common
/// factor `1/sqrt2`, so the result has rational coefficients. `relative_sign`
/// is `+1` for the sum coordinate and `-1` for the difference coordinate.
pub fn position_expansion(
    sub: &Substitution,
    relative_sign: i64,
    rate: impl Fn(Symbol) -> RateExponent,
) -> Result<ModeExpansion> {
    if sub.scale_sq != super::scalar::q_frac(1, 2) {
        return Err(BatemanError::IrrationalScale(1));
    }
    let s = q_int(relative_sign);
    // x_i = K (a_i + a_i^dag), so the coordinate is (K / sqrt2)(a1 + a1^dag +- (a2 + a2^dag))
    let original = LadderPoly::linear(&[
        (q_int(1), Symbol::B1),
        (q_int(1), Symbol::B1Dag),
        (s.clone(), Symbol::B2),
        (s, Symbol::B2Dag),
    ]);
    let mut terms = Vec::new();
    for (word, coeff) in original.terms() {
        let image = &sub.images[word.0[0] as usize];
        let c = coeff.as_plain().expect("plain coefficients");
        for (w, ic) in image.terms() {
            let ic = ic.as_plain().expect("plain image coefficients");
            terms.push(ModeTerm {
                // 1/sqrt2 from the coordinate times 1/sqrt2 from the image
                coeff: c * ic * super::scalar::q_frac(1, 2),
                symbol: w.0[0],
                rate: rate(w.0[0]),
            });
        }
    }
    Ok(ModeExpansion::new(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::q_gauss;

    #[test]
    fn eom_coefficients_vanish_only_on_the_physical_roots() {
        for lambda in -2..=2 {
            for omega in -2..=2 {
                let r = RateExponent::new(lambda, omega);
                assert_eq!(
                    r.solves_exactly(Motion::Damped),
                    lambda == -1 && omega.abs() == 1
                );
                assert_eq!(
                    r.solves_exactly(Motion::Amplified),
                    lambda == 1 && omega.abs() == 1
                );
            }
        }
    }

    #[test]
    fn eom_coefficients_match_float_evaluation() {
        let p = PhysicalParams::new(1.3, 0.7, 2.1, 1.0).unwrap();
        let r = RateExponent::new(2, -1);
        let s = r.value(&p);
        let direct = p.m * s * s + p.gamma * s + p.k;
        let (a, b, c) = r.eom_coefficients(Motion::Damped);
        let l = p.lambda;
        let w = p.omega;
        let formula = Complex64::new(
            p.m * (a as f64 * l * l + b as f64 * w * w),
            p.m * c as f64 * l * w,
        );
        assert!((direct - formula).norm() < 1e-12);
    }

    #[test]
    fn like_terms_merge_and_cancel() {
        let r = RateExponent::new(1, 1);
        let e = ModeExpansion::new(vec![
            ModeTerm {
                coeff: q_int(1),
                symbol: Symbol::B1,
                rate: r,
            },
            ModeTerm {
                coeff: q_int(-1),
                symbol: Symbol::B1,
                rate: r,
            },
            ModeTerm {
                coeff: q_gauss(0, 2),
                symbol: Symbol::B2Dag,
                rate: r,
            },
        ]);
        assert_eq!(e.terms().len(), 1);
        let c = e.conjugate();
        assert_eq!(c.terms()[0].symbol, Symbol::B2);
        assert_eq!(c.terms()[0].coeff, q_gauss(0, -2));
        assert_eq!(c.terms()[0].rate, RateExponent::new(-1, -1));
        assert_eq!(c.conjugate(), e);
    }
}
