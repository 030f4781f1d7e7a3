//! Comparison of the exact oracle with truncated matrices.

use num_complex::Complex64;
use rand::Rng;

use super::pairing::basis_matrix_element;
use super::poly::{LadderPoly, Symbol, Word};
use super::scalar::{q_frac, q_to_f64, QComplex, UnitScalar};
use crate::error::{BatemanError, Result};
use crate::fock::{build_ladder, CVector, Ladder, LadderSet};

/// Random polynomial with at most `max_terms` words of degree at most `max_degree`
/// and small Gaussian-rational coefficients.
pub fn random_poly<R: Rng>(rng: &mut R, max_degree: usize, max_terms: usize) -> LadderPoly {
    let mut p = LadderPoly::zero();
    let terms = rng.gen_range(1..=max_terms.max(1));
    for _ in 0..terms {
        let degree = rng.gen_range(0..=max_degree);
        let word: Vec<Symbol> = (0..degree)
            .map(|_| Symbol::ALL[rng.gen_range(0..4)])
            .collect();
        let den = rng.gen_range(1..=4);
        let coeff = QComplex::new(
            q_frac(rng.gen_range(-3..=3), den).re,
            q_frac(rng.gen_range(-3..=3), den).re,
        );
        p.add_term(Word(word), UnitScalar::plain(coeff));
    }
    p
}

fn symbol_ladder(s: Symbol) -> Ladder {
    match s {
        Symbol::B1 => Ladder::A1,
        Symbol::B1Dag => Ladder::A1Dag,
        Symbol::B2 => Ladder::A2,
        Symbol::B2Dag => Ladder::A2Dag,
    }
}

/// `<0,0| p |0,0>` with every symbol replaced by its truncated standard matrix.
pub fn matrix_vacuum_expectation(p: &LadderPoly, ladder: &LadderSet) -> Result<Complex64> {
    let space = ladder.space;
    let vac = space.basis_vector(0, 0);
    let mut total = Complex64::new(0.0, 0.0);
    for (word, coeff) in p.terms() {
        let c = coeff
            .as_plain()
            .ok_or_else(|| BatemanError::MixedUnits("unit-tagged coefficient".into()))?;
        let mut v = vac.clone();
        for s in word.0.iter().rev() {
            v = ladder.get(symbol_ladder(*s)) * v;
        }
        total += q_to_f64(c) * v[0];
    }
    Ok(total)
}

/// Largest occupation of the basis states compared by [`cross_validate`].
pub const CROSS_OCCUPATION: usize = 2;

/// Outcome of comparing the oracle with truncated matrices on low states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossReport {
    /// Exact vacuum expectation and its matrix value.
    pub vacuum: (Complex64, Complex64),
    /// Largest `|exact - matrix|` over all `<m| p |n>` with occupations up to [`CROSS_OCCUPATION`].
    pub max_deviation: f64,
    /// Number of those elements that are exactly nonzero.
    pub nonzero: usize,
}

/// Compares `<m| p |n>` from the oracle with products of truncated standard
/// matrices at `n_max = degree + 2`. No word can push a state with occupation
/// at most two past that cutoff, so the two must agree.
pub fn cross_validate(p: &LadderPoly) -> Result<CrossReport> {
    let params = crate::params::PhysicalParams::default();
    let ladder = build_ladder(p.degree() + CROSS_OCCUPATION)?;
    let space = ladder.space;
    let states: Vec<(usize, usize)> = (0..=CROSS_OCCUPATION)
        .flat_map(|a| (0..=CROSS_OCCUPATION).map(move |b| (a, b)))
        .collect();
    let mut max_deviation = 0.0f64;
    let mut nonzero = 0;
    let mut vacuum = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for &(n1, n2) in &states {
        let image = apply_poly(p, &ladder, &space.basis_vector(n1, n2))?;
        for &(m1, m2) in &states {
            let exact = basis_matrix_element(m1, m2, p, n1, n2)?;
            if exact.coeff.as_plain().is_none() && !exact.is_zero() {
                return Err(BatemanError::MixedUnits("unit-tagged coefficient".into()));
            }
            if !exact.is_zero() {
                nonzero += 1;
            }
            let exact = exact.to_complex(&params);
            let matrix = image[space.index(m1, m2)];
            if (n1, n2, m1, m2) == (0, 0, 0, 0) {
                vacuum = (exact, matrix);
            }
            max_deviation = max_deviation.max((exact - matrix).norm());
        }
    }
    Ok(CrossReport {
        vacuum,
        max_deviation,
        nonzero,
    })
}

fn apply_poly(p: &LadderPoly, ladder: &LadderSet, v: &CVector) -> Result<CVector> {
    let mut total = CVector::zeros(v.len());
    for (word, coeff) in p.terms() {
        let c = coeff
            .as_plain()
            .ok_or_else(|| BatemanError::MixedUnits("unit-tagged coefficient".into()))?;
        let mut w = v.clone();
        for s in word.0.iter().rev() {
            w = ladder.get(symbol_ladder(*s)) * w;
        }
        total += w * q_to_f64(c);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn brute_force_double_commutation() {
        // <0| b1 b1 b1^+ b1^+ |0> = 2 from the normal-ordered constant term
        let p = LadderPoly::word(&[Symbol::B1, Symbol::B1, Symbol::B1Dag, Symbol::B1Dag]);
        let r = cross_validate(&p).unwrap();
        assert_eq!(r.vacuum.0, Complex64::new(2.0, 0.0));
        assert!((r.vacuum.1 - r.vacuum.0).norm() < 1e-14);
        assert!(r.max_deviation < 1e-13);
    }

    #[test]
    fn random_polynomials_agree() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let mut nonzero = 0;
        for _ in 0..40 {
            let p = random_poly(&mut rng, 6, 5);
            let r = cross_validate(&p).unwrap();
            assert!(r.max_deviation <= 1e-12, "{p}");
            nonzero += r.nonzero;
        }
        assert!(nonzero > 40);
    }
}
