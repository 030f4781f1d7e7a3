//! Exact oracle for polynomials in abstract ladder symbols.

pub mod crosscheck;
pub mod modes;
pub mod pairing;
pub mod poly;
pub mod scalar;

pub use modes::{position_expansion, ModeExpansion, ModeTerm, RateExponent};
pub use pairing::{basis_matrix_element, bra_monomial, ket_monomial, ExactValue};
pub use poly::{normal_order, vacuum_pairing, LadderPoly, LadderWord, Substitution, Symbol, Word};
pub use scalar::{QComplex, Unit, UnitScalar};

use scalar::q_int;

/// `hbar w (b1^+ b1 - b2^+ b2) + i hbar lambda (b1 b2 - b1^+ b2^+)` with the
/// symbols read as the original ladder operators.
pub fn bateman_hamiltonian() -> LadderPoly {
    use Symbol::*;
    let hw = UnitScalar::tagged(q_int(1), Unit::HbarOmega);
    let hl = UnitScalar::tagged(q_int(1), Unit::IHbarLambda);
    let free = LadderPoly::word(&[B1Dag, B1]).sub(&LadderPoly::word(&[B2Dag, B2]));
    let coupling = LadderPoly::word(&[B1, B2]).sub(&LadderPoly::word(&[B1Dag, B2Dag]));
    free.try_scale(&hw)
        .and_then(|f| Ok(f.add(&coupling.try_scale(&hl)?)))
        .expect("plain words times a single unit")
}

/// `b1^+ b1`.
pub fn number1() -> LadderPoly {
    LadderPoly::word(&[Symbol::B1Dag, Symbol::B1])
}

/// `b2^+ b2`.
pub fn number2() -> LadderPoly {
    LadderPoly::word(&[Symbol::B2Dag, Symbol::B2])
}

/// Exact matrix of a Hamiltonian between abstract basis states with `n1 + n2 <= max_total`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSpectrum {
    /// `(n1, n2, p, q)` read off the diagonal, ordered by `(n1 + n2, n1)`.
    pub diagonal: Vec<(usize, usize, i64, i64)>,
    /// Diagonal entries that are not of the form `p hbar w + q i hbar lambda`.
    pub irregular: usize,
    /// Nonzero off-diagonal entries; `None` when they were not inspected.
    pub off_diagonal_nonzero: Option<usize>,
}

pub fn oracle_spectrum(
    h: &LadderPoly,
    max_total: usize,
    inspect_off_diagonal: bool,
) -> crate::error::Result<OracleSpectrum> {
    let states: Vec<(usize, usize)> = (0..=max_total)
        .flat_map(|total| (0..=total).map(move |n1| (n1, total - n1)))
        .collect();
    let mut diagonal = Vec::with_capacity(states.len());
    let mut irregular = 0;
    for &(n1, n2) in &states {
        match basis_matrix_element(n1, n2, h, n1, n2)?.as_eigen_pair() {
            Some((p, q)) => diagonal.push((n1, n2, p, q)),
            None => irregular += 1,
        }
    }
    let off_diagonal_nonzero = if inspect_off_diagonal {
        let mut count = 0;
        for &m in &states {
            for &n in &states {
                if m != n && !basis_matrix_element(m.0, m.1, h, n.0, n.1)?.is_zero() {
                    count += 1;
                }
            }
        }
        Some(count)
    } else {
        None
    };
    Ok(OracleSpectrum {
        diagonal,
        irregular,
        off_diagonal_nonzero,
    })
}
