//! Matrices of a transformed ladder family and checks shared by both constructions.

use num_complex::Complex64;

use crate::algebra::{RateExponent, Symbol};
use crate::error::Result;
use crate::fock::{
    c, commutator, masked_deviation, CMatrix, CVector, FockSpace, LadderCombo, LadderSet,
    Representation, ONE,
};
use crate::params::PhysicalParams;
use crate::spectrum::{Mode, OpKind};

/// Transformed operators as linear combinations of the original ones,
/// indexed by abstract [`Symbol`]: `B1`/`B2` are the new annihilators and
/// `B1Dag`/`B2Dag` their conjugation partners. Nothing is materialized, so
/// large cutoffs are cheap.
#[derive(Debug, Clone)]
pub struct ComboSet {
    pub space: FockSpace,
    pub representation: Representation,
    combos: [LadderCombo; 4],
}

impl ComboSet {
    pub fn new(
        space: FockSpace,
        representation: Representation,
        combo: impl Fn(Symbol) -> LadderCombo,
    ) -> Self {
        Self {
            space,
            representation,
            combos: Symbol::ALL.map(combo),
        }
    }

    pub fn combo(&self, s: Symbol) -> &LadderCombo {
        &self.combos[s as usize]
    }

    /// `(b1^+)^n1 (b2^+)^n2 |vac> / sqrt(n1! n2!)`.
    pub fn raise(&self, vacuum: &CVector, n1: usize, n2: usize) -> CVector {
        let mut v = vacuum.clone();
        for _ in 0..n2 {
            v = self
                .combo(Symbol::B2Dag)
                .apply(&self.space, self.representation, &v);
        }
        for _ in 0..n1 {
            v = self
                .combo(Symbol::B1Dag)
                .apply(&self.space, self.representation, &v);
        }
        v * c(1.0 / factorial_sqrt(n1, n2))
    }

    /// Column form of the row vector `<<vac| b1^n1 b2^n2 / sqrt(n1! n2!)`.
    pub fn lower_dual(&self, vacuum_dual: &CVector, n1: usize, n2: usize) -> CVector {
        let mut v = vacuum_dual.clone();
        for _ in 0..n1 {
            v = self
                .combo(Symbol::B1)
                .apply_transpose(&self.space, self.representation, &v);
        }
        for _ in 0..n2 {
            v = self
                .combo(Symbol::B2)
                .apply_transpose(&self.space, self.representation, &v);
        }
        v * c(1.0 / factorial_sqrt(n1, n2))
    }
}

/// A [`ComboSet`] together with dense matrices of its four operators.
#[derive(Debug, Clone)]
pub struct TransformedSet {
    pub ladder: LadderSet,
    pub combos: ComboSet,
    mats: [CMatrix; 4],
}

impl TransformedSet {
    pub fn new(ladder: LadderSet, combo: impl Fn(Symbol) -> LadderCombo) -> Self {
        let combos = ComboSet::new(ladder.space, ladder.representation, combo);
        let mats = Symbol::ALL.map(|s| combos.combo(s).matrix(&ladder));
        Self {
            ladder,
            combos,
            mats,
        }
    }

    pub fn get(&self, s: Symbol) -> &CMatrix {
        &self.mats[s as usize]
    }

    pub fn combo(&self, s: Symbol) -> &LadderCombo {
        self.combos.combo(s)
    }

    /// `b_i^+ b_i`.
    pub fn number(&self, mode: Mode) -> CMatrix {
        self.get(Symbol::from_parts(mode, OpKind::Creation))
            * self.get(Symbol::from_parts(mode, OpKind::Annihilation))
    }

    /// Largest interior deviation of all pairwise commutators from `[b_i, b_j^+] = delta_ij`,
    /// every other commutator zero.
    pub fn commutator_deviation(&self, margin: usize) -> Result<f64> {
        self.commutator_deviation_with(margin, commutator)
    }

    /// As [`Self::commutator_deviation`] with a caller-supplied commutator.
    pub fn commutator_deviation_with(
        &self,
        margin: usize,
        comm: impl Fn(&CMatrix, &CMatrix) -> Result<CMatrix>,
    ) -> Result<f64> {
        let space = self.ladder.space;
        let mask = space.interior_mask(margin)?;
        let id = self.ladder.identity();
        let zero = CMatrix::zeros(space.dim(), space.dim());
        let mut worst = 0.0f64;
        for (i, &a) in Symbol::ALL.iter().enumerate() {
            for &b in &Symbol::ALL[i + 1..] {
                let value = comm(self.get(a), self.get(b))?;
                let expected = if a.mode() == b.mode() && a.is_creator() != b.is_creator() {
                    // [b, b^+] = 1, and [b^+, b] = -1 in the derived symbol order
                    if a.is_creator() {
                        -&id
                    } else {
                        id.clone()
                    }
                } else {
                    zero.clone()
                };
                worst = worst.max(masked_deviation(&value, &expected, &mask));
            }
        }
        Ok(worst)
    }

    /// Largest interior deviation of `(i hbar)^{-1} [b, H]` from `rate(b) * b` over all four operators.
    pub fn derivative_deviation(
        &self,
        h: &CMatrix,
        params: &PhysicalParams,
        rate: impl Fn(Symbol) -> RateExponent,
        margin: usize,
    ) -> Result<f64> {
        let mask = self.ladder.space.interior_mask(margin)?;
        let inv = (Complex64::new(0.0, params.hbar)).inv();
        let mut worst = 0.0f64;
        for s in Symbol::ALL {
            let lhs = commutator(self.get(s), h)? * inv;
            let rhs = self.get(s) * rate(s).value(params);
            worst = worst.max(masked_deviation(&lhs, &rhs, &mask));
        }
        Ok(worst)
    }
}

fn factorial_sqrt(n1: usize, n2: usize) -> f64 {
    let f = |n: usize| (1..=n).map(|k| k as f64).product::<f64>();
    (f(n1) * f(n2)).sqrt()
}

/// Bilinear pairing `bra^T ket` (no complex conjugation).
pub fn pair(bra: &CVector, ket: &CVector) -> Complex64 {
    bra.iter().zip(ket.iter()).map(|(a, b)| a * b).sum()
}

/// `bra^T M ket`.
pub fn sandwich(bra: &CVector, m: &CMatrix, ket: &CVector) -> Complex64 {
    pair(bra, &(m * ket))
}

/// Pairing matrix between dual and direct basis vectors, and its largest
/// deviation from the identity.
pub fn gram(bras: &[CVector], kets: &[CVector]) -> (CMatrix, f64) {
    let g = CMatrix::from_fn(bras.len(), kets.len(), |i, j| pair(&bras[i], &kets[j]));
    let mut worst = 0.0f64;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let expected = if i == j {
                ONE
            } else {
                Complex64::new(0.0, 0.0)
            };
            worst = worst.max((g[(i, j)] - expected).norm());
        }
    }
    (g, worst)
}

/// Identity-check deviations for the Hamiltonian written in transformed operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityReport {
    /// Free part.
    pub h0: f64,
    /// Coupling part, general parameter form.
    pub h1: f64,
    /// Coupling part in its reduced special-point form, when the parameter is at a special point.
    pub h1_reduced: Option<f64>,
}

impl IdentityReport {
    pub fn max(&self) -> f64 {
        self.h0.max(self.h1).max(self.h1_reduced.unwrap_or(0.0))
    }
}

/// `(x1 + sign * x2) / sqrt2` with `x_i = sqrt(hbar / 2 m omega)(a_i + a_i^dag)`.
pub fn coordinate_matrix(ladder: &LadderSet, sign: f64, params: &PhysicalParams) -> CMatrix {
    let length = (params.hbar / (2.0 * params.m * params.omega)).sqrt();
    let x1 = &ladder.a1 + &ladder.a1dag;
    let x2 = &ladder.a2 + &ladder.a2dag;
    (x1 + x2 * c(sign)) * c(length / std::f64::consts::SQRT_2)
}
