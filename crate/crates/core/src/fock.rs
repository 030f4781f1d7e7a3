//! Truncated two-mode Fock space.
//!
//! Basis states `|n1, n2>` with `0 <= n1, n2 <= n_max` are stored at flat
//! index `n1 * (n_max + 1) + n2`. Ladder operators follow `a|n> = sqrt(n)|n-1>`.
//! Truncation breaks `[a, a^dag] = 1` on the top occupation, so operator
//! identities are compared on interior states only (see [`interior_projector`]).

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{BatemanError, Result};
use crate::params::PhysicalParams;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FockSpace {
    n_max: usize,
}

impl FockSpace {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 2 {
            return Err(BatemanError::Domain(format!(
                "occupation cutoff must be at least 2, got {n_max}"
            )));
        }
        Ok(Self { n_max })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Number of occupations per mode, `n_max + 1`.
    pub fn levels(&self) -> usize {
        self.n_max + 1
    }

    pub fn dim(&self) -> usize {
        self.levels() * self.levels()
    }

    pub fn index(&self, n1: usize, n2: usize) -> usize {
        debug_assert!(n1 <= self.n_max && n2 <= self.n_max);
        n1 * self.levels() + n2
    }

    pub fn occupation(&self, index: usize) -> (usize, usize) {
        (index / self.levels(), index % self.levels())
    }

    pub fn basis_vector(&self, n1: usize, n2: usize) -> CVector {
        let mut v = CVector::zeros(self.dim());
        v[self.index(n1, n2)] = ONE;
        v
    }

    /// Mask of states with `n1, n2 <= n_max - margin`.
    pub fn interior_mask(&self, margin: usize) -> Result<Vec<bool>> {
        if margin > self.n_max {
            return Err(BatemanError::Domain(format!(
                "margin {margin} exceeds cutoff {}",
                self.n_max
            )));
        }
        let top = self.n_max - margin;
        Ok((0..self.dim())
            .map(|i| {
                let (n1, n2) = self.occupation(i);
                n1 <= top && n2 <= top
            })
            .collect())
    }

    /// Mask of states with both occupations at most `window`.
    pub fn window_mask(&self, window: usize) -> Vec<bool> {
        (0..self.dim())
            .map(|i| {
                let (n1, n2) = self.occupation(i);
                n1 <= window && n2 <= window
            })
            .collect()
    }

    /// Applies a primitive ladder matrix to `v` without materializing it.
    pub fn apply(&self, op: Primitive, v: &CVector) -> CVector {
        let mut out = CVector::zeros(self.dim());
        let top = self.n_max;
        for (idx, &x) in v.iter().enumerate() {
            if x == ZERO {
                continue;
            }
            let (n1, n2) = self.occupation(idx);
            let target = match op {
                Primitive::Lower1 if n1 > 0 => Some((n1 - 1, n2, n1)),
                Primitive::Raise1 if n1 < top => Some((n1 + 1, n2, n1 + 1)),
                Primitive::Lower2 if n2 > 0 => Some((n1, n2 - 1, n2)),
                Primitive::Raise2 if n2 < top => Some((n1, n2 + 1, n2 + 1)),
                _ => None,
            };
            if let Some((m1, m2, amp)) = target {
                out[self.index(m1, m2)] += x * (amp as f64).sqrt();
            }
        }
        out
    }
}

/// The four real truncated ladder matrices of the standard representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Primitive {
    Lower1,
    Raise1,
    Lower2,
    Raise2,
}

impl Primitive {
    /// The matrix transpose (all primitive matrices are real).
    pub fn transpose(self) -> Self {
        match self {
            Primitive::Lower1 => Primitive::Raise1,
            Primitive::Raise1 => Primitive::Lower1,
            Primitive::Lower2 => Primitive::Raise2,
            Primitive::Raise2 => Primitive::Lower2,
        }
    }
}

/// Logical ladder operators `a1, a1^dag, a2, a2^dag` as they appear in the Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ladder {
    A1,
    A1Dag,
    A2,
    A2Dag,
}

impl Ladder {
    pub const ALL: [Ladder; 4] = [Ladder::A1, Ladder::A1Dag, Ladder::A2, Ladder::A2Dag];
}

/// How the logical ladder operators act on the truncated basis.
///
/// `Standard` is the ordinary Fock representation: `a_i^dag` is the conjugate
/// transpose of `a_i`. `ImaginaryScaled` realizes mode 2 as
/// `a2 = i R`, `a2^dag = i L` with `L`, `R` the truncated lowering/raising
/// matrices. It still satisfies `[a2, a2^dag] = 1` on interior states, and
/// the imaginary-scaled operators `-i a2^dag = L`, `-i a2 = R` act as an
/// ordinary lowering/raising pair, so the corresponding vacuum sits at the
/// bottom of the truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Representation {
    #[default]
    Standard,
    ImaginaryScaled,
}

impl Representation {
    pub fn realize(self, op: Ladder) -> (Complex64, Primitive) {
        match (self, op) {
            (_, Ladder::A1) => (ONE, Primitive::Lower1),
            (_, Ladder::A1Dag) => (ONE, Primitive::Raise1),
            (Representation::Standard, Ladder::A2) => (ONE, Primitive::Lower2),
            (Representation::Standard, Ladder::A2Dag) => (ONE, Primitive::Raise2),
            (Representation::ImaginaryScaled, Ladder::A2) => (I, Primitive::Raise2),
            (Representation::ImaginaryScaled, Ladder::A2Dag) => (I, Primitive::Lower2),
        }
    }
}

/// A linear combination of logical ladder operators.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderCombo {
    terms: Vec<(Complex64, Ladder)>,
}

impl LadderCombo {
    pub fn new(terms: &[(Complex64, Ladder)]) -> Self {
        Self {
            terms: terms.to_vec(),
        }
    }

    pub fn single(op: Ladder) -> Self {
        Self::new(&[(ONE, op)])
    }

    pub fn terms(&self) -> &[(Complex64, Ladder)] {
        &self.terms
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            terms: self.terms.iter().map(|&(c, op)| (c * factor, op)).collect(),
        }
    }

    pub fn matrix(&self, ladder: &LadderSet) -> CMatrix {
        let dim = ladder.space.dim();
        self.terms
            .iter()
            .fold(CMatrix::zeros(dim, dim), |acc, &(c, op)| {
                acc + ladder.get(op) * c
            })
    }

    /// `combo * v` computed on the fly.
    pub fn apply(&self, space: &FockSpace, rep: Representation, v: &CVector) -> CVector {
        let mut out = CVector::zeros(space.dim());
        for &(c, op) in &self.terms {
            let (phase, prim) = rep.realize(op);
            out += space.apply(prim, v) * (c * phase);
        }
        out
    }

    /// `combo^T * v`, i.e. the row vector `v^T * combo` stored as a column.
    pub fn apply_transpose(&self, space: &FockSpace, rep: Representation, v: &CVector) -> CVector {
        let mut out = CVector::zeros(space.dim());
        for &(c, op) in &self.terms {
            let (phase, prim) = rep.realize(op);
            out += space.apply(prim.transpose(), v) * (c * phase);
        }
        out
    }
}

/// Dense matrices of `a1, a1^dag, a2, a2^dag` on a truncated space.
#[derive(Debug, Clone)]
pub struct LadderSet {
    pub space: FockSpace,
    pub representation: Representation,
    pub a1: CMatrix,
    pub a1dag: CMatrix,
    pub a2: CMatrix,
    pub a2dag: CMatrix,
}

impl LadderSet {
    pub fn new(space: FockSpace, representation: Representation) -> Self {
        let dim = space.dim();
        let primitive = |p: Primitive| {
            let mut m = CMatrix::zeros(dim, dim);
            for j in 0..dim {
                let col = space.apply(p, &unit(dim, j));
                m.set_column(j, &col);
            }
            m
        };
        let lower1 = primitive(Primitive::Lower1);
        let lower2 = primitive(Primitive::Lower2);
        let build = |op: Ladder| {
            let (phase, prim) = representation.realize(op);
            let base = match prim {
                Primitive::Lower1 => lower1.clone(),
                Primitive::Raise1 => lower1.transpose(),
                Primitive::Lower2 => lower2.clone(),
                Primitive::Raise2 => lower2.transpose(),
            };
            base * phase
        };
        Self {
            space,
            representation,
            a1: build(Ladder::A1),
            a1dag: build(Ladder::A1Dag),
            a2: build(Ladder::A2),
            a2dag: build(Ladder::A2Dag),
        }
    }

    pub fn get(&self, op: Ladder) -> &CMatrix {
        match op {
            Ladder::A1 => &self.a1,
            Ladder::A1Dag => &self.a1dag,
            Ladder::A2 => &self.a2,
            Ladder::A2Dag => &self.a2dag,
        }
    }

    pub fn identity(&self) -> CMatrix {
        CMatrix::identity(self.space.dim(), self.space.dim())
    }
}

fn unit(dim: usize, j: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[j] = ONE;
    v
}

/// Standard-representation ladder matrices for cutoff `n_max`.
pub fn build_ladder(n_max: usize) -> Result<LadderSet> {
    Ok(LadderSet::new(
        FockSpace::new(n_max)?,
        Representation::Standard,
    ))
}

/// `H0`, `H1` and `H = H0 + H1` as matrices in the representation of `ladder`.
#[derive(Debug, Clone)]
pub struct HamiltonianSet {
    pub h0: CMatrix,
    pub h1: CMatrix,
    pub h: CMatrix,
    pub params: PhysicalParams,
}

/// `H0 = hbar w (a1^dag a1 - a2^dag a2)`, `H1 = i (hbar gamma / 2m)(a1 a2 - a1^dag a2^dag)`.
pub fn build_hamiltonian(ladder: &LadderSet, params: &PhysicalParams) -> HamiltonianSet {
    let h0 = (&ladder.a1dag * &ladder.a1 - &ladder.a2dag * &ladder.a2) * c(params.hbar_omega());
    let h1 = (&ladder.a1 * &ladder.a2 - &ladder.a1dag * &ladder.a2dag)
        * Complex64::new(0.0, params.hbar * params.gamma / (2.0 * params.m));
    let h = &h0 + &h1;
    HamiltonianSet {
        h0,
        h1,
        h,
        params: *params,
    }
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if a.shape() != b.shape() || a.nrows() != a.ncols() {
        return Err(BatemanError::DimensionMismatch {
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(a * b - b * a)
}

/// Diagonal 0/1 projector onto states with `n1, n2 <= n_max - margin`.
pub fn interior_projector(space: &FockSpace, margin: usize) -> Result<CMatrix> {
    let mask = space.interior_mask(margin)?;
    let diag = CVector::from_iterator(mask.len(), mask.iter().map(|&b| if b { ONE } else { ZERO }));
    Ok(CMatrix::from_diagonal(&diag))
}

/// Matrix exponential by Pade scaling-and-squaring.
pub fn matrix_exp(a: &CMatrix) -> Result<CMatrix> {
    if a.nrows() != a.ncols() {
        return Err(BatemanError::DimensionMismatch {
            left: a.shape(),
            right: a.shape(),
        });
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(BatemanError::Numerical(
            "non-finite input to matrix_exp".into(),
        ));
    }
    let e = a.exp();
    if e.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(BatemanError::Numerical(
            "matrix exponential overflowed".into(),
        ));
    }
    Ok(e)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest component modulus of a vector.
pub fn vec_max_abs(v: &CVector) -> f64 {
    v.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `max |P (a - b) P|` for the diagonal projector described by `mask`.
pub fn masked_deviation(a: &CMatrix, b: &CMatrix, mask: &[bool]) -> f64 {
    assert_eq!(a.shape(), b.shape());
    let mut worst = 0.0f64;
    for j in (0..a.ncols()).filter(|&j| mask[j]) {
        for i in (0..a.nrows()).filter(|&i| mask[i]) {
            worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    worst
}

/// Interior deviation with the projector of the given margin.
pub fn interior_deviation(
    a: &CMatrix,
    b: &CMatrix,
    space: &FockSpace,
    margin: usize,
) -> Result<f64> {
    if a.shape() != b.shape() || a.nrows() != space.dim() {
        return Err(BatemanError::DimensionMismatch {
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(masked_deviation(a, b, &space.interior_mask(margin)?))
}

/// Single-mode truncated lowering matrix on `n_max + 1` levels.
pub fn single_mode_lowering(n_max: usize) -> CMatrix {
    let n = n_max + 1;
    let mut m = CMatrix::zeros(n, n);
    for k in 1..n {
        m[(k - 1, k)] = c((k as f64).sqrt());
    }
    m
}

/// Writes nonzero entries as `row,col,re,im` lines.
pub fn write_csv<W: Write>(m: &CMatrix, mut out: W) -> std::io::Result<()> {
    writeln!(out, "row,col,re,im")?;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            if z != ZERO {
                writeln!(out, "{i},{j},{:e},{:e}", z.re, z.im)?;
            }
        }
    }
    Ok(())
}
