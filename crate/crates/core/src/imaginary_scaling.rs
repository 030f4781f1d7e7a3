//! Imaginary-scaling quantization.
//!
//! With `phi = pi/2` the single-mode map `exp(phi Y)` sends `a2` to `-i a2^dag`.
//! Combined with a `chi` rotation this gives check operators
//!
//! ```text
//! chk a1  = cosh(x) a1 + i sinh(x) a2^dag      chk a1^s = cosh(x) a1^dag - i sinh(x) a2
//! chk a2  = -sinh(x) a1 - i cosh(x) a2^dag     chk a2^s = sinh(x) a1^dag - i cosh(x) a2
//! ```
//!
//! At `chi = +-i pi/4` the Hamiltonian reads
//! `hbar w (N1 + N2 + 1) +- i hbar lambda (N1 - N2)`: bounded below, with
//! stable states on the diagonal `n1 = n2`.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;

use crate::algebra::scalar::{q_frac, q_gauss, q_int, Unit};
use crate::algebra::{
    bateman_hamiltonian, normal_order, number1, number2, LadderPoly, ModeExpansion, ModeTerm,
    RateExponent, Substitution, Symbol, UnitScalar,
};
use crate::error::{BatemanError, Result};
use crate::fock::{
    build_hamiltonian, c, masked_deviation, matrix_exp, single_mode_lowering, CMatrix, CVector,
    FockSpace, Ladder, LadderCombo, LadderSet, I, ONE,
};
use crate::params::PhysicalParams;
use crate::spectrum::{
    check_quantum_numbers, Approach, Branch, EigenRecord, IsEigen, Mode, OpKind,
};
use crate::transform::{coordinate_matrix, gram, pair, IdentityReport, TransformedSet};

const SPECIAL_POINT_TOL: f64 = 1e-12;

/// Singular values below this fraction of the largest count as zero.
pub const NULLSPACE_REL_TOL: f64 = 1e-10;

/// Check operators for one value of `chi`, with `phi` fixed at `pi/2`.
#[derive(Debug, Clone)]
pub struct IsTransform {
    pub phi: f64,
    pub chi: Complex64,
    pub cosh: Complex64,
    pub sinh: Complex64,
    /// Rows give `(chk a1, chk a2)` in terms of `(a1, a2~)` with `a2~ = -i a2^dag`.
    pub coefficients: [[Complex64; 2]; 2],
    pub ops: TransformedSet,
}

impl IsTransform {
    pub fn get(&self, s: Symbol) -> &CMatrix {
        self.ops.get(s)
    }

    /// `Some(Plus)` at `chi = i pi/4`, `Some(Minus)` at `chi = -i pi/4`.
    pub fn special_branch(&self) -> Option<Branch> {
        let quarter = Complex64::new(0.0, FRAC_PI_4);
        if (self.chi - quarter).norm() < SPECIAL_POINT_TOL {
            Some(Branch::Plus)
        } else if (self.chi + quarter).norm() < SPECIAL_POINT_TOL {
            Some(Branch::Minus)
        } else {
            None
        }
    }
}

/// `chi` for the branch: `+i pi/4` or `-i pi/4`.
pub fn branch_chi(branch: Branch) -> Complex64 {
    Complex64::new(0.0, branch.sign() as f64 * FRAC_PI_4)
}

/// Closed form of `exp(phi Y) a exp(-phi Y)` and its partner on one mode,
/// `Y = -(i/2)(a^2 - a^dag^2)`: `a~ = cos(phi) a - i sin(phi) a^dag`,
/// `a~^s = cos(phi) a^dag - i sin(phi) a`.
pub fn pseudo_squeeze(phi: Complex64, n_max: usize) -> (CMatrix, CMatrix) {
    let a = single_mode_lowering(n_max);
    let ad = a.transpose();
    let (cos, sin) = (phi.cos(), phi.sin());
    (&a * cos - &ad * (I * sin), &ad * cos - &a * (I * sin))
}

/// Deviation between the similarity route `exp(phi Y) a exp(-phi Y)` and
/// [`pseudo_squeeze`] on occupations up to `window`.
///
/// For imaginary `phi` the generator is anti-Hermitian and the truncated
/// exponential stays bounded, so low states are reproduced. At `phi = pi/2`
/// the route does not apply and only the closed form is used.
pub fn squeeze_similarity_deviation(phi: Complex64, n_max: usize, window: usize) -> Result<f64> {
    let a = single_mode_lowering(n_max);
    let ad = a.transpose();
    let y = (&a * &a - &ad * &ad) * Complex64::new(0.0, -0.5);
    let forward = matrix_exp(&(&y * phi))?;
    let backward = matrix_exp(&(&y * -phi))?;
    let (closed, closed_dual) = pseudo_squeeze(phi, n_max);
    let n = window.min(n_max) + 1;
    let lhs = &forward * &a * &backward;
    let lhs_dual = &forward * &ad * &backward;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst
                .max((lhs[(i, j)] - closed[(i, j)]).norm())
                .max((lhs_dual[(i, j)] - closed_dual[(i, j)]).norm());
        }
    }
    Ok(worst)
}

fn check_combo(cosh: Complex64, sinh: Complex64, s: Symbol) -> LadderCombo {
    match s {
        Symbol::B1 => LadderCombo::new(&[(cosh, Ladder::A1), (I * sinh, Ladder::A2Dag)]),
        Symbol::B2 => LadderCombo::new(&[(-sinh, Ladder::A1), (-I * cosh, Ladder::A2Dag)]),
        Symbol::B1Dag => LadderCombo::new(&[(cosh, Ladder::A1Dag), (-I * sinh, Ladder::A2)]),
        Symbol::B2Dag => LadderCombo::new(&[(sinh, Ladder::A1Dag), (-I * cosh, Ladder::A2)]),
    }
}

pub fn is_transform(chi: Complex64, ladder: &LadderSet) -> Result<IsTransform> {
    if !chi.re.is_finite() || !chi.im.is_finite() {
        return Err(BatemanError::Domain(format!(
            "chi must be finite, got {chi}"
        )));
    }
    let (cosh, sinh) = (chi.cosh(), chi.sinh());
    if !(cosh.norm().is_finite() && sinh.norm().is_finite()) {
        return Err(BatemanError::Numerical(format!(
            "cosh/sinh overflow at chi = {chi}"
        )));
    }
    Ok(IsTransform {
        phi: std::f64::consts::FRAC_PI_2,
        chi,
        cosh,
        sinh,
        coefficients: [[cosh, -sinh], [-sinh, cosh]],
        ops: TransformedSet::new(ladder.clone(), |s| check_combo(cosh, sinh, s)),
    })
}

/// Transform at `chi = +-i pi/4` for the branch.
pub fn is_headline_transform(branch: Branch, ladder: &LadderSet) -> Result<IsTransform> {
    is_transform(branch_chi(branch), ladder)
}

/// Interior deviations of `H0`, `H1` from their check-operator forms
///
/// `H0 = hbar w (N1 + N2 + 1)` for every `chi`, and
/// `H1 = hbar lambda [sinh 2x (N1 - N2) - cosh 2x (a2^s a1 - a1^s a2)]`;
/// at `chi = +-i pi/4` also against `+-i hbar lambda (N1 - N2)`.
pub fn h_in_check(
    is: &IsTransform,
    params: &PhysicalParams,
    margin: usize,
) -> Result<IdentityReport> {
    let ladder = &is.ops.ladder;
    let h = build_hamiltonian(ladder, params);
    let mask = ladder.space.interior_mask(margin)?;
    let n1 = is.ops.number(Mode::One);
    let n2 = is.ops.number(Mode::Two);
    let id = ladder.identity();
    let hl = c(params.hbar_lambda());

    let h0_form = (&n1 + &n2 + &id) * c(params.hbar_omega());
    let two = is.chi * 2.0;
    let hop =
        is.get(Symbol::B2Dag) * is.get(Symbol::B1) - is.get(Symbol::B1Dag) * is.get(Symbol::B2);
    let diff = &n1 - &n2;
    let h1_form = (&diff * two.sinh() - &hop * two.cosh()) * hl;
    let h1_reduced = is.special_branch().map(|b| {
        let reduced = &diff * Complex64::new(0.0, b.sign() as f64 * params.hbar_lambda());
        masked_deviation(&h.h1, &reduced, &mask)
    });
    Ok(IdentityReport {
        h0: masked_deviation(&h.h0, &h0_form, &mask),
        h1: masked_deviation(&h.h1, &h1_form, &mask),
        h1_reduced,
    })
}

/// `h = hbar w (n1 + n2 + 1) +- i hbar lambda (n1 - n2)`.
pub fn is_eigenvalue(
    n1: i64,
    n2: i64,
    branch: Branch,
    _params: &PhysicalParams,
) -> Result<IsEigen> {
    let (u1, u2) = check_quantum_numbers(n1, n2)?;
    Ok(EigenRecord {
        approach: Approach::Is,
        branch,
        n1: u1,
        n2: u2,
        p: n1 + n2 + 1,
        q: branch.sign() * (n1 - n2),
    })
}

/// Orthonormal basis of the joint kernel of the stacked matrices.
fn joint_kernel(blocks: &[CMatrix]) -> Result<Vec<CVector>> {
    let dim = blocks[0].ncols();
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut stacked = CMatrix::zeros(rows, dim);
    let mut at = 0;
    for b in blocks {
        stacked.view_mut((at, 0), (b.nrows(), dim)).copy_from(b);
        at += b.nrows();
    }
    let svd = stacked.svd(false, true);
    let v_t = svd
        .v_t
        .ok_or_else(|| BatemanError::Numerical("SVD did not return right vectors".into()))?;
    let largest = svd.singular_values.iter().copied().fold(0.0, f64::max);
    if !largest.is_finite() {
        return Err(BatemanError::Numerical("non-finite singular values".into()));
    }
    let cut = NULLSPACE_REL_TOL * largest.max(f64::MIN_POSITIVE);
    Ok(svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= cut)
        .map(|(i, _)| v_t.row(i).adjoint())
        .collect())
}

/// Rotates `v` so its largest component is real and positive.
fn fix_phase(v: CVector) -> CVector {
    let (_, top) =
        v.iter().map(|z| (z.norm(), *z)).fold(
            (0.0, ONE),
            |best, cur| if cur.0 > best.0 { cur } else { best },
        );
    v * (top.conj() / top.norm())
}

/// Vacuum pair `(|0)), ((0|)` as truncated joint kernels.
///
/// The ket spans the kernel of both check annihilators. The dual row spans
/// the left kernel of both check creators and is scaled so `((0|0)) = 1`.
pub fn is_vacuum(is: &IsTransform) -> Result<(CVector, CVector)> {
    let kernel = joint_kernel(&[is.get(Symbol::B1).clone(), is.get(Symbol::B2).clone()])?;
    if kernel.len() != 1 {
        return Err(BatemanError::Nullspace { dim: kernel.len() });
    }
    let dual = joint_kernel(&[
        is.get(Symbol::B1Dag).transpose(),
        is.get(Symbol::B2Dag).transpose(),
    ])?;
    if dual.len() != 1 {
        return Err(BatemanError::Nullspace { dim: dual.len() });
    }
    let ket = fix_phase(kernel.into_iter().next().expect("one vector"));
    let bra = dual.into_iter().next().expect("one vector");
    let overlap = pair(&bra, &ket);
    if overlap.norm() < NULLSPACE_REL_TOL {
        return Err(BatemanError::Numerical(
            "vacuum and dual vacuum do not pair".into(),
        ));
    }
    Ok((ket, bra / overlap))
}

fn check_headroom(n1: usize, n2: usize, space: &FockSpace) -> Result<()> {
    let headroom = space.n_max().saturating_sub(2);
    if n1 + n2 > headroom {
        return Err(BatemanError::Headroom { n1, n2, headroom });
    }
    Ok(())
}

/// Basis pair `(|n1, n2)), ((n1, n2|)` built on [`is_vacuum`].
pub fn is_basis(is: &IsTransform, n1: usize, n2: usize) -> Result<(CVector, CVector)> {
    check_headroom(n1, n2, &is.ops.ladder.space)?;
    let (ket0, bra0) = is_vacuum(is)?;
    let ops = &is.ops.combos;
    Ok((ops.raise(&ket0, n1, n2), ops.lower_dual(&bra0, n1, n2)))
}

/// Pairing matrix over all states with occupations up to `max_q`, with its
/// largest deviation from the identity.
pub fn is_gram(is: &IsTransform, max_q: usize) -> Result<(CMatrix, f64)> {
    check_headroom(max_q, max_q, &is.ops.ladder.space)?;
    let (ket0, bra0) = is_vacuum(is)?;
    let ops = &is.ops.combos;
    let mut kets = Vec::new();
    let mut bras = Vec::new();
    for n1 in 0..=max_q {
        for n2 in 0..=max_q {
            kets.push(ops.raise(&ket0, n1, n2));
            bras.push(ops.lower_dual(&bra0, n1, n2));
        }
    }
    Ok(gram(&bras, &kets))
}

/// `((n1, n2| H |n1, n2))` with the truncated original Hamiltonian.
pub fn is_diagonal_element(
    is: &IsTransform,
    n1: usize,
    n2: usize,
    params: &PhysicalParams,
) -> Result<Complex64> {
    let (ket, bra) = is_basis(is, n1, n2)?;
    let h = build_hamiltonian(&is.ops.ladder, params).h;
    Ok(pair(&bra, &(h * ket)))
}

/// Heisenberg exponent of a check operator on the given branch.
///
/// `chk a1 ~ e^{(-i w +- lambda) t}`, `chk a2 ~ e^{(-i w -+ lambda) t}`, partners reciprocal.
pub fn is_rate(s: Symbol, branch: Branch) -> RateExponent {
    let l = branch.sign() as i32;
    match s {
        Symbol::B1 => RateExponent::new(l, -1),
        Symbol::B2 => RateExponent::new(-l, -1),
        Symbol::B1Dag => RateExponent::new(-l, 1),
        Symbol::B2Dag => RateExponent::new(l, 1),
    }
}

pub fn is_heisenberg_factor(
    mode: Mode,
    kind: OpKind,
    branch: Branch,
    t: f64,
    params: &PhysicalParams,
) -> Complex64 {
    (is_rate(Symbol::from_parts(mode, kind), branch).value(params) * t).exp()
}

fn term(coeff: crate::algebra::QComplex, symbol: Symbol, branch: Branch) -> ModeTerm {
    ModeTerm {
        coeff,
        symbol,
        rate: is_rate(symbol, branch),
    }
}

/// `x(t)` in check operators at `chi = +-i pi/4`, prefactor excluded.
pub fn is_x_expansion(branch: Branch) -> ModeExpansion {
    match branch {
        Branch::Plus => ModeExpansion::new(vec![
            term(q_int(1), Symbol::B1Dag, branch),
            term(q_gauss(0, 1), Symbol::B2, branch),
        ]),
        Branch::Minus => ModeExpansion::new(vec![
            term(q_int(1), Symbol::B1, branch),
            term(q_gauss(0, 1), Symbol::B2Dag, branch),
        ]),
    }
}

/// `y(t)`, the s-conjugate of [`is_x_expansion`].
pub fn is_y_expansion(branch: Branch) -> ModeExpansion {
    match branch {
        Branch::Plus => ModeExpansion::new(vec![
            term(q_int(1), Symbol::B1, branch),
            term(q_gauss(0, -1), Symbol::B2Dag, branch),
        ]),
        Branch::Minus => ModeExpansion::new(vec![
            term(q_int(1), Symbol::B1Dag, branch),
            term(q_gauss(0, -1), Symbol::B2, branch),
        ]),
    }
}

/// Matrices of `x(t)` and `y(t)` assembled from the `t = 0` check operators.
pub fn is_xy_operators(
    branch: Branch,
    t: f64,
    is: &IsTransform,
    params: &PhysicalParams,
) -> Result<(CMatrix, CMatrix)> {
    if is.special_branch() != Some(branch) {
        return Err(BatemanError::Domain(format!(
            "transform built at chi = {} does not match branch {branch}",
            is.chi
        )));
    }
    let m = |s: Symbol| is.get(s).clone();
    Ok((
        is_x_expansion(branch).matrix(t, params, m),
        is_y_expansion(branch).matrix(t, params, m),
    ))
}

/// Interior deviation of `x(0)`, `y(0)` from `(x1 +- x2)/sqrt2`.
pub fn is_xy_reconstruction(
    branch: Branch,
    is: &IsTransform,
    params: &PhysicalParams,
    margin: usize,
) -> Result<f64> {
    let (x, y) = is_xy_operators(branch, 0.0, is, params)?;
    let ladder = &is.ops.ladder;
    let mask = ladder.space.interior_mask(margin)?;
    let dx = masked_deviation(&x, &coordinate_matrix(ladder, 1.0, params), &mask);
    let dy = masked_deviation(&y, &coordinate_matrix(ladder, -1.0, params), &mask);
    Ok(dx.max(dy))
}

/// Original operators in check symbols at `chi = +-i pi/4`, with `1/sqrt2` factored out.
///
/// `a1 = chk a1 +- i chk a2`, `a2^dag = -+chk a1 + i chk a2`,
/// `a1^dag = chk a1^s -+ i chk a2^s`, `a2 = +-chk a1^s + i chk a2^s`.
pub fn is_inverse_substitution(branch: Branch) -> Substitution {
    let s = branch.sign();
    let one = q_int(1);
    let i = q_gauss(0, 1);
    Substitution::new(
        |sym| match sym {
            Symbol::B1 => {
                LadderPoly::linear(&[(one.clone(), Symbol::B1), (q_gauss(0, s), Symbol::B2)])
            }
            Symbol::B2Dag => {
                LadderPoly::linear(&[(q_int(-s), Symbol::B1), (i.clone(), Symbol::B2)])
            }
            Symbol::B1Dag => LadderPoly::linear(&[
                (one.clone(), Symbol::B1Dag),
                (q_gauss(0, -s), Symbol::B2Dag),
            ]),
            Symbol::B2 => {
                LadderPoly::linear(&[(q_int(s), Symbol::B1Dag), (i.clone(), Symbol::B2Dag)])
            }
        },
        q_frac(1, 2),
    )
}

/// `hbar w (N1 + N2 + 1) +- i hbar lambda (N1 - N2)` in check symbols.
pub fn is_formal_hamiltonian(branch: Branch) -> LadderPoly {
    let hw = UnitScalar::tagged(q_int(1), Unit::HbarOmega);
    let hl = UnitScalar::tagged(q_int(branch.sign()), Unit::IHbarLambda);
    let free = number1().add(&number2()).add(&LadderPoly::one());
    let coupling = number1().sub(&number2());
    free.try_scale(&hw)
        .and_then(|f| Ok(f.add(&coupling.try_scale(&hl)?)))
        .expect("single-unit scaling")
}

/// The Hamiltonian rewritten in check symbols by substitution and normal ordering.
pub fn is_derived_hamiltonian(branch: Branch) -> Result<LadderPoly> {
    Ok(normal_order(
        &bateman_hamiltonian().substitute(&is_inverse_substitution(branch))?,
    ))
}

/// Eigenvalues of the truncated original Hamiltonian, sorted by real then
/// imaginary part. Exploratory only.
pub fn exploratory_spectrum(ladder: &LadderSet, params: &PhysicalParams) -> Result<Vec<Complex64>> {
    let h = build_hamiltonian(ladder, params).h;
    let mut eig: Vec<Complex64> = h
        .schur()
        .eigenvalues()
        .ok_or_else(|| BatemanError::Numerical("Schur form did not converge".into()))?
        .iter()
        .copied()
        .collect();
    eig.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(eig)
}

/// One row of the FT/IS comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContrastRow {
    pub n1: usize,
    pub n2: usize,
    pub ft: (i64, i64),
    pub is: (i64, i64),
}

impl ContrastRow {
    /// The two integer pairs are transposes of each other.
    pub fn is_transposed(&self) -> bool {
        self.ft.0 == self.is.1 && self.ft.1 == self.is.0
    }
}

/// `(p, q)` of both eigenvalue families on the `+` branch for occupations up to `max_q`.
pub fn contrast_table(max_q: usize, params: &PhysicalParams) -> Result<Vec<ContrastRow>> {
    let mut rows = Vec::new();
    for n1 in 0..=max_q as i64 {
        for n2 in 0..=max_q as i64 {
            let f = crate::pseudo_bogoliubov::ft_eigenvalue(n1, n2, Branch::Plus, params)?;
            let s = is_eigenvalue(n1, n2, Branch::Plus, params)?;
            rows.push(ContrastRow {
                n1: n1 as usize,
                n2: n2 as usize,
                ft: (f.p, f.q),
                is: (s.p, s.q),
            });
        }
    }
    Ok(rows)
}
