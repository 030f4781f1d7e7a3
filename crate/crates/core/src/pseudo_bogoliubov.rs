//! Pseudo-Bogoliubov quantization.
//!
//! The generator `X = a1 a2 + a1^dag a2^dag` mixes `a1` with `a2^dag`:
//!
//! ```text
//! bar a1   = cos(t) a1     - sin(t) a2^dag      bar a2^dd = sin(t) a1     + cos(t) a2^dag
//! bar a1^dd = cos(t) a1^dag + sin(t) a2          bar a2    = -sin(t) a1^dag + cos(t) a2
//! ```
//!
//! At `theta = +-pi/4` the Hamiltonian becomes
//! `hbar w (N1 - N2) +- i hbar lambda (N1 + N2 + 1)` in bar number operators,
//! with purely imaginary coupling eigenvalues. The dual pair of each
//! operator (`^dd`) is not its matrix adjoint unless `theta` is imaginary.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use num_complex::Complex64;

use crate::accel::wynn_epsilon;
use crate::algebra::scalar::{q_int, Unit};
use crate::algebra::{
    bateman_hamiltonian, normal_order, number1, number2, LadderPoly, ModeExpansion, ModeTerm,
    RateExponent, Substitution, Symbol, UnitScalar,
};
use crate::error::{BatemanError, Result};
use crate::fock::{
    build_hamiltonian, c, masked_deviation, matrix_exp, CMatrix, CVector, FockSpace, Ladder,
    LadderCombo, LadderSet, Representation, ONE,
};
use crate::params::PhysicalParams;
use crate::spectrum::{
    check_quantum_numbers, Approach, Branch, EigenRecord, FtEigen, Mode, OpKind,
};
use crate::transform::{coordinate_matrix, gram, ComboSet, IdentityReport, TransformedSet};

/// Tolerance for recognizing `theta = +-pi/4`.
const SPECIAL_POINT_TOL: f64 = 1e-12;

/// Bar operators for one value of `theta`.
#[derive(Debug, Clone)]
pub struct FtTransform {
    pub theta: Complex64,
    pub cos: Complex64,
    pub sin: Complex64,
    /// Maps `(a1, a2^dag)` to `(bar a1, bar a2^dd)`; the same matrix maps
    /// `(a1^dag, a2)` to `(bar a1^dd, -bar a2)` up to the sign pattern above.
    pub coefficients: [[Complex64; 2]; 2],
    pub ops: TransformedSet,
}

impl FtTransform {
    pub fn get(&self, s: Symbol) -> &CMatrix {
        self.ops.get(s)
    }

    /// `Some(branch)` when `theta` equals `+pi/4` or `-pi/4`.
    pub fn special_branch(&self) -> Option<Branch> {
        quarter_branch(self.theta)
    }
}

fn quarter_branch(theta: Complex64) -> Option<Branch> {
    if (theta - c(FRAC_PI_4)).norm() < SPECIAL_POINT_TOL {
        Some(Branch::Plus)
    } else if (theta + c(FRAC_PI_4)).norm() < SPECIAL_POINT_TOL {
        Some(Branch::Minus)
    } else {
        None
    }
}

/// `theta` for the branch: `+pi/4` or `-pi/4`.
pub fn branch_theta(branch: Branch) -> Complex64 {
    c(branch.sign() as f64 * FRAC_PI_4)
}

fn bar_combo(cos: Complex64, sin: Complex64, s: Symbol) -> LadderCombo {
    match s {
        Symbol::B1 => LadderCombo::new(&[(cos, Ladder::A1), (-sin, Ladder::A2Dag)]),
        Symbol::B2Dag => LadderCombo::new(&[(sin, Ladder::A1), (cos, Ladder::A2Dag)]),
        Symbol::B1Dag => LadderCombo::new(&[(cos, Ladder::A1Dag), (sin, Ladder::A2)]),
        Symbol::B2 => LadderCombo::new(&[(-sin, Ladder::A1Dag), (cos, Ladder::A2)]),
    }
}

fn check_theta(theta: Complex64) -> Result<()> {
    if !theta.re.is_finite() || !theta.im.is_finite() {
        return Err(BatemanError::Domain(format!(
            "theta must be finite, got {theta}"
        )));
    }
    Ok(())
}

fn bar_combos(theta: Complex64, space: FockSpace) -> ComboSet {
    let (cos, sin) = (theta.cos(), theta.sin());
    ComboSet::new(space, Representation::Standard, |s| bar_combo(cos, sin, s))
}

pub fn ft_transform(theta: Complex64, ladder: &LadderSet) -> Result<FtTransform> {
    check_theta(theta)?;
    let (cos, sin) = (theta.cos(), theta.sin());
    if !cos.re.is_finite() || !sin.re.is_finite() || !cos.im.is_finite() || !sin.im.is_finite() {
        return Err(BatemanError::Numerical(format!(
            "cos/sin overflow at theta = {theta}"
        )));
    }
    Ok(FtTransform {
        theta,
        cos,
        sin,
        coefficients: [[cos, -sin], [sin, cos]],
        ops: TransformedSet::new(ladder.clone(), |s| bar_combo(cos, sin, s)),
    })
}

/// Interior deviations of `H0` and `H1` from their bar-operator forms
///
/// `H0 = hbar w (N1 - N2)` and
/// `H1 = i hbar lambda [(a1 a2 - a1^dd a2^dd) cos 2t + (N1 + N2 + 1) sin 2t]`;
/// at `theta = +-pi/4` also against `+-i hbar lambda (N1 + N2 + 1)`.
pub fn h1_in_bar(
    ft: &FtTransform,
    params: &PhysicalParams,
    margin: usize,
) -> Result<IdentityReport> {
    let ladder = &ft.ops.ladder;
    let h = build_hamiltonian(ladder, params);
    let mask = ladder.space.interior_mask(margin)?;
    let n1 = ft.ops.number(Mode::One);
    let n2 = ft.ops.number(Mode::Two);
    let id = ladder.identity();
    let ihl = Complex64::new(0.0, params.hbar_lambda());

    let h0_form = (&n1 - &n2) * c(params.hbar_omega());
    let pair =
        ft.get(Symbol::B1) * ft.get(Symbol::B2) - ft.get(Symbol::B1Dag) * ft.get(Symbol::B2Dag);
    let total = &n1 + &n2 + &id;
    let two = ft.theta * 2.0;
    let h1_form = (&pair * two.cos() + &total * two.sin()) * ihl;

    let h1_reduced = ft.special_branch().map(|b| {
        let reduced = &total * (ihl * b.sign() as f64);
        masked_deviation(&h.h1, &reduced, &mask)
    });
    Ok(IdentityReport {
        h0: masked_deviation(&h.h0, &h0_form, &mask),
        h1: masked_deviation(&h.h1, &h1_form, &mask),
        h1_reduced,
    })
}

/// `h = hbar w (n1 - n2) +- i hbar lambda (n1 + n2 + 1)`.
pub fn ft_eigenvalue(
    n1: i64,
    n2: i64,
    branch: Branch,
    _params: &PhysicalParams,
) -> Result<FtEigen> {
    let (u1, u2) = check_quantum_numbers(n1, n2)?;
    Ok(EigenRecord {
        approach: Approach::Ft,
        branch,
        n1: u1,
        n2: u2,
        p: n1 - n2,
        q: branch.sign() * (n1 + n2 + 1),
    })
}

/// Truncated vacuum pair `(|0>>, <<0|)`.
///
/// The ket is `sum_n tan^n(t) / cos(t) |n, n>` and the dual row is
/// `sum_n (-tan(t))^n / cos(t) <n, n|`, both cut at `n_max`. Their
/// pairing is `1 - (-tan^2 t)^(n_max + 1)`.
pub fn ft_vacuum_series(theta: Complex64, space: &FockSpace) -> Result<(CVector, CVector)> {
    check_theta(theta)?;
    let tan = theta.tan();
    if !(tan.norm() < 1.0) {
        return Err(BatemanError::SeriesDivergence(format!(
            "|tan theta| = {} >= 1 at theta = {theta}",
            tan.norm()
        )));
    }
    let inv_cos = theta.cos().inv();
    let mut ket = CVector::zeros(space.dim());
    let mut bra = CVector::zeros(space.dim());
    let mut power = ONE;
    for n in 0..=space.n_max() {
        let i = space.index(n, n);
        ket[i] = inv_cos * power;
        bra[i] = inv_cos * if n % 2 == 0 { power } else { -power };
        power *= tan;
    }
    Ok((ket, bra))
}

/// Basis pair `(|n1, n2>>, <<n1, n2|)` built from the truncated vacuum series
/// by repeated bar creators and annihilators.
pub fn ft_basis(
    theta: Complex64,
    n1: usize,
    n2: usize,
    space: &FockSpace,
) -> Result<(CVector, CVector)> {
    let (ket0, bra0) = ft_vacuum_series(theta, space)?;
    let ops = bar_combos(theta, *space);
    Ok((ops.raise(&ket0, n1, n2), ops.lower_dual(&bra0, n1, n2)))
}

/// States `|k + d, k>` (or `|k, k - d>` for `d < 0`) of one `n1 - n2 = d` sector.
fn sector_states(space: &FockSpace, d: i64) -> Vec<(usize, usize)> {
    let n = space.n_max() as i64;
    (0..=n - d.abs())
        .map(|k| {
            if d >= 0 {
                ((k + d) as usize, k as usize)
            } else {
                (k as usize, (k - d) as usize)
            }
        })
        .collect()
}

/// `exp(theta X)` restricted to the sector `n1 - n2 = d`, where `X` is tridiagonal.
fn sector_exp(
    space: &FockSpace,
    theta: Complex64,
    d: i64,
) -> Result<(Vec<(usize, usize)>, CMatrix)> {
    let states = sector_states(space, d);
    let len = states.len();
    let mut block = CMatrix::zeros(len, len);
    for k in 0..len.saturating_sub(1) {
        let (a, b) = states[k];
        let amp = c((((a + 1) * (b + 1)) as f64).sqrt()) * theta;
        block[(k + 1, k)] = amp;
        block[(k, k + 1)] = amp;
    }
    Ok((states, matrix_exp(&block)?))
}

/// Dense `exp(theta X)` on the standard truncation, assembled sector by sector.
pub fn generator_exp(space: &FockSpace, theta: Complex64) -> Result<CMatrix> {
    check_theta(theta)?;
    let n = space.n_max() as i64;
    let mut out = CMatrix::zeros(space.dim(), space.dim());
    for d in -n..=n {
        let (states, e) = sector_exp(space, theta, d)?;
        for (j, &(b1, b2)) in states.iter().enumerate() {
            for (i, &(a1, a2)) in states.iter().enumerate() {
                out[(space.index(a1, a2), space.index(b1, b2))] = e[(i, j)];
            }
        }
    }
    Ok(out)
}

/// Basis pair from the generator route: `exp(theta X)|n1, n2>` and the row
/// `<n1, n2| exp(-theta X)` as a column.
pub fn ft_basis_generator(
    theta: Complex64,
    n1: usize,
    n2: usize,
    space: &FockSpace,
) -> Result<(CVector, CVector)> {
    check_theta(theta)?;
    if n1 > space.n_max() || n2 > space.n_max() {
        return Err(BatemanError::Headroom {
            n1,
            n2,
            headroom: space.n_max(),
        });
    }
    let d = n1 as i64 - n2 as i64;
    let k = n1.min(n2);
    let (states, forward) = sector_exp(space, theta, d)?;
    let (_, backward) = sector_exp(space, -theta, d)?;
    let mut ket = CVector::zeros(space.dim());
    let mut bra = CVector::zeros(space.dim());
    for (i, &(a1, a2)) in states.iter().enumerate() {
        ket[space.index(a1, a2)] = forward[(i, k)];
        bra[space.index(a1, a2)] = backward[(k, i)];
    }
    Ok((ket, bra))
}

/// Largest deviation, on states with both occupations at most `window`, between
/// `exp(theta X) a exp(-theta X)` and the closed-form bar operators.
///
/// The truncated similarity transform only tracks the closed form far from
/// the cutoff and for small `|theta|`; near `|theta| = pi/4` the truncated
/// exponentials amplify the boundary defect and this route is unusable.
pub fn ft_similarity_deviation(ft: &FtTransform, window: usize) -> Result<f64> {
    let ladder = &ft.ops.ladder;
    if ladder.representation != Representation::Standard {
        return Err(BatemanError::Domain(
            "generator route needs the standard representation".into(),
        ));
    }
    let space = ladder.space;
    let forward = generator_exp(&space, ft.theta)?;
    let backward = generator_exp(&space, -ft.theta)?;
    let mask = space.window_mask(window);
    let originals = [
        (Symbol::B1, &ladder.a1),
        (Symbol::B1Dag, &ladder.a1dag),
        (Symbol::B2, &ladder.a2),
        (Symbol::B2Dag, &ladder.a2dag),
    ];
    let mut worst = 0.0f64;
    for (s, a) in originals {
        let similar = &forward * a * &backward;
        worst = worst.max(masked_deviation(&similar, ft.get(s), &mask));
    }
    Ok(worst)
}

/// Pairing matrix `<<m|n>>` over all `m, n` with occupations at most `max_q`,
/// and its largest deviation from the identity.
pub fn ft_gram(theta: Complex64, max_q: usize, space: &FockSpace) -> Result<(CMatrix, f64)> {
    let (ket0, bra0) = ft_vacuum_series(theta, space)?;
    let ops = bar_combos(theta, *space);
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

fn check_big_theta(big_theta: f64) -> Result<()> {
    if !big_theta.is_finite() || big_theta.abs() >= FRAC_PI_2 {
        return Err(BatemanError::SeriesDivergence(format!(
            "standard norm diverges for |theta + theta*| = {} >= pi/2",
            big_theta.abs()
        )));
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Standard squared norm `<n| exp((theta + theta*) X) |n>`.
///
/// Evaluated through the disentangled form
/// `exp(T X) = exp(tan T a1^dag a2^dag) cos(T)^-(N1+N2+1) exp(tan T a1 a2)`,
/// which leaves the finite sum
/// `cos(T)^-(n1+n2+1) sum_k sin(T)^2k C(n1,k) C(n2,k)`.
pub fn ft_standard_norm(theta: Complex64, n1: usize, n2: usize) -> Result<f64> {
    standard_norm_at(2.0 * theta.re, n1, n2)
}

/// [`ft_standard_norm`] as a function of `T = theta + theta*`.
pub fn standard_norm_at(big_theta: f64, n1: usize, n2: usize) -> Result<f64> {
    check_big_theta(big_theta)?;
    let s2 = big_theta.sin().powi(2);
    let sum: f64 = (0..=n1.min(n2))
        .map(|k| s2.powi(k as i32) * binomial(n1, k) * binomial(n2, k))
        .sum();
    Ok(sum / big_theta.cos().powi((n1 + n2 + 1) as i32))
}

/// Known closed forms of the standard norm, where available.
pub fn ft_norm_closed_form(big_theta: f64, n1: usize, n2: usize) -> Option<f64> {
    let cos = big_theta.cos();
    match (n1, n2) {
        (0, 0) => Some(1.0 / cos),
        (1, 0) | (0, 1) => Some(1.0 / (cos * cos)),
        (1, 1) => Some((2.0 - cos * cos) / cos.powi(3)),
        _ => None,
    }
}

/// Standard norm obtained by summing squared moduli of the truncated series state.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedNorm {
    /// Wynn-accelerated limit of the shell partial sums.
    pub value: f64,
    /// Plain partial sum over all trusted shells.
    pub partial_sum: f64,
    /// Number of shells summed.
    pub shells: usize,
}

/// Standard norm from the state `|n1, n2>>` at `theta = T/2` built on a
/// truncated space with cutoff `n_max`.
///
/// Components are grouped by shell `k = min(j1, j2)`. Shells whose values
/// are touched by the cutoff are dropped, and the remaining partial sums are
/// extrapolated; the raw tail decays only like `tan^2k` times a polynomial.
pub fn ft_standard_norm_truncated(
    big_theta: f64,
    n1: usize,
    n2: usize,
    n_max: usize,
) -> Result<TruncatedNorm> {
    check_big_theta(big_theta)?;
    let space = FockSpace::new(n_max)?;
    let top = n1.max(n2);
    if top + 4 > n_max {
        return Err(BatemanError::Headroom {
            n1,
            n2,
            headroom: n_max,
        });
    }
    let (ket, _) = ft_basis(c(big_theta / 2.0), n1, n2, &space)?;
    let d = n1 as i64 - n2 as i64;
    // creators acting on the top shells see the cutoff
    let trusted = n_max - (n1 + n2) - 1 - d.unsigned_abs() as usize;
    let mut partial = Vec::with_capacity(trusted + 1);
    let mut sum = 0.0;
    for &(a1, a2) in sector_states(&space, d).iter().take(trusted + 1) {
        sum += ket[space.index(a1, a2)].norm_sqr();
        partial.push(sum);
    }
    let tail = partial.len().min(24);
    let value = wynn_epsilon(&partial[partial.len() - tail..]);
    Ok(TruncatedNorm {
        value,
        partial_sum: sum,
        shells: partial.len(),
    })
}

/// The `T -> pi/2` grid `pi/2 - 10^-j`, `j = 1..=4`.
pub fn epsilon_grid() -> Vec<f64> {
    (1..=4).map(|j| FRAC_PI_2 - 10f64.powi(-j)).collect()
}

/// Least-squares slope of `ln norm` against `-ln cos T`.
pub fn ft_norm_exponent_fit(big_thetas: &[f64], n1: usize, n2: usize) -> Result<f64> {
    if big_thetas.len() < 3 {
        return Err(BatemanError::Fit(format!(
            "need at least 3 samples, got {}",
            big_thetas.len()
        )));
    }
    let mut xs = Vec::with_capacity(big_thetas.len());
    let mut ys = Vec::with_capacity(big_thetas.len());
    for &t in big_thetas {
        if !(t > 0.0) {
            return Err(BatemanError::Fit(format!(
                "sample {t} must lie in (0, pi/2)"
            )));
        }
        xs.push(-t.cos().ln());
        ys.push(standard_norm_at(t, n1, n2)?.ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(BatemanError::Fit("samples are degenerate".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

/// Limit of `cos(T)^(n1+n2+1) * norm` as `T -> pi/2`, equal to `C(n1 + n2, n1)`.
pub fn ft_norm_asymptotic_constant(n1: usize, n2: usize) -> f64 {
    binomial(n1 + n2, n1)
}

/// Heisenberg exponent of a bar operator on the given branch.
///
/// `bar a1 ~ e^{(-i w +- lambda) t}`, `bar a2 ~ e^{(i w +- lambda) t}`, partners reciprocal.
pub fn ft_rate(s: Symbol, branch: Branch) -> RateExponent {
    let l = branch.sign() as i32;
    match s {
        Symbol::B1 => RateExponent::new(l, -1),
        Symbol::B2 => RateExponent::new(l, 1),
        Symbol::B1Dag => RateExponent::new(-l, 1),
        Symbol::B2Dag => RateExponent::new(-l, -1),
    }
}

pub fn ft_heisenberg_factor(
    mode: Mode,
    kind: OpKind,
    branch: Branch,
    t: f64,
    params: &PhysicalParams,
) -> Complex64 {
    (ft_rate(Symbol::from_parts(mode, kind), branch).value(params) * t).exp()
}

/// `x(t)` and `y(t)` in bar operators at `theta = +-pi/4`, prefactor excluded.
pub fn ft_x_expansion(branch: Branch) -> ModeExpansion {
    let syms = match branch {
        Branch::Plus => [Symbol::B1Dag, Symbol::B2Dag],
        Branch::Minus => [Symbol::B1, Symbol::B2],
    };
    ModeExpansion::new(
        syms.iter()
            .map(|&s| ModeTerm {
                coeff: q_int(1),
                symbol: s,
                rate: ft_rate(s, branch),
            })
            .collect(),
    )
}

pub fn ft_y_expansion(branch: Branch) -> ModeExpansion {
    let syms = match branch {
        Branch::Plus => [Symbol::B1, Symbol::B2],
        Branch::Minus => [Symbol::B1Dag, Symbol::B2Dag],
    };
    ModeExpansion::new(vec![
        ModeTerm {
            coeff: q_int(1),
            symbol: syms[0],
            rate: ft_rate(syms[0], branch),
        },
        ModeTerm {
            coeff: q_int(-1),
            symbol: syms[1],
            rate: ft_rate(syms[1], branch),
        },
    ])
}

fn require_branch(ft: &FtTransform, branch: Branch) -> Result<()> {
    if ft.special_branch() != Some(branch) {
        return Err(BatemanError::Domain(format!(
            "transform built at theta = {} does not match branch {branch}",
            ft.theta
        )));
    }
    Ok(())
}

/// Matrices of `x(t)` and `y(t)` assembled from the `t = 0` bar operators.
pub fn ft_xy_operators(
    branch: Branch,
    t: f64,
    ft: &FtTransform,
    params: &PhysicalParams,
) -> Result<(CMatrix, CMatrix)> {
    require_branch(ft, branch)?;
    let m = |s: Symbol| ft.get(s).clone();
    Ok((
        ft_x_expansion(branch).matrix(t, params, m),
        ft_y_expansion(branch).matrix(t, params, m),
    ))
}

/// Interior deviation of `x(0)`, `y(0)` from `(x1 +- x2)/sqrt2`.
pub fn ft_xy_reconstruction(
    branch: Branch,
    ft: &FtTransform,
    params: &PhysicalParams,
    margin: usize,
) -> Result<f64> {
    let (x, y) = ft_xy_operators(branch, 0.0, ft, params)?;
    let ladder = &ft.ops.ladder;
    let mask = ladder.space.interior_mask(margin)?;
    let dx = masked_deviation(&x, &coordinate_matrix(ladder, 1.0, params), &mask);
    let dy = masked_deviation(&y, &coordinate_matrix(ladder, -1.0, params), &mask);
    Ok(dx.max(dy))
}

/// Original operators in bar symbols at `theta = +-pi/4`, with `1/sqrt2` factored out.
///
/// `a1 = c bar a1 + s bar a2^dd`, `a2^dag = -s bar a1 + c bar a2^dd`,
/// `a1^dag = c bar a1^dd - s bar a2`, `a2 = s bar a1^dd + c bar a2`.
pub fn ft_inverse_substitution(branch: Branch) -> Substitution {
    let s = q_int(branch.sign());
    let one = q_int(1);
    Substitution::new(
        |sym| match sym {
            Symbol::B1 => {
                LadderPoly::linear(&[(one.clone(), Symbol::B1), (s.clone(), Symbol::B2Dag)])
            }
            Symbol::B2Dag => {
                LadderPoly::linear(&[(-s.clone(), Symbol::B1), (one.clone(), Symbol::B2Dag)])
            }
            Symbol::B1Dag => {
                LadderPoly::linear(&[(one.clone(), Symbol::B1Dag), (-s.clone(), Symbol::B2)])
            }
            Symbol::B2 => {
                LadderPoly::linear(&[(s.clone(), Symbol::B1Dag), (one.clone(), Symbol::B2)])
            }
        },
        crate::algebra::scalar::q_frac(1, 2),
    )
}

/// `hbar w (N1 - N2) +- i hbar lambda (N1 + N2 + 1)` in bar symbols.
pub fn ft_formal_hamiltonian(branch: Branch) -> LadderPoly {
    let hw = UnitScalar::tagged(q_int(1), Unit::HbarOmega);
    let hl = UnitScalar::tagged(q_int(branch.sign()), Unit::IHbarLambda);
    let free = number1().sub(&number2());
    let coupling = number1().add(&number2()).add(&LadderPoly::one());
    free.try_scale(&hw)
        .and_then(|f| Ok(f.add(&coupling.try_scale(&hl)?)))
        .expect("single-unit scaling")
}

/// The Hamiltonian rewritten in bar symbols by substitution and normal ordering.
pub fn ft_derived_hamiltonian(branch: Branch) -> Result<LadderPoly> {
    Ok(normal_order(
        &bateman_hamiltonian().substitute(&ft_inverse_substitution(branch))?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{basis_matrix_element, position_expansion};
    use crate::fock::{build_ladder, max_abs};
    use crate::spectrum::Motion;
    use crate::transform::pair;

    fn params() -> PhysicalParams {
        PhysicalParams::default()
    }

    #[test]
    fn zero_angle_is_the_identity_transform() {
        let l = build_ladder(4).unwrap();
        let ft = ft_transform(c(0.0), &l).unwrap();
        assert_eq!(ft.get(Symbol::B1), &l.a1);
        assert_eq!(ft.get(Symbol::B2), &l.a2);
        assert_eq!(ft.get(Symbol::B1Dag), &l.a1dag);
        assert_eq!(ft.get(Symbol::B2Dag), &l.a2dag);
    }

    #[test]
    fn quarter_angle_bar_annihilator() {
        let l = build_ladder(4).unwrap();
        let ft = ft_transform(c(FRAC_PI_4), &l).unwrap();
        let expected = (&l.a1 - &l.a2dag) * c(std::f64::consts::FRAC_1_SQRT_2);
        assert!(max_abs(&(ft.get(Symbol::B1) - expected)) < 1e-15);
        assert_eq!(ft.special_branch(), Some(Branch::Plus));
    }

    #[test]
    fn bar_commutators_on_interior() {
        let l = build_ladder(8).unwrap();
        for theta in [c(0.3), Complex64::new(0.2, 0.1), c(-FRAC_PI_4)] {
            let ft = ft_transform(theta, &l).unwrap();
            assert!(ft.ops.commutator_deviation(1).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn hamiltonian_identities() {
        let l = build_ladder(12).unwrap();
        let p = params();
        let zero = h1_in_bar(&ft_transform(c(0.0), &l).unwrap(), &p, 2).unwrap();
        assert_eq!(zero.h1, 0.0);
        for theta in [c(FRAC_PI_4), c(-FRAC_PI_4), c(0.3)] {
            let r = h1_in_bar(&ft_transform(theta, &l).unwrap(), &p, 2).unwrap();
            assert!(r.max() <= 1e-10, "{theta}: {r:?}");
        }
    }

    #[test]
    fn eigenvalue_examples() {
        let p = params();
        let e = ft_eigenvalue(0, 0, Branch::Plus, &p).unwrap();
        assert_eq!((e.p, e.q), (0, 1));
        let e = ft_eigenvalue(0, 0, Branch::Minus, &p).unwrap();
        assert_eq!((e.p, e.q), (0, -1));
        let e = ft_eigenvalue(2, 1, Branch::Plus, &p).unwrap();
        assert_eq!((e.p, e.q), (1, 4));
        assert_eq!(e.value(&p), Complex64::new(1.0, 2.0));
        assert!(matches!(
            ft_eigenvalue(-1, 0, Branch::Plus, &p),
            Err(BatemanError::Domain(_))
        ));
    }

    #[test]
    fn vacuum_series_examples() {
        let space = FockSpace::new(24).unwrap();
        let (ket, bra) = ft_vacuum_series(c(0.0), &space).unwrap();
        assert_eq!(ket, space.basis_vector(0, 0));
        assert_eq!(bra, space.basis_vector(0, 0));
        let (ket, bra) = ft_vacuum_series(c(0.3), &space).unwrap();
        assert!((pair(&bra, &ket) - ONE).norm() <= 1e-12);
        assert!(matches!(
            ft_vacuum_series(c(FRAC_PI_4), &space),
            Err(BatemanError::SeriesDivergence(_))
        ));
    }

    #[test]
    fn vacuum_is_annihilated_below_the_cutoff() {
        let space = FockSpace::new(20).unwrap();
        let theta = c(0.4);
        let (ket, bra) = ft_vacuum_series(theta, &space).unwrap();
        let ops = bar_combos(theta, space);
        let mask = space.interior_mask(1).unwrap();
        for s in [Symbol::B1, Symbol::B2] {
            let v = ops.combo(s).apply(&space, Representation::Standard, &ket);
            let worst = v
                .iter()
                .zip(&mask)
                .filter(|(_, m)| **m)
                .map(|(z, _)| z.norm())
                .fold(0.0, f64::max);
            assert!(worst < 1e-14);
        }
        for s in [Symbol::B1Dag, Symbol::B2Dag] {
            let v = ops
                .combo(s)
                .apply_transpose(&space, Representation::Standard, &bra);
            let worst = v
                .iter()
                .zip(&mask)
                .filter(|(_, m)| **m)
                .map(|(z, _)| z.norm())
                .fold(0.0, f64::max);
            assert!(worst < 1e-14);
        }
    }

    #[test]
    fn basis_at_zero_angle_is_the_fock_basis() {
        let space = FockSpace::new(6).unwrap();
        let (ket, bra) = ft_basis(c(0.0), 2, 1, &space).unwrap();
        assert!(crate::fock::vec_max_abs(&(ket - space.basis_vector(2, 1))) < 1e-15);
        assert!(crate::fock::vec_max_abs(&(bra - space.basis_vector(2, 1))) < 1e-15);
    }

    #[test]
    fn gram_is_identity() {
        let space = FockSpace::new(24).unwrap();
        let (_, dev) = ft_gram(c(0.3), 3, &space).unwrap();
        assert!(dev <= 1e-10, "{dev}");
    }

    #[test]
    fn series_and_generator_routes_agree() {
        let space = FockSpace::new(32).unwrap();
        for theta in [c(0.3), c(0.5), c(-0.45), Complex64::new(0.2, 0.3)] {
            for (n1, n2) in [(0, 0), (1, 0), (2, 1), (0, 3)] {
                let (k1, b1) = ft_basis(theta, n1, n2, &space).unwrap();
                let (k2, b2) = ft_basis_generator(theta, n1, n2, &space).unwrap();
                let mask = space.interior_mask(8).unwrap();
                let dev = |a: &CVector, b: &CVector| {
                    a.iter()
                        .zip(b.iter())
                        .zip(&mask)
                        .filter(|(_, m)| **m)
                        .map(|((x, y), _)| (x - y).norm())
                        .fold(0.0, f64::max)
                };
                assert!(
                    dev(&k1, &k2) <= 1e-8,
                    "{theta} {n1} {n2}: {}",
                    dev(&k1, &k2)
                );
                assert!(dev(&b1, &b2) <= 1e-8);
            }
        }
    }

    #[test]
    fn generator_exponential_matches_dense_exponential() {
        let l = build_ladder(6).unwrap();
        let x = &l.a1 * &l.a2 + &l.a1dag * &l.a2dag;
        let dense = matrix_exp(&(&x * c(0.3))).unwrap();
        let sector = generator_exp(&l.space, c(0.3)).unwrap();
        assert!(max_abs(&(dense - sector)) < 1e-12);
    }

    #[test]
    fn similarity_route_in_a_low_window() {
        let l = build_ladder(24).unwrap();
        for theta in [c(0.3), Complex64::new(0.0, 0.3)] {
            let ft = ft_transform(theta, &l).unwrap();
            let dev = ft_similarity_deviation(&ft, 4).unwrap();
            assert!(dev <= 1e-8, "{theta}: {dev}");
        }
    }

    #[test]
    fn standard_norm_examples() {
        for n in [(0, 0), (1, 0), (2, 3)] {
            let v = ft_standard_norm(Complex64::new(0.0, 0.7), n.0, n.1).unwrap();
            assert!((v - 1.0).abs() < 1e-15);
        }
        let t = std::f64::consts::FRAC_PI_3;
        assert!((standard_norm_at(t, 0, 0).unwrap() - 2.0).abs() < 1e-12);
        assert!((standard_norm_at(t, 1, 1).unwrap() - 14.0).abs() < 1e-11);
        assert!(matches!(
            standard_norm_at(FRAC_PI_2, 0, 0),
            Err(BatemanError::SeriesDivergence(_))
        ));
    }

    #[test]
    fn truncated_norm_matches_closed_forms() {
        for t in [0.3, 0.6, 1.0, 1.4] {
            for n in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                let expected = ft_norm_closed_form(t, n.0, n.1).unwrap();
                let got = ft_standard_norm_truncated(t, n.0, n.1, 64).unwrap();
                let rel = (got.value - expected).abs() / expected;
                assert!(rel <= 1e-8, "T={t} {n:?}: {rel}");
            }
        }
    }

    #[test]
    fn exponent_fits() {
        let grid = epsilon_grid();
        for (n, tol) in [((0, 0), 0.05), ((1, 0), 0.05), ((1, 1), 0.1), ((2, 1), 0.1)] {
            let e = ft_norm_exponent_fit(&grid, n.0, n.1).unwrap();
            assert!((e - (n.0 + n.1 + 1) as f64).abs() <= tol, "{n:?}: {e}");
        }
        assert!(matches!(
            ft_norm_exponent_fit(&grid[..2], 0, 0),
            Err(BatemanError::Fit(_))
        ));
    }

    #[test]
    fn norm_grows_towards_the_limit() {
        let values: Vec<f64> = epsilon_grid()
            .iter()
            .map(|&t| standard_norm_at(t, 0, 0).unwrap())
            .collect();
        assert!(values.windows(2).all(|w| w[1] > w[0]));
        assert!(values[3] > 1e3);
        for n in [(0, 0), (2, 1), (3, 3)] {
            let t = FRAC_PI_2 - 1e-6;
            let scaled =
                standard_norm_at(t, n.0, n.1).unwrap() * t.cos().powi((n.0 + n.1 + 1) as i32);
            assert!((scaled - ft_norm_asymptotic_constant(n.0, n.1)).abs() < 1e-6);
        }
    }

    #[test]
    fn heisenberg_factors() {
        let p = params();
        for mode in [Mode::One, Mode::Two] {
            for b in Branch::BOTH {
                let a = ft_heisenberg_factor(mode, OpKind::Annihilation, b, 0.0, &p);
                assert_eq!(a, ONE);
                let t = 1.7;
                let a = ft_heisenberg_factor(mode, OpKind::Annihilation, b, t, &p);
                let d = ft_heisenberg_factor(mode, OpKind::Creation, b, t, &p);
                assert!((a * d - ONE).norm() < 1e-14);
            }
        }
        let t = 0.8;
        let f = ft_heisenberg_factor(Mode::One, OpKind::Annihilation, Branch::Minus, t, &p);
        let expected = (Complex64::new(-p.lambda, -p.omega) * t).exp();
        assert!((f - expected).norm() < 1e-15);
    }

    #[test]
    fn heisenberg_derivative_form() {
        let l = build_ladder(10).unwrap();
        let p = params();
        let h = build_hamiltonian(&l, &p).h;
        for b in Branch::BOTH {
            let ft = ft_transform(branch_theta(b), &l).unwrap();
            let dev = ft
                .ops
                .derivative_deviation(&h, &p, |s| ft_rate(s, b), 2)
                .unwrap();
            assert!(dev <= 1e-10, "{b}: {dev}");
        }
    }

    #[test]
    fn position_operators() {
        let l = build_ladder(10).unwrap();
        let p = params();
        for b in Branch::BOTH {
            let ft = ft_transform(branch_theta(b), &l).unwrap();
            assert!(ft_xy_reconstruction(b, &ft, &p, 1).unwrap() <= 1e-10);
            // x(0) = sqrt(hbar/2mw)(bar a1^dd + bar a2^dd) at +pi/4
            if b == Branch::Plus {
                let (x, _) = ft_xy_operators(b, 0.0, &ft, &p).unwrap();
                let k = (p.hbar / (2.0 * p.m * p.omega)).sqrt();
                let expected = (ft.get(Symbol::B1Dag) + ft.get(Symbol::B2Dag)) * c(k);
                assert!(max_abs(&(x - expected)) < 1e-14);
            }
            for r in ft_x_expansion(b).rates() {
                assert!(r.solves_exactly(Motion::Damped));
            }
            for r in ft_y_expansion(b).rates() {
                assert!(r.solves_exactly(Motion::Amplified));
            }
        }
        let ft = ft_transform(c(0.3), &l).unwrap();
        assert!(ft_xy_operators(Branch::Plus, 0.0, &ft, &p).is_err());
    }

    #[test]
    fn position_expansions_follow_from_substitution() {
        for b in Branch::BOTH {
            let sub = ft_inverse_substitution(b);
            let x = position_expansion(&sub, 1, |s| ft_rate(s, b)).unwrap();
            let y = position_expansion(&sub, -1, |s| ft_rate(s, b)).unwrap();
            assert_eq!(x, ft_x_expansion(b));
            assert_eq!(y, ft_y_expansion(b));
        }
    }

    #[test]
    fn derived_hamiltonian_equals_formal_form() {
        for b in Branch::BOTH {
            assert_eq!(ft_derived_hamiltonian(b).unwrap(), ft_formal_hamiltonian(b));
        }
    }

    #[test]
    fn oracle_matrix_elements() {
        let h = ft_formal_hamiltonian(Branch::Plus);
        let v = basis_matrix_element(1, 0, &h, 1, 0).unwrap();
        assert_eq!(v.as_eigen_pair(), Some((1, 2)));
        let v = basis_matrix_element(2, 0, &h, 1, 1).unwrap();
        assert!(v.is_zero());
    }
}
