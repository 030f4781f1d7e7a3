//! Named numerical checks grouped into suites.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::algebra::crosscheck::{cross_validate, random_poly};
use crate::algebra::{oracle_spectrum, LadderPoly, Symbol};
use crate::dynamics::{
    classify, max_eom_residual, pairing_in_time, pairing_norm_in_time, schrodinger_factor,
};
use crate::error::{BatemanError, Result};
use crate::fock::{
    c, commutator, max_abs, single_mode_lowering, CMatrix, FockSpace, Ladder, LadderCombo,
    LadderSet, Representation,
};
use crate::imaginary_scaling as is;
use crate::params::PhysicalParams;
use crate::pseudo_bogoliubov as ft;
use crate::spectrum::{Approach, Branch, Motion, StabilityClass};
use crate::transform::TransformedSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Algebra,
    Ft,
    Is,
    Dynamics,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Ft => "ft",
            Suite::Is => "is",
            Suite::Dynamics => "dynamics",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = BatemanError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "algebra" => Ok(Suite::Algebra),
            "ft" => Ok(Suite::Ft),
            "is" => Ok(Suite::Is),
            "dynamics" => Ok(Suite::Dynamics),
            "all" => Ok(Suite::All),
            _ => Err(BatemanError::Domain(format!("unknown suite '{s}'"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Deliberate corruption used to confirm that failing checks are reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Commutators come back as `AB - BA + 1e-6 * AB`.
    CorruptCommutator,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub params: PhysicalParams,
    pub n_max: usize,
    pub margin: usize,
    pub tol_scale: f64,
    pub fault: Option<Fault>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            params: PhysicalParams::default(),
            n_max: 12,
            margin: 2,
            tol_scale: 1.0,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub anchor: &'static str,
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

struct Recorder<'a> {
    cfg: &'a VerifyConfig,
    suite: Suite,
    checks: Vec<Check>,
}

impl Recorder<'_> {
    fn push(
        &mut self,
        name: impl Into<String>,
        anchor: &'static str,
        deviation: f64,
        tolerance: f64,
    ) {
        let tolerance = tolerance * self.cfg.tol_scale;
        self.checks.push(Check {
            suite: self.suite,
            name: name.into(),
            anchor,
            deviation,
            tolerance,
            passed: deviation.is_finite() && deviation <= tolerance,
        });
    }

    fn flag(&mut self, name: impl Into<String>, anchor: &'static str, ok: bool) {
        self.push(name, anchor, if ok { 0.0 } else { 1.0 }, 0.0);
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    if !(cfg.tol_scale > 0.0) || !cfg.tol_scale.is_finite() {
        return Err(BatemanError::Domain(format!(
            "tolerance scale must be positive, got {}",
            cfg.tol_scale
        )));
    }
    let suites: &[Suite] = match suite {
        Suite::All => &[Suite::Algebra, Suite::Ft, Suite::Is, Suite::Dynamics],
        _ => std::slice::from_ref(&suite),
    };
    let mut out = Vec::new();
    for &s in suites {
        let mut rec = Recorder {
            cfg,
            suite: s,
            checks: Vec::new(),
        };
        match s {
            Suite::Algebra => algebra_checks(&mut rec)?,
            Suite::Ft => ft_checks(&mut rec)?,
            Suite::Is => is_checks(&mut rec)?,
            Suite::Dynamics => dynamics_checks(&mut rec)?,
            Suite::All => unreachable!("expanded above"),
        }
        out.extend(rec.checks);
    }
    Ok(out)
}

fn comm_fn(fault: Option<Fault>) -> impl Fn(&CMatrix, &CMatrix) -> Result<CMatrix> {
    move |a, b| {
        let value = commutator(a, b)?;
        Ok(match fault {
            Some(Fault::CorruptCommutator) => value + a * b * c(1e-6),
            None => value,
        })
    }
}

fn dim_of(n_max: usize) -> f64 {
    ((n_max + 1) * (n_max + 1)) as f64
}

/// Worst mismatch between an oracle diagonal and the expected `(p, q)`.
fn spectrum_mismatches(
    h: &LadderPoly,
    max_total: usize,
    expected: impl Fn(i64, i64) -> (i64, i64),
) -> Result<usize> {
    let found = oracle_spectrum(h, max_total, true)?;
    let bad_diag = found
        .diagonal
        .iter()
        .filter(|&&(n1, n2, p, q)| expected(n1 as i64, n2 as i64) != (p, q))
        .count();
    Ok(bad_diag + found.irregular + found.off_diagonal_nonzero.unwrap_or(0))
}

fn algebra_checks(rec: &mut Recorder) -> Result<()> {
    let cfg = *rec.cfg;
    let n = cfg.n_max;

    let a = single_mode_lowering(n);
    let comm = comm_fn(cfg.fault)(&a, &a.adjoint())?;
    let mut expected = CMatrix::identity(n + 1, n + 1);
    expected[(n, n)] = c(-(n as f64));
    rec.push(
        "single-mode boundary defect",
        "ccr-boundary",
        max_abs(&(comm - expected)),
        1e-12,
    );

    let ladder = LadderSet::new(FockSpace::new(n)?, Representation::Standard);
    let original = TransformedSet::new(ladder, |s| {
        LadderCombo::single(match s {
            Symbol::B1 => Ladder::A1,
            Symbol::B1Dag => Ladder::A1Dag,
            Symbol::B2 => Ladder::A2,
            Symbol::B2Dag => Ladder::A2Dag,
        })
    });
    let dev = original.commutator_deviation_with(1, comm_fn(cfg.fault))?;
    rec.push("original commutators", "ccr-original", dev, 1e-12);

    for b in Branch::BOTH {
        let bad = spectrum_mismatches(&ft::ft_derived_hamiltonian(b)?, 5, |n1, n2| {
            (n1 - n2, b.sign() * (n1 + n2 + 1))
        })?;
        rec.push(
            format!("exact spectrum, branch {b}"),
            "ft-spectrum",
            bad as f64,
            0.0,
        );
        let bad = spectrum_mismatches(&is::is_derived_hamiltonian(b)?, 5, |n1, n2| {
            (n1 + n2 + 1, b.sign() * (n1 - n2))
        })?;
        rec.push(
            format!("exact spectrum, branch {b}"),
            "is-spectrum",
            bad as f64,
            0.0,
        );
    }
    let lowest = oracle_spectrum(&is::is_derived_hamiltonian(Branch::Plus)?, 5, false)?
        .diagonal
        .iter()
        .map(|d| d.2)
        .min()
        .unwrap_or(0);
    rec.flag(
        "real part bounded below by hbar*omega",
        "is-spectrum",
        lowest >= 1,
    );

    let mut rng = StdRng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let p = random_poly(&mut rng, 6, 4);
        worst = worst.max(cross_validate(&p)?.max_deviation);
    }
    rec.push(
        "200 random polynomials, exact vs matrix",
        "oracle-crosscheck",
        worst,
        1e-12,
    );
    Ok(())
}

fn ft_checks(rec: &mut Recorder) -> Result<()> {
    let cfg = *rec.cfg;
    let p = &cfg.params;
    let ladder = LadderSet::new(FockSpace::new(cfg.n_max)?, Representation::Standard);
    let h = crate::fock::build_hamiltonian(&ladder, p).h;
    let dim = dim_of(cfg.n_max);

    for b in Branch::BOTH {
        let t = ft::ft_transform(ft::branch_theta(b), &ladder)?;
        let dev = t.ops.commutator_deviation_with(1, comm_fn(cfg.fault))?;
        rec.push(
            format!("bar commutators, theta = {b}pi/4"),
            "bar-commutators",
            dev,
            1e-12,
        );
        let r = ft::h1_in_bar(&t, p, cfg.margin)?;
        rec.push(
            format!("H in bar operators, theta = {b}pi/4"),
            "ft-hamiltonian",
            r.max(),
            1e-10 * dim,
        );
        let dev = t
            .ops
            .derivative_deviation(&h, p, |s| ft::ft_rate(s, b), cfg.margin)?;
        rec.push(
            format!("Heisenberg derivative, branch {b}"),
            "ft-heisenberg",
            dev,
            1e-10,
        );
        let dev = ft::ft_xy_reconstruction(b, &t, p, 1)?;
        rec.push(
            format!("x(0), y(0) reconstruction, branch {b}"),
            "ft-coordinates",
            dev,
            1e-10,
        );
    }
    let t = ft::ft_transform(c(0.3), &ladder)?;
    rec.push(
        "H in bar operators, theta = 0.3",
        "ft-hamiltonian",
        ft::h1_in_bar(&t, p, cfg.margin)?.max(),
        1e-10 * dim,
    );

    let gram_space = FockSpace::new(cfg.n_max.max(24))?;
    let (_, dev) = ft::ft_gram(c(0.3), 3, &gram_space)?;
    rec.push(
        "pairing matrix, theta = 0.3",
        "ft-biorthonormality",
        dev,
        1e-8,
    );

    let small = LadderSet::new(FockSpace::new(cfg.n_max.max(24))?, Representation::Standard);
    let dev = ft::ft_similarity_deviation(&ft::ft_transform(c(0.3), &small)?, 4)?;
    rec.push(
        "similarity route in a low window, theta = 0.3",
        "ft-generator",
        dev,
        1e-8,
    );

    let mut worst = 0.0f64;
    for big in [0.3, 0.6, 1.0, 1.4] {
        for (n1, n2) in [(0, 0), (1, 0), (1, 1)] {
            let want = ft::ft_norm_closed_form(big, n1, n2).expect("tabulated");
            let got = ft::ft_standard_norm_truncated(big, n1, n2, 64)?.value;
            worst = worst.max((got - want).abs() / want);
        }
    }
    rec.push("truncated norms vs closed forms", "ft-norms", worst, 1e-8);
    let grid = ft::epsilon_grid();
    for (n1, n2) in [(0, 0), (1, 0), (1, 1), (2, 1)] {
        let e = ft::ft_norm_exponent_fit(&grid, n1, n2)?;
        let dev = (e - (n1 + n2 + 1) as f64).abs();
        rec.push(
            format!("norm exponent ({n1},{n2})"),
            "ft-norm-divergence",
            dev,
            0.1,
        );
    }
    Ok(())
}

fn is_checks(rec: &mut Recorder) -> Result<()> {
    let cfg = *rec.cfg;
    let p = &cfg.params;
    let dim = dim_of(cfg.n_max);
    let space = FockSpace::new(cfg.n_max)?;
    let scaled = LadderSet::new(space, Representation::ImaginaryScaled);
    let standard = LadderSet::new(space, Representation::Standard);

    for (label, ladder) in [("standard", &standard), ("scaled", &scaled)] {
        let h = crate::fock::build_hamiltonian(ladder, p).h;
        for b in Branch::BOTH {
            let t = is::is_headline_transform(b, ladder)?;
            let dev = t.ops.commutator_deviation_with(1, comm_fn(cfg.fault))?;
            rec.push(
                format!("check commutators, chi = {b}i pi/4, {label}"),
                "check-commutators",
                dev,
                1e-12,
            );
            let r = is::h_in_check(&t, p, cfg.margin)?;
            rec.push(
                format!("H in check operators, chi = {b}i pi/4, {label}"),
                "is-hamiltonian",
                r.max(),
                1e-10 * dim,
            );
            let dev = t
                .ops
                .derivative_deviation(&h, p, |s| is::is_rate(s, b), cfg.margin)?;
            rec.push(
                format!("Heisenberg derivative, branch {b}, {label}"),
                "is-heisenberg",
                dev,
                1e-10,
            );
        }
        let t = is::is_transform(Complex64::new(0.0, 0.2), ladder)?;
        rec.push(
            format!("H in check operators, chi = 0.2i, {label}"),
            "is-hamiltonian",
            is::h_in_check(&t, p, cfg.margin)?.max(),
            1e-10 * dim,
        );
    }

    let max_q = 3.min(cfg.n_max.saturating_sub(2) / 2);
    for b in Branch::BOTH {
        let t = is::is_headline_transform(b, &scaled)?;
        let (ket, _) = is::is_vacuum(&t)?;
        let dev = crate::fock::vec_max_abs(&(t.get(Symbol::B1) * &ket))
            .max(crate::fock::vec_max_abs(&(t.get(Symbol::B2) * &ket)));
        rec.push(
            format!("vacuum annihilated, branch {b}"),
            "is-vacuum",
            dev,
            1e-10,
        );
        let (_, dev) = is::is_gram(&t, max_q)?;
        rec.push(
            format!("pairing matrix, branch {b}"),
            "is-biorthonormality",
            dev,
            1e-8,
        );
        if cfg.n_max >= 3 {
            let got = is::is_diagonal_element(&t, 1, 0, p)?;
            let want = is::is_eigenvalue(1, 0, b, p)?.value(p);
            rec.push(
                format!("((1,0|H|1,0)), branch {b}"),
                "is-spectrum",
                (got - want).norm(),
                1e-8 * p.hbar * (p.omega + p.lambda),
            );
        }
        let dev = is::is_xy_reconstruction(b, &t, p, 1)?;
        rec.push(
            format!("x(0), y(0) reconstruction, branch {b}"),
            "is-coordinates",
            dev,
            1e-10,
        );
        rec.flag(
            format!("x and y exchanged by conjugation, branch {b}"),
            "is-coordinates",
            is::is_x_expansion(b).conjugate() == is::is_y_expansion(b),
        );
    }

    let dev = is::squeeze_similarity_deviation(Complex64::new(0.0, 0.2), 40, 6)?;
    rec.push(
        "squeeze similarity route, phi = 0.2i",
        "pseudo-squeeze",
        dev,
        1e-8,
    );
    let rows = is::contrast_table(4, p)?;
    rec.flag(
        "FT and IS integer pairs are transposed",
        "contrast",
        rows.iter().all(|r| r.is_transposed()),
    );
    Ok(())
}

fn dynamics_checks(rec: &mut Recorder) -> Result<()> {
    let cfg = *rec.cfg;
    let p = &cfg.params;
    for b in Branch::BOTH {
        let x = ft::ft_x_expansion(b).rates();
        let y = ft::ft_y_expansion(b).rates();
        rec.push(
            format!("x(t) exponents, FT branch {b}"),
            "eom-damped",
            max_eom_residual(&x, Motion::Damped, p),
            1e-12,
        );
        rec.push(
            format!("y(t) exponents, FT branch {b}"),
            "eom-amplified",
            max_eom_residual(&y, Motion::Amplified, p),
            1e-12,
        );
        let x = is::is_x_expansion(b).rates();
        let y = is::is_y_expansion(b).rates();
        rec.push(
            format!("x(t) exponents, IS branch {b}"),
            "eom-damped",
            max_eom_residual(&x, Motion::Damped, p),
            1e-12,
        );
        rec.push(
            format!("y(t) exponents, IS branch {b}"),
            "eom-amplified",
            max_eom_residual(&y, Motion::Amplified, p),
            1e-12,
        );
    }

    let mut ft_stable = 0;
    let mut is_wrong = 0;
    let mut antisymmetry = 0;
    for n1 in 0..=6 {
        for n2 in 0..=6 {
            for b in Branch::BOTH {
                if classify(Approach::Ft, b, n1, n2, p)? == StabilityClass::Stable {
                    ft_stable += 1;
                }
                let stable = classify(Approach::Is, b, n1, n2, p)? == StabilityClass::Stable;
                if stable != (n1 == n2) {
                    is_wrong += 1;
                }
            }
            for a in [Approach::Ft, Approach::Is] {
                if classify(a, Branch::Plus, n1, n2, p)?.reversed()
                    != classify(a, Branch::Minus, n1, n2, p)?
                {
                    antisymmetry += 1;
                }
            }
        }
    }
    rec.push(
        "FT stable states up to (6,6)",
        "ft-classification",
        ft_stable as f64,
        0.0,
    );
    rec.push(
        "IS stable states off the diagonal or missing",
        "is-classification",
        is_wrong as f64,
        0.0,
    );
    rec.push(
        "branch reversal swaps decay and growth",
        "classification",
        antisymmetry as f64,
        0.0,
    );

    let grid = [0.0, 1.0, 10.0];
    let mut worst = 0.0f64;
    let mut cross = 0.0f64;
    for a in [Approach::Ft, Approach::Is] {
        for b in Branch::BOTH {
            for (n1, n2) in [(0, 0), (1, 0), (2, 1), (3, 3)] {
                for v in pairing_norm_in_time(a, b, n1, n2, &grid, p)? {
                    worst = worst.max((v - 1.0).abs());
                }
            }
            for z in pairing_in_time(a, b, (1, 0), (0, 1), &grid, p)? {
                cross = cross.max(z.norm());
            }
        }
    }
    rec.push(
        "pairing norm constant in time",
        "pairing-in-time",
        worst,
        0.0,
    );
    rec.push("cross pairing stays zero", "pairing-in-time", cross, 0.0);

    let ev = Complex64::new(0.0, -p.hbar_lambda());
    let f = schrodinger_factor(ev, 1.0 / p.lambda, p.hbar);
    rec.push(
        "FT vacuum decays by e^-1 over 1/lambda",
        "schrodinger-factor",
        (f - Complex64::new((-1.0f64).exp(), 0.0)).norm(),
        1e-14,
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn failures(checks: &[Check]) -> Vec<String> {
        checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| {
                format!(
                    "{} [{}]: {:e} > {:e}",
                    c.name, c.anchor, c.deviation, c.tolerance
                )
            })
            .collect()
    }

    #[test]
    fn small_instances_pass() {
        let cfg = VerifyConfig {
            n_max: 6,
            ..VerifyConfig::default()
        };
        for s in [Suite::Is, Suite::Dynamics] {
            let checks = run_suite(s, &cfg).unwrap();
            assert!(!checks.is_empty());
            assert!(failures(&checks).is_empty(), "{:?}", failures(&checks));
        }
    }

    #[test]
    fn ft_suite_passes_at_default_cutoff() {
        let checks = run_suite(Suite::Ft, &VerifyConfig::default()).unwrap();
        assert!(failures(&checks).is_empty(), "{:?}", failures(&checks));
    }

    #[test]
    fn corrupted_commutator_is_caught() {
        let cfg = VerifyConfig {
            n_max: 6,
            fault: Some(Fault::CorruptCommutator),
            ..VerifyConfig::default()
        };
        let checks = run_suite(Suite::Algebra, &cfg).unwrap();
        assert!(checks
            .iter()
            .any(|c| !c.passed && c.anchor == "ccr-original"));
    }

    #[test]
    fn suite_names_round_trip() {
        for s in [
            Suite::Algebra,
            Suite::Ft,
            Suite::Is,
            Suite::Dynamics,
            Suite::All,
        ] {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn tolerance_scale_must_be_positive() {
        let cfg = VerifyConfig {
            tol_scale: 0.0,
            ..VerifyConfig::default()
        };
        assert!(run_suite(Suite::Dynamics, &cfg).is_err());
    }
}
