//! Schrodinger-picture evolution of eigenstates and classical equation-of-motion checks.

use std::io::Write;

use num_complex::Complex64;

use crate::algebra::RateExponent;
use crate::error::{BatemanError, Result};
use crate::imaginary_scaling::is_eigenvalue;
use crate::params::PhysicalParams;
use crate::pseudo_bogoliubov::ft_eigenvalue;
use crate::spectrum::{Approach, Branch, EigenRecord, Motion, StabilityClass};

/// `exp(-i ev t / hbar)`. The dual state evolves with the reciprocal.
pub fn schrodinger_factor(ev: Complex64, t: f64, hbar: f64) -> Complex64 {
    (Complex64::new(0.0, -1.0) * ev * t / hbar).exp()
}

pub fn dual_factor(ev: Complex64, t: f64, hbar: f64) -> Complex64 {
    (Complex64::new(0.0, 1.0) * ev * t / hbar).exp()
}

/// Eigenvalue record for either construction.
pub fn eigen_record(
    approach: Approach,
    branch: Branch,
    n1: i64,
    n2: i64,
    params: &PhysicalParams,
) -> Result<EigenRecord> {
    match approach {
        Approach::Ft => ft_eigenvalue(n1, n2, branch, params),
        Approach::Is => is_eigenvalue(n1, n2, branch, params),
    }
}

/// Time dependence of one eigenstate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateEvolution {
    pub record: EigenRecord,
    pub eigenvalue: Complex64,
    /// `Im(ev) / hbar`: the modulus of the ket factor goes as `exp(amplitude_rate t)`.
    pub amplitude_rate: f64,
    /// `-Re(ev) / hbar`.
    pub phase_rate: f64,
    pub hbar: f64,
}

impl StateEvolution {
    pub fn new(
        approach: Approach,
        branch: Branch,
        n1: i64,
        n2: i64,
        params: &PhysicalParams,
    ) -> Result<Self> {
        let record = eigen_record(approach, branch, n1, n2, params)?;
        let eigenvalue = record.value(params);
        Ok(Self {
            record,
            eigenvalue,
            amplitude_rate: eigenvalue.im / params.hbar,
            phase_rate: -eigenvalue.re / params.hbar,
            hbar: params.hbar,
        })
    }

    pub fn factor(&self, t: f64) -> Complex64 {
        schrodinger_factor(self.eigenvalue, t, self.hbar)
    }

    pub fn dual_factor(&self, t: f64) -> Complex64 {
        dual_factor(self.eigenvalue, t, self.hbar)
    }

    /// `|factor|^2`, the standard-norm weight. Not conserved unless the state is stable.
    pub fn standard_weight(&self, t: f64) -> f64 {
        (2.0 * self.amplitude_rate * t).exp()
    }

    pub fn class(&self) -> StabilityClass {
        self.record.class()
    }
}

pub fn classify(
    approach: Approach,
    branch: Branch,
    n1: i64,
    n2: i64,
    params: &PhysicalParams,
) -> Result<StabilityClass> {
    Ok(eigen_record(approach, branch, n1, n2, params)?.class())
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    if let Some(t) = t_grid.iter().find(|t| !t.is_finite()) {
        return Err(BatemanError::Domain(format!(
            "time values must be finite, got {t}"
        )));
    }
    Ok(())
}

/// `((m, t| n, t))` on a time grid.
///
/// The basis pairing is the Kronecker delta and the time factors combine to
/// `exp(i (h_m - h_n) t / hbar)`. The exponent is formed from the integer
/// eigenvalue pairs, so equal states give exactly one.
pub fn pairing_in_time(
    approach: Approach,
    branch: Branch,
    m: (i64, i64),
    n: (i64, i64),
    t_grid: &[f64],
    params: &PhysicalParams,
) -> Result<Vec<Complex64>> {
    check_grid(t_grid)?;
    let bra = eigen_record(approach, branch, m.0, m.1, params)?;
    let ket = eigen_record(approach, branch, n.0, n.1, params)?;
    if m != n {
        return Ok(vec![Complex64::new(0.0, 0.0); t_grid.len()]);
    }
    let net = params.eigen_value(bra.p - ket.p, bra.q - ket.q);
    Ok(t_grid
        .iter()
        .map(|&t| dual_factor(net, t, params.hbar))
        .collect())
}

/// `((n, t| n, t))` on a time grid, always one.
pub fn pairing_norm_in_time(
    approach: Approach,
    branch: Branch,
    n1: i64,
    n2: i64,
    t_grid: &[f64],
    params: &PhysicalParams,
) -> Result<Vec<f64>> {
    Ok(
        pairing_in_time(approach, branch, (n1, n2), (n1, n2), t_grid, params)?
            .into_iter()
            .map(|z| z.re)
            .collect(),
    )
}

/// `m s^2 + gamma s + k` for damped motion, `m s^2 - gamma s + k` for amplified.
pub fn eom_residual(s: Complex64, motion: Motion, params: &PhysicalParams) -> Complex64 {
    let g = match motion {
        Motion::Damped => params.gamma,
        Motion::Amplified => -params.gamma,
    };
    s * s * params.m + s * g + params.k
}

/// Largest `|residual| / k` over the exponents.
pub fn max_eom_residual(rates: &[RateExponent], motion: Motion, params: &PhysicalParams) -> f64 {
    rates
        .iter()
        .map(|r| eom_residual(r.value(params), motion, params).norm() / params.k)
        .fold(0.0, f64::max)
}

/// Writes `t,re_factor,im_factor,abs2_factor` rows.
pub fn write_trajectory<W: Write>(
    evolution: &StateEvolution,
    t_grid: &[f64],
    mut out: W,
) -> Result<()> {
    check_grid(t_grid)?;
    let io = |e: std::io::Error| BatemanError::Numerical(format!("write failed: {e}"));
    writeln!(out, "t,re_factor,im_factor,abs2_factor").map_err(io)?;
    for &t in t_grid {
        let f = evolution.factor(t);
        writeln!(out, "{t:e},{:e},{:e},{:e}", f.re, f.im, f.norm_sqr()).map_err(io)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params() -> PhysicalParams {
        PhysicalParams::default()
    }

    #[test]
    fn factor_examples() {
        let p = params();
        assert_eq!(
            schrodinger_factor(Complex64::new(1.0, 2.0), 0.0, 1.0),
            Complex64::new(1.0, 0.0)
        );
        let ev = Complex64::new(0.0, -p.hbar_lambda());
        let f = schrodinger_factor(ev, 1.0 / p.lambda, p.hbar);
        assert!((f - Complex64::new((-1.0f64).exp(), 0.0)).norm() < 1e-15);
        let ev = Complex64::new(p.hbar_omega(), 0.0);
        for t in [0.3, 5.0, 100.0] {
            assert!((schrodinger_factor(ev, t, p.hbar).norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn state_evolution_rates() {
        let p = params();
        let s = StateEvolution::new(Approach::Ft, Branch::Minus, 0, 0, &p).unwrap();
        assert_eq!(s.amplitude_rate, -p.lambda);
        assert_eq!(s.phase_rate, -0.0);
        let t = 2.5;
        assert!((s.factor(t).norm_sqr() - s.standard_weight(t)).abs() < 1e-15);
    }

    #[test]
    fn classification_examples() {
        let p = params();
        assert_eq!(
            classify(Approach::Ft, Branch::Minus, 5, 2, &p).unwrap(),
            StabilityClass::Decaying
        );
        assert_eq!(
            classify(Approach::Is, Branch::Plus, 3, 3, &p).unwrap(),
            StabilityClass::Stable
        );
        assert_eq!(
            classify(Approach::Is, Branch::Minus, 2, 0, &p).unwrap(),
            StabilityClass::Decaying
        );
        assert_eq!(
            classify(Approach::Is, Branch::Plus, 2, 0, &p).unwrap(),
            StabilityClass::Growing
        );
        assert!(classify(Approach::Is, Branch::Plus, -1, 0, &p).is_err());
    }

    #[test]
    fn classification_over_a_grid() {
        let p = params();
        for n1 in 0..=6 {
            for n2 in 0..=6 {
                for a in [Approach::Ft, Approach::Is] {
                    let plus = classify(a, Branch::Plus, n1, n2, &p).unwrap();
                    let minus = classify(a, Branch::Minus, n1, n2, &p).unwrap();
                    assert_eq!(plus.reversed(), minus);
                }
                assert_ne!(
                    classify(Approach::Ft, Branch::Plus, n1, n2, &p).unwrap(),
                    StabilityClass::Stable
                );
                assert_eq!(
                    classify(Approach::Is, Branch::Plus, n1, n2, &p).unwrap()
                        == StabilityClass::Stable,
                    n1 == n2
                );
            }
        }
    }

    #[test]
    fn pairing_is_conserved() {
        let p = params();
        let grid = [0.0, 1.0, 10.0];
        assert_eq!(
            pairing_norm_in_time(Approach::Ft, Branch::Minus, 1, 0, &grid, &p).unwrap(),
            vec![1.0; 3]
        );
        assert_eq!(
            pairing_norm_in_time(Approach::Is, Branch::Plus, 2, 1, &grid, &p).unwrap(),
            vec![1.0; 3]
        );
        let cross = pairing_in_time(Approach::Ft, Branch::Plus, (1, 0), (0, 1), &grid, &p).unwrap();
        assert!(cross.iter().all(|z| *z == Complex64::new(0.0, 0.0)));
        assert!(pairing_norm_in_time(Approach::Ft, Branch::Plus, 0, 0, &[f64::NAN], &p).is_err());
    }

    #[test]
    fn eom_examples() {
        let p = params();
        let r = eom_residual(Complex64::new(-p.lambda, p.omega), Motion::Damped, &p);
        assert!(r.norm() <= 1e-12 * p.k);
        let r = eom_residual(Complex64::new(p.lambda, -p.omega), Motion::Amplified, &p);
        assert!(r.norm() <= 1e-12 * p.k);
        // undamped mode: k - m w^2 = gamma^2 / 4m survives along with i gamma w
        let r = eom_residual(Complex64::new(0.0, p.omega), Motion::Damped, &p);
        let expected = Complex64::new(p.gamma * p.gamma / (4.0 * p.m), p.gamma * p.omega);
        assert!((r - expected).norm() < 1e-14);
    }

    #[test]
    fn trajectory_csv() {
        let s = StateEvolution::new(Approach::Is, Branch::Plus, 0, 0, &params()).unwrap();
        let mut buf = Vec::new();
        write_trajectory(&s, &[0.0, 1.0], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,re_factor,im_factor,abs2_factor");
        assert_eq!(lines[1], "0e0,1e0,-0e0,1e0");
        assert_eq!(lines.len(), 3);
    }

    proptest! {
        #[test]
        fn factor_times_dual_is_one(re in -5.0f64..5.0, im in -2.0f64..2.0, t in -3.0f64..3.0) {
            let ev = Complex64::new(re, im);
            let prod = schrodinger_factor(ev, t, 1.0) * dual_factor(ev, t, 1.0);
            prop_assert!((prod - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }

        #[test]
        fn modulus_follows_amplitude_rate(n1 in 0i64..8, n2 in 0i64..8, t in -2.0f64..2.0, plus in any::<bool>()) {
            let b = if plus { Branch::Plus } else { Branch::Minus };
            for a in [Approach::Ft, Approach::Is] {
                let s = StateEvolution::new(a, b, n1, n2, &PhysicalParams::default()).unwrap();
                let lhs = s.factor(t).norm_sqr();
                prop_assert!((lhs - s.standard_weight(t)).abs() <= 1e-12 * lhs.max(1.0));
            }
        }
    }
}
