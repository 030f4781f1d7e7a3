//! Physical constants of the dual damped/amplified oscillator.

use crate::error::{BatemanError, Result};
use num_complex::Complex64;

/// Validated model constants together with the derived frequency and decay rate.
///
/// Only the underdamped regime `4 m k > gamma^2` is representable, so `omega`
/// is always real and strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub m: f64,
    pub gamma: f64,
    pub k: f64,
    pub hbar: f64,
    pub omega: f64,
    pub lambda: f64,
}

impl PhysicalParams {
    pub fn new(m: f64, gamma: f64, k: f64, hbar: f64) -> Result<Self> {
        derive_params(m, gamma, k, hbar)
    }

    /// `hbar * omega`, the unit of the real part of every eigenvalue.
    pub fn hbar_omega(&self) -> f64 {
        self.hbar * self.omega
    }

    /// `hbar * lambda = hbar * gamma / 2m`.
    pub fn hbar_lambda(&self) -> f64 {
        self.hbar * self.lambda
    }

    /// `p * hbar*omega + q * i*hbar*lambda` as a complex number.
    pub fn eigen_value(&self, p: i64, q: i64) -> Complex64 {
        Complex64::new(p as f64 * self.hbar_omega(), q as f64 * self.hbar_lambda())
    }

    /// The same parameters with the sign of the damping constant flipped.
    ///
    /// Used to evaluate the amplified equation of motion; the flipped value
    /// skips validation because `gamma < 0` is otherwise rejected.
    pub fn with_reversed_damping(&self) -> Self {
        Self {
            gamma: -self.gamma,
            lambda: -self.lambda,
            ..*self
        }
    }
}

impl Default for PhysicalParams {
    /// `m = 1, gamma = 1, k = 1.25, hbar = 1`, giving `omega = 1`, `lambda = 1/2`.
    fn default() -> Self {
        derive_params(1.0, 1.0, 1.25, 1.0).expect("default parameters are underdamped")
    }
}

pub fn derive_params(m: f64, gamma: f64, k: f64, hbar: f64) -> Result<PhysicalParams> {
    for (name, v) in [("m", m), ("gamma", gamma), ("k", k), ("hbar", hbar)] {
        if !v.is_finite() || v <= 0.0 {
            return Err(BatemanError::Domain(format!(
                "{name} must be finite and strictly positive, got {v}"
            )));
        }
    }
    let four_mk = 4.0 * m * k;
    let gamma_sq = gamma * gamma;
    if four_mk <= gamma_sq {
        return Err(BatemanError::Overdamped { four_mk, gamma_sq });
    }
    let omega = (k / m - gamma_sq / (4.0 * m * m)).sqrt();
    let lambda = gamma / (2.0 * m);
    if !(omega > 0.0) {
        return Err(BatemanError::Overdamped { four_mk, gamma_sq });
    }
    Ok(PhysicalParams {
        m,
        gamma,
        k,
        hbar,
        omega,
        lambda,
    })
}
