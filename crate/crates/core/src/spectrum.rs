//! Eigenvalue records shared by both quantizations.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{BatemanError, Result};
use crate::params::PhysicalParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Approach {
    /// Pseudo-Bogoliubov construction with bar operators.
    Ft,
    /// Imaginary-scaling construction with check operators.
    Is,
}

impl Approach {
    pub fn name(self) -> &'static str {
        match self {
            Approach::Ft => "ft",
            Approach::Is => "is",
        }
    }
}

impl FromStr for Approach {
    type Err = BatemanError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ft" => Ok(Approach::Ft),
            "is" => Ok(Approach::Is),
            _ => Err(BatemanError::Domain(format!("unknown approach '{s}'"))),
        }
    }
}

impl fmt::Display for Approach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Plus, Branch::Minus];

    pub fn sign(self) -> i64 {
        match self {
            Branch::Plus => 1,
            Branch::Minus => -1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Branch::Plus => "+",
            Branch::Minus => "-",
        }
    }
}

impl FromStr for Branch {
    type Err = BatemanError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" | "+1" | "1" => Ok(Branch::Plus),
            "-" | "minus" | "-1" => Ok(Branch::Minus),
            _ => Err(BatemanError::Domain(format!("unknown branch '{s}'"))),
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Time behavior of a Schrodinger-picture eigenstate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StabilityClass {
    Decaying,
    Growing,
    Stable,
}

impl StabilityClass {
    /// Class implied by the imaginary part of an eigenvalue, in units of `hbar*lambda`.
    pub fn from_imag_sign(q: i64) -> Self {
        match q.signum() {
            1 => StabilityClass::Growing,
            -1 => StabilityClass::Decaying,
            _ => StabilityClass::Stable,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StabilityClass::Decaying => "decaying",
            StabilityClass::Growing => "growing",
            StabilityClass::Stable => "stable",
        }
    }

    /// The class with decay and growth exchanged.
    pub fn reversed(self) -> Self {
        match self {
            StabilityClass::Decaying => StabilityClass::Growing,
            StabilityClass::Growing => StabilityClass::Decaying,
            StabilityClass::Stable => StabilityClass::Stable,
        }
    }
}

impl fmt::Display for StabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    One,
    Two,
}

impl FromStr for Mode {
    type Err = BatemanError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(Mode::One),
            "2" => Ok(Mode::Two),
            _ => Err(BatemanError::Domain(format!(
                "mode must be 1 or 2, got '{s}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpKind {
    Annihilation,
    Creation,
}

/// Sign of the damping term in `m s^2 +- gamma s + k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Motion {
    Damped,
    Amplified,
}

/// Eigenvalue `p * hbar*omega + q * i*hbar*lambda` of one basis state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EigenRecord {
    pub approach: Approach,
    pub branch: Branch,
    pub n1: usize,
    pub n2: usize,
    pub p: i64,
    pub q: i64,
}

pub type FtEigen = EigenRecord;
pub type IsEigen = EigenRecord;

impl EigenRecord {
    pub fn value(&self, params: &PhysicalParams) -> Complex64 {
        params.eigen_value(self.p, self.q)
    }

    pub fn class(&self) -> StabilityClass {
        StabilityClass::from_imag_sign(self.q)
    }
}

/// Which transformed operator family is in force.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransformSpec {
    Ft { theta: Complex64 },
    Is { phi: f64, chi: Complex64 },
}

impl TransformSpec {
    pub fn approach(&self) -> Approach {
        match self {
            TransformSpec::Ft { .. } => Approach::Ft,
            TransformSpec::Is { .. } => Approach::Is,
        }
    }
}

pub(crate) fn check_quantum_numbers(n1: i64, n2: i64) -> Result<(usize, usize)> {
    if n1 < 0 || n2 < 0 {
        return Err(BatemanError::Domain(format!(
            "quantum numbers must be non-negative, got ({n1}, {n2})"
        )));
    }
    Ok((n1 as usize, n2 as usize))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing() {
        assert_eq!("FT".parse::<Approach>().unwrap(), Approach::Ft);
        assert_eq!("-".parse::<Branch>().unwrap(), Branch::Minus);
        assert!("x".parse::<Branch>().is_err());
    }

    #[test]
    fn class_from_sign() {
        assert_eq!(StabilityClass::from_imag_sign(3), StabilityClass::Growing);
        assert_eq!(StabilityClass::from_imag_sign(-1), StabilityClass::Decaying);
        assert_eq!(StabilityClass::from_imag_sign(0), StabilityClass::Stable);
        assert_eq!(StabilityClass::Stable.reversed(), StabilityClass::Stable);
    }
}
