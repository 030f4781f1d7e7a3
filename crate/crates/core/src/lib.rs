//! Two quantizations of the dual damped/amplified (Bateman) oscillator.
//!
//! The pseudo-Bogoliubov construction ([`pseudo_bogoliubov`]) and the
//! imaginary-scaling construction ([`imaginary_scaling`]) are realized twice:
//! as dense matrices on a truncated two-mode Fock space ([`fock`]) and as
//! exact symbolic polynomials in abstract ladder symbols ([`algebra`]).

pub mod accel;
pub mod algebra;
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod imaginary_scaling;
pub mod params;
pub mod pseudo_bogoliubov;
pub mod spectrum;
pub mod transform;
pub mod verify;

pub use error::{BatemanError, Result};
pub use fock::{CMatrix, CVector, FockSpace, Ladder, LadderSet, Representation};
pub use params::{derive_params, PhysicalParams};
pub use spectrum::{Approach, Branch, EigenRecord, Motion, StabilityClass, TransformSpec};
