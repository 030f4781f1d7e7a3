//! Output envelope and number formatting.

use std::io::Write;

use bateman::verify::Check;
use bateman::PhysicalParams;
use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::CliError;

/// A float written with 17 significant digits, `null` when not finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Num {
    pub fn text(self) -> String {
        if self.0.is_finite() {
            format!("{:.16e}", self.0)
        } else {
            "null".into()
        }
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawValue::from_string(self.text())
            .map_err(S::Error::custom)?
            .serialize(s)
    }
}

#[derive(Debug, Serialize)]
pub struct ParamsEcho {
    pub m: Num,
    pub gamma: Num,
    pub k: Num,
    pub hbar: Num,
    pub omega: Num,
    pub lambda: Num,
}

impl From<&PhysicalParams> for ParamsEcho {
    fn from(p: &PhysicalParams) -> Self {
        Self {
            m: Num(p.m),
            gamma: Num(p.gamma),
            k: Num(p.k),
            hbar: Num(p.hbar),
            omega: Num(p.omega),
            lambda: Num(p.lambda),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOut {
    pub suite: String,
    pub name: String,
    pub anchor: String,
    pub deviation: Num,
    pub tolerance: Num,
    pub passed: bool,
}

impl CheckOut {
    pub fn new(
        suite: &str,
        name: impl Into<String>,
        anchor: &str,
        deviation: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            suite: suite.into(),
            name: name.into(),
            anchor: anchor.into(),
            deviation: Num(deviation),
            tolerance: Num(tolerance),
            passed: deviation.is_finite() && deviation <= tolerance,
        }
    }
}

impl From<&Check> for CheckOut {
    fn from(c: &Check) -> Self {
        Self {
            suite: c.suite.name().into(),
            name: c.name.clone(),
            anchor: c.anchor.into(),
            deviation: Num(c.deviation),
            tolerance: Num(c.tolerance),
            passed: c.passed,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Envelope<T: Serialize> {
    pub command: &'static str,
    pub version: &'static str,
    pub params: ParamsEcho,
    pub n_max: usize,
    pub margin: usize,
    pub tol_scale: Num,
    pub result: T,
    pub checks: Vec<CheckOut>,
    pub passed: bool,
}

pub fn write_json<T: Serialize, W: Write>(
    envelope: &Envelope<T>,
    mut out: W,
) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut out, envelope)?;
    writeln!(out)?;
    Ok(())
}

/// Writes a header and rows with the `csv` crate.
pub fn write_csv<W: Write>(header: &[&str], rows: &[Vec<String>], out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(Num(0.1).text(), "1.0000000000000001e-1");
        assert_eq!(Num(-2.0).text(), "-2.0000000000000000e0");
        assert_eq!(Num(f64::NAN).text(), "null");
        let back: f64 = Num(std::f64::consts::PI).text().parse().unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }

    #[test]
    fn raw_numbers_are_valid_json() {
        let s = serde_json::to_string(&vec![Num(1e-300), Num(3.5)]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v[1].as_f64(), Some(3.5));
    }
}
