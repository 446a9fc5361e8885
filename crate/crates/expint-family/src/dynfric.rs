//! Dynamical-friction application: the velocity-space integrals H_1, H_2
//! for a power-law mass spectrum with equipartition Maxwell-Boltzmann
//! velocities, evaluated through the closed form
//!
//! ```text
//! H(y) = a c^{a - nu - 1/2} (4/sqrt(pi)) I(2, 2, nu; sqrt(c) y),  c = 1 - 1/a
//! ```
//!
//! with nu = a - 3/2 for H_1 (requires a > 1) and nu = a - 5/2 for H_2
//! (requires a > 2); both gates are exactly the admissibility of (2, 2, nu).

use crate::error::domain_err;
use crate::family::{check_domain, closed_form, reduced_form, ParamTriple};
use crate::special;
use crate::Result;
use serde::{Deserialize, Serialize};

/// Which member of the H family to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Family {
    H1,
    H2,
    /// Directly supplied order nu; exists for nu > -1/2.
    Custom(f64),
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::H1 => write!(f, "H1"),
            Family::H2 => write!(f, "H2"),
            Family::Custom(nu) => write!(f, "CUSTOM({nu})"),
        }
    }
}

/// Parameters of an H evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HSpec {
    /// Mass-spectrum exponent, a > 1.
    pub a: f64,
    pub family: Family,
    /// Velocity-ratio argument, y >= 0.
    pub y: f64,
}

impl HSpec {
    /// Order of the exponential integral this spec maps to.
    pub fn nu(&self) -> f64 {
        match self.family {
            Family::H1 => self.a - 1.5,
            Family::H2 => self.a - 2.5,
            Family::Custom(nu) => nu,
        }
    }

    /// c = 1 - 1/a, in (0, 1) for a > 1.
    pub fn c(&self) -> f64 {
        1.0 - 1.0 / self.a
    }

    fn validate(&self) -> Result<f64> {
        if !(self.a > 1.0) || !self.a.is_finite() {
            return Err(domain_err(format!(
                "HSpec: requires a > 1 (got a = {}), so that c = 1 - 1/a is in (0, 1)",
                self.a
            )));
        }
        if !(self.y >= 0.0) || !self.y.is_finite() {
            return Err(domain_err(format!("HSpec: requires y >= 0, got y = {}", self.y)));
        }
        let nu = self.nu();
        // Existence is exactly admissibility of (lambda, mu) = (2, 2):
        // nu > -1/2, i.e. a > 1 for H1 and a > 2 for H2.
        let verdict = check_domain(&ParamTriple::new(2.0, 2.0, nu))?;
        if !verdict.admissible {
            let constraint = match self.family {
                Family::H1 => "H1 requires a > 1".to_string(),
                Family::H2 => "H2 requires a > 2".to_string(),
                Family::Custom(nu) => format!("existence requires nu > -1/2, got nu = {nu}"),
            };
            return Err(domain_err(format!(
                "H undefined: {constraint} (boundary point of the existence region at lambda = mu = 2)"
            )));
        }
        Ok(nu)
    }

    /// Prefactor a c^{a - nu - 1/2} 4/sqrt(pi), in log space so large a
    /// cannot over- or underflow c^{a - nu - 1/2}.
    fn prefactor(&self, nu: f64) -> f64 {
        let c = self.c();
        self.a * ((self.a - nu - 0.5) * c.ln()).exp() * 4.0 / std::f64::consts::PI.sqrt()
    }
}

/// Evaluate H(y) through the main closed form I(2, 2, nu; sqrt(c) y).
pub fn h_eval(spec: &HSpec) -> Result<f64> {
    let nu = spec.validate()?;
    if spec.y == 0.0 {
        return Ok(0.0);
    }
    let z = spec.c().sqrt() * spec.y;
    let i = closed_form(&ParamTriple::new(2.0, 2.0, nu), z)?.value;
    Ok(spec.prefactor(nu) * i)
}

/// Evaluate H(y) through the one-step reduced form (lambda = 2 > mu - 1 = 1
/// always holds here); cross-check path for `h_eval`.
pub fn h_eval_reduced(spec: &HSpec) -> Result<f64> {
    let nu = spec.validate()?;
    if spec.y == 0.0 {
        return Ok(0.0);
    }
    let z = spec.c().sqrt() * spec.y;
    let i = reduced_form(&ParamTriple::new(2.0, 2.0, nu), z)?;
    Ok(spec.prefactor(nu) * i)
}

/// (1/sqrt(pi)) gamma(1/2, z), which equals erf(sqrt(z)).
pub fn erf_from_gamma(z: f64) -> Result<f64> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(domain_err(format!("erf_from_gamma: requires z >= 0, got z = {z}")));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    Ok(special::gamma_lower(0.5, z)? / std::f64::consts::PI.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    const H_2_5_H1_Y1: f64 = 0.485_282_862_632_881_15;
    const H_3_H2_Y2: f64 = 1.283_501_931_231_308_8;
    const ERF_1: f64 = 0.842_700_792_949_714_9;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn h_zero_at_origin() {
        let s = HSpec { a: 2.5, family: Family::H1, y: 0.0 };
        assert_eq!(h_eval(&s).unwrap(), 0.0);
    }

    #[test]
    fn h_frozen_values() {
        let s = HSpec { a: 2.5, family: Family::H1, y: 1.0 };
        assert!(rel(h_eval(&s).unwrap(), H_2_5_H1_Y1) < 1e-12);
        let s = HSpec { a: 3.0, family: Family::H2, y: 2.0 };
        assert!(rel(h_eval(&s).unwrap(), H_3_H2_Y2) < 1e-12);
    }

    #[test]
    fn dual_path_agreement() {
        for (a, family, y) in [
            (2.5, Family::H1, 1.0),
            (3.0, Family::H2, 2.0),
            (4.0, Family::H1, 0.3),
        ] {
            let s = HSpec { a, family, y };
            assert!(rel(h_eval(&s).unwrap(), h_eval_reduced(&s).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn existence_gates() {
        let s = HSpec { a: 1.5, family: Family::H2, y: 1.0 };
        let err = h_eval(&s).unwrap_err();
        assert!(err.to_string().contains("a > 2"));

        let s = HSpec { a: 0.9, family: Family::H1, y: 1.0 };
        assert!(h_eval(&s).is_err());

        let s = HSpec { a: 2.0, family: Family::H2, y: 1.0 };
        assert!(h_eval(&s).is_err(), "a = 2 sits exactly on the H2 boundary");
    }

    #[test]
    fn h_monotone_in_y() {
        let mut prev = 0.0;
        for i in 1..=20 {
            let y = 0.25 * i as f64;
            let v = h_eval(&HSpec { a: 2.5, family: Family::H1, y }).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn h_saturates() {
        let v8 = h_eval(&HSpec { a: 2.5, family: Family::H1, y: 8.0 }).unwrap();
        let v16 = h_eval(&HSpec { a: 2.5, family: Family::H1, y: 16.0 }).unwrap();
        assert!(rel(v8, v16) < 1e-8);
    }

    #[test]
    fn erf_identity() {
        assert_eq!(erf_from_gamma(0.0).unwrap(), 0.0);
        assert!(rel(erf_from_gamma(1.0).unwrap(), ERF_1) < 1e-13);
        assert!((erf_from_gamma(40.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(erf_from_gamma(-0.1).is_err());
    }
}
