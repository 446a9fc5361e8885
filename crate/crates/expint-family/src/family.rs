//! The integral family
//!
//! ```text
//! I(lambda, mu, nu; z) = integral from 0 to z of x^lambda * E_nu(x^mu) dx
//!                      = [gamma((1+lambda)/mu, z^mu) + z^{1+lambda} E_nu(z^mu)]
//!                        / (1 + lambda + mu (nu - 1))
//! ```
//!
//! with its existence gate, the scaling transform, the by-parts and ladder
//! recursions, the one-step reduced form, and the small-z leading orders.

use crate::error::domain_err;
use crate::special;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Parameter point (lambda, mu, nu) of the family; mu > 0 always.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamTriple {
    pub lambda: f64,
    pub mu: f64,
    pub nu: f64,
}

impl ParamTriple {
    pub fn new(lambda: f64, mu: f64, nu: f64) -> Self {
        ParamTriple { lambda, mu, nu }
    }
}

/// Which constraint of the existence bound binds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundBranch {
    /// nu >= 1: the horizontal bound lambda > -1.
    NuGeOne,
    /// nu <= 1: the sloped bound lambda > -1 - mu (nu - 1).
    NuLeOne,
}

impl std::fmt::Display for BoundBranch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundBranch::NuGeOne => write!(f, "NU_GE_1"),
            BoundBranch::NuLeOne => write!(f, "NU_LE_1"),
        }
    }
}

/// Admissibility decision for a parameter triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainVerdict {
    pub admissible: bool,
    /// max{-1, -1 - mu (nu - 1)}; the integral exists iff lambda exceeds it.
    pub binding_bound: f64,
    pub branch: BoundBranch,
}

/// Closed-form value with its constituent terms for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormResult {
    pub value: f64,
    /// gamma((1+lambda)/mu, z^mu)
    pub gamma_term: f64,
    /// z^{1+lambda} E_nu(z^mu)
    pub boundary_term: f64,
    /// 1 + lambda + mu (nu - 1)
    pub denominator: f64,
    /// True when z^mu is large enough that the boundary term underflowed
    /// to zero; both numerator terms are positive so the result is still
    /// exact to double precision.
    pub boundary_flushed: bool,
}

/// Boundary point of the existence region at a given nu.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionPoint {
    pub mu: f64,
    pub lambda_min: f64,
    pub branch: BoundBranch,
}

/// Existence gate: the integral converges iff
/// lambda > max{-1, -1 - mu (nu - 1)}, strictly.
pub fn check_domain(p: &ParamTriple) -> Result<DomainVerdict> {
    if !(p.mu > 0.0) || !p.mu.is_finite() {
        return Err(domain_err(format!("check_domain: requires mu > 0, got mu = {}", p.mu)));
    }
    if !p.lambda.is_finite() || !p.nu.is_finite() {
        return Err(domain_err("check_domain: non-finite parameters".to_string()));
    }
    let sloped = -1.0 - p.mu * (p.nu - 1.0);
    let (binding_bound, branch) = if -1.0 >= sloped {
        (-1.0, BoundBranch::NuGeOne)
    } else {
        (sloped, BoundBranch::NuLeOne)
    };
    Ok(DomainVerdict {
        admissible: p.lambda > binding_bound,
        binding_bound,
        branch,
    })
}

fn require_admissible(p: &ParamTriple) -> Result<DomainVerdict> {
    let v = check_domain(p)?;
    if !v.admissible {
        return Err(Error::Inadmissible {
            lambda: p.lambda,
            mu: p.mu,
            nu: p.nu,
            bound: v.binding_bound,
        });
    }
    Ok(v)
}

/// Denominator 1 + lambda + mu (nu - 1); positive on the admissible set.
fn denominator(p: &ParamTriple) -> f64 {
    1.0 + p.lambda + p.mu * (p.nu - 1.0)
}

/// Closed-form evaluation of I(lambda, mu, nu; z) for admissible
/// parameters and z >= 0. At z = 0 the value is exactly 0.
pub fn closed_form(p: &ParamTriple, z: f64) -> Result<ClosedFormResult> {
    require_admissible(p)?;
    if !(z >= 0.0) || !z.is_finite() {
        return Err(domain_err(format!("closed_form: requires z >= 0, got z = {z}")));
    }
    let d = denominator(p);
    if z == 0.0 {
        // Every leading-order branch vanishes as z -> 0+.
        return Ok(ClosedFormResult {
            value: 0.0,
            gamma_term: 0.0,
            boundary_term: 0.0,
            denominator: d,
            boundary_flushed: false,
        });
    }
    let x = z.powf(p.mu);
    let a = (1.0 + p.lambda) / p.mu;
    let gamma_term = special::gamma_lower(a, x)?;
    let e = special::expint(p.nu, x)?;
    let boundary_term = z.powf(1.0 + p.lambda) * e;
    Ok(ClosedFormResult {
        value: (gamma_term + boundary_term) / d,
        gamma_term,
        boundary_term,
        denominator: d,
        boundary_flushed: e == 0.0,
    })
}

/// Change of integration variable y = x^r:
/// I(lambda, mu, nu; z) = (1/r) I((lambda - r + 1)/r, mu/r, nu; z^r).
/// Returns the transformed triple; admissibility is preserved and checked.
pub fn transform_scaling(p: &ParamTriple, r: f64) -> Result<ParamTriple> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(domain_err(format!("transform_scaling: requires r > 0, got r = {r}")));
    }
    let q = ParamTriple {
        lambda: (p.lambda - r + 1.0) / r,
        mu: p.mu / r,
        nu: p.nu,
    };
    if check_domain(p)?.admissible && !check_domain(&q)?.admissible {
        return Err(domain_err(format!(
            "transform_scaling: admissibility lost under r = {r} (should not happen)"
        )));
    }
    Ok(q)
}

/// Integration by parts with x^lambda as differential factor:
///
/// ```text
/// I(lambda, mu, nu; z) = [z^{lambda+1} E_nu(z^mu)
///                         + mu I(lambda+mu, mu, nu-1; z)] / (lambda + 1)
/// ```
///
/// The shifted triple is admissible whenever `p` is; both are checked.
pub fn reduce_by_parts(p: &ParamTriple, z: f64) -> Result<f64> {
    require_admissible(p)?;
    if !(z > 0.0) || !z.is_finite() {
        return Err(domain_err(format!("reduce_by_parts: requires z > 0, got z = {z}")));
    }
    let shifted = ParamTriple {
        lambda: p.lambda + p.mu,
        mu: p.mu,
        nu: p.nu - 1.0,
    };
    let inner = closed_form(&shifted, z)?.value;
    let e = special::expint(p.nu, z.powf(p.mu))?;
    Ok((z.powf(p.lambda + 1.0) * e + p.mu * inner) / (p.lambda + 1.0))
}

/// Residual of the ladder identity (valid for every nu, including nu = 1):
///
/// ```text
/// mu I(lambda+mu, mu, nu-1; z) = gamma((1+lambda)/mu, z^mu)
///                                - mu (nu - 1) I(lambda, mu, nu; z)
/// ```
pub fn ladder_identity_residual(p: &ParamTriple, z: f64) -> Result<f64> {
    require_admissible(p)?;
    if !(z > 0.0) || !z.is_finite() {
        return Err(domain_err(format!(
            "ladder_identity_residual: requires z > 0, got z = {z}"
        )));
    }
    let shifted = ParamTriple {
        lambda: p.lambda + p.mu,
        mu: p.mu,
        nu: p.nu - 1.0,
    };
    let i_shifted = closed_form(&shifted, z)?.value;
    let i_here = closed_form(p, z)?.value;
    let g = special::gamma_lower((1.0 + p.lambda) / p.mu, z.powf(p.mu))?;
    Ok(p.mu * i_shifted - g + p.mu * (p.nu - 1.0) * i_here)
}

/// One-step reduced form, valid for lambda > mu - 1:
///
/// ```text
/// I = [((1+lambda-mu)/mu) gamma((1+lambda-mu)/mu, z^mu)
///      - nu z^{1+lambda-mu} E_{nu+1}(z^mu)] / (1 + lambda + mu (nu - 1))
/// ```
pub fn reduced_form(p: &ParamTriple, z: f64) -> Result<f64> {
    require_admissible(p)?;
    if !(p.lambda > p.mu - 1.0) {
        return Err(Error::SideCondition {
            lambda: p.lambda,
            mu: p.mu,
        });
    }
    if !(z > 0.0) || !z.is_finite() {
        return Err(domain_err(format!("reduced_form: requires z > 0, got z = {z}")));
    }
    let x = z.powf(p.mu);
    let a = (1.0 + p.lambda - p.mu) / p.mu;
    let g = special::gamma_lower(a, x)?;
    let e = special::expint(p.nu + 1.0, x)?;
    let num = a * g - p.nu * z.powf(1.0 + p.lambda - p.mu) * e;
    Ok(num / denominator(p))
}

/// Leading order of I for z -> 0+:
/// z^{lambda+1}/((lambda+1)(nu-1)) for nu > 1;
/// -(mu/(lambda+1)) z^{lambda+1} ln z for nu = 1;
/// Gamma(1-nu) z^{1+lambda+mu(nu-1)} / (1+lambda+mu(nu-1)) for nu < 1.
pub fn small_z_leading(p: &ParamTriple, z: f64) -> Result<f64> {
    require_admissible(p)?;
    if !(z > 0.0) || !z.is_finite() {
        return Err(domain_err(format!("small_z_leading: requires z > 0, got z = {z}")));
    }
    if p.nu > 1.0 {
        Ok(z.powf(p.lambda + 1.0) / ((p.lambda + 1.0) * (p.nu - 1.0)))
    } else if p.nu == 1.0 {
        Ok(-(p.mu / (p.lambda + 1.0)) * z.powf(p.lambda + 1.0) * z.ln())
    } else {
        let d = denominator(p);
        Ok(special::gamma_complete(1.0 - p.nu)? * z.powf(d) / d)
    }
}

/// Existence-region boundary lambda_min(mu) = max{-1, -1 - mu (nu - 1)}
/// sampled over a mu grid.
pub fn region_boundary(nu: f64, mu_grid: &[f64]) -> Result<Vec<RegionPoint>> {
    let mut out = Vec::with_capacity(mu_grid.len());
    for &mu in mu_grid {
        let v = check_domain(&ParamTriple::new(0.0, mu, nu))?;
        out.push(RegionPoint {
            mu,
            lambda_min: v.binding_bound,
            branch: v.branch,
        });
    }
    Ok(out)
}
