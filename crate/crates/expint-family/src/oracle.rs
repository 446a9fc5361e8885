//! Independent quadrature oracle used to verify the closed forms.
//!
//! The oracle evaluates the defining integrals numerically and never calls
//! into `family`; the exponential integral itself comes from `special`,
//! whose values are separately checked against direct quadrature of its
//! defining integral. Endpoint singularities are handled by a tanh-sinh
//! (double exponential) head segment, the smooth remainder by adaptive
//! Gauss-Kronrod (G7-K15) bisection.

use crate::error::domain_err;
use crate::family::{check_domain, ParamTriple};
use crate::special;
use crate::{Error, Result};

/// Oracle configuration.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    /// Target relative tolerance (0 < rel_tol < 1e-3).
    pub rel_tol: f64,
    /// Singularity split: the head [0, delta] goes to tanh-sinh. When
    /// `None`, delta = min(0.1, upper/2).
    pub split_point: Option<f64>,
    /// Adaptive bisection depth cap (>= 10).
    pub max_depth: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-10,
            split_point: None,
            max_depth: 40,
        }
    }
}

impl QuadratureSpec {
    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1e-3) {
            return Err(domain_err(format!(
                "QuadratureSpec: rel_tol must be in (0, 1e-3), got {}",
                self.rel_tol
            )));
        }
        if self.max_depth < 10 {
            return Err(domain_err(format!(
                "QuadratureSpec: max_depth must be >= 10, got {}",
                self.max_depth
            )));
        }
        Ok(())
    }

    fn split_for(&self, upper: f64) -> Result<f64> {
        let delta = self.split_point.unwrap_or_else(|| (0.1f64).min(upper / 2.0));
        if !(delta > 0.0 && delta < upper) {
            return Err(domain_err(format!(
                "QuadratureSpec: split point {delta} not inside (0, {upper})"
            )));
        }
        Ok(delta)
    }
}

/// Oracle output: value, honest error estimate, and work counters.
#[derive(Debug, Clone, Copy)]
pub struct OracleResult {
    pub value: f64,
    pub err_estimate: f64,
    pub panels_used: usize,
    /// Contribution of the tanh-sinh head segment.
    pub singular_segment_value: f64,
}

// ---------------------------------------------------------------------------
// tanh-sinh quadrature on [a, b], robust against a left/right endpoint
// singularity. The integrand receives the abscissa computed as an exact
// offset from the nearer endpoint.

const TS_T_MAX: f64 = 6.0;
const TS_MAX_LEVEL: u32 = 12;

pub(crate) fn tanh_sinh<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> (f64, f64, usize) {
    let half = 0.5 * (b - a);
    let center = a + half;
    let mut evals = 0usize;
    let mut prev = f64::NAN;
    let mut value = 0.0;
    let mut err = f64::INFINITY;
    for level in 0..=TS_MAX_LEVEL {
        let h = 0.5f64.powi(level as i32);
        let mut sum = 0.0;
        let mut k = 0u64;
        loop {
            let t = k as f64 * h;
            if t > TS_T_MAX {
                break;
            }
            let g = std::f64::consts::FRAC_PI_2 * t.sinh();
            let e2g = (-2.0 * g).exp();
            // offset from the endpoint: (b-a)/2 * (1 - tanh g)
            let off = half * 2.0 * e2g / (1.0 + e2g);
            let sech2 = 4.0 * e2g / ((1.0 + e2g) * (1.0 + e2g));
            let w = half * std::f64::consts::FRAC_PI_2 * t.cosh() * sech2;
            if w == 0.0 {
                break;
            }
            if k == 0 {
                let fx = f(center);
                evals += 1;
                if fx.is_finite() {
                    sum += w * fx;
                }
            } else {
                if off > 0.0 {
                    let fl = f(a + off);
                    let fr = f(b - off);
                    evals += 2;
                    if fl.is_finite() {
                        sum += w * fl;
                    }
                    if fr.is_finite() {
                        sum += w * fr;
                    }
                }
            }
            k += 1;
        }
        value = h * sum;
        if level > 0 {
            err = (value - prev).abs();
            if level >= 2 && err <= rel_tol * value.abs() {
                break;
            }
        }
        prev = value;
    }
    (value, err, evals)
}

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod (G7-K15).

const XGK: [f64; 8] = [
    0.991_455_371_120_813,
    0.949_107_912_342_759,
    0.864_864_423_359_769,
    0.741_531_185_599_394,
    0.586_087_235_467_691,
    0.405_845_151_377_397,
    0.207_784_955_007_898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529,
    0.063_092_092_629_979,
    0.104_790_010_322_250,
    0.140_653_259_715_525,
    0.169_004_726_639_267,
    0.190_350_578_064_785,
    0.204_432_940_075_298,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_870,
    0.279_705_391_489_277,
    0.381_830_050_505_119,
    0.417_959_183_673_469,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let center = a + half;
    let fc = f(center);
    let mut resk = WGK[7] * fc;
    let mut resg = WG[3] * fc;
    for j in 0..7 {
        let x = half * XGK[j];
        let fsum = f(center - x) + f(center + x);
        resk += WGK[j] * fsum;
        if j % 2 == 1 {
            resg += WG[j / 2] * fsum;
        }
    }
    (resk * half, ((resk - resg) * half).abs())
}

/// Total panel budget: bounds the work when the tolerance is set below
/// what double precision can deliver (the error estimate stays honest).
const GK_MAX_PANELS: usize = 30_000;

pub(crate) fn adaptive_gk<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: usize,
) -> (f64, f64, usize) {
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        tol: f64,
        depth: usize,
        panels: &mut usize,
    ) -> (f64, f64) {
        let (v, e) = gk15(f, a, b);
        *panels += 1;
        let width_floor = (b - a).abs() < 1e-14 * (a.abs() + b.abs());
        if e <= tol || depth == 0 || width_floor || *panels >= GK_MAX_PANELS {
            return (v, e);
        }
        let m = 0.5 * (a + b);
        let (v1, e1) = recurse(f, a, m, 0.5 * tol, depth - 1, panels);
        let (v2, e2) = recurse(f, m, b, 0.5 * tol, depth - 1, panels);
        (v1 + v2, e1 + e2)
    }
    let mut panels = 0usize;
    // First pass to scale the absolute tolerance off a value estimate.
    let (rough, _) = gk15(f, a, b);
    let abs_tol = tol * rough.abs().max(1e-300);
    let (v, e) = recurse(f, a, b, abs_tol, max_depth, &mut panels);
    (v, e, panels)
}

// ---------------------------------------------------------------------------
// Oracle for the family integral.

/// Integrand of the substituted integral: after u = x^mu,
/// I = (1/mu) * integral over [0, z^mu] of u^{(1+lambda)/mu - 1} E_nu(u) du.
/// The log-space route avoids intermediate overflow of E_nu for nu < 1
/// at tiny u; admissibility keeps the combined exponent above -1.
fn integrand_u(alpha: f64, nu: f64, u: f64) -> f64 {
    if nu < 1.0 && u < 1e-8 {
        match special::gamma_upper(1.0 - nu, u) {
            Ok(g) => ((alpha + nu - 1.0) * u.ln() + g.ln()).exp(),
            Err(_) => f64::NAN,
        }
    } else {
        match special::expint(nu, u) {
            Ok(e) => u.powf(alpha) * e,
            Err(_) => f64::NAN,
        }
    }
}

/// Numerically integrate I(lambda, mu, nu; z) for admissible parameters,
/// via the u = x^mu substitution, a tanh-sinh head on the possibly
/// singular segment [0, delta], and adaptive Gauss-Kronrod on the rest.
pub fn oracle_i(p: &ParamTriple, z: f64, spec: &QuadratureSpec) -> Result<OracleResult> {
    spec.validate()?;
    let v = check_domain(p)?;
    if !v.admissible {
        return Err(Error::Inadmissible {
            lambda: p.lambda,
            mu: p.mu,
            nu: p.nu,
            bound: v.binding_bound,
        });
    }
    if !(z > 0.0) || !z.is_finite() {
        return Err(domain_err(format!("oracle_i: requires z > 0, got z = {z}")));
    }
    let upper = z.powf(p.mu);
    let delta = spec.split_for(upper)?;
    let alpha = (1.0 + p.lambda) / p.mu - 1.0;
    let nu = p.nu;
    let f = move |u: f64| integrand_u(alpha, nu, u);

    let (head, head_err, head_evals) = tanh_sinh(&f, 0.0, delta, 0.5 * spec.rel_tol);
    let (tail, tail_err, tail_panels) = adaptive_gk(&f, delta, upper, 0.5 * spec.rel_tol, spec.max_depth);

    let value = (head + tail) / p.mu;
    let err_estimate = (head_err + tail_err) / p.mu;
    let result = OracleResult {
        value,
        err_estimate,
        panels_used: tail_panels + head_evals,
        singular_segment_value: head / p.mu,
    };
    if err_estimate > spec.rel_tol * value.abs() {
        return Err(Error::NoConvergence {
            value,
            err_estimate,
        });
    }
    Ok(result)
}

/// Variant without the u = x^mu substitution, for nonsingular cases
/// (lambda >= 0, nu >= 1). Used to check substitution invariance.
pub fn oracle_i_unsubstituted(p: &ParamTriple, z: f64, spec: &QuadratureSpec) -> Result<OracleResult> {
    spec.validate()?;
    let v = check_domain(p)?;
    if !v.admissible {
        return Err(Error::Inadmissible {
            lambda: p.lambda,
            mu: p.mu,
            nu: p.nu,
            bound: v.binding_bound,
        });
    }
    if !(z > 0.0) || !z.is_finite() {
        return Err(domain_err(format!(
            "oracle_i_unsubstituted: requires z > 0, got z = {z}"
        )));
    }
    let delta = spec.split_for(z)?;
    let (lambda, mu, nu) = (p.lambda, p.mu, p.nu);
    let f = move |x: f64| match special::expint(nu, x.powf(mu)) {
        Ok(e) => x.powf(lambda) * e,
        Err(_) => f64::NAN,
    };
    let (head, head_err, head_evals) = tanh_sinh(&f, 0.0, delta, 0.5 * spec.rel_tol);
    let (tail, tail_err, tail_panels) = adaptive_gk(&f, delta, z, 0.5 * spec.rel_tol, spec.max_depth);
    let value = head + tail;
    let err_estimate = head_err + tail_err;
    if err_estimate > spec.rel_tol * value.abs() {
        return Err(Error::NoConvergence {
            value,
            err_estimate,
        });
    }
    Ok(OracleResult {
        value,
        err_estimate,
        panels_used: tail_panels + head_evals,
        singular_segment_value: head,
    })
}

// ---------------------------------------------------------------------------
// Oracle for the dynamical-friction H(y) integral.

/// 2-D quadrature of
///
/// ```text
/// H(y) = a c^a (4/sqrt(pi)) * integral over r in [c, inf) of r^{-nu}
///        * integral over t in [0, y] of t^2 e^{-r t^2} dt dr,   c = 1 - 1/a
/// ```
///
/// Both integrals are done numerically: the inner by adaptive panels
/// (rescaled by xi = t sqrt(r) so it stays well conditioned at large r),
/// the outer through the compactifying substitution r = c/s, s in (0, 1].
/// Diverges for nu <= -1/2.
pub fn oracle_h(a: f64, nu: f64, y: f64, spec: &QuadratureSpec) -> Result<OracleResult> {
    spec.validate()?;
    if !(a > 1.0) || !a.is_finite() {
        return Err(domain_err(format!("oracle_h: requires a > 1, got a = {a}")));
    }
    if !(y > 0.0) || !y.is_finite() {
        return Err(domain_err(format!("oracle_h: requires y > 0, got y = {y}")));
    }
    if nu <= -0.5 {
        return Err(Error::Divergent(format!(
            "oracle_h: outer integral diverges for nu = {nu} <= -1/2"
        )));
    }
    let c = 1.0 - 1.0 / a;
    let inner_tol = 0.1 * spec.rel_tol;
    let inner_depth = spec.max_depth;
    let outer = move |s: f64| {
        if s <= 0.0 {
            return 0.0;
        }
        let r = c / s;
        // inner: integral of t^2 e^{-r t^2} over [0, y]
        //      = r^{-3/2} * integral of xi^2 e^{-xi^2} over [0, y sqrt(r)]
        let cut = (y * r.sqrt()).min(40.0);
        let g = |xi: f64| xi * xi * (-xi * xi).exp();
        let (inner, _, _) = adaptive_gk(&g, 0.0, cut, inner_tol, inner_depth);
        // r^{-nu} * r^{-3/2} * c / s^2, kept in log space for large r
        let scale = (-(nu + 1.5) * r.ln() + c.ln() - 2.0 * s.ln()).exp();
        scale * inner
    };
    let delta = 0.1f64.min(0.5);
    let (head, head_err, head_evals) = tanh_sinh(&outer, 0.0, delta, 0.5 * spec.rel_tol);
    let (tail, tail_err, tail_panels) = adaptive_gk(&outer, delta, 1.0, 0.5 * spec.rel_tol, spec.max_depth);

    let prefactor = a * c.powf(a) * 4.0 / std::f64::consts::PI.sqrt();
    let value = prefactor * (head + tail);
    let err_estimate = prefactor * (head_err + tail_err);
    if err_estimate > spec.rel_tol * value.abs() {
        return Err(Error::NoConvergence {
            value,
            err_estimate,
        });
    }
    Ok(OracleResult {
        value,
        err_estimate,
        panels_used: tail_panels + head_evals,
        singular_segment_value: prefactor * head,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const GAMMA_LOWER_0_5_1: f64 = 1.493_648_265_624_854;
    const H_2_5_H1_Y1: f64 = 0.485_282_862_632_881_15;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn oracle_self_test_analytic_collapse() {
        // x^{0.5} E_0(x) = x^{-0.5} e^{-x}, so the integral is gamma(0.5, 1).
        let r = oracle_i(
            &ParamTriple::new(0.5, 1.0, 0.0),
            1.0,
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!(rel(r.value, GAMMA_LOWER_0_5_1) < 1e-10);
        assert!(r.err_estimate <= 1e-10 * r.value);
        assert!(r.singular_segment_value > 0.0);
    }

    #[test]
    fn oracle_handles_singular_endpoint() {
        // Combined endpoint exponent (1+lambda)/mu + nu - 2 = -0.5: an
        // integrable x^{-1/2}-type singularity after substitution.
        let r = oracle_i(
            &ParamTriple::new(-0.5, 0.5, 0.5),
            2.0,
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!(r.err_estimate <= 1e-10 * r.value);
    }

    #[test]
    fn oracle_rejects_inadmissible() {
        assert!(matches!(
            oracle_i(
                &ParamTriple::new(2.0, 2.0, -0.5),
                1.0,
                &QuadratureSpec::default()
            ),
            Err(Error::Inadmissible { .. })
        ));
    }

    #[test]
    fn spec_validation() {
        let bad = QuadratureSpec {
            rel_tol: 0.5,
            ..Default::default()
        };
        assert!(oracle_i(&ParamTriple::new(1.0, 1.0, 2.0), 1.0, &bad).is_err());
        let bad = QuadratureSpec {
            max_depth: 3,
            ..Default::default()
        };
        assert!(oracle_i(&ParamTriple::new(1.0, 1.0, 2.0), 1.0, &bad).is_err());
    }

    #[test]
    fn oracle_h_matches_frozen_value() {
        let r = oracle_h(2.5, 1.0, 1.0, &QuadratureSpec {
            rel_tol: 1e-8,
            ..Default::default()
        })
        .unwrap();
        assert!(rel(r.value, H_2_5_H1_Y1) < 1e-7);
    }

    #[test]
    fn oracle_h_divergence_gate() {
        assert!(matches!(
            oracle_h(1.5, -1.0, 1.0, &QuadratureSpec::default()),
            Err(Error::Divergent(_))
        ));
    }

    #[test]
    fn oracle_h_saturates_at_large_y() {
        let spec = QuadratureSpec {
            rel_tol: 1e-8,
            ..Default::default()
        };
        let v8 = oracle_h(3.0, 0.5, 8.0, &spec).unwrap().value;
        let v12 = oracle_h(3.0, 0.5, 12.0, &spec).unwrap().value;
        assert!(rel(v8, v12) < 1e-6);
    }

    #[test]
    fn self_consistency_under_tighter_tolerance() {
        let p = ParamTriple::new(1.0, 2.0, 1.5);
        let loose = QuadratureSpec {
            rel_tol: 1e-8,
            ..Default::default()
        };
        let tight = QuadratureSpec {
            rel_tol: 5e-9,
            ..Default::default()
        };
        let rl = oracle_i(&p, 1.7, &loose).unwrap();
        let rt = oracle_i(&p, 1.7, &tight).unwrap();
        assert!((rl.value - rt.value).abs() <= rl.err_estimate.max(1e-16 * rl.value.abs()));
    }

    #[test]
    fn substitution_invariance() {
        let p = ParamTriple::new(1.0, 2.0, 2.0);
        let spec = QuadratureSpec::default();
        let a = oracle_i(&p, 1.3, &spec).unwrap();
        let b = oracle_i_unsubstituted(&p, 1.3, &spec).unwrap();
        assert!((a.value - b.value).abs() <= a.err_estimate + b.err_estimate + 1e-12 * a.value);
    }
}
