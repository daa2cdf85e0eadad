//! Incomplete gamma, reciprocal gamma and erf from inverse-Laplace contour
//! integrals.
//!
//! The regularized lower function is
//!
//! ```text
//! P(s, x) = 1/(2πi) ∫ e^y · y^-1 · (1 + y/x)^-s dy
//! ```
//!
//! taken along the hyperbolic contour of [`crate::contour`]. Every
//! integrand is evaluated in log form and divided by its magnitude at the
//! crossing point, so the sums stay near unit size for any `s` and `x`;
//! the scale is restored after summation.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::contour::{ln_1p, BranchSelector, Contour};
use crate::engine::{refine_levels, sum_trapezoid, MeshSpec, RefinePlan};
use crate::error::{Error, Result};

/// Bound on the discarded imaginary part, relative to `max(|value|, 1)`.
pub const IMAG_RESIDUAL_TOL: f64 = 1e-12;

/// `|1/Γ(s)|` below this near the origin is treated as the pole at `s = 0`.
pub const POLE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaEval {
    pub value: f64,
    pub terms_used: usize,
    /// Magnitude of the imaginary part that was dropped.
    pub imag_residual: f64,
    pub h_final: f64,
}

fn check_s_x(s: f64, x: f64) -> Result<()> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::domain(format!("s must be positive and finite, got {s}")));
    }
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::domain(format!("x must be positive and finite, got {x}")));
    }
    Ok(())
}

/// `(1/2πi) ∫ exp(log_g(y)) dy` along `contour`, with the magnitude at the
/// crossing factored out. Returns the real part and the residual.
fn contour_integral<G>(contour: Contour, log_g: G, mesh: &MeshSpec) -> Result<GammaEval>
where
    G: Fn(Complex64) -> Complex64,
{
    let ln_scale = log_g(Complex64::new(contour.c, 0.0)).re;
    let norm = Complex64::new(0.0, -1.0 / (2.0 * PI));
    let sum = sum_trapezoid(
        |u| {
            let p = contour.sample(u);
            (log_g(p.y) - ln_scale).exp() * p.dy_du * norm
        },
        mesh,
    )?;
    let scale = ln_scale.exp();
    let value = sum.value.re * scale;
    let imag_residual = sum.value.im.abs() * scale;
    let bound = IMAG_RESIDUAL_TOL * value.abs().max(1.0);
    if imag_residual > bound {
        return Err(Error::Accuracy {
            residual: imag_residual,
            bound,
        });
    }
    Ok(GammaEval {
        value,
        terms_used: sum.terms_used,
        imag_residual,
        h_final: mesh.h,
    })
}

fn incomplete_log_integrand(s: f64, x: f64) -> impl Fn(Complex64) -> Complex64 {
    move |y: Complex64| y - y.ln() - s * ln_1p(y / x)
}

/// `P(s, x) = γ(s, x) / Γ(s)` at one mesh size.
pub fn regularized_lower_p(s: f64, x: f64, mesh: &MeshSpec) -> Result<GammaEval> {
    check_s_x(s, x)?;
    let branch = BranchSelector::lower(s, x)?;
    branch.check(x)?;
    let r = contour_integral(branch.contour(), incomplete_log_integrand(s, x), mesh)?;
    Ok(GammaEval {
        value: clamp_unit(r.value),
        ..r
    })
}

/// Rounding can push a regularized value a few ulps past `[0, 1]`; those
/// are pulled back. Larger excursions are discretization error on a coarse
/// mesh and are left alone, otherwise two clamped coarse levels would agree
/// exactly and stop refinement early.
fn clamp_unit(v: f64) -> f64 {
    const SLACK: f64 = 16.0 * f64::EPSILON;
    if (-SLACK..0.0).contains(&v) {
        0.0
    } else if v > 1.0 && v <= 1.0 + SLACK {
        1.0
    } else {
        v
    }
}

/// `Q(s, x) = 1 - P(s, x)` from the contour crossing between `-x` and `0`.
pub fn regularized_upper_q(s: f64, x: f64, mesh: &MeshSpec) -> Result<GammaEval> {
    check_s_x(s, x)?;
    let branch = BranchSelector::upper(s, x)?;
    branch.check(x)?;
    let r = contour_integral(branch.contour(), incomplete_log_integrand(s, x), mesh)?;
    Ok(GammaEval {
        value: clamp_unit(-r.value),
        ..r
    })
}

/// Largest power-of-two mesh, at most `1/16`, fine enough to resolve the
/// pole sitting at distance `|c|/σ` from the real `u` axis on the upper
/// contour.
pub fn upper_q_start_h(s: f64, x: f64) -> Result<f64> {
    check_s_x(s, x)?;
    let b = BranchSelector::upper(s, x)?;
    let width = -b.c / b.scale;
    let mut h = 1.0 / 16.0;
    while h > width / 6.0 && h > 1.0 / 65536.0 {
        h /= 2.0;
    }
    Ok(h)
}

/// `1/Γ(s)` from the Hankel-type integral `(1/2πi) ∫ e^y y^-s dy` with the
/// contour crossing at `c = s + 1`.
pub fn reciprocal_gamma(s: f64, mesh: &MeshSpec) -> Result<GammaEval> {
    if !(s.is_finite() && s > -1.0) {
        return Err(Error::domain(format!("reciprocal gamma needs finite s > -1, got {s}")));
    }
    let contour = Contour { c: s + 1.0, scale: 1.0 };
    contour_integral(contour, move |y: Complex64| y - s * y.ln(), mesh)
}

/// `Γ(s)` as the inverse of [`reciprocal_gamma`].
pub fn gamma(s: f64, mesh: &MeshSpec) -> Result<f64> {
    Ok(gamma_eval(s, mesh)?.value)
}

pub(crate) fn gamma_eval(s: f64, mesh: &MeshSpec) -> Result<GammaEval> {
    let r = reciprocal_gamma(s, mesh)?;
    if s.abs() < 1.0 && r.value.abs() < POLE_TOL {
        return Err(Error::Pole { s });
    }
    if r.value == 0.0 {
        return Err(Error::Overflow(format!("Gamma({s}) exceeds the double range")));
    }
    Ok(GammaEval {
        value: 1.0 / r.value,
        ..r
    })
}

/// `Γ(s)` refined from `h = 1/16` until two levels agree.
pub fn gamma_refined(s: f64) -> Result<f64> {
    let report = refine_levels(&RefinePlan::turnkey(), &MeshSpec::default(), |m| {
        let g = gamma_eval(s, m)?;
        Ok((g.value, g.terms_used))
    })?;
    Ok(report.final_value)
}

/// `γ(s, x) = P(s, x) · Γ(s)`.
pub fn lower_incomplete_gamma(s: f64, x: f64, mesh: &MeshSpec) -> Result<f64> {
    Ok(lower_incomplete_gamma_eval(s, x, mesh)?.value)
}

pub(crate) fn lower_incomplete_gamma_eval(s: f64, x: f64, mesh: &MeshSpec) -> Result<GammaEval> {
    let p = regularized_lower_p(s, x, mesh)?;
    let g = gamma_eval(s, mesh)?;
    Ok(GammaEval {
        value: p.value * g.value,
        terms_used: p.terms_used + g.terms_used,
        imag_residual: p.imag_residual * g.value.abs(),
        h_final: mesh.h,
    })
}

/// `erf(x) = P(1/2, x²)`, extended as an odd function.
pub fn erf(x: f64, mesh: &MeshSpec) -> Result<f64> {
    Ok(erf_eval(x, mesh)?.value)
}

pub(crate) fn erf_eval(x: f64, mesh: &MeshSpec) -> Result<GammaEval> {
    if !x.is_finite() {
        return Err(Error::domain(format!("erf needs a finite argument, got {x}")));
    }
    if x == 0.0 {
        return Ok(GammaEval {
            value: 0.0,
            terms_used: 0,
            imag_residual: 0.0,
            h_final: mesh.h,
        });
    }
    let x2 = x * x;
    if !x2.is_finite() {
        return Err(Error::domain(format!("erf argument {x} squares out of range")));
    }
    let p = regularized_lower_p(0.5, x2, mesh)?;
    Ok(GammaEval {
        value: p.value.copysign(x),
        ..p
    })
}
