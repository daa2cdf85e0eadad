//! Confluent and Gauss hypergeometric functions from their Euler integrals.
//!
//! `C(a, b; x) = ∫₀¹ t^(a-1) (1-t)^(b-1) e^(xt) dt` is mapped onto the real
//! line by `t = (1 + tanh u)/2`, `u = sinh v`. With `dt/du = 2t(1-t)` the
//! integrand in `v` becomes
//!
//! ```text
//! F(v) = 2 cosh(v) · t^a · (1-t)^b · e^(xt)
//! ```
//!
//! which is evaluated entirely in log form: `ln t = -softplus(-2u)` and
//! `ln(1-t) = -softplus(2u)`. The endpoint singularities end up at
//! `v → ±∞` under double-exponential decay.

use num_complex::Complex64;

use crate::engine::{refine_levels, sum_trapezoid_from, MeshSpec, RefinePlan};
use crate::error::{Error, Result};
use crate::gamma::gamma_eval;
use crate::scaled::ScaledReal;

/// Largest `|x|` accepted by [`chf_c`].
pub const CHF_X_MAX: f64 = 700.0;
/// Largest `|x|` accepted by [`chf_c_scaled`].
pub const CHF_SCALED_X_MAX: f64 = 1e6;

// exp() of anything below this is zero in double precision
const LN_TINY: f64 = -745.0;
// e^-40 ≈ 4e-18
const START_SHIFT_GAP: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChfParams {
    pub a: f64,
    pub b: f64,
    pub x: f64,
}

impl ChfParams {
    pub fn new(a: f64, b: f64, x: f64) -> Self {
        ChfParams { a, b, x }
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("a", self.a)?;
        check_positive("b", self.b)?;
        if !self.x.is_finite() {
            return Err(Error::domain(format!("x must be finite, got {}", self.x)));
        }
        Ok(())
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive and finite, got {v}")))
    }
}

fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

/// `ln(2 cosh z)` without overflow.
fn ln_2cosh(z: f64) -> f64 {
    z.abs() + (-2.0 * z.abs()).exp().ln_1p()
}

/// Log of the transformed Euler integrand
/// `2 cosh(v) · t^p · (1-t)^q · e^(x·t - shift) · (1 - z·t)^(-g)`.
#[derive(Debug, Clone, Copy)]
struct EulerKernel {
    p: f64,
    q: f64,
    x: f64,
    /// Use `-x·(1-t)` instead of `x·t`, i.e. multiply by `e^(-x)`.
    shifted: bool,
    /// `(g, z)` for the Gauss factor.
    gauss: Option<(f64, f64)>,
}

impl EulerKernel {
    fn confluent(p: ChfParams, shifted: bool) -> Self {
        EulerKernel {
            p: p.a,
            q: p.b,
            x: p.x,
            shifted,
            gauss: None,
        }
    }

    fn ln_f(&self, v: f64) -> f64 {
        let u = v.sinh();
        let ln_t = -softplus(-2.0 * u);
        let ln_omt = -softplus(2.0 * u);
        let mut e = ln_2cosh(v) + self.p * ln_t + self.q * ln_omt;
        if self.x != 0.0 {
            e += if self.shifted {
                -self.x * ln_omt.exp()
            } else {
                self.x * ln_t.exp()
            };
        }
        if let Some((g, z)) = self.gauss {
            // 1 - z·t = (1 - t) + t·(1 - z), both terms nonnegative for z < 1
            let w = ln_omt.exp() + ln_t.exp() * (1.0 - z);
            e -= g * w.ln();
        }
        e
    }

    /// Coarse `(v, ln F(v))` at the peak, used to normalize the sum and to
    /// pick the starting node.
    fn peak(&self) -> (f64, f64) {
        (-96..=96)
            .map(|i| {
                let v = i as f64 / 8.0;
                (v, self.ln_f(v))
            })
            .filter(|(_, e)| e.is_finite())
            .fold((0.0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best })
    }

    /// Returns `(mantissa, ln_scale, terms)` with integral `= mantissa·e^ln_scale`.
    fn integrate(&self, mesh: &MeshSpec) -> Result<(f64, f64, usize)> {
        mesh.validate()?;
        let (v_peak, ln_scale) = self.peak();
        if !ln_scale.is_finite() {
            return Err(Error::Overflow("integrand exponent is not representable".into()));
        }
        // start at the origin unless the origin term is negligible
        let start = if self.ln_f(0.0) >= ln_scale - START_SHIFT_GAP {
            0
        } else {
            (v_peak / mesh.h).round() as i64
        };
        let sum = sum_trapezoid_from(
            |v| {
                let e = self.ln_f(v) - ln_scale;
                let re = if e < LN_TINY { 0.0 } else { e.exp() };
                Complex64::new(re, 0.0)
            },
            mesh,
            start,
        )?;
        Ok((sum.value.re, ln_scale, sum.terms_used))
    }
}

/// `C(a, b; x)`; `|x|` up to [`CHF_X_MAX`].
pub fn chf_c(p: ChfParams, mesh: &MeshSpec) -> Result<ScaledReal> {
    Ok(chf_c_eval(p, mesh)?.0)
}

pub(crate) fn chf_c_eval(p: ChfParams, mesh: &MeshSpec) -> Result<(ScaledReal, usize)> {
    p.validate()?;
    if p.x.abs() > CHF_X_MAX {
        return Err(Error::Overflow(format!(
            "|x| = {} exceeds {CHF_X_MAX}; use the scaled form",
            p.x.abs()
        )));
    }
    let (m, ln_scale, terms) = EulerKernel::confluent(p, false).integrate(mesh)?;
    Ok((ScaledReal::from_ln(m, ln_scale), terms))
}

/// `e^(-x) · C(a, b; x)`; `|x|` up to [`CHF_SCALED_X_MAX`].
pub fn chf_c_scaled(p: ChfParams, mesh: &MeshSpec) -> Result<ScaledReal> {
    Ok(chf_c_scaled_eval(p, mesh)?.0)
}

pub(crate) fn chf_c_scaled_eval(p: ChfParams, mesh: &MeshSpec) -> Result<(ScaledReal, usize)> {
    p.validate()?;
    if p.x.abs() > CHF_SCALED_X_MAX {
        return Err(Error::domain(format!(
            "|x| = {} exceeds {CHF_SCALED_X_MAX}",
            p.x.abs()
        )));
    }
    let (m, ln_scale, terms) = EulerKernel::confluent(p, true).integrate(mesh)?;
    Ok((ScaledReal::from_ln(m, ln_scale), terms))
}

/// `B(a, b) = Γ(a)Γ(b)/Γ(a+b)` from contour-integral gamma values at one mesh.
pub fn beta_with_mesh(a: f64, b: f64, mesh: &MeshSpec) -> Result<(f64, usize)> {
    check_positive("a", a)?;
    check_positive("b", b)?;
    let ga = gamma_eval(a, mesh)?;
    let gb = gamma_eval(b, mesh)?;
    let gab = gamma_eval(a + b, mesh)?;
    let v = ga.value * (gb.value / gab.value);
    if !v.is_finite() {
        return Err(Error::Overflow(format!("B({a}, {b}) is out of range")));
    }
    Ok((v, ga.terms_used + gb.terms_used + gab.terms_used))
}

/// `B(a, b)`, refined from `h = 1/16`.
pub fn beta(a: f64, b: f64) -> Result<f64> {
    let r = refine_levels(&RefinePlan::turnkey(), &MeshSpec::default(), |m| beta_with_mesh(a, b, m))?;
    Ok(r.final_value)
}

fn check_kummer(a: f64, c: f64) -> Result<()> {
    check_positive("a", a)?;
    if !(c.is_finite() && c > a) {
        return Err(Error::domain(format!("c must exceed a = {a}, got {c}")));
    }
    Ok(())
}

/// Kummer's `M(a, c; x) = C(a, c - a; x) / B(a, c - a)`.
pub fn kummer_m(a: f64, c: f64, x: f64, mesh: &MeshSpec) -> Result<ScaledReal> {
    Ok(kummer_m_eval(a, c, x, mesh)?.0)
}

pub(crate) fn kummer_m_eval(a: f64, c: f64, x: f64, mesh: &MeshSpec) -> Result<(ScaledReal, usize)> {
    check_kummer(a, c)?;
    let p = ChfParams::new(a, c - a, x);
    p.validate()?;
    if x.abs() > CHF_X_MAX {
        return Err(Error::Overflow(format!("|x| = {} exceeds {CHF_X_MAX}", x.abs())));
    }
    let (m, ln_scale, terms) = EulerKernel::confluent(p, false).integrate(mesh)?;
    let b = beta(a, c - a)?;
    Ok((ScaledReal::from_ln(m / b, ln_scale), terms))
}

/// Gauss `₂F₁(a, b; c; z)` for real `z < 1` and `c > b > 0`.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64, mesh: &MeshSpec) -> Result<f64> {
    Ok(gauss_2f1_eval(a, b, c, z, mesh)?.0)
}

pub(crate) fn gauss_2f1_eval(a: f64, b: f64, c: f64, z: f64, mesh: &MeshSpec) -> Result<(f64, usize)> {
    if !a.is_finite() {
        return Err(Error::domain(format!("a must be finite, got {a}")));
    }
    check_positive("b", b)?;
    if !(c.is_finite() && c > b) {
        return Err(Error::domain(format!("c must exceed b = {b}, got {c}")));
    }
    if !(z.is_finite() && z < 1.0) {
        return Err(Error::domain(format!("z must be finite and below 1, got {z}")));
    }
    let kernel = EulerKernel {
        p: b,
        q: c - b,
        x: 0.0,
        shifted: false,
        gauss: Some((a, z)),
    };
    let (m, ln_scale, terms) = kernel.integrate(mesh)?;
    let norm = beta(b, c - b)?;
    let v = m / norm * ln_scale.exp();
    if !v.is_finite() {
        return Err(Error::Overflow(format!("2F1({a}, {b}; {c}; {z}) is out of range")));
    }
    Ok((v, terms))
}
