//! Trapezoidal summation over the integer lattice `n·h` and the
//! mesh-halving driver built on top of it.
//!
//! The sum starts at `n = 0` and grows outward one node at a time, in the
//! fixed order `0, +1, -1, +2, -2, ...`. Each tail stops on its own once
//! `consecutive_small` successive terms satisfy
//! `|h·f(nh)| < trunc_tol · max(|partial sum|, trunc_tol)`.

use num_complex::Complex64;

use crate::error::{Error, Result, Side};

/// Default fractional truncation threshold.
///
/// With two consecutive small terms this reproduces the golden-table
/// node counts for the incomplete-gamma contour sums exactly.
pub const DEFAULT_TRUNC_TOL: f64 = 1e-24;
pub const DEFAULT_MAX_TERMS_PER_SIDE: usize = 100_000;
pub const DEFAULT_CONSECUTIVE_SMALL: usize = 2;
pub const DEFAULT_AGREE_TOL: f64 = 1e-15;
pub const DEFAULT_MAX_LEVELS: usize = 8;

/// Control knobs of a single trapezoid sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshSpec {
    pub h: f64,
    pub trunc_tol: f64,
    pub max_terms_per_side: usize,
    pub consecutive_small: usize,
}

impl Default for MeshSpec {
    fn default() -> Self {
        MeshSpec {
            h: 1.0 / 16.0,
            trunc_tol: DEFAULT_TRUNC_TOL,
            max_terms_per_side: DEFAULT_MAX_TERMS_PER_SIDE,
            consecutive_small: DEFAULT_CONSECUTIVE_SMALL,
        }
    }
}

impl MeshSpec {
    pub fn new(h: f64) -> Self {
        MeshSpec {
            h,
            ..Default::default()
        }
    }

    pub fn with_h(&self, h: f64) -> Self {
        MeshSpec { h, ..*self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h.is_finite() && self.h > 0.0) {
            return Err(Error::domain(format!("mesh size h must be positive, got {}", self.h)));
        }
        if !(self.trunc_tol > 0.0 && self.trunc_tol < 1.0) {
            return Err(Error::domain(format!(
                "truncation tolerance must lie in (0, 1), got {}",
                self.trunc_tol
            )));
        }
        if self.max_terms_per_side == 0 {
            return Err(Error::domain("max_terms_per_side must be at least 1"));
        }
        if self.consecutive_small == 0 {
            return Err(Error::domain("consecutive_small must be at least 1"));
        }
        Ok(())
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct ComplexAccumulator {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexAccumulator {
    fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    fn total(&self) -> Complex64 {
        Complex64::new(self.re.total(), self.im.total())
    }
}

/// Result of one truncated lattice sum `h·Σ f(nh)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapSum {
    pub value: Complex64,
    /// Total number of nodes evaluated, including `n = 0`.
    pub terms_used: usize,
    pub truncated_left: bool,
    pub truncated_right: bool,
    /// Number of nodes evaluated left of the starting node.
    pub last_left: usize,
    /// Number of nodes evaluated right of the starting node.
    pub last_right: usize,
}

struct Tail {
    side: Side,
    next: usize,
    small_run: usize,
    done: bool,
}

impl Tail {
    fn new(side: Side) -> Self {
        Tail {
            side,
            next: 1,
            small_run: 0,
            done: false,
        }
    }

    fn arg(&self, start: i64, h: f64) -> f64 {
        let n = match self.side {
            Side::Right => start + self.next as i64,
            Side::Left => start - self.next as i64,
        };
        n as f64 * h
    }
}

fn checked_term<F>(f: &F, arg: f64, h: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let v = f(arg);
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::NonFiniteTerm { arg });
    }
    Ok(v * h)
}

/// Truncated trapezoidal rule over the whole real line.
pub fn sum_trapezoid<F>(f: F, mesh: &MeshSpec) -> Result<TrapSum>
where
    F: Fn(f64) -> Complex64,
{
    sum_trapezoid_from(f, mesh, 0)
}

/// Same lattice `n·h`, but the outward sweep starts at `n = start`.
///
/// For integrands whose mass sits far from the origin, where the terms near
/// `n = 0` would otherwise trip the truncation rule before the peak is seen.
pub fn sum_trapezoid_from<F>(f: F, mesh: &MeshSpec, start: i64) -> Result<TrapSum>
where
    F: Fn(f64) -> Complex64,
{
    mesh.validate()?;
    let h = mesh.h;
    let mut acc = ComplexAccumulator::default();
    acc.add(checked_term(&f, start as f64 * h, h)?);
    let mut terms_used = 1;

    let mut tails = [Tail::new(Side::Right), Tail::new(Side::Left)];
    while tails.iter().any(|t| !t.done) {
        for tail in tails.iter_mut().filter(|t| !t.done) {
            if tail.next > mesh.max_terms_per_side {
                return Err(Error::TermCapExceeded {
                    side: tail.side,
                    cap: mesh.max_terms_per_side,
                });
            }
            let term = checked_term(&f, tail.arg(start, h), h)?;
            acc.add(term);
            terms_used += 1;

            let reference = acc.total().norm().max(mesh.trunc_tol);
            if term.norm() < mesh.trunc_tol * reference {
                tail.small_run += 1;
            } else {
                tail.small_run = 0;
            }
            if tail.small_run >= mesh.consecutive_small {
                tail.done = true;
            } else {
                tail.next += 1;
            }
        }
    }

    Ok(TrapSum {
        value: acc.total(),
        terms_used,
        truncated_left: true,
        truncated_right: true,
        last_left: tails[1].next,
        last_right: tails[0].next,
    })
}

/// Values that the refinement driver can compare between levels.
pub trait Refinable: Clone {
    /// Relative difference `|self - other| / max(|self|, |other|)`, zero when
    /// both vanish.
    fn rel_diff(&self, other: &Self) -> f64;
}

fn rel_diff_by(diff: f64, a: f64, b: f64) -> f64 {
    let scale = a.max(b);
    if scale == 0.0 {
        0.0
    } else {
        diff / scale
    }
}

impl Refinable for f64 {
    fn rel_diff(&self, other: &Self) -> f64 {
        rel_diff_by((self - other).abs(), self.abs(), other.abs())
    }
}

impl Refinable for Complex64 {
    fn rel_diff(&self, other: &Self) -> f64 {
        rel_diff_by((self - other).norm(), self.norm(), other.norm())
    }
}

/// Mesh-halving schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinePlan {
    pub h0: f64,
    pub max_levels: usize,
    pub agree_tol: f64,
}

impl Default for RefinePlan {
    fn default() -> Self {
        RefinePlan {
            h0: 1.0,
            max_levels: DEFAULT_MAX_LEVELS,
            agree_tol: DEFAULT_AGREE_TOL,
        }
    }
}

impl RefinePlan {
    pub fn new(h0: f64, max_levels: usize) -> Self {
        RefinePlan {
            h0,
            max_levels,
            ..Default::default()
        }
    }

    /// Start at `h = 1/16` and allow two more halvings.
    pub fn turnkey() -> Self {
        RefinePlan::new(1.0 / 16.0, 3)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h0.is_finite() && self.h0 > 0.0) {
            return Err(Error::domain(format!("h0 must be positive, got {}", self.h0)));
        }
        if self.max_levels < 2 {
            return Err(Error::domain(format!(
                "at least 2 levels are needed, got {}",
                self.max_levels
            )));
        }
        if self.agree_tol.is_nan() || self.agree_tol < 0.0 {
            return Err(Error::domain("agreement tolerance must be nonnegative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Level<V> {
    pub h: f64,
    pub value: V,
    pub terms_used: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport<V> {
    pub levels: Vec<Level<V>>,
    pub converged: bool,
    pub final_value: V,
    /// Relative change between the last two levels.
    pub relative_change: f64,
}

impl<V: Refinable> ConvergenceReport<V> {
    pub fn final_level(&self) -> &Level<V> {
        self.levels.last().expect("a report always holds at least one level")
    }

    /// Coarsest level whose value already agrees with the final value to
    /// `tol` relative.
    pub fn settled_level(&self, tol: f64) -> &Level<V> {
        let last = self.final_level();
        self.levels
            .iter()
            .find(|l| l.value.rel_diff(&last.value) <= tol)
            .unwrap_or(last)
    }

    /// Relative change from each level to the next (one entry per halving).
    pub fn successive_changes(&self) -> Vec<f64> {
        self.levels
            .windows(2)
            .map(|w| w[1].value.rel_diff(&w[0].value))
            .collect()
    }

    /// Significant digits on which successive levels agree, capped at 17.
    pub fn agreeing_digits(&self) -> Vec<f64> {
        self.successive_changes()
            .into_iter()
            .map(|d| if d == 0.0 { 17.0 } else { (-d.log10()).clamp(0.0, 17.0) })
            .collect()
    }
}

/// Runs `eval` at `h0, h0/2, h0/4, ...` until two successive values agree.
///
/// `eval` returns the value at a level together with the number of nodes
/// it used.
pub fn refine_levels<V, E>(plan: &RefinePlan, base: &MeshSpec, eval: E) -> Result<ConvergenceReport<V>>
where
    V: Refinable,
    E: FnMut(&MeshSpec) -> Result<(V, usize)>,
{
    run_levels(plan, base, eval, true)
}

/// Like [`refine_levels`] but always runs all `plan.max_levels` levels;
/// `converged` then only says whether the last two agree.
pub fn sweep_levels<V, E>(plan: &RefinePlan, base: &MeshSpec, eval: E) -> Result<ConvergenceReport<V>>
where
    V: Refinable,
    E: FnMut(&MeshSpec) -> Result<(V, usize)>,
{
    run_levels(plan, base, eval, false)
}

fn run_levels<V, E>(plan: &RefinePlan, base: &MeshSpec, mut eval: E, stop_early: bool) -> Result<ConvergenceReport<V>>
where
    V: Refinable,
    E: FnMut(&MeshSpec) -> Result<(V, usize)>,
{
    plan.validate()?;
    let mut levels: Vec<Level<V>> = Vec::with_capacity(plan.max_levels);
    let mut h = plan.h0;
    let mut relative_change = f64::INFINITY;

    for level in 0..plan.max_levels {
        let mesh = base.with_h(h);
        let (value, terms_used) = eval(&mesh).map_err(|e| Error::AtLevel {
            level,
            h,
            source: Box::new(e),
        })?;
        if let Some(prev) = levels.last() {
            relative_change = value.rel_diff(&prev.value);
        }
        levels.push(Level { h, value, terms_used });
        if stop_early && levels.len() >= 2 && relative_change <= plan.agree_tol {
            break;
        }
        h /= 2.0;
    }

    let final_value = levels.last().map(|l| l.value.clone()).expect("max_levels >= 2");
    Ok(ConvergenceReport {
        levels,
        converged: relative_change <= plan.agree_tol,
        final_value,
        relative_change,
    })
}

/// Refinement of one fixed integrand.
pub fn refine<F>(f: F, plan: &RefinePlan, base: &MeshSpec) -> Result<ConvergenceReport<Complex64>>
where
    F: Fn(f64) -> Complex64,
{
    refine_levels(plan, base, |mesh| {
        let s = sum_trapezoid(&f, mesh)?;
        Ok((s.value, s.terms_used))
    })
}
