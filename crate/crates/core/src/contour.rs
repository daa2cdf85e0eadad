//! Hyperbolic inverse-Laplace contour `y(u) = c + σ(1 - cosh u + i sinh u)`.
//!
//! The contour starts far out in the third quadrant, crosses the real axis
//! once at `y = c` (for `u = 0`) and ends far out in the second quadrant.
//! `σ = 1` is the plain contour; the upper-incomplete branch uses a scaled
//! copy so that it stays clear of both the pole at `y = 0` and the branch
//! point at `y = -x`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// One node on the contour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSample {
    pub u: f64,
    pub y: Complex64,
    pub dy_du: Complex64,
}

/// Which incomplete-gamma integral the contour produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `c > 0`: encloses the pole at the origin, gives `γ(s, x)`.
    Lower,
    /// `-x < c < 0`: passes between the branch point and the pole,
    /// gives `γ(s, x) - Γ(s)`.
    Upper,
}

/// A branch together with its crossing point and scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchSelector {
    pub kind: Branch,
    pub c: f64,
    pub scale: f64,
}

impl BranchSelector {
    pub fn lower(s: f64, x: f64) -> Result<Self> {
        Ok(BranchSelector {
            kind: Branch::Lower,
            c: crossing_point_lower(s, x)?,
            scale: 1.0,
        })
    }

    /// The scale `x + c` keeps every contour point at least as far from
    /// the branch point `-x` as the crossing is.
    pub fn upper(s: f64, x: f64) -> Result<Self> {
        let c = crossing_point_upper(s, x)?;
        Ok(BranchSelector {
            kind: Branch::Upper,
            c,
            scale: x + c,
        })
    }

    /// Checks the crossing against the admissible interval for `x`.
    pub fn check(&self, x: f64) -> Result<()> {
        let ok = match self.kind {
            Branch::Lower => self.c > 0.0,
            Branch::Upper => -x < self.c && self.c < 0.0,
        };
        if ok && self.scale > 0.0 {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "crossing point {} (scale {}) is not admissible for the {:?} branch at x = {}",
                self.c, self.scale, self.kind, x
            )))
        }
    }

    pub fn contour(&self) -> Contour {
        Contour {
            c: self.c,
            scale: self.scale,
        }
    }
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

/// Both roots of `y² - (s + 1 - x)·y - x = 0`, the stationary points of
/// `y - ln y - s·ln(1 + y/x)` on the real axis. Returns `(positive, negative)`.
fn stationary_roots(s: f64, x: f64) -> (f64, f64) {
    let b = s + 1.0 - x;
    let disc = b.hypot(2.0 * x.sqrt());
    // pick the non-cancelling form for the positive root
    let pos = if b >= 0.0 { (b + disc) / 2.0 } else { 2.0 * x / (disc - b) };
    (pos, -x / pos)
}

/// Constant-phase crossing for the lower branch:
/// `c = [(s + 1 - x) + √((s + 1 - x)² + 4x)] / 2`.
pub fn crossing_point_lower(s: f64, x: f64) -> Result<f64> {
    check_s_x(s, x)?;
    Ok(stationary_roots(s, x).0)
}

/// Crossing for the upper branch: the negative stationary point
/// `-x / crossing_point_lower(s, x)`, which always lies in `(-x, 0)`.
pub fn crossing_point_upper(s: f64, x: f64) -> Result<f64> {
    check_s_x(s, x)?;
    Ok(stationary_roots(s, x).1)
}

/// Unscaled contour node.
pub fn sample(c: f64, u: f64) -> ContourSample {
    Contour { c, scale: 1.0 }.sample(u)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contour {
    pub c: f64,
    pub scale: f64,
}

impl Contour {
    pub fn sample(&self, u: f64) -> ContourSample {
        let (sh, ch) = (u.sinh(), u.cosh());
        ContourSample {
            u,
            y: Complex64::new(self.c + self.scale * (1.0 - ch), self.scale * sh),
            dy_du: Complex64::new(-self.scale * sh, self.scale * ch),
        }
    }
}

/// Principal `ln(1 + w)` without cancellation for small `|w|`.
pub fn ln_1p(w: Complex64) -> Complex64 {
    let re = if w.norm() < 0.5 {
        0.5 * (w.re * (2.0 + w.re) + w.im * w.im).ln_1p()
    } else {
        (1.0 + w.re).hypot(w.im).ln()
    };
    Complex64::new(re, w.im.atan2(1.0 + w.re))
}
