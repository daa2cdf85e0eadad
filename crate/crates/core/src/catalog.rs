//! Name-addressable registry of every function the crate evaluates, with a
//! uniform `(params, mesh) -> (value, nodes)` calling convention used by the
//! CLI, the golden tables and the C interface.

use std::fmt;
use std::str::FromStr;

use crate::engine::{refine_levels, sweep_levels, ConvergenceReport, MeshSpec, RefinePlan};
use crate::error::{Error, Result};
use crate::gamma;
use crate::hypergeom::{self, ChfParams};
use crate::scaled::ScaledReal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Function {
    GammaP,
    GammaQ,
    Gamma,
    RGamma,
    LowerGamma,
    Erf,
    Chf,
    ChfScaled,
    KummerM,
    Beta,
    Gauss2F1,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown function '{0}'")]
pub struct UnknownFunction(pub String);

impl Function {
    pub const ALL: [Function; 11] = [
        Function::GammaP,
        Function::GammaQ,
        Function::Gamma,
        Function::RGamma,
        Function::LowerGamma,
        Function::Erf,
        Function::Chf,
        Function::ChfScaled,
        Function::KummerM,
        Function::Beta,
        Function::Gauss2F1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Function::GammaP => "gamma-p",
            Function::GammaQ => "gamma-q",
            Function::Gamma => "gamma",
            Function::RGamma => "rgamma",
            Function::LowerGamma => "lgamma-lower",
            Function::Erf => "erf",
            Function::Chf => "chf",
            Function::ChfScaled => "chf-scaled",
            Function::KummerM => "kummer-m",
            Function::Beta => "beta",
            Function::Gauss2F1 => "gauss-2f1",
        }
    }

    /// Parameter names in positional order.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Function::GammaP | Function::GammaQ | Function::LowerGamma => &["s", "x"],
            Function::Gamma | Function::RGamma => &["s"],
            Function::Erf => &["x"],
            Function::Chf | Function::ChfScaled => &["a", "b", "x"],
            Function::KummerM => &["a", "c", "x"],
            Function::Beta => &["a", "b"],
            Function::Gauss2F1 => &["a", "b", "c", "z"],
        }
    }

    fn check_arity(self, params: &[f64]) -> Result<()> {
        let want = self.param_names().len();
        if params.len() == want {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "{} takes {want} parameters ({}), got {}",
                self.name(),
                self.param_names().join(", "),
                params.len()
            )))
        }
    }

    /// One trapezoid evaluation at `mesh.h`.
    pub fn evaluate_at(self, params: &[f64], mesh: &MeshSpec) -> Result<(ScaledReal, usize)> {
        self.check_arity(params)?;
        let p = params;
        let real = |g: gamma::GammaEval| (ScaledReal::from_f64(g.value), g.terms_used);
        Ok(match self {
            Function::GammaP => real(gamma::regularized_lower_p(p[0], p[1], mesh)?),
            Function::GammaQ => real(gamma::regularized_upper_q(p[0], p[1], mesh)?),
            Function::Gamma => real(gamma::gamma_eval(p[0], mesh)?),
            Function::RGamma => real(gamma::reciprocal_gamma(p[0], mesh)?),
            Function::LowerGamma => real(gamma::lower_incomplete_gamma_eval(p[0], p[1], mesh)?),
            Function::Erf => real(gamma::erf_eval(p[0], mesh)?),
            Function::Chf => hypergeom::chf_c_eval(ChfParams::new(p[0], p[1], p[2]), mesh)?,
            Function::ChfScaled => hypergeom::chf_c_scaled_eval(ChfParams::new(p[0], p[1], p[2]), mesh)?,
            Function::KummerM => hypergeom::kummer_m_eval(p[0], p[1], p[2], mesh)?,
            Function::Beta => {
                let (v, n) = hypergeom::beta_with_mesh(p[0], p[1], mesh)?;
                (ScaledReal::from_f64(v), n)
            }
            Function::Gauss2F1 => {
                let (v, n) = hypergeom::gauss_2f1_eval(p[0], p[1], p[2], p[3], mesh)?;
                (ScaledReal::from_f64(v), n)
            }
        })
    }

    /// Refinement schedule used when the caller does not pick one: `h0 = 1`
    /// and eight levels, except for the upper incomplete gamma, whose
    /// contour needs a starting mesh fine enough to resolve the nearby pole.
    pub fn default_plan(self, params: &[f64]) -> Result<RefinePlan> {
        self.check_arity(params)?;
        let h0 = match self {
            Function::GammaQ => gamma::upper_q_start_h(params[0], params[1])?,
            _ => 1.0,
        };
        Ok(RefinePlan::new(h0, crate::engine::DEFAULT_MAX_LEVELS))
    }
}

impl fmt::Display for Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Function {
    type Err = UnknownFunction;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Function::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| UnknownFunction(s.to_string()))
    }
}

/// Mesh-halving refinement that stops once two levels agree.
pub fn converge(
    function: Function,
    params: &[f64],
    plan: &RefinePlan,
    mesh: &MeshSpec,
) -> Result<ConvergenceReport<ScaledReal>> {
    function.check_arity(params)?;
    refine_levels(plan, mesh, |m| function.evaluate_at(params, m))
}

/// All `plan.max_levels` levels, as printed in a convergence table.
pub fn sweep(
    function: Function,
    params: &[f64],
    plan: &RefinePlan,
    mesh: &MeshSpec,
) -> Result<ConvergenceReport<ScaledReal>> {
    function.check_arity(params)?;
    sweep_levels(plan, mesh, |m| function.evaluate_at(params, m))
}
