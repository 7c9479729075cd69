//! Runtime-dispatchable moment strategies.
//!
//! The two computation pipelines — the exact central-value table and the
//! functional-equation engine — sit behind the [`MomentMethod`] trait so
//! sweeps and the CLI pick one by name; constructor options travel in
//! [`MethodOpts`].

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::lfun::GChoice;
use crate::moment::{afe_moment_opts, moment_exact, MomentMethod, MomentReport};

/// Options consumed by method constructors; irrelevant fields ignored.
#[derive(Clone, Copy, Debug)]
pub struct MethodOpts {
    /// Functional-equation split as a multiple of q: X = x_factor·q.
    pub x_factor: f64,
    /// Test-function choice for the functional equation.
    pub g: GChoice,
}

impl Default for MethodOpts {
    fn default() -> Self {
        MethodOpts {
            x_factor: 1.0,
            g: GChoice::Exp1,
        }
    }
}

/// The exact central-value pipeline.
pub struct ExactMoment;

impl MomentMethod for ExactMoment {
    fn name(&self) -> &'static str {
        "exact"
    }
    fn compute(&self, ctx: &FieldCtx, a: i64, b: i64) -> Result<MomentReport> {
        moment_exact(ctx, a, b)
    }
}

/// The functional-equation pipeline with X = x_factor·q, Y = q²/X.
pub struct AfeMoment {
    pub x_factor: f64,
    pub g: GChoice,
}

impl MomentMethod for AfeMoment {
    fn name(&self) -> &'static str {
        "afe"
    }
    fn compute(&self, ctx: &FieldCtx, a: i64, b: i64) -> Result<MomentReport> {
        afe_moment_opts(ctx, a, b, self.x_factor * ctx.q() as f64, self.g)
    }
}

/// Boxed strategy, shareable across sweep workers.
pub type BoxedMethod = Box<dyn MomentMethod + Send + Sync>;

type Constructor = fn(&MethodOpts) -> BoxedMethod;

fn make_exact(_: &MethodOpts) -> BoxedMethod {
    Box::new(ExactMoment)
}

fn make_afe(opts: &MethodOpts) -> BoxedMethod {
    Box::new(AfeMoment {
        x_factor: opts.x_factor,
        g: opts.g,
    })
}

/// Name → constructor table for the moment strategies.
pub struct Registry {
    map: BTreeMap<&'static str, Constructor>,
}

impl Registry {
    /// The built-in strategies: "afe" and "exact".
    pub fn standard() -> Registry {
        let mut map: BTreeMap<&'static str, Constructor> = BTreeMap::new();
        map.insert("exact", make_exact);
        map.insert("afe", make_afe);
        Registry { map }
    }

    /// Instantiate a strategy by name.
    pub fn create(&self, name: &str, opts: &MethodOpts) -> Result<BoxedMethod> {
        self.map
            .get(name)
            .map(|c| c(opts))
            .ok_or_else(|| Error::PreconditionViolated {
                what: format!("unknown method {name:?}; available: {:?}", self.names()),
            })
    }

    /// Registered names, sorted.
    pub fn names(&self) -> Vec<&'static str> {
        self.map.keys().copied().collect()
    }
}
