//! Evaluation of the Gauss hypergeometric function `F(a, b; c; x)` on
//! `[0, 1)` and machine checks of sharp inequalities for the quotient
//! `(F(x) + F(y)) / F(x + y - xy)` and the difference
//! `F(x) + F(y) - F(x + y - xy)`, together with their analogues for the
//! zero-balanced product `g(x) = x F(c, d; c + d; x)`.
//!
//! Module map:
//! * [`specfun`]: gamma, log-gamma, digamma, beta and `R(a, b)`.
//! * [`hyp2f1`]: the evaluator, regime classification, `F(a,b;c;1)`,
//!   derivative and `g`.
//! * [`inequalities`]: the functionals and a registry of checkable bound
//!   predicates.
//! * [`verifier`]: independent oracles, sweeps, sub-additivity checks and
//!   an extremal probe.
//! * [`cli`]: the `hypotest` command-line front end.

pub mod cli;
pub mod error;
pub mod hyp2f1;
pub mod inequalities;
pub mod specfun;
pub mod sum;
pub mod verifier;

pub use error::{Error, Result};
pub use hyp2f1::{EvalConfig, EvalResult, Method, ParamTriple, Regime, RegimeTag, UnitArg};
