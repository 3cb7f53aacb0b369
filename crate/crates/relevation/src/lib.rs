//! Failure-time processes under relevation repair and replacement by a new
//! unit.
//!
//! A *relevation* repair replaces a unit that failed at age `x` by a unit of
//! the same age drawn from the next distribution in a sequence, so the
//! repaired unit restarts conditioned on having survived to `x`. Iterating
//! the policy produces an elementary pure birth (EPB) process; replacing by
//! a brand-new unit instead produces an ordinary renewal-style process. The
//! crate builds both kinds of processes, computes their arrival-time laws by
//! adaptive quadrature, simulates them with reproducible counter-based
//! streams, and compares them under stochastic, hazard-rate and dynamic
//! multivariate hazard orders. Ageing classifiers (IFR/DFR, NBU/NWU) connect
//! the shape of a single lifetime distribution to the direction of those
//! comparisons.
//!
//! Modules:
//!
//! * [`dist`]: lifetime distribution families and their transforms.
//! * [`seq`]: sequences of distributions with extension rules.
//! * [`quad`]: adaptive Gauss-Kronrod quadrature.
//! * [`interp`]: Chebyshev interpolation used by the marginal recursion.
//! * [`curve`]: survival curves, grids and DKW confidence bands.
//! * [`epb`]: relevation transform, EPB marginal/joint laws, minimal repair.
//! * [`process`]: path simulation, coupling, counting statistics.
//! * [`rng`]: deterministic counter-based uniform streams.
//! * [`orders`]: stochastic order verdicts and theorem hypothesis checks.
//! * [`ageing`]: IFR/DFR and NBU/NWU classification.

pub mod ageing;
pub mod curve;
pub mod dist;
pub mod epb;
mod error;
pub mod interp;
pub mod orders;
pub mod process;
pub mod quad;
pub mod rng;
pub mod seq;

pub use ageing::{AgeingReport, TriState};
pub use curve::{CurveKind, EmpiricalCurveSet, SurvivalCurve};
pub use dist::LifetimeDistribution;
pub use epb::{epb_joint_density, epb_marginal, minimal_repair_marginal, relevation_transform};
pub use error::{Error, Result};
pub use orders::{OrderKind, OrderVerdict, Relation};
pub use process::{ArrivalPath, ProcessSpec};
pub use rng::CounterStream;
pub use seq::{DistributionSequence, ExtendRule};
