//! Explicit kinetic relaxation solver for one-dimensional convection-diffusion
//! systems: scalar diffusion, advection-diffusion, viscous Burgers and the
//! compressible Navier-Stokes equations.
//!
//! A two-wave BGK model with a collision *matrix* reproduces the target
//! diffusion tensor; the stiff relaxation is handled point-wise while transport
//! stays explicit. Time integration is implicit-explicit Euler or a deferred
//! correction built on Lobatto IIIC (orders 2 and 4), paired with upwind or
//! central difference stencils.
//!
//! ```
//! use kinetic1d::harness::{builtin, run_case};
//!
//! let mut case = builtin("diffusion").unwrap();
//! case.grid.n = Some(40);
//! case.run.t_end = 0.01;
//! let result = run_case(&case).unwrap();
//! assert!(result.l2.unwrap() < 1e-3);
//! ```

// `!(x > 0.0)` is used on purpose: it rejects NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod exact;
pub mod harness;
pub mod kinetic;
pub mod linalg;
pub mod models;
pub mod par;
pub mod spatial;
pub mod stability;
pub mod timeint;

pub use error::{Error, Result};
pub use kinetic::{WaveModel, WaveSpeed};
pub use models::{ConservedState, ProblemKind, ProblemSpec};
pub use spatial::{Boundary, Grid1D, PopulationField, SpaceOperator};
pub use timeint::{run, RunSetup, SchemeConfig, SolverState, Stepper, Trajectory};
