//! Locally inertial Godunov method with dynamical time dilation.
//!
//! Solves 1D balance laws `u_t + f(A,u)_x = g(A,u,x)` coupled to a metric that
//! obeys the spatial ODE `A' = h(A,u,x)`, and measures how well the computed
//! solutions satisfy the weak form of the equations.

pub mod cli;
pub mod io;
pub mod model;
pub mod quadrature;
pub mod riemann;
pub mod scheme;
pub mod state;
pub mod verify;

pub use model::{BalanceLaw, ModelError, ModelParams};
pub use riemann::{RiemannError, RiemannFan};
pub use scheme::{GridState, InitialProfile, Mesh, SchemeError, SchemeOptions, Simulation, Snapshot, Trajectory};
pub use state::{ConservedState, MetricState, SmallMatrix, StateVec};
