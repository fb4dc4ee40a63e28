//! Quantum wave packets in a uniform linear potential `V = m g x`.
//!
//! Three independent routes to the same dynamics cross-check each other:
//! the exactly factored propagator ([`propagator`]), a Strang split-step
//! solver ([`solver`]) and dense-matrix exponentiation on small grids
//! ([`oracle`]). On top of these sit the classical two-time actions
//! ([`action`]), the proper-time action ([`relativistic`]) and the
//! falling-versus-inertial interferometer ([`interferometry`]).

pub mod action;
pub mod error;
pub mod grid;
pub mod interferometry;
pub mod oracle;
pub mod params;
pub mod propagator;
pub mod relativistic;
pub mod solver;
pub mod spectral;
pub mod trajectory;
pub mod wavepacket;

pub use error::{Error, Result};
pub use grid::Grid;
pub use params::PhysicalParams;
pub use spectral::{to_momentum, to_position, MomentumPacket};
pub use trajectory::{Trajectory, TrajectoryForm};
pub use wavepacket::{l2_distance, make_gaussian, moments, overlap, Moments, WavePacket};
