//! Complex-plane singularities of the viscous Burgers equation
//! `u_t + u u_x = mu u_xx` with initial data `u(x, 0) = 1 / (1 + x^2)`.
//!
//! The exact solution is evaluated off the real line through the Cole-Hopf
//! integral ([`colehopf`]). Around it sit the small-time inner problem
//! ([`inner`]), large-time similarity ([`largetime`]), inviscid branch points
//! ([`inviscid`]), pole trackers ([`poletrack`], [`aaa`]) and a real-line
//! spectral solver ([`realline`]).

pub mod aaa;
pub mod colehopf;
pub mod error;
pub mod frontend;
pub mod generalbeta;
pub mod inner;
pub mod inviscid;
pub mod largetime;
pub mod parallel;
pub mod poletrack;
pub mod quadrature;
pub mod realline;
pub mod specfun;
pub mod types;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use types::{build_grid, schwarz_reflect, Grid2D, PhysParams, PoleSample, PoleTrajectory, TrackMethod};
