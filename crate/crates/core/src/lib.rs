//! Exact solutions, a comoving Crank–Nicolson propagator and a verification
//! harness for the inverted harmonic oscillator confined to an expanding box.

pub mod analytic;
pub mod cli;
pub mod csvfmt;
pub mod error;
pub mod exec;
pub mod propagator;
pub mod quadrature;
pub mod statmech;
pub mod verifier;

pub use error::{Error, Result};
pub use exec::Execution;
