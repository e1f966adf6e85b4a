//! Pulse-wave propagation in a 2D fluid channel capped by a poroelastic wall.
//!
//! The library couples time-dependent Stokes flow in a rectangular channel to a
//! poroelastic wall model on the upper boundary, in two interchangeable forms:
//!
//! * [`fpsi_plate`]: the wall is reduced to a poroelastic Kirchhoff plate on the
//!   interface carrying transverse displacement, its velocity, and two pressure
//!   moments (jump and through-thickness average).
//! * [`fpsi_biot`]: the wall is a thin bulk Biot layer meshed in 2D, coupled to
//!   the channel through velocity, stress, and mass-conservation conditions.
//!
//! Both are discretized with Taylor–Hood elements for the fluid, advanced by a
//! monolithic implicit Euler step, and instrumented with energy accounting.
//! [`spectral`] provides a per-mode eigenvalue study of a regularized,
//! normalized variant of the plate problem. [`cli`] wires everything into a
//! batch command-line tool with CSV/VTK/SVG exporters.
//!
//! All quantities are in CGS units (cm, g, s, dyne).

pub mod cli;
pub mod config;
pub mod diagnostics;
pub mod driver;
pub mod export;
pub mod fem;
pub mod fpsi_biot;
pub mod fpsi_plate;
pub mod linsolve;
pub mod mesh;
pub mod spectral;

/// Errors from building or running a coupled model.
#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error(transparent)]
    Config(#[from] config::ConfigError),
    #[error(transparent)]
    Solve(#[from] linsolve::SolveError),
    #[error(transparent)]
    Spectral(#[from] spectral::SpectralError),
}
