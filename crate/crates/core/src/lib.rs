//! One-parameter Gaussian states of the quartic anharmonic oscillator
//! `H = p²/2 + ω²x²/2 + λx⁴/4`.
//!
//! The Gaussian family is indexed by its conserved energy expectation value.
//! [`closed_form`] gives its width trajectory in terms of elliptic functions,
//! [`dynamics`] integrates the width and mode equations numerically,
//! [`bogoliubov`] relates the family to squeezed vacua of the gap-equation
//! mode and [`fock`] diagonalizes the Hamiltonian in a truncated number basis.

pub mod bogoliubov;
pub mod closed_form;
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod model;
pub mod ode;
pub mod special;

pub use error::{Error, Result};
pub use model::{
    acceleration, effective_potential, energy, gaussian_moments, solve_gap_equation,
    GaussianMoments, OscillatorParams, VacuumSolution, WidthState,
};
