//! Slab grid, Galerkin sine basis, central stencils, boundary traces and the
//! smoothed negative part entering the inflow closure.

mod basis;
mod boundary;
mod grid;
mod ops;
mod smoothing;
mod state;

pub use basis::{build_basis, GalerkinBasis};
pub use boundary::{BoundaryData, EndpointFlow, Side, TimeFunction, Trace};
pub use grid::Grid1D;
pub use ops::{divergence, gradient, laplacian, Closure, RobinEnd};
pub use smoothing::{smoothed_negative_part, NegativePart, SmoothingKind};
pub use state::FieldState;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DiscretizationError {
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("{n_modes} modes alias on {n_cells} cells (at most {limit} are resolvable)")]
    Aliasing { n_modes: usize, n_cells: usize, limit: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    Length { expected: usize, got: usize },
    #[error("invalid state: {0}")]
    State(String),
}

pub(crate) fn check_len(expected: usize, got: usize) -> Result<(), DiscretizationError> {
    if expected == got {
        Ok(())
    } else {
        Err(DiscretizationError::Length { expected, got })
    }
}
