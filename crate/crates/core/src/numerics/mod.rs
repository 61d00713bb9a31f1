//! Numerical kernels shared by the scattering solvers.

pub mod gamma;
pub mod grid;
pub mod lstsq;
pub mod poly;
pub mod quadrature;
pub mod spline;

pub use gamma::{complex_gamma, reciprocal_gamma};
pub use grid::{ComplexField, Grid, GridSpec, PANEL};
pub use poly::Polynomial;
pub use quadrature::{cumulative_tail_left, cumulative_tail_right, integrate, PanelRule};
pub use spline::{spline_derivative, spline_derivative_at, CubicSpline};
