//! Numerical laboratory for pseudo-Finsler geometry and nonlinear
//! metric-affine field equations.
//!
//! The crate evaluates anisotropic tensor fields on the slit tangent bundle
//! through truncated Taylor (jet) arithmetic with separate base/vertical
//! budgets, builds the canonical objects of a pseudo-Finsler metric
//! (fundamental tensor, spray, nonlinear connection, Cartan / Landsberg
//! tensors, curvature), assembles and decomposes solution-form connections
//! `N = N^L + dZ + A (x) C`, and checks the coupled affine/metric residuals
//! against independent oracles (finite differences, closed forms,
//! quadrature).

pub mod campaign;
pub mod catalog;
pub mod config;
pub mod connection;
pub mod domain;
pub mod error;
pub mod expr;
pub mod geodesic;
pub mod jet;
pub mod metric;
pub mod num;
pub mod palatini;
pub mod report;
pub mod sampling;
pub mod oracle;
pub mod tensor;
pub mod tol;

pub use error::{Error, Result};
