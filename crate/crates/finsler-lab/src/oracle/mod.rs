//! Independent reference computations the jet pipeline is checked against.
//!
//! Nothing in this module touches jet arithmetic: derivatives come from
//! central finite differences with one Richardson extrapolation, geometry
//! from closed forms, integrals from classical quadrature rules.

pub mod classical;
pub mod divergence;
pub mod fd;
pub mod quadrature;
pub mod randers;
pub mod sphere_geo;
