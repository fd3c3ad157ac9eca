//! Verification toolkit for Seidel energies of graphs.

pub mod analytic;
pub mod graphs;
pub mod search;
pub mod seidel;
pub mod spectral;
pub mod verify;
