//! Discretized and analytic model spaces.

pub mod at2c;
pub mod closure;
pub mod dirac;
pub mod grid;
pub mod sasaki;
