//! Numerical workbench for Baker domains of transcendental entire functions.
//!
//! The library evaluates two families of piecewise quasiregular maps built by
//! gluing an exponential-type map `h` to a damped perturbation `k` across a
//! strip, certifies the gluing is quasiregular (Wirtinger derivative bounds on
//! sample grids), iterates orbits with escape detection, classifies invariant
//! Baker domains through the König ratio `|w_{n+1} - w_n| / dist(w_n, dU)`,
//! computes exact hyperbolic distances in model domains together with
//! certified two-sided bounds in general domains, evaluates the
//! Hersch-Pfluger distortion function and its hyperbolic-metric majorant
//! `M_K`, searches for non-univalence witnesses, and renders escape-time
//! rasters of the resulting dynamics.

pub mod config;
pub mod distortion;
pub mod dynamics;
pub mod hypmetric;
pub mod maps;
pub mod params;
pub mod qrcheck;
pub mod render;
pub mod report;
pub mod univalence;

pub use maps::{EvalResult, Overflow, RegionTag};
pub use params::{ConstructionParams, Family};
