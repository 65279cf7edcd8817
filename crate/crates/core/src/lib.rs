//! Particle paths beneath linear shallow-water waves over a current with
//! constant vorticity: closed forms, elliptic-integral periods, an analytic
//! shape classifier and an independent ODE oracle.
//!
//! Everything numerical is generic over [`scalar::Real`] (`f32`/`f64`); the
//! aliases below fix `f64`.

// `!(a > b)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classifier;
pub mod cli;
pub mod elliptic;
pub mod error;
pub mod io;
pub mod irrotational;
pub mod model;
pub mod oracle;
pub mod quadrature;
pub mod scalar;
pub mod selftest;
pub mod trace;
pub mod vorticity;

pub use error::{Error, Result};
pub use model::{Branch, ClassFlags, ClassKind, TrajectoryClass};

pub type FlowConfig = model::FlowConfig<f64>;
pub type ParticleState = model::ParticleState<f64>;
pub type Sample = model::Sample<f64>;
pub type Trajectory = model::Trajectory<f64>;
pub type FirstIntegral = vorticity::FirstIntegral<f64>;
pub type EllipticReduction = elliptic::EllipticReduction<f64>;
