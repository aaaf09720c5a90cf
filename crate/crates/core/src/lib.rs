//! Shoot-target evaluation for 2D soccer simulation.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! - [`kinematics`]: ball motion under per-cycle velocity decay and path discretization.
//! - [`interception`]: opponent reach times and interception margins along a ball path.
//! - [`evaluation`]: the goal-mouth target grid and the two shoot-selection rules.
//! - [`features`]: raw and pattern (rigid-motion invariant) encodings for the surrogate.
//! - [`surrogate`]: a one-hidden-layer MLP that regresses single-opponent margins,
//!   plus the poscount correction.
//! - [`datagen`]: counter-based scenario sampling and oracle labeling.
//!
//! Everything is deterministic: floating point math goes through `libm` and all
//! randomness is derived from explicit seeds.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod datagen;
mod error;
pub mod evaluation;
pub mod features;
pub mod interception;
pub mod kinematics;
pub mod surrogate;
mod vec2;

pub use error::{Error, Result};
pub use vec2::Vec2;

/// Cap used for "no opponent can ever intercept" and, negated, for unreachable targets.
///
/// Keeps margins finite and totally ordered.
pub const MARGIN_CAP: f64 = 1000.0;
