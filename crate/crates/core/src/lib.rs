// Copyright 2026 the Spiralwind Authors
// SPDX-License-Identifier: Apache-2.0

//! Metric geometry of planar spirals accumulating at the origin.
//!
//! The crate is `no_std` (it needs `alloc`) and is organized bottom-up:
//!
//! - [`profiles`]: decay profiles `φ`, spiral points `φ(t)e^{it}`, sampling and arc length.
//! - [`radii`]: winding radii `r_n = φ(2π(n−1))`, decay classification, exceptional
//!   index sets and extraction of a regular (ratio → 1) subsequence.
//! - [`directions`]: finite-resolution asymptotic direction sets, cones, SSP defects.
//! - [`maps`]: planar bi-Lipschitz maps, the shear spiral map, distortion estimates,
//!   rescaled families and their grid limits, and the partition length functional.
//! - [`certificate`]: per-winding lower bounds on the bi-Lipschitz constant of any
//!   map that straightens the spiral onto a segment.
//!
//! File formats and the command line live in the `spiralwind` companion crate.

#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Unit tests link std, whose inherent float methods shadow the libm-backed ones.
#![cfg_attr(test, allow(unused_imports, dead_code))]

extern crate alloc;

mod error;
mod geom;
mod math;

pub mod certificate;
pub mod directions;
pub mod maps;
pub mod profiles;
pub mod quadrature;
pub mod radii;

pub use crate::error::{Error, Result};
pub use crate::geom::Point;

/// `2π`.
pub const TAU: f64 = core::f64::consts::TAU;
