//! Physically based renderer and measurement toolkit for glass orbs.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod color;
pub mod experiment;
pub mod geom;
pub mod optics;
pub mod render;
pub mod scene;
