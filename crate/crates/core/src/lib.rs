//! Sobolev gradient flow of the area-normalised Dirichlet energy for closed
//! planar curves, represented by truncated Fourier series.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > y)` also rejects NaN

pub mod analysis;
pub mod curve;
pub mod equilibria;
pub mod error;
pub mod flow;
pub mod gradients;
pub mod greens;
pub mod io;
pub mod seeds;

pub use curve::{Curve, Diagnostics, Point, SampledCurve};
pub use error::{Error, Result};
