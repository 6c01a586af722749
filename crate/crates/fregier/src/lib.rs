//! Chord envelopes of an ellipse at a fixed inscribed angle.
//!
//! Fix a point `M` on an ellipse and slide a chord `NL` so that `∠NML = θ`
//! stays constant. The chords envelope a smaller conic `E′`; at `θ = π/2`
//! it collapses to the classical Frégier point. This crate computes that
//! envelope two independent ways — numerically, by fitting the dual conic
//! to sampled chords, and in closed form, through the trilinear coordinates
//! of a distinguished billiard triangle — and cross-checks the two against
//! each other.
//!
//! The same machinery drives Poncelet-style experiments: closed billiard
//! polygons in an ellipse with a confocal-style caustic, the invariant sums
//! `Σcos²θᵢ`, `Σπrᵢ²`, `Σdᵢ²` over the polygon family, and a scan of the
//! invariance conjecture for periods beyond three.
//!
//! Start with [`envelope::fit_envelope`] and [`frame::BilliardFrame`], or
//! run the `examples/` — each one exercises a single capability end to end.
//! The `fregier` binary wraps the batch drivers in [`experiments`].

pub mod conic;
pub mod envelope;
pub mod error;
pub mod experiments;
pub mod frame;
pub mod poncelet;
pub mod svg;

pub use error::{Error, Result};
