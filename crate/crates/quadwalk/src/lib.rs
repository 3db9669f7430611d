//! Exact classification of weighted quadrant walks with interacting
//! boundaries on the five genus-zero step sets.
//!
//! The pipeline runs from [`model`] (weights, kernel, γ-functions) through
//! [`curve`] (points of the kernel curve and the group action), [`sigmadist`]
//! (σ-distances between critical points) to [`classifier`], which turns the
//! matrix evidence into a verdict. [`enumerator`] is an independent walk
//! counter used to check every closed form.

pub mod classifier;
pub mod cli;
pub mod curve;
pub mod enumerator;
pub mod exactalg;
pub mod model;
pub mod par;
pub mod sigmadist;
