//! Symmetric random walks on the Eisenstein lattice `Z[ζ]`: exact
//! arithmetic, the region atlas around `P = {0, 1, 1+ζ}`, local time by
//! sector exits, discrete Itô/Tanaka decompositions, martingale
//! representation, and exhaustive and Monte Carlo verification.

pub mod calculus;
pub mod distance;
pub mod eisenstein;
pub mod error;
pub mod exact;
pub mod harness;
pub mod martrep;
pub mod regions;
pub mod report;
pub mod stats;
pub mod walk;

pub use eisenstein::{Eisenstein, Step};
pub use error::{Error, Result};
pub use exact::{Surd, Triadic};
pub use report::{VerificationReport, Violation};
