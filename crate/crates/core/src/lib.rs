//! Core engine for horizon-aware demand forecast model selection.
//!
//! The crate is organised around a per-series evaluation flow:
//!
//! 1. [`series`] — demand series, train/test/future partitioning, and the
//!    frequency/variability descriptors that classify demand structure.
//! 2. [`metrics`] — test-set accuracy and bias metrics plus the volumetric
//!    GRA measure used for ex-post selector comparison.
//! 3. [`mdfh`] — regime-conditioned power-law projection of error metrics
//!    from the test horizon to future decision horizons.
//! 4. [`forecasters`] — a small set of baseline candidate models.
//! 5. [`selectors`] — the three competing selection mechanisms (RMSSE_h,
//!    AHSIV, ERA) and the Pareto machinery behind AHSIV.
//! 6. [`pipeline`] — orchestration across series and corpus-level
//!    aggregation, plus synthetic corpus generation in [`synth`].
//! 7. [`stats`] — Kruskal–Wallis and Dunn/Bonferroni comparison of selector
//!    GRA distributions.
//!
//! Everything here is pure computation over in-memory slices; IO, CSV
//! formats and the CLI live in the companion `demandsel` crate. The crate is
//! `no_std` (with `alloc`) so the numeric core can be embedded anywhere.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(any(test, feature = "std"))]
extern crate std;

pub mod error;
pub mod forecasters;
pub mod math;
pub mod mdfh;
pub mod metrics;
pub mod pipeline;
pub mod selectors;
pub mod series;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
