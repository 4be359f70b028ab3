//! Digital homotopy theory on the integer lattice.
//!
//! A digital image is a finite subset of ℤⁿ where two points are adjacent
//! when their coordinates differ by at most one. On top of that this crate
//! provides continuity checks, k-fold subdivision, mapping spaces and
//! homotopy decision by search, explicit cofibration retractions and the
//! lifts they produce, winding numbers for the four-point Diamond, and
//! bounded computation of digital Lusternik–Schnirelmann category.
//!
//! ```
//! use digitop::{circle, homotopy};
//!
//! let d = circle::diamond();
//! let verdict = homotopy::is_contractible(&d, None).unwrap();
//! assert!(verdict.is_no());
//! ```

pub mod circle;
pub mod cofib;
pub mod error;
pub mod fixtures;
pub mod funcspace;
pub mod homotopy;
pub mod lattice;
pub mod lscat;
pub mod maps;
mod search;
pub mod subdivision;
pub mod suite;
pub mod verdict;

pub use error::{Error, Result};
pub use lattice::{adjacent, interval, product, DigitalImage, Point};
pub use maps::{compose, constant_map, diagonal, find_isomorphism, product_map, DigitalMap};
pub use subdivision::{subdivide, Subdivision};
pub use verdict::{Bounds, Outcome, Refutation, Verdict};
