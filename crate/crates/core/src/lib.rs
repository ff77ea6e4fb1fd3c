//! Exact computations with transvection factorizations in `SL2(Z)`.

pub mod classify;
pub mod error;
pub mod json;
pub mod hurwitz;
pub mod intpoly;
pub mod invariants;
pub mod sl2z;

pub use error::{Error, Result};
pub use sl2z::{Mat2, MatOrder, PrimVec};
