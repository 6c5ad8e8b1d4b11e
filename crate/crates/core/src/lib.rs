//! Locally repairable array codes in the cover metric.

pub mod block_codes;
pub mod counting;
pub mod cover_lrc;
pub mod cover_metric;
pub mod error;
pub mod gf;
pub mod linalg;
mod poly;
pub mod simulate;
pub mod verify;

pub use error::{Error, Result};
pub use gf::{Elem, Field, FieldElement};
