// SPDX-License-Identifier: Apache-2.0

//! Generalized Choi maps on 3×3 matrices: classification of their Choi
//! matrices, closed-form semigroup evolution with PPT transition times, and
//! PPT states built from collectively transpose-equivalent tuples.

pub mod choi;
#[cfg(feature = "cli")]
pub mod cli;
pub mod error;
pub mod foliated;
pub mod format;
pub mod matrix;
pub mod semigroup;
pub mod sweep;
pub mod uet;

pub use error::{Error, Result};
