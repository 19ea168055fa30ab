//! Partition-based column subset selection.
//!
//! Columns of a data matrix are grouped with one of four Lloyd-style
//! subspace clustering schemes (CVOD, VQPCA and their adaptive variants),
//! DEIM is run on every group with QR deflation against the columns already
//! chosen, and the combined selection feeds a CUR factorization together
//! with its a-posteriori error bounds.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! the experiment harness live in the `voronoi-cur` companion crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod cssp;
pub mod data;
mod error;
pub mod linalg;
mod matrix;
pub mod partition;

pub use error::{Error, Result};
pub use matrix::DenseMatrix;
