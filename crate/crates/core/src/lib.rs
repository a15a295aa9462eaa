//! Annular Khovanov homology, the annular Kauffman skein bracket, and the
//! annular link-splitting spectral sequence, computed exactly.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, caching and
//! the command-line front end live in the `akh` crate.

#![no_std]

extern crate alloc;

pub mod bracket;
pub mod complex;
pub mod constructions;
pub mod cube;
pub mod diagram;
pub mod homology;
pub mod field;
pub mod sparse;
pub mod spectral;
pub mod tangle;

pub use diagram::{AnnularDiagram, Crossing, DiagramError, DiagramInput, EdgeId, FreeCircle};
pub use field::{Field, FieldKind, Gf2, Rational};
pub use sparse::SparseMatrix;
