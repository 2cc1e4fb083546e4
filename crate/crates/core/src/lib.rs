//! Structure and colouring of (claw, 4K1, bridge, C4-twin)-free graphs.
//!
//! The crate recognises class members, decomposes a member around an
//! induced C5, C6 or C7, checks the structural properties that such a
//! decomposition must satisfy, and turns it into a clique-width expression
//! of bounded width. Members without such a hole are perfect; the
//! [`colour`] module covers both branches with an exact solver.
//!
//! Everything here is `no_std` with `alloc`. File formats, JSON and the
//! command line live in the companion `clawfree-cli` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(any(test, feature = "std"))]
extern crate std;

pub mod bits;
pub mod colour;
pub mod cwd;
pub mod decomp;
pub mod gen;
pub mod graph;
pub mod pattern;
pub mod synth;

pub use graph::{Graph, GraphError, VertexSet};
