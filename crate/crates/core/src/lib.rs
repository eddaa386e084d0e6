//! Finite combinatorial models of oriented, simply connected, possibly
//! non-Hausdorff 1-manifolds, and the order-theoretic machinery they carry.
//!
//! A [`model::LeafSpace`] is a tree-like incidence structure of vertices,
//! oriented edges, and signed junctions with ordered member lists. Junctions
//! stand for the non-Hausdorff branching loci: their members are pairwise
//! non-separated points sharing a past (negative junction) or a future
//! (positive junction). Free edge extremities stand for ends.
//!
//! On top of the model:
//!
//! * [`paths`] computes the unique broken path between two points or ends,
//!   decomposed into monotone segments and signed cusps;
//! * [`endorder`] counts cusps to produce the integer `n(x1, x2)` and the
//!   induced linear order on positive ends, with the triangle decomposition
//!   of end triples;
//! * [`morphisms`] checks admissibility and equivariance of structure maps
//!   and enumerates automorphisms by brute force;
//! * [`grouporder`] builds left-invariant group orders from order-preserving
//!   actions and extends them along group extensions;
//! * [`corpus`] provides named example models, a seeded generator, the text
//!   serialization, and a DOT export.
//!
//! The crate is `no_std` (with `alloc`); all queries are exact (positions on
//! edges are rationals) and all sealed values are immutable.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod corpus;
pub mod endorder;
pub mod grouporder;
pub mod model;
pub mod morphisms;
pub mod paths;

pub use model::{
    Attachment, Branching, Edge, EndName, EndRef, Extremity, Junction, LeafSpace, PointRef,
    Position, QueryError, RawLeafSpace, Sign, ValidationReport, VertexId,
};
pub use paths::{broken_path, broken_path_ends, BrokenPath, Cusp, Orientation, Segment};
