//! Untangling of two almost-disjoint curve systems on a sphere with holes.
//!
//! The library models curve arrangements as dart-based combinatorial maps,
//! rebuilds the second system by a constructive simultaneous-embedding
//! pipeline, and certifies the redrawing with exact rational geometry.

pub mod arrangement;
pub mod bounds;
pub mod geom;
pub mod map;
pub mod plane;
pub mod simembed;
pub mod sketch;
pub mod splice;
pub mod triangulate;
