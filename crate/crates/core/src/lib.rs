//! Polycube and polyhypercube tile sets that simulate Wang tiles.
//!
//! Given a set of Wang tiles, the crate builds five polycubes in three
//! dimensions (or four polyhypercubes in four) whose translates tile space
//! exactly when the Wang tiles tile the plane. Around that construction it
//! provides lattice geometry, a digitized block atlas, an exact cover
//! solver, witness assembly and verification, and layer diagram rendering.

pub mod blocks3d;
pub mod blocks4d;
pub mod cover;
pub mod error;
pub mod lattice;
pub mod manifest;
pub mod reduction3d;
pub mod reduction4d;
pub mod render;
pub mod wang;
pub mod witness;

pub use error::{Error, Result};
pub use lattice::{Cell, Region, RegionKind, VoxelSet};
pub use wang::{WangTile, WangTileSet, WangTiling};
