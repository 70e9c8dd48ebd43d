//! Tiling witnesses: a torus or box plus the placements covering it.

use serde::{Deserialize, Serialize};

use crate::cover::{verify_cover, Placement};
use crate::error::{Error, Result};
use crate::lattice::{Region, VoxelSet};
use crate::wang::WangTileSet;

/// The Wang set a witness was built from, so that its tiles can be rebuilt.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilesetSource {
    /// 3 for the polycube set, 4 for the polyhypercube set.
    pub dim: usize,
    /// The Wang tiles the reduction was applied to.
    pub wang: WangTileSet,
}

/// A region with an exact cover by translated tiles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingWitness {
    /// The covered region.
    pub region: Region,
    /// Tile index and offset of every copy.
    pub placements: Vec<Placement>,
    /// Where the tiles come from, when they are a reduction output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tileset: Option<TilesetSource>,
}

impl TilingWitness {
    /// Parses the JSON form and checks its shape.
    pub fn from_json(text: &str) -> Result<TilingWitness> {
        let w: TilingWitness = serde_json::from_str(text)?;
        Region::new(w.region.kind, &w.region.extents)?;
        let dim = w.region.dim();
        if let Some(i) = w.placements.iter().position(|p| p.offset.len() != dim) {
            return Err(Error::Witness(format!(
                "placement {i} has {} coordinates in a {dim} dimensional region",
                w.placements[i].offset.len()
            )));
        }
        Ok(w)
    }

    /// Compact JSON form.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("witness serializes")
    }
}

/// Checks that the placements cover every region cell exactly once,
/// reporting the first doubly covered or uncovered cell otherwise.
pub fn verify_witness(region: &Region, tiles: &[VoxelSet], placements: &[Placement]) -> Result<()> {
    verify_cover(region, tiles, placements)
}
