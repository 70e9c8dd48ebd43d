//! On-disk tile sets: one voxel file per tile plus `manifest.json` holding
//! digests, the source Wang set and block layouts for level-2 diagrams.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::lattice::VoxelSet;
use crate::reduction3d::{build_tileset_3d, encoder_layout, linker_layout, selector_layout, Layout};
use crate::reduction4d::{build_tileset_4d, encoder_layout_4d, linker_layout_4d, selector_layout_4d};
use crate::wang::WangTileSet;
use crate::witness::TilesetSource;

/// Name of the manifest file inside a tile-set directory.
pub const MANIFEST_FILE: &str = "manifest.json";

/// One tile of a tile-set directory.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileEntry {
    /// Role of the tile, such as `encoder` or `filler_plus`.
    pub name: String,
    /// Voxel file relative to the directory.
    pub file: String,
    /// Number of cells.
    pub cells: usize,
    /// SHA-256 of the voxel file.
    pub sha256: String,
    /// Minimal corner of the tile in its construction frame.
    pub anchor: Vec<i32>,
    /// Block layout, present for tiles assembled from functional cubes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layout: Option<Layout>,
}

/// Contents of `manifest.json`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileSetManifest {
    /// Lattice dimension of the tiles.
    pub dim: usize,
    /// SHA-256 of the compact JSON form of `wang`.
    pub wang_sha256: String,
    /// The Wang set the tiles simulate.
    pub wang: WangTileSet,
    /// Tiles in index order.
    pub tiles: Vec<TileEntry>,
}

/// A built tile with its metadata.
#[derive(Clone, Debug)]
pub struct NamedTile {
    /// Role of the tile.
    pub name: &'static str,
    /// Canonical cells.
    pub cells: VoxelSet,
    /// Minimal corner in the construction frame.
    pub anchor: Vec<i32>,
    /// Block layout when there is one.
    pub layout: Option<Layout>,
}

/// Hex SHA-256 digest.
pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Digest identifying a Wang set.
pub fn wang_hash(set: &WangTileSet) -> String {
    sha256_hex(serde_json::to_string(set).expect("Wang sets serialize").as_bytes())
}

/// Runs the reduction in dimension 3 or 4.
pub fn build_tiles(dim: usize, set: &WangTileSet) -> Result<Vec<NamedTile>> {
    match dim {
        3 => {
            let ts = build_tileset_3d(set)?;
            let layouts = [
                Some(encoder_layout(set)?),
                Some(selector_layout(set)?),
                Some(linker_layout()),
                None,
                None,
            ];
            let names = ["encoder", "selector", "linker", "filler", "filler_plus"];
            Ok(named(&names, ts.tiles, &ts.anchors, layouts.into(), 3))
        }
        4 => {
            let ts = build_tileset_4d(set)?;
            let layouts = [
                Some(encoder_layout_4d(set)?),
                Some(selector_layout_4d(set)?),
                Some(linker_layout_4d()),
                None,
            ];
            let names = ["encoder", "selector", "linker", "filler"];
            Ok(named(&names, ts.tiles, &ts.anchors, layouts.into(), 4))
        }
        d => Err(Error::UnsupportedDimension(d)),
    }
}

fn named(
    names: &[&'static str],
    tiles: Vec<VoxelSet>,
    anchors: &[crate::lattice::Cell],
    layouts: Vec<Option<Layout>>,
    dim: usize,
) -> Vec<NamedTile> {
    names
        .iter()
        .zip(tiles)
        .zip(anchors)
        .zip(layouts)
        .map(|(((&name, cells), anchor), layout)| NamedTile {
            name,
            cells,
            anchor: anchor[..dim].to_vec(),
            layout,
        })
        .collect()
}

/// Tiles of a witness built by one of the reductions.
pub fn tiles_for_source(source: &TilesetSource) -> Result<Vec<VoxelSet>> {
    Ok(build_tiles(source.dim, &source.wang)?
        .into_iter()
        .map(|t| t.cells)
        .collect())
}

/// Writes the reduction output into `dir` and returns the manifest.
pub fn write_tileset(dir: &Path, dim: usize, set: &WangTileSet) -> Result<TileSetManifest> {
    std::fs::create_dir_all(dir)?;
    let mut entries = Vec::new();
    for tile in build_tiles(dim, set)? {
        let text = tile.cells.to_text();
        let file = format!("{}.vox", tile.name);
        std::fs::write(dir.join(&file), &text)?;
        entries.push(TileEntry {
            name: tile.name.to_string(),
            file,
            cells: tile.cells.len(),
            sha256: sha256_hex(text.as_bytes()),
            anchor: tile.anchor,
            layout: tile.layout,
        });
    }
    let manifest = TileSetManifest {
        dim,
        wang_sha256: wang_hash(set),
        wang: set.clone(),
        tiles: entries,
    };
    let json = serde_json::to_string_pretty(&manifest)? + "\n";
    std::fs::write(dir.join(MANIFEST_FILE), json)?;
    Ok(manifest)
}

/// Reads a tile-set directory written by [`write_tileset`], checking every
/// digest and cell count.
pub fn load_tileset(dir: &Path) -> Result<(TileSetManifest, Vec<VoxelSet>)> {
    let manifest: TileSetManifest = serde_json::from_str(&std::fs::read_to_string(dir.join(MANIFEST_FILE))?)?;
    if wang_hash(&manifest.wang) != manifest.wang_sha256 {
        return Err(Error::Atlas("Wang set digest does not match".into()));
    }
    let mut tiles = Vec::with_capacity(manifest.tiles.len());
    for entry in &manifest.tiles {
        let text = std::fs::read_to_string(dir.join(&entry.file))?;
        if sha256_hex(text.as_bytes()) != entry.sha256 {
            return Err(Error::Atlas(format!("digest of {} does not match", entry.file)));
        }
        let cells = VoxelSet::parse_text(&text)?;
        if cells.len() != entry.cells || cells.dim() != manifest.dim {
            return Err(Error::Atlas(format!("{} does not match its manifest entry", entry.file)));
        }
        tiles.push(cells);
    }
    Ok((manifest, tiles))
}

/// Reads tiles from a directory: through its manifest when there is one,
/// otherwise every `.vox` file in name order.
pub fn load_tile_dir(dir: &Path) -> Result<Vec<VoxelSet>> {
    if dir.join(MANIFEST_FILE).exists() {
        return Ok(load_tileset(dir)?.1);
    }
    let mut files: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "vox"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::Instance(format!("no tiles in {}", dir.display())));
    }
    files
        .iter()
        .map(|p| VoxelSet::parse_text(&std::fs::read_to_string(p)?))
        .collect()
}
