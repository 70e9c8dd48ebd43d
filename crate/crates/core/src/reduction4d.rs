//! The four polyhypercubes simulating a Wang tile set, lifted from the
//! three dimensional construction, and the matching torus tilings.
//!
//! Every block cell of the three dimensional layouts becomes an 8-frame
//! functional hypercube. Dents and bumps move into the time axis: a labelled
//! cell holds a half block attached either to frames 0 to 3 (former) or to
//! frames 4 to 7 (latter) of its slice. Colors are written by the phase of
//! the `c` blocks, the linker carries two `C` blocks in the latter half, and
//! the filler is a lone `C`.

use crate::blocks4d::{block_origin, host_block_4d, plain_cell, Attachment, Block4, Phase, SLICE};
use crate::blocks3d::SCALE;
use crate::cover::{solve_region, Placement, SolveConfig, SolveStatus};
use crate::error::{Error, Result};
use crate::lattice::{add, Cell, Region, VoxelSet};
use crate::reduction3d::{Layout, LayoutCell, SelectorLattice};
use crate::wang::{encode_color, verify_tiling, WangTileSet, WangTiling};
use crate::witness::{verify_witness, TilesetSource, TilingWitness};

/// Index of the encoder in the tile list.
pub const ENCODER: usize = 0;
/// Index of the selector in the tile list.
pub const SELECTOR: usize = 1;
/// Index of the linker in the tile list.
pub const LINKER: usize = 2;
/// Index of the filler in the tile list.
pub const FILLER: usize = 3;

/// What occupies a block cell of a slice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Part {
    /// A full functional hypercube.
    Plain,
    /// A half block in one half of the slice.
    Half(Block4, Phase),
    /// A full hypercube interlocking with the neighbouring slices.
    Slice(Block4),
}

impl Part {
    fn label(self) -> String {
        match self {
            Part::Plain => String::new(),
            Part::Half(b, Phase::Former) => format!("{}_*", b.name()),
            Part::Half(b, Phase::Latter) => format!("{}^*", b.name()),
            Part::Slice(b) => b.name().to_string(),
        }
    }

    fn voxels(self, cell: [i32; 3]) -> VoxelSet {
        match self {
            Part::Plain => plain_cell(cell),
            Part::Half(block, phase) => Attachment { block, cell, phase }.voxels(),
            Part::Slice(block) => Attachment {
                block,
                cell,
                phase: Phase::Former,
            }
            .voxels(),
        }
    }
}

fn assemble(parts: Vec<([i32; 3], Part)>) -> Result<(VoxelSet, Layout)> {
    let mut set = VoxelSet::empty(4)?;
    let mut hi = [0; 3];
    for &(c, part) in &parts {
        set = set.disjoint_union(&part.voxels(c))?;
        for a in 0..3 {
            hi[a] = hi[a].max(c[a] + 1);
        }
    }
    let mut cells: Vec<LayoutCell> = parts
        .into_iter()
        .map(|(cell, part)| LayoutCell {
            cell,
            label: part.label(),
        })
        .collect();
    cells.sort_by_key(|c| (c.cell[2], c.cell[1], c.cell[0]));
    Ok((set, Layout { extents: hi, cells }))
}

fn color_phase(bit: u8) -> Part {
    Part::Half(
        Block4::C,
        if bit == 0 { Phase::Latter } else { Phase::Former },
    )
}

fn encoder_parts(set: &WangTileSet) -> Result<Vec<([i32; 3], Part)>> {
    set.validate()?;
    let t = set.t() as i32;
    let side = 2 * t + 2;
    let top = set.p() as i32 - 1;
    let mut parts = Vec::new();
    for (z, tile) in set.tiles.iter().enumerate() {
        let z = z as i32;
        let code = |c: u32| encode_color(c, t as usize);
        let (n, e, s, w) = (code(tile.n)?, code(tile.e)?, code(tile.s)?, code(tile.w)?);
        for y in 0..side {
            for x in 0..side {
                let west_half = x < t;
                let east_half = x >= t + 2;
                let part = if y == side - 1 && west_half {
                    color_phase(n[x as usize])
                } else if y == side - 1 && east_half {
                    color_phase(e[(x - t - 2) as usize])
                } else if y == 0 && west_half {
                    color_phase(w[x as usize])
                } else if y == 0 && east_half {
                    color_phase(s[(x - t - 2) as usize])
                } else if (x, y) == (0, 2 * t) {
                    Part::Half(Block4::ABump, Phase::Latter)
                } else if (x, y) == (2 * t + 1, 2 * t) {
                    Part::Half(Block4::BBump, Phase::Latter)
                } else if (x, y, z) == (t, 2 * t - 1, top) {
                    Part::Slice(Block4::E)
                } else {
                    Part::Plain
                };
                parts.push(([x, y, z], part));
            }
        }
    }
    Ok(parts)
}

fn selector_parts(set: &WangTileSet) -> Result<Vec<([i32; 3], Part)>> {
    set.validate()?;
    let t = set.t() as i32;
    let w = 2 * t + 4;
    let p = set.p() as i32;
    let mut parts = Vec::new();
    for z in 0..p {
        let bottom = z == 0;
        let top = z == p - 1;
        for y in 0..w {
            for x in 0..w {
                let ring = x == 0 || y == 0 || x == w - 1 || y == w - 1;
                if !ring {
                    continue;
                }
                let color_column = (1..=t).contains(&x) || (t + 3..=2 * t + 2).contains(&x);
                if top && color_column && (y == 0 || y == w - 1) {
                    continue;
                }
                let part = match (x, y) {
                    (0, 0) if bottom => Part::Half(Block4::X, Phase::Former),
                    (x, 0) if bottom && x == t + 2 => Part::Half(Block4::Y, Phase::Former),
                    (x, y) if bottom && x == w - 1 && y == w - 1 => Part::Half(Block4::Z, Phase::Former),
                    (0, y) if top && y == w - 1 => Part::Slice(Block4::S),
                    _ => Part::Plain,
                };
                parts.push(([x, y, z], part));
            }
        }
        parts.push(([1, w - 3, z], Part::Half(Block4::A, Phase::Former)));
        parts.push(([w - 2, w - 3, z], Part::Half(Block4::B, Phase::Former)));
    }
    parts.push(([w, 0, 0], Part::Half(Block4::XBump, Phase::Latter)));
    parts.push(([0, w, 0], Part::Half(Block4::YBump, Phase::Latter)));
    parts.push(([w - 1, w - 1, p], Part::Half(Block4::ZBump, Phase::Latter)));
    Ok(parts)
}

fn linker_parts() -> Vec<([i32; 3], Part)> {
    vec![
        ([0, 0, 0], Part::Half(Block4::CBump, Phase::Latter)),
        ([0, 1, 0], Part::Plain),
        ([0, 2, 0], Part::Plain),
        ([0, 3, 0], Part::Half(Block4::CBump, Phase::Latter)),
    ]
}

fn canonical(set: &VoxelSet) -> VoxelSet {
    set.canonicalize().expect("tiles are non-empty").0
}

/// The encoder as a canonical polyhypercube.
pub fn build_encoder_4d(set: &WangTileSet) -> Result<VoxelSet> {
    Ok(canonical(&assemble(encoder_parts(set)?)?.0))
}

/// The selector as a canonical polyhypercube.
pub fn build_selector_4d(set: &WangTileSet) -> Result<VoxelSet> {
    Ok(canonical(&assemble(selector_parts(set)?)?.0))
}

/// The linker as a canonical polyhypercube.
pub fn build_linker_4d() -> VoxelSet {
    canonical(&assemble(linker_parts()).expect("fixed layout").0)
}

/// Spatial projection of the encoder with phase labels.
pub fn encoder_layout_4d(set: &WangTileSet) -> Result<Layout> {
    Ok(assemble(encoder_parts(set)?)?.1)
}

/// Spatial projection of the selector with phase labels.
pub fn selector_layout_4d(set: &WangTileSet) -> Result<Layout> {
    Ok(assemble(selector_parts(set)?)?.1)
}

/// Spatial projection of the linker.
pub fn linker_layout_4d() -> Layout {
    assemble(linker_parts()).expect("fixed layout").1
}

/// The four tiles with their construction frame anchors.
#[derive(Clone, Debug)]
pub struct TileSet4 {
    /// The simulated Wang tiles.
    pub wang: WangTileSet,
    /// Encoder, selector, linker and filler, canonicalized.
    pub tiles: Vec<VoxelSet>,
    /// Minimal corner of each tile in its construction frame.
    pub anchors: Vec<Cell>,
}

impl TileSet4 {
    /// Placement putting the construction frame origin of `tile` at `origin`.
    pub fn place(&self, tile: usize, origin: Cell, region: &Region) -> Placement {
        let off = add(origin, self.anchors[tile]);
        let off = region.normalize(off).unwrap_or(off);
        Placement::new(tile, &off)
    }
}

/// Builds encoder, selector, linker and filler.
pub fn build_tileset_4d(set: &WangTileSet) -> Result<TileSet4> {
    let frames = [
        assemble(encoder_parts(set)?)?.0,
        assemble(selector_parts(set)?)?.0,
        assemble(linker_parts())?.0,
        host_block_4d(Block4::CBump),
    ];
    let mut tiles = Vec::with_capacity(4);
    let mut anchors = Vec::with_capacity(4);
    for f in &frames {
        anchors.push(f.bounds()?.0);
        tiles.push(canonical(f));
    }
    Ok(TileSet4 {
        wang: set.clone(),
        tiles,
        anchors,
    })
}

/// Selectors and encoders of the torus tiling, repeated over `slices`
/// consecutive slices in time.
pub fn witness_skeleton_4d(
    ts: &TileSet4,
    tiling: &WangTiling,
    slices: i32,
) -> Result<(Region, Vec<Placement>)> {
    verify_tiling(&ts.wang, tiling)?;
    if slices < 1 {
        return Err(Error::Instance("at least one slice is needed".into()));
    }
    let lattice = SelectorLattice::for_set(&ts.wang);
    let b = lattice.torus_blocks(tiling.h, tiling.v);
    let region = Region::torus(&[b[0] * SCALE, b[1] * SCALE, b[2] * SCALE, slices * SLICE])?;
    let p = lattice.layers;
    let mut fixed = Vec::new();
    for slice in 0..slices {
        for (a, bb) in lattice.torus_sites(tiling.h, tiling.v) {
            let site = lattice.site(a, bb);
            let origin = add(block_origin(site), [0, 0, 0, slice * SLICE]);
            fixed.push(ts.place(SELECTOR, origin, &region));
            let shown = tiling.tile_at(a as i64, bb as i64) as i32;
            let phase = (p - 1 - shown).rem_euclid(p);
            let well = add(origin, [SCALE, SCALE, phase * SCALE, 0]);
            fixed.push(ts.place(ENCODER, well, &region));
        }
    }
    Ok((region, fixed))
}

/// Builds and verifies a torus tiling by the four polyhypercubes, one slice
/// thick in time, from a periodic Wang tiling.
pub fn assemble_witness_4d(
    set: &WangTileSet,
    tiling: &WangTiling,
    config: &SolveConfig,
) -> Result<(TileSet4, TilingWitness)> {
    assemble_witness_4d_slices(set, tiling, 1, config)
}

/// Same as [`assemble_witness_4d`] on a torus `slices` slices thick.
pub fn assemble_witness_4d_slices(
    set: &WangTileSet,
    tiling: &WangTiling,
    slices: i32,
    config: &SolveConfig,
) -> Result<(TileSet4, TilingWitness)> {
    let ts = build_tileset_4d(set)?;
    let (region, fixed) = witness_skeleton_4d(&ts, tiling, slices)?;
    let outcome = solve_region(&region, &ts.tiles, &fixed, Some(&[LINKER, FILLER]), config)?;
    if outcome.status != SolveStatus::Solved {
        return Err(Error::Witness(format!(
            "gaps between selectors and encoders could not be closed ({:?})",
            outcome.status
        )));
    }
    verify_witness(&region, &ts.tiles, &outcome.placements)?;
    let witness = TilingWitness {
        region,
        placements: outcome.placements,
        tileset: Some(TilesetSource {
            dim: 4,
            wang: set.clone(),
        }),
    };
    Ok((ts, witness))
}

/// A column of four block cells, one slice long, with a `c` block in the
/// given phase at each end and two empty cells between them.
///
/// Returns the region, the tiles `[south c, north c, linker, filler]` and
/// the fixed placements of the two `c` blocks.
pub fn time_tunnel_fixture(south: Phase, north: Phase) -> Result<(Region, Vec<VoxelSet>, Vec<Placement>)> {
    let region = Region::torus(&[SCALE, 4 * SCALE, SCALE, SLICE])?;
    let frames = [
        Attachment {
            block: Block4::C,
            cell: [0, 0, 0],
            phase: south,
        }
        .voxels(),
        Attachment {
            block: Block4::C,
            cell: [0, 3, 0],
            phase: north,
        }
        .voxels(),
        assemble(linker_parts())?.0,
        host_block_4d(Block4::CBump),
    ];
    let mut tiles = Vec::new();
    let mut fixed = Vec::new();
    for (k, f) in frames.iter().enumerate() {
        let (lo, _) = f.bounds()?;
        tiles.push(canonical(f));
        if k < 2 {
            let off = region.normalize(lo).expect("torus");
            fixed.push(Placement::new(k, &off));
        }
    }
    Ok((region, tiles, fixed))
}

/// Solver verdict on [`time_tunnel_fixture`] with linkers and fillers.
pub fn time_tunnel_status(south: Phase, north: Phase, config: &SolveConfig) -> Result<SolveStatus> {
    let (region, tiles, fixed) = time_tunnel_fixture(south, north)?;
    Ok(solve_region(&region, &tiles, &fixed, Some(&[2, 3]), config)?.status)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wang::WangTile;

    fn three_tiles() -> WangTileSet {
        WangTileSet::new(
            4,
            vec![
                WangTile::new(1, 0, 3, 0),
                WangTile::new(3, 2, 0, 2),
                WangTile::new(0, 3, 1, 3),
            ],
        )
        .unwrap()
    }

    #[test]
    fn encoder_projection_labels() {
        let layout = encoder_layout_4d(&three_tiles()).unwrap();
        let row = |y, z| -> Vec<String> {
            (0..6).map(|x| layout.label_at([x, y, z]).unwrap().to_string()).collect()
        };
        assert_eq!(row(5, 0), ["c^*", "c_*", "", "", "c^*", "c^*"]);
        assert_eq!(row(0, 0), ["c^*", "c^*", "", "", "c_*", "c_*"]);
        assert_eq!(row(5, 1), ["c_*", "c_*", "", "", "c_*", "c^*"]);
        assert_eq!(layout.label_at([2, 3, 2]), Some("E"));
        assert_eq!(layout.label_at([0, 4, 0]), Some("A^*"));
        let e_count = layout.cells.iter().filter(|c| c.label == "E").count();
        assert_eq!(e_count, 1);
    }

    #[test]
    fn selector_projection_labels() {
        let layout = selector_layout_4d(&three_tiles()).unwrap();
        assert_eq!(layout.label_at([8, 0, 0]), Some("X^*"));
        assert_eq!(layout.label_at([0, 8, 0]), Some("Y^*"));
        assert_eq!(layout.label_at([7, 7, 3]), Some("Z^*"));
        assert_eq!(layout.label_at([4, 0, 0]), Some("y_*"));
        assert_eq!(layout.label_at([1, 5, 2]), Some("a_*"));
        assert_eq!(layout.label_at([6, 5, 1]), Some("b_*"));
        assert_eq!(layout.label_at([0, 7, 2]), Some("S"));
        assert_eq!(layout.label_at([1, 0, 2]), None);
        assert_eq!(layout.label_at([1, 0, 1]), Some(""));
    }

    #[test]
    fn linker_volume() {
        let l = build_linker_4d();
        assert_eq!(l.len(), 2 * 2432 + 2 * 4096);
        assert!(l.is_connected());
    }
}
