//! The five polycubes simulating a Wang tile set, and periodic tilings
//! built from a periodic Wang tiling.
//!
//! Everything is laid out on a grid of 8×8×8 block cells. The encoder packs
//! one Wang tile per layer, with the tile's colors written in binary along
//! its north and south rows. The selector is a ring shaped well of the same
//! height whose corner blocks lock neighbouring selectors into a lattice.
//! Encoders stand in the wells, linkers bridge the windows of the top
//! selector layer, and the fillers close the cavities of the lower layers.

use serde::{Deserialize, Serialize};

use crate::blocks3d::{cube, host_block, Block3, SCALE};
use crate::cover::{solve_region, Placement, SolveConfig, SolveStatus};
use crate::error::{Error, Result};
use crate::lattice::{add, Cell, Region, VoxelSet};
use crate::wang::{encode_color, verify_tiling, WangTileSet, WangTiling};
use crate::witness::{verify_witness, TilesetSource, TilingWitness};

/// Index of the encoder in the tile list.
pub const ENCODER: usize = 0;
/// Index of the selector in the tile list.
pub const SELECTOR: usize = 1;
/// Index of the linker in the tile list.
pub const LINKER: usize = 2;
/// Index of the standard filler in the tile list.
pub const FILLER: usize = 3;
/// Index of the bigger filler in the tile list.
pub const FILLER_PLUS: usize = 4;

/// One labelled block cell of a layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutCell {
    /// Block coordinates.
    pub cell: [i32; 3],
    /// Block name, empty for a plain functional cube.
    pub label: String,
}

/// Block level description of a tile, used for level-2 diagrams.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    /// Size of the block grid.
    pub extents: [i32; 3],
    /// Occupied cells sorted by layer, then row, then column.
    pub cells: Vec<LayoutCell>,
}

impl Layout {
    /// Label of an occupied cell, `None` for a vacant one.
    pub fn label_at(&self, cell: [i32; 3]) -> Option<&str> {
        self.cells
            .iter()
            .find(|c| c.cell == cell)
            .map(|c| c.label.as_str())
    }

    /// Number of occupied cells in layer `z`.
    pub fn layer_count(&self, z: i32) -> usize {
        self.cells.iter().filter(|c| c.cell[2] == z).count()
    }
}

/// What occupies a block cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Part {
    Plain,
    Block(Block3),
    /// A `z` dent below and a `Z` bump above, used when the selector has a
    /// single layer.
    ZDentZBump,
}

impl Part {
    fn label(self) -> String {
        match self {
            Part::Plain => String::new(),
            Part::Block(b) => b.name().to_string(),
            Part::ZDentZBump => "zZ".to_string(),
        }
    }

    fn voxels(self) -> VoxelSet {
        match self {
            Part::Plain => cube(),
            Part::Block(b) => host_block(b),
            Part::ZDentZBump => {
                let bump = host_block(Block3::ZBump).difference(&cube()).expect("same dimension");
                host_block(Block3::Z).disjoint_union(&bump).expect("bump lies above the cube")
            }
        }
    }
}

fn assemble(parts: Vec<([i32; 3], Part)>) -> (VoxelSet, Layout) {
    let mut cells = Vec::new();
    let mut hi = [0; 3];
    for &(c, part) in &parts {
        let shift = [c[0] * SCALE, c[1] * SCALE, c[2] * SCALE, 0];
        cells.extend(part.voxels().translate(shift).cells().iter().copied());
        for a in 0..3 {
            hi[a] = hi[a].max(c[a] + 1);
        }
    }
    let set = VoxelSet::new(3, cells).expect("three dimensional cells");
    let mut layout_cells: Vec<LayoutCell> = parts
        .into_iter()
        .map(|(cell, part)| LayoutCell {
            cell,
            label: part.label(),
        })
        .collect();
    layout_cells.sort_by_key(|c| (c.cell[2], c.cell[1], c.cell[0]));
    (
        set,
        Layout {
            extents: hi,
            cells: layout_cells,
        },
    )
}

fn bits(color: u32, t: usize) -> Result<Vec<u8>> {
    encode_color(color, t)
}

/// Block parts of the encoder: one layer per Wang tile, bottom layer first.
fn encoder_parts(set: &WangTileSet) -> Result<Vec<([i32; 3], Part)>> {
    set.validate()?;
    let t = set.t() as i32;
    let side = 2 * t + 2;
    let mut parts = Vec::new();
    for (z, tile) in set.tiles.iter().enumerate() {
        let z = z as i32;
        let n = bits(tile.n, t as usize)?;
        let e = bits(tile.e, t as usize)?;
        let s = bits(tile.s, t as usize)?;
        let w = bits(tile.w, t as usize)?;
        let north = |b: u8| Part::Block(if b == 0 { Block3::C } else { Block3::CMinus });
        let south = |b: u8| Part::Block(if b == 0 { Block3::DMinus } else { Block3::D });
        for y in 0..side {
            for x in 0..side {
                let west_half = x < t;
                let east_half = x >= t + 2;
                let part = if y == side - 1 && west_half {
                    north(n[x as usize])
                } else if y == side - 1 && east_half {
                    north(e[(x - t - 2) as usize])
                } else if y == 0 && west_half {
                    south(w[x as usize])
                } else if y == 0 && east_half {
                    south(s[(x - t - 2) as usize])
                } else if (x, y) == (0, 2 * t) {
                    Part::Block(Block3::ABump)
                } else if (x, y) == (2 * t + 1, 2 * t) {
                    Part::Block(Block3::BBump)
                } else {
                    Part::Plain
                };
                parts.push(([x, y, z], part));
            }
        }
    }
    Ok(parts)
}

/// Block parts of the selector ring.
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
                let part = match (x, y) {
                    (0, 0) if bottom => Part::Block(Block3::X),
                    (x, 0) if bottom && x == w - 1 => Part::Block(Block3::XBump),
                    (x, 0) if bottom && x == t + 2 => Part::Block(Block3::Y),
                    (0, y) if bottom && y == w - 1 => Part::Block(Block3::YBump),
                    (x, y) if x == w - 1 && y == w - 1 => match (bottom, top) {
                        (true, true) => Part::ZDentZBump,
                        (true, false) => Part::Block(Block3::Z),
                        (false, true) => Part::Block(Block3::ZBump),
                        (false, false) => Part::Plain,
                    },
                    (0, y) if y == w - 3 => Part::Block(Block3::A),
                    (x, y) if x == w - 1 && y == w - 3 => Part::Block(Block3::B),
                    (_, 0) if color_column => {
                        if top {
                            continue;
                        }
                        Part::Block(Block3::C)
                    }
                    (_, y) if y == w - 1 && color_column => {
                        if top {
                            continue;
                        }
                        Part::Block(Block3::D)
                    }
                    _ => Part::Plain,
                };
                parts.push(([x, y, z], part));
            }
        }
    }
    Ok(parts)
}

fn linker_parts() -> Vec<([i32; 3], Part)> {
    vec![
        ([0, 0, 0], Part::Block(Block3::CBump)),
        ([0, 1, 0], Part::Block(Block3::DPlus)),
    ]
}

fn canonical(set: &VoxelSet) -> VoxelSet {
    set.canonicalize().expect("tiles are non-empty").0
}

/// The encoder as a canonical polycube.
pub fn build_encoder(set: &WangTileSet) -> Result<VoxelSet> {
    Ok(canonical(&assemble(encoder_parts(set)?).0))
}

/// The selector as a canonical polycube.
pub fn build_selector(set: &WangTileSet) -> Result<VoxelSet> {
    Ok(canonical(&assemble(selector_parts(set)?).0))
}

/// The linker as a canonical polycube.
pub fn build_linker() -> VoxelSet {
    canonical(&assemble(linker_parts()).0)
}

/// Block level layout of the encoder.
pub fn encoder_layout(set: &WangTileSet) -> Result<Layout> {
    Ok(assemble(encoder_parts(set)?).1)
}

/// Block level layout of the selector.
pub fn selector_layout(set: &WangTileSet) -> Result<Layout> {
    Ok(assemble(selector_parts(set)?).1)
}

/// Block level layout of the linker.
pub fn linker_layout() -> Layout {
    assemble(linker_parts()).1
}

/// The five tiles together with where each sits in its construction frame.
#[derive(Clone, Debug)]
pub struct TileSet3 {
    /// The simulated Wang tiles.
    pub wang: WangTileSet,
    /// Encoder, selector, linker, filler and bigger filler, canonicalized.
    pub tiles: Vec<VoxelSet>,
    /// Minimal corner of each tile in its construction frame, so a tile
    /// whose frame origin goes to `P` is placed at offset `P + anchor`.
    pub anchors: Vec<Cell>,
}

impl TileSet3 {
    /// Placement putting the construction frame origin of `tile` at `origin`,
    /// with the offset reduced into the region.
    pub fn place(&self, tile: usize, origin: Cell, region: &Region) -> Placement {
        let off = add(origin, self.anchors[tile]);
        let off = region.normalize(off).unwrap_or(off);
        Placement::new(tile, &off[..region.dim()])
    }
}

/// Builds encoder, selector, linker, `F` and `F+`.
pub fn build_tileset_3d(set: &WangTileSet) -> Result<TileSet3> {
    let frames = [
        assemble(encoder_parts(set)?).0,
        assemble(selector_parts(set)?).0,
        assemble(linker_parts()).0,
        host_block(Block3::F),
        host_block(Block3::FPlus),
    ];
    let mut tiles = Vec::with_capacity(5);
    let mut anchors = Vec::with_capacity(5);
    for f in &frames {
        let (lo, _) = f.bounds()?;
        anchors.push(lo);
        tiles.push(canonical(f));
    }
    Ok(TileSet3 {
        wang: set.clone(),
        tiles,
        anchors,
    })
}

/// The selector lattice in block units.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SelectorLattice {
    /// Selector width `2t + 4`.
    pub width: i32,
    /// Westward shift from one selector row to the next, `t + 2`.
    pub shift: i32,
    /// Number of layers.
    pub layers: i32,
}

impl SelectorLattice {
    /// Lattice of the selectors built for `set`.
    pub fn for_set(set: &WangTileSet) -> SelectorLattice {
        let t = set.t() as i32;
        SelectorLattice {
            width: 2 * t + 4,
            shift: t + 2,
            layers: set.p() as i32,
        }
    }

    /// Eastward lattice vector.
    pub fn u1(&self) -> [i32; 3] {
        [self.width, 0, 0]
    }

    /// Northward lattice vector.
    pub fn u2(&self) -> [i32; 3] {
        [-self.shift, self.width, 0]
    }

    /// Vertical lattice vector.
    pub fn u3(&self) -> [i32; 3] {
        [0, 0, self.layers]
    }

    /// Block position of the selector showing Wang position `(a, b)`. The
    /// east neighbour `(a + 1, b)` sits at `u1 + u2`, the north neighbour
    /// `(a, b + 1)` at `u2`.
    pub fn site(&self, a: i32, b: i32) -> [i32; 3] {
        let (u1, u2) = (self.u1(), self.u2());
        [
            a * (u1[0] + u2[0]) + b * u2[0],
            a * (u1[1] + u2[1]) + b * u2[1],
            0,
        ]
    }

    /// Torus size in blocks for a Wang tiling with periods `h` and `v`:
    /// `(wL, 2wL, p)` with `L = lcm(h, v)`.
    pub fn torus_blocks(&self, h: usize, v: usize) -> [i32; 3] {
        let l = lcm(h, v) as i32;
        [self.width * l, 2 * self.width * l, self.layers]
    }

    /// One Wang position per selector of the torus: `(a, b)` with
    /// `a + b = n` for `n < 2L` and `a < L`.
    pub fn torus_sites(&self, h: usize, v: usize) -> Vec<(i32, i32)> {
        let l = lcm(h, v) as i32;
        let mut out = Vec::new();
        for n in 0..2 * l {
            for m in 0..l {
                out.push((m, n - m));
            }
        }
        out
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Least common multiple of two positive integers.
pub fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Selectors and encoders of the torus tiling for `tiling`, before the
/// linkers and fillers are added.
pub fn witness_skeleton_3d(ts: &TileSet3, tiling: &WangTiling) -> Result<(Region, Vec<Placement>)> {
    verify_tiling(&ts.wang, tiling)?;
    let lattice = SelectorLattice::for_set(&ts.wang);
    let blocks = lattice.torus_blocks(tiling.h, tiling.v);
    let region = Region::torus(&[blocks[0] * SCALE, blocks[1] * SCALE, blocks[2] * SCALE])?;
    let p = lattice.layers;
    let mut fixed = Vec::new();
    for (a, b) in lattice.torus_sites(tiling.h, tiling.v) {
        let site = lattice.site(a, b);
        let origin = [site[0] * SCALE, site[1] * SCALE, 0, 0];
        fixed.push(ts.place(SELECTOR, origin, &region));
        let shown = tiling.tile_at(a as i64, b as i64) as i32;
        let phase = (p - 1 - shown).rem_euclid(p);
        let well = add(origin, [SCALE, SCALE, phase * SCALE, 0]);
        fixed.push(ts.place(ENCODER, well, &region));
    }
    Ok((region, fixed))
}

/// Builds and verifies a periodic tiling of a torus by the five polycubes
/// from a periodic Wang tiling. Linkers and fillers are found by a
/// constrained search over the cells the selectors and encoders leave free.
pub fn assemble_witness_3d(
    set: &WangTileSet,
    tiling: &WangTiling,
    config: &SolveConfig,
) -> Result<(TileSet3, TilingWitness)> {
    let ts = build_tileset_3d(set)?;
    let (region, fixed) = witness_skeleton_3d(&ts, tiling)?;
    let outcome = solve_region(
        &region,
        &ts.tiles,
        &fixed,
        Some(&[LINKER, FILLER, FILLER_PLUS]),
        config,
    )?;
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
            dim: 3,
            wang: set.clone(),
        }),
    };
    Ok((ts, witness))
}

/// A column of four block cells on a torus with a dent block at the south
/// end and another at the north end, leaving two cells between them.
///
/// Returns the region, the tiles `[south, north, linker]` and the fixed
/// placements of the two end blocks.
pub fn linker_fixture_3d(south: Block3, north: Block3) -> Result<(Region, Vec<VoxelSet>, Vec<Placement>)> {
    let region = Region::torus(&[SCALE, 4 * SCALE, SCALE])?;
    let frames = [host_block(south), host_block(north), assemble(linker_parts()).0];
    let mut tiles = Vec::new();
    let mut anchors = Vec::new();
    for f in &frames {
        anchors.push(f.bounds()?.0);
        tiles.push(canonical(f));
    }
    let at = |k: usize, origin: Cell| {
        let off = region.normalize(add(origin, anchors[k])).expect("torus");
        Placement::new(k, &off[..3])
    };
    let fixed = vec![at(0, [0, 0, 0, 0]), at(1, [0, 3 * SCALE, 0, 0])];
    Ok((region, tiles, fixed))
}

/// Whether linkers alone close the gap of [`linker_fixture_3d`].
pub fn linker_fits_3d(south: Block3, north: Block3, config: &SolveConfig) -> Result<SolveStatus> {
    let (region, tiles, fixed) = linker_fixture_3d(south, north)?;
    Ok(solve_region(&region, &tiles, &fixed, Some(&[2]), config)?.status)
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
    fn encoder_first_layer_labels() {
        let layout = encoder_layout(&three_tiles()).unwrap();
        let north: Vec<&str> = (0..6).map(|x| layout.label_at([x, 5, 0]).unwrap()).collect();
        assert_eq!(north, ["c", "c-", "", "", "c", "c"]);
        let south: Vec<&str> = (0..6).map(|x| layout.label_at([x, 0, 0]).unwrap()).collect();
        assert_eq!(south, ["d-", "d-", "", "", "d", "d"]);
        assert_eq!(layout.label_at([0, 4, 1]), Some("A"));
        assert_eq!(layout.label_at([5, 4, 2]), Some("B"));
    }

    #[test]
    fn selector_top_layer_has_windows() {
        let layout = selector_layout(&three_tiles()).unwrap();
        assert_eq!(layout.extents, [8, 8, 3]);
        for x in [1, 2, 5, 6] {
            assert_eq!(layout.label_at([x, 0, 2]), None);
            assert_eq!(layout.label_at([x, 7, 2]), None);
            assert_eq!(layout.label_at([x, 0, 1]), Some("c"));
            assert_eq!(layout.label_at([x, 7, 0]), Some("d"));
        }
        assert_eq!(layout.label_at([7, 7, 0]), Some("z"));
        assert_eq!(layout.label_at([7, 7, 2]), Some("Z"));
        assert_eq!(layout.label_at([4, 0, 0]), Some("y"));
    }

    #[test]
    fn linker_is_c_then_d_plus() {
        let l = build_linker();
        assert_eq!(l.len(), host_block(Block3::CBump).len() + host_block(Block3::DPlus).len());
        assert!(l.is_connected());
    }

    #[test]
    fn lattice_sites_cover_the_torus_once() {
        let set = WangTileSet::new(2, vec![WangTile::new(0, 1, 0, 1)]).unwrap();
        let lat = SelectorLattice::for_set(&set);
        let ext = lat.torus_blocks(2, 1);
        let mut seen = std::collections::HashSet::new();
        for (a, b) in lat.torus_sites(2, 1) {
            let s = lat.site(a, b);
            for dy in 0..lat.width {
                for dx in 0..lat.width {
                    let c = ((s[0] + dx).rem_euclid(ext[0]), (s[1] + dy).rem_euclid(ext[1]));
                    assert!(seen.insert(c));
                }
            }
        }
        assert_eq!(seen.len() as i32, ext[0] * ext[1]);
    }
}
