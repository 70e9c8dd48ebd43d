//! Four dimensional building blocks, described frame by frame over the
//! nested shells of the 8×8×8 cube.
//!
//! A block is a list of three dimensional frames stacked along the time
//! axis. Blocks live in a host frame: the spatial host cube is `[0, 8)^3`,
//! the main part starts at `t = 0` and a bump, when present, occupies the
//! three frames `t = -3..=-1` just before it.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::blocks3d::{cube, SCALE};
use crate::error::{Error, Result};
use crate::lattice::{Cell, VoxelSet};

/// Frames in a functional hypercube.
pub const SLICE: i32 = 8;

/// Frames in a half functional hypercube.
pub const HALF: i32 = 4;

/// Frames taken by a bump.
pub const BUMP_FRAMES: i32 = 3;

/// The cube split into four nested shells, the halves of the innermost
/// 2×2×2 core and the core's top north-east cell.
#[derive(Clone, Debug)]
pub struct OnionPartition {
    /// Surface cells of the cube.
    pub t1: VoxelSet,
    /// Surface of what remains after removing `t1`.
    pub t2: VoxelSet,
    /// Surface of what remains after removing `t1` and `t2`.
    pub t3: VoxelSet,
    /// The central 2×2×2 core.
    pub t4: VoxelSet,
    /// Upper half of the core.
    pub t4_up: VoxelSet,
    /// Lower half of the core.
    pub t4_down: VoxelSet,
    /// Northern half of the core.
    pub t4_north: VoxelSet,
    /// Southern half of the core.
    pub t4_south: VoxelSet,
    /// Eastern half of the core.
    pub t4_east: VoxelSet,
    /// Western half of the core.
    pub t4_west: VoxelSet,
    /// The core cell with maximal x, y and z.
    pub j: VoxelSet,
}

/// Cells of `set` having at least one face neighbour outside it.
fn surface(set: &VoxelSet) -> VoxelSet {
    let cells = set.iter().copied().filter(|&c| {
        crate::lattice::neighbours(3, c).any(|n| !set.contains(&n))
    });
    VoxelSet::new(3, cells).expect("subset of a valid set")
}

/// Splits the cube into its shells.
pub fn onion_partition() -> OnionPartition {
    let k = cube();
    let t1 = surface(&k);
    let rest1 = k.difference(&t1).expect("same dimension");
    let t2 = surface(&rest1);
    let rest2 = rest1.difference(&t2).expect("same dimension");
    let t3 = surface(&rest2);
    let t4 = rest2.difference(&t3).expect("same dimension");
    let (lo, hi) = t4.bounds().expect("core is non-empty");
    let half = |axis: usize, v: i32| {
        VoxelSet::new(3, t4.iter().copied().filter(|c| c[axis] == v)).expect("subset")
    };
    OnionPartition {
        t4_up: half(2, hi[2]),
        t4_down: half(2, lo[2]),
        t4_north: half(1, hi[1]),
        t4_south: half(1, lo[1]),
        t4_east: half(0, hi[0]),
        t4_west: half(0, lo[0]),
        j: VoxelSet::new(3, [hi]).expect("single cell"),
        t1,
        t2,
        t3,
        t4,
    }
}

/// Named pieces of the onion partition used in frame lists.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Piece {
    /// The whole cube.
    K,
    /// First shell.
    T1,
    /// Second shell.
    T2,
    /// Third shell.
    T3,
    /// Core.
    T4,
    /// Upper half of the core.
    T4Up,
    /// Lower half of the core.
    T4Down,
    /// Northern half of the core.
    T4North,
    /// Southern half of the core.
    T4South,
    /// Eastern half of the core.
    T4East,
    /// Western half of the core.
    T4West,
    /// The top north-east core cell.
    J,
    /// The core without `J`.
    T4MinusJ,
}

impl Piece {
    /// Short name used in manifests.
    pub fn name(self) -> &'static str {
        match self {
            Piece::K => "K",
            Piece::T1 => "T1",
            Piece::T2 => "T2",
            Piece::T3 => "T3",
            Piece::T4 => "T4",
            Piece::T4Up => "T4+",
            Piece::T4Down => "T4-",
            Piece::T4North => "T4N",
            Piece::T4South => "T4S",
            Piece::T4East => "T4E",
            Piece::T4West => "T4W",
            Piece::J => "J",
            Piece::T4MinusJ => "T4\\J",
        }
    }

    fn cells(self, o: &OnionPartition) -> VoxelSet {
        match self {
            Piece::K => cube(),
            Piece::T1 => o.t1.clone(),
            Piece::T2 => o.t2.clone(),
            Piece::T3 => o.t3.clone(),
            Piece::T4 => o.t4.clone(),
            Piece::T4Up => o.t4_up.clone(),
            Piece::T4Down => o.t4_down.clone(),
            Piece::T4North => o.t4_north.clone(),
            Piece::T4South => o.t4_south.clone(),
            Piece::T4East => o.t4_east.clone(),
            Piece::T4West => o.t4_west.clone(),
            Piece::J => o.j.clone(),
            Piece::T4MinusJ => o.t4.difference(&o.j).expect("same dimension"),
        }
    }
}

/// A frame as a union of pieces.
pub type Frame = Vec<Piece>;

/// Evaluates a frame.
pub fn frame_cells(frame: &[Piece], onion: &OnionPartition) -> VoxelSet {
    frame.iter().fold(VoxelSet::empty(3).expect("valid"), |acc, p| {
        acc.union(&p.cells(onion)).expect("same dimension")
    })
}

/// Manifest form of a frame, pieces joined by `+`.
pub fn frame_name(frame: &[Piece]) -> String {
    frame.iter().map(|p| p.name()).collect::<Vec<_>>().join("+")
}

/// Stacks frames along time: cell `(x, y, z, t)` is present exactly when
/// frame `t` contains `(x, y, z)`.
pub fn stack_frames(frames: &[VoxelSet]) -> Result<VoxelSet> {
    if let Some(f) = frames.iter().find(|f| f.dim() != 3) {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: f.dim(),
        });
    }
    let cells = frames
        .iter()
        .enumerate()
        .flat_map(|(t, f)| f.iter().map(move |c| [c[0], c[1], c[2], t as i32]));
    VoxelSet::new(4, cells)
}

/// The named four dimensional building blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block4 {
    /// Half hypercube with a dent facing the future.
    C,
    /// Half hypercube with a bump facing the past, matching `c`.
    CBump,
    /// Dent block with the lower core half kept.
    A,
    /// Bump matching `a`.
    ABump,
    /// Dent block with the upper core half kept.
    B,
    /// Bump matching `b`.
    BBump,
    /// Dent block with the northern core half kept.
    X,
    /// Bump matching `x`.
    XBump,
    /// Dent block with the southern core half kept.
    Y,
    /// Bump matching `y`.
    YBump,
    /// Dent block with the western core half kept.
    Z,
    /// Bump matching `z`.
    ZBump,
    /// Full hypercube whose bump fills its own dent through `J`.
    E,
    /// Full hypercube whose bump fills its own dent around `J`.
    S,
}

impl fmt::Display for Block4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Block4 {
    /// Every block in atlas order.
    pub const ALL: [Block4; 14] = [
        Block4::C,
        Block4::CBump,
        Block4::A,
        Block4::ABump,
        Block4::B,
        Block4::BBump,
        Block4::X,
        Block4::XBump,
        Block4::Y,
        Block4::YBump,
        Block4::Z,
        Block4::ZBump,
        Block4::E,
        Block4::S,
    ];

    /// Dent blocks paired with their bump partners.
    pub const PAIRS: [(Block4, Block4); 6] = [
        (Block4::C, Block4::CBump),
        (Block4::A, Block4::ABump),
        (Block4::B, Block4::BBump),
        (Block4::X, Block4::XBump),
        (Block4::Y, Block4::YBump),
        (Block4::Z, Block4::ZBump),
    ];

    /// Atlas name (`E` and `S` stand for the double-struck letters).
    pub fn name(self) -> &'static str {
        match self {
            Block4::C => "c",
            Block4::CBump => "C",
            Block4::A => "a",
            Block4::ABump => "A",
            Block4::B => "b",
            Block4::BBump => "B",
            Block4::X => "x",
            Block4::XBump => "X",
            Block4::Y => "y",
            Block4::YBump => "Y",
            Block4::Z => "z",
            Block4::ZBump => "Z",
            Block4::E => "E",
            Block4::S => "S",
        }
    }

    /// Looks a block up by atlas name.
    pub fn from_name(name: &str) -> Option<Block4> {
        Block4::ALL.into_iter().find(|b| b.name() == name)
    }

    /// Frames before the main part.
    pub fn bump_frames(self) -> i32 {
        match self {
            Block4::C | Block4::A | Block4::B | Block4::X | Block4::Y | Block4::Z => 0,
            _ => BUMP_FRAMES,
        }
    }

    /// Frames of the main part.
    pub fn main_frames(self) -> i32 {
        match self {
            Block4::E | Block4::S => SLICE,
            _ => HALF,
        }
    }

    /// The frame list, earliest first.
    pub fn frames(self) -> Vec<Frame> {
        use Piece::*;
        let dent = |kept: &[Piece]| -> Vec<Frame> {
            let with = |base: &[Piece]| base.iter().chain(kept).copied().collect::<Frame>();
            vec![vec![K], vec![T1], with(&[T1, T3]), with(&[T1, T2, T3])]
        };
        let bump = |part: Piece| -> Vec<Frame> {
            vec![vec![T2, T3, T4], vec![T2, part], vec![part], vec![K], vec![K], vec![K], vec![K]]
        };
        let double = |part: Piece, kept: Piece| -> Vec<Frame> {
            let mut f = vec![vec![T2, T3, T4], vec![T2, part], vec![part]];
            f.extend(std::iter::repeat_n(vec![K], 5));
            f.extend([vec![T1], vec![T1, T3, kept], vec![T1, T2, T3, kept]]);
            f
        };
        match self {
            Block4::C => dent(&[]),
            Block4::CBump => {
                let mut f = vec![vec![T2, T3, T4], vec![T2, T4], vec![T4]];
                f.extend(std::iter::repeat_n(vec![K], 4));
                f
            }
            Block4::A => dent(&[T4Down]),
            Block4::ABump => bump(T4Up),
            Block4::B => dent(&[T4Up]),
            Block4::BBump => bump(T4Down),
            Block4::X => dent(&[T4North]),
            Block4::XBump => bump(T4South),
            Block4::Y => dent(&[T4South]),
            Block4::YBump => bump(T4North),
            Block4::Z => dent(&[T4West]),
            Block4::ZBump => bump(T4East),
            Block4::E => double(J, T4MinusJ),
            Block4::S => double(T4MinusJ, J),
        }
    }
}

/// Stacks a block's frames with the main part starting at `t = 0`.
pub fn host_block_4d(kind: Block4) -> VoxelSet {
    let onion = onion_partition();
    let frames: Vec<VoxelSet> = kind.frames().iter().map(|f| frame_cells(f, &onion)).collect();
    stack_frames(&frames)
        .expect("frames are three dimensional")
        .translate([0, 0, 0, -kind.bump_frames()])
}

/// Canonical form of a block.
pub fn make_block_4d(kind: Block4) -> VoxelSet {
    host_block_4d(kind).canonicalize().expect("blocks are non-empty").0
}

/// Whether a half block sits in the first or second half of its slice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    /// Frames 0 to 3 of the slice.
    Former,
    /// Frames 4 to 7 of the slice.
    Latter,
}

impl Phase {
    /// Time offset of the main part within the slice.
    pub fn offset(self) -> i32 {
        match self {
            Phase::Former => 0,
            Phase::Latter => HALF,
        }
    }
}

/// A block attached to a spatial cell (in block units) of a slice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Attachment {
    /// Which block.
    pub block: Block4,
    /// Spatial cell in block units.
    pub cell: [i32; 3],
    /// Half of the slice carrying the main part; ignored for `E` and `S`.
    pub phase: Phase,
}

impl Attachment {
    /// Cells of the attachment in voxel coordinates, slice starting at `t = 0`.
    pub fn voxels(&self) -> VoxelSet {
        let shift = match self.block {
            Block4::E | Block4::S => 0,
            _ => self.phase.offset(),
        };
        host_block_4d(self.block).translate([
            self.cell[0] * SCALE,
            self.cell[1] * SCALE,
            self.cell[2] * SCALE,
            shift,
        ])
    }
}

/// Cells of the main part of a plain functional hypercube at a block cell.
pub fn plain_cell(cell: [i32; 3]) -> VoxelSet {
    VoxelSet::full_box(&[SCALE, SCALE, SCALE, SLICE])
        .expect("fixed extents")
        .translate([cell[0] * SCALE, cell[1] * SCALE, cell[2] * SCALE, 0])
}

/// Whether the dent block attached to the former half and the bump block
/// attached to the latter half of the same cell form a full hypercube.
pub fn check_complement_4d(dent: Block4, bump: Block4) -> bool {
    let a = host_block_4d(dent);
    let b = host_block_4d(bump).translate([0, 0, 0, HALF]);
    match a.disjoint_union(&b) {
        Ok(u) => u.bounds().is_ok_and(|(lo, _)| lo == [0; 4]) && u.is_box(&[SCALE; 4]),
        Err(_) => false,
    }
}

/// Manifest entry of the generated four dimensional atlas.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Atlas4Entry {
    /// Block name.
    pub name: String,
    /// File holding the canonical cell list.
    pub file: String,
    /// Number of cells.
    pub cells: usize,
    /// Frames before the main part.
    pub bump_frames: i32,
    /// Frame list in manifest notation.
    pub frames: Vec<String>,
    /// SHA-256 of the file text.
    pub sha256: String,
}

/// File name used for a block in the generated atlas.
pub fn atlas_file_name(kind: Block4) -> String {
    let stem = match kind {
        Block4::E => "slice_E".to_string(),
        Block4::S => "slice_S".to_string(),
        k if k.bump_frames() > 0 => format!("bump_{}", k.name()),
        k => format!("dent_{}", k.name()),
    };
    format!("{stem}.vox")
}

/// Generates every block file and the manifest, in atlas order.
pub fn generate_atlas_4d() -> (Vec<(String, String)>, Vec<Atlas4Entry>) {
    let mut files = Vec::new();
    let mut entries = Vec::new();
    for kind in Block4::ALL {
        let set = make_block_4d(kind);
        let text = format!("# {} frames: {}\n{}", kind.name(), kind.frames().len(), set.to_text());
        let file = atlas_file_name(kind);
        entries.push(Atlas4Entry {
            name: kind.name().to_string(),
            file: file.clone(),
            cells: set.len(),
            bump_frames: kind.bump_frames(),
            frames: kind.frames().iter().map(|f| frame_name(f)).collect(),
            sha256: hex::encode(Sha256::digest(text.as_bytes())),
        });
        files.push((file, text));
    }
    (files, entries)
}

/// Writes the generated atlas into `dir`.
pub fn write_atlas_4d(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let (files, entries) = generate_atlas_4d();
    for (name, text) in files {
        std::fs::write(dir.join(name), text)?;
    }
    let manifest = serde_json::to_string_pretty(&entries)?;
    std::fs::write(dir.join("manifest.json"), manifest + "\n")?;
    Ok(())
}

/// Compares a directory holding a generated atlas with a fresh generation
/// and returns the names of files that differ or are missing.
pub fn audit_atlas_4d(dir: &Path) -> Result<Vec<String>> {
    let (files, entries) = generate_atlas_4d();
    let mut bad = Vec::new();
    for (name, text) in files {
        match std::fs::read_to_string(dir.join(&name)) {
            Ok(found) if found == text => {}
            _ => bad.push(name),
        }
    }
    let manifest = serde_json::to_string_pretty(&entries)? + "\n";
    match std::fs::read_to_string(dir.join("manifest.json")) {
        Ok(found) if found == manifest => {}
        _ => bad.push("manifest.json".to_string()),
    }
    Ok(bad)
}

/// Voxel position of a block cell in a slice.
pub fn block_origin(cell: [i32; 3]) -> Cell {
    [cell[0] * SCALE, cell[1] * SCALE, cell[2] * SCALE, 0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shell_sizes() {
        let o = onion_partition();
        assert_eq!([o.t1.len(), o.t2.len(), o.t3.len(), o.t4.len()], [296, 152, 56, 8]);
        for half in [&o.t4_up, &o.t4_down, &o.t4_north, &o.t4_south, &o.t4_east, &o.t4_west] {
            assert_eq!(half.len(), 4);
        }
        assert_eq!(o.j.cells(), &[[4, 4, 4, 0]]);
        assert_eq!(o.t4.bounds().unwrap(), ([3, 3, 3, 0], [4, 4, 4, 0]));
    }

    #[test]
    fn stacking_boxes() {
        let k = cube();
        assert!(stack_frames(&vec![k.clone(); 8]).unwrap().is_box(&[8, 8, 8, 8]));
        assert!(stack_frames(&vec![k; 4]).unwrap().is_box(&[8, 8, 8, 4]));
        let one = VoxelSet::new(3, [[0, 0, 0, 0]]).unwrap();
        assert_eq!(stack_frames(&[one]).unwrap().len(), 1);
    }

    #[test]
    fn volumes() {
        assert_eq!(make_block_4d(Block4::C).len(), 1664);
        assert_eq!(make_block_4d(Block4::CBump).len(), 2432);
        assert_eq!(make_block_4d(Block4::E).len(), 4096);
        assert_eq!(make_block_4d(Block4::S).len(), 4096);
    }

    #[test]
    fn partners_and_only_partners_complete() {
        for (dent, _) in Block4::PAIRS {
            for (_, bump) in Block4::PAIRS {
                let partner = Block4::PAIRS.contains(&(dent, bump));
                assert_eq!(check_complement_4d(dent, bump), partner, "{dent} {bump}");
            }
        }
    }

    #[test]
    fn slice_blocks_interlock_with_themselves() {
        for k in [Block4::E, Block4::S] {
            let a = host_block_4d(k);
            let b = a.translate([0, 0, 0, SLICE]);
            let u = a.disjoint_union(&b).unwrap();
            assert_eq!(u.len(), 2 * 4096);
        }
        let e = host_block_4d(Block4::E);
        let s = host_block_4d(Block4::S).translate([0, 0, 0, SLICE]);
        assert!(e.disjoint_union(&s).is_err());
    }
}
