//! The eighteen three dimensional building blocks.
//!
//! Every block lives in the frame of an 8x8x8 host cube `[0, 8)^3`. Dent
//! blocks are the cube minus a mushroom shaped cavity opening through one
//! face, bump blocks are the cube plus the matching mushroom protruding
//! outward, and the two fillers fill the cavity left between a dent block
//! and the dent block facing it one cell further north.
//!
//! The cell lists are data: they are stored as voxel text files next to a
//! manifest recording sizes, host origins and SHA-256 digests, and are
//! embedded into the binary at compile time.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::lattice::{cell, sub, Cell, VoxelSet};

/// Side length of a host cube.
pub const SCALE: i32 = 8;

/// The eighteen block kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Block3 {
    /// Cube with a dent opening north.
    C,
    /// Seven rows of `c`, leaving an empty slab on the north side.
    CMinus,
    /// Cube with a bump on the south face that fills the dent of `c`.
    CBump,
    /// Cube with a dent opening south.
    D,
    /// Seven rows of `d`, leaving an empty slab on the south side.
    DMinus,
    /// Nine row slab with a bump on the north face that fills the dent of `d`.
    DPlus,
    /// Cube with a dent opening east.
    A,
    /// Cube with a bump on the west face that fills the dent of `a`.
    ABump,
    /// Cube with a dent opening west.
    B,
    /// Cube with a bump on the east face that fills the dent of `b`.
    BBump,
    /// Cube with a narrow-necked dent opening west.
    X,
    /// Cube with a bump on the east face that fills the dent of `x`.
    XBump,
    /// Cube with a narrow-necked dent opening south.
    Y,
    /// Cube with a bump on the north face that fills the dent of `y`.
    YBump,
    /// Cube with a narrow-necked dent opening downward.
    Z,
    /// Cube with a bump on the top face that fills the dent of `z`.
    ZBump,
    /// Standard filler: the cavity between `c` and a facing `d`.
    F,
    /// Bigger filler: the cavity between `c-` and `d`, or `c` and `d-`.
    FPlus,
}

impl Block3 {
    /// All kinds in atlas order.
    pub const ALL: [Block3; 18] = [
        Block3::C,
        Block3::CMinus,
        Block3::CBump,
        Block3::D,
        Block3::DMinus,
        Block3::DPlus,
        Block3::A,
        Block3::ABump,
        Block3::B,
        Block3::BBump,
        Block3::X,
        Block3::XBump,
        Block3::Y,
        Block3::YBump,
        Block3::Z,
        Block3::ZBump,
        Block3::F,
        Block3::FPlus,
    ];

    /// Short ASCII name used in files, diagrams and the command line.
    pub fn name(self) -> &'static str {
        match self {
            Block3::C => "c",
            Block3::CMinus => "c-",
            Block3::CBump => "C",
            Block3::D => "d",
            Block3::DMinus => "d-",
            Block3::DPlus => "D+",
            Block3::A => "a",
            Block3::ABump => "A",
            Block3::B => "b",
            Block3::BBump => "B",
            Block3::X => "x",
            Block3::XBump => "X",
            Block3::Y => "y",
            Block3::YBump => "Y",
            Block3::Z => "z",
            Block3::ZBump => "Z",
            Block3::F => "F",
            Block3::FPlus => "F+",
        }
    }

    /// Inverse of [`Block3::name`].
    pub fn from_name(name: &str) -> Option<Block3> {
        Block3::ALL.into_iter().find(|b| b.name() == name)
    }

    /// File name stem of the atlas entry, safe on case-insensitive file
    /// systems, such as `dent_c_minus` or `bump_D_plus`.
    pub fn file_stem(self) -> String {
        let role = if self.is_dent() {
            "dent"
        } else if self.is_bump() {
            "bump"
        } else {
            "filler"
        };
        let name = self.name().replace('-', "_minus").replace('+', "_plus");
        format!("{role}_{name}")
    }

    /// Blocks carrying a dent.
    pub fn is_dent(self) -> bool {
        use Block3::*;
        matches!(self, C | CMinus | D | DMinus | A | B | X | Y | Z)
    }

    /// Blocks carrying a bump.
    pub fn is_bump(self) -> bool {
        use Block3::*;
        matches!(self, CBump | DPlus | ABump | BBump | XBump | YBump | ZBump)
    }
}

/// Rigid motions of a host cube about its centre.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rotation {
    /// Quarter turn about the vertical axis, counterclockwise seen from above.
    ZCcw,
    /// Quarter turn about the vertical axis, clockwise seen from above.
    ZCw,
    /// Half turn about the vertical axis.
    Z180,
    /// Quarter turn about the north axis carrying the west face to the bottom.
    YWestDown,
    /// Quarter turn about the north axis carrying the bottom face to the west.
    YDownWest,
}

/// Rotates a three dimensional set given in host frame coordinates.
pub fn rotate_block(block: &VoxelSet, rot: Rotation) -> VoxelSet {
    let m = SCALE - 1;
    block.map(|[x, y, z, _]| match rot {
        Rotation::ZCcw => [m - y, x, z, 0],
        Rotation::ZCw => [y, m - x, z, 0],
        Rotation::Z180 => [m - x, m - y, z, 0],
        Rotation::YWestDown => [m - z, y, x, 0],
        Rotation::YDownWest => [z, y, m - x, 0],
    })
}

/// One block of the atlas.
#[derive(Clone, Debug)]
pub struct AtlasBlock {
    /// Which block this is.
    pub kind: Block3,
    /// Canonical cell list (bounding box at the origin).
    pub cells: VoxelSet,
    /// Position of the host cube origin in canonical coordinates.
    pub host_origin: Cell,
    /// How the cell list was obtained.
    pub source: String,
}

impl AtlasBlock {
    /// The block in host frame coordinates.
    pub fn host_cells(&self) -> VoxelSet {
        self.cells.translate(sub([0; 4], self.host_origin))
    }
}

/// A complement relation recorded in the manifest: `base` and `partner`
/// shifted by `offset` (host frames) form a full box of size `box_extents`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementSpec {
    /// Block carrying the dent.
    pub base: String,
    /// Block carrying the bump.
    pub partner: String,
    /// Host frame offset of the partner relative to the base.
    pub offset: [i32; 3],
    /// Size of the resulting box.
    #[serde(rename = "box")]
    pub box_extents: [i32; 3],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct ManifestEntry {
    name: String,
    file: String,
    cells: usize,
    extents: [i32; 3],
    host_origin: [i32; 3],
    source: String,
    sha256: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Manifest {
    blocks: Vec<ManifestEntry>,
    complements: Vec<ComplementSpec>,
    checksum: String,
}

/// The loaded and integrity-checked three dimensional atlas.
#[derive(Clone, Debug)]
pub struct Atlas3 {
    blocks: Vec<AtlasBlock>,
    complements: Vec<ComplementSpec>,
}

const MANIFEST: &str = include_str!("../atlas/3d/manifest.json");

const FILES: [(&str, &str); 18] = [
    ("dent_c.vox", include_str!("../atlas/3d/dent_c.vox")),
    ("dent_c_minus.vox", include_str!("../atlas/3d/dent_c_minus.vox")),
    ("bump_C.vox", include_str!("../atlas/3d/bump_C.vox")),
    ("dent_d.vox", include_str!("../atlas/3d/dent_d.vox")),
    ("dent_d_minus.vox", include_str!("../atlas/3d/dent_d_minus.vox")),
    ("bump_D_plus.vox", include_str!("../atlas/3d/bump_D_plus.vox")),
    ("dent_a.vox", include_str!("../atlas/3d/dent_a.vox")),
    ("bump_A.vox", include_str!("../atlas/3d/bump_A.vox")),
    ("dent_b.vox", include_str!("../atlas/3d/dent_b.vox")),
    ("bump_B.vox", include_str!("../atlas/3d/bump_B.vox")),
    ("dent_x.vox", include_str!("../atlas/3d/dent_x.vox")),
    ("bump_X.vox", include_str!("../atlas/3d/bump_X.vox")),
    ("dent_y.vox", include_str!("../atlas/3d/dent_y.vox")),
    ("bump_Y.vox", include_str!("../atlas/3d/bump_Y.vox")),
    ("dent_z.vox", include_str!("../atlas/3d/dent_z.vox")),
    ("bump_Z.vox", include_str!("../atlas/3d/bump_Z.vox")),
    ("filler_F.vox", include_str!("../atlas/3d/filler_F.vox")),
    ("filler_F_plus.vox", include_str!("../atlas/3d/filler_F_plus.vox")),
];

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Atlas3 {
    /// Parses a manifest and its files, checking digests, sizes, extents and
    /// canonical form. `file` resolves a manifest file name to its text.
    pub fn from_sources(manifest: &str, file: impl Fn(&str) -> Result<String>) -> Result<Atlas3> {
        let manifest: Manifest = serde_json::from_str(manifest)?;
        let mut blocks = Vec::with_capacity(manifest.blocks.len());
        let mut whole = Sha256::new();
        for entry in &manifest.blocks {
            let kind = Block3::from_name(&entry.name)
                .ok_or_else(|| Error::Atlas(format!("unknown block {:?}", entry.name)))?;
            let text = file(&entry.file)?;
            whole.update(text.as_bytes());
            let digest = sha256_hex(text.as_bytes());
            if digest != entry.sha256 {
                return Err(Error::Atlas(format!(
                    "{}: digest {digest} does not match manifest",
                    entry.file
                )));
            }
            let cells = VoxelSet::parse_text(&text)?;
            if cells.dim() != 3 || cells.len() != entry.cells || !cells.is_canonical() {
                return Err(Error::Atlas(format!(
                    "{}: expected {} canonical cells in 3 dimensions",
                    entry.file, entry.cells
                )));
            }
            if cells.extents()? != entry.extents {
                return Err(Error::Atlas(format!("{}: extents disagree", entry.file)));
            }
            blocks.push(AtlasBlock {
                kind,
                cells,
                host_origin: cell(&entry.host_origin),
                source: entry.source.clone(),
            });
        }
        let total = hex::encode(whole.finalize());
        if total != manifest.checksum {
            return Err(Error::Atlas(format!(
                "atlas checksum {total} does not match manifest"
            )));
        }
        for kind in Block3::ALL {
            if !blocks.iter().any(|b| b.kind == kind) {
                return Err(Error::Atlas(format!("block {} missing", kind.name())));
            }
        }
        Ok(Atlas3 {
            blocks,
            complements: manifest.complements,
        })
    }

    /// Loads the atlas embedded in the crate.
    pub fn embedded() -> Result<Atlas3> {
        Atlas3::from_sources(MANIFEST, |name| {
            FILES
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, text)| text.to_string())
                .ok_or_else(|| Error::Atlas(format!("file {name} not embedded")))
        })
    }

    /// Loads an atlas copy from a directory holding `manifest.json`.
    pub fn from_dir(dir: &std::path::Path) -> Result<Atlas3> {
        let manifest = std::fs::read_to_string(dir.join("manifest.json"))?;
        Atlas3::from_sources(&manifest, |name| Ok(std::fs::read_to_string(dir.join(name))?))
    }

    /// Writes the embedded manifest and block files into `dir`.
    pub fn write_embedded(dir: &std::path::Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("manifest.json"), MANIFEST)?;
        for (name, text) in FILES {
            std::fs::write(dir.join(name), text)?;
        }
        Ok(())
    }

    /// Looks up a block.
    pub fn get(&self, kind: Block3) -> &AtlasBlock {
        self.blocks
            .iter()
            .find(|b| b.kind == kind)
            .expect("presence checked at load time")
    }

    /// All blocks in manifest order.
    pub fn blocks(&self) -> &[AtlasBlock] {
        &self.blocks
    }

    /// Complement relations recorded in the manifest.
    pub fn complements(&self) -> &[ComplementSpec] {
        &self.complements
    }
}

/// The embedded atlas, loaded once.
///
/// # Panics
///
/// Panics if the embedded files fail their integrity checks, which can only
/// happen when the crate was built from corrupted sources.
pub fn atlas() -> &'static Atlas3 {
    static ATLAS: OnceLock<Atlas3> = OnceLock::new();
    ATLAS.get_or_init(|| Atlas3::embedded().expect("embedded atlas is corrupt"))
}

/// The canonical cell list of a block.
pub fn make_block(kind: Block3) -> VoxelSet {
    atlas().get(kind).cells.clone()
}

/// The block in host frame coordinates, host cube at `[0, 8)^3`.
pub fn host_block(kind: Block3) -> VoxelSet {
    atlas().get(kind).host_cells()
}

/// The full host cube.
pub fn cube() -> VoxelSet {
    VoxelSet::full_box(&[SCALE, SCALE, SCALE]).expect("fixed extents")
}

/// Whether `a` and `b` shifted by `offset` are disjoint and together form
/// an axis-aligned box.
pub fn check_complement(a: &VoxelSet, b: &VoxelSet, offset: Cell) -> bool {
    match a.disjoint_union(&b.translate(offset)) {
        Ok(u) => match u.extents() {
            Ok(e) => u.is_box(&e),
            Err(_) => false,
        },
        Err(_) => false,
    }
}

/// All offsets within `radius` of `nominal` (per axis) at which
/// [`check_complement`] holds.
pub fn complement_offsets(a: &VoxelSet, b: &VoxelSet, nominal: Cell, radius: i32) -> Vec<Cell> {
    let mut out = Vec::new();
    for dx in -radius..=radius {
        for dy in -radius..=radius {
            for dz in -radius..=radius {
                let off = [nominal[0] + dx, nominal[1] + dy, nominal[2] + dz, 0];
                if check_complement(a, b, off) {
                    out.push(off);
                }
            }
        }
    }
    out
}

/// Whether some translate of `bump` fills `dent` to a gapless box.
///
/// Offsets are screened by bounding box arithmetic before any cell level
/// check, so the scan over all touching offsets stays cheap.
pub fn match_exclusivity(dent: &VoxelSet, bump: &VoxelSet) -> bool {
    let (Ok((alo, ahi)), Ok((blo, bhi))) = (dent.bounds(), bump.bounds()) else {
        return false;
    };
    let want = (dent.len() + bump.len()) as i64;
    let range = |i: usize| (alo[i] - bhi[i] - 1)..=(ahi[i] - blo[i] + 1);
    for ox in range(0) {
        for oy in range(1) {
            for oz in range(2) {
                let mut vol = 1i64;
                for (i, o) in [ox, oy, oz].into_iter().enumerate() {
                    let lo = alo[i].min(blo[i] + o);
                    let hi = ahi[i].max(bhi[i] + o);
                    vol *= (hi - lo + 1) as i64;
                }
                if vol == want && check_complement(dent, bump, [ox, oy, oz, 0]) {
                    return true;
                }
            }
        }
    }
    false
}

/// Re-derives a block in host frame coordinates from the blocks that are
/// digitized directly, or returns `None` for those primary blocks.
///
/// Used by the atlas audit to cross-check the stored derived blocks.
pub fn derive_block(kind: Block3, atlas: &Atlas3) -> Option<VoxelSet> {
    let host = |k| atlas.get(k).host_cells();
    let cube = cube();
    let bump_from = |dent: VoxelSet, shift: Cell| {
        let cavity = cube.difference(&dent).expect("same dimension");
        cube.disjoint_union(&cavity.translate(shift))
            .expect("shifted cavity lies outside the cube")
    };
    Some(match kind {
        Block3::DMinus => rotate_block(&host(Block3::CMinus), Rotation::Z180),
        Block3::B => rotate_block(&host(Block3::C), Rotation::ZCcw),
        Block3::ABump => rotate_block(&host(Block3::CBump), Rotation::ZCw),
        Block3::BBump => rotate_block(&host(Block3::CBump), Rotation::ZCcw),
        Block3::Y => rotate_block(&host(Block3::X), Rotation::ZCcw),
        Block3::Z => rotate_block(&host(Block3::X), Rotation::YWestDown),
        Block3::XBump => bump_from(host(Block3::X), [SCALE, 0, 0, 0]),
        Block3::YBump => bump_from(rotate_block(&host(Block3::X), Rotation::ZCcw), [0, SCALE, 0, 0]),
        Block3::ZBump => bump_from(
            rotate_block(&host(Block3::X), Rotation::YWestDown),
            [0, 0, SCALE, 0],
        ),
        _ => return None,
    })
}

/// Checks every complement relation of the manifest and every block that
/// can be re-derived from others, returning one message per failure.
pub fn audit_atlas_3d(atlas: &Atlas3) -> Vec<String> {
    let mut problems = Vec::new();
    for spec in atlas.complements() {
        let (Some(base), Some(partner)) = (Block3::from_name(&spec.base), Block3::from_name(&spec.partner)) else {
            problems.push(format!("complement {}/{} names an unknown block", spec.base, spec.partner));
            continue;
        };
        let [x, y, z] = spec.offset;
        let a = atlas.get(base).host_cells();
        let b = atlas.get(partner).host_cells();
        let full = check_complement(&a, &b, [x, y, z, 0])
            && a.disjoint_union(&b.translate([x, y, z, 0]))
                .and_then(|u| u.extents())
                .is_ok_and(|e| e == spec.box_extents);
        if !full {
            problems.push(format!("{} and {} do not form their box", spec.base, spec.partner));
        }
    }
    for kind in Block3::ALL {
        if let Some(derived) = derive_block(kind, atlas) {
            if derived != atlas.get(kind).host_cells() {
                problems.push(format!("{} differs from its derivation", kind.name()));
            }
        }
    }
    problems
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atlas_loads_and_has_expected_sizes() {
        let a = atlas();
        let size = |k| a.get(k).cells.len();
        assert_eq!(size(Block3::C), 448);
        assert_eq!(size(Block3::CMinus), 384);
        assert_eq!(size(Block3::CBump), 576);
        assert_eq!(size(Block3::DPlus), 640);
        assert_eq!(size(Block3::X), 452);
        assert_eq!(size(Block3::F), 128);
        assert_eq!(size(Block3::FPlus), 192);
    }

    #[test]
    fn corrupted_file_is_rejected() {
        let err = Atlas3::from_sources(MANIFEST, |name| {
            let mut text = FILES.iter().find(|(n, _)| *n == name).unwrap().1.to_string();
            if name == "dent_c.vox" {
                text.push_str("9 9 9\n");
            }
            Ok(text)
        });
        assert!(matches!(err, Err(Error::Atlas(_))));
    }

    #[test]
    fn rotations_compose_to_identity() {
        let c = host_block(Block3::C);
        let four = (0..4).fold(c.clone(), |s, _| rotate_block(&s, Rotation::ZCcw));
        assert_eq!(four, c);
        let back = rotate_block(&rotate_block(&c, Rotation::YWestDown), Rotation::YDownWest);
        assert_eq!(back, c);
        assert_eq!(
            rotate_block(&rotate_block(&c, Rotation::ZCcw), Rotation::ZCcw),
            rotate_block(&c, Rotation::Z180)
        );
    }

    #[test]
    fn derived_blocks_match_stored_files() {
        let a = atlas();
        for kind in Block3::ALL {
            if let Some(derived) = derive_block(kind, a) {
                assert_eq!(derived, a.get(kind).host_cells(), "{}", kind.name());
            }
        }
    }

    #[test]
    fn digitized_d_and_a_are_rotations_of_c() {
        let c = host_block(Block3::C);
        assert_eq!(rotate_block(&c, Rotation::Z180), host_block(Block3::D));
        assert_eq!(rotate_block(&c, Rotation::ZCw), host_block(Block3::A));
    }
}
