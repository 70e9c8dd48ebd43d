//! Finite sets of unit cells in the integer lattice of dimension 1 to 4.
//!
//! Axis convention throughout the crate: coordinate 0 is x (east), 1 is y
//! (north), 2 is z (up) and 3 is t (future). Cells are stored as fixed
//! `[i32; 4]` arrays whose unused trailing coordinates are zero, which keeps
//! ordering and hashing uniform across dimensions.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported lattice dimension.
pub const MAX_DIM: usize = 4;

/// A lattice cell; coordinates beyond the set's dimension are zero.
pub type Cell = [i32; MAX_DIM];

/// Builds a cell from a coordinate slice of length at most [`MAX_DIM`].
pub fn cell(coords: &[i32]) -> Cell {
    let mut c = [0; MAX_DIM];
    c[..coords.len()].copy_from_slice(coords);
    c
}

/// Componentwise sum of two cells.
pub fn add(a: Cell, b: Cell) -> Cell {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

/// Componentwise difference `a - b`.
pub fn sub(a: Cell, b: Cell) -> Cell {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

/// A finite set of cells, kept sorted in lexicographic order without repeats.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VoxelSet {
    dim: usize,
    cells: Vec<Cell>,
}

impl fmt::Debug for VoxelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VoxelSet(dim={}, {} cells)", self.dim, self.cells.len())
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

impl VoxelSet {
    /// Creates a set from cells; duplicates are merged.
    ///
    /// Fails when `dim` is unsupported or a cell has a non-zero coordinate
    /// beyond `dim`.
    pub fn new(dim: usize, cells: impl IntoIterator<Item = Cell>) -> Result<Self> {
        check_dim(dim)?;
        let mut cells: Vec<Cell> = cells.into_iter().collect();
        if let Some(bad) = cells.iter().find(|c| c[dim..].iter().any(|&v| v != 0)) {
            return Err(Error::Instance(format!(
                "cell {bad:?} has coordinates beyond dimension {dim}"
            )));
        }
        cells.sort_unstable();
        cells.dedup();
        Ok(VoxelSet { dim, cells })
    }

    /// Creates a set from coordinate vectors that all have length `dim`.
    pub fn from_coords(dim: usize, coords: &[Vec<i32>]) -> Result<Self> {
        check_dim(dim)?;
        let mut cells = Vec::with_capacity(coords.len());
        for c in coords {
            if c.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: c.len(),
                });
            }
            cells.push(cell(c));
        }
        Self::new(dim, cells)
    }

    /// The empty set of the given dimension.
    pub fn empty(dim: usize) -> Result<Self> {
        Self::new(dim, [])
    }

    /// The full axis-aligned box `[0, e_0) x ... x [0, e_{d-1})`.
    pub fn full_box(extents: &[i32]) -> Result<Self> {
        check_dim(extents.len())?;
        let dim = extents.len();
        let mut out = Vec::new();
        let mut ext = [1; MAX_DIM];
        ext[..dim].copy_from_slice(extents);
        for x in 0..ext[0] {
            for y in 0..ext[1] {
                for z in 0..ext[2] {
                    for t in 0..ext[3] {
                        out.push([x, y, z, t]);
                    }
                }
            }
        }
        Ok(VoxelSet { dim, cells: out })
    }

    /// Lattice dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of cells.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    /// Whether the set has no cells.
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// The cells in lexicographic order.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Iterates over the cells in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = &Cell> + '_ {
        self.cells.iter()
    }

    /// Membership test.
    pub fn contains(&self, c: &Cell) -> bool {
        self.cells.binary_search(c).is_ok()
    }

    /// Shifts every cell by `v`.
    pub fn translate(&self, v: Cell) -> VoxelSet {
        let v = self.mask(v);
        VoxelSet {
            dim: self.dim,
            cells: self.cells.iter().map(|&c| add(c, v)).collect(),
        }
    }

    fn mask(&self, mut v: Cell) -> Cell {
        for x in &mut v[self.dim..] {
            *x = 0;
        }
        v
    }

    /// Applies an arbitrary cell map and re-sorts.
    pub fn map(&self, f: impl Fn(Cell) -> Cell) -> VoxelSet {
        let mut cells: Vec<Cell> = self.cells.iter().map(|&c| self.mask(f(c))).collect();
        cells.sort_unstable();
        cells.dedup();
        VoxelSet {
            dim: self.dim,
            cells,
        }
    }

    /// Smallest and largest coordinate along each axis.
    pub fn bounds(&self) -> Result<(Cell, Cell)> {
        let first = self.cells.first().ok_or(Error::EmptySet)?;
        let mut lo = *first;
        let mut hi = *first;
        for c in &self.cells {
            for i in 0..self.dim {
                lo[i] = lo[i].min(c[i]);
                hi[i] = hi[i].max(c[i]);
            }
        }
        Ok((lo, hi))
    }

    /// Side lengths of the bounding box.
    pub fn extents(&self) -> Result<Vec<i32>> {
        let (lo, hi) = self.bounds()?;
        Ok((0..self.dim).map(|i| hi[i] - lo[i] + 1).collect())
    }

    /// Translates the set so that its bounding box starts at the origin.
    ///
    /// Returns the canonical set together with the shift that was applied.
    pub fn canonicalize(&self) -> Result<(VoxelSet, Cell)> {
        let (lo, _) = self.bounds()?;
        let shift = [-lo[0], -lo[1], -lo[2], -lo[3]];
        Ok((self.translate(shift), shift))
    }

    /// Whether the set is already canonical.
    pub fn is_canonical(&self) -> bool {
        match self.bounds() {
            Ok((lo, _)) => lo == [0; MAX_DIM],
            Err(_) => false,
        }
    }

    /// Face connectivity: cells are adjacent when they differ by one in a
    /// single coordinate. The empty set counts as connected.
    pub fn is_connected(&self) -> bool {
        let Some(&start) = self.cells.first() else {
            return true;
        };
        let all: HashSet<Cell> = self.cells.iter().copied().collect();
        let mut seen: HashSet<Cell> = HashSet::with_capacity(all.len());
        let mut queue = VecDeque::from([start]);
        seen.insert(start);
        while let Some(c) = queue.pop_front() {
            for n in neighbours(self.dim, c) {
                if all.contains(&n) && seen.insert(n) {
                    queue.push_back(n);
                }
            }
        }
        seen.len() == all.len()
    }

    /// Union of two disjoint sets; reports a shared cell otherwise.
    pub fn disjoint_union(&self, other: &VoxelSet) -> Result<VoxelSet> {
        self.same_dim(other)?;
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.cells.len() && j < other.cells.len() {
            let (a, b) = (self.cells[i], other.cells[j]);
            match a.cmp(&b) {
                std::cmp::Ordering::Less => {
                    out.push(a);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b);
                    j += 1;
                }
                std::cmp::Ordering::Equal => return Err(Error::overlap(self.dim, a)),
            }
        }
        out.extend_from_slice(&self.cells[i..]);
        out.extend_from_slice(&other.cells[j..]);
        Ok(VoxelSet {
            dim: self.dim,
            cells: out,
        })
    }

    /// Plain set union.
    pub fn union(&self, other: &VoxelSet) -> Result<VoxelSet> {
        self.same_dim(other)?;
        let mut cells = self.cells.clone();
        cells.extend_from_slice(&other.cells);
        VoxelSet::new(self.dim, cells)
    }

    /// Cells of `self` that are not in `other`.
    pub fn difference(&self, other: &VoxelSet) -> Result<VoxelSet> {
        self.same_dim(other)?;
        Ok(VoxelSet {
            dim: self.dim,
            cells: self
                .cells
                .iter()
                .filter(|c| !other.contains(c))
                .copied()
                .collect(),
        })
    }

    /// Cells present in both sets.
    pub fn intersection(&self, other: &VoxelSet) -> Result<VoxelSet> {
        self.same_dim(other)?;
        Ok(VoxelSet {
            dim: self.dim,
            cells: self
                .cells
                .iter()
                .filter(|c| other.contains(c))
                .copied()
                .collect(),
        })
    }

    /// Whether the set equals the full box of the given extents once
    /// canonicalized.
    pub fn is_box(&self, extents: &[i32]) -> bool {
        if extents.len() != self.dim {
            return false;
        }
        let expected: i64 = extents.iter().map(|&e| e as i64).product();
        if self.cells.len() as i64 != expected || expected == 0 {
            return false;
        }
        match self.extents() {
            Ok(e) => e == extents,
            Err(_) => false,
        }
    }

    /// Reduces every coordinate modulo the torus extents.
    ///
    /// Fails with [`Error::Overlap`] when two cells land on the same torus
    /// cell, since the image would then no longer be a tile.
    pub fn wrap(&self, extents: &[i32]) -> Result<VoxelSet> {
        if extents.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: extents.len(),
            });
        }
        let mut cells: Vec<Cell> = self.cells.iter().map(|&c| wrap_cell(c, extents)).collect();
        cells.sort_unstable();
        if let Some(w) = cells.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::overlap(self.dim, w[0]));
        }
        Ok(VoxelSet {
            dim: self.dim,
            cells,
        })
    }

    /// Parses the voxel text format: one cell per line as whitespace
    /// separated integers, `#` starting a comment. The dimension is taken
    /// from the first data line.
    pub fn parse_text(text: &str) -> Result<VoxelSet> {
        let mut dim = None;
        let mut cells = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let coords: Vec<i32> = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<i32>().map_err(|e| Error::Parse {
                        line: n + 1,
                        message: format!("bad integer {tok:?}: {e}"),
                    })
                })
                .collect::<Result<_>>()?;
            let d = *dim.get_or_insert(coords.len());
            if coords.len() != d {
                return Err(Error::Parse {
                    line: n + 1,
                    message: format!("expected {d} coordinates, found {}", coords.len()),
                });
            }
            if !(1..=MAX_DIM).contains(&d) {
                return Err(Error::Parse {
                    line: n + 1,
                    message: format!("unsupported dimension {d}"),
                });
            }
            cells.push(cell(&coords));
        }
        let dim = dim.ok_or(Error::Parse {
            line: 0,
            message: "no cells found".into(),
        })?;
        VoxelSet::new(dim, cells)
    }

    /// Writes the voxel text format, one cell per line in lexicographic order.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.cells.len() * 4 * self.dim);
        for c in &self.cells {
            let line: Vec<String> = c[..self.dim].iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    fn same_dim(&self, other: &VoxelSet) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            })
        }
    }
}

/// The `2 * dim` face neighbours of a cell.
pub fn neighbours(dim: usize, c: Cell) -> impl Iterator<Item = Cell> {
    (0..dim).flat_map(move |axis| {
        [-1, 1].into_iter().map(move |d| {
            let mut n = c;
            n[axis] += d;
            n
        })
    })
}

/// Reduces a cell modulo torus extents (Euclidean remainder).
pub fn wrap_cell(mut c: Cell, extents: &[i32]) -> Cell {
    for (v, &e) in c.iter_mut().zip(extents) {
        *v = v.rem_euclid(e);
    }
    c
}

#[derive(Serialize, Deserialize)]
struct VoxelJson {
    dim: usize,
    cells: Vec<Vec<i32>>,
}

impl Serialize for VoxelSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        VoxelJson {
            dim: self.dim,
            cells: self.cells.iter().map(|c| c[..self.dim].to_vec()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for VoxelSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = VoxelJson::deserialize(d)?;
        VoxelSet::from_coords(raw.dim, &raw.cells).map_err(serde::de::Error::custom)
    }
}

/// Whether a region is a bounded box or a periodic torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionKind {
    /// The box `[0, e_i)` with hard walls.
    Box,
    /// The same box with opposite faces identified.
    Torus,
}

/// A box or torus `[0, e_0) x ... x [0, e_{d-1})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    /// Boundary behaviour.
    pub kind: RegionKind,
    /// Positive side lengths, one per axis.
    pub extents: Vec<i32>,
}

impl Region {
    /// A box region.
    pub fn boxed(extents: &[i32]) -> Result<Region> {
        Region::new(RegionKind::Box, extents)
    }

    /// A torus region.
    pub fn torus(extents: &[i32]) -> Result<Region> {
        Region::new(RegionKind::Torus, extents)
    }

    /// Checked constructor.
    pub fn new(kind: RegionKind, extents: &[i32]) -> Result<Region> {
        check_dim(extents.len())?;
        if extents.iter().any(|&e| e <= 0) {
            return Err(Error::Instance(format!(
                "region extents must be positive, got {extents:?}"
            )));
        }
        Ok(Region {
            kind,
            extents: extents.to_vec(),
        })
    }

    /// Parses `box:X,Y[,Z[,T]]` or `torus:X,Y[,Z[,T]]`.
    pub fn parse(spec: &str) -> Result<Region> {
        let bad = |m: String| Error::Parse {
            line: 1,
            message: m,
        };
        let (kind, rest) = spec
            .split_once(':')
            .ok_or_else(|| bad(format!("region {spec:?} lacks a kind prefix")))?;
        let kind = match kind {
            "box" => RegionKind::Box,
            "torus" => RegionKind::Torus,
            other => return Err(bad(format!("unknown region kind {other:?}"))),
        };
        let extents = rest
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<i32>()
                    .map_err(|e| bad(format!("bad extent {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Region::new(kind, &extents)
    }

    /// Lattice dimension.
    pub fn dim(&self) -> usize {
        self.extents.len()
    }

    /// Number of cells.
    pub fn volume(&self) -> usize {
        self.extents.iter().map(|&e| e as usize).product()
    }

    /// Whether the (unwrapped) cell lies inside the fundamental box.
    pub fn contains(&self, c: &Cell) -> bool {
        c.iter()
            .zip(&self.extents)
            .all(|(&v, &e)| (0..e).contains(&v))
    }

    /// Maps a cell into the fundamental box, or `None` if it falls outside
    /// a box region.
    pub fn normalize(&self, c: Cell) -> Option<Cell> {
        match self.kind {
            RegionKind::Torus => Some(wrap_cell(c, &self.extents)),
            RegionKind::Box => self.contains(&c).then_some(c),
        }
    }

    /// Linear index of a cell of the fundamental box; lexicographic order of
    /// cells matches increasing index.
    pub fn index(&self, c: &Cell) -> usize {
        let mut idx = 0usize;
        for (i, &e) in self.extents.iter().enumerate() {
            idx = idx * e as usize + c[i] as usize;
        }
        idx
    }

    /// Inverse of [`Region::index`].
    pub fn cell_at(&self, mut idx: usize) -> Cell {
        let mut c = [0; MAX_DIM];
        for i in (0..self.dim()).rev() {
            let e = self.extents[i] as usize;
            c[i] = (idx % e) as i32;
            idx /= e;
        }
        c
    }

    /// All cells of the fundamental box as a voxel set.
    pub fn cells(&self) -> VoxelSet {
        VoxelSet::full_box(&self.extents).expect("extents validated at construction")
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            RegionKind::Box => "box",
            RegionKind::Torus => "torus",
        };
        let ext: Vec<String> = self.extents.iter().map(|e| e.to_string()).collect();
        write!(f, "{kind}:{}", ext.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set2(cells: &[[i32; 2]]) -> VoxelSet {
        VoxelSet::new(2, cells.iter().map(|c| cell(c))).unwrap()
    }

    #[test]
    fn translate_then_canonicalize_round_trips() {
        let s = set2(&[[0, 0], [1, 0], [1, 1]]);
        let (canon, shift) = s.translate(cell(&[5, -3])).canonicalize().unwrap();
        assert_eq!(canon, s);
        assert_eq!(&shift[..2], &[-5, 3]);
    }

    #[test]
    fn canonicalize_rejects_empty_set() {
        assert!(matches!(
            VoxelSet::empty(3).unwrap().canonicalize(),
            Err(Error::EmptySet)
        ));
    }

    #[test]
    fn disjoint_union_reports_shared_cell() {
        let a = set2(&[[0, 0], [1, 0]]);
        let b = set2(&[[1, 0], [2, 0]]);
        match a.disjoint_union(&b) {
            Err(Error::Overlap { cell }) => assert_eq!(cell, vec![1, 0]),
            other => panic!("unexpected {other:?}"),
        }
        let c = set2(&[[0, 1]]);
        assert_eq!(a.disjoint_union(&c).unwrap().len(), 3);
    }

    #[test]
    fn connectivity_uses_faces_only() {
        assert!(set2(&[[0, 0], [1, 0], [1, 1]]).is_connected());
        assert!(!set2(&[[0, 0], [1, 1]]).is_connected());
    }

    #[test]
    fn box_detection() {
        let b = VoxelSet::full_box(&[2, 3, 1]).unwrap();
        assert!(b.is_box(&[2, 3, 1]));
        assert!(!b.is_box(&[3, 2, 1]));
        let holed = b.difference(&VoxelSet::new(3, [[1, 1, 0, 0]]).unwrap()).unwrap();
        assert!(!holed.is_box(&[2, 3, 1]));
    }

    #[test]
    fn wrap_detects_self_collision() {
        let bar = set2(&[[0, 0], [1, 0], [2, 0]]);
        assert_eq!(bar.wrap(&[3, 1]).unwrap().len(), 3);
        assert!(matches!(bar.wrap(&[2, 1]), Err(Error::Overlap { .. })));
    }

    #[test]
    fn text_round_trip_with_comments() {
        let text = "# a small tromino\n0 0 0\n1 0 0 # east\n\n1 1 0\n";
        let s = VoxelSet::parse_text(text).unwrap();
        assert_eq!(s.dim(), 3);
        assert_eq!(VoxelSet::parse_text(&s.to_text()).unwrap(), s);
        assert!(VoxelSet::parse_text("0 0\n1 0 0\n").is_err());
        assert!(VoxelSet::parse_text("0 x\n").is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = set2(&[[0, 0], [0, 1]]);
        let js = serde_json::to_string(&s).unwrap();
        assert_eq!(js, r#"{"dim":2,"cells":[[0,0],[0,1]]}"#);
        assert_eq!(serde_json::from_str::<VoxelSet>(&js).unwrap(), s);
    }

    #[test]
    fn region_index_is_lexicographic() {
        let r = Region::torus(&[3, 4, 2]).unwrap();
        let mut prev = None;
        for c in r.cells().iter() {
            let i = r.index(c);
            assert_eq!(r.cell_at(i), *c);
            if let Some(p) = prev {
                assert_eq!(i, p + 1);
            }
            prev = Some(i);
        }
        assert_eq!(Region::parse("torus:3,4,2").unwrap(), r);
        assert!(Region::parse("ring:3").is_err());
    }
}
