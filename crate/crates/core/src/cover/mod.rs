//! Exact cover of a box or torus by translates of a finite tile set.
//!
//! Every placement is a pair (tile, offset) where the offset is the image of
//! the tile's canonical minimal corner. The search is Knuth's Algorithm X:
//! repeatedly pick the uncovered cell with the fewest remaining placements
//! (ties go to the lexicographically smallest cell) and branch over those
//! placements in enumeration order.
//!
//! Two interchangeable engines run that same search. Small instances use
//! dancing links over an explicit matrix. Large instances use a dense
//! engine that recomputes placement validity and per-cell counts with fast
//! Fourier transforms, so the matrix never has to be materialized.
//! Residual regions that fall apart into several face-connected pieces are
//! solved piece by piece.

mod dense;
mod dlx;
mod sat;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{add, cell, neighbours, sub, Cell, Region, RegionKind, VoxelSet};

pub use sat::export_sat;

/// Environment variable holding the number of worker threads.
pub const THREADS_ENV: &str = "TILEFORGE_THREADS";

/// Matrices with more nodes than this are handed to the dense engine.
const DLX_NODE_LIMIT: usize = 6_000_000;

/// One translate of a tile.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Placement {
    /// Index into the tile list.
    pub tile: usize,
    /// Position of the tile's canonical minimal corner.
    pub offset: Vec<i32>,
}

impl Placement {
    /// Creates a placement from a tile index and an offset slice.
    pub fn new(tile: usize, offset: &[i32]) -> Self {
        Placement {
            tile,
            offset: offset.to_vec(),
        }
    }

    fn offset_cell(&self) -> Cell {
        cell(&self.offset)
    }
}

/// A region, canonical tiles, and every placement lying inside the region.
#[derive(Clone, Debug)]
pub struct CoverInstance {
    /// Region to be covered.
    pub region: Region,
    /// Canonical tiles.
    pub tiles: Vec<VoxelSet>,
    /// All placements, ordered by tile and then lexicographically by offset.
    pub placements: Vec<Placement>,
}

/// Final state of a search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    /// A cover was found.
    Solved,
    /// The search space was exhausted without a cover.
    Unsolvable,
    /// The node budget ran out first.
    BudgetExhausted,
}

impl SolveStatus {
    /// Process exit code: 0 solved, 1 unsolvable, 2 budget exhausted.
    pub fn exit_code(self) -> i32 {
        match self {
            SolveStatus::Solved => 0,
            SolveStatus::Unsolvable => 1,
            SolveStatus::BudgetExhausted => 2,
        }
    }
}

/// Result of a search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOutcome {
    /// How the search ended.
    pub status: SolveStatus,
    /// The cover when solved: fixed placements first, then the found ones.
    pub placements: Vec<Placement>,
    /// Search nodes visited.
    pub nodes: u64,
}

/// Which engine runs the search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Engine {
    /// Dancing links when the matrix is small, dense otherwise.
    #[default]
    Auto,
    /// Always dancing links.
    Dlx,
    /// Always the Fourier-transform engine.
    Dense,
}

/// Search parameters.
#[derive(Clone, Debug)]
pub struct SolveConfig {
    /// Maximum number of search nodes, unlimited when `None`.
    pub budget: Option<u64>,
    /// On an empty torus, fix one placement at the origin per tile kind
    /// instead of branching over every translate covering the first cell.
    pub symmetry: bool,
    /// Engine selection.
    pub engine: Engine,
    /// Worker threads for independent top-level branches.
    pub threads: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            budget: None,
            symmetry: false,
            engine: Engine::Auto,
            threads: threads_from_env(),
        }
    }
}

impl SolveConfig {
    /// Default configuration with a node budget.
    pub fn with_budget(budget: u64) -> Self {
        SolveConfig {
            budget: Some(budget),
            ..SolveConfig::default()
        }
    }
}

/// Reads the worker count from the environment, defaulting to one.
pub fn threads_from_env() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(1)
}

/// Region and tiles with precomputed cell offsets.
pub(crate) struct Geometry {
    pub region: Region,
    pub tiles: Vec<VoxelSet>,
    /// Tiles whose cells stay distinct modulo the torus extents.
    pub injective: Vec<bool>,
    /// Tiles that are face connected, which lets placement enumeration
    /// prune offsets axis by axis.
    pub connected: Vec<bool>,
    pub extents: Vec<i32>,
}

impl Geometry {
    fn new(region: &Region, tiles: &[VoxelSet]) -> Result<Geometry> {
        let mut canon = Vec::with_capacity(tiles.len());
        for (i, t) in tiles.iter().enumerate() {
            if t.dim() != region.dim() {
                return Err(Error::DimensionMismatch {
                    expected: region.dim(),
                    found: t.dim(),
                });
            }
            if t.is_empty() {
                return Err(Error::Instance(format!("tile {i} is empty")));
            }
            canon.push(t.canonicalize()?.0);
        }
        let injective = canon
            .iter()
            .map(|t| match region.kind {
                RegionKind::Torus => t.wrap(&region.extents).is_ok(),
                RegionKind::Box => true,
            })
            .collect();
        let connected = canon.iter().map(|t| t.is_connected()).collect();
        Ok(Geometry {
            region: region.clone(),
            tiles: canon,
            injective,
            connected,
            extents: region.extents.clone(),
        })
    }

    /// Region indices covered by a placement, or `None` if it leaves a box.
    fn cells_of(&self, tile: usize, offset: Cell) -> Option<Vec<usize>> {
        let mut out = Vec::with_capacity(self.tiles[tile].len());
        for &c in self.tiles[tile].cells() {
            let n = self.region.normalize(add(c, offset))?;
            out.push(self.region.index(&n));
        }
        Some(out)
    }

    /// Candidate offsets along one axis for placing a tile of extent `ext`
    /// inside a set whose projection onto the axis is `present`.
    ///
    /// A connected tile projects onto a run of consecutive coordinates, so
    /// only offsets whose run fits inside a maximal run of `present` survive.
    fn axis_range(&self, axis: usize, present: &[bool], ext: i32) -> Vec<i32> {
        let e = self.extents[axis];
        let torus = self.region.kind == RegionKind::Torus;
        if torus && present.iter().all(|&p| p) {
            return (0..e).collect();
        }
        let at = |i: i32| present[i.rem_euclid(e) as usize];
        let mut out = Vec::new();
        for s in 0..e {
            let opens = at(s) && (if torus { !at(s - 1) } else { s == 0 || !at(s - 1) });
            if !opens {
                continue;
            }
            let mut len = 0;
            while len < e && (torus || s + len < e) && at(s + len) {
                len += 1;
            }
            for d in 0..=(len - ext) {
                out.push(if torus { (s + d) % e } else { s + d });
            }
        }
        out.sort_unstable();
        out
    }

    fn full_range(&self, axis: usize, ext: i32) -> Vec<i32> {
        match self.region.kind {
            RegionKind::Torus => (0..self.extents[axis]).collect(),
            RegionKind::Box => (0..=(self.extents[axis] - ext)).collect(),
        }
    }

    /// Per axis, the coordinates hit by the listed region cells.
    fn projections(&self, cells: &[usize]) -> Vec<Vec<bool>> {
        let mut present: Vec<Vec<bool>> = self.extents.iter().map(|&e| vec![false; e as usize]).collect();
        for &idx in cells {
            let c = self.region.cell_at(idx);
            for (axis, p) in present.iter_mut().enumerate() {
                p[c[axis] as usize] = true;
            }
        }
        present
    }

    /// Region cells covered by a placement if they all lie inside `mask`.
    fn cells_inside(&self, tile: usize, offset: Cell, mask: &[bool]) -> Option<Vec<usize>> {
        let mut out = Vec::with_capacity(self.tiles[tile].len());
        for &c in self.tiles[tile].cells() {
            let n = self.region.normalize(add(c, offset))?;
            let i = self.region.index(&n);
            if !mask[i] {
                return None;
            }
            out.push(i);
        }
        Some(out)
    }

    /// All placements of the listed tiles whose cells lie inside `mask`,
    /// ordered by tile and then by offset. `cells` lists the members of
    /// `mask`.
    fn placements_within(&self, cells: &[usize], mask: &[bool], tiles: &[usize]) -> Vec<(usize, Cell, Vec<usize>)> {
        self.placements_capped(cells, mask, tiles, usize::MAX)
            .expect("no cap")
    }

    /// Like [`Geometry::placements_within`], giving up with `None` once the
    /// rows hold more than `cap` cells in total.
    fn placements_capped(
        &self,
        cells: &[usize],
        mask: &[bool],
        tiles: &[usize],
        cap: usize,
    ) -> Option<Vec<(usize, Cell, Vec<usize>)>> {
        let mut total = 0usize;
        let dim = self.region.dim();
        let present = self.projections(cells);
        let mut out = Vec::new();
        for &k in tiles {
            if !self.injective[k] {
                continue;
            }
            let ext = self.tiles[k].extents().expect("tiles are non-empty");
            let ranges: Vec<Vec<i32>> = (0..dim)
                .map(|a| {
                    if self.connected[k] {
                        self.axis_range(a, &present[a], ext[a])
                    } else {
                        self.full_range(a, ext[a])
                    }
                })
                .collect();
            let mut offsets = Vec::new();
            if ranges.iter().map(Vec::len).product::<usize>() > cells.len() {
                let first = self.tiles[k].cells()[0];
                for &i in cells {
                    let c = self.region.cell_at(i);
                    let off = sub(c, first);
                    offsets.push(self.region.normalize(off).unwrap_or(off));
                }
                offsets.sort_unstable();
                offsets.dedup();
            } else {
                product(&ranges, &mut [0; 4], 0, &mut offsets);
                offsets.sort_unstable();
            }
            for off in offsets {
                if let Some(cells) = self.cells_inside(k, off, mask) {
                    total += cells.len();
                    if total > cap {
                        return None;
                    }
                    out.push((k, off, cells));
                }
            }
        }
        Some(out)
    }
}

fn product(ranges: &[Vec<i32>], cur: &mut Cell, axis: usize, out: &mut Vec<Cell>) {
    if axis == ranges.len() {
        out.push(*cur);
        return;
    }
    for &v in &ranges[axis] {
        cur[axis] = v;
        product(ranges, cur, axis + 1, out);
    }
}

/// Enumerates all placements of the tiles inside the region.
///
/// Tiles are canonicalized first. On a torus, a tile whose cells collide
/// modulo the extents has no placements.
pub fn enumerate_placements(region: &Region, tiles: &[VoxelSet]) -> Result<CoverInstance> {
    let geom = Geometry::new(region, tiles)?;
    let mask = vec![true; region.volume()];
    let cells: Vec<usize> = (0..region.volume()).collect();
    let all: Vec<usize> = (0..tiles.len()).collect();
    let placements = geom
        .placements_within(&cells, &mask, &all)
        .into_iter()
        .map(|(k, off, _)| Placement::new(k, &off[..region.dim()]))
        .collect();
    Ok(CoverInstance {
        region: region.clone(),
        tiles: geom.tiles,
        placements,
    })
}

/// Region cells covered by a placement, in region index order of the tile's
/// cells. Fails when the placement leaves a box region.
pub fn placement_cells(region: &Region, tile: &VoxelSet, offset: &[i32]) -> Result<Vec<Cell>> {
    let (canon, _) = tile.canonicalize()?;
    let off = cell(offset);
    canon
        .iter()
        .map(|&c| {
            region.normalize(add(c, off)).ok_or_else(|| {
                Error::Instance(format!("placement at {offset:?} leaves the region"))
            })
        })
        .collect()
}

/// Checks that the placements cover every region cell exactly once.
pub fn verify_cover(region: &Region, tiles: &[VoxelSet], placements: &[Placement]) -> Result<()> {
    let geom = Geometry::new(region, tiles)?;
    let mut owner: Vec<u32> = vec![u32::MAX; region.volume()];
    for (p_idx, p) in placements.iter().enumerate() {
        if p.tile >= tiles.len() {
            return Err(Error::Witness(format!("placement {p_idx} uses unknown tile {}", p.tile)));
        }
        if p.offset.len() != region.dim() {
            return Err(Error::Witness(format!("placement {p_idx} has a malformed offset")));
        }
        let cells = geom.cells_of(p.tile, p.offset_cell()).ok_or_else(|| {
            Error::Witness(format!("placement {p_idx} leaves the region"))
        })?;
        for i in cells {
            if owner[i] != u32::MAX {
                return Err(Error::Witness(format!(
                    "cell {:?} covered by placements {} and {p_idx}",
                    &region.cell_at(i)[..region.dim()],
                    owner[i]
                )));
            }
            owner[i] = p_idx as u32;
        }
    }
    if let Some(i) = owner.iter().position(|&o| o == u32::MAX) {
        return Err(Error::Witness(format!(
            "cell {:?} is not covered",
            &region.cell_at(i)[..region.dim()]
        )));
    }
    Ok(())
}

/// Solves the instance from scratch.
pub fn solve(instance: &CoverInstance, config: &SolveConfig) -> Result<SolveOutcome> {
    solve_constrained(instance, &[], None, config)
}

/// Solves the instance with some placements fixed in advance and, when
/// `allowed` is given, only the listed tiles available for the rest.
pub fn solve_constrained(
    instance: &CoverInstance,
    fixed: &[Placement],
    allowed: Option<&[usize]>,
    config: &SolveConfig,
) -> Result<SolveOutcome> {
    solve_region(&instance.region, &instance.tiles, fixed, allowed, config)
}

/// Same as [`solve_constrained`] but without enumerating the placement list
/// first, which matters for large regions where only the free cells left
/// by `fixed` need candidates.
pub fn solve_region(
    region: &Region,
    tiles: &[VoxelSet],
    fixed: &[Placement],
    allowed: Option<&[usize]>,
    config: &SolveConfig,
) -> Result<SolveOutcome> {
    let geom = Geometry::new(region, tiles)?;
    let allowed: Vec<usize> = match allowed {
        Some(a) => {
            if let Some(&bad) = a.iter().find(|&&k| k >= tiles.len()) {
                return Err(Error::Instance(format!("allowed tile {bad} does not exist")));
            }
            let mut a = a.to_vec();
            a.sort_unstable();
            a.dedup();
            a
        }
        None => (0..tiles.len()).collect(),
    };
    let torus = region.kind == RegionKind::Torus;
    if config.symmetry && torus && fixed.is_empty() {
        return solve_by_symmetry(&geom, &allowed, config);
    }
    solve_residual(&geom, fixed, &allowed, config)
}

/// Every cover of an empty torus contains some placement; translating the
/// cover moves that placement to the origin. Branch `i` fixes tile
/// `allowed[i]` at the origin and forbids the tiles of earlier branches,
/// since a cover using one of those would already have been found there.
fn solve_by_symmetry(geom: &Geometry, allowed: &[usize], config: &SolveConfig) -> Result<SolveOutcome> {
    let branches: Vec<(Placement, Vec<usize>)> = allowed
        .iter()
        .enumerate()
        .filter(|(_, &k)| geom.injective[k])
        .map(|(i, &k)| {
            (
                Placement::new(k, &vec![0; geom.region.dim()]),
                allowed[i..].to_vec(),
            )
        })
        .collect();
    let run = |(p, rest): &(Placement, Vec<usize>)| solve_residual(geom, std::slice::from_ref(p), rest, config);
    let results: Vec<Result<SolveOutcome>> = if config.threads > 1 && branches.len() > 1 {
        std::thread::scope(|s| {
            let handles: Vec<_> = branches
                .chunks(branches.len().div_ceil(config.threads))
                .map(|chunk| s.spawn(move || chunk.iter().map(run).collect::<Vec<_>>()))
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("solver thread panicked"))
                .collect()
        })
    } else {
        let mut out = Vec::new();
        for b in &branches {
            let r = run(b);
            let stop = !matches!(r, Ok(SolveOutcome { status: SolveStatus::Unsolvable, .. }));
            out.push(r);
            if stop {
                break;
            }
        }
        out
    };
    let mut nodes = 0;
    for r in results {
        let r = r?;
        nodes += r.nodes;
        if r.status != SolveStatus::Unsolvable {
            return Ok(SolveOutcome { nodes, ..r });
        }
    }
    Ok(SolveOutcome {
        status: SolveStatus::Unsolvable,
        placements: Vec::new(),
        nodes,
    })
}

fn solve_residual(
    geom: &Geometry,
    fixed: &[Placement],
    allowed: &[usize],
    config: &SolveConfig,
) -> Result<SolveOutcome> {
    let region = &geom.region;
    let mut free = vec![true; region.volume()];
    for (i, p) in fixed.iter().enumerate() {
        if p.tile >= geom.tiles.len() || p.offset.len() != region.dim() {
            return Err(Error::Instance(format!("fixed placement {i} is malformed")));
        }
        let cells = geom
            .cells_of(p.tile, p.offset_cell())
            .ok_or_else(|| Error::Instance(format!("fixed placement {i} leaves the region")))?;
        if !geom.injective[p.tile] {
            return Err(Error::Instance(format!("fixed placement {i} overlaps itself")));
        }
        for c in cells {
            if !free[c] {
                return Err(Error::Instance(format!(
                    "fixed placement {i} overlaps another at {:?}",
                    &region.cell_at(c)[..region.dim()]
                )));
            }
            free[c] = false;
        }
    }
    let mut placements = fixed.to_vec();
    let mut nodes = 0u64;
    let mut mask = vec![false; region.volume()];
    for component in components(region, &free) {
        let remaining = config.budget.map(|b| b.saturating_sub(nodes));
        for &i in &component {
            mask[i] = true;
        }
        let rows = match config.engine {
            Engine::Auto if estimate_matrix(geom, &component, allowed) <= DLX_NODE_LIMIT => {
                Some(geom.placements_within(&component, &mask, allowed))
            }
            Engine::Auto => geom.placements_capped(&component, &mask, allowed, DLX_NODE_LIMIT),
            Engine::Dlx => Some(geom.placements_within(&component, &mask, allowed)),
            Engine::Dense => None,
        };
        let (status, found, n) = match rows {
            Some(rows) => dlx::search(&component, &rows, remaining),
            None => dense::search(geom, &mask, allowed, remaining),
        };
        for &i in &component {
            mask[i] = false;
        }
        nodes += n;
        match status {
            SolveStatus::Solved => placements.extend(found),
            other => {
                return Ok(SolveOutcome {
                    status: other,
                    placements: Vec::new(),
                    nodes,
                })
            }
        }
    }
    for p in &mut placements {
        p.offset.truncate(region.dim());
    }
    Ok(SolveOutcome {
        status: SolveStatus::Solved,
        placements,
        nodes,
    })
}

/// Upper bound on the number of matrix entries for the masked subproblem.
fn estimate_matrix(geom: &Geometry, cells: &[usize], allowed: &[usize]) -> usize {
    let dim = geom.region.dim();
    let present = geom.projections(cells);
    let mut total = 0usize;
    for &k in allowed {
        let ext = geom.tiles[k].extents().expect("non-empty");
        let anchors: usize = (0..dim)
            .map(|a| {
                if geom.connected[k] {
                    geom.axis_range(a, &present[a], ext[a]).len()
                } else {
                    geom.full_range(a, ext[a]).len()
                }
            })
            .product::<usize>()
            .min(cells.len());
        total = total.saturating_add(anchors.saturating_mul(geom.tiles[k].len()));
    }
    total
}

/// Face-connected components of the free cells, each sorted, ordered by
/// smallest member.
fn components(region: &Region, free: &[bool]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; free.len()];
    let mut out = Vec::new();
    for start in 0..free.len() {
        if !free[start] || seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let c = region.cell_at(i);
            for n in neighbours(region.dim(), c) {
                if let Some(n) = region.normalize(n) {
                    let j = region.index(&n);
                    if free[j] && !seen[j] {
                        seen[j] = true;
                        comp.push(j);
                        queue.push_back(j);
                    }
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}
