//! Wang tiles with colored edges, periodic tilings of the plane, and the
//! binary color code used by the polycube encoders.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One Wang tile given by the colors of its north, east, south and west
/// edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WangTile {
    /// North edge color.
    pub n: u32,
    /// East edge color.
    pub e: u32,
    /// South edge color.
    pub s: u32,
    /// West edge color.
    pub w: u32,
}

impl WangTile {
    /// Convenience constructor in `n, e, s, w` order.
    pub const fn new(n: u32, e: u32, s: u32, w: u32) -> Self {
        WangTile { n, e, s, w }
    }
}

/// A finite set of Wang tiles over the colors `0..q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WangTileSet {
    /// Number of colors.
    pub q: u32,
    /// The tiles, indexed from zero.
    pub tiles: Vec<WangTile>,
    /// Optional human readable color names.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl WangTileSet {
    /// Checked constructor.
    pub fn new(q: u32, tiles: Vec<WangTile>) -> Result<Self> {
        let set = WangTileSet {
            q,
            tiles,
            labels: None,
        };
        set.validate()?;
        Ok(set)
    }

    /// Number of tiles, written `p` elsewhere in the crate.
    pub fn p(&self) -> usize {
        self.tiles.len()
    }

    /// Bits per color: `max(1, ceil(log2 q))`.
    pub fn t(&self) -> usize {
        color_bits(self.q)
    }

    /// Rejects empty sets, `q = 0`, colors outside `0..q` and label lists of
    /// the wrong length.
    pub fn validate(&self) -> Result<()> {
        if self.tiles.is_empty() {
            return Err(Error::Wang("tile set is empty".into()));
        }
        if self.q == 0 {
            return Err(Error::Wang("number of colors must be positive".into()));
        }
        for (i, tile) in self.tiles.iter().enumerate() {
            for (edge, c) in [("n", tile.n), ("e", tile.e), ("s", tile.s), ("w", tile.w)] {
                if c >= self.q {
                    return Err(Error::Wang(format!(
                        "tile {i} edge {edge} has color {c} outside 0..{}",
                        self.q
                    )));
                }
            }
        }
        if let Some(labels) = &self.labels {
            if labels.len() != self.q as usize {
                return Err(Error::Wang(format!(
                    "{} labels given for {} colors",
                    labels.len(),
                    self.q
                )));
            }
        }
        Ok(())
    }

    /// Parses and validates the JSON form.
    pub fn from_json(text: &str) -> Result<Self> {
        let set: WangTileSet = serde_json::from_str(text)?;
        set.validate()?;
        Ok(set)
    }
}

/// Bits needed per color for `q` colors: `max(1, ceil(log2 q))`.
pub fn color_bits(q: u32) -> usize {
    let mut t = 0;
    while (1u64 << t) < q as u64 {
        t += 1;
    }
    t.max(1)
}

/// Big-endian binary code of `color` in exactly `t` bits.
pub fn encode_color(color: u32, t: usize) -> Result<Vec<u8>> {
    if t < 64 && (color as u64) >> t != 0 {
        return Err(Error::Wang(format!("color {color} does not fit in {t} bits")));
    }
    Ok((0..t)
        .rev()
        .map(|i| if i < 32 { ((color >> i) & 1) as u8 } else { 0 })
        .collect())
}

/// A periodic tiling of the plane: tile `assignment[y][x]` sits at `(x, y)`
/// and the pattern repeats with period `h` eastward and `v` northward.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WangTiling {
    /// Horizontal period.
    pub h: usize,
    /// Vertical period.
    pub v: usize,
    /// Rows of tile indices, southernmost row first.
    pub assignment: Vec<Vec<usize>>,
}

impl WangTiling {
    /// Tile index at `(x, y)`, with both coordinates taken periodically.
    pub fn tile_at(&self, x: i64, y: i64) -> usize {
        let yy = y.rem_euclid(self.v as i64) as usize;
        let xx = x.rem_euclid(self.h as i64) as usize;
        self.assignment[yy][xx]
    }

    /// Parses the JSON form without checking it against a tile set.
    pub fn from_json(text: &str) -> Result<Self> {
        let tiling: WangTiling = serde_json::from_str(text)?;
        tiling.check_shape()?;
        Ok(tiling)
    }

    fn check_shape(&self) -> Result<()> {
        if self.h == 0 || self.v == 0 {
            return Err(Error::Wang("periods must be positive".into()));
        }
        if self.assignment.len() != self.v || self.assignment.iter().any(|r| r.len() != self.h) {
            return Err(Error::Wang(format!(
                "assignment must have {} rows of {} entries",
                self.v, self.h
            )));
        }
        Ok(())
    }
}

/// Checks that every adjacent pair of tiles agrees on its shared edge.
pub fn verify_tiling(set: &WangTileSet, tiling: &WangTiling) -> Result<()> {
    tiling.check_shape()?;
    for (y, row) in tiling.assignment.iter().enumerate() {
        for (x, &k) in row.iter().enumerate() {
            let tile = set
                .tiles
                .get(k)
                .ok_or_else(|| Error::Wang(format!("tile index {k} at ({x}, {y}) out of range")))?;
            let east = set.tiles[tiling.tile_at(x as i64 + 1, y as i64)];
            let north = set.tiles[tiling.tile_at(x as i64, y as i64 + 1)];
            if tile.e != east.w {
                return Err(Error::Wang(format!(
                    "east edge of ({x}, {y}) has color {} but its neighbour shows {}",
                    tile.e, east.w
                )));
            }
            if tile.n != north.s {
                return Err(Error::Wang(format!(
                    "north edge of ({x}, {y}) has color {} but its neighbour shows {}",
                    tile.n, north.s
                )));
            }
        }
    }
    Ok(())
}

/// Searches for a tiling with periods exactly `(h, v)`.
///
/// Cells are filled row by row from the south-west corner and tiles are
/// tried in ascending index order, so the first tiling found is
/// lexicographically smallest in that fill order.
pub fn find_periodic_tiling(set: &WangTileSet, h: usize, v: usize) -> Option<WangTiling> {
    if h == 0 || v == 0 || set.validate().is_err() {
        return None;
    }
    let mut grid = vec![usize::MAX; h * v];
    if fill(set, h, v, 0, &mut grid) {
        let assignment = grid.chunks(h).map(|r| r.to_vec()).collect();
        Some(WangTiling { h, v, assignment })
    } else {
        None
    }
}

fn fill(set: &WangTileSet, h: usize, v: usize, pos: usize, grid: &mut [usize]) -> bool {
    if pos == h * v {
        return true;
    }
    let (x, y) = (pos % h, pos / h);
    for (k, tile) in set.tiles.iter().enumerate() {
        if x > 0 && set.tiles[grid[pos - 1]].e != tile.w {
            continue;
        }
        if y > 0 && set.tiles[grid[pos - h]].n != tile.s {
            continue;
        }
        if x == h - 1 && tile.e != set.tiles[if x == 0 { k } else { grid[y * h] }].w {
            continue;
        }
        if y == v - 1 && tile.n != set.tiles[if y == 0 { k } else { grid[x] }].s {
            continue;
        }
        grid[pos] = k;
        if fill(set, h, v, pos + 1, grid) {
            return true;
        }
    }
    grid[pos] = usize::MAX;
    false
}

/// Tries all period pairs with `h, v <= max_period`, ordered by area and
/// then by `h`, and returns the first tiling found.
pub fn find_any_periodic_tiling(set: &WangTileSet, max_period: usize) -> Option<WangTiling> {
    let mut pairs: Vec<(usize, usize)> = (1..=max_period)
        .flat_map(|h| (1..=max_period).map(move |v| (h, v)))
        .collect();
    pairs.sort_by_key(|&(h, v)| (h * v, h));
    pairs
        .into_iter()
        .find_map(|(h, v)| find_periodic_tiling(set, h, v))
}
