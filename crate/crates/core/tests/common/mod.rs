//! Oracles and fixtures shared by the integration tests. Nothing here calls
//! the solver under test.

#![allow(dead_code)]

use std::collections::HashMap;

use rand::Rng;
use tileforge::lattice::cell;
use tileforge::{Region, RegionKind, VoxelSet, WangTile, WangTileSet};

/// Three tiles over four colors with a 1x3 periodic tiling.
pub fn three_tiles() -> WangTileSet {
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

/// One tile whose east and west colors agree, tiling the plane alone.
pub fn coherent() -> WangTileSet {
    WangTileSet::new(2, vec![WangTile::new(0, 1, 0, 1)]).unwrap()
}

/// One tile whose east and west colors differ, so it tiles nothing.
pub fn mismatched() -> WangTileSet {
    WangTileSet::new(2, vec![WangTile::new(0, 0, 0, 1)]).unwrap()
}

/// Two tiles that alternate along each row.
pub fn alternating() -> WangTileSet {
    WangTileSet::new(2, vec![WangTile::new(0, 1, 0, 0), WangTile::new(0, 0, 0, 1)]).unwrap()
}

fn region_cells(region: &Region) -> Vec<Vec<i32>> {
    let mut out = vec![Vec::new()];
    for &e in &region.extents {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i32>| {
                (0..e).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

/// Every placement of every tile as a list of region cell numbers, found by
/// trying all translations that move the tile's first cell onto a region
/// cell.
pub fn naive_placements(region: &Region, tiles: &[VoxelSet]) -> Vec<(usize, Vec<usize>)> {
    let cells = region_cells(region);
    let number: HashMap<Vec<i32>, usize> = cells.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let dim = region.dim();
    let mut out = Vec::new();
    for (k, tile) in tiles.iter().enumerate() {
        let tcells: Vec<Vec<i32>> = tile.iter().map(|c| c[..dim].to_vec()).collect();
        let mut seen = std::collections::HashSet::new();
        for target in &cells {
            let shift: Vec<i32> = (0..dim).map(|a| target[a] - tcells[0][a]).collect();
            let mut covered = Vec::new();
            let mut ok = true;
            for c in &tcells {
                let mut p: Vec<i32> = (0..dim).map(|a| c[a] + shift[a]).collect();
                if region.kind == RegionKind::Torus {
                    for (a, v) in p.iter_mut().enumerate() {
                        *v = v.rem_euclid(region.extents[a]);
                    }
                }
                match number.get(&p) {
                    Some(&i) if !covered.contains(&i) => covered.push(i),
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                covered.sort_unstable();
                if seen.insert(covered.clone()) {
                    out.push((k, covered));
                }
            }
        }
    }
    out
}

/// Exhaustive exact cover search: the lowest uncovered cell must be covered
/// by some placement, tried in turn.
pub fn brute_force_tileable(region: &Region, tiles: &[VoxelSet]) -> bool {
    let placements = naive_placements(region, tiles);
    let n = region.volume();
    fn go(used: &mut Vec<bool>, placements: &[(usize, Vec<usize>)]) -> bool {
        let Some(first) = used.iter().position(|&u| !u) else {
            return true;
        };
        for (_, cells) in placements.iter().filter(|(_, c)| c.contains(&first)) {
            if cells.iter().all(|&i| !used[i]) {
                for &i in cells {
                    used[i] = true;
                }
                if go(used, placements) {
                    return true;
                }
                for &i in cells {
                    used[i] = false;
                }
            }
        }
        false
    }
    go(&mut vec![false; n], &placements)
}

/// Satisfiability of a DIMACS CNF text by DPLL with unit propagation.
pub fn dimacs_satisfiable(text: &str) -> bool {
    let mut vars = 0usize;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    for line in text.lines() {
        if line.starts_with('c') || line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p cnf ") {
            vars = rest.split_whitespace().next().unwrap().parse().unwrap();
            continue;
        }
        let lits: Vec<i32> = line.split_whitespace().map(|t| t.parse().unwrap()).collect();
        assert_eq!(lits.last(), Some(&0), "clause must end in 0");
        clauses.push(lits[..lits.len() - 1].to_vec());
    }
    fn value(assign: &[i8], lit: i32) -> i8 {
        let v = assign[lit.unsigned_abs() as usize];
        if lit > 0 {
            v
        } else {
            -v
        }
    }
    fn solve(clauses: &[Vec<i32>], assign: &mut [i8]) -> bool {
        loop {
            let mut unit = None;
            for c in clauses {
                if c.iter().any(|&l| value(assign, l) == 1) {
                    continue;
                }
                let open: Vec<i32> = c.iter().copied().filter(|&l| value(assign, l) == 0).collect();
                match open.len() {
                    0 => return false,
                    1 => {
                        unit = Some(open[0]);
                        break;
                    }
                    _ => {}
                }
            }
            match unit {
                Some(l) => assign[l.unsigned_abs() as usize] = if l > 0 { 1 } else { -1 },
                None => break,
            }
        }
        let Some(v) = (1..assign.len()).find(|&v| assign[v] == 0) else {
            return true;
        };
        for choice in [1i8, -1] {
            let mut next = assign.to_vec();
            next[v] = choice;
            if solve(clauses, &mut next) {
                return true;
            }
        }
        false
    }
    solve(&clauses, &mut vec![0; vars + 1])
}

/// A random face-connected tile of `size` cells in `dim` dimensions.
pub fn random_tile(rng: &mut impl Rng, dim: usize, size: usize) -> VoxelSet {
    let mut cells = vec![vec![0i32; dim]];
    while cells.len() < size {
        let base = cells[rng.gen_range(0..cells.len())].clone();
        let axis = rng.gen_range(0..dim);
        let mut next = base;
        next[axis] += if rng.gen_bool(0.5) { 1 } else { -1 };
        if !cells.contains(&next) {
            cells.push(next);
        }
    }
    VoxelSet::new(dim, cells.iter().map(|c| cell(c))).unwrap()
}

/// A random box or torus with at most `max_volume` cells.
pub fn random_region(rng: &mut impl Rng, dim: usize, max_volume: usize) -> Region {
    loop {
        let extents: Vec<i32> = (0..dim).map(|_| rng.gen_range(1..=6)).collect();
        let volume: i32 = extents.iter().product();
        if volume as usize <= max_volume && volume >= 2 {
            return if rng.gen_bool(0.5) {
                Region::boxed(&extents).unwrap()
            } else {
                Region::torus(&extents).unwrap()
            };
        }
    }
}
