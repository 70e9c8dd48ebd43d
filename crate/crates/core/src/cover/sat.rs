//! DIMACS CNF export of an exact cover instance.

use std::fmt::Write;

use super::{CoverInstance, Geometry};
use crate::lattice::cell;

/// Writes the instance as CNF: variable `i + 1` means placement `i` is used,
/// each cell gets one clause requiring some covering placement and one
/// binary clause per pair of covering placements. Comment lines map
/// variables back to placements.
pub fn export_sat(instance: &CoverInstance) -> String {
    let volume = instance.region.volume();
    let mut covering: Vec<Vec<usize>> = vec![Vec::new(); volume];
    if let Ok(geom) = Geometry::new(&instance.region, &instance.tiles) {
        for (i, p) in instance.placements.iter().enumerate() {
            if p.tile >= geom.tiles.len() {
                continue;
            }
            if let Some(cells) = geom.cells_of(p.tile, cell(&p.offset)) {
                for c in cells {
                    covering[c].push(i + 1);
                }
            }
        }
    }
    let clauses: usize = covering
        .iter()
        .map(|v| 1 + v.len() * v.len().saturating_sub(1) / 2)
        .sum();
    let mut out = String::new();
    let _ = writeln!(out, "c exact cover of {}", instance.region);
    for (i, p) in instance.placements.iter().enumerate() {
        let _ = writeln!(out, "c {} tile {} offset {:?}", i + 1, p.tile, p.offset);
    }
    let _ = writeln!(out, "p cnf {} {}", instance.placements.len(), clauses);
    for vars in &covering {
        for v in vars {
            let _ = write!(out, "{v} ");
        }
        out.push_str("0\n");
        for (j, a) in vars.iter().enumerate() {
            for b in &vars[j + 1..] {
                let _ = writeln!(out, "-{a} -{b} 0");
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::enumerate_placements;
    use crate::lattice::{Region, VoxelSet};

    #[test]
    fn domino_square() {
        let tiles = vec![
            VoxelSet::new(2, [cell(&[0, 0]), cell(&[1, 0])]).unwrap(),
            VoxelSet::new(2, [cell(&[0, 0]), cell(&[0, 1])]).unwrap(),
        ];
        let inst = enumerate_placements(&Region::boxed(&[2, 2]).unwrap(), &tiles).unwrap();
        let text = export_sat(&inst);
        assert!(text.contains("p cnf 4 8\n"));
        let clauses: Vec<&str> = text.lines().filter(|l| !l.starts_with('c') && !l.starts_with('p')).collect();
        assert_eq!(clauses.len(), 8);
        assert!(clauses.iter().all(|l| l.ends_with(" 0")));
    }
}
