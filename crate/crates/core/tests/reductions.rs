//! End-to-end checks of both reductions against independently computed
//! volumes and exhaustive verification.

mod common;

use std::collections::HashSet;

use tileforge::blocks3d::{make_block, Block3};
use tileforge::blocks4d::{make_block_4d, Block4};
use tileforge::cover::{SolveConfig, SolveStatus};
use tileforge::manifest::{build_tiles, tiles_for_source};
use tileforge::reduction3d::{
    assemble_witness_3d, build_tileset_3d, encoder_layout, linker_fits_3d, selector_layout, Layout, FILLER,
    FILLER_PLUS, LINKER,
};
use tileforge::reduction4d::{
    assemble_witness_4d, assemble_witness_4d_slices, build_tileset_4d, encoder_layout_4d, linker_layout_4d,
    selector_layout_4d, time_tunnel_fixture,
};
use tileforge::wang::{find_any_periodic_tiling, find_periodic_tiling};
use tileforge::witness::{verify_witness, TilingWitness};

/// Volume of a 3D layout from the atlas sizes of its labelled blocks.
fn layout_volume_3d(layout: &Layout) -> usize {
    layout
        .cells
        .iter()
        .map(|c| match c.label.as_str() {
            "" => 512,
            "zZ" => make_block(Block3::Z).len() + make_block(Block3::ZBump).len() - 512,
            name => make_block(Block3::from_name(name).unwrap()).len(),
        })
        .sum()
}

/// Volume of a 4D layout: plain cells are full hypercubes, half blocks
/// contribute their own size.
fn layout_volume_4d(layout: &Layout) -> usize {
    layout
        .cells
        .iter()
        .map(|c| {
            let name = c.label.trim_end_matches("^*").trim_end_matches("_*");
            match name {
                "" => 4096,
                n => make_block_4d(Block4::from_name(n).unwrap()).len(),
            }
        })
        .sum()
}

#[test]
fn tile_volumes_agree_with_layout_arithmetic() {
    for set in [common::coherent(), common::alternating(), common::three_tiles()] {
        let ts3 = build_tileset_3d(&set).unwrap();
        assert_eq!(ts3.tiles[0].len(), layout_volume_3d(&encoder_layout(&set).unwrap()));
        assert_eq!(ts3.tiles[1].len(), layout_volume_3d(&selector_layout(&set).unwrap()));
        let ts4 = build_tileset_4d(&set).unwrap();
        assert_eq!(ts4.tiles[0].len(), layout_volume_4d(&encoder_layout_4d(&set).unwrap()));
        assert_eq!(ts4.tiles[1].len(), layout_volume_4d(&selector_layout_4d(&set).unwrap()));
        assert_eq!(ts4.tiles[2].len(), layout_volume_4d(&linker_layout_4d()));
    }
}

#[test]
fn frozen_tile_volumes() {
    let sizes = |dim| -> Vec<usize> {
        build_tiles(dim, &common::three_tiles())
            .unwrap()
            .iter()
            .map(|t| t.cells.len())
            .collect()
    };
    assert_eq!(sizes(3), [53376, 37504, 1216, 128, 192]);
    assert_eq!(sizes(4), [373968, 321328, 13056, 2432]);
}

#[test]
fn linker_is_c_bump_plus_d_plus() {
    let ts = build_tileset_3d(&common::coherent()).unwrap();
    let expected = make_block(Block3::CBump).len() + make_block(Block3::DPlus).len();
    assert_eq!(ts.tiles[LINKER].len(), expected);
    assert_eq!(ts.tiles[FILLER], make_block(Block3::F));
    assert_eq!(ts.tiles[FILLER_PLUS], make_block(Block3::FPlus));
}

#[test]
fn every_linker_pairing_behaves() {
    let config = SolveConfig::default();
    for south in [Block3::C, Block3::CMinus] {
        for north in [Block3::D, Block3::DMinus] {
            let fits = (south == Block3::C) == (north == Block3::DMinus);
            let want = if fits { SolveStatus::Solved } else { SolveStatus::Unsolvable };
            assert_eq!(linker_fits_3d(south, north, &config).unwrap(), want);
        }
    }
}

#[test]
fn three_tile_set_has_only_three_row_tilings() {
    let set = common::three_tiles();
    for h in 1..=4 {
        for v in 1..=4 {
            assert_eq!(find_periodic_tiling(&set, h, v).is_some(), v == 3, "{h}x{v}");
        }
    }
    let t = find_any_periodic_tiling(&set, 4).unwrap();
    assert_eq!(t.assignment, vec![vec![0], vec![2], vec![1]]);
}

#[test]
fn three_tile_set_witnesses_in_three_and_four_dimensions() {
    let set = common::three_tiles();
    let tiling = find_periodic_tiling(&set, 1, 3).unwrap();
    let config = SolveConfig::default();
    let (ts, w) = assemble_witness_3d(&set, &tiling, &config).unwrap();
    assert_eq!(w.region.extents, [192, 384, 24]);
    assert_eq!(w.placements.len(), 396);
    verify_witness(&w.region, &ts.tiles, &w.placements).unwrap();
    let (ts, w) = assemble_witness_4d(&set, &tiling, &config).unwrap();
    assert_eq!(w.region.extents, [192, 384, 24, 8]);
    verify_witness(&w.region, &ts.tiles, &w.placements).unwrap();
    let back = TilingWitness::from_json(&w.to_json()).unwrap();
    let rebuilt = tiles_for_source(back.tileset.as_ref().unwrap()).unwrap();
    verify_witness(&back.region, &rebuilt, &back.placements).unwrap();
}

#[test]
fn alternating_set_witnesses() {
    let set = common::alternating();
    let tiling = find_periodic_tiling(&set, 2, 1).unwrap();
    let config = SolveConfig::default();
    let (_, w3) = assemble_witness_3d(&set, &tiling, &config).unwrap();
    let (_, w4) = assemble_witness_4d(&set, &tiling, &config).unwrap();
    assert_eq!(w3.region.extents, [96, 192, 16]);
    assert_eq!(w4.region.extents, [96, 192, 16, 8]);
    assert_eq!(w3.placements.len(), 64);
}

#[test]
fn consecutive_slices_repeat() {
    let set = common::coherent();
    let tiling = find_periodic_tiling(&set, 1, 1).unwrap();
    let (ts, w) = assemble_witness_4d_slices(&set, &tiling, 2, &SolveConfig::default()).unwrap();
    verify_witness(&w.region, &ts.tiles, &w.placements).unwrap();
    let all: HashSet<(usize, Vec<i32>)> = w.placements.iter().map(|p| (p.tile, p.offset.clone())).collect();
    for (tile, off) in &all {
        let mut shifted = off.clone();
        shifted[3] = (shifted[3] + 8).rem_euclid(16);
        assert!(all.contains(&(*tile, shifted)), "tile {tile} at {off:?} has no copy one slice later");
    }
}

#[test]
fn time_tunnel_fixture_uses_one_linker_when_phases_agree() {
    use tileforge::blocks4d::Phase;
    use tileforge::cover::solve_region;
    for phase in [Phase::Former, Phase::Latter] {
        let (region, tiles, fixed) = time_tunnel_fixture(phase, phase).unwrap();
        let out = solve_region(&region, &tiles, &fixed, Some(&[2, 3]), &SolveConfig::default()).unwrap();
        assert_eq!(out.status, SolveStatus::Solved);
        let linkers = out.placements.iter().filter(|p| p.tile == 2).count();
        let fillers = out.placements.iter().filter(|p| p.tile == 3).count();
        assert_eq!((linkers, fillers), (1, 0));
    }
}
