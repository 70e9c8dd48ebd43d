//! Building block atlases in three and four dimensions.

use std::path::PathBuf;

use tileforge::blocks3d::{atlas, audit_atlas_3d, host_block, make_block, match_exclusivity, Atlas3, Block3};
use tileforge::blocks4d::{audit_atlas_4d, make_block_4d, Block4};
use tileforge::VoxelSet;

fn atlas_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("atlas")
}

fn family(b: Block3) -> char {
    b.name().chars().next().unwrap().to_ascii_lowercase()
}

#[test]
fn every_block_is_connected_and_canonical() {
    for b in Block3::ALL {
        let cells = make_block(b);
        assert!(cells.is_connected(), "{}", b.name());
        assert!(cells.is_canonical(), "{}", b.name());
    }
    for b in Block4::ALL {
        assert!(make_block_4d(b).is_connected(), "{}", b.name());
    }
}

#[test]
fn dents_accept_only_their_own_family() {
    let dents: Vec<Block3> = Block3::ALL.into_iter().filter(|b| b.is_dent()).collect();
    let bumps: Vec<Block3> = Block3::ALL.into_iter().filter(|b| b.is_bump()).collect();
    for &d in &dents {
        for &b in &bumps {
            let fits = match_exclusivity(&host_block(d), &host_block(b));
            assert_eq!(fits, family(d) == family(b), "{} with {}", d.name(), b.name());
        }
    }
}

#[test]
fn checked_in_atlases_pass_their_audits() {
    let copy = Atlas3::from_dir(&atlas_dir().join("3d")).unwrap();
    assert!(audit_atlas_3d(&copy).is_empty());
    assert!(audit_atlas_3d(atlas()).is_empty());
    assert_eq!(audit_atlas_4d(&atlas_dir().join("4d")).unwrap(), Vec::<String>::new());
}

#[test]
fn four_dimensional_atlas_files_hold_the_blocks() {
    for b in Block4::ALL {
        let name = tileforge::blocks4d::atlas_file_name(b);
        let text = std::fs::read_to_string(atlas_dir().join("4d").join(&name)).unwrap();
        let cells = VoxelSet::parse_text(&text).unwrap();
        assert_eq!(cells.dim(), 4);
        assert_eq!(cells, make_block_4d(b).canonicalize().unwrap().0, "{name}");
    }
}

#[test]
fn filler_plus_end_slabs_are_full() {
    let f = make_block(Block3::FPlus);
    let (lo, hi) = f.bounds().unwrap();
    for z in [lo[2], hi[2]] {
        let slab = f.iter().filter(|c| c[2] == z).count();
        assert_eq!(slab, 8);
    }
}
