//! Checked-in layer diagrams. Run with `UPDATE_GOLDEN=1` to rewrite them
//! after an intentional change to the renderer.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Deserialize;
use tileforge::blocks3d::{atlas, Block3};
use tileforge::reduction3d::{encoder_layout, linker_layout, selector_layout};
use tileforge::reduction4d::{encoder_layout_4d, linker_layout_4d, selector_layout_4d};
use tileforge::render::{render, text_panel_counts, Format, RenderSpec, Source};
use tileforge::{WangTile, WangTileSet};

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn check(rel: &str, actual: &str) {
    let path = golden_dir().join(rel);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(expected == actual, "{rel} differs from the rendered diagram");
}

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
fn atlas_level_one_diagrams_are_stable() {
    for block in atlas().blocks() {
        for (format, ext) in [(Format::Text, "txt"), (Format::Svg, "svg")] {
            let spec = RenderSpec {
                source: Source::Voxels(&block.cells),
                level: 1,
                format,
            };
            let doc = render(&spec).unwrap();
            check(&format!("level1/{}.{ext}", block.kind.file_stem()), &doc);
        }
    }
}

#[derive(Deserialize)]
struct Digitized {
    counts: Vec<usize>,
}

#[test]
fn atlas_diagrams_match_digitized_layer_counts() {
    let text = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/layer_counts.json")).unwrap();
    let digitized: BTreeMap<String, Digitized> = serde_json::from_str(&text).unwrap();
    assert!(digitized.len() >= 9);
    for (name, entry) in digitized {
        let kind = Block3::from_name(&name).unwrap();
        let path = golden_dir().join(format!("level1/{}.txt", kind.file_stem()));
        let diagram = std::fs::read_to_string(path).unwrap();
        let counts: Vec<usize> = text_panel_counts(&diagram).into_iter().filter(|&n| n > 0).collect();
        assert_eq!(counts, entry.counts, "layer counts of {name}");
    }
}

#[test]
fn tile_level_two_diagrams_are_stable() {
    let set = three_tiles();
    let layouts = [
        ("encoder_3d", encoder_layout(&set).unwrap()),
        ("selector_3d", selector_layout(&set).unwrap()),
        ("linker_3d", linker_layout()),
        ("encoder_4d", encoder_layout_4d(&set).unwrap()),
        ("selector_4d", selector_layout_4d(&set).unwrap()),
        ("linker_4d", linker_layout_4d()),
    ];
    for (name, layout) in &layouts {
        for (format, ext) in [(Format::Text, "txt"), (Format::Svg, "svg")] {
            let spec = RenderSpec {
                source: Source::Layout(layout),
                level: 2,
                format,
            };
            check(&format!("level2/{name}.{ext}"), &render(&spec).unwrap());
        }
    }
}

#[test]
fn encoder_diagram_has_three_six_by_six_panels() {
    let layout = encoder_layout(&three_tiles()).unwrap();
    let spec = RenderSpec {
        source: Source::Layout(&layout),
        level: 2,
        format: Format::Text,
    };
    let doc = render(&spec).unwrap();
    let panels: Vec<&str> = doc.split("\n\n").collect();
    assert_eq!(panels.len(), 3);
    for p in panels {
        let rows: Vec<&str> = p.lines().skip(1).collect();
        assert_eq!(rows.len(), 6);
        assert!(rows.iter().all(|r| r.split_whitespace().count() == 6));
    }
}
