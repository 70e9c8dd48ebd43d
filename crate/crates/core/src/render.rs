//! Layer diagrams in plain text and SVG.
//!
//! A level-1 diagram draws every unit cell of a voxel set, one panel per
//! `z` layer (and, in four dimensions, one row of panels per `t` frame).
//! A level-2 diagram draws a block layout, one square per functional cube
//! labelled with its block name. Panels run from the bottom layer upward and
//! rows are printed north first, so the page looks like a map.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::lattice::VoxelSet;
use crate::reduction3d::Layout;

/// Side of one grid cell in SVG output, in pixels.
pub const CELL_PX: i32 = 16;
/// Fill of occupied cells.
pub const OCCUPIED_FILL: &str = "#cccccc";
/// Fill of vacant cells.
pub const VACANT_FILL: &str = "#ffffff";

const GAP_PX: i32 = 16;
const TITLE_PX: i32 = 20;

/// Output syntax.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    /// Character grid, `#` for occupied and `.` for vacant cells.
    Text,
    /// Standalone SVG document.
    Svg,
}

/// What is drawn.
#[derive(Clone, Copy, Debug)]
pub enum Source<'a> {
    /// Unit cells of a three or four dimensional set.
    Voxels(&'a VoxelSet),
    /// Labelled block cells.
    Layout(&'a Layout),
}

/// A diagram request.
#[derive(Clone, Copy, Debug)]
pub struct RenderSpec<'a> {
    /// The drawn object.
    pub source: Source<'a>,
    /// 1 for unit cells, 2 for blocks.
    pub level: u8,
    /// Output syntax.
    pub format: Format,
}

/// One grid of the diagram.
struct Panel {
    title: String,
    /// Row index in the page layout, used for the frames of a 4D set.
    row: usize,
    width: i32,
    height: i32,
    /// Token per cell indexed `[y][x]`, `None` when vacant.
    cells: Vec<Vec<Option<String>>>,
}

/// Draws the requested diagram.
pub fn render(spec: &RenderSpec) -> Result<String> {
    let panels = match (spec.level, spec.source) {
        (1, Source::Voxels(set)) => voxel_panels(set)?,
        (2, Source::Layout(layout)) => layout_panels(layout),
        (2, Source::Voxels(_)) => {
            return Err(Error::Render("level-2 diagrams need block annotations".into()))
        }
        (1, Source::Layout(_)) => {
            return Err(Error::Render("level-1 diagrams need unit cells".into()))
        }
        (l, _) => return Err(Error::Render(format!("unknown level {l}"))),
    };
    Ok(match spec.format {
        Format::Text => text(&panels, spec.level),
        Format::Svg => svg(&panels, spec.level),
    })
}

fn voxel_panels(set: &VoxelSet) -> Result<Vec<Panel>> {
    let dim = set.dim();
    if dim != 3 && dim != 4 {
        return Err(Error::Render(format!("layer diagrams need 3 or 4 dimensions, got {dim}")));
    }
    let (lo, hi) = set.bounds()?;
    let width = hi[0] - lo[0] + 1;
    let height = hi[1] - lo[1] + 1;
    let frames = if dim == 4 { lo[3]..=hi[3] } else { 0..=0 };
    let mut panels = Vec::new();
    for (row, t) in frames.enumerate() {
        for (layer, z) in (lo[2]..=hi[2]).enumerate() {
            let mut cells = vec![vec![None; width as usize]; height as usize];
            for c in set.iter().filter(|c| c[2] == z && (dim == 3 || c[3] == t)) {
                cells[(c[1] - lo[1]) as usize][(c[0] - lo[0]) as usize] = Some("#".to_string());
            }
            let title = if dim == 4 {
                format!("frame {} layer {}", row + 1, layer + 1)
            } else {
                format!("layer {}", layer + 1)
            };
            panels.push(Panel {
                title,
                row,
                width,
                height,
                cells,
            });
        }
    }
    Ok(panels)
}

fn layout_panels(layout: &Layout) -> Vec<Panel> {
    let [w, h, d] = layout.extents;
    (0..d)
        .map(|z| {
            let mut cells = vec![vec![None; w as usize]; h as usize];
            for c in layout.cells.iter().filter(|c| c.cell[2] == z) {
                cells[c.cell[1] as usize][c.cell[0] as usize] = Some(c.label.clone());
            }
            Panel {
                title: format!("layer {}", z + 1),
                row: 0,
                width: w,
                height: h,
                cells,
            }
        })
        .collect()
}

fn text(panels: &[Panel], level: u8) -> String {
    let token = |cell: &Option<String>| match cell {
        None => ".".to_string(),
        Some(l) if l.is_empty() || level == 1 => "#".to_string(),
        Some(l) => l.clone(),
    };
    let mut out = String::new();
    for (i, panel) in panels.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&panel.title);
        out.push('\n');
        let width = panel
            .cells
            .iter()
            .flatten()
            .map(|c| token(c).chars().count())
            .max()
            .unwrap_or(1);
        for row in panel.cells.iter().rev() {
            let line: Vec<String> = row.iter().map(|c| format!("{:<width$}", token(c))).collect();
            let sep = if level == 1 { "" } else { " " };
            out.push_str(line.join(sep).trim_end());
            out.push('\n');
        }
    }
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn svg(panels: &[Panel], level: u8) -> String {
    let rows = panels.iter().map(|p| p.row).max().unwrap_or(0) + 1;
    let mut col_in_row = vec![0i32; rows];
    let mut placed = Vec::with_capacity(panels.len());
    let cell_w = panels.iter().map(|p| p.width).max().unwrap_or(1);
    let cell_h = panels.iter().map(|p| p.height).max().unwrap_or(1);
    let step_x = cell_w * CELL_PX + GAP_PX;
    let step_y = cell_h * CELL_PX + TITLE_PX + GAP_PX;
    for p in panels {
        placed.push((col_in_row[p.row] * step_x, p.row as i32 * step_y));
        col_in_row[p.row] += 1;
    }
    let columns = col_in_row.iter().copied().max().unwrap_or(1);
    let width = columns * step_x - GAP_PX;
    let height = rows as i32 * step_y - GAP_PX;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    for (panel, &(px, py)) in panels.iter().zip(&placed) {
        let _ = writeln!(
            out,
            r#"<text x="{px}" y="{}" font-family="sans-serif" font-size="12">{}</text>"#,
            py + 14,
            escape(&panel.title)
        );
        for (y, row) in panel.cells.iter().enumerate() {
            let ry = py + TITLE_PX + (panel.height - 1 - y as i32) * CELL_PX;
            for (x, cell) in row.iter().enumerate() {
                let rx = px + x as i32 * CELL_PX;
                let fill = if cell.is_some() { OCCUPIED_FILL } else { VACANT_FILL };
                let _ = writeln!(
                    out,
                    r##"<rect x="{rx}" y="{ry}" width="{CELL_PX}" height="{CELL_PX}" fill="{fill}" stroke="#000000" stroke-width="0.5"/>"##
                );
                if let (2, Some(label)) = (level, cell) {
                    if !label.is_empty() {
                        let _ = writeln!(
                            out,
                            r#"<text x="{}" y="{}" font-family="serif" font-size="8" text-anchor="middle">{}</text>"#,
                            rx + CELL_PX / 2,
                            ry + CELL_PX / 2 + 3,
                            escape(label)
                        );
                    }
                }
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Occupied cells per panel of a text diagram, in panel order.
pub fn text_panel_counts(text: &str) -> Vec<usize> {
    let mut counts = Vec::new();
    for block in text.split("\n\n") {
        let mut lines = block.lines();
        if lines.next().is_none() {
            continue;
        }
        counts.push(
            lines
                .flat_map(|l| l.split_whitespace())
                .map(|tok| {
                    if tok.chars().all(|c| c == '#' || c == '.') {
                        tok.matches('#').count()
                    } else {
                        1
                    }
                })
                .sum(),
        );
    }
    counts
}
