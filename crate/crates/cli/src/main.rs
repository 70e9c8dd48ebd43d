//! `tileforge` command line front end.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tileforge::blocks3d::{atlas, audit_atlas_3d, Atlas3, Block3};
use tileforge::blocks4d::{audit_atlas_4d, check_complement_4d, Block4};
use tileforge::cover::{enumerate_placements, export_sat, solve_region, Engine, SolveConfig, SolveStatus};
use tileforge::manifest::{load_tile_dir, load_tileset, tiles_for_source, write_tileset};
use tileforge::reduction3d::assemble_witness_3d;
use tileforge::reduction4d::assemble_witness_4d;
use tileforge::render::{render, Format, RenderSpec, Source};
use tileforge::wang::{find_any_periodic_tiling, find_periodic_tiling, verify_tiling};
use tileforge::witness::{verify_witness, TilingWitness};
use tileforge::{Region, VoxelSet, WangTileSet, WangTiling};

#[derive(Parser)]
#[command(name = "tileforge", version, about = "Polycube tilings simulating Wang tiles")]
struct Cli {
    /// Print a single JSON object {"status", "data"} on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the polycube (dim 3) or polyhypercube (dim 4) tile set of a Wang set.
    Reduce {
        /// Lattice dimension, 3 or 4.
        #[arg(long)]
        dim: usize,
        /// Wang tile set JSON.
        #[arg(long)]
        wang: PathBuf,
        /// Output directory for the tiles and their manifest.
        #[arg(long)]
        out: PathBuf,
    },
    /// Build and verify a torus tiling from a periodic Wang tiling.
    Witness {
        /// Lattice dimension, 3 or 4.
        #[arg(long)]
        dim: usize,
        /// Wang tile set JSON.
        #[arg(long)]
        wang: PathBuf,
        /// Periodic Wang tiling; searched for when omitted.
        #[arg(long)]
        tiling: Option<PathBuf>,
        /// Largest period tried when searching for a tiling.
        #[arg(long, default_value_t = 4)]
        max_period: usize,
        /// Search node limit.
        #[arg(long)]
        budget: Option<u64>,
        /// Where to write the witness.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a witness covers its region exactly once.
    Verify {
        /// Witness JSON.
        #[arg(long)]
        witness: PathBuf,
        /// Tile directory; defaults to rebuilding the tiles named in the witness.
        #[arg(long)]
        tiles: Option<PathBuf>,
    },
    /// Search for an exact cover of a box or torus.
    Solve {
        /// `box:X,Y[,Z[,T]]` or `torus:X,Y[,Z[,T]]`.
        #[arg(long)]
        region: String,
        /// Tile directory.
        #[arg(long)]
        tiles: PathBuf,
        /// Witness file whose placements are kept fixed.
        #[arg(long)]
        fixed: Option<PathBuf>,
        /// Comma separated indices of the tiles that may be added.
        #[arg(long, value_delimiter = ',')]
        allow: Option<Vec<usize>>,
        /// Search node limit.
        #[arg(long)]
        budget: Option<u64>,
        /// Fix one placement at the origin per tile on an empty torus.
        #[arg(long)]
        symmetry: bool,
        /// Exact cover engine.
        #[arg(long, value_enum, default_value_t = EngineArg::Auto)]
        engine: EngineArg,
        /// Also write the instance as DIMACS CNF.
        #[arg(long)]
        sat: Option<PathBuf>,
        /// Where to write the witness when solved.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find a periodic tiling by a Wang set.
    WangSolve {
        /// Wang tile set JSON.
        #[arg(long)]
        wang: PathBuf,
        /// Horizontal period; together with --v restricts the search.
        #[arg(long)]
        h: Option<usize>,
        /// Vertical period.
        #[arg(long)]
        v: Option<usize>,
        /// Largest period tried.
        #[arg(long, default_value_t = 4)]
        max_period: usize,
        /// Where to write the tiling.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw layer diagrams.
    Render {
        /// Voxel file to draw.
        #[arg(long, conflicts_with_all = ["block", "tiles"])]
        input: Option<PathBuf>,
        /// Name of a block of the built-in three dimensional atlas.
        #[arg(long, conflicts_with = "tiles")]
        block: Option<String>,
        /// Tile directory written by `reduce`, used with --tile.
        #[arg(long, requires = "tile")]
        tiles: Option<PathBuf>,
        /// Tile name inside the directory, such as `encoder`.
        #[arg(long)]
        tile: Option<String>,
        /// 1 draws unit cells, 2 draws labelled blocks.
        #[arg(long, default_value_t = 1)]
        level: u8,
        /// Output syntax.
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
        /// Where to write the diagram; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the block atlases.
    AtlasAudit {
        /// Directory holding `3d/` and `4d/` atlas copies.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Auto,
    Dlx,
    Dense,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Svg,
}

/// What a subcommand produced.
struct Report {
    status: &'static str,
    code: u8,
    data: Value,
    /// Human readable output when `--json` is off.
    text: String,
}

impl Report {
    fn new(status: &'static str, code: u8, data: Value, text: impl Into<String>) -> Report {
        Report {
            status,
            code,
            data,
            text: text.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = run(&cli.command).unwrap_or_else(|e| {
        Report::new("error", 3, json!({ "message": format!("{e:#}") }), format!("error: {e:#}"))
    });
    if cli.json {
        println!("{}", json!({ "status": report.status, "data": report.data }));
    } else if report.code == 3 {
        eprintln!("{}", report.text);
    } else if !report.text.is_empty() {
        print!("{}", report.text);
        if !report.text.ends_with('\n') {
            println!();
        }
    }
    ExitCode::from(report.code)
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn tile_dir(dir: &Path) -> anyhow::Result<Vec<VoxelSet>> {
    load_tile_dir(dir).with_context(|| format!("cannot load tiles from {}", dir.display()))
}

fn solve_report(status: SolveStatus, data: Value, text: String) -> Report {
    match status {
        SolveStatus::Solved => Report::new("solved", 0, data, text),
        SolveStatus::Unsolvable => Report::new("unsolvable", 1, data, text),
        SolveStatus::BudgetExhausted => Report::new("budget-exhausted", 2, data, text),
    }
}

fn run(command: &Command) -> anyhow::Result<Report> {
    match command {
        Command::Reduce { dim, wang, out } => {
            let set = WangTileSet::from_json(&read(wang)?)?;
            let manifest = write_tileset(out, *dim, &set)?;
            let tiles: Vec<Value> = manifest
                .tiles
                .iter()
                .map(|t| json!({ "name": t.name, "file": t.file, "cells": t.cells }))
                .collect();
            let mut text = String::new();
            for t in &manifest.tiles {
                text += &format!("{:<12} {:>8} cells  {}\n", t.name, t.cells, t.file);
            }
            Ok(Report::new(
                "ok",
                0,
                json!({ "dim": dim, "wang_sha256": manifest.wang_sha256, "tiles": tiles }),
                text,
            ))
        }
        Command::Witness {
            dim,
            wang,
            tiling,
            max_period,
            budget,
            out,
        } => {
            let set = WangTileSet::from_json(&read(wang)?)?;
            let tiling = match tiling {
                Some(path) => WangTiling::from_json(&read(path)?)?,
                None => match find_any_periodic_tiling(&set, *max_period) {
                    Some(t) => t,
                    None => {
                        return Ok(Report::new(
                            "unsolvable",
                            1,
                            json!({ "max_period": max_period }),
                            format!("no periodic Wang tiling with periods up to {max_period}"),
                        ))
                    }
                },
            };
            let config = SolveConfig {
                budget: *budget,
                ..SolveConfig::default()
            };
            let witness = match dim {
                3 => assemble_witness_3d(&set, &tiling, &config)?.1,
                4 => assemble_witness_4d(&set, &tiling, &config)?.1,
                d => bail!("dimension must be 3 or 4, got {d}"),
            };
            let doc = witness.to_json();
            let data = json!({
                "region": witness.region,
                "placements": witness.placements.len(),
                "tiling": tiling,
            });
            let text = match out {
                Some(path) => {
                    write(path, &doc)?;
                    format!(
                        "{} placements on {}, written to {}",
                        witness.placements.len(),
                        witness.region,
                        path.display()
                    )
                }
                None => doc,
            };
            Ok(Report::new("ok", 0, data, text))
        }
        Command::Verify { witness, tiles } => {
            let w = TilingWitness::from_json(&read(witness)?)?;
            let tiles = match (tiles, &w.tileset) {
                (Some(dir), _) => tile_dir(dir)?,
                (None, Some(source)) => tiles_for_source(source)?,
                (None, None) => bail!("the witness names no tile set; pass --tiles"),
            };
            match verify_witness(&w.region, &tiles, &w.placements) {
                Ok(()) => Ok(Report::new(
                    "valid",
                    0,
                    json!({ "valid": true, "placements": w.placements.len() }),
                    format!("valid: {} placements cover {}", w.placements.len(), w.region),
                )),
                Err(e) => Ok(Report::new(
                    "invalid",
                    1,
                    json!({ "valid": false, "reason": e.to_string() }),
                    format!("invalid: {e}"),
                )),
            }
        }
        Command::Solve {
            region,
            tiles,
            fixed,
            allow,
            budget,
            symmetry,
            engine,
            sat,
            out,
        } => {
            let region = Region::parse(region)?;
            let tiles = tile_dir(tiles)?;
            let fixed = match fixed {
                Some(path) => TilingWitness::from_json(&read(path)?)?.placements,
                None => Vec::new(),
            };
            if let Some(path) = sat {
                if !fixed.is_empty() {
                    bail!("--sat describes the whole instance and cannot be combined with --fixed");
                }
                let mut instance = enumerate_placements(&region, &tiles)?;
                if let Some(allowed) = allow {
                    instance.placements.retain(|p| allowed.contains(&p.tile));
                }
                write(path, &export_sat(&instance))?;
            }
            let config = SolveConfig {
                budget: *budget,
                symmetry: *symmetry,
                engine: match engine {
                    EngineArg::Auto => Engine::Auto,
                    EngineArg::Dlx => Engine::Dlx,
                    EngineArg::Dense => Engine::Dense,
                },
                ..SolveConfig::default()
            };
            let outcome = solve_region(&region, &tiles, &fixed, allow.as_deref(), &config)?;
            let verdict = match outcome.status {
                SolveStatus::Solved => "solved",
                SolveStatus::Unsolvable => "unsolvable",
                SolveStatus::BudgetExhausted => "budget exhausted",
            };
            let mut text = format!("{verdict} after {} nodes", outcome.nodes);
            let mut data = json!({ "nodes": outcome.nodes });
            if outcome.status == SolveStatus::Solved {
                let witness = TilingWitness {
                    region: region.clone(),
                    placements: outcome.placements,
                    tileset: None,
                };
                data["placements"] = json!(witness.placements.len());
                match out {
                    Some(path) => write(path, &witness.to_json())?,
                    None => {
                        data["witness"] = serde_json::to_value(&witness)?;
                        text = witness.to_json();
                    }
                }
            }
            Ok(solve_report(outcome.status, data, text))
        }
        Command::WangSolve {
            wang,
            h,
            v,
            max_period,
            out,
        } => {
            let set = WangTileSet::from_json(&read(wang)?)?;
            let found = match (h, v) {
                (Some(h), Some(v)) => find_periodic_tiling(&set, *h, *v),
                (None, None) => find_any_periodic_tiling(&set, *max_period),
                _ => bail!("--h and --v go together"),
            };
            let Some(tiling) = found else {
                return Ok(Report::new(
                    "unsolvable",
                    1,
                    Value::Null,
                    "no periodic tiling in the searched periods",
                ));
            };
            verify_tiling(&set, &tiling)?;
            let doc = serde_json::to_string(&tiling)?;
            let text = match out {
                Some(path) => {
                    write(path, &doc)?;
                    format!("{}x{} tiling written to {}", tiling.h, tiling.v, path.display())
                }
                None => doc,
            };
            Ok(Report::new("solved", 0, serde_json::to_value(&tiling)?, text))
        }
        Command::Render {
            input,
            block,
            tiles,
            tile,
            level,
            format,
            out,
        } => {
            let format = match format {
                FormatArg::Text => Format::Text,
                FormatArg::Svg => Format::Svg,
            };
            let doc = match (input, block, tiles) {
                (Some(path), _, _) => {
                    let set = VoxelSet::parse_text(&read(path)?)?;
                    render(&RenderSpec {
                        source: Source::Voxels(&set),
                        level: *level,
                        format,
                    })?
                }
                (None, Some(name), _) => {
                    let kind = Block3::from_name(name).with_context(|| format!("unknown block {name:?}"))?;
                    render(&RenderSpec {
                        source: Source::Voxels(&atlas().get(kind).cells),
                        level: *level,
                        format,
                    })?
                }
                (None, None, Some(dir)) => {
                    let name = tile.as_deref().expect("clap requires --tile");
                    let (manifest, cells) =
                        load_tileset(dir).with_context(|| format!("cannot load tiles from {}", dir.display()))?;
                    let i = manifest
                        .tiles
                        .iter()
                        .position(|t| t.name == name)
                        .with_context(|| format!("no tile named {name:?}"))?;
                    let source = match (*level, &manifest.tiles[i].layout) {
                        (2, Some(layout)) => Source::Layout(layout),
                        _ => Source::Voxels(&cells[i]),
                    };
                    render(&RenderSpec {
                        source,
                        level: *level,
                        format,
                    })?
                }
                _ => bail!("pass --input, --block or --tiles with --tile"),
            };
            let text = match out {
                Some(path) => {
                    write(path, &doc)?;
                    format!("diagram written to {}", path.display())
                }
                None => doc,
            };
            Ok(Report::new("ok", 0, json!({ "bytes": text.len() }), text))
        }
        Command::AtlasAudit { dir } => {
            let mut problems = audit_atlas_3d(atlas());
            for (dent, bump) in Block4::PAIRS {
                if !check_complement_4d(dent, bump) {
                    problems.push(format!("{} and {} do not fill a hypercube", dent.name(), bump.name()));
                }
            }
            if let Some(dir) = dir {
                match Atlas3::from_dir(&dir.join("3d")) {
                    Ok(copy) => problems.extend(audit_atlas_3d(&copy)),
                    Err(e) => problems.push(format!("3d: {e}")),
                }
                for name in audit_atlas_4d(&dir.join("4d"))? {
                    problems.push(format!("4d/{name} differs from the generated block"));
                }
            }
            let text = if problems.is_empty() {
                "atlas consistent".to_string()
            } else {
                problems.join("\n")
            };
            let data = json!({ "problems": problems });
            Ok(if problems.is_empty() {
                Report::new("ok", 0, data, text)
            } else {
                Report::new("invalid", 1, data, text)
            })
        }
    }
}
