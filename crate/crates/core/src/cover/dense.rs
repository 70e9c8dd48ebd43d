//! Algorithm X without an explicit matrix.
//!
//! The free cells live in a periodic grid. For a box region the grid is the
//! box padded on the high side of each axis by one less than the largest
//! tile extent, with the padding permanently occupied, so no valid placement
//! can wrap. At every node the engine computes, for each tile, the set of
//! offsets whose translate avoids all occupied cells (a correlation of the
//! occupancy with the tile) and then the number of valid placements covering
//! each cell (a convolution of those offset sets with the tiles). Both are
//! evaluated with fast Fourier transforms. The branching order matches the
//! dancing-links engine exactly.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::{Geometry, Placement, SolveStatus};
use crate::lattice::{Cell, RegionKind};

type C64 = Complex<f64>;

/// Multidimensional transform on a row-major grid (last axis contiguous).
struct NdFft {
    dims: Vec<usize>,
    forward: Vec<Arc<dyn Fft<f64>>>,
    inverse: Vec<Arc<dyn Fft<f64>>>,
    len: usize,
}

impl NdFft {
    fn new(dims: &[usize]) -> NdFft {
        let mut planner = FftPlanner::new();
        NdFft {
            dims: dims.to_vec(),
            forward: dims.iter().map(|&d| planner.plan_fft_forward(d)).collect(),
            inverse: dims.iter().map(|&d| planner.plan_fft_inverse(d)).collect(),
            len: dims.iter().product(),
        }
    }

    fn run(&self, data: &mut [C64], plans: &[Arc<dyn Fft<f64>>]) {
        let mut stride = self.len;
        for (axis, &d) in self.dims.iter().enumerate() {
            stride /= d;
            if d == 1 {
                continue;
            }
            let plan = &plans[axis];
            if stride == 1 {
                plan.process(data);
                continue;
            }
            let block = d * stride;
            let mut line = vec![C64::default(); d];
            for base in (0..self.len).step_by(block) {
                for inner in 0..stride {
                    for (j, v) in line.iter_mut().enumerate() {
                        *v = data[base + inner + j * stride];
                    }
                    plan.process(&mut line);
                    for (j, v) in line.iter().enumerate() {
                        data[base + inner + j * stride] = *v;
                    }
                }
            }
        }
    }

    fn forward(&self, data: &mut [C64]) {
        self.run(data, &self.forward);
    }

    fn inverse(&self, data: &mut [C64]) {
        self.run(data, &self.inverse);
        let scale = 1.0 / self.len as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }
}

struct Dense<'a> {
    geom: &'a Geometry,
    dims: Vec<usize>,
    fft: NdFft,
    /// Allowed injective tiles with their cells reduced into the grid and
    /// their spectra.
    tiles: Vec<(usize, Vec<usize>, Vec<C64>)>,
    /// Grid index of every region cell, in region order.
    grid_of: Vec<usize>,
    occupied: Vec<bool>,
    budget: Option<u64>,
    nodes: u64,
    stack: Vec<(usize, Cell)>,
}

enum Step {
    Found,
    Exhausted,
    OutOfBudget,
}

impl Dense<'_> {
    fn grid_index(&self, c: &Cell) -> usize {
        let mut i = 0usize;
        for (a, &d) in self.dims.iter().enumerate() {
            i = i * d + c[a].rem_euclid(d as i32) as usize;
        }
        i
    }

    fn grid_cell(&self, mut i: usize) -> Cell {
        let mut c = [0; 4];
        for a in (0..self.dims.len()).rev() {
            c[a] = (i % self.dims[a]) as i32;
            i /= self.dims[a];
        }
        c
    }

    /// Valid offsets per tile and placement counts per grid cell.
    fn analyse(&self) -> (Vec<Vec<bool>>, Vec<usize>) {
        let n = self.fft.len;
        let mut occ: Vec<C64> = self
            .occupied
            .iter()
            .map(|&o| C64::new(if o { 1.0 } else { 0.0 }, 0.0))
            .collect();
        self.fft.forward(&mut occ);
        let mut valid = Vec::with_capacity(self.tiles.len());
        let mut acc = vec![C64::default(); n];
        let mut buf = vec![C64::default(); n];
        for (_, _, spectrum) in &self.tiles {
            for ((b, o), t) in buf.iter_mut().zip(&occ).zip(spectrum) {
                *b = o * t.conj();
            }
            self.fft.inverse(&mut buf);
            let v: Vec<bool> = buf.iter().map(|z| z.re < 0.5).collect();
            for (b, &ok) in buf.iter_mut().zip(&v) {
                *b = C64::new(if ok { 1.0 } else { 0.0 }, 0.0);
            }
            self.fft.forward(&mut buf);
            for ((a, b), t) in acc.iter_mut().zip(&buf).zip(spectrum) {
                *a += b * t;
            }
            valid.push(v);
        }
        self.fft.inverse(&mut acc);
        let counts = acc.iter().map(|z| z.re.round().max(0.0) as usize).collect();
        (valid, counts)
    }

    fn run(&mut self) -> Step {
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            return Step::OutOfBudget;
        }
        let mut target = None;
        let (valid, counts) = {
            let any_free = self.grid_of.iter().any(|&g| !self.occupied[g]);
            if !any_free {
                return Step::Found;
            }
            self.analyse()
        };
        for &g in &self.grid_of {
            if self.occupied[g] {
                continue;
            }
            match target {
                Some((_, best)) if counts[g] >= best => {}
                _ => target = Some((g, counts[g])),
            }
            if counts[g] == 0 {
                break;
            }
        }
        let (x, count) = target.expect("a free cell exists");
        if count == 0 {
            return Step::Exhausted;
        }
        let xc = self.grid_cell(x);
        let mut candidates: Vec<(usize, usize, Cell)> = Vec::new();
        for (slot, (k, _, _)) in self.tiles.iter().enumerate() {
            let mut offs = Vec::new();
            for c in self.geom.tiles[*k].cells() {
                let mut o = [0; 4];
                for a in 0..self.dims.len() {
                    o[a] = (xc[a] - c[a]).rem_euclid(self.dims[a] as i32);
                }
                if valid[slot][self.grid_index(&o)] {
                    offs.push(o);
                }
            }
            offs.sort_unstable();
            offs.dedup();
            candidates.extend(offs.into_iter().map(|o| (slot, *k, o)));
        }
        drop(valid);
        drop(counts);
        for (slot, k, o) in candidates {
            let base = self.grid_index(&o);
            let cells: Vec<usize> = self.tiles[slot]
                .1
                .iter()
                .map(|&d| self.shift(base, d))
                .collect();
            for &g in &cells {
                self.occupied[g] = true;
            }
            self.stack.push((k, o));
            match self.run() {
                Step::Exhausted => {}
                done => return done,
            }
            self.stack.pop();
            for &g in &cells {
                self.occupied[g] = false;
            }
        }
        Step::Exhausted
    }

    /// Grid index of `base + delta` where `delta` is itself a grid index.
    fn shift(&self, base: usize, delta: usize) -> usize {
        let b = self.grid_cell(base);
        let d = self.grid_cell(delta);
        let mut s = [0; 4];
        for a in 0..self.dims.len() {
            s[a] = b[a] + d[a];
        }
        self.grid_index(&s)
    }
}

/// Searches for an exact cover of the cells marked in `mask` using the
/// allowed tiles.
pub(super) fn search(
    geom: &Geometry,
    mask: &[bool],
    allowed: &[usize],
    budget: Option<u64>,
) -> (SolveStatus, Vec<Placement>, u64) {
    let region = &geom.region;
    let dim = region.dim();
    let usable: Vec<usize> = allowed.iter().copied().filter(|&k| geom.injective[k]).collect();
    let dims: Vec<usize> = (0..dim)
        .map(|a| {
            let e = geom.extents[a] as usize;
            match region.kind {
                RegionKind::Torus => e,
                RegionKind::Box => {
                    let pad = usable
                        .iter()
                        .map(|&k| geom.tiles[k].extents().expect("non-empty")[a] as usize)
                        .max()
                        .unwrap_or(1);
                    e + pad - 1
                }
            }
        })
        .collect();
    let fft = NdFft::new(&dims);
    let mut engine = Dense {
        geom,
        dims,
        fft,
        tiles: Vec::new(),
        grid_of: Vec::new(),
        occupied: Vec::new(),
        budget,
        nodes: 0,
        stack: Vec::new(),
    };
    let n = engine.fft.len;
    engine.occupied = vec![true; n];
    engine.grid_of = (0..region.volume())
        .map(|i| engine.grid_index(&region.cell_at(i)))
        .collect();
    for (i, &g) in engine.grid_of.iter().enumerate() {
        if mask[i] {
            engine.occupied[g] = false;
        }
    }
    engine.grid_of.retain(|&g| !engine.occupied[g]);
    for &k in &usable {
        let cells: Vec<usize> = geom.tiles[k].cells().iter().map(|c| engine.grid_index(c)).collect();
        let mut spectrum = vec![C64::default(); n];
        for &g in &cells {
            spectrum[g] = C64::new(1.0, 0.0);
        }
        engine.fft.forward(&mut spectrum);
        engine.tiles.push((k, cells, spectrum));
    }
    let step = engine.run();
    let nodes = engine.nodes;
    match step {
        Step::Found => {
            let mut found: Vec<Placement> = engine
                .stack
                .iter()
                .map(|(k, o)| Placement::new(*k, o))
                .collect();
            found.sort();
            (SolveStatus::Solved, found, nodes)
        }
        Step::Exhausted => (SolveStatus::Unsolvable, Vec::new(), nodes),
        Step::OutOfBudget => (SolveStatus::BudgetExhausted, Vec::new(), nodes),
    }
}
