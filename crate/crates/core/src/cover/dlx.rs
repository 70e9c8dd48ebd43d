//! Algorithm X over a toroidal doubly linked matrix (dancing links).

use super::{Placement, SolveStatus};
use crate::lattice::Cell;

/// Node storage. Index 0 is the root header, indices `1..=cols` are column
/// headers, the rest are matrix entries.
struct Matrix {
    left: Vec<u32>,
    right: Vec<u32>,
    up: Vec<u32>,
    down: Vec<u32>,
    col: Vec<u32>,
    row: Vec<u32>,
    size: Vec<u32>,
}

impl Matrix {
    fn new(cols: usize, rows: &[Vec<u32>]) -> Matrix {
        let entries: usize = rows.iter().map(|r| r.len()).sum();
        let n = cols + 1 + entries;
        let mut m = Matrix {
            left: Vec::with_capacity(n),
            right: Vec::with_capacity(n),
            up: Vec::with_capacity(n),
            down: Vec::with_capacity(n),
            col: Vec::with_capacity(n),
            row: Vec::with_capacity(n),
            size: vec![0; cols + 1],
        };
        for i in 0..=cols as u32 {
            m.left.push(if i == 0 { cols as u32 } else { i - 1 });
            m.right.push(if i as usize == cols { 0 } else { i + 1 });
            m.up.push(i);
            m.down.push(i);
            m.col.push(i);
            m.row.push(u32::MAX);
        }
        for (r, row_cols) in rows.iter().enumerate() {
            let first = m.left.len() as u32;
            let len = row_cols.len() as u32;
            for (j, &c) in row_cols.iter().enumerate() {
                let id = first + j as u32;
                m.left.push(if j == 0 { first + len - 1 } else { id - 1 });
                m.right.push(if j as u32 == len - 1 { first } else { id + 1 });
                let last = m.up[c as usize];
                m.up.push(last);
                m.down.push(c);
                m.down[last as usize] = id;
                m.up[c as usize] = id;
                m.col.push(c);
                m.row.push(r as u32);
                m.size[c as usize] += 1;
            }
        }
        m
    }

    fn cover(&mut self, c: u32) {
        let (l, r) = (self.left[c as usize], self.right[c as usize]);
        self.right[l as usize] = r;
        self.left[r as usize] = l;
        let mut i = self.down[c as usize];
        while i != c {
            let mut j = self.right[i as usize];
            while j != i {
                let (u, d) = (self.up[j as usize], self.down[j as usize]);
                self.down[u as usize] = d;
                self.up[d as usize] = u;
                self.size[self.col[j as usize] as usize] -= 1;
                j = self.right[j as usize];
            }
            i = self.down[i as usize];
        }
    }

    fn uncover(&mut self, c: u32) {
        let mut i = self.up[c as usize];
        while i != c {
            let mut j = self.left[i as usize];
            while j != i {
                let (u, d) = (self.up[j as usize], self.down[j as usize]);
                self.size[self.col[j as usize] as usize] += 1;
                self.down[u as usize] = j;
                self.up[d as usize] = j;
                j = self.left[j as usize];
            }
            i = self.up[i as usize];
        }
        let (l, r) = (self.left[c as usize], self.right[c as usize]);
        self.right[l as usize] = c;
        self.left[r as usize] = c;
    }

    /// Column with the fewest rows; the first in header order wins ties.
    fn choose(&self) -> u32 {
        let mut best = self.right[0];
        let mut c = best;
        while c != 0 {
            if self.size[c as usize] < self.size[best as usize] {
                best = c;
                if self.size[c as usize] == 0 {
                    break;
                }
            }
            c = self.right[c as usize];
        }
        best
    }
}

struct Search {
    m: Matrix,
    budget: Option<u64>,
    nodes: u64,
    stack: Vec<u32>,
}

enum Step {
    Found,
    Exhausted,
    OutOfBudget,
}

impl Search {
    fn run(&mut self) -> Step {
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            return Step::OutOfBudget;
        }
        if self.m.right[0] == 0 {
            return Step::Found;
        }
        let c = self.m.choose();
        if self.m.size[c as usize] == 0 {
            return Step::Exhausted;
        }
        self.m.cover(c);
        let mut r = self.m.down[c as usize];
        while r != c {
            self.stack.push(self.m.row[r as usize]);
            let mut j = self.m.right[r as usize];
            while j != r {
                self.m.cover(self.m.col[j as usize]);
                j = self.m.right[j as usize];
            }
            match self.run() {
                Step::Exhausted => {}
                done => return done,
            }
            let mut j = self.m.left[r as usize];
            while j != r {
                self.m.uncover(self.m.col[j as usize]);
                j = self.m.left[j as usize];
            }
            self.stack.pop();
            r = self.m.down[r as usize];
        }
        self.m.uncover(c);
        Step::Exhausted
    }
}

/// Searches for an exact cover of `cells` (sorted region indices) by the
/// given rows, each a placement with its region indices.
pub(super) fn search(
    cells: &[usize],
    rows: &[(usize, Cell, Vec<usize>)],
    budget: Option<u64>,
) -> (SolveStatus, Vec<Placement>, u64) {
    let column_of = |i: usize| cells.binary_search(&i).expect("row cell outside component") as u32 + 1;
    let matrix_rows: Vec<Vec<u32>> = rows
        .iter()
        .map(|(_, _, cs)| {
            let mut v: Vec<u32> = cs.iter().map(|&i| column_of(i)).collect();
            v.sort_unstable();
            v
        })
        .collect();
    let mut s = Search {
        m: Matrix::new(cells.len(), &matrix_rows),
        budget,
        nodes: 0,
        stack: Vec::new(),
    };
    match s.run() {
        Step::Found => {
            let mut found: Vec<Placement> = s
                .stack
                .iter()
                .map(|&r| {
                    let (k, off, _) = &rows[r as usize];
                    Placement::new(*k, off)
                })
                .collect();
            found.sort();
            (SolveStatus::Solved, found, s.nodes)
        }
        Step::Exhausted => (SolveStatus::Unsolvable, Vec::new(), s.nodes),
        Step::OutOfBudget => (SolveStatus::BudgetExhausted, Vec::new(), s.nodes),
    }
}
