//! Pipe dreams on Rothe diagrams: Demazure evaluation, enumeration of
//! `Pipes(v, w)` and `RedPipes(v, w)`, flattening and strand tracing.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{KlError, Result};
use crate::nilhecke::demazure_step;
use crate::perm::{bruhat_leq_unchecked, canonical_labeling, Cell, Permutation};

/// The reading-order word `Q` of `D(v)`: boxes with their canonical labels.
#[derive(Clone, Debug)]
pub struct ReadingWord {
    pub owner: Permutation,
    pub boxes: Vec<Cell>,
    pub labels: Vec<usize>,
}

impl ReadingWord {
    pub fn new(v: &Permutation) -> Self {
        let lab = canonical_labeling(v);
        Self {
            owner: *v,
            boxes: lab.iter().map(|(c, _)| *c).collect(),
            labels: lab.iter().map(|(_, l)| *l).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn index_of(&self, c: Cell) -> Option<usize> {
        self.boxes.iter().position(|&b| b == c)
    }

    /// Demazure product of the letters selected by `mask`.
    pub fn product(&self, mask: u128) -> Permutation {
        let mut p = Permutation::identity(self.owner.n());
        for (k, &l) in self.labels.iter().enumerate() {
            if mask >> k & 1 == 1 {
                p = demazure_step(p, l);
            }
        }
        p
    }

    pub fn mask_of(&self, cells: &[Cell]) -> Result<u128> {
        let mut m = 0u128;
        for &c in cells {
            let k = self.index_of(c).ok_or_else(|| {
                KlError::Invariant(format!("{c} is not a box of D({})", self.owner))
            })?;
            m |= 1 << k;
        }
        Ok(m)
    }

    pub fn cells_of(&self, mask: u128) -> Vec<Cell> {
        let mut v: Vec<Cell> = (0..self.len())
            .filter(|&k| mask >> k & 1 == 1)
            .map(|k| self.boxes[k])
            .collect();
        v.sort();
        v
    }

    pub fn full_mask(&self) -> u128 {
        if self.len() == 128 {
            u128::MAX
        } else {
            (1u128 << self.len()) - 1
        }
    }
}

/// A set of crosses on `D(v)`, sorted by `(row, col)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct PipeDream {
    pub v: Permutation,
    pub crosses: Vec<Cell>,
}

impl PipeDream {
    pub fn new(v: Permutation, mut crosses: Vec<Cell>) -> Result<Self> {
        let d = crate::perm::rothe_diagram(&v);
        crosses.sort();
        crosses.dedup();
        if let Some(c) = crosses.iter().find(|c| !d.contains(**c)) {
            return Err(KlError::Invariant(format!("{c} is not a box of D({v})")));
        }
        Ok(Self { v, crosses })
    }

    pub fn len(&self) -> usize {
        self.crosses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crosses.is_empty()
    }

    /// Labels of the crosses, read in reading order.
    pub fn word(&self) -> Vec<usize> {
        let q = ReadingWord::new(&self.v);
        (0..q.len())
            .filter(|&k| self.crosses.binary_search(&q.boxes[k]).is_ok())
            .map(|k| q.labels[k])
            .collect()
    }

    /// The Demazure product of the crosses in reading order.
    pub fn demazure(&self) -> Permutation {
        let mut p = Permutation::identity(self.v.n());
        for l in self.word() {
            p = demazure_step(p, l);
        }
        p
    }

    pub fn is_reduced(&self) -> bool {
        self.demazure().length() == self.len()
    }

    /// Fixed-width picture of `D(v)`: `+` for a cross, `·` (or `.`) for an
    /// empty box, blank outside the diagram.
    pub fn render(&self, ascii: bool) -> String {
        let n = self.v.n();
        let d = crate::perm::rothe_diagram(&self.v);
        let empty = if ascii { '.' } else { '·' };
        let mut out = String::new();
        for i in (1..=n).rev() {
            let mut line = String::new();
            for j in 1..=n {
                let c = Cell::new(i, j);
                let ch = if self.crosses.binary_search(&c).is_ok() {
                    '+'
                } else if d.contains(c) {
                    empty
                } else {
                    ' '
                };
                line.push(ch);
                if j < n {
                    line.push(' ');
                }
            }
            let _ = writeln!(out, "{}", line.trim_end());
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "v": self.v.to_word_string(),
            "crosses": self.crosses.iter().map(|c| [c.row, c.col]).collect::<Vec<_>>(),
        })
    }
}

/// Every pipe dream on `D(v)` with Demazure product `target`; with
/// `reduced_only`, only those with `#P = l(target)`.
pub fn enumerate_pipes(v: &Permutation, target: &Permutation, reduced_only: bool) -> Result<Vec<PipeDream>> {
    if v.n() != target.n() {
        return Err(KlError::SizeMismatch {
            left: v.n(),
            right: target.n(),
        });
    }
    let q = ReadingWord::new(v);
    Ok(enumerate_masks(&q, target, reduced_only)
        .into_iter()
        .map(|m| PipeDream {
            v: *v,
            crosses: q.cells_of(m),
        })
        .collect())
}

/// Backtracking over the reading word, returning cross masks.
pub fn enumerate_masks(q: &ReadingWord, target: &Permutation, reduced_only: bool) -> Vec<u128> {
    let mut out = Vec::new();
    let target_len = target.length();
    let n = q.owner.n();
    let mut state = Search {
        q,
        target,
        reduced_only,
        target_len,
        out: &mut out,
    };
    state.go(0, Permutation::identity(n), 0, 0);
    out
}

struct Search<'a> {
    q: &'a ReadingWord,
    target: &'a Permutation,
    reduced_only: bool,
    target_len: usize,
    out: &'a mut Vec<u128>,
}

impl Search<'_> {
    fn go(&mut self, k: usize, prefix: Permutation, mask: u128, count: usize) {
        if !bruhat_leq_unchecked(&prefix, self.target) {
            return;
        }
        if self.reduced_only && count + (self.q.len() - k) < self.target_len {
            return;
        }
        let mut reach = prefix;
        for &l in &self.q.labels[k..] {
            reach = demazure_step(reach, l);
        }
        if !bruhat_leq_unchecked(self.target, &reach) {
            return;
        }
        if k == self.q.len() {
            if prefix == *self.target {
                self.out.push(mask);
            }
            return;
        }
        self.go(k + 1, prefix, mask, count);
        let l = self.q.labels[k];
        let next = demazure_step(prefix, l);
        if self.reduced_only && next == prefix {
            return;
        }
        self.go(k + 1, next, mask | 1 << k, count + 1);
    }
}

/// Brute-force oracle: all `2^|D(v)|` subsets. Intended for small diagrams.
pub fn enumerate_pipes_brute(v: &Permutation, target: &Permutation, reduced_only: bool) -> Vec<PipeDream> {
    let q = ReadingWord::new(v);
    assert!(q.len() <= 24, "brute force limited to 24 boxes");
    let len = target.length();
    (0..1u128 << q.len())
        .filter(|&m| {
            q.product(m) == *target && (!reduced_only || m.count_ones() as usize == len)
        })
        .map(|m| PipeDream {
            v: *v,
            crosses: q.cells_of(m),
        })
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Tile {
    Cross,
    Elbow,
    /// The half tile on the boundary of the staircase.
    Cap,
    Outside,
}

/// A pipe dream spread over the full staircase of the `n x n` grid.
#[derive(Clone, Debug, Serialize)]
pub struct StrandDiagram {
    pub n: usize,
    /// `grid[r-1][c-1]`, row 1 at the bottom.
    pub grid: Vec<Vec<Tile>>,
    pub strand_permutation: Permutation,
    /// Whether some pair of strands crosses more than once.
    pub double_crossing: bool,
}

impl StrandDiagram {
    pub fn tile(&self, row: usize, col: usize) -> Tile {
        self.grid[row - 1][col - 1]
    }

    pub fn render(&self, ascii: bool) -> String {
        let (cross, elbow, cap) = if ascii {
            (" + ", " J'", " J ")
        } else {
            (" + ", " ╯╭", " ╯ ")
        };
        let mut out = String::new();
        for r in (1..=self.n).rev() {
            let mut line = format!("{r:>2} ");
            for c in 1..=self.n {
                line.push_str(match self.tile(r, c) {
                    Tile::Cross => cross,
                    Tile::Elbow => elbow,
                    Tile::Cap => cap,
                    Tile::Outside => "   ",
                });
            }
            let _ = writeln!(out, "{}", line.trim_end());
        }
        let mut foot = String::from("   ");
        for c in 1..=self.n {
            let _ = write!(foot, "{c:^3}");
        }
        let _ = writeln!(out, "{}", foot.trim_end());
        out
    }
}

/// Flattens a reduced dream: each column of `D(v)` slides south past the
/// non-diagram squares, elbows fill the rest of the staircase, and strands
/// are traced from the bottom of each column to the left edge.
pub fn flatten(p: &PipeDream) -> Result<StrandDiagram> {
    if !p.is_reduced() {
        return Err(KlError::NotReduced(format!(
            "{} crosses on D({}) do not form a reduced word",
            p.len(),
            p.v
        )));
    }
    Ok(flatten_unchecked(p))
}

pub(crate) fn flatten_unchecked(p: &PipeDream) -> StrandDiagram {
    let n = p.v.n();
    let d = crate::perm::rothe_diagram(&p.v);
    let flat = d.flattened_positions();
    let mut grid = vec![vec![Tile::Outside; n]; n];
    for r in 1..=n {
        for c in 1..=n {
            grid[r - 1][c - 1] = if r + c <= n {
                Tile::Elbow
            } else if r + c == n + 1 {
                Tile::Cap
            } else {
                Tile::Outside
            };
        }
    }
    for (b, f) in d.boxes.iter().zip(flat) {
        if p.crosses.binary_search(b).is_ok() {
            grid[f.row() - 1][f.col() - 1] = Tile::Cross;
        }
    }
    let mut ends = vec![0usize; n];
    let mut seen_pairs = std::collections::HashSet::new();
    let mut cross_owner: std::collections::HashMap<(usize, usize), usize> = Default::default();
    let mut double_crossing = false;
    for start in 1..=n {
        let (mut r, mut c) = (1usize, start);
        let mut from_bottom = true;
        loop {
            let tile = grid[r - 1][c - 1];
            if tile == Tile::Cross {
                if let Some(&other) = cross_owner.get(&(r, c)) {
                    if !seen_pairs.insert((other.min(start), other.max(start))) {
                        double_crossing = true;
                    }
                } else {
                    cross_owner.insert((r, c), start);
                }
            }
            let go_left = match tile {
                Tile::Cross => !from_bottom,
                _ => from_bottom,
            };
            if go_left {
                if c == 1 {
                    ends[start - 1] = r;
                    break;
                }
                c -= 1;
                from_bottom = false;
            } else {
                r += 1;
                from_bottom = true;
            }
        }
    }
    StrandDiagram {
        n,
        grid,
        strand_permutation: Permutation::new(&ends).expect("strands end in distinct rows"),
        double_crossing,
    }
}
