//! Kazhdan–Lusztig ideals `I_{v,w}` in the coordinates `z^(v)`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::complex::{minimal_nonface_masks, minimal_transversals, PipeComplex};
use crate::error::{KlError, Result};
use crate::groebner::{self, BuchbergerReport, Mono, Poly, Ring};
use crate::perm::{essential_set, rank_matrix, rothe_diagram, Cell, Permutation};
use crate::pipedreams::{enumerate_masks, ReadingWord};
use crate::poly::{Coeff, Polynomial, TermOrder, Var};

/// Default S-pair budget.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Entry {
    Zero,
    One,
    Var(Cell),
}

/// `Z^(v)`: ones at `(n - v(j) + 1, j)`, zeros to the right of and above
/// each one, free variables on `D(v)`.
#[derive(Clone, Debug)]
pub struct SpecializedMatrix {
    pub v: Permutation,
    entries: Vec<Entry>,
}

impl SpecializedMatrix {
    pub fn new(v: &Permutation) -> Self {
        let n = v.n();
        let vinv = v.inverse();
        let mut entries = vec![Entry::Zero; n * n];
        for i in 1..=n {
            for j in 1..=n {
                let one_row = n - v.at(j) + 1;
                let one_col = vinv.at(n - i + 1);
                entries[(i - 1) * n + j - 1] = if i == one_row {
                    Entry::One
                } else if j > one_col || i > one_row {
                    Entry::Zero
                } else {
                    Entry::Var(Cell::new(i, j))
                };
            }
        }
        Self { v: *v, entries }
    }

    /// The generic matrix `Z` with a variable in every entry.
    pub fn generic(n: usize) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 1..=n {
            for j in 1..=n {
                entries.push(Entry::Var(Cell::new(i, j)));
            }
        }
        Self {
            v: Permutation::identity(n),
            entries,
        }
    }

    pub fn n(&self) -> usize {
        self.v.n()
    }

    /// Entry at row `i` (from the bottom), column `j`.
    pub fn get(&self, i: usize, j: usize) -> Entry {
        self.entries[(i - 1) * self.n() + j - 1]
    }

    pub fn free_cells(&self) -> Vec<Cell> {
        let mut v: Vec<Cell> = self
            .entries
            .iter()
            .filter_map(|e| match e {
                Entry::Var(c) => Some(*c),
                _ => None,
            })
            .collect();
        v.sort();
        v
    }

    pub fn render(&self) -> String {
        let n = self.n();
        let mut out = String::new();
        for i in (1..=n).rev() {
            let cells: Vec<String> = (1..=n)
                .map(|j| match self.get(i, j) {
                    Entry::Zero => format!("{:>4}", 0),
                    Entry::One => format!("{:>4}", 1),
                    Entry::Var(c) => format!("{:>4}", Var::z(c.row(), c.col()).to_string()),
                })
                .collect();
            let _ = writeln!(out, "{}", cells.join(""));
        }
        out
    }

    pub fn ring(&self, order: TermOrder) -> Result<Ring> {
        Ring::new(
            self.free_cells().iter().map(|c| Var::z(c.row(), c.col())).collect(),
            order,
        )
    }

    /// Determinant of the submatrix on `rows` (listed top to bottom) and
    /// `cols` (left to right), by dynamic programming over column subsets.
    pub fn minor(&self, ring: &Ring, rows: &[usize], cols: &[usize]) -> Poly {
        let k = rows.len();
        let mut layer: BTreeMap<u32, BTreeMap<Mono, Coeff>> = BTreeMap::new();
        layer.insert(0, BTreeMap::from([(Mono::ONE, Coeff::one())]));
        for &r in rows {
            let mut next: BTreeMap<u32, BTreeMap<Mono, Coeff>> = BTreeMap::new();
            for (used, poly) in &layer {
                for (p, &c) in cols.iter().enumerate() {
                    if used >> p & 1 == 1 {
                        continue;
                    }
                    let factor = match self.get(r, c) {
                        Entry::Zero => continue,
                        Entry::One => None,
                        Entry::Var(cell) => Some(
                            ring.var_mono(
                                ring.var_index(Var::z(cell.row(), cell.col()))
                                    .expect("free variable in ring"),
                            ),
                        ),
                    };
                    let negate = (used >> (p + 1)).count_ones() % 2 == 1;
                    let dest = next.entry(used | 1 << p).or_default();
                    for (m, coef) in poly {
                        let m2 = match &factor {
                            None => *m,
                            Some(f) => ring.mul_mono(m, f),
                        };
                        let c2 = if negate { -coef.clone() } else { coef.clone() };
                        let e = dest.entry(m2).or_insert_with(Coeff::zero);
                        *e += c2;
                    }
                }
            }
            layer = next;
        }
        let full = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };
        ring.from_map(layer.remove(&full).unwrap_or_default())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MinorRecord {
    /// The essential box `(i, j)` whose rank condition produced the minor.
    pub source: Cell,
    /// Rows top to bottom.
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub value: Polynomial,
}

/// The essential minors of `I_{v,w}` and the term order.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub v: Permutation,
    pub w: Permutation,
    pub order: TermOrder,
    pub ring: Ring,
    /// Distinct nonzero minors, up to scalar, in generation order.
    pub generators: Vec<Poly>,
    /// Number of minors that vanished identically.
    pub zero_minors: usize,
    /// Number of minors dropped as scalar multiples of earlier ones.
    pub duplicates: usize,
    pub records: Vec<MinorRecord>,
}

fn subsets(from: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(from: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for t in start..from.len() {
            if from.len() - t < k - cur.len() {
                break;
            }
            cur.push(from[t]);
            go(from, k, t + 1, cur, out);
            cur.pop();
        }
    }
    go(from, k, 0, &mut cur, &mut out);
    out
}

/// Options for generator construction.
#[derive(Clone, Copy, Debug)]
pub struct MinorOptions {
    pub order: TermOrder,
    /// Use every rank condition `(i, j)`, not only the essential set.
    pub all_minors: bool,
    /// Keep per-minor records for display.
    pub keep_records: bool,
}

impl Default for MinorOptions {
    fn default() -> Self {
        Self {
            order: TermOrder::KlLex,
            all_minors: false,
            keep_records: false,
        }
    }
}

pub fn essential_minors(v: &Permutation, w: &Permutation) -> Result<GeneratorSet> {
    essential_minors_with(v, w, MinorOptions::default())
}

pub fn essential_minors_with(v: &Permutation, w: &Permutation, opts: MinorOptions) -> Result<GeneratorSet> {
    if v.n() != w.n() {
        return Err(KlError::SizeMismatch {
            left: v.n(),
            right: w.n(),
        });
    }
    let z = SpecializedMatrix::new(v);
    minors_of_matrix(&z, v, w, opts)
}

/// Essential minors of the Schubert determinantal ideal `I_w` in the generic matrix.
pub fn schubert_determinantal_minors(w: &Permutation, opts: MinorOptions) -> Result<GeneratorSet> {
    let z = SpecializedMatrix::generic(w.n());
    minors_of_matrix(&z, &Permutation::identity(w.n()), w, opts)
}

fn minors_of_matrix(
    z: &SpecializedMatrix,
    v: &Permutation,
    w: &Permutation,
    opts: MinorOptions,
) -> Result<GeneratorSet> {
    let n = w.n();
    let ring = z.ring(opts.order)?;
    let rank = rank_matrix(w);
    let boxes: Vec<Cell> = if opts.all_minors {
        (1..=n)
            .flat_map(|i| (1..=n).map(move |j| Cell::new(i, j)))
            .collect()
    } else {
        essential_set(w)
    };
    let mut seen: HashSet<Vec<(Mono, Coeff)>> = HashSet::new();
    let mut generators = Vec::new();
    let mut zero_minors = 0;
    let mut duplicates = 0;
    let mut records = Vec::new();
    for b in boxes {
        let (i, j) = (b.row(), b.col());
        let k = rank.get(i, j) + 1;
        if k > i.min(j) {
            continue;
        }
        let row_pool: Vec<usize> = (1..=i).rev().collect();
        let col_pool: Vec<usize> = (1..=j).collect();
        let row_sets = subsets(&row_pool, k);
        let col_sets = subsets(&col_pool, k);
        for rows in &row_sets {
            for cols in &col_sets {
                let m = z.minor(&ring, rows, cols);
                if opts.keep_records {
                    records.push(MinorRecord {
                        source: b,
                        rows: rows.clone(),
                        cols: cols.clone(),
                        value: ring.to_polynomial(&m),
                    });
                }
                if m.is_zero() {
                    zero_minors += 1;
                    continue;
                }
                if seen.insert(m.monic().terms) {
                    generators.push(m);
                } else {
                    duplicates += 1;
                }
            }
        }
    }
    Ok(GeneratorSet {
        v: *v,
        w: *w,
        order: opts.order,
        ring,
        generators,
        zero_minors,
        duplicates,
        records,
    })
}

/// A squarefree monomial ideal on the boxes of a diagram.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct MonomialIdeal {
    /// Minimal generators as sorted box lists, sorted by size then boxes.
    pub generators: Vec<Vec<Cell>>,
}

impl MonomialIdeal {
    pub fn from_sets(mut sets: Vec<Vec<Cell>>) -> Self {
        for s in sets.iter_mut() {
            s.sort();
            s.dedup();
        }
        sets.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        sets.dedup();
        let mut out: Vec<Vec<Cell>> = Vec::new();
        for s in sets {
            if !out.iter().any(|d| d.iter().all(|c| s.contains(c))) {
                out.push(s);
            }
        }
        Self { generators: out }
    }

    pub fn render(&self) -> String {
        let gens: Vec<String> = self
            .generators
            .iter()
            .map(|g| {
                if g.is_empty() {
                    "1".into()
                } else {
                    g.iter()
                        .map(|c| Var::z(c.row(), c.col()).to_string())
                        .collect::<Vec<_>>()
                        .join("*")
                }
            })
            .collect();
        format!("<{}>", gens.join(", "))
    }

    /// Minimal primes, as variable sets.
    pub fn minimal_primes(&self) -> Vec<Vec<Cell>> {
        let mut universe: Vec<Cell> = self.generators.iter().flatten().copied().collect();
        universe.sort();
        universe.dedup();
        let idx = |c: &Cell| universe.binary_search(c).unwrap();
        let masks: Vec<u128> = self
            .generators
            .iter()
            .map(|g| g.iter().fold(0u128, |m, c| m | 1 << idx(c)))
            .collect();
        let mut out: Vec<Vec<Cell>> = minimal_transversals(&masks)
            .into_iter()
            .map(|t| {
                (0..universe.len())
                    .filter(|&k| t >> k & 1 == 1)
                    .map(|k| universe[k])
                    .collect()
            })
            .collect();
        out.sort();
        out
    }
}

impl GeneratorSet {
    pub fn polynomials(&self) -> Vec<Polynomial> {
        self.generators.iter().map(|g| self.ring.to_polynomial(g)).collect()
    }

    fn mono_cells(&self, m: &Mono) -> Result<Vec<Cell>> {
        let mut out = Vec::new();
        for k in 0..self.ring.nvars() {
            match m.exp(k) {
                0 => {}
                1 => match self.ring.vars[k] {
                    Var::Z(r, c) => out.push(Cell { row: r, col: c }),
                    _ => unreachable!("KL rings only hold z variables"),
                },
                _ => {
                    return Err(KlError::Invariant(format!(
                        "leading monomial {} of I_{{{},{}}} is not squarefree",
                        self.ring.to_monomial(m),
                        self.v,
                        self.w
                    )))
                }
            }
        }
        Ok(out)
    }

    /// `J_{v,w}`: the ideal of leading terms, checked to be squarefree.
    pub fn leading_term_ideal(&self) -> Result<MonomialIdeal> {
        let sets = self
            .generators
            .iter()
            .map(|g| self.mono_cells(g.lm()))
            .collect::<Result<Vec<_>>>()?;
        Ok(MonomialIdeal::from_sets(sets))
    }

    pub fn buchberger_verify(&self, budget: u64) -> Result<BuchbergerReport> {
        groebner::buchberger_verify(&self.ring, &self.generators, budget)
    }

    /// The reduced Gröbner basis, assuming the generators form a Gröbner basis.
    pub fn interreduce(&self) -> Vec<Poly> {
        groebner::interreduce(&self.ring, &self.generators)
    }

    pub fn interreduced_polynomials(&self) -> Vec<Polynomial> {
        self.interreduce().iter().map(|g| self.ring.to_polynomial(g)).collect()
    }

    /// Whether every element of the reduced Gröbner basis is homogeneous.
    pub fn is_standardly_homogeneous(&self) -> bool {
        if self.generators.iter().all(|g| self.ring.is_homogeneous(g)) {
            return true;
        }
        self.interreduce().iter().all(|g| self.ring.is_homogeneous(g))
    }

    /// Independent test: the ideal is homogeneous iff every homogeneous
    /// component of every generator reduces to zero.
    pub fn is_homogeneous_by_components(&self) -> bool {
        let div = groebner::Divisors::new(&self.ring, &self.generators);
        self.generators.iter().all(|g| {
            self.ring
                .homogeneous_components(g)
                .iter()
                .all(|h| div.normal_form(groebner::poly_to_map(h)).is_zero())
        })
    }

    /// Removes one generator; used for negative controls.
    pub fn without(&self, k: usize) -> GeneratorSet {
        let mut g = self.clone();
        g.generators.remove(k);
        g
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for g in &self.generators {
            let _ = writeln!(out, "{}", self.ring.to_polynomial(g).render_ordered(self.order));
        }
        out
    }
}

pub fn is_standardly_homogeneous(v: &Permutation, w: &Permutation) -> Result<bool> {
    Ok(essential_minors(v, w)?.is_standardly_homogeneous())
}

/// Minimal primes of `J_{v,w}`.
pub fn initial_ideal_primes(v: &Permutation, w: &Permutation) -> Result<Vec<Vec<Cell>>> {
    Ok(essential_minors(v, w)?.leading_term_ideal()?.minimal_primes())
}

/// Cross sets of `RedPipes(v, w0 w)`, sorted.
pub fn redpipe_cross_sets(v: &Permutation, w: &Permutation) -> Result<Vec<Vec<Cell>>> {
    let q = ReadingWord::new(v);
    let target = Permutation::longest(v.n()).compose(w)?;
    let mut out: Vec<Vec<Cell>> = enumerate_masks(&q, &target, true)
        .into_iter()
        .map(|m| q.cells_of(m))
        .collect();
    out.sort();
    Ok(out)
}

/// `K_{v,w}`: the Stanley–Reisner ideal of the pipe complex.
pub fn stanley_reisner_ideal(c: &PipeComplex) -> MonomialIdeal {
    MonomialIdeal::from_sets(
        minimal_nonface_masks(c)
            .into_iter()
            .map(|m| c.q.cells_of(m))
            .collect(),
    )
}

/// Outcome of comparing `K_{v,w}`, `J_{v,w}` and the pipe-dream primes.
#[derive(Clone, Debug, Serialize)]
pub struct InitialIdealReport {
    pub v: Permutation,
    pub w: Permutation,
    pub groebner: bool,
    pub squarefree: bool,
    pub primes_match_redpipes: bool,
    pub stanley_reisner_matches: bool,
    pub primes: usize,
}

impl InitialIdealReport {
    pub fn ok(&self) -> bool {
        self.groebner && self.squarefree && self.primes_match_redpipes && self.stanley_reisner_matches
    }
}

/// Full chain `K_{v,w} = J_{v,w} = in I_{v,w}` for `v <= w`.
pub fn check_initial_ideal(v: &Permutation, w: &Permutation, budget: u64) -> Result<InitialIdealReport> {
    let g = essential_minors(v, w)?;
    let groebner = g.buchberger_verify(budget)?.is_groebner;
    let (squarefree, j) = match g.leading_term_ideal() {
        Ok(j) => (true, Some(j)),
        Err(_) => (false, None),
    };
    let pipes = redpipe_cross_sets(v, w)?;
    let (primes_match, sr_match, primes) = match &j {
        Some(j) => {
            let p = j.minimal_primes();
            let c = PipeComplex::new(v, w)?;
            let k = stanley_reisner_ideal(&c);
            (p == pipes, &k == j, p.len())
        }
        None => (false, false, 0),
    };
    Ok(InitialIdealReport {
        v: *v,
        w: *w,
        groebner,
        squarefree,
        primes_match_redpipes: primes_match,
        stanley_reisner_matches: sr_match,
        primes,
    })
}

/// Boxes of `D(v)`, a convenience for callers working with cell sets.
pub fn diagram_cells(v: &Permutation) -> BTreeSet<Cell> {
    rothe_diagram(v).boxes.into_iter().collect()
}
