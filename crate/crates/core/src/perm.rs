//! Permutations of `S_n` in one-line notation, Bruhat order, rank matrices,
//! Rothe diagrams and the combinatorial data derived from them.
//!
//! Grid coordinates follow the upside-down convention used throughout the
//! crate: a [`Cell`] `(row, col)` has row 1 at the *bottom* of the `n x n`
//! grid and column 1 at the left.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{KlError, Result};

/// Largest supported `n`.
pub const MAX_N: usize = 16;

/// A permutation of `{1, ..., n}` stored in one-line notation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    n: u8,
    word: [u8; MAX_N],
}

impl Permutation {
    /// Builds a permutation from its one-line notation.
    pub fn new(word: &[usize]) -> Result<Self> {
        let n = word.len();
        if n == 0 || n > MAX_N {
            return Err(KlError::Parse(format!(
                "permutation size {n} outside 1..={MAX_N}"
            )));
        }
        let mut seen = [false; MAX_N + 1];
        let mut out = [0u8; MAX_N];
        for (k, &x) in word.iter().enumerate() {
            if x == 0 || x > n || seen[x] {
                return Err(KlError::Parse(format!(
                    "{word:?} is not a permutation of 1..={n}"
                )));
            }
            seen[x] = true;
            out[k] = x as u8;
        }
        Ok(Self { n: n as u8, word: out })
    }

    pub fn identity(n: usize) -> Self {
        assert!((1..=MAX_N).contains(&n));
        let mut word = [0u8; MAX_N];
        for (k, slot) in word.iter_mut().enumerate().take(n) {
            *slot = (k + 1) as u8;
        }
        Self { n: n as u8, word }
    }

    /// The longest element `w0 = n n-1 ... 1`.
    pub fn longest(n: usize) -> Self {
        assert!((1..=MAX_N).contains(&n));
        let mut word = [0u8; MAX_N];
        for (k, slot) in word.iter_mut().enumerate().take(n) {
            *slot = (n - k) as u8;
        }
        Self { n: n as u8, word }
    }

    /// The simple transposition `s_i` in `S_n`.
    pub fn simple(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i >= n {
            return Err(KlError::IndexOutOfRange { index: i, n });
        }
        let mut p = Self::identity(n);
        p.word.swap(i - 1, i);
        Ok(p)
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut p = Self::identity(n);
        p.word[..n].shuffle(rng);
        p
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// `w(i)` for `1 <= i <= n`.
    #[inline]
    pub fn at(&self, i: usize) -> usize {
        self.word[i - 1] as usize
    }

    #[inline]
    pub fn as_slice(&self) -> &[u8] {
        &self.word[..self.n()]
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.as_slice().iter().map(|&x| x as usize).collect()
    }

    pub fn inverse(&self) -> Self {
        let mut word = [0u8; MAX_N];
        for (k, &x) in self.as_slice().iter().enumerate() {
            word[x as usize - 1] = (k + 1) as u8;
        }
        Self { n: self.n, word }
    }

    /// Composition `(self * other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_same_size(other)?;
        let mut word = [0u8; MAX_N];
        for k in 0..self.n() {
            word[k] = self.word[other.word[k] as usize - 1];
        }
        Ok(Self { n: self.n, word })
    }

    /// `w * s_i`: swaps the entries in positions `i` and `i+1`.
    pub fn times_simple(&self, i: usize) -> Self {
        debug_assert!(i >= 1 && i < self.n());
        let mut p = *self;
        p.word.swap(i - 1, i);
        p
    }

    /// `s_i * w`: swaps the values `i` and `i+1`.
    pub fn simple_times(&self, i: usize) -> Self {
        debug_assert!(i >= 1 && i < self.n());
        let mut p = *self;
        for x in p.word[..self.n()].iter_mut() {
            if *x as usize == i {
                *x += 1;
            } else if *x as usize == i + 1 {
                *x -= 1;
            }
        }
        p
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let w = self.as_slice();
        let mut count = 0;
        for a in 0..w.len() {
            for b in a + 1..w.len() {
                if w[a] > w[b] {
                    count += 1;
                }
            }
        }
        count
    }

    /// `w s_i < w`, i.e. `w(i) > w(i+1)`.
    #[inline]
    pub fn has_right_descent(&self, i: usize) -> bool {
        self.word[i - 1] > self.word[i]
    }

    /// `s_i w < w`, i.e. `i+1` appears before `i`.
    pub fn has_left_descent(&self, i: usize) -> bool {
        let inv = self.inverse();
        inv.word[i - 1] > inv.word[i]
    }

    pub fn right_descents(&self) -> Vec<usize> {
        (1..self.n()).filter(|&i| self.has_right_descent(i)).collect()
    }

    pub fn left_descents(&self) -> Vec<usize> {
        self.inverse().right_descents()
    }

    /// Positions `i` with `w(i) < w(i+1)`.
    pub fn ascents(&self) -> Vec<usize> {
        (1..self.n()).filter(|&i| !self.has_right_descent(i)).collect()
    }

    pub fn last_ascent(&self) -> Option<usize> {
        (1..self.n()).rev().find(|&i| !self.has_right_descent(i))
    }

    pub fn is_identity(&self) -> bool {
        self.as_slice().iter().enumerate().all(|(k, &x)| x as usize == k + 1)
    }

    pub fn is_longest(&self) -> bool {
        *self == Self::longest(self.n())
    }

    fn check_same_size(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(KlError::SizeMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(())
    }

    /// Every permutation of `S_n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (1..=n).collect();
        loop {
            out.push(Self::new(&cur).expect("valid permutation"));
            // next lexicographic permutation
            let Some(k) = (0..n.saturating_sub(1)).rev().find(|&k| cur[k] < cur[k + 1]) else {
                break;
            };
            let l = (k + 1..n).rev().find(|&l| cur[k] < cur[l]).unwrap();
            cur.swap(k, l);
            cur[k + 1..].reverse();
        }
        out
    }

    /// Canonical text form: digits run together when `n <= 9`, comma separated otherwise.
    pub fn to_word_string(&self) -> String {
        if self.n() <= 9 {
            self.as_slice().iter().map(|x| x.to_string()).collect()
        } else {
            self.as_slice()
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_word_string())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", self.to_word_string())
    }
}

impl FromStr for Permutation {
    type Err = KlError;

    /// Accepts `31524`, `3,1,5,2,4`, `3 1 5 2 4`, or `[3,1,5,2,4]`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('[').trim_end_matches(']');
        if t.is_empty() {
            return Err(KlError::Parse("empty permutation".into()));
        }
        let entries: Vec<usize> = if t.contains(',') || t.contains(char::is_whitespace) {
            t.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|p| !p.is_empty())
                .map(|p| {
                    p.parse::<usize>()
                        .map_err(|_| KlError::Parse(format!("bad entry {p:?} in {s:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            t.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| KlError::Parse(format!("bad character {c:?} in {s:?}")))
                })
                .collect::<Result<_>>()?
        };
        Self::new(&entries)
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_word_string())
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Bruhat order `v <= w`, tested entrywise on rank matrices.
pub fn bruhat_leq(v: &Permutation, w: &Permutation) -> Result<bool> {
    v.check_same_size(w)?;
    Ok(bruhat_leq_unchecked(v, w))
}

/// `r^v <= r^w` for every entry. Callers guarantee equal sizes.
pub(crate) fn bruhat_leq_unchecked(v: &Permutation, w: &Permutation) -> bool {
    let n = v.n();
    // count_v[a] = #{k <= j : v(k) >= a}, maintained as j grows
    let mut count_v = [0u8; MAX_N + 2];
    let mut count_w = [0u8; MAX_N + 2];
    for j in 0..n {
        let a = v.word[j] as usize;
        let b = w.word[j] as usize;
        for t in 1..=a {
            count_v[t] += 1;
        }
        for t in 1..=b {
            count_w[t] += 1;
        }
        for t in 1..=n {
            if count_v[t] > count_w[t] {
                return false;
            }
        }
    }
    true
}

/// A box of the `n x n` grid; row 1 is the bottom row.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub row: u8,
    pub col: u8,
}

impl Cell {
    pub fn new(row: usize, col: usize) -> Self {
        Self {
            row: row as u8,
            col: col as u8,
        }
    }

    #[inline]
    pub fn row(&self) -> usize {
        self.row as usize
    }

    #[inline]
    pub fn col(&self) -> usize {
        self.col as usize
    }
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// `r_ij = #{ k <= j : w(k) >= n - i + 1 }`, rows counted from the bottom.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RankMatrix {
    n: usize,
    entries: Vec<u8>,
}

impl RankMatrix {
    /// Entry `r_ij`, `1 <= i, j <= n`.
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.entries[(i - 1) * self.n + (j - 1)] as usize
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Rows as displayed, top row (`i = n`) first.
    pub fn display_rows(&self) -> Vec<Vec<usize>> {
        (1..=self.n)
            .rev()
            .map(|i| (1..=self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }
}

impl fmt::Display for RankMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.display_rows() {
            let line: Vec<String> = row.iter().map(|x| format!("{x:>2}")).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

pub fn rank_matrix(w: &Permutation) -> RankMatrix {
    let n = w.n();
    let mut entries = vec![0u8; n * n];
    for i in 1..=n {
        let threshold = n - i + 1;
        let mut count = 0u8;
        for j in 1..=n {
            if w.at(j) >= threshold {
                count += 1;
            }
            entries[(i - 1) * n + (j - 1)] = count;
        }
    }
    RankMatrix { n, entries }
}

/// The Rothe diagram `D(v)` (the free coordinates of `Z^(v)`).
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Diagram {
    pub owner: Permutation,
    /// Boxes sorted by `(row, col)`.
    pub boxes: Vec<Cell>,
}

impl Diagram {
    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.boxes.binary_search(&c).is_ok()
    }

    pub fn n(&self) -> usize {
        self.owner.n()
    }

    /// Boxes in reading order: rows top to bottom, each row left to right.
    pub fn reading_order(&self) -> Vec<Cell> {
        let mut v = self.boxes.clone();
        v.sort_by(|a, b| b.row.cmp(&a.row).then(a.col.cmp(&b.col)));
        v
    }

    /// Boxes of the diagram after sliding each column down past the
    /// non-diagram squares. Returned in the same order as `self.boxes`.
    pub fn flattened_positions(&self) -> Vec<Cell> {
        self.boxes
            .iter()
            .map(|c| {
                let below = self
                    .boxes
                    .iter()
                    .filter(|d| d.col == c.col && d.row < c.row)
                    .count();
                Cell::new(below + 1, c.col())
            })
            .collect()
    }

    /// Fixed-width picture: `#` for boxes, `*` for the dots of `v`, `.` elsewhere.
    pub fn ascii(&self) -> String {
        let n = self.n();
        let v = self.owner;
        let mut out = String::new();
        for i in (1..=n).rev() {
            for j in 1..=n {
                let ch = if n - v.at(j) + 1 == i {
                    '*'
                } else if self.contains(Cell::new(i, j)) {
                    '#'
                } else {
                    '.'
                };
                out.push(ch);
                if j < n {
                    out.push(' ');
                }
            }
            out.push('\n');
        }
        out
    }
}

pub fn rothe_diagram(v: &Permutation) -> Diagram {
    let n = v.n();
    let vinv = v.inverse();
    let mut boxes = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i < n - v.at(j) + 1 && j < vinv.at(n - i + 1) {
                boxes.push(Cell::new(i, j));
            }
        }
    }
    Diagram { owner: *v, boxes }
}

/// Northeast corners of the connected components of `D(v)`.
pub fn essential_set(v: &Permutation) -> Vec<Cell> {
    let d = rothe_diagram(v);
    d.boxes
        .iter()
        .copied()
        .filter(|c| {
            !d.contains(Cell::new(c.row() + 1, c.col()))
                && !d.contains(Cell::new(c.row(), c.col() + 1))
        })
        .collect()
}

/// Canonical labeling of `D(v)` in reading order: the `t` boxes of row `i`
/// receive `i, i+1, ..., i+t-1` from left to right.
pub fn canonical_labeling(v: &Permutation) -> Vec<(Cell, usize)> {
    let d = rothe_diagram(v);
    let mut out = Vec::with_capacity(d.len());
    let mut prev_row = 0;
    let mut next = 0;
    for c in d.reading_order() {
        if c.row() != prev_row {
            prev_row = c.row();
            next = c.row();
        }
        out.push((c, next));
        next += 1;
    }
    out
}

/// The reading word of the canonical labeling (a reduced word for `w0 v`).
pub fn canonical_word(v: &Permutation) -> Vec<usize> {
    canonical_labeling(v).into_iter().map(|(_, l)| l).collect()
}

/// Maximal runs of consecutive integers in a sorted index set.
fn runs(indices: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &i in indices {
        match out.last_mut() {
            Some((_, end)) if *end + 1 == i => *end = i,
            _ => out.push((i, i)),
        }
    }
    out
}

fn segment_sort_pass(v: &Permutation, w: &Permutation) -> Permutation {
    let n = v.n();
    let mut word = v.to_vec();
    // values a..=b+1 for each run a..=b of left descents of w, placed decreasingly
    for (a, b) in runs(&w.left_descents()) {
        let mut positions: Vec<usize> = (0..n)
            .filter(|&k| word[k] >= a && word[k] <= b + 1)
            .collect();
        positions.sort_unstable();
        let mut values: Vec<usize> = positions.iter().map(|&k| word[k]).collect();
        values.sort_unstable_by(|x, y| y.cmp(x));
        for (k, val) in positions.into_iter().zip(values) {
            word[k] = val;
        }
    }
    // positions a..=b+1 for each run of right descents of w
    for (a, b) in runs(&w.right_descents()) {
        word[a - 1..=b].sort_unstable_by(|x, y| y.cmp(x));
    }
    Permutation::new(&word).expect("sorting preserves the permutation")
}

/// The Bruhat-maximal element of the double coset `S_T v S_T'`, where `T`
/// and `T'` are the left and right descents of `w`.
pub fn v_max(v: &Permutation, w: &Permutation) -> Result<Permutation> {
    v.check_same_size(w)?;
    let mut cur = *v;
    loop {
        let next = segment_sort_pass(&cur, w);
        if next == cur {
            break;
        }
        cur = next;
    }
    let lt: BTreeSet<usize> = cur.left_descents().into_iter().collect();
    let rt: BTreeSet<usize> = cur.right_descents().into_iter().collect();
    if !w.left_descents().iter().all(|i| lt.contains(i))
        || !w.right_descents().iter().all(|i| rt.contains(i))
    {
        return Err(KlError::Invariant(format!(
            "v_max({v}, {w}) = {cur} does not absorb the descents of w"
        )));
    }
    Ok(cur)
}

/// A weakly decreasing sequence of nonnegative integers; trailing zeros kept.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Partition {
    pub parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|p| p[0] < p[1]) {
            return Err(KlError::Parse(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Self { parts })
    }

    /// Number of nonzero parts.
    pub fn length(&self) -> usize {
        self.parts.iter().filter(|&&p| p > 0).count()
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Part `i` (1-based); zero past the end.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    pub fn contains(&self, other: &Partition) -> bool {
        let k = self.parts.len().max(other.parts.len());
        (1..=k).all(|i| self.part(i) >= other.part(i))
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.part(1);
        Partition {
            parts: (1..=first)
                .map(|c| self.parts.iter().filter(|&&p| p >= c).count())
                .collect(),
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// Ascent position and shape of a co-Grassmannian permutation.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CoGrassmannian {
    pub ascent: usize,
    pub shape: Partition,
}

/// `Some` iff `w` has exactly one ascent `k`; then
/// `lambda_{k-i+1} = n - w(i) + 1 - i` for `1 <= i <= k`.
pub fn cograssmannian_data(w: &Permutation) -> Option<CoGrassmannian> {
    let asc = w.ascents();
    if asc.len() != 1 {
        return None;
    }
    let k = asc[0];
    let n = w.n();
    let mut parts = vec![0usize; k];
    for i in 1..=k {
        parts[k - i] = (n + 1).checked_sub(w.at(i) + i)?;
    }
    Some(CoGrassmannian {
        ascent: k,
        shape: Partition::new(parts).ok()?,
    })
}

/// `(w0 * w0, w_hat)` in `S_{2n}` realizing the matrix Schubert variety of `w`
/// as a Kazhdan-Lusztig variety; `w_hat = w0^(2n) (w x 1_n)`.
pub fn embed_matrix_schubert(w: &Permutation) -> Result<(Permutation, Permutation)> {
    let n = w.n();
    if 2 * n > MAX_N {
        return Err(KlError::Parse(format!(
            "embedding S_{n} into S_{} exceeds the supported size {MAX_N}",
            2 * n
        )));
    }
    let mut star = Vec::with_capacity(2 * n);
    for i in 1..=n {
        star.push(n - i + 1);
    }
    for i in 1..=n {
        star.push(n - i + 1 + n);
    }
    let mut w_times_one = w.to_vec();
    w_times_one.extend(n + 1..=2 * n);
    let hat: Vec<usize> = w_times_one.iter().map(|&x| 2 * n + 1 - x).collect();
    Ok((Permutation::new(&star)?, Permutation::new(&hat)?))
}
