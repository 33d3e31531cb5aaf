//! Multiplicities of Schubert varieties at torus fixed points.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{KlError, Result};
use crate::ideal::essential_minors;
use crate::perm::{bruhat_leq_unchecked, cograssmannian_data, rothe_diagram, v_max, Cell, Partition, Permutation};
use crate::pipedreams::{enumerate_masks, PipeDream, ReadingWord};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    DirectHomogeneous,
    ViaVmax,
    CograssmannianDeterminant,
    Unresolved,
}

impl std::fmt::Display for Route {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Route::DirectHomogeneous => "direct_homogeneous",
            Route::ViaVmax => "via_vmax",
            Route::CograssmannianDeterminant => "cograssmannian_determinant",
            Route::Unresolved => "unresolved",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplicityOutcome {
    pub v: Permutation,
    pub w: Permutation,
    pub value: Option<u64>,
    pub route: Route,
    /// The permutation whose pipe complex or shape produced the value.
    pub v_used: Permutation,
    pub facet_count: Option<u64>,
    pub tableau_count: Option<u64>,
    pub homogeneous: bool,
    pub homogeneous_vmax: Option<bool>,
}

/// Weakly increasing row bounds for flagged tableaux.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct FlagVector {
    pub b: Vec<usize>,
}

type HomCache = RwLock<HashMap<(Permutation, Permutation), bool>>;

fn hom_cache() -> &'static HomCache {
    static C: OnceLock<HomCache> = OnceLock::new();
    C.get_or_init(Default::default)
}

/// Memoized standard-grading homogeneity of `I_{v,w}`.
pub fn homogeneous(v: &Permutation, w: &Permutation) -> Result<bool> {
    if let Some(h) = hom_cache().read().unwrap().get(&(*v, *w)) {
        return Ok(*h);
    }
    let h = essential_minors(v, w)?.is_standardly_homogeneous();
    hom_cache().write().unwrap().insert((*v, *w), h);
    Ok(h)
}

/// `|RedPipes(v, w0 w)|`, the number of facets of the pipe complex.
pub fn facet_count(v: &Permutation, w: &Permutation) -> u64 {
    let q = ReadingWord::new(v);
    let target = Permutation::longest(v.n()).compose(w).expect("same size");
    enumerate_masks(&q, &target, true).len() as u64
}

/// `b_m = max { i : lambda(v)_i >= lambda(w)_m + i - m }` for each nonzero part of `lambda(w)`.
pub fn flag_vector(lv: &Partition, lw: &Partition) -> Result<FlagVector> {
    if !lv.contains(lw) {
        return Err(KlError::NotContained { inner: lw.to_string(), outer: lv.to_string() });
    }
    let rows = lv.parts.len().max(lw.parts.len());
    let b = (1..=lw.length())
        .map(|m| {
            (1..=rows)
                .filter(|&i| lv.part(i) + m >= lw.part(m) + i)
                .max()
                .unwrap_or(m)
        })
        .collect();
    Ok(FlagVector { b })
}

/// Semistandard tableaux of shape `lambda` whose row-`m` entries are at most `b_m`.
pub fn flagged_ssyt_count(lambda: &Partition, b: &FlagVector) -> u64 {
    let rows: Vec<usize> = lambda.parts.iter().copied().filter(|&p| p > 0).collect();
    if rows.is_empty() {
        return 1;
    }
    if b.b.len() < rows.len() {
        return 0;
    }
    let cells: Vec<(usize, usize)> = rows
        .iter()
        .enumerate()
        .flat_map(|(r, &len)| (0..len).map(move |c| (r, c)))
        .collect();
    let mut grid: Vec<Vec<usize>> = rows.iter().map(|&l| vec![0; l]).collect();
    fn go(k: usize, cells: &[(usize, usize)], grid: &mut Vec<Vec<usize>>, b: &[usize]) -> u64 {
        if k == cells.len() {
            return 1;
        }
        let (r, c) = cells[k];
        let mut lo = 1;
        if c > 0 {
            lo = lo.max(grid[r][c - 1]);
        }
        if r > 0 {
            lo = lo.max(grid[r - 1][c] + 1);
        }
        let mut total = 0;
        for e in lo..=b[r] {
            grid[r][c] = e;
            total += go(k + 1, cells, grid, b);
        }
        grid[r][c] = 0;
        total
    }
    go(0, &cells, &mut grid, &b.b)
}

fn binomial(a: i64, k: i64) -> BigInt {
    if k < 0 || a < 0 || k > a {
        return BigInt::zero();
    }
    let k = k.min(a - k);
    let mut out = BigInt::one();
    for t in 0..k {
        out = out * BigInt::from(a - t) / BigInt::from(t + 1);
    }
    out
}

fn det_bigint(m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigInt::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    det.to_integer()
}

/// `det [ C(b_i + lambda_i - i + j - 1, lambda_i - i + j) ]` over the nonzero parts of `lambda`.
pub fn binomial_determinant(lambda: &Partition, b: &FlagVector) -> BigInt {
    let l = lambda.length();
    if l == 0 {
        return BigInt::one();
    }
    let m: Vec<Vec<BigInt>> = (1..=l)
        .map(|i| {
            let li = lambda.part(i) as i64;
            let bi = b.b[i - 1] as i64;
            let i = i as i64;
            (1..=l as i64).map(|j| binomial(bi + li - i + j - 1, li - i + j)).collect()
        })
        .collect();
    det_bigint(m)
}

/// Multiplicity data from the co-Grassmannian formulas, with `v` replaced by `v_max`.
#[derive(Clone, Debug, Serialize)]
pub struct CoGrassmannianRoute {
    pub v_max: Permutation,
    pub lambda_v: Partition,
    pub lambda_w: Partition,
    pub flag: FlagVector,
    pub tableaux: u64,
    #[serde(serialize_with = "bigint_string")]
    pub determinant: BigInt,
}

fn bigint_string<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn cograssmannian_route(v: &Permutation, w: &Permutation) -> Result<Option<CoGrassmannianRoute>> {
    let Some(cw) = cograssmannian_data(w) else {
        return Ok(None);
    };
    let vm = v_max(v, w)?;
    let cv = cograssmannian_data(&vm)
        .filter(|c| c.ascent == cw.ascent)
        .ok_or_else(|| KlError::Invariant(format!("v_max = {vm} is not co-Grassmannian with ascent {}", cw.ascent)))?;
    let flag = flag_vector(&cv.shape, &cw.shape)?;
    let tableaux = flagged_ssyt_count(&cw.shape, &flag);
    let determinant = binomial_determinant(&cw.shape, &flag);
    Ok(Some(CoGrassmannianRoute {
        v_max: vm,
        lambda_v: cv.shape,
        lambda_w: cw.shape,
        flag,
        tableaux,
        determinant,
    }))
}

fn check_pair(v: &Permutation, w: &Permutation) -> Result<()> {
    if v.n() != w.n() {
        return Err(KlError::SizeMismatch { left: v.n(), right: w.n() });
    }
    if !bruhat_leq_unchecked(v, w) {
        return Err(KlError::NotBelow { v: *v, w: *w });
    }
    Ok(())
}

/// Routes (1) and (2) only.
fn homogeneous_routes(v: &Permutation, w: &Permutation) -> Result<(bool, Option<(bool, Permutation)>)> {
    let h = homogeneous(v, w)?;
    if h {
        return Ok((true, None));
    }
    let vm = v_max(v, w)?;
    let hm = if vm == *v { false } else { homogeneous(&vm, w)? };
    Ok((false, Some((hm, vm))))
}

pub fn multiplicity(v: &Permutation, w: &Permutation) -> Result<MultiplicityOutcome> {
    check_pair(v, w)?;
    let (h, vm) = homogeneous_routes(v, w)?;
    let mut out = MultiplicityOutcome {
        v: *v,
        w: *w,
        value: None,
        route: Route::Unresolved,
        v_used: *v,
        facet_count: None,
        tableau_count: None,
        homogeneous: h,
        homogeneous_vmax: vm.map(|x| x.0),
    };
    if h {
        let f = facet_count(v, w);
        out.value = Some(f);
        out.facet_count = Some(f);
        out.route = Route::DirectHomogeneous;
        return Ok(out);
    }
    if let Some((true, vm)) = vm {
        let f = facet_count(&vm, w);
        out.value = Some(f);
        out.facet_count = Some(f);
        out.route = Route::ViaVmax;
        out.v_used = vm;
        return Ok(out);
    }
    if let Some(c) = cograssmannian_route(v, w)? {
        out.value = c.determinant.to_u64();
        out.tableau_count = Some(c.tableaux);
        out.route = Route::CograssmannianDeterminant;
        out.v_used = c.v_max;
    }
    Ok(out)
}

/// Every applicable route, for cross-checking.
#[derive(Clone, Debug, Serialize)]
pub struct AllRoutes {
    pub direct: Option<u64>,
    pub via_vmax: Option<u64>,
    pub cograssmannian: Option<CoGrassmannianRoute>,
}

impl AllRoutes {
    /// Distinct values produced by the routes that apply.
    pub fn values(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self
            .direct
            .into_iter()
            .chain(self.via_vmax)
            .chain(self.cograssmannian.iter().flat_map(|c| [c.tableaux, c.determinant.to_u64().unwrap_or(0)]))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

pub fn multiplicity_all_routes(v: &Permutation, w: &Permutation) -> Result<AllRoutes> {
    check_pair(v, w)?;
    let direct = if homogeneous(v, w)? { Some(facet_count(v, w)) } else { None };
    let vm = v_max(v, w)?;
    let via_vmax = if homogeneous(&vm, w)? { Some(facet_count(&vm, w)) } else { None };
    Ok(AllRoutes { direct, via_vmax, cograssmannian: cograssmannian_route(v, w)? })
}

/// The starting pipe dream: crosses on `lambda(w)` rotated and conjugated in the
/// lower right corner of `flatten(D(v))`, pulled back to `D(v)`.
pub fn starting_pipe_dream(v: &Permutation, w: &Permutation) -> Result<PipeDream> {
    let cw = cograssmannian_data(w).ok_or_else(|| KlError::Parse(format!("{w} is not co-Grassmannian")))?;
    let d = rothe_diagram(v);
    let flat = d.flattened_positions();
    let right = flat.iter().map(|c| c.col()).max().unwrap_or(0);
    let conj = cw.shape.conjugate();
    let mut crosses = Vec::new();
    for (r, &len) in conj.parts.iter().enumerate() {
        for c in right + 1 - len..=right {
            let target = Cell::new(r + 1, c);
            let k = flat
                .iter()
                .position(|&f| f == target)
                .ok_or_else(|| KlError::Invariant(format!("starting dream leaves flatten(D({v})) at {target}")))?;
            crosses.push(d.boxes[k]);
        }
    }
    PipeDream::new(*v, crosses)
}

/// How a single pair fared under routes (1) and (2).
#[derive(Clone, Debug, Serialize)]
pub struct PairRecord {
    pub v: Permutation,
    pub w: Permutation,
    pub homogeneous: bool,
    pub v_max: Permutation,
    pub homogeneous_vmax: bool,
    pub route: Route,
    pub value: Option<u64>,
}

impl PairRecord {
    pub fn csv_header() -> &'static str {
        "v,w,route,value,homogeneous,v_max,homogeneous_vmax"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.v,
            self.w,
            self.route,
            self.value.map(|x| x.to_string()).unwrap_or_else(|| "unresolved".into()),
            self.homogeneous,
            self.v_max,
            self.homogeneous_vmax
        )
    }
}

pub fn classify_pair(v: &Permutation, w: &Permutation) -> Result<PairRecord> {
    check_pair(v, w)?;
    let h = homogeneous(v, w)?;
    let vm = v_max(v, w)?;
    let hm = if vm == *v { h } else { homogeneous(&vm, w)? };
    let (route, value) = if h {
        (Route::DirectHomogeneous, Some(facet_count(v, w)))
    } else if hm {
        (Route::ViaVmax, Some(facet_count(&vm, w)))
    } else {
        (Route::Unresolved, None)
    };
    Ok(PairRecord { v: *v, w: *w, homogeneous: h, v_max: vm, homogeneous_vmax: hm, route, value })
}

#[derive(Clone, Copy, Debug)]
pub enum GammaMode {
    Exhaustive,
    Sample { count: usize, seed: u64 },
}

/// A failure of the parabolic maximality conjecture.
#[derive(Clone, Debug, Serialize)]
pub struct ConjectureCounterexample {
    pub v: Permutation,
    pub w: Permutation,
    pub moved: Permutation,
    pub side: &'static str,
    pub i: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaReport {
    pub n: usize,
    pub mode: String,
    pub pairs: usize,
    pub failed: usize,
    pub direct: usize,
    pub via_vmax: usize,
    pub unresolved: usize,
    pub pct_direct: f64,
    pub pct_resolved: f64,
    pub conjecture_instances: usize,
    pub conjecture_counterexamples: Vec<ConjectureCounterexample>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub records: Vec<PairRecord>,
}

fn pct(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        (1000.0 * a as f64 / b as f64).round() / 10.0
    }
}

/// Strict Bruhat pairs `v < w` in `S_n`, sorted.
pub fn gamma(n: usize) -> Vec<(Permutation, Permutation)> {
    let all = Permutation::all(n);
    let mut out: Vec<(Permutation, Permutation)> = all
        .par_iter()
        .flat_map_iter(|v| {
            all.iter()
                .filter(move |w| *w != v && bruhat_leq_unchecked(v, w))
                .map(move |w| (*v, *w))
        })
        .collect();
    out.sort();
    out
}

fn conjecture_checks(v: &Permutation, w: &Permutation) -> Result<(usize, Vec<ConjectureCounterexample>)> {
    let mut count = 0;
    let mut bad = Vec::new();
    for i in 1..w.n() {
        if w.has_right_descent(i) && !v.has_right_descent(i) {
            count += 1;
            let m = v.times_simple(i);
            if !homogeneous(&m, w)? {
                bad.push(ConjectureCounterexample { v: *v, w: *w, moved: m, side: "right", i });
            }
        }
        if w.has_left_descent(i) && !v.has_left_descent(i) {
            count += 1;
            let m = v.simple_times(i);
            if !homogeneous(&m, w)? {
                bad.push(ConjectureCounterexample { v: *v, w: *w, moved: m, side: "left", i });
            }
        }
    }
    Ok((count, bad))
}

pub fn gamma_statistics(n: usize, mode: GammaMode, keep_records: bool) -> Result<GammaReport> {
    let (pairs, mode_name) = match mode {
        GammaMode::Exhaustive => {
            if n > 5 {
                return Err(KlError::Parse(format!("exhaustive sweeps are limited to n <= 5, got {n}")));
            }
            (gamma(n), "exhaustive".to_string())
        }
        GammaMode::Sample { count, seed } => (
            crate::sampler::sample_pairs(n, count, seed).into_iter().map(|s| (s.v, s.w)).collect(),
            format!("sample({count}, seed={seed})"),
        ),
    };
    let results: Vec<Result<(PairRecord, usize, Vec<ConjectureCounterexample>)>> = pairs
        .par_iter()
        .map(|(v, w)| {
            let r = classify_pair(v, w)?;
            let (c, bad) = if r.homogeneous { conjecture_checks(v, w)? } else { (0, Vec::new()) };
            Ok((r, c, bad))
        })
        .collect();
    let mut report = GammaReport {
        n,
        mode: mode_name,
        pairs: 0,
        failed: 0,
        direct: 0,
        via_vmax: 0,
        unresolved: 0,
        pct_direct: 0.0,
        pct_resolved: 0.0,
        conjecture_instances: 0,
        conjecture_counterexamples: Vec::new(),
        records: Vec::new(),
    };
    for r in results {
        match r {
            Err(_) => report.failed += 1,
            Ok((rec, c, bad)) => {
                report.pairs += 1;
                match rec.route {
                    Route::DirectHomogeneous => report.direct += 1,
                    Route::ViaVmax => report.via_vmax += 1,
                    _ => report.unresolved += 1,
                }
                report.conjecture_instances += c;
                report.conjecture_counterexamples.extend(bad);
                if keep_records {
                    report.records.push(rec);
                }
            }
        }
    }
    report.pct_direct = pct(report.direct, report.pairs);
    report.pct_resolved = pct(report.direct + report.via_vmax, report.pairs);
    Ok(report)
}

/// Whether `b` is weakly increasing.
pub fn is_weakly_increasing(b: &FlagVector) -> bool {
    b.b.windows(2).all(|x| x[0] <= x[1])
}
