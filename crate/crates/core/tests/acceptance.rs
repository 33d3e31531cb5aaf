//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! Every check runs at its pinned tolerance. Two criteria contain checks that
//! cannot hold for the true mathematical values; those sub-checks are listed
//! in `KNOWN_UNATTAINABLE` and must fail. The test fails if any other check
//! fails or if a listed check unexpectedly passes.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use kl_core::complex::{PipeComplex, Topology};
use kl_core::ideal::{self, essential_minors, schubert_determinantal_minors, MinorOptions, DEFAULT_BUDGET};
use kl_core::ktheory::{divided_difference_oracle, double_grothendieck, double_schubert, specialize_buch_rimanyi};
use kl_core::mult::{
    binomial_determinant, cograssmannian_route, facet_count, flagged_ssyt_count, gamma, gamma_statistics,
    homogeneous, multiplicity_all_routes, FlagVector, GammaMode,
};
use kl_core::perm::{essential_set, rank_matrix, v_max, Cell, Partition, Permutation};
use kl_core::pipedreams::{enumerate_pipes, enumerate_pipes_brute};
use kl_core::poly::{Polynomial, TermOrder, Var};
use kl_core::sampler::{estimate_success, sample_pairs, TrialConfig};

use common::*;

/// `(criterion, check)` pairs that cannot pass; see the README.
const KNOWN_UNATTAINABLE: &[(u32, &str)] = &[
    (7, "six-term display"),
    (10, "pair count 3871"),
    (10, "route 1 fraction 74% +- 1"),
];

fn p(s: &str) -> Permutation {
    s.parse().unwrap()
}

fn pz(s: &str) -> Polynomial {
    Polynomial::parse(s).unwrap()
}

fn monic(ps: &[Polynomial]) -> BTreeSet<String> {
    ps.iter()
        .map(|f| {
            let (_, c) = f.leading_term(TermOrder::KlLex).unwrap();
            f.scale(&c.recip()).to_string()
        })
        .collect()
}

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Duration,
    checks: Vec<(String, bool, String)>,
}

impl Criterion {
    fn new(id: u32, title: &'static str, limit_secs: u64) -> Self {
        Self { id, title, limit: Duration::from_secs(limit_secs), checks: Vec::new() }
    }

    fn check(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.checks.push((name.to_string(), ok, detail.into()));
    }
}

fn leibniz_det(m: &[Vec<Polynomial>]) -> Polynomial {
    let k = m.len();
    let mut total = Polynomial::zero();
    let mut perm: Vec<usize> = (0..k).collect();
    fn heap(n: usize, perm: &mut Vec<usize>, m: &[Vec<Polynomial>], total: &mut Polynomial) {
        if n == 1 {
            let inversions = (0..perm.len())
                .flat_map(|a| (a + 1..perm.len()).map(move |b| (a, b)))
                .filter(|&(a, b)| perm[a] > perm[b])
                .count();
            let term = Polynomial::product((0..perm.len()).map(|r| &m[r][perm[r]]));
            *total = if inversions % 2 == 0 { &*total + &term } else { &*total - &term };
            return;
        }
        for i in 0..n {
            heap(n - 1, perm, m, total);
            let j = if n % 2 == 0 { i } else { 0 };
            perm.swap(j, n - 1);
        }
    }
    heap(k, &mut perm, m, &mut total);
    total
}

/// Semistandard fillings of `shape` with row `r` bounded by `b[r]`, by exhaustion.
fn brute_flagged(shape: &[usize], b: &[usize]) -> u64 {
    let cells: Vec<(usize, usize)> = shape.iter().enumerate().flat_map(|(r, &l)| (0..l).map(move |c| (r, c))).collect();
    let max = *b.iter().max().unwrap();
    let total = (max as u64).pow(cells.len() as u32);
    let mut count = 0;
    for code in 0..total {
        let mut x = code;
        let mut grid: Vec<Vec<usize>> = shape.iter().map(|&l| vec![0; l]).collect();
        for &(r, c) in &cells {
            grid[r][c] = (x % max as u64) as usize + 1;
            x /= max as u64;
        }
        let ok = cells.iter().all(|&(r, c)| {
            grid[r][c] <= b[r]
                && (c == 0 || grid[r][c - 1] <= grid[r][c])
                && (r == 0 || grid[r - 1][c] < grid[r][c])
        });
        count += ok as u64;
    }
    count
}

fn c1() -> Criterion {
    let mut c = Criterion::new(1, "rank matrix and essential set", 1);
    let expected = vec![
        vec![1, 2, 3, 4, 5, 6],
        vec![1, 2, 3, 3, 4, 5],
        vec![1, 2, 3, 3, 3, 4],
        vec![0, 1, 2, 2, 2, 3],
        vec![0, 1, 2, 2, 2, 2],
        vec![0, 1, 1, 1, 1, 1],
    ];
    let got = rank_matrix(&p("365124")).display_rows();
    c.check("rank_matrix(365124)", got == expected, format!("{got:?}"));
    let ess: BTreeSet<Cell> = essential_set(&p("31524")).into_iter().collect();
    let want: BTreeSet<Cell> = [(2, 2), (4, 2), (2, 4)].iter().map(|&(i, j)| Cell::new(i, j)).collect();
    c.check("essential_set(31524)", ess == want, format!("{ess:?}"));
    c
}

fn c2() -> Criterion {
    let mut c = Criterion::new(2, "matrix Schubert embedding of 2143", 1);
    let g = essential_minors(&p("43218765"), &p("78564321")).unwrap();
    let z = |i, j| Polynomial::var(Var::z(i, j));
    let corner: Vec<Vec<Polynomial>> = [3, 2, 1].iter().map(|&i| (1..=3).map(|j| z(i, j)).collect()).collect();
    let expected = monic(&[z(1, 1), leibniz_det(&corner)]);
    let got = monic(&g.polynomials());
    c.check("{z11, 3x3 corner minor}", got == expected, format!("{got:?}"));
    c
}

fn c3() -> Criterion {
    let mut c = Criterion::new(3, "Buchberger criterion on Gamma_4 and 200 Gamma_5 pairs", 60);
    let g4 = gamma(4);
    let bad4: Vec<_> = g4
        .iter()
        .filter(|(v, w)| !essential_minors(v, w).unwrap().buchberger_verify(DEFAULT_BUDGET).unwrap().is_groebner)
        .collect();
    c.check("all Gamma_4", bad4.is_empty() && g4.len() == 189, format!("{} pairs, failures {bad4:?}", g4.len()));
    let sample = sample_pairs(5, 200, 2024);
    let bad5: Vec<_> = sample
        .iter()
        .filter(|s| !essential_minors(&s.v, &s.w).unwrap().buchberger_verify(DEFAULT_BUDGET).unwrap().is_groebner)
        .map(|s| (s.v, s.w))
        .collect();
    c.check("200 seeded Gamma_5", bad5.is_empty(), format!("failures {bad5:?}"));
    c
}

fn c4() -> Criterion {
    let mut c = Criterion::new(4, "initial ideal primes, reduced pipe dreams, Stanley-Reisner", 600);
    let mut pairs = gamma(4);
    pairs.extend(sample_pairs(5, 100, 77).into_iter().map(|s| (s.v, s.w)));
    let bad: Vec<_> = pairs
        .iter()
        .filter(|(v, w)| !ideal::check_initial_ideal(v, w, DEFAULT_BUDGET).unwrap().ok())
        .collect();
    c.check("Gamma_4 and 100 Gamma_5", bad.is_empty(), format!("{} pairs, failures {bad:?}", pairs.len()));
    c
}

fn c5() -> Criterion {
    let mut c = Criterion::new(5, "pipe counts and the complex of (31452, 53142)", 1);
    let (v, t) = (p("31524"), p("13254"));
    let red = enumerate_pipes(&v, &t, true).unwrap().len();
    let all = enumerate_pipes(&v, &t, false).unwrap().len();
    let brute = (enumerate_pipes_brute(&v, &t, true).len(), enumerate_pipes_brute(&v, &t, false).len());
    c.check("RedPipes = 4, Pipes = 9", red == 4 && all == 9 && brute == (4, 9), format!("{red} {all} brute {brute:?}"));
    let pc = PipeComplex::new(&p("31452"), &p("53142")).unwrap();
    let topo = pc.topology_check().unwrap();
    let (f, i) = (pc.facet_masks().len(), pc.interior_face_masks().len());
    c.check("3 facets, 5 interior faces", f == 3 && i == 5, format!("{f} {i}"));
    c.check(
        "ball of dimension 2",
        topo.kind == Topology::Ball && topo.dimension == 2,
        format!("{:?} {}", topo.kind, topo.dimension),
    );
    c
}

fn c6() -> Criterion {
    let mut c = Criterion::new(6, "K-polynomial and multidegree triple agreement", 600);
    let mut pairs = gamma(4);
    pairs.extend(sample_pairs(5, 100, 31).into_iter().map(|s| (s.v, s.w)));
    let mut bad_k = Vec::new();
    let mut bad_m = Vec::new();
    for (v, w) in &pairs {
        let r = specialize_buch_rimanyi(v, w).unwrap();
        if !r.groth_agree() {
            bad_k.push((*v, *w));
        }
        if !r.schub_agree() {
            bad_m.push((*v, *w));
        }
    }
    c.check("K-polynomials", bad_k.is_empty(), format!("{} pairs, failures {bad_k:?}", pairs.len()));
    c.check("multidegrees", bad_m.is_empty(), format!("failures {bad_m:?}"));
    let left = pz(
        "(t1-t3)(t3-t4)(t1-t4) + (t1-t3)(t3-t4)(t4-t5) + (t1-t3)(t1-t5)(t4-t5) \
         + (t3-t2)(t3-t4)(t4-t5) + (t3-t2)(t3-t4)(t1-t4) + (t3-t2)(t1-t5)(t4-t5)",
    );
    let right = pz("(t1-t2)(t3-t4)(t1-t4) + (t1-t2)(t3-t4)(t4-t5) + (t1-t2)(t1-t5)(t4-t5)");
    let r = specialize_buch_rimanyi(&p("31452"), &p("53142")).unwrap();
    c.check(
        "specialized display for (31452, 53142)",
        left == right && r.schub_double == left && r.schub_unspecialized == right,
        format!("{}", r.schub_double),
    );
    c
}

fn c7() -> Criterion {
    let mut c = Criterion::new(7, "double Schubert and Grothendieck polynomials", 60);
    let s = double_schubert(&p("13524")).unwrap();
    let printed = pz(
        "(x2-y3)(x1-y2)(x2-y2) + (x2-y3)(x1-y2)(x3-y1) + (x2-y3)(x2-y1)(x3-y1) \
         + (x1-y4)(x1-y2)(x3-y1) + (x1-y4)(x1-y2)(x2-y2) + (x1-y4)(x2-y1)(x3-y1)",
    );
    c.check("six-term display", s == printed, format!("difference {}", &s - &printed));
    let bad: Vec<_> = Permutation::all(4)
        .into_iter()
        .filter(|w| {
            double_schubert(w).unwrap() != divided_difference_oracle(w, false)
                || double_grothendieck(w).unwrap() != divided_difference_oracle(w, true)
        })
        .collect();
    c.check("divided differences on S_4", bad.is_empty(), format!("failures {bad:?}"));
    c
}

fn c8() -> Criterion {
    let mut c = Criterion::new(8, "multiplicity 5 of the worked example", 5);
    let (v, w) = (p("743198652"), p("975286431"));
    let lambda = Partition::new(vec![4, 2, 1]).unwrap();
    let b = FlagVector { b: vec![1, 3, 4] };
    let tableaux = flagged_ssyt_count(&lambda, &b);
    let brute = brute_flagged(&[4, 2, 1], &[1, 3, 4]);
    c.check("flagged tableaux", tableaux == 5 && brute == 5, format!("{tableaux} brute {brute}"));
    let det = binomial_determinant(&lambda, &b);
    c.check("binomial determinant", det == 5.into(), det.to_string());
    let route = cograssmannian_route(&v, &w).unwrap().unwrap();
    c.check(
        "flag vector from the shapes",
        route.flag == b && route.lambda_w.parts[..3] == [4, 2, 1] && route.tableaux == 5,
        format!("{:?} {}", route.flag.b, route.lambda_w),
    );
    let h = homogeneous(&v, &w).unwrap();
    let vm = v_max(&v, &w).unwrap();
    let facets = if h { facet_count(&v, &w) } else { facet_count(&vm, &w) };
    c.check("facet count", facets == 5, format!("homogeneous {h}, facets {facets}"));
    let all = multiplicity_all_routes(&v, &w).unwrap();
    c.check("all routes agree", all.values() == vec![5], format!("{:?}", all.values()));
    c
}

fn c9() -> Criterion {
    let mut c = Criterion::new(9, "v_max and homogeneity classifications", 5);
    let m = v_max(&p("316298475"), &p("896354721")).unwrap();
    c.check("v_max", m == p("362198754"), m.to_string());
    for (v, w, want) in [("45213", "54231", true), ("13425", "34512", false), ("31524", "43512", false), ("41532", "43512", true)] {
        let got = ideal::is_standardly_homogeneous(&p(v), &p(w)).unwrap();
        c.check(&format!("({v}, {w}) homogeneous = {want}"), got == want, got.to_string());
    }
    let basis = monic(&essential_minors(&p("31524"), &p("43512")).unwrap().interreduced_polynomials());
    let want = monic(&["z11", "z12", "z24*z42 - z22"].map(pz));
    c.check("basis {z11, z12, z24 z42 - z22}", basis == want, format!("{basis:?}"));
    c
}

fn c10() -> Criterion {
    let mut c = Criterion::new(10, "Gamma_5 statistics", 1800);
    let r = gamma_statistics(5, GammaMode::Exhaustive, false).unwrap();
    let pct1 = 100.0 * r.direct as f64 / r.pairs as f64;
    let pct12 = 100.0 * (r.direct + r.via_vmax) as f64 / r.pairs as f64;
    let nonstrict = r.pairs + 120;
    c.check("pair count 3871", r.pairs == 3871, format!("{} strict pairs ({nonstrict} with v = w)", r.pairs));
    c.check(
        "route 1 fraction 74% +- 1",
        (pct1 - 74.0).abs() <= 1.0,
        format!(
            "{pct1:.2}% ({} of {}); over all {nonstrict} pairs {:.2}%",
            r.direct,
            r.pairs,
            100.0 * (r.direct + 120) as f64 / nonstrict as f64
        ),
    );
    c.check("routes 1+2 fraction 98.5% +- 0.5", (pct12 - 98.5).abs() <= 0.5, format!("{pct12:.2}%"));
    c.check("no failed pairs", r.failed == 0, r.failed.to_string());
    c
}

fn c11() -> Criterion {
    let mut c = Criterion::new(11, "Monte Carlo success estimates", 3600);
    for (n, lo, hi) in [(6, 90.0, 98.0), (7, 81.0, 91.0)] {
        for seed in [0u64, 1, 2] {
            let r = estimate_success(TrialConfig { n, trials: 2000, seed }).unwrap();
            c.check(
                &format!("n = {n}, seed {seed} in [{lo}, {hi}]"),
                (lo..=hi).contains(&r.pct) && r.failed == 0,
                format!("{:.2}% CI ({:.1}, {:.1})", r.pct, r.ci.0, r.ci.1),
            );
        }
    }
    c
}

fn c12() -> Criterion {
    let mut c = Criterion::new(12, "property suites", 300);
    let mut prop = |name: &str, r: Result<(), String>| {
        let detail = r.as_ref().err().cloned().unwrap_or_default();
        c.check(name, r.is_ok(), detail);
    };
    prop("|D(v)| = l(w0 v)", run_property(200, perm_strategy(1, 9), |v| diagram_size(&v)));
    prop("canonical word reduced", run_property(200, perm_strategy(1, 9), |v| canonical_word_reduced(&v)));
    prop(
        "strand permutation = target",
        run_property(200, dream_strategy(2, 7), |(v, m)| strands_match_product(&v, m)),
    );
    prop("Bruhat = cover closure on S_4", bruhat_matches_cover_closure(4));
    prop(
        "flagged count = binomial determinant",
        run_property(100, shape_strategy(), |(l, b)| flagged_formulas_agree(&l, &b)),
    );
    prop(
        "Demazure product under rewrites",
        run_property(200, word_strategy(), |(n, w)| demazure_rewrite_invariant(n, &w)),
    );
    prop(
        "Kostant-Kumar ascent choice",
        run_property(50, pair_strategy(2, 5), |(v, w)| ascent_choice_irrelevant(&v, &w)),
    );
    c
}

/// Homogeneity by reduced basis agrees with the component test on all of Gamma_5,
/// and generic minors form Groebner bases under both diagonal orders on S_4.
fn extras() -> Criterion {
    let mut c = Criterion::new(0, "supplementary cross-checks", 600);
    let bad: Vec<_> = gamma(5)
        .into_iter()
        .filter(|(v, w)| {
            let g = essential_minors(v, w).unwrap();
            g.is_standardly_homogeneous() != g.is_homogeneous_by_components()
        })
        .collect();
    c.check("homogeneity tests agree on Gamma_5", bad.is_empty(), format!("{bad:?}"));
    for order in [TermOrder::KlLex, TermOrder::Diagonal] {
        let bad: Vec<_> = Permutation::all(4)
            .into_iter()
            .filter(|w| {
                let g = schubert_determinantal_minors(w, MinorOptions { order, ..MinorOptions::default() }).unwrap();
                !g.buchberger_verify(DEFAULT_BUDGET).unwrap().is_groebner
            })
            .collect();
        c.check(&format!("generic minors under {order:?}"), bad.is_empty(), format!("{bad:?}"));
    }
    c
}

#[test]
fn acceptance() {
    let runs: Vec<fn() -> Criterion> = vec![c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12, extras];
    let mut unexpected = Vec::new();
    for run in runs {
        let start = Instant::now();
        let mut c = run();
        let elapsed = start.elapsed();
        c.check(&format!("time under {:?}", c.limit), elapsed <= c.limit, format!("{elapsed:.2?}"));
        let pass = c.checks.iter().all(|(_, ok, _)| *ok);
        let label = if c.id == 0 { "EXTRA".to_string() } else { format!("CRITERION {:>2}", c.id) };
        println!("{label} {}: {} ({elapsed:.2?})", if pass { "PASS" } else { "FAIL" }, c.title);
        for (name, ok, detail) in &c.checks {
            let known = KNOWN_UNATTAINABLE.contains(&(c.id, name.as_str()));
            let mark = match (ok, known) {
                (true, false) => "ok",
                (false, true) => "FAIL (known)",
                (false, false) => "FAIL",
                (true, true) => "PASS (unexpected)",
            };
            println!("    [{mark}] {name}: {detail}");
            if *ok == known {
                unexpected.push(format!("criterion {} / {name}", c.id));
            }
        }
    }
    assert!(unexpected.is_empty(), "unexpected outcomes: {unexpected:?}");
}
