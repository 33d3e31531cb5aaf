//! Oracles and property checks shared by the property suite and the acceptance gate.
#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use kl_core::ktheory::{AscentChoice, KostantKumar};
use kl_core::mult::{binomial_determinant, flagged_ssyt_count, FlagVector};
use kl_core::nilhecke::{demazure_product, is_reduced, word_product};
use kl_core::perm::{bruhat_leq, canonical_word, rothe_diagram, Partition, Permutation};
use kl_core::pipedreams::{flatten, PipeDream};

pub fn perm_strategy(lo: usize, hi: usize) -> impl Strategy<Value = Permutation> {
    (lo..=hi)
        .prop_flat_map(|n| Just((1..=n).collect::<Vec<usize>>()).prop_shuffle())
        .prop_map(|w| Permutation::new(&w).unwrap())
}

/// A permutation with a subset of its diagram, as a bit mask over the boxes.
pub fn dream_strategy(lo: usize, hi: usize) -> impl Strategy<Value = (Permutation, u64)> {
    perm_strategy(lo, hi).prop_flat_map(|v| (Just(v), any::<u64>()))
}

pub fn word_strategy() -> impl Strategy<Value = (usize, Vec<usize>)> {
    (3usize..=7).prop_flat_map(|n| (Just(n), prop::collection::vec(1..n, 0..14)))
}

pub fn shape_strategy() -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    (1usize..=4)
        .prop_flat_map(|rows| (prop::collection::vec(1usize..=5, rows), prop::collection::vec(1usize..=6, rows)))
        .prop_map(|(mut parts, mut b)| {
            parts.sort_unstable_by(|a, b| b.cmp(a));
            b.sort_unstable();
            (parts, b)
        })
}

/// `w` uniform, `v` the product of a random subword of a reduced word of `w`,
/// so `v <= w`.
pub fn pair_strategy(lo: usize, hi: usize) -> impl Strategy<Value = (Permutation, Permutation)> {
    (perm_strategy(lo, hi), any::<u64>()).prop_map(|(w, mask)| {
        let n = w.n();
        let word = canonical_word(&Permutation::longest(n).compose(&w).unwrap());
        assert_eq!(word_product(n, &word).unwrap(), w);
        let sub: Vec<usize> = word.iter().enumerate().filter(|(k, _)| mask >> (k % 64) & 1 == 1).map(|(_, i)| *i).collect();
        (word_product(n, &sub).unwrap(), w)
    })
}

pub fn diagram_size(v: &Permutation) -> Result<(), TestCaseError> {
    let w0v = Permutation::longest(v.n()).compose(v).unwrap();
    prop_assert_eq!(rothe_diagram(v).len(), w0v.length(), "{}", v);
    Ok(())
}

pub fn canonical_word_reduced(v: &Permutation) -> Result<(), TestCaseError> {
    let n = v.n();
    let word = canonical_word(v);
    prop_assert!(is_reduced(n, &word).unwrap(), "{} {:?}", v, word);
    prop_assert_eq!(word_product(n, &word).unwrap().length(), word.len());
    Ok(())
}

pub fn strands_match_product(v: &Permutation, mask: u64) -> Result<(), TestCaseError> {
    let boxes = rothe_diagram(v).boxes;
    let crosses = boxes.iter().enumerate().filter(|(k, _)| mask >> (k % 64) & 1 == 1).map(|(_, c)| *c).collect();
    let d = PipeDream::new(*v, crosses).unwrap();
    if d.is_reduced() {
        let s = flatten(&d).unwrap();
        prop_assert_eq!(s.strand_permutation, d.demazure(), "{:?}", d);
        prop_assert!(!s.double_crossing);
    } else {
        prop_assert!(flatten(&d).is_err());
    }
    Ok(())
}

fn apply_rewrite(word: &[usize], at: usize) -> Option<Vec<usize>> {
    let mut w = word.to_vec();
    if at + 2 < w.len() {
        let (a, b, c) = (w[at], w[at + 1], w[at + 2]);
        if a == c && a.abs_diff(b) == 1 {
            w[at] = b;
            w[at + 1] = a;
            w[at + 2] = b;
            return Some(w);
        }
    }
    if at + 1 < w.len() && w[at].abs_diff(w[at + 1]) >= 2 {
        w.swap(at, at + 1);
        return Some(w);
    }
    None
}

/// Every braid or commutation rewrite of `word` has the same Demazure product.
pub fn demazure_rewrite_invariant(n: usize, word: &[usize]) -> Result<(), TestCaseError> {
    let base = demazure_product(n, word).unwrap();
    for at in 0..word.len() {
        if let Some(w) = apply_rewrite(word, at) {
            prop_assert_eq!(demazure_product(n, &w).unwrap(), base, "{:?} -> {:?}", word, w);
        }
    }
    Ok(())
}

pub fn flagged_formulas_agree(parts: &[usize], b: &[usize]) -> Result<(), TestCaseError> {
    let lambda = Partition::new(parts.to_vec()).unwrap();
    let flag = FlagVector { b: b.to_vec() };
    let count = flagged_ssyt_count(&lambda, &flag);
    prop_assert_eq!(binomial_determinant(&lambda, &flag), count.into(), "{:?} {:?}", parts, b);
    Ok(())
}

pub fn ascent_choice_irrelevant(v: &Permutation, w: &Permutation) -> Result<(), TestCaseError> {
    let last = KostantKumar::new(AscentChoice::Last).get(v, w).unwrap();
    let first = KostantKumar::new(AscentChoice::First).get(v, w).unwrap();
    prop_assert_eq!(last, first, "{} {}", v, w);
    Ok(())
}

/// Bruhat order as the reflexive transitive closure of covers `u -> u t` with
/// `l(u t) = l(u) + 1`.
pub fn cover_closure(n: usize) -> HashSet<(Permutation, Permutation)> {
    let all = Permutation::all(n);
    let mut rel = HashSet::new();
    for u in &all {
        let mut seen = HashSet::from([*u]);
        let mut queue = VecDeque::from([*u]);
        while let Some(x) = queue.pop_front() {
            rel.insert((*u, x));
            let word = x.to_vec();
            for i in 0..n {
                for j in i + 1..n {
                    let mut y = word.clone();
                    y.swap(i, j);
                    let y = Permutation::new(&y).unwrap();
                    if y.length() == x.length() + 1 && seen.insert(y) {
                        queue.push_back(y);
                    }
                }
            }
        }
    }
    rel
}

pub fn bruhat_matches_cover_closure(n: usize) -> Result<(), String> {
    let rel = cover_closure(n);
    let all = Permutation::all(n);
    for v in &all {
        for w in &all {
            if bruhat_leq(v, w).unwrap() != rel.contains(&(*v, *w)) {
                return Err(format!("{v} {w}"));
            }
        }
    }
    Ok(())
}

/// Runs `cases` seeded cases of a property; used where the harness needs a
/// pass/fail value instead of a panic.
pub fn run_property<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, proptest::test_runner::TestRng::deterministic_rng(config_rng_algo()));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn config_rng_algo() -> proptest::test_runner::RngAlgorithm {
    proptest::test_runner::RngAlgorithm::ChaCha
}
