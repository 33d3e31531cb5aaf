use kl_core::mult::*;
use kl_core::perm::{bruhat_leq, cograssmannian_data, Permutation};

fn p(s: &str) -> Permutation {
    s.parse().unwrap()
}

#[test]
fn gamma4_fully_resolved() {
    let r = gamma_statistics(4, GammaMode::Exhaustive, false).unwrap();
    assert_eq!(r.failed, 0);
    assert_eq!(r.unresolved, 0, "{r:?}");
    assert_eq!(r.pct_resolved, 100.0);
    assert!(r.conjecture_counterexamples.is_empty());
}

#[test]
fn worked_example_three_routes() {
    let (v, w) = (p("743198652"), p("975286431"));
    let all = multiplicity_all_routes(&v, &w).unwrap();
    assert_eq!(all.values(), vec![5]);
    assert!(all.direct.is_some() || all.via_vmax.is_some());
    let m = multiplicity(&v, &w).unwrap();
    assert_eq!(m.value, Some(5));
}

#[test]
fn route_consistency_cograssmannian_s5() {
    let all = Permutation::all(5);
    for w in all.iter().filter(|w| cograssmannian_data(w).is_some()) {
        let k = cograssmannian_data(w).unwrap().ascent;
        for v in all.iter().filter(|v| cograssmannian_data(v).map(|c| c.ascent) == Some(k)) {
            if !bruhat_leq(v, w).unwrap() {
                continue;
            }
            let r = multiplicity_all_routes(v, w).unwrap();
            let c = r.cograssmannian.as_ref().unwrap();
            assert_eq!(r.direct, Some(c.tableaux), "{v} {w}");
            assert_eq!(r.values().len(), 1, "{v} {w}: {r:?}");
            let s = starting_pipe_dream(v, w).unwrap();
            assert!(s.is_reduced(), "{v} {w}");
            assert_eq!(s.demazure(), Permutation::longest(5).compose(w).unwrap());
        }
    }
}

/// Long-running: `cargo test --release --test mult -- --ignored`.
#[test]
#[ignore]
fn success_estimates_large_n() {
    for (n, expected) in [(8, 73.0), (9, 62.0), (10, 46.0)] {
        let r = kl_core::sampler::estimate_success(kl_core::sampler::TrialConfig { n, trials: 2000, seed: 0 }).unwrap();
        assert_eq!(r.failed, 0);
        assert!((r.pct - expected).abs() <= 6.0, "n = {n}: {r:?}");
    }
}
