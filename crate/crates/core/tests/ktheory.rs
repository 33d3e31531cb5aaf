use kl_core::complex::PipeComplex;
use kl_core::ktheory::*;
use kl_core::perm::{bruhat_leq, Permutation};
use kl_core::poly::{Polynomial, Var};

fn p(s: &str) -> Permutation {
    s.parse().unwrap()
}

fn pz(s: &str) -> Polynomial {
    Polynomial::parse(s).unwrap()
}

fn gamma(n: usize) -> Vec<(Permutation, Permutation)> {
    let all = Permutation::all(n);
    let mut out = Vec::new();
    for v in &all {
        for w in &all {
            if bruhat_leq(v, w).unwrap() {
                out.push((*v, *w));
            }
        }
    }
    out
}

#[test]
fn double_polynomials_match_oracle_on_s4() {
    for w in Permutation::all(4) {
        assert_eq!(double_schubert(&w).unwrap(), divided_difference_oracle(&w, false), "schubert {w}");
        assert_eq!(double_grothendieck(&w).unwrap(), divided_difference_oracle(&w, true), "grothendieck {w}");
    }
}

#[test]
fn double_schubert_13524() {
    let s = double_schubert(&p("13524")).unwrap();
    assert_eq!(s, divided_difference_oracle(&p("13524"), false));
    let printed = pz(
        "(x2-y3)(x1-y2)(x2-y2) + (x2-y3)(x1-y2)(x3-y1) + (x2-y3)(x2-y1)(x3-y1) \
         + (x1-y4)(x1-y2)(x3-y1) + (x1-y4)(x1-y2)(x2-y2) + (x1-y4)(x2-y1)(x3-y1)",
    );
    let gap = pz("(x3-y1)(x3-y2)(x1+x2-y1-y2)");
    assert_eq!(&s - &printed, gap);
}

#[test]
fn monomial_positivity() {
    let zero_y: std::collections::BTreeMap<Var, Polynomial> =
        (1..=5).map(|k| (Var::y(k), Polynomial::zero())).collect();
    for w in Permutation::all(4) {
        let s = double_schubert(&w).unwrap().substitute(&zero_y).unwrap();
        assert!(s.terms().all(|(_, c)| c.is_integer() && *c > kl_core::poly::int(0)), "{w}: {s}");
    }
}

#[test]
fn example_4_6() {
    let r = specialize_buch_rimanyi(&p("31452"), &p("53142")).unwrap();
    let left = pz(
        "(t1-t3)(t3-t4)(t1-t4) + (t1-t3)(t3-t4)(t4-t5) + (t1-t3)(t1-t5)(t4-t5) \
         + (t3-t2)(t3-t4)(t4-t5) + (t3-t2)(t3-t4)(t1-t4) + (t3-t2)(t1-t5)(t4-t5)",
    );
    let right = pz("(t1-t2)(t3-t4)(t1-t4) + (t1-t2)(t3-t4)(t4-t5) + (t1-t2)(t1-t5)(t4-t5)");
    assert_eq!(left, right);
    assert_eq!(r.schub_double, left);
    assert_eq!(r.schub_unspecialized, right);
}

#[test]
fn triple_agreement_gamma4() {
    for (v, w) in gamma(4) {
        let r = specialize_buch_rimanyi(&v, &w).unwrap();
        assert!(r.disagreements().is_empty(), "{v} {w}: {:?}", r.disagreements());
    }
}

#[test]
fn complex_forms_agree_gamma4() {
    for (v, w) in gamma(4) {
        let c = PipeComplex::new(&v, &w).unwrap();
        let resc = WeightAssignment::rescaling(&v);
        let r = kpoly_via_complex(&c, &resc).unwrap();
        let g = unspecialized_grothendieck(&v, &w).unwrap();
        assert_eq!(r.kpoly, g, "{v} {w}");
        assert_eq!(kpoly_interior_form(&c, &resc), g, "{v} {w}");
        assert_eq!(r.multidegree, unspecialized_schubert(&v, &w).unwrap(), "{v} {w}");
        let d = kpoly_via_complex(&c, &WeightAssignment::dilation(&v)).unwrap();
        let facets = c.facet_masks().len() as i64;
        let codim = Permutation::longest(4).compose(&w).unwrap().length() as i32;
        assert_eq!(
            d.multidegree,
            Polynomial::from_int(facets).mul_monomial(&kl_core::poly::Monomial::from_pairs([(Var::t(0), codim)]))
        );
    }
}

#[test]
fn matrix_schubert_weights_give_double_polynomials() {
    for w in Permutation::all(3) {
        let (star, hat) = kl_core::perm::embed_matrix_schubert(&w).unwrap();
        let c = PipeComplex::new(&star, &hat).unwrap();
        let r = kpoly_via_complex(&c, &WeightAssignment::matrix_schubert(&star)).unwrap();
        assert_eq!(r.kpoly, double_grothendieck(&w).unwrap(), "{w}");
        assert_eq!(r.multidegree, double_schubert(&w).unwrap(), "{w}");
    }
}
