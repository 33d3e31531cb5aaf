//! A small Gröbner engine specialised to the ideals in this crate: dense
//! exponent vectors indexed by variable rank, so that lexicographic
//! comparison of the raw arrays is the monomial order.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering as AtOrd};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{KlError, Result};
use crate::poly::{Coeff, Monomial, Polynomial, TermOrder, Var};

/// Slot 0 holds the total degree for graded orders; slots `1..` hold the
/// exponents of the variables from largest to smallest.
pub const MAX_VARS: usize = 63;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono([u8; MAX_VARS + 1]);

impl Mono {
    pub const ONE: Mono = Mono([0; MAX_VARS + 1]);

    #[inline]
    pub fn exp(&self, k: usize) -> u8 {
        self.0[k + 1]
    }

    pub fn degree(&self, nvars: usize) -> u32 {
        self.0[1..=nvars].iter().map(|&e| e as u32).sum()
    }

    #[inline]
    fn divides(&self, other: &Mono, nvars: usize) -> bool {
        self.0[1..=nvars]
            .iter()
            .zip(&other.0[1..=nvars])
            .all(|(a, b)| a <= b)
    }

    #[inline]
    fn mul(&self, other: &Mono, nvars: usize) -> Mono {
        let mut out = *self;
        for k in 0..=nvars {
            out.0[k] += other.0[k];
        }
        out
    }

    #[inline]
    fn div(&self, other: &Mono, nvars: usize) -> Mono {
        let mut out = *self;
        for k in 0..=nvars {
            out.0[k] -= other.0[k];
        }
        out
    }

    fn lcm(&self, other: &Mono, nvars: usize, graded: bool) -> Mono {
        let mut out = Mono::ONE;
        let mut d = 0u8;
        for k in 1..=nvars {
            out.0[k] = self.0[k].max(other.0[k]);
            d += out.0[k];
        }
        if graded {
            out.0[0] = d;
        }
        out
    }

    fn coprime(&self, other: &Mono, nvars: usize) -> bool {
        (1..=nvars).all(|k| self.0[k] == 0 || other.0[k] == 0)
    }

    fn support(&self, nvars: usize) -> u64 {
        let mut s = 0u64;
        for k in 0..nvars {
            if self.0[k + 1] > 0 {
                s |= 1 << k;
            }
        }
        s
    }

    pub fn is_squarefree(&self, nvars: usize) -> bool {
        self.0[1..=nvars].iter().all(|&e| e <= 1)
    }
}

impl std::fmt::Debug for Mono {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Mono{:?}", &self.0[..12])
    }
}

/// Polynomial ring `Q[vars]` with a fixed monomial order.
#[derive(Clone, Debug)]
pub struct Ring {
    /// Variables from largest to smallest.
    pub vars: Vec<Var>,
    pub order: TermOrder,
    index: HashMap<Var, usize>,
}

/// Terms sorted in decreasing monomial order, no zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly {
    pub terms: Vec<(Mono, Coeff)>,
}

impl Poly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> &Mono {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &Coeff {
        &self.terms[0].1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lc().recip();
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, c * &inv)).collect(),
        }
    }
}

impl Ring {
    pub fn new(mut vars: Vec<Var>, order: TermOrder) -> Result<Self> {
        if vars.len() > MAX_VARS {
            return Err(KlError::Invariant(format!(
                "{} variables exceed the engine limit of {MAX_VARS}",
                vars.len()
            )));
        }
        order.sort_desc(&mut vars);
        vars.dedup();
        let index = vars.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        Ok(Self { vars, order, index })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn graded(&self) -> bool {
        self.order.is_graded()
    }

    pub fn var_index(&self, v: Var) -> Option<usize> {
        self.index.get(&v).copied()
    }

    pub fn mono_from_exps(&self, exps: &[(usize, u8)]) -> Mono {
        let mut m = Mono::ONE;
        for &(k, e) in exps {
            m.0[k + 1] += e;
            if self.graded() {
                m.0[0] += e;
            }
        }
        m
    }

    pub fn var_mono(&self, k: usize) -> Mono {
        self.mono_from_exps(&[(k, 1)])
    }

    pub fn mul_mono(&self, a: &Mono, b: &Mono) -> Mono {
        a.mul(b, self.nvars())
    }

    pub fn from_map(&self, map: BTreeMap<Mono, Coeff>) -> Poly {
        Poly {
            terms: map.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn from_polynomial(&self, p: &Polynomial) -> Result<Poly> {
        let mut map = BTreeMap::new();
        for (m, c) in p.terms() {
            let mut exps = vec![];
            for &(v, e) in m.pairs() {
                let k = self.var_index(v).ok_or_else(|| {
                    KlError::Invariant(format!("variable {v} is not in the ring"))
                })?;
                if e < 0 {
                    return Err(KlError::Invariant("negative exponent in ring element".into()));
                }
                exps.push((k, e as u8));
            }
            map.insert(self.mono_from_exps(&exps), c.clone());
        }
        Ok(self.from_map(map))
    }

    pub fn to_monomial(&self, m: &Mono) -> Monomial {
        Monomial::from_pairs(
            (0..self.nvars())
                .filter(|&k| m.exp(k) > 0)
                .map(|k| (self.vars[k], m.exp(k) as i32)),
        )
    }

    pub fn to_polynomial(&self, p: &Poly) -> Polynomial {
        Polynomial::from_terms(p.terms.iter().map(|(m, c)| (self.to_monomial(m), c.clone())))
    }

    pub fn is_homogeneous(&self, p: &Poly) -> bool {
        let n = self.nvars();
        match p.terms.first() {
            None => true,
            Some((m0, _)) => {
                let d = m0.degree(n);
                p.terms.iter().all(|(m, _)| m.degree(n) == d)
            }
        }
    }

    pub fn homogeneous_components(&self, p: &Poly) -> Vec<Poly> {
        let n = self.nvars();
        let mut by: BTreeMap<u32, Vec<(Mono, Coeff)>> = BTreeMap::new();
        for (m, c) in &p.terms {
            by.entry(m.degree(n)).or_default().push((*m, c.clone()));
        }
        by.into_values().map(|terms| Poly { terms }).collect()
    }

    fn s_poly(&self, f: &Poly, g: &Poly) -> BTreeMap<Mono, Coeff> {
        let n = self.nvars();
        let l = f.lm().lcm(g.lm(), n, self.graded());
        let mf = l.div(f.lm(), n);
        let mg = l.div(g.lm(), n);
        let cf = f.lc().recip();
        let cg = g.lc().recip();
        let mut acc: BTreeMap<Mono, Coeff> = BTreeMap::new();
        for (m, c) in &f.terms[1..] {
            add_into(&mut acc, m.mul(&mf, n), c * &cf);
        }
        for (m, c) in &g.terms[1..] {
            add_into(&mut acc, m.mul(&mg, n), -(c * &cg));
        }
        acc
    }
}

fn add_into(acc: &mut BTreeMap<Mono, Coeff>, m: Mono, c: Coeff) {
    if c.is_zero() {
        return;
    }
    match acc.entry(m) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// A list of divisors with a support filter for fast lookup.
pub struct Divisors<'a> {
    ring: &'a Ring,
    basis: &'a [Poly],
    supports: Vec<u64>,
}

impl<'a> Divisors<'a> {
    pub fn new(ring: &'a Ring, basis: &'a [Poly]) -> Self {
        let n = ring.nvars();
        Self {
            ring,
            basis,
            supports: basis.iter().map(|g| g.lm().support(n)).collect(),
        }
    }

    /// First basis element, in list order, whose leading monomial divides `m`.
    pub fn find(&self, m: &Mono) -> Option<&'a Poly> {
        let n = self.ring.nvars();
        let s = m.support(n);
        self.basis
            .iter()
            .zip(&self.supports)
            .find(|(g, &gs)| gs & !s == 0 && g.lm().divides(m, n))
            .map(|(g, _)| g)
    }

    fn subtract(&self, acc: &mut BTreeMap<Mono, Coeff>, m: &Mono, c: &Coeff, g: &Poly) {
        let n = self.ring.nvars();
        let q = m.div(g.lm(), n);
        let factor = c / g.lc();
        for (gm, gc) in &g.terms[1..] {
            add_into(acc, gm.mul(&q, n), -(gc * &factor));
        }
    }

    /// Full normal form.
    pub fn normal_form(&self, p: BTreeMap<Mono, Coeff>) -> Poly {
        let mut acc = p;
        let mut rem: Vec<(Mono, Coeff)> = Vec::new();
        while let Some((m, c)) = acc.pop_last() {
            match self.find(&m) {
                Some(g) => self.subtract(&mut acc, &m, &c, g),
                None => rem.push((m, c)),
            }
        }
        Poly { terms: rem }
    }

    /// Whether `p` top-reduces to zero; stops at the first irreducible leading term.
    pub fn reduces_to_zero(&self, p: BTreeMap<Mono, Coeff>) -> bool {
        let mut acc = p;
        while let Some((m, c)) = acc.pop_last() {
            match self.find(&m) {
                Some(g) => self.subtract(&mut acc, &m, &c, g),
                None => return false,
            }
        }
        true
    }
}

pub fn poly_to_map(p: &Poly) -> BTreeMap<Mono, Coeff> {
    p.terms.iter().cloned().collect()
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct BuchbergerReport {
    pub is_groebner: bool,
    pub spairs_checked: u64,
    pub spairs_skipped: u64,
    pub generators: usize,
}

/// Checks Buchberger's criterion: every S-polynomial reduces to zero.
/// Pairs with coprime leading monomials are skipped.
pub fn buchberger_verify(ring: &Ring, basis: &[Poly], budget: u64) -> Result<BuchbergerReport> {
    let basis: Vec<Poly> = basis.iter().filter(|g| !g.is_zero()).cloned().collect();
    let n = ring.nvars();
    let mut pairs = Vec::new();
    let mut skipped = 0u64;
    for a in 0..basis.len() {
        for b in a + 1..basis.len() {
            if basis[a].lm().coprime(basis[b].lm(), n) {
                skipped += 1;
            } else {
                pairs.push((a, b));
            }
        }
    }
    if pairs.len() as u64 > budget {
        return Err(KlError::BudgetExceeded(budget));
    }
    let div = Divisors::new(ring, &basis);
    let checked = AtomicU64::new(0);
    let ok = pairs.par_iter().all(|&(a, b)| {
        checked.fetch_add(1, AtOrd::Relaxed);
        div.reduces_to_zero(ring.s_poly(&basis[a], &basis[b]))
    });
    Ok(BuchbergerReport {
        is_groebner: ok,
        spairs_checked: if ok { pairs.len() as u64 } else { checked.load(AtOrd::Relaxed) },
        spairs_skipped: skipped,
        generators: basis.len(),
    })
}

/// Minimal generators of the monomial ideal spanned by the leading monomials.
pub fn minimal_leading_monomials(ring: &Ring, basis: &[Poly]) -> Vec<Mono> {
    let n = ring.nvars();
    let mut lms: Vec<Mono> = basis.iter().filter(|g| !g.is_zero()).map(|g| *g.lm()).collect();
    lms.sort_by_key(|m| (m.degree(n), std::cmp::Reverse(*m)));
    lms.dedup();
    let mut out: Vec<Mono> = Vec::new();
    for m in lms {
        if !out.iter().any(|d| d.divides(&m, n)) {
            out.push(m);
        }
    }
    out
}

/// The reduced Gröbner basis, assuming `basis` is already a Gröbner basis:
/// `{ m - NF(m) }` over the minimal leading monomials `m`.
pub fn interreduce(ring: &Ring, basis: &[Poly]) -> Vec<Poly> {
    let basis: Vec<Poly> = basis.iter().filter(|g| !g.is_zero()).cloned().collect();
    let div = Divisors::new(ring, &basis);
    let mins = minimal_leading_monomials(ring, &basis);
    let mut out: Vec<Poly> = mins
        .par_iter()
        .map(|m| {
            let g = div.find(m).expect("a leading monomial divides itself");
            // reduce the tail of the monic generator with leading monomial dividing m
            let n = ring.nvars();
            let q = m.div(g.lm(), n);
            let inv = g.lc().recip();
            let mut tail = BTreeMap::new();
            for (gm, gc) in &g.terms[1..] {
                add_into(&mut tail, gm.mul(&q, n), gc * &inv);
            }
            let nf = div.normal_form(tail);
            let mut terms = vec![(*m, Coeff::one())];
            terms.extend(nf.terms);
            Poly { terms }
        })
        .collect();
    out.sort_by(|a, b| b.lm().cmp(a.lm()));
    out
}

/// Full Buchberger completion with the budget guard; used for negative
/// controls where the input is not already a Gröbner basis.
pub fn complete(ring: &Ring, basis: &[Poly], budget: u64) -> Result<Vec<Poly>> {
    let n = ring.nvars();
    let mut g: Vec<Poly> = basis.iter().filter(|p| !p.is_zero()).map(|p| p.monic()).collect();
    let mut pairs: Vec<(usize, usize)> = (0..g.len())
        .flat_map(|a| (a + 1..g.len()).map(move |b| (a, b)))
        .collect();
    let mut used = 0u64;
    while let Some((a, b)) = pairs.pop() {
        if g[a].lm().coprime(g[b].lm(), n) {
            continue;
        }
        used += 1;
        if used > budget {
            return Err(KlError::BudgetExceeded(budget));
        }
        let s = ring.s_poly(&g[a], &g[b]);
        let r = Divisors::new(ring, &g).normal_form(s);
        if !r.is_zero() {
            let k = g.len();
            g.push(r.monic());
            for a in 0..k {
                pairs.push((a, k));
            }
        }
    }
    Ok(interreduce(ring, &g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(vars: &[(usize, usize)]) -> Ring {
        Ring::new(vars.iter().map(|&(r, c)| Var::z(r, c)).collect(), TermOrder::KlLex).unwrap()
    }

    fn pp(r: &Ring, s: &str) -> Poly {
        r.from_polynomial(&Polynomial::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn ring_order_matches_termorder() {
        let r = ring(&[(1, 1), (2, 4), (4, 2), (2, 2)]);
        assert_eq!(r.vars[0], Var::z(2, 4));
        let p = pp(&r, "z11*z42 + z24 + z22^3");
        assert_eq!(r.to_monomial(p.lm()), Monomial::var(Var::z(2, 4)));
    }

    #[test]
    fn twisted_cubic_style() {
        // x^2 - y, xy - 1 style system in two variables
        let r = ring(&[(1, 1), (1, 2)]);
        let f = pp(&r, "z12^2 - z11");
        let g = pp(&r, "z12*z11 - 1");
        let rep = buchberger_verify(&r, &[f.clone(), g.clone()], 100).unwrap();
        assert!(!rep.is_groebner);
        let gb = complete(&r, &[f, g], 100).unwrap();
        let again = buchberger_verify(&r, &gb, 100).unwrap();
        assert!(again.is_groebner);
    }

    #[test]
    fn single_generator() {
        let r = ring(&[(1, 1), (1, 2)]);
        let rep = buchberger_verify(&r, &[pp(&r, "z11*z12 - z11")], 10).unwrap();
        assert!(rep.is_groebner);
        assert_eq!(rep.spairs_checked, 0);
    }

    #[test]
    fn interreduce_is_idempotent() {
        let r = ring(&[(1, 1), (1, 2), (2, 1)]);
        let g = complete(&r, &[pp(&r, "z11*z12 - z21"), pp(&r, "z12^2 - z11")], 1000).unwrap();
        assert_eq!(interreduce(&r, &g), g);
    }
}
