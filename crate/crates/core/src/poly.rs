//! Exact sparse multivariate Laurent polynomials over `Q`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{KlError, Result};

/// A named variable.
///
/// `Z(i, j)` are the coordinates of `Z^(v)`, `TBox(i, j)` the box variables
/// `t_ij`, and `T`, `X`, `Y` the torus weights.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Var {
    T(u16),
    TBox(u8, u8),
    X(u16),
    Y(u16),
    Z(u8, u8),
}

impl Var {
    pub fn z(row: usize, col: usize) -> Self {
        Var::Z(row as u8, col as u8)
    }

    pub fn t(k: usize) -> Self {
        Var::T(k as u16)
    }

    pub fn tbox(row: usize, col: usize) -> Self {
        Var::TBox(row as u8, col as u8)
    }

    pub fn x(k: usize) -> Self {
        Var::X(k as u16)
    }

    pub fn y(k: usize) -> Self {
        Var::Y(k as u16)
    }

    /// Canonical print order: t's ascending, then box t's, x, y, and z's by (col, row).
    fn sort_key(&self) -> (u8, u16, u16) {
        match *self {
            Var::T(k) => (0, k, 0),
            Var::TBox(r, c) => (1, r as u16, c as u16),
            Var::X(k) => (2, k, 0),
            Var::Y(k) => (3, k, 0),
            Var::Z(r, c) => (4, c as u16, r as u16),
        }
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

fn two_index(f: &mut fmt::Formatter<'_>, name: char, r: u8, c: u8) -> fmt::Result {
    if r < 10 && c < 10 {
        write!(f, "{name}{r}{c}")
    } else {
        write!(f, "{name}_{{{r},{c}}}")
    }
}

fn one_index(f: &mut fmt::Formatter<'_>, name: char, k: u16) -> fmt::Result {
    if k < 10 {
        write!(f, "{name}{k}")
    } else {
        write!(f, "{name}_{{{k}}}")
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Var::T(0) => f.write_str("t"),
            Var::T(k) => one_index(f, 't', k),
            Var::X(k) => one_index(f, 'x', k),
            Var::Y(k) => one_index(f, 'y', k),
            Var::TBox(r, c) => two_index(f, 't', r, c),
            Var::Z(r, c) => two_index(f, 'z', r, c),
        }
    }
}

/// A Laurent monomial: sorted `(variable, exponent)` pairs, no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Monomial(Vec<(Var, i32)>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Self(vec![(v, 1)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, i32)>) -> Self {
        let mut m: BTreeMap<Var, i32> = BTreeMap::new();
        for (v, e) in pairs {
            *m.entry(v).or_default() += e;
        }
        Self(m.into_iter().filter(|&(_, e)| e != 0).collect())
    }

    pub fn pairs(&self) -> &[(Var, i32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&(_, e)| e as i64).sum()
    }

    pub fn exponent(&self, v: Var) -> i32 {
        self.0
            .iter()
            .find(|(w, _)| *w == v)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.0.iter().all(|&(_, e)| e == 1)
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.iter().all(|&(_, e)| e > 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, &(v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "{v}")?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Monomial orders on the `z` variables.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TermOrder {
    /// Pure lex, variables further right larger, then further down larger.
    KlLex,
    /// Pure lex, variables further down larger, then further right larger.
    Diagonal,
    /// Total degree first, ties broken by `KlLex`.
    GradedKlLex,
}

impl TermOrder {
    /// Larger key means larger variable.
    pub fn var_key(&self, v: Var) -> (u8, i32, i32) {
        match v {
            Var::Z(r, c) => match self {
                TermOrder::KlLex | TermOrder::GradedKlLex => (1, c as i32, -(r as i32)),
                TermOrder::Diagonal => (1, -(r as i32), c as i32),
            },
            other => {
                let (a, b, c) = other.sort_key();
                (0, -(a as i32) * 1000 - b as i32, -(c as i32))
            }
        }
    }

    pub fn is_graded(&self) -> bool {
        matches!(self, TermOrder::GradedKlLex)
    }

    pub fn cmp_vars(&self, a: Var, b: Var) -> Ordering {
        self.var_key(a).cmp(&self.var_key(b))
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        if self.is_graded() {
            let d = a.degree().cmp(&b.degree());
            if d != Ordering::Equal {
                return d;
            }
        }
        let mut vars: Vec<Var> = a.vars().chain(b.vars()).collect();
        vars.sort_by(|x, y| self.cmp_vars(*y, *x));
        vars.dedup();
        for v in vars {
            let o = a.exponent(v).cmp(&b.exponent(v));
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    }

    /// Variables sorted from largest to smallest.
    pub fn sort_desc(&self, vars: &mut [Var]) {
        vars.sort_by(|x, y| self.cmp_vars(*y, *x));
    }
}

pub type Coeff = BigRational;

pub fn int(k: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(k))
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Coeff>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(int(1))
    }

    pub fn constant(c: Coeff) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn from_int(k: i64) -> Self {
        Self::constant(int(k))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v), int(1))
    }

    pub fn term(m: Monomial, c: Coeff) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, int(1))
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Coeff)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn scale(&self, c: &Coeff) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Product of `factors`.
    pub fn product<'a>(factors: impl IntoIterator<Item = &'a Polynomial>) -> Self {
        let mut out = Self::one();
        for f in factors {
            out = &out * f;
        }
        out
    }

    pub fn total_degree_range(&self) -> Option<(i64, i64)> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), d| (lo.min(d), hi.max(d))))
    }

    /// Whether every term has the same total degree.
    pub fn is_homogeneous(&self) -> bool {
        match self.total_degree_range() {
            None => true,
            Some((lo, hi)) => lo == hi,
        }
    }

    /// Sum of the terms of minimal total degree.
    pub fn lowest_degree_part(&self) -> Self {
        let Some((lo, _)) = self.total_degree_range() else {
            return Self::zero();
        };
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == lo)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Homogeneous components keyed by total degree.
    pub fn homogeneous_components(&self) -> BTreeMap<i64, Polynomial> {
        let mut out: BTreeMap<i64, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree()).or_default().add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn leading_term(&self, ord: TermOrder) -> Result<(Monomial, Coeff)> {
        self.terms
            .iter()
            .max_by(|a, b| ord.cmp(a.0, b.0))
            .map(|(m, c)| (m.clone(), c.clone()))
            .ok_or(KlError::ZeroPolynomial)
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut v: Vec<Var> = self.terms.keys().flat_map(|m| m.vars().collect::<Vec<_>>()).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Applies the ring homomorphism `var -> images[var]`; variables absent
    /// from `images` are left alone. A negative power requires the image to
    /// be a monomial.
    pub fn substitute(&self, images: &BTreeMap<Var, Polynomial>) -> Result<Self> {
        let mut cache: BTreeMap<(Var, i32), Polynomial> = BTreeMap::new();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut acc = Self::constant(c.clone());
            let mut keep = Monomial::one();
            for &(v, e) in m.pairs() {
                match images.get(&v) {
                    None => keep = keep.mul(&Monomial::from_pairs([(v, e)])),
                    Some(img) => {
                        let power = if let Some(p) = cache.get(&(v, e)) {
                            p.clone()
                        } else {
                            let p = if e >= 0 {
                                img.pow(e as u32)
                            } else {
                                img.inverse_monomial()?.pow((-e) as u32)
                            };
                            cache.insert((v, e), p.clone());
                            p
                        };
                        acc = &acc * &power;
                    }
                }
            }
            out = &out + &acc.mul_monomial(&keep);
        }
        Ok(out)
    }

    /// `1 / self` when `self` is a single term.
    pub fn inverse_monomial(&self) -> Result<Self> {
        if self.terms.len() != 1 {
            return Err(KlError::Invariant(format!("cannot invert {self}")));
        }
        let (m, c) = self.terms.iter().next().unwrap();
        Ok(Self::term(m.inverse(), c.recip()))
    }

    /// Coefficients are all integers.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.sorted_terms()
                .iter()
                .map(|(m, c)| {
                    serde_json::json!({
                        "coeff": c.to_string(),
                        "monomial": m.pairs().iter().map(|(v, e)| serde_json::json!([v.to_string(), e])).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        )
    }

    /// Terms in print order: higher degree first, then by variables.
    fn sorted_terms(&self) -> Vec<(&Monomial, &Coeff)> {
        let mut t: Vec<(&Monomial, &Coeff)> = self.terms.iter().collect();
        t.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then(a.0.cmp(b.0)));
        t
    }

    /// Renders terms in the given monomial order, largest first.
    pub fn render_ordered(&self, ord: TermOrder) -> String {
        let mut t: Vec<(&Monomial, &Coeff)> = self.terms.iter().collect();
        t.sort_by(|a, b| ord.cmp(b.0, a.0));
        render_terms(&t)
    }

    pub fn parse(s: &str) -> Result<Self> {
        Parser::new(s).parse_all()
    }
}

fn render_terms(t: &[(&Monomial, &Coeff)]) -> String {
    if t.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in t.iter().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if m.is_one() {
            out.push_str(&abs.to_string());
        } else if abs.is_one() {
            out.push_str(&m.to_string());
        } else {
            out.push_str(&format!("{abs}*{m}"));
        }
    }
    out
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_terms(&self.sorted_terms()))
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.mul(b), x * y);
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Determinant by cofactor expansion along the first row, skipping zero entries.
pub fn det(m: &[Vec<Polynomial>]) -> Result<Polynomial> {
    let k = m.len();
    if m.iter().any(|r| r.len() != k) {
        return Err(KlError::Invariant("determinant of a non-square matrix".into()));
    }
    let cols: Vec<usize> = (0..k).collect();
    Ok(det_rec(m, 0, &cols))
}

fn det_rec(m: &[Vec<Polynomial>], row: usize, cols: &[usize]) -> Polynomial {
    if cols.is_empty() {
        return Polynomial::one();
    }
    if m[row].iter().enumerate().all(|(c, e)| !cols.contains(&c) || e.is_zero()) {
        return Polynomial::zero();
    }
    let mut out = Polynomial::zero();
    for (pos, &c) in cols.iter().enumerate() {
        let e = &m[row][c];
        if e.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = det_rec(m, row + 1, &rest);
        if minor.is_zero() {
            continue;
        }
        let term = e * &minor;
        out = if pos % 2 == 0 { &out + &term } else { &out - &term };
    }
    out
}

/// `(1 - m)` for a monomial `m`.
pub fn one_minus(m: &Monomial) -> Polynomial {
    &Polynomial::one() - &Polynomial::monomial(m.clone())
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Self {
            s: s.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, msg: &str) -> KlError {
        KlError::Parse(format!(
            "{msg} at offset {} in {:?}",
            self.pos,
            String::from_utf8_lossy(self.s)
        ))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn parse_all(mut self) -> Result<Polynomial> {
        let p = self.expr()?;
        if self.peek().is_some() {
            return Err(self.err("trailing input"));
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.product()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.product()?
            }
            _ => self.product()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.product()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.product()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.power()?;
                    acc = &acc * &d.inverse_monomial()?;
                }
                Some(b'(') | Some(b'x') | Some(b'y') | Some(b'z') | Some(b't') => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let e = self.number()? as u32;
            return if neg {
                Ok(base.inverse_monomial()?.pow(e))
            } else {
                Ok(base.pow(e))
            };
        }
        Ok(base)
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("number too large"))
    }

    fn digits(&mut self) -> &'a [u8] {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        &self.s[start..self.pos]
    }

    /// `_{a,b}` or `_{a}` after a variable letter.
    fn braced(&mut self) -> Result<Vec<usize>> {
        self.pos += 1;
        if self.s.get(self.pos) != Some(&b'{') {
            return Err(self.err("expected '{'"));
        }
        self.pos += 1;
        let mut out = vec![];
        loop {
            out.push(self.number()? as usize);
            match self.s.get(self.pos) {
                Some(b',') => self.pos += 1,
                Some(b'}') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.err("expected ',' or '}'")),
            }
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Polynomial::from_int(self.number()? as i64)),
            Some(c @ (b'x' | b'y' | b'z' | b't')) => {
                self.pos += 1;
                let idx: Vec<usize> = if self.s.get(self.pos) == Some(&b'_') {
                    self.braced()?
                } else {
                    self.digits().iter().map(|d| (d - b'0') as usize).collect()
                };
                let v = match (c, idx.len()) {
                    (b'z', 2) => Var::z(idx[0], idx[1]),
                    // written with two digits, t_ij is a box variable
                    (b't', 2) => Var::tbox(idx[0], idx[1]),
                    (b't', 1) => Var::t(idx[0]),
                    (b't', 0) => Var::t(0),
                    (b'x', 1) => Var::x(idx[0]),
                    (b'y', 1) => Var::y(idx[0]),
                    _ => return Err(self.err("malformed variable")),
                };
                Ok(Polynomial::var(v))
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}
