//! Sparse multivariate polynomials, Buchberger's algorithm, normal forms and
//! the Krull dimension of the leading-term ideal.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldElementJson, Rational};

/// Coefficient domain for polynomials: `Q` or a multi-quadratic tower.
pub trait Coeff: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Panics on zero.
    fn inv(&self) -> Self;
    fn from_rational(q: Rational) -> Self;
    fn to_field(&self) -> FieldElement;
}

impl Coeff for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        self.recip()
    }
    fn from_rational(q: Rational) -> Self {
        q
    }
    fn to_field(&self) -> FieldElement {
        FieldElement::from_rational(self.clone())
    }
}

impl Coeff for FieldElement {
    fn zero() -> Self {
        FieldElement::zero()
    }
    fn one() -> Self {
        FieldElement::one()
    }
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
    fn is_one(&self) -> bool {
        FieldElement::is_one(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        self.invert().expect("inverse of zero coefficient")
    }
    fn from_rational(q: Rational) -> Self {
        FieldElement::from_rational(q)
    }
    fn to_field(&self) -> FieldElement {
        self.clone()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TermOrder {
    DegRevLex,
    Lex,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial(pub SmallVec<[u16; 16]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn from_exponents(e: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(e))
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(o.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// `self / o`; requires `o | self`.
    pub fn div(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(o.0.iter()).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(o.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, o: &Monomial) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Bit mask of the variables present.
    pub fn support(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0u64, |m, (i, _)| m | (1u64 << i))
    }

    pub fn cmp_by(&self, o: &Monomial, order: TermOrder) -> Ordering {
        match order {
            TermOrder::Lex => {
                for i in (0..self.0.len()).rev() {
                    match self.0[i].cmp(&o.0[i]) {
                        Ordering::Equal => continue,
                        c => return c,
                    }
                }
                Ordering::Equal
            }
            TermOrder::DegRevLex => {
                match self.degree().cmp(&o.degree()) {
                    Ordering::Equal => {}
                    c => return c,
                }
                for i in 0..self.0.len() {
                    match self.0[i].cmp(&o.0[i]) {
                        Ordering::Equal => continue,
                        c => return c.reverse(),
                    }
                }
                Ordering::Equal
            }
        }
    }

    pub fn render(&self, name: &dyn Fn(usize) -> String) -> String {
        let mut parts = Vec::new();
        for i in (0..self.0.len()).rev() {
            match self.0[i] {
                0 => {}
                1 => parts.push(name(i)),
                e => parts.push(format!("{}^{e}", name(i))),
            }
        }
        parts.join("*")
    }
}

/// Polynomial with terms sorted by decreasing monomial in the active order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly<C: Coeff> {
    nvars: usize,
    order: TermOrder,
    terms: Vec<(Monomial, C)>,
}

impl<C: Coeff> Poly<C> {
    pub fn zero(nvars: usize, order: TermOrder) -> Self {
        Poly {
            nvars,
            order,
            terms: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, order: TermOrder, c: C) -> Self {
        Self::from_terms(nvars, order, vec![(Monomial::one(nvars), c)])
    }

    pub fn var(nvars: usize, order: TermOrder, i: usize) -> Self {
        Self::from_terms(nvars, order, vec![(Monomial::var(nvars, i), C::one())])
    }

    /// Sorts, merges equal monomials and drops zeros.
    pub fn from_terms(nvars: usize, order: TermOrder, mut terms: Vec<(Monomial, C)>) -> Self {
        terms.sort_by(|a, b| b.0.cmp_by(&a.0, order));
        let mut out: Vec<(Monomial, C)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            if let Some(last) = out.last_mut() {
                if last.0 == m {
                    last.1 = last.1.add(&c);
                    continue;
                }
            }
            out.push((m, c));
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { nvars, order, terms: out }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> TermOrder {
        self.order
    }

    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &C {
        &self.terms[0].1
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn with_order(&self, order: TermOrder) -> Self {
        Self::from_terms(self.nvars, order, self.terms.clone())
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::from_terms(self.nvars, self.order, self.terms.iter().map(|(m, c)| (m.clone(), f(c))).collect())
    }

    pub fn to_field(&self) -> Poly<FieldElement> {
        self.map_coeffs(|c| c.to_field())
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars, self.order);
        }
        Poly {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d.mul(c))).collect(),
        }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() || self.lc().is_one() {
            return self.clone();
        }
        self.scale(&self.lc().inv())
    }

    pub fn neg(&self) -> Self {
        Poly {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    fn merge(&self, other: &Self, coeff: &C, shift: Option<&Monomial>) -> Self {
        // self + coeff * shift * other
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut i = 0;
        let mut j = 0;
        let shifted = |k: usize| -> Monomial {
            match shift {
                Some(s) => other.terms[k].0.mul(s),
                None => other.terms[k].0.clone(),
            }
        };
        let mut pending: Option<Monomial> = if other.terms.is_empty() { None } else { Some(shifted(0)) };
        while i < self.terms.len() || pending.is_some() {
            let ord = match (self.terms.get(i), pending.as_ref()) {
                (Some(a), Some(b)) => a.0.cmp_by(b, self.order),
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (None, None) => unreachable!(),
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let m = pending.take().unwrap();
                    out.push((m, other.terms[j].1.mul(coeff)));
                    j += 1;
                    pending = (j < other.terms.len()).then(|| shifted(j));
                }
                Ordering::Equal => {
                    let m = pending.take().unwrap();
                    let c = self.terms[i].1.add(&other.terms[j].1.mul(coeff));
                    if !c.is_zero() {
                        out.push((m, c));
                    }
                    i += 1;
                    j += 1;
                    pending = (j < other.terms.len()).then(|| shifted(j));
                }
            }
        }
        Poly {
            nvars: self.nvars,
            order: self.order,
            terms: out,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.merge(o, &C::one(), None)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.merge(o, &C::one().neg(), None)
    }

    /// `self + c * m * o`.
    pub fn add_scaled(&self, o: &Self, c: &C, m: &Monomial) -> Self {
        self.merge(o, c, Some(m))
    }

    pub fn mul_term(&self, c: &C, m: &Monomial) -> Self {
        Poly {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(n, d)| (n.mul(m), d.mul(c))).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut acc = Self::zero(self.nvars, self.order);
        for (m, c) in &self.terms {
            acc = acc.add_scaled(o, c, m);
        }
        acc
    }

    /// Exact evaluation at `x_var = value`; the variable disappears but the
    /// ambient space is kept.
    pub fn substitute(&self, var: usize, value: &C) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let e = m.0[var];
            let mut m2 = m.clone();
            m2.0[var] = 0;
            let mut c2 = c.clone();
            for _ in 0..e {
                c2 = c2.mul(value);
            }
            terms.push((m2, c2));
        }
        Self::from_terms(self.nvars, self.order, terms)
    }

    /// Removes variable `var` (which must not occur) from the ambient space.
    pub fn drop_var(&self, var: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                debug_assert_eq!(m.0[var], 0);
                let mut e = m.0.clone();
                e.remove(var);
                (Monomial(e), c.clone())
            })
            .collect();
        Self::from_terms(self.nvars - 1, self.order, terms)
    }

    pub fn eval(&self, point: &[C]) -> C {
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(&point[i]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Variables actually occurring, as a bit mask.
    pub fn support(&self) -> u64 {
        self.terms.iter().fold(0, |m, (mono, _)| m | mono.support())
    }

    /// `Some(i)` when only variable `i` occurs (constants allowed).
    pub fn univariate_var(&self) -> Option<usize> {
        let s = self.support();
        (s.count_ones() == 1).then(|| s.trailing_zeros() as usize)
    }

    /// Coefficients (ascending degree) when univariate in `var`.
    pub fn univariate_coeffs(&self, var: usize) -> Vec<C> {
        let deg = self.terms.iter().map(|(m, _)| m.0[var] as usize).max().unwrap_or(0);
        let mut out = vec![C::zero(); deg + 1];
        for (m, c) in &self.terms {
            out[m.0[var] as usize] = c.add(&out[m.0[var] as usize]);
        }
        out
    }

    pub fn render(&self, name: &dyn Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let f = c.to_field();
            let (neg, body) = coefficient_text(&f);
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = m.render(name);
            match (mono.is_empty(), body.as_str()) {
                (true, _) => s.push_str(&body),
                (false, "1") => s.push_str(&mono),
                (false, b) => {
                    s.push_str(b);
                    s.push('*');
                    s.push_str(&mono);
                }
            }
        }
        s
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.0.to_vec(), FieldElementJson::from(&c.to_field())))
                .collect(),
        }
    }
}

/// Sign and magnitude text of a coefficient; multi-term values are wrapped in
/// parentheses.
fn coefficient_text(f: &FieldElement) -> (bool, String) {
    if f.num_terms() == 1 {
        let (_, q) = f.terms().next().unwrap();
        if q.is_negative() {
            return (true, (-f).to_string());
        }
        return (false, f.to_string());
    }
    (false, format!("({f})"))
}

/// `x2..xR` naming used in reports: variable `i` is `x{i + offset}`.
pub fn var_namer(offset: usize) -> impl Fn(usize) -> String {
    move |i| format!("x{}", i + offset)
}

impl<C: Coeff> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&var_namer(1)))
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct PolyJson {
    pub terms: Vec<(Vec<u16>, FieldElementJson)>,
}

/// Full reduction of `f` modulo `g` (leading coefficients need not be 1).
pub fn normal_form<C: Coeff>(f: &Poly<C>, g: &[Poly<C>]) -> Poly<C> {
    let mut p = f.clone();
    let mut r: Vec<(Monomial, C)> = Vec::new();
    let lc_inv: Vec<C> = g.iter().map(|h| h.lc().inv()).collect();
    while !p.is_zero() {
        let (m, c) = p.terms[0].clone();
        match g.iter().position(|h| h.lm().divides(&m)) {
            Some(k) => {
                let factor = c.mul(&lc_inv[k]).neg();
                let shift = m.div(g[k].lm());
                p = p.add_scaled(&g[k], &factor, &shift);
            }
            None => {
                r.push((m, c));
                p.terms.remove(0);
            }
        }
    }
    Poly {
        nvars: f.nvars,
        order: f.order,
        terms: r,
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GroebnerLimits {
    pub max_pairs: usize,
    pub max_basis: usize,
}

impl Default for GroebnerLimits {
    fn default() -> Self {
        GroebnerLimits {
            max_pairs: 200_000,
            max_basis: 20_000,
        }
    }
}

fn s_poly<C: Coeff>(f: &Poly<C>, g: &Poly<C>) -> Poly<C> {
    let l = f.lm().lcm(g.lm());
    let a = f.mul_term(&f.lc().inv(), &l.div(f.lm()));
    a.add_scaled(g, &g.lc().inv().neg(), &l.div(g.lm()))
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Reduced Groebner basis by Buchberger's algorithm with the
/// Gebauer-Moeller criteria. Pairs are taken by the normal strategy (least
/// lcm, ties by index). Returns `[1]` for the unit ideal; the result is monic
/// and sorted by increasing leading monomial.
pub fn groebner_basis<C: Coeff>(gens: &[Poly<C>], limits: &GroebnerLimits) -> Result<Vec<Poly<C>>> {
    let Some(first) = gens.iter().find(|g| !g.is_zero()) else {
        return Ok(Vec::new());
    };
    let (nvars, order) = (first.nvars, first.order);
    let unit = || vec![Poly::constant(nvars, order, C::one())];
    let mut basis: Vec<Poly<C>> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut processed = 0usize;

    let mut inputs: Vec<Poly<C>> = gens.iter().filter(|g| !g.is_zero()).map(|g| g.with_order(order)).collect();
    // cheap first: low degree and short
    inputs.sort_by(|a, b| a.lm().cmp_by(b.lm(), order).then(a.terms.len().cmp(&b.terms.len())));
    for f in inputs {
        let current: Vec<Poly<C>> = active_polys(&basis, &active);
        let h = normal_form(&f, &current);
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(unit());
        }
        update(&mut basis, &mut active, &mut pairs, h.monic());
    }
    while !pairs.is_empty() {
        processed += 1;
        if processed > limits.max_pairs {
            return Err(Error::ResourceLimit(format!(
                "Groebner pair limit {} reached",
                limits.max_pairs
            )));
        }
        let k = (0..pairs.len())
            .min_by(|&a, &b| {
                pairs[a]
                    .lcm
                    .cmp_by(&pairs[b].lcm, order)
                    .then((pairs[a].i, pairs[a].j).cmp(&(pairs[b].i, pairs[b].j)))
            })
            .unwrap();
        let pair = pairs.swap_remove(k);
        let s = s_poly(&basis[pair.i], &basis[pair.j]);
        let current = active_polys(&basis, &active);
        let h = normal_form(&s, &current);
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(unit());
        }
        if basis.len() >= limits.max_basis {
            return Err(Error::ResourceLimit(format!(
                "Groebner basis size limit {} reached",
                limits.max_basis
            )));
        }
        update(&mut basis, &mut active, &mut pairs, h.monic());
    }
    Ok(interreduce(active_polys(&basis, &active)))
}

fn active_polys<C: Coeff>(basis: &[Poly<C>], active: &[bool]) -> Vec<Poly<C>> {
    basis
        .iter()
        .zip(active)
        .filter(|(_, &a)| a)
        .map(|(p, _)| p.clone())
        .collect()
}

/// Gebauer-Moeller update with the coprime and chain criteria.
fn update<C: Coeff>(basis: &mut Vec<Poly<C>>, active: &mut Vec<bool>, pairs: &mut Vec<Pair>, h: Poly<C>) {
    let hi = basis.len();
    let hlm = h.lm().clone();
    let mut candidates: VecDeque<(usize, Monomial, bool)> = (0..hi)
        .filter(|&i| active[i])
        .map(|i| (i, basis[i].lm().lcm(&hlm), basis[i].lm().coprime(&hlm)))
        .collect();
    let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
    while let Some((i, l, cop)) = candidates.pop_front() {
        let covered = candidates.iter().chain(kept.iter()).any(|(_, l2, _)| l2.divides(&l));
        if cop || !covered {
            kept.push((i, l, cop));
        }
    }
    pairs.retain(|p| {
        let li = basis[p.i].lm().lcm(&hlm);
        let lj = basis[p.j].lm().lcm(&hlm);
        !(hlm.divides(&p.lcm) && li != p.lcm && lj != p.lcm)
    });
    for (i, l, cop) in kept {
        if !cop {
            pairs.push(Pair { i, j: hi, lcm: l });
        }
    }
    for i in 0..hi {
        if active[i] && hlm.divides(basis[i].lm()) {
            active[i] = false;
        }
    }
    basis.push(h);
    active.push(true);
}

/// Minimal, interreduced, monic basis sorted by increasing leading monomial.
pub fn interreduce<C: Coeff>(mut g: Vec<Poly<C>>) -> Vec<Poly<C>> {
    let Some(order) = g.first().map(|p| p.order) else {
        return g;
    };
    g.sort_by(|a, b| a.lm().cmp_by(b.lm(), order));
    let mut minimal: Vec<Poly<C>> = Vec::new();
    for p in g {
        if !minimal.iter().any(|q| q.lm().divides(p.lm())) {
            minimal.retain(|q| !p.lm().divides(q.lm()));
            minimal.push(p);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<Poly<C>> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, p)| p.clone())
            .collect();
        let lead = Poly {
            nvars: minimal[k].nvars,
            order,
            terms: vec![minimal[k].terms[0].clone()],
        };
        let tail = Poly {
            nvars: minimal[k].nvars,
            order,
            terms: minimal[k].terms[1..].to_vec(),
        };
        let reduced = lead.add(&normal_form(&tail, &others));
        out.push(reduced.monic());
    }
    out.sort_by(|a, b| a.lm().cmp_by(b.lm(), order));
    out
}

pub fn is_unit_ideal<C: Coeff>(g: &[Poly<C>]) -> bool {
    g.len() == 1 && g[0].is_constant()
}

/// Every S-polynomial reduces to zero.
pub fn satisfies_buchberger_criterion<C: Coeff>(g: &[Poly<C>]) -> bool {
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            if !normal_form(&s_poly(&g[i], &g[j]), g).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Minimum set of variables meeting every leading-monomial support, found by
/// branch and bound; its complement is a maximum independent set.
fn min_hitting_set(supports: &[u64], nvars: usize) -> u64 {
    let mut sets: Vec<u64> = supports.to_vec();
    sets.sort_by_key(|s| (s.count_ones(), *s));
    sets.dedup();
    let mut minimal: Vec<u64> = Vec::new();
    for s in sets {
        if !minimal.iter().any(|&t| t & s == t) {
            minimal.push(s);
        }
    }
    let full = if nvars == 64 { u64::MAX } else { (1u64 << nvars) - 1 };
    fn search(sets: &[u64], chosen: u64, best: &mut Option<u64>) {
        if let Some(b) = best {
            if chosen.count_ones() >= b.count_ones() {
                return;
            }
        }
        let unhit = sets.iter().filter(|&&s| s & chosen == 0).min_by_key(|s| s.count_ones());
        match unhit {
            None => *best = Some(chosen),
            Some(&s) => {
                let mut bits = s;
                while bits != 0 {
                    let v = bits & bits.wrapping_neg();
                    search(sets, chosen | v, best);
                    bits &= bits - 1;
                }
            }
        }
    }
    let mut best = None;
    search(&minimal, 0, &mut best);
    best.unwrap_or(full) & full
}

/// Krull dimension of the ideal generated by a Groebner basis.
pub fn hilbert_dimension<C: Coeff>(g: &[Poly<C>], nvars: usize) -> usize {
    if g.is_empty() {
        return nvars;
    }
    let supports: Vec<u64> = g.iter().map(|p| p.lm().support()).collect();
    if supports.iter().any(|&s| s == 0) {
        return 0;
    }
    nvars - min_hitting_set(&supports, nvars).count_ones() as usize
}

/// A maximum set of variables containing no leading monomial's support.
pub fn maximal_independent_set<C: Coeff>(g: &[Poly<C>], nvars: usize) -> Vec<usize> {
    let supports: Vec<u64> = g.iter().map(|p| p.lm().support()).collect();
    let hit = if g.is_empty() { 0 } else { min_hitting_set(&supports, nvars) };
    (0..nvars).filter(|&i| hit & (1u64 << i) == 0).collect()
}

/// Standard monomials (not divisible by any leading monomial), or `None`
/// when there are more than `cap` of them.
pub fn standard_monomials<C: Coeff>(g: &[Poly<C>], nvars: usize, cap: usize) -> Option<Vec<Monomial>> {
    let lms: Vec<&Monomial> = g.iter().map(|p| p.lm()).collect();
    if lms.iter().any(|m| m.is_one()) {
        return Some(Vec::new());
    }
    let mut seen: HashSet<Monomial> = HashSet::new();
    let mut queue = VecDeque::new();
    let one = Monomial::one(nvars);
    seen.insert(one.clone());
    queue.push_back(one);
    let mut out = Vec::new();
    while let Some(m) = queue.pop_front() {
        out.push(m.clone());
        if out.len() > cap {
            return None;
        }
        for i in 0..nvars {
            let mut n = m.clone();
            n.0[i] += 1;
            if !lms.iter().any(|l| l.divides(&n)) && seen.insert(n.clone()) {
                queue.push_back(n);
            }
        }
    }
    Some(out)
}

/// Trace of multiplication by `x_var` on the quotient ring, in the basis of
/// standard monomials. For a radical zero-dimensional ideal this is the sum of
/// `x_var` over all solutions.
pub fn multiplication_trace<C: Coeff>(g: &[Poly<C>], std: &[Monomial], var: usize) -> C {
    let mut acc = C::zero();
    for m in std {
        let nvars = m.nvars();
        let order = g.first().map(|p| p.order).unwrap_or(TermOrder::DegRevLex);
        let p = Poly::from_terms(nvars, order, vec![(m.mul(&Monomial::var(nvars, var)), C::one())]);
        let r = normal_form(&p, g);
        if let Some((_, c)) = r.terms.iter().find(|(mm, _)| mm == m) {
            acc = acc.add(c);
        }
    }
    acc
}

/// Monomial under the lex order, for ordered containers.
#[derive(PartialEq, Eq)]
struct LexKey(Monomial);

impl PartialOrd for LexKey {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for LexKey {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.cmp_by(&o.0, TermOrder::Lex)
    }
}

/// Reduced lex basis of a zero-dimensional ideal from any of its Groebner
/// bases `g` and standard monomials `std`, by linear algebra on the quotient
/// ring (FGLM).
pub fn fglm<C: Coeff>(g: &[Poly<C>], std: &[Monomial], nvars: usize) -> Vec<Poly<C>> {
    let Some(order) = g.first().map(|p| p.order) else {
        return Vec::new();
    };
    if std.is_empty() {
        return vec![Poly::constant(nvars, TermOrder::Lex, C::one())];
    }
    let index: std::collections::HashMap<&Monomial, usize> = std.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let dim = std.len();
    // echelon rows: vector, pivot, combination of staircase monomials
    let mut rows: Vec<(Vec<C>, usize, Vec<C>)> = Vec::new();
    let mut staircase: Vec<Monomial> = Vec::new();
    let mut out: Vec<Poly<C>> = Vec::new();
    let mut queue: std::collections::BTreeSet<LexKey> = std::collections::BTreeSet::new();
    queue.insert(LexKey(Monomial::one(nvars)));
    while let Some(LexKey(m)) = queue.pop_first() {
        if out.iter().any(|p| p.lm().divides(&m)) {
            continue;
        }
        let nf = normal_form(&Poly::from_terms(nvars, order, vec![(m.clone(), C::one())]), g);
        let mut v = vec![C::zero(); dim];
        for (mm, c) in &nf.terms {
            v[index[mm]] = c.clone();
        }
        let k = staircase.len();
        let mut combo = vec![C::zero(); k + 1];
        combo[k] = C::one();
        for (row, pivot, rc) in &rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let f = v[*pivot].clone();
            for (a, b) in v.iter_mut().zip(row) {
                if !b.is_zero() {
                    *a = a.sub(&f.mul(b));
                }
            }
            for (a, b) in combo.iter_mut().zip(rc) {
                if !b.is_zero() {
                    *a = a.sub(&f.mul(b));
                }
            }
        }
        match v.iter().position(|c| !c.is_zero()) {
            None => {
                let mut terms = vec![(m, C::one())];
                for (j, c) in combo[..k].iter().enumerate() {
                    if !c.is_zero() {
                        terms.push((staircase[j].clone(), c.clone()));
                    }
                }
                out.push(Poly::from_terms(nvars, TermOrder::Lex, terms));
            }
            Some(p) => {
                let s = v[p].inv();
                let v: Vec<C> = v.iter().map(|c| c.mul(&s)).collect();
                let combo: Vec<C> = combo.iter().map(|c| c.mul(&s)).collect();
                rows.push((v, p, combo));
                for i in 0..nvars {
                    queue.insert(LexKey(m.mul(&Monomial::var(nvars, i))));
                }
                staircase.push(m);
            }
        }
    }
    out.sort_by(|a, b| a.lm().cmp_by(b.lm(), TermOrder::Lex));
    out
}

/// Generators plus a lazily computed reduced Groebner basis.
#[derive(Clone, Debug)]
pub struct Ideal<C: Coeff> {
    nvars: usize,
    generators: Vec<Poly<C>>,
    groebner: Option<Vec<Poly<C>>>,
}

impl<C: Coeff> Ideal<C> {
    pub fn new(nvars: usize, generators: Vec<Poly<C>>) -> Self {
        Ideal {
            nvars,
            generators,
            groebner: None,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Poly<C>] {
        &self.generators
    }

    pub fn groebner(&mut self, limits: &GroebnerLimits) -> Result<&[Poly<C>]> {
        if self.groebner.is_none() {
            self.groebner = Some(groebner_basis(&self.generators, limits)?);
        }
        Ok(self.groebner.as_deref().unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;

    type P = Poly<Rational>;

    /// Parses `c*x^a*y^b + ...` over variables named in `names` (index 0 smallest).
    fn p(s: &str, names: &[&str], order: TermOrder) -> P {
        let n = names.len();
        let mut terms = Vec::new();
        let s = s.replace("- ", "+ -").replace(' ', "");
        for t in s.split('+').filter(|t| !t.is_empty()) {
            let mut c = rat(1, 1);
            let mut m = Monomial::one(n);
            let (neg, t) = match t.strip_prefix('-') {
                Some(r) => (true, r),
                None => (false, t),
            };
            for f in t.split('*') {
                if let Some(k) = names.iter().position(|v| f == *v || f.starts_with(&format!("{v}^"))) {
                    let e = f.split('^').nth(1).map(|e| e.parse().unwrap()).unwrap_or(1);
                    m.0[k] += e;
                } else {
                    let mut q = f.split('/');
                    let a: i64 = q.next().unwrap().parse().unwrap();
                    let b: i64 = q.next().map(|b| b.parse().unwrap()).unwrap_or(1);
                    c *= rat(a, b);
                }
            }
            if neg {
                c = -c;
            }
            terms.push((m, c));
        }
        Poly::from_terms(n, order, terms)
    }

    const XY: [&str; 2] = ["y", "x"]; // y < x

    #[test]
    fn normal_form_examples() {
        let o = TermOrder::Lex;
        assert!(normal_form(&p("x^2", &XY, o), &[p("x", &XY, o)]).is_zero());
        assert_eq!(
            normal_form(&p("x^2 + y", &XY, o), &[p("x^2 - 1", &XY, o)]),
            p("y + 1", &XY, o)
        );
        assert_eq!(normal_form(&p("x*y", &XY, o), &[p("x + y", &XY, o)]), p("-y^2", &XY, o));
    }

    #[test]
    fn groebner_examples() {
        let o = TermOrder::Lex;
        let lim = GroebnerLimits::default();
        let g = groebner_basis(&[p("x^2 - 1", &XY, o), p("x*y - y", &XY, o)], &lim).unwrap();
        assert_eq!(g, vec![p("x*y - y", &XY, o), p("x^2 - 1", &XY, o)]);
        let g = groebner_basis(&[p("x - 1", &XY, o), p("x", &XY, o)], &lim).unwrap();
        assert!(is_unit_ideal(&g));
        // S3 natural, dimension 1
        let x2 = ["x2"];
        let g = groebner_basis(
            &[p("2*x2^2 - 2/9", &x2, TermOrder::DegRevLex), p("x2^2 - 1/3*x2", &x2, TermOrder::DegRevLex)],
            &lim,
        )
        .unwrap();
        assert_eq!(g, vec![p("x2 - 1/3", &x2, TermOrder::DegRevLex)]);
    }

    #[test]
    fn hilbert_dimension_examples() {
        let o = TermOrder::DegRevLex;
        let xyz = ["z", "y", "x"];
        assert_eq!(hilbert_dimension::<Rational>(&[], 3), 3);
        assert_eq!(hilbert_dimension(&[p("x^2", &XY, o), p("y", &XY, o)], 2), 0);
        assert_eq!(hilbert_dimension(&[p("x*y", &XY, o)], 2), 1);
        assert_eq!(hilbert_dimension(&[p("x*y", &xyz, o), p("z^2", &xyz, o)], 3), 1);
        assert_eq!(maximal_independent_set(&[p("x*y", &XY, o)], 2).len(), 1);
    }

    #[test]
    fn substitution_examples() {
        let o = TermOrder::DegRevLex;
        let v = ["x2", "x1"];
        let e1 = p("x1^2 + 2*x2^2 - x1", &v, o);
        assert_eq!(e1.substitute(1, &rat(1, 3)).drop_var(1), p("2*x2^2 - 2/9", &["x2"], o));
        let e2 = p("2*x1*x2 + x2^2 - x2", &v, o);
        assert_eq!(e2.substitute(1, &rat(1, 3)).drop_var(1), p("x2^2 - 1/3*x2", &["x2"], o));
        let f = p("x2", &v, o);
        assert_eq!(f.substitute(1, &rat(5, 7)), f);
    }

    #[test]
    fn rendering() {
        let o = TermOrder::DegRevLex;
        let f = p("2*x2^2 - 2/9", &["x2"], o);
        assert_eq!(f.render(&var_namer(2)), "2*x2^2 - 2/9");
        let g = Poly::from_terms(
            1,
            o,
            vec![
                (Monomial::var(1, 0), FieldElement::i()),
                (Monomial::one(1), FieldElement::from_ratio(-1, 2)),
            ],
        );
        assert_eq!(g.render(&var_namer(2)), "I*x2 - 1/2");
    }

    #[test]
    fn standard_monomials_and_traces() {
        let o = TermOrder::DegRevLex;
        let lim = GroebnerLimits::default();
        // roots x in {1,2}, y in {0,3}
        let g = groebner_basis(&[p("x^2 - 3*x + 2", &XY, o), p("y^2 - 3*y", &XY, o)], &lim).unwrap();
        let std = standard_monomials(&g, 2, 100).unwrap();
        assert_eq!(std.len(), 4);
        assert_eq!(multiplication_trace(&g, &std, 1), rat(6, 1));
        assert_eq!(multiplication_trace(&g, &std, 0), rat(6, 1));
        assert!(standard_monomials(&[p("x*y", &XY, o)], 2, 50).is_none());
    }

    #[test]
    fn buchberger_criterion_and_idempotence() {
        let o = TermOrder::DegRevLex;
        let xyz = ["z", "y", "x"];
        let lim = GroebnerLimits::default();
        let gens = [
            p("x^2 + y*z - 2", &xyz, o),
            p("x*y - z^2 + 1", &xyz, o),
            p("x*z + y^2 - x", &xyz, o),
        ];
        let g = groebner_basis(&gens, &lim).unwrap();
        assert!(satisfies_buchberger_criterion(&g));
        for f in &gens {
            assert!(normal_form(f, &g).is_zero());
        }
        assert_eq!(groebner_basis(&g, &lim).unwrap(), g);
        let lex: Vec<P> = gens.iter().map(|f| f.with_order(TermOrder::Lex)).collect();
        let gl = groebner_basis(&lex, &lim).unwrap();
        assert_eq!(hilbert_dimension(&g, 3), hilbert_dimension(&gl, 3));
    }

    #[test]
    fn fglm_matches_direct_lex() {
        let o = TermOrder::DegRevLex;
        let xyz = ["z", "y", "x"];
        let lim = GroebnerLimits::default();
        let gens = [
            p("x^2 + y*z - 2", &xyz, o),
            p("x*y - z^2 + 1", &xyz, o),
            p("x*z + y^2 - x", &xyz, o),
        ];
        let g = groebner_basis(&gens, &lim).unwrap();
        let std = standard_monomials(&g, 3, 1000).unwrap();
        let lex: Vec<P> = gens.iter().map(|f| f.with_order(TermOrder::Lex)).collect();
        assert_eq!(fglm(&g, &std, 3), groebner_basis(&lex, &lim).unwrap());
        let unit = groebner_basis(&[p("x - 1", &xyz, o), p("x", &xyz, o)], &lim).unwrap();
        assert!(fglm(&unit, &[], 3)[0].is_constant());
    }
}
