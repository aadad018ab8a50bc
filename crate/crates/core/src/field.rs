//! Exact arithmetic in multi-quadratic towers `Q(i, sqrt(k1), ..., sqrt(kt))`.
//!
//! An element is a finite sum `sum_r q_r * sqrt(r)` over square-free radicands
//! `r`. Radicand `1` is the rational part, `-1` is `i`, and `-k` is `i*sqrt(k)`.
//! Products rewrite `sqrt(a)*sqrt(b)` to `g*sqrt(ab/g^2)` with `g = gcd(|a|,|b|)`
//! and a factor `-1` when both radicands are negative.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::ComplexInterval;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Sort key: ascending `|rad|`, positive before negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Radicand(i64);

impl Radicand {
    pub const ONE: Radicand = Radicand(1);
    pub const I: Radicand = Radicand(-1);

    pub fn value(self) -> i64 {
        self.0
    }

    fn key(self) -> (u64, bool) {
        (self.0.unsigned_abs(), self.0 < 0)
    }
}

impl PartialOrd for Radicand {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Radicand {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

/// `sqrt(a)*sqrt(b) = factor*sqrt(rad)`.
fn mul_radicands(a: i64, b: i64) -> (i64, i64) {
    let (ua, ub) = (a.unsigned_abs(), b.unsigned_abs());
    let g = ua.gcd(&ub);
    let m = (ua / g)
        .checked_mul(ub / g)
        .and_then(|m| i64::try_from(m).ok())
        .expect("radicand overflow");
    match (a < 0, b < 0) {
        (true, true) => (-(g as i64), m),
        (false, false) => (g as i64, m),
        _ => (g as i64, -m),
    }
}

/// An exact element of a multi-quadratic tower over `Q`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FieldElement {
    terms: Vec<(Radicand, Rational)>,
}

impl FieldElement {
    pub fn zero() -> Self {
        FieldElement { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn i() -> Self {
        Self::term(Rational::one(), -1)
    }

    pub fn from_rational(q: Rational) -> Self {
        if q.is_zero() {
            Self::zero()
        } else {
            FieldElement {
                terms: vec![(Radicand::ONE, q)],
            }
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(rat(n, d))
    }

    /// `q * sqrt(radicand)`; the radicand must be square-free and non-zero.
    pub fn term(q: Rational, radicand: i64) -> Self {
        assert!(radicand != 0, "zero radicand");
        debug_assert!(is_squarefree(radicand.unsigned_abs()), "radicand must be square-free");
        if q.is_zero() {
            Self::zero()
        } else {
            FieldElement {
                terms: vec![(Radicand(radicand), q)],
            }
        }
    }

    /// `sqrt(k)` for a square-free integer `k`.
    pub fn sqrt_of(radicand: i64) -> Self {
        Self::term(Rational::one(), radicand)
    }

    fn from_map(map: BTreeMap<Radicand, Rational>) -> Self {
        FieldElement {
            terms: map.into_iter().filter(|(_, q)| !q.is_zero()).collect(),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.terms.iter().map(|(r, q)| (r.0, q))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == Radicand::ONE && self.terms[0].1.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.iter().all(|(r, _)| *r == Radicand::ONE)
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(r, q)] if *r == Radicand::ONE => Some(q.clone()),
            _ => None,
        }
    }

    /// Rational part (coefficient of radicand 1).
    pub fn rational_part(&self) -> Rational {
        self.coefficient(1)
    }

    pub fn coefficient(&self, radicand: i64) -> Rational {
        self.terms
            .iter()
            .find(|(r, _)| r.0 == radicand)
            .map(|(_, q)| q.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn radicands(&self) -> Vec<i64> {
        self.terms.iter().map(|(r, _)| r.0).collect()
    }

    /// Complex conjugation: flips the sign of every negative-radicand term.
    pub fn conj(&self) -> Self {
        FieldElement {
            terms: self
                .terms
                .iter()
                .map(|(r, q)| if r.0 < 0 { (*r, -q) } else { (*r, q.clone()) })
                .collect(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(r, _)| r.0 > 0)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        FieldElement {
            terms: self.terms.iter().map(|(r, c)| (*r, c * q)).collect(),
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Multiplicative inverse by successive conjugation: each step multiplies
    /// by the conjugate flipping one prime radical (or `i`), which removes that
    /// prime from the element, until a rational remains.
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut denom = self.clone();
        let mut numer = FieldElement::one();
        while !denom.is_rational() {
            let p = *denom
                .primes()
                .last()
                .expect("non-rational element has a prime");
            let c = denom.flip_prime(p);
            numer = &numer * &c;
            denom = &denom * &c;
        }
        let q = denom.as_rational().expect("rational after conjugation");
        Ok(numer.scale(&q.recip()))
    }

    /// Sorted primes (with `-1` standing for `i`) dividing any radicand.
    pub fn primes(&self) -> Vec<i64> {
        let mut ps = Vec::new();
        for (r, _) in &self.terms {
            for p in radicand_primes(r.0) {
                if !ps.contains(&p) {
                    ps.push(p);
                }
            }
        }
        ps.sort_unstable_by_key(|&p| if p < 0 { 0 } else { p });
        ps
    }

    /// Applies the automorphism negating `sqrt(p)` (for `p = -1`, complex conjugation).
    pub fn flip_prime(&self, p: i64) -> Self {
        FieldElement {
            terms: self
                .terms
                .iter()
                .map(|(r, q)| {
                    if radicand_has_prime(r.0, p) {
                        (*r, -q)
                    } else {
                        (*r, q.clone())
                    }
                })
                .collect(),
        }
    }

    /// Square root when it lies in a multi-quadratic tower, found by
    /// descending over the primes of the element; `None` means unrepresentable.
    pub fn sqrt_if_nice(&self) -> Option<FieldElement> {
        let r = sqrt_rec(self, 6)?;
        debug_assert_eq!(&r.square(), self);
        Some(r)
    }

    pub fn to_complex(&self, precision: u32) -> ComplexInterval {
        ComplexInterval::enclose(self, precision)
    }

    pub fn to_c64(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (r, q) in &self.terms {
            let v = q.to_f64().unwrap_or(f64::NAN) * (r.0.unsigned_abs() as f64).sqrt();
            if r.0 < 0 {
                im += v;
            } else {
                re += v;
            }
        }
        (re, im)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = FieldElement::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    /// Height proxy used to bound work: total bit length of all coefficients.
    pub fn bit_size(&self) -> u64 {
        self.terms
            .iter()
            .map(|(_, q)| q.numer().bits() + q.denom().bits())
            .sum()
    }
}

fn sqrt_rec(a: &FieldElement, depth: u32) -> Option<FieldElement> {
    if a.is_zero() {
        return Some(FieldElement::zero());
    }
    if let Some(q) = a.as_rational() {
        return sqrt_rational(&q);
    }
    if depth == 0 {
        return None;
    }
    let p = *a.primes().last()?;
    // a = alpha + beta*sqrt(p)
    let mut alpha = BTreeMap::new();
    let mut beta = BTreeMap::new();
    for (r, q) in &a.terms {
        if radicand_has_prime(r.0, p) {
            beta.insert(Radicand(r.0 / p), q.clone());
        } else {
            alpha.insert(*r, q.clone());
        }
    }
    let alpha = FieldElement::from_map(alpha);
    let beta = FieldElement::from_map(beta);
    let sqrt_p = FieldElement::sqrt_of(p);
    let p_fe = FieldElement::from_int(p);
    let norm = &alpha.square() - &(&p_fe * &beta.square());
    let delta = sqrt_rec(&norm, depth - 1)?;
    let half = rat(1, 2);
    for sign in [1i64, -1] {
        let sd = delta.scale(&int(sign));
        let u2 = (&alpha + &sd).scale(&half);
        let candidate = if u2.is_zero() {
            let v2 = (&alpha - &sd).scale(&half);
            let v2 = &v2 * &p_fe.invert().ok()?;
            let v = sqrt_rec(&v2, depth - 1)?;
            &v * &sqrt_p
        } else {
            let Some(u) = sqrt_rec(&u2, depth - 1) else {
                continue;
            };
            let v = &beta * &(u.scale(&int(2))).invert().ok()?;
            &u + &(&v * &sqrt_p)
        };
        if &candidate.square() == a {
            return Some(candidate);
        }
    }
    None
}

/// `sqrt(q)` for rational `q`, as `s*sqrt(m)` (or `s*i*sqrt(m)` when negative).
pub fn sqrt_rational(q: &Rational) -> Option<FieldElement> {
    if q.is_zero() {
        return Some(FieldElement::zero());
    }
    let negative = q.is_negative();
    let num = q.numer().magnitude();
    let den = q.denom().magnitude();
    // sqrt(n/d) = sqrt(n*d)/d
    let prod = num * den;
    let (s, m) = squarefree_decompose(&prod)?;
    let m = i64::try_from(m).ok()?;
    let coeff = BigRational::new(BigInt::from_biguint(Sign::Plus, s), BigInt::from_biguint(Sign::Plus, den.clone()));
    let rad = if negative { -m } else { m };
    if rad == 1 {
        Some(FieldElement::from_rational(coeff))
    } else {
        Some(FieldElement::term(coeff, rad))
    }
}

const TRIAL_LIMIT: u64 = 1 << 21;

/// Writes `n = s^2 * m` with `m` square-free. Returns `None` when `n` is too
/// large to certify square-freeness by trial division.
pub fn squarefree_decompose(n: &BigUint) -> Option<(BigUint, u64)> {
    let mut c = n.clone();
    let mut s = BigUint::one();
    let mut m = BigUint::one();
    let mut p: u64 = 2;
    loop {
        let pb = BigUint::from(p);
        if &pb * &pb * &pb > c {
            break;
        }
        if p > TRIAL_LIMIT {
            // cofactor unresolved
            let r = c.sqrt();
            if &r * &r == c {
                s *= r;
                c = BigUint::one();
                break;
            }
            return None;
        }
        let mut e = 0u32;
        while (&c % &pb).is_zero() {
            c /= &pb;
            e += 1;
        }
        if e > 0 {
            s *= pb.pow(e / 2);
            if e % 2 == 1 {
                m *= &pb;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !c.is_one() {
        // at most two prime factors remain, all larger than p
        let r = c.sqrt();
        if &r * &r == c {
            s *= r;
        } else {
            m *= c;
        }
    }
    Some((s, m.to_u64()?))
}

fn is_squarefree(mut n: u64) -> bool {
    let mut p = 2u64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        if n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

fn radicand_primes(r: i64) -> Vec<i64> {
    let mut out = Vec::new();
    if r < 0 {
        out.push(-1);
    }
    let mut n = r.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            out.push(p as i64);
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        out.push(n as i64);
    }
    out
}

fn radicand_has_prime(r: i64, p: i64) -> bool {
    if p == -1 {
        r < 0
    } else {
        r.unsigned_abs() % p as u64 == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn radical_str(r: i64) -> String {
    match r {
        1 => String::new(),
        -1 => "I".into(),
        r if r < 0 => format!("I*sqrt({})", -r),
        r => format!("sqrt({r})"),
    }
}

/// `q * radical` without leading sign handling (q > 0).
fn term_str(q: &Rational, r: i64) -> String {
    let rad = radical_str(r);
    if rad.is_empty() {
        q.to_string()
    } else if q.is_one() {
        rad
    } else {
        format!("{q}*{rad}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.terms.as_slice() {
            [] => write!(f, "0"),
            [(r, q)] => {
                if q.is_negative() {
                    write!(f, "-{}", term_str(&-q, r.0))
                } else {
                    write!(f, "{}", term_str(q, r.0))
                }
            }
            [(r0, c), rest @ ..] => {
                let mut inner = if r0.0 == 1 {
                    "1".to_string()
                } else {
                    radical_str(r0.0)
                };
                for (r, q) in rest {
                    let rel = q / c;
                    if rel.is_negative() {
                        inner.push_str(" - ");
                        inner.push_str(&term_str(&-rel, r.0));
                    } else {
                        inner.push_str(" + ");
                        inner.push_str(&term_str(&rel, r.0));
                    }
                }
                if c.is_one() {
                    write!(f, "{inner}")
                } else if (-c).is_one() {
                    write!(f, "-({inner})")
                } else {
                    write!(f, "{c}*({inner})")
                }
            }
        }
    }
}

impl FromStr for FieldElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = ExprParser::new(s);
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(v)
    }
}

/// Recursive-descent parser for tower expressions:
/// numbers, `I`, `sqrt(expr)`, `+ - * /` and parentheses.
pub(crate) struct ExprParser<'a> {
    pub src: &'a [u8],
    pub pos: usize,
}

impl<'a> ExprParser<'a> {
    pub fn new(s: &'a str) -> Self {
        ExprParser {
            src: s.as_bytes(),
            pos: 0,
        }
    }

    pub fn err(&self, msg: &str) -> Error {
        Error::Parse {
            line: 0,
            message: format!("{msg} at column {} in '{}'", self.pos + 1, String::from_utf8_lossy(self.src)),
        }
    }

    pub fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    pub fn expr(&mut self) -> Result<FieldElement> {
        let mut acc = FieldElement::zero();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                _ if first => 1,
                _ => break,
            };
            let t = self.term()?;
            acc = if sign > 0 { &acc + &t } else { &acc - &t };
            first = false;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<FieldElement> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = &acc * &f.invert().map_err(|_| self.err("division by zero"))?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<FieldElement> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'I') => {
                self.pos += 1;
                Ok(FieldElement::i())
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let n: BigInt = digits.parse().map_err(|_| self.err("bad number"))?;
                Ok(FieldElement::from_rational(BigRational::from_integer(n)))
            }
            Some(b's') if self.src[self.pos..].starts_with(b"sqrt") => {
                self.pos += 4;
                if self.peek() != Some(b'(') {
                    return Err(self.err("expected '(' after sqrt"));
                }
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                v.sqrt_if_nice()
                    .ok_or_else(|| self.err("square root outside the supported tower"))
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

fn combine(a: &FieldElement, b: &FieldElement, negate_b: bool) -> FieldElement {
    let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
    let (mut i, mut j) = (0, 0);
    while i < a.terms.len() || j < b.terms.len() {
        let ord = match (a.terms.get(i), b.terms.get(j)) {
            (Some(x), Some(y)) => x.0.cmp(&y.0),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => unreachable!(),
        };
        match ord {
            Ordering::Less => {
                out.push(a.terms[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                let (r, q) = &b.terms[j];
                out.push((*r, if negate_b { -q } else { q.clone() }));
                j += 1;
            }
            Ordering::Equal => {
                let (r, q) = &a.terms[i];
                let s = if negate_b { q - &b.terms[j].1 } else { q + &b.terms[j].1 };
                if !s.is_zero() {
                    out.push((*r, s));
                }
                i += 1;
                j += 1;
            }
        }
    }
    FieldElement { terms: out }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        combine(self, rhs, false)
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        combine(self, rhs, true)
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        if self.is_zero() || rhs.is_zero() {
            return FieldElement::zero();
        }
        if self.terms.len() == 1 && self.terms[0].0 == Radicand::ONE {
            return rhs.scale(&self.terms[0].1);
        }
        if rhs.terms.len() == 1 && rhs.terms[0].0 == Radicand::ONE {
            return self.scale(&rhs.terms[0].1);
        }
        let mut map: BTreeMap<Radicand, Rational> = BTreeMap::new();
        for (ra, qa) in &self.terms {
            for (rb, qb) in &rhs.terms {
                let (factor, rad) = mul_radicands(ra.0, rb.0);
                let c = qa * qb * BigInt::from(factor);
                let e = map.entry(Radicand(rad)).or_insert_with(Rational::zero);
                *e += c;
            }
        }
        FieldElement::from_map(map)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            terms: self.terms.iter().map(|(r, q)| (*r, -q)).collect(),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                (&self).$m(rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl<'a> Div<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    /// Panics on division by zero; use [`FieldElement::invert`] to handle it.
    fn div(self, rhs: &FieldElement) -> FieldElement {
        self * &rhs.invert().expect("division by zero")
    }
}

impl AddAssign<&FieldElement> for FieldElement {
    fn add_assign(&mut self, rhs: &FieldElement) {
        *self = &*self + rhs;
    }
}

impl AddAssign<FieldElement> for FieldElement {
    fn add_assign(&mut self, rhs: FieldElement) {
        *self = &*self + &rhs;
    }
}

impl SubAssign<&FieldElement> for FieldElement {
    fn sub_assign(&mut self, rhs: &FieldElement) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&FieldElement> for FieldElement {
    fn mul_assign(&mut self, rhs: &FieldElement) {
        *self = &*self * rhs;
    }
}

impl From<Rational> for FieldElement {
    fn from(q: Rational) -> Self {
        FieldElement::from_rational(q)
    }
}

impl From<i64> for FieldElement {
    fn from(n: i64) -> Self {
        FieldElement::from_int(n)
    }
}

/// Nonzero rows of the reduced row echelon form.
pub fn row_reduce(mut rows: Vec<Vec<FieldElement>>) -> Vec<Vec<FieldElement>> {
    let cols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = rows[rank][col].invert().expect("nonzero pivot");
        let pivot: Vec<FieldElement> = rows[rank].iter().map(|x| x * &inv).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    if !y.is_zero() {
                        *x -= &(&f * y);
                    }
                }
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

/// JSON form: `{"terms":[{"rad":1,"num":"1","den":"3"}]}`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct FieldElementJson {
    pub terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct TermJson {
    pub rad: i64,
    pub num: String,
    pub den: String,
}

impl From<&FieldElement> for FieldElementJson {
    fn from(a: &FieldElement) -> Self {
        FieldElementJson {
            terms: a
                .terms
                .iter()
                .map(|(r, q)| TermJson {
                    rad: r.0,
                    num: q.numer().to_string(),
                    den: q.denom().to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&FieldElementJson> for FieldElement {
    type Error = Error;
    fn try_from(j: &FieldElementJson) -> Result<Self> {
        let bad = |m: String| Error::Parse { line: 0, message: m };
        let mut acc = FieldElement::zero();
        for t in &j.terms {
            if t.rad == 0 || !is_squarefree(t.rad.unsigned_abs()) {
                return Err(bad(format!("radicand {} is not square-free", t.rad)));
            }
            let num: BigInt = t.num.parse().map_err(|_| bad(format!("bad numerator '{}'", t.num)))?;
            let den: BigInt = t.den.parse().map_err(|_| bad(format!("bad denominator '{}'", t.den)))?;
            if den.is_zero() {
                return Err(bad("zero denominator".into()));
            }
            acc = &acc + &FieldElement::term(BigRational::new(num, den), t.rad);
        }
        Ok(acc)
    }
}

impl Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FieldElementJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = FieldElementJson::deserialize(d)?;
        FieldElement::try_from(&j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fe(s: &str) -> FieldElement {
        s.parse().unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let s3 = FieldElement::sqrt_of(3);
        let one = FieldElement::one();
        assert_eq!(&(&one + &s3) * &(&one - &s3), FieldElement::from_int(-2));
        let is3 = FieldElement::sqrt_of(-3);
        assert_eq!(&is3 * &is3, FieldElement::from_int(-3));
        let p = &FieldElement::sqrt_of(2) * &FieldElement::sqrt_of(6);
        assert_eq!(p, FieldElement::term(int(2), 3));
        assert_eq!(&FieldElement::i() * &FieldElement::i(), FieldElement::from_int(-1));
        // i * sqrt(7) = sqrt(-7)
        assert_eq!(&FieldElement::i() * &FieldElement::sqrt_of(7), FieldElement::sqrt_of(-7));
    }

    #[test]
    fn inversion_examples() {
        let a = fe("1 + I");
        assert_eq!(a.invert().unwrap(), fe("(1 - I)/2"));
        assert_eq!(FieldElement::sqrt_of(7).invert().unwrap(), fe("sqrt(7)/7"));
        let b = &FieldElement::one() + &FieldElement::sqrt_of(-7);
        let inv = b.invert().unwrap();
        assert_eq!(inv, fe("(1 - I*sqrt(7))/8"));
        assert!(b.is_one() || (&b * &inv).is_one());
        assert_eq!(FieldElement::zero().invert(), Err(Error::DivisionByZero));
    }

    #[test]
    fn nice_square_roots() {
        assert_eq!(FieldElement::from_int(12).sqrt_if_nice(), Some(FieldElement::term(int(2), 3)));
        assert_eq!(FieldElement::from_int(-7).sqrt_if_nice(), Some(FieldElement::sqrt_of(-7)));
        assert_eq!(fe("1 + sqrt(2)").sqrt_if_nice(), None);
        let r = fe("9 + 6*sqrt(2)").sqrt_if_nice().unwrap();
        assert_eq!(r.square(), fe("9 + 6*sqrt(2)"));
        let r = FieldElement::i().sqrt_if_nice().unwrap();
        assert_eq!(r.square(), FieldElement::i());
        assert_eq!(fe("4/9").sqrt_if_nice(), Some(fe("2/3")));
    }

    #[test]
    fn rendering_matches_report_style() {
        let a = fe("1/14 - 3/98*I*sqrt(7)");
        assert_eq!(a.to_string(), "1/14*(1 - 3/7*I*sqrt(7))");
        assert_eq!(fe("-2/9").to_string(), "-2/9");
        assert_eq!(fe("I*sqrt(7)/8").to_string(), "1/8*I*sqrt(7)");
        assert_eq!(fe("-I").to_string(), "-I");
        assert_eq!(fe("1 + sqrt(3)").to_string(), "1 + sqrt(3)");
        assert_eq!(fe("-1 - I").to_string(), "-(1 + I)");
        assert_eq!(fe(&a.to_string()), a);
        // rational part first, then ascending |rad| with positive before negative
        let b = fe("I*sqrt(3) + sqrt(3) + 2");
        let rads: Vec<i64> = b.terms().map(|(r, _)| r).collect();
        assert_eq!(rads, vec![1, 3, -3]);
    }

    #[test]
    fn json_form() {
        let a = fe("1/14 - 3/98*I*sqrt(7)");
        let j = serde_json::to_string(&a).unwrap();
        assert_eq!(
            j,
            r#"{"terms":[{"rad":1,"num":"1","den":"14"},{"rad":-7,"num":"-3","den":"98"}]}"#
        );
        let back: FieldElement = serde_json::from_str(&j).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<FieldElement>(r#"{"terms":[{"rad":4,"num":"1","den":"1"}]}"#).is_err());
    }

    #[test]
    fn conjugation() {
        let a = fe("1/2 + sqrt(3) + I*sqrt(3)");
        assert_eq!(a.conj(), fe("1/2 + sqrt(3) - I*sqrt(3)"));
        assert!((&a * &a.conj()).is_real());
    }

    fn arb_element() -> impl Strategy<Value = FieldElement> {
        let rads = prop::sample::select(vec![1i64, 2, 3, 6, -1, -3, 7, -7]);
        prop::collection::vec((rads, -1_000_000i64..1_000_000, 1i64..1_000_000), 0..4).prop_map(
            |ts| {
                ts.into_iter().fold(FieldElement::zero(), |acc, (r, n, d)| {
                    &acc + &FieldElement::term(rat(n, d), r)
                })
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn field_axioms(a in arb_element(), b in arb_element(), c in arb_element()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                prop_assert!((&a * &a.invert().unwrap()).is_one());
            }
        }

        #[test]
        fn sqrt_of_squares(a in arb_element()) {
            let sq = a.square();
            if let Some(r) = sq.sqrt_if_nice() {
                prop_assert_eq!(r.square(), sq);
            } else {
                // single- and two-term elements over these radicands are always recovered
                prop_assert!(a.num_terms() > 2);
            }
        }
    }
}
