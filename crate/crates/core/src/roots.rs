//! Roots of univariate polynomials over a multi-quadratic tower.
//!
//! Exact roots come from linear factors, the quadratic formula, and a
//! numerically guided reconstruction: conjugate sets of roots of the norm
//! polynomial are located, and each root is split into its `(Z/2)^J`
//! eigencomponents, whose squares must be rational. Anything else is
//! returned as a certified numeric enclosure.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::One;

use crate::error::{Error, Result};
use crate::field::{FieldElement, Rational};
use crate::numeric::{certified_roots, recognize_rational, CFix, ComplexInterval};

/// Univariate polynomial, coefficients in ascending degree.
pub type UPoly = Vec<FieldElement>;

pub fn trim(mut f: UPoly) -> UPoly {
    while f.last().is_some_and(|c| c.is_zero()) {
        f.pop();
    }
    f
}

pub fn degree(f: &UPoly) -> Option<usize> {
    f.iter().rposition(|c| !c.is_zero())
}

pub fn monic(f: &UPoly) -> UPoly {
    let f = trim(f.clone());
    match f.last() {
        Some(l) if !l.is_one() => {
            let inv = l.invert().expect("nonzero leading coefficient");
            f.iter().map(|c| c * &inv).collect()
        }
        _ => f,
    }
}

pub fn eval(f: &UPoly, x: &FieldElement) -> FieldElement {
    f.iter().rev().fold(FieldElement::zero(), |acc, c| &(&acc * x) + c)
}

pub fn mul(a: &UPoly, b: &UPoly) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![FieldElement::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    trim(out)
}

pub fn derivative(f: &UPoly) -> UPoly {
    trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&Rational::from_integer(BigInt::from(i))))
            .collect(),
    )
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(a: &UPoly, b: &UPoly) -> (UPoly, UPoly) {
    let b = trim(b.clone());
    let db = b.len() - 1;
    let lead_inv = b[db].invert().expect("nonzero divisor");
    let mut r = trim(a.clone());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![FieldElement::zero(); r.len() - db];
    while r.len() >= b.len() {
        let k = r.len() - b.len();
        let c = &r[r.len() - 1] * &lead_inv;
        for (j, bj) in b.iter().enumerate() {
            let t = &c * bj;
            r[k + j] -= &t;
        }
        q[k] = c;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

pub fn gcd(a: &UPoly, b: &UPoly) -> UPoly {
    let mut x = trim(a.clone());
    let mut y = trim(b.clone());
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

pub fn squarefree_part(f: &UPoly) -> UPoly {
    let f = monic(f);
    if f.len() <= 2 {
        return f;
    }
    let g = gcd(&f, &derivative(&f));
    if g.len() <= 1 {
        f
    } else {
        monic(&divrem(&f, &g).0)
    }
}

fn is_rational_poly(f: &UPoly) -> bool {
    f.iter().all(|c| c.is_rational())
}

/// Product of all sign-flip conjugates: a polynomial over `Q` whose roots
/// include every root of `f`.
pub fn norm_polynomial(f: &UPoly) -> UPoly {
    let mut primes: Vec<i64> = Vec::new();
    for c in f {
        for p in c.primes() {
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
    }
    let mut n = f.clone();
    for p in primes {
        let conj: UPoly = n.iter().map(|c| c.flip_prime(p)).collect();
        n = mul(&n, &conj);
    }
    debug_assert!(is_rational_poly(&n));
    n
}

/// One root of a univariate polynomial.
#[derive(Clone, Debug, PartialEq)]
pub enum Root {
    Exact(FieldElement),
    /// Fixed-point approximation at `bits` with a disc radius enclosing the root.
    Numeric { value: CFix, bits: u32, radius: Rational },
}

impl Root {
    pub fn to_c64(&self) -> Complex64 {
        match self {
            Root::Exact(a) => {
                let (re, im) = a.to_c64();
                Complex64::new(re, im)
            }
            Root::Numeric { value, bits, .. } => value.to_c64(*bits),
        }
    }

    pub fn exact(&self) -> Option<&FieldElement> {
        match self {
            Root::Exact(a) => Some(a),
            Root::Numeric { .. } => None,
        }
    }

    pub fn enclosure(&self, precision: u32) -> ComplexInterval {
        match self {
            Root::Exact(a) => a.to_complex(precision),
            Root::Numeric { value, bits, radius } => ComplexInterval::around(value, *bits, radius),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RootConfig {
    /// Starting precision for numeric roots.
    pub precision: u32,
    pub max_precision: u32,
    /// Largest conjugate-set size tried by the guided reconstruction.
    pub max_conjugates: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        RootConfig {
            precision: 128,
            max_precision: 2048,
            max_conjugates: 8,
        }
    }
}

/// All distinct roots of `f`, exact where they lie in a multi-quadratic
/// tower, ordered by their numeric embedding (real part, then imaginary).
pub fn roots(f: &UPoly, cfg: &RootConfig) -> Result<Vec<Root>> {
    let f = squarefree_part(f);
    let Some(deg) = degree(&f) else {
        return Err(Error::InvariantViolation("roots of the zero polynomial".into()));
    };
    if deg == 0 {
        return Ok(Vec::new());
    }
    let mut exact: Vec<FieldElement> = Vec::new();
    let mut rest = f.clone();
    // linear and quadratic factors directly
    if deg == 1 {
        exact.push(-&f[0]);
        rest = vec![FieldElement::one()];
    } else if deg == 2 {
        if let Some(rs) = quadratic_roots(&f) {
            exact.extend(rs);
            rest = vec![FieldElement::one()];
        }
    }
    if degree(&rest).unwrap_or(0) > 0 {
        for r in guided_exact_roots(&rest, cfg) {
            if !exact.contains(&r) {
                exact.push(r.clone());
                let lin = vec![-&r, FieldElement::one()];
                rest = divrem(&rest, &lin).0;
            }
        }
        // a quadratic cofactor left over may still split over the tower
        if degree(&rest) == Some(2) {
            if let Some(rs) = quadratic_roots(&rest) {
                exact.extend(rs);
                rest = vec![FieldElement::one()];
            }
        }
    }
    let mut out: Vec<Root> = exact.into_iter().map(Root::Exact).collect();
    let rd = degree(&rest).unwrap_or(0);
    if rd > 0 {
        let coeffs = rest.clone();
        let at = move |bits: u32| coeffs.iter().map(|c| CFix::from_field(c, bits)).collect::<Vec<_>>();
        let (bits, numeric) = certified_roots(&at, rd, cfg.precision, cfg.max_precision).ok_or_else(|| {
            Error::ResourceLimit(format!(
                "numeric roots not certified within {} bits",
                cfg.max_precision
            ))
        })?;
        out.extend(numeric.into_iter().map(|(value, radius)| Root::Numeric { value, bits, radius }));
    }
    sort_roots(&mut out);
    Ok(out)
}

pub fn sort_roots(rs: &mut [Root]) {
    rs.sort_by(|a, b| {
        let (x, y) = (a.to_c64(), b.to_c64());
        x.re.partial_cmp(&y.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(x.im.partial_cmp(&y.im).unwrap_or(std::cmp::Ordering::Equal))
    });
}

fn quadratic_roots(f: &UPoly) -> Option<Vec<FieldElement>> {
    let f = monic(f);
    // x^2 + b x + c: (-b +- sqrt(b^2 - 4c)) / 2
    let b = &f[1];
    let c = &f[0];
    let disc = &b.square() - &c.scale(&Rational::from_integer(BigInt::from(4)));
    let s = disc.sqrt_if_nice()?;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let r1 = (&(-b) + &s).scale(&half);
    let r2 = (&(-b) - &s).scale(&half);
    Some(if r1 == r2 { vec![r1] } else { vec![r1, r2] })
}

/// Working precision for recognizing symmetric functions of roots of `n`.
fn guide_bits(n: &UPoly) -> u32 {
    let height = n.iter().map(|c| c.bit_size()).max().unwrap_or(0) as u32;
    (256 + 8 * height).min(8192)
}

/// Exact roots of `f` found by locating conjugate sets among the roots of
/// its norm polynomial.
fn guided_exact_roots(f: &UPoly, cfg: &RootConfig) -> Vec<FieldElement> {
    let n = squarefree_part(&norm_polynomial(f));
    let Some(dn) = degree(&n) else {
        return Vec::new();
    };
    if dn == 0 {
        return Vec::new();
    }
    let bits = guide_bits(&n);
    let coeffs: Vec<Rational> = n.iter().map(|c| c.rational_part()).collect();
    let at = |b: u32| coeffs.iter().map(|q| CFix::from_rational(q, b)).collect::<Vec<_>>();
    let Some((bits, nroots)) = certified_roots(&at, dn, bits, bits.max(cfg.max_precision) * 2) else {
        return Vec::new();
    };
    let z: Vec<CFix> = nroots.into_iter().map(|(v, _)| v).collect();
    let mut found: Vec<FieldElement> = Vec::new();
    let mut used = vec![false; z.len()];
    for start in 0..z.len() {
        if used[start] {
            continue;
        }
        let mut m = 1;
        while m <= cfg.max_conjugates && m <= dn {
            if let Some((members, values)) = conjugate_set(&z, &used, start, m, bits, &coeffs) {
                for k in &members {
                    used[*k] = true;
                }
                for v in values {
                    if eval(f, &v).is_zero() && !found.contains(&v) {
                        found.push(v);
                    }
                }
                break;
            }
            m *= 2;
        }
    }
    found
}

/// Searches a set of `m` roots (containing `start`) with rational elementary
/// symmetric functions that divides the norm polynomial, and whose members
/// decompose into components with rational squares. Returns the member
/// indices and their exact values.
fn conjugate_set(
    z: &[CFix],
    used: &[bool],
    start: usize,
    m: usize,
    bits: u32,
    norm: &[Rational],
) -> Option<(Vec<usize>, Vec<FieldElement>)> {
    let others: Vec<usize> = (0..z.len()).filter(|&k| k != start && !used[k]).collect();
    if others.len() + 1 < m {
        return None;
    }
    let limit = 200_000usize;
    let mut tried = 0usize;
    let mut combo: Vec<usize> = (0..m - 1).collect();
    loop {
        tried += 1;
        if tried > limit {
            return None;
        }
        let members: Vec<usize> = std::iter::once(start).chain(combo.iter().map(|&c| others[c])).collect();
        if let Some(values) = try_members(z, &members, bits, norm) {
            return Some((members, values));
        }
        // next combination
        let k = m - 1;
        if k == 0 {
            return None;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if combo[i] < others.len() - k + i {
                combo[i] += 1;
                for j in i + 1..k {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn try_members(z: &[CFix], members: &[usize], bits: u32, norm: &[Rational]) -> Option<Vec<FieldElement>> {
    let m = members.len();
    // sum first: cheapest rejection
    let mut sum = CFix::zero();
    for &k in members {
        sum = sum.add(&z[k]);
    }
    let imag_tol = BigInt::one() << (bits / 2);
    if sum.im.magnitude() > imag_tol.magnitude() {
        return None;
    }
    recognize_rational(&sum.re, bits)?;
    // elementary symmetric functions via the product of linear factors
    let mut poly: Vec<CFix> = vec![CFix::one(bits)];
    for &k in members {
        let mut next = vec![CFix::zero(); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].sub(&c.mul(&z[k], bits));
        }
        poly = next;
    }
    let mut factor: Vec<Rational> = Vec::with_capacity(m + 1);
    for c in &poly {
        if c.im.magnitude() > imag_tol.magnitude() {
            return None;
        }
        factor.push(recognize_rational(&c.re, bits)?);
    }
    // exact divisibility of the norm polynomial
    let nf: UPoly = norm.iter().map(|q| FieldElement::from_rational(q.clone())).collect();
    let ff: UPoly = factor.iter().map(|q| FieldElement::from_rational(q.clone())).collect();
    let (_, r) = divrem(&nf, &ff);
    if !r.is_empty() {
        return None;
    }
    let pts: Vec<CFix> = members.iter().map(|&k| z[k].clone()).collect();
    if m == 1 {
        return Some(vec![FieldElement::from_rational(factor[0].clone() * BigInt::from(-1))]);
    }
    decompose_conjugates(&pts, bits, &ff)
}

/// Finds a labelling of `m = 2^J` conjugates by `(Z/2)^J` under which every
/// eigencomponent has a rational square, and returns the exact values of all
/// members.
fn decompose_conjugates(pts: &[CFix], bits: u32, factor: &UPoly) -> Option<Vec<FieldElement>> {
    let m = pts.len();
    if !m.is_power_of_two() {
        return None;
    }
    let mut perm: Vec<usize> = (1..m).collect();
    let scale = m.trailing_zeros();
    loop {
        let mut label = vec![0usize; m];
        for (t, &k) in perm.iter().enumerate() {
            label[t + 1] = k;
        }
        if let Some(vals) = components(pts, &label, bits, scale, factor) {
            return Some(vals);
        }
        if !next_permutation(&mut perm) {
            return None;
        }
    }
}

fn components(pts: &[CFix], label: &[usize], bits: u32, scale: u32, factor: &UPoly) -> Option<Vec<FieldElement>> {
    let m = pts.len();
    let mut comps: Vec<FieldElement> = Vec::with_capacity(m);
    let mut approx: Vec<CFix> = Vec::with_capacity(m);
    for s in 0..m {
        let mut w = CFix::zero();
        for t in 0..m {
            let z = &pts[label[t]];
            if (s & t).count_ones() % 2 == 0 {
                w = w.add(z);
            } else {
                w = w.sub(z);
            }
        }
        let w = CFix {
            re: w.re >> scale,
            im: w.im >> scale,
        };
        let sq = w.mul(&w, bits);
        let tol = BigInt::one() << (bits / 2);
        if sq.im.magnitude() > tol.magnitude() {
            return None;
        }
        let q = recognize_rational(&sq.re, bits)?;
        let root = FieldElement::from_rational(q).sqrt_if_nice()?;
        // sign from the numeric component
        let (re, im) = root.to_c64();
        let wc = w.to_c64(bits);
        let root = if re * wc.re + im * wc.im >= 0.0 { root } else { -root };
        comps.push(root);
        approx.push(w);
    }
    // member labelled t is sum_s (-1)^{|s&t|} w_s
    let mut vals = Vec::with_capacity(m);
    for t in 0..m {
        let mut v = FieldElement::zero();
        for (s, c) in comps.iter().enumerate() {
            if (s & t).count_ones() % 2 == 0 {
                v += c;
            } else {
                v -= c;
            }
        }
        if !eval(factor, &v).is_zero() {
            return None;
        }
        vals.push(v);
    }
    let _ = approx;
    Some(vals)
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
