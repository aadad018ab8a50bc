//! Prime-field shadows of rational Groebner computations, lifted back by
//! Chinese remaindering and rational reconstruction.

use std::cell::Cell;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::f4::groebner_f4;
use crate::field::{FieldElement, Rational};
use crate::poly::{groebner_basis, interreduce, normal_form, satisfies_buchberger_criterion, Coeff, GroebnerLimits, Monomial, Poly, TermOrder};

thread_local! {
    static MODULUS: Cell<u64> = const { Cell::new(0) };
}

/// Runs `f` with prime-field arithmetic modulo `p` on this thread.
pub fn with_modulus<T>(p: u64, f: impl FnOnce() -> T) -> T {
    let old = MODULUS.with(|m| m.replace(p));
    let out = f();
    MODULUS.with(|m| m.set(old));
    out
}

#[inline]
pub(crate) fn modulus() -> u64 {
    MODULUS.with(|m| m.get())
}

/// An element of `Z/p` for the prime set by [`with_modulus`].
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp(pub u64);

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

fn reduce_int(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

impl Fp {
    /// `None` when the denominator vanishes modulo the current prime.
    pub fn try_from_rational(q: &Rational) -> Option<Fp> {
        let p = modulus();
        let den = reduce_int(q.denom(), p);
        if den == 0 {
            return None;
        }
        Some(Fp(mul_mod(reduce_int(q.numer(), p), pow_mod(den, p - 2, p), p)))
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Coeff for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn is_one(&self) -> bool {
        self.0 == 1
    }
    fn add(&self, o: &Self) -> Self {
        let p = modulus();
        let s = self.0 + o.0;
        Fp(if s >= p { s - p } else { s })
    }
    fn sub(&self, o: &Self) -> Self {
        Fp(if self.0 >= o.0 { self.0 - o.0 } else { self.0 + modulus() - o.0 })
    }
    fn mul(&self, o: &Self) -> Self {
        Fp(mul_mod(self.0, o.0, modulus()))
    }
    fn neg(&self) -> Self {
        Fp(if self.0 == 0 { 0 } else { modulus() - self.0 })
    }
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero");
        let p = modulus();
        Fp(pow_mod(self.0, p - 2, p))
    }
    fn from_rational(q: Rational) -> Self {
        Fp::try_from_rational(&q).expect("denominator divisible by the modulus")
    }
    fn to_field(&self) -> FieldElement {
        FieldElement::from_int(self.0 as i64)
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Descending primes below `2^62`.
pub fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::with_capacity(256);
        let mut n = (1u64 << 62) - 1;
        while out.len() < 256 {
            if is_prime_u64(n) {
                out.push(n);
            }
            n -= 2;
        }
        out
    })
}

/// The unique `n/d` congruent to `a` modulo `m` with `|n|, d <= sqrt(m/2)`.
pub fn rational_reconstruction(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m >> 1u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let (q, r2) = r0.div_rem(&r1);
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    Some(Rational::new(r1, t1))
}

type Signature = Vec<Monomial>;

/// Residues of one reduced basis shape, merged over several primes.
struct Lift {
    signature: Signature,
    modulus: BigInt,
    /// `(polynomial index, monomial) -> residue`
    residues: BTreeMap<(usize, Monomial), BigInt>,
    primes: usize,
}

impl Lift {
    fn absorb(&mut self, g: &[Poly<Fp>], p: u64) {
        let pb = BigInt::from(p);
        let mut keys: Vec<(usize, Monomial)> = self.residues.keys().cloned().collect();
        for (i, f) in g.iter().enumerate() {
            for (m, _) in f.terms() {
                keys.push((i, m.clone()));
            }
        }
        keys.sort();
        keys.dedup();
        let mut lookup: BTreeMap<(usize, Monomial), u64> = BTreeMap::new();
        for (i, f) in g.iter().enumerate() {
            for (m, c) in f.terms() {
                lookup.insert((i, m.clone()), c.0);
            }
        }
        // x = r + M * ((v - r) * M^-1 mod p)
        let minv = if self.primes == 0 {
            BigInt::zero()
        } else {
            let mm = reduce_int(&self.modulus, p);
            BigInt::from(pow_mod(mm, p - 2, p))
        };
        for k in keys {
            let v = BigInt::from(lookup.get(&k).copied().unwrap_or(0));
            let r = self.residues.get(&k).cloned().unwrap_or_else(BigInt::zero);
            let x = if self.primes == 0 {
                v
            } else {
                let t = ((&v - &r) * &minv).mod_floor(&pb);
                &r + &self.modulus * t
            };
            self.residues.insert(k, x);
        }
        self.modulus = if self.primes == 0 { pb } else { &self.modulus * pb };
        self.primes += 1;
    }

    fn reconstruct(&self, nvars: usize, order: crate::poly::TermOrder) -> Option<Vec<Poly<Rational>>> {
        let mut terms: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); self.signature.len()];
        for ((i, m), r) in &self.residues {
            let q = rational_reconstruction(r, &self.modulus)?;
            if !Zero::is_zero(&q) {
                terms[*i].push((m.clone(), q));
            }
        }
        Some(terms.into_iter().map(|t| Poly::from_terms(nvars, order, t)).collect())
    }
}

fn reduce_mod(gens: &[Poly<Rational>]) -> Option<Vec<Poly<Fp>>> {
    let mut out = Vec::with_capacity(gens.len());
    for g in gens {
        let mut terms = Vec::with_capacity(g.terms().len());
        for (m, c) in g.terms() {
            terms.push((m.clone(), Fp::try_from_rational(c)?));
        }
        out.push(Poly::from_terms(g.nvars(), g.order(), terms));
    }
    Some(out)
}

/// Exact check that `candidate` is a Groebner basis of an ideal containing
/// every generator.
pub fn certify_candidate(gens: &[Poly<Rational>], candidate: &[Poly<Rational>]) -> bool {
    gens.iter().all(|g| normal_form(g, candidate).is_zero()) && satisfies_buchberger_criterion(candidate)
}

/// Reduced Groebner basis over `Q` from prime-field images. The result is
/// checked exactly to be a Groebner basis whose ideal contains the input;
/// agreement of the ideals themselves rests on the primes being lucky. A unit
/// ideal is reported when two primes agree on it.
pub fn modular_groebner(gens: &[Poly<Rational>], limits: &GroebnerLimits, max_primes: usize) -> Result<Vec<Poly<Rational>>> {
    let Some(first) = gens.iter().find(|g| !g.is_zero()) else {
        return Ok(Vec::new());
    };
    let (nvars, order) = (first.nvars(), first.order());
    let unit = || vec![Poly::constant(nvars, order, <Rational as One>::one())];
    let mut lifts: Vec<Lift> = Vec::new();
    let mut units = 0usize;
    let mut nonunits = 0usize;
    let mut previous: Option<Vec<Poly<Rational>>> = None;
    let mut used = 0usize;
    for &p in primes() {
        if used >= max_primes {
            break;
        }
        let image = with_modulus(p, || -> Result<Option<Vec<Poly<Fp>>>> {
            let Some(g) = reduce_mod(gens) else {
                return Ok(None);
            };
            // degree-by-degree selection suits graded orders only
            Ok(Some(match order {
                TermOrder::DegRevLex => groebner_f4(&g, limits)?,
                TermOrder::Lex => groebner_basis(&g, limits)?,
            }))
        })?;
        let Some(g) = image else { continue };
        used += 1;
        if g.len() == 1 && g[0].is_constant() {
            units += 1;
            if units >= 2 && units > nonunits {
                return Ok(unit());
            }
            continue;
        }
        nonunits += 1;
        let signature: Signature = g.iter().map(|f| f.lm().clone()).collect();
        let idx = match lifts.iter().position(|l| l.signature == signature) {
            Some(i) => i,
            None => {
                lifts.push(Lift {
                    signature,
                    modulus: BigInt::one(),
                    residues: BTreeMap::new(),
                    primes: 0,
                });
                lifts.len() - 1
            }
        };
        lifts[idx].absorb(&g, p);
        // follow the most common shape; others come from unlucky primes
        let best = (0..lifts.len()).max_by_key(|&i| (lifts[i].primes, usize::MAX - i)).unwrap();
        if best != idx {
            continue;
        }
        let candidate = lifts[idx].reconstruct(nvars, order);
        if let (Some(c), Some(prev)) = (&candidate, &previous) {
            if c == prev && certify_candidate(gens, c) {
                return Ok(interreduce(c.clone()));
            }
        }
        previous = candidate;
    }
    Err(Error::ResourceLimit(format!(
        "modular Groebner basis did not stabilize within {max_primes} primes"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;


    #[test]
    fn field_ops() {
        with_modulus(primes()[0], || {
            let a = Fp(12345);
            assert_eq!(a.mul(&a.inv()), Fp::one());
            assert_eq!(a.sub(&a), Fp::zero());
            assert_eq!(a.neg().add(&a), Fp::zero());
            let q = Fp::from_rational(rat(-3, 7));
            assert_eq!(q.mul(&Fp(7)), Fp(3).neg());
        });
    }

    #[test]
    fn primes_are_prime() {
        let ps = primes();
        assert_eq!(ps[0], 4611686018427387847);
        assert_eq!(ps[1], 4611686018427387817);
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert!(!is_prime_u64(4611686018427387849));
        assert!(is_prime_u64(2305843009213693951));
    }

    #[test]
    fn reconstruction() {
        let m = BigInt::from(primes()[0]) * BigInt::from(primes()[1]);
        for (n, d) in [(1, 770), (-3, 110), (5, 36), (0, 1), (123456789, 987654321)] {
            let inv = BigInt::from(d).extended_gcd(&m).x.mod_floor(&m);
            let a = (BigInt::from(n) * inv).mod_floor(&m);
            assert_eq!(rational_reconstruction(&a, &m), Some(rat(n, d)));
        }
    }

    fn poly(nvars: usize, terms: &[(&[u16], i64, i64)]) -> Poly<Rational> {
        let t = terms
            .iter()
            .map(|(e, n, d)| (Monomial::from_exponents(e), rat(*n, *d)))
            .collect();
        Poly::from_terms(nvars, TermOrder::DegRevLex, t)
    }

    #[test]
    fn agrees_with_exact_engine() {
        let gens = vec![
            poly(2, &[(&[2, 0], 1, 1), (&[0, 1], -3, 7), (&[0, 0], 1, 5)]),
            poly(2, &[(&[1, 1], 2, 1), (&[1, 0], -1, 3), (&[0, 0], -1, 1)]),
        ];
        let exact = groebner_basis(&gens, &GroebnerLimits::default()).unwrap();
        let lifted = modular_groebner(&gens, &GroebnerLimits::default(), 64).unwrap();
        assert_eq!(exact, lifted);
    }

    #[test]
    fn unit_ideal() {
        let gens = vec![poly(1, &[(&[1], 1, 1)]), poly(1, &[(&[1], 1, 1), (&[0], 1, 1)])];
        let g = modular_groebner(&gens, &GroebnerLimits::default(), 8).unwrap();
        assert!(g.len() == 1 && g[0].is_constant());
    }
}
