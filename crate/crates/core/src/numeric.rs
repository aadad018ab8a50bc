//! Interval enclosures, fixed-point complex arithmetic and polynomial root
//! approximation used for the numeric fallback and for guiding exact root
//! reconstruction.

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::field::{FieldElement, Rational};

/// Closed real interval with exact rational endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn point(q: Rational) -> Self {
        Interval { lo: q.clone(), hi: q }
    }

    pub fn zero() -> Self {
        Self::point(Rational::zero())
    }

    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn neg(&self) -> Interval {
        Interval::new(-&self.hi, -&self.lo)
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }

    pub fn scale(&self, q: &Rational) -> Interval {
        if q.is_negative() {
            Interval::new(&self.hi * q, &self.lo * q)
        } else {
            Interval::new(&self.lo * q, &self.hi * q)
        }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> Rational {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn mid_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / BigInt::from(2)).to_f64().unwrap_or(f64::NAN)
    }

    /// Rounds endpoints outward to multiples of `2^-bits` to keep sizes bounded.
    pub fn round_out(&self, bits: u32) -> Interval {
        let s = BigInt::one() << bits;
        let lo = (&self.lo * &s).floor();
        let hi = (&self.hi * &s).ceil();
        let d = BigRational::from_integer(s);
        Interval::new(lo / &d, hi / &d)
    }
}

/// `[floor(sqrt(k)*2^bits), ceil(..)] / 2^bits`.
pub fn sqrt_interval(k: u64, bits: u32) -> Interval {
    let scaled = BigInt::from(k) << (2 * bits);
    let s = scaled.sqrt();
    let d = BigRational::from_integer(BigInt::one() << bits);
    if &s * &s == scaled {
        Interval::point(BigRational::from_integer(s) / d)
    } else {
        Interval::new(
            BigRational::from_integer(s.clone()) / &d,
            BigRational::from_integer(s + 1) / d,
        )
    }
}

/// Rectangular complex enclosure.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexInterval {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexInterval {
    pub fn point(re: Rational, im: Rational) -> Self {
        ComplexInterval {
            re: Interval::point(re),
            im: Interval::point(im),
        }
    }

    pub fn zero() -> Self {
        Self::point(Rational::zero(), Rational::zero())
    }

    /// Disc-like box of radius `r` around a fixed-point value.
    pub fn around(c: &CFix, bits: u32, r: &Rational) -> Self {
        let re = fix_to_rational(&c.re, bits);
        let im = fix_to_rational(&c.im, bits);
        ComplexInterval {
            re: Interval::new(&re - r, &re + r),
            im: Interval::new(&im - r, &im + r),
        }
    }

    /// Encloses `a` with width at most `2^(1-precision)` times its magnitude.
    pub fn enclose(a: &FieldElement, precision: u32) -> Self {
        if let Some(q) = a.as_rational() {
            return Self::point(q, Rational::zero());
        }
        let precision = precision.max(53);
        let mut bits = precision + 16;
        loop {
            let mut re = Interval::zero();
            let mut im = Interval::zero();
            for (r, q) in a.terms() {
                let k = r.unsigned_abs();
                let t = if k == 1 {
                    Interval::point(q.clone())
                } else {
                    sqrt_interval(k, bits).scale(q)
                };
                if r < 0 {
                    im = im.add(&t);
                } else {
                    re = re.add(&t);
                }
            }
            let out = ComplexInterval { re, im };
            let mag = out.re.mag().max(out.im.mag());
            let tol = mag * BigRational::new(BigInt::from(2), BigInt::one() << precision);
            if out.re.width() <= tol && out.im.width() <= tol {
                return out;
            }
            bits *= 2;
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        ComplexInterval {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        ComplexInterval {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        ComplexInterval {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn round_out(&self, bits: u32) -> Self {
        ComplexInterval {
            re: self.re.round_out(bits),
            im: self.im.round_out(bits),
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn width(&self) -> Rational {
        self.re.width().max(self.im.width())
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.mid_f64(), self.im.mid_f64())
    }
}

/// Complex number `(re + i*im) / 2^bits` with the scale carried by the caller.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CFix {
    pub re: BigInt,
    pub im: BigInt,
}

impl CFix {
    pub fn zero() -> Self {
        CFix {
            re: BigInt::zero(),
            im: BigInt::zero(),
        }
    }

    pub fn one(bits: u32) -> Self {
        CFix {
            re: BigInt::one() << bits,
            im: BigInt::zero(),
        }
    }

    pub fn from_c64(z: Complex64, bits: u32) -> Self {
        CFix {
            re: f64_to_fix(z.re, bits),
            im: f64_to_fix(z.im, bits),
        }
    }

    pub fn from_rational(q: &Rational, bits: u32) -> Self {
        CFix {
            re: rational_to_fix(q, bits),
            im: BigInt::zero(),
        }
    }

    pub fn from_field(a: &FieldElement, bits: u32) -> Self {
        let e = ComplexInterval::enclose(a, bits + 8);
        let two = BigInt::from(2);
        let re = (&e.re.lo + &e.re.hi) / &two;
        let im = (&e.im.lo + &e.im.hi) / &two;
        CFix {
            re: rational_to_fix(&re, bits),
            im: rational_to_fix(&im, bits),
        }
    }

    pub fn to_c64(&self, bits: u32) -> Complex64 {
        Complex64::new(fix_to_f64(&self.re, bits), fix_to_f64(&self.im, bits))
    }

    pub fn add(&self, o: &CFix) -> CFix {
        CFix {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    pub fn sub(&self, o: &CFix) -> CFix {
        CFix {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    pub fn neg(&self) -> CFix {
        CFix {
            re: -&self.re,
            im: -&self.im,
        }
    }

    pub fn conj(&self) -> CFix {
        CFix {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn mul(&self, o: &CFix, bits: u32) -> CFix {
        CFix {
            re: (&self.re * &o.re - &self.im * &o.im) >> bits,
            im: (&self.re * &o.im + &self.im * &o.re) >> bits,
        }
    }

    pub fn div(&self, o: &CFix, bits: u32) -> Option<CFix> {
        let d = &o.re * &o.re + &o.im * &o.im;
        if d.is_zero() {
            return None;
        }
        let re = (&self.re * &o.re + &self.im * &o.im) << bits;
        let im = (&self.im * &o.re - &self.re * &o.im) << bits;
        Some(CFix { re: re / &d, im: im / d })
    }

    /// `|z|^2` at scale `2^bits`.
    pub fn norm_sqr(&self, bits: u32) -> BigInt {
        (&self.re * &self.re + &self.im * &self.im) >> bits
    }

    /// Upper bound on `|z|` as a fixed-point integer (|re| + |im|).
    pub fn abs_bound(&self) -> BigInt {
        self.re.abs() + self.im.abs()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Re-expresses at a different scale.
    pub fn rescale(&self, from: u32, to: u32) -> CFix {
        if to >= from {
            CFix {
                re: &self.re << (to - from),
                im: &self.im << (to - from),
            }
        } else {
            CFix {
                re: &self.re >> (from - to),
                im: &self.im >> (from - to),
            }
        }
    }
}

pub fn f64_to_fix(x: f64, bits: u32) -> BigInt {
    if x == 0.0 || !x.is_finite() {
        return BigInt::zero();
    }
    let (m, e) = frexp(x);
    // x = m * 2^e with 0.5 <= |m| < 1
    let mant = BigInt::from_f64(m * (1u64 << 53) as f64).unwrap_or_default();
    let shift = e + bits as i32 - 53;
    if shift >= 0 {
        mant << shift as u32
    } else {
        mant >> (-shift) as u32
    }
}

fn frexp(x: f64) -> (f64, i32) {
    if x == 0.0 {
        return (0.0, 0);
    }
    let e = x.abs().log2().floor() as i32 + 1;
    let m = x / 2f64.powi(e);
    if m.abs() >= 1.0 {
        (m / 2.0, e + 1)
    } else if m.abs() < 0.5 {
        (m * 2.0, e - 1)
    } else {
        (m, e)
    }
}

pub fn fix_to_f64(x: &BigInt, bits: u32) -> f64 {
    let b = x.bits() as i64;
    if b <= 60 {
        x.to_f64().unwrap_or(0.0) * 2f64.powi(-(bits as i32))
    } else {
        let s = (b - 60) as u32;
        (x >> s).to_f64().unwrap_or(0.0) * 2f64.powi(s as i32 - bits as i32)
    }
}

pub fn rational_to_fix(q: &Rational, bits: u32) -> BigInt {
    let n = q.numer() << bits;
    let d = q.denom();
    // round to nearest
    let (quo, rem) = num_integer::Integer::div_rem(&n, d);
    if (rem.abs() << 1u32) >= *d {
        if n.sign() == Sign::Minus {
            quo - 1
        } else {
            quo + 1
        }
    } else {
        quo
    }
}

pub fn fix_to_rational(x: &BigInt, bits: u32) -> Rational {
    BigRational::new(x.clone(), BigInt::one() << bits)
}

/// Best rational approximation of `x / 2^bits` with a small denominator,
/// found by continued-fraction convergents. Returns a candidate only when it
/// agrees with `x` far beyond what its denominator size explains.
pub fn recognize_rational(x: &BigInt, bits: u32) -> Option<Rational> {
    let target = fix_to_rational(x, bits);
    let tol = BigRational::new(BigInt::one(), BigInt::one() << bits.saturating_sub(8));
    let mut h_prev = BigInt::zero();
    let mut h = BigInt::one();
    let mut k_prev = BigInt::one();
    let mut k = BigInt::zero();
    let mut rest = target.clone();
    for _ in 0..(bits as usize) {
        let a = rest.floor().to_integer();
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        let approx = BigRational::new(h.clone(), k.clone());
        let err = (&approx - &target).abs();
        // denominators must leave a wide gap to the working precision
        if 2 * k.bits() + 24 > bits as u64 {
            return None;
        }
        if err <= tol {
            return Some(approx);
        }
        let frac = &rest - BigRational::from_integer(a);
        if frac.is_zero() {
            return Some(approx);
        }
        rest = frac.recip();
    }
    None
}

/// Horner evaluation in fixed point; coefficients ascending.
pub fn eval_fix(coeffs: &[CFix], z: &CFix, bits: u32) -> CFix {
    let mut acc = CFix::zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul(z, bits).add(c);
    }
    acc
}

/// Value and derivative.
pub fn eval_fix_d(coeffs: &[CFix], z: &CFix, bits: u32) -> (CFix, CFix) {
    let mut p = CFix::zero();
    let mut dp = CFix::zero();
    for c in coeffs.iter().rev() {
        dp = dp.mul(z, bits).add(&p);
        p = p.mul(z, bits).add(c);
    }
    (p, dp)
}

/// Aberth-Ehrlich simultaneous iteration in `f64`; coefficients ascending,
/// leading coefficient nonzero.
pub fn aberth_f64(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    if n == 1 {
        return vec![-monic[0]];
    }
    // Fujiwara bound for the initial circle
    let radius = (0..n)
        .map(|i| monic[i].norm().powf(1.0 / (n - i) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3)
        * 2.0;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius * 0.5, t)
        })
        .collect();
    let eval = |x: Complex64| {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in monic.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    };
    for _ in 0..2000 {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let (p, dp) = eval(z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = z[k] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(1e-12, 0.0).inv()
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[k] -= w;
                max_step = max_step.max(w.norm() / (1.0 + z[k].norm()));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

/// Refines all roots of a squarefree polynomial by fixed-point Aberth steps
/// at `bits` of precision, starting from `seeds`.
pub fn aberth_fix(coeffs: &[CFix], seeds: &[CFix], bits: u32) -> Vec<CFix> {
    let n = seeds.len();
    let mut z = seeds.to_vec();
    let one = CFix::one(bits);
    let tiny = BigInt::one() << (bits / 2 + 8).min(bits);
    let threshold = BigInt::one() << 8u32;
    for _ in 0..(8 + bits as usize / 8) {
        let mut converged = true;
        for k in 0..n {
            let (p, dp) = eval_fix_d(coeffs, &z[k], bits);
            if p.is_zero() {
                continue;
            }
            let Some(ratio) = p.div(&dp, bits) else {
                converged = false;
                continue;
            };
            let mut s = CFix::zero();
            for j in 0..n {
                if j != k {
                    if let Some(inv) = one.div(&z[k].sub(&z[j]), bits) {
                        s = s.add(&inv);
                    }
                }
            }
            let denom = one.sub(&ratio.mul(&s, bits));
            let w = ratio.div(&denom, bits).unwrap_or(ratio);
            let step = w.abs_bound();
            z[k] = z[k].sub(&w);
            if step > threshold {
                converged = false;
            }
            let _ = &tiny;
        }
        if converged {
            break;
        }
    }
    z
}

/// Radius (as a rational) of a disc around `z` guaranteed to contain a root:
/// `n * |p(z)| / |p'(z)|`, padded by the fixed-point rounding scale.
pub fn inclusion_radius(coeffs: &[CFix], z: &CFix, bits: u32) -> Option<Rational> {
    let n = coeffs.len().saturating_sub(1) as i64;
    let (p, dp) = eval_fix_d(coeffs, z, bits);
    let dpa = dp.abs_bound();
    if dpa.is_zero() {
        return None;
    }
    // |dp| >= max(|re|,|im|) >= (|re|+|im|)/2; |p| <= |re|+|im|
    let pa = p.abs_bound() + BigInt::from(coeffs.len() as u64 * 4);
    let r = BigRational::new(pa * BigInt::from(2 * n.max(1)), dpa);
    let pad = BigRational::new(BigInt::from(4), BigInt::one() << bits);
    Some(r + pad)
}

/// Certified numeric roots of a squarefree polynomial with complex fixed-point
/// coefficients: returns each root and a radius such that the discs are
/// pairwise disjoint and each holds exactly one root.
pub fn certified_roots(
    coeffs_at: &dyn Fn(u32) -> Vec<CFix>,
    degree: usize,
    min_bits: u32,
    max_bits: u32,
) -> Option<(u32, Vec<(CFix, Rational)>)> {
    if degree == 0 {
        return Some((min_bits, Vec::new()));
    }
    let c53 = coeffs_at(64);
    let c64: Vec<Complex64> = c53.iter().map(|c| c.to_c64(64)).collect();
    let seeds64 = aberth_f64(&c64);
    let mut bits = min_bits.max(64);
    let mut seeds: Vec<CFix> = seeds64.iter().map(|z| CFix::from_c64(*z, bits)).collect();
    let mut prev_bits = bits;
    while bits <= max_bits {
        let coeffs = coeffs_at(bits);
        let seeds_here: Vec<CFix> = seeds.iter().map(|z| z.rescale(prev_bits, bits)).collect();
        let roots = aberth_fix(&coeffs, &seeds_here, bits);
        let radii: Option<Vec<Rational>> = roots.iter().map(|z| inclusion_radius(&coeffs, z, bits)).collect();
        if let Some(radii) = radii {
            if discs_disjoint(&roots, &radii, bits) {
                return Some((bits, roots.into_iter().zip(radii).collect()));
            }
        }
        seeds = roots;
        prev_bits = bits;
        bits *= 2;
    }
    None
}

fn discs_disjoint(roots: &[CFix], radii: &[Rational], bits: u32) -> bool {
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let d = roots[i].sub(&roots[j]);
            // distance lower bound: max(|dre|,|dim|)
            let dist = fix_to_rational(&d.re.abs().max(d.im.abs()), bits);
            // boxes of half-width r: disjoint if distance exceeds the sum of radii
            if dist <= &radii[i] + &radii[j] {
                return false;
            }
        }
    }
    true
}
