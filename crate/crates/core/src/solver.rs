//! Solution points of zero-dimensional systems, and particular solutions of
//! positive-dimensional ones by slicing.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{rat, FieldElement, FieldElementJson, Rational};
use crate::modular::modular_groebner;
use crate::numeric::{ComplexInterval, Interval};
use crate::poly::{
    fglm, groebner_basis, hilbert_dimension, interreduce, is_unit_ideal, maximal_independent_set, standard_monomials, GroebnerLimits,
    Monomial, Poly, TermOrder,
};
use crate::roots::{roots, sort_roots, Root, RootConfig};

#[derive(Clone, Debug, PartialEq)]
pub enum Coordinate {
    Exact(FieldElement),
    Numeric(ComplexInterval),
}

impl Coordinate {
    pub fn to_c64(&self) -> Complex64 {
        match self {
            Coordinate::Exact(a) => {
                let (re, im) = a.to_c64();
                Complex64::new(re, im)
            }
            Coordinate::Numeric(b) => b.to_c64(),
        }
    }

    pub fn enclosure(&self, precision: u32) -> ComplexInterval {
        match self {
            Coordinate::Exact(a) => a.to_complex(precision),
            Coordinate::Numeric(b) => b.clone(),
        }
    }
}

/// One solution; coordinates follow the system's variable order.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionPoint {
    pub values: Vec<Coordinate>,
}

impl SolutionPoint {
    pub fn exact(values: Vec<FieldElement>) -> Self {
        SolutionPoint {
            values: values.into_iter().map(Coordinate::Exact).collect(),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.values.iter().all(|c| matches!(c, Coordinate::Exact(_)))
    }

    pub fn exact_values(&self) -> Option<Vec<FieldElement>> {
        self.values
            .iter()
            .map(|c| match c {
                Coordinate::Exact(a) => Some(a.clone()),
                Coordinate::Numeric(_) => None,
            })
            .collect()
    }

    pub fn approx(&self) -> Vec<Complex64> {
        self.values.iter().map(|c| c.to_c64()).collect()
    }

    pub fn to_json(&self) -> SolutionJson {
        SolutionJson {
            values: self.values.iter().map(CoordinateJson::from).collect(),
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct SolutionJson {
    pub values: Vec<CoordinateJson>,
}

/// Exact coordinates carry their field element; numeric ones an `approx`
/// midpoint plus the exact rational enclosure.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct CoordinateJson {
    pub exact: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<FieldElementJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub approx: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enclosure: Option<EnclosureJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct EnclosureJson {
    pub re: [String; 2],
    pub im: [String; 2],
}

impl From<&Coordinate> for CoordinateJson {
    fn from(c: &Coordinate) -> Self {
        match c {
            Coordinate::Exact(a) => CoordinateJson {
                exact: true,
                value: Some(FieldElementJson::from(a)),
                approx: None,
                enclosure: None,
            },
            Coordinate::Numeric(b) => {
                let z = b.to_c64();
                CoordinateJson {
                    exact: false,
                    value: None,
                    approx: Some([z.re, z.im]),
                    enclosure: Some(EnclosureJson {
                        re: [b.re.lo.to_string(), b.re.hi.to_string()],
                        im: [b.im.lo.to_string(), b.im.hi.to_string()],
                    }),
                }
            }
        }
    }
}

impl TryFrom<&CoordinateJson> for Coordinate {
    type Error = Error;

    fn try_from(j: &CoordinateJson) -> Result<Self> {
        let bad = |m: &str| Error::Parse {
            line: 0,
            message: m.to_string(),
        };
        if j.exact {
            let v = j.value.as_ref().ok_or_else(|| bad("exact coordinate without value"))?;
            return Ok(Coordinate::Exact(FieldElement::try_from(v)?));
        }
        let e = j
            .enclosure
            .as_ref()
            .ok_or_else(|| bad("numeric coordinate without enclosure"))?;
        let q = |t: &str| t.parse::<Rational>().map_err(|_| bad(&format!("bad rational '{t}'")));
        let iv = |pair: &[String; 2]| -> Result<Interval> {
            let (lo, hi) = (q(&pair[0])?, q(&pair[1])?);
            if lo > hi {
                return Err(bad("empty interval"));
            }
            Ok(Interval::new(lo, hi))
        };
        Ok(Coordinate::Numeric(ComplexInterval {
            re: iv(&e.re)?,
            im: iv(&e.im)?,
        }))
    }
}

/// How Groebner bases of rational systems are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroebnerEngine {
    /// Buchberger over `Q` or the tower throughout.
    Exact,
    /// Rational systems go through prime-field images and a lifted,
    /// exactly certified basis; the exact engine takes over when lifting
    /// does not stabilize. Tower coefficients always use the exact engine.
    Modular,
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub limits: GroebnerLimits,
    pub engine: GroebnerEngine,
    pub max_primes: usize,
    pub roots: RootConfig,
    pub slice_attempts: usize,
    pub max_standard_monomials: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            limits: GroebnerLimits::default(),
            engine: GroebnerEngine::Modular,
            max_primes: 64,
            roots: RootConfig::default(),
            slice_attempts: 64,
            max_standard_monomials: 20_000,
        }
    }
}

/// `f` with `x_var` replaced by `e`.
fn substitute_poly(f: &Poly<FieldElement>, var: usize, e: &Poly<FieldElement>) -> Poly<FieldElement> {
    let (n, order) = (f.nvars(), f.order());
    let mut powers: Vec<Poly<FieldElement>> = vec![Poly::constant(n, order, FieldElement::one())];
    let mut out = Poly::zero(n, order);
    for (m, c) in f.terms() {
        let k = m.0[var] as usize;
        while powers.len() <= k {
            let next = powers.last().unwrap().mul(e);
            powers.push(next);
        }
        let mut rest = m.clone();
        rest.0[var] = 0;
        out = out.add_scaled(&powers[k], c, &rest);
    }
    out
}

/// Solves the linear members of `gens` for their largest variables and
/// substitutes into the rest, repeating while new linear members appear.
/// Returns the pivot rows `x_p - l_p` (with `l_p` in smaller, non-pivot
/// variables) and the remaining polynomials, or `None` when inconsistent.
fn eliminate_linear(gens: Vec<Poly<FieldElement>>) -> Option<(Vec<(usize, Poly<FieldElement>)>, Vec<Poly<FieldElement>>)> {
    let mut pivots: Vec<(usize, Poly<FieldElement>)> = Vec::new();
    let mut rest = gens;
    loop {
        let (lin, nonlin): (Vec<_>, Vec<_>) = rest.into_iter().filter(|g| !g.is_zero()).partition(|g| g.total_degree() <= 1);
        rest = nonlin;
        if lin.is_empty() {
            break;
        }
        for mut row in lin {
            for (v, e) in &pivots {
                if row.support() >> v & 1 == 1 {
                    row = substitute_poly(&row, *v, e);
                }
            }
            if row.is_zero() {
                continue;
            }
            if row.is_constant() {
                return None;
            }
            let row = row.monic();
            let v = row.lm().support().trailing_zeros() as usize;
            let tail = Poly::from_terms(row.nvars(), row.order(), row.terms()[1..].to_vec()).neg();
            for (_, e) in pivots.iter_mut() {
                if e.support() >> v & 1 == 1 {
                    *e = substitute_poly(e, v, &tail);
                }
            }
            pivots.push((v, tail));
        }
        let mut next = Vec::with_capacity(rest.len());
        for f in rest {
            let mut f = f;
            for (v, e) in &pivots {
                if f.support() >> v & 1 == 1 {
                    f = substitute_poly(&f, *v, e);
                }
            }
            if f.is_zero() {
                continue;
            }
            if f.is_constant() {
                return None;
            }
            next.push(f);
        }
        rest = next;
    }
    Some((pivots, rest))
}

fn basis_of(gens: &[Poly<FieldElement>], cfg: &SolverConfig) -> Result<Vec<Poly<FieldElement>>> {
    if gens.is_empty() {
        return Ok(Vec::new());
    }
    let rational = gens.iter().all(|g| g.terms().iter().all(|(_, c)| c.is_rational()));
    if !rational {
        return groebner_basis(gens, &cfg.limits);
    }
    let q: Vec<Poly<Rational>> = gens.iter().map(|g| g.map_coeffs(|c| c.rational_part())).collect();
    let g = match cfg.engine {
        GroebnerEngine::Exact => groebner_basis(&q, &cfg.limits)?,
        GroebnerEngine::Modular => match modular_groebner(&q, &cfg.limits, cfg.max_primes) {
            Ok(g) => g,
            Err(Error::ResourceLimit(_)) => groebner_basis(&q, &cfg.limits)?,
            Err(e) => return Err(e),
        },
    };
    Ok(g.iter().map(|p| p.to_field()).collect())
}

/// Reduced Groebner basis of `gens` under `order`. Linear members are
/// eliminated exactly first; the pivot rows together with a basis of the
/// substituted system form a basis of the whole ideal.
///
/// Lex bases start from the degrevlex basis, converted by FGLM when the
/// ideal is zero-dimensional; computing them directly is far slower.
pub fn groebner_auto(gens: &[Poly<FieldElement>], order: TermOrder, cfg: &SolverConfig) -> Result<Vec<Poly<FieldElement>>> {
    let Some(nvars) = gens.iter().find(|g| !g.is_zero()).map(|g| g.nvars()) else {
        return Ok(Vec::new());
    };
    let drl;
    let mut gens = gens;
    if order == TermOrder::Lex {
        drl = groebner_auto(gens, TermOrder::DegRevLex, cfg)?;
        if hilbert_dimension(&drl, nvars) == 0 {
            if let Some(std) = standard_monomials(&drl, nvars, cfg.max_standard_monomials) {
                return Ok(fglm(&drl, &std, nvars));
            }
        }
        // a graded basis is a much better starting point than the input
        gens = &drl;
    }
    let gens: Vec<Poly<FieldElement>> = gens.iter().filter(|g| !g.is_zero()).map(|g| g.with_order(order)).collect();
    let unit = || vec![Poly::constant(nvars, order, FieldElement::one())];
    let Some((pivots, rest)) = eliminate_linear(gens) else {
        return Ok(unit());
    };
    let g = basis_of(&rest, cfg)?;
    if is_unit_ideal(&g) {
        return Ok(unit());
    }
    let mut all = g;
    for (v, e) in pivots {
        all.push(Poly::var(nvars, order, v).sub(&e));
    }
    Ok(interreduce(all))
}

fn sort_solutions(sols: &mut [SolutionPoint]) {
    sols.sort_by(|a, b| {
        for (x, y) in a.approx().iter().zip(b.approx().iter()) {
            let o = x
                .re
                .partial_cmp(&y.re)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(x.im.partial_cmp(&y.im).unwrap_or(std::cmp::Ordering::Equal));
            if o != std::cmp::Ordering::Equal {
                return o;
            }
        }
        std::cmp::Ordering::Equal
    });
}

/// All solutions over `C` of a zero-dimensional system, exact where every
/// coordinate lies in a multi-quadratic tower.
pub fn solve_zero_dimensional(gens: &[Poly<FieldElement>], cfg: &SolverConfig) -> Result<Vec<SolutionPoint>> {
    let Some(nvars) = gens.first().map(|g| g.nvars()) else {
        return Ok(vec![SolutionPoint { values: Vec::new() }]);
    };
    let g = groebner_auto(gens, TermOrder::DegRevLex, cfg)?;
    if is_unit_ideal(&g) {
        return Ok(Vec::new());
    }
    let h = hilbert_dimension(&g, nvars);
    if h > 0 {
        return Err(Error::NotZeroDimensional(h));
    }
    let std = standard_monomials(&g, nvars, cfg.max_standard_monomials)
        .ok_or_else(|| Error::ResourceLimit("too many standard monomials".into()))?;
    let mut exact: Vec<Vec<FieldElement>> = Vec::new();
    let mut incomplete = false;
    triangular(g.clone(), &mut vec![None; nvars], cfg, &mut exact, &mut incomplete)?;
    let mut sols: Vec<SolutionPoint> = exact.into_iter().map(SolutionPoint::exact).collect();
    if incomplete {
        let numeric = shape_solutions(&g, nvars, std.len(), cfg)?;
        for s in numeric {
            let dup = sols.iter().any(|e| same_point(e, &s));
            if !dup {
                verify_numeric(gens, &s)?;
                sols.push(s);
            }
        }
    }
    sort_solutions(&mut sols);
    Ok(sols)
}

fn same_point(a: &SolutionPoint, b: &SolutionPoint) -> bool {
    a.approx()
        .iter()
        .zip(b.approx().iter())
        .all(|(x, y)| (x - y).norm() <= 1e-9 * (1.0 + x.norm()))
}

/// Lex-triangular recursion: roots of the univariate element in the smallest
/// free variable, substituted back one branch at a time. Branches through
/// roots outside the tower are abandoned and flagged.
fn triangular(
    gens: Vec<Poly<FieldElement>>,
    assigned: &mut Vec<Option<FieldElement>>,
    cfg: &SolverConfig,
    out: &mut Vec<Vec<FieldElement>>,
    incomplete: &mut bool,
) -> Result<()> {
    let g = groebner_auto(&gens, TermOrder::Lex, cfg)?;
    if is_unit_ideal(&g) {
        return Ok(());
    }
    let Some(v) = assigned.iter().position(|a| a.is_none()) else {
        if g.is_empty() {
            out.push(assigned.iter().map(|a| a.clone().unwrap()).collect());
        }
        return Ok(());
    };
    let Some(u) = g.iter().find(|p| p.univariate_var() == Some(v)) else {
        return Err(Error::NotZeroDimensional(1));
    };
    let coeffs = u.univariate_coeffs(v);
    for r in roots(&coeffs, &cfg.roots)? {
        match r {
            Root::Exact(val) => {
                let next: Vec<Poly<FieldElement>> = g
                    .iter()
                    .map(|p| p.substitute(v, &val))
                    .filter(|p| !p.is_zero())
                    .collect();
                assigned[v] = Some(val);
                triangular(next, assigned, cfg, out, incomplete)?;
                assigned[v] = None;
            }
            Root::Numeric { .. } => *incomplete = true,
        }
    }
    Ok(())
}

/// Adds `k` new smallest variables.
fn shift_vars(p: &Poly<FieldElement>, k: usize) -> Poly<FieldElement> {
    let n = p.nvars() + k;
    let terms = p
        .terms()
        .iter()
        .map(|(m, c)| {
            let mut e: Vec<u16> = vec![0; k];
            e.extend_from_slice(&m.0);
            (Monomial::from_exponents(&e), c.clone())
        })
        .collect();
    Poly::from_terms(n, p.order(), terms)
}

/// Shape-lemma parametrization by a separating linear form `t`: every
/// solution is `x_j = -tail_j(t)` for a root `t` of the univariate element.
fn shape_solutions(
    g: &[Poly<FieldElement>],
    nvars: usize,
    count: usize,
    cfg: &SolverConfig,
) -> Result<Vec<SolutionPoint>> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a11);
    for attempt in 0..12 {
        let coeffs: Vec<i64> = (0..nvars)
            .map(|j| if attempt == 0 { j as i64 + 1 } else { rng.gen_range(-9..=9) })
            .collect();
        let mut sys: Vec<Poly<FieldElement>> = g.iter().map(|p| shift_vars(p, 1)).collect();
        let mut terms = vec![(Monomial::var(nvars + 1, 0), FieldElement::one())];
        for (j, &c) in coeffs.iter().enumerate() {
            terms.push((Monomial::var(nvars + 1, j + 1), FieldElement::from_int(-c)));
        }
        sys.push(Poly::from_terms(nvars + 1, TermOrder::DegRevLex, terms));
        let lex = groebner_auto(&sys, TermOrder::Lex, cfg)?;
        if lex.len() != nvars + 1 {
            continue;
        }
        let Some(h) = lex.iter().find(|p| p.univariate_var() == Some(0)) else {
            continue;
        };
        let hc = h.univariate_coeffs(0);
        if hc.len() != count + 1 {
            continue;
        }
        // x_j - tail_j(t) for every j
        let mut tails: Vec<Option<Vec<FieldElement>>> = vec![None; nvars];
        let mut ok = true;
        for p in lex.iter().filter(|p| !std::ptr::eq(*p, h)) {
            let lm = p.lm();
            let j = lm.support();
            if lm.degree() != 1 || j.count_ones() != 1 || j & 1 == 1 {
                ok = false;
                break;
            }
            let jv = j.trailing_zeros() as usize;
            let rest = Poly::from_terms(p.nvars(), p.order(), p.terms()[1..].to_vec());
            if rest.support() & !1 != 0 {
                ok = false;
                break;
            }
            tails[jv - 1] = Some(rest.univariate_coeffs(0));
        }
        if !ok || tails.iter().any(|t| t.is_none()) {
            continue;
        }
        let mut rs = roots(&hc, &cfg.roots)?;
        sort_roots(&mut rs);
        if rs.len() != count {
            continue;
        }
        let precision = cfg.roots.precision.max(128);
        let mut out = Vec::with_capacity(rs.len());
        for r in rs {
            let mut values = Vec::with_capacity(nvars);
            for tail in tails.iter().map(|t| t.as_ref().unwrap()) {
                values.push(match &r {
                    Root::Exact(t) => Coordinate::Exact(-crate::roots::eval(tail, t)),
                    Root::Numeric { .. } => {
                        let b = r.enclosure(precision);
                        Coordinate::Numeric(neg_box(&eval_box(tail, &b, precision)))
                    }
                });
            }
            out.push(SolutionPoint { values });
        }
        return Ok(out);
    }
    Err(Error::InvariantViolation(
        "no separating linear form found for the numeric fallback (system not radical?)".into(),
    ))
}

fn neg_box(b: &ComplexInterval) -> ComplexInterval {
    ComplexInterval {
        re: b.re.neg(),
        im: b.im.neg(),
    }
}

/// Interval Horner evaluation of a univariate polynomial.
pub fn eval_box(coeffs: &[FieldElement], x: &ComplexInterval, precision: u32) -> ComplexInterval {
    let round = precision + 32;
    let mut acc = ComplexInterval::zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul(x).add(&c.to_complex(precision + 16)).round_out(round);
    }
    acc
}

/// Interval evaluation of a multivariate polynomial at a point of boxes.
pub fn eval_poly_box(p: &Poly<FieldElement>, point: &[ComplexInterval], precision: u32) -> ComplexInterval {
    let round = precision + 32;
    let mut acc = ComplexInterval::zero();
    for (m, c) in p.terms() {
        let mut t = c.to_complex(precision + 16);
        for (i, &e) in m.0.iter().enumerate() {
            for _ in 0..e {
                t = t.mul(&point[i]).round_out(round);
            }
        }
        acc = acc.add(&t);
    }
    acc
}

fn verify_numeric(gens: &[Poly<FieldElement>], s: &SolutionPoint) -> Result<()> {
    let precision = 128;
    let point: Vec<ComplexInterval> = s.values.iter().map(|c| c.enclosure(precision)).collect();
    for g in gens {
        if !eval_poly_box(g, &point, precision).contains_zero() {
            return Err(Error::InvariantViolation(format!(
                "numeric solution does not enclose a root of {g}"
            )));
        }
    }
    Ok(())
}

/// An exact point on a positive-dimensional variety, found by pinning the
/// variables of a maximal independent set (first to small rationals, then to
/// random affine slices) until the augmented system is zero-dimensional and
/// has an exact solution.
pub fn particular_solution_on_slice(
    gens: &[Poly<FieldElement>],
    rng: &mut ChaCha8Rng,
    cfg: &SolverConfig,
) -> Result<SolutionPoint> {
    let Some(nvars) = gens.first().map(|g| g.nvars()) else {
        return Ok(SolutionPoint { values: Vec::new() });
    };
    let g = groebner_auto(gens, TermOrder::DegRevLex, cfg)?;
    if is_unit_ideal(&g) {
        return Err(Error::SliceExhausted { attempts: 0 });
    }
    let h = hilbert_dimension(&g, nvars);
    if h == 0 {
        return solve_zero_dimensional(&g, cfg)?
            .into_iter()
            .find(|s| s.is_exact())
            .ok_or(Error::SliceExhausted { attempts: 0 });
    }
    let free = maximal_independent_set(&g, nvars);
    let pins: [Rational; 10] = [
        rat(0, 1),
        rat(1, 1),
        rat(-1, 1),
        rat(1, 2),
        rat(-1, 2),
        rat(2, 1),
        rat(-2, 1),
        rat(1, 3),
        rat(-1, 3),
        rat(3, 1),
    ];
    let order = TermOrder::DegRevLex;
    for attempt in 0..cfg.slice_attempts {
        let mut slice: Vec<Poly<FieldElement>> = Vec::with_capacity(h);
        if attempt < 2 * pins.len() {
            for (k, &v) in free.iter().enumerate() {
                let val = if attempt < pins.len() {
                    pins[attempt].clone()
                } else {
                    pins[(attempt + k) % pins.len()].clone()
                };
                let terms = vec![
                    (Monomial::var(nvars, v), FieldElement::one()),
                    (Monomial::one(nvars), FieldElement::from_rational(-val)),
                ];
                slice.push(Poly::from_terms(nvars, order, terms));
            }
        } else {
            for _ in 0..h {
                let mut terms: Vec<(Monomial, FieldElement)> = (0..nvars)
                    .map(|j| (Monomial::var(nvars, j), FieldElement::from_int(rng.gen_range(-3..=3))))
                    .collect();
                terms.push((
                    Monomial::one(nvars),
                    FieldElement::from_ratio(rng.gen_range(-4..=4), rng.gen_range(1..=4)),
                ));
                slice.push(Poly::from_terms(nvars, order, terms));
            }
        }
        let mut aug = g.clone();
        aug.extend(slice);
        let ga = groebner_auto(&aug, order, cfg)?;
        if is_unit_ideal(&ga) || hilbert_dimension(&ga, nvars) > 0 {
            continue;
        }
        for s in solve_zero_dimensional(&ga, cfg)? {
            if let Some(vals) = s.exact_values() {
                if gens.iter().all(|p| p.eval(&vals).is_zero()) {
                    return Ok(s);
                }
            }
        }
    }
    Err(Error::SliceExhausted {
        attempts: cfg.slice_attempts,
    })
}
