//! Irreducible projectors of the centralizer algebra: the idempotency system,
//! the dimension loop and the multiplicity branch.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::centralizer::{compute_orbitals, compute_structure_constants, CentralizerConfig, OrbitalBasis, StructureConstants};
use crate::error::{Error, Result};
use crate::field::{row_reduce, FieldElement};
use crate::perm::GeneratorSet;
use crate::poly::{hilbert_dimension, is_unit_ideal, multiplication_trace, standard_monomials, Monomial, Poly, TermOrder};
use crate::solver::{groebner_auto, particular_solution_on_slice, solve_zero_dimensional, Coordinate, SolverConfig};
use crate::verify::{verify_family_algebraic, NUMERIC_TOLERANCE};

const ORDER: TermOrder = TermOrder::DegRevLex;

/// `E_r = sum_pq C_pq^r x_p x_q - x_r` plus the accumulated linear
/// orthogonality forms. Variable `r` is `x_{r+1}`.
#[derive(Clone, Debug)]
pub struct IdempotencySystem {
    pub rank: usize,
    pub polynomials: Vec<Poly<FieldElement>>,
    pub orthogonality: Vec<Poly<FieldElement>>,
}

impl IdempotencySystem {
    /// The system at trace `d`: `x_1 = d/N` is added as a linear equation.
    pub fn at_dimension(&self, d: usize, degree: usize) -> Vec<Poly<FieldElement>> {
        let n = self.rank;
        let mut out = self.polynomials.clone();
        out.extend(reduced_linear_forms(&self.orthogonality, n));
        out.push(Poly::from_terms(
            n,
            ORDER,
            vec![
                (Monomial::var(n, 0), FieldElement::one()),
                (Monomial::one(n), FieldElement::from_ratio(-(d as i64), degree as i64)),
            ],
        ));
        out
    }
}

pub fn build_idempotency_system(c: &StructureConstants) -> IdempotencySystem {
    let n = c.rank();
    let polynomials = (0..n)
        .map(|r| {
            let mut terms = Vec::new();
            for p in 0..n {
                for q in 0..n {
                    let k = c.get(p, q, r);
                    if k != 0 {
                        terms.push((Monomial::var(n, p).mul(&Monomial::var(n, q)), FieldElement::from_int(k as i64)));
                    }
                }
            }
            terms.push((Monomial::var(n, r), FieldElement::from_int(-1)));
            Poly::from_terms(n, ORDER, terms)
        })
        .collect();
    IdempotencySystem {
        rank: n,
        polynomials,
        orthogonality: Vec::new(),
    }
}

/// Homogeneous linear forms with the same span as `forms`, with rational
/// coefficients whenever that span is stable under sign changes of the
/// radicals (as for a Galois-closed set of projectors). Keeping the system
/// rational lets the modular engine handle it.
pub fn reduced_linear_forms(forms: &[Poly<FieldElement>], n: usize) -> Vec<Poly<FieldElement>> {
    if forms.is_empty() {
        return Vec::new();
    }
    let rows: Vec<Vec<FieldElement>> = forms
        .iter()
        .map(|f| {
            let mut v = vec![FieldElement::zero(); n];
            for (m, c) in f.terms() {
                let q = m.0.iter().position(|&e| e == 1).expect("homogeneous linear form");
                v[q] = c.clone();
            }
            v
        })
        .collect();
    let over_k = row_reduce(rows.clone());
    let basis = if over_k.iter().flatten().all(|x| x.is_rational()) {
        over_k
    } else {
        let parts: Vec<Vec<FieldElement>> = rows
            .iter()
            .flat_map(|row| {
                let mut rads: Vec<i64> = row.iter().flat_map(|x| x.radicands()).collect();
                rads.sort_unstable();
                rads.dedup();
                rads.into_iter()
                    .map(|r| row.iter().map(|x| FieldElement::from_rational(x.coefficient(r))).collect())
                    .collect::<Vec<_>>()
            })
            .collect();
        let over_q = row_reduce(parts);
        if over_q.len() == over_k.len() {
            over_q
        } else {
            over_k
        }
    };
    basis.into_iter().map(|v| linear_form(n, v)).collect()
}

fn linear_form(n: usize, coeffs: Vec<FieldElement>) -> Poly<FieldElement> {
    let terms = coeffs
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(q, c)| (Monomial::var(n, q), c))
        .collect();
    Poly::from_terms(n, ORDER, terms)
}

/// `L_r(x) = sum_q (sum_p b_p C_pq^r) x_q`: the coefficients of `B X`.
pub fn build_orthogonality_system(c: &StructureConstants, b: &[FieldElement]) -> Vec<Poly<FieldElement>> {
    let n = c.rank();
    (0..n)
        .map(|r| {
            let coeffs = (0..n)
                .map(|q| {
                    let mut s = FieldElement::zero();
                    for (p, bp) in b.iter().enumerate() {
                        let k = c.get(p, q, r);
                        if k != 0 && !bp.is_zero() {
                            s += bp * &FieldElement::from_int(k as i64);
                        }
                    }
                    s
                })
                .collect();
            linear_form(n, coeffs)
        })
        .filter(|p| !p.is_zero())
        .collect()
}

/// The coefficients of `X B`.
pub fn build_right_orthogonality_system(c: &StructureConstants, b: &[FieldElement]) -> Vec<Poly<FieldElement>> {
    let n = c.rank();
    (0..n)
        .map(|r| {
            let coeffs = (0..n)
                .map(|p| {
                    let mut s = FieldElement::zero();
                    for (q, bq) in b.iter().enumerate() {
                        let k = c.get(p, q, r);
                        if k != 0 && !bq.is_zero() {
                            s += bq * &FieldElement::from_int(k as i64);
                        }
                    }
                    s
                })
                .collect();
            linear_form(n, coeffs)
        })
        .filter(|p| !p.is_zero())
        .collect()
}

/// Product in the algebra: `(a b)_r = sum_pq a_p b_q C_pq^r`.
pub fn algebra_product(c: &StructureConstants, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let n = c.rank();
    let mut out = vec![FieldElement::zero(); n];
    for (p, ap) in a.iter().enumerate() {
        if ap.is_zero() {
            continue;
        }
        for (q, bq) in b.iter().enumerate() {
            if bq.is_zero() {
                continue;
            }
            let ab = ap * bq;
            for (r, o) in out.iter_mut().enumerate() {
                let k = c.get(p, q, r);
                if k != 0 {
                    *o += &ab * &FieldElement::from_int(k as i64);
                }
            }
        }
    }
    out
}

pub fn algebra_product_c64(c: &StructureConstants, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = c.rank();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (p, ap) in a.iter().enumerate() {
        for (q, bq) in b.iter().enumerate() {
            let ab = ap * bq;
            for (r, o) in out.iter_mut().enumerate() {
                let k = c.get(p, q, r);
                if k != 0 {
                    *o += ab * k as f64;
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    UniqueSolution,
    SlicedSolution,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Projector {
    pub dimension: usize,
    /// `b_1..b_R` in basis order.
    pub coefficients: Vec<Coordinate>,
    pub provenance: Provenance,
}

impl Projector {
    pub fn exact(dimension: usize, coefficients: Vec<FieldElement>, provenance: Provenance) -> Self {
        Projector {
            dimension,
            coefficients: coefficients.into_iter().map(Coordinate::Exact).collect(),
            provenance,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.coefficients.iter().all(|c| matches!(c, Coordinate::Exact(_)))
    }

    pub fn exact_coefficients(&self) -> Option<Vec<FieldElement>> {
        self.coefficients
            .iter()
            .map(|c| match c {
                Coordinate::Exact(a) => Some(a.clone()),
                Coordinate::Numeric(_) => None,
            })
            .collect()
    }

    pub fn approx(&self) -> Vec<Complex64> {
        self.coefficients.iter().map(|c| c.to_c64()).collect()
    }

    /// Coefficient-wise complex conjugate.
    pub fn conjugate(&self) -> Projector {
        Projector {
            dimension: self.dimension,
            coefficients: self
                .coefficients
                .iter()
                .map(|c| match c {
                    Coordinate::Exact(a) => Coordinate::Exact(a.conj()),
                    Coordinate::Numeric(b) => Coordinate::Numeric(crate::numeric::ComplexInterval {
                        re: b.re.clone(),
                        im: b.im.neg(),
                    }),
                })
                .collect(),
            provenance: self.provenance,
        }
    }

    /// Equality of coefficient vectors, exact where both sides are exact.
    pub fn same_coefficients(&self, other: &Projector) -> bool {
        if self.coefficients.len() != other.coefficients.len() {
            return false;
        }
        self.coefficients.iter().zip(&other.coefficients).all(|(a, b)| match (a, b) {
            (Coordinate::Exact(x), Coordinate::Exact(y)) => x == y,
            _ => {
                let (x, y) = (a.to_c64(), b.to_c64());
                (x - y).norm() <= NUMERIC_TOLERANCE * (1.0 + x.norm().max(y.norm()))
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub degree: usize,
    pub rank: usize,
    pub suborbit_lengths: Vec<usize>,
    pub projectors: Vec<Projector>,
    /// Isotypic classes as indices into `projectors`; a class of size `k`
    /// is one irreducible with multiplicity `k`.
    pub blocks: Vec<Vec<usize>>,
    /// Dimensions whose system mixed a positive-dimensional component with
    /// further components of the same dimension.
    pub mixed_dimensions: Vec<usize>,
}

impl Decomposition {
    pub fn dimensions(&self) -> Vec<usize> {
        self.projectors.iter().map(|p| p.dimension).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.projectors.iter().map(|p| p.dimension).sum::<usize>() == self.degree
    }

    pub fn is_exact(&self) -> bool {
        self.projectors.iter().all(|p| p.is_exact())
    }

    /// Index of the conjugate partner of each projector, if it is a
    /// different projector of the family.
    pub fn conjugate_partners(&self) -> Vec<Option<usize>> {
        let conj: Vec<Projector> = self.projectors.iter().map(|p| p.conjugate()).collect();
        (0..self.projectors.len())
            .map(|i| {
                if conj[i].same_coefficients(&self.projectors[i]) {
                    return None;
                }
                (0..self.projectors.len()).find(|&j| j != i && conj[i].same_coefficients(&self.projectors[j]))
            })
            .collect()
    }
}

/// What happened at one trace value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionStep {
    pub dimension: usize,
    /// `None` when the system was inconsistent.
    pub hilbert_dimension: Option<usize>,
    pub solutions: usize,
}

#[derive(Clone, Debug)]
pub struct SplitConfig {
    pub centralizer: CentralizerConfig,
    pub solver: SolverConfig,
    pub max_dimension: Option<usize>,
    pub seed: u64,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig {
            centralizer: CentralizerConfig::default(),
            solver: SolverConfig::default(),
            max_dimension: None,
            seed: 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SplitOutcome {
    pub basis: OrbitalBasis,
    pub constants: StructureConstants,
    pub decomposition: Decomposition,
    pub steps: Vec<DimensionStep>,
}

/// Accepted projectors plus the accumulated system.
pub struct SplitState<'a> {
    pub constants: &'a StructureConstants,
    pub degree: usize,
    pub system: IdempotencySystem,
    pub projectors: Vec<Projector>,
    /// Hilbert dimension seen when each sliced projector was taken.
    slice_hilbert: Vec<Option<usize>>,
}

impl<'a> SplitState<'a> {
    pub fn new(constants: &'a StructureConstants, degree: usize) -> Self {
        SplitState {
            constants,
            degree,
            system: build_idempotency_system(constants),
            projectors: Vec::new(),
            slice_hilbert: Vec::new(),
        }
    }

    pub fn found(&self) -> usize {
        self.projectors.iter().map(|p| p.dimension).sum()
    }

    fn check_candidate(&self, b: &Projector) -> Result<()> {
        let c = self.constants;
        let index = self.projectors.len() + 1;
        match b.exact_coefficients() {
            Some(bx) => {
                let want = FieldElement::from_ratio(b.dimension as i64, self.degree as i64);
                if bx[0] != want {
                    return Err(Error::InvariantViolation(format!(
                        "projector {index} has b_1 = {}, expected {want}",
                        bx[0]
                    )));
                }
                if algebra_product(c, &bx, &bx) != bx {
                    return Err(Error::InvariantViolation(format!("projector {index} is not idempotent")));
                }
            }
            None => {
                let bv = b.approx();
                let sq = algebra_product_c64(c, &bv, &bv);
                if !close(&sq, &bv) {
                    return Err(Error::InvariantViolation(format!(
                        "numeric projector {index} is not idempotent within tolerance"
                    )));
                }
            }
        }
        for (j, a) in self.projectors.iter().enumerate() {
            if !orthogonal(c, a, b) {
                return Err(Error::OrthogonalityViolation {
                    candidate: index,
                    accepted: j + 1,
                });
            }
        }
        Ok(())
    }

    /// Accepts `b`, injecting both one-sided orthogonality conditions.
    pub fn process_single_solution(&mut self, b: Projector) -> Result<()> {
        self.check_candidate(&b)?;
        if let Some(bx) = b.exact_coefficients() {
            self.inject(&bx);
        }
        self.slice_hilbert.push(None);
        self.projectors.push(b);
        Ok(())
    }

    fn inject(&mut self, b: &[FieldElement]) {
        let c = self.constants;
        let mut forms = build_orthogonality_system(c, b);
        forms.extend(build_right_orthogonality_system(c, b));
        for f in forms {
            if !self.system.orthogonality.contains(&f) {
                self.system.orthogonality.push(f);
            }
        }
    }
}

fn close(a: &[Complex64], b: &[Complex64]) -> bool {
    let scale = 1.0 + a.iter().chain(b).map(|z| z.norm()).fold(0.0, f64::max);
    a.iter().zip(b).all(|(x, y)| (x - y).norm() <= NUMERIC_TOLERANCE * scale)
}

fn is_zero_vec(a: &[Complex64], scale: f64) -> bool {
    a.iter().all(|x| x.norm() <= NUMERIC_TOLERANCE * (1.0 + scale))
}

/// `A B = 0` and `B A = 0`, exactly when both are exact.
pub fn orthogonal(c: &StructureConstants, a: &Projector, b: &Projector) -> bool {
    match (a.exact_coefficients(), b.exact_coefficients()) {
        (Some(x), Some(y)) => {
            algebra_product(c, &x, &y).iter().all(|v| v.is_zero())
                && algebra_product(c, &y, &x).iter().all(|v| v.is_zero())
        }
        _ => {
            let (x, y) = (a.approx(), b.approx());
            let s = x.iter().chain(&y).map(|z| z.norm()).fold(0.0, f64::max);
            is_zero_vec(&algebra_product_c64(c, &x, &y), s) && is_zero_vec(&algebra_product_c64(c, &y, &x), s)
        }
    }
}

/// `A ~ B` iff `A X B != 0` for some basis element `X`.
fn linked(c: &StructureConstants, a: &Projector, b: &Projector) -> bool {
    let n = c.rank();
    match (a.exact_coefficients(), b.exact_coefficients()) {
        (Some(x), Some(y)) => (0..n).any(|q| {
            let mut e = vec![FieldElement::zero(); n];
            e[q] = FieldElement::one();
            let xe = algebra_product(c, &x, &e);
            algebra_product(c, &xe, &y).iter().any(|v| !v.is_zero())
        }),
        _ => {
            let (x, y) = (a.approx(), b.approx());
            let s = x.iter().chain(&y).map(|z| z.norm()).fold(0.0, f64::max);
            (0..n).any(|q| {
                let mut e = vec![Complex64::new(0.0, 0.0); n];
                e[q] = Complex64::new(1.0, 0.0);
                let xe = algebra_product_c64(c, &x, &e);
                !is_zero_vec(&algebra_product_c64(c, &xe, &y), s * (1.0 + n as f64))
            })
        }
    }
}

/// Isotypic classes of an orthogonal family of primitive idempotents.
pub fn isotypic_blocks(c: &StructureConstants, projectors: &[Projector]) -> Vec<Vec<usize>> {
    let m = projectors.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for i in 0..m {
        for j in i + 1..m {
            if projectors[i].dimension == projectors[j].dimension && linked(c, &projectors[i], &projectors[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; m];
    for i in 0..m {
        let r = find(&mut parent, i);
        match root_of[r] {
            Some(b) => blocks[b].push(i),
            None => {
                root_of[r] = Some(blocks.len());
                blocks.push(vec![i]);
            }
        }
    }
    blocks
}

fn exact_solution_vector(point: &[Coordinate]) -> Option<Vec<FieldElement>> {
    point
        .iter()
        .map(|c| match c {
            Coordinate::Exact(a) => Some(a.clone()),
            Coordinate::Numeric(_) => None,
        })
        .collect()
}

/// Runs the dimension loop on precomputed structure constants.
pub fn split_constants(
    constants: &StructureConstants,
    degree: usize,
    config: &SplitConfig,
) -> Result<(Vec<Projector>, Vec<Vec<usize>>, Vec<usize>, Vec<DimensionStep>)> {
    let n = constants.rank();
    let mut state = SplitState::new(constants, degree);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let max_d = config.max_dimension.unwrap_or(degree).min(degree);
    let mut steps = Vec::new();
    let mut d = 1;
    while state.found() < degree {
        if d > max_d || state.found() + d > degree {
            return Err(Error::IncompleteDecomposition {
                found: state.found(),
                degree,
            });
        }
        let g = groebner_auto(&state.system.at_dimension(d, degree), ORDER, &config.solver)?;
        if is_unit_ideal(&g) {
            steps.push(DimensionStep {
                dimension: d,
                hilbert_dimension: None,
                solutions: 0,
            });
            d += 1;
            continue;
        }
        let h = hilbert_dimension(&g, n);
        if h == 0 {
            let sols = solve_zero_dimensional(&g, &config.solver)?;
            steps.push(DimensionStep {
                dimension: d,
                hilbert_dimension: Some(0),
                solutions: sols.len(),
            });
            let mut numeric_sum: Option<Vec<FieldElement>> = None;
            if sols.iter().any(|s| !s.is_exact()) {
                // exact sum of the numeric points: traces minus the exact ones
                let std = standard_monomials(&g, n, config.solver.max_standard_monomials)
                    .ok_or_else(|| Error::ResourceLimit("too many standard monomials".into()))?;
                if std.len() != sols.len() {
                    return Err(Error::InvariantViolation(format!(
                        "system at dimension {d} is not radical: {} solutions, {} standard monomials",
                        sols.len(),
                        std.len()
                    )));
                }
                let mut sum: Vec<FieldElement> = (0..n).map(|j| multiplication_trace(&g, &std, j)).collect();
                for s in sols.iter().filter(|s| s.is_exact()) {
                    for (t, v) in sum.iter_mut().zip(exact_solution_vector(&s.values).unwrap()) {
                        *t -= &v;
                    }
                }
                numeric_sum = Some(sum);
            }
            for s in sols {
                let mut coefficients = s.values;
                coefficients[0] = Coordinate::Exact(FieldElement::from_ratio(d as i64, degree as i64));
                let p = Projector {
                    dimension: d,
                    coefficients,
                    provenance: Provenance::UniqueSolution,
                };
                state.process_single_solution(p)?;
            }
            if let Some(sum) = numeric_sum {
                state.inject(&sum);
            }
        } else {
            if h % 2 == 1 {
                return Err(Error::MultiplicityMismatch { dimension: d, hilbert: h });
            }
            steps.push(DimensionStep {
                dimension: d,
                hilbert_dimension: Some(h),
                solutions: 1,
            });
            let s = particular_solution_on_slice(&g, &mut rng, &config.solver)?;
            let p = Projector {
                dimension: d,
                coefficients: s.values,
                provenance: Provenance::SlicedSolution,
            };
            state.process_single_solution(p)?;
            *state.slice_hilbert.last_mut().unwrap() = Some(h);
        }
    }
    let blocks = isotypic_blocks(constants, &state.projectors);
    let mixed = check_multiplicities(&state, &blocks)?;
    // members of one isotypic class become adjacent
    let mut slots: Vec<Option<Projector>> = state.projectors.into_iter().map(Some).collect();
    let mut projectors = Vec::with_capacity(slots.len());
    let mut grouped = Vec::with_capacity(blocks.len());
    for b in &blocks {
        let start = projectors.len();
        projectors.extend(b.iter().map(|&i| slots[i].take().expect("projector in one block")));
        grouped.push((start..projectors.len()).collect());
    }
    Ok((projectors, grouped, mixed, steps))
}

/// A class of multiplicity `m` spans a family of dimension `2(m - 1)`; the
/// first slice into it must have seen exactly that, unless other classes of
/// the same dimension shared the system.
fn check_multiplicities(state: &SplitState, blocks: &[Vec<usize>]) -> Result<Vec<usize>> {
    let mut mixed = Vec::new();
    for block in blocks {
        let d = state.projectors[block[0]].dimension;
        let m = block.len();
        let h = block.iter().filter_map(|&i| state.slice_hilbert[i]).max().unwrap_or(0);
        let k = h / 2 + 1;
        let shared = blocks.iter().filter(|b| state.projectors[b[0]].dimension == d).count() > 1;
        if m % k == 0 && (k == m || !shared) {
            continue;
        }
        if shared && 2 * (m - 1) <= h {
            if !mixed.contains(&d) {
                mixed.push(d);
            }
            continue;
        }
        return Err(Error::MultiplicityMismatch { dimension: d, hilbert: h });
    }
    mixed.sort_unstable();
    Ok(mixed)
}

/// Full pipeline: orbitals, structure constants, dimension loop, and the
/// algebraic certificate of the resulting family.
pub fn split(gens: &GeneratorSet, config: &SplitConfig) -> Result<SplitOutcome> {
    let basis = compute_orbitals(gens, &config.centralizer)?;
    let constants = compute_structure_constants(&basis)?;
    constants.check_invariants(basis.suborbit_lengths(), basis.transposes())?;
    split_basis(basis, constants, config)
}

/// The splitting stage alone, for an already analyzed action.
pub fn split_basis(basis: OrbitalBasis, constants: StructureConstants, config: &SplitConfig) -> Result<SplitOutcome> {
    let (projectors, blocks, mixed_dimensions, steps) = split_constants(&constants, basis.degree(), config)?;
    let decomposition = Decomposition {
        degree: basis.degree(),
        rank: basis.rank(),
        suborbit_lengths: basis.suborbit_lengths().to_vec(),
        projectors,
        blocks,
        mixed_dimensions,
    };
    let report = verify_family_algebraic(&constants, &decomposition);
    if !report.passed() {
        return Err(Error::InvariantViolation(format!(
            "decomposition failed verification: {}",
            report.first_failure().unwrap_or_default()
        )));
    }
    Ok(SplitOutcome {
        basis,
        constants,
        decomposition,
        steps,
    })
}
