//! Independent checks of a projector family: in the algebra via structure
//! constants, at matrix level against the generators, and against a
//! reference table.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::centralizer::{OrbitalBasis, StructureConstants};
use crate::error::{Error, Result};
use crate::field::{row_reduce, FieldElement};
use crate::perm::GeneratorSet;
use crate::solver::Coordinate;
use crate::splitter::{algebra_product, algebra_product_c64, Decomposition, Projector};

pub const NUMERIC_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_MATRIX_CAP: usize = 2000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn push(&mut self, name: impl Into<String>, witness: Option<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed: witness.is_none(),
            witness,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn first_failure(&self) -> Option<String> {
        self.failures().next().map(|c| c.to_string())
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "PASS {}", self.name),
            Some(w) => write!(f, "FAIL {}: {w}", self.name),
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

fn first_nonzero(v: &[FieldElement]) -> Option<String> {
    v.iter()
        .position(|x| !x.is_zero())
        .map(|r| format!("r={} has {}", r + 1, v[r]))
}

fn first_large(v: &[Complex64], scale: f64) -> Option<String> {
    v.iter()
        .position(|x| x.norm() > NUMERIC_TOLERANCE * (1.0 + scale))
        .map(|r| format!("r={} has {:.3e}", r + 1, v[r]))
}

fn sub_exact(a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn sub_c64(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn scale_of(vs: &[&[Complex64]]) -> f64 {
    vs.iter().flat_map(|v| v.iter()).map(|z| z.norm()).fold(0.0, f64::max)
}

/// Idempotency, pairwise orthogonality, completeness, trace integrality,
/// primitivity and conjugation closure; exact wherever the coefficients are
/// exact.
pub fn verify_family_algebraic(c: &StructureConstants, d: &Decomposition) -> VerificationReport {
    let mut rep = VerificationReport::default();
    let n = c.rank();
    let m = d.projectors.len();
    if d.projectors.iter().any(|p| p.coefficients.len() != n) {
        rep.push("coefficient count", Some(format!("expected {n} coefficients per projector")));
        return rep;
    }
    let exact: Vec<Option<Vec<FieldElement>>> = d.projectors.iter().map(|p| p.exact_coefficients()).collect();
    let approx: Vec<Vec<Complex64>> = d.projectors.iter().map(|p| p.approx()).collect();

    for i in 0..m {
        let w = match &exact[i] {
            Some(b) => first_nonzero(&sub_exact(&algebra_product(c, b, b), b)),
            None => {
                let b = &approx[i];
                first_large(&sub_c64(&algebra_product_c64(c, b, b), b), scale_of(&[b]))
            }
        };
        rep.push(format!("idempotency B{}", i + 1), w);
    }

    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let results: Vec<Option<String>> = pairs
        .par_iter()
        .map(|&(i, j)| match (&exact[i], &exact[j]) {
            (Some(a), Some(b)) => first_nonzero(&algebra_product(c, a, b)),
            _ => first_large(
                &algebra_product_c64(c, &approx[i], &approx[j]),
                scale_of(&[&approx[i], &approx[j]]),
            ),
        })
        .collect();
    for ((i, j), w) in pairs.into_iter().zip(results) {
        rep.push(format!("orthogonality B{} B{}", i + 1, j + 1), w);
    }

    let mut delta_exact = vec![FieldElement::zero(); n];
    delta_exact[0] = FieldElement::one();
    let w = if exact.iter().all(|e| e.is_some()) {
        let mut sum = vec![FieldElement::zero(); n];
        for b in exact.iter().flatten() {
            for (s, x) in sum.iter_mut().zip(b) {
                *s += x;
            }
        }
        first_nonzero(&sub_exact(&sum, &delta_exact))
    } else {
        let mut sum = vec![Complex64::new(0.0, 0.0); n];
        for b in &approx {
            for (s, x) in sum.iter_mut().zip(b) {
                *s += x;
            }
        }
        sum[0] -= 1.0;
        let refs: Vec<&[Complex64]> = approx.iter().map(|v| v.as_slice()).collect();
        first_large(&sum, scale_of(&refs))
    };
    rep.push("completeness sum", w);

    let total: usize = d.projectors.iter().map(|p| p.dimension).sum();
    rep.push(
        "dimension sum",
        (total != d.degree).then(|| format!("dimensions sum to {total}, degree is {}", d.degree)),
    );

    for (i, p) in d.projectors.iter().enumerate() {
        let want = FieldElement::from_ratio(p.dimension as i64, d.degree as i64);
        let w = match &p.coefficients[0] {
            Coordinate::Exact(b1) if *b1 == want && p.dimension > 0 => None,
            Coordinate::Exact(b1) => Some(format!("b_1 = {b1}, expected {want}")),
            Coordinate::Numeric(_) => Some("b_1 is not exact".into()),
        };
        rep.push(format!("trace B{}", i + 1), w);
    }

    for (i, p) in d.projectors.iter().enumerate() {
        let r = match &exact[i] {
            Some(b) => corner_rank_exact(c, b),
            None => corner_rank_c64(c, &approx[i]),
        };
        rep.push(
            format!("primitivity B{}", i + 1),
            (r != 1).then(|| format!("B A B has dimension {r}, projector of dimension {} is reducible", p.dimension)),
        );
    }

    // Projectors inside a multiplicity block are particular choices from a
    // family, so only multiplicity-free ones must come in conjugate pairs.
    let single: Vec<usize> = d
        .blocks
        .iter()
        .filter(|b| b.len() == 1)
        .map(|b| b[0])
        .filter(|&i| i < m)
        .collect();
    let missing = single.iter().copied().find(|&i| {
        let cp = d.projectors[i].conjugate();
        !single.iter().any(|&j| d.projectors[j].same_coefficients(&cp))
    });
    rep.push(
        "conjugation closure",
        missing.map(|i| format!("conjugate of B{} is not in the family", i + 1)),
    );
    rep
}

/// `M[p][r]` with `(X B)_r = sum_p x_p M[p][r]`.
fn right_matrix(c: &StructureConstants, b: &[FieldElement]) -> Vec<Vec<FieldElement>> {
    let n = c.rank();
    (0..n)
        .map(|p| {
            (0..n)
                .map(|r| {
                    let mut s = FieldElement::zero();
                    for (q, bq) in b.iter().enumerate() {
                        let k = c.get(p, q, r);
                        if k != 0 && !bq.is_zero() {
                            s += bq * &FieldElement::from_int(k as i64);
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// Dimension of `B A B`, spanned by `B A_q B` for all `q`; it is `1`
/// exactly when `B` is a primitive idempotent.
pub fn corner_rank_exact(c: &StructureConstants, b: &[FieldElement]) -> usize {
    let n = c.rank();
    let right = right_matrix(c, b);
    let rows: Vec<Vec<FieldElement>> = (0..n)
        .map(|q| {
            let mut e = vec![FieldElement::zero(); n];
            e[q] = FieldElement::one();
            let be = algebra_product(c, b, &e);
            (0..n)
                .map(|r| {
                    let mut s = FieldElement::zero();
                    for (p, x) in be.iter().enumerate() {
                        if !x.is_zero() && !right[p][r].is_zero() {
                            s += x * &right[p][r];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect();
    row_reduce(rows).len()
}

fn corner_rank_c64(c: &StructureConstants, b: &[Complex64]) -> usize {
    let n = c.rank();
    let mut rows: Vec<Vec<Complex64>> = (0..n)
        .map(|q| {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[q] = Complex64::new(1.0, 0.0);
            algebra_product_c64(c, &algebra_product_c64(c, b, &e), b)
        })
        .collect();
    let scale = rows.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    let tol = 1e-8 * (1.0 + scale);
    let mut rank = 0;
    for col in 0..n {
        let Some(piv) = (rank..n).max_by(|&i, &j| rows[i][col].norm().total_cmp(&rows[j][col].norm())) else {
            break;
        };
        if rows[piv][col].norm() <= tol {
            continue;
        }
        rows.swap(rank, piv);
        let p = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            let f = row[col] / p[col];
            for (x, y) in row.iter_mut().zip(&p) {
                *x -= f * y;
            }
        }
        rank += 1;
    }
    rank
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixMode {
    Exact,
    Numeric,
}

/// Orbital label of every pair; row `x` holds `orbital(x, y)` for all `y`.
fn label_matrix(basis: &OrbitalBasis) -> Vec<Vec<u16>> {
    let n = basis.degree();
    (0..n)
        .into_par_iter()
        .map(|x| (0..n).map(|y| basis.orbital(x + 1, y + 1) as u16).collect())
        .collect()
}

/// Materializes every `P_m = sum_r b_r A_r` and checks commutation with each
/// generator, `P_m^2 = P_m` and `tr P_m = d_m`.
pub fn verify_matrix_level(
    gens: &GeneratorSet,
    basis: &OrbitalBasis,
    d: &Decomposition,
    mode: MatrixMode,
    cap: usize,
) -> Result<VerificationReport> {
    let n = basis.degree();
    if n > cap {
        return Err(Error::MatrixCapExceeded { degree: n, cap });
    }
    let rank = basis.rank();
    let labels = label_matrix(basis);
    let mut rep = VerificationReport::default();

    // Each P_m is a combination of the same orbital matrices, so commutation
    // reduces to invariance of the label matrix under every generator.
    for (gi, g) in gens.generators().iter().enumerate() {
        let img: Vec<usize> = (1..=n).map(|x| g.apply(x) - 1).collect();
        let bad = (0..n)
            .into_par_iter()
            .find_map_any(|x| (0..n).find(|&y| labels[img[x]][img[y]] != labels[x][y]).map(|y| (x, y)));
        for (i, p) in d.projectors.iter().enumerate() {
            let w = bad.map(|(x, y)| {
                format!(
                    "entry ({}, {}) is {} but its image is {}",
                    x + 1,
                    y + 1,
                    show(&p.coefficients[labels[x][y] as usize]),
                    show(&p.coefficients[labels[img[x]][img[y]] as usize])
                )
            });
            rep.push(format!("commutation B{} g{}", i + 1, gi + 1), w);
        }
    }

    // Row 0 of P^2 determines the whole matrix once invariance holds:
    // (P^2)[0][y] = sum_pq b_p b_q #{z : l(0,z) = p, l(z,y) = q}.
    let counts: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|y| {
            let mut c = vec![0u32; rank * rank];
            for z in 0..n {
                c[labels[0][z] as usize * rank + labels[z][y] as usize] += 1;
            }
            c
        })
        .collect();

    for (i, p) in d.projectors.iter().enumerate() {
        let exact = if mode == MatrixMode::Exact { p.exact_coefficients() } else { None };
        let w = match (&exact, mode) {
            (Some(b), _) => counts.iter().enumerate().find_map(|(y, cnt)| {
                let mut s = FieldElement::zero();
                for pp in 0..rank {
                    for qq in 0..rank {
                        let k = cnt[pp * rank + qq];
                        if k != 0 {
                            s += &(&b[pp] * &b[qq]) * &FieldElement::from_int(k as i64);
                        }
                    }
                }
                let want = &b[labels[0][y] as usize];
                (s != *want).then(|| format!("(P^2)[1][{}] = {s}, expected {want}", y + 1))
            }),
            (None, MatrixMode::Exact) => Some("projector is not exact".into()),
            (None, MatrixMode::Numeric) => {
                let b = p.approx();
                let scale = scale_of(&[&b]);
                counts.iter().enumerate().find_map(|(y, cnt)| {
                    let mut s = Complex64::new(0.0, 0.0);
                    for pp in 0..rank {
                        for qq in 0..rank {
                            let k = cnt[pp * rank + qq];
                            if k != 0 {
                                s += b[pp] * b[qq] * k as f64;
                            }
                        }
                    }
                    let want = b[labels[0][y] as usize];
                    ((s - want).norm() > NUMERIC_TOLERANCE * (1.0 + scale * n as f64))
                        .then(|| format!("(P^2)[1][{}] = {s:.6}, expected {want:.6}", y + 1))
                })
            }
        };
        rep.push(format!("matrix idempotency B{}", i + 1), w);

        let w = match (&exact, mode) {
            (Some(b), _) => {
                let mut t = FieldElement::zero();
                for (x, row) in labels.iter().enumerate() {
                    t += &b[row[x] as usize];
                }
                (t != FieldElement::from_int(p.dimension as i64)).then(|| format!("trace is {t}"))
            }
            (None, MatrixMode::Exact) => Some("projector is not exact".into()),
            (None, MatrixMode::Numeric) => {
                let b = p.approx();
                let t: Complex64 = labels.iter().enumerate().map(|(x, row)| b[row[x] as usize]).sum();
                ((t - p.dimension as f64).norm() > NUMERIC_TOLERANCE * n as f64)
                    .then(|| format!("trace is {t:.12}"))
            }
        };
        rep.push(format!("matrix trace B{}", i + 1), w);
    }
    Ok(rep)
}

fn show(c: &Coordinate) -> String {
    match c {
        Coordinate::Exact(a) => a.to_string(),
        Coordinate::Numeric(b) => format!("{:.6}", b.to_c64()),
    }
}

/// Matches reference projectors by dimension, then by coefficient equality,
/// allowing reordering within a dimension and one simultaneous complex
/// conjugation of the whole family.
pub fn compare_to_reference(d: &Decomposition, reference: &Decomposition) -> VerificationReport {
    let attempt = |conjugate: bool| -> VerificationReport {
        let mut rep = VerificationReport::default();
        if d.rank != reference.rank {
            rep.push("rank", Some(format!("computed {}, reference {}", d.rank, reference.rank)));
            return rep;
        }
        let ours: Vec<Projector> = d
            .projectors
            .iter()
            .map(|p| if conjugate { p.conjugate() } else { p.clone() })
            .collect();
        let mut used = vec![false; ours.len()];
        for (i, rp) in reference.projectors.iter().enumerate() {
            let hit = (0..ours.len())
                .find(|&j| !used[j] && ours[j].dimension == rp.dimension && ours[j].same_coefficients(rp));
            let w = match hit {
                Some(j) => {
                    used[j] = true;
                    None
                }
                None => Some(mismatch_witness(&ours, &used, rp)),
            };
            rep.push(format!("reference B{} (dimension {})", i + 1, rp.dimension), w);
        }
        let extra = used.iter().filter(|u| !**u).count();
        rep.push(
            "reference covers all projectors",
            (extra > 0).then(|| format!("{extra} computed projectors have no reference entry")),
        );
        rep
    };
    let plain = attempt(false);
    if plain.passed() {
        return plain;
    }
    let conj = attempt(true);
    if conj.passed() {
        conj
    } else {
        plain
    }
}

fn mismatch_witness(ours: &[Projector], used: &[bool], rp: &Projector) -> String {
    let Some(j) = (0..ours.len()).find(|&j| !used[j] && ours[j].dimension == rp.dimension) else {
        return "no computed projector of this dimension".into();
    };
    let r = ours[j]
        .coefficients
        .iter()
        .zip(&rp.coefficients)
        .position(|(a, b)| match (a, b) {
            (Coordinate::Exact(x), Coordinate::Exact(y)) => x != y,
            _ => (a.to_c64() - b.to_c64()).norm() > NUMERIC_TOLERANCE,
        })
        .unwrap_or(0);
    format!(
        "r={}: reference {}, computed {}",
        r + 1,
        rp.coefficients.get(r).map(show).unwrap_or_default(),
        show(&ours[j].coefficients[r])
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_generators;
    use crate::splitter::{split, SplitConfig};

    const PETERSEN: &str = "degree 10\ngen 8 4 6 7 9 10 1 2 3 5\ngen 8 6 7 4 1 9 10 5 2 3";
    const S3: &str = "degree 3\ngen 2 3 1\ngen 2 1 3";
    const C4: &str = "degree 4\ngen 2 3 4 1";

    #[test]
    fn petersen_matrix_level() {
        let gens = parse_generators(PETERSEN).unwrap();
        let out = split(&gens, &SplitConfig::default()).unwrap();
        let rep = verify_matrix_level(&gens, &out.basis, &out.decomposition, MatrixMode::Exact, 2000).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn c4_numeric_traces() {
        let gens = parse_generators(C4).unwrap();
        let out = split(&gens, &SplitConfig::default()).unwrap();
        let rep = verify_matrix_level(&gens, &out.basis, &out.decomposition, MatrixMode::Numeric, 2000).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn tampered_sign_fails_idempotency() {
        let gens = parse_generators(S3).unwrap();
        let out = split(&gens, &SplitConfig::default()).unwrap();
        let mut d = out.decomposition.clone();
        if let Coordinate::Exact(a) = &mut d.projectors[1].coefficients[1] {
            *a = -a.clone();
        }
        let rep = verify_family_algebraic(&out.constants, &d);
        let f = rep.failures().find(|c| c.name == "idempotency B2").unwrap();
        assert!(f.witness.as_ref().unwrap().starts_with("r=2"));
    }

    #[test]
    fn identity_projector_alone() {
        let c = StructureConstants::from_table(1, vec![1]);
        let d = Decomposition {
            degree: 1,
            rank: 1,
            suborbit_lengths: vec![1],
            projectors: vec![Projector::exact(1, vec![FieldElement::one()], crate::splitter::Provenance::UniqueSolution)],
            blocks: vec![vec![0]],
            mixed_dimensions: vec![],
        };
        assert!(verify_family_algebraic(&c, &d).passed());
    }

    #[test]
    fn reducible_idempotent_is_flagged() {
        let gens = parse_generators(PETERSEN).unwrap();
        let out = split(&gens, &SplitConfig::default()).unwrap();
        let mut d = out.decomposition.clone();
        let merged: Vec<FieldElement> = d.projectors[1]
            .exact_coefficients()
            .unwrap()
            .iter()
            .zip(d.projectors[2].exact_coefficients().unwrap())
            .map(|(a, b)| a + &b)
            .collect();
        d.projectors[1] = Projector::exact(9, merged, crate::splitter::Provenance::UniqueSolution);
        d.projectors.truncate(2);
        d.blocks = vec![vec![0], vec![1]];
        let rep = verify_family_algebraic(&out.constants, &d);
        assert_eq!(rep.failures().map(|c| c.name.as_str()).collect::<Vec<_>>(), vec!["primitivity B2"]);
    }

    #[test]
    fn matrix_cap() {
        let gens = parse_generators(PETERSEN).unwrap();
        let out = split(&gens, &SplitConfig::default()).unwrap();
        assert_eq!(
            verify_matrix_level(&gens, &out.basis, &out.decomposition, MatrixMode::Exact, 5),
            Err(Error::MatrixCapExceeded { degree: 10, cap: 5 })
        );
    }

    #[test]
    fn reference_comparison() {
        let out = split(&parse_generators(C4).unwrap(), &SplitConfig::default()).unwrap();
        let d = &out.decomposition;
        assert!(compare_to_reference(d, d).passed());
        let mut conj = d.clone();
        conj.projectors = d.projectors.iter().map(|p| p.conjugate()).collect();
        conj.projectors.reverse();
        assert!(compare_to_reference(d, &conj).passed());
        let mut bad = d.clone();
        bad.projectors[0].coefficients[1] = Coordinate::Exact(FieldElement::from_int(7));
        let rep = compare_to_reference(d, &bad);
        assert!(!rep.passed());
        assert!(rep.first_failure().unwrap().contains("r=2"));
    }
}
