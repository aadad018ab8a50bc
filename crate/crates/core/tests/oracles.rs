//! Library results against brute-force oracles on the shared corpus.

mod common;

use nalgebra::DMatrix;
use num_complex::Complex64;

use common::{Case, PairOrbits};
use permsplit::centralizer::{compute_orbitals, compute_structure_constants, CentralizerConfig, OrbitalBasis};
use permsplit::perm::{parse_generators, GeneratorSet};
use permsplit::splitter::{split, SplitConfig, SplitOutcome};
use permsplit::verify::{verify_family_algebraic, verify_matrix_level, MatrixMode};

fn generators(case: &Case) -> GeneratorSet {
    parse_generators(&common::gens_text(&case.gens)).unwrap()
}

fn split_case(case: &Case) -> SplitOutcome {
    split(&generators(case), &SplitConfig::default()).unwrap_or_else(|e| panic!("{}: {e}", case.name))
}

/// Library orbital index -> brute-force label, checking that the two
/// partitions of all pairs agree.
fn label_map(case: &Case, basis: &OrbitalBasis, orbits: &PairOrbits) -> Vec<usize> {
    let n = orbits.n;
    let mut map = vec![usize::MAX; basis.rank()];
    let mut back = vec![usize::MAX; orbits.count];
    for x in 0..n {
        for y in 0..n {
            let r = basis.orbital(x + 1, y + 1);
            let l = orbits.at(x, y);
            if map[r] == usize::MAX {
                map[r] = l;
            }
            if back[l] == usize::MAX {
                back[l] = r;
            }
            assert_eq!(map[r], l, "{}: orbital {r} splits", case.name);
            assert_eq!(back[l], r, "{}: brute-force orbit {l} splits", case.name);
        }
    }
    map
}

#[test]
fn corpus_is_large_enough_and_groups_have_the_stated_order() {
    let corpus = common::corpus();
    assert!(corpus.len() >= 20);
    for case in &corpus {
        assert!(case.order <= 5000);
        assert_eq!(common::enumerate(&case.gens, 5000).len(), case.order, "{}", case.name);
    }
}

#[test]
fn orbitals_match_pair_orbits() {
    for case in common::corpus() {
        let basis = compute_orbitals(&generators(&case), &CentralizerConfig::default()).unwrap();
        let orbits = PairOrbits::new(&case.gens);
        assert_eq!(basis.rank(), orbits.count, "{}", case.name);
        let map = label_map(&case, &basis, &orbits);
        // the identity orbital comes first
        assert_eq!(map[0], orbits.at(0, 0), "{}", case.name);
        for r in 0..basis.rank() {
            let t = basis.transpose_of(r);
            let p = orbits.label.iter().position(|&l| l == map[r]).unwrap();
            assert_eq!(orbits.at(p % orbits.n, p / orbits.n), map[t], "{}: transpose of {r}", case.name);
        }
    }
}

#[test]
fn suborbit_lengths_match_stabilizer_orbits() {
    for case in common::corpus() {
        let basis = compute_orbitals(&generators(&case), &CentralizerConfig::default()).unwrap();
        let mut lengths = basis.suborbit_lengths().to_vec();
        lengths.sort_unstable();
        let elements = common::enumerate(&case.gens, 5000);
        assert_eq!(lengths, common::stabilizer_orbit_lengths(&elements), "{}", case.name);
    }
}

#[test]
fn structure_constants_match_dense_products() {
    for case in common::corpus() {
        let basis = compute_orbitals(&generators(&case), &CentralizerConfig::default()).unwrap();
        let c = compute_structure_constants(&basis).unwrap();
        let orbits = PairOrbits::new(&case.gens);
        let map = label_map(&case, &basis, &orbits);
        let rank = basis.rank();
        let mats: Vec<DMatrix<f64>> = (0..rank).map(|r| orbits.matrix(map[r])).collect();
        for p in 0..rank {
            for q in 0..rank {
                let prod = &mats[p] * &mats[q];
                let mut expect = DMatrix::zeros(orbits.n, orbits.n);
                for r in 0..rank {
                    expect += &mats[r] * c.get(p, q, r) as f64;
                }
                assert_eq!(prod, expect, "{}: A{} A{}", case.name, p + 1, q + 1);
            }
        }
        c.check_invariants(basis.suborbit_lengths(), basis.transposes()).unwrap();
    }
}

#[test]
fn dimensions_match_commutant_spectrum() {
    for case in common::corpus() {
        let out = split_case(&case);
        let orbits = PairOrbits::new(&case.gens);
        let mut dims = out.decomposition.dimensions();
        dims.sort_unstable();
        assert_eq!(dims, common::commutant_spectrum_dimensions(&orbits, 7), "{}", case.name);
        assert_eq!(dims.iter().sum::<usize>(), orbits.n, "{}", case.name);
    }
}

#[test]
fn multiplicity_free_exactly_when_commutative() {
    for case in common::corpus() {
        let out = split_case(&case);
        let free = out.decomposition.blocks.iter().all(|b| b.len() == 1);
        assert_eq!(free, out.constants.is_commutative(), "{}", case.name);
    }
}

fn assert_close(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>, what: &str) {
    let diff = (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!(diff < 1e-9, "{what}: off by {diff}");
}

#[test]
fn dense_projectors_are_a_complete_family_of_irreducibles() {
    for case in common::corpus() {
        let out = split_case(&case);
        let orbits = PairOrbits::new(&case.gens);
        let map = label_map(&case, &out.basis, &orbits);
        let elements = common::enumerate(&case.gens, 5000);
        let n = orbits.n;
        let ps: Vec<DMatrix<Complex64>> = out
            .decomposition
            .projectors
            .iter()
            .map(|p| common::dense_projector(&orbits, &map, &p.approx()))
            .collect();
        let mut total = DMatrix::zeros(n, n);
        for (i, (p, proj)) in ps.iter().zip(&out.decomposition.projectors).enumerate() {
            let name = format!("{} B{}", case.name, i + 1);
            assert_close(&(p * p), p, &format!("{name} idempotent"));
            let tr: Complex64 = p.trace();
            assert!((tr - Complex64::new(proj.dimension as f64, 0.0)).norm() < 1e-9, "{name} trace {tr}");
            for g in &case.gens {
                let m = DMatrix::from_fn(n, n, |x, y| Complex64::new(if g[y] == x { 1.0 } else { 0.0 }, 0.0));
                assert_close(&(p * &m), &(&m * p), &format!("{name} commutes"));
            }
            for (j, q) in ps.iter().enumerate() {
                if j != i {
                    assert_close(&(p * q), &DMatrix::zeros(n, n), &format!("{name} B{} orthogonal", j + 1));
                }
            }
            let norm = common::character_norm(p, &elements);
            assert!((norm - 1.0).abs() < 1e-9, "{name} character norm {norm}");
            total += p;
        }
        assert_close(&total, &DMatrix::identity(n, n), &format!("{} completeness", case.name));
    }
}

#[test]
fn algebraic_and_matrix_verification_agree() {
    for case in common::corpus() {
        let out = split_case(&case);
        let d = &out.decomposition;
        let alg = verify_family_algebraic(&out.constants, d);
        assert!(alg.passed(), "{}: {:?}", case.name, alg.first_failure());
        let mode = if d.is_exact() { MatrixMode::Exact } else { MatrixMode::Numeric };
        let mat = verify_matrix_level(&generators(&case), &out.basis, d, mode, 200).unwrap();
        assert!(mat.passed(), "{}: {:?}", case.name, mat.first_failure());
    }
}
