//! Shared test corpus and brute-force oracles. Everything here works on
//! dense 0-based data and does not call into the library's algorithms.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

pub type Perm = Vec<usize>;

pub fn compose(a: &Perm, b: &Perm) -> Perm {
    // apply a, then b
    a.iter().map(|&x| b[x]).collect()
}

pub fn cycle(n: usize, pts: &[usize]) -> Perm {
    let mut p: Perm = (0..n).collect();
    for w in 0..pts.len() {
        p[pts[w]] = pts[(w + 1) % pts.len()];
    }
    p
}

/// Generator file text for the library parser.
pub fn gens_text(gens: &[Perm]) -> String {
    let n = gens[0].len();
    let mut s = format!("degree {n}\n");
    for g in gens {
        s.push_str("gen");
        for &x in g {
            s.push_str(&format!(" {}", x + 1));
        }
        s.push('\n');
    }
    s
}

/// All group elements by closure; panics past `cap`.
pub fn enumerate(gens: &[Perm], cap: usize) -> Vec<Perm> {
    let n = gens[0].len();
    let id: Perm = (0..n).collect();
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    let mut out = Vec::new();
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = compose(&g, s);
            if seen.insert(h.clone()) {
                assert!(seen.len() <= cap, "group larger than {cap}");
                queue.push_back(h);
            }
        }
        out.push(g);
    }
    out
}

fn action_on<T: Clone + Eq + std::hash::Hash>(gens: &[Perm], start: T, act: impl Fn(&T, &Perm) -> T) -> Vec<Perm> {
    let mut index: HashMap<T, usize> = HashMap::from([(start.clone(), 0)]);
    let mut pts = vec![start];
    let mut i = 0;
    while i < pts.len() {
        for g in gens {
            let y = act(&pts[i], g);
            if !index.contains_key(&y) {
                index.insert(y.clone(), pts.len());
                pts.push(y);
            }
        }
        i += 1;
    }
    gens.iter()
        .map(|g| pts.iter().map(|x| index[&act(x, g)]).collect())
        .collect()
}

/// Action on the orbit of the `k`-subset `{0..k}`.
pub fn on_subsets(gens: &[Perm], k: usize) -> Vec<Perm> {
    action_on(gens, (0..k).collect::<Vec<_>>(), |s, g| {
        let mut t: Vec<usize> = s.iter().map(|&x| g[x]).collect();
        t.sort_unstable();
        t
    })
}

/// Action on the orbit of the ordered pair `(0, 1)`.
pub fn on_ordered_pairs(gens: &[Perm]) -> Vec<Perm> {
    action_on(gens, (0usize, 1usize), |&(a, b), g| (g[a], g[b]))
}

/// Right regular action on the group elements.
pub fn regular(gens: &[Perm]) -> Vec<Perm> {
    let n = gens[0].len();
    action_on(gens, (0..n).collect::<Perm>(), |x, g| compose(x, g))
}

/// `H wr K` in its imprimitive action on `m * t` points (`H` on `m`,
/// `K` on `t` blocks).
pub fn wreath(h: &[Perm], k: &[Perm]) -> Vec<Perm> {
    let m = h[0].len();
    let t = k[0].len();
    let mut gens = Vec::new();
    for g in h {
        let mut p: Perm = (0..m * t).collect();
        for x in 0..m {
            p[x] = g[x];
        }
        gens.push(p);
    }
    for g in k {
        gens.push((0..m * t).map(|x| g[x / m] * m + x % m).collect());
    }
    gens
}

pub struct Case {
    pub name: &'static str,
    pub gens: Vec<Perm>,
    pub order: usize,
}

fn sym(n: usize) -> Vec<Perm> {
    vec![cycle(n, &(0..n).collect::<Vec<_>>()), cycle(n, &[0, 1])]
}

fn alt(n: usize) -> Vec<Perm> {
    (2..n).map(|k| cycle(n, &[0, 1, k])).collect()
}

fn cyclic(n: usize) -> Vec<Perm> {
    vec![cycle(n, &(0..n).collect::<Vec<_>>())]
}

fn dihedral(n: usize) -> Vec<Perm> {
    let refl: Perm = (0..n).map(|i| (n - i) % n).collect();
    vec![cycle(n, &(0..n).collect::<Vec<_>>()), refl]
}

/// PSL(2,7) on the 7 points of the Fano plane.
fn psl27() -> Vec<Perm> {
    vec![cycle(7, &[0, 1, 2, 3, 4, 5, 6]), compose(&cycle(7, &[2, 4]), &cycle(7, &[5, 6]))]
}

/// The corpus of transitive actions used by the property and oracle suites.
pub fn corpus() -> Vec<Case> {
    let c = |name, gens: Vec<Perm>, order| Case { name, gens, order };
    vec![
        c("C5 regular", cyclic(5), 5),
        c("C6 regular", cyclic(6), 6),
        c("C8 regular", cyclic(8), 8),
        c("D4 on 4", dihedral(4), 8),
        c("D5 on 5", dihedral(5), 10),
        c("D6 on 6", dihedral(6), 12),
        c("D8 on 8", dihedral(8), 16),
        c("D4 regular", regular(&dihedral(4)), 8),
        c("S4 on 4", sym(4), 24),
        c("S4 on 2-subsets", on_subsets(&sym(4), 2), 24),
        c("S4 on ordered pairs", on_ordered_pairs(&sym(4)), 24),
        c("A4 on 4", alt(4), 12),
        c("A4 on 2-subsets", on_subsets(&alt(4), 2), 12),
        c("A4 regular", regular(&alt(4)), 12),
        c("A5 on 5", alt(5), 60),
        c("A5 on 2-subsets", on_subsets(&alt(5), 2), 60),
        c("A5 on ordered pairs", on_ordered_pairs(&alt(5)), 60),
        c("A5 on 6", psl25_on_6(), 60),
        c("A5 on 3-subsets of 6", on_subsets(&psl25_on_6(), 3), 60),
        c("S5 on 2-subsets", on_subsets(&sym(5), 2), 120),
        c("S6 on 2-subsets", on_subsets(&sym(6), 2), 720),
        c("PSL(2,7) on 7", psl27(), 168),
        c("PSL(2,7) on 2-subsets", on_subsets(&psl27(), 2), 168),
        c("S2 wr S3", wreath(&sym(2), &sym(3)), 48),
        c("S3 wr S2", wreath(&sym(3), &sym(2)), 72),
        c("C3 wr C2", wreath(&cyclic(3), &cyclic(2)), 18),
        c("S2 wr C4", wreath(&sym(2), &cyclic(4)), 64),
        c("S4 wr C2", wreath(&sym(4), &cyclic(2)), 1152),
    ]
}

/// A5 as PSL(2,5) on the projective line `{0..4, inf}`.
fn psl25_on_6() -> Vec<Perm> {
    // x -> x + 1 and x -> -1/x over F5, with inf = 5
    let t: Perm = vec![1, 2, 3, 4, 0, 5];
    let inv = |x: usize| -> usize {
        match x {
            5 => 0,
            0 => 5,
            x => (5 - [0, 1, 3, 2, 4][x]) % 5,
        }
    };
    let s: Perm = (0..6).map(inv).collect();
    vec![t, s]
}

/// Orbital labels of all pairs, by breadth-first search over pairs.
pub struct PairOrbits {
    pub n: usize,
    pub label: Vec<usize>,
    pub count: usize,
}

impl PairOrbits {
    pub fn new(gens: &[Perm]) -> Self {
        let n = gens[0].len();
        let mut label = vec![usize::MAX; n * n];
        let mut count = 0;
        for start in 0..n * n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = count;
            let mut queue = VecDeque::from([start]);
            while let Some(p) = queue.pop_front() {
                let (x, y) = (p / n, p % n);
                for g in gens {
                    let q = g[x] * n + g[y];
                    if label[q] == usize::MAX {
                        label[q] = count;
                        queue.push_back(q);
                    }
                }
            }
            count += 1;
        }
        PairOrbits { n, label, count }
    }

    pub fn at(&self, x: usize, y: usize) -> usize {
        self.label[x * self.n + y]
    }

    pub fn matrix(&self, r: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |x, y| if self.at(x, y) == r { 1.0 } else { 0.0 })
    }
}

/// Orbits of the stabilizer of point 0, found by enumerating the group.
pub fn stabilizer_orbit_lengths(elements: &[Perm]) -> Vec<usize> {
    let n = elements[0].len();
    let stab: Vec<&Perm> = elements.iter().filter(|g| g[0] == 0).collect();
    let mut seen = vec![false; n];
    let mut lengths = Vec::new();
    for x in 0..n {
        if seen[x] {
            continue;
        }
        let orbit: HashSet<usize> = stab.iter().map(|g| g[x]).collect();
        for &y in &orbit {
            seen[y] = true;
        }
        lengths.push(orbit.len());
    }
    lengths.sort_unstable();
    lengths
}

/// Dimensions of the irreducible constituents, with multiplicity: the
/// eigenvalue multiplicities of a generic Hermitian element of the
/// commutant. On an isotypic component `k` copies of a `d`-dimensional
/// irreducible the element acts as a `k x k` Hermitian matrix tensored with
/// `I_d`, so it contributes `k` eigenvalues of multiplicity `d`.
pub fn commutant_spectrum_dimensions(orbits: &PairOrbits, seed: u64) -> Vec<usize> {
    let n = orbits.n;
    let transpose: Vec<usize> = (0..orbits.count)
        .map(|r| {
            let p = orbits.label.iter().position(|&l| l == r).unwrap();
            orbits.at(p % n, p / n)
        })
        .collect();
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
    };
    let mut a = vec![Complex64::new(0.0, 0.0); orbits.count];
    for r in 0..orbits.count {
        let t = transpose[r];
        if t == r {
            a[r] = Complex64::new(next(), 0.0);
        } else if r < t {
            a[r] = Complex64::new(next(), next());
            a[t] = a[r].conj();
        }
    }
    let h = DMatrix::from_fn(n, n, |x, y| a[orbits.at(x, y)]);
    let eig = SymmetricEigen::new(h);
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|x, y| x.total_cmp(y));
    let mut dims = Vec::new();
    let mut i = 0;
    while i < vals.len() {
        let mut j = i + 1;
        while j < vals.len() && (vals[j] - vals[i]).abs() < 1e-7 {
            j += 1;
        }
        dims.push(j - i);
        i = j;
    }
    dims.sort_unstable();
    dims
}

/// `sum_r b_r A_r` from brute-force orbit labels mapped through `to_brute`.
pub fn dense_projector(orbits: &PairOrbits, to_brute: &[usize], b: &[Complex64]) -> DMatrix<Complex64> {
    let mut by_label = vec![Complex64::new(0.0, 0.0); orbits.count];
    for (r, &l) in to_brute.iter().enumerate() {
        by_label[l] = b[r];
    }
    DMatrix::from_fn(orbits.n, orbits.n, |x, y| by_label[orbits.at(x, y)])
}

/// `<chi, chi>` for the character `g -> tr(P rho(g))`.
pub fn character_norm(p: &DMatrix<Complex64>, elements: &[Perm]) -> f64 {
    let n = p.nrows();
    let total: f64 = elements
        .iter()
        .map(|g| (0..n).map(|i| p[(i, g[i])]).sum::<Complex64>().norm_sqr())
        .sum();
    total / elements.len() as f64
}
