//! Orbitals of a transitive action, the ordered basis of its centralizer
//! algebra, and the integer structure constants of that basis.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{stabilizer_orbit_labels, tree_for, Action, GeneratorSet, SchreierTree, SuborbitStrategy};

#[derive(Clone, Debug)]
pub struct CentralizerConfig {
    pub rank_cap: usize,
    /// Degrees up to this use every Schreier generator; larger degrees sample
    /// random stabilizer elements.
    pub exact_suborbit_limit: usize,
    pub seed: u64,
    pub confirmations: usize,
}

impl Default for CentralizerConfig {
    fn default() -> Self {
        CentralizerConfig {
            rank_cap: 64,
            exact_suborbit_limit: 2500,
            seed: 0x5eed,
            confirmations: 40,
        }
    }
}

/// Orbital basis `A_1..A_R` in report order (0-based indices internally).
#[derive(Clone, Debug)]
pub struct OrbitalBasis {
    degree: usize,
    /// 0-based point `j` -> index of the orbital containing `(1, j)`.
    orbital_of_point: Vec<u32>,
    lengths: Vec<usize>,
    /// 1-based minimal `j` with `(j, 1)` in the orbital.
    representatives: Vec<usize>,
    transpose: Vec<usize>,
    action: Action,
    tree: SchreierTree,
}

impl OrbitalBasis {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.lengths.len()
    }

    pub fn suborbit_lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    /// 0-based index of the transposed orbital.
    pub fn transpose_of(&self, r: usize) -> usize {
        self.transpose[r]
    }

    pub fn transposes(&self) -> &[usize] {
        &self.transpose
    }

    pub fn is_symmetric(&self, r: usize) -> bool {
        self.transpose[r] == r
    }

    /// Orbital index (0-based) of the pair `(1, j)`, `j` 1-based.
    pub fn suborbit_index_of_point(&self, j: usize) -> usize {
        self.orbital_of_point[j - 1] as usize
    }

    /// `|Delta_r| = N * n_r`.
    pub fn orbital_size(&self, r: usize) -> usize {
        self.degree * self.lengths[r]
    }

    /// Orbital index of an arbitrary pair of 1-based points, in O(tree depth).
    pub fn orbital(&self, x: usize, y: usize) -> usize {
        self.orbital0(x - 1, y - 1)
    }

    pub(crate) fn orbital0(&self, x: usize, y: usize) -> usize {
        let z = self.tree.pull_back0(&self.action, x, y);
        self.orbital_of_point[z] as usize
    }

    /// Row `x` (1-based) of `A_r`: the points `y` with `(x, y)` in orbital `r`,
    /// grouped by orbital. Entry `k` of the result lists row `x` of `A_k`.
    pub fn row_supports(&self, x: usize) -> Vec<Vec<usize>> {
        let mut rows = vec![Vec::new(); self.rank()];
        let x0 = x - 1;
        let u = self.tree.transversal0(&self.action, x0);
        // y^(u_x^-1) = z  <=>  y = z^(u_x)
        for (z, &y) in u.raw().iter().enumerate() {
            rows[self.orbital_of_point[z] as usize].push(y as usize + 1);
        }
        for r in rows.iter_mut() {
            r.sort_unstable();
        }
        rows
    }

    pub fn is_multiplicity_free_candidate(&self) -> bool {
        // symmetric bases force commutativity; otherwise it must be checked
        (0..self.rank()).all(|r| self.is_symmetric(r))
    }
}

/// Computes the orbital basis in report order:
/// identity, symmetric orbitals by `i_X`, then transpose pairs with the
/// smaller `i_X` leading, pairs ordered by their leader.
pub fn compute_orbitals(gens: &GeneratorSet, config: &CentralizerConfig) -> Result<OrbitalBasis> {
    let n = gens.degree();
    let action = Action::new(gens);
    let tree = tree_for(&action, n, 1);
    if tree.orbit_len() != n {
        return Err(Error::IntransitiveAction {
            orbit_size: tree.orbit_len(),
            degree: n,
        });
    }
    let strategy = if n <= config.exact_suborbit_limit {
        SuborbitStrategy::Exact
    } else {
        SuborbitStrategy::Random {
            seed: config.seed,
            confirmations: config.confirmations,
        }
    };
    let labels = stabilizer_orbit_labels(&action, &tree, strategy);
    let count = labels.iter().map(|&l| l as usize + 1).max().unwrap_or(1);
    if count > config.rank_cap {
        return Err(Error::RankCapExceeded {
            rank: count,
            cap: config.rank_cap,
        });
    }
    let mut min_point = vec![usize::MAX; count];
    let mut lengths = vec![0usize; count];
    for (p, &l) in labels.iter().enumerate() {
        let l = l as usize;
        lengths[l] += 1;
        min_point[l] = min_point[l].min(p);
    }
    // suborbit s* holds the points i with (i, 1) in the orbital of s
    let star: Vec<usize> = (0..count)
        .map(|s| labels[tree.pull_back0(&action, min_point[s], 0)] as usize)
        .collect();
    for s in 0..count {
        if star[star[s]] != s || lengths[star[s]] != lengths[s] {
            return Err(Error::InvariantViolation(format!(
                "suborbit pairing is not an involution at suborbit {s}"
            )));
        }
    }
    let i_x = |s: usize| min_point[star[s]];
    let ordered = order_basis(count, &star, &i_x);
    let mut position = vec![0usize; count];
    for (r, &s) in ordered.iter().enumerate() {
        position[s] = r;
    }
    let orbital_of_point = labels.iter().map(|&l| position[l as usize] as u32).collect();
    Ok(OrbitalBasis {
        degree: n,
        orbital_of_point,
        lengths: ordered.iter().map(|&s| lengths[s]).collect(),
        representatives: ordered.iter().map(|&s| i_x(s) + 1).collect(),
        transpose: ordered.iter().map(|&s| position[star[s]]).collect(),
        action,
        tree,
    })
}

/// Orders raw suborbit indices `0..count` (0 being the base point) given the
/// transpose involution and the key `i_X`.
pub fn order_basis(count: usize, star: &[usize], i_x: &dyn Fn(usize) -> usize) -> Vec<usize> {
    let mut symmetric: Vec<usize> = (1..count).filter(|&s| star[s] == s).collect();
    symmetric.sort_by_key(|&s| i_x(s));
    let mut leaders: Vec<usize> = (1..count)
        .filter(|&s| star[s] != s && i_x(s) < i_x(star[s]))
        .collect();
    leaders.sort_by_key(|&s| i_x(s));
    let mut out = Vec::with_capacity(count);
    if count > 0 {
        out.push(0);
    }
    out.extend(symmetric);
    for s in leaders {
        out.push(s);
        out.push(star[s]);
    }
    out
}

/// `C[p][q][r]` with `A_p A_q = sum_r C_pq^r A_r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureConstants {
    rank: usize,
    table: Vec<u64>,
}

impl StructureConstants {
    pub fn from_table(rank: usize, table: Vec<u64>) -> Self {
        assert_eq!(table.len(), rank * rank * rank);
        StructureConstants { rank, table }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn get(&self, p: usize, q: usize, r: usize) -> u64 {
        self.table[(p * self.rank + q) * self.rank + r]
    }

    /// Nested `[p][q][r]` form for reports.
    pub fn to_nested(&self) -> Vec<Vec<Vec<u64>>> {
        (0..self.rank)
            .map(|p| {
                (0..self.rank)
                    .map(|q| (0..self.rank).map(|r| self.get(p, q, r)).collect())
                    .collect()
            })
            .collect()
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.rank).all(|p| {
            (p + 1..self.rank).all(|q| (0..self.rank).all(|r| self.get(p, q, r) == self.get(q, p, r)))
        })
    }

    /// Row sums, the identity-coefficient rule and transpose consistency.
    pub fn check_invariants(&self, lengths: &[usize], transpose: &[usize]) -> Result<()> {
        let n = self.rank;
        let fail = |m: String| Err(Error::InvariantViolation(m));
        for p in 0..n {
            for q in 0..n {
                let sum: u64 = (0..n).map(|r| self.get(p, q, r) * lengths[r] as u64).sum();
                if sum != (lengths[p] * lengths[q]) as u64 {
                    return fail(format!("row sum for p={}, q={} is {sum}", p + 1, q + 1));
                }
                let c1 = self.get(p, q, 0);
                let want = if q == transpose[p] { lengths[p] as u64 } else { 0 };
                if c1 != want {
                    return fail(format!("C_{{{},{}}}^1 = {c1}, expected {want}", p + 1, q + 1));
                }
                for r in 0..n {
                    if self.get(p, q, r) != self.get(transpose[q], transpose[p], transpose[r]) {
                        return fail(format!(
                            "transpose consistency fails at p={}, q={}, r={}",
                            p + 1,
                            q + 1,
                            r + 1
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `C_pq^r = #{k : orbital(j_r, k) = p, orbital(k, 1) = q}` for the
/// representative pair `(j_r, 1)`. Parallel over `r`.
pub fn compute_structure_constants(basis: &OrbitalBasis) -> Result<StructureConstants> {
    let rank = basis.rank();
    let n = basis.degree;
    // orbital(k, 1) = q  <=>  (1, k) lies in the transpose of q
    let col_orbital: Vec<u32> = (0..n)
        .map(|k| basis.transpose[basis.orbital_of_point[k] as usize] as u32)
        .collect();
    let slices: Vec<Vec<u64>> = (0..rank)
        .into_par_iter()
        .map(|r| {
            let j = basis.representatives[r] - 1;
            let u = basis.tree.transversal0(&basis.action, j);
            let mut counts = vec![0u64; rank * rank];
            // k = z^(u_j) has orbital(j, k) = orbital(1, z)
            for (z, &k) in u.raw().iter().enumerate() {
                let p = basis.orbital_of_point[z] as usize;
                let q = col_orbital[k as usize] as usize;
                counts[p * rank + q] += 1;
            }
            counts
        })
        .collect();
    let mut table = vec![0u64; rank * rank * rank];
    for (r, counts) in slices.iter().enumerate() {
        for pq in 0..rank * rank {
            table[pq * rank + r] = counts[pq];
        }
    }
    let c = StructureConstants { rank, table };
    c.check_invariants(&basis.lengths, &basis.transpose)?;
    Ok(c)
}
