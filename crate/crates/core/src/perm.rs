//! Permutations, generator sets, Schreier trees and stabilizer orbits.
//!
//! Points are 1-based in every public signature. Storage is 0-based.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A permutation of `{1..N}` acting on the right: `i^g`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from a 1-based image list.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &img in images {
            if img == 0 || img > n {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("image {img} out of range 1..{n}"),
                });
            }
            if seen[img - 1] {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("repeated image {img}"),
                });
            }
            seen[img - 1] = true;
            out.push((img - 1) as u32);
        }
        Ok(Permutation { images: out })
    }

    /// Builds a permutation of the given degree from disjoint 1-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for &p in cycle {
                if p == 0 || p > degree {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!("point {p} out of range 1..{degree}"),
                    });
                }
                if used[p - 1] {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!("repeated point {p} in cycle"),
                    });
                }
                used[p - 1] = true;
            }
            for (k, &p) in cycle.iter().enumerate() {
                let next = cycle[(k + 1) % cycle.len()];
                images[p - 1] = (next - 1) as u32;
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// `point^self` for a 1-based point.
    pub fn apply(&self, point: usize) -> usize {
        self.images[point - 1] as usize + 1
    }


    pub(crate) fn raw(&self) -> &[u32] {
        &self.images
    }

    /// 1-based image list.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i as usize + 1).collect()
    }

    /// `self` followed by `other`: `i^(self*other) = (i^self)^other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: self
                .images
                .iter()
                .map(|&i| other.images[i as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            inv[img as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    /// Disjoint cycles of length > 1, 1-based, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p + 1);
                p = self.images[p] as usize;
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, p) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Generators of a permutation group of a fixed degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    degree: usize,
    generators: Vec<Permutation>,
    labels: Vec<Option<String>>,
}

impl GeneratorSet {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        let labels = vec![None; generators.len()];
        Self::with_labels(degree, generators, labels)
    }

    pub fn with_labels(
        degree: usize,
        generators: Vec<Permutation>,
        labels: Vec<Option<String>>,
    ) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Parse {
                line: 0,
                message: "degree must be positive".into(),
            });
        }
        if generators.is_empty() {
            return Err(Error::Parse {
                line: 0,
                message: "empty generator list".into(),
            });
        }
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::Parse {
                line: 0,
                message: format!("generator of degree {} in a degree-{degree} set", g.degree()),
            });
        }
        assert_eq!(labels.len(), generators.len());
        Ok(GeneratorSet {
            degree,
            generators,
            labels,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Renders the set in the generator file format (image lists).
    pub fn to_text(&self) -> String {
        let mut s = format!("degree {}\n", self.degree);
        for (g, label) in self.generators.iter().zip(&self.labels) {
            s.push_str("gen ");
            if let Some(l) = label {
                s.push_str(l);
                s.push_str(": ");
            }
            s.push_str(&g.to_string());
            s.push('\n');
        }
        s
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn relabel(e: Error, line: usize) -> Error {
    match e {
        Error::Parse { message, .. } => Error::Parse { line, message },
        other => other,
    }
}

fn parse_cycles(spec: &str, line: usize) -> Result<Vec<Vec<usize>>> {
    let mut cycles = Vec::new();
    let mut rest = spec.trim();
    while !rest.is_empty() {
        if !rest.starts_with('(') {
            return Err(parse_err(line, format!("malformed cycle notation near '{rest}'")));
        }
        let close = rest
            .find(')')
            .ok_or_else(|| parse_err(line, "unclosed '(' in cycle notation"))?;
        let body = rest[1..close].trim();
        if !body.is_empty() {
            let mut cycle = Vec::new();
            for tok in body.split(',') {
                let tok = tok.trim();
                let p: usize = tok
                    .parse()
                    .map_err(|_| parse_err(line, format!("malformed token '{tok}'")))?;
                cycle.push(p);
            }
            cycles.push(cycle);
        }
        rest = rest[close + 1..].trim_start();
    }
    Ok(cycles)
}

/// Parses the generator file format.
///
/// ```text
/// degree 3
/// gen (1,2,3)
/// gen 2 1 3
/// ```
/// `#` starts a comment; blank lines are ignored. A generator may carry a
/// label: `gen a: (1,2)`.
pub fn parse_generators(text: &str) -> Result<GeneratorSet> {
    let mut degree: Option<usize> = None;
    let mut gens = Vec::new();
    let mut labels = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (keyword, rest) = match line.find(char::is_whitespace) {
            Some(pos) => (&line[..pos], line[pos..].trim()),
            None => (line, ""),
        };
        match keyword {
            "degree" => {
                if degree.is_some() {
                    return Err(parse_err(line_no, "duplicate degree line"));
                }
                let n: usize = rest
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("malformed degree '{rest}'")))?;
                if n == 0 {
                    return Err(parse_err(line_no, "degree must be positive"));
                }
                degree = Some(n);
            }
            "gen" => {
                let n = degree.ok_or_else(|| parse_err(line_no, "gen before degree line"))?;
                let (label, spec) = split_label(rest);
                if spec.is_empty() {
                    return Err(parse_err(line_no, "empty generator specification"));
                }
                let perm = if spec.starts_with('(') {
                    let cycles = parse_cycles(spec, line_no)?;
                    Permutation::from_cycles(n, &cycles).map_err(|e| relabel(e, line_no))?
                } else {
                    let mut images = Vec::with_capacity(n);
                    for tok in spec.split_whitespace() {
                        let v: usize = tok
                            .parse()
                            .map_err(|_| parse_err(line_no, format!("malformed token '{tok}'")))?;
                        images.push(v);
                    }
                    if images.len() != n {
                        return Err(parse_err(
                            line_no,
                            format!("image list has {} entries, expected {n}", images.len()),
                        ));
                    }
                    Permutation::from_images(&images).map_err(|e| relabel(e, line_no))?
                };
                gens.push(perm);
                labels.push(label.map(str::to_owned));
            }
            other => return Err(parse_err(line_no, format!("unknown keyword '{other}'"))),
        }
    }
    let n = degree.ok_or_else(|| parse_err(last_line.max(1), "missing degree line"))?;
    if gens.is_empty() {
        return Err(parse_err(last_line.max(1), "empty generator list"));
    }
    GeneratorSet::with_labels(n, gens, labels)
}

fn split_label(rest: &str) -> (Option<&str>, &str) {
    if let Some(pos) = rest.find(':') {
        let label = rest[..pos].trim();
        if !label.is_empty() && !label.contains(['(', ')', ',']) && !label.contains(char::is_whitespace)
        {
            return (Some(label), rest[pos + 1..].trim());
        }
    }
    (None, rest)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

const NO_PARENT: u32 = u32::MAX;

/// Generators together with their inverses, 0-based.
#[derive(Clone, Debug)]
pub(crate) struct Action {
    pub fwd: Vec<Vec<u32>>,
    pub inv: Vec<Vec<u32>>,
}

impl Action {
    pub fn new(gens: &GeneratorSet) -> Self {
        let fwd: Vec<Vec<u32>> = gens.generators.iter().map(|g| g.images.clone()).collect();
        let inv = gens
            .generators
            .iter()
            .map(|g| g.inverse().images)
            .collect();
        Action { fwd, inv }
    }

    #[inline]
    fn step(&self, gen: usize, dir: Direction, point: usize) -> usize {
        match dir {
            Direction::Forward => self.fwd[gen][point] as usize,
            Direction::Inverse => self.inv[gen][point] as usize,
        }
    }
}

/// Breadth-first Schreier tree rooted at a base point.
#[derive(Clone, Debug)]
pub struct SchreierTree {
    base: usize,
    parent: Vec<u32>,
    edge: Vec<(u32, Direction)>,
    depth: Vec<u32>,
    orbit: Vec<u32>,
}

impl SchreierTree {
    fn build(action: &Action, degree: usize, base0: usize) -> Self {
        let mut parent = vec![NO_PARENT; degree];
        let mut edge = vec![(0u32, Direction::Forward); degree];
        let mut depth = vec![0u32; degree];
        let mut orbit = vec![base0 as u32];
        parent[base0] = base0 as u32;
        let mut queue = VecDeque::from([base0]);
        while let Some(p) = queue.pop_front() {
            for g in 0..action.fwd.len() {
                for dir in [Direction::Forward, Direction::Inverse] {
                    let q = action.step(g, dir, p);
                    if parent[q] == NO_PARENT {
                        parent[q] = p as u32;
                        edge[q] = (g as u32, dir);
                        depth[q] = depth[p] + 1;
                        orbit.push(q as u32);
                        queue.push_back(q);
                    }
                }
            }
        }
        SchreierTree {
            base: base0,
            parent,
            edge,
            depth,
            orbit,
        }
    }

    /// 1-based base point.
    pub fn base(&self) -> usize {
        self.base + 1
    }

    /// Orbit points in BFS discovery order (1-based).
    pub fn orbit(&self) -> Vec<usize> {
        self.orbit.iter().map(|&p| p as usize + 1).collect()
    }

    pub fn orbit_len(&self) -> usize {
        self.orbit.len()
    }

    pub fn contains(&self, point: usize) -> bool {
        self.parent[point - 1] != NO_PARENT
    }

    /// Tree depth of a 1-based orbit point.
    pub fn depth(&self, point: usize) -> Option<usize> {
        self.contains(point).then(|| self.depth[point - 1] as usize)
    }

    pub fn max_depth(&self) -> usize {
        self.orbit
            .iter()
            .map(|&p| self.depth[p as usize] as usize)
            .max()
            .unwrap_or(0)
    }

    /// Generator word carrying the base to `point`, as (generator index, direction).
    pub fn word(&self, point: usize) -> Option<Vec<(usize, Direction)>> {
        if !self.contains(point) {
            return None;
        }
        let mut word = Vec::new();
        let mut p = point - 1;
        while p != self.base {
            let (g, dir) = self.edge[p];
            word.push((g as usize, dir));
            p = self.parent[p] as usize;
        }
        word.reverse();
        Some(word)
    }

    pub(crate) fn orbit0(&self) -> &[u32] {
        &self.orbit
    }

    /// `y^(u_x^-1)` where `u_x` is the tree element taking the base to `x` (0-based).
    #[inline]
    pub(crate) fn pull_back0(&self, action: &Action, x: usize, mut y: usize) -> usize {
        let mut p = x;
        while p != self.base {
            let (g, dir) = self.edge[p];
            y = match dir {
                Direction::Forward => action.inv[g as usize][y] as usize,
                Direction::Inverse => action.fwd[g as usize][y] as usize,
            };
            p = self.parent[p] as usize;
        }
        y
    }


    /// The transversal element `u_x` as an explicit permutation (0-based point).
    pub(crate) fn transversal0(&self, action: &Action, x: usize) -> Permutation {
        let mut path = Vec::new();
        let mut p = x;
        while p != self.base {
            path.push(self.edge[p]);
            p = self.parent[p] as usize;
        }
        let n = self.parent.len();
        let mut images: Vec<u32> = (0..n as u32).collect();
        for &(g, dir) in path.iter().rev() {
            let table = match dir {
                Direction::Forward => &action.fwd[g as usize],
                Direction::Inverse => &action.inv[g as usize],
            };
            for v in images.iter_mut() {
                *v = table[*v as usize];
            }
        }
        Permutation { images }
    }
}

/// Orbit of `base` (1-based) with its BFS Schreier tree.
///
/// Points are dequeued in discovery order; each point tries the generators in
/// list order, forward image before inverse image.
pub fn orbit_with_tree(gens: &GeneratorSet, base: usize) -> (Vec<usize>, SchreierTree) {
    assert!(base >= 1 && base <= gens.degree, "base point out of range");
    let action = Action::new(gens);
    let tree = SchreierTree::build(&action, gens.degree, base - 1);
    let mut orbit = tree.orbit();
    orbit.sort_unstable();
    (orbit, tree)
}

pub(crate) fn tree_for(action: &Action, degree: usize, base: usize) -> SchreierTree {
    SchreierTree::build(action, degree, base - 1)
}

pub fn is_transitive(gens: &GeneratorSet) -> bool {
    let action = Action::new(gens);
    SchreierTree::build(&action, gens.degree, 0).orbit.len() == gens.degree
}

/// Orbits of the group on all points, each sorted, ordered by smallest point.
pub fn orbits(gens: &GeneratorSet) -> Vec<Vec<usize>> {
    let n = gens.degree;
    let mut uf = UnionFind::new(n);
    for g in &gens.generators {
        for (i, &img) in g.images.iter().enumerate() {
            uf.union(i, img as usize);
        }
    }
    uf.classes()
        .into_iter()
        .map(|c| c.into_iter().map(|p| p + 1).collect())
        .collect()
}

/// Schreier generators `u_p * s * u_{p^s}^-1` of the stabilizer of `base`,
/// with identities and duplicates removed. The result is not a strong
/// generating set.
pub fn stabilizer_generators(gens: &GeneratorSet, base: usize) -> GeneratorSet {
    let action = Action::new(gens);
    let tree = SchreierTree::build(&action, gens.degree, base - 1);
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut out = Vec::new();
    for_each_schreier_generator(&action, &tree, |h| {
        if !h.is_identity() && seen.insert(h.images.clone()) {
            out.push(h);
        }
    });
    if out.is_empty() {
        out.push(Permutation::identity(gens.degree));
    }
    GeneratorSet::new(gens.degree, out).expect("stabilizer generators share the degree")
}

pub(crate) fn for_each_schreier_generator(
    action: &Action,
    tree: &SchreierTree,
    mut f: impl FnMut(Permutation),
) {
    for &p in tree.orbit0() {
        let p = p as usize;
        let mut u_p: Option<Permutation> = None;
        for s in 0..action.fwd.len() {
            let q = action.fwd[s][p] as usize;
            // tree edges give the identity
            if tree.parent[q] as usize == p
                && tree.edge[q] == (s as u32, Direction::Forward)
                && q != tree.base
            {
                continue;
            }
            let u = u_p.get_or_insert_with(|| tree.transversal0(action, p));
            let images: Vec<u32> = u
                .images
                .iter()
                .map(|&y| {
                    let z = action.fwd[s][y as usize] as usize;
                    tree.pull_back0(action, q, z) as u32
                })
                .collect();
            f(Permutation { images });
        }
    }
}

/// Strategy for computing the orbits of a point stabilizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuborbitStrategy {
    /// All Schreier generators, streamed through a union-find.
    Exact,
    /// Random stabilizer elements until `confirmations` consecutive samples
    /// merge nothing.
    Random { seed: u64, confirmations: usize },
}

/// Labels every point by the orbit of the stabilizer of the tree's base that
/// contains it. Labels are dense, assigned in order of each orbit's smallest
/// point (the base's orbit is 0).
pub(crate) fn stabilizer_orbit_labels(
    action: &Action,
    tree: &SchreierTree,
    strategy: SuborbitStrategy,
) -> Vec<u32> {
    let n = tree.parent.len();
    let mut uf = UnionFind::new(n);
    match strategy {
        SuborbitStrategy::Exact => {
            for_each_schreier_generator(action, tree, |h| {
                for (y, &img) in h.images.iter().enumerate() {
                    uf.union(y, img as usize);
                }
            });
        }
        SuborbitStrategy::Random {
            seed,
            confirmations,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut pr = ProductReplacement::new(action, &mut rng);
            let mut quiet = 0;
            let mut total = 0usize;
            while quiet < confirmations && total < 100_000 {
                let g = pr.next(&mut rng);
                let target = g[tree.base] as usize;
                let mut merged = false;
                for y in 0..n {
                    let img = tree.pull_back0(action, target, g[y] as usize);
                    merged |= uf.union(y, img);
                }
                total += 1;
                if merged {
                    quiet = 0;
                } else {
                    quiet += 1;
                }
            }
        }
    }
    let mut label = vec![u32::MAX; n];
    let mut root_label = vec![u32::MAX; n];
    let mut next = 0u32;
    for p in 0..n {
        let r = uf.find(p);
        if root_label[r] == u32::MAX {
            root_label[r] = next;
            next += 1;
        }
        label[p] = root_label[r];
    }
    // base orbit first
    let base_label = label[tree.base];
    if base_label != 0 {
        for l in label.iter_mut() {
            if *l == base_label {
                *l = 0;
            } else if *l < base_label {
                *l += 1;
            }
        }
    }
    label
}

struct ProductReplacement {
    slots: Vec<Vec<u32>>,
    acc: Vec<u32>,
}

impl ProductReplacement {
    fn new(action: &Action, rng: &mut impl Rng) -> Self {
        let k = action.fwd.len();
        let n = action.fwd[0].len();
        let count = 10.max(k + 1);
        let slots: Vec<Vec<u32>> = (0..count).map(|i| action.fwd[i % k].clone()).collect();
        let mut pr = ProductReplacement {
            slots,
            acc: (0..n as u32).collect(),
        };
        for _ in 0..60 {
            pr.next(rng);
        }
        pr
    }

    fn next(&mut self, rng: &mut impl Rng) -> Vec<u32> {
        let m = self.slots.len();
        let i = rng.gen_range(0..m);
        let mut j = rng.gen_range(0..m - 1);
        if j >= i {
            j += 1;
        }
        let other = if rng.gen_bool(0.5) {
            self.slots[j].clone()
        } else {
            invert_raw(&self.slots[j])
        };
        let updated: Vec<u32> = self.slots[i].iter().map(|&x| other[x as usize]).collect();
        self.slots[i] = updated;
        let acc: Vec<u32> = self.acc.iter().map(|&x| self.slots[i][x as usize]).collect();
        self.acc = acc;
        self.acc.clone()
    }
}

fn invert_raw(images: &[u32]) -> Vec<u32> {
    let mut inv = vec![0u32; images.len()];
    for (i, &v) in images.iter().enumerate() {
        inv[v as usize] = i as u32;
    }
    inv
}

pub(crate) struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let gp = self.parent[self.parent[x] as usize];
            self.parent[x] = gp;
            x = gp as usize;
        }
        x
    }

    /// Returns true when two distinct classes were merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb as u32,
            std::cmp::Ordering::Greater => self.parent[rb] = ra as u32,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra as u32;
                self.rank[ra] += 1;
            }
        }
        true
    }

    pub fn classes(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for p in 0..n {
            let r = self.find(p);
            by_root[r].push(p);
        }
        let mut out: Vec<Vec<usize>> = by_root.into_iter().filter(|c| !c.is_empty()).collect();
        out.sort_by_key(|c| c[0]);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> GeneratorSet {
        parse_generators("degree 3\ngen (1,2,3)\ngen (1,2)\n").unwrap()
    }

    fn c4() -> GeneratorSet {
        parse_generators("degree 4\ngen 2 3 4 1\n").unwrap()
    }

    #[test]
    fn parses_cycles_and_image_lists() {
        let g = s3();
        assert_eq!(g.degree(), 3);
        assert_eq!(g.generators()[0].images(), vec![2, 3, 1]);
        assert_eq!(g.generators()[1].images(), vec![2, 1, 3]);
        assert_eq!(c4().generators()[0].images(), vec![2, 3, 4, 1]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let e = parse_generators("degree 3\ngen (1,2,2)\n").unwrap_err();
        assert_eq!(
            e,
            Error::Parse {
                line: 2,
                message: "repeated point 2 in cycle".into()
            }
        );
        let e = parse_generators("degree 3\n\n# c\ngen (1,4)\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 4, .. }));
        let e = parse_generators("degree 3\ngen 1 1 2\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, ref message } if message.contains("repeated image")));
        let e = parse_generators("degree 3\n").unwrap_err();
        assert!(matches!(e, Error::Parse { ref message, .. } if message.contains("empty generator list")));
        let e = parse_generators("degree 3\ngen (1,x)\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, ref message } if message.contains("malformed token")));
        let e = parse_generators("degree 3\ngen 1 2\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn labels_and_comments() {
        let g = parse_generators("degree 4 # four points\ngen a: (1,2)(3,4)\ngen 2 1 4 3\n").unwrap();
        assert_eq!(g.labels()[0].as_deref(), Some("a"));
        assert_eq!(g.labels()[1], None);
        assert_eq!(g.generators()[0], g.generators()[1]);
        let back = parse_generators(&g.to_text()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn composition_is_right_action() {
        let a = Permutation::from_cycles(3, &[vec![1, 2, 3]]).unwrap();
        let b = Permutation::from_cycles(3, &[vec![1, 2]]).unwrap();
        let ab = a.compose(&b);
        for i in 1..=3 {
            assert_eq!(ab.apply(i), b.apply(a.apply(i)));
        }
        assert!(a.compose(&a.inverse()).is_identity());
    }

    #[test]
    fn orbits_and_trees() {
        let (orbit, _) = orbit_with_tree(&s3(), 1);
        assert_eq!(orbit, vec![1, 2, 3]);

        let id = GeneratorSet::new(3, vec![Permutation::identity(3)]).unwrap();
        let (orbit, _) = orbit_with_tree(&id, 2);
        assert_eq!(orbit, vec![2]);

        let (orbit, tree) = orbit_with_tree(&c4(), 1);
        assert_eq!(orbit, vec![1, 2, 3, 4]);
        let depths: Vec<usize> = (1..=4).map(|p| tree.depth(p).unwrap()).collect();
        assert_eq!(depths, vec![0, 1, 2, 1]);
    }

    #[test]
    fn tree_words_reach_points() {
        let g = parse_generators("degree 6\ngen (1,2,3,4,5,6)\ngen (1,6)(2,5)(3,4)\n").unwrap();
        let (_, tree) = orbit_with_tree(&g, 1);
        for p in 1..=6 {
            let word = tree.word(p).unwrap();
            let mut x = 1;
            for (gi, dir) in word {
                let gen = &g.generators()[gi];
                x = match dir {
                    Direction::Forward => gen.apply(x),
                    Direction::Inverse => gen.inverse().apply(x),
                };
            }
            assert_eq!(x, p);
        }
    }

    #[test]
    fn transitivity() {
        assert!(is_transitive(&s3()));
        assert!(is_transitive(&c4()));
        let g = parse_generators("degree 3\ngen (1,2)\n").unwrap();
        assert!(!is_transitive(&g));
        assert_eq!(orbits(&g), vec![vec![1, 2], vec![3]]);
    }

    #[test]
    fn stabilizers_fix_the_base() {
        let stab = stabilizer_generators(&s3(), 1);
        for h in stab.generators() {
            assert_eq!(h.apply(1), 1);
        }
        assert_eq!(orbits(&stab), vec![vec![1], vec![2, 3]]);

        let stab = stabilizer_generators(&c4(), 1);
        assert_eq!(orbits(&stab), vec![vec![1], vec![2], vec![3], vec![4]]);
    }

    #[test]
    fn random_strategy_matches_exact() {
        let g = parse_generators("degree 6\ngen (1,2,3,4,5,6)\ngen (1,2)\n").unwrap();
        let action = Action::new(&g);
        let tree = tree_for(&action, 6, 1);
        let exact = stabilizer_orbit_labels(&action, &tree, SuborbitStrategy::Exact);
        let random = stabilizer_orbit_labels(
            &action,
            &tree,
            SuborbitStrategy::Random {
                seed: 7,
                confirmations: 40,
            },
        );
        assert_eq!(exact, random);
        assert_eq!(exact, vec![0, 1, 1, 1, 1, 1]);
    }
}
