//! F4 over `Z/p`: all S-pairs of the lowest degree are reduced together as
//! the rows of one sparse matrix.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::modular::{modulus, mul_mod, pow_mod, Fp};
use crate::poly::{GroebnerLimits, Monomial, Poly, TermOrder};

type Row = Vec<(u32, u64)>;

/// Interned monomials.
struct Table {
    mons: Vec<Monomial>,
    index: HashMap<Monomial, u32>,
}

impl Table {
    fn intern(&mut self, m: Monomial) -> u32 {
        if let Some(&i) = self.index.get(&m) {
            return i;
        }
        let i = self.mons.len() as u32;
        self.mons.push(m.clone());
        self.index.insert(m, i);
        i
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct State {
    order: TermOrder,
    table: Table,
    /// Monic, terms sorted by decreasing monomial.
    basis: Vec<Row>,
    lms: Vec<Monomial>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
    p: u64,
}

fn inv(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

impl State {
    fn shifted(&mut self, g: usize, shift: &Monomial) -> Row {
        let mut out = Vec::with_capacity(self.basis[g].len());
        for k in 0..self.basis[g].len() {
            let (m, c) = self.basis[g][k];
            let prod = self.table.mons[m as usize].mul(shift);
            out.push((self.table.intern(prod), c));
        }
        out
    }

    fn reducer_for(&self, m: &Monomial) -> Option<usize> {
        (0..self.basis.len())
            .filter(|&k| self.active[k] && self.lms[k].divides(m))
            .min_by_key(|&k| self.basis[k].len())
    }

    /// Symbolic preprocessing followed by elimination; returns the reduced
    /// `todo` rows with leading monomials outside the current basis ideal.
    fn reduce(&mut self, todo: Vec<Row>, mut reducers: HashMap<u32, Row>) -> Vec<Row> {
        let mut seen: HashSet<u32> = reducers.keys().copied().collect();
        let mut queue: Vec<u32> = Vec::new();
        for r in todo.iter().chain(reducers.values()) {
            queue.extend(r.iter().map(|t| t.0));
        }
        while let Some(m) = queue.pop() {
            if !seen.insert(m) {
                continue;
            }
            let mon = self.table.mons[m as usize].clone();
            if let Some(g) = self.reducer_for(&mon) {
                let shift = mon.div(&self.lms[g]);
                let row = self.shifted(g, &shift);
                queue.extend(row.iter().skip(1).map(|t| t.0));
                reducers.insert(m, row);
            }
        }
        let order = self.order;
        let mut cols: Vec<u32> = seen.into_iter().collect();
        {
            let mons = &self.table.mons;
            cols.sort_by(|&a, &b| mons[b as usize].cmp_by(&mons[a as usize], order));
        }
        let col_of: HashMap<u32, u32> = cols.iter().enumerate().map(|(c, &m)| (m, c as u32)).collect();
        let to_cols = |r: &Row| -> Row { r.iter().map(|&(m, c)| (col_of[&m], c)).collect() };
        let mut pivots: Vec<Option<Row>> = vec![None; cols.len()];
        for r in reducers.values() {
            let r = to_cols(r);
            let lead = r[0].0 as usize;
            pivots[lead] = Some(r);
        }
        let p = self.p;
        let mut dense = vec![0u64; cols.len()];
        let mut out = Vec::new();
        for r in &todo {
            let r = to_cols(r);
            let start = r[0].0 as usize;
            for &(c, v) in &r {
                dense[c as usize] = v;
            }
            let mut lead = None;
            for c in start..cols.len() {
                let v = dense[c];
                if v == 0 {
                    continue;
                }
                match &pivots[c] {
                    Some(piv) => {
                        let f = p - v;
                        for &(k, w) in piv {
                            let d = &mut dense[k as usize];
                            let s = *d + mul_mod(f, w, p);
                            *d = if s >= p { s - p } else { s };
                        }
                    }
                    None => {
                        if lead.is_none() {
                            lead = Some(c);
                        }
                    }
                }
            }
            let Some(lead) = lead else { continue };
            let s = inv(dense[lead], p);
            let mut row: Row = Vec::new();
            for (c, d) in dense.iter_mut().enumerate().skip(lead) {
                if *d != 0 {
                    row.push((c as u32, mul_mod(*d, s, p)));
                    *d = 0;
                }
            }
            out.push(row.iter().map(|&(c, v)| (cols[c as usize], v)).collect());
            pivots[lead] = Some(row);
        }
        out
    }

    fn add(&mut self, h: Row) {
        let hlm = self.table.mons[h[0].0 as usize].clone();
        let hi = self.basis.len();
        let mut candidates: VecDeque<(usize, Monomial, bool)> = (0..hi)
            .filter(|&i| self.active[i])
            .map(|i| (i, self.lms[i].lcm(&hlm), self.lms[i].coprime(&hlm)))
            .collect();
        let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
        while let Some((i, l, cop)) = candidates.pop_front() {
            let covered = candidates.iter().chain(kept.iter()).any(|(_, l2, _)| l2.divides(&l));
            if cop || !covered {
                kept.push((i, l, cop));
            }
        }
        let lms = &self.lms;
        self.pairs.retain(|pr| {
            let li = lms[pr.i].lcm(&hlm);
            let lj = lms[pr.j].lcm(&hlm);
            !(hlm.divides(&pr.lcm) && li != pr.lcm && lj != pr.lcm)
        });
        for (i, l, cop) in kept {
            if !cop {
                self.pairs.push(Pair { i, j: hi, lcm: l });
            }
        }
        for i in 0..hi {
            if self.active[i] && hlm.divides(&self.lms[i]) {
                self.active[i] = false;
            }
        }
        self.basis.push(h);
        self.lms.push(hlm);
        self.active.push(true);
    }

    fn is_unit(&self, rows: &[Row]) -> bool {
        rows.iter().any(|r| self.table.mons[r[0].0 as usize].is_one())
    }

    fn insert_sorted(&mut self, mut rows: Vec<Row>) {
        let order = self.order;
        let mons = &self.table.mons;
        rows.sort_by(|a, b| mons[a[0].0 as usize].cmp_by(&mons[b[0].0 as usize], order));
        for r in rows {
            self.add(r);
        }
    }

    /// Minimal basis with every tail fully reduced.
    fn reduced_basis(&mut self) -> Vec<Row> {
        let order = self.order;
        let mut idx: Vec<usize> = (0..self.basis.len()).filter(|&k| self.active[k]).collect();
        idx.sort_by(|&a, &b| self.lms[a].cmp_by(&self.lms[b], order));
        let mut minimal: Vec<usize> = Vec::new();
        for k in idx {
            if !minimal.iter().any(|&q| self.lms[q].divides(&self.lms[k])) {
                minimal.push(k);
            }
        }
        // reduce the elements one at a time, smallest leading monomial first,
        // against the already reduced ones
        let mut done: Vec<Row> = Vec::new();
        let saved_active = std::mem::replace(&mut self.active, vec![false; self.basis.len()]);
        for &k in &minimal {
            let row = self.basis[k].clone();
            let lead = row[0];
            let tail: Row = row[1..].to_vec();
            let mut reduced = if tail.is_empty() {
                Vec::new()
            } else {
                self.reduce_tail(tail)
            };
            reduced.insert(0, lead);
            self.basis[k] = reduced.clone();
            self.active[k] = true;
            done.push(reduced);
        }
        self.active = saved_active;
        done
    }

    /// Normal form of a polynomial (not necessarily monic) modulo the active
    /// elements.
    fn reduce_tail(&mut self, tail: Row) -> Row {
        let mut reducers: HashMap<u32, Row> = HashMap::new();
        let mut seen: HashSet<u32> = HashSet::new();
        let mut queue: Vec<u32> = tail.iter().map(|t| t.0).collect();
        while let Some(m) = queue.pop() {
            if !seen.insert(m) {
                continue;
            }
            let mon = self.table.mons[m as usize].clone();
            if let Some(g) = self.reducer_for(&mon) {
                let shift = mon.div(&self.lms[g]);
                let row = self.shifted(g, &shift);
                queue.extend(row.iter().skip(1).map(|t| t.0));
                reducers.insert(m, row);
            }
        }
        let order = self.order;
        let mut cols: Vec<u32> = seen.into_iter().collect();
        {
            let mons = &self.table.mons;
            cols.sort_by(|&a, &b| mons[b as usize].cmp_by(&mons[a as usize], order));
        }
        let col_of: HashMap<u32, usize> = cols.iter().enumerate().map(|(c, &m)| (m, c)).collect();
        let p = self.p;
        let mut dense = vec![0u64; cols.len()];
        for &(m, v) in &tail {
            dense[col_of[&m]] = v;
        }
        for c in 0..cols.len() {
            let v = dense[c];
            if v == 0 {
                continue;
            }
            if let Some(piv) = reducers.get(&cols[c]) {
                let f = p - v;
                for &(m, w) in piv {
                    let d = &mut dense[col_of[&m]];
                    let s = *d + mul_mod(f, w, p);
                    *d = if s >= p { s - p } else { s };
                }
            }
        }
        dense
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(c, &v)| (cols[c], v))
            .collect()
    }
}

/// Reduced Groebner basis over the prime set by
/// [`with_modulus`](crate::modular::with_modulus). Same contract as
/// [`groebner_basis`](crate::poly::groebner_basis): monic, sorted by
/// increasing leading monomial, `[1]` for the unit ideal.
pub fn groebner_f4(gens: &[Poly<Fp>], limits: &GroebnerLimits) -> Result<Vec<Poly<Fp>>> {
    let Some(first) = gens.iter().find(|g| !g.is_zero()) else {
        return Ok(Vec::new());
    };
    let (nvars, order) = (first.nvars(), first.order());
    let unit = || vec![Poly::constant(nvars, order, Fp(1))];
    let p = modulus();
    let mut st = State {
        order,
        table: Table {
            mons: Vec::new(),
            index: HashMap::new(),
        },
        basis: Vec::new(),
        lms: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
        p,
    };
    let inputs: Vec<Row> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| {
            let g = g.with_order(order).monic();
            g.terms().iter().map(|(m, c)| (st.table.intern(m.clone()), c.0)).collect()
        })
        .collect();
    let first_rows = st.reduce(inputs, HashMap::new());
    if st.is_unit(&first_rows) {
        return Ok(unit());
    }
    st.insert_sorted(first_rows);
    let mut processed = 0usize;
    while !st.pairs.is_empty() {
        let d = st.pairs.iter().map(|pr| pr.lcm.degree()).min().unwrap();
        let (selected, rest): (Vec<Pair>, Vec<Pair>) = std::mem::take(&mut st.pairs).into_iter().partition(|pr| pr.lcm.degree() == d);
        st.pairs = rest;
        processed += selected.len();
        if processed > limits.max_pairs {
            return Err(Error::ResourceLimit(format!("Groebner pair limit {} reached", limits.max_pairs)));
        }
        let mut reducers: HashMap<u32, Row> = HashMap::new();
        let mut todo: Vec<Row> = Vec::new();
        let mut used: HashSet<(u32, usize)> = HashSet::new();
        for pr in &selected {
            let lcm = st.table.intern(pr.lcm.clone());
            for g in [pr.i, pr.j] {
                let shift = pr.lcm.div(&st.lms[g]);
                let key = (st.table.intern(shift.clone()), g);
                if !used.insert(key) {
                    continue;
                }
                let row = st.shifted(g, &shift);
                if let std::collections::hash_map::Entry::Vacant(e) = reducers.entry(lcm) {
                    e.insert(row);
                } else {
                    todo.push(row);
                }
            }
        }
        let new_rows = st.reduce(todo, reducers);
        if st.is_unit(&new_rows) {
            return Ok(unit());
        }
        if st.basis.len() + new_rows.len() > limits.max_basis {
            return Err(Error::ResourceLimit(format!("Groebner basis size limit {} reached", limits.max_basis)));
        }
        st.insert_sorted(new_rows);
    }
    let rows = st.reduced_basis();
    Ok(rows
        .into_iter()
        .map(|r| {
            let terms = r.into_iter().map(|(m, c)| (st.table.mons[m as usize].clone(), Fp(c))).collect();
            Poly::from_terms(nvars, order, terms)
        })
        .collect())
}
