//! Text and JSON report formats for orbital analyses and decompositions.
//!
//! The text form of a decomposition is line oriented:
//!
//! ```text
//! Degree: 10. Rank: 3. Suborbit lengths: 1, 3, 6
//! 10 ≅ 1 ⊕ 4 ⊕ 5
//! B_1 = 1/10*(A1 + A2 + A3)
//! B_4 = 2/5*(A1 - 2/3*A2 + 1/6*A3)
//! B_5 = 1/2*(A1 + 1/3*A2 - 1/3*A3)
//! ```
//!
//! Repeated dimensions get primes (`B_2`, `B_2'`), classes with multiplicity
//! are parenthesized in the decomposition line, and optional `Conjugate
//! pairs:`, `Sliced:` and `Mixed dimensions:` lines follow it. Numeric
//! coefficients are written as exact enclosures `{lo .. hi, lo .. hi}` and
//! such projectors use `≈` instead of `=`. Both forms parse back to the same
//! [`Decomposition`].

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::centralizer::{OrbitalBasis, StructureConstants};
use crate::error::{Error, Result};
use crate::field::{FieldElement, Rational};
use crate::numeric::{ComplexInterval, Interval};
use crate::solver::{Coordinate, CoordinateJson};
use crate::splitter::{Decomposition, Projector, Provenance};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub degree: usize,
    pub rank: usize,
    pub suborbit_lengths: Vec<usize>,
    /// Smallest `j` with `(j, 1)` in each orbital.
    pub representatives: Vec<usize>,
    pub symmetric: Vec<bool>,
    /// 1-based index of each orbital's transpose.
    pub transpose: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure_constants: Option<Vec<Vec<Vec<u64>>>>,
}

impl AnalyzeReport {
    pub fn new(basis: &OrbitalBasis, constants: Option<&StructureConstants>) -> Self {
        let rank = basis.rank();
        AnalyzeReport {
            degree: basis.degree(),
            rank,
            suborbit_lengths: basis.suborbit_lengths().to_vec(),
            representatives: basis.representatives().to_vec(),
            symmetric: (0..rank).map(|r| basis.is_symmetric(r)).collect(),
            transpose: (0..rank).map(|r| basis.transpose_of(r) + 1).collect(),
            structure_constants: constants.map(|c| c.to_nested()),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "Degree: {}. Rank: {}. Suborbit lengths: {}\n",
            self.degree,
            self.rank,
            join(&self.suborbit_lengths)
        );
        let sym: Vec<String> = (0..self.rank)
            .filter(|&r| self.symmetric[r])
            .map(|r| format!("A{}", r + 1))
            .collect();
        let _ = writeln!(s, "Symmetric: {}", sym.join(", "));
        let pairs: Vec<String> = (0..self.rank)
            .filter(|&r| !self.symmetric[r] && r + 1 < self.transpose[r])
            .map(|r| format!("A{} <-> A{}", r + 1, self.transpose[r]))
            .collect();
        let _ = writeln!(
            s,
            "Transpose pairs: {}",
            if pairs.is_empty() { "none".to_string() } else { pairs.join(", ") }
        );
        let _ = writeln!(s, "Representatives: {}", join(&self.representatives));
        if let Some(t) = &self.structure_constants {
            for (p, rows) in t.iter().enumerate() {
                for (q, row) in rows.iter().enumerate() {
                    let _ = writeln!(s, "C[{}][{}] = {}", p + 1, q + 1, join(row));
                }
            }
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("analysis serializes")
    }
}

/// `B_d`, `B_d'`, ... in family order.
pub fn projector_labels(d: &Decomposition) -> Vec<String> {
    let mut seen: std::collections::HashMap<usize, usize> = Default::default();
    d.projectors
        .iter()
        .map(|p| {
            let k = seen.entry(p.dimension).or_insert(0);
            let label = format!("B_{}{}", p.dimension, "'".repeat(*k));
            *k += 1;
            label
        })
        .collect()
}

/// `N ≅ 1 ⊕ 4 ⊕ (5 ⊕ 5)`.
pub fn decomposition_line(d: &Decomposition) -> String {
    let items: Vec<String> = d
        .blocks
        .iter()
        .map(|b| {
            let dims: Vec<String> = b.iter().map(|&i| d.projectors[i].dimension.to_string()).collect();
            if dims.len() == 1 {
                dims[0].clone()
            } else {
                format!("({})", dims.join(" ⊕ "))
            }
        })
        .collect();
    format!("{} ≅ {}", d.degree, items.join(" ⊕ "))
}

fn has_top_level_sum(s: &str) -> bool {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            '+' | '-' if depth == 0 && i > 0 => return true,
            _ => {}
        }
    }
    false
}

fn interval_str(x: &Interval) -> String {
    format!("{} .. {}", x.lo, x.hi)
}

fn scale_box(b: &ComplexInterval, q: &Rational) -> ComplexInterval {
    ComplexInterval {
        re: b.re.scale(q),
        im: b.im.scale(q),
    }
}

/// Right-hand side of a projector line.
pub fn projector_expression(p: &Projector) -> String {
    let factor = match p.coefficients.first() {
        Some(Coordinate::Exact(a)) => a.as_rational().filter(|q| !q.is_zero()),
        _ => None,
    }
    .unwrap_or_else(Rational::one);
    let inv = Rational::one() / &factor;
    let mut inner = String::new();
    for (r, c) in p.coefficients.iter().enumerate() {
        let (negative, body) = match c {
            Coordinate::Exact(a) => {
                if a.is_zero() {
                    continue;
                }
                let v = a.scale(&inv);
                let (neg, mag) = match v.as_rational() {
                    Some(q) if q.is_negative() => (true, -v),
                    None if v.to_string().starts_with('-') => (true, -v),
                    _ => (false, v),
                };
                let text = mag.to_string();
                let body = if mag.is_one() {
                    format!("A{}", r + 1)
                } else if has_top_level_sum(&text) {
                    format!("({text})*A{}", r + 1)
                } else {
                    format!("{text}*A{}", r + 1)
                };
                (neg, body)
            }
            Coordinate::Numeric(b) => {
                let v = scale_box(b, &inv);
                (false, format!("{{{}, {}}}*A{}", interval_str(&v.re), interval_str(&v.im), r + 1))
            }
        };
        if inner.is_empty() {
            if negative {
                inner.push('-');
            }
        } else {
            inner.push_str(if negative { " - " } else { " + " });
        }
        inner.push_str(&body);
    }
    if inner.is_empty() {
        inner.push('0');
    }
    if factor.is_one() {
        format!("1*({inner})")
    } else {
        format!("{factor}*({inner})")
    }
}

pub fn decomposition_to_text(d: &Decomposition) -> String {
    let labels = projector_labels(d);
    let mut s = format!(
        "Degree: {}. Rank: {}. Suborbit lengths: {}\n",
        d.degree,
        d.rank,
        join(&d.suborbit_lengths)
    );
    s.push_str(&decomposition_line(d));
    s.push('\n');
    let partners = d.conjugate_partners();
    let pairs: Vec<String> = partners
        .iter()
        .enumerate()
        .filter_map(|(i, p)| p.filter(|&j| j > i).map(|j| format!("{} ~ {}", labels[i], labels[j])))
        .collect();
    if !pairs.is_empty() {
        let _ = writeln!(s, "Conjugate pairs: {}", pairs.join(", "));
    }
    let sliced: Vec<&str> = d
        .projectors
        .iter()
        .zip(&labels)
        .filter(|(p, _)| p.provenance == Provenance::SlicedSolution)
        .map(|(_, l)| l.as_str())
        .collect();
    if !sliced.is_empty() {
        let _ = writeln!(s, "Sliced: {}", sliced.join(", "));
    }
    if !d.mixed_dimensions.is_empty() {
        let _ = writeln!(s, "Mixed dimensions: {}", join(&d.mixed_dimensions));
    }
    for (p, l) in d.projectors.iter().zip(&labels) {
        let op = if p.is_exact() { "=" } else { "≈" };
        let _ = writeln!(s, "{l} {op} {}", projector_expression(p));
    }
    s
}

fn parse_usize_list(s: &str, line: usize) -> Result<Vec<usize>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| parse_err(line, format!("expected an integer, found '{}'", t.trim())))
        })
        .collect()
}

fn parse_header(s: &str, line: usize) -> Result<(usize, usize, Vec<usize>)> {
    let bad = || parse_err(line, "expected 'Degree: N. Rank: R. Suborbit lengths: ...'");
    let rest = s.strip_prefix("Degree:").ok_or_else(bad)?;
    let (deg, rest) = rest.split_once(". Rank:").ok_or_else(bad)?;
    let (rank, rest) = rest.split_once(". Suborbit lengths:").ok_or_else(bad)?;
    let degree = deg.trim().parse().map_err(|_| bad())?;
    let rank = rank.trim().parse().map_err(|_| bad())?;
    Ok((degree, rank, parse_usize_list(rest, line)?))
}

/// Splits on top-level `⊕`, `+` or `-`; signs stay with their chunk.
fn split_top_level(s: &str, seps: &[char]) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    for ch in s.chars() {
        match ch {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            _ => {}
        }
        if depth == 0 && seps.contains(&ch) {
            if !cur.trim().is_empty() {
                out.push(cur.trim().to_string());
            }
            cur = if ch == '-' { "-".into() } else { String::new() };
            continue;
        }
        cur.push(ch);
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

fn parse_blocks(s: &str, line: usize) -> Result<(usize, Vec<Vec<usize>>)> {
    let (deg, rhs) = s
        .split_once('≅')
        .ok_or_else(|| parse_err(line, "expected 'N ≅ d1 ⊕ d2 ...'"))?;
    let degree = deg
        .trim()
        .parse()
        .map_err(|_| parse_err(line, "bad degree in decomposition line"))?;
    let mut blocks = Vec::new();
    for item in split_top_level(rhs, &['⊕']) {
        let inner = item.strip_prefix('(').and_then(|t| t.strip_suffix(')'));
        let dims: Vec<&str> = match inner {
            Some(t) => t.split('⊕').collect(),
            None => vec![item.as_str()],
        };
        let dims = dims
            .iter()
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| parse_err(line, format!("bad dimension '{}'", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        blocks.push(dims);
    }
    Ok((degree, blocks))
}

fn parse_rational(t: &str, line: usize) -> Result<Rational> {
    t.trim()
        .parse::<Rational>()
        .map_err(|_| parse_err(line, format!("bad rational '{}'", t.trim())))
}

fn parse_interval(t: &str, line: usize) -> Result<Interval> {
    let (lo, hi) = t
        .split_once("..")
        .ok_or_else(|| parse_err(line, format!("bad interval '{t}'")))?;
    let (lo, hi) = (parse_rational(lo, line)?, parse_rational(hi, line)?);
    if lo > hi {
        return Err(parse_err(line, format!("empty interval '{t}'")));
    }
    Ok(Interval::new(lo, hi))
}

fn parse_expression(rhs: &str, rank: usize, line: usize) -> Result<Vec<Coordinate>> {
    let rhs = rhs.trim();
    let (factor, inner) = rhs
        .split_once("*(")
        .and_then(|(f, rest)| rest.strip_suffix(')').map(|i| (f, i)))
        .ok_or_else(|| parse_err(line, "expected 'factor*(...)'"))?;
    let factor = parse_rational(factor, line)?;
    let mut coeffs = vec![Coordinate::Exact(FieldElement::zero()); rank];
    if inner.trim() == "0" {
        return Ok(coeffs);
    }
    for chunk in split_top_level(inner, &['+', '-']) {
        let (negative, body) = match chunk.strip_prefix('-') {
            Some(b) => (true, b.trim()),
            None => (false, chunk.as_str()),
        };
        let pos = body
            .rfind('A')
            .ok_or_else(|| parse_err(line, format!("term '{chunk}' names no basis element")))?;
        let r: usize = body[pos + 1..]
            .parse()
            .map_err(|_| parse_err(line, format!("bad basis index in '{chunk}'")))?;
        if r == 0 || r > rank {
            return Err(parse_err(line, format!("basis index A{r} outside 1..{rank}")));
        }
        let coef = body[..pos].trim_end();
        let coef = coef.strip_suffix('*').unwrap_or(coef).trim();
        let sign = if negative { -Rational::one() } else { Rational::one() };
        let value = if let Some(b) = coef.strip_prefix('{').and_then(|t| t.strip_suffix('}')) {
            let (re, im) = b
                .split_once(',')
                .ok_or_else(|| parse_err(line, format!("bad enclosure '{coef}'")))?;
            let bx = ComplexInterval {
                re: parse_interval(re, line)?,
                im: parse_interval(im, line)?,
            };
            Coordinate::Numeric(scale_box(&bx, &(&sign * &factor)))
        } else {
            let a: FieldElement = if coef.is_empty() {
                FieldElement::one()
            } else {
                coef.parse().map_err(|e: Error| parse_err(line, e.to_string()))?
            };
            Coordinate::Exact(a.scale(&(&sign * &factor)))
        };
        coeffs[r - 1] = value;
    }
    Ok(coeffs)
}

/// Parses the text form written by [`decomposition_to_text`].
pub fn parse_decomposition_text(text: &str) -> Result<Decomposition> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "empty decomposition"))?;
    let (degree, rank, suborbit_lengths) = parse_header(header, ln)?;
    let (ln, dline) = lines
        .next()
        .ok_or_else(|| parse_err(ln + 1, "missing decomposition line"))?;
    let (deg2, block_dims) = parse_blocks(dline, ln)?;
    if deg2 != degree {
        return Err(parse_err(ln, format!("decomposition of {deg2} in a report of degree {degree}")));
    }
    let mut sliced: Vec<String> = Vec::new();
    let mut mixed_dimensions = Vec::new();
    let mut projectors = Vec::new();
    let mut labels = Vec::new();
    for (ln, l) in lines {
        if let Some(rest) = l.strip_prefix("Conjugate pairs:") {
            let _ = rest;
        } else if let Some(rest) = l.strip_prefix("Sliced:") {
            sliced = rest.split(',').map(|t| t.trim().to_string()).collect();
        } else if let Some(rest) = l.strip_prefix("Mixed dimensions:") {
            mixed_dimensions = parse_usize_list(rest, ln)?;
        } else if l.starts_with("B_") {
            let (label, rhs) = l
                .split_once(" = ")
                .or_else(|| l.split_once(" ≈ "))
                .ok_or_else(|| parse_err(ln, "expected 'B_d = ...'"))?;
            let dimension = label[2..]
                .trim_end_matches('\'')
                .parse::<usize>()
                .map_err(|_| parse_err(ln, format!("bad projector label '{label}'")))?;
            projectors.push(Projector {
                dimension,
                coefficients: parse_expression(rhs, rank, ln)?,
                provenance: Provenance::UniqueSolution,
            });
            labels.push(label.to_string());
        } else {
            return Err(parse_err(ln, format!("unrecognized line '{l}'")));
        }
    }
    for (p, l) in projectors.iter_mut().zip(&labels) {
        if sliced.contains(l) {
            p.provenance = Provenance::SlicedSolution;
        }
    }
    let mut blocks = Vec::new();
    let mut next = 0;
    for dims in &block_dims {
        let mut b = Vec::new();
        for &dim in dims {
            match projectors.get(next) {
                Some(p) if p.dimension == dim => b.push(next),
                _ => {
                    return Err(parse_err(
                        0,
                        format!("projector {} does not match dimension {dim} of the decomposition line", next + 1),
                    ))
                }
            }
            next += 1;
        }
        blocks.push(b);
    }
    if next != projectors.len() {
        return Err(parse_err(0, "more projector lines than the decomposition line lists"));
    }
    Ok(Decomposition {
        degree,
        rank,
        suborbit_lengths,
        projectors,
        blocks,
        mixed_dimensions,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectorJson {
    pub label: String,
    pub dimension: usize,
    pub provenance: Provenance,
    pub coefficients: Vec<CoordinateJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub degree: usize,
    pub rank: usize,
    pub suborbit_lengths: Vec<usize>,
    pub decomposition: String,
    pub projectors: Vec<ProjectorJson>,
    /// 0-based projector indices per isotypic class.
    pub blocks: Vec<Vec<usize>>,
    #[serde(default)]
    pub mixed_dimensions: Vec<usize>,
    /// 0-based index pairs of mutually conjugate projectors.
    #[serde(default)]
    pub conjugate_pairs: Vec<[usize; 2]>,
}

impl From<&Decomposition> for DecompositionJson {
    fn from(d: &Decomposition) -> Self {
        let labels = projector_labels(d);
        DecompositionJson {
            degree: d.degree,
            rank: d.rank,
            suborbit_lengths: d.suborbit_lengths.clone(),
            decomposition: decomposition_line(d),
            projectors: d
                .projectors
                .iter()
                .zip(labels)
                .map(|(p, label)| ProjectorJson {
                    label,
                    dimension: p.dimension,
                    provenance: p.provenance,
                    coefficients: p.coefficients.iter().map(CoordinateJson::from).collect(),
                })
                .collect(),
            blocks: d.blocks.clone(),
            mixed_dimensions: d.mixed_dimensions.clone(),
            conjugate_pairs: d
                .conjugate_partners()
                .iter()
                .enumerate()
                .filter_map(|(i, p)| p.filter(|&j| j > i).map(|j| [i, j]))
                .collect(),
        }
    }
}

impl TryFrom<&DecompositionJson> for Decomposition {
    type Error = Error;

    fn try_from(j: &DecompositionJson) -> Result<Self> {
        let projectors = j
            .projectors
            .iter()
            .map(|p| {
                if p.coefficients.len() != j.rank {
                    return Err(parse_err(
                        0,
                        format!("{} has {} coefficients for rank {}", p.label, p.coefficients.len(), j.rank),
                    ));
                }
                Ok(Projector {
                    dimension: p.dimension,
                    coefficients: p
                        .coefficients
                        .iter()
                        .map(Coordinate::try_from)
                        .collect::<Result<Vec<_>>>()?,
                    provenance: p.provenance,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut seen = vec![false; projectors.len()];
        for &i in j.blocks.iter().flatten() {
            if i >= projectors.len() || std::mem::replace(&mut seen[i], true) {
                return Err(parse_err(0, format!("block index {i} is out of range or repeated")));
            }
        }
        Ok(Decomposition {
            degree: j.degree,
            rank: j.rank,
            suborbit_lengths: j.suborbit_lengths.clone(),
            projectors,
            blocks: j.blocks.clone(),
            mixed_dimensions: j.mixed_dimensions.clone(),
        })
    }
}

pub fn decomposition_to_json(d: &Decomposition) -> String {
    serde_json::to_string_pretty(&DecompositionJson::from(d)).expect("decomposition serializes")
}

pub fn parse_decomposition_json(text: &str) -> Result<Decomposition> {
    let j: DecompositionJson = serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))?;
    Decomposition::try_from(&j)
}

/// JSON when the first non-blank character is `{`, text otherwise.
pub fn parse_decomposition(text: &str) -> Result<Decomposition> {
    if text.trim_start().starts_with('{') {
        parse_decomposition_json(text)
    } else {
        parse_decomposition_text(text)
    }
}
