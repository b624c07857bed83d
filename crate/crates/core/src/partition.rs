//! Directed partitions of the positive roots and the monomial functions they
//! induce.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::ar::ArData;
use crate::desing::FlagType;
use crate::error::{Error, Result};
use crate::quiver::{DimVector, VertexOrder};
use crate::reps::RepClass;

/// An ordered partition of the positive roots, as root indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedPartition {
    parts: Vec<Vec<usize>>,
}

/// Why a partition fails to be directed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `Ext(X_alpha, X_beta) != 0` inside one part.
    ExtWithinPart { part: usize, alpha: usize, beta: usize },
    /// `Hom(X_beta, X_alpha) != 0` with `alpha` in an earlier part than `beta`.
    HomBackwards { alpha: usize, beta: usize },
    /// `Ext(X_alpha, X_beta) != 0` with `alpha` in an earlier part than `beta`.
    ExtForwards { alpha: usize, beta: usize },
}

impl Violation {
    pub fn describe(&self, ar: &ArData) -> String {
        match *self {
            Violation::ExtWithinPart { part, alpha, beta } => format!(
                "ext({}, {}) = {} inside part {}",
                ar.root(alpha),
                ar.root(beta),
                ar.ext(alpha, beta),
                part + 1
            ),
            Violation::HomBackwards { alpha, beta } => format!(
                "hom({}, {}) = {} from a later part to an earlier one",
                ar.root(beta),
                ar.root(alpha),
                ar.hom(beta, alpha)
            ),
            Violation::ExtForwards { alpha, beta } => format!(
                "ext({}, {}) = {} from an earlier part to a later one",
                ar.root(alpha),
                ar.root(beta),
                ar.ext(alpha, beta)
            ),
        }
    }
}

impl DirectedPartition {
    /// Wraps parts after checking that they partition the roots. Directedness
    /// is not checked here; see [`is_directed`].
    pub fn new(ar: &ArData, parts: Vec<Vec<usize>>) -> Result<DirectedPartition> {
        let mut seen = vec![false; ar.len()];
        for part in &parts {
            if part.is_empty() {
                return Err(Error::NotAPartition("empty part".into()));
            }
            for &a in part {
                if a >= ar.len() {
                    return Err(Error::NotAPartition(format!("root index {a} out of range")));
                }
                if seen[a] {
                    return Err(Error::NotAPartition(format!("root {} appears twice", ar.root(a))));
                }
                seen[a] = true;
            }
        }
        if let Some(a) = seen.iter().position(|s| !s) {
            return Err(Error::NotAPartition(format!("root {} is not covered", ar.root(a))));
        }
        let parts = parts
            .into_iter()
            .map(|mut p| {
                p.sort_unstable();
                p
            })
            .collect();
        Ok(DirectedPartition { parts })
    }

    /// Builds a partition from parts given by root dimension vectors.
    pub fn from_roots(ar: &ArData, parts: &[Vec<DimVector>]) -> Result<DirectedPartition> {
        let idx = parts
            .iter()
            .map(|p| p.iter().map(|d| ar.root_index(d)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        DirectedPartition::new(ar, idx)
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Part index of every root.
    pub fn part_of(&self, n_roots: usize) -> Vec<usize> {
        let mut of = vec![0; n_roots];
        for (t, part) in self.parts.iter().enumerate() {
            for &a in part {
                of[a] = t;
            }
        }
        of
    }

    /// JSON-friendly form: parts as lists of labelled dimension vectors.
    pub fn to_maps(&self, ar: &ArData) -> Vec<Vec<BTreeMap<String, u32>>> {
        self.parts
            .iter()
            .map(|p| p.iter().map(|&a| ar.quiver().dimvector_to_map(ar.root(a))).collect())
            .collect()
    }

    pub fn from_maps(ar: &ArData, maps: &[Vec<BTreeMap<String, u32>>]) -> Result<DirectedPartition> {
        let parts = maps
            .iter()
            .map(|p| p.iter().map(|m| ar.quiver().dimvector_from_map(m)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        DirectedPartition::from_roots(ar, &parts)
    }
}

/// Checks both conditions of directedness and returns the first violation.
pub fn is_directed(ar: &ArData, p: &DirectedPartition) -> Option<Violation> {
    for (t, part) in p.parts.iter().enumerate() {
        for &a in part {
            for &b in part {
                if ar.ext(a, b) != 0 {
                    return Some(Violation::ExtWithinPart { part: t, alpha: a, beta: b });
                }
            }
        }
    }
    for (s, earlier) in p.parts.iter().enumerate() {
        for later in &p.parts[s + 1..] {
            for &a in earlier {
                for &b in later {
                    if ar.hom(b, a) != 0 {
                        return Some(Violation::HomBackwards { alpha: a, beta: b });
                    }
                    if ar.ext(a, b) != 0 {
                        return Some(Violation::ExtForwards { alpha: a, beta: b });
                    }
                }
            }
        }
    }
    None
}

/// Singleton parts in the canonical root order.
pub fn default_partition(ar: &ArData) -> DirectedPartition {
    DirectedPartition { parts: (0..ar.len()).map(|a| vec![a]).collect() }
}

/// Whether every part of `coarse` is a union of consecutive parts of `fine`.
pub fn is_refinement(fine: &DirectedPartition, coarse: &DirectedPartition) -> bool {
    let mut fine_parts = fine.parts.iter();
    for part in &coarse.parts {
        let target: BTreeSet<usize> = part.iter().copied().collect();
        let mut acc = BTreeSet::new();
        while acc != target {
            let Some(f) = fine_parts.next() else { return false };
            if !f.iter().all(|a| target.contains(a)) {
                return false;
            }
            acc.extend(f.iter().copied());
        }
    }
    fine_parts.next().is_none()
}

/// The vertex path `v_1 -> ... -> v_n` of an equioriented type A quiver.
fn equioriented_path(ar: &ArData) -> Option<Vec<usize>> {
    let q = ar.quiver();
    let n = q.vertex_count();
    if q.components().len() != 1 || q.arrows().len() + 1 != n {
        return None;
    }
    let order = q.admissible_vertex_order().0;
    for w in order.windows(2) {
        if q.arrow_count(w[0], w[1]) != 1 {
            return None;
        }
    }
    Some(order)
}

/// For equioriented `A_n` with path `v_1 -> ... -> v_n`: part `t` consists of
/// the intervals `[v_{n+1-t}, v_k]`.
pub fn an_partition(ar: &ArData) -> Result<DirectedPartition> {
    let path = equioriented_path(ar)
        .ok_or_else(|| Error::NotAPartition("the A_n preset needs an equioriented type A quiver".into()))?;
    let n = path.len();
    let interval = |i: usize, j: usize| {
        let mut d = ar.quiver().zero();
        for &v in &path[i..=j] {
            d.0[v] = 1;
        }
        d
    };
    let parts = (1..=n)
        .map(|t| (n - t..n).map(|k| interval(n - t, k)).collect())
        .collect::<Vec<Vec<DimVector>>>();
    DirectedPartition::from_roots(ar, &parts)
}

/// For `D_4` with three arrows into the central vertex `c`:
/// `{c}`, `{2c+a+b+d, c+a, c+b, c+d}`, `{c+a+b+d, c+a+b, c+a+d, c+b+d}`, `{a, b, d}`.
pub fn d4_partition(ar: &ArData) -> Result<DirectedPartition> {
    let q = ar.quiver();
    let bad = || Error::NotAPartition("the D_4 preset needs D_4 with all arrows into the branch vertex".into());
    if q.vertex_count() != 4 || q.arrows().len() != 3 {
        return Err(bad());
    }
    let c = q.arrows()[0].1;
    if q.arrows().iter().any(|&(_, t)| t != c) {
        return Err(bad());
    }
    let outer: Vec<usize> = (0..4).filter(|&v| v != c).collect();
    let vec_of = |coeffs: &[(usize, u32)]| {
        let mut d = q.zero();
        for &(v, x) in coeffs {
            d.0[v] += x;
        }
        d
    };
    let all_outer: Vec<(usize, u32)> = outer.iter().map(|&v| (v, 1)).collect();
    let mut p2 = vec![vec_of(&[&[(c, 2)], all_outer.as_slice()].concat())];
    p2.extend(outer.iter().map(|&v| vec_of(&[(c, 1), (v, 1)])));
    let mut p3 = vec![vec_of(&[&[(c, 1)], all_outer.as_slice()].concat())];
    for &skip in &outer {
        let mut co = vec![(c, 1)];
        co.extend(outer.iter().filter(|&&v| v != skip).map(|&v| (v, 1)));
        p3.push(vec_of(&co));
    }
    let p4: Vec<DimVector> = outer.iter().map(|&v| q.unit(v)).collect();
    DirectedPartition::from_roots(ar, &[vec![q.unit(c)], p2, p3, p4])
}

/// The word and block structure of the monomial function of a partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialFunction {
    /// Concatenation of the blocks `omega_t`.
    pub word: Vec<usize>,
    /// `(part, vertices of that part's support in the chosen vertex order)`.
    pub blocks: Vec<Vec<usize>>,
    part_of: Vec<usize>,
}

impl MonomialFunction {
    pub fn new(ar: &ArData, p: &DirectedPartition, order: &VertexOrder) -> MonomialFunction {
        let pos = order.positions();
        let blocks: Vec<Vec<usize>> = p
            .parts
            .iter()
            .map(|part| {
                let mut support: Vec<usize> = part
                    .iter()
                    .flat_map(|&a| ar.root(a).support().collect::<Vec<_>>())
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect();
                support.sort_by_key(|&v| pos[v]);
                support
            })
            .collect();
        let word = blocks.concat();
        MonomialFunction { word, blocks, part_of: p.part_of(ar.len()) }
    }

    /// Weights `a(M)`: for each block, the components of `dim M_(t)` at its
    /// vertices.
    pub fn weights(&self, ar: &ArData, m: &RepClass) -> Vec<u32> {
        let n = ar.quiver().vertex_count();
        let mut part_dims = vec![vec![0u32; n]; self.blocks.len()];
        for (a, mult) in m.summands() {
            for (x, r) in part_dims[self.part_of[a]].iter_mut().zip(&ar.root(a).0) {
                *x += mult * r;
            }
        }
        self.blocks
            .iter()
            .zip(&part_dims)
            .flat_map(|(block, d)| block.iter().map(|&v| d[v]).collect::<Vec<_>>())
            .collect()
    }

    pub fn flag_type(&self, ar: &ArData, m: &RepClass) -> FlagType {
        FlagType { word: self.word.clone(), weights: self.weights(ar, m) }
    }
}

/// `(word, weights)` of `M` for the given partition and vertex order.
pub fn monomial_of(ar: &ArData, p: &DirectedPartition, order: &VertexOrder, m: &RepClass) -> FlagType {
    MonomialFunction::new(ar, p, order).flag_type(ar, m)
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}
