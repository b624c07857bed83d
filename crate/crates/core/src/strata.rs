//! Strata of the singular fibres: paths in the graph of extensions by
//! semisimple representations, their dimensions, and the antichain
//! description of middle terms for special quivers.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use crate::ar::ArData;
use crate::counts::{homs_into_sub, Engine};
use crate::desing::{variety_dims, FlagType};
use crate::error::{Error, Result};
use crate::fp::{for_each_between, Mat};
use crate::poly::CountPolynomial;
use crate::reps::{degenerates_unchecked, hom_classes, hom_space, solve_multiplicities, RepClass};

/// Largest total dimension handled by [`middle_terms`].
pub const MAX_MIDDLE_DIM: u32 = 8;

/// A sequence `[N_0, ..., N_len]` with `N_k` a subrepresentation of
/// `N_(k-1)` whose quotient is `E_(i_k)^(a_k)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StratumPath {
    pub classes: Vec<RepClass>,
}

/// An arrow `source -> target` of colour `(vertex, n)`: there is a short
/// exact sequence `0 -> source -> target -> E_vertex^n -> 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaArrow {
    pub source: RepClass,
    pub target: RepClass,
    pub colour: (usize, u32),
}

/// All `X` with a subrepresentation `N` and `X/N = E_i^n`, found by
/// searching the subspaces of `X_i` containing the images of incoming
/// arrows in a realization of every candidate `X` over `F_p`.
pub fn middle_terms(engine: &Engine, n: &RepClass, i: usize, k: u32, p: u32) -> Result<BTreeSet<RepClass>> {
    let ar = engine.ar();
    let q = ar.quiver();
    if n.0.len() != ar.len() {
        return Err(Error::MismatchedQuiver("class does not belong to this quiver".into()));
    }
    if i >= q.vertex_count() {
        return Err(Error::MismatchedQuiver(format!("no vertex with index {i}")));
    }
    let mut dx = n.dim(ar);
    dx.0[i] += k;
    if dx.total() > MAX_MIDDLE_DIM {
        return Err(Error::LimitExceeded(format!(
            "middle terms of total dimension {} exceed the search limit {MAX_MIDDLE_DIM}",
            dx.total()
        )));
    }
    let ind = engine.indecomposables(p)?;
    let mut out = BTreeSet::new();
    for x in engine.table(&dx)?.classes.iter() {
        let xrep = engine.realize(x, p)?;
        let xi = dx[i] as usize;
        let mut im = Mat::zeros(0, xi);
        for (a, &(_, t)) in q.arrows().iter().enumerate() {
            if t == i {
                im = im.vstack(&xrep.maps[a].transpose());
            }
        }
        let into: Vec<Vec<Vec<Mat>>> = ind.iter().map(|xb| hom_space(q, xb, &xrep)).collect();
        let mut u: Vec<Mat> = xrep.dims.0.iter().map(|&d| Mat::identity(d as usize)).collect();
        let mut found = false;
        for_each_between(&im, &Mat::identity(xi), xi - k as usize, p, |w| {
            if found {
                return Ok(());
            }
            u[i] = w.clone();
            let h = homs_into_sub(q, p, &u, &into);
            if solve_multiplicities(ar, &h)? == *n {
                found = true;
            }
            Ok(())
        })?;
        if found {
            out.insert(x.clone());
        }
    }
    Ok(out)
}

/// Classes `N_k` following `y` in a path, in canonical class order.
fn successors(engine: &Engine, y: &RepClass, ft: &FlagType, k: usize) -> Result<Vec<(RepClass, CountPolynomial)>> {
    if ft.weights[k] == 0 {
        return Ok(vec![(y.clone(), CountPolynomial::one())]);
    }
    let ss = engine.semisimple_quotients(y, ft.word[k], ft.weights[k])?;
    let mut out: Vec<(RepClass, CountPolynomial)> = ss.iter().map(|(u, c)| (u.clone(), c.clone())).collect();
    if let Some((first, _)) = out.first() {
        let table = engine.table(&first.dim(engine.ar()))?;
        out.sort_by_key(|(u, _)| table.position(u));
    }
    Ok(out)
}

/// All paths `[N_0 = N, ..., N_len = 0]` for the flag type, in
/// lexicographic canonical class order.
pub fn gamma_paths(engine: &Engine, n: &RepClass, ft: &FlagType) -> Result<Vec<StratumPath>> {
    let ar = engine.ar();
    check_weight(ar, n, ft)?;
    let mut alive = HashMap::new();
    let mut out = Vec::new();
    let mut prefix = vec![n.clone()];
    paths_rec(engine, ft, &mut prefix, &mut alive, &mut out)?;
    Ok(out)
}

fn paths_rec(
    engine: &Engine,
    ft: &FlagType,
    prefix: &mut Vec<RepClass>,
    alive: &mut HashMap<(RepClass, usize), bool>,
    out: &mut Vec<StratumPath>,
) -> Result<bool> {
    let k = prefix.len() - 1;
    let y = prefix[k].clone();
    if k == ft.len() {
        if y.is_zero() {
            out.push(StratumPath { classes: prefix.clone() });
        }
        return Ok(y.is_zero());
    }
    if alive.get(&(y.clone(), k)) == Some(&false) {
        return Ok(false);
    }
    let mut any = false;
    for (u, _) in successors(engine, &y, ft, k)? {
        prefix.push(u);
        any |= paths_rec(engine, ft, prefix, alive, out)?;
        prefix.pop();
    }
    alive.insert((y, k), any);
    Ok(any)
}

/// Number of points of the fibre stratum of a path over `F_q`.
pub fn stratum_count(engine: &Engine, path: &StratumPath, ft: &FlagType) -> Result<CountPolynomial> {
    check_path(engine.ar(), path, ft)?;
    let mut acc = CountPolynomial::one();
    for k in 0..ft.len() {
        let (y, u) = (&path.classes[k], &path.classes[k + 1]);
        let c = if ft.weights[k] == 0 {
            CountPolynomial::one()
        } else {
            engine.semisimple_quotients(y, ft.word[k], ft.weights[k])?.get(u).cloned().unwrap_or_default()
        };
        acc = &acc * &c;
    }
    Ok(acc)
}

fn check_weight(ar: &ArData, n: &RepClass, ft: &FlagType) -> Result<()> {
    let q = ar.quiver();
    ft.validate(q)?;
    if n.0.len() != ar.len() {
        return Err(Error::MismatchedQuiver("class does not belong to this quiver".into()));
    }
    let w = ft.weight(q);
    if w != n.dim(ar) {
        return Err(Error::WeightMismatch(format!("flag type has weight {w}, class has dimension {}", n.dim(ar))));
    }
    Ok(())
}

/// Checks lengths and the dimension vectors `dim N_k = d^k`.
fn check_path(ar: &ArData, path: &StratumPath, ft: &FlagType) -> Result<()> {
    ft.validate(ar.quiver())?;
    if path.classes.len() != ft.len() + 1 {
        return Err(Error::InvalidPath(format!(
            "path has {} classes, flag type needs {}",
            path.classes.len(),
            ft.len() + 1
        )));
    }
    for (k, (c, d)) in path.classes.iter().zip(ft.tail_weights(ar.quiver())).enumerate() {
        if c.0.len() != ar.len() {
            return Err(Error::MismatchedQuiver("class does not belong to this quiver".into()));
        }
        if c.dim(ar) != d {
            return Err(Error::InvalidPath(format!("class {k} has dimension {}, expected {d}", c.dim(ar))));
        }
    }
    Ok(())
}

/// `(orbital, fibre)` dimensions of the strata of a path.
pub fn stratum_dims(ar: &ArData, path: &StratumPath, ft: &FlagType) -> Result<(i64, i64)> {
    check_path(ar, path, ft)?;
    let c = &path.classes;
    let hom = |a: &RepClass, b: &RepClass| hom_classes(ar, a, b) as i64;
    let mut orbital = variety_dims(ar.quiver(), ft).parabolic as i64;
    let mut fibre = 0;
    for k in 1..c.len() {
        let h = hom(&c[k], &c[k - 1]);
        orbital += h - hom(&c[k - 1], &c[k - 1]);
        fibre += h - hom(&c[k], &c[k]);
    }
    Ok((orbital, fibre))
}

/// `dim F` of the tail `[N_k, ..., N_len]` for every `k`.
fn tail_dims(ar: &ArData, path: &StratumPath) -> Vec<i64> {
    let c = &path.classes;
    let mut out = vec![0i64; c.len()];
    for k in (0..c.len() - 1).rev() {
        out[k] = out[k + 1] + hom_classes(ar, &c[k + 1], &c[k]) as i64 - hom_classes(ar, &c[k + 1], &c[k + 1]) as i64;
    }
    out
}

/// Dimension of the fibre over `N`, `None` if it is empty.
pub fn fibre_dim(engine: &Engine, n: &RepClass, ft: &FlagType) -> Result<Option<i64>> {
    let ar = engine.ar();
    let mut best = None;
    for path in gamma_paths(engine, n, ft)? {
        let (_, f) = stratum_dims(ar, &path, ft)?;
        best = Some(best.map_or(f, |b: i64| b.max(f)));
    }
    Ok(best)
}

/// Necessary condition for the stratum of `n` to lie in the closure of the
/// stratum of `l`: each `N_k` lies in the orbit closure of `L_k`.
pub fn closure_necessary(ar: &ArData, l: &StratumPath, n: &StratumPath) -> bool {
    l.classes.len() == n.classes.len()
        && l.classes.iter().zip(&n.classes).all(|(a, b)| a.dim(ar) == b.dim(ar) && degenerates_unchecked(ar, a, b))
}

/// Paths whose stratum closure is certainly an irreducible component of the
/// fibre: no other path `L` has `L_k <= N_k` together with tail dimensions
/// at least those of `N` for all `k >= 1`.
pub fn component_candidates(engine: &Engine, n: &RepClass, ft: &FlagType) -> Result<Vec<StratumPath>> {
    let ar = engine.ar();
    let paths = gamma_paths(engine, n, ft)?;
    let tails: Vec<Vec<i64>> = paths.iter().map(|p| tail_dims(ar, p)).collect();
    let mut out = Vec::new();
    for (a, pn) in paths.iter().enumerate() {
        let blocked = paths.iter().enumerate().any(|(b, pl)| {
            b != a
                && (1..pn.classes.len()).all(|k| {
                    degenerates_unchecked(ar, &pl.classes[k], &pn.classes[k]) && tails[b][k] >= tails[a][k]
                })
        });
        if !blocked {
            out.push(pn.clone());
        }
    }
    Ok(out)
}

/// The arrows of the extension graph between consecutive weights of a flag
/// type, as a DOT digraph.
pub fn gamma_dot(engine: &Engine, n: &RepClass, ft: &FlagType) -> Result<String> {
    let ar = engine.ar();
    let q = ar.quiver();
    check_weight(ar, n, ft)?;
    let weights = ft.tail_weights(q);
    let mut s = String::from("digraph gamma {\n  rankdir=LR;\n");
    let name = |c: &RepClass| {
        let t = c.display(ar).to_string();
        if t.is_empty() {
            "0".to_string()
        } else {
            t
        }
    };
    let mut seen = BTreeSet::new();
    for d in &weights {
        for c in engine.table(d)?.classes.iter() {
            if seen.insert(c.clone()) {
                let style = if c == n { ", style=bold" } else { "" };
                writeln!(s, "  \"{}\" [label=\"{}\"{style}];", name(c), name(c)).unwrap();
            }
        }
    }
    let mut edges = BTreeSet::new();
    for k in 0..ft.len() {
        if ft.weights[k] == 0 {
            continue;
        }
        for y in engine.table(&weights[k])?.classes.iter() {
            for u in engine.semisimple_quotients(y, ft.word[k], ft.weights[k])?.keys() {
                edges.insert((name(u), name(y), q.label(ft.word[k]).to_string(), ft.weights[k]));
            }
        }
    }
    for (src, dst, v, a) in edges {
        writeln!(s, "  \"{src}\" -> \"{dst}\" [label=\"({v},{a})\"];").unwrap();
    }
    s.push_str("}\n");
    Ok(s)
}

/// Result of the two specialness tests.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Specialness {
    pub special: bool,
    /// Vertices that are sources and carry a root coefficient of at least 2.
    pub thick_sources: BTreeSet<usize>,
}

/// Whether `dim Hom(X_a, E_i) <= 1` for all roots and vertices, checked
/// against the criterion that no thick vertex is a source.
pub fn is_special(ar: &ArData) -> Result<Specialness> {
    let q = ar.quiver();
    let n = q.vertex_count();
    let by_hom = (0..ar.len()).all(|a| (0..n).all(|i| ar.hom(a, ar.simple(i)) <= 1));
    let thick_sources: BTreeSet<usize> =
        (0..n).filter(|&i| q.is_source(i) && ar.roots().iter().any(|r| r[i] >= 2)).collect();
    if by_hom != thick_sources.is_empty() {
        return Err(Error::CriteriaDisagree(format!(
            "Hom criterion says {by_hom}, thick sources {:?}",
            thick_sources.iter().map(|&v| q.label(v)).collect::<Vec<_>>()
        )));
    }
    Ok(Specialness { special: by_hom, thick_sources })
}

/// The roots `a` with `<a, i> = 1`, ordered by `a <= b` iff `<a, b> >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialPoset {
    pub vertex: usize,
    pub elements: Vec<usize>,
    /// `leq[x][y]` for positions in `elements`.
    leq: Vec<Vec<bool>>,
}

impl SpecialPoset {
    pub fn new(ar: &ArData, i: usize) -> Result<SpecialPoset> {
        let q = ar.quiver();
        if i >= q.vertex_count() {
            return Err(Error::MismatchedQuiver(format!("no vertex with index {i}")));
        }
        if !is_special(ar)?.special {
            return Err(Error::NotSpecial(format!("{} has a thick source", q.spec_string())));
        }
        let ei = q.unit(i);
        let elements: Vec<usize> = (0..ar.len()).filter(|&a| q.euler_unchecked(ar.root(a), &ei) == 1).collect();
        let leq: Vec<Vec<bool>> = elements
            .iter()
            .map(|&a| elements.iter().map(|&b| q.euler_unchecked(ar.root(a), ar.root(b)) >= 1).collect())
            .collect();
        let m = elements.len();
        for x in 0..m {
            for y in 0..m {
                if x != y && leq[x][y] && leq[y][x] {
                    return Err(Error::InternalInconsistency("root order is not antisymmetric".into()));
                }
                for z in 0..m {
                    if leq[x][y] && leq[y][z] && !leq[x][z] {
                        return Err(Error::InternalInconsistency("root order is not transitive".into()));
                    }
                }
            }
        }
        Ok(SpecialPoset { vertex: i, elements, leq })
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        match (self.elements.iter().position(|&x| x == a), self.elements.iter().position(|&x| x == b)) {
            (Some(x), Some(y)) => self.leq[x][y],
            _ => false,
        }
    }

    /// All antichains, as bit masks over `elements`.
    fn antichains(&self) -> Result<Vec<u64>> {
        let m = self.elements.len();
        if m > 24 {
            return Err(Error::LimitExceeded(format!("{m} poset elements are too many to enumerate antichains")));
        }
        let mut out = Vec::new();
        for mask in 0u64..(1 << m) {
            let ok = (0..m).all(|x| {
                mask >> x & 1 == 0 || (x + 1..m).all(|y| mask >> y & 1 == 0 || (!self.leq[x][y] && !self.leq[y][x]))
            });
            if ok {
                out.push(mask);
            }
        }
        Ok(out)
    }

    /// Minimal elements among those not below any element of the antichain.
    fn lower_boundary(&self, mask: u64) -> Vec<usize> {
        let m = self.elements.len();
        let outside: Vec<usize> = (0..m).filter(|&x| !(0..m).any(|a| mask >> a & 1 == 1 && self.leq[x][a])).collect();
        outside
            .iter()
            .copied()
            .filter(|&x| !outside.iter().any(|&y| y != x && self.leq[y][x]))
            .collect()
    }
}

/// Middle terms of extensions of `E_i` by `M` from the antichains of the
/// poset at `i`.
pub fn special_middle_terms(ar: &ArData, sp: &SpecialPoset, m: &RepClass) -> Result<BTreeSet<RepClass>> {
    if m.0.len() != ar.len() {
        return Err(Error::MismatchedQuiver("class does not belong to this quiver".into()));
    }
    if !is_special(ar)?.special {
        return Err(Error::NotSpecial(format!("{} has a thick source", ar.quiver().spec_string())));
    }
    let mut out = BTreeSet::new();
    'chains: for mask in sp.antichains()? {
        let mut b = m.clone();
        for x in sp.lower_boundary(mask) {
            match ar.tau(sp.elements[x]) {
                Some(t) if b.0[t] > 0 => b.0[t] -= 1,
                _ => continue 'chains,
            }
        }
        for (x, &a) in sp.elements.iter().enumerate() {
            if mask >> x & 1 == 1 {
                b.0[a] += 1;
            }
        }
        out.insert(b);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{DimVector, Quiver};

    fn class(ar: &ArData, parts: &[(&[u32], u32)]) -> RepClass {
        let mut m = RepClass::zero(ar);
        for (d, k) in parts {
            m.0[ar.root_index(&DimVector(d.to_vec())).unwrap()] += k;
        }
        m
    }

    #[test]
    fn a2_middle_terms() {
        let e = Engine::new(&Quiver::parse("1->2").unwrap()).unwrap();
        let ar = e.ar();
        let (e1, e2, e12) = (class(ar, &[(&[1, 0], 1)]), class(ar, &[(&[0, 1], 1)]), class(ar, &[(&[1, 1], 1)]));
        let split = e1.direct_sum(&e2);
        assert_eq!(middle_terms(&e, &e2, 0, 1, 2).unwrap(), BTreeSet::from([e12.clone(), split.clone()]));
        assert_eq!(middle_terms(&e, &e1, 1, 1, 3).unwrap(), BTreeSet::from([split.clone()]));
        assert_eq!(middle_terms(&e, &RepClass::zero(ar), 1, 2, 2).unwrap(), BTreeSet::from([class(ar, &[(&[0, 1], 2)])]));
        let sp = SpecialPoset::new(ar, 0).unwrap();
        assert_eq!(sp.elements.len(), 2);
        assert!(sp.leq(ar.root_index(&DimVector(vec![1, 1])).unwrap(), ar.root_index(&DimVector(vec![1, 0])).unwrap()));
        assert_eq!(special_middle_terms(ar, &sp, &e2).unwrap(), BTreeSet::from([e12, split]));
        assert_eq!(special_middle_terms(ar, &sp, &RepClass::zero(ar)).unwrap(), BTreeSet::from([e1]));
    }

    #[test]
    fn a2_paths_and_dims() {
        let q = Quiver::parse("1->2").unwrap();
        let e = Engine::new(&q).unwrap();
        let ar = e.ar();
        let e12 = class(ar, &[(&[1, 1], 1)]);
        let ft = FlagType::new(&q, vec![1, 0, 1], vec![0, 1, 1]).unwrap();
        let paths = gamma_paths(&e, &e12, &ft).unwrap();
        let expected = vec![e12.clone(), e12.clone(), class(ar, &[(&[0, 1], 1)]), RepClass::zero(ar)];
        assert_eq!(paths, vec![StratumPath { classes: expected }]);
        assert_eq!(stratum_dims(ar, &paths[0], &ft).unwrap().1, 0);
        let ss = FlagType::new(&q, vec![1, 0, 1], vec![1, 1, 0]).unwrap();
        assert!(gamma_paths(&e, &e12, &ss).unwrap().is_empty());
        assert_eq!(fibre_dim(&e, &e12, &ss).unwrap(), None);

        let n = class(ar, &[(&[1, 0], 1), (&[0, 1], 2)]);
        let ft = FlagType::new(&q, vec![1, 0, 1], vec![1, 1, 1]).unwrap();
        let paths = gamma_paths(&e, &n, &ft).unwrap();
        assert_eq!(paths.len(), 1);
        assert_eq!(stratum_dims(ar, &paths[0], &ft).unwrap(), (0, 1));
        assert_eq!(fibre_dim(&e, &n, &ft).unwrap(), Some(1));
        assert_eq!(stratum_count(&e, &paths[0], &ft).unwrap(), CountPolynomial::new(vec![1, 1]));
        assert_eq!(component_candidates(&e, &n, &ft).unwrap(), paths);

        let empty = FlagType::new(&q, vec![], vec![]).unwrap();
        let zero = RepClass::zero(ar);
        let p0 = gamma_paths(&e, &zero, &empty).unwrap();
        assert_eq!(p0, vec![StratumPath { classes: vec![zero] }]);
        assert_eq!(stratum_dims(ar, &p0[0], &empty).unwrap(), (0, 0));
        let bad = StratumPath { classes: vec![n.clone()] };
        assert!(matches!(stratum_dims(ar, &bad, &ft), Err(Error::InvalidPath(_))));
    }

    #[test]
    fn specialness() {
        for s in ["1->2", "1->2,3->2", "1->2,2->3,4->3"] {
            assert!(is_special(&ArData::knit(&Quiver::parse(s).unwrap()).unwrap()).unwrap().special);
        }
        let d4 = ArData::knit(&Quiver::parse("1->0,2->0,3->0").unwrap()).unwrap();
        assert!(is_special(&d4).unwrap().special);
        let d4src = ArData::knit(&Quiver::parse("0->1,0->2,0->3").unwrap()).unwrap();
        let s = is_special(&d4src).unwrap();
        assert!(!s.special);
        assert_eq!(s.thick_sources, BTreeSet::from([0]));
        assert!(matches!(SpecialPoset::new(&d4src, 1), Err(Error::NotSpecial(_))));
    }

    #[test]
    fn dot_output() {
        let q = Quiver::parse("1->2").unwrap();
        let e = Engine::new(&q).unwrap();
        let e12 = class(e.ar(), &[(&[1, 1], 1)]);
        let ft = FlagType::new(&q, vec![1, 0, 1], vec![0, 1, 1]).unwrap();
        let dot = gamma_dot(&e, &e12, &ft).unwrap();
        assert!(dot.starts_with("digraph gamma {"));
        assert!(dot.contains("-> \"X(1,1)\" [label=\"(1,1)\"]"));
    }
}
