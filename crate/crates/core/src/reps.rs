//! Isomorphism classes of representations, explicit matrix representations
//! over prime fields, and the degeneration order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ar::ArData;
use crate::error::{Error, Result};
use crate::fp::{check_prime, Mat};
use crate::quiver::{DimVector, Quiver};

/// An isomorphism class, given by the multiplicity of each indecomposable
/// (indexed by the canonical root order).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RepClass(pub Vec<u32>);

impl RepClass {
    pub fn zero(ar: &ArData) -> RepClass {
        RepClass(vec![0; ar.len()])
    }

    pub fn indecomposable(ar: &ArData, a: usize) -> RepClass {
        let mut m = RepClass::zero(ar);
        m.0[a] = 1;
        m
    }

    /// Semisimple class `E_v^n`.
    pub fn simple_power(ar: &ArData, v: usize, n: u32) -> RepClass {
        let mut m = RepClass::zero(ar);
        m.0[ar.simple(v)] = n;
        m
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn dim(&self, ar: &ArData) -> DimVector {
        let mut d = vec![0u32; ar.quiver().vertex_count()];
        for (a, &m) in self.0.iter().enumerate() {
            if m > 0 {
                for (x, r) in d.iter_mut().zip(&ar.root(a).0) {
                    *x += m * r;
                }
            }
        }
        DimVector(d)
    }

    /// Number of indecomposable summands, counted with multiplicity.
    pub fn summand_count(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `(root index, multiplicity)` for the nonzero multiplicities.
    pub fn summands(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().enumerate().filter(|(_, &m)| m > 0).map(|(a, &m)| (a, m))
    }

    pub fn direct_sum(&self, other: &RepClass) -> RepClass {
        RepClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn display<'a>(&'a self, ar: &'a ArData) -> ClassDisplay<'a> {
        ClassDisplay { class: self, ar }
    }

    fn check(&self, ar: &ArData) -> Result<()> {
        if self.0.len() != ar.len() {
            return Err(Error::MismatchedQuiver(format!(
                "class has {} multiplicities, quiver has {} roots",
                self.0.len(),
                ar.len()
            )));
        }
        Ok(())
    }
}

/// Human-readable form such as `X(1,1) + 2 X(0,1)`.
pub struct ClassDisplay<'a> {
    class: &'a RepClass,
    ar: &'a ArData,
}

impl fmt::Display for ClassDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .class
            .summands()
            .map(|(a, m)| {
                if m == 1 {
                    format!("X{}", self.ar.root(a))
                } else {
                    format!("{m} X{}", self.ar.root(a))
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `dim Hom(M, N)` by bilinearity.
pub fn hom_classes(ar: &ArData, m: &RepClass, n: &RepClass) -> u32 {
    let mut total = 0;
    for (a, x) in m.summands() {
        for (b, y) in n.summands() {
            total += x * y * ar.hom(a, b);
        }
    }
    total
}

/// `dim Ext^1(M, N)` by bilinearity.
pub fn ext_classes(ar: &ArData, m: &RepClass, n: &RepClass) -> u32 {
    let mut total = 0;
    for (a, x) in m.summands() {
        for (b, y) in n.summands() {
            total += x * y * ar.ext(a, b);
        }
    }
    total
}

pub fn hom_ext_classes(ar: &ArData, m: &RepClass, n: &RepClass) -> Result<(u32, u32)> {
    m.check(ar)?;
    n.check(ar)?;
    Ok((hom_classes(ar, m, n), ext_classes(ar, m, n)))
}

/// `(dim End(M), dim of the orbit of M)`.
pub fn end_and_orbit_dim(ar: &ArData, m: &RepClass) -> (u32, u32) {
    let end = hom_classes(ar, m, m);
    (end, m.dim(ar).group_dim() - end)
}

/// Whether `N` lies in the orbit closure of `M`, decided by the Hom order.
pub fn degenerates(ar: &ArData, m: &RepClass, n: &RepClass) -> Result<bool> {
    m.check(ar)?;
    n.check(ar)?;
    Ok(degenerates_unchecked(ar, m, n))
}

pub(crate) fn degenerates_unchecked(ar: &ArData, m: &RepClass, n: &RepClass) -> bool {
    if m.dim(ar) != n.dim(ar) {
        return false;
    }
    (0..ar.len()).all(|a| {
        let x = RepClass::indecomposable(ar, a);
        hom_classes(ar, &x, m) <= hom_classes(ar, &x, n)
    })
}

/// All classes of dimension vector `d`, generic class first: sorted by
/// endomorphism dimension, then by multiplicity vector.
pub fn enumerate_classes(ar: &ArData, d: &DimVector) -> Result<Vec<RepClass>> {
    if d.len() != ar.quiver().vertex_count() {
        return Err(Error::MismatchedQuiver(format!("dimension vector {d} has wrong length")));
    }
    let mut out = Vec::new();
    let mut mult = vec![0u32; ar.len()];
    knapsack(ar, 0, d.0.clone(), &mut mult, &mut out);
    let mut keyed: Vec<(u32, RepClass)> =
        out.into_iter().map(|c| (hom_classes(ar, &c, &c), c)).collect();
    keyed.sort();
    Ok(keyed.into_iter().map(|(_, c)| c).collect())
}

fn knapsack(ar: &ArData, a: usize, rest: Vec<u32>, mult: &mut Vec<u32>, out: &mut Vec<RepClass>) {
    if rest.iter().all(|&x| x == 0) {
        out.push(RepClass(mult.clone()));
        return;
    }
    if a == ar.len() {
        return;
    }
    let root = &ar.root(a).0;
    let max = root
        .iter()
        .zip(&rest)
        .filter(|(r, _)| **r > 0)
        .map(|(r, x)| x / r)
        .min()
        .unwrap_or(0);
    for m in (0..=max).rev() {
        let next: Vec<u32> = rest.iter().zip(root).map(|(x, r)| x - m * r).collect();
        mult[a] = m;
        knapsack(ar, a + 1, next, mult, out);
    }
    mult[a] = 0;
}

/// The classes of one dimension vector together with an index.
#[derive(Debug, Clone)]
pub struct ClassTable {
    pub dim: DimVector,
    pub classes: Vec<RepClass>,
    index: HashMap<RepClass, usize>,
}

impl ClassTable {
    pub fn new(ar: &ArData, d: &DimVector) -> Result<ClassTable> {
        let classes = enumerate_classes(ar, d)?;
        let index = classes.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        Ok(ClassTable { dim: d.clone(), classes, index })
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn position(&self, m: &RepClass) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// A representation over `F_p`: one matrix per arrow (target x source), in the
/// arrow order of the quiver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcreteRep {
    pub p: u32,
    pub dims: DimVector,
    pub maps: Vec<Mat>,
}

/// JSON form of a [`ConcreteRep`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConcreteRepJson {
    pub p: u32,
    pub dims: BTreeMap<String, u32>,
    pub matrices: BTreeMap<String, Vec<Vec<u32>>>,
}

impl ConcreteRep {
    pub fn zero(q: &Quiver, dims: DimVector, p: u32) -> ConcreteRep {
        let maps = q.arrows().iter().map(|&(s, t)| Mat::zeros(dims[t] as usize, dims[s] as usize)).collect();
        ConcreteRep { p, dims, maps }
    }

    /// Checks the field, matrix shapes and entry ranges.
    pub fn validate(&self, q: &Quiver) -> Result<()> {
        check_prime(self.p)?;
        if self.dims.len() != q.vertex_count() || self.maps.len() != q.arrows().len() {
            return Err(Error::MismatchedQuiver("representation does not match the quiver".into()));
        }
        for (a, (&(s, t), m)) in q.arrows().iter().zip(&self.maps).enumerate() {
            if m.rows() != self.dims[t] as usize || m.cols() != self.dims[s] as usize {
                return Err(Error::Parse(format!(
                    "matrix on arrow {} has shape {}x{}, expected {}x{}",
                    q.arrow_name(a),
                    m.rows(),
                    m.cols(),
                    self.dims[t],
                    self.dims[s]
                )));
            }
            if m.to_rows().iter().flatten().any(|&x| x >= self.p) {
                return Err(Error::Parse(format!("entry not reduced mod {} on arrow {}", self.p, q.arrow_name(a))));
            }
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &ConcreteRep, q: &Quiver) -> ConcreteRep {
        let dims = &self.dims + &other.dims;
        let maps = q
            .arrows()
            .iter()
            .zip(self.maps.iter().zip(&other.maps))
            .map(|(&(s, t), (a, b))| {
                let mut m = Mat::zeros(dims[t] as usize, dims[s] as usize);
                for r in 0..a.rows() {
                    for c in 0..a.cols() {
                        m.set(r, c, a.get(r, c));
                    }
                }
                for r in 0..b.rows() {
                    for c in 0..b.cols() {
                        m.set(a.rows() + r, a.cols() + c, b.get(r, c));
                    }
                }
                m
            })
            .collect();
        ConcreteRep { p: self.p, dims, maps }
    }

    pub fn to_json(&self, q: &Quiver) -> ConcreteRepJson {
        ConcreteRepJson {
            p: self.p,
            dims: q.dimvector_to_map(&self.dims),
            matrices: (0..q.arrows().len()).map(|a| (q.arrow_name(a), self.maps[a].to_rows())).collect(),
        }
    }

    pub fn from_json(js: &ConcreteRepJson, q: &Quiver) -> Result<ConcreteRep> {
        check_prime(js.p)?;
        let dims = q.dimvector_from_map(&js.dims)?;
        let mut maps = Vec::new();
        for (a, &(s, t)) in q.arrows().iter().enumerate() {
            let name = q.arrow_name(a);
            let rows = match js.matrices.get(&name) {
                Some(rows) => rows.clone(),
                None => vec![vec![0; dims[s] as usize]; dims[t] as usize],
            };
            if rows.len() != dims[t] as usize || rows.iter().any(|r| r.len() != dims[s] as usize) {
                return Err(Error::Parse(format!("matrix on arrow {name} has the wrong shape")));
            }
            maps.push(Mat::from_rows(dims[s] as usize, &rows));
        }
        for name in js.matrices.keys() {
            if !(0..q.arrows().len()).any(|a| &q.arrow_name(a) == name) {
                return Err(Error::Parse(format!("unknown arrow {name}")));
            }
        }
        let x = ConcreteRep { p: js.p, dims, maps };
        x.validate(q)?;
        Ok(x)
    }

    /// Restriction to a subrepresentation given by bases `u[v]` (rows, in
    /// ambient coordinates). The subspaces must be closed under the maps.
    pub fn restrict(&self, q: &Quiver, u: &[Mat]) -> Result<ConcreteRep> {
        let p = self.p;
        let dims = DimVector(u.iter().map(|b| b.rows() as u32).collect());
        let mut maps = Vec::new();
        for (a, &(s, t)) in q.arrows().iter().enumerate() {
            let mut m = Mat::zeros(u[t].rows(), u[s].rows());
            for r in 0..u[s].rows() {
                let img = Mat::from_rows(u[s].cols(), &[u[s].row(r).to_vec()]).mul(&self.maps[a].transpose(), p);
                let coords = u[t].solve_left(img.row(0), p).ok_or_else(|| {
                    Error::InternalInconsistency("subspace is not closed under an arrow".into())
                })?;
                for (c, x) in coords.into_iter().enumerate() {
                    m.set(c, r, x);
                }
            }
            maps.push(m);
        }
        Ok(ConcreteRep { p, dims, maps })
    }
}

/// A basis of `Hom(X, Y)`, each element given as one matrix per vertex.
pub fn hom_space(q: &Quiver, x: &ConcreteRep, y: &ConcreteRep) -> Vec<Vec<Mat>> {
    let p = x.p;
    let n = q.vertex_count();
    let mut off = vec![0usize; n + 1];
    for v in 0..n {
        off[v + 1] = off[v] + (x.dims[v] * y.dims[v]) as usize;
    }
    let unknowns = off[n];
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for (a, &(s, t)) in q.arrows().iter().enumerate() {
        let (xa, ya) = (&x.maps[a], &y.maps[a]);
        let (xs, xt, ys, yt) = (x.dims[s] as usize, x.dims[t] as usize, y.dims[s] as usize, y.dims[t] as usize);
        // Y_a f_s - f_t X_a = 0, entry (r, c)
        for r in 0..yt {
            for c in 0..xs {
                let mut eq = vec![0u32; unknowns];
                for k in 0..ys {
                    let idx = off[s] + k * xs + c;
                    eq[idx] = (eq[idx] + ya.get(r, k)) % p;
                }
                for k in 0..xt {
                    let idx = off[t] + r * xt + k;
                    eq[idx] = (eq[idx] + p - xa.get(k, c)) % p;
                }
                rows.push(eq);
            }
        }
    }
    let system = Mat::from_rows(unknowns, &rows);
    let basis = if rows.is_empty() { Mat::identity(unknowns) } else { system.nullspace(p) };
    (0..basis.rows())
        .map(|b| {
            (0..n)
                .map(|v| {
                    let (yv, xv) = (y.dims[v] as usize, x.dims[v] as usize);
                    let mut m = Mat::zeros(yv, xv);
                    for r in 0..yv {
                        for c in 0..xv {
                            m.set(r, c, basis.get(b, off[v] + r * xv + c));
                        }
                    }
                    m
                })
                .collect()
        })
        .collect()
}

/// `dim Hom(X, Y)` as the kernel dimension of the intertwiner system.
pub fn hom_dim(q: &Quiver, x: &ConcreteRep, y: &ConcreteRep) -> u32 {
    hom_space(q, x, y).len() as u32
}

/// The indecomposable with dimension vector `ar.root(a)`, built by reflection
/// functors from a simple.
pub fn realize_indecomposable(ar: &ArData, a: usize, p: u32) -> Result<ConcreteRep> {
    check_prime(p)?;
    let q = ar.quiver();
    let word = ar.sink_word();
    let t = ar.word_len(a);
    let mut orient: Vec<(usize, usize)> = q.arrows().to_vec();
    for &k in &word[..t - 1] {
        flip_at(&mut orient, k);
    }
    let n = q.vertex_count();
    let mut dims = vec![0usize; n];
    dims[word[t - 1]] = 1;
    let mut maps: Vec<Mat> = orient.iter().map(|&(s, tg)| Mat::zeros(dims[tg], dims[s])).collect();
    for &k in word[..t - 1].iter().rev() {
        let out: Vec<usize> = (0..orient.len()).filter(|&e| orient[e].0 == k || orient[e].1 == k).collect();
        if out.iter().any(|&e| orient[e].0 != k) {
            return Err(Error::InternalInconsistency(format!("vertex {} is not a source", q.label(k))));
        }
        let mut phi = Mat::zeros(0, dims[k]);
        let mut offsets = Vec::new();
        for &e in &out {
            offsets.push(phi.rows());
            phi = phi.vstack(&maps[e]);
        }
        let total = phi.rows();
        let pi = if dims[k] == 0 { Mat::identity(total) } else { phi.transpose().nullspace(p) };
        for (idx, &e) in out.iter().enumerate() {
            let j = orient[e].1;
            maps[e] = pi.col_block(offsets[idx], offsets[idx] + dims[j]);
            orient[e] = (j, k);
        }
        dims[k] = pi.rows();
    }
    let x = ConcreteRep { p, dims: DimVector(dims.iter().map(|&d| d as u32).collect()), maps };
    if &x.dims != ar.root(a) {
        return Err(Error::InternalInconsistency(format!(
            "reflection produced {} instead of {}",
            x.dims,
            ar.root(a)
        )));
    }
    Ok(x)
}

fn flip_at(orient: &mut [(usize, usize)], k: usize) {
    for e in orient.iter_mut() {
        if e.0 == k || e.1 == k {
            *e = (e.1, e.0);
        }
    }
}

/// Block direct sum of indecomposables, in canonical root order.
pub fn realize(ar: &ArData, m: &RepClass, p: u32) -> Result<ConcreteRep> {
    check_prime(p)?;
    m.check(ar)?;
    let indecs: Vec<Option<ConcreteRep>> = (0..ar.len())
        .map(|a| if m.0[a] > 0 { realize_indecomposable(ar, a, p).map(Some) } else { Ok(None) })
        .collect::<Result<_>>()?;
    Ok(realize_from(ar, m, p, &indecs))
}

pub(crate) fn realize_from(ar: &ArData, m: &RepClass, p: u32, indecs: &[Option<ConcreteRep>]) -> ConcreteRep {
    let q = ar.quiver();
    let mut x = ConcreteRep::zero(q, q.zero(), p);
    for (a, mult) in m.summands() {
        let xa = indecs[a].as_ref().expect("indecomposable realized");
        for _ in 0..mult {
            x = x.direct_sum(xa, q);
        }
    }
    x
}

/// Multiplicities from `h[b] = dim Hom(X_b, X)` by back-substitution.
pub fn solve_multiplicities(ar: &ArData, h: &[i64]) -> Result<RepClass> {
    let n = ar.len();
    let mut m = vec![0i64; n];
    for b in (0..n).rev() {
        let mut val = h[b];
        for a in b + 1..n {
            val -= m[a] * ar.hom(b, a) as i64;
        }
        if val < 0 {
            return Err(Error::InternalInconsistency(format!(
                "negative multiplicity for {} while classifying",
                ar.root(b)
            )));
        }
        m[b] = val;
    }
    Ok(RepClass(m.into_iter().map(|x| x as u32).collect()))
}

/// Decomposes a concrete representation into indecomposables.
pub fn classify(ar: &ArData, x: &ConcreteRep) -> Result<RepClass> {
    let q = ar.quiver();
    x.validate(q)?;
    let h = (0..ar.len())
        .map(|b| Ok(hom_dim(q, &realize_indecomposable(ar, b, x.p)?, x) as i64))
        .collect::<Result<Vec<_>>>()?;
    let m = solve_multiplicities(ar, &h)?;
    if m.dim(ar) != x.dims {
        return Err(Error::InternalInconsistency("classified summands do not add up".into()));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> ArData {
        ArData::knit(&Quiver::parse("1->2").unwrap()).unwrap()
    }

    fn class(ar: &ArData, parts: &[(&[u32], u32)]) -> RepClass {
        let mut m = RepClass::zero(ar);
        for (d, k) in parts {
            m.0[ar.root_index(&DimVector(d.to_vec())).unwrap()] += k;
        }
        m
    }

    #[test]
    fn a2_class_counts() {
        let ar = a2();
        assert_eq!(enumerate_classes(&ar, &DimVector(vec![1, 1])).unwrap().len(), 2);
        let c = enumerate_classes(&ar, &DimVector(vec![1, 2])).unwrap();
        assert_eq!(c, vec![class(&ar, &[(&[1, 1], 1), (&[0, 1], 1)]), class(&ar, &[(&[1, 0], 1), (&[0, 1], 2)])]);
        let a3 = ArData::knit(&Quiver::parse("1->2,2->3").unwrap()).unwrap();
        assert_eq!(enumerate_classes(&a3, &DimVector(vec![1, 1, 1])).unwrap().len(), 4);
    }

    #[test]
    fn a2_hom_ext_and_orbits() {
        let ar = a2();
        let e12 = class(&ar, &[(&[1, 1], 1)]);
        let ss = class(&ar, &[(&[1, 0], 1), (&[0, 1], 1)]);
        assert_eq!(hom_ext_classes(&ar, &e12, &ss).unwrap().0, 1);
        assert_eq!(hom_ext_classes(&ar, &ss, &ss).unwrap().1, 1);
        assert_eq!(end_and_orbit_dim(&ar, &e12), (1, 1));
        assert_eq!(end_and_orbit_dim(&ar, &ss), (2, 0));
        let m = class(&ar, &[(&[1, 1], 1), (&[0, 1], 1)]);
        assert_eq!(end_and_orbit_dim(&ar, &m), (3, 2));
        assert!(degenerates(&ar, &e12, &ss).unwrap());
        assert!(!degenerates(&ar, &ss, &e12).unwrap());
        assert!(!degenerates(&ar, &e12, &m).unwrap());
    }

    #[test]
    fn realize_small_examples() {
        let ar = a2();
        let e12 = class(&ar, &[(&[1, 1], 1)]);
        let x = realize(&ar, &e12, 2).unwrap();
        assert_eq!(x.maps[0], Mat::identity(1));
        let ss = class(&ar, &[(&[1, 0], 1), (&[0, 1], 1)]);
        let y = realize(&ar, &ss, 2).unwrap();
        assert!(y.maps[0].is_zero());
        assert_eq!(y.dims, DimVector(vec![1, 1]));

        let d4 = ArData::knit(&Quiver::parse("1->0,2->0,3->0").unwrap()).unwrap();
        let a = d4.root_index(&DimVector(vec![1, 1, 1, 1])).unwrap();
        let x = realize_indecomposable(&d4, a, 2).unwrap();
        assert!(x.maps.iter().all(|m| *m == Mat::identity(1)));
        assert_eq!(hom_dim(d4.quiver(), &x, &x), 1);
    }

    #[test]
    fn classify_by_hand() {
        let ar = a2();
        let q = ar.quiver();
        let x = ConcreteRep { p: 3, dims: DimVector(vec![1, 2]), maps: vec![Mat::from_rows(1, &[vec![1], vec![0]])] };
        assert_eq!(classify(&ar, &x).unwrap(), class(&ar, &[(&[1, 1], 1), (&[0, 1], 1)]));
        let z = ConcreteRep::zero(q, DimVector(vec![1, 1]), 2);
        assert_eq!(classify(&ar, &z).unwrap(), class(&ar, &[(&[1, 0], 1), (&[0, 1], 1)]));
    }

    #[test]
    fn indecomposables_are_bricks_with_table_homs() {
        for spec in ["1->2,2->3", "1->2,3->2", "2->1,2->3", "1->0,2->0,3->0", "0->1,2->0,0->3", "1->2,2->3,3->4,3->5"] {
            let ar = ArData::knit(&Quiver::parse(spec).unwrap()).unwrap();
            for p in [2, 3] {
                let xs: Vec<ConcreteRep> =
                    (0..ar.len()).map(|a| realize_indecomposable(&ar, a, p).unwrap()).collect();
                for a in 0..ar.len() {
                    for b in 0..ar.len() {
                        assert_eq!(hom_dim(ar.quiver(), &xs[a], &xs[b]), ar.hom(a, b), "{spec} p={p} {a} {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn json_roundtrip() {
        let ar = a2();
        let x = realize(&ar, &class(&ar, &[(&[1, 1], 1), (&[0, 1], 1)]), 5).unwrap();
        let js = x.to_json(ar.quiver());
        assert_eq!(ConcreteRep::from_json(&js, ar.quiver()).unwrap(), x);
    }
}
