//! Auslander-Reiten theory of a Dynkin quiver.
//!
//! The AR quiver is knitted from the projectives: the module `tau^{-r} P_k`
//! sits at `(k, r)`, and the mesh starting at a non-injective module gives
//! the dimension vector of its inverse translate. `Hom(X, -)` is then
//! computed by additivity over meshes, so no field is involved anywhere in
//! this module.
//!
//! Roots are stored in the *canonical order*: a topological order of the AR
//! quiver in which, among the currently available modules, the one with the
//! lexicographically smallest dimension vector comes first. Every table and
//! matrix in the crate is indexed by this order.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::quiver::{DimVector, Quiver, VertexOrder};

/// Knitted AR quiver with Hom/Ext tables.
#[derive(Debug, Clone)]
pub struct ArData {
    quiver: Quiver,
    order: VertexOrder,
    roots: Vec<DimVector>,
    index: HashMap<DimVector, usize>,
    tau: Vec<Option<usize>>,
    tau_inv: Vec<Option<usize>>,
    projective: Vec<bool>,
    injective: Vec<bool>,
    /// Irreducible maps between indecomposables.
    arrows: Vec<(usize, usize)>,
    /// `(vertex k, level r)` with `X = tau^{-r} P_k`.
    position: Vec<(usize, usize)>,
    hom: Vec<Vec<u32>>,
    reach: Vec<Vec<bool>>,
    /// Admissible sink sequence and, per root, the length of the prefix whose
    /// reflections carry the simple at its last letter to the root.
    sink_word: Vec<usize>,
    word_len: Vec<usize>,
}

struct Knitted {
    dims: Vec<Vec<i64>>,
    position: Vec<(usize, usize)>,
    tau: Vec<Option<usize>>,
    arrows: Vec<(usize, usize)>,
}

impl ArData {
    /// Knits the AR quiver and fills every table.
    pub fn knit(q: &Quiver) -> Result<ArData> {
        let order = q.admissible_vertex_order();
        let n = q.vertex_count();
        let knitted = knit_modules(q, &order)?;
        let count = knitted.dims.len();

        let expected: usize = q.types().iter().map(|t| t.root_count()).sum();
        if count != expected {
            return Err(Error::InternalInconsistency(format!(
                "knitting produced {count} indecomposables, expected {expected}"
            )));
        }

        // Hom(X, -) by mesh additivity, in knitting order.
        let mut preds = vec![Vec::new(); count];
        for &(a, b) in &knitted.arrows {
            preds[b].push(a);
        }
        let mut hom_k = vec![vec![0u32; count]; count];
        for x in 0..count {
            let mut h = vec![0i64; count];
            for y in 0..count {
                let val = if y == x {
                    1
                } else {
                    let s: i64 = preds[y].iter().map(|&z| h[z]).sum();
                    match knitted.tau[y] {
                        Some(t) => s - h[t],
                        None => s,
                    }
                };
                if val < 0 {
                    return Err(Error::InternalInconsistency(format!(
                        "negative Hom count in mesh at module {y}"
                    )));
                }
                h[y] = val;
            }
            for y in 0..count {
                hom_k[x][y] = h[y] as u32;
            }
        }

        // Canonical order: Kahn's algorithm, lexicographically smallest first.
        let mut indeg = vec![0usize; count];
        for &(_, b) in &knitted.arrows {
            indeg[b] += 1;
        }
        let coords: Vec<DimVector> = knitted
            .dims
            .iter()
            .map(|d| DimVector(d.iter().map(|&x| x as u32).collect()))
            .collect();
        let mut avail: BTreeSet<(DimVector, usize)> = (0..count)
            .filter(|&m| indeg[m] == 0)
            .map(|m| (coords[m].clone(), m))
            .collect();
        let mut perm = Vec::with_capacity(count);
        while let Some(first) = avail.iter().next().cloned() {
            avail.remove(&first);
            let m = first.1;
            perm.push(m);
            for &(a, b) in &knitted.arrows {
                if a == m {
                    indeg[b] -= 1;
                    if indeg[b] == 0 {
                        avail.insert((coords[b].clone(), b));
                    }
                }
            }
        }
        let mut new_of = vec![0; count];
        for (new, &old) in perm.iter().enumerate() {
            new_of[old] = new;
        }

        let roots: Vec<DimVector> = perm.iter().map(|&m| coords[m].clone()).collect();
        let mut index = HashMap::new();
        for (i, r) in roots.iter().enumerate() {
            if index.insert(r.clone(), i).is_some() {
                return Err(Error::InternalInconsistency(format!("root {r} knitted twice")));
            }
        }
        let tau: Vec<Option<usize>> =
            perm.iter().map(|&m| knitted.tau[m].map(|t| new_of[t])).collect();
        let mut tau_inv = vec![None; count];
        for (i, t) in tau.iter().enumerate() {
            if let Some(t) = *t {
                tau_inv[t] = Some(i);
            }
        }
        let position: Vec<(usize, usize)> = perm.iter().map(|&m| knitted.position[m]).collect();
        let projective: Vec<bool> = position.iter().map(|&(_, r)| r == 0).collect();
        let injective: Vec<bool> = tau_inv.iter().map(Option::is_none).collect();
        let arrows: Vec<(usize, usize)> =
            knitted.arrows.iter().map(|&(a, b)| (new_of[a], new_of[b])).collect();
        let hom: Vec<Vec<u32>> = perm
            .iter()
            .map(|&a| perm.iter().map(|&b| hom_k[a][b]).collect())
            .collect();

        let mut reach = vec![vec![false; count]; count];
        for (i, row) in reach.iter_mut().enumerate() {
            row[i] = true;
        }
        // arrows go forward in the canonical order, so one backward sweep closes them
        for a in (0..count).rev() {
            let succ: Vec<usize> = arrows.iter().filter(|&&(s, _)| s == a).map(|&(_, t)| t).collect();
            for t in succ {
                if t <= a {
                    return Err(Error::InternalInconsistency("AR arrow against canonical order".into()));
                }
                let row_t = reach[t].clone();
                for (x, &r) in row_t.iter().enumerate() {
                    if r {
                        reach[a][x] = true;
                    }
                }
            }
        }

        let (sink_word, word_len) = reflection_words(q, &order, &index, n)?;

        let ar = ArData {
            quiver: q.clone(),
            order,
            roots,
            index,
            tau,
            tau_inv,
            projective,
            injective,
            arrows,
            position,
            hom,
            reach,
            sink_word,
            word_len,
        };
        ar.check_invariants()?;
        Ok(ar)
    }

    fn check_invariants(&self) -> Result<()> {
        let n = self.len();
        for a in 0..n {
            if self.hom[a][a] != 1 || self.ext(a, a) != 0 {
                return Err(Error::InternalInconsistency(format!("root {a} is not a brick without self-extensions")));
            }
            for b in 0..n {
                if a != b && self.hom[a][b] != 0 && self.ext(a, b) != 0 {
                    return Err(Error::InternalInconsistency(format!("both Hom and Ext nonzero for ({a},{b})")));
                }
                if self.hom[a][b] != 0 && !self.reach[a][b] {
                    return Err(Error::InternalInconsistency(format!("Hom({a},{b}) nonzero against the order")));
                }
            }
        }
        Ok(())
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    /// The admissible vertex order used for knitting and monomial words.
    pub fn vertex_order(&self) -> &VertexOrder {
        &self.order
    }

    /// Number of positive roots.
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn roots(&self) -> &[DimVector] {
        &self.roots
    }

    pub fn root(&self, a: usize) -> &DimVector {
        &self.roots[a]
    }

    pub fn root_index(&self, coords: &DimVector) -> Result<usize> {
        self.index
            .get(coords)
            .copied()
            .ok_or_else(|| Error::UnknownRoot(coords.to_string()))
    }

    /// Index of the simple root at vertex `v`.
    pub fn simple(&self, v: usize) -> usize {
        self.index[&self.quiver.unit(v)]
    }

    pub fn tau(&self, a: usize) -> Option<usize> {
        self.tau[a]
    }

    pub fn tau_inverse(&self, a: usize) -> Option<usize> {
        self.tau_inv[a]
    }

    pub fn is_projective(&self, a: usize) -> bool {
        self.projective[a]
    }

    pub fn is_injective(&self, a: usize) -> bool {
        self.injective[a]
    }

    /// `(k, r)` such that the root is the dimension vector of `tau^{-r} P_k`.
    pub fn position(&self, a: usize) -> (usize, usize) {
        self.position[a]
    }

    /// Irreducible maps, as pairs of root indices.
    pub fn ar_arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn hom(&self, a: usize, b: usize) -> u32 {
        self.hom[a][b]
    }

    /// `dim Ext^1(X_a, X_b) = dim Hom(X_b, tau X_a)`.
    pub fn ext(&self, a: usize, b: usize) -> u32 {
        match self.tau[a] {
            Some(t) => self.hom[b][t],
            None => 0,
        }
    }

    fn check(&self, a: usize) -> Result<()> {
        if a >= self.len() {
            return Err(Error::UnknownRoot(format!("root index {a}")));
        }
        Ok(())
    }

    /// `(dim Hom, dim Ext^1)` between two indecomposables.
    pub fn hom_ext_indec(&self, a: usize, b: usize) -> Result<(u32, u32)> {
        self.check(a)?;
        self.check(b)?;
        Ok((self.hom(a, b), self.ext(a, b)))
    }

    /// The order generated by irreducible maps (reflexive).
    pub fn precedes(&self, a: usize, b: usize) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.reach[a][b])
    }

    /// Sink sequence used by the reflection-functor construction.
    pub(crate) fn sink_word(&self) -> &[usize] {
        &self.sink_word
    }

    /// The root is obtained by reflecting the simple at `sink_word[len - 1]`
    /// back through `sink_word[..len - 1]`.
    pub(crate) fn word_len(&self, a: usize) -> usize {
        self.word_len[a]
    }
}

fn knit_modules(q: &Quiver, order: &VertexOrder) -> Result<Knitted> {
    let n = q.vertex_count();
    let arrows = q.arrows();
    // (P_i)_j = number of paths i -> j
    let pos = order.positions();
    let mut proj = vec![vec![0i64; n]; n];
    for i in 0..n {
        proj[i][i] = 1;
        for &j in &order.0[pos[i] + 1..] {
            proj[i][j] = arrows.iter().filter(|&&(_, t)| t == j).map(|&(s, _)| proj[i][s]).sum();
        }
    }
    let inj: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| proj[j][i]).collect()).collect();

    let rev: Vec<usize> = order.0.iter().rev().copied().collect();
    let mut dims: Vec<Vec<i64>> = Vec::new();
    let mut position = Vec::new();
    let mut tau = Vec::new();
    let mut at: HashMap<(usize, usize), usize> = HashMap::new();
    for &k in &rev {
        at.insert((k, 0), dims.len());
        dims.push(proj[k].clone());
        position.push((k, 0));
        tau.push(None);
    }
    let mut level = 0;
    loop {
        let mut added = false;
        for &k in &rev {
            let Some(&x) = at.get(&(k, level)) else { continue };
            if inj.contains(&dims[x]) {
                continue;
            }
            let mut d = vec![0i64; n];
            for &(s, t) in arrows {
                if t == k {
                    if let Some(&m) = at.get(&(s, level)) {
                        add_into(&mut d, &dims[m]);
                    }
                }
                if s == k {
                    if let Some(&m) = at.get(&(t, level + 1)) {
                        add_into(&mut d, &dims[m]);
                    }
                }
            }
            for (di, xi) in d.iter_mut().zip(&dims[x]) {
                *di -= xi;
            }
            if d.iter().any(|&c| c < 0) || d.iter().all(|&c| c == 0) {
                return Err(Error::InternalInconsistency(format!(
                    "mesh at tau^-{level} P_{} produced {d:?}",
                    q.label(k)
                )));
            }
            at.insert((k, level + 1), dims.len());
            dims.push(d);
            position.push((k, level + 1));
            tau.push(Some(x));
            added = true;
        }
        if !added {
            break;
        }
        level += 1;
        if level > 4 * n + 4 {
            return Err(Error::InternalInconsistency("knitting does not terminate".into()));
        }
    }

    let mut ar_arrows = Vec::new();
    for (m, &(k, r)) in position.iter().enumerate() {
        for &(s, t) in arrows {
            if t == k {
                if let Some(&y) = at.get(&(s, r)) {
                    ar_arrows.push((m, y));
                }
            }
            if s == k {
                if let Some(&y) = at.get(&(t, r + 1)) {
                    ar_arrows.push((m, y));
                }
            }
        }
    }
    Ok(Knitted { dims, position, tau, arrows: ar_arrows })
}

fn add_into(acc: &mut [i64], x: &[i64]) {
    for (a, b) in acc.iter_mut().zip(x) {
        *a += b;
    }
}

/// Simple reflection `s_k` on the root lattice.
pub(crate) fn reflect(q: &Quiver, k: usize, x: &mut [i64]) {
    let nb: i64 = q
        .arrows()
        .iter()
        .filter_map(|&(s, t)| if s == k { Some(t) } else if t == k { Some(s) } else { None })
        .map(|j| x[j])
        .sum();
    x[k] = nb - x[k];
}

/// Repeats the sink sequence (reverse admissible order) and records, for each
/// root, the first prefix `k_1 .. k_t` with `s_{k_1} .. s_{k_{t-1}} (alpha_{k_t})`
/// equal to it.
fn reflection_words(
    q: &Quiver,
    order: &VertexOrder,
    index: &HashMap<DimVector, usize>,
    n: usize,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let rev: Vec<usize> = order.0.iter().rev().copied().collect();
    let mut word = Vec::new();
    let mut len = vec![0usize; index.len()];
    let mut found = 0;
    let cap = n * (index.len() + 2);
    while found < index.len() {
        if word.len() >= cap {
            return Err(Error::InternalInconsistency("reflection word does not reach every root".into()));
        }
        let k = rev[word.len() % n];
        word.push(k);
        let mut x = vec![0i64; n];
        x[k] = 1;
        for &s in word[..word.len() - 1].iter().rev() {
            reflect(q, s, &mut x);
        }
        if x.iter().all(|&c| c >= 0) {
            let d = DimVector(x.iter().map(|&c| c as u32).collect());
            if let Some(&a) = index.get(&d) {
                if len[a] == 0 {
                    len[a] = word.len();
                    found += 1;
                }
            }
        }
    }
    let max = len.iter().copied().max().unwrap_or(0);
    word.truncate(max);
    Ok((word, len))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ar(spec: &str) -> ArData {
        ArData::knit(&Quiver::parse(spec).unwrap()).unwrap()
    }

    #[test]
    fn a2_tables() {
        let ar = ar("1->2");
        let q = ar.quiver();
        let a1 = ar.root_index(&q.unit(0)).unwrap();
        let a2 = ar.root_index(&q.unit(1)).unwrap();
        let a12 = ar.root_index(&DimVector(vec![1, 1])).unwrap();
        assert_eq!(ar.roots(), [DimVector(vec![0, 1]), DimVector(vec![1, 1]), DimVector(vec![1, 0])]);
        assert!(ar.is_projective(a12) && ar.is_projective(a2) && !ar.is_projective(a1));
        assert!(ar.is_injective(a1) && ar.is_injective(a12) && !ar.is_injective(a2));
        assert_eq!(ar.tau(a1), Some(a2));
        assert_eq!(ar.hom_ext_indec(a1, a2).unwrap(), (0, 1));
        assert_eq!(ar.hom_ext_indec(a12, a1).unwrap(), (1, 0));
        assert_eq!(ar.hom_ext_indec(a2, a1).unwrap(), (0, 0));
        assert!(ar.precedes(a2, a12).unwrap());
        assert!(!ar.precedes(a1, a2).unwrap());
        for a in 0..3 {
            for b in 0..3 {
                if (a, b) != (a1, a2) {
                    assert_eq!(ar.ext(a, b), 0);
                }
            }
        }
    }

    #[test]
    fn root_counts() {
        for (spec, count) in [
            ("1->2,2->3,3->4", 10),
            ("1->0,2->0,3->0", 12),
            ("1->2,2->3,3->4,3->5", 20),
            ("1->2,2->3,3->4,4->5,3->6", 36),
            ("1->2,2->3,3->4,4->5,5->6,3->7", 63),
            ("1->2,2->3,3->4,4->5,5->6,6->7,3->8", 120),
        ] {
            assert_eq!(ar(spec).len(), count, "{spec}");
        }
    }

    #[test]
    fn d4_highest_root_present() {
        let ar = ar("1->0,2->0,3->0");
        assert!(ar.root_index(&DimVector(vec![2, 1, 1, 1])).is_ok());
    }

    #[test]
    fn equioriented_an_roots_are_intervals() {
        let ar = ar("1->2,2->3,3->4");
        for i in 0..4 {
            for j in i..4 {
                let mut d = vec![0; 4];
                d[i..=j].iter_mut().for_each(|x| *x = 1);
                assert!(ar.root_index(&DimVector(d)).is_ok());
            }
        }
    }

    #[test]
    fn hom_minus_ext_is_euler_form() {
        for spec in ["1->2", "1->2,2->3", "1->2,3->2", "2->1,2->3", "1->2,2->3,3->4", "1->0,2->0,3->0", "0->1,2->0,0->3"] {
            let ar = ar(spec);
            let q = ar.quiver();
            for a in 0..ar.len() {
                for b in 0..ar.len() {
                    let lhs = ar.hom(a, b) as i64 - ar.ext(a, b) as i64;
                    assert_eq!(lhs, q.euler_form(ar.root(a), ar.root(b)).unwrap(), "{spec} {a} {b}");
                    if a != b && ar.ext(a, b) != 0 {
                        assert!(!ar.precedes(a, b).unwrap());
                    }
                }
                if ar.is_projective(a) {
                    assert!((0..ar.len()).all(|b| ar.ext(a, b) == 0));
                }
            }
        }
    }

    #[test]
    fn unknown_root() {
        let ar = ar("1->2");
        assert!(matches!(ar.hom_ext_indec(0, 7), Err(Error::UnknownRoot(_))));
        assert!(matches!(ar.root_index(&DimVector(vec![2, 1])), Err(Error::UnknownRoot(_))));
    }
}
