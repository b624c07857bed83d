//! Hall polynomials by point counting over several prime fields.
//!
//! The basic quantity is the number of hyperplanes `W` of `Y_i` containing the
//! images of all arrows into `i`; each such `W` spans a subrepresentation `U`
//! with `Y/U = E_i`. For a functional `phi` cutting out `W`, a map
//! `h: X_b -> Y` lands in `U` iff `phi o h_i = 0`, so `dim Hom(X_b, U)` is a
//! rank computation on a precomputed basis of `Hom(X_b, Y)` and `U` is
//! classified without building it. Counts at a few primes are interpolated
//! under the degree bound `hom(U, Y) - end(U)`.
//!
//! Semisimple quotients `Y/U = E_i^a` are counted through chains of such
//! steps: every `U` sits at the bottom of exactly `[a]_q!` chains.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use crate::ar::ArData;
use crate::error::{Error, Result};
use crate::fp::{for_each_between, for_each_subspace, Mat, PRIMES};
use crate::poly::CountPolynomial;
use crate::quiver::{DimVector, Quiver};
use crate::reps::{
    hom_classes, hom_space, realize_from, realize_indecomposable, solve_multiplicities, ClassTable,
    ConcreteRep, RepClass,
};

type ClassPolys = BTreeMap<RepClass, CountPolynomial>;

/// Shared state for all counting operations on one quiver: the AR data plus
/// write-once caches. Safe to share between threads.
#[derive(Debug)]
pub struct Engine {
    ar: ArData,
    indec: Mutex<HashMap<u32, Arc<Vec<ConcreteRep>>>>,
    tables: Mutex<HashMap<DimVector, Arc<ClassTable>>>,
    steps: Mutex<HashMap<(RepClass, usize), Arc<ClassPolys>>>,
    chains: Mutex<HashMap<(RepClass, usize, u32), Arc<ClassPolys>>>,
    semisimple: Mutex<HashMap<(RepClass, usize, u32), Arc<ClassPolys>>>,
    general: Mutex<HashMap<(RepClass, DimVector), Arc<BTreeMap<(RepClass, RepClass), CountPolynomial>>>>,
}

fn cached<K, V, F>(cache: &Mutex<HashMap<K, Arc<V>>>, key: K, compute: F) -> Result<Arc<V>>
where
    K: std::hash::Hash + Eq + Clone,
    F: FnOnce() -> Result<V>,
{
    if let Some(v) = cache.lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let v = Arc::new(compute()?);
    Ok(cache.lock().unwrap().entry(key).or_insert(v).clone())
}

/// How many primes are needed for degree `d` and whether one is left over
/// for a check.
fn primes_for(degree: i64, what: &str) -> Result<&'static [u32]> {
    if degree < 0 {
        return Ok(&PRIMES[..1]);
    }
    let need = degree as usize + 1;
    if need > PRIMES.len() {
        return Err(Error::LimitExceeded(format!(
            "{what}: degree bound {degree} needs more than {} sample primes",
            PRIMES.len()
        )));
    }
    Ok(&PRIMES[..(need + 1).min(PRIMES.len())])
}

/// Interpolates `values[k]` (taken at `PRIMES[k]`) under a degree bound and
/// checks any extra values.
fn fit(values: &[i128], degree: i64, what: &str) -> Result<CountPolynomial> {
    let poly = if degree < 0 {
        CountPolynomial::zero()
    } else {
        let n = degree as usize + 1;
        let pts: Vec<(u32, i128)> = PRIMES.iter().zip(values).take(n).map(|(&p, &v)| (p, v)).collect();
        CountPolynomial::interpolate(&pts)?
    };
    for (&p, &v) in PRIMES.iter().zip(values) {
        if poly.eval(p as i128) != v {
            return Err(Error::InterpolationMismatch(format!(
                "{what}: count {v} at q={p} is not matched by {poly} (degree bound {degree})"
            )));
        }
    }
    Ok(poly)
}

impl Engine {
    pub fn new(q: &Quiver) -> Result<Engine> {
        Ok(Engine::from_ar(ArData::knit(q)?))
    }

    pub fn from_ar(ar: ArData) -> Engine {
        Engine {
            ar,
            indec: Mutex::default(),
            tables: Mutex::default(),
            steps: Mutex::default(),
            chains: Mutex::default(),
            semisimple: Mutex::default(),
            general: Mutex::default(),
        }
    }

    pub fn ar(&self) -> &ArData {
        &self.ar
    }

    pub fn quiver(&self) -> &Quiver {
        self.ar.quiver()
    }

    /// Classes of dimension vector `d`, in canonical class order.
    pub fn table(&self, d: &DimVector) -> Result<Arc<ClassTable>> {
        cached(&self.tables, d.clone(), || ClassTable::new(&self.ar, d))
    }

    pub fn indecomposables(&self, p: u32) -> Result<Arc<Vec<ConcreteRep>>> {
        crate::fp::check_prime(p)?;
        cached(&self.indec, p, || (0..self.ar.len()).map(|a| realize_indecomposable(&self.ar, a, p)).collect())
    }

    pub fn realize(&self, m: &RepClass, p: u32) -> Result<ConcreteRep> {
        let ind = self.indecomposables(p)?;
        let opts: Vec<Option<ConcreteRep>> = ind.iter().cloned().map(Some).collect();
        if m.0.len() != self.ar.len() {
            return Err(Error::MismatchedQuiver("class does not belong to this quiver".into()));
        }
        Ok(realize_from(&self.ar, m, p, &opts))
    }

    /// Classifies a concrete representation using cached indecomposables.
    pub fn classify(&self, x: &ConcreteRep) -> Result<RepClass> {
        let q = self.quiver();
        x.validate(q)?;
        let ind = self.indecomposables(x.p)?;
        let h: Vec<i64> = ind.iter().map(|xb| hom_space(q, xb, x).len() as i64).collect();
        let m = solve_multiplicities(&self.ar, &h)?;
        if m.dim(&self.ar) != x.dims {
            return Err(Error::InternalInconsistency("classified summands do not add up".into()));
        }
        Ok(m)
    }

    /// Hall polynomials `F^Y_{E_i, U}` for all `U`: the number of
    /// subrepresentations `U' = U` of `Y` with `Y/U' = E_i`. Only nonzero
    /// entries are kept.
    pub fn step(&self, y: &RepClass, i: usize) -> Result<Arc<ClassPolys>> {
        cached(&self.steps, (y.clone(), i), || self.compute_step(y, i))
    }

    fn compute_step(&self, y: &RepClass, i: usize) -> Result<ClassPolys> {
        let ar = &self.ar;
        let q = self.quiver();
        let ei = RepClass::simple_power(ar, i, 1);
        let m = hom_classes(ar, y, &ei);
        let mut out = ClassPolys::new();
        if m == 0 {
            return Ok(out);
        }
        let dy = y.dim(ar);
        let mut dw = dy.clone();
        dw.0[i] -= 1;
        let table = self.table(&dw)?;
        if table.len() == 1 {
            out.insert(table.classes[0].clone(), CountPolynomial::q_integer(m));
            return Ok(out);
        }
        let bounds: Vec<i64> = table
            .classes
            .iter()
            .map(|u| {
                let b = hom_classes(ar, u, y) as i64 - hom_classes(ar, u, u) as i64;
                b.min(m as i64 - 1)
            })
            .collect();
        let max_bound = bounds.iter().copied().max().unwrap_or(-1);
        let primes = primes_for(max_bound, "hyperplane count")?;

        let mut counts = vec![Vec::new(); table.len()];
        for &p in primes {
            let ind = self.indecomposables(p)?;
            let yrep = self.realize(y, p)?;
            let yi = dy[i] as usize;
            // images of arrows into i, as rows
            let mut im = Mat::zeros(0, yi);
            for (a, &(_, t)) in q.arrows().iter().enumerate() {
                if t == i {
                    im = im.vstack(&yrep.maps[a].transpose());
                }
            }
            let ann = im.nullspace(p);
            if ann.rows() != m as usize {
                return Err(Error::InternalInconsistency("cokernel dimension differs from hom(Y, E_i)".into()));
            }
            // per root: hom(X_b, Y) and the stacked i-components [h^1_i | h^2_i | ...]
            let homs: Vec<(usize, usize, Mat)> = ind
                .iter()
                .map(|xb| {
                    let basis = hom_space(q, xb, &yrep);
                    let xbi = xb.dims[i] as usize;
                    let mut stacked = Mat::zeros(yi, basis.len() * xbi);
                    for (k, h) in basis.iter().enumerate() {
                        for r in 0..yi {
                            for c in 0..xbi {
                                stacked.set(r, k * xbi + c, h[i].get(r, c));
                            }
                        }
                    }
                    (basis.len(), xbi, stacked)
                })
                .collect();
            let mut cnt = vec![0i128; table.len()];
            for_each_subspace(m as usize, 1, p, |line| {
                let phi = line.mul(&ann, p);
                let h: Vec<i64> = homs
                    .iter()
                    .map(|(nh, xbi, stacked)| {
                        if *nh == 0 || *xbi == 0 {
                            return *nh as i64;
                        }
                        let row = phi.mul(stacked, p);
                        let mut mat = Mat::zeros(*nh, *xbi);
                        for k in 0..*nh {
                            for c in 0..*xbi {
                                mat.set(k, c, row.get(0, k * xbi + c));
                            }
                        }
                        (*nh - mat.rank(p)) as i64
                    })
                    .collect();
                let u = solve_multiplicities(ar, &h)?;
                let idx = table
                    .position(&u)
                    .ok_or_else(|| Error::InternalInconsistency("hyperplane gave a class of the wrong dimension".into()))?;
                cnt[idx] += 1;
                Ok(())
            })?;
            for (k, c) in cnt.into_iter().enumerate() {
                counts[k].push(c);
            }
        }
        let mut total = CountPolynomial::zero();
        for (k, u) in table.classes.iter().enumerate() {
            let poly = fit(&counts[k], bounds[k], "hyperplane count")?;
            total = &total + &poly;
            if !poly.is_zero() {
                out.insert(u.clone(), poly);
            }
        }
        if total != CountPolynomial::q_integer(m) {
            return Err(Error::InternalInconsistency(format!("hyperplane counts add up to {total}, expected [{m}]_q")));
        }
        Ok(out)
    }

    /// Number of chains `Y = U_0 > U_1 > ... > U_a` with every quotient
    /// `E_i`, by the class of `U_a`.
    fn chains(&self, y: &RepClass, i: usize, a: u32) -> Result<Arc<ClassPolys>> {
        if let Some(v) = self.chains.lock().unwrap().get(&(y.clone(), i, a)) {
            return Ok(v.clone());
        }
        let mut out = ClassPolys::new();
        if a == 0 {
            out.insert(y.clone(), CountPolynomial::one());
        } else {
            let step = self.step(y, i)?;
            for (u, pu) in step.iter() {
                let rest = self.chains(u, i, a - 1)?;
                for (n, pn) in rest.iter() {
                    let e = out.entry(n.clone()).or_default();
                    *e = &*e + &(pu * pn);
                }
            }
        }
        let v = Arc::new(out);
        Ok(self.chains.lock().unwrap().entry((y.clone(), i, a)).or_insert(v).clone())
    }

    /// Hall polynomials `F^Y_{E_i^a, N}` for all `N` (nonzero entries only).
    pub fn semisimple_quotients(&self, y: &RepClass, i: usize, a: u32) -> Result<Arc<ClassPolys>> {
        cached(&self.semisimple, (y.clone(), i, a), || {
            let fact = CountPolynomial::q_factorial(a);
            let chains = self.chains(y, i, a)?;
            let mut out = ClassPolys::new();
            for (n, c) in chains.iter() {
                let p = c.div_exact(&fact).ok_or_else(|| {
                    Error::InternalInconsistency(format!("chain count {c} not divisible by [{a}]_q!"))
                })?;
                if !p.is_zero() {
                    out.insert(n.clone(), p);
                }
            }
            Ok(out)
        })
    }

    /// The Hall polynomial `F^X_{quot, sub}`: subrepresentations of `X`
    /// isomorphic to `sub` with quotient isomorphic to `quot`.
    pub fn hall_number(&self, x: &RepClass, quot: &RepClass, sub: &RepClass) -> Result<CountPolynomial> {
        let ar = &self.ar;
        for c in [x, quot, sub] {
            if c.0.len() != ar.len() {
                return Err(Error::MismatchedQuiver("class does not belong to this quiver".into()));
            }
        }
        let (dx, dq, ds) = (x.dim(ar), quot.dim(ar), sub.dim(ar));
        if &dq + &ds != dx {
            return Err(Error::WeightMismatch(format!("{dq} + {ds} is not {dx}")));
        }
        if quot.is_zero() {
            return Ok(if sub == x { CountPolynomial::one() } else { CountPolynomial::zero() });
        }
        let support: Vec<usize> = dq.support().collect();
        if support.len() == 1 {
            let i = support[0];
            let a = dq[i];
            if *quot == RepClass::simple_power(ar, i, a) {
                let ss = self.semisimple_quotients(x, i, a)?;
                return Ok(ss.get(sub).cloned().unwrap_or_default());
            }
        }
        let all = self.subrep_counts(x, &ds)?;
        Ok(all.get(&(quot.clone(), sub.clone())).cloned().unwrap_or_default())
    }

    /// All Hall polynomials `F^X_{Q, S}` with `dim S = ds`, by direct
    /// enumeration of subrepresentations.
    fn subrep_counts(
        &self,
        x: &RepClass,
        ds: &DimVector,
    ) -> Result<Arc<BTreeMap<(RepClass, RepClass), CountPolynomial>>> {
        cached(&self.general, (x.clone(), ds.clone()), || {
            let ar = &self.ar;
            let q = self.quiver();
            let dx = x.dim(ar);
            let dq = dx
                .checked_sub(ds)
                .ok_or_else(|| Error::WeightMismatch(format!("{ds} does not fit in {dx}")))?;
            let subs = self.table(ds)?;
            let quots = self.table(&dq)?;
            let grass: i64 = (0..dx.len()).map(|v| ds[v] as i64 * dq[v] as i64).sum();
            let mut bounds = BTreeMap::new();
            for qc in &quots.classes {
                for sc in &subs.classes {
                    let b = grass
                        .min(hom_classes(ar, x, qc) as i64 - hom_classes(ar, qc, qc) as i64)
                        .min(hom_classes(ar, sc, x) as i64 - hom_classes(ar, sc, sc) as i64);
                    bounds.insert((qc.clone(), sc.clone()), b);
                }
            }
            let max_bound = bounds.values().copied().max().unwrap_or(-1);
            let primes = primes_for(max_bound, "subrepresentation count")?;
            let mut counts: BTreeMap<(RepClass, RepClass), Vec<i128>> =
                bounds.keys().map(|k| (k.clone(), Vec::new())).collect();
            for &p in primes {
                let xrep = self.realize(x, p)?;
                let ind = self.indecomposables(p)?;
                let into: Vec<Vec<Vec<Mat>>> = ind.iter().map(|xb| hom_space(q, xb, &xrep)).collect();
                let out_of: Vec<Vec<Vec<Mat>>> = ind.iter().map(|xb| hom_space(q, &xrep, xb)).collect();
                let mut local: BTreeMap<(RepClass, RepClass), i128> = BTreeMap::new();
                let order = q.admissible_vertex_order().0;
                let mut chosen: Vec<Option<Mat>> = vec![None; dx.len()];
                enumerate_subreps(q, &xrep, ds, &order, 0, &mut chosen, &mut |u| {
                    let (hs, hq) = sub_quot_homs(q, p, u, &into, &out_of);
                    let sc = solve_multiplicities(ar, &hs)?;
                    let qc = solve_multiplicities_dual(ar, &hq)?;
                    *local.entry((qc, sc)).or_default() += 1;
                    Ok(())
                })?;
                for (k, v) in counts.iter_mut() {
                    v.push(local.remove(k).unwrap_or(0));
                }
                if let Some(k) = local.keys().next() {
                    return Err(Error::InternalInconsistency(format!(
                        "subrepresentation of unexpected type {}",
                        k.1.display(ar)
                    )));
                }
            }
            let mut out = BTreeMap::new();
            for (k, vals) in counts {
                let poly = fit(&vals, bounds[&k], "subrepresentation count")?;
                if !poly.is_zero() {
                    out.insert(k, poly);
                }
            }
            Ok(out)
        })
    }
}

/// Multiplicities from `h[b] = dim Hom(X, X_b)`; the Hom table is lower
/// triangular in this direction, so solve from the first root on.
pub fn solve_multiplicities_dual(ar: &ArData, h: &[i64]) -> Result<RepClass> {
    let n = ar.len();
    let mut m = vec![0i64; n];
    for b in 0..n {
        let mut val = h[b];
        for a in 0..b {
            val -= m[a] * ar.hom(a, b) as i64;
        }
        if val < 0 {
            return Err(Error::InternalInconsistency("negative multiplicity while classifying a quotient".into()));
        }
        m[b] = val;
    }
    Ok(RepClass(m.into_iter().map(|x| x as u32).collect()))
}

/// Calls `f` on every subrepresentation of `x` with dimension vector `d`,
/// given by row bases per vertex.
fn enumerate_subreps(
    q: &Quiver,
    x: &ConcreteRep,
    d: &DimVector,
    order: &[usize],
    pos: usize,
    chosen: &mut Vec<Option<Mat>>,
    f: &mut dyn FnMut(&[Mat]) -> Result<()>,
) -> Result<()> {
    let p = x.p;
    if pos == order.len() {
        let u: Vec<Mat> = chosen.iter().map(|m| m.clone().expect("all vertices chosen")).collect();
        return f(&u);
    }
    let v = order[pos];
    let xv = x.dims[v] as usize;
    let mut s = Mat::zeros(0, xv);
    for (a, &(src, t)) in q.arrows().iter().enumerate() {
        if t == v {
            let us = chosen[src].as_ref().expect("sources come first");
            s = s.vstack(&us.mul(&x.maps[a].transpose(), p));
        }
    }
    let full = Mat::identity(xv);
    let mut options = Vec::new();
    for_each_between(&s, &full, d[v] as usize, p, |w| {
        options.push(w.clone());
        Ok(())
    })?;
    for w in options {
        chosen[v] = Some(w);
        enumerate_subreps(q, x, d, order, pos + 1, chosen, f)?;
    }
    chosen[v] = None;
    Ok(())
}

/// `(dim Hom(X_b, U), dim Hom(X/U, X_b))` for every root `b`.
fn sub_quot_homs(
    q: &Quiver,
    p: u32,
    u: &[Mat],
    into: &[Vec<Vec<Mat>>],
    out_of: &[Vec<Vec<Mat>>],
) -> (Vec<i64>, Vec<i64>) {
    (homs_into_sub(q, p, u, into), homs_from_quotient(q, p, u, out_of))
}

/// `dim Hom(X_b, U)` for a subrepresentation `U` given by row bases, from
/// bases of `Hom(X_b, X)`.
pub(crate) fn homs_into_sub(q: &Quiver, p: u32, u: &[Mat], into: &[Vec<Vec<Mat>>]) -> Vec<i64> {
    let n = q.vertex_count();
    let ann: Vec<Mat> = u.iter().map(|b| b.nullspace(p)).collect();
    into.iter()
        .map(|basis| {
            // h lands in U iff ann_v * h_v = 0 for all v
            let rows: Vec<Vec<u32>> = basis
                .iter()
                .map(|h| (0..n).flat_map(|v| flatten(&ann[v].mul(&h[v], p))).collect())
                .collect();
            kernel_dim(rows, p)
        })
        .collect()
}

/// `dim Hom(X/U, X_b)` from bases of `Hom(X, X_b)`.
fn homs_from_quotient(q: &Quiver, p: u32, u: &[Mat], out_of: &[Vec<Vec<Mat>>]) -> Vec<i64> {
    let n = q.vertex_count();
    out_of
        .iter()
        .map(|basis| {
            // g kills U iff g_v * u_v^T = 0 for all v
            let rows: Vec<Vec<u32>> = basis
                .iter()
                .map(|g| (0..n).flat_map(|v| flatten(&g[v].mul(&u[v].transpose(), p))).collect())
                .collect();
            kernel_dim(rows, p)
        })
        .collect()
}

fn flatten(m: &Mat) -> Vec<u32> {
    m.to_rows().concat()
}

/// Dimension of the space of linear combinations of `rows` that vanish.
fn kernel_dim(rows: Vec<Vec<u32>>, p: u32) -> i64 {
    let k = rows.len();
    if k == 0 {
        return 0;
    }
    let width = rows[0].len();
    (k - Mat::from_rows(width, &rows).rank(p)) as i64
}
