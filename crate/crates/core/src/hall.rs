//! The generic Hall algebra: functions on isoclasses with values in
//! `Z[v, v^-1]`, multiplied through Hall polynomials at `q = v^2`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::counts::Engine;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::partition::{monomial_of, DirectedPartition};
use crate::quiver::DimVector;
use crate::reps::{hom_classes, RepClass};

/// A function on the isoclasses of one weight; zero values are not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HallElement {
    pub weight: DimVector,
    pub values: BTreeMap<RepClass, LaurentPoly>,
}

impl HallElement {
    pub fn zero(weight: DimVector) -> HallElement {
        HallElement { weight, values: BTreeMap::new() }
    }

    /// The constant 1 on the zero representation.
    pub fn unit(engine: &Engine) -> HallElement {
        let ar = engine.ar();
        let mut e = HallElement::zero(ar.quiver().zero());
        e.values.insert(RepClass::zero(ar), LaurentPoly::one());
        e
    }

    /// The characteristic function of one class.
    pub fn indicator(engine: &Engine, m: &RepClass) -> HallElement {
        let mut e = HallElement::zero(m.dim(engine.ar()));
        e.values.insert(m.clone(), LaurentPoly::one());
        e
    }

    pub fn value(&self, m: &RepClass) -> LaurentPoly {
        self.values.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    fn insert(&mut self, m: RepClass, x: LaurentPoly) {
        if x.is_zero() {
            self.values.remove(&m);
        } else {
            self.values.insert(m, x);
        }
    }

    pub fn add(&self, other: &HallElement) -> Result<HallElement> {
        self.same_weight(other)?;
        let mut out = self.clone();
        for (m, x) in &other.values {
            let s = &out.value(m) + x;
            out.insert(m.clone(), s);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &LaurentPoly) -> HallElement {
        let mut out = HallElement::zero(self.weight.clone());
        for (m, x) in &self.values {
            out.insert(m.clone(), x * c);
        }
        out
    }

    pub fn sub(&self, other: &HallElement) -> Result<HallElement> {
        self.add(&other.scale(&LaurentPoly::monomial(0, -1)))
    }

    fn same_weight(&self, other: &HallElement) -> Result<()> {
        if self.weight != other.weight {
            return Err(Error::WeightMismatch(format!("elements of weights {} and {}", self.weight, other.weight)));
        }
        Ok(())
    }
}

fn check_element(engine: &Engine, f: &HallElement) -> Result<()> {
    let ar = engine.ar();
    if f.weight.len() != ar.quiver().vertex_count() {
        return Err(Error::MismatchedQuiver("element does not belong to this quiver".into()));
    }
    for m in f.values.keys() {
        if m.0.len() != ar.len() || m.dim(ar) != f.weight {
            return Err(Error::MismatchedQuiver(format!("class {} is not of weight {}", m.display(ar), f.weight)));
        }
    }
    Ok(())
}

/// `(f * g)(X) = v^<d,e> sum F^X_{A,B}(v^2) f(A) g(B)`, with `f` on the
/// quotient and `g` on the subrepresentation.
pub fn convolve(engine: &Engine, f: &HallElement, g: &HallElement) -> Result<HallElement> {
    check_element(engine, f)?;
    check_element(engine, g)?;
    let q = engine.quiver();
    let weight = &f.weight + &g.weight;
    let shift = q.euler_unchecked(&f.weight, &g.weight) as i32;
    let mut out = HallElement::zero(weight.clone());
    for x in engine.table(&weight)?.classes.iter() {
        let mut acc = LaurentPoly::zero();
        for (a, fa) in &f.values {
            for (b, gb) in &g.values {
                let h = engine.hall_number(x, a, b)?;
                if !h.is_zero() {
                    acc = &acc + &(&(&h.to_laurent() * fa) * gb);
                }
            }
        }
        out.insert(x.clone(), acc.shift(shift));
    }
    Ok(out)
}

/// `E_i^(n) = E_i^{*n} / [n]!`.
pub fn divided_power_element(engine: &Engine, i: usize, n: u32) -> Result<HallElement> {
    let ar = engine.ar();
    if i >= ar.quiver().vertex_count() {
        return Err(Error::MismatchedQuiver(format!("no vertex with index {i}")));
    }
    let ei = HallElement::indicator(engine, &RepClass::simple_power(ar, i, 1));
    let mut acc = HallElement::unit(engine);
    for _ in 0..n {
        acc = convolve(engine, &ei, &acc)?;
    }
    let fact = LaurentPoly::quantum_factorial(n);
    let mut out = HallElement::zero(acc.weight.clone());
    for (m, x) in acc.values {
        let y = x
            .div_exact(&fact)
            .ok_or_else(|| Error::InternalInconsistency(format!("E_i^{n} is not divisible by [{n}]!")))?;
        out.insert(m, y);
    }
    Ok(out)
}

/// `E^(M) = E_{i_1}^(a_1) * ... * E_{i_len}^(a_len)` for the monomial of `M`.
pub fn monomial_element(engine: &Engine, p: &DirectedPartition, m: &RepClass) -> Result<HallElement> {
    let ar = engine.ar();
    if m.0.len() != ar.len() {
        return Err(Error::MismatchedQuiver("class does not belong to this quiver".into()));
    }
    let ft = monomial_of(ar, p, ar.vertex_order(), m);
    let mut acc = HallElement::unit(engine);
    for (&i, &a) in ft.word.iter().zip(&ft.weights).rev() {
        if a > 0 {
            acc = convolve(engine, &divided_power_element(engine, i, a)?, &acc)?;
        }
    }
    Ok(acc)
}

/// `v^(end(N) - dim N)`, the normalization of the PBW element `E_N`.
fn pbw_scale(engine: &Engine, n: &RepClass) -> i32 {
    let ar = engine.ar();
    hom_classes(ar, n, n) as i32 - n.dim(ar).total() as i32
}

/// The PBW element `E_N = v^(end(N) - dim N) 1_N`.
pub fn pbw_element(engine: &Engine, n: &RepClass) -> HallElement {
    let mut e = HallElement::zero(n.dim(engine.ar()));
    e.insert(n.clone(), LaurentPoly::v_pow(pbw_scale(engine, n)));
    e
}

/// Coordinates of `f` in the PBW basis, in canonical class order.
pub fn pbw_expand(engine: &Engine, f: &HallElement) -> Result<Vec<LaurentPoly>> {
    check_element(engine, f)?;
    let table = engine.table(&f.weight)?;
    Ok(table.classes.iter().map(|n| f.value(n).shift(-pbw_scale(engine, n))).collect())
}

fn from_pbw(engine: &Engine, weight: &DimVector, c: &[LaurentPoly]) -> Result<HallElement> {
    let table = engine.table(weight)?;
    let mut out = HallElement::zero(weight.clone());
    for (n, x) in table.classes.iter().zip(c) {
        out.insert(n.clone(), x.shift(pbw_scale(engine, n)));
    }
    Ok(out)
}

/// The bases a [`BaseChangeMatrix`] can relate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Monomial,
    Pbw,
    Canonical,
}

impl std::str::FromStr for Basis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Basis> {
        match s {
            "monomial" => Ok(Basis::Monomial),
            "pbw" => Ok(Basis::Pbw),
            "canonical" => Ok(Basis::Canonical),
            _ => Err(Error::Usage(format!("unknown basis {s:?}; expected monomial, pbw or canonical"))),
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Monomial => "monomial",
            Basis::Pbw => "pbw",
            Basis::Canonical => "canonical",
        })
    }
}

type Matrix = Vec<Vec<LaurentPoly>>;

/// Row `r` is the `from`-element of `classes[r]` written in the `to` basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseChangeMatrix {
    pub from: Basis,
    pub to: Basis,
    pub classes: Vec<RepClass>,
    pub entries: Matrix,
}

impl BaseChangeMatrix {
    /// Diagonal 1 and zero below.
    pub fn is_unitriangular(&self) -> bool {
        is_unitriangular(&self.entries)
    }

    /// All entries evaluated at `v = 1`.
    pub fn at_one(&self) -> Vec<Vec<i64>> {
        self.entries.iter().map(|r| r.iter().map(LaurentPoly::eval_at_one).collect()).collect()
    }
}

fn is_unitriangular(m: &Matrix) -> bool {
    m.iter()
        .enumerate()
        .all(|(r, row)| row.iter().enumerate().all(|(c, x)| if c < r { x.is_zero() } else if c == r { *x == LaurentPoly::one() } else { true }))
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|r| {
            (0..m)
                .map(|c| {
                    a[r].iter().zip(b).fold(LaurentPoly::zero(), |acc, (x, brow)| {
                        if x.is_zero() || brow[c].is_zero() {
                            acc
                        } else {
                            &acc + &(x * &brow[c])
                        }
                    })
                })
                .collect()
        })
        .collect()
}

fn mat_bar(a: &Matrix) -> Matrix {
    a.iter().map(|r| r.iter().map(LaurentPoly::bar).collect()).collect()
}

/// Inverse of an upper unitriangular matrix.
fn unitriangular_inverse(a: &Matrix, what: &str) -> Result<Matrix> {
    if !is_unitriangular(a) {
        return Err(Error::SingularBaseChange(format!("{what} is not unitriangular")));
    }
    let n = a.len();
    let mut inv = vec![vec![LaurentPoly::zero(); n]; n];
    for c in 0..n {
        inv[c][c] = LaurentPoly::one();
        for r in (0..c).rev() {
            let mut s = LaurentPoly::zero();
            for k in r + 1..=c {
                s = &s + &(&a[r][k] * &inv[k][c]);
            }
            inv[r][c] = -&s;
        }
    }
    Ok(inv)
}

/// Rows: PBW coordinates of the monomial elements `E^(M)` of weight `d`.
pub fn monomial_to_pbw(engine: &Engine, p: &DirectedPartition, d: &DimVector) -> Result<BaseChangeMatrix> {
    let table = engine.table(d)?;
    let entries = table
        .classes
        .iter()
        .map(|m| pbw_expand(engine, &monomial_element(engine, p, m)?))
        .collect::<Result<Matrix>>()?;
    let out = BaseChangeMatrix { from: Basis::Monomial, to: Basis::Pbw, classes: table.classes.clone(), entries };
    if !out.is_unitriangular() {
        return Err(Error::SingularBaseChange(format!("monomial to PBW matrix of weight {d} is not unitriangular")));
    }
    Ok(out)
}

/// The bar involution: conjugates coefficients in the monomial basis.
pub fn bar_involution(engine: &Engine, p: &DirectedPartition, f: &HallElement) -> Result<HallElement> {
    let a = monomial_to_pbw(engine, p, &f.weight)?;
    let r = bar_matrix(&a.entries)?;
    let c = pbw_expand(engine, f)?;
    let cb: Matrix = vec![c.iter().map(LaurentPoly::bar).collect()];
    from_pbw(engine, &f.weight, &mat_mul(&cb, &r)[0])
}

/// `R` with `bar(E_K) = sum_N R[K][N] E_N`.
fn bar_matrix(a: &Matrix) -> Result<Matrix> {
    let inv = unitriangular_inverse(a, "monomial to PBW matrix")?;
    Ok(mat_mul(&mat_bar(&inv), a))
}

/// The canonical basis of one weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalBasis {
    /// `C_M = sum_N zeta[M][N] E_N`.
    pub zeta: BaseChangeMatrix,
    /// `E^(M) = sum_K b[M][K] C_K`.
    pub monomial_to_canonical: BaseChangeMatrix,
    pub monomial_to_pbw: BaseChangeMatrix,
}

/// The bar-invariant elements `C_M = E_M + sum_{N > M} zeta_N E_N` with
/// off-diagonal coefficients in `v^-1 Z[v^-1]`.
pub fn canonical_basis(engine: &Engine, p: &DirectedPartition, d: &DimVector) -> Result<CanonicalBasis> {
    let a = monomial_to_pbw(engine, p, d)?;
    let r = bar_matrix(&a.entries)?;
    let n = a.classes.len();
    let mut zeta = vec![vec![LaurentPoly::zero(); n]; n];
    for m in 0..n {
        zeta[m][m] = LaurentPoly::one();
        for k in m + 1..n {
            let mut s = LaurentPoly::zero();
            for j in m..k {
                s = &s + &(&zeta[m][j].bar() * &r[j][k]);
            }
            if s.bar() != -&s {
                return Err(Error::LatticeFailure(format!("correction {s} at ({m}, {k}) is not anti-invariant")));
            }
            zeta[m][k] = s.negative_part();
        }
    }
    let zinv = unitriangular_inverse(&zeta, "zeta")?;
    let b = mat_mul(&a.entries, &zinv);
    for row in &b {
        for x in row {
            if !x.is_bar_invariant() || !x.has_nonnegative_coefficients() {
                return Err(Error::LatticeFailure(format!(
                    "monomial coefficient {x} in weight {d} is not a bar-invariant positive polynomial"
                )));
            }
        }
    }
    let classes = a.classes.clone();
    Ok(CanonicalBasis {
        zeta: BaseChangeMatrix { from: Basis::Canonical, to: Basis::Pbw, classes: classes.clone(), entries: zeta },
        monomial_to_canonical: BaseChangeMatrix { from: Basis::Monomial, to: Basis::Canonical, classes, entries: b },
        monomial_to_pbw: a,
    })
}

/// The canonical basis element `C_M` as a function on classes.
pub fn canonical_element(engine: &Engine, p: &DirectedPartition, m: &RepClass) -> Result<HallElement> {
    let d = m.dim(engine.ar());
    let cb = canonical_basis(engine, p, &d)?;
    let r = cb.zeta.classes.iter().position(|c| c == m).expect("class of its own weight");
    from_pbw(engine, &d, &cb.zeta.entries[r])
}

/// The matrix expressing the `from` basis of weight `d` in the `to` basis.
pub fn base_change(engine: &Engine, p: &DirectedPartition, d: &DimVector, from: Basis, to: Basis) -> Result<BaseChangeMatrix> {
    let classes = engine.table(d)?.classes.clone();
    let n = classes.len();
    let entries = if from == to {
        (0..n).map(|r| (0..n).map(|c| if r == c { LaurentPoly::one() } else { LaurentPoly::zero() }).collect()).collect()
    } else if from == Basis::Monomial && to == Basis::Pbw {
        monomial_to_pbw(engine, p, d)?.entries
    } else if from == Basis::Pbw && to == Basis::Monomial {
        unitriangular_inverse(&monomial_to_pbw(engine, p, d)?.entries, "monomial to PBW matrix")?
    } else {
        let cb = canonical_basis(engine, p, d)?;
        match (from, to) {
            (Basis::Canonical, Basis::Pbw) => cb.zeta.entries,
            (Basis::Pbw, Basis::Canonical) => unitriangular_inverse(&cb.zeta.entries, "zeta")?,
            (Basis::Monomial, Basis::Canonical) => cb.monomial_to_canonical.entries,
            (Basis::Canonical, Basis::Monomial) => {
                unitriangular_inverse(&cb.monomial_to_canonical.entries, "monomial to canonical matrix")?
            }
            _ => unreachable!("remaining pairs handled above"),
        }
    };
    Ok(BaseChangeMatrix { from, to, classes, entries })
}

/// `sum_k (-1)^k E_i^(k) * E_j * E_i^(1 - a_ij - k)`, which vanishes for
/// `i != j`; `a_ij` is minus the number of edges between `i` and `j`.
pub fn serre_element(engine: &Engine, i: usize, j: usize) -> Result<HallElement> {
    let q = engine.quiver();
    let edges = (q.arrow_count(i, j) + q.arrow_count(j, i)) as u32;
    let top = 1 + edges;
    let ej = divided_power_element(engine, j, 1)?;
    let mut weight = q.unit(j);
    weight.0[i] += top;
    let mut acc = HallElement::zero(weight);
    for k in 0..=top {
        let left = divided_power_element(engine, i, k)?;
        let right = divided_power_element(engine, i, top - k)?;
        let term = convolve(engine, &convolve(engine, &left, &ej)?, &right)?;
        acc = if k % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
    }
    Ok(acc)
}
