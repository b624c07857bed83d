//! Flag types, the dimensions of the incidence varieties, and fibre counts of
//! the desingularization maps.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::counts::Engine;
use crate::error::{Error, Result};
use crate::fp::{for_each_between, Mat};
use crate::partition::{DirectedPartition, MonomialFunction};
use crate::poly::CountPolynomial;
use crate::quiver::{DimVector, Quiver};
use crate::reps::{degenerates_unchecked, ConcreteRep, RepClass};

/// Largest total dimension accepted by the raw flag enumeration.
pub const MAX_RAW_DIM: u32 = 8;

/// A word of vertices with multiplicities of the same length.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlagType {
    pub word: Vec<usize>,
    pub weights: Vec<u32>,
}

/// JSON form: vertex labels and weights.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlagTypeJson {
    pub word: Vec<String>,
    pub weights: Vec<u32>,
}

impl FlagType {
    pub fn new(q: &Quiver, word: Vec<usize>, weights: Vec<u32>) -> Result<FlagType> {
        let ft = FlagType { word, weights };
        ft.validate(q)?;
        Ok(ft)
    }

    pub fn validate(&self, q: &Quiver) -> Result<()> {
        if self.word.len() != self.weights.len() {
            return Err(Error::Parse(format!(
                "word has length {}, weights have length {}",
                self.word.len(),
                self.weights.len()
            )));
        }
        if let Some(&v) = self.word.iter().find(|&&v| v >= q.vertex_count()) {
            return Err(Error::MismatchedQuiver(format!("vertex index {v} out of range")));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// `sum_k a_k i_k`.
    pub fn weight(&self, q: &Quiver) -> DimVector {
        let mut d = q.zero();
        for (&v, &a) in self.word.iter().zip(&self.weights) {
            d.0[v] += a;
        }
        d
    }

    /// `d^k = sum_{l > k} a_l i_l` for `k = 0..=len`.
    pub fn tail_weights(&self, q: &Quiver) -> Vec<DimVector> {
        let mut out = vec![q.zero(); self.len() + 1];
        for k in (0..self.len()).rev() {
            let mut d = out[k + 1].clone();
            d.0[self.word[k]] += self.weights[k];
            out[k] = d;
        }
        out
    }

    pub fn to_json(&self, q: &Quiver) -> FlagTypeJson {
        FlagTypeJson {
            word: self.word.iter().map(|&v| q.label(v).to_string()).collect(),
            weights: self.weights.clone(),
        }
    }

    pub fn from_json(js: &FlagTypeJson, q: &Quiver) -> Result<FlagType> {
        let word = js
            .word
            .iter()
            .map(|l| q.vertex(l).ok_or_else(|| Error::MismatchedQuiver(format!("unknown vertex {l:?}"))))
            .collect::<Result<Vec<_>>>()?;
        FlagType::new(q, word, js.weights.clone())
    }

    fn check_weight(&self, q: &Quiver, d: &DimVector) -> Result<()> {
        self.validate(q)?;
        let w = self.weight(q);
        if &w != d {
            return Err(Error::WeightMismatch(format!("flag type has weight {w}, representation has dimension {d}")));
        }
        Ok(())
    }
}

/// Dimensions attached to a flag type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VarietyDims {
    /// The flag variety of this type.
    pub flag: u64,
    /// The space of representations compatible with a fixed flag.
    pub fibre_space: u64,
    /// The incidence variety, `flag + fibre_space`.
    pub total: u64,
    /// The parabolic subgroup stabilizing a flag.
    pub parabolic: u64,
}

pub fn variety_dims(q: &Quiver, ft: &FlagType) -> VarietyDims {
    let n = ft.len();
    let (mut flag, mut fibre_space, mut parabolic) = (0u64, 0u64, 0u64);
    for k in 0..n {
        let ak = ft.weights[k] as u64;
        parabolic += ak * ak;
        for l in k + 1..n {
            let prod = ak * ft.weights[l] as u64;
            if ft.word[k] == ft.word[l] {
                flag += prod;
                parabolic += prod;
            }
            fibre_space += prod * q.arrow_count(ft.word[k], ft.word[l]) as u64;
        }
    }
    VarietyDims { flag, fibre_space, total: flag + fibre_space, parabolic }
}

/// Number of filtrations `X = F^0 > F^1 > ... > F^len = 0` by
/// subrepresentations with `F^(k-1)/F^k` of dimension `a_k i_k`, by direct
/// enumeration.
pub fn count_filtrations(q: &Quiver, x: &ConcreteRep, ft: &FlagType) -> Result<u128> {
    x.validate(q)?;
    ft.check_weight(q, &x.dims)?;
    if x.dims.total() > MAX_RAW_DIM {
        return Err(Error::LimitExceeded(format!(
            "raw flag enumeration is limited to total dimension {MAX_RAW_DIM}"
        )));
    }
    let u: Vec<Mat> = (0..q.vertex_count()).map(|v| Mat::identity(x.dims[v] as usize)).collect();
    count_rec(q, x, ft, 0, &u)
}

fn count_rec(q: &Quiver, x: &ConcreteRep, ft: &FlagType, k: usize, u: &[Mat]) -> Result<u128> {
    if k == ft.len() {
        return Ok(1);
    }
    let (i, a) = (ft.word[k], ft.weights[k] as usize);
    if a == 0 {
        return count_rec(q, x, ft, k + 1, u);
    }
    let p = x.p;
    let ui = &u[i];
    if ui.rows() < a {
        return Ok(0);
    }
    let mut s = Mat::zeros(0, ui.cols());
    for (e, &(src, t)) in q.arrows().iter().enumerate() {
        if t == i {
            s = s.vstack(&u[src].mul(&x.maps[e].transpose(), p));
        }
    }
    let mut total = 0u128;
    let mut next = u.to_vec();
    let mut options = Vec::new();
    for_each_between(&s, ui, ui.rows() - a, p, |w| {
        options.push(w.clone());
        Ok(())
    })?;
    for w in options {
        next[i] = w;
        total += count_rec(q, x, ft, k + 1, &next)?;
    }
    Ok(total)
}

/// The number of flags of type `ft` compatible with `N`, as a polynomial in
/// `q`: a sum over chains of classes of products of Hall polynomials with
/// semisimple quotients.
pub fn fibre_polynomial(engine: &Engine, n: &RepClass, ft: &FlagType) -> Result<CountPolynomial> {
    let ar = engine.ar();
    ft.check_weight(ar.quiver(), &n.dim(ar))?;
    let mut memo = HashMap::new();
    fibre_rec(engine, n, ft, 0, &mut memo)
}

fn fibre_rec(
    engine: &Engine,
    n: &RepClass,
    ft: &FlagType,
    k: usize,
    memo: &mut HashMap<(RepClass, usize), CountPolynomial>,
) -> Result<CountPolynomial> {
    if k == ft.len() {
        return Ok(if n.is_zero() { CountPolynomial::one() } else { CountPolynomial::zero() });
    }
    if let Some(p) = memo.get(&(n.clone(), k)) {
        return Ok(p.clone());
    }
    let result = if ft.weights[k] == 0 {
        fibre_rec(engine, n, ft, k + 1, memo)?
    } else {
        let ss = engine.semisimple_quotients(n, ft.word[k], ft.weights[k])?;
        let mut acc = CountPolynomial::zero();
        for (sub, poly) in ss.iter() {
            let rest = fibre_rec(engine, sub, ft, k + 1, memo)?;
            acc = &acc + &(poly * &rest);
        }
        acc
    };
    memo.insert((n.clone(), k), result.clone());
    Ok(result)
}

/// One row of a desingularization report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibreRow {
    pub class: RepClass,
    pub degenerates: bool,
    pub fibre: CountPolynomial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesingReport {
    pub class: RepClass,
    pub flag_type: FlagType,
    pub rows: Vec<FibreRow>,
    /// The fibre is nonempty exactly over the orbit closure and is a point
    /// over the orbit itself.
    pub passed: bool,
}

/// Checks that the flag type of `M` has fibres supported on the orbit closure
/// of `M`, with a single point over `M`.
pub fn verify_desingularization(engine: &Engine, m: &RepClass, p: &DirectedPartition) -> Result<DesingReport> {
    let ar = engine.ar();
    let mf = MonomialFunction::new(ar, p, ar.vertex_order());
    let ft = mf.flag_type(ar, m);
    let table = engine.table(&m.dim(ar))?;
    let mut rows = Vec::new();
    let mut passed = true;
    for n in &table.classes {
        let fibre = fibre_polynomial(engine, n, &ft)?;
        let deg = degenerates_unchecked(ar, m, n);
        if deg == fibre.is_zero() || (n == m && fibre != CountPolynomial::one()) {
            passed = false;
        }
        rows.push(FibreRow { class: n.clone(), degenerates: deg, fibre });
    }
    Ok(DesingReport { class: m.clone(), flag_type: ft, rows, passed })
}
