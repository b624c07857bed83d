//! Oracles and fixtures shared by the integration tests and the acceptance
//! runner. Nothing here calls the counting machinery under test.

#![allow(dead_code)]

use quiverlab::quiver::weights_of_total;
use quiverlab::{ArData, DimVector, Quiver, RepClass};

pub fn quiver(spec: &str) -> Quiver {
    Quiver::parse(spec).unwrap_or_else(|e| panic!("fixture {spec}: {e}"))
}

pub fn knit(spec: &str) -> ArData {
    ArData::knit(&quiver(spec)).unwrap()
}

/// A class from `(dimension vector, multiplicity)` pairs.
pub fn class(ar: &ArData, parts: &[(&[u32], u32)]) -> RepClass {
    let mut m = RepClass::zero(ar);
    for (d, k) in parts {
        m.0[ar.root_index(&DimVector(d.to_vec())).unwrap()] += k;
    }
    m
}

/// Every dimension vector of total at most `max` (the zero vector included).
pub fn weights_up_to(ar: &ArData, max: u32) -> Vec<DimVector> {
    let n = ar.quiver().vertex_count();
    (0..=max).flat_map(|t| weights_of_total(n, t)).collect()
}

/// All orientations of a tree given by its edges, as quiver strings.
pub fn orientations(edges: &[(&str, &str)]) -> Vec<String> {
    (0..1u32 << edges.len())
        .map(|mask| {
            edges
                .iter()
                .enumerate()
                .map(|(k, (a, b))| if mask >> k & 1 == 0 { format!("{a}->{b}") } else { format!("{b}->{a}") })
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect()
}

pub fn path_edges(n: usize) -> Vec<(String, String)> {
    (1..n).map(|i| (i.to_string(), (i + 1).to_string())).collect()
}

pub fn orientations_of_path(n: usize) -> Vec<String> {
    if n == 1 {
        return vec!["1".into()];
    }
    let e = path_edges(n);
    let refs: Vec<(&str, &str)> = e.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    orientations(&refs)
}

pub fn equioriented(n: usize) -> String {
    if n == 1 {
        return "1".into();
    }
    path_edges(n).iter().map(|(a, b)| format!("{a}->{b}")).collect::<Vec<_>>().join(",")
}

/// Number of complete flags in `F_p^n`: `prod_k (p^k - 1)/(p - 1)`.
pub fn complete_flags(p: u128, n: u32) -> u128 {
    (1..=n).map(|k| (p.pow(k) - 1) / (p - 1)).product()
}

/// Multiplicities `m[i][j]` (1-based, `i <= j`) of the interval modules
/// `E_ij` in a class on `1 -> 2 -> ... -> n`.
pub fn interval_mults(ar: &ArData, n: usize, m: &RepClass) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0u32; n + 2]; n + 2];
    for i in 1..=n {
        for j in i..=n {
            let q = ar.quiver();
            let mut d = q.zero();
            for v in i..=j {
                d.0[q.vertex(&v.to_string()).unwrap()] = 1;
            }
            out[i][j] = m.0[ar.root_index(&d).unwrap()];
        }
    }
    out
}

/// Counts tuples `p[i][j][k]` (block `i`, vertex `j`, interval end `k`,
/// `1 <= i <= j <= k <= n`) with
/// (a) `sum_k p[i][j][k] = m_ij + ... + m_in`,
/// (b) `sum_l p[l][i][j] - sum_l p[l][i-1][j] = n_ij`,
/// (c) `sum_{l <= i} (p[l][j][k] - p[l][j+1][k]) <= 0` for `i <= j < k`.
pub fn an_tuple_count(n: usize, m: &[Vec<u32>], target: &[Vec<u32>]) -> u64 {
    // slots (i, j) in a fixed order, each filled with a composition
    let slots: Vec<(usize, usize)> = (1..=n).flat_map(|i| (i..=n).map(move |j| (i, j))).collect();
    let mut p = vec![vec![vec![0i64; n + 2]; n + 2]; n + 2];
    let mut count = 0;
    fill(n, m, target, &slots, 0, &mut p, &mut count);
    count
}

fn fill(
    n: usize,
    m: &[Vec<u32>],
    target: &[Vec<u32>],
    slots: &[(usize, usize)],
    s: usize,
    p: &mut Vec<Vec<Vec<i64>>>,
    count: &mut u64,
) {
    if s == slots.len() {
        if constraints_hold(n, target, p) {
            *count += 1;
        }
        return;
    }
    let (i, j) = slots[s];
    let total: i64 = (j..=n).map(|k| m[i][k] as i64).sum();
    compositions(total, j, n, &mut |parts| {
        for (k, &x) in (j..=n).zip(parts) {
            p[i][j][k] = x;
        }
        fill(n, m, target, slots, s + 1, p, count);
    });
    for k in j..=n {
        p[i][j][k] = 0;
    }
}

/// Calls `f` with every way of writing `total` as `n - j + 1` nonnegative
/// parts.
fn compositions(total: i64, j: usize, n: usize, f: &mut dyn FnMut(&[i64])) {
    fn rec(left: i64, slots: usize, acc: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
        if slots == 1 {
            acc.push(left);
            f(acc);
            acc.pop();
            return;
        }
        for x in 0..=left {
            acc.push(x);
            rec(left - x, slots - 1, acc, f);
            acc.pop();
        }
    }
    rec(total, n - j + 1, &mut Vec::new(), f);
}

fn constraints_hold(n: usize, target: &[Vec<u32>], p: &[Vec<Vec<i64>>]) -> bool {
    for i in 1..=n {
        for j in i..=n {
            let made: i64 = (1..=i).map(|l| p[l][i][j]).sum();
            let used: i64 = if i > 1 { (1..i).map(|l| p[l][i - 1][j]).sum() } else { 0 };
            if made - used != target[i][j] as i64 {
                return false;
            }
        }
    }
    for i in 1..=n {
        for j in i..=n {
            for k in j + 1..=n {
                let s: i64 = (1..=i).map(|l| p[l][j][k] - p[l][j + 1][k]).sum();
                if s > 0 {
                    return false;
                }
            }
        }
    }
    true
}
