//! Dynkin quivers, dimension vectors and the Euler form.
//!
//! Vertices carry opaque string labels. Internally they are indexed by their
//! position in the *natural* label order: labels that both parse as integers
//! compare numerically, integers sort before other labels, and everything else
//! compares lexicographically. Every tie-break in the crate goes through this
//! order, so results never depend on the order in which arrows were written.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::cmp::Reverse;
use std::fmt;
use std::ops::{Add, Index};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Label comparison used for vertex indexing.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    match (a.parse::<i64>(), b.parse::<i64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

/// Simply-laced Dynkin type of one connected component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DynkinType {
    A(usize),
    D(usize),
    E(usize),
}

impl DynkinType {
    /// Number of positive roots.
    pub fn root_count(&self) -> usize {
        match *self {
            DynkinType::A(n) => n * (n + 1) / 2,
            DynkinType::D(n) => n * (n - 1),
            DynkinType::E(6) => 36,
            DynkinType::E(7) => 63,
            DynkinType::E(8) => 120,
            DynkinType::E(n) => unreachable!("E{n} is not a Dynkin type"),
        }
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinType::A(n) => write!(f, "A{n}"),
            DynkinType::D(n) => write!(f, "D{n}"),
            DynkinType::E(n) => write!(f, "E{n}"),
        }
    }
}

/// A connected component: its vertex indices (ascending) and type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub vertices: Vec<usize>,
    pub kind: DynkinType,
}

/// A validated Dynkin quiver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    labels: Vec<String>,
    arrows: Vec<(usize, usize)>,
    components: Vec<Component>,
}

/// JSON form of a quiver.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuiverJson {
    pub vertices: Vec<String>,
    pub arrows: Vec<(String, String)>,
}

impl Quiver {
    /// Parses a textual arrow list such as `"1->2,3->2"`. A bare label declares
    /// an isolated vertex (`"1"` is A_1). A string starting with `{` is read as
    /// the JSON form.
    pub fn parse(spec: &str) -> Result<Quiver> {
        let spec = spec.trim();
        if spec.starts_with('{') {
            let js: QuiverJson =
                serde_json::from_str(spec).map_err(|e| Error::Parse(e.to_string()))?;
            return Quiver::from_json(&js);
        }
        let mut vertices = Vec::new();
        let mut arrows = Vec::new();
        for token in spec.split(',') {
            let token = token.trim();
            if token.is_empty() {
                return Err(Error::Parse(format!("empty token in {spec:?}")));
            }
            match token.split_once("->") {
                Some((s, t)) => {
                    let (s, t) = (s.trim(), t.trim());
                    if s.is_empty() || t.is_empty() || t.contains("->") {
                        return Err(Error::Parse(format!("malformed arrow {token:?}")));
                    }
                    vertices.push(s.to_string());
                    vertices.push(t.to_string());
                    arrows.push((s.to_string(), t.to_string()));
                }
                None => vertices.push(token.to_string()),
            }
        }
        Quiver::new(vertices, arrows)
    }

    pub fn from_json(js: &QuiverJson) -> Result<Quiver> {
        let declared: BTreeSet<&str> = js.vertices.iter().map(String::as_str).collect();
        for (s, t) in &js.arrows {
            for end in [s, t] {
                if !declared.contains(end.as_str()) {
                    return Err(Error::Parse(format!("arrow endpoint {end:?} is not a declared vertex")));
                }
            }
        }
        Quiver::new(js.vertices.clone(), js.arrows.clone())
    }

    /// Builds and validates a quiver from labels and labelled arrows.
    pub fn new(vertices: Vec<String>, arrows: Vec<(String, String)>) -> Result<Quiver> {
        let mut labels: Vec<String> = vertices;
        for l in &labels {
            if l.trim().is_empty() {
                return Err(Error::Parse("empty vertex label".into()));
            }
        }
        labels.sort_by(|a, b| natural_cmp(a, b));
        labels.dedup();
        if labels.is_empty() {
            return Err(Error::Parse("quiver has no vertices".into()));
        }
        let index: BTreeMap<&str, usize> =
            labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let arrows: Vec<(usize, usize)> = arrows
            .iter()
            .map(|(s, t)| (index[s.as_str()], index[t.as_str()]))
            .collect();

        let n = labels.len();
        for &(s, t) in &arrows {
            if s == t {
                return Err(Error::OrientedCycle(labels[s].clone()));
            }
        }
        if let Some(v) = find_oriented_cycle(n, &arrows) {
            return Err(Error::OrientedCycle(labels[v].clone()));
        }
        let components = classify_components(n, &arrows, &labels)?;
        Ok(Quiver { labels, arrows, components })
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn vertex(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Arrows as `(source, target)` vertex indices, in declaration order.
    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn arrow_name(&self, a: usize) -> String {
        let (s, t) = self.arrows[a];
        format!("{}->{}", self.labels[s], self.labels[t])
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn types(&self) -> Vec<DynkinType> {
        self.components.iter().map(|c| c.kind).collect()
    }

    pub fn to_json(&self) -> QuiverJson {
        QuiverJson {
            vertices: self.labels.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|&(s, t)| (self.labels[s].clone(), self.labels[t].clone()))
                .collect(),
        }
    }

    /// Textual arrow-list form accepted by [`Quiver::parse`].
    pub fn spec_string(&self) -> String {
        let mut parts: Vec<String> = (0..self.arrows.len()).map(|a| self.arrow_name(a)).collect();
        for v in 0..self.vertex_count() {
            if !self.arrows.iter().any(|&(s, t)| s == v || t == v) {
                parts.push(self.labels[v].clone());
            }
        }
        parts.join(",")
    }

    pub fn is_source(&self, v: usize) -> bool {
        !self.arrows.iter().any(|&(_, t)| t == v)
    }

    pub fn is_sink(&self, v: usize) -> bool {
        !self.arrows.iter().any(|&(s, _)| s == v)
    }

    /// Number of arrows `i -> j`.
    pub fn arrow_count(&self, i: usize, j: usize) -> usize {
        self.arrows.iter().filter(|&&(s, t)| s == i && t == j).count()
    }

    pub fn zero(&self) -> DimVector {
        DimVector::zero(self.vertex_count())
    }

    pub fn unit(&self, v: usize) -> DimVector {
        DimVector::unit(self.vertex_count(), v)
    }

    fn check_len(&self, d: &DimVector) -> Result<()> {
        if d.len() != self.vertex_count() {
            return Err(Error::MismatchedQuiver(format!(
                "dimension vector has {} components, quiver has {} vertices",
                d.len(),
                self.vertex_count()
            )));
        }
        Ok(())
    }

    /// The Euler form `<d, e> = sum_i d_i e_i - sum_{i->j} d_i e_j`.
    pub fn euler_form(&self, d: &DimVector, e: &DimVector) -> Result<i64> {
        self.check_len(d)?;
        self.check_len(e)?;
        Ok(self.euler_unchecked(d, e))
    }

    pub(crate) fn euler_unchecked(&self, d: &DimVector, e: &DimVector) -> i64 {
        let diag: i64 = (0..self.vertex_count()).map(|i| d[i] as i64 * e[i] as i64).sum();
        let off: i64 = self.arrows.iter().map(|&(s, t)| d[s] as i64 * e[t] as i64).sum();
        diag - off
    }

    /// Topological order of the vertices (sources first), ties broken by the
    /// natural label order.
    pub fn admissible_vertex_order(&self) -> VertexOrder {
        let n = self.vertex_count();
        let mut indeg = vec![0usize; n];
        for &(_, t) in &self.arrows {
            indeg[t] += 1;
        }
        let mut heap: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(v)) = heap.pop() {
            order.push(v);
            for &(s, t) in &self.arrows {
                if s == v {
                    indeg[t] -= 1;
                    if indeg[t] == 0 {
                        heap.push(Reverse(t));
                    }
                }
            }
        }
        VertexOrder(order)
    }

    /// Parses a dimension vector, either positional (`"1,2"`, in vertex index
    /// order) or labelled (`"1:1,2:2"`, missing labels are zero).
    pub fn parse_dimvector(&self, s: &str) -> Result<DimVector> {
        let s = s.trim();
        if s.starts_with('{') {
            let map: BTreeMap<String, u32> =
                serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
            return self.dimvector_from_map(&map);
        }
        let tokens: Vec<&str> = s.split(',').map(str::trim).collect();
        if tokens.iter().any(|t| t.contains(':')) {
            let mut map = BTreeMap::new();
            for t in tokens {
                let (l, x) = t
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("mixed dimension vector syntax in {s:?}")))?;
                let x: u32 = x.trim().parse().map_err(|_| Error::Parse(format!("bad entry {t:?}")))?;
                map.insert(l.trim().to_string(), x);
            }
            return self.dimvector_from_map(&map);
        }
        if tokens.len() != self.vertex_count() {
            return Err(Error::MismatchedQuiver(format!(
                "dimension vector {s:?} has {} entries, quiver has {} vertices",
                tokens.len(),
                self.vertex_count()
            )));
        }
        let comps = tokens
            .iter()
            .map(|t| t.parse::<u32>().map_err(|_| Error::Parse(format!("bad entry {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(DimVector(comps))
    }

    pub fn dimvector_from_map(&self, map: &BTreeMap<String, u32>) -> Result<DimVector> {
        let mut d = self.zero();
        for (l, &x) in map {
            let v = self
                .vertex(l)
                .ok_or_else(|| Error::MismatchedQuiver(format!("unknown vertex {l:?}")))?;
            d.0[v] = x;
        }
        Ok(d)
    }

    pub fn dimvector_to_map(&self, d: &DimVector) -> BTreeMap<String, u32> {
        (0..self.vertex_count()).map(|v| (self.labels[v].clone(), d[v])).collect()
    }
}

fn find_oriented_cycle(n: usize, arrows: &[(usize, usize)]) -> Option<usize> {
    let mut indeg = vec![0usize; n];
    for &(_, t) in arrows {
        indeg[t] += 1;
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for &(s, t) in arrows {
            if s == v {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    stack.push(t);
                }
            }
        }
    }
    if seen == n {
        None
    } else {
        (0..n).find(|&v| indeg[v] > 0)
    }
}

fn classify_components(
    n: usize,
    arrows: &[(usize, usize)],
    labels: &[String],
) -> Result<Vec<Component>> {
    let mut adj = vec![Vec::new(); n];
    let mut edges = BTreeSet::new();
    for &(s, t) in arrows {
        let key = (s.min(t), s.max(t));
        if !edges.insert(key) {
            return Err(Error::NotDynkin(format!(
                "multiple edges between {} and {}",
                labels[key.0], labels[key.1]
            )));
        }
        adj[s].push(t);
        adj[t].push(s);
    }
    let mut comp_of = vec![usize::MAX; n];
    let mut components = Vec::new();
    for start in 0..n {
        if comp_of[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut verts = vec![start];
        comp_of[start] = id;
        let mut i = 0;
        while i < verts.len() {
            let v = verts[i];
            for &w in &adj[v] {
                if comp_of[w] == usize::MAX {
                    comp_of[w] = id;
                    verts.push(w);
                }
            }
            i += 1;
        }
        verts.sort_unstable();
        let edge_count = verts.iter().map(|&v| adj[v].len()).sum::<usize>() / 2;
        if edge_count + 1 != verts.len() {
            return Err(Error::NotDynkin(format!(
                "component containing {} is not a tree",
                labels[start]
            )));
        }
        let kind = tree_type(&verts, &adj).ok_or_else(|| {
            Error::NotDynkin(format!("component containing {} is not of type A, D or E", labels[start]))
        })?;
        components.push(Component { vertices: verts, kind });
    }
    Ok(components)
}

/// ADE type of a tree from its branch structure.
fn tree_type(verts: &[usize], adj: &[Vec<usize>]) -> Option<DynkinType> {
    let n = verts.len();
    let branch: Vec<usize> = verts.iter().copied().filter(|&v| adj[v].len() >= 3).collect();
    if branch.is_empty() {
        return Some(DynkinType::A(n));
    }
    if branch.len() > 1 || adj[branch[0]].len() > 3 {
        return None;
    }
    let center = branch[0];
    let mut arms: Vec<usize> = adj[center]
        .iter()
        .map(|&first| {
            let (mut prev, mut cur, mut len) = (center, first, 1);
            loop {
                let next: Vec<usize> = adj[cur].iter().copied().filter(|&w| w != prev).collect();
                match next.as_slice() {
                    [] => break len,
                    [w] => {
                        prev = cur;
                        cur = *w;
                        len += 1;
                    }
                    _ => unreachable!("only one branch vertex"),
                }
            }
        })
        .collect();
    arms.sort_unstable();
    match arms.as_slice() {
        [1, 1, _] => Some(DynkinType::D(n)),
        [1, 2, 2] => Some(DynkinType::E(6)),
        [1, 2, 3] => Some(DynkinType::E(7)),
        [1, 2, 4] => Some(DynkinType::E(8)),
        _ => None,
    }
}

/// All dimension vectors with `n` components and the given total.
pub fn weights_of_total(n: usize, total: u32) -> Vec<DimVector> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<DimVector>) {
        if cur.len() + 1 == n {
            cur.push(left);
            out.push(DimVector(cur.clone()));
            cur.pop();
            return;
        }
        for x in 0..=left {
            cur.push(x);
            rec(n, left - x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, total, &mut Vec::new(), &mut out);
    }
    out
}

/// A total order on the vertices in which every arrow points forward.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexOrder(pub Vec<usize>);

impl VertexOrder {
    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    /// Position of each vertex in the order.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (k, &v) in self.0.iter().enumerate() {
            pos[v] = k;
        }
        pos
    }

    /// Checks the arrow condition and that this is a permutation of the vertices.
    pub fn is_admissible_for(&self, q: &Quiver) -> bool {
        let n = q.vertex_count();
        let mut seen = vec![false; n];
        for &v in &self.0 {
            if v >= n || seen[v] {
                return false;
            }
            seen[v] = true;
        }
        if self.0.len() != n {
            return false;
        }
        let pos = self.positions();
        q.arrows().iter().all(|&(s, t)| pos[s] < pos[t])
    }
}

/// Nonnegative integer grading, indexed by vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DimVector(pub Vec<u32>);

impl DimVector {
    pub fn zero(n: usize) -> DimVector {
        DimVector(vec![0; n])
    }

    pub fn unit(n: usize, v: usize) -> DimVector {
        let mut d = DimVector::zero(n);
        d.0[v] = 1;
        d
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Total dimension `sum_i d_i`.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `sum_i d_i^2`, the dimension of the base-change group.
    pub fn group_dim(&self) -> u32 {
        self.0.iter().map(|x| x * x).sum()
    }

    pub fn scale(&self, k: u32) -> DimVector {
        DimVector(self.0.iter().map(|x| x * k).collect())
    }

    pub fn checked_sub(&self, other: &DimVector) -> Option<DimVector> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(DimVector)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &DimVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &x)| x > 0).map(|(i, _)| i)
    }
}

impl Index<usize> for DimVector {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl Add for &DimVector {
    type Output = DimVector;
    fn add(self, rhs: &DimVector) -> DimVector {
        assert_eq!(self.len(), rhs.len(), "dimension vectors over different quivers");
        DimVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}
