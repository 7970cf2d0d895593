//! Ordered simplicial complexes, maximal-tree collapse and simplicial chains.

use crate::exactalg::{self, FreeComplex, HomologySummary};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, VecDeque};
use thiserror::Error;

pub type Simplex = Vec<usize>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("facet {index}: vertex index {vertex} out of range")]
    OutOfRange { index: usize, vertex: usize },
    #[error("facet {0}: non-strictly-increasing")]
    NotIncreasing(usize),
    #[error("empty vertex list")]
    NoVertices,
    #[error("disconnected")]
    Disconnected,
    #[error("not a spanning tree: {0}")]
    NotATree(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub name: String,
    pub vertices: Vec<String>,
    pub facets: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    pub name: String,
    pub vertex_labels: Vec<String>,
    pub simplices: BTreeSet<Simplex>,
}

pub fn parse_complex(text: &str) -> Result<SimplicialComplex, ComplexError> {
    let doc: ComplexDoc = serde_json::from_str(text).map_err(|e| ComplexError::Parse(e.to_string()))?;
    from_doc(&doc)
}

pub fn from_doc(doc: &ComplexDoc) -> Result<SimplicialComplex, ComplexError> {
    if doc.vertices.is_empty() {
        return Err(ComplexError::NoVertices);
    }
    let n = doc.vertices.len();
    let mut simplices = BTreeSet::new();
    for v in 0..n {
        simplices.insert(vec![v]);
    }
    for (idx, f) in doc.facets.iter().enumerate() {
        if let Some(&v) = f.iter().find(|&&v| v >= n) {
            return Err(ComplexError::OutOfRange { index: idx, vertex: v });
        }
        if f.is_empty() || f.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ComplexError::NotIncreasing(idx));
        }
        let k = f.len();
        for mask in 1u64..(1u64 << k) {
            let s: Simplex = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
            simplices.insert(s);
        }
    }
    Ok(SimplicialComplex { name: doc.name.clone(), vertex_labels: doc.vertices.clone(), simplices })
}

impl SimplicialComplex {
    pub fn dim(&self) -> usize {
        self.simplices.iter().map(|s| s.len() - 1).max().unwrap_or(0)
    }

    pub fn cells(&self, k: usize) -> Vec<Simplex> {
        self.simplices.iter().filter(|s| s.len() == k + 1).cloned().collect()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        (0..=self.dim()).map(|k| self.cells(k).len()).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().iter().enumerate().map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) }).sum()
    }

    pub fn maximal_facets(&self) -> Vec<Simplex> {
        self.simplices
            .iter()
            .filter(|s| {
                !self.simplices.iter().any(|t| t.len() == s.len() + 1 && s.iter().all(|v| t.contains(v)))
            })
            .cloned()
            .collect()
    }

    pub fn to_doc(&self) -> ComplexDoc {
        ComplexDoc {
            name: self.name.clone(),
            vertices: self.vertex_labels.clone(),
            facets: self.maximal_facets(),
        }
    }

    pub fn serialize(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("serializable")
    }

    /// Alternating-face chain complex, homological degree k stored at degree -k.
    pub fn chain_complex(&self) -> FreeComplex {
        let top = self.dim();
        let bases: Vec<Vec<Simplex>> = (0..=top).rev().map(|k| self.cells(k)).collect();
        exactalg::build_complex(-(top as i64), bases, |s| {
            if s.len() == 1 {
                return vec![];
            }
            (0..s.len())
                .map(|j| {
                    let mut f = s.clone();
                    f.remove(j);
                    (f, if j % 2 == 0 { 1 } else { -1 })
                })
                .collect()
        })
        .expect("faces of a closed complex stay in the basis")
    }
}

/// Spanning tree by breadth-first search from vertex 0, neighbours in vertex order.
pub fn maximal_tree(k: &SimplicialComplex) -> Result<BTreeSet<(usize, usize)>, ComplexError> {
    let n = k.vertex_labels.len();
    let mut adj: Vec<Vec<usize>> = vec![vec![]; n];
    for e in k.cells(1) {
        adj[e[0]].push(e[1]);
        adj[e[1]].push(e[0]);
    }
    for a in adj.iter_mut() {
        a.sort();
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    let mut tree = BTreeSet::new();
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
                tree.insert((v.min(w), v.max(w)));
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(ComplexError::Disconnected);
    }
    Ok(tree)
}

/// One vertex q; cells keep their original increasing vertex sequences.
#[derive(Clone, Debug)]
pub struct ReducedComplex {
    pub base: SimplicialComplex,
    pub collapsed_tree: BTreeSet<(usize, usize)>,
}

pub fn collapse_tree(k: &SimplicialComplex, t: &BTreeSet<(usize, usize)>) -> Result<ReducedComplex, ComplexError> {
    let n = k.vertex_labels.len();
    if t.len() + 1 != n {
        return Err(ComplexError::NotATree(format!("{} edges for {} vertices", t.len(), n)));
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for &(a, b) in t {
        if !k.simplices.contains(&vec![a, b]) {
            return Err(ComplexError::NotATree(format!("edge ({a},{b}) not in complex")));
        }
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return Err(ComplexError::NotATree(format!("edge ({a},{b}) closes a cycle")));
        }
        parent[ra] = rb;
    }
    Ok(ReducedComplex { base: k.clone(), collapsed_tree: t.clone() })
}

pub fn reduce(k: &SimplicialComplex) -> Result<ReducedComplex, ComplexError> {
    let t = maximal_tree(k)?;
    collapse_tree(k, &t)
}

impl ReducedComplex {
    pub fn is_tree_edge(&self, a: usize, b: usize) -> bool {
        self.collapsed_tree.contains(&(a.min(b), a.max(b)))
    }

    /// Surviving cells of dimension k >= 1 (k = 0 is the single vertex q).
    pub fn cells(&self, k: usize) -> Vec<Simplex> {
        if k == 0 {
            return vec![vec![0]];
        }
        self.base
            .cells(k)
            .into_iter()
            .filter(|s| !(k == 1 && self.is_tree_edge(s[0], s[1])))
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// Cellular boundary: alternating faces with collapsed tree edges dropped.
    pub fn cell_boundary(&self, s: &[usize]) -> Vec<(Simplex, i64)> {
        if s.len() <= 2 {
            return vec![];
        }
        let mut out = Vec::new();
        for j in 0..s.len() {
            let mut f = s.to_vec();
            f.remove(j);
            if f.len() == 2 && self.is_tree_edge(f[0], f[1]) {
                continue;
            }
            out.push((f, if j % 2 == 0 { 1 } else { -1 }));
        }
        out
    }

    pub fn cellular_complex(&self) -> FreeComplex {
        let top = self.dim();
        let bases: Vec<Vec<Simplex>> = (0..=top).rev().map(|k| self.cells(k)).collect();
        exactalg::build_complex(-(top as i64), bases, |s| self.cell_boundary(s))
            .expect("cellular faces stay in the basis")
    }
}

pub fn simplicial_homology(k: &SimplicialComplex) -> Vec<HomologySummary> {
    let c = k.chain_complex();
    let mut out = Vec::new();
    for deg in 0..=k.dim() {
        let mut h = exactalg::homology(&c, -(deg as i64)).expect("degree in range");
        h.degree = deg as i64;
        out.push(h);
    }
    out
}

pub fn cellular_homology(r: &ReducedComplex) -> Vec<HomologySummary> {
    let c = r.cellular_complex();
    let mut out = Vec::new();
    for deg in 0..=r.dim() {
        let mut h = exactalg::homology(&c, -(deg as i64)).expect("degree in range");
        h.degree = deg as i64;
        out.push(h);
    }
    out
}

pub fn load_fixture(path: &std::path::Path) -> Result<SimplicialComplex, ComplexError> {
    let text = std::fs::read_to_string(path).map_err(|e| ComplexError::Parse(format!("{}: {e}", path.display())))?;
    parse_complex(&text)
}
