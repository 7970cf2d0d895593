//! Cyclic bar complex, Hochschild differential, induced maps and truncated HH.

use crate::exactalg::{self, FreeComplex, HomologySummary, IntMatrix};
use crate::ledger::{ArityReading, Conventions};
use crate::lin::Lin;
use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::fmt::Debug;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HochError {
    #[error("empty Hochschild word")]
    Empty,
    #[error("algebra: {0}")]
    Algebra(String),
    #[error("weight not sub-closed: {0}")]
    NotSubClosed(String),
    #[error("word length unbounded in degree {0}: algebra has letters of positive degree")]
    Unbounded(i64),
    #[error(transparent)]
    Linear(#[from] exactalg::AlgError),
}

/// A_∞ algebra with a graded, weighted basis. `mu` takes its inputs in display
/// order, a_n first.
pub trait AInfinity {
    type Elt: Ord + Clone + Debug;
    fn degree(&self, a: &Self::Elt) -> i64;
    fn weight(&self, a: &Self::Elt) -> usize;
    fn mu(&self, args: &[&Self::Elt]) -> Result<Lin<Self::Elt>, HochError>;
    fn show(&self, a: &Self::Elt) -> String {
        format!("{:?}", a)
    }
}

/// a_d ⊗ … ⊗ a₁, stored a_d first.
pub type HWord<E> = Vec<E>;

fn sgn(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// |a_d| + Σ_{i<d} (|a_i| − 1): the grading in which b has degree +1.
pub fn cc_degree<A: AInfinity>(alg: &A, w: &[A::Elt]) -> Result<i64, HochError> {
    let (first, rest) = w.split_first().ok_or(HochError::Empty)?;
    Ok(alg.degree(first) + rest.iter().map(|a| alg.degree(a) - 1).sum::<i64>())
}

pub fn word_weight<A: AInfinity>(alg: &A, w: &[A::Elt]) -> usize {
    w.iter().map(|a| alg.weight(a)).sum()
}

/// b on a single word: the internal sum and the wrap-around sum.
pub fn hochschild_b<A: AInfinity>(alg: &A, w: &[A::Elt], conv: &Conventions) -> Result<Lin<HWord<A::Elt>>, HochError> {
    let d = w.len();
    if d == 0 {
        return Err(HochError::Empty);
    }
    // a(p) = w[d − p], 1-based
    let a = |p: usize| &w[d - p];
    let red: Vec<i64> = (0..=d).map(|p| if p == 0 { 0 } else { alg.degree(a(p)) + 1 }).collect();
    let mal = |lo: usize, hi: usize| -> i64 { if lo > hi { 0 } else { red[lo..=hi].iter().sum() } };
    let mut out = Lin::zero();
    for i in 0..d {
        for j in 1..d - i {
            let args: Vec<&A::Elt> = (i + 1..=i + j).rev().map(a).collect();
            let res = alg.mu(&args)?;
            if res.is_zero() {
                continue;
            }
            let s = sgn(mal(1, i));
            for (m, c) in res.iter() {
                let mut word: Vec<A::Elt> = (i + j + 1..=d).rev().map(|p| a(p).clone()).collect();
                word.push(m.clone());
                word.extend((1..=i).rev().map(|p| a(p).clone()));
                out.add_term(word, s * c);
            }
        }
    }
    for i in 0..d {
        for j in 0..d - i {
            let (args, rest): (Vec<&A::Elt>, Vec<&A::Elt>) = match conv.d2_arity {
                ArityReading::Arguments => (
                    (1..=i).rev().chain((i + j + 1..=d).rev()).map(a).collect(),
                    (i + 1..=i + j).rev().map(a).collect(),
                ),
                ArityReading::Subscript => (
                    (1..=i).rev().chain((i + j + 2..=d).rev()).map(a).collect(),
                    (i + 1..=(i + j + 1).min(d)).rev().map(a).collect(),
                ),
            };
            if args.is_empty() {
                continue;
            }
            let res = alg.mu(&args)?;
            if res.is_zero() {
                continue;
            }
            let bullet = mal(1, i) * (1 + mal(i + 1, d)) + mal(i + j + 1, d - 1);
            let s = sgn(bullet + mal(i + 1, i + j) + 1);
            for (m, c) in res.iter() {
                let mut word = vec![m.clone()];
                word.extend(rest.iter().map(|x| (*x).clone()));
                out.add_term(word, s * c);
            }
        }
    }
    Ok(out)
}

pub fn hochschild_b_lin<A: AInfinity>(
    alg: &A,
    x: &Lin<HWord<A::Elt>>,
    conv: &Conventions,
) -> Result<Lin<HWord<A::Elt>>, HochError> {
    x.try_map_lin(|w| hochschild_b(alg, w, conv))
}

/// Finite A_∞ presentation: basis elements are indices, μ given by tables keyed
/// by the argument list in display order. Missing entries are zero.
#[derive(Clone, Debug, Default)]
pub struct TableAlgebra {
    pub names: Vec<String>,
    pub degrees: Vec<i64>,
    pub weights: Vec<usize>,
    pub ops: BTreeMap<Vec<usize>, Lin<usize>>,
    pub unit: Option<usize>,
}

impl TableAlgebra {
    pub fn set(&mut self, args: &[usize], value: Lin<usize>) {
        if value.is_zero() {
            self.ops.remove(args);
        } else {
            self.ops.insert(args.to_vec(), value);
        }
    }

    pub fn max_arity(&self) -> usize {
        self.ops.keys().map(|k| k.len()).max().unwrap_or(0)
    }

    /// Every table entry raises the shifted degree |a| − 1 by one.
    pub fn degree_check(&self) -> bool {
        self.ops.iter().all(|(args, v)| {
            let r: i64 = args.iter().map(|&x| self.degrees[x] - 1).sum();
            v.keys().all(|&y| self.degrees[y] - 1 == r + 1)
        })
    }

    /// Residual of the A_∞ relation Σ (−1)^{✠₁^i} μ(…, μ(…), a_i, …, a₁) = 0 on a tuple.
    pub fn ainf_residual(&self, args: &[usize]) -> Lin<usize> {
        let n = args.len();
        let mut out = Lin::zero();
        for d2 in 1..=n {
            for i in 0..=n - d2 {
                // inner block a_{i+d2}..a_{i+1}: display positions n−i−d2 .. n−i
                let inner = &args[n - i - d2..n - i];
                let Some(iv) = self.ops.get(inner) else { continue };
                let sign = sgn(args[n - i..].iter().map(|&x| self.degrees[x] + 1).sum());
                for (m, c) in iv.iter() {
                    let mut outer = args[..n - i - d2].to_vec();
                    outer.push(*m);
                    outer.extend_from_slice(&args[n - i..]);
                    if let Some(ov) = self.ops.get(&outer) {
                        out.add_scaled(ov, sign * c);
                    }
                }
            }
        }
        out
    }
}

impl AInfinity for TableAlgebra {
    type Elt = usize;

    fn degree(&self, a: &usize) -> i64 {
        self.degrees[*a]
    }

    fn weight(&self, a: &usize) -> usize {
        self.weights.get(*a).copied().unwrap_or(0)
    }

    fn mu(&self, args: &[&usize]) -> Result<Lin<usize>, HochError> {
        let key: Vec<usize> = args.iter().map(|x| **x).collect();
        Ok(self.ops.get(&key).cloned().unwrap_or_default())
    }

    fn show(&self, a: &usize) -> String {
        self.names[*a].clone()
    }
}

/// Polynomial terms F^d of an A_∞ morphism, keyed by argument list (display order).
#[derive(Clone, Debug)]
pub struct Morphism<EA: Ord, EB: Ord> {
    pub tables: BTreeMap<Vec<EA>, Lin<EB>>,
}

impl<EA: Ord + Clone, EB: Ord + Clone> Morphism<EA, EB> {
    pub fn new() -> Self {
        Morphism { tables: BTreeMap::new() }
    }

    pub fn apply(&self, args: &[EA]) -> Lin<EB> {
        self.tables.get(args).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, args: &[EA], v: Lin<EB>) {
        self.tables.insert(args.to_vec(), v);
    }
}

impl<EA: Ord + Clone, EB: Ord + Clone> Default for Morphism<EA, EB> {
    fn default() -> Self {
        Self::new()
    }
}

fn tensor_lins<E: Ord + Clone>(parts: &[Lin<E>]) -> Lin<Vec<E>> {
    let mut acc: Lin<Vec<E>> = Lin::single(vec![], 1);
    for p in parts {
        let mut next = Lin::zero();
        for (w, c) in acc.iter() {
            for (e, v) in p.iter() {
                let mut ww = w.clone();
                ww.push(e.clone());
                next.add_term(ww, c * v);
            }
        }
        acc = next;
    }
    acc
}

/// CC(F) on a single word: sum over 0 ≤ s₁ < … < s_k ≤ d−1.
pub fn cc_of_morphism<A: AInfinity, EB: Ord + Clone>(
    alg: &A,
    f: &Morphism<A::Elt, EB>,
    w: &[A::Elt],
) -> Result<Lin<HWord<EB>>, HochError> {
    let d = w.len();
    if d == 0 {
        return Err(HochError::Empty);
    }
    let a = |p: usize| w[d - p].clone();
    let red: Vec<i64> = (0..=d).map(|p| if p == 0 { 0 } else { alg.degree(&w[d - p]) + 1 }).collect();
    let mal = |lo: usize, hi: usize| -> i64 { if lo > hi { 0 } else { red[lo..=hi].iter().sum() } };
    let mut out = Lin::zero();
    for k in 1..=d {
        for s in crate::cobarloop::combinations(d, k) {
            let (s1, sk) = (s[0], s[k - 1]);
            let bullet = mal(1, s1) * (1 + mal(s1 + 1, d)) + mal(sk + 1, d - 1);
            let first: Vec<A::Elt> = (1..=s1).rev().chain((sk + 1..=d).rev()).map(a).collect();
            let mut parts = vec![f.apply(&first)];
            for t in (1..k).rev() {
                let block: Vec<A::Elt> = (s[t - 1] + 1..=s[t]).rev().map(a).collect();
                parts.push(f.apply(&block));
            }
            if parts.iter().any(|p| p.is_zero()) {
                continue;
            }
            out.add_scaled(&tensor_lins(&parts), sgn(bullet));
        }
    }
    Ok(out)
}

/// Residual of the functor equation of a morphism into a DGA-type target
/// (only μ₁ and μ₂ on the right-hand side), on one input tuple.
pub fn functor_residual<A: AInfinity, B: AInfinity>(
    a_alg: &A,
    b_alg: &B,
    f: &Morphism<A::Elt, B::Elt>,
    args: &[A::Elt],
) -> Result<Lin<B::Elt>, HochError> {
    let n = args.len();
    let mut out: Lin<B::Elt> = Lin::zero();
    for d2 in 1..=n {
        for i in 0..=n - d2 {
            let inner: Vec<&A::Elt> = args[n - i - d2..n - i].iter().collect();
            let iv = a_alg.mu(&inner)?;
            let sign = sgn(args[n - i..].iter().map(|x| a_alg.degree(x) + 1).sum());
            for (m, c) in iv.iter() {
                let mut outer = args[..n - i - d2].to_vec();
                outer.push(m.clone());
                outer.extend_from_slice(&args[n - i..]);
                out.add_scaled(&f.apply(&outer), sign * c);
            }
        }
    }
    let fd = f.apply(args);
    for (m, c) in fd.iter() {
        out.add_scaled(&b_alg.mu(&[m])?, -c);
    }
    for d1 in 1..n {
        let hi = f.apply(&args[..n - d1]);
        let lo = f.apply(&args[n - d1..]);
        for (x, cx) in hi.iter() {
            for (y, cy) in lo.iter() {
                out.add_scaled(&b_alg.mu(&[x, y])?, -cx * cy);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct HhReport {
    pub degree: i64,
    pub max_weight: usize,
    pub summary: HomologySummary,
    /// rank of the image of the cap W−1 group in the cap W group
    pub stable_rank: usize,
    /// the cap W−1 computation gives the same summary
    pub stabilized: bool,
}

/// Words in the given degree, all letters from `basis`, weight ≤ cap.
pub fn words_in_degree<A: AInfinity>(
    alg: &A,
    basis: &[A::Elt],
    degree: i64,
    cap: usize,
) -> Result<Vec<HWord<A::Elt>>, HochError> {
    let letters: Vec<&A::Elt> = basis.iter().filter(|x| alg.weight(x) <= cap).collect();
    let max_deg = letters.iter().map(|x| alg.degree(x)).max();
    let Some(m) = max_deg else { return Ok(vec![]) };
    if m > 0 {
        return Err(HochError::Unbounded(degree));
    }
    // degree ≤ m + (d−1)(m−1), so d − 1 ≤ (m − degree)/(1 − m)
    if degree > m {
        return Ok(vec![]);
    }
    let max_len = 1 + ((m - degree) / (1 - m)) as usize;
    let min_rest = letters.iter().map(|x| alg.degree(x) - 1).max().unwrap();
    let mut out = Vec::new();
    fn go<A: AInfinity>(
        alg: &A,
        letters: &[&A::Elt],
        cur: &mut Vec<A::Elt>,
        deg: i64,
        wt: usize,
        target: i64,
        cap: usize,
        max_len: usize,
        best_rest: i64,
        out: &mut Vec<HWord<A::Elt>>,
    ) {
        if deg == target {
            out.push(cur.clone());
        }
        if cur.len() == max_len || deg + best_rest < target {
            return;
        }
        for x in letters {
            let w = wt + alg.weight(x);
            if w > cap {
                continue;
            }
            cur.push((*x).clone());
            go(alg, letters, cur, deg + alg.degree(x) - 1, w, target, cap, max_len, best_rest, out);
            cur.pop();
        }
    }
    for x in &letters {
        let mut cur = vec![(*x).clone()];
        go(alg, &letters, &mut cur, alg.degree(x), alg.weight(x), degree, cap, max_len, min_rest, &mut out);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// The three-term truncated piece of CC_* around `degree`.
pub fn truncated_complex<A: AInfinity>(
    alg: &A,
    basis: &[A::Elt],
    degree: i64,
    cap: usize,
    conv: &Conventions,
) -> Result<(FreeComplex, Vec<Vec<HWord<A::Elt>>>), HochError> {
    let bases: Vec<Vec<HWord<A::Elt>>> = (degree - 1..=degree + 1)
        .map(|dg| words_in_degree(alg, basis, dg, cap))
        .collect::<Result<_, _>>()?;
    let index: Vec<BTreeMap<&HWord<A::Elt>, usize>> =
        bases.iter().map(|b| b.iter().enumerate().map(|(i, w)| (w, i)).collect()).collect();
    let mut diffs = Vec::new();
    for n in 0..2 {
        let mut m = IntMatrix::zeros(bases[n + 1].len(), bases[n].len());
        for (j, w) in bases[n].iter().enumerate() {
            let wt = word_weight(alg, w);
            for (t, c) in hochschild_b(alg, w, conv)?.iter() {
                if word_weight(alg, t) > wt {
                    return Err(HochError::NotSubClosed(format!("b raises weight on {:?}", w)));
                }
                let Some(&i) = index[n + 1].get(t) else {
                    return Err(HochError::NotSubClosed(format!("b({:?}) leaves the basis at {:?}", w, t)));
                };
                m.add_to(i, j, &BigInt::from(c));
            }
        }
        diffs.push(m);
    }
    let fc = FreeComplex {
        min_degree: degree - 1,
        basis: bases.iter().map(|b| b.iter().map(|w| format!("{:?}", w)).collect()).collect(),
        diffs,
    };
    Ok((fc, bases))
}

/// Rational rank of the span of columns of `m` restricted to a coordinate map.
fn stacked_rank(cols: &[Vec<(usize, BigInt)>], rows: usize) -> usize {
    let mut m = IntMatrix::zeros(rows, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, v) in col {
            m.add_to(*i, j, v);
        }
    }
    exactalg::rank(&m)
}

fn columns(m: &IntMatrix) -> Vec<Vec<(usize, BigInt)>> {
    let mut cols = vec![Vec::new(); m.cols()];
    for (i, j, v) in m.entries() {
        cols[j].push((i, v.clone()));
    }
    cols
}

/// Kernel basis of an integer matrix (columns of V beyond the rank).
fn kernel_basis(m: &IntMatrix) -> Vec<Vec<(usize, BigInt)>> {
    if m.rows() == 0 {
        return (0..m.cols()).map(|j| vec![(j, BigInt::from(1))]).collect();
    }
    let s = exactalg::smith_normal_form(m);
    let r = s.diagonal().iter().filter(|x| !num_traits::Zero::is_zero(*x)).count();
    let v = columns(&s.v);
    v[r..].to_vec()
}

pub fn hh_truncated<A: AInfinity>(
    alg: &A,
    basis: &[A::Elt],
    degree: i64,
    cap: usize,
    conv: &Conventions,
) -> Result<HhReport, HochError> {
    let (fc, bases) = truncated_complex(alg, basis, degree, cap, conv)?;
    let summary = exactalg::homology(&fc, degree)?;
    let (stable_rank, stabilized) = if cap == 0 {
        (summary.rank, false)
    } else {
        let (fc0, bases0) = truncated_complex(alg, basis, degree, cap - 1, conv)?;
        let prev = exactalg::homology(&fc0, degree)?;
        let idx: BTreeMap<&HWord<A::Elt>, usize> = bases[1].iter().enumerate().map(|(i, w)| (w, i)).collect();
        let z0: Vec<Vec<(usize, BigInt)>> = kernel_basis(&fc0.diff(degree))
            .into_iter()
            .map(|col| col.into_iter().map(|(i, v)| (idx[&bases0[1][i]], v)).collect())
            .collect();
        let b = columns(&fc.diff(degree - 1));
        let rows = bases[1].len();
        let rb = stacked_rank(&b, rows);
        let mut both = z0;
        both.extend(b);
        let img = stacked_rank(&both, rows) - rb;
        let ok = prev.rank == summary.rank && prev.torsion == summary.torsion;
        (img, ok)
    };
    Ok(HhReport { degree, max_weight: cap, summary, stable_rank, stabilized })
}
