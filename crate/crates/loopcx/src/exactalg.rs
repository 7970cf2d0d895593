//! Exact integer linear algebra: sparse matrices, Smith normal form, homology of
//! finitely generated cochain complexes and chain-map checks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("degree {0} outside complex range")]
    DegreeRange(i64),
}

/// Sparse integer matrix, zero entries never stored, row-major iteration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged dense matrix");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(v));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &BigInt) {
        let cur = self.get(i, j) + v;
        self.set(i, j, cur);
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (i, j, v) in self.entries() {
            d[i][j] = v.clone();
        }
        d
    }

    pub fn from_dense_big(d: &[Vec<BigInt>], rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, row) in d.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    m.entries.insert((i, j), v.clone());
                }
            }
        }
        m
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, AlgError> {
        if self.cols != other.rows {
            return Err(AlgError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut by_row: Vec<Vec<(usize, &BigInt)>> = vec![Vec::new(); other.rows];
        for (k, j, v) in other.entries() {
            by_row[k].push((j, v));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        let mut acc: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
        for (i, k, a) in self.entries() {
            for &(j, b) in &by_row[k] {
                *acc.entry((i, j)).or_insert_with(BigInt::zero) += a * b;
            }
        }
        for ((i, j), v) in acc {
            if !v.is_zero() {
                out.entries.insert((i, j), v);
            }
        }
        Ok(out)
    }

    pub fn scaled(&self, c: i64) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows, self.cols);
        if c != 0 {
            for (i, j, v) in self.entries() {
                out.entries.insert((i, j), v * c);
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.cols, self.rows);
        for (i, j, v) in self.entries() {
            out.entries.insert((j, i), v.clone());
        }
        out
    }
}

/// Diagonal form D = U·M·V with U, V unimodular.
#[derive(Clone, Debug)]
pub struct Smith {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d.get(i, i)).take_while(|x| !x.is_zero()).collect()
    }
}

fn smallest_pivot(a: &[Vec<BigInt>], from: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(from) {
        for (j, x) in row.iter().enumerate().skip(from) {
            if x.is_zero() {
                continue;
            }
            match best {
                None => best = Some((i, j)),
                Some((bi, bj)) => {
                    if x.abs() < a[bi][bj].abs() {
                        best = Some((i, j));
                    }
                }
            }
        }
    }
    best
}

/// Dense Smith normal form with transforms. Pivot: smallest absolute nonzero
/// entry of the active block, ties broken by row-major position.
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.to_dense();
    let mut u = IntMatrix::identity(r).to_dense();
    let mut v = IntMatrix::identity(c).to_dense();
    let n = r.min(c);
    let mut t = 0;
    while t < n {
        let Some((pi, pj)) = smallest_pivot(&a, t) else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        let mut restart = false;
        for i in t + 1..r {
            if a[i][t].is_zero() {
                continue;
            }
            let q = a[i][t].div_floor(&a[t][t]);
            for j in t..c {
                let s = &q * &a[t][j];
                a[i][j] -= s;
            }
            for j in 0..r {
                let s = &q * &u[t][j];
                u[i][j] -= s;
            }
            if !a[i][t].is_zero() {
                restart = true;
            }
        }
        for j in t + 1..c {
            if a[t][j].is_zero() {
                continue;
            }
            let q = a[t][j].div_floor(&a[t][t]);
            for i in t..r {
                let s = &q * &a[i][t];
                a[i][j] -= s;
            }
            for i in 0..c {
                let s = &q * &v[i][t];
                v[i][j] -= s;
            }
            if !a[t][j].is_zero() {
                restart = true;
            }
        }
        if restart {
            continue;
        }
        let mut bad = None;
        'find: for i in t + 1..r {
            for j in t + 1..c {
                if !a[i][j].is_zero() && !(&a[i][j] % &a[t][t]).is_zero() {
                    bad = Some(i);
                    break 'find;
                }
            }
        }
        if let Some(i) = bad {
            for j in t..c {
                let x = a[i][j].clone();
                a[t][j] += x;
            }
            for j in 0..r {
                let x = u[i][j].clone();
                u[t][j] += x;
            }
            continue;
        }
        if a[t][t].is_negative() {
            for j in t..c {
                a[t][j] = -a[t][j].clone();
            }
            for j in 0..r {
                u[t][j] = -u[t][j].clone();
            }
        }
        t += 1;
    }
    Smith {
        d: IntMatrix::from_dense_big(&a, r, c),
        u: IntMatrix::from_dense_big(&u, r, r),
        v: IntMatrix::from_dense_big(&v, c, c),
    }
}

/// Invariant factors (nonzero diagonal of the Smith form) by sparse elimination,
/// same pivot rule, no transforms kept.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let mut rows: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); m.rows()];
    for (i, j, v) in m.entries() {
        rows[i].insert(j, v.clone());
    }
    let mut cols: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); m.cols()];
    for (i, j, _) in m.entries() {
        cols[j].insert(i);
    }
    let mut diag = Vec::new();
    loop {
        let mut best: Option<(usize, usize)> = None;
        let mut best_abs = BigInt::zero();
        for (i, row) in rows.iter().enumerate() {
            for (&j, x) in row {
                let ax = x.abs();
                if best.is_none() || ax < best_abs {
                    best = Some((i, j));
                    best_abs = ax;
                    if best_abs.is_one() {
                        break;
                    }
                }
            }
            if best_abs.is_one() && best.is_some() {
                break;
            }
        }
        let Some((pr, pc)) = best else { break };
        let p = rows[pr][&pc].clone();
        let mut clean = true;
        let others: Vec<usize> = cols[pc].iter().copied().filter(|&i| i != pr).collect();
        let prow: Vec<(usize, BigInt)> = rows[pr].iter().map(|(&j, v)| (j, v.clone())).collect();
        for i in others {
            let q = rows[i][&pc].div_floor(&p);
            for (j, v) in &prow {
                let e = rows[i].entry(*j).or_insert_with(BigInt::zero);
                *e -= &q * v;
                if e.is_zero() {
                    rows[i].remove(j);
                    cols[*j].remove(&i);
                } else {
                    cols[*j].insert(i);
                }
            }
            if rows[i].contains_key(&pc) {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        let row_others: Vec<usize> = rows[pr].keys().copied().filter(|&j| j != pc).collect();
        for j in row_others {
            let q = rows[pr][&j].div_floor(&p);
            let r = &rows[pr][&j] - &q * &p;
            if r.is_zero() {
                rows[pr].remove(&j);
                cols[j].remove(&pr);
            } else {
                rows[pr].insert(j, r);
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // pivot row and column are now isolated
        rows[pr].clear();
        cols[pc].clear();
        diag.push(p.abs());
    }
    normalize_diagonal(diag)
}

/// Replace a multiset of positive diagonal entries by the equivalent divisibility chain.
pub fn normalize_diagonal(mut d: Vec<BigInt>) -> Vec<BigInt> {
    let n = d.len();
    for i in 0..n {
        for j in i + 1..n {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

pub fn rank(m: &IntMatrix) -> usize {
    invariant_factors(m).len()
}

/// Cochain complex, differential raising degree by one.
#[derive(Clone, Debug)]
pub struct FreeComplex {
    pub min_degree: i64,
    pub basis: Vec<Vec<String>>,
    /// diffs[n] maps degree min_degree+n to min_degree+n+1
    pub diffs: Vec<IntMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct HomologySummary {
    pub degree: i64,
    pub rank: usize,
    pub torsion: Vec<String>,
}

impl HomologySummary {
    pub fn torsion_i64(&self) -> Vec<i64> {
        self.torsion.iter().map(|s| s.parse().unwrap()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    FailAt(i64),
}

impl FreeComplex {
    pub fn empty() -> Self {
        FreeComplex { min_degree: 0, basis: vec![], diffs: vec![] }
    }

    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.basis.len() as i64 - 1
    }

    pub fn dim(&self, d: i64) -> usize {
        let n = d - self.min_degree;
        if n < 0 || n >= self.basis.len() as i64 {
            0
        } else {
            self.basis[n as usize].len()
        }
    }

    /// Differential out of degree d (zero matrix at the ends).
    pub fn diff(&self, d: i64) -> IntMatrix {
        let n = d - self.min_degree;
        if n >= 0 && (n as usize) < self.diffs.len() {
            self.diffs[n as usize].clone()
        } else {
            IntMatrix::zeros(self.dim(d + 1), self.dim(d))
        }
    }

    pub fn check_shapes(&self) -> Result<(), AlgError> {
        if self.basis.is_empty() {
            return Ok(());
        }
        if self.diffs.len() + 1 != self.basis.len() {
            return Err(AlgError::Shape(format!(
                "{} differentials for {} degrees",
                self.diffs.len(),
                self.basis.len()
            )));
        }
        for (n, m) in self.diffs.iter().enumerate() {
            if m.cols() != self.basis[n].len() || m.rows() != self.basis[n + 1].len() {
                return Err(AlgError::Shape(format!(
                    "differential at degree {} is {}x{}, expected {}x{}",
                    self.min_degree + n as i64,
                    m.rows(),
                    m.cols(),
                    self.basis[n + 1].len(),
                    self.basis[n].len()
                )));
            }
        }
        Ok(())
    }
}

pub fn validate_complex(c: &FreeComplex) -> Result<Verdict, AlgError> {
    c.check_shapes()?;
    for n in 1..c.diffs.len() {
        let comp = c.diffs[n].mul(&c.diffs[n - 1])?;
        if !comp.is_zero() {
            return Ok(Verdict::FailAt(c.min_degree + n as i64 - 1));
        }
    }
    Ok(Verdict::Pass)
}

pub fn homology(c: &FreeComplex, d: i64) -> Result<HomologySummary, AlgError> {
    if c.basis.is_empty() {
        return Ok(HomologySummary { degree: d, rank: 0, torsion: vec![] });
    }
    if d < c.min_degree || d > c.max_degree() {
        return Err(AlgError::DegreeRange(d));
    }
    c.check_shapes()?;
    let out_rank = rank(&c.diff(d));
    let inv_in = invariant_factors(&c.diff(d - 1));
    let rank = c.dim(d) - out_rank - inv_in.len();
    let torsion = inv_in.iter().filter(|x| !x.is_one()).map(|x| x.to_string()).collect();
    Ok(HomologySummary { degree: d, rank, torsion })
}

/// f[n] maps C at degree C.min_degree+n to D at the same degree.
pub fn chain_map_check(
    f: &[IntMatrix],
    c: &FreeComplex,
    d: &FreeComplex,
    sign: i64,
) -> Result<Verdict, AlgError> {
    c.check_shapes()?;
    d.check_shapes()?;
    if f.len() != c.basis.len() {
        return Err(AlgError::Shape(format!("{} components for {} degrees", f.len(), c.basis.len())));
    }
    let fm = |deg: i64| -> IntMatrix {
        let n = deg - c.min_degree;
        if n >= 0 && (n as usize) < f.len() {
            f[n as usize].clone()
        } else {
            IntMatrix::zeros(d.dim(deg), c.dim(deg))
        }
    };
    for (n, fmat) in f.iter().enumerate() {
        let deg = c.min_degree + n as i64;
        if fmat.cols() != c.dim(deg) || fmat.rows() != d.dim(deg) {
            return Err(AlgError::Shape(format!("component at degree {deg}")));
        }
    }
    for n in 0..f.len() {
        let deg = c.min_degree + n as i64;
        let lhs = fm(deg + 1).mul(&c.diff(deg))?;
        let rhs = d.diff(deg).mul(&fm(deg))?.scaled(sign);
        if lhs != rhs {
            return Ok(Verdict::FailAt(deg));
        }
    }
    Ok(Verdict::Pass)
}

/// Assemble a complex from per-degree ordered bases and a boundary function
/// giving sparse columns (target index, coefficient).
pub fn build_complex<K: Ord + Clone + std::fmt::Debug, F>(
    min_degree: i64,
    bases: Vec<Vec<K>>,
    mut diff: F,
) -> Result<FreeComplex, AlgError>
where
    F: FnMut(&K) -> Vec<(K, i64)>,
{
    let index: Vec<BTreeMap<K, usize>> = bases
        .iter()
        .map(|b| b.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect())
        .collect();
    let mut diffs = Vec::new();
    for n in 0..bases.len().saturating_sub(1) {
        let mut m = IntMatrix::zeros(bases[n + 1].len(), bases[n].len());
        for (j, k) in bases[n].iter().enumerate() {
            for (t, c) in diff(k) {
                let Some(&i) = index[n + 1].get(&t) else {
                    return Err(AlgError::Shape(format!(
                        "boundary of {:?} leaves the basis at {:?}",
                        k, t
                    )));
                };
                m.add_to(i, j, &BigInt::from(c));
            }
        }
        diffs.push(m);
    }
    Ok(FreeComplex {
        min_degree,
        basis: bases.iter().map(|b| b.iter().map(|k| format!("{:?}", k)).collect()).collect(),
        diffs,
    })
}
