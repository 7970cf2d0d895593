//! Exact piecewise-affine cubes, the cubical differential, the maps ⊠ and ⊡, the
//! fit-together concatenation #_f, and homology of finite families modulo the
//! fit-together and transposition relations.

use crate::exactalg::{self, FreeComplex, HomologySummary, IntMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;
use thiserror::Error;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoxError {
    #[error("axis {axis} out of range for a {dim}-cube")]
    Axis { axis: usize, dim: usize },
    #[error("faces do not match at {0}")]
    Fit(String),
    #[error("f^-1({value}) not inside the independence locus of the {which} cube, at {point}")]
    Admissibility { value: u8, which: &'static str, point: String },
    #[error("f takes values outside [0,1] at {0}")]
    FRange(String),
    #[error("dimension mismatch: {0}")]
    Dim(String),
    #[error("family not face-closed: face {face} of {member}")]
    NotFaceClosed { member: String, face: String },
    #[error("degenerate family member {0}")]
    DegenerateMember(String),
    #[error(transparent)]
    Linear(#[from] exactalg::AlgError),
}

/// PL map on a product of subdivided intervals, affine on the Kuhn simplices of each subcell.
#[derive(Clone, Debug)]
pub struct PlGrid {
    /// per axis, strictly increasing, starting at 0 and ending at 1
    pub breaks: Vec<Vec<Q>>,
    /// row-major over the lattice, last axis fastest
    pub values: Vec<Vec<Q>>,
    pub target: usize,
}

impl PlGrid {
    pub fn new(breaks: Vec<Vec<Q>>, values: Vec<Vec<Q>>) -> Result<Self, BoxError> {
        for b in &breaks {
            if b.len() < 2 || !b[0].is_zero() || !b[b.len() - 1].is_one() || b.windows(2).any(|w| w[0] >= w[1]) {
                return Err(BoxError::Dim("breakpoints must increase from 0 to 1".into()));
            }
        }
        let count: usize = breaks.iter().map(|b| b.len()).product();
        if values.len() != count {
            return Err(BoxError::Dim(format!("{} lattice values for {} lattice points", values.len(), count)));
        }
        let target = values.first().map(|v| v.len()).unwrap_or(0);
        if values.iter().any(|v| v.len() != target) {
            return Err(BoxError::Dim("ragged lattice values".into()));
        }
        Ok(PlGrid { breaks, values, target })
    }

    fn index(&self, idx: &[usize]) -> usize {
        let mut k = 0;
        for (a, &i) in idx.iter().enumerate() {
            k = k * self.breaks[a].len() + i;
        }
        k
    }

    pub fn eval(&self, x: &[Q]) -> Vec<Q> {
        let n = self.breaks.len();
        let mut cell = Vec::with_capacity(n);
        let mut local = Vec::with_capacity(n);
        for a in 0..n {
            let b = &self.breaks[a];
            let mut j = 0;
            while j + 2 < b.len() && x[a] >= b[j + 1] {
                j += 1;
            }
            cell.push(j);
            local.push((&x[a] - &b[j]) / (&b[j + 1] - &b[j]));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| local[j].cmp(&local[i]).then(i.cmp(&j)));
        let mut corner = cell.clone();
        let mut out: Vec<Q> = vec![Q::zero(); self.target];
        let mut prev = Q::one();
        for step in 0..=n {
            let lam = if step < n { &prev - &local[order[step]] } else { prev.clone() };
            if !lam.is_zero() {
                let v = &self.values[self.index(&corner)];
                for (o, vi) in out.iter_mut().zip(v) {
                    *o += &lam * vi;
                }
            }
            if step < n {
                prev = local[order[step]].clone();
                corner[order[step]] += 1;
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub enum Reparam {
    /// insert ε as coordinate k (1-based)
    Face { k: usize, eps: u8 },
    /// swap coordinates k, k+1
    Transpose { k: usize },
    /// last two coordinates ↦ min(sum, threshold); the standard map has threshold 1
    BoxSlash { threshold: Q },
    /// ⊡ on coordinates k, k+1 and the last one
    BoxDot { k: usize },
    /// last coordinate ↦ f·t, or f + (1 − f)·t
    Shrink { f: Rc<Expr>, second: bool },
}

#[derive(Clone, Debug)]
pub enum Expr {
    Grid(PlGrid),
    Pre(Rc<Expr>, Reparam),
    Concat { s1: Rc<Expr>, s2: Rc<Expr>, f: Rc<Expr> },
}

impl Reparam {
    fn apply(&self, x: &[Q]) -> Vec<Q> {
        match self {
            Reparam::Face { k, eps } => {
                let mut y = x.to_vec();
                y.insert(k - 1, Q::from_integer(BigInt::from(*eps)));
                y
            }
            Reparam::Transpose { k } => {
                let mut y = x.to_vec();
                y.swap(k - 1, *k);
                y
            }
            Reparam::BoxSlash { threshold } => {
                let n = x.len();
                if n < 2 {
                    return vec![];
                }
                let mut y = x[..n - 2].to_vec();
                let s = &x[n - 2] + &x[n - 1];
                y.push(if &s <= threshold { s } else { threshold.clone() });
                y
            }
            Reparam::BoxDot { k } => {
                let n = x.len();
                let half = q(1, 2);
                let t = &x[n - 1];
                let mut y = x[..n - 1].to_vec();
                for c in [k - 1, *k] {
                    y[c] = &half + (Q::one() - t) * (&x[c] - &half);
                }
                y
            }
            Reparam::Shrink { f, second } => {
                let n = x.len();
                let fv = f.eval(&x[..n - 1])[0].clone();
                let mut y = x.to_vec();
                y[n - 1] = if *second { &fv + (Q::one() - &fv) * &x[n - 1] } else { &fv * &x[n - 1] };
                y
            }
        }
    }
}

impl Expr {
    pub fn eval(&self, x: &[Q]) -> Vec<Q> {
        match self {
            Expr::Grid(g) => g.eval(x),
            Expr::Pre(e, r) => e.eval(&r.apply(x)),
            Expr::Concat { s1, s2, f } => {
                let n = x.len();
                let fv = f.eval(&x[..n - 1])[0].clone();
                let t = &x[n - 1];
                let mut y = x.to_vec();
                if t <= &fv {
                    y[n - 1] = if fv.is_zero() { Q::zero() } else { t / &fv };
                    s1.eval(&y)
                } else {
                    y[n - 1] = (t - &fv) / (Q::one() - &fv);
                    s2.eval(&y)
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Cube {
    pub dim: usize,
    pub target: usize,
    pub expr: Rc<Expr>,
}

fn show_point(x: &[Q]) -> String {
    format!("({})", x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
}

/// Lattice of step 1/L plus seeded random rational points; fixed per dimension.
pub fn witness_points(dim: usize) -> Vec<Vec<Q>> {
    let l: i64 = match dim {
        0 => 1,
        1 | 2 => 6,
        3 => 4,
        _ => 2,
    };
    let mut pts: Vec<Vec<Q>> = vec![vec![]];
    for _ in 0..dim {
        let mut next = Vec::new();
        for p in &pts {
            for i in 0..=l {
                let mut pp = p.clone();
                pp.push(q(i, l));
                next.push(pp);
            }
        }
        pts = next;
    }
    if dim > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(0xC0BE + dim as u64);
        let dens = [7i64, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67];
        for r in 0..16 {
            let p = (0..dim)
                .map(|a| {
                    let d = dens[(r + 5 * a) % dens.len()];
                    q(rng.gen_range(1..d), d)
                })
                .collect();
            pts.push(p);
        }
    }
    pts
}

impl Cube {
    pub fn grid(g: PlGrid) -> Self {
        Cube { dim: g.breaks.len(), target: g.target, expr: Rc::new(Expr::Grid(g)) }
    }

    /// The cube constant at a point.
    pub fn constant(dim: usize, value: Vec<Q>) -> Self {
        let breaks = vec![vec![Q::zero(), Q::one()]; dim];
        let values = vec![value; 1 << dim];
        Cube::grid(PlGrid::new(breaks, values).expect("constant grid"))
    }

    pub fn eval(&self, x: &[Q]) -> Vec<Q> {
        self.expr.eval(x)
    }

    fn pre(&self, r: Reparam, dim: usize) -> Cube {
        Cube { dim, target: self.target, expr: Rc::new(Expr::Pre(self.expr.clone(), r)) }
    }

    pub fn fingerprint(&self) -> Vec<Q> {
        witness_points(self.dim).iter().flat_map(|p| self.eval(p)).collect()
    }

    /// First witness point where the two cubes differ.
    pub fn difference(&self, other: &Cube) -> Option<Vec<Q>> {
        if self.dim != other.dim {
            return Some(vec![]);
        }
        witness_points(self.dim).into_iter().find(|p| self.eval(p) != other.eval(p))
    }

    pub fn same_map(&self, other: &Cube) -> bool {
        self.difference(other).is_none()
    }

    /// Witness that the cube depends on coordinate k, if any.
    pub fn depends_on(&self, k: usize) -> Option<Vec<Q>> {
        for p in witness_points(self.dim) {
            let v = self.eval(&p);
            for alt in [Q::zero(), q(1, 2), Q::one()] {
                let mut pp = p.clone();
                pp[k - 1] = alt;
                if self.eval(&pp) != v {
                    return Some(p);
                }
            }
        }
        None
    }

    pub fn independent_of(&self, k: usize) -> bool {
        self.depends_on(k).is_none()
    }

    /// Some coordinate the map factors away from.
    pub fn degenerate_axis(&self) -> Option<usize> {
        (1..=self.dim).find(|&k| self.independent_of(k))
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate_axis().is_some()
    }

    pub fn face(&self, k: usize, eps: u8) -> Result<Cube, BoxError> {
        if k == 0 || k > self.dim {
            return Err(BoxError::Axis { axis: k, dim: self.dim });
        }
        Ok(self.pre(Reparam::Face { k, eps }, self.dim - 1))
    }

    pub fn transpose(&self, k: usize) -> Result<Cube, BoxError> {
        if k == 0 || k >= self.dim {
            return Err(BoxError::Axis { axis: k, dim: self.dim });
        }
        Ok(self.pre(Reparam::Transpose { k }, self.dim))
    }

    /// σ ∘ ⊠_{i+1} for a cube of dimension i.
    pub fn box_slash_map(&self) -> Cube {
        self.box_slash_with(Q::one())
    }

    pub fn box_slash_with(&self, threshold: Q) -> Cube {
        self.pre(Reparam::BoxSlash { threshold }, self.dim + 1)
    }

    /// σ ∘ ⊡_k for a cube of dimension i, 1 ≤ k < i.
    pub fn box_dot_map(&self, k: usize) -> Result<Cube, BoxError> {
        if k == 0 || k >= self.dim {
            return Err(BoxError::Axis { axis: k, dim: self.dim });
        }
        Ok(self.pre(Reparam::BoxDot { k }, self.dim + 1))
    }

    fn check_f(&self, f: &Cube) -> Result<(), BoxError> {
        if self.dim == 0 || f.dim + 1 != self.dim || f.target != 1 {
            return Err(BoxError::Dim(format!("f must map the {}-cube to [0,1]", self.dim.saturating_sub(1))));
        }
        for p in witness_points(f.dim) {
            let v = &f.eval(&p)[0];
            if v.is_negative() || v > &Q::one() {
                return Err(BoxError::FRange(show_point(&p)));
            }
        }
        Ok(())
    }

    /// σ₁^f and σ₂^f: restrictions to the two halves cut by the graph of f.
    pub fn split(&self, f: &Cube) -> Result<(Cube, Cube), BoxError> {
        self.check_f(f)?;
        let a = self.pre(Reparam::Shrink { f: f.expr.clone(), second: false }, self.dim);
        let b = self.pre(Reparam::Shrink { f: f.expr.clone(), second: true }, self.dim);
        Ok((a, b))
    }

    pub fn boundary(&self) -> CubicalChain {
        let mut out = CubicalChain::zero(self.dim.saturating_sub(1));
        for k in 1..=self.dim {
            for eps in 0..2u8 {
                let s = if (k + eps as usize) % 2 == 0 { 1 } else { -1 };
                out.add(self.face(k, eps).expect("axis in range"), s);
            }
        }
        out
    }
}

/// σ₁ #_f σ₂ after checking that the cubes fit and that f is admissible.
pub fn concat_f(s1: &Cube, s2: &Cube, f: &Cube) -> Result<Cube, BoxError> {
    if s1.dim != s2.dim || s1.target != s2.target {
        return Err(BoxError::Dim("concatenated cubes differ in shape".into()));
    }
    s1.check_f(f)?;
    let i = s1.dim;
    if let Some(p) = s1.face(i, 1)?.difference(&s2.face(i, 0)?) {
        return Err(BoxError::Fit(show_point(&p)));
    }
    for p in witness_points(i - 1) {
        let v = f.eval(&p)[0].clone();
        for (val, which, c) in [(0u8, "first", s1), (1u8, "second", s2)] {
            if v != Q::from_integer(BigInt::from(val)) {
                continue;
            }
            let base = {
                let mut x = p.clone();
                x.push(Q::zero());
                c.eval(&x)
            };
            for t in witness_points(1) {
                let mut x = p.clone();
                x.push(t[0].clone());
                if c.eval(&x) != base {
                    return Err(BoxError::Admissibility { value: val, which, point: show_point(&x) });
                }
            }
        }
    }
    Ok(Cube {
        dim: i,
        target: s1.target,
        expr: Rc::new(Expr::Concat { s1: s1.expr.clone(), s2: s2.expr.clone(), f: f.expr.clone() }),
    })
}

/// Integer combination of cubes of one dimension, modulo degenerate cubes;
/// cubes are identified by their values on the witness set.
#[derive(Clone, Debug)]
pub struct CubicalChain {
    pub dim: usize,
    terms: BTreeMap<Vec<Q>, (Cube, i64)>,
}

impl CubicalChain {
    pub fn zero(dim: usize) -> Self {
        CubicalChain { dim, terms: BTreeMap::new() }
    }

    pub fn add(&mut self, c: Cube, coeff: i64) {
        if coeff == 0 || c.is_degenerate() {
            return;
        }
        let key = c.fingerprint();
        let entry = self.terms.entry(key.clone()).or_insert((c, 0));
        entry.1 += coeff;
        if entry.1 == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn add_chain(&mut self, other: &CubicalChain, coeff: i64) {
        for (c, v) in other.terms.values() {
            self.add(c.clone(), v * coeff);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Cube, i64)> {
        self.terms.values().map(|(c, v)| (c, *v))
    }

    pub fn boundary(&self) -> CubicalChain {
        let mut out = CubicalChain::zero(self.dim.saturating_sub(1));
        for (c, v) in self.terms.values() {
            out.add_chain(&c.boundary(), *v);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Certificate {
    pub name: String,
    pub pass: bool,
    pub witness: Option<String>,
}

impl Certificate {
    fn new(name: String, witness: Option<Vec<Q>>) -> Self {
        Certificate { name, pass: witness.is_none(), witness: witness.map(|p| show_point(&p)) }
    }

    fn from_eq(name: String, a: &Cube, b: &Cube) -> Self {
        Certificate::new(name, a.difference(b))
    }

    fn degenerate(name: String, c: &Cube, axes: &[usize]) -> Self {
        let w = axes.iter().find_map(|&k| c.depends_on(k));
        Certificate::new(name, w)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "{}\tpass", self.name),
            Some(w) => write!(f, "{}\tfail\t{}", self.name, w),
        }
    }
}

/// ∂_{k,ε}σ + ∂_{k+1,ε}(σ∘φ_k) = 0, i.e. σ∘δ_{k,ε} = σ∘φ_k∘δ_{k+1,ε}.
pub fn cancelling_permute(sigma: &Cube) -> Vec<Certificate> {
    let mut out = Vec::new();
    for k in 1..sigma.dim {
        for eps in 0..2u8 {
            let a = sigma.face(k, eps).unwrap();
            let b = sigma.transpose(k).unwrap().face(k + 1, eps).unwrap();
            out.push(Certificate::from_eq(format!("cancel k={k} e={eps}"), &a, &b));
        }
    }
    out
}

/// Face identities and commutation of the pair map (σ, f) ↦ (σ∘⊠, f∘⊠).
pub fn box_slash(sigma: &Cube, f: Option<&Cube>) -> Result<Vec<Certificate>, BoxError> {
    box_slash_with(sigma, f, Q::one())
}

pub fn box_slash_with(sigma: &Cube, f: Option<&Cube>, threshold: Q) -> Result<Vec<Certificate>, BoxError> {
    let i = sigma.dim;
    if i == 0 {
        return Err(BoxError::Axis { axis: 1, dim: 0 });
    }
    if let Some(f) = f {
        sigma.check_f(f)?;
    }
    let h = sigma.box_slash_with(threshold.clone());
    let mut out = vec![
        Certificate::from_eq("slash face (i,0)".into(), &h.face(i, 0)?, sigma),
        Certificate::degenerate("slash face (i,1) degenerate".into(), &h.face(i, 1)?, &[i]),
    ];
    for k in 1..i {
        for eps in 0..2u8 {
            let a = h.face(k, eps)?;
            let b = sigma.face(k, eps)?.box_slash_with(threshold.clone());
            out.push(Certificate::from_eq(format!("slash commutes k={k} e={eps}"), &a, &b));
        }
    }
    if let Some(f) = f {
        let hf = f.box_slash_with(threshold.clone());
        if i >= 2 {
            out.push(Certificate::from_eq("slash f face (i-1,0)".into(), &hf.face(i - 1, 0)?, f));
            out.push(Certificate::degenerate("slash f face (i-1,1) degenerate".into(), &hf.face(i - 1, 1)?, &[i - 1]));
        }
        for k in 1..i.saturating_sub(1) {
            for eps in 0..2u8 {
                let a = hf.face(k, eps)?;
                let b = f.face(k, eps)?.box_slash_with(threshold.clone());
                out.push(Certificate::from_eq(format!("slash f commutes k={k} e={eps}"), &a, &b));
            }
        }
    }
    Ok(out)
}

/// σ∘⊡_k∘δ_{i+1,0} = σ, the δ_{i+1,1} face is constant in coordinates k, k+1,
/// and ⊡ commutes with the remaining faces.
pub fn box_dot(sigma: &Cube, k: usize) -> Result<Vec<Certificate>, BoxError> {
    let i = sigma.dim;
    let h = sigma.box_dot_map(k)?;
    let mut out = vec![
        Certificate::from_eq("dot face (i+1,0)".into(), &h.face(i + 1, 0)?, sigma),
        Certificate::degenerate("dot face (i+1,1) degenerate".into(), &h.face(i + 1, 1)?, &[k, k + 1]),
    ];
    for j in 1..=i {
        if j == k || j == k + 1 {
            continue;
        }
        let kk = if j < k { k - 1 } else { k };
        for eps in 0..2u8 {
            let a = h.face(j, eps)?;
            let b = sigma.face(j, eps)?.box_dot_map(kk)?;
            out.push(Certificate::from_eq(format!("dot commutes j={j} e={eps}"), &a, &b));
        }
    }
    Ok(out)
}

/// σ₁^f #_f σ₂^f = σ.
pub fn split_roundtrip(sigma: &Cube, f: &Cube) -> Result<Certificate, BoxError> {
    let (a, b) = sigma.split(f)?;
    let c = concat_f(&a, &b, f)?;
    Ok(Certificate::from_eq("split/concat round trip".into(), &c, sigma))
}

pub fn random_grid(rng: &mut impl Rng, dim: usize, target: usize) -> Cube {
    let breaks: Vec<Vec<Q>> = (0..dim)
        .map(|_| {
            let mut b = vec![Q::zero()];
            if rng.gen_bool(0.5) {
                let d = [3i64, 4, 5][rng.gen_range(0..3)];
                b.push(q(rng.gen_range(1..d), d));
            }
            b.push(Q::one());
            b
        })
        .collect();
    let count: usize = breaks.iter().map(|b| b.len()).product();
    let values = (0..count).map(|_| (0..target).map(|_| q(rng.gen_range(-6..=6), rng.gen_range(1..=3))).collect()).collect();
    Cube::grid(PlGrid::new(breaks, values).expect("random grid"))
}

/// Random admissible f with values in [1/4, 3/4].
pub fn random_f(rng: &mut impl Rng, dim: usize) -> Cube {
    let count = 1usize << dim;
    let breaks = vec![vec![Q::zero(), Q::one()]; dim];
    let values = (0..count).map(|_| vec![q(rng.gen_range(1..=3), 4)]).collect();
    Cube::grid(PlGrid::new(breaks, values).expect("random f"))
}

#[derive(Clone, Debug)]
pub struct Family {
    pub name: String,
    pub members: Vec<(String, Cube)>,
    /// cutting functions used to enumerate fit-together instances
    pub cuts: Vec<Cube>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub kind: &'static str,
    pub dim: usize,
    pub terms: Vec<(usize, i64)>,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CompareReport {
    pub family: String,
    pub relations: usize,
    pub cubical: Vec<HomologySummary>,
    pub quotient: Vec<HomologySummary>,
}

impl CompareReport {
    pub fn agree(&self) -> bool {
        self.cubical == self.quotient
    }
}

impl Family {
    fn lookup(&self) -> BTreeMap<Vec<Q>, usize> {
        self.members.iter().enumerate().map(|(i, (_, c))| (c.fingerprint(), i)).collect()
    }

    fn top(&self) -> usize {
        self.members.iter().map(|(_, c)| c.dim).max().unwrap_or(0)
    }

    /// Per dimension, member indices in listing order.
    fn by_dim(&self) -> Vec<Vec<usize>> {
        let mut v = vec![Vec::new(); self.top() + 1];
        for (i, (_, c)) in self.members.iter().enumerate() {
            v[c.dim].push(i);
        }
        v
    }

    /// Member boundaries as member combinations.
    pub fn boundaries(&self) -> Result<Vec<Vec<(usize, i64)>>, BoxError> {
        let look = self.lookup();
        let mut out = Vec::new();
        for (name, c) in &self.members {
            if c.is_degenerate() {
                return Err(BoxError::DegenerateMember(name.clone()));
            }
            let mut col = Vec::new();
            for (face, v) in c.boundary().terms() {
                let Some(&j) = look.get(&face.fingerprint()) else {
                    return Err(BoxError::NotFaceClosed {
                        member: name.clone(),
                        face: show_point(&face.eval(&vec![q(1, 3); face.dim])),
                    });
                };
                col.push((j, v));
            }
            out.push(col);
        }
        Ok(out)
    }

    /// Fit-together and transposition instances among members.
    pub fn relations(&self) -> Result<Vec<Relation>, BoxError> {
        let look = self.lookup();
        let mut out: Vec<Relation> = Vec::new();
        for (i, (_, c)) in self.members.iter().enumerate() {
            for f in self.cuts.iter().filter(|f| f.dim + 1 == c.dim) {
                let (a, b) = c.split(f)?;
                if let (Some(&ia), Some(&ib)) = (look.get(&a.fingerprint()), look.get(&b.fingerprint())) {
                    let glued = concat_f(&a, &b, f)?;
                    if glued.same_map(c) {
                        let mut terms = BTreeMap::new();
                        *terms.entry(ia).or_insert(0) += 1;
                        *terms.entry(ib).or_insert(0) += 1;
                        *terms.entry(i).or_insert(0) -= 1;
                        out.push(Relation { kind: "fit", dim: c.dim, terms: terms.into_iter().filter(|t| t.1 != 0).collect() });
                    }
                }
            }
            for k in 1..c.dim {
                let t = c.transpose(k)?;
                if let Some(&j) = look.get(&t.fingerprint()) {
                    if j < i {
                        continue;
                    }
                    let terms = if j == i { vec![(i, 2)] } else { vec![(i, 1), (j, 1)] };
                    let r = Relation { kind: "transpose", dim: c.dim, terms };
                    if !out.contains(&r) {
                        out.push(r);
                    }
                }
            }
        }
        Ok(out)
    }
}

fn homological_complex(dims: &[usize], bd: &[IntMatrix]) -> FreeComplex {
    // bd[n] : C_n → C_{n−1}, n ≥ 1; stored cohomologically in degree −n
    let top = dims.len() - 1;
    let basis: Vec<Vec<String>> = (0..=top).rev().map(|n| (0..dims[n]).map(|i| format!("{n}:{i}")).collect()).collect();
    let diffs = (1..=top).rev().map(|n| bd[n].clone()).collect();
    FreeComplex { min_degree: -(top as i64), basis, diffs }
}

fn homology_table(fc: &FreeComplex, top: usize) -> Result<Vec<HomologySummary>, BoxError> {
    (0..=top)
        .map(|n| {
            let mut h = exactalg::homology(fc, -(n as i64))?;
            h.degree = n as i64;
            Ok(h)
        })
        .collect()
}

/// H of the span of the family in C_* and in C_* modulo the relation subcomplex,
/// the latter through the mapping cone of the inclusion.
pub fn quotient_homology_compare(family: &Family) -> Result<CompareReport, BoxError> {
    let bds = family.boundaries()?;
    let rels = family.relations()?;
    let by_dim = family.by_dim();
    let top = family.top();
    let dims: Vec<usize> = by_dim.iter().map(|v| v.len()).collect();
    let pos: BTreeMap<usize, usize> =
        by_dim.iter().flat_map(|v| v.iter().enumerate().map(|(p, &i)| (i, p))).collect();
    let mut bd: Vec<IntMatrix> = vec![IntMatrix::zeros(0, dims[0])];
    for n in 1..=top {
        let mut m = IntMatrix::zeros(dims[n - 1], dims[n]);
        for (col, &i) in by_dim[n].iter().enumerate() {
            for &(j, v) in &bds[i] {
                m.add_to(pos[&j], col, &BigInt::from(v));
            }
        }
        bd.push(m);
    }
    let cubical = homology_table(&homological_complex(&dims, &bd), top)?;

    let mut gens: Vec<Vec<Vec<BigInt>>> = vec![Vec::new(); top + 1];
    let vec_of = |n: usize, terms: &[(usize, i64)]| {
        let mut v = vec![BigInt::zero(); dims[n]];
        for &(i, c) in terms {
            v[pos[&i]] += BigInt::from(c);
        }
        v
    };
    for r in &rels {
        gens[r.dim].push(vec_of(r.dim, &r.terms));
        if r.dim > 0 {
            let mut b = vec![BigInt::zero(); dims[r.dim - 1]];
            for &(i, c) in &r.terms {
                for &(j, v) in &bds[i] {
                    b[pos[&j]] += BigInt::from(c * v);
                }
            }
            if b.iter().any(|x| !x.is_zero()) {
                gens[r.dim - 1].push(b);
            }
        }
    }
    // basis of each S_n and the matrix of ∂ restricted to S
    let mut s_basis: Vec<Vec<Vec<BigInt>>> = Vec::new();
    let mut s_solve: Vec<(IntMatrix, Vec<BigInt>)> = Vec::new();
    for n in 0..=top {
        let cols = &gens[n];
        let mut m = IntMatrix::zeros(dims[n], cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                if !v.is_zero() {
                    m.set(i, j, v.clone());
                }
            }
        }
        if cols.is_empty() {
            s_basis.push(vec![]);
            s_solve.push((IntMatrix::identity(dims[n]), vec![]));
            continue;
        }
        let s = exactalg::smith_normal_form(&m);
        let diag: Vec<BigInt> = s.diagonal().into_iter().filter(|x| !x.is_zero()).collect();
        let mv = m.mul(&s.v)?;
        let basis = (0..diag.len()).map(|j| (0..dims[n]).map(|i| mv.get(i, j)).collect()).collect();
        s_basis.push(basis);
        s_solve.push((s.u, diag));
    }
    let coords = |n: usize, v: &[BigInt]| -> Result<Vec<BigInt>, BoxError> {
        let (u, diag) = &s_solve[n];
        let mut out = Vec::new();
        for (i, d) in diag.iter().enumerate() {
            let mut acc = BigInt::zero();
            for (j, x) in v.iter().enumerate() {
                acc += u.get(i, j) * x;
            }
            if !(&acc % d).is_zero() {
                return Err(BoxError::Dim("relation boundary leaves the relation span".into()));
            }
            out.push(acc / d);
        }
        Ok(out)
    };
    // cone_n = S_{n−1} ⊕ C_n, d(s, c) = (−∂s, s + ∂c)
    let sdim: Vec<usize> = s_basis.iter().map(|b| b.len()).collect();
    let cone_dims: Vec<usize> = (0..=top + 1)
        .map(|n| if n == 0 { dims[0] } else { sdim[n - 1] + if n <= top { dims[n] } else { 0 } })
        .collect();
    let mut cone_bd: Vec<IntMatrix> = vec![IntMatrix::zeros(0, cone_dims[0])];
    for n in 1..=top + 1 {
        let mut m = IntMatrix::zeros(cone_dims[n - 1], cone_dims[n]);
        let s_off_lo = if n >= 2 { sdim[n - 2] } else { 0 };
        for (a, b) in s_basis[n - 1].iter().enumerate() {
            if n >= 2 {
                let mut db = vec![BigInt::zero(); dims[n - 2]];
                for (j, x) in b.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (i, _, v) in bd[n - 1].entries().filter(|e| e.1 == j) {
                        db[i] += v * x;
                    }
                }
                for (i, y) in coords(n - 2, &db)?.into_iter().enumerate() {
                    if !y.is_zero() {
                        m.set(i, a, -y);
                    }
                }
            }
            for (i, x) in b.iter().enumerate() {
                if !x.is_zero() {
                    m.add_to(s_off_lo + i, a, x);
                }
            }
        }
        if n <= top {
            for (i, j, v) in bd[n].entries() {
                m.add_to(s_off_lo + i, sdim[n - 1] + j, v);
            }
        }
        cone_bd.push(m);
    }
    let cone = homological_complex(&cone_dims, &cone_bd);
    if exactalg::validate_complex(&cone)? != exactalg::Verdict::Pass {
        return Err(BoxError::Dim("mapping cone is not a complex".into()));
    }
    let quotient = homology_table(&cone, top)?;
    Ok(CompareReport { family: family.name.clone(), relations: rels.len(), cubical, quotient })
}

fn square_loop(scale: i64) -> Cube {
    let b = vec![Q::zero(), q(1, 4), q(1, 2), q(3, 4), Q::one()];
    let s = |x: i64, y: i64| vec![q(x * scale, 1), q(y * scale, 1)];
    let values = vec![s(0, 0), s(1, 0), s(1, 1), s(0, 1), s(0, 0)];
    Cube::grid(PlGrid::new(vec![b], values).expect("square loop"))
}

fn half() -> Cube {
    Cube::constant(0, vec![q(1, 2)])
}

fn circle_members(loop_: &Cube, tag: &str, with_base: bool) -> Vec<(String, Cube)> {
    let f0 = half();
    let f1 = Cube::constant(1, vec![q(1, 2)]);
    let (c1, c2) = loop_.split(&f0).unwrap();
    let h = loop_.box_slash_map();
    let (h1, h2) = h.split(&f1).unwrap();
    let e = h1.face(2, 1).unwrap();
    let l = h.box_slash_map();
    let a = loop_.face(1, 0).unwrap();
    let b = c1.face(1, 1).unwrap();
    let mut v = Vec::new();
    if with_base {
        v.push(("a".to_string(), a));
    }
    v.push((format!("b{tag}"), b));
    v.push((format!("c1{tag}"), c1));
    v.push((format!("c2{tag}"), c2));
    v.push((format!("c12{tag}"), loop_.clone()));
    v.push((format!("e{tag}"), e));
    v.push((format!("H{tag}"), h));
    v.push((format!("H1{tag}"), h1));
    v.push((format!("H2{tag}"), h2));
    v.push((format!("L{tag}"), l));
    v
}

/// The boundary of the unit square as a loop, its halves, and the ⊠ homotopies.
pub fn circle_family() -> Family {
    Family {
        name: "circle".into(),
        members: circle_members(&square_loop(1), "", true),
        cuts: vec![half(), Cube::constant(1, vec![q(1, 2)])],
    }
}

pub fn point_family() -> Family {
    Family { name: "point".into(), members: vec![("p".into(), Cube::constant(0, vec![Q::zero(), Q::zero()]))], cuts: vec![] }
}

/// Two circle families glued at the common base vertex.
pub fn figure_eight_family() -> Family {
    let mut members = circle_members(&square_loop(1), "", true);
    members.extend(circle_members(&square_loop(-1), "'", false));
    Family { name: "figure-eight".into(), members, cuts: vec![half(), Cube::constant(1, vec![q(1, 2)])] }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct BoxReport {
    pub cubes: usize,
    pub certificates: usize,
    pub failures: Vec<String>,
    pub d_squared_failures: usize,
    pub comparisons: Vec<(String, bool)>,
}

impl BoxReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty() && self.d_squared_failures == 0 && self.comparisons.iter().all(|c| c.1)
    }
}

/// All certificates on `count` seeded random cubes of each dimension 1..=3, plus the family comparisons.
pub fn verify_all(seed: u64, count: usize) -> Result<BoxReport, BoxError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut certs = 0;
    let mut d2 = 0;
    let mut cubes = 0;
    for dim in 1..=3 {
        for n in 0..count {
            let s = random_grid(&mut rng, dim, 2);
            let f = random_f(&mut rng, dim - 1);
            cubes += 1;
            let mut cs = cancelling_permute(&s);
            cs.extend(box_slash(&s, Some(&f))?);
            for k in 1..dim {
                cs.extend(box_dot(&s, k)?);
            }
            cs.push(split_roundtrip(&s, &f)?);
            let mut ch = CubicalChain::zero(dim);
            ch.add(s.clone(), 1);
            if !ch.boundary().boundary().is_zero() {
                d2 += 1;
            }
            certs += cs.len();
            for c in cs.into_iter().filter(|c| !c.pass) {
                failures.push(format!("dim {dim} cube {n}: {c}"));
            }
        }
    }
    let mut comparisons = Vec::new();
    for fam in [circle_family(), point_family(), figure_eight_family()] {
        let r = quotient_homology_compare(&fam)?;
        comparisons.push((fam.name.clone(), r.agree()));
    }
    Ok(BoxReport { cubes, certificates: certs, failures, d_squared_failures: d2, comparisons })
}
