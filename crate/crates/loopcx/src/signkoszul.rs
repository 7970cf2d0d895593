//! Parity arithmetic for the sign formulas of the construction. Every formula is
//! evaluated over the integers first; the parity is taken at the end.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SignError {
    #[error("index constraint violated: {0}")]
    Constraint(String),
    #[error("not a permutation of 0..{0}")]
    NotPermutation(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SignKind {
    Dagger,
    Flat,
    Sharp,
    Diamond,
    Bullet,
    Maltese,
}

/// Index parameters. Which fields are read depends on the formula.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SignParams {
    pub d: usize,
    pub d1: usize,
    pub d2: usize,
    pub r: usize,
    pub k: usize,
    pub i: usize,
    pub j: usize,
}

/// Degrees |x_1|, ..., |x_d| stored 0-based; accessors are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSequence(pub Vec<i64>);

impl DegreeSequence {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn at(&self, k: usize) -> i64 {
        self.0[k - 1]
    }

    /// Σ_{k=lo}^{hi} |x_k|, empty when hi < lo.
    pub fn sum(&self, lo: usize, hi: usize) -> i64 {
        (lo..=hi).map(|k| self.at(k)).sum()
    }

    /// ✠_lo^hi: sum of reduced degrees |x_k|+1.
    pub fn maltese(&self, lo: usize, hi: usize) -> i64 {
        (lo..=hi).map(|k| self.at(k) + 1).sum()
    }
}

fn need(cond: bool, what: &str) -> Result<(), SignError> {
    if cond {
        Ok(())
    } else {
        Err(SignError::Constraint(what.to_string()))
    }
}

pub fn parity(v: i64) -> u8 {
    v.rem_euclid(2) as u8
}

pub fn dagger(x: &DegreeSequence) -> i64 {
    (1..=x.len()).map(|k| k as i64 * x.at(k)).sum()
}

/// Integer value of a sign exponent.
pub fn sign_integer(kind: SignKind, p: SignParams, x: &DegreeSequence) -> Result<i64, SignError> {
    match kind {
        SignKind::Dagger => {
            need(p.d == x.len(), "d = number of degrees")?;
            Ok(dagger(x))
        }
        SignKind::Flat => {
            need(p.d1 <= x.len(), "d1 <= number of degrees")?;
            let (d1, d2) = (p.d1 as i64, p.d2 as i64);
            Ok((d2 + 1) * x.sum(1, p.d1) + d1 + 1)
        }
        SignKind::Sharp => {
            need(p.d == x.len(), "d = number of degrees")?;
            need(p.k + p.d2 <= p.d, "k + d2 <= d")?;
            let (d, d2, k) = (p.d as i64, p.d2 as i64, p.k as i64);
            Ok(d2 * x.sum(1, p.k + p.d2) + d2 * (d - k) + k + 1)
        }
        SignKind::Diamond => {
            need(p.d == x.len(), "d = number of degrees")?;
            need(p.d1 <= p.d, "d1 <= d")?;
            need(p.r + p.d1 <= p.d, "r + d1 <= d")?;
            let d2 = (p.d - p.d1) as i64;
            let (d, r) = (p.d as i64, p.r as i64);
            Ok(r * (d + 1) + x.sum(1, p.r) * x.sum(p.r + 1, p.d) + d2 * x.sum(p.r + 1, p.r + p.d1))
        }
        SignKind::Bullet => {
            need(p.d == x.len(), "d = number of degrees")?;
            need(p.i + p.j < p.d.max(1), "i + j < d")?;
            let d = p.d;
            Ok(x.maltese(1, p.i) * (1 + x.maltese(p.i + 1, d)) + x.maltese(p.i + p.j + 1, d.saturating_sub(1)))
        }
        SignKind::Maltese => {
            need(p.j <= x.len(), "upper index <= number of degrees")?;
            need(p.i >= 1 || p.j == 0, "lower index >= 1")?;
            Ok(x.maltese(p.i.max(1), p.j))
        }
    }
}

pub fn sign_value(kind: SignKind, p: SignParams, x: &DegreeSequence) -> Result<u8, SignError> {
    sign_integer(kind, p, x).map(parity)
}

/// Koszul parity of reordering y_a = x_{perm[a]}: reduced degrees multiply over inversions.
pub fn koszul_permutation_sign(x: &DegreeSequence, perm: &[usize]) -> Result<u8, SignError> {
    let n = x.len();
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(SignError::NotPermutation(n));
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(SignError::NotPermutation(n));
        }
        seen[p] = true;
    }
    let mut s = 0i64;
    for a in 0..n {
        for b in a + 1..n {
            if perm[a] > perm[b] {
                s += (x.0[perm[a]] + 1) * (x.0[perm[b]] + 1);
            }
        }
    }
    Ok(parity(s))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub lhs: i64,
    pub rhs: i64,
    pub lhs_parity: u8,
    pub rhs_parity: u8,
    pub equal: bool,
}

/// The closing identity of the homotopy sign computation, both sides by substitution.
pub fn homotopy_identity_check(
    d: usize,
    d1: usize,
    r: usize,
    x: &DegreeSequence,
) -> Result<IdentityCheck, SignError> {
    need(x.len() == d, "number of degrees = d")?;
    need(d1 <= d, "d2 = d - d1 >= 0")?;
    let d2 = d - d1;
    need(r <= d2, "r <= d2")?;
    let di = d as i64;
    let (d1i, d2i, ri) = (d1 as i64, d2 as i64, r as i64);
    let total = x.sum(1, d);
    let lhs = if d == 0 { 0 } else { x.at(d) } + dagger(x) + di * total;
    let diamond = sign_integer(SignKind::Diamond, SignParams { d, d1, r, ..Default::default() }, x)?;
    let x2 = x.sum(r + d1 + 1, d) + x.sum(1, r);
    let bullet = x.maltese(1, r) * (1 + x.maltese(r + 1, d)) + x.maltese(r + d1 + 1, d.saturating_sub(1));
    let dag1: i64 = (r + 1..=r + d1).map(|k| (ri + k as i64 + d1i) * x.at(k)).sum();
    let dag2: i64 = (1..=r).map(|k| (ri + k as i64) * x.at(k)).sum::<i64>()
        + (r + d1 + 1..=d).map(|k| (di + ri + k as i64) * x.at(k)).sum::<i64>();
    let rhs = diamond + d2i - 1 + x2 + bullet + dag1 + dag2;
    Ok(IdentityCheck {
        lhs,
        rhs,
        lhs_parity: parity(lhs),
        rhs_parity: parity(rhs),
        equal: parity(lhs) == parity(rhs),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub d: usize,
    pub d1: usize,
    pub r: usize,
    pub degs: Vec<i64>,
    pub class: FailureClass,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FailureClass {
    /// r = d2 lies outside the stratum range 0 <= r < d2 where the identity is used.
    BoundaryR,
    Unclassified,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub max_d: usize,
    pub deg_lo: i64,
    pub deg_hi: i64,
    pub total: usize,
    pub pass: usize,
    pub in_range_total: usize,
    pub in_range_pass: usize,
    pub failures_by_class: Vec<(FailureClass, usize)>,
    pub minimal: Vec<Counterexample>,
}

impl SweepReport {
    pub fn pass_rate(&self) -> f64 {
        self.pass as f64 / self.total.max(1) as f64
    }

    pub fn unclassified(&self) -> usize {
        self.failures_by_class
            .iter()
            .filter(|(c, _)| *c == FailureClass::Unclassified)
            .map(|(_, n)| *n)
            .sum()
    }
}

fn all_degree_tuples(d: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        let mut next = Vec::new();
        for t in &out {
            for v in lo..=hi {
                let mut u = t.clone();
                u.push(v);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

/// Exhaustive sweep over 1 <= d <= max_d, 0 <= d1 <= d, 0 <= r <= d2, degrees in [lo, hi].
pub fn sweep_homotopy_identity(max_d: usize, lo: i64, hi: i64) -> SweepReport {
    let mut total = 0;
    let mut pass = 0;
    let mut in_total = 0;
    let mut in_pass = 0;
    let mut boundary = 0;
    let mut unclassified = 0;
    let mut minimal: Vec<Counterexample> = Vec::new();
    for d in 1..=max_d {
        let tuples = all_degree_tuples(d, lo, hi);
        for d1 in 0..=d {
            let d2 = d - d1;
            for r in 0..=d2 {
                let mut first: Option<Counterexample> = None;
                for t in &tuples {
                    let x = DegreeSequence(t.clone());
                    let c = homotopy_identity_check(d, d1, r, &x).expect("sweep indices valid");
                    total += 1;
                    let in_range = r < d2;
                    if in_range {
                        in_total += 1;
                    }
                    if c.equal {
                        pass += 1;
                        if in_range {
                            in_pass += 1;
                        }
                        continue;
                    }
                    let class = if r == d2 { FailureClass::BoundaryR } else { FailureClass::Unclassified };
                    match class {
                        FailureClass::BoundaryR => boundary += 1,
                        FailureClass::Unclassified => unclassified += 1,
                    }
                    if first.is_none() {
                        first = Some(Counterexample { d, d1, r, degs: t.clone(), class });
                    }
                }
                if let Some(c) = first {
                    minimal.push(c);
                }
            }
        }
    }
    SweepReport {
        max_d,
        deg_lo: lo,
        deg_hi: hi,
        total,
        pass,
        in_range_total: in_total,
        in_range_pass: in_pass,
        failures_by_class: vec![(FailureClass::BoundaryR, boundary), (FailureClass::Unclassified, unclassified)],
        minimal,
    }
}
