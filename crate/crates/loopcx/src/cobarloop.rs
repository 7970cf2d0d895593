//! Adams cobar model of based-loop chains on a reduced complex: generators τ_U,
//! contraction chains π, the DGA structure and the map T into Hochschild chains.

use crate::hochschild::{self, HWord};
use crate::ledger::{Conventions, Leibniz, ProductOrder};
use crate::lin::Lin;
use crate::simpcx::{ReducedComplex, Simplex};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CobarError {
    #[error("triple-π boundary undefined")]
    Pi3Boundary,
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("weight cap {cap} too small: {cells:?} need weight up to {need}")]
    Truncation { cap: usize, need: usize, cells: Vec<Simplex> },
    #[error("input complex is not reduced")]
    NotReduced,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum LoopGenerator {
    Unit,
    Tau(Vec<usize>),
    Pi2(Vec<usize>, Vec<usize>),
    Pi3(Vec<usize>, Vec<usize>, Vec<usize>),
}

impl fmt::Display for LoopGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let seq = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("");
        match self {
            LoopGenerator::Unit => write!(f, "1"),
            LoopGenerator::Tau(v) => write!(f, "t{}", seq(v)),
            LoopGenerator::Pi2(a, b) => write!(f, "p({},{})", seq(a), seq(b)),
            LoopGenerator::Pi3(a, b, c) => write!(f, "q({},{},{})", seq(a), seq(b), seq(c)),
        }
    }
}

/// A monomial: generator ids in time order (left factor traversed first); empty = unit.
pub type Mono = Vec<u32>;

/// Any repeated vertex, including first = last, marks a degenerate sequence.
pub fn degenerate(v: &[usize]) -> bool {
    let mut s = v.to_vec();
    s.sort_unstable();
    s.windows(2).any(|w| w[0] == w[1])
}

/// Semifree DGA: tensor algebra on graded generators, differential given on generators.
#[derive(Clone, Debug)]
pub struct FreeDga {
    pub names: Vec<String>,
    pub degree: Vec<i64>,
    pub weight: Vec<usize>,
    /// None marks a generator whose boundary is undefined
    pub boundary: Vec<Option<Lin<Mono>>>,
    pub leibniz: Leibniz,
}

impl FreeDga {
    pub fn mono_degree(&self, m: &[u32]) -> i64 {
        m.iter().map(|&g| self.degree[g as usize]).sum()
    }

    pub fn mono_weight(&self, m: &[u32]) -> usize {
        m.iter().map(|&g| self.weight[g as usize]).sum()
    }

    pub fn d_mono(&self, m: &[u32]) -> Result<Lin<Mono>, CobarError> {
        let mut out = Lin::zero();
        let n = m.len();
        let mut prefix = 0i64;
        let total = self.mono_degree(m);
        for i in 0..n {
            let g = m[i] as usize;
            let bg = self.boundary[g].as_ref().ok_or(CobarError::Pi3Boundary)?;
            let dg = self.degree[g];
            if !bg.is_zero() {
                let exp = match self.leibniz {
                    Leibniz::Left => prefix,
                    Leibniz::Right => total - prefix - dg,
                };
                let sign = if exp.rem_euclid(2) == 0 { 1 } else { -1 };
                for (mm, c) in bg.iter() {
                    let mut w = Vec::with_capacity(n + mm.len());
                    w.extend_from_slice(&m[..i]);
                    w.extend_from_slice(mm);
                    w.extend_from_slice(&m[i + 1..]);
                    out.add_term(w, sign * c);
                }
            }
            prefix += dg;
        }
        Ok(out)
    }

    pub fn d(&self, x: &Lin<Mono>) -> Result<Lin<Mono>, CobarError> {
        x.try_map_lin(|m| self.d_mono(m))
    }

    /// μ₂(s₂, s₁) = (−1)^{|s₁|} s₁·s₂ on monomials.
    pub fn mu2_mono(&self, s2: &[u32], s1: &[u32]) -> (Mono, i64) {
        let mut w = s1.to_vec();
        w.extend_from_slice(s2);
        let sign = if self.mono_degree(s1).rem_euclid(2) == 0 { 1 } else { -1 };
        (w, sign)
    }

    pub fn mu2(&self, s2: &Lin<Mono>, s1: &Lin<Mono>) -> Lin<Mono> {
        let mut out = Lin::zero();
        for (a, ca) in s2.iter() {
            for (b, cb) in s1.iter() {
                let (w, s) = self.mu2_mono(a, b);
                out.add_term(w, s * ca * cb);
            }
        }
        out
    }

    pub fn dot(&self, x: &Lin<Mono>, y: &Lin<Mono>) -> Lin<Mono> {
        let mut out = Lin::zero();
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                let mut w = a.clone();
                w.extend_from_slice(b);
                out.add_term(w, ca * cb);
            }
        }
        out
    }

    pub fn show_mono(&self, m: &[u32]) -> String {
        if m.is_empty() {
            return "1".into();
        }
        m.iter().map(|&g| self.names[g as usize].as_str()).collect::<Vec<_>>().join("*")
    }
}

impl hochschild::AInfinity for FreeDga {
    type Elt = Mono;

    fn degree(&self, a: &Mono) -> i64 {
        self.mono_degree(a)
    }

    fn weight(&self, a: &Mono) -> usize {
        self.mono_weight(a)
    }

    fn mu(&self, args: &[&Mono]) -> Result<Lin<Mono>, hochschild::HochError> {
        match args.len() {
            1 => self.d_mono(args[0]).map_err(|e| hochschild::HochError::Algebra(e.to_string())),
            2 => {
                let (w, s) = self.mu2_mono(args[0], args[1]);
                Ok(Lin::single(w, s))
            }
            _ => Ok(Lin::zero()),
        }
    }

    fn show(&self, a: &Mono) -> String {
        self.show_mono(a)
    }
}

/// Cobar algebra of a reduced complex with every generator T can produce.
#[derive(Clone, Debug)]
pub struct Cobar {
    pub reduced: ReducedComplex,
    pub conv: Conventions,
    pub gens: Vec<LoopGenerator>,
    ids: HashMap<LoopGenerator, u32>,
    pub dga: FreeDga,
    /// ids of τ on increasing cells, the cobar generators proper
    pub tau_ids: Vec<u32>,
}

fn rotations(cell: &[usize]) -> Vec<Vec<usize>> {
    let n = cell.len();
    (0..n).map(|s| (0..n).map(|i| cell[(s + i) % n]).collect()).collect()
}

fn sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

impl Cobar {
    pub fn new(reduced: &ReducedComplex, conv: &Conventions) -> Self {
        let mut gens = Vec::new();
        let mut cells = Vec::new();
        for k in 1..=reduced.dim() {
            for cell in reduced.cells(k) {
                for (rot, v) in rotations(&cell).into_iter().enumerate() {
                    if rot == 0 {
                        cells.push(LoopGenerator::Tau(v.clone()));
                    }
                    gens.push(LoopGenerator::Tau(v.clone()));
                    for r in 1..=k {
                        let u1 = v[..=r].to_vec();
                        let mut u2 = v[r..].to_vec();
                        u2.push(v[0]);
                        gens.push(LoopGenerator::Pi2(u1.clone(), u2.clone()));
                        for j in 1..r {
                            gens.push(LoopGenerator::Pi3(v[..=j].to_vec(), v[j..=r].to_vec(), u2.clone()));
                        }
                        for i in 1..(u2.len() - 1) {
                            gens.push(LoopGenerator::Pi3(u1.clone(), u2[..=i].to_vec(), u2[i..].to_vec()));
                        }
                    }
                }
            }
        }
        let mut ids = HashMap::new();
        let mut uniq = Vec::new();
        for g in gens {
            if !ids.contains_key(&g) {
                ids.insert(g.clone(), uniq.len() as u32);
                uniq.push(g);
            }
        }
        let gens = uniq;
        let tau_ids = cells.iter().map(|g| ids[g]).collect();
        let degree = gens.iter().map(generator_degree).collect();
        let weight = gens.iter().map(generator_weight).collect();
        let names = gens.iter().map(|g| g.to_string()).collect();
        let mut cob = Cobar {
            reduced: reduced.clone(),
            conv: *conv,
            gens: gens.clone(),
            ids,
            dga: FreeDga { names, degree, weight, boundary: vec![], leibniz: conv.d1_leibniz },
            tau_ids,
        };
        let bnd: Vec<Option<Lin<Mono>>> = gens.iter().map(|g| cob.generator_boundary(g)).collect();
        cob.dga.boundary = bnd;
        cob
    }

    pub fn id(&self, g: &LoopGenerator) -> Option<u32> {
        self.ids.get(g).copied()
    }

    fn is_tree_edge_seq(&self, v: &[usize]) -> bool {
        v.len() == 2 && self.reduced.is_tree_edge(v[0], v[1])
    }

    /// τ_V as an algebra element: zero if degenerate, the unit on a collapsed edge.
    pub fn tau(&self, v: &[usize]) -> Lin<Mono> {
        if degenerate(v) {
            return Lin::zero();
        }
        if self.is_tree_edge_seq(v) {
            return Lin::single(vec![], 1);
        }
        match self.id(&LoopGenerator::Tau(v.to_vec())) {
            Some(i) => Lin::single(vec![i], 1),
            None => panic!("τ on {:?} is not a cell of the complex", v),
        }
    }

    pub fn pi2(&self, u1: &[usize], u2: &[usize]) -> Lin<Mono> {
        let mut all = u1.to_vec();
        all.extend_from_slice(&u2[1..u2.len() - 1]);
        if degenerate(&all) || self.is_tree_edge_seq(&all) {
            return Lin::zero();
        }
        match self.id(&LoopGenerator::Pi2(u1.to_vec(), u2.to_vec())) {
            Some(i) => Lin::single(vec![i], 1),
            None => panic!("π on {:?},{:?} is not a cell contraction", u1, u2),
        }
    }

    pub fn pi3(&self, v1: &[usize], v2: &[usize], v3: &[usize]) -> Lin<Mono> {
        let mut all = v1.to_vec();
        all.extend_from_slice(&v2[1..]);
        all.extend_from_slice(&v3[1..v3.len() - 1]);
        if degenerate(&all) {
            return Lin::zero();
        }
        match self.id(&LoopGenerator::Pi3(v1.to_vec(), v2.to_vec(), v3.to_vec())) {
            Some(i) => Lin::single(vec![i], 1),
            None => panic!("triple π on {:?},{:?},{:?} unknown", v1, v2, v3),
        }
    }

    fn generator_boundary(&self, g: &LoopGenerator) -> Option<Lin<Mono>> {
        match g {
            LoopGenerator::Unit => Some(Lin::zero()),
            LoopGenerator::Tau(v) => Some(self.tau_boundary(v)),
            LoopGenerator::Pi2(a, b) => Some(self.pi2_boundary(a, b)),
            LoopGenerator::Pi3(..) => None,
        }
    }

    pub fn tau_boundary(&self, v: &[usize]) -> Lin<Mono> {
        let k = v.len() - 1;
        let mut out = Lin::zero();
        for j in 1..k {
            let mut f = v.to_vec();
            f.remove(j);
            out.add_scaled(&self.tau(&f), sign(j as i64));
        }
        for r in 1..k {
            let (u1, u2) = (&v[..=r], &v[r..]);
            let term = match self.conv.d1_order {
                ProductOrder::Literal => self.dga.mu2(&self.tau(u1), &self.tau(u2)),
                ProductOrder::Swapped => self.dga.mu2(&self.tau(u2), &self.tau(u1)),
            };
            out.add_scaled(&term, 1);
        }
        out
    }

    pub fn pi2_boundary(&self, u1: &[usize], u2: &[usize]) -> Lin<Mono> {
        let r = u1.len() - 1;
        let k = u1.len() + u2.len() - 3;
        let mut out = Lin::zero();
        if k == 1 {
            out.add_term(vec![], 1);
            out.add_scaled(&self.dga.dot(&self.tau(u1), &self.tau(u2)), -1);
            return out;
        }
        out.add_scaled(&self.dga.mu2(&self.tau(u2), &self.tau(u1)), sign((k - r + 1) as i64));
        for j in 1..r {
            let mut f = u1.to_vec();
            f.remove(j);
            out.add_scaled(&self.pi2(&f, u2), sign(j as i64));
        }
        for j in r + 1..=k {
            let i = j - r;
            let mut f = u2.to_vec();
            f.remove(i);
            out.add_scaled(&self.pi2(u1, &f), sign(j as i64 + 1));
        }
        for j in 1..r {
            out.add_scaled(&self.pi3(&u1[..=j], &u1[j..], u2), sign(j as i64 + 1));
        }
        for j in r + 1..=k {
            let i = j - r;
            out.add_scaled(&self.pi3(u1, &u2[..=i], &u2[i..]), sign((r + j + 1) as i64));
        }
        out
    }

    pub fn is_pi3(&self, g: u32) -> bool {
        matches!(self.gens[g as usize], LoopGenerator::Pi3(..))
    }

    /// Table of the cobar generators proper (τ on increasing cells).
    pub fn cobar_generators(&self) -> Vec<(LoopGenerator, i64)> {
        self.tau_ids.iter().map(|&i| (self.gens[i as usize].clone(), self.dga.degree[i as usize])).collect()
    }

    /// Words over the cobar generators proper of weight at most `cap`, grouped by degree.
    pub fn basis(&self, cap: usize) -> BTreeMap<i64, Vec<Mono>> {
        let mut out: BTreeMap<i64, Vec<Mono>> = BTreeMap::new();
        let mut stack: Vec<(Mono, usize, i64)> = vec![(vec![], 0, 0)];
        while let Some((m, w, d)) = stack.pop() {
            out.entry(d).or_default().push(m.clone());
            for &g in &self.tau_ids {
                let gw = self.dga.weight[g as usize];
                if w + gw <= cap {
                    let mut mm = m.clone();
                    mm.push(g);
                    stack.push((mm, w + gw, d + self.dga.degree[g as usize]));
                }
            }
        }
        for v in out.values_mut() {
            v.sort();
        }
        out
    }

    /// Visit every basis word of weight ≤ cap without materializing the basis.
    pub fn for_each_word<F: FnMut(&[u32])>(&self, cap: usize, mut f: F) {
        fn go<F: FnMut(&[u32])>(c: &Cobar, m: &mut Vec<u32>, w: usize, cap: usize, f: &mut F) {
            f(m);
            for &g in &c.tau_ids {
                let gw = c.dga.weight[g as usize];
                if w + gw <= cap {
                    m.push(g);
                    go(c, m, w + gw, cap, f);
                    m.pop();
                }
            }
        }
        let mut m = Vec::new();
        go(self, &mut m, 0, cap, &mut f);
    }

    pub fn based_loop_complex(&self, cap: usize) -> crate::exactalg::FreeComplex {
        let basis = self.basis(cap);
        let lo = *basis.keys().next().unwrap();
        let hi = *basis.keys().last().unwrap();
        let bases: Vec<Vec<Mono>> = (lo..=hi).map(|d| basis.get(&d).cloned().unwrap_or_default()).collect();
        crate::exactalg::build_complex(lo, bases, |m| {
            self.dga.d_mono(m).expect("τ words have boundaries").iter().map(|(k, c)| (k.clone(), c)).collect()
        })
        .expect("∂ never raises weight")
    }

    /// Words of weight ≤ cap with ∂∂ ≠ 0; also checks that ∂ never raises weight.
    pub fn d_squared_failures(&self, cap: usize) -> (usize, usize, Vec<Mono>) {
        let mut count = 0;
        let mut bad = Vec::new();
        let mut weight_bad = 0;
        self.for_each_word(cap, |m| {
            count += 1;
            if m.iter().all(|&g| self.dga.boundary[g as usize].as_ref().is_some_and(|b| b.is_zero())) {
                return;
            }
            let d1 = self.dga.d_mono(m).expect("τ words have boundaries");
            let w = self.dga.mono_weight(m);
            if d1.keys().any(|k| self.dga.mono_weight(k) > w) {
                weight_bad += 1;
            }
            let d2 = self.dga.d(&d1).expect("τ words have boundaries");
            if !d2.is_zero() {
                bad.push(m.to_vec());
            }
        });
        (count, weight_bad, bad)
    }

    /// T on a cell U = [u₀..u_k] of the reduced complex.
    pub fn adams_t(&self, u: &[usize]) -> Lin<HWord<Mono>> {
        let k = u.len() - 1;
        let ki = k as i64;
        let c = &self.conv;
        let mut out: Lin<HWord<Mono>> = Lin::zero();
        for d in 1..=k + 1 {
            for js in combinations(k + 1, d) {
                let mut cells: Vec<Vec<usize>> = Vec::new();
                for i in 0..d - 1 {
                    cells.push(u[js[i]..=js[i + 1]].to_vec());
                }
                let mut wrap = u[js[d - 1]..].to_vec();
                wrap.extend_from_slice(&u[..=js[0]]);
                cells.push(wrap);
                let e = d as i64 + js[0] as i64 * (ki + 1) + js[d - 1] as i64 + if c.t_tau_shift { ki } else { 0 };
                let letters: Vec<Lin<Mono>> = cells.iter().rev().map(|v| self.tau(v)).collect();
                out.add_scaled(&tensor(&letters), sign(e));
            }
        }
        for j1 in 0..=k {
            for j2 in j1 + 1..=k {
                let a = u[j1..=j2].to_vec();
                let mut b = u[j2..].to_vec();
                b.extend_from_slice(&u[..=j1]);
                let e1 = j1 as i64 * ki + j1 as i64 + j2 as i64 + 1 + c.t_pi_ab_flip as i64;
                let e2 = (j2 as i64 + 1) * (ki + 1) - j1 as i64 + c.t_pi_ba_flip as i64;
                out.add_scaled(&tensor(&[self.pi2(&a, &b)]), sign(e1));
                out.add_scaled(&tensor(&[self.pi2(&b, &a)]), sign(e2));
            }
        }
        out
    }

    pub fn t_weight(&self, cell: &[usize]) -> usize {
        cell.len()
    }

    /// Residual b(T(σ)) − T(∂σ) for every cell, with the triple-π census.
    pub fn verify_t_chain_map(&self, cap: usize) -> Result<TReport, CobarError> {
        let mut cells: Vec<Simplex> = vec![vec![0]];
        for k in 1..=self.reduced.dim() {
            cells.extend(self.reduced.cells(k));
        }
        let over: Vec<Simplex> = cells.iter().filter(|c| self.t_weight(c) > cap).cloned().collect();
        if !over.is_empty() {
            let need = over.iter().map(|c| self.t_weight(c)).max().unwrap();
            return Err(CobarError::Truncation { cap, need, cells: over });
        }
        let mut rows = Vec::new();
        for cell in cells {
            let t = self.adams_t(&cell);
            let mut bt: Lin<HWord<Mono>> = Lin::zero();
            let mut pi3_raw = 0usize;
            for (w, coef) in t.iter() {
                let b = hochschild::hochschild_b(&self.dga, w, &self.conv)
                    .map_err(|_| CobarError::Pi3Boundary)?;
                for (bw, bc) in b.iter() {
                    if bw.iter().any(|m| m.iter().any(|&g| self.is_pi3(g))) {
                        pi3_raw += bc.unsigned_abs() as usize * coef.unsigned_abs() as usize;
                    }
                }
                bt.add_scaled(&b, coef);
            }
            let pi3_net = bt.keys().filter(|w| w.iter().any(|m| m.iter().any(|&g| self.is_pi3(g)))).count();
            let mut rhs: Lin<HWord<Mono>> = Lin::zero();
            for (f, s) in self.reduced.cell_boundary(&cell) {
                rhs.add_scaled(&self.adams_t(&f), s);
            }
            let residual = bt.sub(&rhs);
            rows.push(TRow { cell, residual, pi3_raw, pi3_net });
        }
        Ok(TReport { rows })
    }

    pub fn show_hword(&self, w: &HWord<Mono>) -> String {
        w.iter().map(|m| self.dga.show_mono(m)).collect::<Vec<_>>().join(" | ")
    }
}

pub fn generator_degree(g: &LoopGenerator) -> i64 {
    match g {
        LoopGenerator::Unit => 0,
        LoopGenerator::Tau(v) => 2 - v.len() as i64,
        LoopGenerator::Pi2(a, b) => -((a.len() + b.len()) as i64 - 3),
        LoopGenerator::Pi3(a, b, c) => -((a.len() + b.len() + c.len()) as i64 - 5),
    }
}

pub fn generator_weight(g: &LoopGenerator) -> usize {
    match g {
        LoopGenerator::Unit => 0,
        LoopGenerator::Tau(v) => v.len() - 1,
        LoopGenerator::Pi2(a, b) => a.len() + b.len() - 2,
        LoopGenerator::Pi3(a, b, c) => a.len() + b.len() + c.len() - 3,
    }
}

pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// a_d ⊗ … ⊗ a_1 from letters listed a_d first.
pub fn tensor(letters: &[Lin<Mono>]) -> Lin<HWord<Mono>> {
    let mut acc: Lin<HWord<Mono>> = Lin::single(vec![], 1);
    for l in letters {
        let mut next = Lin::zero();
        for (w, c) in acc.iter() {
            for (m, v) in l.iter() {
                let mut ww = w.clone();
                ww.push(m.clone());
                next.add_term(ww, c * v);
            }
        }
        acc = next;
    }
    acc
}

#[derive(Clone, Debug)]
pub struct TRow {
    pub cell: Simplex,
    pub residual: Lin<HWord<Mono>>,
    pub pi3_raw: usize,
    pub pi3_net: usize,
}

#[derive(Clone, Debug)]
pub struct TReport {
    pub rows: Vec<TRow>,
}

impl TReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.residual.is_zero())
    }

    pub fn failing_cells(&self) -> Vec<&TRow> {
        self.rows.iter().filter(|r| !r.residual.is_zero()).collect()
    }

    pub fn pi3_cancel(&self) -> bool {
        self.rows.iter().all(|r| r.pi3_net == 0 && r.pi3_raw % 2 == 0)
    }
}
