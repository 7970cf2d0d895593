//! Free-loop chains: included based loops ι(w), basepoint-moving wedges, the map G,
//! and the circle example.

use crate::cobarloop::{CobarError, FreeDga, Mono};
use crate::hochschild::{self, AInfinity, HWord, HochError};
use crate::ledger::{Conventions, IotaTwist};
use crate::lin::Lin;
use std::fmt::Debug;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LoopError {
    #[error(transparent)]
    Cobar(#[from] CobarError),
    #[error(transparent)]
    Hoch(#[from] HochError),
    #[error("letter {0} is not part of the circle model")]
    NotCircle(String),
    #[error("chain term has degree {0}, expected -1")]
    WrongDegree(i64),
}

/// Based-loop algebra seen through the operations the free-loop model needs.
pub trait LoopAlgebra {
    type M: Ord + Clone + Debug;
    fn deg(&self, m: &Self::M) -> i64;
    fn boundary(&self, m: &Self::M) -> Result<Lin<Self::M>, LoopError>;
    /// time-ordered product
    fn mul(&self, x: &Self::M, y: &Self::M) -> Lin<Self::M>;
    /// (first letter, remainder); None on the unit
    fn split_first(&self, m: &Self::M) -> Option<(Self::M, Self::M)>;
    fn show(&self, m: &Self::M) -> String {
        format!("{:?}", m)
    }
}

impl LoopAlgebra for FreeDga {
    type M = Mono;

    fn deg(&self, m: &Mono) -> i64 {
        self.mono_degree(m)
    }

    fn boundary(&self, m: &Mono) -> Result<Lin<Mono>, LoopError> {
        Ok(self.d_mono(m)?)
    }

    fn mul(&self, x: &Mono, y: &Mono) -> Lin<Mono> {
        let mut w = x.clone();
        w.extend_from_slice(y);
        Lin::single(w, 1)
    }

    fn split_first(&self, m: &Mono) -> Option<(Mono, Mono)> {
        if m.is_empty() {
            None
        } else {
            Some((m[..1].to_vec(), m[1..].to_vec()))
        }
    }

    fn show(&self, m: &Mono) -> String {
        self.show_mono(m)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum FreeLoopGenerator<M> {
    Iota(M),
    /// basepoint moves along the first argument
    Wedge(M, M),
}

pub type FreeLoopChain<M> = Lin<FreeLoopGenerator<M>>;

fn sgn(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

pub fn generator_degree<A: LoopAlgebra>(alg: &A, g: &FreeLoopGenerator<A::M>) -> i64 {
    match g {
        FreeLoopGenerator::Iota(w) => alg.deg(w),
        FreeLoopGenerator::Wedge(a, b) => alg.deg(a) + alg.deg(b) - 1,
    }
}

pub fn is_normal<A: LoopAlgebra>(alg: &A, g: &FreeLoopGenerator<A::M>) -> bool {
    match g {
        FreeLoopGenerator::Iota(_) => true,
        FreeLoopGenerator::Wedge(m, _) => match alg.split_first(m) {
            Some((_, r)) => alg.split_first(&r).is_none(),
            None => false,
        },
    }
}

/// W(g·R, X) = e₁ W(g, R·X) + e₂ W(R, X·g) until every first argument is one letter.
fn push_wedge<A: LoopAlgebra>(
    alg: &A,
    conv: &Conventions,
    m: &A::M,
    x: &A::M,
    c: i64,
    out: &mut FreeLoopChain<A::M>,
) {
    let Some((g, r)) = alg.split_first(m) else { return };
    if alg.split_first(&r).is_none() {
        out.add_term(FreeLoopGenerator::Wedge(m.clone(), x.clone()), c);
        return;
    }
    let e1 = sgn(conv.d5_split_first as i64);
    let dg = alg.deg(&g);
    let e2 = sgn(conv.d5_split_second as i64 + conv.d5_split_koszul as i64 * dg * (alg.deg(x) + alg.deg(&r)));
    for (rx, v) in alg.mul(&r, x).iter() {
        push_wedge(alg, conv, &g, rx, c * e1 * v, out);
    }
    for (xg, v) in alg.mul(x, &g).iter() {
        push_wedge(alg, conv, &r, xg, c * e2 * v, out);
    }
}

/// x ⋎ y for algebra elements, normalized.
pub fn wedge<A: LoopAlgebra>(alg: &A, conv: &Conventions, x: &Lin<A::M>, y: &Lin<A::M>) -> FreeLoopChain<A::M> {
    let mut out = Lin::zero();
    for (a, ca) in x.iter() {
        for (b, cb) in y.iter() {
            push_wedge(alg, conv, a, b, ca * cb, &mut out);
        }
    }
    out
}

pub fn iota<M: Ord + Clone>(x: &Lin<M>) -> FreeLoopChain<M> {
    x.iter().map(|(m, c)| (FreeLoopGenerator::Iota(m.clone()), c)).collect()
}

pub fn normalize<A: LoopAlgebra>(alg: &A, conv: &Conventions, c: &FreeLoopChain<A::M>) -> FreeLoopChain<A::M> {
    let mut out = Lin::zero();
    for (g, v) in c.iter() {
        match g {
            FreeLoopGenerator::Iota(_) => out.add_term(g.clone(), v),
            FreeLoopGenerator::Wedge(m, x) => push_wedge(alg, conv, m, x, v, &mut out),
        }
    }
    out
}

pub fn loop_boundary<A: LoopAlgebra>(
    alg: &A,
    conv: &Conventions,
    g: &FreeLoopGenerator<A::M>,
) -> Result<FreeLoopChain<A::M>, LoopError> {
    match g {
        FreeLoopGenerator::Iota(w) => {
            let s = match conv.iota_twist {
                IotaTwist::InG => 1,
                IotaTwist::InBoundary => -1,
            };
            Ok(iota(&alg.boundary(w)?).scaled(s))
        }
        FreeLoopGenerator::Wedge(a, x) => {
            let (da, dx) = (alg.deg(a), alg.deg(x));
            let t = sgn(conv.d5_transpose_koszul as i64 * da * dx);
            let mut out = wedge(alg, conv, &alg.boundary(a)?, &Lin::single(x.clone(), 1));
            out.add_scaled(&wedge(alg, conv, &Lin::single(a.clone(), 1), &alg.boundary(x)?), sgn(da));
            out.add_scaled(&iota(&alg.mul(a, x)), -sgn(da + dx));
            out.add_scaled(&iota(&alg.mul(x, a)), sgn(da + dx) * t);
            Ok(out)
        }
    }
}

pub fn boundary<A: LoopAlgebra>(
    alg: &A,
    conv: &Conventions,
    c: &FreeLoopChain<A::M>,
) -> Result<FreeLoopChain<A::M>, LoopError> {
    c.try_map_lin(|g| loop_boundary(alg, conv, g))
}

/// G on one Hochschild word: ±ι on length one, −σ₁⋎σ₂ on σ₂⊗σ₁, zero beyond.
pub fn goodwillie_g<A: LoopAlgebra>(alg: &A, conv: &Conventions, w: &[A::M]) -> FreeLoopChain<A::M> {
    match w.len() {
        1 => {
            let s = match conv.iota_twist {
                IotaTwist::InG => sgn(alg.deg(&w[0])),
                IotaTwist::InBoundary => 1,
            };
            Lin::single(FreeLoopGenerator::Iota(w[0].clone()), s)
        }
        2 => wedge(alg, conv, &Lin::single(w[1].clone(), 1), &Lin::single(w[0].clone(), 1)).scaled(-1),
        _ => Lin::zero(),
    }
}

pub fn goodwillie_g_lin<A: LoopAlgebra>(
    alg: &A,
    conv: &Conventions,
    x: &Lin<HWord<A::M>>,
) -> FreeLoopChain<A::M> {
    x.map_lin(|w| goodwillie_g(alg, conv, w))
}

#[derive(Clone, Debug)]
pub struct GReport<M: Ord> {
    pub checked: usize,
    pub failures: Vec<(HWord<M>, FreeLoopChain<M>)>,
}

impl<M: Ord> GReport<M> {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// G(b(w)) − (−1)^s ∂G(w) for every word; residuals that do not vanish are kept.
pub fn verify_g_chain_map<A>(alg: &A, conv: &Conventions, words: &[HWord<A::M>]) -> Result<GReport<A::M>, LoopError>
where
    A: LoopAlgebra + AInfinity<Elt = <A as LoopAlgebra>::M>,
{
    let s = sgn(conv.d6_parity as i64);
    let mut failures = Vec::new();
    for w in words {
        let r = g_residual(alg, conv, w, s)?;
        if !r.is_zero() {
            failures.push((w.clone(), r));
        }
    }
    Ok(GReport { checked: words.len(), failures })
}

pub fn g_residual<A>(alg: &A, conv: &Conventions, w: &[A::M], s: i64) -> Result<FreeLoopChain<A::M>, LoopError>
where
    A: LoopAlgebra + AInfinity<Elt = <A as LoopAlgebra>::M>,
{
    let bw = hochschild::hochschild_b(alg, w, conv)?;
    let lhs = goodwillie_g_lin(alg, conv, &bw);
    let rhs = boundary(alg, conv, &goodwillie_g(alg, conv, w))?;
    Ok(lhs.sub(&rhs.scaled(s)))
}

pub fn show_chain<A: LoopAlgebra>(alg: &A, c: &FreeLoopChain<A::M>) -> String {
    if c.is_zero() {
        return "0".into();
    }
    c.iter()
        .map(|(g, v)| {
            let body = match g {
                FreeLoopGenerator::Iota(w) => format!("i({})", alg.show(w)),
                FreeLoopGenerator::Wedge(a, b) => format!("w({},{})", alg.show(a), alg.show(b)),
            };
            format!("{:+}*{}", v, body)
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Based loops on the collapsed circle extended by a homotopy σ with ∂σ = γγ̄ − γ̄γ.
#[derive(Clone, Debug)]
pub struct CircleModel {
    pub dga: FreeDga,
    pub gamma: u32,
    pub gamma_bar: u32,
    pub sigma: u32,
}

impl CircleModel {
    pub fn new(conv: &Conventions) -> Self {
        let mut ds: Lin<Mono> = Lin::zero();
        ds.add_term(vec![0, 1], 1);
        ds.add_term(vec![1, 0], -1);
        let dga = FreeDga {
            names: vec!["g".into(), "G".into(), "s".into()],
            degree: vec![0, 0, -1],
            weight: vec![1, 1, 2],
            boundary: vec![Some(Lin::zero()), Some(Lin::zero()), Some(ds)],
            leibniz: conv.d1_leibniz,
        };
        CircleModel { dga, gamma: 0, gamma_bar: 1, sigma: 2 }
    }

    /// γ̄ ⊗ γ, plus σ unless omitted.
    pub fn cycle(&self, with_sigma: bool) -> Lin<HWord<Mono>> {
        let mut c = Lin::single(vec![vec![self.gamma_bar], vec![self.gamma]], 1);
        if with_sigma {
            c.add_term(vec![vec![self.sigma]], 1);
        }
        c
    }

    pub fn basepoint_degree(&self, c: &FreeLoopChain<Mono>) -> Result<i64, LoopError> {
        let mut total = 0;
        for (g, v) in c.iter() {
            let dg = generator_degree(&self.dga, g);
            if dg != -1 {
                return Err(LoopError::WrongDegree(dg));
            }
            if let FreeLoopGenerator::Wedge(a, _) = g {
                for &l in a {
                    total += v * match l {
                        x if x == self.gamma => 1,
                        x if x == self.gamma_bar => -1,
                        x if x == self.sigma => 0,
                        x => return Err(LoopError::NotCircle(x.to_string())),
                    };
                }
            }
        }
        Ok(total)
    }
}

/// Strict group ring Z[γ, γ⁻¹], elements γⁿ stored as n.
#[derive(Clone, Copy, Debug, Default)]
pub struct Laurent;

impl LoopAlgebra for Laurent {
    type M = i64;

    fn deg(&self, _: &i64) -> i64 {
        0
    }

    fn boundary(&self, _: &i64) -> Result<Lin<i64>, LoopError> {
        Ok(Lin::zero())
    }

    fn mul(&self, x: &i64, y: &i64) -> Lin<i64> {
        Lin::single(x + y, 1)
    }

    fn split_first(&self, m: &i64) -> Option<(i64, i64)> {
        match m.signum() {
            0 => None,
            s => Some((s, m - s)),
        }
    }

    fn show(&self, m: &i64) -> String {
        format!("g^{}", m)
    }
}

impl AInfinity for Laurent {
    type Elt = i64;

    fn degree(&self, _: &i64) -> i64 {
        0
    }

    fn weight(&self, a: &i64) -> usize {
        a.unsigned_abs() as usize
    }

    fn mu(&self, args: &[&i64]) -> Result<Lin<i64>, HochError> {
        Ok(match args.len() {
            2 => Lin::single(args[0] + args[1], 1),
            _ => Lin::zero(),
        })
    }
}

impl Laurent {
    pub fn basepoint_degree(&self, c: &FreeLoopChain<i64>) -> i64 {
        c.iter()
            .map(|(g, v)| match g {
                FreeLoopGenerator::Wedge(a, _) => v * a,
                FreeLoopGenerator::Iota(_) => 0,
            })
            .sum()
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CircleReport {
    /// b(γ̄⊗γ) = ∂σ
    pub homotopy_matches: bool,
    pub closed: bool,
    pub closed_without_sigma: bool,
    pub degree: i64,
    pub image: String,
    pub strict_closed: bool,
    pub strict_degree: i64,
}

impl CircleReport {
    pub fn pass(&self) -> bool {
        self.homotopy_matches && self.closed && !self.closed_without_sigma && self.degree.abs() == 1
            && self.strict_closed && self.strict_degree.abs() == 1
    }
}

pub fn s1_example(conv: &Conventions) -> Result<CircleReport, LoopError> {
    let m = CircleModel::new(conv);
    let bare = Lin::single(vec![vec![m.gamma_bar], vec![m.gamma]], 1);
    let b_bare = hochschild::hochschild_b_lin(&m.dga, &bare, conv)?;
    let ds = m.dga.d_mono(&[m.sigma])?;
    let homotopy_matches = b_bare == ds.iter().map(|(k, c)| (vec![k.clone()], c)).collect();
    let cyc = m.cycle(true);
    let closed = hochschild::hochschild_b_lin(&m.dga, &cyc, conv)?.is_zero();
    let closed_without_sigma = b_bare.is_zero();
    let image = goodwillie_g_lin(&m.dga, conv, &cyc);
    let degree = m.basepoint_degree(&image)?;
    let strict: Lin<HWord<i64>> = Lin::single(vec![-1, 1], 1);
    let strict_closed = hochschild::hochschild_b_lin(&Laurent, &strict, conv)?.is_zero();
    let strict_degree = Laurent.basepoint_degree(&goodwillie_g_lin(&Laurent, conv, &strict));
    Ok(CircleReport {
        homotopy_matches,
        closed,
        closed_without_sigma,
        degree,
        image: show_chain(&m.dga, &image),
        strict_closed,
        strict_degree,
    })
}
