//! Certifying suites and the convention harness.

use crate::cobarloop::{Cobar, FreeDga, Mono};
use crate::freeloop::{self, FreeLoopGenerator};
use crate::hochschild::{self, HWord};
use crate::ledger::{ConventionLedger, Conventions, ENTRY_NAMES};
use crate::lin::Lin;
use crate::simpcx::{self, ReducedComplex, SimplicialComplex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("no convention assignment passes every suite ({0} evaluated)")]
    NoneSatisfies(usize, Vec<String>),
    #[error("{} assignments pass; a finer suite is needed", .0.len())]
    Multiple(Vec<Conventions>),
    #[error("fixture: {0}")]
    Fixture(#[from] simpcx::ComplexError),
}

pub const SUITES: [&str; 4] = ["cobar_d_squared", "hochschild_b_squared", "t_chain_map", "g_chain_map"];

#[derive(Clone, Debug)]
pub struct Fixtures {
    pub circle: SimplicialComplex,
    pub tetrahedron: SimplicialComplex,
    pub torus: SimplicialComplex,
    pub rp2: SimplicialComplex,
    pub point: SimplicialComplex,
}

pub fn default_fixture_dir() -> PathBuf {
    let local = PathBuf::from("fixtures");
    if local.join("boundary_tetrahedron.json").exists() {
        local
    } else {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
    }
}

impl Fixtures {
    pub fn load(dir: &Path) -> Result<Self, simpcx::ComplexError> {
        let l = |n: &str| simpcx::load_fixture(&dir.join(n));
        Ok(Fixtures {
            circle: l("s1_3.json")?,
            tetrahedron: l("boundary_tetrahedron.json")?,
            torus: l("torus7.json")?,
            rp2: l("rp2.json")?,
            point: l("point.json")?,
        })
    }

    pub fn all(&self) -> Vec<&SimplicialComplex> {
        vec![&self.circle, &self.tetrahedron, &self.torus, &self.rp2, &self.point]
    }

    pub fn reduced(k: &SimplicialComplex) -> ReducedComplex {
        simpcx::reduce(k).expect("shipped fixtures are connected")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub pass: bool,
    pub checked: usize,
    pub detail: String,
}

pub fn cobar_d_squared(complexes: &[&ReducedComplex], cap: usize, conv: &Conventions) -> SuiteOutcome {
    let mut checked = 0;
    let mut detail = Vec::new();
    for r in complexes {
        let cob = Cobar::new(r, conv);
        let (n, weight_bad, bad) = cob.d_squared_failures(cap);
        checked += n;
        if !bad.is_empty() || weight_bad > 0 {
            detail.push(format!(
                "{}: {} words with d^2 != 0 (first {}), {} raise weight",
                r.base.name,
                bad.len(),
                cob.dga.show_mono(&bad[0]),
                weight_bad
            ));
        }
    }
    SuiteOutcome { name: SUITES[0].into(), pass: detail.is_empty(), checked, detail: detail.join("; ") }
}

/// Semifree DGA with ∂x_i = c₁∂w + c₂p, w a monomial and p a product of closed
/// generators, both in earlier generators.
pub fn random_dga(rng: &mut impl Rng, ngens: usize, conv: &Conventions) -> FreeDga {
    let mut dga = FreeDga {
        names: Vec::new(),
        degree: Vec::new(),
        weight: Vec::new(),
        boundary: Vec::new(),
        leibniz: conv.d1_leibniz,
    };
    for i in 0..ngens {
        let deg: i64 = rng.gen_range(-2..=1);
        let mut bd: Lin<Mono> = Lin::zero();
        if i > 0 {
            let monos = monomials_upto(&dga, 3);
            let pick = |target: i64, closed: bool, rng: &mut dyn rand::RngCore| -> Option<Mono> {
                let cand: Vec<&Mono> = monos
                    .iter()
                    .filter(|m| !m.is_empty() && dga.mono_degree(m) == target)
                    .filter(|m| !closed || m.iter().all(|&g| dga.boundary[g as usize].as_ref().unwrap().is_zero()))
                    .collect();
                cand.choose(rng).map(|m| (*m).clone())
            };
            if let Some(w) = pick(deg, false, rng) {
                let c: i64 = [1, -1, 2][rng.gen_range(0..3)];
                bd.add_scaled(&dga.d_mono(&w).unwrap(), c);
            }
            if let Some(p) = pick(deg + 1, true, rng) {
                let c: i64 = [1, -1][rng.gen_range(0..2)];
                bd.add_term(p, c);
            }
        }
        dga.names.push(format!("x{i}"));
        dga.degree.push(deg);
        dga.weight.push(1);
        dga.boundary.push(Some(bd));
    }
    dga
}

pub fn monomials_upto(dga: &FreeDga, len: usize) -> Vec<Mono> {
    let mut out = vec![vec![]];
    let mut frontier: Vec<Mono> = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for m in &frontier {
            for g in 0..dga.degree.len() as u32 {
                let mut mm = m.clone();
                mm.push(g);
                next.push(mm);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

pub fn random_word(rng: &mut impl Rng, dga: &FreeDga, max_len: usize) -> HWord<Mono> {
    let len = rng.gen_range(1..=max_len);
    (0..len)
        .map(|_| {
            let l = rng.gen_range(0..=2);
            (0..l).map(|_| rng.gen_range(0..dga.degree.len()) as u32).collect()
        })
        .collect()
}

/// b² on `words_each` seeded random words over each of `algebras` random DGAs,
/// plus every word of length ≤ 3 and weight ≤ 3 over cobar(∂Δ³).
pub fn hochschild_b_squared(
    seed: u64,
    algebras: usize,
    words_each: usize,
    tetra: &ReducedComplex,
    conv: &Conventions,
) -> SuiteOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    let mut detail = Vec::new();
    for a in 0..algebras {
        let n = rng.gen_range(2..=5);
        let dga = random_dga(&mut rng, n, conv);
        for _ in 0..words_each {
            let w = random_word(&mut rng, &dga, 4);
            checked += 1;
            let bb = hochschild::hochschild_b(&dga, &w, conv)
                .and_then(|b| hochschild::hochschild_b_lin(&dga, &b, conv))
                .expect("random DGAs have no undefined boundaries");
            if !bb.is_zero() && detail.len() < 3 {
                detail.push(format!("algebra {a}: b^2 != 0 on {}", show_word(&dga, &w)));
            }
        }
    }
    let cob = Cobar::new(tetra, conv);
    for w in cobar_words(&cob, 3, 3) {
        checked += 1;
        let bb = hochschild::hochschild_b(&cob.dga, &w, conv)
            .and_then(|b| hochschild::hochschild_b_lin(&cob.dga, &b, conv))
            .expect("τ words");
        if !bb.is_zero() && detail.len() < 6 {
            detail.push(format!("cobar: b^2 != 0 on {}", cob.show_hword(&w)));
        }
    }
    SuiteOutcome { name: SUITES[1].into(), pass: detail.is_empty(), checked, detail: detail.join("; ") }
}

pub fn show_word(dga: &FreeDga, w: &[Mono]) -> String {
    w.iter().map(|m| dga.show_mono(m)).collect::<Vec<_>>().join(" | ")
}

/// Hochschild words of length ≤ `max_len` over the cobar basis (empty monomial
/// included) with total weight ≤ `cap`, shortest and lightest first.
pub fn cobar_words(cob: &Cobar, max_len: usize, cap: usize) -> Vec<HWord<Mono>> {
    let monos: Vec<Mono> = cob.basis(cap).into_values().flatten().collect();
    let mut monos = monos;
    monos.sort_by_key(|m| (cob.dga.mono_weight(m), m.clone()));
    let mut out: Vec<HWord<Mono>> = Vec::new();
    let mut frontier: Vec<(HWord<Mono>, usize)> = vec![(vec![], 0)];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (w, wt) in &frontier {
            for m in &monos {
                let t = wt + cob.dga.mono_weight(m);
                if t <= cap {
                    let mut ww = w.clone();
                    ww.push(m.clone());
                    next.push((ww, t));
                }
            }
        }
        out.extend(next.iter().map(|(w, _)| w.clone()));
        frontier = next;
    }
    out.sort_by_key(|w| (w.len(), w.iter().map(|m| cob.dga.mono_weight(m)).sum::<usize>()));
    out
}

pub fn t_chain_map(complexes: &[&ReducedComplex], cap: usize, conv: &Conventions) -> SuiteOutcome {
    let mut checked = 0;
    let mut detail = Vec::new();
    for r in complexes {
        let cob = Cobar::new(r, conv);
        match cob.verify_t_chain_map(cap) {
            Ok(rep) => {
                checked += rep.rows.len();
                let bad = rep.failing_cells();
                if !bad.is_empty() {
                    detail.push(format!("{}: {} cells fail (first {:?})", r.base.name, bad.len(), bad[0].cell));
                }
                if !rep.pi3_cancel() {
                    detail.push(format!("{}: triple-pi terms do not cancel", r.base.name));
                }
            }
            Err(e) => detail.push(format!("{}: {e}", r.base.name)),
        }
    }
    SuiteOutcome { name: SUITES[2].into(), pass: detail.is_empty(), checked, detail: detail.join("; ") }
}

/// Normal-form wedges W(g, X) with g a cobar generator and X a monomial.
pub fn random_wedges(rng: &mut impl Rng, cob: &Cobar, count: usize, cap: usize) -> Vec<FreeLoopGenerator<Mono>> {
    let monos: Vec<Mono> = cob.basis(cap).into_values().flatten().collect();
    (0..count)
        .map(|_| {
            let g = *cob.tau_ids.choose(rng).unwrap();
            let x = monos.choose(rng).unwrap().clone();
            FreeLoopGenerator::Wedge(vec![g], x)
        })
        .collect()
}

/// G residuals on cobar words (length ≤ 3, weight ≤ cap) and ∂² on random wedges.
pub fn g_chain_map(
    complexes: &[&ReducedComplex],
    cap: usize,
    seed: u64,
    wedges: usize,
    conv: &Conventions,
) -> SuiteOutcome {
    let mut checked = 0;
    let mut detail = Vec::new();
    let s = if conv.d6_parity { -1 } else { 1 };
    for r in complexes {
        let cob = Cobar::new(r, conv);
        for w in cobar_words(&cob, 3, cap) {
            checked += 1;
            let res = freeloop::g_residual(&cob.dga, conv, &w, s).expect("τ words");
            if !res.is_zero() {
                detail.push(format!("{}: G residual on {}", r.base.name, cob.show_hword(&w)));
                break;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for g in random_wedges(&mut rng, &cob, wedges, 4) {
            checked += 1;
            let d = freeloop::loop_boundary(&cob.dga, conv, &g).unwrap();
            let dd = freeloop::boundary(&cob.dga, conv, &d).unwrap();
            if !dd.is_zero() {
                detail.push(format!("{}: d^2 != 0 on a wedge", r.base.name));
                break;
            }
        }
    }
    SuiteOutcome { name: SUITES[3].into(), pass: detail.is_empty(), checked, detail: detail.join("; ") }
}

/// Projection of an assignment onto the entries a suite reads.
fn suite_mask(suite: usize) -> [bool; 12] {
    let mut m = [false; 12];
    let on: &[usize] = match suite {
        0 => &[0, 1],
        1 => &[1, 2],
        2 => &[0, 1, 2, 9, 10, 11],
        _ => &[0, 1, 2, 3, 4, 5, 6, 7, 8],
    };
    for &e in on {
        m[e] = true;
    }
    m
}

pub struct Harness {
    pub fixtures: Fixtures,
    pub seed: u64,
    circle: ReducedComplex,
    tetra: ReducedComplex,
    cache: Vec<HashMap<[bool; 12], SuiteOutcome>>,
}

#[derive(Clone, Debug)]
pub struct Resolution {
    pub ledger: ConventionLedger,
    pub evaluated: usize,
    /// per entry, the suites failing when only that entry is flipped
    pub mutations: Vec<(String, Vec<String>)>,
    pub outcomes: Vec<SuiteOutcome>,
}

impl Harness {
    pub fn new(fixtures: Fixtures, seed: u64) -> Self {
        let circle = Fixtures::reduced(&fixtures.circle);
        let tetra = Fixtures::reduced(&fixtures.tetrahedron);
        Harness { fixtures, seed, circle, tetra, cache: vec![HashMap::new(); SUITES.len()] }
    }

    fn key(conv: &Conventions, suite: usize) -> [bool; 12] {
        let b = conv.bits();
        let m = suite_mask(suite);
        let mut k = [false; 12];
        for i in 0..12 {
            k[i] = b[i] && m[i];
        }
        k
    }

    pub fn run_suite(&mut self, suite: usize, conv: &Conventions) -> SuiteOutcome {
        let key = Self::key(conv, suite);
        if let Some(o) = self.cache[suite].get(&key) {
            return o.clone();
        }
        let o = match suite {
            0 => cobar_d_squared(&[&self.circle, &self.tetra], 4, conv),
            1 => hochschild_b_squared(self.seed, 5, 40, &self.tetra, conv),
            2 => t_chain_map(&[&self.tetra], 6, conv),
            _ => g_chain_map(&[&self.circle, &self.tetra], 4, self.seed, 100, conv),
        };
        self.cache[suite].insert(key, o.clone());
        o
    }

    /// True iff every suite passes; stops at the first failure.
    pub fn passes(&mut self, conv: &Conventions) -> bool {
        (0..SUITES.len()).all(|s| self.run_suite(s, conv).pass)
    }

    pub fn failing_suites(&mut self, conv: &Conventions) -> Vec<String> {
        (0..SUITES.len()).filter(|&s| !self.run_suite(s, conv).pass).map(|s| SUITES[s].to_string()).collect()
    }

    pub fn resolve(&mut self) -> Result<Resolution, HarnessError> {
        let mut passing = Vec::new();
        let mut summary = Vec::new();
        let total = 1usize << 12;
        for code in 0..total {
            let bits: [bool; 12] = std::array::from_fn(|i| code >> i & 1 == 1);
            let conv = Conventions::from_bits(bits);
            if self.passes(&conv) {
                passing.push(conv);
            } else if summary.len() < 16 {
                let first = (0..SUITES.len()).find(|&s| !self.run_suite(s, &conv).pass).unwrap();
                summary.push(format!("{:012b}: {}", code, SUITES[first]));
            }
        }
        match passing.len() {
            0 => return Err(HarnessError::NoneSatisfies(total, summary)),
            1 => {}
            _ => return Err(HarnessError::Multiple(passing)),
        }
        let conv = passing[0];
        let outcomes: Vec<SuiteOutcome> = (0..SUITES.len()).map(|s| self.run_suite(s, &conv)).collect();
        let mut mutations = Vec::new();
        let mut certified_by = BTreeMap::new();
        for (e, name) in ENTRY_NAMES.iter().enumerate() {
            let fails = self.failing_suites(&conv.flipped(e));
            let cert = fails.first().cloned().unwrap_or_else(|| "none".to_string());
            certified_by.insert(name.to_string(), cert);
            mutations.push((name.to_string(), fails));
        }
        let status = outcomes.iter().map(|o| (o.name.clone(), o.pass)).collect();
        Ok(Resolution { ledger: ConventionLedger::new(conv, certified_by, status), evaluated: total, mutations, outcomes })
    }
}
