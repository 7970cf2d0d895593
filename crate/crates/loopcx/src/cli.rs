//! Command-line driver: file I/O, the convention harness and report emission.

use crate::boxquot;
use crate::cobarloop::Cobar;
use crate::exactalg::HomologySummary;
use crate::freeloop;
use crate::hochschild::{self, HhReport};
use crate::ledger::{ConventionLedger, Conventions};
use crate::signkoszul::{self, FailureClass, SweepReport};
use crate::simpcx::{self, ReducedComplex, SimplicialComplex};
use crate::suites::{self, Fixtures, Harness, SUITES};
use crate::ledger::ENTRY_NAMES;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const DEFAULT_SEED: u64 = 7;

#[derive(Parser, Debug)]
#[command(name = "loopcx", version, about = "Cobar, Hochschild and free loop space chains of simplicial complexes")]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    pub format: Format,
    /// directory holding the complex fixtures
    #[arg(long, global = true)]
    pub fixtures: Option<PathBuf>,
    /// convention ledger (default: <fixtures>/ledger.txt)
    #[arg(long, global = true)]
    pub ledger: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Integer homology of a complex
    Homology { file: PathBuf },
    /// Cobar generators, differential and basis sizes of the collapsed complex
    Cobar {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_weight: usize,
        #[arg(long)]
        show_differential: bool,
    },
    /// Truncated Hochschild homology of the cobar algebra
    Hh {
        file: PathBuf,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        degree: i64,
        #[arg(long, default_value_t = 3)]
        max_weight: usize,
    },
    /// The chain map T on every cell, with residuals
    TMap {
        file: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_weight: usize,
    },
    Verify {
        #[arg(value_enum)]
        target: Target,
        #[arg(long)]
        max_weight: Option<usize>,
    },
    Report,
    /// Enumerate the convention space and print the unique passing ledger
    Resolve,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    All,
    Signs,
    Cobar,
    Hochschild,
    Freeloop,
    S1,
    Boxquot,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), pass, detail: detail.into() }
}

struct Ctx {
    seed: u64,
    format: Format,
    fixture_dir: PathBuf,
    ledger_path: PathBuf,
}

impl Ctx {
    fn fixtures(&self) -> Result<Fixtures, String> {
        Fixtures::load(&self.fixture_dir).map_err(|e| e.to_string())
    }

    fn ledger(&self) -> Result<ConventionLedger, String> {
        let text = std::fs::read_to_string(&self.ledger_path)
            .map_err(|e| format!("{}: {e}", self.ledger_path.display()))?;
        ConventionLedger::parse(&text).map_err(|e| format!("{}: {e}", self.ledger_path.display()))
    }

    /// Ledger conventions, or the built-in resolved ones when no ledger file exists.
    fn conventions(&self) -> Result<Conventions, String> {
        if self.ledger_path.exists() {
            Ok(self.ledger()?.conventions)
        } else {
            Ok(Conventions::resolved())
        }
    }
}

/// Parse `args` and run; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let fixture_dir = cli.fixtures.clone().unwrap_or_else(suites::default_fixture_dir);
    let ledger_path = cli.ledger.clone().unwrap_or_else(|| fixture_dir.join("ledger.txt"));
    let ctx = Ctx { seed: cli.seed, format: cli.format, fixture_dir, ledger_path };
    let mut text = String::new();
    let code = match dispatch(&cli.cmd, &ctx, &mut text) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    };
    let written = match &cli.out {
        Some(p) => std::fs::write(p, &text).map_err(|e| format!("{}: {e}", p.display())),
        None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return 1;
    }
    code
}

pub fn main_exit() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn dispatch(cmd: &Cmd, ctx: &Ctx, o: &mut String) -> Result<i32, String> {
    match cmd {
        Cmd::Homology { file } => cmd_homology(ctx, file, o),
        Cmd::Cobar { file, max_weight, show_differential } => cmd_cobar(ctx, file, *max_weight, *show_differential, o),
        Cmd::Hh { file, degree, max_weight } => cmd_hh(ctx, file, *degree, *max_weight, o),
        Cmd::TMap { file, max_weight } => cmd_tmap(ctx, file, *max_weight, o),
        Cmd::Verify { target, max_weight } => {
            let mut table = String::new();
            let checks = verify(ctx, *target, *max_weight, Some(&mut table))?;
            o.push_str(&table);
            emit_checks(ctx.format, &checks, o);
            Ok(if checks.iter().all(|c| c.pass) { 0 } else { 1 })
        }
        Cmd::Report => {
            let r = build_report(ctx);
            match ctx.format {
                Format::Json => o.push_str(&json(&r)),
                Format::Tsv => o.push_str(&r.to_text()),
            }
            Ok(0)
        }
        Cmd::Resolve => {
            let fx = ctx.fixtures()?;
            let res = Harness::new(fx, ctx.seed).resolve().map_err(|e| e.to_string())?;
            o.push_str(&res.ledger.to_text());
            Ok(0)
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialize");
    s.push('\n');
    s
}

fn torsion_cell(h: &HomologySummary) -> String {
    if h.torsion.is_empty() {
        "-".into()
    } else {
        h.torsion.join(",")
    }
}

fn load_reduced(file: &Path) -> Result<(SimplicialComplex, ReducedComplex), String> {
    let k = simpcx::load_fixture(file).map_err(|e| e.to_string())?;
    let r = simpcx::reduce(&k).map_err(|e| format!("{}: {e}", file.display()))?;
    Ok((k, r))
}

fn cmd_homology(ctx: &Ctx, file: &Path, o: &mut String) -> Result<i32, String> {
    let k = simpcx::load_fixture(file).map_err(|e| e.to_string())?;
    let hs = simpcx::simplicial_homology(&k);
    match ctx.format {
        Format::Json => o.push_str(&json(&hs)),
        Format::Tsv => {
            o.push_str("degree\trank\ttorsion\n");
            for h in &hs {
                o.push_str(&format!("{}\t{}\t{}\n", h.degree, h.rank, torsion_cell(h)));
            }
        }
    }
    Ok(0)
}

fn cmd_cobar(ctx: &Ctx, file: &Path, cap: usize, show_d: bool, o: &mut String) -> Result<i32, String> {
    let conv = ctx.conventions()?;
    let (_, r) = load_reduced(file)?;
    let cob = Cobar::new(&r, &conv);
    let mut gens: Vec<(String, i64, usize, u32)> = cob
        .tau_ids
        .iter()
        .map(|&g| (cob.dga.names[g as usize].clone(), cob.dga.degree[g as usize], cob.dga.weight[g as usize], g))
        .collect();
    gens.sort();
    let (words, weight_bad, bad) = cob.d_squared_failures(cap);
    let d_sq_ok = bad.is_empty() && weight_bad == 0;
    let basis = cob.basis(cap);
    #[derive(Serialize)]
    struct Out {
        generators: Vec<(String, i64, usize)>,
        differential: Vec<(String, String)>,
        basis: Vec<(i64, usize)>,
        words: usize,
        d_squared_zero: bool,
    }
    let differential: Vec<(String, String)> = if show_d {
        gens.iter()
            .map(|(n, _, _, g)| {
                let d = cob.dga.d_mono(&[*g]).map_err(|e| e.to_string())?;
                Ok((n.clone(), show_lin(d.iter().map(|(m, c)| (cob.dga.show_mono(m), c)))))
            })
            .collect::<Result<_, String>>()?
    } else {
        vec![]
    };
    let res = Out {
        generators: gens.iter().map(|(n, d, w, _)| (n.clone(), *d, *w)).collect(),
        differential,
        basis: basis.iter().map(|(d, v)| (*d, v.len())).collect(),
        words,
        d_squared_zero: d_sq_ok,
    };
    match ctx.format {
        Format::Json => o.push_str(&json(&res)),
        Format::Tsv => {
            o.push_str("generator\tdegree\tweight\n");
            for (n, d, w) in &res.generators {
                o.push_str(&format!("{n}\t{d}\t{w}\n"));
            }
            for (n, d) in &res.differential {
                o.push_str(&format!("d({n}) = {d}\n"));
            }
            o.push_str("degree\tbasis_words\n");
            for (d, n) in &res.basis {
                o.push_str(&format!("{d}\t{n}\n"));
            }
            o.push_str(&format!("d_squared\t{}\t{} words\n", pass_word(d_sq_ok), words));
        }
    }
    Ok(if d_sq_ok { 0 } else { 1 })
}

/// Sorted terms as `c*x + ...`, `0` when empty.
pub fn show_lin(terms: impl Iterator<Item = (String, i64)>) -> String {
    let mut t: Vec<(String, i64)> = terms.filter(|(_, c)| *c != 0).collect();
    if t.is_empty() {
        return "0".into();
    }
    t.sort();
    let mut s = String::new();
    for (i, (x, c)) in t.iter().enumerate() {
        let sign = if *c < 0 { "-" } else if i > 0 { "+" } else { "" };
        if i > 0 {
            s.push(' ');
        }
        let a = c.abs();
        if a == 1 {
            s.push_str(&format!("{sign}{x}"));
        } else {
            s.push_str(&format!("{sign}{a}*{x}"));
        }
    }
    s
}

fn pass_word(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

fn hh_of(r: &ReducedComplex, conv: &Conventions, degree: i64, cap: usize) -> Result<HhReport, String> {
    let cob = Cobar::new(r, conv);
    let letters: Vec<_> = cob.basis(cap).into_values().flatten().collect();
    hochschild::hh_truncated(&cob.dga, &letters, degree, cap, conv).map_err(|e| e.to_string())
}

fn hh_header() -> &'static str {
    "degree\tcap\trank\ttorsion\tstabilized\tstable_rank\n"
}

fn hh_row(h: &HhReport) -> String {
    format!(
        "{}\t{}\t{}\t{}\t{}\t{}\n",
        h.degree,
        h.max_weight,
        h.summary.rank,
        torsion_cell(&h.summary),
        if h.stabilized { "yes" } else { "no" },
        h.stable_rank
    )
}

fn cmd_hh(ctx: &Ctx, file: &Path, degree: i64, cap: usize, o: &mut String) -> Result<i32, String> {
    let conv = ctx.conventions()?;
    let (_, r) = load_reduced(file)?;
    let h = hh_of(&r, &conv, degree, cap)?;
    match ctx.format {
        Format::Json => o.push_str(&json(&h)),
        Format::Tsv => {
            o.push_str(hh_header());
            o.push_str(&hh_row(&h));
        }
    }
    Ok(0)
}

fn cmd_tmap(ctx: &Ctx, file: &Path, cap: usize, o: &mut String) -> Result<i32, String> {
    let conv = ctx.conventions()?;
    let (_, r) = load_reduced(file)?;
    let cob = Cobar::new(&r, &conv);
    let rep = cob.verify_t_chain_map(cap).map_err(|e| e.to_string())?;
    #[derive(Serialize)]
    struct Row {
        cell: Vec<usize>,
        terms: usize,
        residual: String,
        pi3_raw: usize,
        pi3_net: usize,
    }
    let rows: Vec<Row> = rep
        .rows
        .iter()
        .map(|row| Row {
            cell: row.cell.clone(),
            terms: cob.adams_t(&row.cell).len(),
            residual: show_lin(row.residual.iter().map(|(w, c)| (cob.show_hword(w), c))),
            pi3_raw: row.pi3_raw,
            pi3_net: row.pi3_net,
        })
        .collect();
    match ctx.format {
        Format::Json => o.push_str(&json(&rows)),
        Format::Tsv => {
            o.push_str("cell\tterms\tpi3_raw\tpi3_net\tresidual\n");
            for r in &rows {
                o.push_str(&format!("{:?}\t{}\t{}\t{}\t{}\n", r.cell, r.terms, r.pi3_raw, r.pi3_net, r.residual));
            }
        }
    }
    Ok(if rep.pass() && rep.pi3_cancel() { 0 } else { 1 })
}

fn emit_checks(format: Format, checks: &[Check], o: &mut String) {
    match format {
        Format::Json => o.push_str(&json(&checks)),
        Format::Tsv => {
            o.push_str("check\tstatus\tdetail\n");
            for c in checks {
                o.push_str(&format!("{}\t{}\t{}\n", c.name, pass_word(c.pass), c.detail));
            }
        }
    }
}

pub fn sign_sweep() -> SweepReport {
    signkoszul::sweep_homotopy_identity(4, -2, 2)
}

#[derive(Clone, Debug, Serialize)]
pub struct SignRow {
    pub formula: String,
    pub domain: String,
    pub pass: usize,
    pub fail: usize,
    pub first_counterexample: String,
}

pub fn sign_rows(s: &SweepReport) -> Vec<SignRow> {
    let first = |boundary: bool| {
        s.minimal
            .iter()
            .find(|c| !boundary || c.class != FailureClass::BoundaryR)
            .map(|c| format!("d={} d1={} r={} degs={:?} ({:?})", c.d, c.d1, c.r, c.degs, c.class))
            .unwrap_or_else(|| "-".into())
    };
    vec![
        SignRow {
            formula: "homotopy_sign_identity".into(),
            domain: format!("1<=d<={}, 0<=d1<=d, 0<=r<=d2, degrees {}..{}", s.max_d, s.deg_lo, s.deg_hi),
            pass: s.pass,
            fail: s.total - s.pass,
            first_counterexample: first(false),
        },
        SignRow {
            formula: "homotopy_sign_identity[r<d2]".into(),
            domain: format!("1<=d<={}, 0<=d1<=d, 0<=r<d2, degrees {}..{}", s.max_d, s.deg_lo, s.deg_hi),
            pass: s.in_range_pass,
            fail: s.in_range_total - s.in_range_pass,
            first_counterexample: first(true),
        },
    ]
}

fn verify_signs(ctx: &Ctx, checks: &mut Vec<Check>, o: Option<&mut String>) {
    let s = sign_sweep();
    let rows = sign_rows(&s);
    if let Some(o) = o {
        match ctx.format {
            Format::Json => o.push_str(&json(&rows)),
            Format::Tsv => {
                o.push_str("formula\tdomain\tpass\tfail\tfirst_counterexample\n");
                for r in &rows {
                    o.push_str(&format!(
                        "{}\t{}\t{}\t{}\t{}\n",
                        r.formula, r.domain, r.pass, r.fail, r.first_counterexample
                    ));
                }
            }
        }
    }
    checks.push(check(
        "signs: every failure classified",
        s.unclassified() == 0,
        format!("{} of {} pass, unclassified {}", s.pass, s.total, s.unclassified()),
    ));
    checks.push(check(
        "signs: identity on 0<=r<d2",
        s.in_range_pass == s.in_range_total,
        format!("{} of {}", s.in_range_pass, s.in_range_total),
    ));
}

fn outcome_check(o: suites::SuiteOutcome) -> Check {
    let detail = if o.detail.is_empty() { format!("{} checked", o.checked) } else { o.detail };
    check(o.name, o.pass, detail)
}

fn homology_checks(fx: &Fixtures, checks: &mut Vec<Check>) {
    for k in fx.all() {
        let c = k.chain_complex();
        let ok = crate::exactalg::validate_complex(&c).map(|v| v == crate::exactalg::Verdict::Pass).unwrap_or(false);
        checks.push(check(format!("homology: {} chain d^2", k.name), ok, ""));
        let simp = simpcx::simplicial_homology(k);
        let r = Fixtures::reduced(k);
        let cell = simpcx::cellular_homology(&r);
        checks.push(check(
            format!("homology: {} simplicial = cellular", k.name),
            simp == cell,
            simp.iter().map(|h| format!("H{}={}{}", h.degree, h.rank, tors_suffix(h))).collect::<Vec<_>>().join(" "),
        ));
    }
    let h1 = |k: &SimplicialComplex| simpcx::simplicial_homology(k)[1].clone();
    let want = [(&fx.torus, 2, vec![]), (&fx.rp2, 0, vec!["2".to_string()]), (&fx.circle, 1, vec![])];
    for (k, rank, tors) in want {
        let h = h1(k);
        checks.push(check(format!("homology: H1({})", k.name), h.rank == rank && h.torsion == tors, format!("rank {} torsion {}", h.rank, torsion_cell(&h))));
    }
}

fn tors_suffix(h: &HomologySummary) -> String {
    h.torsion.iter().map(|t| format!("+Z/{t}")).collect()
}

fn verify_cobar(fx: &Fixtures, conv: &Conventions, cap: usize, checks: &mut Vec<Check>) {
    for k in fx.all() {
        let r = Fixtures::reduced(k);
        checks.push(outcome_check(suites::cobar_d_squared(&[&r], cap, conv)).renamed(&format!("cobar d^2: {}", k.name)));
    }
    for k in [&fx.tetrahedron, &fx.torus] {
        let r = Fixtures::reduced(k);
        checks.push(outcome_check(suites::t_chain_map(&[&r], cap, conv)).renamed(&format!("T chain map: {}", k.name)));
    }
}

impl Check {
    fn renamed(mut self, n: &str) -> Self {
        self.name = n.into();
        self
    }
}

fn verify_hochschild(ctx: &Ctx, fx: &Fixtures, conv: &Conventions, checks: &mut Vec<Check>) -> Result<(), String> {
    let tetra = Fixtures::reduced(&fx.tetrahedron);
    checks.push(outcome_check(suites::hochschild_b_squared(ctx.seed, 5, 40, &tetra, conv)));
    let circle = Fixtures::reduced(&fx.circle);
    for w in 1..=3 {
        let h = hh_of(&circle, conv, 0, w)?;
        checks.push(check(format!("HH_0 circle cap {w}"), h.summary.rank == w + 1, format!("rank {}", h.summary.rank)));
    }
    for w in 3..=5 {
        let h = hh_of(&tetra, conv, 0, w)?;
        checks.push(check(
            format!("HH_0 tetrahedron boundary cap {w}"),
            h.stable_rank == 1,
            format!("rank {} stable {}", h.summary.rank, h.stable_rank),
        ));
    }
    Ok(())
}

/// Weight 3 is the stated range; the Koszul sign on the second split piece first shows at weight 4.
fn verify_freeloop(ctx: &Ctx, fx: &Fixtures, conv: &Conventions, cap: usize, checks: &mut Vec<Check>) {
    for k in [&fx.circle, &fx.tetrahedron] {
        let r = Fixtures::reduced(k);
        checks.push(
            outcome_check(suites::g_chain_map(&[&r], cap, ctx.seed, 100, conv))
                .renamed(&format!("G chain map: {} (weight <= {cap})", k.name)),
        );
    }
}

fn verify_s1(conv: &Conventions, checks: &mut Vec<Check>) -> Result<(), String> {
    let r = freeloop::s1_example(conv).map_err(|e| e.to_string())?;
    checks.push(check(
        "circle cycle",
        r.pass(),
        format!(
            "homotopy {} closed {} closed_without_sigma {} G-image {} basepoint degree {} strict degree {}",
            r.homotopy_matches, r.closed, r.closed_without_sigma, r.image, r.degree, r.strict_degree
        ),
    ));
    Ok(())
}

fn verify_boxquot(ctx: &Ctx, checks: &mut Vec<Check>) -> Result<(), String> {
    let r = boxquot::verify_all(ctx.seed, 50).map_err(|e| e.to_string())?;
    checks.push(check(
        "cube certificates",
        r.failures.is_empty() && r.d_squared_failures == 0,
        format!("{} certificates on {} cubes, {} failures{}", r.certificates, r.cubes, r.failures.len(),
            r.failures.first().map(|f| format!(" (first {f})")).unwrap_or_default()),
    ));
    for (fam, ok) in &r.comparisons {
        checks.push(check(format!("quotient homology: {fam}"), *ok, ""));
    }
    Ok(())
}

fn verify_ledger(ctx: &Ctx, fx: &Fixtures, checks: &mut Vec<Check>) -> Result<(), String> {
    let on_disk = std::fs::read_to_string(&ctx.ledger_path).map_err(|e| format!("{}: {e}", ctx.ledger_path.display()))?;
    match Harness::new(fx.clone(), ctx.seed).resolve() {
        Ok(res) => {
            let fresh = res.ledger.to_text();
            checks.push(check("ledger: matches resolution", fresh == on_disk, if fresh == on_disk { "byte-identical".to_string() } else { "ledger differs from resolve output".to_string() }));
            let all_cert = res.mutations.iter().all(|(_, f)| !f.is_empty());
            checks.push(check(
                "ledger: every entry certified",
                all_cert,
                format!("{} assignments evaluated", res.evaluated),
            ));
        }
        Err(e) => checks.push(check("ledger: resolution", false, e.to_string())),
    }
    Ok(())
}


fn verify(ctx: &Ctx, target: Target, cap: Option<usize>, table: Option<&mut String>) -> Result<Vec<Check>, String> {
    let mut checks = Vec::new();
    if target == Target::Signs {
        verify_signs(ctx, &mut checks, table);
        return Ok(checks);
    }
    if target == Target::Boxquot {
        verify_boxquot(ctx, &mut checks)?;
        return Ok(checks);
    }
    let conv = ctx.conventions()?;
    if target == Target::S1 {
        verify_s1(&conv, &mut checks)?;
        return Ok(checks);
    }
    let fx = ctx.fixtures()?;
    match target {
        Target::Cobar => verify_cobar(&fx, &conv, cap.unwrap_or(6), &mut checks),
        Target::Hochschild => verify_hochschild(ctx, &fx, &conv, &mut checks)?,
        Target::Freeloop => verify_freeloop(ctx, &fx, &conv, cap.unwrap_or(4), &mut checks),
        _ => {
            verify_ledger(ctx, &fx, &mut checks)?;
            homology_checks(&fx, &mut checks);
            verify_signs(ctx, &mut checks, None);
            verify_cobar(&fx, &conv, cap.unwrap_or(6), &mut checks);
            verify_hochschild(ctx, &fx, &conv, &mut checks)?;
            verify_freeloop(ctx, &fx, &conv, 3, &mut checks);
            verify_freeloop(ctx, &fx, &conv, 4, &mut checks);
            verify_s1(&conv, &mut checks)?;
            verify_boxquot(ctx, &mut checks)?;
        }
    }
    Ok(checks)
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteRow {
    pub suite: String,
    pub pass: bool,
    pub checked: usize,
    pub certifies: Vec<String>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Typo {
    pub item: String,
    pub confirmed: bool,
    pub counterexample: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub seed: u64,
    pub ledger: Result<String, String>,
    pub suites: Option<Vec<SuiteRow>>,
    pub artifact_bugs: Vec<String>,
    pub signs: Vec<SignRow>,
    pub suspected_typos: Vec<Typo>,
    pub homology: Option<Vec<(String, Vec<HomologySummary>)>>,
    pub hochschild: Option<Vec<(String, HhReport)>>,
    pub cubes: Result<Vec<Check>, String>,
}

fn build_report(ctx: &Ctx) -> Report {
    let ledger = ctx.ledger();
    let conv = ledger.as_ref().map(|l| l.conventions).unwrap_or_else(|_| Conventions::resolved());
    let sweep = sign_sweep();
    let signs = sign_rows(&sweep);
    let mut typos = Vec::new();
    let mut artifact_bugs = Vec::new();
    if let Some(c) = sweep.minimal.iter().find(|c| c.class == FailureClass::BoundaryR) {
        typos.push(Typo {
            item: "homotopy sign identity at r = d2".into(),
            confirmed: true,
            counterexample: format!("d={} d1={} r={} degs={:?}", c.d, c.d1, c.r, c.degs),
        });
    }
    let fx = ctx.fixtures().ok();
    let mut suites_rows = None;
    let mut homology = None;
    let mut hochschild = None;
    if let Some(fx) = &fx {
        let mut h = Harness::new(fx.clone(), ctx.seed);
        let certified: Vec<(String, String)> = match &ledger {
            Ok(l) => l.certified_by.iter().map(|(a, b)| (a.clone(), b.clone())).collect(),
            Err(_) => vec![],
        };
        let mut rows = Vec::new();
        for (s, name) in SUITES.iter().enumerate() {
            let o = h.run_suite(s, &conv);
            let certifies: Vec<String> =
                certified.iter().filter(|(_, su)| su == name).map(|(e, _)| e.clone()).collect();
            if !o.pass && !certifies.is_empty() {
                artifact_bugs.push(format!("{name} fails under the ledger ({})", certifies.join(", ")));
            }
            rows.push(SuiteRow { suite: name.to_string(), pass: o.pass, checked: o.checked, certifies, detail: o.detail });
        }
        suites_rows = Some(rows);
        typos.extend(printed_readings(&mut h, &conv));
        homology = Some(fx.all().iter().map(|k| (k.name.clone(), simpcx::simplicial_homology(k))).collect());
        let mut hh = Vec::new();
        let circle = Fixtures::reduced(&fx.circle);
        let tetra = Fixtures::reduced(&fx.tetrahedron);
        for (name, r, caps) in [(&fx.circle.name, &circle, 1..=3), (&fx.tetrahedron.name, &tetra, 3..=5)] {
            for w in caps {
                if let Ok(rep) = hh_of(r, &conv, 0, w) {
                    hh.push((name.clone(), rep));
                }
            }
        }
        hochschild = Some(hh);
    }
    let mut cubes = Vec::new();
    let cubes = verify_boxquot(ctx, &mut cubes).map(|_| cubes);
    Report {
        seed: ctx.seed,
        ledger: ledger.map(|l| l.to_text()),
        suites: suites_rows,
        artifact_bugs,
        signs,
        suspected_typos: typos,
        homology,
        hochschild,
        cubes,
    }
}

/// Printed readings that fail under the certified ledger.
fn printed_readings(h: &mut Harness, conv: &Conventions) -> Vec<Typo> {
    let mut out = Vec::new();
    let printed = Conventions { t_tau_shift: false, t_pi_ab_flip: false, t_pi_ba_flip: false, ..*conv };
    let tetra = Fixtures::reduced(&h.fixtures.tetrahedron);
    let cob = Cobar::new(&tetra, &printed);
    if let Ok(rep) = cob.verify_t_chain_map(6) {
        if let Some(row) = rep.rows.iter().find(|r| !r.residual.is_zero()) {
            out.push(Typo {
                item: "signs of T as printed".into(),
                confirmed: true,
                counterexample: format!(
                    "{}: cell {:?}, residual {}",
                    tetra.base.name,
                    row.cell,
                    show_lin(row.residual.iter().map(|(w, c)| (cob.show_hword(w), c)))
                ),
            });
        }
    }
    for (entry, label) in [(0usize, "literal product order"), (2, "subscript arity reading")] {
        let alt = conv.flipped(entry);
        let fails = h.failing_suites(&alt);
        if !fails.is_empty() {
            out.push(Typo {
                item: format!("{label} ({} = {})", ENTRY_NAMES[entry], alt.value_string(entry)),
                confirmed: true,
                counterexample: format!("fails {}", fails.join(", ")),
            });
        }
    }
    let cob = Cobar::new(&tetra, conv);
    if let Some(c) = cc_degree_offset_counterexample(&cob, conv) {
        out.push(Typo { item: "Hochschild degree with +1 per inner letter".into(), confirmed: true, counterexample: c });
    }
    out
}

/// The +1 reading of the word degree: b is then not homogeneous.
fn cc_degree_offset_counterexample(cob: &Cobar, conv: &Conventions) -> Option<String> {
    use hochschild::AInfinity;
    let alt = |w: &[crate::cobarloop::Mono]| -> i64 {
        cob.dga.degree(&w[0]) + w[1..].iter().map(|a| cob.dga.degree(a) + 1).sum::<i64>()
    };
    for w in suites::cobar_words(cob, 3, 3) {
        let Ok(b) = hochschild::hochschild_b(&cob.dga, &w, conv) else { continue };
        let mut seen: Vec<(i64, String)> = Vec::new();
        for (t, _) in b.iter() {
            if !seen.iter().any(|(d, _)| *d == alt(t)) {
                seen.push((alt(t), cob.show_hword(t)));
            }
        }
        if seen.len() > 1 {
            return Some(format!(
                "b({}) has terms {} (degree {}) and {} (degree {}) under the +1 reading",
                cob.show_hword(&w),
                seen[0].1,
                seen[0].0,
                seen[1].1,
                seen[1].0
            ));
        }
    }
    None
}

impl Report {
    pub fn to_text(&self) -> String {
        let mut o = String::new();
        o.push_str(&format!("# loopcx report (seed {})\n", self.seed));
        o.push_str("\n## ledger\n");
        match &self.ledger {
            Ok(t) => o.push_str(t),
            Err(e) => o.push_str(&format!("unreadable: {e}\n")),
        }
        o.push_str("\n## suites\n");
        match &self.suites {
            None => o.push_str("no fixtures\n"),
            Some(rows) => {
                o.push_str("suite\tstatus\tchecked\tcertifies\tdetail\n");
                for r in rows {
                    let status = if r.pass { "pass" } else if r.certifies.is_empty() { "FAIL" } else { "RED" };
                    o.push_str(&format!("{}\t{}\t{}\t{}\t{}\n", r.suite, status, r.checked, r.certifies.join(","), r.detail));
                }
            }
        }
        o.push_str("\n## artifact bugs\n");
        if self.artifact_bugs.is_empty() {
            o.push_str("none\n");
        }
        for b in &self.artifact_bugs {
            o.push_str(&format!("{b}\n"));
        }
        o.push_str("\n## sign identities\n");
        o.push_str("formula\tdomain\tpass\tfail\tpass_rate\tfirst_counterexample\n");
        for r in &self.signs {
            let rate = r.pass as f64 / (r.pass + r.fail).max(1) as f64;
            o.push_str(&format!("{}\t{}\t{}\t{}\t{:.4}\t{}\n", r.formula, r.domain, r.pass, r.fail, rate, r.first_counterexample));
        }
        o.push_str("\n## suspected typos\n");
        if self.suspected_typos.is_empty() {
            o.push_str("none\n");
        }
        for t in &self.suspected_typos {
            o.push_str(&format!("{}\t{}\n", t.item, t.counterexample));
        }
        o.push_str("\n## homology\n");
        match &self.homology {
            None => o.push_str("no fixtures\n"),
            Some(hs) => {
                o.push_str("complex\tdegree\trank\ttorsion\n");
                for (n, v) in hs {
                    for h in v {
                        o.push_str(&format!("{n}\t{}\t{}\t{}\n", h.degree, h.rank, torsion_cell(h)));
                    }
                }
            }
        }
        o.push_str("\n## truncated hochschild homology\n");
        match &self.hochschild {
            None => o.push_str("no fixtures\n"),
            Some(hs) => {
                o.push_str(&format!("complex\t{}", hh_header()));
                for (n, h) in hs {
                    o.push_str(&format!("{n}\t{}", hh_row(h)));
                }
            }
        }
        o.push_str("\n## cubes\n");
        match &self.cubes {
            Err(e) => o.push_str(&format!("error: {e}\n")),
            Ok(cs) => {
                for c in cs {
                    o.push_str(&format!("{}\t{}\t{}\n", c.name, pass_word(c.pass), c.detail));
                }
            }
        }
        o
    }
}
