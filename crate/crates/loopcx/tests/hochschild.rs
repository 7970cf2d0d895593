mod common;

use common::*;
use loopcx::cobarloop::{Cobar, FreeDga, LoopGenerator, Mono};
use loopcx::hochschild::*;
use loopcx::ledger::{Conventions, Leibniz};
use loopcx::lin::Lin;
use loopcx::suites::{self, Fixtures};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet, HashMap};

fn conv() -> Conventions {
    Conventions::resolved()
}

fn one_generator(deg: i64) -> FreeDga {
    FreeDga {
        names: vec!["e".into()],
        degree: vec![deg],
        weight: vec![1],
        boundary: vec![Some(Lin::zero())],
        leibniz: Leibniz::Left,
    }
}

#[test]
fn degrees_of_words() {
    let c = one_generator(3);
    assert_eq!(cc_degree(&c, &[vec![0]]).unwrap(), 3);
    let z = one_generator(0);
    assert_eq!(cc_degree(&z, &[vec![0], vec![0]]).unwrap(), -1);
    let m = one_generator(-1);
    assert_eq!(cc_degree(&m, &[vec![0], vec![0], vec![0]]).unwrap(), -5);
    assert_eq!(cc_degree(&m, &[]), Err(HochError::Empty));
    assert_eq!(hochschild_b(&m, &[], &conv()), Err(HochError::Empty));
}

#[test]
fn small_differentials() {
    let e = one_generator(0);
    assert!(hochschild_b(&e, &[vec![0], vec![0]], &conv()).unwrap().is_zero());
    // single letter: b(a) = −μ₁(a)
    let fx = fixtures();
    let cob = Cobar::new(&Fixtures::reduced(&fx.tetrahedron), &conv());
    let t = cob.id(&LoopGenerator::Tau(vec![1, 2, 3])).unwrap();
    let b = hochschild_b(&cob.dga, &[vec![t]], &conv()).unwrap();
    let want: Lin<Vec<Mono>> = cob.tau_boundary(&[1, 2, 3]).iter().map(|(m, c)| (vec![m.clone()], -c)).collect();
    assert_eq!(b, want);
}

/// Classical Hochschild differential of a DGA on c₀[c₁|…|c_n], products in time order.
/// Our word a_d ⊗ … ⊗ a₁ corresponds to c₀ = a_d and c_i = a_i.
fn textbook_b(dga: &FreeDga, w: &[Mono]) -> Lin<Vec<Mono>> {
    let d = w.len();
    let n = d - 1;
    let c: Vec<Mono> = (0..=n).map(|i| if i == 0 { w[0].clone() } else { w[d - i].clone() }).collect();
    let to_word = |cs: &[Mono]| -> Vec<Mono> {
        let mut out = vec![cs[0].clone()];
        out.extend(cs[1..].iter().rev().cloned());
        out
    };
    let deg = |m: &Mono| dga.mono_degree(m);
    let sg = |e: i64| if e.rem_euclid(2) == 0 { 1 } else { -1 };
    let cat = |a: &Mono, b: &Mono| -> Mono { a.iter().chain(b.iter()).copied().collect() };
    let mut out = Lin::zero();
    for i in 0..n {
        let mut cs = c[..i].to_vec();
        cs.push(cat(&c[i], &c[i + 1]));
        cs.extend_from_slice(&c[i + 2..]);
        out.add_term(to_word(&cs), sg(i as i64));
    }
    if n >= 1 {
        let before: i64 = c[..n].iter().map(deg).sum();
        let mut cs = vec![cat(&c[n], &c[0])];
        cs.extend_from_slice(&c[1..n]);
        out.add_term(to_word(&cs), sg(n as i64 + deg(&c[n]) * before));
    }
    let mut prefix = 0;
    for i in 0..=n {
        for (m, k) in dga.d_mono(&c[i]).unwrap().iter() {
            let mut cs = c.clone();
            cs[i] = m.clone();
            out.add_term(to_word(&cs), k * sg(n as i64 + prefix));
        }
        prefix += deg(&c[i]);
    }
    out
}

/// Parity-labelled union-find: does a sign function ε on words with ours = ε(w)ε(t)·textbook exist?
struct Twist {
    parent: HashMap<Vec<Mono>, (Vec<Mono>, u8)>,
}

impl Twist {
    fn find(&mut self, w: &Vec<Mono>) -> (Vec<Mono>, u8) {
        let Some((p, s)) = self.parent.get(w).cloned() else {
            self.parent.insert(w.clone(), (w.clone(), 0));
            return (w.clone(), 0);
        };
        if &p == w {
            return (p, 0);
        }
        let (r, s2) = self.find(&p);
        self.parent.insert(w.clone(), (r.clone(), s ^ s2));
        (r, s ^ s2)
    }

    fn relate(&mut self, a: &Vec<Mono>, b: &Vec<Mono>, parity: u8) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == parity;
        }
        self.parent.insert(ra, (rb, pa ^ pb ^ parity));
        true
    }
}

fn all_words(dga: &FreeDga, max_len: usize) -> Vec<Vec<Mono>> {
    let letters: Vec<Mono> = suites::monomials_upto(dga, 2);
    let mut out: Vec<Vec<Mono>> = letters.iter().map(|l| vec![l.clone()]).collect();
    let mut frontier = out.clone();
    for _ in 1..max_len {
        let next: Vec<Vec<Mono>> = frontier
            .iter()
            .flat_map(|w| letters.iter().filter(|l| l.len() <= 1).map(move |l| {
                let mut v = w.clone();
                v.push(l.clone());
                v
            }))
            .collect();
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[test]
fn agrees_with_the_classical_differential_up_to_a_sign_twist() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let dga = suites::random_dga(&mut rng, 3, &conv());
        let mut tw = Twist { parent: HashMap::new() };
        for w in all_words(&dga, 3) {
            let ours = hochschild_b(&dga, &w, &conv()).unwrap();
            let text = textbook_b(&dga, &w);
            let tt = text.iter().flat_map(|(t, _)| textbook_b(&dga, t).iter().map(|(a, b)| (a.clone(), b)).collect::<Vec<_>>());
            let mut sq: Lin<Vec<Mono>> = Lin::zero();
            for (t, c) in text.iter() {
                sq.add_scaled(&textbook_b(&dga, t), c);
            }
            let _ = tt;
            assert!(sq.is_zero(), "classical b² on {w:?}");
            let ks: BTreeSet<&Vec<Mono>> = ours.keys().chain(text.keys()).collect();
            for t in ks {
                let (a, b) = (ours.coeff(t), text.coeff(t));
                assert_eq!(a.abs(), b.abs(), "coefficient of {t:?} in b({w:?})");
                if a != 0 {
                    assert!(tw.relate(&w, t, (a != b) as u8), "no consistent sign twist at b({w:?}) ∋ {t:?}");
                }
            }
        }
    }
}

#[test]
fn b_raises_degree_and_keeps_cobar_weight() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let dga = suites::random_dga(&mut rng, 4, &conv());
        for _ in 0..60 {
            let w = suites::random_word(&mut rng, &dga, 4);
            let dw = cc_degree(&dga, &w).unwrap();
            for (t, _) in hochschild_b(&dga, &w, &conv()).unwrap().iter() {
                assert_eq!(cc_degree(&dga, t).unwrap(), dw + 1);
            }
        }
    }
    let fx = fixtures();
    for k in [&fx.circle, &fx.tetrahedron, &fx.torus] {
        let cob = Cobar::new(&Fixtures::reduced(k), &conv());
        let mut checked = 0;
        while checked < 60 {
            let w = suites::random_word(&mut rng, &cob.dga, 4);
            // words through triple-π letters have no boundary
            let Ok(b) = hochschild_b(&cob.dga, &w, &conv()) else { continue };
            for (t, _) in b.iter() {
                assert!(word_weight(&cob.dga, t) <= word_weight(&cob.dga, &w));
            }
            checked += 1;
        }
    }
}

fn exterior_pair(extra: bool) -> TableAlgebra {
    // 1, x, y in degree 1 with all products of x, y zero; `extra` adds z = x·y in degree 2.
    let mut names = vec!["1".to_string(), "x".into(), "y".into()];
    let mut degrees = vec![0, 1, 1];
    if extra {
        names.push("z".into());
        degrees.push(2);
    }
    let n = names.len();
    let mut a = TableAlgebra { names, degrees, weights: vec![0; n], ops: BTreeMap::new(), unit: Some(0) };
    let deg = a.degrees.clone();
    let sg = |e: i64| if e % 2 == 0 { 1 } else { -1 };
    for s in 0..n {
        // μ₂(s₂, s₁) = (−1)^{|s₁|} s₁·s₂
        a.set(&[s, 0], Lin::single(s, 1));
        a.set(&[0, s], Lin::single(s, sg(deg[s])));
    }
    if extra {
        a.set(&[2, 1], Lin::single(3, sg(deg[1])));
    }
    a
}

#[test]
fn table_algebras_satisfy_the_relations() {
    for extra in [false, true] {
        let a = exterior_pair(extra);
        assert!(a.degree_check());
        let n = a.names.len();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    assert!(a.ainf_residual(&[i, j, k]).is_zero(), "{i} {j} {k}");
                }
            }
        }
    }
}

fn words_over(n: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_len {
        frontier = frontier.iter().flat_map(|w| (0..n).map(move |x| [w.clone(), vec![x]].concat())).collect();
        out.extend(frontier.iter().cloned());
    }
    out
}

fn chain_map_residual<A: AInfinity, B: AInfinity<Elt = usize>>(a: &A, b: &B, f: &Morphism<A::Elt, usize>, w: &[A::Elt]) -> Lin<Vec<usize>> {
    let c = conv();
    let lhs = hochschild_b_lin(b, &cc_of_morphism(a, f, w).unwrap(), &c).unwrap();
    let mut rhs = Lin::zero();
    for (t, k) in hochschild_b(a, w, &c).unwrap().iter() {
        rhs.add_scaled(&cc_of_morphism(a, f, t).unwrap(), k);
    }
    lhs.sub(&rhs)
}

#[test]
fn induced_maps() {
    let a = exterior_pair(false);
    let mut id = Morphism::new();
    for s in 0..3 {
        id.set(&[s], Lin::single(s, 1));
    }
    for w in words_over(3, 3) {
        assert_eq!(cc_of_morphism(&a, &id, &w).unwrap(), Lin::single(w.clone(), 1));
    }
    // strict map swapping x and y acts letterwise
    let mut swap = Morphism::new();
    for (s, t) in [(0, 0), (1, 2), (2, 1)] {
        swap.set(&[s], Lin::single(t, 1));
    }
    for w in words_over(3, 3) {
        let img: Vec<usize> = w.iter().map(|&s| [0, 2, 1][s]).collect();
        assert_eq!(cc_of_morphism(&a, &swap, &w).unwrap(), Lin::single(img, 1));
        assert!(chain_map_residual(&a, &a, &swap, &w).is_zero());
    }
    // identity plus a quadratic term F²(u, v) ∈ span(x, y)
    let mut f = id.clone();
    f.set(&[1, 1], [(1, 2), (2, -1)].into_iter().collect());
    f.set(&[1, 2], Lin::single(2, 3));
    f.set(&[2, 1], Lin::single(1, -1));
    for args in words_over(3, 4) {
        assert!(functor_residual(&a, &a, &f, &args).unwrap().is_zero(), "functor equation on {args:?}");
    }
    let mut nontrivial = 0;
    for w in words_over(3, 4) {
        assert!(chain_map_residual(&a, &a, &f, &w).is_zero(), "CC(F) on {w:?}");
        if cc_of_morphism(&a, &f, &w).unwrap() != cc_of_morphism(&a, &id, &w).unwrap() {
            nontrivial += 1;
        }
    }
    assert!(nontrivial > 0);
    // negative control: the inclusion into an algebra with x·y ≠ 0 is not a functor
    let b = exterior_pair(true);
    assert!(!functor_residual(&a, &b, &id, &[2, 1]).unwrap().is_zero());
    assert!(words_over(3, 3).iter().any(|w| !chain_map_residual(&a, &b, &id, w).is_zero()));
}

fn hh(k: &loopcx::simpcx::SimplicialComplex, cap: usize) -> HhReport {
    let cob = Cobar::new(&Fixtures::reduced(k), &conv());
    let letters: Vec<Mono> = cob.basis(cap).into_values().flatten().collect();
    hh_truncated(&cob.dga, &letters, 0, cap, &conv()).unwrap()
}

#[test]
fn truncated_hh_of_shipped_algebras() {
    let fx = fixtures();
    for w in 1..=4 {
        assert_eq!(hh(&fx.circle, w).summary.rank, w + 1);
    }
    let p = hh(&fx.point, 3);
    assert_eq!((p.summary.rank, p.stable_rank, p.stabilized), (1, 1, true));
    for w in 3..=5 {
        let h = hh(&fx.tetrahedron, w);
        let (classes, image) = edge_monoid_hh0(w);
        assert_eq!(h.summary.rank, classes, "cap {w}");
        assert!(h.summary.torsion.is_empty());
        assert_eq!(h.stable_rank, image, "cap {w}");
        assert_eq!(h.stable_rank, 1);
    }
}

#[test]
fn positive_letters_make_degrees_unbounded() {
    let d = one_generator(1);
    assert!(matches!(hh_truncated(&d, &[vec![0]], 0, 2, &conv()), Err(HochError::Unbounded(_))));
}
