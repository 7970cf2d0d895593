use loopcx::signkoszul::*;
use proptest::prelude::*;

fn ds(v: &[i64]) -> DegreeSequence {
    DegreeSequence(v.to_vec())
}

const KINDS: [SignKind; 6] =
    [SignKind::Dagger, SignKind::Flat, SignKind::Sharp, SignKind::Diamond, SignKind::Bullet, SignKind::Maltese];

#[test]
fn substitution_examples() {
    let p = |d| SignParams { d, ..Default::default() };
    assert_eq!(sign_integer(SignKind::Dagger, p(3), &ds(&[0, 1, 2])).unwrap(), 8);
    assert_eq!(sign_value(SignKind::Dagger, p(3), &ds(&[0, 1, 2])).unwrap(), 0);
    let m = SignParams { i: 1, j: 2, ..Default::default() };
    assert_eq!(sign_integer(SignKind::Maltese, m, &ds(&[0, 1])).unwrap(), 3);
    assert_eq!(sign_value(SignKind::Maltese, m, &ds(&[0, 1])).unwrap(), 1);
    let f = SignParams { d: 2, d1: 1, d2: 1, ..Default::default() };
    assert_eq!(sign_integer(SignKind::Flat, f, &ds(&[0, 0])).unwrap(), 2);
    assert_eq!(sign_value(SignKind::Flat, f, &ds(&[0, 0])).unwrap(), 0);
}

#[test]
fn constraint_violations_are_named() {
    let e = sign_value(SignKind::Dagger, SignParams { d: 2, ..Default::default() }, &ds(&[1])).unwrap_err();
    assert!(e.to_string().contains("d = number of degrees"));
    let e = sign_value(SignKind::Bullet, SignParams { d: 2, i: 1, j: 1, ..Default::default() }, &ds(&[0, 0])).unwrap_err();
    assert!(e.to_string().contains("i + j < d"));
    assert!(homotopy_identity_check(2, 3, 0, &ds(&[0, 0])).is_err());
    assert!(homotopy_identity_check(2, 1, 2, &ds(&[0, 0])).is_err());
}

#[test]
fn koszul_examples() {
    assert_eq!(koszul_permutation_sign(&ds(&[3, 1, 4]), &[0, 1, 2]).unwrap(), 0);
    assert_eq!(koszul_permutation_sign(&ds(&[0, 2]), &[1, 0]).unwrap(), 1);
    assert_eq!(koszul_permutation_sign(&ds(&[1, 2]), &[1, 0]).unwrap(), 0);
    // 3-cycle as a product of the swaps (0 1) then (1 2)
    let x = ds(&[0, 0, 1]);
    let cyc = koszul_permutation_sign(&x, &[1, 2, 0]).unwrap();
    let s1 = koszul_permutation_sign(&x, &[1, 0, 2]).unwrap();
    let y = ds(&[0, 0, 1]);
    let s2 = koszul_permutation_sign(&y, &[0, 2, 1]).unwrap();
    assert_eq!(cyc, (s1 + s2) % 2);
    assert!(koszul_permutation_sign(&x, &[0, 0, 1]).is_err());
    assert!(koszul_permutation_sign(&x, &[0, 1]).is_err());
}

/// Both sides of the closing identity, re-derived from scratch with the same index conventions.
fn identity_by_hand(d: usize, d1: usize, r: usize, x: &[i64]) -> (i64, i64) {
    let at = |k: usize| x[k - 1];
    let sum = |lo: usize, hi: usize| (lo..=hi).map(at).sum::<i64>();
    let red = |lo: usize, hi: usize| (lo..=hi).map(|k| at(k) + 1).sum::<i64>();
    let d2 = d - d1;
    let (di, d1i, d2i, ri) = (d as i64, d1 as i64, d2 as i64, r as i64);
    let dag: i64 = (1..=d).map(|k| k as i64 * at(k)).sum();
    let lhs = if d == 0 { 0 } else { at(d) } + dag + di * sum(1, d);
    let diamond = ri * (di + 1) + sum(1, r) * sum(r + 1, d) + d2i * sum(r + 1, r + d1);
    let x2 = sum(r + d1 + 1, d) + sum(1, r);
    let bullet = red(1, r) * (1 + red(r + 1, d)) + red(r + d1 + 1, d.saturating_sub(1));
    let dag1: i64 = (r + 1..=r + d1).map(|k| (ri + k as i64 + d1i) * at(k)).sum();
    let dag2: i64 = (1..=r).map(|k| (ri + k as i64) * at(k)).sum::<i64>()
        + (r + d1 + 1..=d).map(|k| (di + ri + k as i64) * at(k)).sum::<i64>();
    (lhs, diamond + d2i - 1 + x2 + bullet + dag1 + dag2)
}

#[test]
fn identity_check_matches_hand_substitution() {
    let c = homotopy_identity_check(1, 1, 0, &ds(&[0])).unwrap();
    let (l, r) = identity_by_hand(1, 1, 0, &[0]);
    assert_eq!((c.lhs, c.rhs), (l, r));
    for d in 1..=4 {
        for d1 in 0..=d {
            for r in 0..=d - d1 {
                let z = vec![0; d];
                let c = homotopy_identity_check(d, d1, r, &ds(&z)).unwrap();
                let (l, rr) = identity_by_hand(d, d1, r, &z);
                assert_eq!((c.lhs, c.rhs), (l, rr));
                assert_eq!(c.equal, (l - rr).rem_euclid(2) == 0);
            }
        }
    }
}

#[test]
fn sweep_classifies_every_failure() {
    let s = sweep_homotopy_identity(4, -2, 2);
    assert_eq!(s.unclassified(), 0);
    assert_eq!(s.in_range_pass, s.in_range_total);
    assert!(s.total > s.in_range_total);
    let failing = s.total - s.pass;
    let classified: usize = s.failures_by_class.iter().map(|(_, n)| n).sum();
    assert_eq!(failing, classified);
    assert!(s.minimal.iter().all(|c| c.class == FailureClass::BoundaryR && c.r == c.d - c.d1));
}

proptest! {
    #[test]
    fn signs_depend_only_on_parities(
        degs in prop::collection::vec(-3i64..=3, 1..6),
        which in 0usize..6,
        bump in 0usize..6,
        a in 0usize..6, b in 0usize..6,
    ) {
        let d = degs.len();
        let i = a % d;
        let j = b % (d - i).max(1);
        let d1 = a % (d + 1);
        let p = SignParams { d, d1, d2: d - d1, r: b % (d - d1 + 1), k: a % (d - (d - d1) + 1), i, j };
        let x = ds(&degs);
        let mut y = degs.clone();
        y[bump % d] += 2;
        let y = ds(&y);
        let kind = KINDS[which];
        let p = if kind == SignKind::Maltese { SignParams { i: i + 1, j: (i + 1 + j).min(d), ..p } } else { p };
        match (sign_value(kind, p, &x), sign_value(kind, p, &y)) {
            (Ok(u), Ok(v)) => prop_assert_eq!(u, v),
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "constraint depends on degrees"),
        }
    }

    #[test]
    fn koszul_sign_is_a_cocycle(degs in prop::collection::vec(-3i64..=3, 1..6), s1 in any::<u64>(), s2 in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let n = degs.len();
        let mut p: Vec<usize> = (0..n).collect();
        let mut q: Vec<usize> = (0..n).collect();
        p.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(s1));
        q.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(s2));
        let x = ds(&degs);
        // reorder by p, then the result by q
        let xp = ds(&p.iter().map(|&k| degs[k]).collect::<Vec<_>>());
        let pq: Vec<usize> = q.iter().map(|&k| p[k]).collect();
        let lhs = koszul_permutation_sign(&x, &pq).unwrap();
        let rhs = (koszul_permutation_sign(&x, &p).unwrap() + koszul_permutation_sign(&xp, &q).unwrap()) % 2;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bullet_at_i_zero_is_maltese(degs in prop::collection::vec(-3i64..=3, 1..6), j in 0usize..6) {
        let d = degs.len();
        let j = j % d;
        let x = ds(&degs);
        let b = sign_value(SignKind::Bullet, SignParams { d, i: 0, j, ..Default::default() }, &x).unwrap();
        let m = sign_value(SignKind::Maltese, SignParams { i: j + 1, j: d - 1, ..Default::default() }, &x).unwrap();
        prop_assert_eq!(b, m);
    }
}
