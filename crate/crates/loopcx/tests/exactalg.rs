mod common;

use common::*;
use loopcx::exactalg::*;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn det(m: &IntMatrix) -> BigRational {
    let n = m.rows();
    let mut a: Vec<Vec<BigRational>> =
        m.to_dense().into_iter().map(|r| r.into_iter().map(BigRational::from_integer).collect()).collect();
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return BigRational::zero() };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= a[c][c].clone();
        for i in c + 1..n {
            let f = a[i][c].clone() / a[c][c].clone();
            for k in c..n {
                let t = a[c][k].clone() * f.clone();
                a[i][k] -= t;
            }
        }
    }
    d
}

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=8, 1usize..=8).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i64..=9, c), r))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn smith_form_is_a_certified_factorization(rows in matrix()) {
        let m = IntMatrix::from_dense(&rows);
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d.clone());
        prop_assert_eq!(det(&s.u).abs(), BigRational::one());
        prop_assert_eq!(det(&s.v).abs(), BigRational::one());
        for (i, j, _) in s.d.entries() {
            prop_assert_eq!(i, j);
        }
        let diag = s.diagonal();
        for w in diag.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        prop_assert!(diag.iter().all(|x| x.is_positive()));
        prop_assert_eq!(diag.len(), rational_rank(&rows));
        prop_assert_eq!(rank(&m), diag.len());
    }

    #[test]
    fn sparse_invariant_factors_match_dense_smith(rows in matrix()) {
        let m = IntMatrix::from_dense(&rows);
        prop_assert_eq!(invariant_factors(&m), smith_normal_form(&m).diagonal());
    }

    #[test]
    fn validate_is_invariant_under_basis_permutation(seed in 0u64..1000) {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let fx = fixtures();
        let ks = fx.all();
        let k = ks[(seed % ks.len() as u64) as usize];
        let c = k.chain_complex();
        let perms: Vec<Vec<usize>> = c.basis.iter().map(|b| {
            let mut p: Vec<usize> = (0..b.len()).collect();
            p.shuffle(&mut rng);
            p
        }).collect();
        let mut out = c.clone();
        for (n, m) in c.diffs.iter().enumerate() {
            let mut pm = IntMatrix::zeros(m.rows(), m.cols());
            for (i, j, v) in m.entries() {
                pm.set(perms[n + 1][i], perms[n][j], v.clone());
            }
            out.diffs[n] = pm;
        }
        prop_assert_eq!(validate_complex(&out).unwrap(), validate_complex(&c).unwrap());
        prop_assert_eq!(validate_complex(&out).unwrap(), Verdict::Pass);
    }
}

#[test]
fn smith_of_a_known_matrix() {
    let m = IntMatrix::from_dense(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let d: Vec<i64> = smith_normal_form(&m).diagonal().iter().map(|x| x.try_into().unwrap()).collect();
    assert_eq!(d, vec![2, 6, 12]);
}

#[test]
fn validate_detects_nonzero_square() {
    let c = FreeComplex {
        min_degree: 0,
        basis: vec![vec!["a".into()], vec!["b".into()], vec!["c".into()]],
        diffs: vec![IntMatrix::from_dense(&[vec![1]]), IntMatrix::from_dense(&[vec![1]])],
    };
    assert_eq!(validate_complex(&c).unwrap(), Verdict::FailAt(0));
    let bad = FreeComplex { diffs: vec![IntMatrix::zeros(2, 1), IntMatrix::zeros(1, 1)], ..c };
    assert!(matches!(validate_complex(&bad), Err(AlgError::Shape(_))));
}

#[test]
fn empty_complex_and_degree_range() {
    let e = FreeComplex::empty();
    let h = homology(&e, 0).unwrap();
    assert_eq!((h.rank, h.torsion.len()), (0, 0));
    let c = fixtures().circle.chain_complex();
    assert!(matches!(homology(&c, 4), Err(AlgError::DegreeRange(4))));
}

#[test]
fn chain_map_identity_and_zero() {
    let c = fixtures().torus.chain_complex();
    let id: Vec<IntMatrix> = c.basis.iter().map(|b| IntMatrix::identity(b.len())).collect();
    assert_eq!(chain_map_check(&id, &c, &c, 1).unwrap(), Verdict::Pass);
    let zero: Vec<IntMatrix> = c.basis.iter().map(|b| IntMatrix::zeros(b.len(), b.len())).collect();
    assert_eq!(chain_map_check(&zero, &c, &c, -1).unwrap(), Verdict::Pass);
    assert_eq!(chain_map_check(&id, &c, &c, -1).unwrap(), Verdict::FailAt(-2));
    assert!(chain_map_check(&id[..1], &c, &c, 1).is_err());
}

#[test]
fn build_complex_rejects_boundaries_leaving_the_basis() {
    let r = build_complex(0, vec![vec![1u8], vec![2u8]], |_| vec![(3u8, 1)]);
    assert!(r.is_err());
}

#[test]
fn homology_agrees_with_rank_and_mod_p_oracle() {
    for k in fixtures().all() {
        let c = k.chain_complex();
        for deg in 0..=k.dim() as i64 {
            let h = homology(&c, -deg).unwrap();
            let o = oracle_homology(&c, -deg, &[2, 3, 5, 7]);
            assert_eq!(h.rank, o.betti, "{} H{deg}", k.name);
            // excess at p counts p-torsion in this degree and in the next one up
            let up = if deg == 0 { vec![] } else { homology(&c, -deg + 1).unwrap().torsion_i64() };
            for (p, ex) in o.mod_p_excess {
                let here = h.torsion_i64().iter().filter(|t| *t % p == 0).count();
                let there = up.iter().filter(|t| *t % p == 0).count();
                assert_eq!(ex, here + there, "{} H{deg} mod {p}", k.name);
            }
        }
    }
}
