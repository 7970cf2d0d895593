#![allow(dead_code)]

use loopcx::exactalg::{FreeComplex, IntMatrix};
use loopcx::suites::{self, Fixtures};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use std::collections::{BTreeSet, HashMap};

pub fn fixtures() -> Fixtures {
    Fixtures::load(&suites::default_fixture_dir()).expect("fixtures load")
}

pub fn dense(m: &IntMatrix) -> Vec<Vec<i64>> {
    m.to_dense().iter().map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect()).collect()
}

/// Gaussian elimination over Q.
pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(rank, p);
        let piv = a[rank][c].clone();
        for i in 0..a.len() {
            if i != rank && !a[i][c].is_zero() {
                let f = a[i][c].clone() / piv.clone();
                for k in c..ncols {
                    let t = a[rank][k].clone() * f.clone();
                    a[i][k] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn inv_mod(a: i64, p: i64) -> i64 {
    let mut r = 1;
    let mut b = a.rem_euclid(p);
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

pub fn rank_mod_p(rows: &[Vec<i64>], p: i64) -> usize {
    let mut a: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(piv) = (rank..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(rank, piv);
        let inv = inv_mod(a[rank][c], p);
        for i in 0..a.len() {
            if i != rank && a[i][c] != 0 {
                let f = a[i][c] * inv % p;
                for k in c..ncols {
                    a[i][k] = (a[i][k] - f * a[rank][k]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Betti number over Q and, per prime, dim H(C ⊗ F_p) − betti (the count of
/// p-primary cyclic summands in H_d plus H_{d+1} in the cohomological indexing).
pub struct OracleHomology {
    pub betti: usize,
    pub mod_p_excess: Vec<(i64, usize)>,
}

pub fn oracle_homology(c: &FreeComplex, d: i64, primes: &[i64]) -> OracleHomology {
    let out = dense(&c.diff(d));
    let inc = dense(&c.diff(d - 1));
    let n = c.dim(d);
    let betti = n - rational_rank(&out) - rational_rank(&inc);
    let mod_p_excess = primes
        .iter()
        .map(|&p| (p, n - rank_mod_p(&out, p) - rank_mod_p(&inc, p) - betti))
        .collect();
    OracleHomology { betti, mod_p_excess }
}

/// Union-find count of degree-0 classes modulo commutators and triangle relations.
pub fn edge_monoid_hh0(cap: usize) -> (usize, usize) {
    // non-collapsed edges of ∂Δ³ with tree {01,02,03}; triangle [i,j,k] relates e(ij)e(jk) ~ e(ik)
    let e = |a: usize, b: usize| -> Option<u8> {
        match (a, b) {
            (1, 2) => Some(0),
            (1, 3) => Some(1),
            (2, 3) => Some(2),
            _ => None,
        }
    };
    let lift = |x: Option<u8>| x.map(|v| vec![v]).unwrap_or_default();
    let mut monos: Vec<Vec<u8>> = vec![vec![]];
    let mut frontier = monos.clone();
    for _ in 0..cap {
        frontier = frontier.iter().flat_map(|m| (0..3u8).map(move |g| [m.clone(), vec![g]].concat())).collect();
        monos.extend(frontier.iter().cloned());
    }
    let index: HashMap<Vec<u8>, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut parent: Vec<usize> = (0..monos.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let n = p[y];
            p[y] = r;
            y = n;
        }
        r
    }
    let union = |p: &mut Vec<usize>, a: &Vec<u8>, b: &Vec<u8>| {
        let (x, y) = (find(p, index[a]), find(p, index[b]));
        p[x] = y;
    };
    for m1 in &monos {
        for m2 in &monos {
            if m1.len() + m2.len() <= cap {
                union(&mut parent, &[m1.clone(), m2.clone()].concat(), &[m2.clone(), m1.clone()].concat());
            }
        }
    }
    let triangles = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
    for u in &monos {
        for v in &monos {
            if u.len() + v.len() + 2 > cap {
                continue;
            }
            for [i, j, k] in triangles {
                let lhs = [u.clone(), lift(e(i, j)), lift(e(j, k)), v.clone()].concat();
                let rhs = [u.clone(), lift(e(i, k)), v.clone()].concat();
                union(&mut parent, &lhs, &rhs);
            }
        }
    }
    let roots: BTreeSet<usize> = (0..monos.len()).map(|i| find(&mut parent, i)).collect();
    let low: BTreeSet<usize> =
        (0..monos.len()).filter(|&i| monos[i].len() < cap).map(|i| find(&mut parent, i)).collect();
    (roots.len(), low.len())
}
