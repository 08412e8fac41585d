//! Independent oracles and seeded generators for the acceptance suite.
//!
//! The oracles work directly from the raw data (terms, normals, offsets) and
//! use only textbook linear algebra, so they share no code paths with the
//! library functions under test.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tropcong::polyhedra::{HalfSpace, PolyhedralUnion, Polyhedron};
use tropcong::scalar::q;
use tropcong::{TropicalPoly, TropicalRational, Q};

/// A generator for case `index` of the suite labelled `label`.
pub fn case_rng(label: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(label);
    rng.set_stream(index);
    rng
}

pub fn rand_q(rng: &mut ChaCha8Rng, radius: i64, max_den: i64) -> Q {
    let d = rng.gen_range(1..=max_den);
    Q::new(BigInt::from(rng.gen_range(-radius * d..=radius * d)), BigInt::from(d))
}

pub fn rand_point(rng: &mut ChaCha8Rng, n: usize, radius: i64, max_den: i64) -> Vec<Q> {
    (0..n).map(|_| rand_q(rng, radius, max_den)).collect()
}

pub fn rand_normal(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Vec<i64> {
    loop {
        let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-bound..=bound)).collect();
        if v.iter().any(|&x| x != 0) {
            return v;
        }
    }
}

pub fn dot_i(a: &[i64], x: &[Q]) -> Q {
    a.iter().zip(x).map(|(ai, xi)| q(*ai) * xi).sum()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// A random nonempty piece: half-spaces through or around a random center,
/// sometimes paired into hyperplanes. At most 8 half-spaces.
pub fn rand_piece(rng: &mut ChaCha8Rng, n: usize) -> Polyhedron {
    let center = rand_point(rng, n, 3, 3);
    let count = rng.gen_range(1..=6);
    let mut hs = Vec::new();
    for _ in 0..count {
        let a = rand_normal(rng, n, 3);
        let slack = if rng.gen_bool(0.3) { Q::zero() } else { rand_q(rng, 2, 2).abs() };
        let b = -dot_i(&a, &center) - slack.clone();
        if slack.is_zero() && hs.len() + 2 <= 8 && rng.gen_bool(0.4) {
            hs.push(HalfSpace::new(a.iter().map(|x| -x).collect(), -b.clone()).unwrap());
        }
        if hs.len() < 8 {
            hs.push(HalfSpace::new(a, b).unwrap());
        }
    }
    Polyhedron::new(n, hs).unwrap()
}

pub fn rand_union(rng: &mut ChaCha8Rng, n: usize, max_pieces: usize) -> PolyhedralUnion {
    let k = rng.gen_range(1..=max_pieces);
    PolyhedralUnion::new(n, (0..k).map(|_| rand_piece(rng, n)).collect()).unwrap()
}

/// Up to `max_terms` terms with nonnegative exponents of total degree at most `max_deg`.
pub fn rand_poly(rng: &mut ChaCha8Rng, n: usize, max_terms: usize, max_deg: i64) -> TropicalPoly {
    let mut p = TropicalPoly::neg_inf(n);
    for _ in 0..rng.gen_range(1..=max_terms) {
        let mut e = vec![0i64; n];
        let mut budget = rng.gen_range(0..=max_deg);
        for slot in e.iter_mut() {
            let take = rng.gen_range(0..=budget);
            *slot = take;
            budget -= take;
        }
        let i = rng.gen_range(0..n);
        e[i] += budget;
        p.insert(e, rand_q(rng, 3, 2));
    }
    p
}

/// `max` over terms of `c + e·x`; `None` for the tropical zero.
pub fn poly_value(p: &TropicalPoly, x: &[Q]) -> Option<Q> {
    p.terms().map(|(e, c)| c + dot_i(e, x)).max()
}

pub fn rational_value(f: &TropicalRational, x: &[Q]) -> Option<Q> {
    let num = poly_value(f.num(), x)?;
    let den = poly_value(f.den(), x).expect("finite denominator");
    Some(num - den)
}

pub fn halfspace_holds(h: &HalfSpace, x: &[Q]) -> bool {
    !(dot_i(h.normal(), x) + h.offset()).is_positive()
}

pub fn piece_holds(p: &Polyhedron, x: &[Q]) -> bool {
    p.halfspaces().iter().all(|h| halfspace_holds(h, x))
}

pub fn union_holds(u: &PolyhedralUnion, x: &[Q]) -> bool {
    u.pieces().iter().any(|p| piece_holds(p, x))
}

/// Unique solution of a square system by Gauss–Jordan elimination.
pub fn solve(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = Q::one() / &a[col][col];
        for x in a[col][col..n].iter_mut() {
            *x *= &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                let prow = a[col].clone();
                for (x, p) in a[r][col..n].iter_mut().zip(&prow[col..n]) {
                    *x -= &factor * p;
                }
                let t = &factor * &b[col];
                b[r] -= t;
            }
        }
    }
    Some(b)
}

/// All subsets of `0..m` with at most `max` elements.
pub fn subsets(m: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.last().map_or(0, |&l: &usize| l + 1);
            for i in start..m {
                let mut t = s.clone();
                t.push(i);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Orthogonal projection of `x` onto the affine set where the half-spaces in
/// `set` are tight, if their normals are independent.
fn project_onto_face(hs: &[HalfSpace], set: &[usize], x: &[Q]) -> Option<Vec<Q>> {
    let normals: Vec<Vec<Q>> = set.iter().map(|&i| hs[i].normal().iter().map(|v| q(*v)).collect()).collect();
    let gram: Vec<Vec<Q>> = normals.iter().map(|a| normals.iter().map(|b| dot(a, b)).collect()).collect();
    let rhs: Vec<Q> = set.iter().map(|&i| dot_i(hs[i].normal(), x) + hs[i].offset()).collect();
    let lambda = solve(gram, rhs)?;
    let mut y = x.to_vec();
    for (a, l) in normals.iter().zip(&lambda) {
        for (yj, aj) in y.iter_mut().zip(a) {
            *yj -= l * aj;
        }
    }
    Some(y)
}

/// Squared distance from `x` to a nonempty polyhedron by enumerating the
/// projections onto every face's affine hull and keeping the feasible ones.
pub fn brute_force_dist_sq(p: &Polyhedron, x: &[Q]) -> Option<Q> {
    let hs = p.halfspaces();
    let mut best: Option<Q> = None;
    for set in subsets(hs.len(), x.len()) {
        let Some(y) = project_onto_face(hs, &set, x) else { continue };
        if piece_holds(p, &y) {
            let d = sub(x, &y);
            let d2 = dot(&d, &d);
            if best.as_ref().is_none_or(|b| d2 < *b) {
                best = Some(d2);
            }
        }
    }
    best
}

/// Whether `z` is a nonnegative combination of `gens`, by trying every
/// independent subset of at most `n` generators.
pub fn in_conic_hull(gens: &[Vec<i64>], z: &[Q]) -> bool {
    if z.iter().all(Zero::is_zero) {
        return true;
    }
    let n = z.len();
    for set in subsets(gens.len(), n) {
        if set.is_empty() {
            continue;
        }
        let cols: Vec<Vec<Q>> = set.iter().map(|&i| gens[i].iter().map(|v| q(*v)).collect()).collect();
        let gram: Vec<Vec<Q>> = cols.iter().map(|a| cols.iter().map(|b| dot(a, b)).collect()).collect();
        let rhs: Vec<Q> = cols.iter().map(|a| dot(a, z)).collect();
        let Some(lambda) = solve(gram, rhs) else { continue };
        if lambda.iter().any(Signed::is_negative) {
            continue;
        }
        let mut back = vec![Q::zero(); n];
        for (a, l) in cols.iter().zip(&lambda) {
            for (bj, aj) in back.iter_mut().zip(a) {
                *bj += l * aj;
            }
        }
        if back == z {
            return true;
        }
    }
    false
}

/// Lattice length and primitive direction of `b − a`.
pub fn lattice_segment(a: &[Q], b: &[Q]) -> (Q, Vec<Q>) {
    let d = sub(b, a);
    let den = d.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = d.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let len = Q::new(g.clone(), den);
    let dir = ints.iter().map(|x| Q::from_integer(x / &g)).collect();
    (len, dir)
}
