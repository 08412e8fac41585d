use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::Constraints;
use crate::polyhedra::{cone_h_to_v, polar_cone, ConeV, HalfSpace, Polyhedron};
use crate::scalar::{norm_sq, q, Q};

/// A constant `k > 0` with `|y| ≤ k · max_i x_i·y` for every `y` in the cone
/// generated by the `x_i`.
///
/// The cone is split into strongly convex subcones spanned by subsets of the
/// generators. On each subcone the maximum of `|y|²` over
/// `{y ∈ cone : x_i·y ≤ 1}` is attained at a vertex. The result is the
/// smallest multiple of `1/64` whose square dominates every such maximum.
pub fn distance_constant(c: &ConeV) -> Result<Q> {
    let gens = c.nonzero_generators();
    if gens.is_empty() {
        return Err(Error::Precondition("distance_constant needs a nonzero generator".into()));
    }
    let n = c.nvars();
    let mut worst = Q::zero();
    for subset in strongly_convex_subsets(n, &gens) {
        let sub: Vec<Vec<i64>> = subset.iter().map(|&i| gens[i].clone()).collect();
        let sub_cone = ConeV::new(n, sub.clone())?;
        // H-description of Cone(sub) is the polar of its polar.
        let dual = cone_h_to_v(&polar_cone(&sub_cone))?;
        let mut hs: Vec<HalfSpace> = dual
            .nonzero_generators()
            .into_iter()
            .map(|h| HalfSpace::new(h, Q::zero()))
            .collect::<Result<_>>()?;
        for g in &sub {
            hs.push(HalfSpace::new(g.clone(), q(-1))?);
        }
        let section = Polyhedron::new(n, hs)?;
        for v in section.vertices() {
            let m = norm_sq(&v);
            if m > worst {
                worst = m;
            }
        }
    }
    Ok(ceil_sqrt_sixty_fourths(&worst))
}

/// Smallest `p/64` with `(p/64)² ≥ m`, and at least `1/64`.
fn ceil_sqrt_sixty_fourths(m: &Q) -> Q {
    let t = m * q(4096);
    let mut s: BigInt = t.floor().to_integer().sqrt();
    while Q::from_integer(&s * &s) < t {
        s += BigInt::one();
    }
    if s.is_zero() {
        s = BigInt::one();
    }
    Q::new(s, BigInt::from(64))
}

/// Maximal subsets of generator indices spanning pointed cones, found by
/// repeatedly removing one member of a positive circuit.
fn strongly_convex_subsets(n: usize, gens: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let mut out = BTreeSet::new();
    let mut seen = BTreeSet::new();
    let mut stack = vec![(0..gens.len()).collect::<Vec<usize>>()];
    while let Some(set) = stack.pop() {
        if !seen.insert(set.clone()) {
            continue;
        }
        match positive_circuit(n, gens, &set) {
            None => {
                out.insert(set);
            }
            Some(support) => {
                for drop in support {
                    let smaller: Vec<usize> = set.iter().copied().filter(|&i| i != drop).collect();
                    if !smaller.is_empty() {
                        stack.push(smaller);
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Members of `set` carrying weight in some `Σ c_i x_i = 0`, `c ≥ 0`, `Σ c_i = 1`.
fn positive_circuit(n: usize, gens: &[Vec<i64>], set: &[usize]) -> Option<Vec<usize>> {
    let r = set.len();
    let mut c = Constraints::new(r);
    for i in 0..r {
        let mut row = vec![Q::zero(); r];
        row[i] = q(1);
        c.ge(row, Q::zero());
    }
    for row in (0..n).map(|j| set.iter().map(|&i| q(gens[i][j])).collect()) {
        c.eq(row, Q::zero());
    }
    c.eq(vec![q(1); r], q(1));
    let w = c.feasible_point()?;
    Some(set.iter().zip(&w).filter(|(_, x)| x.is_positive()).map(|(&i, _)| i).collect())
}
