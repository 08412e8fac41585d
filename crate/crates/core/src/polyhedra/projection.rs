use num_traits::{Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::linalg;
use crate::polyhedra::{combinations, PolyhedralUnion, Polyhedron};
use crate::scalar::{dot_qq, norm_sq, q_to_f64, Q};

/// `x = w + Σ c_i a_i`, where `w` is the nearest point of the polyhedron,
/// `a_i` are the normals of the constraints tight at `w`, and `c_i ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub nearest: Vec<Q>,
    /// Indices of half-spaces tight at `nearest`.
    pub active: Vec<usize>,
    /// One coefficient per entry of `active`.
    pub coefficients: Vec<Q>,
}

/// Exact Euclidean projection onto a polyhedron; `None` when it is empty.
pub fn nearest_point(p: &Polyhedron, x: &[Q]) -> Result<Option<Vec<Q>>> {
    Ok(project_with_multipliers(p, x)?.map(|(y, _, _)| y))
}

/// Nearest point, indices of the tight constraints and their multipliers.
type Projection = (Vec<Q>, Vec<usize>, Vec<Q>);

/// Solves the KKT system on each independent subset `S` of constraints:
/// `y = x − A_Sᵀλ`, `A_S y + b_S = 0`. The first candidate with `λ ≥ 0` and
/// `y` feasible is the projection.
fn project_with_multipliers(p: &Polyhedron, x: &[Q]) -> Result<Option<Projection>> {
    check_dim(p.nvars(), x.len())?;
    if p.contains_unchecked(x) {
        return Ok(Some((x.to_vec(), Vec::new(), Vec::new())));
    }
    if p.is_empty() {
        return Ok(None);
    }
    let hs = p.halfspaces();
    let normals: Vec<Vec<Q>> = hs.iter().map(|h| h.normal_q()).collect();
    let m = hs.len();
    for size in 1..=m.min(p.nvars()) {
        for subset in combinations(m, size) {
            // Gram system (A_S A_Sᵀ) λ = A_S x + b_S
            let gram: Vec<Vec<Q>> = subset
                .iter()
                .map(|&i| subset.iter().map(|&j| dot_qq(&normals[i], &normals[j])).collect())
                .collect();
            let rhs: Vec<Q> = subset.iter().map(|&i| hs[i].value(x)).collect();
            let Some(lambda) = linalg::solve_unique(&gram, &rhs, size) else {
                continue;
            };
            if lambda.iter().any(Signed::is_negative) {
                continue;
            }
            let mut y = x.to_vec();
            for (&i, l) in subset.iter().zip(&lambda) {
                for (yj, aj) in y.iter_mut().zip(&normals[i]) {
                    *yj -= l * aj;
                }
            }
            if p.contains_unchecked(&y) {
                return Ok(Some((y, subset, lambda)));
            }
        }
    }
    Err(Error::Inconclusive("no projection candidate satisfied the optimality conditions".into()))
}

/// `x = y + z` with `y` the projection onto the cone `K` and `z` the
/// projection onto its polar.
pub fn project_onto_cone(k: &Polyhedron, x: &[Q]) -> Result<(Vec<Q>, Vec<Q>)> {
    if !k.is_cone() {
        return Err(Error::Precondition("project_onto_cone needs zero offsets".into()));
    }
    let y = nearest_point(k, x)?.expect("a cone contains the origin");
    let z = x.iter().zip(&y).map(|(a, b)| a - b).collect();
    Ok((y, z))
}

/// The nearest point of `p` to `x` together with a certificate that `x − w`
/// is a nonnegative combination of the normals tight at `w`.
pub fn decompose_point(p: &Polyhedron, x: &[Q]) -> Result<Decomposition> {
    let (w, support, lambda) =
        project_with_multipliers(p, x)?.ok_or_else(|| Error::Precondition("polyhedron is empty".into()))?;
    let active: Vec<usize> = (0..p.halfspaces().len()).filter(|&i| p.halfspaces()[i].value(&w).is_zero()).collect();
    let coefficients = active
        .iter()
        .map(|i| support.iter().position(|s| s == i).map_or_else(Q::zero, |k| lambda[k].clone()))
        .collect();
    Ok(Decomposition { nearest: w, active, coefficients })
}

/// Exact squared distance from `x` to a nonempty union.
pub fn union_dist_sq(x: &[Q], v: &PolyhedralUnion) -> Result<Q> {
    check_dim(v.nvars(), x.len())?;
    let mut best: Option<Q> = None;
    for piece in v.pieces() {
        if let Some(y) = nearest_point(piece, x)? {
            let d: Vec<Q> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
            let d2 = norm_sq(&d);
            if best.as_ref().is_none_or(|b| d2 < *b) {
                best = Some(d2);
            }
        }
    }
    best.ok_or_else(|| Error::Precondition("distance to the empty set".into()))
}

/// Euclidean distance to a nonempty union, as a float.
pub fn union_dist(x: &[Q], v: &PolyhedralUnion) -> Result<f64> {
    Ok(q_to_f64(&union_dist_sq(x, v)?).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::HalfSpace;
    use crate::scalar::{q, q_frac};

    fn poly(n: usize, rows: &[(&[i64], i64)]) -> Polyhedron {
        let hs = rows.iter().map(|(a, b)| HalfSpace::new(a.to_vec(), q(*b)).unwrap()).collect();
        Polyhedron::new(n, hs).unwrap()
    }

    #[test]
    fn projection_onto_quadrant() {
        let k = poly(2, &[(&[-1, 0], 0), (&[0, -1], 0)]);
        let (y, z) = project_onto_cone(&k, &[q(3), q(-2)]).unwrap();
        assert_eq!(y, vec![q(3), q(0)]);
        assert_eq!(z, vec![q(0), q(-2)]);
        let (y, z) = project_onto_cone(&k, &[q(-1), q(-1)]).unwrap();
        assert_eq!(y, vec![q(0), q(0)]);
        assert_eq!(z, vec![q(-1), q(-1)]);
    }

    #[test]
    fn decomposition_certificate() {
        let k = poly(2, &[(&[-1, 0], 0), (&[0, -1], 0)]);
        let d = decompose_point(&k, &[q(3), q(-2)]).unwrap();
        assert_eq!(d.nearest, vec![q(3), q(0)]);
        assert_eq!(d.active, vec![1]);
        assert_eq!(d.coefficients, vec![q(2)]);
    }

    #[test]
    fn distance_to_union() {
        let a = poly(1, &[(&[1], 0)]);
        let b = poly(1, &[(&[-1], 3)]);
        let v = PolyhedralUnion::new(1, vec![a, b]).unwrap();
        assert_eq!(union_dist_sq(&[q_frac(1, 2)], &v).unwrap(), q_frac(1, 4));
        assert_eq!(union_dist_sq(&[q(2)], &v).unwrap(), q(1));
        assert!(union_dist_sq(&[q(0)], &PolyhedralUnion::empty(1)).is_err());
        assert!((union_dist(&[q(5)], &v).unwrap() - 0.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_projection() {
        let p = poly(2, &[(&[1, 1], -1)]);
        let y = nearest_point(&p, &[q(2), q(2)]).unwrap().unwrap();
        assert_eq!(y, vec![q_frac(1, 2), q_frac(1, 2)]);
    }
}
