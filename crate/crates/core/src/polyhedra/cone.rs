use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::lp::Constraints;
use crate::polyhedra::{HalfSpace, Polyhedron};
use crate::scalar::{dot_qq, primitive_direction, q, to_q_vec, Q};

/// A finitely generated cone `Cone{v_1, …, v_r}`; no generators means `{0}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConeV {
    nvars: usize,
    generators: Vec<Vec<i64>>,
}

impl ConeV {
    pub fn new(nvars: usize, generators: Vec<Vec<i64>>) -> Result<Self> {
        for g in &generators {
            check_dim(nvars, g.len())?;
        }
        Ok(Self { nvars, generators })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    /// Generators other than the zero vector.
    pub fn nonzero_generators(&self) -> Vec<Vec<i64>> {
        self.generators.iter().filter(|g| g.iter().any(|&x| x != 0)).cloned().collect()
    }

    /// Membership, decided by an LP over the generator coefficients.
    pub fn contains(&self, y: &[Q]) -> Result<bool> {
        check_dim(self.nvars, y.len())?;
        let gens = self.nonzero_generators();
        let r = gens.len();
        if r == 0 {
            return Ok(y.iter().all(Zero::is_zero));
        }
        let mut c = Constraints::new(r);
        for i in 0..r {
            let mut row = vec![Q::zero(); r];
            row[i] = q(1);
            c.ge(row, Q::zero());
        }
        for (j, yj) in y.iter().enumerate() {
            let row: Vec<Q> = gens.iter().map(|g| q(g[j])).collect();
            c.eq(row, yj.clone());
        }
        Ok(c.feasible_point().is_some())
    }
}

/// The polar `{y : g·y ≤ 0 for every generator g}` as a polyhedral cone.
pub fn polar_cone(c: &ConeV) -> Polyhedron {
    let hs = c
        .nonzero_generators()
        .into_iter()
        .map(|g| HalfSpace::new(g, Q::zero()).expect("nonzero generator"))
        .collect();
    Polyhedron { nvars: c.nvars, halfspaces: hs }
}

/// Generators of a polyhedral cone `{y : a_i·y ≤ 0}` by double description.
/// A lineality direction `l` is returned as the two generators `l` and `−l`.
pub fn cone_h_to_v(p: &Polyhedron) -> Result<ConeV> {
    if !p.is_cone() {
        return Err(Error::Precondition("cone_h_to_v needs zero offsets".into()));
    }
    let n = p.nvars;
    let mut lin: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut e = vec![Q::zero(); n];
            e[i] = q(1);
            e
        })
        .collect();
    let mut rays: Vec<Vec<Q>> = Vec::new();
    let mut added: Vec<Vec<Q>> = Vec::new();
    for h in p.halfspaces() {
        let a = h.normal_q();
        if let Some(pi) = lin.iter().position(|l| !dot_qq(&a, l).is_zero()) {
            let mut lp = lin.remove(pi);
            let mut alp = dot_qq(&a, &lp);
            if alp.is_positive() {
                lp = lp.iter().map(|x| -x).collect();
                alp = -alp;
            }
            let reduce = |v: &Vec<Q>| -> Vec<Q> {
                let f = dot_qq(&a, v) / &alp;
                v.iter().zip(&lp).map(|(x, y)| x - &f * y).collect()
            };
            lin = lin.iter().map(reduce).collect();
            rays = rays.iter().map(reduce).collect();
            rays.push(lp);
        } else {
            let vals: Vec<Q> = rays.iter().map(|r| dot_qq(&a, r)).collect();
            let zero_sets: Vec<BTreeSet<usize>> = rays
                .iter()
                .map(|r| (0..added.len()).filter(|&c| dot_qq(&added[c], r).is_zero()).collect())
                .collect();
            let mut next: Vec<Vec<Q>> = Vec::new();
            for (r, v) in rays.iter().zip(&vals) {
                if !v.is_positive() {
                    next.push(r.clone());
                }
            }
            for (ip, vp) in vals.iter().enumerate().filter(|(_, v)| v.is_positive()) {
                for (ineg, vn) in vals.iter().enumerate().filter(|(_, v)| v.is_negative()) {
                    let common: BTreeSet<usize> = zero_sets[ip].intersection(&zero_sets[ineg]).copied().collect();
                    let adjacent = (0..rays.len())
                        .filter(|&k| k != ip && k != ineg)
                        .all(|k| !common.is_subset(&zero_sets[k]));
                    if adjacent {
                        let combo: Vec<Q> =
                            rays[ineg].iter().zip(&rays[ip]).map(|(x, y)| vp * x - vn * y).collect();
                        next.push(combo);
                    }
                }
            }
            rays = next;
        }
        added.push(a);
        rays = dedupe(rays)?;
    }
    let mut gens: Vec<Vec<i64>> = Vec::new();
    for r in &rays {
        if let Some((v, _)) = primitive_direction(r)? {
            gens.push(v);
        }
    }
    for l in &lin {
        if let Some((v, _)) = primitive_direction(l)? {
            gens.push(v.iter().map(|x| -x).collect());
            gens.push(v);
        }
    }
    gens.sort();
    gens.dedup();
    Ok(ConeV { nvars: n, generators: gens })
}

fn dedupe(rays: Vec<Vec<Q>>) -> Result<Vec<Vec<Q>>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for r in rays {
        if let Some((v, _)) = primitive_direction(&r)? {
            if seen.insert(v.clone()) {
                out.push(to_q_vec(&v));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cone_h(n: usize, normals: &[&[i64]]) -> Polyhedron {
        let hs = normals.iter().map(|a| HalfSpace::new(a.to_vec(), Q::zero()).unwrap()).collect();
        Polyhedron::new(n, hs).unwrap()
    }

    #[test]
    fn quadrant() {
        let p = cone_h(2, &[&[-1, 0], &[0, -1]]);
        let c = cone_h_to_v(&p).unwrap();
        assert_eq!(c.generators(), &[vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn halfplane_keeps_lineality() {
        let p = cone_h(2, &[&[0, -1]]);
        let c = cone_h_to_v(&p).unwrap();
        assert_eq!(c.generators(), &[vec![-1, 0], vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn orthant_in_3d_and_polar_roundtrip() {
        let p = cone_h(3, &[&[-1, 0, 0], &[0, -1, 0], &[0, 0, -1], &[-1, -1, -1]]);
        let c = cone_h_to_v(&p).unwrap();
        assert_eq!(c.generators().len(), 3);
        let polar = polar_cone(&c);
        let back = cone_h_to_v(&polar).unwrap();
        assert_eq!(back.generators(), &[vec![-1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]]);
    }

    #[test]
    fn square_pyramid_has_four_rays() {
        let p = cone_h(3, &[&[1, 0, -1], &[-1, 0, -1], &[0, 1, -1], &[0, -1, -1]]);
        let c = cone_h_to_v(&p).unwrap();
        assert_eq!(c.generators().len(), 4);
        for g in c.generators() {
            assert_eq!(g[0].abs() + g[1].abs(), 2);
            assert_eq!(g[2], 1);
        }
    }

    #[test]
    fn pointed_to_origin() {
        let p = cone_h(1, &[&[1], &[-1]]);
        assert!(cone_h_to_v(&p).unwrap().generators().is_empty());
    }

    #[test]
    fn membership() {
        let c = ConeV::new(2, vec![vec![1, 0], vec![1, 1]]).unwrap();
        assert!(c.contains(&[q(3), q(1)]).unwrap());
        assert!(!c.contains(&[q(0), q(1)]).unwrap());
        let zero = ConeV::new(2, vec![]).unwrap();
        assert!(zero.contains(&[q(0), q(0)]).unwrap());
        assert!(!zero.contains(&[q(0), q(1)]).unwrap());
    }
}
