//! Congruence varieties of function pairs and single generators for the
//! congruence of a polyhedral union.

mod certificate;
mod maps;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::polyhedra::{HalfSpace, PolyhedralUnion, Polyhedron};
use crate::scalar::{q, Q};
use crate::tropical::{TropicalPoly, TropicalRational};

pub use certificate::{
    certificate_k_prime, synthesize_generator, verify_generator, ConstructionStep, Failure, FailureKind,
    GeneratorCertificate, KPrime, VerifyReport,
};
pub use maps::{exponent_bound_n, image_of_polyhedron, polynomial_pair};

/// A pair `(lhs, rhs)` of functions in the same number of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruencePair {
    lhs: TropicalRational,
    rhs: TropicalRational,
}

impl CongruencePair {
    pub fn new(lhs: TropicalRational, rhs: TropicalRational) -> Result<Self> {
        check_dim(lhs.nvars(), rhs.nvars())?;
        Ok(Self { lhs, rhs })
    }

    pub fn lhs(&self) -> &TropicalRational {
        &self.lhs
    }

    pub fn rhs(&self) -> &TropicalRational {
        &self.rhs
    }

    pub fn nvars(&self) -> usize {
        self.lhs.nvars()
    }
}

/// How [`intersection_generator`] combines its inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CombineMode {
    /// `f_1 ⊕ ⋯ ⊕ f_m`
    Sum,
    /// `f_1 ⊙ ⋯ ⊙ f_m`
    Product,
}

/// The set where `lhs = rhs`, as a union of polyhedra.
///
/// Cross-multiplies to `A = num_l ⊙ den_r` and `B = num_r ⊙ den_l`. For each
/// pair of terms `(a, b)` the piece is where `a = b`, `a` attains the max of
/// `A` and `b` attains the max of `B`.
pub fn variety_of_pair(pair: &CongruencePair) -> Result<PolyhedralUnion> {
    let n = pair.nvars();
    let a = pair.lhs.num().mul(pair.rhs.den())?.canonicalize();
    let b = pair.rhs.num().mul(pair.lhs.den())?.canonicalize();
    match (a.is_neg_inf(), b.is_neg_inf()) {
        (true, true) => return Ok(PolyhedralUnion::whole_space(n)),
        (true, false) | (false, true) => return Ok(PolyhedralUnion::empty(n)),
        _ => {}
    }
    if a.func_eq(&b)? {
        return Ok(PolyhedralUnion::whole_space(n));
    }
    let a_terms: Vec<(&Vec<i64>, &Q)> = a.terms().collect();
    let b_terms: Vec<(&Vec<i64>, &Q)> = b.terms().collect();
    let mut pieces: Vec<Polyhedron> = Vec::new();
    for (ei, ci) in &a_terms {
        for (ej, cj) in &b_terms {
            let mut rows: Vec<(Vec<Q>, Q)> = Vec::new();
            let diff: Vec<Q> = ei.iter().zip(ej.iter()).map(|(x, y)| q(x - y)).collect();
            let off = *ci - *cj;
            rows.push((diff.clone(), off.clone()));
            rows.push((diff.iter().map(|x| -x).collect(), -off));
            dominance_rows(&a_terms, ei, ci, &mut rows);
            dominance_rows(&b_terms, ej, cj, &mut rows);
            let Some(p) = Polyhedron::from_rows(n, rows.iter().map(|(x, y)| (x.as_slice(), y)))? else {
                continue;
            };
            if p.is_empty() {
                continue;
            }
            let p = p.simplified();
            if !pieces.contains(&p) {
                pieces.push(p);
            }
        }
    }
    PolyhedralUnion::new(n, pieces)
}

/// Rows saying the term `(e, c)` is at least every other term.
fn dominance_rows(terms: &[(&Vec<i64>, &Q)], e: &[i64], c: &Q, rows: &mut Vec<(Vec<Q>, Q)>) {
    for (e2, c2) in terms {
        if e2.as_slice() == e {
            continue;
        }
        let a: Vec<Q> = e2.iter().zip(e).map(|(x, y)| q(x - y)).collect();
        rows.push((a, *c2 - c));
    }
}

/// `offset ⊙ X^normal ⊕ 0`, which vanishes exactly on the half-space and
/// dominates the distance to it.
pub fn halfspace_generator(h: &HalfSpace) -> TropicalRational {
    let n = h.nvars();
    let mut p = TropicalPoly::monomial(h.offset().clone(), h.normal().to_vec());
    p.insert(vec![0; n], Q::zero());
    TropicalRational::from_poly(p)
}

/// Combines generators of sets with nonempty common intersection into a
/// generator of that intersection.
pub fn intersection_generator(fs: &[TropicalRational], mode: CombineMode) -> Result<TropicalRational> {
    let Some(first) = fs.first() else {
        return Err(Error::Precondition("intersection_generator needs at least one function".into()));
    };
    let n = first.nvars();
    let mut common = PolyhedralUnion::whole_space(n);
    for f in fs {
        check_dim(n, f.nvars())?;
        let locus = variety_of_pair(&CongruencePair::new(f.clone(), TropicalRational::zero_const(n))?)?;
        common = common.intersect(&locus)?;
        if common.is_empty() {
            return Err(Error::Precondition("the vanishing loci have empty intersection".into()));
        }
    }
    combine_unchecked(fs, mode)
}

pub(crate) fn combine_unchecked(fs: &[TropicalRational], mode: CombineMode) -> Result<TropicalRational> {
    let mut acc = fs[0].clone();
    for f in &fs[1..] {
        acc = match mode {
            CombineMode::Sum => acc.add(f)?,
            CombineMode::Product => acc.mul(f)?,
        };
    }
    Ok(acc)
}

/// `(f^{-1} ⊕ g^{-1})^{-1}`, the pointwise minimum of `f` and `g`.
pub fn union_generator(f: &TropicalRational, g: &TropicalRational) -> Result<TropicalRational> {
    check_dim(f.nvars(), g.nvars())?;
    if f.is_neg_inf() || g.is_neg_inf() {
        return Err(Error::Precondition("union_generator needs finite functions".into()));
    }
    f.inv()?.add(&g.inv()?)?.inv()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q_frac, ExtendedRational};

    fn x(n: usize, i: usize) -> TropicalRational {
        TropicalRational::from_poly(TropicalPoly::var(n, i))
    }

    fn pt(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&a| q(a)).collect()
    }

    #[test]
    fn variety_of_max_equals_zero() {
        let f = x(2, 0).add(&x(2, 1)).unwrap();
        let pair = CongruencePair::new(f, TropicalRational::zero_const(2)).unwrap();
        let v = variety_of_pair(&pair).unwrap();
        assert_eq!(v.pieces().len(), 2);
        assert!(v.contains(&pt(&[0, -3])).unwrap());
        assert!(v.contains(&pt(&[-1, 0])).unwrap());
        assert!(v.contains(&pt(&[0, 0])).unwrap());
        assert!(!v.contains(&pt(&[1, 0])).unwrap());
        assert!(!v.contains(&pt(&[-1, -1])).unwrap());
    }

    #[test]
    fn trivial_varieties() {
        let f = x(2, 0).add(&TropicalRational::constant(2, q(3))).unwrap();
        let same = variety_of_pair(&CongruencePair::new(f.clone(), f).unwrap()).unwrap();
        assert!(same.contains(&pt(&[5, -9])).unwrap());
        assert_eq!(same.pieces(), &[Polyhedron::whole_space(2)]);
        let c0 = TropicalRational::zero_const(1);
        let c1 = TropicalRational::constant(1, q(1));
        assert!(variety_of_pair(&CongruencePair::new(c0.clone(), c1).unwrap()).unwrap().pieces().is_empty());
        let ninf = TropicalRational::neg_inf(1);
        let both = variety_of_pair(&CongruencePair::new(ninf.clone(), ninf.clone()).unwrap()).unwrap();
        assert!(both.contains(&pt(&[4])).unwrap());
        let one = variety_of_pair(&CongruencePair::new(ninf, c0).unwrap()).unwrap();
        assert!(one.pieces().is_empty());
    }

    #[test]
    fn halfspace_generator_examples() {
        let h = HalfSpace::new(vec![1], q(-1)).unwrap();
        let f = halfspace_generator(&h);
        assert_eq!(f.eval_finite(&pt(&[1])).unwrap(), q(0));
        assert_eq!(f.eval_finite(&pt(&[-4])).unwrap(), q(0));
        assert_eq!(f.eval_finite(&[q_frac(3, 2)]).unwrap(), q_frac(1, 2));
        let h = HalfSpace::new(vec![1, 1], q(0)).unwrap();
        let f = halfspace_generator(&h);
        let v = f.eval_finite(&pt(&[1, 1])).unwrap();
        assert_eq!(v, q(2));
        // dist² to {x₁ + x₂ ≤ 0} from (1,1) is 2
        assert!(&v * &v >= q(2));
    }

    #[test]
    fn intersection_of_opposite_halfspaces() {
        let a = halfspace_generator(&HalfSpace::new(vec![1], q(0)).unwrap());
        let b = halfspace_generator(&HalfSpace::new(vec![-1], q(0)).unwrap());
        for mode in [CombineMode::Sum, CombineMode::Product] {
            let f = intersection_generator(&[a.clone(), b.clone()], mode).unwrap();
            assert_eq!(f.eval(&pt(&[0])).unwrap(), ExtendedRational::Finite(q(0)));
            assert!(f.eval_finite(&[q_frac(1, 3)]).unwrap() > q(0));
            assert!(f.eval_finite(&[q_frac(-1, 3)]).unwrap() > q(0));
        }
        let single = intersection_generator(std::slice::from_ref(&a), CombineMode::Product).unwrap();
        assert_eq!(single, a);
        let c = halfspace_generator(&HalfSpace::new(vec![-1], q(1)).unwrap());
        assert!(matches!(
            intersection_generator(&[a, c], CombineMode::Sum),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn union_is_pointwise_min() {
        let a = halfspace_generator(&HalfSpace::new(vec![1], q(0)).unwrap());
        let b = halfspace_generator(&HalfSpace::new(vec![-1], q(1)).unwrap());
        let u = union_generator(&a, &b).unwrap();
        for k in -8..=8 {
            let p = [q_frac(k, 4)];
            let want = a.eval_finite(&p).unwrap().min(b.eval_finite(&p).unwrap());
            assert_eq!(u.eval_finite(&p).unwrap(), want);
        }
        assert!(union_generator(&a, &a).unwrap().func_eq(&a).unwrap());
        assert!(union_generator(&a, &TropicalRational::neg_inf(1)).is_err());
    }
}
