use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;

use crate::error::{check_dim, Result};
use crate::lp::{maximize_standard, Constraints, LpOutcome, StandardOutcome};
use crate::sampling::indexed_rng;
use crate::scalar::{dot_iq, format_q, q, ExtendedRational, Q};

/// A tropical Laurent monomial `coeff ⊙ X^exponents`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineForm {
    pub coeff: ExtendedRational,
    pub exponents: Vec<i64>,
}

impl AffineForm {
    pub fn new(coeff: ExtendedRational, exponents: Vec<i64>) -> Self {
        Self { coeff, exponents }
    }

    pub fn eval(&self, x: &[Q]) -> ExtendedRational {
        match &self.coeff {
            ExtendedRational::NegInf => ExtendedRational::NegInf,
            ExtendedRational::Finite(c) => ExtendedRational::Finite(c + dot_iq(&self.exponents, x)),
        }
    }
}

/// A tropical Laurent polynomial: the pointwise max of finitely many affine
/// forms with integer slopes. Terms are keyed by exponent vector, so two
/// terms never share one; terms with coefficient `−∞` are dropped.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TropicalPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, Q>,
}

impl TropicalPoly {
    /// The constant `−∞`.
    pub fn neg_inf(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        Self::monomial(c, vec![0; nvars])
    }

    /// The tropical one, i.e. the constant 0.
    pub fn zero_const(nvars: usize) -> Self {
        Self::constant(nvars, Q::zero())
    }

    pub fn monomial(coeff: Q, exponents: Vec<i64>) -> Self {
        let nvars = exponents.len();
        let mut terms = BTreeMap::new();
        terms.insert(exponents, coeff);
        Self { nvars, terms }
    }

    /// `X_i` (zero-based index).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(Q::zero(), e)
    }

    pub fn from_forms(nvars: usize, forms: impl IntoIterator<Item = AffineForm>) -> Result<Self> {
        let mut p = Self::neg_inf(nvars);
        for f in forms {
            check_dim(nvars, f.exponents.len())?;
            if let ExtendedRational::Finite(c) = f.coeff {
                p.insert(f.exponents, c);
            }
        }
        Ok(p)
    }

    /// Inserts a term, merging by coefficient max on exponent collision.
    pub fn insert(&mut self, exponents: Vec<i64>, coeff: Q) {
        debug_assert_eq!(exponents.len(), self.nvars);
        match self.terms.get_mut(&exponents) {
            Some(c) if *c >= coeff => {}
            Some(c) => *c = coeff,
            None => {
                self.terms.insert(exponents, coeff);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for the constant `−∞` (no terms).
    pub fn is_neg_inf(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Q)> {
        self.terms.iter()
    }

    pub fn forms(&self) -> Vec<AffineForm> {
        self.terms
            .iter()
            .map(|(e, c)| AffineForm::new(ExtendedRational::Finite(c.clone()), e.clone()))
            .collect()
    }

    pub fn eval(&self, x: &[Q]) -> Result<ExtendedRational> {
        check_dim(self.nvars, x.len())?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &[Q]) -> ExtendedRational {
        let mut best: Option<Q> = None;
        for (e, c) in &self.terms {
            let v = c + dot_iq(e, x);
            if best.as_ref().is_none_or(|b| v > *b) {
                best = Some(v);
            }
        }
        best.map_or(ExtendedRational::NegInf, ExtendedRational::Finite)
    }

    /// `self ⊕ other`.
    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.nvars, other.nvars)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        Ok(out)
    }

    /// `self ⊙ other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_dim(self.nvars, other.nvars)?;
        let mut out = Self::neg_inf(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert(e, c1 + c2);
            }
        }
        Ok(out)
    }

    /// Multiplies by the monomial `c ⊙ X^e`.
    pub fn shift(&self, c: &Q, e: &[i64]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e1, c1)| (e1.iter().zip(e).map(|(a, b)| a + b).collect(), c1 + c))
            .collect();
        Self { nvars: self.nvars, terms }
    }

    /// `self^{⊙k}` as a function: the max of affine forms is positively
    /// homogeneous, so scaling every term by `k` gives the same function as
    /// the `k`-fold tropical product with far fewer terms.
    pub fn pow(&self, k: u64) -> Self {
        if k == 0 {
            return Self::zero_const(self.nvars);
        }
        let kk = k as i64;
        let kq = q(kk);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().map(|x| x * kk).collect(), c * &kq))
            .collect();
        Self { nvars: self.nvars, terms }
    }

    /// The functional canonical form: exactly the terms that are strictly
    /// maximal on some nonempty open set.
    pub fn canonicalize(&self) -> Self {
        if self.terms.len() <= 1 {
            return self.clone();
        }
        let all: Vec<(&Vec<i64>, &Q)> = self.terms.iter().collect();
        let mut essential = self.unique_maximizers(&all);
        for i in 0..all.len() {
            while !essential[i] {
                let (e, c) = all[i];
                let known: Vec<(&Vec<i64>, &Q)> =
                    all.iter().zip(&essential).filter(|(_, &k)| k).map(|(t, _)| *t).collect();
                let HullTest::Wins(x) = hull_test(e, c, known.iter().copied()) else {
                    break;
                };
                match unique_argmax(&all, &x) {
                    Some(j) if !essential[j] => essential[j] = true,
                    _ => {
                        let others = all.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, t)| *t);
                        essential[i] = beats_hull(e, c, others);
                        break;
                    }
                }
            }
        }
        let terms = all
            .iter()
            .zip(&essential)
            .filter(|(_, &k)| k)
            .map(|((e, c), _)| ((*e).clone(), (*c).clone()))
            .collect();
        Self { nvars: self.nvars, terms }
    }

    /// Marks terms that are the unique maximum at some sampled integer point.
    /// Such terms win on an open neighbourhood of that point.
    fn unique_maximizers(&self, all: &[(&Vec<i64>, &Q)]) -> Vec<bool> {
        let mut found = vec![false; all.len()];
        let mut rng = indexed_rng(0, all.len() as u64);
        let samples = (4 * all.len()).min(256);
        for s in 0..samples {
            let radius = 1i64 << (2 * (s % 4));
            let x: Vec<Q> = (0..self.nvars).map(|_| q(rng.gen_range(-radius..=radius))).collect();
            if let Some(i) = unique_argmax(all, &x) {
                found[i] = true;
            }
        }
        found
    }

    /// `Some(x)` with `self(x) > other(x)` if one exists; `None` means
    /// `self ≤ other` everywhere on `Q^n`.
    pub fn exceeds_somewhere(&self, other: &Self) -> Result<Option<Vec<Q>>> {
        check_dim(self.nvars, other.nvars)?;
        for (e, c) in &self.terms {
            if !beats_hull(e, c, other.terms.iter()) {
                continue;
            }
            if let Some(x) = strict_region_point(self.nvars, e, c, other.terms.iter()) {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }

    /// `self ≤ other` at every point.
    pub fn le_everywhere(&self, other: &Self) -> Result<bool> {
        Ok(self.exceeds_somewhere(other)?.is_none())
    }

    /// Equality as functions on `Q^n` (equivalently `R^n`).
    pub fn func_eq(&self, other: &Self) -> Result<bool> {
        Ok(self.func_eq_witness(other)?.is_none())
    }

    /// `None` when functionally equal, otherwise a point where they differ.
    pub fn func_eq_witness(&self, other: &Self) -> Result<Option<Vec<Q>>> {
        if let Some(x) = self.exceeds_somewhere(other)? {
            return Ok(Some(x));
        }
        other.exceeds_somewhere(self)
    }

    /// Smallest exponent per coordinate over all terms (0 if empty).
    pub fn min_exponents(&self) -> Vec<i64> {
        let mut m = vec![0; self.nvars];
        for (j, slot) in m.iter_mut().enumerate() {
            *slot = self.terms.keys().map(|e| e[j]).min().unwrap_or(0);
        }
        m
    }
}

/// Finds `x` with `c + e·x > c' + e'·x` for every `(e', c')` in `others`, by
/// maximizing a slack `s ≤ 1` with `(c + e·x) − (c' + e'·x) ≥ s`.
/// The index of the only term attaining the maximum at `x`, if there is one.
fn unique_argmax(terms: &[(&Vec<i64>, &Q)], x: &[Q]) -> Option<usize> {
    let mut best: Option<(usize, Q)> = None;
    let mut tied = false;
    for (i, (e, c)) in terms.iter().enumerate() {
        let v = *c + dot_iq(e, x);
        match &best {
            Some((_, b)) if v < *b => {}
            Some((_, b)) if v == *b => tied = true,
            _ => {
                best = Some((i, v));
                tied = false;
            }
        }
    }
    best.filter(|_| !tied).map(|(i, _)| i)
}

/// Outcome of comparing a term with the upper hull of other terms.
enum HullTest {
    /// Some convex combination of the other terms has exponent `e` and
    /// coefficient at least `c`, so the term never strictly wins.
    Dominated,
    /// The term strictly exceeds every other term at the given point, hence
    /// on an open set around it.
    Wins(Vec<Q>),
}

/// Decides whether `c + e·x` strictly exceeds every one of `others`
/// somewhere. By duality this fails exactly when a convex combination of the
/// other terms has exponent `e` and coefficient at least `c`. The dual
/// multipliers `(y, t)` of that problem satisfy `c_j − y·e_j ≤ t` for every
/// other term, so `x = −y` is a point where the term wins; when no
/// combination exists a Farkas certificate supplies a direction instead.
fn hull_test<'a>(e: &[i64], c: &Q, others: impl Iterator<Item = (&'a Vec<i64>, &'a Q)>) -> HullTest {
    let others: Vec<_> = others.collect();
    if others.is_empty() {
        return HullTest::Wins(vec![Q::zero(); e.len()]);
    }
    let mut rows: Vec<Vec<Q>> = (0..e.len())
        .map(|k| others.iter().map(|(e2, _)| Q::from_integer(BigInt::from(e2[k]))).collect())
        .collect();
    rows.push(vec![q(1); others.len()]);
    let mut rhs: Vec<Q> = e.iter().map(|&v| Q::from_integer(BigInt::from(v))).collect();
    rhs.push(q(1));
    let cost: Vec<Q> = others.iter().map(|(_, c2)| (*c2).clone()).collect();
    match maximize_standard(&rows, &rhs, &cost) {
        StandardOutcome::Optimal(opt) if opt.value < *c => {
            HullTest::Wins(opt.duals[..e.len()].iter().map(|y| -y.clone()).collect())
        }
        StandardOutcome::Infeasible(z) => HullTest::Wins(far_point(e, c, &others, &z)),
        _ => HullTest::Dominated,
    }
}

/// Given `z = (y, t)` with `y·e_j + t ≤ 0 < y·e + t` for every other term,
/// a multiple of `y` far enough out that `c + e·x` beats every other term.
fn far_point(e: &[i64], c: &Q, others: &[(&Vec<i64>, &Q)], z: &[Q]) -> Vec<Q> {
    let y = &z[..e.len()];
    let ye = dot_iq(e, y);
    let mut scale = q(1);
    for (e2, c2) in others {
        let gap = &ye - dot_iq(e2, y);
        let need = (*c2 - c) / gap + q(1);
        if need > scale {
            scale = need;
        }
    }
    y.iter().map(|v| v * &scale).collect()
}

fn beats_hull<'a>(e: &[i64], c: &Q, others: impl Iterator<Item = (&'a Vec<i64>, &'a Q)>) -> bool {
    matches!(hull_test(e, c, others), HullTest::Wins(_))
}

fn strict_region_point<'a>(
    nvars: usize,
    e: &[i64],
    c: &Q,
    others: impl Iterator<Item = (&'a Vec<i64>, &'a Q)>,
) -> Option<Vec<Q>> {
    let mut cons = Constraints::new(nvars + 1);
    let mut any = false;
    for (e2, c2) in others {
        any = true;
        // (e2 − e)·x + s ≤ c − c2
        let mut row: Vec<Q> = e2.iter().zip(e).map(|(a, b)| Q::from_integer(BigInt::from(a - b))).collect();
        row.push(q(1));
        cons.le(row, c - c2);
    }
    if !any {
        return Some(vec![Q::zero(); nvars]);
    }
    let mut cap = vec![Q::zero(); nvars];
    cap.push(q(1));
    cons.le(cap.clone(), q(1));
    match cons.maximize(&cap) {
        LpOutcome::Optimal { mut x, value } if value.is_positive() => {
            x.pop();
            Some(x)
        }
        _ => None,
    }
}

impl fmt::Display for TropicalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("-inf");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut s = format_q(c);
                for (i, &k) in e.iter().enumerate() {
                    match k {
                        0 => {}
                        1 => s.push_str(&format!("⊙X{}", i + 1)),
                        _ => s.push_str(&format!("⊙X{}^{}", i + 1, k)),
                    }
                }
                s
            })
            .collect();
        f.write_str(&parts.join(" ⊕ "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q_frac, ExtendedRational as E};

    fn p1(terms: &[(i64, i64)]) -> TropicalPoly {
        TropicalPoly::from_forms(1, terms.iter().map(|&(c, e)| AffineForm::new(E::Finite(q(c)), vec![e]))).unwrap()
    }

    #[test]
    fn eval_examples() {
        let p = p1(&[(0, 0), (0, 1)]);
        assert_eq!(p.eval(&[q(2)]).unwrap(), E::Finite(q(2)));
        assert_eq!(p.eval(&[q(-5)]).unwrap(), E::Finite(q(0)));
        let m = p1(&[(1, 2)]);
        assert_eq!(m.eval(&[q(3)]).unwrap(), E::Finite(q(7)));
        assert_eq!(TropicalPoly::neg_inf(1).eval(&[q(3)]).unwrap(), E::NegInf);
        assert!(p.eval(&[q(1), q(2)]).is_err());
    }

    #[test]
    fn add_and_mul_examples() {
        let p = p1(&[(0, 0), (0, 1)]);
        assert_eq!(p.add(&TropicalPoly::neg_inf(1)).unwrap(), p);
        let sq = p.mul(&p).unwrap();
        assert_eq!(sq, p1(&[(0, 0), (0, 1), (0, 2)]));
        let x = [q_frac(1, 2)];
        assert_eq!(sq.eval(&x).unwrap(), E::Finite(q(1)));
    }

    #[test]
    fn collisions_merge_by_max() {
        let p = TropicalPoly::from_forms(
            1,
            [AffineForm::new(E::Finite(q(1)), vec![1]), AffineForm::new(E::Finite(q(3)), vec![1]), AffineForm::new(E::NegInf, vec![2])],
        )
        .unwrap();
        assert_eq!(p, p1(&[(3, 1)]));
    }

    #[test]
    fn canonicalize_examples() {
        let p = p1(&[(0, 0), (-3, 1), (0, 2)]);
        assert_eq!(p.canonicalize(), p1(&[(0, 0), (0, 2)]));
        let p = p1(&[(0, 0), (1, 1), (0, 2)]);
        assert_eq!(p.canonicalize(), p);
    }

    #[test]
    fn func_eq_examples() {
        let x = p1(&[(0, 1)]);
        assert!(x.add(&x).unwrap().func_eq(&x).unwrap());
        assert!(p1(&[(0, 0), (0, 1), (0, 2)]).func_eq(&p1(&[(0, 0), (0, 2)])).unwrap());
        let w = p1(&[(0, 0), (0, 1)]).func_eq_witness(&x).unwrap().unwrap();
        assert!(w[0] < q(0));
        assert!(!TropicalPoly::neg_inf(1).func_eq(&x).unwrap());
        assert!(TropicalPoly::neg_inf(1).func_eq(&TropicalPoly::neg_inf(1)).unwrap());
    }

    #[test]
    fn pow_is_scaled_terms() {
        let p = p1(&[(1, 0), (0, 1)]);
        let p3 = p.mul(&p).unwrap().mul(&p).unwrap();
        assert!(p.pow(3).func_eq(&p3).unwrap());
    }
}
