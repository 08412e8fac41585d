use std::fmt;

use num_traits::Zero;

use crate::error::{check_dim, Error, Result};
use crate::scalar::{ExtendedRational, Q};
use crate::tropical::TropicalPoly;

/// A formal quotient `num ⊙ den^{⊙(−1)}` of tropical Laurent polynomials.
///
/// Values are not reduced; equality of functions is decided by
/// [`TropicalRational::func_eq`] through cross-multiplication.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TropicalRational {
    num: TropicalPoly,
    den: TropicalPoly,
}

impl TropicalRational {
    pub fn new(num: TropicalPoly, den: TropicalPoly) -> Result<Self> {
        check_dim(num.nvars(), den.nvars())?;
        if den.is_neg_inf() {
            return Err(Error::Precondition("denominator is the constant -inf".into()));
        }
        Ok(Self { num, den })
    }

    pub fn from_poly(p: TropicalPoly) -> Self {
        let den = TropicalPoly::zero_const(p.nvars());
        Self { num: p, den }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        Self::from_poly(TropicalPoly::constant(nvars, c))
    }

    /// The constant 0 (tropical one).
    pub fn zero_const(nvars: usize) -> Self {
        Self::constant(nvars, Q::zero())
    }

    pub fn neg_inf(nvars: usize) -> Self {
        Self::from_poly(TropicalPoly::neg_inf(nvars))
    }

    pub fn num(&self) -> &TropicalPoly {
        &self.num
    }

    pub fn den(&self) -> &TropicalPoly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_neg_inf(&self) -> bool {
        self.num.is_neg_inf()
    }

    pub fn eval(&self, x: &[Q]) -> Result<ExtendedRational> {
        check_dim(self.nvars(), x.len())?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &[Q]) -> ExtendedRational {
        let n = self.num.eval_unchecked(x);
        let d = self.den.eval_unchecked(x);
        n.checked_sub(&d).expect("denominator is finite on R^n")
    }

    /// Exact finite value; panics only if the numerator is `−∞`.
    pub fn eval_finite(&self, x: &[Q]) -> Result<Q> {
        self.eval(x)?.into_finite().ok_or_else(|| Error::Precondition("function is -inf".into()))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.nvars(), other.nvars())?;
        if self.den == other.den {
            return Ok(Self { num: self.num.add(&other.num)?, den: self.den.clone() });
        }
        let num = self.num.mul(&other.den)?.add(&other.num.mul(&self.den)?)?;
        let den = self.den.mul(&other.den)?;
        Ok(Self { num, den })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_dim(self.nvars(), other.nvars())?;
        Ok(Self { num: self.num.mul(&other.num)?, den: self.den.mul(&other.den)? })
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_neg_inf() {
            return Err(Error::Precondition("the constant -inf has no inverse".into()));
        }
        Ok(Self { num: self.den.clone(), den: self.num.clone() })
    }

    /// `self^{⊙k}` for any integer `k`, as a function.
    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let k = k.unsigned_abs();
        Ok(Self { num: base.num.pow(k), den: base.den.pow(k) })
    }

    /// Multiplies by the constant `c` (tropically: adds `c`).
    pub fn add_constant(&self, c: &Q) -> Self {
        let zeros = vec![0; self.nvars()];
        Self { num: self.num.shift(c, &zeros), den: self.den.clone() }
    }

    /// Canonicalizes numerator and denominator separately.
    pub fn simplify(&self) -> Self {
        Self { num: self.num.canonicalize(), den: self.den.canonicalize() }
    }

    /// Functional equality via `num_f ⊙ den_g = num_g ⊙ den_f`.
    pub fn func_eq(&self, other: &Self) -> Result<bool> {
        self.num.mul(&other.den)?.func_eq(&other.num.mul(&self.den)?)
    }

    /// `self ≥ other` everywhere.
    pub fn ge_everywhere(&self, other: &Self) -> Result<bool> {
        other.num.mul(&self.den)?.le_everywhere(&self.num.mul(&other.den)?)
    }

    /// `self ≥ 0` everywhere (`den ≤ num`).
    pub fn is_nonnegative(&self) -> Result<bool> {
        self.den.le_everywhere(&self.num)
    }
}

impl fmt::Display for TropicalRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

/// Replaces a pair `(f, g)` by `(f ⊙ g^{⊙(−1)} ⊕ 0, f^{⊙(−1)} ⊙ g ⊕ 0)`; both
/// components are `≥ 0` and, paired with 0, generate the same congruence as
/// `(f, g)`.
pub fn normalize_pair(f: &TropicalRational, g: &TropicalRational) -> Result<(TropicalRational, TropicalRational)> {
    check_dim(f.nvars(), g.nvars())?;
    if f.is_neg_inf() || g.is_neg_inf() {
        return Err(Error::Precondition("normalize_pair needs both functions finite".into()));
    }
    let zero = TropicalRational::zero_const(f.nvars());
    let h = f.mul(&g.inv()?)?.add(&zero)?;
    let h2 = f.inv()?.mul(g)?.add(&zero)?;
    Ok((h, h2))
}

/// A single `f` with `⟨(f, 0)⟩` equal to the congruence generated by `pairs`:
/// the `⊕` of every normalized component.
pub fn combine_generators(pairs: &[(TropicalRational, TropicalRational)]) -> Result<TropicalRational> {
    let Some((first, _)) = pairs.first() else {
        return Err(Error::Precondition("combine_generators needs at least one pair".into()));
    };
    let mut acc: Option<TropicalRational> = None;
    for (f, g) in pairs {
        check_dim(first.nvars(), f.nvars())?;
        let (h, h2) = normalize_pair(f, g)?;
        let both = h.add(&h2)?;
        acc = Some(match acc {
            None => both,
            Some(a) => a.add(&both)?,
        });
    }
    Ok(acc.expect("nonempty").simplify())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, ExtendedRational as E};

    fn x1() -> TropicalPoly {
        TropicalPoly::var(1, 0)
    }

    #[test]
    fn rational_eval_examples() {
        let f = TropicalRational::new(TropicalPoly::zero_const(1).add(&x1()).unwrap(), x1()).unwrap();
        assert_eq!(f.eval(&[q(2)]).unwrap(), E::Finite(q(0)));
        assert_eq!(f.eval(&[q(-3)]).unwrap(), E::Finite(q(3)));
        assert!(TropicalRational::new(x1(), TropicalPoly::neg_inf(1)).is_err());
        assert!(TropicalRational::neg_inf(1).inv().is_err());
        assert_eq!(TropicalRational::neg_inf(1).eval(&[q(1)]).unwrap(), E::NegInf);
    }

    #[test]
    fn normalize_x_zero() {
        let f = TropicalRational::from_poly(x1());
        let g = TropicalRational::zero_const(1);
        let (h, h2) = normalize_pair(&f, &g).unwrap();
        let expect_h = TropicalRational::from_poly(x1().add(&TropicalPoly::zero_const(1)).unwrap());
        let xinv = TropicalPoly::monomial(q(0), vec![-1]);
        let expect_h2 = TropicalRational::from_poly(xinv.add(&TropicalPoly::zero_const(1)).unwrap());
        assert!(h.func_eq(&expect_h).unwrap());
        assert!(h2.func_eq(&expect_h2).unwrap());
    }

    #[test]
    fn normalize_same_is_zero() {
        let f = TropicalRational::new(x1().add(&TropicalPoly::constant(1, q(2))).unwrap(), x1()).unwrap();
        let (h, h2) = normalize_pair(&f, &f).unwrap();
        let zero = TropicalRational::zero_const(1);
        assert!(h.func_eq(&zero).unwrap());
        assert!(h2.func_eq(&zero).unwrap());
    }

    #[test]
    fn combine_single_pair() {
        let f = combine_generators(&[(TropicalRational::from_poly(x1()), TropicalRational::zero_const(1))]).unwrap();
        for (x, want) in [(q(0), q(0)), (q(3), q(3)), (q(-2), q(2))] {
            assert_eq!(f.eval_finite(&[x]).unwrap(), want);
        }
        assert!(combine_generators(&[]).is_err());
        let bad = [(TropicalRational::neg_inf(1), TropicalRational::zero_const(1))];
        assert!(combine_generators(&bad).is_err());
    }
}
