use crate::error::{check_dim, Error, Result};
use crate::polyhedra::fm::{eliminate_all, FmRow};
use crate::polyhedra::{PolyhedralUnion, Polyhedron};
use crate::scalar::{q, Q};
use crate::tropical::{TropicalPoly, TropicalRational};

use num_traits::Zero;

/// A cell with the affine parts of the maps chosen on it so far.
type Cell = (Polyhedron, Vec<(Vec<i64>, Q)>);

/// `N = n·(1 + max |j₁,ℓ − j₂,ℓ|)` over numerator terms `j₁`, denominator
/// terms `j₂` and coordinates `ℓ`. If `g ≥ 0` vanishes on `V` then
/// `g(x) ≤ N·dist(x, V)`.
pub fn exponent_bound_n(g: &TropicalRational) -> Result<u64> {
    if g.is_neg_inf() {
        return Err(Error::Precondition("exponent bound of the constant -inf".into()));
    }
    let mut gap: u64 = 0;
    for (e1, _) in g.num().terms() {
        for (e2, _) in g.den().terms() {
            for (a, b) in e1.iter().zip(e2) {
                gap = gap.max(a.abs_diff(*b));
            }
        }
    }
    Ok(g.nvars() as u64 * (gap + 1))
}

/// `(f₁, f₂)` with `f = f₁ − f₂`, no negative exponents and `f₁ ≥ f₂`.
pub fn polynomial_pair(f: &TropicalRational) -> Result<(TropicalPoly, TropicalPoly)> {
    if f.is_neg_inf() || !f.is_nonnegative()? {
        return Err(Error::Precondition("polynomial_pair needs f ≥ 0".into()));
    }
    let n = f.nvars();
    let mut low = vec![0i64; n];
    for (e, _) in f.num().terms().chain(f.den().terms()) {
        for (l, x) in low.iter_mut().zip(e) {
            *l = (*l).min(*x);
        }
    }
    let shift: Vec<i64> = low.iter().map(|x| -x).collect();
    let f1 = f.num().shift(&Q::zero(), &shift);
    let f2 = f.den().shift(&Q::zero(), &shift);
    debug_assert!(f2.le_everywhere(&f1).unwrap_or(false));
    Ok((f1, f2))
}

/// The image of `p ⊂ R^m` under `y ↦ (θ₁(y), …, θ_n(y))`.
///
/// `p` is cut into cells on which every `θ_k` is affine (one numerator and
/// one denominator term attaining their maxima); each cell's image is the
/// projection of its graph, computed by Fourier–Motzkin elimination.
pub fn image_of_polyhedron(maps: &[TropicalRational], p: &Polyhedron) -> Result<PolyhedralUnion> {
    let m = p.nvars();
    let n = maps.len();
    if n == 0 {
        return Err(Error::Precondition("image_of_polyhedron needs at least one map".into()));
    }
    for f in maps {
        check_dim(m, f.nvars())?;
        if f.is_neg_inf() {
            return Err(Error::Precondition("a map is the constant -inf".into()));
        }
    }
    let canon: Vec<(TropicalPoly, TropicalPoly)> =
        maps.iter().map(|f| (f.num().canonicalize(), f.den().canonicalize())).collect();
    let mut pieces: Vec<Polyhedron> = Vec::new();
    // each entry: (cell, affine part of the maps chosen so far)
    let mut stack: Vec<Cell> = vec![(p.clone(), Vec::new())];
    while let Some((cell, affine)) = stack.pop() {
        let k = affine.len();
        if k == n {
            if let Some(img) = affine_image(&cell, &affine)? {
                if !img.is_empty() {
                    let img = img.simplified();
                    if !pieces.contains(&img) {
                        pieces.push(img);
                    }
                }
            }
            continue;
        }
        let (num, den) = &canon[k];
        for (e1, c1) in num.terms() {
            for (e2, c2) in den.terms() {
                let mut rows: Vec<(Vec<Q>, Q)> = Vec::new();
                for (e, c) in num.terms().filter(|(e, _)| *e != e1) {
                    rows.push((e.iter().zip(e1).map(|(a, b)| q(a - b)).collect(), c - c1));
                }
                for (e, c) in den.terms().filter(|(e, _)| *e != e2) {
                    rows.push((e.iter().zip(e2).map(|(a, b)| q(a - b)).collect(), c - c2));
                }
                let Some(region) = Polyhedron::from_rows(m, rows.iter().map(|(a, b)| (a.as_slice(), b)))? else {
                    continue;
                };
                let next = cell.intersect(&region)?;
                if next.is_empty() {
                    continue;
                }
                let mut aff = affine.clone();
                aff.push((e1.iter().zip(e2).map(|(a, b)| a - b).collect(), c1 - c2));
                stack.push((next, aff));
            }
        }
    }
    PolyhedralUnion::new(n, pieces)
}

/// Projects `{(y, z) : y ∈ cell, z_k = e_k·y + c_k}` to the `z` coordinates.
fn affine_image(cell: &Polyhedron, affine: &[(Vec<i64>, Q)]) -> Result<Option<Polyhedron>> {
    let m = cell.nvars();
    let n = affine.len();
    let mut rows: Vec<FmRow> = Vec::new();
    for h in cell.halfspaces() {
        let mut a: Vec<Q> = h.normal_q();
        a.extend(std::iter::repeat_n(Q::zero(), n));
        rows.push((a, -h.offset().clone()));
    }
    for (k, (e, c)) in affine.iter().enumerate() {
        // z_k − e·y = c as two inequalities
        let mut a: Vec<Q> = e.iter().map(|x| q(-x)).collect();
        a.extend(std::iter::repeat_n(Q::zero(), n));
        a[m + k] = q(1);
        rows.push((a.clone(), c.clone()));
        rows.push((a.iter().map(|x| -x).collect(), -c.clone()));
    }
    let ys: Vec<usize> = (0..m).collect();
    let projected = eliminate_all(&rows, &ys);
    let z_rows: Vec<(Vec<Q>, Q)> = projected.into_iter().map(|(a, b)| (a[m..].to_vec(), -b)).collect();
    Polyhedron::from_rows(n, z_rows.iter().map(|(a, b)| (a.as_slice(), b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::HalfSpace;
    use crate::scalar::q_frac;

    fn xpow(n: usize, e: &[i64]) -> TropicalPoly {
        assert_eq!(e.len(), n);
        TropicalPoly::monomial(Q::zero(), e.to_vec())
    }

    #[test]
    fn exponent_bound_examples() {
        let num = xpow(1, &[2]).add(&TropicalPoly::zero_const(1)).unwrap();
        let den = xpow(1, &[1]).add(&TropicalPoly::zero_const(1)).unwrap();
        let g = TropicalRational::new(num, den).unwrap();
        assert_eq!(exponent_bound_n(&g).unwrap(), 3);
        assert_eq!(exponent_bound_n(&TropicalRational::zero_const(2)).unwrap(), 2);
        assert!(exponent_bound_n(&TropicalRational::neg_inf(1)).is_err());
    }

    #[test]
    fn polynomial_pair_examples() {
        let f = xpow(1, &[1]).add(&xpow(1, &[-1])).unwrap().add(&TropicalPoly::zero_const(1)).unwrap();
        let (f1, f2) = polynomial_pair(&TropicalRational::from_poly(f)).unwrap();
        let want1 = xpow(1, &[2]).add(&xpow(1, &[1])).unwrap().add(&TropicalPoly::zero_const(1)).unwrap();
        assert_eq!(f1, want1);
        assert_eq!(f2, xpow(1, &[1]));
        let (a, b) = polynomial_pair(&TropicalRational::zero_const(2)).unwrap();
        assert_eq!(a, TropicalPoly::zero_const(2));
        assert_eq!(b, TropicalPoly::zero_const(2));
        assert!(polynomial_pair(&TropicalRational::constant(1, q(-1))).is_err());
    }

    #[test]
    fn image_of_interval_under_max_map() {
        let y = TropicalPoly::var(1, 0);
        let relu = TropicalRational::from_poly(y.add(&TropicalPoly::zero_const(1)).unwrap());
        let ident = TropicalRational::from_poly(y);
        let p = Polyhedron::new(1, vec![HalfSpace::new(vec![1], q(-1)).unwrap(), HalfSpace::new(vec![-1], q(-1)).unwrap()])
            .unwrap();
        let img = image_of_polyhedron(&[relu, ident], &p).unwrap();
        assert_eq!(img.pieces().len(), 2);
        for t in -4..=4 {
            let t = q_frac(t, 4);
            let on = if t < Q::zero() { vec![Q::zero(), t.clone()] } else { vec![t.clone(), t.clone()] };
            assert!(img.contains(&on).unwrap());
            assert!(!img.contains(&[t.clone() + q(2), t]).unwrap());
        }
        assert!(!img.contains(&[q(2), q(2)]).unwrap());
    }

    #[test]
    fn translation_image() {
        let shifted = TropicalRational::from_poly(TropicalPoly::monomial(q(1), vec![1]));
        let p = Polyhedron::new(1, vec![HalfSpace::new(vec![1], q(0)).unwrap()]).unwrap();
        let img = image_of_polyhedron(&[shifted], &p).unwrap();
        assert_eq!(img.pieces(), &[Polyhedron::new(1, vec![HalfSpace::new(vec![1], q(-1)).unwrap()]).unwrap()]);
    }
}
