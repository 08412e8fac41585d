//! Dense exact linear algebra over `Q`.

use num_traits::{One, Zero};

use crate::scalar::Q;

/// Row-reduces `[a | b]` in place and returns the pivot columns.
fn row_reduce(a: &mut [Vec<Q>], b: &mut [Q]) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        b.swap(r, p);
        let inv = Q::one() / &a[r][c];
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        b[r] *= &inv;
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let prow = a[r].clone();
                for (x, p) in a[i][c..cols].iter_mut().zip(&prow[c..cols]) {
                    *x -= &f * p;
                }
                let t = &f * &b[r];
                b[i] -= t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut a = rows.to_vec();
    let mut b = vec![Q::zero(); a.len()];
    row_reduce(&mut a, &mut b).len()
}

/// Some solution of `a x = b`, or `None` if inconsistent. Free variables are
/// set to zero.
pub fn solve_any(a: &[Vec<Q>], b: &[Q], ncols: usize) -> Option<Vec<Q>> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    let pivots = row_reduce(&mut a, &mut b);
    if b[pivots.len()..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut x = vec![Q::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = b[r].clone();
    }
    Some(x)
}

/// The unique solution of `a x = b` when `a` has full column rank and the
/// system is consistent.
pub fn solve_unique(a: &[Vec<Q>], b: &[Q], ncols: usize) -> Option<Vec<Q>> {
    let mut a2 = a.to_vec();
    let mut b2 = b.to_vec();
    let pivots = row_reduce(&mut a2, &mut b2);
    if pivots.len() != ncols || b2[pivots.len()..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut x = vec![Q::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = b2[r].clone();
    }
    Some(x)
}

/// A basis of `{x : a x = 0}`.
pub fn nullspace(a: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let mut a2 = a.to_vec();
    let mut b = vec![Q::zero(); a2.len()];
    let pivots = row_reduce(&mut a2, &mut b);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -a2[r][f].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn solves_and_detects_inconsistency() {
        let a = vec![vec![q(1), q(1)], vec![q(1), q(-1)]];
        assert_eq!(solve_unique(&a, &[q(2), q(0)], 2).unwrap(), vec![q(1), q(1)]);
        let a = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        assert!(solve_any(&a, &[q(1), q(3)], 2).is_none());
        assert!(solve_unique(&a, &[q(1), q(2)], 2).is_none());
        assert_eq!(rank(&a), 1);
    }

    #[test]
    fn nullspace_is_orthogonal() {
        let a = vec![vec![q(1), q(2), q(3)]];
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(crate::scalar::dot_qq(&a[0], &v).is_zero());
        }
    }
}
