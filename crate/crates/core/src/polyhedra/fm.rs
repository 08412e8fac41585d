//! Fourier–Motzkin elimination on systems `a·z ≤ b`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::scalar::{common_denominator, Q};

/// A row `a·z ≤ b`.
pub type FmRow = (Vec<Q>, Q);

/// Scales a row to integer entries with gcd 1 so duplicates compare equal.
fn normalize(row: FmRow) -> FmRow {
    let (a, b) = row;
    let mut all = a.clone();
    all.push(b.clone());
    let den = common_denominator(&all);
    let ints: Vec<BigInt> = all.iter().map(|x| (x * &den).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return (a, b);
    }
    let mut scaled: Vec<Q> = ints.into_iter().map(|x| Q::from_integer(x / &g)).collect();
    let b = scaled.pop().expect("row has a right-hand side");
    (scaled, b)
}

/// Eliminates variable `var`; the result describes the projection of the
/// solution set along that coordinate (the coordinate itself stays, with
/// zero coefficients).
pub fn eliminate(rows: &[FmRow], var: usize) -> Vec<FmRow> {
    let mut out = BTreeSet::new();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for row in rows {
        let c = &row.0[var];
        if c.is_positive() {
            pos.push(row);
        } else if c.is_negative() {
            neg.push(row);
        } else {
            out.insert(normalize(row.clone()));
        }
    }
    for p in &pos {
        for m in &neg {
            let cp = p.0[var].clone();
            let cm = -m.0[var].clone();
            let a: Vec<Q> = p.0.iter().zip(&m.0).map(|(x, y)| &cm * x + &cp * y).collect();
            let b = &cm * &p.1 + &cp * &m.1;
            out.insert(normalize((a, b)));
        }
    }
    out.into_iter()
        .filter(|(a, b)| !(a.iter().all(Zero::is_zero) && !b.is_negative()))
        .collect()
}

/// Eliminates every variable in `vars`, in order.
pub fn eliminate_all(rows: &[FmRow], vars: &[usize]) -> Vec<FmRow> {
    let mut cur = rows.to_vec();
    for &v in vars {
        cur = eliminate(&cur, v);
    }
    cur
}

/// Whether `a·z ≤ b` has no solution, decided by eliminating every variable.
pub fn is_infeasible(nvars: usize, rows: &[FmRow]) -> bool {
    let vars: Vec<usize> = (0..nvars).collect();
    eliminate_all(rows, &vars).iter().any(|(a, b)| a.iter().all(Zero::is_zero) && b.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn interval_projection() {
        // x ≤ y, y ≤ 1, 0 ≤ x  ⇒ after removing y: 0 ≤ x ≤ 1
        let rows = vec![
            (vec![q(1), q(-1)], q(0)),
            (vec![q(0), q(1)], q(1)),
            (vec![q(-1), q(0)], q(0)),
        ];
        let out = eliminate(&rows, 1);
        assert!(out.contains(&(vec![q(1), q(0)], q(1))));
        assert!(out.contains(&(vec![q(-1), q(0)], q(0))));
        assert!(!is_infeasible(2, &rows));
    }

    #[test]
    fn detects_infeasibility() {
        let rows = vec![(vec![q(1), q(1)], q(0)), (vec![q(-1), q(0)], q(-1)), (vec![q(0), q(-1)], q(0))];
        assert!(is_infeasible(2, &rows));
    }
}
