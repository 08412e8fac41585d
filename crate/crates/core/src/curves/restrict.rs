use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::curves::complex::{CurveComplex, EdgeGeom, EdgeRef};
use crate::error::{check_dim, Error, Result};
use crate::scalar::{dot_iq, q, Q};
use crate::tropical::{TropicalPoly, TropicalRational};

/// A function restricted to one edge, in the lattice-length parameter `τ`.
///
/// On `[breakpoints[i], breakpoints[i+1]]` the function is
/// `values[i] + slopes[i]·(τ − breakpoints[i])`. For rays the last slope
/// continues to infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeRestriction {
    pub edge: EdgeRef,
    pub breakpoints: Vec<Q>,
    pub values: Vec<Q>,
    pub slopes: Vec<i64>,
}

impl EdgeRestriction {
    pub fn eval(&self, tau: &Q) -> Q {
        let i = self.breakpoints.iter().rposition(|b| b <= tau).unwrap_or(0);
        &self.values[i] + q(self.slopes[i.min(self.slopes.len() - 1)]) * (tau - &self.breakpoints[i])
    }
}

/// A tropical rational function restricted to a curve: piecewise affine
/// with integer slopes on every edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLFunctionOnComplex {
    pub edges: Vec<EdgeRestriction>,
}

impl PLFunctionOnComplex {
    pub fn restrict(f: &TropicalRational, c: &CurveComplex) -> Result<Self> {
        check_dim(c.nvars(), f.nvars())?;
        if f.is_neg_inf() {
            return Err(Error::Precondition("cannot restrict the constant -inf".into()));
        }
        let edges = c.edges().iter().map(|e| restrict_edge(f, e)).collect();
        Ok(Self { edges })
    }

    /// Values at shared vertices agree across all incident edges.
    pub fn is_continuous(&self, c: &CurveComplex) -> bool {
        let mut at: Vec<Option<Q>> = vec![None; c.vertices().len()];
        for r in &self.edges {
            let e = c.edge(r.edge).expect("edge of this complex");
            let ends = c.endpoints(r.edge);
            let mut checks = vec![(ends[0], Q::zero())];
            if let (Some(&b), Some(l)) = (ends.get(1), &e.len) {
                checks.push((b, l.clone()));
            }
            for (v, tau) in checks {
                let val = r.eval(&tau);
                match &at[v] {
                    None => at[v] = Some(val),
                    Some(prev) if *prev != val => return false,
                    _ => {}
                }
            }
        }
        true
    }
}

/// Lines `(slope, intercept)` of the terms of `p` along the edge.
fn lines(p: &TropicalPoly, e: &EdgeGeom) -> Vec<(i64, Q)> {
    p.terms()
        .map(|(exp, c)| (exp.iter().zip(&e.dir).map(|(a, b)| a * b).sum(), c + dot_iq(exp, &e.start)))
        .collect()
}

/// Slope and value of the top line at `τ`.
fn top(ls: &[(i64, Q)], tau: &Q) -> (i64, Q) {
    ls.iter()
        .map(|(s, c)| (q(*s) * tau + c, *s))
        .max()
        .map(|(v, s)| (s, v))
        .expect("nonempty polynomial")
}

fn restrict_edge(f: &TropicalRational, e: &EdgeGeom) -> EdgeRestriction {
    let num = lines(f.num(), e);
    let den = lines(f.den(), e);
    let mut cuts: BTreeSet<Q> = BTreeSet::new();
    cuts.insert(Q::zero());
    for ls in [&num, &den] {
        for (i, (s1, c1)) in ls.iter().enumerate() {
            for (s2, c2) in &ls[i + 1..] {
                if s1 != s2 {
                    let t = (c2 - c1) / q(s1 - s2);
                    if e.contains_param(&t) {
                        cuts.insert(t);
                    }
                }
            }
        }
    }
    if let Some(l) = &e.len {
        cuts.insert(l.clone());
    }
    let pts: Vec<Q> = cuts.into_iter().collect();
    let mut breakpoints = Vec::new();
    let mut values = Vec::new();
    let mut slopes: Vec<i64> = Vec::new();
    for (i, t) in pts.iter().enumerate() {
        let value = top(&num, t).1 - top(&den, t).1;
        let bounded_end = e.len.is_some() && i + 1 == pts.len();
        if bounded_end {
            breakpoints.push(t.clone());
            values.push(value);
            break;
        }
        // slope on (t, next): evaluate just past t
        let next = pts.get(i + 1).cloned().unwrap_or_else(|| t + Q::one());
        let probe = (t + &next) / q(2);
        let slope = top(&num, &probe).0 - top(&den, &probe).0;
        if slopes.last() == Some(&slope) {
            continue;
        }
        breakpoints.push(t.clone());
        values.push(value);
        slopes.push(slope);
    }
    if slopes.is_empty() {
        slopes.push(0);
    }
    EdgeRestriction { edge: e.edge, breakpoints, values, slopes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::charts::segment_tent;
    use crate::curves::complex::int_vertex as v;

    #[test]
    fn tent_restriction_has_unit_slopes() {
        let c = CurveComplex::new(1, vec![v(&[0]), v(&[2])], vec![(0, 1)], vec![(0, vec![-1]), (1, vec![1])]).unwrap();
        let f = segment_tent(&c, 0).unwrap().f;
        let r = PLFunctionOnComplex::restrict(&f, &c).unwrap();
        assert!(r.is_continuous(&c));
        let seg = &r.edges[0];
        assert_eq!(seg.slopes, vec![1, -1]);
        assert_eq!(seg.breakpoints[1], q(1));
        assert_eq!(seg.values[1], q(0));
        for ray in &r.edges[1..] {
            assert_eq!(ray.slopes, vec![0]);
            assert_eq!(ray.values[0], q(-1));
        }
    }
}
