//! Exact two-phase simplex over `Q` with a Bland's-rule fallback against cycling.
//!
//! Problems are stated as `maximize c·x subject to A x ≤ b` with `x` free.
//! Free variables are split into positive and negative parts internally.

use num_traits::{Signed, Zero};

use crate::scalar::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { x: Vec<Q>, value: Q },
}

impl LpOutcome {
    pub fn optimal(self) -> Option<(Vec<Q>, Q)> {
        match self {
            LpOutcome::Optimal { x, value } => Some((x, value)),
            _ => None,
        }
    }
}

/// Rows `a_i·x ≤ b_i` over `nvars` free variables.
#[derive(Clone, Debug, Default)]
pub struct Constraints {
    pub nvars: usize,
    pub rows: Vec<(Vec<Q>, Q)>,
}

impl Constraints {
    pub fn new(nvars: usize) -> Self {
        Self { nvars, rows: Vec::new() }
    }

    pub fn le(&mut self, a: Vec<Q>, b: Q) -> &mut Self {
        debug_assert_eq!(a.len(), self.nvars);
        self.rows.push((a, b));
        self
    }

    pub fn ge(&mut self, a: Vec<Q>, b: Q) -> &mut Self {
        let a = a.into_iter().map(|x| -x).collect();
        self.rows.push((a, -b));
        self
    }

    pub fn eq(&mut self, a: Vec<Q>, b: Q) -> &mut Self {
        self.ge(a.clone(), b.clone());
        self.le(a, b)
    }

    pub fn maximize(&self, c: &[Q]) -> LpOutcome {
        maximize(self.nvars, &self.rows, c)
    }

    pub fn minimize(&self, c: &[Q]) -> LpOutcome {
        let neg: Vec<Q> = c.iter().map(|x| -x.clone()).collect();
        match maximize(self.nvars, &self.rows, &neg) {
            LpOutcome::Optimal { x, value } => LpOutcome::Optimal { x, value: -value },
            other => other,
        }
    }

    pub fn feasible_point(&self) -> Option<Vec<Q>> {
        feasible_point(self.nvars, &self.rows)
    }
}

/// Degenerate pivots allowed before switching to Bland's rule.
const DEGENERATE_LIMIT: usize = 64;

struct Tableau {
    // rows × (ncols + 1); last entry is the right-hand side
    t: Vec<Vec<Q>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize, obj: &mut [Q]) {
        let inv = self.t[r][c].recip();
        for x in self.t[r].iter_mut() {
            *x *= &inv;
        }
        let prow = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        if !obj[c].is_zero() {
            let f = obj[c].clone();
            for (x, p) in obj.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Runs simplex iterations on the reduced-cost row `obj` (maximization;
    /// `obj[j] > 0` means column `j` improves). `allowed` masks columns that may
    /// enter. Returns false if unbounded.
    ///
    /// Entering columns follow the largest reduced cost until
    /// `DEGENERATE_LIMIT` degenerate pivots have occurred, and Bland's rule
    /// afterwards, which rules out cycling.
    fn run(&mut self, obj: &mut [Q], allowed: &dyn Fn(usize) -> bool) -> bool {
        let mut degenerate = 0;
        loop {
            let improving = (0..self.ncols).filter(|&j| allowed(j) && obj[j].is_positive());
            let entering = if degenerate < DEGENERATE_LIMIT {
                improving.max_by(|&a, &b| obj[a].cmp(&obj[b]).then(b.cmp(&a)))
            } else {
                improving.min()
            };
            let Some(c) = entering else {
                return true;
            };
            let mut best: Option<(usize, Q)> = None;
            for (i, row) in self.t.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[self.ncols] / &row[c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, ratio)) = best else {
                return false;
            };
            if ratio.is_zero() {
                degenerate += 1;
            }
            self.pivot(r, c, obj);
        }
    }

    /// Pivots zero-valued artificial columns (index `≥ first_art`) out of the
    /// basis, dropping rows that turn out to be redundant.
    fn drop_artificials(&mut self, first_art: usize, obj: &mut [Q]) {
        let mut r = 0;
        while r < self.t.len() {
            if self.basis[r] >= first_art {
                if let Some(c) = (0..first_art).find(|&j| !self.t[r][j].is_zero()) {
                    self.pivot(r, c, obj);
                    r += 1;
                } else {
                    self.t.remove(r);
                    self.basis.remove(r);
                }
            } else {
                r += 1;
            }
        }
    }

    /// Reduced costs `c_j − Σ c_B T_ij` of `cost`; the last slot holds the
    /// negated objective value.
    fn reduced_costs(&self, cost: &[Q]) -> Vec<Q> {
        let mut obj = cost.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero() {
                let f = cost[b].clone();
                for (o, x) in obj.iter_mut().zip(&self.t[i]) {
                    *o -= &f * x;
                }
            }
        }
        obj
    }
}

fn setup(nvars: usize, rows: &[(Vec<Q>, Q)]) -> (Tableau, usize, Vec<usize>) {
    let m = rows.len();
    let nsplit = 2 * nvars;
    let needs_art: Vec<usize> = (0..m).filter(|&i| rows[i].1.is_negative()).collect();
    let ncols = nsplit + m + needs_art.len();
    let mut t = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art_idx = 0;
    for (i, (a, b)) in rows.iter().enumerate() {
        let mut row = vec![Q::zero(); ncols + 1];
        for (j, aj) in a.iter().enumerate() {
            if !aj.is_zero() {
                row[j] = aj.clone();
                row[nvars + j] = -aj.clone();
            }
        }
        row[nsplit + i] = Q::from_integer(1.into());
        row[ncols] = b.clone();
        if b.is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
            let col = nsplit + m + art_idx;
            row[col] = Q::from_integer(1.into());
            basis.push(col);
            art_idx += 1;
        } else {
            basis.push(nsplit + i);
        }
        t.push(row);
    }
    let first_art = nsplit + m;
    (Tableau { t, basis, ncols }, first_art, needs_art)
}

/// Phase 1. Returns a tableau whose basis is feasible and free of artificial
/// columns, or `None` if the system is infeasible.
fn phase_one(nvars: usize, rows: &[(Vec<Q>, Q)]) -> Option<(Tableau, usize)> {
    let (mut tab, first_art, arts) = setup(nvars, rows);
    if !arts.is_empty() {
        // maximize −Σ artificials; reduced costs start as the sum of the rows
        // whose basic variable is artificial.
        let mut obj = vec![Q::zero(); tab.ncols + 1];
        for (i, &b) in tab.basis.iter().enumerate() {
            if b >= first_art {
                for (o, x) in obj.iter_mut().zip(&tab.t[i]) {
                    *o += x;
                }
            }
        }
        for o in obj[first_art..tab.ncols].iter_mut() {
            *o = Q::zero();
        }
        tab.run(&mut obj, &|_| true);
        if obj[tab.ncols].is_positive() {
            return None;
        }
        tab.drop_artificials(first_art, &mut obj);
    }
    Some((tab, first_art))
}

fn extract(tab: &Tableau, nvars: usize) -> Vec<Q> {
    let mut u = vec![Q::zero(); 2 * nvars];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < 2 * nvars {
            u[b] = tab.t[i][tab.ncols].clone();
        }
    }
    (0..nvars).map(|j| &u[j] - &u[nvars + j]).collect()
}

pub fn feasible_point(nvars: usize, rows: &[(Vec<Q>, Q)]) -> Option<Vec<Q>> {
    phase_one(nvars, rows).map(|(tab, _)| extract(&tab, nvars))
}

pub fn maximize(nvars: usize, rows: &[(Vec<Q>, Q)], c: &[Q]) -> LpOutcome {
    let Some((mut tab, first_art)) = phase_one(nvars, rows) else {
        return LpOutcome::Infeasible;
    };
    let mut cost = vec![Q::zero(); tab.ncols + 1];
    for (j, cj) in c.iter().enumerate() {
        cost[j] = cj.clone();
        cost[nvars + j] = -cj.clone();
    }
    let mut obj = tab.reduced_costs(&cost);
    if !tab.run(&mut obj, &|j| j < first_art) {
        return LpOutcome::Unbounded;
    }
    let x = extract(&tab, nvars);
    let value = c.iter().zip(&x).fold(Q::zero(), |acc, (a, b)| acc + a * b);
    LpOutcome::Optimal { x, value }
}

/// An optimum of a standard-form problem with its dual solution `y`, which
/// satisfies `yᵀA_j ≥ c_j` for every column and `yᵀb = value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardOptimum {
    pub x: Vec<Q>,
    pub value: Q,
    pub duals: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StandardOutcome {
    /// Carries a Farkas certificate `z` with `zᵀA_j ≤ 0` for every column
    /// and `zᵀb > 0`.
    Infeasible(Vec<Q>),
    Unbounded,
    Optimal(StandardOptimum),
}

/// `maximize c·λ subject to A λ = b, λ ≥ 0`.
pub fn maximize_standard(a: &[Vec<Q>], b: &[Q], c: &[Q]) -> StandardOutcome {
    let m = a.len();
    let nv = c.len();
    let ncols = nv + m;
    let mut t = Vec::with_capacity(m);
    let mut flipped = Vec::with_capacity(m);
    for (i, (ai, bi)) in a.iter().zip(b).enumerate() {
        debug_assert_eq!(ai.len(), nv);
        let mut row = vec![Q::zero(); ncols + 1];
        row[..nv].clone_from_slice(ai);
        row[ncols] = bi.clone();
        flipped.push(bi.is_negative());
        if bi.is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
        row[nv + i] = Q::from_integer(1.into());
        t.push(row);
    }
    let mut tab = Tableau { t, basis: (nv..ncols).collect(), ncols };
    let mut obj = vec![Q::zero(); ncols + 1];
    for row in &tab.t {
        for (o, x) in obj.iter_mut().zip(row) {
            *o += x;
        }
    }
    for o in obj[nv..ncols].iter_mut() {
        *o = Q::zero();
    }
    tab.run(&mut obj, &|_| true);
    if obj[ncols].is_positive() {
        // phase-1 reduced cost of artificial k is −1 − y_k; the certificate is −y
        let z = (0..m)
            .map(|k| {
                let zk = Q::from_integer(1.into()) + &obj[nv + k];
                if flipped[k] { -zk } else { zk }
            })
            .collect();
        return StandardOutcome::Infeasible(z);
    }
    tab.drop_artificials(nv, &mut obj);
    let mut cost = vec![Q::zero(); ncols + 1];
    cost[..nv].clone_from_slice(c);
    let mut obj = tab.reduced_costs(&cost);
    if !tab.run(&mut obj, &|j| j < nv) {
        return StandardOutcome::Unbounded;
    }
    let mut x = vec![Q::zero(); nv];
    for (i, &bj) in tab.basis.iter().enumerate() {
        if bj < nv {
            x[bj] = tab.t[i][ncols].clone();
        }
    }
    // the reduced cost of the artificial column of row k is −y_k (row sign adjusted)
    let duals = (0..m).map(|k| if flipped[k] { obj[nv + k].clone() } else { -obj[nv + k].clone() }).collect();
    let value = c.iter().zip(&x).fold(Q::zero(), |acc, (a, b)| acc + a * b);
    StandardOutcome::Optimal(StandardOptimum { x, value, duals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, q_frac};

    #[test]
    fn small_max() {
        // max x + y s.t. x ≤ 1, y ≤ 2, x + 2y ≤ 4
        let mut c = Constraints::new(2);
        c.le(vec![q(1), q(0)], q(1)).le(vec![q(0), q(1)], q(2)).le(vec![q(1), q(2)], q(4));
        let (x, v) = c.maximize(&[q(1), q(1)]).optimal().unwrap();
        assert_eq!(v, q_frac(5, 2));
        assert_eq!(x, vec![q(1), q_frac(3, 2)]);
    }

    #[test]
    fn negative_rhs_and_free_vars() {
        // x ≤ −3, maximize x → −3
        let mut c = Constraints::new(1);
        c.le(vec![q(1)], q(-3));
        assert_eq!(c.maximize(&[q(1)]).optimal().unwrap().1, q(-3));
        assert_eq!(c.minimize(&[q(1)]), LpOutcome::Unbounded);
    }

    #[test]
    fn infeasible() {
        let mut c = Constraints::new(1);
        c.le(vec![q(1)], q(0)).ge(vec![q(1)], q(1));
        assert_eq!(c.maximize(&[q(0)]), LpOutcome::Infeasible);
        assert!(c.feasible_point().is_none());
    }

    #[test]
    fn equalities_and_degenerate_rows() {
        let mut c = Constraints::new(2);
        c.eq(vec![q(1), q(1)], q(2)).eq(vec![q(2), q(2)], q(4)).ge(vec![q(0), q(1)], q(0));
        let (x, v) = c.maximize(&[q(1), q(0)]).optimal().unwrap();
        assert_eq!(v, q(2));
        assert_eq!(x, vec![q(2), q(0)]);
    }

    #[test]
    fn standard_form() {
        // max 2a + b s.t. a + b = 1, a − b = −1/2, a, b ≥ 0 → a = 1/4, b = 3/4
        let a = vec![vec![q(1), q(1)], vec![q(1), q(-1)]];
        let b = [q(1), q_frac(-1, 2)];
        let StandardOutcome::Optimal(opt) = maximize_standard(&a, &b, &[q(2), q(1)]) else { panic!("optimal") };
        assert_eq!(opt.x, vec![q_frac(1, 4), q_frac(3, 4)]);
        assert_eq!(opt.value, q_frac(5, 4));
        // strong duality and dual feasibility
        let yb: Q = opt.duals.iter().zip(&b).map(|(y, b)| y * b).sum();
        assert_eq!(yb, opt.value);
        for (j, cj) in [q(2), q(1)].iter().enumerate() {
            let ya: Q = opt.duals.iter().zip(&a).map(|(y, row)| y * &row[j]).sum();
            assert!(ya >= *cj);
        }
        let a = vec![vec![q(1), q(1)], vec![q(1), q(2)]];
        let b = [q(-1), q(3)];
        let StandardOutcome::Infeasible(z) = maximize_standard(&a, &b, &[q(0), q(0)]) else { panic!("infeasible") };
        let zb: Q = z.iter().zip(&b).map(|(z, b)| z * b).sum();
        assert!(zb.is_positive());
        for j in 0..2 {
            let za: Q = z.iter().zip(&a).map(|(z, row)| z * &row[j]).sum();
            assert!(!za.is_positive());
        }
        assert_eq!(maximize_standard(&[vec![q(1), q(-1)]], &[q(0)], &[q(1), q(0)]), StandardOutcome::Unbounded);
    }
}
