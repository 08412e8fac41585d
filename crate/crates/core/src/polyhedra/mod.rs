//! Exact rational polyhedral geometry with integer normals.

mod cone;
mod distance;
pub mod fm;
mod projection;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::linalg;
use crate::lp::{Constraints, LpOutcome};
use crate::scalar::{big_to_i64, common_denominator, dot_iq, q, to_q_vec, Q};

pub use cone::{cone_h_to_v, polar_cone, ConeV};
pub use distance::distance_constant;
pub use projection::{
    decompose_point, nearest_point, project_onto_cone, union_dist, union_dist_sq, Decomposition,
};

/// `{x : normal·x + offset ≤ 0}` with a primitive integer normal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfSpace {
    normal: Vec<i64>,
    offset: Q,
}

/// What a rational row `a·x + b ≤ 0` turns into once normalized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Row {
    Half(HalfSpace),
    /// `a = 0` and `b ≤ 0`: satisfied everywhere.
    Always,
    /// `a = 0` and `b > 0`: satisfied nowhere.
    Never,
}

impl HalfSpace {
    /// Divides out the gcd of the normal (rescaling the offset with it).
    pub fn new(normal: Vec<i64>, offset: Q) -> Result<Self> {
        let g = normal.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        if g == 0 {
            return Err(Error::Precondition("half-space normal is zero".into()));
        }
        let normal = normal.into_iter().map(|x| x / g).collect();
        Ok(Self { normal, offset: offset / q(g) })
    }

    /// Normalizes a rational row `a·x + b ≤ 0`.
    pub fn from_rational(a: &[Q], b: &Q) -> Result<Row> {
        if a.iter().all(Zero::is_zero) {
            return Ok(if b.is_positive() { Row::Never } else { Row::Always });
        }
        let den = common_denominator(a);
        let ints: Vec<BigInt> = a.iter().map(|x| (x * &den).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let mut normal = Vec::with_capacity(a.len());
        for x in &ints {
            normal.push(big_to_i64(&(x / &g))?);
        }
        let scale = Q::from_integer(den) / Q::from_integer(g);
        Ok(Row::Half(Self { normal, offset: b * scale }))
    }

    pub fn normal(&self) -> &[i64] {
        &self.normal
    }

    pub fn offset(&self) -> &Q {
        &self.offset
    }

    pub fn nvars(&self) -> usize {
        self.normal.len()
    }

    /// `normal·x + offset`; the point is inside iff this is `≤ 0`.
    pub fn value(&self, x: &[Q]) -> Q {
        dot_iq(&self.normal, x) + &self.offset
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        !self.value(x).is_positive()
    }

    pub fn normal_q(&self) -> Vec<Q> {
        to_q_vec(&self.normal)
    }
}

/// Intersection of finitely many half-spaces; no half-spaces means `R^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polyhedron {
    nvars: usize,
    halfspaces: Vec<HalfSpace>,
}

impl Polyhedron {
    pub fn whole_space(nvars: usize) -> Self {
        Self { nvars, halfspaces: Vec::new() }
    }

    pub fn new(nvars: usize, halfspaces: Vec<HalfSpace>) -> Result<Self> {
        for h in &halfspaces {
            check_dim(nvars, h.nvars())?;
        }
        Ok(Self { nvars, halfspaces })
    }

    /// Builds from rational rows `a·x + b ≤ 0`. `None` if some row is a
    /// constant contradiction, i.e. the set is trivially empty.
    pub fn from_rows<'a>(nvars: usize, rows: impl IntoIterator<Item = (&'a [Q], &'a Q)>) -> Result<Option<Self>> {
        let mut hs = Vec::new();
        for (a, b) in rows {
            check_dim(nvars, a.len())?;
            match HalfSpace::from_rational(a, b)? {
                Row::Half(h) => hs.push(h),
                Row::Always => {}
                Row::Never => return Ok(None),
            }
        }
        Ok(Some(Self { nvars, halfspaces: hs }))
    }

    /// A canonical empty polyhedron: `x_1 ≤ −1` and `−x_1 ≤ 0`.
    pub fn empty(nvars: usize) -> Self {
        let mut e = vec![0; nvars];
        e[0] = 1;
        let a = HalfSpace { normal: e.clone(), offset: q(1) };
        e[0] = -1;
        let b = HalfSpace { normal: e, offset: Q::zero() };
        Self { nvars, halfspaces: vec![a, b] }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    pub fn is_whole_space(&self) -> bool {
        self.halfspaces.is_empty()
    }

    pub fn push(&mut self, h: HalfSpace) -> Result<()> {
        check_dim(self.nvars, h.nvars())?;
        self.halfspaces.push(h);
        Ok(())
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        check_dim(self.nvars, other.nvars)?;
        let mut hs = self.halfspaces.clone();
        hs.extend(other.halfspaces.iter().cloned());
        Ok(Self { nvars: self.nvars, halfspaces: hs })
    }

    pub fn contains(&self, x: &[Q]) -> Result<bool> {
        check_dim(self.nvars, x.len())?;
        Ok(self.contains_unchecked(x))
    }

    pub(crate) fn contains_unchecked(&self, x: &[Q]) -> bool {
        self.halfspaces.iter().all(|h| h.contains(x))
    }

    /// LP form `normal·x ≤ −offset`.
    pub fn constraints(&self) -> Constraints {
        let mut c = Constraints::new(self.nvars);
        for h in &self.halfspaces {
            c.le(h.normal_q(), -h.offset.clone());
        }
        c
    }

    /// A rational point of the polyhedron, if any.
    pub fn feasible_point(&self) -> Option<Vec<Q>> {
        if self.halfspaces.is_empty() {
            return Some(vec![Q::zero(); self.nvars]);
        }
        self.constraints().feasible_point()
    }

    pub fn is_empty(&self) -> bool {
        self.feasible_point().is_none()
    }

    pub fn maximize(&self, objective: &[Q]) -> Result<LpOutcome> {
        check_dim(self.nvars, objective.len())?;
        Ok(self.constraints().maximize(objective))
    }

    /// Whether the polyhedron has zero offsets (is a cone with apex 0).
    pub fn is_cone(&self) -> bool {
        self.halfspaces.iter().all(|h| h.offset.is_zero())
    }

    /// Vertices, found by solving every independent `n`-subset of tight
    /// constraints. Empty for polyhedra with a nontrivial lineality space.
    pub fn vertices(&self) -> Vec<Vec<Q>> {
        let n = self.nvars;
        let m = self.halfspaces.len();
        let mut out = BTreeSet::new();
        if m < n {
            return Vec::new();
        }
        for subset in combinations(m, n) {
            let a: Vec<Vec<Q>> = subset.iter().map(|&i| self.halfspaces[i].normal_q()).collect();
            let b: Vec<Q> = subset.iter().map(|&i| -self.halfspaces[i].offset.clone()).collect();
            if let Some(x) = linalg::solve_unique(&a, &b, n) {
                if self.contains_unchecked(&x) {
                    out.insert(x);
                }
            }
        }
        out.into_iter().collect()
    }

    /// Drops duplicate and LP-redundant half-spaces. An empty polyhedron is
    /// returned as [`Polyhedron::empty`].
    pub fn simplified(&self) -> Self {
        if self.is_empty() {
            return Self::empty(self.nvars);
        }
        let mut hs: Vec<HalfSpace> = Vec::new();
        for h in &self.halfspaces {
            if !hs.contains(h) {
                hs.push(h.clone());
            }
        }
        let mut i = 0;
        while i < hs.len() {
            let mut rest = Constraints::new(self.nvars);
            for (j, h) in hs.iter().enumerate() {
                if j != i {
                    rest.le(h.normal_q(), -h.offset.clone());
                }
            }
            let redundant = match rest.maximize(&hs[i].normal_q()) {
                LpOutcome::Optimal { value, .. } => !(value + &hs[i].offset).is_positive(),
                _ => false,
            };
            if redundant {
                hs.remove(i);
            } else {
                i += 1;
            }
        }
        Self { nvars: self.nvars, halfspaces: hs }
    }
}

/// A finite union of polyhedra; no pieces means the empty set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyhedralUnion {
    nvars: usize,
    pieces: Vec<Polyhedron>,
}

impl PolyhedralUnion {
    pub fn empty(nvars: usize) -> Self {
        Self { nvars, pieces: Vec::new() }
    }

    pub fn whole_space(nvars: usize) -> Self {
        Self { nvars, pieces: vec![Polyhedron::whole_space(nvars)] }
    }

    pub fn new(nvars: usize, pieces: Vec<Polyhedron>) -> Result<Self> {
        for p in &pieces {
            check_dim(nvars, p.nvars())?;
        }
        Ok(Self { nvars, pieces })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn pieces(&self) -> &[Polyhedron] {
        &self.pieces
    }

    pub fn contains(&self, x: &[Q]) -> Result<bool> {
        check_dim(self.nvars, x.len())?;
        Ok(self.pieces.iter().any(|p| p.contains_unchecked(x)))
    }

    /// Drops empty pieces and duplicate pieces.
    pub fn pruned(&self) -> Self {
        let mut pieces: Vec<Polyhedron> = Vec::new();
        for p in &self.pieces {
            if !p.is_empty() && !pieces.contains(p) {
                pieces.push(p.clone());
            }
        }
        Self { nvars: self.nvars, pieces }
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.iter().all(Polyhedron::is_empty)
    }

    /// Pairwise intersections of pieces, with empty ones dropped.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        check_dim(self.nvars, other.nvars)?;
        let mut pieces = Vec::new();
        for a in &self.pieces {
            for b in &other.pieces {
                let p = a.intersect(b)?;
                if !p.is_empty() {
                    pieces.push(p);
                }
            }
        }
        Ok(Self { nvars: self.nvars, pieces })
    }
}

/// All `k`-element subsets of `0..m` in lexicographic order.
pub(crate) fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > m {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == m - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
