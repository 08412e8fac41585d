use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::lp::Constraints;
use crate::scalar::{gcd_i64, primitive_direction, q, to_q_vec, Q};

/// Reference to one edge of a [`CurveComplex`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeRef {
    Segment(usize),
    Ray(usize),
}

/// An edge as `start + τ·dir` for `τ ∈ [0, len]`, with `dir` primitive so
/// `τ` is lattice length; `len` is `None` for rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeGeom {
    pub edge: EdgeRef,
    pub start: Vec<Q>,
    pub dir: Vec<i64>,
    pub len: Option<Q>,
}

impl EdgeGeom {
    pub fn point(&self, tau: &Q) -> Vec<Q> {
        self.start.iter().zip(&self.dir).map(|(s, d)| s + tau * q(*d)).collect()
    }

    pub fn contains_param(&self, tau: &Q) -> bool {
        !tau.is_negative() && self.len.as_ref().is_none_or(|l| tau <= l)
    }
}

/// A one-dimensional rational polyhedral complex in `R^n`: vertices joined
/// by bounded segments, plus rays leaving vertices in primitive integer
/// directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveComplex {
    nvars: usize,
    vertices: Vec<Vec<Q>>,
    segments: Vec<(usize, usize)>,
    rays: Vec<(usize, Vec<i64>)>,
}

impl CurveComplex {
    /// Validates indices, primitivity, distinctness and that edges meet only
    /// at shared vertices. Connectivity is not required here; see
    /// [`CurveComplex::is_connected`].
    pub fn new(
        nvars: usize,
        vertices: Vec<Vec<Q>>,
        segments: Vec<(usize, usize)>,
        rays: Vec<(usize, Vec<i64>)>,
    ) -> Result<Self> {
        if nvars == 0 {
            return Err(Error::Precondition("a complex needs at least one coordinate".into()));
        }
        if vertices.is_empty() {
            return Err(Error::Precondition("a complex needs at least one vertex".into()));
        }
        for v in &vertices {
            check_dim(nvars, v.len())?;
        }
        let distinct: BTreeSet<&Vec<Q>> = vertices.iter().collect();
        if distinct.len() != vertices.len() {
            return Err(Error::Precondition("duplicate vertex coordinates".into()));
        }
        let nv = vertices.len();
        for (k, &(a, b)) in segments.iter().enumerate() {
            if a >= nv || b >= nv {
                return Err(Error::Precondition(format!("segment {k} refers to a missing vertex")));
            }
            if a == b {
                return Err(Error::Precondition(format!("segment {k} has equal endpoints")));
            }
        }
        for (k, (base, dir)) in rays.iter().enumerate() {
            if *base >= nv {
                return Err(Error::Precondition(format!("ray {k} refers to a missing vertex")));
            }
            check_dim(nvars, dir.len())?;
            if dir.iter().fold(0, |g, &x| gcd_i64(g, x)) != 1 {
                return Err(Error::Precondition(format!("ray {k} direction is not primitive")));
            }
        }
        let c = Self { nvars, vertices, segments, rays };
        c.check_intersections()?;
        Ok(c)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn vertices(&self) -> &[Vec<Q>] {
        &self.vertices
    }

    pub fn segments(&self) -> &[(usize, usize)] {
        &self.segments
    }

    pub fn rays(&self) -> &[(usize, Vec<i64>)] {
        &self.rays
    }

    /// Vertex indices of an edge (one for rays).
    pub fn endpoints(&self, e: EdgeRef) -> Vec<usize> {
        match e {
            EdgeRef::Segment(k) => vec![self.segments[k].0, self.segments[k].1],
            EdgeRef::Ray(k) => vec![self.rays[k].0],
        }
    }

    pub fn edge_refs(&self) -> Vec<EdgeRef> {
        (0..self.segments.len())
            .map(EdgeRef::Segment)
            .chain((0..self.rays.len()).map(EdgeRef::Ray))
            .collect()
    }

    pub fn edge(&self, e: EdgeRef) -> Result<EdgeGeom> {
        match e {
            EdgeRef::Segment(k) => {
                let &(a, b) = self
                    .segments
                    .get(k)
                    .ok_or_else(|| Error::Precondition(format!("no segment {k}")))?;
                let p = &self.vertices[a];
                let diff: Vec<Q> = self.vertices[b].iter().zip(p).map(|(x, y)| x - y).collect();
                let (dir, factor) = primitive_direction(&diff)?.expect("endpoints are distinct");
                Ok(EdgeGeom { edge: e, start: p.clone(), dir, len: Some(Q::one() / factor) })
            }
            EdgeRef::Ray(k) => {
                let (base, dir) = self.rays.get(k).ok_or_else(|| Error::Precondition(format!("no ray {k}")))?;
                Ok(EdgeGeom { edge: e, start: self.vertices[*base].clone(), dir: dir.clone(), len: None })
            }
        }
    }

    pub fn edges(&self) -> Vec<EdgeGeom> {
        self.edge_refs().into_iter().map(|e| self.edge(e).expect("valid edge")).collect()
    }

    /// Edges at vertex `v`, each oriented away from `v`.
    pub fn incident(&self, v: usize) -> Vec<EdgeGeom> {
        let mut out = Vec::new();
        for (k, &(a, b)) in self.segments.iter().enumerate() {
            if a == v || b == v {
                let mut g = self.edge(EdgeRef::Segment(k)).expect("valid");
                if b == v {
                    g.start = self.vertices[v].clone();
                    g.dir = g.dir.iter().map(|x| -x).collect();
                }
                out.push(g);
            }
        }
        for (k, (base, _)) in self.rays.iter().enumerate() {
            if *base == v {
                out.push(self.edge(EdgeRef::Ray(k)).expect("valid"));
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let next = p[c];
                p[c] = r;
                c = next;
            }
            r
        }
        for &(a, b) in &self.segments {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        let root = find(&mut parent, 0);
        (0..self.vertices.len()).all(|v| find(&mut parent, v) == root)
    }

    fn check_intersections(&self) -> Result<()> {
        let edges = self.edges();
        for (i, e) in edges.iter().enumerate() {
            let ends: BTreeSet<usize> = self.endpoints(e.edge).into_iter().collect();
            for (v, x) in self.vertices.iter().enumerate() {
                if !ends.contains(&v) && on_edge(e, x) {
                    return Err(Error::Precondition(format!("vertex {v} lies inside edge {:?}", e.edge)));
                }
            }
            for f in &edges[i + 1..] {
                let shared: Vec<usize> =
                    self.endpoints(f.edge).into_iter().filter(|v| ends.contains(v)).collect();
                if shared.len() > 1 {
                    return Err(Error::Precondition(format!("edges {:?} and {:?} coincide", e.edge, f.edge)));
                }
                if !meets_only_at(e, f, shared.first().map(|&v| &self.vertices[v])) {
                    return Err(Error::Precondition(format!(
                        "edges {:?} and {:?} meet outside a shared vertex",
                        e.edge, f.edge
                    )));
                }
            }
        }
        Ok(())
    }
}

fn on_edge(e: &EdgeGeom, x: &[Q]) -> bool {
    let (j, d) = e.dir.iter().enumerate().find(|(_, d)| **d != 0).expect("nonzero direction");
    let tau = (&x[j] - &e.start[j]) / q(*d);
    e.contains_param(&tau) && e.point(&tau) == x
}

/// Whether edges `e` and `f` intersect exactly in `shared` (or not at all).
fn meets_only_at(e: &EdgeGeom, f: &EdgeGeom, shared: Option<&Vec<Q>>) -> bool {
    let n = e.start.len();
    // variables (s, t): e.start + s·e.dir = f.start + t·f.dir
    let mut c = Constraints::new(2);
    for j in 0..n {
        c.eq(vec![q(e.dir[j]), q(-f.dir[j])], &f.start[j] - &e.start[j]);
    }
    c.ge(vec![q(1), Q::zero()], Q::zero());
    c.ge(vec![Q::zero(), q(1)], Q::zero());
    if let Some(l) = &e.len {
        c.le(vec![q(1), Q::zero()], l.clone());
    }
    if let Some(l) = &f.len {
        c.le(vec![Q::zero(), q(1)], l.clone());
    }
    let Some(v) = shared else {
        return c.feasible_point().is_none();
    };
    // the intersection is convex and contains v; it is {v} iff s is pinned
    let s_v = if *v == e.start { Q::zero() } else { e.len.clone().expect("segment end") };
    let obj = [q(1), Q::zero()];
    let hi = c.maximize(&obj).optimal().map(|(_, val)| val);
    let lo = c.minimize(&obj).optimal().map(|(_, val)| val);
    hi.as_ref() == Some(&s_v) && lo.as_ref() == Some(&s_v)
}

/// `λ` with `b − a = λ·v` for a primitive integer vector `v`; 0 if `a = b`.
pub fn lattice_length(a: &[Q], b: &[Q]) -> Result<Q> {
    check_dim(a.len(), b.len())?;
    let diff: Vec<Q> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    Ok(match primitive_direction(&diff)? {
        None => Q::zero(),
        Some((_, factor)) => Q::one() / factor,
    })
}

/// Unordered pairs of distinct rays with the same primitive direction.
pub fn check_ray_directions(c: &CurveComplex) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..c.rays.len() {
        for j in i + 1..c.rays.len() {
            if c.rays[i].1 == c.rays[j].1 {
                out.push((i, j));
            }
        }
    }
    out
}

/// The geometric conditions on a curve: connectedness, dimension at most
/// one and uniqueness of ray directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricReport {
    pub connected: bool,
    /// 0 for a single point, 1 otherwise.
    pub dimension: u8,
    pub duplicate_rays: Vec<(usize, usize)>,
}

impl GeometricReport {
    pub fn passed(&self) -> bool {
        self.connected && self.duplicate_rays.is_empty()
    }

    /// The congruence-theoretic conditions are outside what this report checks.
    pub const CONGRUENCE_CONDITIONS: &'static str = "not checked (out of scope)";
}

pub fn check_geometric_conditions(c: &CurveComplex) -> GeometricReport {
    let dimension = if c.segments.is_empty() && c.rays.is_empty() { 0 } else { 1 };
    GeometricReport { connected: c.is_connected(), dimension, duplicate_rays: check_ray_directions(c) }
}

/// Helper for tests and callers: integer vertex coordinates.
pub fn int_vertex(v: &[i64]) -> Vec<Q> {
    to_q_vec(v)
}
