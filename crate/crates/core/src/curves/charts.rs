use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::curves::complex::{CurveComplex, EdgeGeom, EdgeRef};
use crate::error::{Error, Result};
use crate::lp::Constraints;
use crate::scalar::{ceil_q, dot_iq, q, Q};
use crate::tropical::{TropicalPoly, TropicalRational};

/// Which chart construction produced a function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    RayBump,
    SegmentTent,
    VertexStar,
}

/// A chart function together with its base point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    pub f: TropicalRational,
    pub base_point: Vec<Q>,
    pub construction: Construction,
    pub warnings: Vec<String>,
}

/// An integer covector `l′` with `l·l′ = 1`: the smallest by `ℓ¹` norm, then
/// lexicographically, among entries bounded by `max |l_i|`; extended gcd
/// when that box is large.
pub fn dual_covector(l: &[i64]) -> Result<Vec<i64>> {
    let bound = l.iter().map(|x| x.abs()).max().unwrap_or(0);
    if bound == 0 {
        return Err(Error::Precondition("zero direction".into()));
    }
    let n = l.len();
    if (2 * bound + 1).checked_pow(n as u32).is_some_and(|c| c <= 1 << 16) {
        let mut best: Option<(i64, Vec<i64>)> = None;
        let mut cur = vec![-bound; n];
        loop {
            if cur.iter().zip(l).map(|(a, b)| a * b).sum::<i64>() == 1 {
                let norm: i64 = cur.iter().map(|x| x.abs()).sum();
                if best.as_ref().is_none_or(|(bn, bv)| (norm, &cur) < (*bn, bv)) {
                    best = Some((norm, cur.clone()));
                }
            }
            let mut i = n;
            loop {
                if i == 0 {
                    return best.map(|(_, v)| v).ok_or_else(|| Error::Precondition("direction is not primitive".into()));
                }
                i -= 1;
                if cur[i] < bound {
                    cur[i] += 1;
                    break;
                }
                cur[i] = -bound;
            }
        }
    }
    let mut g = l[0];
    let mut coeffs = vec![0i64; n];
    coeffs[0] = 1;
    for i in 1..n {
        let e = g.extended_gcd(&l[i]);
        for c in coeffs.iter_mut().take(i) {
            *c *= e.x;
        }
        coeffs[i] = e.y;
        g = e.gcd;
    }
    match g {
        1 => Ok(coeffs),
        -1 => Ok(coeffs.iter().map(|x| -x).collect()),
        _ => Err(Error::Precondition("direction is not primitive".into())),
    }
}

/// A bump at `apex` along `l`: `h = l′·(y − apex)` and
/// `g = max |l_i (y_j − a_j) − l_j (y_i − a_i)|`, which vanishes exactly on
/// the line through `apex` in direction `l`.
struct Bump {
    apex: Vec<Q>,
    l: Vec<i64>,
    lp: Vec<i64>,
    /// Affine pieces `(p, c)` of `g`, meaning `p·y + c`.
    g_forms: Vec<(Vec<i64>, Q)>,
}

impl Bump {
    fn new(apex: Vec<Q>, l: Vec<i64>) -> Result<Self> {
        let lp = dual_covector(&l)?;
        let n = l.len();
        let mut g_forms = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut p = vec![0i64; n];
                p[j] = l[i];
                p[i] = -l[j];
                let c = -dot_iq(&p, &apex);
                g_forms.push((p.iter().map(|x| -x).collect(), -c.clone()));
                g_forms.push((p, c));
            }
        }
        Ok(Self { apex, l, lp, g_forms })
    }

    /// `h` as a single tropical monomial.
    fn h_poly(&self) -> TropicalPoly {
        TropicalPoly::monomial(-dot_iq(&self.lp, &self.apex), self.lp.clone())
    }

    fn g_poly(&self) -> TropicalPoly {
        let n = self.l.len();
        let mut g = TropicalPoly::zero_const(n);
        for (p, c) in &self.g_forms {
            g.insert(p.clone(), c.clone());
        }
        g
    }

    /// `h ⊙ g^{⊙(−k)}`, i.e. `h − k·g`.
    fn core(&self, k: u64) -> TropicalRational {
        TropicalRational::new(self.h_poly(), self.g_poly().pow(k)).expect("g is finite")
    }

    /// `h ⊙ g^{⊙(−k)} ⊕ 0`, i.e. `max(h − k·g, 0)`.
    fn clipped(&self, k: u64) -> TropicalRational {
        let gk = self.g_poly().pow(k);
        let num = self.h_poly().add(&gk).expect("same nvars");
        TropicalRational::new(num, gk).expect("g is finite")
    }

    /// `sup h/g` over the part of edge `e` where `h > 0`, or `None` if `h > 0`
    /// somewhere `g = 0` (also asymptotically).
    fn sup_ratio(&self, e: &EdgeGeom) -> Option<Q> {
        let a = q(self.lp.iter().zip(&e.dir).map(|(x, y)| x * y).sum::<i64>());
        let diff: Vec<Q> = e.start.iter().zip(&self.apex).map(|(x, y)| x - y).collect();
        let c = dot_iq(&self.lp, &diff);
        let pieces: Vec<(Q, Q)> = self
            .g_forms
            .iter()
            .map(|(p, k)| (q(p.iter().zip(&e.dir).map(|(x, y)| x * y).sum::<i64>()), dot_iq(p, &e.start) + k))
            .collect();
        let g_at = |t: &Q| pieces.iter().map(|(s, o)| s * t + o).max().unwrap_or_else(Q::zero);
        // interval of τ where h ≥ 0 within the edge
        let mut lo = Q::zero();
        let mut hi = e.len.clone();
        if a.is_zero() {
            if !c.is_positive() {
                return Some(Q::zero());
            }
        } else {
            let root = -&c / &a;
            if a.is_positive() {
                lo = lo.max(root);
            } else {
                hi = Some(hi.map_or(root.clone(), |h| h.min(root)));
            }
        }
        if hi.as_ref().is_some_and(|h| *h < lo) {
            return Some(Q::zero());
        }
        let inside = |t: &Q| *t >= lo && hi.as_ref().is_none_or(|h| t <= h);
        let mut cands = vec![lo.clone()];
        if let Some(h) = &hi {
            cands.push(h.clone());
        }
        for (i, (s1, o1)) in pieces.iter().enumerate() {
            for (s2, o2) in &pieces[i + 1..] {
                if s1 != s2 {
                    let t = (o2 - o1) / (s1 - s2);
                    if inside(&t) {
                        cands.push(t);
                    }
                }
            }
        }
        if hi.is_none() {
            let far = cands.iter().max().expect("nonempty").clone() + Q::one();
            cands.push(far);
        }
        let mut best = Q::zero();
        for t in &cands {
            let hv = &a * t + &c;
            if !hv.is_positive() {
                continue;
            }
            let gv = g_at(t);
            if !gv.is_positive() {
                return None;
            }
            best = best.max(hv / gv);
        }
        if hi.is_none() && a.is_positive() {
            let top = pieces.iter().map(|(s, _)| s.clone()).max().unwrap_or_else(Q::zero);
            if !top.is_positive() {
                return None;
            }
            best = best.max(&a / top);
        }
        Some(best)
    }
}

fn exponent_for(ratio: &Q) -> u64 {
    ceil_q(ratio).to_u64().unwrap_or(u64::MAX).max(1)
}

fn require_plane(c: &CurveComplex, what: &str) -> Result<()> {
    if c.nvars() < 2 {
        return Err(Error::Precondition(format!("{what} needs at least two coordinates; use the one-variable charts")));
    }
    Ok(())
}

/// A function with slope one along the terminal part `e_x` of a ray beyond
/// the base point `x` (at lattice distance 1 from the ray's vertex), zero on
/// the rest of the complex and nonnegative everywhere.
pub fn ray_bump(c: &CurveComplex, ray: usize) -> Result<Chart> {
    require_plane(c, "ray_bump")?;
    if !crate::curves::check_ray_directions(c).is_empty() {
        return Err(Error::Precondition("two rays share a primitive direction".into()));
    }
    let e = c.edge(EdgeRef::Ray(ray))?;
    let x = e.point(&Q::one());
    let bump = Bump::new(x.clone(), e.dir.clone())?;
    let mut worst = Q::zero();
    for other in c.edges() {
        if other.edge == e.edge {
            continue;
        }
        let r = bump.sup_ratio(&other).ok_or_else(|| {
            Error::Inconclusive(format!("edge {:?} approaches the ray beyond its base point", other.edge))
        })?;
        worst = worst.max(r);
    }
    Ok(Chart { f: bump.clipped(exponent_for(&worst)), base_point: x, construction: Construction::RayBump, warnings: vec![] })
}

/// A tent on a segment `e` of lattice length `l`: 0 at the midpoint, slope
/// ±1 on the two halves and `−l/2` on the rest of the complex.
pub fn segment_tent(c: &CurveComplex, segment: usize) -> Result<Chart> {
    let e = c.edge(EdgeRef::Segment(segment))?;
    let len = e.len.clone().expect("segments are bounded");
    let half = &len / q(2);
    let mid = e.point(&half);
    let n = c.nvars();
    if n == 1 {
        let a = abs_distance_1d(&mid[0]);
        let num = TropicalPoly::zero_const(1).add(&a.shift(&-half.clone(), &[0])).expect("same nvars");
        let f = TropicalRational::new(num, a).expect("finite");
        return Ok(Chart { f, base_point: mid, construction: Construction::SegmentTent, warnings: vec![] });
    }
    let y = e.point(&len);
    let bx = Bump::new(e.start.clone(), e.dir.clone())?;
    let by = Bump::new(y, e.dir.iter().map(|d| -d).collect())?;
    let (mut kx, mut ky) = (Q::zero(), Q::zero());
    for other in c.edges() {
        if other.edge == e.edge {
            continue;
        }
        match (bx.sup_ratio(&other), by.sup_ratio(&other)) {
            (Some(r), _) => kx = kx.max(r),
            (None, Some(r)) => ky = ky.max(r),
            (None, None) => {
                return Err(Error::Inconclusive(format!("edge {:?} cannot be separated from the segment", other.edge)))
            }
        }
    }
    let fx = bx.clipped(exponent_for(&kx));
    let fy = by.clipped(exponent_for(&ky));
    let lower = TropicalRational::constant(n, -half.clone());
    let f = fx.inv()?.add(&fy.inv()?)?.inv()?.add_constant(&-half).add(&lower)?.simplify();
    Ok(Chart { f, base_point: mid, construction: Construction::SegmentTent, warnings: vec![] })
}

/// `|X − z|` in one variable, as `(−z)⊙X ⊕ z⊙X^{−1}`.
fn abs_distance_1d(z: &Q) -> TropicalPoly {
    let mut a = TropicalPoly::monomial(-z.clone(), vec![1]);
    a.insert(vec![-1], z.clone());
    a
}

/// The default arm length at a vertex: half the shortest incident segment,
/// at most 1.
pub fn default_epsilon(c: &CurveComplex, vertex: usize) -> Q {
    c.incident(vertex)
        .iter()
        .filter_map(|e| e.len.clone())
        .map(|l| l / q(2))
        .fold(Q::one(), |acc, l| acc.min(l))
}

/// A function equal to 0 at the vertex, with slope one toward it on each
/// incident arm of lattice length `eps`, and `−eps` on the rest of the
/// complex.
pub fn vertex_star(c: &CurveComplex, vertex: usize, eps: &Q) -> Result<Chart> {
    let v = c
        .vertices()
        .get(vertex)
        .ok_or_else(|| Error::Precondition(format!("no vertex {vertex}")))?
        .clone();
    if !eps.is_positive() {
        return Err(Error::Precondition("eps must be positive".into()));
    }
    let arms = c.incident(vertex);
    for a in &arms {
        if a.len.as_ref().is_some_and(|l| eps >= l) {
            return Err(Error::Precondition(format!("eps is not shorter than edge {:?}", a.edge)));
        }
    }
    let n = c.nvars();
    let chart = |f: TropicalRational, warnings: Vec<String>| Chart {
        f,
        base_point: v.clone(),
        construction: Construction::VertexStar,
        warnings,
    };
    if arms.is_empty() {
        return Ok(chart(TropicalRational::zero_const(n), vec!["isolated vertex: returning the constant 0".into()]));
    }
    let floor = TropicalRational::constant(n, -eps.clone());
    if n == 1 {
        let f = if arms.len() == 2 {
            let a = abs_distance_1d(&v[0]);
            let num = TropicalPoly::zero_const(1).add(&a.shift(&-eps.clone(), &[0]))?;
            TropicalRational::new(num, a)?
        } else {
            leaf_1d(c, &v[0], &arms[0], eps)?
        };
        return Ok(chart(f, vec![]));
    }

    let bumps: Vec<Bump> = arms.iter().map(|a| Bump::new(v.clone(), a.dir.clone())).collect::<Result<_>>()?;
    let mut p: Option<TropicalRational> = None;
    for (i, b) in bumps.iter().enumerate() {
        let mut worst = Q::zero();
        for (j, a) in arms.iter().enumerate() {
            if i == j {
                continue;
            }
            let along = q(dot(&b.lp, &a.dir)) - Q::one();
            let gv = b.g_forms.iter().map(|(pf, _)| q(dot(pf, &a.dir))).max().unwrap_or_else(Q::zero);
            if gv.is_positive() {
                worst = worst.max(along / gv);
            }
        }
        let core = b.core(exponent_for(&worst));
        p = Some(match p {
            None => core,
            Some(acc) => acc.add(&core)?.simplify(),
        });
    }
    let mut f_inner = p.expect("at least one arm");

    let far: Vec<EdgeGeom> = c
        .edges()
        .into_iter()
        .filter(|e| !c.endpoints(e.edge).contains(&vertex))
        .collect();
    if !far.is_empty() {
        let mut gap: Option<Q> = None;
        for b in &bumps {
            for e in &far {
                let m = arm_gap_min(b, eps, e);
                gap = Some(gap.map_or(m.clone(), |g| g.min(m)));
            }
        }
        let gap = gap.expect("nonempty");
        if !gap.is_positive() {
            return Err(Error::Inconclusive("an arm touches a non-incident edge".into()));
        }
        let k = exponent_for(&(eps / gap));
        let mut d: Option<TropicalRational> = None;
        for b in &bumps {
            let di = TropicalRational::from_poly(arm_gauge(b, eps));
            d = Some(match d {
                None => di.inv()?,
                Some(acc) => acc.add(&di.inv()?)?.simplify(),
            });
        }
        let d = d.expect("nonempty").inv()?.pow(k as i64)?;
        f_inner = f_inner.add(&d)?.simplify();
    }
    let f = f_inner.inv()?.add(&floor)?.simplify();
    Ok(chart(f, vec![]))
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `max(g, −h, h − eps)`, which is `≥ 0` and vanishes exactly on the arm
/// `{apex + t·l : 0 ≤ t ≤ eps}`.
fn arm_gauge(b: &Bump, eps: &Q) -> TropicalPoly {
    let mut d = b.g_poly();
    let h0 = -dot_iq(&b.lp, &b.apex);
    d.insert(b.lp.iter().map(|x| -x).collect(), -h0.clone());
    d.insert(b.lp.clone(), h0 - eps);
    d
}

/// Minimum of [`arm_gauge`] over an edge, by LP in `(τ, w)`.
fn arm_gap_min(b: &Bump, eps: &Q, e: &EdgeGeom) -> Q {
    let mut forms: Vec<(Vec<i64>, Q)> = b.g_forms.clone();
    let h0 = -dot_iq(&b.lp, &b.apex);
    forms.push((b.lp.iter().map(|x| -x).collect(), -h0.clone()));
    forms.push((b.lp.clone(), h0 - eps));
    let mut lp = Constraints::new(2);
    for (p, c0) in &forms {
        // p·(start + τ dir) + c0 ≤ w
        lp.le(vec![q(dot(p, &e.dir)), q(-1)], -(dot_iq(p, &e.start) + c0));
    }
    lp.ge(vec![q(1), Q::zero()], Q::zero());
    if let Some(l) = &e.len {
        lp.le(vec![q(1), Q::zero()], l.clone());
    }
    lp.minimize(&[Q::zero(), q(1)]).optimal().map(|(_, v)| v).unwrap_or_else(Q::zero)
}

/// One-variable leaf: tries `max(X − x, −eps)` and `max(x − X, −eps)` and keeps
/// the one that is `−eps` beyond the arm.
fn leaf_1d(c: &CurveComplex, x: &Q, arm: &EdgeGeom, eps: &Q) -> Result<TropicalRational> {
    let rising = TropicalPoly::monomial(-x.clone(), vec![1]).add(&TropicalPoly::constant(1, -eps.clone()))?;
    let falling = TropicalPoly::monomial(x.clone(), vec![-1]).add(&TropicalPoly::constant(1, -eps.clone()))?;
    let mut probes = vec![arm.point(eps), arm.point(&(eps * q(2)))];
    if let Some(l) = &arm.len {
        probes.push(arm.point(l));
    }
    for e in c.edges() {
        probes.push(e.start.clone());
    }
    probes.retain(|p| &p[0] != x);
    let target = crate::scalar::ExtendedRational::Finite(-eps.clone());
    for cand in [rising, falling] {
        if probes.iter().all(|p| cand.eval_unchecked(p) == target) {
            return Ok(TropicalRational::from_poly(cand));
        }
    }
    Err(Error::Inconclusive("neither one-variable leaf formula is constant off the arm".into()))
}
