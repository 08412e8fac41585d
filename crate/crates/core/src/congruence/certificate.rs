use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::congruence::{combine_unchecked, halfspace_generator, union_generator, CombineMode};
use crate::error::{check_dim, Result};
use crate::polyhedra::{distance_constant, nearest_point, union_dist_sq, ConeV, HalfSpace, PolyhedralUnion, Polyhedron};
use crate::sampling::{indexed_rng, random_point};
use crate::scalar::{ceil_q, q, q_to_f64, Q};
use crate::tropical::TropicalRational;

/// Pieces with more half-spaces than this get an unverified `k′`.
const MAX_FACE_SEARCH_HALFSPACES: usize = 12;

/// Box radius and denominator bound for verification samples.
const SAMPLE_RADIUS: i64 = 10;
const SAMPLE_MAX_DEN: i64 = 8;

/// Stream offset separating off-variety samples from on-variety samples.
const OFF_STREAM: u64 = 1 << 32;

/// The distance exponent `k′` with `k′·f(x) ≥ dist(x, V)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KPrime {
    Verified(u64),
    /// The exact computation was skipped; only sampling evidence is available.
    Unverified,
}

/// One step of the generator construction, in order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "kebab-case")]
pub enum ConstructionStep {
    WholeSpace,
    Empty,
    PrunedEmptyPiece { piece: usize },
    Halfspace { piece: usize, index: usize },
    Intersection { piece: usize, count: usize },
    Union { count: usize },
}

/// A synthesized generator `f` of the congruence of `variety`.
///
/// When `improper` is set the variety is empty and the generating pair is
/// `(f, −∞)` with `f = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorCertificate {
    pub f: TropicalRational,
    pub variety: PolyhedralUnion,
    pub k_prime: KPrime,
    pub log: Vec<ConstructionStep>,
    pub improper: bool,
}

/// Builds `f` as the minimum over pieces of the `⊕` of the half-space
/// generators of each piece.
pub fn synthesize_generator(v: &PolyhedralUnion) -> Result<GeneratorCertificate> {
    let n = v.nvars();
    let mut log = Vec::new();
    let mut pieces = Vec::new();
    for (i, p) in v.pieces().iter().enumerate() {
        check_dim(n, p.nvars())?;
        if p.is_empty() {
            log.push(ConstructionStep::PrunedEmptyPiece { piece: i });
        } else {
            pieces.push((i, p.simplified()));
        }
    }
    let zero = TropicalRational::zero_const(n);
    if pieces.is_empty() {
        log.push(ConstructionStep::Empty);
        return Ok(GeneratorCertificate {
            f: zero,
            variety: PolyhedralUnion::empty(n),
            k_prime: KPrime::Verified(1),
            log,
            improper: true,
        });
    }
    if pieces.iter().any(|(_, p)| p.is_whole_space()) {
        log.push(ConstructionStep::WholeSpace);
        return Ok(GeneratorCertificate {
            f: zero,
            variety: PolyhedralUnion::whole_space(n),
            k_prime: KPrime::Verified(1),
            log,
            improper: false,
        });
    }
    let mut piece_fs = Vec::new();
    for (i, p) in &pieces {
        let gens: Vec<TropicalRational> = p.halfspaces().iter().map(halfspace_generator).collect();
        for index in 0..gens.len() {
            log.push(ConstructionStep::Halfspace { piece: *i, index });
        }
        if gens.len() > 1 {
            log.push(ConstructionStep::Intersection { piece: *i, count: gens.len() });
        }
        piece_fs.push(combine_unchecked(&gens, CombineMode::Sum)?.simplify());
    }
    let mut f = piece_fs[0].clone();
    for g in &piece_fs[1..] {
        f = union_generator(&f, g)?.simplify();
    }
    if piece_fs.len() > 1 {
        log.push(ConstructionStep::Union { count: piece_fs.len() });
    }
    let kept: Vec<Polyhedron> = pieces.into_iter().map(|(_, p)| p).collect();
    let k_prime = certificate_k_prime(&kept)?;
    Ok(GeneratorCertificate { f: f.simplify(), variety: PolyhedralUnion::new(n, kept)?, k_prime, log, improper: false })
}

/// `k′` for the generator of a union of nonempty pieces.
///
/// A point `x` off a piece decomposes as `w + y` with `y` in the cone of the
/// normals tight at `w`, so the distance constant of that cone bounds
/// `|y|` by the piece generator. The maximum runs over every set of
/// half-spaces that is simultaneously tight somewhere on the piece.
pub fn certificate_k_prime(pieces: &[Polyhedron]) -> Result<KPrime> {
    let mut memo: BTreeMap<Vec<Vec<i64>>, Q> = BTreeMap::new();
    let mut worst = q(1);
    for p in pieces {
        if p.halfspaces().len() > MAX_FACE_SEARCH_HALFSPACES {
            return Ok(KPrime::Unverified);
        }
        let mut stack: Vec<Vec<usize>> = (0..p.halfspaces().len()).map(|i| vec![i]).collect();
        while let Some(set) = stack.pop() {
            if face(p, &set)?.is_empty() {
                continue;
            }
            let mut normals: Vec<Vec<i64>> = set.iter().map(|&i| p.halfspaces()[i].normal().to_vec()).collect();
            normals.sort();
            normals.dedup();
            let k = match memo.get(&normals) {
                Some(k) => k.clone(),
                None => {
                    let k = distance_constant(&ConeV::new(p.nvars(), normals.clone())?)?;
                    memo.insert(normals, k.clone());
                    k
                }
            };
            if k > worst {
                worst = k;
            }
            let last = *set.last().expect("nonempty");
            for j in last + 1..p.halfspaces().len() {
                let mut next = set.clone();
                next.push(j);
                stack.push(next);
            }
        }
    }
    Ok(KPrime::Verified(ceil_q(&worst).to_u64().unwrap_or(u64::MAX)))
}

/// The piece with the half-spaces in `set` made tight.
fn face(p: &Polyhedron, set: &[usize]) -> Result<Polyhedron> {
    let mut f = p.clone();
    for &i in set {
        let h = &p.halfspaces()[i];
        f.push(HalfSpace::new(h.normal().iter().map(|x| -x).collect(), -h.offset().clone())?)?;
    }
    Ok(f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureKind {
    /// `f ≠ 0` at a point of the variety.
    NonzeroOnVariety,
    /// `f ≤ 0` at a point off the variety.
    NotPositiveOffVariety,
    /// `f < 0` somewhere.
    Negative,
    /// `k′·f(x) < dist(x, V)`.
    DistanceDomination,
    /// An improper certificate whose variety is not empty.
    ImproperNonempty,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub kind: FailureKind,
    pub point: Vec<Q>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub seed: u64,
    pub samples: usize,
    pub on_variety_points: usize,
    pub off_variety_points: usize,
    pub domination_checks: usize,
    /// Largest observed `dist(x, V) / f(x)`; approximate.
    pub max_distance_ratio: Option<f64>,
    pub failures: Vec<Failure>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks a certificate at the vertices of each piece, at `samples` points
/// projected onto the pieces and at `samples` points of a box.
pub fn verify_generator(cert: &GeneratorCertificate, samples: usize, seed: u64) -> Result<VerifyReport> {
    let n = cert.f.nvars();
    check_dim(n, cert.variety.nvars())?;
    let mut report = VerifyReport {
        seed,
        samples,
        on_variety_points: 0,
        off_variety_points: 0,
        domination_checks: 0,
        max_distance_ratio: None,
        failures: Vec::new(),
    };
    let pieces: Vec<&Polyhedron> = cert.variety.pieces().iter().filter(|p| !p.is_empty()).collect();
    if cert.improper {
        if let Some(p) = pieces.first() {
            report.failures.push(Failure {
                kind: FailureKind::ImproperNonempty,
                point: p.feasible_point().expect("nonempty piece"),
                detail: "improper certificate with a nonempty variety".into(),
            });
        }
        return Ok(report);
    }

    let check_on = |x: Vec<Q>, report: &mut VerifyReport| -> Result<()> {
        report.on_variety_points += 1;
        let v = cert.f.eval_finite(&x)?;
        if !v.is_zero() {
            report.failures.push(Failure {
                kind: FailureKind::NonzeroOnVariety,
                detail: format!("f = {v}"),
                point: x,
            });
        }
        Ok(())
    };

    for p in &pieces {
        for v in p.vertices() {
            check_on(v, &mut report)?;
        }
    }
    if !pieces.is_empty() {
        for i in 0..samples {
            let mut rng = indexed_rng(seed, i as u64);
            let x = random_point(&mut rng, n, SAMPLE_RADIUS, SAMPLE_MAX_DEN);
            let p = pieces[i % pieces.len()];
            let y = nearest_point(p, &x)?.expect("nonempty piece");
            check_on(y, &mut report)?;
        }
    }

    for i in 0..samples {
        let mut rng = indexed_rng(seed, OFF_STREAM + i as u64);
        let x = random_point(&mut rng, n, SAMPLE_RADIUS, SAMPLE_MAX_DEN);
        if cert.variety.contains(&x)? {
            check_on(x, &mut report)?;
            continue;
        }
        report.off_variety_points += 1;
        let v = cert.f.eval_finite(&x)?;
        if v.is_negative() {
            report.failures.push(Failure { kind: FailureKind::Negative, detail: format!("f = {v}"), point: x });
            continue;
        }
        if v.is_zero() {
            report.failures.push(Failure {
                kind: FailureKind::NotPositiveOffVariety,
                detail: "f = 0 off the variety".into(),
                point: x,
            });
            continue;
        }
        let d2 = union_dist_sq(&x, &cert.variety)?;
        let ratio = (q_to_f64(&d2).sqrt()) / q_to_f64(&v);
        report.max_distance_ratio = Some(report.max_distance_ratio.map_or(ratio, |r| r.max(ratio)));
        if let KPrime::Verified(k) = cert.k_prime {
            report.domination_checks += 1;
            let kf = q(k as i64) * &v;
            if &kf * &kf < d2 {
                report.failures.push(Failure {
                    kind: FailureKind::DistanceDomination,
                    detail: format!("k'·f = {kf}, dist² = {d2}"),
                    point: x,
                });
            }
        }
    }
    Ok(report)
}
