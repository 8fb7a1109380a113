//! The analytic toolkit near c = 0: CIFS construction on a disk avoiding the
//! critical point, Hutchinson iteration of the attractor, the Moran-type
//! Hausdorff-dimension upper bound, and branched-motion sampling through
//! periodic-point continuation.

use std::f64::consts::TAU;

use crate::corr::{continue_periodic_point, power_forward, Cx, PowerCorr, RationalExp};
use crate::error::{Error, Result};
use crate::sturmian::Disk;
use crate::tol;

/// A validated CIFS: the outer disk D (centered at 0), the image disk
/// D1 = disk(c, ρ^β) ⊃ f_c(D) compactly inside D and avoiding 0, and the
/// uniform contraction bound r = β·(sup_{z∈D1}|z|)^(β-1) < 1 shared by all
/// q forward branches.
#[derive(Debug, Clone, Copy)]
pub struct CifsData {
    pub outer: Disk,
    pub image: Disk,
    pub branch_count: u32,
    pub contraction: f64,
}

impl CifsData {
    fn validate(&self) -> Result<()> {
        let ok = self.image.center.norm() + self.image.radius < self.outer.radius - 1e-12
            && self.image.center.norm() - self.image.radius > 0.0
            && self.contraction > 0.0
            && self.contraction < 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput("CIFS invariants violated".into()))
        }
    }
}

/// Search a geometric grid of radii ρ (64 steps from 0.5·|c|^(1/β) to 1) for
/// the constraints ρ^β < |c| (D1 avoids 0) and |c| + ρ^β < ρ (compact
/// containment), maximizing the containment margin ρ - |c| - ρ^β.
pub fn build_cifs(exp: RationalExp, c: Cx) -> Result<CifsData> {
    let c_abs = c.norm();
    if c_abs == 0.0 {
        return Err(Error::NoValidRadius { c_abs });
    }
    let beta = exp.beta();
    let lo = 0.5 * c_abs.powf(1.0 / beta);
    let hi = 1.0f64;
    let mut best: Option<(f64, f64)> = None; // (margin, rho)
    if lo < hi {
        for i in 0..64 {
            let rho = lo * (hi / lo).powf(i as f64 / 63.0);
            let rho_beta = rho.powf(beta);
            let sup = c_abs + rho_beta;
            let r = beta * sup.powf(beta - 1.0);
            let feasible = rho_beta < c_abs && sup < rho && r < 1.0;
            if feasible {
                let margin = rho - sup;
                if best.is_none_or(|(m, _)| margin > m) {
                    best = Some((margin, rho));
                }
            }
        }
    }
    let (_, rho) = best.ok_or(Error::NoValidRadius { c_abs })?;
    let rho_beta = rho.powf(beta);
    let sup = c_abs + rho_beta;
    let data = CifsData {
        outer: Disk { center: Cx::new(0.0, 0.0), radius: rho },
        image: Disk { center: c, radius: rho_beta },
        branch_count: exp.q(),
        contraction: beta * sup.powf(beta - 1.0),
    };
    data.validate()?;
    Ok(data)
}

/// One generation of Hutchinson points.
#[derive(Debug, Clone)]
pub struct AttractorSample {
    pub points: Vec<Cx>,
    pub generation: u32,
}

fn dedup_points(points: &mut Vec<Cx>) {
    points.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    points.dedup_by(|a, b| (*a - *b).norm() <= tol::POINT_DEDUP);
}

/// Iterate the Hutchinson operator H(A) = ⋃_j f_j(A) of the q forward
/// branches restricted to D1. All q branches share the modulus bound, so
/// every image must remain in D1; a violation signals invalid CifsData.
pub fn hutchinson_iterate(
    cifs: &CifsData,
    corr: &PowerCorr,
    seed: Cx,
    generations: u32,
) -> Result<AttractorSample> {
    if !cifs.image.contains(seed) {
        return Err(Error::InvalidInput(format!("seed {seed} is not in D1")));
    }
    let mut points = vec![seed];
    for _ in 0..generations {
        let mut next = Vec::with_capacity(points.len() * cifs.branch_count as usize);
        for &z in &points {
            let set = power_forward(corr, z);
            // Uniform branch-derivative modulus across branches is exact by
            // construction; assert the relative spread stays within 1e-12.
            let mods: Vec<f64> = set
                .branches
                .iter()
                .filter_map(|b| b.derivative.map(|d| d.norm()))
                .collect();
            if let (Some(min), Some(max)) = (
                mods.iter().copied().reduce(f64::min),
                mods.iter().copied().reduce(f64::max),
            ) {
                debug_assert!(max - min <= tol::MODULUS_SYMMETRY * max.max(1.0));
            }
            for w in set.values() {
                if !cifs.image.contains(w) {
                    return Err(Error::EscapedD1);
                }
                next.push(w);
            }
        }
        dedup_points(&mut next);
        points = next;
    }
    Ok(AttractorSample { points, generation: generations })
}

fn hull_diameter(points: &[Cx]) -> f64 {
    let mut d = 0.0f64;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            d = d.max((points[i] - points[j]).norm());
        }
    }
    d
}

/// Sample of the dual Julia set (closure of the finite attracting cycles):
/// Hutchinson iteration until the hull diameter stabilizes within
/// `tolerance`. Returns {0} at c = 0.
pub fn dual_julia_points(exp: RationalExp, c: Cx, tolerance: f64) -> Result<Vec<Cx>> {
    if c.norm() == 0.0 {
        return Ok(vec![Cx::new(0.0, 0.0)]);
    }
    let cifs = build_cifs(exp, c)?;
    let corr = PowerCorr { exp, c };
    let mut prev = 0.0f64;
    let mut sample = AttractorSample { points: vec![c], generation: 0 };
    for g in 1..=14 {
        sample = hutchinson_iterate(&cifs, &corr, c, g)?;
        let d = hull_diameter(&sample.points);
        if g > 2 && (d - prev).abs() < tolerance {
            break;
        }
        prev = d;
        if sample.points.len() > 100_000 {
            break;
        }
    }
    Ok(sample.points)
}

/// Moran-type upper bound s* = log(q)/log(1/r) solving q·r^s = 1: an upper
/// bound for the Hausdorff dimension of the attractor since all q branches
/// share the contraction bound r. Degenerate data (r → 1) is reported as-is,
/// never clamped.
pub fn hausdorff_upper_bound(cifs: &CifsData) -> f64 {
    (cifs.branch_count as f64).ln() / (1.0 / cifs.contraction).ln()
}

/// One tracked periodic point of the branched motion.
#[derive(Debug, Clone)]
pub struct MotionTrack {
    pub seed_id: usize,
    pub base_point: Cx,
    pub itinerary: Vec<usize>,
    /// Point at each path node; shorter than the path if continuation failed.
    pub points: Vec<Cx>,
    pub failure: Option<String>,
}

/// A collision between tracked points (a branch point of the motion).
#[derive(Debug, Clone, Copy)]
pub struct MotionCollision {
    pub node: usize,
    pub seed_a: usize,
    pub seed_b: usize,
    pub distance: f64,
}

#[derive(Debug, Clone)]
pub struct MotionSample {
    pub base_points: Vec<Cx>,
    pub tracks: Vec<MotionTrack>,
    pub collisions: Vec<MotionCollision>,
}

/// Periodic points of the correspondence at c = 0 lie on the unit circle:
/// the n-step relation is w^(q^n) = z^(p^n), so n-periodic points are the
/// (p^n - q^n)-th roots of unity. Returns (point, minimal period n).
fn unit_circle_periodic_points(exp: RationalExp, n_points: usize, period_max: u32) -> Vec<(Cx, u32)> {
    let p = exp.p() as u64;
    let q = exp.q() as u64;
    let mut out: Vec<(Cx, u32)> = Vec::new();
    let mut seen_orders: Vec<(u64, u64)> = Vec::new(); // (num, den) of angle
    for n in 1..=period_max {
        let count = p.pow(n) - q.pow(n);
        for j in 0..count {
            if out.len() >= n_points {
                return out;
            }
            // Minimal period: j/(p^n - q^n) must not reduce to a shorter
            // period m, i.e. (p^m - q^m)·j ≢ 0 mod (p^n - q^n).
            let minimal = (1..n).all(|m| {
                let cm = p.pow(m) - q.pow(m);
                !(cm as u128 * j as u128).is_multiple_of(count as u128)
            });
            if !minimal {
                continue;
            }
            // Skip duplicates of the same angle from earlier periods.
            let g = gcd_u64(j, count);
            let key = (j / g, count / g);
            if seen_orders.contains(&key) {
                continue;
            }
            seen_orders.push(key);
            let z = Cx::from_polar(1.0, TAU * j as f64 / count as f64);
            out.push((z, n));
        }
    }
    out
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd_u64(b, a % b)
    }
}

/// Find a closed branch itinerary of length `period` for a periodic point at
/// c = 0 by depth-first search over branch choices.
fn closed_itinerary(exp: RationalExp, z: Cx, period: u32) -> Option<Vec<usize>> {
    let corr = PowerCorr { exp, c: Cx::new(0.0, 0.0) };
    fn dfs(corr: &PowerCorr, origin: Cx, cur: Cx, left: u32, acc: &mut Vec<usize>) -> bool {
        if left == 0 {
            return (cur - origin).norm() <= 1e-9;
        }
        let set = power_forward(corr, cur);
        for (idx, b) in set.branches.iter().enumerate() {
            acc.push(idx);
            if dfs(corr, origin, b.value, left - 1, acc) {
                return true;
            }
            acc.pop();
        }
        false
    }
    let mut acc = Vec::with_capacity(period as usize);
    if dfs(&corr, z, z, period, &mut acc) {
        Some(acc)
    } else {
        None
    }
}

/// Sample the branched holomorphic motion: seed periodic points on
/// J_0 = S¹, continue each along `c_path` by Newton continuation, and record
/// collisions between tracks as branch points of the motion (reported, not
/// fatal).
pub fn branched_motion_sample(
    exp: RationalExp,
    c_path: &[Cx],
    n_points: usize,
    period_max: u32,
) -> Result<MotionSample> {
    if c_path.first() != Some(&Cx::new(0.0, 0.0)) {
        return Err(Error::InvalidInput("c_path must start at 0".into()));
    }
    if period_max > 12 {
        return Err(Error::InvalidInput("period_max is capped at 12".into()));
    }
    let seeds = unit_circle_periodic_points(exp, n_points, period_max);
    let mut tracks = Vec::with_capacity(seeds.len());
    let corr0 = PowerCorr { exp, c: Cx::new(0.0, 0.0) };
    for (seed_id, (z, period)) in seeds.iter().enumerate() {
        let Some(itinerary) = closed_itinerary(exp, *z, *period) else {
            tracks.push(MotionTrack {
                seed_id,
                base_point: *z,
                itinerary: Vec::new(),
                points: Vec::new(),
                failure: Some("no closed itinerary found".into()),
            });
            continue;
        };
        match continue_periodic_point(&corr0, *z, &itinerary, c_path) {
            Ok(points) => tracks.push(MotionTrack {
                seed_id,
                base_point: *z,
                itinerary,
                points,
                failure: None,
            }),
            Err(e) => tracks.push(MotionTrack {
                seed_id,
                base_point: *z,
                itinerary,
                points: Vec::new(),
                failure: Some(e.to_string()),
            }),
        }
    }

    // Cross-track collisions at each path node are motion branch points.
    let mut collisions = Vec::new();
    for node in 0..c_path.len() {
        for i in 0..tracks.len() {
            for j in (i + 1)..tracks.len() {
                if let (Some(a), Some(b)) = (tracks[i].points.get(node), tracks[j].points.get(node))
                {
                    let d = (a - b).norm();
                    if d < tol::COLLISION_DIST {
                        collisions.push(MotionCollision {
                            node,
                            seed_a: tracks[i].seed_id,
                            seed_b: tracks[j].seed_id,
                            distance: d,
                        });
                    }
                }
            }
        }
    }

    Ok(MotionSample {
        base_points: seeds.iter().map(|(z, _)| *z).collect(),
        tracks,
        collisions,
    })
}

/// CSV of motion tracks: `seed_id,step,re,im,branch_id` where branch_id
/// enumerates tracks sharing a base point.
pub fn motion_csv(sample: &MotionSample) -> String {
    let mut s = String::from("seed_id,step,re,im,branch_id\n");
    for track in &sample.tracks {
        let branch_id = sample
            .tracks
            .iter()
            .filter(|t| {
                t.seed_id < track.seed_id && (t.base_point - track.base_point).norm() <= tol::POINT_DEDUP
            })
            .count();
        for (step, z) in track.points.iter().enumerate() {
            s.push_str(&format!(
                "{},{step},{:.16e},{:.16e},{branch_id}\n",
                track.seed_id, z.re, z.im
            ));
        }
    }
    s
}

/// CSV of an attractor sample: `gen,re,im`.
pub fn attractor_csv(sample: &AttractorSample) -> String {
    let mut s = String::from("gen,re,im\n");
    for z in &sample.points {
        s.push_str(&format!("{},{:.16e},{:.16e}\n", sample.generation, z.re, z.im));
    }
    s
}

/// CSV dimension report: `beta_p,beta_q,c_re,c_im,rho,r,s_star`.
pub fn dimension_csv(exp: RationalExp, c: Cx, cifs: &CifsData) -> String {
    format!(
        "beta_p,beta_q,c_re,c_im,rho,r,s_star\n{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
        exp.p(),
        exp.q(),
        c.re,
        c.im,
        cifs.outer.radius,
        cifs.contraction,
        hausdorff_upper_bound(cifs)
    )
}
