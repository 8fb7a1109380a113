//! The F_a side: standard fundamental domains, Klein-combination checking,
//! limit-set rendering, and numerical Yoccoz verification at repelling fixed
//! points of the limit-set branch.
//!
//! Everything here works in the CovJ coordinate system for membership tests:
//! the Cov fundamental domain Δ_Cov is the interior of the right branch of
//! the hyperbola x² - y²/3 = 1 (the curve Cov((-∞,-2])), and Δ_J is the
//! exterior of a circle through 1 and a. The parabolic point is P = 1
//! (CovJ) / 0 (Original).

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corr::{
    mating_fixed_points, mobius_j, phi_a, Cx, MatingCoords, MatingCorr, PointClass,
};
use crate::error::{Error, Result};
use crate::parallel::WorkerPool;
use crate::raster::{GridSpec, Raster};
use crate::sturmian::{low_fractions, yoccoz_disk, Disk, DiskVariant};
use crate::tol;

/// Chordal (spherical) distance between two points of the plane, with
/// non-finite values treated as the point at infinity.
pub fn chordal(a: Cx, b: Cx) -> f64 {
    match (a.is_finite(), b.is_finite()) {
        (true, true) => 2.0 * (a - b).norm() / ((1.0 + a.norm_sqr()) * (1.0 + b.norm_sqr())).sqrt(),
        (true, false) => 2.0 / (1.0 + a.norm_sqr()).sqrt(),
        (false, true) => 2.0 / (1.0 + b.norm_sqr()).sqrt(),
        (false, false) => 0.0,
    }
}

/// Is u in the open fundamental domain of Cov (CovJ coordinates)?
pub fn in_delta_cov(u: Cx) -> bool {
    u.is_finite() && u.re > 0.0 && u.re * u.re - u.im * u.im / 3.0 > 1.0
}

fn in_closed_delta_cov(u: Cx) -> bool {
    if !u.is_finite() {
        // The boundary curve closes up at infinity.
        return true;
    }
    u.re >= 0.0 && u.re * u.re - u.im * u.im / 3.0 >= 1.0
}

/// Standard fundamental domains for (Cov, J) at parameter a.
#[derive(Debug, Clone)]
pub struct FundamentalDomains {
    pub a: Cx,
    /// Polyline sample of Cov((-∞,-2]) in CovJ coordinates, lower arc in,
    /// upper arc out, meeting at P = 1.
    pub cov_boundary: Vec<Cx>,
    /// Circle through 1 and a; Δ_J is its exterior.
    pub j_circle: Disk,
    /// Direction (mod π) of the attracting-repelling axis at P.
    pub axis_angle: f64,
    /// Angles (degrees, mod 180) between the axis and each boundary tangent
    /// at P; transversality asks for both to be ≥ 10°.
    pub cov_axis_angle_deg: f64,
    pub j_axis_angle_deg: f64,
    /// Δ_Cov is the hyperbola interior; Δ_J is the circle exterior.
    pub cov_side_interior: bool,
    pub j_side_exterior: bool,
}

fn line_angle_diff_deg(t1: f64, t2: f64) -> f64 {
    let d = (t1 - t2).rem_euclid(PI);
    d.min(PI - d) * 180.0 / PI
}

/// Klein-disk precondition: |a - 4| ≤ 3 and a ≠ 1.
pub fn in_klein_disk(a: Cx) -> bool {
    (a - Cx::new(4.0, 0.0)).norm() <= 3.0 && a != Cx::new(1.0, 0.0)
}

impl FundamentalDomains {
    pub fn in_delta_j(&self, u: Cx) -> bool {
        if !u.is_finite() {
            return true;
        }
        (u - self.j_circle.center).norm() > self.j_circle.radius
    }

    pub fn transversal(&self) -> bool {
        self.cov_axis_angle_deg >= tol::TRANSVERSALITY_DEG
            && self.j_axis_angle_deg >= tol::TRANSVERSALITY_DEG
    }
}

/// Build the standard fundamental domains: the hyperbola-interior Δ_Cov and
/// the exterior Δ_J of the J-invariant circle through 1 and a whose tangent
/// at P matches the hyperbola's vertical tangent (center 1 + t with
/// t = |a-1|²/(2 Re(a-1))). For real a this is the circle with diameter
/// [1, a]. Its curvature fits inside the hyperbola vertex exactly when
/// t ≤ 3, which is the Klein disk |a-4| ≤ 3.
pub fn standard_domains(a: Cx) -> Result<FundamentalDomains> {
    if !in_klein_disk(a) {
        return Err(Error::OutsideDisk(a));
    }
    let t = (a - 1.0).norm_sqr() / (2.0 * (a.re - 1.0));
    standard_domains_with_circle(
        a,
        Disk {
            center: Cx::new(1.0 + t, 0.0),
            radius: t,
        },
    )
}

/// Same, with a caller-chosen J-invariant circle (must pass through 1 and a;
/// validity against the Klein property is klein_check's job).
pub fn standard_domains_with_circle(a: Cx, j_circle: Disk) -> Result<FundamentalDomains> {
    if !in_klein_disk(a) {
        return Err(Error::OutsideDisk(a));
    }
    for pt in [Cx::new(1.0, 0.0), a] {
        let gap = ((pt - j_circle.center).norm() - j_circle.radius).abs();
        if gap > 1e-9 * j_circle.radius.max(1.0) {
            return Err(Error::InvalidInput(format!(
                "J circle must pass through 1 and a (gap {gap:.3e} at {pt})"
            )));
        }
    }

    // Cov((-∞,-2]): w = (-t ± i sqrt(3t²-12))/2, the hyperbola branch
    // x² - y²/3 = 1, x ≥ 1. Sampled densely near the vertex, truncated at
    // |t| = 100.
    let t_max = 100.0f64;
    let n = 256usize;
    let ts: Vec<f64> = (0..=n)
        .map(|i| {
            let u = i as f64 / n as f64;
            -2.0 - ((t_max - 2.0 + 1.0).powf(u) - 1.0)
        })
        .collect();
    let arc = |sign: f64| {
        ts.iter()
            .map(move |&t| {
                let s = (3.0 * t * t - 12.0).max(0.0).sqrt();
                Cx::new(-t / 2.0, sign * s / 2.0)
            })
            .collect::<Vec<_>>()
    };
    let mut cov_boundary = arc(-1.0);
    cov_boundary.reverse();
    cov_boundary.extend(arc(1.0));

    // Attracting-repelling axis at P: the branch of F fixing 1 has the
    // expansion z + b(z-1)² + ... with b = 1/3 - 2/(a-1); the axis runs along
    // ±1/b.
    let b = Cx::new(1.0 / 3.0, 0.0) - Cx::new(2.0, 0.0) / (a - 1.0);
    let axis_angle = (-b.arg()).rem_euclid(PI);
    // Hyperbola vertex tangent is vertical; circle tangent at 1 is
    // perpendicular to the radius toward the center.
    let cov_tangent = PI / 2.0;
    let j_tangent = (j_circle.center - 1.0).arg() + PI / 2.0;

    Ok(FundamentalDomains {
        a,
        cov_boundary,
        j_circle,
        axis_angle,
        cov_axis_angle_deg: line_angle_diff_deg(cov_tangent, axis_angle),
        j_axis_angle_deg: line_angle_diff_deg(j_tangent, axis_angle),
        cov_side_interior: true,
        j_side_exterior: true,
    })
}

#[derive(Debug, Clone)]
pub struct KleinReport {
    pub samples: u32,
    pub covered_fraction: f64,
    pub max_uncovered_chordal: f64,
    pub pass: bool,
    /// Set when samples = 0 (vacuous pass).
    pub vacuous: bool,
}

/// Sample the sphere and report how much of it Δ_Cov ∪ Δ_J covers. Passes
/// iff every uncovered sample lies within 1e-3 (chordal) of P.
pub fn klein_check(domains: &FundamentalDomains, samples: u32) -> KleinReport {
    if samples == 0 {
        return KleinReport {
            samples,
            covered_fraction: 1.0,
            max_uncovered_chordal: 0.0,
            pass: true,
            vacuous: true,
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let p = Cx::new(1.0, 0.0);
    let mut covered = 0u32;
    let mut max_uncovered = 0.0f64;
    for _ in 0..samples {
        // Uniform point on the sphere via a normalized Gaussian triple,
        // mapped down by stereographic projection.
        let z = loop {
            let (x, y, w): (f64, f64, f64) = (
                standard_normal(&mut rng),
                standard_normal(&mut rng),
                standard_normal(&mut rng),
            );
            let n = (x * x + y * y + w * w).sqrt();
            if n < 1e-12 {
                continue;
            }
            let w = w / n;
            if (1.0 - w).abs() < 1e-12 {
                break Cx::new(f64::INFINITY, 0.0);
            }
            break Cx::new(x / n / (1.0 - w), y / n / (1.0 - w));
        };
        if in_delta_cov(z) || domains.in_delta_j(z) {
            covered += 1;
        } else {
            max_uncovered = max_uncovered.max(chordal(z, p));
        }
    }
    KleinReport {
        samples,
        covered_fraction: covered as f64 / samples as f64,
        max_uncovered_chordal: max_uncovered,
        pass: max_uncovered <= tol::KLEIN_UNCOVERED_MAX,
        vacuous: false,
    }
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; one draw per call keeps the stream layout simple.
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LimitLabel {
    LambdaMinus,
    LambdaPlus,
    Regular,
    Unknown,
}

impl LimitLabel {
    pub fn name(self) -> &'static str {
        match self {
            LimitLabel::LambdaMinus => "LambdaMinus",
            LimitLabel::LambdaPlus => "LambdaPlus",
            LimitLabel::Regular => "Regular",
            LimitLabel::Unknown => "Unknown",
        }
    }
}

/// Default palette for limit-set rasters.
pub fn limit_palette(label: LimitLabel) -> [u8; 3] {
    match label {
        LimitLabel::LambdaMinus => [0, 0, 0],
        LimitLabel::LambdaPlus => [200, 30, 30],
        LimitLabel::Regular => [255, 255, 255],
        LimitLabel::Unknown => [128, 128, 128],
    }
}

#[derive(Debug, Clone)]
pub struct LimitSetRaster {
    pub raster: Raster<LimitLabel>,
    /// Pixels reachable by both chains (near P), labeled LambdaMinus by the
    /// tie-break but flagged here.
    pub shared: Vec<bool>,
}

#[derive(Debug, Clone, Copy)]
pub struct LimitSetOptions {
    pub p_buffer: f64,
    pub node_budget: u64,
}

impl Default for LimitSetOptions {
    fn default() -> Self {
        Self {
            p_buffer: tol::NEAR_P_BUFFER,
            node_budget: tol::DEFAULT_NODE_BUDGET,
        }
    }
}

/// Value-only forward step of F_a in the given coordinates, with the
/// compactified continuations at poles (Original: F(-1) = {1};
/// CovJ: F(∞) = {(1+a)/2}).
fn forward_values(a: Cx, coords: MatingCoords, z: Cx) -> [Cx; 2] {
    match coords {
        MatingCoords::Original => {
            let u = if z.is_finite() {
                if z == Cx::new(-1.0, 0.0) {
                    return [Cx::new(1.0, 0.0); 2];
                }
                phi_a(a, z)
            } else {
                a
            };
            let s = (Cx::new(12.0, 0.0) - 3.0 * u * u).sqrt();
            let v0 = (-u + s) / 2.0;
            let v1 = (-u - s) / 2.0;
            [(v0 - 1.0) / (v0 - a), (v1 - 1.0) / (v1 - a)]
        }
        MatingCoords::CovJ => {
            if !z.is_finite() {
                return [(a + 1.0) / 2.0; 2];
            }
            let s = (Cx::new(12.0, 0.0) - 3.0 * z * z).sqrt();
            [mobius_j(a, (-z + s) / 2.0), mobius_j(a, (-z - s) / 2.0)]
        }
    }
}

/// Value-only backward step (F⁻¹ = Cov ∘ J in CovJ coordinates).
fn backward_values(a: Cx, coords: MatingCoords, w: Cx) -> [Cx; 2] {
    match coords {
        MatingCoords::Original => {
            let v = if w.is_finite() {
                if w == Cx::new(1.0, 0.0) {
                    return [Cx::new(-1.0, 0.0); 2];
                }
                (a * w - 1.0) / (w - 1.0)
            } else {
                a
            };
            let s = (Cx::new(12.0, 0.0) - 3.0 * v * v).sqrt();
            let u0 = (-v + s) / 2.0;
            let u1 = (-v - s) / 2.0;
            [(u0 - 1.0) / (a - u0), (u1 - 1.0) / (a - u1)]
        }
        MatingCoords::CovJ => {
            let y = mobius_j(a, w);
            if !y.is_finite() {
                return [Cx::new(f64::INFINITY, 0.0); 2];
            }
            let s = (Cx::new(12.0, 0.0) - 3.0 * y * y).sqrt();
            [(-y + s) / 2.0, (-y - s) / 2.0]
        }
    }
}

struct ChainCtx {
    a: Cx,
    coords: MatingCoords,
    opts: LimitSetOptions,
}

impl ChainCtx {
    fn to_covj(&self, z: Cx) -> Cx {
        match self.coords {
            MatingCoords::CovJ => z,
            MatingCoords::Original => {
                if !z.is_finite() {
                    return self.a;
                }
                if z == Cx::new(-1.0, 0.0) {
                    return Cx::new(f64::INFINITY, 0.0);
                }
                phi_a(self.a, z)
            }
        }
    }

    fn near_p(&self, u: Cx) -> bool {
        u.is_finite() && (u - Cx::new(1.0, 0.0)).norm() <= self.opts.p_buffer
    }

    /// Λ₋ chains must stay in Ĉ ∖ Δ_Cov (plus the parabolic buffer).
    fn allowed_minus(&self, z: Cx) -> bool {
        let u = self.to_covj(z);
        self.near_p(u) || !in_delta_cov(u)
    }

    /// Λ₊ chains must stay in the closure of the forward-invariant Δ_Cov
    /// (plus the buffer).
    fn allowed_plus(&self, z: Cx) -> bool {
        let u = self.to_covj(z);
        self.near_p(u) || in_closed_delta_cov(u)
    }

    /// Does some depth-`depth` chain survive the membership predicate?
    /// None when the node budget runs out before resolution.
    fn chain_survives(&self, z: Cx, depth: u32, forward: bool) -> Option<bool> {
        let allowed = |pt: Cx| {
            if forward {
                self.allowed_minus(pt)
            } else {
                self.allowed_plus(pt)
            }
        };
        if !allowed(z) {
            return Some(false);
        }
        let mut nodes: u64 = 0;
        // DFS over (point, remaining-depth).
        let mut stack: Vec<(Cx, u32)> = vec![(z, depth)];
        while let Some((pt, left)) = stack.pop() {
            if left == 0 {
                return Some(true);
            }
            nodes += 1;
            if nodes >= self.opts.node_budget {
                return None;
            }
            let children = if forward {
                forward_values(self.a, self.coords, pt)
            } else {
                backward_values(self.a, self.coords, pt)
            };
            let coincident = (children[0] - children[1]).norm() <= tol::POINT_DEDUP;
            for (i, child) in children.into_iter().enumerate() {
                if i == 1 && coincident {
                    continue;
                }
                if allowed(child) {
                    stack.push((child, left - 1));
                }
            }
        }
        Some(false)
    }
}

/// Render the limit sets Λ_{a,±} over a pixel grid: a pixel is LambdaPlus if
/// a depth-limited backward chain stays in the closure of the
/// forward-invariant Δ_Cov, LambdaMinus if a forward chain stays outside
/// Δ_Cov; both chains landing marks the pixel shared (tie-break label
/// LambdaMinus).
pub fn render_limit_sets(
    a: Cx,
    grid: &GridSpec,
    depth: u32,
    coords: MatingCoords,
    opts: LimitSetOptions,
    pool: &WorkerPool,
) -> Result<LimitSetRaster> {
    if !in_klein_disk(a) {
        return Err(Error::OutsideDisk(a));
    }
    let ctx = ChainCtx { a, coords, opts };
    let mut cells = vec![(LimitLabel::Unknown, false); grid.len()];
    pool.fill_rows(&mut cells, grid.px as usize, |x, y| {
        let z = grid.point(x as u32, y as u32);
        let minus = ctx.chain_survives(z, depth, true);
        let plus = ctx.chain_survives(z, depth, false);
        match (minus, plus) {
            (Some(true), Some(true)) => (LimitLabel::LambdaMinus, true),
            (Some(true), _) => (LimitLabel::LambdaMinus, false),
            (_, Some(true)) => (LimitLabel::LambdaPlus, false),
            (Some(false), Some(false)) => (LimitLabel::Regular, false),
            _ => (LimitLabel::Unknown, false),
        }
    });
    let labels = cells.iter().map(|(l, _)| *l).collect();
    let shared = cells.iter().map(|(_, s)| *s).collect();
    Ok(LimitSetRaster {
        raster: Raster { grid: *grid, labels },
        shared,
    })
}

/// Membership test for a single point (used by yoccoz_verify's Λ₋-side
/// filter and by tests).
pub fn on_lambda_minus_side(a: Cx, z_original: Cx) -> bool {
    let u = if z_original == Cx::new(-1.0, 0.0) {
        Cx::new(f64::INFINITY, 0.0)
    } else {
        phi_a(a, z_original)
    };
    !in_delta_cov(u)
}

/// One fixed point's Yoccoz record.
#[derive(Debug, Clone)]
pub struct YoccozCheck {
    /// Fixed point in Original coordinates.
    pub fixed_point: Cx,
    pub multiplier: Cx,
    /// The log branch that landed in a disk (or the principal branch when
    /// none did).
    pub tau: Cx,
    /// (p, q) pairs whose disk contains some branch of log λ, with margins
    /// Re τ/|τ - 2πiθ|² - M ≥ 0.
    pub admissible: Vec<(u64, u64, f64, Cx)>,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct YoccozReport {
    pub checks: Vec<YoccozCheck>,
    /// No repelling fixed point on the Λ₋ side: reported, not fatal.
    pub no_repelling: bool,
}

/// Scan all branches τ = Log λ + 2πik, |k| ≤ q_max, against every disk of
/// the mating family with q ≤ q_max (both sides of 1/2).
pub fn disk_scan(multiplier: Cx, q_max: u64) -> (Vec<(u64, u64, f64, Cx)>, Cx) {
    let principal = multiplier.ln();
    let mut admissible = Vec::new();
    let mut landed_tau = principal;
    let mut fractions: Vec<(u64, u64)> = Vec::new();
    for q in 2..=q_max {
        for p in 1..q {
            if num_gcd(p, q) == 1 {
                fractions.push((p, q));
            }
        }
    }
    for (p, q) in fractions {
        let disk = yoccoz_disk(p, q, DiskVariant::Mating).expect("coprime by construction");
        let slope = 1.0 / (2.0 * disk.radius);
        let theta = Cx::new(0.0, std::f64::consts::TAU * p as f64 / q as f64);
        let mut best: Option<(f64, Cx)> = None;
        for k in -(q_max as i64)..=(q_max as i64) {
            let tau = principal + Cx::new(0.0, std::f64::consts::TAU * k as f64);
            if disk.contains(tau) {
                let margin = tau.re / (tau - theta).norm_sqr() - slope;
                if best.is_none_or(|(m, _)| margin > m) {
                    best = Some((margin, tau));
                }
            }
        }
        if let Some((margin, tau)) = best {
            if admissible.is_empty() {
                landed_tau = tau;
            }
            admissible.push((p, q, margin, tau));
        }
    }
    (admissible, landed_tau)
}

fn num_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

/// Verify the Yoccoz inequality for every repelling fixed point of the
/// limit-set branch f_a (the single-valued restriction of F_a to Λ₋),
/// excluding the parabolic point P. Fixed points on the Λ₊ side carry the
/// reciprocal multiplier and no landing geodesic cycle, so they are out of
/// the inequality's scope and are filtered by the Δ_Cov side test.
pub fn yoccoz_verify(a: Cx, q_max: u64) -> Result<YoccozReport> {
    if !in_klein_disk(a) {
        return Err(Error::OutsideDisk(a));
    }
    let corr = MatingCorr::new(a, MatingCoords::Original)?;
    let fps = mating_fixed_points(&corr)?;
    let mut checks = Vec::new();
    for fp in fps {
        if fp.point.norm() <= 1e-12 {
            continue; // P
        }
        if fp.class != PointClass::Repelling {
            continue;
        }
        if !on_lambda_minus_side(a, fp.point) {
            continue;
        }
        let (admissible, tau) = disk_scan(fp.multiplier, q_max);
        let pass = !admissible.is_empty();
        checks.push(YoccozCheck {
            fixed_point: fp.point,
            multiplier: fp.multiplier,
            tau,
            admissible,
            pass,
        });
    }
    let no_repelling = checks.is_empty();
    Ok(YoccozReport { checks, no_repelling })
}

/// CSV of Yoccoz records: `re_fp,im_fp,re_tau,im_tau,p,q,margin`, one row per
/// admissible disk.
pub fn yoccoz_csv(report: &YoccozReport) -> String {
    let mut s = String::from("re_fp,im_fp,re_tau,im_tau,p,q,margin\n");
    for check in &report.checks {
        for (p, q, margin, tau) in &check.admissible {
            s.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{p},{q},{:.16e}\n",
                check.fixed_point.re, check.fixed_point.im, tau.re, tau.im, margin
            ));
        }
    }
    s
}

/// The admissible-fraction view used to test Fig-1 style statements:
/// all fractions considered by the scan.
pub fn scan_fractions(q_max: u64) -> Vec<(u64, u64)> {
    let mut fr = low_fractions(q_max);
    for q in 2..=q_max {
        for p in (q / 2 + 1)..q {
            if num_gcd(p, q) == 1 {
                fr.push((p, q));
            }
        }
    }
    fr
}
