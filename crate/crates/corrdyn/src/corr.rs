//! Exact branch algebra for both correspondence families: image sets with
//! per-branch derivatives, fixed points with multipliers, and Newton
//! continuation of periodic points along parameter paths.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::roots;
use crate::tol;

pub type Cx = Complex64;

/// Rational exponent β = p/q > 1, stored as given: `z^2 + c` and
/// `z^(4/2) + c` are different correspondences and must stay distinct.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalExp {
    p: u32,
    q: u32,
}

impl RationalExp {
    pub fn new(p: u32, q: u32) -> Result<Self> {
        if q < 1 || p <= q {
            return Err(Error::InvalidInput(format!(
                "exponent requires p > q >= 1, got p = {p}, q = {q}"
            )));
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn beta(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

/// The correspondence z -> w defined by (w - c)^q = z^p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerCorr {
    pub exp: RationalExp,
    pub c: Cx,
}

impl PowerCorr {
    pub fn new(p: u32, q: u32, c: Cx) -> Result<Self> {
        Ok(Self {
            exp: RationalExp::new(p, q)?,
            c,
        })
    }
}

/// Coordinate system for the mating family: the original variables of the
/// defining relation, or the conjugated `J ∘ Cov` form obtained through
/// φ_a(z) = (az+1)/(z+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatingCoords {
    Original,
    CovJ,
}

/// The (2:2) mating correspondence F_a, a ≠ 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatingCorr {
    pub a: Cx,
    pub coords: MatingCoords,
}

impl MatingCorr {
    pub fn new(a: Cx, coords: MatingCoords) -> Result<Self> {
        if a == Cx::new(1.0, 0.0) {
            return Err(Error::InvalidInput("mating parameter a must not be 1".into()));
        }
        Ok(Self { a, coords })
    }
}

/// One branch image: the value together with its derivative, or `None` at a
/// critical point where no univalent branch exists.
#[derive(Debug, Clone, Copy)]
pub struct Branch {
    pub value: Cx,
    pub derivative: Option<Cx>,
}

/// The finite image set of one point under a correspondence.
#[derive(Debug, Clone)]
pub struct BranchSet {
    pub source: Cx,
    pub branches: Vec<Branch>,
    /// Set when two branch images coincide (Cov discriminant ≈ 0); the spec
    /// leaves their order undefined there, so callers get a flag instead.
    pub branch_point: bool,
}

impl BranchSet {
    pub fn values(&self) -> impl Iterator<Item = Cx> + '_ {
        self.branches.iter().map(|b| b.value)
    }

    /// Branch whose value is closest to `target` (used to pick the branch
    /// that fixes a point).
    pub fn closest_to(&self, target: Cx) -> Option<&Branch> {
        self.branches
            .iter()
            .min_by(|a, b| (a.value - target).norm().total_cmp(&(b.value - target).norm()))
    }
}

/// Principal argument of z^n computed without forming z^n: wraps n·arg(z)
/// into (-π, π].
fn wrapped_arg_pow(z: Cx, n: u32) -> f64 {
    let raw = z.arg() * n as f64;
    let mut y = raw.rem_euclid(TAU);
    if y > PI {
        y -= TAU;
    }
    y
}

fn normalize_angle(t: f64) -> f64 {
    let y = t.rem_euclid(TAU);
    if y == TAU {
        0.0
    } else {
        y
    }
}

/// Forward images of z under (w-c)^q = z^p: the q values
/// `c + exp((Log(z^p) + 2πik)/q)`, sorted by the argument of w - c in
/// [0, 2π). The branch derivative is (p/q)(w - c)/z.
///
/// z = 0 maps to the single point {c} (the q-fold image collapsed), with no
/// univalent branch.
pub fn power_forward(corr: &PowerCorr, z: Cx) -> BranchSet {
    let (p, q) = (corr.exp.p(), corr.exp.q());
    if z == Cx::new(0.0, 0.0) {
        return BranchSet {
            source: z,
            branches: vec![Branch {
                value: corr.c,
                derivative: None,
            }],
            branch_point: false,
        };
    }
    let beta = corr.exp.beta();
    // |w - c| = |z|^(p/q), identical across branches by construction.
    let rho = (z.norm().ln() * beta).exp();
    let base = wrapped_arg_pow(z, p);
    let mut branches: Vec<(f64, Branch)> = (0..q)
        .map(|k| {
            let theta = (base + TAU * k as f64) / q as f64;
            let offset = Cx::from_polar(rho, theta);
            let value = corr.c + offset;
            let derivative = Some(offset / z * beta);
            (normalize_angle(theta), Branch { value, derivative })
        })
        .collect();
    branches.sort_by(|a, b| a.0.total_cmp(&b.0));
    BranchSet {
        source: z,
        branches: branches.into_iter().map(|(_, b)| b).collect(),
        branch_point: false,
    }
}

/// Backward images of w: the p solutions of z^p = (w-c)^q, sorted by the
/// argument of z in [0, 2π). w = c yields the singleton {0}.
pub fn power_backward(corr: &PowerCorr, w: Cx) -> BranchSet {
    let (p, q) = (corr.exp.p(), corr.exp.q());
    let d = w - corr.c;
    if d == Cx::new(0.0, 0.0) {
        return BranchSet {
            source: w,
            branches: vec![Branch {
                value: Cx::new(0.0, 0.0),
                derivative: None,
            }],
            branch_point: false,
        };
    }
    let rho = (d.norm().ln() * q as f64 / p as f64).exp();
    let base = wrapped_arg_pow(d, q);
    let mut branches: Vec<(f64, Branch)> = (0..p)
        .map(|j| {
            let theta = (base + TAU * j as f64) / p as f64;
            let value = Cx::from_polar(rho, theta);
            let derivative = Some(value / d * (q as f64 / p as f64));
            (normalize_angle(theta), Branch { value, derivative })
        })
        .collect();
    branches.sort_by(|a, b| a.0.total_cmp(&b.0));
    BranchSet {
        source: w,
        branches: branches.into_iter().map(|(_, b)| b).collect(),
        branch_point: false,
    }
}

/// φ_a(z) = (az + 1)/(z + 1), the change of coordinates conjugating the
/// original relation to J ∘ Cov.
pub fn phi_a(a: Cx, z: Cx) -> Cx {
    (a * z + 1.0) / (z + 1.0)
}

/// Inverse of φ_a.
pub fn phi_a_inv(a: Cx, u: Cx) -> Cx {
    (u - 1.0) / (a - u)
}

/// The unique Möbius involution fixing 1 and a:
/// J(ζ) = ((1+a)ζ - 2a)/(2ζ - (1+a)).
pub fn mobius_j(a: Cx, z: Cx) -> Cx {
    if !z.is_finite() {
        // J(∞) = (1+a)/2
        return (a + 1.0) / 2.0;
    }
    ((a + 1.0) * z - 2.0 * a) / (2.0 * z - (a + 1.0))
}

fn mobius_j_deriv(a: Cx, z: Cx) -> Cx {
    let am1 = a - 1.0;
    let den = 2.0 * z - (a + 1.0);
    -(am1 * am1) / (den * den)
}

/// The two solutions w of z² + zw + w² = 3 (the deleted covering
/// correspondence of z³) together with the discriminant 12 - 3z².
fn cov_images(z: Cx) -> ([Cx; 2], Cx) {
    let disc = Cx::new(12.0, 0.0) - 3.0 * z * z;
    let s = disc.sqrt();
    ([(-z + s) / 2.0, (-z - s) / 2.0], disc)
}

/// Derivative dw/dz on the curve z² + zw + w² = 3.
fn cov_deriv(z: Cx, w: Cx) -> Cx {
    -(2.0 * z + w) / (z + 2.0 * w)
}

fn is_branch_point(disc: Cx, scale: f64) -> bool {
    disc.norm() <= tol::BRANCH_POINT_REL * (12.0 + scale)
}

/// Forward images of z under F_a.
///
/// Original coordinates: u = φ_a(z), solve v² + uv + u² = 3, map back through
/// w = (v-1)/(v-a). z = -1 is the pole of u. CovJ coordinates: w = J(Cov(z)).
/// Derivatives come from implicit differentiation; at a branch point
/// (discriminant 12 - 3u² ≈ 0) the images coincide, the set is flagged, and
/// derivatives are withheld.
pub fn mating_forward(corr: &MatingCorr, z: Cx) -> Result<BranchSet> {
    let a = corr.a;
    match corr.coords {
        MatingCoords::Original => {
            if z == Cx::new(-1.0, 0.0) {
                return Err(Error::PoleInput(z));
            }
            let u = phi_a(a, z);
            let ([v0, v1], disc) = cov_images(u);
            let branch_point = is_branch_point(disc, 3.0 * u.norm_sqr());
            let zp1 = z + 1.0;
            let mk = |v: Cx| {
                let w = (v - 1.0) / (v - a);
                let derivative = if branch_point {
                    None
                } else {
                    let wm1 = w - 1.0;
                    Some((v + 2.0 * u) / (2.0 * v + u) * (wm1 * wm1) / (zp1 * zp1))
                };
                Branch { value: w, derivative }
            };
            Ok(BranchSet {
                source: z,
                branches: vec![mk(v0), mk(v1)],
                branch_point,
            })
        }
        MatingCoords::CovJ => {
            if !z.is_finite() {
                return Err(Error::PoleInput(z));
            }
            let ([w0, w1], disc) = cov_images(z);
            let branch_point = is_branch_point(disc, 3.0 * z.norm_sqr());
            let mk = |w: Cx| {
                let value = mobius_j(a, w);
                let derivative = if branch_point {
                    None
                } else {
                    Some(mobius_j_deriv(a, w) * cov_deriv(z, w))
                };
                Branch { value, derivative }
            };
            Ok(BranchSet {
                source: z,
                branches: vec![mk(w0), mk(w1)],
                branch_point,
            })
        }
    }
}

/// Backward images of w under F_a, by the symmetry of v² + uv + u² = 3 in
/// (u, v): compute v from w, solve for u, map back z = (u-1)/(a-u).
pub fn mating_backward(corr: &MatingCorr, w: Cx) -> Result<BranchSet> {
    let a = corr.a;
    match corr.coords {
        MatingCoords::Original => {
            if w == Cx::new(1.0, 0.0) {
                return Err(Error::PoleInput(w));
            }
            let v = (a * w - 1.0) / (w - 1.0);
            let ([u0, u1], disc) = cov_images(v);
            let branch_point = is_branch_point(disc, 3.0 * v.norm_sqr());
            let wm1 = w - 1.0;
            let mk = |u: Cx| {
                let z = phi_a_inv(a, u);
                let derivative = if branch_point {
                    None
                } else {
                    let zp1 = z + 1.0;
                    Some((2.0 * v + u) / (v + 2.0 * u) * (zp1 * zp1) / (wm1 * wm1))
                };
                Branch { value: z, derivative }
            };
            Ok(BranchSet {
                source: w,
                branches: vec![mk(u0), mk(u1)],
                branch_point,
            })
        }
        MatingCoords::CovJ => {
            // F⁻¹ = Cov ∘ J.
            let y = mobius_j(a, w);
            if !y.is_finite() {
                return Err(Error::PoleInput(w));
            }
            let ([z0, z1], disc) = cov_images(y);
            let branch_point = is_branch_point(disc, 3.0 * y.norm_sqr());
            let jd = mobius_j_deriv(a, w);
            let mk = |z: Cx| {
                let derivative = if branch_point {
                    None
                } else {
                    Some(cov_deriv(y, z) * jd)
                };
                Branch { value: z, derivative }
            };
            Ok(BranchSet {
                source: w,
                branches: vec![mk(z0), mk(z1)],
                branch_point,
            })
        }
    }
}

/// Residual of the defining relation at a (z, w) pair, relative to
/// max(1, |z|^p) for the power family.
pub fn power_relation_residual(corr: &PowerCorr, z: Cx, w: Cx) -> f64 {
    let (p, q) = (corr.exp.p(), corr.exp.q());
    let zp = z.powu(p);
    let wq = (w - corr.c).powu(q);
    (wq - zp).norm() / zp.norm().max(1.0)
}

/// Residual of the mating relation at a (z, w) pair in the coordinates of
/// `corr`, relative to the size of the Möbius images.
pub fn mating_relation_residual(corr: &MatingCorr, z: Cx, w: Cx) -> f64 {
    let a = corr.a;
    let (u, v) = match corr.coords {
        MatingCoords::Original => (phi_a(a, z), (a * w - 1.0) / (w - 1.0)),
        MatingCoords::CovJ => (z, mobius_j(a, w)),
    };
    let lhs = v * v + u * v + u * u - 3.0;
    lhs.norm() / (u.norm_sqr() + v.norm_sqr()).max(1.0)
}

/// Stability class of a fixed point (or cycle).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    Attracting,
    Repelling,
    Parabolic,
    Superattracting,
}

#[derive(Debug, Clone, Copy)]
pub struct FixedPoint {
    pub point: Cx,
    pub multiplier: Cx,
    pub class: PointClass,
    /// True when the fixing branch sits at a critical point of the
    /// correspondence: no univalent branch exists and λ = 0 by convention.
    pub branch_point: bool,
}

pub fn classify_multiplier(multiplier: Cx) -> PointClass {
    let m = multiplier.norm();
    if m <= tol::SUPERATTRACTING_BAND {
        PointClass::Superattracting
    } else if (m - 1.0).abs() <= tol::PARABOLIC_BAND {
        PointClass::Parabolic
    } else if m > 1.0 {
        PointClass::Repelling
    } else {
        PointClass::Attracting
    }
}

/// A periodic forward orbit with its multiplier λ = Π φ_i'(z_i)
/// (λ = 0 when the cycle passes through the critical point).
#[derive(Debug, Clone)]
pub struct Cycle {
    pub points: Vec<Cx>,
    pub multiplier: Cx,
    pub class: PointClass,
}

/// All fixed points of (w-c)^q = z^p, i.e. the roots of (z-c)^q - z^p,
/// classified by the derivative of the branch that fixes them.
///
/// c = 0 is handled in closed form (0 plus the (p-q)-th roots of unity); the
/// general case goes through the Aberth–Ehrlich solver.
pub fn power_fixed_points(corr: &PowerCorr) -> Result<Vec<FixedPoint>> {
    let (p, q) = (corr.exp.p(), corr.exp.q());
    if corr.c == Cx::new(0.0, 0.0) {
        let mut out = vec![FixedPoint {
            point: Cx::new(0.0, 0.0),
            multiplier: Cx::new(0.0, 0.0),
            class: PointClass::Superattracting,
            branch_point: false,
        }];
        let n = p - q;
        let beta = corr.exp.beta();
        for k in 0..n {
            let z = Cx::from_polar(1.0, TAU * k as f64 / n as f64);
            let multiplier = Cx::new(beta, 0.0);
            out.push(FixedPoint {
                point: z,
                multiplier,
                class: classify_multiplier(multiplier),
                branch_point: false,
            });
        }
        return Ok(out);
    }

    // Coefficients of (z-c)^q - z^p, ascending powers, degree p.
    let mut coeffs = vec![Cx::new(0.0, 0.0); p as usize + 1];
    let mut binom = 1.0f64;
    for j in 0..=q {
        // C(q, j) * (-c)^(q-j) z^j
        coeffs[j as usize] += (-corr.c).powu(q - j) * binom;
        binom = binom * (q - j) as f64 / (j + 1) as f64;
    }
    coeffs[p as usize] -= 1.0;

    let roots = roots::aberth_roots(&coeffs)?;
    let mut out = Vec::with_capacity(roots.len());
    for z in roots {
        let set = power_forward(corr, z);
        let fixing = set
            .closest_to(z)
            .ok_or_else(|| Error::InvalidInput("empty branch set".into()))?;
        let multiplier = fixing.derivative.unwrap_or(Cx::new(0.0, 0.0));
        out.push(FixedPoint {
            point: z,
            multiplier,
            class: classify_multiplier(multiplier),
            branch_point: fixing.derivative.is_none(),
        });
    }
    out.sort_by(|a, b| {
        (a.point.re, a.point.im)
            .partial_cmp(&(b.point.re, b.point.im))
            .unwrap()
    });
    Ok(out)
}

/// Fixed points of F_a. Setting w = z in the relation and clearing
/// denominators gives the quartic z²(a-1)[3(a+1)z² - (7-a)] = 0, so the fixed
/// points are P (= 0 in Original coordinates, a double root: P is parabolic)
/// and ±sqrt((7-a)/(3(a+1))).
pub fn mating_fixed_points(corr: &MatingCorr) -> Result<Vec<FixedPoint>> {
    let a = corr.a;
    let mut pts = vec![Cx::new(0.0, 0.0)];
    let r2 = (Cx::new(7.0, 0.0) - a) / ((a + 1.0) * 3.0);
    let r = r2.sqrt();
    if r.norm() > 1e-12 {
        pts.push(r);
        pts.push(-r);
    }
    let mut out = Vec::with_capacity(pts.len());
    for z_orig in pts {
        let point = match corr.coords {
            MatingCoords::Original => z_orig,
            MatingCoords::CovJ => phi_a(a, z_orig),
        };
        let set = mating_forward(corr, point)?;
        let fixing = set
            .closest_to(point)
            .ok_or_else(|| Error::InvalidInput("empty branch set".into()))?;
        let (multiplier, branch_point) = match fixing.derivative {
            Some(d) => (d, false),
            None => (Cx::new(0.0, 0.0), true),
        };
        out.push(FixedPoint {
            point,
            multiplier,
            class: classify_multiplier(multiplier),
            branch_point,
        });
    }
    Ok(out)
}

/// Evaluate the itinerary-composed branch map at parameter c, returning the
/// endpoint and the derivative product along the orbit. Fails with `None` if
/// a step lands on the collapsed critical image.
fn compose_itinerary(
    exp: RationalExp,
    c: Cx,
    z: Cx,
    itinerary: &[usize],
) -> Option<(Cx, Cx, Vec<Cx>)> {
    let corr = PowerCorr { exp, c };
    let mut cur = z;
    let mut deriv = Cx::new(1.0, 0.0);
    let mut pts = Vec::with_capacity(itinerary.len());
    for &idx in itinerary {
        pts.push(cur);
        let set = power_forward(&corr, cur);
        let b = set.branches.get(idx)?;
        deriv *= b.derivative?;
        cur = b.value;
    }
    Some((cur, deriv, pts))
}

fn newton_periodic(exp: RationalExp, c: Cx, start: Cx, itinerary: &[usize]) -> Option<(Cx, Vec<Cx>)> {
    let mut z = start;
    let mut best = f64::INFINITY;
    for _ in 0..60 {
        let (end, deriv, pts) = compose_itinerary(exp, c, z, itinerary)?;
        let f = end - z;
        let res = f.norm();
        if res <= tol::NEWTON_POLISH {
            return Some((z, pts));
        }
        let fp = deriv - 1.0;
        if fp.norm() < 1e-300 {
            return None;
        }
        let step = f / fp;
        z -= step;
        if res < best {
            best = res;
        } else if res <= tol::NEWTON_RESIDUAL {
            // No further progress but within contract.
            return Some((z, pts));
        }
    }
    // Accept if the contractual residual was reached.
    let (end, _, pts) = compose_itinerary(exp, c, z, itinerary)?;
    if (end - z).norm() <= tol::NEWTON_RESIDUAL * z.norm().max(1.0) {
        Some((z, pts))
    } else {
        None
    }
}

/// Continue a periodic point of the power family along a parameter path.
///
/// `itinerary` lists branch indices (into the deterministic branch ordering)
/// of one period; `path` is the list of c values, starting at the parameter
/// where `seed` is periodic. Newton corrections run at every node, with up to
/// 20 halvings of a failing parameter step. Returns the continued point at
/// each input path node.
pub fn continue_periodic_point(
    corr: &PowerCorr,
    seed: Cx,
    itinerary: &[usize],
    path: &[Cx],
) -> Result<Vec<Cx>> {
    if itinerary.is_empty() || path.is_empty() {
        return Err(Error::InvalidInput("itinerary and path must be nonempty".into()));
    }
    let exp = corr.exp;
    let (end, _, _) = compose_itinerary(exp, path[0], seed, itinerary)
        .ok_or_else(|| Error::InvalidInput("itinerary hits the critical point".into()))?;
    if (end - seed).norm() > tol::NEWTON_RESIDUAL * seed.norm().max(1.0) {
        return Err(Error::InvalidInput(format!(
            "seed is not periodic at path[0] (residual {:.3e})",
            (end - seed).norm()
        )));
    }

    let mut out = Vec::with_capacity(path.len());
    let mut z = match newton_periodic(exp, path[0], seed, itinerary) {
        Some((z, pts)) => {
            check_collision(&pts, 0)?;
            z
        }
        None => return Err(Error::NewtonDivergence { node: 0, halvings: 0 }),
    };
    out.push(z);

    for node in 1..path.len() {
        let mut from = path[node - 1];
        let target = path[node];
        let mut halvings = 0u32;
        // March toward `target`, halving the step whenever Newton fails.
        loop {
            let step = target - from;
            let attempt = from + step;
            match newton_periodic(exp, attempt, z, itinerary) {
                Some((zn, pts)) => {
                    z = zn;
                    from = attempt;
                    if from == target {
                        check_collision(&pts, node)?;
                        break;
                    }
                }
                None => {
                    halvings += 1;
                    if halvings > tol::MAX_STEP_HALVINGS {
                        return Err(Error::NewtonDivergence { node, halvings });
                    }
                    // Retry from the same point with half the remaining step.
                    let half = from + (target - from) / 2.0;
                    match newton_periodic(exp, half, z, itinerary) {
                        Some((zn, _)) => {
                            z = zn;
                            from = half;
                        }
                        None => continue,
                    }
                }
            }
        }
        out.push(z);
    }
    Ok(out)
}

fn check_collision(pts: &[Cx], node: usize) -> Result<()> {
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let d = (pts[i] - pts[j]).norm();
            if d < tol::COLLISION_DIST {
                return Err(Error::ContinuationCollision { node, min_dist: d });
            }
        }
    }
    Ok(())
}
