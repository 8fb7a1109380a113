//! Grid rasterization: pixel grids over complex windows, dynamical and
//! parameter renders, the full/Carpet/Cantor pixel classifier, and
//! bit-exact PPM / CSV emission.

use std::io::Write as _;
use std::path::Path;

use crate::corr::{power_backward, power_fixed_points, Cx, PointClass, PowerCorr, RationalExp};
use crate::error::{Error, Result};
use crate::orbit::{in_filled_julia, EscapeParams, OrbitStatus};
use crate::parallel::WorkerPool;
use crate::tol;

/// A square-pixel window over the plane. Pixel (0,0) is top-left; pixel
/// centers are sampled. Height is derived from the aspect ratio.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub center: Cx,
    pub width: f64,
    pub px: u32,
    pub py: u32,
}

impl GridSpec {
    pub fn new(center: Cx, width: f64, px: u32, py: u32) -> Result<Self> {
        if width <= 0.0 || px == 0 || py == 0 {
            return Err(Error::InvalidInput("grid needs positive width and pixel counts".into()));
        }
        Ok(Self { center, width, px, py })
    }

    pub fn square(center: Cx, width: f64, px: u32) -> Result<Self> {
        Self::new(center, width, px, px)
    }

    pub fn pixel_width(&self) -> f64 {
        self.width / self.px as f64
    }

    pub fn height(&self) -> f64 {
        self.width * self.py as f64 / self.px as f64
    }

    /// Center of pixel (x, y); top row has the largest imaginary part.
    pub fn point(&self, x: u32, y: u32) -> Cx {
        let dx = self.pixel_width();
        let re = self.center.re - self.width / 2.0 + (x as f64 + 0.5) * dx;
        let im = self.center.im + self.height() / 2.0 - (y as f64 + 0.5) * dx;
        Cx::new(re, im)
    }

    pub fn len(&self) -> usize {
        self.px as usize * self.py as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JuliaLabel {
    Inside,
    Outside,
    Boundary,
    Unknown,
}

impl JuliaLabel {
    pub fn name(self) -> &'static str {
        match self {
            JuliaLabel::Inside => "Inside",
            JuliaLabel::Outside => "Outside",
            JuliaLabel::Boundary => "Boundary",
            JuliaLabel::Unknown => "Unknown",
        }
    }
}

/// Row-major label raster.
#[derive(Debug, Clone)]
pub struct Raster<L> {
    pub grid: GridSpec,
    pub labels: Vec<L>,
}

impl<L: Copy> Raster<L> {
    pub fn get(&self, x: u32, y: u32) -> L {
        self.labels[y as usize * self.grid.px as usize + x as usize]
    }
}

/// Default palette: Inside black, Outside white, Boundary red, Unknown gray.
pub fn julia_palette(label: JuliaLabel) -> [u8; 3] {
    match label {
        JuliaLabel::Inside => [0, 0, 0],
        JuliaLabel::Outside => [255, 255, 255],
        JuliaLabel::Boundary => [220, 30, 30],
        JuliaLabel::Unknown => [128, 128, 128],
    }
}

/// Per-pixel filled-Julia render: Inside = Bounded, Outside = Escaped,
/// Unknown = BudgetExhausted; afterwards Inside pixels with an Outside
/// 4-neighbor are relabeled Boundary.
pub fn render_filled_julia(
    corr: &PowerCorr,
    grid: &GridSpec,
    params: &EscapeParams,
    pool: &WorkerPool,
) -> Raster<JuliaLabel> {
    let mut labels = vec![JuliaLabel::Unknown; grid.len()];
    pool.fill_rows(&mut labels, grid.px as usize, |x, y| {
        let z = grid.point(x as u32, y as u32);
        match in_filled_julia(corr, z, params).status {
            OrbitStatus::Bounded => JuliaLabel::Inside,
            OrbitStatus::Escaped => JuliaLabel::Outside,
            OrbitStatus::BudgetExhausted => JuliaLabel::Unknown,
        }
    });
    let mut raster = Raster { grid: *grid, labels };
    mark_boundary(&mut raster);
    raster
}

fn mark_boundary(raster: &mut Raster<JuliaLabel>) {
    let (px, py) = (raster.grid.px as i64, raster.grid.py as i64);
    let at = |labels: &[JuliaLabel], x: i64, y: i64| -> Option<JuliaLabel> {
        if x < 0 || y < 0 || x >= px || y >= py {
            None
        } else {
            Some(labels[(y * px + x) as usize])
        }
    };
    let snapshot = raster.labels.clone();
    for y in 0..py {
        for x in 0..px {
            if snapshot[(y * px + x) as usize] == JuliaLabel::Inside {
                let touches_outside = [(1, 0), (-1, 0), (0, 1), (0, -1)]
                    .iter()
                    .any(|(dx, dy)| at(&snapshot, x + dx, y + dy) == Some(JuliaLabel::Outside));
                if touches_outside {
                    raster.labels[(y * px + x) as usize] = JuliaLabel::Boundary;
                }
            }
        }
    }
}

/// How `render_julia_boundary` produces its pixels.
pub enum BoundaryMode {
    /// Boundary pixels of the filled render.
    FromFilled,
    /// Accumulate backward orbits from a repelling fixed point and mark hit
    /// pixels. Deterministic breadth-first expansion up to `nodes` points.
    Backward { seed: Option<Cx>, nodes: u64 },
}

/// Julia-set raster: either ∂K_c from the filled render, or a backward-orbit
/// accumulation from a repelling fixed point.
pub fn render_julia_boundary(
    corr: &PowerCorr,
    grid: &GridSpec,
    params: &EscapeParams,
    mode: BoundaryMode,
    pool: &WorkerPool,
) -> Result<Raster<JuliaLabel>> {
    match mode {
        BoundaryMode::FromFilled => {
            let mut raster = render_filled_julia(corr, grid, params, pool);
            for l in raster.labels.iter_mut() {
                *l = match *l {
                    JuliaLabel::Boundary => JuliaLabel::Boundary,
                    JuliaLabel::Unknown => JuliaLabel::Unknown,
                    _ => JuliaLabel::Outside,
                };
            }
            Ok(raster)
        }
        BoundaryMode::Backward { seed, nodes } => {
            let seed = match seed {
                Some(s) => {
                    // Validate repulsion of an explicit seed.
                    let set = crate::corr::power_forward(corr, s);
                    let fixing = set.closest_to(s).unwrap();
                    if (fixing.value - s).norm() > 1e-6 * s.norm().max(1.0) {
                        return Err(Error::InvalidInput(format!(
                            "seed {s} is not fixed (image {})",
                            fixing.value
                        )));
                    }
                    let m = fixing.derivative.map_or(0.0, |d| d.norm());
                    if m <= 1.0 + tol::PARABOLIC_BAND {
                        return Err(Error::SeedNotRepelling { modulus: m });
                    }
                    s
                }
                None => {
                    let fps = power_fixed_points(corr)?;
                    fps.iter()
                        .find(|f| f.class == PointClass::Repelling)
                        .map(|f| f.point)
                        .ok_or(Error::SeedNotRepelling { modulus: 0.0 })?
                }
            };
            let mut labels = vec![JuliaLabel::Outside; grid.len()];
            let mut queue = std::collections::VecDeque::new();
            queue.push_back(seed);
            let mut count: u64 = 0;
            let (px, py) = (grid.px, grid.py);
            let dx = grid.pixel_width();
            let x0 = grid.center.re - grid.width / 2.0;
            let y0 = grid.center.im + grid.height() / 2.0;
            while let Some(z) = queue.pop_front() {
                count += 1;
                if count > nodes {
                    break;
                }
                let xf = (z.re - x0) / dx;
                let yf = (y0 - z.im) / dx;
                if xf >= 0.0 && yf >= 0.0 && (xf as u32) < px && (yf as u32) < py {
                    labels[yf as usize * px as usize + xf as usize] = JuliaLabel::Boundary;
                }
                for w in power_backward(corr, z).values() {
                    queue.push_back(w);
                }
            }
            Ok(Raster { grid: *grid, labels })
        }
    }
}

/// Parameter-plane variants: M_{β,0} membership of 0, or the connectedness
/// heuristic for M_β at a coarse sub-resolution.
pub enum ParamSetVariant {
    MBetaZero,
    MBeta { sub_px: u32 },
}

/// Window used for the per-parameter sub-render of the M_β heuristic: a
/// square comfortably containing the invariant disk B(R).
pub fn natural_window(corr: &PowerCorr) -> GridSpec {
    let r = crate::orbit::escape_radius(corr);
    GridSpec::square(Cx::new(0.0, 0.0), 4.25 * r, 64).expect("static grid")
}

/// Is c in M_β by the pixel-connectivity heuristic: sub-render K_c and accept
/// Full or Carpet verdicts (connected inside).
pub fn m_beta_member(
    exp: RationalExp,
    c: Cx,
    sub_px: u32,
    params: &EscapeParams,
    pool: &WorkerPool,
) -> JuliaLabel {
    let corr = PowerCorr { exp, c };
    let sub_params = EscapeParams::clamped(&corr, params.radius, params.max_depth, params.node_budget);
    let mut grid = natural_window(&corr);
    grid.px = sub_px;
    grid.py = sub_px;
    let raster = render_filled_julia(&corr, &grid, &sub_params, pool);
    match classify_set(&raster) {
        Ok(class) => match class.verdict {
            SetVerdict::Full | SetVerdict::Carpet => JuliaLabel::Inside,
            SetVerdict::CantorLike | SetVerdict::Inconclusive => JuliaLabel::Outside,
        },
        Err(_) => JuliaLabel::Unknown,
    }
}

/// Render a parameter-set slice over a c-grid.
pub fn render_parameter_set(
    exp: RationalExp,
    grid: &GridSpec,
    params: &EscapeParams,
    variant: &ParamSetVariant,
    pool: &WorkerPool,
) -> Raster<JuliaLabel> {
    let mut labels = vec![JuliaLabel::Unknown; grid.len()];
    match variant {
        ParamSetVariant::MBetaZero => {
            pool.fill_rows(&mut labels, grid.px as usize, |x, y| {
                let c = grid.point(x as u32, y as u32);
                let corr = PowerCorr { exp, c };
                let p = EscapeParams::clamped(&corr, params.radius, params.max_depth, params.node_budget);
                match in_filled_julia(&corr, Cx::new(0.0, 0.0), &p).status {
                    OrbitStatus::Bounded => JuliaLabel::Inside,
                    OrbitStatus::Escaped => JuliaLabel::Outside,
                    OrbitStatus::BudgetExhausted => JuliaLabel::Unknown,
                }
            });
        }
        ParamSetVariant::MBeta { sub_px } => {
            // The sub-render owns the parallelism budget poorly if nested;
            // parallelize over parameter pixels and render serially inside.
            let serial = WorkerPool::new(1);
            let sub = *sub_px;
            pool.fill_rows(&mut labels, grid.px as usize, |x, y| {
                let c = grid.point(x as u32, y as u32);
                m_beta_member(exp, c, sub, params, &serial)
            });
        }
    }
    Raster { grid: *grid, labels }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetVerdict {
    Full,
    Carpet,
    CantorLike,
    Inconclusive,
}

#[derive(Debug, Clone, Copy)]
pub struct SetClassification {
    pub verdict: SetVerdict,
    pub components_inside: usize,
    pub components_complement: usize,
    pub unknown_fraction: f64,
}

struct Components {
    count: usize,
    /// (min_x, min_y, max_x, max_y) per component.
    boxes: Vec<(u32, u32, u32, u32)>,
}

fn flood_components(mask: &[bool], px: u32, py: u32, diagonal: bool) -> Components {
    let mut comp = vec![usize::MAX; mask.len()];
    let mut boxes = Vec::new();
    let mut count = 0;
    let idx = |x: u32, y: u32| y as usize * px as usize + x as usize;
    let mut stack = Vec::new();
    for y in 0..py {
        for x in 0..px {
            if !mask[idx(x, y)] || comp[idx(x, y)] != usize::MAX {
                continue;
            }
            let id = count;
            count += 1;
            let mut bbox = (x, y, x, y);
            stack.push((x, y));
            comp[idx(x, y)] = id;
            while let Some((cx, cy)) = stack.pop() {
                bbox.0 = bbox.0.min(cx);
                bbox.1 = bbox.1.min(cy);
                bbox.2 = bbox.2.max(cx);
                bbox.3 = bbox.3.max(cy);
                let neighbors: &[(i64, i64)] = if diagonal {
                    &[(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)]
                } else {
                    &[(1, 0), (-1, 0), (0, 1), (0, -1)]
                };
                for (dx, dy) in neighbors {
                    let nx = cx as i64 + dx;
                    let ny = cy as i64 + dy;
                    if nx < 0 || ny < 0 || nx >= px as i64 || ny >= py as i64 {
                        continue;
                    }
                    let (nx, ny) = (nx as u32, ny as u32);
                    if mask[idx(nx, ny)] && comp[idx(nx, ny)] == usize::MAX {
                        comp[idx(nx, ny)] = id;
                        stack.push((nx, ny));
                    }
                }
            }
            boxes.push(bbox);
        }
    }
    Components { count, boxes }
}

/// Topological signature of a filled-Julia raster: 4-connected Inside
/// components against 8-connected Outside components (with the window frame
/// merged into one outside region). Unknown pixels are excluded and capped
/// at 1%.
pub fn classify_set(raster: &Raster<JuliaLabel>) -> Result<SetClassification> {
    let (px, py) = (raster.grid.px, raster.grid.py);
    let n = raster.labels.len();
    let unknown = raster.labels.iter().filter(|l| **l == JuliaLabel::Unknown).count();
    let unknown_fraction = unknown as f64 / n as f64;
    if unknown_fraction >= tol::UNKNOWN_FRACTION_MAX {
        return Err(Error::TooManyUnknown { fraction: unknown_fraction });
    }

    let inside_mask: Vec<bool> = raster
        .labels
        .iter()
        .map(|l| matches!(l, JuliaLabel::Inside | JuliaLabel::Boundary))
        .collect();
    let inside = flood_components(&inside_mask, px, py, false);

    // Pad with a one-pixel Outside frame so all window-touching outside
    // regions merge.
    let fpx = px + 2;
    let fpy = py + 2;
    let mut outside_mask = vec![false; fpx as usize * fpy as usize];
    for y in 0..fpy {
        for x in 0..fpx {
            let border = x == 0 || y == 0 || x == fpx - 1 || y == fpy - 1;
            let v = if border {
                true
            } else {
                raster.get(x - 1, y - 1) == JuliaLabel::Outside
            };
            outside_mask[y as usize * fpx as usize + x as usize] = v;
        }
    }
    let outside = flood_components(&outside_mask, fpx, fpy, true);

    let components_inside = inside.count;
    let components_complement = outside.count;
    let all_specks = inside.boxes.iter().all(|(x0, y0, x1, y1)| {
        (x1 - x0 + 1).max(y1 - y0 + 1) <= tol::CANTOR_MAX_DIAMETER_PX
    });
    let verdict = if components_inside >= tol::CANTOR_MIN_COMPONENTS && all_specks {
        SetVerdict::CantorLike
    } else if components_inside == 1 && components_complement == 1 {
        SetVerdict::Full
    } else if components_inside == 1 && components_complement >= 2 {
        SetVerdict::Carpet
    } else {
        SetVerdict::Inconclusive
    };

    Ok(SetClassification {
        verdict,
        components_inside,
        components_complement,
        unknown_fraction,
    })
}

/// Binary PPM (P6, maxval 255), row-major from the top-left pixel.
/// Byte-identical output for identical rasters.
pub fn ppm_bytes<L: Copy>(raster: &Raster<L>, palette: impl Fn(L) -> [u8; 3]) -> Vec<u8> {
    let mut out = Vec::with_capacity(raster.labels.len() * 3 + 32);
    out.extend_from_slice(format!("P6\n{} {}\n255\n", raster.grid.px, raster.grid.py).as_bytes());
    for l in &raster.labels {
        out.extend_from_slice(&palette(*l));
    }
    out
}

pub fn write_ppm<L: Copy>(
    raster: &Raster<L>,
    palette: impl Fn(L) -> [u8; 3],
    path: &Path,
) -> Result<()> {
    let bytes = ppm_bytes(raster, palette);
    let mut f = std::fs::File::create(path)?;
    f.write_all(&bytes)?;
    Ok(())
}

/// CSV export of the label matrix: header `x,y,label`, one row per pixel,
/// row-major, LF line endings.
pub fn label_csv<L: Copy>(raster: &Raster<L>, name: impl Fn(L) -> &'static str) -> String {
    let mut s = String::with_capacity(raster.labels.len() * 12 + 16);
    s.push_str("x,y,label\n");
    for y in 0..raster.grid.py {
        for x in 0..raster.grid.px {
            s.push_str(&format!("{x},{y},{}\n", name(raster.get(x, y))));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    fn disk_raster(px: u32, r_inside: f64) -> Raster<JuliaLabel> {
        let grid = GridSpec::square(cx(0.0, 0.0), 3.0, px).unwrap();
        let labels = (0..px * px)
            .map(|i| {
                let z = grid.point(i % px, i / px);
                if z.norm() <= r_inside {
                    JuliaLabel::Inside
                } else {
                    JuliaLabel::Outside
                }
            })
            .collect();
        Raster { grid, labels }
    }

    #[test]
    fn one_by_one_ppm_is_exact() {
        let grid = GridSpec::square(cx(0.0, 0.0), 1.0, 1).unwrap();
        let raster = Raster { grid, labels: vec![JuliaLabel::Inside] };
        let bytes = ppm_bytes(&raster, |_| [0u8, 0, 0]);
        let mut expected = b"P6\n1 1\n255\n".to_vec();
        expected.extend_from_slice(&[0, 0, 0]);
        assert_eq!(bytes, expected);
    }

    #[test]
    fn two_by_one_payload_order() {
        let grid = GridSpec::new(cx(0.0, 0.0), 1.0, 2, 1).unwrap();
        let raster = Raster {
            grid,
            labels: vec![JuliaLabel::Inside, JuliaLabel::Outside],
        };
        let bytes = ppm_bytes(&raster, julia_palette);
        assert_eq!(&bytes[bytes.len() - 6..], &[0, 0, 0, 255, 255, 255]);
    }

    #[test]
    fn filled_disk_classifies_full() {
        let raster = disk_raster(64, 1.0);
        let class = classify_set(&raster).unwrap();
        assert_eq!(class.verdict, SetVerdict::Full);
        assert_eq!(class.components_complement, 1);
    }

    #[test]
    fn annulus_classifies_carpet_signature() {
        let grid = GridSpec::square(cx(0.0, 0.0), 3.0, 64).unwrap();
        let labels = (0..64u32 * 64)
            .map(|i| {
                let z = grid.point(i % 64, i / 64);
                let r = z.norm();
                if (0.5..=1.2).contains(&r) {
                    JuliaLabel::Inside
                } else {
                    JuliaLabel::Outside
                }
            })
            .collect();
        let raster = Raster { grid, labels };
        let class = classify_set(&raster).unwrap();
        assert_eq!(class.verdict, SetVerdict::Carpet);
        assert_eq!(class.components_complement, 2);
    }

    #[test]
    fn dust_classifies_cantor_like() {
        let grid = GridSpec::square(cx(0.0, 0.0), 3.0, 64).unwrap();
        let mut labels = vec![JuliaLabel::Outside; 64 * 64];
        // 25 isolated 2x2 specks.
        for by in 0..5u32 {
            for bx in 0..5u32 {
                let (ox, oy) = (6 + bx * 10, 6 + by * 10);
                for dy in 0..2 {
                    for dx in 0..2 {
                        labels[((oy + dy) * 64 + ox + dx) as usize] = JuliaLabel::Inside;
                    }
                }
            }
        }
        let raster = Raster { grid, labels };
        let class = classify_set(&raster).unwrap();
        assert_eq!(class.verdict, SetVerdict::CantorLike);
        assert_eq!(class.components_inside, 25);
    }

    #[test]
    fn boundary_of_all_outside_is_empty() {
        let grid = GridSpec::square(cx(0.0, 0.0), 3.0, 16).unwrap();
        let mut raster = Raster {
            grid,
            labels: vec![JuliaLabel::Outside; 16 * 16],
        };
        mark_boundary(&mut raster);
        assert!(raster.labels.iter().all(|l| *l == JuliaLabel::Outside));
    }

    #[test]
    fn unknown_fraction_rejected() {
        let grid = GridSpec::square(cx(0.0, 0.0), 3.0, 16).unwrap();
        let mut labels = vec![JuliaLabel::Outside; 16 * 16];
        for l in labels.iter_mut().take(10) {
            *l = JuliaLabel::Unknown;
        }
        let raster = Raster { grid, labels };
        assert!(matches!(classify_set(&raster), Err(Error::TooManyUnknown { .. })));
    }

    #[test]
    fn single_pixel_at_origin_inside() {
        let corr = PowerCorr::new(3, 2, cx(0.0, 0.0)).unwrap();
        let grid = GridSpec::square(cx(0.0, 0.0), 0.001, 1).unwrap();
        let pool = WorkerPool::new(1);
        let params = EscapeParams::for_corr(&corr);
        let raster = render_filled_julia(&corr, &grid, &params, &pool);
        assert!(matches!(raster.labels[0], JuliaLabel::Inside | JuliaLabel::Boundary));
    }

    #[test]
    fn conjugation_symmetry_for_real_c() {
        let corr = PowerCorr::new(3, 2, cx(0.1, 0.0)).unwrap();
        let grid = GridSpec::square(cx(0.0, 0.0), 3.0, 32).unwrap();
        let pool = WorkerPool::new(2);
        let params = EscapeParams::for_corr(&corr).with_depth(30).with_budget(10_000_000);
        let raster = render_filled_julia(&corr, &grid, &params, &pool);
        assert!(raster.labels.iter().all(|l| *l != JuliaLabel::Unknown));
        for y in 0..32 {
            for x in 0..32 {
                let a = raster.get(x, y);
                let b = raster.get(x, 31 - y);
                // Boundary marking is itself mirror-symmetric.
                assert_eq!(a, b, "pixel ({x},{y}) breaks conjugation symmetry");
            }
        }
    }

    #[test]
    fn depth_monotonicity_outside_stays_outside() {
        let corr = PowerCorr::new(5, 2, cx(0.3, 0.1)).unwrap();
        let grid = GridSpec::square(cx(0.0, 0.0), 3.0, 24).unwrap();
        let pool = WorkerPool::new(1);
        let shallow = EscapeParams::for_corr(&corr).with_depth(20);
        let deep = EscapeParams::for_corr(&corr).with_depth(40);
        let a = render_filled_julia(&corr, &grid, &shallow, &pool);
        let b = render_filled_julia(&corr, &grid, &deep, &pool);
        for i in 0..a.labels.len() {
            if matches!(a.labels[i], JuliaLabel::Outside) {
                assert!(
                    matches!(b.labels[i], JuliaLabel::Outside | JuliaLabel::Boundary)
                        || b.labels[i] == JuliaLabel::Outside,
                    "escape pruning must be monotone in depth"
                );
            }
        }
    }

    #[test]
    fn backward_orbit_hits_unit_circle() {
        // J_0 = S¹ for every β: backward orbits of the repelling fixed point
        // stay on the circle exactly.
        let corr = PowerCorr::new(3, 2, cx(0.0, 0.0)).unwrap();
        let grid = GridSpec::square(cx(0.0, 0.0), 3.0, 256).unwrap();
        let pool = WorkerPool::new(1);
        let params = EscapeParams::for_corr(&corr);
        let raster = render_julia_boundary(
            &corr,
            &grid,
            &params,
            BoundaryMode::Backward { seed: Some(cx(1.0, 0.0)), nodes: 100_000 },
            &pool,
        )
        .unwrap();
        let pw = grid.pixel_width();
        let mut hits = 0usize;
        let mut good = 0usize;
        for y in 0..256 {
            for x in 0..256 {
                if raster.get(x, y) == JuliaLabel::Boundary {
                    hits += 1;
                    let z = grid.point(x, y);
                    if (z.norm() - 1.0).abs() <= 2.0 * pw {
                        good += 1;
                    }
                }
            }
        }
        assert!(hits > 100);
        assert!(good as f64 >= 0.99 * hits as f64);
    }

    #[test]
    fn backward_mode_rejects_non_repelling_seed() {
        let corr = PowerCorr::new(3, 2, cx(0.0, 0.0)).unwrap();
        let grid = GridSpec::square(cx(0.0, 0.0), 3.0, 16).unwrap();
        let pool = WorkerPool::new(1);
        let params = EscapeParams::for_corr(&corr);
        let err = render_julia_boundary(
            &corr,
            &grid,
            &params,
            BoundaryMode::Backward { seed: Some(cx(0.0, 0.0)), nodes: 100 },
            &pool,
        );
        assert!(matches!(err, Err(Error::SeedNotRepelling { .. })));
    }

    #[test]
    fn label_csv_layout() {
        let grid = GridSpec::new(cx(0.0, 0.0), 1.0, 2, 1).unwrap();
        let raster = Raster {
            grid,
            labels: vec![JuliaLabel::Inside, JuliaLabel::Outside],
        };
        let csv = label_csv(&raster, JuliaLabel::name);
        assert_eq!(csv, "x,y,label\n0,0,Inside\n1,0,Outside\n");
    }
}
