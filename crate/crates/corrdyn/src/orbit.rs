//! Depth-limited multivalued orbit search for the power family: escape
//! radii, filled-Julia membership, ω-limit sampling, and basin checks.
//!
//! All queries are pure functions of their inputs; the DFS explores children
//! in the deterministic branch order from corr-core, so verdicts and
//! witnesses are reproducible regardless of scheduling.

use std::collections::HashSet;

use crate::corr::{power_forward, Cx, PowerCorr};
use crate::tol;

/// Parameters of one orbit-tree query. `radius` must dominate
/// [`escape_radius`] for pruning to be sound; use [`EscapeParams::for_corr`]
/// or `clamped`.
#[derive(Debug, Clone, Copy)]
pub struct EscapeParams {
    pub radius: f64,
    pub max_depth: u32,
    pub node_budget: u64,
}

impl EscapeParams {
    pub fn for_corr(corr: &PowerCorr) -> Self {
        Self {
            radius: escape_radius(corr),
            max_depth: tol::DEFAULT_MAX_DEPTH,
            node_budget: tol::DEFAULT_NODE_BUDGET,
        }
    }

    /// Same, but never below the sound escape radius of `corr`.
    pub fn clamped(corr: &PowerCorr, radius: f64, max_depth: u32, node_budget: u64) -> Self {
        Self {
            radius: radius.max(escape_radius(corr)),
            max_depth,
            node_budget,
        }
    }

    pub fn with_depth(mut self, max_depth: u32) -> Self {
        self.max_depth = max_depth;
        self
    }

    pub fn with_budget(mut self, node_budget: u64) -> Self {
        self.node_budget = node_budget;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitStatus {
    Bounded,
    Escaped,
    BudgetExhausted,
}

#[derive(Debug, Clone)]
pub struct OrbitVerdict {
    pub status: OrbitStatus,
    /// For Bounded: the first `max_depth` points of the surviving orbit
    /// (starting at the query point), found in deterministic DFS order.
    pub witness: Option<Vec<Cx>>,
}

/// Escape radius R = max(2^(1/(β-1)), 2|c|). If |z| > R then
/// |w| ≥ |z|^β - |c| ≥ 2|z| - |z|/2 = (3/2)|z| for every branch, so all
/// orbits grow monotonically and escape.
pub fn escape_radius(corr: &PowerCorr) -> f64 {
    let beta = corr.exp.beta();
    (2.0f64).powf(1.0 / (beta - 1.0)).max(2.0 * corr.c.norm())
}

/// Does z admit a forward orbit staying inside |z| ≤ radius for `max_depth`
/// steps? Depth-first search over the q-ary orbit tree; a branch is pruned
/// as soon as it leaves the disk (sound by the escape-radius guarantee).
/// BudgetExhausted is a verdict, not an error.
pub fn in_filled_julia(corr: &PowerCorr, z: Cx, params: &EscapeParams) -> OrbitVerdict {
    if z.norm() > params.radius {
        return OrbitVerdict {
            status: OrbitStatus::Escaped,
            witness: None,
        };
    }
    // Iterative DFS carrying the current path for witness extraction.
    let mut nodes: u64 = 0;
    let mut path: Vec<Cx> = vec![z];
    // Stack of (depth, pending children) where children are pushed lazily.
    let mut stack: Vec<std::vec::IntoIter<Cx>> = Vec::new();
    let children = |pt: Cx| -> std::vec::IntoIter<Cx> {
        power_forward(corr, pt)
            .values()
            .collect::<Vec<_>>()
            .into_iter()
    };
    stack.push(children(z));

    loop {
        if path.len() as u32 > params.max_depth {
            // Full-depth survivor: witness is the first max_depth points.
            path.truncate(params.max_depth as usize);
            return OrbitVerdict {
                status: OrbitStatus::Bounded,
                witness: Some(path),
            };
        }
        let Some(iter) = stack.last_mut() else {
            return OrbitVerdict {
                status: OrbitStatus::Escaped,
                witness: None,
            };
        };
        match iter.next() {
            Some(w) => {
                nodes += 1;
                if nodes >= params.node_budget {
                    return OrbitVerdict {
                        status: OrbitStatus::BudgetExhausted,
                        witness: None,
                    };
                }
                if w.norm() <= params.radius {
                    path.push(w);
                    if path.len() as u32 > params.max_depth {
                        path.truncate(params.max_depth as usize);
                        return OrbitVerdict {
                            status: OrbitStatus::Bounded,
                            witness: Some(path),
                        };
                    }
                    stack.push(children(w));
                }
            }
            None => {
                stack.pop();
                path.pop();
            }
        }
    }
}

fn dedup_key(z: Cx) -> (i64, i64) {
    let s = 1.0 / tol::POINT_DEDUP;
    ((z.re * s).round() as i64, (z.im * s).round() as i64)
}

/// Finite outer sample of the ω-limit set: the union of the last `tail`
/// points over all orbit-tree paths that survive to `max_depth` (empty if
/// every path escapes).
///
/// The enumeration memoizes survival on a 1e-12 rounded grid and stops
/// expanding once the node budget is hit, returning what was collected;
/// at desk scale the contracting and escaping cases resolve exactly.
pub fn omega_limit_sample(corr: &PowerCorr, z: Cx, params: &EscapeParams, tail: u32) -> Vec<Cx> {
    assert!(tail < params.max_depth, "tail must be < max_depth");
    let mut out: Vec<Cx> = Vec::new();
    let mut out_keys: HashSet<(i64, i64)> = HashSet::new();
    let mut alive: HashSet<((i64, i64), u32)> = HashSet::new();
    let mut dead: HashSet<((i64, i64), u32)> = HashSet::new();
    let mut nodes: u64 = 0;

    // survives(z, k): some path of k more steps stays within the radius.
    #[allow(clippy::too_many_arguments)]
    fn survives(
        corr: &PowerCorr,
        z: Cx,
        k: u32,
        radius: f64,
        nodes: &mut u64,
        budget: u64,
        alive: &mut HashSet<((i64, i64), u32)>,
        dead: &mut HashSet<((i64, i64), u32)>,
    ) -> bool {
        if z.norm() > radius {
            return false;
        }
        if k == 0 {
            return true;
        }
        let key = (dedup_key(z), k);
        if alive.contains(&key) {
            return true;
        }
        if dead.contains(&key) {
            return false;
        }
        *nodes += 1;
        if *nodes >= budget {
            return false;
        }
        for w in power_forward(corr, z).values() {
            if survives(corr, w, k - 1, radius, nodes, budget, alive, dead) {
                alive.insert(key);
                return true;
            }
        }
        dead.insert(key);
        false
    }

    // Walk the surviving tree, collecting nodes in the tail window. The
    // collected tail points of a subtree depend only on (point, depth), so
    // identical subtrees are visited once.
    #[allow(clippy::too_many_arguments)]
    fn walk(
        corr: &PowerCorr,
        z: Cx,
        depth: u32,
        params: &EscapeParams,
        tail: u32,
        nodes: &mut u64,
        alive: &mut HashSet<((i64, i64), u32)>,
        dead: &mut HashSet<((i64, i64), u32)>,
        walked: &mut HashSet<((i64, i64), u32)>,
        out: &mut Vec<Cx>,
        out_keys: &mut HashSet<(i64, i64)>,
    ) {
        if !walked.insert((dedup_key(z), depth)) {
            return;
        }
        let remaining = params.max_depth - depth;
        if !survives(
            corr,
            z,
            remaining,
            params.radius,
            nodes,
            params.node_budget,
            alive,
            dead,
        ) {
            return;
        }
        if depth > params.max_depth - tail && out_keys.insert(dedup_key(z)) {
            out.push(z);
        }
        if depth == params.max_depth || *nodes >= params.node_budget {
            return;
        }
        *nodes += 1;
        for w in power_forward(corr, z).values() {
            walk(corr, w, depth + 1, params, tail, nodes, alive, dead, walked, out, out_keys);
        }
    }

    let mut walked: HashSet<((i64, i64), u32)> = HashSet::new();
    walk(
        corr,
        z,
        0,
        params,
        tail,
        &mut nodes,
        &mut alive,
        &mut dead,
        &mut walked,
        &mut out,
        &mut out_keys,
    );
    out
}

/// Fraction of samples attracted to the given finite attractor or to ∞.
/// A sample counts when its verdict is Escaped, or when every collected
/// ω-limit point lies within 1e-3 of the attractor.
pub fn basin_check(
    corr: &PowerCorr,
    attractor: &[Cx],
    samples: &[Cx],
    params: &EscapeParams,
) -> f64 {
    assert!(!attractor.is_empty(), "attractor must be nonempty");
    if samples.is_empty() {
        return 0.0;
    }
    let tail = (params.max_depth / 4).max(1).min(params.max_depth - 1);
    let mut hits = 0usize;
    for &z in samples {
        let verdict = in_filled_julia(corr, z, params);
        match verdict.status {
            OrbitStatus::Escaped => hits += 1,
            OrbitStatus::Bounded => {
                let omega = omega_limit_sample(corr, z, params, tail);
                if omega.is_empty() {
                    continue;
                }
                let all_near = omega.iter().all(|w| {
                    attractor
                        .iter()
                        .any(|a| (w - a).norm() <= tol::BASIN_ATTRACTOR_DIST)
                });
                if all_near {
                    hits += 1;
                }
            }
            OrbitStatus::BudgetExhausted => {}
        }
    }
    hits as f64 / samples.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corr::power_relation_residual;

    fn cx(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    #[test]
    fn escape_radius_values() {
        let r = escape_radius(&PowerCorr::new(3, 2, cx(0.0, 0.0)).unwrap());
        assert!((r - 4.0).abs() < 1e-12);
        // Guarantee check at z = 5: every image modulus exceeds (3/2)·5.
        let corr = PowerCorr::new(3, 2, cx(0.0, 0.0)).unwrap();
        for w in power_forward(&corr, cx(5.0, 0.0)).values() {
            assert!(w.norm() >= 7.5);
        }
        assert!((5.0f64.powf(1.5) - 11.18).abs() < 0.01);

        let r2 = escape_radius(&PowerCorr::new(2, 1, cx(0.0, 0.0)).unwrap());
        assert!((r2 - 2.0).abs() < 1e-12);

        let r3 = escape_radius(&PowerCorr::new(5, 4, cx(26.0, 0.0)).unwrap());
        assert!((r3 - 52.0).abs() < 1e-12);
    }

    #[test]
    fn fixed_point_is_bounded_with_constant_witness() {
        let corr = PowerCorr::new(3, 2, cx(0.0, 0.0)).unwrap();
        let params = EscapeParams::for_corr(&corr).with_depth(50);
        let v = in_filled_julia(&corr, cx(1.0, 0.0), &params);
        assert_eq!(v.status, OrbitStatus::Bounded);
        let w = v.witness.unwrap();
        assert_eq!(w.len(), 50);
        assert!(w.iter().all(|z| (z - cx(1.0, 0.0)).norm() < 1e-9));
        // Witness pairs satisfy the relation.
        for pair in w.windows(2) {
            assert!(power_relation_residual(&corr, pair[0], pair[1]) <= tol::RELATION_RESIDUAL);
        }
    }

    #[test]
    fn far_point_escapes() {
        let corr = PowerCorr::new(3, 2, cx(0.0, 0.0)).unwrap();
        let params = EscapeParams::for_corr(&corr).with_depth(50);
        let v = in_filled_julia(&corr, cx(5.0, 0.0), &params);
        assert_eq!(v.status, OrbitStatus::Escaped);
    }

    #[test]
    fn escaped_is_stable_under_refinement() {
        let corr = PowerCorr::new(3, 2, cx(0.3, 0.2)).unwrap();
        let base = EscapeParams::for_corr(&corr).with_depth(30);
        for z in [cx(1.4, 0.2), cx(-1.1, 0.9), cx(2.0, 0.0)] {
            let v = in_filled_julia(&corr, z, &base);
            if v.status == OrbitStatus::Escaped {
                let refined = EscapeParams {
                    radius: base.radius * 2.0,
                    max_depth: base.max_depth * 2,
                    node_budget: base.node_budget,
                };
                assert_eq!(in_filled_julia(&corr, z, &refined).status, OrbitStatus::Escaped);
            }
        }
    }

    #[test]
    fn omega_contracts_to_zero() {
        // |z|^(3/2) ≤ |z|/√2 for |z| ≤ 1/2: everything spirals into 0.
        let corr = PowerCorr::new(3, 2, cx(0.0, 0.0)).unwrap();
        let params = EscapeParams::for_corr(&corr).with_depth(50);
        let omega = omega_limit_sample(&corr, cx(0.5, 0.0), &params, 5);
        assert!(!omega.is_empty());
        for w in omega {
            assert!(w.norm() <= 1e-6, "omega point {w} not near 0");
        }
    }

    #[test]
    fn omega_contains_fixed_point() {
        let corr = PowerCorr::new(3, 2, cx(0.0, 0.0)).unwrap();
        let params = EscapeParams::for_corr(&corr).with_depth(40).with_budget(200_000);
        let omega = omega_limit_sample(&corr, cx(1.0, 0.0), &params, 3);
        assert!(omega.iter().any(|w| (w - cx(1.0, 0.0)).norm() <= 1e-9));
    }

    #[test]
    fn omega_empty_on_escape() {
        let corr = PowerCorr::new(3, 2, cx(0.0, 0.0)).unwrap();
        let params = EscapeParams::for_corr(&corr).with_depth(50);
        assert!(omega_limit_sample(&corr, cx(5.0, 0.0), &params, 5).is_empty());
    }

    #[test]
    fn basin_fraction_inside_disk() {
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        let corr = PowerCorr::new(3, 2, cx(0.0, 0.0)).unwrap();
        let params = EscapeParams::for_corr(&corr).with_depth(40);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let samples: Vec<Cx> = (0..100)
            .map(|_| {
                loop {
                    let z = cx(rng.gen_range(-0.9..0.9), rng.gen_range(-0.9..0.9));
                    if z.norm() < 0.9 {
                        return z;
                    }
                }
            })
            .collect();
        let frac = basin_check(&corr, &[cx(0.0, 0.0)], &samples, &params);
        assert_eq!(frac, 1.0);
    }

    #[test]
    fn basin_fraction_at_repeller_and_outside() {
        let corr = PowerCorr::new(3, 2, cx(0.0, 0.0)).unwrap();
        let params = EscapeParams::for_corr(&corr).with_depth(40).with_budget(100_000);
        let frac = basin_check(&corr, &[cx(0.0, 0.0)], &[cx(1.0, 0.0)], &params);
        assert_eq!(frac, 0.0);
        let outside: Vec<Cx> = vec![cx(4.5, 0.0), cx(0.0, 5.0), cx(-6.0, 1.0)];
        assert_eq!(basin_check(&corr, &[cx(0.0, 0.0)], &outside, &params), 1.0);
    }

    #[test]
    fn budget_determinism() {
        let corr = PowerCorr::new(5, 4, cx(26.0, 0.0)).unwrap();
        let params = EscapeParams::for_corr(&corr).with_depth(25).with_budget(20_000);
        let a = in_filled_julia(&corr, cx(10.0, 3.0), &params);
        let b = in_filled_julia(&corr, cx(10.0, 3.0), &params);
        assert_eq!(a.status, b.status);
        assert_eq!(a.witness.is_some(), b.witness.is_some());
        if let (Some(wa), Some(wb)) = (a.witness, b.witness) {
            assert_eq!(wa.len(), wb.len());
            for (x, y) in wa.iter().zip(wb.iter()) {
                assert_eq!(x, y);
            }
        }
    }
}
