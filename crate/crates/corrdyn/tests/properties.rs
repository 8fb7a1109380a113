//! Property tests for the algebraic invariants of the branch layer and the
//! exact combinatorics.

use corrdyn::corr::{
    mating_backward, mating_forward, mating_relation_residual, mobius_j, power_backward,
    power_forward, power_relation_residual, Cx, MatingCoords, MatingCorr, PowerCorr,
};
use corrdyn::sturmian::{sturmian_word, word_matrix, Letter};
use num_bigint::BigInt;
use proptest::prelude::*;

fn arb_exp() -> impl Strategy<Value = (u32, u32)> {
    (2u32..9, 1u32..8).prop_filter("p > q", |(p, q)| p > q)
}

fn arb_cx(range: f64) -> impl Strategy<Value = Cx> {
    (-range..range, -range..range).prop_map(|(re, im)| Cx::new(re, im))
}

fn arb_klein_a() -> impl Strategy<Value = Cx> {
    // Interior of the Klein disk |a - 4| <= 3, away from a = 1.
    (0.0..2.8f64, 0.0..std::f64::consts::TAU)
        .prop_map(|(r, t)| Cx::new(4.0, 0.0) + Cx::from_polar(r, t))
        .prop_filter("a != 1", |a| (a - Cx::new(1.0, 0.0)).norm() > 1e-3)
}

proptest! {
    #[test]
    fn power_forward_relation_and_modulus((p, q) in arb_exp(), c in arb_cx(2.0), z in arb_cx(3.0)) {
        prop_assume!(z.norm() > 1e-3);
        let corr = PowerCorr::new(p, q, c).unwrap();
        let set = power_forward(&corr, z);
        prop_assert_eq!(set.branches.len(), q as usize);
        let target = z.norm().powf(corr.exp.beta());
        for w in set.values() {
            prop_assert!(power_relation_residual(&corr, z, w) <= 1e-10);
            prop_assert!(((w - c).norm() - target).abs() <= 1e-12 * target.max(1.0));
        }
        // Pairwise distinct branches away from the critical point.
        let vals: Vec<Cx> = set.values().collect();
        for i in 0..vals.len() {
            for j in (i + 1)..vals.len() {
                prop_assert!((vals[i] - vals[j]).norm() > 0.0);
            }
        }
    }

    #[test]
    fn power_backward_relation((p, q) in arb_exp(), c in arb_cx(2.0), w in arb_cx(3.0)) {
        prop_assume!((w - c).norm() > 1e-3);
        let corr = PowerCorr::new(p, q, c).unwrap();
        let set = power_backward(&corr, w);
        prop_assert_eq!(set.branches.len(), p as usize);
        for z in set.values() {
            prop_assert!(power_relation_residual(&corr, z, w) <= 1e-10);
        }
    }

    #[test]
    fn power_derivatives_match_finite_differences((p, q) in arb_exp(), c in arb_cx(1.5), z in arb_cx(2.0)) {
        prop_assume!(z.norm() > 0.05);
        let corr = PowerCorr::new(p, q, c).unwrap();
        let set = power_forward(&corr, z);
        // Need well-separated branches for stable matching across the step.
        let vals: Vec<Cx> = set.values().collect();
        let mut min_sep = f64::INFINITY;
        for i in 0..vals.len() {
            for j in (i + 1)..vals.len() {
                min_sep = min_sep.min((vals[i] - vals[j]).norm());
            }
        }
        let h = 1e-6 * z.norm().max(1.0);
        prop_assume!(min_sep > 100.0 * h);
        let ahead = power_forward(&corr, z + h);
        let behind = power_forward(&corr, z - h);
        for b in &set.branches {
            let d = b.derivative.unwrap();
            let wa = ahead.closest_to(b.value).unwrap().value;
            let wb = behind.closest_to(b.value).unwrap().value;
            let fd = (wa - wb) / (2.0 * h);
            prop_assert!(
                (fd - d).norm() <= 1e-6 * d.norm().max(1.0),
                "fd {} vs derivative {}", fd, d
            );
        }
    }

    #[test]
    fn mating_relation_and_composition(a in arb_klein_a(), z in arb_cx(2.0)) {
        prop_assume!((z + Cx::new(1.0, 0.0)).norm() > 1e-3);
        let corr = MatingCorr::new(a, MatingCoords::Original).unwrap();
        let set = mating_forward(&corr, z).unwrap();
        prop_assert_eq!(set.branches.len(), 2);
        for w in set.values() {
            prop_assert!(mating_relation_residual(&corr, z, w) <= 1e-10);
            // Every backward image of w satisfies the relation with w.
            if (w - Cx::new(1.0, 0.0)).norm() > 1e-6 && w.is_finite() {
                let back = mating_backward(&corr, w).unwrap();
                for x in back.values() {
                    prop_assert!(mating_relation_residual(&corr, x, w) <= 1e-8);
                }
            }
        }
    }

    #[test]
    fn mating_derivatives_match_finite_differences(a in arb_klein_a(), z in arb_cx(1.5)) {
        prop_assume!((z + Cx::new(1.0, 0.0)).norm() > 0.05);
        let corr = MatingCorr::new(a, MatingCoords::Original).unwrap();
        let set = mating_forward(&corr, z).unwrap();
        prop_assume!(!set.branch_point);
        let vals: Vec<Cx> = set.values().collect();
        prop_assume!(vals.iter().all(|v| v.is_finite() && v.norm() < 1e3));
        let sep = (vals[0] - vals[1]).norm();
        let h = 1e-7 * z.norm().max(1.0);
        prop_assume!(sep > 1000.0 * h);
        let ahead = mating_forward(&corr, z + h).unwrap();
        let behind = mating_forward(&corr, z - h).unwrap();
        for b in &set.branches {
            let d = b.derivative.unwrap();
            prop_assume!(d.norm() < 1e6);
            let wa = ahead.closest_to(b.value).unwrap().value;
            let wb = behind.closest_to(b.value).unwrap().value;
            let fd = (wa - wb) / (2.0 * h);
            prop_assert!(
                (fd - d).norm() <= 1e-5 * d.norm().max(1.0),
                "fd {} vs derivative {}", fd, d
            );
        }
    }

    #[test]
    fn involution_squares_to_identity(a in arb_klein_a(), z in arb_cx(5.0)) {
        prop_assume!((2.0 * z - (a + 1.0)).norm() > 1e-3);
        let jj = mobius_j(a, mobius_j(a, z));
        prop_assert!((jj - z).norm() <= 1e-12 * z.norm().max(1.0) * 100.0);
        prop_assert!((mobius_j(a, Cx::new(1.0, 0.0)) - Cx::new(1.0, 0.0)).norm() <= 1e-12);
        prop_assert!((mobius_j(a, a) - a).norm() <= 1e-12 * a.norm());
    }

    #[test]
    fn sturmian_balance_sampled(q in 51u64..200, k in 1u64..1000) {
        let p = 1 + k % (q / 2);
        prop_assume!(gcd(p, q) == 1);
        let w = sturmian_word(p, q).unwrap();
        prop_assert_eq!(w.alpha_count() as u64, p);
        // Balance over a sample of factor lengths.
        let n = w.len();
        for len in [2usize, 3, 5, n / 3 + 1, n / 2 + 1] {
            if len >= n {
                continue;
            }
            let mut lo = usize::MAX;
            let mut hi = 0;
            for start in 0..n {
                let ones = (0..len).filter(|i| w.0[(start + i) % n] == Letter::Alpha).count();
                lo = lo.min(ones);
                hi = hi.max(ones);
            }
            prop_assert!(hi - lo <= 1);
        }
    }

    #[test]
    fn word_matrix_det_and_cyclic_trace(q in 2u64..40, k in 1u64..1000) {
        let p = 1 + k % (q - 1);
        prop_assume!(gcd(p, q) == 1);
        let w = sturmian_word(p, q).unwrap();
        let m = word_matrix(&w);
        prop_assert_eq!(m.det(), BigInt::from(1));
        let tr = m.trace();
        let rot = word_matrix(&w.rotated(1 + (k as usize % w.len())));
        prop_assert_eq!(rot.trace(), tr);
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
