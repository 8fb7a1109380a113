//! Aberth–Ehrlich simultaneous polynomial root finding with random
//! perturbation restarts, as pinned by the corr-core design decisions.

use num_complex::Complex64 as Cx;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tol;

fn eval_with_deriv(coeffs: &[Cx], z: Cx) -> (Cx, Cx) {
    let mut p = Cx::new(0.0, 0.0);
    let mut dp = Cx::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn coefficient_scale(coeffs: &[Cx]) -> f64 {
    coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1.0)
}

/// All roots of the polynomial with the given ascending coefficients.
/// Leading zero coefficients are trimmed; the constant polynomial is an
/// error. Residuals are verified against [`tol::ROOT_RESIDUAL`].
pub fn aberth_roots(coeffs: &[Cx]) -> Result<Vec<Cx>> {
    let mut cs: Vec<Cx> = coeffs.to_vec();
    while cs.len() > 1 && cs.last().unwrap().norm() == 0.0 {
        cs.pop();
    }
    let n = cs.len() - 1;
    if n == 0 {
        return Err(Error::InvalidInput("constant polynomial has no roots".into()));
    }
    let scale = coefficient_scale(&cs);
    let mut rng = ChaCha8Rng::seed_from_u64(0xABE57);

    // Cauchy-style radius bound for initial placement.
    let lead = cs[n].norm();
    let radius = 1.0
        + cs[..n]
            .iter()
            .map(|c| c.norm() / lead)
            .fold(0.0, f64::max);

    for restart in 0..8 {
        let mut zs: Vec<Cx> = (0..n)
            .map(|k| {
                let angle = std::f64::consts::TAU * (k as f64 + 0.35) / n as f64
                    + 0.17 * restart as f64;
                let jitter = if restart == 0 {
                    1.0
                } else {
                    1.0 + 0.3 * (rng.gen::<f64>() - 0.5)
                };
                Cx::from_polar(radius * 0.7 * jitter, angle)
            })
            .collect();

        let mut converged = false;
        for _ in 0..400 {
            let mut max_step = 0.0f64;
            for i in 0..n {
                let (p, dp) = eval_with_deriv(&cs, zs[i]);
                if p.norm() == 0.0 {
                    continue;
                }
                let newton = if dp.norm() < 1e-300 {
                    Cx::new(1e-6, 1e-6)
                } else {
                    p / dp
                };
                let mut repulsion = Cx::new(0.0, 0.0);
                for j in 0..n {
                    if j != i {
                        let d = zs[i] - zs[j];
                        if d.norm() < 1e-14 {
                            repulsion += Cx::new(1e12, 0.0);
                        } else {
                            repulsion += Cx::new(1.0, 0.0) / d;
                        }
                    }
                }
                let denom = Cx::new(1.0, 0.0) - newton * repulsion;
                let step = if denom.norm() < 1e-300 {
                    newton
                } else {
                    newton / denom
                };
                zs[i] -= step;
                max_step = max_step.max(step.norm() / zs[i].norm().max(1.0));
            }
            if max_step < 1e-15 {
                converged = true;
                break;
            }
        }
        let _ = converged;

        // Newton polish and residual check.
        let mut worst = 0.0f64;
        for z in zs.iter_mut() {
            for _ in 0..4 {
                let (p, dp) = eval_with_deriv(&cs, *z);
                if dp.norm() > 1e-300 {
                    let step = p / dp;
                    if step.norm() <= 1.0 {
                        *z -= step;
                    }
                }
            }
            let (p, _) = eval_with_deriv(&cs, *z);
            let rel = p.norm() / (scale * z.norm().max(1.0).powi(n as i32));
            worst = worst.max(rel);
        }
        if worst <= tol::ROOT_RESIDUAL {
            zs.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
            return Ok(zs);
        }
    }
    let worst = {
        // Report the final residual for diagnostics.
        let (p, _) = eval_with_deriv(&cs, Cx::new(0.0, 0.0));
        p.norm()
    };
    Err(Error::RootFindingFailure { residual: worst })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_roots() {
        // z² - 3z + 2 = (z-1)(z-2)
        let roots = aberth_roots(&[Cx::new(2.0, 0.0), Cx::new(-3.0, 0.0), Cx::new(1.0, 0.0)])
            .unwrap();
        assert!(roots.iter().any(|z| (z - Cx::new(1.0, 0.0)).norm() < 1e-10));
        assert!(roots.iter().any(|z| (z - Cx::new(2.0, 0.0)).norm() < 1e-10));
    }

    #[test]
    fn roots_of_unity_degree_7() {
        // z^7 - 1
        let mut cs = vec![Cx::new(0.0, 0.0); 8];
        cs[0] = Cx::new(-1.0, 0.0);
        cs[7] = Cx::new(1.0, 0.0);
        let roots = aberth_roots(&cs).unwrap();
        assert_eq!(roots.len(), 7);
        for z in roots {
            assert!((z.norm() - 1.0).abs() < 1e-10);
            assert!((z.powu(7) - Cx::new(1.0, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn complex_coefficients() {
        // (z - (1+i))(z - 2i) = z² - (1+3i)z + (-2+2i)
        let roots = aberth_roots(&[
            Cx::new(-2.0, 2.0),
            Cx::new(-1.0, -3.0),
            Cx::new(1.0, 0.0),
        ])
        .unwrap();
        assert!(roots.iter().any(|z| (z - Cx::new(1.0, 1.0)).norm() < 1e-9));
        assert!(roots.iter().any(|z| (z - Cx::new(0.0, 2.0)).norm() < 1e-9));
    }
}
