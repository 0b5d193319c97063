//! Local optimizers: Levenberg-Marquardt for nonlinear least squares (with a
//! central-difference Jacobian) and a compass/pattern search for low-d
//! refinement. Both are deterministic given their inputs.

use alloc::vec;
use alloc::vec::Vec;
// Needed for f64 math in no_std; std and rustdoc builds see it as unused.
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, Copy)]
pub struct LmOptions {
    pub max_iters: usize,
    /// Stop once the sum of squared residuals drops below this.
    pub cost_target: f64,
    /// Central-difference step for the Jacobian.
    pub fd_step: f64,
    /// Initial damping, relative to max diag(JᵀJ).
    pub tau: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        LmOptions {
            max_iters: 400,
            cost_target: 0.0,
            fd_step: 1e-6,
            tau: 1e-3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LmOutcome {
    pub x: Vec<f64>,
    /// Final sum of squared residuals `‖r‖²`.
    pub cost: f64,
    pub iters: usize,
}

/// Minimize `‖r(x)‖²` by damped Gauss-Newton steps (Nielsen's μ update).
///
/// `residuals(x, out)` fills `out` with the residual vector. Accepted
/// iterations never increase the cost.
pub fn levenberg_marquardt(
    residuals: &mut dyn FnMut(&[f64], &mut [f64]),
    n_residuals: usize,
    x0: &[f64],
    opts: &LmOptions,
) -> LmOutcome {
    let n = x0.len();
    let m = n_residuals;
    let mut x = x0.to_vec();
    let mut r = vec![0.0; m];
    residuals(&x, &mut r);
    let mut cost = norm_sq(&r);

    let mut jac = vec![0.0; m * n];
    let mut r_plus = vec![0.0; m];
    let mut r_minus = vec![0.0; m];
    let mut mu = -1.0;
    let mut nu = 2.0;
    let mut iters = 0;

    while iters < opts.max_iters && cost > opts.cost_target {
        iters += 1;
        // Central-difference Jacobian.
        for j in 0..n {
            let saved = x[j];
            x[j] = saved + opts.fd_step;
            residuals(&x, &mut r_plus);
            x[j] = saved - opts.fd_step;
            residuals(&x, &mut r_minus);
            x[j] = saved;
            let inv = 1.0 / (2.0 * opts.fd_step);
            for i in 0..m {
                jac[i * n + j] = (r_plus[i] - r_minus[i]) * inv;
            }
        }
        // Normal equations: a = JᵀJ, g = Jᵀr.
        let mut a = vec![0.0; n * n];
        let mut g = vec![0.0; n];
        for i in 0..m {
            let ri = r[i];
            let row = &jac[i * n..(i + 1) * n];
            for p in 0..n {
                g[p] += row[p] * ri;
                for q in p..n {
                    a[p * n + q] += row[p] * row[q];
                }
            }
        }
        for p in 0..n {
            for q in 0..p {
                a[p * n + q] = a[q * n + p];
            }
        }
        if mu < 0.0 {
            let max_diag = (0..n).fold(0.0f64, |acc, p| acc.max(a[p * n + p]));
            mu = opts.tau * max_diag.max(1e-300);
        }

        let grad_inf = g.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
        if grad_inf < 1e-15 {
            break;
        }

        let mut improved = false;
        for _try in 0..50 {
            let mut damped = a.clone();
            for p in 0..n {
                damped[p * n + p] += mu;
            }
            let delta = match cholesky_solve_neg(&damped, &g, n) {
                Some(d) => d,
                None => {
                    mu *= nu;
                    nu *= 2.0;
                    continue;
                }
            };
            let step_norm = norm_sq(&delta).sqrt();
            if step_norm < 1e-14 * (norm_sq(&x).sqrt() + 1e-14) {
                return LmOutcome { x, cost, iters };
            }
            let x_new: Vec<f64> = x.iter().zip(&delta).map(|(a, b)| a + b).collect();
            residuals(&x_new, &mut r_plus);
            let cost_new = norm_sq(&r_plus);
            // Predicted reduction δᵀ(μδ − g) for the gain ratio.
            let predicted: f64 = delta
                .iter()
                .zip(&g)
                .map(|(&d, &gv)| d * (mu * d - gv))
                .sum();
            let rho = (cost - cost_new) / predicted.max(1e-300);
            if cost_new < cost && rho > 0.0 {
                x = x_new;
                r.copy_from_slice(&r_plus);
                cost = cost_new;
                let shrink = 1.0 - (2.0 * rho - 1.0).powi(3);
                mu *= shrink.max(1.0 / 3.0);
                nu = 2.0;
                improved = true;
                break;
            }
            mu *= nu;
            nu *= 2.0;
        }
        if !improved {
            break;
        }
    }
    LmOutcome { x, cost, iters }
}

fn norm_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// Solve `A δ = −g` for symmetric positive definite `A` via Cholesky.
fn cholesky_solve_neg(a: &[f64], g: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[i * n + j];
            for k in 0..j {
                sum -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if sum <= 0.0 {
                    return None;
                }
                l[i * n + i] = sum.sqrt();
            } else {
                l[i * n + j] = sum / l[j * n + j];
            }
        }
    }
    // Forward then backward substitution on −g.
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut sum = -g[i];
        for k in 0..i {
            sum -= l[i * n + k] * y[k];
        }
        y[i] = sum / l[i * n + i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut sum = y[i];
        for k in (i + 1)..n {
            sum -= l[k * n + i] * x[k];
        }
        x[i] = sum / l[i * n + i];
    }
    Some(x)
}

/// Compass (coordinate pattern) search: probe ±step along each axis, move to
/// the best improvement, halve the step otherwise. Deterministic.
pub fn compass_minimize(
    f: &mut dyn FnMut(&[f64]) -> f64,
    x0: &[f64],
    step0: f64,
    step_tol: f64,
    max_iters: usize,
) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut best = f(&x);
    let mut step = step0;
    let mut iters = 0;
    while step > step_tol && iters < max_iters {
        iters += 1;
        let mut moved = false;
        for j in 0..n {
            for dir in [1.0, -1.0] {
                let mut probe = x.clone();
                probe[j] += dir * step;
                let v = f(&probe);
                if v < best {
                    best = v;
                    x = probe;
                    moved = true;
                }
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    (x, best)
}
