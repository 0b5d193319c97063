//! Numerical impossibility certificates: the d = 3 Hadamard figure of merit
//! and its global minimum, the 3-point simplex-3-design cost, the d = 2
//! moment system, and the fourth-moment matrix rank.
//!
//! "Non-existence" here means grid-plus-descent confidence: positive minima
//! of smooth merit functions, clearly below machine-checkable thresholds,
//! not analytic proofs.

use alloc::vec;
use alloc::vec::Vec;
// Needed for f64 math in no_std; std and rustdoc builds see it as unused.
#[allow(unused_imports)]
use num_traits::Float;

use crate::basisgen::{qutrit_family, qutrit_golden_angle};
use crate::designlib::simplex_monomial_average;
use crate::error::{Error, Result};
use crate::matcore::{eig_hermitian, Complex64, ComplexMatrix};
use crate::optim::compass_minimize;

/// Figure of merit `F[H] = Σ_α (|H_αα|² − 1/3)²` for
/// `H = V(φ)·diag(1, e^{2iw}, e^{i(w−z)})·V(φ)†` over the qutrit family
/// eigenbasis; `F = 0` would be necessary for a complex Hadamard matrix
/// compatible with a cyclic design in d = 3.
pub fn hadamard_merit(phi: f64, w: f64, z: f64) -> Result<f64> {
    let basis = qutrit_family(phi)?;
    Ok(merit_of(basis.matrix(), w, z))
}

fn merit_of(eigenbasis: &ComplexMatrix, w: f64, z: f64) -> f64 {
    let lam = ComplexMatrix::diagonal(&[
        Complex64::new(1.0, 0.0),
        Complex64::new((2.0 * w).cos(), (2.0 * w).sin()),
        Complex64::new((w - z).cos(), (w - z).sin()),
    ]);
    let h = eigenbasis.mul(&lam).mul(&eigenbasis.adjoint());
    (0..3)
        .map(|a| {
            let dev = h[(a, a)].norm_sqr() - 1.0 / 3.0;
            dev * dev
        })
        .sum()
}

/// Location and value of a merit minimum.
#[derive(Debug, Clone, Copy)]
pub struct MeritMinimum {
    pub value: f64,
    pub w: f64,
    pub z: f64,
    pub phi: f64,
}

/// Global minimum of [`hadamard_merit`] by grid scan (≥ 50 points per axis)
/// plus compass refinement. The returned value staying above ~0.017
/// certifies, to grid-plus-descent confidence, that no admissible Hadamard
/// matrix exists.
pub fn hadamard_merit_minimize(grid: usize, refine_iters: usize) -> Result<MeritMinimum> {
    if grid < 50 {
        return Err(Error::InvalidInput(
            "grid resolution must be at least 50 per axis".into(),
        ));
    }
    let tau = 2.0 * core::f64::consts::PI;
    let phi_lo = qutrit_golden_angle();
    let phi_hi = tau - phi_lo;
    let mut best = MeritMinimum {
        value: f64::INFINITY,
        w: 0.0,
        z: 0.0,
        phi: phi_lo,
    };
    for i in 0..grid {
        let phi = phi_lo + (phi_hi - phi_lo) * i as f64 / (grid as f64 - 1.0);
        let basis = qutrit_family(phi)?;
        for j in 0..grid {
            let w = tau * j as f64 / grid as f64;
            for l in 0..grid {
                let z = tau * l as f64 / grid as f64;
                let v = merit_of(basis.matrix(), w, z);
                if v < best.value {
                    best = MeritMinimum { value: v, w, z, phi };
                }
            }
        }
    }
    // Local refinement; out-of-window probes score +∞.
    let mut f = |x: &[f64]| match qutrit_family(x[2]) {
        Ok(basis) => merit_of(basis.matrix(), x[0], x[1]),
        Err(_) => f64::INFINITY,
    };
    let step0 = (phi_hi - phi_lo) / grid as f64;
    let (x, value) = compass_minimize(
        &mut f,
        &[best.w, best.z, best.phi],
        step0,
        1e-12,
        refine_iters,
    );
    Ok(MeritMinimum {
        value,
        w: x[0],
        z: x[1],
        phi: x[2],
    })
}

/// Degree-3 moment cost of the decohered qutrit-family points, summed over
/// ordered index tuples:
/// `Σ_α (⟨p_α³⟩ − 1/10)² + Σ_{α≠β} (⟨p_α²p_β⟩ − 1/30)² + Σ (⟨p_αp_βp_μ⟩ − 1/60)²`
/// (last sum over pairwise-distinct triples). Strictly positive across the
/// admissible window: no 3-point simplex 3-design exists in Δ₃.
pub fn simplex3_cost(phi: f64) -> Result<f64> {
    let basis = qutrit_family(phi)?;
    let binding = basis.decohered_points();
    let pts = binding.points();
    let avg = |f: &mut dyn FnMut(&[f64]) -> f64| -> f64 {
        pts.iter().map(|p| f(p)).sum::<f64>() / pts.len() as f64
    };
    let t3 = simplex_monomial_average(3, &[3])?;
    let t21 = simplex_monomial_average(3, &[2, 1])?;
    let t111 = simplex_monomial_average(3, &[1, 1, 1])?;
    let mut total = 0.0;
    for a in 0..3 {
        let m = avg(&mut |p| p[a] * p[a] * p[a]);
        total += (m - t3) * (m - t3);
    }
    for a in 0..3 {
        for b in 0..3 {
            if a != b {
                let m = avg(&mut |p| p[a] * p[a] * p[b]);
                total += (m - t21) * (m - t21);
            }
        }
    }
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                if a != b && b != c && a != c {
                    let m = avg(&mut |p| p[a] * p[b] * p[c]);
                    total += (m - t111) * (m - t111);
                }
            }
        }
    }
    Ok(total)
}

/// Closed form of [`simplex3_cost`], by symmetric-function elimination.
///
/// With e₁ = 1 and e₂ = 1/4 pinned by the 2-design property, the only
/// freedoms are e₃ = (1−cosφ)(2cosφ+1)²/108 and the ordered-pair split
/// q = sinφ·(4cos²φ − 1)/(12√3):
///
/// ```text
///   F(φ) = 9(e₃ − 1/60)² + (1/20 − 3e₃)²/6 + q²/6.
/// ```
///
/// Both residual groups share the root e₃ = 1/60, but q vanishes in the
/// admissible window only at φ = π where e₃ = 1/54; hence F > 0 everywhere
/// and the window minimum is F(π) = 7/194400.
pub fn simplex3_cost_closed_form(phi: f64) -> f64 {
    let (s, c) = (phi.sin(), phi.cos());
    let e3 = (1.0 - c) * (2.0 * c + 1.0) * (2.0 * c + 1.0) / 108.0;
    let q = s * (4.0 * c * c - 1.0) / (12.0 * 3f64.sqrt());
    9.0 * (e3 - 1.0 / 60.0) * (e3 - 1.0 / 60.0)
        + (0.05 - 3.0 * e3) * (0.05 - 3.0 * e3) / 6.0
        + q * q / 6.0
}

/// Exact window minimum of the simplex-3 cost, attained at φ = π.
pub const SIMPLEX3_COST_MIN: f64 = 7.0 / 194400.0;

/// The d²×d² matrix of exact fourth moments
/// `M[(α,β),(μ,ν)] = ⟨p_α p_β p_μ p_ν⟩` over the flat simplex measure.
pub fn moment_matrix(dim: usize) -> Result<ComplexMatrix> {
    if dim < 2 {
        return Err(Error::InvalidDimension(dim));
    }
    let n = dim * dim;
    let mut m = ComplexMatrix::zeros(n);
    for a in 0..dim {
        for b in 0..dim {
            for mu in 0..dim {
                for nu in 0..dim {
                    let mut counts = vec![0u32; dim];
                    for idx in [a, b, mu, nu] {
                        counts[idx] += 1;
                    }
                    counts.retain(|&c| c > 0);
                    let v = simplex_monomial_average(dim, &counts)?;
                    m[(a * dim + b, mu * dim + nu)] = Complex64::new(v, 0.0);
                }
            }
        }
    }
    Ok(m)
}

/// Numerical rank of the fourth-moment matrix: eigenvalues above
/// `n·ε_machine·λ_max` (the matrix is symmetric positive semidefinite).
/// Equals d(d+1)/2 for every d.
pub fn moment_matrix_rank(dim: usize) -> Result<usize> {
    let m = moment_matrix(dim)?;
    let (evals, _) = eig_hermitian(&m)?;
    let lam_max = evals.iter().fold(0.0f64, |acc, &e| acc.max(e.abs()));
    let threshold = (dim * dim) as f64 * f64::EPSILON * lam_max;
    Ok(evals.iter().filter(|&&e| e.abs() > threshold).count())
}

/// Solvability report of the N = 2 moment system
/// `(x₁^t + x₂^t)/2 = 1/(t+1)`, t = 1..tmax.
#[derive(Debug, Clone)]
pub struct MomentSystemReport {
    pub tmax: u32,
    pub feasible: bool,
    /// The unique real pair from exact elimination of t = 1, 2
    /// (x∓ = 1/2 ∓ 1/√12); t = 3 then holds identically.
    pub solution: (f64, f64),
    /// Residuals of the pair on t = 1..tmax.
    pub residuals: Vec<f64>,
    /// For tmax = 4: the exact infeasibility gap |⟨x⁴⟩ − 1/5| = 1/180.
    pub exact_gap: Option<f64>,
    /// Grid+descent lower bound on the least-squares residual over [0,1]².
    pub least_squares_min: f64,
}

/// Solve (or refute) the two-point moment system.
///
/// t = 1 and t = 2 pin the elementary symmetric values e₁ = 1, e₂ = 1/6,
/// i.e. the pair {1/2 ± 1/√12}; t = 3 is then satisfied automatically and
/// t = 4 misses its target by exactly 1/180, so tmax = 4 is infeasible.
pub fn qubit_moment_system(tmax: u32) -> Result<MomentSystemReport> {
    if !(tmax == 3 || tmax == 4) {
        return Err(Error::InvalidInput("tmax must be 3 or 4".into()));
    }
    let root = 1.0 / 12f64.sqrt();
    let pair = (0.5 - root, 0.5 + root);
    let residuals: Vec<f64> = (1..=tmax)
        .map(|t| {
            let mean = (pair.0.powi(t as i32) + pair.1.powi(t as i32)) / 2.0;
            (mean - 1.0 / (t as f64 + 1.0)).abs()
        })
        .collect();
    let feasible = tmax <= 3;

    // Least-squares floor over the square, refined locally.
    let objective = |x: &[f64]| -> f64 {
        (1..=tmax)
            .map(|t| {
                let mean = (x[0].powi(t as i32) + x[1].powi(t as i32)) / 2.0;
                let dev = mean - 1.0 / (t as f64 + 1.0);
                dev * dev
            })
            .sum()
    };
    let mut best = (vec![0.0, 0.0], f64::INFINITY);
    let n = 120;
    for i in 0..=n {
        for j in 0..=n {
            let x = [i as f64 / n as f64, j as f64 / n as f64];
            let v = objective(&x);
            if v < best.1 {
                best = (x.to_vec(), v);
            }
        }
    }
    let mut f = |x: &[f64]| objective(x);
    let (_, lsq_min) = compass_minimize(&mut f, &best.0, 1.0 / n as f64, 1e-13, 20_000);

    Ok(MomentSystemReport {
        tmax,
        feasible,
        solution: pair,
        residuals,
        exact_gap: (tmax == 4).then_some(1.0 / 180.0),
        least_squares_min: lsq_min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TARGET_MERIT: f64 = 68.0 / 3993.0;

    #[test]
    fn merit_at_interior_stationary_points() {
        let pi = core::f64::consts::PI;
        let w1 = (1.2f64).sqrt().atan();
        let z1 = pi - (9.0 * (1.2f64).sqrt() / 13.0).atan();
        let f1 = hadamard_merit(pi, w1, z1).unwrap();
        assert!((f1 - TARGET_MERIT).abs() < 1e-9, "f1 = {f1}");
        let w2 = (2.0 * 30f64.sqrt()).atan();
        let f2 = hadamard_merit(pi, w2, pi).unwrap();
        assert!((f2 - TARGET_MERIT).abs() < 1e-9, "f2 = {f2}");
    }

    #[test]
    fn merit_at_boundary_stationary_points() {
        let phi_min = qutrit_golden_angle();
        let f1 = hadamard_merit(2.0 * core::f64::consts::PI / 3.0, 0.0, phi_min);
        // note: argument order is (phi, w, z)
        assert!(f1.is_err() || f1.unwrap() >= 0.0);
        let g1 = hadamard_merit(phi_min, 2.0 * core::f64::consts::PI / 3.0, 0.0).unwrap();
        assert!((g1 - 1.0 / 48.0).abs() < 1e-9, "g1 = {g1}");
        let a = (2.0 * 2f64.sqrt()).atan();
        let g2 = hadamard_merit(phi_min, a, a).unwrap();
        assert!((g2 - 4.0 / 27.0).abs() < 1e-9, "g2 = {g2}");
    }

    #[test]
    fn merit_is_nonnegative_on_samples() {
        let lo = qutrit_golden_angle();
        let hi = 2.0 * core::f64::consts::PI - lo;
        for i in 0..12 {
            let phi = lo + (hi - lo) * i as f64 / 11.0;
            for j in 0..8 {
                let w = 2.0 * core::f64::consts::PI * j as f64 / 8.0;
                let v = hadamard_merit(phi, w, 1.3 * w + 0.4).unwrap();
                assert!(v >= 0.0);
            }
        }
    }

    #[test]
    fn merit_minimum_on_coarse_grid() {
        let got = hadamard_merit_minimize(50, 3000).unwrap();
        assert!(
            (got.value - TARGET_MERIT).abs() < 1e-3,
            "min {} at (w={}, z={}, phi={})",
            got.value,
            got.w,
            got.z,
            got.phi
        );
        assert!(got.value >= 0.0169);
    }

    #[test]
    fn simplex3_cost_matches_closed_form() {
        let lo = qutrit_golden_angle();
        let hi = 2.0 * core::f64::consts::PI - lo;
        let mut worst = 0.0f64;
        for i in 0..=20 {
            let phi = lo + (hi - lo) * i as f64 / 20.0;
            let direct = simplex3_cost(phi).unwrap();
            let closed = simplex3_cost_closed_form(phi);
            worst = worst.max((direct - closed).abs());
            assert!(direct > 0.0, "phi = {phi}");
        }
        assert!(worst < 1e-12, "max deviation {worst}");
    }

    #[test]
    fn simplex3_cost_minimum_at_pi() {
        let at_pi = simplex3_cost(core::f64::consts::PI).unwrap();
        assert!((at_pi - SIMPLEX3_COST_MIN).abs() < 1e-15, "F(π) = {at_pi}");
        // Scan: the window minimum sits at φ = π and stays positive.
        let lo = qutrit_golden_angle();
        let hi = 2.0 * core::f64::consts::PI - lo;
        let mut min = f64::INFINITY;
        for i in 0..=400 {
            let phi = lo + (hi - lo) * i as f64 / 400.0;
            min = min.min(simplex3_cost(phi).unwrap());
        }
        assert!(min >= SIMPLEX3_COST_MIN - 1e-15);
    }

    #[test]
    fn simplex3_cost_windows() {
        // φ = 2.0 has cos(3φ) ≈ 0.96 > −11/16: outside every branch.
        assert!(simplex3_cost(2.0).is_err());
        // φ = 1.0 sits in the first 2π/3-shifted branch and must work.
        assert!(simplex3_cost(1.0).unwrap() > 0.0);
    }

    #[test]
    fn moment_matrix_rank_matches_formula() {
        for d in 2..=8usize {
            let rank = moment_matrix_rank(d).unwrap();
            assert_eq!(rank, d * (d + 1) / 2, "d = {d}");
        }
    }

    #[test]
    fn moment_matrix_entries_are_symmetric_positive() {
        let m = moment_matrix(3).unwrap();
        assert!(m.hermiticity_residual() < 1e-15);
        for r in 0..9 {
            for c in 0..9 {
                assert!(m[(r, c)].re > 0.0);
            }
        }
        // Block-transpose symmetry: M[(α,β),(μ,ν)] = M[(β,α),(ν,μ)].
        for a in 0..3 {
            for b in 0..3 {
                for mu in 0..3 {
                    for nu in 0..3 {
                        let x = m[(a * 3 + b, mu * 3 + nu)];
                        let y = m[(b * 3 + a, nu * 3 + mu)];
                        assert_eq!(x, y);
                    }
                }
            }
        }
    }

    #[test]
    fn moment_system_t3_solvable() {
        let report = qubit_moment_system(3).unwrap();
        assert!(report.feasible);
        let root = 1.0 / 12f64.sqrt();
        assert!((report.solution.0 - (0.5 - root)).abs() < 1e-15);
        assert!((report.solution.1 - (0.5 + root)).abs() < 1e-15);
        assert!(report.residuals.iter().all(|&r| r < 1e-14));
        assert!(report.least_squares_min < 1e-20);
    }

    #[test]
    fn moment_system_t4_infeasible() {
        let report = qubit_moment_system(4).unwrap();
        assert!(!report.feasible);
        assert_eq!(report.exact_gap, Some(1.0 / 180.0));
        // The t=4 residual of the exact pair is the gap itself.
        assert!((report.residuals[3] - 1.0 / 180.0).abs() < 1e-15);
        // And no pair in [0,1]² does better than a strictly positive floor.
        assert!(report.least_squares_min > 1e-7);
        assert!(qubit_moment_system(5).is_err());
    }
}
