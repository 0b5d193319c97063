//! Tomography simulation: exact and shot-sampled measurement statistics
//! from a cyclic design, the linear reconstruction formula, the ∞-norm
//! error, and the experiment-time model.

use alloc::vec;
use alloc::vec::Vec;
// Needed for f64 math in no_std; std and rustdoc builds see it as unused.
#[allow(unused_imports)]
use num_traits::Float;

use crate::approx::{delta_bound, epsilon_of};
use crate::cyclic::CyclicDesign;
use crate::error::{Error, Result};
use crate::matcore::{eig_hermitian, expm_hermitian, Complex64, ComplexMatrix, HermitianCoeffs};
use crate::rng::Rng;

/// A validated density matrix: Hermitian, unit trace, eigenvalues ≥ −1e-10.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    dim: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        matrix.require_hermitian(1e-10)?;
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::InvalidInput(alloc::format!(
                "trace is {tr}, not 1"
            )));
        }
        let (evals, _) = eig_hermitian(&matrix)?;
        if evals.iter().any(|&e| e < -1e-10) {
            return Err(Error::InvalidInput(alloc::format!(
                "negative eigenvalue {:.3e}",
                evals[0]
            )));
        }
        Ok(DensityMatrix {
            dim: matrix.dim(),
            matrix,
        })
    }

    /// Pure state |ψ⟩⟨ψ| from a unit vector.
    pub fn pure(state: &[Complex64]) -> Result<Self> {
        let norm2: f64 = state.iter().map(|z| z.norm_sqr()).sum();
        if (norm2.sqrt() - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidInput("state is not normalized".into()));
        }
        let d = state.len();
        Self::new(ComplexMatrix::from_fn(d, |r, c| {
            state[r] * state[c].conj()
        }))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let scale = Complex64::new(1.0 / dim as f64, 0.0);
        DensityMatrix {
            dim,
            matrix: ComplexMatrix::identity(dim).scale(scale),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// Reproducible random full-rank mixed state: Haar-like eigenbasis from the
/// exponential of a random Hermitian generator, flat-Dirichlet eigenvalues.
pub fn random_mixed_state(dim: usize, seed: u64) -> Result<DensityMatrix> {
    let mut rng = Rng::new(seed);
    let coeffs: Vec<f64> = (0..dim * dim - 1).map(|_| rng.uniform_in(-2.0, 2.0)).collect();
    let v = expm_hermitian(&HermitianCoeffs::new(dim, coeffs)?);
    let mut weights: Vec<f64> = (0..dim)
        .map(|_| {
            let u = rng.uniform().max(1e-300);
            -u.ln()
        })
        .collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    let lam = ComplexMatrix::diagonal(
        &weights
            .iter()
            .map(|&w| Complex64::new(w, 0.0))
            .collect::<Vec<_>>(),
    );
    DensityMatrix::new(v.mul(&lam).mul(&v.adjoint()))
}

/// Measurement statistics mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shots {
    /// Born probabilities, no sampling noise.
    Exact,
    /// Multinomial frequencies with `count` shots per basis; per-basis seeds
    /// are derived as `seed + j`.
    Sampled { count: u64, seed: u64 },
}

/// Probability table `p[j][μ] = ⟨ψ_{j,μ}|ρ|ψ_{j,μ}⟩` (exact mode) or the
/// empirical frequencies of `count` multinomial draws per basis.
pub fn measure(
    design: &CyclicDesign,
    rho: &DensityMatrix,
    shots: Shots,
) -> Result<Vec<Vec<f64>>> {
    if rho.dim() != design.dim() {
        return Err(Error::DimensionMismatch {
            expected: design.dim(),
            got: rho.dim(),
        });
    }
    if let Shots::Sampled { count, .. } = shots {
        if count == 0 {
            return Err(Error::InvalidInput("need at least one shot".into()));
        }
    }
    let d = design.dim();
    let mut table = Vec::with_capacity(design.order_k() + 1);
    for (j, basis) in design.bases().iter().enumerate() {
        let mut row: Vec<f64> = (0..d)
            .map(|mu| {
                let col = basis.column(mu);
                let transformed = rho.matrix().mul_vec(&col);
                let p: Complex64 = col
                    .iter()
                    .zip(&transformed)
                    .map(|(c, t)| c.conj() * t)
                    .sum();
                p.re.max(0.0)
            })
            .collect();
        if let Shots::Sampled { count, seed } = shots {
            let mut rng = Rng::derived(seed, j as u64);
            let total: f64 = row.iter().sum();
            let mut counts = vec![0u64; d];
            for _ in 0..count {
                let mut x = rng.uniform() * total;
                let mut mu = 0;
                while mu + 1 < d && x >= row[mu] {
                    x -= row[mu];
                    mu += 1;
                }
                counts[mu] += 1;
            }
            row = counts.iter().map(|&c| c as f64 / count as f64).collect();
        }
        table.push(row);
    }
    Ok(table)
}

/// Linear reconstruction
/// `ρ̃ = (1/(k+1)) Σ_{j,μ} [p_{j,μ}(d+1) − 1] |ψ_{j,μ}⟩⟨ψ_{j,μ}|`.
///
/// Returned raw: Hermitian with trace 1 when rows sum to 1, but possibly
/// non-positive; see [`project_to_psd`] for the optional clipping step.
pub fn reconstruct(design: &CyclicDesign, probabilities: &[Vec<f64>]) -> Result<ComplexMatrix> {
    let d = design.dim();
    let k = design.order_k();
    if probabilities.len() != k + 1 || probabilities.iter().any(|row| row.len() != d) {
        return Err(Error::InvalidInput(alloc::format!(
            "probability table must be {}×{d}",
            k + 1
        )));
    }
    let mut out = ComplexMatrix::zeros(d);
    let weight = 1.0 / (k as f64 + 1.0);
    for (j, basis) in design.bases().iter().enumerate() {
        for (mu, &p) in probabilities[j].iter().enumerate() {
            let coeff = weight * (p * (d as f64 + 1.0) - 1.0);
            let col = basis.column(mu);
            for r in 0..d {
                for c in 0..d {
                    out[(r, c)] += col[r] * col[c].conj() * coeff;
                }
            }
        }
    }
    Ok(out)
}

/// Eigenvalue clipping + trace renormalization of a raw reconstruction;
/// off by default in the pipeline since the linear formula and its error
/// bound refer to the raw estimate.
pub fn project_to_psd(m: &ComplexMatrix) -> Result<DensityMatrix> {
    let (evals, vecs) = eig_hermitian(m)?;
    let clipped: Vec<f64> = evals.iter().map(|&e| e.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    if total <= 0.0 {
        return Err(Error::ConstructionError(
            "reconstruction has no positive weight".into(),
        ));
    }
    let lam = ComplexMatrix::diagonal(
        &clipped
            .iter()
            .map(|&e| Complex64::new(e / total, 0.0))
            .collect::<Vec<_>>(),
    );
    DensityMatrix::new(vecs.mul(&lam).mul(&vecs.adjoint()))
}

/// `‖a − b‖_∞`: the largest absolute eigenvalue of the (Hermitian)
/// difference.
pub fn error_infinity(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    let diff = a.sub(b);
    let residual = diff.hermiticity_residual();
    if residual > 1e-8 {
        return Err(Error::ContractViolation {
            what: "difference is not Hermitian",
            residual,
        });
    }
    // Symmetrize the sub-1e-8 noise away before the eigensolve.
    let half = Complex64::new(0.5, 0.0);
    let sym = diff.add(&diff.adjoint()).scale(half);
    let (evals, _) = eig_hermitian(&sym)?;
    Ok(evals.iter().fold(0.0f64, |m, &e| m.max(e.abs())))
}

/// Wall-clock model `T = N[k(k+1)/2·τ_int + (k+1)·τ_prep]` for N samples
/// per basis.
pub fn time_model(k: usize, shots_per_basis: u64, tau_int: f64, tau_prep: f64) -> f64 {
    let kf = k as f64;
    shots_per_basis as f64 * (kf * (kf + 1.0) / 2.0 * tau_int + (kf + 1.0) * tau_prep)
}

/// Full simulation record: probabilities, raw reconstruction, error against
/// the true state, the ε-design error bound, and the time model.
#[derive(Debug, Clone)]
pub struct TomographyReport {
    pub dim: usize,
    pub order_k: usize,
    /// (k+1)×d table.
    pub probabilities: Vec<Vec<f64>>,
    /// Shot count per basis; `None` = exact mode.
    pub shots: Option<u64>,
    pub reconstruction: ComplexMatrix,
    /// `‖ρ̃ − ρ‖_∞` against the true input state.
    pub error_infinity: f64,
    /// `d(d+1)·δ(ε)` with ε the design's t = 2 error.
    pub bound: f64,
    /// Design error used for the bound.
    pub epsilon: f64,
    pub time_model_seconds: f64,
}

/// Run measure → reconstruct → error/bound in one pass.
pub fn tomography_report(
    design: &CyclicDesign,
    rho: &DensityMatrix,
    shots: Shots,
    tau_int: f64,
    tau_prep: f64,
) -> Result<TomographyReport> {
    let probabilities = measure(design, rho, shots)?;
    let reconstruction = reconstruct(design, &probabilities)?;
    let error = error_infinity(&reconstruction, rho.matrix())?;
    let d = design.dim();
    let eps = epsilon_of(design, 2).max(0.0);
    let bound = d as f64 * (d as f64 + 1.0) * delta_bound(eps, d, 2)?;
    let per_basis = match shots {
        Shots::Exact => 1,
        Shots::Sampled { count, .. } => count,
    };
    Ok(TomographyReport {
        dim: d,
        order_k: design.order_k(),
        probabilities,
        shots: match shots {
            Shots::Exact => None,
            Shots::Sampled { count, .. } => Some(count),
        },
        reconstruction,
        error_infinity: error,
        bound,
        epsilon: eps,
        time_model_seconds: time_model(design.order_k(), per_basis, tau_int, tau_prep),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::sample_random_cyclic;
    use crate::basisgen::golden_basis;
    use crate::cyclic::{assemble, u1_design};
    use crate::diffsets::DifferenceSet;

    fn golden_design() -> CyclicDesign {
        let dset = DifferenceSet::new(7, vec![1, 2, 4]).unwrap();
        assemble(&golden_basis(), &dset).unwrap()
    }

    #[test]
    fn maximally_mixed_probabilities_are_flat() {
        let design = golden_design();
        let rho = DensityMatrix::maximally_mixed(3);
        let table = measure(&design, &rho, Shots::Exact).unwrap();
        for row in &table {
            for &p in row {
                assert!((p - 1.0 / 3.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn computational_state_in_identity_basis() {
        let design = u1_design();
        let rho = DensityMatrix::pure(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])
            .unwrap();
        let table = measure(&design, &rho, Shots::Exact).unwrap();
        assert!((table[0][0] - 1.0).abs() < 1e-14);
        assert!(table[0][1].abs() < 1e-14);
    }

    #[test]
    fn rows_sum_to_one() {
        let design = golden_design();
        let rho = random_mixed_state(3, 5).unwrap();
        for mode in [
            Shots::Exact,
            Shots::Sampled {
                count: 1000,
                seed: 3,
            },
        ] {
            let table = measure(&design, &rho, mode).unwrap();
            for row in &table {
                let s: f64 = row.iter().sum();
                assert!((s - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn exact_reconstruction_of_mixed_states() {
        let design = golden_design();
        for seed in 0..20 {
            let rho = random_mixed_state(3, seed).unwrap();
            let table = measure(&design, &rho, Shots::Exact).unwrap();
            let back = reconstruct(&design, &table).unwrap();
            let err = error_infinity(&back, rho.matrix()).unwrap();
            assert!(err < 1e-9, "seed {seed}: {err}");
        }
    }

    #[test]
    fn maximally_mixed_reconstructs_for_any_design() {
        // All bracket terms equal 1/d, so ρ̃ = I/d independent of the design
        // being a 2-design.
        let basis = golden_basis();
        let design = sample_random_cyclic(&basis, 9, 4).unwrap();
        let rho = DensityMatrix::maximally_mixed(3);
        let table = measure(&design, &rho, Shots::Exact).unwrap();
        let back = reconstruct(&design, &table).unwrap();
        assert!(back.max_abs_diff(rho.matrix()) < 1e-9);
    }

    #[test]
    fn reconstruction_is_linear() {
        let design = golden_design();
        let rho_a = random_mixed_state(3, 1).unwrap();
        let rho_b = random_mixed_state(3, 2).unwrap();
        let ta = measure(&design, &rho_a, Shots::Exact).unwrap();
        let tb = measure(&design, &rho_b, Shots::Exact).unwrap();
        let alpha = 0.3;
        let mixed: Vec<Vec<f64>> = ta
            .iter()
            .zip(&tb)
            .map(|(ra, rb)| {
                ra.iter()
                    .zip(rb)
                    .map(|(a, b)| alpha * a + (1.0 - alpha) * b)
                    .collect()
            })
            .collect();
        let lhs = reconstruct(&design, &mixed).unwrap();
        let rhs_a = reconstruct(&design, &ta).unwrap();
        let rhs_b = reconstruct(&design, &tb).unwrap();
        let rhs = rhs_a
            .scale(Complex64::new(alpha, 0.0))
            .add(&rhs_b.scale(Complex64::new(1.0 - alpha, 0.0)));
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn approximate_design_error_respects_bound() {
        let basis = golden_basis();
        for seed in 0..10 {
            let design = sample_random_cyclic(&basis, 30, 100 + seed).unwrap();
            let rho = random_mixed_state(3, seed).unwrap();
            let report =
                tomography_report(&design, &rho, Shots::Exact, 1e-3, 1e-2).unwrap();
            assert!(
                report.error_infinity <= report.bound,
                "seed {seed}: error {} > bound {}",
                report.error_infinity,
                report.bound
            );
        }
    }

    #[test]
    fn sampled_frequencies_converge() {
        let design = u1_design();
        let rho = random_mixed_state(2, 9).unwrap();
        let exact = measure(&design, &rho, Shots::Exact).unwrap();
        let sampled = measure(
            &design,
            &rho,
            Shots::Sampled {
                count: 1_000_000,
                seed: 1,
            },
        )
        .unwrap();
        let mut worst = 0.0f64;
        for (re, rs) in exact.iter().zip(&sampled) {
            for (a, b) in re.iter().zip(rs) {
                worst = worst.max((a - b).abs());
            }
        }
        assert!(worst < 5e-3, "max deviation {worst}");
    }

    #[test]
    fn shot_noise_decreases_with_count() {
        let design = golden_design();
        let rho = random_mixed_state(3, 77).unwrap();
        let mut errors = Vec::new();
        for count in [100u64, 10_000, 1_000_000] {
            let table = measure(&design, &rho, Shots::Sampled { count, seed: 11 }).unwrap();
            let back = reconstruct(&design, &table).unwrap();
            errors.push(error_infinity(&back, rho.matrix()).unwrap());
        }
        assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
    }

    #[test]
    fn error_infinity_cases() {
        let a = ComplexMatrix::diagonal(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        let b = ComplexMatrix::diagonal(&[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert_eq!(error_infinity(&a, &a).unwrap(), 0.0);
        assert!((error_infinity(&a, &b).unwrap() - 1.0).abs() < 1e-14);
        // A known Hermitian perturbation of norm 1e-3.
        let rho = random_mixed_state(3, 3).unwrap();
        let mut bumped = rho.matrix().clone();
        bumped[(0, 0)] += Complex64::new(1e-3, 0.0);
        let err = error_infinity(&bumped, rho.matrix()).unwrap();
        assert!((err - 1e-3).abs() < 1e-12);
    }

    #[test]
    fn time_model_examples() {
        assert_eq!(time_model(0, 7, 0.5, 2.0), 14.0);
        assert!((time_model(6, 100, 1e-3, 1e-2) - 9.1).abs() < 1e-12);
        assert_eq!(time_model(3, 10, 0.0, 0.25), 10.0);
    }

    #[test]
    fn psd_projection_restores_validity() {
        let design = golden_design();
        let rho = random_mixed_state(3, 13).unwrap();
        let table = measure(
            &design,
            &rho,
            Shots::Sampled {
                count: 200,
                seed: 2,
            },
        )
        .unwrap();
        let raw = reconstruct(&design, &table).unwrap();
        let projected = project_to_psd(&raw).unwrap();
        assert!((projected.matrix().trace().re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn density_matrix_validation() {
        let ok = DensityMatrix::maximally_mixed(2);
        assert_eq!(ok.dim(), 2);
        let not_trace_one = ComplexMatrix::identity(2);
        assert!(DensityMatrix::new(not_trace_one).is_err());
        let mut non_psd = ComplexMatrix::zeros(2);
        non_psd[(0, 0)] = Complex64::new(1.5, 0.0);
        non_psd[(1, 1)] = Complex64::new(-0.5, 0.0);
        assert!(DensityMatrix::new(non_psd).is_err());
    }
}
