//! Assembly and representation of cyclic designs: the qubit generator, the
//! doubling recursion for maximal cyclic MUB, the difference-set assembly
//! `U = V·Λ·V†`, the d = 2 one-parameter family, and end-to-end
//! certification hooks.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
// Needed for f64 math in no_std; std and rustdoc builds see it as unused.
#[allow(unused_imports)]
use num_traits::Float;

use crate::basisgen::{qubit_basis, SimplexDesignBasis};
use crate::designlib::{certify_projective_design, DesignCertificate, VectorConstellation};
use crate::diffsets::DifferenceSet;
use crate::error::{Error, Result};
use crate::matcore::{eig_unitary, Complex64, ComplexMatrix, PhaseList};

/// Largest matrix order the doubling recursion is allowed to produce.
pub const MAX_CONSTRUCTION_DIM: usize = 64;

/// A cyclic measurement: the `(k+1)·d` columns of `U⁰, …, U^k` together
/// with the eigen-data of the generator.
#[derive(Debug, Clone)]
pub struct CyclicDesign {
    dim: usize,
    order_k: usize,
    generator: ComplexMatrix,
    /// Columns are the eigenvectors of the generator.
    eigenbasis: ComplexMatrix,
    phases: PhaseList,
    /// `U⁰ … U^k`; constellation vector (j, β) is column β of element j.
    bases: Vec<ComplexMatrix>,
    constellation: VectorConstellation,
}

impl CyclicDesign {
    /// Build from eigen-data: `U = W·diag(e^{iμ})·W†`, powers taken through
    /// the eigenbasis so every basis is unitary to machine precision.
    pub fn from_eigensystem(
        eigenbasis: &ComplexMatrix,
        phases: &PhaseList,
        k: usize,
    ) -> Result<Self> {
        let d = eigenbasis.dim();
        if phases.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: phases.dim(),
            });
        }
        eigenbasis.require_unitary(1e-10)?;
        let adjoint = eigenbasis.adjoint();
        let mut bases = Vec::with_capacity(k + 1);
        for j in 0..=k {
            let lam_j: Vec<Complex64> = phases
                .phases()
                .iter()
                .map(|&mu| {
                    let arg = mu * j as f64;
                    Complex64::new(arg.cos(), arg.sin())
                })
                .collect();
            let power = eigenbasis
                .mul(&ComplexMatrix::diagonal(&lam_j))
                .mul(&adjoint);
            bases.push(power);
        }
        let constellation = VectorConstellation::from_bases(&bases)?;
        Ok(CyclicDesign {
            dim: d,
            order_k: k,
            generator: bases[1.min(k)].clone(),
            eigenbasis: eigenbasis.clone(),
            phases: phases.clone(),
            bases,
            constellation,
        })
    }

    /// Build from a generator matrix, recovering eigen-data numerically.
    pub fn from_generator(u: &ComplexMatrix, k: usize) -> Result<Self> {
        let (phases, eigenbasis) = eig_unitary(u)?;
        let mut design = Self::from_eigensystem(&eigenbasis, &phases, k)?;
        // Keep the caller's exact generator.
        design.generator = u.clone();
        Ok(design)
    }

    /// Eigenbasis plus integer phases `μ_β = 2π·N_β/(k+1)`; no difference-set
    /// verification is applied (use [`assemble`] for the verified path).
    pub fn from_phase_integers(
        eigenbasis: &ComplexMatrix,
        ns: &[u64],
        k: usize,
    ) -> Result<Self> {
        if ns.len() != eigenbasis.dim() {
            return Err(Error::InvalidInput(format!(
                "{} phase integers for dimension {}",
                ns.len(),
                eigenbasis.dim()
            )));
        }
        let phases = PhaseList::from_integers(ns, k as u64 + 1)?;
        Self::from_eigensystem(eigenbasis, &phases, k)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order_k(&self) -> usize {
        self.order_k
    }

    pub fn generator(&self) -> &ComplexMatrix {
        &self.generator
    }

    pub fn eigenbasis(&self) -> &ComplexMatrix {
        &self.eigenbasis
    }

    pub fn phases(&self) -> &PhaseList {
        &self.phases
    }

    /// The k+1 measurement bases `U⁰ … U^k`.
    pub fn bases(&self) -> &[ComplexMatrix] {
        &self.bases
    }

    pub fn constellation(&self) -> &VectorConstellation {
        &self.constellation
    }

    pub fn certify(&self, t: u32, tol: f64) -> DesignCertificate {
        certify_projective_design(&self.constellation, t, tol)
    }

    /// `‖U^{k+1} − I‖_max`; near zero when all eigenphases are (k+1)-th
    /// roots of unity.
    pub fn closure_residual(&self) -> f64 {
        self.bases[self.order_k]
            .mul(&self.generator)
            .max_abs_diff(&ComplexMatrix::identity(self.dim))
    }

    /// Eigenvectors of the generator (columns of the eigenbasis).
    pub fn eigenvectors(&self) -> Vec<Vec<Complex64>> {
        (0..self.dim).map(|c| self.eigenbasis.column(c)).collect()
    }
}

/// The enphased Hadamard qubit generator `(1/√2)·[[1, −i], [1, i]]`, whose
/// powers generate the maximal cyclic MUB in d = 2.
pub fn qubit_u1() -> ComplexMatrix {
    let s = 1.0 / 2f64.sqrt();
    ComplexMatrix::new(
        2,
        vec![
            Complex64::new(s, 0.0),
            Complex64::new(0.0, -s),
            Complex64::new(s, 0.0),
            Complex64::new(0.0, s),
        ],
    )
    .expect("closed form")
}

/// The d = 2 cyclic MUB design (k = 2).
pub fn u1_design() -> CyclicDesign {
    CyclicDesign::from_generator(&qubit_u1(), 2).expect("U1 is unitary")
}

/// Diagonal matrix whose entries are the concatenated rows of `m`, rescaled
/// to unit modulus (the `diag[·]` operator of the doubling recursion).
fn diag_of_rows(m: &ComplexMatrix) -> ComplexMatrix {
    let scale = (m.dim() as f64).sqrt();
    let entries: Vec<Complex64> = m.entries().iter().map(|&z| z * scale).collect();
    ComplexMatrix::diagonal(&entries)
}

/// Doubling recursion for maximal cyclic MUB on power-of-two dimensions:
/// each step maps an order-m generator U to `diag[U]·(U ⊗ U)` of order m²,
/// starting from the qubit generator. `n` steps give dimension `2^(2^n)`;
/// only n = 1 (d = 4) and n = 2 (d = 16) fit under the configured maximum.
///
/// The `diag[·]` prefactor is chosen to restore unit modulus of the
/// diagonal entries (`√m`); the MUB property of the result is certified at
/// runtime rather than taken on faith.
pub fn construction_one(n: u32) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::InvalidInput("recursion depth must be ≥ 1".into()));
    }
    let mut u = qubit_u1();
    for _ in 0..n {
        let next_dim = u.dim() * u.dim();
        if next_dim > MAX_CONSTRUCTION_DIM {
            return Err(Error::RangeError(format!(
                "recursion would reach dimension {next_dim} > {MAX_CONSTRUCTION_DIM}"
            )));
        }
        u = diag_of_rows(&u).mul(&u.kron(&u));
    }
    u.require_unitary(1e-10)?;
    Ok(u)
}

/// The full cyclic design of `construction_one(n)`: d+1 bases (k = d).
pub fn construction_one_design(n: u32) -> Result<CyclicDesign> {
    let u = construction_one(n)?;
    let k = u.dim();
    CyclicDesign::from_generator(&u, k)
}

/// Main assembly: a verified (k+1, d, 1) difference set prescribes the
/// eigenphases `2π·N_β/(k+1)` on a simplex-design eigenbasis, giving a
/// cyclic 2-design `U = V·Λ·V†`.
pub fn assemble(basis: &SimplexDesignBasis, dset: &DifferenceSet) -> Result<CyclicDesign> {
    if dset.size() != basis.dim() {
        return Err(Error::InvalidInput(format!(
            "difference set has {} elements but the basis dimension is {}",
            dset.size(),
            basis.dim()
        )));
    }
    if !dset.is_verified() || dset.lambda() != 1 {
        return Err(Error::ContractViolation {
            what: "difference set is not verified with λ = 1",
            residual: f64::NAN,
        });
    }
    let k = (dset.modulus() - 1) as usize;
    CyclicDesign::from_phase_integers(basis.matrix(), dset.elements(), k)
}

/// The d = 2 family: the tilted qubit basis with eigenphases {0, 2π/(k+1)}
/// (a rigid rotation through the k+1 bases; prism/antiprism constellation).
/// Passes t = 2 and t = 3 certification for every k ≥ 2.
pub fn qubit_family(k: usize) -> Result<CyclicDesign> {
    if k < 2 {
        return Err(Error::InvalidInput(
            "k ≥ 2 is needed for a 2-design in d = 2".into(),
        ));
    }
    CyclicDesign::from_phase_integers(qubit_basis().matrix(), &[0, 1], k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basisgen::{golden_basis, skew_hadamard, two_amplitude_basis};
    use crate::designlib::{certify_mub, decohere, frame_potential, uncertainty_average};
    use crate::diffsets::{power_of_two_set, DifferenceSet};
    use crate::matcore::matrix_power_sequence;

    #[test]
    fn u1_powers_are_mub_and_2_design() {
        let u1 = qubit_u1();
        let powers = matrix_power_sequence(&u1, 2).unwrap();
        let report = certify_mub(&powers, 1e-10).unwrap();
        assert!(report.is_mub, "violation {}", report.max_violation);
        let design = u1_design();
        assert!(design.certify(2, 1e-10).is_design);
        assert!(design.certify(3, 1e-10).is_design);
        let c4 = design.certify(4, 1e-10);
        assert!(!c4.is_design);
        // ε at t = 4 is exactly 1/24 for the qubit MUB.
        assert!((c4.epsilon - 1.0 / 24.0).abs() < 1e-12);
    }

    #[test]
    fn u1_cubed_is_global_phase() {
        let u1 = qubit_u1();
        let cubed = u1.mul(&u1).mul(&u1);
        let phase = cubed[(0, 0)] / cubed[(0, 0)].norm();
        let normalized = cubed.scale(phase.conj());
        assert!(normalized.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn u1_design_eigen_data_reconstructs() {
        let design = u1_design();
        let lam = design.phases().to_diagonal();
        let back = design
            .eigenbasis()
            .mul(&lam)
            .mul(&design.eigenbasis().adjoint());
        assert!(back.max_abs_diff(design.generator()) < 1e-9);
        // U1 closes only projectively: U1³ = e^{−iπ/4}·I, so the strict
        // closure residual is the chord |e^{−iπ/4} − 1|.
        let chord = (Complex64::new(
            (core::f64::consts::FRAC_PI_4).cos(),
            -(core::f64::consts::FRAC_PI_4).sin(),
        ) - Complex64::new(1.0, 0.0))
        .norm();
        assert!((design.closure_residual() - chord).abs() < 1e-9);
    }

    #[test]
    fn diag_of_rows_concatenates() {
        let u1 = qubit_u1();
        let d = diag_of_rows(&u1);
        let s = 2f64.sqrt();
        for (i, &z) in u1.entries().iter().enumerate() {
            assert!((d[(i, i)] - z * s).norm() < 1e-15);
            assert!((d[(i, i)].norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn construction_one_first_level() {
        let u = construction_one(1).unwrap();
        assert_eq!(u.dim(), 4);
        assert!(u.unitarity_residual() < 1e-14);
        let design = construction_one_design(1).unwrap();
        assert_eq!(design.order_k(), 4);
        let report = certify_mub(design.bases(), 1e-10).unwrap();
        assert!(report.is_mub, "violation {}", report.max_violation);
        let cert = design.certify(2, 1e-10);
        assert!(cert.is_design, "epsilon {}", cert.epsilon);
        assert!(construction_one(3).is_err());
    }

    #[test]
    fn assemble_golden_seven_bases() {
        let dset = DifferenceSet::new(7, vec![1, 2, 4]).unwrap();
        let design = assemble(&golden_basis(), &dset).unwrap();
        assert_eq!(design.dim(), 3);
        assert_eq!(design.order_k(), 6);
        let c2 = design.certify(2, 1e-9);
        assert!(c2.is_design, "epsilon {}", c2.epsilon);
        let c1 = design.certify(1, 1e-10);
        assert!(c1.is_design, "epsilon {}", c1.epsilon);
        assert!(design.closure_residual() < 1e-9);
    }

    #[test]
    fn assemble_power_of_two_d4() {
        let basis = two_amplitude_basis(&skew_hadamard(4).unwrap()).unwrap();
        let design = assemble(&basis, &power_of_two_set(4).unwrap()).unwrap();
        assert_eq!(design.order_k(), 15);
        let cert = design.certify(2, 1e-9);
        assert!(cert.is_design, "epsilon {}", cert.epsilon);
    }

    #[test]
    fn assemble_rejects_size_mismatch() {
        let dset = DifferenceSet::new(7, vec![1, 2, 4]).unwrap();
        let b2 = qubit_basis();
        assert!(matches!(
            assemble(&b2, &dset),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn qubit_family_certifies() {
        let mub = qubit_family(2).unwrap();
        // Same frame potential as the U1 powers (rigid rotation of them).
        let fp_family = frame_potential(mub.constellation(), 2);
        let fp_u1 = frame_potential(u1_design().constellation(), 2);
        assert!((fp_family - fp_u1).abs() < 1e-12);

        let k10 = qubit_family(10).unwrap();
        assert!(k10.certify(2, 1e-10).is_design);
        assert!(k10.certify(3, 1e-10).is_design);
        assert!(!k10.certify(4, 1e-10).is_design);
        assert!(qubit_family(1).is_err());
    }

    #[test]
    fn decoherence_clusters_into_d_points() {
        let dset = DifferenceSet::new(7, vec![1, 2, 4]).unwrap();
        let design = assemble(&golden_basis(), &dset).unwrap();
        // In the eigenbasis, every power contributes the same d decohered
        // points; greedy radius-1e-9 clustering must find exactly d
        // clusters with (k+1)-fold multiplicity each.
        let pts = decohere(design.constellation(), Some(design.eigenbasis())).unwrap();
        let mut centers: Vec<(&[f64], usize)> = Vec::new();
        'outer: for p in pts.points() {
            for (c, count) in centers.iter_mut() {
                let dist = c
                    .iter()
                    .zip(p.iter())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max);
                if dist < 1e-9 {
                    *count += 1;
                    continue 'outer;
                }
            }
            centers.push((p, 1));
        }
        assert_eq!(centers.len(), 3);
        assert!(centers.iter().all(|&(_, c)| c == 7));
    }

    #[test]
    fn eigenvector_minimum_uncertainty() {
        // Any state sees average Rényi-2 uncertainty ≥ log₂(d+1) − 1 against
        // a cyclic 2-design; generator eigenvectors saturate it.
        let design = u1_design();
        for vec in design.eigenvectors() {
            let h = uncertainty_average(&vec, design.bases()).unwrap();
            assert!((h - (3f64.log2() - 1.0)).abs() < 1e-9, "got {h}");
        }
        let dset = DifferenceSet::new(7, vec![1, 2, 4]).unwrap();
        let golden = assemble(&golden_basis(), &dset).unwrap();
        for vec in golden.eigenvectors() {
            let h = uncertainty_average(&vec, golden.bases()).unwrap();
            assert!((h - 1.0).abs() < 1e-9, "got {h}");
        }
    }
}
