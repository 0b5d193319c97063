//! Cross-module invariants: Welch inequality, design nesting, the
//! decoherence necessary condition, and the MUB ⟺ pooled-2-design
//! equivalence.

use cycdes::basisgen::{golden_basis, qubit_basis, skew_hadamard, two_amplitude_basis};
use cycdes::cyclic::{assemble, qubit_family, u1_design, CyclicDesign};
use cycdes::designlib::{
    certify_mub, certify_projective_design, certify_simplex_design, decohere, frame_potential,
    welch_bound, VectorConstellation,
};
use cycdes::diffsets::DifferenceSet;
use cycdes::matcore::{expm_hermitian, Complex64, ComplexMatrix, HermitianCoeffs};
use proptest::prelude::*;

fn random_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = cycdes::rng::Rng::new(seed);
    let coeffs = (0..dim * dim - 1)
        .map(|_| rng.uniform_in(-2.0, 2.0))
        .collect();
    expm_hermitian(&HermitianCoeffs::new(dim, coeffs).unwrap())
}

fn random_constellation(dim: usize, m: usize, seed: u64) -> VectorConstellation {
    let mut rng = cycdes::rng::Rng::new(seed);
    let vectors: Vec<Vec<Complex64>> = (0..m)
        .map(|_| {
            let mut v: Vec<Complex64> = (0..dim)
                .map(|_| Complex64::new(rng.normal(), rng.normal()))
                .collect();
            let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v.iter_mut().for_each(|z| *z /= n);
            v
        })
        .collect();
    VectorConstellation::new(dim, vectors).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn welch_inequality_holds(seed in 0u64..1_000_000, dim in 2usize..5, m in 1usize..9, t in 1u32..5) {
        let c = random_constellation(dim, m, seed);
        prop_assert!(frame_potential(&c, t) >= welch_bound(dim, t) - 1e-12);
    }

    #[test]
    fn frame_potential_unitary_invariance(seed in 0u64..1_000_000, dim in 2usize..5) {
        let c = random_constellation(dim, 5, seed);
        let rotated = c.rotated(&random_unitary(dim, seed ^ 0xabcd)).unwrap();
        for t in 1..=3u32 {
            prop_assert!((frame_potential(&c, t) - frame_potential(&rotated, t)).abs() < 1e-12);
        }
    }

    #[test]
    fn decohered_2_design_is_simplex_2_design(seed in 0u64..1_000_000) {
        // Necessary condition: decoherence of a projective 2-design in any
        // orthonormal basis is a simplex 2-design.
        let dset = DifferenceSet::new(7, vec![1, 2, 4]).unwrap();
        let design = assemble(&golden_basis(), &dset).unwrap();
        let basis = random_unitary(3, seed);
        let points = decohere(design.constellation(), Some(&basis)).unwrap();
        let report = certify_simplex_design(&points, 2, 1e-9);
        prop_assert!(report.pass, "residual {}", report.max_residual);
    }
}

#[test]
fn designs_are_nested() {
    // A t-design is automatically a t'-design for all t' < t.
    let design = u1_design();
    for t in [3u32, 2, 1] {
        assert!(design.certify(t, 1e-10).is_design, "t = {t}");
    }
    let dset = DifferenceSet::new(7, vec![1, 2, 4]).unwrap();
    let golden = assemble(&golden_basis(), &dset).unwrap();
    assert!(golden.certify(2, 1e-9).is_design);
    assert!(golden.certify(1, 1e-9).is_design);
}

#[test]
fn qubit_family_all_orders_certify() {
    for k in 2..=18usize {
        let design = qubit_family(k).unwrap();
        assert!(design.certify(2, 1e-10).is_design, "k = {k} at t = 2");
        assert!(design.certify(3, 1e-10).is_design, "k = {k} at t = 3");
        assert!(!design.certify(4, 1e-10).is_design, "k = {k} at t = 4");
    }
}

#[test]
fn mub_iff_pooled_2_design_in_d2() {
    // Forward: three MUB pool to a 2-design.
    let design = u1_design();
    let report = certify_mub(design.bases(), 1e-10).unwrap();
    assert!(report.is_mub);
    assert!(design.certify(2, 1e-10).is_design);

    // Reverse: a pooled 2-design of d+1 bases must be MUB; breaking one
    // basis destroys both sides.
    let broken = vec![
        design.bases()[0].clone(),
        design.bases()[1].clone(),
        design.bases()[1].clone(),
    ];
    assert!(!certify_mub(&broken, 1e-10).unwrap().is_mub);
    let pooled = VectorConstellation::from_bases(&broken).unwrap();
    assert!(!certify_projective_design(&pooled, 2, 1e-10).is_design);
}

#[test]
fn assembled_designs_close_and_saturate_t1() {
    let cases: Vec<CyclicDesign> = vec![
        assemble(&golden_basis(), &DifferenceSet::new(7, vec![1, 2, 4]).unwrap()).unwrap(),
        assemble(&qubit_basis(), &DifferenceSet::new(3, vec![0, 1]).unwrap()).unwrap(),
        assemble(
            &two_amplitude_basis(&skew_hadamard(4).unwrap()).unwrap(),
            &cycdes::diffsets::power_of_two_set(4).unwrap(),
        )
        .unwrap(),
    ];
    for design in &cases {
        assert!(design.closure_residual() < 1e-9);
        let t1 = design.certify(1, 1e-10);
        assert!(t1.is_design, "t1 epsilon {}", t1.epsilon);
        let fp = frame_potential(design.constellation(), 1);
        assert!((fp - welch_bound(design.dim(), 1)).abs() < 1e-10);
    }
}
