//! Dense complex linear algebra for small dimensions.
//!
//! Matrices are square, row-major, `Complex<f64>`. The Hermitian eigensolver
//! is a cyclic Jacobi sweep with complex rotations, which is accurate and
//! entirely adequate at the dimensions this crate targets (d ≲ 100). The
//! matrix exponential of a Hermitian generator goes through the
//! eigendecomposition, so `exp(iH)` is unitary to machine precision.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
// Needed for f64 math in no_std; std and rustdoc builds see it as unused.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

pub type Complex64 = num_complex::Complex<f64>;

const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix with a dimension tag; carrier for unitaries,
/// Hamiltonians and density matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    /// Row-major entries, `data[r * dim + c]`.
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Build from row-major entries; rejects wrong length and non-finite
    /// values.
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if data.len() != dim * dim {
            return Err(Error::InvalidInput(format!(
                "matrix of dim {dim} needs {} entries, got {}",
                dim * dim,
                data.len()
            )));
        }
        if !data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite matrix entry".into()));
        }
        Ok(ComplexMatrix { dim, data })
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            data: vec![C_ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C_ONE;
        }
        m
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    /// Assemble a matrix whose j-th column is `cols[j]`.
    pub fn from_columns(cols: &[Vec<Complex64>]) -> Result<Self> {
        let dim = cols.len();
        if dim == 0 || cols.iter().any(|c| c.len() != dim) {
            return Err(Error::InvalidInput("columns must form a square matrix".into()));
        }
        Ok(Self::from_fn(dim, |r, c| cols[c][r]))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self[(r, c)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)])
    }

    pub fn conjugate(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(r, c)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_fn(self.dim, |r, c| self[(r, c)] * s)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        Self::from_fn(self.dim, |r, c| self[(r, c)] + other[(r, c)])
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        Self::from_fn(self.dim, |r, c| self[(r, c)] - other[(r, c)])
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a == C_ZERO {
                    continue;
                }
                for c in 0..n {
                    out[(r, c)] += a * other[(k, c)];
                }
            }
        }
        out
    }

    /// Matrix-vector product `self · v`.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(self.dim, v.len());
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self[(r, c)] * v[c]).sum())
            .collect()
    }

    /// Kronecker product; the result has dimension `self.dim * other.dim`.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        let mut out = Self::zeros(n * m);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                for j in 0..m {
                    for l in 0..m {
                        out[(i * m + j, k * m + l)] = a * other[(j, l)];
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    /// `‖U†U − I‖_max`; zero for exactly unitary matrices.
    pub fn unitarity_residual(&self) -> f64 {
        self.adjoint().mul(self).max_abs_diff(&Self::identity(self.dim))
    }

    /// `‖M − M†‖_max`; zero for exactly Hermitian matrices.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for c in r..self.dim {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn require_unitary(&self, tol: f64) -> Result<()> {
        let residual = self.unitarity_residual();
        if residual > tol {
            return Err(Error::ContractViolation {
                what: "matrix is not unitary",
                residual,
            });
        }
        Ok(())
    }

    pub fn require_hermitian(&self, tol: f64) -> Result<()> {
        let residual = self.hermiticity_residual();
        if residual > tol {
            return Err(Error::ContractViolation {
                what: "matrix is not Hermitian",
                residual,
            });
        }
        Ok(())
    }
}

impl core::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl core::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

/// Real Gell-Mann coefficients `C_j` of a Hermitian matrix `H = Σ C_j λ_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianCoeffs {
    dim: usize,
    coeffs: Vec<f64>,
}

impl HermitianCoeffs {
    pub fn new(dim: usize, coeffs: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        if coeffs.len() != dim * dim - 1 {
            return Err(Error::InvalidInput(format!(
                "dim {dim} needs {} coefficients, got {}",
                dim * dim - 1,
                coeffs.len()
            )));
        }
        if !coeffs.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidInput("non-finite coefficient".into()));
        }
        Ok(HermitianCoeffs { dim, coeffs })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(dim, vec![0.0; dim * dim - 1])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Reconstruct `H = Σ C_j λ_j` without materialising the basis.
    ///
    /// Coefficient layout matches [`gellmann_basis`]: symmetric pairs,
    /// antisymmetric pairs, then diagonal generators.
    pub fn to_matrix(&self) -> ComplexMatrix {
        let d = self.dim;
        let mut h = ComplexMatrix::zeros(d);
        let mut idx = 0;
        for a in 0..d {
            for b in (a + 1)..d {
                let c = self.coeffs[idx];
                h[(a, b)] += Complex64::new(c, 0.0);
                h[(b, a)] += Complex64::new(c, 0.0);
                idx += 1;
            }
        }
        for a in 0..d {
            for b in (a + 1)..d {
                let c = self.coeffs[idx];
                h[(a, b)] += Complex64::new(0.0, -c);
                h[(b, a)] += Complex64::new(0.0, c);
                idx += 1;
            }
        }
        for l in 1..d {
            let c = self.coeffs[idx];
            let scale = (2.0 / (l as f64 * (l + 1) as f64)).sqrt();
            for j in 0..l {
                h[(j, j)] += Complex64::new(c * scale, 0.0);
            }
            h[(l, l)] -= Complex64::new(c * scale * l as f64, 0.0);
            idx += 1;
        }
        h
    }

    /// Project a traceless Hermitian matrix onto the basis, `C_j = Tr(λ_j M)/2`.
    pub fn project(m: &ComplexMatrix) -> Result<Self> {
        m.require_hermitian(1e-10)?;
        let d = m.dim();
        let mut coeffs = Vec::with_capacity(d * d - 1);
        for a in 0..d {
            for b in (a + 1)..d {
                coeffs.push(m[(a, b)].re);
            }
        }
        for a in 0..d {
            for b in (a + 1)..d {
                coeffs.push(-m[(a, b)].im);
            }
        }
        for l in 1..d {
            let scale = (2.0 / (l as f64 * (l + 1) as f64)).sqrt();
            let partial: f64 = (0..l).map(|j| m[(j, j)].re).sum();
            coeffs.push(scale * (partial - l as f64 * m[(l, l)].re) / 2.0);
        }
        Self::new(d, coeffs)
    }
}

/// List of eigenphases `μ_α ∈ [0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseList {
    dim: usize,
    phases: Vec<f64>,
}

impl PhaseList {
    /// Wraps each phase into `[0, 2π)`.
    pub fn new(phases: Vec<f64>) -> Result<Self> {
        if phases.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        if !phases.iter().all(|p| p.is_finite()) {
            return Err(Error::InvalidInput("non-finite phase".into()));
        }
        let tau = 2.0 * core::f64::consts::PI;
        let wrapped = phases
            .iter()
            .map(|&p| {
                let mut x = p % tau;
                if x < 0.0 {
                    x += tau;
                }
                if x >= tau {
                    x = 0.0;
                }
                x
            })
            .collect::<Vec<_>>();
        Ok(PhaseList {
            dim: wrapped.len(),
            phases: wrapped,
        })
    }

    /// Phases `2π N_β / den` from integers.
    pub fn from_integers(ns: &[u64], den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        let tau = 2.0 * core::f64::consts::PI;
        Self::new(
            ns.iter()
                .map(|&n| tau * (n % den) as f64 / den as f64)
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// Integers `N_α` with `μ_α = 2π·N_α/den`, when every phase lies within
    /// `1e-6·2π` of such a root of unity; no dephasing is applied.
    pub fn snap_to_integers(&self, den: u64) -> Option<Vec<u64>> {
        let tau = 2.0 * core::f64::consts::PI;
        let mut ns = Vec::with_capacity(self.dim);
        for &mu in &self.phases {
            let scaled = mu / tau * den as f64;
            let nearest = libm::round(scaled);
            if (scaled - nearest).abs() > 1e-6 * den as f64 {
                return None;
            }
            ns.push((nearest as i64).rem_euclid(den as i64) as u64);
        }
        Some(ns)
    }

    /// Diagonal unitary `Λ = diag(e^{iμ_α})`.
    pub fn to_diagonal(&self) -> ComplexMatrix {
        let entries: Vec<Complex64> = self
            .phases
            .iter()
            .map(|&p| Complex64::new(p.cos(), p.sin()))
            .collect();
        ComplexMatrix::diagonal(&entries)
    }
}

/// Generalized Gell-Mann matrices: Hermitian, traceless, `Tr(λ_j λ_k) = 2δ_jk`.
///
/// Order: symmetric `E_ab + E_ba` (a < b, lexicographic), antisymmetric
/// `-i(E_ab - E_ba)`, then the d−1 diagonal generators. For d = 2 this is
/// exactly (σ_x, σ_y, σ_z).
pub fn gellmann_basis(dim: usize) -> Result<Vec<ComplexMatrix>> {
    if dim < 2 {
        return Err(Error::InvalidDimension(dim));
    }
    let mut basis = Vec::with_capacity(dim * dim - 1);
    for a in 0..dim {
        for b in (a + 1)..dim {
            let mut m = ComplexMatrix::zeros(dim);
            m[(a, b)] = C_ONE;
            m[(b, a)] = C_ONE;
            basis.push(m);
        }
    }
    for a in 0..dim {
        for b in (a + 1)..dim {
            let mut m = ComplexMatrix::zeros(dim);
            m[(a, b)] = Complex64::new(0.0, -1.0);
            m[(b, a)] = Complex64::new(0.0, 1.0);
            basis.push(m);
        }
    }
    for l in 1..dim {
        let mut m = ComplexMatrix::zeros(dim);
        let scale = (2.0 / (l as f64 * (l + 1) as f64)).sqrt();
        for j in 0..l {
            m[(j, j)] = Complex64::new(scale, 0.0);
        }
        m[(l, l)] = Complex64::new(-scale * l as f64, 0.0);
        basis.push(m);
    }
    Ok(basis)
}

/// Hermitian eigendecomposition by cyclic Jacobi sweeps.
///
/// Returns eigenvalues in ascending order and the matrix of eigenvectors as
/// columns, orthonormal and dephased so the first non-negligible component of
/// each column is real positive.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    m.require_hermitian(1e-10)?;
    let n = m.dim();
    // Work on the exactly Hermitian part; the input may carry ~1e-10 noise.
    let mut a = ComplexMatrix::from_fn(n, |r, c| {
        (m[(r, c)] + m[(c, r)].conj()) * Complex64::new(0.5, 0.0)
    });
    let mut q = ComplexMatrix::identity(n);

    let scale = a.max_abs().max(1.0);
    let stop = 1e-15 * scale;
    for _sweep in 0..80 {
        let mut off = 0.0f64;
        for p in 0..n {
            for r in (p + 1)..n {
                off = off.max(a[(p, r)].norm());
            }
        }
        if off <= stop {
            break;
        }
        for p in 0..n {
            for r in (p + 1)..n {
                let apq = a[(p, r)];
                let norm = apq.norm();
                if norm <= stop * 1e-2 {
                    continue;
                }
                let u = apq / norm;
                let app = a[(p, p)].re;
                let aqq = a[(r, r)].re;
                let tau = (aqq - app) / (2.0 * norm);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Right multiply A and Q by V, left multiply A by V†, where
                // V acts on columns (p, r) as [[c, s], [-s·conj(u), c·conj(u)]].
                let cu = u.conj();
                for i in 0..n {
                    let aip = a[(i, p)];
                    let air = a[(i, r)];
                    a[(i, p)] = aip * c - air * cu * s;
                    a[(i, r)] = aip * s + air * cu * c;
                    let qip = q[(i, p)];
                    let qir = q[(i, r)];
                    q[(i, p)] = qip * c - qir * cu * s;
                    q[(i, r)] = qip * s + qir * cu * c;
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let arj = a[(r, j)];
                    a[(p, j)] = apj * c - arj * u * s;
                    a[(r, j)] = apj * s + arj * u * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::from_fn(n, |r, c| q[(r, order[c])]);
    dephase_columns(&mut vectors);
    Ok((eigenvalues, vectors))
}

/// Rotate each column so its first component with modulus above 1e-8 is real
/// positive.
pub(crate) fn dephase_columns(m: &mut ComplexMatrix) {
    let n = m.dim();
    for c in 0..n {
        let mut phase = None;
        for r in 0..n {
            let z = m[(r, c)];
            if z.norm() > 1e-8 {
                phase = Some(z / z.norm());
                break;
            }
        }
        if let Some(ph) = phase {
            let inv = ph.conj();
            for r in 0..n {
                m[(r, c)] *= inv;
            }
        }
    }
}

/// Unitary `U = exp(iH)` for `H = Σ C_j λ_j`, via the eigendecomposition of H
/// (exact for Hermitian input, no series truncation).
pub fn expm_hermitian(h: &HermitianCoeffs) -> ComplexMatrix {
    let matrix = h.to_matrix();
    let (evals, vecs) = eig_hermitian(&matrix).expect("generated Hermitian matrix");
    exp_i_from_eig(&evals, &vecs)
}

/// `exp(iH)` from an already-computed eigensystem of H.
pub(crate) fn exp_i_from_eig(evals: &[f64], vecs: &ComplexMatrix) -> ComplexMatrix {
    let n = vecs.dim();
    let mut scaled = vecs.clone();
    for c in 0..n {
        let ph = Complex64::new(evals[c].cos(), evals[c].sin());
        for r in 0..n {
            scaled[(r, c)] *= ph;
        }
    }
    scaled.mul(&vecs.adjoint())
}

/// Eigendecomposition of a unitary matrix: phases `μ_α` with
/// `U = W·diag(e^{iμ_α})·W†` and eigenvector columns `W`.
///
/// Diagonalizes a generic real combination of the commuting Hermitian parts
/// `(U + U†)/2` and `(U − U†)/(2i)`; a few mixing angles are tried so that
/// accidental collisions `cos μ + γ sin μ` of distinct eigenphases do not
/// go unnoticed. Columns are sorted by ascending phase and dephased.
pub fn eig_unitary(u: &ComplexMatrix) -> Result<(PhaseList, ComplexMatrix)> {
    u.require_unitary(1e-10)?;
    let n = u.dim();
    let half = Complex64::new(0.5, 0.0);
    let half_i = Complex64::new(0.0, -0.5);
    let udag = u.adjoint();
    let h_re = u.add(&udag).scale(half);
    let h_im = u.sub(&udag).scale(half_i);
    for gamma in [0.6180339887498949, 1.7320508075688772, 0.2928932188134525] {
        let m = h_re.add(&h_im.scale(Complex64::new(gamma, 0.0)));
        let (_, vecs) = eig_hermitian(&m)?;
        let d = vecs.adjoint().mul(u).mul(&vecs);
        let mut offdiag = 0.0f64;
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    offdiag = offdiag.max(d[(r, c)].norm());
                }
            }
        }
        if offdiag > 1e-8 {
            continue;
        }
        let tau = 2.0 * core::f64::consts::PI;
        let mut order: Vec<usize> = (0..n).collect();
        let phase_of = |c: usize| {
            let z = d[(c, c)];
            let mut p = z.im.atan2(z.re);
            if p < 0.0 {
                p += tau;
            }
            p
        };
        order.sort_by(|&a, &b| phase_of(a).partial_cmp(&phase_of(b)).unwrap());
        let phases = PhaseList::new(order.iter().map(|&c| phase_of(c)).collect())?;
        let mut sorted = ComplexMatrix::from_fn(n, |r, c| vecs[(r, order[c])]);
        dephase_columns(&mut sorted);
        // Reconstruction guard: W·Λ·W† must reproduce U.
        let lam = phases.to_diagonal();
        let back = sorted.mul(&lam).mul(&sorted.adjoint());
        if back.max_abs_diff(u) <= 1e-9 {
            return Ok((phases, sorted));
        }
    }
    Err(Error::ContractViolation {
        what: "unitary eigendecomposition did not converge",
        residual: f64::NAN,
    })
}

/// The powers `U^0, U^1, …, U^k` of a unitary matrix.
pub fn matrix_power_sequence(u: &ComplexMatrix, k: usize) -> Result<Vec<ComplexMatrix>> {
    u.require_unitary(1e-10)?;
    let mut powers = Vec::with_capacity(k + 1);
    powers.push(ComplexMatrix::identity(u.dim()));
    for j in 1..=k {
        let next = powers[j - 1].mul(u);
        powers.push(next);
    }
    Ok(powers)
}
