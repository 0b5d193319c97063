//! Certification engine: frame potentials, Welch bounds, projective and
//! simplex t-design checks, decoherence, MUB certification and the
//! Rényi-entropy uncertainty functional.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
// Needed for f64 math in no_std; std and rustdoc builds see it as unused.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::matcore::{Complex64, ComplexMatrix};

/// Compensated (Kahan) accumulator; deterministic in summation order and
/// accurate enough for ε assertions at the 1e-12 level.
#[derive(Default, Clone, Copy)]
pub(crate) struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Welch bound `1 / C(d+t-1, t)`, the minimum of the degree-t frame
/// potential over all constellations in dimension d.
pub fn welch_bound(dim: usize, t: u32) -> f64 {
    debug_assert!(dim >= 1 && t >= 1);
    1.0 / binomial((dim as u64) + (t as u64) - 1, t as u64) as f64
}

/// A weighted list of unit vectors in a fixed dimension, optionally grouped
/// into orthonormal bases; the object certified as a projective t-design.
#[derive(Debug, Clone)]
pub struct VectorConstellation {
    dim: usize,
    vectors: Vec<Vec<Complex64>>,
    weights: Vec<f64>,
}

impl VectorConstellation {
    /// Uniformly weighted constellation; every vector must have unit norm
    /// within 1e-10.
    pub fn new(dim: usize, vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        let m = vectors.len();
        if m == 0 {
            return Err(Error::InvalidInput("empty constellation".into()));
        }
        Self::with_weights(dim, vectors, vec![1.0 / m as f64; m])
    }

    pub fn with_weights(
        dim: usize,
        vectors: Vec<Vec<Complex64>>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::InvalidInput("empty constellation".into()));
        }
        if weights.len() != vectors.len() {
            return Err(Error::InvalidInput("one weight per vector required".into()));
        }
        for v in &vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
            let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if !norm2.is_finite() || (norm2.sqrt() - 1.0).abs() > 1e-10 {
                return Err(Error::InvalidInput(format_norm_error(norm2)));
            }
        }
        let wsum: f64 = weights.iter().sum();
        if weights.iter().any(|&w| !w.is_finite() || w <= 0.0) || (wsum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(
                "weights must be positive and sum to 1".into(),
            ));
        }
        Ok(VectorConstellation {
            dim,
            vectors,
            weights,
        })
    }

    /// Pool the columns of a list of unitary matrices (uniform weights).
    pub fn from_bases(bases: &[ComplexMatrix]) -> Result<Self> {
        if bases.is_empty() {
            return Err(Error::InvalidInput("no bases given".into()));
        }
        let dim = bases[0].dim();
        let mut vectors = Vec::with_capacity(bases.len() * dim);
        for b in bases {
            if b.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: b.dim(),
                });
            }
            for c in 0..dim {
                vectors.push(b.column(c));
            }
        }
        Self::new(dim, vectors)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Apply a global unitary to every vector.
    pub fn rotated(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: u.dim(),
            });
        }
        let vectors = self.vectors.iter().map(|v| u.mul_vec(v)).collect();
        Self::with_weights(self.dim, vectors, self.weights.clone())
    }
}

fn format_norm_error(norm2: f64) -> String {
    alloc::format!("vector is not unit norm (‖v‖² = {norm2})")
}

/// Frame potential `Σ_{i,j} w_i w_j |⟨ψ_i|ψ_j⟩|^{2t}`.
///
/// Kahan-compensated, evaluated in a fixed order; results are deterministic
/// given the input order.
pub fn frame_potential(c: &VectorConstellation, t: u32) -> f64 {
    debug_assert!(t >= 1);
    let m = c.vectors.len();
    let mut acc = KahanSum::default();
    for i in 0..m {
        let wi = c.weights[i];
        let self_overlap = overlap_sq(&c.vectors[i], &c.vectors[i]);
        acc.add(wi * wi * self_overlap.powi(t as i32));
        for j in (i + 1)..m {
            let o = overlap_sq(&c.vectors[i], &c.vectors[j]);
            acc.add(2.0 * wi * c.weights[j] * o.powi(t as i32));
        }
    }
    acc.value()
}

fn overlap_sq(a: &[Complex64], b: &[Complex64]) -> f64 {
    let mut re = KahanSum::default();
    let mut im = KahanSum::default();
    for (x, y) in a.iter().zip(b) {
        let p = x.conj() * y;
        re.add(p.re);
        im.add(p.im);
    }
    let (r, i) = (re.value(), im.value());
    r * r + i * i
}

/// Result of a projective t-design certification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignCertificate {
    pub t: u32,
    pub frame_potential: f64,
    pub welch_bound: f64,
    /// `frame_potential · C(d+t-1, t) − 1`; zero exactly for t-designs.
    pub epsilon: f64,
    pub is_design: bool,
}

/// Certify a constellation as a projective t-design within `tol` on ε.
pub fn certify_projective_design(
    c: &VectorConstellation,
    t: u32,
    tol: f64,
) -> DesignCertificate {
    let fp = frame_potential(c, t);
    let d_sym = binomial((c.dim() as u64) + (t as u64) - 1, t as u64) as f64;
    let epsilon = fp * d_sym - 1.0;
    DesignCertificate {
        t,
        frame_potential: fp,
        welch_bound: 1.0 / d_sym,
        epsilon,
        is_design: epsilon <= tol,
    }
}

/// A list of probability vectors; the object certified as a simplex t-design.
#[derive(Debug, Clone)]
pub struct SimplexPointSet {
    dim: usize,
    points: Vec<Vec<f64>>,
}

impl SimplexPointSet {
    /// Entries below −1e-12 are rejected; values in `[-1e-12, 0)` are clamped
    /// to zero. Every point must sum to 1 within 1e-10.
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("empty point set".into()));
        }
        let mut cleaned = Vec::with_capacity(points.len());
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
            let mut q = Vec::with_capacity(dim);
            for &x in &p {
                if !x.is_finite() || x < -1e-12 {
                    return Err(Error::InvalidInput(alloc::format!(
                        "probability entry {x} out of range"
                    )));
                }
                q.push(x.max(0.0));
            }
            let s: f64 = q.iter().sum();
            if (s - 1.0).abs() > 1e-10 {
                return Err(Error::InvalidInput(alloc::format!(
                    "point sums to {s}, not 1"
                )));
            }
            cleaned.push(q);
        }
        Ok(SimplexPointSet {
            dim,
            points: cleaned,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }
}

/// Decoherence: squared overlaps of every constellation vector with an
/// orthonormal basis (`None` = computational basis).
pub fn decohere(
    c: &VectorConstellation,
    basis: Option<&ComplexMatrix>,
) -> Result<SimplexPointSet> {
    if let Some(b) = basis {
        if b.dim() != c.dim() {
            return Err(Error::DimensionMismatch {
                expected: c.dim(),
                got: b.dim(),
            });
        }
        b.require_unitary(1e-10)?;
    }
    let d = c.dim();
    let points = c
        .vectors()
        .iter()
        .map(|v| match basis {
            None => v.iter().map(|z| z.norm_sqr()).collect(),
            Some(b) => (0..d)
                .map(|alpha| {
                    let overlap: Complex64 =
                        (0..d).map(|r| v[r].conj() * b[(r, alpha)]).sum();
                    overlap.norm_sqr()
                })
                .collect(),
        })
        .collect();
    SimplexPointSet::new(d, points)
}

/// Flat-measure average of `Π p_α^{κ_α}` over the simplex Δ_d:
/// `(d-1)!·Πκ_α! / (d-1+Σκ)!`, evaluated as an exact integer ratio.
///
/// Exponent lists shorter than `dim` are padded with zeros; longer lists are
/// rejected.
pub fn simplex_monomial_average(dim: usize, exponents: &[u32]) -> Result<f64> {
    if dim == 0 {
        return Err(Error::InvalidDimension(0));
    }
    if exponents.len() > dim {
        return Err(Error::InvalidInput(
            "more exponents than simplex coordinates".into(),
        ));
    }
    let total: u64 = exponents.iter().map(|&k| k as u64).sum();
    let mut numerator: u128 = 1;
    for &k in exponents {
        for j in 2..=(k as u128) {
            numerator = numerator.checked_mul(j).ok_or_else(overflow)?;
        }
    }
    let mut denominator: u128 = 1;
    for j in (dim as u128)..(dim as u128 + total as u128) {
        denominator = denominator.checked_mul(j).ok_or_else(overflow)?;
    }
    Ok(numerator as f64 / denominator as f64)
}

fn overflow() -> Error {
    Error::RangeError("factorial product overflows u128".into())
}

/// Report from a simplex t-design check.
#[derive(Debug, Clone)]
pub struct SimplexCheckReport {
    pub pass: bool,
    pub max_residual: f64,
    /// Exponent pattern and coordinate assignment achieving the residual.
    pub worst_exponents: Vec<u32>,
    pub worst_coords: Vec<usize>,
}

/// Check every monomial of total degree ≤ t against the exact simplex
/// average.
///
/// Exponent multisets are enumerated up to permutation symmetry, but each is
/// tested on every assignment of distinct coordinates, since the point set
/// itself carries no relabeling symmetry.
pub fn certify_simplex_design(s: &SimplexPointSet, t: u32, tol: f64) -> SimplexCheckReport {
    let d = s.dim();
    let mut report = SimplexCheckReport {
        pass: true,
        max_residual: 0.0,
        worst_exponents: Vec::new(),
        worst_coords: Vec::new(),
    };
    for degree in 1..=t {
        for parts in partitions(degree) {
            if parts.len() > d {
                continue;
            }
            let target = simplex_monomial_average(d, &parts)
                .expect("partition length bounded by dimension");
            let mut coords = Vec::with_capacity(parts.len());
            let mut used = vec![false; d];
            assign_and_check(s, &parts, target, &mut coords, &mut used, &mut report, tol);
        }
    }
    report
}

fn assign_and_check(
    s: &SimplexPointSet,
    parts: &[u32],
    target: f64,
    coords: &mut Vec<usize>,
    used: &mut [bool],
    report: &mut SimplexCheckReport,
    tol: f64,
) {
    if coords.len() == parts.len() {
        let mut acc = KahanSum::default();
        for p in s.points() {
            let mut prod = 1.0;
            for (slot, &c) in coords.iter().enumerate() {
                prod *= p[c].powi(parts[slot] as i32);
            }
            acc.add(prod);
        }
        let avg = acc.value() / s.len() as f64;
        let residual = (avg - target).abs();
        if residual > report.max_residual {
            report.max_residual = residual;
            report.worst_exponents = parts.to_vec();
            report.worst_coords = coords.clone();
        }
        if residual > tol {
            report.pass = false;
        }
        return;
    }
    for c in 0..used.len() {
        if !used[c] {
            used[c] = true;
            coords.push(c);
            assign_and_check(s, parts, target, coords, used, report, tol);
            coords.pop();
            used[c] = false;
        }
    }
}

/// Partitions of `n` into positive parts, descending within each partition.
fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        let mut part = max.min(n);
        while part >= 1 {
            prefix.push(part);
            rec(n - part, part, prefix, out);
            prefix.pop();
            part -= 1;
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Report of a mutual-unbiasedness check over a list of bases.
#[derive(Debug, Clone)]
pub struct MubReport {
    pub is_mub: bool,
    /// Largest deviation of a cross-basis `|⟨φ_α|ψ_β⟩|²` from 1/d.
    pub max_violation: f64,
    pub worst_pair: (usize, usize),
}

/// True iff every pair of bases is unbiased: all cross overlaps satisfy
/// `||⟨φ_α|ψ_β⟩|² − 1/d| ≤ tol`.
pub fn certify_mub(bases: &[ComplexMatrix], tol: f64) -> Result<MubReport> {
    if bases.len() < 2 {
        return Err(Error::InvalidInput("need at least two bases".into()));
    }
    let d = bases[0].dim();
    for b in bases {
        if b.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: b.dim(),
            });
        }
        b.require_unitary(tol.max(1e-12))?;
    }
    let flat = 1.0 / d as f64;
    let mut report = MubReport {
        is_mub: true,
        max_violation: 0.0,
        worst_pair: (0, 1),
    };
    for i in 0..bases.len() {
        for j in (i + 1)..bases.len() {
            let cross = bases[i].adjoint().mul(&bases[j]);
            for r in 0..d {
                for c in 0..d {
                    let v = (cross[(r, c)].norm_sqr() - flat).abs();
                    if v > report.max_violation {
                        report.max_violation = v;
                        report.worst_pair = (i, j);
                    }
                }
            }
        }
    }
    report.is_mub = report.max_violation <= tol;
    Ok(report)
}

/// Average Rényi-2 uncertainty `(1/L) Σ_j −log₂ Σ_α (p^j_α)²` of a state
/// against a list of orthonormal bases, with `p^j_α = |⟨φ|ψ^j_α⟩|²`.
pub fn uncertainty_average(state: &[Complex64], bases: &[ComplexMatrix]) -> Result<f64> {
    if bases.is_empty() {
        return Err(Error::InvalidInput("no bases given".into()));
    }
    let d = state.len();
    let norm2: f64 = state.iter().map(|z| z.norm_sqr()).sum();
    if (norm2.sqrt() - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidInput("state is not normalized".into()));
    }
    let mut acc = KahanSum::default();
    for b in bases {
        if b.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: b.dim(),
            });
        }
        b.require_unitary(1e-10)?;
        let mut purity = KahanSum::default();
        for alpha in 0..d {
            let overlap: Complex64 = (0..d).map(|r| state[r].conj() * b[(r, alpha)]).sum();
            let p = overlap.norm_sqr();
            purity.add(p * p);
        }
        acc.add(-purity.value().ln() / core::f64::consts::LN_2);
    }
    Ok(acc.value() / bases.len() as f64)
}
