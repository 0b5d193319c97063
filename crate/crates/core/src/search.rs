//! Numerical discovery of cyclic t-designs: multi-start minimization of the
//! frame potential of `{exp(iH)^j}` columns over the d²−1 Gell-Mann
//! coefficients, with an optional pinned eigenvalue spectrum.
//!
//! The optimizer works on the residual matrix `S − Π_sym/d_sym` of the
//! t-copy average, scaled so its squared Frobenius norm equals the design
//! error ε exactly; Levenberg-Marquardt then converges quadratically near
//! exact designs.

use alloc::vec;
use alloc::vec::Vec;
// Needed for f64 math in no_std; std and rustdoc builds see it as unused.
#[allow(unused_imports)]
use num_traits::Float;

use crate::cyclic::CyclicDesign;
use crate::designlib::binomial;
use crate::error::{Error, Result};
use crate::matcore::{
    eig_hermitian, expm_hermitian, Complex64, ComplexMatrix, HermitianCoeffs, PhaseList,
};
use crate::optim::{levenberg_marquardt, LmOptions};
use crate::rng::Rng;

/// Largest t-copy space dimension (d^t) the residual builder accepts.
const MAX_TENSOR_DIM: usize = 2048;

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub dim: usize,
    pub k: usize,
    pub t: u32,
    pub restarts: u32,
    pub seed: u64,
    pub max_iters: usize,
    /// ε threshold for reporting `Found` (default 1e-8).
    pub tol_accept: f64,
    /// Pin the eigenphases to `2π·N_β/(k+1)` and optimize the eigenbasis
    /// only.
    pub fixed_spectrum: Option<Vec<u64>>,
}

impl SearchConfig {
    pub fn new(dim: usize, k: usize, t: u32, seed: u64) -> Self {
        SearchConfig {
            dim,
            k,
            t,
            restarts: 50,
            seed,
            max_iters: 2000,
            tol_accept: 1e-8,
            fixed_spectrum: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::InvalidDimension(self.dim));
        }
        if self.k < 1 || self.t < 1 || self.restarts < 1 {
            return Err(Error::InvalidInput(
                "k, t and restarts must be positive".into(),
            ));
        }
        let dims = (self.dim as u64).pow(self.t);
        if dims > MAX_TENSOR_DIM as u64 {
            return Err(Error::RangeError(alloc::format!(
                "d^t = {dims} exceeds the supported t-copy space"
            )));
        }
        if let Some(spec) = &self.fixed_spectrum {
            if spec.len() != self.dim {
                return Err(Error::InvalidInput(
                    "fixed spectrum must have one integer per dimension".into(),
                ));
            }
            let modulus = self.k as u64 + 1;
            for (i, &a) in spec.iter().enumerate() {
                for &b in &spec[..i] {
                    if a % modulus == b % modulus {
                        return Err(Error::InvalidInput(
                            "fixed spectrum entries must be distinct mod k+1".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    Found,
    NotFoundWithinBudget,
}

/// Eigenphase report: integers over k+1 when every phase snaps to a root of
/// unity, raw radians otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumReport {
    Snapped(Vec<u64>),
    Raw(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub best_coeffs: HermitianCoeffs,
    pub best_epsilon: f64,
    pub best_restart: u32,
    pub dephased_spectrum: SpectrumReport,
    pub status: SearchStatus,
}

/// Snap phases to `2π·N/(k+1)` when all of them are within `1e-6·2π` of a
/// root of unity; the list is dephased so the first entry is 0.
pub fn spectrum_snap(phases: &PhaseList, k: usize) -> Option<Vec<u64>> {
    let modulus = k as u64 + 1;
    let mut ns = phases.snap_to_integers(modulus)?;
    let first = ns[0];
    for n in &mut ns {
        *n = (*n + modulus - first) % modulus;
    }
    Some(ns)
}

/// Symmetrizer on `(C^d)^{⊗t}`: average of the t! index permutations.
fn symmetric_projector(dim: usize, t: u32) -> ComplexMatrix {
    let n = dim.pow(t);
    let t = t as usize;
    // All permutations of 0..t (t ≤ 4 in practice).
    let mut perms: Vec<Vec<usize>> = vec![vec![]];
    for slot in 0..t {
        let mut next = Vec::new();
        for p in &perms {
            for pos in 0..=slot {
                let mut q = p.clone();
                q.insert(pos, slot);
                next.push(q);
            }
        }
        perms = next;
    }
    let weight = 1.0 / perms.len() as f64;
    let mut proj = ComplexMatrix::zeros(n);
    let digits = |mut x: usize| -> Vec<usize> {
        let mut d = vec![0; t];
        for slot in (0..t).rev() {
            d[slot] = x % dim;
            x /= dim;
        }
        d
    };
    for row in 0..n {
        let rd = digits(row);
        for perm in &perms {
            let mut col = 0usize;
            for slot in 0..t {
                col = col * dim + rd[perm[slot]];
            }
            proj[(row, col)] += Complex64::new(weight, 0.0);
        }
    }
    proj
}

/// Residual engine shared by both search modes: builds the constellation of
/// `W·Λ^j·W†` columns and writes `√d_sym·(S − Π_sym/d_sym)` entrywise.
/// The squared norm of the output equals ε at degree t.
struct ResidualEngine {
    dim: usize,
    k: usize,
    t: u32,
    d_sym: f64,
    target: ComplexMatrix,
}

impl ResidualEngine {
    fn new(dim: usize, k: usize, t: u32) -> Self {
        let d_sym = binomial((dim as u64) + (t as u64) - 1, t as u64) as f64;
        let proj = symmetric_projector(dim, t);
        let target = proj.scale(Complex64::new(1.0 / d_sym, 0.0));
        ResidualEngine {
            dim,
            k,
            t,
            d_sym,
            target,
        }
    }

    fn n_residuals(&self) -> usize {
        let n = self.dim.pow(self.t);
        2 * n * n
    }

    fn epsilon_residuals(&self, w: &ComplexMatrix, phases: &[f64], out: &mut [f64]) {
        let d = self.dim;
        let n = d.pow(self.t);
        let m = (self.k + 1) * d;
        let adjoint = w.adjoint();
        let mut s = ComplexMatrix::zeros(n);
        let mut tensor = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..=self.k {
            let lam: Vec<Complex64> = phases
                .iter()
                .map(|&mu| {
                    let arg = mu * j as f64;
                    Complex64::new(arg.cos(), arg.sin())
                })
                .collect();
            let basis = w.mul(&ComplexMatrix::diagonal(&lam)).mul(&adjoint);
            for col in 0..d {
                let v = basis.column(col);
                // t-fold tensor power of the column.
                tensor[0] = Complex64::new(1.0, 0.0);
                let mut len = 1;
                for _ in 0..self.t {
                    // Expand in place from the back.
                    for idx in (0..len).rev() {
                        let base = tensor[idx];
                        for (a, &va) in v.iter().enumerate() {
                            tensor[idx * d + a] = base * va;
                        }
                    }
                    len *= d;
                }
                for r in 0..n {
                    let tr = tensor[r];
                    for c in 0..n {
                        s[(r, c)] += tr * tensor[c].conj();
                    }
                }
            }
        }
        let weight = 1.0 / m as f64;
        let scale = self.d_sym.sqrt();
        for r in 0..n {
            for c in 0..n {
                let resid = (s[(r, c)] * weight - self.target[(r, c)]) * scale;
                out[2 * (r * n + c)] = resid.re;
                out[2 * (r * n + c) + 1] = resid.im;
            }
        }
    }
}

/// Outcome of one restart.
#[derive(Debug, Clone)]
pub struct RestartOutcome {
    pub restart: u32,
    pub epsilon: f64,
    pub coeffs: HermitianCoeffs,
}

/// Run a single restart of the configured search; used directly by callers
/// that parallelize restarts (results are combined by `(ε, restart)` order).
pub fn search_single_restart(config: &SearchConfig, restart: u32) -> Result<RestartOutcome> {
    config.validate()?;
    let engine = ResidualEngine::new(config.dim, config.k, config.t);
    let n_params = config.dim * config.dim - 1;
    let mut rng = Rng::derived(config.seed, restart as u64);
    let x0: Vec<f64> = (0..n_params).map(|_| rng.uniform_in(-1.5, 1.5)).collect();
    let opts = LmOptions {
        max_iters: config.max_iters,
        cost_target: (config.tol_accept * 1e-4).max(1e-26),
        ..LmOptions::default()
    };
    let spectrum_phases: Option<Vec<f64>> = config.fixed_spectrum.as_ref().map(|ns| {
        let tau = 2.0 * core::f64::consts::PI;
        ns.iter()
            .map(|&n| tau * (n % (config.k as u64 + 1)) as f64 / (config.k as f64 + 1.0))
            .collect()
    });
    let dim = config.dim;
    let mut residuals = |x: &[f64], out: &mut [f64]| {
        let coeffs = HermitianCoeffs::new(dim, x.to_vec()).expect("sized by construction");
        match &spectrum_phases {
            None => {
                // Free mode: U = exp(iH); eigen-data straight from H.
                let h = coeffs.to_matrix();
                let (evals, vecs) = eig_hermitian(&h).expect("generated Hermitian");
                engine.epsilon_residuals(&vecs, &evals, out);
            }
            Some(phases) => {
                // Pinned mode: eigenbasis W = exp(iG), phases fixed.
                let w = expm_hermitian(&coeffs);
                engine.epsilon_residuals(&w, phases, out);
            }
        }
    };
    let outcome = levenberg_marquardt(&mut residuals, engine.n_residuals(), &x0, &opts);
    Ok(RestartOutcome {
        restart,
        epsilon: outcome.cost,
        coeffs: HermitianCoeffs::new(config.dim, outcome.x)?,
    })
}

/// Multi-start search; the reported result is the `(ε, restart)` minimum
/// over all restarts, so serial and sharded schedules agree.
pub fn search_cyclic(config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    let mut best: Option<RestartOutcome> = None;
    for restart in 0..config.restarts {
        let outcome = search_single_restart(config, restart)?;
        let better = match &best {
            None => true,
            Some(b) => outcome.epsilon < b.epsilon,
        };
        if better {
            best = Some(outcome);
        }
    }
    let best = best.expect("restarts ≥ 1");
    finish_search(config, best)
}

/// Combine externally computed restart outcomes (e.g. from worker threads)
/// into the canonical result.
pub fn combine_restarts(
    config: &SearchConfig,
    mut outcomes: Vec<RestartOutcome>,
) -> Result<SearchResult> {
    if outcomes.is_empty() {
        return Err(Error::InvalidInput("no restart outcomes".into()));
    }
    outcomes.sort_by(|a, b| {
        a.epsilon
            .partial_cmp(&b.epsilon)
            .unwrap()
            .then(a.restart.cmp(&b.restart))
    });
    finish_search(config, outcomes.swap_remove(0))
}

fn finish_search(config: &SearchConfig, best: RestartOutcome) -> Result<SearchResult> {
    let design = rebuild_design(config, &best.coeffs)?;
    let epsilon = crate::approx::epsilon_of(&design, config.t);
    let spectrum = match spectrum_snap(design.phases(), config.k) {
        Some(ns) => SpectrumReport::Snapped(ns),
        None => SpectrumReport::Raw(design.phases().phases().to_vec()),
    };
    Ok(SearchResult {
        status: if epsilon <= config.tol_accept {
            SearchStatus::Found
        } else {
            SearchStatus::NotFoundWithinBudget
        },
        best_epsilon: epsilon,
        best_restart: best.restart,
        best_coeffs: best.coeffs,
        dephased_spectrum: spectrum,
    })
}

/// Rebuild the design encoded by a coefficient vector under the given
/// config (free: U = exp(iH); pinned: eigenbasis exp(iG) with the fixed
/// phases).
pub fn rebuild_design(config: &SearchConfig, coeffs: &HermitianCoeffs) -> Result<CyclicDesign> {
    match &config.fixed_spectrum {
        None => {
            let h = coeffs.to_matrix();
            let (evals, vecs) = eig_hermitian(&h)?;
            let phases = PhaseList::new(evals)?;
            CyclicDesign::from_eigensystem(&vecs, &phases, config.k)
        }
        Some(ns) => {
            let w = expm_hermitian(coeffs);
            CyclicDesign::from_phase_integers(&w, ns, config.k)
        }
    }
}

/// One cell of an existence scan.
#[derive(Debug, Clone)]
pub struct ScanCell {
    pub dim: usize,
    pub k: usize,
    pub epsilon: f64,
    pub found: bool,
}

/// Run [`search_cyclic`] over a (dims × ks) grid. Cells report `found` or a
/// best-effort ε; a search failure never claims nonexistence.
pub fn table2_scan(
    dims: &[usize],
    ks: &[usize],
    t: u32,
    restarts: u32,
    max_iters: usize,
    seed: u64,
) -> Result<Vec<ScanCell>> {
    let mut cells = Vec::with_capacity(dims.len() * ks.len());
    for &dim in dims {
        for &k in ks {
            let mut config = SearchConfig::new(dim, k, t, seed);
            config.restarts = restarts;
            config.max_iters = max_iters;
            let result = search_cyclic(&config)?;
            cells.push(ScanCell {
                dim,
                k,
                epsilon: result.best_epsilon,
                found: result.status == SearchStatus::Found,
            });
        }
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::epsilon_of;
    use crate::basisgen::golden_basis;
    use crate::cyclic::CyclicDesign;

    #[test]
    fn snap_examples() {
        let tau = 2.0 * core::f64::consts::PI;
        let p = PhaseList::new(vec![0.0, tau / 7.0, 3.0 * tau / 7.0, 4.0 * tau / 7.0]).unwrap();
        assert_eq!(spectrum_snap(&p, 6), Some(vec![0, 1, 3, 4]));
        let q = PhaseList::new(vec![0.0, 2.0 * tau / 5.0, 3.0 * tau / 5.0, 4.0 * tau / 5.0])
            .unwrap();
        assert_eq!(spectrum_snap(&q, 4), Some(vec![0, 2, 3, 4]));
        let r = PhaseList::new(vec![0.123, 1.456, 2.789]).unwrap();
        assert_eq!(spectrum_snap(&r, 6), None);
        // Dephasing: first entry forced to zero.
        let s = PhaseList::new(vec![tau / 3.0, 2.0 * tau / 3.0, 0.0]).unwrap();
        assert_eq!(spectrum_snap(&s, 2), Some(vec![0, 1, 2]));
    }

    #[test]
    fn symmetric_projector_is_projection() {
        for (dim, t) in [(2usize, 2u32), (3, 2), (2, 3)] {
            let p = symmetric_projector(dim, t);
            assert!(p.mul(&p).max_abs_diff(&p) < 1e-14);
            assert!(p.hermiticity_residual() < 1e-14);
            let d_sym = binomial((dim as u64) + (t as u64) - 1, t as u64) as f64;
            assert!((p.trace().re - d_sym).abs() < 1e-12);
        }
    }

    #[test]
    fn residual_norm_equals_epsilon() {
        // Cross-check the optimizer objective against the frame-potential ε
        // on a non-design configuration.
        let dim = 3;
        let k = 4;
        let engine = ResidualEngine::new(dim, k, 2);
        let basis = golden_basis();
        let phases = [0.3, 1.1, 4.0];
        let mut out = vec![0.0; engine.n_residuals()];
        engine.epsilon_residuals(basis.matrix(), &phases, &mut out);
        let cost: f64 = out.iter().map(|x| x * x).sum();
        let design =
            CyclicDesign::from_eigensystem(basis.matrix(), &PhaseList::new(phases.to_vec()).unwrap(), k)
                .unwrap();
        let eps = epsilon_of(&design, 2);
        assert!((cost - eps).abs() < 1e-12, "cost {cost} vs eps {eps}");
    }

    #[test]
    fn finds_qubit_mub() {
        let mut config = SearchConfig::new(2, 2, 2, 7);
        config.restarts = 10;
        let result = search_cyclic(&config).unwrap();
        assert_eq!(result.status, SearchStatus::Found);
        assert!(result.best_epsilon <= 1e-8, "ε = {}", result.best_epsilon);
    }

    #[test]
    fn search_is_deterministic_and_roundtrips() {
        let mut config = SearchConfig::new(2, 3, 2, 21);
        config.restarts = 4;
        let a = search_cyclic(&config).unwrap();
        let b = search_cyclic(&config).unwrap();
        assert_eq!(a.best_epsilon, b.best_epsilon);
        assert_eq!(a.best_coeffs.coeffs(), b.best_coeffs.coeffs());
        // Rebuilding from the stored coefficients reproduces ε.
        let design = rebuild_design(&config, &a.best_coeffs).unwrap();
        assert!((epsilon_of(&design, 2) - a.best_epsilon).abs() < 1e-12);
    }

    #[test]
    fn fixed_spectrum_qubit() {
        // d = 2, k = 2 with pinned spectrum {0, 1}: the cyclic MUB family.
        let mut config = SearchConfig::new(2, 2, 2, 3);
        config.restarts = 8;
        config.fixed_spectrum = Some(vec![0, 1]);
        let result = search_cyclic(&config).unwrap();
        assert_eq!(result.status, SearchStatus::Found);
        assert_eq!(result.dephased_spectrum, SpectrumReport::Snapped(vec![0, 1]));
    }

    #[test]
    fn difference_set_spectrum_beats_violating_one() {
        // Same golden eigenbasis, spectra {1,2,4} (a (7,3,1) set) versus
        // {1,2,3} (violates the quadruple condition: 1+3 ≡ 2+2 mod 7).
        let basis = golden_basis();
        let good = CyclicDesign::from_phase_integers(basis.matrix(), &[1, 2, 4], 6).unwrap();
        let bad = CyclicDesign::from_phase_integers(basis.matrix(), &[1, 2, 3], 6).unwrap();
        let eps_good = epsilon_of(&good, 2);
        let eps_bad = epsilon_of(&bad, 2);
        assert!(eps_good < 1e-9);
        assert!(eps_bad > 1e-3, "ε = {eps_bad}");
    }

    #[test]
    fn config_validation() {
        let mut config = SearchConfig::new(4, 6, 2, 1);
        config.fixed_spectrum = Some(vec![0, 1, 3]);
        assert!(search_cyclic(&config).is_err());
        config.fixed_spectrum = Some(vec![0, 1, 3, 8]); // 8 ≡ 1 mod 7
        assert!(search_cyclic(&config).is_err());
        let bad_t = SearchConfig::new(6, 2, 5, 1); // 6^5 too large
        assert!(search_cyclic(&bad_t).is_err());
    }

    #[test]
    fn combine_restarts_orders_lexicographically() {
        let config = SearchConfig::new(2, 2, 2, 7);
        let a = search_single_restart(&config, 0).unwrap();
        let b = search_single_restart(&config, 1).unwrap();
        let combined = combine_restarts(&config, vec![b.clone(), a.clone()]).unwrap();
        let serial_best = if a.epsilon <= b.epsilon { &a } else { &b };
        assert_eq!(combined.best_restart, serial_best.restart);
    }
}
