//! JSON / CSV interchange formats.
//!
//! Matrices travel as `{"dim": n, "re": [[row-major]], "im": [[row-major]]}`
//! with ragged arrays rejected; serde_json prints f64 with shortest
//! round-trip decimals, so matrices survive the trip bit-exactly.

use anyhow::{bail, Context};
use cycdes::approx::ApproxDesignReport;
use cycdes::basisgen::SimplexDesignBasis;
use cycdes::cyclic::CyclicDesign;
use cycdes::designlib::{DesignCertificate, VectorConstellation};
use cycdes::diffsets::DifferenceSet;
use cycdes::matcore::{Complex64, ComplexMatrix, PhaseList};
use cycdes::search::{SearchConfig, SearchResult, SearchStatus, SpectrumReport};
use cycdes::tomo::TomographyReport;
use serde::{Deserialize, Serialize};

#[derive(Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let d = m.dim();
        let mut re = vec![vec![0.0; d]; d];
        let mut im = vec![vec![0.0; d]; d];
        for r in 0..d {
            for c in 0..d {
                re[r][c] = m[(r, c)].re;
                im[r][c] = m[(r, c)].im;
            }
        }
        MatrixJson { dim: d, re, im }
    }

    pub fn to_matrix(&self) -> anyhow::Result<ComplexMatrix> {
        let d = self.dim;
        if self.re.len() != d || self.im.len() != d {
            bail!("matrix row count does not match dim = {d}");
        }
        let mut data = Vec::with_capacity(d * d);
        for (re_row, im_row) in self.re.iter().zip(&self.im) {
            if re_row.len() != d || im_row.len() != d {
                bail!("ragged matrix row (expected {d} columns)");
            }
            for (&re, &im) in re_row.iter().zip(im_row) {
                data.push(Complex64::new(re, im));
            }
        }
        ComplexMatrix::new(d, data).map_err(|e| anyhow::anyhow!("{e}"))
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ConstellationJson {
    pub dim: usize,
    /// One vector per entry, each a list of `[re, im]` pairs.
    pub vectors: Vec<Vec<[f64; 2]>>,
    pub weights: Vec<f64>,
}

impl ConstellationJson {
    pub fn from_constellation(c: &VectorConstellation) -> Self {
        ConstellationJson {
            dim: c.dim(),
            vectors: c
                .vectors()
                .iter()
                .map(|v| v.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            weights: c.weights().to_vec(),
        }
    }

    pub fn to_constellation(&self) -> anyhow::Result<VectorConstellation> {
        let vectors: Vec<Vec<Complex64>> = self
            .vectors
            .iter()
            .map(|v| v.iter().map(|p| Complex64::new(p[0], p[1])).collect())
            .collect();
        VectorConstellation::with_weights(self.dim, vectors, self.weights.clone())
            .map_err(|e| anyhow::anyhow!("{e}"))
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CertificateJson {
    pub t: u32,
    pub frame_potential: f64,
    pub welch_bound: f64,
    pub epsilon: f64,
    pub is_design: bool,
}

impl CertificateJson {
    pub fn from_certificate(c: &DesignCertificate) -> Self {
        CertificateJson {
            t: c.t,
            frame_potential: c.frame_potential,
            welch_bound: c.welch_bound,
            epsilon: c.epsilon,
            is_design: c.is_design,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhasesJson {
    /// Exact eigenphases `2π·num/den`.
    Rational { num: Vec<u64>, den: u64 },
    /// Raw phases in radians.
    Raw { values: Vec<f64> },
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DesignJson {
    pub dim: usize,
    pub k: usize,
    pub generator: MatrixJson,
    pub eigenbasis: MatrixJson,
    pub phases: PhasesJson,
    pub certification: Vec<CertificateJson>,
}

impl DesignJson {
    pub fn from_design(design: &CyclicDesign, certs: &[DesignCertificate]) -> Self {
        // Snap without dephasing: the stored integers must rebuild the
        // generator exactly, global phase included.
        let phases = match design.phases().snap_to_integers(design.order_k() as u64 + 1) {
            Some(ns) => PhasesJson::Rational {
                num: ns,
                den: design.order_k() as u64 + 1,
            },
            None => PhasesJson::Raw {
                values: design.phases().phases().to_vec(),
            },
        };
        DesignJson {
            dim: design.dim(),
            k: design.order_k(),
            generator: MatrixJson::from_matrix(design.generator()),
            eigenbasis: MatrixJson::from_matrix(design.eigenbasis()),
            phases,
            certification: certs.iter().map(CertificateJson::from_certificate).collect(),
        }
    }

    pub fn to_design(&self) -> anyhow::Result<CyclicDesign> {
        let eigenbasis = self.eigenbasis.to_matrix()?;
        let design = match &self.phases {
            PhasesJson::Rational { num, den } => {
                if *den != self.k as u64 + 1 {
                    bail!("phase denominator {den} does not match k+1 = {}", self.k + 1);
                }
                CyclicDesign::from_phase_integers(&eigenbasis, num, self.k)
            }
            PhasesJson::Raw { values } => {
                let phases = PhaseList::new(values.clone()).map_err(|e| anyhow::anyhow!("{e}"))?;
                CyclicDesign::from_eigensystem(&eigenbasis, &phases, self.k)
            }
        }
        .map_err(|e| anyhow::anyhow!("{e}"))?;
        // Cross-check against the stored generator.
        let stored = self.generator.to_matrix()?;
        let diff = stored.max_abs_diff(design.generator());
        if diff > 1e-8 {
            bail!("stored generator disagrees with eigen-data (diff {diff:.3e})");
        }
        Ok(design)
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BasisJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
    /// Max simplex-2-design monomial residual of the decohered columns.
    pub residual: f64,
    pub certified: bool,
    pub method: String,
    /// Two-amplitude metadata: both weight roots, admissible first.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_roots: Option<[f64; 2]>,
}

impl BasisJson {
    pub fn from_basis(b: &SimplexDesignBasis, method: &str, tol: f64) -> Self {
        let m = MatrixJson::from_matrix(b.matrix());
        BasisJson {
            dim: b.dim(),
            re: m.re,
            im: m.im,
            residual: b.residual(),
            certified: b.residual() <= tol,
            method: method.to_string(),
            weight_roots: None,
        }
    }

    pub fn to_basis(&self) -> anyhow::Result<SimplexDesignBasis> {
        let m = MatrixJson {
            dim: self.dim,
            re: self.re.clone(),
            im: self.im.clone(),
        }
        .to_matrix()?;
        SimplexDesignBasis::new(m).map_err(|e| anyhow::anyhow!("{e}"))
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DiffsetJson {
    pub v: u64,
    #[serde(rename = "K")]
    pub size: usize,
    pub elements: Vec<u64>,
    pub lambda: u64,
    /// "found" | "not_found" | "inconclusive" | "verified"
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<u64>,
}

impl DiffsetJson {
    pub fn from_set(ds: &DifferenceSet, status: &str) -> Self {
        DiffsetJson {
            v: ds.modulus(),
            size: ds.size(),
            elements: ds.elements().to_vec(),
            lambda: ds.lambda(),
            status: status.to_string(),
            nodes: None,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ApproxReportJson {
    pub dim: usize,
    pub k: usize,
    pub samples: usize,
    pub mean_epsilon: f64,
    pub predicted_mean: f64,
    pub stderr: f64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilons: Option<Vec<f64>>,
}

impl ApproxReportJson {
    pub fn from_report(r: &ApproxDesignReport, keep_epsilons: bool) -> Self {
        ApproxReportJson {
            dim: r.dim,
            k: r.order_k,
            samples: r.samples,
            mean_epsilon: r.mean_epsilon,
            predicted_mean: r.predicted_mean,
            stderr: r.stderr,
            seed: r.seed,
            epsilons: keep_epsilons.then(|| r.epsilons.clone()),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TomoReportJson {
    pub dim: usize,
    pub k: usize,
    /// Shot count per basis, or "exact".
    pub shots: serde_json::Value,
    pub probabilities: Vec<Vec<f64>>,
    pub reconstruction: MatrixJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_infinity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    pub epsilon: f64,
    pub time_model_seconds: f64,
}

impl TomoReportJson {
    pub fn from_report(r: &TomographyReport) -> Self {
        TomoReportJson {
            dim: r.dim,
            k: r.order_k,
            shots: match r.shots {
                None => serde_json::Value::String("exact".into()),
                Some(n) => serde_json::Value::from(n),
            },
            probabilities: r.probabilities.clone(),
            reconstruction: MatrixJson::from_matrix(&r.reconstruction),
            error_infinity: Some(r.error_infinity),
            bound: Some(r.bound),
            epsilon: r.epsilon,
            time_model_seconds: r.time_model_seconds,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SearchResultJson {
    pub dim: usize,
    pub k: usize,
    pub t: u32,
    pub seed: u64,
    pub restarts: u32,
    /// "found" | "not_found_within_budget"
    pub status: String,
    pub best_epsilon: f64,
    pub best_restart: u32,
    pub coeffs: Vec<f64>,
    pub spectrum: PhasesJson,
}

impl SearchResultJson {
    pub fn from_result(config: &SearchConfig, r: &SearchResult) -> Self {
        SearchResultJson {
            dim: config.dim,
            k: config.k,
            t: config.t,
            seed: config.seed,
            restarts: config.restarts,
            status: match r.status {
                SearchStatus::Found => "found".into(),
                SearchStatus::NotFoundWithinBudget => "not_found_within_budget".into(),
            },
            best_epsilon: r.best_epsilon,
            best_restart: r.best_restart,
            coeffs: r.best_coeffs.coeffs().to_vec(),
            spectrum: match &r.dephased_spectrum {
                SpectrumReport::Snapped(ns) => PhasesJson::Rational {
                    num: ns.clone(),
                    den: config.k as u64 + 1,
                },
                SpectrumReport::Raw(values) => PhasesJson::Raw {
                    values: values.clone(),
                },
            },
        }
    }
}

/// Probability table as CSV with header `j,mu,p`.
pub fn probabilities_to_csv(table: &[Vec<f64>]) -> String {
    let mut out = String::from("j,mu,p\n");
    for (j, row) in table.iter().enumerate() {
        for (mu, p) in row.iter().enumerate() {
            out.push_str(&format!("{j},{mu},{p}\n"));
        }
    }
    out
}

/// Parse the `j,mu,p` CSV back into a (k+1)×d table.
pub fn probabilities_from_csv(text: &str) -> anyhow::Result<Vec<Vec<f64>>> {
    let mut rows: Vec<(usize, usize, f64)> = Vec::new();
    let mut lines = text.lines();
    let header = lines.next().context("empty CSV")?;
    if header.trim() != "j,mu,p" {
        bail!("expected header 'j,mu,p', got '{header}'");
    }
    for (n, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 3 {
            bail!("line {}: expected 3 fields", n + 2);
        }
        rows.push((
            parts[0].trim().parse().context("bad j")?,
            parts[1].trim().parse().context("bad mu")?,
            parts[2].trim().parse().context("bad p")?,
        ));
    }
    let n_j = rows.iter().map(|r| r.0).max().context("no rows")? + 1;
    let n_mu = rows.iter().map(|r| r.1).max().context("no rows")? + 1;
    let mut table = vec![vec![f64::NAN; n_mu]; n_j];
    for (j, mu, p) in rows {
        table[j][mu] = p;
    }
    if table.iter().flatten().any(|p| p.is_nan()) {
        bail!("probability table has missing (j, mu) entries");
    }
    Ok(table)
}
