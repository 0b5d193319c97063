//! Command handlers. Each returns the process exit code (0 pass, 1
//! semantic failure); usage and input errors bubble up as `Err` and exit 2.

use crate::formats::*;
use crate::manifest::RunContext;
use crate::say;
use crate::{
    ApproxArgs, BasisArgs, BasisKind, Cli, Command, ConstructArgs, ConstructMethod,
    DiffsetAction, NogoAction, PipelineArgs, ScanArgs, SearchArgs, TomoArgs, VerifyArgs,
};
use anyhow::{anyhow, bail, Context};
use cycdes::approx::{epsilon_of, monte_carlo_epsilon};
use cycdes::basisgen::{
    golden_basis, numeric_basis, qubit_basis, qutrit_family, skew_hadamard, two_amplitude_basis,
    two_amplitude_roots, SimplexDesignBasis,
};
use cycdes::cyclic::{
    assemble, construction_one_design, qubit_family, u1_design, CyclicDesign,
};
use cycdes::designlib::{certify_projective_design, DesignCertificate, VectorConstellation};
use cycdes::diffsets::{
    common_lambda, mian_chowla, power_of_two_set, search_difference_set, verify_difference_set,
    DifferenceSet, SearchOutcome,
};
use cycdes::nogo::{
    hadamard_merit_minimize, moment_matrix_rank, qubit_moment_system, simplex3_cost,
    simplex3_cost_closed_form,
};
use cycdes::search::{
    combine_restarts, search_cyclic, search_single_restart, SearchConfig, SearchResult,
    SearchStatus,
};
use cycdes::tomo::{
    random_mixed_state, reconstruct, tomography_report, DensityMatrix, Shots, TomographyReport,
};
use serde_json::json;

pub fn dispatch(cli: Cli) -> anyhow::Result<i32> {
    let mut ctx = RunContext::new(&cli.out, cli.tol)?;
    let threads = cli.threads.max(1);
    let code = match cli.command {
        Command::Construct(args) => cmd_construct(&mut ctx, &args)?,
        Command::Verify(args) => cmd_verify(&mut ctx, &args)?,
        Command::Diffset { action } => cmd_diffset(&mut ctx, &action)?,
        Command::Basis(args) => cmd_basis(&mut ctx, &args)?,
        Command::Search(args) => cmd_search(&mut ctx, &args, threads)?,
        Command::Scan(args) => cmd_scan(&mut ctx, &args, threads)?,
        Command::Approx(args) => cmd_approx(&mut ctx, &args)?,
        Command::Tomo(args) => cmd_tomo(&mut ctx, &args)?,
        Command::Nogo { action } => cmd_nogo(&mut ctx, &action)?,
        Command::Pipeline(args) => cmd_pipeline(&mut ctx, &args)?,
    };
    ctx.finish()?;
    Ok(code)
}

fn parse_u64_list(text: &str) -> anyhow::Result<Vec<u64>> {
    text.split(',')
        .map(|s| s.trim().parse::<u64>().map_err(|e| anyhow!("'{s}': {e}")))
        .collect()
}

fn parse_usize_spec(text: &str) -> anyhow::Result<Vec<usize>> {
    if let Some((lo, hi)) = text.split_once(':') {
        let lo: usize = lo.trim().parse()?;
        let hi: usize = hi.trim().parse()?;
        if hi < lo {
            bail!("range {text} is empty");
        }
        Ok((lo..=hi).collect())
    } else {
        text.split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|e| anyhow!("'{s}': {e}")))
            .collect()
    }
}

fn parse_t_list(text: &str) -> anyhow::Result<Vec<u32>> {
    let list: Vec<u32> = text
        .split(',')
        .map(|s| s.trim().parse::<u32>().map_err(|e| anyhow!("'{s}': {e}")))
        .collect::<anyhow::Result<_>>()?;
    if list.is_empty() || list.contains(&0) {
        bail!("degree list must be nonempty positive integers");
    }
    Ok(list)
}

fn parse_shots(text: &str, seed: u64) -> anyhow::Result<Shots> {
    if text.eq_ignore_ascii_case("exact") {
        Ok(Shots::Exact)
    } else {
        let count: u64 = text
            .parse()
            .with_context(|| format!("--shots must be 'exact' or a count, got '{text}'"))?;
        Ok(Shots::Sampled { count, seed })
    }
}

/// Build a basis of the requested kind; `Auto` picks qubit / golden /
/// two-amplitude / numeric by dimension.
fn make_basis(
    kind: BasisKind,
    dim: Option<usize>,
    phi: Option<f64>,
    seed: u64,
    restarts: u32,
    tol: f64,
) -> anyhow::Result<(SimplexDesignBasis, &'static str)> {
    let kind = match kind {
        BasisKind::Auto => match dim {
            Some(2) => BasisKind::Qubit,
            Some(3) => BasisKind::Golden,
            Some(4) | Some(8) => BasisKind::TwoAmplitude,
            Some(_) => BasisKind::Numeric,
            None => bail!("--dim is required to pick a basis automatically"),
        },
        other => other,
    };
    let check_dim = |expected: usize| -> anyhow::Result<()> {
        if let Some(d) = dim {
            if d != expected {
                bail!("basis kind fixes the dimension to {expected}, got --dim {d}");
            }
        }
        Ok(())
    };
    match kind {
        BasisKind::Qubit => {
            check_dim(2)?;
            Ok((qubit_basis(), "qubit"))
        }
        BasisKind::Golden => {
            check_dim(3)?;
            Ok((golden_basis(), "golden"))
        }
        BasisKind::Qutrit => {
            check_dim(3)?;
            let phi = phi.ok_or_else(|| anyhow!("--phi is required for the qutrit family"))?;
            Ok((qutrit_family(phi).map_err(|e| anyhow!("{e}"))?, "qutrit"))
        }
        BasisKind::TwoAmplitude => {
            let d = dim.ok_or_else(|| anyhow!("--dim is required"))?;
            let h = skew_hadamard(d).map_err(|e| anyhow!("{e}"))?;
            Ok((
                two_amplitude_basis(&h).map_err(|e| anyhow!("{e}"))?,
                "two-amplitude",
            ))
        }
        BasisKind::Numeric => {
            let d = dim.ok_or_else(|| anyhow!("--dim is required"))?;
            Ok((
                numeric_basis(d, seed, restarts, tol).map_err(|e| anyhow!("{e}"))?,
                "numeric",
            ))
        }
        BasisKind::Auto => unreachable!(),
    }
}

fn certify_list(design: &CyclicDesign, ts: &[u32], tol: f64) -> Vec<DesignCertificate> {
    ts.iter().map(|&t| design.certify(t, tol)).collect()
}

fn write_design(
    ctx: &mut RunContext,
    name: &str,
    design: &CyclicDesign,
    certs: &[DesignCertificate],
) -> anyhow::Result<()> {
    ctx.write_json(name, &DesignJson::from_design(design, certs))?;
    Ok(())
}

fn cmd_construct(ctx: &mut RunContext, args: &ConstructArgs) -> anyhow::Result<i32> {
    ctx.set_seed(args.seed);
    let ts = parse_t_list(&args.cert_t)?;
    let design = match args.method {
        ConstructMethod::U1 => u1_design(),
        ConstructMethod::Construction1 => {
            let n = args.n.ok_or_else(|| anyhow!("--n is required"))?;
            construction_one_design(n).map_err(|e| anyhow!("{e}"))?
        }
        ConstructMethod::QubitFamily => {
            let k = args.k.ok_or_else(|| anyhow!("--k is required"))?;
            qubit_family(k).map_err(|e| anyhow!("{e}"))?
        }
        ConstructMethod::Diffset => {
            let dim = args.dim.ok_or_else(|| anyhow!("--dim is required"))?;
            let (basis, method) = match &args.basis_file {
                Some(path) => {
                    let stored: BasisJson = ctx.read_json(path)?;
                    (stored.to_basis()?, "file")
                }
                None => make_basis(
                    args.basis,
                    Some(dim),
                    args.phi,
                    args.seed,
                    args.restarts,
                    ctx.tol,
                )?,
            };
            if basis.dim() != dim {
                bail!("basis file has dimension {}, expected {dim}", basis.dim());
            }
            let dset = match (&args.dset, args.modulus) {
                (Some(text), Some(v)) => {
                    DifferenceSet::new(v, parse_u64_list(text)?).map_err(|e| anyhow!("{e}"))?
                }
                (None, None) => mian_chowla_set(dim)?,
                _ => bail!("--dset and --modulus must be given together"),
            };
            say!(
                "assembling dim {dim} ({method} basis, residual {:.3e}) with (v={}, K={}, 1)",
                basis.residual(),
                dset.modulus(),
                dset.size()
            );
            assemble(&basis, &dset).map_err(|e| anyhow!("{e}"))?
        }
    };
    let certs = certify_list(&design, &ts, ctx.tol);
    for c in &certs {
        say!(
            "t={}: frame potential {:.12e}, epsilon {:.3e}, {}",
            c.t,
            c.frame_potential,
            c.epsilon,
            if c.is_design { "design" } else { "NOT a design" }
        );
    }
    write_design(ctx, "design.json", &design, &certs)?;
    ctx.write_json(
        "constellation.json",
        &ConstellationJson::from_constellation(design.constellation()),
    )?;
    Ok(0)
}

/// Mian-Chowla (v, d, 1) set with v = 2·a_d + 1.
fn mian_chowla_set(dim: usize) -> anyhow::Result<DifferenceSet> {
    let terms = mian_chowla(dim);
    let v = 2 * terms.last().copied().unwrap_or(0) + 1;
    DifferenceSet::new(v, terms).map_err(|e| anyhow!("{e}"))
}

fn cmd_verify(ctx: &mut RunContext, args: &VerifyArgs) -> anyhow::Result<i32> {
    let ts = parse_t_list(&args.t)?;
    let text = ctx.read_to_string(&args.input)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", args.input.display()))?;
    let constellation: VectorConstellation = if value.get("generator").is_some() {
        let design: DesignJson = serde_json::from_value(value)?;
        design.to_design()?.constellation().clone()
    } else if value.get("vectors").is_some() {
        let c: ConstellationJson = serde_json::from_value(value)?;
        c.to_constellation()?
    } else {
        bail!("input is neither a design nor a constellation file");
    };
    let mut all_pass = true;
    let mut certs = Vec::new();
    for &t in &ts {
        let cert = certify_projective_design(&constellation, t, ctx.tol);
        say!(
            "t={t}: frame potential {:.12e}, welch bound {:.12e}, epsilon {:.3e}, {}",
            cert.frame_potential,
            cert.welch_bound,
            cert.epsilon,
            if cert.is_design { "PASS" } else { "FAIL" }
        );
        all_pass &= cert.is_design;
        certs.push(CertificateJson::from_certificate(&cert));
    }
    ctx.write_json("certificates.json", &certs)?;
    Ok(if all_pass { 0 } else { 1 })
}

fn cmd_diffset(ctx: &mut RunContext, action: &DiffsetAction) -> anyhow::Result<i32> {
    match action {
        DiffsetAction::Verify { v, elements } => {
            let elems = parse_u64_list(elements)?;
            let (lambda1, histogram) =
                verify_difference_set(*v, &elems).map_err(|e| anyhow!("{e}"))?;
            let lambda = common_lambda(&histogram);
            let status = if lambda1 { "verified" } else { "not_difference_set" };
            say!(
                "(v={v}, K={}): {} (common lambda: {:?})",
                elems.len(),
                status,
                lambda
            );
            ctx.write_json(
                "diffset.json",
                &DiffsetJson {
                    v: *v,
                    size: elems.len(),
                    elements: elems,
                    lambda: lambda.unwrap_or(0),
                    status: status.into(),
                    nodes: None,
                },
            )?;
            Ok(if lambda1 { 0 } else { 1 })
        }
        DiffsetAction::Search { v, k, budget } => {
            let outcome = search_difference_set(*v, *k, *budget).map_err(|e| anyhow!("{e}"))?;
            let (json, code) = match outcome {
                SearchOutcome::Found(ds) => {
                    say!("found {:?} mod {v}", ds.elements());
                    (DiffsetJson::from_set(&ds, "found"), 0)
                }
                SearchOutcome::NotFound { nodes } => {
                    say!("proven not-found after {nodes} nodes");
                    (
                        DiffsetJson {
                            v: *v,
                            size: *k,
                            elements: vec![],
                            lambda: 1,
                            status: "not_found".into(),
                            nodes: Some(nodes),
                        },
                        1,
                    )
                }
                SearchOutcome::Inconclusive { nodes } => {
                    say!("budget exhausted after {nodes} nodes; inconclusive");
                    (
                        DiffsetJson {
                            v: *v,
                            size: *k,
                            elements: vec![],
                            lambda: 1,
                            status: "inconclusive".into(),
                            nodes: Some(nodes),
                        },
                        1,
                    )
                }
            };
            ctx.write_json("diffset.json", &json)?;
            Ok(code)
        }
        DiffsetAction::MianChowla { n } => {
            let terms = mian_chowla(*n);
            say!("{terms:?}");
            ctx.write_json("mian_chowla.json", &json!({ "n": n, "terms": terms }))?;
            Ok(0)
        }
        DiffsetAction::PowerOfTwo { d } => {
            let ds = power_of_two_set(*d).map_err(|e| anyhow!("{e}"))?;
            say!("{:?} mod {}", ds.elements(), ds.modulus());
            ctx.write_json("diffset.json", &DiffsetJson::from_set(&ds, "verified"))?;
            Ok(0)
        }
    }
}

fn cmd_basis(ctx: &mut RunContext, args: &BasisArgs) -> anyhow::Result<i32> {
    ctx.set_seed(args.seed);
    let (basis, method) = make_basis(
        args.kind,
        args.dim,
        args.phi,
        args.seed,
        args.restarts,
        ctx.tol,
    )?;
    let mut json = BasisJson::from_basis(&basis, method, ctx.tol);
    if method == "two-amplitude" {
        let (s_plus, s_minus) = two_amplitude_roots(basis.dim());
        json.weight_roots = Some([s_plus, s_minus]);
    }
    say!(
        "dim {}: residual {:.3e} ({})",
        basis.dim(),
        basis.residual(),
        if json.certified { "certified" } else { "NOT certified" }
    );
    let certified = json.certified;
    ctx.write_json("basis.json", &json)?;
    Ok(if certified { 0 } else { 1 })
}

/// Restart-sharded search across `threads` workers; the combined result is
/// schedule-independent.
fn run_search(config: &SearchConfig, threads: usize) -> anyhow::Result<SearchResult> {
    if threads <= 1 || config.restarts <= 1 {
        return search_cyclic(config).map_err(|e| anyhow!("{e}"));
    }
    let next = std::sync::atomic::AtomicU32::new(0);
    let outcomes = std::sync::Mutex::new(Vec::with_capacity(config.restarts as usize));
    std::thread::scope(|scope| {
        for _ in 0..threads.min(config.restarts as usize) {
            scope.spawn(|| loop {
                let restart = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if restart >= config.restarts {
                    break;
                }
                let outcome = search_single_restart(config, restart);
                outcomes.lock().unwrap().push(outcome);
            });
        }
    });
    let collected: Result<Vec<_>, _> = outcomes.into_inner().unwrap().into_iter().collect();
    combine_restarts(config, collected.map_err(|e| anyhow!("{e}"))?).map_err(|e| anyhow!("{e}"))
}

fn search_config_from(args: &SearchArgs) -> anyhow::Result<SearchConfig> {
    let mut config = SearchConfig::new(args.dim, args.k, args.t, args.seed);
    config.restarts = args.restarts;
    config.max_iters = args.max_iters;
    config.tol_accept = args.tol_accept;
    if let Some(spec) = &args.spectrum {
        config.fixed_spectrum = Some(parse_u64_list(spec)?);
    }
    Ok(config)
}

fn cmd_search(ctx: &mut RunContext, args: &SearchArgs, threads: usize) -> anyhow::Result<i32> {
    ctx.set_seed(args.seed);
    let config = search_config_from(args)?;
    let result = run_search(&config, threads)?;
    say!(
        "d={} k={} t={}: epsilon {:.3e} ({:?}, restart {})",
        args.dim, args.k, args.t, result.best_epsilon, result.status, result.best_restart
    );
    ctx.write_json("search.json", &SearchResultJson::from_result(&config, &result))?;
    let design =
        cycdes::search::rebuild_design(&config, &result.best_coeffs).map_err(|e| anyhow!("{e}"))?;
    let certs = certify_list(&design, &[args.t], ctx.tol);
    write_design(ctx, "design.json", &design, &certs)?;
    Ok(if result.status == SearchStatus::Found { 0 } else { 1 })
}

fn cmd_scan(ctx: &mut RunContext, args: &ScanArgs, threads: usize) -> anyhow::Result<i32> {
    ctx.set_seed(args.seed);
    let dims = parse_usize_spec(&args.dims)?;
    let ks = parse_usize_spec(&args.ks)?;
    // Grid mirroring the usual presentation: one row per k, one column per
    // dimension; every cell reports found/best with its ε.
    let mut cells = Vec::new();
    for &dim in &dims {
        for &k in &ks {
            let mut config = SearchConfig::new(dim, k, args.t, args.seed);
            config.restarts = args.restarts;
            config.max_iters = args.max_iters;
            let result = run_search(&config, threads)?;
            say!(
                "d={dim} k={k}: epsilon {:.3e} {:?}",
                result.best_epsilon, result.status
            );
            cells.push((dim, k, result));
        }
    }
    let mut csv = String::from("k\\d");
    for &dim in &dims {
        csv.push_str(&format!(",{dim}"));
    }
    csv.push('\n');
    for &k in &ks {
        csv.push_str(&k.to_string());
        for &dim in &dims {
            let cell = cells
                .iter()
                .find(|(d, kk, _)| *d == dim && *kk == k)
                .map(|(_, _, r)| {
                    let tag = if r.status == SearchStatus::Found { "found" } else { "best" };
                    format!("{tag}:{:.3e}", r.best_epsilon)
                })
                .unwrap_or_default();
            csv.push_str(&format!(",{cell}"));
        }
        csv.push('\n');
    }
    ctx.write_text("scan.csv", &csv)?;
    Ok(0)
}

fn cmd_approx(ctx: &mut RunContext, args: &ApproxArgs) -> anyhow::Result<i32> {
    ctx.set_seed(args.seed);
    let (basis, method) = make_basis(args.basis, Some(args.dim), args.phi, args.seed, 8, ctx.tol)?;
    let report = monte_carlo_epsilon(&basis, args.k, args.samples, args.seed)
        .map_err(|e| anyhow!("{e}"))?;
    say!(
        "d={} k={} ({} basis): mean epsilon {:.6} (predicted {:.6}, stderr {:.2e}, {} samples)",
        args.dim, args.k, method, report.mean_epsilon, report.predicted_mean, report.stderr,
        report.samples
    );
    ctx.write_json(
        "approx.json",
        &ApproxReportJson::from_report(&report, args.emit_epsilons),
    )?;
    Ok(0)
}

fn cmd_tomo(ctx: &mut RunContext, args: &TomoArgs) -> anyhow::Result<i32> {
    ctx.set_seed(args.seed);
    let design_json: DesignJson = ctx.read_json(&args.design)?;
    let design = design_json.to_design()?;
    let state = match &args.state {
        Some(path) => {
            let m: MatrixJson = ctx.read_json(path)?;
            Some(DensityMatrix::new(m.to_matrix()?).map_err(|e| anyhow!("{e}"))?)
        }
        None => None,
    };
    let report: TomographyReport = match (&args.probs, state) {
        (Some(path), state) => {
            // Reconstruct from a stored table; error/bound only with a state.
            let csv = ctx.read_to_string(path)?;
            let probabilities = probabilities_from_csv(&csv)?;
            let reconstruction =
                reconstruct(&design, &probabilities).map_err(|e| anyhow!("{e}"))?;
            let eps = epsilon_of(&design, 2).max(0.0);
            let d = design.dim();
            let bound = d as f64
                * (d as f64 + 1.0)
                * cycdes::approx::delta_bound(eps, d, 2).map_err(|e| anyhow!("{e}"))?;
            let error = match &state {
                Some(rho) => cycdes::tomo::error_infinity(&reconstruction, rho.matrix())
                    .map_err(|e| anyhow!("{e}"))?,
                None => f64::NAN,
            };
            TomographyReport {
                dim: d,
                order_k: design.order_k(),
                probabilities,
                shots: None,
                reconstruction,
                error_infinity: error,
                bound,
                epsilon: eps,
                time_model_seconds: cycdes::tomo::time_model(
                    design.order_k(),
                    1,
                    args.tau_int,
                    args.tau_prep,
                ),
            }
        }
        (None, Some(rho)) => {
            let shots = parse_shots(&args.shots, args.seed)?;
            tomography_report(&design, &rho, shots, args.tau_int, args.tau_prep)
                .map_err(|e| anyhow!("{e}"))?
        }
        (None, None) => bail!("either --state or --probs is required"),
    };
    let mut json = TomoReportJson::from_report(&report);
    if report.error_infinity.is_nan() {
        json.error_infinity = None;
        json.bound = None;
    }
    say!(
        "k={} epsilon {:.3e}: reconstruction error {}, bound {:.3e}",
        report.order_k,
        report.epsilon,
        if report.error_infinity.is_nan() {
            "n/a (no true state)".to_string()
        } else {
            format!("{:.3e}", report.error_infinity)
        },
        report.bound
    );
    ctx.write_json("tomo.json", &json)?;
    ctx.write_text("probabilities.csv", &probabilities_to_csv(&report.probabilities))?;
    Ok(0)
}

fn cmd_nogo(ctx: &mut RunContext, action: &NogoAction) -> anyhow::Result<i32> {
    match action {
        NogoAction::Fh { grid, refine } => {
            let min = hadamard_merit_minimize(*grid, *refine).map_err(|e| anyhow!("{e}"))?;
            say!(
                "minimum F = {:.9} at (w, z, phi) = ({:.6}, {:.6}, {:.6})",
                min.value, min.w, min.z, min.phi
            );
            ctx.write_json(
                "nogo_fh.json",
                &json!({
                    "grid": grid,
                    "min_value": min.value,
                    "argmin": { "w": min.w, "z": min.z, "phi": min.phi },
                }),
            )?;
            Ok(0)
        }
        NogoAction::Simplex3 { phi, grid } => {
            let out = match phi {
                Some(phi) => {
                    let direct = simplex3_cost(*phi).map_err(|e| anyhow!("{e}"))?;
                    let closed = simplex3_cost_closed_form(*phi);
                    say!("F({phi}) = {direct:.12e} (closed form {closed:.12e})");
                    json!({ "phi": phi, "cost": direct, "closed_form": closed })
                }
                None => {
                    let lo = cycdes::basisgen::qutrit_golden_angle();
                    let hi = 2.0 * std::f64::consts::PI - lo;
                    let mut min = (f64::INFINITY, lo);
                    let mut max_dev = 0.0f64;
                    for i in 0..=*grid {
                        let phi = lo + (hi - lo) * i as f64 / *grid as f64;
                        let direct = simplex3_cost(phi).map_err(|e| anyhow!("{e}"))?;
                        max_dev = max_dev.max((direct - simplex3_cost_closed_form(phi)).abs());
                        if direct < min.0 {
                            min = (direct, phi);
                        }
                    }
                    say!(
                        "window minimum {:.12e} at phi = {:.6} (closed-form deviation {:.3e})",
                        min.0, min.1, max_dev
                    );
                    json!({
                        "grid": grid,
                        "min_cost": min.0,
                        "argmin_phi": min.1,
                        "max_closed_form_deviation": max_dev,
                        "positive": min.0 > 0.0,
                    })
                }
            };
            ctx.write_json("nogo_simplex3.json", &out)?;
            Ok(0)
        }
        NogoAction::Rank { dim } => {
            let rank = moment_matrix_rank(*dim).map_err(|e| anyhow!("{e}"))?;
            let expected = dim * (dim + 1) / 2;
            say!("rank(M) = {rank} (d(d+1)/2 = {expected})");
            ctx.write_json(
                "nogo_rank.json",
                &json!({ "dim": dim, "rank": rank, "expected": expected }),
            )?;
            Ok(0)
        }
        NogoAction::QubitMoments { tmax } => {
            let report = qubit_moment_system(*tmax).map_err(|e| anyhow!("{e}"))?;
            say!(
                "tmax={}: {} (pair {:.6}, {:.6}; least-squares floor {:.3e})",
                report.tmax,
                if report.feasible { "solvable" } else { "infeasible" },
                report.solution.0,
                report.solution.1,
                report.least_squares_min
            );
            ctx.write_json(
                "nogo_qubit_moments.json",
                &json!({
                    "tmax": report.tmax,
                    "feasible": report.feasible,
                    "solution": [report.solution.0, report.solution.1],
                    "residuals": report.residuals,
                    "exact_gap": report.exact_gap,
                    "least_squares_min": report.least_squares_min,
                }),
            )?;
            Ok(0)
        }
    }
}

fn cmd_pipeline(ctx: &mut RunContext, args: &PipelineArgs) -> anyhow::Result<i32> {
    ctx.set_seed(args.seed);
    let dim = args.dim;
    let (basis, method) = make_basis(BasisKind::Auto, Some(dim), None, args.seed, 8, ctx.tol)
        .context("stage basis")?;
    let dset = mian_chowla_set(dim).context("stage diffset")?;
    let design = assemble(&basis, &dset)
        .map_err(|e| anyhow!("{e}"))
        .context("stage assemble")?;
    let cert = design.certify(2, ctx.tol);
    let rho = random_mixed_state(dim, args.seed.wrapping_add(1))
        .map_err(|e| anyhow!("{e}"))
        .context("stage state")?;
    let shots = parse_shots(&args.shots, args.seed)?;
    let report = tomography_report(&design, &rho, shots, args.tau_int, args.tau_prep)
        .map_err(|e| anyhow!("{e}"))
        .context("stage measure/reconstruct")?;
    say!(
        "dim {dim} ({method} basis, residual {:.3e}); k = {}; design epsilon {:.3e}",
        basis.residual(),
        design.order_k(),
        cert.epsilon
    );
    say!(
        "reconstruction error {:.6e} (bound {:.6e}); time model {:.3} s",
        report.error_infinity, report.bound, report.time_model_seconds
    );
    write_design(ctx, "design.json", &design, &[cert])?;
    ctx.write_json("state.json", &MatrixJson::from_matrix(rho.matrix()))?;
    ctx.write_json("tomo.json", &TomoReportJson::from_report(&report))?;
    ctx.write_text("probabilities.csv", &probabilities_to_csv(&report.probabilities))?;
    ctx.write_json(
        "pipeline.json",
        &json!({
            "dim": dim,
            "k": design.order_k(),
            "basis_method": method,
            "basis_residual": basis.residual(),
            "diffset": { "v": dset.modulus(), "elements": dset.elements() },
            "design_epsilon": cert.epsilon,
            "shots": if matches!(shots, Shots::Exact) { json!("exact") } else { json!(args.shots) },
            "error_infinity": report.error_infinity,
            "bound": report.bound,
            "time_model_seconds": report.time_model_seconds,
            "seed": args.seed,
        }),
    )?;
    Ok(0)
}
