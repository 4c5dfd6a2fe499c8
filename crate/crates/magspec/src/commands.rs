//! The six experiments. Each takes a resolved [`RunConfig`] and returns a
//! serializable report; [`crate::run`] writes the files.

use magspec_core::comparison::{critical_lambda as critical_lambda_1d, critical_lambda_delta, exact_inf_L, inf_L_V};
use magspec_core::eigensolver::{lowest_eigs_with, LanczosOptions, SpectrumResult};
use magspec_core::existence::{existence_scan, tilde_route_value, OffsetFit, TrialRow};
use magspec_core::fiber::{band_scan, bracketing_lower_bound_sm, BracketPiece};
use magspec_core::hamiltonian::assemble_with;
use magspec_core::model::{validate_params, Grid1D, Grid2D, ModelKind, ModelParams, PotentialSpec, Regime};
use magspec_core::quasimode::cutoff::chi_k_log;
use magspec_core::quasimode::landau::{landau_orbital, ritz_certificate};
use magspec_core::quasimode::supercritical::{normalize_regular, solve_f_ode_regular, Kernel, default_f_grid};
use magspec_core::quasimode::{build_critical, build_subcritical_packet, build_supercritical, solve_f_ode, PacketOptions};
use magspec_core::quasimode::packet::packet_residual_bound;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ConstructionKey, RunConfig};
use crate::error::CliError;

fn lanczos(cfg: &RunConfig, params: &ModelParams, grid: &Grid2D, k: usize) -> Result<SpectrumResult, CliError> {
    let h = assemble_with(params, grid, cfg.assembly())?;
    let s = &cfg.solver;
    let mut o = LanczosOptions::new(k, s.tol, s.max_iter, s.seed);
    o.filter_degree = s.filter_degree;
    o.basis = s.basis;
    Ok(lowest_eigs_with(&h, &o)?)
}

fn precondition(ok: bool, msg: impl FnOnce() -> String) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Precondition(msg()))
    }
}

// ---------- spectrum ----------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenRow {
    pub index: usize,
    pub eigenvalue: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandSummary {
    pub n: f64,
    pub min: f64,
    pub argmin: f64,
    /// `threshold - min`.
    pub deficit: f64,
    pub xi: Vec<f64>,
    pub band_min: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bracketing {
    pub n: f64,
    pub overall_lower_bound: f64,
    pub pieces: Vec<BracketPiece>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub dim: usize,
    pub threshold: f64,
    pub regime: Option<Regime>,
    pub eigen: Vec<EigenRow>,
    pub ground_energy: f64,
    pub converged: bool,
    pub iterations: usize,
    pub matvecs: usize,
    pub bracketing: Option<Bracketing>,
    pub bands: Vec<BandSummary>,
}

pub fn spectrum(cfg: &RunConfig) -> Result<SpectrumReport, CliError> {
    let params = validate_params(cfg.params()?)?;
    let grid = cfg.grid()?;
    let r = lanczos(cfg, &params, &grid, cfg.solver.k)?;
    let eigen: Vec<EigenRow> = r
        .eigenvalues
        .iter()
        .zip(&r.residual_norms)
        .enumerate()
        .map(|(index, (&eigenvalue, &residual))| EigenRow { index, eigenvalue, residual })
        .collect();
    let regime = (params.kind == ModelKind::DeltaLine).then(|| params.delta_regime());
    let bracketing = if cfg.experiment.bracketing && regime == Some(Regime::Subcritical) {
        let c = bracketing_lower_bound_sm(&params, grid.ly)?;
        Some(Bracketing { n: c.n, overall_lower_bound: c.overall_lower_bound, pieces: c.pieces })
    } else {
        None
    };
    let mut bands = Vec::new();
    for &n in &cfg.experiment.band_n {
        let b = band_scan(&params, n, None, cfg.experiment.band_samples)?;
        bands.push(BandSummary {
            n,
            min: b.min,
            argmin: b.argmin,
            deficit: params.threshold() - b.min,
            xi: b.xi_samples,
            band_min: b.band_min,
        });
    }
    Ok(SpectrumReport {
        dim: grid.dim(),
        threshold: params.threshold(),
        regime,
        ground_energy: r.eigenvalues[0],
        eigen,
        converged: r.converged,
        iterations: r.iterations,
        matvecs: r.matvecs,
        bracketing,
        bands,
    })
}

// ---------- sweep ----------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegimeLabel {
    Subcritical,
    Critical,
    Supercritical,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub lambda: f64,
    pub ly: f64,
    pub dim: usize,
    pub ground_energy: f64,
    /// Up to four further eigenvalues, ascending.
    pub next_energies: Vec<f64>,
    pub residual: f64,
    pub converged: bool,
    pub regime_label: RegimeLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub threshold: f64,
    pub drop_threshold: f64,
    pub flat_threshold: f64,
    pub records: Vec<SweepRecord>,
}

/// Regime from the ground energies along increasing domain heights.
///
/// Supercritical: every step drops by more than `drop` and the last value is
/// below -1. Critical: nonincreasing towards `[0, flat)`. Subcritical: the
/// last step changes by less than `flat` and the value lies in
/// `(flat, threshold + flat)`.
pub fn classify(ground: &[f64], threshold: f64, drop: f64, flat: f64) -> RegimeLabel {
    let Some(&last) = ground.last() else {
        return RegimeLabel::Undetermined;
    };
    let steps: Vec<f64> = ground.windows(2).map(|w| w[0] - w[1]).collect();
    if !steps.is_empty() && steps.iter().all(|&d| d > drop) && last < -1.0 {
        return RegimeLabel::Supercritical;
    }
    if (0.0..flat).contains(&last) && steps.iter().all(|&d| d >= -flat) {
        return RegimeLabel::Critical;
    }
    if let Some(d) = steps.last() {
        if d.abs() < flat && last > flat && last < threshold + flat {
            return RegimeLabel::Subcritical;
        }
    }
    RegimeLabel::Undetermined
}

pub fn sweep(cfg: &RunConfig) -> Result<SweepReport, CliError> {
    let ex = &cfg.experiment;
    if ex.lambda_list.is_empty() || ex.ly_list.is_empty() {
        return Err(CliError::Config("sweep needs experiment.lambda_list and experiment.ly_list".into()));
    }
    let base = cfg.params()?;
    let h = cfg.spacing()?;
    let mut lys = ex.ly_list.clone();
    lys.sort_by(f64::total_cmp);
    let mut cells = Vec::new();
    for &lambda in &ex.lambda_list {
        let p = validate_params(base.with_lambda(lambda))?;
        for &ly in &lys {
            let g = Grid2D::with_spacing(cfg.grid.lx, ly, h, h, cfg.grid.boundary)?;
            if g.dim() > ex.memory_cap {
                return Err(CliError::Precondition(format!("{} unknowns at ly = {ly} exceed the cap {}", g.dim(), ex.memory_cap)));
            }
            cells.push((p.clone(), ly, g));
        }
    }
    let k = cfg.solver.k.clamp(1, 5);
    let results: Vec<Result<SpectrumResult, CliError>> = cells.par_iter().map(|(p, _, g)| lanczos(cfg, p, g, k)).collect();
    let mut records = Vec::with_capacity(cells.len());
    for ((p, ly, g), r) in cells.iter().zip(results) {
        let r = r?;
        records.push(SweepRecord {
            lambda: p.lambda,
            ly: *ly,
            dim: g.dim(),
            ground_energy: r.eigenvalues[0],
            next_energies: r.eigenvalues[1..].to_vec(),
            residual: r.residual_norms[0],
            converged: r.converged,
            regime_label: RegimeLabel::Undetermined,
        });
    }
    let threshold = base.threshold();
    for chunk in records.chunks_mut(lys.len()) {
        let ground: Vec<f64> = chunk.iter().map(|r| r.ground_energy).collect();
        let label = classify(&ground, threshold, ex.drop_threshold, ex.flat_threshold);
        chunk.iter_mut().for_each(|r| r.regime_label = label);
    }
    Ok(SweepReport { threshold, drop_threshold: ex.drop_threshold, flat_threshold: ex.flat_threshold, records })
}

// ---------- landau ----------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandauRow {
    pub index: usize,
    pub eigenvalue: f64,
    pub residual: f64,
    /// Nearest `n` in `(2n + 1)B`.
    pub level: usize,
    pub relative_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandauCluster {
    pub level: usize,
    pub target: f64,
    /// Computed eigenvalues within `cluster_tol` of the target.
    pub members: usize,
}

/// Ritz values of orbitals of one level; every Ritz value has an eigenvalue
/// within `residual_bound` of it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandauCertificate {
    pub level: usize,
    pub target: f64,
    pub ritz_values: Vec<f64>,
    pub residual_bound: f64,
    /// Largest relative distance of an enclosure end from the target.
    pub max_relative_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandauReport {
    pub b_field: f64,
    pub rows: Vec<LandauRow>,
    pub clusters: Vec<LandauCluster>,
    pub certificates: Vec<LandauCertificate>,
    pub converged: bool,
}

pub fn landau(cfg: &RunConfig) -> Result<LandauReport, CliError> {
    let p = cfg.params()?;
    precondition(p.omega == 0.0 && p.lambda == 0.0 && p.kind == ModelKind::DeltaLine, || {
        "landau needs omega = 0 and lambda = 0".into()
    })?;
    precondition(p.b_field > 0.0, || "landau needs b_field > 0".into())?;
    let b = p.b_field;
    let grid = cfg.grid()?;
    let r = lanczos(cfg, &p, &grid, cfg.solver.k)?;
    let level_of = |e: f64| (((e / b) - 1.0) / 2.0).round().max(0.0) as usize;
    let target = |n: usize| (2 * n + 1) as f64 * b;
    let rows: Vec<LandauRow> = r
        .eigenvalues
        .iter()
        .zip(&r.residual_norms)
        .enumerate()
        .map(|(index, (&e, &res))| {
            let level = level_of(e);
            LandauRow { index, eigenvalue: e, residual: res, level, relative_deviation: (e - target(level)).abs() / target(level) }
        })
        .collect();
    let top = rows.iter().map(|r| r.level).max().unwrap_or(0);
    let clusters = (0..=top)
        .map(|n| LandauCluster {
            level: n,
            target: target(n),
            members: rows.iter().filter(|r| r.level == n && r.relative_deviation <= cfg.experiment.cluster_tol).count(),
        })
        .collect();
    let h = assemble_with(&p, &grid, cfg.assembly())?;
    let d = cfg.experiment.orbital_offset.unwrap_or(0.25 * grid.lx.min(grid.ly));
    let centres = [(-d, -d), (d, -d), (-d, d), (d, d)];
    let sigma = cfg.experiment.orbital_sigma.unwrap_or(b.sqrt());
    let mut certificates = Vec::new();
    for &n in &cfg.experiment.levels {
        let orbitals = centres
            .iter()
            .map(|&c| landau_orbital(&p, grid, n, sigma, c, cfg.grid.scheme))
            .collect::<Result<Vec<_>, _>>()?;
        let (ritz_values, residual_bound) = ritz_certificate(&h, &orbitals)?;
        let t = target(n);
        let max_relative_deviation = ritz_values.iter().map(|v| ((v - t).abs() + residual_bound) / t).fold(0.0, f64::max);
        certificates.push(LandauCertificate { level: n, target: t, ritz_values, residual_bound, max_relative_deviation });
    }
    Ok(LandauReport { b_field: b, rows, clusters, certificates, converged: r.converged })
}

// ---------- quasimode ----------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasimodeRow {
    /// `k` for packets and supercritical functions, `n` for critical ones.
    pub schedule: f64,
    pub norm: f64,
    pub residual: f64,
    pub rel_residual: f64,
    /// Squared relative residual allowed for packets.
    pub bound: Option<f64>,
    pub passes: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasimodeReport {
    pub construction: ConstructionKey,
    pub mu: f64,
    pub rows: Vec<QuasimodeRow>,
    /// `|∫ g h|` of the supercritical solvability condition.
    pub orthogonality: Option<f64>,
    pub residual_decreasing: bool,
}

pub fn quasimode(cfg: &RunConfig) -> Result<QuasimodeReport, CliError> {
    let ex = &cfg.experiment;
    let construction = ex.construction.ok_or_else(|| CliError::Config("quasimode needs experiment.construction".into()))?;
    if ex.schedule.is_empty() {
        return Err(CliError::Config("quasimode needs experiment.schedule".into()));
    }
    let p = validate_params(cfg.params()?)?;
    let mu = ex.mu;
    let mut rows = Vec::new();
    let mut orthogonality = None;
    match construction {
        ConstructionKey::Packet => {
            for &k in &ex.schedule {
                let mut o = PacketOptions::new(k);
                o.alpha = ex.packet_alpha;
                o.m = ex.packet_m;
                o.h = ex.packet_h;
                o.scheme = cfg.grid.scheme;
                let q = build_subcritical_packet(&p, mu, ex.eps, &o)?;
                let norm = q.l2_norm();
                let residual = q.self_residual()?;
                let rel = residual / norm;
                let bound = packet_residual_bound(ex.eps, q.meta.m.unwrap_or(o.m));
                let passes = rel * rel <= bound && norm * norm >= 1.0 / 64.0;
                rows.push(QuasimodeRow { schedule: k, norm, residual, rel_residual: rel, bound: Some(bound), passes: Some(passes) });
            }
        }
        ConstructionKey::Critical => {
            precondition(p.kind == ModelKind::DeltaLine, || "critical quasimodes are built for the delta model".into())?;
            for &n in &ex.schedule {
                let q = build_critical(&p, mu, n, ex.critical_h)?;
                let norm = q.l2_norm();
                let residual = q.self_residual()?;
                rows.push(QuasimodeRow { schedule: n, norm, residual, rel_residual: residual / norm, bound: None, passes: None });
            }
        }
        ConstructionKey::Supercritical => {
            let f = match p.kind {
                ModelKind::DeltaLine => {
                    let nm = magspec_core::quasimode::supercritical::normalize_delta(&p)?;
                    let np = &nm.params;
                    let k = Kernel::delta(np.omega, np.lambda)?;
                    solve_f_ode(np.omega, np.lambda, np.b_field, default_f_grid(&k)?)?
                }
                ModelKind::RegularV => {
                    let v = p.potential.as_ref().expect("validated");
                    let inf = inf_L_V(p.omega, p.lambda, v, ex.tol_1d)?;
                    let nm = normalize_regular(&p, inf)?;
                    let np = &nm.params;
                    let l = 50.0 / (np.omega * np.omega + 1.0).sqrt();
                    let g = Grid1D::with_spacing(l, 2e-3, magspec_core::model::Boundary::Dirichlet)?;
                    solve_f_ode_regular(np.omega, np.lambda, np.b_field, np.potential.as_ref().expect("scaled"), g)?
                }
            };
            orthogonality = Some(f.orthogonality_defect);
            for &k in &ex.schedule {
                let q = build_supercritical(&p, mu, chi_k_log(k)?, ex.support_start, &f)?;
                rows.push(QuasimodeRow { schedule: k, norm: q.norm, residual: q.residual, rel_residual: q.rel_residual, bound: None, passes: None });
            }
        }
    }
    let residual_decreasing = rows.windows(2).all(|w| w[1].residual < w[0].residual);
    Ok(QuasimodeReport { construction, mu, rows, orthogonality, residual_decreasing })
}

// ---------- critical-lambda ----------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproximantRow {
    pub eta: f64,
    pub lambda_star: f64,
    /// `|λ* + 2ω| / 2ω`.
    pub relative_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalLambdaReport {
    pub lambda_star: f64,
    /// `inf σ(L)` at `lambda_star`; exactly 0 for the analytic δ value.
    pub inf_at_star: f64,
    pub analytic: bool,
    pub approximants: Vec<ApproximantRow>,
}

/// Unit-mass square well of width `eta`.
pub fn delta_approximant(eta: f64) -> Result<PotentialSpec, CliError> {
    Ok(PotentialSpec::square_well(eta / 2.0, 1.0 / eta, 20_001)?)
}

pub fn critical_lambda(cfg: &RunConfig) -> Result<CriticalLambdaReport, CliError> {
    let p = cfg.params()?;
    precondition(p.omega > 0.0, || "critical-lambda needs omega > 0".into())?;
    let omega = p.omega;
    let (lambda_star, inf_at_star, analytic) = match &p.potential {
        None => (critical_lambda_delta(omega), 0.0, true),
        Some(v) => {
            let c = critical_lambda_1d(omega, v, cfg.experiment.tol_1d)?;
            (c.lambda_star, c.inf_at_star, false)
        }
    };
    let approximants = cfg
        .experiment
        .eta_list
        .iter()
        .map(|&eta| {
            let c = critical_lambda_1d(omega, &delta_approximant(eta)?, cfg.experiment.tol_1d)?;
            Ok(ApproximantRow { eta, lambda_star: c.lambda_star, relative_error: (c.lambda_star + 2.0 * omega).abs() / (2.0 * omega) })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(CriticalLambdaReport { lambda_star, inf_at_star, analytic, approximants })
}

// ---------- existence ----------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TildeRoute {
    pub tilde_ground: f64,
    /// Magnetic form of the real ground vector of the nonmagnetic operator.
    pub magnetic_form: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExistenceCliReport {
    pub threshold: f64,
    pub inf_l: f64,
    pub e_osc: f64,
    pub rows: Vec<TrialRow>,
    /// `None` means no trial dropped below; enlarge `k_list`.
    pub first_below: Option<f64>,
    pub fit: Option<OffsetFit>,
    pub tilde: Option<TildeRoute>,
}

pub fn existence(cfg: &RunConfig) -> Result<ExistenceCliReport, CliError> {
    let p = validate_params(cfg.params()?)?;
    let inf_l = match &p.potential {
        None => exact_inf_L(p.omega, p.lambda),
        Some(v) => inf_L_V(p.omega, p.lambda, v, cfg.experiment.tol_1d)?,
    };
    precondition(inf_l > 0.0, || format!("existence needs inf σ(L) > 0, got {inf_l}"))?;
    let r = existence_scan(&p, &cfg.experiment.k_list, cfg.experiment.trial_h)?;
    let tilde = if cfg.experiment.tilde_check {
        let (tilde_ground, magnetic_form) = tilde_route_value(&p, &cfg.grid()?, cfg.solver.tol)?;
        Some(TildeRoute { tilde_ground, magnetic_form })
    } else {
        None
    };
    Ok(ExistenceCliReport {
        threshold: r.threshold,
        inf_l,
        e_osc: r.e_osc,
        rows: r.rows,
        first_below: r.first_below,
        fit: r.fit,
        tilde,
    })
}
