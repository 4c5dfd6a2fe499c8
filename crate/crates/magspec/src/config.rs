//! Run configuration: a flat `key = value` file with the sections `model`,
//! `grid`, `solver` and `experiment`. Unknown keys are rejected.
//!
//! ```toml
//! [model]
//! omega = 1.0
//! lambda = -1.0
//!
//! [grid]
//! lx = 12.0
//! ly = 12.0
//! h = 0.05
//! ```
//!
//! Dotted keys (`model.omega = 1.0`) are accepted as well. A `run.json`
//! written by a previous run can be passed in place of the text file.

use std::path::Path;

use magspec_core::hamiltonian::{AssemblyOptions, DeltaCoupling, Scheme};
use magspec_core::model::{Boundary, Grid2D, Interpolation, ModelKind, ModelParams, PotentialSpec};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub experiment: ExperimentSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum KindKey {
    #[default]
    Delta,
    Regular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKey {
    /// Height `well_height` on `|s| ≤ well_half_width`.
    SquareWell,
    /// Samples `potential_values` on `[-potential_extent, potential_extent]`.
    Tabulated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    #[serde(default)]
    pub kind: KindKey,
    #[serde(default = "one")]
    pub omega: f64,
    #[serde(default = "one")]
    pub b_field: f64,
    #[serde(default)]
    pub lambda: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<PotentialKey>,
    #[serde(default = "one")]
    pub well_half_width: f64,
    #[serde(default = "one")]
    pub well_height: f64,
    #[serde(default = "default_potential_nodes")]
    pub potential_nodes: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential_extent: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub potential_values: Vec<f64>,
    #[serde(default)]
    pub interpolation: Interpolation,
}

impl Default for ModelSection {
    fn default() -> Self {
        ModelSection {
            kind: KindKey::Delta,
            omega: 1.0,
            b_field: 1.0,
            lambda: 0.0,
            potential: None,
            well_half_width: 1.0,
            well_height: 1.0,
            potential_nodes: default_potential_nodes(),
            potential_extent: None,
            potential_values: Vec::new(),
            interpolation: Interpolation::default(),
        }
    }
}

/// Grid of `[-lx, lx] × [-ly, ly]`. Node counts win over `h` when both are
/// given; the resolved config always carries both.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default = "default_half_width")]
    pub lx: f64,
    #[serde(default = "default_half_width")]
    pub ly: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nx: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ny: Option<usize>,
    #[serde(default)]
    pub boundary: Boundary,
    #[serde(default)]
    pub scheme: Scheme,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_coupling: Option<DeltaCoupling>,
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection {
            lx: default_half_width(),
            ly: default_half_width(),
            h: None,
            nx: None,
            ny: None,
            boundary: Boundary::Dirichlet,
            scheme: Scheme::Peierls,
            delta_coupling: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_filter_degree")]
    pub filter_degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<usize>,
}

impl Default for SolverSection {
    fn default() -> Self {
        SolverSection {
            k: default_k(),
            tol: default_tol(),
            max_iter: default_max_iter(),
            seed: 0,
            filter_degree: default_filter_degree(),
            basis: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionKey {
    Packet,
    Supercritical,
    Critical,
}

/// Knobs of the individual commands; each command reads only its own.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    // sweep
    #[serde(default)]
    pub lambda_list: Vec<f64>,
    #[serde(default)]
    pub ly_list: Vec<f64>,
    #[serde(default = "default_drop")]
    pub drop_threshold: f64,
    #[serde(default = "default_flat")]
    pub flat_threshold: f64,
    #[serde(default = "default_memory_cap")]
    pub memory_cap: usize,
    // spectrum
    #[serde(default)]
    pub band_n: Vec<f64>,
    #[serde(default = "default_band_samples")]
    pub band_samples: usize,
    #[serde(default = "yes")]
    pub bracketing: bool,
    // quasimode
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<ConstructionKey>,
    #[serde(default)]
    pub mu: f64,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default)]
    pub schedule: Vec<f64>,
    #[serde(default = "default_alpha")]
    pub packet_alpha: f64,
    #[serde(default = "default_packet_m")]
    pub packet_m: f64,
    #[serde(default = "default_packet_h")]
    pub packet_h: f64,
    #[serde(default = "default_n_k")]
    pub support_start: f64,
    #[serde(default = "default_critical_h")]
    pub critical_h: f64,
    // landau
    /// Momentum spread of the orbitals; `√B` balances their decay in x and y.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbital_sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbital_offset: Option<f64>,
    #[serde(default = "default_levels")]
    pub levels: Vec<usize>,
    #[serde(default = "default_cluster_tol")]
    pub cluster_tol: f64,
    // critical-lambda
    #[serde(default)]
    pub eta_list: Vec<f64>,
    #[serde(default = "default_tol")]
    pub tol_1d: f64,
    // existence
    #[serde(default = "default_k_list")]
    pub k_list: Vec<f64>,
    #[serde(default = "default_trial_h")]
    pub trial_h: f64,
    #[serde(default = "yes")]
    pub tilde_check: bool,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        toml::from_str("").expect("defaults")
    }
}

fn one() -> f64 {
    1.0
}
fn yes() -> bool {
    true
}
fn default_potential_nodes() -> usize {
    201
}
fn default_half_width() -> f64 {
    12.0
}
fn default_k() -> usize {
    6
}
fn default_tol() -> f64 {
    1e-8
}
fn default_max_iter() -> usize {
    20_000
}
fn default_filter_degree() -> usize {
    20
}
fn default_drop() -> f64 {
    0.5
}
fn default_flat() -> f64 {
    0.02
}
fn default_memory_cap() -> usize {
    1_500_000
}
fn default_band_samples() -> usize {
    201
}
fn default_eps() -> f64 {
    0.1
}
fn default_alpha() -> f64 {
    2.0
}
fn default_packet_m() -> f64 {
    8.0
}
fn default_packet_h() -> f64 {
    0.1
}
fn default_n_k() -> f64 {
    10.0
}
fn default_critical_h() -> f64 {
    magspec_core::quasimode::critical::CRITICAL_H
}
fn default_levels() -> Vec<usize> {
    vec![0, 1]
}
fn default_cluster_tol() -> f64 {
    0.03
}
fn default_k_list() -> Vec<f64> {
    (2..=8).map(|e| 2f64.powi(e)).collect()
}
fn default_trial_h() -> f64 {
    magspec_core::existence::TRIAL_H
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Reads a text config, or the `config` member of a `run.json`.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        if path.extension().is_some_and(|e| e == "json") {
            let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| CliError::Config(e.to_string()))?;
            let cfg = v.get("config").cloned().unwrap_or(v);
            serde_json::from_value(cfg).map_err(|e| CliError::Config(e.to_string()))
        } else {
            Self::from_toml(&text)
        }
    }

    pub fn potential(&self) -> Result<Option<PotentialSpec>, CliError> {
        let m = &self.model;
        let spec = match m.potential {
            None => return Ok(None),
            Some(PotentialKey::SquareWell) => PotentialSpec::square_well(m.well_half_width, m.well_height, m.potential_nodes),
            Some(PotentialKey::Tabulated) => {
                let s0 = m.potential_extent.ok_or_else(|| CliError::Config("tabulated potential needs potential_extent".into()))?;
                PotentialSpec::new(s0, m.potential_values.clone(), m.interpolation)
            }
        };
        spec.map(Some).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Model parameters without the sign checks, which each command applies
    /// as it needs.
    pub fn params(&self) -> Result<ModelParams, CliError> {
        let m = &self.model;
        let potential = self.potential()?;
        let kind = match m.kind {
            KindKey::Delta => ModelKind::DeltaLine,
            KindKey::Regular => ModelKind::RegularV,
        };
        if kind == ModelKind::RegularV && potential.is_none() {
            return Err(CliError::Config("regular model needs model.potential".into()));
        }
        Ok(ModelParams { omega: m.omega, b_field: m.b_field, lambda: m.lambda, kind, potential })
    }

    pub fn grid(&self) -> Result<Grid2D, CliError> {
        let g = &self.grid;
        let r = match (g.nx, g.ny, g.h) {
            (Some(nx), Some(ny), _) => Grid2D::new(g.lx, g.ly, nx, ny, g.boundary),
            (_, _, Some(h)) => Grid2D::with_spacing(g.lx, g.ly, h, h, g.boundary),
            _ => return Err(CliError::Config("grid needs h or both nx and ny".into())),
        };
        r.map_err(|e| CliError::Config(e.to_string()))
    }

    /// Spacing used when the domain height changes (sweeps).
    pub fn spacing(&self) -> Result<f64, CliError> {
        match self.grid.h {
            Some(h) => Ok(h),
            None => Ok(self.grid()?.hx),
        }
    }

    pub fn assembly(&self) -> AssemblyOptions {
        let mut o = AssemblyOptions::new(self.grid.scheme);
        if let Some(c) = self.grid.delta_coupling {
            o.delta_coupling = c;
        }
        o
    }

    /// Copy with every grid field filled in and the seed applied. A config
    /// without any grid size stays without one; commands that need a grid
    /// report that themselves.
    pub fn resolved(&self, seed: Option<u64>) -> Result<Self, CliError> {
        let mut c = self.clone();
        if let Some(s) = seed {
            c.solver.seed = s;
        }
        if c.grid.h.is_some() || c.grid.nx.is_some() || c.grid.ny.is_some() {
            let g = c.grid()?;
            c.grid.nx = Some(g.nx);
            c.grid.ny = Some(g.ny);
            c.grid.h = Some(c.spacing()?);
        }
        c.grid.delta_coupling = Some(c.assembly().delta_coupling);
        Ok(c)
    }
}
