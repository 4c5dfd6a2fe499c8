//! Weyl-sequence constructions and their residual certificates.
//!
//! Three families: wave packets above the threshold `√(ω² + B²)`, the
//! supercritical sequence built on the bound state of the comparison operator,
//! and the critical sequence on its zero-energy state.

pub mod critical;
pub mod cutoff;
pub mod landau;
pub mod packet;
pub mod supercritical;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{assemble_with, AssemblyOptions};
use crate::model::{Grid2D, ModelParams};
use crate::sparse::{norm, HermitianOperator, C64};

pub use critical::build_critical;
pub use cutoff::{chi_k_for_target, make_chi_k, Cutoff};
pub use packet::{build_E_window, build_subcritical_packet, PacketOptions};
pub use supercritical::{build_supercritical, solve_f_ode, FSolution, SupercriticalQuasimode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    SubcriticalPacket,
    Supercritical,
    Critical,
    LandauOrbital,
}

/// Construction parameters; unused entries stay `None`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct QuasimodeMeta {
    pub k: Option<f64>,
    pub alpha: Option<f64>,
    pub m: Option<f64>,
    pub n: Option<f64>,
    pub eps: Option<f64>,
    pub nodes: Option<usize>,
    pub level: Option<usize>,
}

/// Grid function with a target spectral value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quasimode {
    pub grid: Grid2D,
    #[serde(skip)]
    pub values: Vec<C64>,
    pub mu: f64,
    pub params: ModelParams,
    pub construction: Construction,
    pub assembly: AssemblyOptions,
    pub meta: QuasimodeMeta,
}

impl Quasimode {
    /// `L²` norm with the grid quadrature.
    pub fn l2_norm(&self) -> f64 {
        norm(&self.values) * self.grid.cell_area().sqrt()
    }

    /// Largest modulus on the outermost ring of nodes.
    pub fn boundary_max(&self) -> f64 {
        let g = &self.grid;
        let mut m: f64 = 0.0;
        for j in 0..g.ny {
            for i in 0..g.nx {
                if i == 0 || j == 0 || i + 1 == g.nx || j + 1 == g.ny {
                    m = m.max(self.values[g.index(i, j)].norm());
                }
            }
        }
        m
    }

    /// Operator the residual is measured against.
    pub fn operator(&self) -> Result<crate::sparse::SparseHermitian> {
        assemble_with(&self.params, &self.grid, self.assembly)
    }

    /// Relative residual against the quasimode's own operator.
    pub fn self_residual(&self) -> Result<f64> {
        residual(self, &self.operator()?)
    }
}

/// `‖Hψ - μψ‖ / ‖ψ‖` on the grid.
pub fn residual<H: HermitianOperator + ?Sized>(q: &Quasimode, h: &H) -> Result<f64> {
    if h.dim() != q.values.len() {
        return Err(Error::GridMismatch { grid: q.values.len(), dim: h.dim() });
    }
    let nv = norm(&q.values);
    if !(nv > 0.0) {
        return Err(Error::ZeroVector);
    }
    let mut hv = vec![C64::new(0.0, 0.0); q.values.len()];
    h.apply(&q.values, &mut hv);
    let r: f64 = hv.iter().zip(&q.values).map(|(a, b)| (a - b * q.mu).norm_sqr()).sum();
    Ok(r.sqrt() / nv)
}
