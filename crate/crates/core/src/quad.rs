//! Composite Gauss-Legendre rules.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

/// Nodes and weights of a fixed rule mapped onto panels.
#[derive(Debug, Clone)]
pub struct Composite {
    pairs: Vec<(f64, f64)>,
}

impl Composite {
    /// `order` points per panel.
    pub fn new(order: usize) -> Self {
        let rule = GaussLegendre::new(NonZeroUsize::new(order.max(1)).unwrap());
        Composite { pairs: rule.as_node_weight_pairs().to_vec() }
    }

    /// Nodes and weights on `[a, b]` split into `panels` equal pieces.
    pub fn nodes(&self, a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
        let panels = panels.max(1);
        let w = (b - a) / panels as f64;
        let mut out = Vec::with_capacity(panels * self.pairs.len());
        for p in 0..panels {
            let lo = a + p as f64 * w;
            for &(x, wt) in &self.pairs {
                out.push((lo + 0.5 * w * (x + 1.0), 0.5 * w * wt));
            }
        }
        out
    }

    /// Nodes over consecutive breakpoints, `panels` pieces between each pair.
    pub fn nodes_between(&self, breaks: &[f64], panels: usize) -> Vec<(f64, f64)> {
        breaks
            .windows(2)
            .filter(|w| w[1] > w[0])
            .flat_map(|w| self.nodes(w[0], w[1], panels))
            .collect()
    }

    pub fn integrate(&self, breaks: &[f64], panels: usize, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes_between(breaks, panels).iter().map(|&(x, w)| w * f(x)).sum()
    }
}
