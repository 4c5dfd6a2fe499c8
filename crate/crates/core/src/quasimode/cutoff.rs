//! Cutoff profiles with their first two derivatives.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::Composite;

/// Quintic smoothstep: `p(0) = 0`, `p(1) = 1`, first and second derivatives
/// vanish at both ends.
fn step(u: f64) -> (f64, f64, f64) {
    if u <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    if u >= 1.0 {
        return (1.0, 0.0, 0.0);
    }
    let p = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
    let d1 = 30.0 * u * u * (1.0 - u) * (1.0 - u);
    let d2 = 60.0 * u * (1.0 - u) * (1.0 - 2.0 * u);
    (p, d1, d2)
}

/// `∫₀¹ p²` and `∫₀¹ p'²` for the smoothstep.
const STEP_SQ: f64 = 181.0 / 462.0;
const STEP_D1_SQ: f64 = 10.0 / 7.0;

/// `[(z-1)(2-z)]⁶` integrates to `6!6!/13!` over `[1, 2]`.
const CHI_FIXED_NORM: f64 = 12012.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Cutoff {
    /// `χ(z) = Φ(ln z)` on `(1, k)`: plateau of height `amplitude` with
    /// smoothstep ramps of width `ramp` in the variable `ln z`.
    ChiKLog { k: f64, amplitude: f64, ramp: f64 },
    /// `√12012 [(z-1)(2-z)]³` on `[1, 2]`, so that `∫χ² = 1`.
    ChiFixed,
    /// 1 on `[lo + ramp, hi - ramp]`, smoothstep ramps, 0 outside `(lo, hi)`.
    Plateau { lo: f64, hi: f64, ramp: f64 },
}

impl Cutoff {
    /// `χ`, `χ'`, `χ''` at `z`.
    pub fn eval3(&self, z: f64) -> (f64, f64, f64) {
        match *self {
            Cutoff::ChiKLog { k, amplitude, ramp } => {
                if z <= 1.0 || z >= k {
                    return (0.0, 0.0, 0.0);
                }
                let (s, big) = (z.ln(), k.ln());
                let (p, d1, d2) = if s < big - s {
                    let (p, d1, d2) = step(s / ramp);
                    (p, d1 / ramp, d2 / (ramp * ramp))
                } else {
                    let (p, d1, d2) = step((big - s) / ramp);
                    (p, -d1 / ramp, d2 / (ramp * ramp))
                };
                let (f, f1, f2) = (amplitude * p, amplitude * d1, amplitude * d2);
                (f, f1 / z, (f2 - f1) / (z * z))
            }
            Cutoff::ChiFixed => {
                if z <= 1.0 || z >= 2.0 {
                    return (0.0, 0.0, 0.0);
                }
                let c = CHI_FIXED_NORM.sqrt();
                let q = (z - 1.0) * (2.0 - z);
                let dq = 3.0 - 2.0 * z;
                (c * q * q * q, 3.0 * c * q * q * dq, c * (6.0 * q * dq * dq - 6.0 * q * q))
            }
            Cutoff::Plateau { lo, hi, ramp } => {
                if z <= lo || z >= hi {
                    return (0.0, 0.0, 0.0);
                }
                if z - lo < hi - z {
                    let (p, d1, d2) = step((z - lo) / ramp);
                    (p, d1 / ramp, d2 / (ramp * ramp))
                } else {
                    let (p, d1, d2) = step((hi - z) / ramp);
                    (p, -d1 / ramp, d2 / (ramp * ramp))
                }
            }
        }
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.eval3(z).0
    }

    pub fn support(&self) -> (f64, f64) {
        match *self {
            Cutoff::ChiKLog { k, .. } => (1.0, k),
            Cutoff::ChiFixed => (1.0, 2.0),
            Cutoff::Plateau { lo, hi, .. } => (lo, hi),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        match *self {
            Cutoff::ChiKLog { amplitude, .. } => amplitude,
            Cutoff::ChiFixed => CHI_FIXED_NORM.sqrt() / 64.0,
            Cutoff::Plateau { .. } => 1.0,
        }
    }

    /// Points where the profile changes formula.
    pub fn breakpoints(&self) -> Vec<f64> {
        match *self {
            Cutoff::ChiKLog { k, ramp, .. } => {
                let big = k.ln();
                vec![1.0, ramp.exp(), (big - ramp).exp(), k]
            }
            Cutoff::ChiFixed => vec![1.0, 2.0],
            Cutoff::Plateau { lo, hi, ramp } => vec![lo, lo + ramp, hi - ramp, hi],
        }
    }

    /// `(∫χ²/z, ∫zχ'²)` over the support by composite Gauss-Legendre
    /// quadrature; the log profile is integrated in `s = ln z`.
    pub fn integrals(&self) -> (f64, f64) {
        let rule = Composite::new(12);
        match *self {
            Cutoff::ChiKLog { .. } => {
                let br: Vec<f64> = self.breakpoints().iter().map(|z| z.ln()).collect();
                let inv = rule.integrate(&br, 64, |s| self.eval(s.exp()).powi(2));
                let energy = rule.integrate(&br, 64, |s| {
                    let z = s.exp();
                    z * z * self.eval3(z).1.powi(2)
                });
                (inv, energy)
            }
            _ => {
                let br = self.breakpoints();
                let inv = rule.integrate(&br, 64, |z| self.eval(z).powi(2) / z);
                let energy = rule.integrate(&br, 64, |z| z * self.eval3(z).1.powi(2));
                (inv, energy)
            }
        }
    }
}

/// Log profile on `(1, k)` normalized by `∫χ²/z = 1`, ramps a quarter of `ln k` wide.
pub fn chi_k_log(k: f64) -> Result<Cutoff> {
    if !(k >= 8.0) || !k.is_finite() {
        return Err(Error::InvalidGrid(format!("cutoff length must be at least 8, got {k}")));
    }
    let big = k.ln();
    let ramp = big / 4.0;
    let amplitude = 1.0 / (big - 2.0 * ramp + 2.0 * ramp * STEP_SQ).sqrt();
    Ok(Cutoff::ChiKLog { k, amplitude, ramp })
}

/// `∫zχ'²` of [`chi_k_log`] in closed form.
pub fn chi_k_energy(k: f64) -> f64 {
    let big = k.ln();
    let ramp = big / 4.0;
    let a2 = 1.0 / (big - 2.0 * ramp + 2.0 * ramp * STEP_SQ);
    2.0 * a2 * STEP_D1_SQ / ramp
}

/// The log cutoff for `k`, provided its energy `∫zχ'²` is below `eps_target`.
pub fn make_chi_k(k: f64, eps_target: f64) -> Result<Cutoff> {
    let chi = chi_k_log(k)?;
    let achievable = chi_k_energy(k);
    if achievable > eps_target {
        return Err(Error::TargetUnreachable { k, target: eps_target, achievable });
    }
    Ok(chi)
}

/// Squares `k` until the energy target is met.
pub fn chi_k_for_target(k_min: f64, eps_target: f64) -> Result<Cutoff> {
    let mut k = k_min.max(8.0);
    while chi_k_energy(k) > eps_target && k < 1e150 {
        k *= k;
    }
    make_chi_k(k, eps_target)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_constants() {
        let rule = Composite::new(10);
        let sq = rule.integrate(&[0.0, 1.0], 4, |u| step(u).0.powi(2));
        let d1 = rule.integrate(&[0.0, 1.0], 4, |u| step(u).1.powi(2));
        assert!((sq - STEP_SQ).abs() < 1e-14);
        assert!((d1 - STEP_D1_SQ).abs() < 1e-13);
    }
}
