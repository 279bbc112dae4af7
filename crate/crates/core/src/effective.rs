//! Eigen-solution of the reduced state and the effective uncoupled oscillator.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::drude::GaussianMoments;
use crate::error::{Error, Result};
use crate::specfun::hermite_orthonormal;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenAnsatz {
    /// (⟨p²⟩/(ħ²⟨q²⟩))^{1/4}
    pub c_tilde: f64,
    pub v_tilde: f64,
    /// y / q
    pub y_scale: f64,
    pub s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenSolution {
    pub ansatz: EigenAnsatz,
    pub v: f64,
    pub xi: f64,
}

impl EigenSolution {
    /// p_n = (1 - ξ) ξ^n
    pub fn probability(&self, n: usize) -> f64 {
        if n == 0 {
            1.0 - self.xi
        } else {
            (1.0 - self.xi) * self.xi.powi(n as i32)
        }
    }

    /// Normalised eigenfunction φ_n(q).
    pub fn eigenfunction(&self, n: usize, q: f64) -> f64 {
        eigenfunction(n, self.ansatz.c_tilde, q)
    }
}

pub(crate) fn eigenfunction(n: usize, c: f64, q: f64) -> f64 {
    let x = c * q;
    (c / PI.sqrt()).sqrt() * hermite_orthonormal(n, x)[n] * (-0.5 * x * x).exp()
}

pub fn xi_of(v: f64) -> f64 {
    (v - 0.5) / (v + 0.5)
}

fn check_v(moments: &GaussianMoments) -> Result<()> {
    if !(moments.v >= 0.5) {
        return Err(Error::UncertaintyViolation(moments.v));
    }
    Ok(())
}

pub fn eigen_solution(moments: &GaussianMoments, hbar: f64) -> Result<EigenSolution> {
    check_v(moments)?;
    let v = moments.v;
    let c_tilde = (moments.p2 / (hbar * hbar * moments.q2)).powf(0.25);
    let v_tilde = (0.25 + c_tilde * c_tilde * moments.q2 + v * v).sqrt();
    let y_scale = moments.p2.sqrt() / (2f64.sqrt() * hbar * v_tilde) * (v - 0.25 / v);
    let s = c_tilde * (2.0 * moments.q2).sqrt() / v_tilde;
    Ok(EigenSolution {
        ansatz: EigenAnsatz { c_tilde, v_tilde, y_scale, s },
        v,
        xi: xi_of(v),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveOscillator {
    pub xi: f64,
    pub v: f64,
    #[serde(rename = "M_eff_star")]
    pub mass: f64,
    #[serde(rename = "omega_eff_star")]
    pub omega: f64,
    #[serde(rename = "k_eff_star")]
    pub spring: f64,
    #[serde(rename = "T_eff_star")]
    pub temperature: f64,
    #[serde(rename = "Z_eff")]
    pub partition: f64,
    #[serde(rename = "U_eff_star")]
    pub energy: f64,
    #[serde(rename = "S")]
    pub entropy: f64,
    #[serde(rename = "F_eff_star")]
    pub free_energy: f64,
}

impl EffectiveOscillator {
    /// -k_B T ln Z, the second route to the free energy.
    pub fn free_energy_from_partition(&self, kb: f64) -> f64 {
        if self.xi == 0.0 {
            self.energy
        } else {
            -kb * self.temperature * self.partition.ln()
        }
    }

    /// ⟨q²⟩ and ⟨p²⟩ from the coth forms at (M★ω★, T★).
    pub fn reconstruct_moments(&self, hbar: f64, kb: f64) -> (f64, f64) {
        let coth = if self.xi == 0.0 {
            1.0
        } else {
            1.0 / (0.5 * hbar * self.omega / (kb * self.temperature)).tanh()
        };
        let mw = self.mass * self.omega;
        (hbar / (2.0 * mw) * coth, mw * hbar / 2.0 * coth)
    }
}

pub fn effective_star(moments: &GaussianMoments, mass: f64, k0: f64, hbar: f64, kb: f64) -> Result<EffectiveOscillator> {
    check_v(moments)?;
    let (q2, p2) = (moments.q2, moments.p2);
    let omega0_sq = k0 / mass;
    let ratio = (p2 / q2).sqrt();
    let omega = ratio / (2.0 * mass) + 0.5 * mass * omega0_sq / ratio;
    let energy = p2 / (2.0 * mass) + 0.5 * k0 * q2;
    let xi = xi_of(moments.v);
    let temperature = if xi == 0.0 { 0.0 } else { -hbar * omega / (kb * xi.ln()) };
    let entropy = entropy_von_neumann(moments.v, kb)?;
    Ok(EffectiveOscillator {
        xi,
        v: moments.v,
        mass: p2 / energy,
        omega,
        spring: 0.5 * (k0 + p2 / (mass * q2)),
        temperature,
        partition: xi.sqrt() / (1.0 - xi),
        energy,
        entropy,
        free_energy: energy - temperature * entropy,
    })
}

fn xlnx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// k_B[(v + 1/2)ln(v + 1/2) - (v - 1/2)ln(v - 1/2)]
pub fn entropy_von_neumann(v: f64, kb: f64) -> Result<f64> {
    if !(v >= 0.5) || !v.is_finite() {
        return Err(Error::Domain(format!("v = {v} < 1/2")));
    }
    Ok(kb * (xlnx(v + 0.5) - xlnx(v - 0.5)))
}

/// -k_B[ln(1 - ξ) + ξ ln ξ/(1 - ξ)]
pub fn entropy_effective(xi: f64, kb: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&xi) {
        return Err(Error::Domain(format!("xi = {xi} outside [0, 1)")));
    }
    Ok(-kb * ((-xi).ln_1p() + xlnx(xi) / (1.0 - xi)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrabertComparison {
    pub omega_tilde: f64,
    pub mass_tilde: f64,
    pub u_tilde: f64,
}

/// Effective oscillator at the bath temperature: ω̃ = (2/ħβ) arccoth(2v).
pub fn grabert_comparison(moments: &GaussianMoments, beta: f64, hbar: f64) -> GrabertComparison {
    let x = 2.0 * moments.v;
    let arccoth = 0.5 * ((x + 1.0) / (x - 1.0)).ln();
    let omega_tilde = 2.0 / (hbar * beta) * arccoth;
    GrabertComparison {
        omega_tilde,
        mass_tilde: (moments.p2 / moments.q2).sqrt() / omega_tilde,
        u_tilde: omega_tilde * (moments.p2 * moments.q2).sqrt(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroTComparison {
    pub omega_bar: f64,
    pub t_bar: f64,
    pub u_bar: f64,
    /// ξ = 0 in floating point, so T̄ is the continuous extension 0.
    pub ground_state: bool,
}

/// Effective oscillator at fixed mass M for moments taken at large β.
pub fn zero_t_comparison(moments: &GaussianMoments, mass: f64, hbar: f64, kb: f64) -> ZeroTComparison {
    let omega_bar = (moments.p2 / moments.q2).sqrt() / mass;
    let xi = xi_of(moments.v);
    let ground_state = xi <= 0.0;
    ZeroTComparison {
        omega_bar,
        t_bar: if ground_state { 0.0 } else { -hbar * omega_bar / (kb * xi.ln()) },
        u_bar: moments.p2 / mass,
        ground_state,
    }
}
