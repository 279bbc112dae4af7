//! Drude-bath parametrisation, equilibrium moments and their derivatives.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{digamma, trigamma};

const CRITICAL_BAND: f64 = 1e-9;

/// Oscillator plus Drude bath, stored in the (w0, Omega, gamma) chart.
///
/// The bare spring constant is derived: k0 = M w0² Omega / (Omega + gamma).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub mass: f64,
    pub w0: f64,
    pub omega: f64,
    pub gamma: f64,
    pub beta: f64,
    pub hbar: f64,
    pub kb: f64,
}

impl ModelParams {
    /// Unit mass, hbar, kB, w0 and Omega, as in the figure conventions.
    pub fn reduced(gamma: f64, temperature: f64) -> Self {
        Self {
            mass: 1.0,
            w0: 1.0,
            omega: 1.0,
            gamma,
            beta: 1.0 / temperature,
            hbar: 1.0,
            kb: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let checks = [
            (self.mass > 0.0, "mass must be positive"),
            (self.w0 > 0.0, "w0 must be positive"),
            (self.omega > 0.0, "Omega must be positive"),
            (self.gamma >= 0.0, "gamma must be non-negative"),
            (self.beta > 0.0, "beta must be positive"),
            (self.hbar > 0.0, "hbar must be positive"),
            (self.kb > 0.0, "kB must be positive"),
        ];
        for (ok, msg) in checks {
            if !ok {
                return Err(Error::InvalidParams(msg.into()));
            }
        }
        let all = [self.mass, self.w0, self.omega, self.gamma, self.beta, self.hbar, self.kb];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParams("non-finite parameter".into()));
        }
        Ok(())
    }

    pub fn temperature(&self) -> f64 {
        1.0 / (self.kb * self.beta)
    }

    pub fn omega_d(&self) -> f64 {
        self.omega + self.gamma
    }

    pub fn omega0_sq(&self) -> f64 {
        self.w0 * self.w0 * self.omega / (self.omega + self.gamma)
    }

    pub fn omega0(&self) -> f64 {
        self.omega0_sq().sqrt()
    }

    pub fn k0(&self) -> f64 {
        self.mass * self.omega0_sq()
    }

    pub fn gamma_o(&self) -> f64 {
        let wd = self.omega_d();
        self.gamma * (self.omega * wd + self.w0 * self.w0) / (wd * wd)
    }

    /// w1 = sqrt(w0² - gamma²/4), imaginary when overdamped.
    pub fn w1(&self) -> Complex64 {
        Complex64::new(self.w0 * self.w0 - 0.25 * self.gamma * self.gamma, 0.0).sqrt()
    }

    pub fn is_critical(&self) -> bool {
        (0.5 * self.gamma - self.w0).abs() <= CRITICAL_BAND * self.w0
    }

    /// The same physical bath (omega_d, gamma_o fixed) with new mass and spring
    /// constant. Omega is continued from its current value along the cubic
    /// s³ - omega_d s² + (omega0² + gamma_o omega_d) s - omega0² omega_d = 0.
    pub fn with_physical(&self, mass: f64, k0: f64) -> Result<Self> {
        let wd = self.omega_d();
        let go = self.gamma_o();
        let w0sq = k0 / mass;
        let c1 = w0sq + go * wd;
        let c0 = w0sq * wd;
        let p = |s: f64| ((s - wd) * s + c1) * s - c0;
        let dp = |s: f64| (3.0 * s - 2.0 * wd) * s + c1;
        let mut s = self.omega;
        for _ in 0..100 {
            let step = p(s) / dp(s);
            s -= step;
            if step.abs() <= 1e-16 * s.abs() {
                break;
            }
        }
        if !(s > 0.0 && s < wd) || p(s).abs() > 1e-10 * c0.abs().max(1e-300) {
            return Err(Error::InvalidParams(format!(
                "no continuation of Omega for mass = {mass}, k0 = {k0}"
            )));
        }
        let out = Self {
            mass,
            omega: s,
            gamma: wd - s,
            w0: (w0sq * wd / s).sqrt(),
            ..*self
        };
        out.validate()?;
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Overdamped,
    Underdamped,
}

/// The characteristic rates (Omega, z1, z2) and their residue coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrudeDecomposition {
    pub rates: [Complex64; 3],
    pub lambda: [Complex64; 3],
    pub regime: Regime,
}

pub fn decompose(params: &ModelParams) -> Result<DrudeDecomposition> {
    params.validate()?;
    if params.is_critical() {
        return Err(Error::CriticalDamping {
            half_gamma: 0.5 * params.gamma,
            w0: params.w0,
        });
    }
    let om = Complex64::new(params.omega, 0.0);
    let half = Complex64::new(0.5 * params.gamma, 0.0);
    let i_w1 = Complex64::i() * params.w1();
    let (mut z1, mut z2) = (half + i_w1, half - i_w1);
    if i_w1.im == 0.0 {
        // overdamped: take the small root from the product to avoid cancellation
        let w0sq = params.w0 * params.w0;
        if z1.re < z2.re {
            z1 = Complex64::new(w0sq / z2.re, 0.0);
        } else {
            z2 = Complex64::new(w0sq / z1.re, 0.0);
        }
    }
    let scale = params.omega.max(params.w0);
    if (om - z1).norm() < 1e-12 * scale || (om - z2).norm() < 1e-12 * scale {
        return Err(Error::DegenerateRoots);
    }
    let lambda = [
        (z1 + z2) / ((om - z1) * (z2 - om)),
        (om + z2) / ((z1 - om) * (z2 - z1)),
        (om + z1) / ((z2 - om) * (z1 - z2)),
    ];
    let regime = if 0.5 * params.gamma > params.w0 {
        Regime::Overdamped
    } else {
        Regime::Underdamped
    };
    Ok(DrudeDecomposition {
        rates: [om, z1, z2],
        lambda,
        regime,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianMoments {
    pub q2: f64,
    pub p2: f64,
    pub v: f64,
}

impl GaussianMoments {
    /// Rounding just below the Heisenberg bound (relative 1e-12) is clamped to v = 1/2.
    pub fn new(q2: f64, p2: f64, hbar: f64) -> Result<Self> {
        if !(q2.is_finite() && p2.is_finite()) {
            return Err(Error::NonFinite("moments"));
        }
        if q2 <= 0.0 || p2 <= 0.0 {
            return Err(Error::UncertaintyViolation(0.0));
        }
        let mut v = (q2 * p2).sqrt() / hbar;
        if v < 0.5 {
            if v < 0.5 * (1.0 - 1e-12) {
                return Err(Error::UncertaintyViolation(v));
            }
            v = 0.5;
        }
        Ok(Self { q2, p2, v })
    }
}

pub fn uncoupled_moments(mass: f64, omega0: f64, beta: f64, hbar: f64) -> GaussianMoments {
    let x = 0.5 * beta * hbar * omega0;
    let coth = if x > 40.0 { 1.0 } else { 1.0 / x.tanh() };
    let q2 = hbar / (2.0 * mass * omega0) * coth;
    let p2 = 0.5 * mass * hbar * omega0 * coth;
    GaussianMoments { q2, p2, v: 0.5 * coth }
}

fn brace(params: &ModelParams, w: Complex64) -> Result<Complex64> {
    let x = w * (params.beta * params.hbar / (2.0 * PI));
    Ok((w * params.beta).inv() + digamma(x)? * (params.hbar / PI))
}

fn brace_derivative(params: &ModelParams, w: Complex64) -> Result<Complex64> {
    let x = w * (params.beta * params.hbar / (2.0 * PI));
    let b = params.beta;
    let h = params.hbar;
    Ok(-(w * w * b).inv() + trigamma(x)? * (h * h * b / (2.0 * PI * PI)))
}

/// Complex-valued digamma sums for (q2, p2); their imaginary parts vanish analytically.
pub(crate) fn drude_sums(params: &ModelParams) -> Result<(Complex64, Complex64)> {
    let d = decompose(params)?;
    let mut q = Complex64::new(0.0, 0.0);
    let mut p = Complex64::new(0.0, 0.0);
    for l in 0..3 {
        let w = d.rates[l];
        let t = d.lambda[l] * brace(params, w)?;
        q += t;
        p += t * w * w;
    }
    Ok((q / params.mass, -p * params.mass))
}

pub fn moments(params: &ModelParams) -> Result<GaussianMoments> {
    params.validate()?;
    if params.gamma == 0.0 {
        return Ok(uncoupled_moments(params.mass, params.w0, params.beta, params.hbar));
    }
    let (q, p) = drude_sums(params)?;
    GaussianMoments::new(q.re, p.re, params.hbar)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variation {
    Damping,
    Mass,
    Spring,
}

impl std::str::FromStr for Variation {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "damping" | "gamma" => Ok(Self::Damping),
            "mass" | "M" => Ok(Self::Mass),
            "spring" | "k0" => Ok(Self::Spring),
            other => Err(format!("unknown variation '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentDerivatives {
    pub dq2: f64,
    pub dp2: f64,
    pub which: Variation,
}

/// Tangent of the chart (Omega, w0, gamma) and of the mass along one variation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartTangent {
    pub d_omega: f64,
    pub d_w0: f64,
    pub d_gamma: f64,
    pub d_mass: f64,
}

/// Chart tangent per unit change of the varied parameter. gamma varies at fixed
/// (w0, Omega); mass and spring vary at fixed (omega_d, gamma_o) and fixed k0
/// or fixed mass respectively.
pub fn chart_tangent(params: &ModelParams, which: Variation) -> Result<ChartTangent> {
    if which == Variation::Damping {
        return Ok(ChartTangent {
            d_omega: 0.0,
            d_w0: 0.0,
            d_gamma: 1.0,
            d_mass: 0.0,
        });
    }
    let d = decompose(params)?;
    let w0sq = params.omega0_sq();
    let (d_w0sq, d_mass) = match which {
        Variation::Mass => (-w0sq / params.mass, 1.0),
        _ => (1.0 / params.mass, 0.0),
    };
    let om = d.rates[0];
    let d_omega = (Complex64::new(params.gamma, 0.0) / ((om - d.rates[1]) * (om - d.rates[2]))).re * d_w0sq;
    let wd = params.omega_d();
    let d_w0 = wd / (2.0 * params.w0) * (d_w0sq / params.omega - w0sq * d_omega / (params.omega * params.omega));
    Ok(ChartTangent {
        d_omega,
        d_w0,
        d_gamma: -d_omega,
        d_mass,
    })
}

/// Derivatives of (Omega, z1, z2) along a chart tangent.
pub fn rate_derivatives(params: &ModelParams, d: &DrudeDecomposition, t: &ChartTangent) -> [Complex64; 3] {
    let half = 0.5 * params.gamma;
    let dz = |z: Complex64| {
        let big_d = z - half;
        (0.5 + params.gamma / (4.0 * big_d)) * t.d_gamma - params.w0 / big_d * t.d_w0
    };
    [Complex64::new(t.d_omega, 0.0), dz(d.rates[1]), dz(d.rates[2])]
}

/// Derivatives of the residue coefficients given derivatives of the rates.
pub fn lambda_derivatives(d: &DrudeDecomposition, dr: &[Complex64; 3]) -> [Complex64; 3] {
    let [om, z1, z2] = d.rates;
    let [dom, dz1, dz2] = *dr;
    // λ = N / (A B)
    let q = |lam: Complex64, dn: Complex64, a: Complex64, da: Complex64, b: Complex64, db: Complex64| {
        (dn - lam * (da * b + a * db)) / (a * b)
    };
    [
        q(d.lambda[0], dz1 + dz2, om - z1, dom - dz1, z2 - om, dz2 - dom),
        q(d.lambda[1], dom + dz2, z1 - om, dz1 - dom, z2 - z1, dz2 - dz1),
        q(d.lambda[2], dom + dz1, z2 - om, dz2 - dom, z1 - z2, dz1 - dz2),
    ]
}

pub(crate) fn derivative_sums(params: &ModelParams, which: Variation) -> Result<(Complex64, Complex64)> {
    let d = decompose(params)?;
    let t = chart_tangent(params, which)?;
    let dr = rate_derivatives(params, &d, &t);
    let dl = lambda_derivatives(&d, &dr);
    let mut sq = Complex64::new(0.0, 0.0);
    let mut sp = Complex64::new(0.0, 0.0);
    for l in 0..3 {
        let w = d.rates[l];
        let b = brace(params, w)?;
        let k = b * dl[l] + d.lambda[l] * brace_derivative(params, w)? * dr[l];
        sq += k;
        sp += k * w * w + w * d.lambda[l] * b * dr[l] * 2.0;
    }
    let m = params.mass;
    let mut dq = sq / m;
    let mut dp = -sp * m;
    if t.d_mass != 0.0 {
        let (q, p) = drude_sums(params)?;
        dq -= q / m * t.d_mass;
        dp += p / m * t.d_mass;
    }
    Ok((dq, dp))
}

pub fn dmoments(params: &ModelParams, which: Variation) -> Result<MomentDerivatives> {
    params.validate()?;
    let (dq, dp) = derivative_sums(params, which)?;
    if !(dq.re.is_finite() && dp.re.is_finite()) {
        return Err(Error::NonFinite("moment derivatives"));
    }
    Ok(MomentDerivatives {
        dq2: dq.re,
        dp2: dp.re,
        which,
    })
}

pub fn dmoments_dgamma(params: &ModelParams) -> Result<MomentDerivatives> {
    dmoments(params, Variation::Damping)
}

pub fn dmoments_dm(params: &ModelParams) -> Result<MomentDerivatives> {
    dmoments(params, Variation::Mass)
}

pub fn dmoments_dk0(params: &ModelParams) -> Result<MomentDerivatives> {
    dmoments(params, Variation::Spring)
}
