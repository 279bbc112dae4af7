use std::f64::consts::PI;

use rayon::prelude::*;

use crate::drude::{GaussianMoments, ModelParams};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Discretization {
    /// Bins of equal reorganisation energy up to the cutoff, each mode at its bin's
    /// weight median; one extra mode carries the weight above the cutoff.
    EqualWeight,
    Custom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StarBath {
    pub masses: Vec<f64>,
    pub springs: Vec<f64>,
    pub couplings: Vec<f64>,
    pub discretization: Discretization,
}

impl StarBath {
    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.springs.iter().zip(&self.masses).map(|(k, m)| (k / m).sqrt()).collect()
    }

    pub fn counter_term(&self) -> f64 {
        self.couplings.iter().zip(&self.springs).map(|(c, k)| c * c / k).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalModes {
    pub frequencies: Vec<f64>,
    /// Squared system component of each mass-weighted normal mode.
    pub system_weights: Vec<f64>,
}

pub fn drude_star_bath(params: &ModelParams, n: usize, omega_cutoff: f64) -> StarBath {
    let wd = params.omega_d();
    let m = params.mass;
    let total = 2.0 / PI * m * params.gamma_o() * wd;
    let theta_c = (omega_cutoff / wd).atan();
    let mut bath = StarBath {
        masses: Vec::with_capacity(n + 1),
        springs: Vec::with_capacity(n + 1),
        couplings: Vec::with_capacity(n + 1),
        discretization: Discretization::EqualWeight,
    };
    let mut push = |w: f64, reorg: f64| {
        bath.masses.push(m);
        bath.springs.push(m * w * w);
        bath.couplings.push((reorg * m * w * w).sqrt());
    };
    for j in 0..n {
        let theta = theta_c * (j as f64 + 0.5) / n as f64;
        push(wd * theta.tan(), total * theta_c / n as f64);
    }
    // weight above the cutoff at 2 omega_cutoff, which matches the leading
    // 1/omega_cutoff² momentum tail
    push(2.0 * omega_cutoff, total * (0.5 * PI - theta_c));
    bath
}

/// Normal modes of the system coupled to the bath, with the counter-term included.
pub fn normal_modes(mass: f64, k0: f64, bath: &StarBath) -> Result<NormalModes> {
    if bath.masses.iter().chain(&bath.springs).any(|x| !(*x > 0.0)) {
        return Err(Error::NotPositiveDefinite("bath masses and springs must be positive".into()));
    }
    let a = (k0 + bath.counter_term()) / mass;
    let mut modes: Vec<(f64, f64)> = bath
        .frequencies()
        .iter()
        .zip(bath.couplings.iter().zip(&bath.masses))
        .filter(|(_, (c, _))| **c != 0.0)
        .map(|(w, (c, m))| (w * w, c * c / (mass * m)))
        .collect();
    modes.sort_by(|x, y| x.0.total_cmp(&y.0));
    let d: Vec<f64> = modes.iter().map(|m| m.0).collect();
    let b2: Vec<f64> = modes.iter().map(|m| m.1).collect();
    if d.is_empty() {
        return Ok(NormalModes {
            frequencies: vec![a.sqrt()],
            system_weights: vec![1.0],
        });
    }
    if d.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Domain("degenerate bath frequencies".into()));
    }
    let n = d.len();
    // root k lies in (d[k-1], d[k]) with d[-1] = 0 and d[n] = d[n-1] + a + Σb²;
    // solve for the offset from the lower end to keep d_j - λ accurate
    let upper = d[n - 1] + a.abs() + b2.iter().sum::<f64>();
    let roots: Vec<(f64, f64)> = (0..=n)
        .into_par_iter()
        .map(|k| {
            let base = if k == 0 { 0.0 } else { d[k - 1] };
            let width = if k == n { upper - base } else { d[k] - base };
            let gap = |j: usize, mu: f64| (d[j] - base) - mu;
            let f = |mu: f64| {
                let mut s = a - base - mu;
                for j in 0..n {
                    s -= b2[j] / gap(j, mu);
                }
                s
            };
            let (mut lo, mut hi) = (0.0, width);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if f(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let mu = 0.5 * (lo + hi);
            let s: f64 = (0..n).map(|j| b2[j] / (gap(j, mu) * gap(j, mu))).sum();
            (base + mu, 1.0 / (1.0 + s))
        })
        .collect();
    if roots[0].0 <= 0.0 {
        return Err(Error::NotPositiveDefinite(format!("lowest eigenvalue {}", roots[0].0)));
    }
    Ok(NormalModes {
        frequencies: roots.iter().map(|r| r.0.sqrt()).collect(),
        system_weights: roots.iter().map(|r| r.1).collect(),
    })
}

pub fn moments_from_modes(modes: &NormalModes, mass: f64, beta: f64, hbar: f64) -> Result<GaussianMoments> {
    let (mut q2, mut p2) = (0.0, 0.0);
    for (w, u) in modes.frequencies.iter().zip(&modes.system_weights) {
        let x = 0.5 * beta * hbar * w;
        let coth = if x > 20.0 { 1.0 } else { 1.0 / x.tanh() };
        q2 += u * hbar / (2.0 * w) * coth;
        p2 += u * hbar * w / 2.0 * coth;
    }
    GaussianMoments::new(q2 / mass, p2 * mass, hbar)
}

pub fn star_bath_moments(params: &ModelParams, n: usize, omega_cutoff: Option<f64>) -> Result<GaussianMoments> {
    params.validate()?;
    if n < 100 {
        return Err(Error::Domain(format!("N = {n} < 100")));
    }
    let cutoff = omega_cutoff.unwrap_or(50.0 * params.omega_d());
    let bath = drude_star_bath(params, n, cutoff);
    let modes = normal_modes(params.mass, params.k0(), &bath)?;
    moments_from_modes(&modes, params.mass, params.beta, params.hbar)
}
