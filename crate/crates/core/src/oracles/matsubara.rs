use std::f64::consts::PI;

use crate::drude::{GaussianMoments, ModelParams};
use crate::error::{Error, Result};

const BERNOULLI: [f64; 6] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0];

/// Hurwitz zeta ζ(s, a) for integer s ≥ 2 and large a (Euler–Maclaurin at the origin).
pub fn hurwitz_zeta(s: u32, a: f64) -> f64 {
    let sf = s as f64;
    let mut sum = a.powf(1.0 - sf) / (sf - 1.0) + 0.5 * a.powf(-sf);
    // rising factorial s(s+1)...(s+2i-2) / (2i)!
    let mut rising = sf;
    let mut fact = 2.0;
    for (i, b) in BERNOULLI.iter().enumerate() {
        let k = 2 * (i + 1);
        sum += b / fact * rising * a.powf(-sf - k as f64 + 1.0);
        rising *= (sf + k as f64 - 1.0) * (sf + k as f64);
        fact *= ((k + 1) * (k + 2)) as f64;
    }
    sum
}

/// Coefficients of N(u)/E(u) as a power series in u.
fn series_divide(num: &[f64], den: &[f64], order: usize) -> Vec<f64> {
    let mut out = vec![0.0; order];
    for k in 0..order {
        let mut c = num.get(k).copied().unwrap_or(0.0);
        for j in 1..=k.min(den.len() - 1) {
            c -= den[j] * out[k - j];
        }
        out[k] = c / den[0];
    }
    out
}

/// Position and momentum variances from the imaginary-frequency sums over
/// Matsubara frequencies, truncated at `n_terms` with an asymptotic tail of
/// `tail_order` terms. Fails if the first omitted tail term exceeds `tolerance`
/// relative to the sum.
pub fn matsubara_moments_tol(params: &ModelParams, n_terms: usize, tail_order: usize, tolerance: f64) -> Result<GaussianMoments> {
    params.validate()?;
    if n_terms < 1000 {
        return Err(Error::Domain(format!("n_terms = {n_terms} < 1000")));
    }
    let wd = params.omega_d();
    let w0sq = params.omega0_sq();
    let c1 = w0sq + params.gamma_o() * wd;
    let c0 = w0sq * wd;
    let d = |nu: f64| ((nu + wd) * nu + c1) * nu + c0;
    let fq = |nu: f64| (nu + wd) / d(nu);
    let fp = |nu: f64| (c1 * nu + c0) / d(nu);

    let step = 2.0 * PI / (params.hbar * params.beta);
    let (mut sq, mut sp) = (0.0, 0.0);
    for n in (1..=n_terms).rev() {
        let nu = step * n as f64;
        sq += fq(nu);
        sp += fp(nu);
    }

    let den = [1.0, wd, c1, c0];
    let aq = series_divide(&[1.0, wd], &den, tail_order + 1);
    let ap = series_divide(&[c1, c0], &den, tail_order + 1);
    let a = n_terms as f64 + 1.0;
    let tail = |coef: &[f64], k: usize| coef[k] * step.powi(-(k as i32 + 2)) * hurwitz_zeta(k as u32 + 2, a);
    let (mut tq, mut tp) = (0.0, 0.0);
    for k in (0..tail_order).rev() {
        tq += tail(&aq, k);
        tp += tail(&ap, k);
    }
    let q_total = fq(0.0) + 2.0 * (sq + tq);
    let p_total = fp(0.0) + 2.0 * (sp + tp);
    let eq = 2.0 * tail(&aq, tail_order).abs() / q_total.abs();
    let ep = 2.0 * tail(&ap, tail_order).abs() / p_total.abs();
    let estimate = eq.max(ep);
    if !(estimate <= tolerance) {
        return Err(Error::Convergence {
            what: "Matsubara sum",
            estimate,
            tolerance,
        });
    }
    let q2 = q_total / (params.mass * params.beta);
    let p2 = p_total * params.mass / params.beta;
    GaussianMoments::new(q2, p2, params.hbar)
}

pub fn matsubara_moments(params: &ModelParams, n_terms: usize, tail_order: usize) -> Result<GaussianMoments> {
    matsubara_moments_tol(params, n_terms, tail_order, 1e-12)
}
