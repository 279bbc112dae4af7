//! Reduced density matrix of the coupled oscillator in the uncoupled number basis.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::drude::GaussianMoments;
use crate::effective::xi_of;
use crate::error::{Error, Result};
use crate::specfun::{hyp2f1_terminating_homogeneous, jacobi_symmetric_homogeneous, legendre_homogeneous, ln_gamma};

/// Largest index at which matrix elements are known to stay representable.
pub const STABILITY_HORIZON: usize = 20_000;

/// Position-space kernel ⟨q|ρ|q'⟩.
pub fn position_kernel(q: f64, qp: f64, moments: &GaussianMoments, hbar: f64) -> f64 {
    let s = q + qp;
    let d = q - qp;
    (-(s * s) / (8.0 * moments.q2) - moments.p2 * d * d / (2.0 * hbar * hbar)).exp() / (2.0 * PI * moments.q2).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessSet {
    pub a: f64,
    pub upsilon: f64,
    pub lambda: f64,
    /// (Upsilon/Lambda)², zero by convention when Lambda = 0.
    pub delta: f64,
    /// (M omega0/hbar)^{1/2}
    pub c: f64,
    /// 1/(c sqrt(2 q2 A)), the common prefactor of all matrix elements.
    pub prefactor: f64,
}

pub fn dimensionless_quantities(moments: &GaussianMoments, mass: f64, omega0: f64, hbar: f64) -> Result<DimensionlessSet> {
    let c2 = mass * omega0 / hbar;
    let x = moments.p2 / (hbar * hbar);
    let y = 1.0 / (4.0 * moments.q2);
    let den = (c2 + 2.0 * x) * (c2 + 2.0 * y);
    let a = den / (4.0 * c2 * c2);
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!("A = {a} is not positive")));
    }
    let upsilon = (4.0 * x * y - c2 * c2) / den;
    let lambda = (2.0 * c2 * (x - y) / den).max(0.0);
    let delta = if lambda > 0.0 { (upsilon / lambda).powi(2) } else { 0.0 };
    let c = c2.sqrt();
    Ok(DimensionlessSet {
        a,
        upsilon,
        lambda,
        delta,
        c,
        prefactor: 1.0 / (c * (2.0 * moments.q2 * a).sqrt()),
    })
}

fn half_floor(n: usize) -> f64 {
    (n / 2) as f64
}

/// ln |ρ_nm| and its sign for n ≥ m of equal parity.
fn jacobi_route_log(n: usize, m: usize, d: &DimensionlessSet) -> Result<(f64, f64)> {
    let a = (n - m) / 2;
    let w = jacobi_symmetric_homogeneous(m, a as f64, d.lambda, d.lambda * d.lambda - d.upsilon * d.upsilon)?;
    if w.mantissa == 0.0 || (a > 0 && d.upsilon == 0.0) {
        return Ok((f64::NEG_INFINITY, 1.0));
    }
    let gamma_part = 0.5
        * (ln_gamma(((n + 1) / 2) as f64 + 0.5) - ln_gamma(((m + 1) / 2) as f64 + 0.5) + ln_gamma(half_floor(n) + 1.0)
            - ln_gamma(half_floor(m) + 1.0))
        + ln_gamma(m as f64 + 1.0)
        - ln_gamma((n + m) as f64 / 2.0 + 1.0);
    let up = if a > 0 { a as f64 * d.upsilon.abs().ln() } else { 0.0 };
    let ln_abs = d.prefactor.ln() + up + gamma_part + w.ln_abs();
    let mut sign = w.mantissa.signum();
    if a % 2 == 1 && d.upsilon > 0.0 {
        sign = -sign;
    }
    Ok((ln_abs, sign))
}

/// ρ_nm from the Jacobi-polynomial closed form; exactly 0 for opposite parity.
pub fn matrix_element(n: usize, m: usize, d: &DimensionlessSet) -> Result<f64> {
    if (n + m) % 2 == 1 {
        return Ok(0.0);
    }
    let (hi, lo) = if n >= m { (n, m) } else { (m, n) };
    let (ln_abs, sign) = jacobi_route_log(hi, lo, d)?;
    let v = sign * ln_abs.exp();
    if !v.is_finite() {
        return Err(Error::Overflow { n, m, advisory: STABILITY_HORIZON });
    }
    Ok(v)
}

/// ρ_nm from the terminating hypergeometric closed form.
pub fn matrix_element_hypergeometric(n: usize, m: usize, d: &DimensionlessSet) -> f64 {
    if (n + m) % 2 == 1 {
        return 0.0;
    }
    let (k, l) = (n / 2, m / 2);
    let odd = n % 2 == 1;
    let (c, shift) = if odd { (1.5, 1.5) } else { (0.5, 0.5) };
    let root = 0.5 * (ln_gamma(k as f64 + shift) + ln_gamma(l as f64 + shift) - ln_gamma(k as f64 + 1.0) - ln_gamma(l as f64 + 1.0));
    let s = hyp2f1_terminating_homogeneous(k, l, c, -d.upsilon, d.lambda * d.lambda);
    let base = d.prefactor / PI.sqrt() * root.exp() * s;
    if odd {
        2.0 * d.lambda * base
    } else {
        base
    }
}

fn occupation_prefactor(d: &DimensionlessSet, moments: &GaussianMoments) -> f64 {
    let gap = moments.v * moments.v - 0.25;
    if d.lambda == 0.0 || gap <= 1e-12 {
        d.prefactor
    } else {
        d.lambda.sqrt() / gap.sqrt()
    }
}

/// Diagonal element p_n from the Legendre closed form.
pub fn occupation(n: usize, d: &DimensionlessSet, moments: &GaussianMoments) -> f64 {
    occupation_prefactor(d, moments) * legendre_homogeneous(n, d.lambda, d.lambda * d.lambda - d.upsilon * d.upsilon)
}

/// p_0..=p_{n_max} in one recurrence sweep.
pub fn occupations(n_max: usize, d: &DimensionlessSet, moments: &GaussianMoments) -> Vec<f64> {
    let pre = occupation_prefactor(d, moments);
    let x = d.lambda;
    let y2 = d.lambda * d.lambda - d.upsilon * d.upsilon;
    let mut out = Vec::with_capacity(n_max + 1);
    let (mut p0, mut p1) = (1.0, x);
    out.push(pre);
    for k in 1..=n_max {
        out.push(pre * p1);
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * y2 * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDensityMatrix {
    pub n_cut: usize,
    pub entries: DMatrix<f64>,
    /// 1 - trace of the truncated matrix.
    pub trace_deficit: f64,
    /// ξ^{n_cut+1}, the weight beyond n_cut in the eigenbasis.
    pub spectral_tail: f64,
}

impl ReducedDensityMatrix {
    pub fn get(&self, n: usize, m: usize) -> f64 {
        self.entries[(n, m)]
    }

    pub fn dim(&self) -> usize {
        self.n_cut + 1
    }

    /// Row-major (n, m, value) triples.
    pub fn triples(&self) -> Vec<(usize, usize, f64)> {
        let d = self.dim();
        (0..d).flat_map(|n| (0..d).map(move |m| (n, m))).map(|(n, m)| (n, m, self.entries[(n, m)])).collect()
    }
}

/// Truncated matrix with trace ≥ 1 - tolerance. n_cut is at least
/// ceil(ln tolerance / ln ξ) and is raised until the number-basis diagonal
/// beyond it carries weight ≤ tolerance.
pub fn build_truncated(d: &DimensionlessSet, moments: &GaussianMoments, tolerance: f64) -> Result<ReducedDensityMatrix> {
    if !(tolerance > 0.0 && tolerance <= 1e-3) {
        return Err(Error::Domain(format!("tolerance {tolerance} outside (0, 1e-3]")));
    }
    let xi = xi_of(moments.v);
    let n_xi = if xi <= 0.0 { 0 } else { (tolerance.ln() / xi.ln()).ceil().max(0.0) as usize };
    let mut n_max = (2 * n_xi).max(16);
    let n_cut = loop {
        if n_max > STABILITY_HORIZON {
            return Err(Error::Overflow { n: n_max, m: n_max, advisory: STABILITY_HORIZON });
        }
        let p = occupations(n_max, d, moments);
        let mut acc = 0.0;
        let mut found = None;
        for (n, pn) in p.iter().enumerate() {
            acc += pn;
            if n >= n_xi && 1.0 - acc <= tolerance {
                found = Some(n);
                break;
            }
        }
        match found {
            Some(n) => break n,
            None => n_max *= 2,
        }
    };
    let dim = n_cut + 1;
    let rows: Vec<Vec<f64>> = (0..dim)
        .into_par_iter()
        .map(|n| (0..=n).map(|m| matrix_element(n, m, d)).collect::<Result<Vec<f64>>>())
        .collect::<Result<_>>()?;
    let mut entries = DMatrix::zeros(dim, dim);
    for (n, row) in rows.iter().enumerate() {
        for (m, v) in row.iter().enumerate() {
            entries[(n, m)] = *v;
            entries[(m, n)] = *v;
        }
    }
    let trace: f64 = (0..dim).map(|n| entries[(n, n)]).sum();
    if (0..dim).any(|n| !(entries[(n, n)] > 0.0)) && moments.v > 0.5 {
        return Err(Error::Consistency {
            moment: "diagonal",
            detail: "non-positive occupation".into(),
        });
    }
    Ok(ReducedDensityMatrix {
        n_cut,
        entries,
        trace_deficit: 1.0 - trace,
        spectral_tail: xi.powi(dim as i32),
    })
}

/// U_s = ⟨p²⟩/2M + k0⟨q²⟩/2.
pub fn internal_energy(moments: &GaussianMoments, mass: f64, k0: f64) -> f64 {
    moments.p2 / (2.0 * mass) + 0.5 * k0 * moments.q2
}

/// Σ p_n ħω0(n + 1/2) over the truncated matrix.
pub fn internal_energy_from_matrix(rho: &ReducedDensityMatrix, omega0: f64, hbar: f64) -> f64 {
    (0..rho.dim()).map(|n| rho.get(n, n) * hbar * omega0 * (n as f64 + 0.5)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstMomentReport {
    pub q1: f64,
    pub p1: f64,
    pub q3: f64,
    pub p3: f64,
    pub q2: f64,
    pub p2: f64,
    pub q2_rel_error: f64,
    pub p2_rel_error: f64,
}

/// Odd moments and reconstructed variances from ladder-operator contractions.
pub fn first_moment_checks(rho: &ReducedDensityMatrix, moments: &GaussianMoments, mass: f64, omega0: f64, hbar: f64) -> Result<FirstMomentReport> {
    let dim = rho.dim();
    // X = a + a†, P = a† - a (times i)
    let mut x = DMatrix::zeros(dim, dim);
    let mut p = DMatrix::zeros(dim, dim);
    for n in 0..dim.saturating_sub(1) {
        let s = ((n + 1) as f64).sqrt();
        x[(n, n + 1)] = s;
        x[(n + 1, n)] = s;
        p[(n + 1, n)] = s;
        p[(n, n + 1)] = -s;
    }
    let lq = (hbar / (2.0 * mass * omega0)).sqrt();
    let lp = (mass * omega0 * hbar / 2.0).sqrt();
    let tr = |op: &DMatrix<f64>| (&rho.entries * op).trace();
    let q1 = lq * tr(&x);
    let p1 = lp * tr(&p);
    let q3 = lq.powi(3) * tr(&(&x * &x * &x));
    let p3 = lp.powi(3) * tr(&(&p * &p * &p));
    // second moments without the truncation artefact of X² in the last row
    let mut sq = 0.0;
    let mut sp = 0.0;
    for n in 0..dim {
        let diag = rho.get(n, n) * (2 * n + 1) as f64;
        sq += diag;
        sp += diag;
        if n + 2 < dim {
            let off = 2.0 * (((n + 1) * (n + 2)) as f64).sqrt() * rho.get(n, n + 2);
            sq += off;
            sp -= off;
        }
    }
    let q2 = lq * lq * sq;
    let p2 = lp * lp * sp;
    let report = FirstMomentReport {
        q1,
        p1,
        q3,
        p3,
        q2,
        p2,
        q2_rel_error: (q2 / moments.q2 - 1.0).abs(),
        p2_rel_error: (p2 / moments.p2 - 1.0).abs(),
    };
    let odd = [("<q>", q1 / lq), ("<p>", p1 / lp), ("<q^3>", q3 / lq.powi(3)), ("<p^3>", p3 / lp.powi(3))];
    for (name, v) in odd {
        if !(v.abs() < 1e-12) {
            return Err(Error::Consistency { moment: name, detail: format!("{v:e}") });
        }
    }
    if !(report.q2_rel_error < 1e-8) {
        return Err(Error::Consistency { moment: "<q^2>", detail: format!("relative error {:e}", report.q2_rel_error) });
    }
    if !(report.p2_rel_error < 1e-8) {
        return Err(Error::Consistency { moment: "<p^2>", detail: format!("relative error {:e}", report.p2_rel_error) });
    }
    Ok(report)
}
