//! Heat/work bookkeeping and Clausius audits along γ, M and k0.

use serde::{Deserialize, Serialize};

use crate::drude::{dmoments, moments, uncoupled_moments, GaussianMoments, ModelParams, MomentDerivatives, Variation};
use crate::effective::{effective_star, entropy_von_neumann, EffectiveOscillator};
use crate::error::{Error, Result};
use crate::quadrature::{try_integrate, QuadOptions};

#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariationReport {
    pub params: ModelParams,
    pub which: Variation,
    pub dU_s: f64,
    pub dQ_s: f64,
    pub dW_s: f64,
    pub dQ_eff_star: f64,
    pub dW_eff_star: f64,
    pub T_dS: f64,
    pub Teff_dS: f64,
    pub Y: f64,
    /// ∂Q_s - T ∂S_N
    pub naive_gap: f64,
    /// ∂Q_s - T★ ∂S_N
    pub effective_gap: f64,
    pub naive_violated: bool,
    /// |∂Q★ - T★ ∂S_N| / |T★ ∂S_N|
    pub effective_residual: f64,
}

/// Explicit ∂M and ∂k0 per unit of the varied parameter.
fn explicit(which: Variation) -> (f64, f64) {
    match which {
        Variation::Damping => (0.0, 0.0),
        Variation::Mass => (1.0, 0.0),
        Variation::Spring => (0.0, 1.0),
    }
}

fn dv(m: &GaussianMoments, d: &MomentDerivatives, hbar: f64) -> f64 {
    (m.q2 * d.dp2 + m.p2 * d.dq2) / (2.0 * hbar * (m.q2 * m.p2).sqrt())
}

fn entropy_slope(m: &GaussianMoments, d: &MomentDerivatives, hbar: f64, kb: f64) -> Result<f64> {
    if m.v <= 0.5 {
        return Err(Error::PureState);
    }
    Ok(kb * dv(m, d, hbar) * ((m.v + 0.5) / (m.v - 0.5)).ln())
}

/// ∂S_N = k_B ∂v ln((v + 1/2)/(v - 1/2)).
pub fn entropy_derivative(params: &ModelParams, which: Variation) -> Result<f64> {
    let m = moments(params)?;
    let d = dmoments(params, which)?;
    entropy_slope(&m, &d, params.hbar, params.kb)
}

/// ∂W★ = (⟨p²⟩/2)∂(1/M★) + (⟨q²⟩/2)∂k★.
fn effective_work(m: &GaussianMoments, d: &MomentDerivatives, mass: f64, du: f64, u: f64, which: Variation) -> f64 {
    let (dm, dk) = explicit(which);
    let d_inv_mass = du / m.p2 - u * d.dp2 / (m.p2 * m.p2);
    let ratio = m.p2 / (mass * m.q2);
    let d_ratio = ratio * (d.dp2 / m.p2 - d.dq2 / m.q2 - dm / mass);
    let dk_star = 0.5 * (dk + d_ratio);
    0.5 * m.p2 * d_inv_mass + 0.5 * m.q2 * dk_star
}

pub fn variation_report(params: &ModelParams, which: Variation) -> Result<VariationReport> {
    let m = moments(params)?;
    let d = dmoments(params, which)?;
    let (mass, k0) = (params.mass, params.k0());
    let eff: EffectiveOscillator = effective_star(&m, mass, k0, params.hbar, params.kb)?;
    let ds = entropy_slope(&m, &d, params.hbar, params.kb)?;
    let (dm, dk) = explicit(which);
    let dw_s = -m.p2 / (2.0 * mass * mass) * dm + 0.5 * m.q2 * dk;
    let dq_s = d.dp2 / (2.0 * mass) + 0.5 * k0 * d.dq2;
    let du = dq_s + dw_s;
    let dq_star = d.dp2 / (2.0 * eff.mass) + 0.5 * eff.spring * d.dq2;
    let dw_star = effective_work(&m, &d, mass, du, eff.energy, which);
    let t = params.temperature();
    let t_ds = t * ds;
    let teff_ds = eff.temperature * ds;
    let naive_gap = dq_s - t_ds;
    let scale = dq_s.abs() + t_ds.abs();
    Ok(VariationReport {
        params: *params,
        which,
        dU_s: du,
        dQ_s: dq_s,
        dW_s: dw_s,
        dQ_eff_star: dq_star,
        dW_eff_star: dw_star,
        T_dS: t_ds,
        Teff_dS: teff_ds,
        Y: (eff.temperature - t) * ds + (dw_star - dw_s),
        naive_gap,
        effective_gap: dq_s - teff_ds,
        naive_violated: naive_gap > 1e-12 * scale,
        effective_residual: ((dq_star - teff_ds) / teff_ds).abs(),
    })
}

pub fn gamma_variation(params: &ModelParams) -> Result<VariationReport> {
    variation_report(params, Variation::Damping)
}

pub fn local_variation(params: &ModelParams, which: Variation) -> Result<VariationReport> {
    if which == Variation::Damping {
        return Err(Error::Domain("local variation is mass or spring".into()));
    }
    variation_report(params, which)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeakCouplingReport {
    pub dq_dm: f64,
    pub dq_dk0: f64,
    pub t_ds_dm: f64,
    pub t_ds_dk0: f64,
    pub dw_dm: f64,
    pub dw_dk0: f64,
    /// βħ²ω0² csch²(βħω0/2)/(8M)
    pub closed_form: f64,
    pub residual_m: f64,
    pub residual_k0: f64,
}

/// Uncoupled oscillator: ∂Q_s = T∂S for mass and spring variations.
pub fn weak_coupling_equalities(mass: f64, omega0: f64, beta: f64, hbar: f64) -> WeakCouplingReport {
    let x = 0.5 * beta * hbar * omega0;
    let csch2 = 1.0 / x.sinh().powi(2);
    let m = uncoupled_moments(mass, omega0, beta, hbar);
    let k0 = mass * omega0 * omega0;
    // ∂/∂ω0 of the coth forms at fixed M
    let dq_dw = -m.q2 / omega0 - hbar / (2.0 * mass * omega0) * csch2 * beta * hbar / 2.0;
    let dp_dw = m.p2 / omega0 - mass * hbar * omega0 / 2.0 * csch2 * beta * hbar / 2.0;
    let dv_dw = -0.25 * csch2 * beta * hbar;
    let ln_ratio = 2.0 * x;
    let heat = |dm: f64, dw: f64| {
        let dq = -m.q2 / mass * dm + dq_dw * dw;
        let dp = m.p2 / mass * dm + dp_dw * dw;
        dp / (2.0 * mass) + 0.5 * k0 * dq
    };
    let (dw_m, dw_k) = (-omega0 / (2.0 * mass), 1.0 / (2.0 * mass * omega0));
    let dq_dm = heat(1.0, dw_m);
    let dq_dk0 = heat(0.0, dw_k);
    let t_ds_dm = dv_dw * dw_m * ln_ratio / beta;
    let t_ds_dk0 = dv_dw * dw_k * ln_ratio / beta;
    WeakCouplingReport {
        dq_dm,
        dq_dk0,
        t_ds_dm,
        t_ds_dk0,
        dw_dm: -m.p2 / (2.0 * mass * mass),
        dw_dk0: 0.5 * m.q2,
        closed_form: beta * (hbar * omega0).powi(2) * csch2 / (8.0 * mass),
        residual_m: ((dq_dm - t_ds_dm) / t_ds_dm).abs(),
        residual_k0: ((dq_dk0 - t_ds_dk0) / t_ds_dk0).abs(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CyclicReport {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub evaluations: usize,
    pub interpretation: String,
}

/// ∫_0^γmax (1/T★) ∂Q★/∂γ' dγ' against S_N(γmax) - S_N(0). γ = 2 w0 is a
/// panel boundary when crossed; an evaluation inside the critical band is an error.
pub fn cyclic_integral(params: &ModelParams, gamma_max: f64, n_steps: usize) -> Result<CyclicReport> {
    params.validate()?;
    if !(gamma_max >= 0.0) {
        return Err(Error::Domain(format!("gamma_max = {gamma_max} < 0")));
    }
    let at = |g: f64| ModelParams { gamma: g, ..*params };
    let s0 = entropy_von_neumann(moments(&at(0.0))?.v, params.kb)?;
    let end = at(gamma_max);
    let rhs = if gamma_max == 0.0 { 0.0 } else { entropy_von_neumann(moments(&end)?.v, params.kb)? - s0 };
    let interpretation = "closed coupling-decoupling cycle gives zero: minimum coupling work equals maximum useful work".to_string();
    if gamma_max == 0.0 {
        return Ok(CyclicReport { lhs: 0.0, rhs, residual: 0.0, evaluations: 0, interpretation });
    }
    let n = n_steps.max(1);
    let mut points: Vec<f64> = (0..=n).map(|i| gamma_max * i as f64 / n as f64).collect();
    let crit = 2.0 * params.w0;
    if crit < gamma_max {
        points.push(crit);
        points.sort_by(f64::total_cmp);
        points.dedup();
    }
    let integrand = |g: f64| -> Result<f64> {
        let p = at(g);
        if p.is_critical() {
            return Err(Error::PathCrossing(g));
        }
        let r = gamma_variation(&p)?;
        let eff = effective_star(&moments(&p)?, p.mass, p.k0(), p.hbar, p.kb)?;
        Ok(r.dQ_eff_star / eff.temperature)
    };
    let opts = QuadOptions { epsabs: 0.0, epsrel: 1e-11, max_intervals: 20_000 };
    let r = try_integrate(integrand, &points, &opts)?;
    Ok(CyclicReport {
        lhs: r.value,
        rhs,
        residual: ((r.value - rhs) / rhs).abs(),
        evaluations: r.evaluations,
        interpretation,
    })
}
