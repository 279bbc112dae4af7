use std::f64::consts::PI;

use num_complex::Complex64;

use crate::drude::{GaussianMoments, ModelParams};
use crate::error::{Error, Result};
use crate::quadrature::{try_integrate, QuadOptions};

#[derive(Debug, Clone, Copy)]
pub struct FdtSpec {
    /// Relative tolerance on each moment, covering both quadrature error and the
    /// neglected tail beyond omega_max.
    pub tolerance: f64,
}

impl Default for FdtSpec {
    fn default() -> Self {
        Self { tolerance: 1e-9 }
    }
}

/// 1/χ(ω) = M(ω0² - ω² - iω γ_o ω_d/(ω_d - iω)).
pub fn inverse_susceptibility(params: &ModelParams, w: Complex64) -> Complex64 {
    let wd = params.omega_d();
    let kernel = params.gamma_o() * wd / (wd - Complex64::i() * w);
    (params.omega0_sq() - w * w - Complex64::i() * w * kernel) * params.mass
}

/// Dynamic susceptibility χ(ω).
pub fn susceptibility(params: &ModelParams, w: Complex64) -> Complex64 {
    inverse_susceptibility(params, w).inv()
}

/// Im χ(ω) written without cancellation.
pub fn im_susceptibility(params: &ModelParams, w: f64) -> f64 {
    let wd = params.omega_d();
    let go = params.gamma_o();
    let r = wd * wd + w * w;
    let re = params.omega0_sq() - w * w + w * w * go * wd / r;
    let im = -w * go * wd * wd / r;
    -im / (params.mass * (re * re + im * im))
}

fn coth(x: f64) -> f64 {
    if x > 20.0 {
        1.0
    } else {
        1.0 / x.tanh()
    }
}

/// Default cutoff: the momentum tail Mħγ_oω_d²/(2πω_max²) is kept at 1% of the
/// tolerance relative to a lower bound on ⟨p²⟩.
pub fn default_omega_max(params: &ModelParams, spec: &FdtSpec) -> f64 {
    let wd = params.omega_d();
    let p_ref = 0.5 * params.mass * (0.5 * params.hbar * params.omega0()).max(1.0 / params.beta);
    let need = params.mass * params.hbar * params.gamma_o() * wd * wd / (2.0 * PI * 0.01 * spec.tolerance * p_ref);
    need.sqrt().max(100.0 * wd.max(params.w0))
}

pub fn fdt_quadrature_moments(params: &ModelParams, omega_max: Option<f64>, spec: &FdtSpec) -> Result<GaussianMoments> {
    params.validate()?;
    let w_max = omega_max.unwrap_or_else(|| default_omega_max(params, spec));
    let b = params.beta * params.hbar;
    let h = params.hbar;
    let m = params.mass;

    let mut points = vec![0.0, params.omega, params.omega_d(), params.omega0(), params.w0, params.w1().re];
    let mut x = 10.0 * params.omega_d().max(params.w0);
    while x < w_max {
        points.push(x);
        x *= 10.0;
    }
    points.push(w_max);
    points.retain(|&p| p >= 0.0 && p <= w_max);
    points.sort_by(f64::total_cmp);
    points.dedup();

    let opts = QuadOptions {
        epsabs: 0.0,
        epsrel: 0.1 * spec.tolerance,
        max_intervals: 50_000,
    };
    let q_int = try_integrate(|w| Ok(h / PI * coth(0.5 * b * w) * im_susceptibility(params, w)), &points, &opts)?;
    let p_int = try_integrate(
        |w| Ok(m * m * h / PI * w * w * coth(0.5 * b * w) * im_susceptibility(params, w)),
        &points,
        &opts,
    )?;

    let go = params.gamma_o();
    let wd = params.omega_d();
    let c = coth(0.5 * b * w_max);
    let q_tail = c * h * go * wd * wd / (4.0 * PI * m * w_max.powi(4));
    let p_tail = c * m * h * go * wd * wd / (2.0 * PI * w_max * w_max);
    let estimate = (q_tail / q_int.value).max(p_tail / p_int.value);
    if !(estimate <= spec.tolerance) {
        return Err(Error::Quadrature {
            estimate,
            tolerance: spec.tolerance,
        });
    }
    GaussianMoments::new(q_int.value, p_int.value, params.hbar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drude::{decompose, moments, uncoupled_moments};

    #[test]
    fn poles_match_decomposition() {
        // (ω_d - iω)/χ(ω) vanishes at ω = -i{Omega, z1, z2}
        for &g in &[0.5, 4.0, 10.0] {
            let p = ModelParams::reduced(g, 1.0);
            let d = decompose(&p).unwrap();
            for r in d.rates {
                let w = -Complex64::i() * r;
                let inv = (p.omega_d() - Complex64::i() * w) * inverse_susceptibility(&p, w);
                assert!(inv.norm() < 1e-10, "g={g} r={r} {inv}");
            }
            let w = 0.7;
            assert!((susceptibility(&p, Complex64::new(w, 0.0)).im - im_susceptibility(&p, w)).abs() < 1e-14);
        }
    }

    #[test]
    fn narrow_lorentzian_limit() {
        let p = ModelParams::reduced(1e-6, 1.0);
        let f = fdt_quadrature_moments(&p, None, &FdtSpec { tolerance: 1e-6 }).unwrap();
        let u = uncoupled_moments(1.0, 1.0, 1.0, 1.0);
        assert!((f.q2 / u.q2 - 1.0).abs() < 1e-3 && (f.p2 / u.p2 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn agrees_with_closed_form() {
        for &(g, t) in &[(10.0, 0.5), (0.5, 0.05), (1.5, 2.0)] {
            let p = ModelParams::reduced(g, t);
            let f = fdt_quadrature_moments(&p, None, &FdtSpec::default()).unwrap();
            let c = moments(&p).unwrap();
            assert!((f.q2 / c.q2 - 1.0).abs() < 1e-6, "{f:?} {c:?}");
            assert!((f.p2 / c.p2 - 1.0).abs() < 1e-6, "{f:?} {c:?}");
        }
    }

    #[test]
    fn short_cutoff_is_reported() {
        let p = ModelParams::reduced(10.0, 0.5);
        let spec = FdtSpec { tolerance: 1e-6 };
        let c = moments(&p).unwrap();
        // cutoff where the tail sits at half the tolerance
        let wd = p.omega_d();
        let w = (p.gamma_o() * wd * wd / (2.0 * PI * 0.5e-6 * c.p2)).sqrt();
        assert!(fdt_quadrature_moments(&p, Some(w), &spec).is_ok());
        assert!(matches!(fdt_quadrature_moments(&p, Some(0.5 * w), &spec), Err(Error::Quadrature { .. })));
    }
}
