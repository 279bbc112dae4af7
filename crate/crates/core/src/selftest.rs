//! Quick oracle-equivalence suite.

use serde::Serialize;

use crate::audit::variation_report;
use crate::densmat::{dimensionless_quantities, matrix_element};
use crate::drude::{dmoments, moments, ModelParams, Variation};
use crate::effective::eigen_solution;
use crate::error::Result;
use crate::oracles::finite_difference::derivative_along;
use crate::oracles::{eigencheck_quadrature, fdt_quadrature_moments, matsubara_moments, rho_block_quadrature, star_bath_moments, FdtSpec};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// worst observed error
    pub error: f64,
    pub tolerance: f64,
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn check(name: &str, tolerance: f64, f: impl FnOnce() -> Result<f64>) -> Check {
    let (error, passed) = match f() {
        Ok(e) => (e, e <= tolerance),
        Err(_) => (f64::NAN, false),
    };
    Check { name: name.to_string(), passed, error, tolerance }
}

const POINTS: [(f64, f64); 3] = [(0.5, 0.5), (4.0, 1.0), (10.0, 0.05)];

fn worst(f: impl Fn(&ModelParams) -> Result<f64>) -> Result<f64> {
    let mut w: f64 = 0.0;
    for (g, t) in POINTS {
        w = w.max(f(&ModelParams::reduced(g, t))?);
    }
    Ok(w)
}

pub fn run() -> Vec<Check> {
    vec![
        check("matsubara moments", 1e-8, || {
            worst(|p| {
                let (a, b) = (moments(p)?, matsubara_moments(p, 2000, 10)?);
                Ok(rel(b.q2, a.q2).max(rel(b.p2, a.p2)))
            })
        }),
        check("fdt moments", 1e-6, || {
            worst(|p| {
                let (a, b) = (moments(p)?, fdt_quadrature_moments(p, None, &FdtSpec::default())?);
                Ok(rel(b.q2, a.q2).max(rel(b.p2, a.p2)))
            })
        }),
        check("star bath moments N=1000", 1e-2, || {
            worst(|p| {
                let (a, b) = (moments(p)?, star_bath_moments(p, 1000, None)?);
                Ok(rel(b.q2, a.q2).max(rel(b.p2, a.p2)))
            })
        }),
        check("moment derivatives", 1e-6, || {
            worst(|p| {
                let mut w: f64 = 0.0;
                for which in [Variation::Damping, Variation::Mass, Variation::Spring] {
                    let a = dmoments(p, which)?;
                    let q = derivative_along(p, which, |x| Ok(moments(x)?.q2))?;
                    let s = derivative_along(p, which, |x| Ok(moments(x)?.p2))?;
                    w = w.max(rel(q.value, a.dq2)).max(rel(s.value, a.dp2));
                }
                Ok(w)
            })
        }),
        check("density matrix quadrature n,m<=8", 1e-8, || {
            worst(|p| {
                let m = moments(p)?;
                let d = dimensionless_quantities(&m, p.mass, p.omega0(), p.hbar)?;
                let b = rho_block_quadrature(8, &m, p.mass, p.omega0(), p.hbar)?;
                let mut w: f64 = 0.0;
                for n in 0..=8 {
                    for k in (n % 2..=n).step_by(2) {
                        w = w.max(rel(b[(n, k)], matrix_element(n, k, &d)?));
                    }
                }
                Ok(w)
            })
        }),
        check("eigenfunction residual n<=5", 1e-8, || {
            worst(|p| {
                let m = moments(p)?;
                let e = eigen_solution(&m, p.hbar)?;
                let mut w: f64 = 0.0;
                for n in 0..=5 {
                    w = w.max(eigencheck_quadrature(n, &m, &e.ansatz, p.hbar)?);
                }
                Ok(w)
            })
        }),
        check("effective Clausius equality", 1e-9, || {
            worst(|p| {
                let mut w: f64 = 0.0;
                for which in [Variation::Damping, Variation::Mass, Variation::Spring] {
                    w = w.max(variation_report(p, which)?.effective_residual);
                }
                Ok(w)
            })
        }),
    ]
}
