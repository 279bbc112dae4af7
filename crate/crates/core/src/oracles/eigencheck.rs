use std::f64::consts::PI;

use crate::drude::GaussianMoments;
use crate::effective::{eigenfunction, xi_of, EigenAnsatz};
use crate::error::{Error, Result};
use crate::quadrature::gauss_hermite;
use crate::specfun::hermite_orthonormal;

/// sup over a q-grid of |∫dq' ⟨q|ρ|q'⟩ φ_n(q') - p_n φ_n(q)| with φ_n built from
/// `ansatz.c_tilde`. The q'-integral is done exactly by Gauss–Hermite after
/// completing the square.
pub fn eigencheck_quadrature(n: usize, moments: &GaussianMoments, ansatz: &EigenAnsatz, hbar: f64) -> Result<f64> {
    if n > 20 {
        return Err(Error::Domain(format!("n = {n} > 20")));
    }
    let c = ansatz.c_tilde;
    let norm = 1.0 / (2.0 * PI * moments.q2).sqrt();
    // kernel = norm exp(-a q² - a q'² + 2 b q q')
    let a = 1.0 / (8.0 * moments.q2) + moments.p2 / (2.0 * hbar * hbar);
    let b = 0.5 * (moments.p2 / (hbar * hbar) - 1.0 / (4.0 * moments.q2));
    let big_a = a + 0.5 * c * c;
    let (t, w) = gauss_hermite(n / 2 + 2);
    let pn = (1.0 - xi_of(moments.v)) * xi_of(moments.v).powi(n as i32);
    let half = (2.0 * n as f64 + 1.0).sqrt() + 6.0;
    let grid = 400;
    let mut sup: f64 = 0.0;
    for i in 0..=grid {
        let q = (-half + 2.0 * half * i as f64 / grid as f64) / c;
        let mu = b * q / big_a;
        let s: f64 = t
            .iter()
            .zip(&w)
            .map(|(ti, wi)| wi * hermite_orthonormal(n, c * (mu + ti / big_a.sqrt()))[n])
            .sum();
        let lhs = norm * (c / PI.sqrt()).sqrt() * ((-a + b * b / big_a) * q * q).exp() * (PI / big_a).sqrt() * s;
        sup = sup.max((lhs - pn * eigenfunction(n, c, q)).abs());
    }
    Ok(sup)
}
