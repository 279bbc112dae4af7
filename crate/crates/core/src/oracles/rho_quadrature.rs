use dashu_base::SquareRoot;
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::drude::GaussianMoments;
use crate::error::{Error, Result};
use crate::quadrature::gauss_hermite;

type F = FBig<HalfEven, 2>;

const PRECISION: usize = 256;
pub const MAX_INDEX: usize = 40;

fn big(x: f64) -> F {
    F::try_from(x).expect("finite").with_precision(PRECISION).value()
}

fn small(x: &F) -> f64 {
    x.to_f64().value()
}

/// Orthonormal Hermite recurrence coefficients sqrt(2/(k+1)), sqrt(k/(k+1)).
fn recurrence(n_max: usize) -> Vec<(F, F)> {
    (0..=n_max)
        .map(|k| {
            let kp = big((k + 1) as f64);
            ((big(2.0) / &kp).sqrt(), (big(k as f64) / kp).sqrt())
        })
        .collect()
}

fn hermite_all(n_max: usize, x: &F, coef: &[(F, F)]) -> Vec<F> {
    let mut h = Vec::with_capacity(n_max + 2);
    h.push(big(1.0));
    if n_max >= 1 {
        h.push(&coef[0].0 * x);
    }
    for k in 1..n_max {
        let next = &coef[k].0 * x * &h[k] - &coef[k].1 * &h[k - 1];
        h.push(next);
    }
    h
}

/// K-point Gauss–Hermite rule, nodes polished to full precision, weights summing to 1.
fn rule(k: usize, coef: &[(F, F)]) -> Vec<(F, F)> {
    let (nodes, _) = gauss_hermite(k);
    let two_k = big(2.0 * k as f64).sqrt();
    let kf = big(k as f64);
    nodes
        .iter()
        .map(|&x0| {
            let mut x = big(x0);
            for _ in 0..6 {
                let h = hermite_all(k, &x, coef);
                x = x - &h[k] / (&two_k * &h[k - 1]);
            }
            let h = hermite_all(k, &x, coef);
            let w = big(1.0) / (&kf * &h[k - 1] * &h[k - 1]);
            (x, w)
        })
        .collect()
}

/// Σ over the K×K rule of w w ĥ_n(X) ĥ_m(X') for all n ≥ m ≤ n_max of equal parity.
fn block_sum(n_max: usize, k: usize, su: &F, sw: &F) -> Vec<Vec<F>> {
    let coef = recurrence(n_max.max(k) + 1);
    let nodes = rule(k, &coef);
    let rsq2 = big(0.5).sqrt();
    let partial: Vec<Vec<Vec<F>>> = nodes
        .par_iter()
        .map(|(x, wx)| {
            let mut acc: Vec<Vec<F>> = (0..=n_max).map(|n| vec![F::ZERO; n + 1]).collect();
            let a = x * su;
            for (y, wy) in &nodes {
                let b = y * sw;
                let hp = hermite_all(n_max, &((&a + &b) * &rsq2), &coef);
                let hm = hermite_all(n_max, &((&a - &b) * &rsq2), &coef);
                let w = wx * wy;
                for n in 0..=n_max {
                    let wn = &w * &hp[n];
                    for m in (n % 2..=n).step_by(2) {
                        acc[n][m] += &wn * &hm[m];
                    }
                }
            }
            acc
        })
        .collect();
    let mut total: Vec<Vec<F>> = (0..=n_max).map(|n| vec![F::ZERO; n + 1]).collect();
    for p in partial {
        for (t, row) in total.iter_mut().zip(p) {
            for (a, b) in t.iter_mut().zip(row) {
                *a += b;
            }
        }
    }
    total
}

/// Number-basis block ρ_nm, n, m ≤ n_max, by double Gauss–Hermite quadrature of
/// the position kernel in 256-bit arithmetic. The rule with n_max + 1 nodes is
/// compared against n_max + 5 nodes.
pub fn rho_block_quadrature(n_max: usize, moments: &GaussianMoments, mass: f64, omega0: f64, hbar: f64) -> Result<DMatrix<f64>> {
    if n_max > MAX_INDEX {
        return Err(Error::Domain(format!("n_max = {n_max} > {MAX_INDEX}")));
    }
    let c2 = big(mass) * big(omega0) / big(hbar);
    let q2 = big(moments.q2);
    let p2 = big(moments.p2);
    let half = big(0.5);
    let alpha_u = &half + big(1.0) / (big(4.0) * &c2 * &q2);
    let alpha_w = &half + &p2 / (big(hbar) * big(hbar) * &c2);
    let su = (big(1.0) / &alpha_u).sqrt();
    let sw = (big(1.0) / &alpha_w).sqrt();
    let pref = big(1.0) / ((&c2 * big(2.0) * &q2).sqrt() * (&alpha_u * &alpha_w).sqrt());

    let k = n_max + 1;
    let coarse = block_sum(n_max, k, &su, &sw);
    let fine = block_sum(n_max, k + 4, &su, &sw);
    let scale = small(&pref);
    let mut out = DMatrix::zeros(n_max + 1, n_max + 1);
    for n in 0..=n_max {
        for m in (n % 2..=n).step_by(2) {
            let v = small(&(&pref * &fine[n][m]));
            let d = small(&(&pref * (&fine[n][m] - &coarse[n][m])));
            if !(d.abs() <= 1e-12 * v.abs() + 1e-60 * scale) {
                return Err(Error::Quadrature {
                    estimate: (d / v).abs(),
                    tolerance: 1e-12,
                });
            }
            out[(n, m)] = v;
            out[(m, n)] = v;
        }
    }
    Ok(out)
}

pub fn rho_element_quadrature(n: usize, m: usize, moments: &GaussianMoments, mass: f64, omega0: f64, hbar: f64) -> Result<f64> {
    if (n + m) % 2 == 1 {
        return Ok(0.0);
    }
    Ok(rho_block_quadrature(n.max(m), moments, mass, omega0, hbar)?[(n, m)])
}
