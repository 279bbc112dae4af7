//! Gamma-family functions of complex argument and classical orthogonal
//! polynomials evaluated by three-term recurrence.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const ASYMPTOTIC_RE: f64 = 10.0;

// B_2, B_4, ..., B_20
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

fn check_pole(z: Complex64) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::Pole(z));
    }
    if z.re < -1e7 {
        return Err(Error::Domain(format!("Re z = {} too negative", z.re)));
    }
    Ok(())
}

fn finite(z: Complex64, what: &'static str) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Principal branch of ln Γ(z).
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < ASYMPTOTIC_RE {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for (k, b) in BERNOULLI.iter().enumerate() {
        let k2 = 2.0 * (k as f64 + 1.0);
        series += pow * (b / (k2 * (k2 - 1.0)));
        pow *= inv2;
    }
    let stirling = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series;
    finite(stirling - shift, "log_gamma")
}

/// ψ(z) = d ln Γ(z)/dz.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    if z.re < 0.0 {
        // ψ(z) = ψ(1 - z) - π cot(πz)
        let cot = (z * PI).tan().inv();
        return finite(digamma(1.0 - z)? - cot * PI, "digamma");
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < ASYMPTOTIC_RE {
        shift += w.inv();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv2;
    for (k, b) in BERNOULLI.iter().enumerate() {
        series += pow * (b / (2.0 * (k as f64 + 1.0)));
        pow *= inv2;
    }
    finite(w.ln() - inv * 0.5 - series - shift, "digamma")
}

/// ψ'(z) = d² ln Γ(z)/dz².
pub fn trigamma(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    if z.re < 0.0 {
        // ψ'(z) = π²/sin²(πz) - ψ'(1 - z)
        let s = (z * PI).sin();
        return finite((s * s).inv() * (PI * PI) - trigamma(1.0 - z)?, "trigamma");
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < ASYMPTOTIC_RE {
        shift += (w * w).inv();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv2 * inv;
    for b in BERNOULLI.iter() {
        series += pow * *b;
        pow *= inv2;
    }
    finite(inv + inv2 * 0.5 + series + shift, "trigamma")
}

/// ln |Γ(x)| and the sign of Γ(x) for real x.
pub fn ln_gamma_signed(x: f64) -> Result<(f64, f64)> {
    if x <= 0.0 && x == x.round() {
        return Err(Error::Pole(Complex64::new(x, 0.0)));
    }
    if x > 0.0 {
        return Ok((log_gamma(Complex64::new(x, 0.0))?.re, 1.0));
    }
    // Γ(x)Γ(1-x) = π / sin(πx)
    let s = (PI * x).sin();
    let lg = log_gamma(Complex64::new(1.0 - x, 0.0))?.re;
    Ok((PI.ln() - s.abs().ln() - lg, s.signum()))
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    ln_gamma_signed(x).map(|(v, _)| v).unwrap_or(f64::NAN)
}

/// Physicists' Hermite polynomial H_n(x).
pub fn hermite(n: usize, x: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, 2.0 * x);
    if n == 0 {
        return h0;
    }
    for k in 1..n {
        let h2 = 2.0 * x * h1 - 2.0 * k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// Values ĥ_0..=ĥ_n of the Hermite polynomials orthonormal under e^{-x²}/√π.
pub fn hermite_orthonormal(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n == 0 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * x);
    for k in 1..n {
        let next = (std::f64::consts::SQRT_2 * x * out[k] - (k as f64).sqrt() * out[k - 1])
            / ((k + 1) as f64).sqrt();
        out.push(next);
    }
    out
}

/// Legendre polynomial P_n(z); valid for any real z.
pub fn legendre(n: usize, z: f64) -> f64 {
    legendre_homogeneous(n, z, 1.0)
}

/// y^n P_n(x/y) written in terms of y² only, so that y² may be zero or negative.
pub fn legendre_homogeneous(n: usize, x: f64, y_sq: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return p0;
    }
    for k in 1..n {
        let k = k as f64;
        let p2 = ((2.0 * k + 1.0) * x * p1 - k * y_sq * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

fn check_jacobi(mu: f64, nu: f64) -> Result<()> {
    if mu <= -1.0 || nu <= -1.0 || !mu.is_finite() || !nu.is_finite() {
        return Err(Error::Domain(format!(
            "Jacobi parameters must exceed -1 (mu = {mu}, nu = {nu})"
        )));
    }
    Ok(())
}

/// Jacobi polynomial P_n^{(mu,nu)}(z).
pub fn jacobi(n: usize, mu: f64, nu: f64, z: f64) -> Result<f64> {
    jacobi_homogeneous(n, mu, nu, z, 1.0)
}

/// y^n P_n^{(mu,nu)}(x/y) for real y.
pub fn jacobi_homogeneous(n: usize, mu: f64, nu: f64, x: f64, y: f64) -> Result<f64> {
    check_jacobi(mu, nu)?;
    let (a, b) = (mu, nu);
    let mut p0 = 1.0;
    if n == 0 {
        return Ok(p0);
    }
    let mut p1 = (a + 1.0) * y + 0.5 * (a + b + 2.0) * (x - y);
    for k in 1..n {
        let k = k as f64;
        let s = 2.0 * k + a + b;
        let a1 = 2.0 * (k + 1.0) * (k + a + b + 1.0) * s;
        let a2 = (s + 1.0) * (a * a - b * b);
        let a3 = s * (s + 1.0) * (s + 2.0);
        let a4 = 2.0 * (k + a) * (k + b) * (s + 2.0);
        let p2 = ((a2 * y + a3 * x) * p1 - a4 * y * y * p0) / a1;
        p0 = p1;
        p1 = p2;
    }
    Ok(p1)
}

/// A value stored as mantissa · e^{ln_scale}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub mantissa: f64,
    pub ln_scale: f64,
}

impl Scaled {
    pub fn value(self) -> f64 {
        if self.mantissa == 0.0 {
            0.0
        } else {
            self.mantissa * self.ln_scale.exp()
        }
    }

    /// ln |value|, -inf for zero.
    pub fn ln_abs(self) -> f64 {
        self.mantissa.abs().ln() + self.ln_scale
    }
}

/// y^n P_n^{(a,a)}(x/y) for the symmetric Jacobi family, written in terms of y²
/// and rescaled as it goes so that large n neither overflows nor underflows.
pub fn jacobi_symmetric_homogeneous(n: usize, a: f64, x: f64, y_sq: f64) -> Result<Scaled> {
    check_jacobi(a, a)?;
    let mut p0 = 1.0;
    let mut ln_scale = 0.0;
    if n == 0 {
        return Ok(Scaled {
            mantissa: 1.0,
            ln_scale,
        });
    }
    let mut p1 = (a + 1.0) * x;
    for k in 1..n {
        let k = k as f64;
        let s = 2.0 * k + 2.0 * a;
        let a1 = 2.0 * (k + 1.0) * (k + 2.0 * a + 1.0) * s;
        let a3 = s * (s + 1.0) * (s + 2.0);
        let a4 = 2.0 * (k + a) * (k + a) * (s + 2.0);
        let p2 = (a3 * x * p1 - a4 * y_sq * p0) / a1;
        p0 = p1;
        p1 = p2;
        let m = p1.abs().max(p0.abs());
        if m > 1e100 || (m < 1e-100 && m > 0.0) {
            p0 /= m;
            p1 /= m;
            ln_scale += m.ln();
        }
    }
    if !p1.is_finite() {
        return Err(Error::NonFinite("jacobi_symmetric_homogeneous"));
    }
    Ok(Scaled {
        mantissa: p1,
        ln_scale,
    })
}

/// ₂F₁(-k, -l; c; z) as the terminating finite sum.
pub fn hyp2f1_terminating(k: usize, l: usize, c: f64, z: f64) -> f64 {
    hyp2f1_terminating_homogeneous(k, l, c, 1.0, z)
}

/// Σ_j (-k)_j (-l)_j / ((c)_j j!) · x^{k+l-2j} · (y²)^j, i.e. x^{k+l} ₂F₁(-k,-l;c;y²/x²)
/// extended continuously to x = 0.
pub fn hyp2f1_terminating_homogeneous(k: usize, l: usize, c: f64, x: f64, y_sq: f64) -> f64 {
    let jmax = k.min(l);
    let mut coef = Vec::with_capacity(jmax + 1);
    let mut t = 1.0;
    for j in 0..=jmax {
        coef.push(t);
        let jf = j as f64;
        t *= (jf - k as f64) * (jf - l as f64) / ((c + jf) * (jf + 1.0));
    }
    let mut sum = 0.0;
    for j in (0..=jmax).rev() {
        let px = (k + l - 2 * j) as i32;
        sum += coef[j] * x.powi(px) * y_sq.powi(j as i32);
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, ToPrimitive, Zero};
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    const EULER: f64 = 0.577_215_664_901_532_9;

    // random points on a 2^-10 grid keep the exact rationals small
    fn dyadic(x: f64) -> f64 {
        (x * 1024.0).round() / 1024.0
    }

    fn rat(x: f64) -> BigRational {
        BigRational::from_float(x).unwrap()
    }

    fn rat_frac(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    // binomial(top, k) for rational top
    fn binom(top: &BigRational, k: usize) -> BigRational {
        let mut r = BigRational::one();
        for i in 0..k {
            r = r * (top - BigRational::from_integer(BigInt::from(i))) / BigRational::from_integer(BigInt::from(i + 1));
        }
        r
    }

    fn pow(x: &BigRational, n: usize) -> BigRational {
        let mut r = BigRational::one();
        for _ in 0..n {
            r *= x;
        }
        r
    }

    fn hermite_exact(n: usize, x: f64) -> (f64, f64) {
        let x = rat(x);
        let two_x = &x * BigRational::from_integer(2.into());
        let mut sum = BigRational::zero();
        let mut abs_sum = BigRational::zero();
        let fact = |k: usize| (1..=k).fold(BigRational::one(), |a, i| a * BigRational::from_integer(BigInt::from(i)));
        for m in 0..=n / 2 {
            let t = fact(n) * pow(&two_x, n - 2 * m) / (fact(m) * fact(n - 2 * m));
            abs_sum += if t < BigRational::zero() { -t.clone() } else { t.clone() };
            if m % 2 == 0 {
                sum += t;
            } else {
                sum -= t;
            }
        }
        (sum.to_f64().unwrap(), abs_sum.to_f64().unwrap())
    }

    // binom(n+mu,k) binom(n+nu,n-k) / 2^n for k = 0..=n
    fn jacobi_coefficients(n: usize, mu: &BigRational, nu: &BigRational) -> Vec<BigRational> {
        let nn = BigRational::from_integer(BigInt::from(n));
        let scale = pow(&BigRational::from_integer(2.into()), n);
        (0..=n)
            .map(|k| binom(&(&nn + mu), k) * binom(&(&nn + nu), n - k) / &scale)
            .collect()
    }

    fn jacobi_exact(coef: &[BigRational], z: f64) -> f64 {
        let n = coef.len() - 1;
        let z = rat(z);
        let one = BigRational::one();
        let (zm, zp) = (&z - &one, &z + &one);
        let mut zm_pow = vec![BigRational::one()];
        for i in 0..n {
            let next = &zm_pow[i] * &zm;
            zm_pow.push(next);
        }
        let mut sum = BigRational::zero();
        let mut pp = BigRational::one();
        for (k, c) in coef.iter().enumerate() {
            sum += c * &pp * &zm_pow[n - k];
            pp *= &zp;
        }
        sum.to_f64().unwrap()
    }

    #[test]
    fn log_gamma_examples() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        assert!((log_gamma(c(5.0, 0.0)).unwrap().re - 24f64.ln()).abs() < 1e-14);
        assert!(matches!(log_gamma(c(0.0, 0.0)), Err(Error::Pole(_))));
        assert!(matches!(log_gamma(c(-3.0, 0.0)), Err(Error::Pole(_))));
        // Γ(1/2) = √π
        assert!((log_gamma(c(0.5, 0.0)).unwrap().re - 0.5 * PI.ln()).abs() < 1e-14);
        // Γ(z+1) = zΓ(z) off the real axis
        let z = c(0.3, 2.7);
        let d = log_gamma(z + 1.0).unwrap() - log_gamma(z).unwrap() - z.ln();
        let d = c(d.re, (d.im / (2.0 * PI)).round().mul_add(-2.0 * PI, d.im));
        assert!(d.norm() < 1e-13);
    }

    #[test]
    fn digamma_examples() {
        assert!((digamma(c(1.0, 0.0)).unwrap().re + EULER).abs() < 1e-14);
        assert!((digamma(c(2.0, 0.0)).unwrap().re - (1.0 - EULER)).abs() < 1e-14);
        // series oracle ψ(1) = -γ_E comes from -γ_E = lim (H_n - ln n); check ψ(n+1) = H_n - γ_E
        let h: f64 = (1..=20).map(|k| 1.0 / k as f64).sum();
        assert!((digamma(c(21.0, 0.0)).unwrap().re - (h - EULER)).abs() < 1e-13);
        let z = c(0.5, 0.5);
        let h = 1e-6;
        let fd = (log_gamma(z + h).unwrap() - log_gamma(z - h).unwrap()) / (2.0 * h);
        assert!((digamma(z).unwrap() - fd).norm() < 1e-8);
        assert!(matches!(digamma(c(-2.0, 0.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn digamma_reflection_and_conjugation() {
        for &z in &[c(-2.5, 0.3), c(-0.7, -4.0), c(-12.2, 0.0)] {
            let lhs = digamma(z + 1.0).unwrap() - digamma(z).unwrap();
            assert!((lhs - z.inv()).norm() < 1e-11 * z.inv().norm().max(1.0));
        }
        for &z in &[c(0.2, 1.0), c(3.0, -7.5), c(40.0, 100.0), c(1e-3, 1e3)] {
            assert!((digamma(z.conj()).unwrap() - digamma(z).unwrap().conj()).norm() < 1e-14);
            assert!((trigamma(z.conj()).unwrap() - trigamma(z).unwrap().conj()).norm() < 1e-14);
        }
    }

    #[test]
    fn trigamma_examples() {
        let basel: f64 = (1..2_000_000u64).rev().map(|n| 1.0 / (n as f64 * n as f64)).sum::<f64>() + 1.0 / 2e6;
        let t1 = trigamma(c(1.0, 0.0)).unwrap().re;
        assert!((t1 - PI * PI / 6.0).abs() < 1e-14);
        assert!((t1 - basel).abs() < 1e-12);
        assert!((trigamma(c(2.0, 0.0)).unwrap().re - (PI * PI / 6.0 - 1.0)).abs() < 1e-14);
        let z = c(3.0, 1.0);
        let h = 1e-6;
        let fd = (digamma(z + h).unwrap() - digamma(z - h).unwrap()) / (2.0 * h);
        assert!((trigamma(z).unwrap() - fd).norm() < 1e-8);
        // ψ'(1/2) = π²/2
        assert!((trigamma(c(0.5, 0.0)).unwrap().re - PI * PI / 2.0).abs() < 1e-13);
        let z = c(-1.5, 0.25);
        let lhs = trigamma(z).unwrap() - trigamma(z + 1.0).unwrap();
        assert!((lhs - (z * z).inv()).norm() < 1e-11);
    }

    #[test]
    fn large_imaginary_arguments() {
        // ψ(iy) has Re ψ(iy) = Re ψ(1+iy) and Im ψ(iy) = 1/(2y) + (π/2)coth(πy)
        let y = 37.0;
        let d = digamma(c(0.0, y)).unwrap();
        let want_im = 1.0 / (2.0 * y) + 0.5 * PI / (PI * y).tanh();
        assert!((d.im - want_im).abs() < 1e-13);
        let d = digamma(c(1e6, 3.0)).unwrap();
        assert!((d.re - 1e6f64.ln()).abs() < 1e-5);
    }

    #[test]
    fn signed_real_gamma() {
        let (l, s) = ln_gamma_signed(-0.5).unwrap();
        assert_eq!(s, -1.0);
        assert!((l - (2.0 * PI.sqrt()).ln()).abs() < 1e-14);
        let (l, s) = ln_gamma_signed(-1.5).unwrap();
        assert_eq!(s, 1.0);
        assert!((l - (4.0 * PI.sqrt() / 3.0).ln()).abs() < 1e-14);
        assert!((ln_gamma(171.0) - (1..=170).map(|k| (k as f64).ln()).sum::<f64>()).abs() < 1e-10);
    }

    #[test]
    fn gamma_duplication() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..500 {
            let nu: f64 = rng.gen_range(1e-3..=20.0);
            let lhs = ln_gamma(2.0 * nu);
            let rhs = -0.5 * PI.ln() + (2.0 * nu - 1.0) * 2f64.ln() + ln_gamma(nu) + ln_gamma(nu + 0.5);
            // relative 1e-11 on Γ(2ν) is absolute 1e-11 on its log
            assert!((lhs - rhs).abs() < 1e-11, "nu = {nu}");
        }
    }

    #[test]
    fn polynomial_examples() {
        assert_eq!(hermite(0, 3.3), 1.0);
        assert_eq!(hermite(2, 1.0), 2.0);
        assert_eq!(hermite(3, 0.0), 0.0);
        assert_eq!(legendre(7, 1.0), 1.0);
        assert_eq!(legendre(2, 2.0), 5.5);
        assert_eq!(legendre(1, -0.3), -0.3);
        assert_eq!(jacobi(0, 0.3, 2.0, 9.0).unwrap(), 1.0);
        for &x in &[-1.0, 0.3, 2.5] {
            assert!((jacobi(1, -0.5, 0.0, x).unwrap() - (-0.25 + 0.75 * x)).abs() < 1e-15);
            assert!((jacobi(2, 0.0, 0.0, x).unwrap() - (3.0 * x * x - 1.0) / 2.0).abs() < 1e-14);
        }
        assert!(jacobi(3, -1.0, 0.0, 0.5).is_err());
        assert!(jacobi(3, 0.0, -1.5, 0.5).is_err());
        assert_eq!(hyp2f1_terminating(0, 5, 0.5, 3.0), 1.0);
        for &z in &[-2.0, 0.1, 7.0] {
            assert!((hyp2f1_terminating(1, 1, 0.5, z) - (1.0 + 2.0 * z)).abs() < 1e-14);
        }
    }

    #[test]
    fn hermite_matches_explicit_sum() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for n in 0..=50 {
            for _ in 0..100 {
                let x = dyadic(rng.gen_range(-6.0..6.0));
                let (exact, cond) = hermite_exact(n, x);
                let got = hermite(n, x);
                // relative to the condition scale Σ|terms| (exact cancels near roots)
                assert!((got - exact).abs() <= 1e-10 * cond.max(exact.abs()), "n={n} x={x}");
                if x.abs() > 4.0 * (n as f64).sqrt() + 1.0 {
                    assert!((got - exact).abs() <= 1e-10 * exact.abs());
                }
            }
        }
    }

    #[test]
    fn legendre_and_jacobi_match_explicit_sum() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(12);
        let params = [(0, 1, 0, 1), (-1, 2, 0, 1), (1, 2, 3, 1), (-1, 4, 1, 4), (5, 2, -1, 2)];
        for n in 0..=50 {
            let leg = jacobi_coefficients(n, &BigRational::zero(), &BigRational::zero());
            let jac: Vec<_> = params
                .iter()
                .map(|&(a, b, c, d)| jacobi_coefficients(n, &rat_frac(a, b), &rat_frac(c, d)))
                .collect();
            for i in 0..100 {
                let z = dyadic(rng.gen_range(1.0..4.0));
                let exact = jacobi_exact(&leg, z);
                let got = legendre(n, z);
                assert!((got - exact).abs() <= 1e-10 * exact.abs(), "n={n} z={z}");
                let j = i % params.len();
                let (a, b, c, d) = params[j];
                let exact = jacobi_exact(&jac[j], z);
                let got = jacobi(n, a as f64 / b as f64, c as f64 / d as f64, z).unwrap();
                assert!((got - exact).abs() <= 1e-10 * exact.abs(), "n={n} z={z} params={:?}", params[j]);
            }
        }
    }

    #[test]
    fn jacobi_large_degree_stable() {
        // P_n^{(a,a)}(1) = binom(n+a, n)
        for &a in &[0.0, 0.5, 7.0, 30.0] {
            let n = 250usize;
            let got = jacobi(n, a, a, 1.0).unwrap();
            let want = (ln_gamma(n as f64 + a + 1.0) - ln_gamma(a + 1.0) - ln_gamma(n as f64 + 1.0)).exp();
            assert!((got / want - 1.0).abs() < 1e-11, "a={a}");
            let s = jacobi_symmetric_homogeneous(n, a, 1.0, 1.0).unwrap();
            assert!((s.ln_abs() - want.ln()).abs() < 1e-11);
        }
        let s = jacobi_symmetric_homogeneous(2000, 3.0, 2.0, 1.0).unwrap();
        assert!(s.ln_abs().is_finite() && s.ln_abs() > 700.0);
    }

    #[test]
    fn homogeneous_forms_agree_with_plain() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(0..40usize);
            let a = rng.gen_range(0..10) as f64 * 0.5;
            let x: f64 = rng.gen_range(0.1..2.0);
            let y: f64 = rng.gen_range(0.1..2.0);
            let plain = y.powi(n as i32) * jacobi(n, a, a, x / y).unwrap();
            let h = jacobi_symmetric_homogeneous(n, a, x, y * y).unwrap().value();
            assert!((plain - h).abs() <= 1e-11 * plain.abs().max(1e-300), "n={n}");
            let plain = y.powi(n as i32) * legendre(n, x / y);
            let h = legendre_homogeneous(n, x, y * y);
            assert!((plain - h).abs() <= 1e-11 * plain.abs());
            let h = jacobi_homogeneous(n, a, a + 1.0, x, y).unwrap();
            let plain = y.powi(n as i32) * jacobi(n, a, a + 1.0, x / y).unwrap();
            assert!((plain - h).abs() <= 1e-11 * plain.abs().max(1e-300));
        }
        // x = 0: only the even-parity part survives
        assert_eq!(legendre_homogeneous(3, 0.0, 2.0), 0.0);
        assert!((legendre_homogeneous(2, 0.0, -1.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn jacobi_parity_identities() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        for &nu in &[0.0, 0.25, -0.25, 0.5] {
            for n in 0..=10usize {
                let nf = n as f64;
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let ce = sign * (ln_gamma(2.0 * nf + nu + 1.0) + ln_gamma(nf + 1.0) - ln_gamma(nf + nu + 1.0) - ln_gamma(2.0 * nf + 1.0)).exp();
                let co = sign * (ln_gamma(2.0 * nf + nu + 2.0) + ln_gamma(nf + 1.0) - ln_gamma(nf + nu + 1.0) - ln_gamma(2.0 * nf + 2.0)).exp();
                for _ in 0..50 {
                    let z: f64 = rng.gen_range(-1.0..=1.0);
                    let w = 1.0 - 2.0 * z * z;
                    let lhs = jacobi(2 * n, nu, nu, z).unwrap();
                    let rhs = ce * jacobi(n, -0.5, nu, w).unwrap();
                    assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs(), "even n={n} nu={nu} z={z}");
                    let lhs = jacobi(2 * n + 1, nu, nu, z).unwrap();
                    let rhs = co * z * jacobi(n, 0.5, nu, w).unwrap();
                    assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs(), "odd n={n} nu={nu} z={z}");
                }
            }
        }
    }

    // ₂F₁(-k,-l;c;1/Δ) = Γ(c)Γ(l+1)/Γ(l+c) (-1/Δ)^l y^l P_l^{(c-1, k-l)}(x/y), x = -1-Δ, y = 1-Δ
    fn hyp_via_jacobi(k: usize, l: usize, c: f64, delta: f64) -> f64 {
        let (k, l) = if k >= l { (k, l) } else { (l, k) };
        let lf = l as f64;
        let pref = (ln_gamma(c) + ln_gamma(lf + 1.0) - ln_gamma(lf + c)).exp();
        let p = jacobi_homogeneous(l, c - 1.0, (k - l) as f64, -1.0 - delta, 1.0 - delta).unwrap();
        pref * (-1.0 / delta).powi(l as i32) * p
    }

    #[test]
    fn hypergeometric_jacobi_link() {
        let v = hyp2f1_terminating(2, 2, 0.5, 1.0);
        assert!((v - 35.0 / 3.0).abs() < 1e-13);
        assert!((hyp_via_jacobi(2, 2, 0.5, 1.0) - v).abs() < 1e-12);
        let mut rng = rand::rngs::StdRng::seed_from_u64(9);
        for _ in 0..2000 {
            let k = rng.gen_range(0..25usize);
            let l = rng.gen_range(0..25usize);
            let c = if rng.gen_bool(0.5) { 0.5 } else { 1.5 };
            let delta: f64 = rng.gen_range(0.05..10.0);
            let a = hyp2f1_terminating(k, l, c, 1.0 / delta);
            let b = hyp_via_jacobi(k, l, c, delta);
            assert!((a - b).abs() <= 1e-9 * a.abs(), "k={k} l={l} c={c} delta={delta}: {a} {b}");
        }
        // integer nu: P_n^{(mu,nu)}(z) = binom(n+mu,n)((1+z)/2)^n 2F1(-n,-n-nu;mu+1;(z-1)/(z+1))
        for n in 0..15usize {
            for nu in 0..4usize {
                for &mu in &[-0.5, 0.5] {
                    let z: f64 = 1.7;
                    let nf = n as f64;
                    let binom = (ln_gamma(nf + mu + 1.0) - ln_gamma(mu + 1.0) - ln_gamma(nf + 1.0)).exp();
                    let rhs = binom * ((1.0 + z) / 2.0).powi(n as i32) * hyp2f1_terminating(n, n + nu, mu + 1.0, (z - 1.0) / (z + 1.0));
                    let lhs = jacobi(n, mu, nu as f64, z).unwrap();
                    assert!((lhs - rhs).abs() <= 1e-11 * lhs.abs());
                }
            }
        }
    }

    #[test]
    fn gaussian_hermite_integral() {
        use crate::quadrature::{integrate, QuadOptions};
        let mut rng = rand::rngs::StdRng::seed_from_u64(21);
        for n in 0..=8usize {
            for _ in 0..6 {
                let s: f64 = rng.gen_range(-0.95..0.95);
                let y: f64 = rng.gen_range(-3.0..3.0);
                let f = |t: f64| (-(t - y) * (t - y)).exp() * hermite(n, s * t);
                let opts = QuadOptions { epsabs: 1e-12, epsrel: 1e-13, ..QuadOptions::default() };
                let got = integrate(f, &[y - 14.0, y, y + 14.0], &opts).unwrap().value;
                let r = (1.0 - s * s).sqrt();
                let want = PI.sqrt() * r.powi(n as i32) * hermite(n, s * y / r);
                assert!((got - want).abs() < 1e-8, "n={n} s={s} y={y}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn orthonormal_hermite_matches_physicists() {
        for n in 0..20usize {
            let x = 0.7;
            let h = hermite_orthonormal(n, x);
            let norm = (2f64.powi(n as i32) * (1..=n).map(|k| k as f64).product::<f64>()).sqrt();
            assert!((h[n] - hermite(n, x) / norm).abs() < 1e-12 * (1.0 + h[n].abs()));
        }
    }
}
