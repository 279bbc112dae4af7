//! Adaptive Gauss–Kronrod (7/15) integration and Gauss–Hermite rules.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub epsabs: f64,
    pub epsrel: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            epsabs: 0.0,
            epsrel: 1e-12,
            max_intervals: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive integration over [points[0], points[last]], with every
/// interior point a panel boundary. The integrand is never evaluated at a boundary.
pub fn integrate<F: Fn(f64) -> f64>(f: F, points: &[f64], opts: &QuadOptions) -> Result<Integral> {
    try_integrate(|x| Ok(f(x)), points, opts)
}

/// As [`integrate`] for fallible integrands; the first integrand error aborts.
pub fn try_integrate<F: Fn(f64) -> Result<f64>>(f: F, points: &[f64], opts: &QuadOptions) -> Result<Integral> {
    if points.len() < 2 {
        return Err(Error::Domain("integration needs at least two points".into()));
    }
    let failure = std::cell::RefCell::new(None);
    let g = |x: f64| match f(x) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in points.windows(2) {
        if w[1] == w[0] {
            continue;
        }
        let (value, error) = gk15(&g, w[0], w[1]);
        evaluations += 15;
        heap.push(Panel { a: w[0], b: w[1], value, error });
    }
    loop {
        if let Some(e) = failure.borrow_mut().take() {
            return Err(e);
        }
        let (total, err) = heap.iter().fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
        if !total.is_finite() || !err.is_finite() {
            return Err(Error::NonFinite("quadrature"));
        }
        let tol = opts.epsabs.max(opts.epsrel * total.abs());
        if err <= tol {
            return Ok(Integral { value: total, error: err, evaluations });
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::Quadrature { estimate: err, tolerance: tol });
        }
        let p = heap.pop().expect("non-empty");
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            // panel below floating resolution
            return Err(Error::Quadrature { estimate: err, tolerance: tol });
        }
        let (v1, e1) = gk15(&g, p.a, m);
        let (v2, e2) = gk15(&g, m, p.b);
        evaluations += 30;
        heap.push(Panel { a: p.a, b: m, value: v1, error: e1 });
        heap.push(Panel { a: m, b: p.b, value: v2, error: e2 });
    }
}

/// Gauss–Hermite rule for weight e^{-x²}, with weights normalised to sum 1.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut j = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = (k as f64 / 2.0).sqrt();
        j[(k, k - 1)] = b;
        j[(k - 1, k)] = b;
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    // polish nodes with Newton on the orthonormal recurrence
    for p in pairs.iter_mut() {
        let mut x = p.0;
        for _ in 0..3 {
            let h = crate::specfun::hermite_orthonormal(n, x);
            let d = (2.0 * n as f64).sqrt() * h[n - 1];
            if d != 0.0 {
                x -= h[n] / d;
            }
        }
        let h = crate::specfun::hermite_orthonormal(n, x);
        p.0 = x;
        p.1 = 1.0 / (n as f64 * h[n - 1] * h[n - 1]);
    }
    pairs.into_iter().unzip()
}
