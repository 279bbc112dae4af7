use crate::drude::{ModelParams, Variation};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step {
    Absolute(f64),
    /// Step relative to |x|.
    Relative(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivative {
    pub value: f64,
    pub step: f64,
    /// Difference between the plain central estimate and the returned value.
    pub error_estimate: f64,
}

/// Central difference at x, optionally with one Richardson step (h and h/2).
pub fn finite_difference<F: Fn(f64) -> f64>(f: F, x: f64, step: Step, richardson: bool) -> Derivative {
    let h = match step {
        Step::Absolute(h) => h,
        Step::Relative(r) => r * x.abs(),
    };
    let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
    if !richardson {
        return Derivative { value: d1, step: h, error_estimate: f64::NAN };
    }
    let d2 = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h;
    let value = (4.0 * d2 - d1) / 3.0;
    Derivative { value, step: h, error_estimate: (value - d1).abs() }
}

/// Fallible variant; the first error is returned.
pub fn try_finite_difference<F: Fn(f64) -> Result<f64>>(f: F, x: f64, step: Step, richardson: bool) -> Result<Derivative> {
    let err = std::cell::RefCell::new(None);
    let d = finite_difference(
        |y| match f(y) {
            Ok(v) => v,
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        x,
        step,
        richardson,
    );
    match err.into_inner() {
        Some(e) => Err(e),
        None => Ok(d),
    }
}

/// Step for damping derivatives: 1e-5 γ, or 1e-7 absolute for γ < 1e-2.
pub fn damping_step(gamma: f64) -> Step {
    if gamma < 1e-2 {
        Step::Absolute(1e-7)
    } else {
        Step::Relative(1e-5)
    }
}

/// Value of the varied parameter at `params`.
pub fn varied_value(params: &ModelParams, which: Variation) -> f64 {
    match which {
        Variation::Damping => params.gamma,
        Variation::Mass => params.mass,
        Variation::Spring => params.k0(),
    }
}

/// Parameters with the varied quantity set to x. Damping moves at fixed (w0, Omega);
/// mass and spring move at fixed (omega_d, gamma_o) and the other of (M, k0).
pub fn vary(params: &ModelParams, which: Variation, x: f64) -> Result<ModelParams> {
    match which {
        Variation::Damping => Ok(ModelParams { gamma: x, ..*params }),
        Variation::Mass => params.with_physical(x, params.k0()),
        Variation::Spring => params.with_physical(params.mass, x),
    }
}

/// Richardson-extrapolated derivative of g(params) along a variation.
pub fn derivative_along<G: Fn(&ModelParams) -> Result<f64>>(params: &ModelParams, which: Variation, g: G) -> Result<Derivative> {
    let x = varied_value(params, which);
    let step = match which {
        Variation::Damping => damping_step(x),
        _ => Step::Relative(1e-5),
    };
    try_finite_difference(|y| g(&vary(params, which, y)?), x, step, true)
}
