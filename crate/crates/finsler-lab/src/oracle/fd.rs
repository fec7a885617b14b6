//! Central finite differences with a single Richardson extrapolation.
//!
//! These are the only derivative approximations the oracles use, so their
//! error model is uniform: O(h^4) for first and pure second derivatives,
//! O(h^4) for mixed ones.

use crate::tol::FD_STEP;

/// First derivative of a scalar function of one variable.
pub fn d1(f: impl Fn(f64) -> f64, t0: f64, h: f64) -> f64 {
    let central = |h: f64| (f(t0 + h) - f(t0 - h)) / (2.0 * h);
    (4.0 * central(h / 2.0) - central(h)) / 3.0
}

/// Second derivative of a scalar function of one variable.
pub fn d2(f: impl Fn(f64) -> f64, t0: f64, h: f64) -> f64 {
    let central = |h: f64| (f(t0 + h) - 2.0 * f(t0) + f(t0 - h)) / (h * h);
    (4.0 * central(h / 2.0) - central(h)) / 3.0
}

/// Mixed second derivative d^2 f / (ds dt) at (s0, t0).
pub fn d2_mixed(f: impl Fn(f64, f64) -> f64, s0: f64, t0: f64, h: f64) -> f64 {
    let central = |h: f64| {
        (f(s0 + h, t0 + h) - f(s0 + h, t0 - h) - f(s0 - h, t0 + h) + f(s0 - h, t0 - h))
            / (4.0 * h * h)
    };
    (4.0 * central(h / 2.0) - central(h)) / 3.0
}

/// Partial derivative of `f(v)` in coordinate `i`, default step.
pub fn partial(f: impl Fn(&[f64]) -> f64, v: &[f64], i: usize) -> f64 {
    partial_h(f, v, i, FD_STEP)
}

pub fn partial_h(f: impl Fn(&[f64]) -> f64, v: &[f64], i: usize, h: f64) -> f64 {
    let eval = |t: f64| {
        let mut u = v.to_vec();
        u[i] = t;
        f(&u)
    };
    d1(eval, v[i], h)
}

/// Pure second partial in coordinate `i`.
pub fn partial2(f: impl Fn(&[f64]) -> f64, v: &[f64], i: usize) -> f64 {
    let eval = |t: f64| {
        let mut u = v.to_vec();
        u[i] = t;
        f(&u)
    };
    d2(eval, v[i], FD_STEP)
}

/// Mixed second partial in coordinates `i`, `j` (i != j handled, i == j
/// falls back to the pure stencil).
pub fn partial2_mixed(f: impl Fn(&[f64]) -> f64, v: &[f64], i: usize, j: usize) -> f64 {
    if i == j {
        return partial2(f, v, i);
    }
    let eval = |s: f64, t: f64| {
        let mut u = v.to_vec();
        u[i] = s;
        u[j] = t;
        f(&u)
    };
    d2_mixed(eval, v[i], v[j], FD_STEP)
}
