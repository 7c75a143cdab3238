//! Closed forms of the primitive generators: the eight chain measures, the
//! `K_t` power family, the exponential divergence, and the `B` measures.
//!
//! `sqrt(x) - 1` is always computed as `(x-1)/(sqrt(x)+1)` so fourth- and
//! sixth-order zeros at `x = 1` keep full relative accuracy.

use crate::measures::BaseId;

#[inline]
pub(crate) fn sqrt_m1(x: f64) -> f64 {
    (x - 1.0) / (x.sqrt() + 1.0)
}

pub(crate) fn base_f(id: BaseId, x: f64) -> f64 {
    let u = x.sqrt();
    match id {
        BaseId::Delta => (x - 1.0) * (x - 1.0) / (x + 1.0),
        BaseId::Hellinger => {
            let s = sqrt_m1(x);
            0.5 * s * s
        }
        BaseId::Psi => (x - 1.0) * (x - 1.0) * (x + 1.0) / x,
        BaseId::K0 => (x - 1.0) * (x - 1.0) / u,
        BaseId::F => {
            let d = (x - 1.0) * (x + 1.0);
            d * d / (2.0 * x * u)
        }
        // atanh/ln1p forms keep relative accuracy through the zero at x = 1,
        // where the plain logarithms round absolutely and poison composed
        // difference generators; atanh degrades as v -> +-1, so extreme x
        // keeps the plain forms. Algebraically identical to (x-1) ln x,
        // (x/2) ln x - ((x+1)/2) ln((x+1)/2), ((x+1)/2) ln((x+1)/(2 sqrt x)).
        BaseId::J => {
            let v = (x - 1.0) / (x + 1.0);
            if v.abs() <= 0.5 {
                2.0 * (x - 1.0) * v.atanh()
            } else {
                (x - 1.0) * x.ln()
            }
        }
        BaseId::I => {
            let v = (x - 1.0) / (x + 1.0);
            if v.abs() <= 0.5 {
                0.25 * (x + 1.0) * ((-v * v).ln_1p() + 2.0 * v * v.atanh())
            } else {
                0.5 * x * x.ln() - 0.5 * (x + 1.0) * (0.5 * (x + 1.0)).ln()
            }
        }
        BaseId::T => {
            let s = sqrt_m1(x);
            0.5 * (x + 1.0) * (s * s / (2.0 * u)).ln_1p()
        }
    }
}

pub(crate) fn base_f2(id: BaseId, x: f64) -> f64 {
    match id {
        BaseId::Delta => {
            let s = x + 1.0;
            8.0 / (s * s * s)
        }
        BaseId::Hellinger => 0.25 / (x * x.sqrt()),
        BaseId::Psi => 2.0 * (x * x * x + 1.0) / (x * x * x),
        BaseId::K0 => (3.0 * x * x + 2.0 * x + 3.0) / (4.0 * x * x * x.sqrt()),
        BaseId::F => {
            let x2 = x * x;
            (15.0 * x2 * x2 + 2.0 * x2 + 15.0) / (8.0 * x2 * x * x.sqrt())
        }
        BaseId::J => (x + 1.0) / (x * x),
        BaseId::I => 0.5 / (x * (x + 1.0)),
        BaseId::T => (x * x + 1.0) / (4.0 * x * x * (x + 1.0)),
    }
}

/// `K_t` generator: `(x-1)^{2(t+1)} / x^{(2t+1)/2}`.
pub(crate) fn kt_f(t: u32, x: f64) -> f64 {
    let a = 2 * (t + 1);
    let b = -(f64::from(2 * t + 1)) / 2.0;
    (x - 1.0).powi(a as i32) * x.powf(b)
}

/// Exact second derivative of the `K_t` generator: with `u = x-1`,
/// `a = 2(t+1)`, `b = -(2t+1)/2`,
/// `f'' = u^{a-2} x^{b-2} [a(a-1)x^2 + 2ab*u*x + b(b-1)u^2]`.
pub(crate) fn kt_f2(t: u32, x: f64) -> f64 {
    let a = f64::from(2 * (t + 1));
    let b = -(f64::from(2 * t + 1)) / 2.0;
    let u = x - 1.0;
    let bracket = a * (a - 1.0) * x * x + 2.0 * a * b * u * x + b * (b - 1.0) * u * u;
    u.powi(2 * t as i32) * x.powf(b - 2.0) * bracket
}

/// Exponential divergence generator: `((x-1)^2/sqrt(x)) * exp((x-1)^2/x)`.
pub(crate) fn expk_f(x: f64) -> f64 {
    let d = (x - 1.0) * (x - 1.0);
    d / x.sqrt() * (d / x).exp()
}

/// Second derivative of the exponential generator. With `v = (x-1)^2/sqrt(x)`
/// and `w = (x-1)^2/x`, `f'' = e^w (v'' + 2 v' w' + v (w'' + w'^2))`; every
/// summand is nonnegative on both sides of `x = 1` (`v'` and `w'` share sign).
pub(crate) fn expk_f2(x: f64) -> f64 {
    let xs = x.sqrt();
    let v = (x - 1.0) * (x - 1.0) / xs;
    let vp = (x - 1.0) * (3.0 * x + 1.0) / (2.0 * x * xs);
    let vpp = (3.0 * x * x + 2.0 * x + 3.0) / (4.0 * x * x * xs);
    let w = (x - 1.0) * (x - 1.0) / x;
    let wp = (x * x - 1.0) / (x * x);
    let wpp = 2.0 / (x * x * x);
    w.exp() * (vpp + 2.0 * vp * wp + v * (wpp + wp * wp))
}

/// `B_i` generator values, `i = 1..=6`.
pub(crate) fn b_f(i: u8, x: f64) -> f64 {
    let u = x.sqrt();
    let s = sqrt_m1(x);
    let d = x - 1.0;
    match i {
        1 => d.powi(4) / (x * u),
        2 => s.powi(4) / (x + 1.0),
        3 => s.powi(4) / u,
        4 => d * d * s * s / ((x + 1.0) * u),
        5 => d * d * s * s / x,
        6 => d.powi(4) / (x * (x + 1.0)),
        _ => unreachable!("B index out of range"),
    }
}

/// `B_i` second derivatives, wired through the difference-generator identities
/// `B1 = 32 D_{f,k0}`, `B2 = 4 D_{h,delta}`, `B3 = 8 D_{k0,h}`,
/// `B4 = 8 D_{k0,delta}`, `B5 = 16 D_{psi,k0}`, `B6 = 16 D_{psi,delta}`.
pub(crate) fn b_f2(i: u8, x: f64) -> f64 {
    use super::tables::diff_f2;
    use BaseId::*;
    match i {
        1 => 32.0 * diff_f2(F, K0).eval(x),
        2 => 4.0 * diff_f2(Hellinger, Delta).eval(x),
        3 => 8.0 * diff_f2(K0, Hellinger).eval(x),
        4 => 8.0 * diff_f2(K0, Delta).eval(x),
        5 => 16.0 * diff_f2(Psi, K0).eval(x),
        6 => 16.0 * diff_f2(Psi, Delta).eval(x),
        _ => unreachable!("B index out of range"),
    }
}
