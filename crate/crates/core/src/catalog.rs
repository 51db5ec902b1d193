//! Named test functions and operators used by the studies, the tests and the CLI.

use std::f64::consts::PI;

use num_complex::Complex64;
use statrs::function::erf::erf;

use crate::analysis::{
    DecayClass, KernelSpec, LebesgueExponent, LpMembership, PowerDecay, ScalingSpec, TestFunction,
};
use crate::error::{HausError, Result};
use crate::operators::HausdorffOperatorSpec;

/// (sin z / z)
fn sinc(z: f64) -> f64 {
    if z.abs() < 1e-6 {
        1.0 - z * z / 6.0
    } else {
        z.sin() / z
    }
}

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// ‖f(·+h) − f‖_1 for an even unimodal f equals 2∫_{−h/2}^{h/2} f.
fn unimodal_l1(central_mass: impl Fn(f64) -> f64, h: f64) -> f64 {
    2.0 * central_mass(h.abs() / 2.0)
}

pub fn zero() -> TestFunction {
    TestFunction::compact("zero", 1.0, |_| 0.0).ft(|_| real(0.0)).modulus(|_, _| Some(0.0))
}

/// f ≡ c on ℝ (bounded, not integrable).
pub fn constant(c: f64) -> TestFunction {
    TestFunction::with_tail(format!("const{c}"), 1.0, c.abs(), None, LpMembership::BOUNDED_ONLY, move |_| c)
        .modulus(|_, _| Some(0.0))
}

/// c on [−r, r], 0 outside.
pub fn plateau(c: f64, r: f64) -> TestFunction {
    TestFunction::compact(format!("plateau({c},{r})"), r, move |x| if x.abs() <= r { c } else { 0.0 })
        .breaks(&[-r, r])
        .ft(move |y| real(if y == 0.0 { 2.0 * r * c } else { 2.0 * c * (r * y).sin() / y }))
}

/// Closed indicator of [a, b].
pub fn indicator(a: f64, b: f64) -> TestFunction {
    assert!(a < b);
    let len = b - a;
    TestFunction::compact(format!("indicator[{a},{b}]"), a.abs().max(b.abs()), move |x| {
        if x >= a && x <= b {
            1.0
        } else {
            0.0
        }
    })
    .breaks(&[a, b])
    .ft(move |y| {
        if y == 0.0 {
            real(len)
        } else {
            (Complex64::from_polar(1.0, -a * y) - Complex64::from_polar(1.0, -b * y)) / Complex64::new(0.0, y)
        }
    })
    .modulus(move |d, p| {
        if d <= 0.0 {
            return Some(0.0);
        }
        Some(match p {
            LebesgueExponent::Infinity => 1.0,
            LebesgueExponent::Finite(pv) => (2.0 * d.min(len)).powf(1.0 / pv),
        })
    })
}

/// t·χ_[0,1](t)
pub fn ramp01() -> TestFunction {
    TestFunction::compact("ramp01", 1.0, |x| if (0.0..=1.0).contains(&x) { x } else { 0.0 }).breaks(&[0.0, 1.0])
}

/// f(t) = t (unbounded; only pointwise operations apply).
pub fn linear() -> TestFunction {
    TestFunction::with_tail("linear", 1.0, f64::INFINITY, None, LpMembership::NONE, |x| x)
}

/// Λ(x) = max(0, 1 − |x|).
pub fn tent() -> TestFunction {
    TestFunction::compact("tent", 1.0, |x: f64| (1.0 - x.abs()).max(0.0))
        .breaks(&[-1.0, 0.0, 1.0])
        .ft(|y| real(sinc(y / 2.0).powi(2)))
        .modulus(|d, p| {
            let h = d.max(0.0);
            match p {
                LebesgueExponent::Infinity => Some(h.min(1.0)),
                LebesgueExponent::Finite(pv) if pv == 1.0 => {
                    Some(unimodal_l1(|u| { let u = u.min(1.0); 2.0 * (u - u * u / 2.0) }, h))
                }
                LebesgueExponent::Finite(pv) if pv == 2.0 => {
                    let sq = if h <= 1.0 {
                        2.0 * h * h - h * h * h
                    } else if h <= 2.0 {
                        4.0 / 3.0 - (2.0 - h).powi(3) / 3.0
                    } else {
                        4.0 / 3.0
                    };
                    Some(sq.sqrt())
                }
                _ => None,
            }
        })
}

/// (1 − |x|)_+^α for 0 < α ≤ 1.
pub fn cusp(alpha: f64) -> Result<TestFunction> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(HausError::InvalidAlpha(alpha));
    }
    Ok(TestFunction::compact(format!("cusp{alpha}"), 1.0, move |x: f64| {
        let v = 1.0 - x.abs();
        if v > 0.0 {
            v.powf(alpha)
        } else {
            0.0
        }
    })
    .breaks(&[-1.0, 0.0, 1.0])
    .modulus(move |d, p| {
        let h = d.max(0.0);
        match p {
            LebesgueExponent::Infinity => Some(h.min(1.0).powf(alpha)),
            LebesgueExponent::Finite(pv) if pv == 1.0 => Some(unimodal_l1(
                |u| {
                    let u = u.min(1.0);
                    2.0 * (1.0 - (1.0 - u).powf(alpha + 1.0)) / (alpha + 1.0)
                },
                h,
            )),
            _ => None,
        }
    }))
}

/// e^{−x²/2}
pub fn gaussian() -> TestFunction {
    let r = 9.0;
    TestFunction::with_tail(
        "gaussian",
        r,
        (-r * r / 2.0f64).exp(),
        Some(PowerDecay { coeff: 1e-15, exponent: 2.0 }),
        LpMembership::ALL,
        |x: f64| (-x * x / 2.0).exp(),
    )
    .ft(|y| real((2.0 * PI).sqrt() * (-y * y / 2.0).exp()))
    .modulus(|d, p| {
        let h = d.max(0.0);
        match p {
            LebesgueExponent::Infinity => Some(gaussian_sup_difference(h)),
            LebesgueExponent::Finite(pv) if pv == 1.0 => {
                Some(unimodal_l1(|u| (2.0 * PI).sqrt() * erf(u / 2f64.sqrt()), h))
            }
            LebesgueExponent::Finite(pv) if pv == 2.0 => {
                Some((2.0 * PI.sqrt() * (1.0 - (-h * h / 4.0).exp())).sqrt())
            }
            _ => None,
        }
    })
}

/// sup_x |g(x + h) − g(x)| for the Gaussian g, from the unique critical
/// point of the odd function u ↦ g(u + h/2) − g(u − h/2) on u < 0.
fn gaussian_sup_difference(h: f64) -> f64 {
    if h == 0.0 {
        return 0.0;
    }
    let g = |x: f64| (-x * x / 2.0).exp();
    let dg = |x: f64| -x * (-x * x / 2.0).exp();
    let dd = |u: f64| dg(u + h / 2.0) - dg(u - h / 2.0);
    let (mut lo, mut hi) = (-h / 2.0 - 12.0, 0.0);
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if dd(m) > 0.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    let u = 0.5 * (lo + hi);
    (g(u + h / 2.0) - g(u - h / 2.0)).abs()
}

/// Fejér function F(x) = (1/2π)(sin(x/2)/(x/2))², whose transform is (1 − |y|)_+.
pub fn fejer() -> TestFunction {
    let r = 64.0;
    TestFunction::with_tail(
        "fejer",
        r,
        2.0 / (PI * r * r),
        Some(PowerDecay { coeff: 2.0 / PI, exponent: 2.0 }),
        LpMembership::ALL,
        fejer_kernel,
    )
    .ft(|y| real((1.0 - y.abs()).max(0.0)))
}

/// F(x) = (1 − cos x)/(π x²)
pub fn fejer_kernel(x: f64) -> f64 {
    sinc(x / 2.0).powi(2) / (2.0 * PI)
}

/// The C^∞ transition 0 → 1 on [0, 1].
fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / t).exp();
    let b = (-1.0 / (1.0 - t)).exp();
    a / (a + b)
}

/// χ_[a,b] with both edges smoothed over [edge − eps, edge + eps].
pub fn mollified_indicator(a: f64, b: f64, eps: f64) -> TestFunction {
    assert!(a + eps < b - eps);
    TestFunction::compact(format!("mollified[{a},{b}]"), a.abs().max(b.abs()) + eps, move |x| {
        smooth_step((x - a + eps) / (2.0 * eps)) * smooth_step((b + eps - x) / (2.0 * eps))
    })
    .breaks(&[a - eps, a + eps, b - eps, b + eps])
}

/// C^∞ bump exp(−1/(1 − ((x − c)/w)²)) supported on [c − w, c + w].
pub fn bump(c: f64, w: f64) -> TestFunction {
    TestFunction::compact(format!("bump({c},{w})"), c.abs() + w, move |x| {
        let z = (x - c) / w;
        if z.abs() < 1.0 {
            (-1.0 / (1.0 - z * z)).exp()
        } else {
            0.0
        }
    })
    .breaks(&[c - w, c + w])
}

/// Test functions addressable by name; `alpha` parameterises `cusp`.
pub fn function_by_name(name: &str, alpha: f64) -> Result<TestFunction> {
    Ok(match name {
        "zero" => zero(),
        "const1" | "constant" => constant(1.0),
        "plateau" => plateau(1.0, 1000.0),
        "indicator01" | "indicator" => indicator(0.0, 1.0),
        "indicator12" => indicator(1.0, 2.0),
        "indicator-11" => indicator(-1.0, 1.0),
        "ramp01" => ramp01(),
        "linear" => linear(),
        "tent" => tent(),
        "cusp" => cusp(alpha)?,
        "gaussian" => gaussian(),
        "fejer" => fejer(),
        "mollified12" => mollified_indicator(1.0, 2.0, 0.1),
        "bump" => bump(0.0, 1.0),
        other => return Err(HausError::UnknownClass(other.to_string())),
    })
}

/// Names accepted by [`function_by_name`].
pub const FUNCTION_NAMES: &[&str] = &[
    "zero", "const1", "plateau", "indicator01", "indicator12", "indicator-11", "ramp01", "linear", "tent", "cusp",
    "gaussian", "fejer", "mollified12", "bump",
];

/// Cesàro: φ = χ_(0,1), a(t) = 1/t.
pub fn cesaro() -> HausdorffOperatorSpec {
    let k = KernelSpec::new("chi(0,1)", (0.0, 1.0), DecayClass::Compact, Some(1.0), |_| 1.0).expect("valid kernel");
    HausdorffOperatorSpec::new(k, ScalingSpec::reciprocal(), "cesaro").expect("valid operator")
}

/// Bellman: φ(t) = t⁻¹χ_(1,∞), a(t) = 1/t.
pub fn bellman() -> HausdorffOperatorSpec {
    let k = KernelSpec::new("1/t on (1,inf)", (1.0, f64::INFINITY), DecayClass::Power(1.0), None, |t| 1.0 / t)
        .expect("valid kernel");
    HausdorffOperatorSpec::new(k, ScalingSpec::reciprocal(), "bellman").expect("valid operator")
}

/// Riemann–Liouville: φ(t) = (1 − t)^α χ_(0,1), a(t) = 1/t.
pub fn riemann_liouville(alpha: f64) -> Result<HausdorffOperatorSpec> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(HausError::InvalidAlpha(alpha));
    }
    let k = KernelSpec::new(
        format!("(1-t)^{alpha} on (0,1)"),
        (0.0, 1.0),
        DecayClass::Compact,
        Some(1.0 / (alpha + 1.0)),
        move |t: f64| (1.0 - t).powf(alpha),
    )?;
    HausdorffOperatorSpec::new(k, ScalingSpec::reciprocal(), format!("riemann-liouville({alpha})"))
}

/// Operators addressable by name; `alpha` parameterises Riemann–Liouville.
pub fn operator_by_name(name: &str, alpha: f64) -> Result<HausdorffOperatorSpec> {
    match name {
        "cesaro" => Ok(cesaro()),
        "bellman" => Ok(bellman()),
        "rl" | "riemann-liouville" => riemann_liouville(alpha),
        other => Err(HausError::UnknownClass(other.to_string())),
    }
}
