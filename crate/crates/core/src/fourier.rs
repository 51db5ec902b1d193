//! Fourier transforms and the truncated approximants (H_N f̂)ˇ → H*f and (H*_N f̂)ˇ → Hf.
//!
//! Three ways to evaluate the same number are provided:
//! - `Substituted`: (1/π)∫ φ(t) G(N|a(t)|, x/a(t)) dt with G(ω, c) = ∫ f(c − v) sin(ωv)/v dv;
//! - `DirectSpectral`: (1/π)∫_0^N Re[Hf̂(u) e^{iux}] du;
//! - `Convolution`: (1/π)∫ H*f(x − v) sin(Nv)/v dv, the Dirichlet smoothing of the target.
//!
//! All three carry the 1/π factor.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::analysis::{GridSpec, LebesgueExponent, QuadratureConfig, TestFunction};
use crate::error::{ErrSlot, HausError, Result};
use crate::operators::{adjoint_apply, hausdorff_apply, HausdorffOperatorSpec};
use crate::quadrature::{filon, integrate_kernel_side, sinc_integral_with, SincHints, SincResult};

/// Which formula produced an approximant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Substituted,
    DirectSpectral,
    Convolution,
}

/// Which operator the approximant converges to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// (H_N f̂)ˇ → H*f
    Adjoint,
    /// (H*_N f̂)ˇ → Hf
    Forward,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PointDiagnostics {
    /// Quadrature error estimate of the value.
    pub error: f64,
    /// Largest accelerated-tail remainder among the inner sinc integrals.
    pub tail_error: f64,
    /// Largest point where the explicit part of an inner sinc integral stopped.
    pub truncation: f64,
}

#[derive(Debug, Clone)]
pub struct ApproximantResult {
    pub x_grid: GridSpec,
    pub values: Vec<f64>,
    pub n: f64,
    pub representation: Representation,
    pub diagnostics: Vec<PointDiagnostics>,
}

/// f̂(y) = ∫ f(s) e^{−isy} ds.
pub fn fourier_transform(f: &TestFunction, y: f64, q: &QuadratureConfig) -> Result<Complex64> {
    if let Some(ft) = &f.analytic_ft {
        return Ok(ft(y));
    }
    fourier_transform_numeric(f, y, q).map(|(v, _)| v)
}

/// Quadrature value of f̂(y) and its error estimate, ignoring any analytic transform.
pub fn fourier_transform_numeric(f: &TestFunction, y: f64, q: &QuadratureConfig) -> Result<(Complex64, f64)> {
    if !f.lp.contains(LebesgueExponent::Finite(1.0)) {
        return Err(HausError::TailNotIntegrable(format!("{} is not declared in L^1", f.label)));
    }
    let tail = if f.is_compact() {
        0.0
    } else {
        match f.tail_decay {
            Some(d) if d.exponent > 1.0 => 2.0 * d.coeff * f.radius.powf(1.0 - d.exponent) / (d.exponent - 1.0),
            _ => return Err(HausError::TailNotIntegrable(format!("{}: no integrable tail", f.label))),
        }
    };
    let r = f.radius;
    let res = filon(&|s| f.eval(s), -r, r, -y, &f.breakpoints, q);
    Ok((res.value, res.error + tail))
}

/// G(ω, c) = ∫ f(c − v) sin(ωv)/v dv.
fn shifted_sinc(f: &TestFunction, omega: f64, c: f64, q: &QuadratureConfig) -> Result<SincResult> {
    let hints = SincHints {
        breaks: f.breakpoints.iter().map(|b| c - b).collect(),
        support: f.is_compact().then_some(c.abs() + f.radius),
    };
    sinc_integral_with(|v| f.eval(c - v), omega, &hints, q)
}

fn inner_config(q: &QuadratureConfig) -> QuadratureConfig {
    QuadratureConfig { abs_tol: q.abs_tol * 0.1, rel_tol: q.rel_tol * 0.1, ..*q }
}

fn kernel_scale(op: &HausdorffOperatorSpec) -> f64 {
    op.kernel.total_mass.map(f64::abs).unwrap_or(1.0).max(1.0)
}

/// Substituted formula at one point, for either target.
fn substituted_point(
    op: &HausdorffOperatorSpec,
    f: &TestFunction,
    n: f64,
    x: f64,
    target: Target,
    q: &QuadratureConfig,
) -> Result<(f64, PointDiagnostics)> {
    let a = &op.scaling;
    let iq = inner_config(q);
    let slot = ErrSlot::default();
    let diag = std::cell::Cell::new(PointDiagnostics::default());
    let mut total = 0.0;
    let mut err = 0.0;
    for (sign, (lo, hi)) in op.branches() {
        let ratios: Vec<f64> = match target {
            Target::Adjoint => f.breakpoints.iter().map(|b| sign * x / b).collect(),
            Target::Forward => f.breakpoints.iter().map(|b| sign * b / x).collect(),
        };
        let breaks = op.t_breaks(ratios.into_iter());
        let r = integrate_kernel_side(
            |t| {
                if slot.is_set() {
                    return 0.0;
                }
                let at = a.eval(t);
                let (omega, c, weight) = match target {
                    Target::Adjoint => (n * at, sign * x / at, 1.0),
                    Target::Forward => (n / at, sign * at * x, at),
                };
                let phi = op.phi(sign, t);
                if phi == 0.0 {
                    return 0.0;
                }
                let g = shifted_sinc(f, omega, c, &iq);
                if let Ok(g) = &g {
                    let mut d = diag.get();
                    d.error = d.error.max(g.error);
                    d.tail_error = d.tail_error.max(g.tail_error);
                    d.truncation = d.truncation.max(g.truncation);
                    diag.set(d);
                }
                phi * weight * slot.ok(g.map(|g| g.value))
            },
            lo,
            hi,
            &breaks,
            q,
        );
        match r {
            Ok(r) => {
                total += r.value;
                err += r.error;
            }
            Err(e) => {
                slot.ok(Err(e));
            }
        }
    }
    let mut d = diag.get();
    d.error = (err + d.error * kernel_scale(op)) / PI;
    slot.finish((total / PI, d))
}

/// Convolution formula at one point: (1/π)∫ g(x − v) sin(Nv)/v dv for the target g.
fn convolution_point(
    op: &HausdorffOperatorSpec,
    f: &TestFunction,
    n: f64,
    x: f64,
    target: Target,
    q: &QuadratureConfig,
) -> Result<(f64, PointDiagnostics)> {
    let iq = inner_config(q);
    let (breaks, support) = match target {
        Target::Adjoint => (op.adjoint_breaks(f), op.adjoint_support(f)),
        Target::Forward => (op.forward_breaks(f), op.forward_support(f)),
    };
    let hints = SincHints { breaks: breaks.iter().map(|b| x - b).collect(), support: support.map(|r| x.abs() + r) };
    let slot = ErrSlot::default();
    let res = sinc_integral_with(
        |v| {
            if slot.is_set() {
                return 0.0;
            }
            let z = x - v;
            slot.ok(match target {
                Target::Adjoint => adjoint_apply(op, f, z, &iq),
                Target::Forward => hausdorff_apply(op, f, z, &iq),
            })
        },
        n,
        &hints,
        q,
    );
    let res = slot.finish(res)??;
    let d = PointDiagnostics { error: res.error / PI, tail_error: res.tail_error / PI, truncation: res.truncation };
    Ok((res.value / PI, d))
}

/// Hf̂(u) = ∫ φ(t)|a(t)| f̂(a(t)u) dt, integrated in y = a(t)u.
pub fn hausdorff_of_transform(
    op: &HausdorffOperatorSpec,
    f: &TestFunction,
    u: f64,
    q: &QuadratureConfig,
) -> Result<Complex64> {
    if u == 0.0 {
        return Err(HausError::ZeroArgument { limit: None });
    }
    let a = &op.scaling;
    let us = u.abs();
    let mut acc = Complex64::new(0.0, 0.0);
    for (sign, (lo, hi)) in op.branches() {
        // y runs over (a(hi)|u|, a(lo)|u|); the argument of f̂ is sign·sign(u)·y.
        let ylo = if hi.is_finite() { a.eval(hi) * us } else { 0.0 };
        let yhi = if lo > 0.0 { a.eval(lo) * us } else { f64::INFINITY };
        let s = sign * u.signum();
        let weight = |y: f64| {
            let w = y / us;
            let t = a.inv(w);
            op.phi(sign, t) * w * a.inv_derivative(w).abs() / us
        };
        let breaks: Vec<f64> = op.kernel.breakpoints.iter().map(|t| a.eval(t.abs()) * us).collect();
        let slot = ErrSlot::default();
        let ft = |y: f64| slot.ok(fourier_transform(f, s * y, q).map(|c| c.re));
        let re = integrate_kernel_side(|y| weight(y) * ft(y), ylo, yhi, &breaks, q)?;
        let slot_im = ErrSlot::default();
        let ft_im = |y: f64| slot_im.ok(fourier_transform(f, s * y, q).map(|c| c.im));
        let im = integrate_kernel_side(|y| weight(y) * ft_im(y), ylo, yhi, &breaks, q)?;
        slot.finish(())?;
        slot_im.finish(())?;
        acc += Complex64::new(re.value, im.value);
    }
    Ok(acc)
}

/// H*f̂(u) = ∫ φ(t) f̂(u/a(t)) dt, integrated in y = u/a(t).
pub fn adjoint_of_transform(
    op: &HausdorffOperatorSpec,
    f: &TestFunction,
    u: f64,
    q: &QuadratureConfig,
) -> Result<Complex64> {
    if u == 0.0 {
        return Err(HausError::ZeroArgument { limit: None });
    }
    let a = &op.scaling;
    let us = u.abs();
    let mut acc = Complex64::new(0.0, 0.0);
    for (sign, (lo, hi)) in op.branches() {
        // y = |u|/a(t) increases with t.
        let ylo = if lo > 0.0 { us / a.eval(lo) } else { 0.0 };
        let yhi = if hi.is_finite() { us / a.eval(hi) } else { f64::INFINITY };
        let s = sign * u.signum();
        let weight = |y: f64| {
            let w = us / y;
            let t = a.inv(w);
            op.phi(sign, t) * a.inv_derivative(w).abs() * us / (y * y)
        };
        let breaks: Vec<f64> = op.kernel.breakpoints.iter().map(|t| us / a.eval(t.abs())).collect();
        let mut parts = [0.0; 2];
        for (k, part) in parts.iter_mut().enumerate() {
            let slot = ErrSlot::default();
            let g = |y: f64| {
                slot.ok(fourier_transform(f, s * y, q).map(|c| if k == 0 { c.re } else { c.im }))
            };
            let r = integrate_kernel_side(|y| weight(y) * g(y), ylo, yhi, &breaks, q)?;
            slot.finish(())?;
            *part = r.value;
        }
        acc += Complex64::new(parts[0], parts[1]);
    }
    Ok(acc)
}

/// Direct spectral formula at one point, folded onto u ≥ 0 by conjugate symmetry.
fn direct_point(
    op: &HausdorffOperatorSpec,
    f: &TestFunction,
    n: f64,
    x: f64,
    target: Target,
    q: &QuadratureConfig,
) -> Result<(f64, PointDiagnostics)> {
    if !(n > 0.0) {
        return Ok((0.0, PointDiagnostics::default()));
    }
    let iq = inner_config(q);
    let slot = ErrSlot::default();
    let r = integrate_kernel_side(
        |u| {
            if slot.is_set() {
                return 0.0;
            }
            let h = match target {
                Target::Adjoint => hausdorff_of_transform(op, f, u, &iq),
                Target::Forward => adjoint_of_transform(op, f, u, &iq),
            };
            slot.ok(h.map(|h| (h * Complex64::from_polar(1.0, u * x)).re))
        },
        0.0,
        n,
        &[],
        q,
    );
    let r = slot.finish(r)??;
    Ok((r.value / PI, PointDiagnostics { error: r.error / PI, tail_error: 0.0, truncation: n }))
}

fn point(
    op: &HausdorffOperatorSpec,
    f: &TestFunction,
    n: f64,
    x: f64,
    target: Target,
    rep: Representation,
    q: &QuadratureConfig,
) -> Result<(f64, PointDiagnostics)> {
    match rep {
        Representation::Substituted => substituted_point(op, f, n, x, target, q),
        Representation::DirectSpectral => direct_point(op, f, n, x, target, q),
        Representation::Convolution => convolution_point(op, f, n, x, target, q),
    }
}

fn check_n(n: f64) -> Result<()> {
    if !(n > 0.0 && n.is_finite()) {
        return Err(HausError::InvalidInput(format!("truncation N must be positive, got {n}")));
    }
    Ok(())
}

/// Approximant on a grid, evaluated in parallel; results are in grid order.
pub fn approximant(
    op: &HausdorffOperatorSpec,
    f: &TestFunction,
    n: f64,
    x_grid: &GridSpec,
    target: Target,
    rep: Representation,
    q: &QuadratureConfig,
) -> Result<ApproximantResult> {
    check_n(n)?;
    let out: Vec<(f64, PointDiagnostics)> =
        x_grid.points().par_iter().map(|&x| point(op, f, n, x, target, rep, q)).collect::<Result<_>>()?;
    let (values, diagnostics) = out.into_iter().unzip();
    Ok(ApproximantResult { x_grid: x_grid.clone(), values, n, representation: rep, diagnostics })
}

/// (H_N f̂)ˇ on a grid by the substituted formula.
pub fn truncated_approximant(
    op: &HausdorffOperatorSpec,
    f: &TestFunction,
    n: f64,
    x_grid: &GridSpec,
    q: &QuadratureConfig,
) -> Result<ApproximantResult> {
    approximant(op, f, n, x_grid, Target::Adjoint, Representation::Substituted, q)
}

/// (H_N f̂)ˇ on a grid by the chosen formula.
pub fn truncated_approximant_with(
    op: &HausdorffOperatorSpec,
    f: &TestFunction,
    n: f64,
    x_grid: &GridSpec,
    rep: Representation,
    q: &QuadratureConfig,
) -> Result<ApproximantResult> {
    approximant(op, f, n, x_grid, Target::Adjoint, rep, q)
}

/// (H_N f̂)ˇ(x) = (1/2π)∫_{−N}^{N} Hf̂(u) e^{iux} du.
pub fn truncated_approximant_direct(
    op: &HausdorffOperatorSpec,
    f: &TestFunction,
    n: f64,
    x: f64,
    q: &QuadratureConfig,
) -> Result<f64> {
    if n <= 0.0 {
        return Ok(0.0);
    }
    direct_point(op, f, n, x, Target::Adjoint, q).map(|(v, _)| v)
}

/// (H*_N f̂)ˇ on a grid by the substituted formula; it converges to Hf.
pub fn adjoint_variant_approximant(
    op: &HausdorffOperatorSpec,
    f: &TestFunction,
    n: f64,
    x_grid: &GridSpec,
    q: &QuadratureConfig,
) -> Result<ApproximantResult> {
    approximant(op, f, n, x_grid, Target::Forward, Representation::Substituted, q)
}

pub fn adjoint_variant_approximant_with(
    op: &HausdorffOperatorSpec,
    f: &TestFunction,
    n: f64,
    x_grid: &GridSpec,
    rep: Representation,
    q: &QuadratureConfig,
) -> Result<ApproximantResult> {
    approximant(op, f, n, x_grid, Target::Forward, rep, q)
}

fn check_unit_mass(op: &HausdorffOperatorSpec, q: &QuadratureConfig) -> Result<()> {
    let m = match op.kernel.total_mass {
        Some(m) => m,
        None => op.kernel.mass(q).unwrap_or(f64::NAN),
    };
    if !((m - 1.0).abs() <= 1e-10) {
        return Err(HausError::KernelMassNotOne(m));
    }
    Ok(())
}

/// F_N(y) = (H_N[e^{iy·} f̂])ˇ(0), the approximant of τ_y f evaluated at 0.
pub fn function_recovery(
    op: &HausdorffOperatorSpec,
    f: &TestFunction,
    n: f64,
    y_grid: &GridSpec,
    q: &QuadratureConfig,
) -> Result<ApproximantResult> {
    function_recovery_with(op, f, n, y_grid, Representation::Convolution, q)
}

pub fn function_recovery_with(
    op: &HausdorffOperatorSpec,
    f: &TestFunction,
    n: f64,
    y_grid: &GridSpec,
    rep: Representation,
    q: &QuadratureConfig,
) -> Result<ApproximantResult> {
    check_n(n)?;
    check_unit_mass(op, q)?;
    let out: Vec<(f64, PointDiagnostics)> = y_grid
        .points()
        .par_iter()
        .map(|&y| point(op, &f.shifted(y), n, 0.0, Target::Adjoint, rep, q))
        .collect::<Result<_>>()?;
    let (values, diagnostics) = out.into_iter().unzip();
    Ok(ApproximantResult { x_grid: y_grid.clone(), values, n, representation: rep, diagnostics })
}
