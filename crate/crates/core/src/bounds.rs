//! Right-hand sides of the pointwise and normwise error estimates.
//!
//! Normwise statements have the shape `normalizer · ‖H*f − (H_N f̂)ˇ‖ ≤ term1 + term2`
//! with normalizer 1/2 for 1 < p < ∞, 1 for p = 1 and π for p = ∞.

use std::f64::consts::PI;

use crate::analysis::{LebesgueExponent, QuadratureConfig, ScalingSpec, TestFunction};
use crate::error::{ErrSlot, HausError, Result};
use crate::operators::HausdorffOperatorSpec;
use crate::quadrature::{integrate, integrate_kernel_side};

/// A bound term: a number, or a certified divergence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundValue {
    Finite(f64),
    Divergent,
}

impl BoundValue {
    pub fn value(self) -> Option<f64> {
        match self {
            BoundValue::Finite(v) => Some(v),
            BoundValue::Divergent => None,
        }
    }

    pub fn is_divergent(self) -> bool {
        self == BoundValue::Divergent
    }

    /// Divergent counts as +∞.
    pub fn as_f64(self) -> f64 {
        self.value().unwrap_or(f64::INFINITY)
    }

    fn add(self, o: BoundValue) -> BoundValue {
        match (self, o) {
            (BoundValue::Finite(a), BoundValue::Finite(b)) => BoundValue::Finite(a + b),
            _ => BoundValue::Divergent,
        }
    }

    fn from_result(r: Result<f64>) -> Result<BoundValue> {
        match r {
            Ok(v) if v.is_finite() => Ok(BoundValue::Finite(v)),
            Ok(_) | Err(HausError::DivergentIntegral(_)) | Err(HausError::TailNotIntegrable(_)) => {
                Ok(BoundValue::Divergent)
            }
            Err(e) => Err(e),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub term1: BoundValue,
    pub term2: BoundValue,
    pub total: BoundValue,
    /// Factor multiplying the error norm on the left-hand side.
    pub normalizer: f64,
    pub n: f64,
    pub p: LebesgueExponent,
    /// Cap applied to the modulus inside the integrals, if any.
    pub cap: Option<f64>,
}

impl BoundReport {
    /// Bound on the error norm itself: total / normalizer.
    pub fn error_bound(&self) -> BoundValue {
        match self.total {
            BoundValue::Finite(v) => BoundValue::Finite(v / self.normalizer),
            BoundValue::Divergent => BoundValue::Divergent,
        }
    }
}

/// T(s) = |a⁻¹(1/|s|)|, so that the tail set is {|t| ≥ T(s)}.
pub fn tail_set_lower_limit(a: &ScalingSpec, s: f64) -> Result<f64> {
    if s == 0.0 || !s.is_finite() {
        return Err(HausError::OutOfRange(format!("tail set needs a finite nonzero s, got {s}")));
    }
    let u = 1.0 / s.abs();
    let t = a.inv(u).abs();
    if !t.is_finite() || t <= 0.0 || (a.eval(t) - u).abs() > 1e-8 * (1.0 + u) {
        return Err(HausError::OutOfRange(format!("1/|s| = {u} is not attained by |a| on (0, inf)")));
    }
    let b = bisect_abs_inverse(a, u)
        .ok_or_else(|| HausError::OutOfRange(format!("1/|s| = {u} is not bracketed by |a| on (0, inf)")))?;
    if (b - t).abs() > 1e-8 * t.max(1e-300) {
        return Err(HausError::OutOfRange(format!("inverse map disagrees with bisection at u = {u}: {t} vs {b}")));
    }
    Ok(t)
}

/// Solves |a(t)| = u on (0, ∞) by bisection in log t (|a| is decreasing).
fn bisect_abs_inverse(a: &ScalingSpec, u: f64) -> Option<f64> {
    let (mut lo, mut hi) = (1.0f64, 1.0f64);
    let mut k = 0;
    while a.eval(lo).abs() < u {
        lo *= 0.5;
        k += 1;
        if k > 2000 || lo == 0.0 {
            return None;
        }
    }
    k = 0;
    while a.eval(hi).abs() > u {
        hi *= 2.0;
        k += 1;
        if k > 2000 || !hi.is_finite() {
            return None;
        }
    }
    for _ in 0..200 {
        let m = (lo * hi).sqrt();
        if a.eval(m).abs() > u {
            lo = m;
        } else {
            hi = m;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Some((lo * hi).sqrt())
}

fn exponent_weight(p: LebesgueExponent) -> f64 {
    match p {
        LebesgueExponent::Infinity => 0.0,
        LebesgueExponent::Finite(v) => 1.0 / v,
    }
}

/// term1 = 2∫|φ(t)||a(t)|^{1/p} ω(1/(|a(t)|N)) dt, term2 = ∫_ℝ ω(|s|/N)/|s| ∫_{|t|≥T(s)} |φ||a|^{1/p} dt ds.
fn two_terms(
    op: &HausdorffOperatorSpec,
    modulus: &(dyn Fn(f64) -> f64 + Sync),
    n: f64,
    p: LebesgueExponent,
    cap: Option<f64>,
    s_max: Option<f64>,
    t_max: Option<f64>,
    q: &QuadratureConfig,
) -> Result<(BoundValue, BoundValue)> {
    if !(n > 0.0) {
        return Err(HausError::InvalidInput(format!("N must be positive, got {n}")));
    }
    let w = exponent_weight(p);
    let a = &op.scaling;
    let om = |d: f64| {
        let v = modulus(d);
        match cap {
            Some(c) => v.min(c),
            None => v,
        }
    };
    let branches = op.branches();
    let clip = |hi: f64| t_max.map_or(hi, |m| hi.min(m));

    let mut t1 = BoundValue::Finite(0.0);
    for &(sign, (lo, hi)) in &branches {
        let hi = clip(hi);
        if !(lo < hi) {
            continue;
        }
        let r = integrate_kernel_side(
            |t| {
                let phi = op.phi(sign, t).abs();
                if phi == 0.0 {
                    return 0.0;
                }
                let at = a.eval(t);
                let m = om(1.0 / (at * n));
                if m == 0.0 {
                    0.0
                } else {
                    2.0 * phi * at.powf(w) * m
                }
            },
            lo,
            hi,
            &op.kernel.breakpoints,
            q,
        );
        t1 = t1.add(BoundValue::from_result(r.map(|r| r.value))?);
    }

    // Inner tail-set integral K(s).
    let tail_mass = |s: f64| -> Result<f64> {
        let big_t = tail_set_lower_limit(a, s)?;
        let mut acc = 0.0;
        for &(sign, (lo, hi)) in &branches {
            let lo = lo.max(big_t);
            let hi = clip(hi);
            if !(lo < hi) {
                continue;
            }
            let r = integrate_kernel_side(
                |t| op.phi(sign, t).abs() * a.eval(t).powf(w),
                lo,
                hi,
                &op.kernel.breakpoints,
                q,
            )?;
            acc += r.value;
        }
        Ok(acc)
    };
    // s-values where T(s) crosses a kernel break or support end.
    let mut s_breaks = Vec::new();
    for &(_, (lo, hi)) in &branches {
        for t in [lo, hi] {
            if t > 0.0 && t.is_finite() {
                s_breaks.push(1.0 / a.eval(t));
            }
        }
    }
    for &t in &op.kernel.breakpoints {
        if t != 0.0 {
            s_breaks.push(1.0 / a.eval(t.abs()));
        }
    }
    let slot = ErrSlot::default();
    let integrand = |s: f64| {
        if slot.is_set() {
            return 0.0;
        }
        let m = om(s / n);
        if m == 0.0 {
            return 0.0;
        }
        // Symmetric in s: both signs give the same value.
        2.0 * m / s * slot.ok(tail_mass(s))
    };
    let (s_lo, s_hi) = match s_max {
        Some(sm) => (1.0 / sm, sm),
        None => (0.0, f64::INFINITY),
    };
    let r = integrate_kernel_side(integrand, s_lo, s_hi, &s_breaks, q);
    let t2 = match slot.finish(()) {
        Ok(()) => BoundValue::from_result(r.map(|r| r.value))?,
        Err(e) => BoundValue::from_result(Err(e))?,
    };
    Ok((t1, t2))
}

fn report(t1: BoundValue, t2: BoundValue, normalizer: f64, n: f64, p: LebesgueExponent, cap: Option<f64>) -> BoundReport {
    BoundReport { term1: t1, term2: t2, total: t1.add(t2), normalizer, n, p, cap }
}

/// Lp bound for 1 ≤ p < ∞; `cap` bounds the modulus (2‖f‖_p is always valid).
pub fn theorem1_rhs(
    op: &HausdorffOperatorSpec,
    modulus: &(dyn Fn(f64) -> f64 + Sync),
    n: f64,
    p: LebesgueExponent,
    cap: Option<f64>,
    q: &QuadratureConfig,
) -> Result<BoundReport> {
    let pv = match p {
        LebesgueExponent::Finite(v) => v,
        LebesgueExponent::Infinity => {
            return Err(HausError::InvalidInput("the Lp bound needs a finite exponent".into()))
        }
    };
    let (t1, t2) = two_terms(op, modulus, n, p, cap, None, None, q)?;
    Ok(report(t1, t2, if pv == 1.0 { 1.0 } else { 0.5 }, n, p, cap))
}

/// Sup-norm bound.
pub fn theorem2_rhs(
    op: &HausdorffOperatorSpec,
    modulus: &(dyn Fn(f64) -> f64 + Sync),
    n: f64,
    cap: Option<f64>,
    q: &QuadratureConfig,
) -> Result<BoundReport> {
    let p = LebesgueExponent::Infinity;
    let (t1, t2) = two_terms(op, modulus, n, p, cap, None, None, q)?;
    Ok(report(t1, t2, PI, n, p, cap))
}

/// Sup-norm second term restricted to 1/S ≤ |s| ≤ S and |t| ≤ S.
pub fn truncated_tail_term(
    op: &HausdorffOperatorSpec,
    modulus: &(dyn Fn(f64) -> f64 + Sync),
    n: f64,
    s_max: f64,
    q: &QuadratureConfig,
) -> Result<BoundValue> {
    if !(s_max > 1.0) {
        return Err(HausError::InvalidInput(format!("truncation S must exceed 1, got {s_max}")));
    }
    two_terms(op, modulus, n, LebesgueExponent::Infinity, None, Some(s_max), Some(s_max), q).map(|(_, t2)| t2)
}

/// Points s where c − s/N crosses a break of f.
fn s_breaks_for(f: &TestFunction, c: f64, n: f64) -> Vec<f64> {
    f.breakpoints.iter().map(|b| n * (c - b)).collect()
}

/// |f(c − s/N) − f(c)|
fn diff(f: &TestFunction, c: f64, s: f64, n: f64) -> f64 {
    (f.eval(c - s / n) - f.eval(c)).abs()
}

/// Pointwise bound on |H*f(x) − (H_N f̂)ˇ(x)|, already divided by π.
pub fn lemma1_pointwise_rhs(
    op: &HausdorffOperatorSpec,
    f: &TestFunction,
    n: f64,
    x: f64,
    q: &QuadratureConfig,
) -> Result<f64> {
    pointwise_rhs(op, f, n, x, false, q)
}

/// Pointwise bound on |Hf(x) − (H*_N f̂)ˇ(x)|, already divided by π.
pub fn lemma2_pointwise_rhs(
    op: &HausdorffOperatorSpec,
    f: &TestFunction,
    n: f64,
    x: f64,
    q: &QuadratureConfig,
) -> Result<f64> {
    pointwise_rhs(op, f, n, x, true, q)
}

fn pointwise_rhs(
    op: &HausdorffOperatorSpec,
    f: &TestFunction,
    n: f64,
    x: f64,
    forward: bool,
    q: &QuadratureConfig,
) -> Result<f64> {
    if !(n > 0.0) {
        return Err(HausError::InvalidInput(format!("N must be positive, got {n}")));
    }
    let a = &op.scaling;
    let iq = QuadratureConfig { abs_tol: q.abs_tol * 0.1, rel_tol: q.rel_tol * 0.1, ..*q };
    let branches = op.branches();
    // Point at which f is sampled for kernel node t on a branch.
    let centre = |sign: f64, t: f64| if forward { sign * a.eval(t) * x } else { sign * x / a.eval(t) };
    let t_ratios = |sign: f64, shift: f64| -> Vec<f64> {
        f.breakpoints
            .iter()
            .map(|b| if forward { sign * (b + shift) / x } else { sign * x / (b + shift) })
            .collect()
    };

    // First term: inner |s| ≤ 1/|a(t)| (adjoint) or |s| ≤ |a(t)| (forward).
    let mut first = 0.0;
    for &(sign, (lo, hi)) in &branches {
        let r = integrate_kernel_side(
            |t| {
                let phi = op.phi(sign, t).abs();
                if phi == 0.0 {
                    return 0.0;
                }
                let at = a.eval(t);
                let (half, weight) = if forward { (at, phi) } else { (1.0 / at, phi * at) };
                let c = centre(sign, t);
                let inner = integrate(|s| diff(f, c, s, n), -half, half, &s_breaks_for(f, c, n), &iq);
                weight * inner.value
            },
            lo,
            hi,
            &op.t_breaks(t_ratios(sign, 0.0).into_iter()),
            q,
        )?;
        first += r.value;
    }

    // Second term: outer s, inner t over the tail set.
    let slot = ErrSlot::default();
    let inner_t = |s: f64| -> Result<f64> {
        // Adjoint: |t| ≥ |a⁻¹(1/s)|. Forward: |t| ≥ |a⁻¹(s)|.
        let big_t = if forward { tail_set_lower_limit(a, 1.0 / s)? } else { tail_set_lower_limit(a, s)? };
        let mut acc = 0.0;
        for &(sign, (lo, hi)) in &branches {
            let lo = lo.max(big_t);
            if !(lo < hi) {
                continue;
            }
            let mut breaks = op.t_breaks(t_ratios(sign, 0.0).into_iter());
            breaks.extend(op.t_breaks(t_ratios(sign, s / n).into_iter()));
            let r = integrate_kernel_side(
                |t| {
                    let phi = op.phi(sign, t).abs();
                    if phi == 0.0 {
                        return 0.0;
                    }
                    let w = if forward { phi * a.eval(t) } else { phi };
                    w * diff(f, centre(sign, t), s, n)
                },
                lo,
                hi,
                &breaks,
                &iq,
            )?;
            acc += r.value;
        }
        Ok(acc)
    };
    let mut second = 0.0;
    for sigma in [1.0, -1.0] {
        let r = integrate_kernel_side(
            |s| {
                if slot.is_set() {
                    return 0.0;
                }
                slot.ok(inner_t(sigma * s)) / s
            },
            0.0,
            f64::INFINITY,
            &pointwise_s_breaks(op, forward),
            q,
        );
        let r = match r {
            Ok(r) => r,
            Err(e) => {
                slot.ok(Err(e));
                continue;
            }
        };
        second += r.value;
    }
    slot.finish(())?;
    Ok((first + second) / PI)
}

/// s-values where the tail set boundary crosses a kernel support end.
fn pointwise_s_breaks(op: &HausdorffOperatorSpec, forward: bool) -> Vec<f64> {
    let a = &op.scaling;
    let mut out = Vec::new();
    for (_, (lo, hi)) in op.branches() {
        for t in [lo, hi] {
            if t > 0.0 && t.is_finite() {
                let at = a.eval(t);
                out.push(if forward { at } else { 1.0 / at });
            }
        }
    }
    out
}
