//! The Hausdorff operator H_{φ,a}, its adjoint, and the closed forms of the catalog operators.

use std::sync::Arc;

use statrs::function::gamma::gamma;

use crate::analysis::{validate_scaling, DecayClass, KernelSpec, QuadratureConfig, ScalingSpec, TestFunction};
use crate::catalog;
use crate::error::{ErrSlot, HausError, Result};
use crate::quadrature::{integrate, integrate_kernel_side, integrate_range, QuadResult};

/// The pair (φ, a) defining Hf(x) = ∫ φ(t)|a(t)| f(a(t)x) dt.
#[derive(Debug, Clone)]
pub struct HausdorffOperatorSpec {
    pub kernel: KernelSpec,
    pub scaling: ScalingSpec,
    pub name: String,
}

impl HausdorffOperatorSpec {
    pub fn new(kernel: KernelSpec, scaling: ScalingSpec, name: impl Into<String>) -> Result<Self> {
        let report = validate_scaling(&scaling);
        if let Some((kind, t)) = report.failure {
            return Err(HausError::InvalidInput(format!("scaling {} fails {kind:?} at t = {t}", scaling.label)));
        }
        Ok(HausdorffOperatorSpec { kernel, scaling, name: name.into() })
    }

    /// Kernel support pieces on t > 0 with the sign of the original branch.
    pub(crate) fn branches(&self) -> Vec<(f64, (f64, f64))> {
        let (pos, neg) = self.kernel.positive_parts();
        let mut out = Vec::new();
        if let Some(r) = pos {
            out.push((1.0, r));
        }
        if let Some(r) = neg {
            out.push((-1.0, r));
        }
        out
    }

    /// φ evaluated on a branch: φ(t) for sign = 1, φ(−t) for sign = −1, with t > 0.
    #[inline]
    pub(crate) fn phi(&self, sign: f64, t: f64) -> f64 {
        self.kernel.eval(sign * t)
    }

    /// Points t > 0 where target/a(t) or target·a(t) crosses a break point of f,
    /// plus the kernel's own break points.
    pub(crate) fn t_breaks(&self, ratios: impl Iterator<Item = f64>) -> Vec<f64> {
        let mut out: Vec<f64> = self.kernel.breakpoints.iter().map(|t| t.abs()).collect();
        for u in ratios {
            if u > 0.0 && u.is_finite() {
                let t = self.scaling.inv(u);
                if t.is_finite() && t > 0.0 {
                    out.push(t);
                }
            }
        }
        out
    }

    /// Points where H*f may fail to be smooth, given f's break points.
    pub(crate) fn adjoint_breaks(&self, f: &TestFunction) -> Vec<f64> {
        let mut ends: Vec<f64> = self.kernel.breakpoints.iter().map(|t| t.abs()).collect();
        let (lo, hi) = self.kernel.support;
        for t in [lo.abs(), hi.abs()] {
            if t > 0.0 && t.is_finite() {
                ends.push(t);
            }
        }
        let mut out = vec![0.0];
        for b in &f.breakpoints {
            for &t in &ends {
                let a = self.scaling.eval(t);
                out.push(b * a);
                out.push(-b * a);
            }
        }
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// Points where Hf may fail to be smooth, given f's break points.
    pub(crate) fn forward_breaks(&self, f: &TestFunction) -> Vec<f64> {
        let mut ends: Vec<f64> = self.kernel.breakpoints.iter().map(|t| t.abs()).collect();
        let (lo, hi) = self.kernel.support;
        for t in [lo.abs(), hi.abs()] {
            if t > 0.0 && t.is_finite() {
                ends.push(t);
            }
        }
        let mut out = vec![0.0];
        for b in &f.breakpoints {
            for &t in &ends {
                let a = self.scaling.eval(t);
                out.push(b / a);
                out.push(-b / a);
            }
        }
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// Radius outside which H*f vanishes, when f is compact and the kernel avoids t = 0.
    pub(crate) fn adjoint_support(&self, f: &TestFunction) -> Option<f64> {
        if !f.is_compact() {
            return None;
        }
        let tmin = self.branches().iter().map(|(_, (lo, _))| *lo).fold(f64::INFINITY, f64::min);
        if tmin > 0.0 {
            Some(f.radius * self.scaling.eval(tmin))
        } else {
            None
        }
    }

    /// Radius outside which Hf vanishes, when f is compact and the kernel support is bounded.
    pub(crate) fn forward_support(&self, f: &TestFunction) -> Option<f64> {
        if !f.is_compact() {
            return None;
        }
        let tmax = self.branches().iter().map(|(_, (_, hi))| *hi).fold(0.0, f64::max);
        if tmax.is_finite() {
            Some(f.radius / self.scaling.eval(tmax))
        } else {
            None
        }
    }
}

fn check_kernel_decay(op: &HausdorffOperatorSpec) -> Result<()> {
    let (lo, hi) = op.kernel.support;
    if (!lo.is_finite() || !hi.is_finite()) && op.kernel.decay == DecayClass::None {
        return Err(HausError::TailNotIntegrable(format!("kernel {} has unbounded support and no decay", op.kernel.label)));
    }
    Ok(())
}

/// (Hf)(x) with its error estimate.
pub fn hausdorff_apply_detailed(
    op: &HausdorffOperatorSpec,
    f: &TestFunction,
    x: f64,
    q: &QuadratureConfig,
) -> Result<QuadResult> {
    check_kernel_decay(op)?;
    let a = &op.scaling;
    let mut acc = QuadResult::ZERO;
    for (sign, (lo, hi)) in op.branches() {
        let mut lo = lo;
        if f.is_compact() && x != 0.0 {
            // |a(t) x| ≤ R  ⇔  t ≥ inv(R/|x|)
            lo = lo.max(a.inv(f.radius / x.abs()));
        }
        if !(lo < hi) {
            continue;
        }
        // The radius crossing starts the decay of a non-compact f; without it the
        // plateau of ~log(1/|x|) octaves before it looks divergent.
        let breaks = op.t_breaks(f.breakpoints.iter().map(|b| sign * b / x).chain([f.radius / x.abs()]));
        let r = integrate_kernel_side(
            |t| {
                let at = a.eval(t);
                let v = f.eval(sign * at * x);
                if v == 0.0 {
                    0.0
                } else {
                    op.phi(sign, t) * at * v
                }
            },
            lo,
            hi,
            &breaks,
            q,
        )
        .map_err(|e| annotate(e, &op.name, "Hf", x))?;
        acc = acc.add(r);
    }
    Ok(acc)
}

/// (Hf)(x) = ∫ φ(t)|a(t)| f(a(t)x) dt.
pub fn hausdorff_apply(op: &HausdorffOperatorSpec, f: &TestFunction, x: f64, q: &QuadratureConfig) -> Result<f64> {
    hausdorff_apply_detailed(op, f, x, q).map(|r| r.value)
}

/// (H*f)(x) with its error estimate.
pub fn adjoint_apply_detailed(
    op: &HausdorffOperatorSpec,
    f: &TestFunction,
    x: f64,
    q: &QuadratureConfig,
) -> Result<QuadResult> {
    check_kernel_decay(op)?;
    let a = &op.scaling;
    let mut acc = QuadResult::ZERO;
    for (sign, (lo, hi)) in op.branches() {
        let mut hi = hi;
        if f.is_compact() && x != 0.0 {
            // |x / a(t)| ≤ R  ⇔  t ≤ inv(|x|/R)
            hi = hi.min(a.inv(x.abs() / f.radius));
        }
        if !(lo < hi) {
            continue;
        }
        let breaks = op.t_breaks(f.breakpoints.iter().map(|b| sign * x / b).chain([x.abs() / f.radius]));
        let r = integrate_kernel_side(
            |t| {
                let v = f.eval(sign * x / a.eval(t));
                if v == 0.0 {
                    0.0
                } else {
                    op.phi(sign, t) * v
                }
            },
            lo,
            hi,
            &breaks,
            q,
        )
        .map_err(|e| annotate(e, &op.name, "H*f", x))?;
        acc = acc.add(r);
    }
    Ok(acc)
}

/// (H*f)(x) = ∫ φ(t) f(x/a(t)) dt.
pub fn adjoint_apply(op: &HausdorffOperatorSpec, f: &TestFunction, x: f64, q: &QuadratureConfig) -> Result<f64> {
    adjoint_apply_detailed(op, f, x, q).map(|r| r.value)
}

fn annotate(e: HausError, op: &str, what: &str, x: f64) -> HausError {
    match e {
        HausError::DivergentIntegral(m) => HausError::DivergentIntegral(format!("{op}: {what} at x = {x}: {m}")),
        other => other,
    }
}

fn limit_at_zero(f: &TestFunction, factor: f64) -> HausError {
    let f0 = f.eval(0.0);
    let continuous = [1e-9, -1e-9].iter().all(|&h| (f.eval(h) - f0).abs() <= 1e-6 * (1.0 + f0.abs()));
    HausError::ZeroArgument { limit: continuous.then_some(f0 * factor) }
}

/// C*f(x) = (1/x)∫_0^x f.
pub fn cesaro_closed_form(f: &TestFunction, x: f64, q: &QuadratureConfig) -> Result<f64> {
    if x == 0.0 {
        return Err(limit_at_zero(f, 1.0));
    }
    Ok(integrate(|t| f.eval(t), 0.0, x, &f.breakpoints, q).value / x)
}

/// B*f(x) = ∫_1^∞ f(xt)/t dt, which is ∫_x^∞ f(t)/t dt for x > 0.
pub fn bellman_closed_form(f: &TestFunction, x: f64, q: &QuadratureConfig) -> Result<f64> {
    if x == 0.0 {
        return Err(HausError::ZeroArgument { limit: None });
    }
    let s = x.signum();
    let start = x.abs();
    let g = |u: f64| f.eval(s * u) / u;
    let bp: Vec<f64> = f.breakpoints.iter().map(|b| s * b).collect();
    if f.is_compact() {
        if start >= f.radius {
            return Ok(0.0);
        }
        return Ok(integrate(g, start, f.radius, &bp, q).value);
    }
    integrate_range(g, start, f64::INFINITY, &bp, q)
        .map(|r| r.value)
        .map_err(|e| HausError::TailNotIntegrable(format!("f(t)/t on ({x}, inf): {e}")))
}

/// ∫_0^1 f(tx)(1 − t)^α dt, evaluated as (1/x)∫_0^x f(u)(1 − u/x)^α du.
pub fn riemann_liouville_closed_form(f: &TestFunction, alpha: f64, x: f64, q: &QuadratureConfig) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(HausError::InvalidAlpha(alpha));
    }
    if x == 0.0 {
        return Err(limit_at_zero(f, 1.0 / (alpha + 1.0)));
    }
    let v = integrate(|u| f.eval(u) * (1.0 - u / x).max(0.0).powf(alpha), 0.0, x, &f.breakpoints, q).value;
    Ok(v / x)
}

/// The fractional integral with weight (x − t)^α / Γ(α) over (0, x), and the
/// rescaled value Γ(α)·x^(−α−1)·𝓘^α f(x), which equals the closed form above.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalDiagnostic {
    pub fractional_integral: f64,
    pub rescaled: f64,
}

pub fn riemann_liouville_diagnostic(
    f: &TestFunction,
    alpha: f64,
    x: f64,
    q: &QuadratureConfig,
) -> Result<FractionalDiagnostic> {
    if !(alpha > 0.0) {
        return Err(HausError::InvalidAlpha(alpha));
    }
    if x == 0.0 {
        return Err(HausError::ZeroArgument { limit: Some(0.0) });
    }
    let g = gamma(alpha);
    let i = integrate(|t| f.eval(t) * (x - t).abs().powf(alpha), 0.0, x, &f.breakpoints, q).value / g;
    // u = tx keeps orientation, so the 1/x factor carries the sign for x < 0.
    let rescaled = g * i * x.abs().powf(-alpha) / x;
    Ok(FractionalDiagnostic { fractional_integral: i, rescaled })
}

/// |⟨Hf, g⟩ − ⟨f, H*g⟩|
pub fn duality_gap(op: &HausdorffOperatorSpec, f: &TestFunction, g: &TestFunction, q: &QuadratureConfig) -> Result<f64> {
    let inner = QuadratureConfig { abs_tol: q.abs_tol * 1e-3, rel_tol: q.rel_tol * 1e-3, ..*q };
    let slot = ErrSlot::default();
    let guard = |r: Result<f64>| slot.ok(r);
    let mut bg = g.breakpoints.clone();
    bg.push(0.0);
    let lhs = integrate(
        |x| {
            let gx = g.eval(x);
            if gx == 0.0 {
                0.0
            } else {
                gx * guard(hausdorff_apply(op, f, x, &inner))
            }
        },
        -g.radius,
        g.radius,
        &bg,
        q,
    );
    let mut bf = f.breakpoints.clone();
    bf.push(0.0);
    let rhs = integrate(
        |x| {
            let fx = f.eval(x);
            if fx == 0.0 {
                0.0
            } else {
                fx * guard(adjoint_apply(op, g, x, &inner))
            }
        },
        -f.radius,
        f.radius,
        &bf,
        q,
    );
    slot.finish((lhs.value - rhs.value).abs())
}

/// The classical operator ∫ φ(t)/|t| f(x/t) dt, realised with a(t) = 1/t.
pub fn classical_operator(kernel_phi: KernelSpec) -> HausdorffOperatorSpec {
    let name = format!("classical[{}]", kernel_phi.label);
    HausdorffOperatorSpec::new(kernel_phi, ScalingSpec::reciprocal(), name).expect("1/t is a valid scaling")
}

pub type ClosedForm = Arc<dyn Fn(&TestFunction, f64, &QuadratureConfig) -> Result<f64> + Send + Sync>;

/// An operator with an optional closed form for its adjoint.
#[derive(Clone)]
pub struct OperatorCatalogEntry {
    pub spec: HausdorffOperatorSpec,
    pub closed_form_adjoint: Option<ClosedForm>,
}

/// Catalog entry by name ("cesaro", "bellman", "rl").
pub fn catalog_entry(name: &str, alpha: f64) -> Result<OperatorCatalogEntry> {
    let spec = catalog::operator_by_name(name, alpha)?;
    let cf: ClosedForm = match name {
        "cesaro" => Arc::new(cesaro_closed_form),
        "bellman" => Arc::new(bellman_closed_form),
        _ => Arc::new(move |f, x, q| riemann_liouville_closed_form(f, alpha, x, q)),
    };
    Ok(OperatorCatalogEntry { spec, closed_form_adjoint: Some(cf) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{bellman, cesaro, constant, gaussian, indicator, linear, ramp01, riemann_liouville, tent, zero};
    use std::f64::consts::LN_2;

    fn q() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn forward_cesaro_values() {
        let c = cesaro();
        let v = hausdorff_apply(&c, &indicator(1.0, 2.0), 1.0, &q()).unwrap();
        assert!((v - LN_2).abs() < 1e-8, "{v}");
        assert_eq!(hausdorff_apply(&c, &zero(), 0.7, &q()).unwrap(), 0.0);
        let err = hausdorff_apply(&c, &constant(1.0), 0.5, &q()).unwrap_err();
        assert!(matches!(err, HausError::DivergentIntegral(_)), "{err:?}");
    }

    #[test]
    fn adjoint_examples() {
        let c = cesaro();
        let v = adjoint_apply(&c, &constant(1.0), 3.0, &q()).unwrap();
        assert!((v - 1.0).abs() < 1e-8, "{v}");
        let v = adjoint_apply(&c, &ramp01(), 1.0, &q()).unwrap();
        assert!((v - 0.5).abs() < 1e-8);
        // ∫_{0.5}^{1} dt/t
        let v = adjoint_apply(&bellman(), &indicator(0.0, 1.0), 0.5, &q()).unwrap();
        assert!((v - LN_2).abs() < 1e-7, "{v}");
    }

    #[test]
    fn closed_forms() {
        let q = q();
        assert!((cesaro_closed_form(&constant(1.0), -2.5, &q).unwrap() - 1.0).abs() < 1e-12);
        assert!((cesaro_closed_form(&indicator(0.0, 1.0), 2.0, &q).unwrap() - 0.5).abs() < 1e-10);
        assert!((cesaro_closed_form(&linear(), 3.0, &q).unwrap() - 1.5).abs() < 1e-10);
        assert_eq!(cesaro_closed_form(&tent(), 0.0, &q), Err(HausError::ZeroArgument { limit: Some(1.0) }));
        assert_eq!(cesaro_closed_form(&indicator(0.0, 1.0), 0.0, &q), Err(HausError::ZeroArgument { limit: None }));

        assert!((bellman_closed_form(&indicator(1.0, 2.0), 1.0, &q).unwrap() - LN_2).abs() < 1e-10);
        assert_eq!(bellman_closed_form(&zero(), 1.0, &q).unwrap(), 0.0);
        let v = bellman_closed_form(&indicator(0.0, 1.0), 0.25, &q).unwrap();
        assert!((v - 4f64.ln()).abs() < 1e-10);

        for &a in &[0.5, 1.0, 2.5] {
            let v = riemann_liouville_closed_form(&constant(1.0), a, 0.8, &q).unwrap();
            assert!((v - 1.0 / (a + 1.0)).abs() < 1e-9);
        }
        let v = riemann_liouville_closed_form(&linear(), 1.0, 1.0, &q).unwrap();
        assert!((v - 1.0 / 6.0).abs() < 1e-10);
        assert_eq!(riemann_liouville_closed_form(&tent(), 0.0, 1.0, &q), Err(HausError::InvalidAlpha(0.0)));
    }

    #[test]
    fn fractional_diagnostic_matches_closed_form() {
        let q = q();
        let g = gaussian();
        for &a in &[0.5, 1.0, 2.0] {
            for &x in &[-1.3, 0.4, 2.0] {
                let d = riemann_liouville_diagnostic(&g, a, x, &q).unwrap();
                let c = riemann_liouville_closed_form(&g, a, x, &q).unwrap();
                assert!((d.rescaled - c).abs() < 1e-8, "{a} {x}: {} vs {c}", d.rescaled);
            }
        }
    }

    #[test]
    fn classical_constructor_reproduces_catalog() {
        let k = KernelSpec::new("chi", (0.0, 1.0), DecayClass::Compact, Some(1.0), |_| 1.0).unwrap();
        let op = classical_operator(k);
        let f = tent();
        for &x in &[-0.7, 0.3, 1.9] {
            let a = adjoint_apply(&op, &f, x, &q()).unwrap();
            let b = adjoint_apply(&cesaro(), &f, x, &q()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn catalog_entries_agree_with_closed_forms() {
        let q = q();
        let f = gaussian();
        for name in ["cesaro", "bellman", "rl"] {
            let e = catalog_entry(name, 1.0).unwrap();
            let cf = e.closed_form_adjoint.unwrap();
            for &x in &[0.1, 0.9, 3.0, 10.0] {
                let a = adjoint_apply(&e.spec, &f, x, &q).unwrap();
                let b = cf(&f, x, &q).unwrap();
                assert!((a - b).abs() < 1e-6, "{name} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn duality_on_rl() {
        let op = riemann_liouville(1.0).unwrap();
        let gap = duality_gap(&op, &tent(), &tent(), &q()).unwrap();
        assert!(gap < 1e-6, "{gap}");
    }
}
