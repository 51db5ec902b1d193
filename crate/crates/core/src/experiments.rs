//! Convergence studies: error ladders, fitted log-log slopes and the bounds that predict them.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;

use crate::analysis::{lp_norm, GridRole, GridSpec, LebesgueExponent, QuadratureConfig, TestFunction};
use crate::bounds::{theorem1_rhs, theorem2_rhs, truncated_tail_term};
use crate::catalog::{self, fejer_kernel};
use crate::error::{HausError, Result};
use crate::fourier::{approximant, function_recovery_with, Representation, Target};
use crate::moduli::modulus_ladder;
use crate::operators::{adjoint_apply, hausdorff_apply, HausdorffOperatorSpec};
use crate::quadrature::{filon, gauss_legendre, integrate};

/// Errors below this are treated as exact zeros.
pub const NUMERICAL_FLOOR: f64 = 1e-12;

/// Least-squares line through (log N, log error).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn fit_rate(n_ladder: &[f64], errors: &[f64]) -> Result<RateFit> {
    if n_ladder.len() != errors.len() {
        return Err(HausError::InvalidInput("ladder and errors differ in length".into()));
    }
    if n_ladder.len() < 3 {
        return Err(HausError::InvalidInput("a rate fit needs at least 3 points".into()));
    }
    if n_ladder.iter().any(|&n| !(n > 0.0)) {
        return Err(HausError::InvalidInput("ladder values must be positive".into()));
    }
    if errors.iter().any(|&e| !(e > NUMERICAL_FLOOR) || !e.is_finite()) {
        return Err(HausError::DegenerateZeroError);
    }
    let xs: Vec<f64> = n_ladder.iter().map(|n| n.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok(RateFit { slope, intercept, r_squared })
}

#[derive(Debug, Clone)]
pub struct RateReport {
    pub operator_name: String,
    pub f_label: String,
    pub p: LebesgueExponent,
    pub n_ladder: Vec<f64>,
    pub errors: Vec<f64>,
    /// None when the errors sit at the numerical floor.
    pub fit: Option<RateFit>,
    pub predicted_slope: f64,
    /// Bounds on the error norm (already divided by the normalizer); +∞ marks divergence.
    pub bound_values: Vec<f64>,
    /// error·N/log N per ladder point.
    pub log_corrected_ratio: Option<Vec<f64>>,
}

impl RateReport {
    pub fn slope(&self) -> Result<f64> {
        self.fit.map(|f| f.slope).ok_or(HausError::DegenerateZeroError)
    }
}

/// Knobs shared by the studies.
#[derive(Debug, Clone, Copy)]
pub struct StudyConfig {
    /// Error window is [−W, W] with W = window_factor · effective radius.
    pub window_factor: f64,
    /// Sup-norm errors use this many equispaced points on the window.
    pub sup_points: usize,
    /// Leading ladder points left out of slope fits.
    pub fit_skip: usize,
    pub representation: Representation,
    pub quad: QuadratureConfig,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            window_factor: 4.0,
            sup_points: 161,
            fit_skip: 1,
            representation: Representation::Convolution,
            quad: QuadratureConfig::oscillatory(),
        }
    }
}

pub const DEFAULT_N_LADDER: [f64; 6] = [8.0, 16.0, 32.0, 64.0, 128.0, 256.0];

fn fit_tail(ladder: &[f64], values: &[f64], skip: usize) -> Option<RateFit> {
    let skip = if ladder.len() >= skip + 3 { skip } else { 0 };
    fit_rate(&ladder[skip..], &values[skip..]).ok()
}

fn predicted(ladder: &[f64], bounds: &[f64], skip: usize) -> f64 {
    if bounds.iter().all(|b| b.is_finite() && *b > 0.0) {
        fit_tail(ladder, bounds, skip).map_or(f64::NAN, |f| f.slope)
    } else {
        f64::NAN
    }
}

/// Where the error norm is sampled for one ladder value.
enum Sampler {
    Sup(Vec<f64>),
    /// Composite Gauss–Legendre nodes and weights.
    Quad(Vec<f64>, Vec<f64>),
}

const PANEL_ORDER: usize = 8;

fn sampler(p: LebesgueExponent, w: f64, n: f64, breaks: &[f64], cfg: &StudyConfig) -> Sampler {
    match p {
        LebesgueExponent::Infinity => {
            let m = cfg.sup_points.max(2);
            Sampler::Sup((0..m).map(|i| -w + 2.0 * w * i as f64 / (m - 1) as f64).collect())
        }
        LebesgueExponent::Finite(_) => {
            let mut cuts: Vec<f64> = breaks.iter().copied().filter(|b| b.abs() < w).collect();
            cuts.push(-w);
            cuts.push(w);
            cuts.sort_by(f64::total_cmp);
            cuts.dedup();
            let width = PI / (2.0 * n);
            let rule = gauss_legendre(PANEL_ORDER);
            let (mut xs, mut ws) = (Vec::new(), Vec::new());
            for seg in cuts.windows(2) {
                let k = ((seg[1] - seg[0]) / width).ceil().max(1.0) as usize;
                let h = (seg[1] - seg[0]) / k as f64;
                for j in 0..k {
                    let a = seg[0] + j as f64 * h;
                    for (z, wt) in rule.nodes.iter().zip(&rule.weights) {
                        xs.push(a + 0.5 * h * (z + 1.0));
                        ws.push(0.5 * h * wt);
                    }
                }
            }
            Sampler::Quad(xs, ws)
        }
    }
}

fn norm_of(diffs: &[f64], s: &Sampler, p: LebesgueExponent) -> f64 {
    match (s, p) {
        (_, LebesgueExponent::Infinity) | (Sampler::Sup(_), _) => diffs.iter().fold(0.0, |m, d| m.max(d.abs())),
        (Sampler::Quad(_, ws), LebesgueExponent::Finite(pv)) => {
            diffs.iter().zip(ws).map(|(d, w)| w * d.abs().powf(pv)).sum::<f64>().powf(1.0 / pv)
        }
    }
}

fn points_of(s: &Sampler) -> &[f64] {
    match s {
        Sampler::Sup(x) => x,
        Sampler::Quad(x, _) => x,
    }
}

fn checked_ladder(l: &GridSpec, min_len: usize) -> Result<Vec<f64>> {
    if l.len() < min_len {
        return Err(HausError::InvalidInput(format!("ladder needs at least {min_len} entries")));
    }
    if l.points()[0] <= 0.0 {
        return Err(HausError::InvalidInput("ladder values must be positive".into()));
    }
    Ok(l.points().to_vec())
}

/// A modulus usable inside bound integrals: the analytic one when present,
/// otherwise a monotone table from grid-sup estimates on a logarithmic δ-grid.
pub fn modulus_for(f: &TestFunction, p: LebesgueExponent, q: &QuadratureConfig) -> Result<Arc<dyn Fn(f64) -> f64 + Send + Sync>> {
    if f.modulus_at(0.5, p).is_some() {
        let m = f.analytic_modulus.clone().expect("checked above");
        return Ok(Arc::new(move |d| m(d, p).unwrap_or(f64::NAN)));
    }
    let deltas: Vec<f64> = (0..=48).map(|k| 1e-6 * 10f64.powf(k as f64 / 6.0)).collect();
    let table: Vec<(f64, f64)> =
        modulus_ladder(f, &deltas, p, q)?.into_iter().map(|e| (e.delta, e.value)).collect();
    Ok(Arc::new(move |d: f64| {
        if d <= 0.0 {
            return 0.0;
        }
        // Next grid value up keeps the table an upper envelope.
        match table.iter().find(|(x, _)| *x >= d) {
            Some(&(_, v)) => v,
            None => table.last().map_or(0.0, |&(_, v)| v),
        }
    }))
}

fn cap_for(f: &TestFunction, p: LebesgueExponent, q: &QuadratureConfig) -> Option<f64> {
    lp_norm(f, p, q).ok().map(|v| 2.0 * v)
}

/// Error of the truncated approximant against H*f (target adjoint) or Hf
/// (target forward) over the N-ladder, with the normwise bounds.
pub fn convergence_study(
    op: &HausdorffOperatorSpec,
    f: &TestFunction,
    target: Target,
    p: LebesgueExponent,
    n_ladder: &GridSpec,
    q: &QuadratureConfig,
) -> Result<RateReport> {
    convergence_study_with(op, f, target, p, n_ladder, &StudyConfig { quad: *q, ..StudyConfig::default() })
}

pub fn convergence_study_with(
    op: &HausdorffOperatorSpec,
    f: &TestFunction,
    target: Target,
    p: LebesgueExponent,
    n_ladder: &GridSpec,
    cfg: &StudyConfig,
) -> Result<RateReport> {
    let ladder = checked_ladder(n_ladder, 4)?;
    let q = &cfg.quad;
    let w = cfg.window_factor * f.radius;
    let breaks = match target {
        Target::Adjoint => op.adjoint_breaks(f),
        Target::Forward => op.forward_breaks(f),
    };
    let iq = QuadratureConfig { abs_tol: q.abs_tol * 0.1, rel_tol: q.rel_tol * 0.1, ..*q };
    let exact = |x: f64| match target {
        Target::Adjoint => adjoint_apply(op, f, x, &iq),
        Target::Forward => hausdorff_apply(op, f, x, &iq),
    };
    let mut errors = Vec::with_capacity(ladder.len());
    for &n in &ladder {
        let s = sampler(p, w, n, &breaks, cfg);
        let grid = GridSpec::new(points_of(&s).to_vec(), GridRole::X)?;
        let approx = approximant(op, f, n, &grid, target, cfg.representation, q)?;
        let targets: Vec<f64> = grid.points().par_iter().map(|&x| exact(x)).collect::<Result<_>>()?;
        let diffs: Vec<f64> = approx.values.iter().zip(&targets).map(|(a, b)| a - b).collect();
        errors.push(norm_of(&diffs, &s, p));
    }
    let bound_values = match target {
        Target::Adjoint => {
            let m = modulus_for(f, p, q)?;
            let cap = cap_for(f, p, q);
            ladder
                .par_iter()
                .map(|&n| {
                    let r = match p {
                        LebesgueExponent::Infinity => theorem2_rhs(op, &*m, n, cap, q)?,
                        LebesgueExponent::Finite(_) => theorem1_rhs(op, &*m, n, p, cap, q)?,
                    };
                    Ok(r.error_bound().as_f64())
                })
                .collect::<Result<Vec<f64>>>()?
        }
        // No normwise statement is available for this target.
        Target::Forward => vec![f64::NAN; ladder.len()],
    };
    Ok(RateReport {
        operator_name: op.name.clone(),
        f_label: f.label.clone(),
        p,
        fit: fit_tail(&ladder, &errors, cfg.fit_skip),
        predicted_slope: predicted(&ladder, &bound_values, cfg.fit_skip),
        n_ladder: ladder,
        errors,
        bound_values,
        log_corrected_ratio: None,
    })
}

/// (F_r * f)(x) with F(w) = (1 − cos w)/(π w²), the Fejér kernel. Values of f
/// beyond its effective radius are neglected (at most its tail bound).
pub fn fejer_convolution(f: &TestFunction, r: f64, x: f64, q: &QuadratureConfig) -> Result<f64> {
    if !(r > 0.0) {
        return Err(HausError::InvalidInput(format!("r must be positive, got {r}")));
    }
    if !f.lp.contains(LebesgueExponent::Infinity) {
        return Err(HausError::TailNotIntegrable(format!("{} is not bounded", f.label)));
    }
    // ∫ F(w) f(x − w/r) dw folded onto w > 0.
    let e = |w: f64| f.eval(x - w / r) + f.eval(x + w / r);
    let end = r * (x.abs() + f.radius);
    let breaks: Vec<f64> = f.breakpoints.iter().map(|b| r * (x - b).abs()).collect();
    let w0 = PI.min(end);
    let near = integrate(|w| e(w) * fejer_kernel(w), 0.0, w0, &breaks, q);
    let mut value = near.value;
    if end > w0 {
        let h = |w: f64| e(w) / (PI * w * w);
        let plain = integrate(h, w0, end, &breaks, q);
        let osc = filon(&h, w0, end, 1.0, &breaks, q);
        value += plain.value - osc.value.re;
    }
    Ok(value)
}

/// ‖F_r * f − f‖_p over the r-ladder, with the Minkowski bound ∫ F(w) ω(|w|/r) dw.
pub fn approximate_identity_study(
    f: &TestFunction,
    p: LebesgueExponent,
    r_ladder: &GridSpec,
    q: &QuadratureConfig,
) -> Result<RateReport> {
    approximate_identity_study_with(f, p, r_ladder, &StudyConfig { quad: *q, ..StudyConfig::default() })
}

pub fn approximate_identity_study_with(
    f: &TestFunction,
    p: LebesgueExponent,
    r_ladder: &GridSpec,
    cfg: &StudyConfig,
) -> Result<RateReport> {
    let ladder = checked_ladder(r_ladder, 4)?;
    let q = &cfg.quad;
    let w = cfg.window_factor * f.radius;
    let mut errors = Vec::with_capacity(ladder.len());
    for &r in &ladder {
        let s = sampler(p, w, r, &f.breakpoints, cfg);
        let diffs: Vec<f64> = points_of(&s)
            .par_iter()
            .map(|&x| fejer_convolution(f, r, x, q).map(|v| v - f.eval(x)))
            .collect::<Result<_>>()?;
        errors.push(norm_of(&diffs, &s, p));
    }
    let m = modulus_for(f, p, q)?;
    let cap = cap_for(f, p, q).unwrap_or(f64::INFINITY);
    let bound_values: Vec<f64> = ladder
        .iter()
        .map(|&r| {
            // In u = w/r the modulus kinks sit at fixed u and the tail decays like u⁻².
            let g = |u: f64| 2.0 * r * fejer_kernel(r * u) * m(u).min(cap);
            crate::quadrature::integrate_range(g, 0.0, f64::INFINITY, &[PI / r, 1.0], q).map(|v| v.value)
        })
        .collect::<Result<_>>()?;
    let ratios = ladder
        .iter()
        .zip(&errors)
        .map(|(&r, &e)| if r > 1.0 { e * r / r.ln() } else { f64::NAN })
        .collect();
    Ok(RateReport {
        operator_name: "fejer".into(),
        f_label: f.label.clone(),
        p,
        fit: fit_tail(&ladder, &errors, cfg.fit_skip),
        predicted_slope: predicted(&ladder, &bound_values, cfg.fit_skip),
        n_ladder: ladder,
        errors,
        bound_values,
        log_corrected_ratio: Some(ratios),
    })
}

/// Second sup-norm term for the Bellman operator, truncated to 1/S ≤ |s| ≤ S and
/// t ≤ S, at N = 1.
pub fn bellman_divergence_demo(
    s_ladder: &GridSpec,
    modulus: &(dyn Fn(f64) -> f64 + Sync),
    q: &QuadratureConfig,
) -> Result<Vec<(f64, f64)>> {
    truncated_tail_ladder(&catalog::bellman(), s_ladder, modulus, q)
}

/// The same truncation for any operator (the Cesàro control saturates).
pub fn truncated_tail_ladder(
    op: &HausdorffOperatorSpec,
    s_ladder: &GridSpec,
    modulus: &(dyn Fn(f64) -> f64 + Sync),
    q: &QuadratureConfig,
) -> Result<Vec<(f64, f64)>> {
    s_ladder
        .points()
        .par_iter()
        .map(|&s| {
            let v = truncated_tail_term(op, modulus, 1.0, s, q)?;
            Ok((s, v.as_f64()))
        })
        .collect()
}

/// sup_y |f(y) − F_N(y)| over the N-ladder; the predicted slope comes from the sup-norm bound.
pub fn recovery_study(
    op: &HausdorffOperatorSpec,
    f: &TestFunction,
    n_ladder: &GridSpec,
    y_grid: &GridSpec,
    q: &QuadratureConfig,
) -> Result<RateReport> {
    recovery_study_with(op, f, n_ladder, y_grid, &StudyConfig { quad: *q, ..StudyConfig::default() })
}

pub fn recovery_study_with(
    op: &HausdorffOperatorSpec,
    f: &TestFunction,
    n_ladder: &GridSpec,
    y_grid: &GridSpec,
    cfg: &StudyConfig,
) -> Result<RateReport> {
    let ladder = checked_ladder(n_ladder, 4)?;
    let q = &cfg.quad;
    let mut errors = Vec::with_capacity(ladder.len());
    for &n in &ladder {
        let rec = function_recovery_with(op, f, n, y_grid, cfg.representation, q)?;
        let e = y_grid.points().iter().zip(&rec.values).fold(0.0f64, |m, (&y, v)| m.max((f.eval(y) - v).abs()));
        errors.push(e);
    }
    let p = LebesgueExponent::Infinity;
    let m = modulus_for(f, p, q)?;
    let cap = cap_for(f, p, q);
    let bound_values: Vec<f64> = ladder
        .par_iter()
        .map(|&n| Ok(theorem2_rhs(op, &*m, n, cap, q)?.error_bound().as_f64()))
        .collect::<Result<_>>()?;
    Ok(RateReport {
        operator_name: op.name.clone(),
        f_label: f.label.clone(),
        p,
        fit: fit_tail(&ladder, &errors, cfg.fit_skip),
        predicted_slope: predicted(&ladder, &bound_values, cfg.fit_skip),
        n_ladder: ladder,
        errors,
        bound_values,
        log_corrected_ratio: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_examples() {
        let n = [8.0, 16.0, 32.0, 64.0];
        let e: Vec<f64> = n.iter().map(|x: &f64| x.powf(-0.5)).collect();
        let f = fit_rate(&n, &e).unwrap();
        assert!((f.slope + 0.5).abs() < 1e-12 && (f.r_squared - 1.0).abs() < 1e-12);
        let f = fit_rate(&[10.0, 100.0, 1000.0], &[1.0, 0.1, 0.01]).unwrap();
        assert!((f.slope + 1.0).abs() < 1e-12);
        assert_eq!(fit_rate(&n, &[1.0, 0.0, 1.0, 1.0]), Err(HausError::DegenerateZeroError));
    }

    #[test]
    fn fejer_smoothing() {
        let q = QuadratureConfig::default();
        let t = catalog::tent();
        let v = fejer_convolution(&t, 4.0, 0.0, &q).unwrap();
        assert!(v > 0.5 && v < 1.0, "{v}");
        let v = fejer_convolution(&catalog::plateau(1.0, 1000.0), 10.0, 0.2, &q).unwrap();
        assert!((v - 1.0).abs() < 1e-4, "{v}");
    }
}
