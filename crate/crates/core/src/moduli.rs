//! Moduli of continuity ω(f; δ)_p = sup_{|h| ≤ δ} ‖f(· + h) − f‖_p and Dini-type integrals of them.

use rayon::prelude::*;

use crate::analysis::{lp_norm, sup_abs, LebesgueExponent, QuadratureConfig, TestFunction};
use crate::catalog;
use crate::error::{HausError, Result};
use crate::quadrature::adaptive::{dyadic_sum, Dyadic};

pub const DEFAULT_H_GRID: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModulusMethod {
    Analytic,
    GridSup,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusEstimate {
    pub delta: f64,
    pub p: LebesgueExponent,
    pub value: f64,
    pub method: ModulusMethod,
    pub h_grid_size: usize,
    /// Increase of the grid sup after one doubling of the h-grid (0 for analytic values).
    pub refinement_delta: f64,
}

/// ‖f(· + h) − f‖_p. For p = ∞ the sup runs over the effective support widened by |h|.
pub fn shift_difference_norm(f: &TestFunction, h: f64, p: LebesgueExponent, q: &QuadratureConfig) -> Result<f64> {
    if h == 0.0 {
        return Ok(0.0);
    }
    match p {
        LebesgueExponent::Infinity => {
            if !f.lp.contains(p) {
                return Err(HausError::TailNotIntegrable(format!("{} is not bounded", f.label)));
            }
            let r = f.radius + h.abs();
            let mut breaks = f.breakpoints.clone();
            breaks.extend(f.breakpoints.iter().map(|b| b - h));
            Ok(sup_abs(&|x| f.eval(x + h) - f.eval(x), -r, r, &breaks))
        }
        LebesgueExponent::Finite(_) => lp_norm(&f.difference(h), p, q),
    }
}

fn grid_sup(f: &TestFunction, delta: f64, m: usize, p: LebesgueExponent, q: &QuadratureConfig) -> Result<f64> {
    let vals: Vec<f64> = (1..=m)
        .into_par_iter()
        .map(|k| shift_difference_norm(f, delta * k as f64 / m as f64, p, q))
        .collect::<Result<_>>()?;
    Ok(vals.into_iter().fold(0.0, f64::max))
}

/// Grid-sup estimate over h ∈ {δk/m : k = 1..m}, m = 32; the h-grid always contains δ.
pub fn modulus_estimate(f: &TestFunction, delta: f64, p: LebesgueExponent, q: &QuadratureConfig) -> Result<ModulusEstimate> {
    modulus_estimate_with(f, delta, p, DEFAULT_H_GRID, q)
}

pub fn modulus_estimate_with(
    f: &TestFunction,
    delta: f64,
    p: LebesgueExponent,
    m: usize,
    q: &QuadratureConfig,
) -> Result<ModulusEstimate> {
    if !(delta >= 0.0) || m == 0 {
        return Err(HausError::InvalidInput(format!("modulus needs delta ≥ 0 and a nonempty h-grid (delta = {delta})")));
    }
    if delta == 0.0 {
        return Ok(ModulusEstimate { delta, p, value: 0.0, method: ModulusMethod::GridSup, h_grid_size: m, refinement_delta: 0.0 });
    }
    let coarse = grid_sup(f, delta, m, p, q)?;
    let fine = grid_sup(f, delta, 2 * m, p, q)?;
    Ok(ModulusEstimate {
        delta,
        p,
        value: coarse,
        method: ModulusMethod::GridSup,
        h_grid_size: m,
        refinement_delta: (fine - coarse).max(0.0),
    })
}

/// Estimates on an increasing δ-ladder; each value is the running maximum, so
/// the sequence is nondecreasing exactly.
pub fn modulus_ladder(
    f: &TestFunction,
    deltas: &[f64],
    p: LebesgueExponent,
    q: &QuadratureConfig,
) -> Result<Vec<ModulusEstimate>> {
    if deltas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(HausError::InvalidInput("delta ladder must be strictly increasing".into()));
    }
    let raw: Vec<ModulusEstimate> = deltas.par_iter().map(|&d| modulus_estimate(f, d, p, q)).collect::<Result<_>>()?;
    let mut best = 0.0f64;
    Ok(raw
        .into_iter()
        .map(|mut e| {
            best = best.max(e.value);
            e.value = best;
            e
        })
        .collect())
}

/// Catalog classes with a closed-form modulus.
pub const MODULUS_CLASSES: &[&str] = &["constant", "tent", "indicator", "cusp", "gaussian"];

fn class_function(class: &str, alpha: f64) -> Result<TestFunction> {
    match class {
        "constant" => Ok(catalog::constant(1.0)),
        "tent" => Ok(catalog::tent()),
        "indicator" => Ok(catalog::indicator(0.0, 1.0)),
        "cusp" => catalog::cusp(alpha),
        "gaussian" => Ok(catalog::gaussian()),
        other => Err(HausError::UnknownClass(other.to_string())),
    }
}

/// Closed-form modulus of a catalog class; `alpha` is the cusp exponent.
pub fn modulus_analytic(class: &str, alpha: f64, delta: f64, p: LebesgueExponent) -> Result<ModulusEstimate> {
    let f = class_function(class, alpha)?;
    let value = f
        .modulus_at(delta.max(0.0), p)
        .ok_or_else(|| HausError::UnknownClass(format!("{class} has no closed-form modulus for p = {p}")))?;
    Ok(ModulusEstimate { delta, p, value, method: ModulusMethod::Analytic, h_grid_size: 0, refinement_delta: 0.0 })
}

/// Weight w(t) in ∫_0^1 ω(t/N) w(t) dt.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiniWeight {
    /// 1/t
    Reciprocal,
    /// |log t|/t
    LogReciprocal,
    /// 1
    Plain,
}

impl DiniWeight {
    fn at(self, t: f64) -> f64 {
        match self {
            DiniWeight::Reciprocal => 1.0 / t,
            DiniWeight::LogReciprocal => -t.ln() / t,
            DiniWeight::Plain => 1.0,
        }
    }
}

/// ∫_0^1 ω(t/N) w(t) dt, summed over dyadic pieces toward 0.
pub fn dini_integral(
    modulus: &(dyn Fn(f64) -> f64 + Sync),
    n: f64,
    weight: DiniWeight,
    q: &QuadratureConfig,
) -> Result<f64> {
    if !(n > 0.0) {
        return Err(HausError::InvalidInput(format!("N must be positive, got {n}")));
    }
    let g = |t: f64| modulus(t / n) * weight.at(t);
    dyadic_sum(&g, 1.0, Dyadic::Inward, &[], q, "dini integral")
        .map(|r| r.value)
        .map_err(|e| match e {
            HausError::DivergentIntegral(m) => HausError::DiniDivergent(m),
            other => other,
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dini_closed_forms() {
        let q = QuadratureConfig::default();
        let v = dini_integral(&|d| d, 1.0, DiniWeight::Reciprocal, &q).unwrap();
        assert!((v - 1.0).abs() < 1e-8);
        let v = dini_integral(&|d: f64| d.sqrt(), 16.0, DiniWeight::Reciprocal, &q).unwrap();
        assert!((v - 0.5).abs() < 1e-6, "{v}");
        // ∫_0^1 t^{α−1}|log t| dt = 1/α²
        let v = dini_integral(&|d: f64| d.powf(0.5), 1.0, DiniWeight::LogReciprocal, &q).unwrap();
        assert!((v - 4.0).abs() < 1e-5, "{v}");
        let e = dini_integral(&|_| 1.0, 1.0, DiniWeight::Reciprocal, &q).unwrap_err();
        assert!(matches!(e, HausError::DiniDivergent(_)));
    }

    #[test]
    fn spot_values() {
        let q = QuadratureConfig::default();
        let v = modulus_estimate(&catalog::tent(), 0.25, LebesgueExponent::Infinity, &q).unwrap();
        assert!((v.value - 0.25).abs() < 1e-9);
        let v = modulus_estimate(&catalog::indicator(0.0, 1.0), 0.1, LebesgueExponent::Finite(1.0), &q).unwrap();
        assert!((v.value - 0.2).abs() < 1e-7, "{}", v.value);
        let v = modulus_estimate(&catalog::constant(3.0), 0.5, LebesgueExponent::Infinity, &q).unwrap();
        assert_eq!(v.value, 0.0);
        assert!(matches!(modulus_analytic("weierstrass", 0.5, 0.1, LebesgueExponent::Infinity), Err(HausError::UnknownClass(_))));
    }
}
