//! Globally adaptive Gauss–Kronrod integration and dyadic tail summation.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::gauss::{WG7, WGK15, XGK15};
use crate::analysis::QuadratureConfig;
use crate::error::{HausError, Result};

/// Value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadResult {
    pub const ZERO: QuadResult = QuadResult { value: 0.0, error: 0.0, evaluations: 0, converged: true };

    pub fn add(self, other: QuadResult) -> QuadResult {
        QuadResult {
            value: self.value + other.value,
            error: self.error + other.error,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
        }
    }

    pub fn scale(self, c: f64) -> QuadResult {
        QuadResult { value: c * self.value, error: c.abs() * self.error, ..self }
    }
}

/// One 15-point Kronrod panel: (integral, error estimate).
pub(crate) fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut resk = fc * WGK15[7];
    let mut resg = fc * WG7[3];
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = h * XGK15[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK15[j] * (f1 + f2);
        if j % 2 == 1 {
            resg += WG7[j / 2] * (f1 + f2);
        }
    }
    let mean = resk * 0.5;
    let mut resasc = WGK15[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK15[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let resasc = resasc * h.abs();
    let value = resk * h;
    let mut err = ((resk - resg) * h).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if !value.is_finite() || !err.is_finite() {
        return (value, f64::INFINITY);
    }
    (value, err.max(50.0 * f64::EPSILON * value.abs()))
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error).then_with(|| o.a.total_cmp(&self.a))
    }
}

/// Sorted, deduplicated cut points strictly inside (a, b), with a and b at the ends.
pub(crate) fn cut_points(a: f64, b: f64, breaks: &[f64]) -> Vec<f64> {
    let mut pts = vec![a];
    let mut inner: Vec<f64> =
        breaks.iter().copied().filter(|&x| x.is_finite() && x > a && x < b).collect();
    inner.sort_by(f64::total_cmp);
    let tol = 1e-14 * (b - a).abs().max(a.abs()).max(b.abs());
    for x in inner {
        if x - pts[pts.len() - 1] > tol && b - x > tol {
            pts.push(x);
        }
    }
    pts.push(b);
    pts
}

/// Integral over a finite [a, b] with the given interior break points.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    q: &QuadratureConfig,
) -> QuadResult {
    if a == b {
        return QuadResult::ZERO;
    }
    if a > b {
        return integrate(f, b, a, breaks, q).scale(-1.0);
    }
    let pts = cut_points(a, b, breaks);
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut evals = 0;
    for w in pts.windows(2) {
        let (v, e) = gk15(&f, w[0], w[1]);
        evals += 15;
        total += v;
        total_err += e;
        heap.push(Panel { a: w[0], b: w[1], value: v, error: e });
    }
    let limit = q.max_subdivisions.max(pts.len());
    let mut converged = true;
    loop {
        let tol = q.abs_tol.max(q.rel_tol * total.abs());
        if total_err <= tol {
            break;
        }
        if heap.len() >= limit {
            converged = false;
            break;
        }
        let Some(p) = heap.pop() else { break };
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b || (p.b - p.a) < 1e-15 * p.a.abs().max(p.b.abs()).max(1e-300) {
            // Cannot split further; keep the panel and stop refining it.
            heap.push(Panel { error: 0.0, ..p });
            total_err -= p.error;
            converged = false;
            continue;
        }
        let (v1, e1) = gk15(&f, p.a, m);
        let (v2, e2) = gk15(&f, m, p.b);
        evals += 30;
        total += v1 + v2 - p.value;
        total_err += e1 + e2 - p.error;
        heap.push(Panel { a: p.a, b: m, value: v1, error: e1 });
        heap.push(Panel { a: m, b: p.b, value: v2, error: e2 });
    }
    // Re-sum from panels in position order so the result does not depend on heap history.
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value: f64 = panels.iter().map(|p| p.value).sum();
    let error: f64 = panels.iter().map(|p| p.error).sum::<f64>().max(total_err.max(0.0));
    QuadResult { value, error, evaluations: evals, converged }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Dyadic {
    /// Pieces [s 2^k, s 2^(k+1)], k = 0, 1, ...
    Outward,
    /// Pieces [s 2^-(k+1), s 2^-k], k = 0, 1, ...
    Inward,
}

const MAX_DYADIC_LEVELS: usize = 400;
const GROWTH_RATIO: f64 = 0.92;
// Integrands may rise over a few octaves before a cap or a support edge makes
// them decay, so divergence needs a long run of non-decaying pieces.
const GROWTH_STRIKES: usize = 24;

/// Sum of `f` over dyadic pieces starting at `start > 0`, with a Cauchy-type
/// stopping rule. Pieces that fail to decay geometrically several times in a
/// row mark the integral as divergent.
pub(crate) fn dyadic_sum<F: Fn(f64) -> f64>(
    f: &F,
    start: f64,
    dir: Dyadic,
    breaks: &[f64],
    q: &QuadratureConfig,
    what: &str,
) -> Result<QuadResult> {
    debug_assert!(start > 0.0);
    let mut acc = QuadResult::ZERO;
    let mut prev = f64::NAN;
    let mut strikes = 0;
    let mut small = 0;
    let piece_q = QuadratureConfig { abs_tol: q.abs_tol * 0.05, ..*q };
    for k in 0..MAX_DYADIC_LEVELS {
        let (a, b) = match dir {
            Dyadic::Outward => (start * 2f64.powi(k as i32), start * 2f64.powi(k as i32 + 1)),
            Dyadic::Inward => (start * 2f64.powi(-(k as i32) - 1), start * 2f64.powi(-(k as i32))),
        };
        if !(a.is_finite() && b.is_finite()) || b == 0.0 {
            break;
        }
        let piece = integrate(f, a, b, breaks, &piece_q);
        if !piece.value.is_finite() {
            return Err(HausError::DivergentIntegral(format!("{what}: non-finite piece on [{a:e}, {b:e}]")));
        }
        acc = acc.add(piece);
        let mag = piece.value.abs();
        let tol = q.abs_tol.max(q.rel_tol * acc.value.abs());
        if mag > tol && prev.is_finite() && mag >= GROWTH_RATIO * prev {
            strikes += 1;
            if strikes >= GROWTH_STRIKES {
                return Err(HausError::DivergentIntegral(format!(
                    "{what}: dyadic pieces stop decaying near {b:e} (piece {mag:e})"
                )));
            }
        } else {
            strikes = 0;
        }
        let ratio = if prev.is_finite() && prev > 0.0 { mag / prev } else { 0.5 };
        let remainder = if ratio < 1.0 { mag * ratio / (1.0 - ratio) } else { f64::INFINITY };
        if mag <= 0.25 * tol && remainder <= 0.5 * tol {
            small += 1;
            if small >= 3 {
                // Geometric extrapolation of the neglected tail; its size is kept as error.
                acc.value += piece.value.signum() * remainder;
                acc.error += remainder;
                return Ok(acc);
            }
        } else {
            small = 0;
        }
        prev = mag;
    }
    Err(HausError::DivergentIntegral(format!("{what}: no convergence after {MAX_DYADIC_LEVELS} dyadic levels")))
}

/// Integral over an interval whose ends may be infinite. Infinite ends are
/// summed dyadically from `scale` outward, with divergence detection.
pub fn integrate_range<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    q: &QuadratureConfig,
) -> Result<QuadResult> {
    if lo > hi {
        return integrate_range(f, hi, lo, breaks, q).map(|r| r.scale(-1.0));
    }
    if lo == hi {
        return Ok(QuadResult::ZERO);
    }
    let finite_breaks: Vec<f64> = breaks.iter().copied().filter(|x| x.is_finite()).collect();
    let bmax = finite_breaks.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let (a, b) = (
        if lo.is_finite() { lo } else { -(bmax.max(if hi.is_finite() { hi.abs() } else { 0.0 }) + 1.0) },
        if hi.is_finite() { hi } else { bmax.max(if lo.is_finite() { lo.abs() } else { 0.0 }) + 1.0 },
    );
    let mut acc = integrate(&f, a, b, &finite_breaks, q);
    if !acc.value.is_finite() {
        return Err(HausError::DivergentIntegral("non-finite integral".into()));
    }
    if !hi.is_finite() {
        let g = |s: f64| f(b - 1.0 + s);
        acc = acc.add(dyadic_sum(&g, 1.0, Dyadic::Outward, &shifted(&finite_breaks, 1.0 - b), q, "upper tail")?);
    }
    if !lo.is_finite() {
        let g = |s: f64| f(a + 1.0 - s);
        let mirrored: Vec<f64> = finite_breaks.iter().map(|x| a + 1.0 - x).collect();
        acc = acc.add(dyadic_sum(&g, 1.0, Dyadic::Outward, &mirrored, q, "lower tail")?);
    }
    Ok(acc)
}

fn shifted(v: &[f64], d: f64) -> Vec<f64> {
    v.iter().map(|x| x + d).collect()
}

/// Integral over (lo, hi) with 0 <= lo < hi <= inf for kernel-side variables.
/// An endpoint at 0 is approached dyadically (it is where 1/t-type
/// singularities sit), an infinite endpoint is summed dyadically outward, and
/// wide finite ranges get geometric initial cuts.
pub fn integrate_kernel_side<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    q: &QuadratureConfig,
) -> Result<QuadResult> {
    if !(lo < hi) {
        return Ok(QuadResult::ZERO);
    }
    debug_assert!(lo >= 0.0);
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|&x| x.is_finite() && x > lo && x < hi).collect();
    pts.sort_by(f64::total_cmp);
    // Finite core [c0, c1] between the singular-end treatments.
    let c0 = if lo == 0.0 {
        let first = pts.first().copied().unwrap_or(if hi.is_finite() { hi } else { 1.0 });
        first.min(1.0).min(if hi.is_finite() { hi } else { f64::INFINITY })
    } else {
        lo
    };
    let c1 = if hi.is_finite() {
        hi
    } else {
        pts.last().copied().unwrap_or(1.0).max(1.0).max(c0 * 2.0)
    };
    let mut cuts = pts.clone();
    if c0 > 0.0 && c1 / c0 > 8.0 {
        let n = ((c1 / c0).log2().ceil() as usize).min(200);
        for k in 1..n {
            cuts.push(c0 * (c1 / c0).powf(k as f64 / n as f64));
        }
    }
    let mut acc = if c1 > c0 { integrate(&f, c0, c1, &cuts, q) } else { QuadResult::ZERO };
    if !acc.value.is_finite() {
        return Err(HausError::DivergentIntegral("non-finite kernel-side integral".into()));
    }
    if lo == 0.0 && c0 > 0.0 {
        acc = acc.add(dyadic_sum(&f, c0, Dyadic::Inward, &pts, q, "kernel variable near 0")?);
    }
    if !hi.is_finite() {
        acc = acc.add(dyadic_sum(&f, c1, Dyadic::Outward, &pts, q, "kernel variable near infinity")?);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tight() -> QuadratureConfig {
        QuadratureConfig { abs_tol: 1e-12, rel_tol: 1e-12, ..QuadratureConfig::default() }
    }

    #[test]
    fn smooth_and_endpoint_singular_integrals() {
        let q = tight();
        let r = integrate(|x: f64| x.sin(), 0.0, std::f64::consts::PI, &[], &q);
        assert!((r.value - 2.0).abs() < 1e-12);
        let r = integrate(|x: f64| x.sqrt(), 0.0, 1.0, &[], &q);
        assert!((r.value - 2.0 / 3.0).abs() < 1e-11);
        let r = integrate(|x: f64| -x.ln(), 0.0, 1.0, &[], &q);
        assert!((r.value - 1.0).abs() < 1e-10);
        let r = integrate(|x: f64| (x - 0.3).abs(), 0.0, 1.0, &[0.3], &q);
        assert!((r.value - (0.045 + 0.245)).abs() < 1e-13);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let q = tight();
        let r = integrate(|x: f64| x * x, 1.0, 0.0, &[], &q);
        assert!((r.value + 1.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn infinite_ranges() {
        let q = tight();
        let r = integrate_range(|x: f64| (-x * x).exp(), f64::NEG_INFINITY, f64::INFINITY, &[], &q).unwrap();
        assert!((r.value - std::f64::consts::PI.sqrt()).abs() < 1e-10);
        let r = integrate_range(|x: f64| 1.0 / (x * x), 1.0, f64::INFINITY, &[], &q).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn log_divergence_is_detected() {
        let q = QuadratureConfig::default();
        let r = integrate_kernel_side(|t: f64| 1.0 / t, 0.0, 1.0, &[], &q);
        assert!(matches!(r, Err(HausError::DivergentIntegral(_))));
        let r = integrate_kernel_side(|t: f64| 1.0 / t, 1.0, f64::INFINITY, &[], &q);
        assert!(matches!(r, Err(HausError::DivergentIntegral(_))));
    }

    #[test]
    fn kernel_side_integrable_singularities() {
        let q = tight();
        let r = integrate_kernel_side(|t: f64| t.powf(-0.5), 0.0, 1.0, &[], &q).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9);
        let r = integrate_kernel_side(|t: f64| t.powf(-2.0), 1.0, f64::INFINITY, &[], &q).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
        let r = integrate_kernel_side(|t: f64| 1.0 / t, 1e-6, 1.0, &[], &q).unwrap();
        assert!((r.value - 1e6f64.ln()).abs() < 1e-10);
    }
}
