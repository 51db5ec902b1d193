//! Oscillatory quadrature: Legendre–Filon panels and the sinc-kernel integral.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::adaptive::{cut_points, integrate};
use super::gauss::{gauss_legendre, legendre_values};
use crate::analysis::QuadratureConfig;
use crate::error::{HausError, Result};

const FILON_ORDER: usize = 16;

/// Spherical Bessel functions j_0(x), ..., j_{n-1}(x).
pub fn spherical_bessel(n: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; n];
    if n == 0 {
        return out;
    }
    if x < 0.0 {
        let mut v = spherical_bessel(n, -x);
        for (k, val) in v.iter_mut().enumerate() {
            if k % 2 == 1 {
                *val = -*val;
            }
        }
        return v;
    }
    if x < 1e-3 {
        let x2 = x * x;
        let mut lead = 1.0;
        for (k, o) in out.iter_mut().enumerate() {
            let kf = k as f64;
            let c1 = x2 / (2.0 * (2.0 * kf + 3.0));
            let c2 = x2 * x2 / (8.0 * (2.0 * kf + 3.0) * (2.0 * kf + 5.0));
            *o = lead * (1.0 - c1 + c2);
            lead *= x / (2.0 * kf + 3.0);
        }
        return out;
    }
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    let j1 = s / (x * x) - c / x;
    if x > (n as f64) {
        out[0] = j0;
        if n > 1 {
            out[1] = j1;
        }
        for k in 1..n.saturating_sub(1) {
            out[k + 1] = (2.0 * k as f64 + 1.0) / x * out[k] - out[k - 1];
        }
        return out;
    }
    // Miller's backward recurrence, normalised against whichever of j0, j1 is larger.
    let start = n + 20 + x as usize;
    let mut vals = vec![0.0; start + 2];
    vals[start] = 1e-200;
    for k in (1..=start).rev() {
        vals[k - 1] = (2.0 * k as f64 + 1.0) / x * vals[k] - vals[k + 1];
        if vals[k - 1].abs() > 1e200 {
            for v in vals[k - 1..].iter_mut() {
                *v *= 1e-200;
            }
        }
    }
    let scale = if j0.abs() >= j1.abs() { j0 / vals[0] } else { j1 / vals[1] };
    for k in 0..n {
        out[k] = vals[k] * scale;
    }
    out
}

struct FilonTable {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// legendre[j][k] = P_k(node_j)
    legendre: Vec<Vec<f64>>,
}

fn filon_table() -> &'static FilonTable {
    static TABLE: OnceLock<FilonTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let r = gauss_legendre(FILON_ORDER);
        FilonTable {
            nodes: r.nodes.clone(),
            weights: r.weights.clone(),
            legendre: r.nodes.iter().map(|&z| legendre_values(FILON_ORDER, z)).collect(),
        }
    })
}

/// ∫_a^b h(v) e^{iωv} dv with h replaced by its degree-15 Legendre projection.
pub(crate) fn filon_panel<F: Fn(f64) -> f64>(h: &F, a: f64, b: f64, omega: f64) -> Complex64 {
    let t = filon_table();
    let m = 0.5 * (a + b);
    let hw = 0.5 * (b - a);
    let n = FILON_ORDER;
    let mut coef = [0.0f64; FILON_ORDER];
    for j in 0..n {
        let fj = h(m + hw * t.nodes[j]) * t.weights[j];
        for k in 0..n {
            coef[k] += fj * t.legendre[j][k];
        }
    }
    let kappa = omega * hw;
    let jb = spherical_bessel(n, kappa);
    let mut sum = Complex64::new(0.0, 0.0);
    // i^k cycles 1, i, -1, -i
    for k in 0..n {
        let ck = coef[k] * (2.0 * k as f64 + 1.0) * 0.5 * 2.0 * jb[k];
        sum += match k % 4 {
            0 => Complex64::new(ck, 0.0),
            1 => Complex64::new(0.0, ck),
            2 => Complex64::new(-ck, 0.0),
            _ => Complex64::new(0.0, -ck),
        };
    }
    let phase = Complex64::from_polar(1.0, omega * m);
    phase * sum * hw
}

/// Result of an oscillatory integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscResult {
    pub value: Complex64,
    pub error: f64,
    pub panels: usize,
    pub converged: bool,
}

struct FPanel {
    a: f64,
    b: f64,
    refined: Complex64,
    error: f64,
    left: Complex64,
    right: Complex64,
}

impl PartialEq for FPanel {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for FPanel {}
impl PartialOrd for FPanel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for FPanel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error).then_with(|| o.a.total_cmp(&self.a))
    }
}

fn make_panel<F: Fn(f64) -> f64>(h: &F, a: f64, b: f64, omega: f64, whole: Complex64) -> FPanel {
    let m = 0.5 * (a + b);
    let left = filon_panel(h, a, m, omega);
    let right = filon_panel(h, m, b, omega);
    let refined = left + right;
    let mut error = (refined - whole).norm();
    if !error.is_finite() {
        error = f64::INFINITY;
    }
    FPanel { a, b, refined, error, left, right }
}

/// ∫_a^b h(v) e^{iωv} dv by adaptive Filon panels (a ≤ b, finite).
pub fn filon<F: Fn(f64) -> f64>(
    h: &F,
    a: f64,
    b: f64,
    omega: f64,
    breaks: &[f64],
    q: &QuadratureConfig,
) -> OscResult {
    if !(b > a) {
        return OscResult { value: Complex64::new(0.0, 0.0), error: 0.0, panels: 0, converged: true };
    }
    let pts = cut_points(a, b, breaks);
    let mut heap = BinaryHeap::new();
    for w in pts.windows(2) {
        let whole = filon_panel(h, w[0], w[1], omega);
        heap.push(make_panel(h, w[0], w[1], omega, whole));
    }
    let limit = q.max_subdivisions.max(pts.len());
    let mut converged = true;
    loop {
        let total: Complex64 = heap.iter().map(|p| p.refined).sum();
        let err: f64 = heap.iter().map(|p| p.error).sum();
        if err <= q.abs_tol.max(q.rel_tol * total.norm()) {
            break;
        }
        if heap.len() >= limit {
            converged = false;
            break;
        }
        let p = heap.pop().expect("nonempty heap");
        let m = 0.5 * (p.a + p.b);
        if !(m > p.a && m < p.b) || (p.b - p.a) < 1e-14 * p.b.abs().max(1e-300) {
            heap.push(FPanel { error: 0.0, ..p });
            converged = false;
            continue;
        }
        heap.push(make_panel(h, p.a, m, omega, p.left));
        heap.push(make_panel(h, m, p.b, omega, p.right));
    }
    let mut panels = heap.into_vec();
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = panels.iter().map(|p| p.refined).sum();
    let error = panels.iter().map(|p| p.error).sum();
    OscResult { value, error, panels: panels.len(), converged }
}

/// Euler (binomial-average) transform of a sequence of partial sums.
pub(crate) fn euler_estimate(partials: &[f64]) -> f64 {
    let mut v = partials.to_vec();
    while v.len() > 1 {
        for i in 0..v.len() - 1 {
            v[i] = 0.5 * (v[i] + v[i + 1]);
        }
        v.pop();
    }
    v.first().copied().unwrap_or(0.0)
}

/// Where the sinc integrand lives; lets callers hand over what they know.
#[derive(Debug, Clone, Default)]
pub struct SincHints {
    /// Points (in the variable s of g) where g is not smooth.
    pub breaks: Vec<f64>,
    /// g vanishes for |s| > support.
    pub support: Option<f64>,
}

/// ∫ g(s) sin(λs)/s ds with its error budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SincResult {
    pub value: f64,
    pub error: f64,
    /// Accelerated-remainder estimate of the half-period tail.
    pub tail_error: f64,
    /// Where the tail summation began (or the support edge if there is no tail).
    pub truncation: f64,
}

/// ∫_ℝ g(s) sin(λs)/s ds.
pub fn sinc_integral<G: Fn(f64) -> f64>(g: G, lambda: f64, q: &QuadratureConfig) -> Result<SincResult> {
    sinc_integral_with(g, lambda, &SincHints::default(), q)
}

/// ∫_ℝ g(s) sin(λs)/s ds with break and support hints.
///
/// The integrand is folded onto s > 0. The first half period is integrated
/// directly, the range up to the truncation point by Filon panels, and the
/// remaining half-period lobes are summed with Euler acceleration.
pub fn sinc_integral_with<G: Fn(f64) -> f64>(
    g: G,
    lambda: f64,
    hints: &SincHints,
    q: &QuadratureConfig,
) -> Result<SincResult> {
    if lambda == 0.0 {
        return Ok(SincResult { value: 0.0, error: 0.0, tail_error: 0.0, truncation: 0.0 });
    }
    if !lambda.is_finite() {
        return Err(HausError::InvalidInput("sinc_integral needs a finite lambda".into()));
    }
    let sign = lambda.signum();
    let w = lambda.abs();
    let e = |s: f64| g(s) + g(-s);
    let mut breaks: Vec<f64> = hints.breaks.iter().map(|b| b.abs()).filter(|b| b.is_finite()).collect();
    breaks.sort_by(f64::total_cmp);
    let half = PI / w;

    let (end, has_tail) = match hints.support {
        Some(r) if r.is_finite() => (r.max(0.0), false),
        _ => {
            let s = q.oscillatory_truncation.max(breaks.last().copied().unwrap_or(0.0) + 1.0).max(half);
            ((s / half).ceil() * half, true)
        }
    };
    if end == 0.0 {
        return Ok(SincResult { value: 0.0, error: 0.0, tail_error: 0.0, truncation: 0.0 });
    }
    let s0 = half.min(end);
    let near = integrate(
        |s: f64| {
            let z = w * s;
            let sinc = if z.abs() < 1e-8 { 1.0 - z * z / 6.0 } else { z.sin() / z };
            e(s) * w * sinc
        },
        0.0,
        s0,
        &breaks,
        q,
    );
    let mut value = near.value;
    let mut error = near.error;
    if end > s0 {
        let h = |s: f64| e(s) / s;
        let mid = filon(&h, s0, end, w, &breaks, q);
        value += mid.value.im;
        error += mid.error;
    }
    let mut tail_error = 0.0;
    if has_tail {
        // The tail is cheap and smooth, so it gets the stricter of the two tolerances.
        let rel = q.rel_tol * value.abs();
        let tol = 0.5 * if rel > 0.0 { q.abs_tol.min(rel) } else { q.abs_tol };
        // Lobe quadrature noise can stall the strict target; the caller's own tolerance is the floor.
        let loose = 0.5 * q.abs_tol.max(rel);
        let lobe_q = QuadratureConfig { abs_tol: 0.01 * tol, rel_tol: q.rel_tol * 0.01, ..*q };
        let mut partials: Vec<f64> = Vec::new();
        let mut running = 0.0;
        let mut last = f64::NAN;
        let mut prev_change = f64::INFINITY;
        let mut converged = false;
        let terms = q.acceleration_terms.max(4);
        for k in 0..terms {
            let a = end + k as f64 * half;
            let lobe = integrate(|s: f64| e(s) * (w * s).sin() / s, a, a + half, &[], &lobe_q);
            error += lobe.error;
            running += lobe.value;
            partials.push(running);
            if partials.len() < 4 {
                continue;
            }
            let est = euler_estimate(&partials);
            let change = (est - last).abs();
            if change <= tol && prev_change <= tol {
                value += est;
                tail_error = change;
                converged = true;
                break;
            }
            prev_change = change;
            last = est;
        }
        if !converged {
            if !(prev_change <= loose && last.is_finite()) {
                return Err(HausError::OscillatoryTailNotConverged { terms, last_change: prev_change });
            }
            value += last;
            tail_error = prev_change;
        }
        error += tail_error;
    }
    Ok(SincResult { value: sign * value, error, tail_error, truncation: end })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tight() -> QuadratureConfig {
        QuadratureConfig { abs_tol: 1e-12, rel_tol: 1e-12, ..QuadratureConfig::default() }
    }

    #[test]
    fn spherical_bessel_against_closed_forms() {
        for &x in &[1e-4, 0.3, 2.0, 7.5, 40.0] {
            let j = spherical_bessel(4, x);
            let (s, c) = (f64::sin(x), f64::cos(x));
            let j0 = s / x;
            let j1 = s / (x * x) - c / x;
            let j2 = (3.0 / (x * x) - 1.0) * s / x - 3.0 * c / (x * x);
            assert!((j[0] - j0).abs() < 1e-12 * (1.0 + j0.abs()), "x={x}");
            assert!((j[1] - j1).abs() < 1e-10, "x={x}");
            if x > 1e-3 {
                assert!((j[2] - j2).abs() < 1e-9, "x={x}");
            }
        }
    }

    #[test]
    fn filon_matches_closed_form_moments() {
        let q = tight();
        // ∫_0^1 v e^{iωv} dv
        for &om in &[0.0, 0.5, 10.0, 1e4] {
            let r = filon(&|v: f64| v, 0.0, 1.0, om, &[], &q);
            let exact = if om == 0.0 {
                Complex64::new(0.5, 0.0)
            } else {
                let i = Complex64::new(0.0, 1.0);
                let eo = Complex64::from_polar(1.0, om);
                eo / (i * om) + (eo - 1.0) / (om * om)
            };
            assert!((r.value - exact).norm() < 1e-12, "om={om}");
        }
    }

    #[test]
    fn dirichlet_integral_is_pi() {
        let q = tight();
        for &l in &[0.1, 1.0, 3.0, 10.0, -3.0] {
            let r = sinc_integral(|_| 1.0, l, &q).unwrap();
            assert!((r.value - PI * l.signum()).abs() < 1e-9, "l={l} got {}", r.value);
        }
    }

    #[test]
    fn sine_integral_on_compact_support() {
        let q = tight();
        let hints = SincHints { breaks: vec![-1.0, 1.0], support: Some(1.0) };
        let r = sinc_integral_with(|s: f64| if s.abs() <= 1.0 { 1.0 } else { 0.0 }, 1.0, &hints, &q).unwrap();
        // 2 Si(1)
        assert!((r.value - 1.892_166_140_734_366).abs() < 1e-10);
    }
}
