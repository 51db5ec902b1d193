//! Domain types for functions, kernels, scalings and grids, plus the Lp machinery.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{HausError, Result};
use crate::quadrature::{integrate, integrate_range};

pub type RealMap = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type SpectrumMap = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;
/// (δ, p) ↦ ω(f; δ)_p, or None when no closed form is known for that p.
pub type ModulusMap = Arc<dyn Fn(f64, LebesgueExponent) -> Option<f64> + Send + Sync>;

/// An exponent 1 ≤ p ≤ ∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LebesgueExponent {
    Finite(f64),
    Infinity,
}

impl LebesgueExponent {
    pub fn finite(p: f64) -> Result<Self> {
        if p.is_finite() && p >= 1.0 {
            Ok(Self::Finite(p))
        } else if p == f64::INFINITY {
            Ok(Self::Infinity)
        } else {
            Err(HausError::InvalidInput(format!("exponent {p} is below 1")))
        }
    }

    /// Accepts "inf", "infinity", "∞" or a number ≥ 1.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "inf" || t == "infinity" || t == "∞" {
            return Ok(Self::Infinity);
        }
        let p: f64 = t.parse().map_err(|_| HausError::InvalidInput(format!("bad exponent '{s}'")))?;
        Self::finite(p)
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Self::Infinity)
    }

    pub fn value(self) -> f64 {
        match self {
            Self::Finite(p) => p,
            Self::Infinity => f64::INFINITY,
        }
    }

    /// 1/p, with 1/∞ = 0.
    pub fn reciprocal(self) -> f64 {
        match self {
            Self::Finite(p) => 1.0 / p,
            Self::Infinity => 0.0,
        }
    }
}

impl fmt::Display for LebesgueExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(p) => write!(f, "{p}"),
            Self::Infinity => write!(f, "inf"),
        }
    }
}

/// Which Lp spaces a function belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpMembership {
    /// f ∈ Lp for every finite p ≥ this value.
    pub finite_from: Option<f64>,
    pub infinity: bool,
}

impl LpMembership {
    pub const ALL: LpMembership = LpMembership { finite_from: Some(1.0), infinity: true };
    pub const BOUNDED_ONLY: LpMembership = LpMembership { finite_from: None, infinity: true };
    pub const NONE: LpMembership = LpMembership { finite_from: None, infinity: false };

    pub fn contains(&self, p: LebesgueExponent) -> bool {
        match p {
            LebesgueExponent::Infinity => self.infinity,
            LebesgueExponent::Finite(v) => self.finite_from.is_some_and(|m| v >= m),
        }
    }

    pub fn intersect(&self, o: &LpMembership) -> LpMembership {
        LpMembership {
            finite_from: match (self.finite_from, o.finite_from) {
                (Some(a), Some(b)) => Some(a.max(b)),
                _ => None,
            },
            infinity: self.infinity && o.infinity,
        }
    }
}

/// |f(x)| ≤ coeff·|x|^(−exponent) for |x| ≥ the effective radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerDecay {
    pub coeff: f64,
    pub exponent: f64,
}

/// A real function on ℝ with the metadata the integrators need.
///
/// Outside [−radius, radius], |f| ≤ tail_bound; `tail_bound == 0` means f
/// vanishes there.
#[derive(Clone)]
pub struct TestFunction {
    eval: RealMap,
    pub radius: f64,
    pub tail_bound: f64,
    pub tail_decay: Option<PowerDecay>,
    pub lp: LpMembership,
    pub analytic_ft: Option<SpectrumMap>,
    pub analytic_modulus: Option<ModulusMap>,
    /// Points where f or a low derivative is not smooth.
    pub breakpoints: Vec<f64>,
    pub label: String,
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("label", &self.label)
            .field("radius", &self.radius)
            .field("tail_bound", &self.tail_bound)
            .field("breakpoints", &self.breakpoints)
            .finish()
    }
}

impl TestFunction {
    /// A function vanishing outside [−radius, radius].
    pub fn compact(label: impl Into<String>, radius: f64, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        TestFunction {
            eval: Arc::new(eval),
            radius,
            tail_bound: 0.0,
            tail_decay: None,
            lp: LpMembership::ALL,
            analytic_ft: None,
            analytic_modulus: None,
            breakpoints: Vec::new(),
            label: label.into(),
        }
    }

    /// A function with a nonzero tail; `tail_bound` bounds |f| outside the radius.
    pub fn with_tail(
        label: impl Into<String>,
        radius: f64,
        tail_bound: f64,
        decay: Option<PowerDecay>,
        lp: LpMembership,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        TestFunction {
            eval: Arc::new(eval),
            radius,
            tail_bound,
            tail_decay: decay,
            lp,
            analytic_ft: None,
            analytic_modulus: None,
            breakpoints: Vec::new(),
            label: label.into(),
        }
    }

    pub fn breaks(mut self, b: &[f64]) -> Self {
        self.breakpoints = b.to_vec();
        self
    }

    pub fn ft(mut self, ft: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        self.analytic_ft = Some(Arc::new(ft));
        self
    }

    pub fn modulus(mut self, m: impl Fn(f64, LebesgueExponent) -> Option<f64> + Send + Sync + 'static) -> Self {
        self.analytic_modulus = Some(Arc::new(m));
        self
    }

    pub fn lp(mut self, lp: LpMembership) -> Self {
        self.lp = lp;
        self
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn evaluator(&self) -> RealMap {
        self.eval.clone()
    }

    pub fn is_compact(&self) -> bool {
        self.tail_bound == 0.0
    }

    /// Analytic modulus at (δ, p) when the function carries one.
    pub fn modulus_at(&self, delta: f64, p: LebesgueExponent) -> Option<f64> {
        self.analytic_modulus.as_ref().and_then(|m| m(delta, p))
    }

    /// c·f
    pub fn scaled(&self, c: f64) -> TestFunction {
        let e = self.eval.clone();
        let ft = self.analytic_ft.clone();
        let m = self.analytic_modulus.clone();
        TestFunction {
            eval: Arc::new(move |x| c * e(x)),
            radius: self.radius,
            tail_bound: c.abs() * self.tail_bound,
            tail_decay: self.tail_decay.map(|d| PowerDecay { coeff: c.abs() * d.coeff, ..d }),
            lp: self.lp,
            analytic_ft: ft.map(|g| Arc::new(move |y| g(y) * c) as SpectrumMap),
            analytic_modulus: m.map(|g| Arc::new(move |d, p| g(d, p).map(|v| c.abs() * v)) as ModulusMap),
            breakpoints: if c == 0.0 { Vec::new() } else { self.breakpoints.clone() },
            label: format!("{c}*{}", self.label),
        }
    }

    /// c·f + g
    pub fn combine(&self, c: f64, g: &TestFunction) -> TestFunction {
        let (e1, e2) = (self.eval.clone(), g.eval.clone());
        let ft = match (&self.analytic_ft, &g.analytic_ft) {
            (Some(a), Some(b)) => {
                let (a, b) = (a.clone(), b.clone());
                Some(Arc::new(move |y| a(y) * c + b(y)) as SpectrumMap)
            }
            _ => None,
        };
        let decay = match (self.is_compact(), g.is_compact(), self.tail_decay, g.tail_decay) {
            (true, true, _, _) => None,
            (true, false, _, d) => d,
            (false, true, d, _) => d.map(|d| PowerDecay { coeff: c.abs() * d.coeff, ..d }),
            (false, false, Some(a), Some(b)) => {
                Some(PowerDecay { coeff: c.abs() * a.coeff + b.coeff, exponent: a.exponent.min(b.exponent) })
            }
            _ => None,
        };
        let mut bp = self.breakpoints.clone();
        bp.extend_from_slice(&g.breakpoints);
        bp.sort_by(f64::total_cmp);
        bp.dedup();
        TestFunction {
            eval: Arc::new(move |x| c * e1(x) + e2(x)),
            radius: self.radius.max(g.radius),
            tail_bound: c.abs() * self.tail_bound + g.tail_bound,
            tail_decay: decay,
            lp: self.lp.intersect(&g.lp),
            analytic_ft: ft,
            analytic_modulus: None,
            breakpoints: bp,
            label: format!("{c}*{}+{}", self.label, g.label),
        }
    }

    /// τ_y f = f(· + y)
    pub fn shifted(&self, y: f64) -> TestFunction {
        let e = self.eval.clone();
        let ft = self.analytic_ft.clone();
        TestFunction {
            eval: Arc::new(move |x| e(x + y)),
            radius: (self.radius + y.abs()).max(if self.is_compact() { 0.0 } else { 2.0 * y.abs() }),
            tail_bound: self.tail_bound,
            tail_decay: self.tail_decay.map(|d| PowerDecay { coeff: d.coeff * 2f64.powf(d.exponent), ..d }),
            lp: self.lp,
            analytic_ft: ft.map(|g| Arc::new(move |w| g(w) * Complex64::from_polar(1.0, y * w)) as SpectrumMap),
            analytic_modulus: self.analytic_modulus.clone(),
            breakpoints: self.breakpoints.iter().map(|b| b - y).collect(),
            label: format!("shift({},{y})", self.label),
        }
    }

    /// f(λ·) for λ ≠ 0.
    pub fn dilated(&self, lambda: f64) -> TestFunction {
        assert!(lambda != 0.0 && lambda.is_finite());
        let e = self.eval.clone();
        let ft = self.analytic_ft.clone();
        let m = self.analytic_modulus.clone();
        let l = lambda.abs();
        TestFunction {
            eval: Arc::new(move |x| e(lambda * x)),
            radius: self.radius / l,
            tail_bound: self.tail_bound,
            tail_decay: self.tail_decay.map(|d| PowerDecay { coeff: d.coeff * l.powf(-d.exponent), ..d }),
            lp: self.lp,
            analytic_ft: ft.map(|g| Arc::new(move |w| g(w / lambda) / l) as SpectrumMap),
            analytic_modulus: m.map(|g| {
                Arc::new(move |d, p: LebesgueExponent| g(l * d, p).map(|v| v * l.powf(-p.reciprocal()))) as ModulusMap
            }),
            breakpoints: self.breakpoints.iter().map(|b| b / lambda).collect(),
            label: format!("dilate({},{lambda})", self.label),
        }
    }

    /// f(· + h) − f, used by the modulus estimators.
    pub(crate) fn difference(&self, h: f64) -> TestFunction {
        let e = self.eval.clone();
        let mut bp: Vec<f64> = self.breakpoints.clone();
        bp.extend(self.breakpoints.iter().map(|b| b - h));
        bp.sort_by(f64::total_cmp);
        TestFunction {
            eval: Arc::new(move |x| e(x + h) - e(x)),
            radius: self.radius + h.abs(),
            tail_bound: 2.0 * self.tail_bound,
            tail_decay: self.tail_decay.map(|d| PowerDecay { coeff: 2.0 * d.coeff * 2f64.powf(d.exponent), ..d }),
            lp: self.lp,
            analytic_ft: None,
            analytic_modulus: None,
            breakpoints: bp,
            label: format!("diff({},{h})", self.label),
        }
    }
}

/// Decay class of a kernel φ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayClass {
    Compact,
    /// |φ(t)| ≲ |t|^(−β) at infinity.
    Power(f64),
    None,
}

/// The kernel φ of a Hausdorff operator.
#[derive(Clone)]
pub struct KernelSpec {
    eval: RealMap,
    /// Support interval (lo, hi); either end may be infinite.
    pub support: (f64, f64),
    pub decay: DecayClass,
    pub total_mass: Option<f64>,
    /// Interior points where φ is not smooth.
    pub breakpoints: Vec<f64>,
    pub label: String,
}

impl fmt::Debug for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KernelSpec").field("label", &self.label).field("support", &self.support).finish()
    }
}

impl KernelSpec {
    pub fn new(
        label: impl Into<String>,
        support: (f64, f64),
        decay: DecayClass,
        total_mass: Option<f64>,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let (lo, hi) = support;
        if !(lo < hi) {
            return Err(HausError::InvalidInput(format!("empty kernel support ({lo}, {hi})")));
        }
        if decay == DecayClass::Compact && !(lo.is_finite() && hi.is_finite()) {
            return Err(HausError::InvalidInput("compact kernel needs a bounded support".into()));
        }
        Ok(KernelSpec { eval: Arc::new(eval), support, decay, total_mass, breakpoints: Vec::new(), label: label.into() })
    }

    /// φ(t), zero outside the declared support.
    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        if t > self.support.0 && t < self.support.1 {
            (self.eval)(t)
        } else {
            0.0
        }
    }

    /// Parts of the support on t > 0 and t < 0, the latter mirrored to positive t.
    pub(crate) fn positive_parts(&self) -> (Option<(f64, f64)>, Option<(f64, f64)>) {
        let (lo, hi) = self.support;
        let pos = if hi > 0.0 { Some((lo.max(0.0), hi)) } else { None };
        let neg = if lo < 0.0 { Some(((-hi).max(0.0), -lo)) } else { None };
        (pos, neg)
    }

    /// ∫φ, from the declared value or by quadrature.
    pub fn mass(&self, q: &QuadratureConfig) -> Result<f64> {
        if let Some(m) = self.total_mass {
            return Ok(m);
        }
        let (lo, hi) = self.support;
        Ok(integrate_range(|t| self.eval(t), lo, hi, &self.breakpoints, q)?.value)
    }
}

/// The odd scaling a(t), |a| decreasing and bijective on (0, ∞).
#[derive(Clone)]
pub struct ScalingSpec {
    eval: RealMap,
    inv: RealMap,
    inv_derivative: Option<RealMap>,
    pub witness: Vec<f64>,
    pub label: String,
}

impl fmt::Debug for ScalingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalingSpec").field("label", &self.label).finish()
    }
}

fn default_witness() -> Vec<f64> {
    (-24..=24).map(|k| 2f64.powf(k as f64 / 4.0)).collect()
}

impl ScalingSpec {
    pub fn new(
        label: impl Into<String>,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        inv: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        ScalingSpec {
            eval: Arc::new(eval),
            inv: Arc::new(inv),
            inv_derivative: None,
            witness: default_witness(),
            label: label.into(),
        }
    }

    /// a(t) = sign(t)·|t|^(−k), k > 0.
    pub fn power(k: f64) -> Self {
        assert!(k > 0.0);
        ScalingSpec {
            eval: Arc::new(move |t: f64| t.signum() * t.abs().powf(-k)),
            inv: Arc::new(move |u: f64| u.signum() * u.abs().powf(-1.0 / k)),
            inv_derivative: Some(Arc::new(move |u: f64| -(1.0 / k) * u.abs().powf(-1.0 / k - 1.0))),
            witness: default_witness(),
            label: if k == 1.0 { "1/t".into() } else { format!("t^-{k}") },
        }
    }

    /// a(t) = 1/t.
    pub fn reciprocal() -> Self {
        Self::power(1.0)
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    #[inline]
    pub fn inv(&self, u: f64) -> f64 {
        (self.inv)(u)
    }

    /// d/du inv(u), analytic when provided, else a central difference.
    pub fn inv_derivative(&self, u: f64) -> f64 {
        match &self.inv_derivative {
            Some(d) => d(u),
            None => {
                let h = 1e-6 * u.abs().max(1e-8);
                (self.inv(u + h) - self.inv(u - h)) / (2.0 * h)
            }
        }
    }
}

/// Outcome of [`validate_scaling`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub passed: bool,
    /// First violation found: (which invariant, grid point).
    pub failure: Option<(ScalingViolation, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingViolation {
    Oddness,
    Monotonicity,
    Positivity,
    RoundTrip,
}

/// Checks oddness, positivity and strict decrease of |a|, and inv∘a / a∘inv round trips.
pub fn validate_scaling(a: &ScalingSpec) -> ScalingReport {
    let fail = |v, t| ScalingReport { passed: false, failure: Some((v, t)) };
    let mut pos: Vec<f64> = a.witness.iter().copied().filter(|t| *t > 0.0).collect();
    pos.sort_by(f64::total_cmp);
    for &t in &a.witness {
        let (p, m) = (a.eval(t), a.eval(-t));
        if !(p.is_finite() && m.is_finite()) || (p + m).abs() > 1e-12 * p.abs().max(m.abs()).max(1e-300) {
            return fail(ScalingViolation::Oddness, t);
        }
    }
    let mut prev = f64::INFINITY;
    for &t in &pos {
        let v = a.eval(t);
        if !(v > 0.0) {
            return fail(ScalingViolation::Positivity, t);
        }
        if !(v < prev) {
            return fail(ScalingViolation::Monotonicity, t);
        }
        prev = v;
    }
    for &t in &pos {
        let u = a.eval(t);
        let back = a.inv(u);
        if !((back - t).abs() <= 1e-10 * t.abs().max(1e-300)) {
            return fail(ScalingViolation::RoundTrip, t);
        }
        let u2 = t; // reuse the witness values as a u-grid
        if (a.eval(a.inv(u2)) - u2).abs() > 1e-10 * (1.0 + u2.abs()) {
            return fail(ScalingViolation::RoundTrip, u2);
        }
    }
    ScalingReport { passed: true, failure: None }
}

/// Role of a [`GridSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridRole {
    X,
    NLadder,
    H,
    S,
}

/// A strictly increasing, nonempty list of sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    points: Vec<f64>,
    pub role: GridRole,
}

impl GridSpec {
    pub fn new(points: Vec<f64>, role: GridRole) -> Result<Self> {
        if points.is_empty() {
            return Err(HausError::InvalidInput("empty grid".into()));
        }
        if points.iter().any(|x| !x.is_finite()) || points.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(HausError::InvalidInput("grid must be finite and strictly increasing".into()));
        }
        Ok(GridSpec { points, role })
    }

    /// n ≥ 2 equally spaced points on [lo, hi].
    pub fn uniform(lo: f64, hi: f64, n: usize, role: GridRole) -> Result<Self> {
        if n < 2 {
            return Self::new(vec![lo], role);
        }
        let pts = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
        Self::new(pts, role)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Tolerances and limits for every integrator in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Lower bound on where sinc-integral tails start; 0 lets the integrand decide.
    pub oscillatory_truncation: f64,
    /// Maximum number of half-period lobes fed to the tail accelerator.
    pub acceleration_terms: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-8,
            rel_tol: 1e-6,
            max_subdivisions: 500,
            oscillatory_truncation: 0.0,
            acceleration_terms: 120,
        }
    }
}

impl QuadratureConfig {
    /// Defaults with the relative tolerance relaxed for oscillatory paths.
    pub fn oscillatory() -> Self {
        QuadratureConfig { rel_tol: 1e-4, ..Self::default() }
    }

    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Self {
        QuadratureConfig { abs_tol, rel_tol, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.max_subdivisions >= 1) {
            return Err(HausError::InvalidInput("tolerances must be positive and max_subdivisions ≥ 1".into()));
        }
        Ok(())
    }
}

/// Largest |f| over [lo, hi]: a grid including the break points, a second
/// grid at double density, then golden-section refinement around the winner.
pub(crate) fn sup_abs(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, breaks: &[f64]) -> f64 {
    if !(hi > lo) {
        return f(lo).abs();
    }
    let n = 2048;
    let mut pts: Vec<f64> = (0..=2 * n).map(|i| lo + (hi - lo) * i as f64 / (2 * n) as f64).collect();
    for &b in breaks {
        if b >= lo && b <= hi {
            pts.push(b);
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut best = 0.0f64;
    let mut arg = lo;
    for &x in &pts {
        let v = f(x).abs();
        if v > best {
            best = v;
            arg = x;
        }
    }
    // Golden-section search on each side of the best grid point.
    let step = (hi - lo) / (2 * n) as f64;
    for (a0, b0) in [(arg - step, arg), (arg, arg + step)] {
        let (mut a, mut b) = (a0.max(lo), b0.min(hi));
        let g = 0.618_033_988_749_894_9;
        for _ in 0..60 {
            let c = b - g * (b - a);
            let d = a + g * (b - a);
            let (fc, fd) = (f(c).abs(), f(d).abs());
            best = best.max(fc).max(fd);
            if fc > fd {
                b = d;
            } else {
                a = c;
            }
        }
    }
    best
}

/// ‖f‖_p over ℝ with its error estimate (the tail bound enters the estimate).
pub fn lp_norm_with_error(f: &TestFunction, p: LebesgueExponent, q: &QuadratureConfig) -> Result<(f64, f64)> {
    if !f.lp.contains(p) {
        return Err(HausError::TailNotIntegrable(format!("{} is not declared in L^{p}", f.label)));
    }
    let r = f.radius;
    match p {
        LebesgueExponent::Infinity => {
            let v = sup_abs(&|x| f.eval(x), -r, r, &f.breakpoints);
            Ok((v, 0.0))
        }
        LebesgueExponent::Finite(pv) => {
            let tail = if f.is_compact() {
                0.0
            } else {
                match f.tail_decay {
                    Some(d) if d.exponent * pv > 1.0 => {
                        2.0 * d.coeff.powf(pv) * r.powf(1.0 - d.exponent * pv) / (d.exponent * pv - 1.0)
                    }
                    _ => {
                        return Err(HausError::TailNotIntegrable(format!(
                            "{}: decay data does not give an integrable |f|^{pv} tail",
                            f.label
                        )))
                    }
                }
            };
            let res = integrate(|x| f.eval(x).abs().powf(pv), -r, r, &f.breakpoints, q);
            let v = res.value.max(0.0);
            let norm = v.powf(1.0 / pv);
            let err = if v > 0.0 { norm * (res.error + tail) / (pv * v) } else { (res.error + tail).powf(1.0 / pv) };
            Ok((norm, err))
        }
    }
}

/// ‖f‖_p over ℝ.
pub fn lp_norm(f: &TestFunction, p: LebesgueExponent, q: &QuadratureConfig) -> Result<f64> {
    lp_norm_with_error(f, p, q).map(|(v, _)| v)
}

/// ∫ f·g over ℝ.
pub fn inner_product(f: &TestFunction, g: &TestFunction, q: &QuadratureConfig) -> Result<f64> {
    let mut bp = f.breakpoints.clone();
    bp.extend_from_slice(&g.breakpoints);
    let r = match (f.is_compact(), g.is_compact()) {
        (true, true) => f.radius.min(g.radius),
        (true, false) => f.radius,
        (false, true) => g.radius,
        (false, false) => {
            let beta = |h: &TestFunction| h.tail_decay.map(|d| d.exponent).unwrap_or(0.0);
            if beta(f) + beta(g) <= 1.0 {
                return Err(HausError::TailNotIntegrable(format!(
                    "product of {} and {} has no integrable tail",
                    f.label, g.label
                )));
            }
            f.radius.max(g.radius)
        }
    };
    Ok(integrate(|x| f.eval(x) * g.eval(x), -r, r, &bp, q).value)
}
