use haus_core::catalog::{self, bellman, cesaro, tent};
use haus_core::experiments::{
    approximate_identity_study, bellman_divergence_demo, convergence_study, fejer_convolution, fit_rate,
    recovery_study, truncated_tail_ladder,
};
use haus_core::fourier::Target;
use haus_core::{GridRole, GridSpec, HausError, LebesgueExponent, QuadratureConfig};

const INF: LebesgueExponent = LebesgueExponent::Infinity;

fn osc() -> QuadratureConfig {
    QuadratureConfig::oscillatory()
}

fn ladder(v: &[f64]) -> GridSpec {
    GridSpec::new(v.to_vec(), GridRole::NLadder).unwrap()
}

#[test]
fn fit_rate_recovers_power_laws() {
    let n = [8.0, 16.0, 32.0, 64.0, 128.0];
    let e: Vec<f64> = n.iter().map(|x: &f64| 3.0 * x.powf(-0.7)).collect();
    let f = fit_rate(&n, &e).unwrap();
    assert!((f.slope + 0.7).abs() < 1e-12);
    assert!((f.intercept - 3f64.ln()).abs() < 1e-10);
    // ±2% multiplicative wobble moves the slope by at most 2·ln(1.02/0.98)/ln 16.
    let wobble = [1.02, 0.98, 1.02, 0.98, 1.02];
    let noisy: Vec<f64> = e.iter().zip(wobble).map(|(v, w)| v * w).collect();
    let f = fit_rate(&n, &noisy).unwrap();
    assert!((f.slope + 0.7).abs() < 2.0 * (1.02f64 / 0.98).ln() / 16f64.ln());
    assert!(f.r_squared > 0.99);
}

#[test]
fn fit_rate_rejects_bad_input() {
    assert!(matches!(fit_rate(&[1.0, 2.0], &[1.0, 0.5]), Err(HausError::InvalidInput(_))));
    assert!(matches!(fit_rate(&[1.0, 2.0, 4.0], &[1.0, 0.5]), Err(HausError::InvalidInput(_))));
    assert_eq!(fit_rate(&[1.0, 2.0, 4.0], &[1.0, 1e-13, 0.2]), Err(HausError::DegenerateZeroError));
}

#[test]
fn zero_function_gives_degenerate_studies() {
    let q = osc();
    let z = catalog::zero();
    let lad = ladder(&[8.0, 16.0, 32.0, 64.0]);
    let r = convergence_study(&cesaro(), &z, Target::Adjoint, INF, &lad, &q).unwrap();
    assert!(r.errors.iter().all(|e| *e == 0.0));
    assert!(r.bound_values.iter().all(|b| *b == 0.0));
    assert_eq!(r.slope(), Err(HausError::DegenerateZeroError));
    let r = approximate_identity_study(&z, INF, &lad, &q).unwrap();
    assert_eq!(r.slope(), Err(HausError::DegenerateZeroError));
}

#[test]
fn short_ladders_are_rejected() {
    let e = convergence_study(&cesaro(), &tent(), Target::Adjoint, INF, &ladder(&[8.0, 16.0, 32.0]), &osc());
    assert!(e.is_err());
}

#[test]
fn cesaro_tent_sup_study_is_dominated_by_its_bound() {
    let r = convergence_study(&cesaro(), &tent(), Target::Adjoint, INF, &ladder(&[8.0, 16.0, 32.0, 64.0]), &osc())
        .unwrap();
    for (e, b) in r.errors.iter().zip(&r.bound_values) {
        assert!(e <= b, "{e} > {b}");
    }
    assert!(r.slope().unwrap() <= -0.8, "{:?}", r.errors);
    assert!(r.predicted_slope < 0.0);
}

/// F_r * tent at 0 by a plain midpoint sum of ∫ (1 − cos w)/(π w²)(1 − |w|/r) dw.
fn fejer_tent_at_zero(r: f64) -> f64 {
    let n = 400_000;
    let h = r / n as f64;
    let s: f64 = (0..n)
        .map(|i| {
            let w = (i as f64 + 0.5) * h;
            (1.0 - w.cos()) / (std::f64::consts::PI * w * w) * (1.0 - w / r)
        })
        .sum();
    2.0 * s * h
}

#[test]
fn fejer_convolution_against_midpoint_oracle() {
    let q = QuadratureConfig::default();
    for r in [2.0, 10.0, 60.0] {
        let v = fejer_convolution(&tent(), r, 0.0, &q).unwrap();
        let o = fejer_tent_at_zero(r);
        assert!((v - o).abs() < 1e-6, "r={r}: {v} vs {o}");
    }
    let far = fejer_convolution(&tent(), 500.0, 0.0, &q).unwrap();
    assert!((1.0 - far) < 0.02 && far < 1.0);
    assert!(fejer_convolution(&tent(), 0.0, 0.0, &q).is_err());
}

#[test]
fn fejer_study_ratio_stays_bounded_on_tent() {
    let r = approximate_identity_study(&tent(), INF, &ladder(&[8.0, 32.0, 128.0, 512.0]), &QuadratureConfig::default())
        .unwrap();
    let ratios = r.log_corrected_ratio.clone().unwrap();
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
    assert!(hi / lo < 3.0, "{ratios:?}");
    // At the peak of the tent the bound is attained, so only quadrature slack separates them.
    for (e, b) in r.errors.iter().zip(&r.bound_values) {
        assert!(*e <= b * (1.0 + 1e-5), "{e} > {b}");
    }
}

#[test]
fn bellman_term_with_constant_modulus() {
    // 2∫_{1/S}^{S} (c/s) ∫_{max(1,s)}^{S} t⁻¹ dt ds = 3c(ln S)².
    let c = 0.3;
    let s = [4.0, 16.0, 64.0, 256.0];
    let b = bellman_divergence_demo(&ladder(&s), &|_| c, &QuadratureConfig::default()).unwrap();
    for (sv, v) in b {
        let exact = 3.0 * c * sv.ln().powi(2);
        assert!((v - exact).abs() < 1e-6 * exact, "S={sv}: {v} vs {exact}");
    }
    let z = bellman_divergence_demo(&ladder(&s), &|_| 0.0, &QuadratureConfig::default()).unwrap();
    assert!(z.iter().all(|(_, v)| *v == 0.0));
}

#[test]
fn cesaro_truncated_term_saturates() {
    let q = QuadratureConfig::default();
    let m = |d: f64| d.min(1.0);
    let v = truncated_tail_ladder(&cesaro(), &ladder(&[4.0, 16.0, 64.0, 256.0, 1024.0]), &m, &q).unwrap();
    let b = truncated_tail_ladder(&bellman(), &ladder(&[4.0, 16.0, 64.0, 256.0, 1024.0]), &m, &q).unwrap();
    // Closed form 2[(1 − 1/S) − (1 − 1/S²)/2].
    for (sv, val) in &v {
        let exact = 2.0 * ((1.0 - 1.0 / sv) - 0.5 * (1.0 - 1.0 / (sv * sv)));
        assert!((val - exact).abs() < 1e-6, "S={sv}: {val} vs {exact}");
    }
    assert!((v[4].1 - 1.0).abs() < 5e-3, "{v:?}");
    assert!(b[4].1 > 10.0 * v[4].1);
}

#[test]
fn recovery_of_a_plateau_sits_at_the_floor() {
    let q = osc();
    let y = GridSpec::uniform(-2.0, 2.0, 9, GridRole::X).unwrap();
    let r = recovery_study(&cesaro(), &catalog::plateau(2.5, 1000.0), &ladder(&[8.0, 16.0, 32.0, 64.0]), &y, &q)
        .unwrap();
    assert!(r.errors.iter().all(|e| *e < 1e-3), "{:?}", r.errors);
}

#[test]
fn recovery_of_tent_is_dominated() {
    let q = osc();
    let y = GridSpec::uniform(-2.0, 2.0, 21, GridRole::X).unwrap();
    let r = recovery_study(&cesaro(), &tent(), &ladder(&[8.0, 16.0, 32.0, 64.0]), &y, &q).unwrap();
    for (e, b) in r.errors.iter().zip(&r.bound_values) {
        assert!(e <= b, "{e} > {b}");
    }
    assert!(r.slope().unwrap() < -0.5);
}
