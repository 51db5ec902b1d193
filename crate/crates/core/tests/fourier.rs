use std::f64::consts::PI;

use haus_core::catalog::{self, bellman, cesaro, fejer, gaussian, indicator, riemann_liouville, tent};
use haus_core::fourier::{
    adjoint_variant_approximant, adjoint_variant_approximant_with, approximant, fourier_transform,
    fourier_transform_numeric, function_recovery, truncated_approximant, truncated_approximant_direct,
    truncated_approximant_with, Representation, Target,
};
use haus_core::quadrature::{sinc_integral, sinc_integral_with, SincHints};
use haus_core::{adjoint_apply, cesaro_closed_form, hausdorff_apply, GridRole, GridSpec, HausError, QuadratureConfig};
use proptest::prelude::*;

fn osc() -> QuadratureConfig {
    QuadratureConfig::oscillatory()
}

fn grid(xs: &[f64]) -> GridSpec {
    GridSpec::new(xs.to_vec(), GridRole::X).unwrap()
}

/// Si(x) from its power series.
fn si(x: f64) -> f64 {
    let mut term = x;
    let mut sum = 0.0;
    for k in 0..40 {
        sum += term / (2 * k + 1) as f64;
        term *= -x * x / ((2 * k + 2) * (2 * k + 3)) as f64;
    }
    sum
}

#[test]
fn transform_examples() {
    let q = QuadratureConfig::default();
    assert!((fourier_transform(&indicator(-1.0, 1.0), 0.0, &q).unwrap().re - 2.0).abs() < 1e-12);
    assert!((fourier_transform(&tent(), 0.0, &q).unwrap().re - 1.0).abs() < 1e-12);
    for y in [1.0f64, 2.0, 5.0] {
        let (v, _) = fourier_transform_numeric(&tent(), y, &q).unwrap();
        let exact = ((y / 2.0).sin() / (y / 2.0)).powi(2);
        assert!((v.re - exact).abs() < 1e-8 && v.im.abs() < 1e-8, "y={y}: {v}");
    }
    // e^{−x²/2} ↦ √(2π) e^{−y²/2}
    for y in [0.0f64, 0.7, 2.0] {
        let (v, _) = fourier_transform_numeric(&gaussian(), y, &q).unwrap();
        assert!((v.re - (2.0 * PI).sqrt() * (-y * y / 2.0).exp()).abs() < 1e-7);
    }
}

#[test]
fn shifted_transform_picks_up_a_phase() {
    let q = QuadratureConfig::default();
    let f = tent().shifted(0.4);
    for y in [0.5, 3.0] {
        let (numeric, _) = fourier_transform_numeric(&f, y, &q).unwrap();
        let analytic = fourier_transform(&f, y, &q).unwrap();
        assert!((numeric - analytic).norm() < 1e-8);
    }
}

#[test]
fn sinc_examples() {
    let q = QuadratureConfig::default();
    assert!((sinc_integral(|_| 1.0, 3.0, &q).unwrap().value - PI).abs() < 1e-6);
    assert!((sinc_integral(|_| 1.0, -3.0, &q).unwrap().value + PI).abs() < 1e-6);
    let hints = SincHints { breaks: vec![-1.0, 1.0], support: Some(1.0) };
    let chi = |s: f64| if s.abs() <= 1.0 { 1.0 } else { 0.0 };
    let v = sinc_integral_with(chi, 1.0, &hints, &q).unwrap().value;
    assert!((v - 2.0 * si(1.0)).abs() < 1e-9, "{v}");
    assert!((2.0 * si(1.0) - 1.8921661407343662).abs() < 1e-12);
}

#[test]
fn sinc_normalization_on_symmetric_lambdas() {
    let q = QuadratureConfig::with_tolerances(1e-12, 1e-10);
    for lambda in [0.1, -0.1, 1.0, -1.0, 10.0, -10.0] {
        let v = sinc_integral(|_| 1.0, lambda, &q).unwrap().value;
        assert!((v - PI * f64::signum(lambda)).abs() <= 1e-8, "lambda {lambda}: {v}");
    }
}

#[test]
fn band_limited_input_is_reproduced() {
    let q = osc();
    let f = fejer();
    let a = truncated_approximant(&cesaro(), &f, 2.0, &grid(&[1.0]), &q).unwrap();
    let exact = cesaro_closed_form(&f, 1.0, &QuadratureConfig::default()).unwrap();
    assert!((a.values[0] - exact).abs() < 1e-3);
    // Same support argument for Riemann–Liouville: φ lives on (0, 1).
    let rl = riemann_liouville(1.0).unwrap();
    let xs = [-2.0, 0.5, 3.0];
    let a = truncated_approximant(&rl, &f, 1.0, &grid(&xs), &q).unwrap();
    for (x, v) in xs.iter().zip(&a.values) {
        let e = adjoint_apply(&rl, &f, *x, &QuadratureConfig::default()).unwrap();
        assert!((v - e).abs() < 1e-3, "x={x}: {v} vs {e}");
    }
}

#[test]
fn direct_spectral_examples() {
    let q = osc();
    let f = fejer();
    assert_eq!(truncated_approximant_direct(&cesaro(), &f, 0.0, 0.3, &q).unwrap(), 0.0);
    let v = truncated_approximant_direct(&cesaro(), &f, 1.5, 0.0, &q).unwrap();
    assert!((v - 1.0 / (2.0 * PI)).abs() < 1e-3, "{v}");
    let t = tent();
    let one = truncated_approximant_direct(&cesaro(), &t, 8.0, 0.6, &q).unwrap();
    let three = truncated_approximant_direct(&cesaro(), &t.scaled(3.0), 8.0, 0.6, &q).unwrap();
    assert!((three - 3.0 * one).abs() < 1e-8 * (1.0 + one.abs()));
}

#[test]
fn substituted_matches_direct_on_tent() {
    let q = osc();
    let sub = truncated_approximant(&cesaro(), &tent(), 64.0, &grid(&[0.5]), &q).unwrap().values[0];
    let dir = truncated_approximant_direct(&cesaro(), &tent(), 64.0, 0.5, &q).unwrap();
    assert!((sub - dir).abs() < 2e-3, "{sub} vs {dir}");
}

#[test]
fn three_representations_agree() {
    let q = osc();
    let xs = [-1.2, 0.3, 0.9, 2.5];
    for (op, f) in [(cesaro(), tent()), (riemann_liouville(0.5).unwrap(), gaussian()), (bellman(), tent())] {
        let s = truncated_approximant_with(&op, &f, 12.0, &grid(&xs), Representation::Substituted, &q).unwrap();
        let c = truncated_approximant_with(&op, &f, 12.0, &grid(&xs), Representation::Convolution, &q).unwrap();
        for (a, b) in s.values.iter().zip(&c.values) {
            assert!((a - b).abs() < 1e-4, "{}: {a} vs {b}", op.name);
        }
    }
}

#[test]
fn forward_target_representations_agree() {
    let q = osc();
    let f = catalog::mollified_indicator(1.0, 2.0, 0.1);
    let xs = [0.8, 1.0, 1.7];
    let s = adjoint_variant_approximant_with(&bellman(), &f, 16.0, &grid(&xs), Representation::Substituted, &q).unwrap();
    let c = adjoint_variant_approximant_with(&bellman(), &f, 16.0, &grid(&xs), Representation::Convolution, &q).unwrap();
    for (a, b) in s.values.iter().zip(&c.values) {
        assert!((a - b).abs() < 1e-4, "{a} vs {b}");
    }
}

#[test]
fn zero_input_gives_zero_approximants() {
    let q = osc();
    let z = catalog::zero();
    let g = grid(&[-1.0, 0.0, 2.0]);
    for rep in [Representation::Substituted, Representation::Convolution] {
        for target in [Target::Adjoint, Target::Forward] {
            let a = approximant(&cesaro(), &z, 8.0, &g, target, rep, &q).unwrap();
            assert!(a.values.iter().all(|v| *v == 0.0));
        }
    }
    assert!(adjoint_variant_approximant(&cesaro(), &z, 8.0, &g, &q).unwrap().values.iter().all(|v| *v == 0.0));
}

#[test]
fn forward_approximant_approaches_hausdorff_value() {
    let q = osc();
    let f = catalog::mollified_indicator(1.0, 2.0, 0.1);
    let v = adjoint_variant_approximant(&cesaro(), &f, 256.0, &grid(&[1.0]), &q).unwrap().values[0];
    let exact = hausdorff_apply(&cesaro(), &f, 1.0, &QuadratureConfig::default()).unwrap();
    assert!((exact - 2f64.ln()).abs() < 5e-2);
    assert!((v - exact).abs() < 5e-2, "{v} vs {exact}");
}

#[test]
fn forward_target_of_a_constant_diverges_for_cesaro() {
    let q = osc();
    let e = adjoint_variant_approximant(&cesaro(), &catalog::constant(1.0), 64.0, &grid(&[0.0]), &q).unwrap_err();
    assert!(matches!(e, HausError::DivergentIntegral(_)), "{e:?}");
    let e = hausdorff_apply(&cesaro(), &catalog::plateau(1.0, 1000.0), 0.0, &q).unwrap_err();
    assert!(matches!(e, HausError::DivergentIntegral(_)), "{e:?}");
}

#[test]
fn recovery_examples() {
    let q = osc();
    let p = catalog::plateau(2.5, 1000.0);
    let r = function_recovery(&cesaro(), &p, 16.0, &grid(&[-3.0, 0.0, 4.0]), &q).unwrap();
    assert!(r.values.iter().all(|v| (v - 2.5).abs() < 1e-3), "{:?}", r.values);
    let v = function_recovery(&cesaro(), &tent(), 256.0, &grid(&[0.0]), &q).unwrap().values[0];
    assert!((v - 1.0).abs() < 5e-2);
    let a = function_recovery(&cesaro(), &tent(), 32.0, &grid(&[0.3]), &q).unwrap().values[0];
    let b = function_recovery(&cesaro(), &tent().shifted(0.3), 32.0, &grid(&[0.0]), &q).unwrap().values[0];
    assert!((a - b).abs() < 1e-8);
}

#[test]
fn recovery_needs_unit_mass() {
    let e = function_recovery(&riemann_liouville(1.0).unwrap(), &tent(), 8.0, &grid(&[0.0]), &osc()).unwrap_err();
    assert!(matches!(e, HausError::KernelMassNotOne(m) if (m - 0.5).abs() < 1e-12));
}

#[test]
fn nonpositive_truncation_is_rejected() {
    let e = truncated_approximant(&cesaro(), &tent(), 0.0, &grid(&[0.0]), &osc()).unwrap_err();
    assert!(matches!(e, HausError::InvalidInput(_)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn approximant_is_linear(c in -2.0f64..2.0, s in -0.8f64..0.8, n in 2.0f64..24.0, x in -2.0f64..2.0) {
        let q = QuadratureConfig::with_tolerances(1e-12, 1e-10);
        let (f, g) = (tent(), gaussian().shifted(s));
        let gr = grid(&[x]);
        let lhs = truncated_approximant(&cesaro(), &f.combine(c, &g), n, &gr, &q).unwrap().values[0];
        let a = truncated_approximant(&cesaro(), &f, n, &gr, &q).unwrap().values[0];
        let b = truncated_approximant(&cesaro(), &g, n, &gr, &q).unwrap().values[0];
        prop_assert!((lhs - (c * a + b)).abs() <= 1e-8 * (1.0 + lhs.abs()), "{lhs} vs {}", c * a + b);
    }
}
