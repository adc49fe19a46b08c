use std::collections::BTreeMap;

use commbound::periodic::{
    builtin_bump, builtin_triangle, chebyshev_radius, fourier_coefficient, quadrature_coefficient, truncate,
    PeriodicFunction, TrigPolynomial,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn poly_strategy() -> impl Strategy<Value = Vec<(f64, f64)>> {
    (0usize..6).prop_flat_map(|n| prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 2 * n + 1))
}

fn poly(raw: &[(f64, f64)]) -> TrigPolynomial {
    TrigPolynomial::from_symmetric(raw.iter().map(|&(re, im)| Complex64::new(re, im)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parseval(raw in poly_strategy()) {
        let p = poly(&raw);
        let q = p.clone();
        let sq = PeriodicFunction::new("|p|^2", true, move |x| Complex64::new(q.evaluate(x).norm_sqr(), 0.0));
        let integral = quadrature_coefficient(&sq, 0, 1 << 10, 1e-12).unwrap().re;
        let energy: f64 = p.coefficients().map(|(_, a)| a.norm_sqr()).sum();
        prop_assert!((integral - energy).abs() < 1e-10, "{integral} vs {energy}");
    }

    #[test]
    fn derivative_norm_is_homogeneous(raw in poly_strategy(), re in -3.0..3.0f64, im in -3.0..3.0f64) {
        let p = poly(&raw);
        let c = Complex64::new(re, im);
        let lhs = p.scale(c).derivative_fourier_norm();
        let rhs = c.norm() * p.derivative_fourier_norm();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
    }

    #[test]
    fn chebyshev_radius_shift_invariant(shift in -5.0..5.0f64, which in 0usize..2) {
        let f = if which == 0 { builtin_triangle() } else { builtin_bump() };
        let g = f.plus_constant(Complex64::new(shift, 0.0));
        let (a, b) = (chebyshev_radius(&f, 1 << 14).unwrap(), chebyshev_radius(&g, 1 << 14).unwrap());
        prop_assert!((a - b).abs() < 1e-8);
    }

    #[test]
    fn complex_chebyshev_radius_shift_invariant(raw in poly_strategy(), re in -2.0..2.0f64, im in -2.0..2.0f64) {
        let f = poly(&raw).to_function("p");
        let g = f.plus_constant(Complex64::new(re, im));
        let (a, b) = (chebyshev_radius(&f, 4096).unwrap(), chebyshev_radius(&g, 4096).unwrap());
        prop_assert!((a - b).abs() < 1e-8);
    }
}

#[test]
fn truncation_keeps_low_coefficients() {
    for f in [builtin_triangle(), builtin_bump()] {
        for degree in [0usize, 1, 4, 9] {
            let p = truncate(&f, degree).unwrap().to_function("p");
            // quadrature on the polynomial, exact coefficients on f
            let sampled = PeriodicFunction::new("p", true, move |x| p.evaluate(x));
            let d = degree as i64;
            for n in -d - 2..=d + 2 {
                let got = fourier_coefficient(&sampled, n).unwrap();
                let want = if n.abs() <= d { fourier_coefficient(&f, n).unwrap() } else { Complex64::new(0.0, 0.0) };
                assert!((got - want).norm() < 1e-10, "{} N={degree} n={n}", f.name());
            }
        }
    }
}

#[test]
fn polynomial_evaluation_matches_direct_sum() {
    let mut map = BTreeMap::new();
    map.insert(-2, Complex64::new(0.3, -0.1));
    map.insert(0, Complex64::new(1.0, 0.0));
    map.insert(3, Complex64::new(-0.5, 0.25));
    let p = TrigPolynomial::from_map(&map);
    for k in 0..100 {
        let x = -3.0 + 0.06 * k as f64;
        let direct: Complex64 = map.iter().map(|(&n, &a)| a * Complex64::from_polar(1.0, n as f64 * x)).sum();
        assert!((p.evaluate(x) - direct).norm() < 1e-13);
    }
}
