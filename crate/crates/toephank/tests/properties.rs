//! Property tests for the structural invariants.

use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

use toephank::fredholm::predict;
use toephank::operators::{hankel_truncation, product_identity_residual};
use toephank::quad::{fourier_coefficients, QuadConfig, TWO_PI};
use toephank::symbol::{
    eval_t_beta, normalize_parameters, reduce_beta, winding_number, JumpPair, PCSymbol,
    TrigPolynomial,
};
use toephank::weights::{ap_supremum_estimate, ApConfig, PowerWeight, Prefactor};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

prop_compose! {
    fn unit_disk()(r in 0.0..1.0f64, phi in 0.0..TWO_PI) -> Complex64 {
        Complex64::from_polar(r.sqrt(), phi)
    }
}

prop_compose! {
    fn trig_poly(max_degree: i64)
        (coeffs in prop::collection::vec(unit_disk(), (2 * max_degree + 1) as usize)) -> TrigPolynomial {
        let triples: Vec<(i64, f64, f64)> = coeffs
            .iter()
            .enumerate()
            .map(|(i, z)| (i as i64 - max_degree, z.re, z.im))
            .collect();
        TrigPolynomial::from_triples(&triples)
    }
}

/// Polynomial with prescribed winding: `t^{-shift} Π (t - r_j)`, roots kept
/// away from the unit circle so the winding is the number of interior roots
/// minus the shift.
prop_compose! {
    fn poly_with_winding()
        (inside in prop::collection::vec(0.05..0.8f64, 0..3),
         outside in prop::collection::vec(1.3..3.0f64, 0..3),
         phases in prop::collection::vec(0.0..TWO_PI, 6),
         shift in -2i64..=2) -> (TrigPolynomial, i64) {
        let mut poly = TrigPolynomial::monomial(-shift, c(1.0, 0.0));
        let mut wind = -shift;
        for (k, r) in inside.iter().chain(outside.iter()).enumerate() {
            let root = Complex64::from_polar(*r, phases[k]);
            // t - root
            let factor = TrigPolynomial::from_triples(&[(1, 1.0, 0.0), (0, -root.re, -root.im)]);
            poly = poly.mul(&factor);
        }
        wind += inside.len() as i64;
        (poly, wind)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Both operator product identities hold at rounding level for all
    /// finitely supported pairs.
    #[test]
    fn product_identities_hold(a in trig_poly(8), b in trig_poly(8)) {
        let dev = product_identity_residual(&a, &b, 16).unwrap();
        prop_assert!(dev <= 1e-11, "deviation {dev}");
    }

    /// Winding numbers match the root-counting oracle and add under
    /// products.
    #[test]
    fn winding_matches_roots_and_is_additive(
        (b1, w1) in poly_with_winding(),
        (b2, w2) in poly_with_winding(),
    ) {
        prop_assert_eq!(winding_number(&b1, 64).unwrap(), w1);
        prop_assert_eq!(winding_number(&b2, 64).unwrap(), w2);
        let product = b1.mul(&b2);
        prop_assert_eq!(winding_number(&product, 64).unwrap(), w1 + w2);
    }

    /// Hankel entries depend on j + k only.
    #[test]
    fn hankel_structure(a in trig_poly(6)) {
        let h = hankel_truncation(&a, 8).unwrap();
        for j in 0..8usize {
            for k in 0..8usize {
                if j + 1 <= 7 && k >= 1 {
                    prop_assert_eq!(h.get(j, k), h.get(j + 1, k - 1));
                }
            }
        }
    }

    /// Integer shifts of β with the compensating monomial reproduce the jump
    /// factor pointwise.
    #[test]
    fn beta_shift_reproduces_factor(
        re in -2.0..2.0f64,
        im in -0.5..0.5f64,
        n in -3i64..=3,
        k in 1usize..512,
    ) {
        let beta = c(re, im);
        let (shifted, factor) = reduce_beta(beta, n);
        let theta = TWO_PI * k as f64 / 512.0;
        let lhs = eval_t_beta(beta, theta).unwrap();
        let rhs = factor.eval(theta) * eval_t_beta(shifted, theta).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
    }

    /// Normalization preserves the symbol pointwise and predict() is
    /// invariant under input integer shifts.
    #[test]
    fn normalization_invariance(
        bp_re in -1.6..1.6f64,
        bp_im in -0.4..0.4f64,
        pair_sum in -1.2..1.2f64,
        theta_r in 0.4..2.6f64,
        extra_shift in -2i64..=2,
    ) {
        let sym = PCSymbol::new(
            TrigPolynomial::one(),
            c(bp_re, bp_im),
            Complex64::ZERO,
            vec![JumpPair { theta: theta_r, beta_plus: c(0.5 * pair_sum, 0.1), beta_minus: c(0.5 * pair_sum, -0.1) }],
        ).unwrap();
        let normalized = normalize_parameters(&sym, 2.0).unwrap();
        // pointwise equality off jumps
        for k in 0..64 {
            let theta = TWO_PI * (k as f64 + 0.41) / 64.0;
            let a = sym.eval(theta).unwrap();
            let b = normalized.symbol.eval(theta).unwrap();
            prop_assert!((a - b).norm() <= 1e-11 * a.norm().max(1.0), "theta {theta}: {a} vs {b}");
        }
        // verdicts invariant under an extra integer shift of β⁺
        let mut shifted = sym.clone();
        shifted.beta_plus += extra_shift as f64;
        shifted.b = shifted.b.mul_monomial(-extra_shift, c(if extra_shift % 2 == 0 { 1.0 } else { -1.0 }, 0.0));
        let r0 = predict(&sym, 2.0).unwrap();
        let r1 = predict(&shifted, 2.0).unwrap();
        prop_assert_eq!(r0.fredholm, r1.fredholm);
        prop_assert_eq!(r0.kappa, r1.kappa);
        prop_assert_eq!(r0.dim_ker, r1.dim_ker);
    }

    /// Quadrature-level linearity of Fourier coefficients.
    #[test]
    fn fourier_linearity(alpha in unit_disk(), freq1 in -4i64..=4, freq2 in -4i64..=4) {
        let cfg = QuadConfig::default();
        let f = move |t: f64| Complex64::from_polar(1.0, freq1 as f64 * t);
        let g = move |t: f64| Complex64::from_polar(0.7, freq2 as f64 * t + 0.3);
        let combo = move |t: f64| alpha * f(t) + g(t);
        let cf = fourier_coefficients(&f, &[], false, 6, &cfg).unwrap();
        let cg = fourier_coefficients(&g, &[], false, 6, &cfg).unwrap();
        let cc = fourier_coefficients(&combo, &[], false, 6, &cfg).unwrap();
        for n in -6i64..=6 {
            let expect = alpha * cf.coeff(n).unwrap() + cg.coeff(n).unwrap();
            prop_assert!((cc.coeff(n).unwrap() - expect).norm() <= 1e-11);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Scaling a weight by a positive constant leaves every A_p quotient
    /// unchanged and the estimator's level sups are nondecreasing.
    #[test]
    fn ap_scaling_invariance_and_monotone_sups(
        node in -0.8..0.8f64,
        alpha in -0.35..0.35f64,
        scale in 0.2..40.0f64,
    ) {
        let cfg = ApConfig { depth: 6, ..Default::default() };
        let base = PowerWeight::new(vec![node], vec![alpha]).unwrap();
        let scaled = PowerWeight::with_prefactor(
            vec![node],
            vec![alpha],
            Prefactor::Custom { label: "scaled".into(), f: std::sync::Arc::new(move |_| scale) },
        ).unwrap();
        let a = ap_supremum_estimate(&base, 2.0, &cfg).unwrap();
        let b = ap_supremum_estimate(&scaled, 2.0, &cfg).unwrap();
        for (x, y) in a.level_sups.iter().zip(b.level_sups.iter()) {
            prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
        }
        for w in a.level_sups.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-12);
        }
    }

    /// The full-symbol jump ratio at a pair angle is exp(2πiβ_r⁺) regardless
    /// of the other factors.
    #[test]
    fn jump_ratio_is_exponential(
        beta_re in -0.45..0.45f64,
        beta_im in -0.3..0.3f64,
        other_re in -0.3..0.3f64,
        theta_r in 0.4..2.6f64,
    ) {
        let beta = c(beta_re, beta_im);
        let sym = PCSymbol::new(
            TrigPolynomial::from_triples(&[(0, 2.0, 0.0), (1, 1.0, 0.0)]),
            c(other_re, 0.1),
            c(-other_re, 0.0),
            vec![JumpPair { theta: theta_r, beta_plus: beta, beta_minus: c(other_re, -0.1) }],
        ).unwrap();
        let (l, r) = sym.one_sided_limits(theta_r);
        let expected = (Complex64::i() * TWO_PI * beta).exp();
        prop_assert!((l / r - expected).norm() <= 1e-10);
    }
}

/// Monotone window property across a critical p (deterministic sweep over a
/// dense p-grid rather than random draws).
#[test]
fn verdict_flips_exactly_at_critical_p() {
    // Re β⁺ = 0.2 is critical exactly at p = 2.5 (1/2p = 0.2)
    let sym = PCSymbol::single_jump(c(0.2, 0.0));
    let mut flips = Vec::new();
    let mut prev: Option<bool> = None;
    for k in 0..=200 {
        let p = 2.0 + k as f64 / 200.0; // p ∈ [2, 3]
        let r = predict(&sym, p).unwrap();
        if let Some(prev_f) = prev {
            if prev_f != r.fredholm {
                flips.push(p);
            }
        }
        prev = Some(r.fredholm);
    }
    // non-Fredholm only at the single grid point p = 2.5
    assert_eq!(flips.len(), 2, "flips at {flips:?}");
    assert!((flips[0] - 2.5).abs() < 0.011 && (flips[1] - 2.505).abs() < 0.011);
    let at = predict(&sym, 2.5).unwrap();
    assert!(!at.fredholm);
    // the normalized winding jumps by one across the flip
    let below = predict(&sym, 2.49).unwrap();
    let above = predict(&sym, 2.51).unwrap();
    assert_eq!((above.kappa - below.kappa).abs(), 1);
    assert_eq!(below.dim_coker, Some(0));
    assert_eq!(above.dim_coker, Some(1));
}

/// With no jumps at all the two criteria coincide: same Fredholmness, same
/// index.
#[test]
fn pure_jump_predictions_match_toeplitz_on_no_jump_symbols() {
    use toephank::fredholm::toeplitz_reference_predict;
    for kappa in -2i64..=2 {
        let sym = PCSymbol::continuous(TrigPolynomial::monomial(kappa, c(1.0, 0.0))).unwrap();
        let m = predict(&sym, 2.0).unwrap();
        let t = toeplitz_reference_predict(&sym, 2.0).unwrap();
        assert_eq!(m.fredholm, t.fredholm);
        assert_eq!(m.index(), t.index);
        assert_eq!(m.invertible, t.invertible);
    }
}
