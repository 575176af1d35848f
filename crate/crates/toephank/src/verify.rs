//! Empirical cross-validation of the analytic predictions against finite
//! sections.
//!
//! Nothing here is a convergence theorem: truncation sweeps report trends in
//! the smallest singular value and the numerical nullity of `M_n(φ)` and are
//! labeled empirical consistency checks. The matrices act on `ℓ²`, so the
//! sweeps probe the `p = 2` predictions only; for `p ≠ 2` the weight/`A_p`
//! pathway is the validation route.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::fredholm::{predict, FredholmReport};
use crate::operators::{m_truncation, singular_values, CoefficientSource, MAX_TRUNCATION};
use crate::quad::QuadConfig;
use crate::symbol::{normalize_parameters, ParamRef, PCSymbol};
use crate::{Error, Result};

/// Default relative threshold: singular values below `threshold · σ_max`
/// count toward the numerical nullity.
pub const DEFAULT_NULLITY_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepResult {
    pub sizes: Vec<usize>,
    pub sigma_min: Vec<f64>,
    /// `σ_max/σ_min` per size (infinite when σ_min is exactly zero).
    pub cond: Vec<f64>,
    pub numerical_nullity: Vec<usize>,
    pub threshold: f64,
    /// Analytic prediction at `p = 2` (the `ℓ²` setting of the matrices).
    pub prediction: FredholmReport,
}

impl SweepResult {
    /// CSV with columns `n,sigma_min,cond,nullity`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,sigma_min,cond,nullity\n");
        for i in 0..self.sizes.len() {
            out.push_str(&format!(
                "{},{:.17e},{:.17e},{}\n",
                self.sizes[i], self.sigma_min[i], self.cond[i], self.numerical_nullity[i]
            ));
        }
        out
    }
}

/// Build `M_n(φ)` for each size and record singular-value diagnostics.
pub fn truncation_sweep(
    sym: &PCSymbol,
    sizes: &[usize],
    threshold: f64,
    quad: &QuadConfig,
) -> Result<SweepResult> {
    if sizes.is_empty() {
        return Err(Error::InvalidParameter("sweep needs at least one size".into()));
    }
    let mut sorted = sizes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != sizes.len() || sorted != sizes {
        return Err(Error::InvalidParameter("sizes must be strictly increasing".into()));
    }
    let n_max = *sizes.last().unwrap();
    if n_max > MAX_TRUNCATION {
        return Err(Error::Domain(format!("sweep size {n_max} exceeds {MAX_TRUNCATION}")));
    }

    // symbols without jumps have exact, finitely supported coefficients
    let source: Box<dyn CoefficientSource> = if sym.jump_angles().is_empty() {
        Box::new(sym.b.clone())
    } else {
        Box::new(sym.fourier_table(2 * n_max as i64, quad)?)
    };
    let mut sigma_min = Vec::with_capacity(sizes.len());
    let mut cond = Vec::with_capacity(sizes.len());
    let mut nullity = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let m = m_truncation(source.as_ref(), n)?;
        let s = singular_values(&m)?;
        let smax = s[0];
        let smin = s[n - 1];
        sigma_min.push(smin);
        cond.push(if smin > 0.0 { smax / smin } else { f64::INFINITY });
        nullity.push(s.iter().filter(|&&v| v < threshold * smax).count());
    }
    Ok(SweepResult {
        sizes: sizes.to_vec(),
        sigma_min,
        cond,
        numerical_nullity: nullity,
        threshold,
        prediction: predict(sym, 2.0)?,
    })
}

/// Least-squares slope of `log(values)` against `log(sizes)`.
pub fn log_slope(sizes: &[usize], values: &[f64]) -> f64 {
    let n = sizes.len() as f64;
    let xs: Vec<f64> = sizes.iter().map(|&s| (s as f64).ln()).collect();
    let ys: Vec<f64> = values.iter().map(|&v| v.max(1e-300).ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

/// The two perturbed predictions from the boundary-detection argument:
/// shift every β down by ε, and additionally wrap the first flagged
/// boundary instance across its window (β ↦ β - 1 + ε with the compensating
/// monomial absorbed into `b`). On a genuine boundary symbol the two
/// factorization indices differ by exactly one; on an interior symbol the
/// perturbations coincide.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PerturbationDiagnostic {
    pub epsilon: f64,
    /// All parameters shifted by `-ε`.
    pub shifted: FredholmReport,
    /// Same, except the first flagged instance wrapped across the window.
    pub wrapped: FredholmReport,
    /// `|κ(wrapped) - κ(shifted)|`.
    pub index_mismatch: i64,
    /// Which parameter was wrapped, if any.
    pub wrapped_param: Option<ParamRef>,
}

fn shift_all_down(sym: &PCSymbol, eps: f64) -> PCSymbol {
    let mut out = sym.clone();
    out.beta_plus -= eps;
    out.beta_minus -= eps;
    for pair in &mut out.pairs {
        pair.beta_plus -= eps;
        pair.beta_minus -= eps;
    }
    out
}

/// Compensating monomial for replacing the exponent at `center` by
/// `β - 1`: the symbol keeps its value when `b` gains `(-e^{-ic})·t`.
fn wrap_at_center(sym: &mut PCSymbol, center: f64) {
    let constant = -Complex64::from_polar(1.0, -center);
    sym.b = sym.b.mul_monomial(1, constant);
}

pub fn perturbation_diagnostic(sym: &PCSymbol, p: f64, epsilon: f64) -> Result<PerturbationDiagnostic> {
    if !(epsilon > 0.0 && epsilon < 0.1) {
        return Err(Error::InvalidParameter(format!(
            "epsilon {epsilon} outside (0, 0.1)"
        )));
    }
    let normalized = normalize_parameters(sym, p)?;
    let base = &normalized.symbol;

    let shifted_sym = shift_all_down(base, epsilon);
    let shifted = predict(&shifted_sym, p)?;

    let (wrapped_sym, wrapped_param) = match normalized.boundary_flags.first() {
        None => (shifted_sym.clone(), None),
        Some(flag) => {
            let mut s = shift_all_down(base, epsilon);
            match flag.param {
                ParamRef::BetaPlus => {
                    // -ε already applied; total must be -1+ε
                    s.beta_plus += 2.0 * epsilon - 1.0;
                    wrap_at_center(&mut s, 0.0);
                }
                ParamRef::BetaMinus => {
                    s.beta_minus += 2.0 * epsilon - 1.0;
                    wrap_at_center(&mut s, std::f64::consts::PI);
                }
                ParamRef::PairSum(r) => {
                    // move the pair sum from -2ε to -1+ε via β_r⁺
                    s.pairs[r].beta_plus += 3.0 * epsilon - 1.0;
                    let center = s.pairs[r].theta;
                    wrap_at_center(&mut s, center);
                }
                ParamRef::PairPlus(_) | ParamRef::PairMinus(_) => {
                    return Err(Error::Domain(
                        "individual pair windows do not occur in the Toeplitz-plus-Hankel normalization".into(),
                    ));
                }
            }
            (s, Some(flag.param))
        }
    };
    let wrapped = predict(&wrapped_sym, p)?;
    let index_mismatch = (wrapped.kappa - shifted.kappa).abs();
    Ok(PerturbationDiagnostic {
        epsilon,
        shifted,
        wrapped,
        index_mismatch,
        wrapped_param,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{JumpPair, TrigPolynomial};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sweep_of_constant_symbol() {
        let sym = PCSymbol::continuous(TrigPolynomial::one()).unwrap();
        let r = truncation_sweep(&sym, &[4, 8, 16], 1e-8, &QuadConfig::default()).unwrap();
        for (smin, nul) in r.sigma_min.iter().zip(&r.numerical_nullity) {
            assert!((smin - 1.0).abs() < 1e-12);
            assert_eq!(*nul, 0);
        }
        assert!(r.prediction.invertible);
    }

    #[test]
    fn sweep_of_t_has_constant_nullity_one() {
        let sym = PCSymbol::continuous(TrigPolynomial::monomial(1, c(1.0, 0.0))).unwrap();
        let r = truncation_sweep(&sym, &[4, 8, 16, 32], 1e-8, &QuadConfig::default()).unwrap();
        for nul in &r.numerical_nullity {
            assert_eq!(*nul, 1);
        }
    }

    #[test]
    fn monomial_nullity_matches_kappa() {
        for kappa in [-3i64, -2, -1, 1, 2, 3] {
            let sym = PCSymbol::continuous(TrigPolynomial::monomial(kappa, c(1.0, 0.0))).unwrap();
            let r = truncation_sweep(&sym, &[8, 16, 32, 64], 1e-8, &QuadConfig::default()).unwrap();
            for (n, nul) in r.sizes.iter().zip(&r.numerical_nullity) {
                assert_eq!(*nul as i64, kappa.abs(), "κ={kappa}, n={n}");
            }
        }
    }

    #[test]
    fn sweep_rejects_unsorted_sizes() {
        let sym = PCSymbol::continuous(TrigPolynomial::one()).unwrap();
        assert!(truncation_sweep(&sym, &[16, 8], 1e-8, &QuadConfig::default()).is_err());
    }

    #[test]
    fn interior_symbol_has_no_index_mismatch() {
        let sym = PCSymbol::new(
            TrigPolynomial::one(),
            c(0.1, 0.0),
            c(0.2, 0.1),
            vec![JumpPair { theta: 1.2, beta_plus: c(0.1, 0.0), beta_minus: c(0.05, 0.0) }],
        )
        .unwrap();
        let d = perturbation_diagnostic(&sym, 2.0, 0.01).unwrap();
        assert_eq!(d.index_mismatch, 0);
        assert!(d.wrapped_param.is_none());
        assert!(d.shifted.fredholm && d.wrapped.fredholm);
        assert_eq!(d.shifted.kappa, d.wrapped.kappa);
    }

    #[test]
    fn boundary_symbol_has_unit_index_mismatch() {
        // Re β⁺ = 1/2p at p = 2
        let sym = PCSymbol::single_jump(c(0.25, 0.0));
        let d = perturbation_diagnostic(&sym, 2.0, 0.01).unwrap();
        assert!(d.shifted.fredholm && d.wrapped.fredholm);
        assert_eq!(d.index_mismatch, 1);
        assert!(matches!(d.wrapped_param, Some(ParamRef::BetaPlus)));
    }

    #[test]
    fn boundary_pair_sum_mismatch() {
        // pair sum = 1/p at p = 2
        let sym = PCSymbol::new(
            TrigPolynomial::one(),
            Complex64::ZERO,
            Complex64::ZERO,
            vec![JumpPair { theta: 0.9, beta_plus: c(0.3, 0.0), beta_minus: c(0.2, 0.0) }],
        )
        .unwrap();
        let d = perturbation_diagnostic(&sym, 2.0, 0.02).unwrap();
        assert_eq!(d.index_mismatch, 1);
        assert!(matches!(d.wrapped_param, Some(ParamRef::PairSum(0))));
    }

    #[test]
    fn epsilon_range_enforced() {
        let sym = PCSymbol::single_jump(c(0.1, 0.0));
        assert!(perturbation_diagnostic(&sym, 2.0, 0.0).is_err());
        assert!(perturbation_diagnostic(&sym, 2.0, 0.5).is_err());
    }

    #[test]
    fn index_additivity_under_t_multiplication() {
        let base = PCSymbol::new(
            TrigPolynomial::from_triples(&[(0, 2.0, 0.0), (1, 1.0, 0.0)]),
            c(0.1, 0.0),
            c(-0.05, 0.0),
            vec![],
        )
        .unwrap();
        let r0 = predict(&base, 2.0).unwrap();
        let mut shifted = base.clone();
        shifted.b = shifted.b.mul_monomial(1, c(1.0, 0.0));
        let r1 = predict(&shifted, 2.0).unwrap();
        assert_eq!(r1.index(), r0.index() - 1);
    }

    #[test]
    fn log_slope_of_power_law() {
        let sizes = [64usize, 128, 256, 512];
        let values: Vec<f64> = sizes.iter().map(|&n| 3.0 * (n as f64).powf(-0.5)).collect();
        let slope = log_slope(&sizes, &values);
        assert!((slope + 0.5).abs() < 1e-12);
    }

    #[test]
    fn sweep_csv_columns() {
        let sym = PCSymbol::continuous(TrigPolynomial::one()).unwrap();
        let r = truncation_sweep(&sym, &[4, 8], 1e-8, &QuadConfig::default()).unwrap();
        let csv = r.to_csv();
        assert!(csv.starts_with("n,sigma_min,cond,nullity\n"));
        assert_eq!(csv.trim_end().lines().count(), 3);
    }
}
