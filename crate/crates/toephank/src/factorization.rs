//! Constructive weak asymmetric factorization of pure-jump symbols.
//!
//! Every admissible pure-jump symbol `ψ` (conditions (i)/(ii) of the
//! Fredholm criterion holding strictly) factors as `ψ = ψ₋·ψ₀` with index
//! zero, built from the elementary functions
//!
//! ```text
//! η_β(t) = (1-t)^β,    ξ_β(t) = (1-t⁻¹)^β,    t_β = η_β·ξ_{-β},
//! ```
//!
//! taken with the principal branch. Concretely, with shifts written as
//! factor centers,
//!
//! ```text
//! ψ₋ = ξ_{-2β⁺}(t) · ξ_{-2β⁻}(-t) · Π_r ξ_{-β_r⁺-β_r⁻}(e^{i(θ∓θ_r)}),
//! ψ₀ = η_{β⁺}ξ_{β⁺}(t) · η_{β⁻}ξ_{β⁻}(-t)
//!      · Π_r η_{β_r⁺}(e^{i(θ-θ_r)}) ξ_{β_r⁺}(e^{i(θ+θ_r)})
//!            η_{β_r⁻}(e^{i(θ+θ_r)}) ξ_{β_r⁻}(e^{i(θ-θ_r)}).
//! ```
//!
//! `ψ₀` is even, `ψ₋` extends analytically outside the disk in the required
//! weighted sense, and the associated weight
//!
//! ```text
//! σ(cos θ) = |ψ₀⁻¹(e^{iθ})| · |1+cos θ|^{1/2q} / |1-cos θ|^{1/2p}
//! ```
//!
//! is a power weight with nodes `{1, -1, cos θ_r}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

use crate::quad::{self, integrate_singular_real, QuadConfig, TWO_PI};
use crate::symbol::{c64serde, check_p, JumpPair, PCSymbol, WindowSet};
use crate::weights::{PowerWeight, Prefactor};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorKind {
    Eta,
    Xi,
}

/// One elementary factor `η_β` or `ξ_β`, evaluated at `t = e^{i(θ-center)}`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FactorDescriptor {
    pub kind: FactorKind,
    #[serde(with = "c64serde")]
    pub beta: Complex64,
    pub center: f64,
}

impl FactorDescriptor {
    /// Principal-branch evaluation via
    /// `Log(1 - e^{iθ'}) = ln(2 sin(θ'/2)) + i(θ' - π)/2` on `θ' ∈ (0, 2π)`,
    /// computed from the signed wrap of `θ - center` so that points just off
    /// the jump keep full relative precision.
    pub fn eval(&self, theta: f64) -> Result<Complex64> {
        let w = crate::symbol::wrap_angle_signed(theta - self.center);
        if w == 0.0 {
            return Err(Error::JumpPointEvaluation { theta });
        }
        let log_mag = (2.0 * (0.5 * w.abs()).sin()).ln();
        let phase = 0.5 * crate::symbol::t_beta_phase(w);
        let log_base = match self.kind {
            FactorKind::Eta => Complex64::new(log_mag, phase),
            FactorKind::Xi => Complex64::new(log_mag, -phase),
        };
        Ok((self.beta * log_base).exp())
    }
}

fn eval_product(factors: &[FactorDescriptor], constant: Complex64, theta: f64) -> Result<Complex64> {
    let mut v = constant;
    for f in factors {
        v *= f.eval(theta)?;
    }
    Ok(v)
}

/// The β data a factorization was built from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PureJumpData {
    #[serde(with = "c64serde")]
    pub beta_plus: Complex64,
    #[serde(with = "c64serde")]
    pub beta_minus: Complex64,
    pub pairs: Vec<JumpPair>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AsymmetricFactorization {
    pub psi_minus: Vec<FactorDescriptor>,
    pub psi_zero: Vec<FactorDescriptor>,
    /// Factorization index; zero for this construction.
    pub kappa: i64,
    /// Constant absorbed into `ψ₋`; unimodular.
    #[serde(with = "c64serde")]
    pub minus_constant: Complex64,
    /// Constant absorbed into `ψ₀`, chosen so that `ψ₀` is positive real at
    /// the normalization angle (a convention — factors are only determined
    /// up to a multiplicative constant).
    #[serde(with = "c64serde")]
    pub zero_constant: Complex64,
    pub source: PureJumpData,
}

impl AsymmetricFactorization {
    pub fn eval_minus(&self, theta: f64) -> Result<Complex64> {
        eval_product(&self.psi_minus, self.minus_constant, theta)
    }

    pub fn eval_zero(&self, theta: f64) -> Result<Complex64> {
        eval_product(&self.psi_zero, self.zero_constant, theta)
    }

    /// `ψ₋(e^{iθ}) · e^{iκθ} · ψ₀(e^{iθ})`.
    pub fn eval(&self, theta: f64) -> Result<Complex64> {
        let monomial = Complex64::from_polar(1.0, self.kappa as f64 * theta);
        Ok(self.eval_minus(theta)? * monomial * self.eval_zero(theta)?)
    }

    /// Jump centers of the underlying symbol.
    pub fn centers(&self) -> Vec<f64> {
        let mut c: Vec<f64> = self
            .psi_minus
            .iter()
            .chain(self.psi_zero.iter())
            .map(|f| f.center)
            .collect();
        c.sort_by(f64::total_cmp);
        c.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
        c
    }
}

fn strict_window_check(sym: &PCSymbol, p: f64) -> Result<()> {
    const TOL: f64 = 1e-12;
    let w = WindowSet::toeplitz_hankel(p);
    let mut violations = Vec::new();
    let mut check = |label: String, re: f64, right: f64| {
        let left = right - 1.0;
        if !(re > left + TOL && re < right - TOL) {
            violations.push(format!("{label}: Re = {re} not strictly inside ({left}, {right})"));
        }
    };
    check("beta_plus".into(), sym.beta_plus.re, w.beta_plus_right);
    check("beta_minus".into(), sym.beta_minus.re, w.beta_minus_right);
    for (r, pair) in sym.pairs.iter().enumerate() {
        check(
            format!("pair {r} sum"),
            pair.beta_plus.re + pair.beta_minus.re,
            w.pair_right,
        );
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::FactorizationConditions(violations.join("; ")))
    }
}

fn push_nonzero(list: &mut Vec<FactorDescriptor>, kind: FactorKind, beta: Complex64, center: f64) {
    if beta != Complex64::ZERO {
        list.push(FactorDescriptor { kind, beta, center });
    }
}

/// Angle in `(0, π)` staying clear of all jump centers, used to fix the
/// multiplicative normalization of the factors.
fn normalization_angle(centers: &[f64]) -> f64 {
    let candidates = [
        PI / 2.0,
        PI / 3.0,
        2.0 * PI / 5.0,
        3.0 * PI / 7.0,
        PI / 5.0,
        4.0 * PI / 9.0,
        2.0 * PI / 7.0,
    ];
    *candidates
        .iter()
        .max_by(|&&a, &&b| {
            let da = centers.iter().map(|c| (a - c).abs()).fold(f64::INFINITY, f64::min);
            let db = centers.iter().map(|c| (b - c).abs()).fold(f64::INFINITY, f64::min);
            da.partial_cmp(&db).unwrap()
        })
        .unwrap()
}

/// Build the explicit factorization of a pure-jump symbol whose parameters
/// satisfy the strict conditions at exponent `p`.
pub fn build_factorization(sym: &PCSymbol, p: f64) -> Result<AsymmetricFactorization> {
    check_p(p)?;
    let Some(b_const) = sym.b.as_constant() else {
        return Err(Error::InvalidParameter(
            "factorization requires a pure-jump symbol (constant b); see PCSymbol::pure_jump_part".into(),
        ));
    };
    if b_const == Complex64::ZERO {
        return Err(Error::InvalidParameter("constant part must be nonzero".into()));
    }
    strict_window_check(sym, p)?;

    let bp = sym.beta_plus;
    let bm = sym.beta_minus;
    let mut psi_minus = Vec::new();
    let mut psi_zero = Vec::new();

    push_nonzero(&mut psi_minus, FactorKind::Xi, -2.0 * bp, 0.0);
    push_nonzero(&mut psi_minus, FactorKind::Xi, -2.0 * bm, PI);
    push_nonzero(&mut psi_zero, FactorKind::Eta, bp, 0.0);
    push_nonzero(&mut psi_zero, FactorKind::Xi, bp, 0.0);
    push_nonzero(&mut psi_zero, FactorKind::Eta, bm, PI);
    push_nonzero(&mut psi_zero, FactorKind::Xi, bm, PI);

    for pair in &sym.pairs {
        let sum = pair.beta_plus + pair.beta_minus;
        let plus_center = pair.theta;
        let minus_center = TWO_PI - pair.theta;
        push_nonzero(&mut psi_minus, FactorKind::Xi, -sum, plus_center);
        push_nonzero(&mut psi_minus, FactorKind::Xi, -sum, minus_center);
        push_nonzero(&mut psi_zero, FactorKind::Eta, pair.beta_plus, plus_center);
        push_nonzero(&mut psi_zero, FactorKind::Xi, pair.beta_plus, minus_center);
        push_nonzero(&mut psi_zero, FactorKind::Eta, pair.beta_minus, minus_center);
        push_nonzero(&mut psi_zero, FactorKind::Xi, pair.beta_minus, plus_center);
    }

    // Normalization convention: ψ₀ positive real at the reference angle.
    let centers: Vec<f64> = psi_minus.iter().chain(psi_zero.iter()).map(|f| f.center).collect();
    let theta_star = normalization_angle(&centers);
    let raw_zero = eval_product(&psi_zero, Complex64::new(1.0, 0.0), theta_star)?;
    let value = b_const * raw_zero;
    let u = if value == Complex64::ZERO {
        Complex64::new(1.0, 0.0)
    } else {
        value / value.norm()
    };
    let zero_constant = b_const / u;
    let minus_constant = u;

    Ok(AsymmetricFactorization {
        psi_minus,
        psi_zero,
        kappa: 0,
        minus_constant,
        zero_constant,
        source: PureJumpData {
            beta_plus: bp,
            beta_minus: bm,
            pairs: sym.pairs.clone(),
        },
    })
}

/// σ evaluated straight from the definition:
/// `σ(x) = |ψ₀⁻¹(e^{iθ})| · |1+x|^{1/2q} / |1-x|^{1/2p}`, `x = cos θ`.
pub fn sigma_via_psi0(fact: &AsymmetricFactorization, p: f64, x: f64) -> Result<f64> {
    check_p(p)?;
    let q = p / (p - 1.0);
    let theta = x.clamp(-1.0, 1.0).acos();
    let psi0 = fact.eval_zero(theta)?;
    Ok(psi0.norm().recip() * (1.0 + x).abs().powf(0.5 / q) / (1.0 - x).abs().powf(0.5 / p))
}

/// Closed power form of σ with the collected-terms prefactor:
/// a fully independent route that never evaluates the η/ξ factors.
///
/// ```text
/// σ(x) = |σ₀(x)| (1-x)^{-Re β⁺ - 1/2p} (1+x)^{-Re β⁻ + 1/2q}
///        Π_r |x - cos θ_r|^{-Re(β_r⁺+β_r⁻)},
/// |σ₀(x)| = |zero_constant|⁻¹ · 2^{-Re Σβ}
///           · Π_r |t_{(β_r⁻-β_r⁺)/2}(e^{i(θ-θ_r)})| |t_{(β_r⁺-β_r⁻)/2}(e^{i(θ+θ_r)})|
/// ```
pub fn sigma_closed_form(fact: &AsymmetricFactorization, p: f64, x: f64) -> Result<f64> {
    check_p(p)?;
    let q = p / (p - 1.0);
    let s = &fact.source;
    let theta = x.clamp(-1.0, 1.0).acos();

    let mut total_beta = s.beta_plus + s.beta_minus;
    for pair in &s.pairs {
        total_beta += pair.beta_plus + pair.beta_minus;
    }
    // |t_γ(e^{iψ})| = exp(-Im γ · (ψ - π)) on ψ ∈ (0, 2π)
    let t_mag = |gamma: Complex64, psi: f64| -> f64 {
        let w = crate::symbol::wrap_angle_signed(psi);
        (-gamma.im * crate::symbol::t_beta_phase(w)).exp()
    };
    let mut sigma0 = 2.0f64.powf(-total_beta.re) / fact.zero_constant.norm();
    for pair in &s.pairs {
        let gamma = 0.5 * (pair.beta_minus - pair.beta_plus);
        sigma0 *= t_mag(gamma, theta - pair.theta);
        sigma0 *= t_mag(-gamma, theta + pair.theta);
    }

    let mut v = sigma0;
    v *= (1.0 - x).abs().powf(-s.beta_plus.re - 0.5 / p);
    v *= (1.0 + x).abs().powf(-s.beta_minus.re + 0.5 / q);
    for pair in &s.pairs {
        let alpha = -(pair.beta_plus.re + pair.beta_minus.re);
        v *= (x - pair.theta.cos()).abs().powf(alpha);
    }
    Ok(v)
}

/// The σ-weight as a power weight on `[-1, 1]` with nodes `{1, -1, cos θ_r}`
/// and the `|σ₀|`-type prefactor evaluated as `ψ₀⁻¹` divided by the power
/// factors.
pub fn sigma_weight(fact: &AsymmetricFactorization, p: f64) -> Result<PowerWeight> {
    check_p(p)?;
    let q = p / (p - 1.0);
    let s = &fact.source;
    let mut nodes = vec![1.0, -1.0];
    let mut exponents = vec![-s.beta_plus.re - 0.5 / p, -s.beta_minus.re + 0.5 / q];
    for pair in &s.pairs {
        nodes.push(pair.theta.cos());
        exponents.push(-(pair.beta_plus.re + pair.beta_minus.re));
    }

    // The prefactor is |σ₀(x)| = σ(x) / Π |x-x_r|^{α_r}; computing it as
    // |ψ₀⁻¹|·edge-factors divided by the full power product is the direct
    // transcription of that definition.
    let psi_zero = fact.psi_zero.clone();
    let zero_constant = fact.zero_constant;
    let nd: Vec<(f64, f64)> = nodes.iter().copied().zip(exponents.iter().copied()).collect();
    let pf = move |x: f64| -> f64 {
        let theta = x.clamp(-1.0, 1.0).acos();
        let psi0 = match eval_product(&psi_zero, zero_constant, theta) {
            Ok(v) => v,
            Err(_) => return f64::NAN,
        };
        let mut v = psi0.norm().recip();
        v *= (1.0 + x).abs().powf(0.5 / q);
        v *= (1.0 - x).abs().powf(-0.5 / p);
        for &(node, alpha) in &nd {
            v *= (x - node).abs().powf(-alpha);
        }
        v
    };
    PowerWeight::with_prefactor(
        nodes,
        exponents,
        Prefactor::Custom {
            label: "psi0-derived".into(),
            f: Arc::new(pf),
        },
    )
}

/// Relative spectral mass on each side of the coefficient range.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TailMass {
    /// ℓ²-mass of indices `n ≥ 1` relative to the whole computed range.
    pub positive: f64,
    /// ℓ²-mass of indices `n ≤ -1` relative to the whole computed range.
    pub negative: f64,
    /// ℓ²-norm over the whole computed range.
    pub total: f64,
}

/// Fourier-coefficient tail masses of a pointwise-evaluated circle function
/// with algebraic singularities at `singular` angles.
pub fn coefficient_tail_mass(
    f: &dyn Fn(f64) -> Complex64,
    singular: &[f64],
    max_index: i64,
    cfg: &QuadConfig,
) -> Result<TailMass> {
    let table = quad::fourier_coefficients(f, singular, true, max_index, cfg)?;
    let mut pos = 0.0;
    let mut neg = 0.0;
    let mut tot = 0.0;
    for (n, c) in table.iter() {
        let m = c.norm_sqr();
        tot += m;
        if n >= 1 {
            pos += m;
        } else if n <= -1 {
            neg += m;
        }
    }
    let tot = tot.sqrt();
    Ok(TailMass {
        positive: pos.sqrt() / tot.max(1e-300),
        negative: neg.sqrt() / tot.max(1e-300),
        total: tot,
    })
}

#[derive(Debug, Clone)]
pub struct MembershipConfig {
    /// Coefficient range for the analyticity (tail mass) checks.
    pub max_index: i64,
    pub quad: QuadConfig,
    /// Relative positive-index mass allowed for the anti-analytic factors.
    pub tail_tolerance: f64,
    /// Grid size and jump-neighborhood exclusion for the evenness check.
    pub grid: usize,
    pub delta: f64,
}

impl Default for MembershipConfig {
    fn default() -> Self {
        MembershipConfig {
            max_index: 2048,
            quad: QuadConfig {
                tolerance: 1e-8,
                ..QuadConfig::default()
            },
            tail_tolerance: 1e-6,
            grid: 2048,
            delta: 1e-3,
        }
    }
}

/// Numerical surrogates for the factorization membership conditions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MembershipDiagnostics {
    /// Relative positive-index mass of `(1+t⁻¹)ψ₋` (should vanish: the
    /// function extends anti-analytically).
    pub minus_positive_mass: f64,
    /// Relative positive-index mass of `(1-t⁻¹)ψ₋⁻¹`.
    pub minus_inverse_positive_mass: f64,
    /// `∫ | |1-t| ψ₀ |^q dθ` — finite for membership in `L^q`.
    pub psi0_lq_value: f64,
    pub psi0_lq_finite: bool,
    /// `∫ | |1+t| ψ₀⁻¹ |^p dθ` — finite for membership in `L^p`.
    pub psi0_inv_lp_value: f64,
    pub psi0_inv_lp_finite: bool,
    /// `max |ψ₀(θ) - ψ₀(-θ)|` off jump neighborhoods.
    pub evenness_defect: f64,
    pub pass: bool,
    pub failures: Vec<String>,
}

/// Check the verifiable surrogates of conditions (i)/(ii) for a built
/// factorization; numerical evidence, not proof.
pub fn verify_factor_memberships(
    fact: &AsymmetricFactorization,
    p: f64,
    cfg: &MembershipConfig,
) -> Result<MembershipDiagnostics> {
    check_p(p)?;
    let q = p / (p - 1.0);
    let centers = fact.centers();

    let minus = |theta: f64| -> Complex64 {
        let factor = Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, -theta);
        factor * fact.eval_minus(theta).unwrap_or(Complex64::ZERO)
    };
    let minus_mass = coefficient_tail_mass(&minus, &centers, cfg.max_index, &cfg.quad)?;

    let minus_inv = |theta: f64| -> Complex64 {
        let factor = Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -theta);
        match fact.eval_minus(theta) {
            Ok(v) => factor / v,
            Err(_) => Complex64::ZERO,
        }
    };
    let minus_inv_mass = coefficient_tail_mass(&minus_inv, &centers, cfg.max_index, &cfg.quad)?;

    // |1-t| = 2|sin(θ/2)|, |1+t| = 2|cos(θ/2)|
    let mut circle_singular = centers.clone();
    circle_singular.push(0.0);
    circle_singular.push(TWO_PI);
    let lq = integrate_singular_real(
        &|theta: f64| {
            let m = 2.0 * (0.5 * theta).sin().abs();
            let v = fact.eval_zero(theta).map(|z| z.norm()).unwrap_or(f64::NAN);
            (m * v).powf(q)
        },
        0.0,
        TWO_PI,
        &circle_singular,
        cfg.quad.grading_levels,
        16,
    );
    let lp = integrate_singular_real(
        &|theta: f64| {
            let m = 2.0 * (0.5 * theta).cos().abs();
            let v = fact.eval_zero(theta).map(|z| z.norm().recip()).unwrap_or(f64::NAN);
            (m * v).powf(p)
        },
        0.0,
        TWO_PI,
        &circle_singular,
        cfg.quad.grading_levels,
        16,
    );

    let mut evenness = 0.0f64;
    for k in 0..cfg.grid {
        let theta = PI * (k as f64 + 0.5) / cfg.grid as f64;
        if centers
            .iter()
            .any(|c| (theta - c).abs() < cfg.delta || (TWO_PI - theta - c).abs() < cfg.delta)
        {
            continue;
        }
        let (a, b) = (fact.eval_zero(theta)?, fact.eval_zero(-theta)?);
        evenness = evenness.max((a - b).norm());
    }

    let mut failures = Vec::new();
    if minus_mass.positive > cfg.tail_tolerance {
        failures.push(format!(
            "(1+t^-1)ψ₋ has positive-index mass {:.3e} > {:.3e}",
            minus_mass.positive, cfg.tail_tolerance
        ));
    }
    if minus_inv_mass.positive > cfg.tail_tolerance {
        failures.push(format!(
            "(1-t^-1)ψ₋⁻¹ has positive-index mass {:.3e} > {:.3e}",
            minus_inv_mass.positive, cfg.tail_tolerance
        ));
    }
    if lq.diverging || !lq.converged {
        failures.push("|1-t|ψ₀ quadrature did not certify L^q membership".into());
    }
    if lp.diverging || !lp.converged {
        failures.push("|1+t|ψ₀⁻¹ quadrature did not certify L^p membership".into());
    }
    if evenness > 1e-10 {
        failures.push(format!("ψ₀ evenness defect {evenness:.3e} > 1e-10"));
    }

    Ok(MembershipDiagnostics {
        minus_positive_mass: minus_mass.positive,
        minus_inverse_positive_mass: minus_inv_mass.positive,
        psi0_lq_value: lq.value,
        psi0_lq_finite: !lq.diverging && lq.converged,
        psi0_inv_lp_value: lp.value,
        psi0_inv_lp_finite: !lp.diverging && lp.converged,
        evenness_defect: evenness,
        pass: failures.is_empty(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::TrigPolynomial;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn grid_off_jumps(fact: &AsymmetricFactorization, n: usize, delta: f64) -> Vec<f64> {
        let centers = fact.centers();
        (0..n)
            .map(|k| TWO_PI * (k as f64 + 0.5) / n as f64)
            .filter(|t| {
                centers.iter().all(|c| {
                    let d = (t - c).rem_euclid(TWO_PI);
                    d.min(TWO_PI - d) > delta
                })
            })
            .collect()
    }

    #[test]
    fn t_beta_equals_eta_times_xi() {
        // t_β = η_β · ξ_{-β}
        let beta = c(0.23, -0.11);
        let eta = FactorDescriptor { kind: FactorKind::Eta, beta, center: 0.0 };
        let xi = FactorDescriptor { kind: FactorKind::Xi, beta: -beta, center: 0.0 };
        for k in 1..512 {
            let theta = TWO_PI * k as f64 / 512.0;
            let lhs = crate::symbol::eval_t_beta(beta, theta).unwrap();
            let rhs = eta.eval(theta).unwrap() * xi.eval(theta).unwrap();
            assert!((lhs - rhs).norm() < 1e-13);
        }
    }

    #[test]
    fn eta_xi_same_exponent_gives_modulus_power() {
        // η_β ξ_β = |1-t|^{2β}
        let beta = c(0.4, 0.0);
        let eta = FactorDescriptor { kind: FactorKind::Eta, beta, center: 0.0 };
        let xi = FactorDescriptor { kind: FactorKind::Xi, beta, center: 0.0 };
        for k in 1..256 {
            let theta = TWO_PI * k as f64 / 256.0;
            let m = (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, theta)).norm();
            let lhs = eta.eval(theta).unwrap() * xi.eval(theta).unwrap();
            assert!((lhs - c(m.powf(2.0 * beta.re), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn trivial_factorization_is_all_ones() {
        let sym = PCSymbol::single_jump(Complex64::ZERO);
        let f = build_factorization(&sym, 2.0).unwrap();
        assert!(f.psi_minus.is_empty() && f.psi_zero.is_empty());
        assert_eq!(f.kappa, 0);
        assert!((f.eval_minus(1.0).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!((f.eval_zero(1.0).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn single_jump_factorization_reconstructs_symbol() {
        let beta = c(0.2, 0.0);
        let sym = PCSymbol::single_jump(beta);
        let f = build_factorization(&sym, 2.0).unwrap();
        let mut worst = 0.0f64;
        for theta in grid_off_jumps(&f, 2048, 1e-3) {
            let lhs = sym.eval(theta).unwrap();
            let rhs = f.eval(theta).unwrap();
            worst = worst.max((lhs - rhs).norm());
        }
        assert!(worst <= 1e-10, "reconstruction residual {worst}");
    }

    #[test]
    fn pair_factorization_residual_and_evenness() {
        let sym = PCSymbol::new(
            TrigPolynomial::one(),
            Complex64::ZERO,
            Complex64::ZERO,
            vec![JumpPair {
                theta: PI / 3.0,
                beta_plus: c(0.2, 0.0),
                beta_minus: c(-0.1, 0.0),
            }],
        )
        .unwrap();
        let f = build_factorization(&sym, 2.0).unwrap();
        let mut worst = 0.0f64;
        let mut evenness = 0.0f64;
        for theta in grid_off_jumps(&f, 2048, 1e-3) {
            let lhs = sym.eval(theta).unwrap();
            let rhs = f.eval(theta).unwrap();
            worst = worst.max((lhs - rhs).norm());
            if theta < PI {
                let d = (f.eval_zero(theta).unwrap() - f.eval_zero(-theta).unwrap()).norm();
                evenness = evenness.max(d);
            }
        }
        assert!(worst <= 1e-10, "residual {worst}");
        assert!(evenness <= 1e-10, "evenness defect {evenness}");
    }

    #[test]
    fn normalization_makes_psi0_positive_at_reference() {
        let sym = PCSymbol::new(
            TrigPolynomial::one(),
            c(0.1, 0.15),
            c(-0.2, -0.1),
            vec![JumpPair { theta: 2.0, beta_plus: c(0.12, 0.3), beta_minus: c(0.08, -0.2) }],
        )
        .unwrap();
        let f = build_factorization(&sym, 2.0).unwrap();
        let centers = f.centers();
        let theta_star = normalization_angle(&centers);
        let v = f.eval_zero(theta_star).unwrap();
        assert!(v.im.abs() < 1e-12 && v.re > 0.0, "ψ₀(θ*) = {v}");
        // constants multiply back to the constant part of the symbol
        assert!((f.minus_constant * f.zero_constant - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn rejects_boundary_parameters() {
        let sym = PCSymbol::single_jump(c(0.25, 0.0));
        assert!(matches!(
            build_factorization(&sym, 2.0),
            Err(Error::FactorizationConditions(_))
        ));
        // far outside the window is also a violation
        let sym = PCSymbol::single_jump(c(1.7, 0.0));
        assert!(build_factorization(&sym, 2.0).is_err());
    }

    #[test]
    fn rejects_non_pure_jump() {
        let sym = PCSymbol::new(
            TrigPolynomial::monomial(1, c(1.0, 0.0)),
            c(0.1, 0.0),
            Complex64::ZERO,
            vec![],
        )
        .unwrap();
        assert!(matches!(build_factorization(&sym, 2.0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn sigma_weight_zero_betas_p2() {
        // All β = 0, p = 2: σ(x) = (1-x)^{-1/4}(1+x)^{1/4}, σ₀ constant.
        let sym = PCSymbol::single_jump(Complex64::ZERO);
        let f = build_factorization(&sym, 2.0).unwrap();
        let w = sigma_weight(&f, 2.0).unwrap();
        assert_eq!(w.nodes(), &[1.0, -1.0]);
        assert!((w.exponents()[0] + 0.25).abs() < 1e-15);
        assert!((w.exponents()[1] - 0.25).abs() < 1e-15);
        for x in [-0.9, -0.3, 0.0, 0.4, 0.85] {
            let expected = (1.0 - x as f64).powf(-0.25) * (1.0 + x as f64).powf(0.25);
            assert!((w.eval(x) - expected).abs() < 1e-12 * expected);
        }
    }

    #[test]
    fn sigma_edge_exponent_at_critical_beta() {
        // β⁺ = 1/2p exactly gives exponent -1/p at x = 1 (the L^p edge);
        // built by bypassing the admissibility guard on purpose.
        let p = 2.0;
        let fact = AsymmetricFactorization {
            psi_minus: vec![],
            psi_zero: vec![],
            kappa: 0,
            minus_constant: c(1.0, 0.0),
            zero_constant: c(1.0, 0.0),
            source: PureJumpData {
                beta_plus: c(0.25, 0.0),
                beta_minus: Complex64::ZERO,
                pairs: vec![],
            },
        };
        let w = sigma_weight(&fact, p).unwrap();
        assert!((w.exponents()[0] - (-0.5)).abs() < 1e-15);
    }

    #[test]
    fn sigma_two_routes_agree_up_to_constant() {
        let sym = PCSymbol::new(
            TrigPolynomial::one(),
            c(0.1, 0.2),
            c(-0.15, -0.1),
            vec![JumpPair { theta: 1.1, beta_plus: c(0.12, 0.25), beta_minus: c(0.1, -0.15) }],
        )
        .unwrap();
        let f = build_factorization(&sym, 2.0).unwrap();
        let w = sigma_weight(&f, 2.0).unwrap();
        let mut ratios = Vec::new();
        for k in 0..512 {
            let x = -0.999 + 1.998 * (k as f64 + 0.5) / 512.0;
            if w.nodes().iter().any(|n| (x - n).abs() < 1e-2) {
                continue;
            }
            let via_def = sigma_via_psi0(&f, 2.0, x).unwrap();
            let closed = sigma_closed_form(&f, 2.0, x).unwrap();
            let weight = w.eval(x);
            ratios.push(via_def / closed);
            assert!((via_def - weight).abs() <= 1e-10 * via_def.abs().max(1.0));
        }
        let mean: f64 = ratios.iter().sum::<f64>() / ratios.len() as f64;
        for r in &ratios {
            assert!((r - mean).abs() <= 1e-8 * mean.abs(), "ratio variation {r} vs {mean}");
        }
    }

    #[test]
    fn memberships_pass_for_admissible_single_jump() {
        let sym = PCSymbol::single_jump(c(0.2, 0.0));
        let f = build_factorization(&sym, 2.0).unwrap();
        let cfg = MembershipConfig::default();
        let d = verify_factor_memberships(&f, 2.0, &cfg).unwrap();
        assert!(d.pass, "failures: {:?}", d.failures);
        assert!(d.minus_positive_mass <= 1e-6, "mass {}", d.minus_positive_mass);
        assert!(d.evenness_defect <= 1e-10);
    }

    #[test]
    fn swapped_factor_fails_analyticity() {
        // Using η in place of ξ concentrates the spectrum on positive
        // indices, which the tail check must flag.
        let beta = c(0.2, 0.0);
        let wrong = FactorDescriptor { kind: FactorKind::Eta, beta: -2.0 * beta, center: 0.0 };
        let f = |theta: f64| {
            let factor = Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, -theta);
            factor * wrong.eval(theta).unwrap_or(Complex64::ZERO)
        };
        let cfg = MembershipConfig::default();
        let mass = coefficient_tail_mass(&f, &[0.0], 512, &cfg.quad).unwrap();
        assert!(mass.positive >= 0.1, "positive mass {}", mass.positive);
    }

    #[test]
    fn factorization_serde_round_trip() {
        let sym = PCSymbol::single_jump(c(0.2, 0.1));
        let f = build_factorization(&sym, 2.0).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        let back: AsymmetricFactorization = serde_json::from_str(&json).unwrap();
        assert_eq!(back.psi_minus.len(), f.psi_minus.len());
        assert_eq!(back.kappa, 0);
        let theta = 1.234;
        assert!((back.eval(theta).unwrap() - f.eval(theta).unwrap()).norm() < 1e-14);
    }
}
