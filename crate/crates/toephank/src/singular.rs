//! The finite-interval singular integral operator and its circle transfer.
//!
//! On the circle, `P` keeps nonnegative Fourier modes, `Q = I - P`,
//! `S = P - Q`, the flip is `(Jf)(t) = t⁻¹f(t⁻¹)`, and
//! `G = ½(I+J)(P-Q)(I-J) = (P-Q)(I-J)`. Lifting a function on `[-1, 1]` to
//! an even function of the angle (`U`), multiplying by `χ·(1+t⁻¹)` with the
//! upper/lower half-circle sign `χ`, applying `G`, and reading the even
//! result back off (`V`) reproduces the Cauchy principal value operator
//!
//! ```text
//! (S_{[-1,1]}f)(x) = (1/πi) ∫_{-1}^{1} f(y)/(y-x) dy
//!                  = (1/πi) ∫ (f(y)-f(x))/(y-x) dy + f(x)/(πi)·ln((1-x)/(1+x)).
//! ```
//!
//! The transfer identity is checked on smooth test functions whose
//! derivatives all vanish at `±1`, so the lifted function is smooth on the
//! whole circle and FFT-based projections converge spectrally.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;
use std::sync::Arc;

use crate::quad::{adaptive_complex, gl_rule, integrate_panel_complex, TWO_PI};
use crate::{Error, Result};

/// Complex samples at the `N` equispaced angles `θ_k = 2πk/N`, `N` a power
/// of two.
#[derive(Debug, Clone)]
pub struct SampledCircleFunction {
    samples: Vec<Complex64>,
}

/// Fourier coefficients `c_n`, `n ∈ [-N/2, N/2)`.
#[derive(Debug, Clone)]
pub struct CircleSpectrum {
    coeffs: Vec<Complex64>,
}

impl CircleSpectrum {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        let half = self.coeffs.len() as i64 / 2;
        if n < -half || n >= half {
            Complex64::ZERO
        } else {
            self.coeffs[(n + half) as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let half = self.coeffs.len() as i64 / 2;
        self.coeffs.iter().enumerate().map(move |(i, c)| (i as i64 - half, *c))
    }

    /// `Σ c_n e^{inθ}`, with coefficients below the spectral noise floor
    /// (relative `8·ε`) dropped and the remaining terms accumulated
    /// smallest-first with compensated summation, so the value does not
    /// depend on the rounding tail of the transform.
    pub fn eval(&self, theta: f64) -> Complex64 {
        let cmax = self.coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
        let floor = 8.0 * f64::EPSILON * cmax;
        let mut terms: Vec<Complex64> = self
            .iter()
            .filter(|(_, c)| c.norm() > floor)
            .map(|(n, c)| c * Complex64::from_polar(1.0, n as f64 * theta))
            .collect();
        terms.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
        let mut sum = Complex64::ZERO;
        let mut comp = Complex64::ZERO;
        for term in terms {
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        sum
    }
}

fn check_len(n: usize) -> Result<()> {
    if n < 8 || !n.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "sample count {n} must be a power of two, at least 8"
        )));
    }
    Ok(())
}

impl SampledCircleFunction {
    pub fn from_samples(samples: Vec<Complex64>) -> Result<Self> {
        check_len(samples.len())?;
        Ok(SampledCircleFunction { samples })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        check_len(n)?;
        let samples = (0..n).map(|k| f(TWO_PI * k as f64 / n as f64)).collect();
        Ok(SampledCircleFunction { samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn angle(&self, k: usize) -> f64 {
        TWO_PI * k as f64 / self.len() as f64
    }

    pub fn sample(&self, k: usize) -> Complex64 {
        self.samples[k]
    }

    pub fn spectrum(&self) -> CircleSpectrum {
        let n = self.len();
        let mut buf = self.samples.clone();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let half = n / 2;
        let mut coeffs = vec![Complex64::ZERO; n];
        let scale = 1.0 / n as f64;
        for (m, v) in buf.iter().enumerate() {
            let idx = if m < half { m + half } else { m - half };
            coeffs[idx] = v * scale;
        }
        CircleSpectrum { coeffs }
    }

    pub fn from_spectrum(spec: &CircleSpectrum) -> Result<Self> {
        let n = spec.coeffs.len();
        check_len(n)?;
        let half = n / 2;
        let mut buf = vec![Complex64::ZERO; n];
        for (idx, c) in spec.coeffs.iter().enumerate() {
            let m = if idx >= half { idx - half } else { idx + half };
            buf[m] = *c;
        }
        FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
        Ok(SampledCircleFunction { samples: buf })
    }

    /// Max sample deviation after a spectrum round trip.
    pub fn roundtrip_error(&self) -> f64 {
        let back = Self::from_spectrum(&self.spectrum()).expect("length preserved");
        self.samples
            .iter()
            .zip(back.samples.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn map_spectrum(&self, f: impl Fn(i64, Complex64) -> Complex64) -> Self {
        let spec = self.spectrum();
        let mapped = CircleSpectrum {
            coeffs: spec.iter().map(|(n, c)| f(n, c)).collect(),
        };
        Self::from_spectrum(&mapped).expect("length preserved")
    }

    /// Riesz projection: keep modes `n ≥ 0`.
    pub fn riesz_p(&self) -> Self {
        self.map_spectrum(|n, c| if n >= 0 { c } else { Complex64::ZERO })
    }

    /// Complementary projection `Q = I - P`.
    pub fn riesz_q(&self) -> Self {
        self.map_spectrum(|n, c| if n < 0 { c } else { Complex64::ZERO })
    }

    /// `S = P - Q`: sign multiplier on the spectrum.
    pub fn circle_s(&self) -> Self {
        self.map_spectrum(|n, c| if n >= 0 { c } else { -c })
    }

    /// Flip `(Jf)(θ_k) = e^{-iθ_k} f(-θ_k)`; exact on the sample grid.
    pub fn flip(&self) -> Self {
        let n = self.len();
        let samples = (0..n)
            .map(|k| {
                let src = (n - k) % n;
                Complex64::from_polar(1.0, -self.angle(k)) * self.samples[src]
            })
            .collect();
        SampledCircleFunction { samples }
    }

    /// `G = (P - Q)(I - J)` (the reduced form).
    pub fn op_g(&self) -> Self {
        self.sub(&self.flip()).circle_s()
    }

    /// `G = ½(I + J)(P - Q)(I - J)` (the defining form; agrees with
    /// [`Self::op_g`] identically).
    pub fn op_g_direct(&self) -> Self {
        let h = self.sub(&self.flip()).circle_s();
        h.add(&h.flip()).scale(Complex64::new(0.5, 0.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "sample counts differ");
        SampledCircleFunction {
            samples: self
                .samples
                .iter()
                .zip(other.samples.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "sample counts differ");
        SampledCircleFunction {
            samples: self
                .samples
                .iter()
                .zip(other.samples.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        SampledCircleFunction {
            samples: self.samples.iter().map(|v| v * c).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// A test function on `[-1, 1]`.
#[derive(Clone)]
pub struct IntervalTestFunction {
    label: String,
    f: Arc<dyn Fn(f64) -> Complex64 + Send + Sync>,
}

impl std::fmt::Debug for IntervalTestFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "IntervalTestFunction({})", self.label)
    }
}

impl IntervalTestFunction {
    pub fn from_fn(label: impl Into<String>, f: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        IntervalTestFunction { label: label.into(), f: Arc::new(f) }
    }

    /// The standard bump `exp(-1/(1-y²))`, zero outside `(-1, 1)`; all
    /// derivatives vanish at the endpoints.
    pub fn bump() -> Self {
        Self::from_fn("bump", |y: f64| {
            if y.abs() < 1.0 {
                Complex64::new((-1.0 / (1.0 - y * y)).exp(), 0.0)
            } else {
                Complex64::ZERO
            }
        })
    }

    pub fn eval(&self, y: f64) -> Complex64 {
        (self.f)(y)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let f = self.f.clone();
        IntervalTestFunction {
            label: format!("{}·scaled", self.label),
            f: Arc::new(move |y| c * f(y)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SioConfig {
    pub tolerance: f64,
    /// Half-width of the single panel straddling the evaluation point.
    pub near_width: f64,
    pub near_rule: usize,
}

impl Default for SioConfig {
    fn default() -> Self {
        SioConfig {
            tolerance: 1e-12,
            near_width: 1e-3,
            near_rule: 48,
        }
    }
}

/// Regularized evaluation of the finite-interval singular integral at
/// `x ∈ (-1, 1)`:
///
/// ```text
/// (1/πi) ∫ (f(y)-f(x))/(y-x) dy + f(x)/(πi) · ln((1-x)/(1+x)).
/// ```
pub fn sio_interval(f: &IntervalTestFunction, x: f64, cfg: &SioConfig) -> Result<Complex64> {
    if !(-1.0 < x && x < 1.0) {
        return Err(Error::Domain(format!("evaluation point {x} outside (-1, 1)")));
    }
    let fx = f.eval(x);
    let quotient = |y: f64| (f.eval(y) - fx) / (y - x);

    let lo = (x - cfg.near_width).max(-1.0);
    let hi = (x + cfg.near_width).min(1.0);
    let mut integral = Complex64::ZERO;
    if lo > -1.0 {
        integral += adaptive_complex(&quotient, -1.0, lo, cfg.tolerance)?;
    }
    // single even-order panel across x: the quotient is smooth and no node
    // lands on x itself
    let rule = gl_rule(cfg.near_rule + cfg.near_rule % 2);
    integral += integrate_panel_complex(&quotient, lo, hi, &rule);
    if hi < 1.0 {
        integral += adaptive_complex(&quotient, hi, 1.0, cfg.tolerance)?;
    }

    let over_pi_i = Complex64::new(0.0, -1.0 / PI); // 1/(πi)
    Ok(over_pi_i * integral + over_pi_i * fx * ((1.0 - x) / (1.0 + x)).ln())
}

/// One sample point of the transfer-identity check.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct Prop23Point {
    pub x: f64,
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub rhs_re: f64,
    pub rhs_im: f64,
    pub abs_err: f64,
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct Prop23Report {
    pub n: usize,
    pub points: Vec<Prop23Point>,
    /// Sample points skipped because `|x| > 0.95` (the `(1+t⁻¹)⁻¹`
    /// multiplication is ill-conditioned near `x = -1`, and symmetry caps
    /// the other side too).
    pub skipped: Vec<f64>,
    pub max_abs_err: f64,
}

/// `count` Chebyshev-spaced points in `(-radius, radius)`.
pub fn chebyshev_points(count: usize, radius: f64) -> Vec<f64> {
    (0..count)
        .map(|j| radius * (PI * (2.0 * j as f64 + 1.0) / (2.0 * count as f64)).cos())
        .collect()
}

/// Evaluate both sides of the transfer identity
/// `S_{[-1,1]} f̂ = ½ V L((1+t⁻¹)⁻¹) G L(χ(1+t⁻¹)) U f̂`
/// at the sample points, using `n` circle samples for the right-hand side.
pub fn prop23_residual(f: &IntervalTestFunction, xs: &[f64], n: usize) -> Result<Prop23Report> {
    let lifted = SampledCircleFunction::from_fn(n, |theta| {
        let chi = if theta < PI { 1.0 } else { -1.0 };
        let weight = Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, -theta);
        chi * weight * f.eval(theta.cos())
    })?;
    // Unfolding the circle kernel over this flip-antisymmetric lift produces
    // -(1+t⁻¹)·(S_{[-1,1]}f̂)(cos θ): with P keeping nonnegative modes,
    // J = t⁻¹f(t⁻¹) and χ positive on the upper half-circle, the read-off
    // needs the minus sign (the i/π ↔ 1/(πi) conversion in the half-circle
    // split flips it).
    let g = lifted.op_g().scale(Complex64::new(-0.5, 0.0));
    let spectrum = g.spectrum();

    let cfg = SioConfig::default();
    let mut points = Vec::new();
    let mut skipped = Vec::new();
    let mut max_abs_err = 0.0f64;
    for &x in xs {
        if x.abs() > 0.95 {
            skipped.push(x);
            continue;
        }
        let theta = x.acos();
        let denom = Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, -theta);
        let rhs = spectrum.eval(theta) / denom;
        let lhs = sio_interval(f, x, &cfg)?;
        let abs_err = (lhs - rhs).norm();
        max_abs_err = max_abs_err.max(abs_err);
        points.push(Prop23Point {
            x,
            lhs_re: lhs.re,
            lhs_im: lhs.im,
            rhs_re: rhs.re,
            rhs_im: rhs.im,
            abs_err,
        });
    }
    Ok(Prop23Report { n, points, skipped, max_abs_err })
}
