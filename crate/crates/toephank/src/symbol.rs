//! Piecewise continuous symbols on the unit circle.
//!
//! A symbol is written as a nonvanishing trigonometric polynomial `b` times a
//! product of canonical jump functions
//!
//! ```text
//! t_β(e^{iθ}) = exp(iβ(θ - π)),   0 < θ < 2π,
//! ```
//!
//! one factor at `t = 1` (exponent `β⁺`), one at `t = -1` (exponent `β⁻`),
//! and a pair of factors at `e^{±iθ_r}` for each `θ_r ∈ (0, π)`. The jump
//! ratio of `t_β` at its jump point is `exp(2πiβ)`, so the `β` parameters are
//! determined by the symbol only up to additive integers; integer shifts are
//! traded against monomial factors absorbed into `b`.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::quad::{self, CoefficientTable, QuadConfig, TWO_PI};
use crate::{Error, Result};

/// Reduce an angle into `[0, 2π)`.
pub fn reduce_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TWO_PI);
    if r == TWO_PI {
        0.0
    } else {
        r
    }
}

/// Wrap a relative angle into `(-π, π]`. Unlike `rem_euclid`, small inputs
/// pass through exactly, so evaluations just off a jump point keep full
/// relative precision.
pub(crate) fn wrap_angle_signed(d: f64) -> f64 {
    let mut w = d - TWO_PI * (d / TWO_PI).round();
    if w <= -PI {
        w += TWO_PI;
    }
    w
}

/// `θ' - π` for the reduced angle `θ' ∈ (0, 2π)`, computed from the signed
/// wrap without cancellation: `w - π` for `w > 0`, `w + π` for `w < 0`.
pub(crate) fn t_beta_phase(w: f64) -> f64 {
    if w > 0.0 {
        w - PI
    } else {
        w + PI
    }
}

/// Evaluate the canonical jump function `t_β` at angle `theta` (relative to
/// the jump point). The angle is reduced into `(0, 2π)`; the jump point
/// itself is rejected — use [`PCSymbol::one_sided_limits`] there.
pub fn eval_t_beta(beta: Complex64, theta: f64) -> Result<Complex64> {
    let w = wrap_angle_signed(theta);
    if w == 0.0 {
        return Err(Error::JumpPointEvaluation { theta });
    }
    Ok((Complex64::i() * beta * t_beta_phase(w)).exp())
}

/// Descriptor for a monomial factor `constant · t^power`.
///
/// Returned by [`reduce_beta`]: `t_β(t) = (constant · t^power) · t_{β+n}(t)`
/// with `power = -n`, so the factor compensates an integer shift of the
/// exponent when absorbed into the continuous part of a symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignMonomial {
    pub power: i64,
    pub constant: Complex64,
}

impl SignMonomial {
    pub fn eval(&self, theta: f64) -> Complex64 {
        self.constant * Complex64::from_polar(1.0, self.power as f64 * theta)
    }
}

/// Shift a jump exponent by an integer: `t_β = (-t)^{-n} · t_{β+n}`.
pub fn reduce_beta(beta: Complex64, n: i64) -> (Complex64, SignMonomial) {
    let constant = if n % 2 == 0 { 1.0 } else { -1.0 };
    (
        beta + n as f64,
        SignMonomial {
            power: -n,
            constant: Complex64::new(constant, 0.0),
        },
    )
}

// ---------------------------------------------------------------------------
// Trigonometric polynomials
// ---------------------------------------------------------------------------

/// Finitely supported two-sided Fourier series `Σ c_n t^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    coeffs: BTreeMap<i64, Complex64>,
}

impl TrigPolynomial {
    pub fn new(coeffs: BTreeMap<i64, Complex64>) -> Self {
        let coeffs = coeffs.into_iter().filter(|(_, c)| *c != Complex64::ZERO).collect();
        TrigPolynomial { coeffs }
    }

    pub fn from_triples(triples: &[(i64, f64, f64)]) -> Self {
        let mut m = BTreeMap::new();
        for &(n, re, im) in triples {
            *m.entry(n).or_insert(Complex64::ZERO) += Complex64::new(re, im);
        }
        Self::new(m)
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        let mut m = BTreeMap::new();
        m.insert(0, c);
        Self::new(m)
    }

    pub fn monomial(n: i64, c: Complex64) -> Self {
        let mut m = BTreeMap::new();
        m.insert(n, c);
        Self::new(m)
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        self.coeffs.get(&n).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&n, &c)| (n, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Complex64> {
        match self.coeffs.len() {
            0 => Some(Complex64::ZERO),
            1 => self.coeffs.get(&0).copied(),
            _ => None,
        }
    }

    /// Largest `|n|` in the support.
    pub fn degree_bound(&self) -> i64 {
        self.coeffs.keys().map(|n| n.abs()).max().unwrap_or(0)
    }

    pub fn support_range(&self) -> (i64, i64) {
        let min = self.coeffs.keys().next().copied().unwrap_or(0);
        let max = self.coeffs.keys().next_back().copied().unwrap_or(0);
        (min, max)
    }

    /// `Σ c_n e^{inθ}` — exact finite sum.
    pub fn eval(&self, theta: f64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for (&n, &c) in &self.coeffs {
            acc += c * Complex64::from_polar(1.0, n as f64 * theta);
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut m = self.coeffs.clone();
        for (&n, &c) in &other.coeffs {
            *m.entry(n).or_insert(Complex64::ZERO) += c;
        }
        Self::new(m)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|(&n, &v)| (n, v * c)).collect())
    }

    /// Convolution product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut m: BTreeMap<i64, Complex64> = BTreeMap::new();
        for (&n, &a) in &self.coeffs {
            for (&k, &b) in &other.coeffs {
                *m.entry(n + k).or_insert(Complex64::ZERO) += a * b;
            }
        }
        Self::new(m)
    }

    /// Multiply by `constant · t^power`.
    pub fn mul_monomial(&self, power: i64, constant: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|(&n, &c)| (n + power, c * constant)).collect())
    }

    /// Index reversal `c̃_n = c_{-n}`, i.e. the coefficients of `t ↦ f(1/t)`.
    pub fn tilde(&self) -> Self {
        Self::new(self.coeffs.iter().map(|(&n, &c)| (-n, c)).collect())
    }
}

#[derive(Serialize, Deserialize)]
struct TrigPolynomialWire {
    coeffs: Vec<(i64, f64, f64)>,
}

impl Serialize for TrigPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = self.coeffs.iter().map(|(&n, &c)| (n, c.re, c.im)).collect();
        TrigPolynomialWire { coeffs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TrigPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = TrigPolynomialWire::deserialize(d)?;
        let mut m = BTreeMap::new();
        for (n, re, im) in wire.coeffs {
            if m.insert(n, Complex64::new(re, im)).is_some() {
                return Err(serde::de::Error::custom(format!("duplicate coefficient index {n}")));
            }
        }
        Ok(TrigPolynomial::new(m))
    }
}

pub(crate) mod c64serde {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(c: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        (c.re, c.im).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let (re, im) = <(f64, f64)>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

// ---------------------------------------------------------------------------
// Piecewise continuous symbols
// ---------------------------------------------------------------------------

/// A conjugate pair of jumps at `e^{±iθ}`, `θ ∈ (0, π)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JumpPair {
    pub theta: f64,
    #[serde(with = "c64serde")]
    pub beta_plus: Complex64,
    #[serde(with = "c64serde")]
    pub beta_minus: Complex64,
}

/// Canonical form of a piecewise continuous symbol with finitely many jumps.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PCSymbol {
    pub b: TrigPolynomial,
    #[serde(with = "c64serde")]
    pub beta_plus: Complex64,
    #[serde(with = "c64serde")]
    pub beta_minus: Complex64,
    pub pairs: Vec<JumpPair>,
}

/// One jump factor: the angle of the jump point and its exponent.
#[derive(Debug, Clone, Copy)]
pub struct JumpSite {
    pub center: f64,
    pub beta: Complex64,
}

impl PCSymbol {
    pub fn new(
        b: TrigPolynomial,
        beta_plus: Complex64,
        beta_minus: Complex64,
        pairs: Vec<JumpPair>,
    ) -> Result<Self> {
        if b.is_zero() {
            return Err(Error::InvalidParameter("continuous part b must be nonzero".into()));
        }
        for pair in &pairs {
            if !(pair.theta > 0.0 && pair.theta < PI) {
                return Err(Error::InvalidParameter(format!(
                    "pair angle {} outside (0, π)",
                    pair.theta
                )));
            }
        }
        for i in 0..pairs.len() {
            for j in i + 1..pairs.len() {
                if (pairs[i].theta - pairs[j].theta).abs() < 1e-12 {
                    return Err(Error::InvalidParameter(format!(
                        "pair angles {} and {} coincide",
                        pairs[i].theta, pairs[j].theta
                    )));
                }
            }
        }
        Ok(PCSymbol {
            b,
            beta_plus,
            beta_minus,
            pairs,
        })
    }

    /// Symbol with no jumps.
    pub fn continuous(b: TrigPolynomial) -> Result<Self> {
        Self::new(b, Complex64::ZERO, Complex64::ZERO, Vec::new())
    }

    /// A single jump of exponent `beta_plus` at `t = 1`.
    pub fn single_jump(beta_plus: Complex64) -> Self {
        PCSymbol {
            b: TrigPolynomial::one(),
            beta_plus,
            beta_minus: Complex64::ZERO,
            pairs: Vec::new(),
        }
    }

    /// All jump factors, including zero exponents.
    pub fn jump_sites(&self) -> Vec<JumpSite> {
        let mut sites = vec![
            JumpSite { center: 0.0, beta: self.beta_plus },
            JumpSite { center: PI, beta: self.beta_minus },
        ];
        for pair in &self.pairs {
            sites.push(JumpSite { center: pair.theta, beta: pair.beta_plus });
            sites.push(JumpSite { center: TWO_PI - pair.theta, beta: pair.beta_minus });
        }
        sites
    }

    /// Angles where the symbol genuinely jumps (nonzero exponent), sorted.
    pub fn jump_angles(&self) -> Vec<f64> {
        let mut angles: Vec<f64> = self
            .jump_sites()
            .into_iter()
            .filter(|s| s.beta != Complex64::ZERO)
            .map(|s| s.center)
            .collect();
        angles.sort_by(f64::total_cmp);
        angles
    }

    pub fn is_pure_jump(&self) -> bool {
        self.b.as_constant().is_some()
    }

    /// The same jumps with `b` replaced by 1.
    pub fn pure_jump_part(&self) -> PCSymbol {
        PCSymbol {
            b: TrigPolynomial::one(),
            ..self.clone()
        }
    }

    /// Evaluate at a non-jump angle.
    pub fn eval(&self, theta: f64) -> Result<Complex64> {
        let mut v = self.b.eval(theta);
        for site in self.jump_sites() {
            if site.beta == Complex64::ZERO {
                continue;
            }
            match eval_t_beta(site.beta, theta - site.center) {
                Ok(f) => v *= f,
                Err(Error::JumpPointEvaluation { .. }) => {
                    return Err(Error::JumpPointEvaluation { theta });
                }
                Err(e) => return Err(e),
            }
        }
        Ok(v)
    }

    /// Left and right limits `(φ(e^{iθ}-0), φ(e^{iθ}+0))`; both equal the
    /// value at continuity points.
    pub fn one_sided_limits(&self, theta: f64) -> (Complex64, Complex64) {
        let bv = self.b.eval(theta);
        let mut left = bv;
        let mut right = bv;
        for site in self.jump_sites() {
            if site.beta == Complex64::ZERO {
                continue;
            }
            let w = wrap_angle_signed(theta - site.center);
            if w.abs() < 1e-12 {
                // Approaching the jump from below drives the relative angle
                // to 2π, from above to 0.
                left *= (Complex64::i() * site.beta * PI).exp();
                right *= (-Complex64::i() * site.beta * PI).exp();
            } else {
                let v = (Complex64::i() * site.beta * t_beta_phase(w)).exp();
                left *= v;
                right *= v;
            }
        }
        (left, right)
    }

    /// Fourier coefficients `c_n`, `|n| ≤ max_index`, by panel quadrature
    /// split at the jump angles.
    pub fn fourier_table(&self, max_index: i64, cfg: &QuadConfig) -> Result<CoefficientTable> {
        if max_index < 1 {
            return Err(Error::InvalidParameter("max_index must be at least 1".into()));
        }
        let angles = self.jump_angles();
        let f = |theta: f64| self.eval(theta).unwrap_or(Complex64::ZERO);
        quad::fourier_coefficients(&f, &angles, false, max_index, cfg)
    }

    /// Fourier coefficients packaged as a (truncated) trigonometric
    /// polynomial.
    pub fn fourier_coeffs(&self, max_index: i64, cfg: &QuadConfig) -> Result<TrigPolynomial> {
        let table = self.fourier_table(max_index, cfg)?;
        let mut m = BTreeMap::new();
        for (n, c) in table.iter() {
            m.insert(n, c);
        }
        Ok(TrigPolynomial::new(m))
    }
}

// ---------------------------------------------------------------------------
// Winding number
// ---------------------------------------------------------------------------

fn winding_on_grid(b: &TrigPolynomial, grid: usize, tol: f64) -> Result<f64> {
    let mut values = Vec::with_capacity(grid);
    for k in 0..grid {
        let theta = TWO_PI * k as f64 / grid as f64;
        let z = b.eval(theta);
        if z.norm() < tol {
            return Err(Error::SymbolVanishes {
                theta,
                magnitude: z.norm(),
            });
        }
        values.push(z);
    }
    let mut total = 0.0;
    for k in 0..grid {
        let next = values[(k + 1) % grid];
        total += (next / values[k]).arg();
    }
    Ok(total / TWO_PI)
}

/// Winding number of a nonvanishing trigonometric polynomial, by phase
/// unwrapping with refinement until two consecutive grids agree.
pub fn winding_number(b: &TrigPolynomial, grid: usize) -> Result<i64> {
    const TOL: f64 = 1e-10;
    let mut m = grid.max(16);
    let mut prev: Option<i64> = None;
    while m <= (1 << 21) {
        let raw = winding_on_grid(b, m, TOL)?;
        let rounded = raw.round();
        if (raw - rounded).abs() < 0.25 {
            let w = rounded as i64;
            if prev == Some(w) {
                return Ok(w);
            }
            prev = Some(w);
        } else {
            prev = None;
        }
        m *= 2;
    }
    Err(Error::WindingUnstable)
}

// ---------------------------------------------------------------------------
// Parameter normalization
// ---------------------------------------------------------------------------

/// Which β parameter a diagnostic refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamRef {
    BetaPlus,
    BetaMinus,
    PairSum(usize),
    PairPlus(usize),
    PairMinus(usize),
}

/// A normalized real part that sits exactly on the closed end of its window
/// (within `1e-12`, modulo 1).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BoundaryFlag {
    pub param: ParamRef,
    /// Real part after normalization.
    pub re: f64,
    /// The critical (closed) endpoint of the window.
    pub endpoint: f64,
}

/// Integer shifts applied to each parameter during normalization.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ShiftRecord {
    pub beta_plus: i64,
    pub beta_minus: i64,
    pub pair_plus: Vec<i64>,
    pub pair_minus: Vec<i64>,
}

/// Result of β-normalization: an equal symbol with each real part moved into
/// its half-open window, monomial compensations absorbed into `b`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormalizedSymbol {
    pub symbol: PCSymbol,
    pub boundary_flags: Vec<BoundaryFlag>,
    pub shifts: ShiftRecord,
}

/// Integer `n` with `re - n ∈ (right-1, right]`, plus a flag when `re` lies
/// on the critical line `right (mod 1)` within `1e-12`.
pub(crate) fn shift_into_window(re: f64, right: f64) -> (i64, bool) {
    const BOUNDARY_TOL: f64 = 1e-12;
    let n = (re - right).ceil();
    let d = (re - right).rem_euclid(1.0);
    let boundary = d <= BOUNDARY_TOL || d >= 1.0 - BOUNDARY_TOL;
    (n as i64, boundary)
}

/// Compensating monomial for shifting the exponent at `center` down by `n`:
/// `t_β(e^{i(θ-c)}) = ((-e^{-ic})·t)^n · t_{β-n}(e^{i(θ-c)})`.
fn absorb_shift(b: &TrigPolynomial, center: f64, n: i64) -> TrigPolynomial {
    if n == 0 {
        return b.clone();
    }
    let base = -Complex64::from_polar(1.0, -center);
    b.mul_monomial(n, base.powi(n as i32))
}

pub(crate) struct WindowSet {
    pub beta_plus_right: f64,
    pub beta_minus_right: f64,
    pub pair_right: f64,
    /// Pair windows constrain the sum `β_r⁺ + β_r⁻` (Toeplitz-plus-Hankel
    /// case) or each exponent separately (Toeplitz baseline).
    pub pair_individually: bool,
}

impl WindowSet {
    pub fn toeplitz_hankel(p: f64) -> WindowSet {
        WindowSet {
            beta_plus_right: 1.0 / (2.0 * p),
            beta_minus_right: 0.5 + 1.0 / (2.0 * p),
            pair_right: 1.0 / p,
            pair_individually: false,
        }
    }

    pub fn toeplitz(p: f64) -> WindowSet {
        WindowSet {
            beta_plus_right: 1.0 / p,
            beta_minus_right: 1.0 / p,
            pair_right: 1.0 / p,
            pair_individually: true,
        }
    }
}

pub(crate) fn check_p(p: f64) -> Result<()> {
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::InvalidParameter(format!("exponent p = {p} must satisfy 1 < p < ∞")));
    }
    Ok(())
}

pub(crate) fn normalize_with_windows(sym: &PCSymbol, windows: &WindowSet) -> NormalizedSymbol {
    let mut b = sym.b.clone();
    let mut flags = Vec::new();
    let mut shifts = ShiftRecord::default();

    let (n_plus, boundary) = shift_into_window(sym.beta_plus.re, windows.beta_plus_right);
    let beta_plus = sym.beta_plus - n_plus as f64;
    b = absorb_shift(&b, 0.0, n_plus);
    shifts.beta_plus = n_plus;
    if boundary {
        flags.push(BoundaryFlag {
            param: ParamRef::BetaPlus,
            re: beta_plus.re,
            endpoint: windows.beta_plus_right,
        });
    }

    let (n_minus, boundary) = shift_into_window(sym.beta_minus.re, windows.beta_minus_right);
    let beta_minus = sym.beta_minus - n_minus as f64;
    b = absorb_shift(&b, PI, n_minus);
    shifts.beta_minus = n_minus;
    if boundary {
        flags.push(BoundaryFlag {
            param: ParamRef::BetaMinus,
            re: beta_minus.re,
            endpoint: windows.beta_minus_right,
        });
    }

    let mut pairs = Vec::with_capacity(sym.pairs.len());
    for (r, pair) in sym.pairs.iter().enumerate() {
        let mut new_pair = pair.clone();
        if windows.pair_individually {
            let (n_p, bd_p) = shift_into_window(pair.beta_plus.re, windows.pair_right);
            new_pair.beta_plus = pair.beta_plus - n_p as f64;
            b = absorb_shift(&b, pair.theta, n_p);
            shifts.pair_plus.push(n_p);
            if bd_p {
                flags.push(BoundaryFlag {
                    param: ParamRef::PairPlus(r),
                    re: new_pair.beta_plus.re,
                    endpoint: windows.pair_right,
                });
            }
            let (n_m, bd_m) = shift_into_window(pair.beta_minus.re, windows.pair_right);
            new_pair.beta_minus = pair.beta_minus - n_m as f64;
            b = absorb_shift(&b, TWO_PI - pair.theta, n_m);
            shifts.pair_minus.push(n_m);
            if bd_m {
                flags.push(BoundaryFlag {
                    param: ParamRef::PairMinus(r),
                    re: new_pair.beta_minus.re,
                    endpoint: windows.pair_right,
                });
            }
        } else {
            // Only the sum is constrained; by convention the whole integer
            // shift lands on β_r⁺.
            let sum_re = pair.beta_plus.re + pair.beta_minus.re;
            let (n_r, bd) = shift_into_window(sum_re, windows.pair_right);
            new_pair.beta_plus = pair.beta_plus - n_r as f64;
            b = absorb_shift(&b, pair.theta, n_r);
            shifts.pair_plus.push(n_r);
            shifts.pair_minus.push(0);
            if bd {
                flags.push(BoundaryFlag {
                    param: ParamRef::PairSum(r),
                    re: new_pair.beta_plus.re + new_pair.beta_minus.re,
                    endpoint: windows.pair_right,
                });
            }
        }
        pairs.push(new_pair);
    }

    NormalizedSymbol {
        symbol: PCSymbol {
            b,
            beta_plus,
            beta_minus,
            pairs,
        },
        boundary_flags: flags,
        shifts,
    }
}

/// Normalize the β parameters for the Toeplitz-plus-Hankel conditions at
/// exponent `p`: `Re β⁺ ∈ (-1/2-1/2q, 1/2p]`, `Re β⁻ ∈ (-1/2q, 1/2+1/2p]`,
/// `Re(β_r⁺+β_r⁻) ∈ (-1/q, 1/p]`. Equality at the closed endpoint raises a
/// boundary flag; the windows have width one, so the shifts are unique.
pub fn normalize_parameters(sym: &PCSymbol, p: f64) -> Result<NormalizedSymbol> {
    check_p(p)?;
    Ok(normalize_with_windows(sym, &WindowSet::toeplitz_hankel(p)))
}
