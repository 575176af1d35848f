//! Fredholm and invertibility verdicts for `M(φ) = T(φ) + H(φ)` on `H^p`.
//!
//! After β-normalization, `M(φ)` is Fredholm exactly when every normalized
//! real part lies strictly inside its window:
//!
//! ```text
//! (i)   -1/q < Re(β_r⁺ + β_r⁻) < 1/p              (pairs at e^{±iθ_r})
//! (ii)  -1/2 - 1/2q < Re β⁺ < 1/2p                 (jump at t = 1)
//!       -1/2q < Re β⁻ < 1/2 + 1/2p                 (jump at t = -1)
//! ```
//!
//! with `q = p/(p-1)`. Equality at the closed window end is reported as a
//! boundary flag and the verdict is "not Fredholm" — no ε-perturbation is
//! applied here (see `verify::perturbation_diagnostic` for that diagnostic).
//! In the Fredholm case the defect numbers are
//! `dim ker = max{0, -wind(b)}` and `dim coker = max{0, wind(b)}` for the
//! normalized continuous part `b`, so `M(φ)` is invertible exactly when it is
//! Fredholm with `wind(b) = 0`.

use serde::{Deserialize, Serialize};

use crate::symbol::{
    check_p, normalize_with_windows, winding_number, BoundaryFlag, NormalizedSymbol, PCSymbol,
    WindowSet,
};
use crate::{Error, Result};

/// Grid used to certify that `b` does not vanish (numerically).
pub const NONVANISHING_GRID: usize = 4096;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FredholmReport {
    pub p: f64,
    pub fredholm: bool,
    pub invertible: bool,
    /// Factorization index, equal to the winding number of the normalized
    /// continuous part. Zero when the winding is unavailable (vanishing `b`).
    pub kappa: i64,
    pub dim_ker: Option<u64>,
    pub dim_coker: Option<u64>,
    pub boundary_flags: Vec<BoundaryFlag>,
    pub normalized: PCSymbol,
    /// Present exactly when the verdict is "not Fredholm".
    pub reason: Option<String>,
}

impl FredholmReport {
    /// Fredholm index `dim ker - dim coker = -kappa`.
    pub fn index(&self) -> i64 {
        -self.kappa
    }
}

/// Classical Toeplitz-only criterion, as a comparison baseline: every jump
/// exponent individually in `(-1/q, 1/p)`, index `-wind(b)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ToeplitzReport {
    pub p: f64,
    pub fredholm: bool,
    pub invertible: bool,
    /// Fredholm index of `T(φ)`, `-wind(b)` of the normalized symbol.
    pub index: i64,
    pub boundary_flags: Vec<BoundaryFlag>,
    pub normalized: PCSymbol,
    pub reason: Option<String>,
}

fn describe_flags(flags: &[BoundaryFlag]) -> String {
    let parts: Vec<String> = flags
        .iter()
        .map(|f| format!("{:?} at endpoint {}", f.param, f.endpoint))
        .collect();
    format!("normalized parameter on window endpoint: {}", parts.join("; "))
}

fn winding_or_vanishing(normalized: &NormalizedSymbol) -> Result<std::result::Result<i64, String>> {
    match winding_number(&normalized.symbol.b, NONVANISHING_GRID) {
        Ok(w) => Ok(Ok(w)),
        Err(Error::SymbolVanishes { theta, magnitude }) => Ok(Err(format!(
            "b vanishes on the certification grid (|b| = {magnitude:.3e} at angle {theta:.6}): the symbol is not invertible in L^inf, hence not Fredholm"
        ))),
        Err(e) => Err(e),
    }
}

/// Decide Fredholmness, invertibility, and defect numbers of `M(φ)` on `H^p`.
pub fn predict(sym: &PCSymbol, p: f64) -> Result<FredholmReport> {
    check_p(p)?;
    let normalized = normalize_with_windows(sym, &WindowSet::toeplitz_hankel(p));
    let winding = winding_or_vanishing(&normalized)?;

    let report = match winding {
        Err(reason) => FredholmReport {
            p,
            fredholm: false,
            invertible: false,
            kappa: 0,
            dim_ker: None,
            dim_coker: None,
            boundary_flags: normalized.boundary_flags,
            normalized: normalized.symbol,
            reason: Some(reason),
        },
        Ok(wind) => {
            let fredholm = normalized.boundary_flags.is_empty();
            FredholmReport {
                p,
                fredholm,
                invertible: fredholm && wind == 0,
                kappa: wind,
                dim_ker: fredholm.then_some(std::cmp::max(0, -wind) as u64),
                dim_coker: fredholm.then_some(std::cmp::max(0, wind) as u64),
                reason: (!fredholm).then(|| describe_flags(&normalized.boundary_flags)),
                boundary_flags: normalized.boundary_flags,
                normalized: normalized.symbol,
            }
        }
    };
    Ok(report)
}

/// The classical Toeplitz criterion with windows `(-1/q, 1/p]` for every
/// individual jump exponent.
pub fn toeplitz_reference_predict(sym: &PCSymbol, p: f64) -> Result<ToeplitzReport> {
    check_p(p)?;
    let normalized = normalize_with_windows(sym, &WindowSet::toeplitz(p));
    let winding = winding_or_vanishing(&normalized)?;

    let report = match winding {
        Err(reason) => ToeplitzReport {
            p,
            fredholm: false,
            invertible: false,
            index: 0,
            boundary_flags: normalized.boundary_flags,
            normalized: normalized.symbol,
            reason: Some(reason),
        },
        Ok(wind) => {
            let fredholm = normalized.boundary_flags.is_empty();
            ToeplitzReport {
                p,
                fredholm,
                invertible: fredholm && wind == 0,
                index: -wind,
                reason: (!fredholm).then(|| describe_flags(&normalized.boundary_flags)),
                boundary_flags: normalized.boundary_flags,
                normalized: normalized.symbol,
            }
        }
    };
    Ok(report)
}
