//! Analysis of Toeplitz-plus-Hankel operators `M(φ) = T(φ) + H(φ)` acting on
//! the Hardy space of the unit circle, for piecewise continuous symbols with
//! finitely many jumps.
//!
//! The crate decides Fredholmness and invertibility of `M(φ)` on `H^p`,
//! builds the explicit weak asymmetric factorization `ψ = ψ₋·ψ₀` of the pure
//! jump part, derives the associated power weight `σ` on `[-1, 1]` together
//! with its Muckenhoupt `A_p` diagnostics, and cross-checks the analytic
//! predictions against finite matrix truncations and quadrature.
//!
//! Module map:
//!
//! * [`symbol`] — trigonometric polynomials, canonical jump functions,
//!   piecewise continuous symbols and their β-parametrization.
//! * [`operators`] — finite Toeplitz/Hankel/sum truncations and the exact
//!   operator product identities.
//! * [`fredholm`] — the decision procedure (normalization, strict window
//!   conditions, winding number, defect numbers).
//! * [`factorization`] — the constructive `ψ₋·ψ₀` factorization and the
//!   σ-weight.
//! * [`weights`] — power weights on `[-1, 1]`, the `A_p` condition, dyadic
//!   supremum estimation.
//! * [`singular`] — the finite-interval singular integral operator, circle
//!   operators `P`, `Q`, `J`, `G`, and their transfer identity.
//! * [`verify`] — truncation sweeps and perturbation diagnostics
//!   (requires the `dense-svd` feature).
//! * [`cli`] — batch front end (requires the `cli` feature).

pub mod factorization;
pub mod fredholm;
pub mod operators;
pub mod quad;
pub mod rng;
pub mod singular;
pub mod symbol;
pub mod weights;

#[cfg(feature = "dense-svd")]
pub mod verify;

#[cfg(feature = "cli")]
pub mod cli;
#[cfg(feature = "cli")]
pub mod jsonfmt;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("evaluation at jump point (angle {theta})")]
    JumpPointEvaluation { theta: f64 },

    #[error("symbol vanishes (numerically): |value| = {magnitude:.3e} at angle {theta}")]
    SymbolVanishes { theta: f64, magnitude: f64 },

    #[error("quadrature tolerance not met: estimated error {estimate:.3e} exceeds {tolerance:.3e}")]
    QuadratureTolerance { estimate: f64, tolerance: f64 },

    #[error("insufficient coefficient range: need index {needed}, available |n| <= {available}")]
    InsufficientCoefficientRange { needed: i64, available: i64 },

    #[error("factorization conditions violated: {0}")]
    FactorizationConditions(String),

    #[error("winding number did not stabilize under grid refinement")]
    WindingUnstable,

    #[error("singular integration failed near node {node}")]
    SingularIntegration { node: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
