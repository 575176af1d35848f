//! Finite truncations of Toeplitz, Hankel, and Toeplitz-plus-Hankel matrices.
//!
//! With respect to the monomial basis of the Hardy space, the operators
//! `T(φ): f ↦ P(φf)` and `H(φ): f ↦ P(φ·Jf)` with flip `(Jf)(t) = t⁻¹f(t⁻¹)`
//! have matrix entries
//!
//! ```text
//! T(φ)[j][k] = c_{j-k},      H(φ)[j][k] = c_{j+k+1},
//! ```
//!
//! where `c_n` are the Fourier coefficients of `φ`. (Apply the defining rules
//! to `f = t^k`: `φ t^k` contributes `c_{j-k}` to mode `j`, and
//! `J t^k = t^{-k-1}` turns `φ·Jf` into coefficients `c_{j+k+1}`.)

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::quad::CoefficientTable;
use crate::symbol::TrigPolynomial;
use crate::{Error, Result};

/// Largest supported truncation size for dense storage.
pub const MAX_TRUNCATION: usize = 2048;

/// Anything that can hand out Fourier coefficients. `None` means the
/// coefficient is not available (out of the computed range).
pub trait CoefficientSource {
    fn coefficient(&self, n: i64) -> Option<Complex64>;
    fn describe(&self) -> String;
}

impl CoefficientSource for TrigPolynomial {
    fn coefficient(&self, n: i64) -> Option<Complex64> {
        Some(self.coeff(n))
    }

    fn describe(&self) -> String {
        let (lo, hi) = self.support_range();
        format!("trig polynomial, support [{lo}, {hi}]")
    }
}

impl CoefficientSource for CoefficientTable {
    fn coefficient(&self, n: i64) -> Option<Complex64> {
        self.coeff(n)
    }

    fn describe(&self) -> String {
        format!("quadrature table, |n| <= {}", self.max_index())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    Toeplitz,
    Hankel,
    Sum,
}

/// Dense `n×n` truncation, row-major.
#[derive(Debug, Clone)]
pub struct OperatorTruncation {
    pub kind: OperatorKind,
    pub n: usize,
    entries: Vec<Complex64>,
    pub source: String,
}

impl OperatorTruncation {
    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.entries[j * self.n + k]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    fn from_fn(kind: OperatorKind, n: usize, source: String, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for j in 0..n {
            for k in 0..n {
                entries.push(f(j, k));
            }
        }
        OperatorTruncation { kind, n, entries, source }
    }

    /// Row-major CSV with one `"re,im"` cell per entry.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for j in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|k| {
                    let c = self.get(j, k);
                    format!("\"{:.17e},{:.17e}\"", c.re, c.im)
                })
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct TruncationWire {
    kind: OperatorKind,
    n: usize,
    entries: Vec<Vec<(f64, f64)>>,
}

impl Serialize for OperatorTruncation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = (0..self.n)
            .map(|j| (0..self.n).map(|k| { let c = self.get(j, k); (c.re, c.im) }).collect())
            .collect();
        TruncationWire { kind: self.kind, n: self.n, entries }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for OperatorTruncation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = TruncationWire::deserialize(d)?;
        if wire.entries.len() != wire.n || wire.entries.iter().any(|r| r.len() != wire.n) {
            return Err(serde::de::Error::custom("entry matrix is not n×n"));
        }
        let entries = wire
            .entries
            .iter()
            .flatten()
            .map(|&(re, im)| Complex64::new(re, im))
            .collect();
        Ok(OperatorTruncation {
            kind: wire.kind,
            n: wire.n,
            entries,
            source: "deserialized".into(),
        })
    }
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_TRUNCATION {
        return Err(Error::Domain(format!(
            "truncation size {n} outside supported range 1..={MAX_TRUNCATION}"
        )));
    }
    Ok(())
}

fn required(src: &dyn CoefficientSource, n: i64) -> Result<Complex64> {
    src.coefficient(n).ok_or(Error::InsufficientCoefficientRange {
        needed: n,
        available: n.abs() - 1,
    })
}

/// `T_n(φ)` with entries `c_{j-k}`.
pub fn toeplitz_truncation(src: &dyn CoefficientSource, n: usize) -> Result<OperatorTruncation> {
    check_size(n)?;
    let m = n as i64;
    let mut diag = Vec::with_capacity(2 * n - 1);
    for d in (1 - m)..m {
        diag.push(required(src, d)?);
    }
    Ok(OperatorTruncation::from_fn(OperatorKind::Toeplitz, n, src.describe(), |j, k| {
        diag[(j as i64 - k as i64 + m - 1) as usize]
    }))
}

/// `H_n(φ)` with entries `c_{j+k+1}`.
pub fn hankel_truncation(src: &dyn CoefficientSource, n: usize) -> Result<OperatorTruncation> {
    check_size(n)?;
    let mut anti = Vec::with_capacity(2 * n - 1);
    for s in 1..=(2 * n as i64 - 1) {
        anti.push(required(src, s)?);
    }
    Ok(OperatorTruncation::from_fn(OperatorKind::Hankel, n, src.describe(), |j, k| {
        anti[j + k]
    }))
}

/// `M_n(φ) = T_n(φ) + H_n(φ)`.
pub fn m_truncation(src: &dyn CoefficientSource, n: usize) -> Result<OperatorTruncation> {
    let t = toeplitz_truncation(src, n)?;
    let h = hankel_truncation(src, n)?;
    let entries = t
        .entries
        .iter()
        .zip(h.entries.iter())
        .map(|(a, b)| a + b)
        .collect();
    Ok(OperatorTruncation {
        kind: OperatorKind::Sum,
        n,
        entries,
        source: t.source,
    })
}

/// Index-reversed coefficients: the symbol `t ↦ φ(1/t)`.
pub fn tilde(c: &TrigPolynomial) -> TrigPolynomial {
    c.tilde()
}

fn matmul(a: &OperatorTruncation, b: &OperatorTruncation) -> Vec<Complex64> {
    let n = a.n;
    let mut out = vec![Complex64::ZERO; n * n];
    for j in 0..n {
        for l in 0..n {
            let ajl = a.get(j, l);
            if ajl == Complex64::ZERO {
                continue;
            }
            for k in 0..n {
                out[j * n + k] += ajl * b.get(l, k);
            }
        }
    }
    out
}

/// Max-abs deviation, over a `window × window` block, of the two exact
/// operator product identities
///
/// ```text
/// T(ab) = T(a)T(b) + H(a)H(b̃),
/// H(ab) = T(a)H(b) + H(a)T(b̃),
/// ```
///
/// for finitely supported `a`, `b`. The products are evaluated at size
/// `window + deg(a) + deg(b)`, which makes the semi-infinite sums exact on
/// the inspected block, so the deviation is pure rounding noise.
pub fn product_identity_residual(a: &TrigPolynomial, b: &TrigPolynomial, window: usize) -> Result<f64> {
    let m = window + a.degree_bound() as usize + b.degree_bound() as usize;
    let ab = a.mul(b);
    let b_tilde = b.tilde();

    let t_a = toeplitz_truncation(a, m)?;
    let t_b = toeplitz_truncation(b, m)?;
    let h_a = hankel_truncation(a, m)?;
    let h_b = hankel_truncation(b, m)?;
    let t_bt = toeplitz_truncation(&b_tilde, m)?;
    let h_bt = hankel_truncation(&b_tilde, m)?;
    let t_ab = toeplitz_truncation(&ab, m)?;
    let h_ab = hankel_truncation(&ab, m)?;

    let tt = matmul(&t_a, &t_b);
    let hh = matmul(&h_a, &h_bt);
    let th = matmul(&t_a, &h_b);
    let ht = matmul(&h_a, &t_bt);

    let mut worst = 0.0f64;
    for j in 0..window {
        for k in 0..window {
            let idx = j * m + k;
            let d1 = (t_ab.get(j, k) - tt[idx] - hh[idx]).norm();
            let d2 = (h_ab.get(j, k) - th[idx] - ht[idx]).norm();
            worst = worst.max(d1).max(d2);
        }
    }
    Ok(worst)
}

/// Full set of singular values, descending.
#[cfg(feature = "dense-svd")]
pub fn singular_values(m: &OperatorTruncation) -> Result<Vec<f64>> {
    let mat = faer::Mat::from_fn(m.n, m.n, |i, j| m.get(i, j));
    let svd = mat
        .svd()
        .map_err(|e| Error::Domain(format!("svd failed to converge: {e:?}")))?;
    let s = svd.S();
    Ok((0..m.n).map(|i| s[i].re).collect())
}
