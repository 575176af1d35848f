//! Weights on `[-1, 1]` and the Muckenhoupt `A_p` condition.
//!
//! A [`PowerWeight`] is a product `Π |x - x_r|^{α_r}` times a bounded
//! positive prefactor. For pure power weights the `A_p` verdict is exact:
//! `σ ∈ A_p` iff every exponent satisfies `-1/p < α_r < 1/q` strictly. The
//! dyadic supremum estimator backs that verdict empirically for arbitrary
//! weight handles by scanning
//!
//! ```text
//! (1/|I|) (∫_I σ^p)^{1/p} (∫_I σ^{-q})^{1/q}
//! ```
//!
//! over nested dyadic subintervals plus node-centered intervals of shrinking
//! width. The restriction to this comparability family (instead of all
//! subintervals) makes the estimator a labeled diagnostic, not a proof.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

use crate::quad::{integrate_singular_real, SingularIntegral};
use crate::symbol::check_p;
use crate::{Error, Result};

/// Bounded positive prefactor of a power weight.
#[derive(Clone)]
pub enum Prefactor {
    One,
    Custom {
        label: String,
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl Prefactor {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Prefactor::One => 1.0,
            Prefactor::Custom { f, .. } => f(x),
        }
    }

    pub fn label(&self) -> &str {
        match self {
            Prefactor::One => "one",
            Prefactor::Custom { label, .. } => label,
        }
    }
}

impl fmt::Debug for Prefactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Prefactor({})", self.label())
    }
}

/// `σ(x) = prefactor(x) · Π |x - x_r|^{α_r}` on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct PowerWeight {
    nodes: Vec<f64>,
    exponents: Vec<f64>,
    prefactor: Prefactor,
}

/// Plain-data wire form: `{"nodes": [...], "exponents": [...], "prefactor":
/// "one" | "psi0-derived"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightSpec {
    pub nodes: Vec<f64>,
    pub exponents: Vec<f64>,
    pub prefactor: String,
}

impl Serialize for PowerWeight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WeightSpec {
            nodes: self.nodes.clone(),
            exponents: self.exponents.clone(),
            prefactor: self.prefactor.label().to_string(),
        }
        .serialize(s)
    }
}

impl PowerWeight {
    pub fn new(nodes: Vec<f64>, exponents: Vec<f64>) -> Result<Self> {
        Self::with_prefactor(nodes, exponents, Prefactor::One)
    }

    pub fn with_prefactor(nodes: Vec<f64>, exponents: Vec<f64>, prefactor: Prefactor) -> Result<Self> {
        if nodes.len() != exponents.len() {
            return Err(Error::InvalidParameter(
                "nodes and exponents must have equal length".into(),
            ));
        }
        for &x in &nodes {
            if !(-1.0..=1.0).contains(&x) {
                return Err(Error::InvalidParameter(format!("node {x} outside [-1, 1]")));
            }
        }
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                if (nodes[i] - nodes[j]).abs() < 1e-12 {
                    return Err(Error::InvalidParameter(format!(
                        "nodes {} and {} coincide",
                        nodes[i], nodes[j]
                    )));
                }
            }
        }
        if exponents.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidParameter("exponents must be finite".into()));
        }
        Ok(PowerWeight { nodes, exponents, prefactor })
    }

    /// Build from the wire form; only the trivial prefactor can be restored
    /// from data (a "psi0-derived" prefactor needs the factorization it came
    /// from).
    pub fn from_spec(spec: &WeightSpec) -> Result<Self> {
        if spec.prefactor != "one" {
            return Err(Error::Config(format!(
                "prefactor '{}' cannot be reconstructed from a weight spec; derive it from a symbol",
                spec.prefactor
            )));
        }
        Self::new(spec.nodes.clone(), spec.exponents.clone())
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn exponents(&self) -> &[f64] {
        &self.exponents
    }

    pub fn prefactor(&self) -> &Prefactor {
        &self.prefactor
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut v = self.prefactor.eval(x);
        for (node, alpha) in self.nodes.iter().zip(self.exponents.iter()) {
            v *= (x - node).abs().powf(*alpha);
        }
        v
    }

    /// Positive bounds `[m, M]` of the prefactor, certified on a grid of
    /// midpoints avoiding the nodes.
    pub fn certify_prefactor_bounds(&self, grid: usize) -> Result<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for k in 0..grid {
            let x = -1.0 + 2.0 * (k as f64 + 0.5) / grid as f64;
            if self.nodes.iter().any(|n| (x - n).abs() < 1e-9) {
                continue;
            }
            let v = self.prefactor.eval(x);
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "prefactor not positive/finite at x = {x}: {v}"
                )));
            }
            lo = lo.min(v);
            hi = hi.max(v);
        }
        Ok((lo, hi))
    }
}

/// Exact `A_p` verdict for power weights.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Lemma31Report {
    pub p: f64,
    pub q: f64,
    /// True iff every exponent lies strictly in `(-1/p, 1/q)`.
    pub ap: bool,
    /// `σ ∈ L^p` ⟺ every exponent `> -1/p`.
    pub sigma_in_lp: bool,
    /// `σ^{-1} ∈ L^q` ⟺ every exponent `< 1/q`.
    pub sigma_inv_in_lq: bool,
}

pub fn lemma31_verdict(w: &PowerWeight, p: f64) -> Result<Lemma31Report> {
    check_p(p)?;
    let q = p / (p - 1.0);
    let lower = -1.0 / p;
    let upper = 1.0 / q;
    let sigma_in_lp = w.exponents.iter().all(|&a| a > lower);
    let sigma_inv_in_lq = w.exponents.iter().all(|&a| a < upper);
    Ok(Lemma31Report {
        p,
        q,
        ap: sigma_in_lp && sigma_inv_in_lq,
        sigma_in_lp,
        sigma_inv_in_lq,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApVerdict {
    Bounded,
    Diverging,
    Inconclusive,
}

/// Dyadic supremum scan. `level_sups[ℓ-1]` is the running supremum over all
/// dyadic intervals of levels `≤ ℓ` plus node-centered intervals of widths
/// `≥ 2^{-ℓ}` — a nested family, so the sequence is nondecreasing.
/// `f64::INFINITY` records a divergent interval quotient (serialized as
/// `null`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct APEstimate {
    pub p: f64,
    pub depth: u32,
    #[serde(with = "inf_as_null_vec")]
    pub level_sups: Vec<f64>,
    pub verdict: ApVerdict,
    /// Number of interval quotients whose quadrature neither converged nor
    /// diverged cleanly.
    pub inconclusive_intervals: usize,
}

mod inf_as_null_vec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        let opts: Vec<Option<f64>> = v.iter().map(|&x| x.is_finite().then_some(x)).collect();
        opts.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        let opts: Vec<Option<f64>> = Vec::deserialize(d)?;
        Ok(opts.into_iter().map(|o| o.unwrap_or(f64::INFINITY)).collect())
    }
}

#[derive(Debug, Clone)]
pub struct ApConfig {
    pub depth: u32,
    /// Graded-mesh depth toward singular nodes (ratio 1/2).
    pub grading_levels: u32,
    pub gl_nodes: usize,
    /// "Bounded" when the last three level sups vary by at most this much.
    pub stability_tol: f64,
    /// "Diverging" when consecutive level sups grow at least this fast over
    /// the last three levels.
    pub growth_ratio: f64,
}

impl Default for ApConfig {
    fn default() -> Self {
        ApConfig {
            depth: 12,
            grading_levels: 40,
            gl_nodes: 16,
            stability_tol: 0.05,
            growth_ratio: 1.5,
        }
    }
}

enum Quotient {
    Finite(f64),
    Divergent,
    Inconclusive(f64),
}

fn combine_integrals(ip: &SingularIntegral, iq: &SingularIntegral, width: f64, p: f64, q: f64) -> Quotient {
    if ip.diverging || iq.diverging {
        return Quotient::Divergent;
    }
    let v = ip.value.powf(1.0 / p) * iq.value.powf(1.0 / q) / width;
    if ip.converged && iq.converged {
        Quotient::Finite(v)
    } else {
        Quotient::Inconclusive(v)
    }
}

fn quotient_on_interval(w: &PowerWeight, p: f64, q: f64, a: f64, b: f64, cfg: &ApConfig) -> Result<Quotient> {
    let sp = |x: f64| w.eval(x).powf(p);
    let sq = |x: f64| w.eval(x).powf(-q);
    let ip = integrate_singular_real(&sp, a, b, &w.nodes, cfg.grading_levels, cfg.gl_nodes);
    let iq = integrate_singular_real(&sq, a, b, &w.nodes, cfg.grading_levels, cfg.gl_nodes);
    if ip.value.is_nan() || iq.value.is_nan() {
        let node = w
            .nodes
            .iter()
            .copied()
            .find(|&n| n >= a - 1e-12 && n <= b + 1e-12)
            .unwrap_or(a);
        return Err(Error::SingularIntegration { node });
    }
    Ok(combine_integrals(&ip, &iq, b - a, p, q))
}

/// Estimate the `A_p` supremum over dyadic plus node-centered intervals.
pub fn ap_supremum_estimate(w: &PowerWeight, p: f64, cfg: &ApConfig) -> Result<APEstimate> {
    check_p(p)?;
    let q = p / (p - 1.0);
    let depth = cfg.depth.max(1);

    // Integrals over the finest dyadic cells; coarser dyadic intervals are
    // exact partial sums of these.
    let finest = 1usize << depth;
    let cell_width = 2.0 / finest as f64;
    let mut cell_p: Vec<SingularIntegral> = Vec::with_capacity(finest);
    let mut cell_q: Vec<SingularIntegral> = Vec::with_capacity(finest);
    let sp = |x: f64| w.eval(x).powf(p);
    let sq = |x: f64| w.eval(x).powf(-q);
    for i in 0..finest {
        let a = -1.0 + cell_width * i as f64;
        let b = if i + 1 == finest { 1.0 } else { -1.0 + cell_width * (i + 1) as f64 };
        let ip = integrate_singular_real(&sp, a, b, &w.nodes, cfg.grading_levels, cfg.gl_nodes);
        let iq = integrate_singular_real(&sq, a, b, &w.nodes, cfg.grading_levels, cfg.gl_nodes);
        if ip.value.is_nan() || iq.value.is_nan() {
            return Err(Error::SingularIntegration { node: 0.5 * (a + b) });
        }
        cell_p.push(ip);
        cell_q.push(iq);
    }

    let mut level_sups = Vec::with_capacity(depth as usize);
    let mut running = 0.0f64;
    let mut inconclusive = 0usize;
    for level in 1..=depth {
        let count = 1usize << level;
        let stride = finest / count;
        let width = 2.0 / count as f64;
        for i in 0..count {
            let mut ip = SingularIntegral { value: 0.0, converged: true, diverging: false };
            let mut iq = ip;
            for j in i * stride..(i + 1) * stride {
                ip = ip.combine(cell_p[j]);
                iq = iq.combine(cell_q[j]);
            }
            match combine_integrals(&ip, &iq, width, p, q) {
                Quotient::Divergent => running = f64::INFINITY,
                Quotient::Finite(v) => running = running.max(v),
                Quotient::Inconclusive(v) => {
                    inconclusive += 1;
                    running = running.max(v);
                }
            }
        }
        // node-centered intervals of width 2^{-level}
        let half = 0.5f64.powi(level as i32 + 1);
        for &node in &w.nodes {
            let a = (node - half).max(-1.0);
            let b = (node + half).min(1.0);
            if b - a < 1e-14 {
                continue;
            }
            match quotient_on_interval(w, p, q, a, b, cfg)? {
                Quotient::Divergent => running = f64::INFINITY,
                Quotient::Finite(v) => running = running.max(v),
                Quotient::Inconclusive(v) => {
                    inconclusive += 1;
                    running = running.max(v);
                }
            }
        }
        level_sups.push(running);
    }

    let verdict = classify(&level_sups, cfg);
    Ok(APEstimate {
        p,
        depth,
        level_sups,
        verdict,
        inconclusive_intervals: inconclusive,
    })
}

fn classify(sups: &[f64], cfg: &ApConfig) -> ApVerdict {
    if sups.iter().any(|s| s.is_infinite()) {
        return ApVerdict::Diverging;
    }
    if sups.len() < 3 {
        return ApVerdict::Inconclusive;
    }
    let d = sups.len();
    let (s0, s2) = (sups[d - 3], sups[d - 1]);
    if s0 > 0.0 && (s2 - s0) / s0 <= cfg.stability_tol {
        return ApVerdict::Bounded;
    }
    let growing = (d - 3..d - 1).all(|k| sups[k] > 0.0 && sups[k + 1] / sups[k] >= cfg.growth_ratio);
    if growing {
        ApVerdict::Diverging
    } else {
        ApVerdict::Inconclusive
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Finiteness {
    pub finite: bool,
    /// False when the graded quadrature neither settled nor grew cleanly.
    pub conclusive: bool,
    #[serde(with = "inf_as_null")]
    pub value: f64,
}

mod inf_as_null {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        v.is_finite().then_some(*v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct IntegrabilityReport {
    pub p: f64,
    pub q: f64,
    pub sigma_lp: Finiteness,
    pub sigma_inv_lq: Finiteness,
}

/// Graded-mesh quadrature of `∫ σ^p` and `∫ σ^{-q}` over `[-1, 1]`.
pub fn integrability_check(w: &PowerWeight, p: f64, cfg: &ApConfig) -> Result<IntegrabilityReport> {
    check_p(p)?;
    let q = p / (p - 1.0);
    let run = |f: &dyn Fn(f64) -> f64| -> Finiteness {
        let r = integrate_singular_real(f, -1.0, 1.0, &w.nodes, cfg.grading_levels, cfg.gl_nodes);
        Finiteness {
            finite: !r.diverging && r.converged,
            conclusive: r.converged || r.diverging,
            value: r.value,
        }
    };
    Ok(IntegrabilityReport {
        p,
        q,
        sigma_lp: run(&|x| w.eval(x).powf(p)),
        sigma_inv_lq: run(&|x| w.eval(x).powf(-q)),
    })
}
