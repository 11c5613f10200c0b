//! Lower and upper bounds for structured matrices from the radii of their
//! diagonal blocks:
//!
//! ```text
//! max_k w_q(B_k) <= w_q(M) <= K(q) max_k w_q(B_k),   K(q) = (|q| + 2p) / |q|.
//! ```

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64, I};
use crate::qrange::{estimate_radius, exact_2x2, scalar_radius, AscentConfig, QParameter};
use crate::structured::{build_structured, reduce_to_blocks, tridiagonal_coefficient, Family, StructuredSpec};

/// `(|q| + 2 sqrt(1 - |q|^2)) / |q|`; undefined at `q = 0`.
pub fn k_factor(qp: &QParameter) -> Result<f64> {
    if qp.modulus() == 0.0 {
        return Err(Error::ZeroQ);
    }
    Ok((qp.modulus() + 2.0 * qp.p()) / qp.modulus())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsConfig {
    pub ascent: AscentConfig,
    /// One-sided slack allowed in both verdicts.
    pub tolerance: f64,
    /// Restart multiplier for the retry after a failed lower verdict.
    pub escalation: usize,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        Self {
            ascent: AscentConfig::default(),
            tolerance: 1e-6,
            escalation: 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub lower_ok: bool,
    pub upper_ok: bool,
    /// `whole - lower`
    pub lower_slack: f64,
    /// `upper - whole`
    pub upper_slack: f64,
    /// At `|q| = 1` the two sides coincide; `None` otherwise.
    pub collapse_ok: Option<bool>,
    /// Whether the whole-matrix estimate was retried with more restarts.
    pub escalated: bool,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.lower_ok && self.upper_ok && self.collapse_ok.unwrap_or(true)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialCase {
    TZero,
    SZero,
    TEqualsS,
    SEqualsIT,
}

impl SpecialCase {
    pub const ALL: [SpecialCase; 4] = [SpecialCase::TZero, SpecialCase::SZero, SpecialCase::TEqualsS, SpecialCase::SEqualsIT];

    /// `(T, S)` built from `base`.
    pub fn pair(self, base: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
        let zero = ComplexMatrix::zeros(base.dim());
        match self {
            SpecialCase::TZero => (zero, base.clone()),
            SpecialCase::SZero => (base.clone(), zero),
            SpecialCase::TEqualsS => (base.clone(), base.clone()),
            SpecialCase::SEqualsIT => (base.clone(), base.scale(I)),
        }
    }

    /// `|coefficient|` of `base` in block `k` (`k = 1..n`).
    pub fn coefficient(self, k: usize, n: usize) -> f64 {
        let c = tridiagonal_coefficient(k, n);
        match self {
            SpecialCase::TZero => c.abs(),
            SpecialCase::SZero => 1.0,
            SpecialCase::TEqualsS => (1.0 + c).abs(),
            SpecialCase::SEqualsIT => C64::new(1.0, c).norm(),
        }
    }
}

impl std::str::FromStr for SpecialCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "t_zero" => Ok(SpecialCase::TZero),
            "s_zero" => Ok(SpecialCase::SZero),
            "t_equals_s" => Ok(SpecialCase::TEqualsS),
            "s_equals_it" | "s_equals_i_t" => Ok(SpecialCase::SEqualsIT),
            other => Err(Error::InvalidArgument(format!("unknown special case {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecialCaseInfo {
    pub tag: SpecialCase,
    pub base_radius: f64,
    pub coefficients: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub seed: u64,
    pub restarts: usize,
    pub tol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    /// `None` for a plain direct sum.
    pub family: Option<Family>,
    pub n: usize,
    pub q: QParameter,
    pub k_factor: f64,
    pub block_labels: Vec<usize>,
    pub block_radii: Vec<f64>,
    pub lower: f64,
    pub upper: f64,
    pub whole_estimate: f64,
    pub verdict: Verdict,
    pub config: ConfigEcho,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub special: Option<SpecialCaseInfo>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

/// Per-block radius: the scalar convention for `1x1`, the closed form for
/// `2x2`, the optimizer otherwise.
pub fn block_radius(block: &ComplexMatrix, qp: &QParameter, cfg: &AscentConfig) -> Result<f64> {
    match block.dim() {
        1 => Ok(scalar_radius(block.get(0, 0), qp)),
        2 => Ok(exact_2x2(block, qp)?.1),
        _ => Ok(estimate_radius(block, qp, cfg)?.value),
    }
}

fn check_blocks(blocks: &[ComplexMatrix]) -> Result<()> {
    let first = blocks.first().ok_or(Error::EmptyBlocks)?;
    if let Some(b) = blocks.iter().find(|b| b.dim() != first.dim()) {
        return Err(Error::DimensionMismatch {
            expected: first.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

fn assemble_report(
    family: Option<Family>,
    labels: Vec<usize>,
    blocks: &[ComplexMatrix],
    whole: &ComplexMatrix,
    qp: &QParameter,
    cfg: &BoundsConfig,
) -> Result<BoundsReport> {
    let k = k_factor(qp)?;
    let block_radii = blocks
        .par_iter()
        .map(|b| block_radius(b, qp, &cfg.ascent))
        .collect::<Result<Vec<f64>>>()?;
    let lower = block_radii.iter().copied().fold(0.0, f64::max);
    // (|q| + 2p) (lower / |q|) rather than k * lower: when lower = c |q| the
    // quotient is exact and upper is exactly c (|q| + 2p)
    let upper = (qp.modulus() + 2.0 * qp.p()) * (lower / qp.modulus());

    let tol = cfg.tolerance;
    let mut whole_estimate = estimate_radius(whole, qp, &cfg.ascent)?.value;
    let mut escalated = false;
    if whole_estimate < lower - tol {
        escalated = true;
        let retry = estimate_radius(whole, qp, &cfg.ascent.escalated(cfg.escalation))?.value;
        whole_estimate = whole_estimate.max(retry);
    }
    let verdict = Verdict {
        lower_ok: whole_estimate >= lower - tol,
        upper_ok: whole_estimate <= upper + tol,
        lower_slack: whole_estimate - lower,
        upper_slack: upper - whole_estimate,
        collapse_ok: qp.is_classical().then(|| (whole_estimate - lower).abs() <= tol),
        escalated,
    };
    Ok(BoundsReport {
        family,
        n: blocks.len(),
        q: *qp,
        k_factor: k,
        block_labels: labels,
        block_radii,
        lower,
        upper,
        whole_estimate,
        verdict,
        config: ConfigEcho {
            seed: cfg.ascent.seed,
            restarts: cfg.ascent.restarts,
            tol: cfg.ascent.tol,
        },
        special: None,
        note: None,
    })
}

/// Bounds for the finite direct sum `B_0 ⊕ ... ⊕ B_{m-1}`.
pub fn direct_sum_bounds(blocks: &[ComplexMatrix], qp: &QParameter, cfg: &BoundsConfig) -> Result<BoundsReport> {
    k_factor(qp)?;
    check_blocks(blocks)?;
    let whole = ComplexMatrix::direct_sum(blocks)?;
    let mut report = assemble_report(None, (0..blocks.len()).collect(), blocks, &whole, qp, cfg)?;
    report.note = Some("finite direct sums only".into());
    Ok(report)
}

/// Bounds for a structured matrix from the blocks of its reduction.
pub fn theorem_bounds(spec: &StructuredSpec, qp: &QParameter, cfg: &BoundsConfig) -> Result<BoundsReport> {
    k_factor(qp)?;
    let blocks = reduce_to_blocks(spec);
    let whole = build_structured(spec);
    assemble_report(Some(spec.family()), spec.labels(), &blocks, &whole, qp, cfg)
}

/// [`theorem_bounds`] for a tridiagonal or anti-tridiagonal matrix whose
/// `(T, S)` pair is built from `base` by `tag`; also reports the closed-form
/// coefficients `|c_k|` with block radius `k` equal to `|c_k| w_q(base)`.
pub fn special_case_bounds(
    tag: SpecialCase,
    family: Family,
    base: &ComplexMatrix,
    n: usize,
    qp: &QParameter,
    cfg: &BoundsConfig,
) -> Result<BoundsReport> {
    if !matches!(family, Family::Tridiagonal | Family::AntiTridiagonal) {
        return Err(Error::InvalidArgument(format!(
            "special cases are defined for tridiagonal and anti_tridiagonal, not {family}"
        )));
    }
    let (t, s) = tag.pair(base);
    let spec = StructuredSpec::tridiagonal(family, n, t, s)?;
    let mut report = theorem_bounds(&spec, qp, cfg)?;
    report.special = Some(SpecialCaseInfo {
        tag,
        base_radius: block_radius(base, qp, &cfg.ascent)?,
        coefficients: (1..=n).map(|k| tag.coefficient(k, n)).collect(),
    });
    Ok(report)
}
