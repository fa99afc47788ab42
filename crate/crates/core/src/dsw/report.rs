use std::fmt;
use std::io::Write;

use num_complex::Complex;

use super::{functional_library, EigenFamily, Region};
use crate::error::Result;
use crate::real::Real;
use crate::spaces::GridFunction;

/// Pass thresholds of the four sub-checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds<T> {
    pub eigen_residual: T,
    pub cr_residual: T,
    pub nondegeneracy: T,
}

impl<T: Real> Default for Thresholds<T> {
    fn default() -> Self {
        Thresholds {
            eigen_residual: T::lit(1e-6),
            cr_residual: T::lit(1e-4),
            nondegeneracy: T::lit(1e-6),
        }
    }
}

/// Samples and thresholds for [`super::dsw_verdict`].
#[derive(Debug, Clone)]
pub struct DswConfig<T> {
    pub lambdas: Vec<Complex<T>>,
    pub phis: Vec<GridFunction<T>>,
    pub h: T,
    pub thresholds: Thresholds<T>,
}

impl<T: Real> DswConfig<T> {
    /// A 7 × 9 lattice over the admissible region inset by `2h`, the
    /// sixteen-entry functional library and `h = 10^{-3}`.
    pub fn standard(family: &EigenFamily<T>, seed: u64) -> Result<Self> {
        let h = T::lit(1e-3);
        let inset = T::lit(2.0) * h;
        let lambdas = match family.admissible_region() {
            Some(r) => {
                let (re, im) = (r.re(), r.im());
                match Region::new(re.0 + inset, re.1 - inset, im.0 + inset, im.1 - inset) {
                    Ok(inner) => inner.lattice(7, 9),
                    Err(_) => Vec::new(),
                }
            }
            None => Vec::new(),
        };
        Ok(DswConfig {
            lambdas,
            phis: functional_library(family.space(), seed)?,
            h,
            thresholds: Thresholds::default(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationReason {
    ImagAxis,
    InsufficientSamples,
    EigenResidual,
    Analyticity,
    Nondegeneracy,
}

impl fmt::Display for ViolationReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationReason::ImagAxis => "imag-axis",
            ViolationReason::InsufficientSamples => "insufficient-samples",
            ViolationReason::EigenResidual => "eigen-residual",
            ViolationReason::Analyticity => "analyticity",
            ViolationReason::Nondegeneracy => "nondegeneracy",
        })
    }
}

/// `Supported` never means "chaotic": only that the criterion's premises
/// hold at sample resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    HypothesesSupported,
    /// Failing checks, the first being the headline reason.
    HypothesesViolated(Vec<ViolationReason>),
}

impl Verdict {
    pub(crate) fn from_reasons(reasons: Vec<ViolationReason>) -> Self {
        if reasons.is_empty() {
            Verdict::HypothesesSupported
        } else {
            Verdict::HypothesesViolated(reasons)
        }
    }

    pub fn is_supported(&self) -> bool {
        matches!(self, Verdict::HypothesesSupported)
    }

    pub fn reason(&self) -> Option<ViolationReason> {
        match self {
            Verdict::HypothesesSupported => None,
            Verdict::HypothesesViolated(r) => r.first().copied(),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::HypothesesSupported => f.write_str("hypotheses-supported"),
            Verdict::HypothesesViolated(r) => write!(f, "hypotheses-violated({})", r[0]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaRow<T> {
    pub lambda: Complex<T>,
    pub eigen_residual: T,
    pub cr_residual: T,
}

#[derive(Debug, Clone)]
pub struct DswReport<T> {
    pub family: String,
    pub region: Region<T>,
    pub admissible_region: Option<Region<T>>,
    pub max_eigen_residual: T,
    pub imag_axis_hit: bool,
    pub max_cr_residual: T,
    pub nondegeneracy_margin: T,
    pub thresholds: Thresholds<T>,
    /// Samples outside the point spectrum at this truncation.
    pub rejected_lambdas: Vec<Complex<T>>,
    pub functionals: usize,
    pub verdict: Verdict,
    pub rows: Vec<LambdaRow<T>>,
}

impl<T: Real> DswReport<T> {
    /// Re-judges the same measurements under other thresholds.
    pub fn with_thresholds(&self, thresholds: Thresholds<T>) -> Self {
        DswReport {
            thresholds,
            verdict: self.judge(&thresholds),
            ..self.clone()
        }
    }

    pub(crate) fn judge(&self, th: &Thresholds<T>) -> Verdict {
        let mut reasons = Vec::new();
        if !self.imag_axis_hit {
            reasons.push(ViolationReason::ImagAxis);
        }
        if self.rows.is_empty() || self.functionals == 0 {
            reasons.push(ViolationReason::InsufficientSamples);
        } else {
            if !(self.max_eigen_residual <= th.eigen_residual) {
                reasons.push(ViolationReason::EigenResidual);
            }
            if !(self.max_cr_residual <= th.cr_residual) {
                reasons.push(ViolationReason::Analyticity);
            }
            if !(self.nondegeneracy_margin >= th.nondegeneracy) {
                reasons.push(ViolationReason::Nondegeneracy);
            }
        }
        Verdict::from_reasons(reasons)
    }

    /// Plain-text `key=value` block.
    pub fn key_values(&self) -> String {
        let region = |r: &Region<T>| format!("{:.16e},{:.16e},{:.16e},{:.16e}", r.re().0, r.re().1, r.im().0, r.im().1);
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            out.push_str(k);
            out.push('=');
            out.push_str(&v);
            out.push('\n');
        };
        put("family", self.family.clone());
        put("region", region(&self.region));
        put("admissible_region", self.admissible_region.as_ref().map_or_else(|| "empty".to_string(), region));
        put("samples", self.rows.len().to_string());
        put("functionals", self.functionals.to_string());
        put("rejected_samples", self.rejected_lambdas.len().to_string());
        if !self.rejected_lambdas.is_empty() {
            put("rejected_reason", "outside σ_p at this truncation".to_string());
        }
        put("max_eigen_residual", format!("{:.16e}", self.max_eigen_residual));
        put("imag_axis_hit", self.imag_axis_hit.to_string());
        put("max_cr_residual", format!("{:.16e}", self.max_cr_residual));
        put("nondegeneracy_margin", format!("{:.16e}", self.nondegeneracy_margin));
        put("threshold_eigen_residual", format!("{:.16e}", self.thresholds.eigen_residual));
        put("threshold_cr_residual", format!("{:.16e}", self.thresholds.cr_residual));
        put("threshold_nondegeneracy", format!("{:.16e}", self.thresholds.nondegeneracy));
        put("verdict", self.verdict.to_string());
        put(
            "note",
            "a supported verdict certifies the spectral hypotheses at sample resolution; it does not prove chaos. \
             The orbit experiment of the translation module is the behavioural companion."
                .to_string(),
        );
        out
    }

    /// CSV `re_lambda,im_lambda,eigen_residual,cr_residual`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "re_lambda,im_lambda,eigen_residual,cr_residual")?;
        for r in &self.rows {
            writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e}", r.lambda.re, r.lambda.im, r.eigen_residual, r.cr_residual)?;
        }
        Ok(())
    }
}
