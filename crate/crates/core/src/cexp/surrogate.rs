use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::harness::{Response, TrialTable};
use crate::error::{Error, Result};

/// Basis functions of the input size `n` a surrogate may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisFn {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "n")]
    N,
    #[serde(rename = "n^2")]
    NSquared,
    #[serde(rename = "n^3")]
    NCubed,
    #[serde(rename = "n*ln(n)")]
    NLogN,
}

impl BasisFn {
    pub fn eval(&self, n: f64) -> f64 {
        match self {
            BasisFn::One => 1.0,
            BasisFn::N => n,
            BasisFn::NSquared => n * n,
            BasisFn::NCubed => n * n * n,
            BasisFn::NLogN => n * n.ln(),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            BasisFn::One => "1",
            BasisFn::N => "n",
            BasisFn::NSquared => "n^2",
            BasisFn::NCubed => "n^3",
            BasisFn::NLogN => "n*ln(n)",
        }
    }
}

impl fmt::Display for BasisFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BasisFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" | "const" => Ok(BasisFn::One),
            "n" => Ok(BasisFn::N),
            "n^2" | "n2" => Ok(BasisFn::NSquared),
            "n^3" | "n3" => Ok(BasisFn::NCubed),
            "n*ln(n)" | "nlogn" | "nlnn" => Ok(BasisFn::NLogN),
            other => Err(Error::InvalidParameter(format!(
                "unknown basis function {other:?} (allowed: 1, n, n^2, n^3, n*ln(n))"
            ))),
        }
    }
}

/// Ordinary least-squares model of a response's per-point means.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurrogateFit {
    pub basis: Vec<BasisFn>,
    pub coefficients: Vec<f64>,
    /// Computed on the per-point means.
    pub r_squared: f64,
    /// Residual standard deviation over all rows, `N - p` degrees of freedom.
    pub residual_sd: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub mean: f64,
    /// `2 × residual_sd`; a spread indicator, not a calibrated interval.
    pub band: f64,
}

impl SurrogateFit {
    pub fn mean_at(&self, n: f64) -> f64 {
        self.basis
            .iter()
            .zip(&self.coefficients)
            .map(|(b, c)| c * b.eval(n))
            .sum()
    }

    /// Checks the invariants a deserialized fit must satisfy.
    pub fn validate(&self) -> Result<()> {
        if self.basis.is_empty() || self.basis.len() != self.coefficients.len() {
            return Err(Error::InvalidParameter(
                "surrogate needs one coefficient per basis function".into(),
            ));
        }
        if self.coefficients.iter().any(|c| !c.is_finite())
            || !(0.0..=1.0).contains(&self.r_squared)
            || !(self.residual_sd >= 0.0 && self.residual_sd.is_finite())
        {
            return Err(Error::InvalidParameter(
                "surrogate has non-finite or out-of-range fields".into(),
            ));
        }
        Ok(())
    }
}

/// Relative threshold on `|R_ii|` (after column scaling) below which the
/// design is treated as rank deficient.
const RANK_TOL: f64 = 1e-10;

/// Least squares by Householder QR, on columns scaled to unit max-norm.
fn least_squares(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
    let k = x.ncols();
    let scales: Vec<f64> = (0..k).map(|j| x.column(j).amax()).collect();
    if scales.iter().any(|&s| s == 0.0 || !s.is_finite()) {
        return Err(Error::SingularDesign(
            "a basis column is identically zero".into(),
        ));
    }
    let mut xs = x.clone();
    for (j, s) in scales.iter().enumerate() {
        xs.column_mut(j).scale_mut(1.0 / s);
    }
    let qr = xs.qr();
    let r = qr.r();
    let rmax = r.diagonal().amax();
    if r.diagonal().iter().any(|d| d.abs() <= RANK_TOL * rmax) {
        return Err(Error::SingularDesign(
            "basis functions are linearly dependent on the design points".into(),
        ));
    }
    let qty = qr.q().transpose() * y;
    let coef = r
        .solve_upper_triangular(&qty)
        .ok_or_else(|| Error::SingularDesign("triangular solve failed".into()))?;
    Ok(DVector::from_iterator(
        k,
        coef.iter().zip(&scales).map(|(c, s)| c / s),
    ))
}

/// Fits the per-point mean of `response` on the chosen basis functions of
/// `n`. Needs more distinct design points than basis functions.
pub fn fit_surrogate(
    table: &TrialTable,
    response: Response,
    basis: &[BasisFn],
) -> Result<SurrogateFit> {
    if basis.is_empty() {
        return Err(Error::InvalidParameter("basis must not be empty".into()));
    }
    let groups = table.grouped(response)?;
    if groups.len() <= basis.len() {
        return Err(Error::InsufficientSample(format!(
            "{} design points cannot determine {} coefficients",
            groups.len(),
            basis.len()
        )));
    }
    let means: Vec<f64> = groups
        .iter()
        .map(|(_, v)| v.iter().sum::<f64>() / v.len() as f64)
        .collect();
    let x = DMatrix::from_fn(groups.len(), basis.len(), |i, j| {
        basis[j].eval(groups[i].0 as f64)
    });
    let y = DVector::from_column_slice(&means);
    let coef = least_squares(&x, &y)?;
    let coefficients: Vec<f64> = coef.iter().copied().collect();
    let fit = SurrogateFit {
        basis: basis.to_vec(),
        coefficients,
        r_squared: 0.0,
        residual_sd: 0.0,
    };

    let y_bar = means.iter().sum::<f64>() / means.len() as f64;
    let ss_tot: f64 = means.iter().map(|m| (m - y_bar).powi(2)).sum();
    let ss_res: f64 = groups
        .iter()
        .zip(&means)
        .map(|((n, _), m)| (m - fit.mean_at(*n as f64)).powi(2))
        .sum();
    let r_squared = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else if ss_res <= f64::EPSILON * y_bar.abs().max(1.0) * means.len() as f64 {
        1.0
    } else {
        0.0
    };

    let rows: usize = groups.iter().map(|(_, v)| v.len()).sum();
    let row_ss: f64 = groups
        .iter()
        .flat_map(|(n, v)| {
            let fitted = fit.mean_at(*n as f64);
            v.iter().map(move |x| (x - fitted).powi(2))
        })
        .sum();
    let residual_sd = (row_ss / (rows - basis.len()) as f64).sqrt();

    Ok(SurrogateFit {
        r_squared,
        residual_sd,
        ..fit
    })
}

pub fn predict(fit: &SurrogateFit, n: u64) -> Result<Prediction> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    fit.validate()?;
    Ok(Prediction {
        mean: fit.mean_at(n as f64),
        band: 2.0 * fit.residual_sd,
    })
}
