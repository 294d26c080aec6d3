//! Distance measures on density operators, normalized so that the maximum
//! over density-operator pairs is 1 (attained by orthogonal pure states).

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::linalg;
use crate::qregister::DensityMatrix;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("unknown distance measure `{0}` (expected `trace` or `hs`)")]
    UnknownMeasure(String),
}

/// A unit-normalized distance on density operators. Symmetric, zero exactly
/// on equal arguments, and bounded by 1; outputs are clamped to [0, 1] after
/// round-off so threshold comparisons never see 1 + ε.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DistanceMeasure {
    /// Trace distance (1/2)·Σ|λ_k| over the eigenvalues of ρ − σ.
    #[default]
    Trace,
    /// Frobenius norm of ρ − σ divided by √2.
    HilbertSchmidt,
}

impl DistanceMeasure {
    pub fn evaluate(&self, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64, MetricError> {
        match self {
            Self::Trace => trace_distance(rho, sigma),
            Self::HilbertSchmidt => hs_distance_normalized(rho, sigma),
        }
    }

    /// Identifier accepted by the CLI.
    pub fn id(&self) -> &'static str {
        match self {
            Self::Trace => "trace",
            Self::HilbertSchmidt => "hs",
        }
    }
}

impl FromStr for DistanceMeasure {
    type Err = MetricError;

    fn from_str(s: &str) -> Result<Self, MetricError> {
        match s {
            "trace" => Ok(Self::Trace),
            "hs" => Ok(Self::HilbertSchmidt),
            other => Err(MetricError::UnknownMeasure(other.to_string())),
        }
    }
}

impl fmt::Display for DistanceMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

fn check_dims(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<(), MetricError> {
    if rho.dim() != sigma.dim() {
        return Err(MetricError::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    Ok(())
}

/// Trace distance (1/2)‖ρ − σ‖₁, computed from the eigenvalues of the
/// Hermitian difference. The difference is put into a canonical sign before
/// the eigensolve so that swapping the arguments yields the bit-identical
/// result; deterministic for fixed inputs.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64, MetricError> {
    check_dims(rho, sigma)?;
    let mut diff = rho.entries() - sigma.entries();
    if !first_nonzero_is_positive(&diff) {
        diff.neg_mut();
    }
    let sum: f64 = linalg::hermitian_eigenvalues(&diff)
        .iter()
        .map(|l| l.abs())
        .sum();
    Ok((0.5 * sum).clamp(0.0, 1.0))
}

/// Whether the first nonzero entry (column-major) has positive real part,
/// or zero real part and positive imaginary part. Negating the matrix flips
/// this, so it picks one orientation out of {M, −M}.
fn first_nonzero_is_positive(m: &crate::CMatrix) -> bool {
    for z in m.iter() {
        if z.re != 0.0 {
            return z.re > 0.0;
        }
        if z.im != 0.0 {
            return z.im > 0.0;
        }
    }
    true
}

/// Hilbert–Schmidt (Frobenius) distance divided by √2, which makes the
/// maximum over density-operator pairs equal to 1.
pub fn hs_distance_normalized(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
) -> Result<f64, MetricError> {
    check_dims(rho, sigma)?;
    let d = (rho.entries() - sigma.entries()).norm() / std::f64::consts::SQRT_2;
    Ok(d.clamp(0.0, 1.0))
}
