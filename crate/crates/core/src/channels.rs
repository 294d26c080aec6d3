//! CPTP maps on an n-qubit register, represented as Kraus-operator lists.
//! Kraus form is completely positive by construction, so validation only has
//! to check the trace-preservation (completeness) relation Σ K†K = I.

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg;
use crate::qregister::DensityMatrix;
use crate::CMatrix;

/// Entrywise tolerance on |Σ K†K − I| for the completeness check.
pub const COMPLETENESS_TOL: f64 = 1e-9;

/// Cap for the parametric channel families whose Kraus count grows with the
/// register (dephasing, depolarizing, replacement); beyond this the dense
/// operator lists stop being desk-scale.
pub const STANDARD_CHANNEL_CAP: usize = 6;

/// Eigenvalues of a replacement target below this weight are dropped from
/// its Kraus set.
const REPLACEMENT_EIG_CUTOFF: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("channel needs at least one Kraus operator")]
    EmptyKraus,
    #[error("channel must act on at least one qubit")]
    EmptyRegister,
    #[error(
        "Kraus operator {index} is {rows}x{cols}, expected {expected}x{expected} for n = {n}"
    )]
    DimensionMismatch {
        index: usize,
        n: usize,
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("channel is not trace preserving: max |Σ K†K − I| entry = {deviation:.3e}")]
    NotTracePreserving { deviation: f64 },
    #[error("channel register size {channel_n} does not match state register size {state_n}")]
    StateMismatch { channel_n: usize, state_n: usize },
    #[error("unknown channel `{0}` (expected identity, dephasing, depolarizing, or replace_with)")]
    UnknownChannel(String),
    #[error("bad channel parameters: {0}")]
    BadParams(String),
    #[error("register size {n} exceeds the cap of {cap} qubits for this channel family")]
    RegisterTooLarge { n: usize, cap: usize },
}

/// A CPTP map as a nonempty list of 2^n x 2^n Kraus operators.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumChannel {
    n: usize,
    kraus: Vec<CMatrix>,
}

impl QuantumChannel {
    /// Validates operator shapes and the completeness relation.
    pub fn new(kraus: Vec<CMatrix>, n: usize) -> Result<Self, ChannelError> {
        if n == 0 {
            return Err(ChannelError::EmptyRegister);
        }
        if kraus.is_empty() {
            return Err(ChannelError::EmptyKraus);
        }
        let dim = 1usize << n;
        for (index, op) in kraus.iter().enumerate() {
            if op.nrows() != dim || op.ncols() != dim {
                return Err(ChannelError::DimensionMismatch {
                    index,
                    n,
                    expected: dim,
                    rows: op.nrows(),
                    cols: op.ncols(),
                });
            }
        }
        let mut sum = CMatrix::zeros(dim, dim);
        for op in &kraus {
            sum += op.adjoint() * op;
        }
        let deviation = linalg::max_abs_diff(&sum, &CMatrix::identity(dim, dim));
        if deviation > COMPLETENESS_TOL {
            return Err(ChannelError::NotTracePreserving { deviation });
        }
        Ok(Self { n, kraus })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    /// Applies the channel: ρ ↦ Σ_k K_k ρ K_k†.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix, ChannelError> {
        if rho.n() != self.n {
            return Err(ChannelError::StateMismatch {
                channel_n: self.n,
                state_n: rho.n(),
            });
        }
        let dim = self.dim();
        let mut out = CMatrix::zeros(dim, dim);
        for op in &self.kraus {
            out += op * rho.entries() * op.adjoint();
        }
        Ok(DensityMatrix::trusted(out, self.n))
    }

    /// Sequential composition `other ∘ self` as the merged Kraus list
    /// {A_j B_k}.
    pub fn compose(&self, other: &Self) -> Result<Self, ChannelError> {
        if other.n != self.n {
            return Err(ChannelError::StateMismatch {
                channel_n: self.n,
                state_n: other.n,
            });
        }
        let merged: Vec<CMatrix> = other
            .kraus
            .iter()
            .flat_map(|a| self.kraus.iter().map(move |b| a * b))
            .collect();
        Self::new(merged, self.n)
    }

    /// The identity channel on n qubits.
    pub fn identity(n: usize) -> Result<Self, ChannelError> {
        if n == 0 {
            return Err(ChannelError::EmptyRegister);
        }
        let dim = 1usize << n;
        Self::new(vec![CMatrix::identity(dim, dim)], n)
    }

    /// Independent phase damping on every qubit: each qubit suffers
    /// {√(1−p)·I, √p·Z}, so p = 0.5 dephases completely. The Kraus set is
    /// the 2^n-element tensor lift.
    pub fn dephasing(n: usize, p: f64) -> Result<Self, ChannelError> {
        check_family_size(n)?;
        check_probability(p)?;
        let z = CMatrix::from_diagonal(&crate::CVector::from_column_slice(&[
            Complex64::ONE,
            -Complex64::ONE,
        ]));
        let eye = CMatrix::identity(2, 2);
        let mut locals = Vec::new();
        if p < 1.0 {
            locals.push(eye * Complex64::from((1.0 - p).sqrt()));
        }
        if p > 0.0 {
            locals.push(z * Complex64::from(p.sqrt()));
        }
        let mut ops = vec![CMatrix::identity(1, 1)];
        for _ in 0..n {
            ops = ops
                .iter()
                .flat_map(|op| locals.iter().map(move |l| op.kronecker(l)))
                .collect();
        }
        Self::new(ops, n)
    }

    /// Depolarizing channel ρ ↦ (1−p)ρ + p·I/2^n, via the Kraus set
    /// {√(1−p)·I} ∪ {√(p/d)·|i⟩⟨j|}.
    pub fn depolarizing(n: usize, p: f64) -> Result<Self, ChannelError> {
        check_family_size(n)?;
        check_probability(p)?;
        let dim = 1usize << n;
        let mut ops = Vec::new();
        if p < 1.0 {
            ops.push(CMatrix::identity(dim, dim) * Complex64::from((1.0 - p).sqrt()));
        }
        if p > 0.0 {
            let w = Complex64::from((p / dim as f64).sqrt());
            for i in 0..dim {
                for j in 0..dim {
                    let mut op = CMatrix::zeros(dim, dim);
                    op[(i, j)] = w;
                    ops.push(op);
                }
            }
        }
        Self::new(ops, n)
    }

    /// Replacement channel mapping every input to `target`, built from the
    /// target's eigendecomposition: {√λ_a |v_a⟩⟨e_j|} over eigenpairs and
    /// computational basis vectors e_j.
    pub fn replace_with(target: &DensityMatrix) -> Result<Self, ChannelError> {
        let n = target.n();
        check_family_size(n)?;
        let dim = target.dim();
        let (values, vectors) = linalg::hermitian_eigen(target.entries());
        let mut ops = Vec::new();
        for (a, &lambda) in values.iter().enumerate() {
            if lambda <= REPLACEMENT_EIG_CUTOFF {
                continue;
            }
            let scaled = vectors.column(a) * Complex64::from(lambda.sqrt());
            for j in 0..dim {
                let mut op = CMatrix::zeros(dim, dim);
                op.set_column(j, &scaled);
                ops.push(op);
            }
        }
        Self::new(ops, n)
    }
}

fn check_probability(p: f64) -> Result<(), ChannelError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(ChannelError::BadParams(format!(
            "probability must lie in [0, 1], got {p}"
        )));
    }
    Ok(())
}

fn check_family_size(n: usize) -> Result<(), ChannelError> {
    if n == 0 {
        return Err(ChannelError::EmptyRegister);
    }
    if n > STANDARD_CHANNEL_CAP {
        return Err(ChannelError::RegisterTooLarge {
            n,
            cap: STANDARD_CHANNEL_CAP,
        });
    }
    Ok(())
}

fn expect_params(name: &str, params: &[f64], count: usize) -> Result<(), ChannelError> {
    if params.len() != count {
        return Err(ChannelError::BadParams(format!(
            "{name} takes {count} parameter(s), got {}",
            params.len()
        )));
    }
    Ok(())
}

/// Builds a named standard channel on n qubits. `replace_with` carries its
/// target state separately from the numeric parameters.
pub fn standard_channel(
    name: &str,
    params: &[f64],
    target: Option<&DensityMatrix>,
    n: usize,
) -> Result<QuantumChannel, ChannelError> {
    match name {
        "identity" => {
            expect_params(name, params, 0)?;
            QuantumChannel::identity(n)
        }
        "dephasing" => {
            expect_params(name, params, 1)?;
            QuantumChannel::dephasing(n, params[0])
        }
        "depolarizing" => {
            expect_params(name, params, 1)?;
            QuantumChannel::depolarizing(n, params[0])
        }
        "replace_with" => {
            expect_params(name, params, 0)?;
            let target = target.ok_or_else(|| {
                ChannelError::BadParams("replace_with requires a target state".to_string())
            })?;
            if target.n() != n {
                return Err(ChannelError::BadParams(format!(
                    "replace_with target acts on {} qubit(s), channel expects {n}",
                    target.n()
                )));
            }
            QuantumChannel::replace_with(target)
        }
        other => Err(ChannelError::UnknownChannel(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qregister::PureState;
    use crate::CVector;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plus_state() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(CVector::from_column_slice(&[c(s, 0.0), c(s, 0.0)]), 1)
            .unwrap()
            .to_density()
    }

    #[test]
    fn identity_channel_has_one_operator() {
        let ch = QuantumChannel::identity(2).unwrap();
        assert_eq!(ch.kraus().len(), 1);
        assert_eq!(ch.dim(), 4);
    }

    #[test]
    fn scaled_identity_is_rejected() {
        let op = CMatrix::identity(2, 2) * c(0.9, 0.0);
        match QuantumChannel::new(vec![op], 1) {
            Err(ChannelError::NotTracePreserving { deviation }) => {
                assert!((deviation - (1.0 - 0.81)).abs() < 1e-12)
            }
            other => panic!("expected NotTracePreserving, got {other:?}"),
        }
    }

    #[test]
    fn empty_kraus_list_is_rejected() {
        assert!(matches!(
            QuantumChannel::new(Vec::new(), 1),
            Err(ChannelError::EmptyKraus)
        ));
    }

    #[test]
    fn kraus_shape_is_checked() {
        let ops = vec![CMatrix::identity(2, 2)];
        assert!(matches!(
            QuantumChannel::new(ops, 2),
            Err(ChannelError::DimensionMismatch { index: 0, .. })
        ));
    }

    #[test]
    fn identity_preserves_the_state() {
        let ch = QuantumChannel::identity(1).unwrap();
        let rho = plus_state();
        let out = ch.apply(&rho).unwrap();
        assert!(crate::linalg::max_abs_diff(out.entries(), rho.entries()) < 1e-15);
    }

    #[test]
    fn full_dephasing_kills_off_diagonals() {
        let ch = QuantumChannel::dephasing(1, 0.5).unwrap();
        assert_eq!(ch.kraus().len(), 2);
        let out = ch.apply(&plus_state()).unwrap();
        let mixed = DensityMatrix::maximally_mixed(1).unwrap();
        assert!(crate::linalg::max_abs_diff(out.entries(), mixed.entries()) < 1e-12);
    }

    #[test]
    fn full_depolarizing_fully_mixes() {
        let ch = QuantumChannel::depolarizing(1, 1.0).unwrap();
        let out = ch.apply(&plus_state()).unwrap();
        let mixed = DensityMatrix::maximally_mixed(1).unwrap();
        assert!(crate::linalg::max_abs_diff(out.entries(), mixed.entries()) < 1e-12);
    }

    #[test]
    fn replacement_with_pure_target() {
        let target = PureState::new(
            CVector::from_column_slice(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]),
            2,
        )
        .unwrap()
        .to_density();
        let ch = QuantumChannel::replace_with(&target).unwrap();
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        let out = ch.apply(&rho).unwrap();
        assert!(crate::linalg::max_abs_diff(out.entries(), target.entries()) < 1e-12);
    }

    #[test]
    fn apply_rejects_mismatched_register() {
        let ch = QuantumChannel::identity(1).unwrap();
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        assert!(matches!(
            ch.apply(&rho),
            Err(ChannelError::StateMismatch {
                channel_n: 1,
                state_n: 2
            })
        ));
    }

    #[test]
    fn named_channels_dispatch() {
        assert!(standard_channel("identity", &[], None, 2).is_ok());
        assert!(standard_channel("dephasing", &[0.5], None, 1).is_ok());
        assert!(standard_channel("depolarizing", &[0.3], None, 1).is_ok());
        assert!(matches!(
            standard_channel("teleport", &[], None, 1),
            Err(ChannelError::UnknownChannel(_))
        ));
        assert!(matches!(
            standard_channel("dephasing", &[1.5], None, 1),
            Err(ChannelError::BadParams(_))
        ));
        assert!(matches!(
            standard_channel("dephasing", &[], None, 1),
            Err(ChannelError::BadParams(_))
        ));
        assert!(matches!(
            standard_channel("replace_with", &[], None, 1),
            Err(ChannelError::BadParams(_))
        ));
    }

    #[test]
    fn family_cap_is_enforced() {
        assert!(matches!(
            QuantumChannel::depolarizing(7, 0.5),
            Err(ChannelError::RegisterTooLarge { n: 7, cap: 6 })
        ));
    }
}
