//! Dense representation of an n-qubit register: density matrices, pure
//! states, preferred product bases, and partial traces over arbitrary qubit
//! subsets.
//!
//! Index convention: qubit 0 is the most significant bit of a computational
//! index, so |b_0 b_1 … b_{n-1}⟩ sits at index Σ_q b_q · 2^(n-1-q). Partial
//! traces keep the surviving qubits in ascending original order. All types
//! are immutable after construction and all operations are pure functions.

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg;
use crate::{CMatrix, CVector};

/// Default upper bound on the register size accepted by constructors; a
/// 12-qubit density matrix already holds 4096 x 4096 complex entries.
pub const DEFAULT_REGISTER_CAP: usize = 12;

/// Entrywise tolerance for the Hermiticity check.
pub const HERMITICITY_TOL: f64 = 1e-9;
/// Tolerance on |trace − 1|.
pub const TRACE_TOL: f64 = 1e-9;
/// Eigenvalue floor for the positive-semidefiniteness check. Small negative
/// eigenvalues from round-off are accepted here and never clamped in stored
/// state.
pub const PSD_EIG_FLOOR: f64 = -1e-9;
/// Tolerance for pure-state normalization and local-basis orthonormality.
pub const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum StateError {
    #[error("dimension mismatch: expected {expected}x{expected} for n = {n}, got {rows}x{cols}")]
    DimensionMismatch {
        n: usize,
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("matrix is not Hermitian: max |entry − conj(mirror)| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },
    #[error("trace is not 1: trace = {trace}")]
    BadTrace { trace: Complex64 },
    #[error("matrix is not positive semidefinite: min eigenvalue = {min_eigenvalue:.3e}")]
    NotPsd { min_eigenvalue: f64 },
    #[error("state vector is not normalized: ‖ψ‖² = {norm_sq}")]
    NotNormalized { norm_sq: f64 },
    #[error("register size {n} exceeds the cap of {cap} qubits")]
    RegisterTooLarge { n: usize, cap: usize },
    #[error("register must contain at least one qubit")]
    EmptyRegister,
    #[error("subset register size {subset_n} does not match state register size {state_n}")]
    SubsetMismatch { subset_n: usize, state_n: usize },
    #[error("cannot trace out all {n} qubits; handle the full-loss case before reducing")]
    FullTrace { n: usize },
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("qubit index {index} out of range for an {n}-qubit register")]
    QubitOutOfRange { index: usize, n: usize },
    #[error("duplicate qubit index {index} in subset")]
    DuplicateQubit { index: usize },
    #[error("local basis pair for qubit {qubit} is not orthonormal: max deviation {deviation:.3e}")]
    NotOrthonormal { qubit: usize, deviation: f64 },
}

/// Hermitian, positive-semidefinite, unit-trace operator on an n-qubit
/// register.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    entries: CMatrix,
}

impl DensityMatrix {
    /// Validates `entries` as a density matrix on `n` qubits: the dimension
    /// must be exactly 2^n and the Hermiticity, unit-trace, and positivity
    /// invariants must hold within their tolerances.
    pub fn new(entries: CMatrix, n: usize) -> Result<Self, StateError> {
        Self::with_cap(entries, n, DEFAULT_REGISTER_CAP)
    }

    /// Like [`DensityMatrix::new`] with an explicit register cap.
    pub fn with_cap(entries: CMatrix, n: usize, cap: usize) -> Result<Self, StateError> {
        check_register_size(n, cap)?;
        let dim = 1usize << n;
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(StateError::DimensionMismatch {
                n,
                expected: dim,
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        let state = Self { n, entries };
        state.validate()?;
        Ok(state)
    }

    /// Re-checks the three stored-state invariants.
    pub fn validate(&self) -> Result<(), StateError> {
        let deviation = hermiticity_deviation(&self.entries);
        if deviation > HERMITICITY_TOL {
            return Err(StateError::NotHermitian { deviation });
        }
        let trace = self.entries.trace();
        if (trace - Complex64::ONE).norm() > TRACE_TOL {
            return Err(StateError::BadTrace { trace });
        }
        let min_eigenvalue = linalg::hermitian_eigenvalues(&self.entries).min();
        if min_eigenvalue < PSD_EIG_FLOOR {
            return Err(StateError::NotPsd { min_eigenvalue });
        }
        Ok(())
    }

    /// Wraps entries that are valid by construction (partial traces of valid
    /// states, outer products of unit vectors, CPTP outputs, …).
    pub(crate) fn trusted(entries: CMatrix, n: usize) -> Self {
        debug_assert_eq!(entries.nrows(), 1usize << n);
        debug_assert_eq!(entries.ncols(), 1usize << n);
        debug_assert!((entries.trace() - Complex64::ONE).norm() < 1e-6);
        Self { n, entries }
    }

    /// Maximally mixed state I / 2^n.
    pub fn maximally_mixed(n: usize) -> Result<Self, StateError> {
        check_register_size(n, DEFAULT_REGISTER_CAP)?;
        let dim = 1usize << n;
        let entries = CMatrix::identity(dim, dim) / Complex64::from(dim as f64);
        Ok(Self::trusted(entries, n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }
}

/// Unit-norm state vector on an n-qubit register.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    n: usize,
    amplitudes: CVector,
}

impl PureState {
    pub fn new(amplitudes: CVector, n: usize) -> Result<Self, StateError> {
        check_register_size(n, DEFAULT_REGISTER_CAP)?;
        let dim = 1usize << n;
        if amplitudes.len() != dim {
            return Err(StateError::DimensionMismatch {
                n,
                expected: dim,
                rows: amplitudes.len(),
                cols: 1,
            });
        }
        let norm_sq = amplitudes.norm_squared();
        if (norm_sq - 1.0).abs() > UNIT_TOL {
            return Err(StateError::NotNormalized { norm_sq });
        }
        Ok(Self { n, amplitudes })
    }

    pub(crate) fn trusted(amplitudes: CVector, n: usize) -> Self {
        debug_assert_eq!(amplitudes.len(), 1usize << n);
        debug_assert!((amplitudes.norm_squared() - 1.0).abs() < 1e-6);
        Self { n, amplitudes }
    }

    /// Rank-one density matrix |ψ⟩⟨ψ|.
    pub fn to_density(&self) -> DensityMatrix {
        let outer = &self.amplitudes * self.amplitudes.adjoint();
        DensityMatrix::trusted(outer, self.n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }
}

/// A set of qubit indices to trace out of an n-qubit register.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QubitSubset {
    n: usize,
    lost: Vec<usize>,
}

impl QubitSubset {
    /// Builds the subset, sorting the indices. Indices must be unique and in
    /// `[0, n)`; the subset may cover the whole register.
    pub fn new(n: usize, lost: impl IntoIterator<Item = usize>) -> Result<Self, StateError> {
        if n == 0 {
            return Err(StateError::EmptyRegister);
        }
        let mut lost: Vec<usize> = lost.into_iter().collect();
        lost.sort_unstable();
        if let Some(w) = lost.windows(2).find(|w| w[0] == w[1]) {
            return Err(StateError::DuplicateQubit { index: w[0] });
        }
        if let Some(&index) = lost.iter().find(|&&q| q >= n) {
            return Err(StateError::QubitOutOfRange { index, n });
        }
        Ok(Self { n, lost })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Lost qubit indices, ascending.
    pub fn lost(&self) -> &[usize] {
        &self.lost
    }

    pub fn lost_count(&self) -> usize {
        self.lost.len()
    }

    /// Surviving qubit indices, ascending.
    pub fn kept(&self) -> Vec<usize> {
        (0..self.n).filter(|q| !self.lost.contains(q)).collect()
    }

    pub fn kept_count(&self) -> usize {
        self.n - self.lost.len()
    }

    pub fn is_full(&self) -> bool {
        self.lost.len() == self.n
    }
}

/// Traces out the qubits in `subset`, returning the reduced state on the
/// kept qubits in ascending original order. Trace is preserved exactly up to
/// round-off.
pub fn partial_trace(rho: &DensityMatrix, subset: &QubitSubset) -> Result<DensityMatrix, StateError> {
    if subset.n() != rho.n() {
        return Err(StateError::SubsetMismatch {
            subset_n: subset.n(),
            state_n: rho.n(),
        });
    }
    if subset.is_full() {
        return Err(StateError::FullTrace { n: rho.n() });
    }
    let kept = subset.kept();
    let reduced = trace_out(rho.entries(), rho.n(), subset.lost(), &kept);
    Ok(DensityMatrix::trusted(reduced, kept.len()))
}

/// Expands every local index over `positions` (ascending qubit indices,
/// most significant local bit first) into its n-qubit index contribution.
fn scatter_table(n: usize, positions: &[usize]) -> Vec<usize> {
    let k = positions.len();
    (0..1usize << k)
        .map(|local| {
            let mut full = 0usize;
            for (j, &q) in positions.iter().enumerate() {
                if (local >> (k - 1 - j)) & 1 == 1 {
                    full |= 1 << (n - 1 - q);
                }
            }
            full
        })
        .collect()
}

fn trace_out(entries: &CMatrix, n: usize, lost: &[usize], kept: &[usize]) -> CMatrix {
    let keep_map = scatter_table(n, kept);
    let lose_map = scatter_table(n, lost);
    let dim = keep_map.len();
    let mut data = vec![Complex64::ZERO; dim * dim];
    linalg::for_each_column(&mut data, dim, |col, out_col| {
        let col_base = keep_map[col];
        for (row, out) in out_col.iter_mut().enumerate() {
            let row_base = keep_map[row];
            let mut acc = Complex64::ZERO;
            for &lose_bits in &lose_map {
                acc += entries[(row_base | lose_bits, col_base | lose_bits)];
            }
            *out = acc;
        }
    });
    CMatrix::from_vec(dim, dim, data)
}

/// A product orthonormal basis of the n-qubit space: one orthonormal pair of
/// single-qubit vectors per qubit, whose tensor products form the 2^n basis
/// elements |ψ_i⟩. The bits of the element index i select the local vectors
/// (qubit 0 = most significant bit).
#[derive(Clone, Debug, PartialEq)]
pub struct ProductBasis {
    n: usize,
    local: Vec<[CVector; 2]>,
}

impl ProductBasis {
    /// The computational basis {|0⟩, |1⟩} on every qubit.
    pub fn computational(n: usize) -> Result<Self, StateError> {
        check_register_size(n, DEFAULT_REGISTER_CAP)?;
        let zero = CVector::from_column_slice(&[Complex64::ONE, Complex64::ZERO]);
        let one = CVector::from_column_slice(&[Complex64::ZERO, Complex64::ONE]);
        Ok(Self {
            n,
            local: vec![[zero, one]; n],
        })
    }

    /// Builds a basis from one `[a, b]` pair of single-qubit vectors per
    /// qubit. Each pair must be orthonormal within [`UNIT_TOL`].
    pub fn new(local: Vec<[CVector; 2]>) -> Result<Self, StateError> {
        let n = local.len();
        check_register_size(n, DEFAULT_REGISTER_CAP)?;
        for (qubit, pair) in local.iter().enumerate() {
            for v in pair {
                if v.len() != 2 {
                    return Err(StateError::DimensionMismatch {
                        n: 1,
                        expected: 2,
                        rows: v.len(),
                        cols: 1,
                    });
                }
            }
            let aa = (pair[0].dotc(&pair[0]).re - 1.0).abs();
            let bb = (pair[1].dotc(&pair[1]).re - 1.0).abs();
            let ab = pair[0].dotc(&pair[1]).norm();
            let deviation = aa.max(bb).max(ab);
            if deviation > UNIT_TOL {
                return Err(StateError::NotOrthonormal { qubit, deviation });
            }
        }
        Ok(Self { n, local })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    /// The `[a, b]` pair for each qubit, ascending.
    pub fn local_bases(&self) -> &[[CVector; 2]] {
        &self.local
    }

    /// Basis element |ψ_index⟩: the tensor product of the local vectors
    /// selected by the bits of `index`.
    pub fn state(&self, index: usize) -> Result<PureState, StateError> {
        if index >= self.dim() {
            return Err(StateError::IndexOutOfRange {
                index,
                limit: self.dim(),
            });
        }
        let mut amps = CVector::from_element(1, Complex64::ONE);
        for q in 0..self.n {
            let bit = (index >> (self.n - 1 - q)) & 1;
            amps = amps.kronecker(&self.local[q][bit]);
        }
        Ok(PureState::trusted(amps, self.n))
    }

    /// The reduced state left after tracing `subset` out of a basis element:
    /// the product pure state on the kept qubits selected by `kept_bits`
    /// (most significant bit = lowest kept qubit index). Tracing a product
    /// basis element only depends on its kept-qubit bits, so this equals
    /// `partial_trace(|ψ_i⟩⟨ψ_i|, subset)` for every i that matches
    /// `kept_bits` on the kept qubits.
    pub fn reduced_state(
        &self,
        subset: &QubitSubset,
        kept_bits: usize,
    ) -> Result<DensityMatrix, StateError> {
        if subset.n() != self.n {
            return Err(StateError::SubsetMismatch {
                subset_n: subset.n(),
                state_n: self.n,
            });
        }
        let kept = subset.kept();
        if kept.is_empty() {
            return Err(StateError::FullTrace { n: self.n });
        }
        let k = kept.len();
        if kept_bits >= 1usize << k {
            return Err(StateError::IndexOutOfRange {
                index: kept_bits,
                limit: 1usize << k,
            });
        }
        let mut amps = CVector::from_element(1, Complex64::ONE);
        for (j, &q) in kept.iter().enumerate() {
            let bit = (kept_bits >> (k - 1 - j)) & 1;
            amps = amps.kronecker(&self.local[q][bit]);
        }
        Ok(PureState::trusted(amps, k).to_density())
    }
}

fn check_register_size(n: usize, cap: usize) -> Result<(), StateError> {
    if n == 0 {
        return Err(StateError::EmptyRegister);
    }
    if n > cap {
        return Err(StateError::RegisterTooLarge { n, cap });
    }
    Ok(())
}

fn hermiticity_deviation(m: &CMatrix) -> f64 {
    let dim = m.nrows();
    let mut max_dev = 0.0f64;
    for i in 0..dim {
        for j in i..dim {
            let dev = (m[(i, j)] - m[(j, i)].conj()).norm();
            if dev > max_dev {
                max_dev = dev;
            }
        }
    }
    max_dev
}
