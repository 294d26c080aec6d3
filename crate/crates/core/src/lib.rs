//! Classical and quantum stinginess measures over dense n-qubit registers.
//!
//! The crate models an n-qubit register as a dense density matrix and builds
//! a small resource theory on top of it:
//!
//! - [`qregister`]: density matrices, pure states, preferred product bases,
//!   and partial traces over arbitrary qubit subsets;
//! - [`metrics`]: unit-normalized distance measures on density operators;
//! - [`stinginess`]: the classical measure `S_C`, the quantum measure `S_Q`
//!   (a combinatorial minimum over lost-qubit subsets and preferred-basis
//!   elements), free-set membership, the reset policy, and a sampling
//!   falsifier for the free-operation property;
//! - [`channels`]: CPTP maps as Kraus-operator lists;
//! - [`sampling`]: seeded random states, unitaries, and product bases.
//!
//! With the default `parallel` feature the subset/basis minimization and the
//! partial trace run on rayon; disabling it gives a sequential build that
//! produces bit-identical results.

pub mod channels;
mod linalg;
pub mod metrics;
pub mod qregister;
pub mod sampling;
pub mod stinginess;

pub use nalgebra;
pub use num_complex::Complex64;

/// Dense complex matrix used throughout the crate.
pub type CMatrix = nalgebra::DMatrix<Complex64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<Complex64>;

pub use channels::{standard_channel, ChannelError, QuantumChannel};
pub use metrics::{hs_distance_normalized, trace_distance, DistanceMeasure, MetricError};
pub use qregister::{partial_trace, DensityMatrix, ProductBasis, PureState, QubitSubset, StateError};
pub use stinginess::{
    falsify_free_operation, is_free, reset_decision, s_classical, s_quantum,
    s_quantum_bruteforce, ClassicalComb, FalsifierVerdict, FreeMembership, FreeSetSpec,
    MeasureWitness, SamplerConfig, StinginessError, StinginessValue,
};
