//! The stinginess measures and the resource theory built on them: the
//! classical measure `S_C`, the quantum measure `S_Q`, free-set membership,
//! the reset policy, and a sampling falsifier for the free-operation
//! property.
//!
//! For an n-qubit state ρ, a loss count m < n, a preferred product basis
//! {|ψ_i⟩}, and a unit-normalized distance D,
//!
//! ```text
//! S_Q(m, ρ) = (1/2) · ( m/n  +  min D(tr_m ρ, tr_m |ψ_i⟩⟨ψ_i|) )
//! ```
//!
//! where the minimum ranges over every size-m lost-qubit subset and every
//! basis index i. Losing the whole register (m = n) has infinite measure by
//! convention. Tracing a product basis element depends only on its
//! kept-qubit bits, so the 2^n basis indices collapse to 2^(n−m) reduced
//! targets per subset; [`s_quantum_bruteforce`] keeps the unreduced
//! minimization as a reference oracle.

use std::fmt;

use itertools::Itertools;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::channels::{ChannelError, QuantumChannel};
use crate::metrics::{DistanceMeasure, MetricError};
use crate::qregister::{partial_trace, DensityMatrix, ProductBasis, QubitSubset, StateError};
use crate::sampling::ginibre_density;

/// Register cap for the brute-force reference evaluation.
pub const BRUTE_FORCE_CAP: usize = 6;

#[derive(Debug, Error)]
pub enum StinginessError {
    #[error("loss count {m} exceeds register size {n}")]
    BadLossCount { m: usize, n: usize },
    #[error("basis register size {basis_n} does not match state register size {state_n}")]
    BasisMismatch { basis_n: usize, state_n: usize },
    #[error("register size {n} exceeds the brute-force cap of {cap} qubits")]
    RegisterTooLarge { n: usize, cap: usize },
    #[error("channel register size {channel_n} does not match free-set register size {spec_n}")]
    ChannelMismatch { channel_n: usize, spec_n: usize },
    #[error("no free samples found among {samples} draws; the free set may be empty at this threshold")]
    NoFreeSamplesFound { samples: usize },
    #[error("threshold must be finite and nonnegative, got {0}")]
    BadThreshold(f64),
    #[error("sampler weights must be finite and nonnegative with a positive sum")]
    BadSamplerWeights,
    #[error("comb must have at least one tooth")]
    EmptyComb,
    #[error("broken tooth count {broken} exceeds tooth count {teeth}")]
    BrokenExceedsTeeth { broken: usize, teeth: usize },
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

/// Value of the quantum measure: finite (and below 1) for m < n, infinite
/// exactly when the whole register is lost. Infinity is a distinct variant,
/// never a large float, so threshold comparisons stay exact.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StinginessValue {
    Finite(f64),
    Infinite,
}

impl StinginessValue {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Self::Infinite)
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            Self::Finite(v) => Some(*v),
            Self::Infinite => None,
        }
    }

    /// True when the value is strictly greater than `threshold`. The
    /// infinite value exceeds every finite threshold.
    pub fn exceeds(&self, threshold: f64) -> bool {
        match self {
            Self::Finite(v) => *v > threshold,
            Self::Infinite => true,
        }
    }
}

impl fmt::Display for StinginessValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(v) => write!(f, "{v}"),
            Self::Infinite => f.write_str("inf"),
        }
    }
}

/// A comb with some number of teeth broken off.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassicalComb {
    teeth: usize,
    broken: usize,
}

impl ClassicalComb {
    pub fn new(teeth: usize, broken: usize) -> Result<Self, StinginessError> {
        if teeth == 0 {
            return Err(StinginessError::EmptyComb);
        }
        if broken > teeth {
            return Err(StinginessError::BrokenExceedsTeeth { broken, teeth });
        }
        Ok(Self { teeth, broken })
    }

    pub fn teeth(&self) -> usize {
        self.teeth
    }

    pub fn broken(&self) -> usize {
        self.broken
    }
}

/// Classical stinginess: the fraction of teeth broken before replacement,
/// as an exact rational in {0, 1/n, …, 1}. Replacing only at the last tooth
/// scores 1.
pub fn s_classical(comb: &ClassicalComb) -> Ratio<u64> {
    Ratio::new(comb.broken as u64, comb.teeth as u64)
}

/// Outcome of the S_Q minimization: the value together with a loss scenario
/// and kept-qubit bit assignment that achieve it. Among minimizers the
/// lexicographically smallest lost subset wins, then the smallest kept-bits
/// value. For the full-loss case the witness is the whole register with an
/// empty bit assignment.
#[derive(Clone, Debug)]
pub struct MeasureWitness {
    value: StinginessValue,
    lost: QubitSubset,
    kept_bits: usize,
}

impl MeasureWitness {
    pub fn value(&self) -> StinginessValue {
        self.value
    }

    /// The minimizing lost-qubit subset.
    pub fn lost(&self) -> &QubitSubset {
        &self.lost
    }

    /// The minimizing kept-qubit bit assignment, most significant bit =
    /// lowest kept qubit index.
    pub fn kept_bits(&self) -> usize {
        self.kept_bits
    }

    /// Kept-bit assignment as a bit string ordered like [`QubitSubset::kept`];
    /// empty for the full-loss case.
    pub fn kept_bits_string(&self) -> String {
        let k = self.lost.kept_count();
        (0..k)
            .map(|j| {
                if (self.kept_bits >> (k - 1 - j)) & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect()
    }
}

/// All size-m subsets of the register, in lexicographic order of their
/// sorted index lists. This order defines the witness tie-break.
fn lost_subsets(n: usize, m: usize) -> Vec<QubitSubset> {
    (0..n)
        .combinations(m)
        .map(|combo| QubitSubset::new(n, combo).expect("combination indices are unique and in range"))
        .collect()
}

/// One evaluated loss scenario: the best distance over kept-bit assignments
/// for a fixed subset, keyed for the deterministic cross-subset reduction.
struct ScenarioMin {
    distance: f64,
    rank: usize,
    kept_bits: usize,
}

fn checked_loss_setup(
    rho: &DensityMatrix,
    m: usize,
    basis: &ProductBasis,
) -> Result<(), StinginessError> {
    if basis.n() != rho.n() {
        return Err(StinginessError::BasisMismatch {
            basis_n: basis.n(),
            state_n: rho.n(),
        });
    }
    if m > rho.n() {
        return Err(StinginessError::BadLossCount { m, n: rho.n() });
    }
    Ok(())
}

fn full_loss_witness(n: usize) -> MeasureWitness {
    MeasureWitness {
        value: StinginessValue::Infinite,
        lost: QubitSubset::new(n, 0..n).expect("full subset is valid"),
        kept_bits: 0,
    }
}

/// Quantum stinginess measure with witness.
///
/// Minimizes the distance between the reduced state and the reduced
/// preferred-basis elements over all C(n, m) loss scenarios and 2^(n−m)
/// kept-bit assignments, then returns (1/2)(m/n + d*). The scenario loop is
/// evaluated in parallel under the `parallel` feature; the result, including
/// the tie-break, is identical to sequential evaluation.
pub fn s_quantum(
    rho: &DensityMatrix,
    m: usize,
    basis: &ProductBasis,
    distance: DistanceMeasure,
) -> Result<MeasureWitness, StinginessError> {
    checked_loss_setup(rho, m, basis)?;
    let n = rho.n();
    if m == n {
        return Ok(full_loss_witness(n));
    }

    let subsets = lost_subsets(n, m);
    let kept_count = n - m;
    let evaluate = |(rank, subset): (usize, &QubitSubset)| -> Result<ScenarioMin, StinginessError> {
        let reduced = partial_trace(rho, subset)?;
        let mut best = f64::INFINITY;
        let mut best_bits = 0usize;
        for bits in 0..1usize << kept_count {
            let target = basis.reduced_state(subset, bits)?;
            let d = distance.evaluate(&reduced, &target)?;
            if d < best {
                best = d;
                best_bits = bits;
            }
        }
        Ok(ScenarioMin {
            distance: best,
            rank,
            kept_bits: best_bits,
        })
    };

    #[cfg(feature = "parallel")]
    let minima: Vec<ScenarioMin> = {
        use rayon::prelude::*;
        subsets
            .par_iter()
            .enumerate()
            .map(evaluate)
            .collect::<Result<_, _>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let minima: Vec<ScenarioMin> = subsets
        .iter()
        .enumerate()
        .map(evaluate)
        .collect::<Result<_, _>>()?;

    let best = minima
        .into_iter()
        .min_by(|a, b| a.distance.total_cmp(&b.distance).then(a.rank.cmp(&b.rank)))
        .expect("at least one loss scenario exists");

    let value = 0.5 * (m as f64 / n as f64 + best.distance);
    Ok(MeasureWitness {
        value: StinginessValue::Finite(value),
        lost: subsets.into_iter().nth(best.rank).expect("rank in range"),
        kept_bits: best.kept_bits,
    })
}

/// Reference evaluation of the measure that minimizes over all 2^n basis
/// indices through the two-step partial-trace route, with no reduced-basis
/// shortcut. Sequential on purpose and capped at [`BRUTE_FORCE_CAP`] qubits;
/// meant for cross-checking [`s_quantum`] in tests.
pub fn s_quantum_bruteforce(
    rho: &DensityMatrix,
    m: usize,
    basis: &ProductBasis,
    distance: DistanceMeasure,
) -> Result<StinginessValue, StinginessError> {
    let n = rho.n();
    if n > BRUTE_FORCE_CAP {
        return Err(StinginessError::RegisterTooLarge {
            n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    checked_loss_setup(rho, m, basis)?;
    if m == n {
        return Ok(StinginessValue::Infinite);
    }
    let mut best = f64::INFINITY;
    for subset in lost_subsets(n, m) {
        let reduced = partial_trace(rho, &subset)?;
        for i in 0..1usize << n {
            let element = basis.state(i)?.to_density();
            let target = partial_trace(&element, &subset)?;
            let d = distance.evaluate(&reduced, &target)?;
            if d < best {
                best = d;
            }
        }
    }
    Ok(StinginessValue::Finite(0.5 * (m as f64 / n as f64 + best)))
}

/// A free-set specification: loss count m, threshold, preferred basis, and
/// distance choice. A state belongs to the free set when its measure value
/// is finite and does not exceed the threshold.
#[derive(Clone, Debug)]
pub struct FreeSetSpec {
    m: usize,
    threshold: f64,
    basis: ProductBasis,
    distance: DistanceMeasure,
}

impl FreeSetSpec {
    pub fn new(
        m: usize,
        threshold: f64,
        basis: ProductBasis,
        distance: DistanceMeasure,
    ) -> Result<Self, StinginessError> {
        if !threshold.is_finite() || threshold < 0.0 {
            return Err(StinginessError::BadThreshold(threshold));
        }
        if m > basis.n() {
            return Err(StinginessError::BadLossCount { m, n: basis.n() });
        }
        Ok(Self {
            m,
            threshold,
            basis,
            distance,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn basis(&self) -> &ProductBasis {
        &self.basis
    }

    pub fn distance(&self) -> DistanceMeasure {
        self.distance
    }
}

/// Membership verdict together with the witness that produced it.
#[derive(Clone, Debug)]
pub struct FreeMembership {
    pub free: bool,
    pub witness: MeasureWitness,
}

/// Free-set membership: the measure value is finite and at most the
/// threshold (the comparison is non-strict; the reset policy is its strict
/// complement).
pub fn is_free(rho: &DensityMatrix, spec: &FreeSetSpec) -> Result<FreeMembership, StinginessError> {
    let witness = s_quantum(rho, spec.m, &spec.basis, spec.distance)?;
    Ok(FreeMembership {
        free: !witness.value().exceeds(spec.threshold),
        witness,
    })
}

/// Reset policy: the register is reset exactly when the measured value is
/// infinite or strictly greater than the threshold.
pub fn reset_decision(value: StinginessValue, threshold: f64) -> bool {
    value.exceeds(threshold)
}

/// Configuration for the falsifier's state sampler. Each sample draws a
/// preferred-basis element, a Ginibre state, or a convex blend of the two,
/// with the given relative weights (normalized before use).
#[derive(Clone, Debug)]
pub struct SamplerConfig {
    pub max_samples: usize,
    pub seed: u64,
    pub basis_weight: f64,
    pub ginibre_weight: f64,
    pub blend_weight: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            max_samples: 500,
            seed: 0,
            basis_weight: 0.2,
            ginibre_weight: 0.4,
            blend_weight: 0.4,
        }
    }
}

impl SamplerConfig {
    pub fn new(max_samples: usize, seed: u64) -> Self {
        Self {
            max_samples,
            seed,
            ..Self::default()
        }
    }
}

/// Outcome of a falsification run.
#[derive(Clone, Debug)]
pub enum FalsifierVerdict {
    /// A free input was mapped outside the free set. Both values are
    /// recomputable from the stored input state and the channel.
    ViolationFound {
        input_state: DensityMatrix,
        input_value: StinginessValue,
        output_value: StinginessValue,
    },
    /// Every free input tested stayed free.
    NoViolationFound { free_samples_tested: usize },
}

/// Searches for a counterexample to the free-operation property of
/// `channel`: a state inside the free set whose image under the channel
/// falls outside it. Draws up to `sampler.max_samples` states, keeps the
/// free ones, applies the channel, and re-tests membership. The sampling
/// loop is sequential in the seeded RNG, so a fixed seed fixes the verdict;
/// membership evaluations themselves parallelize internally.
///
/// Finding no violation does not prove the channel free — the free set is
/// not convex, so no finite sample certifies closure.
pub fn falsify_free_operation(
    channel: &QuantumChannel,
    spec: &FreeSetSpec,
    sampler: &SamplerConfig,
) -> Result<FalsifierVerdict, StinginessError> {
    let n = spec.basis.n();
    if channel.n() != n {
        return Err(StinginessError::ChannelMismatch {
            channel_n: channel.n(),
            spec_n: n,
        });
    }
    let weights = [
        sampler.basis_weight,
        sampler.ginibre_weight,
        sampler.blend_weight,
    ];
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(StinginessError::BadSamplerWeights);
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(StinginessError::BadSamplerWeights);
    }
    let basis_cut = weights[0] / total;
    let ginibre_cut = (weights[0] + weights[1]) / total;

    let mut rng = ChaCha8Rng::seed_from_u64(sampler.seed);
    let dim = 1usize << n;
    let mut tested = 0usize;
    for _ in 0..sampler.max_samples {
        let state = {
            let kind: f64 = rng.random();
            if kind < basis_cut {
                let index = rng.random_range(0..dim);
                spec.basis.state(index)?.to_density()
            } else if kind < ginibre_cut {
                ginibre_density(n, &mut rng)?
            } else {
                let index = rng.random_range(0..dim);
                let weight: f64 = rng.random();
                let noise = ginibre_density(n, &mut rng)?;
                blend(
                    weight,
                    &spec.basis.state(index)?.to_density(),
                    &noise,
                )
            }
        };
        let input = is_free(&state, spec)?;
        if !input.free {
            continue;
        }
        tested += 1;
        let output_state = channel.apply(&state)?;
        let output = is_free(&output_state, spec)?;
        if !output.free {
            return Ok(FalsifierVerdict::ViolationFound {
                input_state: state,
                input_value: input.witness.value(),
                output_value: output.witness.value(),
            });
        }
    }
    if tested == 0 {
        return Err(StinginessError::NoFreeSamplesFound {
            samples: sampler.max_samples,
        });
    }
    Ok(FalsifierVerdict::NoViolationFound {
        free_samples_tested: tested,
    })
}

/// Convex combination w·ρ + (1−w)·σ of two valid states.
fn blend(w: f64, rho: &DensityMatrix, sigma: &DensityMatrix) -> DensityMatrix {
    use num_complex::Complex64;
    let entries = rho.entries() * Complex64::from(w) + sigma.entries() * Complex64::from(1.0 - w);
    DensityMatrix::trusted(entries, rho.n())
}
