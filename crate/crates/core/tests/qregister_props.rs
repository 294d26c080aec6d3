//! Oracle and property tests for the register types and the partial trace.
//! The partial-trace oracle here is an independent index-summation over full
//! register indices, with no scatter tables shared with the implementation.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stingy_core::sampling::{ginibre_density, random_product_basis, random_pure_state};
use stingy_core::{partial_trace, CMatrix, Complex64, DensityMatrix, ProductBasis, QubitSubset};

fn bit(index: usize, qubit: usize, n: usize) -> usize {
    (index >> (n - 1 - qubit)) & 1
}

/// Gathers the bits of `index` at the `kept` qubits, most significant first.
fn compress(index: usize, kept: &[usize], n: usize) -> usize {
    kept.iter()
        .fold(0, |acc, &q| (acc << 1) | bit(index, q, n))
}

/// Naive partial trace: loop over all pairs of full indices and accumulate
/// the entries whose lost-qubit bits agree.
fn naive_partial_trace(rho: &CMatrix, n: usize, lost: &[usize]) -> CMatrix {
    let kept: Vec<usize> = (0..n).filter(|q| !lost.contains(q)).collect();
    let dim = 1usize << n;
    let mut out = CMatrix::zeros(1 << kept.len(), 1 << kept.len());
    for row in 0..dim {
        for col in 0..dim {
            if lost.iter().all(|&q| bit(row, q, n) == bit(col, q, n)) {
                out[(compress(row, &kept, n), compress(col, &kept, n))] += rho[(row, col)];
            }
        }
    }
    out
}

fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn random_subset(n: usize, m: usize, rng: &mut ChaCha8Rng) -> QubitSubset {
    let mut qubits: Vec<usize> = (0..n).collect();
    qubits.shuffle(rng);
    QubitSubset::new(n, qubits.into_iter().take(m)).unwrap()
}

/// Every nonempty proper subset of an n-qubit register.
fn proper_subsets(n: usize) -> Vec<QubitSubset> {
    (1..(1usize << n) - 1)
        .map(|mask| QubitSubset::new(n, (0..n).filter(|q| (mask >> q) & 1 == 1)).unwrap())
        .collect()
}

#[test]
fn outer_product_matches_elementwise_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let psi = random_pure_state(2, &mut rng).unwrap();
    let rho = psi.to_density();
    for i in 0..4 {
        for j in 0..4 {
            let expected = psi.amplitudes()[i] * psi.amplitudes()[j].conj();
            assert!((rho.entries()[(i, j)] - expected).norm() < 1e-15);
        }
    }
}

#[test]
fn three_qubit_pair_loss_matches_naive_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let rho = ginibre_density(3, &mut rng).unwrap();
    let subset = QubitSubset::new(3, [0, 2]).unwrap();
    let reduced = partial_trace(&rho, &subset).unwrap();
    let expected = naive_partial_trace(rho.entries(), 3, &[0, 2]);
    assert!(max_abs_diff(reduced.entries(), &expected) < 1e-12);
}

#[test]
fn partial_trace_matches_naive_oracle_on_all_proper_subsets() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in 2..=4usize {
        for _ in 0..20 {
            let rho = ginibre_density(n, &mut rng).unwrap();
            for subset in proper_subsets(n) {
                let reduced = partial_trace(&rho, &subset).unwrap();
                let expected = naive_partial_trace(rho.entries(), n, subset.lost());
                assert!(
                    max_abs_diff(reduced.entries(), &expected) < 1e-12,
                    "n={n} lost={:?}",
                    subset.lost()
                );
            }
        }
    }
}

#[test]
fn partial_trace_preserves_trace_and_positivity() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for trial in 0..1000usize {
        let n = 2 + trial % 3;
        let rho = ginibre_density(n, &mut rng).unwrap();
        let m = rng.random_range(1..n);
        let subset = random_subset(n, m, &mut rng);
        let reduced = partial_trace(&rho, &subset).unwrap();
        let trace = reduced.trace();
        assert!((trace - Complex64::ONE).norm() < 1e-12);
        let min_eig = reduced.entries().symmetric_eigenvalues().min();
        assert!(min_eig >= -1e-9, "min eigenvalue {min_eig}");
    }
}

#[test]
fn sequential_loss_matches_joint_loss() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for n in 3..=4usize {
        for _ in 0..25 {
            let rho = ginibre_density(n, &mut rng).unwrap();
            let mut picks: Vec<usize> = (0..n).collect();
            picks.shuffle(&mut rng);
            let (a, b) = (picks[0], picks[1]);
            let joint = partial_trace(&rho, &QubitSubset::new(n, [a, b]).unwrap()).unwrap();
            let first = partial_trace(&rho, &QubitSubset::new(n, [a]).unwrap()).unwrap();
            // After dropping wire a, original wire b moves down by one slot
            // when it sat above a.
            let b_relabeled = if b > a { b - 1 } else { b };
            let second =
                partial_trace(&first, &QubitSubset::new(n - 1, [b_relabeled]).unwrap()).unwrap();
            assert!(max_abs_diff(joint.entries(), second.entries()) < 1e-12);
        }
    }
}

#[test]
fn tracing_out_a_tensor_factor_recovers_the_other() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let rho = ginibre_density(2, &mut rng).unwrap();
    let sigma = ginibre_density(1, &mut rng).unwrap();
    let joint = DensityMatrix::new(rho.entries().kronecker(sigma.entries()), 3).unwrap();

    let left = partial_trace(&joint, &QubitSubset::new(3, [2]).unwrap()).unwrap();
    assert!(max_abs_diff(left.entries(), rho.entries()) < 1e-12);

    let right = partial_trace(&joint, &QubitSubset::new(3, [0, 1]).unwrap()).unwrap();
    assert!(max_abs_diff(right.entries(), sigma.entries()) < 1e-12);
}

#[test]
fn basis_families_are_orthonormal() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for n in 1..=4usize {
        let bases = [
            ProductBasis::computational(n).unwrap(),
            random_product_basis(n, &mut rng).unwrap(),
        ];
        for basis in &bases {
            let dim = basis.dim();
            for i in 0..dim {
                let psi_i = basis.state(i).unwrap();
                for j in 0..dim {
                    let psi_j = basis.state(j).unwrap();
                    let overlap = psi_i.amplitudes().dotc(psi_j.amplitudes());
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (overlap - Complex64::from(expected)).norm() < 1e-12,
                        "n={n} i={i} j={j}"
                    );
                }
            }
        }
    }
}

#[test]
fn reduced_basis_state_matches_two_step_route_exhaustively() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for n in 2..=4usize {
        let bases = [
            ProductBasis::computational(n).unwrap(),
            random_product_basis(n, &mut rng).unwrap(),
        ];
        for basis in &bases {
            for subset in proper_subsets(n) {
                let kept = subset.kept();
                for i in 0..1usize << n {
                    let kept_bits = compress(i, &kept, n);
                    let shortcut = basis.reduced_state(&subset, kept_bits).unwrap();
                    let two_step =
                        partial_trace(&basis.state(i).unwrap().to_density(), &subset).unwrap();
                    assert!(
                        max_abs_diff(shortcut.entries(), two_step.entries()) < 1e-12,
                        "n={n} lost={:?} i={i}",
                        subset.lost()
                    );
                }
            }
        }
    }
}

#[test]
fn random_product_basis_loss_scenario_cross_check() {
    // The documented example shape: n = 4, lost = {0, 3}, all kept
    // assignments against all matching element indices.
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let basis = random_product_basis(4, &mut rng).unwrap();
    let subset = QubitSubset::new(4, [0, 3]).unwrap();
    let kept = subset.kept();
    for kept_bits in 0..4usize {
        let shortcut = basis.reduced_state(&subset, kept_bits).unwrap();
        for i in 0..16usize {
            if compress(i, &kept, 4) != kept_bits {
                continue;
            }
            let two_step = partial_trace(&basis.state(i).unwrap().to_density(), &subset).unwrap();
            assert!(max_abs_diff(shortcut.entries(), two_step.entries()) < 1e-12);
        }
    }
}
