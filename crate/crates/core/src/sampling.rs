//! Seeded random states, unitaries, and product bases. Everything here is a
//! pure function of the supplied RNG, so fixed seeds give fixed outputs.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::qregister::{
    DensityMatrix, ProductBasis, PureState, StateError, DEFAULT_REGISTER_CAP,
};
use crate::{CMatrix, CVector};

fn standard_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

fn check_register_size(n: usize) -> Result<(), StateError> {
    if n == 0 {
        return Err(StateError::EmptyRegister);
    }
    if n > DEFAULT_REGISTER_CAP {
        return Err(StateError::RegisterTooLarge {
            n,
            cap: DEFAULT_REGISTER_CAP,
        });
    }
    Ok(())
}

/// Random density matrix GG†/tr(GG†) with G a square complex standard
/// Gaussian (Ginibre) matrix; this induces the Hilbert–Schmidt measure.
pub fn ginibre_density<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<DensityMatrix, StateError> {
    check_register_size(n)?;
    let dim = 1usize << n;
    let g = CMatrix::from_fn(dim, dim, |_, _| standard_complex(rng));
    let mut rho = &g * g.adjoint();
    let trace = rho.trace().re;
    rho /= Complex64::from(trace);
    Ok(DensityMatrix::trusted(rho, n))
}

/// Normalized complex Gaussian vector.
pub fn random_pure_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<PureState, StateError> {
    check_register_size(n)?;
    let dim = 1usize << n;
    let mut v = CVector::from_fn(dim, |_, _| standard_complex(rng));
    let norm = v.norm();
    v /= Complex64::from(norm);
    Ok(PureState::trusted(v, n))
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phase fix
/// Λ = diag(r_jj / |r_jj|), U = QΛ.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| standard_complex(rng));
    let qr = g.qr();
    let r = qr.r();
    let phases: Vec<Complex64> = (0..dim)
        .map(|j| {
            let d = r[(j, j)];
            if d.norm() == 0.0 {
                Complex64::ONE
            } else {
                d / Complex64::from(d.norm())
            }
        })
        .collect();
    let mut u = qr.q();
    for (j, phase) in phases.into_iter().enumerate() {
        let col = u.column(j) * phase;
        u.set_column(j, &col);
    }
    u
}

/// Product basis whose local pair on each qubit is the column pair of an
/// independent Haar-random 2x2 unitary.
pub fn random_product_basis<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
) -> Result<ProductBasis, StateError> {
    check_register_size(n)?;
    let local = (0..n)
        .map(|_| {
            let u = haar_unitary(2, rng);
            [u.column(0).into_owned(), u.column(1).into_owned()]
        })
        .collect();
    ProductBasis::new(local)
}
