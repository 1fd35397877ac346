//! Seeded Haar sampling.
//!
//! Unitaries come from the QR decomposition of a complex Ginibre matrix with
//! the diagonal of `R` rotated to be real positive. Streams are reproducible
//! for a fixed seed within this crate; other implementations agree only in
//! distribution.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::state::{DensityOperator, Ket, OrthonormalBasis};
use crate::{CMatrix, CVector, Error, Result, C64};

/// Generator for sample `stream` of a scan seeded with `seed`. Distinct
/// streams are independent, so scans give the same answer however samples
/// are distributed over workers.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

/// Haar-distributed `d x d` unitary.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    let z = CMatrix::from_fn(d, d, |_, _| gaussian(rng));
    let qr = z.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar-distributed unit vector in `C^d`.
pub fn haar_ket<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Ket {
    loop {
        let v = CVector::from_fn(d, |_, _| gaussian(rng));
        let n = v.norm();
        if n > 1e-12 {
            return Ket::from_vector_unchecked(v.unscale(n));
        }
    }
}

/// Orthonormal basis given by the columns of a Haar unitary.
pub fn haar_basis<R: Rng + ?Sized>(rng: &mut R, d: usize) -> OrthonormalBasis {
    let u = haar_unitary(rng, d);
    OrthonormalBasis::from_kets_unchecked(
        u.column_iter()
            .map(|c| Ket::from_vector_unchecked(c.into_owned()))
            .collect(),
    )
}

/// Random mixed state: Haar eigenvectors, spectrum uniform on the simplex.
pub fn random_mixed_state<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DensityOperator {
    let u = haar_unitary(rng, d);
    let mut weights: Vec<f64> = (0..d).map(|_| rng.sample(Exp1)).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    let diag = CMatrix::from_diagonal(&CVector::from_iterator(d, weights.iter().map(|&w| C64::new(w, 0.0))));
    let m = &u * diag * u.adjoint();
    DensityOperator::from_matrix_unchecked((&m + m.adjoint()).scale(0.5))
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    Ok(())
}

/// Haar-random ket, deterministic in `seed`.
pub fn haar_random_ket(d: usize, seed: u64) -> Result<Ket> {
    check_dim(d)?;
    Ok(haar_ket(&mut stream_rng(seed, 0), d))
}

/// Haar-random unitary, deterministic in `seed`.
pub fn haar_random_unitary(d: usize, seed: u64) -> Result<CMatrix> {
    check_dim(d)?;
    Ok(haar_unitary(&mut stream_rng(seed, 0), d))
}
