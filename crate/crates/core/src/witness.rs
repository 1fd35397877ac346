//! Hermitian witnesses for a single KD entry.
//!
//! For `q = <f|a><a|rho|f>`:
//!
//! - `H = i P_a P_f - i P_f P_a` has `Tr(H rho) = 2 Im q`,
//! - `G = P_a P_f + P_f P_a` has `Tr(G rho) = 2 Re q`,
//!
//! and `R`, `S` are the same constructions with `P_f` replaced by a block
//! projector `F`. Each has exactly two nonzero eigenvalues with eigenvectors
//! in the span of `|a>` and `F|a>`, given here in closed form.

#[allow(unused_imports)] // inherent when std is linked, as under `cargo test`
use num_traits::Float;

use crate::state::{max_abs, same_dim, Ket};
use crate::{tol, CMatrix, CVector, Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    /// `H`: imaginary part, rank-1 `F`.
    ImagPair,
    /// `G`: real part, rank-1 `F`.
    RealPair,
    /// `R`: imaginary part, block `F`.
    CoarseImag,
    /// `S`: real part, block `F`.
    CoarseReal,
}

impl WitnessKind {
    pub fn letter(self) -> &'static str {
        match self {
            WitnessKind::ImagPair => "H",
            WitnessKind::RealPair => "G",
            WitnessKind::CoarseImag => "R",
            WitnessKind::CoarseReal => "S",
        }
    }
}

/// A witness operator with its nonzero eigenpairs `(lambda+, v+)`,
/// `(lambda-, v-)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessEigenpairs {
    pub kind: WitnessKind,
    pub operator: CMatrix,
    pub eigenvalues: (f64, f64),
    pub eigenvectors: (Ket, Ket),
}

impl WitnessEigenpairs {
    /// Largest `|| M v - lambda v ||` over the two pairs.
    pub fn residual(&self) -> f64 {
        let r = |lambda: f64, v: &Ket| (&self.operator * v.as_vector() - v.as_vector().scale(lambda)).norm();
        r(self.eigenvalues.0, &self.eigenvectors.0).max(r(self.eigenvalues.1, &self.eigenvectors.1))
    }

    /// `Tr(M rho) / 2`, the part of the entry this witness reads out.
    pub fn half_expectation(&self, rho: &CMatrix) -> f64 {
        0.5 * (&self.operator * rho).trace().re
    }
}

fn unit(v: CVector) -> Ket {
    let n = v.norm();
    Ket::from_vector_unchecked(v.unscale(n))
}

fn check_overlap(magnitude: f64) -> Result<()> {
    if magnitude <= tol::NEAR_DEGENERATE || magnitude >= 1.0 - tol::NEAR_DEGENERATE {
        return Err(Error::DegenerateOverlap(magnitude));
    }
    Ok(())
}

/// `(i P_a F - i F P_a)` or `(P_a F + F P_a)` for a projector `F`.
fn build(a: &CVector, fa: &CVector, imaginary: bool) -> CMatrix {
    let x = a * fa.adjoint();
    if imaginary {
        (&x - x.adjoint()) * C64::new(0.0, 1.0)
    } else {
        &x + x.adjoint()
    }
}

/// Splits `F|a>` into `p |a> + w` with `w` orthogonal to `|a>`.
fn split(a: &CVector, fa: &CVector) -> (f64, CVector) {
    let p = a.dotc(fa).re;
    (p, fa - a.scale(p))
}

fn imag_pair(a: &CVector, fa: &CVector, kind: WitnessKind) -> WitnessEigenpairs {
    let (p, w) = split(a, fa);
    let r = (p - p * p).max(0.0).sqrt();
    let w_hat = w.unscale(w.norm());
    let ia = a * C64::new(0.0, 1.0);
    WitnessEigenpairs {
        kind,
        operator: build(a, fa, true),
        eigenvalues: (r, -r),
        eigenvectors: (unit(&ia + &w_hat), unit(&w_hat - &ia)),
    }
}

fn real_pair(a: &CVector, fa: &CVector, kind: WitnessKind) -> WitnessEigenpairs {
    let (p, w) = split(a, fa);
    let s = p.sqrt();
    let (plus, minus) = (p + s, p - s);
    WitnessEigenpairs {
        kind,
        operator: build(a, fa, false),
        eigenvalues: (plus, minus),
        eigenvectors: (unit(a.scale(plus) + &w), unit(a.scale(minus) + &w)),
    }
}

fn rank_one(a: &Ket, f: &Ket) -> Result<(CVector, f64)> {
    same_dim(a.dim(), f.dim())?;
    let o = f.inner(a)?; // <f|a>
    check_overlap(o.norm())?;
    Ok((f.as_vector() * o, o.norm()))
}

/// `H` for the cell `(a, f)`; eigenvalues `+-|<a|f>| sqrt(1 - |<a|f>|^2)`.
pub fn imag_witness(a: &Ket, f: &Ket) -> Result<WitnessEigenpairs> {
    let (fa, _) = rank_one(a, f)?;
    Ok(imag_pair(a.as_vector(), &fa, WitnessKind::ImagPair))
}

/// `G` for the cell `(a, f)`; eigenvalues `|<a|f>| (|<a|f>| +- 1)` with
/// eigenvectors proportional to `|f> +- e^{i arg <a|f>} |a>`.
pub fn real_witness(a: &Ket, f: &Ket) -> Result<WitnessEigenpairs> {
    let (fa, _) = rank_one(a, f)?;
    Ok(real_pair(a.as_vector(), &fa, WitnessKind::RealPair))
}

fn block(a: &Ket, f_block: &CMatrix) -> Result<CVector> {
    same_dim(a.dim(), f_block.nrows())?;
    same_dim(a.dim(), f_block.ncols())?;
    let idempotent = max_abs(&(f_block * f_block - f_block));
    let hermitian = max_abs(&(f_block - f_block.adjoint()));
    if idempotent.max(hermitian) > tol::ORTHONORMAL.max(1e-9) {
        return Err(Error::InvalidArgument("F block is not an orthogonal projector".into()));
    }
    let fa = f_block * a.as_vector();
    let p = a.as_vector().dotc(&fa).re;
    check_overlap(p)?;
    Ok(fa)
}

/// `R` for the entry `(a, F)`; eigenvalues `+-sqrt(p - p^2)` with
/// `p = <a|F|a>`.
pub fn coarse_imag_witness(a: &Ket, f_block: &CMatrix) -> Result<WitnessEigenpairs> {
    let fa = block(a, f_block)?;
    Ok(imag_pair(a.as_vector(), &fa, WitnessKind::CoarseImag))
}

/// `S` for the entry `(a, F)`; eigenvalues `p +- sqrt p`.
pub fn coarse_real_witness(a: &Ket, f_block: &CMatrix) -> Result<WitnessEigenpairs> {
    let fa = block(a, f_block)?;
    Ok(real_pair(a.as_vector(), &fa, WitnessKind::CoarseReal))
}

/// `cos(t) v+ + sin(t) v-` whose half-expectation equals `target`.
pub fn tailor_state(witness: &WitnessEigenpairs, target: f64) -> Result<Ket> {
    let (plus, minus) = witness.eigenvalues;
    let (low, high) = (minus / 2.0, plus / 2.0);
    if !(target >= low - 1e-12 && target <= high + 1e-12) {
        return Err(Error::TargetOutOfRange { target, low, high });
    }
    let cos2 = ((2.0 * target - minus) / (plus - minus)).clamp(0.0, 1.0);
    let (c, s) = (cos2.sqrt(), (1.0 - cos2).sqrt());
    let v = witness.eigenvectors.0.as_vector().scale(c) + witness.eigenvectors.1.as_vector().scale(s);
    Ok(unit(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::kd::compute_kd;
    use crate::random::{haar_basis, haar_ket, random_mixed_state, stream_rng};
    use crate::state::hermitian_eigenvalues;
    use core::f64::consts::FRAC_1_SQRT_2;

    /// Nonzero eigenvalues by dense diagonalization, descending.
    fn dense_nonzero(m: &CMatrix) -> alloc::vec::Vec<f64> {
        let mut v: alloc::vec::Vec<f64> = hermitian_eigenvalues(m)
            .into_iter()
            .filter(|l| l.abs() > 1e-9)
            .collect();
        v.reverse();
        v
    }

    fn check_against_dense(w: &WitnessEigenpairs) {
        let dense = dense_nonzero(&w.operator);
        assert_eq!(dense.len(), 2);
        assert!((dense[0] - w.eigenvalues.0).abs() < 1e-9);
        assert!((dense[1] - w.eigenvalues.1).abs() < 1e-9);
        assert!(w.residual() < 1e-8);
        let overlap = w.eigenvectors.0.inner(&w.eigenvectors.1).unwrap();
        assert!(overlap.norm() < 1e-10);
    }

    #[test]
    fn pauli_pair_values() {
        let zero = Ket::basis_state(2, 0).unwrap();
        let plus = Ket::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
        let h = imag_witness(&zero, &plus).unwrap();
        assert!((h.eigenvalues.0 - 0.5).abs() < 1e-12 && (h.eigenvalues.1 + 0.5).abs() < 1e-12);
        check_against_dense(&h);
        let g = real_witness(&zero, &plus).unwrap();
        assert!((g.eigenvalues.0 - (1.0 + 2f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!((g.eigenvalues.1 - (1.0 - 2f64.sqrt()) / 2.0).abs() < 1e-12);
        check_against_dense(&g);

        // the first cell of the single-qubit table is (1 - i)/4
        let psi = fixtures::qubit_nonreal().state();
        assert!((h.half_expectation(psi.matrix()) + 0.25).abs() < 1e-12);
        assert!((g.half_expectation(psi.matrix()) - 0.25).abs() < 1e-12);

        // eigenstate of g- gives Re q = g-/2
        let neg = g.eigenvectors.1.density();
        assert!((g.half_expectation(neg.matrix()) - g.eigenvalues.1 / 2.0).abs() < 1e-12);
    }

    #[test]
    fn phase_invariance() {
        let zero = Ket::basis_state(2, 0).unwrap();
        for phase in [0.3, 1.7, -2.2] {
            let f = Ket::new(alloc::vec![
                C64::new(FRAC_1_SQRT_2, 0.0),
                C64::from_polar(FRAC_1_SQRT_2, phase)
            ])
            .unwrap();
            let f = Ket::new(f.amplitudes().iter().map(|z| z * C64::from_polar(1.0, phase)).collect()).unwrap();
            let h = imag_witness(&zero, &f).unwrap();
            assert!((h.eigenvalues.0 - 0.5).abs() < 1e-12);
            check_against_dense(&h);
            check_against_dense(&real_witness(&zero, &f).unwrap());
        }
    }

    #[test]
    fn degenerate_overlaps_are_refused() {
        let zero = Ket::basis_state(2, 0).unwrap();
        let one = Ket::basis_state(2, 1).unwrap();
        assert!(matches!(imag_witness(&zero, &one), Err(Error::DegenerateOverlap(_))));
        assert!(matches!(real_witness(&zero, &zero), Err(Error::DegenerateOverlap(_))));
        let p = zero.outer();
        assert!(coarse_real_witness(&zero, &p).is_err());
        assert!(coarse_imag_witness(&one, &p).is_err());
        assert!(matches!(
            coarse_imag_witness(&zero, &CMatrix::identity(2, 2).scale(0.5)),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn coarse_witnesses() {
        // rank-2 block with p = 1/2
        let a = Ket::from_real(&[0.5, 0.5, 0.5, 0.5]).unwrap();
        let mut f = CMatrix::zeros(4, 4);
        f[(0, 0)] = C64::new(1.0, 0.0);
        f[(1, 1)] = C64::new(1.0, 0.0);
        let r = coarse_imag_witness(&a, &f).unwrap();
        assert!((r.eigenvalues.0 - 0.5).abs() < 1e-12);
        check_against_dense(&r);
        let s = coarse_real_witness(&a, &f).unwrap();
        assert!((s.eigenvalues.0 - (0.5 + FRAC_1_SQRT_2)).abs() < 1e-12);
        assert!((s.eigenvalues.1 - (0.5 - FRAC_1_SQRT_2)).abs() < 1e-12);
        check_against_dense(&s);

        // rank-1 blocks agree with the pair witnesses
        let mut rng = stream_rng(9, 0);
        let b = haar_basis(&mut rng, 3);
        let fk = haar_ket(&mut rng, 3);
        let h = imag_witness(&b.vectors()[0], &fk).unwrap();
        let r = coarse_imag_witness(&b.vectors()[0], &fk.outer()).unwrap();
        assert!((h.eigenvalues.0 - r.eigenvalues.0).abs() < 1e-12);
        assert!(crate::state::max_abs(&(h.operator - r.operator)) < 1e-12);
        let g = real_witness(&b.vectors()[0], &fk).unwrap();
        let s = coarse_real_witness(&b.vectors()[0], &fk.outer()).unwrap();
        assert!((g.eigenvalues.1 - s.eigenvalues.1).abs() < 1e-12);
        assert!(crate::state::max_abs(&(g.operator - s.operator)) < 1e-12);
    }

    #[test]
    fn witnesses_read_out_entries() {
        let mut rng = stream_rng(10, 0);
        for d in 2..=4 {
            for _ in 0..50 {
                let a = haar_basis(&mut rng, d);
                let f = haar_basis(&mut rng, d);
                let rho = random_mixed_state(&mut rng, d);
                let dist = compute_kd(&rho, &a, &f).unwrap();
                let (i, j) = (d - 1, 0);
                let q = dist.get(&[i, j]).unwrap();
                let h = imag_witness(&a.vectors()[i], &f.vectors()[j]).unwrap();
                let g = real_witness(&a.vectors()[i], &f.vectors()[j]).unwrap();
                assert!((h.half_expectation(rho.matrix()) - q.im).abs() < 1e-10);
                assert!((g.half_expectation(rho.matrix()) - q.re).abs() < 1e-10);
                check_against_dense(&h);
                check_against_dense(&g);

                if d > 2 {
                    // block of the first two F vectors
                    let block = f.vectors()[0].outer() + f.vectors()[1].outer();
                    let coarse = q + dist.get(&[i, 1]).unwrap();
                    let r = coarse_imag_witness(&a.vectors()[i], &block).unwrap();
                    let s = coarse_real_witness(&a.vectors()[i], &block).unwrap();
                    assert!((r.half_expectation(rho.matrix()) - coarse.im).abs() < 1e-10);
                    assert!((s.half_expectation(rho.matrix()) - coarse.re).abs() < 1e-10);
                    check_against_dense(&r);
                    check_against_dense(&s);
                }
            }
        }
    }

    #[test]
    fn tailoring() {
        let ex = fixtures::real_max_negative();
        let (i, j) = (3, 0);
        let g = real_witness(&ex.a.basis().vectors()[i], &ex.f.basis().vectors()[j]).unwrap();
        assert!((g.eigenvalues.1 / 2.0 + 0.125).abs() < 1e-12);
        let psi = tailor_state(&g, -0.125).unwrap();
        let q = compute_kd(&psi.density(), ex.a.basis(), ex.f.basis())
            .unwrap()
            .get(&[i, j])
            .unwrap();
        assert!((q.re + 0.125).abs() < 1e-9);

        let top = tailor_state(&g, g.eigenvalues.0 / 2.0).unwrap();
        assert!(top.inner(&g.eigenvectors.0).unwrap().norm() > 1.0 - 1e-12);

        let zero = tailor_state(&g, 0.0).unwrap();
        let (c, s) = (
            g.eigenvectors.0.inner(&zero).unwrap().re,
            g.eigenvectors.1.inner(&zero).unwrap().re,
        );
        assert!(((s / c).powi(2) - g.eigenvalues.0 / -g.eigenvalues.1).abs() < 1e-9);
        assert!((g.half_expectation(zero.density().matrix())).abs() < 1e-12);

        assert!(matches!(tailor_state(&g, 1.0), Err(Error::TargetOutOfRange { .. })));
    }
}
