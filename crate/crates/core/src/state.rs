//! States, bases, observables and eigenspace partitions.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent when std is linked, as under `cargo test`
use num_traits::Float;

use crate::{tol, CMatrix, CVector, Error, Result, C64};

/// Largest entry magnitude of a matrix.
pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Ascending eigenvalues of a Hermitian matrix.
pub(crate) fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut vals: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Rotates `v` so that its first non-negligible amplitude is real and positive.
pub(crate) fn fix_phase(v: &mut [C64]) {
    if let Some(first) = v.iter().find(|z| z.norm() > 1e-12) {
        let phase = first.conj() / first.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    Ok(())
}

pub(crate) fn same_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// A unit vector in `C^d`, `d >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    amplitudes: CVector,
}

impl Ket {
    /// Wraps amplitudes that must already be unit-norm.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > tol::NORM {
            return Err(Error::NotNormalized(norm_sqr));
        }
        Ok(Ket {
            amplitudes: CVector::from_vec(amplitudes),
        })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm <= tol::ZERO {
            return Err(Error::NotNormalized(norm * norm));
        }
        Ok(Ket {
            amplitudes: CVector::from_vec(amplitudes).unscale(norm),
        })
    }

    /// Real amplitudes, rescaled to unit norm.
    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::normalized(amplitudes.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub(crate) fn from_vector_unchecked(amplitudes: CVector) -> Self {
        Ket { amplitudes }
    }

    /// Computational basis vector `|index>`.
    pub fn basis_state(d: usize, index: usize) -> Result<Self> {
        check_dim(d)?;
        if index >= d {
            return Err(Error::IndexOutOfRange { index, len: d });
        }
        let mut v = CVector::zeros(d);
        v[index] = C64::new(1.0, 0.0);
        Ok(Ket { amplitudes: v })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.amplitudes.as_slice()
    }

    pub fn as_vector(&self) -> &CVector {
        &self.amplitudes
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Ket) -> Result<C64> {
        inner_product(self, other)
    }

    /// `|self><self|`.
    pub fn outer(&self) -> CMatrix {
        &self.amplitudes * self.amplitudes.adjoint()
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator { matrix: self.outer() }
    }
}

/// `<u|v>`, conjugate-linear in the first argument.
pub fn inner_product(u: &Ket, v: &Ket) -> Result<C64> {
    same_dim(u.dim(), v.dim())?;
    Ok(u.amplitudes.dotc(&v.amplitudes))
}

/// Hermitian, unit-trace, positive semidefinite `d x d` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        check_dim(matrix.nrows())?;
        let asym = max_abs(&(&matrix - matrix.adjoint()));
        if asym > tol::HERMITIAN {
            return Err(Error::NotHermitian(asym));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > tol::HERMITIAN || trace.im.abs() > tol::HERMITIAN {
            return Err(Error::InvalidTrace(trace.re));
        }
        let min_eig = hermitian_eigenvalues(&matrix)[0];
        if min_eig < tol::PSD {
            return Err(Error::NotPositive(min_eig));
        }
        Ok(DensityOperator { matrix })
    }

    /// Maximally mixed state `1/d`.
    pub fn maximally_mixed(d: usize) -> Result<Self> {
        check_dim(d)?;
        Ok(DensityOperator {
            matrix: CMatrix::identity(d, d).unscale(d as f64),
        })
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        DensityOperator { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        (self.purity() - 1.0).abs() <= tol
    }

    /// Leading eigenvector, the ket of a pure state (phase fixed).
    pub fn principal_ket(&self) -> Ket {
        let eig = self.matrix.clone().symmetric_eigen();
        let (idx, _) =
            eig.eigenvalues.iter().enumerate().fold(
                (0, f64::NEG_INFINITY),
                |best, (i, &v)| if v > best.1 { (i, v) } else { best },
            );
        let mut v: Vec<C64> = eig.eigenvectors.column(idx).iter().copied().collect();
        fix_phase(&mut v);
        Ket::normalized(v).expect("eigenvector has unit norm")
    }

    /// `<u|rho|v>`.
    pub fn element(&self, u: &Ket, v: &Ket) -> Result<C64> {
        same_dim(self.dim(), u.dim())?;
        same_dim(self.dim(), v.dim())?;
        Ok(u.as_vector().dotc(&(&self.matrix * v.as_vector())))
    }

    /// Born probability `<v|rho|v>`.
    pub fn probability(&self, v: &Ket) -> Result<f64> {
        Ok(self.element(v, v)?.re)
    }
}

impl From<&Ket> for DensityOperator {
    fn from(ket: &Ket) -> Self {
        ket.density()
    }
}

/// Ordered orthonormal basis of `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalBasis {
    vectors: Vec<Ket>,
}

impl OrthonormalBasis {
    pub fn new(vectors: Vec<Ket>) -> Result<Self> {
        let d = vectors.first().map(Ket::dim).unwrap_or(0);
        check_dim(d)?;
        if vectors.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: vectors.len(),
            });
        }
        for v in &vectors {
            same_dim(d, v.dim())?;
        }
        let mut worst = 0.0f64;
        for (i, u) in vectors.iter().enumerate() {
            for (j, v) in vectors.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                let g = u.as_vector().dotc(v.as_vector());
                worst = worst.max((g - C64::new(target, 0.0)).norm());
            }
        }
        if worst > tol::ORTHONORMAL {
            return Err(Error::NotOrthonormal(worst));
        }
        Ok(OrthonormalBasis { vectors })
    }

    /// Columns of a unitary matrix.
    pub fn from_unitary(u: &CMatrix) -> Result<Self> {
        let vectors = u
            .column_iter()
            .map(|c| Ket::normalized(c.iter().copied().collect()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(vectors)
    }

    pub(crate) fn from_kets_unchecked(vectors: Vec<Ket>) -> Self {
        OrthonormalBasis { vectors }
    }

    pub fn computational(d: usize) -> Result<Self> {
        check_dim(d)?;
        Ok(OrthonormalBasis {
            vectors: (0..d).map(|i| Ket::basis_state(d, i)).collect::<Result<_>>()?,
        })
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Ket] {
        &self.vectors
    }

    pub fn vector(&self, index: usize) -> Result<&Ket> {
        self.vectors
            .get(index)
            .ok_or(Error::IndexOutOfRange { index, len: self.dim() })
    }

    /// Matrix whose columns are the basis vectors.
    pub fn unitary(&self) -> CMatrix {
        let d = self.dim();
        CMatrix::from_fn(d, d, |r, c| self.vectors[c].amplitudes()[r])
    }

    /// `overlaps[i] = <b_i|psi>`.
    pub fn overlaps(&self, psi: &Ket) -> Result<Vec<C64>> {
        self.vectors.iter().map(|b| b.inner(psi)).collect()
    }

    /// `gram[(i, j)] = <self_i|other_j>`.
    pub fn gram(&self, other: &OrthonormalBasis) -> Result<CMatrix> {
        same_dim(self.dim(), other.dim())?;
        Ok(self.unitary().adjoint() * other.unitary())
    }

    /// `true` if every basis amplitude has negligible imaginary part.
    pub fn is_real(&self, tol: f64) -> bool {
        self.vectors
            .iter()
            .all(|v| v.amplitudes().iter().all(|z| z.im.abs() <= tol))
    }

    /// Applies a unitary to every vector.
    pub fn rotated(&self, u: &CMatrix) -> Result<Self> {
        same_dim(self.dim(), u.nrows())?;
        Ok(OrthonormalBasis {
            vectors: self
                .vectors
                .iter()
                .map(|v| Ket::from_vector_unchecked(u * v.as_vector()))
                .collect(),
        })
    }
}

/// Rank-1 projector `|b_index><b_index|`.
pub fn projector(basis: &OrthonormalBasis, index: usize) -> Result<CMatrix> {
    Ok(basis.vector(index)?.outer())
}

/// Hermitian observable given by an eigenbasis and real eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    basis: OrthonormalBasis,
    eigenvalues: Vec<f64>,
}

impl Observable {
    pub fn new(basis: OrthonormalBasis, eigenvalues: Vec<f64>) -> Result<Self> {
        same_dim(basis.dim(), eigenvalues.len())?;
        Ok(Observable { basis, eigenvalues })
    }

    /// Nondegenerate observable with eigenvalues `0, 1, ..., d-1`.
    pub fn nondegenerate(basis: OrthonormalBasis) -> Self {
        let eigenvalues = (0..basis.dim()).map(|i| i as f64).collect();
        Observable { basis, eigenvalues }
    }

    /// Diagonalizes a Hermitian matrix; eigenvalues ascending, eigenvector
    /// phases fixed so the first nonzero amplitude is positive.
    pub fn from_hermitian(matrix: &CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        check_dim(matrix.nrows())?;
        let asym = max_abs(&(matrix - matrix.adjoint()));
        if asym > tol::HERMITIAN {
            return Err(Error::NotHermitian(asym));
        }
        let eig = matrix.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..matrix.nrows()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let mut vectors = Vec::with_capacity(order.len());
        let mut eigenvalues = Vec::with_capacity(order.len());
        for i in order {
            let mut v: Vec<C64> = eig.eigenvectors.column(i).iter().copied().collect();
            fix_phase(&mut v);
            vectors.push(Ket::normalized(v)?);
            eigenvalues.push(eig.eigenvalues[i]);
        }
        Ok(Observable {
            basis: OrthonormalBasis::new(vectors)?,
            eigenvalues,
        })
    }

    pub fn basis(&self) -> &OrthonormalBasis {
        &self.basis
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn matrix(&self) -> CMatrix {
        observable_matrix(self)
    }
}

/// `sum_i lambda_i |v_i><v_i|`.
pub fn observable_matrix(obs: &Observable) -> CMatrix {
    let d = obs.dim();
    obs.basis
        .vectors()
        .iter()
        .zip(&obs.eigenvalues)
        .fold(CMatrix::zeros(d, d), |acc, (v, &lambda)| acc + v.outer().scale(lambda))
}

/// Partition of basis indices `0..d` into labelled blocks (eigenspaces).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenspacePartition {
    dim: usize,
    blocks: Vec<Vec<usize>>,
    labels: Vec<f64>,
}

impl EigenspacePartition {
    pub fn new(dim: usize, blocks: Vec<Vec<usize>>, labels: Vec<f64>) -> Result<Self> {
        check_dim(dim)?;
        if blocks.len() != labels.len() {
            return Err(Error::InvalidPartition(format!(
                "{} blocks but {} labels",
                blocks.len(),
                labels.len()
            )));
        }
        let mut seen = alloc::vec![false; dim];
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &i in block {
                if i >= dim {
                    return Err(Error::IndexOutOfRange { index: i, len: dim });
                }
                if core::mem::replace(&mut seen[i], true) {
                    return Err(Error::InvalidPartition(format!("index {i} appears twice")));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("index {missing} not covered")));
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[..i].iter().any(|b| b == a) {
                return Err(Error::InvalidPartition(format!("label {a} repeated")));
            }
        }
        Ok(EigenspacePartition { dim, blocks, labels })
    }

    /// Every index in its own block, labels `0..d`.
    pub fn singletons(dim: usize) -> Result<Self> {
        Self::new(
            dim,
            (0..dim).map(|i| alloc::vec![i]).collect(),
            (0..dim).map(|i| i as f64).collect(),
        )
    }

    /// A single block holding every index.
    pub fn single_block(dim: usize) -> Result<Self> {
        Self::new(dim, alloc::vec![(0..dim).collect()], alloc::vec![0.0])
    }

    /// Groups equal eigenvalues (within `tol`) of an observable, in order of
    /// first appearance.
    pub fn from_observable(obs: &Observable, tol: f64) -> Result<Self> {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut labels: Vec<f64> = Vec::new();
        for (i, &lambda) in obs.eigenvalues().iter().enumerate() {
            match labels.iter().position(|&l| (l - lambda).abs() <= tol) {
                Some(b) => blocks[b].push(i),
                None => {
                    blocks.push(alloc::vec![i]);
                    labels.push(lambda);
                }
            }
        }
        Self::new(obs.dim(), blocks, labels)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn is_singletons(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    /// Block index of every basis index.
    pub fn block_of(&self) -> Vec<usize> {
        let mut owner = alloc::vec![0; self.dim];
        for (l, block) in self.blocks.iter().enumerate() {
            for &i in block {
                owner[i] = l;
            }
        }
        owner
    }

    /// `sum_{i in block} |b_i><b_i|`.
    pub fn block_projector(&self, basis: &OrthonormalBasis, block: usize) -> Result<CMatrix> {
        same_dim(self.dim, basis.dim())?;
        let idx = self.blocks.get(block).ok_or(Error::IndexOutOfRange {
            index: block,
            len: self.blocks.len(),
        })?;
        let d = self.dim;
        Ok(idx
            .iter()
            .fold(CMatrix::zeros(d, d), |acc, &i| acc + basis.vectors()[i].outer()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn inner_product_examples() {
        let zero = Ket::basis_state(2, 0).unwrap();
        let plus = Ket::from_real(&[1.0, 1.0]).unwrap();
        let psi = Ket::normalized(alloc::vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert!((inner_product(&zero, &zero).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!((inner_product(&zero, &plus).unwrap() - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        // (1 - i)/2 by hand: conj(1/sqrt2)(1/sqrt2) + conj(i/sqrt2)(1/sqrt2)
        assert!((inner_product(&psi, &plus).unwrap() - c(0.5, -0.5)).norm() < 1e-15);
        let three = Ket::basis_state(3, 0).unwrap();
        assert!(matches!(
            inner_product(&zero, &three),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn ket_invariants() {
        assert!(matches!(
            Ket::new(alloc::vec![c(1.0, 0.0)]),
            Err(Error::DimensionTooSmall(1))
        ));
        assert!(matches!(
            Ket::new(alloc::vec![c(1.0, 0.0), c(1.0, 0.0)]),
            Err(Error::NotNormalized(_))
        ));
        assert!(Ket::normalized(alloc::vec![C64::default(); 3]).is_err());
    }

    #[test]
    fn projector_examples() {
        let comp = OrthonormalBasis::computational(2).unwrap();
        let p0 = projector(&comp, 0).unwrap();
        assert_eq!(
            p0,
            CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)])
        );
        let pm = crate::mubs::fourier_basis(2).unwrap();
        let pp = projector(&pm, 0).unwrap();
        for z in pp.iter() {
            assert!((z - c(0.5, 0.0)).norm() < 1e-15);
        }
        let b = crate::mubs::fourier_basis(5).unwrap();
        for i in 0..5 {
            let p = projector(&b, i).unwrap();
            assert!(max_abs(&(&p * &p - &p)) <= 1e-12);
            for j in 0..5 {
                if i != j {
                    assert!(max_abs(&(&p * projector(&b, j).unwrap())) <= 1e-12);
                }
            }
        }
        assert!(matches!(
            projector(&comp, 2),
            Err(Error::IndexOutOfRange { index: 2, len: 2 })
        ));
    }

    #[test]
    fn observable_matrices_of_first_example() {
        let ex = fixtures::classical_noncommuting();
        let a = observable_matrix(&ex.a);
        let f = observable_matrix(&ex.f);
        let expect_a = CMatrix::from_diagonal(&CVector::from_vec(
            [-2.0, -1.0, 1.0, 2.0].iter().map(|&x| c(x, 0.0)).collect(),
        ));
        let expect_f = CMatrix::from_row_slice(
            4,
            4,
            &[
                -1.5, -0.5, 0.0, 0.0, //
                -0.5, -1.5, 0.0, 0.0, //
                0.0, 0.0, 1.0, 0.0, //
                0.0, 0.0, 0.0, 2.0,
            ]
            .map(|x| c(x, 0.0)),
        );
        assert!(max_abs(&(a - expect_a)) < 1e-12);
        assert!(max_abs(&(&f - expect_f)) < 1e-12);

        // and back: same spectrum, same eigen-projectors
        let back = Observable::from_hermitian(&f).unwrap();
        for (x, y) in back.eigenvalues().iter().zip([-2.0, -1.0, 1.0, 2.0]) {
            assert!((x - y).abs() < 1e-10);
        }
        for i in 0..4 {
            let p1 = projector(back.basis(), i).unwrap();
            let p2 = projector(ex.f.basis(), i).unwrap();
            assert!(max_abs(&(p1 - p2)) < 1e-10);
        }

        let id = Observable::new(OrthonormalBasis::computational(3).unwrap(), alloc::vec![1.0; 3]).unwrap();
        assert!(max_abs(&(observable_matrix(&id) - CMatrix::identity(3, 3))) < 1e-15);
    }

    #[test]
    fn density_operator_invariants() {
        let bad_trace = CMatrix::identity(2, 2);
        assert!(matches!(DensityOperator::new(bad_trace), Err(Error::InvalidTrace(_))));
        let not_psd = CMatrix::from_row_slice(2, 2, &[c(1.5, 0.), c(0., 0.), c(0., 0.), c(-0.5, 0.)]);
        assert!(matches!(DensityOperator::new(not_psd), Err(Error::NotPositive(_))));
        let not_herm = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.), c(0.1, 0.), c(0., 0.), c(0.5, 0.)]);
        assert!(matches!(DensityOperator::new(not_herm), Err(Error::NotHermitian(_))));
        let mixed = DensityOperator::maximally_mixed(4).unwrap();
        assert!((mixed.purity() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn basis_rejects_non_orthonormal() {
        let v = Ket::from_real(&[1.0, 0.0]).unwrap();
        let w = Ket::from_real(&[1.0, 1.0]).unwrap();
        assert!(matches!(
            OrthonormalBasis::new(alloc::vec![v, w]),
            Err(Error::NotOrthonormal(_))
        ));
    }

    #[test]
    fn partition_validation() {
        assert!(EigenspacePartition::new(3, alloc::vec![alloc::vec![0, 1]], alloc::vec![1.0]).is_err());
        assert!(EigenspacePartition::new(
            3,
            alloc::vec![alloc::vec![0, 1], alloc::vec![1, 2]],
            alloc::vec![1.0, 2.0]
        )
        .is_err());
        assert!(
            EigenspacePartition::new(2, alloc::vec![alloc::vec![0], alloc::vec![1]], alloc::vec![1.0, 1.0]).is_err()
        );
        let obs = Observable::new(
            OrthonormalBasis::computational(4).unwrap(),
            alloc::vec![0.0, 1.0, 0.0, 1.0],
        )
        .unwrap();
        let p = EigenspacePartition::from_observable(&obs, 1e-12).unwrap();
        assert_eq!(p.blocks(), &[alloc::vec![0, 2], alloc::vec![1, 3]]);
        assert_eq!(p.block_of(), alloc::vec![0, 1, 0, 1]);
    }
}
