//! Mutually unbiased bases (MUBs) and instances with maximal total
//! nonclassicality.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};

#[allow(unused_imports)] // inherent when std is linked, as under `cargo test`
use num_traits::Float;

use crate::fixtures::hadamard_pair_basis;
use crate::state::{same_dim, Ket, OrthonormalBasis};
use crate::{tol, Error, Result, C64};

/// Two or more pairwise unbiased bases of one space.
#[derive(Debug, Clone, PartialEq)]
pub struct MubFamily {
    bases: Vec<OrthonormalBasis>,
    real: bool,
}

impl MubFamily {
    /// Checks pairwise unbiasedness.
    pub fn new(bases: Vec<OrthonormalBasis>) -> Result<Self> {
        if bases.len() < 2 {
            return Err(Error::TooFewBases {
                min: 2,
                found: bases.len(),
            });
        }
        for (n, b) in bases.iter().enumerate() {
            for c in &bases[..n] {
                if !is_mutually_unbiased(c, b)? {
                    return Err(Error::InvalidArgument(format!(
                        "bases {} and {n} are not unbiased",
                        n - 1
                    )));
                }
            }
        }
        let real = bases.iter().all(|b| b.is_real(1e-10));
        Ok(MubFamily { bases, real })
    }

    pub fn dim(&self) -> usize {
        self.bases[0].dim()
    }

    pub fn bases(&self) -> &[OrthonormalBasis] {
        &self.bases
    }

    /// Whether every amplitude is real in the reference basis.
    pub fn is_real(&self) -> bool {
        self.real
    }
}

/// All `|<b1_j|b2_k>|` equal `1/sqrt d` within `1e-9`.
pub fn is_mutually_unbiased(b1: &OrthonormalBasis, b2: &OrthonormalBasis) -> Result<bool> {
    same_dim(b1.dim(), b2.dim())?;
    let target = 1.0 / (b1.dim() as f64).sqrt();
    Ok(b1.gram(b2)?.iter().all(|z| (z.norm() - target).abs() <= tol::UNBIASED))
}

fn basis_from_fn(d: usize, amp: impl Fn(usize, usize) -> C64) -> Result<OrthonormalBasis> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    OrthonormalBasis::new(
        (0..d)
            .map(|j| Ket::new((0..d).map(|i| amp(i, j)).collect()))
            .collect::<Result<_>>()?,
    )
}

/// Vectors `f_j` with amplitudes `exp(2 pi i ij/d)/sqrt d`.
pub fn fourier_basis(d: usize) -> Result<OrthonormalBasis> {
    let norm = 1.0 / (d as f64).sqrt();
    basis_from_fn(d, |i, j| {
        C64::from_polar(norm, 2.0 * PI * ((i * j) % d) as f64 / d as f64)
    })
}

/// Eigenbases of `sigma_z`, `sigma_x`, `sigma_y` (eigenvalue `+1` first).
pub fn pauli_mub_triplet() -> MubFamily {
    let h = FRAC_1_SQRT_2;
    let z = OrthonormalBasis::computational(2).unwrap();
    let x = OrthonormalBasis::new(vec![
        Ket::from_real(&[h, h]).unwrap(),
        Ket::from_real(&[h, -h]).unwrap(),
    ])
    .unwrap();
    let y = OrthonormalBasis::new(vec![
        Ket::new(vec![C64::new(h, 0.0), C64::new(0.0, h)]).unwrap(),
        Ket::new(vec![C64::new(h, 0.0), C64::new(0.0, -h)]).unwrap(),
    ])
    .unwrap();
    MubFamily::new(vec![z, x, y]).unwrap()
}

/// Sign patterns of the third real basis in `d = 4`, columns in
/// lexicographic order with `+` before `-`.
const REAL4_THIRD: [[f64; 4]; 4] = [
    [1.0, 1.0, 1.0, -1.0],
    [1.0, 1.0, -1.0, 1.0],
    [1.0, -1.0, 1.0, 1.0],
    [1.0, -1.0, -1.0, -1.0],
];

/// Three real MUBs in `d = 4`: computational, two-qubit Hadamard, and the
/// unique (up to order and sign) real basis unbiased to both.
pub fn real_mub_triplet_d4() -> MubFamily {
    let third = OrthonormalBasis::new(
        REAL4_THIRD
            .iter()
            .map(|s| Ket::from_real(&s.map(|x| x / 2.0)).unwrap())
            .collect(),
    )
    .unwrap();
    MubFamily::new(vec![
        OrthonormalBasis::computational(4).unwrap(),
        hadamard_pair_basis(),
        third,
    ])
    .unwrap()
}

fn is_odd_prime(d: usize) -> bool {
    d > 2
        && d % 2 == 1
        && (3..)
            .step_by(2)
            .take_while(|p| p * p <= d)
            .all(|p| !d.is_multiple_of(p))
}

/// Computational, Fourier and chirp bases for an odd prime `d`; the chirp
/// vectors have amplitudes `exp(2 pi i (i^2 + ij)/d)/sqrt d`.
pub fn chirp_mub_triplet(d: usize) -> Result<MubFamily> {
    if !is_odd_prime(d) {
        return Err(Error::InvalidArgument(format!("{d} is not an odd prime")));
    }
    let norm = 1.0 / (d as f64).sqrt();
    let chirp = basis_from_fn(d, |i, j| {
        C64::from_polar(norm, 2.0 * PI * ((i * i + i * j) % d) as f64 / d as f64)
    })?;
    MubFamily::new(vec![OrthonormalBasis::computational(d)?, fourier_basis(d)?, chirp])
}

/// A MUB triplet for `d = 2`, `d = 4` or odd prime `d`.
pub fn mub_triplet(d: usize) -> Result<MubFamily> {
    match d {
        2 => Ok(pauli_mub_triplet()),
        4 => Ok(real_mub_triplet_d4()),
        _ => chirp_mub_triplet(d),
    }
}

/// State and `k` bases reaching `d^((k-1)/2) - 1`: the state is element 0
/// of the first basis, and the `n`-th basis (counting from 1) is the
/// family's second basis for even `n` and its third for odd `n`.
pub fn max_nonclassical_instance(family: &MubFamily, k: usize) -> Result<(Ket, Vec<OrthonormalBasis>)> {
    if family.bases().len() < 3 {
        return Err(Error::TooFewBases {
            min: 3,
            found: family.bases().len(),
        });
    }
    if k < 2 {
        return Err(Error::TooFewBases { min: 2, found: k });
    }
    let b = family.bases();
    let psi = b[0].vectors()[0].clone();
    let bases = (1..=k)
        .map(|n| if n % 2 == 0 { b[1].clone() } else { b[2].clone() })
        .collect();
    Ok((psi, bases))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kd::compute_extended_kd;
    use crate::measures::{max_nonclassicality_bound, nonclassicality_measures};

    #[test]
    fn fourier_bases_are_unbiased_to_computational() {
        for d in 2..=6 {
            let f = fourier_basis(d).unwrap();
            let c = OrthonormalBasis::computational(d).unwrap();
            assert!(is_mutually_unbiased(&c, &f).unwrap());
            assert!(!is_mutually_unbiased(&f, &f).unwrap());
            for z in c.gram(&f).unwrap().iter() {
                assert!((z.norm() - 1.0 / (d as f64).sqrt()).abs() < 1e-12);
            }
        }
        let f2 = fourier_basis(2).unwrap();
        assert!((f2.vectors()[1].amplitudes()[1] - C64::new(-FRAC_1_SQRT_2, 0.0)).norm() < 1e-12);
        assert!(
            is_mutually_unbiased(&OrthonormalBasis::computational(5).unwrap(), &fourier_basis(5).unwrap()).unwrap()
        );
    }

    #[test]
    fn not_unbiased_to_block_hadamard() {
        let saturating = crate::fixtures::saturating_classical();
        assert!(!is_mutually_unbiased(saturating.a.basis(), saturating.f.basis()).unwrap());
    }

    #[test]
    fn families() {
        let p = pauli_mub_triplet();
        assert!(!p.is_real());
        let r = real_mub_triplet_d4();
        assert!(r.is_real());
        let mut cross = 0;
        for (n, b) in r.bases().iter().enumerate() {
            for c in &r.bases()[..n] {
                for z in c.gram(b).unwrap().iter() {
                    assert!((z.norm() - 0.5).abs() < 1e-12 && z.im.abs() < 1e-12);
                    cross += 1;
                }
            }
        }
        assert_eq!(cross, 48);
        for d in [3, 5, 7] {
            assert_eq!(chirp_mub_triplet(d).unwrap().bases().len(), 3);
        }
        assert!(chirp_mub_triplet(9).is_err());
        assert!(mub_triplet(6).is_err());
    }

    /// Exhaustive search over sign columns `s/2` (first sign `+`) that are
    /// unbiased to the computational and Hadamard bases.
    #[test]
    fn third_real_basis_matches_sign_search() {
        let had = hadamard_pair_basis();
        let columns: Vec<[f64; 4]> = (0..8u32)
            .map(|bits| {
                let mut s = [1.0; 4];
                for (r, x) in s.iter_mut().enumerate().skip(1) {
                    if bits & (1 << (3 - r)) != 0 {
                        *x = -1.0;
                    }
                }
                s
            })
            .filter(|s| {
                had.vectors().iter().all(|h| {
                    let dot: f64 = h.amplitudes().iter().zip(s).map(|(a, x)| a.re * x / 2.0).sum();
                    (dot.abs() - 0.5).abs() < 1e-12
                })
            })
            .collect();
        let dot = |a: &[f64; 4], b: &[f64; 4]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let mut solutions = Vec::new();
        for a in 0..columns.len() {
            for b in a + 1..columns.len() {
                for c in b + 1..columns.len() {
                    for e in c + 1..columns.len() {
                        let set = [columns[a], columns[b], columns[c], columns[e]];
                        let orthogonal = (0..4).all(|i| (0..i).all(|j| dot(&set[i], &set[j]) == 0.0));
                        if orthogonal {
                            solutions.push(set);
                        }
                    }
                }
            }
        }
        assert_eq!(solutions.len(), 1);
        assert_eq!(solutions[0], REAL4_THIRD);
        // the second worked example's state is the first vector of this basis
        let family = real_mub_triplet_d4();
        let third = &family.bases()[2];
        assert_eq!(&third.vectors()[0], &crate::fixtures::real_max_negative().psi);
    }

    #[test]
    fn instances_reach_the_bound() {
        let cases = [
            (pauli_mub_triplet(), 2),
            (pauli_mub_triplet(), 3),
            (pauli_mub_triplet(), 4),
            (real_mub_triplet_d4(), 2),
            (real_mub_triplet_d4(), 3),
            (chirp_mub_triplet(3).unwrap(), 2),
            (chirp_mub_triplet(3).unwrap(), 3),
            (chirp_mub_triplet(5).unwrap(), 2),
        ];
        for (family, k) in cases {
            let (psi, bases) = max_nonclassical_instance(&family, k).unwrap();
            let dist = compute_extended_kd(&psi.density(), &bases).unwrap();
            let r = nonclassicality_measures(&dist).unwrap();
            let bound = max_nonclassicality_bound(family.dim(), k);
            assert!((r.total - bound).abs() < 1e-10, "d={} k={k}", family.dim());
            if family.is_real() {
                assert!(r.imaginarity < 1e-10);
                assert!((r.negativity - r.total).abs() < 1e-10);
            }
        }
        let (_, b) = max_nonclassical_instance(&pauli_mub_triplet(), 2).unwrap();
        assert_eq!(b[0], pauli_mub_triplet().bases()[2]);
        assert_eq!(b[1], pauli_mub_triplet().bases()[1]);
        let (_, b) = max_nonclassical_instance(&pauli_mub_triplet(), 3).unwrap();
        assert_eq!(b[2], pauli_mub_triplet().bases()[2]);
    }

    #[test]
    fn pauli_pair_with_third_eigenstate_gives_fourth_table() {
        let p = pauli_mub_triplet();
        let psi = p.bases()[2].vectors()[0].clone();
        let dist = crate::kd::compute_kd(&psi.density(), &p.bases()[0], &p.bases()[1]).unwrap();
        for (q, t) in dist.values().iter().zip(crate::fixtures::qubit_nonreal_table()) {
            assert!((q - t).norm() < 1e-12);
        }
    }
}
