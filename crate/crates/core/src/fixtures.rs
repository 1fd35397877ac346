//! Worked examples: two-qubit and single-qubit instances with known KD
//! tables, and a two-state Pauli mixture.
//!
//! Tables are written with rows indexing `F` and columns indexing `A`,
//! and [`table_from_rows_f`] converts them to the crate's axis order.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_3};

#[allow(unused_imports)] // inherent when std is linked, as under `cargo test`
use num_traits::Float;

use crate::state::{DensityOperator, Ket, Observable, OrthonormalBasis};
use crate::C64;

/// A pure state with the two observables whose eigenbases define the axes.
#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub psi: Ket,
    pub a: Observable,
    pub f: Observable,
}

impl Example {
    pub fn state(&self) -> DensityOperator {
        self.psi.density()
    }
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn real_basis(vectors: &[[f64; 4]]) -> OrthonormalBasis {
    OrthonormalBasis::new(vectors.iter().map(|v| Ket::from_real(v).unwrap()).collect()).unwrap()
}

fn nondegenerate(basis: OrthonormalBasis) -> Observable {
    Observable::nondegenerate(basis)
}

const H: f64 = FRAC_1_SQRT_2;

/// `|1>|+>` against `A = {|00>,|01>,|10>,|11>}` and
/// `F = {|0>|+>, |0>|->, |1>|0>, |1>|1>}`, both with eigenvalues `-2,-1,1,2`.
/// Pairwise noncommuting, yet the distribution is classical.
pub fn classical_noncommuting() -> Example {
    let a = OrthonormalBasis::computational(4).unwrap();
    let f = real_basis(&[
        [H, H, 0.0, 0.0],
        [H, -H, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]);
    let eig = vec![-2.0, -1.0, 1.0, 2.0];
    Example {
        psi: Ket::from_real(&[0.0, 0.0, H, H]).unwrap(),
        a: Observable::new(a, eig.clone()).unwrap(),
        f: Observable::new(f, eig).unwrap(),
    }
}

/// Uniform superposition against the computational basis and pairwise
/// Hadamard blocks. Classical, and saturates the support-count inequality.
pub fn saturating_classical() -> Example {
    let f = real_basis(&[[H, H, 0.0, 0.0], [H, -H, 0.0, 0.0], [0.0, 0.0, H, H], [0.0, 0.0, H, -H]]);
    Example {
        psi: Ket::from_real(&[0.5, 0.5, 0.5, 0.5]).unwrap(),
        a: nondegenerate(OrthonormalBasis::computational(4).unwrap()),
        f: nondegenerate(f),
    }
}

/// Two-qubit Hadamard basis in the order `|++>, |-+>, |+->, |-->`
/// (first tensor factor written first).
pub fn hadamard_pair_basis() -> OrthonormalBasis {
    real_basis(&[
        [0.5, 0.5, 0.5, 0.5],
        [0.5, 0.5, -0.5, -0.5],
        [0.5, -0.5, 0.5, -0.5],
        [0.5, -0.5, -0.5, 0.5],
    ])
}

/// `(|00>+|01>+|10>-|11>)/2` against the computational and Hadamard bases:
/// a real distribution that reaches the maximal total nonclassicality.
pub fn real_max_negative() -> Example {
    Example {
        psi: Ket::from_real(&[0.5, 0.5, 0.5, -0.5]).unwrap(),
        a: nondegenerate(OrthonormalBasis::computational(4).unwrap()),
        f: nondegenerate(hadamard_pair_basis()),
    }
}

/// `sigma_y` eigenstate `(|0> + i|1>)/sqrt 2` against the `sigma_z` and
/// `sigma_x` eigenbases.
pub fn qubit_nonreal() -> Example {
    let z = OrthonormalBasis::computational(2).unwrap();
    let x = OrthonormalBasis::new(vec![
        Ket::from_real(&[H, H]).unwrap(),
        Ket::from_real(&[H, -H]).unwrap(),
    ])
    .unwrap();
    let spin = |b: OrthonormalBasis| Observable::new(b, vec![1.0, -1.0]).unwrap();
    Example {
        psi: Ket::new(vec![C64::new(H, 0.0), C64::new(0.0, H)]).unwrap(),
        a: spin(z),
        f: spin(x),
    }
}

/// Converts a table written with rows `F` and columns `A` to row-major values with
/// axis 0 indexing `A`.
pub fn table_from_rows_f(d: usize, rows_f: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); d * d];
    for j in 0..d {
        for i in 0..d {
            out[i * d + j] = rows_f[j * d + i];
        }
    }
    out
}

pub fn classical_noncommuting_table() -> Vec<C64> {
    let mut t = [0.0; 16];
    t[2 * 4 + 2] = 0.5;
    t[3 * 4 + 3] = 0.5;
    table_from_rows_f(4, &t.map(c))
}

pub fn saturating_classical_table() -> Vec<C64> {
    let q = 0.25;
    #[rustfmt::skip]
    let t = [
        q,   q,   0.0, 0.0,
        0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, q,   q,
        0.0, 0.0, 0.0, 0.0,
    ];
    table_from_rows_f(4, &t.map(c))
}

pub fn real_max_negative_table() -> Vec<C64> {
    let e = 0.125;
    #[rustfmt::skip]
    let t = [
        e,  e,  e,  -e,
        e,  e,  -e, e,
        e,  -e, e,  e,
        -e, e,  e,  e,
    ];
    table_from_rows_f(4, &t.map(c))
}

pub fn qubit_nonreal_table() -> Vec<C64> {
    let m = C64::new(0.25, -0.25);
    let p = C64::new(0.25, 0.25);
    table_from_rows_f(2, &[m, p, p, m])
}

/// Two pure qubit states and weights whose mixture has a classical
/// distribution even though each component's is nonclassical.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureExample {
    pub components: Vec<DensityOperator>,
    pub weights: Vec<f64>,
    pub a: OrthonormalBasis,
    pub f: OrthonormalBasis,
}

/// `2/3 |+><+| + 1/3 |-><-|` with `A` computational and `F` rotated by
/// `pi/3`.
pub fn pauli_mixture() -> MixtureExample {
    let (s, co) = (FRAC_PI_3.sin(), FRAC_PI_3.cos());
    let f = OrthonormalBasis::new(vec![
        Ket::from_real(&[co, s]).unwrap(),
        Ket::from_real(&[-s, co]).unwrap(),
    ])
    .unwrap();
    MixtureExample {
        components: vec![
            Ket::from_real(&[H, H]).unwrap().density(),
            Ket::from_real(&[H, -H]).unwrap().density(),
        ],
        weights: vec![2.0 / 3.0, 1.0 / 3.0],
        a: OrthonormalBasis::computational(2).unwrap(),
        f,
    }
}
