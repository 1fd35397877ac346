//! Independent evaluation paths and randomized falsification scans.
//!
//! Every scan sample is a pure function of `(seed, index)`: sample `index`
//! draws from [`stream_rng`]`(seed, index)`. Callers may evaluate samples in
//! any order or in parallel and fold them with [`ScanResult::push`].

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent when std is linked, as under `cargo test`
use num_traits::Float;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::classicality::{
    certifies_nonclassical, classify, coarse_certifies_nonclassical, coarse_support_counts, coarse_zero_free_certifies,
    commutation_report, support_counts, zero_free_certifies,
};
use crate::fixtures;
use crate::kd::{
    coarse_grain, compute_extended_kd, compute_kd, condition_on, next_index, reconstruct_state, Axis,
    PostselectionOutcome,
};
use crate::measures::{max_nonclassicality_bound, nonclassicality_measures};
use crate::mubs::{max_nonclassical_instance, mub_triplet};
use crate::random::{haar_basis, haar_ket, haar_unitary, random_mixed_state, stream_rng};
use crate::state::{max_abs, same_dim, DensityOperator, EigenspacePartition, Ket, Observable, OrthonormalBasis};
use crate::{CMatrix, CVector, Error, Result, C64};

/// `Tr(P^(k)_{i_k} ... P^(1)_{i_1} rho)` by dense matrix products, in the
/// same row-major order as [`crate::KdDistribution::values`].
pub fn kd_by_trace(state: &DensityOperator, axes: &[Axis]) -> Result<Vec<C64>> {
    if axes.is_empty() {
        return Err(Error::TooFewBases { min: 1, found: 0 });
    }
    let projectors: Vec<Vec<CMatrix>> = axes
        .iter()
        .map(|axis| {
            same_dim(state.dim(), axis.basis().dim())?;
            (0..axis.len()).map(|o| axis.projector_onto(&[o])).collect()
        })
        .collect::<Result<_>>()?;
    let shape: Vec<usize> = axes.iter().map(Axis::len).collect();
    let mut index = vec![0usize; shape.len()];
    let mut out = Vec::with_capacity(shape.iter().product());
    loop {
        let mut m = state.matrix().clone();
        for (axis, &i) in index.iter().enumerate() {
            m = &projectors[axis][i] * m;
        }
        out.push(m.trace());
        if !next_index(&mut index, &shape) {
            break;
        }
    }
    Ok(out)
}

/// One scan sample: the observed statistic and whether it broke the
/// property under test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub value: f64,
    pub violated: bool,
}

impl Observation {
    /// A sample that contributes nothing to `max_observed`.
    pub fn silent(violated: bool) -> Self {
        Observation {
            value: f64::NEG_INFINITY,
            violated,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanResult {
    pub samples: u64,
    /// Largest observed statistic; `-inf` if no sample reported one.
    pub max_observed: f64,
    pub violations: u64,
    pub seed: u64,
}

impl ScanResult {
    pub fn empty(seed: u64) -> Self {
        ScanResult {
            samples: 0,
            max_observed: f64::NEG_INFINITY,
            violations: 0,
            seed,
        }
    }

    pub fn push(&mut self, obs: Observation) {
        self.samples += 1;
        self.max_observed = self.max_observed.max(obs.value);
        self.violations += obs.violated as u64;
    }

    /// Folds two partial results over disjoint samples.
    pub fn merge(mut self, other: ScanResult) -> Self {
        self.samples += other.samples;
        self.max_observed = self.max_observed.max(other.max_observed);
        self.violations += other.violations;
        self
    }
}

/// Runs `sample(index)` for `index in 0..samples` in order.
pub fn scan(samples: u64, seed: u64, sample: impl Fn(u64) -> Result<Observation>) -> Result<ScanResult> {
    let mut result = ScanResult::empty(seed);
    for index in 0..samples {
        result.push(sample(index)?);
    }
    Ok(result)
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Random instances

fn random_subset(rng: &mut ChaCha8Rng, d: usize, min: usize, max: usize) -> Vec<usize> {
    let size = rng.random_range(min..=max);
    let mut all: Vec<usize> = (0..d).collect();
    all.shuffle(rng);
    all.truncate(size);
    all.sort_unstable();
    all
}

/// Haar-random ket supported on `span{b_i : i in support}`.
fn ket_in_span(rng: &mut ChaCha8Rng, basis: &OrthonormalBasis, support: &[usize]) -> Ket {
    let coeffs = haar_ket(rng, support.len().max(2));
    let mut v = CVector::zeros(basis.dim());
    for (c, &i) in coeffs.amplitudes().iter().zip(support) {
        v += basis.vectors()[i].as_vector() * *c;
    }
    Ket::from_vector_unchecked(v.unscale(v.norm()))
}

fn basis_from_coords(a: &OrthonormalBasis, coords: &CMatrix) -> OrthonormalBasis {
    OrthonormalBasis::from_kets_unchecked(
        (a.unitary() * coords)
            .column_iter()
            .map(|c| Ket::from_vector_unchecked(c.into_owned()))
            .collect(),
    )
}

/// A basis containing `a_i` (up to phase) for each `i` in `shared`, a Haar
/// rotation of the remaining span, in shuffled order.
fn sharing_basis(rng: &mut ChaCha8Rng, a: &OrthonormalBasis, shared: &[usize]) -> OrthonormalBasis {
    let d = a.dim();
    let rest: Vec<usize> = (0..d).filter(|i| !shared.contains(i)).collect();
    let mut coords = CMatrix::zeros(d, d);
    for (col, &i) in shared.iter().enumerate() {
        coords[(i, col)] = C64::from_polar(1.0, rng.random_range(0.0..core::f64::consts::TAU));
    }
    if !rest.is_empty() {
        let u = haar_unitary(rng, rest.len());
        for (c, _) in rest.iter().enumerate() {
            for (r, &i) in rest.iter().enumerate() {
                coords[(i, shared.len() + c)] = u[(r, c)];
            }
        }
    }
    let mut order: Vec<usize> = (0..d).collect();
    order.shuffle(rng);
    let shuffled = CMatrix::from_fn(d, d, |r, c| coords[(r, order[c])]);
    basis_from_coords(a, &shuffled)
}

/// `(psi, A, F)` from one of four families: fully random; state sparse in
/// `A`; `F` sharing vectors with `A` and a sparse state; and a state inside
/// the shared span, which is always classical.
fn support_instance(rng: &mut ChaCha8Rng, d: usize, family: u64) -> (Ket, OrthonormalBasis, OrthonormalBasis) {
    let a = haar_basis(rng, d);
    match family % 4 {
        0 => {
            let f = haar_basis(rng, d);
            (haar_ket(rng, d), a, f)
        }
        1 => {
            let f = haar_basis(rng, d);
            let support = random_subset(rng, d, 1, d);
            (ket_in_span(rng, &a, &support), a, f)
        }
        2 => {
            let shared = random_subset(rng, d, 1, d);
            let f = sharing_basis(rng, &a, &shared);
            let support = random_subset(rng, d, 1, d);
            (ket_in_span(rng, &a, &support), a, f)
        }
        _ => {
            let shared = random_subset(rng, d, 1, d);
            let f = sharing_basis(rng, &a, &shared);
            let support = random_subset(rng, shared.len(), 1, shared.len());
            let support: Vec<usize> = support.iter().map(|&s| shared[s]).collect();
            (ket_in_span(rng, &a, &support), a, f)
        }
    }
}

/// Random partition of `0..d` into between 1 and `d` nonempty blocks.
fn random_partition(rng: &mut ChaCha8Rng, d: usize) -> EigenspacePartition {
    let blocks = rng.random_range(1..=d);
    let mut order: Vec<usize> = (0..d).collect();
    order.shuffle(rng);
    let mut parts: Vec<Vec<usize>> = vec![Vec::new(); blocks];
    for (n, &i) in order.iter().enumerate() {
        let b = if n < blocks { n } else { rng.random_range(0..blocks) };
        parts[b].push(i);
    }
    EigenspacePartition::new(d, parts, (0..blocks).map(|l| l as f64).collect()).unwrap()
}

// ---------------------------------------------------------------------------
// Scans

/// Total nonclassicality of a Haar-random pure state over `k` Haar bases;
/// violated if it exceeds `d^((k-1)/2) - 1` by more than `1e-9`.
pub fn bound_sample(d: usize, k: usize, seed: u64, index: u64) -> Result<Observation> {
    check_dim(d)?;
    if k < 2 {
        return Err(Error::TooFewBases { min: 2, found: k });
    }
    let mut rng = stream_rng(seed, index);
    let bases: Vec<_> = (0..k).map(|_| haar_basis(&mut rng, d)).collect();
    let psi = haar_ket(&mut rng, d).density();
    let total = nonclassicality_measures(&compute_extended_kd(&psi, &bases)?)?.total;
    Ok(Observation {
        value: total,
        violated: total > max_nonclassicality_bound(d, k) + 1e-9,
    })
}

pub fn bound_scan(d: usize, k: usize, samples: u64, seed: u64) -> Result<ScanResult> {
    scan(samples, seed, |i| bound_sample(d, k, seed, i))
}

/// Total nonclassicality of the MUB instance reaching the bound, when a
/// triplet is available in dimension `d`.
pub fn injected_instance(d: usize, k: usize) -> Result<Observation> {
    let family = mub_triplet(d)?;
    let (psi, bases) = max_nonclassical_instance(&family, k)?;
    let total = nonclassicality_measures(&compute_extended_kd(&psi.density(), &bases)?)?.total;
    Ok(Observation {
        value: total,
        violated: total > max_nonclassicality_bound(d, k) + 1e-9,
    })
}

/// [`bound_scan`] with the bound-reaching instance added as one more sample.
pub fn bound_scan_injected(d: usize, k: usize, samples: u64, seed: u64) -> Result<ScanResult> {
    let mut r = bound_scan(d, k, samples, seed)?;
    r.push(injected_instance(d, k)?);
    Ok(r)
}

/// Support-count certificate against direct classification. The value is
/// `lhs - rhs` for classical instances (so `max_observed <= 0` is the
/// contrapositive); violated if a certified or zero-free instance is
/// classical.
pub fn support_sample(d: usize, seed: u64, index: u64) -> Result<Observation> {
    check_dim(d)?;
    let mut rng = stream_rng(seed, index);
    let (psi, a, f) = support_instance(&mut rng, d, index);
    let counts = support_counts(&psi, &a, &f)?;
    let dist = compute_kd(&psi.density(), &a, &f)?;
    let classical = classify(&dist).label.is_classical();
    let certified = certifies_nonclassical(&counts)?;
    let zero_free = zero_free_certifies(&dist)?;
    if classical {
        Ok(Observation {
            value: (counts.lhs() - counts.rhs()) as f64,
            violated: certified || zero_free,
        })
    } else {
        Ok(Observation::silent(false))
    }
}

pub fn support_scan(d: usize, samples: u64, seed: u64) -> Result<ScanResult> {
    scan(samples, seed, |i| support_sample(d, seed, i))
}

/// Coarse certificate and coarse zero-free certificate against direct
/// classification of the coarse distribution, with random partitions.
pub fn coarse_support_sample(d: usize, seed: u64, index: u64) -> Result<Observation> {
    check_dim(d)?;
    let mut rng = stream_rng(seed, index);
    let (psi, a, f) = support_instance(&mut rng, d, index);
    let (part_a, part_f) = match (index / 4) % 3 {
        0 => (random_partition(&mut rng, d), random_partition(&mut rng, d)),
        1 => (EigenspacePartition::singletons(d)?, random_partition(&mut rng, d)),
        _ => (random_partition(&mut rng, d), EigenspacePartition::singletons(d)?),
    };
    let counts = coarse_support_counts(&psi, &part_a, &part_f, &a, &f)?;
    let dist = coarse_grain(&psi.density(), &part_a, &part_f, &a, &f)?;
    let classical = classify(&dist).label.is_classical();
    let certified = coarse_certifies_nonclassical(&counts)?;
    let zero_free = coarse_zero_free_certifies(&dist, &part_a, &part_f).unwrap_or(false);
    if classical {
        Ok(Observation {
            value: (counts.lhs() - counts.rhs()) as f64,
            violated: certified || zero_free,
        })
    } else {
        Ok(Observation::silent(false))
    }
}

pub fn coarse_support_scan(d: usize, samples: u64, seed: u64) -> Result<ScanResult> {
    scan(samples, seed, |i| coarse_support_sample(d, seed, i))
}

/// Round-trip error of state reconstruction. Odd samples use an `F` that
/// shares vectors with `A`, so some overlaps vanish.
pub fn reconstruction_sample(d: usize, seed: u64, index: u64) -> Result<Observation> {
    check_dim(d)?;
    let mut rng = stream_rng(seed, index);
    let a = haar_basis(&mut rng, d);
    let f = if index % 2 == 1 {
        let shared = random_subset(&mut rng, d, 1, d);
        sharing_basis(&mut rng, &a, &shared)
    } else {
        haar_basis(&mut rng, d)
    };
    let rho = if (index / 2).is_multiple_of(2) {
        haar_ket(&mut rng, d).density()
    } else {
        random_mixed_state(&mut rng, d)
    };
    let rec = reconstruct_state(&compute_kd(&rho, &a, &f)?)?;
    let err = max_abs(&(rec.state.matrix() - rho.matrix()));
    Ok(Observation {
        value: err,
        violated: err > 1e-8,
    })
}

pub fn reconstruction_scan(d: usize, samples: u64, seed: u64) -> Result<ScanResult> {
    scan(samples, seed, |i| reconstruction_sample(d, seed, i))
}

/// Largest entrywise difference between [`kd_by_trace`] and the overlap
/// formula, on `k` Haar bases (every third sample is coarse-grained with
/// `k = 2`).
pub fn agreement_sample(d: usize, k: usize, seed: u64, index: u64) -> Result<Observation> {
    check_dim(d)?;
    let mut rng = stream_rng(seed, index);
    let rho = random_mixed_state(&mut rng, d);
    let (fast, axes) = if index % 3 == 2 {
        let (a, f) = (haar_basis(&mut rng, d), haar_basis(&mut rng, d));
        let (pa, pf) = (random_partition(&mut rng, d), random_partition(&mut rng, d));
        let dist = coarse_grain(&rho, &pa, &pf, &a, &f)?;
        (dist.values().to_vec(), dist.axes().unwrap().to_vec())
    } else {
        let bases: Vec<_> = (0..k.max(2)).map(|_| haar_basis(&mut rng, d)).collect();
        let dist = compute_extended_kd(&rho, &bases)?;
        (dist.values().to_vec(), dist.axes().unwrap().to_vec())
    };
    let slow = kd_by_trace(&rho, &axes)?;
    let diff = fast.iter().zip(&slow).fold(0.0f64, |m, (x, y)| m.max((x - y).norm()));
    Ok(Observation {
        value: diff,
        violated: diff > 1e-10,
    })
}

pub fn agreement_scan(d: usize, k: usize, samples: u64, seed: u64) -> Result<ScanResult> {
    scan(samples, seed, |i| agreement_sample(d, k, seed, i))
}

/// Sum of overlap magnitudes and whether every overlap is `1/sqrt d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JensenCheck {
    pub sum: f64,
    pub saturated: bool,
}

/// `sum_i |<b_i|psi>|`, which never exceeds `sqrt d`.
pub fn jensen_saturation_check(basis: &OrthonormalBasis, psi: &Ket) -> Result<JensenCheck> {
    let overlaps = basis.overlaps(psi)?;
    let flat = 1.0 / (basis.dim() as f64).sqrt();
    Ok(JensenCheck {
        sum: overlaps.iter().map(|z| z.norm()).sum(),
        saturated: overlaps.iter().all(|z| (z.norm() - flat).abs() <= 1e-8),
    })
}

/// Value `sum / sqrt d`; every fourth sample is unbiased to the basis.
/// Violated if the sum exceeds `sqrt d + 1e-9`, or if a saturated sample
/// misses equality. The converse is not checked: the deficit is quadratic
/// in the overlap deviation, so near-flat states reach equality within
/// `1e-8` without being flat within `1e-8`.
pub fn jensen_sample(d: usize, seed: u64, index: u64) -> Result<Observation> {
    check_dim(d)?;
    let mut rng = stream_rng(seed, index);
    let basis = haar_basis(&mut rng, d);
    let psi = if index % 4 == 3 {
        let amp = 1.0 / (d as f64).sqrt();
        let coords = CVector::from_fn(d, |_, _| {
            C64::from_polar(amp, rng.random_range(0.0..core::f64::consts::TAU))
        });
        Ket::from_vector_unchecked(basis.unitary() * coords)
    } else {
        haar_ket(&mut rng, d)
    };
    let check = jensen_saturation_check(&basis, &psi)?;
    let root = (d as f64).sqrt();
    let equal = (check.sum - root).abs() <= 1e-8;
    Ok(Observation {
        value: check.sum / root,
        violated: check.sum > root + 1e-9 || (check.saturated && !equal) || (index % 4 == 3 && !check.saturated),
    })
}

pub fn jensen_scan(d: usize, samples: u64, seed: u64) -> Result<ScanResult> {
    scan(samples, seed, |i| jensen_sample(d, seed, i))
}

// ---------------------------------------------------------------------------
// Sets of vectors with pairwise nonpositive inner products

const INNER_TOL: f64 = 1e-12;

/// Every pairwise inner product is real and `<= 0` (within `1e-12`), and
/// every vector is nonzero.
pub fn is_nonpositive_set(vectors: &[CVector]) -> bool {
    vectors.iter().all(|v| v.norm() > INNER_TOL)
        && vectors.iter().enumerate().all(|(i, u)| {
            vectors[..i].iter().all(|v| {
                let z = u.dotc(v);
                z.re <= INNER_TOL && z.im.abs() <= INNER_TOL
            })
        })
}

/// `{+e_i, -e_i}`: a set of size `2n` in `C^n`.
pub fn nonpositive_witness(n: usize) -> Vec<CVector> {
    (0..n)
        .flat_map(|i| {
            let e = CVector::from_fn(n, |r, _| C64::new((r == i) as u8 as f64, 0.0));
            [e.clone(), -e]
        })
        .collect()
}

fn nonpositive_candidate(rng: &mut ChaCha8Rng, n: usize, set: &[CVector]) -> CVector {
    const UNITS: [C64; 5] = [
        C64::new(0.0, 0.0),
        C64::new(1.0, 0.0),
        C64::new(-1.0, 0.0),
        C64::new(0.0, 1.0),
        C64::new(0.0, -1.0),
    ];
    if !set.is_empty() && rng.random_bool(0.3) {
        // minus a random sum of members
        let mut v = CVector::zeros(n);
        for s in set {
            if rng.random_bool(0.5) {
                v -= s;
            }
        }
        return v;
    }
    let sparse = rng.random_bool(0.5);
    CVector::from_fn(n, |_, _| {
        if sparse && rng.random_bool(0.6) {
            UNITS[0]
        } else {
            UNITS[rng.random_range(0..UNITS.len())]
        }
    })
}

/// Size of a greedily grown nonpositive set in `C^n`; violated above `2n`.
pub fn nonpositive_sample(n: usize, seed: u64, index: u64) -> Result<Observation> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut rng = stream_rng(seed, index);
    let mut set: Vec<CVector> = Vec::new();
    for _ in 0..8 * n {
        let v = nonpositive_candidate(&mut rng, n, &set);
        if v.norm() <= INNER_TOL {
            continue;
        }
        let fits = set.iter().all(|s| {
            let z = s.dotc(&v);
            z.re <= INNER_TOL && z.im.abs() <= INNER_TOL
        });
        if fits {
            set.push(v);
        }
    }
    debug_assert!(is_nonpositive_set(&set));
    Ok(Observation {
        value: set.len() as f64,
        violated: set.len() > 2 * n,
    })
}

pub fn nonpositive_set_search(n: usize, trials: u64, seed: u64) -> Result<ScanResult> {
    scan(trials, seed, |i| nonpositive_sample(n, seed, i))
}

// ---------------------------------------------------------------------------
// Classical distributions of pairwise noncommuting operators

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalInstance {
    pub psi: Ket,
    pub a: Observable,
    pub f: Observable,
}

impl ClassicalInstance {
    /// Classical distribution and all three pairs noncommuting.
    pub fn verify(&self) -> Result<bool> {
        let rho = self.psi.density();
        let report = commutation_report(&rho, &self.a, &self.f)?;
        let dist = compute_kd(&rho, self.a.basis(), self.f.basis())?;
        Ok(!report.any() && classify(&dist).label.is_classical())
    }
}

fn from_example(ex: fixtures::Example) -> ClassicalInstance {
    ClassicalInstance {
        psi: ex.psi,
        a: ex.a,
        f: ex.f,
    }
}

/// A random instance from one of two constructions, rotated by a Haar
/// unitary: a state inside the span of vectors shared by both bases with the
/// rest of `F` mixed (needs `d >= 4`), or a real rotation of one pair of
/// `A` vectors with the state on the rotated `+` vector and the untouched
/// vectors.
pub fn classical_candidate(d: usize, seed: u64, index: u64) -> Result<ClassicalInstance> {
    if d < 3 {
        return Err(Error::InvalidArgument("constructions need d >= 3".into()));
    }
    let mut rng = stream_rng(seed, index);
    let computational = OrthonormalBasis::computational(d)?;
    let (f, psi) = if d >= 4 && index.is_multiple_of(2) {
        let shared = random_subset(&mut rng, d, 2, d - 2);
        let f = sharing_basis(&mut rng, &computational, &shared);
        let psi = ket_in_span(&mut rng, &computational, &shared);
        (f, psi)
    } else {
        let pair = random_subset(&mut rng, d, 2, 2);
        let theta = rng.random_range(0.1..core::f64::consts::FRAC_PI_2 - 0.1);
        let (s, c) = (theta.sin(), theta.cos());
        let mut coords = CMatrix::identity(d, d);
        let (i0, i1) = (pair[0], pair[1]);
        coords[(i0, i0)] = C64::new(c, 0.0);
        coords[(i1, i0)] = C64::new(s, 0.0);
        coords[(i0, i1)] = C64::new(-s, 0.0);
        coords[(i1, i1)] = C64::new(c, 0.0);
        let f = basis_from_coords(&computational, &coords);
        let weights = haar_ket(&mut rng, d - 1);
        let mut v = f.vectors()[i0].as_vector() * C64::new(weights.amplitudes()[0].norm(), 0.0);
        let others = (0..d).filter(|&i| i != i0 && i != i1);
        for (w, i) in weights.amplitudes()[1..].iter().zip(others) {
            v += computational.vectors()[i].as_vector() * *w;
        }
        (f, Ket::from_vector_unchecked(v.unscale(v.norm())))
    };
    let u = haar_unitary(&mut rng, d);
    let a = computational.rotated(&u)?;
    let f = f.rotated(&u)?;
    let psi = Ket::from_vector_unchecked(&u * psi.as_vector());
    let eig: Vec<f64> = (1..=d).map(|i| i as f64).collect();
    Ok(ClassicalInstance {
        psi,
        a: Observable::new(a, eig.clone())?,
        f: Observable::new(f, eig)?,
    })
}

/// Verified instances. At `d = 4` the two worked classical examples come
/// first.
pub fn classical_noncommuting_search(d: usize, samples: u64, seed: u64) -> Result<Vec<ClassicalInstance>> {
    let mut found = Vec::new();
    if d == 4 {
        found.push(from_example(fixtures::classical_noncommuting()));
        found.push(from_example(fixtures::saturating_classical()));
    }
    for index in 0..samples {
        let candidate = classical_candidate(d, seed, index)?;
        if candidate.verify()? {
            found.push(candidate);
        }
    }
    Ok(found)
}

// ---------------------------------------------------------------------------
// Amplification by postselection

#[derive(Debug, Clone, PartialEq)]
pub struct AmplificationInstance {
    pub psi: Ket,
    pub a: OrthonormalBasis,
    pub f: OrthonormalBasis,
    pub outcome: PostselectionOutcome,
    pub postselection_probability: f64,
    /// Largest `|q|` of the conditioned distribution.
    pub max_abs: f64,
}

/// Random search for a postselected distribution with a large entry. Each
/// trial draws `(psi, A, F)` and conditions on every single outcome of `F`
/// with probability at least `1e-3`; the best trial is returned.
pub fn amplification_search(d: usize, trials: u64, seed: u64) -> Result<AmplificationInstance> {
    check_dim(d)?;
    let mut best: Option<AmplificationInstance> = None;
    for index in 0..trials {
        let mut rng = stream_rng(seed, index);
        let a = haar_basis(&mut rng, d);
        let f = haar_basis(&mut rng, d);
        let psi = haar_ket(&mut rng, d);
        let dist = compute_kd(&psi.density(), &a, &f)?;
        for j in 0..d {
            let outcome = PostselectionOutcome::last_axis(2, vec![j]);
            let p = psi.inner(&f.vectors()[j])?.norm_sqr();
            if p < 1e-3 {
                continue;
            }
            let cond = condition_on(&dist, &outcome)?;
            let max_abs = cond.values().iter().fold(0.0f64, |m, q| m.max(q.norm()));
            if best.as_ref().is_none_or(|b| max_abs > b.max_abs) {
                best = Some(AmplificationInstance {
                    psi: psi.clone(),
                    a: a.clone(),
                    f: f.clone(),
                    outcome,
                    postselection_probability: p,
                    max_abs,
                });
            }
        }
    }
    best.ok_or_else(|| Error::InvalidArgument("no trial had a usable postselection".into()))
}
