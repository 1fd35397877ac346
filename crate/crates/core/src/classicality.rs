//! Support-count certificates of nonclassicality and direct classification.
//!
//! For a pure state `psi` and bases `A`, `F` of `C^d` the certificate is
//!
//! ```text
//! 2 N_A + 2 N_F > 3d + n_par - 3 nbar_par
//! ```
//!
//! where `N_A` (`N_F`) counts basis vectors not orthogonal to `psi`, and
//! `n_par` (`nbar_par`) counts vectors of `A` parallel to some vector of `F`
//! that are not orthogonal (are orthogonal) to `psi`. A `false` result is
//! inconclusive, never a proof of classicality.

use alloc::vec::Vec;

use crate::state::{max_abs, same_dim, DensityOperator, EigenspacePartition, Ket, Observable, OrthonormalBasis};
use crate::{tol, CMatrix, CVector, Error, KdDistribution, Result};

/// Inputs to the support-count certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SupportCounts {
    pub d: usize,
    pub n_a: usize,
    pub n_f: usize,
    pub n_par: usize,
    pub n_bar_par: usize,
    /// Counts over eigenspace blocks rather than basis vectors.
    pub coarse: bool,
}

impl SupportCounts {
    /// `2 N_A + 2 N_F`.
    pub fn lhs(&self) -> i64 {
        2 * (self.n_a + self.n_f) as i64
    }

    /// `3d + n_par - 3 nbar_par`.
    pub fn rhs(&self) -> i64 {
        3 * self.d as i64 + self.n_par as i64 - 3 * self.n_bar_par as i64
    }

    /// The inequality holds with equality.
    pub fn is_saturated(&self) -> bool {
        self.lhs() == self.rhs()
    }
}

fn is_parallel(u: &CVector, v: &CVector) -> bool {
    u.dotc(v).norm() > 1.0 - tol::PARALLEL
}

pub fn support_counts(psi: &Ket, a: &OrthonormalBasis, f: &OrthonormalBasis) -> Result<SupportCounts> {
    support_counts_with(psi, a, f, tol::ZERO)
}

pub fn support_counts_with(
    psi: &Ket,
    a: &OrthonormalBasis,
    f: &OrthonormalBasis,
    zero_tol: f64,
) -> Result<SupportCounts> {
    same_dim(psi.dim(), a.dim())?;
    same_dim(psi.dim(), f.dim())?;
    let on_a: Vec<bool> = a.overlaps(psi)?.iter().map(|z| z.norm() > zero_tol).collect();
    let n_f = f.overlaps(psi)?.iter().filter(|z| z.norm() > zero_tol).count();
    let (mut n_par, mut n_bar_par) = (0, 0);
    for (ai, &nonzero) in a.vectors().iter().zip(&on_a) {
        if f.vectors().iter().any(|fj| is_parallel(ai.as_vector(), fj.as_vector())) {
            if nonzero {
                n_par += 1;
            } else {
                n_bar_par += 1;
            }
        }
    }
    Ok(SupportCounts {
        d: psi.dim(),
        n_a: on_a.iter().filter(|&&b| b).count(),
        n_f,
        n_par,
        n_bar_par,
        coarse: false,
    })
}

/// Support counts for a density operator, which must be pure.
pub fn support_counts_of_state(
    state: &DensityOperator,
    a: &OrthonormalBasis,
    f: &OrthonormalBasis,
    zero_tol: f64,
) -> Result<SupportCounts> {
    support_counts_with(&pure_ket(state)?, a, f, zero_tol)
}

pub(crate) fn pure_ket(state: &DensityOperator) -> Result<Ket> {
    if !state.is_pure(tol::NORM) {
        return Err(Error::HypothesesUnmet("support counts need a pure state"));
    }
    Ok(state.principal_ket())
}

/// `true` certifies that the distribution has a negative or nonreal entry.
pub fn certifies_nonclassical(counts: &SupportCounts) -> Result<bool> {
    if counts.coarse {
        return Err(Error::CountsKind(true));
    }
    Ok(counts.lhs() > counts.rhs())
}

/// Coarse-grained form of [`certifies_nonclassical`].
pub fn coarse_certifies_nonclassical(counts: &SupportCounts) -> Result<bool> {
    if !counts.coarse {
        return Err(Error::CountsKind(false));
    }
    Ok(counts.lhs() > counts.rhs())
}

/// A two-axis distribution of a pure state with no zero entries is
/// nonclassical when the observables are nondegenerate. Mixed states are
/// not covered: the maximally mixed state on unbiased bases is zero-free
/// and classical.
pub fn zero_free_certifies(dist: &KdDistribution) -> Result<bool> {
    zero_free_certifies_with(dist, tol::ZERO)
}

pub fn zero_free_certifies_with(dist: &KdDistribution, zero_tol: f64) -> Result<bool> {
    if dist.k() != 2 {
        return Err(Error::InvalidAxes(alloc::format!(
            "expected 2 axes, found {}",
            dist.k()
        )));
    }
    Ok(dist.values().iter().all(|q| q.norm() > zero_tol))
}

/// Zero-free certificate for coarse distributions: one partition must be
/// all singletons and the other must have at least two blocks.
pub fn coarse_zero_free_certifies(
    dist: &KdDistribution,
    part_a: &EigenspacePartition,
    part_f: &EigenspacePartition,
) -> Result<bool> {
    let ok = (part_a.is_singletons() && part_f.len() >= 2) || (part_f.is_singletons() && part_a.len() >= 2);
    if !ok {
        return Err(Error::HypothesesUnmet(
            "one observable must be nondegenerate and the other not completely degenerate",
        ));
    }
    if dist.shape() != [part_a.len(), part_f.len()] {
        return Err(Error::InvalidAxes(alloc::format!(
            "shape {:?} does not match partitions ({}, {})",
            dist.shape(),
            part_a.len(),
            part_f.len()
        )));
    }
    zero_free_certifies(dist)
}

/// Classification of a distribution by direct inspection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Classical,
    Negative,
    Nonreal,
    NegativeAndNonreal,
}

impl Label {
    pub fn is_classical(self) -> bool {
        self == Label::Classical
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Classical => "Classical",
            Label::Negative => "Negative",
            Label::Nonreal => "Nonreal",
            Label::NegativeAndNonreal => "NegativeAndNonreal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verdict {
    pub label: Label,
    /// Smallest real part, or 0 if none is negative.
    pub max_negative_real: f64,
    pub max_abs_imag: f64,
    /// Entries with `|q| <= tol`.
    pub zero_count: usize,
}

pub fn classify(dist: &KdDistribution) -> Verdict {
    classify_with(dist, tol::ZERO)
}

pub fn classify_with(dist: &KdDistribution, zero_tol: f64) -> Verdict {
    let mut min_re = 0.0f64;
    let mut max_im = 0.0f64;
    let mut zero_count = 0;
    for q in dist.values() {
        min_re = min_re.min(q.re);
        max_im = max_im.max(q.im.abs());
        if q.norm() <= zero_tol {
            zero_count += 1;
        }
    }
    let label = match (min_re < -zero_tol, max_im > zero_tol) {
        (false, false) => Label::Classical,
        (true, false) => Label::Negative,
        (false, true) => Label::Nonreal,
        (true, true) => Label::NegativeAndNonreal,
    };
    Verdict {
        label,
        max_negative_real: min_re,
        max_abs_imag: max_im,
        zero_count,
    }
}

/// Counts over eigenspace blocks. A nonzero `A_l psi` is parallel when its
/// normalization is parallel to some nonzero normalized `F_k psi`; a block
/// with `A_l psi = 0` counts towards `nbar_par` when its projector equals
/// some `F` block projector. Singleton partitions reproduce
/// [`support_counts`].
pub fn coarse_support_counts(
    psi: &Ket,
    part_a: &EigenspacePartition,
    part_f: &EigenspacePartition,
    basis_a: &OrthonormalBasis,
    basis_f: &OrthonormalBasis,
) -> Result<SupportCounts> {
    coarse_support_counts_with(psi, part_a, part_f, basis_a, basis_f, tol::ZERO)
}

pub fn coarse_support_counts_with(
    psi: &Ket,
    part_a: &EigenspacePartition,
    part_f: &EigenspacePartition,
    basis_a: &OrthonormalBasis,
    basis_f: &OrthonormalBasis,
    zero_tol: f64,
) -> Result<SupportCounts> {
    let d = psi.dim();
    for n in [part_a.dim(), part_f.dim(), basis_a.dim(), basis_f.dim()] {
        same_dim(d, n)?;
    }
    let projectors = |part: &EigenspacePartition, basis: &OrthonormalBasis| -> Result<Vec<CMatrix>> {
        (0..part.len()).map(|l| part.block_projector(basis, l)).collect()
    };
    let pa = projectors(part_a, basis_a)?;
    let pf = projectors(part_f, basis_f)?;
    let project = |p: &CMatrix| -> Option<CVector> {
        let v = p * psi.as_vector();
        let n = v.norm();
        (n > zero_tol).then(|| v.unscale(n))
    };
    let fa: Vec<Option<CVector>> = pa.iter().map(project).collect();
    let ff: Vec<CVector> = pf.iter().filter_map(project).collect();
    let (mut n_par, mut n_bar_par) = (0, 0);
    for (p, proj) in pa.iter().zip(&fa) {
        match proj {
            Some(u) => {
                if ff.iter().any(|v| is_parallel(u, v)) {
                    n_par += 1;
                }
            }
            None => {
                if pf.iter().any(|q| max_abs(&(p - q)) <= tol::PARALLEL) {
                    n_bar_par += 1;
                }
            }
        }
    }
    Ok(SupportCounts {
        d,
        n_a: fa.iter().filter(|v| v.is_some()).count(),
        n_f: ff.len(),
        n_par,
        n_bar_par,
        coarse: true,
    })
}

/// Which pairs among state and observables commute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CommutationReport {
    pub state_a: bool,
    pub state_f: bool,
    pub a_f: bool,
}

impl CommutationReport {
    pub fn any(&self) -> bool {
        self.state_a || self.state_f || self.a_f
    }
}

fn commute(x: &CMatrix, y: &CMatrix) -> bool {
    max_abs(&(x * y - y * x)) <= tol::COMMUTATOR
}

pub fn commutation_report(state: &DensityOperator, a: &Observable, f: &Observable) -> Result<CommutationReport> {
    same_dim(state.dim(), a.dim())?;
    same_dim(state.dim(), f.dim())?;
    let (rho, am, fm) = (state.matrix(), a.matrix(), f.matrix());
    Ok(CommutationReport {
        state_a: commute(rho, &am),
        state_f: commute(rho, &fm),
        a_f: commute(&am, &fm),
    })
}
