//! Total nonclassicality, negativity and nonreality of a distribution, and
//! the dimension bound on total nonclassicality.

use alloc::vec::Vec;

#[allow(unused_imports)] // inherent when std is linked, as under `cargo test`
use num_traits::Float;

use crate::kd::compute_extended_kd;
use crate::state::{same_dim, DensityOperator, OrthonormalBasis};
use crate::{tol, Error, KdDistribution, Result};

/// The three measures with the bound for the distribution's `(d, k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonclassicalityReport {
    /// `-1 + sum |q|`.
    pub total: f64,
    /// `-1 + sum |Re q|`.
    pub negativity: f64,
    /// `sum |Im q|`.
    pub imaginarity: f64,
    /// `d^((k-1)/2) - 1`; `None` for conditioned distributions or unknown `d`.
    pub bound: Option<f64>,
    /// `total` within `1e-8` of `bound`.
    pub saturates_bound: bool,
}

/// `d^((k-1)/2) - 1`.
pub fn max_nonclassicality_bound(d: usize, k: usize) -> f64 {
    (d as f64).sqrt().powi(k as i32 - 1) - 1.0
}

fn infer_dim(dist: &KdDistribution) -> Option<usize> {
    dist.dim().or_else(|| {
        let n = dist.shape()[0];
        dist.shape().iter().all(|&m| m == n).then_some(n)
    })
}

pub fn nonclassicality_measures(dist: &KdDistribution) -> Result<NonclassicalityReport> {
    let (mut abs, mut re, mut im) = (0.0, 0.0, 0.0);
    for q in dist.values() {
        abs += q.norm();
        re += q.re.abs();
        im += q.im.abs();
    }
    let total = abs - 1.0;
    let bound = match (dist.is_conditioned(), infer_dim(dist)) {
        (false, Some(d)) if dist.k() >= 2 => Some(max_nonclassicality_bound(d, dist.k())),
        _ => None,
    };
    Ok(NonclassicalityReport {
        total,
        negativity: re - 1.0,
        imaginarity: im,
        bound,
        saturates_bound: bound.is_some_and(|b| (total - b).abs() <= tol::SATURATION),
    })
}

/// Diagnostics for the two conditions under which the bound is reached.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxConditions {
    /// Every adjacent pair of bases is mutually unbiased.
    pub unbiased: bool,
    /// The state is pure with all overlaps `1/sqrt d` against the first and
    /// last bases.
    pub flat_overlaps: bool,
    /// Largest `| |<b|b'>| - 1/sqrt d |` over adjacent pairs.
    pub unbiased_deviation: f64,
    /// Largest `| |<b|psi>| - 1/sqrt d |` over the first and last bases
    /// (infinite for mixed states).
    pub overlap_deviation: f64,
}

impl MaxConditions {
    pub fn holds(&self) -> bool {
        self.unbiased && self.flat_overlaps
    }
}

pub fn check_max_conditions(state: &DensityOperator, bases: &[OrthonormalBasis]) -> Result<MaxConditions> {
    if bases.len() < 2 {
        return Err(Error::TooFewBases {
            min: 2,
            found: bases.len(),
        });
    }
    let d = state.dim();
    for b in bases {
        same_dim(d, b.dim())?;
    }
    let target = 1.0 / (d as f64).sqrt();
    let mut unbiased_deviation = 0.0f64;
    for w in bases.windows(2) {
        for z in w[0].gram(&w[1])?.iter() {
            unbiased_deviation = unbiased_deviation.max((z.norm() - target).abs());
        }
    }
    let overlap_deviation = if state.is_pure(tol::NORM) {
        let psi = state.principal_ket();
        let ends = [&bases[0], &bases[bases.len() - 1]];
        let mut worst = 0.0f64;
        for b in ends {
            let overlaps: Vec<_> = b.overlaps(&psi)?;
            for z in overlaps {
                worst = worst.max((z.norm() - target).abs());
            }
        }
        worst
    } else {
        f64::INFINITY
    };
    Ok(MaxConditions {
        unbiased: unbiased_deviation <= tol::UNBIASED,
        flat_overlaps: overlap_deviation <= tol::UNBIASED,
        unbiased_deviation,
        overlap_deviation,
    })
}

/// Measures of the extended distribution, for convenience.
pub fn measures_of(state: &DensityOperator, bases: &[OrthonormalBasis]) -> Result<NonclassicalityReport> {
    nonclassicality_measures(&compute_extended_kd(state, bases)?)
}
