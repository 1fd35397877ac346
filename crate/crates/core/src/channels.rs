//! Depolarization and convex mixing.
//!
//! Under `rho -> p rho + (1 - p) 1/d` every entry moves affinely,
//! `q(p) = p q(1) + (1 - p) |<f|a>|^2 / d`, so negativity vanishes below a
//! threshold that can be found cell by cell.

use alloc::format;
use alloc::vec::Vec;

use crate::kd::compute_kd;
use crate::measures::{nonclassicality_measures, NonclassicalityReport};
use crate::state::{same_dim, DensityOperator, OrthonormalBasis};
use crate::{tol, CMatrix, Error, Result, C64};

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    Ok(())
}

/// `p rho + (1 - p) 1/d`.
pub fn depolarize(state: &DensityOperator, p: f64) -> Result<DensityOperator> {
    check_probability(p)?;
    let d = state.dim();
    let mixed = CMatrix::identity(d, d).scale((1.0 - p) / d as f64);
    Ok(DensityOperator::from_matrix_unchecked(state.matrix().scale(p) + mixed))
}

/// `sum_n w_n rho_n`.
pub fn convex_mix(states: &[DensityOperator], weights: &[f64]) -> Result<DensityOperator> {
    if states.is_empty() || states.len() != weights.len() {
        return Err(Error::InvalidWeights(format!(
            "{} states but {} weights",
            states.len(),
            weights.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| w.is_nan() || **w < 0.0) {
        return Err(Error::InvalidWeights(format!("negative weight {w}")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > tol::NORM {
        return Err(Error::InvalidWeights(format!("weights sum to {total}")));
    }
    let d = states[0].dim();
    let mut m = CMatrix::zeros(d, d);
    for (rho, &w) in states.iter().zip(weights) {
        same_dim(d, rho.dim())?;
        m += rho.matrix().scale(w);
    }
    Ok(DensityOperator::from_matrix_unchecked(m))
}

/// Depolarization strength below which the distribution has no negative
/// real part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    /// Smallest per-cell crossing `w / (w + |Re q|)`, `w = |<f|a>|^2 / d`.
    pub analytic: f64,
    /// Largest `p` with negativity `<= 1e-10`, by bisection to `1e-8`.
    pub bisection: f64,
    /// Cell `(i, j)` whose crossing is the threshold.
    pub cell: (usize, usize),
}

/// `None` if the undepolarized distribution already has negativity
/// `<= 1e-10`.
pub fn negativity_threshold(
    state0: &DensityOperator,
    a: &OrthonormalBasis,
    f: &OrthonormalBasis,
) -> Result<Option<Threshold>> {
    let negativity_at = |p: f64| -> Result<f64> {
        Ok(nonclassicality_measures(&compute_kd(&depolarize(state0, p)?, a, f)?)?.negativity)
    };
    if negativity_at(1.0)? <= 1e-10 {
        return Ok(None);
    }
    let q0 = compute_kd(state0, a, f)?;
    let gram = a.gram(f)?;
    let d = state0.dim();
    let mut best: Option<(f64, (usize, usize))> = None;
    for i in 0..d {
        for j in 0..d {
            let re = q0.values()[i * d + j].re;
            if re >= 0.0 {
                continue;
            }
            let w = gram[(i, j)].norm_sqr() / d as f64;
            let crossing = w / (w - re);
            if best.is_none_or(|(p, _)| crossing < p) {
                best = Some((crossing, (i, j)));
            }
        }
    }
    let (analytic, cell) = best.ok_or_else(|| Error::Inconsistent("negativity without a negative cell".into()))?;

    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > 1e-8 {
        let mid = 0.5 * (lo + hi);
        if negativity_at(mid)? <= 1e-10 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(Threshold {
        analytic,
        bisection: lo,
        cell,
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DepolarizationSweep {
    pub p_values: Vec<f64>,
    pub reports: Vec<NonclassicalityReport>,
    pub negativity_threshold: Option<f64>,
}

/// Measures at each `p`, checking `N(p) <= p N(1)`, `N_neg(p) <= p N_neg(1)`
/// and `N_im(p) = p N_im(1)` along the way.
pub fn depolarization_sweep(
    state0: &DensityOperator,
    a: &OrthonormalBasis,
    f: &OrthonormalBasis,
    p_values: &[f64],
) -> Result<DepolarizationSweep> {
    for &p in p_values {
        check_probability(p)?;
    }
    let top = nonclassicality_measures(&compute_kd(state0, a, f)?)?;
    let mut reports = Vec::with_capacity(p_values.len());
    for &p in p_values {
        let r = nonclassicality_measures(&compute_kd(&depolarize(state0, p)?, a, f)?)?;
        let ok = r.total <= p * top.total + 1e-9
            && r.negativity <= p * top.negativity + 1e-9
            && (r.imaginarity - p * top.imaginarity).abs() <= 1e-9;
        if !ok {
            return Err(Error::Inconsistent(format!(
                "depolarization at p = {p} increased nonclassicality"
            )));
        }
        reports.push(r);
    }
    Ok(DepolarizationSweep {
        p_values: p_values.to_vec(),
        reports,
        negativity_threshold: negativity_threshold(state0, a, f)?.map(|t| t.analytic),
    })
}

/// `p q(1) + (1 - p) |<f_j|a_i>|^2 / d` for every cell.
pub fn depolarized_kd_values(
    state0: &DensityOperator,
    a: &OrthonormalBasis,
    f: &OrthonormalBasis,
    p: f64,
) -> Result<Vec<C64>> {
    check_probability(p)?;
    let q0 = compute_kd(state0, a, f)?;
    let gram = a.gram(f)?;
    let d = state0.dim();
    Ok(q0
        .values()
        .iter()
        .enumerate()
        .map(|(n, q)| q * p + C64::new((1.0 - p) * gram[(n / d, n % d)].norm_sqr() / d as f64, 0.0))
        .collect())
}
