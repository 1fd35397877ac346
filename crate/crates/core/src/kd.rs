//! Kirkwood-Dirac distributions.
//!
//! For bases `a^(1), ..., a^(k)` and a state `rho` the extended distribution
//! is `q[i_1, ..., i_k] = Tr(P^(k)_{i_k} ... P^(1)_{i_1} rho)`, which this
//! module evaluates through overlaps:
//!
//! ```text
//! q[i_1..i_k] = <a^(k)_{i_k}|a^(k-1)_{i_(k-1)}> ... <a^(2)_{i_2}|a^(1)_{i_1}> <a^(1)_{i_1}|rho|a^(k)_{i_k}>
//! ```
//!
//! Values are stored row-major with the last axis fastest.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::state::{same_dim, DensityOperator, EigenspacePartition, OrthonormalBasis};
use crate::{tol, CMatrix, Error, Result, C64};

/// What indexes one axis of a distribution.
#[derive(Debug, Clone, PartialEq)]
pub enum Axis {
    /// One entry per basis vector.
    Basis(OrthonormalBasis),
    /// One entry per eigenspace block of the basis.
    Coarse {
        basis: OrthonormalBasis,
        partition: EigenspacePartition,
    },
}

impl Axis {
    pub fn len(&self) -> usize {
        match self {
            Axis::Basis(b) => b.dim(),
            Axis::Coarse { partition, .. } => partition.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn basis(&self) -> &OrthonormalBasis {
        match self {
            Axis::Basis(b) | Axis::Coarse { basis: b, .. } => b,
        }
    }

    /// Projector of the given outcome set on this axis.
    pub fn projector_onto(&self, outcomes: &[usize]) -> Result<CMatrix> {
        let d = self.basis().dim();
        let mut p = CMatrix::zeros(d, d);
        for &o in outcomes {
            p += match self {
                Axis::Basis(b) => crate::state::projector(b, o)?,
                Axis::Coarse { basis, partition } => partition.block_projector(basis, o)?,
            };
        }
        Ok(p)
    }
}

/// A (possibly conditioned) KD quasiprobability tensor with optional
/// provenance: the axes it is defined over and the state it represents.
#[derive(Debug, Clone, PartialEq)]
pub struct KdDistribution {
    shape: Vec<usize>,
    values: Vec<C64>,
    dim: Option<usize>,
    axes: Option<Vec<Axis>>,
    state: Option<DensityOperator>,
    postselection: Option<f64>,
}

/// Outcome set `F` on the last axis of a distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct PostselectionOutcome {
    pub axis: usize,
    pub indices: Vec<usize>,
}

impl PostselectionOutcome {
    /// Outcome set on the last axis of a `k`-axis distribution.
    pub fn last_axis(k: usize, indices: Vec<usize>) -> Self {
        PostselectionOutcome {
            axis: k.saturating_sub(1),
            indices,
        }
    }
}

pub(crate) fn strides(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1; shape.len()];
    for i in (0..shape.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * shape[i + 1];
    }
    s
}

/// Advances a multi-index odometer; returns `false` after the last index.
pub(crate) fn next_index(index: &mut [usize], shape: &[usize]) -> bool {
    for axis in (0..index.len()).rev() {
        index[axis] += 1;
        if index[axis] < shape[axis] {
            return true;
        }
        index[axis] = 0;
    }
    false
}

impl KdDistribution {
    /// Builds a distribution from raw values and checks its invariants:
    /// entries sum to 1, and if unconditioned every `|q| <= 1`.
    pub fn from_values(
        shape: Vec<usize>,
        values: Vec<C64>,
        dim: Option<usize>,
        postselection: Option<f64>,
    ) -> Result<Self> {
        if shape.is_empty() || shape.contains(&0) {
            return Err(Error::InvalidDistribution("empty shape".into()));
        }
        if postselection.is_none() && shape.len() < 2 {
            return Err(Error::TooFewBases {
                min: 2,
                found: shape.len(),
            });
        }
        let expected: usize = shape.iter().product();
        if expected != values.len() {
            return Err(Error::InvalidDistribution(format!(
                "shape holds {expected} entries but {} values given",
                values.len()
            )));
        }
        if let Some(p) = postselection {
            if !(p > 0.0 && p <= 1.0 + tol::DISTRIBUTION) {
                return Err(Error::InvalidProbability(p));
            }
        }
        let dist = KdDistribution {
            shape,
            values,
            dim,
            axes: None,
            state: None,
            postselection,
        };
        dist.validate()?;
        Ok(dist)
    }

    fn validate(&self) -> Result<()> {
        let sum = self.sum();
        if (sum - C64::new(1.0, 0.0)).norm() > tol::DISTRIBUTION {
            return Err(Error::InvalidDistribution(format!(
                "entries sum to {} + {}i",
                sum.re, sum.im
            )));
        }
        if self.postselection.is_none() {
            if let Some(q) = self.values.iter().find(|q| q.norm() > 1.0 + tol::DISTRIBUTION) {
                return Err(Error::InvalidDistribution(format!(
                    "unconditioned entry magnitude {} exceeds 1",
                    q.norm()
                )));
            }
        }
        Ok(())
    }

    /// Attaches basis axes (and optionally the state) to a distribution
    /// loaded without provenance.
    pub fn with_bases(mut self, bases: Vec<OrthonormalBasis>) -> Result<Self> {
        if bases.len() != self.k() {
            return Err(Error::InvalidAxes(format!(
                "{} bases for {} axes",
                bases.len(),
                self.k()
            )));
        }
        for (b, &n) in bases.iter().zip(&self.shape) {
            same_dim(n, b.dim())?;
        }
        self.dim = Some(bases[0].dim());
        self.axes = Some(bases.into_iter().map(Axis::Basis).collect());
        Ok(self)
    }

    pub fn with_state(mut self, state: DensityOperator) -> Result<Self> {
        if let Some(d) = self.dim {
            same_dim(d, state.dim())?;
        }
        self.dim = Some(state.dim());
        self.state = Some(state);
        Ok(self)
    }

    /// Number of axes.
    pub fn k(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// Hilbert-space dimension, when known.
    pub fn dim(&self) -> Option<usize> {
        self.dim
    }

    pub fn axes(&self) -> Option<&[Axis]> {
        self.axes.as_deref()
    }

    pub fn state(&self) -> Option<&DensityOperator> {
        self.state.as_ref()
    }

    pub fn is_conditioned(&self) -> bool {
        self.postselection.is_some()
    }

    pub fn postselection_probability(&self) -> Option<f64> {
        self.postselection
    }

    pub fn get(&self, index: &[usize]) -> Option<C64> {
        if index.len() != self.k() || index.iter().zip(&self.shape).any(|(i, n)| i >= n) {
            return None;
        }
        let flat: usize = index.iter().zip(strides(&self.shape)).map(|(i, s)| i * s).sum();
        Some(self.values[flat])
    }

    pub fn sum(&self) -> C64 {
        self.values.iter().sum()
    }

    /// Two-axis distribution as a matrix (rows index axis 0).
    pub fn as_matrix(&self) -> Option<CMatrix> {
        (self.k() == 2).then(|| CMatrix::from_row_slice(self.shape[0], self.shape[1], &self.values))
    }
}

fn require_bases(bases: &[OrthonormalBasis], state: &DensityOperator) -> Result<()> {
    if bases.len() < 2 {
        return Err(Error::TooFewBases {
            min: 2,
            found: bases.len(),
        });
    }
    for b in bases {
        same_dim(state.dim(), b.dim())?;
    }
    Ok(())
}

/// Two-basis distribution `q[i][j] = <f_j|a_i><a_i|rho|f_j>`.
pub fn compute_kd(state: &DensityOperator, a: &OrthonormalBasis, f: &OrthonormalBasis) -> Result<KdDistribution> {
    compute_extended_kd(state, &[a.clone(), f.clone()])
}

/// Extended distribution over `k >= 2` bases, axis `n` indexing `bases[n]`.
pub fn compute_extended_kd(state: &DensityOperator, bases: &[OrthonormalBasis]) -> Result<KdDistribution> {
    require_bases(bases, state)?;
    let d = state.dim();
    let k = bases.len();
    // transitions[n][(r, c)] = <a^(n+1)_r | a^(n)_c>
    let transitions: Vec<CMatrix> = bases.windows(2).map(|w| w[1].gram(&w[0])).collect::<Result<_>>()?;
    // closing[(r, c)] = <a^(1)_r | rho | a^(k)_c>
    let closing = bases[0].unitary().adjoint() * state.matrix() * bases[k - 1].unitary();

    let shape = vec![d; k];
    let mut values = Vec::with_capacity(d.pow(k as u32));
    let mut index = vec![0usize; k];
    loop {
        let mut q = closing[(index[0], index[k - 1])];
        for (n, t) in transitions.iter().enumerate() {
            q *= t[(index[n + 1], index[n])];
        }
        values.push(q);
        if !next_index(&mut index, &shape) {
            break;
        }
    }
    Ok(KdDistribution {
        shape,
        values,
        dim: Some(d),
        axes: Some(bases.iter().cloned().map(Axis::Basis).collect()),
        state: Some(state.clone()),
        postselection: None,
    })
}

/// Sums over every axis except `keep = (alpha, beta)`, `alpha < beta`.
pub fn marginalize(dist: &KdDistribution, keep: (usize, usize)) -> Result<KdDistribution> {
    let (alpha, beta) = keep;
    let k = dist.k();
    if alpha >= beta || beta >= k {
        return Err(Error::InvalidAxes(format!(
            "cannot keep axes ({alpha}, {beta}) of a {k}-axis distribution"
        )));
    }
    if k == 2 {
        return Ok(dist.clone());
    }
    let (na, nb) = (dist.shape[alpha], dist.shape[beta]);
    let mut values = vec![C64::new(0.0, 0.0); na * nb];
    let mut index = vec![0usize; k];
    for q in &dist.values {
        values[index[alpha] * nb + index[beta]] += q;
        next_index(&mut index, &dist.shape);
    }
    Ok(KdDistribution {
        shape: vec![na, nb],
        values,
        dim: dist.dim,
        axes: dist
            .axes
            .as_ref()
            .map(|axes| vec![axes[alpha].clone(), axes[beta].clone()]),
        state: dist.state.clone(),
        postselection: dist.postselection,
    })
}

/// Outcome probabilities of the first or last axis (sums over all other axes).
pub fn marginal_probabilities(dist: &KdDistribution, axis: usize) -> Result<Vec<f64>> {
    let k = dist.k();
    if axis >= k {
        return Err(Error::InvalidAxes(format!("axis {axis} of {k}")));
    }
    if axis != 0 && axis != k - 1 {
        return Err(Error::InteriorAxis(axis));
    }
    let mut sums = vec![C64::new(0.0, 0.0); dist.shape[axis]];
    let mut index = vec![0usize; k];
    for q in &dist.values {
        sums[index[axis]] += q;
        next_index(&mut index, &dist.shape);
    }
    let mut probs = Vec::with_capacity(sums.len());
    for s in sums {
        if s.im.abs() > tol::DISTRIBUTION || s.re < -tol::DISTRIBUTION {
            return Err(Error::Inconsistent(format!(
                "marginal {} + {}i is not a probability",
                s.re, s.im
            )));
        }
        probs.push(s.re);
    }
    Ok(probs)
}

/// Output of [`reconstruct_state`].
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub state: DensityOperator,
    /// Cells `(i, j)` with `<a^(k)_j|a^(1)_i> = 0`, where the ratio
    /// `q / overlap` is replaced by `<a^(1)_i|rho|a^(k)_j>`.
    pub convention_cells: Vec<(usize, usize)>,
    /// `false` if no state was attached, so convention cells contributed
    /// nothing.
    pub convention_resolved: bool,
}

/// Rebuilds `rho = sum_ij |a_i><f_j| q_ij / <f_j|a_i>` from the
/// (first, last) marginal. Zero-overlap cells use `<a_i|rho|f_j>` from the
/// attached state; without one they are dropped and reported.
pub fn reconstruct_state(dist: &KdDistribution) -> Result<Reconstruction> {
    reconstruct_state_with(dist, tol::ZERO)
}

pub fn reconstruct_state_with(dist: &KdDistribution, zero_tol: f64) -> Result<Reconstruction> {
    if dist.is_conditioned() {
        return Err(Error::Conditioned);
    }
    let axes = dist.axes().ok_or(Error::MissingProvenance("bases"))?;
    let (first, last) = match (&axes[0], &axes[axes.len() - 1]) {
        (Axis::Basis(a), Axis::Basis(f)) => (a, f),
        _ => {
            return Err(Error::InvalidAxes(
                "reconstruction needs fine-grained first and last axes".into(),
            ))
        }
    };
    let table = marginalize(dist, (0, dist.k() - 1))?;
    let d = first.dim();
    let overlaps = last.gram(first)?; // (j, i) -> <f_j|a_i>
    let mut rho = CMatrix::zeros(d, d);
    let mut convention_cells = Vec::new();
    for i in 0..d {
        let a_i = first.vectors()[i].as_vector();
        for j in 0..d {
            let f_j = last.vectors()[j].as_vector();
            let overlap = overlaps[(j, i)];
            let coefficient = if overlap.norm() <= zero_tol {
                convention_cells.push((i, j));
                match dist.state() {
                    Some(state) => a_i.dotc(&(state.matrix() * f_j)),
                    None => continue,
                }
            } else {
                table.values[i * d + j] / overlap
            };
            rho += (a_i * f_j.adjoint()) * coefficient;
        }
    }
    let convention_resolved = convention_cells.is_empty() || dist.state().is_some();
    // round-off only; the result must still pass the density-operator checks
    let rho = (&rho + rho.adjoint()).scale(0.5);
    Ok(Reconstruction {
        state: DensityOperator::new(rho)?,
        convention_cells,
        convention_resolved,
    })
}

/// Conditions on the outcome set `F` of the last axis:
/// entries `sum_{i_k in F} q / p(F)` with `p(F) = Tr(F rho)`.
pub fn condition_on(dist: &KdDistribution, outcome: &PostselectionOutcome) -> Result<KdDistribution> {
    condition_on_with(dist, outcome, tol::ZERO)
}

pub fn condition_on_with(
    dist: &KdDistribution,
    outcome: &PostselectionOutcome,
    zero_tol: f64,
) -> Result<KdDistribution> {
    let k = dist.k();
    if dist.is_conditioned() {
        return Err(Error::InvalidOutcome("distribution is already conditioned".into()));
    }
    if outcome.axis != k - 1 {
        return Err(Error::InvalidOutcome(format!(
            "conditioning is defined on the last axis ({}), not axis {}",
            k - 1,
            outcome.axis
        )));
    }
    let n_last = dist.shape[k - 1];
    if outcome.indices.is_empty() {
        return Err(Error::InvalidOutcome("empty outcome set".into()));
    }
    let mut selected = vec![false; n_last];
    for &i in &outcome.indices {
        if i >= n_last {
            return Err(Error::IndexOutOfRange { index: i, len: n_last });
        }
        selected[i] = true;
    }

    let rest: usize = dist.shape[..k - 1].iter().product();
    let mut numerators = vec![C64::new(0.0, 0.0); rest];
    for (r, row) in dist.values.chunks(n_last).enumerate() {
        numerators[r] = row.iter().zip(&selected).filter(|(_, &s)| s).map(|(q, _)| q).sum();
    }
    let p_sum: C64 = numerators.iter().sum();
    if p_sum.re <= zero_tol {
        return Err(Error::VanishingPostselection(p_sum.re));
    }
    if p_sum.im.abs() > tol::DISTRIBUTION {
        return Err(Error::Inconsistent(format!(
            "postselection probability has imaginary part {}",
            p_sum.im
        )));
    }
    if let (Some(state), Some(axes)) = (dist.state(), dist.axes()) {
        let projector = axes[k - 1].projector_onto(&outcome.indices)?;
        let trace = (projector * state.matrix()).trace();
        if (trace - p_sum).norm() > tol::DISTRIBUTION {
            return Err(Error::InconsistentPostselection {
                sum: p_sum.re,
                trace: trace.re,
            });
        }
    }
    let p = p_sum.re;
    Ok(KdDistribution {
        shape: dist.shape[..k - 1].to_vec(),
        values: numerators.into_iter().map(|q| q / p).collect(),
        dim: dist.dim,
        axes: dist.axes.as_ref().map(|a| a[..k - 1].to_vec()),
        state: dist.state.clone(),
        postselection: Some(p),
    })
}

fn coarse_from_fine(
    fine: &KdDistribution,
    rows: Option<&EigenspacePartition>,
    cols: &EigenspacePartition,
) -> KdDistribution {
    let d = fine.shape[0];
    let row_owner: Vec<usize> = match rows {
        Some(p) => p.block_of(),
        None => (0..d).collect(),
    };
    let col_owner = cols.block_of();
    let n_rows = rows.map_or(d, EigenspacePartition::len);
    let n_cols = cols.len();
    let mut values = vec![C64::new(0.0, 0.0); n_rows * n_cols];
    for i in 0..d {
        for j in 0..d {
            values[row_owner[i] * n_cols + col_owner[j]] += fine.values[i * d + j];
        }
    }
    KdDistribution {
        shape: vec![n_rows, n_cols],
        values,
        dim: fine.dim,
        axes: None,
        state: fine.state.clone(),
        postselection: None,
    }
}

fn check_partition(partition: &EigenspacePartition, basis: &OrthonormalBasis) -> Result<()> {
    same_dim(basis.dim(), partition.dim())
}

/// Coarse-grained distribution `Q[l][m] = Tr(F_m A_l rho)` over eigenspace
/// blocks of both bases.
pub fn coarse_grain(
    state: &DensityOperator,
    part_a: &EigenspacePartition,
    part_f: &EigenspacePartition,
    basis_a: &OrthonormalBasis,
    basis_f: &OrthonormalBasis,
) -> Result<KdDistribution> {
    check_partition(part_a, basis_a)?;
    check_partition(part_f, basis_f)?;
    let fine = compute_kd(state, basis_a, basis_f)?;
    let mut dist = coarse_from_fine(&fine, Some(part_a), part_f);
    dist.axes = Some(vec![
        Axis::Coarse {
            basis: basis_a.clone(),
            partition: part_a.clone(),
        },
        Axis::Coarse {
            basis: basis_f.clone(),
            partition: part_f.clone(),
        },
    ]);
    Ok(dist)
}

/// Distribution `Q[i][m] = Tr(F_m |a_i><a_i| rho)`, coarse only on `F`.
pub fn one_sided_coarse_grain(
    state: &DensityOperator,
    a: &OrthonormalBasis,
    part_f: &EigenspacePartition,
    basis_f: &OrthonormalBasis,
) -> Result<KdDistribution> {
    check_partition(part_f, basis_f)?;
    let fine = compute_kd(state, a, basis_f)?;
    let mut dist = coarse_from_fine(&fine, None, part_f);
    dist.axes = Some(vec![
        Axis::Basis(a.clone()),
        Axis::Coarse {
            basis: basis_f.clone(),
            partition: part_f.clone(),
        },
    ]);
    Ok(dist)
}

impl core::fmt::Display for KdDistribution {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "KD{:?}", self.shape)?;
        if let Some(p) = self.postselection {
            write!(f, " | p = {p}")?;
        }
        Ok(())
    }
}
