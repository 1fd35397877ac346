//! JSON wire formats.
//!
//! A complex scalar is `[re, im]`; a ket is `{"dim", "amplitudes"}`; a
//! matrix is row-major nested arrays of complex scalars. Floats are written
//! with 17 significant digits so identical inputs give byte-identical output.

use std::io;

use kdq_core::classicality::{CommutationReport, SupportCounts, Verdict};
use kdq_core::measures::NonclassicalityReport;
use kdq_core::oracle::ScanResult;
use kdq_core::witness::WitnessEigenpairs;
use kdq_core::{
    CMatrix, DensityOperator, EigenspacePartition, Error, KdDistribution, Ket, Observable, OrthonormalBasis, C64,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub type Complex = [f64; 2];

pub fn complex(z: C64) -> Complex {
    [z.re, z.im]
}

pub fn from_complex(c: Complex) -> C64 {
    C64::new(c[0], c[1])
}

/// `serde_json` formatter writing every float as `{:.16e}`.
struct Sig17;

impl serde_json::ser::Formatter for Sig17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Compact JSON with 17-significant-digit floats. Non-finite floats become
/// `null`.
pub fn to_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17);
    value.serialize(&mut ser).expect("serializing to memory cannot fail");
    String::from_utf8(out).expect("serde_json writes UTF-8")
}

/// `{:.16e}` for CSV cells; `nan`/`inf` are spelled out.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn matrix(m: &CMatrix) -> Vec<Vec<Complex>> {
    m.row_iter().map(|r| r.iter().map(|z| complex(*z)).collect()).collect()
}

fn from_matrix(dim: usize, rows: &[Vec<Complex>]) -> Result<CMatrix, Error> {
    if rows.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: rows.len(),
        });
    }
    if let Some(r) = rows.iter().find(|r| r.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: r.len(),
        });
    }
    Ok(CMatrix::from_fn(dim, dim, |r, c| from_complex(rows[r][c])))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KetJson {
    pub dim: usize,
    pub amplitudes: Vec<Complex>,
}

impl KetJson {
    pub fn new(ket: &Ket) -> Self {
        KetJson {
            dim: ket.dim(),
            amplitudes: ket.amplitudes().iter().map(|z| complex(*z)).collect(),
        }
    }

    pub fn to_ket(&self) -> Result<Ket, Error> {
        if self.amplitudes.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: self.amplitudes.len(),
            });
        }
        Ket::new(self.amplitudes.iter().map(|c| from_complex(*c)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityJson {
    pub dim: usize,
    pub matrix: Vec<Vec<Complex>>,
}

impl DensityJson {
    pub fn new(rho: &DensityOperator) -> Self {
        DensityJson {
            dim: rho.dim(),
            matrix: matrix(rho.matrix()),
        }
    }

    pub fn to_state(&self) -> Result<DensityOperator, Error> {
        DensityOperator::new(from_matrix(self.dim, &self.matrix)?)
    }
}

/// A state file holds either a ket or a density matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateJson {
    Pure(KetJson),
    Mixed(DensityJson),
}

impl StateJson {
    pub fn to_state(&self) -> Result<DensityOperator, Error> {
        match self {
            StateJson::Pure(k) => Ok(k.to_ket()?.density()),
            StateJson::Mixed(m) => m.to_state(),
        }
    }
}

/// A basis, optionally with the eigenvalues of the observable it
/// diagonalizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisJson {
    pub dim: usize,
    pub vectors: Vec<KetJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenvalues: Option<Vec<f64>>,
}

impl BasisJson {
    pub fn new(basis: &OrthonormalBasis) -> Self {
        BasisJson {
            dim: basis.dim(),
            vectors: basis.vectors().iter().map(KetJson::new).collect(),
            eigenvalues: None,
        }
    }

    pub fn with_observable(obs: &Observable) -> Self {
        BasisJson {
            eigenvalues: Some(obs.eigenvalues().to_vec()),
            ..Self::new(obs.basis())
        }
    }

    pub fn to_basis(&self) -> Result<OrthonormalBasis, Error> {
        if self.vectors.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: self.vectors.len(),
            });
        }
        let kets = self
            .vectors
            .iter()
            .map(KetJson::to_ket)
            .collect::<Result<Vec<_>, _>>()?;
        for k in &kets {
            if k.dim() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: k.dim(),
                });
            }
        }
        OrthonormalBasis::new(kets)
    }

    /// The observable with the stored eigenvalues, or eigenvalues
    /// `0, 1, ..., d-1` if none are given.
    pub fn to_observable(&self) -> Result<Observable, Error> {
        let basis = self.to_basis()?;
        match &self.eigenvalues {
            Some(e) => Observable::new(basis, e.clone()),
            None => Ok(Observable::nondegenerate(basis)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionJson {
    pub dim: usize,
    pub blocks: Vec<Vec<usize>>,
    pub labels: Vec<f64>,
}

impl PartitionJson {
    pub fn new(p: &EigenspacePartition) -> Self {
        PartitionJson {
            dim: p.dim(),
            blocks: p.blocks().to_vec(),
            labels: p.labels().to_vec(),
        }
    }

    pub fn to_partition(&self) -> Result<EigenspacePartition, Error> {
        EigenspacePartition::new(self.dim, self.blocks.clone(), self.labels.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionJson {
    pub k: usize,
    pub shape: Vec<usize>,
    /// Nested `k` deep, last axis innermost.
    pub values: Value,
    pub conditioned: bool,
    pub postselection_probability: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
}

fn nest(values: &[C64], shape: &[usize]) -> Value {
    match shape {
        [] => Value::Null,
        [_] => Value::Array(values.iter().map(|z| serde_json::json!(complex(*z))).collect()),
        [_, rest @ ..] => {
            let stride: usize = rest.iter().product();
            Value::Array(values.chunks(stride).map(|c| nest(c, rest)).collect())
        }
    }
}

fn flatten(value: &Value, shape: &[usize], out: &mut Vec<C64>) -> Result<(), String> {
    let items = value.as_array().ok_or("expected an array")?;
    if items.len() != shape[0] {
        return Err(format!("axis of length {} where shape says {}", items.len(), shape[0]));
    }
    for item in items {
        if shape.len() == 1 {
            let c: Complex = serde_json::from_value(item.clone()).map_err(|e| e.to_string())?;
            out.push(from_complex(c));
        } else {
            flatten(item, &shape[1..], out)?;
        }
    }
    Ok(())
}

impl DistributionJson {
    pub fn new(dist: &KdDistribution) -> Self {
        DistributionJson {
            k: dist.k(),
            shape: dist.shape().to_vec(),
            values: nest(dist.values(), dist.shape()),
            conditioned: dist.is_conditioned(),
            postselection_probability: dist.postselection_probability(),
            dim: dist.dim(),
        }
    }

    /// Flat row-major values. A malformed nesting is a parse error.
    pub fn flat_values(&self) -> Result<Vec<C64>, String> {
        if self.shape.len() != self.k || self.k == 0 {
            return Err(format!("k = {} but shape has {} axes", self.k, self.shape.len()));
        }
        let mut out = Vec::new();
        flatten(&self.values, &self.shape, &mut out)?;
        Ok(out)
    }

    /// Rebuilds the distribution and checks its invariants.
    pub fn to_distribution(&self, values: Vec<C64>) -> Result<KdDistribution, Error> {
        let post = match (self.conditioned, self.postselection_probability) {
            (true, Some(p)) => Some(p),
            (true, None) => return Err(Error::MissingProvenance("postselection_probability")),
            (false, _) => None,
        };
        KdDistribution::from_values(self.shape.clone(), values, self.dim, post)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub total: f64,
    pub negativity: f64,
    pub imaginarity: f64,
    pub bound: Option<f64>,
    pub saturates_bound: bool,
}

impl ReportJson {
    pub fn new(r: &NonclassicalityReport) -> Self {
        ReportJson {
            total: r.total,
            negativity: r.negativity,
            imaginarity: r.imaginarity,
            bound: r.bound,
            saturates_bound: r.saturates_bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountsJson {
    pub d: usize,
    pub n_a: usize,
    pub n_f: usize,
    pub n_par: usize,
    pub n_bar_par: usize,
    pub coarse: bool,
    /// `2 N_A + 2 N_F`.
    pub lhs: i64,
    /// `3 d + n_par - 3 n_bar_par`.
    pub rhs: i64,
    pub saturated: bool,
}

impl CountsJson {
    pub fn new(c: &SupportCounts) -> Self {
        CountsJson {
            d: c.d,
            n_a: c.n_a,
            n_f: c.n_f,
            n_par: c.n_par,
            n_bar_par: c.n_bar_par,
            coarse: c.coarse,
            lhs: c.lhs(),
            rhs: c.rhs(),
            saturated: c.is_saturated(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub label: String,
    pub max_negative_real: f64,
    pub max_abs_imag: f64,
    pub zero_count: usize,
}

impl VerdictJson {
    pub fn new(v: &Verdict) -> Self {
        VerdictJson {
            label: v.label.as_str().to_owned(),
            max_negative_real: v.max_negative_real,
            max_abs_imag: v.max_abs_imag,
            zero_count: v.zero_count,
        }
    }
}

/// `true` means the commutator vanishes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutatorsJson {
    pub state_a_vanishes: bool,
    pub state_f_vanishes: bool,
    pub a_f_vanishes: bool,
}

impl CommutatorsJson {
    pub fn new(r: &CommutationReport) -> Self {
        CommutatorsJson {
            state_a_vanishes: r.state_a,
            state_f_vanishes: r.state_f,
            a_f_vanishes: r.a_f,
        }
    }
}

/// Output of `kdq check`. `counts`, `thm1` and `corollary1` are `null` when
/// their hypotheses (a pure state; for the coarse corollary, one
/// nondegenerate side) do not hold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckJson {
    pub verdict: VerdictJson,
    pub counts: Option<CountsJson>,
    pub thm1: Option<bool>,
    pub corollary1: Option<bool>,
    pub commutators: CommutatorsJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub kind: String,
    pub operator: Vec<Vec<Complex>>,
    /// `[lambda+, lambda-]`.
    pub eigenvalues: [f64; 2],
    pub eigenvectors: [KetJson; 2],
    pub residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tailored: Option<KetJson>,
}

impl WitnessJson {
    pub fn new(w: &WitnessEigenpairs, tailored: Option<&Ket>) -> Self {
        WitnessJson {
            kind: w.kind.letter().to_owned(),
            operator: matrix(&w.operator),
            eigenvalues: [w.eigenvalues.0, w.eigenvalues.1],
            eigenvectors: [KetJson::new(&w.eigenvectors.0), KetJson::new(&w.eigenvectors.1)],
            residual: w.residual(),
            tailored: tailored.map(KetJson::new),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MubJson {
    pub family: String,
    pub dim: usize,
    pub real: bool,
    pub bases: Vec<BasisJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionJson {
    pub dim: usize,
    pub matrix: Vec<Vec<Complex>>,
    pub convention_cells: Vec<[usize; 2]>,
    pub convention_resolved: bool,
}

impl ReconstructionJson {
    pub fn new(r: &kdq_core::kd::Reconstruction) -> Self {
        ReconstructionJson {
            dim: r.state.dim(),
            matrix: matrix(r.state.matrix()),
            convention_cells: r.convention_cells.iter().map(|&(i, j)| [i, j]).collect(),
            convention_resolved: r.convention_resolved,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepJson {
    pub p_values: Vec<f64>,
    pub reports: Vec<ReportJson>,
    pub negativity_threshold: Option<f64>,
}

/// A pure-state instance `(psi, A, F)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceJson {
    pub psi: KetJson,
    pub a: BasisJson,
    pub f: BasisJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanJson {
    pub what: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub samples: u64,
    /// `null` when no sample reported a value.
    pub max_observed: Option<f64>,
    pub violations: u64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instances: Option<Vec<InstanceJson>>,
}

impl ScanJson {
    pub fn new(what: &str, dim: usize, k: Option<usize>, r: &ScanResult) -> Self {
        ScanJson {
            what: what.to_owned(),
            dim,
            k,
            samples: r.samples,
            max_observed: finite(r.max_observed),
            violations: r.violations,
            seed: r.seed,
            instances: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorJson {
    pub error: String,
    pub message: String,
}
