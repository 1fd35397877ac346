//! `kdq` command-line interface.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use kdq_core::channels::depolarization_sweep;
use kdq_core::classicality::{
    certifies_nonclassical, classify_with, coarse_certifies_nonclassical, coarse_support_counts_with,
    coarse_zero_free_certifies, commutation_report, support_counts_of_state, zero_free_certifies_with,
};
use kdq_core::kd::{
    coarse_grain, compute_extended_kd, condition_on_with, marginalize, one_sided_coarse_grain, reconstruct_state_with,
};
use kdq_core::measures::nonclassicality_measures;
use kdq_core::mubs::{chirp_mub_triplet, fourier_basis, pauli_mub_triplet, real_mub_triplet_d4, MubFamily};
use kdq_core::witness::{coarse_imag_witness, coarse_real_witness, imag_witness, real_witness, tailor_state};
use kdq_core::{DensityOperator, EigenspacePartition, Error, KdDistribution, Observable, OrthonormalBasis};
use kdq_core::{PostselectionOutcome, C64};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::CliError;
use crate::json::{
    self, BasisJson, CheckJson, CommutatorsJson, CountsJson, DistributionJson, KetJson, MubJson, PartitionJson,
    ReconstructionJson, ReportJson, StateJson, SweepJson, VerdictJson, WitnessJson,
};
use crate::scan::{run_scan, ScanKind, ScanRequest};

#[derive(Debug, Parser)]
#[command(name = "kdq", version, about = "Kirkwood-Dirac quasiprobability distributions")]
pub struct Cli {
    /// Magnitude at or below which a number counts as zero.
    #[arg(long, global = true, default_value_t = kdq_core::tol::ZERO)]
    pub tol_zero: f64,
    /// Master seed for randomized scans.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output format; CSV is available for `sweep` (its default) and `scan`.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the result here instead of standard output.
    #[arg(short = 'o', long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Computational and Fourier bases, any `d`.
    Fourier,
    /// The three Pauli eigenbases, `d = 2`.
    Pauli,
    /// Three real bases at `d = 4`.
    Real4,
    /// Computational, Fourier and a quadratic-phase basis, odd prime `d`.
    Chirp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WitnessLetter {
    /// Imaginary part of a single entry.
    H,
    /// Real part of a single entry.
    G,
    /// Imaginary part of an entry with a coarse `F` block.
    R,
    /// Real part of an entry with a coarse `F` block.
    S,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// KD distribution of a state over two or more bases.
    Compute {
        #[arg(long)]
        state: PathBuf,
        /// Basis files in the order their projectors act on the state.
        #[arg(long = "basis", required = true)]
        bases: Vec<PathBuf>,
        /// One partition (of the last basis) or two (first, last).
        #[arg(long, num_args = 1..=2)]
        coarse: Vec<PathBuf>,
    },
    /// Classification, support counts and certificates for a state and two bases.
    Check {
        #[arg(long)]
        state: PathBuf,
        #[arg(long = "basis", required = true)]
        bases: Vec<PathBuf>,
        /// Partitions of the two bases.
        #[arg(long, num_args = 2)]
        coarse: Vec<PathBuf>,
    },
    /// Nonclassicality measures of a distribution.
    Measures {
        #[arg(long)]
        dist: PathBuf,
    },
    /// Mutually unbiased bases.
    Mub {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        dim: Option<usize>,
        /// Also write each basis to `<dir>/basis_<n>.json`.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Witness operator for one entry, with its nonzero eigenpairs.
    Witness {
        #[arg(long, value_enum, ignore_case = true)]
        kind: WitnessLetter,
        /// Ket file for the `A` vector.
        #[arg(long)]
        a: PathBuf,
        /// Ket file (H, G) or basis file (R, S).
        #[arg(long)]
        f: PathBuf,
        /// Indices of the `F` block, for R and S.
        #[arg(long, value_delimiter = ',')]
        block: Vec<usize>,
        /// Also return a state whose half-expectation equals this value.
        #[arg(long, allow_hyphen_values = true)]
        target: Option<f64>,
    },
    /// Measures along depolarization `p rho + (1 - p) 1/d`.
    Sweep {
        #[arg(long)]
        state: PathBuf,
        #[arg(long = "basis", num_args = 1, required = true)]
        bases: Vec<PathBuf>,
        /// `start:stop:step` (inclusive) or a comma-separated list.
        #[arg(long, default_value = "0:1:0.01")]
        p: String,
    },
    /// Condition a distribution on outcomes of its last axis.
    Condition {
        #[arg(long)]
        dist: PathBuf,
        /// Selected indices of the last axis.
        #[arg(long, value_delimiter = ',', required = true)]
        outcome: Vec<usize>,
        /// With `--basis` for every axis: cross-check the probability by trace.
        #[arg(long)]
        state: Option<PathBuf>,
        #[arg(long = "basis")]
        bases: Vec<PathBuf>,
    },
    /// Randomized falsification scans.
    Scan {
        #[arg(long, value_enum)]
        what: ScanKind,
        /// Dimension (vector length `n` for `nonpositive`).
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        /// For `bound`: include the bound-reaching MUB instance.
        #[arg(long)]
        inject: bool,
    },
    /// Rebuild the density matrix from a distribution.
    Reconstruct {
        #[arg(long)]
        dist: PathBuf,
        /// First and last bases of the distribution.
        #[arg(long = "basis", num_args = 1, required = true)]
        bases: Vec<PathBuf>,
        /// Supplies matrix elements for cells whose overlap vanishes.
        #[arg(long)]
        state: Option<PathBuf>,
    },
}

fn read<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::parse(path, e))
}

fn read_state(path: &Path) -> Result<DensityOperator, CliError> {
    Ok(read::<StateJson>(path)?.to_state()?)
}

fn read_bases(paths: &[PathBuf]) -> Result<Vec<OrthonormalBasis>, CliError> {
    paths.iter().map(|p| Ok(read::<BasisJson>(p)?.to_basis()?)).collect()
}

fn read_observables(paths: &[PathBuf]) -> Result<Vec<Observable>, CliError> {
    paths
        .iter()
        .map(|p| Ok(read::<BasisJson>(p)?.to_observable()?))
        .collect()
}

fn read_partition(path: &Path) -> Result<EigenspacePartition, CliError> {
    Ok(read::<PartitionJson>(path)?.to_partition()?)
}

fn read_distribution(path: &Path) -> Result<KdDistribution, CliError> {
    let j: DistributionJson = read(path)?;
    let values = j.flat_values().map_err(|m| CliError::parse(path, m))?;
    Ok(j.to_distribution(values)?)
}

fn two<T>(items: Vec<T>, what: &str) -> Result<[T; 2], CliError> {
    let n = items.len();
    items
        .try_into()
        .map_err(|_| CliError::Usage(format!("expected exactly two {what}, got {n}")))
}

/// Observable whose eigenvalue at index `i` is the label of the block
/// containing `i`.
fn partition_observable(basis: &OrthonormalBasis, part: &EigenspacePartition) -> Result<Observable, Error> {
    let blocks = part.block_of();
    let eig = blocks.iter().map(|&b| part.labels()[b]).collect();
    Observable::new(basis.clone(), eig)
}

/// `start:stop:step` with `stop` included, or a comma-separated list.
pub fn parse_p_values(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("cannot parse p values {spec:?}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if step.is_nan() || step <= 0.0 || stop < start {
                return Err(bad());
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            let mut ps: Vec<f64> = (0..=n).map(|i| start + i as f64 * step).collect();
            if let Some(last) = ps.last_mut() {
                if (*last - stop).abs() < 1e-9 * step.max(1.0) {
                    *last = stop;
                }
            }
            Ok(ps)
        }
        [list] => list.split(',').map(num).collect(),
        _ => Err(bad()),
    }
}

/// What a command produced, before formatting.
pub enum Output {
    Json(String),
    Csv(String),
}

fn json_out<T: Serialize + ?Sized>(value: &T) -> Output {
    Output::Json(json::to_string(value))
}

fn csv_out(header: &[&str], rows: &[Vec<String>]) -> Result<Output, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Usage(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(Output::Csv(String::from_utf8(bytes).expect("CSV of ASCII fields")))
}

fn no_csv(cli: &Cli, command: &str) -> Result<(), CliError> {
    if cli.format == Some(Format::Csv) {
        return Err(CliError::Usage(format!("`{command}` produces JSON only")));
    }
    Ok(())
}

/// Runs one parsed command.
pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let tol = cli.tol_zero;
    if tol.is_nan() || tol <= 0.0 {
        return Err(CliError::Usage(format!("--tol-zero must be positive, got {tol}")));
    }
    match &cli.command {
        Command::Compute { state, bases, coarse } => {
            no_csv(cli, "compute")?;
            let rho = read_state(state)?;
            let bases = read_bases(bases)?;
            let dist = match coarse.len() {
                0 => compute_extended_kd(&rho, &bases)?,
                n => {
                    let [a, f] = two(bases, "bases with --coarse")?;
                    if n == 1 {
                        one_sided_coarse_grain(&rho, &a, &read_partition(&coarse[0])?, &f)?
                    } else {
                        coarse_grain(&rho, &read_partition(&coarse[0])?, &read_partition(&coarse[1])?, &a, &f)?
                    }
                }
            };
            Ok(json_out(&DistributionJson::new(&dist)))
        }

        Command::Check { state, bases, coarse } => {
            no_csv(cli, "check")?;
            let rho = read_state(state)?;
            let [a, f] = two(read_observables(bases)?, "bases")?;
            let pure = rho.is_pure(kdq_core::tol::NORM).then(|| rho.principal_ket());
            let out = if coarse.is_empty() {
                let dist = compute_extended_kd(&rho, &[a.basis().clone(), f.basis().clone()])?;
                let counts = match &pure {
                    Some(_) => Some(support_counts_of_state(&rho, a.basis(), f.basis(), tol)?),
                    None => None,
                };
                CheckJson {
                    verdict: VerdictJson::new(&classify_with(&dist, tol)),
                    thm1: counts.as_ref().map(certifies_nonclassical).transpose()?,
                    counts: counts.as_ref().map(CountsJson::new),
                    corollary1: pure
                        .as_ref()
                        .map(|_| zero_free_certifies_with(&dist, tol))
                        .transpose()?,
                    commutators: CommutatorsJson::new(&commutation_report(&rho, &a, &f)?),
                }
            } else {
                let part_a = read_partition(&coarse[0])?;
                let part_f = read_partition(&coarse[1])?;
                let dist = coarse_grain(&rho, &part_a, &part_f, a.basis(), f.basis())?;
                let counts = match &pure {
                    Some(psi) => Some(coarse_support_counts_with(
                        psi,
                        &part_a,
                        &part_f,
                        a.basis(),
                        f.basis(),
                        tol,
                    )?),
                    None => None,
                };
                // both certificates are statements about pure states
                let corollary = match (&pure, coarse_zero_free_certifies(&dist, &part_a, &part_f)) {
                    (None, _) | (_, Err(Error::HypothesesUnmet(_))) => None,
                    (Some(_), Ok(b)) => Some(b),
                    (Some(_), Err(e)) => return Err(e.into()),
                };
                let obs_a = partition_observable(a.basis(), &part_a)?;
                let obs_f = partition_observable(f.basis(), &part_f)?;
                CheckJson {
                    verdict: VerdictJson::new(&classify_with(&dist, tol)),
                    thm1: counts.as_ref().map(coarse_certifies_nonclassical).transpose()?,
                    counts: counts.as_ref().map(CountsJson::new),
                    corollary1: corollary,
                    commutators: CommutatorsJson::new(&commutation_report(&rho, &obs_a, &obs_f)?),
                }
            };
            Ok(json_out(&out))
        }

        Command::Measures { dist } => {
            no_csv(cli, "measures")?;
            let dist = read_distribution(dist)?;
            Ok(json_out(&ReportJson::new(&nonclassicality_measures(&dist)?)))
        }

        Command::Mub { family, dim, out_dir } => {
            no_csv(cli, "mub")?;
            let fixed = |d: usize| match dim {
                Some(n) if *n != d => Err(CliError::Usage(format!("this family exists only at d = {d}"))),
                _ => Ok(()),
            };
            let (name, fam) = match family {
                Family::Fourier => {
                    let d = dim.ok_or_else(|| CliError::Usage("--dim is required for fourier".into()))?;
                    let pair = vec![OrthonormalBasis::computational(d)?, fourier_basis(d)?];
                    ("fourier", MubFamily::new(pair)?)
                }
                Family::Pauli => {
                    fixed(2)?;
                    ("pauli", pauli_mub_triplet())
                }
                Family::Real4 => {
                    fixed(4)?;
                    ("real4", real_mub_triplet_d4())
                }
                Family::Chirp => {
                    let d = dim.ok_or_else(|| CliError::Usage("--dim is required for chirp".into()))?;
                    ("chirp", chirp_mub_triplet(d)?)
                }
            };
            let bases: Vec<BasisJson> = fam.bases().iter().map(BasisJson::new).collect();
            if let Some(dir) = out_dir {
                fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
                for (n, b) in bases.iter().enumerate() {
                    let path = dir.join(format!("basis_{n}.json"));
                    fs::write(&path, json::to_string(b) + "\n").map_err(|e| CliError::io(&path, e))?;
                }
            }
            Ok(json_out(&MubJson {
                family: name.to_owned(),
                dim: fam.dim(),
                real: fam.is_real(),
                bases,
            }))
        }

        Command::Witness {
            kind,
            a,
            f,
            block,
            target,
        } => {
            no_csv(cli, "witness")?;
            let a = read::<KetJson>(a)?.to_ket()?;
            let w = match kind {
                WitnessLetter::H | WitnessLetter::G => {
                    if !block.is_empty() {
                        return Err(CliError::Usage("--block applies to R and S only".into()));
                    }
                    let f = read::<KetJson>(f)?.to_ket()?;
                    if *kind == WitnessLetter::H {
                        imag_witness(&a, &f)?
                    } else {
                        real_witness(&a, &f)?
                    }
                }
                WitnessLetter::R | WitnessLetter::S => {
                    if block.is_empty() {
                        return Err(CliError::Usage("--block is required for R and S".into()));
                    }
                    let basis = read::<BasisJson>(f)?.to_basis()?;
                    let projector = kdq_core::Axis::Basis(basis).projector_onto(block)?;
                    if *kind == WitnessLetter::R {
                        coarse_imag_witness(&a, &projector)?
                    } else {
                        coarse_real_witness(&a, &projector)?
                    }
                }
            };
            let tailored = target.map(|t| tailor_state(&w, t)).transpose()?;
            Ok(json_out(&WitnessJson::new(&w, tailored.as_ref())))
        }

        Command::Sweep { state, bases, p } => {
            let rho = read_state(state)?;
            let [a, f] = two(read_bases(bases)?, "bases")?;
            let ps = parse_p_values(p)?;
            let sweep = depolarization_sweep(&rho, &a, &f, &ps)?;
            if cli.format == Some(Format::Json) {
                return Ok(json_out(&SweepJson {
                    p_values: sweep.p_values.clone(),
                    reports: sweep.reports.iter().map(ReportJson::new).collect(),
                    negativity_threshold: sweep.negativity_threshold,
                }));
            }
            let rows: Vec<Vec<String>> = sweep
                .p_values
                .iter()
                .zip(&sweep.reports)
                .map(|(p, r)| {
                    [*p, r.total, r.negativity, r.imaginarity]
                        .map(json::format_float)
                        .to_vec()
                })
                .collect();
            csv_out(&["p", "total", "negativity", "imaginarity"], &rows)
        }

        Command::Condition {
            dist,
            outcome,
            state,
            bases,
        } => {
            no_csv(cli, "condition")?;
            let mut d = read_distribution(dist)?;
            match (state, bases.is_empty()) {
                (Some(s), false) => {
                    d = d.with_bases(read_bases(bases)?)?.with_state(read_state(s)?)?;
                }
                (None, true) => {}
                _ => return Err(CliError::Usage("--state and --basis go together".into())),
            }
            let outcome = PostselectionOutcome::last_axis(d.k(), outcome.clone());
            Ok(json_out(&DistributionJson::new(&condition_on_with(&d, &outcome, tol)?)))
        }

        Command::Scan {
            what,
            dim,
            k,
            samples,
            inject,
        } => {
            let req = ScanRequest {
                kind: *what,
                dim: *dim,
                k: *k,
                samples: *samples,
                seed: cli.seed,
                inject: *inject,
            };
            let pool = crate::parallel::thread_pool()?;
            let result = pool.install(|| run_scan(&req))?;
            if cli.format == Some(Format::Csv) {
                let row = vec![
                    result.what.clone(),
                    result.dim.to_string(),
                    result.k.map(|k| k.to_string()).unwrap_or_default(),
                    result.samples.to_string(),
                    result.max_observed.map(json::format_float).unwrap_or_default(),
                    result.violations.to_string(),
                    result.seed.to_string(),
                ];
                return csv_out(
                    &["what", "dim", "k", "samples", "max_observed", "violations", "seed"],
                    &[row],
                );
            }
            Ok(json_out(&result))
        }

        Command::Reconstruct { dist, bases, state } => {
            no_csv(cli, "reconstruct")?;
            let d = read_distribution(dist)?;
            let [first, last] = two(read_bases(bases)?, "bases (first and last)")?;
            let ends = if d.k() == 2 {
                d
            } else {
                marginalize(&d, (0, d.k() - 1))?
            };
            let values: Vec<C64> = ends.values().to_vec();
            let mut ends = KdDistribution::from_values(ends.shape().to_vec(), values, ends.dim(), None)?
                .with_bases(vec![first, last])?;
            if let Some(s) = state {
                ends = ends.with_state(read_state(s)?)?;
            }
            Ok(json_out(&ReconstructionJson::new(&reconstruct_state_with(&ends, tol)?)))
        }
    }
}

fn emit(cli: &Cli, out: Output) -> Result<(), CliError> {
    let text = match out {
        Output::Json(s) => s + "\n",
        Output::Csv(s) => s,
    };
    match &cli.output {
        Some(path) => fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    }
}

/// Parses arguments, runs, and returns the process exit status. Errors are
/// reported on standard error as `{"error": kind, "message": ...}`.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli).and_then(|out| emit(&cli, out)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", json::to_string(&e.to_json()));
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_ranges() {
        let ps = parse_p_values("0:1:0.01").unwrap();
        assert_eq!(ps.len(), 101);
        assert_eq!(ps[0], 0.0);
        assert_eq!(ps[100], 1.0);
        assert_eq!(parse_p_values("0.5, 1").unwrap(), vec![0.5, 1.0]);
        assert_eq!(parse_p_values("0:1:0.3").unwrap().len(), 4);
        assert!(parse_p_values("0:1:0").is_err());
        assert!(parse_p_values("a").is_err());
    }

    #[test]
    fn parser_accepts_documented_forms() {
        Cli::try_parse_from([
            "kdq", "compute", "--state", "s", "--basis", "a", "--basis", "f", "-o", "x",
        ])
        .unwrap();
        Cli::try_parse_from([
            "kdq", "check", "--state", "s", "--basis", "a", "--basis", "f", "--coarse", "p", "q",
        ])
        .unwrap();
        Cli::try_parse_from([
            "kdq",
            "scan",
            "--what",
            "classical-noncommuting",
            "--dim",
            "4",
            "--seed",
            "3",
        ])
        .unwrap();
        Cli::try_parse_from([
            "kdq", "witness", "--kind", "G", "--a", "a", "--f", "f", "--target", "-0.1",
        ])
        .unwrap();
        Cli::try_parse_from(["kdq", "--tol-zero", "1e-8", "mub", "--family", "real4"]).unwrap();
        assert!(Cli::try_parse_from(["kdq", "frobnicate"]).is_err());
    }
}
