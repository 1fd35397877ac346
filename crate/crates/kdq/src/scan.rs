//! The randomized scans behind `kdq scan`.

use clap::ValueEnum;
use kdq_core::oracle::{self, ClassicalInstance, ScanResult};
use rayon::prelude::*;

use crate::json::{BasisJson, InstanceJson, KetJson, ScanJson};
use crate::parallel::par_scan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanKind {
    /// Total nonclassicality against `d^((k-1)/2) - 1`.
    Bound,
    /// Sets in `C^n` (`n = --dim`) with pairwise nonpositive inner products.
    Nonpositive,
    /// Classical distributions of pairwise noncommuting state and observables.
    ClassicalNoncommuting,
    /// Support-count certificate and zero-free certificate soundness.
    Support,
    /// The same for coarse-grained distributions with random partitions.
    CoarseSupport,
    /// State reconstruction round trip.
    Reconstruction,
    /// `sum_i |<b_i|psi>| <= sqrt d`.
    Jensen,
    /// Trace evaluation against the overlap formula.
    Agreement,
    /// Postselected distributions with entries beyond 1.
    Amplification,
}

impl ScanKind {
    pub fn name(self) -> &'static str {
        match self {
            ScanKind::Bound => "bound",
            ScanKind::Nonpositive => "nonpositive",
            ScanKind::ClassicalNoncommuting => "classical-noncommuting",
            ScanKind::Support => "support",
            ScanKind::CoarseSupport => "coarse-support",
            ScanKind::Reconstruction => "reconstruction",
            ScanKind::Jensen => "jensen",
            ScanKind::Agreement => "agreement",
            ScanKind::Amplification => "amplification",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ScanRequest {
    pub kind: ScanKind,
    pub dim: usize,
    pub k: usize,
    pub samples: u64,
    pub seed: u64,
    /// For `bound`: add the bound-reaching MUB instance as one more sample.
    pub inject: bool,
}

fn instance_json(inst: &ClassicalInstance) -> InstanceJson {
    InstanceJson {
        psi: KetJson::new(&inst.psi),
        a: BasisJson::with_observable(&inst.a),
        f: BasisJson::with_observable(&inst.f),
        outcome: None,
    }
}

/// Runs the scan on the current rayon pool.
pub fn run_scan(req: &ScanRequest) -> kdq_core::Result<ScanJson> {
    let ScanRequest {
        kind,
        dim: d,
        k,
        samples,
        seed,
        inject,
    } = *req;
    let with_k = |r: &ScanResult| ScanJson::new(kind.name(), d, Some(k), r);
    let plain = |r: &ScanResult| ScanJson::new(kind.name(), d, None, r);
    Ok(match kind {
        ScanKind::Bound => {
            let mut r = par_scan(samples, seed, |i| oracle::bound_sample(d, k, seed, i))?;
            if inject {
                r.push(oracle::injected_instance(d, k)?);
            }
            with_k(&r)
        }
        ScanKind::Nonpositive => plain(&par_scan(samples, seed, |i| oracle::nonpositive_sample(d, seed, i))?),
        ScanKind::Support => plain(&par_scan(samples, seed, |i| oracle::support_sample(d, seed, i))?),
        ScanKind::CoarseSupport => plain(&par_scan(samples, seed, |i| oracle::coarse_support_sample(d, seed, i))?),
        ScanKind::Reconstruction => plain(&par_scan(samples, seed, |i| oracle::reconstruction_sample(d, seed, i))?),
        ScanKind::Jensen => plain(&par_scan(samples, seed, |i| oracle::jensen_sample(d, seed, i))?),
        ScanKind::Agreement => with_k(&par_scan(samples, seed, |i| oracle::agreement_sample(d, k, seed, i))?),
        ScanKind::ClassicalNoncommuting => {
            // candidates are verified in parallel, then kept in index order
            let mut found: Vec<ClassicalInstance> = Vec::new();
            if d == 4 {
                found = oracle::classical_noncommuting_search(4, 0, seed)?;
            }
            let verified: Vec<Option<ClassicalInstance>> = (0..samples)
                .into_par_iter()
                .map(|i| {
                    let c = oracle::classical_candidate(d, seed, i)?;
                    Ok(c.verify()?.then_some(c))
                })
                .collect::<kdq_core::Result<_>>()?;
            found.extend(verified.into_iter().flatten());
            let r = ScanResult {
                samples,
                max_observed: found.len() as f64,
                violations: 0,
                seed,
            };
            ScanJson {
                instances: Some(found.iter().map(instance_json).collect()),
                ..plain(&r)
            }
        }
        ScanKind::Amplification => {
            let inst = oracle::amplification_search(d, samples, seed)?;
            let r = ScanResult {
                samples,
                max_observed: inst.max_abs,
                violations: 0,
                seed,
            };
            ScanJson {
                instances: Some(vec![InstanceJson {
                    psi: KetJson::new(&inst.psi),
                    a: BasisJson::new(&inst.a),
                    f: BasisJson::new(&inst.f),
                    outcome: Some(inst.outcome.indices.clone()),
                }]),
                ..plain(&r)
            }
        }
    })
}
