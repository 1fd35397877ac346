use std::path::Path;
use std::process::{Command, Output};

use kdq::json::{
    BasisJson, CheckJson, DistributionJson, ErrorJson, MubJson, ReconstructionJson, ReportJson, ScanJson, WitnessJson,
};
use kdq_core::kd::{coarse_grain, compute_kd, marginal_probabilities};
use kdq_core::oracle::kd_by_trace;
use kdq_core::{fixtures, Axis, EigenspacePartition, C64};

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn kdq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kdq")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = kdq(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn example_args<'a>(cmd: &'a str, ex: &str, extra: &[&'a str]) -> Vec<String> {
    let mut v: Vec<String> = vec![cmd.into()];
    for (flag, file) in [("--state", "state"), ("--basis", "a"), ("--basis", "f")] {
        v.push(flag.into());
        v.push(fixture(&format!("{ex}/{file}.json")));
    }
    v.extend(extra.iter().map(|s| s.to_string()));
    v
}

fn run_example(cmd: &str, ex: &str, extra: &[&str]) -> String {
    let args = example_args(cmd, ex, extra);
    ok(&args.iter().map(String::as_str).collect::<Vec<_>>())
}

fn values(dist: &DistributionJson) -> Vec<C64> {
    dist.flat_values().unwrap()
}

#[test]
fn compute_matches_direct_evaluation() {
    let cases = [
        ("classical-noncommuting", fixtures::classical_noncommuting()),
        ("saturating", fixtures::saturating_classical()),
        ("real-max-negative", fixtures::real_max_negative()),
        ("qubit-nonreal", fixtures::qubit_nonreal()),
    ];
    for (name, ex) in cases {
        let dist: DistributionJson = serde_json::from_str(&run_example("compute", name, &[])).unwrap();
        assert_eq!(dist.shape, vec![ex.a.dim(), ex.f.dim()]);
        let direct = compute_kd(&ex.state(), ex.a.basis(), ex.f.basis()).unwrap();
        for (x, y) in values(&dist).iter().zip(direct.values()) {
            assert!((x - y).norm() <= 1e-15);
        }
    }
}

#[test]
fn check_reports_counts_and_commutators() {
    let c1: CheckJson = serde_json::from_str(&run_example("check", "classical-noncommuting", &[])).unwrap();
    assert_eq!(c1.verdict.label, "Classical");
    assert_eq!(c1.thm1, Some(false));
    let counts = c1.counts.unwrap();
    assert_eq!((counts.lhs, counts.rhs), (8, 14));
    assert!(!c1.commutators.state_a_vanishes && !c1.commutators.state_f_vanishes && !c1.commutators.a_f_vanishes);

    let c2: CheckJson = serde_json::from_str(&run_example("check", "saturating", &[])).unwrap();
    let counts = c2.counts.unwrap();
    assert_eq!((counts.lhs, counts.rhs, counts.saturated), (12, 12, true));

    let c3: CheckJson = serde_json::from_str(&run_example("check", "real-max-negative", &[])).unwrap();
    assert_eq!(c3.thm1, Some(true));
    assert_eq!(c3.corollary1, Some(true));
    assert_eq!(c3.verdict.label, "Negative");
    assert!((c3.verdict.max_negative_real + 0.125).abs() < 1e-12);

    let c4: CheckJson = serde_json::from_str(&run_example("check", "qubit-nonreal", &[])).unwrap();
    assert_eq!(c4.verdict.label, "Nonreal");
    assert_eq!(c4.corollary1, Some(true));
}

#[test]
fn mixed_states_get_no_pure_state_certificates() {
    // maximally mixed on unbiased bases: every cell is 1/4, yet classical
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("mixed.json");
    std::fs::write(&state, r#"{"dim":2,"matrix":[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]}"#).unwrap();
    let (a, f) = (fixture("qubit-nonreal/a.json"), fixture("qubit-nonreal/f.json"));
    let out = ok(&[
        "check",
        "--state",
        state.to_str().unwrap(),
        "--basis",
        &a,
        "--basis",
        &f,
    ]);
    let c: CheckJson = serde_json::from_str(&out).unwrap();
    assert_eq!(c.verdict.label, "Classical");
    assert_eq!((c.thm1, c.corollary1), (None, None));
    assert!(c.counts.is_none());
}

#[test]
fn coarse_compute_and_check() {
    let a_part = fixture("saturating/a_singletons.json");
    let f_part = fixture("saturating/f_pairs.json");
    let two: DistributionJson =
        serde_json::from_str(&run_example("compute", "saturating", &["--coarse", &a_part, &f_part])).unwrap();
    let one: DistributionJson =
        serde_json::from_str(&run_example("compute", "saturating", &["--coarse", &f_part])).unwrap();
    assert_eq!(two.shape, vec![4, 2]);
    assert_eq!(values(&two), values(&one));

    let ex = fixtures::saturating_classical();
    let pairs = EigenspacePartition::new(4, vec![vec![0, 1], vec![2, 3]], vec![0.0, 1.0]).unwrap();
    let singles = EigenspacePartition::singletons(4).unwrap();
    let axes = [
        Axis::Coarse {
            basis: ex.a.basis().clone(),
            partition: singles.clone(),
        },
        Axis::Coarse {
            basis: ex.f.basis().clone(),
            partition: pairs.clone(),
        },
    ];
    for (x, y) in values(&two).iter().zip(kd_by_trace(&ex.state(), &axes).unwrap()) {
        assert!((x - y).norm() <= 1e-12);
    }
    let direct = coarse_grain(&ex.state(), &singles, &pairs, ex.a.basis(), ex.f.basis()).unwrap();
    assert_eq!(direct.values(), values(&two).as_slice());

    let check: CheckJson =
        serde_json::from_str(&run_example("check", "saturating", &["--coarse", &a_part, &f_part])).unwrap();
    let counts = check.counts.unwrap();
    assert!(counts.coarse);
    assert_eq!(check.verdict.label, "Classical");
    assert_eq!(check.thm1, Some(false));
}

#[test]
fn measures_of_examples() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.json");
    let p = path.to_str().unwrap();
    run_example("compute", "real-max-negative", &["-o", p]);
    let r: ReportJson = serde_json::from_str(&ok(&["measures", "--dist", p])).unwrap();
    assert!((r.total - 1.0).abs() < 1e-10 && (r.negativity - 1.0).abs() < 1e-10 && r.imaginarity.abs() < 1e-10);
    assert_eq!(r.bound, Some(1.0));
    assert!(r.saturates_bound);

    run_example("compute", "qubit-nonreal", &["-o", p]);
    let r: ReportJson = serde_json::from_str(&ok(&["measures", "--dist", p])).unwrap();
    assert!((r.total - (2f64.sqrt() - 1.0)).abs() < 1e-10);
    assert!(r.negativity.abs() < 1e-10 && (r.imaginarity - 1.0).abs() < 1e-10);
}

#[test]
fn condition_and_reconstruct() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.json");
    let p = path.to_str().unwrap();
    run_example("compute", "real-max-negative", &["-o", p]);

    let cond: DistributionJson = serde_json::from_str(&ok(&["condition", "--dist", p, "--outcome", "0"])).unwrap();
    assert!(cond.conditioned);
    assert!((cond.postselection_probability.unwrap() - 0.25).abs() < 1e-12);
    let expect = [0.5, 0.5, 0.5, -0.5];
    for (q, e) in values(&cond).iter().zip(expect) {
        assert!((q - C64::new(e, 0.0)).norm() < 1e-12);
    }

    // full outcome set gives the marginal over the last axis
    let full: DistributionJson =
        serde_json::from_str(&ok(&["condition", "--dist", p, "--outcome", "0,1,2,3"])).unwrap();
    let ex = fixtures::real_max_negative();
    let born = marginal_probabilities(&compute_kd(&ex.state(), ex.a.basis(), ex.f.basis()).unwrap(), 0).unwrap();
    for (q, b) in values(&full).iter().zip(born) {
        assert!((q - C64::new(b, 0.0)).norm() < 1e-12);
    }

    // conditioned input cannot be reconstructed; measures carry no bound
    let cpath = dir.path().join("c.json");
    std::fs::write(&cpath, serde_json::to_string(&cond).unwrap()).unwrap();
    let r: ReportJson = serde_json::from_str(&ok(&["measures", "--dist", cpath.to_str().unwrap()])).unwrap();
    assert_eq!(r.bound, None);

    // zero-overlap cells need the state
    run_example("compute", "classical-noncommuting", &["-o", p]);
    let (a, f, s) = (
        fixture("classical-noncommuting/a.json"),
        fixture("classical-noncommuting/f.json"),
        fixture("classical-noncommuting/state.json"),
    );
    let rec: ReconstructionJson = serde_json::from_str(&ok(&[
        "reconstruct",
        "--dist",
        p,
        "--basis",
        &a,
        "--basis",
        &f,
        "--state",
        &s,
    ]))
    .unwrap();
    assert!(rec.convention_resolved && !rec.convention_cells.is_empty());
    let rho = fixtures::classical_noncommuting().state();
    for r in 0..4 {
        for c in 0..4 {
            let z = C64::new(rec.matrix[r][c][0], rec.matrix[r][c][1]);
            assert!((z - rho.matrix()[(r, c)]).norm() < 1e-10);
        }
    }
}

#[test]
fn mub_and_witness() {
    let m: MubJson = serde_json::from_str(&ok(&["mub", "--family", "real4"])).unwrap();
    assert!(m.real && m.bases.len() == 3 && m.dim == 4);
    let m: MubJson = serde_json::from_str(&ok(&["mub", "--family", "fourier", "--dim", "5"])).unwrap();
    assert_eq!(m.bases.len(), 2);
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let m: MubJson = serde_json::from_str(&ok(&["mub", "--family", "pauli", "--out-dir", out])).unwrap();
    assert!(!m.real);
    let read = |n: usize| -> BasisJson {
        serde_json::from_str(&std::fs::read_to_string(dir.path().join(format!("basis_{n}.json"))).unwrap()).unwrap()
    };
    assert_eq!(read(2), m.bases[2]);

    // |a> = |0>, |f> = |+>
    let a = dir.path().join("a.json");
    let f = dir.path().join("f.json");
    std::fs::write(&a, serde_json::to_string(&read(0).vectors[0]).unwrap()).unwrap();
    std::fs::write(&f, serde_json::to_string(&read(1).vectors[0]).unwrap()).unwrap();
    let (a, f) = (a.to_str().unwrap(), f.to_str().unwrap());
    let h: WitnessJson = serde_json::from_str(&ok(&["witness", "--kind", "H", "--a", a, "--f", f])).unwrap();
    assert!((h.eigenvalues[0] - 0.5).abs() < 1e-12 && (h.eigenvalues[1] + 0.5).abs() < 1e-12);
    let g: WitnessJson =
        serde_json::from_str(&ok(&["witness", "--kind", "G", "--a", a, "--f", f, "--target", "-0.1"])).unwrap();
    assert!((g.eigenvalues[0] - (1.0 + 2f64.sqrt()) / 2.0).abs() < 1e-12);
    assert!(g.tailored.is_some() && g.residual < 1e-8);
    let basis_f = dir.path().join("basis_1.json");
    let s: WitnessJson = serde_json::from_str(&ok(&[
        "witness",
        "--kind",
        "S",
        "--a",
        a,
        "--f",
        basis_f.to_str().unwrap(),
        "--block",
        "0",
    ]))
    .unwrap();
    assert!((s.eigenvalues[0] - g.eigenvalues[0]).abs() < 1e-12);
    // S with the whole basis as block is degenerate
    let out = kdq(&[
        "witness",
        "--kind",
        "S",
        "--a",
        a,
        "--f",
        basis_f.to_str().unwrap(),
        "--block",
        "0,1",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_csv_and_json() {
    let csv = run_example("sweep", "qubit-nonreal", &[]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "p,total,negativity,imaginarity");
    assert_eq!(lines.len(), 102);
    for line in &lines[1..] {
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!((cells[3] - cells[0]).abs() < 1e-10);
    }
    let j: serde_json::Value =
        serde_json::from_str(&run_example("sweep", "real-max-negative", &["--format", "json"])).unwrap();
    let p_star = j["negativity_threshold"].as_f64().unwrap();
    assert!((p_star - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn scans_are_deterministic_across_thread_counts() {
    let run = |threads: &str, what: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_kdq"))
            .env("KDQ_THREADS", threads)
            .args([
                "scan",
                "--what",
                what,
                "--dim",
                "3",
                "--k",
                "3",
                "--samples",
                "300",
                "--seed",
                "5",
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    for what in [
        "bound",
        "support",
        "coarse-support",
        "agreement",
        "classical-noncommuting",
    ] {
        assert_eq!(run("1", what), run("4", what), "{what}");
    }
    let s: ScanJson = serde_json::from_slice(&run("2", "bound")).unwrap();
    assert_eq!((s.samples, s.violations, s.seed), (300, 0, 5));

    let csv = ok(&[
        "scan",
        "--what",
        "nonpositive",
        "--dim",
        "2",
        "--samples",
        "100",
        "--format",
        "csv",
    ]);
    assert!(csv.starts_with("what,dim,k,samples,max_observed,violations,seed\nnonpositive,2,,100,"));
}

#[test]
fn output_is_byte_identical_and_reparses() {
    let a = run_example("compute", "real-max-negative", &[]);
    let b = run_example("compute", "real-max-negative", &[]);
    assert_eq!(a, b);
    let dist: DistributionJson = serde_json::from_str(&a).unwrap();
    dist.to_distribution(values(&dist)).unwrap();
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = kdq(&["measures", "--dist", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err: ErrorJson = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err.error, "parse");

    // unnormalized ket: invariant named in the error
    let ket = dir.path().join("ket.json");
    std::fs::write(&ket, r#"{"dim":2,"amplitudes":[[1,0],[1,0]]}"#).unwrap();
    let a = fixture("qubit-nonreal/a.json");
    let out = kdq(&[
        "compute",
        "--state",
        ket.to_str().unwrap(),
        "--basis",
        &a,
        "--basis",
        &a,
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err: ErrorJson = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err.error, "not_normalized");

    // vanishing postselection
    let d = dir.path().join("d.json");
    run_example("compute", "classical-noncommuting", &["-o", d.to_str().unwrap()]);
    let out = kdq(&["condition", "--dist", d.to_str().unwrap(), "--outcome", "0,1"]);
    assert_eq!(out.status.code(), Some(1));

    assert_eq!(kdq(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        kdq(&["mub", "--family", "pauli", "--format", "csv"]).status.code(),
        Some(2)
    );
    assert_eq!(
        kdq(&["--tol-zero", "0", "mub", "--family", "pauli"]).status.code(),
        Some(2)
    );
}
