// SPDX-License-Identifier: Apache-2.0

use std::process::{Command, Output};

use choi_dynamics::choi::ClassificationReport;
use choi_dynamics::semigroup::{TrajectoryPoint, TrichotomyResult, TrichotomyVerdict};
use choi_dynamics::uet::PptConstruction;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_choi-dynamics"))
        .args(args)
        .env_remove("CHOI_DYNAMICS_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    stdout(&o)
}

#[test]
fn output_is_deterministic() {
    let cases: [&[&str]; 4] = [
        &["--seed", "9", "construct-ppt", "--n", "3"],
        &["sweep", "rho", "0:1:0.5", "0:1:0.5", "1", "-1:1:1"],
        &[
            "evolve",
            "tau",
            "1",
            "2",
            "2",
            "0.5",
            "--trajectory",
            "2",
            "20",
        ],
        &["scan", "rho", "1", "1", "1", "1", "--steps", "50"],
    ];
    for args in cases {
        let first = run(args);
        let second = run(args);
        assert_eq!(first.stdout, second.stdout, "{args:?}");
        assert!(!first.stdout.is_empty());
    }
    assert_ne!(
        ok(&["--seed", "1", "construct-ppt"]),
        ok(&["--seed", "2", "construct-ppt"])
    );
}

#[test]
fn json_outputs_parse_back() {
    let r: ClassificationReport =
        serde_json::from_str(&ok(&["classify", "rho", "1", "0.5", "2", "1"])).unwrap();
    assert!(r.all_agree() && r.ppt.analytic);

    let reports: Vec<ClassificationReport> = serde_json::from_str(&ok(&[
        "--format", "json", "sweep", "tau", "0:1:1", "1", "1", "0",
    ]))
    .unwrap();
    assert_eq!(reports.len(), 2);

    let p: TrajectoryPoint =
        serde_json::from_str(&ok(&["evolve", "rho", "1", "1", "1", "1", "--t", "0.5"])).unwrap();
    assert!(p.cp);

    let s: TrichotomyResult = serde_json::from_str(&ok(&[
        "scan",
        "rho",
        "1",
        "0",
        "0",
        "1",
        "--property",
        "ppt",
    ]))
    .unwrap();
    assert_eq!(s.verdict, TrichotomyVerdict::NeverHolds);
    assert_eq!(s.scan_grid.len(), 1000);

    let built: PptConstruction = serde_json::from_str(&ok(&["construct-ppt", "--n", "2"])).unwrap();
    assert_eq!(built.matrix.rows(), 4);
    assert!(built.pt_eigenvalues[0] >= -1e-10);

    let t: serde_json::Value =
        serde_json::from_str(&ok(&["--format", "json", "transition", "1", "1", "1", "1"])).unwrap();
    assert_eq!(t["t0"], "0.630944724202046");
    assert_eq!(
        ok(&["transition", "1", "1", "1", "1"]),
        "0.630944724202046\n"
    );

    let rank: serde_json::Value =
        serde_json::from_str(&ok(&["rank", "rho", "1", "1", "1", "1"])).unwrap();
    assert_eq!(rank["rank_numerical"], 7);
    let k: serde_json::Value =
        serde_json::from_str(&ok(&["schmidt", "rho", "2", "1", "1", "-1"])).unwrap();
    assert_eq!(k["schmidt_number"], 2);
}

#[test]
fn csv_outputs_parse_back() {
    let text = ok(&[
        "evolve",
        "rho",
        "1",
        "1",
        "1",
        "1",
        "--trajectory",
        "1",
        "11",
    ]);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,at,bt,ct,dt,min_eig_choi,min_eig_pt_choi,cp,ppt"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 11);
    for row in &rows {
        assert_eq!(row.len(), 9);
        for x in &row[..7] {
            x.parse::<f64>().unwrap();
        }
        row[8].parse::<bool>().unwrap();
    }
    assert_eq!(rows[10][0], "1");

    let text = ok(&["--format", "csv", "classify", "tau", "1", "1", "1", "1"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0].split(',').count(), lines[1].split(',').count());
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["classify", "rho", "1", "2"]).status.code(), Some(1));
    assert_eq!(
        run(&["classify", "sigma", "1", "1", "1", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["transition", "0", "1", "1", "1"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["evolve", "rho", "1", "1", "1", "1", "--t", "-1"])
            .status
            .code(),
        Some(1)
    );
    assert!(!ok(&[
        "evolve",
        "rho",
        "1",
        "1",
        "1",
        "1",
        "--t",
        "-1",
        "--allow-negative"
    ])
    .is_empty());
    // a tolerance this loose lets the numerical CP check accept a negative eigenvalue
    let o = run(&[
        "--tol", "0.5", "--format", "csv", "classify", "rho", "1", "0", "0", "-0.6",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).trim_end().ends_with(",false"));
    let o = run(&[
        "--tol",
        "0.5",
        "sweep",
        "rho",
        "0:1:0.5",
        "0",
        "0",
        "-1:0:0.25",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o).lines().count(), 16);
    let o = Command::new(env!("CARGO_BIN_EXE_choi-dynamics"))
        .args(["classify", "rho", "1", "1", "1", "1"])
        .env("CHOI_DYNAMICS_TOL", "-1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sweep_sizes() {
    let empty = ok(&["sweep", "rho", "1:0:1", "0", "0", "0"]);
    assert_eq!(empty.lines().count(), 1);
    assert!(empty.starts_with("family,a,b,c,d,"));
    let full = ok(&[
        "sweep",
        "rho",
        "0:1:0.25",
        "0:1:0.25",
        "0:1:0.25",
        "-0.5:0.5:0.25",
    ]);
    assert_eq!(full.lines().count(), 626);
    assert_eq!(
        run(&["sweep", "rho", "0:1e7:1", "0:10:1", "0", "0"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn theta_atomic_column_follows_the_cubic_bound() {
    let text = ok(&[
        "sweep",
        "theta",
        "1:1.75:0.25",
        "0:2:0.5",
        "0:2:0.5",
        "0:2:0.5",
    ]);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    let (ia, iat) = (col("a"), col("atomic"));
    let mut atomic_rows = 0;
    for line in lines {
        let row: Vec<&str> = line.split(',').collect();
        let p: Vec<f64> = row[ia..ia + 4].iter().map(|x| x.parse().unwrap()).collect();
        let positive = p[1] * p[2] * p[3] >= (2.0 - p[0]).powi(3);
        assert_eq!(row[iat] == "true", positive, "{line}");
        atomic_rows += positive as usize;
    }
    assert!(atomic_rows > 0);
}

#[test]
fn construct_from_q_file() {
    let dir = std::env::temp_dir().join(format!("choi-dynamics-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("q.json");
    let bad = dir.join("bad.json");
    let nonunitary = dir.join("nonunitary.json");
    let q = choi_dynamics::uet::QStructure::reversal(2);
    std::fs::write(&good, serde_json::to_string(&q).unwrap()).unwrap();
    std::fs::write(&bad, "{ not json").unwrap();
    let mut broken = serde_json::to_value(&q).unwrap();
    broken["q_plus"]["re"][0] = serde_json::json!(2.0);
    std::fs::write(&nonunitary, broken.to_string()).unwrap();

    let from_file = ok(&["construct-ppt", "--n", "2", "--q", good.to_str().unwrap()]);
    assert_eq!(from_file, ok(&["construct-ppt", "--n", "2"]));
    assert_eq!(
        run(&["construct-ppt", "--q", bad.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["construct-ppt", "--q", nonunitary.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&[
            "construct-ppt",
            "--q",
            dir.join("missing.json").to_str().unwrap()
        ])
        .status
        .code(),
        Some(1)
    );
    std::fs::remove_dir_all(&dir).unwrap();

    let zero: PptConstruction =
        serde_json::from_str(&ok(&["construct-ppt", "--n", "3", "--zero"])).unwrap();
    assert_eq!(zero.a0, 0.0);
    assert!(zero.eigenvalues.iter().all(|v| *v > 0.0));
}

#[test]
fn dump_and_load_matrices() {
    let dir = std::env::temp_dir().join(format!("choi-dynamics-dump-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = |name: &str| dir.join(name).to_str().unwrap().to_owned();

    ok(&[
        "--dump",
        &path("choi.json"),
        "classify",
        "rho",
        "1",
        "1",
        "1",
        "1",
    ]);
    let choi: choi_dynamics::matrix::CMat =
        serde_json::from_str(&std::fs::read_to_string(path("choi.json")).unwrap()).unwrap();
    let spec = choi_dynamics::foliated::MapSpec::from_family("rho", [1.0; 4]).unwrap();
    assert_eq!(choi, choi_dynamics::choi::ChoiMatrix::of_spec(&spec).mat);
    let rank: serde_json::Value =
        serde_json::from_str(&ok(&["rank", "--load", &path("choi.json")])).unwrap();
    assert_eq!(rank["rank_numerical"], 7);

    let built: PptConstruction = serde_json::from_str(&ok(&[
        "--dump",
        &path("ppt.json"),
        "construct-ppt",
        "--n",
        "3",
    ]))
    .unwrap();
    let dumped: choi_dynamics::matrix::CMat =
        serde_json::from_str(&std::fs::read_to_string(path("ppt.json")).unwrap()).unwrap();
    assert_eq!(dumped, built.matrix);

    ok(&[
        "--dump",
        &path("t.json"),
        "evolve",
        "tau",
        "1",
        "2",
        "2",
        "1",
        "--t",
        "0.5",
    ]);
    assert!(std::fs::metadata(path("t.json")).is_ok());

    assert_eq!(
        run(&[
            "--dump",
            &path("x.json"),
            "sweep",
            "rho",
            "0",
            "0",
            "0",
            "0"
        ])
        .status
        .code(),
        Some(1)
    );
    std::fs::write(
        path("bad.json"),
        r#"{"rows": 2, "cols": 2, "re": [1], "im": [0]}"#,
    )
    .unwrap();
    assert_eq!(
        run(&["rank", "--load", &path("bad.json")]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&[
            "rank",
            "rho",
            "1",
            "1",
            "1",
            "1",
            "--load",
            &path("choi.json")
        ])
        .status
        .code(),
        Some(1)
    );
    std::fs::remove_dir_all(&dir).unwrap();
}
