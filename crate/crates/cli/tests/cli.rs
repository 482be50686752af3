use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use esdg_cli::Snapshot;

fn esdg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_esdg"))
        .args(args)
        .env("ESDG_WORKERS", "2")
        .output()
        .expect("spawn esdg")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn freestream_run_writes_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let cfg = write(
        tmp.path(),
        "run.cfg",
        "[problem]\nname = freestream\nt_final = 0.05\n\n[scheme]\nvariant = gauss\ndegree = 2\ncells = 3\n\n[output]\nsnapshot_times = 0.02\nspectrum_times = 0.05\n",
    );
    let o = esdg(&["run", "--config", &cfg, "--out", out.to_str().unwrap(), "--tol", "1e-8"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let report = fs::read_to_string(out.join("report.txt")).unwrap();
    assert!(report.contains("crashed = false"));
    assert!(report.contains("end_time = 0.05\n"));

    let rows = csv_rows(&out.join("entropy.csv"));
    assert!(rows.len() > 2);
    let s: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(s.iter().all(|x| (x - s[0]).abs() <= 1e-12 * s[0].abs()), "{s:?}");

    let snaps: Vec<_> = fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap().to_str().unwrap().starts_with("snapshot_t"))
        .collect();
    assert_eq!(snaps.len(), 2);
    for p in snaps {
        let reader = std::io::BufReader::new(fs::File::open(&p).unwrap());
        let s = if p.extension().unwrap() == "vtk" {
            Snapshot::read_vtk(reader).unwrap()
        } else {
            Snapshot::read_csv(reader).unwrap()
        };
        assert!(s.time >= 0.02 && s.time < 0.05);
        assert_eq!((s.degree, s.cells, s.grid), (2, (3, 3), (9, 9)));
        assert_eq!(s.variant, "Gauss_EP");
        assert!(s.rho.iter().all(|r| (r - 1.0).abs() < 1e-12));
        assert!(s.u.iter().all(|u| (u - 0.1).abs() < 1e-12));
        assert!(s.v.iter().all(|v| (v + 0.2).abs() < 1e-12));
    }

    let spectrum = fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.file_name().unwrap().to_str().unwrap().starts_with("spectrum_t"))
        .expect("spectrum file");
    let rows = csv_rows(&spectrum);
    let e: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    // a uniform flow puts all energy in shell 0
    assert!((e[0] - 0.05).abs() < 1e-12 && e[1..].iter().all(|x| x.abs() < 1e-20), "{e:?}");
}

#[test]
fn config_errors_exit_one_with_line_numbers() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "bad.cfg", "[problem]\nname = khi\n\n[scheme]\nvariant = gauss\ndegree = 12\ncells = 4\n");
    let o = esdg(&["run", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 6"), "{err}");

    let cfg = write(tmp.path(), "bad2.cfg", "[problem]\nname khi\n");
    let o = esdg(&["run", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    assert_eq!(esdg(&["run"]).status.code(), Some(1));
    assert_eq!(esdg(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(esdg(&["run", "--config", "/nonexistent/x.cfg"]).status.code(), Some(1));
    assert_eq!(esdg(&["--help"]).status.code(), Some(0));
}

#[test]
fn spectra_reject_walls() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "rti.cfg", "[problem]\nname = rti\nt_final = 0.01\n[scheme]\nvariant = dgsem\ndegree = 1\ncells = 2\n");
    let o = esdg(&["spectra", "--config", &cfg, "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn crash_is_a_successful_run() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o");
    let cfg = write(
        tmp.path(),
        "khi.cfg",
        "[problem]\nname = khi\nt_final = 6\n[scheme]\nvariant = DGSEM_LGL_collocation\ndegree = 3\ncells = 16\n",
    );
    let o = esdg(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = fs::read_to_string(out.join("report.txt")).unwrap();
    assert!(report.contains("crashed = true"), "{report}");
    let end: f64 = report
        .lines()
        .find_map(|l| l.strip_prefix("end_time = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((2.5..=5.5).contains(&end), "{end}");
}

#[test]
fn sweep_rows_follow_matrix_order() {
    let tmp = tempfile::tempdir().unwrap();
    let text = "[sweep]\nproblem = freestream\nvariants = dgsem, gauss\ndegrees = 1, 2\ncells = 2\nt_final = 0.01\n";
    let cfg = write(tmp.path(), "sweep.cfg", text);
    let mut runs = Vec::new();
    for name in ["a", "b"] {
        let out = tmp.path().join(name);
        let o = esdg(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let text = fs::read_to_string(out.join("sweep.csv")).unwrap();
        assert_eq!(text.lines().next().unwrap(), "problem,variant,N,cells,atwood,end_time,crashed,cause,wall_time");
        let rows = csv_rows(&out.join("sweep.csv"));
        let keys: Vec<Vec<String>> = rows.iter().map(|r| r[..8].to_vec()).collect();
        runs.push(keys);
    }
    assert_eq!(runs[0], runs[1]);
    let order: Vec<(String, String)> = runs[0].iter().map(|r| (r[1].clone(), r[2].clone())).collect();
    let expect = [("DGSEM_LGL_collocation", "1"), ("DGSEM_LGL_collocation", "2"), ("Gauss_EP", "1"), ("Gauss_EP", "2")];
    assert_eq!(order, expect.map(|(a, b)| (a.to_string(), b.to_string())));
    assert!(runs[0].iter().all(|r| r[5] == "0.01" && r[6] == "false" && r[7] == "none"));
}

#[test]
fn sweep_isolates_bad_cells_and_allows_empty_matrix() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "e.cfg", "[sweep]\nproblem = khi\nvariants =\ndegrees = 3\ncells = 16\n");
    let out = tmp.path().join("e");
    assert!(esdg(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap()]).status.success());
    assert_eq!(fs::read_to_string(out.join("sweep.csv")).unwrap().lines().count(), 1);

    // Atwood numbers must lie in [0, 1); the bad cell is recorded and the rest run
    let cfg = write(
        tmp.path(),
        "b.cfg",
        "[sweep]\nproblem = khi_atwood\nvariants = dgsem\ndegrees = 1\ncells = 2\natwood = 1.5, 0.5\nt_final = 0.01\n",
    );
    let out = tmp.path().join("b");
    assert!(esdg(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap()]).status.success());
    let rows = csv_rows(&out.join("sweep.csv"));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][7], "setup_error");
    assert_eq!(rows[1][7], "none");
}

#[test]
fn diagnose_ep_defaults_reproduce_the_grid() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("d");
    let o = esdg(&["diagnose-ep", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let rows = csv_rows(&out.join("ep_gap.csv"));
    assert_eq!(rows.len(), 6);
    let jump = |k: &str, p: &str| -> f64 {
        rows.iter().find(|r| r[0] == k && r[1] == p).unwrap()[3].parse().unwrap()
    };
    assert!(jump("4", "1") < jump("8", "1") && jump("8", "1") < jump("12", "1"));
    assert!(jump("4", "0.1") > jump("4", "1"));
}

#[test]
fn diagnose_ep_exact_input_gives_near_zero_row() {
    // k = 0 is a constant state
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "d.cfg", "[diagnose]\nk = 0\np_min = 1\ndegree = 3\ncells = 4\n");
    let out = tmp.path().join("d");
    assert!(esdg(&["diagnose-ep", "--config", &cfg, "--out", out.to_str().unwrap()]).status.success());
    let rows = csv_rows(&out.join("ep_gap.csv"));
    let jump: f64 = rows[0][3].parse().unwrap();
    let vol: f64 = rows[0][2].parse().unwrap();
    assert!(jump < 1e-8 && vol < 1e-8, "{rows:?}");
}
