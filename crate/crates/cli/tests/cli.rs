use std::path::PathBuf;
use std::process::{Command, Output};

fn dir(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join(rel)
        .to_string_lossy()
        .into_owned()
}

fn potlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_potlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(stdout(o).lines().next().expect("one line")).expect("json output")
}

#[test]
fn robin_half_circle_radius_is_two() {
    let disk = dir("domains/disk.dom");
    let o = potlab(&["robin", "--domain", &disk, "--gamma", "half", "--pole", "0", "--h", "0.02"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert!((v["radius"].as_f64().unwrap() - 2.0).abs() < 1e-2);
    assert_eq!(v["h"].as_f64(), Some(0.02));
    // seventeen significant digits
    let text = stdout(&o);
    let radius = text.split("\"radius\":").nth(1).unwrap().split(',').next().unwrap();
    assert_eq!(radius.split('e').next().unwrap().replace(['.', '-'], "").len(), 17);
}

#[test]
fn verify_mobius_scenario_reports_equality() {
    let o = potlab(&["verify", "--scenario", "twopoint22_mobius.scn"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["status"], "holds");
    assert_eq!(v["equality"], true);
    assert!(v["budget"].as_f64().unwrap() > 0.0 && v["h"].as_f64().is_some());
}

#[test]
fn radial_study_csv() {
    let o = potlab(&["asymptotics", "--study", &dir("studies/radial.scn"), "--r", "1e-2,1e-3,1e-4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "r,direct_cap,asym_cap,residual,residual_times_log2r");
    assert_eq!(lines.len(), 4);
    for l in &lines[1..] {
        let cols: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
        let exact = std::f64::consts::TAU / -cols[0].ln();
        // the two-term expansion is exact here, so only the discretization error remains
        assert!((cols[2] / exact - 1.0).abs() < 1e-12);
        assert!((cols[1] / exact - 1.0).abs() < 1e-2);
        assert!(cols[4].abs() < 0.05);
    }
}

#[test]
fn two_plate_study_is_strict() {
    let o = potlab(&["asymptotics", "--study", &dir("studies/two_plate.scn"), "--strict"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert!(stderr(&o).contains("is strictly decreasing"));
    let j = potlab(&["asymptotics", "--study", &dir("studies/two_plate.scn"), "--format", "json"]);
    assert_eq!(stdout(&j).lines().count(), 3);
}

#[test]
fn field_export_shape_boundary_and_determinism() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a.csv"), tmp.path().join("b.csv"));
    let disk = dir("domains/disk.dom");
    for p in [&a, &b] {
        let o = potlab(&[
            "green", "--domain", &disk, "--pole", "0", "--field-csv", p.to_str().unwrap(), "--grid", "64x64",
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    let mut n = 0;
    let (mut empty, mut near_gamma) = (0, 0);
    for r in rows.records() {
        let r = r.unwrap();
        n += 1;
        let (x, y): (f64, f64) = (r[0].parse().unwrap(), r[1].parse().unwrap());
        let rho = x.hypot(y);
        if r[2].is_empty() {
            empty += 1;
            assert!(rho > 0.99, "missing value inside at ({x}, {y})");
            continue;
        }
        let v: f64 = r[2].parse().unwrap();
        assert!(rho < 1.0 + 1e-12);
        if 1.0 - rho < 0.02 {
            near_gamma += 1;
            assert!(v.abs() < 0.03, "g = {v} at ({x}, {y})");
        }
    }
    assert_eq!(n, 4096);
    assert!(empty > 0 && near_gamma > 0);
}

#[test]
fn unbounded_export_needs_a_box() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("q.csv");
    let q = dir("domains/quarter_plane.dom");
    let o = potlab(&["robin", "--domain", &q, "--pole", "1,1", "--field-csv", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = potlab(&[
        "robin", "--domain", &q, "--pole", "1,1", "--field-csv", out.to_str().unwrap(), "--grid", "8x8",
        "--bbox", "-1,-1,2,2",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 65);
    assert!(text.lines().any(|l| l.ends_with(',')));
}

#[test]
fn input_errors_exit_two_with_location() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.scn");
    std::fs::write(
        &bad,
        "id = \"x\"\nkind = \"TwoPoint23\"\nmap = \"z\"\n[source]\nkind = \"disk\"\n[target]\nkind = \"disk\"\n",
    )
    .unwrap();
    let o = potlab(&["verify", "--scenario", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown scenario kind 'TwoPoint23' at 2:8"), "{}", stderr(&o));

    let broken = tmp.path().join("broken.dom");
    std::fs::write(&broken, "id = \"d\"\n[[loops]]\nrole = \"outer\"\narcs = [\n").unwrap();
    let o = potlab(&["robin", "--domain", broken.to_str().unwrap(), "--pole", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line "), "{}", stderr(&o));

    assert_eq!(potlab(&["oracle", "no-such-oracle", "1"]).status.code(), Some(2));
    assert_eq!(potlab(&["verify"]).status.code(), Some(2));
    assert_eq!(potlab(&["robin", "--domain", "missing.dom", "--pole", "0"]).status.code(), Some(2));
}

#[test]
fn strict_turns_failed_hypotheses_into_exit_one() {
    let tmp = tempfile::tempdir().unwrap();
    let s = tmp.path().join("grow.scn");
    std::fs::write(
        &s,
        "id = \"grow\"\nkind = \"Radius42\"\nmap = \"2*z\"\npoints = [[0.1, 0.0]]\n[source]\nkind = \"disk\"\n[target]\nkind = \"disk\"\n",
    )
    .unwrap();
    let path = s.to_str().unwrap();
    let o = potlab(&["verify", "--scenario", path]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["status"], "hypothesis-failed");
    assert_eq!(json(&o)["margin"], serde_json::Value::Null);
    assert_eq!(potlab(&["verify", "--scenario", path, "--strict"]).status.code(), Some(1));
}

#[test]
fn worker_count_does_not_change_output() {
    let run = |w: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_potlab"))
            .args(["verify", "--all"])
            .env("POTLAB_WORKERS", w)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        stdout(&o)
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn report_summarizes_verify_output() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("all.jsonl");
    let o = potlab(&["verify", "--all", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = potlab(&["report", "--input", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    let v = json(&r);
    assert_eq!(v["violated"], 0);
    assert_eq!(v["total"], v["holds"]);
    let csv = potlab(&["report", "--input", out.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(stdout(&csv).lines().next(), Some("id,kind,status,margin,budget,equality"));
}

#[test]
fn oracle_and_capacity() {
    let o = potlab(&["oracle", "segment-capacity", "-1", "1"]);
    assert_eq!(json(&o)["value"].as_f64(), Some(0.5));
    let o = potlab(&["oracle", "disk-green", "0.5", "0", "-0.5", "0"]);
    assert!((json(&o)["value"].as_f64().unwrap() - (5.0f64 / 4.0).ln()).abs() < 1e-15);
    let o = potlab(&["capacity", "--domain", &dir("domains/segment_exterior.dom")]);
    assert!((json(&o)["capacity"].as_f64().unwrap() - 0.5).abs() < 1e-2);
    let o = potlab(&["capacity", "--domain", &dir("domains/half_plane.dom"), "--format", "csv"]);
    assert!(stdout(&o).starts_with("domain,gamma,pole,capacity,radius,h\n"));
}

#[test]
fn golden_domains_parse() {
    for f in std::fs::read_dir(dir("domains")).unwrap() {
        let p = f.unwrap().path();
        let text = std::fs::read_to_string(&p).unwrap();
        let d = potlab_core::geometry::schema::DomainFile::parse(&text).unwrap();
        for g in d.gamma_names() {
            d.region(Some(&g)).unwrap_or_else(|e| panic!("{}: {g}: {e}", p.display()));
        }
    }
}
