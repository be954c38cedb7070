//! Acceptance suite: one PASS/FAIL line per criterion, then a single verdict.

use std::f64::consts::{LN_10, PI, TAU};
use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use potlab_core::condenser::{
    asymptotic_capacity, condenser_capacity, Condenser, PlateMapHandle, PlateSpec, RobinData,
};
use potlab_core::geometry::models::{self, Compact};
use potlab_core::geometry::{shapes, MarkedDomain, PlateMap, Region, SpherePoint};
use potlab_core::oracle::{arc_capacity, disk_green, HalfPlaneInterval};
use potlab_core::robin::{green_function, log_capacity, robin_capacity, robin_function};
use potlab_core::Complex64;
use potlab_distortion::catalog::DomainRef;
use potlab_distortion::map::{blaschke_product, disk_automorphism, quadratic, HolomorphicMap};
use potlab_distortion::scenario::{Aux, Kind, Scenario};
use potlab_distortion::verify::Status;
use potlab_distortion::{corpus, verify};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn manifest(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn potlab(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_potlab"))
        .args(args)
        .output()
        .map_err(e)?;
    Ok((
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    ))
}

fn within(budget: Duration, start: Instant) -> Result<String, String> {
    let t = start.elapsed();
    ensure(t <= budget, format!("{:.1}s of {}s", t.as_secs_f64(), budget.as_secs()))
}

fn disk_samples(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| Complex64::from_polar(0.05 + 0.85 * k as f64 / (n - 1) as f64, 2.4 * k as f64))
        .collect()
}

fn green_error(h: f64) -> Result<f64, String> {
    let z0 = c(0.3, 0.2);
    let r = green_function(&shapes::unit_disk(), z0.into(), h).map_err(e)?;
    let mut worst: f64 = 0.0;
    for z in disk_samples(50) {
        worst = worst.max((r.g_at(z).map_err(e)? - disk_green(z, z0).map_err(e)?).abs());
    }
    Ok(worst)
}

fn green_oracle_agreement() -> Outcome {
    let start = Instant::now();
    let e2 = green_error(0.02)?;
    let e1 = green_error(0.01)?;
    let time = within(Duration::from_secs(30), start)?;
    ensure(
        e2 <= 5e-3 && e2 / e1 >= 1.7,
        format!("max error {e2:.3e} at h=0.02, {e1:.3e} at h=0.01, ratio {:.2}, {time}", e2 / e1),
    )
}

fn unit_arc(m: f64) -> Compact {
    Compact::Arc {
        center: c(0.0, 0.0),
        radius: 1.0,
        start: 0.0,
        sweep: m,
    }
}

fn arc_symmetry_identity() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for m in [PI / 2.0, PI, 1.5 * PI] {
        let cap = arc_capacity(m).map_err(e)?;
        let solved = log_capacity(&unit_arc(m), 0.02).map_err(e)?;
        let disk = Region::Marked(models::disk_with_arcs(&[(0.0, m)]).map_err(e)?);
        let r0 = robin_function(&disk, c(0.0, 0.0).into(), 0.02).map_err(e)?;
        let dev = (r0.radius * cap * cap - 1.0).abs();
        let confirm = (solved / cap - 1.0).abs();
        ok &= dev <= 1e-2 && confirm <= 1e-2;
        notes.push(format!("m={m:.4}: |r·cap²−1|={dev:.2e}, oracle vs exterior solver {confirm:.2e}"));
    }
    ensure(ok, notes.join("; "))
}

fn arc_radius_identities() -> Outcome {
    let mut worst_reflect: f64 = 0.0;
    let mut worst_radius: f64 = 0.0;
    for m in [PI / 2.0, PI, 1.5 * PI] {
        let disk = Region::Marked(models::disk_with_arcs(&[(0.0, m)]).map_err(e)?);
        let ext = Region::Mapped(models::exterior(unit_arc(m)).map_err(e)?);
        for z in [c(0.0, 0.0), c(0.2, -0.3)] {
            let re = robin_function(&ext, z.into(), 0.02).map_err(e)?;
            let rd = robin_function(&disk, z.into(), 0.02).map_err(e)?;
            let reflected = if z.norm() == 0.0 {
                SpherePoint::Infinity
            } else {
                (1.0 / z.conj()).into()
            };
            // log r(Ω, z) − log(1 − |z|²) = g_Ω(z, z*) with Ω the arc complement
            let lhs = re.radius.ln() - (1.0 - z.norm_sqr()).ln();
            worst_reflect = worst_reflect.max((lhs - re.g(reflected).map_err(e)?).abs());
            // r(U, γ, z) = r(Ω, z)² / (1 − |z|²)
            let want = re.radius.powi(2) / (1.0 - z.norm_sqr());
            worst_radius = worst_radius.max((rd.radius / want - 1.0).abs());
        }
    }
    ensure(
        worst_reflect <= 1e-2 && worst_radius <= 1e-2,
        format!("reflection identity {worst_reflect:.2e}, radius decomposition (relative) {worst_radius:.2e}"),
    )
}

fn unit_disk() -> MarkedDomain {
    MarkedDomain::whole_boundary(shapes::unit_disk()).expect("unit disk")
}

fn radial_capacitor() -> Outcome {
    let exact = TAU / LN_10;
    let plates = vec![PlateSpec::disk(c(0.0, 0.0), 1.0)];
    let cap = condenser_capacity(&Condenser::new(unit_disk(), plates.clone(), 0.1), 0.02)
        .map_err(e)?
        .capacity;
    let data = RobinData::solve(&unit_disk(), &[c(0.0, 0.0)], 0.02).map_err(e)?;
    let closed = RobinData {
        radii: vec![1.0],
        matrix: vec![vec![0.0]],
    };
    let asym = asymptotic_capacity(&plates, &closed, 0.1).map_err(e)?;
    let first = TAU * (-1.0 / 0.1f64.ln());
    let second = first - asym;
    let asym_solved = asymptotic_capacity(&plates, &data, 0.1).map_err(e)?;
    let (d1, d2, d3) = (
        (cap / exact - 1.0).abs(),
        (asym / exact - 1.0).abs(),
        (asym_solved / exact - 1.0).abs(),
    );
    let (code, out) = potlab(&[
        "condenser",
        "--study",
        manifest("studies/radial.scn").to_str().unwrap(),
        "--r",
        "0.1",
    ])?;
    let cli: serde_json::Value = serde_json::from_str(&out).map_err(e)?;
    let d4 = (cli["capacity"].as_f64().unwrap_or(f64::NAN) / exact - 1.0).abs();
    ensure(
        d1 <= 1e-2 && d2 <= 1e-2 && d3 <= 1e-2 && second == 0.0 && code == 0 && d4 <= 1e-2,
        format!(
            "direct {d1:.2e}, expansion {d2:.2e} (second term {second:e}), with solved radius {d3:.2e}, cli {d4:.2e}"
        ),
    )
}

fn residual_study() -> Outcome {
    let start = Instant::now();
    let (code, out) = potlab(&[
        "asymptotics",
        "--study",
        manifest("studies/two_plate_solver.scn").to_str().unwrap(),
        "--r",
        "1e-2,1e-3,1e-4",
        "--strict",
    ])?;
    let time = within(Duration::from_secs(180), start)?;
    let products: Vec<f64> = out
        .lines()
        .skip(1)
        .filter_map(|l| l.rsplit(',').next()?.parse::<f64>().ok())
        .map(f64::abs)
        .collect();
    let decreasing = products.len() == 3 && products.windows(2).all(|w| w[1] < w[0]);
    ensure(
        code == 0 && decreasing,
        format!("|residual·log²r| = {products:.4?}, {time}"),
    )
}

fn conformal_invariance() -> Outcome {
    let a = c(0.3, -0.2);
    let t: PlateMap = Arc::new(move |z: Complex64| (z - a) / (1.0 - a.conj() * z));
    let plates = vec![PlateSpec::disk(c(0.5, 0.1), 1.0), PlateSpec::disk(c(-0.4, 0.0), -0.5)];
    let mapped: Vec<PlateSpec> = plates
        .iter()
        .cloned()
        .map(|mut p| {
            p.map = Some(PlateMapHandle(t.clone()));
            p
        })
        .collect();
    let c1 = condenser_capacity(&Condenser::new(unit_disk(), plates, 0.05), 0.02)
        .map_err(e)?
        .capacity;
    let c2 = condenser_capacity(&Condenser::new(unit_disk(), mapped, 0.05), 0.02)
        .map_err(e)?
        .capacity;
    let d = (c2 / c1 - 1.0).abs();
    ensure(d <= 1e-2, format!("capacity {c1:.6} vs {c2:.6}, relative gap {d:.2e}"))
}

fn bundled(id: &str) -> Result<potlab_distortion::VerificationReport, String> {
    let s = corpus::find(id).ok_or_else(|| format!("missing scenario {id}"))?;
    verify(&s).map_err(e)
}

fn mobius_equality() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for id in ["twopoint21_mobius", "twopoint22_mobius"] {
        let r = bundled(id)?;
        ok &= r.status == Status::Holds && r.equality && r.exact && r.margin.abs() <= 1e-6;
        notes.push(format!("{id} margin {:.1e}", r.margin));
    }
    let r = bundled("twopoint22_contraction")?;
    ok &= r.status == Status::Holds && r.margin > 0.0 && r.map == "z/2";
    notes.push(format!("z/2 margin {:.4}", r.margin));
    ensure(ok, notes.join(", "))
}

fn disk_scenario(kind: Kind, map: &str, z: Complex64, weights: Vec<f64>) -> Scenario {
    Scenario {
        id: format!("{kind}"),
        kind,
        description: None,
        map: map.into(),
        points: vec![z.into()],
        weights,
        h: None,
        source: DomainRef::Disk,
        target: DomainRef::Disk,
        aux: Aux::default(),
        base: None,
    }
}

fn pick_and_schwarzian() -> Outcome {
    let mut g = StdRng::seed_from_u64(2024);
    let point = |g: &mut StdRng, r: f64| Complex64::from_polar(r * g.gen::<f64>().sqrt(), g.gen_range(0.0..TAU));
    let mut failures = 0;
    for i in 0..100 {
        let map = match i % 4 {
            0 => disk_automorphism(point(&mut g, 0.8), g.gen_range(0.0..TAU)),
            1 => blaschke_product(&[point(&mut g, 0.8), point(&mut g, 0.8)], g.gen_range(0.0..TAU)),
            2 => quadratic(g.gen_range(0.0..0.5)),
            _ => HolomorphicMap::parse(&format!("{:e}*z^3", g.gen_range(0.1..1.0))).map_err(e)?,
        };
        let z = point(&mut g, 0.95);
        let r = verify(&disk_scenario(Kind::Nehari33, &map.source, z, vec![1.0, 0.0])).map_err(e)?;
        if r.status != Status::Holds {
            failures += 1;
        }
    }
    let mut gap: f64 = 0.0;
    let mut ok = failures == 0;
    for a in [0.1, 0.3, 0.45] {
        let f = quadratic(a);
        let s1 = f.schwarzian(c(0.0, 0.0)).map_err(e)?;
        let s2 = f.schwarzian_coefficients(c(0.0, 0.0)).map_err(e)?;
        gap = gap.max((s1 - s2).norm()).max((s1 - c(-6.0 * a * a, 0.0)).norm());
        let r = verify(&disk_scenario(Kind::Schwarzian34, &f.source, c(0.0, 0.0), vec![])).map_err(e)?;
        ok &= r.status == Status::Holds;
    }
    ok &= gap <= 1e-10;
    ensure(
        ok,
        format!("Pick failures {failures}/100, Schwarzian formulas agree to {gap:.1e}"),
    )
}

fn lindelof_majorization() -> Outcome {
    let a = bundled("thm_4_1_lindelof")?;
    let b = bundled("thm_4_2_radius")?;
    let s = bundled("thm_4_1_lindelof_contraction")?;
    ensure(
        a.equality
            && b.equality
            && a.exact
            && b.exact
            && a.margin.abs() <= 1e-8
            && b.margin.abs() <= 1e-8
            && s.status == Status::Holds
            && s.margin > 1e-8
            && s.map == "z^2/2",
        format!(
            "z² margins {:.1e} and {:.1e}, z²/2 margin {:.4}",
            a.margin, b.margin, s.margin
        ),
    )
}

fn pvalent_equality() -> Outcome {
    let r = bundled("thm_4_3_pvalent")?;
    let gap = (r.lhs - r.rhs).abs();
    ensure(
        r.exact && r.weights == vec![1.0, -1.0] && r.map == "z^2" && gap <= 1e-8,
        format!("sides {:.12} and {:.12}, gap {gap:.1e}", r.lhs, r.rhs),
    )
}

fn section_five_examples() -> Outcome {
    let strip = bundled("cor_5_1_strip")?;
    let shift = bundled("cor_5_1_strip_shift")?;
    let half = bundled("cor_5_2_halfplane")?;
    let quarter = bundled("cor_5_3_quarterplane")?;
    let oracle = HalfPlaneInterval::new(-1.0, 1.0).map_err(e)?.radius_at_infinity();
    let uhp = Region::Mapped(models::upper_half_plane(&[(-1.0, 1.0)]).map_err(e)?);
    let solved = 1.0 / robin_capacity(&uhp, SpherePoint::Infinity, 0.02).map_err(e)?;
    let segment = 1.0
        / log_capacity(
            &Compact::Segment {
                a: c(-1.0, 0.0),
                b: c(1.0, 0.0),
            },
            0.02,
        )
        .map_err(e)?;
    ensure(
        strip.equality
            && strip.margin.abs() <= 1e-9
            && shift.status == Status::Holds
            && shift.margin > 1e-8
            && half.status == Status::Holds
            && (oracle - 2.0).abs() <= 1e-2
            && (solved - 2.0).abs() <= 1e-2
            && (segment - 2.0).abs() <= 1e-2
            && quarter.equality
            && quarter.margin.abs() <= 1e-9,
        format!(
            "strip {:.1e}, shifted strip {:.4}, half-plane margin {:.4} with r(∞) {oracle} / solved {solved:.6} / segment {segment:.6}, quarter-plane {:.1e}",
            strip.margin, shift.margin, half.margin, quarter.margin
        ),
    )
}

fn full_suite() -> Outcome {
    let start = Instant::now();
    let (code, out) = potlab(&["verify", "--all"])?;
    let time = within(Duration::from_secs(600), start)?;
    let mut total = 0;
    let mut bad = Vec::new();
    for line in out.lines() {
        let v: serde_json::Value = serde_json::from_str(line).map_err(e)?;
        total += 1;
        if v["status"] != "holds" {
            bad.push(v["id"].as_str().unwrap_or("?").to_string());
        }
    }
    ensure(
        code == 0 && bad.is_empty() && total == corpus::FILES.len(),
        format!("{total} scenarios, not holding: {bad:?}, exit {code}, {time}"),
    )
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("green oracle agreement", green_oracle_agreement),
        ("arc symmetry identity", arc_symmetry_identity),
        ("arc reflection and radius decomposition", arc_radius_identities),
        ("radial capacitor", radial_capacitor),
        ("residual study", residual_study),
        ("conformal invariance of condenser capacity", conformal_invariance),
        ("two-point equality and strict inclusion", mobius_equality),
        ("Pick and Schwarzian", pick_and_schwarzian),
        ("Lindelöf and majorization", lindelof_majorization),
        ("p-valent covering equality", pvalent_equality),
        ("strip, half-plane and quarter-plane examples", section_five_examples),
        ("full bundled suite", full_suite),
    ];
    let mut failed = Vec::new();
    for (k, (name, check)) in criteria.iter().enumerate() {
        let n = k + 1;
        match check() {
            Ok(detail) => println!("PASS {n:>2} {name}: {detail}"),
            Err(detail) => {
                println!("FAIL {n:>2} {name}: {detail}");
                failed.push(n);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
