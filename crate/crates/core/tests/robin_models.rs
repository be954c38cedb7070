use std::f64::consts::{PI, SQRT_2};

use potlab_core::geometry::models::{self, Compact};
use potlab_core::geometry::{shapes, MarkedDomain, Region, SpherePoint};
use potlab_core::oracle::*;
use potlab_core::robin::*;
use potlab_core::{Complex64, Error};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn samples(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| Complex64::from_polar(0.05 + 0.85 * k as f64 / (n - 1) as f64, 2.4 * k as f64))
        .collect()
}

fn disk_green_error(h: f64) -> f64 {
    let z0 = c(0.3, 0.2);
    let r = green_function(&shapes::unit_disk(), z0.into(), h).unwrap();
    samples(50)
        .into_iter()
        .map(|z| (r.g_at(z).unwrap() - disk_green(z, z0).unwrap()).abs())
        .fold(0.0, f64::max)
}

#[test]
fn disk_green_converges() {
    let (e1, e2) = (disk_green_error(0.04), disk_green_error(0.02));
    assert!(e2 <= 5e-3, "error {e2}");
    assert!(e1 / e2 >= 1.7, "ratio {}", e1 / e2);
}

#[test]
fn quarter_plane_radius_and_green() {
    let region = Region::Mapped(models::quarter_plane());
    let z0 = c(1.0, 1.0);
    let r = robin_function(&region, z0.into(), 0.02).unwrap();
    assert!(rel(r.radius, 2.0 * SQRT_2) < 1e-2, "radius {}", r.radius);
    assert!(rel(r.radius, quarterplane_radius(z0).unwrap()) < 1e-2);
    for z in [c(0.5, 2.0), c(3.0, 0.4), c(0.2, 0.2)] {
        let want = quarterplane_robin(z, z0).unwrap();
        assert!((r.g_at(z).unwrap() - want).abs() < 1e-2, "at {z}");
    }
}

#[test]
fn strip_radius_and_delta() {
    let region = Region::Mapped(models::strip());
    let (z, w) = (c(0.3, 0.5), c(-0.5, 1.1));
    let r = robin_function(&region, w.into(), 0.02).unwrap();
    assert!(rel(r.radius, strip_radius(w).unwrap()) < 1e-2);
    let d = delta_invariant(&region, z.into(), w.into(), 0.02).unwrap();
    assert!((d - strip_delta(z, w).unwrap()).abs() < 1e-2, "delta {d}");
    assert!(d > 0.0 && d < 1.0);
}

#[test]
fn half_plane_interval() {
    let (a, b) = (-1.0, 2.0);
    let region = Region::Mapped(models::upper_half_plane(&[(a, b)]).unwrap());
    let oracle = HalfPlaneInterval::new(a, b).unwrap();
    let z0 = c(0.4, 0.9);
    let r = robin_function(&region, z0.into(), 0.02).unwrap();
    assert!(rel(r.radius, oracle.radius(z0).unwrap()) < 1e-2);
    let z = c(-2.0, 0.5);
    assert!((r.g_at(z).unwrap() - oracle.green(z, z0).unwrap()).abs() < 1e-2);
    let cap = robin_capacity(&region, SpherePoint::Infinity, 0.02).unwrap();
    assert!(rel(cap, 1.0 / oracle.radius_at_infinity()) < 1e-2);
}

#[test]
fn segment_and_disk_capacity() {
    for (a, b) in [(-1.0, 2.0), (0.0, 0.5), (-3.0, 1.0)] {
        let seg = Compact::Segment {
            a: c(a, 0.5),
            b: c(b, 0.5),
        };
        let cap = log_capacity(&seg, 0.02).unwrap();
        assert!(rel(cap, segment_capacity(a, b).unwrap()) < 1e-2, "[{a}, {b}]");
    }
    let disk = Compact::Disk {
        center: c(1.0, -1.0),
        radius: 0.7,
    };
    assert!(rel(log_capacity(&disk, 0.02).unwrap(), 0.7) < 1e-2);
}

#[test]
fn transfer_between_models() {
    // the same half-plane problem solved on the model disk directly
    let z0 = c(0.4, 0.9);
    let via_region = robin_function(
        &Region::Mapped(models::upper_half_plane(&[(-1.0, 2.0)]).unwrap()),
        z0.into(),
        0.02,
    )
    .unwrap();
    let arcs = [(models::cayley_angle(-1.0), models::cayley_angle(2.0))];
    let w0 = (z0 - c(0.0, 1.0)) / (z0 + c(0.0, 1.0));
    let disk = robin_function(&Region::Marked(models::disk_with_arcs(&arcs).unwrap()), w0.into(), 0.02)
        .unwrap();
    let deriv = c(0.0, 2.0) / (z0 + c(0.0, 1.0)).powi(2);
    let transferred = potlab_core::geometry::transfer_radius(disk.radius, deriv).unwrap();
    assert!(rel(via_region.radius, transferred) < 1e-2);
}

#[test]
fn arc_identities() {
    for m in [PI / 2.0, PI, 1.5 * PI] {
        let arc = Compact::Arc {
            center: c(0.0, 0.0),
            radius: 1.0,
            start: 0.0,
            sweep: m,
        };
        let cap = arc_capacity(m).unwrap();
        assert!(rel(log_capacity(&arc, 0.02).unwrap(), cap) < 1e-2);
        let disk = Region::Marked(models::disk_with_arcs(&[(0.0, m)]).unwrap());
        let ext = Region::Mapped(models::exterior(arc).unwrap());
        let r0 = robin_function(&disk, c(0.0, 0.0).into(), 0.02).unwrap();
        assert!((r0.radius * cap * cap - 1.0).abs() <= 1e-2, "m = {m}");
        for z in [c(0.0, 0.0), c(0.2, -0.3)] {
            let re = robin_function(&ext, z.into(), 0.02).unwrap();
            let rd = robin_function(&disk, z.into(), 0.02).unwrap();
            let reflected = if z.norm() == 0.0 {
                SpherePoint::Infinity
            } else {
                (1.0 / z.conj()).into()
            };
            let lhs = re.radius.ln() - (1.0 - z.norm_sqr()).ln();
            assert!((lhs - re.g(reflected).unwrap()).abs() <= 1e-2, "m = {m}, z = {z}");
            assert!(rel(rd.radius, re.radius.powi(2) / (1.0 - z.norm_sqr())) <= 1e-2);
        }
    }
}

#[test]
fn symmetry_monotonicity_and_delta() {
    let small = Region::Marked(models::disk_with_arcs(&[(0.0, PI / 2.0)]).unwrap());
    let large = Region::Marked(models::disk_with_arcs(&[(-0.5, PI)]).unwrap());
    let green = Region::Marked(MarkedDomain::whole_boundary(shapes::unit_disk()).unwrap());
    let (z1, z2) = (c(0.1, 0.4), c(-0.3, -0.2));
    let g = |r: &Region, a: Complex64, b: Complex64| {
        robin_function(r, b.into(), 0.02).unwrap().g_at(a).unwrap()
    };
    let (g12, g21) = (g(&small, z1, z2), g(&small, z2, z1));
    assert!((g12 - g21).abs() < 1e-3, "{g12} vs {g21}");
    assert!(g(&large, z1, z2) < g12);
    assert!(g(&green, z1, z2) < g(&large, z1, z2));
    let radius = |r: &Region| robin_function(r, z1.into(), 0.02).unwrap().radius;
    assert!(radius(&green) < radius(&large) && radius(&large) < radius(&small));
    let d = delta_invariant(&small, z1.into(), z2.into(), 0.02).unwrap();
    assert!(d > 0.0 && d < 1.0);
}

#[test]
fn invalid_poles() {
    let md = models::disk_with_arcs(&[(0.0, PI)]).unwrap();
    let region = Region::Marked(md);
    assert_eq!(
        robin_function(&region, c(0.0, 1.0).into(), 0.05).unwrap_err(),
        Error::PoleOnGamma
    );
    assert_eq!(
        robin_function(&region, c(0.0, -1.0).into(), 0.05).unwrap_err(),
        Error::BoundaryPole
    );
    assert!(matches!(
        robin_function(&region, c(2.0, 0.0).into(), 0.05).unwrap_err(),
        Error::OutsideDomain { .. }
    ));
}

#[test]
fn richardson_estimate_is_close() {
    let region = Region::Marked(models::disk_with_arcs(&[(0.0, PI)]).unwrap());
    let r = robin_function_extrapolated(&region, c(0.0, 0.0).into(), 0.04).unwrap();
    let est = r.richardson_estimate.unwrap();
    assert!((est - 2.0).abs() < (r.radius - 2.0).abs() + 1e-4);
}
