//! Numeric budget for verdicts that rely on the mesh solver.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use potlab_core::geometry::{models, shapes, MarkedDomain, Region};
use potlab_core::oracle::{disk_green, disk_radius, DiskArc};
use potlab_core::robin::robin_function;

use crate::error::Result;

/// Slack for verdicts computed entirely from closed forms: floating-point
/// round-off only.
pub const ROUNDOFF: f64 = 1e-9;

/// Multiplier applied to the calibration discrepancy.
pub const SAFETY: f64 = 3.0;

/// Largest oracle–solver gap at mesh size `h` over the calibration suite:
/// the Green function of the unit disk and the Robin function of the disk
/// marked on a half circle (values of `g` and `log r`).
pub fn calibration_discrepancy(h: f64) -> Result<f64> {
    let probes = [
        Complex64::new(0.5, 0.1),
        Complex64::new(-0.3, 0.6),
        Complex64::new(0.1, -0.7),
        Complex64::new(-0.6, -0.2),
    ];
    let mut worst = 0.0f64;

    let disk = Region::Marked(MarkedDomain::whole_boundary(shapes::unit_disk())?);
    let pole = Complex64::new(0.3, 0.1);
    let r = robin_function(&disk, pole.into(), h)?;
    worst = worst.max((r.log_radius() - disk_radius(pole).ln()).abs());
    for z in probes {
        worst = worst.max((r.g_at(z)? - disk_green(z, pole)?).abs());
    }

    let arc = Region::Marked(models::disk_with_arcs(&[(0.0, PI)])?);
    let oracle = DiskArc::new(0.0, PI)?;
    let pole = Complex64::new(0.2, -0.1);
    let r = robin_function(&arc, pole.into(), h)?;
    worst = worst.max((r.log_radius() - oracle.radius(pole)?.ln()).abs());
    for z in probes {
        worst = worst.max((r.g_at(z)? - oracle.green(z, pole)?).abs());
    }
    Ok(worst)
}

/// `SAFETY ×` the calibration discrepancy at `h`, computed once per `h`.
pub fn numeric_budget(h: f64) -> Result<f64> {
    static CACHE: OnceLock<Mutex<HashMap<u64, f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(b) = cache.lock().expect("budget cache").get(&h.to_bits()) {
        return Ok(*b);
    }
    let b = SAFETY * calibration_discrepancy(h)?;
    cache.lock().expect("budget cache").insert(h.to_bits(), b);
    Ok(b)
}
