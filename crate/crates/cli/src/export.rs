//! Plot-ready CSV samples of computed fields.

use std::path::Path;

use potlab_core::geometry::{Region, SpherePoint};
use potlab_core::robin::RobinResult;
use potlab_core::solver::{export_grid_csv, HarmonicField};
use potlab_core::Complex64;

use crate::error::{CliError, Result};
use crate::input::{BBox, Grid};

/// A field that can be sampled on a grid.
pub enum Field<'a> {
    /// A Robin or Green function `g(·, pole)`.
    Robin(&'a RobinResult),
    /// A condenser potential on its mesh.
    Potential(&'a HarmonicField),
}

impl Field<'_> {
    fn value(&self, z: Complex64) -> Option<f64> {
        let v = match self {
            Field::Robin(r) => {
                if !r.region.contains(SpherePoint::Finite(z)) {
                    return None;
                }
                r.g_at(z).ok()?
            }
            Field::Potential(f) => f.evaluate(z).ok()?,
        };
        v.is_finite().then_some(v)
    }

    /// Bounding box of the domain, when it is bounded.
    pub fn default_box(&self) -> Option<BBox> {
        let md = match self {
            Field::Robin(r) => match r.region.as_ref() {
                Region::Marked(md) => md,
                Region::Mapped(_) => return None,
            },
            Field::Potential(f) => {
                let mut lo = Complex64::new(f64::INFINITY, f64::INFINITY);
                let mut hi = -lo;
                for v in &f.mesh.vertices {
                    lo = Complex64::new(lo.re.min(v.re), lo.im.min(v.im));
                    hi = Complex64::new(hi.re.max(v.re), hi.im.max(v.im));
                }
                return Some(BBox { lo, hi });
            }
        };
        if !md.domain.is_bounded() {
            return None;
        }
        let outer = md.domain.outer.as_ref()?;
        let mut lo = Complex64::new(f64::INFINITY, f64::INFINITY);
        let mut hi = -lo;
        for v in outer.polyline() {
            lo = Complex64::new(lo.re.min(v.re), lo.im.min(v.im));
            hi = Complex64::new(hi.re.max(v.re), hi.im.max(v.im));
        }
        Some(BBox { lo, hi })
    }
}

/// Sample `field` on an `nx × ny` grid and write rows `x,y,value`, leaving
/// the value empty outside the domain. Returns the row count.
pub fn export_field(field: &Field, grid: Grid, bbox: Option<BBox>, path: &Path) -> Result<usize> {
    let b = bbox.or_else(|| field.default_box()).ok_or_else(|| {
        CliError::Usage("unbounded domain: pass --bbox x0,y0,x1,y1 for the export grid".into())
    })?;
    export_grid_csv(path, b.lo, b.hi, grid.nx, grid.ny, |z| field.value(z)).map_err(|e| match e {
        potlab_core::Error::Io(m) => CliError::Input {
            path: path.display().to_string(),
            message: m,
        },
        other => other.into(),
    })
}
