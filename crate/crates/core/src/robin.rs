use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::models::{self, Compact, ModelKind};
use crate::geometry::{
    mesh_domain, transfer_radius, DomainSpec, MarkedDomain, Refinement, Region, SpherePoint,
};
use crate::solver::{solve_mixed, BoundaryData, HarmonicField};

/// Factor applied to reported tolerances within distance `h` of a point where
/// γ meets the free boundary, where the field converges slowly.
pub const JUNCTION_WIDENING: f64 = 3.0;

/// Robin (or Green) function with its pole data.
///
/// The field stored is the regular part `h = g + log|w − w0|` on the bounded
/// model domain, where `w = φ(z)` is the model coordinate.
#[derive(Debug, Clone)]
pub struct RobinResult {
    pub regular_part: HarmonicField,
    pub pole: SpherePoint,
    pub model_pole: Complex64,
    pub radius: f64,
    pub capacity: f64,
    pub region: Arc<Region>,
    pub h: f64,
    /// Radius extrapolated from the runs at `2h` and `h`, when requested.
    pub richardson_estimate: Option<f64>,
}

impl RobinResult {
    /// `g_B(z, z0, γ)` at a point of the original domain.
    pub fn g(&self, z: SpherePoint) -> Result<f64> {
        let w = self.region.to_model(z)?;
        let d = (w - self.model_pole).norm();
        if d == 0.0 {
            return Err(Error::CoincidentPoints);
        }
        Ok(self.regular_part.evaluate(w)? - d.ln())
    }

    pub fn g_at(&self, z: Complex64) -> Result<f64> {
        self.g(z.into())
    }

    /// Regular part in the original coordinate: `g + log|z − z0|`, or
    /// `g − log|z|` for the pole at infinity.
    pub fn regular_at(&self, z: Complex64) -> Result<f64> {
        let g = self.g_at(z)?;
        Ok(match self.pole {
            SpherePoint::Finite(z0) => g + (z - z0).norm().ln(),
            SpherePoint::Infinity => g - z.norm().ln(),
        })
    }

    pub fn log_radius(&self) -> f64 {
        self.radius.ln()
    }

    /// Tolerance to attach to `g` at `z`: `base`, or `JUNCTION_WIDENING × base`
    /// within `h` of a γ/free junction (distance taken in the model domain).
    pub fn tolerance_at(&self, z: SpherePoint, base: f64) -> Result<f64> {
        let w = self.region.to_model(z)?;
        let grading = &self.regular_part.mesh.grading;
        let near = grading.junctions.iter().any(|j| (w - j).norm() <= self.h);
        Ok(if near { JUNCTION_WIDENING * base } else { base })
    }
}

fn classify_pole(model: &MarkedDomain, w0: Complex64) -> Result<()> {
    let scale = model
        .domain
        .loops()
        .iter()
        .map(|l| l.scale())
        .fold(0.0, f64::max);
    let tol = 1e-10 * scale.max(1.0);
    if model.gamma_distance(w0) <= tol {
        return Err(Error::PoleOnGamma);
    }
    if model.domain.boundary_distance(w0) <= tol {
        return Err(Error::BoundaryPole);
    }
    if !model.domain.contains(w0) {
        return Err(Error::OutsideDomain { re: w0.re, im: w0.im });
    }
    Ok(())
}

/// Solve for the Robin function of `region` with pole `pole` at mesh size `h`.
pub fn robin_function(region: &Region, pole: SpherePoint, h: f64) -> Result<RobinResult> {
    robin_on(Arc::new(region.clone()), pole, h)
}

fn robin_on(region: Arc<Region>, pole: SpherePoint, h: f64) -> Result<RobinResult> {
    let model = region.model();
    let w0 = region.to_model(pole)?;
    classify_pole(model, w0)?;
    let mesh = Arc::new(mesh_domain(model, h, &[Refinement::at(w0)])?);
    let data = BoundaryData::from_fn(move |w, _| (w - w0).norm().ln()).with_flux(move |w, n| {
        let d = w - w0;
        (d.re * n.re + d.im * n.im) / d.norm_sqr()
    });
    let field = solve_mixed(mesh, &data)?;
    let r_model = field.evaluate(w0)?.exp();
    let radius = transfer_radius(r_model, region.model_derivative(pole)?)?;
    Ok(RobinResult {
        regular_part: field,
        pole,
        model_pole: w0,
        radius,
        capacity: 1.0 / radius,
        region,
        h,
        richardson_estimate: None,
    })
}

/// Robin function at `h` with a Richardson estimate of the radius from the
/// runs at `2h` and `h` (second order in `h`).
pub fn robin_function_extrapolated(
    region: &Region,
    pole: SpherePoint,
    h: f64,
) -> Result<RobinResult> {
    let region = Arc::new(region.clone());
    let (coarse, fine) = rayon::join(
        || robin_on(region.clone(), pole, 2.0 * h),
        || robin_on(region.clone(), pole, h),
    );
    let (coarse, mut fine) = (coarse?, fine?);
    let l = (4.0 * fine.radius.ln() - coarse.radius.ln()) / 3.0;
    fine.richardson_estimate = Some(l.exp());
    Ok(fine)
}

/// Green function: the Robin function with γ = ∂B.
pub fn green_function(domain: &DomainSpec, pole: SpherePoint, h: f64) -> Result<RobinResult> {
    let region = if domain.contains_infinity {
        Region::Mapped(models::exterior(Compact::Loops(domain.holes.clone()))?)
    } else {
        Region::Marked(MarkedDomain::whole_boundary(domain.clone())?)
    };
    robin_function(&region, pole, h)
}

/// Robin capacity `1 / r(B, γ, z0)` for an interior pole or the pole at ∞.
///
/// For the upper half-plane with γ a single real interval and the boundary
/// pole at ∞, reflection across the real axis reduces the problem to the
/// exterior of the segment.
pub fn robin_capacity(region: &Region, pole: SpherePoint, h: f64) -> Result<f64> {
    if let (Some(ModelKind::UpperHalfPlane { gamma }), SpherePoint::Infinity) =
        (region.kind(), pole)
    {
        return match gamma.as_slice() {
            [(a, b)] if a.is_finite() && b.is_finite() => log_capacity(
                &Compact::Segment {
                    a: Complex64::new(*a, 0.0),
                    b: Complex64::new(*b, 0.0),
                },
                h,
            ),
            _ => Err(Error::Unsupported(
                "pole at infinity of the half-plane needs γ to be one bounded interval".into(),
            )),
        };
    }
    if !region.contains(pole) {
        let w0 = region.to_model(pole)?;
        classify_pole(region.model(), w0)?;
    }
    Ok(robin_function(region, pole, h)?.capacity)
}

/// Logarithmic capacity of a compact set, `r⁻¹(C̄ \ K, ∞)`.
pub fn log_capacity(compact: &Compact, h: f64) -> Result<f64> {
    let region = Region::Mapped(models::exterior(compact.clone())?);
    Ok(robin_function(&region, SpherePoint::Infinity, h)?.capacity)
}

/// `δ(z, w; B, γ) = exp(−g_B(z, w, γ))`, symmetrized over both pole choices.
pub fn delta_invariant(region: &Region, z: SpherePoint, w: SpherePoint, h: f64) -> Result<f64> {
    if z == w {
        return Err(Error::CoincidentPoints);
    }
    let (a, b) = rayon::join(
        || robin_function(region, w, h).and_then(|r| r.g(z)),
        || robin_function(region, z, h).and_then(|r| r.g(w)),
    );
    Ok((-(a? + b?) / 2.0).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::shapes;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn tolerance_widens_only_near_junctions() {
        let md = Region::Marked(models::disk_with_arcs(&[(0.0, std::f64::consts::PI)]).unwrap());
        let r = robin_function(&md, c(0.0, 0.0).into(), 0.05).unwrap();
        let near = r.tolerance_at(c(0.99, 0.01).into(), 1e-3).unwrap();
        let far = r.tolerance_at(c(0.0, 0.5).into(), 1e-3).unwrap();
        assert_eq!((near, far), (3e-3, 1e-3));
        let g = green_function(&shapes::unit_disk(), c(0.0, 0.0).into(), 0.05).unwrap();
        assert_eq!(g.tolerance_at(c(0.99, 0.0).into(), 1e-3).unwrap(), 1e-3);
    }

    #[test]
    fn disk_center_green() {
        let d = shapes::unit_disk();
        let r = green_function(&d, c(0.0, 0.0).into(), 0.05).unwrap();
        assert!((r.radius - 1.0).abs() < 1e-3);
        let g = r.g_at(c(0.5, 0.0)).unwrap();
        assert!((g - 2f64.ln()).abs() < 1e-3);
    }

    #[test]
    fn pole_on_gamma_rejected() {
        let d = shapes::unit_disk();
        let md = MarkedDomain::whole_boundary(d).unwrap();
        let e = robin_function(&Region::Marked(md), c(1.0, 0.0).into(), 0.1).unwrap_err();
        assert_eq!(e, Error::PoleOnGamma);
    }

    #[test]
    fn coincident_delta_rejected() {
        let md = MarkedDomain::whole_boundary(shapes::unit_disk()).unwrap();
        let p = SpherePoint::Finite(c(0.1, 0.0));
        assert_eq!(
            delta_invariant(&Region::Marked(md), p, p, 0.1).unwrap_err(),
            Error::CoincidentPoints
        );
    }
}
