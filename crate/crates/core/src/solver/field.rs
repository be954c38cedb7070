use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::Mesh;

/// Piecewise-linear function on a mesh.
#[derive(Debug, Clone)]
pub struct HarmonicField {
    pub mesh: Arc<Mesh>,
    pub values: Vec<f64>,
}

/// Gradients of the barycentric basis functions of a triangle, and its area.
pub fn basis_gradients(p: [Complex64; 3]) -> ([Complex64; 3], f64) {
    let area2 = (p[1] - p[0]).re * (p[2] - p[0]).im - (p[1] - p[0]).im * (p[2] - p[0]).re;
    let mut g = [Complex64::new(0.0, 0.0); 3];
    for (i, gi) in g.iter_mut().enumerate() {
        let e = p[(i + 2) % 3] - p[(i + 1) % 3];
        // rotate the opposite edge by −90°
        *gi = Complex64::new(e.im, -e.re) / area2;
    }
    (g, 0.5 * area2)
}

fn barycentric(p: [Complex64; 3], z: Complex64) -> [f64; 3] {
    let d = (p[1] - p[0]).re * (p[2] - p[0]).im - (p[1] - p[0]).im * (p[2] - p[0]).re;
    let l1 = ((z - p[0]).re * (p[2] - p[0]).im - (z - p[0]).im * (p[2] - p[0]).re) / d;
    let l2 = ((p[1] - p[0]).re * (z - p[0]).im - (p[1] - p[0]).im * (z - p[0]).re) / d;
    [1.0 - l1 - l2, l1, l2]
}

fn point_triangle_distance(p: [Complex64; 3], z: Complex64) -> f64 {
    let b = barycentric(p, z);
    if b.iter().all(|&x| x >= 0.0) {
        return 0.0;
    }
    (0..3)
        .map(|k| crate::geometry::spatial::segment_distance(z, p[k], p[(k + 1) % 3]))
        .fold(f64::INFINITY, f64::min)
}

impl HarmonicField {
    pub fn new(mesh: Arc<Mesh>, values: Vec<f64>) -> Self {
        assert_eq!(mesh.vertices.len(), values.len());
        HarmonicField { mesh, values }
    }

    fn corners(&self, t: usize) -> [Complex64; 3] {
        self.mesh.triangles[t].map(|i| self.mesh.vertices[i])
    }

    /// Gradient of the field on triangle `t`.
    pub fn gradient(&self, t: usize) -> Complex64 {
        let (g, _) = basis_gradients(self.corners(t));
        let tri = self.mesh.triangles[t];
        (0..3).map(|k| g[k] * self.values[tri[k]]).sum()
    }

    /// Locate `z`: containing triangle and barycentric weights. Points just
    /// outside the polygonal boundary (within 5% of the local element size,
    /// which covers the gap between a curved boundary and its chords) are
    /// snapped to the nearest triangle.
    pub fn locate(&self, z: Complex64) -> Option<(usize, [f64; 3])> {
        let loc = self.mesh.locator();
        let mut best: Option<(f64, usize)> = None;
        let mut found = None;
        loc.visit(z, 0.0, |t| {
            if found.is_some() {
                return;
            }
            let p = self.corners(t);
            let b = barycentric(p, z);
            if b.iter().all(|&x| x >= -1e-12) {
                found = Some((t, b));
            }
        });
        if found.is_some() {
            return found;
        }
        let reach = self.mesh.grading.h;
        loc.visit(z, reach, |t| {
            let p = self.corners(t);
            let d = point_triangle_distance(p, z);
            let diam = self.mesh.triangle_diameter(t);
            if d <= 0.05 * diam && best.map_or(true, |(bd, _)| d < bd) {
                best = Some((d, t));
            }
        });
        best.map(|(_, t)| {
            let b = barycentric(self.corners(t), z).map(|x| x.max(0.0));
            let s: f64 = b.iter().sum();
            (t, b.map(|x| x / s))
        })
    }

    /// Barycentric interpolation at `z`.
    pub fn evaluate(&self, z: Complex64) -> Result<f64> {
        let (t, b) = self
            .locate(z)
            .ok_or(Error::OutsideDomain { re: z.re, im: z.im })?;
        let tri = self.mesh.triangles[t];
        Ok((0..3).map(|k| b[k] * self.values[tri[k]]).sum())
    }

    /// `∫∫ |∇v|²` of the piecewise-linear field (exact for the discrete field).
    pub fn energy(&self) -> f64 {
        (0..self.mesh.triangles.len())
            .map(|t| {
                let g = self.gradient(t);
                self.mesh.triangle_area(t) * g.norm_sqr()
            })
            .sum()
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)))
    }
}

/// Dirichlet energy of a field.
pub fn dirichlet_energy(field: &HarmonicField) -> f64 {
    field.energy()
}

/// Interpolate `field` at `z`.
pub fn evaluate(field: &HarmonicField, z: Complex64) -> Result<f64> {
    field.evaluate(z)
}
