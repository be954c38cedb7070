//! Domains with Robin data: closed forms where they exist, the mesh solver otherwise.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::path::Path;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use potlab_core::geometry::schema::DomainFile;
use potlab_core::geometry::{
    mark_boundary, models, shapes, GammaInterval, MarkedDomain, Region, SpherePoint,
};
use potlab_core::oracle::{self, ArcComplement, DiskArc, HalfPlaneInterval};
use potlab_core::robin::{robin_function, RobinResult};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A catalog domain `B` with its marked boundary set γ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DomainRef {
    /// Unit disk, γ = ∂U.
    Disk,
    /// Unit disk, γ a union of counterclockwise arcs `[θa, θb]`.
    DiskArcs { arcs: Vec<[f64; 2]> },
    /// `{x > 0, y > 0}`, γ the imaginary half-axis.
    QuarterPlane,
    /// `{0 < Im z < π/2}`, γ the upper edge.
    Strip,
    /// Upper half-plane, γ the real interval `[a, b]`.
    HalfPlane { gamma: [f64; 2] },
    /// `{ρ < |z| < 1}`, γ the inner circle together with arcs β of the outer one.
    Annulus { inner: f64, beta: Vec<[f64; 2]> },
    /// A bounded domain file with a named γ.
    File { path: String, gamma: Option<String> },
}

/// Which part of the boundary a point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Gamma,
    Free,
}

/// Robin data for one marked domain.
pub trait Provider: Send + Sync {
    fn describe(&self) -> String;
    /// Whether every quantity comes from a closed form.
    fn exact(&self) -> bool;
    fn contains(&self, z: Complex64) -> bool;
    /// `g(z, w, γ)`.
    fn green(&self, z: SpherePoint, w: SpherePoint) -> Result<f64>;
    /// `log r(B, γ, z)`.
    fn log_radius(&self, z: SpherePoint) -> Result<f64>;
    /// Whether ∞ lies outside the closure of the domain.
    fn bounded(&self) -> bool;
    fn boundary_samples(&self, n: usize) -> Vec<(Complex64, Part)>;
    /// Distance from `w` to the closure of one boundary part (∞ when the part is empty).
    fn part_distance(&self, w: Complex64, part: Part) -> f64;
    fn interior_samples(&self, n: usize) -> Vec<Complex64>;
}

fn finite(p: SpherePoint) -> Result<Complex64> {
    p.finite()
        .ok_or_else(|| Error::Unsupported("point at infinity for this domain".into()))
}

fn distinct(z: SpherePoint, w: SpherePoint) -> Result<()> {
    if z == w {
        Err(potlab_core::Error::CoincidentPoints.into())
    } else {
        Ok(())
    }
}

fn geometric(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let r = (hi / lo).ln();
    (0..n).map(move |k| lo * (r * k as f64 / (n.max(2) - 1) as f64).exp())
}

/// Angle in `[θa, θa + 2π)` measured from `θa`.
fn angle_from(theta: f64, start: f64) -> f64 {
    (theta - start).rem_euclid(TAU)
}

fn on_arcs(theta: f64, arcs: &[[f64; 2]]) -> bool {
    arcs.iter().any(|[a, b]| angle_from(theta, *a) <= b - a)
}

/// Distance from `w` to the counterclockwise arc of the unit circle from `a` to `b`.
fn circle_arc_distance(w: Complex64, a: f64, b: f64) -> f64 {
    if w.norm() > 0.0 && on_arcs(w.arg(), &[[a, b]]) {
        (w.norm() - 1.0).abs()
    } else {
        (w - Complex64::from_polar(1.0, a))
            .norm()
            .min((w - Complex64::from_polar(1.0, b)).norm())
    }
}

fn disk_interior(n: usize, radius: f64) -> Vec<Complex64> {
    let rings = (n as f64).sqrt().ceil() as usize;
    let mut out = Vec::with_capacity(n);
    for i in 0..rings {
        for j in 0..rings {
            if out.len() == n {
                return out;
            }
            let rho = radius * ((i as f64 + 0.5) / rings as f64).sqrt();
            let th = TAU * (j as f64 + 0.37 * i as f64) / rings as f64;
            out.push(Complex64::from_polar(rho, th));
        }
    }
    out
}

fn circle_samples(n: usize, arcs: Option<&[[f64; 2]]>) -> Vec<(Complex64, Part)> {
    (0..n)
        .map(|k| {
            let th = TAU * (k as f64 + 0.5) / n as f64;
            let part = match arcs {
                None => Part::Gamma,
                Some(a) if on_arcs(th, a) => Part::Gamma,
                Some(_) => Part::Free,
            };
            (Complex64::from_polar(1.0, th), part)
        })
        .collect()
}

pub struct Disk;

impl Provider for Disk {
    fn describe(&self) -> String {
        "unit disk, γ = ∂U".into()
    }
    fn exact(&self) -> bool {
        true
    }
    fn contains(&self, z: Complex64) -> bool {
        z.norm() < 1.0
    }
    fn green(&self, z: SpherePoint, w: SpherePoint) -> Result<f64> {
        distinct(z, w)?;
        Ok(oracle::disk_green(finite(z)?, finite(w)?)?)
    }
    fn log_radius(&self, z: SpherePoint) -> Result<f64> {
        let z = finite(z)?;
        if !self.contains(z) {
            return Err(potlab_core::Error::OutsideDomain { re: z.re, im: z.im }.into());
        }
        Ok(oracle::disk_radius(z).ln())
    }
    fn boundary_samples(&self, n: usize) -> Vec<(Complex64, Part)> {
        circle_samples(n, None)
    }
    fn bounded(&self) -> bool {
        true
    }
    fn part_distance(&self, w: Complex64, part: Part) -> f64 {
        match part {
            Part::Gamma => (w.norm() - 1.0).abs(),
            Part::Free => f64::INFINITY,
        }
    }
    fn interior_samples(&self, n: usize) -> Vec<Complex64> {
        disk_interior(n, 0.98)
    }
}

/// Unit disk with γ one closed arc, by closed forms.
pub struct DiskOneArc {
    arc: [f64; 2],
    oracle: DiskArc,
}

impl DiskOneArc {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        Ok(DiskOneArc {
            arc: [a, b],
            oracle: DiskArc::new(a, b)?,
        })
    }
}

impl Provider for DiskOneArc {
    fn describe(&self) -> String {
        format!("unit disk, γ = arc [{}, {}]", self.arc[0], self.arc[1])
    }
    fn exact(&self) -> bool {
        true
    }
    fn contains(&self, z: Complex64) -> bool {
        z.norm() < 1.0
    }
    fn green(&self, z: SpherePoint, w: SpherePoint) -> Result<f64> {
        distinct(z, w)?;
        Ok(self.oracle.green(finite(z)?, finite(w)?)?)
    }
    fn log_radius(&self, z: SpherePoint) -> Result<f64> {
        Ok(self.oracle.radius(finite(z)?)?.ln())
    }
    fn boundary_samples(&self, n: usize) -> Vec<(Complex64, Part)> {
        circle_samples(n, Some(&[self.arc]))
    }
    fn bounded(&self) -> bool {
        true
    }
    fn part_distance(&self, w: Complex64, part: Part) -> f64 {
        let [a, b] = self.arc;
        match part {
            Part::Gamma => circle_arc_distance(w, a, b),
            Part::Free => circle_arc_distance(w, b, a + TAU),
        }
    }
    fn interior_samples(&self, n: usize) -> Vec<Complex64> {
        disk_interior(n, 0.98)
    }
}

pub struct QuarterPlane;

impl Provider for QuarterPlane {
    fn describe(&self) -> String {
        "quarter-plane, γ = imaginary half-axis".into()
    }
    fn exact(&self) -> bool {
        true
    }
    fn contains(&self, z: Complex64) -> bool {
        z.re > 0.0 && z.im > 0.0 && z.is_finite()
    }
    fn green(&self, z: SpherePoint, w: SpherePoint) -> Result<f64> {
        distinct(z, w)?;
        Ok(oracle::quarterplane_robin(finite(z)?, finite(w)?)?)
    }
    fn log_radius(&self, z: SpherePoint) -> Result<f64> {
        Ok(oracle::quarterplane_radius(finite(z)?)?.ln())
    }
    fn boundary_samples(&self, n: usize) -> Vec<(Complex64, Part)> {
        let half = n / 2;
        geometric(1e-2, 1e2, half)
            .map(|y| (Complex64::new(0.0, y), Part::Gamma))
            .chain(geometric(1e-2, 1e2, n - half).map(|x| (Complex64::new(x, 0.0), Part::Free)))
            .collect()
    }
    fn bounded(&self) -> bool {
        false
    }
    fn part_distance(&self, w: Complex64, part: Part) -> f64 {
        match part {
            Part::Gamma if w.im >= 0.0 => w.re.abs(),
            Part::Free if w.re >= 0.0 => w.im.abs(),
            _ => w.norm(),
        }
    }
    fn interior_samples(&self, n: usize) -> Vec<Complex64> {
        let k = (n as f64).sqrt().ceil() as usize;
        geometric(0.05, 20.0, k)
            .flat_map(|r| {
                (0..k).map(move |j| Complex64::from_polar(r, FRAC_PI_2 * (j as f64 + 0.5) / k as f64))
            })
            .take(n)
            .collect()
    }
}

pub struct Strip;

impl Provider for Strip {
    fn describe(&self) -> String {
        "strip 0 < Im z < π/2, γ = upper edge".into()
    }
    fn exact(&self) -> bool {
        true
    }
    fn contains(&self, z: Complex64) -> bool {
        z.im > 0.0 && z.im < FRAC_PI_2 && z.re.is_finite()
    }
    fn green(&self, z: SpherePoint, w: SpherePoint) -> Result<f64> {
        distinct(z, w)?;
        Ok(-oracle::strip_delta(finite(z)?, finite(w)?)?.ln())
    }
    fn log_radius(&self, z: SpherePoint) -> Result<f64> {
        Ok(oracle::strip_radius(finite(z)?)?.ln())
    }
    fn boundary_samples(&self, n: usize) -> Vec<(Complex64, Part)> {
        let half = n / 2;
        let xs = |m: usize| (0..m).map(move |k| -10.0 + 20.0 * (k as f64 + 0.5) / m as f64);
        xs(half)
            .map(|x| (Complex64::new(x, FRAC_PI_2), Part::Gamma))
            .chain(xs(n - half).map(|x| (Complex64::new(x, 0.0), Part::Free)))
            .collect()
    }
    fn bounded(&self) -> bool {
        false
    }
    fn part_distance(&self, w: Complex64, part: Part) -> f64 {
        match part {
            Part::Gamma => (w.im - FRAC_PI_2).abs(),
            Part::Free => w.im.abs(),
        }
    }
    fn interior_samples(&self, n: usize) -> Vec<Complex64> {
        let k = (n as f64).sqrt().ceil() as usize;
        (0..n)
            .map(|i| {
                let (a, b) = (i / k, i % k);
                Complex64::new(
                    -8.0 + 16.0 * (a as f64 + 0.5) / k as f64,
                    FRAC_PI_2 * (b as f64 + 0.5) / k as f64,
                )
            })
            .collect()
    }
}

pub struct HalfPlane {
    pub a: f64,
    pub b: f64,
    oracle: HalfPlaneInterval,
}

impl HalfPlane {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        Ok(HalfPlane {
            a,
            b,
            oracle: HalfPlaneInterval::new(a, b)?,
        })
    }
}

impl Provider for HalfPlane {
    fn describe(&self) -> String {
        format!("upper half-plane, γ = [{}, {}]", self.a, self.b)
    }
    fn exact(&self) -> bool {
        true
    }
    fn contains(&self, z: Complex64) -> bool {
        z.im > 0.0 && z.is_finite()
    }
    fn green(&self, z: SpherePoint, w: SpherePoint) -> Result<f64> {
        distinct(z, w)?;
        Ok(match (z, w) {
            (SpherePoint::Infinity, SpherePoint::Finite(x))
            | (SpherePoint::Finite(x), SpherePoint::Infinity) => self.oracle.green_at_infinity(x)?,
            (SpherePoint::Finite(z), SpherePoint::Finite(w)) => self.oracle.green(z, w)?,
            (SpherePoint::Infinity, SpherePoint::Infinity) => unreachable!("distinct points"),
        })
    }
    fn log_radius(&self, z: SpherePoint) -> Result<f64> {
        Ok(match z {
            SpherePoint::Infinity => self.oracle.radius_at_infinity().ln(),
            SpherePoint::Finite(z) => self.oracle.radius(z)?.ln(),
        })
    }
    fn boundary_samples(&self, n: usize) -> Vec<(Complex64, Part)> {
        let third = n / 3;
        let inner = (0..third).map(|k| {
            let x = self.a + (self.b - self.a) * (k as f64 + 0.5) / third as f64;
            (Complex64::new(x, 0.0), Part::Gamma)
        });
        let m = (n - third) / 2;
        let right = geometric(1e-3, 1e3, m).map(|s| (Complex64::new(self.b + s, 0.0), Part::Free));
        let left = geometric(1e-3, 1e3, n - third - m)
            .map(|s| (Complex64::new(self.a - s, 0.0), Part::Free));
        inner.chain(right).chain(left).collect()
    }
    fn bounded(&self) -> bool {
        false
    }
    fn part_distance(&self, w: Complex64, part: Part) -> f64 {
        let gap = match part {
            Part::Gamma => (self.a - w.re).max(w.re - self.b).max(0.0),
            Part::Free => (w.re - self.a).min(self.b - w.re).max(0.0),
        };
        gap.hypot(w.im)
    }
    fn interior_samples(&self, n: usize) -> Vec<Complex64> {
        let k = (n as f64).sqrt().ceil() as usize;
        let c = 0.5 * (self.a + self.b);
        geometric(0.05, 50.0, k)
            .flat_map(|r| {
                (0..k).map(move |j| c + Complex64::from_polar(r, PI * (j as f64 + 0.5) / k as f64))
            })
            .take(n)
            .collect()
    }
}

type PoleKey = (u64, u64);

/// Robin data from the mesh solver, one solve per pole (cached).
pub struct Numeric {
    pub region: Region,
    pub marked: MarkedDomain,
    pub h: f64,
    label: String,
    cache: Mutex<HashMap<PoleKey, Arc<RobinResult>>>,
}

impl Numeric {
    pub fn new(label: String, marked: MarkedDomain, h: f64) -> Self {
        Numeric {
            region: Region::Marked(marked.clone()),
            marked,
            h,
            label,
            cache: Mutex::new(HashMap::new()),
        }
    }

    fn solve(&self, pole: Complex64) -> Result<Arc<RobinResult>> {
        let key = (pole.re.to_bits(), pole.im.to_bits());
        if let Some(r) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(r.clone());
        }
        let r = Arc::new(robin_function(&self.region, pole.into(), self.h)?);
        self.cache.lock().expect("cache lock").insert(key, r.clone());
        Ok(r)
    }
}

impl Provider for Numeric {
    fn describe(&self) -> String {
        format!("{} (mesh solver, h = {})", self.label, self.h)
    }
    fn exact(&self) -> bool {
        false
    }
    fn contains(&self, z: Complex64) -> bool {
        self.marked.domain.contains(z)
    }
    fn green(&self, z: SpherePoint, w: SpherePoint) -> Result<f64> {
        distinct(z, w)?;
        let (z, w) = (finite(z)?, finite(w)?);
        Ok(self.solve(w)?.g_at(z)?)
    }
    fn log_radius(&self, z: SpherePoint) -> Result<f64> {
        Ok(self.solve(finite(z)?)?.log_radius())
    }
    fn boundary_samples(&self, n: usize) -> Vec<(Complex64, Part)> {
        let domain = &self.marked.domain;
        let loops = domain.loops();
        let total: f64 = loops.iter().map(|l| l.arcs.iter().map(|a| a.length()).sum::<f64>()).sum();
        let mut out = Vec::with_capacity(n);
        for (li, l) in loops.iter().enumerate() {
            for piece in self.marked.pieces(li) {
                let arc = &l.arcs[piece.arc];
                let len = arc.length() * (piece.t1 - piece.t0);
                let m = ((n as f64 * len / total).ceil() as usize).max(1);
                for k in 0..m {
                    let t = piece.t0 + (piece.t1 - piece.t0) * (k as f64 + 0.5) / m as f64;
                    let part = if piece.gamma { Part::Gamma } else { Part::Free };
                    out.push((arc.point(t), part));
                }
            }
        }
        out
    }
    fn bounded(&self) -> bool {
        self.marked.domain.is_bounded()
    }
    fn part_distance(&self, w: Complex64, part: Part) -> f64 {
        match part {
            Part::Gamma => self.marked.gamma_distance(w),
            Part::Free => self
                .marked
                .free_pieces()
                .iter()
                .filter_map(|p| {
                    let l = self.marked.domain.loop_at(p.loop_index)?;
                    Some(l.arcs[p.arc].sub_arc(p.t0, p.t1).distance(w))
                })
                .fold(f64::INFINITY, f64::min),
        }
    }
    fn interior_samples(&self, n: usize) -> Vec<Complex64> {
        let pts: Vec<Complex64> = self
            .marked
            .domain
            .loops()
            .iter()
            .flat_map(|l| l.polyline())
            .collect();
        let (mut lo, mut hi) = (pts[0], pts[0]);
        for p in &pts {
            lo = Complex64::new(lo.re.min(p.re), lo.im.min(p.im));
            hi = Complex64::new(hi.re.max(p.re), hi.im.max(p.im));
        }
        let k = (2.0 * (n as f64).sqrt()).ceil() as usize;
        let mut out = Vec::new();
        for i in 0..k {
            for j in 0..k {
                let z = Complex64::new(
                    lo.re + (hi.re - lo.re) * (i as f64 + 0.5) / k as f64,
                    lo.im + (hi.im - lo.im) * (j as f64 + 0.5) / k as f64,
                );
                if self.marked.domain.contains(z) && self.marked.domain.boundary_distance(z) > 1e-3 {
                    out.push(z);
                }
            }
        }
        out.truncate(n);
        out
    }
}

fn annulus(inner: f64, beta: &[[f64; 2]]) -> Result<MarkedDomain> {
    let spec = shapes::annulus(inner)?;
    let mut sel: Vec<GammaInterval> = Vec::new();
    for [a, b] in beta {
        sel.extend(shapes::angular_selection(&spec, 0, *a, *b)?);
    }
    let hole = spec.loop_at(1).expect("annulus has a hole");
    sel.extend((0..hole.arcs.len()).map(|k| GammaInterval::whole(1, k)));
    Ok(mark_boundary(spec, &sel)?)
}

impl DomainRef {
    /// The complement of γ in the sphere, for a disk marked on a single arc.
    pub fn arc_complement(&self) -> Option<ArcComplement> {
        match self {
            DomainRef::DiskArcs { arcs } if arcs.len() == 1 => {
                ArcComplement::new(arcs[0][0], arcs[0][1]).ok()
            }
            _ => None,
        }
    }

    /// Build the provider; `base` resolves relative file paths and `h` sets
    /// the mesh size of numeric providers.
    pub fn provider(&self, base: Option<&Path>, h: f64) -> Result<Arc<dyn Provider>> {
        Ok(match self {
            DomainRef::Disk => Arc::new(Disk),
            DomainRef::DiskArcs { arcs } => match arcs.as_slice() {
                [[a, b]] => Arc::new(DiskOneArc::new(*a, *b)?),
                _ => {
                    let pairs: Vec<(f64, f64)> = arcs.iter().map(|[a, b]| (*a, *b)).collect();
                    Arc::new(Numeric::new(
                        format!("unit disk, γ = {} arcs", arcs.len()),
                        models::disk_with_arcs(&pairs)?,
                        h,
                    ))
                }
            },
            DomainRef::QuarterPlane => Arc::new(QuarterPlane),
            DomainRef::Strip => Arc::new(Strip),
            DomainRef::HalfPlane { gamma } => Arc::new(HalfPlane::new(gamma[0], gamma[1])?),
            DomainRef::Annulus { inner, beta } => Arc::new(Numeric::new(
                format!("annulus {inner} < |z| < 1"),
                annulus(*inner, beta)?,
                h,
            )),
            DomainRef::File { path, gamma } => {
                let full = match base {
                    Some(b) => b.join(path),
                    None => Path::new(path).to_path_buf(),
                };
                let text = std::fs::read_to_string(&full)
                    .map_err(|e| Error::Io(format!("{}: {e}", full.display())))?;
                let file = DomainFile::parse(&text)?;
                match file.region(gamma.as_deref())? {
                    Region::Marked(md) => Arc::new(Numeric::new(
                        format!("{} [{}]", file.id, gamma.as_deref().unwrap_or("full")),
                        md,
                        h,
                    )),
                    Region::Mapped(_) => {
                        return Err(Error::Unsupported(
                            "model domains in scenarios must use the catalog kinds".into(),
                        ))
                    }
                }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn closed_form_symmetry() {
        let providers: Vec<(Arc<dyn Provider>, Complex64, Complex64)> = vec![
            (Arc::new(Disk), c(0.1, 0.2), c(-0.4, 0.3)),
            (Arc::new(DiskOneArc::new(0.0, 2.0).unwrap()), c(0.1, 0.2), c(-0.4, 0.3)),
            (Arc::new(QuarterPlane), c(0.5, 1.0), c(2.0, 0.3)),
            (Arc::new(Strip), c(0.5, 1.0), c(-1.0, 0.3)),
            (Arc::new(HalfPlane::new(-1.0, 1.0).unwrap()), c(0.5, 1.0), c(-2.0, 0.3)),
        ];
        for (p, z, w) in providers {
            let a = p.green(z.into(), w.into()).unwrap();
            let b = p.green(w.into(), z.into()).unwrap();
            assert!((a - b).abs() < 1e-12, "{}", p.describe());
            assert!(a > 0.0);
        }
    }

    #[test]
    fn boundary_classification() {
        let p = DiskOneArc::new(0.0, PI).unwrap();
        assert!(p.part_distance(c(0.0, 1.0), Part::Gamma) < 1e-15);
        assert!((p.part_distance(c(0.0, -1.0), Part::Gamma) - 2f64.sqrt()).abs() < 1e-15);
        assert!(p.part_distance(c(0.0, -1.0), Part::Free) < 1e-15);
        assert!((p.part_distance(c(0.0, 0.5), Part::Gamma) - 0.5).abs() < 1e-15);
        for (w, part) in p.boundary_samples(64) {
            assert!(p.part_distance(w, part) < 1e-12);
        }
        let q = QuarterPlane;
        for (w, part) in q.boundary_samples(64) {
            assert!(q.part_distance(w, part) < 1e-12);
        }
        let h = HalfPlane::new(-1.0, 1.0).unwrap();
        assert!((h.log_radius(SpherePoint::Infinity).unwrap() - 2f64.ln()).abs() < 1e-15);
    }
}
