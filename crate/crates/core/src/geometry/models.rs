//! Unbounded domains realized as conformal images of bounded models.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;

use super::arc::ArcSegment;
use super::domain::{
    make_domain, mark_boundary, shapes, winding_number, BoundaryLoop, DomainSpec, GammaInterval,
    MarkedDomain,
};
use super::premap::{mobius_arc_image, slit_opening, MapStep, PreMap, SpherePoint};
use crate::error::{Error, Result};

/// A compact set whose complement is an exterior domain.
#[derive(Debug, Clone, PartialEq)]
pub enum Compact {
    Disk {
        center: Complex64,
        radius: f64,
    },
    Segment {
        a: Complex64,
        b: Complex64,
    },
    /// Arc of the circle `|z − center| = radius` from angle `start`,
    /// counterclockwise through `sweep` (`0 < sweep < 2π`).
    Arc {
        center: Complex64,
        radius: f64,
        start: f64,
        sweep: f64,
    },
    /// Union of the closed regions bounded by the loops.
    Loops(Vec<BoundaryLoop>),
}

impl Compact {
    pub fn contains(&self, z: Complex64) -> bool {
        match self {
            Compact::Disk { center, radius } => (z - center).norm() <= *radius,
            Compact::Segment { a, b } => ArcSegment::Line { a: *a, b: *b }.distance(z) == 0.0,
            Compact::Arc {
                center,
                radius,
                start,
                sweep,
            } => {
                let arc = ArcSegment::Circle {
                    center: *center,
                    radius: *radius,
                    start: *start,
                    sweep: *sweep,
                };
                arc.distance(z) <= 1e-15 * radius
            }
            Compact::Loops(loops) => loops.iter().any(|l| winding_number(&l.polyline(), z) != 0),
        }
    }
}

/// Which unbounded domain a mapped region represents.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelKind {
    /// `{Im z > 0}` with γ a union of real intervals (endpoints may be infinite).
    UpperHalfPlane { gamma: Vec<(f64, f64)> },
    /// `{Re z > 0, Im z > 0}` with γ the imaginary half-axis; the positive real
    /// half-axis is free.
    QuarterPlane,
    /// `{0 < Im z < π/2}` with γ the upper edge; the real axis is free.
    Strip,
    /// Complement of a compact set, γ the whole boundary.
    Exterior(Compact),
}

/// A region given by a premap `φ` onto a bounded marked model domain.
#[derive(Debug, Clone)]
pub struct MappedRegion {
    pub kind: ModelKind,
    pub model: MarkedDomain,
    pub premap: PreMap,
}

/// Any domain the solvers accept.
#[derive(Debug, Clone)]
pub enum Region {
    Marked(MarkedDomain),
    Mapped(MappedRegion),
}

impl From<MarkedDomain> for Region {
    fn from(md: MarkedDomain) -> Self {
        Region::Marked(md)
    }
}

impl From<MappedRegion> for Region {
    fn from(m: MappedRegion) -> Self {
        Region::Mapped(m)
    }
}

/// Angle on the unit circle of the Cayley image of a real point.
pub fn cayley_angle(x: f64) -> f64 {
    PI + 2.0 * x.atan()
}

impl Region {
    pub fn model(&self) -> &MarkedDomain {
        match self {
            Region::Marked(md) => md,
            Region::Mapped(m) => &m.model,
        }
    }

    pub fn premap(&self) -> PreMap {
        match self {
            Region::Marked(_) => PreMap::identity(),
            Region::Mapped(m) => m.premap.clone(),
        }
    }

    pub fn kind(&self) -> Option<&ModelKind> {
        match self {
            Region::Marked(_) => None,
            Region::Mapped(m) => Some(&m.kind),
        }
    }

    /// Whether `p` is an interior point.
    pub fn contains(&self, p: SpherePoint) -> bool {
        match (self, p) {
            (Region::Marked(md), SpherePoint::Finite(z)) => md.domain.contains(z),
            (Region::Marked(md), SpherePoint::Infinity) => md.domain.contains_infinity,
            (Region::Mapped(m), SpherePoint::Finite(z)) => match &m.kind {
                ModelKind::UpperHalfPlane { .. } => z.im > 0.0,
                ModelKind::QuarterPlane => z.re > 0.0 && z.im > 0.0,
                ModelKind::Strip => z.im > 0.0 && z.im < FRAC_PI_2,
                ModelKind::Exterior(k) => !k.contains(z),
            },
            (Region::Mapped(m), SpherePoint::Infinity) => matches!(m.kind, ModelKind::Exterior(_)),
        }
    }

    pub fn to_model(&self, p: SpherePoint) -> Result<Complex64> {
        match self {
            Region::Marked(_) => p
                .finite()
                .ok_or_else(|| Error::InvalidArgument("bounded domain has no point at infinity".into())),
            Region::Mapped(m) => m
                .premap
                .apply(p)?
                .finite()
                .ok_or_else(|| Error::InvalidArgument("point maps to infinity".into())),
        }
    }

    /// Derivative of the premap in local coordinates.
    pub fn model_derivative(&self, p: SpherePoint) -> Result<Complex64> {
        match self {
            Region::Marked(_) => Ok(Complex64::new(1.0, 0.0)),
            Region::Mapped(m) => m.premap.local_derivative(p),
        }
    }
}

/// Upper half-plane with γ a union of real intervals.
pub fn upper_half_plane(gamma: &[(f64, f64)]) -> Result<MappedRegion> {
    if gamma.is_empty() {
        return Err(Error::EmptyGamma);
    }
    let mut arcs = Vec::new();
    for &(a, b) in gamma {
        if !(b > a) {
            return Err(Error::DegenerateInterval {
                loop_index: 0,
                arc: 0,
            });
        }
        arcs.push((cayley_angle(a), cayley_angle(b)));
    }
    Ok(MappedRegion {
        kind: ModelKind::UpperHalfPlane {
            gamma: gamma.to_vec(),
        },
        model: shapes::disk_with_arcs(&arcs)?,
        premap: PreMap::new(vec![MapStep::cayley_upper()]),
    })
}

/// Model disk for the quarter-plane and the strip: γ is the upper half circle.
fn upper_half_circle_disk() -> Result<MarkedDomain> {
    shapes::disk_with_arcs(&[(0.0, PI)])
}

pub fn quarter_plane() -> MappedRegion {
    MappedRegion {
        kind: ModelKind::QuarterPlane,
        model: upper_half_circle_disk().expect("static model"),
        premap: PreMap::new(vec![MapStep::Square, MapStep::cayley_upper()]),
    }
}

pub fn strip() -> MappedRegion {
    MappedRegion {
        kind: ModelKind::Strip,
        model: upper_half_circle_disk().expect("static model"),
        premap: PreMap::new(vec![MapStep::Exp, MapStep::Square, MapStep::cayley_upper()]),
    }
}

/// Complement of a compact set, marked on its whole boundary.
pub fn exterior(compact: Compact) -> Result<MappedRegion> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let (model, premap) = match &compact {
        Compact::Disk { center, radius } => {
            if !(*radius > 0.0) {
                return Err(Error::PolarSet);
            }
            (
                MarkedDomain::whole_boundary(shapes::unit_disk())?,
                PreMap::new(vec![MapStep::mobius(
                    zero,
                    Complex64::new(*radius, 0.0),
                    one,
                    -center,
                )?]),
            )
        }
        Compact::Segment { a, b } => {
            if (b - a).norm() == 0.0 {
                return Err(Error::PolarSet);
            }
            (
                MarkedDomain::whole_boundary(shapes::unit_disk())?,
                slit_opening(*a, (a + b) * 0.5, *b)?.then(MapStep::cayley_right()),
            )
        }
        Compact::Arc {
            center,
            radius,
            start,
            sweep,
        } => {
            if !(*radius > 0.0 && *sweep > 0.0) {
                return Err(Error::PolarSet);
            }
            if *sweep >= TAU {
                return exterior(Compact::Disk {
                    center: *center,
                    radius: *radius,
                });
            }
            let p = |th: f64| center + Complex64::from_polar(*radius, th);
            (
                MarkedDomain::whole_boundary(shapes::unit_disk())?,
                slit_opening(p(*start), p(start + 0.5 * sweep), p(start + sweep))?
                    .then(MapStep::cayley_right()),
            )
        }
        Compact::Loops(loops) => exterior_of_loops(loops)?,
    };
    Ok(MappedRegion {
        kind: ModelKind::Exterior(compact),
        model,
        premap,
    })
}

fn exterior_of_loops(loops: &[BoundaryLoop]) -> Result<(MarkedDomain, PreMap)> {
    if loops.is_empty() {
        return Err(Error::PolarSet);
    }
    // validate as holes of an unbounded domain (this also orients them clockwise)
    let spec = make_domain(DomainSpec {
        outer: None,
        holes: loops.to_vec(),
        contains_infinity: true,
    })?;
    let first = &spec.holes[0];
    let zs = interior_point(first)?;
    let one = Complex64::new(1.0, 0.0);
    let inv = MapStep::mobius(Complex64::new(0.0, 0.0), one, one, -zs)?;
    let map_loop = |l: &BoundaryLoop| -> Result<BoundaryLoop> {
        Ok(BoundaryLoop::new(
            l.arcs
                .iter()
                .map(|a| mobius_arc_image(&inv, a))
                .collect::<Result<Vec<_>>>()?,
        ))
    };
    let outer = map_loop(first)?;
    let holes = spec.holes[1..]
        .iter()
        .map(map_loop)
        .collect::<Result<Vec<_>>>()?;
    let model = make_domain(DomainSpec {
        outer: Some(outer),
        holes,
        contains_infinity: false,
    })?;
    Ok((MarkedDomain::whole_boundary(model)?, PreMap::new(vec![inv])))
}

/// A point well inside a loop (largest distance to the boundary on a grid).
fn interior_point(l: &BoundaryLoop) -> Result<Complex64> {
    let poly = l.polyline();
    let (mut lo, mut hi) = (poly[0], poly[0]);
    for p in &poly {
        lo = Complex64::new(lo.re.min(p.re), lo.im.min(p.im));
        hi = Complex64::new(hi.re.max(p.re), hi.im.max(p.im));
    }
    let n = 48;
    let mut best: Option<(f64, Complex64)> = None;
    for i in 1..n {
        for j in 1..n {
            let z = Complex64::new(
                lo.re + (hi.re - lo.re) * i as f64 / n as f64,
                lo.im + (hi.im - lo.im) * j as f64 / n as f64,
            );
            if winding_number(&poly, z) == 0 {
                continue;
            }
            let d = l.arcs.iter().map(|a| a.distance(z)).fold(f64::INFINITY, f64::min);
            if best.map_or(true, |(bd, _)| d > bd) {
                best = Some((d, z));
            }
        }
    }
    best.map(|(_, z)| z).ok_or(Error::PolarSet)
}

/// Unit disk with γ a set of counterclockwise angular intervals of the circle.
pub fn disk_with_arcs(arcs: &[(f64, f64)]) -> Result<MarkedDomain> {
    shapes::disk_with_arcs(arcs)
}

/// The γ selection on the unit circle for the Cayley image of `[a, b]`.
pub fn cayley_selection(domain: &DomainSpec, a: f64, b: f64) -> Result<Vec<GammaInterval>> {
    shapes::angular_selection(domain, 0, cayley_angle(a), cayley_angle(b))
}

/// Mark an exterior-type model on its whole boundary (used by schema loaders).
pub fn whole(domain: DomainSpec) -> Result<MarkedDomain> {
    let sel: Vec<GammaInterval> = domain
        .loops()
        .iter()
        .enumerate()
        .flat_map(|(li, l)| (0..l.arcs.len()).map(move |a| GammaInterval::whole(li, a)))
        .collect();
    mark_boundary(domain, &sel)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quarter_plane_pole_lands_at_one_third() {
        let q = Region::from(quarter_plane());
        let w = q.to_model(c(1.0, 1.0).into()).unwrap();
        assert!((w - c(1.0 / 3.0, 0.0)).norm() < 1e-15);
        let d = q.model_derivative(c(1.0, 1.0).into()).unwrap();
        assert!((d.norm() - 4.0 * 2f64.sqrt() / 9.0).abs() < 1e-15);
    }

    #[test]
    fn quarter_plane_gamma_is_upper_half_circle() {
        let q = quarter_plane();
        for y in [0.1, 1.0, 5.0] {
            let w = q.premap.apply_finite(c(0.0, y)).unwrap();
            assert!(q.model.gamma_distance(w) < 1e-12);
        }
        for x in [0.1, 1.0, 5.0] {
            let w = q.premap.apply_finite(c(x, 0.0)).unwrap();
            assert!(q.model.gamma_distance(w) > 1e-3);
        }
    }

    #[test]
    fn strip_edges() {
        let s = strip();
        let w = s.premap.apply_finite(c(0.7, FRAC_PI_2)).unwrap();
        assert!(s.model.gamma_distance(w) < 1e-12);
        let w = s.premap.apply_finite(c(0.7, 0.0)).unwrap();
        assert!(s.model.gamma_distance(w) > 1e-3);
    }

    #[test]
    fn half_plane_interval_maps_to_arc() {
        let h = upper_half_plane(&[(-1.0, 1.0)]).unwrap();
        assert!((h.model.gamma_length() - PI).abs() < 1e-12);
        let w = h.premap.apply_finite(c(0.3, 0.0)).unwrap();
        assert!(h.model.gamma_distance(w) < 1e-12);
    }

    #[test]
    fn exterior_of_loops_is_bounded_model() {
        let l = BoundaryLoop::circle(c(0.3, 0.1), 0.5).unwrap();
        let m = exterior(Compact::Loops(vec![l])).unwrap();
        assert!(m.model.domain.is_bounded());
        let w = m.premap.apply(SpherePoint::Infinity).unwrap().finite().unwrap();
        assert!(m.model.domain.contains(w));
        assert!(Region::from(m).contains(SpherePoint::Infinity));
    }
}
