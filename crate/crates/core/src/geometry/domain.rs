use std::f64::consts::TAU;

use num_complex::Complex64;

use super::arc::ArcSegment;
use crate::error::{Error, Result};

/// A closed Jordan curve made of arcs chained head to tail.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryLoop {
    pub arcs: Vec<ArcSegment>,
}

impl BoundaryLoop {
    pub fn new(arcs: Vec<ArcSegment>) -> Self {
        BoundaryLoop { arcs }
    }

    pub fn circle(center: Complex64, radius: f64) -> Result<Self> {
        Ok(BoundaryLoop {
            arcs: vec![ArcSegment::full_circle(center, radius, 0.0)?],
        })
    }

    pub fn polygon(vertices: &[Complex64]) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidGeometry("polygon needs 3 vertices".into()));
        }
        let arcs = (0..n)
            .map(|k| ArcSegment::line(vertices[k], vertices[(k + 1) % n]))
            .collect::<Result<Vec<_>>>()?;
        Ok(BoundaryLoop { arcs })
    }

    /// Signed enclosed area; positive for counterclockwise loops.
    pub fn signed_area(&self) -> f64 {
        self.arcs.iter().map(|a| a.area_contribution()).sum()
    }

    pub fn reversed(&self) -> Self {
        BoundaryLoop {
            arcs: self.arcs.iter().rev().map(|a| a.reversed()).collect(),
        }
    }

    /// Fine closed polyline (first point not repeated at the end).
    pub fn polyline(&self) -> Vec<Complex64> {
        let mut pts = Vec::new();
        for arc in &self.arcs {
            let mut p = arc.polyline(4);
            p.pop();
            pts.extend(p);
        }
        pts
    }

    pub fn scale(&self) -> f64 {
        let pts = self.polyline();
        let mut s: f64 = 0.0;
        for p in &pts {
            s = s.max((p - pts[0]).norm());
        }
        s.max(f64::MIN_POSITIVE)
    }

    fn validate(&self, loop_index: usize) -> Result<()> {
        if self.arcs.is_empty() {
            return Err(Error::InvalidGeometry(format!("loop {loop_index} has no arcs")));
        }
        let scale = self.scale().max(1e-300);
        let n = self.arcs.len();
        for k in 0..n {
            let gap = (self.arcs[k].end() - self.arcs[(k + 1) % n].start()).norm();
            if gap > 1e-10 * scale.max(1.0) {
                return Err(Error::InvalidGeometry(format!(
                    "loop {loop_index}: arc {k} does not chain to the next arc (gap {gap:e})"
                )));
            }
        }
        if self.signed_area().abs() < 1e-14 * scale * scale {
            return Err(Error::InvalidGeometry(format!("loop {loop_index} encloses no area")));
        }
        if polyline_self_intersects(&self.polyline()) {
            return Err(Error::SelfIntersecting { loop_index });
        }
        Ok(())
    }
}

fn orient(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    (b.re - a.re) * (c.im - a.im) - (b.im - a.im) * (c.re - a.re)
}

/// Closed-segment intersection test.
pub(crate) fn segments_intersect(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> bool {
    let scale = (p2 - p1).norm().max((q2 - q1).norm());
    let eps = 1e-14 * scale * scale;
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps))
        && ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps))
    {
        return true;
    }
    let on = |a: Complex64, b: Complex64, c: Complex64, d: f64| {
        d.abs() <= eps
            && c.re >= a.re.min(b.re) - 1e-14 * scale
            && c.re <= a.re.max(b.re) + 1e-14 * scale
            && c.im >= a.im.min(b.im) - 1e-14 * scale
            && c.im <= a.im.max(b.im) + 1e-14 * scale
    };
    on(q1, q2, p1, d1) || on(q1, q2, p2, d2) || on(p1, p2, q1, d3) || on(p1, p2, q2, d4)
}

fn polyline_self_intersects(pts: &[Complex64]) -> bool {
    let n = pts.len();
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_intersect(a, b, pts[j], pts[(j + 1) % n]) {
                return true;
            }
        }
    }
    false
}

fn polylines_intersect(p: &[Complex64], q: &[Complex64]) -> bool {
    let (n, m) = (p.len(), q.len());
    for i in 0..n {
        for j in 0..m {
            if segments_intersect(p[i], p[(i + 1) % n], q[j], q[(j + 1) % m]) {
                return true;
            }
        }
    }
    false
}

/// Winding number of a closed polyline around `z`.
pub(crate) fn winding_number(poly: &[Complex64], z: Complex64) -> i32 {
    let n = poly.len();
    let mut w = 0;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if a.im <= z.im {
            if b.im > z.im && orient(a, b, z) > 0.0 {
                w += 1;
            }
        } else if b.im <= z.im && orient(a, b, z) < 0.0 {
            w -= 1;
        }
    }
    w
}

/// A finitely connected planar domain: inside `outer` (or the whole sphere
/// when `outer` is `None`) and outside every hole.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec {
    pub outer: Option<BoundaryLoop>,
    pub holes: Vec<BoundaryLoop>,
    pub contains_infinity: bool,
}

impl DomainSpec {
    /// Loops in index order: the outer loop (if any) first, then the holes.
    pub fn loops(&self) -> Vec<&BoundaryLoop> {
        self.outer.iter().chain(self.holes.iter()).collect()
    }

    pub fn loop_at(&self, index: usize) -> Option<&BoundaryLoop> {
        self.loops().get(index).copied()
    }

    pub fn is_bounded(&self) -> bool {
        self.outer.is_some() && !self.contains_infinity
    }

    /// Approximate membership test against the fine boundary polylines.
    pub fn contains(&self, z: Complex64) -> bool {
        if let Some(outer) = &self.outer {
            if winding_number(&outer.polyline(), z) == 0 {
                return false;
            }
        }
        self.holes
            .iter()
            .all(|h| winding_number(&h.polyline(), z) == 0)
    }

    /// Distance from `z` to the boundary.
    pub fn boundary_distance(&self, z: Complex64) -> f64 {
        self.loops()
            .iter()
            .flat_map(|l| l.arcs.iter())
            .map(|a| a.distance(z))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Validate a domain description and normalize loop orientation
/// (outer counterclockwise, holes clockwise).
pub fn make_domain(spec: DomainSpec) -> Result<DomainSpec> {
    let DomainSpec {
        outer,
        holes,
        contains_infinity,
    } = spec;
    if outer.is_none() && !contains_infinity {
        return Err(Error::InvalidGeometry(
            "a domain without outer loop must contain infinity".into(),
        ));
    }
    if outer.is_some() && contains_infinity {
        return Err(Error::InvalidGeometry(
            "a domain with an outer loop cannot contain infinity".into(),
        ));
    }
    if outer.is_none() && holes.is_empty() {
        return Err(Error::InvalidGeometry("domain has no boundary".into()));
    }
    let offset = usize::from(outer.is_some());
    let outer = match outer {
        Some(l) => {
            l.validate(0)?;
            Some(if l.signed_area() < 0.0 { l.reversed() } else { l })
        }
        None => None,
    };
    let mut normalized = Vec::with_capacity(holes.len());
    for (k, h) in holes.into_iter().enumerate() {
        h.validate(k + offset)?;
        normalized.push(if h.signed_area() > 0.0 { h.reversed() } else { h });
    }
    let polys: Vec<Vec<Complex64>> = normalized.iter().map(|h| h.polyline()).collect();
    if let Some(o) = &outer {
        let op = o.polyline();
        for (k, hp) in polys.iter().enumerate() {
            if polylines_intersect(&op, hp) {
                return Err(Error::OverlappingLoops { a: 0, b: k + 1 });
            }
            if winding_number(&op, hp[0]) == 0 {
                return Err(Error::HoleOutsideOuter { hole: k + offset });
            }
        }
    }
    for i in 0..polys.len() {
        for j in (i + 1)..polys.len() {
            if polylines_intersect(&polys[i], &polys[j])
                || winding_number(&polys[i], polys[j][0]) != 0
                || winding_number(&polys[j], polys[i][0]) != 0
            {
                return Err(Error::OverlappingLoops {
                    a: i + offset,
                    b: j + offset,
                });
            }
        }
    }
    Ok(DomainSpec {
        outer,
        holes: normalized,
        contains_infinity,
    })
}

/// A closed parameter interval `[t0, t1]` on one arc of one loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaInterval {
    pub loop_index: usize,
    pub arc: usize,
    pub t0: f64,
    pub t1: f64,
}

impl GammaInterval {
    pub fn whole(loop_index: usize, arc: usize) -> Self {
        GammaInterval {
            loop_index,
            arc,
            t0: 0.0,
            t1: 1.0,
        }
    }
}

/// A maximal piece of a boundary arc on which the marking is constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPiece {
    pub loop_index: usize,
    pub arc: usize,
    pub t0: f64,
    pub t1: f64,
    pub gamma: bool,
}

/// A domain together with the closed boundary subset γ carrying the
/// Dirichlet condition. The rest of the boundary is free (zero flux).
#[derive(Debug, Clone, PartialEq)]
pub struct MarkedDomain {
    pub domain: DomainSpec,
    pub gamma: Vec<GammaInterval>,
}

/// Attach a γ selection to a validated domain. Intervals are clamped to
/// `[0, 1]`, merged and sorted.
pub fn mark_boundary(domain: DomainSpec, selection: &[GammaInterval]) -> Result<MarkedDomain> {
    if selection.is_empty() {
        return Err(Error::EmptyGamma);
    }
    let loops = domain.loops();
    let mut sel: Vec<GammaInterval> = Vec::with_capacity(selection.len());
    for s in selection {
        let l = loops.get(s.loop_index).ok_or(Error::InvalidArcRef {
            loop_index: s.loop_index,
            arc: s.arc,
        })?;
        if s.arc >= l.arcs.len() {
            return Err(Error::InvalidArcRef {
                loop_index: s.loop_index,
                arc: s.arc,
            });
        }
        let (t0, t1) = (s.t0.max(0.0), s.t1.min(1.0));
        if !(t1 - t0 > 1e-12) {
            return Err(Error::DegenerateInterval {
                loop_index: s.loop_index,
                arc: s.arc,
            });
        }
        sel.push(GammaInterval { t0, t1, ..*s });
    }
    sel.sort_by(|a, b| {
        (a.loop_index, a.arc)
            .cmp(&(b.loop_index, b.arc))
            .then(a.t0.total_cmp(&b.t0))
    });
    let mut merged: Vec<GammaInterval> = Vec::new();
    for s in sel {
        match merged.last_mut() {
            Some(m) if m.loop_index == s.loop_index && m.arc == s.arc && s.t0 <= m.t1 + 1e-14 => {
                m.t1 = m.t1.max(s.t1);
            }
            _ => merged.push(s),
        }
    }
    Ok(MarkedDomain {
        domain,
        gamma: merged,
    })
}

impl MarkedDomain {
    /// γ = ∂B, the Green-function case.
    pub fn whole_boundary(domain: DomainSpec) -> Result<Self> {
        let sel: Vec<GammaInterval> = domain
            .loops()
            .iter()
            .enumerate()
            .flat_map(|(li, l)| (0..l.arcs.len()).map(move |a| GammaInterval::whole(li, a)))
            .collect();
        mark_boundary(domain, &sel)
    }

    pub fn is_whole_boundary(&self) -> bool {
        self.free_pieces().is_empty()
    }

    /// Pieces of the boundary along each loop, in traversal order.
    pub fn pieces(&self, loop_index: usize) -> Vec<BoundaryPiece> {
        let Some(l) = self.domain.loop_at(loop_index) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for arc in 0..l.arcs.len() {
            let mut t = 0.0;
            for g in self
                .gamma
                .iter()
                .filter(|g| g.loop_index == loop_index && g.arc == arc)
            {
                if g.t0 > t + 1e-14 {
                    out.push(BoundaryPiece {
                        loop_index,
                        arc,
                        t0: t,
                        t1: g.t0,
                        gamma: false,
                    });
                }
                out.push(BoundaryPiece {
                    loop_index,
                    arc,
                    t0: g.t0,
                    t1: g.t1,
                    gamma: true,
                });
                t = g.t1;
            }
            if t < 1.0 - 1e-14 {
                out.push(BoundaryPiece {
                    loop_index,
                    arc,
                    t0: t,
                    t1: 1.0,
                    gamma: false,
                });
            }
        }
        out
    }

    pub fn free_pieces(&self) -> Vec<BoundaryPiece> {
        (0..self.domain.loops().len())
            .flat_map(|l| self.pieces(l))
            .filter(|p| !p.gamma)
            .collect()
    }

    /// Points where γ meets the free boundary.
    pub fn junctions(&self) -> Vec<Complex64> {
        let loops = self.domain.loops();
        let mut out = Vec::new();
        for li in 0..loops.len() {
            let pieces = self.pieces(li);
            let n = pieces.len();
            for k in 0..n {
                let (p, q) = (pieces[k], pieces[(k + 1) % n]);
                if p.gamma != q.gamma {
                    out.push(loops[li].arcs[p.arc].point(p.t1));
                }
            }
        }
        out
    }

    /// Total length of γ.
    pub fn gamma_length(&self) -> f64 {
        let loops = self.domain.loops();
        self.gamma
            .iter()
            .map(|g| loops[g.loop_index].arcs[g.arc].length() * (g.t1 - g.t0))
            .sum()
    }

    /// Whether the boundary point with parameter `t` on the given arc is in γ.
    pub fn is_gamma(&self, loop_index: usize, arc: usize, t: f64) -> bool {
        self.gamma.iter().any(|g| {
            g.loop_index == loop_index && g.arc == arc && t >= g.t0 - 1e-12 && t <= g.t1 + 1e-12
        })
    }

    /// Distance from `z` to the closed set γ.
    pub fn gamma_distance(&self, z: Complex64) -> f64 {
        let loops = self.domain.loops();
        self.gamma
            .iter()
            .map(|g| loops[g.loop_index].arcs[g.arc].sub_arc(g.t0, g.t1).distance(z))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Unit-circle based constructors used throughout the model catalog.
pub mod shapes {
    use super::*;

    pub fn disk(center: Complex64, radius: f64) -> Result<DomainSpec> {
        make_domain(DomainSpec {
            outer: Some(BoundaryLoop::circle(center, radius)?),
            holes: vec![],
            contains_infinity: false,
        })
    }

    pub fn unit_disk() -> DomainSpec {
        disk(Complex64::new(0.0, 0.0), 1.0).expect("unit disk")
    }

    /// `inner < |z| < 1`.
    pub fn annulus(inner: f64) -> Result<DomainSpec> {
        if !(inner > 0.0 && inner < 1.0) {
            return Err(Error::InvalidGeometry(format!("bad annulus radius {inner}")));
        }
        make_domain(DomainSpec {
            outer: Some(BoundaryLoop::circle(Complex64::new(0.0, 0.0), 1.0)?),
            holes: vec![BoundaryLoop::circle(Complex64::new(0.0, 0.0), inner)?],
            contains_infinity: false,
        })
    }

    /// Selection on a full-circle loop for the counterclockwise angular
    /// interval `[theta_a, theta_b]` (split if it wraps the loop start).
    pub fn angular_selection(
        domain: &DomainSpec,
        loop_index: usize,
        theta_a: f64,
        theta_b: f64,
    ) -> Result<Vec<GammaInterval>> {
        let l = domain.loop_at(loop_index).ok_or(Error::InvalidArcRef {
            loop_index,
            arc: 0,
        })?;
        let (start, sweep) = match l.arcs.as_slice() {
            [ArcSegment::Circle { start, sweep, .. }] if (sweep.abs() - TAU).abs() < 1e-12 => {
                (*start, *sweep)
            }
            _ => {
                return Err(Error::InvalidGeometry(
                    "angular selection needs a single full-circle loop".into(),
                ))
            }
        };
        let measure = theta_b - theta_a;
        if !(measure > 0.0) {
            return Err(Error::DegenerateInterval { loop_index, arc: 0 });
        }
        if measure >= TAU - 1e-12 {
            return Ok(vec![GammaInterval::whole(loop_index, 0)]);
        }
        // parameter grows along the sweep direction
        let (ta, tb) = if sweep > 0.0 {
            let ta = ((theta_a - start) / TAU).rem_euclid(1.0);
            (ta, ta + measure / TAU)
        } else {
            let ta = ((start - theta_b) / TAU).rem_euclid(1.0);
            (ta, ta + measure / TAU)
        };
        if tb <= 1.0 {
            Ok(vec![GammaInterval {
                loop_index,
                arc: 0,
                t0: ta,
                t1: tb,
            }])
        } else {
            let mut v = vec![GammaInterval {
                loop_index,
                arc: 0,
                t0: ta,
                t1: 1.0,
            }];
            if tb - 1.0 > 1e-12 {
                v.push(GammaInterval {
                    loop_index,
                    arc: 0,
                    t0: 0.0,
                    t1: tb - 1.0,
                });
            }
            Ok(v)
        }
    }

    /// Unit disk with γ a union of counterclockwise arcs `[θa, θb]` of |z| = 1.
    pub fn disk_with_arcs(arcs: &[(f64, f64)]) -> Result<MarkedDomain> {
        let d = unit_disk();
        let mut sel = Vec::new();
        for &(a, b) in arcs {
            sel.extend(angular_selection(&d, 0, a, b)?);
        }
        mark_boundary(d, &sel)
    }
}

#[cfg(test)]
mod tests {
    use super::shapes::*;
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unit_circle_is_simply_connected_disk() {
        let d = unit_disk();
        assert!(d.is_bounded());
        assert!(d.holes.is_empty());
        assert!(d.outer.as_ref().unwrap().signed_area() > 0.0);
        assert!(d.contains(c(0.2, 0.3)));
        assert!(!d.contains(c(1.2, 0.0)));
    }

    #[test]
    fn annulus_orientation_normalized() {
        let d = annulus(0.3).unwrap();
        assert!(d.outer.as_ref().unwrap().signed_area() > 0.0);
        assert!(d.holes[0].signed_area() < 0.0);
        assert!(!d.contains(c(0.1, 0.0)));
        assert!(d.contains(c(0.5, 0.0)));
    }

    #[test]
    fn overlapping_circles_rejected() {
        let spec = DomainSpec {
            outer: Some(BoundaryLoop::circle(c(0.0, 0.0), 1.0).unwrap()),
            holes: vec![BoundaryLoop::circle(c(0.9, 0.0), 0.3).unwrap()],
            contains_infinity: false,
        };
        assert!(matches!(make_domain(spec), Err(Error::OverlappingLoops { .. })));
        let spec = DomainSpec {
            outer: Some(BoundaryLoop::circle(c(0.0, 0.0), 1.0).unwrap()),
            holes: vec![
                BoundaryLoop::circle(c(0.2, 0.0), 0.3).unwrap(),
                BoundaryLoop::circle(c(-0.2, 0.0), 0.3).unwrap(),
            ],
            contains_infinity: false,
        };
        assert!(matches!(make_domain(spec), Err(Error::OverlappingLoops { .. })));
    }

    #[test]
    fn hole_outside_rejected() {
        let spec = DomainSpec {
            outer: Some(BoundaryLoop::circle(c(0.0, 0.0), 1.0).unwrap()),
            holes: vec![BoundaryLoop::circle(c(3.0, 0.0), 0.3).unwrap()],
            contains_infinity: false,
        };
        assert!(matches!(make_domain(spec), Err(Error::HoleOutsideOuter { hole: 1 })));
    }

    #[test]
    fn self_intersecting_rejected() {
        let bowtie = BoundaryLoop::polygon(&[c(0.0, 0.0), c(2.0, 0.0), c(0.0, 1.0), c(1.0, 1.0)])
            .unwrap();
        let spec = DomainSpec {
            outer: Some(bowtie),
            holes: vec![],
            contains_infinity: false,
        };
        assert!(matches!(make_domain(spec), Err(Error::SelfIntersecting { .. })));
    }

    #[test]
    fn unchained_loop_rejected() {
        let l = BoundaryLoop::new(vec![
            ArcSegment::line(c(0.0, 0.0), c(1.0, 0.0)).unwrap(),
            ArcSegment::line(c(1.0, 0.1), c(0.0, 1.0)).unwrap(),
            ArcSegment::line(c(0.0, 1.0), c(0.0, 0.0)).unwrap(),
        ]);
        let spec = DomainSpec {
            outer: Some(l),
            holes: vec![],
            contains_infinity: false,
        };
        assert!(make_domain(spec).is_err());
    }

    #[test]
    fn empty_and_degenerate_selection() {
        assert_eq!(mark_boundary(unit_disk(), &[]).unwrap_err(), Error::EmptyGamma);
        let bad = GammaInterval {
            loop_index: 0,
            arc: 0,
            t0: 0.3,
            t1: 0.3,
        };
        assert!(matches!(
            mark_boundary(unit_disk(), &[bad]),
            Err(Error::DegenerateInterval { .. })
        ));
    }

    #[test]
    fn full_circle_is_green_case() {
        let md = MarkedDomain::whole_boundary(unit_disk()).unwrap();
        assert!(md.is_whole_boundary());
        assert!(md.junctions().is_empty());
        assert!((md.gamma_length() - TAU).abs() < 1e-12);
    }

    #[test]
    fn right_half_circle_has_measure_pi() {
        let md = disk_with_arcs(&[(-PI / 2.0, PI / 2.0)]).unwrap();
        assert!((md.gamma_length() - PI).abs() < 1e-12);
        let j = md.junctions();
        assert_eq!(j.len(), 2);
        for p in j {
            assert!(p.re.abs() < 1e-12 && (p.im.abs() - 1.0).abs() < 1e-12);
        }
        assert!(md.gamma_distance(c(1.0, 0.0)) < 1e-12);
        assert!((md.gamma_distance(c(-1.0, 0.0)) - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn wrapping_selection_is_split() {
        let md = disk_with_arcs(&[(3.0, 3.5)]).unwrap();
        assert!((md.gamma_length() - 0.5).abs() < 1e-12);
    }
}
