use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use spade::{ConstrainedDelaunayTriangulation, HasPosition, Point2, Triangulation};

use super::domain::{BoundaryPiece, MarkedDomain};
use super::spatial::{segment_distance, BucketGrid, StripIndex};
use crate::error::{Error, Result};

/// Boundary condition class of a boundary edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeTag {
    Gamma,
    Free,
    Plate(usize),
}

/// Where a boundary edge comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeSource {
    Arc {
        loop_index: usize,
        arc: usize,
        t0: f64,
        t1: f64,
    },
    Plate(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryEdge {
    /// Vertex indices in the positive traversal direction of the domain.
    pub v: [usize; 2],
    pub tag: EdgeTag,
    pub source: EdgeSource,
}

pub type PlateMap = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// A plate boundary: the circle `|ζ − center| = radius`, optionally pushed
/// forward by a conformal map (an almost disk).
#[derive(Clone)]
pub struct PlateCurve {
    pub center: Complex64,
    pub radius: f64,
    pub map: Option<PlateMap>,
    /// Minimum number of polygon nodes on the plate boundary.
    pub nodes: usize,
}

impl fmt::Debug for PlateCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PlateCurve")
            .field("center", &self.center)
            .field("radius", &self.radius)
            .field("mapped", &self.map.is_some())
            .field("nodes", &self.nodes)
            .finish()
    }
}

impl PlateCurve {
    pub fn disk(center: Complex64, radius: f64) -> Self {
        PlateCurve {
            center,
            radius,
            map: None,
            nodes: 64,
        }
    }

    pub fn mapped(center: Complex64, radius: f64, map: PlateMap) -> Self {
        PlateCurve {
            center,
            radius,
            map: Some(map),
            nodes: 64,
        }
    }

    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.nodes = nodes;
        self
    }

    /// Image of the pre-map point `center + rho·e^{iθ}`.
    pub fn point(&self, rho: f64, theta: f64) -> Complex64 {
        let w = self.center + Complex64::from_polar(rho, theta);
        match &self.map {
            Some(m) => m(w),
            None => w,
        }
    }

    pub fn image_center(&self) -> Complex64 {
        match &self.map {
            Some(m) => m(self.center),
            None => self.center,
        }
    }

    /// Closed polygon through `n` points of the plate boundary.
    pub fn polygon(&self, n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|j| self.point(self.radius, TAU * j as f64 / n as f64))
            .collect()
    }
}

/// Request for local refinement around a point (a pole, typically).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Refinement {
    pub center: Complex64,
    /// Outer radius of the graded rosette; defaults to `h`.
    pub radius: Option<f64>,
}

impl Refinement {
    pub fn at(center: Complex64) -> Self {
        Refinement {
            center,
            radius: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MeshOptions {
    pub h: f64,
    pub refine: Vec<Refinement>,
    pub plates: Vec<PlateCurve>,
    /// Geometric grading at γ/free junctions: size `h·ratio^levels` at the junction.
    pub junction_levels: u32,
    pub junction_ratio: f64,
}

impl MeshOptions {
    pub fn new(h: f64) -> Self {
        MeshOptions {
            h,
            refine: Vec::new(),
            plates: Vec::new(),
            junction_levels: 6,
            junction_ratio: 0.5,
        }
    }
}

/// A graded ring structure around a pole or a plate.
#[derive(Debug, Clone, PartialEq)]
pub struct Rosette {
    pub center: Complex64,
    pub ring_radii: Vec<f64>,
    pub nodes_per_ring: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Grading {
    pub h: f64,
    pub junctions: Vec<Complex64>,
    pub pole_rosettes: Vec<Rosette>,
    pub plate_rosettes: Vec<Rosette>,
}

/// A conforming triangulation with tagged boundary edges.
#[derive(Debug, Clone)]
pub struct Mesh {
    pub vertices: Vec<Complex64>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<BoundaryEdge>,
    pub grading: Grading,
    locator: OnceLock<BucketGrid>,
}

impl Mesh {
    /// Bucket grid over triangle bounding boxes, built on first use.
    pub(crate) fn locator(&self) -> &BucketGrid {
        self.locator.get_or_init(|| {
            let (mut lo, mut hi) = (self.vertices[0], self.vertices[0]);
            for p in &self.vertices {
                lo = Complex64::new(lo.re.min(p.re), lo.im.min(p.im));
                hi = Complex64::new(hi.re.max(p.re), hi.im.max(p.im));
            }
            let cell = 2.0 * (self.area().abs() / self.triangles.len().max(1) as f64).sqrt();
            let mut g = BucketGrid::new(lo, hi, cell);
            for (t, tri) in self.triangles.iter().enumerate() {
                let p = tri.map(|i| self.vertices[i]);
                let lo = Complex64::new(
                    p[0].re.min(p[1].re).min(p[2].re),
                    p[0].im.min(p[1].im).min(p[2].im),
                );
                let hi = Complex64::new(
                    p[0].re.max(p[1].re).max(p[2].re),
                    p[0].im.max(p[1].im).max(p[2].im),
                );
                g.insert(t, lo, hi);
            }
            g
        })
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t].map(|i| self.vertices[i]);
        0.5 * ((b - a).re * (c - a).im - (b - a).im * (c - a).re)
    }

    pub fn triangle_diameter(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t].map(|i| self.vertices[i]);
        (a - b).norm().max((b - c).norm()).max((c - a).norm())
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    pub fn edges_with_tag(&self, tag: EdgeTag) -> impl Iterator<Item = &BoundaryEdge> {
        self.boundary_edges.iter().filter(move |e| e.tag == tag)
    }
}

/// Piecewise-linear size field: `min(h, s0 + slope·max(0, |z − c| − core))`.
#[derive(Debug, Clone)]
struct SizeField {
    h: f64,
    sources: Vec<(Complex64, f64, f64, f64)>,
}

impl SizeField {
    fn at(&self, z: Complex64) -> f64 {
        let mut s = self.h;
        for &(c, core, s0, slope) in &self.sources {
            s = s.min(s0 + slope * ((z - c).norm() - core).max(0.0));
        }
        s
    }
}

#[derive(Clone, Copy)]
struct Vx {
    p: Point2<f64>,
    id: usize,
}

impl HasPosition for Vx {
    type Scalar = f64;
    fn position(&self) -> Point2<f64> {
        self.p
    }
}

const POLE_RING_NODES: usize = 16;
const POLE_RINGS: usize = 12;
const GROWTH_SLOPE: f64 = 0.3;

/// Mesh a bounded marked domain with maximum element size `h`, graded
/// around the listed refinement points.
pub fn mesh_domain(md: &MarkedDomain, h: f64, refine_at: &[Refinement]) -> Result<Mesh> {
    let mut opts = MeshOptions::new(h);
    opts.refine = refine_at.to_vec();
    mesh_with(md, &opts)
}

pub fn mesh_with(md: &MarkedDomain, opts: &MeshOptions) -> Result<Mesh> {
    let h = opts.h;
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::BadMeshSize {
            h,
            reason: "mesh size must be positive and finite".into(),
        });
    }
    if !md.domain.is_bounded() {
        return Err(Error::Unbounded);
    }
    let loops = md.domain.loops();
    let pieces: Vec<Vec<BoundaryPiece>> = (0..loops.len()).map(|l| md.pieces(l)).collect();
    for (li, l) in loops.iter().enumerate() {
        if h > 0.25 * l.scale() {
            return Err(Error::BadMeshSize {
                h,
                reason: format!("boundary loop {li} is not resolved"),
            });
        }
        for p in &pieces[li] {
            let len = l.arcs[p.arc].length() * (p.t1 - p.t0);
            // pieces split only by arc breaks are not γ endpoints
            if len < h && pieces[li].len() > l.arcs.len() {
                return Err(Error::BadMeshSize {
                    h,
                    reason: "gamma endpoints are not resolved".into(),
                });
            }
        }
    }

    let mut size = SizeField {
        h,
        sources: Vec::new(),
    };
    let mut grading = Grading {
        h,
        ..Default::default()
    };

    let junctions = md.junctions();
    let s_junction = h * opts.junction_ratio.powi(opts.junction_levels as i32);
    for &j in &junctions {
        size.sources.push((j, 0.0, s_junction, 0.5));
    }
    grading.junctions = junctions;

    // Pole rosettes.
    let q_pole = 1.0 + TAU / POLE_RING_NODES as f64;
    let mut exclusions: Vec<(Complex64, f64)> = Vec::new();
    let mut fixed: Vec<Complex64> = Vec::new();
    for r in &opts.refine {
        let c = r.center;
        let bdist = md.domain.boundary_distance(c);
        let scale = loops.iter().map(|l| l.scale()).fold(0.0, f64::max);
        if bdist > 1e-12 * scale && !md.domain.contains(c) {
            return Err(Error::OutsideDomain { re: c.re, im: c.im });
        }
        if bdist <= 1e-9 * scale {
            size.sources.push((c, 0.0, s_junction, 0.5));
            continue;
        }
        let outer = r.radius.unwrap_or(h).min(bdist / 3.0).min(h);
        let m = POLE_RING_NODES;
        let mut radii = Vec::new();
        fixed.push(c);
        for k in 0..=POLE_RINGS {
            let rho = outer * q_pole.powi(-(k as i32));
            radii.push(rho);
            for j in 0..m {
                let th = (j as f64 + 0.5 * (k % 2) as f64) * TAU / m as f64;
                fixed.push(c + Complex64::from_polar(rho, th));
            }
        }
        let s0 = TAU * outer / m as f64;
        size.sources.push((c, outer, s0, GROWTH_SLOPE));
        exclusions.push((c, outer + 0.3 * s0));
        grading.pole_rosettes.push(Rosette {
            center: c,
            ring_radii: radii,
            nodes_per_ring: m,
        });
    }

    // Plate polygons and their outward rings.
    let mut plate_polys: Vec<Vec<Complex64>> = Vec::new();
    let mut plate_rings: Vec<Vec<Vec<Complex64>>> = Vec::new();
    let mut plate_meta: Vec<(usize, f64, Vec<f64>)> = Vec::new();
    for (k, p) in opts.plates.iter().enumerate() {
        let approx_len = {
            let poly = p.polygon(256);
            (0..poly.len())
                .map(|i| (poly[(i + 1) % poly.len()] - poly[i]).norm())
                .sum::<f64>()
        };
        let m = p.nodes.max(32).max((approx_len / (0.5 * h)).ceil() as usize);
        let poly = p.polygon(m);
        for &z in &poly {
            if !md.domain.contains(z) {
                return Err(Error::PlateTouchesBoundary(k));
            }
        }
        let q = 1.0 + TAU / m as f64;
        let mut rings = Vec::new();
        let mut radii = Vec::new();
        let mut rho = p.radius;
        for ring in 1.. {
            rho *= q;
            let th0 = 0.5 * (ring % 2) as f64 * TAU / m as f64;
            let pts: Vec<Complex64> = (0..m)
                .map(|j| p.point(rho, th0 + TAU * j as f64 / m as f64))
                .collect();
            let spacing = (0..m)
                .map(|j| (pts[(j + 1) % m] - pts[j]).norm())
                .fold(0.0, f64::max);
            if spacing > h / 1.5 {
                break;
            }
            let clear = pts
                .iter()
                .map(|&z| md.domain.boundary_distance(z))
                .fold(f64::INFINITY, f64::min);
            if clear < 2.0 * spacing || pts.iter().any(|&z| !md.domain.contains(z)) {
                break;
            }
            rings.push(pts);
            radii.push(rho);
        }
        plate_polys.push(poly);
        plate_rings.push(rings);
        plate_meta.push((m, p.radius, radii));
    }
    let extent = |k: usize, rings: &Vec<Vec<Complex64>>, poly: &Vec<Complex64>| -> f64 {
        let c = opts.plates[k].image_center();
        rings
            .last()
            .unwrap_or(poly)
            .iter()
            .map(|z| (z - c).norm())
            .fold(0.0, f64::max)
    };
    for i in 0..plate_polys.len() {
        for j in (i + 1)..plate_polys.len() {
            let d = (opts.plates[i].image_center() - opts.plates[j].image_center()).norm();
            loop {
                let ei = extent(i, &plate_rings[i], &plate_polys[i]);
                let ej = extent(j, &plate_rings[j], &plate_polys[j]);
                if ei + ej + h <= 0.9 * d {
                    break;
                }
                let pop = if ei >= ej { i } else { j };
                if plate_rings[pop].pop().is_none() {
                    let other = if pop == i { j } else { i };
                    if plate_rings[other].pop().is_none() {
                        break;
                    }
                } else {
                    plate_meta[pop].2.pop();
                }
            }
        }
    }
    for (k, p) in opts.plates.iter().enumerate() {
        let c = p.image_center();
        let rings = &plate_rings[k];
        let last = rings.last().unwrap_or(&plate_polys[k]);
        let m = last.len();
        let spacing = (0..m)
            .map(|j| (last[(j + 1) % m] - last[j]).norm())
            .fold(0.0, f64::max);
        let e = extent(k, rings, &plate_polys[k]);
        size.sources.push((c, e, spacing, GROWTH_SLOPE));
        if p.map.is_none() {
            exclusions.push((c, e + 0.3 * spacing));
        }
        for r in rings {
            fixed.extend_from_slice(r);
        }
        let (nodes, r0, radii) = &plate_meta[k];
        let mut all = vec![*r0];
        all.extend(radii.iter().take(rings.len()));
        grading.plate_rosettes.push(Rosette {
            center: p.center,
            ring_radii: all,
            nodes_per_ring: *nodes,
        });
    }

    // Boundary discretization.
    let mut points: Vec<Complex64> = Vec::new();
    let mut bedges: Vec<BoundaryEdge> = Vec::new();
    for (li, l) in loops.iter().enumerate() {
        let first = points.len();
        let mut loop_edges: Vec<(EdgeTag, usize, f64, f64)> = Vec::new();
        for p in &pieces[li] {
            let arc = &l.arcs[p.arc];
            let curv_cap = match arc {
                super::arc::ArcSegment::Circle { radius, .. } => 0.25 * radius,
                _ => f64::INFINITY,
            };
            let ts = discretize_piece(
                |t| arc.point(t),
                |t| arc.velocity(t).norm(),
                |z| size.at(z).min(curv_cap),
                p.t0,
                p.t1,
            );
            let tag = if p.gamma { EdgeTag::Gamma } else { EdgeTag::Free };
            for w in ts.windows(2) {
                points.push(arc.point(w[0]));
                loop_edges.push((tag, p.arc, w[0], w[1]));
            }
        }
        let n = loop_edges.len();
        for (k, &(tag, arc, t0, t1)) in loop_edges.iter().enumerate() {
            bedges.push(BoundaryEdge {
                v: [first + k, first + (k + 1) % n],
                tag,
                source: EdgeSource::Arc {
                    loop_index: li,
                    arc,
                    t0,
                    t1,
                },
            });
        }
    }
    for (k, poly) in plate_polys.iter().enumerate() {
        let first = points.len();
        let m = poly.len();
        points.extend_from_slice(poly);
        // the domain lies outside the plate: traverse clockwise
        for j in 0..m {
            bedges.push(BoundaryEdge {
                v: [first + (j + 1) % m, first + j],
                tag: EdgeTag::Plate(k),
                source: EdgeSource::Plate(k),
            });
        }
    }
    let n_boundary = points.len();
    points.extend_from_slice(&fixed);

    // Spatial indices over the boundary polygons.
    let seg_list: Vec<(Complex64, Complex64)> = bedges
        .iter()
        .map(|e| (points[e.v[0]], points[e.v[1]]))
        .collect();
    let (mut lo, mut hi) = (points[0], points[0]);
    for p in &points[..n_boundary] {
        lo = Complex64::new(lo.re.min(p.re), lo.im.min(p.im));
        hi = Complex64::new(hi.re.max(p.re), hi.im.max(p.im));
    }
    let inside = StripIndex::new(seg_list.clone());
    let mut seg_grid = BucketGrid::new(lo, hi, h);
    for (id, (a, b)) in seg_list.iter().enumerate() {
        seg_grid.insert(
            id,
            Complex64::new(a.re.min(b.re), a.im.min(b.im)),
            Complex64::new(a.re.max(b.re), a.im.max(b.im)),
        );
    }
    let mut node_grid = BucketGrid::new(lo, hi, h);
    for (id, p) in points.iter().enumerate() {
        node_grid.insert_point(id, *p);
    }

    // Quadtree interior points.
    let side = (hi.re - lo.re).max(hi.im - lo.im) * 1.001;
    let mid = (lo + hi) * 0.5;
    let mut stack = vec![(mid, side, 0u32)];
    let mut interior = Vec::new();
    while let Some((c, l, depth)) = stack.pop() {
        let s = size.at(c);
        let s_min = s - 0.5 * l * std::f64::consts::FRAC_1_SQRT_2;
        if l > s_min / 1.5 && depth < 40 {
            let q = l * 0.25;
            for (dx, dy) in [(-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0), (1.0, 1.0)] {
                stack.push((c + Complex64::new(dx * q, dy * q), l * 0.5, depth + 1));
            }
            continue;
        }
        if exclusions.iter().any(|&(e, r)| (c - e).norm() < r) {
            continue;
        }
        if !inside.inside(c) {
            continue;
        }
        let mut near = false;
        node_grid.visit(c, 0.55 * s, |id| {
            near |= (points[id] - c).norm() < 0.55 * s;
        });
        if near {
            continue;
        }
        seg_grid.visit(c, 0.45 * s, |id| {
            let (a, b) = seg_list[id];
            near |= segment_distance(c, a, b) < 0.45 * s;
        });
        if near {
            continue;
        }
        interior.push(c);
    }
    // deterministic order independent of traversal details
    interior.sort_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));
    points.extend(interior);

    // Constrained Delaunay triangulation.
    let verts: Vec<Vx> = points
        .iter()
        .enumerate()
        .map(|(id, p)| Vx {
            p: Point2::new(p.re, p.im),
            id,
        })
        .collect();
    let constraints: Vec<[usize; 2]> = bedges.iter().map(|e| e.v).collect();
    let cdt = ConstrainedDelaunayTriangulation::<Vx>::bulk_load_cdt(verts, constraints)
        .map_err(|e| Error::InvalidGeometry(format!("triangulation failed: {e:?}")))?;
    let mut tris: Vec<[usize; 3]> = Vec::new();
    for f in cdt.inner_faces() {
        let ids = f.vertices().map(|v| v.data().id);
        let [a, b, c] = ids.map(|i| points[i]);
        let centroid = (a + b + c) / 3.0;
        if !inside.inside(centroid) {
            continue;
        }
        let area2 = (b - a).re * (c - a).im - (b - a).im * (c - a).re;
        if area2 > 0.0 {
            tris.push(ids);
        } else {
            tris.push([ids[0], ids[2], ids[1]]);
        }
    }
    tris.sort();

    // Compact vertex numbering.
    let mut remap = vec![usize::MAX; points.len()];
    let mut vertices = Vec::new();
    for t in &tris {
        for &i in t {
            if remap[i] == usize::MAX {
                remap[i] = vertices.len();
                vertices.push(points[i]);
            }
        }
    }
    let triangles: Vec<[usize; 3]> = tris.iter().map(|t| t.map(|i| remap[i])).collect();
    let mut boundary_edges = Vec::with_capacity(bedges.len());
    for e in bedges {
        let v = e.v.map(|i| remap[i]);
        if v.contains(&usize::MAX) {
            return Err(Error::InvalidGeometry("boundary edge lost in triangulation".into()));
        }
        boundary_edges.push(BoundaryEdge { v, ..e });
    }
    let mesh = Mesh {
        vertices,
        triangles,
        boundary_edges,
        grading,
        locator: OnceLock::new(),
    };
    check_boundary_edges(&mesh)?;
    Ok(mesh)
}

fn check_boundary_edges(mesh: &Mesh) -> Result<()> {
    let mut count: HashMap<(usize, usize), u32> = HashMap::new();
    for t in &mesh.triangles {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            *count.entry((a.min(b), a.max(b))).or_default() += 1;
        }
    }
    for e in &mesh.boundary_edges {
        let key = (e.v[0].min(e.v[1]), e.v[0].max(e.v[1]));
        if count.get(&key) != Some(&1) {
            return Err(Error::InvalidGeometry(
                "boundary edge is not on exactly one triangle".into(),
            ));
        }
    }
    let n_boundary = count.values().filter(|&&c| c == 1).count();
    if n_boundary != mesh.boundary_edges.len() {
        return Err(Error::InvalidGeometry(format!(
            "mesh has {n_boundary} open edges but {} tagged boundary edges",
            mesh.boundary_edges.len()
        )));
    }
    Ok(())
}

/// Parameter values on `[t0, t1]` spaced according to the size field.
fn discretize_piece(
    point: impl Fn(f64) -> Complex64,
    speed: impl Fn(f64) -> f64,
    size: impl Fn(Complex64) -> f64,
    t0: f64,
    t1: f64,
) -> Vec<f64> {
    // march with sub-steps of a tenth of the local size
    let mut ts = vec![t0];
    let mut acc = vec![0.0];
    let mut t = t0;
    let mut f = 0.0;
    while t < t1 {
        let s = size(point(t));
        let v = speed(t).max(1e-300);
        let dt = (0.1 * s / v).min(t1 - t).max((t1 - t0) * 1e-9);
        let tm = t + 0.5 * dt;
        let sm = size(point(tm));
        f += dt * speed(tm) / sm;
        t = (t + dt).min(t1);
        ts.push(t);
        acc.push(f);
    }
    let n = (f.round() as usize).max(1);
    let mut out = Vec::with_capacity(n + 1);
    out.push(t0);
    let mut j = 0;
    for k in 1..n {
        let target = f * k as f64 / n as f64;
        while acc[j + 1] < target {
            j += 1;
        }
        let w = (target - acc[j]) / (acc[j + 1] - acc[j]);
        out.push(ts[j] + w * (ts[j + 1] - ts[j]));
    }
    out.push(t1);
    out
}

#[cfg(test)]
mod tests {
    use super::super::domain::shapes::*;
    use std::f64::consts::PI;
    use super::super::domain::MarkedDomain;
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn disk_mesh_area_and_size() {
        let md = MarkedDomain::whole_boundary(unit_disk()).unwrap();
        let mesh = mesh_domain(&md, 0.1, &[]).unwrap();
        assert!((mesh.area() - PI).abs() < 0.01);
        let dmax = (0..mesh.triangles.len())
            .map(|t| mesh.triangle_diameter(t))
            .fold(0.0, f64::max);
        assert!(dmax <= 0.1 * 1.05, "max diameter {dmax}");
        assert!(mesh.boundary_edges.iter().all(|e| e.tag == EdgeTag::Gamma));
    }

    #[test]
    fn rosette_has_ten_rings_inside_h() {
        let md = MarkedDomain::whole_boundary(unit_disk()).unwrap();
        let mesh = mesh_domain(&md, 0.05, &[Refinement::at(c(0.0, 0.0))]).unwrap();
        let mut radii: Vec<f64> = mesh
            .vertices
            .iter()
            .map(|v| v.norm())
            .filter(|&r| r > 0.0 && r < 0.05 * (1.0 - 1e-9))
            .collect();
        radii.sort_by(f64::total_cmp);
        radii.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * *b);
        assert!(radii.len() >= 10, "rings: {}", radii.len());
    }

    #[test]
    fn huge_h_rejected() {
        let md = MarkedDomain::whole_boundary(unit_disk()).unwrap();
        assert!(matches!(mesh_domain(&md, 10.0, &[]), Err(Error::BadMeshSize { .. })));
    }

    #[test]
    fn refine_outside_rejected() {
        let md = MarkedDomain::whole_boundary(unit_disk()).unwrap();
        assert!(matches!(
            mesh_domain(&md, 0.1, &[Refinement::at(c(2.0, 0.0))]),
            Err(Error::OutsideDomain { .. })
        ));
    }

    #[test]
    fn deterministic() {
        let md = disk_with_arcs(&[(-PI / 2.0, PI / 2.0)]).unwrap();
        let a = mesh_domain(&md, 0.1, &[Refinement::at(c(0.1, 0.2))]).unwrap();
        let b = mesh_domain(&md, 0.1, &[Refinement::at(c(0.1, 0.2))]).unwrap();
        assert_eq!(a.vertices, b.vertices);
        assert_eq!(a.triangles, b.triangles);
    }

    #[test]
    fn plate_is_excluded() {
        let md = MarkedDomain::whole_boundary(unit_disk()).unwrap();
        let mut opts = MeshOptions::new(0.05);
        opts.plates.push(PlateCurve::disk(c(0.0, 0.0), 0.1));
        let mesh = mesh_with(&md, &opts).unwrap();
        let expect = PI * (1.0 - 0.01);
        assert!((mesh.area() - expect).abs() < 0.01);
        assert!(mesh.edges_with_tag(EdgeTag::Plate(0)).count() >= 32);
    }
}
