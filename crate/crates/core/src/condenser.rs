use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{mesh_with, EdgeTag, MarkedDomain, MeshOptions, PlateCurve, PlateMap, Region, SpherePoint};
use crate::robin::robin_function;
use crate::solver::{fmt_f64, solve_mixed, BoundaryData, HarmonicField};

/// Smallest plate scale parameter accepted by residual studies.
pub const MIN_STUDY_R: f64 = 1e-5;

/// One plate `E(z_k, ψ_k(r))` with `ψ_k(r) = μ_k r^{ν_k}` held at potential `t_k`.
/// With a `map`, the plate is the image of that disk (an almost disk) and
/// `center` is the preimage of the plate center.
#[derive(Clone, Debug)]
pub struct PlateSpec {
    pub center: SpherePoint,
    pub mu: f64,
    pub nu: f64,
    pub potential: f64,
    pub map: Option<PlateMapHandle>,
}

/// Cloneable, debuggable wrapper around a plate map.
#[derive(Clone)]
pub struct PlateMapHandle(pub PlateMap);

impl std::fmt::Debug for PlateMapHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("PlateMap")
    }
}

impl PlateSpec {
    pub fn disk(center: Complex64, potential: f64) -> Self {
        PlateSpec {
            center: center.into(),
            mu: 1.0,
            nu: 1.0,
            potential,
            map: None,
        }
    }

    pub fn with_rule(mut self, mu: f64, nu: f64) -> Self {
        self.mu = mu;
        self.nu = nu;
        self
    }

    pub fn radius_at(&self, r: f64) -> f64 {
        self.mu * r.powf(self.nu)
    }

    fn finite_center(&self) -> Result<Complex64> {
        self.center.finite().ok_or_else(|| {
            Error::Unsupported("plates centered at infinity need a conformal model".into())
        })
    }
}

/// A generalized condenser: γ at potential 0 and plates at potentials `t_k`.
#[derive(Clone, Debug)]
pub struct Condenser {
    pub marked: MarkedDomain,
    pub plates: Vec<PlateSpec>,
    pub r: f64,
    /// Minimum number of polygon nodes per plate boundary.
    pub plate_nodes: usize,
}

#[derive(Debug, Clone)]
pub struct CondenserResult {
    pub capacity: f64,
    pub potential: HarmonicField,
    pub r: f64,
    pub h: f64,
}

impl Condenser {
    pub fn new(marked: MarkedDomain, plates: Vec<PlateSpec>, r: f64) -> Self {
        Condenser {
            marked,
            plates,
            r,
            plate_nodes: 128,
        }
    }

    pub fn at_r(&self, r: f64) -> Self {
        Condenser { r, ..self.clone() }
    }

    fn plate_curves(&self) -> Result<Vec<PlateCurve>> {
        if !(self.r > 0.0 && self.r.is_finite()) {
            return Err(Error::InvalidCondenser(format!("bad plate scale r = {}", self.r)));
        }
        let mut curves = Vec::with_capacity(self.plates.len());
        for (k, p) in self.plates.iter().enumerate() {
            if !(p.mu > 0.0 && p.nu > 0.0) {
                return Err(Error::InvalidCondenser(format!(
                    "plate {k}: radius rule needs μ > 0 and ν > 0"
                )));
            }
            let c = p.finite_center()?;
            let rho = p.radius_at(self.r);
            let curve = match &p.map {
                Some(m) => PlateCurve::mapped(c, rho, m.0.clone()),
                None => PlateCurve::disk(c, rho),
            };
            curves.push(curve.with_nodes(self.plate_nodes));
        }
        // separation checks on fine polygons of the true plate boundaries
        let polys: Vec<Vec<Complex64>> = curves.iter().map(|c| c.polygon(256)).collect();
        for (k, poly) in polys.iter().enumerate() {
            let centre = curves[k].image_center();
            if !self.marked.domain.contains(centre)
                || poly.iter().any(|&z| {
                    !self.marked.domain.contains(z) || self.marked.domain.boundary_distance(z) <= 0.0
                })
            {
                return Err(Error::PlateTouchesBoundary(k));
            }
        }
        for i in 0..polys.len() {
            for j in (i + 1)..polys.len() {
                let ci = curves[i].image_center();
                let cj = curves[j].image_center();
                let ri = polys[i].iter().map(|z| (z - ci).norm()).fold(0.0, f64::max);
                let rj = polys[j].iter().map(|z| (z - cj).norm()).fold(0.0, f64::max);
                if (ci - cj).norm() <= ri + rj {
                    return Err(Error::OverlappingPlates { a: i, b: j });
                }
            }
        }
        Ok(curves)
    }
}

/// Capacity of the condenser: the Dirichlet energy of the potential that is
/// 0 on γ, `t_k` on plate `k`, with zero flux on the free boundary.
pub fn condenser_capacity(c: &Condenser, h: f64) -> Result<CondenserResult> {
    let curves = c.plate_curves()?;
    let mut opts = MeshOptions::new(h);
    opts.plates = curves;
    let mesh = Arc::new(mesh_with(&c.marked, &opts)?);
    let t: Vec<f64> = c.plates.iter().map(|p| p.potential).collect();
    let data = BoundaryData::from_fn(move |_, tag| match tag {
        EdgeTag::Plate(k) => t[k],
        _ => 0.0,
    });
    let potential = solve_mixed(mesh, &data)?;
    Ok(CondenserResult {
        capacity: potential.energy(),
        potential,
        r: c.r,
        h,
    })
}

/// Robin radii `r(B, γ, z_k)` and the matrix `g_B(z_k, z_l, γ)` at the plate centers.
#[derive(Debug, Clone, PartialEq)]
pub struct RobinData {
    pub radii: Vec<f64>,
    /// Off-diagonal entries are used; the diagonal is ignored.
    pub matrix: Vec<Vec<f64>>,
}

impl RobinData {
    /// Compute the data with the mesh solver (symmetrized Robin matrix).
    pub fn solve(marked: &MarkedDomain, centers: &[Complex64], h: f64) -> Result<Self> {
        let region = Region::Marked(marked.clone());
        let results = centers
            .par_iter()
            .map(|&z| robin_function(&region, z.into(), h))
            .collect::<Result<Vec<_>>>()?;
        let n = centers.len();
        let mut matrix = vec![vec![0.0; n]; n];
        for k in 0..n {
            for l in 0..n {
                if k != l {
                    matrix[k][l] = results[k].g_at(centers[l])?;
                }
            }
        }
        for k in 0..n {
            for l in (k + 1)..n {
                let s = 0.5 * (matrix[k][l] + matrix[l][k]);
                matrix[k][l] = s;
                matrix[l][k] = s;
            }
        }
        Ok(RobinData {
            radii: results.iter().map(|r| r.radius).collect(),
            matrix,
        })
    }
}

/// Two-term asymptotic expansion of the condenser capacity as `r → 0`:
///
/// `2π Σ t_k²/ν_k · (−1/log r) − 2π [Σ (t_k²/ν_k²) log(r_k/μ_k) + Σ_{k≠l} (t_k/ν_k)(t_l/ν_l) g_kl] (1/log r)²`.
pub fn asymptotic_capacity(plates: &[PlateSpec], data: &RobinData, r: f64) -> Result<f64> {
    if !(r > 0.0 && r < (-1.0f64).exp()) {
        return Err(Error::BadAsymptoticRadius(r));
    }
    let n = plates.len();
    if data.radii.len() != n || data.matrix.len() != n {
        return Err(Error::InvalidCondenser("Robin data does not match the plates".into()));
    }
    if plates.iter().all(|p| p.potential == 0.0) {
        return Err(Error::InvalidCondenser("all plate potentials vanish".into()));
    }
    let l = r.ln();
    let mut first = 0.0;
    let mut second = 0.0;
    for (k, p) in plates.iter().enumerate() {
        if !(p.mu > 0.0 && p.nu > 0.0) {
            return Err(Error::InvalidCondenser(format!("plate {k}: bad radius rule")));
        }
        let a = p.potential / p.nu;
        first += p.potential * p.potential / p.nu;
        second += a * a * (data.radii[k] / p.mu).ln();
        for (m, q) in plates.iter().enumerate() {
            if m != k {
                second += a * (q.potential / q.nu) * data.matrix[k][m];
            }
        }
    }
    Ok(TAU * first * (-1.0 / l) - TAU * second / (l * l))
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    pub r: f64,
    pub direct: f64,
    pub asymptotic: f64,
    pub residual: f64,
    pub residual_times_log2r: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualStudy {
    pub rows: Vec<StudyRow>,
    pub h: f64,
    /// `|residual·log²r|` strictly decreases down the table.
    pub pass: bool,
}

impl ResidualStudy {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,direct_cap,asym_cap,residual,residual_times_log2r\n");
        for row in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                fmt_f64(row.r),
                fmt_f64(row.direct),
                fmt_f64(row.asymptotic),
                fmt_f64(row.residual),
                fmt_f64(row.residual_times_log2r)
            );
        }
        s
    }
}

/// Compare direct capacities with the two-term expansion over a decreasing
/// list of plate scales.
pub fn residual_study(
    c: &Condenser,
    data: &RobinData,
    r_list: &[f64],
    h: f64,
) -> Result<ResidualStudy> {
    if r_list.len() < 3 {
        return Err(Error::InvalidStudy("need at least three values of r".into()));
    }
    if r_list.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidStudy("r values must strictly decrease".into()));
    }
    if let Some(&r) = r_list.iter().find(|&&r| r < MIN_STUDY_R) {
        return Err(Error::InvalidStudy(format!(
            "r = {r:e} is below the resolvable limit {MIN_STUDY_R:e}"
        )));
    }
    let rows = r_list
        .par_iter()
        .map(|&r| -> Result<StudyRow> {
            let direct = condenser_capacity(&c.at_r(r), h)?.capacity;
            let asymptotic = asymptotic_capacity(&c.plates, data, r)?;
            let residual = direct - asymptotic;
            Ok(StudyRow {
                r,
                direct,
                asymptotic,
                residual,
                residual_times_log2r: residual * r.ln().powi(2),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pass = rows
        .windows(2)
        .all(|w| w[1].residual_times_log2r.abs() < w[0].residual_times_log2r.abs());
    Ok(ResidualStudy { rows, h, pass })
}
