//! Evaluate both sides of a distortion inequality and judge it.
//!
//! Every kind is reduced to `lhs ≥ rhs` or `lhs ≤ rhs` between logarithmic
//! quantities (logs of products of radii, sums of Robin functions). The
//! margin is the signed gap in the direction of the inequality, so it is
//! nonnegative exactly when the inequality holds.

use std::sync::Arc;

use num_complex::Complex64;
use potlab_core::geometry::SpherePoint;
use potlab_core::records::{json_number, json_point};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::budget::{numeric_budget, ROUNDOFF};
use crate::catalog::{DomainRef, Part, Provider};
use crate::error::{Error, Result};
use crate::map::HolomorphicMap;
use crate::scenario::{CapacityBound, Kind, Scenario};

/// Distance tolerance for boundary correspondence.
pub const BOUNDARY_TOL: f64 = 1e-6;
/// Minimum number of boundary samples per checked boundary part.
pub const MIN_BOUNDARY_SAMPLES: usize = 256;
/// Floor of the equality threshold.
pub const EQUALITY_FLOOR: f64 = 1e-6;

const INTERIOR_SAMPLES: usize = 256;
const UNIVALENCE_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Holds,
    Violated,
    HypothesisFailed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// `lhs ≥ rhs`
    AtLeast,
    /// `lhs ≤ rhs`
    AtMost,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Univalence {
    Checked,
    /// The map is not rational, so preimage counting is unavailable.
    Assumed,
    NotRequired,
}

/// Both sides of one inequality, in logarithmic form.
#[derive(Debug, Clone, PartialEq)]
pub struct Sides {
    pub lhs: f64,
    pub rhs: f64,
    pub direction: Direction,
}

impl Sides {
    fn at_least(lhs: f64, rhs: f64) -> Self {
        Sides {
            lhs,
            rhs,
            direction: Direction::AtLeast,
        }
    }

    fn at_most(lhs: f64, rhs: f64) -> Self {
        Sides {
            lhs,
            rhs,
            direction: Direction::AtMost,
        }
    }

    pub fn margin(&self) -> f64 {
        match self.direction {
            Direction::AtLeast => self.lhs - self.rhs,
            Direction::AtMost => self.rhs - self.lhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub id: String,
    pub kind: Kind,
    pub status: Status,
    pub lhs: f64,
    pub rhs: f64,
    pub direction: Direction,
    pub margin: f64,
    pub satisfied: bool,
    pub equality: bool,
    pub h: f64,
    pub budget: f64,
    pub exact: bool,
    pub boundary_tolerance: f64,
    pub hypothesis: Option<String>,
    pub univalence: Univalence,
    pub notes: Vec<String>,
    pub map: String,
    pub points: Vec<SpherePoint>,
    pub weights: Vec<f64>,
    pub source: String,
    pub target: String,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    id: &'a str,
    kind: &'a str,
    status: Status,
    lhs: Box<RawValue>,
    rhs: Box<RawValue>,
    direction: Direction,
    margin: Box<RawValue>,
    satisfied: bool,
    equality: bool,
    h: Box<RawValue>,
    budget: Box<RawValue>,
    exact: bool,
    boundary_tolerance: Box<RawValue>,
    hypothesis: Option<&'a str>,
    univalence: Univalence,
    notes: &'a [String],
    map: &'a str,
    points: Vec<Box<RawValue>>,
    weights: Vec<Box<RawValue>>,
    source: &'a str,
    target: &'a str,
}

impl VerificationReport {
    /// One JSON object on a single line.
    /// Re-derive the verdict under numeric budget `budget`. Reports whose
    /// hypotheses failed are returned unchanged.
    pub fn with_budget(mut self, budget: f64) -> Self {
        self.budget = budget;
        if self.hypothesis.is_some() {
            return self;
        }
        self.satisfied = self.margin >= -budget;
        self.equality = self.margin.abs() <= EQUALITY_FLOOR.max(budget);
        self.status = if self.satisfied {
            Status::Holds
        } else {
            Status::Violated
        };
        self
    }

    pub fn to_json(&self) -> String {
        let j = ReportJson {
            id: &self.id,
            kind: self.kind.name(),
            status: self.status,
            lhs: json_number(self.lhs),
            rhs: json_number(self.rhs),
            direction: self.direction,
            margin: json_number(self.margin),
            satisfied: self.satisfied,
            equality: self.equality,
            h: json_number(self.h),
            budget: json_number(self.budget),
            exact: self.exact,
            boundary_tolerance: json_number(self.boundary_tolerance),
            hypothesis: self.hypothesis.as_deref(),
            univalence: self.univalence,
            notes: &self.notes,
            map: &self.map,
            points: self.points.iter().map(|&p| json_point(p)).collect(),
            weights: self.weights.iter().map(|&t| json_number(t)).collect(),
            source: &self.source,
            target: &self.target,
        };
        serde_json::to_string(&j).expect("report serializes")
    }
}

/// A map between two catalog domains.
pub struct Context {
    pub map: HolomorphicMap,
    pub source: Arc<dyn Provider>,
    pub target: Arc<dyn Provider>,
}

fn show(z: Complex64) -> String {
    format!("{z}")
}

impl Context {
    pub fn new(map: HolomorphicMap, source: Arc<dyn Provider>, target: Arc<dyn Provider>) -> Self {
        Context { map, source, target }
    }

    pub fn from_scenario(sc: &Scenario) -> Result<Self> {
        let h = sc.mesh_size();
        let base = sc.base.as_deref();
        let mut map = HolomorphicMap::parse(&sc.map)?;
        if let Some(p) = sc.aux.valence {
            let hint = map.valence_hint;
            map = map.with_valence(p.max(hint));
        }
        Ok(Context {
            map,
            source: sc.source.provider(base, h)?,
            target: sc.target.provider(base, h)?,
        })
    }

    /// `log |Df(z)| = log r(B, γ, z) − log r(G, Γ, f(z)) + log |f'(z)|`.
    pub fn log_weighted_derivative(&self, z: Complex64) -> Result<f64> {
        let w = self.map.eval(z)?;
        let d = self.map.deriv(z)?;
        if d.norm() == 0.0 {
            return Err(Error::ZeroDerivative(show(z)));
        }
        if self.target.part_distance(w, Part::Gamma) <= 1e-12 {
            return Err(Error::ImageOnGamma(show(w)));
        }
        Ok(self.source.log_radius(z.into())? - self.target.log_radius(w.into())? + d.norm().ln())
    }

    fn green_source(&self, a: Complex64, b: Complex64) -> Result<f64> {
        self.source.green(a.into(), b.into())
    }

    /// `g_G(a, b, Γ)`, infinite when the points coincide.
    fn green_target(&self, a: Complex64, b: Complex64) -> Result<f64> {
        if a == b {
            return Ok(f64::INFINITY);
        }
        self.target.green(a.into(), b.into())
    }
}

/// The weighted derivative `|Df(z)|`.
pub fn weighted_derivative(ctx: &Context, z: Complex64) -> Result<f64> {
    Ok(ctx.log_weighted_derivative(z)?.exp())
}

/// Boundary correspondence by sampling: points of `from` (filtered by
/// `keep`) must land within tolerance of the same part of the target.
fn boundary_hypothesis(
    ctx: &Context,
    from: Part,
    keep: &dyn Fn(Complex64) -> bool,
) -> Option<String> {
    let name = match from {
        Part::Gamma => "γ",
        Part::Free => "∂B∖γ",
    };
    let target_name = match from {
        Part::Gamma => "Γ",
        Part::Free => "∂G∖Γ",
    };
    let mut n = 4 * MIN_BOUNDARY_SAMPLES;
    loop {
        let samples: Vec<Complex64> = ctx
            .source
            .boundary_samples(n)
            .into_iter()
            .filter(|&(z, p)| p == from && keep(z))
            .map(|(z, _)| z)
            .collect();
        if samples.len() >= MIN_BOUNDARY_SAMPLES || n >= 64 * MIN_BOUNDARY_SAMPLES || samples.is_empty() {
            for z in samples {
                let w = ctx.map.expr.eval(z);
                if !w.is_finite() {
                    if ctx.target.bounded() {
                        return Some(format!("f is not finite at the {name} point {}", show(z)));
                    }
                    continue;
                }
                let d = ctx.target.part_distance(w, from);
                if d > BOUNDARY_TOL * w.norm().max(1.0) {
                    return Some(format!(
                        "f({}) = {} lies {d:.3e} away from {target_name}",
                        show(z),
                        show(w)
                    ));
                }
            }
            return None;
        }
        n *= 4;
    }
}

fn inclusion_hypothesis(ctx: &Context) -> Option<String> {
    if let Some(poles) = ctx.map.poles() {
        if let Some(p) = poles.iter().find(|&&p| ctx.source.contains(p)) {
            return Some(format!("f has a pole at {} inside B", show(*p)));
        }
    }
    for z in ctx.source.interior_samples(INTERIOR_SAMPLES) {
        let w = ctx.map.expr.eval(z);
        if !w.is_finite() || !ctx.target.contains(w) {
            return Some(format!("f({}) = {} is outside G", show(z), show(w)));
        }
    }
    None
}

fn univalence_hypothesis(ctx: &Context) -> Result<(Univalence, Option<String>)> {
    if !ctx.map.is_rational() {
        return Ok((Univalence::Assumed, None));
    }
    let inside = |u: Complex64| ctx.source.contains(u);
    for z in ctx.source.interior_samples(UNIVALENCE_SAMPLES) {
        let w = ctx.map.eval(z)?;
        let count: usize = ctx.map.preimages(w, &inside)?.iter().map(|p| p.multiplicity).sum();
        if count != 1 {
            return Ok((
                Univalence::Checked,
                Some(format!("f takes the value {} {count} times in B", show(w))),
            ));
        }
    }
    Ok((Univalence::Checked, None))
}

fn needs_univalence(sc: &Scenario) -> bool {
    match sc.kind {
        Kind::TwoPoint21
        | Kind::TwoPoint22
        | Kind::Major31
        | Kind::Pommerenke32cor
        | Kind::Schwarzian34
        | Kind::Cor35
        | Kind::Boundary36
        | Kind::Annulus37 => true,
        // the degenerate case t1 t2 = 0 is Pick's lemma, valid for all self-maps
        Kind::Nehari33 => sc.weights.iter().filter(|t| **t != 0.0).count() > 1 || sc.weights.is_empty(),
        _ => false,
    }
}

fn boundary_part_required(sc: &Scenario) -> Part {
    match sc.kind {
        Kind::TwoPoint21 | Kind::Major31 | Kind::Cor35 | Kind::Boundary36 => Part::Gamma,
        Kind::Pommerenke32cor => match sc.aux.bound.unwrap_or_default() {
            CapacityBound::Lower => Part::Gamma,
            CapacityBound::Upper => Part::Free,
        },
        _ => Part::Free,
    }
}

/// Check every hypothesis of the scenario's kind; `Some(reason)` on failure.
pub fn check_hypotheses(sc: &Scenario, ctx: &Context) -> Result<(Univalence, Option<String>)> {
    let part = boundary_part_required(sc);
    if let Some(msg) = boundary_hypothesis(ctx, part, &|_| true) {
        return Ok((Univalence::NotRequired, Some(msg)));
    }
    if let DomainRef::Annulus { inner, .. } = &sc.source {
        let cut = 0.5 * (1.0 + inner);
        if let Some(msg) = boundary_hypothesis(ctx, Part::Gamma, &|z| z.norm() > cut) {
            return Ok((Univalence::NotRequired, Some(msg)));
        }
    }
    if let Some(msg) = inclusion_hypothesis(ctx) {
        return Ok((Univalence::NotRequired, Some(msg)));
    }
    if needs_univalence(sc) {
        univalence_hypothesis(ctx)
    } else {
        Ok((Univalence::NotRequired, None))
    }
}

/// Worst (smallest margin) of several instances of one inequality.
fn worst(all: Vec<Sides>) -> Result<(Sides, usize)> {
    all.into_iter()
        .enumerate()
        .min_by(|a, b| a.1.margin().total_cmp(&b.1.margin()))
        .map(|(i, s)| (s, i))
        .ok_or_else(|| Error::InvalidScenario("no evaluation points".into()))
}

fn two_point(ctx: &Context, sc: &Scenario) -> Result<Sides> {
    let (z1, z2) = (sc.finite_point(0)?, sc.finite_point(1)?);
    let (t1, t2) = sc.weight_pair()?;
    let (w1, w2) = (ctx.map.eval(z1)?, ctx.map.eval(z2)?);
    let lhs = t1 * t1 * ctx.log_weighted_derivative(z1)? + t2 * t2 * ctx.log_weighted_derivative(z2)?;
    let rhs = 2.0 * t1 * t2 * (ctx.green_target(w1, w2)? - ctx.green_source(z1, z2)?);
    Ok(if sc.kind == Kind::TwoPoint21 {
        Sides::at_least(lhs, rhs)
    } else {
        Sides::at_most(lhs, rhs)
    })
}

fn finite_points(sc: &Scenario) -> Result<Vec<Complex64>> {
    (0..sc.points.len()).map(|k| sc.finite_point(k)).collect()
}

fn require_disks(sc: &Scenario, single_arc: bool) -> Result<()> {
    let ok = |d: &DomainRef| match d {
        DomainRef::Disk => !single_arc,
        DomainRef::DiskArcs { arcs } => !single_arc || arcs.len() == 1,
        _ => false,
    };
    if ok(&sc.source) && ok(&sc.target) {
        Ok(())
    } else if single_arc {
        Err(Error::InvalidScenario(format!(
            "{} needs unit disks marked on a single arc",
            sc.kind
        )))
    } else {
        Err(Error::InvalidScenario(format!("{} needs unit disks", sc.kind)))
    }
}

fn reflect(z: Complex64) -> Option<Complex64> {
    (z.norm() > 0.0).then(|| 1.0 / z.conj())
}

/// Preimages of `w` in `B` as `(z, n, c)`.
fn preimages(ctx: &Context, w: Complex64) -> Result<Vec<(Complex64, usize, Complex64)>> {
    let inside = |u: Complex64| ctx.source.contains(u);
    Ok(ctx
        .map
        .preimages(w, &inside)?
        .into_iter()
        .map(|p| (p.z, p.multiplicity, p.coefficient))
        .collect())
}

fn near(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-6 * (1.0 + a.norm())
}

/// Both sides of the p-valent inequality for target points `w_l` with weights `t_l`.
pub fn pvalent_form(ctx: &Context, targets: &[Complex64], t: &[f64], p: usize) -> Result<(f64, f64)> {
    if targets.len() != t.len() || targets.is_empty() {
        return Err(Error::InvalidScenario(
            "need one weight per target point".into(),
        ));
    }
    for i in 0..targets.len() {
        for j in (i + 1)..targets.len() {
            if targets[i] == targets[j] {
                return Err(Error::InvalidScenario("target points must be distinct".into()));
            }
        }
    }
    let mut zeros = Vec::with_capacity(targets.len());
    for &w in targets {
        let z = preimages(ctx, w)?;
        let found: usize = z.iter().map(|e| e.1).sum();
        if found != p {
            return Err(Error::PreimageCount {
                point: show(w),
                expected: p,
                found,
            });
        }
        zeros.push(z);
    }
    let pf = p as f64;
    let mut lhs = 0.0;
    for (l, &w) in targets.iter().enumerate() {
        lhs += t[l] * t[l] * ctx.target.log_radius(w.into())?;
        for (k, &v) in targets.iter().enumerate() {
            if k != l {
                lhs += t[k] * t[l] * ctx.green_target(v, w)?;
            }
        }
    }
    lhs *= pf;
    let mut rhs = 0.0;
    for (l, zl) in zeros.iter().enumerate() {
        for &(z, n, c) in zl {
            let n = n as f64;
            rhs += t[l] * t[l] * n * (c.norm().ln() + n * ctx.source.log_radius(z.into())?);
        }
    }
    for (k, zk) in zeros.iter().enumerate() {
        for (l, zl) in zeros.iter().enumerate() {
            for (i, &(a, na, _)) in zk.iter().enumerate() {
                for (j, &(b, nb, _)) in zl.iter().enumerate() {
                    if k == l && i == j {
                        continue;
                    }
                    rhs += t[k] * t[l] * (na * nb) as f64 * ctx.green_source(a, b)?;
                }
            }
        }
    }
    Ok((lhs, rhs))
}

fn log_capacity_at_zero(p: &dyn Provider) -> Result<f64> {
    Ok(-0.5 * p.log_radius(SpherePoint::Finite(Complex64::new(0.0, 0.0)))?)
}

/// Evaluate the two sides for the scenario's kind.
pub fn evaluate(sc: &Scenario, ctx: &Context) -> Result<(Sides, Vec<String>)> {
    let mut notes = Vec::new();
    let sides = match sc.kind {
        Kind::TwoPoint21 | Kind::TwoPoint22 => two_point(ctx, sc)?,
        Kind::Major31 | Kind::Major32 => {
            let all = finite_points(sc)?
                .into_iter()
                .map(|z| {
                    let l = ctx.log_weighted_derivative(z)?;
                    Ok(if sc.kind == Kind::Major31 {
                        Sides::at_least(l, 0.0)
                    } else {
                        Sides::at_most(l, 0.0)
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let (s, i) = worst(all)?;
            notes.push(format!("worst point index {i}"));
            s
        }
        Kind::Pommerenke32cor => {
            require_disks(sc, false)?;
            let zero = Complex64::new(0.0, 0.0);
            if !sc.points.is_empty() && sc.finite_point(0)? != zero {
                return Err(Error::InvalidScenario("the capacity bound is taken at z = 0".into()));
            }
            let f0 = ctx.map.eval(zero)?;
            if f0.norm() > 1e-12 {
                return Err(Error::InvalidScenario(format!("f(0) = {} must vanish", show(f0))));
            }
            let d = ctx.map.deriv(zero)?.norm();
            let lhs = 0.5 * d.ln() + log_capacity_at_zero(ctx.target.as_ref())?;
            let rhs = log_capacity_at_zero(ctx.source.as_ref())?;
            match sc.aux.bound.unwrap_or_default() {
                CapacityBound::Lower => Sides::at_least(lhs, rhs),
                CapacityBound::Upper => Sides::at_most(lhs, rhs),
            }
        }
        Kind::Nehari33 => {
            require_disks(sc, false)?;
            if sc.source != DomainRef::Disk || sc.target != DomainRef::Disk {
                return Err(Error::InvalidScenario("Nehari33 needs γ = ∂U and Γ = ∂U".into()));
            }
            let (t1, t2) = sc.weight_pair()?;
            let term = |z: Complex64| -> Result<(Complex64, f64)> {
                let w = ctx.map.eval(z)?;
                let d = ctx.map.deriv(z)?;
                Ok((w, ((1.0 - z.norm_sqr()) * d.norm() / (1.0 - w.norm_sqr())).ln()))
            };
            let z1 = sc.finite_point(0)?;
            let (w1, l1) = term(z1)?;
            let mut lhs = t1 * t1 * l1;
            let mut rhs = 0.0;
            if t2 != 0.0 {
                let z2 = sc.finite_point(1)?;
                let (w2, l2) = term(z2)?;
                lhs += t2 * t2 * l2;
                let q = ((z1 - z2) * (1.0 - w1.conj() * w2)) / ((1.0 - z1.conj() * z2) * (w1 - w2));
                rhs = 2.0 * t1 * t2 * q.norm().ln();
            }
            Sides::at_most(lhs, rhs)
        }
        Kind::Schwarzian34 => {
            require_disks(sc, false)?;
            let zero = Complex64::new(0.0, 0.0);
            let s1 = ctx.map.schwarzian(zero)?;
            let s2 = ctx.map.schwarzian_coefficients(zero)?;
            notes.push(format!(
                "S_f(0) = {} from derivatives, {} from coefficients",
                show(s1),
                show(s2)
            ));
            let c1 = ctx.map.deriv(zero)?;
            Sides::at_most(s1.norm().ln(), (6.0 * (1.0 - c1.norm_sqr())).ln())
        }
        Kind::Cor35 => {
            require_disks(sc, true)?;
            let sg = sc.source.arc_complement().expect("checked single arc");
            let tg = sc.target.arc_complement().expect("checked single arc");
            let (z1, z2) = (sc.finite_point(0)?, sc.finite_point(1)?);
            let (t1, t2) = sc.weight_pair()?;
            let term = |z: Complex64| -> Result<f64> {
                let w = ctx.map.eval(z)?;
                let d = ctx.map.deriv(z)?;
                Ok(2.0 * sg.radius(Some(z)).ln() + (1.0 - w.norm_sqr()).ln() + d.norm().ln()
                    - 2.0 * tg.radius(Some(w)).ln()
                    - (1.0 - z.norm_sqr()).ln())
            };
            let (w1, w2) = (ctx.map.eval(z1)?, ctx.map.eval(z2)?);
            let lhs = t1 * t1 * term(z1)? + t2 * t2 * term(z2)?;
            let gw = tg.green(w1, Some(w2))? + tg.green(w1, reflect(w2))?;
            let gz = sg.green(z1, Some(z2))? + sg.green(z1, reflect(z2))?;
            let sides = Sides::at_least(lhs, 2.0 * t1 * t2 * (gw - gz));
            let robin = two_point(ctx, &Scenario { kind: Kind::TwoPoint21, ..sc.clone() })?;
            notes.push(format!(
                "Robin-function form margin {:.16e}",
                robin.margin()
            ));
            sides
        }
        Kind::Boundary36 => {
            require_disks(sc, true)?;
            let sg = sc.source.arc_complement().expect("checked single arc");
            let tg = sc.target.arc_complement().expect("checked single arc");
            let (z1, z2) = (sc.finite_point(0)?, sc.finite_point(1)?);
            let (t1, t2) = sc.weight_pair()?;
            let mut logs = [0.0; 2];
            let mut images = [Complex64::new(0.0, 0.0); 2];
            for (k, z) in [z1, z2].into_iter().enumerate() {
                if (z.norm() - 1.0).abs() > 1e-12 || ctx.source.part_distance(z, Part::Gamma) < 1e-9 {
                    return Err(Error::InvalidScenario(format!(
                        "{} is not a free boundary point",
                        show(z)
                    )));
                }
                let w = ctx.map.eval(z)?;
                if (w.norm() - 1.0).abs() > 1e-9 {
                    return Err(Error::InvalidScenario(format!(
                        "the boundary value f({}) = {} is off the unit circle",
                        show(z),
                        show(w)
                    )));
                }
                let d = ctx.map.deriv(z)?;
                logs[k] = sg.radius(Some(z)).ln() - tg.radius(Some(w)).ln() + d.norm().ln();
                images[k] = w;
            }
            let lhs = t1 * t1 * logs[0] + t2 * t2 * logs[1];
            let rhs = 2.0 * t1 * t2 * (tg.green(images[0], Some(images[1]))? - sg.green(z1, Some(z2))?);
            Sides::at_least(lhs, rhs)
        }
        Kind::Annulus37 => {
            if !matches!(sc.source, DomainRef::Annulus { .. }) {
                return Err(Error::InvalidScenario("Annulus37 needs an annulus source".into()));
            }
            let sc2 = Scenario {
                kind: Kind::TwoPoint22,
                weights: vec![1.0, -1.0],
                ..sc.clone()
            };
            two_point(ctx, &sc2)?
        }
        Kind::Lindelof41 => {
            let w0 = match sc.aux.w0.map(SpherePoint::from) {
                Some(SpherePoint::Finite(w)) => w,
                _ => return Err(Error::InvalidScenario("Lindelof41 needs a finite aux.w0".into())),
            };
            let zeros = preimages(ctx, w0)?;
            let all = finite_points(sc)?
                .into_iter()
                .map(|z| {
                    if zeros.iter().any(|e| near(e.0, z)) {
                        return Err(Error::InvalidScenario(format!(
                            "evaluation point {} is a preimage of w0",
                            show(z)
                        )));
                    }
                    let lhs = ctx.green_target(ctx.map.eval(z)?, w0)?;
                    let mut rhs = 0.0;
                    for &(zn, n, _) in &zeros {
                        rhs += n as f64 * ctx.green_source(z, zn)?;
                    }
                    Ok(Sides::at_least(lhs, rhs))
                })
                .collect::<Result<Vec<_>>>()?;
            notes.push(format!("{} preimage(s) of w0", zeros.len()));
            let (s, i) = worst(all)?;
            notes.push(format!("worst point index {i}"));
            s
        }
        Kind::Radius42 | Kind::Multiplicity52 => match sc.points.first() {
            Some(SpherePoint::Infinity) if sc.kind == Kind::Multiplicity52 => {
                let a = ctx.map.leading_at_infinity().ok_or_else(|| {
                    Error::Unsupported("f must be rational with f(z) ~ a z at infinity".into())
                })?;
                let inf = SpherePoint::Infinity;
                let lhs = ctx.source.log_radius(inf)? - a.norm().ln() - ctx.target.log_radius(inf)?;
                notes.push(format!("f(z) ~ {} z at infinity", show(a)));
                Sides::at_most(lhs, 0.0)
            }
            _ => {
                let z0 = sc.finite_point(0)?;
                let w0 = ctx.map.eval(z0)?;
                let zeros = preimages(ctx, w0)?;
                let own = zeros.iter().position(|e| near(e.0, z0)).ok_or_else(|| {
                    Error::IncompleteEnumeration(format!("{} missing among the preimages", show(z0)))
                })?;
                let mut sum = 0.0;
                for (k, &(zn, n, _)) in zeros.iter().enumerate() {
                    if k != own {
                        sum += n as f64 * ctx.green_source(z0, zn)?;
                    }
                }
                let (_, n, _) = zeros[own];
                notes.push(format!("multiplicity at z0: {n}"));
                if sc.kind == Kind::Radius42 {
                    let c = ctx.map.taylor(z0, n)[n];
                    let rhs = c.norm().ln() + n as f64 * ctx.source.log_radius(z0.into())? + sum;
                    Sides::at_least(ctx.target.log_radius(w0.into())?, rhs)
                } else {
                    let lhs = if n > 1 {
                        f64::NEG_INFINITY
                    } else {
                        ctx.log_weighted_derivative(z0)?
                    };
                    Sides::at_most(lhs, -sum)
                }
            }
        },
        Kind::PValent43 => {
            let targets = sc
                .aux
                .targets
                .iter()
                .map(|&p| match SpherePoint::from(p) {
                    SpherePoint::Finite(w) => Ok(w),
                    SpherePoint::Infinity => {
                        Err(Error::Unsupported("target points must be finite".into()))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let p = sc.aux.valence.unwrap_or(ctx.map.valence_hint);
            let (lhs, rhs) = pvalent_form(ctx, &targets, &sc.weights, p)?;
            Sides::at_least(lhs, rhs)
        }
        Kind::Invariant51 => {
            let pts = finite_points(sc)?;
            let mut all = Vec::new();
            for i in 0..pts.len() {
                for j in (i + 1)..pts.len() {
                    let (wi, wj) = (ctx.map.eval(pts[i])?, ctx.map.eval(pts[j])?);
                    all.push(Sides::at_least(
                        ctx.green_target(wi, wj)?,
                        ctx.green_source(pts[i], pts[j])?,
                    ));
                }
            }
            let (s, i) = worst(all)?;
            notes.push(format!("worst pair index {i}"));
            s
        }
        Kind::QuarterPlane53 => {
            if sc.source != DomainRef::QuarterPlane || sc.target != DomainRef::QuarterPlane {
                return Err(Error::InvalidScenario("QuarterPlane53 maps the quarter-plane into itself".into()));
            }
            let (z0, zeta) = (sc.finite_point(0)?, sc.finite_point(1)?);
            let w0 = ctx.map.eval(z0)?;
            let (t1, t2) = sc.weight_pair()?;
            let p = sc.aux.valence.unwrap_or(ctx.map.valence_hint);
            let (lhs, rhs) = pvalent_form(ctx, &[zeta, w0], &[t1, t2], p)?;
            Sides::at_least(lhs, rhs)
        }
    };
    Ok((sides, notes))
}

/// Run one scenario: hypotheses first, then both sides and the verdict.
pub fn verify(sc: &Scenario) -> Result<VerificationReport> {
    let h = sc.mesh_size();
    let ctx = Context::from_scenario(sc)?;
    let exact = ctx.source.exact() && ctx.target.exact();
    let budget = if exact { ROUNDOFF } else { numeric_budget(h)? };
    let mut report = VerificationReport {
        id: sc.id.clone(),
        kind: sc.kind,
        status: Status::HypothesisFailed,
        lhs: f64::NAN,
        rhs: f64::NAN,
        direction: Direction::AtLeast,
        margin: f64::NAN,
        satisfied: false,
        equality: false,
        h,
        budget,
        exact,
        boundary_tolerance: BOUNDARY_TOL,
        hypothesis: None,
        univalence: Univalence::NotRequired,
        notes: Vec::new(),
        map: ctx.map.source.clone(),
        points: sc.points.clone(),
        weights: sc.weights.clone(),
        source: ctx.source.describe(),
        target: ctx.target.describe(),
    };
    let (univalence, failure) = check_hypotheses(sc, &ctx)?;
    report.univalence = univalence;
    if let Some(msg) = failure {
        report.hypothesis = Some(msg);
        return Ok(report);
    }
    let (sides, notes) = evaluate(sc, &ctx)?;
    let margin = sides.margin();
    report.lhs = sides.lhs;
    report.rhs = sides.rhs;
    report.direction = sides.direction;
    report.margin = margin;
    report.notes = notes;
    Ok(report.with_budget(budget))
}
