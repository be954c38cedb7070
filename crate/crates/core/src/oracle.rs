//! Closed-form formulas for model domains.
//!
//! Everything here is plain formula evaluation and never calls the mesh
//! solver, so comparisons between the two are genuine cross-checks.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Green function of the unit disk: `log|1 − z̄0 z| − log|z − z0|`.
pub fn disk_green(z: Complex64, z0: Complex64) -> Result<f64> {
    if !(z.norm() < 1.0 && z0.norm() < 1.0) {
        return Err(Error::OutsideDomain { re: z.re, im: z.im });
    }
    if z == z0 {
        return Err(Error::CoincidentPoints);
    }
    Ok((1.0 - z0.conj() * z).norm().ln() - (z - z0).norm().ln())
}

/// Green function of the right half-plane: `log|z + z̄0| − log|z − z0|`.
pub fn halfplane_green(z: Complex64, z0: Complex64) -> Result<f64> {
    if !(z.re >= 0.0 && z0.re > 0.0) {
        return Err(Error::OutsideDomain { re: z0.re, im: z0.im });
    }
    if z == z0 {
        return Err(Error::CoincidentPoints);
    }
    Ok((z + z0.conj()).norm().ln() - (z - z0).norm().ln())
}

/// `[a; b] = |(a − b)(a − b̄)| / |(a + b)(a + b̄)|`.
pub fn bracket(a: Complex64, b: Complex64) -> Result<f64> {
    let den = ((a + b) * (a + b.conj())).norm();
    if den == 0.0 {
        return Err(Error::InvalidArgument("bracket denominator vanishes".into()));
    }
    Ok(((a - b) * (a - b.conj())).norm() / den)
}

/// Robin function of the quarter-plane `{x > 0, y > 0}` with γ the imaginary
/// half-axis: `g_D(z, ζ) + g_D(z, ζ̄)` for the right half-plane `D`.
pub fn quarterplane_robin(z: Complex64, zeta: Complex64) -> Result<f64> {
    if !(z.re >= 0.0 && z.im >= 0.0 && zeta.re > 0.0 && zeta.im > 0.0) {
        return Err(Error::OutsideDomain { re: z.re, im: z.im });
    }
    Ok(halfplane_green(z, zeta)? + halfplane_green(z, zeta.conj())?)
}

/// Robin radius of the quarter-plane model: `|2ζ Re ζ / Im ζ|`.
pub fn quarterplane_radius(zeta: Complex64) -> Result<f64> {
    if !(zeta.re > 0.0 && zeta.im > 0.0) {
        return Err(Error::OutsideDomain {
            re: zeta.re,
            im: zeta.im,
        });
    }
    Ok((2.0 * zeta * zeta.re / zeta.im).norm())
}

/// δ for the strip `{0 < Im z < π/2}` with γ the upper edge.
pub fn strip_delta(z: Complex64, zeta: Complex64) -> Result<f64> {
    let inside = |w: Complex64| w.im > 0.0 && w.im < PI / 2.0;
    if !(inside(z) && inside(zeta)) {
        return Err(Error::OutsideDomain { re: z.re, im: z.im });
    }
    bracket(z.exp(), zeta.exp())
}

/// Robin radius of the strip model at `ζ` (via `e^z` onto the quarter-plane).
pub fn strip_radius(zeta: Complex64) -> Result<f64> {
    Ok(quarterplane_radius(zeta.exp())? / zeta.exp().norm())
}

/// Logarithmic capacity of an arc of angular measure `m` on the unit circle.
pub fn arc_capacity(measure: f64) -> Result<f64> {
    if !(measure > 0.0 && measure <= TAU) {
        return Err(Error::InvalidArgument(format!("arc measure {measure} not in (0, 2π]")));
    }
    Ok((measure / 4.0).sin())
}

/// Logarithmic capacity of the segment `[a, b]`.
pub fn segment_capacity(a: f64, b: f64) -> Result<f64> {
    if !(b > a) {
        return Err(Error::InvalidArgument("segment needs a < b".into()));
    }
    Ok((b - a) / 4.0)
}

/// Robin radius of the unit disk with γ = ∂U (the conformal radius).
pub fn disk_radius(z: Complex64) -> f64 {
    1.0 - z.norm_sqr()
}

/// Complement of one arc of the unit circle, opened onto the right
/// half-plane by `s(z) = sqrt(κ (z − a)/(z − b))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcComplement {
    pub a: Complex64,
    pub b: Complex64,
    pub kappa: Complex64,
}

impl ArcComplement {
    /// The arc from angle `theta_a` counterclockwise to `theta_b`.
    pub fn new(theta_a: f64, theta_b: f64) -> Result<Self> {
        let m = theta_b - theta_a;
        if !(m > 0.0 && m < TAU) {
            return Err(Error::InvalidArgument(format!("arc measure {m} not in (0, 2π)")));
        }
        let a = Complex64::from_polar(1.0, theta_a);
        let b = Complex64::from_polar(1.0, theta_b);
        let mid = Complex64::from_polar(1.0, theta_a + 0.5 * m);
        let u = (mid - a) / (mid - b);
        Ok(ArcComplement {
            a,
            b,
            kappa: -u.conj() / u.norm(),
        })
    }

    pub fn s(&self, z: Complex64) -> Complex64 {
        (self.kappa * (z - self.a) / (z - self.b)).sqrt()
    }

    pub fn s_infinity(&self) -> Complex64 {
        self.kappa.sqrt()
    }

    fn s_prime(&self, z: Complex64) -> Complex64 {
        0.5 * self.s(z) * (1.0 / (z - self.a) - 1.0 / (z - self.b))
    }

    /// Green function `g_Ω(z, ζ)`; `zeta = None` is the pole at infinity.
    pub fn green(&self, z: Complex64, zeta: Option<Complex64>) -> Result<f64> {
        let sz = self.s(z);
        let sw = match zeta {
            Some(w) => self.s(w),
            None => self.s_infinity(),
        };
        let d = (sz - sw).norm();
        if d == 0.0 {
            return Err(Error::CoincidentPoints);
        }
        Ok((sz + sw.conj()).norm().ln() - d.ln())
    }

    /// Robin (conformal) radius `r(Ω, ζ)`.
    pub fn radius(&self, zeta: Option<Complex64>) -> f64 {
        match zeta {
            Some(w) => 2.0 * self.s(w).re / self.s_prime(w).norm(),
            None => 4.0 * self.s_infinity().re / (self.b - self.a).norm(),
        }
    }
}

/// Reflection in the unit circle, with `0 ↦ ∞`.
fn reflect(z: Complex64) -> Option<Complex64> {
    if z.norm() == 0.0 {
        None
    } else {
        Some(1.0 / z.conj())
    }
}

/// Robin function of the unit disk with γ a single arc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskArc {
    pub omega: ArcComplement,
}

impl DiskArc {
    pub fn new(theta_a: f64, theta_b: f64) -> Result<Self> {
        Ok(DiskArc {
            omega: ArcComplement::new(theta_a, theta_b)?,
        })
    }

    pub fn green(&self, z: Complex64, zeta: Complex64) -> Result<f64> {
        if !(zeta.norm() < 1.0 && z.norm() <= 1.0) {
            return Err(Error::OutsideDomain { re: z.re, im: z.im });
        }
        Ok(self.omega.green(z, Some(zeta))? + self.omega.green(z, reflect(zeta))?)
    }

    pub fn radius(&self, zeta: Complex64) -> Result<f64> {
        if zeta.norm() >= 1.0 {
            return Err(Error::OutsideDomain {
                re: zeta.re,
                im: zeta.im,
            });
        }
        Ok(self.omega.radius(Some(zeta)) * self.omega.green(zeta, reflect(zeta))?.exp())
    }
}

/// Upper half-plane with γ a single real interval `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlaneInterval {
    pub a: f64,
    pub b: f64,
    disk: DiskArc,
}

fn cayley(z: Complex64) -> Complex64 {
    (z - c(0.0, 1.0)) / (z + c(0.0, 1.0))
}

impl HalfPlaneInterval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(b > a) {
            return Err(Error::InvalidArgument("interval needs a < b".into()));
        }
        let th = |x: f64| PI + 2.0 * x.atan();
        Ok(HalfPlaneInterval {
            a,
            b,
            disk: DiskArc::new(th(a), th(b))?,
        })
    }

    pub fn green(&self, z: Complex64, zeta: Complex64) -> Result<f64> {
        if !(zeta.im > 0.0 && z.im >= 0.0) {
            return Err(Error::OutsideDomain { re: z.re, im: z.im });
        }
        self.disk.green(cayley(z), cayley(zeta))
    }

    pub fn radius(&self, zeta: Complex64) -> Result<f64> {
        let d = 2.0 / (zeta + c(0.0, 1.0)).norm_sqr();
        Ok(self.disk.radius(cayley(zeta))? / d)
    }

    /// Robin radius at the boundary pole ∞ by reflection across the real
    /// axis: the reciprocal of the segment capacity.
    pub fn radius_at_infinity(&self) -> f64 {
        4.0 / (self.b - self.a)
    }

    /// `g_H(z, ∞, γ)`, the exterior Green function of the segment.
    pub fn green_at_infinity(&self, z: Complex64) -> Result<f64> {
        let s = (z - self.a) / (z - self.b);
        let w = s.sqrt();
        let one = c(1.0, 0.0);
        Ok((w + one).norm().ln() - (w - one).norm().ln())
    }
}

/// Names of the closed-form oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleTag {
    DiskGreen,
    HalfplaneGreen,
    QuarterplaneRobin,
    StripDelta,
    Bracket,
    ArcCapacity,
    SegmentCapacity,
}

impl OracleTag {
    pub const ALL: [OracleTag; 7] = [
        OracleTag::DiskGreen,
        OracleTag::HalfplaneGreen,
        OracleTag::QuarterplaneRobin,
        OracleTag::StripDelta,
        OracleTag::Bracket,
        OracleTag::ArcCapacity,
        OracleTag::SegmentCapacity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OracleTag::DiskGreen => "disk-green",
            OracleTag::HalfplaneGreen => "halfplane-green",
            OracleTag::QuarterplaneRobin => "quarterplane-robin",
            OracleTag::StripDelta => "strip-delta",
            OracleTag::Bracket => "bracket",
            OracleTag::ArcCapacity => "arc-capacity",
            OracleTag::SegmentCapacity => "segment-capacity",
        }
    }

    /// Number of real arguments: complex points count as two.
    pub fn arity(self) -> usize {
        match self {
            OracleTag::ArcCapacity => 1,
            OracleTag::SegmentCapacity => 2,
            _ => 4,
        }
    }

    pub fn evaluate(self, args: &[f64]) -> Result<f64> {
        if args.len() != self.arity() {
            return Err(Error::InvalidArgument(format!(
                "{} takes {} real arguments, got {}",
                self.name(),
                self.arity(),
                args.len()
            )));
        }
        let p = |k: usize| c(args[2 * k], args[2 * k + 1]);
        match self {
            OracleTag::DiskGreen => disk_green(p(0), p(1)),
            OracleTag::HalfplaneGreen => halfplane_green(p(0), p(1)),
            OracleTag::QuarterplaneRobin => quarterplane_robin(p(0), p(1)),
            OracleTag::StripDelta => strip_delta(p(0), p(1)),
            OracleTag::Bracket => bracket(p(0), p(1)),
            OracleTag::ArcCapacity => arc_capacity(args[0]),
            OracleTag::SegmentCapacity => segment_capacity(args[0], args[1]),
        }
    }
}

impl fmt::Display for OracleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OracleTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        OracleTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown oracle '{s}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_green_examples() {
        assert!((disk_green(c(0.5, 0.0), c(0.0, 0.0)).unwrap() - 2f64.ln()).abs() < 1e-15);
        let v = disk_green(c(0.3, 0.0), c(0.6, 0.0)).unwrap();
        assert!((v - (0.82f64 / 0.3).ln()).abs() < 1e-14);
        assert!((v - 1.005522).abs() < 5e-6);
        let (a, b) = (c(0.1, 0.4), c(-0.3, 0.2));
        assert!((disk_green(a, b).unwrap() - disk_green(b, a).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn halfplane_examples() {
        assert!((halfplane_green(c(1.0, 0.0), c(2.0, 0.0)).unwrap() - 3f64.ln()).abs() < 1e-15);
        assert!(halfplane_green(c(0.0, 0.7), c(2.0, 1.0)).unwrap().abs() < 1e-15);
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(bracket(c(1.0, 1.0), c(1.0, 1.0)).unwrap(), 0.0);
        assert!((bracket(c(0.0, 1.0), c(0.0, 2.0)).unwrap() - 1.0).abs() < 1e-15);
        let v = bracket(c(1.0, 1.0), c(2.0, 2.0)).unwrap();
        let g = quarterplane_robin(c(1.0, 1.0), c(2.0, 2.0)).unwrap();
        assert!(((-g).exp() - v).abs() < 1e-15);
    }

    #[test]
    fn quarterplane_radius_at_one_plus_i() {
        let r = quarterplane_radius(c(1.0, 1.0)).unwrap();
        assert!((r - 2.0 * 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn capacities() {
        assert!((arc_capacity(TAU).unwrap() - 1.0).abs() < 1e-15);
        assert!((arc_capacity(PI).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(segment_capacity(-1.0, 1.0).unwrap(), 0.5);
        assert_eq!(segment_capacity(0.0, 4.0).unwrap(), 1.0);
    }

    #[test]
    fn strip_translation_invariance() {
        let (z, w) = (c(1.0, PI / 4.0), c(0.0, PI / 4.0));
        let d = strip_delta(z, w).unwrap();
        let d2 = strip_delta(z + 0.37, w + 0.37).unwrap();
        assert!((d - d2).abs() < 1e-14);
    }

    #[test]
    fn arc_complement_capacity_matches_formula() {
        for m in [PI / 2.0, PI, 1.5 * PI] {
            let om = ArcComplement::new(-m / 2.0, m / 2.0).unwrap();
            assert!((1.0 / om.radius(None) - arc_capacity(m).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn disk_arc_radius_at_center_is_inverse_square_capacity() {
        for m in [PI / 2.0, PI, 1.5 * PI] {
            let d = DiskArc::new(0.3, 0.3 + m).unwrap();
            let r = d.radius(c(0.0, 0.0)).unwrap();
            assert!((r * arc_capacity(m).unwrap().powi(2) - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn tags_roundtrip() {
        for t in OracleTag::ALL {
            assert_eq!(t.name().parse::<OracleTag>().unwrap(), t);
        }
    }
}
