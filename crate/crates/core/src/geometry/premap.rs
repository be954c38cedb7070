use std::f64::consts::TAU;

use num_complex::Complex64;

use super::arc::ArcSegment;
use crate::error::{Error, Result};

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpherePoint {
    Finite(Complex64),
    Infinity,
}

impl SpherePoint {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            SpherePoint::Finite(z) => Some(z),
            SpherePoint::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }
}

impl From<Complex64> for SpherePoint {
    fn from(z: Complex64) -> Self {
        SpherePoint::Finite(z)
    }
}

/// Elementary conformal steps used to build model maps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapStep {
    /// `(a z + b) / (c z + d)`.
    Mobius {
        a: Complex64,
        b: Complex64,
        c: Complex64,
        d: Complex64,
    },
    Square,
    Exp,
    /// Principal square root.
    Sqrt,
}

impl MapStep {
    pub fn mobius(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        if (a * d - b * c).norm() == 0.0 {
            return Err(Error::InvalidArgument("degenerate Möbius map".into()));
        }
        Ok(MapStep::Mobius { a, b, c, d })
    }

    /// Cayley map of the upper half-plane onto the unit disk, `(z − i)/(z + i)`.
    pub fn cayley_upper() -> Self {
        let i = Complex64::i();
        MapStep::Mobius {
            a: Complex64::new(1.0, 0.0),
            b: -i,
            c: Complex64::new(1.0, 0.0),
            d: i,
        }
    }

    /// Cayley map of the right half-plane onto the unit disk, `(z − 1)/(z + 1)`.
    pub fn cayley_right() -> Self {
        let one = Complex64::new(1.0, 0.0);
        MapStep::Mobius {
            a: one,
            b: -one,
            c: one,
            d: one,
        }
    }

    pub fn apply(&self, p: SpherePoint) -> Result<SpherePoint> {
        use SpherePoint::*;
        Ok(match (*self, p) {
            (MapStep::Mobius { a, b, c, d }, Finite(z)) => {
                let den = c * z + d;
                if den.norm() == 0.0 {
                    Infinity
                } else {
                    Finite((a * z + b) / den)
                }
            }
            (MapStep::Mobius { a, c, .. }, Infinity) => {
                if c.norm() == 0.0 {
                    Infinity
                } else {
                    Finite(a / c)
                }
            }
            (MapStep::Square, Finite(z)) => Finite(z * z),
            (MapStep::Square, Infinity) | (MapStep::Sqrt, Infinity) => Infinity,
            (MapStep::Exp, Finite(z)) => Finite(z.exp()),
            (MapStep::Exp, Infinity) => {
                return Err(Error::InvalidArgument("exp is not defined at infinity".into()))
            }
            (MapStep::Sqrt, Finite(z)) => Finite(z.sqrt()),
        })
    }

    /// Derivative in local coordinates: `1/z` is used at infinity on either side.
    pub fn local_derivative(&self, p: SpherePoint) -> Result<Complex64> {
        use SpherePoint::*;
        let q = self.apply(p)?;
        let d = match (*self, p, q) {
            (MapStep::Mobius { a, b, c, d }, Finite(z), Finite(_)) => {
                (a * d - b * c) / (c * z + d).powi(2)
            }
            (MapStep::Mobius { a, b, c, d }, Infinity, Finite(_)) => (b * c - a * d) / (c * c),
            (MapStep::Mobius { a, b, c, d }, Finite(z), Infinity) => {
                // derivative of (c z + d)/(a z + b)
                (c * b - a * d) / (a * z + b).powi(2)
            }
            (MapStep::Mobius { a, d, .. }, Infinity, Infinity) => d / a,
            (MapStep::Square, Finite(z), _) => 2.0 * z,
            (MapStep::Exp, Finite(z), _) => z.exp(),
            (MapStep::Sqrt, Finite(z), _) => {
                if z.norm() == 0.0 {
                    return Err(Error::ZeroDerivative);
                }
                0.5 / z.sqrt()
            }
            // z² and √z are not conformal at infinity
            (MapStep::Square, Infinity, _) | (MapStep::Sqrt, Infinity, _) => {
                return Err(Error::ZeroDerivative)
            }
            _ => return Err(Error::ZeroDerivative),
        };
        if !(d.re.is_finite() && d.im.is_finite()) {
            return Err(Error::ZeroDerivative);
        }
        Ok(d)
    }

    pub fn inverse(&self) -> Option<Self> {
        match *self {
            MapStep::Mobius { a, b, c, d } => Some(MapStep::Mobius {
                a: d,
                b: -b,
                c: -c,
                d: a,
            }),
            MapStep::Square => Some(MapStep::Sqrt),
            _ => None,
        }
    }
}

/// A composition of elementary steps, applied left to right.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PreMap {
    pub steps: Vec<MapStep>,
}

impl PreMap {
    pub fn identity() -> Self {
        PreMap { steps: Vec::new() }
    }

    pub fn new(steps: Vec<MapStep>) -> Self {
        PreMap { steps }
    }

    pub fn then(mut self, step: MapStep) -> Self {
        self.steps.push(step);
        self
    }

    pub fn apply(&self, p: SpherePoint) -> Result<SpherePoint> {
        self.steps.iter().try_fold(p, |p, s| s.apply(p))
    }

    pub fn apply_finite(&self, z: Complex64) -> Result<Complex64> {
        self.apply(z.into())?
            .finite()
            .ok_or_else(|| Error::InvalidArgument("point maps to infinity".into()))
    }

    /// Chain-rule derivative in local coordinates.
    pub fn local_derivative(&self, p: SpherePoint) -> Result<Complex64> {
        let mut d = Complex64::new(1.0, 0.0);
        let mut p = p;
        for s in &self.steps {
            d *= s.local_derivative(p)?;
            p = s.apply(p)?;
        }
        if d.norm() == 0.0 {
            return Err(Error::ZeroDerivative);
        }
        Ok(d)
    }

    pub fn inverse(&self) -> Option<Self> {
        let steps = self
            .steps
            .iter()
            .rev()
            .map(|s| s.inverse())
            .collect::<Option<Vec<_>>>()?;
        Some(PreMap { steps })
    }
}

/// Robin radius of the original domain from the radius of its model:
/// `r(B, γ, z0) = r(B', φ(γ), φ(z0)) / |φ'(z0)|`.
pub fn transfer_radius(r_model: f64, phi_derivative_at_pole: Complex64) -> Result<f64> {
    let d = phi_derivative_at_pole.norm();
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::ZeroDerivative);
    }
    Ok(r_model / d)
}

/// Image of an arc under a Möbius map, as a circular arc or a segment.
/// The parametrization direction is preserved; parameter values are not.
pub fn mobius_arc_image(step: &MapStep, arc: &ArcSegment) -> Result<ArcSegment> {
    if !matches!(step, MapStep::Mobius { .. }) {
        return Err(Error::InvalidArgument("arc images need a Möbius step".into()));
    }
    let img = |t: f64| -> Result<Complex64> {
        step.apply(arc.point(t).into())?
            .finite()
            .ok_or_else(|| Error::InvalidGeometry("arc passes through the map pole".into()))
    };
    // check a few samples against the pole first
    for k in 0..=16 {
        img(k as f64 / 16.0)?;
    }
    let closed = arc.is_closed();
    let (p0, pm, p1) = if closed {
        (img(0.0)?, img(1.0 / 3.0)?, img(2.0 / 3.0)?)
    } else {
        (img(0.0)?, img(0.5)?, img(1.0)?)
    };
    let cross = (pm - p0).re * (p1 - p0).im - (pm - p0).im * (p1 - p0).re;
    let scale = (pm - p0).norm().max((p1 - p0).norm());
    if cross.abs() <= 1e-13 * scale * scale {
        if closed {
            return Err(Error::InvalidGeometry("closed loop maps to a line".into()));
        }
        return ArcSegment::line(p0, p1);
    }
    let center = circumcenter(p0, pm, p1);
    let radius = (p0 - center).norm();
    let a0 = (p0 - center).arg();
    let am = (pm - center).arg();
    let a1 = (p1 - center).arg();
    let ccw = cross > 0.0;
    let sweep = if closed {
        if ccw {
            TAU
        } else {
            -TAU
        }
    } else if ccw {
        let s = (a1 - a0).rem_euclid(TAU);
        debug_assert!((am - a0).rem_euclid(TAU) <= s + 1e-9);
        s
    } else {
        -(a0 - a1).rem_euclid(TAU)
    };
    ArcSegment::circle(center, radius, a0, sweep)
}

fn circumcenter(a: Complex64, b: Complex64, c: Complex64) -> Complex64 {
    let d = 2.0 * (a.re * (b.im - c.im) + b.re * (c.im - a.im) + c.re * (a.im - b.im));
    let (a2, b2, c2) = (a.norm_sqr(), b.norm_sqr(), c.norm_sqr());
    Complex64::new(
        (a2 * (b.im - c.im) + b2 * (c.im - a.im) + c2 * (a.im - b.im)) / d,
        (a2 * (c.re - b.re) + b2 * (a.re - c.re) + c2 * (b.re - a.re)) / d,
    )
}

/// Slit-opening map for an arc or segment from `a` to `b` through `m`:
/// `s = sqrt(κ (z − a)/(z − b))` sends the complement of the arc onto the
/// right half-plane.
pub fn slit_opening(a: Complex64, m: Complex64, b: Complex64) -> Result<PreMap> {
    let u = (m - a) / (m - b);
    if u.norm() == 0.0 || !u.re.is_finite() {
        return Err(Error::InvalidGeometry("degenerate slit".into()));
    }
    let kappa = -u.conj() / u.norm();
    let one = Complex64::new(1.0, 0.0);
    Ok(PreMap::new(vec![
        MapStep::mobius(kappa, -kappa * a, one, -b)?,
        MapStep::Sqrt,
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn transfer_examples() {
        assert_eq!(transfer_radius(1.0, c(2.0, 0.0)).unwrap(), 0.5);
        assert_eq!(transfer_radius(1.7, c(1.0, 0.0)).unwrap(), 1.7);
        assert_eq!(transfer_radius(1.0, c(0.0, 0.0)), Err(Error::ZeroDerivative));
    }

    #[test]
    fn transfer_roundtrip_through_inverse() {
        let m = MapStep::mobius(c(2.0, 1.0), c(0.3, 0.0), c(0.5, -0.2), c(1.0, 0.4)).unwrap();
        let z = c(0.2, -0.1);
        let w = m.apply(z.into()).unwrap();
        let d = m.local_derivative(z.into()).unwrap();
        let di = m.inverse().unwrap().local_derivative(w).unwrap();
        let r = 0.731;
        let back = transfer_radius(transfer_radius(r, d).unwrap(), di).unwrap();
        assert!((back - r).abs() <= 1e-12 * r);
    }

    #[test]
    fn segment_slit_derivative_at_infinity() {
        let map = slit_opening(c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0))
            .unwrap()
            .then(MapStep::cayley_right());
        assert_eq!(map.apply(SpherePoint::Infinity).unwrap(), SpherePoint::Finite(c(0.0, 0.0)));
        let d = map.local_derivative(SpherePoint::Infinity).unwrap();
        assert!((d.norm() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn cayley_sends_real_axis_to_circle() {
        let m = MapStep::cayley_upper();
        for x in [-3.0, -1.0, 0.0, 0.5, 7.0] {
            let w = m.apply(c(x, 0.0).into()).unwrap().finite().unwrap();
            assert!((w.norm() - 1.0).abs() < 1e-14);
            let th = (w.arg()).rem_euclid(2.0 * PI);
            assert!((th - (PI + 2.0 * f64::atan(x))).abs() < 1e-12);
        }
    }

    #[test]
    fn mobius_image_of_circle() {
        let arc = ArcSegment::full_circle(c(0.0, 0.0), 2.0, 0.0).unwrap();
        let inv = MapStep::mobius(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-0.5, 0.0)).unwrap();
        let img = mobius_arc_image(&inv, &arc).unwrap();
        for k in 0..20 {
            let z = arc.point(k as f64 / 20.0);
            let w = inv.apply(z.into()).unwrap().finite().unwrap();
            assert!(img.distance(w) < 1e-12);
        }
        // orientation is preserved on the sphere: the bounded side flips
        assert!(img.area_contribution() < 0.0);
    }
}
