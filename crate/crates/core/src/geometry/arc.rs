use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Direction in which a circular arc is traversed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Positive,
    Negative,
}

/// One piece of a boundary loop: a line segment or a circular arc.
///
/// Arcs are parametrized by `t` in `[0, 1]`. Circular arcs are stored by
/// center, radius, start angle and signed sweep; a positive sweep runs
/// counterclockwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArcSegment {
    Line {
        a: Complex64,
        b: Complex64,
    },
    Circle {
        center: Complex64,
        radius: f64,
        start: f64,
        sweep: f64,
    },
}

impl ArcSegment {
    pub fn line(a: Complex64, b: Complex64) -> Result<Self> {
        if !(a.re.is_finite() && a.im.is_finite() && b.re.is_finite() && b.im.is_finite()) {
            return Err(Error::InvalidGeometry("non-finite segment endpoint".into()));
        }
        if (b - a).norm() == 0.0 {
            return Err(Error::InvalidGeometry("zero-length segment".into()));
        }
        Ok(ArcSegment::Line { a, b })
    }

    pub fn circle(center: Complex64, radius: f64, start: f64, sweep: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidGeometry(format!("bad radius {radius}")));
        }
        if !(sweep.is_finite() && sweep != 0.0 && sweep.abs() <= TAU * (1.0 + 1e-12)) {
            return Err(Error::InvalidGeometry(format!("bad sweep {sweep}")));
        }
        if !(center.re.is_finite() && center.im.is_finite() && start.is_finite()) {
            return Err(Error::InvalidGeometry("non-finite arc data".into()));
        }
        Ok(ArcSegment::Circle {
            center,
            radius,
            start,
            sweep: sweep.clamp(-TAU, TAU),
        })
    }

    /// Full counterclockwise circle starting at angle `start`.
    pub fn full_circle(center: Complex64, radius: f64, start: f64) -> Result<Self> {
        Self::circle(center, radius, start, TAU)
    }

    pub fn point(&self, t: f64) -> Complex64 {
        match *self {
            ArcSegment::Line { a, b } => a + (b - a) * t,
            ArcSegment::Circle {
                center,
                radius,
                start,
                sweep,
            } => center + Complex64::from_polar(radius, start + sweep * t),
        }
    }

    /// Derivative of [`point`](Self::point) with respect to `t`.
    pub fn velocity(&self, t: f64) -> Complex64 {
        match *self {
            ArcSegment::Line { a, b } => b - a,
            ArcSegment::Circle {
                radius,
                start,
                sweep,
                ..
            } => Complex64::i() * Complex64::from_polar(radius * sweep, start + sweep * t),
        }
    }

    pub fn start(&self) -> Complex64 {
        self.point(0.0)
    }

    pub fn end(&self) -> Complex64 {
        self.point(1.0)
    }

    pub fn length(&self) -> f64 {
        match *self {
            ArcSegment::Line { a, b } => (b - a).norm(),
            ArcSegment::Circle { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    pub fn orientation(&self) -> Orientation {
        match *self {
            ArcSegment::Circle { sweep, .. } if sweep < 0.0 => Orientation::Negative,
            _ => Orientation::Positive,
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(*self, ArcSegment::Circle { sweep, .. } if (sweep.abs() - TAU).abs() < 1e-12)
    }

    pub fn reversed(&self) -> Self {
        match *self {
            ArcSegment::Line { a, b } => ArcSegment::Line { a: b, b: a },
            ArcSegment::Circle {
                center,
                radius,
                start,
                sweep,
            } => ArcSegment::Circle {
                center,
                radius,
                start: start + sweep,
                sweep: -sweep,
            },
        }
    }

    /// Sub-arc over the parameter interval `[t0, t1]`, reparametrized to `[0, 1]`.
    pub fn sub_arc(&self, t0: f64, t1: f64) -> Self {
        match *self {
            ArcSegment::Line { .. } => ArcSegment::Line {
                a: self.point(t0),
                b: self.point(t1),
            },
            ArcSegment::Circle {
                center,
                radius,
                start,
                sweep,
            } => ArcSegment::Circle {
                center,
                radius,
                start: start + sweep * t0,
                sweep: sweep * (t1 - t0),
            },
        }
    }

    /// Signed area contribution `(1/2) ∮ x dy − y dx` along the arc.
    pub fn area_contribution(&self) -> f64 {
        match *self {
            ArcSegment::Line { a, b } => 0.5 * (a.re * b.im - a.im * b.re),
            ArcSegment::Circle {
                center,
                radius,
                start,
                sweep,
            } => {
                // x = cx + R cos, y = cy + R sin
                let (s0, c0) = start.sin_cos();
                let (s1, c1) = (start + sweep).sin_cos();
                0.5 * (radius * radius * sweep
                    + center.re * radius * (s1 - s0)
                    - center.im * radius * (c1 - c0))
            }
        }
    }

    /// Polyline through the arc with at least `min_pieces` pieces.
    pub fn polyline(&self, min_pieces: usize) -> Vec<Complex64> {
        let n = match *self {
            ArcSegment::Line { .. } => 1.max(min_pieces),
            ArcSegment::Circle { sweep, .. } => {
                ((sweep.abs() / TAU * 96.0).ceil() as usize).max(min_pieces).max(2)
            }
        };
        (0..=n).map(|k| self.point(k as f64 / n as f64)).collect()
    }

    /// Parameter of the point on the arc nearest to `z` (clamped to `[0, 1]`).
    pub fn project(&self, z: Complex64) -> f64 {
        match *self {
            ArcSegment::Line { a, b } => {
                let d = b - a;
                (((z - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0)
            }
            ArcSegment::Circle {
                center,
                start,
                sweep,
                ..
            } => {
                let ang = (z - center).arg();
                // signed offset from start in the sweep direction, in [0, 2π)
                let mut off = (ang - start) * sweep.signum();
                off = off.rem_euclid(TAU);
                let t = off / sweep.abs();
                if t <= 1.0 {
                    t
                } else {
                    // outside the arc: pick the nearer endpoint
                    let d0 = (z - self.start()).norm();
                    let d1 = (z - self.end()).norm();
                    if d0 <= d1 {
                        0.0
                    } else {
                        1.0
                    }
                }
            }
        }
    }

    pub fn distance(&self, z: Complex64) -> f64 {
        (self.point(self.project(z)) - z).norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn circle_endpoints_lie_on_circle() {
        let c = Complex64::new(0.3, -0.2);
        let arc = ArcSegment::circle(c, 0.7, 0.4, 2.0).unwrap();
        for p in [arc.start(), arc.end(), arc.point(0.37)] {
            assert!(((p - c).norm() - 0.7).abs() < 1e-12 * 0.7);
        }
    }

    #[test]
    fn unit_circle_area_is_pi() {
        let arc = ArcSegment::full_circle(Complex64::new(2.0, 1.0), 1.0, 0.3).unwrap();
        assert!((arc.area_contribution() - PI).abs() < 1e-12);
        assert!((arc.reversed().area_contribution() + PI).abs() < 1e-12);
    }

    #[test]
    fn zero_length_rejected() {
        let z = Complex64::new(1.0, 1.0);
        assert!(ArcSegment::line(z, z).is_err());
        assert!(ArcSegment::circle(z, 0.0, 0.0, 1.0).is_err());
        assert!(ArcSegment::circle(z, 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn projection_on_arc() {
        let arc = ArcSegment::circle(Complex64::new(0.0, 0.0), 1.0, 0.0, PI).unwrap();
        let t = arc.project(Complex64::new(0.0, 2.0));
        assert!((t - 0.5).abs() < 1e-12);
        assert!(arc.distance(Complex64::new(0.0, 2.0)) - 1.0 < 1e-12);
        let rev = arc.reversed();
        assert!((rev.project(Complex64::new(1.0, 0.1)) - 1.0).abs() < 0.05);
    }
}
