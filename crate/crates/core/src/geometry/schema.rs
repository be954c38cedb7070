//! Domain and marking files (TOML).
//!
//! ```toml
//! id = "disk"
//!
//! [[loops]]
//! role = "outer"
//! [[loops.arcs]]
//! kind = "circle"
//! center = [0.0, 0.0]
//! radius = 1.0
//! start = 0.0
//! sweep = 6.283185307179586
//!
//! [gamma.half]
//! angles = [[-1.5707963267948966, 1.5707963267948966]]
//! ```
//!
//! Unbounded domains use a `[model]` table instead of loops, e.g.
//! `kind = "quarter-plane"`. The γ set named `full` is always available
//! and selects the whole boundary.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::arc::ArcSegment;
use super::domain::{make_domain, mark_boundary, shapes, BoundaryLoop, DomainSpec, GammaInterval, MarkedDomain};
use super::models::{self, Compact, Region};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainFile {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub contains_infinity: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub loops: Vec<LoopSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub gamma: BTreeMap<String, GammaSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelSpec {
    UpperHalfPlane { gamma: Vec<[f64; 2]> },
    QuarterPlane,
    Strip,
    ExteriorDisk { center: [f64; 2], radius: f64 },
    ExteriorSegment { a: [f64; 2], b: [f64; 2] },
    ExteriorArc { center: [f64; 2], radius: f64, start: f64, sweep: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LoopRole {
    Outer,
    Hole,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopSpec {
    pub role: LoopRole,
    pub arcs: Vec<ArcSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ArcSpec {
    Circle { center: [f64; 2], radius: f64, start: f64, sweep: f64 },
    Line { a: [f64; 2], b: [f64; 2] },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaSpec {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub intervals: Vec<IntervalSpec>,
    /// Counterclockwise angular intervals on loop 0, which must be a full circle.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub angles: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalSpec {
    #[serde(rename = "loop")]
    pub loop_index: usize,
    pub arc: usize,
    pub t0: f64,
    pub t1: f64,
}

fn cx(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

impl ArcSpec {
    pub fn to_arc(&self) -> Result<ArcSegment> {
        match *self {
            ArcSpec::Circle {
                center,
                radius,
                start,
                sweep,
            } => ArcSegment::circle(cx(center), radius, start, sweep),
            ArcSpec::Line { a, b } => ArcSegment::line(cx(a), cx(b)),
        }
    }

    pub fn from_arc(a: &ArcSegment) -> Self {
        match *a {
            ArcSegment::Circle {
                center,
                radius,
                start,
                sweep,
            } => ArcSpec::Circle {
                center: pair(center),
                radius,
                start,
                sweep,
            },
            ArcSegment::Line { a, b } => ArcSpec::Line {
                a: pair(a),
                b: pair(b),
            },
        }
    }
}

/// Map a toml error to a line/column parse error.
pub fn parse_error(text: &str, span: Option<std::ops::Range<usize>>, message: &str) -> Error {
    let offset = span.map(|s| s.start).unwrap_or(0).min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = offset - before.rfind('\n').map(|i| i + 1).unwrap_or(0) + 1;
    Error::Parse {
        line,
        column,
        message: message.lines().last().unwrap_or(message).trim().to_string(),
    }
}

impl DomainFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| parse_error(text, e.span(), e.message()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::InvalidArgument(e.to_string()))
    }

    pub fn from_spec(id: &str, spec: &DomainSpec) -> Self {
        let to_loop = |role, l: &BoundaryLoop| LoopSpec {
            role,
            arcs: l.arcs.iter().map(ArcSpec::from_arc).collect(),
        };
        let mut loops = Vec::new();
        if let Some(o) = &spec.outer {
            loops.push(to_loop(LoopRole::Outer, o));
        }
        loops.extend(spec.holes.iter().map(|h| to_loop(LoopRole::Hole, h)));
        DomainFile {
            id: id.to_string(),
            model: None,
            contains_infinity: spec.contains_infinity,
            loops,
            gamma: BTreeMap::new(),
        }
    }

    pub fn with_gamma(mut self, name: &str, md: &MarkedDomain) -> Self {
        self.gamma.insert(
            name.to_string(),
            GammaSpec {
                intervals: md
                    .gamma
                    .iter()
                    .map(|g| IntervalSpec {
                        loop_index: g.loop_index,
                        arc: g.arc,
                        t0: g.t0,
                        t1: g.t1,
                    })
                    .collect(),
                angles: Vec::new(),
            },
        );
        self
    }

    /// Validated domain from explicit loops.
    pub fn domain_spec(&self) -> Result<DomainSpec> {
        if self.model.is_some() {
            return Err(Error::InvalidArgument(format!(
                "domain '{}' is a model domain without explicit loops",
                self.id
            )));
        }
        let mut outer = None;
        let mut holes = Vec::new();
        for (k, l) in self.loops.iter().enumerate() {
            let arcs = l.arcs.iter().map(|a| a.to_arc()).collect::<Result<Vec<_>>>()?;
            let bl = BoundaryLoop::new(arcs);
            match l.role {
                LoopRole::Outer if k == 0 => outer = Some(bl),
                LoopRole::Outer => {
                    return Err(Error::InvalidGeometry("only the first loop may be outer".into()))
                }
                LoopRole::Hole => holes.push(bl),
            }
        }
        make_domain(DomainSpec {
            outer,
            holes,
            contains_infinity: self.contains_infinity,
        })
    }

    pub fn gamma_names(&self) -> Vec<String> {
        let mut v: Vec<String> = self.gamma.keys().cloned().collect();
        if !v.iter().any(|n| n == "full") {
            v.push("full".into());
        }
        v
    }

    /// Build the region with the named γ selection (`None` or `full`: all of ∂B).
    pub fn region(&self, gamma: Option<&str>) -> Result<Region> {
        let name = gamma.unwrap_or("full");
        if let Some(m) = &self.model {
            if name != "full" && !self.gamma.is_empty() {
                return Err(Error::InvalidArgument(
                    "model domains carry their own gamma; only 'full' is accepted".into(),
                ));
            }
            return Ok(match m {
                ModelSpec::UpperHalfPlane { gamma } => models::upper_half_plane(
                    &gamma.iter().map(|g| (g[0], g[1])).collect::<Vec<_>>(),
                )?
                .into(),
                ModelSpec::QuarterPlane => models::quarter_plane().into(),
                ModelSpec::Strip => models::strip().into(),
                ModelSpec::ExteriorDisk { center, radius } => models::exterior(Compact::Disk {
                    center: cx(*center),
                    radius: *radius,
                })?
                .into(),
                ModelSpec::ExteriorSegment { a, b } => models::exterior(Compact::Segment {
                    a: cx(*a),
                    b: cx(*b),
                })?
                .into(),
                ModelSpec::ExteriorArc {
                    center,
                    radius,
                    start,
                    sweep,
                } => models::exterior(Compact::Arc {
                    center: cx(*center),
                    radius: *radius,
                    start: *start,
                    sweep: *sweep,
                })?
                .into(),
            });
        }
        let spec = self.domain_spec()?;
        if spec.contains_infinity {
            if name != "full" {
                return Err(Error::Unsupported(
                    "exterior domains support only the full boundary as gamma".into(),
                ));
            }
            return Ok(models::exterior(Compact::Loops(spec.holes.clone()))?.into());
        }
        if name == "full" && !self.gamma.contains_key("full") {
            return Ok(MarkedDomain::whole_boundary(spec)?.into());
        }
        let g = self
            .gamma
            .get(name)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown gamma set '{name}'")))?;
        let mut sel: Vec<GammaInterval> = g
            .intervals
            .iter()
            .map(|i| GammaInterval {
                loop_index: i.loop_index,
                arc: i.arc,
                t0: i.t0,
                t1: i.t1,
            })
            .collect();
        for a in &g.angles {
            sel.extend(shapes::angular_selection(&spec, 0, a[0], a[1])?);
        }
        Ok(mark_boundary(spec, &sel)?.into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DISK: &str = r#"
id = "disk"

[[loops]]
role = "outer"

[[loops.arcs]]
kind = "circle"
center = [0.0, 0.0]
radius = 1.0
start = 0.0
sweep = 6.283185307179586

[gamma.half]
angles = [[-1.5707963267948966, 1.5707963267948966]]
"#;

    #[test]
    fn parse_disk_with_half_gamma() {
        let f = DomainFile::parse(DISK).unwrap();
        let r = f.region(Some("half")).unwrap();
        assert!((r.model().gamma_length() - std::f64::consts::PI).abs() < 1e-12);
        assert!(f.region(Some("nope")).is_err());
    }

    #[test]
    fn parse_error_has_position() {
        let err = DomainFile::parse("id = \"x\"\n[[loops]]\nrole = \"sideways\"\narcs = []\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert!(line >= 2),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn spec_roundtrip() {
        let spec = shapes::annulus(0.3).unwrap();
        let text = DomainFile::from_spec("annulus", &spec).to_toml().unwrap();
        let back = DomainFile::parse(&text).unwrap().domain_spec().unwrap();
        assert_eq!(back, spec);
    }
}
