//! Scenario files.
//!
//! ```toml
//! id = "twopoint22_mobius"
//! kind = "TwoPoint22"
//! map = "mobius(z, 1, -0.3, -0.3, 1)"
//! points = [[0.2, 0.0], [0.0, -0.4]]
//! weights = [1.0, -1.0]
//!
//! [source]
//! kind = "disk"
//!
//! [target]
//! kind = "disk"
//! ```
//!
//! Points are `[x, y]` pairs or the string `"infinity"`. Kind-specific
//! parameters live in an optional `[aux]` table.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use potlab_core::geometry::SpherePoint;
use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::catalog::DomainRef;
use crate::error::{Error, Result};

/// Default mesh size for scenarios that need the solver.
pub const DEFAULT_H: f64 = 0.02;

/// The theorem or corollary a scenario exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    TwoPoint21,
    TwoPoint22,
    Major31,
    Major32,
    Pommerenke32cor,
    Nehari33,
    Schwarzian34,
    Cor35,
    Boundary36,
    Annulus37,
    Lindelof41,
    Radius42,
    PValent43,
    Invariant51,
    Multiplicity52,
    QuarterPlane53,
}

impl Kind {
    pub const ALL: [Kind; 16] = [
        Kind::TwoPoint21,
        Kind::TwoPoint22,
        Kind::Major31,
        Kind::Major32,
        Kind::Pommerenke32cor,
        Kind::Nehari33,
        Kind::Schwarzian34,
        Kind::Cor35,
        Kind::Boundary36,
        Kind::Annulus37,
        Kind::Lindelof41,
        Kind::Radius42,
        Kind::PValent43,
        Kind::Invariant51,
        Kind::Multiplicity52,
        Kind::QuarterPlane53,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::TwoPoint21 => "TwoPoint21",
            Kind::TwoPoint22 => "TwoPoint22",
            Kind::Major31 => "Major31",
            Kind::Major32 => "Major32",
            Kind::Pommerenke32cor => "Pommerenke32cor",
            Kind::Nehari33 => "Nehari33",
            Kind::Schwarzian34 => "Schwarzian34",
            Kind::Cor35 => "Cor35",
            Kind::Boundary36 => "Boundary36",
            Kind::Annulus37 => "Annulus37",
            Kind::Lindelof41 => "Lindelof41",
            Kind::Radius42 => "Radius42",
            Kind::PValent43 => "PValent43",
            Kind::Invariant51 => "Invariant51",
            Kind::Multiplicity52 => "Multiplicity52",
            Kind::QuarterPlane53 => "QuarterPlane53",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = ();
    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        Kind::ALL.into_iter().find(|k| k.name() == s).ok_or(())
    }
}

/// A point of the extended plane as written in scenario files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Finite([f64; 2]),
    Named(NamedPoint),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedPoint {
    Infinity,
}

impl From<PointSpec> for SpherePoint {
    fn from(p: PointSpec) -> Self {
        match p {
            PointSpec::Finite([x, y]) => SpherePoint::Finite(Complex64::new(x, y)),
            PointSpec::Named(NamedPoint::Infinity) => SpherePoint::Infinity,
        }
    }
}

impl From<SpherePoint> for PointSpec {
    fn from(p: SpherePoint) -> Self {
        match p {
            SpherePoint::Finite(z) => PointSpec::Finite([z.re, z.im]),
            SpherePoint::Infinity => PointSpec::Named(NamedPoint::Infinity),
        }
    }
}

/// Which bound of the capacity corollary to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum CapacityBound {
    /// `√|f'(0)| cap Γ ≥ cap γ` when γ is carried onto Γ.
    #[default]
    Lower,
    /// `√|f'(0)| cap Γ ≤ cap γ` when the free arcs go to free arcs.
    Upper,
}

/// Kind-specific parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Aux {
    /// Valence `p` of the map.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valence: Option<usize>,
    /// The value `w0` whose preimages enter the sums.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w0: Option<PointSpec>,
    /// Target points `w_l`, paired with `weights`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub targets: Vec<PointSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<CapacityBound>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    id: String,
    kind: Spanned<String>,
    #[serde(default)]
    description: Option<String>,
    map: String,
    #[serde(default)]
    points: Vec<PointSpec>,
    #[serde(default)]
    weights: Vec<f64>,
    #[serde(default)]
    h: Option<f64>,
    source: DomainRef,
    target: DomainRef,
    #[serde(default)]
    aux: Aux,
}

/// A parsed scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub id: String,
    pub kind: Kind,
    pub description: Option<String>,
    pub map: String,
    pub points: Vec<SpherePoint>,
    pub weights: Vec<f64>,
    pub h: Option<f64>,
    pub source: DomainRef,
    pub target: DomainRef,
    pub aux: Aux,
    /// Directory for resolving relative domain file paths.
    pub base: Option<PathBuf>,
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawScenario = toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map_or((0, 0), |s| line_column(text, s.start));
            Error::Parse {
                line,
                column,
                message: e.message().to_string(),
            }
        })?;
        let kind = raw.kind.get_ref().parse::<Kind>().map_err(|_| {
            let (line, column) = line_column(text, raw.kind.span().start);
            Error::UnknownKind {
                kind: raw.kind.get_ref().clone(),
                line,
                column,
            }
        })?;
        if let Some(h) = raw.h {
            if !(h > 0.0 && h.is_finite()) {
                return Err(Error::InvalidScenario(format!("mesh size h = {h} must be positive")));
            }
        }
        if raw.weights.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidScenario("weights must be finite reals".into()));
        }
        Ok(Scenario {
            id: raw.id,
            kind,
            description: raw.description,
            map: raw.map,
            points: raw.points.into_iter().map(SpherePoint::from).collect(),
            weights: raw.weights,
            h: raw.h,
            source: raw.source,
            target: raw.target,
            aux: raw.aux,
            base: None,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut s = Scenario::parse(&text)?;
        s.base = path.parent().map(Path::to_path_buf);
        Ok(s)
    }

    pub fn to_toml(&self) -> Result<String> {
        let raw = RawScenario {
            id: self.id.clone(),
            kind: Spanned::new(0..0, self.kind.name().to_string()),
            description: self.description.clone(),
            map: self.map.clone(),
            points: self.points.iter().map(|&p| p.into()).collect(),
            weights: self.weights.clone(),
            h: self.h,
            source: self.source.clone(),
            target: self.target.clone(),
            aux: self.aux.clone(),
        };
        toml::to_string(&raw).map_err(|e| Error::InvalidScenario(e.to_string()))
    }

    pub fn mesh_size(&self) -> f64 {
        self.h.unwrap_or(DEFAULT_H)
    }

    /// The `k`-th point, which must be finite.
    pub fn finite_point(&self, k: usize) -> Result<Complex64> {
        match self.points.get(k) {
            Some(SpherePoint::Finite(z)) => Ok(*z),
            Some(SpherePoint::Infinity) => Err(Error::InvalidScenario(format!(
                "{}: point {k} must be finite",
                self.kind
            ))),
            None => Err(Error::InvalidScenario(format!(
                "{} needs at least {} point(s)",
                self.kind,
                k + 1
            ))),
        }
    }

    /// The two weights `t1, t2`, defaulting to `(1, −1)`.
    pub fn weight_pair(&self) -> Result<(f64, f64)> {
        match self.weights.as_slice() {
            [] => Ok((1.0, -1.0)),
            [a, b] => Ok((*a, *b)),
            w => Err(Error::InvalidScenario(format!(
                "{} takes two weights, got {}",
                self.kind,
                w.len()
            ))),
        }
    }
}
