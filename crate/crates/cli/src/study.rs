//! Condenser study files.
//!
//! ```toml
//! id = "two_plate"
//! domain = "../domains/disk.dom"
//! gamma = "full"
//! robin = "closed-form"
//! r = [1e-2, 1e-3, 1e-4]
//!
//! [[plates]]
//! center = [0.5, 0.0]
//! potential = 1.0
//!
//! [[plates]]
//! center = [-0.5, 0.0]
//! potential = -1.0
//! ```
//!
//! `domain` is resolved relative to the study file. Plates are disks
//! `E(center, mu r^nu)`; `mu` and `nu` default to 1.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use potlab_core::condenser::{Condenser, PlateSpec, RobinData};
use potlab_core::geometry::schema::{ArcSpec, DomainFile, LoopRole};
use potlab_core::geometry::{MarkedDomain, Region};
use potlab_core::oracle::{disk_green, disk_radius};
use potlab_core::Complex64;
use serde::Deserialize;

use crate::error::{CliError, Result};
use crate::input::{load_domain, read, relative_to};

/// Source of the Robin radii and Robin matrix entering the expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum RobinSource {
    /// Mesh solver on the study domain.
    #[default]
    Solver,
    /// Closed forms; only the unit disk with γ the whole circle.
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlateEntry {
    pub center: [f64; 2],
    pub potential: f64,
    #[serde(default = "one")]
    pub mu: f64,
    #[serde(default = "one")]
    pub nu: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStudy {
    id: String,
    domain: PathBuf,
    #[serde(default)]
    gamma: Option<String>,
    #[serde(default)]
    robin: RobinSource,
    #[serde(default)]
    r: Vec<f64>,
    plates: Vec<PlateEntry>,
}

#[derive(Debug, Clone)]
pub struct Study {
    pub id: String,
    pub domain_file: DomainFile,
    pub gamma: String,
    pub robin: RobinSource,
    pub r: Vec<f64>,
    pub plates: Vec<PlateSpec>,
    pub marked: MarkedDomain,
}

fn is_unit_circle_domain(d: &DomainFile) -> bool {
    match (d.model.as_ref(), d.loops.as_slice()) {
        (None, [l]) if l.role == LoopRole::Outer && !d.contains_infinity => matches!(
            l.arcs.as_slice(),
            [ArcSpec::Circle { center, radius, sweep, .. }]
                if *center == [0.0, 0.0] && *radius == 1.0 && (sweep.abs() - TAU).abs() < 1e-12
        ),
        _ => false,
    }
}

impl Study {
    pub fn load(path: &Path) -> Result<Self> {
        let text = read(path)?;
        let raw: RawStudy = toml::from_str(&text).map_err(|e| {
            let err = potlab_core::geometry::schema::parse_error(&text, e.span(), e.message());
            CliError::Input {
                path: path.display().to_string(),
                message: err.to_string(),
            }
        })?;
        let domain_file = load_domain(&relative_to(path, &raw.domain))?;
        let gamma = raw.gamma.unwrap_or_else(|| "full".into());
        let marked = match domain_file.region(Some(&gamma))? {
            Region::Marked(md) => md,
            Region::Mapped(_) => {
                return Err(CliError::Usage(
                    "condenser studies need a bounded domain given by loops".into(),
                ))
            }
        };
        if raw.robin == RobinSource::ClosedForm
            && !(is_unit_circle_domain(&domain_file) && marked.is_whole_boundary())
        {
            return Err(CliError::Usage(
                "robin = \"closed-form\" is available only for the unit disk with gamma = full".into(),
            ));
        }
        if raw.plates.is_empty() {
            return Err(CliError::Usage("a study needs at least one plate".into()));
        }
        let plates = raw
            .plates
            .iter()
            .map(|p| {
                PlateSpec::disk(Complex64::new(p.center[0], p.center[1]), p.potential)
                    .with_rule(p.mu, p.nu)
            })
            .collect();
        Ok(Study {
            id: raw.id,
            domain_file,
            gamma,
            robin: raw.robin,
            r: raw.r,
            plates,
            marked,
        })
    }

    pub fn condenser(&self, r: f64) -> Condenser {
        Condenser::new(self.marked.clone(), self.plates.clone(), r)
    }

    fn centers(&self) -> Result<Vec<Complex64>> {
        self.plates
            .iter()
            .map(|p| {
                p.center
                    .finite()
                    .ok_or_else(|| CliError::Usage("plate centers must be finite".into()))
            })
            .collect()
    }

    pub fn robin_data(&self, h: f64) -> Result<RobinData> {
        let centers = self.centers()?;
        match self.robin {
            RobinSource::Solver => Ok(RobinData::solve(&self.marked, &centers, h)?),
            RobinSource::ClosedForm => {
                let n = centers.len();
                let mut matrix = vec![vec![0.0; n]; n];
                for k in 0..n {
                    for l in 0..n {
                        if k != l {
                            matrix[k][l] = disk_green(centers[k], centers[l])?;
                        }
                    }
                }
                Ok(RobinData {
                    radii: centers.iter().map(|&z| disk_radius(z)).collect(),
                    matrix,
                })
            }
        }
    }
}
