//! Parsing of command-line values and input files.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use potlab_core::geometry::schema::DomainFile;
use potlab_core::geometry::SpherePoint;
use potlab_core::Complex64;

use crate::error::{CliError, Result};

/// A point of the extended plane: `infinity`, `x`, `x,y` or `x+yi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointArg(pub SpherePoint);

impl FromStr for PointArg {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let t = s.trim();
        if matches!(t, "infinity" | "inf" | "∞") {
            return Ok(PointArg(SpherePoint::Infinity));
        }
        if let Some((x, y)) = t.split_once(',') {
            let x: f64 = x.trim().parse().map_err(|_| format!("bad point '{s}'"))?;
            let y: f64 = y.trim().parse().map_err(|_| format!("bad point '{s}'"))?;
            return Ok(PointArg(Complex64::new(x, y).into()));
        }
        let z = Complex64::from_str(t).map_err(|_| format!("bad point '{s}'"))?;
        if !z.is_finite() {
            return Err(format!("bad point '{s}'"));
        }
        Ok(PointArg(z.into()))
    }
}

/// Grid size written `NXxNY`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
}

impl FromStr for Grid {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("grid '{s}' is not of the form NXxNY"))?;
        let nx: usize = a.trim().parse().map_err(|_| format!("bad grid '{s}'"))?;
        let ny: usize = b.trim().parse().map_err(|_| format!("bad grid '{s}'"))?;
        if nx == 0 || ny == 0 {
            return Err("grid dimensions must be positive".into());
        }
        Ok(Grid { nx, ny })
    }
}

/// Rectangle `x0,y0,x1,y1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub lo: Complex64,
    pub hi: Complex64,
}

impl FromStr for BBox {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let v: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| format!("bad box '{s}'"))?;
        match v.as_slice() {
            &[x0, y0, x1, y1] if x0 < x1 && y0 < y1 => Ok(BBox {
                lo: Complex64::new(x0, y0),
                hi: Complex64::new(x1, y1),
            }),
            _ => Err(format!("box '{s}' must be x0,y0,x1,y1 with x0 < x1 and y0 < y1")),
        }
    }
}

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn load_domain(path: &Path) -> Result<DomainFile> {
    DomainFile::parse(&read(path)?).map_err(|e| match e {
        potlab_core::Error::Parse {
            line,
            column,
            message,
        } => CliError::Input {
            path: path.display().to_string(),
            message: format!("line {line}, column {column}: {message}"),
        },
        other => other.into(),
    })
}

/// Resolve `rel` against the directory of `base_file`.
pub fn relative_to(base_file: &Path, rel: &Path) -> PathBuf {
    if rel.is_absolute() {
        rel.to_path_buf()
    } else {
        base_file.parent().unwrap_or(Path::new(".")).join(rel)
    }
}
