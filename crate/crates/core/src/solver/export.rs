//! Debug dumps and CSV sampling of fields.
//!
//! Binary dump layout (all little-endian):
//!
//! | bytes | content |
//! |-------|---------|
//! | 8     | magic `PLABDUMP` |
//! | 4     | format version (u32, currently 1) |
//! | 8     | vertex count `nv` (u64) |
//! | 8     | triangle count `nt` (u64) |
//! | 8     | stiffness entry count `nnz` (u64) |
//! | 16·nv | vertex coordinates (f64 x, f64 y) |
//! | 24·nt | triangle vertex indices (3 × u64) |
//! | 24·nnz| stiffness entries (u64 row, u64 col, f64 value) |
//! | 8·nv  | load vector (f64) |
//! | 8·nv  | Dirichlet mask (f64: NaN for unknowns, else the value) |
//! | 8·nv  | nodal field values (f64) |

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use super::fem::Assembled;
use super::field::HarmonicField;
use crate::error::{Error, Result};

pub const DUMP_MAGIC: &[u8; 8] = b"PLABDUMP";
pub const DUMP_VERSION: u32 = 1;

/// Format a number with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_dump(path: &Path, field: &HarmonicField, sys: &Assembled) -> Result<()> {
    let mesh = &field.mesh;
    let mut buf: Vec<u8> = Vec::new();
    buf.extend_from_slice(DUMP_MAGIC);
    buf.extend_from_slice(&DUMP_VERSION.to_le_bytes());
    for n in [
        mesh.vertices.len(),
        mesh.triangles.len(),
        sys.stiffness.entries.len(),
    ] {
        buf.extend_from_slice(&(n as u64).to_le_bytes());
    }
    for v in &mesh.vertices {
        buf.extend_from_slice(&v.re.to_le_bytes());
        buf.extend_from_slice(&v.im.to_le_bytes());
    }
    for t in &mesh.triangles {
        for &i in t {
            buf.extend_from_slice(&(i as u64).to_le_bytes());
        }
    }
    for &(i, j, v) in &sys.stiffness.entries {
        buf.extend_from_slice(&(i as u64).to_le_bytes());
        buf.extend_from_slice(&(j as u64).to_le_bytes());
        buf.extend_from_slice(&v.to_le_bytes());
    }
    for &x in &sys.load {
        buf.extend_from_slice(&x.to_le_bytes());
    }
    for x in &sys.fixed {
        buf.extend_from_slice(&x.unwrap_or(f64::NAN).to_le_bytes());
    }
    for &x in &field.values {
        buf.extend_from_slice(&x.to_le_bytes());
    }
    std::fs::write(path, buf).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take(&mut self, n: usize) -> Result<&[u8]> {
        let s = self
            .bytes
            .get(self.pos..self.pos + n)
            .ok_or_else(|| Error::InvalidArgument("truncated dump".into()))?;
        self.pos += n;
        Ok(s)
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
}

/// Read back the vertices, triangles and field values of a dump.
pub fn read_dump(path: &Path) -> Result<(Vec<Complex64>, Vec<[usize; 3]>, Vec<f64>)> {
    let bytes = std::fs::read(path)?;
    let mut r = Reader {
        bytes: &bytes,
        pos: 0,
    };
    if r.take(8)? != DUMP_MAGIC {
        return Err(Error::InvalidArgument("not a field dump".into()));
    }
    let version = u32::from_le_bytes(r.take(4)?.try_into().expect("4 bytes"));
    if version != DUMP_VERSION {
        return Err(Error::InvalidArgument(format!("unsupported dump version {version}")));
    }
    let nv = r.u64()? as usize;
    let nt = r.u64()? as usize;
    let nnz = r.u64()? as usize;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let x = r.f64()?;
        let y = r.f64()?;
        vertices.push(Complex64::new(x, y));
    }
    let mut triangles = Vec::with_capacity(nt);
    for _ in 0..nt {
        triangles.push([r.u64()? as usize, r.u64()? as usize, r.u64()? as usize]);
    }
    r.take(24 * nnz)?;
    r.take(16 * nv)?;
    let values = (0..nv).map(|_| r.f64()).collect::<Result<Vec<_>>>()?;
    Ok((vertices, triangles, values))
}

/// Sample `f` on an `nx × ny` grid over the box `[lo, hi]` and write CSV rows
/// `x,y,value`; points where `f` returns `None` get an empty value.
pub fn export_grid_csv(
    path: &Path,
    lo: Complex64,
    hi: Complex64,
    nx: usize,
    ny: usize,
    f: impl Fn(Complex64) -> Option<f64>,
) -> Result<usize> {
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidArgument("grid must be positive".into()));
    }
    let file = std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut w = csv::Writer::from_writer(std::io::BufWriter::new(file));
    w.write_record(["x", "y", "value"])
        .map_err(|e| Error::Io(e.to_string()))?;
    let coord = |a: f64, b: f64, k: usize, n: usize| {
        if n == 1 {
            0.5 * (a + b)
        } else {
            a + (b - a) * k as f64 / (n - 1) as f64
        }
    };
    let mut rows = 0;
    for j in 0..ny {
        for i in 0..nx {
            let z = Complex64::new(coord(lo.re, hi.re, i, nx), coord(lo.im, hi.im, j, ny));
            let v = f(z).map(fmt_f64).unwrap_or_default();
            w.write_record([fmt_f64(z.re), fmt_f64(z.im), v])
                .map_err(|e| Error::Io(e.to_string()))?;
            rows += 1;
        }
    }
    let mut inner = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    inner.flush()?;
    Ok(rows)
}
