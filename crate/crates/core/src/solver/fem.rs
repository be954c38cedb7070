use std::sync::Arc;

use num_complex::Complex64;

use super::field::{basis_gradients, HarmonicField};
use super::linsys::{solve_spd, CooMatrix};
use crate::error::{Error, Result};
use crate::geometry::{EdgeTag, Mesh};

type DirichletFn<'a> = dyn Fn(Complex64, EdgeTag) -> f64 + Sync + 'a;
type FluxFn<'a> = dyn Fn(Complex64, Complex64) -> f64 + Sync + 'a;

/// Boundary data of the mixed problem.
///
/// `dirichlet(z, tag)` gives the value at a γ or plate node. `neumann(z, n)`
/// gives the outward flux `∂u/∂n` at a point of a free edge with outward unit
/// normal `n`; `None` means zero flux.
pub struct BoundaryData<'a> {
    pub dirichlet: Box<DirichletFn<'a>>,
    pub neumann: Option<Box<FluxFn<'a>>>,
}

impl<'a> BoundaryData<'a> {
    pub fn constant(value: f64) -> Self {
        BoundaryData {
            dirichlet: Box::new(move |_, _| value),
            neumann: None,
        }
    }

    pub fn from_fn(f: impl Fn(Complex64, EdgeTag) -> f64 + Sync + 'a) -> Self {
        BoundaryData {
            dirichlet: Box::new(f),
            neumann: None,
        }
    }

    pub fn with_flux(mut self, g: impl Fn(Complex64, Complex64) -> f64 + Sync + 'a) -> Self {
        self.neumann = Some(Box::new(g));
        self
    }
}

/// Assembled system before elimination of Dirichlet nodes.
#[derive(Debug, Clone)]
pub struct Assembled {
    pub stiffness: CooMatrix,
    pub load: Vec<f64>,
    /// Dirichlet value per node (`None` for unknowns).
    pub fixed: Vec<Option<f64>>,
}

const GAUSS3: [(f64, f64); 3] = [
    (0.112_701_665_379_258_31, 5.0 / 18.0),
    (0.5, 8.0 / 18.0),
    (0.887_298_334_620_741_7, 5.0 / 18.0),
];

/// Assemble the P1 stiffness matrix, Neumann load and Dirichlet values.
pub fn assemble(mesh: &Mesh, data: &BoundaryData) -> Result<Assembled> {
    let n = mesh.vertices.len();
    let mut tag: Vec<Option<EdgeTag>> = vec![None; n];
    for e in &mesh.boundary_edges {
        if e.tag == EdgeTag::Free {
            continue;
        }
        for &v in &e.v {
            // γ wins over plates; the two never share nodes in valid input
            if tag[v] != Some(EdgeTag::Gamma) {
                tag[v] = Some(e.tag);
            }
        }
    }
    if tag.iter().all(|t| t.is_none()) {
        return Err(Error::SingularSystem);
    }
    let fixed: Vec<Option<f64>> = tag
        .iter()
        .enumerate()
        .map(|(i, t)| t.map(|t| (data.dirichlet)(mesh.vertices[i], t)))
        .collect();

    let mut raw = Vec::with_capacity(9 * mesh.triangles.len());
    for tri in &mesh.triangles {
        let p = tri.map(|i| mesh.vertices[i]);
        let (g, area) = basis_gradients(p);
        for a in 0..3 {
            for b in 0..3 {
                let k = area * (g[a].re * g[b].re + g[a].im * g[b].im);
                raw.push((tri[a], tri[b], k));
            }
        }
    }
    let stiffness = CooMatrix::from_unmerged(n, raw);

    let mut load = vec![0.0; n];
    if let Some(flux) = &data.neumann {
        for e in mesh.boundary_edges.iter().filter(|e| e.tag == EdgeTag::Free) {
            let (a, b) = (mesh.vertices[e.v[0]], mesh.vertices[e.v[1]]);
            let d = b - a;
            let len = d.norm();
            let normal = Complex64::new(d.im, -d.re) / len;
            for &(s, w) in &GAUSS3 {
                let f = flux(a + d * s, normal) * w * len;
                load[e.v[0]] += f * (1.0 - s);
                load[e.v[1]] += f * s;
            }
        }
    }
    Ok(Assembled {
        stiffness,
        load,
        fixed,
    })
}

/// Solve an assembled system by eliminating the Dirichlet nodes.
pub fn solve_assembled(sys: &Assembled) -> Result<Vec<f64>> {
    let n = sys.fixed.len();
    let mut index = vec![usize::MAX; n];
    let mut m = 0;
    for i in 0..n {
        if sys.fixed[i].is_none() {
            index[i] = m;
            m += 1;
        }
    }
    let mut rhs = vec![0.0; m];
    for i in 0..n {
        if index[i] != usize::MAX {
            rhs[index[i]] = sys.load[i];
        }
    }
    let mut entries = Vec::with_capacity(sys.stiffness.entries.len());
    for &(i, j, v) in &sys.stiffness.entries {
        match (index[i] != usize::MAX, sys.fixed[j]) {
            (true, None) => entries.push((index[i], index[j], v)),
            (true, Some(uj)) => rhs[index[i]] -= v * uj,
            _ => {}
        }
    }
    let reduced = CooMatrix { n: m, entries };
    let xf = solve_spd(&reduced, &rhs)?;
    Ok((0..n)
        .map(|i| sys.fixed[i].unwrap_or_else(|| xf[index[i]]))
        .collect())
}

/// Solve the mixed Dirichlet–Neumann Laplace problem on `mesh`.
pub fn solve_mixed(mesh: Arc<Mesh>, data: &BoundaryData) -> Result<HarmonicField> {
    let sys = assemble(&mesh, data)?;
    let values = solve_assembled(&sys)?;
    Ok(HarmonicField::new(mesh, values))
}
