use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Side};

use crate::error::{Error, Result};

/// Relative residual accepted from the direct factorization.
pub const DIRECT_TOL: f64 = 1e-10;
/// Relative residual target of the iterative fallback.
pub const ITERATIVE_TOL: f64 = 1e-12;

/// Symmetric sparse matrix in merged coordinate form (both triangles stored).
#[derive(Debug, Clone, Default)]
pub struct CooMatrix {
    pub n: usize,
    pub entries: Vec<(usize, usize, f64)>,
}

impl CooMatrix {
    /// Sort and sum duplicate entries.
    pub fn from_unmerged(n: usize, mut raw: Vec<(usize, usize, f64)>) -> Self {
        raw.sort_unstable_by_key(|&(i, j, _)| (j, i));
        let mut entries: Vec<(usize, usize, f64)> = Vec::with_capacity(raw.len() / 2);
        for (i, j, v) in raw {
            match entries.last_mut() {
                Some(e) if e.0 == i && e.1 == j => e.2 += v,
                _ => entries.push((i, j, v)),
            }
        }
        CooMatrix { n, entries }
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for &(i, j, v) in &self.entries {
            y[i] += v * x[j];
        }
        y
    }

    fn diagonal(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for &(i, j, v) in &self.entries {
            if i == j {
                d[i] += v;
            }
        }
        d
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn relative_residual(a: &CooMatrix, x: &[f64], b: &[f64]) -> f64 {
    let ax = a.mul(x);
    let r: Vec<f64> = ax.iter().zip(b).map(|(p, q)| p - q).collect();
    let nb = norm(b);
    if nb == 0.0 {
        norm(&r)
    } else {
        norm(&r) / nb
    }
}

/// Solve `A x = b` for symmetric positive-definite `A`: sparse Cholesky first,
/// Jacobi-preconditioned conjugate gradients if the direct residual is too large.
pub fn solve_spd(a: &CooMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.n;
    if n == 0 {
        return Ok(Vec::new());
    }
    if norm(b) == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let mut x0 = None;
    if let Some(x) = direct(a, b) {
        let res = relative_residual(a, &x, b);
        if res <= DIRECT_TOL {
            return Ok(x);
        }
        x0 = Some(x);
    }
    pcg(a, b, x0)
}

fn direct(a: &CooMatrix, b: &[f64]) -> Option<Vec<f64>> {
    let trips: Vec<Triplet<usize, usize, f64>> = a
        .entries
        .iter()
        .map(|&(i, j, v)| Triplet::new(i, j, v))
        .collect();
    let m = SparseColMat::<usize, f64>::try_new_from_triplets(a.n, a.n, &trips).ok()?;
    // a thread-count dependent factorization would make results depend on POTLAB_WORKERS
    faer::set_global_parallelism(faer::Par::Seq);
    let llt = m.sp_cholesky(Side::Lower).ok()?;
    let rhs = Mat::<f64>::from_fn(a.n, 1, |i, _| b[i]);
    let mut x: Vec<f64> = {
        let s = llt.solve(&rhs);
        (0..a.n).map(|i| s[(i, 0)]).collect()
    };
    // one step of iterative refinement
    let ax = a.mul(&x);
    let r = Mat::<f64>::from_fn(a.n, 1, |i, _| b[i] - ax[i]);
    let dx = llt.solve(&r);
    for (i, xi) in x.iter_mut().enumerate() {
        *xi += dx[(i, 0)];
    }
    if x.iter().all(|v| v.is_finite()) {
        Some(x)
    } else {
        None
    }
}

fn pcg(a: &CooMatrix, b: &[f64], x0: Option<Vec<f64>>) -> Result<Vec<f64>> {
    let n = a.n;
    let diag = a.diagonal();
    let inv: Vec<f64> = diag
        .iter()
        .map(|&d| if d > 0.0 { 1.0 / d } else { 1.0 })
        .collect();
    let mut x = x0
        .filter(|x| x.iter().all(|v| v.is_finite()))
        .unwrap_or_else(|| vec![0.0; n]);
    let ax = a.mul(&x);
    let mut r: Vec<f64> = b.iter().zip(&ax).map(|(p, q)| p - q).collect();
    let nb = norm(b);
    let mut z: Vec<f64> = r.iter().zip(&inv).map(|(p, q)| p * q).collect();
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(p, q)| p * q).sum();
    let max_iter = 20 * n + 100;
    for _ in 0..max_iter {
        if norm(&r) <= ITERATIVE_TOL * nb {
            return Ok(x);
        }
        let ap = a.mul(&p);
        let pap: f64 = p.iter().zip(&ap).map(|(p, q)| p * q).sum();
        if !(pap > 0.0) {
            break;
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for i in 0..n {
            z[i] = r[i] * inv[i];
        }
        let rz_new: f64 = r.iter().zip(&z).map(|(p, q)| p * q).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let res = relative_residual(a, &x, b);
    if res <= ITERATIVE_TOL {
        Ok(x)
    } else {
        Err(Error::NonConvergent { residual: res })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize) -> CooMatrix {
        let mut raw = Vec::new();
        for i in 0..n {
            raw.push((i, i, 2.0));
            if i > 0 {
                raw.push((i, i - 1, -1.0));
                raw.push((i - 1, i, -1.0));
            }
        }
        CooMatrix::from_unmerged(n, raw)
    }

    #[test]
    fn direct_solve_residual() {
        let a = laplacian_1d(50);
        let b: Vec<f64> = (0..50).map(|i| (i as f64).sin()).collect();
        let x = solve_spd(&a, &b).unwrap();
        assert!(relative_residual(&a, &x, &b) <= DIRECT_TOL);
    }

    #[test]
    fn pcg_matches_direct() {
        let a = laplacian_1d(40);
        let b: Vec<f64> = (0..40).map(|i| 1.0 + i as f64).collect();
        let x = pcg(&a, &b, None).unwrap();
        let y = direct(&a, &b).unwrap();
        for (p, q) in x.iter().zip(&y) {
            assert!((p - q).abs() < 1e-8 * q.abs().max(1.0));
        }
    }

    #[test]
    fn duplicates_are_summed() {
        let a = CooMatrix::from_unmerged(1, vec![(0, 0, 1.0), (0, 0, 2.0)]);
        assert_eq!(a.entries, vec![(0, 0, 3.0)]);
    }
}
