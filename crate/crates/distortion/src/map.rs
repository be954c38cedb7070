use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::poly::Rational;

/// How the solutions of `f(z) = w` are enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreimageSolver {
    /// Roots of `P − wQ` for a rational map `P/Q`.
    PolynomialRoots,
    /// No complete enumeration is available; preimage queries are refused.
    Unavailable,
}

/// A holomorphic map given by an expression, with its exact derivative.
#[derive(Debug, Clone)]
pub struct HolomorphicMap {
    pub source: String,
    pub expr: Expr,
    pub derivative: Expr,
    pub valence_hint: usize,
    rational: Option<Rational>,
}

/// A solution of `f(z) = w` with its multiplicity `n` and the leading
/// coefficient `c` of `f(ζ) − w = c (ζ − z)^n + …`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preimage {
    pub z: Complex64,
    pub multiplicity: usize,
    pub coefficient: Complex64,
}

fn show(z: Complex64) -> String {
    format!("{z}")
}

impl HolomorphicMap {
    pub fn parse(source: &str) -> Result<Self> {
        let expr = Expr::parse(source)?;
        Ok(Self::from_expr(source, expr))
    }

    pub fn from_expr(source: &str, expr: Expr) -> Self {
        let rational = Rational::from_expr(&expr);
        let valence_hint = rational.as_ref().map_or(1, |r| r.degree().max(1));
        HolomorphicMap {
            source: source.to_string(),
            derivative: expr.derivative(),
            expr,
            valence_hint,
            rational,
        }
    }

    pub fn with_valence(mut self, p: usize) -> Self {
        self.valence_hint = p.max(1);
        self
    }

    pub fn preimage_solver(&self) -> PreimageSolver {
        if self.rational.is_some() {
            PreimageSolver::PolynomialRoots
        } else {
            PreimageSolver::Unavailable
        }
    }

    pub fn is_rational(&self) -> bool {
        self.rational.is_some()
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let w = self.expr.eval(z);
        if w.is_finite() {
            Ok(w)
        } else {
            Err(Error::NotFinite(show(z)))
        }
    }

    pub fn deriv(&self, z: Complex64) -> Result<Complex64> {
        let d = self.derivative.eval(z);
        if d.is_finite() {
            Ok(d)
        } else {
            Err(Error::NotFinite(show(z)))
        }
    }

    /// Taylor coefficients `c_0..=c_order` at `z`.
    pub fn taylor(&self, z: Complex64, order: usize) -> Vec<Complex64> {
        self.expr.taylor(z, order)
    }

    /// Schwarzian `f'''/f' − (3/2)(f''/f')²` from the symbolic derivatives.
    pub fn schwarzian(&self, z: Complex64) -> Result<Complex64> {
        let d2 = self.derivative.derivative();
        let d3 = d2.derivative();
        let f1 = self.deriv(z)?;
        if f1.norm() == 0.0 {
            return Err(Error::ZeroDerivative(show(z)));
        }
        let (f2, f3) = (d2.eval(z), d3.eval(z));
        Ok(f3 / f1 - 1.5 * (f2 / f1).powi(2))
    }

    /// Schwarzian in local-coefficient form `6(c3/c1 − c2²/c1²)`.
    pub fn schwarzian_coefficients(&self, z: Complex64) -> Result<Complex64> {
        let c = self.taylor(z, 3);
        if c[1].norm() == 0.0 {
            return Err(Error::ZeroDerivative(show(z)));
        }
        Ok(6.0 * (c[3] / c[1] - (c[2] / c[1]).powi(2)))
    }

    /// Largest relative gap between the symbolic derivative and a central
    /// difference with step `step` over `points`.
    pub fn derivative_check(&self, points: &[Complex64], step: f64) -> f64 {
        points
            .iter()
            .map(|&z| {
                let fd = (self.expr.eval(z + step) - self.expr.eval(z - step)) / (2.0 * step);
                let d = self.derivative.eval(z);
                (fd - d).norm() / d.norm().max(1e-300)
            })
            .fold(0.0, f64::max)
    }

    /// `a` in `f(z) = a z + O(1)` as `z → ∞`, when `f` is rational with a simple pole at ∞.
    pub fn leading_at_infinity(&self) -> Option<Complex64> {
        let r = self.rational.as_ref()?;
        let (n, d) = (r.num.degree()?, r.den.degree()?);
        (n == d + 1).then(|| r.num.0[n] / r.den.0[d])
    }

    /// Finite poles of a rational map; `None` for other expressions.
    pub fn poles(&self) -> Option<Vec<Complex64>> {
        let r = self.rational.as_ref()?;
        Some(
            r.den
                .roots()
                .into_iter()
                .filter(|&p| {
                    let scale = r.num.0.iter().map(|c| c.norm()).fold(0.0, f64::max);
                    r.num.eval(p).norm() > 1e-9 * scale.max(1e-300)
                })
                .collect(),
        )
    }

    /// All solutions of `f(z) = w` inside `region`, with multiplicities.
    pub fn preimages(
        &self,
        w: Complex64,
        region: &dyn Fn(Complex64) -> bool,
    ) -> Result<Vec<Preimage>> {
        let r = self.rational.as_ref().ok_or_else(|| {
            Error::IncompleteEnumeration(format!("'{}' is not a rational map", self.source))
        })?;
        let candidates: Vec<Complex64> = r
            .level_roots(w)
            .into_iter()
            .filter(|z| z.is_finite())
            .collect();
        // group numerically coincident roots into multiple zeros
        let mut clusters: Vec<Vec<Complex64>> = Vec::new();
        for z in candidates {
            match clusters
                .iter_mut()
                .find(|c| (c[0] - z).norm() <= 1e-5 * (1.0 + z.norm()))
            {
                Some(c) => c.push(z),
                None => clusters.push(vec![z]),
            }
        }
        let mut out = Vec::new();
        for c in clusters {
            let center = c.iter().sum::<Complex64>() / c.len() as f64;
            if !region(center) {
                continue;
            }
            let value = self.expr.eval(center);
            if !value.is_finite() || (value - w).norm() > 1e-7 * (1.0 + w.norm()) {
                continue;
            }
            let n = c.len();
            let coefficient = self.taylor(center, n)[n];
            out.push(Preimage {
                z: center,
                multiplicity: n,
                coefficient,
            });
        }
        out.sort_by(|a, b| a.z.re.total_cmp(&b.z.re).then(a.z.im.total_cmp(&b.z.im)));
        let total: usize = out.iter().map(|p| p.multiplicity).sum();
        if total > self.valence_hint {
            return Err(Error::PreimageCount {
                point: show(w),
                expected: self.valence_hint,
                found: total,
            });
        }
        Ok(out)
    }
}

/// `e^{iθ}(z − a)/(1 − āz)`, an automorphism of the unit disk.
pub fn disk_automorphism(a: Complex64, theta: f64) -> HolomorphicMap {
    let u = Complex64::from_polar(1.0, theta);
    let one = Complex64::new(1.0, 0.0);
    let e = Expr::Mobius([u, -u * a, -a.conj(), one], Box::new(Expr::Z));
    HolomorphicMap::from_expr(&e.to_string(), e)
}

/// `e^{iθ} Π (z − a_k)/(1 − ā_k z)`, a finite Blaschke product.
pub fn blaschke_product(zeros: &[Complex64], theta: f64) -> HolomorphicMap {
    let e = Expr::Mul(
        Box::new(Expr::Const(Complex64::from_polar(1.0, theta))),
        Box::new(Expr::Blaschke(zeros.to_vec(), Box::new(Expr::Z))),
    );
    HolomorphicMap::from_expr(&e.to_string(), e)
}

/// `(z + a z²)/(1 + a)`, univalent in the unit disk for `0 ≤ a ≤ 1/2`.
pub fn quadratic(a: f64) -> HolomorphicMap {
    let e = Expr::parse(&format!("(z + {a:e}*z^2)/(1 + {a:e})")).expect("valid expression");
    HolomorphicMap::from_expr(&e.to_string(), e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn disk(z: Complex64) -> bool {
        z.norm() < 1.0
    }

    #[test]
    fn square_preimages() {
        let f = HolomorphicMap::parse("z^2").unwrap();
        let p = f.preimages(c(0.25, 0.0), &disk).unwrap();
        assert_eq!(p.len(), 2);
        assert!((p[0].z - c(-0.5, 0.0)).norm() < 1e-12 && p[0].multiplicity == 1);
        assert!((p[1].z - c(0.5, 0.0)).norm() < 1e-12 && p[1].multiplicity == 1);
        let q = f.preimages(c(0.0, 0.0), &disk).unwrap();
        assert_eq!(q.len(), 1);
        assert_eq!(q[0].multiplicity, 2);
        assert!(q[0].z.norm() < 1e-7);
        assert!((q[0].coefficient - 1.0).norm() < 1e-9);
    }

    #[test]
    fn schwarzian_two_ways() {
        for a in [0.1, 0.3, 0.45] {
            let f = HolomorphicMap::parse(&format!("(z + {a}*z^2)/(1 + {a})")).unwrap();
            let s1 = f.schwarzian(c(0.0, 0.0)).unwrap();
            let s2 = f.schwarzian_coefficients(c(0.0, 0.0)).unwrap();
            assert!((s1 - s2).norm() < 1e-10);
            assert!((s1 + 6.0 * a * a).norm() < 1e-12);
        }
        let m = HolomorphicMap::parse("mobius(z, 2, 0.3i, -0.4, 1)").unwrap();
        assert!(m.schwarzian(c(0.1, 0.2)).unwrap().norm() < 1e-10);
    }

    #[test]
    fn catalog_maps_preserve_the_disk() {
        let m = disk_automorphism(c(0.3, -0.2), 0.7);
        let b = blaschke_product(&[c(0.1, 0.2), c(-0.5, 0.0)], 1.0);
        for k in 0..16 {
            let z = Complex64::from_polar(1.0, 0.4 * k as f64);
            assert!((m.eval(z).unwrap().norm() - 1.0).abs() < 1e-13);
            assert!((b.eval(z).unwrap().norm() - 1.0).abs() < 1e-13);
        }
        assert_eq!(b.valence_hint, 2);
        assert!(m.poles().unwrap().iter().all(|p| p.norm() > 1.0));
        let q = quadratic(0.3);
        assert!((q.deriv(c(0.0, 0.0)).unwrap() - 1.0 / 1.3).norm() < 1e-14);
        let lin = HolomorphicMap::parse("2z + 1/(z + 3i)").unwrap();
        assert!((lin.leading_at_infinity().unwrap() - 2.0).norm() < 1e-14);
        assert!(HolomorphicMap::parse("z^2").unwrap().leading_at_infinity().is_none());
    }

    #[test]
    fn refuses_non_rational_enumeration() {
        let f = HolomorphicMap::parse("exp(z)").unwrap();
        assert_eq!(f.preimage_solver(), PreimageSolver::Unavailable);
        assert!(matches!(
            f.preimages(c(1.0, 0.0), &disk),
            Err(Error::IncompleteEnumeration(_))
        ));
    }

    #[test]
    fn derivative_matches_differences() {
        let f = HolomorphicMap::parse("exp(z)/(2 - z) + blaschke(z, 0.2, 0.5i)").unwrap();
        let pts = [c(0.1, 0.1), c(-0.3, 0.4), c(0.5, -0.2)];
        assert!(f.derivative_check(&pts, 1e-5) <= 1e-6);
    }
}
