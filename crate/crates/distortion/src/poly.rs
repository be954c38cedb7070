//! Complex polynomials, rational functions and simultaneous root finding.

use num_complex::Complex64;

use crate::expr::Expr;

/// Polynomial with coefficients in ascending order of degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<Complex64>);

impl Poly {
    pub fn constant(c: Complex64) -> Self {
        Poly(vec![c])
    }

    pub fn z() -> Self {
        Poly(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])
    }

    /// Degree after dropping negligible leading coefficients.
    pub fn degree(&self) -> Option<usize> {
        let scale = self.0.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return None;
        }
        self.0.iter().rposition(|c| c.norm() > 1e-14 * scale)
    }

    pub fn trimmed(&self) -> Poly {
        match self.degree() {
            Some(d) => Poly(self.0[..=d].to_vec()),
            None => Poly(vec![Complex64::new(0.0, 0.0)]),
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.0.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// Value and first derivative (Horner).
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in self.0.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly((0..n)
            .map(|k| {
                self.0.get(k).copied().unwrap_or_default() + o.0.get(k).copied().unwrap_or_default()
            })
            .collect())
    }

    pub fn scale(&self, s: Complex64) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = vec![Complex64::new(0.0, 0.0); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    pub fn powi(&self, n: u32) -> Poly {
        (0..n).fold(Poly::constant(Complex64::new(1.0, 0.0)), |acc, _| acc.mul(self))
    }

    /// All roots (with repetition) by the Aberth–Ehrlich iteration.
    pub fn roots(&self) -> Vec<Complex64> {
        let p = self.trimmed();
        let n = match p.degree() {
            Some(d) if d > 0 => d,
            _ => return Vec::new(),
        };
        let lead = p.0[n];
        let monic = p.scale(1.0 / lead);
        // Cauchy bound for the initial circle
        let bound = 1.0 + monic.0[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
        let radius = bound.min(
            monic.0[..n]
                .iter()
                .map(|c| c.norm())
                .sum::<f64>()
                .max(1e-3),
        );
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
            .collect();
        for _ in 0..1000 {
            let mut moved = 0.0f64;
            for i in 0..n {
                let (v, dv) = monic.eval_with_derivative(z[i]);
                if v == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let ratio = v / dv;
                let sum: Complex64 = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| 1.0 / (z[i] - z[j]))
                    .sum();
                let step = ratio / (1.0 - ratio * sum);
                if step.is_finite() {
                    z[i] -= step;
                    moved = moved.max(step.norm() / (1.0 + z[i].norm()));
                }
            }
            if moved < 1e-15 {
                break;
            }
        }
        z
    }
}

/// Quotient of two polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct Rational {
    pub num: Poly,
    pub den: Poly,
}

impl Rational {
    fn constant(c: Complex64) -> Self {
        Rational {
            num: Poly::constant(c),
            den: Poly::constant(Complex64::new(1.0, 0.0)),
        }
    }

    fn add(&self, o: &Rational) -> Rational {
        Rational {
            num: self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
    }

    fn mul(&self, o: &Rational) -> Rational {
        Rational {
            num: self.num.mul(&o.num),
            den: self.den.mul(&o.den),
        }
    }

    fn recip(&self) -> Rational {
        Rational {
            num: self.den.clone(),
            den: self.num.clone(),
        }
    }

    fn powi(&self, n: i32) -> Rational {
        let r = Rational {
            num: self.num.powi(n.unsigned_abs()),
            den: self.den.powi(n.unsigned_abs()),
        };
        if n < 0 {
            r.recip()
        } else {
            r
        }
    }

    fn mobius(&self, [a, b, c, d]: [Complex64; 4]) -> Rational {
        Rational {
            num: self.num.scale(a).add(&self.den.scale(b)),
            den: self.num.scale(c).add(&self.den.scale(d)),
        }
    }

    /// Exact conversion of a rational expression; `None` for `exp`, `log`, `sqrt`.
    pub fn from_expr(e: &Expr) -> Option<Rational> {
        let one = Complex64::new(1.0, 0.0);
        Some(match e {
            Expr::Z => Rational {
                num: Poly::z(),
                den: Poly::constant(one),
            },
            Expr::Const(c) => Rational::constant(*c),
            Expr::Add(a, b) => Rational::from_expr(a)?.add(&Rational::from_expr(b)?),
            Expr::Sub(a, b) => Rational::from_expr(a)?
                .add(&Rational::from_expr(b)?.mul(&Rational::constant(-one))),
            Expr::Mul(a, b) => Rational::from_expr(a)?.mul(&Rational::from_expr(b)?),
            Expr::Div(a, b) => Rational::from_expr(a)?.mul(&Rational::from_expr(b)?.recip()),
            Expr::Neg(a) => Rational::from_expr(a)?.mul(&Rational::constant(-one)),
            Expr::Pow(a, n) => Rational::from_expr(a)?.powi(*n),
            Expr::Mobius(c, u) => Rational::from_expr(u)?.mobius(*c),
            Expr::Blaschke(zeros, u) => {
                let u = Rational::from_expr(u)?;
                zeros.iter().fold(Rational::constant(one), |acc, a| {
                    acc.mul(&u.mobius([one, -a, -a.conj(), one]))
                })
            }
            Expr::Exp(_) | Expr::Log(_) | Expr::Sqrt(_) => return None,
        })
    }

    /// Roots of `num − w·den`, i.e. the candidate solutions of `f(z) = w`.
    pub fn level_roots(&self, w: Complex64) -> Vec<Complex64> {
        self.num.sub(&self.den.scale(w)).roots()
    }

    /// Number of solutions of `f(z) = w` on the Riemann sphere for generic `w`.
    pub fn degree(&self) -> usize {
        self.num
            .degree()
            .unwrap_or(0)
            .max(self.den.degree().unwrap_or(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn roots_of_known_polynomial() {
        // (z − 1)(z + 2i)(z − 0.5)
        let p = Poly(vec![c(1.0, 0.0), c(-1.0, 0.0)])
            .mul(&Poly(vec![c(0.0, 2.0), c(1.0, 0.0)]))
            .mul(&Poly(vec![c(-0.5, 0.0), c(1.0, 0.0)]));
        let mut r = p.roots();
        r.sort_by(|a, b| a.re.total_cmp(&b.re));
        let want = [c(0.0, -2.0), c(0.5, 0.0), c(1.0, 0.0)];
        for (a, b) in r.iter().zip(want) {
            assert!((a - b).norm() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn rational_conversion_matches_evaluation() {
        let e = Expr::parse("blaschke(z^2, 0.3, -0.2i) / (2 + z) - mobius(z, 1, 0.5, 0.5, 1)").unwrap();
        let r = Rational::from_expr(&e).unwrap();
        let z = c(0.3, -0.4);
        assert!((r.num.eval(z) / r.den.eval(z) - e.eval(z)).norm() < 1e-13);
        assert!(Rational::from_expr(&Expr::parse("exp(z)").unwrap()).is_none());
    }
}
