//! Expression trees for holomorphic maps.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('+' | '-') unary | power
//! power := atom ('^' int)?
//! atom  := number | number ident | 'z' | 'i' | 'pi' | 'e'
//!        | func '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! Functions: `exp`, `log`, `sqrt`, `mobius(u, a, b, c, d)` for
//! `(a u + b)/(c u + d)` and `blaschke(u, a1, ..., an)` for
//! `∏ (u − a_k)/(1 − ā_k u)`. Arguments after the first must be constants.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Z,
    Const(Complex64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i32),
    Exp(Box<Expr>),
    Log(Box<Expr>),
    Sqrt(Box<Expr>),
    Mobius([Complex64; 4], Box<Expr>),
    Blaschke(Vec<Complex64>, Box<Expr>),
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn is_const(e: &Expr, v: f64) -> bool {
    matches!(e, Expr::Const(c) if *c == Complex64::new(v, 0.0))
}

// Smart constructors with light constant folding.
fn add(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x + y),
        _ if is_const(&a, 0.0) => b,
        _ if is_const(&b, 0.0) => a,
        _ => Expr::Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x - y),
        _ if is_const(&b, 0.0) => a,
        _ if is_const(&a, 0.0) => neg(b),
        _ => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x * y),
        _ if is_const(&a, 0.0) || is_const(&b, 0.0) => Expr::Const(Complex64::new(0.0, 0.0)),
        _ if is_const(&a, 1.0) => b,
        _ if is_const(&b, 1.0) => a,
        _ => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(x), Expr::Const(y)) if *y != Complex64::new(0.0, 0.0) => Expr::Const(x / y),
        _ if is_const(&a, 0.0) => a,
        _ if is_const(&b, 1.0) => a,
        _ => Expr::Div(Box::new(a), Box::new(b)),
    }
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(x) => Expr::Const(-x),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

fn pow(a: Expr, n: i32) -> Expr {
    match (a, n) {
        (_, 0) => Expr::Const(one()),
        (a, 1) => a,
        (Expr::Const(x), n) => Expr::Const(x.powi(n)),
        (a, n) => Expr::Pow(Box::new(a), n),
    }
}

fn mobius_factor(a: Complex64, u: Expr) -> Expr {
    Expr::Mobius([one(), -a, -a.conj(), one()], Box::new(u))
}

impl Expr {
    pub fn parse(src: &str) -> Result<Self> {
        let mut p = Parser {
            chars: src.chars().collect(),
            pos: 0,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    /// Value at `z`; non-finite where the expression is singular.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            Expr::Z => z,
            Expr::Const(c) => *c,
            Expr::Add(a, b) => a.eval(z) + b.eval(z),
            Expr::Sub(a, b) => a.eval(z) - b.eval(z),
            Expr::Mul(a, b) => a.eval(z) * b.eval(z),
            Expr::Div(a, b) => a.eval(z) / b.eval(z),
            Expr::Neg(a) => -a.eval(z),
            Expr::Pow(a, n) => a.eval(z).powi(*n),
            Expr::Exp(a) => a.eval(z).exp(),
            Expr::Log(a) => a.eval(z).ln(),
            Expr::Sqrt(a) => a.eval(z).sqrt(),
            Expr::Mobius([a, b, c, d], u) => {
                let u = u.eval(z);
                (a * u + b) / (c * u + d)
            }
            Expr::Blaschke(zeros, u) => {
                let u = u.eval(z);
                zeros.iter().map(|a| (u - a) / (1.0 - a.conj() * u)).product()
            }
        }
    }

    /// Symbolic derivative with respect to `z`.
    pub fn derivative(&self) -> Expr {
        match self {
            Expr::Z => Expr::Const(one()),
            Expr::Const(_) => Expr::Const(Complex64::new(0.0, 0.0)),
            Expr::Add(a, b) => add(a.derivative(), b.derivative()),
            Expr::Sub(a, b) => sub(a.derivative(), b.derivative()),
            Expr::Mul(a, b) => add(
                mul(a.derivative(), (**b).clone()),
                mul((**a).clone(), b.derivative()),
            ),
            Expr::Div(a, b) => div(
                sub(
                    mul(a.derivative(), (**b).clone()),
                    mul((**a).clone(), b.derivative()),
                ),
                pow((**b).clone(), 2),
            ),
            Expr::Neg(a) => neg(a.derivative()),
            Expr::Pow(a, n) => mul(
                mul(
                    Expr::Const(Complex64::new(*n as f64, 0.0)),
                    pow((**a).clone(), n - 1),
                ),
                a.derivative(),
            ),
            Expr::Exp(a) => mul(self.clone(), a.derivative()),
            Expr::Log(a) => div(a.derivative(), (**a).clone()),
            Expr::Sqrt(a) => div(
                a.derivative(),
                mul(Expr::Const(Complex64::new(2.0, 0.0)), self.clone()),
            ),
            Expr::Mobius([a, b, c, d], u) => {
                let den = add(mul(Expr::Const(*c), (**u).clone()), Expr::Const(*d));
                mul(
                    div(Expr::Const(a * d - b * c), pow(den, 2)),
                    u.derivative(),
                )
            }
            Expr::Blaschke(zeros, u) => zeros
                .iter()
                .map(|a| mobius_factor(*a, (**u).clone()))
                .reduce(mul)
                .unwrap_or(Expr::Const(one()))
                .derivative(),
        }
    }

    /// Taylor coefficients `c_0..=c_order` of the expression at `z`.
    pub fn taylor(&self, z: Complex64, order: usize) -> Vec<Complex64> {
        self.jet(z, order + 1).0
    }

    fn jet(&self, z: Complex64, n: usize) -> Jet {
        match self {
            Expr::Z => {
                let mut c = vec![Complex64::new(0.0, 0.0); n];
                c[0] = z;
                if n > 1 {
                    c[1] = one();
                }
                Jet(c)
            }
            Expr::Const(v) => Jet::constant(*v, n),
            Expr::Add(a, b) => a.jet(z, n).add(&b.jet(z, n)),
            Expr::Sub(a, b) => a.jet(z, n).sub(&b.jet(z, n)),
            Expr::Mul(a, b) => a.jet(z, n).mul(&b.jet(z, n)),
            Expr::Div(a, b) => a.jet(z, n).div(&b.jet(z, n)),
            Expr::Neg(a) => a.jet(z, n).scale(-one()),
            Expr::Pow(a, k) => a.jet(z, n).powi(*k),
            Expr::Exp(a) => a.jet(z, n).exp(),
            Expr::Log(a) => a.jet(z, n).ln(),
            Expr::Sqrt(a) => a.jet(z, n).sqrt(),
            Expr::Mobius([a, b, c, d], u) => {
                let u = u.jet(z, n);
                u.scale(*a)
                    .add(&Jet::constant(*b, n))
                    .div(&u.scale(*c).add(&Jet::constant(*d, n)))
            }
            Expr::Blaschke(zeros, u) => {
                let u = u.jet(z, n);
                zeros.iter().fold(Jet::constant(one(), n), |acc, a| {
                    let f = u
                        .sub(&Jet::constant(*a, n))
                        .div(&Jet::constant(one(), n).sub(&u.scale(a.conj())));
                    acc.mul(&f)
                })
            }
        }
    }

    /// Whether the expression is a rational function of `z`.
    pub fn is_rational(&self) -> bool {
        match self {
            Expr::Z | Expr::Const(_) => true,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.is_rational() && b.is_rational()
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Mobius(_, a) | Expr::Blaschke(_, a) => {
                a.is_rational()
            }
            Expr::Exp(_) | Expr::Log(_) | Expr::Sqrt(_) => false,
        }
    }

    fn constant(&self) -> Option<Complex64> {
        match self {
            Expr::Const(c) => Some(*c),
            Expr::Z => None,
            e => {
                let v = e.eval(Complex64::new(0.3, 0.7));
                let w = e.eval(Complex64::new(-0.9, 0.2));
                (v == w && v.is_finite()).then_some(v)
            }
        }
    }
}

/// Truncated Taylor series `Σ c_k t^k`.
#[derive(Debug, Clone)]
struct Jet(Vec<Complex64>);

impl Jet {
    fn constant(v: Complex64, n: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); n];
        c[0] = v;
        Jet(c)
    }

    fn add(&self, o: &Jet) -> Jet {
        Jet(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    fn sub(&self, o: &Jet) -> Jet {
        Jet(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    fn scale(&self, s: Complex64) -> Jet {
        Jet(self.0.iter().map(|a| a * s).collect())
    }

    fn mul(&self, o: &Jet) -> Jet {
        let n = self.0.len();
        Jet((0..n)
            .map(|k| (0..=k).map(|i| self.0[i] * o.0[k - i]).sum())
            .collect())
    }

    fn div(&self, o: &Jet) -> Jet {
        let n = self.0.len();
        let mut q = vec![Complex64::new(0.0, 0.0); n];
        for k in 0..n {
            let s: Complex64 = (1..=k).map(|i| o.0[i] * q[k - i]).sum();
            q[k] = (self.0[k] - s) / o.0[0];
        }
        Jet(q)
    }

    fn powi(&self, k: i32) -> Jet {
        let n = self.0.len();
        let mut result = Jet::constant(one(), n);
        let mut base = self.clone();
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        if k < 0 {
            Jet::constant(one(), n).div(&result)
        } else {
            result
        }
    }

    fn exp(&self) -> Jet {
        let n = self.0.len();
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[0] = self.0[0].exp();
        for k in 1..n {
            let s: Complex64 = (1..=k).map(|i| i as f64 * self.0[i] * e[k - i]).sum();
            e[k] = s / k as f64;
        }
        Jet(e)
    }

    fn ln(&self) -> Jet {
        let n = self.0.len();
        let a = &self.0;
        let mut l = vec![Complex64::new(0.0, 0.0); n];
        l[0] = a[0].ln();
        for k in 1..n {
            let s: Complex64 = (1..k).map(|i| i as f64 * l[i] * a[k - i]).sum();
            l[k] = (a[k] - s / k as f64) / a[0];
        }
        Jet(l)
    }

    fn sqrt(&self) -> Jet {
        let n = self.0.len();
        let a = &self.0;
        let mut s = vec![Complex64::new(0.0, 0.0); n];
        s[0] = a[0].sqrt();
        for k in 1..n {
            let acc: Complex64 = (1..k).map(|i| s[i] * s[k - i]).sum();
            s[k] = (a[k] - acc) / (2.0 * s[0]);
        }
        Jet(s)
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            line: 1,
            column: self.pos + 1,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut e = self.term()?;
        loop {
            if self.eat('+') {
                e = Expr::Add(Box::new(e), Box::new(self.term()?));
            } else if self.eat('-') {
                e = Expr::Sub(Box::new(e), Box::new(self.term()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.unary()?;
        loop {
            if self.eat('*') {
                e = Expr::Mul(Box::new(e), Box::new(self.unary()?));
            } else if self.eat('/') {
                e = Expr::Div(Box::new(e), Box::new(self.unary()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        let negative = self.eat('-');
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("exponent must be an integer"));
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        let mut n: i32 = text.parse().map_err(|_| self.error("exponent out of range"))?;
        if negative {
            n = -n;
        }
        if paren {
            self.expect(')')?;
        }
        Ok(Expr::Pow(Box::new(base), n))
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        let digits = |p: &mut Parser| {
            while p.pos < p.chars.len() && p.chars[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
        };
        digits(self);
        if self.pos < self.chars.len() && self.chars[self.pos] == '.' {
            self.pos += 1;
            digits(self);
        }
        if self.pos < self.chars.len() && matches!(self.chars[self.pos], 'e' | 'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < self.chars.len() && matches!(self.chars[self.pos], '+' | '-') {
                self.pos += 1;
            }
            let exp_start = self.pos;
            digits(self);
            if exp_start == self.pos {
                // a trailing `e` is Euler's number used as a factor
                self.pos = save;
            }
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().map_err(|_| {
            self.pos = start;
            self.error(&format!("bad number '{text}'"))
        })
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let v = self.number()?;
                // implicit product such as `2i`, `0.5z` or `3pi`
                if self.pos < self.chars.len() && self.chars[self.pos].is_ascii_alphabetic() {
                    let rest = self.atom()?;
                    return Ok(mul(Expr::Const(Complex64::new(v, 0.0)), rest));
                }
                Ok(Expr::Const(Complex64::new(v, 0.0)))
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let name = self.ident();
                match name.as_str() {
                    "z" => Ok(Expr::Z),
                    "i" => Ok(Expr::Const(Complex64::new(0.0, 1.0))),
                    "pi" => Ok(Expr::Const(Complex64::new(std::f64::consts::PI, 0.0))),
                    "e" => Ok(Expr::Const(Complex64::new(std::f64::consts::E, 0.0))),
                    "exp" | "log" | "sqrt" | "mobius" | "blaschke" => {
                        self.expect('(')?;
                        let mut args = vec![self.expr()?];
                        while self.eat(',') {
                            args.push(self.expr()?);
                        }
                        self.expect(')')?;
                        self.function(&name, args, start)
                    }
                    _ => {
                        self.pos = start;
                        Err(self.error(&format!("unknown identifier '{name}'")))
                    }
                }
            }
            Some(c) => Err(self.error(&format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of expression")),
        }
    }

    fn function(&mut self, name: &str, args: Vec<Expr>, start: usize) -> Result<Expr> {
        let mut it = args.into_iter();
        let u = Box::new(it.next().expect("at least one argument"));
        let rest: Vec<Expr> = it.collect();
        let consts = rest
            .iter()
            .map(|e| e.constant())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| {
                self.pos = start;
                self.error(&format!("{name}: parameters must be constants"))
            })?;
        let arity_err = |p: &mut Parser, want: &str| {
            p.pos = start;
            p.error(&format!("{name} takes {want}"))
        };
        match name {
            "exp" | "log" | "sqrt" if !consts.is_empty() => Err(arity_err(self, "one argument")),
            "exp" => Ok(Expr::Exp(u)),
            "log" => Ok(Expr::Log(u)),
            "sqrt" => Ok(Expr::Sqrt(u)),
            "mobius" => {
                let [a, b, c, d]: [Complex64; 4] = consts
                    .try_into()
                    .map_err(|_| arity_err(self, "five arguments"))?;
                if (a * d - b * c).norm() == 0.0 {
                    self.pos = start;
                    return Err(self.error("mobius: ad − bc must not vanish"));
                }
                Ok(Expr::Mobius([a, b, c, d], u))
            }
            _ => {
                if consts.is_empty() {
                    return Err(arity_err(self, "at least one zero"));
                }
                if consts.iter().any(|a| a.norm() >= 1.0) {
                    self.pos = start;
                    return Err(self.error("blaschke: zeros must lie in the unit disk"));
                }
                Ok(Expr::Blaschke(consts, u))
            }
        }
    }
}

fn fmt_c(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{:?}", c.re)
    } else if c.re == 0.0 {
        format!("{:?}*i", c.im)
    } else {
        format!("({:?}+{:?}*i)", c.re, c.im)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Z => write!(f, "z"),
            Expr::Const(c) => write!(f, "{}", fmt_c(*c)),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Pow(a, n) => write!(f, "({a})^({n})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Log(a) => write!(f, "log({a})"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
            Expr::Mobius(c, u) => write!(
                f,
                "mobius({u}, {}, {}, {}, {})",
                fmt_c(c[0]),
                fmt_c(c[1]),
                fmt_c(c[2]),
                fmt_c(c[3])
            ),
            Expr::Blaschke(zs, u) => {
                write!(f, "blaschke({u}")?;
                for a in zs {
                    write!(f, ", {}", fmt_c(*a))?;
                }
                write!(f, ")")
            }
        }
    }
}
