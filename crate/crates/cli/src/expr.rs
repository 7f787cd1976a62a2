//! A small arithmetic language for exponents, weights and symbols.
//!
//! Grammar (lowest to highest precedence):
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' unary)?
//! atom    := number | ident | ident '(' args ')' | '(' sum ')'
//! ```
//!
//! Identifiers: `x1`, `x2`, `pi`, `e`, and `x` (the whole point, only as the
//! first argument of `dist`). Functions: `sin cos exp abs` (one argument),
//! `min max` (two), `dist(e, a)` (periodic distance of a scalar) and
//! `dist(x, a)` / `dist(x, a, b)` (torus distance of the point).

use std::f64::consts::{E, PI};
use std::fmt;

use microlocal_core::analysis::{Jet, Symbol};
use microlocal_core::{Grid, Point};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Call(Func, Vec<Expr>),
    /// Torus distance from the point to `(a)` or `(a, b)`.
    PointDist(Vec<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Abs,
    Min,
    Max,
    Dist,
}

impl Func {
    fn lookup(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "abs" => Func::Abs,
            "min" => Func::Min,
            "max" => Func::Max,
            "dist" => Func::Dist,
            _ => return None,
        })
    }

    fn arity(self) -> usize {
        match self {
            Func::Sin | Func::Cos | Func::Exp | Func::Abs => 1,
            Func::Min | Func::Max | Func::Dist => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprError {
    Syntax { position: usize, message: String },
    UnknownIdentifier { position: usize, name: String },
    Arity { position: usize, name: String, expected: String, found: usize },
    DivisionByZero { index: usize },
    NonFinite { index: usize },
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprError::Syntax { position, message } => write!(f, "syntax error at position {position}: {message}"),
            ExprError::UnknownIdentifier { position, name } => {
                write!(f, "unknown identifier `{name}` at position {position}")
            }
            ExprError::Arity {
                position,
                name,
                expected,
                found,
            } => write!(f, "`{name}` at position {position} takes {expected} argument(s), found {found}"),
            ExprError::DivisionByZero { index } => write!(f, "division by zero at grid point {index}"),
            ExprError::NonFinite { index } => write!(f, "non-finite value at grid point {index}"),
        }
    }
}

impl std::error::Error for ExprError {}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ExprError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_digit() || chars[i].1 == '.') {
                i += 1;
            }
            // exponent part: 1e-3, 2.5E+4
            if i < chars.len() && matches!(chars[i].1, 'e' | 'E') {
                let mut j = i + 1;
                if j < chars.len() && matches!(chars[j].1, '+' | '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].1.is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].1.is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let end = if i < chars.len() { chars[i].0 } else { text.len() };
            let literal = &text[pos..end];
            let value = literal.parse::<f64>().map_err(|_| ExprError::Syntax {
                position: chars[start].0,
                message: format!("malformed number `{literal}`"),
            })?;
            out.push((pos, Token::Num(value)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let end = if i < chars.len() { chars[i].0 } else { text.len() };
            out.push((pos, Token::Ident(text[pos..end].to_string())));
        } else if "+-*/^(),".contains(c) {
            out.push((pos, Token::Op(c)));
            i += 1;
        } else {
            return Err(ExprError::Syntax {
                position: pos,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at).map(|(_, t)| t)
    }

    fn position(&self) -> usize {
        self.tokens.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<(), ExprError> {
        if self.eat(op) {
            Ok(())
        } else {
            Err(ExprError::Syntax {
                position: self.position(),
                message: format!("expected `{op}`"),
            })
        }
    }

    fn sum(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.product()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.eat('^') {
            return Ok(Expr::Pow(Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let position = self.position();
        match self.tokens.get(self.at).cloned() {
            Some((_, Token::Num(v))) => {
                self.at += 1;
                Ok(Expr::Const(v))
            }
            Some((_, Token::Op('('))) => {
                self.at += 1;
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Some((_, Token::Ident(name))) => {
                self.at += 1;
                if self.peek() == Some(&Token::Op('(')) {
                    self.at += 1;
                    return self.call(&name, position);
                }
                match name.as_str() {
                    "x1" => Ok(Expr::Var(0)),
                    "x2" => Ok(Expr::Var(1)),
                    "pi" => Ok(Expr::Const(PI)),
                    "e" => Ok(Expr::Const(E)),
                    _ => Err(ExprError::UnknownIdentifier { position, name }),
                }
            }
            Some((_, Token::Op(c))) => Err(ExprError::Syntax {
                position,
                message: format!("unexpected `{c}`"),
            }),
            None => Err(ExprError::Syntax {
                position,
                message: "unexpected end of input".into(),
            }),
        }
    }

    fn call(&mut self, name: &str, position: usize) -> Result<Expr, ExprError> {
        let func = Func::lookup(name).ok_or_else(|| ExprError::UnknownIdentifier {
            position,
            name: name.to_string(),
        })?;
        // `dist(x, ...)` measures from the whole point
        let point_form = func == Func::Dist && self.peek() == Some(&Token::Ident("x".into()));
        let mut args = Vec::new();
        if point_form {
            self.at += 1;
            while self.eat(',') {
                args.push(self.sum()?);
            }
        } else if !self.eat(')') {
            args.push(self.sum()?);
            while self.eat(',') {
                args.push(self.sum()?);
            }
        } else {
            return Err(ExprError::Arity {
                position,
                name: name.to_string(),
                expected: func.arity().to_string(),
                found: 0,
            });
        }
        if point_form {
            self.expect(')')?;
            if !(1..=2).contains(&args.len()) {
                return Err(ExprError::Arity {
                    position,
                    name: name.to_string(),
                    expected: "2 or 3".into(),
                    found: args.len() + 1,
                });
            }
            return Ok(Expr::PointDist(args));
        }
        self.expect(')')?;
        if args.len() != func.arity() {
            return Err(ExprError::Arity {
                position,
                name: name.to_string(),
                expected: func.arity().to_string(),
                found: args.len(),
            });
        }
        Ok(Expr::Call(func, args))
    }
}

pub fn parse_expression(text: &str) -> Result<Expr, ExprError> {
    let mut parser = Parser {
        tokens: tokenize(text)?,
        at: 0,
        end: text.len(),
    };
    let e = parser.sum()?;
    if parser.at != parser.tokens.len() {
        return Err(ExprError::Syntax {
            position: parser.position(),
            message: "trailing input".into(),
        });
    }
    Ok(e)
}

fn periodic(d: f64) -> f64 {
    let r = d.rem_euclid(1.0);
    r.min(1.0 - r)
}

#[derive(Debug)]
struct DivZero;

impl Expr {
    fn eval_checked(&self, x: Point) -> Result<f64, DivZero> {
        Ok(match self {
            Expr::Const(v) => *v,
            Expr::Var(i) => x[*i],
            Expr::Add(a, b) => a.eval_checked(x)? + b.eval_checked(x)?,
            Expr::Sub(a, b) => a.eval_checked(x)? - b.eval_checked(x)?,
            Expr::Mul(a, b) => a.eval_checked(x)? * b.eval_checked(x)?,
            Expr::Div(a, b) => {
                let d = b.eval_checked(x)?;
                if d == 0.0 {
                    return Err(DivZero);
                }
                a.eval_checked(x)? / d
            }
            Expr::Pow(a, b) => a.eval_checked(x)?.powf(b.eval_checked(x)?),
            Expr::Neg(a) => -a.eval_checked(x)?,
            Expr::Call(f, args) => {
                let v0 = args[0].eval_checked(x)?;
                match f {
                    Func::Sin => v0.sin(),
                    Func::Cos => v0.cos(),
                    Func::Exp => v0.exp(),
                    Func::Abs => v0.abs(),
                    Func::Min => v0.min(args[1].eval_checked(x)?),
                    Func::Max => v0.max(args[1].eval_checked(x)?),
                    Func::Dist => periodic(v0 - args[1].eval_checked(x)?),
                }
            }
            Expr::PointDist(args) => {
                let a = args[0].eval_checked(x)?;
                let b = match args.get(1) {
                    Some(e) => Some(e.eval_checked(x)?),
                    None => None,
                };
                match b {
                    None => periodic(x[0] - a),
                    Some(b) => periodic(x[0] - a).hypot(periodic(x[1] - b)),
                }
            }
        })
    }

    /// Value at `x`; division by zero gives `NaN`.
    pub fn eval(&self, x: Point) -> f64 {
        self.eval_checked(x).unwrap_or(f64::NAN)
    }

    /// Samples at every grid point, rejecting division by zero and
    /// non-finite values.
    pub fn sample(&self, grid: &Grid) -> Result<Vec<f64>, ExprError> {
        grid.points()
            .enumerate()
            .map(|(index, x)| match self.eval_checked(x) {
                Err(DivZero) => Err(ExprError::DivisionByZero { index }),
                Ok(v) if !v.is_finite() => Err(ExprError::NonFinite { index }),
                Ok(v) => Ok(v),
            })
            .collect()
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Const(_) => true,
            Expr::Var(_) | Expr::PointDist(_) => false,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.is_constant() && b.is_constant()
            }
            Expr::Neg(a) => a.is_constant(),
            Expr::Call(_, args) => args.iter().all(Expr::is_constant),
        }
    }

    fn jet(&self, x: Point, order: usize) -> Jet {
        match self {
            Expr::Const(v) => Jet::constant(*v, order),
            Expr::Var(i) => Jet::variable(*i, x[*i], order),
            Expr::Add(a, b) => a.jet(x, order).add(&b.jet(x, order)),
            Expr::Sub(a, b) => a.jet(x, order).sub(&b.jet(x, order)),
            Expr::Mul(a, b) => a.jet(x, order).mul(&b.jet(x, order)),
            Expr::Div(a, b) => a.jet(x, order).div(&b.jet(x, order)),
            Expr::Pow(a, b) => {
                let base = a.jet(x, order);
                if b.is_constant() {
                    base.powf(b.eval(x))
                } else {
                    // a^b = exp(b ln a)
                    b.jet(x, order).mul(&base.ln()).exp()
                }
            }
            Expr::Neg(a) => a.jet(x, order).neg(),
            Expr::Call(f, args) => {
                let j0 = args[0].jet(x, order);
                match f {
                    Func::Sin => j0.sin(),
                    Func::Cos => j0.cos(),
                    Func::Exp => j0.exp(),
                    Func::Abs => j0.abs(),
                    Func::Min => j0.min(&args[1].jet(x, order)),
                    Func::Max => j0.max(&args[1].jet(x, order)),
                    Func::Dist => {
                        let d = j0.sub(&args[1].jet(x, order));
                        d.add_scalar(-d.value().round()).abs()
                    }
                }
            }
            Expr::PointDist(args) => {
                let axis = |i: usize, a: &Expr| {
                    let d = Jet::variable(i, x[i], order).sub(&a.jet(x, order));
                    d.add_scalar(-d.value().round())
                };
                match args.len() {
                    1 => axis(0, &args[0]).abs(),
                    _ => {
                        let (u, v) = (axis(0, &args[0]), axis(1, &args[1]));
                        u.mul(&u).add(&v.mul(&v)).sqrt()
                    }
                }
            }
        }
    }
}

/// An expression read as a Fourier symbol `m(ξ)` with `ξ = (x1, x2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprSymbol(pub Expr);

impl Symbol for ExprSymbol {
    fn jet(&self, xi: Point, order: usize) -> Jet {
        self.0.jet(xi, order)
    }

    fn value(&self, xi: Point) -> f64 {
        self.0.eval(xi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(text: &str, x: f64) -> f64 {
        parse_expression(text).unwrap().eval([x, 0.0])
    }

    #[test]
    fn sine_exponent_stays_in_range() {
        let e = parse_expression("2 + 0.5*sin(6.283185*x1)").unwrap();
        let g = Grid::one_d(256).unwrap();
        let v = e.sample(&g).unwrap();
        assert!(v.iter().all(|&p| (1.5..=2.5).contains(&p)));
        assert!(v.iter().any(|&p| p > 2.49) && v.iter().any(|&p| p < 1.51));
    }

    #[test]
    fn division_by_zero_is_a_load_error() {
        let e = parse_expression("1/(x1 - x1)").unwrap();
        let g = Grid::one_d(16).unwrap();
        assert_eq!(e.sample(&g), Err(ExprError::DivisionByZero { index: 0 }));
    }

    #[test]
    fn piecewise_with_distance() {
        assert_eq!(at("min(3, 2 + dist(x1, 0.5))", 0.5), 2.0);
        assert_eq!(at("min(3, 2 + dist(x1, 0.5))", 0.0), 2.5);
        assert_eq!(at("dist(x, 0.9)", 0.1), at("dist(x1, 0.9)", 0.1));
        let e = parse_expression("dist(x, 0.5, 0.5)").unwrap();
        assert!((e.eval([0.0, 0.0]) - 0.5f64.hypot(0.5)).abs() < 1e-15);
    }

    #[test]
    fn precedence() {
        assert_eq!(at("-2^2", 0.0), -4.0);
        assert_eq!(at("2^-1", 0.0), 0.5);
        assert_eq!(at("2^3^2", 0.0), 512.0);
        assert_eq!(at("1 - 2 - 3", 0.0), -4.0);
        assert_eq!(at("8 / 2 / 2", 0.0), 2.0);
        assert_eq!(at(" ( 1+2 ) * 3 ", 0.0), 9.0);
        assert_eq!(at("2*-3", 0.0), -6.0);
        assert_eq!(at("1.5e1 + 2E-1", 0.0), 15.2);
        assert!((at("pi", 0.0) - PI).abs() < 1e-15);
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(
            parse_expression("1 + * 2"),
            Err(ExprError::Syntax { position: 4, .. })
        ));
        assert!(matches!(
            parse_expression("foo + 1"),
            Err(ExprError::UnknownIdentifier { position: 0, .. })
        ));
        assert!(matches!(
            parse_expression("2 + sin(1, 2)"),
            Err(ExprError::Arity { position: 4, found: 2, .. })
        ));
        assert!(matches!(parse_expression("min(1)"), Err(ExprError::Arity { found: 1, .. })));
        assert!(matches!(parse_expression("(1 + 2"), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse_expression("1 2"), Err(ExprError::Syntax { position: 2, .. })));
        assert!(matches!(parse_expression("x + 1"), Err(ExprError::UnknownIdentifier { .. })));
        assert!(matches!(parse_expression("cos()"), Err(ExprError::Arity { found: 0, .. })));
    }

    #[test]
    fn symbol_jets_match_closed_forms() {
        let m = ExprSymbol(parse_expression("x1 * (1 + x1^2)^(-1/2)").unwrap());
        for xi in [-3.0, 0.2, 2.0] {
            let j = m.jet([xi, 0.0], 2);
            let b: f64 = 1.0 + xi * xi;
            assert!((j.value() - xi / b.sqrt()).abs() < 1e-14);
            assert!((j.derivative(1, 0) - b.powf(-1.5)).abs() < 1e-13);
            assert!((j.derivative(2, 0) + 3.0 * xi * b.powf(-2.5)).abs() < 1e-13);
        }
        let p = ExprSymbol(parse_expression("x1^x2").unwrap());
        let j = p.jet([2.0, 3.0], 1);
        assert!((j.derivative(0, 1) - 8.0 * 2f64.ln()).abs() < 1e-12);
    }
}
