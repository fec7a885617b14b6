//! Restricted expression grammar for user-defined metrics and field
//! components. Deliberately small: chart variables, constants, arithmetic,
//! and the jet-closed primitives. Expressions parse once into a tree and
//! evaluate over any scalar implementing [`Num`], so the same text drives
//! both plain evaluation and jet differentiation.
//!
//! Grammar (precedence climbing): `expr = term (('+'|'-') term)*`,
//! `term = factor (('*'|'/') factor)*`, `factor = '-' factor |
//! atom ('^' number)?`, `atom = number | ident | ident '(' expr ')' |
//! '(' expr ')'`. Identifiers: `x1..xn`, `y1..yn`, `pi`, `L`, `F`, and
//! the functions `sqrt exp log sin cos abs`. Exponents must be numeric
//! literals so that jet closure is decidable at parse time.

use crate::error::{Error, Result};
use crate::num::Num;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(f64),
    X(usize),
    Y(usize),
    /// Metric value at the evaluation point (only in field expressions).
    L,
    /// Root norm sqrt(|L|) at the evaluation point.
    F,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Literal exponent; integer values use exact repeated multiplication.
    Pow(Box<Expr>, f64),
    Fun(Fun, Box<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fun {
    Sqrt,
    Exp,
    Log,
    Sin,
    Cos,
    Abs,
}

/// Values the variables resolve to during one evaluation.
pub struct Bindings<'a, T: Num> {
    pub x: &'a [T],
    pub y: &'a [T],
    /// Metric value, for field expressions written in terms of L or F.
    pub l: Option<&'a T>,
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr> {
        let tokens = tokenize(text)?;
        let mut p = Parser { tokens, pos: 0 };
        let e = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Config(format!(
                "unexpected trailing input at token {} in expression {text:?}",
                p.pos
            )));
        }
        Ok(e)
    }

    /// Largest variable index mentioned, as (x_dim, y_dim) lower bounds,
    /// and whether L or F appears.
    pub fn requirements(&self) -> ExprRequirements {
        let mut r = ExprRequirements {
            min_dim: 0,
            uses_metric: false,
        };
        self.walk(&mut r);
        r
    }

    fn walk(&self, r: &mut ExprRequirements) {
        match self {
            Expr::X(i) | Expr::Y(i) => r.min_dim = r.min_dim.max(i + 1),
            Expr::L | Expr::F => r.uses_metric = true,
            Expr::Neg(a) | Expr::Fun(_, a) | Expr::Pow(a, _) => a.walk(r),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.walk(r);
                b.walk(r);
            }
            Expr::Const(_) => {}
        }
    }

    pub fn eval<T: Num>(&self, env: &Bindings<T>) -> Result<T> {
        let exemplar = env
            .x
            .first()
            .or_else(|| env.y.first())
            .ok_or_else(|| Error::Eval("expression evaluated with empty bindings".into()))?;
        self.eval_in(env, exemplar)
    }

    fn eval_in<T: Num>(&self, env: &Bindings<T>, ex: &T) -> Result<T> {
        Ok(match self {
            Expr::Const(c) => ex.lift(*c),
            Expr::X(i) => env
                .x
                .get(*i)
                .cloned()
                .ok_or_else(|| Error::Eval(format!("x{} out of range", i + 1)))?,
            Expr::Y(i) => env
                .y
                .get(*i)
                .cloned()
                .ok_or_else(|| Error::Eval(format!("y{} out of range", i + 1)))?,
            Expr::L => env
                .l
                .cloned()
                .ok_or_else(|| Error::Eval("L is not available in this context".into()))?,
            Expr::F => {
                let l = env
                    .l
                    .cloned()
                    .ok_or_else(|| Error::Eval("F is not available in this context".into()))?;
                l.abs().sqrt()
            }
            Expr::Neg(a) => -a.eval_in(env, ex)?,
            Expr::Add(a, b) => a.eval_in(env, ex)? + b.eval_in(env, ex)?,
            Expr::Sub(a, b) => a.eval_in(env, ex)? - b.eval_in(env, ex)?,
            Expr::Mul(a, b) => a.eval_in(env, ex)? * b.eval_in(env, ex)?,
            Expr::Div(a, b) => a.eval_in(env, ex)? / b.eval_in(env, ex)?,
            Expr::Pow(a, r) => {
                let base = a.eval_in(env, ex)?;
                if r.fract() == 0.0 && r.abs() <= i32::MAX as f64 {
                    base.powi(*r as i32)
                } else {
                    base.powf(*r)
                }
            }
            Expr::Fun(f, a) => {
                let v = a.eval_in(env, ex)?;
                match f {
                    Fun::Sqrt => v.sqrt(),
                    Fun::Exp => v.exp(),
                    Fun::Log => v.ln(),
                    Fun::Sin => v.sin(),
                    Fun::Cos => v.cos(),
                    Fun::Abs => v.abs(),
                }
            }
        })
    }
}

pub struct ExprRequirements {
    /// Minimum chart dimension implied by the variables used.
    pub min_dim: usize,
    pub uses_metric: bool,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len()
                    && matches!(bytes[i] as char, '0'..='9' | '.' | 'e' | 'E')
                {
                    // Signed exponent: consume the sign after e/E.
                    if matches!(bytes[i] as char, 'e' | 'E')
                        && i + 1 < bytes.len()
                        && matches!(bytes[i + 1] as char, '+' | '-')
                    {
                        i += 1;
                    }
                    i += 1;
                }
                let s = &text[start..i];
                let v: f64 = s
                    .parse()
                    .map_err(|_| Error::Config(format!("bad number literal {s:?}")))?;
                out.push(Tok::Num(v));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && matches!(bytes[i] as char, 'a'..='z' | 'A'..='Z' | '0'..='9' | '_')
                {
                    i += 1;
                }
                out.push(Tok::Ident(text[start..i].to_string()));
            }
            other => {
                return Err(Error::Config(format!(
                    "unexpected character {other:?} in expression"
                )))
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: &Tok) -> Result<()> {
        match self.bump() {
            Some(ref got) if got == t => Ok(()),
            got => Err(Error::Config(format!("expected {t:?}, found {got:?}"))),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        // Unary minus binds looser than the power: -y1^2 = -(y1^2).
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            // Exponent: numeric literal with optional sign.
            let neg = if matches!(self.peek(), Some(Tok::Minus)) {
                self.bump();
                true
            } else {
                false
            };
            match self.bump() {
                Some(Tok::Num(v)) => {
                    let r = if neg { -v } else { v };
                    return Ok(Expr::Pow(Box::new(base), r));
                }
                got => {
                    return Err(Error::Config(format!(
                        "exponent must be a numeric literal, found {got:?}"
                    )))
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.bump() {
            Some(Tok::Num(v)) => Ok(Expr::Const(v)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => self.ident(name),
            got => Err(Error::Config(format!("expected a value, found {got:?}"))),
        }
    }

    fn ident(&mut self, name: String) -> Result<Expr> {
        if let Some(f) = match name.as_str() {
            "sqrt" => Some(Fun::Sqrt),
            "exp" => Some(Fun::Exp),
            "log" => Some(Fun::Log),
            "sin" => Some(Fun::Sin),
            "cos" => Some(Fun::Cos),
            "abs" => Some(Fun::Abs),
            _ => None,
        } {
            self.expect(&Tok::LParen)?;
            let arg = self.expr()?;
            self.expect(&Tok::RParen)?;
            return Ok(Expr::Fun(f, Box::new(arg)));
        }
        match name.as_str() {
            "pi" => return Ok(Expr::Const(std::f64::consts::PI)),
            "L" => return Ok(Expr::L),
            "F" => return Ok(Expr::F),
            _ => {}
        }
        let (head, tail) = name.split_at(1);
        let idx: usize = tail.parse().map_err(|_| {
            Error::Config(format!(
                "unknown identifier {name:?} (expected x<k>, y<k>, pi, L, F, or a function)"
            ))
        })?;
        if idx == 0 {
            return Err(Error::Config(format!(
                "variable index in {name:?} is 1-based"
            )));
        }
        match head {
            "x" => Ok(Expr::X(idx - 1)),
            "y" => Ok(Expr::Y(idx - 1)),
            _ => Err(Error::Config(format!("unknown identifier {name:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval_f64(text: &str, x: &[f64], y: &[f64]) -> f64 {
        let e = Expr::parse(text).unwrap();
        e.eval(&Bindings { x, y, l: None }).unwrap()
    }

    #[test]
    fn arithmetic_and_precedence() {
        assert_eq!(eval_f64("1 + 2 * 3", &[0.0], &[0.0]), 7.0);
        assert_eq!(eval_f64("(1 + 2) * 3", &[0.0], &[0.0]), 9.0);
        assert_eq!(eval_f64("2 ^ 3 * 2", &[0.0], &[0.0]), 16.0);
        assert_eq!(eval_f64("-y1 ^ 2", &[0.0], &[3.0]), -9.0);
        assert_eq!(eval_f64("(0 - y1) ^ 2", &[0.0], &[3.0]), 9.0);
        assert_eq!(eval_f64("y1 ^ -2", &[0.0], &[2.0]), 0.25);
    }

    #[test]
    fn minkowski_expression_matches_quadratic_form() {
        let e = Expr::parse("y1^2 - y2^2 - y3^2").unwrap();
        let v = e
            .eval(&Bindings {
                x: &[0.0, 0.0, 0.0],
                y: &[3.0, 1.0, 2.0],
                l: None,
            })
            .unwrap();
        assert_eq!(v, 9.0 - 1.0 - 4.0);
        let req = e.requirements();
        assert_eq!(req.min_dim, 3);
        assert!(!req.uses_metric);
    }

    #[test]
    fn functions_and_pi() {
        let v = eval_f64("sin(pi / 2) + sqrt(abs(0 - 4))", &[1.0], &[1.0]);
        assert!((v - 3.0).abs() < 1e-15);
        let w = eval_f64("exp(log(x1))", &[1.9], &[1.0]);
        assert!((w - 1.9).abs() < 1e-15);
    }

    #[test]
    fn metric_symbols_bind_to_l() {
        let e = Expr::parse("0.3 * F + L / 2").unwrap();
        assert!(e.requirements().uses_metric);
        let l = 4.0;
        let v = e
            .eval(&Bindings {
                x: &[0.0],
                y: &[1.0],
                l: Some(&l),
            })
            .unwrap();
        assert!((v - (0.3 * 2.0 + 2.0)).abs() < 1e-15);
        assert!(e.eval(&Bindings { x: &[0.0], y: &[1.0], l: None }).is_err());
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(Expr::parse("y1 +").is_err());
        assert!(Expr::parse("z3").is_err());
        assert!(Expr::parse("y0").is_err());
        assert!(Expr::parse("sin x1").is_err());
        assert!(Expr::parse("y1 ^ x1").is_err()); // exponent must be literal
        assert!(Expr::parse("1..5").is_err());
        assert!(Expr::parse("y1 y2").is_err()); // trailing token
    }

    #[test]
    fn scientific_notation_literals() {
        assert_eq!(eval_f64("1e-3 + 2.5E+1", &[0.0], &[0.0]), 0.001 + 25.0);
    }
}
