//! Tiny expression language for user-defined triad kernels.
//!
//! Grammar (rational functions of the wavenumbers and the imaginary unit):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := ('+' | '-')* power
//! power  := atom ('^' ('-')? integer)?
//! atom   := number | 'k' | 'm' | 'n' | 'i' | 'abs' '(' expr ')' | '(' expr ')'
//! ```
//!
//! `abs(..)` takes the complex modulus, so `abs(k)` is |k|. Exponents are
//! integers; fractional powers are not part of the language.

use num_complex::Complex;

use crate::scalar::{from_int, lit, Scalar};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    ImaginaryUnit,
    K,
    M,
    N,
    Abs(Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let tokens = tokenize(src)?;
        let mut parser = Parser { tokens, pos: 0 };
        let expr = parser.expr()?;
        if parser.pos != parser.tokens.len() {
            return Err(Error::Expression(format!(
                "unexpected trailing input at `{}`",
                parser.describe_current()
            )));
        }
        Ok(expr)
    }

    pub fn eval<T: Scalar>(&self, k: i64, m: i64, n: i64) -> Complex<T> {
        let zero = T::zero();
        match self {
            Expr::Num(x) => Complex::new(lit(*x), zero),
            Expr::ImaginaryUnit => Complex::new(zero, T::one()),
            Expr::K => Complex::new(from_int(k), zero),
            Expr::M => Complex::new(from_int(m), zero),
            Expr::N => Complex::new(from_int(n), zero),
            Expr::Abs(e) => Complex::new(e.eval::<T>(k, m, n).norm(), zero),
            Expr::Neg(e) => -e.eval::<T>(k, m, n),
            Expr::Add(a, b) => a.eval::<T>(k, m, n) + b.eval::<T>(k, m, n),
            Expr::Sub(a, b) => a.eval::<T>(k, m, n) - b.eval::<T>(k, m, n),
            Expr::Mul(a, b) => a.eval::<T>(k, m, n) * b.eval::<T>(k, m, n),
            Expr::Div(a, b) => a.eval::<T>(k, m, n) / b.eval::<T>(k, m, n),
            Expr::Pow(e, p) => cpowi(e.eval::<T>(k, m, n), *p),
        }
    }
}

/// z^p by binary exponentiation; negative p inverts first.
fn cpowi<T: Scalar>(z: Complex<T>, p: i32) -> Complex<T> {
    if p == 0 {
        return Complex::new(T::one(), T::zero());
    }
    let mut base = if p < 0 { z.inv() } else { z };
    let mut e = p.unsigned_abs();
    let mut acc = Complex::new(T::one(), T::zero());
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base = base * base;
        e >>= 1;
    }
    acc
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
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

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '*' => {
                tokens.push(Token::Star);
                i += 1;
            }
            '/' => {
                tokens.push(Token::Slash);
                i += 1;
            }
            '^' => {
                tokens.push(Token::Caret);
                i += 1;
            }
            '(' => {
                tokens.push(Token::LParen);
                i += 1;
            }
            ')' => {
                tokens.push(Token::RParen);
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && matches!(bytes[i] as char, '0'..='9' | '.') {
                    i += 1;
                }
                // Exponent suffix like 1e-3; only when digits follow.
                if i < bytes.len()
                    && matches!(bytes[i] as char, 'e' | 'E')
                    && i + 1 < bytes.len()
                    && matches!(bytes[i + 1] as char, '0'..='9' | '+' | '-')
                {
                    i += 2;
                    while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                        i += 1;
                    }
                }
                let text = &src[start..i];
                let value = text.parse::<f64>().map_err(|_| {
                    Error::Expression(format!("malformed number literal `{text}`"))
                })?;
                tokens.push(Token::Num(value));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && matches!(bytes[i] as char, 'a'..='z' | 'A'..='Z' | '0'..='9' | '_')
                {
                    i += 1;
                }
                tokens.push(Token::Ident(src[start..i].to_string()));
            }
            other => {
                return Err(Error::Expression(format!(
                    "unexpected character `{other}` at byte {i}"
                )))
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn describe_current(&self) -> String {
        match self.peek() {
            Some(Token::Num(x)) => format!("{x}"),
            Some(Token::Ident(s)) => s.clone(),
            Some(t) => format!("{t:?}"),
            None => "end of input".into(),
        }
    }

    fn expect(&mut self, want: Token) -> Result<()> {
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(Error::Expression(format!(
                "expected {want:?}, found `{}`",
                self.describe_current()
            ))),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Token::Minus) => {
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
                Some(Token::Star) => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(Token::Slash) => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Token::Minus) => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.factor()?)))
            }
            Some(Token::Plus) => {
                self.bump();
                self.factor()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.bump();
            let neg = if matches!(self.peek(), Some(Token::Minus)) {
                self.bump();
                true
            } else {
                false
            };
            let exp = match self.bump() {
                Some(Token::Num(x)) if x.fract() == 0.0 && x.abs() <= i32::MAX as f64 => x as i32,
                _ => {
                    return Err(Error::Expression(
                        "exponent after `^` must be an integer literal".into(),
                    ))
                }
            };
            return Ok(Expr::Pow(Box::new(base), if neg { -exp } else { exp }));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.bump() {
            Some(Token::Num(x)) => Ok(Expr::Num(x)),
            Some(Token::Ident(name)) => match name.as_str() {
                "k" => Ok(Expr::K),
                "m" => Ok(Expr::M),
                "n" => Ok(Expr::N),
                "i" => Ok(Expr::ImaginaryUnit),
                "abs" => {
                    self.expect(Token::LParen)?;
                    let inner = self.expr()?;
                    self.expect(Token::RParen)?;
                    Ok(Expr::Abs(Box::new(inner)))
                }
                other => Err(Error::Expression(format!(
                    "unknown identifier `{other}`; available: k, m, n, i, abs(..)"
                ))),
            },
            Some(Token::LParen) => {
                let inner = self.expr()?;
                self.expect(Token::RParen)?;
                Ok(inner)
            }
            _ => Err(Error::Expression(format!(
                "expected a value, found `{}`",
                self.describe_current()
            ))),
        }
    }
}
