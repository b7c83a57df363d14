//! Expression, automorphism and system parsing.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr    := ['+'|'-'] term (('+'|'-') term)*
//! term    := factor (['*'] factor)*
//! factor  := primary ['^' natural]
//! primary := number ['/' number] | ident | '(' expr ')' | '[' expr ',' expr ']'
//! ```
//!
//! Adjacent factors multiply, so `2x y` is `2*x*y`. In the `x`/`y` settings
//! an identifier made only of `x` and `y` is read letter by letter.

use std::fmt;

use freeaut::autgroup::{AutWord, ElementaryAut};
use freeaut::commalg::{vars_of, xy_vars, CommPoly, UniPoly, Vars};
use freeaut::freealg::FreePoly;
use freeaut::groebner::AlgebraicSystem;
use freeaut::{Error, Result, Scalar};
use num_traits::Zero;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

fn err(pos: Pos, msg: impl Into<String>) -> Error {
    Error::Parse { line: pos.line, col: pos.col, msg: msg.into() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(s) | Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Sym(c) => write!(f, "'{c}'"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

const SYMBOLS: &str = "+-*/^()[],;.";

fn lex(text: &str, origin: Pos) -> Result<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let mut pos = origin;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let here = pos;
        if c == '\n' {
            chars.next();
            pos = Pos { line: pos.line + 1, col: 1 };
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            pos.col += 1;
            continue;
        }
        let mut take = |pred: fn(char) -> bool| {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !pred(d) {
                    break;
                }
                s.push(d);
                chars.next();
                pos.col += 1;
            }
            s
        };
        if c.is_ascii_digit() {
            out.push((Tok::Num(take(|d| d.is_ascii_digit())), here));
        } else if c.is_alphabetic() || c == '_' {
            out.push((Tok::Ident(take(|d| d.is_alphanumeric() || d == '_' || d == '\'')), here));
        } else if SYMBOLS.contains(c) {
            chars.next();
            pos.col += 1;
            out.push((Tok::Sym(c), here));
        } else {
            return Err(err(here, format!("unexpected character '{c}'")));
        }
    }
    out.push((Tok::End, pos));
    Ok(out)
}

/// Parse tree of the expression language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(Scalar),
    Var(String, Pos),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Bracket(Box<Expr>, Box<Expr>),
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn new(text: &str, origin: Pos) -> Result<Self> {
        Ok(Parser { toks: lex(text, origin)?, at: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(err(self.pos(), format!("expected '{c}', found {}", self.peek())))
        }
    }

    fn expect_end(&mut self) -> Result<()> {
        match self.peek() {
            Tok::End => Ok(()),
            t => Err(err(self.pos(), format!("unexpected {t}"))),
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.bump() {
            (Tok::Ident(s), _) => Ok(s),
            (t, p) => Err(err(p, format!("expected a name, found {t}"))),
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Tok::Num(_) | Tok::Ident(_) | Tok::Sym('(') | Tok::Sym('['))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = if self.eat('-') {
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat('-') {
                acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
            } else if self.starts_factor() {
                acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if !self.eat('^') {
            return Ok(base);
        }
        match self.bump() {
            (Tok::Num(s), p) => {
                let e = s.parse::<u32>().map_err(|_| err(p, format!("exponent {s} is too large")))?;
                Ok(Expr::Pow(Box::new(base), e))
            }
            (t, p) => Err(err(p, format!("exponent must be a natural number, found {t}"))),
        }
    }

    fn number(&mut self) -> Result<Scalar> {
        match self.bump() {
            (Tok::Num(s), p) => s.parse::<Scalar>().map_err(|e| err(p, e.to_string())),
            (t, p) => Err(err(p, format!("expected a number, found {t}"))),
        }
    }

    fn primary(&mut self) -> Result<Expr> {
        let p = self.pos();
        match self.peek().clone() {
            Tok::Num(_) => {
                let n = self.number()?;
                if self.eat('/') {
                    let dp = self.pos();
                    let d = self.number()?;
                    if d.is_zero() {
                        return Err(err(dp, "division by zero"));
                    }
                    return Ok(Expr::Num(n / d));
                }
                Ok(Expr::Num(n))
            }
            Tok::Ident(s) => {
                self.bump();
                Ok(Expr::Var(s, p))
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Sym('[') => {
                self.bump();
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(']')?;
                Ok(Expr::Bracket(Box::new(a), Box::new(b)))
            }
            t => Err(err(p, format!("expected a term, found {t}"))),
        }
    }
}

/// Parses `text` into a tree without interpreting names.
pub fn parse_tree(text: &str) -> Result<Expr> {
    let mut p = Parser::new(text, Pos { line: 1, col: 1 })?;
    let e = p.expr()?;
    p.expect_end()?;
    Ok(e)
}

trait Ring: Sized + Clone {
    fn number(c: &Scalar, ctx: &Ctx) -> Self;
    fn var(name: &str, pos: Pos, ctx: &Ctx) -> Result<Self>;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn pow(&self, e: u32) -> Self;
}

/// Names available to an expression.
enum Ctx {
    Free,
    Comm(Vars),
}

fn letters<R: Ring>(name: &str, pos: Pos, x: R, y: R, one: R) -> Result<R> {
    if name.is_empty() || !name.chars().all(|c| c == 'x' || c == 'y') {
        return Err(err(pos, format!("unknown variable '{name}'")));
    }
    Ok(name.chars().fold(one, |acc, c| acc.mul(if c == 'x' { &x } else { &y })))
}

impl Ring for FreePoly {
    fn number(c: &Scalar, _: &Ctx) -> Self {
        FreePoly::constant(c.clone())
    }
    fn var(name: &str, pos: Pos, _: &Ctx) -> Result<Self> {
        match name {
            "C" => Ok(FreePoly::commutator_xy()),
            _ => letters(name, pos, FreePoly::x(), FreePoly::y(), FreePoly::one()),
        }
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn pow(&self, e: u32) -> Self {
        FreePoly::pow(self, e)
    }
}

impl Ring for CommPoly {
    fn number(c: &Scalar, ctx: &Ctx) -> Self {
        let Ctx::Comm(vars) = ctx else { unreachable!("commutative context") };
        CommPoly::constant(c.clone(), vars.clone())
    }
    fn var(name: &str, pos: Pos, ctx: &Ctx) -> Result<Self> {
        let Ctx::Comm(vars) = ctx else { unreachable!("commutative context") };
        if let Some(i) = vars.iter().position(|v| v == name) {
            return Ok(CommPoly::var(i, vars.clone()));
        }
        let (ix, iy) = (vars.iter().position(|v| v == "x"), vars.iter().position(|v| v == "y"));
        match (ix, iy) {
            (Some(i), Some(j)) => letters(
                name,
                pos,
                CommPoly::var(i, vars.clone()),
                CommPoly::var(j, vars.clone()),
                CommPoly::one(vars.clone()),
            ),
            _ => Err(err(pos, format!("unknown variable '{name}'"))),
        }
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn pow(&self, e: u32) -> Self {
        CommPoly::pow(self, e as i64).expect("natural exponent")
    }
}

fn eval<R: Ring>(e: &Expr, ctx: &Ctx) -> Result<R> {
    Ok(match e {
        Expr::Num(c) => R::number(c, ctx),
        Expr::Var(name, pos) => R::var(name, *pos, ctx)?,
        Expr::Neg(a) => R::number(&Scalar::zero(), ctx).sub(&eval(a, ctx)?),
        Expr::Add(a, b) => eval::<R>(a, ctx)?.add(&eval(b, ctx)?),
        Expr::Sub(a, b) => eval::<R>(a, ctx)?.sub(&eval(b, ctx)?),
        Expr::Mul(a, b) => eval::<R>(a, ctx)?.mul(&eval(b, ctx)?),
        Expr::Pow(a, k) => eval::<R>(a, ctx)?.pow(*k),
        Expr::Bracket(a, b) => {
            let (a, b) = (eval::<R>(a, ctx)?, eval::<R>(b, ctx)?);
            a.mul(&b).sub(&b.mul(&a))
        }
    })
}

fn parse_at<R: Ring>(text: &str, origin: Pos, ctx: &Ctx) -> Result<R> {
    let mut p = Parser::new(text, origin)?;
    let e = p.expr()?;
    p.expect_end()?;
    eval(&e, ctx)
}

/// Element of `K<x,y>`; `[f,g]` expands to `fg - gf` and `C` is `[x,y]`.
pub fn parse_free(text: &str) -> Result<FreePoly> {
    parse_at(text, Pos { line: 1, col: 1 }, &Ctx::Free)
}

/// Element of `K[x,y]`.
pub fn parse_comm(text: &str) -> Result<CommPoly> {
    parse_at(text, Pos { line: 1, col: 1 }, &Ctx::Comm(xy_vars()))
}

/// Commutative polynomial over `vars`.
pub fn parse_comm_in(text: &str, vars: &Vars) -> Result<CommPoly> {
    parse_at(text, Pos { line: 1, col: 1 }, &Ctx::Comm(vars.clone()))
}

/// Identifiers of the given texts in order of first appearance.
pub fn names_in<'a>(texts: impl IntoIterator<Item = &'a str>) -> Result<Vars> {
    let mut names: Vec<String> = Vec::new();
    for t in texts {
        for (tok, _) in lex(t, Pos { line: 1, col: 1 })? {
            if let Tok::Ident(s) = tok {
                if !names.contains(&s) {
                    names.push(s);
                }
            }
        }
    }
    Ok(std::sync::Arc::new(names))
}

fn scalar_slot(p: &mut Parser) -> Result<Scalar> {
    let pos = p.pos();
    let e = p.expr()?;
    let v: CommPoly = eval(&e, &Ctx::Comm(vars_of(&[])))
        .map_err(|_| err(pos, "expected a rational constant"))?;
    Ok(v.constant_term())
}

fn poly_slot(p: &mut Parser) -> Result<UniPoly> {
    let pos = p.pos();
    let e = p.expr()?;
    let v: CommPoly = eval(&e, &Ctx::Comm(vars_of(&["y"])))?;
    v.to_uni(0).ok_or_else(|| err(pos, "expected a polynomial in y"))
}

fn elementary(p: &mut Parser) -> Result<ElementaryAut> {
    let pos = p.pos();
    let name = p.ident()?;
    let bad = |e: Error| err(pos, e.to_string());
    match name.as_str() {
        "tau" => Ok(ElementaryAut::tau()),
        "id" => Ok(ElementaryAut::identity()),
        "affine" => {
            p.expect('(')?;
            let mut s = Vec::with_capacity(6);
            for k in 0..6 {
                if k == 3 {
                    p.expect(';')?;
                } else if k > 0 {
                    p.expect(',')?;
                }
                s.push(scalar_slot(p)?);
            }
            p.expect(')')?;
            let [a, c, e, b, d, f]: [Scalar; 6] = s.try_into().expect("six slots");
            ElementaryAut::affine(a, c, e, b, d, f).map_err(bad)
        }
        "tri" => {
            p.expect('(')?;
            let alpha = scalar_slot(p)?;
            p.expect(';')?;
            let q = poly_slot(p)?;
            p.expect(';')?;
            let beta = scalar_slot(p)?;
            p.expect(';')?;
            let eta = scalar_slot(p)?;
            p.expect(')')?;
            ElementaryAut::triangular(alpha, q, beta, eta).map_err(bad)
        }
        other => Err(err(pos, format!("unknown automorphism '{other}'"))),
    }
}

/// `f_n . ... . f_1`, applied right to left.
pub fn parse_aut(text: &str) -> Result<AutWord> {
    let mut p = Parser::new(text, Pos { line: 1, col: 1 })?;
    let mut factors = vec![elementary(&mut p)?];
    while p.eat('.') {
        factors.push(elementary(&mut p)?);
    }
    p.expect_end()?;
    Ok(AutWord::new(factors))
}

/// Reads the `vars:` / `eq:` / `neq:` serialization. Blank lines and lines
/// starting with `#` are skipped.
pub fn parse_system(text: &str) -> Result<AlgebraicSystem> {
    let mut vars: Option<Vars> = None;
    let mut eqs = Vec::new();
    let mut neq: Option<CommPoly> = None;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let indent = line.chars().count() - trimmed.chars().count();
        let Some((key, body)) = trimmed.split_once(':') else {
            return Err(err(Pos { line: lineno, col: indent + 1 }, "expected 'vars:', 'eq:' or 'neq:'"));
        };
        let origin = Pos { line: lineno, col: indent + key.chars().count() + 2 };
        match key.trim() {
            "vars" => {
                if vars.is_some() {
                    return Err(err(Pos { line: lineno, col: indent + 1 }, "duplicate 'vars:' line"));
                }
                let names = body.split_whitespace().map(str::to_string).collect::<Vec<_>>();
                for (j, n) in names.iter().enumerate() {
                    let ok = n.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                        && n.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'');
                    if !ok || names[..j].contains(n) {
                        return Err(err(origin, format!("bad variable name '{n}'")));
                    }
                }
                vars = Some(std::sync::Arc::new(names));
            }
            k @ ("eq" | "neq") => {
                let Some(v) = &vars else {
                    return Err(err(Pos { line: lineno, col: indent + 1 }, "'vars:' must come first"));
                };
                let f = parse_at::<CommPoly>(body, origin, &Ctx::Comm(v.clone()))?;
                if k == "eq" {
                    eqs.push(f);
                } else {
                    neq = Some(match neq {
                        Some(g) => &g * &f,
                        None => f,
                    });
                }
            }
            other => {
                return Err(err(Pos { line: lineno, col: indent + 1 }, format!("unknown key '{other}'")));
            }
        }
    }
    let vars = vars.ok_or_else(|| err(Pos { line: 1, col: 1 }, "missing 'vars:' line"))?;
    AlgebraicSystem::new(vars, eqs, neq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use freeaut::freealg::Word;
    use freeaut::scalar::{int, ratio};

    fn pos_of(e: Error) -> (usize, usize) {
        match e {
            Error::Parse { line, col, .. } => (line, col),
            e => panic!("not a parse error: {e}"),
        }
    }

    #[test]
    fn commutator_square_expands() {
        let u = parse_free("[x,y]^2").unwrap();
        let w = |s: &str, c: i64| FreePoly::monomial(Word::parse(s), int(c));
        let expected = [w("xyxy", 1), w("xyyx", -1), w("yxxy", -1), w("yxyx", 1)]
            .iter()
            .fold(FreePoly::zero(), |a, b| &a + b);
        assert_eq!(u, expected);
        assert_eq!(u.num_terms(), 4);
    }

    #[test]
    fn commutative_literal() {
        let u = parse_comm("x^2*y + 1/2*y").unwrap();
        let x = CommPoly::x();
        let y = CommPoly::y();
        assert_eq!(u, &(&x.pow(2).unwrap() * &y) + &y.scale(&ratio(1, 2)));
    }

    #[test]
    fn implicit_multiplication() {
        assert_eq!(parse_comm("2x y").unwrap(), parse_comm("2*x*y").unwrap());
        assert_eq!(parse_free("xyx").unwrap(), parse_free("x*y*x").unwrap());
        assert_eq!(parse_free("2 (x + y) x").unwrap(), parse_free("2*x^2 + 2*y*x").unwrap());
        assert_eq!(parse_free("C").unwrap(), FreePoly::commutator_xy());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert_eq!(pos_of(parse_free("x**y").unwrap_err()), (1, 3));
        assert_eq!(pos_of(parse_free("x^-1").unwrap_err()), (1, 3));
        assert_eq!(pos_of(parse_free("x^y").unwrap_err()), (1, 3));
        assert_eq!(pos_of(parse_free("x + z").unwrap_err()), (1, 5));
        assert_eq!(pos_of(parse_free("(x + y").unwrap_err()), (1, 7));
        assert_eq!(pos_of(parse_free("1/0").unwrap_err()), (1, 3));
        assert_eq!(pos_of(parse_free("x $ y").unwrap_err()), (1, 3));
    }

    #[test]
    fn automorphism_literals() {
        let w = parse_aut("tri(1; y^2; 1; 0) . tau").unwrap();
        assert_eq!(w.to_string(), "tri(1; y^2; 1; 0) . tau");
        let a = parse_aut("affine(1,2,-1/2; 0,1,3)").unwrap();
        assert_eq!(a.to_string(), "affine(1,2,-1/2; 0,1,3)");
        assert!(parse_aut("affine(1,1,0; 1,1,0)").is_err());
        assert!(parse_aut("tri(0; y; 1; 0)").is_err());
        assert_eq!(pos_of(parse_aut("tau . foo").unwrap_err()), (1, 7));
        assert!(parse_aut("tri(1; x; 1; 0)").is_err());
    }

    #[test]
    fn systems() {
        let s = parse_system("vars: t1 t2\neq: t1^2 + 1\neq: t1 - t2\nneq: t2\n").unwrap();
        assert_eq!(s.to_string(), "vars: t1 t2\neq: t1^2 + 1\neq: t1 - t2\nneq: t2\n");
        assert_eq!(parse_system(&s.to_string()).unwrap(), s);
        assert_eq!(pos_of(parse_system("vars: t\neq: t + s\n").unwrap_err()), (2, 9));
        assert!(parse_system("eq: t\n").is_err());
    }

    #[test]
    fn names_in_order() {
        let v = names_in(["b^2 + a", "c*a"]).unwrap();
        assert_eq!(v.as_slice(), ["b", "a", "c"]);
    }
}
