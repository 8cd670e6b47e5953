//! Scalar expressions for inline field presets, e.g. `0.3cos(x1)` or
//! `1 + z^2/2`. Juxtaposition multiplies.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::manifolds::{ManifoldKind, ManifoldPoint};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Var {
    Coord(usize),
    Ambient(usize),
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    Var(Var),
    Neg(Box<Node>),
    Bin(char, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    fn lookup(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "log" | "ln" => Func::Log,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Exp => x.exp(),
            Func::Log => x.ln(),
            Func::Sqrt => x.sqrt(),
            Func::Abs => x.abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // exponent only when followed by a digit or sign+digit, so `2e` stays `2·e`
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Num(s.parse().map_err(|_| Error::Input(format!("bad number '{s}' in '{src}'")))?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            // letters then digits, so `x1x2` reads as `x1 x2`
            while i < chars.len() && (chars[i].is_alphabetic() || chars[i] == '_') {
                i += 1;
            }
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else {
            out.push(match c {
                '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => return Err(Error::Input(format!("unexpected '{c}' in '{src}'"))),
            });
            i += 1;
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    kind: ManifoldKind,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Input(format!("{msg} in expression '{}'", self.src))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op(op @ ('*' | '/'))) => {
                    let op = *op;
                    self.pos += 1;
                    lhs = Node::Bin(op, Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Num(_) | Tok::Ident(_) | Tok::LParen) => {
                    lhs = Node::Bin('*', Box::new(lhs), Box::new(self.power()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Node> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(Node::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            return Ok(Node::Bin('^', Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        match self.next() {
            Some(Tok::Num(v)) => Ok(Node::Num(v)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(self.err("missing ')'")),
                }
            }
            Some(Tok::Ident(name)) => {
                if let Some(f) = Func::lookup(&name) {
                    if self.next() != Some(Tok::LParen) {
                        return Err(self.err(&format!("'{name}' needs parentheses")));
                    }
                    let arg = self.expr()?;
                    if self.next() != Some(Tok::RParen) {
                        return Err(self.err("missing ')'"));
                    }
                    return Ok(Node::Call(f, Box::new(arg)));
                }
                match name.as_str() {
                    "pi" => Ok(Node::Num(std::f64::consts::PI)),
                    "e" => Ok(Node::Num(std::f64::consts::E)),
                    _ => Ok(Node::Var(self.variable(&name)?)),
                }
            }
            _ => Err(self.err("unexpected end or operator")),
        }
    }

    fn variable(&self, name: &str) -> Result<Var> {
        let v = match (self.kind, name) {
            (ManifoldKind::Circle, "theta" | "x1" | "x") => Var::Coord(0),
            (ManifoldKind::Torus2, "x1") => Var::Coord(0),
            (ManifoldKind::Torus2, "x2") => Var::Coord(1),
            (ManifoldKind::Sphere2, "theta") => Var::Coord(0),
            (ManifoldKind::Sphere2, "phi") => Var::Coord(1),
            (ManifoldKind::Sphere2, "x" | "x1") => Var::Ambient(0),
            (ManifoldKind::Sphere2, "y" | "x2") => Var::Ambient(1),
            (ManifoldKind::Sphere2, "z" | "x3") => Var::Ambient(2),
            _ => return Err(self.err(&format!("unknown variable '{name}' on {}", self.kind))),
        };
        Ok(v)
    }
}

fn eval(node: &Node, p: &ManifoldPoint, amb: &[f64; 3]) -> f64 {
    match node {
        Node::Num(v) => *v,
        Node::Var(Var::Coord(i)) => p.coords()[*i],
        Node::Var(Var::Ambient(i)) => amb[*i],
        Node::Neg(a) => -eval(a, p, amb),
        Node::Call(f, a) => f.apply(eval(a, p, amb)),
        Node::Bin(op, a, b) => {
            let (x, y) = (eval(a, p, amb), eval(b, p, amb));
            match op {
                '+' => x + y,
                '-' => x - y,
                '*' => x * y,
                '/' => x / y,
                _ => x.powf(y),
            }
        }
    }
}

/// A parsed expression over the coordinates of one model.
#[derive(Clone)]
pub struct Expr {
    root: Arc<Node>,
    src: String,
    kind: ManifoldKind,
}

impl Expr {
    /// Variables: `theta` (circle); `x1, x2` (torus); `theta, phi` and ambient
    /// `x, y, z` (sphere). Functions: sin cos tan exp log sqrt abs; constants pi, e.
    pub fn parse(src: &str, kind: ManifoldKind) -> Result<Self> {
        let toks = lex(src)?;
        if toks.is_empty() {
            return Err(Error::Input("empty expression".into()));
        }
        let mut p = Parser { toks, pos: 0, kind, src };
        let root = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(p.err("trailing input"));
        }
        Ok(Self { root: Arc::new(root), src: src.to_string(), kind })
    }

    pub fn source(&self) -> &str {
        &self.src
    }

    pub fn eval(&self, p: &ManifoldPoint) -> f64 {
        debug_assert_eq!(p.kind(), self.kind);
        let amb = p.ambient().unwrap_or([0.0; 3]);
        eval(&self.root, p, &amb)
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({})", self.src)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus(src: &str, x1: f64, x2: f64) -> f64 {
        Expr::parse(src, ManifoldKind::Torus2).unwrap().eval(&ManifoldPoint::torus(x1, x2))
    }

    #[test]
    fn implicit_products_and_precedence() {
        assert!((torus("0.3cos(x1)", 0.5, 0.0) - 0.3 * 0.5f64.cos()).abs() < 1e-15);
        assert_eq!(torus("2x1x2 + 1", 3.0, 4.0), 25.0);
        assert_eq!(torus("-x1^2", 3.0, 0.0), -9.0);
        assert_eq!(torus("2^3^2", 0.0, 0.0), 512.0);
        assert_eq!(torus("1e-1 * 10", 0.0, 0.0), 1.0);
        assert!((torus("2e", 0.0, 0.0) - 2.0 * std::f64::consts::E).abs() < 1e-15);
        assert_eq!(torus("(x1 - x2)/2", 5.0, 1.0), 2.0);
    }

    #[test]
    fn sphere_ambient_variables() {
        let e = Expr::parse("1 + z^2/2", ManifoldKind::Sphere2).unwrap();
        let p = ManifoldPoint::sphere(0.6, 1.0).unwrap();
        assert!((e.eval(&p) - (1.0 + 0.6f64.cos().powi(2) / 2.0)).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        for bad in ["", "cos x1", "(x1", "x3", "1 +", "x1 $ 2"] {
            assert!(Expr::parse(bad, ManifoldKind::Torus2).is_err(), "{bad}");
        }
    }
}
