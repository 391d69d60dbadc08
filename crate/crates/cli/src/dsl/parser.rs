use std::fmt;

use cjet_core::FieldSpec;
use num_bigint::BigInt;
use thiserror::Error;

use super::lexer::{Lexer, Token, TokenKind};
use super::{CoeffDecl, DerivativeRef, Description, Expr, OrdDecl, OrdTarget, UnknownDecl};

/// Where parsing stopped and what would have been accepted there.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: expected ", self.line, self.col)?;
        match self.expected.as_slice() {
            [] => write!(f, "something else")?,
            [one] => write!(f, "{one}")?,
            [init @ .., last] => write!(f, "{} or {last}", init.join(", "))?,
        }
        write!(f, ", found {}", self.found)
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

fn quoted(s: &str) -> String {
    format!("`{s}`")
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, k: usize) -> &TokenKind {
        &self.tokens[(self.pos + k).min(self.tokens.len() - 1)].kind
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> Result<T, SyntaxError> {
        let t = self.peek();
        Err(SyntaxError {
            line: t.line,
            col: t.col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.kind.to_string(),
        })
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().kind, TokenKind::Ident(s) if s == kw)
    }

    fn at_sym(&self, c: char) -> bool {
        self.peek().kind == TokenKind::Sym(c)
    }

    fn keyword(&mut self, kw: &str) -> Result<(), SyntaxError> {
        if self.at_keyword(kw) {
            self.advance();
            Ok(())
        } else {
            self.error(&[&quoted(kw)])
        }
    }

    fn sym(&mut self, c: char) -> Result<(), SyntaxError> {
        if self.at_sym(c) {
            self.advance();
            Ok(())
        } else {
            self.error(&[&quoted(&c.to_string())])
        }
    }

    fn name(&mut self) -> Result<String, SyntaxError> {
        match &self.peek().kind {
            TokenKind::Ident(s) => {
                let s = s.clone();
                self.advance();
                Ok(s)
            }
            _ => self.error(&["a name"]),
        }
    }

    fn int(&mut self) -> Result<BigInt, SyntaxError> {
        match &self.peek().kind {
            TokenKind::Int(n) => {
                let n = n.clone();
                self.advance();
                Ok(n)
            }
            _ => self.error(&["an integer"]),
        }
    }

    fn small_int<T: TryFrom<BigInt>>(&mut self, what: &str) -> Result<T, SyntaxError> {
        let here = self.pos;
        let n = self.int()?;
        T::try_from(n).or_else(|_| {
            self.pos = here;
            self.error(&[what])
        })
    }

    fn description(&mut self) -> Result<Description, SyntaxError> {
        self.keyword("field")?;
        let field = if self.at_keyword("Q") {
            self.advance();
            FieldSpec::Rational
        } else if self.at_keyword("Fp") {
            self.advance();
            FieldSpec::PrimeField { modulus: self.small_int("a modulus below 2^64")? }
        } else {
            return self.error(&["`Q`", "`Fp`"]);
        };
        self.sym(';')?;

        self.keyword("vars")?;
        let mut vars = vec![self.name()?];
        while !self.at_sym(';') {
            if self.at_sym(',') {
                self.advance();
            }
            match &self.peek().kind {
                TokenKind::Ident(_) => vars.push(self.name()?),
                _ => return self.error(&["a name", "`;`"]),
            }
        }
        self.sym(';')?;

        let mut unknowns = Vec::new();
        while self.at_keyword("unknown") || unknowns.is_empty() {
            self.keyword("unknown")?;
            let name = self.name()?;
            self.keyword("in")?;
            let support = self.name_list()?;
            self.sym(';')?;
            unknowns.push(UnknownDecl { name, support });
        }

        let mut desc = Description {
            field,
            vars,
            unknowns,
            equations: Vec::new(),
            ords: Vec::new(),
            coeffs: Vec::new(),
            order: None,
        };
        loop {
            if self.at_keyword("eq") {
                self.advance();
                desc.equations.push(self.expr()?);
            } else if self.at_keyword("ord") {
                self.advance();
                let target = if self.at_derivative() {
                    OrdTarget::Derivative(self.derivative()?)
                } else {
                    OrdTarget::Unknown(self.name()?)
                };
                let order = self.small_int("an order below 2^32")?;
                desc.ords.push(OrdDecl { target, order });
            } else if self.at_keyword("coeff") {
                self.advance();
                let unknown = self.name()?;
                self.sym('[')?;
                let mut exponent = Vec::new();
                while !self.at_sym(']') {
                    if !exponent.is_empty() {
                        self.sym(',')?;
                    }
                    exponent.push(self.small_int("an exponent below 2^32")?);
                }
                self.sym(']')?;
                self.sym('=')?;
                let value = self.expr()?;
                desc.coeffs.push(CoeffDecl { unknown, exponent, value });
            } else if self.at_keyword("order") && desc.order.is_none() {
                self.advance();
                desc.order = Some(self.small_int("an order below 2^32")?);
            } else if self.peek().kind == TokenKind::Eof && !desc.equations.is_empty() {
                return Ok(desc);
            } else {
                let mut expected = vec!["`eq`", "`ord`", "`coeff`"];
                if desc.order.is_none() {
                    expected.push("`order`");
                }
                if !desc.equations.is_empty() {
                    expected.push("end of input");
                }
                return self.error(&expected);
            }
            self.sym(';')?;
        }
    }

    fn name_list(&mut self) -> Result<Vec<String>, SyntaxError> {
        self.sym('[')?;
        let mut out = Vec::new();
        while !self.at_sym(']') {
            if !out.is_empty() {
                if !self.at_sym(',') {
                    return self.error(&["`,`", "`]`"]);
                }
                self.advance();
            }
            out.push(self.name()?);
        }
        self.sym(']')?;
        Ok(out)
    }

    fn at_derivative(&self) -> bool {
        self.at_keyword("D") && *self.peek_at(1) == TokenKind::Sym('[')
    }

    fn derivative(&mut self) -> Result<DerivativeRef, SyntaxError> {
        self.keyword("D")?;
        self.sym('[')?;
        let function = self.name()?;
        self.sym(',')?;
        let mut factors = Vec::new();
        loop {
            let var = self.name()?;
            let k = if self.at_sym('^') {
                self.advance();
                self.small_int("an exponent below 2^32")?
            } else {
                1
            };
            factors.push((var, k));
            if self.at_sym(']') {
                self.advance();
                return Ok(DerivativeRef { function, factors });
            }
            if !matches!(self.peek().kind, TokenKind::Ident(_)) {
                return self.error(&["a name", "`]`"]);
            }
        }
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.term()?;
        loop {
            if self.at_sym('+') {
                self.advance();
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.at_sym('-') {
                self.advance();
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.unary()?;
        while self.at_sym('*') {
            self.advance();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, SyntaxError> {
        if self.at_sym('-') {
            self.advance();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.at_sym('^') {
            self.advance();
            return Ok(Expr::Pow(Box::new(base), self.small_int("an exponent below 2^32")?));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, SyntaxError> {
        match &self.peek().kind {
            TokenKind::Int(_) => {
                let n = self.int()?;
                if self.at_sym('/') {
                    self.advance();
                    return Ok(Expr::Frac(n, self.int()?));
                }
                Ok(Expr::Int(n))
            }
            TokenKind::Ident(_) if self.at_derivative() => Ok(Expr::Derivative(self.derivative()?)),
            TokenKind::Ident(_) => Ok(Expr::Name(self.name()?)),
            TokenKind::Sym('(') => {
                self.advance();
                let e = self.expr()?;
                self.sym(')')?;
                Ok(e)
            }
            _ => self.error(&["a number", "a name", "`D[`", "`(`", "`-`"]),
        }
    }
}

fn parser(src: &str) -> Result<Parser, SyntaxError> {
    Ok(Parser { tokens: Lexer::new(src).tokenize()?, pos: 0 })
}

pub fn parse(src: &str) -> Result<Description, SyntaxError> {
    parser(src)?.description()
}

/// Parses a lone polynomial expression.
pub fn parse_expr(src: &str) -> Result<Expr, SyntaxError> {
    let mut p = parser(src)?;
    let e = p.expr()?;
    if p.peek().kind != TokenKind::Eof {
        return p.error(&["an operator", "end of input"]);
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn name(s: &str) -> Box<Expr> {
        Box::new(Expr::Name(s.into()))
    }

    #[test]
    fn precedence() {
        let e = parse_expr("-x^2 + 3*y - 1/2").unwrap();
        let want = Expr::Sub(
            Box::new(Expr::Add(
                Box::new(Expr::Neg(Box::new(Expr::Pow(name("x"), 2)))),
                Box::new(Expr::Mul(Box::new(Expr::Int(3.into())), name("y"))),
            )),
            Box::new(Expr::Frac(1.into(), 2.into())),
        );
        assert_eq!(e, want);
    }

    #[test]
    fn derivative_terms() {
        let e = parse_expr("D[z1, x1^2 x2] - D").unwrap();
        let d = DerivativeRef { function: "z1".into(), factors: vec![("x1".into(), 2), ("x2".into(), 1)] };
        assert_eq!(e, Expr::Sub(Box::new(Expr::Derivative(d)), name("D")));
    }

    #[test]
    fn full_description() {
        let src = "field Fp 5;\nvars x1, x2;\nunknown Y1 in [x1];\nunknown Y2 in [];\neq Y1*Y2 - x1;\nord Y1 1;\norder 3;\n";
        let d = parse(src).unwrap();
        assert_eq!(d.field, FieldSpec::PrimeField { modulus: 5 });
        assert_eq!(d.vars, vec!["x1", "x2"]);
        assert_eq!(d.unknowns[1].support, Vec::<String>::new());
        assert_eq!(d.order, Some(3));
        assert_eq!(d.ords, vec![OrdDecl { target: OrdTarget::Unknown("Y1".into()), order: 1 }]);
    }

    #[test]
    fn errors_point_at_the_problem() {
        let e = parse("field Q;\nvars x1;\nunknown Y1 in [x1];\neq Y1 - ;\n").unwrap_err();
        assert_eq!((e.line, e.col), (4, 9));
        assert!(e.expected.contains(&"a name".to_string()));
        let e = parse("field R;").unwrap_err();
        assert_eq!(e.to_string(), "line 1, column 7: expected `Q` or `Fp`, found `R`");
        let e = parse("field Q; vars x; unknown Y in [x];").unwrap_err();
        assert_eq!(e.found, "end of input");
        let e = parse("field Q; vars x; unknown Y in [x]; eq Y; order 2; order 3;").unwrap_err();
        assert!(!e.expected.contains(&"`order`".to_string()));
    }

    #[test]
    fn oversized_numbers_are_rejected() {
        assert!(parse_expr("x^99999999999").is_err());
        assert!(parse("field Fp 99999999999999999999999;").is_err());
    }
}
