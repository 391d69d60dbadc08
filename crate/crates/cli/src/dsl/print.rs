use std::fmt;

use cjet_core::FieldSpec;

use super::{DerivativeRef, Description, Expr, OrdTarget};

// binding strength: sum < product < unary < power < atom
const SUM: u8 = 0;
const PRODUCT: u8 = 1;
const UNARY: u8 = 2;
const ATOM: u8 = 4;

fn level(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => SUM,
        Expr::Mul(..) => PRODUCT,
        Expr::Neg(..) => UNARY,
        Expr::Pow(..) => 3,
        _ => ATOM,
    }
}

fn at(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if level(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for DerivativeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D[{},", self.function)?;
        for (v, k) in &self.factors {
            if *k == 1 {
                write!(f, " {v}")?;
            } else {
                write!(f, " {v}^{k}")?;
            }
        }
        write!(f, "]")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Frac(n, d) => write!(f, "{n}/{d}"),
            Expr::Name(s) => write!(f, "{s}"),
            Expr::Derivative(d) => write!(f, "{d}"),
            Expr::Neg(e) => {
                write!(f, "-")?;
                at(f, e, UNARY)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                at(f, a, SUM)?;
                write!(f, "{}", if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                at(f, b, PRODUCT)
            }
            Expr::Mul(a, b) => {
                at(f, a, PRODUCT)?;
                write!(f, "*")?;
                at(f, b, UNARY)
            }
            Expr::Pow(a, k) => {
                at(f, a, ATOM)?;
                write!(f, "^{k}")
            }
        }
    }
}

impl fmt::Display for Description {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.field {
            FieldSpec::Rational => writeln!(f, "field Q;")?,
            FieldSpec::PrimeField { modulus } => writeln!(f, "field Fp {modulus};")?,
        }
        writeln!(f, "vars {};", self.vars.join(" "))?;
        for u in &self.unknowns {
            writeln!(f, "unknown {} in [{}];", u.name, u.support.join(", "))?;
        }
        for e in &self.equations {
            writeln!(f, "eq {e};")?;
        }
        for o in &self.ords {
            match &o.target {
                OrdTarget::Unknown(name) => writeln!(f, "ord {name} {};", o.order)?,
                OrdTarget::Derivative(d) => writeln!(f, "ord {d} {};", o.order)?,
            }
        }
        for c in &self.coeffs {
            let exps: Vec<String> = c.exponent.iter().map(u32::to_string).collect();
            writeln!(f, "coeff {} [{}] = {};", c.unknown, exps.join(", "), c.value)?;
        }
        if let Some(c) = self.order {
            writeln!(f, "order {c};")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse, parse_expr};

    #[test]
    fn minimal_parentheses() {
        for src in ["-(x + y)*z", "(x*y)^2", "x - (y - z)", "x - y - z", "-x^2", "a*-b", "1/2^3", "--x", "(-x)^2"] {
            assert_eq!(parse_expr(src).unwrap().to_string(), src);
        }
    }

    #[test]
    fn description_round_trip() {
        let src = "field Fp 7;\nvars x1 x2;\nunknown z1 in [x1, x2];\neq D[z1, x2 x1] - z1;\nord D[z1, x1 x2] 0;\ncoeff z1 [0, 0] = 1;\norder 4;\n";
        let d = parse(src).unwrap();
        assert_eq!(d.to_string(), src);
    }
}
