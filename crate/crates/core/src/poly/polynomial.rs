use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::{Monomial, PolyError, Var, VariableRegistry};
use crate::field::Field;

/// Sparse polynomial: a map from monomials to nonzero coefficients.
///
/// The zero polynomial has no terms. Iteration follows the graded
/// lexicographic order of [`Monomial`], ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial<F: Field> {
    field: F,
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> Polynomial<F> {
    pub fn zero(field: &F) -> Self {
        Polynomial {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &F, c: F::Elem) -> Self {
        Self::monomial(field, Monomial::one(), c)
    }

    pub fn one(field: &F) -> Self {
        Self::constant(field, field.one())
    }

    pub fn var(field: &F, v: Var) -> Self {
        Self::monomial(field, Monomial::var(v), field.one())
    }

    pub fn monomial(field: &F, m: Monomial, c: F::Elem) -> Self {
        let mut p = Self::zero(field);
        p.add_term(m, c);
        p
    }

    pub fn from_terms(field: &F, terms: impl IntoIterator<Item = (Monomial, F::Elem)>) -> Self {
        let mut p = Self::zero(field);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, F::Elem)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> F::Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn constant_term(&self) -> F::Elem {
        self.coefficient(&Monomial::one())
    }

    /// `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// Total degree at most one.
    pub fn is_affine(&self) -> bool {
        self.terms.keys().all(|m| m.degree() <= 1)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// Adds `c·m` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: F::Elem) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = self.field.add(existing, &c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_field(&self, other: &Self) -> Result<(), PolyError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(PolyError::FieldMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_field(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_field(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), self.field.neg(c));
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_field(other)?;
        Ok(self.mul_filtered(other, |_| true))
    }

    /// Product keeping only monomials accepted by `keep`.
    ///
    /// `keep` must reject every multiple of a rejected monomial (an order
    /// ideal complement), which is what makes truncated products associative.
    pub fn mul_filtered(&self, other: &Self, keep: impl Fn(&Monomial) -> bool) -> Self {
        let mut out = Self::zero(&self.field);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                if keep(&m) {
                    out.add_term(m, self.field.mul(ca, cb));
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        if c.is_zero() {
            return Self::zero(&self.field);
        }
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, a)| {
                let p = self.field.mul(a, c);
                (!p.is_zero()).then(|| (m.clone(), p))
            })
            .collect();
        Polynomial {
            field: self.field.clone(),
            terms,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        self.pow_filtered(e, |_| true)
    }

    pub fn pow_filtered(&self, e: u32, keep: impl Fn(&Monomial) -> bool + Copy) -> Self {
        let mut acc = Self::one(&self.field);
        for _ in 0..e {
            acc = acc.mul_filtered(self, keep);
        }
        acc
    }

    /// Drops every term rejected by `keep`.
    pub fn retain(&self, keep: impl Fn(&Monomial) -> bool) -> Self {
        Polynomial {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Simultaneous substitution `v ↦ σ(v)`, fully expanded.
    pub fn substitute(&self, sigma: &HashMap<Var, Polynomial<F>>) -> Result<Self, PolyError> {
        self.substitute_filtered(sigma, |_| true)
    }

    /// Substitution that discards monomials rejected by `keep` while expanding.
    /// The same ideal condition as [`Polynomial::mul_filtered`] applies.
    pub fn substitute_filtered(
        &self,
        sigma: &HashMap<Var, Polynomial<F>>,
        keep: impl Fn(&Monomial) -> bool + Copy,
    ) -> Result<Self, PolyError> {
        if sigma.values().any(|p| p.field != self.field) {
            return Err(PolyError::FieldMismatch);
        }
        let mut powers: HashMap<(Var, u32), Polynomial<F>> = HashMap::new();
        let mut out = Self::zero(&self.field);
        for (m, c) in &self.terms {
            let (substituted, kept) = m.split(|v| sigma.contains_key(&v));
            let mut acc = Self::monomial(&self.field, kept, c.clone()).retain(keep);
            for &(v, e) in substituted.powers() {
                if acc.is_zero() {
                    break;
                }
                let pw = powers
                    .entry((v, e))
                    .or_insert_with(|| sigma[&v].pow_filtered(e, keep));
                acc = acc.mul_filtered(pw, keep);
            }
            for (mm, cc) in acc.terms {
                out.add_term(mm, cc);
            }
        }
        Ok(out)
    }

    /// Replaces the listed variables by field values.
    pub fn partial_evaluate(&self, values: &HashMap<Var, F::Elem>) -> Self {
        let mut out = Self::zero(&self.field);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for &(v, e) in m.powers() {
                match values.get(&v) {
                    Some(val) => coeff = self.field.mul(&coeff, &self.field.pow(val, e)),
                    None => rest.push((v, e)),
                }
            }
            out.add_term(Monomial::from_pairs(rest), coeff);
        }
        out
    }

    pub fn evaluate(&self, point: impl Fn(Var) -> Option<F::Elem>) -> Result<F::Elem, PolyError> {
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.powers() {
                let val = point(v).ok_or(PolyError::MissingAssignment(v))?;
                t = self.field.mul(&t, &self.field.pow(&val, e));
            }
            acc = self.field.add(&acc, &t);
        }
        Ok(acc)
    }

    pub fn evaluate_map(&self, point: &HashMap<Var, F::Elem>) -> Result<F::Elem, PolyError> {
        self.evaluate(|v| point.get(&v).cloned())
    }

    /// Groups the polynomial as an element of `K[rest][outer]`: each key is a
    /// monomial in the variables selected by `is_outer`, each value the
    /// polynomial in the remaining variables multiplying it.
    pub fn split_coefficients(&self, is_outer: impl Fn(Var) -> bool) -> BTreeMap<Monomial, Self> {
        let mut out: BTreeMap<Monomial, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (outer, inner) = m.split(&is_outer);
            out.entry(outer)
                .or_insert_with(|| Self::zero(&self.field))
                .add_term(inner, c.clone());
        }
        out
    }

    /// Coefficient of `beta` when the polynomial is read as a polynomial in
    /// the variables selected by `is_series` with coefficients in the others.
    pub fn coefficient_extract(
        &self,
        beta: &Monomial,
        is_series: impl Fn(Var) -> bool,
    ) -> Result<Self, PolyError> {
        if !beta.vars().all(&is_series) {
            return Err(PolyError::NotSeriesMonomial);
        }
        let mut out = Self::zero(&self.field);
        for (m, c) in &self.terms {
            let (outer, inner) = m.split(&is_series);
            if &outer == beta {
                out.add_term(inner, c.clone());
            }
        }
        Ok(out)
    }

    /// k-th formal partial derivative in `v`.
    pub fn partial_derivative(&self, v: Var, k: u32) -> Self {
        let mut out = Self::zero(&self.field);
        for (m, c) in &self.terms {
            if let Some(lowered) = m.lower(v, k) {
                let e = m.exponent(v);
                let factor = falling_factorial(&self.field, e, k);
                out.add_term(lowered, self.field.mul(c, &factor));
            }
        }
        out
    }

    pub fn rename(&self, map: impl Fn(Var) -> Var) -> Self {
        Self::from_terms(
            &self.field,
            self.terms.iter().map(|(m, c)| (m.rename(&map), c.clone())),
        )
    }

    /// For an affine polynomial, the linear coefficients and the constant.
    pub fn affine_parts(&self) -> Option<(Vec<(Var, F::Elem)>, F::Elem)> {
        let mut linear = Vec::new();
        let mut constant = self.field.zero();
        for (m, c) in &self.terms {
            match m.powers() {
                [] => constant = c.clone(),
                [(v, 1)] => linear.push((*v, c.clone())),
                _ => return None,
            }
        }
        Some((linear, constant))
    }

    pub fn to_text(&self, registry: &VariableRegistry) -> String {
        format_polynomial(self, registry)
    }
}

/// `e·(e-1)···(e-k+1)` as a field element.
pub(crate) fn falling_factorial<F: Field>(field: &F, e: u32, k: u32) -> F::Elem {
    (0..k).fold(field.one(), |acc, i| {
        field.mul(&acc, &field.from_i64(e as i64 - i as i64))
    })
}

/// Canonical text: terms in descending graded-lex order, e.g. `3*x1^2*Y1 - 1/2*x2`.
pub fn format_polynomial<F: Field>(p: &Polynomial<F>, registry: &VariableRegistry) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().rev().enumerate() {
        let text = c.to_string();
        let (negative, magnitude) = match text.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, text),
        };
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let factors: Vec<String> = m
            .powers()
            .iter()
            .map(|&(v, e)| {
                if e == 1 {
                    registry.name(v).to_string()
                } else {
                    format!("{}^{}", registry.name(v), e)
                }
            })
            .collect();
        if factors.is_empty() {
            out.push_str(&magnitude);
        } else {
            if magnitude != "1" {
                out.push_str(&magnitude);
                out.push('*');
            }
            out.push_str(&factors.join("*"));
        }
    }
    out
}

impl<F: Field> Add for &Polynomial<F> {
    type Output = Polynomial<F>;

    fn add(self, rhs: Self) -> Polynomial<F> {
        self.checked_add(rhs).expect("polynomials over the same field")
    }
}

impl<F: Field> Sub for &Polynomial<F> {
    type Output = Polynomial<F>;

    fn sub(self, rhs: Self) -> Polynomial<F> {
        self.checked_sub(rhs).expect("polynomials over the same field")
    }
}

impl<F: Field> Mul for &Polynomial<F> {
    type Output = Polynomial<F>;

    fn mul(self, rhs: Self) -> Polynomial<F> {
        self.checked_mul(rhs).expect("polynomials over the same field")
    }
}

impl<F: Field> Neg for &Polynomial<F> {
    type Output = Polynomial<F>;

    fn neg(self) -> Polynomial<F> {
        self.scale(&self.field.neg(&self.field.one()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::poly::VarClass;
    use num_rational::BigRational;

    fn setup() -> (VariableRegistry, Var, Var, Var, Var) {
        let mut reg = VariableRegistry::new();
        let x1 = reg.register("x1", VarClass::Series).unwrap();
        let x2 = reg.register("x2", VarClass::Series).unwrap();
        let y1 = reg.register("Y1", VarClass::Unknown).unwrap();
        let y2 = reg.register("Y2", VarClass::Unknown).unwrap();
        (reg, x1, x2, y1, y2)
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn ring_examples() {
        let (reg, x1, x2, y1, _) = setup();
        let f = Rationals;
        let a = Polynomial::var(&f, x1);
        let b = Polynomial::var(&f, x2);
        let prod = &(&a + &b) * &(&a - &b);
        assert_eq!(prod.to_text(&reg), "x1^2 - x2^2");
        assert!((&prod + &(-&prod)).is_zero());

        let f3 = PrimeField::new(3).unwrap();
        let m = Polynomial::monomial(&f3, Monomial::from_pairs([(x1, 1), (y1, 1)]), 1);
        assert!(m.scale(&f3.from_i64(3)).is_zero());

        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(
            Polynomial::var(&f3, x1).checked_add(&Polynomial::var(&f5, x1)),
            Err(PolyError::FieldMismatch)
        );
    }

    #[test]
    fn substitution_examples() {
        let (reg, x1, x2, y1, _) = setup();
        let f = Rationals;
        let y = Polynomial::var(&f, y1);
        let sq = y.pow(2);
        let sigma = HashMap::from([(y1, &Polynomial::var(&f, x1) + &Polynomial::var(&f, x2))]);
        assert_eq!(sq.substitute(&sigma).unwrap().to_text(&reg), "x1^2 + 2*x1*x2 + x2^2");
        assert_eq!(sq.substitute(&HashMap::new()).unwrap(), sq);
        let lin = &y - &Polynomial::var(&f, x1);
        let sigma = HashMap::from([(y1, Polynomial::var(&f, x1))]);
        assert!(lin.substitute(&sigma).unwrap().is_zero());
    }

    #[test]
    fn coefficient_examples() {
        let (reg, x1, x2, y1, y2) = setup();
        let f = Rationals;
        let is_x = |v: Var| v == x1 || v == x2;
        // f = Y1*x1 - x1, coefficient of x1 is Y1 - 1
        let p = &(&Polynomial::var(&f, y1) * &Polynomial::var(&f, x1)) - &Polynomial::var(&f, x1);
        let c = p.coefficient_extract(&Monomial::var(x1), is_x).unwrap();
        assert_eq!(c.to_text(&reg), "Y1 - 1");
        // f = x1^2*Y1 + x2, coefficient of x2 is 1
        let p = &Polynomial::monomial(&f, Monomial::from_pairs([(x1, 2), (y1, 1)]), q(1))
            + &Polynomial::var(&f, x2);
        let c = p.coefficient_extract(&Monomial::var(x2), is_x).unwrap();
        assert_eq!(c, Polynomial::one(&f));
        // f = Y1*Y2, coefficient of x1 is 0
        let p = &Polynomial::var(&f, y1) * &Polynomial::var(&f, y2);
        assert!(p.coefficient_extract(&Monomial::var(x1), is_x).unwrap().is_zero());
        assert_eq!(
            p.coefficient_extract(&Monomial::var(y1), is_x),
            Err(PolyError::NotSeriesMonomial)
        );
    }

    #[test]
    fn derivative_examples() {
        let (reg, x1, x2, _, _) = setup();
        let f = Rationals;
        let cube = Polynomial::monomial(&f, Monomial::var_pow(x1, 3), q(1));
        assert_eq!(cube.partial_derivative(x1, 1).to_text(&reg), "3*x1^2");
        let mixed = Polynomial::monomial(&f, Monomial::from_pairs([(x1, 1), (x2, 1)]), q(1));
        assert!(mixed.partial_derivative(x1, 2).is_zero());
        let f2 = PrimeField::new(2).unwrap();
        let sq = Polynomial::monomial(&f2, Monomial::var_pow(x1, 2), 1);
        assert!(sq.partial_derivative(x1, 1).is_zero());
    }

    #[test]
    fn evaluation_examples() {
        let (_, x1, x2, _, _) = setup();
        let f = Rationals;
        let p = &(&(&Polynomial::var(&f, x1) - &Polynomial::constant(&f, q(2)))
            * &Polynomial::var(&f, x2))
            - &Polynomial::one(&f);
        let at = |a: i64, b: i64| HashMap::from([(x1, q(a)), (x2, q(b))]);
        assert_eq!(p.evaluate_map(&at(3, 1)), Ok(q(0)));
        assert_eq!(p.evaluate_map(&at(2, 1)), Ok(q(-1)));
        assert_eq!(
            Polynomial::var(&f, x1).evaluate_map(&HashMap::new()),
            Err(PolyError::MissingAssignment(x1))
        );
    }

    #[test]
    fn text_form() {
        let (reg, x1, x2, y1, _) = setup();
        let f = Rationals;
        let p = Polynomial::from_terms(
            &f,
            [
                (Monomial::from_pairs([(x1, 2), (y1, 1)]), q(3)),
                (Monomial::var(x2), BigRational::new((-1).into(), 2.into())),
            ],
        );
        assert_eq!(p.to_text(&reg), "3*x1^2*Y1 - 1/2*x2");
        assert_eq!(Polynomial::<Rationals>::zero(&f).to_text(&reg), "0");
        assert_eq!((-&Polynomial::one(&f)).to_text(&reg), "-1");
    }
}
