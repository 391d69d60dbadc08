//! Truncated power series with support constraints.
//!
//! A [`Jet`] of order `c` stores the coefficients of `x^α` for `|α| < c`,
//! i.e. a power series modulo the ideal `(x)^c`. Its [`ConstraintSet`] lists
//! the series variables it may depend on.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::Field;
use crate::poly::{Monomial, Polynomial, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JetError {
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("jet of order {got} cannot be used at order {needed}")]
    OrderTooLow { needed: u32, got: u32 },
    #[error("cannot truncate a jet of order {from} to the larger order {to}")]
    OrderIncrease { from: u32, to: u32 },
    #[error("exponent {0} lies outside the declared support")]
    SupportViolation(Exponent),
    #[error("expected {expected} series variables, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("variable {0} is neither a series variable nor an unknown")]
    UnexpectedVariable(Var),
    #[error("series index {0} is out of range")]
    IndexOutOfRange(usize),
}

/// The set `J` of series variables (0-based) a series may depend on.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConstraintSet(BTreeSet<usize>);

impl ConstraintSet {
    pub fn new(indices: impl IntoIterator<Item = usize>, n: usize) -> Result<Self, JetError> {
        let set: BTreeSet<usize> = indices.into_iter().collect();
        if let Some(&bad) = set.iter().find(|&&k| k >= n) {
            return Err(JetError::IndexOutOfRange(bad));
        }
        Ok(ConstraintSet(set))
    }

    pub fn full(n: usize) -> Self {
        ConstraintSet((0..n).collect())
    }

    pub fn empty() -> Self {
        ConstraintSet(BTreeSet::new())
    }

    pub fn contains(&self, k: usize) -> bool {
        self.0.contains(&k)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn union(&self, other: &ConstraintSet) -> ConstraintSet {
        ConstraintSet(self.0.union(&other.0).copied().collect())
    }

    pub fn is_subset(&self, other: &ConstraintSet) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl fmt::Display for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(|k| (k + 1).to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// Dense exponent vector over the `n` series variables.
///
/// Ordered by total degree, then by preferring larger exponents of earlier
/// variables: `(0,0) < (1,0) < (0,1) < (2,0) < (1,1) < (0,2)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Exponent(pub Vec<u32>);

impl Exponent {
    pub fn zero(n: usize) -> Self {
        Exponent(vec![0; n])
    }

    pub fn unit(n: usize, k: usize) -> Self {
        let mut e = vec![0; n];
        e[k] = 1;
        Exponent(e)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn support_within(&self, j: &ConstraintSet) -> bool {
        self.0.iter().enumerate().all(|(k, &e)| e == 0 || j.contains(k))
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, if componentwise nonnegative.
    pub fn checked_sub(&self, other: &Exponent) -> Option<Exponent> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Vec<_>>>()
            .map(Exponent)
    }

    pub fn to_monomial(&self, series: &[Var]) -> Monomial {
        Monomial::from_pairs(series.iter().copied().zip(self.0.iter().copied()))
    }

    /// Reads a monomial in the series variables back as an exponent vector.
    pub fn from_monomial(m: &Monomial, series: &[Var]) -> Option<Exponent> {
        let mut e = vec![0; series.len()];
        for &(v, k) in m.powers() {
            let pos = series.iter().position(|&s| s == v)?;
            e[pos] = k;
        }
        Some(Exponent(e))
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", items.join(","))
    }
}

/// All exponents of total degree exactly `d` supported on `j`, in canonical order.
pub fn exponents_of_degree(n: usize, j: &ConstraintSet, d: u32) -> Vec<Exponent> {
    fn rec(vars: &[usize], d: u32, cur: &mut Vec<u32>, out: &mut Vec<Exponent>) {
        match vars.split_first() {
            None => {
                if d == 0 {
                    out.push(Exponent(cur.clone()));
                }
            }
            Some((&k, rest)) => {
                for e in (0..=d).rev() {
                    if rest.is_empty() && e != d {
                        continue;
                    }
                    cur[k] = e;
                    rec(rest, d - e, cur, out);
                    cur[k] = 0;
                }
            }
        }
    }
    let vars: Vec<usize> = j.iter().collect();
    let mut out = Vec::new();
    if vars.is_empty() {
        if d == 0 {
            out.push(Exponent::zero(n));
        }
        return out;
    }
    rec(&vars, d, &mut vec![0; n], &mut out);
    out
}

/// All exponents with `|α| < c` supported on `j`, in canonical order.
pub fn exponents_below(n: usize, j: &ConstraintSet, c: u32) -> Vec<Exponent> {
    (0..c).flat_map(|d| exponents_of_degree(n, j, d)).collect()
}

/// The finite support basis `{α : supp(α) ⊆ J, |α| < c}` of one unknown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportBasis {
    pub constraint: ConstraintSet,
    pub order: u32,
    pub exponents: Vec<Exponent>,
}

impl SupportBasis {
    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }
}

pub fn support_basis(j: &ConstraintSet, c: u32, n: usize) -> SupportBasis {
    SupportBasis {
        constraint: j.clone(),
        order: c,
        exponents: exponents_below(n, j, c),
    }
}

/// `x`-adic order of a jet; the zero jet has order [`Order::Infinite`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

/// Power series in `n` variables modulo `(x)^order`, supported on a constraint set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Jet<F: Field> {
    field: F,
    n: usize,
    constraint: ConstraintSet,
    order: u32,
    coeffs: BTreeMap<Exponent, F::Elem>,
}

impl<F: Field> Jet<F> {
    pub fn zero(field: &F, n: usize, constraint: ConstraintSet, order: u32) -> Self {
        Jet {
            field: field.clone(),
            n,
            constraint,
            order,
            coeffs: BTreeMap::new(),
        }
    }

    /// Builds a jet, rejecting exponents outside `constraint` and silently
    /// dropping those of degree `>= order`.
    pub fn new(
        field: &F,
        n: usize,
        constraint: ConstraintSet,
        order: u32,
        coeffs: impl IntoIterator<Item = (Exponent, F::Elem)>,
    ) -> Result<Self, JetError> {
        let mut jet = Self::zero(field, n, constraint, order);
        for (e, c) in coeffs {
            if e.n() != n {
                return Err(JetError::DimensionMismatch { expected: n, got: e.n() });
            }
            if !e.support_within(&jet.constraint) {
                return Err(JetError::SupportViolation(e));
            }
            if e.degree() < order {
                jet.add_coeff(e, c);
            }
        }
        Ok(jet)
    }

    /// Reads a polynomial in the series variables `series` as a jet.
    pub fn from_polynomial(
        p: &Polynomial<F>,
        series: &[Var],
        constraint: ConstraintSet,
        order: u32,
    ) -> Result<Self, JetError> {
        let mut coeffs = Vec::new();
        for (m, c) in p.terms() {
            let e = Exponent::from_monomial(m, series).ok_or_else(|| {
                let bad = m.vars().find(|v| !series.contains(v)).expect("non-series variable");
                JetError::UnexpectedVariable(bad)
            })?;
            coeffs.push((e, c.clone()));
        }
        Self::new(p.field(), series.len(), constraint, order, coeffs)
    }

    pub fn to_polynomial(&self, series: &[Var]) -> Polynomial<F> {
        Polynomial::from_terms(
            &self.field,
            self.coeffs.iter().map(|(e, c)| (e.to_monomial(series), c.clone())),
        )
    }

    fn add_coeff(&mut self, e: Exponent, c: F::Elem) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(e);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = self.field.add(o.get(), &c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn constraint(&self) -> &ConstraintSet {
        &self.constraint
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, e: &Exponent) -> F::Elem {
        self.coeffs.get(e).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&Exponent, &F::Elem)> {
        self.coeffs.iter()
    }

    /// Least total degree carrying a nonzero coefficient.
    pub fn ord(&self) -> Order {
        self.coeffs
            .keys()
            .map(Exponent::degree)
            .min()
            .map_or(Order::Infinite, Order::Finite)
    }

    pub fn truncate(&self, order: u32) -> Result<Self, JetError> {
        if order > self.order {
            return Err(JetError::OrderIncrease { from: self.order, to: order });
        }
        Ok(Jet {
            field: self.field.clone(),
            n: self.n,
            constraint: self.constraint.clone(),
            order,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(e, _)| e.degree() < order)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        })
    }

    /// Same coefficients under a different declared constraint.
    pub fn with_constraint(&self, constraint: ConstraintSet) -> Result<Self, JetError> {
        Self::new(
            &self.field,
            self.n,
            constraint,
            self.order,
            self.coeffs.iter().map(|(e, c)| (e.clone(), c.clone())),
        )
    }

    /// Formal derivative `∂^{|j|}/∂x^j`; the order drops by `|j|`.
    pub fn derivative(&self, j: &Exponent) -> Result<Self, JetError> {
        if j.n() != self.n {
            return Err(JetError::DimensionMismatch { expected: self.n, got: j.n() });
        }
        let order = self
            .order
            .checked_sub(j.degree())
            .ok_or(JetError::OrderTooLow { needed: j.degree(), got: self.order })?;
        let mut out = Self::zero(&self.field, self.n, self.constraint.clone(), order);
        for (alpha, c) in &self.coeffs {
            if let Some(lowered) = alpha.checked_sub(j) {
                let factor = derivative_factor(&self.field, alpha, j);
                out.add_coeff(lowered, self.field.mul(c, &factor));
            }
        }
        Ok(out)
    }

    fn check_compatible(&self, other: &Self) -> Result<(), JetError> {
        if self.field != other.field {
            return Err(JetError::FieldMismatch);
        }
        if self.n != other.n {
            return Err(JetError::DimensionMismatch { expected: self.n, got: other.n });
        }
        Ok(())
    }

    /// Sum at the smaller of the two orders.
    pub fn add(&self, other: &Self) -> Result<Self, JetError> {
        self.check_compatible(other)?;
        let order = self.order.min(other.order);
        let mut out = Self::zero(&self.field, self.n, self.constraint.union(&other.constraint), order);
        for (e, c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            if e.degree() < order {
                out.add_coeff(e.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// Product at the smaller of the two orders.
    pub fn mul(&self, other: &Self) -> Result<Self, JetError> {
        self.check_compatible(other)?;
        let order = self.order.min(other.order);
        let mut out = Self::zero(&self.field, self.n, self.constraint.union(&other.constraint), order);
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &other.coeffs {
                if ea.degree() + eb.degree() < order {
                    out.add_coeff(ea.add(eb), self.field.mul(ca, cb));
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let mut out = Self::zero(&self.field, self.n, self.constraint.clone(), self.order);
        for (e, a) in &self.coeffs {
            out.add_coeff(e.clone(), self.field.mul(a, c));
        }
        out
    }

    /// Printable form: `x1^2 + 2*x2 + O(x)^3 [J = {1,2}]`.
    pub fn display(&self, series_names: &[String]) -> String {
        let mut terms: Vec<String> = Vec::new();
        for (e, c) in self.coeffs.iter().rev() {
            let factors: Vec<String> = e
                .0
                .iter()
                .enumerate()
                .filter(|&(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        series_names[i].clone()
                    } else {
                        format!("{}^{}", series_names[i], k)
                    }
                })
                .collect();
            let coeff = c.to_string();
            let term = if factors.is_empty() {
                coeff
            } else if coeff == "1" {
                factors.join("*")
            } else {
                format!("{}*{}", coeff, factors.join("*"))
            };
            terms.push(term);
        }
        let mut body = String::new();
        for (i, t) in terms.iter().enumerate() {
            match (i, t.strip_prefix('-')) {
                (0, _) => body.push_str(t),
                (_, Some(rest)) => {
                    body.push_str(" - ");
                    body.push_str(rest);
                }
                (_, None) => {
                    body.push_str(" + ");
                    body.push_str(t);
                }
            }
        }
        if body.is_empty() {
            body.push('0');
        }
        format!("{} + O(x)^{} [J = {}]", body, self.order, self.constraint)
    }
}

/// Product of falling factorials `α_k (α_k - 1) ··· (α_k - j_k + 1)`.
pub(crate) fn derivative_factor<F: Field>(field: &F, alpha: &Exponent, j: &Exponent) -> F::Elem {
    let mut acc = field.one();
    for (&a, &d) in alpha.0.iter().zip(&j.0) {
        for i in 0..d {
            acc = field.mul(&acc, &field.from_i64(a as i64 - i as i64));
        }
    }
    acc
}

/// Which registry variables play the roles of `x_1..x_n` and `Y_1..Y_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesLayout {
    pub series: Vec<Var>,
    pub unknowns: Vec<Var>,
}

impl SeriesLayout {
    pub fn n(&self) -> usize {
        self.series.len()
    }

    pub fn m(&self) -> usize {
        self.unknowns.len()
    }

    pub fn is_series(&self, v: Var) -> bool {
        self.series.contains(&v)
    }
}

/// `f(y_1, ..., y_m)` modulo `(x)^c`, evaluated with jet arithmetic.
pub fn jet_substitute<F: Field>(
    f: &Polynomial<F>,
    layout: &SeriesLayout,
    ys: &[Jet<F>],
    c: u32,
) -> Result<Jet<F>, JetError> {
    let n = layout.n();
    if ys.len() != layout.m() {
        return Err(JetError::DimensionMismatch { expected: layout.m(), got: ys.len() });
    }
    let field = f.field();
    for y in ys {
        if y.field() != field {
            return Err(JetError::FieldMismatch);
        }
        if y.n() != n {
            return Err(JetError::DimensionMismatch { expected: n, got: y.n() });
        }
        if y.order() < c {
            return Err(JetError::OrderTooLow { needed: c, got: y.order() });
        }
    }
    let full = ConstraintSet::full(n);
    let ys: Vec<Jet<F>> = ys.iter().map(|y| y.truncate(c)).collect::<Result<_, _>>()?;
    let mut powers: HashMap<(usize, u32), Jet<F>> = HashMap::new();
    let mut acc = Jet::zero(field, n, full.clone(), c);
    for (m, coeff) in f.terms() {
        let mut x_exp = vec![0u32; n];
        let mut factors: Vec<(usize, u32)> = Vec::new();
        for &(v, e) in m.powers() {
            if let Some(k) = layout.series.iter().position(|&s| s == v) {
                x_exp[k] = e;
            } else if let Some(i) = layout.unknowns.iter().position(|&u| u == v) {
                factors.push((i, e));
            } else {
                return Err(JetError::UnexpectedVariable(v));
            }
        }
        let x_exp = Exponent(x_exp);
        if x_exp.degree() >= c {
            continue;
        }
        let mut term = Jet::new(field, n, full.clone(), c, [(x_exp, coeff.clone())])?;
        for (i, e) in factors {
            let pw = match powers.get(&(i, e)) {
                Some(p) => p.clone(),
                None => {
                    let mut p = Jet::new(field, n, full.clone(), c, [(Exponent::zero(n), field.one())])?;
                    for _ in 0..e {
                        p = p.mul(&ys[i])?;
                    }
                    powers.insert((i, e), p.clone());
                    p
                }
            };
            term = term.mul(&pw)?;
        }
        acc = acc.add(&term)?;
    }
    Ok(Jet { constraint: full, ..acc })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::poly::{VarClass, VariableRegistry};
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn e(v: &[u32]) -> Exponent {
        Exponent(v.to_vec())
    }

    #[test]
    fn basis_examples() {
        let j1 = ConstraintSet::new([0], 2).unwrap();
        assert_eq!(support_basis(&j1, 3, 2).exponents, vec![e(&[0, 0]), e(&[1, 0]), e(&[2, 0])]);
        let b = support_basis(&ConstraintSet::empty(), 5, 3);
        assert_eq!(b.exponents, vec![e(&[0, 0, 0])]);
        let b = support_basis(&ConstraintSet::full(2), 2, 2);
        assert_eq!(b.exponents, vec![e(&[0, 0]), e(&[1, 0]), e(&[0, 1])]);
        assert_eq!(b.len(), 3);
        assert!(ConstraintSet::new([5], 2).is_err());
    }

    #[test]
    fn basis_sizes_are_binomial() {
        // number of monomials of degree < c in k variables is C(k + c - 1, k)
        fn binom(a: u64, b: u64) -> u64 {
            (0..b).fold(1, |acc, i| acc * (a - i) / (i + 1))
        }
        for n in 1..4usize {
            for c in 1..6u32 {
                let b = support_basis(&ConstraintSet::full(n), c, n);
                assert_eq!(b.len() as u64, binom(n as u64 + c as u64 - 1, n as u64));
                let mut sorted = b.exponents.clone();
                sorted.sort();
                sorted.dedup();
                assert_eq!(sorted, b.exponents);
            }
        }
    }

    #[test]
    fn ord_examples() {
        let f = Rationals;
        let y = Jet::new(&f, 2, ConstraintSet::full(2), 5, [(e(&[2, 1]), q(1, 1))]).unwrap();
        assert_eq!(y.ord(), Order::Finite(3));
        assert_eq!(Jet::zero(&f, 2, ConstraintSet::full(2), 5).ord(), Order::Infinite);
        let y = Jet::new(&f, 2, ConstraintSet::full(2), 5, [(e(&[0, 0]), q(5, 1)), (e(&[1, 0]), q(1, 1))])
            .unwrap();
        assert_eq!(y.ord(), Order::Finite(0));
        assert!(Order::Finite(1000) < Order::Infinite);
    }

    #[test]
    fn derivative_examples() {
        let f = Rationals;
        let full = ConstraintSet::full(2);
        let y = Jet::new(&f, 2, full.clone(), 4, [(e(&[2, 0]), q(1, 1))]).unwrap();
        let d = y.derivative(&e(&[1, 0])).unwrap();
        assert_eq!(d, Jet::new(&f, 2, full.clone(), 3, [(e(&[1, 0]), q(2, 1))]).unwrap());

        let j1 = ConstraintSet::new([0], 2).unwrap();
        let y = Jet::new(&f, 2, j1.clone(), 4, [(e(&[1, 0]), q(1, 1)), (e(&[3, 0]), q(1, 1))]).unwrap();
        let d = y.derivative(&e(&[0, 1])).unwrap();
        assert!(d.is_zero());
        assert_eq!(d.constraint(), &j1);

        let y = Jet::new(&f, 1, ConstraintSet::full(1), 5, [(e(&[3]), q(1, 6))]).unwrap();
        let d = y.derivative(&e(&[2])).unwrap();
        assert_eq!(d, Jet::new(&f, 1, ConstraintSet::full(1), 3, [(e(&[1]), q(1, 1))]).unwrap());
    }

    #[test]
    fn truncate_examples() {
        let f = Rationals;
        let full = ConstraintSet::full(1);
        let y = Jet::new(&f, 1, full.clone(), 3, [(e(&[0]), q(1, 1)), (e(&[1]), q(1, 1)), (e(&[2]), q(1, 1))])
            .unwrap();
        let t = y.truncate(2).unwrap();
        assert_eq!(t, Jet::new(&f, 1, full.clone(), 2, [(e(&[0]), q(1, 1)), (e(&[1]), q(1, 1))]).unwrap());
        assert_eq!(y.truncate(3).unwrap(), y);
        assert_eq!(y.truncate(4), Err(JetError::OrderIncrease { from: 3, to: 4 }));
    }

    #[test]
    fn support_is_enforced() {
        let f = PrimeField::new(5).unwrap();
        let j1 = ConstraintSet::new([0], 2).unwrap();
        let err = Jet::new(&f, 2, j1, 3, [(e(&[0, 1]), 1)]).unwrap_err();
        assert_eq!(err, JetError::SupportViolation(e(&[0, 1])));
    }

    fn layout() -> (VariableRegistry, SeriesLayout) {
        let mut reg = VariableRegistry::new();
        let x1 = reg.register("x1", VarClass::Series).unwrap();
        let x2 = reg.register("x2", VarClass::Series).unwrap();
        let y1 = reg.register("Y1", VarClass::Unknown).unwrap();
        (reg, SeriesLayout { series: vec![x1, x2], unknowns: vec![y1] })
    }

    #[test]
    fn substitute_examples() {
        let f = Rationals;
        let (_, lay) = layout();
        let (x1, x2, y1) = (lay.series[0], lay.series[1], lay.unknowns[0]);
        let full = ConstraintSet::full(2);

        // Y1 - x1 at y1 = x1
        let p = &Polynomial::var(&f, y1) - &Polynomial::var(&f, x1);
        let y = Jet::new(&f, 2, full.clone(), 4, [(e(&[1, 0]), q(1, 1))]).unwrap();
        assert!(jet_substitute(&p, &lay, &[y], 4).unwrap().is_zero());

        // Y1^2 at y1 = x1 + x2, c = 2
        let p = Polynomial::var(&f, y1).pow(2);
        let y = Jet::new(&f, 2, full.clone(), 2, [(e(&[1, 0]), q(1, 1)), (e(&[0, 1]), q(1, 1))]).unwrap();
        assert!(jet_substitute(&p, &lay, std::slice::from_ref(&y), 2).unwrap().is_zero());
        assert_eq!(
            jet_substitute(&p, &lay, &[y], 3),
            Err(JetError::OrderTooLow { needed: 3, got: 2 })
        );

        // Y1^2 - x1^2 x2^2 at y1 = x1 x2, c = 5
        let p = &Polynomial::var(&f, y1).pow(2)
            - &Polynomial::monomial(&f, Monomial::from_pairs([(x1, 2), (x2, 2)]), q(1, 1));
        let y = Jet::new(&f, 2, full, 5, [(e(&[1, 1]), q(1, 1))]).unwrap();
        assert!(jet_substitute(&p, &lay, &[y], 5).unwrap().is_zero());
    }

    #[test]
    fn display_form() {
        let f = Rationals;
        let y = Jet::new(&f, 2, ConstraintSet::new([0], 2).unwrap(), 3, [
            (e(&[0, 0]), q(-1, 1)),
            (e(&[2, 0]), q(1, 2)),
        ])
        .unwrap();
        let names = vec!["x1".to_string(), "x2".to_string()];
        assert_eq!(y.display(&names), "1/2*x1^2 - 1 + O(x)^3 [J = {1}]");
    }
}
