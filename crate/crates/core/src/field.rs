//! Exact coefficient fields.
//!
//! A [`Field`] is a small handle (the rationals carry no state, a prime field
//! carries its modulus) that performs arithmetic on its element type. Element
//! types only need `Zero`/`One` from `num-traits` so that generic code can
//! build the two distinguished constants; everything else goes through the
//! handle because the modulus of a prime field is a runtime value.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest accepted prime modulus (exclusive). Residue products must fit in a `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u64),
    #[error("modulus {0} is outside the supported range [2, 2^31)")]
    ModulusOutOfRange(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("field {0} is not enumerable")]
    NotEnumerable(FieldSpec),
    #[error("cannot parse field value `{0}`")]
    InvalidLiteral(String),
}

/// Which coefficient field a computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldSpec {
    Rational,
    PrimeField { modulus: u64 },
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::PrimeField { modulus } => write!(f, "Fp {modulus}"),
        }
    }
}

/// Arithmetic over an exact field.
///
/// All operations are pure. Element values produced by a handle are always in
/// canonical form (lowest terms, or a residue in `[0, p)`).
pub trait Field: Clone + fmt::Debug + PartialEq + Eq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + fmt::Display + Eq + Ord + Hash + Send + Sync + Zero + One;

    fn spec(&self) -> FieldSpec;

    /// 0 for the rationals, p for a prime field.
    fn characteristic(&self) -> u64;

    fn from_bigint(&self, n: &BigInt) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError>;

    /// Brings an arbitrary representative into canonical form.
    fn normalize(&self, a: &Self::Elem) -> Self::Elem;

    /// All elements in the deterministic listing order `0, 1, ..., p-1`.
    fn elements(&self) -> Result<Vec<Self::Elem>, FieldError>;

    fn zero(&self) -> Self::Elem {
        Self::Elem::zero()
    }

    fn one(&self) -> Self::Elem {
        Self::Elem::one()
    }

    fn is_finite(&self) -> bool {
        self.characteristic() != 0
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(n))
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn pow(&self, a: &Self::Elem, mut e: u32) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `num / den` as a field element; fails if `den` vanishes in the field.
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Self::Elem, FieldError> {
        self.div(&self.from_bigint(num), &self.from_bigint(den))
    }

    /// Roots of `Σ coeffs[k] t^k` in the field, ascending in listing order.
    /// `None` when the roots cannot be listed completely.
    fn roots(&self, coeffs: &[Self::Elem]) -> Option<Vec<Self::Elem>> {
        let elements = self.elements().ok()?;
        Some(
            elements
                .into_iter()
                .filter(|t| coeffs.iter().rev().fold(self.zero(), |acc, c| self.add(&self.mul(&acc, t), c)).is_zero())
                .collect(),
        )
    }

    /// Values to branch over for an unknown no equation pins down, and
    /// whether that list is the whole field.
    fn branch_values(&self, height: u64) -> (Vec<Self::Elem>, bool) {
        let _ = height;
        match self.elements() {
            Ok(e) => (e, true),
            Err(_) => (Vec::new(), false),
        }
    }

    /// Parses `"a"` or `"a/b"` with optional leading sign.
    fn parse_value(&self, text: &str) -> Result<Self::Elem, FieldError> {
        let bad = || FieldError::InvalidLiteral(text.to_string());
        let t = text.trim();
        let (num, den) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (t, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        self.from_ratio(&num, &den)
    }
}

/// The field of rational numbers with arbitrary-precision numerators and denominators.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rational
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn inv(&self, a: &BigRational) -> Result<BigRational, FieldError> {
        if a.is_zero() {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(a.recip())
        }
    }

    fn normalize(&self, a: &BigRational) -> BigRational {
        // `BigRational::new` reduces and fixes the sign of the denominator.
        BigRational::new(a.numer().clone(), a.denom().clone())
    }

    fn elements(&self) -> Result<Vec<BigRational>, FieldError> {
        Err(FieldError::NotEnumerable(FieldSpec::Rational))
    }

    fn roots(&self, coeffs: &[BigRational]) -> Option<Vec<BigRational>> {
        crate::solve::rational_roots(coeffs)
    }

    fn branch_values(&self, height: u64) -> (Vec<BigRational>, bool) {
        (crate::solve::height_bounded_rationals(height), false)
    }
}

/// The prime field `Z/pZ`, residues stored as `u64` in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Checks primality by trial division; moduli must be below [`MAX_MODULUS`].
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !(2..MAX_MODULUS).contains(&p) {
            return Err(FieldError::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NonPrimeModulus(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::PrimeField { modulus: self.p }
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn from_bigint(&self, n: &BigInt) -> u64 {
        let r = n.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits in u64")
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }

    fn neg(&self, a: &u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    fn inv(&self, a: &u64) -> Result<u64, FieldError> {
        let a = a % self.p;
        if a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        // Extended Euclid on (a, p).
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.reduce_i64(t0))
    }

    fn normalize(&self, a: &u64) -> u64 {
        a % self.p
    }

    fn elements(&self) -> Result<Vec<u64>, FieldError> {
        Ok((0..self.p).collect())
    }
}

/// A field chosen at runtime, e.g. from a CLI description.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnyField {
    Rational(Rationals),
    Prime(PrimeField),
}

impl AnyField {
    pub fn spec(&self) -> FieldSpec {
        match self {
            AnyField::Rational(f) => f.spec(),
            AnyField::Prime(f) => f.spec(),
        }
    }
}

/// Validates a [`FieldSpec`] and returns the corresponding handle.
pub fn field_make(spec: FieldSpec) -> Result<AnyField, FieldError> {
    match spec {
        FieldSpec::Rational => Ok(AnyField::Rational(Rationals)),
        FieldSpec::PrimeField { modulus } => PrimeField::new(modulus).map(AnyField::Prime),
    }
}

/// Exact rational square root, if `q` is the square of a rational.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}
