use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Index of a variable in a [`VariableRegistry`](super::VariableRegistry).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Var(pub u32);

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// A power product stored as `(variable, exponent)` pairs sorted by variable,
/// with no zero exponents.
///
/// Ordering is graded lexicographic: total degree first, then the exponent of
/// the lowest-indexed variable where the two differ (larger is greater).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    powers: Vec<(Var, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { powers: Vec::new() }
    }

    pub fn var(v: Var) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: u32) -> Self {
        if e == 0 {
            Self::one()
        } else {
            Monomial { powers: vec![(v, e)] }
        }
    }

    /// Builds a monomial from arbitrary pairs; repeated variables are merged.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut powers: Vec<(Var, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        powers.sort_by_key(|&(v, _)| v);
        let mut merged: Vec<(Var, u32)> = Vec::with_capacity(powers.len());
        for (v, e) in powers {
            match merged.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => merged.push((v, e)),
            }
        }
        Monomial { powers: merged }
    }

    pub fn is_one(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.powers.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        match self.powers.binary_search_by_key(&v, |&(w, _)| w) {
            Ok(i) => self.powers[i].1,
            Err(_) => 0,
        }
    }

    pub fn powers(&self) -> &[(Var, u32)] {
        &self.powers
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.powers.iter().map(|&(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.powers, &other.powers);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial { powers: out }
    }

    pub fn pow(&self, e: u32) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        Monomial {
            powers: self.powers.iter().map(|&(v, k)| (v, k * e)).collect(),
        }
    }

    /// Splits into the part over variables selected by `pred` and the rest.
    pub fn split(&self, pred: impl Fn(Var) -> bool) -> (Monomial, Monomial) {
        let (inside, outside): (Vec<_>, Vec<_>) = self.powers.iter().partition(|&&(v, _)| pred(v));
        (Monomial { powers: inside }, Monomial { powers: outside })
    }

    /// Degree counted only over variables selected by `pred`.
    pub fn degree_in(&self, pred: impl Fn(Var) -> bool) -> u32 {
        self.powers.iter().filter(|&&(v, _)| pred(v)).map(|&(_, e)| e).sum()
    }

    /// Removes `v` entirely, returning its former exponent.
    pub fn without(&self, v: Var) -> (Monomial, u32) {
        let e = self.exponent(v);
        let powers = self.powers.iter().copied().filter(|&(w, _)| w != v).collect();
        (Monomial { powers }, e)
    }

    /// Lowers the exponent of `v` by `k`; `None` if the exponent is smaller than `k`.
    pub fn lower(&self, v: Var, k: u32) -> Option<Monomial> {
        let e = self.exponent(v);
        if e < k {
            return None;
        }
        let powers = self
            .powers
            .iter()
            .filter_map(|&(w, d)| {
                if w != v {
                    Some((w, d))
                } else if d > k {
                    Some((w, d - k))
                } else {
                    None
                }
            })
            .collect();
        Some(Monomial { powers })
    }

    pub fn rename(&self, map: impl Fn(Var) -> Var) -> Monomial {
        Monomial::from_pairs(self.powers.iter().map(|&(v, e)| (map(v), e)))
    }
}

fn lex_cmp(a: &[(Var, u32)], b: &[(Var, u32)]) -> Ordering {
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                // `a` has a positive exponent where `b` has zero.
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => {
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                    i += 1;
                    j += 1;
                }
            },
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| lex_cmp(&self.powers, &other.powers))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
