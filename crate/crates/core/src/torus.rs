//! The based quantum torus attached to a skew-symmetric integer matrix `L`.
//!
//! Elements are finite `Z[v^{±1}]`-combinations of the normalized monomials
//! `X^a`, `a ∈ Z^K`, with `v² = q` and
//!
//! ```text
//! X^a X^b = v^{Σ_{i,j} a_i b_j λ_ij} X^{a+b}.
//! ```
//!
//! The normalization prefactor is part of the basis, so a key `a` in the term
//! map stands for `X^a` itself and no rational powers of `q` ever appear.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::LaurentPoly;
use crate::qcoeff::QCoeff;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorusError {
    #[error("operands live in different quantum tori")]
    AmbientMismatch,
    #[error("exponent vector has length {got}, ambient rank is {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("matrix is not skew-symmetric at ({i}, {j})")]
    NotSkew { i: usize, j: usize },
    #[error("matrix is not square")]
    NotSquare,
    #[error("division by zero")]
    DivisionByZero,
    #[error("not divisible: {0}")]
    NotDivisible(DivisionFailure),
    #[error("elements do not q-commute: {0}")]
    NotQCommuting(String),
}

/// Why a left division stopped without a quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DivisionFailure {
    /// A leading coefficient of the remainder is not divisible in `Z[v^{±1}]`:
    /// the dividend is certainly not a left multiple of the divisor.
    Coefficient { exponent: Vec<i64>, remainder: QCoeff, divisor: QCoeff },
    /// A quotient term would lie lexicographically below `lowest(dividend) − lowest(divisor)`,
    /// where no term of an exact quotient can be.
    Support { exponent: Vec<i64>, floor: Vec<i64> },
    /// The step budget ran out; either there is no quotient or the bound was too small.
    StepBound { steps: usize, remaining_terms: usize },
}

impl fmt::Display for DivisionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Coefficient { exponent, remainder, divisor } => write!(
                f,
                "coefficient {remainder} at X^{exponent:?} is not divisible by leading coefficient {divisor}"
            ),
            Self::Support { exponent, floor } => {
                write!(f, "quotient term X^{exponent:?} lies below the lowest possible exponent {floor:?}")
            }
            Self::StepBound { steps, remaining_terms } => {
                write!(f, "step bound {steps} exhausted with {remaining_terms} remainder terms left")
            }
        }
    }
}

/// Exponent vector `a ∈ Z^K`, ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExpVec(pub Vec<i64>);

impl ExpVec {
    pub fn zero(k: usize) -> Self {
        Self(vec![0; k])
    }

    pub fn unit(k: usize, i: usize) -> Self {
        let mut v = vec![0; k];
        v[i] = 1;
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn add(&self, other: &ExpVec) -> ExpVec {
        ExpVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &ExpVec) -> ExpVec {
        ExpVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> ExpVec {
        ExpVec(self.0.iter().map(|a| -a).collect())
    }

    fn dot(&self, other: &[i64]) -> i64 {
        self.0.iter().zip(other).map(|(a, b)| a * b).sum()
    }
}

/// A skew-symmetric integer `K × K` matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LMatrix {
    k: usize,
    entries: Vec<i64>,
}

impl LMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, TorusError> {
        let k = rows.len();
        if rows.iter().any(|r| r.len() != k) {
            return Err(TorusError::NotSquare);
        }
        for i in 0..k {
            for j in 0..k {
                if rows[i][j] != -rows[j][i] {
                    return Err(TorusError::NotSkew { i, j });
                }
            }
        }
        Ok(Self { k, entries: rows.into_iter().flatten().collect() })
    }

    pub fn zero(k: usize) -> Self {
        Self { k, entries: vec![0; k * k] }
    }

    pub fn rank(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.k + j]
    }

    /// Sets `λ_ij = x` and `λ_ji = −x`.
    pub fn set_skew(&mut self, i: usize, j: usize, x: i64) {
        assert!(i != j || x == 0, "diagonal of a skew-symmetric matrix is zero");
        self.entries[i * self.k + j] = x;
        self.entries[j * self.k + i] = -x;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.k.max(1)).take(self.k).map(<[i64]>::to_vec).collect()
    }

    /// `Σ_{i,j} a_i λ_ij b_j`.
    pub fn form(&self, a: &ExpVec, b: &ExpVec) -> i64 {
        b.dot(&self.row_times(a))
    }

    /// The row vector `aᵀ L`.
    fn row_times(&self, a: &ExpVec) -> Vec<i64> {
        let mut out = vec![0; self.k];
        for (i, &ai) in a.0.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += ai * self.entries[i * self.k + j];
            }
        }
        out
    }

    /// The column vector `L b`.
    fn times_col(&self, b: &ExpVec) -> Vec<i64> {
        (0..self.k)
            .map(|i| (0..self.k).map(|j| self.entries[i * self.k + j] * b.0[j]).sum())
            .collect()
    }
}

/// Default budget for [`TorusElem::exact_left_div`].
pub fn default_step_bound(dividend_terms: usize) -> usize {
    16 * dividend_terms + 1024
}

/// An element of the quantum torus `P(L)` localized at all `X_i`.
#[derive(Clone)]
pub struct TorusElem {
    ambient: Arc<LMatrix>,
    terms: BTreeMap<ExpVec, QCoeff>,
}

impl TorusElem {
    pub fn zero(ambient: &Arc<LMatrix>) -> Self {
        Self { ambient: Arc::clone(ambient), terms: BTreeMap::new() }
    }

    pub fn one(ambient: &Arc<LMatrix>) -> Self {
        Self::monomial(ambient, ExpVec::zero(ambient.rank()), QCoeff::one())
    }

    /// `c · X^a`.
    pub fn monomial(ambient: &Arc<LMatrix>, a: ExpVec, c: QCoeff) -> Self {
        assert_eq!(a.len(), ambient.rank(), "exponent length must match ambient rank");
        let mut out = Self::zero(ambient);
        if !c.is_zero() {
            out.terms.insert(a, c);
        }
        out
    }

    /// The generator `X_i`.
    pub fn generator(ambient: &Arc<LMatrix>, i: usize) -> Self {
        Self::monomial(ambient, ExpVec::unit(ambient.rank(), i), QCoeff::one())
    }

    pub fn from_terms(
        ambient: &Arc<LMatrix>,
        terms: impl IntoIterator<Item = (ExpVec, QCoeff)>,
    ) -> Result<Self, TorusError> {
        let mut out = Self::zero(ambient);
        for (a, c) in terms {
            if a.len() != ambient.rank() {
                return Err(TorusError::LengthMismatch { expected: ambient.rank(), got: a.len() });
            }
            out.add_term(a, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, a: ExpVec, c: QCoeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(a) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn ambient(&self) -> &Arc<LMatrix> {
        &self.ambient
    }

    pub fn rank(&self) -> usize {
        self.ambient.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExpVec, &QCoeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, a: &ExpVec) -> QCoeff {
        self.terms.get(a).cloned().unwrap_or_default()
    }

    /// Leading term in the lexicographic group order on `Z^K`.
    pub fn leading_term(&self) -> Option<(&ExpVec, &QCoeff)> {
        self.terms.iter().next_back()
    }

    fn same_ambient(&self, other: &TorusElem) -> Result<(), TorusError> {
        if Arc::ptr_eq(&self.ambient, &other.ambient) || self.ambient == other.ambient {
            Ok(())
        } else {
            Err(TorusError::AmbientMismatch)
        }
    }

    /// Multiplication by the central scalar `c`.
    pub fn scale(&self, c: &QCoeff) -> TorusElem {
        let mut out = Self::zero(&self.ambient);
        for (a, x) in &self.terms {
            out.add_term(a.clone(), x * c);
        }
        out
    }

    /// Multiplication by `v^e`.
    pub fn shift(&self, e: i64) -> TorusElem {
        TorusElem {
            ambient: Arc::clone(&self.ambient),
            terms: self.terms.iter().map(|(a, c)| (a.clone(), c.shift(e))).collect(),
        }
    }

    pub fn try_add(&self, other: &TorusElem) -> Result<TorusElem, TorusError> {
        self.same_ambient(other)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &TorusElem) -> Result<TorusElem, TorusError> {
        self.try_add(&-other)
    }

    pub fn mul(&self, other: &TorusElem) -> Result<TorusElem, TorusError> {
        self.same_ambient(other)?;
        let mut out = Self::zero(&self.ambient);
        for (a, ca) in &self.terms {
            let row = self.ambient.row_times(a);
            for (b, cb) in &other.terms {
                let e = b.dot(&row);
                out.add_term(a.add(b), (ca * cb).shift(e));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> TorusElem {
        (0..n).fold(Self::one(&self.ambient), |acc, _| {
            acc.mul(self).expect("same ambient")
        })
    }

    /// `s` with `self · s = dividend`, by leading-term peeling.
    ///
    /// In the lexicographic order `LT(p·s) = LT(p)·LT(s)`, so each term of the
    /// quotient is forced by the current leading term of the remainder. The
    /// lowest terms multiply the same way, which bounds the quotient from below.
    pub fn exact_left_div(&self, dividend: &TorusElem, step_bound: usize) -> Result<TorusElem, TorusError> {
        self.same_ambient(dividend)?;
        let (lead_exp, lead_coeff) = self.leading_term().ok_or(TorusError::DivisionByZero)?;
        let lead_row = self.ambient.row_times(lead_exp);
        let floor = match (dividend.terms.keys().next(), self.terms.keys().next()) {
            (Some(p), Some(d)) => p.sub(d),
            _ => return Ok(Self::zero(&self.ambient)),
        };
        let mut rem = dividend.terms.clone();
        let mut quot = Self::zero(&self.ambient);
        let mut steps = 0;
        while let Some((top_exp, top_coeff)) = rem.iter().next_back() {
            if steps == step_bound {
                return Err(TorusError::NotDivisible(DivisionFailure::StepBound {
                    steps,
                    remaining_terms: rem.len(),
                }));
            }
            steps += 1;
            let b = top_exp.sub(lead_exp);
            if b < floor {
                return Err(TorusError::NotDivisible(DivisionFailure::Support { exponent: b.0, floor: floor.0 }));
            }
            let twist = b.dot(&lead_row);
            let c = top_coeff.exact_div(lead_coeff).ok_or_else(|| {
                TorusError::NotDivisible(DivisionFailure::Coefficient {
                    exponent: top_exp.0.clone(),
                    remainder: top_coeff.clone(),
                    divisor: lead_coeff.clone(),
                })
            })?;
            let c = c.shift(-twist);
            // rem -= self · (c X^b)
            let lb = self.ambient.times_col(&b);
            for (a, ca) in &self.terms {
                let e = a.dot(&lb);
                let term = (ca * &c).shift(e);
                match rem.entry(a.add(&b)) {
                    Entry::Vacant(v) => {
                        v.insert(-&term);
                    }
                    Entry::Occupied(mut o) => {
                        let diff = o.get() - &term;
                        if diff.is_zero() {
                            o.remove();
                        } else {
                            *o.get_mut() = diff;
                        }
                    }
                }
            }
            quot.add_term(b, c);
        }
        Ok(quot)
    }

    /// Coefficient-wise `v ↦ v^{-1}`; the normalized monomials are fixed.
    pub fn bar(&self) -> TorusElem {
        TorusElem {
            ambient: Arc::clone(&self.ambient),
            terms: self.terms.iter().map(|(a, c)| (a.clone(), c.bar())).collect(),
        }
    }

    /// `v ↦ 1`, landing in the commutative Laurent ring.
    pub fn specialize_q1(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.rank(),
            self.terms.iter().map(|(a, c)| (a.0.clone(), c.eval_one())),
        )
    }

    pub fn is_nonneg(&self) -> bool {
        self.terms.values().all(QCoeff::is_nonneg)
    }

    /// The `γ` with `self · other = q^γ · other · self`.
    pub fn q_commute_exponent(&self, other: &TorusElem) -> Result<i64, TorusError> {
        if self.is_zero() || other.is_zero() {
            return Err(TorusError::NotQCommuting("zero operand".into()));
        }
        let xy = self.mul(other)?;
        let yx = other.mul(self)?;
        if xy.terms.len() != yx.terms.len() {
            return Err(TorusError::NotQCommuting("supports differ".into()));
        }
        let mut shift = None;
        for ((a, c1), (b, c2)) in xy.terms.iter().zip(&yx.terms) {
            if a != b {
                return Err(TorusError::NotQCommuting(format!("supports differ at X^{:?}", a.0)));
            }
            let s = c1
                .shift_relative_to(c2)
                .ok_or_else(|| TorusError::NotQCommuting(format!("coefficients at X^{:?} are not proportional", a.0)))?;
            match shift {
                None => shift = Some(s),
                Some(prev) if prev != s => {
                    return Err(TorusError::NotQCommuting(format!(
                        "v-shift {s} at X^{:?} differs from {prev}",
                        a.0
                    )))
                }
                _ => {}
            }
        }
        let c = shift.expect("nonzero product");
        if c % 2 != 0 {
            return Err(TorusError::NotQCommuting(format!("v-shift {c} is odd")));
        }
        Ok(c / 2)
    }

    pub fn to_wire(&self) -> Vec<WireTerm> {
        self.terms
            .iter()
            .map(|(a, c)| WireTerm {
                exp: a.0.clone(),
                coeff: c.terms().map(|(e, x)| (e, WireInt(x.clone()))).collect(),
            })
            .collect()
    }

    pub fn from_wire(ambient: &Arc<LMatrix>, wire: &[WireTerm]) -> Result<Self, TorusError> {
        Self::from_terms(
            ambient,
            wire.iter().map(|t| {
                (ExpVec(t.exp.clone()), QCoeff::from_pairs(t.coeff.iter().map(|(e, x)| (*e, x.0.clone()))))
            }),
        )
    }
}

impl PartialEq for TorusElem {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ambient, &other.ambient) || self.ambient == other.ambient)
            && self.terms == other.terms
    }
}

impl Eq for TorusElem {}

impl Neg for &TorusElem {
    type Output = TorusElem;
    fn neg(self) -> TorusElem {
        TorusElem {
            ambient: Arc::clone(&self.ambient),
            terms: self.terms.iter().map(|(a, c)| (a.clone(), -c)).collect(),
        }
    }
}

/// Panics on ambient mismatch; use [`TorusElem::try_add`] for fallible addition.
impl Add for &TorusElem {
    type Output = TorusElem;
    fn add(self, rhs: &TorusElem) -> TorusElem {
        self.try_add(rhs).expect("ambient mismatch in torus addition")
    }
}

impl Sub for &TorusElem {
    type Output = TorusElem;
    fn sub(self, rhs: &TorusElem) -> TorusElem {
        self.try_sub(rhs).expect("ambient mismatch in torus subtraction")
    }
}

impl fmt::Debug for TorusElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TorusElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(a, c)| if c.is_one() { format!("X^{:?}", a.0) } else { format!("({c})X^{:?}", a.0) })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// One entry of the JSON form of a torus element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireTerm {
    pub exp: Vec<i64>,
    pub coeff: Vec<(i64, WireInt)>,
}

/// A big integer written as a bare JSON number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WireInt(pub BigInt);

impl Serialize for WireInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let text = self.0.to_string();
        let n: serde_json::Number = text.parse().map_err(serde::ser::Error::custom)?;
        n.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WireInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let n = serde_json::Number::deserialize(d)?;
        n.to_string()
            .parse::<BigInt>()
            .map(WireInt)
            .map_err(|_| serde::de::Error::custom(format!("expected an integer coefficient, got {n}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l12(x: i64) -> Arc<LMatrix> {
        Arc::new(LMatrix::new(vec![vec![0, x], vec![-x, 0]]).unwrap())
    }

    fn mono(l: &Arc<LMatrix>, a: &[i64], c: QCoeff) -> TorusElem {
        TorusElem::monomial(l, ExpVec(a.to_vec()), c)
    }

    #[test]
    fn monomial_constructors() {
        let l = l12(1);
        let one = mono(&l, &[0, 0], QCoeff::one());
        assert_eq!(one, TorusElem::one(&l));
        assert_eq!(mono(&l, &[1, 0], QCoeff::one()), TorusElem::generator(&l, 0));
        let x = mono(&l, &[1, 1], QCoeff::v_pow(3));
        assert_eq!(x.coeff(&ExpVec(vec![1, 1])), QCoeff::v_pow(3));
    }

    #[test]
    fn multiplication_examples() {
        let l = l12(1);
        let x1 = TorusElem::generator(&l, 0);
        let x2 = TorusElem::generator(&l, 1);
        assert_eq!(x1.mul(&x2).unwrap(), mono(&l, &[1, 1], QCoeff::v_pow(1)));
        let a = mono(&l, &[3, -2], QCoeff::one());
        let a_inv = mono(&l, &[-3, 2], QCoeff::one());
        assert_eq!(a.mul(&a_inv).unwrap(), TorusElem::one(&l));
        // (X1 + X2)·X1 = X^{(2,0)} + v^{λ21}X^{(1,1)} = X^{(2,0)} + v^{-1}X^{(1,1)}
        let lhs = (&x1 + &x2).mul(&x1).unwrap();
        let expected = &mono(&l, &[2, 0], QCoeff::one()) + &mono(&l, &[1, 1], QCoeff::v_pow(-1));
        assert_eq!(lhs, expected);
        assert_eq!(lhs, &x1.mul(&x1).unwrap() + &x2.mul(&x1).unwrap());
    }

    #[test]
    fn ambient_mismatch() {
        let a = TorusElem::generator(&l12(1), 0);
        let b = TorusElem::generator(&l12(2), 0);
        assert_eq!(a.mul(&b), Err(TorusError::AmbientMismatch));
        assert!(a.try_add(&b).is_err());
    }

    #[test]
    fn monomial_division() {
        let l = l12(1);
        let p = TorusElem::generator(&l, 0);
        let q = mono(&l, &[2, 1], QCoeff::v_pow(3));
        let s = p.exact_left_div(&q, 100).unwrap();
        assert_eq!(s, mono(&l, &[1, 1], QCoeff::v_pow(2)));
        assert_eq!(p.mul(&s).unwrap(), q);
    }

    #[test]
    fn non_divisible_by_coefficient_failure() {
        let l = l12(1);
        let p = &TorusElem::generator(&l, 0) + &TorusElem::generator(&l, 1);
        let q = TorusElem::generator(&l, 0);
        let err = p.exact_left_div(&q, 1000).unwrap_err();
        assert!(matches!(err, TorusError::NotDivisible(_)), "{err:?}");
        // no single monomial c·X^b solves p·(cX^b) = X_1: the product always has two terms
        for b0 in -3..=3 {
            for b1 in -3..=3 {
                let t = mono(&l, &[b0, b1], QCoeff::one());
                assert_eq!(p.mul(&t).unwrap().num_terms(), 2);
            }
        }
    }

    #[test]
    fn division_failure_kinds() {
        let l = l12(0);
        let two = mono(&l, &[0, 0], QCoeff::monomial(0, 2));
        let err = two.exact_left_div(&TorusElem::one(&l), 10).unwrap_err();
        assert!(matches!(err, TorusError::NotDivisible(DivisionFailure::Coefficient { .. })));
        let p = &TorusElem::generator(&l, 0) + &TorusElem::one(&l);
        let err = p.exact_left_div(&TorusElem::one(&l), 5).unwrap_err();
        assert!(matches!(err, TorusError::NotDivisible(DivisionFailure::Support { .. })));
        let far = &TorusElem::one(&l) + &mono(&l, &[-10, 0], QCoeff::one());
        let err = p.exact_left_div(&far, 5).unwrap_err();
        assert!(matches!(err, TorusError::NotDivisible(DivisionFailure::StepBound { steps: 5, .. })));
        let err = p.exact_left_div(&far, 100).unwrap_err();
        assert!(matches!(err, TorusError::NotDivisible(DivisionFailure::Support { .. })));
        assert_eq!(TorusElem::zero(&l).exact_left_div(&p, 5), Err(TorusError::DivisionByZero));
    }

    #[test]
    fn bar_examples() {
        let l = l12(1);
        assert_eq!(TorusElem::one(&l).bar(), TorusElem::one(&l));
        assert_eq!(mono(&l, &[1, 1], QCoeff::v_pow(2)).bar(), mono(&l, &[1, 1], QCoeff::v_pow(-2)));
        let x1 = TorusElem::generator(&l, 0);
        let x2 = TorusElem::generator(&l, 1);
        assert_eq!(x1.mul(&x2).unwrap().bar(), mono(&l, &[1, 1], QCoeff::v_pow(-1)));
        assert_eq!(x1.mul(&x2).unwrap().bar(), x2.mul(&x1).unwrap());
    }

    #[test]
    fn specialization_examples() {
        let l = l12(1);
        let x = mono(&l, &[1, 1], QCoeff::v_pow(2));
        assert_eq!(x.specialize_q1(), LaurentPoly::monomial(vec![1, 1], 1));
        let y = mono(&l, &[0, 0], QCoeff::from_pairs([(1, 1), (-1, 1)]));
        assert_eq!(y.specialize_q1(), LaurentPoly::monomial(vec![0, 0], 2));
    }

    #[test]
    fn nonnegativity() {
        let l = l12(1);
        let x1 = TorusElem::generator(&l, 0);
        let x2 = TorusElem::generator(&l, 1);
        assert!((&TorusElem::one(&l) + &x1.shift(1)).is_nonneg());
        assert!(!(&x1 - &x2).is_nonneg());
    }

    #[test]
    fn q_commutation_examples() {
        let l = l12(1);
        let x1 = TorusElem::generator(&l, 0);
        let x2 = TorusElem::generator(&l, 1);
        assert_eq!(x1.q_commute_exponent(&x2), Ok(1));
        assert_eq!(x2.q_commute_exponent(&x1), Ok(-1));
        let y = &x1 + &x2;
        assert_eq!(y.q_commute_exponent(&y), Ok(0));
        assert!(matches!(y.q_commute_exponent(&x1), Err(TorusError::NotQCommuting(_))));
        let a = mono(&l, &[2, -1], QCoeff::v_pow(4));
        let b = mono(&l, &[1, 3], QCoeff::from_pairs([(0, 1), (1, 1)]));
        assert_eq!(a.q_commute_exponent(&b), Ok(l.form(&ExpVec(vec![2, -1]), &ExpVec(vec![1, 3]))));
    }

    #[test]
    fn wire_roundtrip() {
        let l = l12(1);
        let x = &mono(&l, &[1, -1], QCoeff::from_pairs([(-2, 3), (5, -1)])) + &TorusElem::one(&l);
        let big = mono(&l, &[0, 2], QCoeff::monomial(0, "123456789012345678901234567890".parse::<BigInt>().unwrap()));
        let x = &x + &big;
        let json = serde_json::to_string(&x.to_wire()).unwrap();
        assert_eq!(
            json,
            r#"[{"exp":[0,0],"coeff":[[0,1]]},{"exp":[0,2],"coeff":[[0,123456789012345678901234567890]]},{"exp":[1,-1],"coeff":[[-2,3],[5,-1]]}]"#
        );
        let back: Vec<WireTerm> = serde_json::from_str(&json).unwrap();
        assert_eq!(TorusElem::from_wire(&l, &back).unwrap(), x);
    }
}
