//! Commutative Laurent polynomials over `Z`.
//!
//! This is deliberately a separate code path from the quantum torus: it is
//! the arithmetic behind the classical (q = 1) mutation oracle, so it must
//! not share any multiplication or division routine with `torus`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("leading coefficient {numerator} is not divisible by {denominator}")]
    Coefficient { numerator: BigInt, denominator: BigInt },
    #[error("quotient term {exponent:?} lies below the lowest possible exponent")]
    Support { exponent: Vec<i64> },
    #[error("no exact quotient within {steps} steps")]
    StepBound { steps: usize },
}

/// A Laurent polynomial in a fixed number of commuting variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(vec![0; nvars], BigInt::one())
    }

    pub fn monomial(exp: Vec<i64>, c: impl Into<BigInt>) -> Self {
        let nvars = exp.len();
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { nvars, terms }
    }

    /// The variable `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, 1)
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<i64>, BigInt)>) -> Self {
        let mut out = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length mismatch");
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, e: Vec<i64>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(self.nvars), |acc, _| &acc * self)
    }

    /// The `q` with `divisor · q = self`, by lexicographic leading-term peeling.
    pub fn exact_div(&self, divisor: &LaurentPoly, max_steps: usize) -> Result<LaurentPoly, LaurentError> {
        let (lead_e, lead_c) = divisor.terms.iter().next_back().ok_or(LaurentError::DivisionByZero)?;
        let floor: Option<Vec<i64>> = match (self.terms.keys().next(), divisor.terms.keys().next()) {
            (Some(p), Some(d)) => Some(p.iter().zip(d).map(|(a, b)| a - b).collect()),
            _ => None,
        };
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        let mut steps = 0;
        while let Some((e, c)) = rem.terms.iter().next_back() {
            if steps == max_steps {
                return Err(LaurentError::StepBound { steps });
            }
            steps += 1;
            let (qc, r) = c.div_rem(lead_c);
            if !r.is_zero() {
                return Err(LaurentError::Coefficient { numerator: c.clone(), denominator: lead_c.clone() });
            }
            let qe: Vec<i64> = e.iter().zip(lead_e).map(|(a, b)| a - b).collect();
            if floor.as_ref().is_some_and(|f| &qe < f) {
                return Err(LaurentError::Support { exponent: qe });
            }
            let t = Self::monomial(qe.clone(), qc.clone());
            rem = &rem - &(divisor * &t);
            quot.add_term(qe, qc);
        }
        Ok(quot)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.nvars);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let e = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &p)| p != 0)
                    .map(|(i, &p)| if p == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, p) })
                    .collect();
                match (mono.is_empty(), c.is_one()) {
                    (true, _) => c.to_string(),
                    (false, true) => mono.join("*"),
                    (false, false) => format!("{}*{}", c, mono.join("*")),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
