//! Laurent polynomials in `v = q^{1/2}` with arbitrary-precision integer
//! coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// An element of `Z[v, v^{-1}]`, stored densely from its lowest nonzero power.
///
/// Invariant: `coeffs` is empty (zero) or its first and last entries are nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QCoeff {
    low: i64,
    coeffs: Vec<BigInt>,
}

impl QCoeff {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, BigInt::one())
    }

    /// `c · v^e`.
    pub fn monomial(e: i64, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zero();
        }
        Self { low: e, coeffs: vec![c] }
    }

    /// `v^e`.
    pub fn v_pow(e: i64) -> Self {
        Self::monomial(e, 1)
    }

    /// Builds from `(v-exponent, coefficient)` pairs; repeated exponents add.
    pub fn from_pairs<I, C>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        pairs
            .into_iter()
            .fold(Self::zero(), |acc, (e, c)| &acc + &Self::monomial(e, c))
    }

    fn from_raw(low: i64, coeffs: Vec<BigInt>) -> Self {
        let mut out = Self { low, coeffs };
        out.trim();
        out
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.low += lead_zeros as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Lowest power of `v` with a nonzero coefficient.
    pub fn low_degree(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn high_degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        let idx = e - self.low;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            BigInt::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    /// Nonzero `(exponent, coefficient)` pairs in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Multiplication by `v^e`.
    pub fn shift(&self, e: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self { low: self.low + e, coeffs: self.coeffs.clone() }
    }

    /// `v ↦ v^{-1}`.
    pub fn bar(&self) -> Self {
        match self.high_degree() {
            None => Self::zero(),
            Some(high) => Self { low: -high, coeffs: self.coeffs.iter().rev().cloned().collect() },
        }
    }

    /// Value at `v = 1`.
    pub fn eval_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn is_nonneg(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// `Some(e)` iff `self = v^e · other` (both nonzero).
    pub fn shift_relative_to(&self, other: &QCoeff) -> Option<i64> {
        if self.is_zero() || self.coeffs != other.coeffs {
            return None;
        }
        Some(self.low - other.low)
    }

    /// Exact quotient in `Z[v^{±1}]`, or `None` if `divisor` does not divide `self`.
    ///
    /// Both operands are normalised to have nonzero constant term, after
    /// which divisibility in the Laurent ring coincides with divisibility in
    /// `Z[v]` and plain long division from the top decides it.
    pub fn exact_div(&self, divisor: &QCoeff) -> Option<QCoeff> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if divisor.coeffs.len() == 1 {
            let d = &divisor.coeffs[0];
            let mut out = Vec::with_capacity(self.coeffs.len());
            for c in &self.coeffs {
                let (q, r) = c.div_rem(d);
                if !r.is_zero() {
                    return None;
                }
                out.push(q);
            }
            return Some(Self { low: self.low - divisor.low, coeffs: out });
        }
        if self.coeffs.len() < divisor.coeffs.len() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let dlen = divisor.coeffs.len();
        let qlen = rem.len() - dlen + 1;
        let lead = divisor.coeffs.last().unwrap();
        let mut quot = vec![BigInt::zero(); qlen];
        for qi in (0..qlen).rev() {
            let top = &rem[qi + dlen - 1];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[qi + j] -= &q * dc;
            }
            quot[qi] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::from_raw(self.low - divisor.low, quot))
    }
}

impl Add for &QCoeff {
    type Output = QCoeff;
    fn add(self, rhs: &QCoeff) -> QCoeff {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let low = self.low.min(rhs.low);
        let high = self.high_degree().unwrap().max(rhs.high_degree().unwrap());
        let mut coeffs = vec![BigInt::zero(); (high - low + 1) as usize];
        for (src, off) in [(self, self.low - low), (rhs, rhs.low - low)] {
            for (i, c) in src.coeffs.iter().enumerate() {
                coeffs[off as usize + i] += c;
            }
        }
        QCoeff::from_raw(low, coeffs)
    }
}

impl Neg for &QCoeff {
    type Output = QCoeff;
    fn neg(self) -> QCoeff {
        QCoeff { low: self.low, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Sub for &QCoeff {
    type Output = QCoeff;
    fn sub(self, rhs: &QCoeff) -> QCoeff {
        self + &(-rhs)
    }
}

impl Mul for &QCoeff {
    type Output = QCoeff;
    fn mul(self, rhs: &QCoeff) -> QCoeff {
        if self.is_zero() || rhs.is_zero() {
            return QCoeff::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        QCoeff::from_raw(self.low + rhs.low, coeffs)
    }
}

impl PartialOrd for QCoeff {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An arbitrary total order, used only to make collections deterministic.
impl Ord for QCoeff {
    fn cmp(&self, other: &Self) -> Ordering {
        self.low.cmp(&other.low).then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl fmt::Debug for QCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            let body = match (e, mag.is_one()) {
                (0, _) => mag.to_string(),
                (1, true) => "v".to_string(),
                (_, true) => format!("v^{e}"),
                (1, false) => format!("{mag}v"),
                (_, false) => format!("{mag}v^{e}"),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        Ok(())
    }
}
