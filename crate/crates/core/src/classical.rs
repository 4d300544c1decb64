//! Commutative cluster mutation over `Z`, used as an independent oracle for
//! the q = 1 shadow of quantum mutation.
//!
//! Nothing here touches the quantum torus: variables are [`LaurentPoly`]s
//! and the exchange matrix is mutated by its own closed-form rule.

use thiserror::Error;

use crate::cluster::QuantumSeed;
use crate::laurent::{LaurentError, LaurentPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassicalError {
    #[error("index {0} is not exchangeable")]
    NotExchangeable(usize),
    #[error("exchange division failed in direction {k}: {source}")]
    Division { k: usize, source: LaurentError },
}

/// A commutative seed: variables and the exchange matrix as a `K × K_ex` table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalSeed {
    pub vars: Vec<LaurentPoly>,
    pub exchangeable: Vec<usize>,
    /// `b[i][c]` is `b_{i, exchangeable[c]}`.
    pub b: Vec<Vec<i64>>,
}

impl ClassicalSeed {
    /// Initial cluster `x_1, …, x_K` with the given exchange matrix.
    pub fn new(b: Vec<Vec<i64>>, exchangeable: Vec<usize>) -> Self {
        let k = b.len();
        Self { vars: (0..k).map(|i| LaurentPoly::var(k, i)).collect(), exchangeable, b }
    }

    /// The classical shadow of a quantum seed's initial exchange data.
    pub fn from_quantum(seed: &QuantumSeed) -> Self {
        Self::new(seed.b().rows().to_vec(), seed.exchangeable().to_vec())
    }

    fn col(&self, k: usize) -> Option<usize> {
        self.exchangeable.iter().position(|&x| x == k)
    }

    /// `x'_k = (∏_{b_ik>0} x_i^{b_ik} + ∏_{b_ik<0} x_i^{−b_ik}) / x_k`.
    pub fn mutate(&self, k: usize) -> Result<ClassicalSeed, ClassicalError> {
        let ck = self.col(k).ok_or(ClassicalError::NotExchangeable(k))?;
        let n = self.vars.len();
        let mut pos = LaurentPoly::one(n);
        let mut neg = LaurentPoly::one(n);
        for i in 0..n {
            let bik = self.b[i][ck];
            if bik > 0 {
                pos = &pos * &self.vars[i].pow(bik as u32);
            } else if bik < 0 {
                neg = &neg * &self.vars[i].pow((-bik) as u32);
            }
        }
        let numerator = &pos + &neg;
        let bound = 16 * numerator.len() + 1024;
        let new_var = numerator
            .exact_div(&self.vars[k], bound)
            .map_err(|source| ClassicalError::Division { k, source })?;
        let mut vars = self.vars.clone();
        vars[k] = new_var;

        let b = (0..n)
            .map(|i| {
                self.exchangeable
                    .iter()
                    .enumerate()
                    .map(|(cj, &j)| {
                        let bij = self.b[i][cj];
                        if i == k || j == k {
                            return -bij;
                        }
                        let bik = self.b[i][ck];
                        let bkj = self.b[k][cj];
                        if bik > 0 && bkj > 0 {
                            bij + bik * bkj
                        } else if bik < 0 && bkj < 0 {
                            bij - bik * bkj
                        } else {
                            bij
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(ClassicalSeed { vars, exchangeable: self.exchangeable.clone(), b })
    }

    pub fn mutate_seq(&self, ks: &[usize]) -> Result<ClassicalSeed, ClassicalError> {
        ks.iter().try_fold(self.clone(), |s, &k| s.mutate(k))
    }
}

/// Index of the first variable whose q = 1 specialization disagrees with the oracle.
pub fn first_q1_mismatch(qseed: &QuantumSeed, cseed: &ClassicalSeed) -> Option<usize> {
    qseed
        .vars()
        .iter()
        .zip(&cseed.vars)
        .position(|(q, c)| &q.specialize_q1() != c)
        .or_else(|| (qseed.vars().len() != cseed.vars.len()).then_some(0))
}

/// `true` iff every quantum variable specializes to the classical one.
pub fn compare_q1(qseed: &QuantumSeed, cseed: &ClassicalSeed) -> bool {
    first_q1_mismatch(qseed, cseed).is_none()
}
