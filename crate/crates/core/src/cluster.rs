//! Quantum seeds and their mutation.
//!
//! Cluster variables are always stored in the coordinates of the *initial*
//! quantum torus; the current seed's `L` is carried separately and drives
//! the exchange arithmetic. Mutation of a variable is computed as
//!
//! ```text
//! X'_k = X_k^{-1} · ( v^{Σ_j λ_kj a'_j} M' + v^{Σ_j λ_kj a''_j} M'' )
//! ```
//!
//! where `M'`, `M''` are the normalized products of current variables with
//! exponents `e_k + a'` and `e_k + a''` (both nonnegative), and the left
//! division is exact by the quantum Laurent phenomenon.

use std::sync::Arc;

use thiserror::Error;

use crate::cartan::Weight;
use crate::qcoeff::QCoeff;
use crate::torus::{default_step_bound, ExpVec, LMatrix, TorusElem, TorusError};

/// Dense integer matrix, row-major.
pub type Matrix = Vec<Vec<i64>>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClusterError {
    #[error("index {k} is not exchangeable")]
    NotExchangeable { k: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("principal part of B is not skew-symmetric at ({i}, {j})")]
    PrincipalNotSkew { i: usize, j: usize },
    #[error("(L, B) is not compatible at ({}, {}): sum_k l[{}][k] b[k][{}] = {value}, expected {expected}", .i + 1, .j + 1, .i + 1, .j + 1)]
    Incompatible { i: usize, j: usize, value: i64, expected: i64 },
    #[error("cluster monomial exponents must be nonnegative, got {0:?}")]
    NegativeExponent(Vec<i64>),
    #[error("matrix mutation forms disagree: {0}")]
    Inconsistent(String),
    #[error("invariant `{check}` violated: {detail}")]
    Invariant { check: &'static str, detail: String },
    #[error(transparent)]
    Torus(#[from] TorusError),
}

/// An integer `K × K_ex` matrix whose principal part is skew-symmetric.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BMatrix {
    exchangeable: Vec<usize>,
    rows: Vec<Vec<i64>>,
}

impl BMatrix {
    /// `rows[i][c]` is `b_{i, exchangeable[c]}`.
    pub fn new(rows: Vec<Vec<i64>>, exchangeable: Vec<usize>) -> Result<Self, ClusterError> {
        let k = rows.len();
        if exchangeable.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ClusterError::Shape("exchangeable indices must be strictly increasing".into()));
        }
        if exchangeable.last().is_some_and(|&x| x >= k) {
            return Err(ClusterError::Shape(format!("exchangeable index out of range 0..{k}")));
        }
        if let Some(i) = rows.iter().position(|r| r.len() != exchangeable.len()) {
            return Err(ClusterError::Shape(format!(
                "row {i} has {} columns, expected {}",
                rows[i].len(),
                exchangeable.len()
            )));
        }
        let b = Self { exchangeable, rows };
        for &i in &b.exchangeable {
            for &j in &b.exchangeable {
                if b.get(i, j) != -b.get(j, i) {
                    return Err(ClusterError::PrincipalNotSkew { i, j });
                }
            }
        }
        Ok(b)
    }

    /// Builds `B̃` from a full `K × K` matrix by keeping the exchangeable columns.
    pub fn from_square(full: &[Vec<i64>], exchangeable: Vec<usize>) -> Result<Self, ClusterError> {
        let rows = full
            .iter()
            .map(|r| exchangeable.iter().map(|&j| r[j]).collect())
            .collect();
        Self::new(rows, exchangeable)
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn exchangeable(&self) -> &[usize] {
        &self.exchangeable
    }

    pub fn is_exchangeable(&self, k: usize) -> bool {
        self.exchangeable.binary_search(&k).is_ok()
    }

    pub fn column_of(&self, k: usize) -> Option<usize> {
        self.exchangeable.binary_search(&k).ok()
    }

    /// `b_{ik}` for a global index `k ∈ K_ex`.
    pub fn get(&self, i: usize, k: usize) -> i64 {
        let c = self.column_of(k).expect("column index must be exchangeable");
        self.rows[i][c]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    fn require_exchangeable(&self, k: usize) -> Result<usize, ClusterError> {
        self.column_of(k).ok_or(ClusterError::NotExchangeable { k })
    }
}

/// The compatibility degree `d` with `Σ_t λ_it b_tj = δ_ij d`.
///
/// Returns `Ok(None)` when there are no exchangeable indices (every `d`
/// works vacuously).
pub fn check_compatible(l: &LMatrix, b: &BMatrix) -> Result<Option<i64>, ClusterError> {
    let k = l.rank();
    if b.num_rows() != k {
        return Err(ClusterError::Shape(format!("L is {k}x{k} but B has {} rows", b.num_rows())));
    }
    let entry = |i: usize, j: usize| -> i64 { (0..k).map(|t| l.get(i, t) * b.get(t, j)).sum() };
    let Some(&first) = b.exchangeable().first() else {
        return Ok(None);
    };
    let d = entry(first, first);
    if d < 1 {
        return Err(ClusterError::Incompatible { i: first, j: first, value: d, expected: 1 });
    }
    for i in 0..k {
        for &j in b.exchangeable() {
            let value = entry(i, j);
            let expected = if i == j { d } else { 0 };
            if value != expected {
                return Err(ClusterError::Incompatible { i, j, value, expected });
            }
        }
    }
    Ok(Some(d))
}

/// The `K × K` matrix `E` and the `K_ex × K_ex` matrix `F` of a mutation in direction `k`.
pub fn ef_matrices(b: &BMatrix, k: usize) -> Result<(Matrix, Matrix), ClusterError> {
    b.require_exchangeable(k)?;
    let n = b.num_rows();
    let e = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match (i == k, j == k) {
                    (true, true) => -1,
                    (false, true) => 0.max(-b.get(i, k)),
                    _ => i64::from(i == j),
                })
                .collect()
        })
        .collect();
    let ex = b.exchangeable();
    let f = ex
        .iter()
        .map(|&i| {
            ex.iter()
                .map(|&j| match (i == k, j == k) {
                    (true, true) => -1,
                    (true, false) => 0.max(b.get(k, j)),
                    _ => i64::from(i == j),
                })
                .collect()
        })
        .collect();
    Ok((e, f))
}

fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).map(|t| row[t] * b[t][j]).sum()).collect())
        .collect()
}

fn transpose(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

/// `μ_k(L) = Eᵀ L E` and `μ_k(B̃) = E B̃ F`, cross-checked entrywise against
/// the closed forms.
pub fn mutate_matrices(l: &LMatrix, b: &BMatrix, k: usize) -> Result<(LMatrix, BMatrix), ClusterError> {
    let (e, f) = ef_matrices(b, k)?;
    let n = l.rank();
    if b.num_rows() != n {
        return Err(ClusterError::Shape(format!("L is {n}x{n} but B has {} rows", b.num_rows())));
    }
    let l_prod = matmul(&matmul(&transpose(&e), &l.rows()), &e);
    let b_prod = matmul(&matmul(&e, b.rows()), &f);

    let neg_col: Vec<i64> = (0..n).map(|t| 0.max(-b.get(t, k))).collect();
    let mut l_closed = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            l_closed[i][j] = if i == j {
                0
            } else if i == k {
                -l.get(k, j) + (0..n).map(|t| neg_col[t] * l.get(t, j)).sum::<i64>()
            } else if j == k {
                -l.get(i, k) + (0..n).map(|t| neg_col[t] * l.get(i, t)).sum::<i64>()
            } else {
                l.get(i, j)
            };
        }
    }
    let ex = b.exchangeable();
    let b_closed: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            ex.iter()
                .map(|&j| {
                    let bij = b.get(i, j);
                    if i == k || j == k {
                        -bij
                    } else {
                        let (bik, bkj) = (b.get(i, k), b.get(k, j));
                        let sign = if bik < 0 { -1 } else { 1 };
                        bij + sign * 0.max(bik * bkj)
                    }
                })
                .collect()
        })
        .collect();

    if l_prod != l_closed {
        return Err(ClusterError::Inconsistent(format!("EᵀLE = {l_prod:?}, closed form = {l_closed:?}")));
    }
    if b_prod != b_closed {
        return Err(ClusterError::Inconsistent(format!("EB̃F = {b_prod:?}, closed form = {b_closed:?}")));
    }
    let l_new = LMatrix::new(l_closed).map_err(|e| ClusterError::Inconsistent(e.to_string()))?;
    let b_new = BMatrix::new(b_closed, ex.to_vec())?;
    Ok((l_new, b_new))
}

/// `μ_k(D)_k = −d_k + Σ_{b_ik > 0} b_ik d_i`, other entries unchanged.
pub fn mutate_dvector(d: &[Weight], b: &BMatrix, k: usize) -> Result<Vec<Weight>, ClusterError> {
    b.require_exchangeable(k)?;
    if d.len() != b.num_rows() {
        return Err(ClusterError::Shape(format!("D has {} entries, B has {} rows", d.len(), b.num_rows())));
    }
    let mut out = d.to_vec();
    out[k] = (0..d.len())
        .filter(|&i| b.get(i, k) > 0)
        .fold(-&d[k], |acc, i| &acc + &d[i].scale(b.get(i, k)));
    Ok(out)
}

/// The exponents `a'` (positive part of column `k`) and `a''` (negative part),
/// both with `−1` in position `k`.
pub fn exchange_exponents(b: &BMatrix, k: usize) -> Result<(ExpVec, ExpVec), ClusterError> {
    b.require_exchangeable(k)?;
    let n = b.num_rows();
    let build = |sign: i64| {
        ExpVec((0..n).map(|i| if i == k { -1 } else { 0.max(sign * b.get(i, k)) }).collect())
    };
    Ok((build(1), build(-1)))
}

/// `Σ_i a_i d_i`.
pub fn weight_of_exponent(grading: &[Weight], a: &ExpVec) -> Weight {
    let n = grading.first().map_or(0, Weight::rank);
    a.0.iter()
        .zip(grading)
        .filter(|(x, _)| **x != 0)
        .fold(Weight::zero(n), |acc, (&x, d)| &acc + &d.scale(x))
}

/// The common weight of all terms, or `None` for zero or inhomogeneous elements.
pub fn homogeneous_weight(grading: &[Weight], x: &TorusElem) -> Option<Weight> {
    let mut weights = x.terms().map(|(a, _)| weight_of_exponent(grading, a));
    let first = weights.next()?;
    weights.all(|w| w == first).then_some(first)
}

/// All data produced by one exchange `X_k ↦ X'_k`.
#[derive(Debug, Clone)]
pub struct Exchange {
    pub k: usize,
    pub a_prime: ExpVec,
    pub a_dprime: ExpVec,
    /// Normalized product of current variables with exponent `e_k + a'`.
    pub m_prime: TorusElem,
    /// Normalized product of current variables with exponent `e_k + a''`.
    pub m_dprime: TorusElem,
    pub new_var: TorusElem,
}

/// A quantum seed `(vars, L, B̃, D)` with variables in initial-torus coordinates.
#[derive(Debug, Clone)]
pub struct QuantumSeed {
    l: LMatrix,
    b: BMatrix,
    d: Vec<Weight>,
    vars: Vec<TorusElem>,
    history: Vec<usize>,
    torus: Arc<LMatrix>,
    grading: Arc<Vec<Weight>>,
}

impl QuantumSeed {
    /// The seed whose variables are the generators `X_i` of the torus of `l`.
    pub fn initial(l: LMatrix, b: BMatrix, d: Vec<Weight>) -> Result<Self, ClusterError> {
        let torus = Arc::new(l.clone());
        let vars = (0..l.rank()).map(|i| TorusElem::generator(&torus, i)).collect();
        let grading = Arc::new(d.clone());
        Self::from_parts(l, b, d, vars, Vec::new(), torus, grading)
    }

    /// Assembles a seed from stored parts, checking shapes only.
    pub fn from_parts(
        l: LMatrix,
        b: BMatrix,
        d: Vec<Weight>,
        vars: Vec<TorusElem>,
        history: Vec<usize>,
        torus: Arc<LMatrix>,
        grading: Arc<Vec<Weight>>,
    ) -> Result<Self, ClusterError> {
        let k = l.rank();
        if b.num_rows() != k || d.len() != k || vars.len() != k || torus.rank() != k || grading.len() != k {
            return Err(ClusterError::Shape(format!(
                "L is {k}x{k}; B has {} rows, D {} entries, {} variables, initial torus rank {}, {} initial weights",
                b.num_rows(),
                d.len(),
                vars.len(),
                torus.rank(),
                grading.len()
            )));
        }
        if let Some(i) = vars.iter().position(|x| x.ambient() != &torus) {
            return Err(ClusterError::Shape(format!("variable {i} is not in the initial torus")));
        }
        let n = d.first().map_or(0, Weight::rank);
        if d.iter().chain(grading.iter()).any(|w| w.rank() != n || w.c.len() != n) {
            return Err(ClusterError::Shape("weights have inconsistent ranks".into()));
        }
        if let Some(&h) = history.iter().find(|&&h| h >= k) {
            return Err(ClusterError::Shape(format!("history entry {h} out of range")));
        }
        Ok(Self { l, b, d, vars, history, torus, grading })
    }

    pub fn rank(&self) -> usize {
        self.l.rank()
    }

    pub fn l(&self) -> &LMatrix {
        &self.l
    }

    pub fn b(&self) -> &BMatrix {
        &self.b
    }

    pub fn d(&self) -> &[Weight] {
        &self.d
    }

    pub fn vars(&self) -> &[TorusElem] {
        &self.vars
    }

    pub fn history(&self) -> &[usize] {
        &self.history
    }

    pub fn torus(&self) -> &Arc<LMatrix> {
        &self.torus
    }

    /// The initial weights `d_i^{init}` defining `wt(X^a)`.
    pub fn grading(&self) -> &Arc<Vec<Weight>> {
        &self.grading
    }

    pub fn exchangeable(&self) -> &[usize] {
        self.b.exchangeable()
    }

    pub fn frozen(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&i| !self.b.is_exchangeable(i)).collect()
    }

    /// Replaces `L` (used for fault injection and by deserialization tests).
    pub fn with_l(mut self, l: LMatrix) -> Result<Self, ClusterError> {
        if l.rank() != self.rank() {
            return Err(ClusterError::Shape("L rank changed".into()));
        }
        self.l = l;
        Ok(self)
    }

    pub fn with_vars(mut self, vars: Vec<TorusElem>) -> Result<Self, ClusterError> {
        if vars.len() != self.rank() || vars.iter().any(|x| x.ambient() != &self.torus) {
            return Err(ClusterError::Shape("replacement variables do not fit the seed".into()));
        }
        self.vars = vars;
        Ok(self)
    }

    pub fn with_d(mut self, d: Vec<Weight>) -> Result<Self, ClusterError> {
        if d.len() != self.rank() {
            return Err(ClusterError::Shape("D length changed".into()));
        }
        self.d = d;
        Ok(self)
    }

    /// The normalized product `v^{Σ_{i>j} a_i a_j λ_ij} x_1^{a_1} ⋯ x_K^{a_K}`
    /// of current variables, in the initial torus.
    pub fn cluster_monomial(&self, a: &ExpVec) -> Result<TorusElem, ClusterError> {
        if a.len() != self.rank() {
            return Err(ClusterError::Shape(format!("exponent of length {}, expected {}", a.len(), self.rank())));
        }
        if !a.is_nonneg() {
            return Err(ClusterError::NegativeExponent(a.0.clone()));
        }
        let mut prefactor = 0;
        for i in 0..a.len() {
            for j in 0..i {
                prefactor += a.0[i] * a.0[j] * self.l.get(i, j);
            }
        }
        let mut out = TorusElem::one(&self.torus);
        for (x, &p) in self.vars.iter().zip(&a.0) {
            if p > 0 {
                out = out.mul(&x.pow(p as u32))?;
            }
        }
        Ok(out.shift(prefactor))
    }

    /// Computes `X'_k` together with the ingredients of its exchange relation.
    pub fn exchange(&self, k: usize) -> Result<Exchange, ClusterError> {
        let (a_prime, a_dprime) = exchange_exponents(&self.b, k)?;
        let ek = ExpVec::unit(self.rank(), k);
        let m_prime = self.cluster_monomial(&ek.add(&a_prime))?;
        let m_dprime = self.cluster_monomial(&ek.add(&a_dprime))?;
        let row = |a: &ExpVec| -> i64 { (0..self.rank()).map(|j| self.l.get(k, j) * a.0[j]).sum() };
        let numerator = m_prime.shift(row(&a_prime)).try_add(&m_dprime.shift(row(&a_dprime)))?;
        let bound = default_step_bound(numerator.num_terms());
        let new_var = self.vars[k].exact_left_div(&numerator, bound)?;
        Ok(Exchange { k, a_prime, a_dprime, m_prime, m_dprime, new_var })
    }

    /// `X'_k` as an element of the initial torus.
    pub fn mutate_variable(&self, k: usize) -> Result<TorusElem, ClusterError> {
        Ok(self.exchange(k)?.new_var)
    }

    /// Mutation without re-validating the resulting seed.
    pub fn mutate_unchecked(&self, k: usize) -> Result<(QuantumSeed, Exchange), ClusterError> {
        let (l, b) = mutate_matrices(&self.l, &self.b, k)?;
        let d = mutate_dvector(&self.d, &self.b, k)?;
        let exchange = self.exchange(k)?;
        let mut vars = self.vars.clone();
        vars[k] = exchange.new_var.clone();
        let mut history = self.history.clone();
        history.push(k);
        let seed = QuantumSeed {
            l,
            b,
            d,
            vars,
            history,
            torus: Arc::clone(&self.torus),
            grading: Arc::clone(&self.grading),
        };
        Ok((seed, exchange))
    }

    /// Mutation in direction `k`, re-checking every seed invariant.
    pub fn mutate(&self, k: usize) -> Result<QuantumSeed, ClusterError> {
        let d_before = check_compatible(&self.l, &self.b)?;
        let (seed, _) = self.mutate_unchecked(k)?;
        let d_after = check_compatible(&seed.l, &seed.b)?;
        if d_after != d_before {
            return Err(ClusterError::Invariant {
                check: "compatible",
                detail: format!("compatibility degree changed from {d_before:?} to {d_after:?}"),
            });
        }
        seed.check_q_commuting()?;
        seed.check_homogeneity()?;
        Ok(seed)
    }

    pub fn mutate_seq(&self, ks: &[usize]) -> Result<QuantumSeed, ClusterError> {
        ks.iter().try_fold(self.clone(), |seed, &k| seed.mutate(k))
    }

    /// `q_commute_exponent(x_i, x_j) = λ_ij` for all pairs.
    pub fn check_q_commuting(&self) -> Result<(), ClusterError> {
        for i in 0..self.rank() {
            for j in i + 1..self.rank() {
                let got = self.vars[i].q_commute_exponent(&self.vars[j]).map_err(|e| ClusterError::Invariant {
                    check: "q_commute",
                    detail: format!("variables {} and {}: {e}", i + 1, j + 1),
                })?;
                if got != self.l.get(i, j) {
                    return Err(ClusterError::Invariant {
                        check: "q_commute",
                        detail: format!(
                            "variables {} and {} have exponent {got}, L says {}",
                            i + 1,
                            j + 1,
                            self.l.get(i, j)
                        ),
                    });
                }
            }
        }
        Ok(())
    }

    /// Each variable is homogeneous of weight equal to its `D` entry.
    pub fn check_homogeneity(&self) -> Result<(), ClusterError> {
        for (i, x) in self.vars.iter().enumerate() {
            match homogeneous_weight(&self.grading, x) {
                Some(w) if w == self.d[i] => {}
                Some(w) => {
                    return Err(ClusterError::Invariant {
                        check: "homogeneity",
                        detail: format!("variable {} has weight {w}, D says {}", i + 1, self.d[i]),
                    })
                }
                None => {
                    return Err(ClusterError::Invariant {
                        check: "homogeneity",
                        detail: format!("variable {} is not homogeneous", i + 1),
                    })
                }
            }
        }
        Ok(())
    }

    /// Full validation: compatibility, pairwise q-commutation and homogeneity.
    pub fn validate(&self) -> Result<Option<i64>, ClusterError> {
        let d = check_compatible(&self.l, &self.b)?;
        self.check_q_commuting()?;
        self.check_homogeneity()?;
        Ok(d)
    }

    /// Multiplies each variable by `v^{-(d_i, d_i)/2}` given the form `(d_i, d_i)`.
    ///
    /// `self_pairings[i]` must be even.
    pub fn rescaled_vars(&self, self_pairings: &[i64]) -> Vec<TorusElem> {
        self.vars
            .iter()
            .zip(self_pairings)
            .map(|(x, &p)| {
                debug_assert!(p % 2 == 0);
                x.scale(&QCoeff::v_pow(-p / 2))
            })
            .collect()
    }
}

/// Seeds compare by `(L, B̃, D, vars)`; the mutation history is ignored.
impl PartialEq for QuantumSeed {
    fn eq(&self, other: &Self) -> bool {
        self.l == other.l
            && self.b == other.b
            && self.d == other.d
            && self.vars == other.vars
            && self.grading == other.grading
    }
}

impl Eq for QuantumSeed {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::RootVec;

    fn root(c: &[i64]) -> Weight {
        Weight::from_root(&RootVec(c.to_vec()))
    }

    /// The A₂ seed for the word (1,2,1), written out by hand.
    fn a2_seed() -> QuantumSeed {
        let mut l = LMatrix::zero(3);
        l.set_skew(1, 0, 1);
        l.set_skew(2, 0, -1);
        l.set_skew(2, 1, 0);
        let b = BMatrix::new(vec![vec![0], vec![-1], vec![1]], vec![0]).unwrap();
        let d = vec![root(&[-1, 0]), root(&[-1, -1]), root(&[-1, -1])];
        QuantumSeed::initial(l, b, d).unwrap()
    }

    #[test]
    fn bmatrix_validation() {
        assert!(matches!(
            BMatrix::new(vec![vec![0, 1], vec![1, 0]], vec![0, 1]),
            Err(ClusterError::PrincipalNotSkew { .. })
        ));
        assert!(BMatrix::new(vec![vec![0], vec![1]], vec![1, 0]).is_err());
        assert!(BMatrix::new(vec![vec![0]], vec![3]).is_err());
        let b = BMatrix::from_square(&[vec![0, 2, 0], vec![-2, 0, 1], vec![0, -1, 0]], vec![0, 1]).unwrap();
        assert_eq!(b.get(1, 0), -2);
        assert_eq!(b.get(2, 1), -1);
    }

    #[test]
    fn compatibility_examples() {
        let s = a2_seed();
        assert_eq!(check_compatible(s.l(), s.b()), Ok(Some(2)));
        assert!(matches!(
            check_compatible(&LMatrix::zero(3), s.b()),
            Err(ClusterError::Incompatible { i: 0, j: 0, .. })
        ));
        let (l1, b1) = mutate_matrices(s.l(), s.b(), 0).unwrap();
        assert_eq!(check_compatible(&l1, &b1), Ok(Some(2)));
    }

    #[test]
    fn ef_examples() {
        let s = a2_seed();
        let (e, f) = ef_matrices(s.b(), 0).unwrap();
        assert_eq!(e, vec![vec![-1, 0, 0], vec![1, 1, 0], vec![0, 0, 1]]);
        assert_eq!(matmul(&e, &e), vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(f, vec![vec![-1]]);

        let zero_col = BMatrix::new(vec![vec![0, 0], vec![0, 0], vec![0, 5]], vec![0, 1]).unwrap();
        let (e, _) = ef_matrices(&zero_col, 0).unwrap();
        assert_eq!(e, vec![vec![-1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(ef_matrices(s.b(), 1), Err(ClusterError::NotExchangeable { k: 1 }));
    }

    #[test]
    fn matrix_mutation_examples() {
        let s = a2_seed();
        let (l1, b1) = mutate_matrices(s.l(), s.b(), 0).unwrap();
        assert_eq!(b1.rows(), &[vec![0], vec![1], vec![-1]]);
        assert_eq!((l1.get(1, 0), l1.get(2, 0), l1.get(2, 1)), (-1, 1, 0));
        // Eᵀ L E by hand: row/col 1 of L negated plus column 2 (b_21 = −1 gives e_21 = 1)
        assert_eq!((l1.get(0, 1), l1.get(0, 2)), (1, -1));
        let (l2, b2) = mutate_matrices(&l1, &b1, 0).unwrap();
        assert_eq!((&l2, &b2), (s.l(), s.b()));
    }

    #[test]
    fn dvector_examples() {
        let s = a2_seed();
        let d1 = mutate_dvector(s.d(), s.b(), 0).unwrap();
        assert_eq!(d1[0], root(&[0, -1]));
        // cross-oracle through the negative part: d_k − Σ_{b_ik<0} (−b_ik) d_i
        let alt = (0..3)
            .filter(|&i| s.b().get(i, 0) < 0)
            .fold(s.d()[0].clone(), |acc, i| &acc - &s.d()[i].scale(-s.b().get(i, 0)));
        assert_eq!(d1[0], -&alt);
        assert_eq!(&d1[1..], &s.d()[1..]);
        assert_eq!(mutate_dvector(&d1, s.b(), 0).unwrap(), s.d());

        let zero_col = BMatrix::new(vec![vec![0], vec![0]], vec![0]).unwrap();
        let d = vec![root(&[-1, 0]), root(&[0, -3])];
        assert_eq!(mutate_dvector(&d, &zero_col, 0).unwrap()[0], root(&[1, 0]));
    }

    #[test]
    fn exchange_exponent_examples() {
        let s = a2_seed();
        let (ap, app) = exchange_exponents(s.b(), 0).unwrap();
        assert_eq!(ap, ExpVec(vec![-1, 0, 1]));
        assert_eq!(app, ExpVec(vec![-1, 1, 0]));
        let lk = |a: &ExpVec| -> i64 { (0..3).map(|i| a.0[i] * s.l().get(0, i)).sum() };
        assert_eq!(lk(&ap) - lk(&app), 2);

        let zero_col = BMatrix::new(vec![vec![0], vec![0]], vec![0]).unwrap();
        let (ap, app) = exchange_exponents(&zero_col, 0).unwrap();
        assert_eq!(ap, ExpVec(vec![-1, 0]));
        assert_eq!(ap, app);
    }

    #[test]
    fn first_mutation_of_a2() {
        let s = a2_seed();
        let t = s.torus().clone();
        let x1 = s.mutate_variable(0).unwrap();
        let expected = &TorusElem::monomial(&t, ExpVec(vec![-1, 0, 1]), QCoeff::one())
            + &TorusElem::monomial(&t, ExpVec(vec![-1, 1, 0]), QCoeff::one());
        assert_eq!(x1, expected);
        let classical = x1.specialize_q1();
        let x = |i| crate::laurent::LaurentPoly::var(3, i);
        assert_eq!(&x(0) * &classical, &x(2) + &x(1));

        let s1 = s.mutate(0).unwrap();
        assert_eq!(s1.vars()[0], expected);
        assert_eq!(&s1.vars()[1..], &s.vars()[1..]);
        assert_eq!(check_compatible(s1.l(), s1.b()), Ok(Some(2)));
        assert_eq!(s1.vars()[0].q_commute_exponent(&s1.vars()[1]), Ok(1));
        assert_eq!(s1.history(), &[0]);

        let s2 = s1.mutate(0).unwrap();
        assert_eq!(s2, s);
        assert_eq!(s2.vars()[0], TorusElem::generator(&t, 0));
    }

    #[test]
    fn frozen_direction_rejected() {
        let s = a2_seed();
        assert_eq!(s.mutate(1).unwrap_err(), ClusterError::NotExchangeable { k: 1 });
        assert!(s.mutate_seq(&[0, 2]).is_err());
    }

    #[test]
    fn sequences() {
        let s = a2_seed();
        assert_eq!(s.mutate_seq(&[]).unwrap(), s);
        assert_eq!(s.mutate_seq(&[0, 0, 0, 0]).unwrap(), s);
    }

    #[test]
    fn cluster_monomials() {
        let s = a2_seed();
        let t = s.torus().clone();
        assert_eq!(s.cluster_monomial(&ExpVec::unit(3, 2)).unwrap(), s.vars()[2]);
        assert_eq!(s.cluster_monomial(&ExpVec::zero(3)).unwrap(), TorusElem::one(&t));
        let a = ExpVec(vec![2, 1, 3]);
        assert_eq!(s.cluster_monomial(&a).unwrap(), TorusElem::monomial(&t, a, QCoeff::one()));
        assert!(matches!(
            s.cluster_monomial(&ExpVec(vec![-1, 0, 0])),
            Err(ClusterError::NegativeExponent(_))
        ));
    }

    #[test]
    fn validate_detects_bad_l() {
        let s = a2_seed();
        assert_eq!(s.validate(), Ok(Some(2)));
        let mut bad = s.l().clone();
        bad.set_skew(1, 0, -1);
        let s = s.with_l(bad).unwrap();
        assert!(matches!(s.validate(), Err(ClusterError::Incompatible { i: 0, j: 0, .. })));
    }
}
