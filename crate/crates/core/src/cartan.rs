//! Symmetric Cartan data, weight and root lattice arithmetic, and the Weyl
//! group action on weights.
//!
//! Weights are stored in hybrid coordinates `μ = Σ m_i ϖ_i − Σ c_j α_j`. Every
//! pairing the seed construction needs is of the form (weight, root-lattice
//! vector), which is an integer in these coordinates without ever inverting
//! the Cartan matrix (singular in affine type).

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Matrix and word indices in these errors are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartanError {
    #[error("Cartan matrix is empty")]
    Empty,
    #[error("Cartan matrix is not square: row {row} has length {len}, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("Cartan diagonal entry a[{i}][{i}] = {value}, expected 2")]
    Diagonal { i: usize, value: i64 },
    #[error("Cartan entry sign: a[{i}][{j}] = {value} must be <= 0 off the diagonal")]
    Sign { i: usize, j: usize, value: i64 },
    #[error("Cartan matrix is not symmetric: a[{i}][{j}] = {aij} but a[{j}][{i}] = {aji}")]
    Asymmetric { i: usize, j: usize, aij: i64, aji: i64 },
    #[error("letter {letter} at position {position} is outside 1..={rank}")]
    LetterOutOfRange { position: usize, letter: usize, rank: usize },
}

/// A symmetric generalized Cartan matrix. Indices are 0-based internally.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CartanDatum {
    a: Vec<Vec<i64>>,
}

impl CartanDatum {
    pub fn new(a: Vec<Vec<i64>>) -> Result<Self, CartanError> {
        let n = a.len();
        if n == 0 {
            return Err(CartanError::Empty);
        }
        for (row, r) in a.iter().enumerate() {
            if r.len() != n {
                return Err(CartanError::NotSquare { row: row + 1, len: r.len(), expected: n });
            }
        }
        for i in 0..n {
            if a[i][i] != 2 {
                return Err(CartanError::Diagonal { i: i + 1, value: a[i][i] });
            }
            for j in 0..n {
                if i != j && a[i][j] > 0 {
                    return Err(CartanError::Sign { i: i + 1, j: j + 1, value: a[i][j] });
                }
                if a[i][j] != a[j][i] {
                    return Err(CartanError::Asymmetric { i: i + 1, j: j + 1, aij: a[i][j], aji: a[j][i] });
                }
            }
        }
        Ok(Self { a })
    }

    /// Finite type A_n: the path graph on `n` nodes.
    pub fn type_a(n: usize) -> Self {
        let mut a = vec![vec![0; n]; n];
        for i in 0..n {
            a[i][i] = 2;
            if i + 1 < n {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
        }
        Self::new(a).expect("type A matrix is valid")
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.a
    }

    /// `⟨h_i, μ⟩ = m_i − (A c)_i`.
    pub fn coroot_pair(&self, i: usize, mu: &Weight) -> i64 {
        debug_assert_eq!(mu.rank(), self.rank());
        let ac: i64 = self.a[i].iter().zip(&mu.c).map(|(a, c)| a * c).sum();
        mu.m[i] - ac
    }

    /// The invariant form `(μ, β)` for `β = Σ e_j α_j`, i.e. `Σ_j e_j ⟨h_j, μ⟩`.
    pub fn pair_weight_root(&self, mu: &Weight, beta: &RootVec) -> i64 {
        debug_assert_eq!(beta.rank(), self.rank());
        beta.0
            .iter()
            .enumerate()
            .filter(|(_, e)| **e != 0)
            .map(|(j, e)| e * self.coroot_pair(j, mu))
            .sum()
    }

    /// `s_i(μ) = μ − ⟨h_i, μ⟩ α_i`.
    pub fn reflect(&self, i: usize, mu: &Weight) -> Weight {
        let p = self.coroot_pair(i, mu);
        let mut out = mu.clone();
        // subtracting p·α_i raises the c-coordinate by p
        out.c[i] += p;
        out
    }

    /// Applies `s_{w_1} s_{w_2} ⋯ s_{w_l}` to `μ`: the last letter acts first.
    pub fn weyl_apply(&self, word: &WeylWord, mu: &Weight) -> Weight {
        word.letters()
            .iter()
            .rev()
            .fold(mu.clone(), |acc, &i| self.reflect(i, &acc))
    }

    /// The roots `β_k = s_{i_1} ⋯ s_{i_{k-1}}(α_{i_k})` of a word.
    pub fn word_roots(&self, word: &WeylWord) -> Vec<RootVec> {
        let n = self.rank();
        let letters = word.letters();
        (0..letters.len())
            .map(|k| {
                let prefix = WeylWord(letters[..k].to_vec());
                let beta = self.weyl_apply(&prefix, &Weight::simple_root(n, letters[k]));
                beta.as_root().expect("reflections preserve the root lattice")
            })
            .collect()
    }

    /// A word is reduced iff each `β_k` is a positive root.
    pub fn is_reduced(&self, word: &WeylWord) -> bool {
        word.letters().iter().all(|&i| i < self.rank())
            && self
                .word_roots(word)
                .iter()
                .all(|b| b.0.iter().all(|&c| c >= 0))
    }
}

/// `Σ_j c_j α_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootVec(pub Vec<i64>);

impl RootVec {
    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn simple(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Self(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }
}

impl Add for &RootVec {
    type Output = RootVec;
    fn add(self, rhs: &RootVec) -> RootVec {
        RootVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

/// `μ = Σ m_i ϖ_i − Σ c_j α_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight {
    pub m: Vec<i64>,
    pub c: Vec<i64>,
}

impl Weight {
    pub fn zero(n: usize) -> Self {
        Self { m: vec![0; n], c: vec![0; n] }
    }

    pub fn fundamental(n: usize, i: usize) -> Self {
        let mut w = Self::zero(n);
        w.m[i] = 1;
        w
    }

    pub fn simple_root(n: usize, i: usize) -> Self {
        let mut w = Self::zero(n);
        w.c[i] = -1;
        w
    }

    pub fn from_root(beta: &RootVec) -> Self {
        Self { m: vec![0; beta.rank()], c: beta.0.iter().map(|x| -x).collect() }
    }

    pub fn rank(&self) -> usize {
        self.m.len()
    }

    pub fn is_root_lattice(&self) -> bool {
        self.m.iter().all(|&x| x == 0)
    }

    pub fn as_root(&self) -> Option<RootVec> {
        self.is_root_lattice()
            .then(|| RootVec(self.c.iter().map(|x| -x).collect()))
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight {
            m: self.m.iter().map(|x| k * x).collect(),
            c: self.c.iter().map(|x| k * x).collect(),
        }
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight {
            m: self.m.iter().zip(&rhs.m).map(|(a, b)| a + b).collect(),
            c: self.c.iter().zip(&rhs.c).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight {
            m: self.m.iter().zip(&rhs.m).map(|(a, b)| a - b).collect(),
            c: self.c.iter().zip(&rhs.c).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        self.scale(-1)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &m) in self.m.iter().enumerate() {
            match m {
                0 => {}
                1 => parts.push(format!("+w{}", i + 1)),
                -1 => parts.push(format!("-w{}", i + 1)),
                _ => parts.push(format!("{:+}w{}", m, i + 1)),
            }
        }
        for (j, &c) in self.c.iter().enumerate() {
            match -c {
                0 => {}
                1 => parts.push(format!("+a{}", j + 1)),
                -1 => parts.push(format!("-a{}", j + 1)),
                x => parts.push(format!("{:+}a{}", x, j + 1)),
            }
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        let s = parts.concat();
        write!(f, "{}", s.strip_prefix('+').unwrap_or(&s))
    }
}

/// A word `(i_1, …, i_r)` in the simple reflections, 0-based letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct WeylWord(Vec<usize>);

impl WeylWord {
    pub fn new(letters: Vec<usize>, rank: usize) -> Result<Self, CartanError> {
        if let Some((position, &letter)) = letters.iter().enumerate().find(|(_, &l)| l >= rank) {
            return Err(CartanError::LetterOutOfRange { position: position + 1, letter: letter + 1, rank });
        }
        Ok(Self(letters))
    }

    /// Builds a word from the 1-based letters used in all user-facing I/O.
    pub fn from_one_based(letters: &[usize], rank: usize) -> Result<Self, CartanError> {
        if let Some((position, &letter)) =
            letters.iter().enumerate().find(|(_, &l)| l == 0 || l > rank)
        {
            return Err(CartanError::LetterOutOfRange { position: position + 1, letter, rank });
        }
        Ok(Self(letters.iter().map(|l| l - 1).collect()))
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|l| l + 1).collect()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The prefix `(i_1, …, i_k)`, i.e. the word of `u_k`.
    pub fn prefix(&self, k: usize) -> WeylWord {
        WeylWord(self.0[..k].to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a2() -> CartanDatum {
        CartanDatum::type_a(2)
    }

    fn affine_a1() -> CartanDatum {
        CartanDatum::new(vec![vec![2, -2], vec![-2, 2]]).unwrap()
    }

    fn w(m: &[i64], c: &[i64]) -> Weight {
        Weight { m: m.to_vec(), c: c.to_vec() }
    }

    #[test]
    fn rejects_malformed_matrices() {
        assert!(matches!(
            CartanDatum::new(vec![vec![2, 1], vec![1, 2]]),
            Err(CartanError::Sign { i: 1, j: 2, value: 1 })
        ));
        assert!(matches!(
            CartanDatum::new(vec![vec![2, -1], vec![-2, 2]]),
            Err(CartanError::Asymmetric { .. })
        ));
        assert!(matches!(
            CartanDatum::new(vec![vec![1]]),
            Err(CartanError::Diagonal { .. })
        ));
        assert!(matches!(
            CartanDatum::new(vec![vec![2, -1]]),
            Err(CartanError::NotSquare { .. })
        ));
        assert!(CartanError::Sign { i: 0, j: 1, value: 1 }
            .to_string()
            .contains("Cartan entry sign"));
    }

    #[test]
    fn coroot_pairing_examples() {
        let d = a2();
        assert_eq!(d.coroot_pair(0, &Weight::fundamental(2, 0)), 1);
        // ⟨h_2, ϖ_1 − α_1⟩ = m_2 − (A·e_1)_2 = 0 − (−1)
        let mu = w(&[1, 0], &[1, 0]);
        let c = [1, 0];
        let oracle = mu.m[1] - (d.entry(1, 0) * c[0] + d.entry(1, 1) * c[1]);
        assert_eq!(oracle, 1);
        assert_eq!(d.coroot_pair(1, &mu), oracle);
        assert_eq!(d.coroot_pair(0, &Weight::simple_root(2, 0)), 2);
    }

    #[test]
    fn pairing_examples() {
        let d = a2();
        assert_eq!(d.pair_weight_root(&Weight::simple_root(2, 0), &RootVec::simple(2, 0)), 2);
        assert_eq!(d.pair_weight_root(&Weight::fundamental(2, 0), &RootVec::simple(2, 1)), 0);
        // (2ϖ_1 − α_1 − α_2, −α_1): ϖ part gives −2, Gram part (α_1+α_2, α_1) = 2 − 1 = 1
        let mu = w(&[2, 0], &[1, 1]);
        let beta = RootVec(vec![-1, 0]);
        let gram = |x: &[i64], y: &[i64]| -> i64 {
            (0..2).flat_map(|i| (0..2).map(move |j| (i, j)))
                .map(|(i, j)| x[i] * d.entry(i, j) * y[j])
                .sum()
        };
        let oracle = 2 * beta.0[0] - gram(&[1, 1], &beta.0);
        assert_eq!(oracle, -1);
        assert_eq!(d.pair_weight_root(&mu, &beta), -1);
    }

    #[test]
    fn reflection_examples() {
        let d = a2();
        let w1 = Weight::fundamental(2, 0);
        let w2 = Weight::fundamental(2, 1);
        assert_eq!(d.reflect(0, &w1), w(&[1, 0], &[1, 0]));
        assert_eq!(d.reflect(0, &w2), w2);
        let mut mu = w1.clone();
        for i in [0, 1, 0] {
            let next = d.reflect(i, &mu);
            assert_eq!(d.reflect(i, &next), mu);
            mu = next;
        }
        assert_eq!(mu, w(&[1, 0], &[1, 1]));
    }

    #[test]
    fn weyl_apply_examples() {
        let d = a2();
        let mu = w(&[3, -1], &[2, 5]);
        assert_eq!(d.weyl_apply(&WeylWord::default(), &mu), mu);
        let u2 = WeylWord::new(vec![0, 1], 2).unwrap();
        assert_eq!(d.weyl_apply(&u2, &Weight::fundamental(2, 1)), w(&[0, 1], &[1, 1]));
        let u3 = WeylWord::new(vec![0, 1, 0], 2).unwrap();
        assert_eq!(d.weyl_apply(&u3, &Weight::fundamental(2, 0)), w(&[1, 0], &[1, 1]));
    }

    #[test]
    fn reducedness_examples() {
        assert!(a2().is_reduced(&WeylWord::new(vec![0, 1, 0], 2).unwrap()));
        assert!(!a2().is_reduced(&WeylWord::new(vec![0, 0], 2).unwrap()));
        assert!(!a2().is_reduced(&WeylWord::new(vec![0, 1, 0, 1], 2).unwrap()));
        assert!(affine_a1().is_reduced(&WeylWord::new(vec![0, 1, 0, 1], 2).unwrap()));
        assert!(!affine_a1().is_reduced(&WeylWord::new(vec![0, 1, 1], 2).unwrap()));
    }

    #[test]
    fn one_based_words() {
        let word = WeylWord::from_one_based(&[1, 2, 1], 2).unwrap();
        assert_eq!(word.letters(), &[0, 1, 0]);
        assert_eq!(word.to_one_based(), vec![1, 2, 1]);
        assert!(WeylWord::from_one_based(&[0], 2).is_err());
        assert!(WeylWord::from_one_based(&[3], 2).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(w(&[1, 0], &[1, 1]).to_string(), "w1-a1-a2");
        assert_eq!(Weight::zero(2).to_string(), "0");
    }

    fn cartans() -> Vec<CartanDatum> {
        vec![
            CartanDatum::type_a(1),
            a2(),
            CartanDatum::type_a(3),
            CartanDatum::type_a(4),
            affine_a1(),
            CartanDatum::new(vec![
                vec![2, -1, 0, 0],
                vec![-1, 2, -1, -1],
                vec![0, -1, 2, 0],
                vec![0, -1, 0, 2],
            ])
            .unwrap(),
            CartanDatum::new(vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]]).unwrap(),
        ]
    }

    fn datum_and_weights() -> impl Strategy<Value = (CartanDatum, Weight, Weight, RootVec, RootVec, usize)> {
        (0..cartans().len()).prop_flat_map(|idx| {
            let d = cartans()[idx].clone();
            let n = d.rank();
            let v = move || prop::collection::vec(-5i64..=5, n);
            (Just(d), v(), v(), v(), v(), v(), v(), 0..n).prop_map(|(d, m1, c1, m2, c2, b1, b2, i)| {
                (d, Weight { m: m1, c: c1 }, Weight { m: m2, c: c2 }, RootVec(b1), RootVec(b2), i)
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn reflection_is_involutive((d, mu, _, _, _, i) in datum_and_weights()) {
            prop_assert_eq!(d.reflect(i, &d.reflect(i, &mu)), mu);
        }

        #[test]
        fn pairing_is_bilinear((d, mu, nu, beta, gamma, _) in datum_and_weights()) {
            prop_assert_eq!(
                d.pair_weight_root(&(&mu + &nu), &beta),
                d.pair_weight_root(&mu, &beta) + d.pair_weight_root(&nu, &beta)
            );
            prop_assert_eq!(
                d.pair_weight_root(&mu, &(&beta + &gamma)),
                d.pair_weight_root(&mu, &beta) + d.pair_weight_root(&mu, &gamma)
            );
        }

        #[test]
        fn form_is_weyl_invariant((d, mu, _, beta, _, i) in datum_and_weights()) {
            let s_beta = d.reflect(i, &Weight::from_root(&beta)).as_root().unwrap();
            prop_assert_eq!(d.pair_weight_root(&d.reflect(i, &mu), &s_beta), d.pair_weight_root(&mu, &beta));
        }

        #[test]
        fn weyl_apply_matches_iterated_reflection(
            (d, _, _, _, _, j) in datum_and_weights(),
            raw in prop::collection::vec(0usize..16, 0..8),
        ) {
            let n = d.rank();
            let word = WeylWord::new(raw.iter().map(|x| x % n).collect(), n).unwrap();
            let mut expected = Weight::simple_root(n, j);
            for &i in word.letters().iter().rev() {
                expected = d.reflect(i, &expected);
            }
            prop_assert_eq!(d.weyl_apply(&word, &Weight::simple_root(n, j)), expected);
        }

        #[test]
        fn reduced_words_have_distinct_roots(
            (d, _, _, _, _, _) in datum_and_weights(),
            raw in prop::collection::vec(0usize..16, 0..8),
        ) {
            let n = d.rank();
            let word = WeylWord::new(raw.iter().map(|x| x % n).collect(), n).unwrap();
            if d.is_reduced(&word) {
                let roots = d.word_roots(&word);
                let distinct: std::collections::BTreeSet<_> = roots.iter().collect();
                prop_assert_eq!(distinct.len(), roots.len());
            }
        }
    }
}
