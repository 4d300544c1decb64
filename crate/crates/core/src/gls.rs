//! The initial quantum seed of `A_q(n(w))` attached to a reduced word.
//!
//! Positions in the word are numbered `1..=r` in [`GlsData`], with `0` and
//! `r + 1` as the sentinels of the successor/predecessor maps. Seed indices
//! are the 0-based positions `0..r`.

use log::warn;
use thiserror::Error;

use crate::cartan::{CartanDatum, RootVec, Weight, WeylWord};
use crate::cluster::{check_compatible, BMatrix, ClusterError, QuantumSeed};
use crate::torus::LMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GlsError {
    #[error("word is not reduced")]
    NotReduced,
    #[error("word letter outside the Cartan rank")]
    LetterOutOfRange,
    #[error("seed assertion `{check}` failed: {detail}")]
    Assertion { check: &'static str, detail: String },
    #[error(transparent)]
    Cluster(#[from] ClusterError),
}

/// Combinatorics of a reduced word `(i_1, …, i_r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlsData {
    pub word: WeylWord,
    /// `succ[s-1] = s₊ ∈ {s+1, …, r+1}`.
    pub succ: Vec<usize>,
    /// `pred[s-1] = s₋ ∈ {0, …, s-1}`.
    pub pred: Vec<usize>,
    /// `last_before[s-1][j] = s⁻(j)`: the last position before `s` carrying letter `j`, or 0.
    pub last_before: Vec<Vec<usize>>,
    /// 1-based positions `s` with `s₊ = r + 1`.
    pub frozen: Vec<usize>,
    /// `λ_s = u_s ϖ_{i_s}` with `u_s = s_{i_1} ⋯ s_{i_s}`.
    pub lambda: Vec<Weight>,
    /// `d_s = λ_s − ϖ_{i_s}`, always in the root lattice.
    pub d: Vec<Weight>,
}

impl GlsData {
    pub fn r(&self) -> usize {
        self.word.len()
    }

    /// 0-based seed indices of the exchangeable positions.
    pub fn exchangeable(&self) -> Vec<usize> {
        (0..self.r()).filter(|&s| self.succ[s] <= self.r()).collect()
    }

    pub fn is_frozen(&self, s: usize) -> bool {
        self.succ[s] == self.r() + 1
    }

    /// `d_s` as a root-lattice vector.
    pub fn d_root(&self, s: usize) -> RootVec {
        self.d[s].as_root().expect("d_s lies in the root lattice")
    }
}

pub fn analyze_word(cartan: &CartanDatum, word: &WeylWord) -> Result<GlsData, GlsError> {
    let n = cartan.rank();
    if word.letters().iter().any(|&i| i >= n) {
        return Err(GlsError::LetterOutOfRange);
    }
    if !cartan.is_reduced(word) {
        return Err(GlsError::NotReduced);
    }
    let letters = word.letters();
    let r = letters.len();
    let succ = (0..r)
        .map(|s| (s + 1..r).find(|&k| letters[k] == letters[s]).map_or(r + 1, |k| k + 1))
        .collect();
    let pred = (0..r)
        .map(|s| (0..s).rev().find(|&k| letters[k] == letters[s]).map_or(0, |k| k + 1))
        .collect();
    let last_before = (0..r)
        .map(|s| {
            (0..n)
                .map(|j| (0..s).rev().find(|&k| letters[k] == j).map_or(0, |k| k + 1))
                .collect()
        })
        .collect();
    let frozen: Vec<usize> = (1..=r)
        .filter(|&s| (s..r).all(|k| letters[k] != letters[s - 1]))
        .collect();
    let lambda: Vec<Weight> = (0..r)
        .map(|s| cartan.weyl_apply(&word.prefix(s + 1), &Weight::fundamental(n, letters[s])))
        .collect();
    let d = lambda
        .iter()
        .zip(letters)
        .map(|(l, &i)| l - &Weight::fundamental(n, i))
        .collect();
    Ok(GlsData { word: word.clone(), succ, pred, last_before, frozen, lambda, d })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArrowKind {
    Ordinary,
    Horizontal,
}

/// An arrow between 0-based vertices, with multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
    pub multiplicity: u32,
    pub kind: ArrowKind,
}

/// The quiver of the word: ordinary arrows `s → t` with multiplicity
/// `|a_{i_s i_t}|` when `s < t < s₊ < t₊`, horizontal arrows `s → s₋`.
pub fn build_quiver(g: &GlsData, cartan: &CartanDatum) -> Vec<Arrow> {
    let r = g.r();
    let letters = g.word.letters();
    let mut arrows = Vec::new();
    for s in 1..=r {
        let s_plus = g.succ[s - 1];
        for t in s + 1..=r {
            let t_plus = g.succ[t - 1];
            if t < s_plus && s_plus < t_plus {
                let m = cartan.entry(letters[s - 1], letters[t - 1]).unsigned_abs() as u32;
                if m > 0 {
                    arrows.push(Arrow { source: s - 1, target: t - 1, multiplicity: m, kind: ArrowKind::Ordinary });
                }
            }
        }
        let s_minus = g.pred[s - 1];
        if s_minus >= 1 {
            arrows.push(Arrow { source: s - 1, target: s_minus - 1, multiplicity: 1, kind: ArrowKind::Horizontal });
        }
    }
    let before = arrows.len();
    arrows.retain(|a| !(g.is_frozen(a.source) && g.is_frozen(a.target)));
    if arrows.len() != before {
        warn!("dropped {} arrows between frozen vertices", before - arrows.len());
    }
    arrows
}

/// `b_ij = #(i → j) − #(j → i)`, restricted to the exchangeable columns.
pub fn quiver_to_b(k: usize, arrows: &[Arrow], exchangeable: Vec<usize>) -> Result<BMatrix, ClusterError> {
    let mut full = vec![vec![0i64; k]; k];
    for a in arrows {
        full[a.source][a.target] += i64::from(a.multiplicity);
        full[a.target][a.source] -= i64::from(a.multiplicity);
    }
    BMatrix::from_square(&full, exchangeable)
}

/// `λ_{s,t} = (λ_s + ϖ_{i_s}, d_t)` for `s ≥ t`, extended skew-symmetrically.
pub fn lambda_matrix(g: &GlsData, cartan: &CartanDatum) -> LMatrix {
    let r = g.r();
    let n = cartan.rank();
    let mut l = LMatrix::zero(r);
    for s in 0..r {
        let left = &g.lambda[s] + &Weight::fundamental(n, g.word.letters()[s]);
        for t in 0..s {
            l.set_skew(s, t, cartan.pair_weight_root(&left, &g.d_root(t)));
        }
    }
    l
}

/// Initial seed plus the word data it was built from.
#[derive(Debug, Clone)]
pub struct GlsSeed {
    pub data: GlsData,
    pub quiver: Vec<Arrow>,
    pub seed: QuantumSeed,
}

/// Builds and checks the initial seed: compatibility degree 2, the parity
/// condition `λ_ij ≡ (d_i, d_j) mod 2` and weight balance `Σ_i b_ik d_i = 0`.
pub fn build_initial_seed(cartan: &CartanDatum, word: &WeylWord) -> Result<GlsSeed, GlsError> {
    let data = analyze_word(cartan, word)?;
    let quiver = build_quiver(&data, cartan);
    let b = quiver_to_b(data.r(), &quiver, data.exchangeable())?;
    let l = lambda_matrix(&data, cartan);
    match check_compatible(&l, &b) {
        Ok(Some(2)) | Ok(None) => {}
        Ok(Some(d)) => {
            return Err(GlsError::Assertion { check: "compatible", detail: format!("degree {d}, expected 2") })
        }
        Err(e) => return Err(GlsError::Assertion { check: "compatible", detail: e.to_string() }),
    }
    let seed = QuantumSeed::initial(l, b, data.d.clone())?;
    if let Some(detail) = parity_violation(cartan, &seed) {
        return Err(GlsError::Assertion { check: "parity", detail });
    }
    if let Some(detail) = weight_balance_violation(&seed) {
        return Err(GlsError::Assertion { check: "weight_balance", detail });
    }
    Ok(GlsSeed { data, quiver, seed })
}

/// First pair with `λ_ij − (d_i, d_j)` odd, if any.
pub fn parity_violation(cartan: &CartanDatum, seed: &QuantumSeed) -> Option<String> {
    let k = seed.rank();
    for i in 0..k {
        for j in 0..k {
            let Some(dj) = seed.d()[j].as_root() else {
                return Some(format!("d_{} is not in the root lattice", j + 1));
            };
            let form = cartan.pair_weight_root(&seed.d()[i], &dj);
            if (seed.l().get(i, j) - form).rem_euclid(2) != 0 {
                return Some(format!(
                    "({}, {}): lambda = {}, (d_i, d_j) = {form}",
                    i + 1,
                    j + 1,
                    seed.l().get(i, j)
                ));
            }
        }
    }
    None
}

/// First exchangeable `k` with `Σ_i b_ik d_i ≠ 0`, if any.
pub fn weight_balance_violation(seed: &QuantumSeed) -> Option<String> {
    let n = seed.d().first().map_or(0, Weight::rank);
    for &k in seed.exchangeable() {
        let total = (0..seed.rank()).fold(Weight::zero(n), |acc, i| &acc + &seed.d()[i].scale(seed.b().get(i, k)));
        if total != Weight::zero(n) {
            return Some(format!("column {}: sum_i b_ik d_i = {total}", k + 1));
        }
    }
    None
}
