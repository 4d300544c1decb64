//! Batch verification of seed invariants along mutation sequences.
//!
//! Every check is addressable by name. Sequences are evaluated independently
//! (in parallel) and merged in input order, so the serialized report is
//! byte-identical across runs for identical inputs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cartan::CartanDatum;
use crate::classical::{first_q1_mismatch, ClassicalSeed};
use crate::cluster::{check_compatible, homogeneous_weight, Exchange, QuantumSeed};
use crate::gls::{parity_violation, weight_balance_violation};
use crate::torus::ExpVec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Compatible,
    Parity,
    WeightBalance,
    ExchangeIdentity,
    LambdaMutation,
    Homogeneity,
    Laurent,
    Positivity,
    BarInvariance,
    Q1Oracle,
    Involutivity,
}

impl Check {
    pub const ALL: [Check; 11] = [
        Check::Compatible,
        Check::Parity,
        Check::WeightBalance,
        Check::ExchangeIdentity,
        Check::LambdaMutation,
        Check::Homogeneity,
        Check::Laurent,
        Check::Positivity,
        Check::BarInvariance,
        Check::Q1Oracle,
        Check::Involutivity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Compatible => "compatible",
            Check::Parity => "parity",
            Check::WeightBalance => "weight_balance",
            Check::ExchangeIdentity => "exchange_identity",
            Check::LambdaMutation => "lambda_mutation",
            Check::Homogeneity => "homogeneity",
            Check::Laurent => "laurent",
            Check::Positivity => "positivity",
            Check::BarInvariance => "bar_invariance",
            Check::Q1Oracle => "q1_oracle",
            Check::Involutivity => "involutivity",
        }
    }

    pub fn tier(self) -> Tier {
        match self {
            Check::BarInvariance => Tier::Extended,
            _ => Tier::Core,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown check `{0}`")]
pub struct UnknownCheck(pub String);

impl FromStr for Check {
    type Err = UnknownCheck;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| UnknownCheck(s.trim().to_string()))
    }
}

/// Parses a comma-separated list of check names; `all` selects everything.
pub fn parse_checks(csv: &str) -> Result<BTreeSet<Check>, UnknownCheck> {
    if csv.trim() == "all" {
        return Ok(Check::ALL.into_iter().collect());
    }
    csv.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    Core,
    Extended,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

/// Where a check failed: a 1-based mutation sequence and the step within it
/// (0 is the starting seed).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub sequence: Vec<usize>,
    pub step: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub tier: Tier,
    pub status: Status,
    pub evaluations: usize,
    pub witnesses: Vec<Witness>,
}

/// Witnesses kept per check.
const MAX_WITNESSES: usize = 8;

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub rng_seed: Option<u64>,
    pub sequences: usize,
    pub steps: usize,
    pub checks: BTreeMap<String, CheckOutcome>,
    /// Wall-clock time per check; not serialized so reports stay reproducible.
    #[serde(skip)]
    pub timings: BTreeMap<String, Duration>,
}

impl CheckReport {
    pub fn all_pass(&self) -> bool {
        self.checks.values().all(|c| c.status == Status::Pass)
    }

    pub fn failing(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|(_, c)| c.status == Status::Fail)
            .map(|(n, _)| n.as_str())
            .collect()
    }

    pub fn outcome(&self, check: Check) -> Option<&CheckOutcome> {
        self.checks.get(check.name())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// How sequences are chosen for a suite run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SequencePlan {
    /// Enumerate every sequence over `K_ex` of length `1..=depth`.
    pub depth: usize,
    /// Number of additional random sequences.
    pub random: usize,
    pub random_max_len: usize,
    pub rng_seed: u64,
}

impl Default for SequencePlan {
    fn default() -> Self {
        Self { depth: 4, random: 32, random_max_len: 6, rng_seed: 0 }
    }
}

/// All sequences of length `1..=depth` over `alphabet`, shortest first.
pub fn enumerate_sequences(alphabet: &[usize], depth: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut frontier = vec![Vec::new()];
    for _ in 0..depth {
        let next: Vec<Vec<usize>> = frontier
            .iter()
            .flat_map(|s| {
                alphabet.iter().map(move |&k| {
                    let mut t = s.clone();
                    t.push(k);
                    t
                })
            })
            .collect();
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// `count` random sequences of length `1..=max_len` over `alphabet`.
pub fn random_sequences(alphabet: &[usize], count: usize, max_len: usize, rng_seed: u64) -> Vec<Vec<usize>> {
    if alphabet.is_empty() || max_len == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect()
        })
        .collect()
}

/// A random palindrome `k_1 … k_m k_m … k_1` of even length at most `max_len`.
pub fn random_palindromes(alphabet: &[usize], count: usize, max_len: usize, rng_seed: u64) -> Vec<Vec<usize>> {
    random_sequences(alphabet, count, (max_len / 2).max(1), rng_seed)
        .into_iter()
        .map(|half| half.iter().chain(half.iter().rev()).copied().collect())
        .collect()
}

pub fn plan_sequences(seed: &QuantumSeed, plan: &SequencePlan) -> Vec<Vec<usize>> {
    let ex = seed.exchangeable();
    let mut seqs = enumerate_sequences(ex, plan.depth);
    seqs.extend(random_sequences(ex, plan.random, plan.random_max_len, plan.rng_seed));
    seqs
}

#[derive(Default)]
struct Tally {
    evaluations: BTreeMap<Check, usize>,
    witnesses: BTreeMap<Check, Vec<Witness>>,
    timings: BTreeMap<Check, Duration>,
    steps: usize,
}

impl Tally {
    fn record(&mut self, check: Check, elapsed: Duration, failure: Option<Witness>) {
        *self.evaluations.entry(check).or_default() += 1;
        *self.timings.entry(check).or_default() += elapsed;
        if let Some(w) = failure {
            let list = self.witnesses.entry(check).or_default();
            if list.len() < MAX_WITNESSES {
                list.push(w);
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        for (c, n) in other.evaluations {
            *self.evaluations.entry(c).or_default() += n;
        }
        for (c, t) in other.timings {
            *self.timings.entry(c).or_default() += t;
        }
        for (c, ws) in other.witnesses {
            let list = self.witnesses.entry(c).or_default();
            for w in ws {
                if list.len() < MAX_WITNESSES {
                    list.push(w);
                }
            }
        }
        self.steps += other.steps;
    }
}

struct Runner<'a> {
    cartan: &'a CartanDatum,
    checks: &'a BTreeSet<Check>,
    degree: Option<i64>,
}

impl Runner<'_> {
    fn run<F: FnOnce() -> Option<String>>(
        &self,
        tally: &mut Tally,
        check: Check,
        seq: &[usize],
        step: usize,
        f: F,
    ) {
        if !self.checks.contains(&check) {
            return;
        }
        let t = Instant::now();
        let failure = f().map(|detail| Witness { sequence: seq.iter().map(|k| k + 1).collect(), step, detail });
        tally.record(check, t.elapsed(), failure);
    }

    fn seed_checks(&self, tally: &mut Tally, seed: &QuantumSeed, seq: &[usize], step: usize) {
        self.run(tally, Check::Compatible, seq, step, || match check_compatible(seed.l(), seed.b()) {
            Ok(d) if d == self.degree => None,
            Ok(d) => Some(format!("compatibility degree {d:?}, expected {:?}", self.degree)),
            Err(e) => Some(e.to_string()),
        });
        self.run(tally, Check::Parity, seq, step, || parity_violation(self.cartan, seed));
        self.run(tally, Check::WeightBalance, seq, step, || weight_balance_violation(seed));
    }

    fn initial_checks(&self, tally: &mut Tally, seed: &QuantumSeed, classical: &ClassicalSeed) {
        let seq: &[usize] = &[];
        self.seed_checks(tally, seed, seq, 0);
        self.run(tally, Check::LambdaMutation, seq, 0, || seed.check_q_commuting().err().map(|e| e.to_string()));
        self.run(tally, Check::Homogeneity, seq, 0, || seed.check_homogeneity().err().map(|e| e.to_string()));
        self.run(tally, Check::Positivity, seq, 0, || {
            seed.vars().iter().position(|x| !x.is_nonneg()).map(|i| format!("variable {} has a negative coefficient", i + 1))
        });
        self.run(tally, Check::BarInvariance, seq, 0, || {
            seed.vars().iter().position(|x| &x.bar() != x).map(|i| format!("variable {} is not bar-invariant", i + 1))
        });
        self.run(tally, Check::Q1Oracle, seq, 0, || {
            first_q1_mismatch(seed, classical).map(|i| format!("variable {} differs from the classical oracle", i + 1))
        });
    }

    #[allow(clippy::too_many_arguments)]
    fn step_checks(
        &self,
        tally: &mut Tally,
        before: &QuantumSeed,
        after: &QuantumSeed,
        ex: &Exchange,
        classical: Option<&ClassicalSeed>,
        seq: &[usize],
        step: usize,
    ) {
        let k = ex.k;
        let x_new = &ex.new_var;
        self.seed_checks(tally, after, seq, step);
        self.run(tally, Check::ExchangeIdentity, seq, step, || {
            let lhs = match before.vars()[k].mul(x_new) {
                Ok(x) => x,
                Err(e) => return Some(e.to_string()),
            };
            let shift: i64 = (0..before.rank()).map(|i| ex.a_dprime.0[i] * before.l().get(k, i)).sum();
            let rhs = (&ex.m_prime.shift(2) + &ex.m_dprime).shift(shift);
            (lhs != rhs).then(|| format!("X_{0} X'_{0} differs from v^{shift}(v^2 M' + M'')", k + 1))
        });
        self.run(tally, Check::LambdaMutation, seq, step, || {
            (0..after.rank()).filter(|&j| j != k).find_map(|j| {
                match after.vars()[j].q_commute_exponent(x_new) {
                    Ok(g) if g == after.l().get(j, k) => None,
                    Ok(g) => Some(format!("q-commutation exponent of x_{} and x'_{} is {g}, mu_k(L) says {}", j + 1, k + 1, after.l().get(j, k))),
                    Err(e) => Some(format!("x_{} and x'_{}: {e}", j + 1, k + 1)),
                }
            })
        });
        self.run(tally, Check::Homogeneity, seq, step, || match homogeneous_weight(after.grading(), x_new) {
            Some(w) if w == after.d()[k] => None,
            Some(w) => Some(format!("x'_{} has weight {w}, mu_k(D) says {}", k + 1, after.d()[k])),
            None => Some(format!("x'_{} is not homogeneous", k + 1)),
        });
        self.run(tally, Check::Laurent, seq, step, || None);
        self.run(tally, Check::Positivity, seq, step, || {
            (!x_new.is_nonneg()).then(|| format!("x'_{} has a negative coefficient", k + 1))
        });
        self.run(tally, Check::BarInvariance, seq, step, || {
            (&x_new.bar() != x_new).then(|| format!("x'_{} is not bar-invariant", k + 1))
        });
        if let Some(classical) = classical {
            self.run(tally, Check::Q1Oracle, seq, step, || {
                first_q1_mismatch(after, classical).map(|i| format!("variable {} differs from the classical oracle", i + 1))
            });
        }
        self.run(tally, Check::Involutivity, seq, step, || match after.mutate_unchecked(k) {
            Ok((back, _)) if &back == before => None,
            Ok(_) => Some(format!("mutating twice in direction {} does not restore the seed", k + 1)),
            Err(e) => Some(e.to_string()),
        });
    }

    fn sequence(&self, start: &QuantumSeed, start_classical: &ClassicalSeed, seq: &[usize]) -> Tally {
        let mut tally = Tally::default();
        let mut seed = start.clone();
        let mut classical = Some(start_classical.clone());
        for (idx, &k) in seq.iter().enumerate() {
            let step = idx + 1;
            let (next, ex) = match seed.mutate_unchecked(k) {
                Ok(r) => r,
                Err(e) => {
                    self.run(&mut tally, Check::Laurent, seq, step, || Some(e.to_string()));
                    return tally;
                }
            };
            tally.steps += 1;
            let mut classical_err = None;
            classical = match classical.map(|c| c.mutate(k)) {
                Some(Ok(c)) => Some(c),
                Some(Err(e)) => {
                    classical_err = Some(e.to_string());
                    None
                }
                None => None,
            };
            if let Some(e) = classical_err {
                self.run(&mut tally, Check::Q1Oracle, seq, step, || Some(format!("classical oracle failed: {e}")));
            }
            self.step_checks(&mut tally, &seed, &next, &ex, classical.as_ref(), seq, step);
            seed = next;
        }
        tally
    }
}

/// Runs `checks` on `seed` and along every sequence (0-based directions).
///
/// `degree` is the compatibility degree every visited seed must have; GLS
/// seeds use `Some(2)`. Directions that are not exchangeable fail the
/// `laurent` check for that sequence.
pub fn run_suite(
    cartan: &CartanDatum,
    seed: &QuantumSeed,
    degree: Option<i64>,
    sequences: &[Vec<usize>],
    checks: &BTreeSet<Check>,
    rng_seed: Option<u64>,
) -> CheckReport {
    let runner = Runner { cartan, checks, degree };
    let classical = ClassicalSeed::from_quantum(seed);
    let mut tally = Tally::default();
    runner.initial_checks(&mut tally, seed, &classical);
    let per_sequence: Vec<Tally> = sequences
        .par_iter()
        .map(|seq| runner.sequence(seed, &classical, seq))
        .collect();
    for t in per_sequence {
        tally.merge(t);
    }
    let checks_out = checks
        .iter()
        .map(|&c| {
            let witnesses = tally.witnesses.remove(&c).unwrap_or_default();
            let outcome = CheckOutcome {
                tier: c.tier(),
                status: if witnesses.is_empty() { Status::Pass } else { Status::Fail },
                evaluations: tally.evaluations.get(&c).copied().unwrap_or(0),
                witnesses,
            };
            (c.name().to_string(), outcome)
        })
        .collect();
    CheckReport {
        rng_seed,
        sequences: sequences.len(),
        steps: tally.steps,
        checks: checks_out,
        timings: tally.timings.into_iter().map(|(c, t)| (c.name().to_string(), t)).collect(),
    }
}

/// The weight of a monomial under the initial grading, exposed for tests.
pub fn monomial_weight(seed: &QuantumSeed, a: &ExpVec) -> crate::cartan::Weight {
    crate::cluster::weight_of_exponent(seed.grading(), a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::WeylWord;
    use crate::gls::build_initial_seed;
    use crate::torus::LMatrix;

    fn a2_seed() -> (CartanDatum, QuantumSeed) {
        let d = CartanDatum::type_a(2);
        let s = build_initial_seed(&d, &WeylWord::from_one_based(&[1, 2, 1], 2).unwrap()).unwrap();
        (d, s.seed)
    }

    fn all() -> BTreeSet<Check> {
        Check::ALL.into_iter().collect()
    }

    #[test]
    fn check_names_roundtrip() {
        for c in Check::ALL {
            assert_eq!(c.name().parse::<Check>(), Ok(c));
        }
        assert_eq!(parse_checks("all").unwrap().len(), 11);
        assert_eq!(parse_checks("laurent, positivity").unwrap().len(), 2);
        assert_eq!(parse_checks("nope"), Err(UnknownCheck("nope".into())));
    }

    #[test]
    fn sequence_enumeration() {
        let s = enumerate_sequences(&[0, 2], 3);
        assert_eq!(s.len(), 2 + 4 + 8);
        assert_eq!(s[0], vec![0]);
        assert_eq!(s[13], vec![2, 2, 2]);
        assert!(enumerate_sequences(&[], 3).is_empty());
        let r1 = random_sequences(&[0, 1, 2], 10, 6, 7);
        assert_eq!(r1, random_sequences(&[0, 1, 2], 10, 6, 7));
        assert!(r1.iter().all(|s| (1..=6).contains(&s.len())));
        for p in random_palindromes(&[0, 1], 5, 10, 3) {
            assert!(p.len() <= 10);
            assert!(p.iter().eq(p.iter().rev()));
        }
    }

    #[test]
    fn a2_suite_passes() {
        let (d, s) = a2_seed();
        let report = run_suite(&d, &s, Some(2), &[vec![0]], &all(), None);
        assert!(report.all_pass(), "{}", report.to_json());
        assert_eq!(report.steps, 1);
        assert_eq!(report.outcome(Check::BarInvariance).unwrap().tier, Tier::Extended);
        assert!(report.checks.values().all(|c| c.evaluations > 0));
    }

    #[test]
    fn corrupted_l_fails_compatibility_at_1_1() {
        let (d, s) = a2_seed();
        let mut l = s.l().clone();
        l.set_skew(1, 0, -s.l().get(1, 0));
        let bad = s.with_l(l).unwrap();
        let report = run_suite(&d, &bad, Some(2), &[vec![0]], &all(), None);
        let c = report.outcome(Check::Compatible).unwrap();
        assert_eq!(c.status, Status::Fail);
        assert!(c.witnesses[0].detail.contains("at (1, 1)"), "{}", c.witnesses[0].detail);
        assert_eq!(c.witnesses[0].step, 0);
    }

    #[test]
    fn report_is_deterministic() {
        let (d, s) = a2_seed();
        let seqs = plan_sequences(&s, &SequencePlan { depth: 3, random: 8, random_max_len: 5, rng_seed: 11 });
        let a = run_suite(&d, &s, Some(2), &seqs, &all(), Some(11)).to_json();
        let b = run_suite(&d, &s, Some(2), &seqs, &all(), Some(11)).to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn frozen_direction_is_a_laurent_failure() {
        let (d, s) = a2_seed();
        let report = run_suite(&d, &s, Some(2), &[vec![1]], &all(), None);
        assert_eq!(report.failing(), vec!["laurent"]);
    }

    #[test]
    fn zero_l_is_incompatible() {
        let (d, s) = a2_seed();
        let bad = s.with_l(LMatrix::zero(3)).unwrap();
        let report = run_suite(&d, &bad, Some(2), &[], &[Check::Compatible].into(), None);
        assert!(!report.all_pass());
    }
}
