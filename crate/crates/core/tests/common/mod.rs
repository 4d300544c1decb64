#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;

use qcluster::cartan::{CartanDatum, WeylWord};
use qcluster::gls::{build_initial_seed, GlsSeed};
use qcluster::qcoeff::QCoeff;
use qcluster::torus::{ExpVec, LMatrix, TorusElem};

pub struct Example {
    pub name: &'static str,
    pub cartan: CartanDatum,
    pub word: Vec<usize>,
}

impl Example {
    pub fn build(&self) -> GlsSeed {
        let w = WeylWord::from_one_based(&self.word, self.cartan.rank()).unwrap();
        build_initial_seed(&self.cartan, &w).unwrap()
    }
}

pub fn a2() -> Example {
    Example { name: "A2", cartan: CartanDatum::type_a(2), word: vec![1, 2, 1] }
}

pub fn a3() -> Example {
    Example { name: "A3", cartan: CartanDatum::type_a(3), word: vec![1, 2, 1, 3, 2, 1] }
}

/// Node 2 is the branch point.
pub fn d4() -> Example {
    let cartan = CartanDatum::new(vec![
        vec![2, -1, 0, 0],
        vec![-1, 2, -1, -1],
        vec![0, -1, 2, 0],
        vec![0, -1, 0, 2],
    ])
    .unwrap();
    Example { name: "D4", cartan, word: vec![1, 2, 3, 4, 2, 1] }
}

pub fn affine_a1() -> Example {
    Example { name: "A1^(1)", cartan: CartanDatum::new(vec![vec![2, -2], vec![-2, 2]]).unwrap(), word: vec![1, 2, 1, 2] }
}

pub fn all_examples() -> Vec<Example> {
    vec![a2(), a3(), d4(), affine_a1()]
}

pub fn random_l<R: Rng>(rng: &mut R, k: usize) -> Arc<LMatrix> {
    let mut l = LMatrix::zero(k);
    for i in 0..k {
        for j in 0..i {
            l.set_skew(i, j, rng.gen_range(-3..=3));
        }
    }
    Arc::new(l)
}

pub fn random_coeff<R: Rng>(rng: &mut R) -> QCoeff {
    let n = rng.gen_range(1..=3);
    QCoeff::from_pairs((0..n).map(|_| (rng.gen_range(-3..=3i64), rng.gen_range(-4..=4i64))))
}

pub fn random_elem<R: Rng>(rng: &mut R, l: &Arc<LMatrix>, max_terms: usize) -> TorusElem {
    let k = l.rank();
    let n = rng.gen_range(1..=max_terms);
    TorusElem::from_terms(
        l,
        (0..n).map(|_| (ExpVec((0..k).map(|_| rng.gen_range(-2..=2)).collect()), random_coeff(rng))),
    )
    .unwrap()
}

pub fn random_nonzero<R: Rng>(rng: &mut R, l: &Arc<LMatrix>, max_terms: usize) -> TorusElem {
    loop {
        let x = random_elem(rng, l, max_terms);
        if !x.is_zero() {
            return x;
        }
    }
}
