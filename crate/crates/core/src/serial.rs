//! JSON documents for Cartan data, build inputs and seeds.
//!
//! All indices are 1-based on the wire. Field order is fixed by the struct
//! definitions, so equal documents serialize to identical bytes.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cartan::{CartanDatum, CartanError, Weight, WeylWord};
use crate::cluster::{BMatrix, ClusterError, QuantumSeed};
use crate::gls::GlsSeed;
use crate::qcoeff::QCoeff;
use crate::torus::{LMatrix, TorusElem, TorusError, WireTerm};

/// Tag recorded when variables carry the `v^{-(d_i,d_i)/2}` rescaling.
pub const GLOBAL_BASIS: &str = "global-basis";

#[derive(Debug, Error)]
pub enum SerialError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field `{field}`: {detail}")]
    Field { field: &'static str, detail: String },
}

fn field<E: std::fmt::Display>(field: &'static str) -> impl FnOnce(E) -> SerialError {
    move |e| SerialError::Field { field, detail: e.to_string() }
}

/// `{"cartan": [[...]]}`, optionally with a 1-based `"word"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanDoc {
    pub cartan: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<Vec<usize>>,
}

impl CartanDoc {
    pub fn parse(text: &str) -> Result<Self, SerialError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn datum(&self) -> Result<CartanDatum, SerialError> {
        CartanDatum::new(self.cartan.clone()).map_err(field("cartan"))
    }
}

/// Parses 1-based word letters and checks them against `cartan`.
pub fn parse_word(letters: &[usize], cartan: &CartanDatum) -> Result<WeylWord, SerialError> {
    WeylWord::from_one_based(letters, cartan.rank()).map_err(field("word"))
}

/// Word combinatorics attached to a seed built from a reduced word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlsDoc {
    pub word: Vec<usize>,
    pub succ: Vec<usize>,
    pub pred: Vec<usize>,
    pub frozen: Vec<usize>,
    /// `[s, t, multiplicity]`, 1-based.
    pub quiver: Vec<[usize; 3]>,
    #[serde(rename = "lambdaWeights")]
    pub lambda_weights: Vec<Weight>,
    pub d: Vec<Weight>,
}

impl From<&GlsSeed> for GlsDoc {
    fn from(g: &GlsSeed) -> Self {
        Self {
            word: g.data.word.to_one_based(),
            succ: g.data.succ.clone(),
            pred: g.data.pred.clone(),
            frozen: g.data.frozen.clone(),
            quiver: g
                .quiver
                .iter()
                .map(|a| [a.source + 1, a.target + 1, a.multiplicity as usize])
                .collect(),
            lambda_weights: g.data.lambda.clone(),
            d: g.data.d.clone(),
        }
    }
}

/// The torus and grading the variables are expressed in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InitialDoc {
    #[serde(rename = "L")]
    pub l: Vec<Vec<i64>>,
    #[serde(rename = "D")]
    pub d: Vec<Weight>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cartan: Option<Vec<Vec<i64>>>,
    #[serde(rename = "L")]
    pub l: Vec<Vec<i64>>,
    /// `K × K_ex`: column `c` belongs to `Kex[c]`.
    #[serde(rename = "B")]
    pub b: Vec<Vec<i64>>,
    #[serde(rename = "Kex")]
    pub kex: Vec<usize>,
    #[serde(rename = "D")]
    pub d: Vec<Weight>,
    pub vars: Vec<Vec<WireTerm>>,
    pub history: Vec<usize>,
    pub initial: InitialDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gls: Option<GlsDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalization: Option<String>,
}

impl SeedDoc {
    pub fn from_seed(seed: &QuantumSeed) -> Self {
        Self {
            cartan: None,
            l: seed.l().rows(),
            b: seed.b().rows().to_vec(),
            kex: seed.exchangeable().iter().map(|k| k + 1).collect(),
            d: seed.d().to_vec(),
            vars: seed.vars().iter().map(TorusElem::to_wire).collect(),
            history: seed.history().iter().map(|k| k + 1).collect(),
            initial: InitialDoc { l: seed.torus().rows(), d: seed.grading().to_vec() },
            gls: None,
            normalization: None,
        }
    }

    /// Document for a freshly built seed, with its Cartan matrix and word data.
    pub fn from_gls(cartan: &CartanDatum, g: &GlsSeed) -> Self {
        Self { cartan: Some(cartan.matrix().to_vec()), gls: Some(GlsDoc::from(g)), ..Self::from_seed(&g.seed) }
    }

    /// Replaces the seed data, keeping the Cartan matrix and word data.
    pub fn with_seed(&self, seed: &QuantumSeed) -> Self {
        Self { cartan: self.cartan.clone(), gls: self.gls.clone(), ..Self::from_seed(seed) }
    }

    pub fn cartan_datum(&self) -> Result<Option<CartanDatum>, SerialError> {
        self.cartan.as_ref().map(|a| CartanDatum::new(a.clone()).map_err(field("cartan"))).transpose()
    }

    pub fn parse(text: &str) -> Result<Self, SerialError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("seed document serializes") + "\n"
    }

    /// Reconstructs the seed, undoing a global-basis rescaling if present.
    pub fn to_seed(&self) -> Result<QuantumSeed, SerialError> {
        let l = LMatrix::new(self.l.clone()).map_err(field("L"))?;
        let kex = self
            .kex
            .iter()
            .map(|&k| k.checked_sub(1).ok_or(SerialError::Field { field: "Kex", detail: "indices are 1-based".into() }))
            .collect::<Result<Vec<_>, _>>()?;
        let b = BMatrix::new(self.b.clone(), kex).map_err(field("B"))?;
        let torus = Arc::new(LMatrix::new(self.initial.l.clone()).map_err(field("initial.L"))?);
        let grading = Arc::new(self.initial.d.clone());
        let mut vars = self
            .vars
            .iter()
            .map(|w| TorusElem::from_wire(&torus, w))
            .collect::<Result<Vec<_>, TorusError>>()
            .map_err(field("vars"))?;
        let history = self
            .history
            .iter()
            .map(|&k| k.checked_sub(1).ok_or(SerialError::Field { field: "history", detail: "indices are 1-based".into() }))
            .collect::<Result<Vec<_>, _>>()?;
        match self.normalization.as_deref() {
            None => {}
            Some(GLOBAL_BASIS) => {
                let cartan = self.cartan_datum()?.ok_or(SerialError::Field {
                    field: "cartan",
                    detail: "required to undo the global-basis normalization".into(),
                })?;
                let pairings = self_pairings(&cartan, &self.d).map_err(field("D"))?;
                for (x, p) in vars.iter_mut().zip(pairings) {
                    *x = x.scale(&QCoeff::v_pow(p / 2));
                }
            }
            Some(other) => {
                return Err(SerialError::Field { field: "normalization", detail: format!("unknown value `{other}`") })
            }
        }
        let d = self.d.clone();
        QuantumSeed::from_parts(l, b, d, vars, history, torus, grading).map_err(|e| match e {
            ClusterError::Shape(detail) => SerialError::Field { field: "vars", detail },
            other => SerialError::Field { field: "seed", detail: other.to_string() },
        })
    }

    /// The export form: with `normalize`, variables are multiplied by `v^{-(d_i,d_i)/2}`.
    pub fn export(&self, normalize: bool) -> Result<SeedDoc, SerialError> {
        if !normalize || self.normalization.is_some() {
            return Ok(self.clone());
        }
        let cartan = self.cartan_datum()?.ok_or(SerialError::Field {
            field: "cartan",
            detail: "required for the global-basis normalization".into(),
        })?;
        let seed = self.to_seed()?;
        let pairings = self_pairings(&cartan, seed.d()).map_err(field("D"))?;
        let mut doc = self.clone();
        doc.vars = seed.rescaled_vars(&pairings).iter().map(TorusElem::to_wire).collect();
        doc.normalization = Some(GLOBAL_BASIS.to_string());
        Ok(doc)
    }
}

#[derive(Debug, Error)]
pub enum PairingError {
    #[error("entry {0} is not in the root lattice")]
    NotRootLattice(usize),
    #[error("entry {index} has odd self-pairing {value}")]
    Odd { index: usize, value: i64 },
    #[error(transparent)]
    Cartan(#[from] CartanError),
}

/// `(d_i, d_i)` for each weight; all must be even root-lattice elements.
pub fn self_pairings(cartan: &CartanDatum, d: &[Weight]) -> Result<Vec<i64>, PairingError> {
    d.iter()
        .enumerate()
        .map(|(i, w)| {
            let beta = w.as_root().ok_or(PairingError::NotRootLattice(i + 1))?;
            let value = cartan.pair_weight_root(w, &beta);
            if value % 2 != 0 {
                return Err(PairingError::Odd { index: i + 1, value });
            }
            Ok(value)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gls::build_initial_seed;
    use proptest::prelude::*;

    fn a2() -> (CartanDatum, GlsSeed) {
        let c = CartanDatum::type_a(2);
        let g = build_initial_seed(&c, &WeylWord::from_one_based(&[1, 2, 1], 2).unwrap()).unwrap();
        (c, g)
    }

    #[test]
    fn cartan_doc() {
        let doc = CartanDoc::parse(r#"{"cartan": [[2,-1],[-1,2]]}"#).unwrap();
        assert_eq!(doc.datum().unwrap(), CartanDatum::type_a(2));
        let bad = CartanDoc::parse(r#"{"cartan": [[2,1],[1,2]]}"#).unwrap();
        let msg = bad.datum().unwrap_err().to_string();
        assert!(msg.contains("cartan") && msg.contains("Cartan entry sign"), "{msg}");
        assert!(parse_word(&[1, 3], &CartanDatum::type_a(2)).is_err());
    }

    #[test]
    fn a2_seed_document() {
        let (c, g) = a2();
        let doc = SeedDoc::from_gls(&c, &g);
        let json = doc.to_json();
        assert!(json.ends_with("}\n"));
        assert!(json.contains(r#""Kex": [
    1
  ]"#));
        let back = SeedDoc::parse(&json).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_seed().unwrap(), g.seed);
        assert_eq!(back.to_json(), json);
        let gls = doc.gls.unwrap();
        assert_eq!(gls.quiver, vec![[1, 2, 1], [3, 1, 1]]);
        assert_eq!(gls.succ, vec![3, 4, 4]);
    }

    #[test]
    fn default_export_has_unit_generators() {
        let (c, g) = a2();
        let doc = SeedDoc::from_gls(&c, &g).export(false).unwrap();
        let v = serde_json::to_value(&doc.vars[0]).unwrap();
        assert_eq!(v, serde_json::json!([{"exp": [1, 0, 0], "coeff": [[0, 1]]}]));
    }

    #[test]
    fn normalized_export_roundtrips() {
        let (c, g) = a2();
        let doc = SeedDoc::from_gls(&c, &g);
        let norm = doc.export(true).unwrap();
        assert_eq!(norm.normalization.as_deref(), Some(GLOBAL_BASIS));
        let v = serde_json::to_value(&norm.vars[0]).unwrap();
        assert_eq!(v, serde_json::json!([{"exp": [1, 0, 0], "coeff": [[-1, 1]]}]));
        let reparsed = SeedDoc::parse(&norm.to_json()).unwrap();
        assert_eq!(reparsed.to_seed().unwrap(), g.seed);
        assert_eq!(norm.export(true).unwrap(), norm);
    }

    #[test]
    fn field_errors_name_the_field() {
        let (c, g) = a2();
        let mut doc = SeedDoc::from_gls(&c, &g);
        doc.l[0][1] = 5;
        assert!(doc.to_seed().unwrap_err().to_string().starts_with("field `L`"));
        let mut doc = SeedDoc::from_gls(&c, &g);
        doc.kex = vec![0];
        assert!(doc.to_seed().unwrap_err().to_string().starts_with("field `Kex`"));
        let mut doc = SeedDoc::from_gls(&c, &g);
        doc.vars.pop();
        assert!(doc.to_seed().unwrap_err().to_string().starts_with("field `vars`"));
        let mut doc = SeedDoc::from_gls(&c, &g);
        doc.normalization = Some("other".into());
        assert!(doc.to_seed().unwrap_err().to_string().starts_with("field `normalization`"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn mutated_seeds_roundtrip(seq in proptest::collection::vec(0usize..6, 0..5)) {
            let c = CartanDatum::type_a(3);
            let g = build_initial_seed(&c, &WeylWord::from_one_based(&[1, 2, 1, 3, 2, 1], 3).unwrap()).unwrap();
            let ex = g.seed.exchangeable().to_vec();
            let ks: Vec<usize> = seq.iter().map(|&i| ex[i % ex.len()]).collect();
            let seed = g.seed.mutate_seq(&ks).unwrap();
            let doc = SeedDoc::from_gls(&c, &g).with_seed(&seed);
            let json = doc.to_json();
            let back = SeedDoc::parse(&json).unwrap();
            prop_assert_eq!(back.to_json(), json);
            let s2 = back.to_seed().unwrap();
            prop_assert_eq!(s2.history(), seed.history());
            prop_assert_eq!(s2, seed);
        }
    }
}
