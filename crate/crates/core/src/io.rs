//! JSON schemas for system and generator definitions.
//!
//! Subshift documents:
//! `{"k": int, "A": [[0|1, ...]], "potentials": {name: {"depth": m,
//! "values": {"word": real}}}}` with words written over `0-9a-z`.
//!
//! Generator documents: `{"Q": [[rate, ...]], "V": [real, ...]}`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::markovdv::MarkovGenerator;
use crate::num::{flt, Real};
use crate::separated::SeparatedSet;
use crate::shiftspace::{
    format_word, parse_word, LocallyConstantPotential, SubshiftSystem, Word,
};

#[derive(Debug, Deserialize)]
struct SystemDoc {
    k: usize,
    #[serde(rename = "A")]
    table: Vec<Vec<u8>>,
    #[serde(default)]
    potentials: BTreeMap<String, PotentialDoc>,
}

#[derive(Debug, Deserialize)]
struct PotentialDoc {
    depth: usize,
    values: BTreeMap<String, f64>,
}

/// A system definition together with its named potentials.
#[derive(Debug, Clone)]
pub struct LoadedSystem<T> {
    pub system: SubshiftSystem,
    pub potentials: BTreeMap<String, LocallyConstantPotential<T>>,
}

/// Parse a system document from a JSON string.
pub fn parse_system<T: Real>(json: &str) -> Result<LoadedSystem<T>> {
    let doc: SystemDoc = serde_json::from_str(json)?;
    let system = SubshiftSystem::new(doc.k, &doc.table)?;
    let mut potentials = BTreeMap::new();
    for (name, p) in doc.potentials {
        let mut values: BTreeMap<Word, T> = BTreeMap::new();
        for (word, value) in p.values {
            values.insert(parse_word(&word)?, flt(value));
        }
        let potential = LocallyConstantPotential::new(&system, p.depth, values)
            .map_err(|e| Error::InvalidPotential(format!("{name}: {e}")))?;
        potentials.insert(name, potential);
    }
    Ok(LoadedSystem { system, potentials })
}

/// Load a system document from a file.
pub fn load_system<T: Real>(path: impl AsRef<Path>) -> Result<LoadedSystem<T>> {
    parse_system(&std::fs::read_to_string(path)?)
}

#[derive(Debug, Deserialize)]
struct MarkovDoc {
    #[serde(rename = "Q")]
    rates: Vec<Vec<f64>>,
    #[serde(rename = "V")]
    potential: Vec<f64>,
}

/// Parse a generator document from a JSON string.
pub fn parse_markov<T: Real>(json: &str) -> Result<(MarkovGenerator<T>, Vec<T>)> {
    let doc: MarkovDoc = serde_json::from_str(json)?;
    let rows: Vec<Vec<T>> = doc
        .rates
        .iter()
        .map(|r| r.iter().map(|&x| flt(x)).collect())
        .collect();
    let gen = MarkovGenerator::new(&rows)?;
    if doc.potential.len() != gen.size() {
        return Err(Error::InvalidGenerator(format!(
            "V has {} entries for {} states",
            doc.potential.len(),
            gen.size()
        )));
    }
    Ok((gen, doc.potential.into_iter().map(flt).collect()))
}

/// Load a generator document from a file.
pub fn load_markov<T: Real>(path: impl AsRef<Path>) -> Result<(MarkovGenerator<T>, Vec<T>)> {
    parse_markov(&std::fs::read_to_string(path)?)
}

/// Serialize a separated set as a list of `(preperiod, period)` word
/// pairs.
pub fn separated_set_json<T: Real>(set: &SeparatedSet<T>) -> serde_json::Value {
    serde_json::Value::Array(
        set.points()
            .iter()
            .map(|p| {
                serde_json::json!([format_word(p.preperiod()), format_word(p.period())])
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOLDEN_MEAN_DOC: &str = r#"{
        "k": 2,
        "A": [[1, 1], [1, 0]],
        "potentials": {
            "zero": {"depth": 1, "values": {"0": 0.0, "1": 0.0}},
            "pair": {"depth": 2, "values": {"00": 0.2, "01": -0.3, "10": 0.5}}
        }
    }"#;

    #[test]
    fn parse_golden_mean_document() {
        let loaded = parse_system::<f64>(GOLDEN_MEAN_DOC).unwrap();
        assert_eq!(loaded.system.alphabet_size(), 2);
        assert_eq!(loaded.potentials.len(), 2);
        assert_eq!(loaded.potentials["pair"].depth(), 2);
        assert_eq!(loaded.potentials["pair"].eval(&[1, 0]), 0.5);
    }

    #[test]
    fn rejects_incomplete_potential_table() {
        let doc = r#"{
            "k": 2,
            "A": [[1, 1], [1, 0]],
            "potentials": {"bad": {"depth": 2, "values": {"00": 1.0}}}
        }"#;
        assert!(matches!(
            parse_system::<f64>(doc),
            Err(Error::InvalidPotential(_))
        ));
    }

    #[test]
    fn rejects_non_primitive_table() {
        let doc = r#"{"k": 2, "A": [[0, 1], [1, 0]], "potentials": {}}"#;
        assert!(matches!(
            parse_system::<f64>(doc),
            Err(Error::InvalidSystem(_))
        ));
    }

    #[test]
    fn parse_markov_document() {
        let doc = r#"{"Q": [[-1.0, 1.0], [1.0, -1.0]], "V": [1.0, 0.0]}"#;
        let (gen, v) = parse_markov::<f64>(doc).unwrap();
        assert_eq!(gen.size(), 2);
        assert_eq!(v, vec![1.0, 0.0]);

        let bad = r#"{"Q": [[-1.0, 1.0], [1.0, -1.0]], "V": [1.0]}"#;
        assert!(parse_markov::<f64>(bad).is_err());
    }

    #[test]
    fn separated_set_serialization() {
        let gm = crate::canned::golden_mean();
        let set = crate::separated::maximal_separated_set::<f64>(&gm, 2, 0.6).unwrap();
        let json = separated_set_json(&set);
        let arr = json.as_array().unwrap();
        assert_eq!(arr.len(), 3);
        // All three 2-words wrap admissibly, so preperiods are empty.
        assert_eq!(arr[2], serde_json::json!(["", "10"]));
    }
}
