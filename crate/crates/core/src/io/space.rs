//! Data-space and actor files.
//!
//! A data space is a JSON document
//! `{"points": [...], "prob": [...], "label": [...], "features": [[...], ...]}`
//! with feature 0 always the empty list. Loading validates the axioms, so a
//! file that parses but violates them is rejected with the witness.
//! Selector files are `{"choice": [...]}`, classifier files `{"verdict": [...]}`
//! with verdicts in {-1, 0, 1}.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

use crate::dataspace::{
    AxiomViolation, ClassifierTable, FeatureSelectorTable, FiniteDataSpace, SpaceError,
};
use crate::scalar::Real;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("structure: {0}")]
    Structure(#[from] SpaceError),
    #[error("axiom violation: {0:?}")]
    Axiom(AxiomViolation),
}

pub fn load_space<F: Real + DeserializeOwned>(
    path: &Path,
) -> Result<FiniteDataSpace<F>, FileError> {
    let text = std::fs::read_to_string(path)?;
    parse_space(&text)
}

pub fn parse_space<F: Real + DeserializeOwned>(
    text: &str,
) -> Result<FiniteDataSpace<F>, FileError> {
    let raw: FiniteDataSpace<F> = serde_json::from_str(text)?;
    // Deserialization bypasses assemble; rebuild to recover the incidence
    // lists and the structural checks.
    let space = FiniteDataSpace::assemble(
        raw.points().to_vec(),
        raw.probs().to_vec(),
        raw.labels().to_vec(),
        raw.features().to_vec(),
    )?;
    let report = space.validate();
    match report.violation {
        None => Ok(space),
        Some(v) => Err(FileError::Axiom(v)),
    }
}

pub fn save_json<T: Serialize>(value: &T, path: &Path) -> Result<(), FileError> {
    std::fs::write(path, to_json_pretty(value)?)?;
    Ok(())
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String, FileError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn load_selector<F: Real>(
    path: &Path,
    space: &FiniteDataSpace<F>,
) -> Result<FeatureSelectorTable, FileError> {
    let table: FeatureSelectorTable = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    table.check(space)?;
    Ok(table)
}

pub fn load_classifier<F: Real>(
    path: &Path,
    space: &FiniteDataSpace<F>,
) -> Result<ClassifierTable, FileError> {
    let table: ClassifierTable = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    table.check(space)?;
    Ok(table)
}
