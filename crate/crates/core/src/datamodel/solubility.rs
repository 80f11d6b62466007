//! Solubility degrees and class assignment.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper end of the insoluble interval `[0, 0.3]` (inclusive).
pub const INSOLUBLE_MAX: f64 = 0.3;
/// Lower end of the soluble interval `[0.7, 1]` (inclusive).
pub const SOLUBLE_MIN: f64 = 0.7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    Soluble,
    Insoluble,
    Excluded,
}

impl Label {
    pub fn from_solubility(s: f64) -> Label {
        if s <= INSOLUBLE_MAX {
            Label::Insoluble
        } else if s >= SOLUBLE_MIN {
            Label::Soluble
        } else {
            Label::Excluded
        }
    }

    /// Soluble maps to +1 and Insoluble to -1; `None` for excluded records.
    pub fn sign(self) -> Option<f64> {
        match self {
            Label::Soluble => Some(1.0),
            Label::Insoluble => Some(-1.0),
            Label::Excluded => None,
        }
    }

    pub fn from_sign(y: f64) -> Label {
        if y >= 0.0 {
            Label::Soluble
        } else {
            Label::Insoluble
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Soluble => "soluble",
            Label::Insoluble => "insoluble",
            Label::Excluded => "excluded",
        }
    }

    pub fn parse(s: &str) -> Option<Label> {
        match s.trim().to_ascii_lowercase().as_str() {
            "soluble" | "sol" | "+1" | "1" => Some(Label::Soluble),
            "insoluble" | "ins" | "-1" => Some(Label::Insoluble),
            "excluded" => Some(Label::Excluded),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolubilityRecord {
    pub protein_id: String,
    pub solubility: f64,
    pub label: Label,
}

impl SolubilityRecord {
    pub fn new(protein_id: impl Into<String>, solubility: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&solubility) {
            return Err(Error::InvalidInput(format!(
                "solubility {solubility} outside [0, 1]"
            )));
        }
        Ok(SolubilityRecord {
            protein_id: protein_id.into(),
            solubility,
            label: Label::from_solubility(solubility),
        })
    }
}

/// Divides every raw value by the table maximum and assigns class labels.
pub fn normalize_solubility(raw: &[(String, f64)]) -> Result<Vec<SolubilityRecord>> {
    for (id, v) in raw {
        if !v.is_finite() || *v < 0.0 {
            return Err(Error::InvalidInput(format!(
                "raw solubility for {id} must be finite and non-negative, got {v}"
            )));
        }
    }
    let max = raw.iter().map(|(_, v)| *v).fold(0.0_f64, f64::max);
    if max <= 0.0 {
        return Err(Error::DegenerateSolubility);
    }
    raw.iter()
        .map(|(id, v)| SolubilityRecord::new(id.clone(), (v / max).min(1.0)))
        .collect()
}

#[derive(Debug, Deserialize, Serialize)]
struct SolubilityRow {
    protein_id: String,
    solubility: f64,
}

/// Reads a `protein_id,solubility` CSV table of raw (unnormalized) values.
pub fn read_raw_table<R: Read>(reader: R) -> Result<Vec<(String, f64)>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.len() < 2 || &headers[0] != "protein_id" || &headers[1] != "solubility" {
        return Err(Error::Parse {
            line: 1,
            msg: "expected header `protein_id,solubility`".into(),
        });
    }
    let mut out = Vec::new();
    for row in rdr.deserialize::<SolubilityRow>() {
        let row = row?;
        out.push((row.protein_id, row.solubility));
    }
    Ok(out)
}

/// Writes normalized records back in the `protein_id,solubility` layout.
pub fn write_table<W: Write>(writer: W, records: &[SolubilityRecord]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    for r in records {
        wtr.serialize(SolubilityRow {
            protein_id: r.protein_id.clone(),
            solubility: r.solubility,
        })?;
    }
    wtr.flush()?;
    Ok(())
}
