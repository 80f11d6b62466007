//! Alpha-carbon extraction from fixed-column PDB text.
//!
//! Only what the contact-graph rule needs: the first model, the first chain
//! encountered, and one CA per residue. When a residue carries alternate CA
//! locations the lexicographically first indicator wins (blank sorts first).

use serde::{Deserialize, Serialize};

use super::alphabet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoordinateSet {
    pub protein_id: String,
    /// CA positions in Å, in chain order.
    pub positions: Vec<[f64; 3]>,
    /// One-letter residue codes from the residue names; `None` for non-canonical residues.
    pub residue_types: Vec<Option<u8>>,
}

impl CoordinateSet {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

#[derive(Debug)]
struct ResidueSlot {
    key: (char, String),
    name: String,
    ca: Option<(char, [f64; 3])>,
}

fn field(line: &str, start: usize, end: usize) -> &str {
    // 1-based inclusive columns; short lines yield a truncated or empty slice
    let len = line.len();
    if start > len {
        return "";
    }
    &line[start - 1..end.min(len)]
}

fn coord(line: &str, start: usize, end: usize, lineno: usize) -> Result<f64> {
    let raw = field(line, start, end).trim();
    let v: f64 = raw.parse().map_err(|_| Error::Parse {
        line: lineno,
        msg: format!("malformed coordinate field '{raw}' (columns {start}-{end})"),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse { line: lineno, msg: format!("non-finite coordinate {raw}") });
    }
    Ok(v)
}

pub fn parse_coordinates(protein_id: &str, pdb_text: &str) -> Result<CoordinateSet> {
    let mut residues: Vec<ResidueSlot> = Vec::new();
    let mut chain: Option<char> = None;

    for (i, line) in pdb_text.lines().enumerate() {
        let lineno = i + 1;
        if line.starts_with("ENDMDL") {
            break;
        }
        if !line.starts_with("ATOM  ") {
            continue;
        }
        if !line.is_ascii() {
            return Err(Error::Parse { line: lineno, msg: "non-ASCII ATOM record".into() });
        }
        let chain_id = field(line, 22, 22).chars().next().unwrap_or(' ');
        match chain {
            None => chain = Some(chain_id),
            Some(c) if c != chain_id => continue,
            _ => {}
        }
        let atom = field(line, 13, 16).trim();
        let alt = field(line, 17, 17).chars().next().unwrap_or(' ');
        let res_name = field(line, 18, 20).trim().to_string();
        let res_key = (chain_id, field(line, 23, 27).to_string());

        if residues.last().map(|r| &r.key) != Some(&res_key) {
            if residues.iter().any(|r| r.key == res_key) {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("residue {}{} is not contiguous", res_key.0, res_key.1.trim()),
                });
            }
            residues.push(ResidueSlot { key: res_key, name: res_name, ca: None });
        }
        if atom != "CA" {
            continue;
        }
        let p = [coord(line, 31, 38, lineno)?, coord(line, 39, 46, lineno)?, coord(line, 47, 54, lineno)?];
        let slot = residues.last_mut().expect("pushed above");
        match slot.ca {
            Some((prev, _)) if prev <= alt => {}
            _ => slot.ca = Some((alt, p)),
        }
    }

    if residues.iter().all(|r| r.ca.is_none()) {
        return Err(Error::NoCaAtoms);
    }
    let mut positions = Vec::with_capacity(residues.len());
    let mut residue_types = Vec::with_capacity(residues.len());
    for (index, r) in residues.iter().enumerate() {
        let (_, p) = r.ca.ok_or_else(|| Error::MissingCa { index, name: r.name.clone() })?;
        positions.push(p);
        residue_types.push(alphabet::from_three_letter(&r.name));
    }
    Ok(CoordinateSet { protein_id: protein_id.to_string(), positions, residue_types })
}
