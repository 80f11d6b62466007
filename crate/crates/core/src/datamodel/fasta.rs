//! FASTA sequence input and output.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use log::warn;
use serde::{Deserialize, Serialize};

use super::alphabet::{self, is_canonical};
use crate::error::{Error, Result};

/// A protein as a string over the canonical alphabet (stored upper-case).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueSequence {
    pub protein_id: String,
    pub residues: Vec<u8>,
}

impl ResidueSequence {
    pub fn new(protein_id: impl Into<String>, residues: &[u8]) -> Result<Self> {
        let protein_id = protein_id.into();
        if residues.is_empty() {
            return Err(Error::InvalidInput(format!("sequence {protein_id} is empty")));
        }
        let residues: Vec<u8> = residues.iter().map(u8::to_ascii_uppercase).collect();
        if let Some(&bad) = residues.iter().find(|&&c| !is_canonical(c)) {
            return Err(Error::UnknownSymbol(bad as char));
        }
        Ok(ResidueSequence { protein_id, residues })
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    /// Alphabet indices of the residues.
    pub fn indices(&self) -> Vec<usize> {
        self.residues
            .iter()
            .map(|&c| alphabet::index_of(c).expect("validated on construction"))
            .collect()
    }

    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.residues).expect("ASCII residues")
    }
}

/// What to do with proteins containing B, Z, X, U, O or other non-canonical codes.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub enum NonstandardPolicy {
    /// Drop the protein and log a warning.
    #[default]
    Drop,
    /// Replace codes via a user table; unmapped codes still drop the protein.
    Map(BTreeMap<char, char>),
}

#[derive(Debug, Default)]
pub struct FastaParse {
    pub sequences: Vec<ResidueSequence>,
    /// Ids dropped because of non-canonical residues.
    pub dropped: Vec<String>,
}

/// Parses FASTA text; residue lines may be wrapped.
pub fn parse_fasta<R: BufRead>(reader: R, policy: &NonstandardPolicy) -> Result<FastaParse> {
    let mut entries: Vec<(String, Vec<u8>, usize)> = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with(';') {
            continue;
        }
        if let Some(header) = line.strip_prefix('>') {
            let id = header.split_whitespace().next().unwrap_or("").to_string();
            if id.is_empty() {
                return Err(Error::Parse { line: lineno + 1, msg: "empty FASTA id".into() });
            }
            entries.push((id, Vec::new(), lineno + 1));
        } else {
            let Some(cur) = entries.last_mut() else {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: "residue line before first '>' header".into(),
                });
            };
            cur.1.extend(line.bytes().filter(|c| !c.is_ascii_whitespace() && *c != b'*'));
        }
    }

    let mut out = FastaParse::default();
    for (id, raw, line) in entries {
        if raw.is_empty() {
            return Err(Error::Parse { line, msg: format!("sequence {id} has no residues") });
        }
        match apply_policy(&raw, policy) {
            Some(residues) => out.sequences.push(ResidueSequence::new(id, &residues)?),
            None => {
                warn!("dropping {id}: non-canonical residue codes");
                out.dropped.push(id);
            }
        }
    }
    Ok(out)
}

fn apply_policy(raw: &[u8], policy: &NonstandardPolicy) -> Option<Vec<u8>> {
    raw.iter()
        .map(|&c| {
            let c = c.to_ascii_uppercase();
            if is_canonical(c) {
                return Some(c);
            }
            match policy {
                NonstandardPolicy::Drop => None,
                NonstandardPolicy::Map(table) => table
                    .get(&(c as char))
                    .map(|&m| m.to_ascii_uppercase() as u8)
                    .filter(|&m| is_canonical(m)),
            }
        })
        .collect()
}

/// Writes sequences unwrapped, one record per two lines.
pub fn write_fasta<W: Write>(mut w: W, seqs: &[ResidueSequence]) -> Result<()> {
    for s in seqs {
        writeln!(w, ">{}", s.protein_id)?;
        writeln!(w, "{}", s.as_str())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrapped_and_unwrapped_records() {
        let text = ">p1 some description\nACDE\nFGH\n>p2\nwy\n";
        let parsed = parse_fasta(text.as_bytes(), &NonstandardPolicy::Drop).unwrap();
        assert_eq!(parsed.sequences.len(), 2);
        assert_eq!(parsed.sequences[0].as_str(), "ACDEFGH");
        assert_eq!(parsed.sequences[1].as_str(), "WY");
        assert!(parsed.dropped.is_empty());
    }

    #[test]
    fn nonstandard_codes_drop_by_default() {
        let text = ">ok\nAAA\n>bad\nAXA\n";
        let parsed = parse_fasta(text.as_bytes(), &NonstandardPolicy::Drop).unwrap();
        assert_eq!(parsed.sequences.len(), 1);
        assert_eq!(parsed.dropped, vec!["bad".to_string()]);
    }

    #[test]
    fn nonstandard_codes_can_be_mapped() {
        let policy = NonstandardPolicy::Map([('B', 'D'), ('Z', 'E')].into_iter().collect());
        let parsed = parse_fasta(">a\nBZX\n>b\nBZ\n".as_bytes(), &policy).unwrap();
        assert_eq!(parsed.sequences.len(), 1);
        assert_eq!(parsed.sequences[0].as_str(), "DE");
        assert_eq!(parsed.dropped, vec!["a".to_string()]);
    }

    #[test]
    fn residues_before_header_is_an_error() {
        let err = parse_fasta("ACD\n>a\nA\n".as_bytes(), &NonstandardPolicy::Drop).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn write_then_parse_reproduces_records() {
        let seqs = vec![
            ResidueSequence::new("x", b"MKV").unwrap(),
            ResidueSequence::new("y", b"WWYC").unwrap(),
        ];
        let mut buf = Vec::new();
        write_fasta(&mut buf, &seqs).unwrap();
        let back = parse_fasta(buf.as_slice(), &NonstandardPolicy::Drop).unwrap();
        assert_eq!(back.sequences, seqs);
    }
}
