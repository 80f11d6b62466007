//! The canonical 20-letter amino-acid alphabet.

use crate::error::{Error, Result};

/// One-letter codes in the canonical order used by every 20×20 table in the crate.
pub const ALPHABET: &[u8; 20] = b"ACDEFGHIKLMNPQRSTVWY";

pub const ALPHABET_SIZE: usize = 20;

/// Ambiguous or rare codes that may appear in real sequence files.
pub const NONSTANDARD: &[u8] = b"BZXUOJ";

/// Position of `symbol` in [`ALPHABET`], case-insensitive.
pub fn index_of(symbol: u8) -> Option<usize> {
    let upper = symbol.to_ascii_uppercase();
    ALPHABET.iter().position(|&c| c == upper)
}

pub fn checked_index(symbol: u8) -> Result<usize> {
    index_of(symbol).ok_or(Error::UnknownSymbol(symbol as char))
}

pub fn is_canonical(symbol: u8) -> bool {
    index_of(symbol).is_some()
}

/// Three-letter residue names as found in PDB files.
pub fn from_three_letter(name: &str) -> Option<u8> {
    let code = match name.trim().to_ascii_uppercase().as_str() {
        "ALA" => b'A',
        "CYS" => b'C',
        "ASP" => b'D',
        "GLU" => b'E',
        "PHE" => b'F',
        "GLY" => b'G',
        "HIS" => b'H',
        "ILE" => b'I',
        "LYS" => b'K',
        "LEU" => b'L',
        "MET" => b'M',
        "ASN" => b'N',
        "PRO" => b'P',
        "GLN" => b'Q',
        "ARG" => b'R',
        "SER" => b'S',
        "THR" => b'T',
        "VAL" => b'V',
        "TRP" => b'W',
        "TYR" => b'Y',
        "MSE" => b'M',
        _ => return None,
    };
    Some(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indices_follow_canonical_order() {
        assert_eq!(index_of(b'A'), Some(0));
        assert_eq!(index_of(b'y'), Some(19));
        assert_eq!(index_of(b'X'), None);
        for (i, &c) in ALPHABET.iter().enumerate() {
            assert_eq!(index_of(c), Some(i));
        }
    }

    #[test]
    fn three_letter_codes_round_trip() {
        assert_eq!(from_three_letter("TRP"), Some(b'W'));
        assert_eq!(from_three_letter("hoh"), None);
    }
}
