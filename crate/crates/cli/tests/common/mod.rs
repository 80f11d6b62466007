#![allow(dead_code)]

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use foldclass_cli::{ExperimentConfig, Representation, SplitConfig};
use foldclass_core::datamodel::alphabet::ALPHABET;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SOLUBLE_POOL: &[u8] = b"DEKRNQSG";
const INSOLUBLE_POOL: &[u8] = b"WFLIVYMC";

fn three_letter(c: u8) -> &'static str {
    match c {
        b'A' => "ALA",
        b'C' => "CYS",
        b'D' => "ASP",
        b'E' => "GLU",
        b'F' => "PHE",
        b'G' => "GLY",
        b'H' => "HIS",
        b'I' => "ILE",
        b'K' => "LYS",
        b'L' => "LEU",
        b'M' => "MET",
        b'N' => "ASN",
        b'P' => "PRO",
        b'Q' => "GLN",
        b'R' => "ARG",
        b'S' => "SER",
        b'T' => "THR",
        b'V' => "VAL",
        b'W' => "TRP",
        _ => "TYR",
    }
}

/// CA trace: an alpha helix for soluble proteins, a zigzag strand otherwise.
pub fn backbone(n: usize, helix: bool) -> Vec<[f64; 3]> {
    (0..n)
        .map(|i| {
            let t = i as f64;
            if helix {
                let a = t * 100f64.to_radians();
                [2.3 * a.cos(), 2.3 * a.sin(), 1.5 * t]
            } else {
                [3.3 * t, if i % 2 == 0 { 0.0 } else { 1.9 }, 0.0]
            }
        })
        .collect()
}

pub fn pdb_text(seq: &[u8], coords: &[[f64; 3]]) -> String {
    let mut s = String::new();
    for (i, (c, p)) in seq.iter().zip(coords).enumerate() {
        writeln!(
            s,
            "ATOM  {:>5}  CA  {} A{:>4}    {:>8.3}{:>8.3}{:>8.3}  1.00 20.00           C",
            i + 1,
            three_letter(*c),
            i + 1,
            p[0],
            p[1],
            p[2]
        )
        .unwrap();
    }
    s.push_str("END\n");
    s
}

pub fn descriptor_csv() -> String {
    let mut s = String::from("aa,hydrophobicity,volume,charge,polarity,flexibility\n");
    for (i, &a) in ALPHABET.iter().enumerate() {
        let hydro = if INSOLUBLE_POOL.contains(&a) { 2.0 + (i % 3) as f64 * 0.3 } else { -1.0 - (i % 4) as f64 * 0.2 };
        let charge = match a {
            b'D' | b'E' => -1.0,
            b'K' | b'R' => 1.0,
            _ => 0.0,
        };
        let volume = 60.0 + 9.0 * ((i * 7) % 20) as f64;
        let polarity = -0.8 * hydro + 0.1 * (i % 5) as f64;
        let flex = 0.3 + 0.02 * ((i * 11) % 13) as f64;
        writeln!(s, "{},{hydro},{volume},{charge},{polarity},{flex}", a as char).unwrap();
    }
    s
}

/// A labeled toy corpus written to `dir`.
pub struct Corpus {
    pub dir: PathBuf,
    pub config: ExperimentConfig,
    pub lengths: Vec<(String, usize, bool)>,
}

/// `n_sol` soluble and `n_ins` insoluble proteins with distinct residue
/// pools; two excluded proteins are added to the solubility table.
pub fn write_corpus(dir: &Path, n_sol: usize, n_ins: usize, seed: u64, structures: bool) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    fs::create_dir_all(dir).unwrap();
    let pdb_dir = dir.join("pdb");
    if structures {
        fs::create_dir_all(&pdb_dir).unwrap();
    }
    let mut fasta = String::new();
    let mut table = String::from("protein_id,solubility\n");
    let mut lengths = Vec::new();
    for k in 0..(n_sol + n_ins) {
        let soluble = k < n_sol;
        let id = if soluble { format!("sol{k:03}") } else { format!("ins{:03}", k - n_sol) };
        let len = rng.random_range(18..30);
        let pool = if soluble { SOLUBLE_POOL } else { INSOLUBLE_POOL };
        let seq: Vec<u8> = (0..len).map(|_| pool[rng.random_range(0..pool.len())]).collect();
        writeln!(fasta, ">{id}\n{}", String::from_utf8(seq.clone()).unwrap()).unwrap();
        let raw = if soluble { rng.random_range(80.0..100.0) } else { rng.random_range(0.0..25.0) };
        writeln!(table, "{id},{raw}").unwrap();
        if structures {
            fs::write(pdb_dir.join(format!("{id}.pdb")), pdb_text(&seq, &backbone(len, soluble))).unwrap();
        }
        lengths.push((id, len, soluble));
    }
    writeln!(fasta, ">mid000\nACDEFGHIK\n>mid001\nKLMNPQRST").unwrap();
    writeln!(table, "mid000,50\nmid001,55\nmax,100").unwrap();
    fs::write(dir.join("sequences.fasta"), fasta).unwrap();
    fs::write(dir.join("solubility.csv"), table).unwrap();
    fs::write(dir.join("descriptors.csv"), descriptor_csv()).unwrap();

    let config = ExperimentConfig {
        solubility: Some(dir.join("solubility.csv")),
        sequences: Some(dir.join("sequences.fasta")),
        structures: structures.then(|| pdb_dir.clone()),
        descriptors: Some(dir.join("descriptors.csv")),
        representation: Representation::Seq,
        seed,
        split: SplitConfig { train_fraction: 0.6, ..Default::default() },
        out: dir.join("out"),
        ..Default::default()
    };
    Corpus { dir: dir.to_path_buf(), config, lengths }
}

pub fn write_toml(path: &Path, cfg: &ExperimentConfig) {
    fs::write(path, toml::to_string(cfg).unwrap()).unwrap();
}
