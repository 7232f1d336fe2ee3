//! Plain-text record format and the bundled classification datasets.
//!
//! A record is a header line `id <token> [dim <d>]` followed by one
//! generator per line (whitespace-separated integers); records are
//! separated by blank lines and `#` starts a comment line. The dimension is
//! inferred from the vector length when omitted.

use crate::classify::Verdict;
use crate::error::{Error, Result};
use crate::fan::LatticeVector;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetRecord {
    pub id: String,
    pub dim: usize,
    pub generators: Vec<LatticeVector>,
}

impl DatasetRecord {
    pub fn new(id: String, dim: usize, generators: Vec<LatticeVector>) -> Result<Self> {
        if !(2..=3).contains(&dim) {
            return Err(Error::Validation(format!("dim must be 2 or 3, got {dim}")));
        }
        if generators.len() < dim + 1 {
            return Err(Error::Validation(format!(
                "record {id}: needs at least {} generators, got {}",
                dim + 1,
                generators.len()
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for g in &generators {
            if g.dim() != dim {
                return Err(Error::Validation(format!(
                    "record {id}: generator {g} has wrong dimension"
                )));
            }
            if !g.is_primitive() {
                return Err(Error::Validation(format!(
                    "record {id}: generator {g} is not primitive"
                )));
            }
            if !seen.insert(g.coords().to_vec()) {
                return Err(Error::Validation(format!(
                    "record {id}: duplicate generator {g}"
                )));
            }
        }
        Ok(Self {
            id,
            dim,
            generators,
        })
    }

    pub fn entry(&self) -> (String, Vec<LatticeVector>) {
        (self.id.clone(), self.generators.clone())
    }
}

struct Block {
    first_line: usize,
    lines: Vec<(usize, String)>,
}

fn blocks(text: &str) -> Vec<Block> {
    let mut out: Vec<Block> = Vec::new();
    let mut cur: Option<Block> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            if line.is_empty() {
                if let Some(b) = cur.take() {
                    out.push(b);
                }
            }
            continue;
        }
        cur.get_or_insert_with(|| Block {
            first_line: i + 1,
            lines: Vec::new(),
        })
        .lines
        .push((i + 1, line.to_string()));
    }
    if let Some(b) = cur.take() {
        out.push(b);
    }
    out
}

fn parse_block(block: &Block) -> Result<DatasetRecord> {
    let (header_line, header) = &block.lines[0];
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.first() != Some(&"id") || tokens.len() < 2 {
        return Err(Error::Parse {
            line: *header_line,
            msg: "expected header `id <token> [dim <d>]`".into(),
        });
    }
    let id = tokens[1].to_string();
    let mut declared_dim = None;
    match tokens.get(2) {
        None => {}
        Some(&"dim") => {
            let d = tokens.get(3).and_then(|t| t.parse::<usize>().ok());
            match d {
                Some(d) => declared_dim = Some(d),
                None => {
                    return Err(Error::Parse {
                        line: *header_line,
                        msg: "malformed dim declaration".into(),
                    })
                }
            }
        }
        Some(t) => {
            return Err(Error::Parse {
                line: *header_line,
                msg: format!("unexpected token `{t}` in header"),
            })
        }
    }
    let mut generators = Vec::new();
    for (line_no, line) in &block.lines[1..] {
        let coords: std::result::Result<Vec<i64>, _> = line
            .split_whitespace()
            .map(|t| t.parse::<i64>())
            .collect();
        let coords = coords.map_err(|_| Error::Parse {
            line: *line_no,
            msg: format!("malformed generator line `{line}`"),
        })?;
        generators.push(LatticeVector::new(coords).map_err(|e| Error::Parse {
            line: *line_no,
            msg: e.to_string(),
        })?);
    }
    if generators.is_empty() {
        return Err(Error::Parse {
            line: *header_line,
            msg: format!("record {id} has no generators"),
        });
    }
    let dim = declared_dim.unwrap_or_else(|| generators[0].dim());
    DatasetRecord::new(id, dim, generators)
}

/// Strict parse: the first malformed record aborts.
pub fn parse_dataset(text: &str) -> Result<Vec<DatasetRecord>> {
    let (records, errors) = parse_dataset_lenient(text);
    if let Some(e) = errors.into_iter().next() {
        return Err(e);
    }
    Ok(records)
}

/// Lenient parse: well-formed records are returned alongside the errors of
/// the malformed ones. Duplicate ids keep the first occurrence.
pub fn parse_dataset_lenient(text: &str) -> (Vec<DatasetRecord>, Vec<Error>) {
    let mut records: Vec<DatasetRecord> = Vec::new();
    let mut errors = Vec::new();
    let mut ids = std::collections::BTreeSet::new();
    for block in blocks(text) {
        match parse_block(&block) {
            Ok(rec) => {
                if ids.insert(rec.id.clone()) {
                    records.push(rec);
                } else {
                    errors.push(Error::Parse {
                        line: block.first_line,
                        msg: format!("duplicate id {}", rec.id),
                    });
                }
            }
            Err(e) => errors.push(e),
        }
    }
    (records, errors)
}

/// Inverse of [`parse_dataset`]: `parse(format(records))` round-trips.
pub fn format_dataset(records: &[DatasetRecord]) -> String {
    let mut out = String::new();
    for (i, rec) in records.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("id {} dim {}\n", rec.id, rec.dim));
        for g in &rec.generators {
            let coords: Vec<String> = g.coords().iter().map(|c| c.to_string()).collect();
            out.push_str(&coords.join(" "));
            out.push('\n');
        }
    }
    out
}

fn bundled(text: &str) -> Vec<DatasetRecord> {
    parse_dataset(text).expect("bundled dataset is well-formed")
}

/// The ten gamma_2-nef Gorenstein toric del Pezzo surfaces (GRDB toric LDP
/// ids).
pub fn table1_records() -> Vec<DatasetRecord> {
    bundled(include_str!("../data/table1_delpezzo.txt"))
}

/// The 23 Q-factorial terminal gamma_2-nef toric Fano 3-folds (GRDB toric
/// F3 ids).
pub fn table2_records() -> Vec<DatasetRecord> {
    bundled(include_str!("../data/table2_fano3.txt"))
}

/// A smooth toric Fano 3-fold fibered over a gamma_2-nef surface that is
/// itself not gamma_2-nef.
pub fn counterexample_records() -> Vec<DatasetRecord> {
    bundled(include_str!("../data/remark58.txt"))
}

/// Expected verdicts for the bundled surface table: the five rank-one
/// entries are positive, the rest are nef but not positive.
pub fn table1_expected() -> Vec<(String, Verdict)> {
    let positive = ["12", "13", "14", "15", "16"];
    table1_records()
        .into_iter()
        .map(|r| {
            let v = if positive.contains(&r.id.as_str()) {
                Verdict::Gamma2Positive
            } else {
                Verdict::Gamma2NefNotPositive
            };
            (r.id, v)
        })
        .collect()
}

/// Expected verdicts for the bundled 3-fold table: the eight Picard rank
/// one entries are positive, the rest are nef but not positive.
pub fn table2_expected() -> Vec<(String, Verdict)> {
    let positive = ["1", "2", "3", "4", "5", "6", "7", "8"];
    table2_records()
        .into_iter()
        .map(|r| {
            let v = if positive.contains(&r.id.as_str()) {
                Verdict::Gamma2Positive
            } else {
                Verdict::Gamma2NefNotPositive
            };
            (r.id, v)
        })
        .collect()
}
