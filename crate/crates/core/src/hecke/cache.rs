//! JSON-lines persistence for KL tables.
//!
//! The first line is a header; each further line holds one nonzero
//! `P_{u,w}` as `{"u": [..], "w": [..], "p": [c0, c1, ..]}` with `p` listing
//! coefficients of `q^0, q^1, ...`.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::kl::{KlBasis, KlTable, Provenance, TableSource, CONVENTION_VERSION};
use crate::coxeter::WeylGroup;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

pub const CACHE_FORMAT: &str = "kmdual-kl";
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
struct Header {
    format: String,
    gcm_hash: String,
    convention: u32,
    engine: String,
    max_length: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct Record {
    u: Vec<usize>,
    w: Vec<usize>,
    p: Vec<i64>,
}

/// File name for a table keyed on GCM hash and length bound.
pub fn cache_path(dir: &Path, gcm_hash: &str, max_length: usize) -> PathBuf {
    dir.join(format!("kl-{}-L{max_length}.jsonl", &gcm_hash[..16.min(gcm_hash.len())]))
}

pub fn write_table(table: &KlTable, path: &Path) -> Result<()> {
    let io = |e: std::io::Error| Error::Cache(format!("{}: {e}", path.display()));
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(io)?;
    }
    let tmp = path.with_extension("jsonl.tmp");
    {
        let mut out = BufWriter::new(fs::File::create(&tmp).map_err(io)?);
        let header = Header {
            format: CACHE_FORMAT.into(),
            gcm_hash: table.provenance.gcm_hash.clone(),
            convention: table.provenance.convention,
            engine: ENGINE_VERSION.into(),
            max_length: table.provenance.max_length,
        };
        writeln!(out, "{}", serde_json::to_string(&header).unwrap()).map_err(io)?;
        for ((u, w), p) in &table.entries {
            let top = p.max_degree().unwrap_or(0).max(0) as usize;
            let rec = Record {
                u: u.word().to_vec(),
                w: w.word().to_vec(),
                p: (0..=top).map(|k| p.coeff(k as i32)).collect(),
            };
            writeln!(out, "{}", serde_json::to_string(&rec).unwrap()).map_err(io)?;
        }
        out.flush().map_err(io)?;
    }
    fs::rename(&tmp, path).map_err(io)
}

/// Read a table, rejecting files written for another GCM, convention or
/// engine version.
pub fn read_table(path: &Path, group: &WeylGroup) -> Result<KlTable> {
    let io = |e: std::io::Error| Error::Cache(format!("{}: {e}", path.display()));
    let file = fs::File::open(path).map_err(io)?;
    let mut lines = BufReader::new(file).lines();
    let first = lines.next().ok_or_else(|| Error::Cache("empty cache file".into()))?.map_err(io)?;
    let header: Header =
        serde_json::from_str(&first).map_err(|e| Error::Cache(format!("bad header: {e}")))?;
    let expected_hash = group.realization().gcm_hash();
    if header.format != CACHE_FORMAT {
        return Err(Error::Cache(format!("unknown format {}", header.format)));
    }
    if header.gcm_hash != expected_hash {
        return Err(Error::Cache("GCM hash mismatch".into()));
    }
    if header.convention != CONVENTION_VERSION || header.engine != ENGINE_VERSION {
        return Err(Error::Cache(format!(
            "stale cache (convention {}, engine {})",
            header.convention, header.engine
        )));
    }
    let mut entries = BTreeMap::new();
    for (n, line) in lines.enumerate() {
        let line = line.map_err(io)?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: Record = serde_json::from_str(&line)
            .map_err(|e| Error::Cache(format!("line {}: {e}", n + 2)))?;
        let u = group.from_reduced_word(&rec.u)?;
        let w = group.from_reduced_word(&rec.w)?;
        if u.word() != rec.u.as_slice() || w.word() != rec.w.as_slice() {
            return Err(Error::Cache(format!("line {}: word not in normal form", n + 2)));
        }
        entries.insert((u, w), LaurentPoly::from_coeffs(&rec.p));
    }
    Ok(KlTable {
        entries,
        dirty: false,
        provenance: Provenance {
            gcm_hash: header.gcm_hash,
            convention: header.convention,
            max_length: header.max_length,
            source: TableSource::Cache,
        },
    })
}

/// Load the table for `max_length` from `dir` if present; otherwise compute
/// it, check it against any smaller cached table for the same GCM, and
/// store it.
pub fn load_or_compute(kl: &KlBasis, max_length: usize, dir: &Path) -> Result<KlTable> {
    let group = kl.group();
    let hash = group.realization().gcm_hash();
    let path = cache_path(dir, &hash, max_length);
    if path.exists() {
        return read_table(&path, group);
    }
    let mut table = KlTable::compute(kl, max_length);
    for smaller in (0..max_length).rev() {
        let p = cache_path(dir, &hash, smaller);
        if p.exists() {
            let cached = read_table(&p, group)?;
            let bad = table.mismatches(&cached);
            if let Some((u, w)) = bad.first() {
                return Err(Error::Cache(format!(
                    "recomputed P_{{{u},{w}}} disagrees with {}",
                    p.display()
                )));
            }
            break;
        }
    }
    write_table(&table, &path)?;
    table.dirty = false;
    Ok(table)
}

/// Recompute the table stored at `path` and report disagreements.
pub fn verify(kl: &KlBasis, path: &Path) -> Result<()> {
    let cached = read_table(path, kl.group())?;
    let fresh = KlTable::compute(kl, cached.provenance.max_length);
    let bad = fresh.mismatches(&cached);
    match bad.first() {
        None => Ok(()),
        Some((u, w)) => Err(Error::Cache(format!("cached P_{{{u},{w}}} is wrong"))),
    }
}
