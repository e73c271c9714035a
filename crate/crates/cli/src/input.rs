use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use boolsp::io::{coords_to_mask, parse_document, InputDocument};
use boolsp::{BooleanFunction, LtfSpec};
use clap::Args;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::Usage;

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// Truth-table file: {"format":"boolsp-fn-v1","n":N,"table_hex":"..."}
    #[arg(long = "fn", value_name = "PATH")]
    pub fn_path: Option<PathBuf>,
    /// LTF file: {"format":"boolsp-ltf-v1","a0":A0,"a":[A1,...]}
    #[arg(long, value_name = "PATH")]
    pub ltf: Option<PathBuf>,
    /// PTF file: {"format":"boolsp-ptf-v1","n":N,"terms":[{"set":[1,3],"coeff":2},...]}
    #[arg(long, value_name = "PATH")]
    pub ptf: Option<PathBuf>,
    /// majority:N, or:N, edic:N or character:N:I,J,... (1-based coordinates)
    #[arg(long, value_name = "KIND:N")]
    pub named: Option<String>,
}

/// Where an input came from, echoed in the report header.
#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub named: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sha256: Option<String>,
}

pub struct Loaded {
    pub f: BooleanFunction,
    /// Document tag: `fn`, `ltf`, `ptf` or `named`.
    pub tag: &'static str,
    pub ltf: Option<LtfSpec>,
    pub digest: InputDigest,
}

pub fn read_digested(path: &Path, kind: &'static str) -> Result<(String, InputDigest)> {
    let bytes = std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let digest = InputDigest {
        kind,
        path: Some(path.display().to_string()),
        named: None,
        sha256: Some(hex::encode(Sha256::digest(&bytes))),
    };
    let text = String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))?;
    Ok((text, digest))
}

/// Any function document, whatever its tag.
pub fn load_any(path: &Path, kind: &'static str) -> Result<Loaded> {
    let (text, digest) = read_digested(path, kind)?;
    let doc = parse_document(&text).with_context(|| path.display().to_string())?;
    let (f, ltf, tag) = match doc {
        InputDocument::Function(f) => (f, None, "fn"),
        InputDocument::Ltf(spec) => (BooleanFunction::from_ltf(&spec)?, Some(spec), "ltf"),
        InputDocument::Ptf(spec) => (BooleanFunction::from_ptf(&spec)?, None, "ptf"),
    };
    Ok(Loaded { f, tag, ltf, digest })
}

impl InputArgs {
    pub fn load(&self) -> Result<Loaded> {
        if let Some(spec) = &self.named {
            let f = parse_named(spec)?;
            let digest = InputDigest { kind: "named", path: None, named: Some(spec.clone()), sha256: None };
            return Ok(Loaded { f, tag: "named", ltf: None, digest });
        }
        let (path, kind) = match (&self.fn_path, &self.ltf, &self.ptf) {
            (Some(p), _, _) => (p, "fn"),
            (_, Some(p), _) => (p, "ltf"),
            (_, _, Some(p)) => (p, "ptf"),
            _ => bail!(Usage("one of --fn, --ltf, --ptf, --named is required".into())),
        };
        let loaded = load_any(path, kind)?;
        if loaded.tag != kind {
            bail!("{} holds a {} document but was passed to --{kind}", path.display(), loaded.tag);
        }
        Ok(loaded)
    }
}

pub fn parse_named(spec: &str) -> Result<BooleanFunction> {
    let parts: Vec<&str> = spec.split(':').collect();
    let usage = || Usage(format!("`{spec}`: expected majority:N, or:N, edic:N or character:N:I,J,..."));
    let n: usize = parts.get(1).and_then(|s| s.parse().ok()).ok_or_else(usage)?;
    Ok(match (parts[0], parts.len()) {
        ("majority" | "maj", 2) => BooleanFunction::majority(n)?,
        ("or", 2) => BooleanFunction::or(n)?,
        ("edic", 2) => BooleanFunction::edic(n)?,
        ("character" | "chi", 3) => {
            let coords = if parts[2].is_empty() {
                Vec::new()
            } else {
                parts[2].split(',').map(|c| c.trim().parse::<usize>()).collect::<Result<Vec<_>, _>>().map_err(|_| usage())?
            };
            BooleanFunction::character(n, coords_to_mask(n, &coords)?)?
        }
        _ => bail!(usage()),
    })
}
