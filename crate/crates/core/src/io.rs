//! JSON file formats for functions, threshold specs and composition plans.
//!
//! The function table is a hex string of `ceil(2^n / 4)` characters. Each
//! character is one nibble, nibbles are in increasing input order and the
//! low bit of a nibble is the lowest input index it covers
//! ("little-endian nibbles"). A set bit means `f = +1`.

use serde::{Deserialize, Serialize};

use crate::constructs::CompositionPlan;
use crate::func::{BooleanFunction, LtfSpec, PtfSpec};
use crate::{Error, Result};

pub const FN_FORMAT: &str = "boolsp-fn-v1";
pub const LTF_FORMAT: &str = "boolsp-ltf-v1";
pub const PTF_FORMAT: &str = "boolsp-ptf-v1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionFile {
    pub format: String,
    pub n: usize,
    pub table_hex: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LtfFile {
    pub format: String,
    pub a0: i64,
    pub a: Vec<i64>,
}

/// One PTF term: a set of 1-based coordinates and its integer coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PtfTerm {
    pub set: Vec<usize>,
    pub coeff: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PtfFile {
    pub format: String,
    pub n: usize,
    pub terms: Vec<PtfTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanFile {
    pub outer: FunctionFile,
    /// Blocks of 1-based coordinates.
    pub blocks: Vec<Vec<usize>>,
    /// Dimension of the composed function; defaults to the largest coordinate used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

pub fn table_to_hex(f: &BooleanFunction) -> String {
    let nibbles = f.len().div_ceil(4);
    (0..nibbles)
        .map(|i| {
            let word = f.words()[(4 * i) >> 6];
            let nib = (word >> ((4 * i) & 63)) & 0xf;
            char::from_digit(nib as u32, 16).unwrap()
        })
        .collect()
}

pub fn table_from_hex(n: usize, hex: &str) -> Result<BooleanFunction> {
    crate::check_dim(n)?;
    let len = 1usize << n;
    let nibbles = len.div_ceil(4);
    if hex.len() != nibbles {
        return Err(Error::Format(format!(
            "table_hex for n = {n} must have {nibbles} hex digits, found {}",
            hex.len()
        )));
    }
    let mut words = vec![0u64; len.div_ceil(64)];
    for (i, c) in hex.chars().enumerate() {
        let nib = c.to_digit(16).ok_or_else(|| Error::Format(format!("`{c}` is not a hex digit")))? as u64;
        if 4 * i + 4 > len && nib >> (len - 4 * i) != 0 {
            return Err(Error::Format("table_hex sets bits beyond 2^n".into()));
        }
        words[(4 * i) >> 6] |= nib << ((4 * i) & 63);
    }
    BooleanFunction::from_words(n, words)
}

impl FunctionFile {
    pub fn from_function(f: &BooleanFunction) -> Self {
        FunctionFile { format: FN_FORMAT.into(), n: f.n(), table_hex: table_to_hex(f) }
    }

    pub fn to_function(&self) -> Result<BooleanFunction> {
        expect_format(&self.format, FN_FORMAT)?;
        table_from_hex(self.n, &self.table_hex)
    }
}

impl LtfFile {
    pub fn from_spec(spec: &LtfSpec) -> Self {
        LtfFile { format: LTF_FORMAT.into(), a0: spec.a0, a: spec.a.clone() }
    }

    pub fn to_spec(&self) -> Result<LtfSpec> {
        expect_format(&self.format, LTF_FORMAT)?;
        LtfSpec::new(self.a0, self.a.clone())
    }
}

impl PtfFile {
    pub fn from_spec(spec: &PtfSpec) -> Self {
        let terms = spec
            .terms
            .iter()
            .map(|&(m, coeff)| PtfTerm { set: mask_to_coords(m), coeff })
            .collect();
        PtfFile { format: PTF_FORMAT.into(), n: spec.n, terms }
    }

    pub fn to_spec(&self) -> Result<PtfSpec> {
        expect_format(&self.format, PTF_FORMAT)?;
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((coords_to_mask(self.n, &t.set)?, t.coeff)))
            .collect::<Result<Vec<_>>>()?;
        PtfSpec::new(self.n, terms)
    }
}

impl PlanFile {
    pub fn to_plan(&self) -> Result<CompositionPlan> {
        let outer = self.outer.to_function()?;
        let n = self
            .n
            .unwrap_or_else(|| self.blocks.iter().flatten().copied().max().unwrap_or(0));
        let blocks = self.blocks.iter().map(|b| coords_to_mask(n, b)).collect::<Result<Vec<_>>>()?;
        CompositionPlan::new(n, blocks, outer)
    }
}

pub fn mask_to_coords(mask: u64) -> Vec<usize> {
    (0..64).filter(|j| mask >> j & 1 == 1).map(|j| j + 1).collect()
}

pub fn coords_to_mask(n: usize, coords: &[usize]) -> Result<u64> {
    coords.iter().try_fold(0u64, |m, &c| {
        if c == 0 || c > n || c > 64 {
            return Err(Error::Format(format!("coordinate {c} outside 1..={n}")));
        }
        let bit = 1u64 << (c - 1);
        if m & bit != 0 {
            return Err(Error::Format(format!("coordinate {c} repeated")));
        }
        Ok(m | bit)
    })
}

fn expect_format(found: &str, want: &str) -> Result<()> {
    if found != want {
        return Err(Error::Format(format!("expected format `{want}`, found `{found}`")));
    }
    Ok(())
}

/// Any of the accepted input documents, detected by its `format` tag.
pub enum InputDocument {
    Function(BooleanFunction),
    Ltf(LtfSpec),
    Ptf(PtfSpec),
}

pub fn parse_document(text: &str) -> Result<InputDocument> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Format(format!("invalid JSON: {e}")))?;
    let format = value.get("format").and_then(|f| f.as_str()).unwrap_or_default().to_string();
    let decode = |e: serde_json::Error| Error::Format(format!("{format}: {e}"));
    match format.as_str() {
        FN_FORMAT => Ok(InputDocument::Function(
            serde_json::from_value::<FunctionFile>(value).map_err(decode)?.to_function()?,
        )),
        LTF_FORMAT => Ok(InputDocument::Ltf(serde_json::from_value::<LtfFile>(value).map_err(decode)?.to_spec()?)),
        PTF_FORMAT => Ok(InputDocument::Ptf(serde_json::from_value::<PtfFile>(value).map_err(decode)?.to_spec()?)),
        other => Err(Error::Format(format!("unknown format tag `{other}`"))),
    }
}
