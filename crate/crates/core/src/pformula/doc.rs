//! The formula document format: a canonical JSON layout with fixed key
//! order, decimal-string coefficients, `num/den` scales, and the expression
//! grammar for left-hand sides. Serialized bytes are deterministic.

use super::{FormulaError, PFormula, ScaledFormula, ZeroRelation};
use crate::exact::{Integer, Rational};
use crate::reference::{parse_expr, ConstantExpr};
use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

pub const FORMAT_TAG: &str = "pformula/1";

/// On-disk / on-wire layout. Key order is the canonical one.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormulaDoc {
    pub format: String,
    pub degree: u32,
    pub base_log2: u32,
    pub length: u32,
    pub coefficients: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sqrt3_power: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
}

/// What a parsed document describes.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Formula(PFormula),
    Scaled(ScaledFormula),
}

impl Document {
    pub fn formula(&self) -> &PFormula {
        match self {
            Document::Formula(f) => f,
            Document::Scaled(s) => &s.formula,
        }
    }
}

fn rational_text(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn parse_rational(text: &str) -> Result<Rational, FormulaError> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let n = BigInt::from_str(num.trim())
        .map_err(|e| FormulaError::Doc(format!("bad scale numerator: {e}")))?;
    let d = BigInt::from_str(den.trim())
        .map_err(|e| FormulaError::Doc(format!("bad scale denominator: {e}")))?;
    if !d.is_positive() {
        return Err(FormulaError::Doc(
            "scale denominator must be positive".into(),
        ));
    }
    Ok(Rational::new(n, d))
}

fn doc_for_pformula(f: &PFormula) -> FormulaDoc {
    FormulaDoc {
        format: FORMAT_TAG.to_string(),
        degree: f.degree(),
        base_log2: f.base_log2(),
        length: f.length(),
        coefficients: f.coeffs().iter().map(|c| c.to_string()).collect(),
        scale: None,
        sqrt3_power: None,
        lhs: None,
        name: None,
        p: None,
    }
}

/// Canonical text for a bare P-formula.
pub fn serialize_pformula(f: &PFormula) -> String {
    to_canonical_json(&doc_for_pformula(f))
}

/// Canonical text for a named identity.
pub fn serialize_scaled(sf: &ScaledFormula) -> String {
    let mut doc = doc_for_pformula(&sf.formula);
    doc.scale = Some(rational_text(&sf.scale));
    doc.sqrt3_power = Some(sf.sqrt3_power);
    doc.lhs = Some(sf.lhs.serialize());
    doc.name = Some(sf.name.clone());
    doc.p = sf.p_param;
    to_canonical_json(&doc)
}

/// A zero relation serializes as the identity `0 = 1 * P`.
pub fn serialize_zero(z: &ZeroRelation) -> String {
    let mut doc = doc_for_pformula(&z.formula);
    doc.scale = Some("1/1".to_string());
    doc.sqrt3_power = Some(0);
    doc.lhs = Some(ConstantExpr::int(0).serialize());
    doc.name = Some(z.name.clone());
    to_canonical_json(&doc)
}

fn to_canonical_json(doc: &FormulaDoc) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("document serialization");
    text.push('\n');
    text
}

/// Parse a document back. Errors carry the position serde_json reports.
pub fn parse_document(text: &str) -> Result<Document, FormulaError> {
    let doc: FormulaDoc = serde_json::from_str(text)
        .map_err(|e| FormulaError::Doc(format!("line {} column {}: {e}", e.line(), e.column())))?;
    if doc.format != FORMAT_TAG {
        return Err(FormulaError::Doc(format!(
            "unsupported format tag '{}'",
            doc.format
        )));
    }
    if doc.coefficients.len() != doc.length as usize {
        return Err(FormulaError::Doc(format!(
            "length field says {} but {} coefficients given",
            doc.length,
            doc.coefficients.len()
        )));
    }
    let coeffs: Result<Vec<Integer>, FormulaError> = doc
        .coefficients
        .iter()
        .enumerate()
        .map(|(i, c)| {
            BigInt::from_str(c.trim())
                .map_err(|e| FormulaError::Doc(format!("coefficient {}: {e}", i + 1)))
        })
        .collect();
    let formula = PFormula::new(doc.degree, doc.base_log2, coeffs?)
        .map_err(|e| FormulaError::Doc(e.to_string()))?;
    match doc.lhs {
        None => Ok(Document::Formula(formula)),
        Some(lhs_text) => {
            let lhs = parse_expr(&lhs_text).map_err(|e| FormulaError::Doc(format!("lhs: {e}")))?;
            let scale = parse_rational(
                doc.scale
                    .as_deref()
                    .ok_or_else(|| FormulaError::Doc("scaled formula missing scale".into()))?,
            )?;
            let sqrt3_power = doc.sqrt3_power.unwrap_or(0);
            if sqrt3_power > 1 {
                return Err(FormulaError::Doc("sqrt3_power must be 0 or 1".into()));
            }
            Ok(Document::Scaled(ScaledFormula {
                name: doc.name.unwrap_or_default(),
                p_param: doc.p,
                scale,
                sqrt3_power,
                formula,
                lhs,
            }))
        }
    }
}
