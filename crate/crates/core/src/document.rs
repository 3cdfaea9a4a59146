// SPDX-License-Identifier: Apache-2.0

//! The JSON interchange format for families.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "group": {"factors": [10]},
//!   "blocks": [
//!     [5],
//!     [2],
//!     [0, 4, 6]
//!   ]
//! }
//! ```
//!
//! Elements of a cyclic group are bare integers; elements of a product are
//! arrays with one residue per factor. An optional `metadata` object carries
//! free-form notes. [`render_document`] emits exactly this layout, so a
//! document it produced parses and re-renders byte for byte.

use serde_json::{Map, Value};

use crate::error::{EdfError, Result};
use crate::family::Family;
use crate::group::{GroupElement, GroupSpec};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyDocument {
    pub format_version: u64,
    pub family: Family,
    pub metadata: Option<Map<String, Value>>,
}

impl FamilyDocument {
    pub fn new(family: Family) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            family,
            metadata: None,
        }
    }

    pub fn with_metadata(mut self, metadata: Map<String, Value>) -> Self {
        self.metadata = Some(metadata);
        self
    }
}

fn schema(field: impl Into<String>, message: impl Into<String>) -> EdfError {
    EdfError::Schema {
        field: field.into(),
        message: message.into(),
    }
}

fn as_u64(value: &Value, field: &str) -> Result<u64> {
    value
        .as_u64()
        .ok_or_else(|| schema(field, "expected a non-negative integer"))
}

fn parse_group(value: &Value) -> Result<GroupSpec> {
    let obj = value
        .as_object()
        .ok_or_else(|| schema("group", "expected an object"))?;
    if let Some(key) = obj.keys().find(|k| *k != "factors") {
        return Err(schema(format!("group.{key}"), "unknown field"));
    }
    let factors = obj
        .get("factors")
        .ok_or_else(|| schema("group.factors", "missing"))?
        .as_array()
        .ok_or_else(|| schema("group.factors", "expected an array"))?;
    if factors.is_empty() {
        return Err(schema("group.factors", "at least one factor is required"));
    }
    let mut out = Vec::with_capacity(factors.len());
    for (i, f) in factors.iter().enumerate() {
        let field = format!("group.factors[{i}]");
        let f = as_u64(f, &field)?;
        if f < 2 {
            return Err(schema(field, "factors must be at least 2"));
        }
        out.push(f);
    }
    GroupSpec::new(&out)
}

fn parse_element(value: &Value, group: &GroupSpec, field: &str) -> Result<GroupElement> {
    let factors = group.factors();
    let coords = match value {
        Value::Array(items) => {
            if items.len() != factors.len() {
                return Err(schema(
                    field,
                    format!(
                        "expected {} coordinates, got {}",
                        factors.len(),
                        items.len()
                    ),
                ));
            }
            items
                .iter()
                .enumerate()
                .map(|(i, v)| as_u64(v, &format!("{field}[{i}]")))
                .collect::<Result<Vec<_>>>()?
        }
        Value::Number(_) if factors.len() == 1 => vec![as_u64(value, field)?],
        Value::Number(_) => {
            return Err(schema(
                field,
                format!("expected an array of {} coordinates", factors.len()),
            ))
        }
        _ => return Err(schema(field, "expected an element")),
    };
    for (i, (&c, &f)) in coords.iter().zip(factors).enumerate() {
        if c >= f {
            let at = if factors.len() == 1 {
                field.to_string()
            } else {
                format!("{field}[{i}]")
            };
            return Err(schema(at, format!("residue {c} is not below {f}")));
        }
    }
    Ok(GroupElement::from_coords(coords))
}

/// Parses and validates a family document.
pub fn parse_document(text: &str) -> Result<FamilyDocument> {
    let root: Value = serde_json::from_str(text).map_err(|e| EdfError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obj = root
        .as_object()
        .ok_or_else(|| schema("$", "expected an object"))?;
    if let Some(key) = obj
        .keys()
        .find(|k| !["format_version", "group", "blocks", "metadata"].contains(&k.as_str()))
    {
        return Err(schema(key.clone(), "unknown field"));
    }
    let format_version = match obj.get("format_version") {
        Some(v) => as_u64(v, "format_version")?,
        None => FORMAT_VERSION,
    };
    if format_version != FORMAT_VERSION {
        return Err(schema(
            "format_version",
            format!("unsupported version {format_version}"),
        ));
    }
    let group = parse_group(obj.get("group").ok_or_else(|| schema("group", "missing"))?)?;
    let blocks_value = obj
        .get("blocks")
        .ok_or_else(|| schema("blocks", "missing"))?
        .as_array()
        .ok_or_else(|| schema("blocks", "expected an array"))?;
    let mut blocks = Vec::with_capacity(blocks_value.len());
    for (i, block) in blocks_value.iter().enumerate() {
        let items = block
            .as_array()
            .ok_or_else(|| schema(format!("blocks[{i}]"), "expected an array"))?;
        let elements = items
            .iter()
            .enumerate()
            .map(|(j, v)| parse_element(v, &group, &format!("blocks[{i}][{j}]")))
            .collect::<Result<Vec<_>>>()?;
        blocks.push(elements);
    }
    let metadata = match obj.get("metadata") {
        None => None,
        Some(Value::Object(map)) => Some(map.clone()),
        Some(_) => return Err(schema("metadata", "expected an object")),
    };
    Ok(FamilyDocument {
        format_version,
        family: Family::new(group, blocks)?,
        metadata,
    })
}

pub fn parse_family(text: &str) -> Result<Family> {
    Ok(parse_document(text)?.family)
}

fn render_element(g: &GroupElement, cyclic: bool) -> String {
    if cyclic {
        g.coords()[0].to_string()
    } else {
        let parts: Vec<String> = g.coords().iter().map(u64::to_string).collect();
        format!("[{}]", parts.join(", "))
    }
}

/// Single-line JSON with `", "` and `": "` separators.
struct Inline;

impl serde_json::ser::Formatter for Inline {
    fn begin_array_value<W: ?Sized + std::io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> std::io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }

    fn begin_object_key<W: ?Sized + std::io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> std::io::Result<()> {
        self.begin_array_value(w, first)
    }

    fn begin_object_value<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        w.write_all(b": ")
    }
}

fn inline_json(value: &Map<String, Value>) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Inline);
    serde::Serialize::serialize(value, &mut ser).expect("JSON values always serialize");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

/// Canonical text of a document, ending in a newline.
pub fn render_document(doc: &FamilyDocument) -> String {
    let family = &doc.family;
    let cyclic = family.group().is_cyclic();
    let factors: Vec<String> = family
        .group()
        .factors()
        .iter()
        .map(u64::to_string)
        .collect();
    let blocks: Vec<String> = family
        .blocks()
        .iter()
        .map(|b| {
            let items: Vec<String> = b.iter().map(|g| render_element(g, cyclic)).collect();
            format!("    [{}]", items.join(", "))
        })
        .collect();
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!("  \"format_version\": {},\n", doc.format_version));
    out.push_str(&format!(
        "  \"group\": {{\"factors\": [{}]}},\n",
        factors.join(", ")
    ));
    out.push_str("  \"blocks\": [\n");
    out.push_str(&blocks.join(",\n"));
    out.push_str("\n  ]");
    if let Some(meta) = &doc.metadata {
        out.push_str(&format!(",\n  \"metadata\": {}", inline_json(meta)));
    }
    out.push_str("\n}\n");
    out
}

pub fn render_family(family: &Family) -> String {
    render_document(&FamilyDocument::new(family.clone()))
}
