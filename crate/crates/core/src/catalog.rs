// SPDX-License-Identifier: Apache-2.0

//! A directory of verified families.
//!
//! Layout: `<dir>/<name>.json` holds each family document and
//! `<dir>/index.json` maps names to the verified parameters and a SHA-256
//! digest over the rendered document and its verification report. Re-running
//! the verification and comparing digests detects hand edits and drift.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::document::{parse_document, render_document, FamilyDocument};
use crate::error::{EdfError, Result};
use crate::family::Family;
use crate::verify::{classify_bswedf, verify_pdf, PropertyKind, VerificationReport};

pub const INDEX_FILE: &str = "index.json";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub kind: PropertyKind,
    pub n: u64,
    pub m: usize,
    #[serde(rename = "K")]
    pub sizes: Vec<u64>,
    pub a: u64,
    pub lambda: Option<u64>,
    pub digest: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryCheck {
    pub name: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

pub struct CatalogStore {
    dir: PathBuf,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name != "index"
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_' || c == '.')
        && !name.starts_with('.')
}

/// The verification a stored family is held to: `pdf` when the family is a
/// partitioned difference family, `bswedf` otherwise.
pub fn catalog_verification(family: &Family) -> Result<VerificationReport> {
    let pdf = verify_pdf(family);
    let mut report = if pdf.holds {
        pdf
    } else if family.m() >= 2 {
        classify_bswedf(family)?
    } else {
        return Err(EdfError::InvalidInput(
            "a single block that is not a partitioned difference family cannot be catalogued"
                .into(),
        ));
    };
    report.detail = None;
    Ok(report)
}

fn digest(rendered: &str, report: &VerificationReport) -> String {
    let mut hasher = Sha256::new();
    hasher.update(rendered.as_bytes());
    hasher.update(b"\n");
    hasher.update(serde_json::to_vec(report).expect("reports always serialize"));
    hex::encode(hasher.finalize())
}

impl CatalogStore {
    pub fn open(dir: impl AsRef<Path>) -> Self {
        Self {
            dir: dir.as_ref().to_path_buf(),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn entry_path(&self, name: &str) -> PathBuf {
        self.dir.join(format!("{name}.json"))
    }

    pub fn index(&self) -> Result<BTreeMap<String, IndexEntry>> {
        let path = self.dir.join(INDEX_FILE);
        if !path.exists() {
            return Ok(BTreeMap::new());
        }
        let text = fs::read_to_string(&path)?;
        serde_json::from_str(&text).map_err(|e| EdfError::CatalogCorrupt {
            name: INDEX_FILE.into(),
            reason: e.to_string(),
        })
    }

    fn write_index(&self, index: &BTreeMap<String, IndexEntry>) -> Result<()> {
        let text = serde_json::to_string_pretty(index).expect("index always serializes") + "\n";
        let tmp = self.dir.join(format!("{INDEX_FILE}.tmp"));
        fs::write(&tmp, text)?;
        fs::rename(tmp, self.dir.join(INDEX_FILE))?;
        Ok(())
    }

    /// Verifies `doc` and stores it under `name`, replacing any previous entry.
    pub fn add(&self, name: &str, doc: &FamilyDocument) -> Result<IndexEntry> {
        if !valid_name(name) {
            return Err(EdfError::InvalidInput(format!(
                "catalog names use letters, digits, '-', '_' and '.': `{name}`"
            )));
        }
        let report = catalog_verification(&doc.family)?;
        let rendered = render_document(doc);
        fs::create_dir_all(&self.dir)?;
        let mut index = self.index()?;
        fs::write(self.entry_path(name), &rendered)?;
        let entry = IndexEntry {
            kind: report.kind,
            n: report.n,
            m: report.m,
            sizes: report.sizes.clone(),
            a: report.a,
            lambda: report.lambda,
            digest: digest(&rendered, &report),
        };
        index.insert(name.to_string(), entry.clone());
        self.write_index(&index)?;
        Ok(entry)
    }

    pub fn list(&self) -> Result<Vec<(String, IndexEntry)>> {
        Ok(self.index()?.into_iter().collect())
    }

    pub fn load(&self, name: &str) -> Result<FamilyDocument> {
        let text = fs::read_to_string(self.entry_path(name))?;
        parse_document(&text)
    }

    /// Re-verifies one entry against its recorded digest.
    pub fn verify_entry(&self, name: &str) -> Result<()> {
        let index = self.index()?;
        let entry = index.get(name).ok_or_else(|| EdfError::CatalogCorrupt {
            name: name.into(),
            reason: "not in the index".into(),
        })?;
        let corrupt = |reason: String| EdfError::CatalogCorrupt {
            name: name.into(),
            reason,
        };
        let text = fs::read_to_string(self.entry_path(name))
            .map_err(|e| corrupt(format!("cannot read entry: {e}")))?;
        let doc = parse_document(&text).map_err(|e| corrupt(e.to_string()))?;
        let report = catalog_verification(&doc.family).map_err(|e| corrupt(e.to_string()))?;
        if report.kind != entry.kind || report.lambda != entry.lambda {
            return Err(corrupt(format!(
                "verification changed from {} (lambda {:?}) to {} (lambda {:?})",
                entry.kind, entry.lambda, report.kind, report.lambda
            )));
        }
        if digest(&text, &report) != entry.digest {
            return Err(corrupt("digest mismatch".into()));
        }
        Ok(())
    }

    /// Checks every indexed entry; never stops at the first failure.
    pub fn verify_all(&self) -> Result<Vec<EntryCheck>> {
        Ok(self
            .index()?
            .keys()
            .map(|name| match self.verify_entry(name) {
                Ok(()) => EntryCheck {
                    name: name.clone(),
                    ok: true,
                    reason: None,
                },
                Err(e) => EntryCheck {
                    name: name.clone(),
                    ok: false,
                    reason: Some(e.to_string()),
                },
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::builtin_pdf;

    #[test]
    fn add_list_verify_and_tamper() {
        let dir = tempfile::tempdir().unwrap();
        let store = CatalogStore::open(dir.path());
        let entry = store
            .add(
                "paper-z15",
                &FamilyDocument::new(builtin_pdf("paper-z15").unwrap()),
            )
            .unwrap();
        assert_eq!(entry.kind, PropertyKind::Pdf);
        assert_eq!(entry.lambda, Some(3));
        let z10 = Family::cyclic(10, &[&[5], &[2], &[0, 4, 6]]).unwrap();
        let entry = store.add("z10", &FamilyDocument::new(z10)).unwrap();
        assert_eq!(entry.kind, PropertyKind::Bswedf);

        let names: Vec<String> = store.list().unwrap().into_iter().map(|(n, _)| n).collect();
        assert_eq!(names, vec!["paper-z15", "z10"]);
        assert!(store.verify_all().unwrap().iter().all(|c| c.ok));

        let path = dir.path().join("z10.json");
        let text = fs::read_to_string(&path).unwrap().replace("[2]", "[3]");
        fs::write(&path, text).unwrap();
        assert!(matches!(
            store.verify_entry("z10"),
            Err(EdfError::CatalogCorrupt { name, .. }) if name == "z10"
        ));
        let checks = store.verify_all().unwrap();
        assert!(checks[0].ok && !checks[1].ok);
    }

    #[test]
    fn rejects_bad_names() {
        let dir = tempfile::tempdir().unwrap();
        let store = CatalogStore::open(dir.path());
        let f = Family::cyclic(3, &[&[0], &[1]]).unwrap();
        assert!(store.add("../x", &FamilyDocument::new(f.clone())).is_err());
        assert!(store.add("index", &FamilyDocument::new(f)).is_err());
    }
}
