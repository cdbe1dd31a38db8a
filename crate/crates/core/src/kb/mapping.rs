use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::{read_file, KbError, MappingEntry, MappingRelation, PosTag, SynsetId};

/// Suffix characters of `&%Concept<suffix>` annotations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingSyntax {
    pub suffixes: BTreeMap<char, MappingRelation>,
}

impl Default for MappingSyntax {
    fn default() -> Self {
        MappingSyntax {
            suffixes: BTreeMap::from([
                ('=', MappingRelation::Equivalence),
                ('+', MappingRelation::Subsumption),
                ('@', MappingRelation::Instance),
                (':', MappingRelation::NotEquivalence),
                ('[', MappingRelation::NotSubsumption),
            ]),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawMapping {
    /// Entries in annotation order, identical duplicates removed.
    pub entries: BTreeMap<SynsetId, Vec<MappingEntry>>,
    pub unmapped: BTreeSet<SynsetId>,
    pub duplicates_collapsed: usize,
    /// File and line each synset was read from.
    pub origin: BTreeMap<SynsetId, (PathBuf, usize)>,
}

fn annotation_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"&%([A-Za-z0-9_\-]+)(\S?)").unwrap())
}

pub fn parse_mapping_text(
    text: &str,
    path: &Path,
    syntax: &MappingSyntax,
    corrections: &BTreeMap<String, String>,
    out: &mut RawMapping,
) -> Result<(), KbError> {
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() || line.starts_with(' ') || line.starts_with(';') {
            continue;
        }
        let bad = |msg: &str| KbError::Malformed {
            path: path.to_path_buf(),
            line: line_no,
            msg: msg.to_string(),
        };
        let toks: Vec<&str> = line.split_whitespace().take(3).collect();
        if toks.len() < 3 || toks[0].len() != 8 {
            return Err(bad("expected offset, lexicographer file and synset type"));
        }
        let offset: u32 = toks[0].parse().map_err(|_| bad("bad offset"))?;
        let pos = toks[2]
            .chars()
            .next()
            .and_then(PosTag::from_letter)
            .ok_or_else(|| bad("bad synset type"))?;
        let id = SynsetId::new(pos, offset);
        out.origin
            .entry(id)
            .or_insert_with(|| (path.to_path_buf(), line_no));

        let mut entries = out.entries.remove(&id).unwrap_or_default();
        for cap in annotation_re().captures_iter(line) {
            let suffix = &cap[2];
            let relation = suffix
                .chars()
                .next()
                .and_then(|c| syntax.suffixes.get(&c).copied())
                .ok_or_else(|| KbError::UnknownSuffix {
                    path: path.to_path_buf(),
                    line: line_no,
                    suffix: suffix.to_string(),
                    annotation: cap[0].to_string(),
                })?;
            let concept = corrections
                .get(&cap[1])
                .cloned()
                .unwrap_or_else(|| cap[1].to_string());
            let entry = MappingEntry { concept, relation };
            if entries.contains(&entry) {
                out.duplicates_collapsed += 1;
            } else {
                entries.push(entry);
            }
        }
        if entries.is_empty() {
            out.unmapped.insert(id);
        } else {
            out.unmapped.remove(&id);
            out.entries.insert(id, entries);
        }
    }
    Ok(())
}

pub fn parse_mapping_files(
    paths: &[PathBuf],
    syntax: &MappingSyntax,
    corrections: &BTreeMap<String, String>,
) -> Result<RawMapping, KbError> {
    let mut out = RawMapping::default();
    for p in paths {
        parse_mapping_text(&read_file(p)?, p, syntax, corrections, &mut out)?;
    }
    Ok(out)
}

/// Two-column (tab or whitespace separated) concept renaming table.
pub fn read_corrections(path: &Path) -> Result<BTreeMap<String, String>, KbError> {
    let text = read_file(path)?;
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(KbError::Malformed {
                path: path.to_path_buf(),
                line: i + 1,
                msg: "expected `old new`".into(),
            });
        }
        out.insert(toks[0].to_string(), toks[1].to_string());
    }
    Ok(out)
}
