//! Question patterns instantiated into problems: a truth test and its
//! negation, with provenance, deduplicated by canonical key.

mod antonym;
mod corpus;
mod event;
mod multiple;
mod process;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::fol::{canonical_key, negate, FolError, Formula};
use crate::kb::{
    ConceptKind, KnowledgeSnapshot, LinkKind, MappingEntry, MappingRelation, SynsetId,
};
use crate::projection::ProjectedMapping;
use crate::statement::{Routing, StatementOptions};

pub use antonym::{expand_antonym_pairs, generate_antonym, AntonymPairs};
pub use corpus::{
    build_corpus, emit_problem_files, problem_file_name, read_manifest, write_manifest, Corpus,
    GenerationReport, ManifestLine,
};
pub use event::generate_event;
pub use multiple::generate_multiple_mapping;
pub use process::generate_process;

#[derive(Debug, thiserror::Error)]
pub enum PatternError {
    #[error("{0}")]
    Fol(#[from] FolError),
    #[error("canonical key shared by {first} and {second} problems")]
    CrossCategoryCollision { first: Category, second: Category },
    #[error("manifest line {line}: {msg}")]
    Manifest { line: usize, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: std::path::PathBuf,
        source: std::io::Error,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Category {
    MultipleMapping,
    Event1,
    Event2,
    Event3,
    Antonym1,
    Antonym2,
    Antonym3,
    Agent,
    Instrument,
    Result,
}

impl Category {
    pub const ALL: [Category; 10] = [
        Category::MultipleMapping,
        Category::Event1,
        Category::Event2,
        Category::Event3,
        Category::Antonym1,
        Category::Antonym2,
        Category::Antonym3,
        Category::Agent,
        Category::Instrument,
        Category::Result,
    ];

    pub fn prefix(self) -> &'static str {
        match self {
            Category::MultipleMapping => "MM",
            Category::Event1 => "EV1",
            Category::Event2 => "EV2",
            Category::Event3 => "EV3",
            Category::Antonym1 => "ANT1",
            Category::Antonym2 => "ANT2",
            Category::Antonym3 => "ANT3",
            Category::Agent => "AGT",
            Category::Instrument => "INS",
            Category::Result => "RES",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Category::MultipleMapping => "Multiple Mapping",
            Category::Event1 => "Event #1",
            Category::Event2 => "Event #2",
            Category::Event3 => "Event #3",
            Category::Antonym1 => "Antonym #1",
            Category::Antonym2 => "Antonym #2",
            Category::Antonym3 => "Antonym #3",
            Category::Agent => "Agent",
            Category::Instrument => "Instrument",
            Category::Result => "Result",
        }
    }

    /// Mapping categories test the mapping itself; the rest are competency
    /// categories.
    pub fn is_mapping(self) -> bool {
        matches!(
            self,
            Category::MultipleMapping | Category::Event1 | Category::Event2 | Category::Event3
        )
    }

    pub fn from_link(kind: LinkKind) -> Option<Category> {
        match kind {
            LinkKind::Agent => Some(Category::Agent),
            LinkKind::Instrument => Some(Category::Instrument),
            LinkKind::Result => Some(Category::Result),
            _ => None,
        }
    }
}

impl std::fmt::Display for Category {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProcessPattern {
    P1,
    P2,
    P3,
    P4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Truth,
    Falsity,
}

impl Polarity {
    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Truth => "truth",
            Polarity::Falsity => "falsity",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenanceSide {
    pub synset: SynsetId,
    pub entries: Vec<MappingEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub routing: Option<Routing>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub link: Option<LinkKind>,
    pub sides: Vec<ProvenanceSide>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub id: String,
    pub category: Category,
    pub process_pattern: Option<ProcessPattern>,
    pub truth_test: Formula,
    pub falsity_test: Formula,
    pub provenance: Provenance,
    pub collapsed_from: usize,
    pub key: String,
}

impl Problem {
    pub fn conjecture(&self, polarity: Polarity) -> &Formula {
        match polarity {
            Polarity::Truth => &self.truth_test,
            Polarity::Falsity => &self.falsity_test,
        }
    }
}

/// Generator output before deduplication and numbering.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub category: Category,
    pub process_pattern: Option<ProcessPattern>,
    pub truth_test: Formula,
    pub key: String,
    pub provenance: Provenance,
}

impl Candidate {
    fn new(category: Category, truth_test: Formula, provenance: Provenance) -> Candidate {
        let key = canonical_key(&truth_test);
        Candidate {
            category,
            process_pattern: None,
            truth_test,
            key,
            provenance,
        }
    }
}

/// Counters keyed by name, kept sorted for stable reports.
pub type Counters = BTreeMap<String, usize>;

pub(crate) fn bump(c: &mut Counters, name: &str) {
    *c.entry(name.to_string()).or_insert(0) += 1;
}

/// Read-only inputs shared by every generator.
pub struct PatternContext<'a> {
    pub snapshot: &'a KnowledgeSnapshot,
    pub projected: &'a ProjectedMapping,
    pub options: &'a StatementOptions,
}

pub(crate) type KindedEntry = (String, MappingRelation, ConceptKind);

impl PatternContext<'_> {
    pub(crate) fn entries(&self, id: SynsetId) -> Option<(&Vec<MappingEntry>, Vec<KindedEntry>)> {
        let raw = self.projected.entries.get(&id)?;
        let kinded = raw
            .iter()
            .map(|e| {
                (
                    e.concept.clone(),
                    e.relation,
                    self.snapshot.kind_of(&e.concept),
                )
            })
            .collect();
        Some((raw, kinded))
    }
}

pub(crate) fn has_relation_kind(entries: &[KindedEntry]) -> bool {
    entries.iter().any(|e| e.2.is_relation())
}

pub(crate) fn has_complement(entries: &[KindedEntry]) -> bool {
    entries.iter().any(|e| e.1.is_complement())
}

/// Merges candidates sharing a canonical key, keeping the first one.
pub fn dedup(cands: Vec<Candidate>) -> Result<Vec<(Candidate, usize)>, PatternError> {
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut out: Vec<(Candidate, usize)> = Vec::new();
    for c in cands {
        match index.get(&c.key) {
            Some(&i) => {
                if out[i].0.category != c.category {
                    return Err(PatternError::CrossCategoryCollision {
                        first: out[i].0.category,
                        second: c.category,
                    });
                }
                out[i].1 += 1;
            }
            None => {
                index.insert(c.key.clone(), out.len());
                out.push((c, 1));
            }
        }
    }
    Ok(out)
}

/// Numbers deduplicated candidates per category in canonical-key order.
pub fn number(merged: Vec<(Candidate, usize)>) -> Result<Vec<Problem>, PatternError> {
    let mut by_cat: BTreeMap<Category, Vec<(Candidate, usize)>> = BTreeMap::new();
    for m in merged {
        by_cat.entry(m.0.category).or_default().push(m);
    }
    let mut out = Vec::new();
    for (cat, mut items) in by_cat {
        items.sort_by(|a, b| a.0.key.cmp(&b.0.key));
        for (i, (c, n)) in items.into_iter().enumerate() {
            let falsity_test = negate(&c.truth_test)?;
            out.push(Problem {
                id: format!("{}-{:05}", cat.prefix(), i + 1),
                category: cat,
                process_pattern: c.process_pattern,
                truth_test: c.truth_test,
                falsity_test,
                provenance: c.provenance,
                collapsed_from: n,
                key: c.key,
            });
        }
    }
    Ok(out)
}
