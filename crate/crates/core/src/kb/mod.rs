//! Lexical database, morphosemantic links, synset-to-concept mapping and
//! ontology taxonomy, merged into one serializable snapshot.

mod mapping;
mod morpho;
mod taxonomy;
mod wordnet;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use mapping::{
    parse_mapping_files, parse_mapping_text, read_corrections, MappingSyntax, RawMapping,
};
pub use morpho::{
    parse_morphosemantic_links, parse_morphosemantic_text, MorphoLinks, UnresolvedSense,
};
pub use taxonomy::{
    assign_kinds, parse_suo_kif_taxonomy, parse_taxonomy_text, Taxonomy, TaxonomyGraph,
};
pub use wordnet::{
    parse_sense_index, parse_wordnet_data, parse_wordnet_dir, parse_wordnet_text, SenseIndex,
    WordNetData,
};

#[derive(Debug, thiserror::Error)]
pub enum KbError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {msg}")]
    Malformed {
        path: PathBuf,
        line: usize,
        msg: String,
    },
    #[error("{path}:{line}: unknown mapping suffix `{suffix}` in `{annotation}`")]
    UnknownSuffix {
        path: PathBuf,
        line: usize,
        suffix: String,
        annotation: String,
    },
    #[error("{path}:{line}: mapping refers to synset {id} missing from the lexical database")]
    UnknownSynset {
        path: PathBuf,
        line: usize,
        id: SynsetId,
    },
    #[error("snapshot: {0}")]
    Json(#[from] serde_json::Error),
    #[error("snapshot format version {found}, expected {expected}")]
    Version { found: u32, expected: u32 },
}

pub(crate) fn read_file(path: &Path) -> Result<String, KbError> {
    let bytes = std::fs::read(path).map_err(|source| KbError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(String::from_utf8_lossy(&bytes).into_owned())
}

/// Offset namespace: satellites share the adjective file.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PosTag {
    #[serde(rename = "n")]
    Noun,
    #[serde(rename = "v")]
    Verb,
    #[serde(rename = "a")]
    Adj,
    #[serde(rename = "r")]
    Adv,
}

impl PosTag {
    pub fn letter(self) -> char {
        match self {
            PosTag::Noun => 'n',
            PosTag::Verb => 'v',
            PosTag::Adj => 'a',
            PosTag::Adv => 'r',
        }
    }

    /// Accepts the `ss_type` letters, mapping satellites onto adjectives.
    pub fn from_letter(c: char) -> Option<PosTag> {
        match c {
            'n' => Some(PosTag::Noun),
            'v' => Some(PosTag::Verb),
            'a' | 's' => Some(PosTag::Adj),
            'r' => Some(PosTag::Adv),
            _ => None,
        }
    }

    pub const ALL: [PosTag; 4] = [PosTag::Noun, PosTag::Verb, PosTag::Adj, PosTag::Adv];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SynsetId {
    pub pos: PosTag,
    pub offset: u32,
}

impl SynsetId {
    pub fn new(pos: PosTag, offset: u32) -> SynsetId {
        SynsetId { pos, offset }
    }
}

impl fmt::Display for SynsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:08}-{}", self.offset, self.pos.letter())
    }
}

impl FromStr for SynsetId {
    type Err = String;

    /// `00001740-n`, `n:00001740` or `n00001740`.
    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("bad synset id `{s}`");
        let (digits, letter) = if let Some((d, p)) = s.split_once('-') {
            (d, p)
        } else if let Some((p, d)) = s.split_once(':') {
            (d, p)
        } else if s.len() > 1 && s.is_char_boundary(1) {
            (&s[1..], &s[..1])
        } else {
            return Err(bad());
        };
        let mut letters = letter.chars();
        let pos = match (letters.next(), letters.next()) {
            (Some(c), None) => PosTag::from_letter(c).ok_or_else(bad)?,
            _ => return Err(bad()),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        Ok(SynsetId {
            pos,
            offset: digits.parse().map_err(|_| bad())?,
        })
    }
}

impl Serialize for SynsetId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SynsetId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartOfSpeech {
    Noun,
    Verb,
    Adjective,
    Satellite,
    Adverb,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Synset {
    pub id: SynsetId,
    pub pos: PartOfSpeech,
    pub lemmas: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gloss: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkKind {
    Antonym,
    Similar,
    Event,
    Agent,
    Instrument,
    Result,
}

impl LinkKind {
    pub fn from_relation(name: &str) -> Option<LinkKind> {
        match name.trim().to_ascii_lowercase().as_str() {
            "event" => Some(LinkKind::Event),
            "agent" => Some(LinkKind::Agent),
            "instrument" => Some(LinkKind::Instrument),
            "result" => Some(LinkKind::Result),
            _ => None,
        }
    }

    /// Predicate relating process and participant in the ontology.
    pub fn predicate(self) -> Option<&'static str> {
        match self {
            LinkKind::Agent => Some("agent"),
            LinkKind::Instrument => Some("instrument"),
            LinkKind::Result => Some("result"),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LexicalLink {
    pub kind: LinkKind,
    pub source: SynsetId,
    pub target: SynsetId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MappingRelation {
    Equivalence,
    Subsumption,
    Instance,
    NotEquivalence,
    NotSubsumption,
}

impl MappingRelation {
    pub fn is_complement(self) -> bool {
        matches!(
            self,
            MappingRelation::NotEquivalence | MappingRelation::NotSubsumption
        )
    }

    /// Equivalence and its complement route as the equivalence side.
    pub fn is_equivalence_like(self) -> bool {
        matches!(
            self,
            MappingRelation::Equivalence | MappingRelation::NotEquivalence
        )
    }

    pub fn symbol(self) -> &'static str {
        match self {
            MappingRelation::Equivalence => "=",
            MappingRelation::Subsumption => "+",
            MappingRelation::Instance => "@",
            MappingRelation::NotEquivalence => "!=",
            MappingRelation::NotSubsumption => "!+",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConceptKind {
    Object,
    Class,
    IndividualRelation,
    IndividualAttribute,
    ClassOfRelations,
    ClassOfAttributes,
}

impl ConceptKind {
    pub fn letter(self) -> char {
        match self {
            ConceptKind::Object => 'o',
            ConceptKind::Class => 'c',
            ConceptKind::IndividualRelation => 'r',
            ConceptKind::IndividualAttribute => 'a',
            ConceptKind::ClassOfRelations => 'R',
            ConceptKind::ClassOfAttributes => 'A',
        }
    }

    pub fn is_relation(self) -> bool {
        matches!(
            self,
            ConceptKind::IndividualRelation | ConceptKind::ClassOfRelations
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MappingEntry {
    pub concept: String,
    pub relation: MappingRelation,
}

impl MappingEntry {
    pub fn new(concept: impl Into<String>, relation: MappingRelation) -> MappingEntry {
        MappingEntry {
            concept: concept.into(),
            relation,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum TaxonomyRelation {
    Instance,
    Subclass,
    Subrelation,
    SubAttribute,
}

impl TaxonomyRelation {
    pub fn from_kif(head: &str) -> Option<TaxonomyRelation> {
        match head {
            "instance" => Some(TaxonomyRelation::Instance),
            "subclass" => Some(TaxonomyRelation::Subclass),
            "subrelation" => Some(TaxonomyRelation::Subrelation),
            "subAttribute" => Some(TaxonomyRelation::SubAttribute),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TaxonomyFact {
    pub relation: TaxonomyRelation,
    pub child: String,
    pub parent: String,
    pub source_file: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub synsets_by_pos: BTreeMap<String, usize>,
    pub antonym_pairs_by_pos: BTreeMap<String, usize>,
    pub similar_pairs: usize,
    pub ignored_pointers: BTreeMap<String, usize>,
    pub morpho_links_by_kind: BTreeMap<String, usize>,
    pub morpho_unknown_relations: BTreeMap<String, usize>,
    pub morpho_unresolved: usize,
    pub mapped_synsets_by_pos: BTreeMap<String, usize>,
    pub multi_mapped_synsets_by_pos: BTreeMap<String, usize>,
    pub unmapped_synsets_by_pos: BTreeMap<String, usize>,
    pub mapping_duplicates_collapsed: usize,
    pub taxonomy_facts: usize,
    pub taxonomy_skipped_expressions: usize,
    pub dangling_concepts: usize,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnowledgeSnapshot {
    pub format_version: u32,
    pub synsets: BTreeMap<SynsetId, Synset>,
    pub links: Vec<LexicalLink>,
    pub mapping: BTreeMap<SynsetId, Vec<MappingEntry>>,
    pub unmapped: BTreeSet<SynsetId>,
    pub taxonomy: Vec<TaxonomyFact>,
    pub kinds: BTreeMap<String, ConceptKind>,
    pub core: BTreeSet<String>,
    pub dangling: BTreeSet<String>,
    pub report: IngestReport,
}

impl Default for KnowledgeSnapshot {
    fn default() -> Self {
        KnowledgeSnapshot {
            format_version: crate::FORMAT_VERSION,
            synsets: BTreeMap::new(),
            links: Vec::new(),
            mapping: BTreeMap::new(),
            unmapped: BTreeSet::new(),
            taxonomy: Vec::new(),
            kinds: BTreeMap::new(),
            core: BTreeSet::new(),
            dangling: BTreeSet::new(),
            report: IngestReport::default(),
        }
    }
}

impl KnowledgeSnapshot {
    pub fn links_of(&self, kind: LinkKind) -> impl Iterator<Item = &LexicalLink> {
        self.links.iter().filter(move |l| l.kind == kind)
    }

    pub fn kind_of(&self, concept: &str) -> ConceptKind {
        self.kinds
            .get(concept)
            .copied()
            .unwrap_or(ConceptKind::Object)
    }

    pub fn graph(&self) -> TaxonomyGraph {
        TaxonomyGraph::new(&self.taxonomy)
    }

    pub fn to_json(&self) -> Result<String, KbError> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<KnowledgeSnapshot, KbError> {
        let snap: KnowledgeSnapshot = serde_json::from_str(text)?;
        if snap.format_version != crate::FORMAT_VERSION {
            return Err(KbError::Version {
                found: snap.format_version,
                expected: crate::FORMAT_VERSION,
            });
        }
        Ok(snap)
    }
}

#[derive(Clone, Debug, Default)]
pub struct IngestInputs {
    pub wordnet_dir: Option<PathBuf>,
    pub morphosemantic: Option<PathBuf>,
    pub mapping_files: Vec<PathBuf>,
    pub taxonomy_files: Vec<PathBuf>,
    pub core_files: Vec<PathBuf>,
    pub corrections: Option<PathBuf>,
    pub syntax: MappingSyntax,
}

/// Reads every input and merges them into a snapshot.
pub fn ingest(inputs: &IngestInputs) -> Result<KnowledgeSnapshot, KbError> {
    let mut snap = KnowledgeSnapshot::default();
    let mut report = IngestReport::default();

    let (wn, sense_index) = match &inputs.wordnet_dir {
        Some(dir) => parse_wordnet_dir(dir)?,
        None => (WordNetData::default(), None),
    };
    report.synsets_by_pos = wn.counts_by_pos();
    report.antonym_pairs_by_pos = wn.antonym_pairs_by_pos();
    report.similar_pairs = wn.similar_pairs();
    report.ignored_pointers = wn.ignored_pointers.clone();
    snap.links.extend(wn.antonyms.iter().copied());
    snap.links.extend(wn.similars.iter().copied());

    if let Some(path) = &inputs.morphosemantic {
        let m = parse_morphosemantic_links(path, sense_index.as_ref(), &wn.synsets)?;
        for l in &m.links {
            *report
                .morpho_links_by_kind
                .entry(format!("{:?}", l.kind).to_lowercase())
                .or_default() += 1;
        }
        report.morpho_unknown_relations = m.unknown_relations.clone();
        report.morpho_unresolved = m.unresolved.len();
        for u in m.unresolved.iter().take(50) {
            report.warnings.push(format!(
                "morphosemantic line {}: unresolved sense `{}`",
                u.line, u.text
            ));
        }
        snap.links.extend(m.links);
    }
    snap.synsets = wn.synsets;

    let corrections = match &inputs.corrections {
        Some(p) => read_corrections(p)?,
        None => BTreeMap::new(),
    };
    let raw = parse_mapping_files(&inputs.mapping_files, &inputs.syntax, &corrections)?;
    for (id, (path, line)) in &raw.origin {
        if !snap.synsets.contains_key(id) {
            return Err(KbError::UnknownSynset {
                path: path.clone(),
                line: *line,
                id: *id,
            });
        }
    }
    report.mapping_duplicates_collapsed = raw.duplicates_collapsed;
    for (id, entries) in &raw.entries {
        let pos = pos_label(&snap, *id);
        *report.mapped_synsets_by_pos.entry(pos.clone()).or_default() += 1;
        if entries.len() > 1 {
            *report.multi_mapped_synsets_by_pos.entry(pos).or_default() += 1;
        }
    }
    for id in &raw.unmapped {
        *report
            .unmapped_synsets_by_pos
            .entry(pos_label(&snap, *id))
            .or_default() += 1;
    }
    snap.mapping = raw.entries;
    snap.unmapped = raw.unmapped;

    let tax = parse_suo_kif_taxonomy(&inputs.taxonomy_files, &inputs.core_files)?;
    report.taxonomy_facts = tax.facts.len();
    report.taxonomy_skipped_expressions = tax.skipped;
    report.warnings.extend(tax.warnings.iter().cloned());

    let mut named: BTreeSet<String> = BTreeSet::new();
    for f in &tax.facts {
        named.insert(f.child.clone());
        named.insert(f.parent.clone());
    }
    let mut kinds = tax.kinds;
    for entries in snap.mapping.values() {
        for e in entries {
            if !named.contains(&e.concept) {
                snap.dangling.insert(e.concept.clone());
            }
            kinds
                .entry(e.concept.clone())
                .or_insert(ConceptKind::Object);
        }
    }
    report.dangling_concepts = snap.dangling.len();
    snap.taxonomy = tax.facts;
    snap.kinds = kinds;
    snap.core = tax.core;
    snap.report = report;
    Ok(snap)
}

fn pos_label(snap: &KnowledgeSnapshot, id: SynsetId) -> String {
    match snap.synsets.get(&id).map(|s| s.pos) {
        Some(PartOfSpeech::Satellite) => "s".into(),
        _ => id.pos.letter().to_string(),
    }
}
