//! Lifting of synset mappings onto the core concepts of the ontology.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::kb::{KnowledgeSnapshot, MappingEntry, MappingRelation, SynsetId, TaxonomyGraph};

pub const TOP: &str = "Entity";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProjectionError {
    #[error("synset {synset}: complement relation on non-core concept {concept}")]
    ComplementOnNonCore { synset: SynsetId, concept: String },
    #[error("projected mapping: {0}")]
    Json(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionStats {
    /// Non-core mapped concepts with at least one core super-concept.
    pub non_core_defined: usize,
    pub multi_super: usize,
    pub single_super: usize,
    /// Non-core mapped concepts without any core super-concept.
    pub dangling: usize,
    pub entity_fallback_synsets: usize,
    pub entity_fallback_by_pos: BTreeMap<String, usize>,
    pub multi_concept_synsets_by_pos: BTreeMap<String, usize>,
    pub cyclic_concepts: Vec<String>,
}

impl ProjectionStats {
    pub fn rows(&self) -> Vec<(String, usize)> {
        let mut rows = vec![
            ("non_core_defined".to_string(), self.non_core_defined),
            ("multi_super".to_string(), self.multi_super),
            ("single_super".to_string(), self.single_super),
            ("dangling".to_string(), self.dangling),
            (
                "entity_fallback_synsets".to_string(),
                self.entity_fallback_synsets,
            ),
            ("cyclic_concepts".to_string(), self.cyclic_concepts.len()),
        ];
        for (pos, n) in &self.entity_fallback_by_pos {
            rows.push((format!("entity_fallback_{pos}"), *n));
        }
        for (pos, n) in &self.multi_concept_synsets_by_pos {
            rows.push((format!("multi_concept_synsets_{pos}"), *n));
        }
        rows
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectedMapping {
    pub format_version: u32,
    pub entries: BTreeMap<SynsetId, Vec<MappingEntry>>,
    /// Core super-concepts chosen for each lifted non-core concept.
    pub lifted: BTreeMap<String, Vec<String>>,
    pub dangling: BTreeSet<String>,
    pub stats: ProjectionStats,
}

impl ProjectedMapping {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("projection serializes")
    }

    pub fn from_json(text: &str) -> Result<ProjectedMapping, ProjectionError> {
        serde_json::from_str(text).map_err(|e| ProjectionError::Json(e.to_string()))
    }
}

/// Minimal core concepts above `concept`; `{concept}` when it is core and
/// empty when no core concept is reachable.
pub fn most_specific_core_supers(
    concept: &str,
    graph: &TaxonomyGraph,
    core: &BTreeSet<String>,
) -> BTreeSet<String> {
    if core.contains(concept) {
        return BTreeSet::from([concept.to_string()]);
    }
    let candidates: Vec<String> = graph
        .ancestors(concept)
        .into_iter()
        .filter(|c| core.contains(c))
        .collect();
    let ancestry: Vec<BTreeSet<String>> = candidates.iter().map(|c| graph.ancestors(c)).collect();
    candidates
        .iter()
        .enumerate()
        .filter(|(i, c)| {
            !candidates.iter().enumerate().any(|(j, other)| {
                j != *i
                    && ancestry[j].contains(c.as_str())
                    && !ancestry[*i].contains(other.as_str())
            })
        })
        .map(|(_, c)| c.clone())
        .collect()
}

fn demote(rel: MappingRelation) -> MappingRelation {
    match rel {
        MappingRelation::Equivalence => MappingRelation::Subsumption,
        other => other,
    }
}

fn push_unique(out: &mut Vec<MappingEntry>, e: MappingEntry) {
    if !out.contains(&e) {
        out.push(e);
    }
}

/// Rewrites every synset's entries onto core concepts. Synsets listed in
/// `synsets` without any resulting entry are sent to `Entity` by subsumption.
pub fn project_mapping(
    mapping: &BTreeMap<SynsetId, Vec<MappingEntry>>,
    synsets: impl IntoIterator<Item = SynsetId>,
    graph: &TaxonomyGraph,
    core: &BTreeSet<String>,
) -> Result<ProjectedMapping, ProjectionError> {
    let is_core = |c: &str| c == TOP || core.contains(c);
    let mut lifted: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut dangling = BTreeSet::new();
    for e in mapping.values().flatten() {
        if is_core(&e.concept) || lifted.contains_key(&e.concept) || dangling.contains(&e.concept) {
            continue;
        }
        let supers = most_specific_core_supers(&e.concept, graph, core);
        if supers.is_empty() {
            dangling.insert(e.concept.clone());
        } else {
            lifted.insert(e.concept.clone(), supers.into_iter().collect());
        }
    }

    let mut stats = ProjectionStats {
        non_core_defined: lifted.len(),
        multi_super: lifted.values().filter(|s| s.len() > 1).count(),
        single_super: lifted.values().filter(|s| s.len() == 1).count(),
        dangling: dangling.len(),
        cyclic_concepts: graph.cyclic_nodes().into_iter().collect(),
        ..Default::default()
    };

    let ids: BTreeSet<SynsetId> = synsets.into_iter().chain(mapping.keys().copied()).collect();
    let mut entries = BTreeMap::new();
    for id in ids {
        let mut out = Vec::new();
        for e in mapping.get(&id).into_iter().flatten() {
            if is_core(&e.concept) {
                push_unique(&mut out, e.clone());
                continue;
            }
            if e.relation.is_complement() {
                return Err(ProjectionError::ComplementOnNonCore {
                    synset: id,
                    concept: e.concept.clone(),
                });
            }
            for s in lifted.get(&e.concept).into_iter().flatten() {
                push_unique(&mut out, MappingEntry::new(s.clone(), demote(e.relation)));
            }
        }
        let pos = id.pos.letter().to_string();
        if out.is_empty() {
            out.push(MappingEntry::new(TOP, MappingRelation::Subsumption));
            stats.entity_fallback_synsets += 1;
            *stats.entity_fallback_by_pos.entry(pos.clone()).or_default() += 1;
        }
        if out.len() > 1 {
            *stats.multi_concept_synsets_by_pos.entry(pos).or_default() += 1;
        }
        entries.insert(id, out);
    }
    Ok(ProjectedMapping {
        format_version: crate::FORMAT_VERSION,
        entries,
        lifted,
        dangling,
        stats,
    })
}

pub fn project_snapshot(snap: &KnowledgeSnapshot) -> Result<ProjectedMapping, ProjectionError> {
    project_mapping(
        &snap.mapping,
        snap.synsets.keys().copied(),
        &snap.graph(),
        &snap.core,
    )
}
