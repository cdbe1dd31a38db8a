//! Object-level statements for synsets: one formula with a single free
//! variable describing what the synset denotes.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::fol::{Formula, Term};
use crate::kb::{ConceptKind, KnowledgeSnapshot, MappingEntry, MappingRelation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StatementError {
    #[error("relation-mapped synset: concept {0} denotes a relation")]
    RelationMapped(String),
    #[error("synset has no mapping entries")]
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement {
    pub formula: Formula,
    pub variable: String,
    pub relations_used: BTreeSet<MappingRelation>,
    pub kinds_used: BTreeSet<ConceptKind>,
}

/// Concepts for which `property` replaces `attribute`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatementOptions {
    pub property_concepts: BTreeSet<String>,
}

impl StatementOptions {
    fn attribute_pred(&self, concept: &str) -> &'static str {
        if self.property_concepts.contains(concept) {
            "property"
        } else {
            "attribute"
        }
    }
}

/// First of `Z`, `Z1`, `Z2`, ... different from `var`.
pub fn witness_variable(var: &str) -> String {
    std::iter::once("Z".to_string())
        .chain((1..).map(|i| format!("Z{i}")))
        .find(|z| z != var)
        .unwrap()
}

pub fn object_statement(
    concept: &str,
    relation: MappingRelation,
    kind: ConceptKind,
    var: &str,
    opts: &StatementOptions,
) -> Result<Formula, StatementError> {
    let x = Term::var(var);
    let c = Term::constant(concept);
    let f = match kind {
        ConceptKind::Object => Formula::equal(x, c),
        ConceptKind::Class => Formula::atom("$instance", vec![x, c]),
        ConceptKind::IndividualAttribute => Formula::atom(opts.attribute_pred(concept), vec![x, c]),
        ConceptKind::ClassOfAttributes => {
            let z = witness_variable(var);
            Formula::exists(
                [z.clone()],
                Formula::and([
                    Formula::atom("$instance", vec![Term::var(&z), c]),
                    Formula::atom(opts.attribute_pred(concept), vec![x, Term::var(&z)]),
                ]),
            )
        }
        ConceptKind::IndividualRelation | ConceptKind::ClassOfRelations => {
            return Err(StatementError::RelationMapped(concept.to_string()))
        }
    };
    Ok(if relation.is_complement() {
        Formula::not(f)
    } else {
        f
    })
}

/// Conjunction of the entry statements, in entry order, over `var`.
pub fn synset_statement(
    entries: &[(String, MappingRelation, ConceptKind)],
    var: &str,
    opts: &StatementOptions,
) -> Result<Statement, StatementError> {
    if entries.is_empty() {
        return Err(StatementError::Empty);
    }
    let parts = entries
        .iter()
        .map(|(c, r, k)| object_statement(c, *r, *k, var, opts))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Statement {
        formula: Formula::and(parts),
        variable: var.to_string(),
        relations_used: entries.iter().map(|e| e.1).collect(),
        kinds_used: entries.iter().map(|e| e.2).collect(),
    })
}

/// Attaches concept kinds from the snapshot to projected entries.
pub fn with_kinds(
    entries: &[MappingEntry],
    snap: &KnowledgeSnapshot,
) -> Vec<(String, MappingRelation, ConceptKind)> {
    entries
        .iter()
        .map(|e| (e.concept.clone(), e.relation, snap.kind_of(&e.concept)))
        .collect()
}

/// How a synset is quantified in the patterns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Routing {
    /// Equivalence-mapped: universally quantified.
    Equivalence,
    /// Subsumption- or instance-mapped: existentially quantified.
    Subsumption,
}

/// Routing by the strongest relation among the entries.
pub fn routing(relations: impl IntoIterator<Item = MappingRelation>) -> Routing {
    if relations
        .into_iter()
        .any(MappingRelation::is_equivalence_like)
    {
        Routing::Equivalence
    } else {
        Routing::Subsumption
    }
}
