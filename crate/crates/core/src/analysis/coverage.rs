use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::fol::{parse_tptp, Formula};
use crate::harness::RunRecord;

use super::AnalysisError;

/// Axiom name to formula and atomicity.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OntologyAxiomIndex {
    pub axioms: BTreeMap<String, (Formula, bool)>,
}

impl OntologyAxiomIndex {
    /// Indexes every annotated formula except conjectures. A unit clause is
    /// a single literal: an atom with at most one negation.
    pub fn from_tptp(text: &str) -> Result<OntologyAxiomIndex, AnalysisError> {
        let mut axioms = BTreeMap::new();
        for r in parse_tptp(text)? {
            if r.role == "conjecture" || r.role == "negated_conjecture" {
                continue;
            }
            let atomic = r.formula.is_literal();
            if axioms.insert(r.name.clone(), (r.formula, atomic)).is_some() {
                return Err(AnalysisError::DuplicateAxiom(r.name));
            }
        }
        Ok(OntologyAxiomIndex { axioms })
    }

    pub fn from_file(path: &Path) -> Result<OntologyAxiomIndex, AnalysisError> {
        let text = std::fs::read_to_string(path).map_err(|source| AnalysisError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        OntologyAxiomIndex::from_tptp(&text)
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    pub fn atomic_count(&self) -> usize {
        self.axioms.values().filter(|(_, a)| *a).count()
    }

    pub fn is_atomic(&self, name: &str) -> Option<bool> {
        self.axioms.get(name).map(|(_, a)| *a)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageStats {
    pub n: usize,
    /// Percentage of the ontology's axioms.
    pub p: f64,
    pub s: usize,
    pub c: usize,
    pub f: usize,
    pub avg_n: f64,
    pub avg_c: f64,
    pub avg_f: f64,
}

/// Coverage of the proofs in `proofs`. `owners` maps every used axiom to the
/// leaf cells whose proofs use it, and `cells` names the leaf cells making up
/// this row; an axiom is exclusive when its only owner is one of them.
pub fn coverage(
    proofs: &[&RunRecord],
    index: &OntologyAxiomIndex,
    owners: &BTreeMap<String, BTreeSet<String>>,
    cells: &BTreeSet<String>,
) -> Result<Option<CoverageStats>, AnalysisError> {
    let proofs: Vec<&&RunRecord> = proofs.iter().filter(|r| r.status.is_proved()).collect();
    if proofs.is_empty() {
        return Ok(None);
    }
    let mut used = BTreeSet::new();
    let (mut sum_n, mut sum_c) = (0usize, 0usize);
    for r in &proofs {
        for a in &r.used_axioms {
            let atomic = index
                .is_atomic(a)
                .ok_or_else(|| AnalysisError::UnknownAxiom {
                    axiom: a.clone(),
                    problem: r.problem_id.clone(),
                })?;
            sum_n += 1;
            sum_c += atomic as usize;
            used.insert(a.as_str());
        }
    }
    let n = used.len();
    let c = used
        .iter()
        .filter(|a| index.is_atomic(a) == Some(true))
        .count();
    let s = used
        .iter()
        .filter(|a| {
            owners
                .get(**a)
                .is_some_and(|o| o.len() == 1 && o.iter().all(|cell| cells.contains(cell)))
        })
        .count();
    let k = proofs.len() as f64;
    Ok(Some(CoverageStats {
        n,
        p: if index.is_empty() {
            0.0
        } else {
            100.0 * n as f64 / index.len() as f64
        },
        s,
        c,
        f: n - c,
        avg_n: sum_n as f64 / k,
        avg_c: sum_c as f64 / k,
        avg_f: (sum_n - sum_c) as f64 / k,
    }))
}
