//! Problem classification, proof metrics, axiom coverage and report tables.

mod coverage;
mod report;
mod sample;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::harness::{RunRecord, SzsStatus};
use crate::patterns::{Polarity, Problem};

pub use coverage::{coverage, CoverageStats, OntologyAxiomIndex};
pub use report::{
    build_report, write_report, CategoryMetrics, Report, ReportOptions, Row, RowLevel,
};
pub use sample::{judgment_template, sample_size, sample_uniform};

/// Lower bound applied to proof times before inverting them.
pub const TIMER_RESOLUTION_S: f64 = 0.001;

#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    #[error("axiom {axiom} used by {problem} is not in the ontology file")]
    UnknownAxiom { axiom: String, problem: String },
    #[error("ontology file: {0}")]
    Ontology(#[from] crate::fol::FolError),
    #[error("duplicate axiom name {0} in the ontology file")]
    DuplicateAxiom(String),
    #[error("{path}: {source}")]
    Io {
        path: std::path::PathBuf,
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjectureStatus {
    Passing,
    NonPassing,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Verdict {
    SolvedEntailed,
    SolvedIncompatible,
    Unsolved,
    InconsistencyDetected,
}

impl Verdict {
    pub fn from_outcomes(truth_proved: bool, falsity_proved: bool) -> Verdict {
        match (truth_proved, falsity_proved) {
            (true, false) => Verdict::SolvedEntailed,
            (false, true) => Verdict::SolvedIncompatible,
            (true, true) => Verdict::InconsistencyDetected,
            (false, false) => Verdict::Unsolved,
        }
    }

    pub fn reading(self) -> &'static str {
        match self {
            Verdict::SolvedEntailed => "the ontology is validated against the question",
            Verdict::SolvedIncompatible => "there is a defect in the ontology",
            Verdict::Unsolved => "the question may be new knowledge",
            Verdict::InconsistencyDetected => "the ontology is inconsistent",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemVerdict {
    pub problem_id: String,
    pub truth: ConjectureStatus,
    pub falsity: ConjectureStatus,
    pub verdict: Verdict,
    pub truth_provers: Vec<String>,
    pub falsity_provers: Vec<String>,
}

fn provers_proving(records: &[&RunRecord]) -> Vec<String> {
    let set: BTreeSet<&str> = records
        .iter()
        .filter(|r| r.status.is_proved())
        .map(|r| r.prover_id.as_str())
        .collect();
    set.into_iter().map(str::to_string).collect()
}

/// A conjecture counts as proved when any prover reports Theorem for it.
pub fn classify_problem(
    problem_id: &str,
    truth: &[&RunRecord],
    falsity: &[&RunRecord],
) -> ProblemVerdict {
    let truth_provers = provers_proving(truth);
    let falsity_provers = provers_proving(falsity);
    let (t, f) = (!truth_provers.is_empty(), !falsity_provers.is_empty());
    ProblemVerdict {
        problem_id: problem_id.to_string(),
        truth: if t {
            ConjectureStatus::Passing
        } else {
            ConjectureStatus::Unknown
        },
        falsity: if f {
            ConjectureStatus::NonPassing
        } else {
            ConjectureStatus::Unknown
        },
        verdict: Verdict::from_outcomes(t, f),
        truth_provers,
        falsity_provers,
    }
}

/// Records grouped by (problem id, polarity).
pub type RecordIndex<'a> = HashMap<(&'a str, Polarity), Vec<&'a RunRecord>>;

pub fn index_records(records: &[RunRecord]) -> RecordIndex<'_> {
    let mut out: RecordIndex<'_> = HashMap::new();
    for r in records {
        out.entry((r.problem_id.as_str(), r.polarity))
            .or_default()
            .push(r);
    }
    out
}

/// One verdict per problem, in corpus order.
pub fn classify_all(problems: &[Problem], records: &[RunRecord]) -> Vec<ProblemVerdict> {
    let idx = index_records(records);
    let empty = Vec::new();
    problems
        .iter()
        .map(|p| {
            let t = idx.get(&(p.id.as_str(), Polarity::Truth)).unwrap_or(&empty);
            let f = idx
                .get(&(p.id.as_str(), Polarity::Falsity))
                .unwrap_or(&empty);
            classify_problem(&p.id, t, f)
        })
        .collect()
}

pub fn verdict_counts(verdicts: &[ProblemVerdict]) -> BTreeMap<Verdict, usize> {
    let mut out = BTreeMap::new();
    for v in verdicts {
        *out.entry(v.verdict).or_insert(0) += 1;
    }
    out
}

/// JSON Lines, one verdict per line.
pub fn write_verdicts(verdicts: &[ProblemVerdict]) -> String {
    let mut out = String::new();
    for v in verdicts {
        out.push_str(&serde_json::to_string(v).expect("verdict serializes"));
        out.push('\n');
    }
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EfficiencyMode {
    /// Divide by the number of solved problems.
    #[default]
    Solved,
    /// Divide by the number of attempted problems.
    Attempted,
}

/// Mean inverse proof time. `None` when nothing was proved.
pub fn efficiency_of_times(times: &[f64], attempted: usize, mode: EfficiencyMode) -> Option<f64> {
    if times.is_empty() {
        return None;
    }
    let sum: f64 = times.iter().map(|t| 1.0 / t.max(TIMER_RESOLUTION_S)).sum();
    let denom = match mode {
        EfficiencyMode::Solved => times.len(),
        EfficiencyMode::Attempted => attempted.max(times.len()),
    };
    Some(sum / denom as f64)
}

pub fn efficiency(records: &[&RunRecord], mode: EfficiencyMode) -> Option<f64> {
    let times: Vec<f64> = records
        .iter()
        .filter(|r| r.status.is_proved())
        .map(|r| r.wall_time_s)
        .collect();
    efficiency_of_times(&times, records.len(), mode)
}

/// Share of the provers that attempted a conjecture and did not prove it.
pub fn difficulty(records: &[&RunRecord]) -> Option<f64> {
    let provers: BTreeMap<&str, bool> = records.iter().fold(BTreeMap::new(), |mut m, r| {
        *m.entry(r.prover_id.as_str()).or_insert(false) |= r.status == SzsStatus::Theorem;
        m
    });
    if provers.is_empty() {
        return None;
    }
    let failing = provers.values().filter(|ok| !**ok).count();
    Some(failing as f64 / provers.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn rec(
        id: &str,
        pol: Polarity,
        prover: &str,
        status: SzsStatus,
        t: f64,
    ) -> RunRecord {
        RunRecord {
            problem_id: id.into(),
            polarity: pol,
            prover_id: prover.into(),
            status,
            wall_time_s: t,
            used_axioms: vec![],
            output_sha256: String::new(),
            message: None,
        }
    }

    #[test]
    fn decision_table() {
        assert_eq!(Verdict::from_outcomes(true, false), Verdict::SolvedEntailed);
        assert_eq!(
            Verdict::from_outcomes(false, true),
            Verdict::SolvedIncompatible
        );
        assert_eq!(
            Verdict::from_outcomes(true, true),
            Verdict::InconsistencyDetected
        );
        assert_eq!(Verdict::from_outcomes(false, false), Verdict::Unsolved);
    }

    #[test]
    fn any_prover_suffices() {
        let a = rec("P", Polarity::Truth, "e", SzsStatus::Timeout, 9.0);
        let b = rec("P", Polarity::Truth, "v", SzsStatus::Theorem, 1.0);
        let c = rec(
            "P",
            Polarity::Falsity,
            "v",
            SzsStatus::CounterSatisfiable,
            1.0,
        );
        let v = classify_problem("P", &[&a, &b], &[&c]);
        assert_eq!(v.verdict, Verdict::SolvedEntailed);
        assert_eq!(v.truth, ConjectureStatus::Passing);
        assert_eq!(v.falsity, ConjectureStatus::Unknown);
        assert_eq!(v.truth_provers, vec!["v".to_string()]);
    }

    #[test]
    fn efficiency_values() {
        let e = |ts: &[f64]| efficiency_of_times(ts, ts.len(), EfficiencyMode::Solved);
        assert_eq!(e(&[1.0, 1.0]), Some(1.0));
        assert!((e(&[2.0, 4.0]).unwrap() - 0.375).abs() < 1e-12);
        assert_eq!(e(&[]), None);
        assert_eq!(e(&[0.0]), Some(1000.0));
        assert!(
            (efficiency_of_times(&[2.0, 4.0], 3, EfficiencyMode::Attempted).unwrap() - 0.25).abs()
                < 1e-12
        );
    }

    #[test]
    fn difficulty_ratio() {
        let mk = |fails: usize| {
            (0..5)
                .map(|i| {
                    let st = if i < fails {
                        SzsStatus::Timeout
                    } else {
                        SzsStatus::Theorem
                    };
                    rec("P", Polarity::Truth, &format!("p{i}"), st, 1.0)
                })
                .collect::<Vec<_>>()
        };
        for (fails, want) in [(0, 0.0), (2, 0.4), (4, 0.8)] {
            let rs = mk(fails);
            let refs: Vec<&RunRecord> = rs.iter().collect();
            assert!((difficulty(&refs).unwrap() - want).abs() < 1e-12);
        }
        assert_eq!(difficulty(&[]), None);
    }
}
