use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SzsStatus {
    Theorem,
    CounterSatisfiable,
    Satisfiable,
    Timeout,
    GaveUp,
    ResourceOut,
    Unknown,
    Error,
}

impl SzsStatus {
    pub fn from_name(name: &str) -> Option<SzsStatus> {
        Some(match name {
            "Theorem" | "Unsatisfiable" | "ContradictoryAxioms" => SzsStatus::Theorem,
            "CounterSatisfiable" => SzsStatus::CounterSatisfiable,
            "Satisfiable" => SzsStatus::Satisfiable,
            "Timeout" | "TimeOut" => SzsStatus::Timeout,
            "GaveUp" | "Incomplete" => SzsStatus::GaveUp,
            "ResourceOut" | "MemoryOut" => SzsStatus::ResourceOut,
            "Unknown" | "Inappropriate" => SzsStatus::Unknown,
            "Error" | "OSError" | "InputError" | "SyntaxError" | "UsageError" => SzsStatus::Error,
            _ => return None,
        })
    }

    pub fn is_proved(self) -> bool {
        self == SzsStatus::Theorem
    }

    /// Definite non-entailment of the conjecture.
    pub fn is_disproved(self) -> bool {
        self == SzsStatus::CounterSatisfiable
    }
}

fn status_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"SZS status\s+([A-Za-z]+)").unwrap())
}

fn file_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"file\(\s*'([^']*)'\s*,\s*([a-z][A-Za-z0-9_]*|'[^']*'|[0-9]+)\s*\)").unwrap()
    })
}

/// Last recognised `SZS status` verdict; `Unknown` when none is present.
pub fn parse_szs_status(output: &str) -> SzsStatus {
    status_re()
        .captures_iter(output)
        .filter_map(|c| SzsStatus::from_name(&c[1]))
        .last()
        .unwrap_or(SzsStatus::Unknown)
}

fn basename(p: &str) -> &str {
    p.rsplit(['/', '\\']).next().unwrap_or(p)
}

/// Axiom names cited through `file('<ontology>', name)` source annotations,
/// restricted to the proof section when the output delimits one. Sorted and
/// deduplicated.
pub fn extract_used_axioms(output: &str, ontology_file: &str) -> Vec<String> {
    let section = match (
        output.find("SZS output start"),
        output.find("SZS output end"),
    ) {
        (Some(a), Some(b)) if a < b => &output[a..b],
        _ => output,
    };
    let want = basename(ontology_file);
    let mut names: Vec<String> = file_re()
        .captures_iter(section)
        .filter(|c| basename(&c[1]) == want)
        .map(|c| c[2].trim_matches('\'').to_string())
        .collect();
    names.sort();
    names.dedup();
    names
}
