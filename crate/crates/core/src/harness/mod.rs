//! Prover execution under resource limits, with an append-only record store.

mod runner;
mod szs;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::patterns::{problem_file_name, Polarity, Problem};

pub use runner::{run_all, run_job};
pub use szs::{extract_used_axioms, parse_szs_status, SzsStatus};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("prover {id}: {msg}")]
    Config { id: String, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("record store line {line}: {msg}")]
    Record { line: usize, msg: String },
    #[error("duplicate record for {problem} {polarity} {prover}")]
    Duplicate {
        problem: String,
        polarity: &'static str,
        prover: String,
    },
    #[error("record references unknown problem {0}")]
    UnknownProblem(String),
}

fn default_grace() -> f64 {
    2.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProverConfig {
    pub id: String,
    pub executable: PathBuf,
    /// Arguments with `{problem}`, `{time_s}` and `{mem_mib}` placeholders.
    pub args: Vec<String>,
    pub time_limit_s: u64,
    pub mem_limit_mib: u64,
    /// Address-space ceiling in MiB; defaults to `mem_limit_mib`, 0 disables it.
    #[serde(default)]
    pub rlimit_mib: Option<u64>,
    /// Delay between the terminate and kill signals after the deadline.
    #[serde(default = "default_grace")]
    pub grace_s: f64,
}

impl ProverConfig {
    pub fn new(id: &str, executable: impl Into<PathBuf>, args: &[&str]) -> ProverConfig {
        ProverConfig {
            id: id.to_string(),
            executable: executable.into(),
            args: args.iter().map(|a| a.to_string()).collect(),
            time_limit_s: 60,
            mem_limit_mib: 2048,
            rlimit_mib: None,
            grace_s: default_grace(),
        }
    }

    pub fn vampire(executable: impl Into<PathBuf>) -> ProverConfig {
        let args = [
            "--proof",
            "tptp",
            "--output_axiom_names",
            "on",
            "--mode",
            "casc",
            "-t",
            "{time_s}",
            "-m",
            "{mem_mib}",
            "{problem}",
        ];
        ProverConfig::new("vampire", executable, &args)
    }

    pub fn eprover(executable: impl Into<PathBuf>) -> ProverConfig {
        let args = [
            "--auto",
            "--proof-object",
            "-s",
            "--cpu-limit={time_s}",
            "--memory-limit={mem_mib}",
            "{problem}",
        ];
        ProverConfig::new("eprover", executable, &args)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let err = |msg: &str| HarnessError::Config {
            id: self.id.clone(),
            msg: msg.to_string(),
        };
        if self.time_limit_s == 0 {
            return Err(err("time limit must be positive"));
        }
        if !self.args.iter().any(|a| a.contains("{problem}")) {
            return Err(err("argument template lacks {problem}"));
        }
        if self.id.is_empty() {
            return Err(err("empty prover id"));
        }
        Ok(())
    }

    pub fn effective_rlimit_mib(&self) -> u64 {
        self.rlimit_mib.unwrap_or(self.mem_limit_mib)
    }

    pub fn instantiate(&self, problem: &Path) -> Vec<String> {
        self.args
            .iter()
            .map(|a| {
                a.replace("{problem}", &problem.to_string_lossy())
                    .replace("{time_s}", &self.time_limit_s.to_string())
                    .replace("{mem_mib}", &self.mem_limit_mib.to_string())
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Job {
    pub problem_id: String,
    pub polarity: Polarity,
    pub prover_id: String,
    pub problem_file: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub problem_id: String,
    pub polarity: Polarity,
    pub prover_id: String,
    pub status: SzsStatus,
    pub wall_time_s: f64,
    #[serde(default)]
    pub used_axioms: Vec<String>,
    pub output_sha256: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl RunRecord {
    pub fn triple(&self) -> (String, Polarity, String) {
        (
            self.problem_id.clone(),
            self.polarity,
            self.prover_id.clone(),
        )
    }
}

/// One job per conjecture and prover without a record, ordered by problem
/// id, polarity and prover id.
pub fn plan_jobs(
    problems: &[Problem],
    provers: &[ProverConfig],
    existing: &[RunRecord],
    problem_dir: &Path,
) -> Vec<Job> {
    let done: HashSet<(String, Polarity, String)> =
        existing.iter().map(RunRecord::triple).collect();
    let mut ids: Vec<&str> = problems.iter().map(|p| p.id.as_str()).collect();
    ids.sort_unstable();
    let mut prover_ids: Vec<&str> = provers.iter().map(|p| p.id.as_str()).collect();
    prover_ids.sort_unstable();
    let mut jobs = Vec::new();
    for id in ids {
        for pol in [Polarity::Truth, Polarity::Falsity] {
            for &pr in &prover_ids {
                if !done.contains(&(id.to_string(), pol, pr.to_string())) {
                    jobs.push(Job {
                        problem_id: id.to_string(),
                        polarity: pol,
                        prover_id: pr.to_string(),
                        problem_file: problem_dir.join(problem_file_name(id, pol)),
                    });
                }
            }
        }
    }
    jobs
}

/// Parses a JSON Lines record store. An unterminated, unparsable last line
/// (an interrupted write) is dropped; duplicate triples are an error.
pub fn parse_records(text: &str) -> Result<Vec<RunRecord>, HarnessError> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let lines: Vec<&str> = text.split('\n').collect();
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: RunRecord = match serde_json::from_str(line) {
            Ok(r) => r,
            Err(_) if i + 1 == lines.len() => {
                log::warn!("dropping truncated last record line {}", i + 1);
                continue;
            }
            Err(e) => {
                return Err(HarnessError::Record {
                    line: i + 1,
                    msg: e.to_string(),
                })
            }
        };
        if !seen.insert(rec.triple()) {
            return Err(HarnessError::Duplicate {
                problem: rec.problem_id,
                polarity: rec.polarity.as_str(),
                prover: rec.prover_id,
            });
        }
        out.push(rec);
    }
    Ok(out)
}

pub fn load_records(path: &Path) -> Result<Vec<RunRecord>, HarnessError> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_records(&text)
}

/// Every record must refer to a problem of the corpus.
pub fn check_integrity(records: &[RunRecord], problems: &[Problem]) -> Result<(), HarnessError> {
    let ids: BTreeSet<&str> = problems.iter().map(|p| p.id.as_str()).collect();
    match records
        .iter()
        .find(|r| !ids.contains(r.problem_id.as_str()))
    {
        Some(r) => Err(HarnessError::UnknownProblem(r.problem_id.clone())),
        None => Ok(()),
    }
}

/// Records grouped by problem id.
pub fn by_problem(records: &[RunRecord]) -> BTreeMap<&str, Vec<&RunRecord>> {
    let mut out: BTreeMap<&str, Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        out.entry(r.problem_id.as_str()).or_default().push(r);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, pol: Polarity, pr: &str) -> RunRecord {
        RunRecord {
            problem_id: id.into(),
            polarity: pol,
            prover_id: pr.into(),
            status: SzsStatus::Unknown,
            wall_time_s: 0.1,
            used_axioms: vec![],
            output_sha256: String::new(),
            message: None,
        }
    }

    #[test]
    fn template_instantiation() {
        let c = ProverConfig::vampire("vampire");
        c.validate().unwrap();
        let args = c.instantiate(Path::new("p/x.p"));
        assert_eq!(
            args.join(" "),
            "--proof tptp --output_axiom_names on --mode casc -t 60 -m 2048 p/x.p"
        );
        let mut bad = c.clone();
        bad.args.pop();
        assert!(bad.validate().is_err());
        bad.time_limit_s = 0;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn truncated_tail_tolerated_duplicates_rejected() {
        let a = serde_json::to_string(&rec("A", Polarity::Truth, "v")).unwrap();
        let text = format!("{a}\n{{\"problem_id\":\"B\",\"pol");
        assert_eq!(parse_records(&text).unwrap().len(), 1);
        assert!(matches!(
            parse_records(&format!("{a}\n{a}\n")),
            Err(HarnessError::Duplicate { .. })
        ));
        assert!(matches!(
            parse_records(&format!("garbage\n{a}\n")),
            Err(HarnessError::Record { line: 1, .. })
        ));
    }
}
