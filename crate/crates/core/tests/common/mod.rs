#![allow(dead_code)]

use std::path::PathBuf;

use ontocq_core::kb::{ingest, IngestInputs, KnowledgeSnapshot};
use ontocq_core::patterns::{build_corpus, Corpus, PatternContext};
use ontocq_core::projection::{project_snapshot, ProjectedMapping};
use ontocq_core::statement::StatementOptions;

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(rel)
}

pub fn mini_inputs() -> IngestInputs {
    let m = |f: &str| fixture(&format!("mini/{f}"));
    IngestInputs {
        wordnet_dir: Some(m("wordnet")),
        morphosemantic: Some(m("morphosemantic.tsv")),
        mapping_files: vec![
            m("mapping_noun.txt"),
            m("mapping_verb.txt"),
            m("mapping_adj.txt"),
        ],
        taxonomy_files: vec![m("kif/domain.kif")],
        core_files: vec![m("kif/core.kif")],
        corrections: None,
        syntax: Default::default(),
    }
}

pub struct Pipeline {
    pub snapshot: KnowledgeSnapshot,
    pub projected: ProjectedMapping,
    pub corpus: Corpus,
}

pub fn mini_pipeline() -> Pipeline {
    let snapshot = ingest(&mini_inputs()).expect("ingest");
    let projected = project_snapshot(&snapshot).expect("project");
    let options = StatementOptions::default();
    let corpus = build_corpus(&PatternContext {
        snapshot: &snapshot,
        projected: &projected,
        options: &options,
    })
    .expect("corpus");
    Pipeline {
        snapshot,
        projected,
        corpus,
    }
}

pub mod props;

pub fn squash(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

pub const MICRO_IDS: [&str; 6] = [
    "EV1-00001",
    "EV2-00001",
    "EV3-00001",
    "MM-00001",
    "MM-00002",
    "MM-00003",
];

/// Six mini-corpus problems replayed by the mock prover.
pub fn micro_problems() -> Vec<ontocq_core::patterns::Problem> {
    mini_pipeline()
        .corpus
        .problems
        .into_iter()
        .filter(|p| MICRO_IDS.contains(&p.id.as_str()))
        .collect()
}

pub fn mock_prover(id: &str, time_limit_s: u64) -> ontocq_core::harness::ProverConfig {
    let script = fixture("micro/mock_prover.sh");
    let mut c = ontocq_core::harness::ProverConfig::new(
        id,
        "/bin/sh",
        &[script.to_str().unwrap(), "{problem}"],
    );
    c.time_limit_s = time_limit_s;
    c.grace_s = 0.2;
    c
}
