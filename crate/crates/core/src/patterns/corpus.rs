use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::fol::{emit_tptp, negate, parse_suo_kif, Role, SymbolMap};
use crate::kb::LinkKind;

use super::{
    dedup, expand_antonym_pairs, generate_antonym, generate_event, generate_multiple_mapping,
    generate_process, number, Category, Counters, PatternContext, PatternError, Polarity, Problem,
    ProcessPattern, Provenance,
};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationReport {
    pub format_version: u32,
    pub generators: BTreeMap<String, Counters>,
    pub antonym_base_pairs: usize,
    pub antonym_expanded_directed: usize,
    pub antonym_expanded_unordered: usize,
    pub candidates_by_category: BTreeMap<Category, usize>,
    pub problems_by_category: BTreeMap<Category, usize>,
    pub process_patterns: BTreeMap<String, usize>,
    pub total_problems: usize,
    pub total_conjectures: usize,
}

impl GenerationReport {
    /// Plain-text summary with one `name value` line per counter.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for (g, counters) in &self.generators {
            for (k, v) in counters {
                let _ = writeln!(out, "{g}.{k} {v}");
            }
        }
        let _ = writeln!(out, "antonym.base_pairs {}", self.antonym_base_pairs);
        let _ = writeln!(
            out,
            "antonym.expanded_directed {}",
            self.antonym_expanded_directed
        );
        let _ = writeln!(
            out,
            "antonym.expanded_unordered {}",
            self.antonym_expanded_unordered
        );
        for (p, n) in &self.process_patterns {
            let _ = writeln!(out, "process.{p} {n}");
        }
        for c in Category::ALL {
            let cands = self.candidates_by_category.get(&c).copied().unwrap_or(0);
            let probs = self.problems_by_category.get(&c).copied().unwrap_or(0);
            let _ = writeln!(out, "{} candidates {cands} problems {probs}", c.prefix());
        }
        let _ = writeln!(
            out,
            "total problems {} conjectures {}",
            self.total_problems, self.total_conjectures
        );
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Corpus {
    pub problems: Vec<Problem>,
    pub report: GenerationReport,
}

/// Runs every generator, deduplicates and numbers the problems.
pub fn build_corpus(ctx: &PatternContext<'_>) -> Result<Corpus, PatternError> {
    let mut report = GenerationReport {
        format_version: crate::FORMAT_VERSION,
        ..Default::default()
    };
    let snap = ctx.snapshot;
    let pairs = expand_antonym_pairs(
        snap.links_of(LinkKind::Antonym),
        snap.links_of(LinkKind::Similar),
        &snap.synsets,
    );
    report.antonym_base_pairs = pairs.base_len();
    report.antonym_expanded_directed = pairs.directed_len();
    report.antonym_expanded_unordered = pairs.unordered_len();

    let mut candidates = Vec::new();
    for (name, (cands, counters)) in [
        ("multiple_mapping", generate_multiple_mapping(ctx)),
        ("event", generate_event(ctx)),
        ("antonym", generate_antonym(ctx, &pairs)),
        ("process", generate_process(ctx)),
    ] {
        report.generators.insert(name.to_string(), counters);
        candidates.extend(cands);
    }
    for c in &candidates {
        *report.candidates_by_category.entry(c.category).or_default() += 1;
    }
    let problems = number(dedup(candidates)?)?;
    for p in &problems {
        *report.problems_by_category.entry(p.category).or_default() += 1;
        if let Some(pat) = p.process_pattern {
            *report
                .process_patterns
                .entry(format!("{pat:?}"))
                .or_default() += 1;
        }
    }
    report.total_problems = problems.len();
    report.total_conjectures = 2 * problems.len();
    Ok(Corpus { problems, report })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestLine {
    pub id: String,
    pub category: Category,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub process_pattern: Option<ProcessPattern>,
    pub truth_test: String,
    pub falsity_test: String,
    pub provenance: Provenance,
    pub collapsed_from: usize,
    pub key: String,
}

/// JSON Lines, one problem per line, in corpus order.
pub fn write_manifest(problems: &[Problem]) -> String {
    let mut out = String::new();
    for p in problems {
        let line = ManifestLine {
            id: p.id.clone(),
            category: p.category,
            process_pattern: p.process_pattern,
            truth_test: p.truth_test.to_kif(),
            falsity_test: p.falsity_test.to_kif(),
            provenance: p.provenance.clone(),
            collapsed_from: p.collapsed_from,
            key: p.key.clone(),
        };
        out.push_str(&serde_json::to_string(&line).expect("manifest line serializes"));
        out.push('\n');
    }
    out
}

pub fn read_manifest(text: &str) -> Result<Vec<Problem>, PatternError> {
    let mut out = Vec::new();
    let mut ids = std::collections::BTreeSet::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let err = |msg: String| PatternError::Manifest { line: i + 1, msg };
        let m: ManifestLine = serde_json::from_str(line).map_err(|e| err(e.to_string()))?;
        let truth_test = parse_suo_kif(&m.truth_test).map_err(|e| err(e.to_string()))?;
        let falsity_test = parse_suo_kif(&m.falsity_test).map_err(|e| err(e.to_string()))?;
        if negate(&truth_test).map_err(|e| err(e.to_string()))? != falsity_test {
            return Err(err(format!(
                "{}: falsity test is not the negated truth test",
                m.id
            )));
        }
        if !ids.insert(m.id.clone()) {
            return Err(err(format!("duplicate problem id {}", m.id)));
        }
        out.push(Problem {
            id: m.id,
            category: m.category,
            process_pattern: m.process_pattern,
            truth_test,
            falsity_test,
            provenance: m.provenance,
            collapsed_from: m.collapsed_from,
            key: m.key,
        });
    }
    Ok(out)
}

pub fn problem_file_name(id: &str, polarity: Polarity) -> String {
    format!("{id}.{}.p", polarity.as_str())
}

/// Writes `<id>.truth.p` and `<id>.falsity.p` for every problem, each
/// including the ontology file and stating one conjecture. Symbols must map
/// injectively across the whole corpus.
pub fn emit_problem_files(
    problems: &[Problem],
    ontology_include: &str,
    map: &SymbolMap,
    dir: &Path,
) -> Result<Vec<PathBuf>, PatternError> {
    std::fs::create_dir_all(dir).map_err(|source| PatternError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut seen = BTreeMap::new();
    let mut written = Vec::new();
    for p in problems {
        for pol in [Polarity::Truth, Polarity::Falsity] {
            let f = p.conjecture(pol);
            f.ensure_sentence()?;
            map.check_injective(f, &mut seen)?;
            let record = emit_tptp(
                &format!("{}_{}", p.id, pol.as_str()),
                Role::Conjecture,
                f,
                map,
            )?;
            let text = format!(
                "% {} {} {}\ninclude('{}').\n{}\n",
                p.id,
                pol.as_str(),
                p.category.label(),
                ontology_include,
                record
            );
            let path = dir.join(problem_file_name(&p.id, pol));
            std::fs::write(&path, text).map_err(|source| PatternError::Io {
                path: path.clone(),
                source,
            })?;
            written.push(path);
        }
    }
    Ok(written)
}
