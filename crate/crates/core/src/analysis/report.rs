use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::harness::RunRecord;
use crate::patterns::{Category, Polarity, Problem};

use super::{
    classify_all, coverage, difficulty, efficiency_of_times, index_records, verdict_counts,
    write_verdicts, AnalysisError, CoverageStats, EfficiencyMode, OntologyAxiomIndex,
    ProblemVerdict, RecordIndex, Verdict,
};

#[derive(Clone, Debug, Default)]
pub struct ReportOptions {
    pub efficiency_mode: EfficiencyMode,
    /// Provers for the per-prover table; taken from the records when empty.
    pub provers: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowLevel {
    Category,
    Rollup,
    Division,
    Total,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CategoryMetrics {
    pub total: usize,
    pub proved: usize,
    pub pct: Option<f64>,
    pub mean_time_s: Option<f64>,
    pub efficiency: Option<f64>,
    pub difficulty: Option<f64>,
    pub coverage: Option<CoverageStats>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    /// Stable identifier such as `truth/Event #2`, `falsity/Mapping` or `Total`.
    pub category: String,
    pub label: String,
    pub level: RowLevel,
    pub metrics: CategoryMetrics,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub joint: Vec<Row>,
    pub per_prover: BTreeMap<String, Vec<Row>>,
    pub verdicts: Vec<ProblemVerdict>,
    pub inconsistent: Vec<String>,
    pub ontology_size: Option<usize>,
}

type Unit<'a> = (&'a str, Polarity);

struct Cell<'a> {
    category: String,
    label: String,
    level: RowLevel,
    units: Vec<Unit<'a>>,
    leaves: BTreeSet<String>,
}

fn division_name(pol: Polarity) -> &'static str {
    match pol {
        Polarity::Truth => "Truth-tests",
        Polarity::Falsity => "Falsity-tests",
    }
}

fn thousands(n: usize) -> String {
    let s = n.to_string();
    let mut out = String::new();
    for (i, ch) in s.chars().enumerate() {
        if i > 0 && (s.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(ch);
    }
    out
}

fn leaf_key(pol: Polarity, cat: Category) -> String {
    format!("{}/{}", pol.as_str(), cat.label())
}

fn layout<'a>(problems: &'a [Problem]) -> Vec<Cell<'a>> {
    let mut by_cat: BTreeMap<Category, Vec<&'a str>> = BTreeMap::new();
    for p in problems {
        by_cat.entry(p.category).or_default().push(p.id.as_str());
    }
    fn units_of<'a>(
        by_cat: &BTreeMap<Category, Vec<&'a str>>,
        cats: &[Category],
        pols: &[Polarity],
    ) -> Vec<Unit<'a>> {
        let mut out = Vec::new();
        for &pol in pols {
            for c in cats {
                out.extend(by_cat.get(c).into_iter().flatten().map(|id| (*id, pol)));
            }
        }
        out
    }
    let leaves_of = |cats: &[Category], pols: &[Polarity]| -> BTreeSet<String> {
        pols.iter()
            .flat_map(|&p| cats.iter().map(move |&c| leaf_key(p, c)))
            .collect()
    };
    let mapping: Vec<Category> = Category::ALL
        .into_iter()
        .filter(|c| c.is_mapping())
        .collect();
    let competency: Vec<Category> = Category::ALL
        .into_iter()
        .filter(|c| !c.is_mapping())
        .collect();
    let both = [Polarity::Truth, Polarity::Falsity];
    let mut cells = Vec::new();
    let push = |cells: &mut Vec<Cell<'a>>,
                category: String,
                name: &str,
                level,
                cats: &[Category],
                pols: &[Polarity]| {
        let units = units_of(&by_cat, cats, pols);
        let label = format!("{name} ({})", thousands(units.len()));
        cells.push(Cell {
            category,
            label,
            level,
            units,
            leaves: leaves_of(cats, pols),
        });
    };
    for pol in both {
        let d = pol.as_str();
        for (group, name) in [(&mapping, "Mapping"), (&competency, "Competency")] {
            for &c in group.iter() {
                push(
                    &mut cells,
                    leaf_key(pol, c),
                    c.label(),
                    RowLevel::Category,
                    &[c],
                    &[pol],
                );
            }
            push(
                &mut cells,
                format!("{d}/{name}"),
                name,
                RowLevel::Rollup,
                group,
                &[pol],
            );
        }
        push(
            &mut cells,
            format!("{d}/Total"),
            "Total",
            RowLevel::Division,
            &Category::ALL,
            &[pol],
        );
    }
    push(
        &mut cells,
        "Total".to_string(),
        "Total",
        RowLevel::Total,
        &Category::ALL,
        &both,
    );
    cells
}

struct Ctx<'a> {
    idx: &'a RecordIndex<'a>,
    excluded: &'a HashSet<&'a str>,
    mode: EfficiencyMode,
}

fn unit_records<'a>(ctx: &Ctx<'a>, u: &Unit<'_>, prover: Option<&str>) -> Vec<&'a RunRecord> {
    ctx.idx
        .get(u)
        .map(|rs| {
            rs.iter()
                .copied()
                .filter(|r| prover.is_none_or(|p| r.prover_id == p))
                .collect()
        })
        .unwrap_or_default()
}

fn cell_metrics(
    ctx: &Ctx<'_>,
    cell: &Cell<'_>,
    prover: Option<&str>,
    cov: Option<(&OntologyAxiomIndex, &BTreeMap<String, BTreeSet<String>>)>,
) -> Result<CategoryMetrics, AnalysisError> {
    let mut times = Vec::new();
    let mut difficulties = Vec::new();
    let mut proofs = Vec::new();
    for u in &cell.units {
        if ctx.excluded.contains(u.0) {
            continue;
        }
        let recs = unit_records(ctx, u, prover);
        let proved: Vec<&RunRecord> = recs
            .iter()
            .copied()
            .filter(|r| r.status.is_proved())
            .collect();
        if proved.is_empty() {
            continue;
        }
        times.push(
            proved
                .iter()
                .map(|r| r.wall_time_s)
                .fold(f64::INFINITY, f64::min),
        );
        if prover.is_none() {
            difficulties.extend(difficulty(&recs));
        }
        proofs.extend(proved);
    }
    let total = cell.units.len();
    let proved = times.len();
    let mean = |xs: &[f64]| (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64);
    let coverage = match cov {
        Some((index, owners)) => coverage(&proofs, index, owners, &cell.leaves)?,
        None => None,
    };
    Ok(CategoryMetrics {
        total,
        proved,
        pct: (total > 0).then(|| 100.0 * proved as f64 / total as f64),
        mean_time_s: mean(&times),
        efficiency: efficiency_of_times(&times, total, ctx.mode),
        difficulty: mean(&difficulties),
        coverage,
    })
}

/// Classifies every problem and aggregates the records into the joint table
/// (any prover) and one table per prover. Problems whose two conjectures are
/// both proved are excluded from every proof count.
pub fn build_report(
    problems: &[Problem],
    records: &[RunRecord],
    index: Option<&OntologyAxiomIndex>,
    opts: &ReportOptions,
) -> Result<Report, AnalysisError> {
    let verdicts = classify_all(problems, records);
    let inconsistent: Vec<String> = verdicts
        .iter()
        .filter(|v| v.verdict == Verdict::InconsistencyDetected)
        .map(|v| v.problem_id.clone())
        .collect();
    let excluded: HashSet<&str> = inconsistent.iter().map(String::as_str).collect();
    let idx = index_records(records);
    let ctx = Ctx {
        idx: &idx,
        excluded: &excluded,
        mode: opts.efficiency_mode,
    };
    let cells = layout(problems);

    let mut owners: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for cell in cells.iter().filter(|c| c.level == RowLevel::Category) {
        for u in cell.units.iter().filter(|u| !excluded.contains(u.0)) {
            for r in unit_records(&ctx, u, None)
                .into_iter()
                .filter(|r| r.status.is_proved())
            {
                for a in &r.used_axioms {
                    owners
                        .entry(a.clone())
                        .or_default()
                        .insert(cell.category.clone());
                }
            }
        }
    }

    let mut joint = Vec::new();
    for cell in &cells {
        let metrics = cell_metrics(&ctx, cell, None, index.map(|i| (i, &owners)))?;
        joint.push(Row {
            category: cell.category.clone(),
            label: cell.label.clone(),
            level: cell.level,
            metrics,
        });
    }
    let provers: Vec<String> = if opts.provers.is_empty() {
        records
            .iter()
            .map(|r| r.prover_id.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    } else {
        opts.provers.clone()
    };
    let mut per_prover = BTreeMap::new();
    for p in provers {
        let mut rows = Vec::new();
        for cell in &cells {
            let metrics = cell_metrics(&ctx, cell, Some(&p), None)?;
            rows.push(Row {
                category: cell.category.clone(),
                label: cell.label.clone(),
                level: cell.level,
                metrics,
            });
        }
        per_prover.insert(p, rows);
    }
    Ok(Report {
        joint,
        per_prover,
        verdicts,
        inconsistent,
        ontology_size: index.map(OntologyAxiomIndex::len),
    })
}

const DASH: &str = "-";

fn num(x: Option<f64>, digits: usize) -> String {
    x.map_or_else(|| DASH.to_string(), |v| format!("{v:.digits$}"))
}

fn int(x: Option<usize>) -> String {
    x.map_or_else(|| DASH.to_string(), |v| v.to_string())
}

fn csv_string(
    header: &[&str],
    rows: impl Iterator<Item = Vec<String>>,
) -> Result<String, AnalysisError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn proof_cells(m: &CategoryMetrics) -> Vec<String> {
    vec![
        m.total.to_string(),
        m.proved.to_string(),
        num(m.pct, 2),
        num(m.mean_time_s, 4),
        num(m.efficiency, 4),
    ]
}

impl Report {
    pub fn run_csv(&self) -> Result<String, AnalysisError> {
        let header = [
            "category",
            "total",
            "proved",
            "pct",
            "mean_time_s",
            "efficiency",
        ];
        csv_string(
            &header,
            self.joint.iter().map(|r| {
                let mut v = vec![r.category.clone()];
                v.extend(proof_cells(&r.metrics));
                v
            }),
        )
    }

    pub fn prover_csv(&self) -> Result<String, AnalysisError> {
        let header = [
            "category",
            "total",
            "proved",
            "pct",
            "mean_time_s",
            "efficiency",
        ];
        csv_string(
            &header,
            self.per_prover.iter().flat_map(|(p, rows)| {
                rows.iter().map(move |r| {
                    let mut v = vec![format!("{p}/{}", r.category)];
                    v.extend(proof_cells(&r.metrics));
                    v
                })
            }),
        )
    }

    pub fn coverage_csv(&self) -> Result<String, AnalysisError> {
        let header = [
            "category",
            "total",
            "proved",
            "pct",
            "mean_time_s",
            "efficiency",
            "difficulty",
            "N",
            "P",
            "S",
            "C",
            "F",
            "avg_N",
            "avg_C",
            "avg_F",
        ];
        csv_string(
            &header,
            self.joint.iter().map(|r| {
                let m = &r.metrics;
                let c = m.coverage.as_ref();
                let mut v = vec![r.category.clone()];
                v.extend(proof_cells(m));
                v.push(num(m.difficulty, 4));
                v.push(int(c.map(|c| c.n)));
                v.push(num(c.map(|c| c.p), 2));
                v.push(int(c.map(|c| c.s)));
                v.push(int(c.map(|c| c.c)));
                v.push(int(c.map(|c| c.f)));
                v.push(num(c.map(|c| c.avg_n), 2));
                v.push(num(c.map(|c| c.avg_c), 2));
                v.push(num(c.map(|c| c.avg_f), 2));
                v
            }),
        )
    }

    /// Human-readable rendering of the three tables with a banner on top
    /// when an inconsistency was detected.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        if !self.inconsistent.is_empty() {
            let bar = "!".repeat(72);
            let _ = writeln!(out, "{bar}");
            let _ = writeln!(
                out,
                "INCONSISTENCY DETECTED: {} problem(s) have both conjectures proved.",
                self.inconsistent.len()
            );
            let _ = writeln!(
                out,
                "The ontology is inconsistent. These problems are left out of every proof count:"
            );
            for id in &self.inconsistent {
                let _ = writeln!(out, "  {id}");
            }
            let _ = writeln!(out, "{bar}\n");
        }
        let counts = verdict_counts(&self.verdicts);
        let _ = writeln!(
            out,
            "Verdicts ({} problems)",
            thousands(self.verdicts.len())
        );
        for v in [
            Verdict::SolvedEntailed,
            Verdict::SolvedIncompatible,
            Verdict::Unsolved,
            Verdict::InconsistencyDetected,
        ] {
            let _ = writeln!(
                out,
                "  {:<22} {:>7}  {}",
                format!("{v:?}"),
                counts.get(&v).copied().unwrap_or(0),
                v.reading()
            );
        }

        let _ = writeln!(out, "\nProofs per category (any prover)");
        let _ = writeln!(
            out,
            "{:<32} {:>7} {:>8} {:>12} {:>7}",
            "Problem category", "#", "%", "T", "E"
        );
        for r in &self.joint {
            section(&mut out, r);
            let m = &r.metrics;
            let pct = if m.proved == 0 {
                DASH.to_string()
            } else {
                format!("{}%", num(m.pct, 2))
            };
            let _ = writeln!(
                out,
                "{:<32} {:>7} {:>8} {:>12} {:>7}",
                indent(r),
                thousands(m.proved),
                pct,
                format!("{} s.", num(m.mean_time_s, 2)),
                num(m.efficiency, 2)
            );
        }

        for (p, rows) in &self.per_prover {
            let _ = writeln!(out, "\nProver {p}");
            let _ = writeln!(
                out,
                "{:<32} {:>7} {:>12} {:>7}",
                "Problem category", "#", "T", "E"
            );
            for r in rows {
                section(&mut out, r);
                let m = &r.metrics;
                let _ = writeln!(
                    out,
                    "{:<32} {:>7} {:>12} {:>7}",
                    indent(r),
                    thousands(m.proved),
                    format!("{} s.", num(m.mean_time_s, 2)),
                    num(m.efficiency, 2)
                );
            }
        }

        let _ = writeln!(out, "\nProofs, coverage and difficulty");
        if let Some(n) = self.ontology_size {
            let _ = writeln!(out, "Ontology axioms: {}", thousands(n));
        }
        let _ = writeln!(
            out,
            "{:<32} {:>7} {:>8} {:>12} {:>7} | {:>6} {:>8} {:>5} {:>6} {:>6} | {:>5} {:>6} {:>6} {:>6}",
            "Problem category", "#", "%", "T", "E", "N", "P", "S", "C", "F", "D", "N", "C", "F"
        );
        for r in &self.joint {
            section(&mut out, r);
            let m = &r.metrics;
            let c = m.coverage.as_ref();
            let _ = writeln!(
                out,
                "{:<32} {:>7} {:>8} {:>12} {:>7} | {:>6} {:>8} {:>5} {:>6} {:>6} | {:>5} {:>6} {:>6} {:>6}",
                indent(r),
                thousands(m.proved),
                m.pct.map_or(DASH.to_string(), |p| format!("{p:.2}%")),
                format!("{} s.", num(m.mean_time_s, 2)),
                num(m.efficiency, 2),
                c.map_or(DASH.to_string(), |c| thousands(c.n)),
                c.map_or(DASH.to_string(), |c| format!("{:.2}%", c.p)),
                c.map_or(DASH.to_string(), |c| thousands(c.s)),
                c.map_or(DASH.to_string(), |c| thousands(c.c)),
                c.map_or(DASH.to_string(), |c| thousands(c.f)),
                num(m.difficulty, 2),
                num(c.map(|c| c.avg_n), 2),
                num(c.map(|c| c.avg_c), 2),
                num(c.map(|c| c.avg_f), 2),
            );
        }
        out
    }
}

fn section(out: &mut String, r: &Row) {
    if r.level == RowLevel::Category && r.category.ends_with("/Multiple Mapping") {
        let pol = if r.category.starts_with("truth") {
            Polarity::Truth
        } else {
            Polarity::Falsity
        };
        let _ = writeln!(out, "{}", division_name(pol));
    }
}

fn indent(r: &Row) -> String {
    match r.level {
        RowLevel::Category => format!("  {}", r.label),
        RowLevel::Rollup | RowLevel::Division | RowLevel::Total => r.label.clone(),
    }
}

/// Writes `by_category.csv`, `by_prover.csv`, `coverage.csv`, `report.txt` and
/// `verdicts.jsonl` into `dir`.
pub fn write_report(report: &Report, dir: &Path) -> Result<Vec<PathBuf>, AnalysisError> {
    std::fs::create_dir_all(dir).map_err(|source| AnalysisError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let files = [
        ("by_category.csv", report.run_csv()?),
        ("by_prover.csv", report.prover_csv()?),
        ("coverage.csv", report.coverage_csv()?),
        ("report.txt", report.render_text()),
        ("verdicts.jsonl", write_verdicts(&report.verdicts)),
    ];
    let mut out = Vec::new();
    for (name, text) in files {
        let path = dir.join(name);
        std::fs::write(&path, text).map_err(|source| AnalysisError::Io {
            path: path.clone(),
            source,
        })?;
        out.push(path);
    }
    Ok(out)
}
