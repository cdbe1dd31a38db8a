mod common;

use common::*;
use ontocq_core::analysis::{
    build_report, write_report, CategoryMetrics, OntologyAxiomIndex, Report, ReportOptions,
};
use ontocq_core::harness::{RunRecord, SzsStatus};
use ontocq_core::patterns::Polarity;

fn rec(
    id: &str,
    pol: Polarity,
    prover: &str,
    status: SzsStatus,
    t: f64,
    axioms: &[&str],
) -> RunRecord {
    RunRecord {
        problem_id: id.into(),
        polarity: pol,
        prover_id: prover.into(),
        status,
        wall_time_s: t,
        used_axioms: axioms.iter().map(|a| a.to_string()).collect(),
        output_sha256: String::new(),
        message: None,
    }
}

fn records() -> Vec<RunRecord> {
    use Polarity::*;
    use SzsStatus::*;
    vec![
        rec("MM-00001", Truth, "v", Theorem, 1.0, &["a1", "a2"]),
        rec("MM-00001", Truth, "e", Theorem, 3.0, &["a2"]),
        rec("MM-00002", Truth, "v", GaveUp, 10.0, &[]),
        rec("MM-00002", Truth, "e", Theorem, 2.0, &["a7"]),
        rec("MM-00003", Falsity, "v", Theorem, 4.0, &["a3", "a4", "a5"]),
        rec("MM-00003", Falsity, "e", Timeout, 60.0, &[]),
        rec("ANT1-00001", Falsity, "e", Theorem, 0.5, &["a11", "a2"]),
        rec("EV3-00001", Truth, "v", Theorem, 1.0, &["a6"]),
        rec("EV3-00001", Falsity, "e", Theorem, 1.0, &["a12"]),
        rec("AGT-00001", Truth, "v", Timeout, 60.0, &[]),
        rec("AGT-00001", Truth, "e", Timeout, 60.0, &[]),
    ]
}

fn report() -> Report {
    let problems = mini_pipeline().corpus.problems;
    let index = OntologyAxiomIndex::from_file(&fixture("micro/micro.ax")).unwrap();
    build_report(
        &problems,
        &records(),
        Some(&index),
        &ReportOptions::default(),
    )
    .unwrap()
}

fn row<'a>(rows: &'a [ontocq_core::analysis::Row], key: &str) -> &'a CategoryMetrics {
    &rows
        .iter()
        .find(|r| r.category == key)
        .unwrap_or_else(|| panic!("row {key}"))
        .metrics
}

fn close(a: Option<f64>, b: f64) {
    let a = a.expect("value");
    assert!((a - b).abs() < 1e-9, "{a} != {b}");
}

#[test]
fn row_layout() {
    let r = report();
    let keys: Vec<&str> = r.joint.iter().map(|r| r.category.as_str()).collect();
    assert_eq!(keys.len(), 2 * (4 + 1 + 6 + 1 + 1) + 1);
    assert_eq!(
        keys[..5],
        [
            "truth/Multiple Mapping",
            "truth/Event #1",
            "truth/Event #2",
            "truth/Event #3",
            "truth/Mapping"
        ]
    );
    assert_eq!(keys[11..13], ["truth/Competency", "truth/Total"]);
    assert_eq!(keys[keys.len() - 1], "Total");
    assert_eq!(r.joint[4].label, "Mapping (6)");
    assert_eq!(r.joint.last().unwrap().label, "Total (32)");
}

#[test]
fn joint_proof_columns() {
    let r = report();
    let mm = row(&r.joint, "truth/Multiple Mapping");
    assert_eq!((mm.total, mm.proved), (3, 2));
    close(mm.pct, 200.0 / 3.0);
    close(mm.mean_time_s, 1.5);
    close(mm.efficiency, 0.75);
    close(mm.difficulty, 0.25);

    let mapping = row(&r.joint, "truth/Mapping");
    assert_eq!((mapping.total, mapping.proved), (6, 2));
    close(mapping.efficiency, 0.75);

    let ft = row(&r.joint, "falsity/Total");
    assert_eq!((ft.total, ft.proved), (16, 2));
    close(ft.mean_time_s, 2.25);
    close(ft.efficiency, 1.125);
    close(ft.difficulty, 0.25);

    let t = row(&r.joint, "Total");
    assert_eq!((t.total, t.proved), (32, 4));
    close(t.pct, 12.5);
    close(t.mean_time_s, 1.875);
    close(t.efficiency, 0.9375);
    close(t.difficulty, 0.25);
}

#[test]
fn inconsistent_problem_is_excluded() {
    let r = report();
    assert_eq!(r.inconsistent, ["EV3-00001"]);
    let ev3 = row(&r.joint, "truth/Event #3");
    assert_eq!((ev3.total, ev3.proved), (1, 0));
    assert_eq!(
        (ev3.mean_time_s, ev3.efficiency, ev3.difficulty),
        (None, None, None)
    );
    assert!(ev3.coverage.is_none());
}

#[test]
fn coverage_columns() {
    let r = report();
    let mm = row(&r.joint, "truth/Multiple Mapping")
        .coverage
        .clone()
        .unwrap();
    assert_eq!((mm.n, mm.s, mm.c, mm.f), (3, 2, 2, 1));
    assert!((mm.p - 20.0).abs() < 1e-9);
    assert!((mm.avg_n - 4.0 / 3.0).abs() < 1e-9);
    assert!((mm.avg_c - 1.0).abs() < 1e-9);

    let ant = row(&r.joint, "falsity/Antonym #1")
        .coverage
        .clone()
        .unwrap();
    assert_eq!((ant.n, ant.s, ant.c, ant.f), (2, 1, 2, 0));

    let t = row(&r.joint, "Total").coverage.clone().unwrap();
    assert_eq!((t.n, t.s, t.c, t.f), (7, 6, 5, 2));
    assert!((t.avg_n - 1.8).abs() < 1e-9);

    let children: usize = ["truth/Total", "falsity/Total"]
        .iter()
        .map(|k| row(&r.joint, k).coverage.as_ref().map_or(0, |c| c.s))
        .sum();
    assert_eq!(children, t.s);
}

#[test]
fn per_prover_columns() {
    let r = report();
    assert_eq!(r.per_prover.keys().collect::<Vec<_>>(), ["e", "v"]);
    let v = row(&r.per_prover["v"], "truth/Multiple Mapping");
    assert_eq!(v.proved, 1);
    close(v.mean_time_s, 1.0);
    let e = row(&r.per_prover["e"], "truth/Multiple Mapping");
    assert_eq!(e.proved, 2);
    close(e.mean_time_s, 2.5);
    close(e.efficiency, (1.0 / 3.0 + 0.5) / 2.0);
    assert!(e.coverage.is_none() && e.difficulty.is_none());
}

#[test]
fn zero_proof_rows_render_dashes() {
    let r = report();
    let text = r.render_text();
    let line = text
        .lines()
        .find(|l| l.starts_with("Competency (10)"))
        .unwrap();
    let cells: Vec<&str> = line["Competency (10)".len()..].split_whitespace().collect();
    assert_eq!(cells, ["0", "-", "-", "s.", "-"]);
    assert!(text.contains("INCONSISTENCY DETECTED"));

    let run = r.run_csv().unwrap();
    assert!(run.starts_with("category,total,proved,pct,mean_time_s,efficiency\n"));
    assert!(run.contains("\ntruth/Event #3,1,0,0.00,-,-\n"));
    assert!(run.contains("\ntruth/Multiple Mapping,3,2,66.67,1.5000,0.7500\n"));
    let coverage = r.coverage_csv().unwrap();
    assert!(
        coverage.contains("\nTotal,32,4,12.50,1.8750,0.9375,0.2500,7,46.67,6,5,2,1.80,1.40,0.40\n"),
        "{coverage}"
    );
    assert!(r
        .prover_csv()
        .unwrap()
        .contains("\nv/truth/Multiple Mapping,3,1,33.33,1.0000,1.0000\n"));
}

#[test]
fn empty_store_gives_dash_tables() {
    let problems = mini_pipeline().corpus.problems;
    let r = build_report(&problems, &[], None, &ReportOptions::default()).unwrap();
    assert!(r
        .joint
        .iter()
        .all(|row| row.metrics.proved == 0 && row.metrics.efficiency.is_none()));
    let dir = tempfile::tempdir().unwrap();
    let files = write_report(&r, dir.path()).unwrap();
    assert_eq!(files.len(), 5);
    let coverage = std::fs::read_to_string(dir.path().join("coverage.csv")).unwrap();
    assert!(
        coverage.contains("\nTotal,32,0,0.00,-,-,-,-,-,-,-,-,-,-,-\n"),
        "{coverage}"
    );
}
