mod common;

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use ontocq_core::analysis::{
    build_report, classify_problem, efficiency_of_times, EfficiencyMode, ReportOptions, RowLevel,
    Verdict,
};
use ontocq_core::fol::{
    canonical_key, emit_tptp_formula, negate, parse_suo_kif, parse_tptp, Formula, SymbolMap,
};
use ontocq_core::harness::{RunRecord, SzsStatus};
use ontocq_core::kb::{
    ConceptKind, MappingEntry, MappingRelation, PosTag, SynsetId, TaxonomyGraph,
};
use ontocq_core::patterns::Polarity;
use ontocq_core::projection::{most_specific_core_supers, project_mapping, TOP};
use ontocq_core::statement::{synset_statement, StatementOptions};

use common::props::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn negate_is_an_involution(f in sentence()) {
        let twice = negate(&negate(&f).unwrap()).unwrap();
        prop_assert_eq!(twice, f.clone().simplify());
        prop_assert!(matches!(negate(&f).unwrap(), Formula::Not(_)) || matches!(f, Formula::Not(_)));
    }

    #[test]
    fn kif_round_trip(f in sentence()) {
        prop_assert_eq!(parse_suo_kif(&f.to_kif()).unwrap(), f);
    }

    #[test]
    fn tptp_round_trip(f in sentence()) {
        let map = SymbolMap::default();
        let text = format!("fof(t, conjecture, {}).", emit_tptp_formula(&f, &map).unwrap());
        let recs = parse_tptp(&text).unwrap();
        prop_assert_eq!(recs.len(), 1);
        prop_assert_eq!(map.invert_formula(&recs[0].formula), f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn canonical_key_ignores_renaming_and_order(f in sentence()) {
        let renamed = f.map_variables(&|v| format!("R{v}"));
        prop_assert_eq!(canonical_key(&renamed), canonical_key(&f));
        prop_assert_eq!(canonical_key(&permute(&f)), canonical_key(&f));
    }

    #[test]
    fn canonical_key_separates_symbols(f in sentence()) {
        if let Some(c) = first_constant(&f) {
            let g = rename_constant(&f, &c, "FreshConstant");
            prop_assert_ne!(canonical_key(&g), canonical_key(&f));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn core_supers_match_brute_force((n, edges, core_mask) in dag()) {
        let graph = TaxonomyGraph::new(&facts(&edges));
        let core: BTreeSet<String> = (0..n).filter(|&i| core_mask[i]).map(node).collect();
        let anc = oracle_ancestors(n, &edges);
        for s in 0..n {
            let got = most_specific_core_supers(&node(s), &graph, &core);
            prop_assert_eq!(got, oracle_supers(s, &anc, &core_mask), "node {}", s);
        }
    }

    #[test]
    fn projection_is_pure_idempotent_antichain(
        (n, edges, core_mask) in dag(),
        picks in prop::collection::vec((0usize..30, 0u8..3), 1..12),
    ) {
        let sub_edges: Vec<_> = edges.iter().map(|&(c, p, _)| (c, p, 0u8)).collect();
        let graph = TaxonomyGraph::new(&facts(&sub_edges));
        let core: BTreeSet<String> = (0..n).filter(|&i| core_mask[i]).map(node).collect();
        let rels = [MappingRelation::Equivalence, MappingRelation::Subsumption, MappingRelation::Instance];
        let mut mapping: BTreeMap<SynsetId, Vec<MappingEntry>> = BTreeMap::new();
        for (k, &(c, r)) in picks.iter().enumerate() {
            let id = SynsetId::new(PosTag::Noun, k as u32 + 1);
            mapping.entry(id).or_default().push(MappingEntry::new(node(c % n), rels[r as usize]));
        }
        let once = project_mapping(&mapping, mapping.keys().copied(), &graph, &core).unwrap();
        for (id, entries) in &once.entries {
            let concepts: Vec<&String> = entries.iter().map(|e| &e.concept).collect();
            prop_assert!(concepts.iter().all(|c| core.contains(*c) || *c == TOP));
            for (i, e) in entries.iter().enumerate() {
                let src = &mapping[id];
                let lifted_from_eq = src.iter().any(|s| !core.contains(&s.concept) && s.relation == MappingRelation::Equivalence);
                let direct = src.iter().any(|s| s.concept == e.concept && s.relation == e.relation);
                prop_assert!(!(e.relation == MappingRelation::Equivalence && lifted_from_eq && !direct));
                for other in &entries[i + 1..] {
                    let a = graph.ancestors(&e.concept);
                    prop_assert!(!(a.contains(&other.concept) && src.len() == 1));
                }
            }
        }
        let twice = project_mapping(&once.entries, once.entries.keys().copied(), &graph, &core).unwrap();
        prop_assert_eq!(twice.entries, once.entries);
    }
}

#[test]
fn decision_table_is_exhaustive() {
    let want = [
        ((true, true), Verdict::InconsistencyDetected),
        ((true, false), Verdict::SolvedEntailed),
        ((false, true), Verdict::SolvedIncompatible),
        ((false, false), Verdict::Unsolved),
    ];
    for ((t, f), v) in want {
        assert_eq!(Verdict::from_outcomes(t, f), v);
        let st = |ok| {
            if ok {
                SzsStatus::Theorem
            } else {
                SzsStatus::GaveUp
            }
        };
        let tr = rec("P", Polarity::Truth, "v", st(t), 1.0);
        let fr = rec("P", Polarity::Falsity, "v", st(f), 1.0);
        assert_eq!(classify_problem("P", &[&tr], &[&fr]).verdict, v);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn classifier_uses_any_prover(
        truth in prop::collection::vec((0usize..4, status()), 0..6),
        falsity in prop::collection::vec((0usize..4, status()), 0..6),
    ) {
        let provers = ["a", "b", "c", "d"];
        let t: Vec<RunRecord> = truth.iter().map(|(p, s)| rec("P", Polarity::Truth, provers[*p], *s, 1.0)).collect();
        let f: Vec<RunRecord> = falsity.iter().map(|(p, s)| rec("P", Polarity::Falsity, provers[*p], *s, 1.0)).collect();
        let tr: Vec<&RunRecord> = t.iter().collect();
        let fr: Vec<&RunRecord> = f.iter().collect();
        let v = classify_problem("P", &tr, &fr);
        let want = Verdict::from_outcomes(
            t.iter().any(|r| r.status == SzsStatus::Theorem),
            f.iter().any(|r| r.status == SzsStatus::Theorem),
        );
        prop_assert_eq!(v.verdict, want);
    }

    #[test]
    fn efficiency_is_monotone(times in prop::collection::vec(0.01f64..600.0, 0..20), frac in 0.0f64..1.0) {
        let lo = times.iter().copied().fold(600.0, f64::min);
        let t = lo * frac;
        let before = efficiency_of_times(&times, times.len(), EfficiencyMode::Solved);
        let mut more = times.clone();
        more.push(t);
        let after = efficiency_of_times(&more, more.len(), EfficiencyMode::Solved).unwrap();
        prop_assert!(before.is_none_or(|b| after >= b - 1e-12));
    }

    #[test]
    fn statement_has_one_free_variable(
        var in "[A-Z][0-9]?",
        entries in prop::collection::vec((0usize..4, 0usize..5, 0usize..4), 1..5),
    ) {
        let kinds = [ConceptKind::Object, ConceptKind::Class, ConceptKind::IndividualAttribute, ConceptKind::ClassOfAttributes];
        let rels = [
            MappingRelation::Equivalence,
            MappingRelation::Subsumption,
            MappingRelation::Instance,
            MappingRelation::NotEquivalence,
            MappingRelation::NotSubsumption,
        ];
        let es: Vec<(String, MappingRelation, ConceptKind)> =
            entries.iter().map(|&(c, r, k)| (format!("C{c}"), rels[r], kinds[k])).collect();
        let st = synset_statement(&es, &var, &StatementOptions::default()).unwrap();
        prop_assert_eq!(st.formula.free_variables(), BTreeSet::from([var.clone()]));
        let parts = match &st.formula {
            Formula::And(ps) => ps.clone(),
            other => vec![other.clone()],
        };
        for (p, e) in parts.iter().zip(&es) {
            let nots = match p {
                Formula::Not(inner) => 1 + usize::from(matches!(**inner, Formula::Not(_))),
                _ => 0,
            };
            prop_assert_eq!(nots, usize::from(e.1.is_complement()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn report_rollups_and_percentages(
        picks in prop::collection::vec((0usize..16, any::<bool>(), 0usize..3, status(), 0.001f64..100.0), 0..60),
    ) {
        let problems = common::mini_pipeline().corpus.problems;
        let mut seen = BTreeSet::new();
        let provers = ["a", "b", "c"];
        let records: Vec<RunRecord> = picks
            .iter()
            .filter(|(i, t, p, _, _)| seen.insert((*i, *t, *p)))
            .map(|&(i, t, p, s, time)| {
                let pol = if t { Polarity::Truth } else { Polarity::Falsity };
                rec(&problems[i].id, pol, provers[p], s, time)
            })
            .collect();
        let report = build_report(&problems, &records, None, &ReportOptions::default()).unwrap();
        for rows in std::iter::once(&report.joint).chain(report.per_prover.values()) {
            let get = |k: &str| &rows.iter().find(|r| r.category == k).unwrap().metrics;
            for d in ["truth", "falsity"] {
                for group in ["Mapping", "Competency"] {
                    let roll = get(&format!("{d}/{group}"));
                    let idx = rows.iter().position(|r| r.category == format!("{d}/{group}")).unwrap();
                    let children: Vec<_> = rows[..idx].iter().rev().take_while(|r| r.level == RowLevel::Category).collect();
                    prop_assert_eq!(roll.total, children.iter().map(|r| r.metrics.total).sum::<usize>());
                    prop_assert_eq!(roll.proved, children.iter().map(|r| r.metrics.proved).sum::<usize>());
                }
                let total = get(&format!("{d}/Total"));
                prop_assert_eq!(total.total, get(&format!("{d}/Mapping")).total + get(&format!("{d}/Competency")).total);
                prop_assert_eq!(total.proved, get(&format!("{d}/Mapping")).proved + get(&format!("{d}/Competency")).proved);
            }
            let grand = get("Total");
            prop_assert_eq!(grand.total, get("truth/Total").total + get("falsity/Total").total);
            prop_assert_eq!(grand.proved, get("truth/Total").proved + get("falsity/Total").proved);
            for r in rows.iter() {
                let m = &r.metrics;
                if m.total > 0 {
                    let pct = m.pct.unwrap();
                    let rounded = (pct * 100.0).round() / 100.0;
                    prop_assert!((rounded - 100.0 * m.proved as f64 / m.total as f64).abs() <= 0.01);
                }
            }
        }
    }
}

#[test]
fn pipeline_is_deterministic() {
    let a = common::mini_pipeline();
    let b = common::mini_pipeline();
    assert_eq!(a.snapshot.to_json().unwrap(), b.snapshot.to_json().unwrap());
    assert_eq!(a.projected.to_json(), b.projected.to_json());
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut bodies = Vec::new();
    for (p, d) in [&a, &b].iter().zip(&dirs) {
        let files = ontocq_core::patterns::emit_problem_files(
            &p.corpus.problems,
            "onto.ax",
            &SymbolMap::default(),
            d.path(),
        )
        .unwrap();
        bodies.push(
            files
                .iter()
                .map(|f| (f.file_name().unwrap().to_owned(), std::fs::read(f).unwrap()))
                .collect::<Vec<_>>(),
        );
    }
    assert_eq!(bodies[0], bodies[1]);
    assert_eq!(bodies[0].len(), 32);
}

#[test]
fn antonym_links_are_symmetric() {
    let p = common::mini_pipeline();
    let links: BTreeSet<_> = p
        .snapshot
        .links_of(ontocq_core::kb::LinkKind::Antonym)
        .map(|l| (l.source, l.target))
        .collect();
    assert!(links.iter().all(|(a, b)| links.contains(&(*b, *a))));
    for pr in &p.corpus.problems {
        assert!(pr.truth_test.is_sentence() && pr.falsity_test.is_sentence());
        assert_eq!(negate(&pr.truth_test).unwrap(), pr.falsity_test);
    }
}
