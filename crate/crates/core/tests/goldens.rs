mod common;

use common::*;
use ontocq_core::kb::{ConceptKind, KnowledgeSnapshot, MappingRelation, PosTag, SynsetId};
use ontocq_core::patterns::{read_manifest, write_manifest, Category, Problem, ProcessPattern};
use ontocq_core::statement::{synset_statement, with_kinds, StatementOptions};

fn synset(snap: &KnowledgeSnapshot, lemma: &str, pos: PosTag) -> SynsetId {
    *snap
        .synsets
        .iter()
        .find(|(id, s)| id.pos == pos && s.lemmas[0] == lemma)
        .unwrap_or_else(|| panic!("no synset {lemma}"))
        .0
}

fn statement_of(p: &Pipeline, lemma: &str, pos: PosTag) -> String {
    let id = synset(&p.snapshot, lemma, pos);
    let entries = with_kinds(&p.projected.entries[&id], &p.snapshot);
    squash(
        &synset_statement(&entries, "X", &StatementOptions::default())
            .unwrap()
            .formula
            .to_kif(),
    )
}

fn problem_for<'a>(p: &'a Pipeline, a: (&str, PosTag), b: (&str, PosTag)) -> &'a Problem {
    let (a, b) = (synset(&p.snapshot, a.0, a.1), synset(&p.snapshot, b.0, b.1));
    p.corpus
        .problems
        .iter()
        .find(|pr| {
            let s: Vec<SynsetId> = pr.provenance.sides.iter().map(|s| s.synset).collect();
            s == [a, b] || s == [b, a]
        })
        .expect("problem for pair")
}

fn truth(pr: &Problem) -> String {
    squash(&pr.truth_test.to_kif())
}

#[test]
fn statement_yearlong() {
    let p = mini_pipeline();
    assert_eq!(p.snapshot.kind_of("YearDuration"), ConceptKind::Object);
    assert_eq!(
        statement_of(&p, "yearlong", PosTag::Adj),
        "(equal ?X YearDuration)"
    );
}

#[test]
fn statement_artifact() {
    let p = mini_pipeline();
    assert_eq!(
        statement_of(&p, "artifact", PosTag::Noun),
        "($instance ?X Artifact)"
    );
}

#[test]
fn statement_goddess() {
    let p = mini_pipeline();
    assert_eq!(
        statement_of(&p, "goddess", PosTag::Noun),
        "(attribute ?X Female)"
    );
}

#[test]
fn statement_breakableness() {
    let p = mini_pipeline();
    assert_eq!(
        statement_of(&p, "breakableness", PosTag::Noun),
        "(exists (?Z) (and ($instance ?Z BreakabilityAttribute) (attribute ?X ?Z)))"
    );
}

#[test]
fn statement_natural_object() {
    let p = mini_pipeline();
    assert_eq!(
        statement_of(&p, "natural_object", PosTag::Noun),
        "(not ($instance ?X Artifact))"
    );
}

#[test]
fn statement_male_horse() {
    let p = mini_pipeline();
    assert_eq!(
        statement_of(&p, "male_horse", PosTag::Noun),
        "(and (attribute ?X Male) ($instance ?X Horse))"
    );
}

fn multi(p: &Pipeline, lemma: &str) -> String {
    let id = synset(&p.snapshot, lemma, PosTag::Noun);
    truth(
        p.corpus
            .problems
            .iter()
            .find(|pr| pr.provenance.sides[0].synset == id)
            .unwrap(),
    )
}

#[test]
fn multiple_mapping_warhead() {
    let p = mini_pipeline();
    assert_eq!(
        multi(&p, "warhead"),
        "(exists (?X) (and ($instance ?X ExplosiveDevice) ($instance ?X Weapon)))"
    );
}

#[test]
fn multiple_mapping_coal() {
    let p = mini_pipeline();
    assert_eq!(
        multi(&p, "coal"),
        "(exists (?X) (and ($instance ?X FossilFuel) ($instance ?X Mineral) ($instance ?X Rock)))"
    );
}

#[test]
fn event_kill_killing() {
    let p = mini_pipeline();
    let pr = problem_for(&p, ("kill", PosTag::Verb), ("killing", PosTag::Noun));
    assert_eq!(pr.category, Category::Event1);
    assert_eq!(truth(pr), "(equal Death Killing)");
}

#[test]
fn event_fix_fixing() {
    let p = mini_pipeline();
    let pr = problem_for(&p, ("fix", PosTag::Verb), ("fixing", PosTag::Noun));
    assert_eq!(pr.category, Category::Event2);
    assert_eq!(truth(pr), "($subclass Repairing Pretending)");
}

#[test]
fn event_appraise_appraisal() {
    let p = mini_pipeline();
    let pr = problem_for(&p, ("appraise", PosTag::Verb), ("appraisal", PosTag::Noun));
    assert_eq!(pr.category, Category::Event3);
    assert_eq!(
        truth(pr),
        "(exists (?X) (and ($subclass ?X Judging) ($subclass ?X Comparing)))"
    );
}

#[test]
fn antonym_birth_death() {
    let p = mini_pipeline();
    let pr = problem_for(&p, ("birth", PosTag::Noun), ("death", PosTag::Noun));
    assert_eq!(pr.category, Category::Antonym1);
    assert_eq!(
        truth(pr),
        "(forall (?X ?Y) (=> (and ($instance ?X Birth) ($instance ?Y Death)) (not (equal ?X ?Y))))"
    );
    assert_eq!(pr.collapsed_from, 2);
}

#[test]
fn antonym_rural_area_urban_area() {
    let p = mini_pipeline();
    let pr = problem_for(
        &p,
        ("rural_area", PosTag::Noun),
        ("urban_area", PosTag::Noun),
    );
    assert_eq!(pr.category, Category::Antonym2);
    assert_eq!(
        truth(pr),
        "(exists (?X) (and ($instance ?X GeographicArea) (forall (?Y) (=> ($instance ?Y City) (not (equal ?X ?Y))))))"
    );
}

#[test]
fn antonym_stained_unstained() {
    let p = mini_pipeline();
    let pr = problem_for(&p, ("stained", PosTag::Adj), ("unstained", PosTag::Adj));
    assert_eq!(pr.category, Category::Antonym3);
    assert_eq!(
        truth(pr),
        "(exists (?X ?Y) (and ($instance ?X Coloring) (not ($instance ?Y SurfaceChanging)) (not (equal ?X ?Y))))"
    );
}

#[test]
fn agent_instruct_instructor() {
    let p = mini_pipeline();
    let pr = problem_for(&p, ("instruct", PosTag::Verb), ("instructor", PosTag::Noun));
    assert_eq!(
        (pr.category, pr.process_pattern),
        (Category::Agent, Some(ProcessPattern::P1))
    );
    assert_eq!(
        truth(pr),
        "(and (forall (?X) (=> ($instance ?X EducationalProcess) (exists (?Y) (and (attribute ?Y Teacher) (agent ?X ?Y))))) \
         (forall (?Y) (=> (attribute ?Y Teacher) (exists (?X) (and ($instance ?X EducationalProcess) (agent ?X ?Y))))))"
    );
}

#[test]
fn instrument_saw_saw() {
    let p = mini_pipeline();
    let pr = problem_for(&p, ("saw", PosTag::Verb), ("saw", PosTag::Noun));
    assert_eq!(pr.process_pattern, Some(ProcessPattern::P2));
    assert_eq!(
        truth(pr),
        "(forall (?X) (=> ($instance ?X Cutting) (exists (?Y) (and ($instance ?Y Saw) (instrument ?X ?Y)))))"
    );
}

#[test]
fn result_schedule_schedule() {
    let p = mini_pipeline();
    let pr = problem_for(&p, ("schedule", PosTag::Verb), ("schedule", PosTag::Noun));
    assert_eq!(
        (pr.category, pr.process_pattern),
        (Category::Result, Some(ProcessPattern::P4))
    );
    assert_eq!(
        truth(pr),
        "(exists (?X ?Y) (and ($instance ?X Planning) ($instance ?Y Plan) (result ?X ?Y)))"
    );
}

#[test]
fn hot_cold_satellites_expand_to_36_pairs() {
    let p = mini_pipeline();
    let r = &p.corpus.report;
    assert_eq!(r.antonym_base_pairs, 8);
    // 36 hot/cold pairs plus the three noun and adjective pairs.
    assert_eq!(r.antonym_expanded_unordered, 39);
    assert_eq!(r.antonym_expanded_directed, 78);
}

#[test]
fn corpus_counts() {
    let p = mini_pipeline();
    let r = &p.corpus.report;
    let got: Vec<(Category, usize)> = r
        .problems_by_category
        .iter()
        .map(|(c, n)| (*c, *n))
        .collect();
    assert_eq!(
        got,
        vec![
            (Category::MultipleMapping, 3),
            (Category::Event1, 1),
            (Category::Event2, 1),
            (Category::Event3, 1),
            (Category::Antonym1, 2),
            (Category::Antonym2, 3),
            (Category::Antonym3, 2),
            (Category::Agent, 1),
            (Category::Instrument, 1),
            (Category::Result, 1),
        ]
    );
    assert_eq!(r.total_problems, 16);
    assert_eq!(r.total_conjectures, 32);
    assert_eq!(r.generators["process"]["relation_skipped"], 1);
}

#[test]
fn ingest_counters() {
    let p = mini_pipeline();
    let r = &p.snapshot.report;
    assert_eq!(r.morpho_unresolved, 1);
    assert_eq!(r.morpho_unknown_relations["uses"], 1);
    assert_eq!(r.morpho_links_by_kind["event"], 3);
    assert_eq!(
        p.snapshot.kind_of("customer"),
        ConceptKind::IndividualRelation
    );
    assert_eq!(
        p.snapshot.kind_of("Teacher"),
        ConceptKind::IndividualAttribute
    );
    assert_eq!(
        p.snapshot.kind_of("BreakabilityAttribute"),
        ConceptKind::ClassOfAttributes
    );
    assert!(p.snapshot.core.contains("Cooking") && !p.snapshot.core.contains("Frying"));
}

#[test]
fn projection_lifts_domain_and_falls_back() {
    let p = mini_pipeline();
    let fry = synset(&p.snapshot, "fry", PosTag::Verb);
    let e = &p.projected.entries[&fry];
    assert_eq!(
        (e[0].concept.as_str(), e[0].relation),
        ("Cooking", MappingRelation::Subsumption)
    );
    assert!(p.projected.dangling.contains("Gizmo"));
    let quickly = synset(&p.snapshot, "quickly", PosTag::Adv);
    assert_eq!(p.projected.entries[&quickly][0].concept, "Entity");
    assert_eq!(p.projected.stats.entity_fallback_synsets, 2);
}

#[test]
fn manifest_round_trip_and_determinism() {
    let a = mini_pipeline();
    let b = mini_pipeline();
    let text = write_manifest(&a.corpus.problems);
    assert_eq!(text, write_manifest(&b.corpus.problems));
    assert_eq!(read_manifest(&text).unwrap(), a.corpus.problems);
}
