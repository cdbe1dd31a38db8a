use crate::fol::{canonical_key, Formula, Term};
use crate::statement::{routing, synset_statement, Routing};

use super::{
    bump, has_complement, has_relation_kind, Candidate, Category, Counters, PatternContext,
    ProcessPattern, Provenance, ProvenanceSide,
};

/// Participation questions for agent, instrument and result pairs: the verb
/// statement holds of ?X, the noun statement of ?Y, related by `(rel ?X ?Y)`.
pub fn generate_process(ctx: &PatternContext<'_>) -> (Vec<Candidate>, Counters) {
    let mut out = Vec::new();
    let mut counters = Counters::new();
    for link in &ctx.snapshot.links {
        let (Some(category), Some(pred)) = (Category::from_link(link.kind), link.kind.predicate())
        else {
            continue;
        };
        bump(&mut counters, "links");
        let (Some((vraw, v)), Some((nraw, n))) =
            (ctx.entries(link.source), ctx.entries(link.target))
        else {
            bump(&mut counters, "unprojected");
            continue;
        };
        if has_relation_kind(&v) || has_relation_kind(&n) {
            bump(&mut counters, "relation_skipped");
            continue;
        }
        if has_complement(&v) || has_complement(&n) {
            bump(&mut counters, "complement_skipped");
            continue;
        }
        let vs = synset_statement(&v, "X", ctx.options)
            .expect("checked entries")
            .formula;
        let ns = synset_statement(&n, "Y", ctx.options)
            .expect("checked entries")
            .formula;
        let rel = Formula::atom(pred, vec![Term::var("X"), Term::var("Y")]);
        let forward = || {
            Formula::forall(
                ["X"],
                Formula::implies(
                    vs.clone(),
                    Formula::exists(["Y"], Formula::and([ns.clone(), rel.clone()])),
                ),
            )
        };
        let backward = || {
            Formula::forall(
                ["Y"],
                Formula::implies(
                    ns.clone(),
                    Formula::exists(["X"], Formula::and([vs.clone(), rel.clone()])),
                ),
            )
        };
        let vr = routing(v.iter().map(|e| e.1));
        let nr = routing(n.iter().map(|e| e.1));
        let (pattern, truth) = match (vr, nr) {
            (Routing::Equivalence, Routing::Equivalence) => {
                (ProcessPattern::P1, Formula::and([forward(), backward()]))
            }
            (Routing::Equivalence, Routing::Subsumption) => (ProcessPattern::P2, forward()),
            (Routing::Subsumption, Routing::Equivalence) => (ProcessPattern::P3, backward()),
            (Routing::Subsumption, Routing::Subsumption) => (
                ProcessPattern::P4,
                Formula::exists(
                    ["X", "Y"],
                    Formula::and([vs.clone(), ns.clone(), rel.clone()]),
                ),
            ),
        };
        bump(
            &mut counters,
            &format!("{}_{:?}", category.prefix().to_lowercase(), pattern).to_lowercase(),
        );
        let provenance = Provenance {
            link: Some(link.kind),
            sides: vec![
                ProvenanceSide {
                    synset: link.source,
                    entries: vraw.clone(),
                    routing: Some(vr),
                },
                ProvenanceSide {
                    synset: link.target,
                    entries: nraw.clone(),
                    routing: Some(nr),
                },
            ],
        };
        let key = canonical_key(&truth);
        out.push(Candidate {
            category,
            process_pattern: Some(pattern),
            truth_test: truth,
            key,
            provenance,
        });
    }
    (out, counters)
}
