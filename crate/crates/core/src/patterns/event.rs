use std::collections::BTreeSet;

use crate::fol::{Formula, Term};
use crate::kb::{ConceptKind, LinkKind};
use crate::statement::{routing, Routing};

use super::{
    bump, has_complement, Candidate, Category, Counters, PatternContext, Provenance, ProvenanceSide,
};

fn subclass(a: Term, b: &str) -> Formula {
    Formula::atom("$subclass", vec![a, Term::constant(b)])
}

/// Class-level questions for verb/noun event pairs. Each link falls in
/// exactly one of: equal concept sets, non-class concept, complement,
/// Event #1, #2 or #3.
pub fn generate_event(ctx: &PatternContext<'_>) -> (Vec<Candidate>, Counters) {
    let mut out = Vec::new();
    let mut counters = Counters::new();
    for link in ctx.snapshot.links_of(LinkKind::Event) {
        bump(&mut counters, "links");
        let (Some((vraw, v)), Some((nraw, n))) =
            (ctx.entries(link.source), ctx.entries(link.target))
        else {
            bump(&mut counters, "unprojected");
            continue;
        };
        let vset: BTreeSet<&String> = v.iter().map(|e| &e.0).collect();
        let nset: BTreeSet<&String> = n.iter().map(|e| &e.0).collect();
        if vset == nset {
            bump(&mut counters, "equal_mapped");
            continue;
        }
        if v.iter().chain(&n).any(|e| e.2 != ConceptKind::Class) {
            bump(&mut counters, "non_class");
            continue;
        }
        if has_complement(&v) || has_complement(&n) {
            bump(&mut counters, "complement");
            continue;
        }
        let vr = routing(v.iter().map(|e| e.1));
        let nr = routing(n.iter().map(|e| e.1));
        let category = match (vr, nr) {
            (Routing::Equivalence, Routing::Equivalence) => Category::Event1,
            (Routing::Subsumption, Routing::Subsumption) => Category::Event3,
            _ => Category::Event2,
        };
        bump(
            &mut counters,
            &format!("{}_pairs", category.prefix().to_lowercase()),
        );
        let provenance = Provenance {
            link: Some(LinkKind::Event),
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
        for (cv, _, _) in &v {
            for (cn, _, _) in &n {
                if cv == cn {
                    continue;
                }
                let f = match category {
                    Category::Event1 => Formula::equal(Term::constant(cv), Term::constant(cn)),
                    Category::Event2 if vr == Routing::Equivalence => {
                        subclass(Term::constant(cv), cn)
                    }
                    Category::Event2 => subclass(Term::constant(cn), cv),
                    _ => Formula::exists(
                        ["X"],
                        Formula::and([subclass(Term::var("X"), cv), subclass(Term::var("X"), cn)]),
                    ),
                };
                out.push(Candidate::new(category, f, provenance.clone()));
            }
        }
    }
    (out, counters)
}
