use crate::fol::Formula;
use crate::statement::synset_statement;

use super::{
    bump, has_relation_kind, Candidate, Category, Counters, PatternContext, Provenance,
    ProvenanceSide,
};

/// One existential question per synset mapped to two or more concepts.
pub fn generate_multiple_mapping(ctx: &PatternContext<'_>) -> (Vec<Candidate>, Counters) {
    let mut out = Vec::new();
    let mut counters = Counters::new();
    for (&id, raw) in &ctx.projected.entries {
        if raw.len() < 2 {
            continue;
        }
        bump(&mut counters, "multi_mapped_synsets");
        let (_, kinded) = ctx.entries(id).expect("entry exists");
        if has_relation_kind(&kinded) {
            log::debug!("synset {id}: relation-mapped, skipped");
            bump(&mut counters, "relation_skipped");
            continue;
        }
        let st = synset_statement(&kinded, "X", ctx.options).expect("checked entries");
        let provenance = Provenance {
            link: None,
            sides: vec![ProvenanceSide {
                synset: id,
                entries: raw.clone(),
                routing: None,
            }],
        };
        out.push(Candidate::new(
            Category::MultipleMapping,
            Formula::exists(["X"], st.formula),
            provenance,
        ));
        bump(&mut counters, "candidates");
    }
    (out, counters)
}
