use std::collections::{BTreeMap, BTreeSet};

use crate::fol::{canonical_key, Formula, Term};
use crate::kb::{LexicalLink, LinkKind, PartOfSpeech, Synset, SynsetId};
use crate::statement::{routing, synset_statement, Routing, StatementOptions};

use super::{
    bump, has_relation_kind, Candidate, Category, Counters, KindedEntry, PatternContext,
    Provenance, ProvenanceSide,
};

/// Directed antonym pairs. Every antonym pointer direction is one pair, so
/// a symmetric link contributes both `(a, b)` and `(b, a)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AntonymPairs {
    pub base: BTreeSet<(SynsetId, SynsetId)>,
    pub directed: BTreeSet<(SynsetId, SynsetId)>,
}

impl AntonymPairs {
    pub fn base_len(&self) -> usize {
        self.base.len()
    }

    pub fn directed_len(&self) -> usize {
        self.directed.len()
    }

    pub fn unordered_len(&self) -> usize {
        self.directed
            .iter()
            .filter(|(a, b)| a < b || !self.directed.contains(&(*b, *a)))
            .count()
    }
}

/// Extends each antonym pair with the satellites of both sides.
pub fn expand_antonym_pairs<'a>(
    antonyms: impl IntoIterator<Item = &'a LexicalLink>,
    similars: impl IntoIterator<Item = &'a LexicalLink>,
    synsets: &BTreeMap<SynsetId, Synset>,
) -> AntonymPairs {
    let mut sats: BTreeMap<SynsetId, BTreeSet<SynsetId>> = BTreeMap::new();
    for l in similars.into_iter().filter(|l| l.kind == LinkKind::Similar) {
        for (head, other) in [(l.source, l.target), (l.target, l.source)] {
            if synsets.get(&other).map(|s| s.pos) == Some(PartOfSpeech::Satellite) {
                sats.entry(head).or_default().insert(other);
            }
        }
    }
    let group = |a: SynsetId| -> Vec<SynsetId> {
        std::iter::once(a)
            .chain(sats.get(&a).into_iter().flatten().copied())
            .collect()
    };
    let mut out = AntonymPairs::default();
    for l in antonyms.into_iter().filter(|l| l.kind == LinkKind::Antonym) {
        out.base.insert((l.source, l.target));
    }
    for &(a, b) in &out.base {
        for x in group(a) {
            for y in group(b) {
                if x != y {
                    out.directed.insert((x, y));
                }
            }
        }
    }
    out
}

fn not_equal() -> Formula {
    Formula::not(Formula::equal(Term::var("X"), Term::var("Y")))
}

fn statement(entries: &[KindedEntry], var: &str, opts: &StatementOptions) -> Formula {
    synset_statement(entries, var, opts)
        .expect("relation-free entries")
        .formula
}

fn antonym1(a: &[KindedEntry], b: &[KindedEntry], o: &StatementOptions) -> Formula {
    Formula::forall(
        ["X", "Y"],
        Formula::implies(
            Formula::and([statement(a, "X", o), statement(b, "Y", o)]),
            not_equal(),
        ),
    )
}

fn antonym2(sub: &[KindedEntry], eq: &[KindedEntry], o: &StatementOptions) -> Formula {
    Formula::exists(
        ["X"],
        Formula::and([
            statement(sub, "X", o),
            Formula::forall(["Y"], Formula::implies(statement(eq, "Y", o), not_equal())),
        ]),
    )
}

fn antonym3(a: &[KindedEntry], b: &[KindedEntry], o: &StatementOptions) -> Formula {
    Formula::exists(
        ["X", "Y"],
        Formula::and([statement(a, "X", o), statement(b, "Y", o), not_equal()]),
    )
}

/// Incompatibility questions over expanded antonym pairs, routed by the
/// mapping relations of each side.
pub fn generate_antonym(
    ctx: &PatternContext<'_>,
    pairs: &AntonymPairs,
) -> (Vec<Candidate>, Counters) {
    let mut out = Vec::new();
    let mut counters = Counters::new();
    let o = ctx.options;
    for &(sa, sb) in &pairs.directed {
        bump(&mut counters, "pairs");
        let (Some((araw, a)), Some((braw, b))) = (ctx.entries(sa), ctx.entries(sb)) else {
            bump(&mut counters, "unprojected");
            continue;
        };
        if has_relation_kind(&a) || has_relation_kind(&b) {
            bump(&mut counters, "relation_skipped");
            continue;
        }
        let ra = routing(a.iter().map(|e| e.1));
        let rb = routing(b.iter().map(|e| e.1));
        let (category, truth, key) = match (ra, rb) {
            (Routing::Equivalence, Routing::Equivalence) => {
                let f = antonym1(&a, &b, o);
                let key = canonical_key(&f).min(canonical_key(&antonym1(&b, &a, o)));
                (Category::Antonym1, f, key)
            }
            (Routing::Subsumption, Routing::Subsumption) => {
                let f = antonym3(&a, &b, o);
                let key = canonical_key(&f).min(canonical_key(&antonym3(&b, &a, o)));
                (Category::Antonym3, f, key)
            }
            (Routing::Subsumption, Routing::Equivalence) => {
                let f = antonym2(&a, &b, o);
                let key = canonical_key(&f);
                (Category::Antonym2, f, key)
            }
            (Routing::Equivalence, Routing::Subsumption) => {
                let f = antonym2(&b, &a, o);
                let key = canonical_key(&f);
                (Category::Antonym2, f, key)
            }
        };
        bump(
            &mut counters,
            &format!("{}_pairs", category.prefix().to_lowercase()),
        );
        let provenance = Provenance {
            link: Some(LinkKind::Antonym),
            sides: vec![
                ProvenanceSide {
                    synset: sa,
                    entries: araw.clone(),
                    routing: Some(ra),
                },
                ProvenanceSide {
                    synset: sb,
                    entries: braw.clone(),
                    routing: Some(rb),
                },
            ],
        };
        out.push(Candidate {
            category,
            process_pattern: None,
            truth_test: truth,
            key,
            provenance,
        });
    }
    (out, counters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::PosTag;

    fn syn(off: u32, pos: PartOfSpeech) -> (SynsetId, Synset) {
        let id = SynsetId::new(PosTag::Adj, off);
        (
            id,
            Synset {
                id,
                pos,
                lemmas: vec![format!("w{off}")],
                gloss: None,
            },
        )
    }

    fn link(kind: LinkKind, a: u32, b: u32) -> [LexicalLink; 2] {
        let (a, b) = (SynsetId::new(PosTag::Adj, a), SynsetId::new(PosTag::Adj, b));
        [
            LexicalLink {
                kind,
                source: a,
                target: b,
            },
            LexicalLink {
                kind,
                source: b,
                target: a,
            },
        ]
    }

    #[test]
    fn lone_pair_expands_to_itself() {
        let synsets = BTreeMap::from([
            syn(1, PartOfSpeech::Adjective),
            syn(2, PartOfSpeech::Adjective),
        ]);
        let p = expand_antonym_pairs(&link(LinkKind::Antonym, 1, 2), &[], &synsets);
        assert_eq!(p.unordered_len(), 1);
        assert_eq!(p.directed_len(), 2);
    }

    #[test]
    fn satellites_expand_both_sides() {
        let mut synsets = BTreeMap::from([
            syn(1, PartOfSpeech::Adjective),
            syn(2, PartOfSpeech::Adjective),
        ]);
        let mut sims = Vec::new();
        for s in 10..12 {
            synsets.extend([syn(s, PartOfSpeech::Satellite)]);
            sims.extend(link(LinkKind::Similar, 1, s));
        }
        synsets.extend([syn(20, PartOfSpeech::Satellite)]);
        sims.extend(link(LinkKind::Similar, 2, 20));
        let p = expand_antonym_pairs(&link(LinkKind::Antonym, 1, 2), &sims, &synsets);
        assert_eq!(p.unordered_len(), 3 * 2);
        assert_eq!(p.directed_len(), 12);
    }
}
