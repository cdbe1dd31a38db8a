use std::collections::BTreeSet;

use proptest::prelude::*;

use ontocq_core::fol::{Formula, Term};
use ontocq_core::harness::{RunRecord, SzsStatus};
use ontocq_core::kb::{TaxonomyFact, TaxonomyRelation};
use ontocq_core::patterns::Polarity;

pub const VARS: [&str; 4] = ["X", "Y", "Z", "W1"];

pub fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        prop::sample::select(&VARS[..]).prop_map(Term::var),
        prop::sample::select(&["Artifact", "Horse", "Death", "c1"][..]).prop_map(Term::constant),
    ];
    leaf.prop_recursive(2, 6, 3, |inner| {
        (
            prop::sample::select(&["f", "MeasureFn"][..]),
            prop::collection::vec(inner, 1..=3),
        )
            .prop_map(|(g, args)| Term::App(g.to_string(), args))
    })
}

pub fn atom() -> impl Strategy<Value = Formula> {
    prop_oneof![
        (term(), term()).prop_map(|(a, b)| Formula::equal(a, b)),
        (
            prop::sample::select(&["p", "$instance", "attribute", "agent"][..]),
            prop::collection::vec(term(), 1..=4)
        )
            .prop_map(|(p, args)| Formula::atom(p, args)),
    ]
}

pub fn binder() -> impl Strategy<Value = Vec<String>> {
    prop::sample::subsequence(&VARS[..], 1..=3)
        .prop_map(|vs| vs.into_iter().map(String::from).collect())
}

pub fn formula() -> impl Strategy<Value = Formula> {
    atom().prop_recursive(6, 48, 4, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            prop::collection::vec(inner.clone(), 2..=4).prop_map(Formula::and),
            prop::collection::vec(inner.clone(), 2..=4).prop_map(Formula::or),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (binder(), inner.clone()).prop_map(|(vs, b)| Formula::forall(vs, b)),
            (binder(), inner).prop_map(|(vs, b)| Formula::exists(vs, b)),
        ]
    })
}

pub fn sentence() -> impl Strategy<Value = Formula> {
    formula().prop_map(|f| {
        let free = f.free_variables();
        if free.is_empty() {
            f
        } else {
            Formula::forall(free, f)
        }
    })
}

/// Swaps the operands of every and/or.
pub fn permute(f: &Formula) -> Formula {
    match f {
        Formula::And(gs) => Formula::And(gs.iter().rev().map(permute).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().rev().map(permute).collect()),
        Formula::Not(g) => Formula::not(permute(g)),
        Formula::Implies(a, b) => Formula::implies(permute(a), permute(b)),
        Formula::Iff(a, b) => Formula::iff(permute(b), permute(a)),
        Formula::Forall(vs, g) => Formula::Forall(vs.clone(), Box::new(permute(g))),
        Formula::Exists(vs, g) => Formula::Exists(vs.clone(), Box::new(permute(g))),
        atom => atom.clone(),
    }
}

pub fn first_constant(f: &Formula) -> Option<String> {
    let mut out = None;
    f.for_each_symbol(&mut |u, s| {
        if out.is_none() && u == ontocq_core::fol::SymbolUse::Constant {
            out = Some(s.to_string());
        }
    });
    out
}

pub fn rename_constant(f: &Formula, from: &str, to: &str) -> Formula {
    fn t(x: &Term, from: &str, to: &str) -> Term {
        match x {
            Term::Const(c) if c == from => Term::constant(to),
            Term::App(g, args) => {
                Term::App(g.clone(), args.iter().map(|a| t(a, from, to)).collect())
            }
            other => other.clone(),
        }
    }
    match f {
        Formula::Atom { pred, args } => {
            Formula::atom(pred.clone(), args.iter().map(|a| t(a, from, to)).collect())
        }
        Formula::Not(g) => Formula::not(rename_constant(g, from, to)),
        Formula::And(gs) => Formula::And(gs.iter().map(|g| rename_constant(g, from, to)).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(|g| rename_constant(g, from, to)).collect()),
        Formula::Implies(a, b) => {
            Formula::implies(rename_constant(a, from, to), rename_constant(b, from, to))
        }
        Formula::Iff(a, b) => {
            Formula::iff(rename_constant(a, from, to), rename_constant(b, from, to))
        }
        Formula::Forall(vs, g) => {
            Formula::Forall(vs.clone(), Box::new(rename_constant(g, from, to)))
        }
        Formula::Exists(vs, g) => {
            Formula::Exists(vs.clone(), Box::new(rename_constant(g, from, to)))
        }
    }
}

/// Random DAG over `n` nodes: every edge points to a lower index.
pub fn dag() -> impl Strategy<Value = (usize, Vec<(usize, usize, u8)>, Vec<bool>)> {
    (2usize..=30).prop_flat_map(|n| {
        let edge = (1..n).prop_flat_map(|c| (Just(c), 0..c, 0u8..3));
        (
            Just(n),
            prop::collection::vec(edge, 0..=60),
            prop::collection::vec(any::<bool>(), n),
        )
    })
}

pub fn node(i: usize) -> String {
    format!("n{i}")
}

pub fn facts(edges: &[(usize, usize, u8)]) -> Vec<TaxonomyFact> {
    edges
        .iter()
        .map(|&(c, p, r)| TaxonomyFact {
            relation: [
                TaxonomyRelation::Subclass,
                TaxonomyRelation::Instance,
                TaxonomyRelation::Subrelation,
            ][r as usize],
            child: node(c),
            parent: node(p),
            source_file: "t".into(),
        })
        .collect()
}

/// Reflexive-transitive closure by Floyd-Warshall.
pub fn closure(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> Vec<Vec<bool>> {
    let mut m = vec![vec![false; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = true;
    }
    for (c, p) in edges {
        m[c][p] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if m[i][k] && m[k][j] {
                    m[i][j] = true;
                }
            }
        }
    }
    m
}

/// Ancestors under the lifting rule: individual edges, then one subclass or
/// instance step, then subclass edges only.
pub fn oracle_ancestors(n: usize, edges: &[(usize, usize, u8)]) -> Vec<BTreeSet<usize>> {
    let sub = closure(n, edges.iter().filter(|e| e.2 == 0).map(|e| (e.0, e.1)));
    let ind = closure(n, edges.iter().filter(|e| e.2 == 2).map(|e| (e.0, e.1)));
    (0..n)
        .map(|s| {
            let mut out = BTreeSet::new();
            for i in (0..n).filter(|&i| ind[s][i]) {
                if i != s {
                    out.insert(i);
                }
                for &(c, p, r) in edges {
                    if c == i && (r == 0 || r == 1) {
                        out.extend((0..n).filter(|&y| sub[p][y]));
                    }
                }
            }
            out.remove(&s);
            out
        })
        .collect()
}

/// Expected `most_specific_core_supers` of node `s`.
pub fn oracle_supers(s: usize, anc: &[BTreeSet<usize>], core_mask: &[bool]) -> BTreeSet<String> {
    if core_mask[s] {
        return BTreeSet::from([node(s)]);
    }
    let cands: Vec<usize> = anc[s].iter().copied().filter(|&c| core_mask[c]).collect();
    cands
        .iter()
        .filter(|&&c| !cands.iter().any(|&d| d != c && anc[d].contains(&c)))
        .map(|&c| node(c))
        .collect()
}

pub fn rec(id: &str, pol: Polarity, prover: &str, status: SzsStatus, t: f64) -> RunRecord {
    RunRecord {
        problem_id: id.into(),
        polarity: pol,
        prover_id: prover.into(),
        status,
        wall_time_s: t,
        used_axioms: vec![],
        output_sha256: String::new(),
        message: None,
    }
}

pub fn status() -> impl Strategy<Value = SzsStatus> {
    prop::sample::select(vec![
        SzsStatus::Theorem,
        SzsStatus::CounterSatisfiable,
        SzsStatus::GaveUp,
        SzsStatus::Timeout,
        SzsStatus::Unknown,
        SzsStatus::Error,
    ])
}
