//! First-order formulas: construction, negation, canonical keys and the two
//! concrete syntaxes (SUO-KIF prefix notation and TPTP first-order form).

mod kif;
mod tptp;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

pub use kif::{emit_suo_kif, parse_suo_kif, parse_suo_kif_term};
pub use tptp::{emit_tptp, emit_tptp_formula, parse_tptp, tptp_name, Role, SymbolMap, TptpRecord};

/// Reserved equality predicate.
pub const EQUAL: &str = "equal";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// Variable name without the `?` sigil.
    Var(String),
    Const(String),
    /// Function application; only occurs in parsed ontology axioms.
    App(String, Vec<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom { pred: String, args: Vec<Term> },
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Vec<String>, Box<Formula>),
    Exists(Vec<String>, Box<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FolError {
    #[error("formula is not a sentence: free variables {0:?}")]
    FreeVariables(Vec<String>),
    #[error("symbol collision: `{first}` and `{second}` both map to `{target}`")]
    SymbolCollision {
        first: String,
        second: String,
        target: String,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: unsupported construct `{construct}`")]
    Unsupported { line: usize, construct: String },
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::Const(name.into())
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => out.push(v.clone()),
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }
}

impl Formula {
    pub fn atom(pred: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Atom {
            pred: pred.into(),
            args,
        }
    }

    pub fn equal(a: Term, b: Term) -> Formula {
        Formula::atom(EQUAL, vec![a, b])
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    /// n-ary conjunction; nested conjunctions are flattened and a single
    /// operand is returned unchanged.
    pub fn and(parts: impl IntoIterator<Item = Formula>) -> Formula {
        Self::junction(parts, true)
    }

    pub fn or(parts: impl IntoIterator<Item = Formula>) -> Formula {
        Self::junction(parts, false)
    }

    fn junction(parts: impl IntoIterator<Item = Formula>, conj: bool) -> Formula {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                Formula::And(xs) if conj => flat.extend(xs),
                Formula::Or(xs) if !conj => flat.extend(xs),
                other => flat.push(other),
            }
        }
        assert!(!flat.is_empty(), "empty junction");
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else if conj {
            Formula::And(flat)
        } else {
            Formula::Or(flat)
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall<S: Into<String>>(vars: impl IntoIterator<Item = S>, body: Formula) -> Formula {
        Formula::Forall(Self::binder(vars), Box::new(body))
    }

    pub fn exists<S: Into<String>>(vars: impl IntoIterator<Item = S>, body: Formula) -> Formula {
        Formula::Exists(Self::binder(vars), Box::new(body))
    }

    fn binder<S: Into<String>>(vars: impl IntoIterator<Item = S>) -> Vec<String> {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        assert!(!vars.is_empty(), "quantifier without variables");
        let distinct: BTreeSet<&String> = vars.iter().collect();
        assert_eq!(distinct.len(), vars.len(), "duplicate quantified variable");
        vars
    }

    pub fn free_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_into(&mut Vec::new(), &mut out);
        out
    }

    fn free_into(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom { args, .. } => {
                let mut vs = Vec::new();
                args.iter().for_each(|a| a.collect_vars(&mut vs));
                out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
            }
            Formula::Not(f) => f.free_into(bound, out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.free_into(bound, out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.free_into(bound, out);
                b.free_into(bound, out);
            }
            Formula::Forall(vs, f) | Formula::Exists(vs, f) => {
                let n = bound.len();
                bound.extend(vs.iter().cloned());
                f.free_into(bound, out);
                bound.truncate(n);
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }

    pub fn ensure_sentence(&self) -> Result<(), FolError> {
        let free = self.free_variables();
        if free.is_empty() {
            Ok(())
        } else {
            Err(FolError::FreeVariables(free.into_iter().collect()))
        }
    }

    /// Removes every double negation.
    pub fn simplify(self) -> Formula {
        match self {
            Formula::Not(inner) => match *inner {
                Formula::Not(g) => g.simplify(),
                other => Formula::not(other.simplify()),
            },
            Formula::And(fs) => Formula::And(fs.into_iter().map(Formula::simplify).collect()),
            Formula::Or(fs) => Formula::Or(fs.into_iter().map(Formula::simplify).collect()),
            Formula::Implies(a, b) => Formula::implies(a.simplify(), b.simplify()),
            Formula::Iff(a, b) => Formula::iff(a.simplify(), b.simplify()),
            Formula::Forall(vs, f) => Formula::Forall(vs, Box::new(f.simplify())),
            Formula::Exists(vs, f) => Formula::Exists(vs, Box::new(f.simplify())),
            atom => atom,
        }
    }

    /// True for a single literal: an atom under at most one negation.
    pub fn is_literal(&self) -> bool {
        match self {
            Formula::Atom { .. } => true,
            Formula::Not(f) => matches!(**f, Formula::Atom { .. }),
            _ => false,
        }
    }

    /// Visits every predicate, constant and function symbol.
    pub fn for_each_symbol(&self, f: &mut impl FnMut(SymbolUse, &str)) {
        fn term(t: &Term, f: &mut impl FnMut(SymbolUse, &str)) {
            match t {
                Term::Var(v) => f(SymbolUse::Variable, v),
                Term::Const(c) => f(SymbolUse::Constant, c),
                Term::App(g, args) => {
                    f(SymbolUse::Function, g);
                    args.iter().for_each(|a| term(a, f));
                }
            }
        }
        match self {
            Formula::Atom { pred, args } => {
                f(SymbolUse::Predicate, pred);
                args.iter().for_each(|a| term(a, f));
            }
            Formula::Not(g) => g.for_each_symbol(f),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.for_each_symbol(f)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.for_each_symbol(f);
                b.for_each_symbol(f);
            }
            Formula::Forall(vs, g) | Formula::Exists(vs, g) => {
                vs.iter().for_each(|v| f(SymbolUse::Variable, v));
                g.for_each_symbol(f);
            }
        }
    }

    /// Renames variables (free and bound) through `rename`.
    pub fn map_variables(&self, rename: &impl Fn(&str) -> String) -> Formula {
        fn term(t: &Term, rename: &impl Fn(&str) -> String) -> Term {
            match t {
                Term::Var(v) => Term::Var(rename(v)),
                Term::Const(c) => Term::Const(c.clone()),
                Term::App(g, args) => {
                    Term::App(g.clone(), args.iter().map(|a| term(a, rename)).collect())
                }
            }
        }
        match self {
            Formula::Atom { pred, args } => Formula::Atom {
                pred: pred.clone(),
                args: args.iter().map(|a| term(a, rename)).collect(),
            },
            Formula::Not(g) => Formula::not(g.map_variables(rename)),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| g.map_variables(rename)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| g.map_variables(rename)).collect()),
            Formula::Implies(a, b) => {
                Formula::implies(a.map_variables(rename), b.map_variables(rename))
            }
            Formula::Iff(a, b) => Formula::iff(a.map_variables(rename), b.map_variables(rename)),
            Formula::Forall(vs, g) => Formula::Forall(
                vs.iter().map(|v| rename(v)).collect(),
                Box::new(g.map_variables(rename)),
            ),
            Formula::Exists(vs, g) => Formula::Exists(
                vs.iter().map(|v| rename(v)).collect(),
                Box::new(g.map_variables(rename)),
            ),
        }
    }

    pub fn to_kif(&self) -> String {
        emit_suo_kif(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SymbolUse {
    Predicate,
    Function,
    Constant,
    Variable,
}

/// Falsity test for a truth test: `Not(f)`, with double negation removed.
pub fn negate(f: &Formula) -> Result<Formula, FolError> {
    f.ensure_sentence()?;
    Ok(Formula::not(f.clone()).simplify())
}

/// Deterministic key identifying a sentence up to renaming of bound
/// variables and reordering of `and`/`or` operands (and the symmetric
/// `equal`/`<=>` arguments).
pub fn canonical_key(f: &Formula) -> String {
    let mut env = Vec::new();
    key_of(f, &mut env, 0)
}

fn sym(out: &mut String, s: &str) {
    let _ = write!(out, "{}:{}", s.len(), s);
}

fn term_key(t: &Term, env: &[(String, String)]) -> String {
    let mut out = String::new();
    match t {
        Term::Var(v) => match env.iter().rev().find(|(n, _)| n == v) {
            Some((_, canon)) => {
                out.push('#');
                out.push_str(canon);
            }
            None => {
                out.push('?');
                sym(&mut out, v);
            }
        },
        Term::Const(c) => {
            out.push('c');
            sym(&mut out, c);
        }
        Term::App(g, args) => {
            out.push('f');
            sym(&mut out, g);
            out.push('(');
            for a in args {
                out.push_str(&term_key(a, env));
                out.push(',');
            }
            out.push(')');
        }
    }
    out
}

fn key_of(f: &Formula, env: &mut Vec<(String, String)>, depth: usize) -> String {
    match f {
        Formula::Atom { pred, args } => {
            let mut keys: Vec<String> = args.iter().map(|a| term_key(a, env)).collect();
            if pred == EQUAL && keys.len() == 2 {
                keys.sort();
            }
            let mut out = String::from("p");
            sym(&mut out, pred);
            out.push('(');
            for k in keys {
                out.push_str(&k);
                out.push(',');
            }
            out.push(')');
            out
        }
        Formula::Not(g) => format!("~({})", key_of(g, env, depth)),
        Formula::And(gs) | Formula::Or(gs) => {
            let mut keys: Vec<String> = gs.iter().map(|g| key_of(g, env, depth)).collect();
            keys.sort();
            let tag = if matches!(f, Formula::And(_)) {
                '&'
            } else {
                '|'
            };
            format!("{tag}[{}]", keys.join(";"))
        }
        Formula::Implies(a, b) => format!(">({};{})", key_of(a, env, depth), key_of(b, env, depth)),
        Formula::Iff(a, b) => {
            let mut keys = [key_of(a, env, depth), key_of(b, env, depth)];
            keys.sort();
            format!("=({};{})", keys[0], keys[1])
        }
        Formula::Forall(vs, g) | Formula::Exists(vs, g) => {
            let n = env.len();
            for (i, v) in vs.iter().enumerate() {
                env.push((v.clone(), format!("{depth}.{i}")));
            }
            let body = key_of(g, env, depth + 1);
            env.truncate(n);
            let tag = if matches!(f, Formula::Forall(..)) {
                'A'
            } else {
                'E'
            };
            format!("{tag}{}({body})", vs.len())
        }
    }
}

/// Collects every non-variable symbol with its role; used by emitters to
/// check the symbol map for collisions.
pub fn symbols(f: &Formula) -> BTreeMap<String, SymbolUse> {
    let mut out = BTreeMap::new();
    f.for_each_symbol(&mut |u, s| {
        if u != SymbolUse::Variable {
            out.entry(s.to_string()).or_insert(u);
        }
    });
    out
}
