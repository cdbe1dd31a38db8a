use super::{FolError, Formula, Term};
use crate::sexpr::{self, Sexpr};

/// Single-line prefix rendering, e.g. `(exists (?X) ($instance ?X Weapon))`.
pub fn emit_suo_kif(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, &mut out);
    out
}

fn write_term(t: &Term, out: &mut String) {
    match t {
        Term::Var(v) => {
            out.push('?');
            out.push_str(v);
        }
        Term::Const(c) => out.push_str(c),
        Term::App(g, args) => {
            out.push('(');
            out.push_str(g);
            for a in args {
                out.push(' ');
                write_term(a, out);
            }
            out.push(')');
        }
    }
}

fn write_formula(f: &Formula, out: &mut String) {
    let head = |out: &mut String, op: &str| {
        out.push('(');
        out.push_str(op);
    };
    match f {
        Formula::Atom { pred, args } => {
            if args.is_empty() {
                out.push_str(pred);
                return;
            }
            head(out, pred);
            for a in args {
                out.push(' ');
                write_term(a, out);
            }
        }
        Formula::Not(g) => {
            head(out, "not");
            out.push(' ');
            write_formula(g, out);
        }
        Formula::And(gs) | Formula::Or(gs) => {
            head(
                out,
                if matches!(f, Formula::And(_)) {
                    "and"
                } else {
                    "or"
                },
            );
            for g in gs {
                out.push(' ');
                write_formula(g, out);
            }
        }
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            head(
                out,
                if matches!(f, Formula::Implies(..)) {
                    "=>"
                } else {
                    "<=>"
                },
            );
            out.push(' ');
            write_formula(a, out);
            out.push(' ');
            write_formula(b, out);
        }
        Formula::Forall(vs, g) | Formula::Exists(vs, g) => {
            head(
                out,
                if matches!(f, Formula::Forall(..)) {
                    "forall"
                } else {
                    "exists"
                },
            );
            out.push_str(" (");
            for (i, v) in vs.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                out.push('?');
                out.push_str(v);
            }
            out.push_str(") ");
            write_formula(g, out);
        }
    }
    out.push(')');
}

/// Parses exactly one formula in prefix notation.
pub fn parse_suo_kif(text: &str) -> Result<Formula, FolError> {
    let mut exprs = sexpr::parse_all(text).map_err(|e| FolError::Parse {
        line: e.pos().line,
        msg: e.to_string(),
    })?;
    if exprs.len() != 1 {
        return Err(FolError::Parse {
            line: 1,
            msg: format!("expected one formula, found {}", exprs.len()),
        });
    }
    let (pos, e) = exprs.pop().unwrap();
    formula_from_sexpr(&e, pos.line)
}

pub fn parse_suo_kif_term(text: &str) -> Result<Term, FolError> {
    let mut exprs = sexpr::parse_all(text).map_err(|e| FolError::Parse {
        line: e.pos().line,
        msg: e.to_string(),
    })?;
    if exprs.len() != 1 {
        return Err(FolError::Parse {
            line: 1,
            msg: "expected one term".into(),
        });
    }
    let (pos, e) = exprs.pop().unwrap();
    term_from_sexpr(&e, pos.line)
}

fn bad(line: usize, msg: impl Into<String>) -> FolError {
    FolError::Parse {
        line,
        msg: msg.into(),
    }
}

fn var_name(s: &str, line: usize) -> Result<Option<String>, FolError> {
    if let Some(v) = s.strip_prefix('?') {
        if v.is_empty() {
            return Err(bad(line, "empty variable name"));
        }
        return Ok(Some(v.to_string()));
    }
    if s.starts_with('@') {
        return Err(FolError::Unsupported {
            line,
            construct: format!("row variable {s}"),
        });
    }
    Ok(None)
}

fn term_from_sexpr(e: &Sexpr, line: usize) -> Result<Term, FolError> {
    match e {
        Sexpr::Atom(a) => Ok(match var_name(a, line)? {
            Some(v) => Term::Var(v),
            None => Term::Const(a.clone()),
        }),
        Sexpr::Str(s) => Ok(Term::Const(format!("\"{s}\""))),
        Sexpr::List(items) => {
            let (head, rest) = items
                .split_first()
                .ok_or_else(|| bad(line, "empty list in term position"))?;
            let g = head
                .as_atom()
                .ok_or_else(|| bad(line, "function head must be a symbol"))?;
            let args = rest
                .iter()
                .map(|a| term_from_sexpr(a, line))
                .collect::<Result<_, _>>()?;
            Ok(Term::App(g.to_string(), args))
        }
    }
}

fn formula_from_sexpr(e: &Sexpr, line: usize) -> Result<Formula, FolError> {
    let items = match e {
        Sexpr::Atom(a) => {
            if var_name(a, line)?.is_some() {
                return Err(FolError::Unsupported {
                    line,
                    construct: format!("variable {a} as formula"),
                });
            }
            return Ok(Formula::atom(a.clone(), vec![]));
        }
        Sexpr::Str(_) => return Err(bad(line, "string in formula position")),
        Sexpr::List(items) => items,
    };
    let (head, rest) = items
        .split_first()
        .ok_or_else(|| bad(line, "empty formula"))?;
    let op = head.as_atom().ok_or_else(|| FolError::Unsupported {
        line,
        construct: "non-symbol head".into(),
    })?;
    let sub = |i: usize| formula_from_sexpr(&rest[i], line);
    let arity = |n: usize| {
        if rest.len() == n {
            Ok(())
        } else {
            Err(bad(
                line,
                format!("`{op}` expects {n} operands, found {}", rest.len()),
            ))
        }
    };
    match op {
        "not" => {
            arity(1)?;
            Ok(Formula::not(sub(0)?))
        }
        "and" | "or" => {
            if rest.len() < 2 {
                return Err(bad(line, format!("`{op}` needs at least two operands")));
            }
            let parts = (0..rest.len()).map(sub).collect::<Result<Vec<_>, _>>()?;
            Ok(if op == "and" {
                Formula::And(parts)
            } else {
                Formula::Or(parts)
            })
        }
        "=>" | "<=>" => {
            arity(2)?;
            let (a, b) = (sub(0)?, sub(1)?);
            Ok(if op == "=>" {
                Formula::implies(a, b)
            } else {
                Formula::iff(a, b)
            })
        }
        "forall" | "exists" => {
            arity(2)?;
            let vars = match &rest[0] {
                Sexpr::List(vs) if !vs.is_empty() => vs
                    .iter()
                    .map(|v| match v.as_atom().map(|a| var_name(a, line)) {
                        Some(Ok(Some(name))) => Ok(name),
                        Some(Err(e)) => Err(e),
                        _ => Err(bad(line, "quantifier list must contain variables")),
                    })
                    .collect::<Result<Vec<_>, _>>()?,
                _ => return Err(bad(line, "quantifier needs a nonempty variable list")),
            };
            let mut seen = std::collections::BTreeSet::new();
            if !vars.iter().all(|v| seen.insert(v)) {
                return Err(bad(line, "duplicate quantified variable"));
            }
            let body = Box::new(sub(1)?);
            Ok(if op == "forall" {
                Formula::Forall(vars, body)
            } else {
                Formula::Exists(vars, body)
            })
        }
        _ => {
            if var_name(op, line)?.is_some() {
                return Err(FolError::Unsupported {
                    line,
                    construct: format!("variable predicate {op}"),
                });
            }
            let args = rest
                .iter()
                .map(|a| term_from_sexpr(a, line))
                .collect::<Result<_, _>>()?;
            Ok(Formula::atom(op, args))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn emits_indented_layout() {
        let f = Formula::equal(Term::var("X"), Term::constant("YearDuration"));
        assert_eq!(emit_suo_kif(&f), "(equal ?X YearDuration)");
        let g = Formula::not(Formula::atom(
            "$instance",
            vec![Term::var("X"), Term::constant("Artifact")],
        ));
        assert_eq!(emit_suo_kif(&g), "(not ($instance ?X Artifact))");
    }

    #[test]
    fn parses_quantifiers_and_functions() {
        let src = "(forall (?X) (=> (instance ?X Human) (exists (?Y) (equal (MotherFn ?X) ?Y))))";
        let f = parse_suo_kif(src).unwrap();
        assert_eq!(emit_suo_kif(&f), src);
        assert!(f.is_sentence());
    }

    #[test]
    fn row_variables_unsupported() {
        assert!(matches!(
            parse_suo_kif("(p @ROW)"),
            Err(FolError::Unsupported { .. })
        ));
    }
}
