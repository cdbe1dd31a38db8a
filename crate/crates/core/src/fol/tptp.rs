use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{symbols, FolError, Formula, SymbolUse, Term, EQUAL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Axiom,
    Conjecture,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Axiom => "axiom",
            Role::Conjecture => "conjecture",
        }
    }
}

/// Source-symbol to TPTP-identifier table with a prefixing fallback.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SymbolMap {
    pub explicit: BTreeMap<String, String>,
    pub ontology_prefix: String,
    pub meta_prefix: String,
}

impl Default for SymbolMap {
    fn default() -> Self {
        SymbolMap {
            explicit: BTreeMap::new(),
            ontology_prefix: "s__".into(),
            meta_prefix: "d__".into(),
        }
    }
}

fn sanitize(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

impl SymbolMap {
    pub fn target(&self, symbol: &str) -> String {
        if let Some(t) = self.explicit.get(symbol) {
            return t.clone();
        }
        match symbol.strip_prefix('$') {
            Some(rest) => format!("{}{}", self.meta_prefix, sanitize(rest)),
            None => format!("{}{}", self.ontology_prefix, sanitize(symbol)),
        }
    }

    pub fn variable(&self, name: &str) -> String {
        let s = sanitize(name);
        let mut chars = s.chars();
        match chars.next() {
            Some(c) if c.is_ascii_alphabetic() => {
                c.to_ascii_uppercase().to_string() + chars.as_str()
            }
            _ => format!("V{s}"),
        }
    }

    /// Maps a TPTP identifier back to its source symbol. Exact for symbols
    /// that needed no sanitization.
    pub fn invert(&self, target: &str) -> String {
        if let Some((src, _)) = self.explicit.iter().find(|(_, t)| t.as_str() == target) {
            return src.clone();
        }
        if let Some(rest) = target
            .strip_prefix(&self.ontology_prefix)
            .filter(|_| !self.ontology_prefix.is_empty())
        {
            return rest.to_string();
        }
        if let Some(rest) = target
            .strip_prefix(&self.meta_prefix)
            .filter(|_| !self.meta_prefix.is_empty())
        {
            return format!("${rest}");
        }
        target.to_string()
    }

    pub fn invert_formula(&self, f: &Formula) -> Formula {
        let term = |t: &Term| invert_term(self, t);
        match f {
            Formula::Atom { pred, args } => Formula::Atom {
                pred: if pred == EQUAL {
                    pred.clone()
                } else {
                    self.invert(pred)
                },
                args: args.iter().map(term).collect(),
            },
            Formula::Not(g) => Formula::not(self.invert_formula(g)),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| self.invert_formula(g)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| self.invert_formula(g)).collect()),
            Formula::Implies(a, b) => {
                Formula::implies(self.invert_formula(a), self.invert_formula(b))
            }
            Formula::Iff(a, b) => Formula::iff(self.invert_formula(a), self.invert_formula(b)),
            Formula::Forall(vs, g) => Formula::Forall(vs.clone(), Box::new(self.invert_formula(g))),
            Formula::Exists(vs, g) => Formula::Exists(vs.clone(), Box::new(self.invert_formula(g))),
        }
    }

    /// Records the targets of every symbol of `f` in `seen`, failing on the
    /// first pair of distinct sources sharing a target.
    pub fn check_injective(
        &self,
        f: &Formula,
        seen: &mut BTreeMap<String, String>,
    ) -> Result<(), FolError> {
        for (s, u) in symbols(f) {
            if u == SymbolUse::Predicate && s == EQUAL {
                continue;
            }
            claim(seen, self.target(&s), &s)?;
        }
        Ok(())
    }
}

fn invert_term(map: &SymbolMap, t: &Term) -> Term {
    match t {
        Term::Var(v) => Term::Var(v.clone()),
        Term::Const(c) => Term::Const(map.invert(c)),
        Term::App(g, args) => Term::App(
            map.invert(g),
            args.iter().map(|a| invert_term(map, a)).collect(),
        ),
    }
}

fn claim(
    seen: &mut BTreeMap<String, String>,
    target: String,
    source: &str,
) -> Result<(), FolError> {
    match seen.get(&target) {
        Some(prev) if prev != source => Err(FolError::SymbolCollision {
            first: prev.clone(),
            second: source.to_string(),
            target,
        }),
        Some(_) => Ok(()),
        None => {
            seen.insert(target, source.to_string());
            Ok(())
        }
    }
}

/// Lowercase TPTP formula name derived from an arbitrary identifier.
pub fn tptp_name(id: &str) -> String {
    let s: String = id
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() {
                c.to_ascii_lowercase()
            } else {
                '_'
            }
        })
        .collect();
    match s.chars().next() {
        Some(c) if c.is_ascii_lowercase() => s,
        _ => format!("p{s}"),
    }
}

/// Renders one `fof(name, role, formula).` record.
pub fn emit_tptp(name: &str, role: Role, f: &Formula, map: &SymbolMap) -> Result<String, FolError> {
    Ok(format!(
        "fof({}, {}, {}).",
        tptp_name(name),
        role.as_str(),
        emit_tptp_formula(f, map)?
    ))
}

/// Renders a bare TPTP formula after checking the map is injective on it.
pub fn emit_tptp_formula(f: &Formula, map: &SymbolMap) -> Result<String, FolError> {
    map.check_injective(f, &mut BTreeMap::new())?;
    let mut vars = BTreeMap::new();
    let mut var_err = None;
    f.for_each_symbol(&mut |u, s| {
        if u == SymbolUse::Variable && var_err.is_none() {
            if let Err(e) = claim(&mut vars, map.variable(s), s) {
                var_err = Some(e);
            }
        }
    });
    if let Some(e) = var_err {
        return Err(e);
    }
    let mut out = String::new();
    Writer { map }.formula(f, &mut out, true);
    Ok(out)
}

struct Writer<'a> {
    map: &'a SymbolMap,
}

impl Writer<'_> {
    fn term(&self, t: &Term, out: &mut String) {
        match t {
            Term::Var(v) => out.push_str(&self.map.variable(v)),
            Term::Const(c) => out.push_str(&self.map.target(c)),
            Term::App(g, args) => {
                out.push_str(&self.map.target(g));
                self.args(args, out);
            }
        }
    }

    fn args(&self, args: &[Term], out: &mut String) {
        out.push('(');
        for (i, a) in args.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            self.term(a, out);
        }
        out.push(')');
    }

    /// `top` suppresses the outer parentheses; nested non-atomic formulas
    /// and equalities are always parenthesized.
    fn formula(&self, f: &Formula, out: &mut String, top: bool) {
        let plain_atom =
            matches!(f, Formula::Atom { pred, args } if !(pred == EQUAL && args.len() == 2));
        let paren = !top && !plain_atom;
        if paren {
            out.push('(');
        }
        match f {
            Formula::Atom { pred, args } if pred == EQUAL && args.len() == 2 => {
                self.term(&args[0], out);
                out.push_str(" = ");
                self.term(&args[1], out);
            }
            Formula::Atom { pred, args } => {
                out.push_str(&self.map.target(pred));
                if !args.is_empty() {
                    self.args(args, out);
                }
            }
            Formula::Not(g) => {
                out.push_str("~ ");
                self.formula(g, out, false);
            }
            Formula::And(gs) | Formula::Or(gs) => {
                let op = if matches!(f, Formula::And(_)) {
                    " & "
                } else {
                    " | "
                };
                for (i, g) in gs.iter().enumerate() {
                    if i > 0 {
                        out.push_str(op);
                    }
                    self.formula(g, out, false);
                }
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                self.formula(a, out, false);
                out.push_str(if matches!(f, Formula::Implies(..)) {
                    " => "
                } else {
                    " <=> "
                });
                self.formula(b, out, false);
            }
            Formula::Forall(vs, g) | Formula::Exists(vs, g) => {
                out.push_str(if matches!(f, Formula::Forall(..)) {
                    "! ["
                } else {
                    "? ["
                });
                let names: Vec<String> = vs.iter().map(|v| self.map.variable(v)).collect();
                out.push_str(&names.join(","));
                out.push_str("] : ");
                self.formula(g, out, false);
            }
        }
        if paren {
            out.push(')');
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TptpRecord {
    pub name: String,
    pub role: String,
    pub formula: Formula,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Lower(String),
    Upper(String),
    Dollar(String),
    Quoted(String),
    Distinct(String),
    Number(String),
    Punct(&'static str),
}

const PUNCTS: [&str; 18] = [
    "<~>", "<=>", "=>", "<=", "~|", "~&", "!=", "(", ")", "[", "]", ",", ":", ".", "!", "?", "~",
    "&",
];

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, FolError> {
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut line = 1;
    let mut out = Vec::new();
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c == '\n' {
            line += 1;
            i += 1;
        } else if c.is_ascii_whitespace() {
            i += 1;
        } else if c == '%' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
        } else if text[i..].starts_with("/*") {
            let end = text[i + 2..].find("*/").ok_or(FolError::Parse {
                line,
                msg: "unterminated block comment".into(),
            })?;
            line += text[i..i + 2 + end].matches('\n').count();
            i += end + 4;
        } else if c == '\'' || c == '"' {
            let start = line;
            let mut s = String::new();
            i += 1;
            loop {
                let Some(&b) = bytes.get(i) else {
                    return Err(FolError::Parse {
                        line: start,
                        msg: "unterminated quoted token".into(),
                    });
                };
                let ch = text[i..].chars().next().unwrap();
                i += ch.len_utf8();
                if b == b'\\' {
                    if let Some(e) = text[i..].chars().next() {
                        s.push(e);
                        i += e.len_utf8();
                    }
                } else if ch == c {
                    break;
                } else {
                    if ch == '\n' {
                        line += 1;
                    }
                    s.push(ch);
                }
            }
            out.push((
                if c == '\'' {
                    Tok::Quoted(s)
                } else {
                    Tok::Distinct(s)
                },
                start,
            ));
        } else if c.is_ascii_alphanumeric() || c == '$' || c == '_' {
            let start = i;
            i += 1;
            while i < bytes.len()
                && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'$')
            {
                i += 1;
            }
            let w = text[start..i].to_string();
            let tok = if c == '$' {
                Tok::Dollar(w)
            } else if c.is_ascii_digit() {
                Tok::Number(w)
            } else if c.is_ascii_uppercase() || c == '_' {
                Tok::Upper(w)
            } else {
                Tok::Lower(w)
            };
            out.push((tok, line));
        } else if c == '^' || c == '@' || text[i..].starts_with("!!") || text[i..].starts_with("??")
        {
            return Err(FolError::Unsupported {
                line,
                construct: c.to_string(),
            });
        } else if c == '=' && !text[i..].starts_with("=>") {
            out.push((Tok::Punct("="), line));
            i += 1;
        } else if c == '|' {
            out.push((Tok::Punct("|"), line));
            i += 1;
        } else if let Some(p) = PUNCTS.iter().find(|p| text[i..].starts_with(**p)) {
            out.push((Tok::Punct(p), line));
            i += p.len();
        } else {
            return Err(FolError::Parse {
                line,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn line(&self) -> usize {
        self.toks
            .get(self.pos)
            .or(self.toks.last())
            .map_or(1, |(_, l)| *l)
    }

    fn err(&self, msg: impl Into<String>) -> FolError {
        FolError::Parse {
            line: self.line(),
            msg: msg.into(),
        }
    }

    fn next(&mut self) -> Result<Tok, FolError> {
        let t = self
            .toks
            .get(self.pos)
            .map(|(t, _)| t.clone())
            .ok_or_else(|| self.err("unexpected end of input"))?;
        self.pos += 1;
        Ok(t)
    }

    fn is(&self, p: &str) -> bool {
        matches!(self.peek(), Some(Tok::Punct(q)) if *q == p)
    }

    fn expect(&mut self, p: &str) -> Result<(), FolError> {
        if self.is(p) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{p}`, found {:?}", self.peek())))
        }
    }

    fn name(&mut self) -> Result<String, FolError> {
        match self.next()? {
            Tok::Lower(s) | Tok::Quoted(s) | Tok::Number(s) => Ok(s),
            t => Err(self.err(format!("expected a name, found {t:?}"))),
        }
    }

    fn logic(&mut self) -> Result<Formula, FolError> {
        let first = self.unit()?;
        for (op, conj) in [("&", true), ("|", false)] {
            if self.is(op) {
                let mut parts = vec![first];
                while self.is(op) {
                    self.pos += 1;
                    parts.push(self.unit()?);
                }
                return Ok(if conj {
                    Formula::And(parts)
                } else {
                    Formula::Or(parts)
                });
            }
        }
        let op = match self.peek() {
            Some(Tok::Punct(p)) if ["=>", "<=", "<=>", "<~>", "~|", "~&"].contains(p) => *p,
            _ => return Ok(first),
        };
        self.pos += 1;
        let second = self.unit()?;
        Ok(match op {
            "=>" => Formula::implies(first, second),
            "<=" => Formula::implies(second, first),
            "<=>" => Formula::iff(first, second),
            "<~>" => Formula::not(Formula::iff(first, second)),
            "~|" => Formula::not(Formula::Or(vec![first, second])),
            _ => Formula::not(Formula::And(vec![first, second])),
        })
    }

    fn unit(&mut self) -> Result<Formula, FolError> {
        match self.peek() {
            Some(Tok::Punct("(")) => {
                self.pos += 1;
                let f = self.logic()?;
                self.expect(")")?;
                Ok(f)
            }
            Some(Tok::Punct("~")) => {
                self.pos += 1;
                Ok(Formula::not(self.unit()?))
            }
            Some(Tok::Punct(q @ ("!" | "?"))) => {
                let universal = *q == "!";
                self.pos += 1;
                self.expect("[")?;
                let mut vars = Vec::new();
                loop {
                    match self.next()? {
                        Tok::Upper(v) => {
                            if vars.contains(&v) {
                                return Err(self.err(format!("duplicate quantified variable {v}")));
                            }
                            vars.push(v)
                        }
                        t => return Err(self.err(format!("expected variable, found {t:?}"))),
                    }
                    if self.is(":") {
                        return Err(FolError::Unsupported {
                            line: self.line(),
                            construct: "typed variable".into(),
                        });
                    }
                    if self.is("]") {
                        break;
                    }
                    self.expect(",")?;
                }
                self.expect("]")?;
                self.expect(":")?;
                let body = Box::new(self.unit()?);
                Ok(if universal {
                    Formula::Forall(vars, body)
                } else {
                    Formula::Exists(vars, body)
                })
            }
            _ => self.atomic(),
        }
    }

    fn atomic(&mut self) -> Result<Formula, FolError> {
        let lhs = self.term()?;
        if self.is("=") || self.is("!=") {
            let neg = self.is("!=");
            self.pos += 1;
            let rhs = self.term()?;
            let eq = Formula::equal(lhs, rhs);
            return Ok(if neg { Formula::not(eq) } else { eq });
        }
        match lhs {
            Term::Const(p) => Ok(Formula::atom(p, vec![])),
            Term::App(p, args) => Ok(Formula::atom(p, args)),
            Term::Var(v) => Err(self.err(format!("variable {v} used as a formula"))),
        }
    }

    fn term(&mut self) -> Result<Term, FolError> {
        let head = match self.next()? {
            Tok::Upper(v) => return Ok(Term::Var(v)),
            Tok::Distinct(s) => return Ok(Term::Const(format!("\"{s}\""))),
            Tok::Number(n) => return Ok(Term::Const(n)),
            Tok::Lower(s) | Tok::Quoted(s) | Tok::Dollar(s) => s,
            t => return Err(self.err(format!("expected a term, found {t:?}"))),
        };
        if !self.is("(") {
            return Ok(Term::Const(head));
        }
        self.pos += 1;
        let mut args = vec![self.term()?];
        while self.is(",") {
            self.pos += 1;
            args.push(self.term()?);
        }
        self.expect(")")?;
        Ok(Term::App(head, args))
    }

    fn skip_annotations(&mut self) -> Result<(), FolError> {
        let mut depth = 0usize;
        loop {
            match self.peek() {
                None => return Err(self.err("unterminated record")),
                Some(Tok::Punct("(")) | Some(Tok::Punct("[")) => depth += 1,
                Some(Tok::Punct(")")) | Some(Tok::Punct("]")) => {
                    if depth == 0 {
                        return Ok(());
                    }
                    depth -= 1;
                }
                _ => {}
            }
            self.pos += 1;
        }
    }
}

/// Parses `fof`/`cnf` annotated records. `include` directives are skipped;
/// typed and higher-order records are rejected as unsupported.
pub fn parse_tptp(text: &str) -> Result<Vec<TptpRecord>, FolError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let mut out = Vec::new();
    while p.peek().is_some() {
        let line = p.line();
        let kw = match p.next()? {
            Tok::Lower(k) => k,
            t => {
                return Err(FolError::Parse {
                    line,
                    msg: format!("expected a record keyword, found {t:?}"),
                })
            }
        };
        match kw.as_str() {
            "fof" | "cnf" => {
                p.expect("(")?;
                let name = p.name()?;
                p.expect(",")?;
                let role = p.name()?;
                p.expect(",")?;
                let formula = p.logic()?;
                if p.is(",") {
                    p.pos += 1;
                    p.skip_annotations()?;
                }
                p.expect(")")?;
                p.expect(".")?;
                out.push(TptpRecord {
                    name,
                    role,
                    formula,
                    line,
                });
            }
            "include" => {
                p.expect("(")?;
                p.skip_annotations()?;
                p.expect(")")?;
                p.expect(".")?;
            }
            "tff" | "thf" | "tcf" | "tpi" => {
                return Err(FolError::Unsupported {
                    line,
                    construct: kw,
                })
            }
            _ => {
                return Err(FolError::Parse {
                    line,
                    msg: format!("unknown record kind `{kw}`"),
                })
            }
        }
    }
    Ok(out)
}
