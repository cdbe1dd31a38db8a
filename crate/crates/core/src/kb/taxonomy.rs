use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::path::{Path, PathBuf};

use super::{read_file, ConceptKind, KbError, TaxonomyFact, TaxonomyRelation};
use crate::sexpr::{self, Sexpr};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Taxonomy {
    pub facts: Vec<TaxonomyFact>,
    pub kinds: BTreeMap<String, ConceptKind>,
    pub core: BTreeSet<String>,
    /// Top-level expressions that were not taxonomy facts.
    pub skipped: usize,
    pub warnings: Vec<String>,
}

fn is_symbol(s: &str) -> bool {
    !s.is_empty() && !s.starts_with('?') && !s.starts_with('@')
}

/// Extracts the four taxonomy relations from one fact file. Returns the
/// facts and the number of skipped top-level expressions.
pub fn parse_taxonomy_text(
    text: &str,
    source: &str,
    warnings: &mut Vec<String>,
) -> Result<(Vec<TaxonomyFact>, usize), KbError> {
    let exprs = sexpr::parse_all(text).map_err(|e| KbError::Malformed {
        path: PathBuf::from(source),
        line: e.pos().line,
        msg: e.to_string(),
    })?;
    let mut facts = Vec::new();
    let mut skipped = 0;
    for (pos, e) in exprs {
        let fact = match &e {
            Sexpr::List(items) if items.len() == 3 => {
                match (
                    items[0].as_atom().and_then(TaxonomyRelation::from_kif),
                    items[1].as_atom(),
                    items[2].as_atom(),
                ) {
                    (Some(rel), Some(c), Some(p)) if is_symbol(c) && is_symbol(p) => {
                        Some((rel, c, p))
                    }
                    _ => None,
                }
            }
            _ => None,
        };
        match fact {
            Some((rel, c, p)) if c == p && rel != TaxonomyRelation::Instance => {
                warnings.push(format!(
                    "{source}:{}: self-loop ({c} {c}) dropped",
                    pos.line
                ));
                skipped += 1;
            }
            Some((relation, c, p)) => facts.push(TaxonomyFact {
                relation,
                child: c.to_string(),
                parent: p.to_string(),
                source_file: source.to_string(),
            }),
            None => skipped += 1,
        }
    }
    Ok((facts, skipped))
}

/// Reads `paths` and `core_paths` (each file once); the core set is every
/// concept named by a fact of a core file.
pub fn parse_suo_kif_taxonomy(
    paths: &[PathBuf],
    core_paths: &[PathBuf],
) -> Result<Taxonomy, KbError> {
    let mut tax = Taxonomy::default();
    let mut seen_paths = BTreeSet::new();
    let mut seen_facts = HashSet::new();
    for (p, is_core) in core_paths
        .iter()
        .map(|p| (p, true))
        .chain(paths.iter().map(|p| (p, false)))
    {
        if !seen_paths.insert(p.clone()) {
            continue;
        }
        let (facts, skipped) = parse_taxonomy_text(&read_file(p)?, &display(p), &mut tax.warnings)?;
        tax.skipped += skipped;
        for f in facts {
            if is_core {
                tax.core.insert(f.child.clone());
                tax.core.insert(f.parent.clone());
            }
            if seen_facts.insert((f.relation, f.child.clone(), f.parent.clone())) {
                tax.facts.push(f);
            }
        }
    }
    let graph = TaxonomyGraph::new(&tax.facts);
    let (kinds, warnings) = assign_kinds(&graph);
    tax.kinds = kinds;
    tax.warnings.extend(warnings);
    Ok(tax)
}

fn display(p: &Path) -> String {
    p.file_name()
        .map(|f| f.to_string_lossy().into_owned())
        .unwrap_or_else(|| p.display().to_string())
}

/// Child-to-parent adjacency per taxonomy relation.
#[derive(Clone, Debug, Default)]
pub struct TaxonomyGraph {
    pub subclass: HashMap<String, Vec<String>>,
    /// `subrelation` and `subAttribute` edges.
    pub individual: HashMap<String, Vec<String>>,
    pub instance: HashMap<String, Vec<String>>,
    pub concepts: BTreeSet<String>,
}

impl TaxonomyGraph {
    pub fn new(facts: &[TaxonomyFact]) -> TaxonomyGraph {
        let mut g = TaxonomyGraph::default();
        for f in facts {
            let map = match f.relation {
                TaxonomyRelation::Subclass => &mut g.subclass,
                TaxonomyRelation::Subrelation | TaxonomyRelation::SubAttribute => &mut g.individual,
                TaxonomyRelation::Instance => &mut g.instance,
            };
            let parents = map.entry(f.child.clone()).or_default();
            if !parents.contains(&f.parent) {
                parents.push(f.parent.clone());
            }
            g.concepts.insert(f.child.clone());
            g.concepts.insert(f.parent.clone());
        }
        g
    }

    fn parents<'a>(map: &'a HashMap<String, Vec<String>>, c: &str) -> &'a [String] {
        map.get(c).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Reflexive-transitive closure over subclass edges.
    pub fn subclass_closure(&self, start: &str) -> BTreeSet<String> {
        self.closure(start, &self.subclass)
    }

    /// Reflexive-transitive closure over subrelation/subAttribute edges.
    pub fn individual_closure(&self, start: &str) -> BTreeSet<String> {
        self.closure(start, &self.individual)
    }

    fn closure(&self, start: &str, map: &HashMap<String, Vec<String>>) -> BTreeSet<String> {
        let mut seen = BTreeSet::from([start.to_string()]);
        let mut stack = vec![start.to_string()];
        while let Some(c) = stack.pop() {
            for p in Self::parents(map, &c) {
                if seen.insert(p.clone()) {
                    stack.push(p.clone());
                }
            }
        }
        seen
    }

    /// Classes reached by one instance edge from the concept or one of its
    /// subrelation/subAttribute ancestors, closed under subclass.
    pub fn instance_classes(&self, c: &str) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for i in self.individual_closure(c) {
            for cls in Self::parents(&self.instance, &i) {
                if !out.contains(cls) {
                    out.extend(self.subclass_closure(cls));
                }
            }
        }
        out
    }

    /// Every concept reachable upward, following the rule used for lifting:
    /// subrelation/subAttribute edges from the start, then at most one
    /// instance or subclass edge, after which only subclass edges apply.
    pub fn ancestors(&self, start: &str) -> BTreeSet<String> {
        // Phase 0: the start concept and its subrelation/subAttribute
        // ancestors; phase 1: classes, where only subclass edges apply.
        let mut seen: HashSet<(String, u8)> = HashSet::from([(start.to_string(), 0)]);
        let mut stack = vec![(start.to_string(), 0u8)];
        let mut out = BTreeSet::new();
        while let Some((c, phase)) = stack.pop() {
            let mut push = |p: &String, ph: u8| {
                if seen.insert((p.clone(), ph)) {
                    out.insert(p.clone());
                    stack.push((p.clone(), ph));
                }
            };
            for p in Self::parents(&self.subclass, &c) {
                push(p, 1);
            }
            if phase == 0 {
                for p in Self::parents(&self.individual, &c) {
                    push(p, 0);
                }
                for p in Self::parents(&self.instance, &c) {
                    push(p, 1);
                }
            }
        }
        out.remove(start);
        out
    }

    /// Nodes lying on a subclass or subrelation/subAttribute cycle.
    pub fn cyclic_nodes(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for map in [&self.subclass, &self.individual] {
            for c in map.keys() {
                let reach: BTreeSet<String> = Self::parents(map, c)
                    .iter()
                    .flat_map(|p| self.closure(p, map))
                    .collect();
                if reach.contains(c) {
                    out.insert(c.clone());
                }
            }
        }
        out
    }
}

/// Assigns one kind per concept with precedence r > a > R > A > c > o,
/// warning when a concept qualifies for more than one of r, a, R, A.
pub fn assign_kinds(graph: &TaxonomyGraph) -> (BTreeMap<String, ConceptKind>, Vec<String>) {
    let mut kinds = BTreeMap::new();
    let mut warnings = Vec::new();
    let has_subclass_edge: HashSet<&String> = graph
        .subclass
        .iter()
        .flat_map(|(c, ps)| std::iter::once(c).chain(ps.iter()))
        .collect();
    for c in &graph.concepts {
        let inst = graph.instance_classes(c);
        let supers = graph.subclass_closure(c);
        let r = inst.contains("Relation");
        let a = inst.contains("Attribute");
        let big_r = supers.contains("Relation");
        let big_a = supers.contains("Attribute");
        let class = has_subclass_edge.contains(c) || inst.contains("Class");
        let flags = [
            (r, ConceptKind::IndividualRelation),
            (a, ConceptKind::IndividualAttribute),
            (big_r, ConceptKind::ClassOfRelations),
            (big_a, ConceptKind::ClassOfAttributes),
        ];
        let hits: Vec<char> = flags
            .iter()
            .filter(|(f, _)| *f)
            .map(|(_, k)| k.letter())
            .collect();
        if hits.len() > 1 {
            warnings.push(format!("concept {c} has ambiguous kinds {hits:?}"));
        }
        let kind = flags
            .iter()
            .find(|(f, _)| *f)
            .map(|(_, k)| *k)
            .unwrap_or(if class {
                ConceptKind::Class
            } else {
                ConceptKind::Object
            });
        kinds.insert(c.clone(), kind);
    }
    (kinds, warnings)
}
