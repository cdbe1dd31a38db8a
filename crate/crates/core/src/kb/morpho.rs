use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{read_file, KbError, LexicalLink, LinkKind, PosTag, SenseIndex, Synset, SynsetId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnresolvedSense {
    pub line: usize,
    pub text: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MorphoLinks {
    pub links: Vec<LexicalLink>,
    pub unknown_relations: BTreeMap<String, usize>,
    pub unresolved: Vec<UnresolvedSense>,
}

/// Resolves `00001740-n`, `n:00001740`, a sense key (`kill%2:35:00::`) or
/// `lemma#p#n`.
fn resolve(cell: &str, index: Option<&SenseIndex>) -> Option<SynsetId> {
    let cell = cell.trim();
    if let Ok(id) = cell.parse::<SynsetId>() {
        return Some(id);
    }
    let index = index?;
    if cell.contains('%') {
        return index.by_key(cell);
    }
    let mut parts = cell.rsplitn(3, '#');
    let sense: u32 = parts.next()?.parse().ok()?;
    let pos = PosTag::from_letter(parts.next()?.chars().next()?)?;
    index.by_lemma(parts.next()?, pos, sense)
}

fn find_column(header: &[String], role: &str) -> Option<usize> {
    let cols: Vec<(usize, &String)> = header
        .iter()
        .enumerate()
        .filter(|(_, h)| h.contains(role))
        .collect();
    cols.iter()
        .find(|(_, h)| h.contains("key"))
        .or(cols.first())
        .map(|(i, _)| *i)
}

/// Reads a delimited export (tab or comma) with verb sense, relation and
/// noun sense columns. A header row naming the columns is optional.
pub fn parse_morphosemantic_text(
    text: &str,
    path: &Path,
    index: Option<&SenseIndex>,
    synsets: &BTreeMap<SynsetId, Synset>,
) -> Result<MorphoLinks, KbError> {
    let mut out = MorphoLinks::default();
    let first = text.lines().next().unwrap_or("");
    let delimiter = if first.contains('\t') { b'\t' } else { b',' };
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut cols = (0, 1, 2);
    let mut seen = std::collections::BTreeSet::new();
    for (i, rec) in reader.records().enumerate() {
        let line = i + 1;
        let rec = rec.map_err(|e| KbError::Malformed {
            path: path.to_path_buf(),
            line,
            msg: e.to_string(),
        })?;
        let row: Vec<String> = rec.iter().map(|c| c.trim().to_string()).collect();
        if row.iter().all(|c| c.is_empty()) {
            continue;
        }
        if i == 0 {
            let lower: Vec<String> = row.iter().map(|c| c.to_ascii_lowercase()).collect();
            if let (Some(v), Some(r), Some(n)) = (
                find_column(&lower, "verb"),
                find_column(&lower, "rel"),
                find_column(&lower, "noun"),
            ) {
                cols = (v, r, n);
                continue;
            }
        }
        let cell = |c: usize| row.get(c).map(String::as_str).unwrap_or("");
        let (verb, rel, noun) = (cell(cols.0), cell(cols.1), cell(cols.2));
        if verb.is_empty() || rel.is_empty() || noun.is_empty() {
            return Err(KbError::Malformed {
                path: path.to_path_buf(),
                line,
                msg: "expected verb, relation and noun cells".into(),
            });
        }
        let Some(kind) = LinkKind::from_relation(rel) else {
            *out.unknown_relations
                .entry(rel.to_ascii_lowercase())
                .or_insert(0) += 1;
            continue;
        };
        let mut side = |cellv: &str, want: PosTag| match resolve(cellv, index) {
            Some(id) if id.pos == want && (synsets.is_empty() || synsets.contains_key(&id)) => {
                Some(id)
            }
            _ => {
                out.unresolved.push(UnresolvedSense {
                    line,
                    text: cellv.to_string(),
                });
                None
            }
        };
        let (Some(source), Some(target)) = (side(verb, PosTag::Verb), side(noun, PosTag::Noun))
        else {
            continue;
        };
        let link = LexicalLink {
            kind,
            source,
            target,
        };
        if seen.insert(link) {
            out.links.push(link);
        }
    }
    Ok(out)
}

pub fn parse_morphosemantic_links(
    path: &Path,
    index: Option<&SenseIndex>,
    synsets: &BTreeMap<SynsetId, Synset>,
) -> Result<MorphoLinks, KbError> {
    parse_morphosemantic_text(&read_file(path)?, path, index, synsets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_selects_columns_and_filters_relations() {
        let text = "noun_sense\trelation\tverb_sense\n\
                    00001740-n\tresult\t00002000-v\n\
                    00001740-n\tuses\t00002000-v\n\
                    00001740-n\tagent\t00099999-n\n";
        let m =
            parse_morphosemantic_text(text, Path::new("m.tsv"), None, &BTreeMap::new()).unwrap();
        assert_eq!(m.links.len(), 1);
        assert_eq!(m.links[0].kind, LinkKind::Result);
        assert_eq!(m.links[0].source, SynsetId::new(PosTag::Verb, 2000));
        assert_eq!(m.unknown_relations.get("uses"), Some(&1));
        assert_eq!(m.unresolved.len(), 1);
        assert_eq!(m.unresolved[0].line, 4);
    }
}
