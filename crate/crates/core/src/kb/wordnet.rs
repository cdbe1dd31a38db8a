use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::{Path, PathBuf};

use super::{read_file, KbError, LexicalLink, LinkKind, PartOfSpeech, PosTag, Synset, SynsetId};

/// Synsets plus antonym and similarity links. Links are stored in both
/// directions, so `(a, b)` present implies `(b, a)` present.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WordNetData {
    pub synsets: BTreeMap<SynsetId, Synset>,
    pub antonyms: BTreeSet<LexicalLink>,
    pub similars: BTreeSet<LexicalLink>,
    pub ignored_pointers: BTreeMap<String, usize>,
}

impl WordNetData {
    pub fn counts_by_pos(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for s in self.synsets.values() {
            let key = match s.pos {
                PartOfSpeech::Noun => "n",
                PartOfSpeech::Verb => "v",
                PartOfSpeech::Adjective => "a",
                PartOfSpeech::Satellite => "s",
                PartOfSpeech::Adverb => "r",
            };
            *out.entry(key.to_string()).or_insert(0) += 1;
        }
        out
    }

    /// Unordered antonym synset pairs.
    pub fn antonym_pairs(&self) -> usize {
        self.antonyms.iter().filter(|l| l.source < l.target).count()
    }

    pub fn antonym_pairs_by_pos(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for l in self.antonyms.iter().filter(|l| l.source < l.target) {
            *out.entry(l.source.pos.letter().to_string()).or_insert(0) += 1;
        }
        out
    }

    pub fn similar_pairs(&self) -> usize {
        self.similars.iter().filter(|l| l.source < l.target).count()
    }

    fn add_link(&mut self, kind: LinkKind, a: SynsetId, b: SynsetId) {
        if a == b {
            return;
        }
        let set = if kind == LinkKind::Antonym {
            &mut self.antonyms
        } else {
            &mut self.similars
        };
        set.insert(LexicalLink {
            kind,
            source: a,
            target: b,
        });
        set.insert(LexicalLink {
            kind,
            source: b,
            target: a,
        });
    }
}

fn strip_marker(word: &str) -> &str {
    match word.find('(') {
        Some(i) if word.ends_with(')') => &word[..i],
        _ => word,
    }
}

/// Parses the contents of one `data.<pos>` file into `out`.
pub fn parse_wordnet_text(text: &str, path: &Path, out: &mut WordNetData) -> Result<(), KbError> {
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        if raw.is_empty() || raw.starts_with(' ') {
            continue;
        }
        let bad = |msg: &str| KbError::Malformed {
            path: path.to_path_buf(),
            line: line_no,
            msg: msg.to_string(),
        };
        let (body, gloss) = match raw.split_once(" | ") {
            Some((b, g)) => (b, Some(g.trim_end().to_string())),
            None => (raw.trim_end_matches(['|', ' ']), None),
        };
        let toks: Vec<&str> = body.split_whitespace().collect();
        let mut it = toks.iter().copied();
        let mut next = |what: &str| it.next().ok_or_else(|| bad(&format!("missing {what}")));

        let offset_tok = next("offset")?;
        if offset_tok.len() != 8 {
            return Err(bad("offset must have 8 digits"));
        }
        let offset: u32 = offset_tok
            .parse()
            .map_err(|_| bad("offset must be numeric"))?;
        next("lexicographer file number")?
            .parse::<u8>()
            .map_err(|_| bad("bad lexicographer file number"))?;
        let ss_type = next("synset type")?;
        let (pos, file_pos) = match ss_type {
            "n" => (PartOfSpeech::Noun, PosTag::Noun),
            "v" => (PartOfSpeech::Verb, PosTag::Verb),
            "a" => (PartOfSpeech::Adjective, PosTag::Adj),
            "s" => (PartOfSpeech::Satellite, PosTag::Adj),
            "r" => (PartOfSpeech::Adverb, PosTag::Adv),
            _ => return Err(bad("unknown synset type")),
        };
        let w_cnt =
            usize::from_str_radix(next("word count")?, 16).map_err(|_| bad("bad word count"))?;
        if w_cnt == 0 {
            return Err(bad("synset without words"));
        }
        let mut lemmas = Vec::with_capacity(w_cnt);
        for _ in 0..w_cnt {
            lemmas.push(strip_marker(next("word")?).to_string());
            next("lex id")?;
        }
        let p_cnt: usize = next("pointer count")?
            .parse()
            .map_err(|_| bad("bad pointer count"))?;
        let id = SynsetId::new(file_pos, offset);
        for _ in 0..p_cnt {
            let symbol = next("pointer symbol")?;
            let target_off: u32 = next("pointer offset")?
                .parse()
                .map_err(|_| bad("bad pointer offset"))?;
            let target_pos = next("pointer pos")?
                .chars()
                .next()
                .and_then(PosTag::from_letter)
                .ok_or_else(|| bad("bad pointer pos"))?;
            let st = next("pointer source/target")?;
            if st.len() != 4 || u16::from_str_radix(st, 16).is_err() {
                return Err(bad("bad pointer source/target field"));
            }
            let target = SynsetId::new(target_pos, target_off);
            match symbol {
                "!" => out.add_link(LinkKind::Antonym, id, target),
                "&" => out.add_link(LinkKind::Similar, id, target),
                other => *out.ignored_pointers.entry(other.to_string()).or_insert(0) += 1,
            }
        }
        if out
            .synsets
            .insert(
                id,
                Synset {
                    id,
                    pos,
                    lemmas,
                    gloss,
                },
            )
            .is_some()
        {
            return Err(bad("duplicate synset offset"));
        }
    }
    Ok(())
}

pub fn parse_wordnet_data(paths: &[PathBuf]) -> Result<WordNetData, KbError> {
    let mut out = WordNetData::default();
    for p in paths {
        parse_wordnet_text(&read_file(p)?, p, &mut out)?;
    }
    Ok(out)
}

/// Reads `data.{noun,verb,adj,adv}` from `dir` (missing files are skipped)
/// and `index.sense` when present.
pub fn parse_wordnet_dir(dir: &Path) -> Result<(WordNetData, Option<SenseIndex>), KbError> {
    let paths: Vec<PathBuf> = ["data.noun", "data.verb", "data.adj", "data.adv"]
        .iter()
        .map(|f| dir.join(f))
        .filter(|p| p.exists())
        .collect();
    let data = parse_wordnet_data(&paths)?;
    let sense = dir.join("index.sense");
    let index = if sense.exists() {
        Some(parse_sense_index(&sense)?)
    } else {
        None
    };
    Ok((data, index))
}

/// Sense-key and `lemma#pos#n` resolution, from `index.sense`.
#[derive(Clone, Debug, Default)]
pub struct SenseIndex {
    by_key: HashMap<String, SynsetId>,
    by_lemma: HashMap<(String, PosTag, u32), SynsetId>,
}

impl SenseIndex {
    pub fn by_key(&self, key: &str) -> Option<SynsetId> {
        self.by_key.get(&key.to_ascii_lowercase()).copied()
    }

    pub fn by_lemma(&self, lemma: &str, pos: PosTag, sense: u32) -> Option<SynsetId> {
        self.by_lemma
            .get(&(lemma.to_ascii_lowercase().replace(' ', "_"), pos, sense))
            .copied()
    }

    pub fn len(&self) -> usize {
        self.by_key.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_key.is_empty()
    }
}

pub fn parse_sense_index(path: &Path) -> Result<SenseIndex, KbError> {
    let text = read_file(path)?;
    let mut idx = SenseIndex::default();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |msg: &str| KbError::Malformed {
            path: path.to_path_buf(),
            line: i + 1,
            msg: msg.to_string(),
        };
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() < 3 {
            return Err(bad("expected sense key, offset and sense number"));
        }
        let key = toks[0].to_ascii_lowercase();
        let (lemma, rest) = key
            .split_once('%')
            .ok_or_else(|| bad("sense key without `%`"))?;
        let pos = match rest.chars().next() {
            Some('1') => PosTag::Noun,
            Some('2') => PosTag::Verb,
            Some('3') | Some('5') => PosTag::Adj,
            Some('4') => PosTag::Adv,
            _ => return Err(bad("bad synset type in sense key")),
        };
        let offset: u32 = toks[1].parse().map_err(|_| bad("bad offset"))?;
        let sense: u32 = toks[2].parse().map_err(|_| bad("bad sense number"))?;
        let id = SynsetId::new(pos, offset);
        idx.by_lemma.insert((lemma.to_string(), pos, sense), id);
        idx.by_key.insert(key, id);
    }
    Ok(idx)
}
