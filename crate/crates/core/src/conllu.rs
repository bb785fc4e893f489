//! CoNLL-U ingestion.
//!
//! Each document (a run of sentence blocks sharing one `# sent_id`) becomes one
//! [`AnnotatedSentence`]. Multiword-token ranges (`3-4`) and empty nodes (`5.1`)
//! are skipped. Named-entity tags are read from the MISC column key `NER` as
//! BIO tags over `LOC`, `MISC`, `ORG` and `PER`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::io::BufRead;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitext::BitextPair;
use crate::error::{ConlluError, Error, Result};

macro_rules! upos_tags {
    ($($name:ident),* $(,)?) => {
        /// The closed Universal POS inventory.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum Upos { $($name),* }

        impl Upos {
            /// All 17 tags, in alphabetical order.
            pub const ALL: [Upos; 17] = [$(Upos::$name),*];

            pub fn as_str(self) -> &'static str {
                match self { $(Upos::$name => stringify!($name)),* }
            }
        }

        impl FromStr for Upos {
            type Err = String;
            fn from_str(s: &str) -> std::result::Result<Self, String> {
                match s {
                    $(stringify!($name) => Ok(Upos::$name),)*
                    other => Err(format!("unknown UPOS tag `{other}`")),
                }
            }
        }
    };
}

upos_tags!(
    ADJ, ADP, ADV, AUX, CCONJ, DET, INTJ, NOUN, NUM, PART, PRON, PROPN, PUNCT, SCONJ, SYM, VERB, X
);

impl fmt::Display for Upos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EntityType {
    LOC,
    MISC,
    ORG,
    PER,
}

impl EntityType {
    pub const ALL: [EntityType; 4] = [EntityType::LOC, EntityType::MISC, EntityType::ORG, EntityType::PER];

    pub fn as_str(self) -> &'static str {
        match self {
            EntityType::LOC => "LOC",
            EntityType::MISC => "MISC",
            EntityType::ORG => "ORG",
            EntityType::PER => "PER",
        }
    }
}

/// A BIO tag; `O` is represented by the absence of a tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NerTag {
    Begin(EntityType),
    Inside(EntityType),
}

impl NerTag {
    pub fn entity(self) -> EntityType {
        match self {
            NerTag::Begin(e) | NerTag::Inside(e) => e,
        }
    }

    fn parse(s: &str) -> std::result::Result<Option<NerTag>, String> {
        if s == "O" {
            return Ok(None);
        }
        let (prefix, ty) = s.split_once('-').ok_or_else(|| format!("bad NER tag `{s}`"))?;
        let ty = match ty {
            "LOC" => EntityType::LOC,
            "MISC" => EntityType::MISC,
            "ORG" => EntityType::ORG,
            "PER" => EntityType::PER,
            _ => return Err(format!("unknown entity type in NER tag `{s}`")),
        };
        match prefix {
            "B" => Ok(Some(NerTag::Begin(ty))),
            "I" => Ok(Some(NerTag::Inside(ty))),
            _ => Err(format!("NER tag `{s}` is not BIO")),
        }
    }
}

impl fmt::Display for NerTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NerTag::Begin(e) => write!(f, "B-{}", e.as_str()),
            NerTag::Inside(e) => write!(f, "I-{}", e.as_str()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub form: String,
    pub upos: Upos,
    /// 0 for the root, otherwise a 1-based token index within the document.
    pub head: usize,
    pub deprel: String,
    /// Morphological features; a key may carry several values (`Case=Acc,Dat`).
    pub feats: BTreeMap<String, Vec<String>>,
    pub ner: Option<NerTag>,
}

impl Token {
    pub fn new(form: &str, upos: Upos, head: usize, deprel: &str) -> Self {
        Token {
            form: form.to_string(),
            upos,
            head,
            deprel: deprel.to_string(),
            feats: BTreeMap::new(),
            ner: None,
        }
    }

    pub fn with_feat(mut self, key: &str, value: &str) -> Self {
        self.feats.entry(key.to_string()).or_default().push(value.to_string());
        self
    }

    pub fn with_ner(mut self, tag: NerTag) -> Self {
        self.ner = Some(tag);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedSentence {
    pub id: String,
    pub tokens: Vec<Token>,
    /// Token count of each sentence block of the source document.
    pub block_lengths: Vec<usize>,
}

impl AnnotatedSentence {
    /// A single-block sentence.
    pub fn single(id: impl Into<String>, tokens: Vec<Token>) -> Self {
        let n = tokens.len();
        AnnotatedSentence {
            id: id.into(),
            tokens,
            block_lengths: vec![n],
        }
    }

    pub fn sentence_count_in_doc(&self) -> usize {
        self.block_lengths.len()
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Named-entity spans per type: each maximal `B-X I-X*` run counts once. A
    /// stray `I-X` that does not continue an `X` span opens a new one.
    pub fn entity_counts(&self) -> BTreeMap<EntityType, usize> {
        let mut counts = BTreeMap::new();
        let mut open: Option<EntityType> = None;
        for tok in &self.tokens {
            open = match tok.ner {
                None => None,
                Some(NerTag::Begin(e)) => {
                    *counts.entry(e).or_insert(0) += 1;
                    Some(e)
                }
                Some(NerTag::Inside(e)) => {
                    if open != Some(e) {
                        *counts.entry(e).or_insert(0) += 1;
                    }
                    Some(e)
                }
            };
        }
        counts
    }

    /// Canonical CoNLL-U rendering; LEMMA, XPOS and DEPS are written as `_`.
    pub fn to_conllu(&self) -> String {
        let mut out = String::new();
        let mut offset = 0;
        for &len in &self.block_lengths {
            out.push_str(&format!("# sent_id = {}\n", self.id));
            for (i, tok) in self.tokens[offset..offset + len].iter().enumerate() {
                let head = if tok.head == 0 { 0 } else { tok.head - offset };
                let feats = if tok.feats.is_empty() {
                    "_".to_string()
                } else {
                    tok.feats
                        .iter()
                        .map(|(k, vs)| format!("{k}={}", vs.join(",")))
                        .collect::<Vec<_>>()
                        .join("|")
                };
                let misc = tok.ner.map(|t| format!("NER={t}")).unwrap_or_else(|| "_".into());
                out.push_str(&format!(
                    "{}\t{}\t_\t{}\t_\t{}\t{}\t{}\t_\t{}\n",
                    i + 1,
                    tok.form,
                    tok.upos,
                    feats,
                    head,
                    tok.deprel,
                    misc
                ));
            }
            out.push('\n');
            offset += len;
        }
        out
    }
}

pub fn write_conllu(sentences: &[AnnotatedSentence]) -> String {
    sentences.iter().map(AnnotatedSentence::to_conllu).collect()
}

struct Block {
    doc_id: String,
    tokens: Vec<(Token, usize)>, // token and its line number
}

struct Parser {
    docs: Vec<AnnotatedSentence>,
    current_id: Option<String>,
    pending_id: Option<String>,
    block: Option<Block>,
}

fn err(line: usize, sent_id: Option<&str>, message: impl Into<String>) -> ConlluError {
    ConlluError {
        line,
        sent_id: sent_id.map(str::to_string),
        message: message.into(),
    }
}

fn parse_feats(field: &str, line: usize, id: Option<&str>) -> std::result::Result<BTreeMap<String, Vec<String>>, ConlluError> {
    let mut feats: BTreeMap<String, Vec<String>> = BTreeMap::new();
    if field == "_" {
        return Ok(feats);
    }
    for pair in field.split('|') {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| err(line, id, format!("feature `{pair}` is not Key=Value")))?;
        if k.is_empty() || v.is_empty() {
            return Err(err(line, id, format!("empty key or value in feature `{pair}`")));
        }
        let values: Vec<String> = v.split(',').map(str::to_string).collect();
        if values.iter().any(String::is_empty) {
            return Err(err(line, id, format!("empty value in feature `{pair}`")));
        }
        let unique: HashSet<&String> = values.iter().collect();
        if unique.len() != values.len() {
            return Err(err(line, id, format!("repeated value in feature `{pair}`")));
        }
        if feats.insert(k.to_string(), values).is_some() {
            return Err(err(line, id, format!("duplicate feature key `{k}`")));
        }
    }
    Ok(feats)
}

impl Parser {
    fn token_line(&mut self, line: &str, lineno: usize) -> std::result::Result<(), ConlluError> {
        let doc_id = match (&self.pending_id, &self.current_id) {
            (Some(p), _) => p.clone(),
            (None, Some(c)) => c.clone(),
            (None, None) => return Err(err(lineno, None, "token line before any `# sent_id`")),
        };
        let id = Some(doc_id.as_str());
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(err(lineno, id, format!("expected 10 columns, found {}", cols.len())));
        }
        if cols[0].contains('-') || cols[0].contains('.') {
            return Ok(());
        }
        let block = self.block.get_or_insert_with(|| Block {
            doc_id: doc_id.clone(),
            tokens: Vec::new(),
        });
        let tok_id: usize = cols[0]
            .parse()
            .map_err(|_| err(lineno, id, format!("bad token id `{}`", cols[0])))?;
        if tok_id != block.tokens.len() + 1 {
            return Err(err(
                lineno,
                id,
                format!("token id {tok_id} out of sequence (expected {})", block.tokens.len() + 1),
            ));
        }
        let upos: Upos = cols[3].parse().map_err(|m| err(lineno, id, m))?;
        let head: usize = cols[6]
            .parse()
            .map_err(|_| err(lineno, id, format!("bad head `{}`", cols[6])))?;
        if cols[7].is_empty() || cols[7] == "_" {
            return Err(err(lineno, id, "missing deprel"));
        }
        let feats = parse_feats(cols[5], lineno, id)?;
        let mut ner = None;
        if cols[9] != "_" {
            for item in cols[9].split('|') {
                if let Some(tag) = item.strip_prefix("NER=") {
                    ner = NerTag::parse(tag).map_err(|m| err(lineno, id, m))?;
                }
            }
        }
        block.tokens.push((
            Token {
                form: cols[1].to_string(),
                upos,
                head,
                deprel: cols[7].to_string(),
                feats,
                ner,
            },
            lineno,
        ));
        Ok(())
    }

    fn end_block(&mut self) -> std::result::Result<(), ConlluError> {
        self.pending_id = None;
        let Some(block) = self.block.take() else {
            return Ok(());
        };
        let n = block.tokens.len();
        for (tok, line) in &block.tokens {
            if tok.head > n {
                return Err(err(
                    *line,
                    Some(&block.doc_id),
                    format!("head {} out of range for a {n}-token sentence", tok.head),
                ));
            }
        }
        let continues = self
            .docs
            .last()
            .is_some_and(|d| self.current_id.as_deref() == Some(d.id.as_str()) && d.id == block.doc_id);
        if !continues {
            self.docs.push(AnnotatedSentence {
                id: block.doc_id.clone(),
                tokens: Vec::new(),
                block_lengths: Vec::new(),
            });
        }
        let doc = self.docs.last_mut().expect("document just ensured");
        let offset = doc.tokens.len();
        doc.tokens.extend(block.tokens.into_iter().map(|(mut t, _)| {
            if t.head != 0 {
                t.head += offset;
            }
            t
        }));
        doc.block_lengths.push(n);
        self.current_id = Some(block.doc_id);
        Ok(())
    }
}

/// Parse a CoNLL-U stream. Contiguous blocks sharing a `sent_id` (or a block
/// with no `sent_id` following one that had it) form a single document.
pub fn parse_conllu<R: BufRead>(reader: R) -> Result<Vec<AnnotatedSentence>> {
    let mut p = Parser {
        docs: Vec::new(),
        current_id: None,
        pending_id: None,
        block: None,
    };
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| err(lineno, p.current_id.as_deref(), e.to_string()))?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            p.end_block()?;
        } else if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                if key.trim() == "sent_id" {
                    if p.block.is_some() {
                        // a new sent_id inside a block means a missing separator
                        p.end_block()?;
                    }
                    p.pending_id = Some(value.trim().to_string());
                }
            }
        } else {
            p.token_line(line, lineno)?;
        }
    }
    p.end_block()?;
    Ok(p.docs)
}

pub fn load_conllu(path: &Path) -> Result<Vec<AnnotatedSentence>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_conllu(std::io::BufReader::new(file))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Joined {
    pub records: Vec<(BitextPair, AnnotatedSentence)>,
    /// Bitext ids with no annotation, in bitext order.
    pub unmatched: Vec<String>,
}

fn duplicates<'a>(ids: impl Iterator<Item = &'a str>) -> Vec<String> {
    let mut seen = HashSet::new();
    let mut dups = Vec::new();
    for id in ids {
        if !seen.insert(id) && !dups.iter().any(|d: &String| d == id) {
            dups.push(id.to_string());
        }
    }
    dups
}

/// Inner join on id, in bitext order.
pub fn join_bitext(pairs: Vec<BitextPair>, annotations: Vec<AnnotatedSentence>) -> Result<Joined> {
    let dup = duplicates(pairs.iter().map(|p| p.id.as_str()));
    if !dup.is_empty() {
        return Err(Error::DuplicateIds { side: "bitext", ids: dup });
    }
    let dup = duplicates(annotations.iter().map(|a| a.id.as_str()));
    if !dup.is_empty() {
        return Err(Error::DuplicateIds {
            side: "annotations",
            ids: dup,
        });
    }
    let mut by_id: HashMap<String, AnnotatedSentence> =
        annotations.into_iter().map(|a| (a.id.clone(), a)).collect();
    let mut records = Vec::new();
    let mut unmatched = Vec::new();
    for pair in pairs {
        match by_id.remove(&pair.id) {
            Some(ann) => records.push((pair, ann)),
            None => unmatched.push(pair.id),
        }
    }
    Ok(Joined { records, unmatched })
}
