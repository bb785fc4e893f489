//! Per-sentence feature vectors.
//!
//! Layout: statistical (perplexities), lexical (`sentenceLength`), named
//! entities, UPOS, dependency relations, morphological features. Group order is
//! fixed; names within a group are sorted. NER and UPOS inventories are closed;
//! dependency relations and `Key_Value` morphological features are discovered
//! from the corpus, with `NoUMF` counting tokens that carry no features.

use std::collections::{BTreeSet, HashMap};
use std::io::{BufRead, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::conllu::{AnnotatedSentence, EntityType, Upos};
use crate::error::{Error, Result};

pub const SENTENCE_LENGTH: &str = "sentenceLength";
pub const SLM_PPL: &str = "slm_ppl";
pub const NLM_PPL: &str = "nlm_ppl";
pub const NO_UMF: &str = "NoUMF";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureGroup {
    Statistical,
    Lexical,
    NamedEntity,
    Pos,
    DepRel,
    Umf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupNames {
    pub group: FeatureGroup,
    pub names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SchemaFile", into = "SchemaFile")]
pub struct FeatureSchema {
    groups: Vec<GroupNames>,
    names: Vec<String>,
    index: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct SchemaFile {
    dimension: usize,
    groups: Vec<GroupNames>,
}

impl From<FeatureSchema> for SchemaFile {
    fn from(s: FeatureSchema) -> Self {
        SchemaFile {
            dimension: s.dimension(),
            groups: s.groups,
        }
    }
}

impl TryFrom<SchemaFile> for FeatureSchema {
    type Error = Error;
    fn try_from(f: SchemaFile) -> Result<Self> {
        let schema = FeatureSchema::from_groups(f.groups)?;
        if schema.dimension() != f.dimension {
            return Err(Error::Dimension {
                expected: f.dimension,
                got: schema.dimension(),
            });
        }
        Ok(schema)
    }
}

impl FeatureSchema {
    pub fn from_groups(groups: Vec<GroupNames>) -> Result<Self> {
        let names: Vec<String> = groups.iter().flat_map(|g| g.names.iter().cloned()).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::Data(format!("feature name `{n}` appears in two groups")));
            }
        }
        Ok(FeatureSchema { groups, names, index })
    }

    pub fn dimension(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn groups(&self) -> &[GroupNames] {
        &self.groups
    }

    pub fn group(&self, g: FeatureGroup) -> &[String] {
        self.groups
            .iter()
            .find(|x| x.group == g)
            .map(|x| x.names.as_slice())
            .unwrap_or(&[])
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn has_nlm(&self) -> bool {
        self.index.contains_key(NLM_PPL)
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("schema serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// `Key_Value` feature names contributed by one token (one per listed value).
fn umf_names(feats: &std::collections::BTreeMap<String, Vec<String>>) -> impl Iterator<Item = String> + '_ {
    feats
        .iter()
        .flat_map(|(k, vs)| vs.iter().map(move |v| format!("{k}_{v}")))
}

pub fn build_schema(corpus: &[AnnotatedSentence], has_nlm: bool) -> Result<FeatureSchema> {
    if corpus.is_empty() {
        return Err(Error::Data("cannot build a feature schema from an empty corpus".into()));
    }
    let mut deprels = BTreeSet::new();
    let mut umf = BTreeSet::new();
    umf.insert(NO_UMF.to_string());
    for sent in corpus {
        for tok in &sent.tokens {
            deprels.insert(tok.deprel.clone());
            umf.extend(umf_names(&tok.feats));
        }
    }
    let mut statistical = vec![SLM_PPL.to_string()];
    if has_nlm {
        statistical.insert(0, NLM_PPL.to_string());
    }
    FeatureSchema::from_groups(vec![
        GroupNames {
            group: FeatureGroup::Statistical,
            names: statistical,
        },
        GroupNames {
            group: FeatureGroup::Lexical,
            names: vec![SENTENCE_LENGTH.to_string()],
        },
        GroupNames {
            group: FeatureGroup::NamedEntity,
            names: EntityType::ALL.iter().map(|e| e.as_str().to_string()).collect(),
        },
        GroupNames {
            group: FeatureGroup::Pos,
            names: Upos::ALL.iter().map(|u| u.as_str().to_string()).collect(),
        },
        GroupNames {
            group: FeatureGroup::DepRel,
            names: deprels.into_iter().collect(),
        },
        GroupNames {
            group: FeatureGroup::Umf,
            names: umf.into_iter().collect(),
        },
    ])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub id: String,
    pub values: Vec<f64>,
    /// Dependency or morphological labels absent from the schema, dropped.
    #[serde(default)]
    pub unseen_labels: usize,
}

impl FeatureVector {
    pub fn get(&self, schema: &FeatureSchema, name: &str) -> Option<f64> {
        schema.index_of(name).and_then(|i| self.values.get(i).copied())
    }
}

pub fn vectorize(
    ann: &AnnotatedSentence,
    schema: &FeatureSchema,
    slm_ppl: f64,
    nlm_ppl: Option<f64>,
) -> Result<FeatureVector> {
    let mut values = vec![0.0; schema.dimension()];
    let mut unseen = 0;
    let slot = |name: &str| {
        schema
            .index_of(name)
            .ok_or_else(|| Error::Data(format!("schema lacks required feature `{name}`")))
    };

    values[slot(SLM_PPL)?] = slm_ppl;
    match (schema.index_of(NLM_PPL), nlm_ppl) {
        (Some(i), Some(v)) => values[i] = v,
        (None, None) => {}
        (Some(_), None) => {
            return Err(Error::MissingSidecar {
                id: ann.id.clone(),
                key: NLM_PPL.into(),
            })
        }
        (None, Some(_)) => {
            return Err(Error::Data(format!(
                "{}: neural perplexity supplied but the schema has no `{NLM_PPL}` feature",
                ann.id
            )))
        }
    }
    values[slot(SENTENCE_LENGTH)?] = ann.len() as f64;

    for (entity, n) in ann.entity_counts() {
        values[slot(entity.as_str())?] += n as f64;
    }
    let no_umf = slot(NO_UMF)?;
    for tok in &ann.tokens {
        values[slot(tok.upos.as_str())?] += 1.0;
        match schema.index_of(&tok.deprel) {
            Some(i) => values[i] += 1.0,
            None => unseen += 1,
        }
        if tok.feats.is_empty() {
            values[no_umf] += 1.0;
        }
        for name in umf_names(&tok.feats) {
            match schema.index_of(&name) {
                Some(i) => values[i] += 1.0,
                None => unseen += 1,
            }
        }
    }
    if unseen > 0 {
        log::warn!("{}: {unseen} labels not in the feature schema were ignored", ann.id);
    }
    Ok(FeatureVector {
        id: ann.id.clone(),
        values,
        unseen_labels: unseen,
    })
}

/// Headerless TSV: `id<TAB>v1<TAB>...<TAB>vD`.
pub fn vectors_to_tsv(vectors: &[FeatureVector]) -> String {
    let mut out = String::new();
    for v in vectors {
        out.push_str(&v.id);
        for x in &v.values {
            out.push('\t');
            out.push_str(&x.to_string());
        }
        out.push('\n');
    }
    out
}

pub fn read_vectors_tsv<R: BufRead>(reader: R, dimension: usize) -> Result<Vec<FeatureVector>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Data(e.to_string()))?;
        if line.is_empty() {
            continue;
        }
        let mut cols = line.split('\t');
        let id = cols.next().unwrap_or_default().to_string();
        let values = cols
            .map(|c| {
                c.parse::<f64>()
                    .map_err(|_| Error::Data(format!("vector line {}: bad value `{c}`", idx + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        if values.len() != dimension {
            return Err(Error::Dimension {
                expected: dimension,
                got: values.len(),
            });
        }
        out.push(FeatureVector {
            id,
            values,
            unseen_labels: 0,
        });
    }
    Ok(out)
}

/// Sibling schema path for a vectors file: `vectors.tsv` -> `vectors.schema.json`.
pub fn sibling_schema_path(vectors: &Path) -> std::path::PathBuf {
    vectors.with_extension("schema.json")
}

const CACHE_MAGIC: &[u8; 8] = b"LALVEC01";

/// Columnar little-endian cache: magic, n, d, ids (length-prefixed UTF-8),
/// then `d` columns of `n` f64 values each.
pub fn write_vector_cache<W: Write>(mut w: W, vectors: &[FeatureVector]) -> std::io::Result<()> {
    let d = vectors.first().map_or(0, |v| v.values.len());
    w.write_all(CACHE_MAGIC)?;
    w.write_all(&(vectors.len() as u64).to_le_bytes())?;
    w.write_all(&(d as u64).to_le_bytes())?;
    for v in vectors {
        w.write_all(&(v.id.len() as u32).to_le_bytes())?;
        w.write_all(v.id.as_bytes())?;
    }
    for j in 0..d {
        for v in vectors {
            w.write_all(&v.values[j].to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_vector_cache<R: Read>(mut r: R) -> Result<Vec<FeatureVector>> {
    let bad = |m: &str| Error::Data(format!("vector cache: {m}"));
    let mut buf8 = [0u8; 8];
    let mut read8 = |r: &mut R| -> Result<[u8; 8]> {
        r.read_exact(&mut buf8).map_err(|e| bad(&e.to_string()))?;
        Ok(buf8)
    };
    if &read8(&mut r)? != CACHE_MAGIC {
        return Err(bad("bad magic"));
    }
    let n = u64::from_le_bytes(read8(&mut r)?) as usize;
    let d = u64::from_le_bytes(read8(&mut r)?) as usize;
    let mut vectors = Vec::with_capacity(n);
    for _ in 0..n {
        let mut len = [0u8; 4];
        r.read_exact(&mut len).map_err(|e| bad(&e.to_string()))?;
        let mut id = vec![0u8; u32::from_le_bytes(len) as usize];
        r.read_exact(&mut id).map_err(|e| bad(&e.to_string()))?;
        vectors.push(FeatureVector {
            id: String::from_utf8(id).map_err(|_| bad("id is not UTF-8"))?,
            values: vec![0.0; d],
            unseen_labels: 0,
        });
    }
    for j in 0..d {
        for v in vectors.iter_mut() {
            v.values[j] = f64::from_le_bytes(read8(&mut r)?);
        }
    }
    Ok(vectors)
}
