//! Bitext records and their TSV carrier.
//!
//! One pair per line: `id<TAB>source<TAB>target[<TAB>key=value;...]`. The
//! optional fourth column holds sidecar scalars such as `nlm_ppl` (neural LM
//! perplexity) and `avg_logprob` (generator log-likelihood of a synthetic pair).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const NLM_PPL: &str = "nlm_ppl";
pub const AVG_LOGPROB: &str = "avg_logprob";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BitextPair {
    pub id: String,
    pub source: String,
    pub target: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sidecar: BTreeMap<String, f64>,
}

impl BitextPair {
    pub fn new(id: impl Into<String>, source: impl Into<String>, target: impl Into<String>) -> Self {
        BitextPair {
            id: id.into(),
            source: source.into(),
            target: target.into(),
            sidecar: BTreeMap::new(),
        }
    }

    pub fn with_sidecar(mut self, key: &str, value: f64) -> Self {
        self.sidecar.insert(key.to_string(), value);
        self
    }

    pub fn sidecar_value(&self, key: &str) -> Result<f64> {
        self.sidecar.get(key).copied().ok_or_else(|| Error::MissingSidecar {
            id: self.id.clone(),
            key: key.to_string(),
        })
    }

    /// Render as one TSV line, without the trailing newline.
    pub fn to_tsv_line(&self) -> String {
        let mut line = format!("{}\t{}\t{}", self.id, self.source, self.target);
        if !self.sidecar.is_empty() {
            line.push('\t');
            for (i, (k, v)) in self.sidecar.iter().enumerate() {
                if i > 0 {
                    line.push(';');
                }
                let _ = write!(line, "{k}={v}");
            }
        }
        line
    }
}

/// Whitespace tokens: maximal non-whitespace runs.
pub fn whitespace_tokens(text: &str) -> usize {
    text.split_whitespace().count()
}

fn parse_sidecar(field: &str, line: usize) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for item in field.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| Error::Bitext {
            line,
            message: format!("sidecar entry `{item}` is not key=value"),
        })?;
        let value: f64 = v.trim().parse().map_err(|_| Error::Bitext {
            line,
            message: format!("sidecar `{k}` has non-numeric value `{v}`"),
        })?;
        if out.insert(k.trim().to_string(), value).is_some() {
            return Err(Error::Bitext {
                line,
                message: format!("sidecar key `{k}` repeated"),
            });
        }
    }
    Ok(out)
}

pub fn read_bitext<R: BufRead>(reader: R) -> Result<Vec<BitextPair>> {
    let mut pairs = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::Bitext {
            line: lineno,
            message: e.to_string(),
        })?;
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() < 3 || cols.len() > 4 {
            return Err(Error::Bitext {
                line: lineno,
                message: format!("expected 3 or 4 tab-separated columns, found {}", cols.len()),
            });
        }
        if cols[0].is_empty() {
            return Err(Error::Bitext {
                line: lineno,
                message: "empty id".into(),
            });
        }
        let sidecar = match cols.get(3) {
            Some(field) => parse_sidecar(field, lineno)?,
            None => BTreeMap::new(),
        };
        pairs.push(BitextPair {
            id: cols[0].to_string(),
            source: cols[1].to_string(),
            target: cols[2].to_string(),
            sidecar,
        });
    }
    Ok(pairs)
}

pub fn load_bitext(path: &Path) -> Result<Vec<BitextPair>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_bitext(std::io::BufReader::new(file)).map_err(|e| match e {
        Error::Bitext { line, message } => Error::Bitext {
            line,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

pub fn bitext_to_string(pairs: &[BitextPair]) -> String {
    let mut out = String::new();
    for p in pairs {
        out.push_str(&p.to_tsv_line());
        out.push('\n');
    }
    out
}

/// Merge `id<TAB>key=value;...` sidecar lines onto pairs. Unknown ids are ignored.
pub fn merge_sidecars<R: BufRead>(pairs: &mut [BitextPair], reader: R) -> Result<()> {
    let mut by_id: BTreeMap<String, BTreeMap<String, f64>> = BTreeMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Bitext {
            line: idx + 1,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let (id, rest) = line.split_once('\t').ok_or_else(|| Error::Bitext {
            line: idx + 1,
            message: "sidecar line needs `id<TAB>key=value;...`".into(),
        })?;
        by_id.entry(id.to_string()).or_default().extend(parse_sidecar(rest, idx + 1)?);
    }
    for p in pairs.iter_mut() {
        if let Some(extra) = by_id.remove(&p.id) {
            p.sidecar.extend(extra);
        }
    }
    Ok(())
}
