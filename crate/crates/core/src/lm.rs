//! Interpolated modified Kneser-Ney n-gram language model.
//!
//! Sentences are padded with `order - 1` copies of `<s>` and one `</s>`. The
//! highest order uses raw counts; lower orders use continuation counts
//! (number of distinct left extensions), except for n-grams starting with
//! `<s>`, which have no left context and keep raw counts. Each order gets three
//! discounts (for counts 1, 2 and 3+) estimated from its counts-of-counts; when
//! those statistics are degenerate the order falls back to absolute
//! discounting with `D = 0.75`. The unigram level interpolates with a uniform
//! distribution over the vocabulary (including `</s>` and `<unk>`).
//!
//! # Persisted format
//!
//! [`NgramModel::to_json`] writes a JSON object:
//!
//! ```text
//! { "format": "lalita-kn-lm", "version": 1, "order": N,
//!   "vocab": ["<s>", "</s>", "<unk>", ...sorted words],
//!   "discounts": [[d1, d2, d3+], ...one per order],
//!   "fallback": [bool, ...one per order],
//!   "levels": [ { "contexts": [[[ids...], gamma], ...],
//!                 "ngrams":   [[[ids...], alpha], ...] }, ...one per order ] }
//! ```
//!
//! For order `m`, `alpha(h w) = (a(h w) - D(a)) / A(h)` and
//! `gamma(h) = (D1 N1(h) + D2 N2(h) + D3 N3+(h)) / A(h)`, so that
//! `P_m(w | h) = alpha(h w) + gamma(h) P_{m-1}(w | h')`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::conllu::AnnotatedSentence;
use crate::error::{Error, Result};

pub const BOS: &str = "<s>";
pub const EOS: &str = "</s>";
pub const UNK: &str = "<unk>";

const BOS_ID: u32 = 0;
const EOS_ID: u32 = 1;
const UNK_ID: u32 = 2;

const FORMAT: &str = "lalita-kn-lm";
const VERSION: u32 = 1;
const FALLBACK_DISCOUNT: f64 = 0.75;

/// Lowercased, NFC-normalized token forms.
pub fn normalize_for_lm(ann: &AnnotatedSentence) -> Vec<String> {
    ann.tokens.iter().map(|t| normalize_token(&t.form)).collect()
}

pub fn normalize_token(form: &str) -> String {
    form.to_lowercase().nfc().collect()
}

#[derive(Debug, Clone, Default, PartialEq)]
struct Level {
    /// context (length m-1) -> backoff weight
    contexts: HashMap<Vec<u32>, f64>,
    /// n-gram (length m) -> discounted probability term
    ngrams: HashMap<Vec<u32>, f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NgramModel {
    order: usize,
    vocab: Vec<String>,
    index: HashMap<String, u32>,
    discounts: Vec<[f64; 3]>,
    fallback: Vec<bool>,
    levels: Vec<Level>,
}

fn modified_discounts(coc: [u64; 4]) -> Option<[f64; 3]> {
    if coc.contains(&0) {
        return None;
    }
    let [n1, n2, n3, n4] = coc.map(|n| n as f64);
    let y = n1 / (n1 + 2.0 * n2);
    let d = [1.0 - 2.0 * y * n2 / n1, 2.0 - 3.0 * y * n3 / n2, 3.0 - 4.0 * y * n4 / n3];
    let ok = d.iter().zip([1.0, 2.0, 3.0]).all(|(&di, c)| di > 0.0 && di <= c);
    ok.then_some(d)
}

fn discount_for(d: &[f64; 3], count: u64) -> f64 {
    match count {
        0 => 0.0,
        1 => d[0],
        2 => d[1],
        _ => d[2],
    }
}

impl NgramModel {
    /// Train on tokenized sentences.
    pub fn train(corpus: &[Vec<String>], order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::Config("n-gram order must be at least 1".into()));
        }
        if corpus.is_empty() {
            return Err(Error::Data("cannot train a language model on an empty corpus".into()));
        }

        let mut words: Vec<&str> = corpus
            .iter()
            .flatten()
            .map(String::as_str)
            .filter(|w| ![BOS, EOS, UNK].contains(w))
            .collect();
        words.sort_unstable();
        words.dedup();
        let vocab: Vec<String> = [BOS, EOS, UNK]
            .into_iter()
            .chain(words)
            .map(str::to_string)
            .collect();
        let index: HashMap<String, u32> = vocab.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();

        // raw[m-1]: counts of m-grams ending at a predicted position
        let mut raw: Vec<HashMap<Vec<u32>, u64>> = vec![HashMap::new(); order];
        let mut padded = Vec::new();
        for sent in corpus {
            padded.clear();
            padded.extend(std::iter::repeat_n(BOS_ID, order - 1));
            padded.extend(sent.iter().map(|w| index.get(w.as_str()).copied().unwrap_or(UNK_ID)));
            padded.push(EOS_ID);
            for i in order - 1..padded.len() {
                for m in 1..=order {
                    *raw[m - 1].entry(padded[i + 1 - m..=i].to_vec()).or_insert(0) += 1;
                }
            }
        }

        // adjusted counts
        let mut adjusted: Vec<HashMap<Vec<u32>, u64>> = Vec::with_capacity(order);
        for m in 1..=order {
            if m == order {
                adjusted.push(raw[m - 1].clone());
                continue;
            }
            let mut cont: HashMap<Vec<u32>, u64> = HashMap::new();
            for g in raw[m].keys() {
                *cont.entry(g[1..].to_vec()).or_insert(0) += 1;
            }
            let adj = raw[m - 1]
                .iter()
                .map(|(g, &c)| {
                    let a = if g[0] == BOS_ID { c } else { cont.get(g).copied().unwrap_or(c) };
                    (g.clone(), a)
                })
                .collect();
            adjusted.push(adj);
        }

        let mut discounts = Vec::with_capacity(order);
        let mut fallback = Vec::with_capacity(order);
        let mut levels = Vec::with_capacity(order);
        for adj in &adjusted {
            let mut coc = [0u64; 4];
            for &a in adj.values() {
                if (1..=4).contains(&a) {
                    coc[a as usize - 1] += 1;
                }
            }
            let (d, fb) = match modified_discounts(coc) {
                Some(d) => (d, false),
                None => ([FALLBACK_DISCOUNT; 3], true),
            };

            // per-context totals and count bins
            let mut ctx: HashMap<&[u32], (u64, [u64; 3])> = HashMap::new();
            for (g, &a) in adj {
                let e = ctx.entry(&g[..g.len() - 1]).or_insert((0, [0; 3]));
                e.0 += a;
                e.1[(a.min(3) - 1) as usize] += 1;
            }
            let mut level = Level::default();
            for (h, (total, bins)) in &ctx {
                let mass = d[0] * bins[0] as f64 + d[1] * bins[1] as f64 + d[2] * bins[2] as f64;
                level.contexts.insert(h.to_vec(), mass / *total as f64);
            }
            for (g, &a) in adj {
                let total = ctx[&g[..g.len() - 1]].0 as f64;
                level.ngrams.insert(g.clone(), (a as f64 - discount_for(&d, a)) / total);
            }
            discounts.push(d);
            fallback.push(fb);
            levels.push(level);
        }

        Ok(NgramModel {
            order,
            vocab,
            index,
            discounts,
            fallback,
            levels,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn vocab(&self) -> &[String] {
        &self.vocab
    }

    /// Discounts (for counts 1, 2, 3+) per order, lowest order first.
    pub fn discounts(&self) -> &[[f64; 3]] {
        &self.discounts
    }

    /// Orders that used the absolute-discounting fallback.
    pub fn fallback_orders(&self) -> Vec<usize> {
        self.fallback
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn word_id(&self, word: &str) -> u32 {
        self.index.get(word).copied().unwrap_or(UNK_ID)
    }

    /// Ids that can be predicted: everything but `<s>`.
    pub fn predictable_ids(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.vocab.len() as u32).filter(|&i| i != BOS_ID)
    }

    /// Every context with stored statistics, across all orders.
    pub fn contexts(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.levels.iter().flat_map(|l| l.contexts.keys().map(Vec::as_slice))
    }

    /// Backoff weight of a stored context.
    pub fn backoff(&self, context: &[u32]) -> Option<f64> {
        self.levels.get(context.len())?.contexts.get(context).copied()
    }

    /// P(word | history); only the last `order - 1` history ids are used.
    pub fn prob(&self, history: &[u32], word: u32) -> f64 {
        let keep = history.len().min(self.order - 1);
        self.prob_at(&history[history.len() - keep..], word)
    }

    fn prob_at(&self, hist: &[u32], word: u32) -> f64 {
        let lower = if hist.is_empty() {
            1.0 / (self.vocab.len() - 1) as f64
        } else {
            self.prob_at(&hist[1..], word)
        };
        let level = &self.levels[hist.len()];
        match level.contexts.get(hist) {
            None => lower,
            Some(&gamma) => {
                let mut key = Vec::with_capacity(hist.len() + 1);
                key.extend_from_slice(hist);
                key.push(word);
                level.ngrams.get(&key).copied().unwrap_or(0.0) + gamma * lower
            }
        }
    }

    /// Natural-log probability of the sentence including `</s>`.
    pub fn sentence_logprob(&self, tokens: &[String]) -> f64 {
        let mut hist: Vec<u32> = vec![BOS_ID; self.order - 1];
        let mut total = 0.0;
        for id in tokens.iter().map(|t| self.word_id(t)).chain(std::iter::once(EOS_ID)) {
            total += self.prob(&hist, id).ln();
            hist.push(id);
        }
        total
    }

    /// `exp(-(1/N) sum ln P)`, with N counting `</s>` but not the `<s>` pads.
    pub fn perplexity(&self, tokens: &[String]) -> Result<f64> {
        if tokens.is_empty() {
            return Err(Error::Data("perplexity of an empty token list".into()));
        }
        let n = (tokens.len() + 1) as f64;
        Ok((-self.sentence_logprob(tokens) / n).exp())
    }

    pub fn to_json(&self) -> Result<String> {
        let levels = self
            .levels
            .iter()
            .map(|l| PersistedLevel {
                contexts: l.contexts.iter().map(|(k, v)| (k.clone(), *v)).collect::<BTreeMap<_, _>>().into_iter().collect(),
                ngrams: l.ngrams.iter().map(|(k, v)| (k.clone(), *v)).collect::<BTreeMap<_, _>>().into_iter().collect(),
            })
            .collect();
        let p = PersistedModel {
            format: FORMAT.to_string(),
            version: VERSION,
            order: self.order,
            vocab: self.vocab.clone(),
            discounts: self.discounts.clone(),
            fallback: self.fallback.clone(),
            levels,
        };
        Ok(serde_json::to_string(&p)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: PersistedModel = serde_json::from_str(text)?;
        if p.format != FORMAT || p.version != VERSION {
            return Err(Error::Data(format!(
                "unsupported language model format {} v{}",
                p.format, p.version
            )));
        }
        if p.levels.len() != p.order || p.vocab.len() < 3 {
            return Err(Error::Data("inconsistent language model file".into()));
        }
        let index = p.vocab.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();
        let levels = p
            .levels
            .into_iter()
            .map(|l| Level {
                contexts: l.contexts.into_iter().collect(),
                ngrams: l.ngrams.into_iter().collect(),
            })
            .collect();
        Ok(NgramModel {
            order: p.order,
            vocab: p.vocab,
            index,
            discounts: p.discounts,
            fallback: p.fallback,
            levels,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct PersistedLevel {
    contexts: Vec<(Vec<u32>, f64)>,
    ngrams: Vec<(Vec<u32>, f64)>,
}

#[derive(Serialize, Deserialize)]
struct PersistedModel {
    format: String,
    version: u32,
    order: usize,
    vocab: Vec<String>,
    discounts: Vec<[f64; 3]>,
    fallback: Vec<bool>,
    levels: Vec<PersistedLevel>,
}
