//! The LALITA score: first principal component of standardized, normalized
//! feature vectors.
//!
//! Fitting z-scores every feature (population std), drops constant features,
//! applies an L2 normalization, centers, and eigendecomposes the covariance.
//! Components are stored over the full schema with zeros at dropped features.
//! PC1 is oriented so its `sentenceLength` loading is nonnegative; other
//! components have their largest-magnitude entry positive.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{FeatureSchema, FeatureVector, SENTENCE_LENGTH};

pub const MODEL_FORMAT: &str = "lalita-score-model";
const ROW_CHUNK: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// Divide each standardized feature column by its L2 norm over the fit corpus.
    #[default]
    Column,
    /// Divide each standardized row by its L2 norm; zero rows stay zero.
    Row,
    None,
}

impl std::str::FromStr for Normalization {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "column" => Ok(Normalization::Column),
            "row" => Ok(Normalization::Row),
            "none" => Ok(Normalization::None),
            _ => Err(format!("unknown normalization `{s}` (column, row, none)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignAnchor {
    SentenceLength,
    LoadingSum,
    LargestEntry,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreOptions {
    pub k: usize,
    pub normalization: Normalization,
}

impl Default for ScoreOptions {
    fn default() -> Self {
        ScoreOptions {
            k: 10,
            normalization: Normalization::Column,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreModel {
    pub format: String,
    pub schema_hash: String,
    pub feature_names: Vec<String>,
    pub normalization: Normalization,
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
    /// Names of features with zero variance on the fit corpus.
    pub dropped: Vec<String>,
    /// Per kept feature; empty unless `normalization` is `column`.
    pub column_norms: Vec<f64>,
    /// Mean of the processed fit matrix, per kept feature.
    pub processed_mean: Vec<f64>,
    /// k rows of length D (full schema order).
    pub components: Vec<Vec<f64>>,
    pub explained_variance_ratio: Vec<f64>,
    pub sign_anchor: SignAnchor,
    pub fit_rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredSentence {
    pub id: String,
    pub lalita: f64,
    pub extra_components: Vec<f64>,
}

fn check_row(v: &FeatureVector, d: usize) -> Result<()> {
    if v.values.len() != d {
        return Err(Error::Dimension {
            expected: d,
            got: v.values.len(),
        });
    }
    if let Some(x) = v.values.iter().find(|x| !x.is_finite()) {
        return Err(Error::Data(format!("{}: non-finite feature value {x}", v.id)));
    }
    Ok(())
}

/// Deterministic parallel sum of per-row contributions: fixed chunks reduced in order.
fn chunked_sum<F>(n: usize, len: usize, f: F) -> Vec<f64>
where
    F: Fn(usize, &mut [f64]) + Sync,
{
    let partials: Vec<Vec<f64>> = (0..n.div_ceil(ROW_CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![0.0; len];
            for i in c * ROW_CHUNK..((c + 1) * ROW_CHUNK).min(n) {
                f(i, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; len];
    for p in partials {
        for (t, x) in total.iter_mut().zip(p) {
            *t += x;
        }
    }
    total
}

struct Prep {
    kept: Vec<usize>,
    means: Vec<f64>,
    stds: Vec<f64>,
}

impl ScoreModel {
    pub fn fit(vectors: &[FeatureVector], schema: &FeatureSchema, opts: ScoreOptions) -> Result<Self> {
        let d = schema.dimension();
        let n = vectors.len();
        if opts.k == 0 {
            return Err(Error::Config("number of components must be at least 1".into()));
        }
        for v in vectors {
            check_row(v, d)?;
        }
        let distinct = {
            let mut rows: Vec<&Vec<f64>> = vectors.iter().map(|v| &v.values).collect();
            rows.sort_by(|a, b| a.partial_cmp(b).unwrap());
            rows.dedup();
            rows.len()
        };
        if distinct < 2 {
            return Err(Error::Data(format!(
                "score model needs at least 2 distinct feature vectors, got {distinct}"
            )));
        }

        let nf = n as f64;
        let means: Vec<f64> = chunked_sum(n, d, |i, acc| {
            for (a, x) in acc.iter_mut().zip(&vectors[i].values) {
                *a += x;
            }
        })
        .into_iter()
        .map(|s| s / nf)
        .collect();
        let stds: Vec<f64> = chunked_sum(n, d, |i, acc| {
            for ((a, x), m) in acc.iter_mut().zip(&vectors[i].values).zip(&means) {
                *a += (x - m) * (x - m);
            }
        })
        .into_iter()
        .map(|s| (s / nf).sqrt())
        .collect();

        let kept: Vec<usize> = (0..d).filter(|&j| stds[j] > 0.0).collect();
        let dropped: Vec<String> = (0..d)
            .filter(|&j| stds[j] == 0.0)
            .map(|j| schema.names()[j].clone())
            .collect();
        let prep = Prep {
            kept: kept.clone(),
            means: means.clone(),
            stds: stds.clone(),
        };
        let m = kept.len();

        let mut processed: Vec<Vec<f64>> = vectors.par_iter().map(|v| prep.standardize(&v.values)).collect();
        let mut column_norms = Vec::new();
        match opts.normalization {
            Normalization::Column => {
                column_norms = chunked_sum(n, m, |i, acc| {
                    for (a, z) in acc.iter_mut().zip(&processed[i]) {
                        *a += z * z;
                    }
                })
                .into_iter()
                .map(f64::sqrt)
                .collect();
                processed.par_iter_mut().for_each(|row| {
                    for (z, c) in row.iter_mut().zip(&column_norms) {
                        *z /= c;
                    }
                });
            }
            Normalization::Row => processed.par_iter_mut().for_each(|row| row_normalize(row)),
            Normalization::None => {}
        }

        let processed_mean: Vec<f64> = chunked_sum(n, m, |i, acc| {
            for (a, x) in acc.iter_mut().zip(&processed[i]) {
                *a += x;
            }
        })
        .into_iter()
        .map(|s| s / nf)
        .collect();

        // upper triangle of the covariance, row-major
        let tri = chunked_sum(n, m * m, |i, acc| {
            let c: Vec<f64> = processed[i].iter().zip(&processed_mean).map(|(x, mu)| x - mu).collect();
            for a in 0..m {
                if c[a] == 0.0 {
                    continue;
                }
                let row = &mut acc[a * m..(a + 1) * m];
                for b in a..m {
                    row[b] += c[a] * c[b];
                }
            }
        });
        let cov = DMatrix::from_fn(m, m, |a, b| {
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            tri[a * m + b] / nf
        });
        let trace: f64 = (0..m).map(|a| cov[(a, a)]).sum();

        let eig = SymmetricEigen::new(cov);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap().then(a.cmp(&b)));

        let k = if opts.k > m {
            log::warn!("requested {} components but only {m} features vary; using {m}", opts.k);
            m
        } else {
            opts.k
        };
        let len_idx = schema.index_of(SENTENCE_LENGTH);
        let mut components = Vec::with_capacity(k);
        let mut explained = Vec::with_capacity(k);
        let mut sign_anchor = SignAnchor::SentenceLength;
        for (c, &e) in order.iter().take(k).enumerate() {
            let mut full = vec![0.0; d];
            for (a, &j) in kept.iter().enumerate() {
                full[j] = eig.eigenvectors[(a, e)];
            }
            let norm = full.iter().map(|x| x * x).sum::<f64>().sqrt();
            full.iter_mut().for_each(|x| *x /= norm);
            let flip = if c == 0 {
                let (flip, anchor) = pc1_orientation(&full, len_idx);
                sign_anchor = anchor;
                flip
            } else {
                largest_entry_negative(&full)
            };
            if flip {
                full.iter_mut().for_each(|x| *x = -*x);
            }
            components.push(full);
            let lambda = eig.eigenvalues[e].max(0.0);
            explained.push(if trace > 0.0 { (lambda / trace).min(1.0) } else { 0.0 });
        }

        Ok(ScoreModel {
            format: MODEL_FORMAT.into(),
            schema_hash: schema.hash(),
            feature_names: schema.names().to_vec(),
            normalization: opts.normalization,
            means,
            stds,
            dropped,
            column_norms,
            processed_mean,
            components,
            explained_variance_ratio: explained,
            sign_anchor,
            fit_rows: n,
        })
    }

    pub fn dimension(&self) -> usize {
        self.feature_names.len()
    }

    pub fn k(&self) -> usize {
        self.components.len()
    }

    fn prep(&self) -> Prep {
        Prep {
            kept: (0..self.dimension()).filter(|&j| self.stds[j] > 0.0).collect(),
            means: self.means.clone(),
            stds: self.stds.clone(),
        }
    }

    /// Errors if `schema` is not the one the model was fit under.
    pub fn check_schema(&self, schema: &FeatureSchema) -> Result<()> {
        if schema.hash() != self.schema_hash {
            return Err(Error::Data(format!(
                "feature schema {} does not match the score model's schema {}",
                &schema.hash()[..12],
                &self.schema_hash[..12.min(self.schema_hash.len())]
            )));
        }
        Ok(())
    }

    fn project(&self, prep: &Prep, v: &FeatureVector) -> Result<ScoredSentence> {
        check_row(v, self.dimension())?;
        let mut p = prep.standardize(&v.values);
        match self.normalization {
            Normalization::Column => p.iter_mut().zip(&self.column_norms).for_each(|(z, c)| *z /= c),
            Normalization::Row => row_normalize(&mut p),
            Normalization::None => {}
        }
        p.iter_mut().zip(&self.processed_mean).for_each(|(x, mu)| *x -= mu);
        let mut proj = self.components.iter().map(|w| {
            prep.kept.iter().zip(&p).map(|(&j, x)| w[j] * x).sum::<f64>()
        });
        let lalita = proj.next().unwrap_or(0.0);
        Ok(ScoredSentence {
            id: v.id.clone(),
            lalita,
            extra_components: proj.collect(),
        })
    }

    pub fn score(&self, v: &FeatureVector) -> Result<ScoredSentence> {
        self.project(&self.prep(), v)
    }

    /// Score many vectors in parallel; output order follows input order.
    pub fn score_all(&self, vectors: &[FeatureVector]) -> Result<Vec<ScoredSentence>> {
        let prep = self.prep();
        vectors.par_iter().map(|v| self.project(&prep, v)).collect()
    }

    /// `(feature, |PC1 loading|)` sorted by descending magnitude, then by name.
    pub fn export_loadings(&self) -> Vec<(String, f64)> {
        let pc1 = &self.components[0];
        let mut table: Vec<(String, f64)> = self
            .feature_names
            .iter()
            .zip(pc1)
            .map(|(n, w)| (n.clone(), w.abs()))
            .collect();
        table.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
        table
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: ScoreModel = serde_json::from_str(text)?;
        if model.format != MODEL_FORMAT {
            return Err(Error::Data(format!("not a score model (format `{}`)", model.format)));
        }
        if model.components.is_empty() || model.components.iter().any(|c| c.len() != model.feature_names.len()) {
            return Err(Error::Data("score model components do not match its feature list".into()));
        }
        Ok(model)
    }
}

impl Prep {
    fn standardize(&self, values: &[f64]) -> Vec<f64> {
        self.kept
            .iter()
            .map(|&j| (values[j] - self.means[j]) / self.stds[j])
            .collect()
    }
}

fn row_normalize(row: &mut [f64]) {
    let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        row.iter_mut().for_each(|x| *x /= norm);
    }
}

fn largest_entry_negative(w: &[f64]) -> bool {
    let mut best = 0.0f64;
    for &x in w {
        if x.abs() > best.abs() {
            best = x;
        }
    }
    best < 0.0
}

fn pc1_orientation(w: &[f64], len_idx: Option<usize>) -> (bool, SignAnchor) {
    const EPS: f64 = 1e-12;
    if let Some(i) = len_idx {
        if w[i].abs() > EPS {
            return (w[i] < 0.0, SignAnchor::SentenceLength);
        }
    }
    let sum: f64 = w.iter().sum();
    if sum.abs() > EPS {
        return (sum < 0.0, SignAnchor::LoadingSum);
    }
    (largest_entry_negative(w), SignAnchor::LargestEntry)
}

pub fn fit_score_model(vectors: &[FeatureVector], schema: &FeatureSchema, k: usize) -> Result<ScoreModel> {
    ScoreModel::fit(
        vectors,
        schema,
        ScoreOptions {
            k,
            ..ScoreOptions::default()
        },
    )
}

/// `id<TAB>pca1[<TAB>pca2...]`, one line per sentence.
pub fn scores_to_tsv(scores: &[ScoredSentence], all_components: bool) -> String {
    let mut out = String::new();
    for s in scores {
        out.push_str(&s.id);
        out.push('\t');
        out.push_str(&s.lalita.to_string());
        if all_components {
            for x in &s.extra_components {
                out.push('\t');
                out.push_str(&x.to_string());
            }
        }
        out.push('\n');
    }
    out
}

/// Read `id<TAB>score[...]`; only the first score column is kept.
pub fn read_scores_tsv<R: std::io::BufRead>(reader: R) -> Result<Vec<(String, f64)>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Data(e.to_string()))?;
        if line.is_empty() {
            continue;
        }
        let mut cols = line.split('\t');
        let id = cols.next().unwrap_or_default();
        let score = cols
            .next()
            .and_then(|s| s.parse::<f64>().ok())
            .filter(|s| s.is_finite())
            .ok_or_else(|| Error::Data(format!("scores line {}: expected `id<TAB>score`", idx + 1)))?;
        out.push((id.to_string(), score));
    }
    Ok(out)
}

/// Ranks starting at 1, ties get the average rank.
pub fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).unwrap());
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &t in &idx[i..=j] {
            ranks[t] = r;
        }
        i = j + 1;
    }
    ranks
}

pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}

pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    pearson(&average_ranks(x), &average_ranks(y))
}
