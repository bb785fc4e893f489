//! Cluster analysis reports as JSON and TSV data files.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cluster::{assign_all, ClusterModel};
use crate::error::{Error, Result};
use crate::features::{FeatureSchema, FeatureVector, SENTENCE_LENGTH};
use crate::sampler::TokenBudget;
use crate::score::ScoreModel;

pub const DEFAULT_BINS: usize = 40;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    /// Cluster of the bin midpoint.
    pub cluster: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueShare {
    pub value: f64,
    pub percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSummary {
    pub cluster: usize,
    pub count: usize,
    pub percent: f64,
    pub mean_sentence_length: f64,
    pub min_score: Option<f64>,
    pub max_score: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Loading {
    pub feature: String,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub n: usize,
    pub breaks: Vec<f64>,
    pub silhouette: Option<f64>,
    pub clusters: Vec<ClusterSummary>,
    pub histogram: Vec<HistogramBin>,
    /// feature -> cluster -> share of sentences per feature value.
    pub feature_distributions: BTreeMap<String, Vec<Vec<ValueShare>>>,
    pub loadings: Vec<Loading>,
    pub token_budgets: BTreeMap<String, TokenBudget>,
    /// Cluster shares of an external scored set, in percent.
    #[serde(default)]
    pub external_distribution: Option<Vec<f64>>,
}

/// Equal-width histogram of scores over `[min, max]`; the last bin is closed.
pub fn score_histogram(scores: &[f64], model: &ClusterModel, bins: usize) -> Result<Vec<HistogramBin>> {
    if scores.is_empty() {
        return Ok(Vec::new());
    }
    let lo = scores.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let bins = if hi > lo { bins.max(1) } else { 1 };
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &s in scores {
        let b = if width > 0.0 { (((s - lo) / width) as usize).min(bins - 1) } else { 0 };
        counts[b] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(b, count)| {
            let (a, z) = (lo + width * b as f64, if b + 1 == bins { hi } else { lo + width * (b + 1) as f64 });
            Ok(HistogramBin {
                lo: a,
                hi: z,
                count,
                cluster: crate::cluster::assign_cluster(model, (a + z) / 2.0)?,
            })
        })
        .collect()
}

/// Percentage of sentences in each cluster taking each value of `feature`.
pub fn feature_distribution(
    vectors: &[FeatureVector],
    labels: &[usize],
    schema: &FeatureSchema,
    feature: &str,
    k: usize,
) -> Result<Vec<Vec<ValueShare>>> {
    let j = schema
        .index_of(feature)
        .ok_or_else(|| Error::Config(format!("unknown feature `{feature}`")))?;
    let mut tallies: Vec<BTreeMap<u64, (f64, usize)>> = vec![BTreeMap::new(); k];
    let mut sizes = vec![0usize; k];
    for (v, &l) in vectors.iter().zip(labels) {
        let x = v.values[j];
        // order-preserving key for f64
        let bits = x.to_bits();
        let key = if x.is_sign_negative() { !bits } else { bits | (1 << 63) };
        tallies[l].entry(key).or_insert((x, 0)).1 += 1;
        sizes[l] += 1;
    }
    Ok(tallies
        .into_iter()
        .zip(sizes)
        .map(|(t, n)| {
            t.into_values()
                .map(|(value, c)| ValueShare {
                    value,
                    percent: 100.0 * c as f64 / n as f64,
                })
                .collect()
        })
        .collect())
}

/// Share of an external scored set falling into each cluster.
pub fn cluster_distribution(scores: &[f64], model: &ClusterModel) -> Result<Vec<f64>> {
    let labels = assign_all(model, scores)?;
    let mut counts = vec![0usize; model.k];
    for l in labels {
        counts[l] += 1;
    }
    let n = scores.len().max(1) as f64;
    Ok(counts.into_iter().map(|c| 100.0 * c as f64 / n).collect())
}

pub struct ReportInput<'a> {
    pub scores: &'a [f64],
    pub vectors: &'a [FeatureVector],
    pub schema: &'a FeatureSchema,
    pub cluster_model: &'a ClusterModel,
    pub score_model: Option<&'a ScoreModel>,
    pub features: &'a [String],
    pub bins: usize,
}

pub fn report_clusters(input: &ReportInput<'_>) -> Result<AnalysisReport> {
    let ReportInput {
        scores,
        vectors,
        schema,
        cluster_model: model,
        ..
    } = *input;
    if scores.len() != vectors.len() {
        return Err(Error::Dimension {
            expected: scores.len(),
            got: vectors.len(),
        });
    }
    let labels = assign_all(model, scores)?;
    let n = scores.len();
    let len_idx = schema.index_of(SENTENCE_LENGTH);

    let mut clusters: Vec<ClusterSummary> = (0..model.k)
        .map(|c| ClusterSummary {
            cluster: c,
            count: 0,
            percent: 0.0,
            mean_sentence_length: 0.0,
            min_score: None,
            max_score: None,
        })
        .collect();
    for ((&s, &l), v) in scores.iter().zip(&labels).zip(vectors) {
        let c = &mut clusters[l];
        c.count += 1;
        if let Some(j) = len_idx {
            c.mean_sentence_length += v.values[j];
        }
        c.min_score = Some(c.min_score.map_or(s, |m| m.min(s)));
        c.max_score = Some(c.max_score.map_or(s, |m| m.max(s)));
    }
    for c in clusters.iter_mut() {
        if c.count > 0 {
            c.mean_sentence_length /= c.count as f64;
            c.percent = 100.0 * c.count as f64 / n as f64;
        }
    }

    let mut feature_distributions = BTreeMap::new();
    for f in input.features {
        feature_distributions.insert(f.clone(), feature_distribution(vectors, &labels, schema, f, model.k)?);
    }
    let loadings = input
        .score_model
        .map(|m| {
            m.export_loadings()
                .into_iter()
                .map(|(feature, magnitude)| Loading { feature, magnitude })
                .collect()
        })
        .unwrap_or_default();

    Ok(AnalysisReport {
        n,
        breaks: model.breaks.clone(),
        silhouette: model.silhouette,
        clusters,
        histogram: score_histogram(scores, model, input.bins)?,
        feature_distributions,
        loadings,
        token_budgets: BTreeMap::new(),
        external_distribution: None,
    })
}

impl AnalysisReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Long-format rows: `section<TAB>cluster<TAB>key<TAB>value`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("section\tcluster\tkey\tvalue\n");
        for c in &self.clusters {
            let _ = writeln!(out, "share\t{}\tpercent\t{}", c.cluster, c.percent);
            let _ = writeln!(out, "share\t{}\tmean_sentence_length\t{}", c.cluster, c.mean_sentence_length);
        }
        for (i, b) in self.breaks.iter().enumerate() {
            let _ = writeln!(out, "break\t{}\tlower_bound\t{b}", i + 1);
        }
        for b in &self.histogram {
            let _ = writeln!(out, "histogram\t{}\t{}..{}\t{}", b.cluster, b.lo, b.hi, b.count);
        }
        for (f, per_cluster) in &self.feature_distributions {
            for (c, shares) in per_cluster.iter().enumerate() {
                for s in shares {
                    let _ = writeln!(out, "feature:{f}\t{c}\t{}\t{}", s.value, s.percent);
                }
            }
        }
        for l in &self.loadings {
            let _ = writeln!(out, "loading\t\t{}\t{}", l.feature, l.magnitude);
        }
        for (name, t) in &self.token_budgets {
            let _ = writeln!(out, "tokens\t\t{name}:source\t{}", t.source);
            let _ = writeln!(out, "tokens\t\t{name}:target\t{}", t.target);
        }
        if let Some(ext) = &self.external_distribution {
            for (c, p) in ext.iter().enumerate() {
                let _ = writeln!(out, "external\t{c}\tpercent\t{p}");
            }
        }
        out
    }
}
