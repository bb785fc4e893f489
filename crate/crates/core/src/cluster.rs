//! Fisher-Jenks natural breaks over LALITA scores, and 1-D silhouette.
//!
//! Breaks are upper-exclusive: a score equal to a break value belongs to the
//! higher cluster, so each break is the minimum of the class above it. Classes
//! never split equal values. Among equal-cost partitions the one whose break
//! positions are lexicographically earliest in sorted order wins.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MODEL_FORMAT: &str = "lalita-cluster-model";
pub const SILHOUETTE_EXACT_MAX: usize = 10_000;
pub const DEFAULT_SILHOUETTE_SEED: u64 = 0x5EED;

/// Optimal partition of the sorted data.
#[derive(Debug, Clone, PartialEq)]
pub struct Jenks {
    /// Start index of each class after the first, in the sorted data.
    pub positions: Vec<usize>,
    pub breaks: Vec<f64>,
    /// Within-class sum of squared deviations, recomputed directly.
    pub sse: f64,
    pub sorted: Vec<f64>,
}

/// Within-class SSE of consecutive slices of `sorted`, two-pass per class.
pub fn partition_sse(sorted: &[f64], positions: &[usize]) -> f64 {
    let mut bounds = Vec::with_capacity(positions.len() + 2);
    bounds.push(0);
    bounds.extend_from_slice(positions);
    bounds.push(sorted.len());
    bounds
        .windows(2)
        .map(|w| {
            let class = &sorted[w[0]..w[1]];
            let mean = class.iter().sum::<f64>() / class.len() as f64;
            class.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>()
        })
        .sum()
}

fn check_scores(scores: &[f64]) -> Result<()> {
    if scores.is_empty() {
        return Err(Error::Data("no scores to cluster".into()));
    }
    if scores.iter().any(|x| !x.is_finite()) {
        return Err(Error::Data("scores must be finite".into()));
    }
    Ok(())
}

pub fn sorted_copy(scores: &[f64]) -> Vec<f64> {
    let mut sorted = scores.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    sorted
}

/// Tie tolerance on partition cost, relative to the total sum of squares.
fn tie_tolerance(total_ss: f64) -> f64 {
    1e-9 * total_ss.max(f64::MIN_POSITIVE)
}

struct Costs {
    w: Vec<f64>,
    s1: Vec<f64>,
    s2: Vec<f64>,
}

impl Costs {
    /// Prefix sums over distinct values (weighted by multiplicity), centered on the grand mean.
    fn new(values: &[f64], weights: &[usize], grand_mean: f64) -> Self {
        let u = values.len();
        let (mut w, mut s1, mut s2) = (vec![0.0; u + 1], vec![0.0; u + 1], vec![0.0; u + 1]);
        for i in 0..u {
            let c = weights[i] as f64;
            let x = values[i] - grand_mean;
            w[i + 1] = w[i] + c;
            s1[i + 1] = s1[i] + c * x;
            s2[i + 1] = s2[i] + c * x * x;
        }
        Costs { w, s1, s2 }
    }

    /// SSE of distinct-value range `[a, b)`.
    fn cost(&self, a: usize, b: usize) -> f64 {
        let w = self.w[b] - self.w[a];
        let s1 = self.s1[b] - self.s1[a];
        let s2 = self.s2[b] - self.s2[a];
        (s2 - s1 * s1 / w).max(0.0)
    }
}

/// Fill `cur[i]` for `i` in `lo..=hi` with `min_{m in opt_lo..=opt_hi, m > i} cost(i,m) + prev[m]`.
#[allow(clippy::too_many_arguments)]
fn divide_conquer(costs: &Costs, prev: &[f64], cur: &mut [f64], lo: usize, hi: usize, opt_lo: usize, opt_hi: usize) {
    if lo > hi {
        return;
    }
    let mid = lo + (hi - lo) / 2;
    let mut best = f64::INFINITY;
    let mut best_m = opt_lo.max(mid + 1);
    for m in opt_lo.max(mid + 1)..=opt_hi {
        let v = costs.cost(mid, m) + prev[m];
        if v < best {
            best = v;
            best_m = m;
        }
    }
    cur[mid] = best;
    if mid > lo {
        divide_conquer(costs, prev, cur, lo, mid - 1, opt_lo, best_m);
    }
    divide_conquer(costs, prev, cur, mid + 1, hi, best_m, opt_hi);
}

pub fn jenks_optimize(scores: &[f64], k: usize) -> Result<Jenks> {
    check_scores(scores)?;
    if k == 0 {
        return Err(Error::Config("number of clusters must be at least 1".into()));
    }
    let sorted = sorted_copy(scores);
    let mut values: Vec<f64> = Vec::new();
    let mut weights: Vec<usize> = Vec::new();
    let mut starts: Vec<usize> = Vec::new();
    for (i, &x) in sorted.iter().enumerate() {
        if values.last() == Some(&x) {
            *weights.last_mut().unwrap() += 1;
        } else {
            values.push(x);
            weights.push(1);
            starts.push(i);
        }
    }
    let u = values.len();
    if k > u {
        return Err(Error::TooFewDistinct { k, distinct: u });
    }
    let mean = sorted.iter().sum::<f64>() / sorted.len() as f64;
    let costs = Costs::new(&values, &weights, mean);

    // f[j][i]: best cost of splitting distinct values i.. into j+1 classes
    let inf = f64::INFINITY;
    let mut f: Vec<Vec<f64>> = vec![(0..=u).map(|i| if i < u { costs.cost(i, u) } else { inf }).collect()];
    for j in 1..k {
        let prev = &f[j - 1];
        let mut cur = vec![inf; u + 1];
        // i must leave at least j classes' worth of values after it
        if u > j {
            divide_conquer(&costs, prev, &mut cur, 0, u - 1 - j, 1, u - j);
        }
        f.push(cur);
    }

    let tol = tie_tolerance(costs.cost(0, u));
    let mut positions = Vec::with_capacity(k - 1);
    let mut i = 0;
    let mut budget = f[k - 1][0];
    for j in (1..k).rev() {
        let m = (i + 1..=u - j)
            .find(|&m| costs.cost(i, m) + f[j - 1][m] <= budget + tol)
            .ok_or_else(|| Error::Internal("natural breaks reconstruction failed".into()))?;
        budget = f[j - 1][m];
        positions.push(m);
        i = m;
    }
    let breaks = positions.iter().map(|&m| values[m]).collect();
    let positions: Vec<usize> = positions.iter().map(|&m| starts[m]).collect();
    let sse = partition_sse(&sorted, &positions);
    Ok(Jenks {
        positions,
        breaks,
        sse,
        sorted,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterModel {
    pub format: String,
    pub k: usize,
    /// k-1 strictly increasing upper-exclusive boundaries.
    pub breaks: Vec<f64>,
    /// Fit-corpus sizes per cluster.
    pub counts: Vec<usize>,
    pub sse: f64,
    pub min: f64,
    pub max: f64,
    pub silhouette: Option<f64>,
    /// Points used for the silhouette when it was subsampled.
    pub silhouette_sample: Option<usize>,
}

pub fn jenks_breaks(scores: &[f64], k: usize) -> Result<ClusterModel> {
    let j = jenks_optimize(scores, k)?;
    let mut counts = Vec::with_capacity(k);
    let mut prev = 0;
    for &p in j.positions.iter().chain(std::iter::once(&j.sorted.len())) {
        counts.push(p - prev);
        prev = p;
    }
    Ok(ClusterModel {
        format: MODEL_FORMAT.into(),
        k,
        breaks: j.breaks,
        counts,
        sse: j.sse,
        min: j.sorted[0],
        max: *j.sorted.last().unwrap(),
        silhouette: None,
        silhouette_sample: None,
    })
}

/// Natural breaks plus silhouette of the fit corpus (when k ≥ 2).
pub fn fit_cluster_model(scores: &[f64], k: usize, seed: u64) -> Result<ClusterModel> {
    let mut model = jenks_breaks(scores, k)?;
    if k >= 2 {
        let labels = assign_all(&model, scores)?;
        let s = silhouette_with(scores, &labels, SILHOUETTE_EXACT_MAX, seed)?;
        model.silhouette = Some(s.value);
        model.silhouette_sample = s.sample_size;
    }
    Ok(model)
}

pub fn assign_cluster(model: &ClusterModel, score: f64) -> Result<usize> {
    if score.is_nan() {
        return Err(Error::Data("cannot assign a NaN score to a cluster".into()));
    }
    Ok(model.breaks.partition_point(|&b| b <= score))
}

pub fn assign_all(model: &ClusterModel, scores: &[f64]) -> Result<Vec<usize>> {
    scores.iter().map(|&s| assign_cluster(model, s)).collect()
}

impl ClusterModel {
    /// Percentage of the fit corpus in each cluster.
    pub fn shares(&self) -> Vec<f64> {
        let n: usize = self.counts.iter().sum();
        self.counts.iter().map(|&c| 100.0 * c as f64 / n as f64).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: ClusterModel = serde_json::from_str(text)?;
        if model.format != MODEL_FORMAT {
            return Err(Error::Data(format!("not a cluster model (format `{}`)", model.format)));
        }
        if model.k == 0
            || model.breaks.len() + 1 != model.k
            || model.counts.len() != model.k
            || model.breaks.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::Data("cluster model breaks are inconsistent with k".into()));
        }
        Ok(model)
    }
}

/// `id<TAB>cluster` lines.
pub fn assignments_to_tsv(ids: &[String], labels: &[usize]) -> String {
    let mut out = String::new();
    for (id, l) in ids.iter().zip(labels) {
        out.push_str(id);
        out.push('\t');
        out.push_str(&l.to_string());
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Silhouette {
    pub value: f64,
    /// Set when the value was computed on a subsample.
    pub sample_size: Option<usize>,
}

pub fn silhouette(scores: &[f64], labels: &[usize]) -> Result<f64> {
    Ok(silhouette_with(scores, labels, SILHOUETTE_EXACT_MAX, DEFAULT_SILHOUETTE_SEED)?.value)
}

pub fn silhouette_with(scores: &[f64], labels: &[usize], exact_max: usize, seed: u64) -> Result<Silhouette> {
    if scores.len() != labels.len() {
        return Err(Error::Dimension {
            expected: scores.len(),
            got: labels.len(),
        });
    }
    check_scores(scores)?;
    if scores.len() <= exact_max {
        return Ok(Silhouette {
            value: silhouette_exact(scores, labels)?,
            sample_size: None,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = index::sample(&mut rng, scores.len(), exact_max).into_vec();
    picked.sort_unstable();
    let xs: Vec<f64> = picked.iter().map(|&i| scores[i]).collect();
    let ls: Vec<usize> = picked.iter().map(|&i| labels[i]).collect();
    Ok(Silhouette {
        value: silhouette_exact(&xs, &ls)?,
        sample_size: Some(exact_max),
    })
}

fn silhouette_exact(scores: &[f64], labels: &[usize]) -> Result<f64> {
    let k = labels.iter().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0usize; k];
    for &l in labels {
        sizes[l] += 1;
    }
    if sizes.iter().filter(|&&s| s > 0).count() < 2 {
        return Err(Error::Data("silhouette needs at least two nonempty clusters".into()));
    }
    let per_point: Vec<f64> = (0..scores.len())
        .into_par_iter()
        .map(|i| {
            let own = labels[i];
            if sizes[own] == 1 {
                return 0.0;
            }
            let mut sums = vec![0.0; k];
            for (j, (&x, &l)) in scores.iter().zip(labels).enumerate() {
                if j != i {
                    sums[l] += (scores[i] - x).abs();
                }
            }
            let a = sums[own] / (sizes[own] - 1) as f64;
            let b = (0..k)
                .filter(|&c| c != own && sizes[c] > 0)
                .map(|c| sums[c] / sizes[c] as f64)
                .fold(f64::INFINITY, f64::min);
            let denom = a.max(b);
            if denom > 0.0 {
                (b - a) / denom
            } else {
                0.0
            }
        })
        .collect();
    Ok(per_point.iter().sum::<f64>() / scores.len() as f64)
}
