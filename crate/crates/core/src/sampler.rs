//! Curated corpus materialization.
//!
//! A configuration `a_b_c_d` asks for a%, b%, c%, d% of the total dataset size
//! from clusters 0..3. Quotas use largest-remainder rounding (ties to the lower
//! cluster), so they always sum to the requested size. Each cluster gives up its
//! highest-scoring pairs first; a cluster that runs dry is topped up from the
//! matching synthetic cluster.

use std::fmt;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitext::{whitespace_tokens, BitextPair};
use crate::cluster::{assign_cluster, ClusterModel};
use crate::error::{Error, Result, Shortfall};

const MICRO: f64 = 1e6;
/// Allowed deviation of a configuration's percent sum from 100.
pub const PERCENT_SUM_TOLERANCE: f64 = 0.05;

/// Per-cluster percentages, held in millionths of a percent.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Percents(Vec<u64>);

impl Percents {
    pub fn new(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Config("a configuration needs at least one percentage".into()));
        }
        let mut micros = Vec::with_capacity(values.len());
        for &v in values {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Config(format!("percentage {v} must be a nonnegative number")));
            }
            micros.push((v * MICRO).round() as u64);
        }
        let sum: f64 = values.iter().sum();
        if (sum - 100.0).abs() > PERCENT_SUM_TOLERANCE {
            return Err(Error::Config(format!("percentages sum to {sum}, not 100")));
        }
        Ok(Percents(micros))
    }

    pub fn values(&self) -> Vec<f64> {
        self.0.iter().map(|&m| m as f64 / MICRO).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `a_b_c_d` with shortest decimal renderings.
    pub fn name(&self) -> String {
        self.to_string()
    }

    fn parse_with(s: &str, sep: char) -> Result<Self> {
        let values = s
            .split(sep)
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("`{t}` in `{s}` is not a number")))
            })
            .collect::<Result<Vec<_>>>()?;
        Percents::new(&values)
    }

    /// Accepts `60_20_20_0` or `60,20,20,0`.
    pub fn parse(s: &str) -> Result<Self> {
        Self::parse_with(s, if s.contains(',') { ',' } else { '_' })
    }
}

impl fmt::Display for Percents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("_")?;
            }
            let (whole, frac) = (m / 1_000_000, m % 1_000_000);
            if frac == 0 {
                write!(f, "{whole}")?;
            } else {
                let digits = format!("{frac:06}");
                write!(f, "{whole}.{}", digits.trim_end_matches('0'))?;
            }
        }
        Ok(())
    }
}

impl FromStr for Percents {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Percents::parse(s)
    }
}

/// All distinct orderings of a percent multiset, lexicographically sorted.
pub fn enumerate_configurations(multiset: &[f64]) -> Result<Vec<Percents>> {
    let base = Percents::new(multiset)?;
    let mut cur = base.0.clone();
    cur.sort_unstable();
    let mut out = vec![Percents(cur.clone())];
    // next lexicographic permutation, which skips duplicates by construction
    loop {
        let Some(i) = (0..cur.len().saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(Percents(cur.clone()));
    }
    Ok(out)
}

/// Split `total` in proportion to `weights` by largest remainder; ties go to the lower index.
pub fn largest_remainder(weights: &[u64], total: usize) -> Result<Vec<usize>> {
    let sum: u128 = weights.iter().map(|&w| w as u128).sum();
    if sum == 0 {
        return Err(Error::Config("cannot split a quota over all-zero weights".into()));
    }
    let t = total as u128;
    let mut quotas: Vec<usize> = weights.iter().map(|&w| (t * w as u128 / sum) as usize).collect();
    let mut rema: Vec<(u128, usize)> = weights.iter().enumerate().map(|(i, &w)| (t * w as u128 % sum, i)).collect();
    rema.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let left = total - quotas.iter().sum::<usize>();
    for &(_, i) in rema.iter().take(left) {
        quotas[i] += 1;
    }
    Ok(quotas)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurationConfig {
    pub percents: Percents,
    pub tds: usize,
    pub seed: u64,
    pub allow_augmentation: bool,
}

impl CurationConfig {
    pub fn new(percents: Percents, tds: usize) -> Self {
        CurationConfig {
            percents,
            tds,
            seed: 0,
            allow_augmentation: true,
        }
    }

    pub fn quotas(&self) -> Result<Vec<usize>> {
        if self.tds == 0 {
            return Err(Error::Config("total dataset size must be at least 1".into()));
        }
        largest_remainder(&self.percents.0, self.tds)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredPair {
    pub pair: BitextPair,
    pub score: f64,
}

/// Pairs grouped by cluster, each cluster sorted by descending score with
/// ties in input order.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusteredCorpus {
    pub clusters: Vec<Vec<ScoredPair>>,
    pub synthetic: bool,
}

impl ClusteredCorpus {
    pub fn build(pairs: Vec<BitextPair>, scores: &[f64], model: &ClusterModel, synthetic: bool) -> Result<Self> {
        if pairs.len() != scores.len() {
            return Err(Error::Dimension {
                expected: pairs.len(),
                got: scores.len(),
            });
        }
        let mut clusters: Vec<Vec<ScoredPair>> = vec![Vec::new(); model.k];
        for (pair, &score) in pairs.into_iter().zip(scores) {
            clusters[assign_cluster(model, score)?].push(ScoredPair { pair, score });
        }
        for c in clusters.iter_mut() {
            c.sort_by(|a, b| b.score.partial_cmp(&a.score).unwrap());
        }
        Ok(ClusteredCorpus { clusters, synthetic })
    }

    pub fn k(&self) -> usize {
        self.clusters.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.clusters.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.clusters.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All pairs in cluster order, then descending score.
    pub fn flatten(&self) -> Vec<ScoredPair> {
        self.clusters.iter().flatten().cloned().collect()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenBudget {
    pub source: u64,
    pub target: u64,
}

impl std::ops::Add for TokenBudget {
    type Output = TokenBudget;
    fn add(self, o: TokenBudget) -> TokenBudget {
        TokenBudget {
            source: self.source + o.source,
            target: self.target + o.target,
        }
    }
}

pub fn token_budget(pairs: &[BitextPair]) -> TokenBudget {
    pairs
        .par_iter()
        .map(|p| TokenBudget {
            source: whitespace_tokens(&p.source) as u64,
            target: whitespace_tokens(&p.target) as u64,
        })
        .reduce(TokenBudget::default, |a, b| a + b)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterDraw {
    pub cluster: usize,
    pub quota: usize,
    pub real: usize,
    pub synthetic: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub method: String,
    pub config: Option<String>,
    pub percents: Vec<f64>,
    pub tds: usize,
    pub seed: Option<u64>,
    pub clusters: Vec<ClusterDraw>,
    pub tokens: TokenBudget,
}

impl Manifest {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn draw(
    corpus: &ClusteredCorpus,
    synthetic: Option<&ClusteredCorpus>,
    quotas: &[usize],
    allow_augmentation: bool,
) -> Result<(Vec<BitextPair>, Vec<ClusterDraw>)> {
    if let Some(s) = synthetic {
        if s.k() != corpus.k() {
            return Err(Error::Data(format!(
                "synthetic corpus has {} clusters, real corpus has {}",
                s.k(),
                corpus.k()
            )));
        }
    }
    let mut shortfalls = Vec::new();
    let mut out = Vec::with_capacity(quotas.iter().sum());
    let mut draws = Vec::with_capacity(quotas.len());
    for (i, &quota) in quotas.iter().enumerate() {
        let real = &corpus.clusters[i];
        let take_real = quota.min(real.len());
        let deficit = quota - take_real;
        let syn_avail = match (synthetic, allow_augmentation) {
            (Some(s), true) => s.clusters[i].len(),
            _ => 0,
        };
        if deficit > syn_avail {
            shortfalls.push(Shortfall {
                cluster: i,
                quota,
                real_available: real.len(),
                synthetic_available: syn_avail,
                missing: deficit - syn_avail,
            });
            continue;
        }
        out.extend(real[..take_real].iter().map(|p| p.pair.clone()));
        if deficit > 0 {
            let syn = &synthetic.expect("deficit implies synthetic supply").clusters[i];
            out.extend(syn[..deficit].iter().map(|p| p.pair.clone()));
        }
        draws.push(ClusterDraw {
            cluster: i,
            quota,
            real: take_real,
            synthetic: deficit,
        });
    }
    if !shortfalls.is_empty() {
        return Err(Error::Shortfall(shortfalls));
    }
    Ok((out, draws))
}

pub fn sample_configuration(
    corpus: &ClusteredCorpus,
    synthetic: Option<&ClusteredCorpus>,
    cfg: &CurationConfig,
) -> Result<(Vec<BitextPair>, Manifest)> {
    if cfg.percents.len() != corpus.k() {
        return Err(Error::Config(format!(
            "configuration {} has {} parts but there are {} clusters",
            cfg.percents,
            cfg.percents.len(),
            corpus.k()
        )));
    }
    let quotas = cfg.quotas()?;
    let (pairs, clusters) = draw(corpus, synthetic, &quotas, cfg.allow_augmentation)?;
    let manifest = Manifest {
        method: "configuration".into(),
        config: Some(cfg.percents.name()),
        percents: cfg.percents.values(),
        tds: cfg.tds,
        seed: None,
        clusters,
        tokens: token_budget(&pairs),
    };
    Ok((pairs, manifest))
}

/// Sample each cluster in proportion to its share of the fit corpus.
pub fn baseline_proportional(
    corpus: &ClusteredCorpus,
    synthetic: Option<&ClusteredCorpus>,
    model: &ClusterModel,
    tds: usize,
) -> Result<(Vec<BitextPair>, Manifest)> {
    if tds == 0 {
        return Err(Error::Config("total dataset size must be at least 1".into()));
    }
    let weights: Vec<u64> = model.counts.iter().map(|&c| c as u64).collect();
    let quotas = largest_remainder(&weights, tds)?;
    let (pairs, clusters) = draw(corpus, synthetic, &quotas, true)?;
    Ok((
        pairs.clone(),
        Manifest {
            method: "proportional".into(),
            config: None,
            percents: model.shares(),
            tds,
            seed: None,
            clusters,
            tokens: token_budget(&pairs),
        },
    ))
}

/// Uniform sample without replacement, returned in input order.
pub fn random_sample(pairs: &[BitextPair], tds: usize, seed: u64) -> Result<Vec<BitextPair>> {
    if tds > pairs.len() {
        return Err(Error::Data(format!(
            "cannot sample {tds} pairs from a corpus of {}",
            pairs.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = index::sample(&mut rng, pairs.len(), tds).into_vec();
    picked.sort_unstable();
    Ok(picked.into_iter().map(|i| pairs[i].clone()).collect())
}

pub fn random_manifest(pairs: &[BitextPair], tds: usize, seed: u64) -> Manifest {
    Manifest {
        method: "random".into(),
        config: None,
        percents: Vec::new(),
        tds,
        seed: Some(seed),
        clusters: Vec::new(),
        tokens: token_budget(pairs),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderStrategy {
    IncPca,
    DecPca,
    Rs,
}

impl FromStr for OrderStrategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "incpca" => Ok(OrderStrategy::IncPca),
            "decpca" => Ok(OrderStrategy::DecPca),
            "rs" => Ok(OrderStrategy::Rs),
            _ => Err(Error::Config(format!("unknown ordering strategy `{s}` (incpca, decpca, rs)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepwisePlan {
    /// Input indices in emission order.
    pub order: Vec<usize>,
    /// Prefix lengths at which a training stage ends; the last equals the corpus size.
    pub cuts: Vec<usize>,
}

pub fn stepwise_order(scores: &[f64], strategy: OrderStrategy, increment: usize, seed: u64) -> Result<StepwisePlan> {
    if increment == 0 {
        return Err(Error::Config("increment must be at least 1".into()));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::Data("cannot order NaN scores".into()));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    match strategy {
        OrderStrategy::IncPca => order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).unwrap()),
        OrderStrategy::DecPca => order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).unwrap()),
        OrderStrategy::Rs => order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed)),
    }
    let n = scores.len();
    let cuts = (1..=n.div_ceil(increment)).map(|k| (k * increment).min(n)).collect();
    Ok(StepwisePlan { order, cuts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::jenks_breaks;
    use proptest::prelude::*;

    fn pair(id: &str, words: usize) -> BitextPair {
        BitextPair::new(id, vec!["w"; words].join(" "), vec!["v"; words + 1].join(" "))
    }

    fn corpus(sizes: [usize; 4], synthetic: bool, prefix: &str) -> (ClusteredCorpus, ClusterModel) {
        // cluster i occupies scores in [10i, 10i+1)
        let model = jenks_breaks(&[0.0, 10.0, 20.0, 30.0], 4).unwrap();
        let mut pairs = Vec::new();
        let mut scores = Vec::new();
        for (c, &n) in sizes.iter().enumerate() {
            for j in 0..n {
                pairs.push(pair(&format!("{prefix}{c}-{j}"), 1 + j % 3));
                scores.push(10.0 * c as f64 + (j as f64 * 0.37) % 1.0);
            }
        }
        (ClusteredCorpus::build(pairs, &scores, &model, synthetic).unwrap(), model)
    }

    #[test]
    fn multiset_configuration_counts() {
        let cases: [(&[f64], usize); 9] = [
            (&[25.0, 25.0, 25.0, 25.0], 1),
            (&[70.0, 10.0, 10.0, 10.0], 4),
            (&[40.0, 40.0, 10.0, 10.0], 6),
            (&[33.34, 33.34, 33.34, 0.0], 4),
            (&[60.0, 20.0, 20.0, 0.0], 12),
            (&[70.0, 15.0, 15.0, 0.0], 12),
            (&[50.0, 50.0, 0.0, 0.0], 6),
            (&[75.0, 25.0, 0.0, 0.0], 12),
            (&[100.0, 0.0, 0.0, 0.0], 4),
        ];
        for (set, n) in cases {
            let configs = enumerate_configurations(set).unwrap();
            assert_eq!(configs.len(), n, "{set:?}");
            assert!(configs.windows(2).all(|w| w[0] < w[1]));
        }
        let names: Vec<String> = enumerate_configurations(&[100.0, 0.0, 0.0, 0.0])
            .unwrap()
            .iter()
            .map(Percents::name)
            .collect();
        assert_eq!(names, ["0_0_0_100", "0_0_100_0", "0_100_0_0", "100_0_0_0"]);
    }

    #[test]
    fn percents_must_sum_to_100() {
        assert!(enumerate_configurations(&[50.0, 40.0, 0.0, 0.0]).is_err());
        assert!(Percents::new(&[-1.0, 101.0]).is_err());
        assert_eq!(Percents::parse("33.34,33.34,33.34,0").unwrap().name(), "33.34_33.34_33.34_0");
        assert_eq!(Percents::parse("0_25_0_75").unwrap().values(), [0.0, 25.0, 0.0, 75.0]);
    }

    #[test]
    fn quota_rounding() {
        let cfg = CurationConfig::new(Percents::parse("33.34_33.34_33.34_0").unwrap(), 3);
        assert_eq!(cfg.quotas().unwrap(), [1, 1, 1, 0]);
        assert_eq!(largest_remainder(&[2183, 2515, 2889, 2413], 100_000).unwrap(), [21830, 25150, 28890, 24130]);
        assert_eq!(largest_remainder(&[1, 1, 1, 1], 8).unwrap(), [2, 2, 2, 2]);
        assert_eq!(largest_remainder(&[2183, 2515, 2889, 2413], 1).unwrap(), [0, 0, 1, 0]);
        // equal remainders go to the lower cluster
        assert_eq!(largest_remainder(&[1, 1, 1, 1], 2).unwrap(), [1, 1, 0, 0]);
    }

    #[test]
    fn deficit_filled_from_synthetic() {
        let (real, _) = corpus([5, 5, 5, 6], false, "r");
        let (syn, _) = corpus([0, 0, 0, 10], true, "s");
        let cfg = CurationConfig::new(Percents::parse("0_0_0_100").unwrap(), 10);
        let (pairs, manifest) = sample_configuration(&real, Some(&syn), &cfg).unwrap();
        assert_eq!(pairs.len(), 10);
        assert_eq!(manifest.clusters[3], ClusterDraw { cluster: 3, quota: 10, real: 6, synthetic: 4 });
        assert!(pairs[..6].iter().all(|p| p.id.starts_with("r3")));
        assert!(pairs[6..].iter().all(|p| p.id.starts_with("s3")));
        assert_eq!(manifest.tokens, token_budget(&pairs));
        assert_eq!(manifest.config.as_deref(), Some("0_0_0_100"));
    }

    #[test]
    fn shortfall_reported_per_cluster() {
        let (real, _) = corpus([5, 5, 5, 6], false, "r");
        let (syn, _) = corpus([0, 0, 0, 2], true, "s");
        let cfg = CurationConfig::new(Percents::parse("50_0_0_50").unwrap(), 20);
        match sample_configuration(&real, Some(&syn), &cfg) {
            Err(Error::Shortfall(s)) => {
                assert_eq!(s.len(), 2);
                assert_eq!((s[0].cluster, s[0].missing), (0, 5));
                assert_eq!((s[1].cluster, s[1].missing), (3, 2));
            }
            other => panic!("{other:?}"),
        }
        let mut no_aug = CurationConfig::new(Percents::parse("0_0_0_100").unwrap(), 8);
        no_aug.allow_augmentation = false;
        assert!(matches!(sample_configuration(&real, Some(&syn), &no_aug), Err(Error::Shortfall(_))));
    }

    #[test]
    fn all_real_when_cluster_large_enough() {
        let (real, _) = corpus([30, 0, 0, 0], false, "r");
        let cfg = CurationConfig::new(Percents::parse("100_0_0_0").unwrap(), 12);
        let (pairs, m) = sample_configuration(&real, None, &cfg).unwrap();
        assert_eq!(m.clusters[0].synthetic, 0);
        // top by score, descending
        let scores: Vec<f64> = real.clusters[0][..12].iter().map(|p| p.score).collect();
        assert!(scores.windows(2).all(|w| w[0] >= w[1]));
        assert_eq!(pairs.iter().map(|p| &p.id).collect::<Vec<_>>(), real.clusters[0][..12].iter().map(|p| &p.pair.id).collect::<Vec<_>>());
    }

    #[test]
    fn proportional_baseline() {
        let (real, _) = corpus([8, 8, 8, 8], false, "r");
        let mut model = jenks_breaks(&[0.0, 10.0, 20.0, 30.0], 4).unwrap();
        model.counts = vec![1, 1, 1, 1];
        let (pairs, m) = baseline_proportional(&real, None, &model, 8).unwrap();
        assert_eq!(pairs.len(), 8);
        assert_eq!(m.clusters.iter().map(|c| c.quota).collect::<Vec<_>>(), [2, 2, 2, 2]);
    }

    #[test]
    fn random_sample_contract() {
        let pairs: Vec<BitextPair> = (0..10).map(|i| pair(&format!("p{i}"), 1)).collect();
        let a = random_sample(&pairs, 4, 9).unwrap();
        assert_eq!(a, random_sample(&pairs, 4, 9).unwrap());
        let pos: Vec<usize> = a.iter().map(|p| pairs.iter().position(|q| q == p).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(random_sample(&pairs, 10, 1).unwrap(), pairs);
        assert!(random_sample(&pairs, 11, 1).is_err());
    }

    #[test]
    fn random_sample_inclusion_is_uniform() {
        let pairs: Vec<BitextPair> = (0..4).map(|i| pair(&format!("p{i}"), 1)).collect();
        let mut hits = [0usize; 4];
        for seed in 0..10_000 {
            for p in random_sample(&pairs, 2, seed).unwrap() {
                hits[p.id[1..].parse::<usize>().unwrap()] += 1;
            }
        }
        let sigma = (10_000.0f64 * 0.25).sqrt();
        for h in hits {
            assert!((h as f64 - 5000.0).abs() <= 3.0 * sigma, "{hits:?}");
        }
    }

    #[test]
    fn stepwise_cut_points() {
        let plan = stepwise_order(&[0.0; 10], OrderStrategy::IncPca, 3, 0).unwrap();
        assert_eq!(plan.cuts, [3, 6, 9, 10]);
        assert_eq!(plan.order, (0..10).collect::<Vec<_>>());
        let n = 1_850_000usize;
        assert_eq!((1..=n.div_ceil(300_000)).count(), 7);
        assert!(stepwise_order(&[], OrderStrategy::Rs, 1, 0).unwrap().cuts.is_empty());
    }

    #[test]
    fn token_budget_hand_counts() {
        assert_eq!(token_budget(&[]), TokenBudget::default());
        let ps = vec![BitextPair::new("1", "a b", "x"), BitextPair::new("2", "c", "y z")];
        assert_eq!(token_budget(&ps), TokenBudget { source: 3, target: 3 });
        let doubled: Vec<BitextPair> = ps.iter().chain(&ps).cloned().collect();
        assert_eq!(token_budget(&doubled), TokenBudget { source: 6, target: 6 });
    }

    proptest! {
        #[test]
        fn quotas_conserve_total(ws in proptest::collection::vec(0u64..1_000_000, 1..6), tds in 1usize..100_000) {
            prop_assume!(ws.iter().any(|&w| w > 0));
            let q = largest_remainder(&ws, tds).unwrap();
            prop_assert_eq!(q.iter().sum::<usize>(), tds);
            let sum: f64 = ws.iter().map(|&w| w as f64).sum();
            for (qi, &w) in q.iter().zip(&ws) {
                prop_assert!((*qi as f64 - tds as f64 * w as f64 / sum).abs() < 1.0);
            }
        }

        #[test]
        fn manifest_reconciles(sizes in proptest::array::uniform4(0usize..20), syn in proptest::array::uniform4(0usize..20), pick in 0usize..12, tds in 1usize..60) {
            let sets: [[f64; 4]; 3] = [[25.0; 4], [70.0, 10.0, 10.0, 10.0], [0.0, 0.0, 25.0, 75.0]];
            let configs = enumerate_configurations(&sets[pick % 3]).unwrap();
            let cfg = CurationConfig::new(configs[pick % configs.len()].clone(), tds);
            let (real, _) = corpus(sizes, false, "r");
            let (synth, _) = corpus(syn, true, "s");
            match sample_configuration(&real, Some(&synth), &cfg) {
                Ok((pairs, m)) => {
                    prop_assert_eq!(pairs.len(), tds);
                    prop_assert_eq!(m.clusters.iter().map(|c| c.quota).sum::<usize>(), tds);
                    let mut offset = 0;
                    for c in &m.clusters {
                        prop_assert_eq!(c.real + c.synthetic, c.quota);
                        if c.synthetic > 0 {
                            prop_assert_eq!(c.real, sizes[c.cluster]);
                        }
                        let slice = &pairs[offset..offset + c.quota];
                        prop_assert!(slice[..c.real].iter().all(|p| p.id.starts_with('r')));
                        prop_assert!(slice[c.real..].iter().all(|p| p.id.starts_with('s')));
                        offset += c.quota;
                    }
                }
                Err(Error::Shortfall(s)) => {
                    let q = cfg.quotas().unwrap();
                    for x in s {
                        prop_assert_eq!(x.missing, q[x.cluster] - sizes[x.cluster] - syn[x.cluster]);
                    }
                }
                Err(e) => prop_assert!(false, "{}", e),
            }
        }

        #[test]
        fn inc_reversed_is_dec(xs in proptest::collection::btree_set(-1000i32..1000, 0..50), inc in 1usize..20) {
            let scores: Vec<f64> = xs.into_iter().rev().map(f64::from).collect();
            let up = stepwise_order(&scores, OrderStrategy::IncPca, inc, 0).unwrap();
            let mut down = stepwise_order(&scores, OrderStrategy::DecPca, inc, 0).unwrap();
            down.order.reverse();
            prop_assert_eq!(&up.order, &down.order);
            if !scores.is_empty() {
                let first = stepwise_order(&scores, OrderStrategy::DecPca, inc, 0).unwrap().order[0];
                prop_assert_eq!(scores[first], scores.iter().cloned().fold(f64::MIN, f64::max));
            }
            prop_assert_eq!(up.cuts.last().copied().unwrap_or(0), scores.len());
        }

        #[test]
        fn rs_is_a_seeded_permutation(n in 0usize..60, seed in any::<u64>()) {
            let scores = vec![0.0; n];
            let a = stepwise_order(&scores, OrderStrategy::Rs, 7, seed).unwrap();
            prop_assert_eq!(&a, &stepwise_order(&scores, OrderStrategy::Rs, 7, seed).unwrap());
            let mut sorted = a.order.clone();
            sorted.sort_unstable();
            prop_assert_eq!(sorted, (0..n).collect::<Vec<_>>());
        }
    }
}
