//! End-to-end run from one JSON config.
//!
//! Stages: filter, lm, features, score, cluster, sample, report. Every artifact
//! is written atomically (temp file, then rename) and recorded with its SHA-256
//! in `artifacts.json`, together with a per-stage key derived from the inputs,
//! the relevant config slice and the previous stage's key. With `resume`, a
//! stage whose key and files still match is loaded from disk instead of rerun.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bitext::{bitext_to_string, load_bitext, merge_sidecars, BitextPair, NLM_PPL};
use crate::cluster::{assign_all, assignments_to_tsv, fit_cluster_model, ClusterModel};
use crate::conllu::{join_bitext, load_conllu, AnnotatedSentence};
use crate::error::{Error, Result};
use crate::features::{
    build_schema, read_vectors_tsv, vectorize, vectors_to_tsv, write_vector_cache, FeatureSchema, FeatureVector,
};
use crate::filter::{filter_pipeline, synthetic_quality_filter, FilterConfig, FilterReport};
use crate::lm::{normalize_for_lm, NgramModel};
use crate::report::{cluster_distribution, report_clusters, ReportInput, DEFAULT_BINS};
use crate::sampler::{
    baseline_proportional, random_manifest, random_sample, sample_configuration, token_budget, ClusteredCorpus,
    CurationConfig, Manifest, Percents,
};
use crate::score::{read_scores_tsv, scores_to_tsv, Normalization, ScoreModel, ScoreOptions};

pub const INDEX_FILE: &str = "artifacts.json";

fn default_lm_order() -> usize {
    5
}
fn default_pca_k() -> usize {
    10
}
fn default_cluster_k() -> usize {
    4
}
fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportConfig {
    #[serde(default = "ReportConfig::default_features")]
    pub features: Vec<String>,
    #[serde(default = "ReportConfig::default_bins")]
    pub bins: usize,
    /// Scores TSV of an external set (e.g. a test set) to place in the clusters.
    #[serde(default)]
    pub external_scores: Option<PathBuf>,
}

impl ReportConfig {
    fn default_features() -> Vec<String> {
        vec!["VERB".into(), "sentenceLength".into()]
    }
    fn default_bins() -> usize {
        DEFAULT_BINS
    }
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            features: Self::default_features(),
            bins: Self::default_bins(),
            external_scores: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub bitext: PathBuf,
    pub conllu: PathBuf,
    #[serde(default)]
    pub sidecars: Vec<PathBuf>,
    #[serde(default)]
    pub synthetic_bitext: Option<PathBuf>,
    #[serde(default)]
    pub synthetic_conllu: Option<PathBuf>,
    #[serde(default)]
    pub synthetic_sidecars: Vec<PathBuf>,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub filter: FilterConfig,
    #[serde(default = "default_lm_order")]
    pub lm_order: usize,
    /// Add the `nlm_ppl` sidecar value as a feature.
    #[serde(default)]
    pub use_nlm: bool,
    #[serde(default = "default_pca_k")]
    pub pca_k: usize,
    #[serde(default)]
    pub normalization: Normalization,
    #[serde(default = "default_cluster_k")]
    pub cluster_k: usize,
    #[serde(default)]
    pub seed: u64,
    pub tds: usize,
    #[serde(default)]
    pub configurations: Vec<String>,
    #[serde(default)]
    pub baselines: Vec<String>,
    #[serde(default = "default_true")]
    pub allow_augmentation: bool,
    #[serde(default)]
    pub report: ReportConfig,
}

impl PipelineConfig {
    /// Parse a config; relative paths resolve against `base_dir`.
    pub fn from_json(text: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg: PipelineConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("pipeline config: {e}")))?;
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base_dir.join(&*p);
            }
        };
        fix(&mut cfg.bitext);
        fix(&mut cfg.conllu);
        cfg.sidecars.iter_mut().for_each(fix);
        cfg.synthetic_sidecars.iter_mut().for_each(fix);
        if let Some(p) = cfg.synthetic_bitext.as_mut() {
            fix(p);
        }
        if let Some(p) = cfg.synthetic_conllu.as_mut() {
            fix(p);
        }
        if let Some(p) = cfg.report.external_scores.as_mut() {
            fix(p);
        }
        fix(&mut cfg.output_dir);
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn validate(&self) -> Result<()> {
        self.filter.validate()?;
        let mut inputs = vec![("bitext", &self.bitext), ("conllu", &self.conllu)];
        inputs.extend(self.sidecars.iter().map(|p| ("sidecars", p)));
        inputs.extend(self.synthetic_sidecars.iter().map(|p| ("synthetic_sidecars", p)));
        if let Some(p) = &self.synthetic_bitext {
            inputs.push(("synthetic_bitext", p));
        }
        if let Some(p) = &self.synthetic_conllu {
            inputs.push(("synthetic_conllu", p));
        }
        if let Some(p) = &self.report.external_scores {
            inputs.push(("report.external_scores", p));
        }
        for (name, p) in inputs {
            if !p.is_file() {
                return Err(Error::Config(format!("{name}: {} does not exist", p.display())));
            }
        }
        if self.synthetic_bitext.is_some() != self.synthetic_conllu.is_some() {
            return Err(Error::Config("synthetic_bitext and synthetic_conllu go together".into()));
        }
        if self.synthetic_bitext.is_none() && !self.synthetic_sidecars.is_empty() {
            return Err(Error::Config("synthetic_sidecars given without synthetic_bitext".into()));
        }
        if self.lm_order == 0 || self.pca_k == 0 || self.cluster_k == 0 || self.tds == 0 {
            return Err(Error::Config("lm_order, pca_k, cluster_k and tds must be at least 1".into()));
        }
        for c in &self.configurations {
            let p = Percents::parse(c)?;
            if p.len() != self.cluster_k {
                return Err(Error::Config(format!("configuration {c} needs {} parts", self.cluster_k)));
            }
        }
        for b in &self.baselines {
            if b != "proportional" && b != "random" {
                return Err(Error::Config(format!("unknown baseline `{b}` (proportional, random)")));
            }
        }
        Ok(())
    }

    /// Hash of the config with the output directory left out.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output_dir = PathBuf::new();
        sha256_hex(serde_json::to_string(&c).expect("config serializes").as_bytes())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub key: String,
    pub files: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ArtifactIndex {
    pub config_hash: String,
    pub schema_hash: Option<String>,
    pub stages: BTreeMap<String, StageRecord>,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub resume: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PipelineOutcome {
    pub index: ArtifactIndex,
    pub stages_run: Vec<&'static str>,
    pub stages_reused: Vec<&'static str>,
}

/// Write `bytes` to `path` via a sibling temp file and rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

struct Ctx {
    out: PathBuf,
    previous: Option<ArtifactIndex>,
    index: ArtifactIndex,
    run: Vec<&'static str>,
    reused: Vec<&'static str>,
}

impl Ctx {
    fn begin(&mut self, stage: &'static str, key: String) -> bool {
        let reusable = self.previous.as_ref().and_then(|p| p.stages.get(stage)).filter(|rec| {
            rec.key == key
                && rec.files.iter().all(|(rel, hash)| {
                    fs::read(self.out.join(rel)).is_ok_and(|b| &sha256_hex(&b) == hash)
                })
        });
        match reusable {
            Some(rec) => {
                self.index.stages.insert(stage.into(), rec.clone());
                self.reused.push(stage);
                true
            }
            None => {
                self.index.stages.insert(
                    stage.into(),
                    StageRecord {
                        key,
                        files: BTreeMap::new(),
                    },
                );
                self.run.push(stage);
                false
            }
        }
    }

    fn write(&mut self, stage: &str, rel: &str, bytes: &[u8]) -> Result<()> {
        write_atomic(&self.out.join(rel), bytes)?;
        self.index
            .stages
            .get_mut(stage)
            .expect("stage begun")
            .files
            .insert(rel.into(), sha256_hex(bytes));
        Ok(())
    }

    fn read(&self, rel: &str) -> Result<String> {
        let p = self.out.join(rel);
        fs::read_to_string(&p).map_err(|e| Error::io(p, e))
    }

    fn key(&self, stage: &str) -> String {
        self.index.stages[stage].key.clone()
    }
}

fn stage_key(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p.as_bytes());
    }
    hex::encode(h.finalize())
}

fn file_hash(p: &Path) -> Result<String> {
    Ok(sha256_hex(&fs::read(p).map_err(|e| Error::io(p, e))?))
}

fn load_pairs(path: &Path, sidecars: &[PathBuf]) -> Result<Vec<BitextPair>> {
    let mut pairs = load_bitext(path)?;
    for s in sidecars {
        let f = fs::File::open(s).map_err(|e| Error::io(s, e))?;
        merge_sidecars(&mut pairs, std::io::BufReader::new(f))?;
    }
    Ok(pairs)
}

fn joined(pairs: Vec<BitextPair>, annotations: Vec<AnnotatedSentence>, what: &str) -> Result<Vec<(BitextPair, AnnotatedSentence)>> {
    let j = join_bitext(pairs, annotations)?;
    if !j.unmatched.is_empty() {
        log::warn!("{what}: {} pairs without annotations were left out", j.unmatched.len());
    }
    Ok(j.records)
}

fn vectorize_all(
    records: &[(BitextPair, AnnotatedSentence)],
    schema: &FeatureSchema,
    lm: &NgramModel,
    use_nlm: bool,
) -> Result<Vec<FeatureVector>> {
    records
        .par_iter()
        .map(|(pair, ann)| {
            let slm = lm.perplexity(&normalize_for_lm(ann))?;
            let nlm = if use_nlm { Some(pair.sidecar_value(NLM_PPL)?) } else { None };
            vectorize(ann, schema, slm, nlm)
        })
        .collect()
}

fn manifest_file(name: &str) -> (String, String) {
    (format!("samples/{name}.tsv"), format!("samples/{name}.manifest.json"))
}

pub fn run_pipeline(cfg: &PipelineConfig, opts: &RunOptions) -> Result<PipelineOutcome> {
    cfg.validate()?;
    let out = cfg.output_dir.clone();
    let previous = if opts.resume {
        fs::read_to_string(out.join(INDEX_FILE))
            .ok()
            .and_then(|t| serde_json::from_str::<ArtifactIndex>(&t).ok())
    } else {
        None
    };
    let config_hash = cfg.hash();
    let mut ctx = Ctx {
        out,
        previous,
        index: ArtifactIndex {
            config_hash: config_hash.clone(),
            ..ArtifactIndex::default()
        },
        run: Vec::new(),
        reused: Vec::new(),
    };

    let mut input_parts = vec![file_hash(&cfg.bitext)?, file_hash(&cfg.conllu)?];
    for p in cfg
        .sidecars
        .iter()
        .chain(&cfg.synthetic_bitext)
        .chain(&cfg.synthetic_conllu)
        .chain(&cfg.synthetic_sidecars)
    {
        input_parts.push(file_hash(p)?);
    }
    let input_key = stage_key(&input_parts.iter().map(String::as_str).collect::<Vec<_>>());
    let has_syn = cfg.synthetic_bitext.is_some();

    // filter
    let annotations = load_conllu(&cfg.conllu).map_err(|e| e.in_stage("filter"))?;
    let syn_annotations = match &cfg.synthetic_conllu {
        Some(p) => load_conllu(p).map_err(|e| e.in_stage("filter"))?,
        None => Vec::new(),
    };
    let filter_json = serde_json::to_string(&cfg.filter)?;
    let (filtered, syn_filtered) = if ctx.begin("filter", stage_key(&[&input_key, "filter", &filter_json])) {
        let real = crate::bitext::read_bitext(ctx.read("filtered.tsv")?.as_bytes())?;
        let syn = if has_syn {
            crate::bitext::read_bitext(ctx.read("synthetic_filtered.tsv")?.as_bytes())?
        } else {
            Vec::new()
        };
        (real, syn)
    } else {
        (|| -> Result<_> {
            let pairs = load_pairs(&cfg.bitext, &cfg.sidecars)?;
            let (real, report) = filter_pipeline(pairs, &annotations, &cfg.filter)?;
            ctx.write("filter", "filtered.tsv", bitext_to_string(&real).as_bytes())?;
            ctx.write("filter", "filter_report.json", serde_json::to_string_pretty(&report)?.as_bytes())?;
            let mut syn = Vec::new();
            if let Some(p) = &cfg.synthetic_bitext {
                let pairs = load_pairs(p, &cfg.synthetic_sidecars)?;
                let (kept, r): (Vec<BitextPair>, FilterReport) =
                    synthetic_quality_filter(pairs, &syn_annotations, cfg.filter.synthetic_loglik_min)?;
                ctx.write("filter", "synthetic_filtered.tsv", bitext_to_string(&kept).as_bytes())?;
                ctx.write("filter", "synthetic_filter_report.json", serde_json::to_string_pretty(&r)?.as_bytes())?;
                syn = kept;
            }
            Ok((real, syn))
        })()
        .map_err(|e| e.in_stage("filter"))?
    };
    let records = joined(filtered, annotations, "corpus").map_err(|e| e.in_stage("filter"))?;
    let syn_records = joined(syn_filtered, syn_annotations, "synthetic corpus").map_err(|e| e.in_stage("filter"))?;

    // lm
    let lm_key = stage_key(&[&ctx.key("filter"), "lm", &cfg.lm_order.to_string()]);
    let lm = if ctx.begin("lm", lm_key) {
        NgramModel::from_json(&ctx.read("lm.json")?)?
    } else {
        (|| -> Result<_> {
            let corpus: Vec<Vec<String>> = records.iter().map(|(_, a)| normalize_for_lm(a)).collect();
            let lm = NgramModel::train(&corpus, cfg.lm_order)?;
            ctx.write("lm", "lm.json", lm.to_json()?.as_bytes())?;
            Ok(lm)
        })()
        .map_err(|e| e.in_stage("lm"))?
    };

    // features
    let feat_key = stage_key(&[&ctx.key("lm"), "features", &cfg.use_nlm.to_string()]);
    let (schema, vectors, syn_vectors) = if ctx.begin("features", feat_key) {
        let schema = FeatureSchema::from_json(&ctx.read("schema.json")?)?;
        let d = schema.dimension();
        let v = read_vectors_tsv(ctx.read("vectors.tsv")?.as_bytes(), d)?;
        let s = if has_syn {
            read_vectors_tsv(ctx.read("synthetic_vectors.tsv")?.as_bytes(), d)?
        } else {
            Vec::new()
        };
        (schema, v, s)
    } else {
        (|| -> Result<_> {
            let anns: Vec<AnnotatedSentence> = records.iter().map(|(_, a)| a.clone()).collect();
            let schema = build_schema(&anns, cfg.use_nlm)?;
            let v = vectorize_all(&records, &schema, &lm, cfg.use_nlm)?;
            let s = vectorize_all(&syn_records, &schema, &lm, cfg.use_nlm)?;
            ctx.write("features", "schema.json", schema.to_json()?.as_bytes())?;
            ctx.write("features", "vectors.tsv", vectors_to_tsv(&v).as_bytes())?;
            let mut cache = Vec::new();
            write_vector_cache(&mut cache, &v).map_err(|e| Error::Internal(e.to_string()))?;
            ctx.write("features", "vectors.bin", &cache)?;
            if has_syn {
                ctx.write("features", "synthetic_vectors.tsv", vectors_to_tsv(&s).as_bytes())?;
            }
            Ok((schema, v, s))
        })()
        .map_err(|e| e.in_stage("features"))?
    };
    ctx.index.schema_hash = Some(schema.hash());

    // score
    let score_key = stage_key(&[
        &ctx.key("features"),
        "score",
        &cfg.pca_k.to_string(),
        &serde_json::to_string(&cfg.normalization)?,
    ]);
    let (score_model, scores, syn_scores) = if ctx.begin("score", score_key) {
        let m = ScoreModel::from_json(&ctx.read("score_model.json")?)?;
        let first = |rows: Vec<(String, f64)>| rows.into_iter().map(|r| r.1).collect::<Vec<f64>>();
        let s = first(read_scores_tsv(ctx.read("scores.tsv")?.as_bytes())?);
        let ss = if has_syn {
            first(read_scores_tsv(ctx.read("synthetic_scores.tsv")?.as_bytes())?)
        } else {
            Vec::new()
        };
        (m, s, ss)
    } else {
        (|| -> Result<_> {
            let opts = ScoreOptions {
                k: cfg.pca_k,
                normalization: cfg.normalization,
            };
            let m = ScoreModel::fit(&vectors, &schema, opts)?;
            let scored = m.score_all(&vectors)?;
            let syn_scored = m.score_all(&syn_vectors)?;
            ctx.write("score", "score_model.json", m.to_json()?.as_bytes())?;
            ctx.write("score", "scores.tsv", scores_to_tsv(&scored, true).as_bytes())?;
            if has_syn {
                ctx.write("score", "synthetic_scores.tsv", scores_to_tsv(&syn_scored, true).as_bytes())?;
            }
            Ok((
                m,
                scored.iter().map(|s| s.lalita).collect(),
                syn_scored.iter().map(|s| s.lalita).collect(),
            ))
        })()
        .map_err(|e| e.in_stage("score"))?
    };

    // cluster
    let cluster_key = stage_key(&[&ctx.key("score"), "cluster", &cfg.cluster_k.to_string(), &cfg.seed.to_string()]);
    let cluster_model = if ctx.begin("cluster", cluster_key) {
        ClusterModel::from_json(&ctx.read("cluster_model.json")?)?
    } else {
        (|| -> Result<_> {
            let m = fit_cluster_model(&scores, cfg.cluster_k, cfg.seed)?;
            let ids: Vec<String> = vectors.iter().map(|v| v.id.clone()).collect();
            ctx.write("cluster", "cluster_model.json", m.to_json()?.as_bytes())?;
            ctx.write("cluster", "assignments.tsv", assignments_to_tsv(&ids, &assign_all(&m, &scores)?).as_bytes())?;
            if has_syn {
                let ids: Vec<String> = syn_vectors.iter().map(|v| v.id.clone()).collect();
                let labels = assign_all(&m, &syn_scores)?;
                ctx.write("cluster", "synthetic_assignments.tsv", assignments_to_tsv(&ids, &labels).as_bytes())?;
            }
            Ok(m)
        })()
        .map_err(|e| e.in_stage("cluster"))?
    };

    // sample
    let sample_cfg = serde_json::json!({
        "tds": cfg.tds, "configurations": cfg.configurations, "baselines": cfg.baselines,
        "seed": cfg.seed, "allow_augmentation": cfg.allow_augmentation,
    });
    let sample_key = stage_key(&[&ctx.key("cluster"), "sample", &sample_cfg.to_string()]);
    let mut budgets = BTreeMap::new();
    if ctx.begin("sample", sample_key) {
        for name in sample_names(cfg) {
            let m: Manifest = serde_json::from_str(&ctx.read(&manifest_file(&name).1)?)?;
            budgets.insert(name, m.tokens);
        }
    } else {
        (|| -> Result<()> {
            let real_pairs: Vec<BitextPair> = records.iter().map(|(p, _)| p.clone()).collect();
            let real = ClusteredCorpus::build(real_pairs.clone(), &scores, &cluster_model, false)?;
            let syn = if has_syn {
                let pairs = syn_records.iter().map(|(p, _)| p.clone()).collect();
                Some(ClusteredCorpus::build(pairs, &syn_scores, &cluster_model, true)?)
            } else {
                None
            };
            let mut emit = |ctx: &mut Ctx, name: &str, pairs: &[BitextPair], manifest: &Manifest| -> Result<()> {
                let (tsv, json) = manifest_file(name);
                ctx.write("sample", &tsv, bitext_to_string(pairs).as_bytes())?;
                ctx.write("sample", &json, manifest.to_json()?.as_bytes())?;
                budgets.insert(name.to_string(), manifest.tokens);
                Ok(())
            };
            for c in &cfg.configurations {
                let mut cc = CurationConfig::new(Percents::parse(c)?, cfg.tds);
                cc.seed = cfg.seed;
                cc.allow_augmentation = cfg.allow_augmentation;
                let (pairs, m) = sample_configuration(&real, syn.as_ref(), &cc)?;
                emit(&mut ctx, &cc.percents.name(), &pairs, &m)?;
            }
            for b in &cfg.baselines {
                if b == "proportional" {
                    let (pairs, m) = baseline_proportional(&real, syn.as_ref(), &cluster_model, cfg.tds)?;
                    emit(&mut ctx, "baselineP", &pairs, &m)?;
                } else {
                    let pairs = random_sample(&real_pairs, cfg.tds, cfg.seed)?;
                    emit(&mut ctx, "random", &pairs, &random_manifest(&pairs, cfg.tds, cfg.seed))?;
                }
            }
            budgets.insert("full".into(), token_budget(&real_pairs));
            Ok(())
        })()
        .map_err(|e| e.in_stage("sample"))?;
    }

    // report
    let report_key = stage_key(&[&ctx.key("sample"), "report", &serde_json::to_string(&cfg.report)?]);
    if !ctx.begin("report", report_key) {
        (|| -> Result<()> {
            let mut report = report_clusters(&ReportInput {
                scores: &scores,
                vectors: &vectors,
                schema: &schema,
                cluster_model: &cluster_model,
                score_model: Some(&score_model),
                features: &cfg.report.features,
                bins: cfg.report.bins,
            })?;
            if !budgets.contains_key("full") {
                budgets.insert("full".into(), token_budget(&records.iter().map(|(p, _)| p.clone()).collect::<Vec<_>>()));
            }
            report.token_budgets = budgets;
            if let Some(p) = &cfg.report.external_scores {
                let f = fs::File::open(p).map_err(|e| Error::io(p, e))?;
                let ext: Vec<f64> = read_scores_tsv(std::io::BufReader::new(f))?.into_iter().map(|r| r.1).collect();
                report.external_distribution = Some(cluster_distribution(&ext, &cluster_model)?);
            }
            ctx.write("report", "report.json", report.to_json()?.as_bytes())?;
            ctx.write("report", "report.tsv", report.to_tsv().as_bytes())?;
            Ok(())
        })()
        .map_err(|e| e.in_stage("report"))?;
    }

    let index_json = serde_json::to_string_pretty(&ctx.index)?;
    write_atomic(&ctx.out.join(INDEX_FILE), index_json.as_bytes())?;
    Ok(PipelineOutcome {
        index: ctx.index,
        stages_run: ctx.run,
        stages_reused: ctx.reused,
    })
}

fn sample_names(cfg: &PipelineConfig) -> Vec<String> {
    let mut names: Vec<String> = cfg
        .configurations
        .iter()
        .filter_map(|c| Percents::parse(c).ok().map(|p| p.name()))
        .collect();
    for b in &cfg.baselines {
        names.push(if b == "proportional" { "baselineP".into() } else { "random".into() });
    }
    names
}
