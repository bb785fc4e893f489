//! Command-line front end. Exit codes: 0 ok, 1 usage, 2 data, 3 internal.

use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::bitext::{bitext_to_string, load_bitext, merge_sidecars, BitextPair, NLM_PPL};
use crate::cluster::{assign_all, assignments_to_tsv, fit_cluster_model, ClusterModel, DEFAULT_SILHOUETTE_SEED};
use crate::conllu::{join_bitext, load_conllu, AnnotatedSentence};
use crate::error::{Error, Result};
use crate::features::{
    build_schema, read_vector_cache, read_vectors_tsv, vectorize, vectors_to_tsv, write_vector_cache, FeatureSchema,
    FeatureVector,
};
use crate::filter::{filter_pipeline, synthetic_quality_filter, FilterConfig, RomanSide};
use crate::lm::{normalize_for_lm, NgramModel};
use crate::pipeline::{run_pipeline, write_atomic, PipelineConfig, RunOptions};
use crate::report::{cluster_distribution, report_clusters, ReportInput, DEFAULT_BINS};
use crate::sampler::{
    baseline_proportional, enumerate_configurations, random_manifest, random_sample, sample_configuration,
    stepwise_order, ClusteredCorpus, CurationConfig, OrderStrategy, Percents,
};
use crate::score::{read_scores_tsv, scores_to_tsv, Normalization, ScoreModel, ScoreOptions};

#[derive(Parser, Debug)]
#[command(name = "lalita", version, about = "Linguistic-complexity scoring and curation of parallel corpora")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Apply the bitext hygiene rules (or the synthetic-data quality filter).
    Filter(FilterArgs),
    /// Train a Kneser-Ney n-gram model on annotated sentences.
    LmTrain(LmTrainArgs),
    /// Per-sentence perplexity under a trained model.
    LmPpl(LmPplArgs),
    /// Build the feature schema from a corpus.
    Schema(SchemaArgs),
    /// Compute feature vectors.
    Vectorize(VectorizeArgs),
    /// Fit the standardize, normalize, PCA score model.
    ScoreFit(ScoreFitArgs),
    /// Score vectors with a fitted model.
    Score(ScoreArgs),
    /// Fit natural-breaks clusters over scores, or assign with an existing model.
    Cluster(ClusterArgs),
    /// Materialize a curated corpus for a configuration or baseline.
    Sample(SampleArgs),
    /// Order a corpus by score for stepwise training.
    Order(OrderArgs),
    /// List the distinct configurations of a percent multiset.
    EnumConfigs(EnumArgs),
    /// Cluster analysis report.
    Report(ReportArgs),
    /// Run the whole pipeline from a JSON config.
    Run(RunArgs),
}

#[derive(Args, Debug)]
pub struct FilterArgs {
    #[arg(long)]
    bitext: PathBuf,
    #[arg(long)]
    conllu: PathBuf,
    /// Extra `id<TAB>key=value` sidecar files.
    #[arg(long)]
    sidecar: Vec<PathBuf>,
    /// JSON filter settings; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    roman_max: Option<f64>,
    #[arg(long)]
    roman_side: Option<String>,
    #[arg(long)]
    ratio_max: Option<f64>,
    /// Keep only pairs meeting the generator log-likelihood floor.
    #[arg(long)]
    synthetic: bool,
    #[arg(long)]
    min_loglik: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-rule removal counts as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CorpusArgs {
    #[arg(long)]
    conllu: PathBuf,
    /// Restrict to ids present in this bitext (and read its sidecars).
    #[arg(long)]
    bitext: Option<PathBuf>,
    #[arg(long)]
    sidecar: Vec<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LmTrainArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long, default_value_t = 5)]
    order: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LmPplArgs {
    #[arg(long)]
    model: PathBuf,
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SchemaArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Include the `nlm_ppl` feature.
    #[arg(long)]
    nlm: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VectorizeArgs {
    #[arg(long)]
    schema: PathBuf,
    #[arg(long)]
    lm: PathBuf,
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the columnar binary cache.
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ScoreFitArgs {
    #[arg(long)]
    schema: PathBuf,
    /// Vectors TSV, or a binary cache when the name ends in `.bin`.
    #[arg(long)]
    vectors: PathBuf,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value = "column")]
    normalization: String,
    #[arg(long)]
    out: Option<PathBuf>,
    /// PC1 loading magnitudes as TSV.
    #[arg(long)]
    loadings: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ScoreArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    schema: PathBuf,
    #[arg(long)]
    vectors: PathBuf,
    #[arg(long)]
    all_components: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ClusterArgs {
    #[arg(long)]
    scores: PathBuf,
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[arg(long, default_value_t = DEFAULT_SILHOUETTE_SEED)]
    seed: u64,
    /// Assign with this model instead of fitting.
    #[arg(long)]
    model: Option<PathBuf>,
    /// Where to write a fitted model.
    #[arg(long)]
    out_model: Option<PathBuf>,
    #[arg(long)]
    assignments: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[arg(long)]
    bitext: PathBuf,
    #[arg(long)]
    scores: PathBuf,
    #[arg(long)]
    cluster_model: PathBuf,
    /// Cluster mix such as `0_0_0_100`.
    #[arg(long, conflicts_with = "baseline")]
    config: Option<String>,
    /// `proportional` or `random`.
    #[arg(long)]
    baseline: Option<String>,
    #[arg(long)]
    tds: usize,
    #[arg(long)]
    synthetic: Option<PathBuf>,
    #[arg(long)]
    synthetic_scores: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    no_augmentation: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OrderArgs {
    #[arg(long)]
    bitext: PathBuf,
    #[arg(long)]
    scores: PathBuf,
    /// `incpca`, `decpca` or `rs`.
    #[arg(long)]
    strategy: String,
    #[arg(long, default_value_t = 300_000)]
    increment: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Cut points, one per line.
    #[arg(long)]
    cuts: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EnumArgs {
    /// Percent multiset such as `60,20,20,0`.
    #[arg(long)]
    set: String,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    #[arg(long)]
    scores: PathBuf,
    #[arg(long)]
    vectors: PathBuf,
    #[arg(long)]
    schema: PathBuf,
    #[arg(long)]
    cluster_model: PathBuf,
    #[arg(long)]
    score_model: Option<PathBuf>,
    #[arg(long = "feature")]
    features: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_BINS)]
    bins: usize,
    #[arg(long)]
    external_scores: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    tsv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long)]
    bitext: Option<PathBuf>,
    #[arg(long)]
    conllu: Option<PathBuf>,
    /// Replaces the configured sidecars.
    #[arg(long)]
    sidecar: Vec<PathBuf>,
    #[arg(long)]
    synthetic_bitext: Option<PathBuf>,
    #[arg(long)]
    synthetic_conllu: Option<PathBuf>,
    #[arg(long)]
    synthetic_sidecar: Vec<PathBuf>,
    /// Replaces the configured list.
    #[arg(long = "configuration")]
    configurations: Vec<String>,
    /// Replaces the configured list.
    #[arg(long = "baseline")]
    baselines: Vec<String>,
    #[arg(long)]
    no_augmentation: bool,
    #[arg(long)]
    roman_max: Option<f64>,
    #[arg(long)]
    roman_side: Option<String>,
    #[arg(long)]
    ratio_max: Option<f64>,
    #[arg(long)]
    min_loglik: Option<f64>,
    #[arg(long)]
    no_one_to_one: bool,
    #[arg(long)]
    no_single_sentence: bool,
    #[arg(long = "report-feature")]
    report_features: Vec<String>,
    #[arg(long)]
    report_bins: Option<usize>,
    #[arg(long)]
    external_scores: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tds: Option<usize>,
    #[arg(long)]
    lm_order: Option<usize>,
    #[arg(long)]
    pca_k: Option<usize>,
    #[arg(long)]
    cluster_k: Option<usize>,
    #[arg(long)]
    normalization: Option<String>,
    #[arg(long)]
    use_nlm: Option<bool>,
    /// Reuse stages whose inputs and artifacts are unchanged.
    #[arg(long)]
    resume: bool,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

fn read(p: &Path) -> Result<String> {
    fs::read_to_string(p).map_err(|e| Error::io(p, e))
}

fn load_pairs(path: &Path, sidecars: &[PathBuf]) -> Result<Vec<BitextPair>> {
    let mut pairs = load_bitext(path)?;
    for s in sidecars {
        let f = fs::File::open(s).map_err(|e| Error::io(s, e))?;
        merge_sidecars(&mut pairs, BufReader::new(f))?;
    }
    Ok(pairs)
}

/// Annotated sentences, joined to a bitext when one is given.
fn load_corpus(args: &CorpusArgs) -> Result<Vec<(Option<BitextPair>, AnnotatedSentence)>> {
    let anns = load_conllu(&args.conllu)?;
    match &args.bitext {
        None => Ok(anns.into_iter().map(|a| (None, a)).collect()),
        Some(b) => {
            let j = join_bitext(load_pairs(b, &args.sidecar)?, anns)?;
            if !j.unmatched.is_empty() {
                log::warn!("{} pairs have no annotation and were skipped", j.unmatched.len());
            }
            Ok(j.records.into_iter().map(|(p, a)| (Some(p), a)).collect())
        }
    }
}

fn load_vectors(path: &Path, schema: &FeatureSchema) -> Result<Vec<FeatureVector>> {
    if path.extension().is_some_and(|e| e == "bin") {
        let f = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let v = read_vector_cache(BufReader::new(f))?;
        if let Some(bad) = v.iter().find(|x| x.values.len() != schema.dimension()) {
            return Err(Error::Dimension {
                expected: schema.dimension(),
                got: bad.values.len(),
            });
        }
        Ok(v)
    } else {
        read_vectors_tsv(read(path)?.as_bytes(), schema.dimension())
    }
}

fn load_scores(path: &Path) -> Result<Vec<(String, f64)>> {
    read_scores_tsv(read(path)?.as_bytes())
}

/// Pairs of `bitext` aligned with the score file by id.
fn scored_pairs(bitext: &Path, scores: &Path) -> Result<(Vec<BitextPair>, Vec<f64>)> {
    let pairs = load_bitext(bitext)?;
    let by_id: std::collections::HashMap<String, f64> = load_scores(scores)?.into_iter().collect();
    let mut kept = Vec::with_capacity(pairs.len());
    let mut s = Vec::with_capacity(pairs.len());
    let mut missing = 0usize;
    for p in pairs {
        match by_id.get(&p.id) {
            Some(&x) => {
                s.push(x);
                kept.push(p);
            }
            None => missing += 1,
        }
    }
    if missing > 0 {
        log::warn!("{missing} pairs in {} have no score and were skipped", bitext.display());
    }
    Ok((kept, s))
}

fn parse_roman_side(s: &str) -> Result<RomanSide> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| Error::Config(format!("roman side `{s}` (source, target, off)")))
}

fn cmd_filter(a: FilterArgs) -> Result<()> {
    let mut cfg = match &a.config {
        Some(p) => serde_json::from_str::<FilterConfig>(&read(p)?).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?,
        None => FilterConfig::default(),
    };
    if let Some(x) = a.roman_max {
        cfg.roman_fraction_max = x;
    }
    if let Some(s) = &a.roman_side {
        cfg.roman_side = parse_roman_side(s)?;
    }
    if let Some(x) = a.ratio_max {
        cfg.length_ratio_max = x;
    }
    if let Some(x) = a.min_loglik {
        cfg.synthetic_loglik_min = x;
    }
    let pairs = load_pairs(&a.bitext, &a.sidecar)?;
    let anns = load_conllu(&a.conllu)?;
    let (kept, report) = if a.synthetic {
        cfg.validate()?;
        synthetic_quality_filter(pairs, &anns, cfg.synthetic_loglik_min)?
    } else {
        filter_pipeline(pairs, &anns, &cfg)?
    };
    emit(a.out.as_deref(), &bitext_to_string(&kept))?;
    let json = serde_json::to_string_pretty(&report)?;
    match &a.report {
        Some(p) => write_atomic(p, json.as_bytes())?,
        None => eprintln!("{json}"),
    }
    Ok(())
}

fn cmd_lm_train(a: LmTrainArgs) -> Result<()> {
    let corpus: Vec<Vec<String>> = load_corpus(&a.corpus)?.iter().map(|(_, s)| normalize_for_lm(s)).collect();
    let lm = NgramModel::train(&corpus, a.order)?;
    emit(a.out.as_deref(), &lm.to_json()?)
}

fn cmd_lm_ppl(a: LmPplArgs) -> Result<()> {
    let lm = NgramModel::from_json(&read(&a.model)?)?;
    let corpus = load_corpus(&a.corpus)?;
    let rows: Vec<String> = corpus
        .par_iter()
        .map(|(_, s)| Ok(format!("{}\t{}\n", s.id, lm.perplexity(&normalize_for_lm(s))?)))
        .collect::<Result<_>>()?;
    emit(a.out.as_deref(), &rows.concat())
}

fn cmd_schema(a: SchemaArgs) -> Result<()> {
    let anns: Vec<AnnotatedSentence> = load_corpus(&a.corpus)?.into_iter().map(|(_, s)| s).collect();
    emit(a.out.as_deref(), &build_schema(&anns, a.nlm)?.to_json()?)
}

fn cmd_vectorize(a: VectorizeArgs) -> Result<()> {
    let schema = FeatureSchema::from_json(&read(&a.schema)?)?;
    let lm = NgramModel::from_json(&read(&a.lm)?)?;
    let corpus = load_corpus(&a.corpus)?;
    let vectors: Vec<FeatureVector> = corpus
        .par_iter()
        .map(|(pair, s)| {
            let slm = lm.perplexity(&normalize_for_lm(s))?;
            let nlm = if schema.has_nlm() {
                let p = pair
                    .as_ref()
                    .ok_or_else(|| Error::Config("the schema has `nlm_ppl`; pass --bitext with its sidecar".into()))?;
                Some(p.sidecar_value(NLM_PPL)?)
            } else {
                None
            };
            vectorize(s, &schema, slm, nlm)
        })
        .collect::<Result<_>>()?;
    let unseen: usize = vectors.iter().map(|v| v.unseen_labels).sum();
    if unseen > 0 {
        log::warn!("{unseen} labels outside the schema were ignored");
    }
    if let Some(p) = &a.cache {
        let mut bytes = Vec::new();
        write_vector_cache(&mut bytes, &vectors).map_err(|e| Error::Internal(e.to_string()))?;
        write_atomic(p, &bytes)?;
    }
    emit(a.out.as_deref(), &vectors_to_tsv(&vectors))
}

fn cmd_score_fit(a: ScoreFitArgs) -> Result<()> {
    let schema = FeatureSchema::from_json(&read(&a.schema)?)?;
    let vectors = load_vectors(&a.vectors, &schema)?;
    let normalization: Normalization = a.normalization.parse().map_err(Error::Config)?;
    let model = ScoreModel::fit(&vectors, &schema, ScoreOptions { k: a.k, normalization })?;
    if let Some(p) = &a.loadings {
        let tsv: String = model
            .export_loadings()
            .iter()
            .map(|(f, m)| format!("{f}\t{m}\n"))
            .collect();
        write_atomic(p, tsv.as_bytes())?;
    }
    emit(a.out.as_deref(), &model.to_json()?)
}

fn cmd_score(a: ScoreArgs) -> Result<()> {
    let schema = FeatureSchema::from_json(&read(&a.schema)?)?;
    let model = ScoreModel::from_json(&read(&a.model)?)?;
    model.check_schema(&schema)?;
    let vectors = load_vectors(&a.vectors, &schema)?;
    emit(a.out.as_deref(), &scores_to_tsv(&model.score_all(&vectors)?, a.all_components))
}

fn cmd_cluster(a: ClusterArgs) -> Result<()> {
    let rows = load_scores(&a.scores)?;
    let scores: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let model = match &a.model {
        Some(p) => ClusterModel::from_json(&read(p)?)?,
        None => {
            let m = fit_cluster_model(&scores, a.k, a.seed)?;
            let json = m.to_json()?;
            match &a.out_model {
                Some(p) => write_atomic(p, json.as_bytes())?,
                None if a.assignments.is_some() => eprintln!("{json}"),
                None => emit(None, &json)?,
            }
            m
        }
    };
    let ids: Vec<String> = rows.into_iter().map(|r| r.0).collect();
    let tsv = assignments_to_tsv(&ids, &assign_all(&model, &scores)?);
    match (&a.assignments, &a.model) {
        (Some(p), _) => write_atomic(p, tsv.as_bytes()),
        (None, Some(_)) => emit(None, &tsv),
        (None, None) => Ok(()),
    }
}

fn cmd_sample(a: SampleArgs) -> Result<()> {
    let model = ClusterModel::from_json(&read(&a.cluster_model)?)?;
    let (pairs, scores) = scored_pairs(&a.bitext, &a.scores)?;
    let synthetic = match (&a.synthetic, &a.synthetic_scores) {
        (Some(b), Some(s)) => {
            let (p, sc) = scored_pairs(b, s)?;
            Some(ClusteredCorpus::build(p, &sc, &model, true)?)
        }
        (None, None) => None,
        _ => return Err(Error::Config("--synthetic and --synthetic-scores go together".into())),
    };
    let (out, manifest) = match (&a.config, a.baseline.as_deref()) {
        (Some(c), None) => {
            let corpus = ClusteredCorpus::build(pairs, &scores, &model, false)?;
            let mut cfg = CurationConfig::new(Percents::parse(c)?, a.tds);
            cfg.seed = a.seed;
            cfg.allow_augmentation = !a.no_augmentation;
            sample_configuration(&corpus, synthetic.as_ref(), &cfg)?
        }
        (None, Some("proportional")) => {
            let corpus = ClusteredCorpus::build(pairs, &scores, &model, false)?;
            baseline_proportional(&corpus, synthetic.as_ref(), &model, a.tds)?
        }
        (None, Some("random")) => {
            let s = random_sample(&pairs, a.tds, a.seed)?;
            let m = random_manifest(&s, a.tds, a.seed);
            (s, m)
        }
        (None, Some(other)) => return Err(Error::Config(format!("unknown baseline `{other}` (proportional, random)"))),
        (None, None) => return Err(Error::Config("pass --config a_b_c_d or --baseline".into())),
        (Some(_), Some(_)) => unreachable!("clap rejects both"),
    };
    let json = manifest.to_json()?;
    match &a.manifest {
        Some(p) => write_atomic(p, json.as_bytes())?,
        None => eprintln!("{json}"),
    }
    emit(a.out.as_deref(), &bitext_to_string(&out))
}

fn cmd_order(a: OrderArgs) -> Result<()> {
    let strategy: OrderStrategy = a.strategy.parse()?;
    let (pairs, scores) = scored_pairs(&a.bitext, &a.scores)?;
    let plan = stepwise_order(&scores, strategy, a.increment, a.seed)?;
    let ordered: Vec<BitextPair> = plan.order.iter().map(|&i| pairs[i].clone()).collect();
    let cuts: String = plan.cuts.iter().map(|c| format!("{c}\n")).collect();
    match &a.cuts {
        Some(p) => write_atomic(p, cuts.as_bytes())?,
        None => eprint!("{cuts}"),
    }
    emit(a.out.as_deref(), &bitext_to_string(&ordered))
}

fn cmd_enum(a: EnumArgs) -> Result<()> {
    let p = Percents::parse(&a.set)?;
    let configs = enumerate_configurations(&p.values())?;
    let mut text: String = configs.iter().map(|c| format!("{c}\n")).collect();
    text.push_str(&format!("# {} configurations\n", configs.len()));
    emit(None, &text)
}

fn cmd_report(a: ReportArgs) -> Result<()> {
    let schema = FeatureSchema::from_json(&read(&a.schema)?)?;
    let vectors = load_vectors(&a.vectors, &schema)?;
    let model = ClusterModel::from_json(&read(&a.cluster_model)?)?;
    let score_model = match &a.score_model {
        Some(p) => Some(ScoreModel::from_json(&read(p)?)?),
        None => None,
    };
    let by_id: std::collections::HashMap<String, f64> = load_scores(&a.scores)?.into_iter().collect();
    let scores: Vec<f64> = vectors
        .iter()
        .map(|v| {
            by_id
                .get(&v.id)
                .copied()
                .ok_or_else(|| Error::Data(format!("{} has a vector but no score", v.id)))
        })
        .collect::<Result<_>>()?;
    let mut report = report_clusters(&ReportInput {
        scores: &scores,
        vectors: &vectors,
        schema: &schema,
        cluster_model: &model,
        score_model: score_model.as_ref(),
        features: &a.features,
        bins: a.bins,
    })?;
    if let Some(p) = &a.external_scores {
        let ext: Vec<f64> = load_scores(p)?.into_iter().map(|r| r.1).collect();
        report.external_distribution = Some(cluster_distribution(&ext, &model)?);
    }
    if let Some(p) = &a.tsv {
        write_atomic(p, report.to_tsv().as_bytes())?;
    }
    emit(a.out.as_deref(), &report.to_json()?)
}

fn cmd_run(a: RunArgs) -> Result<()> {
    let mut cfg = PipelineConfig::load(&a.config)?;
    if let Some(p) = a.output_dir {
        cfg.output_dir = p;
    }
    if let Some(p) = a.bitext {
        cfg.bitext = p;
    }
    if let Some(p) = a.conllu {
        cfg.conllu = p;
    }
    if !a.sidecar.is_empty() {
        cfg.sidecars = a.sidecar;
    }
    if a.synthetic_bitext.is_some() {
        cfg.synthetic_bitext = a.synthetic_bitext;
    }
    if a.synthetic_conllu.is_some() {
        cfg.synthetic_conllu = a.synthetic_conllu;
    }
    if !a.synthetic_sidecar.is_empty() {
        cfg.synthetic_sidecars = a.synthetic_sidecar;
    }
    if !a.configurations.is_empty() {
        cfg.configurations = a.configurations;
    }
    if !a.baselines.is_empty() {
        cfg.baselines = a.baselines;
    }
    if a.no_augmentation {
        cfg.allow_augmentation = false;
    }
    if let Some(x) = a.roman_max {
        cfg.filter.roman_fraction_max = x;
    }
    if let Some(s) = &a.roman_side {
        cfg.filter.roman_side = parse_roman_side(s)?;
    }
    if let Some(x) = a.ratio_max {
        cfg.filter.length_ratio_max = x;
    }
    if let Some(x) = a.min_loglik {
        cfg.filter.synthetic_loglik_min = x;
    }
    if a.no_one_to_one {
        cfg.filter.enforce_one_to_one = false;
    }
    if a.no_single_sentence {
        cfg.filter.enforce_single_sentence = false;
    }
    if !a.report_features.is_empty() {
        cfg.report.features = a.report_features;
    }
    if let Some(x) = a.report_bins {
        cfg.report.bins = x;
    }
    if a.external_scores.is_some() {
        cfg.report.external_scores = a.external_scores;
    }
    if let Some(x) = a.seed {
        cfg.seed = x;
    }
    if let Some(x) = a.tds {
        cfg.tds = x;
    }
    if let Some(x) = a.lm_order {
        cfg.lm_order = x;
    }
    if let Some(x) = a.pca_k {
        cfg.pca_k = x;
    }
    if let Some(x) = a.cluster_k {
        cfg.cluster_k = x;
    }
    if let Some(x) = a.normalization {
        cfg.normalization = x.parse().map_err(Error::Config)?;
    }
    if let Some(x) = a.use_nlm {
        cfg.use_nlm = x;
    }
    let outcome = run_pipeline(&cfg, &RunOptions { resume: a.resume })?;
    for s in &outcome.stages_reused {
        log::info!("stage {s}: reused");
    }
    for s in &outcome.stages_run {
        log::info!("stage {s}: ran");
    }
    eprintln!(
        "wrote {} artifacts to {}",
        outcome.index.stages.values().map(|s| s.files.len()).sum::<usize>(),
        cfg.output_dir.display()
    );
    Ok(())
}

pub fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Filter(a) => cmd_filter(a),
        Command::LmTrain(a) => cmd_lm_train(a),
        Command::LmPpl(a) => cmd_lm_ppl(a),
        Command::Schema(a) => cmd_schema(a),
        Command::Vectorize(a) => cmd_vectorize(a),
        Command::ScoreFit(a) => cmd_score_fit(a),
        Command::Score(a) => cmd_score(a),
        Command::Cluster(a) => cmd_cluster(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Order(a) => cmd_order(a),
        Command::EnumConfigs(a) => cmd_enum(a),
        Command::Report(a) => cmd_report(a),
        Command::Run(a) => cmd_run(a),
    }
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match std::panic::catch_unwind(|| dispatch(cli)) {
        Ok(Ok(())) => 0,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
        Err(_) => 3,
    }
}
