//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::collections::{BTreeSet, HashMap};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lalita::bitext::{load_bitext, whitespace_tokens};
use lalita::cluster::{jenks_optimize, partition_sse, silhouette, sorted_copy, ClusterModel};
use lalita::conllu::{join_bitext, load_conllu, AnnotatedSentence};
use lalita::features::{build_schema, vectorize, FeatureSchema, FeatureVector, SENTENCE_LENGTH};
use lalita::filter::{filter_pipeline, synthetic_quality_filter, FilterConfig, Rule};
use lalita::lm::{normalize_for_lm, NgramModel};
use lalita::pipeline::{run_pipeline, PipelineConfig, RunOptions};
use lalita::sampler::{
    baseline_proportional, enumerate_configurations, ClusteredCorpus, Manifest, Percents,
};
use lalita::score::{fit_score_model, read_scores_tsv, spearman, ScoreModel};

type Outcome = Result<String, String>;

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

// 1

fn configuration_counts() -> Outcome {
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
    let mut total = 0;
    for (set, want) in cases {
        let got = enumerate_configurations(set).map_err(e2s)?;
        ensure(got.len() == want, || format!("{set:?}: {} configurations, want {want}", got.len()))?;
        let distinct: BTreeSet<&Percents> = got.iter().collect();
        ensure(distinct.len() == got.len(), || format!("{set:?}: duplicates"))?;
        total += got.len();
    }
    ensure(total == 61, || format!("{total} configurations in total, want 61"))?;
    Ok("9 multisets, 61 configurations, exact".into())
}

// 2

fn tie_tolerance(total: f64) -> f64 {
    1e-9 * total
}

/// Minimum-SSE partition by exhaustive enumeration of cut sets; among
/// near-optimal partitions the lexicographically smallest cut set wins.
fn brute_jenks(sorted: &[f64], k: usize) -> (Vec<usize>, f64) {
    let valid: Vec<usize> = (1..sorted.len()).filter(|&i| sorted[i - 1] < sorted[i]).collect();
    let mut all = Vec::new();
    let mut cur = Vec::new();
    fn rec(valid: &[usize], start: usize, need: usize, cur: &mut Vec<usize>, sorted: &[f64], out: &mut Vec<(Vec<usize>, f64)>) {
        if need == 0 {
            out.push((cur.clone(), partition_sse(sorted, cur)));
            return;
        }
        for t in start..valid.len() {
            cur.push(valid[t]);
            rec(valid, t + 1, need - 1, cur, sorted, out);
            cur.pop();
        }
    }
    rec(&valid, 0, k - 1, &mut cur, sorted, &mut all);
    let best = all.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
    let tol = tie_tolerance(partition_sse(sorted, &[]));
    all.into_iter().find(|x| x.1 <= best + tol).expect("at least one partition")
}

fn jenks_vs_brute() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checked = 0;
    let mut worst = 0.0f64;
    while checked < 500 {
        let n = rng.gen_range(5..=30);
        let k = rng.gen_range(2..=5);
        // every third array draws from a small integer range to force ties
        let xs: Vec<f64> = if checked % 3 == 0 {
            (0..n).map(|_| rng.gen_range(0..8) as f64).collect()
        } else {
            (0..n).map(|_| rng.gen_range(-50.0..50.0)).collect()
        };
        let sorted = sorted_copy(&xs);
        let distinct = sorted.windows(2).filter(|w| w[0] < w[1]).count() + 1;
        if distinct < k {
            continue;
        }
        let j = jenks_optimize(&xs, k).map_err(e2s)?;
        let (pos, sse) = brute_jenks(&sorted, k);
        let rel = (j.sse - sse).abs() / sse.abs().max(1e-300);
        let ok = if sse == 0.0 { j.sse == 0.0 } else { rel <= 1e-12 };
        ensure(ok, || format!("n={n} k={k}: sse {} vs brute {sse}", j.sse))?;
        ensure(j.positions == pos, || format!("n={n} k={k}: breaks {:?} vs brute {pos:?}", j.positions))?;
        if sse > 0.0 {
            worst = worst.max(rel);
        }
        checked += 1;
    }
    Ok(format!("500 arrays, max relative SSE gap {worst:.1e}, break positions equal"))
}

// 3

fn kn_normalization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut contexts = 0usize;
    for c in 0..20 {
        let order = 1 + c % 5;
        let vocab: Vec<String> = (0..rng.gen_range(2..=12)).map(|i| format!("w{i}")).collect();
        let mut corpus = Vec::new();
        let mut tokens = 0;
        loop {
            let len = rng.gen_range(1..=12);
            if tokens + len > 200 {
                break;
            }
            tokens += len;
            corpus.push((0..len).map(|_| vocab[rng.gen_range(0..vocab.len())].clone()).collect::<Vec<_>>());
        }
        let m = NgramModel::train(&corpus, order).map_err(e2s)?;
        let mut ctxs: Vec<Vec<u32>> = m.contexts().map(<[u32]>::to_vec).collect();
        ctxs.push(Vec::new());
        ctxs.push(vec![m.word_id("<unk>"); order.saturating_sub(1)]);
        for ctx in ctxs {
            let sum: f64 = m.predictable_ids().map(|w| m.prob(&ctx, w)).sum();
            let dev = (sum - 1.0).abs();
            ensure(dev <= 1e-6, || format!("corpus {c} order {order}: context {ctx:?} sums to {sum}"))?;
            worst = worst.max(dev);
            contexts += 1;
        }
    }
    Ok(format!("20 corpora, {contexts} contexts, max |sum-1| {worst:.1e}"))
}

// demo corpus shared by 4 and 5

struct Demo {
    records: Vec<(lalita::bitext::BitextPair, AnnotatedSentence)>,
    schema: FeatureSchema,
    lm: NgramModel,
    vectors: Vec<FeatureVector>,
}

/// The filtered demo corpus plus `extra` sentences. LM, schema and vectors
/// cover both; `records` holds the demo pairs only, and their vectors come first.
fn demo(extra: &[AnnotatedSentence]) -> Result<Demo, String> {
    let pairs = load_bitext(&data("demo/bitext.tsv")).map_err(e2s)?;
    let anns = load_conllu(&data("demo/annotations.conllu")).map_err(e2s)?;
    let (kept, _) = filter_pipeline(pairs, &anns, &FilterConfig::default()).map_err(e2s)?;
    let records = join_bitext(kept, anns).map_err(e2s)?.records;
    let mut sents: Vec<AnnotatedSentence> = records.iter().map(|r| r.1.clone()).collect();
    sents.extend_from_slice(extra);
    let schema = build_schema(&sents, false).map_err(e2s)?;
    let corpus: Vec<Vec<String>> = sents.iter().map(normalize_for_lm).collect();
    let lm = NgramModel::train(&corpus, 5).map_err(e2s)?;
    let vectors = sents
        .iter()
        .map(|s| vectorize(s, &schema, lm.perplexity(&normalize_for_lm(s))?, None))
        .collect::<lalita::error::Result<Vec<_>>>()
        .map_err(e2s)?;
    Ok(Demo {
        records,
        schema,
        lm,
        vectors,
    })
}

// 4

fn pca_correctness() -> Outcome {
    let d = demo(&[])?;
    let model = fit_score_model(&d.vectors, &d.schema, 10).map_err(e2s)?;
    let mut dev = 0.0f64;
    for (i, a) in model.components.iter().enumerate() {
        for (j, b) in model.components.iter().enumerate() {
            let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
            dev = dev.max((dot - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    ensure(dev <= 1e-9, || format!("components deviate from orthonormal by {dev:e}"))?;
    let evr = &model.explained_variance_ratio;
    ensure(evr.windows(2).all(|w| w[0] >= w[1]), || format!("explained variance not nonincreasing: {evr:?}"))?;

    // every feature frozen at one demo row except sentenceLength
    let li = d.schema.index_of(SENTENCE_LENGTH).ok_or("no sentenceLength")?;
    let base = &d.vectors[0].values;
    let rows: Vec<FeatureVector> = (1..=60)
        .map(|len| {
            let mut values = base.clone();
            values[li] = len as f64;
            FeatureVector {
                id: format!("len{len}"),
                values,
                unseen_labels: 0,
            }
        })
        .collect();
    let lo = fit_score_model(&rows, &d.schema, 10).map_err(e2s)?;
    let scores: Vec<f64> = lo.score_all(&rows).map_err(e2s)?.iter().map(|s| s.lalita).collect();
    ensure(scores.windows(2).all(|w| w[0] < w[1]), || "score not strictly increasing in length".into())?;
    let loading = lo.components[0][li].abs();
    ensure((loading - 1.0).abs() <= 1e-9, || format!("sentenceLength loading {loading}"))?;
    Ok(format!(
        "{} components, orthonormality dev {dev:.1e}; length-only loading |{loading}|, monotone over 60 rows",
        model.k()
    ))
}

// 5

fn score_of(model: &ScoreModel, schema: &FeatureSchema, lm: &NgramModel, s: &AnnotatedSentence) -> Result<f64, String> {
    let v = vectorize(s, schema, lm.perplexity(&normalize_for_lm(s)).map_err(e2s)?, None).map_err(e2s)?;
    Ok(model.score(&v).map_err(e2s)?.lalita)
}

fn sign_semantics() -> Outcome {
    // the fixtures join the corpus, as the worked examples are corpus members
    let ladder = load_conllu(&data("fixtures/complexity_ladder.conllu")).map_err(e2s)?;
    let d = demo(&ladder)?;
    let model = fit_score_model(&d.vectors, &d.schema, 10).map_err(e2s)?;
    let real = &d.vectors[..d.records.len()];
    let scores: Vec<f64> = model.score_all(real).map_err(e2s)?.iter().map(|s| s.lalita).collect();
    let lens: Vec<f64> = d.records.iter().map(|r| whitespace_tokens(&r.0.source) as f64).collect();
    let rho = spearman(&scores, &lens);
    ensure(rho >= 0.8, || format!("Spearman(score, tokens) = {rho:.4} < 0.8"))?;

    let by_id: HashMap<&str, &AnnotatedSentence> = ladder.iter().map(|s| (s.id.as_str(), s)).collect();
    let mut got = Vec::new();
    for (id, len, verbs) in [("ladder_short", 3, 0), ("ladder_medium", 40, 2), ("ladder_long", 72, 6)] {
        let s = by_id.get(id).ok_or_else(|| format!("fixture {id} missing"))?;
        let v = s.tokens.iter().filter(|t| t.upos.as_str() == "VERB").count();
        ensure(s.len() == len && v == verbs, || format!("{id}: {} tokens, {v} verbs", s.len()))?;
        got.push(score_of(&model, &d.schema, &d.lm, s)?);
    }
    ensure(got[0] < got[1] && got[1] < got[2], || format!("fixture scores not increasing: {got:?}"))?;
    Ok(format!(
        "Spearman {rho:.4} over {} pairs; fixtures 3/40/72 tokens score {:.4} < {:.4} < {:.4}",
        scores.len(),
        got[0],
        got[1],
        got[2]
    ))
}

// 6

fn filter_goldens() -> Outcome {
    let pairs = load_bitext(&data("fixtures/filter8.tsv")).map_err(e2s)?;
    let anns = load_conllu(&data("fixtures/filter8.conllu")).map_err(e2s)?;
    ensure(pairs.len() == 8, || format!("{} pairs in fixture", pairs.len()))?;
    let (kept, report) = filter_pipeline(pairs, &anns, &FilterConfig::default()).map_err(e2s)?;
    for rule in [Rule::Dedup, Rule::RomanScript, Rule::LengthRatio, Rule::OneToMany, Rule::SingleSentence] {
        ensure(report.removed(rule) == 1, || format!("{} removed {}", rule.name(), report.removed(rule)))?;
    }
    let ids: Vec<&str> = kept.iter().map(|p| p.id.as_str()).collect();
    ensure(ids == ["f1", "f7", "f8"], || format!("survivors {ids:?}"))?;
    // f7 sits at ratio 4.0 exactly and f8 at roman fraction 0.35 exactly
    ensure(lalita::filter::roman_fraction(&kept[2].target) == 0.35, || "f8 fraction drifted".into())?;

    let syn = load_bitext(&data("fixtures/filter_synthetic.tsv")).map_err(e2s)?;
    let syn_anns = load_conllu(&data("fixtures/filter_synthetic.conllu")).map_err(e2s)?;
    let (skept, _) = synthetic_quality_filter(syn, &syn_anns, -1.0).map_err(e2s)?;
    let sids: Vec<&str> = skept.iter().map(|p| p.id.as_str()).collect();
    ensure(sids == ["s1", "s3"], || format!("synthetic survivors {sids:?}"))?;
    Ok("one removal per rule; ratio 4.0, roman 0.35 and avg_logprob -1.0 kept".into())
}

// 7

fn sampler_contract(run_dir: &Path) -> Outcome {
    let manifest: Manifest = serde_json::from_str(
        &std::fs::read_to_string(run_dir.join("samples/0_0_0_100.manifest.json")).map_err(e2s)?,
    )
    .map_err(e2s)?;
    let quota_sum: usize = manifest.clusters.iter().map(|c| c.quota).sum();
    ensure(quota_sum == manifest.tds, || format!("quotas sum to {quota_sum}, tds {}", manifest.tds))?;
    for c in &manifest.clusters {
        ensure(c.real + c.synthetic == c.quota, || format!("cluster {}: {c:?}", c.cluster))?;
    }
    let c3 = &manifest.clusters[3];
    ensure(c3.synthetic > 0, || "no deficit was engineered".into())?;

    let assignments = |name: &str| -> Result<HashMap<String, usize>, String> {
        let text = std::fs::read_to_string(run_dir.join(name)).map_err(e2s)?;
        text.lines()
            .map(|l| {
                let (id, c) = l.split_once('\t').ok_or("bad assignment line")?;
                Ok((id.to_string(), c.parse::<usize>().map_err(e2s)?))
            })
            .collect()
    };
    let real = assignments("assignments.tsv")?;
    let synthetic = assignments("synthetic_assignments.tsv")?;
    let real_in_c3 = real.values().filter(|&&c| c == 3).count();
    ensure(c3.real == real_in_c3, || format!("{} of {real_in_c3} real pairs taken before synthetic", c3.real))?;
    let sample = load_bitext(&run_dir.join("samples/0_0_0_100.tsv")).map_err(e2s)?;
    let mut seen_synthetic = false;
    for p in &sample {
        match (real.get(&p.id), synthetic.get(&p.id)) {
            (Some(3), None) => {
                ensure(!seen_synthetic, || format!("real pair {} follows a synthetic pair", p.id))?;
            }
            (None, Some(3)) => seen_synthetic = true,
            other => return Err(format!("{} drawn from the wrong cluster: {other:?}", p.id)),
        }
    }

    // baselineP shares at tds = 100K
    let model = ClusterModel {
        format: "lalita-cluster-model".into(),
        k: 4,
        breaks: vec![1.0, 2.0, 3.0],
        counts: vec![2183, 2515, 2889, 2413],
        sse: 0.0,
        min: 0.5,
        max: 3.5,
        silhouette: None,
        silhouette_sample: None,
    };
    let n = 30_000;
    let pairs: Vec<_> = (0..4 * n)
        .map(|i| lalita::bitext::BitextPair::new(format!("b{i}"), "a b", "क ख"))
        .collect();
    let scores: Vec<f64> = (0..4 * n).map(|i| 0.5 + (i / n) as f64 + 0.25).collect();
    let corpus = ClusteredCorpus::build(pairs, &scores, &model, false).map_err(e2s)?;
    let (_, m) = baseline_proportional(&corpus, None, &model, 100_000).map_err(e2s)?;
    let quotas: Vec<usize> = m.clusters.iter().map(|c| c.quota).collect();
    ensure(quotas == [21830, 25150, 28890, 24130], || format!("baselineP quotas {quotas:?}"))?;
    Ok(format!(
        "0_0_0_100 at tds {}: cluster 3 {} real + {} synthetic, reals first; baselineP {quotas:?}",
        manifest.tds, c3.real, c3.synthetic
    ))
}

// 8

fn brute_silhouette(xs: &[f64], ls: &[usize]) -> f64 {
    let n = xs.len();
    let mut total = 0.0;
    for i in 0..n {
        let own: Vec<usize> = (0..n).filter(|&j| j != i && ls[j] == ls[i]).collect();
        if own.is_empty() {
            continue;
        }
        let a = own.iter().map(|&j| (xs[i] - xs[j]).abs()).sum::<f64>() / own.len() as f64;
        let mut b = f64::INFINITY;
        for c in ls.iter().copied().collect::<BTreeSet<_>>() {
            if c == ls[i] {
                continue;
            }
            let other: Vec<usize> = (0..n).filter(|&j| ls[j] == c).collect();
            b = b.min(other.iter().map(|&j| (xs[i] - xs[j]).abs()).sum::<f64>() / other.len() as f64);
        }
        if a.max(b) > 0.0 {
            total += (b - a) / a.max(b);
        }
    }
    total / n as f64
}

fn silhouette_vs_brute() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < 100 {
        let n = rng.gen_range(2..=200);
        let k = rng.gen_range(2..=5);
        let xs: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let ls: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
        if ls.iter().collect::<BTreeSet<_>>().len() < 2 {
            continue;
        }
        let got = silhouette(&xs, &ls).map_err(e2s)?;
        let want = brute_silhouette(&xs, &ls);
        let err = (got - want).abs() / want.abs().max(1e-300);
        let ok = if want == 0.0 { got == 0.0 } else { err <= 1e-12 };
        ensure(ok, || format!("n={n} k={k}: {got} vs brute {want}"))?;
        if want != 0.0 {
            worst = worst.max(err);
        }
        done += 1;
    }
    Ok(format!("100 instances, max relative error {worst:.1e}"))
}

// 9

fn kovind_counts() -> Outcome {
    let sents = load_conllu(&data("fixtures/kovind.conllu")).map_err(e2s)?;
    ensure(sents.len() == 1, || format!("{} sentences in fixture", sents.len()))?;
    let schema = build_schema(&sents, false).map_err(e2s)?;
    let v = vectorize(&sents[0], &schema, 1.0, None).map_err(e2s)?;
    let want = [
        ("PER", 2.0),
        ("ORG", 1.0),
        ("VERB", 1.0),
        ("AUX", 1.0),
        ("Tense_Past", 2.0),
        ("ADP", 5.0),
        (SENTENCE_LENGTH, 24.0),
    ];
    for (name, n) in want {
        let got = v.get(&schema, name).ok_or_else(|| format!("no feature {name}"))?;
        ensure(got == n, || format!("{name} = {got}, want {n}"))?;
    }
    Ok("PER=2 ORG=1 VERB=1 AUX=1 Tense_Past=2 ADP=5 sentenceLength=24".into())
}

// 10

fn collect_files(root: &Path) -> Result<Vec<(PathBuf, Vec<u8>)>, String> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).map_err(e2s)? {
            let p = entry.map_err(e2s)?.path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let bytes = std::fs::read(&p).map_err(e2s)?;
                out.push((p.strip_prefix(root).unwrap().to_path_buf(), bytes));
            }
        }
    }
    out.sort();
    Ok(out)
}

fn demo_run(dir: &Path) -> Result<(), String> {
    let mut cfg = PipelineConfig::load(&data("demo/pipeline.json")).map_err(e2s)?;
    cfg.output_dir = dir.to_path_buf();
    run_pipeline(&cfg, &RunOptions::default()).map_err(e2s)?;
    Ok(())
}

fn determinism(a: &Path, b: &Path) -> Outcome {
    demo_run(a)?;
    demo_run(b)?;
    let fa = collect_files(a)?;
    let fb = collect_files(b)?;
    let names = |f: &[(PathBuf, Vec<u8>)]| f.iter().map(|x| x.0.clone()).collect::<Vec<_>>();
    ensure(names(&fa) == names(&fb), || "artifact sets differ".into())?;
    for (x, y) in fa.iter().zip(&fb) {
        ensure(x.1 == y.1, || format!("{} differs", x.0.display()))?;
    }
    // the run's own score file should agree with criterion 5
    let scores = read_scores_tsv(std::fs::read(a.join("scores.tsv")).map_err(e2s)?.as_slice()).map_err(e2s)?;
    let pairs: HashMap<String, usize> = load_bitext(&a.join("filtered.tsv"))
        .map_err(e2s)?
        .into_iter()
        .map(|p| (p.id, whitespace_tokens(&p.source)))
        .collect();
    let lens: Vec<f64> = scores.iter().map(|s| pairs[&s.0] as f64).collect();
    let vals: Vec<f64> = scores.iter().map(|s| s.1).collect();
    let rho = spearman(&vals, &lens);
    ensure(rho >= 0.8, || format!("pipeline Spearman {rho:.4}"))?;
    Ok(format!("{} artifacts byte-identical across two runs (pipeline Spearman {rho:.4})", fa.len()))
}

fn main() {
    let tmp = tempfile::tempdir().expect("tempdir");
    let (run_a, run_b) = (tmp.path().join("a"), tmp.path().join("b"));

    type Check<'a> = Box<dyn FnOnce() -> Outcome + 'a>;
    let criteria: Vec<(u32, &str, Duration, Check)> = vec![
        (10, "end-to-end determinism", Duration::from_secs(120), Box::new(|| determinism(&run_a, &run_b))),
        (1, "configuration enumeration", Duration::from_secs(1), Box::new(configuration_counts)),
        (2, "Fisher-Jenks vs brute force", Duration::from_secs(30), Box::new(jenks_vs_brute)),
        (3, "Kneser-Ney normalization", Duration::from_secs(30), Box::new(kn_normalization)),
        (4, "PCA correctness", Duration::from_secs(10), Box::new(pca_correctness)),
        (5, "score sign and semantics", Duration::from_secs(30), Box::new(sign_semantics)),
        (6, "filter goldens", Duration::from_secs(1), Box::new(filter_goldens)),
        (7, "sampler contract", Duration::from_secs(10), Box::new(|| sampler_contract(&run_a))),
        (8, "silhouette vs brute force", Duration::from_secs(10), Box::new(silhouette_vs_brute)),
        (9, "worked-example feature counts", Duration::from_secs(1), Box::new(kovind_counts)),
    ];

    let mut results = Vec::new();
    for (n, name, limit, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}")),
            other => other,
        };
        results.push((n, name, elapsed, outcome));
    }
    results.sort_by_key(|r| r.0);
    let mut failed = 0;
    for (n, name, elapsed, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS criterion {n:>2} {name}: {detail} [{elapsed:.2?}]"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {n:>2} {name}: {why} [{elapsed:.2?}]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
