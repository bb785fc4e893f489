//! Fit the complexity score on the demo corpus and show the strongest
//! loadings and the extremes of the score range.

use std::path::Path;

use lalita::bitext::load_bitext;
use lalita::conllu::{join_bitext, load_conllu};
use lalita::features::{build_schema, vectorize};
use lalita::filter::{filter_pipeline, FilterConfig};
use lalita::lm::{normalize_for_lm, NgramModel};
use lalita::score::{fit_score_model, spearman};

fn main() -> lalita::error::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/demo");
    let anns = load_conllu(&dir.join("annotations.conllu"))?;
    let (pairs, _) = filter_pipeline(load_bitext(&dir.join("bitext.tsv"))?, &anns, &FilterConfig::default())?;
    let records = join_bitext(pairs, anns)?.records;
    let sents: Vec<_> = records.iter().map(|r| r.1.clone()).collect();

    let schema = build_schema(&sents, false)?;
    let lm = NgramModel::train(&sents.iter().map(normalize_for_lm).collect::<Vec<_>>(), 5)?;
    let vectors = sents
        .iter()
        .map(|s| vectorize(s, &schema, lm.perplexity(&normalize_for_lm(s))?, None))
        .collect::<lalita::error::Result<Vec<_>>>()?;
    let model = fit_score_model(&vectors, &schema, 10)?;

    println!("{} features, {} dropped as constant", schema.dimension(), model.dropped.len());
    println!("explained variance: {:.3?}", model.explained_variance_ratio);
    println!("top loadings:");
    for (name, m) in model.export_loadings().iter().take(8) {
        println!("  {name:<16} {m:.4}");
    }

    let scores = model.score_all(&vectors)?;
    let mut ranked: Vec<(f64, &str)> = scores.iter().zip(&records).map(|(s, r)| (s.lalita, r.0.source.as_str())).collect();
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0));
    println!("\nsimplest:");
    for (s, text) in &ranked[..3] {
        println!("  {s:+.3}  {text}");
    }
    println!("most complex:");
    for (s, text) in ranked.iter().rev().take(3) {
        println!("  {s:+.3}  {text}");
    }

    let lens: Vec<f64> = records.iter().map(|r| r.1.len() as f64).collect();
    let vals: Vec<f64> = scores.iter().map(|s| s.lalita).collect();
    println!("\nSpearman(score, length) = {:.4}", spearman(&vals, &lens));
    Ok(())
}
