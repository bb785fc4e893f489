//! Run the hygiene rules over the crafted 8-pair fixture and the synthetic
//! log-likelihood filter over its companion.

use std::path::Path;

use lalita::bitext::load_bitext;
use lalita::conllu::load_conllu;
use lalita::filter::{filter_pipeline, roman_fraction, synthetic_quality_filter, FilterConfig};

fn main() -> lalita::error::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/fixtures");
    let pairs = load_bitext(&dir.join("filter8.tsv"))?;
    let anns = load_conllu(&dir.join("filter8.conllu"))?;
    for p in &pairs {
        println!("{:<3} roman={:.2}  {}", p.id, roman_fraction(&p.target), p.source);
    }

    let (kept, report) = filter_pipeline(pairs, &anns, &FilterConfig::default())?;
    println!("\nremoved per rule:");
    for (rule, n) in &report.counts_removed_by_rule {
        println!("  {rule:<16} {n}");
    }
    println!("survivors: {:?}", kept.iter().map(|p| &p.id).collect::<Vec<_>>());

    let syn = load_bitext(&dir.join("filter_synthetic.tsv"))?;
    let syn_anns = load_conllu(&dir.join("filter_synthetic.conllu"))?;
    let (kept, _) = synthetic_quality_filter(syn, &syn_anns, -1.0)?;
    println!("\nsynthetic pairs with avg_logprob >= -1.0:");
    for p in kept {
        println!("  {} {:?}", p.id, p.sidecar);
    }
    Ok(())
}
