//! Enumerate cluster mixes, compute quotas, and draw one curated corpus from
//! the demo run (real pairs first, synthetic pairs for any deficit).

use std::path::Path;

use lalita::pipeline::{run_pipeline, PipelineConfig, RunOptions};
use lalita::sampler::{enumerate_configurations, CurationConfig, Manifest, Percents};

fn main() -> lalita::error::Result<()> {
    for set in [[60.0, 20.0, 20.0, 0.0], [33.34, 33.34, 33.34, 0.0]] {
        let configs = enumerate_configurations(&set)?;
        let names: Vec<String> = configs.iter().map(|c| c.name()).collect();
        println!("{set:?}: {} configurations\n  {}", configs.len(), names.join(" "));
    }

    let cfg = CurationConfig::new(Percents::parse("21.83_25.15_28.89_24.13")?, 100_000);
    println!("\nquotas at tds=100000: {:?}", cfg.quotas()?);

    let out = std::env::temp_dir().join("lalita-curate-example");
    let mut pcfg = PipelineConfig::load(&Path::new(env!("CARGO_MANIFEST_DIR")).join("data/demo/pipeline.json"))?;
    pcfg.output_dir = out.clone();
    pcfg.configurations = vec!["0_0_0_100".into(), "40_30_20_10".into()];
    pcfg.baselines = vec!["proportional".into()];
    run_pipeline(&pcfg, &RunOptions::default())?;

    for name in ["0_0_0_100", "40_30_20_10", "baselineP"] {
        let text = std::fs::read_to_string(out.join(format!("samples/{name}.manifest.json")))
            .map_err(|e| lalita::error::Error::io(&out, e))?;
        let m: Manifest = serde_json::from_str(&text)?;
        println!("\n{name}: {} source tokens", m.tokens.source);
        for c in m.clusters {
            println!("  cluster {}: quota {:>3} = {:>3} real + {:>3} synthetic", c.cluster, c.quota, c.real, c.synthetic);
        }
    }
    println!("\nartifacts in {}", out.display());
    Ok(())
}
