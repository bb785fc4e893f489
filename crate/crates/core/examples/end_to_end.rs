//! Full pipeline on the bundled demo corpus, then a resumed run that reuses
//! every stage.

use std::path::Path;

use lalita::pipeline::{run_pipeline, PipelineConfig, RunOptions};
use lalita::report::AnalysisReport;

fn main() -> lalita::error::Result<()> {
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/demo/pipeline.json");
    let mut cfg = PipelineConfig::load(&config)?;
    cfg.output_dir = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("lalita-demo"));

    let first = run_pipeline(&cfg, &RunOptions::default())?;
    println!("ran: {:?}", first.stages_run);
    for (stage, rec) in &first.index.stages {
        println!("  {stage:<8} {}", rec.files.keys().cloned().collect::<Vec<_>>().join(" "));
    }

    let text = std::fs::read_to_string(cfg.output_dir.join("report.json"))
        .map_err(|e| lalita::error::Error::io(&cfg.output_dir, e))?;
    let report: AnalysisReport = serde_json::from_str(&text)?;
    println!("\nbreaks {:.3?}, silhouette {:?}", report.breaks, report.silhouette);
    for c in &report.clusters {
        println!(
            "  cluster {}: {:>4} pairs ({:>5.2}%), mean length {:.1}",
            c.cluster, c.count, c.percent, c.mean_sentence_length
        );
    }

    let again = run_pipeline(&cfg, &RunOptions { resume: true })?;
    println!("\nresume reused: {:?}", again.stages_reused);
    println!("artifacts in {}", cfg.output_dir.display());
    Ok(())
}
