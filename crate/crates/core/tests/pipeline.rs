use std::path::{Path, PathBuf};

use lalita::error::Error;
use lalita::pipeline::{run_pipeline, ArtifactIndex, PipelineConfig, RunOptions, INDEX_FILE};

fn demo_config(out: &Path) -> PipelineConfig {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/demo/pipeline.json");
    let mut cfg = PipelineConfig::load(&path).unwrap();
    cfg.output_dir = out.to_path_buf();
    cfg
}

fn index(out: &Path) -> ArtifactIndex {
    serde_json::from_str(&std::fs::read_to_string(out.join(INDEX_FILE)).unwrap()).unwrap()
}

#[test]
fn missing_input_fails_before_writing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let mut cfg = demo_config(&out);
    cfg.conllu = PathBuf::from("/nonexistent/annotations.conllu");
    let err = run_pipeline(&cfg, &RunOptions::default()).unwrap_err();
    assert!(matches!(err, Error::Config(_)), "{err}");
    assert_eq!(err.exit_code(), 1);
    assert!(!out.exists());
}

#[test]
fn configuration_with_wrong_arity_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = demo_config(dir.path());
    cfg.configurations = vec!["50_50".into()];
    assert!(matches!(cfg.validate(), Err(Error::Config(_))));
}

#[test]
fn unknown_config_key_is_rejected() {
    let text = r#"{"bitext": "a", "conllu": "b", "output_dir": "o", "tds": 5, "typo": 1}"#;
    assert!(PipelineConfig::from_json(text, Path::new(".")).is_err());
}

#[test]
fn resume_reuses_unchanged_stages() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = demo_config(dir.path());
    let first = run_pipeline(&cfg, &RunOptions::default()).unwrap();
    assert!(first.stages_reused.is_empty());
    let again = run_pipeline(&cfg, &RunOptions { resume: true }).unwrap();
    assert!(again.stages_run.is_empty(), "{:?}", again.stages_run);
    assert_eq!(first.index, again.index);

    let mut smaller = cfg.clone();
    smaller.tds = 200;
    let third = run_pipeline(&smaller, &RunOptions { resume: true }).unwrap();
    assert_eq!(third.stages_run, ["sample", "report"]);
    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("samples/25_25_25_25.manifest.json")).unwrap())
            .unwrap();
    assert_eq!(m["tds"], 200);
}

#[test]
fn tampered_artifact_forces_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = demo_config(dir.path());
    run_pipeline(&cfg, &RunOptions::default()).unwrap();
    let before = index(dir.path());
    std::fs::write(dir.path().join("scores.tsv"), "x\t0\n").unwrap();
    let out = run_pipeline(&cfg, &RunOptions { resume: true }).unwrap();
    assert!(out.stages_run.contains(&"score"));
    assert!(out.stages_reused.contains(&"features"));
    assert_eq!(before, index(dir.path()));
}

#[test]
fn shortfall_names_the_stage() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = demo_config(dir.path());
    cfg.tds = 5000;
    let err = run_pipeline(&cfg, &RunOptions::default()).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    let msg = err.to_string();
    assert!(msg.contains("sample") && msg.contains("short by"), "{msg}");
}

#[test]
fn without_augmentation_the_deficit_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = demo_config(dir.path());
    cfg.allow_augmentation = false;
    cfg.configurations = vec!["0_0_0_100".into()];
    cfg.baselines.clear();
    let err = run_pipeline(&cfg, &RunOptions::default()).unwrap_err();
    assert!(err.to_string().contains("cluster 3"), "{err}");
}
