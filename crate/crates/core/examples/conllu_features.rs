//! Feature vector of the President Kovind sentence.

use std::path::Path;

use lalita::conllu::load_conllu;
use lalita::features::{build_schema, vectorize};
use lalita::lm::{normalize_for_lm, NgramModel};

fn main() -> lalita::error::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/fixtures/kovind.conllu");
    let sents = load_conllu(&path)?;
    let schema = build_schema(&sents, false)?;
    let lm = NgramModel::train(&[normalize_for_lm(&sents[0])], 3)?;
    let v = vectorize(&sents[0], &schema, lm.perplexity(&normalize_for_lm(&sents[0]))?, None)?;

    println!("{} features", schema.dimension());
    for g in schema.groups() {
        let shown: Vec<String> = g
            .names
            .iter()
            .filter_map(|n| v.get(&schema, n).filter(|&x| x != 0.0).map(|x| format!("{n}={x}")))
            .collect();
        println!("{:?}: {}", g.group, shown.join(" "));
    }
    Ok(())
}
