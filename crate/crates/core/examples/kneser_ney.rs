//! Train the sentence-level n-gram model on the demo corpus and compare
//! perplexities of in-domain and shuffled sentences.

use std::path::Path;

use lalita::conllu::load_conllu;
use lalita::lm::{normalize_for_lm, NgramModel};

fn main() -> lalita::error::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/demo/annotations.conllu");
    let corpus: Vec<Vec<String>> = load_conllu(&path)?.iter().map(normalize_for_lm).collect();
    let (train, held_out) = corpus.split_at(corpus.len() - 20);

    for order in 1..=5 {
        let lm = NgramModel::train(train, order)?;
        let mut sum = 0.0;
        let mut shuffled = 0.0;
        for s in held_out {
            sum += lm.perplexity(s)?;
            let mut r = s.clone();
            r.reverse();
            shuffled += lm.perplexity(&r)?;
        }
        let n = held_out.len() as f64;
        println!(
            "order {order}: vocab {:>4}  held-out ppl {:>8.2}  reversed {:>8.2}",
            lm.vocab().len(),
            sum / n,
            shuffled / n
        );
    }

    let lm = NgramModel::train(train, 3)?;
    let ctx = [lm.word_id("the")];
    let total: f64 = lm.predictable_ids().map(|w| lm.prob(&ctx, w)).sum();
    println!("sum of P(w | the) over the vocabulary: {total:.15}");
    Ok(())
}
