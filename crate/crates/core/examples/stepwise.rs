//! Stepwise training orders: ascending score, descending score, and random.

use lalita::sampler::{stepwise_order, OrderStrategy};

fn main() -> lalita::error::Result<()> {
    let scores = [0.4, -1.2, 0.9, 0.0, -0.3, 1.5, -0.8, 0.2, 0.6, -0.1];
    for strategy in [OrderStrategy::IncPca, OrderStrategy::DecPca, OrderStrategy::Rs] {
        let plan = stepwise_order(&scores, strategy, 4, 42)?;
        let stages: Vec<Vec<f64>> = std::iter::once(0)
            .chain(plan.cuts.iter().copied())
            .collect::<Vec<_>>()
            .windows(2)
            .map(|w| plan.order[w[0]..w[1]].iter().map(|&i| scores[i]).collect())
            .collect();
        println!("{strategy:?}: cuts {:?}", plan.cuts);
        for (i, s) in stages.iter().enumerate() {
            println!("  stage {}: {s:?}", i + 1);
        }
    }
    Ok(())
}
