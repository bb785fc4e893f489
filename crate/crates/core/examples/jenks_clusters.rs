//! Natural-breaks clustering of a bimodal-ish score sample, for several k.

use lalita::cluster::{assign_cluster, fit_cluster_model, DEFAULT_SILHOUETTE_SEED};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> lalita::error::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let scores: Vec<f64> = (0..2000)
        .map(|i| {
            let centre = [-0.6, -0.1, 0.3, 0.9][i % 4];
            centre + rng.gen_range(-0.15..0.15)
        })
        .collect();

    for k in 2..=6 {
        let m = fit_cluster_model(&scores, k, DEFAULT_SILHOUETTE_SEED)?;
        println!(
            "k={k}: breaks {:.3?}  counts {:?}  sse {:.3}  silhouette {:.3}",
            m.breaks,
            m.counts,
            m.sse,
            m.silhouette.unwrap_or(f64::NAN)
        );
    }

    let m = fit_cluster_model(&scores, 4, DEFAULT_SILHOUETTE_SEED)?;
    for s in [-1.0, 0.0, 0.5, 2.0] {
        println!("score {s:+.1} -> cluster {}", assign_cluster(&m, s)?);
    }
    Ok(())
}
