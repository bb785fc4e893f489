//! Complexity-driven curation of parallel corpora: bitext filtering, CoNLL-U
//! feature vectors, Kneser-Ney perplexity, PCA scores, natural-breaks clusters
//! and cluster-mix sampling.

pub mod bitext;
pub mod cli;
pub mod cluster;
pub mod conllu;
pub mod error;
pub mod features;
pub mod filter;
pub mod lm;
pub mod pipeline;
pub mod report;
pub mod sampler;
pub mod score;
