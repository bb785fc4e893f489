//! Bitext hygiene rules for real parallel data and quality rules for
//! back-translated synthetic data.
//!
//! The pipeline deduplicates, then evaluates every remaining pair against the
//! rules in a fixed order (Roman-script fraction, length ratio, one-to-many,
//! single sentence). A removed pair is attributed to the first rule that fires.
//! Ambiguity for the one-to-many rule is judged over the whole deduplicated
//! input: a source with two translations is ambiguous even if one of them is
//! also caught by an earlier rule.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::bitext::{BitextPair, AVG_LOGPROB};
use crate::conllu::AnnotatedSentence;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RomanSide {
    Source,
    Target,
    Off,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FilterConfig {
    pub roman_fraction_max: f64,
    pub roman_side: RomanSide,
    pub length_ratio_max: f64,
    pub enforce_one_to_one: bool,
    pub enforce_single_sentence: bool,
    pub synthetic_loglik_min: f64,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            roman_fraction_max: 0.35,
            roman_side: RomanSide::Target,
            length_ratio_max: 4.0,
            enforce_one_to_one: true,
            enforce_single_sentence: true,
            synthetic_loglik_min: -1.0,
        }
    }
}

impl FilterConfig {
    /// Deduplication only.
    pub fn dedup_only() -> Self {
        FilterConfig {
            roman_side: RomanSide::Off,
            length_ratio_max: f64::INFINITY,
            enforce_one_to_one: false,
            enforce_single_sentence: false,
            ..FilterConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.roman_fraction_max) {
            return Err(Error::Config(format!(
                "roman_fraction_max must lie in [0,1], got {}",
                self.roman_fraction_max
            )));
        }
        if !(self.length_ratio_max >= 1.0) {
            return Err(Error::Config(format!(
                "length_ratio_max must be >= 1, got {}",
                self.length_ratio_max
            )));
        }
        if !self.synthetic_loglik_min.is_finite() {
            return Err(Error::Config("synthetic_loglik_min must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Dedup,
    RomanScript,
    LengthRatio,
    OneToMany,
    SingleSentence,
    LogLikelihood,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Dedup => "dedup",
            Rule::RomanScript => "roman_script",
            Rule::LengthRatio => "length_ratio",
            Rule::OneToMany => "one_to_many",
            Rule::SingleSentence => "single_sentence",
            Rule::LogLikelihood => "log_likelihood",
        }
    }
}

/// Per-rule removal counts plus survivors; serializes as a flat JSON object.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterReport {
    #[serde(flatten)]
    pub counts_removed_by_rule: BTreeMap<String, usize>,
    pub survivors: usize,
}

impl FilterReport {
    fn with_rules(rules: &[Rule]) -> Self {
        FilterReport {
            counts_removed_by_rule: rules.iter().map(|r| (r.name().to_string(), 0)).collect(),
            survivors: 0,
        }
    }

    fn remove(&mut self, rule: Rule) {
        *self.counts_removed_by_rule.entry(rule.name().to_string()).or_insert(0) += 1;
    }

    pub fn removed(&self, rule: Rule) -> usize {
        self.counts_removed_by_rule.get(rule.name()).copied().unwrap_or(0)
    }

    pub fn total_removed(&self) -> usize {
        self.counts_removed_by_rule.values().sum()
    }
}

/// Collapse exact (source, target) duplicates to their first occurrence.
pub fn dedup(pairs: Vec<BitextPair>) -> Vec<BitextPair> {
    let mut seen: HashSet<(String, String)> = HashSet::with_capacity(pairs.len());
    pairs
        .into_iter()
        .filter(|p| seen.insert((p.source.clone(), p.target.clone())))
        .collect()
}

/// Fraction of whitespace tokens written in Roman script.
///
/// A token is Roman when more than half of its alphabetic characters are ASCII
/// letters. Tokens without alphabetic characters do not count.
pub fn roman_fraction(text: &str) -> f64 {
    let mut roman = 0usize;
    let mut counted = 0usize;
    for tok in text.split_whitespace() {
        let (alpha, latin) = tok.chars().filter(|c| c.is_alphabetic()).fold((0usize, 0usize), |(a, l), c| {
            (a + 1, l + usize::from(c.is_ascii_alphabetic()))
        });
        if alpha == 0 {
            continue;
        }
        counted += 1;
        if 2 * latin > alpha {
            roman += 1;
        }
    }
    if counted == 0 {
        0.0
    } else {
        roman as f64 / counted as f64
    }
}

/// True when the longer side has at most `max` times the tokens of the shorter.
pub fn length_ratio_ok(src: &str, tgt: &str, max: f64) -> bool {
    let a = src.split_whitespace().count();
    let b = tgt.split_whitespace().count();
    let (lo, hi) = (a.min(b), a.max(b));
    if lo == 0 {
        return false;
    }
    hi as f64 / lo as f64 <= max
}

struct Ambiguity {
    sources: HashSet<String>,
    targets: HashSet<String>,
}

impl Ambiguity {
    fn of(pairs: &[BitextPair]) -> Self {
        let mut by_src: HashMap<&str, HashSet<&str>> = HashMap::new();
        let mut by_tgt: HashMap<&str, HashSet<&str>> = HashMap::new();
        for p in pairs {
            by_src.entry(&p.source).or_default().insert(&p.target);
            by_tgt.entry(&p.target).or_default().insert(&p.source);
        }
        let multi = |m: HashMap<&str, HashSet<&str>>| {
            m.into_iter()
                .filter(|(_, v)| v.len() > 1)
                .map(|(k, _)| k.to_string())
                .collect::<HashSet<_>>()
        };
        Ambiguity {
            sources: multi(by_src),
            targets: multi(by_tgt),
        }
    }

    fn hits(&self, p: &BitextPair) -> bool {
        self.sources.contains(&p.source) || self.targets.contains(&p.target)
    }
}

/// Drop every pair whose source or target has more than one distinct counterpart.
pub fn one_to_many_prune(pairs: Vec<BitextPair>) -> Vec<BitextPair> {
    let amb = Ambiguity::of(&pairs);
    pairs.into_iter().filter(|p| !amb.hits(p)).collect()
}

/// The source instance parsed as exactly one sentence. A missing annotation fails.
pub fn single_sentence_ok(ann: Option<&AnnotatedSentence>) -> bool {
    ann.is_some_and(|a| a.sentence_count_in_doc() == 1)
}

fn index_annotations(annotations: &[AnnotatedSentence]) -> Result<HashMap<&str, &AnnotatedSentence>> {
    let mut map = HashMap::with_capacity(annotations.len());
    let mut dups = Vec::new();
    for a in annotations {
        if map.insert(a.id.as_str(), a).is_some() {
            dups.push(a.id.clone());
        }
    }
    if dups.is_empty() {
        Ok(map)
    } else {
        Err(Error::DuplicateIds {
            side: "annotations",
            ids: dups,
        })
    }
}

fn check_unique_ids(pairs: &[BitextPair]) -> Result<()> {
    let mut seen = HashSet::new();
    let dups: Vec<String> = pairs
        .iter()
        .filter(|p| !seen.insert(p.id.as_str()))
        .map(|p| p.id.clone())
        .collect();
    if dups.is_empty() {
        Ok(())
    } else {
        Err(Error::DuplicateIds { side: "bitext", ids: dups })
    }
}

/// Run the hygiene rules; survivors keep input order.
pub fn filter_pipeline(
    pairs: Vec<BitextPair>,
    annotations: &[AnnotatedSentence],
    cfg: &FilterConfig,
) -> Result<(Vec<BitextPair>, FilterReport)> {
    cfg.validate()?;
    check_unique_ids(&pairs)?;
    let anns = index_annotations(annotations)?;
    let mut report = FilterReport::with_rules(&[
        Rule::Dedup,
        Rule::RomanScript,
        Rule::LengthRatio,
        Rule::OneToMany,
        Rule::SingleSentence,
    ]);

    let before = pairs.len();
    let pairs = dedup(pairs);
    *report.counts_removed_by_rule.get_mut(Rule::Dedup.name()).unwrap() = before - pairs.len();

    let amb = cfg.enforce_one_to_one.then(|| Ambiguity::of(&pairs));
    let first_failure = |p: &BitextPair| -> Option<Rule> {
        let roman_text = match cfg.roman_side {
            RomanSide::Source => Some(&p.source),
            RomanSide::Target => Some(&p.target),
            RomanSide::Off => None,
        };
        if roman_text.is_some_and(|t| roman_fraction(t) > cfg.roman_fraction_max) {
            return Some(Rule::RomanScript);
        }
        if !length_ratio_ok(&p.source, &p.target, cfg.length_ratio_max) {
            return Some(Rule::LengthRatio);
        }
        if amb.as_ref().is_some_and(|a| a.hits(p)) {
            return Some(Rule::OneToMany);
        }
        if cfg.enforce_single_sentence && !single_sentence_ok(anns.get(p.id.as_str()).copied()) {
            return Some(Rule::SingleSentence);
        }
        None
    };

    let mut kept = Vec::with_capacity(pairs.len());
    for p in pairs {
        match first_failure(&p) {
            Some(rule) => report.remove(rule),
            None => kept.push(p),
        }
    }
    report.survivors = kept.len();
    Ok((kept, report))
}

/// Keep synthetic pairs with `avg_logprob >= min_loglik` whose source parsed as
/// a single sentence.
pub fn synthetic_quality_filter(
    pairs: Vec<BitextPair>,
    annotations: &[AnnotatedSentence],
    min_loglik: f64,
) -> Result<(Vec<BitextPair>, FilterReport)> {
    check_unique_ids(&pairs)?;
    let anns = index_annotations(annotations)?;
    let mut report = FilterReport::with_rules(&[Rule::LogLikelihood, Rule::SingleSentence]);
    let mut kept = Vec::with_capacity(pairs.len());
    for p in pairs {
        let ll = p.sidecar_value(AVG_LOGPROB)?;
        if !(ll >= min_loglik) {
            report.remove(Rule::LogLikelihood);
        } else if !single_sentence_ok(anns.get(p.id.as_str()).copied()) {
            report.remove(Rule::SingleSentence);
        } else {
            kept.push(p);
        }
    }
    report.survivors = kept.len();
    Ok((kept, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conllu::{Token, Upos};
    use proptest::prelude::*;

    fn p(id: &str, s: &str, t: &str) -> BitextPair {
        BitextPair::new(id, s, t)
    }

    fn one_block(id: &str) -> AnnotatedSentence {
        AnnotatedSentence::single(id, vec![Token::new("w", Upos::NOUN, 0, "root")])
    }

    #[test]
    fn dedup_first_occurrence() {
        let out = dedup(vec![p("1", "s1", "t1"), p("2", "s1", "t1"), p("3", "s2", "t2")]);
        let ids: Vec<_> = out.iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids, ["1", "3"]);
    }

    #[test]
    fn dedup_planted_duplicates() {
        // hash-set oracle: survivors = number of distinct (s,t)
        let mut pairs = Vec::new();
        for i in 0..7000 {
            pairs.push(p(&format!("u{i}"), &format!("src {i}"), &format!("tgt {i}")));
        }
        for i in 0..3000 {
            let j = (i * 7) % 7000;
            pairs.push(p(&format!("d{i}"), &format!("src {j}"), &format!("tgt {j}")));
        }
        let distinct: HashSet<_> = pairs.iter().map(|p| (p.source.clone(), p.target.clone())).collect();
        let out = dedup(pairs);
        assert_eq!(out.len(), distinct.len());
        assert_eq!(out.len(), 7000);
    }

    #[test]
    fn roman_fraction_cases() {
        assert_eq!(roman_fraction("यह एक Google परीक्षण Chrome"), 0.4);
        assert_eq!(roman_fraction("यह एक परीक्षण है"), 0.0);
        assert_eq!(roman_fraction("abc 123 xyz"), 1.0);
        assert_eq!(roman_fraction(""), 0.0);
        assert_eq!(roman_fraction("१२ 34"), 0.0);
        // mixed-script token: majority rule
        assert_eq!(roman_fraction("abcघ"), 1.0);
        assert_eq!(roman_fraction("aघङ"), 0.0);
    }

    #[test]
    fn length_ratio_cases() {
        let three = "a b c";
        let thirteen = "a b c d e f g h i j k l m";
        assert!(!length_ratio_ok(three, thirteen, 4.0));
        let twenty = vec!["w"; 20].join(" ");
        assert!(length_ratio_ok(&twenty, &twenty, 4.0));
        let four = "a b c d";
        let sixteen = vec!["w"; 16].join(" ");
        assert!(length_ratio_ok(four, &sixteen, 4.0));
        assert!(length_ratio_ok(&sixteen, four, 4.0));
        assert!(!length_ratio_ok("", "a", 4.0));
    }

    #[test]
    fn one_to_many_cases() {
        let out = one_to_many_prune(vec![p("1", "e1", "h1"), p("2", "e1", "h2"), p("3", "e2", "h3")]);
        assert_eq!(out, vec![p("3", "e2", "h3")]);
        let inj = vec![p("1", "e1", "h1"), p("2", "e2", "h2")];
        assert_eq!(one_to_many_prune(inj.clone()), inj);
        assert!(one_to_many_prune(vec![p("1", "e1", "h1"), p("2", "e2", "h1")]).is_empty());
    }

    #[test]
    fn single_sentence_cases() {
        let one = one_block("a");
        let mut two = one_block("b");
        two.tokens.push(Token::new("x", Upos::NOUN, 0, "root"));
        two.block_lengths = vec![1, 1];
        assert!(single_sentence_ok(Some(&one)));
        assert!(!single_sentence_ok(Some(&two)));
        assert!(!single_sentence_ok(None));
    }

    #[test]
    fn unannotated_pair_counted_as_single_sentence() {
        let pairs = vec![p("a", "x y", "क ख"), p("b", "z w", "ग घ")];
        let (kept, report) = filter_pipeline(pairs, &[one_block("a")], &FilterConfig::default()).unwrap();
        assert_eq!(kept.len(), 1);
        assert_eq!(report.removed(Rule::SingleSentence), 1);
    }

    #[test]
    fn dedup_only_is_identity_on_clean_input() {
        let pairs = vec![p("1", "a", "b c d e f g h"), p("2", "Hello", "World")];
        let (kept, report) = filter_pipeline(pairs.clone(), &[], &FilterConfig::dedup_only()).unwrap();
        assert_eq!(kept, pairs);
        assert_eq!(report.total_removed(), 0);
    }

    #[test]
    fn synthetic_threshold_is_inclusive() {
        let anns: Vec<_> = ["a", "b", "c"].iter().map(|i| one_block(i)).collect();
        let pairs = vec![
            p("a", "x", "y").with_sidecar(AVG_LOGPROB, -0.5),
            p("b", "x", "y").with_sidecar(AVG_LOGPROB, -1.0),
            p("c", "x", "y").with_sidecar(AVG_LOGPROB, -1.7),
        ];
        let (kept, report) = synthetic_quality_filter(pairs, &anns, -1.0).unwrap();
        let ids: Vec<_> = kept.iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids, ["a", "b"]);
        assert_eq!(report.removed(Rule::LogLikelihood), 1);
    }

    #[test]
    fn synthetic_missing_sidecar_errors() {
        let e = synthetic_quality_filter(vec![p("q9", "x", "y")], &[], -1.0).unwrap_err();
        assert!(matches!(e, Error::MissingSidecar { ref id, .. } if id == "q9"));
    }

    #[test]
    fn report_json_shape() {
        let (_, report) = filter_pipeline(vec![p("1", "a", "ब")], &[one_block("1")], &FilterConfig::default()).unwrap();
        let v: serde_json::Value = serde_json::to_value(&report).unwrap();
        assert_eq!(v["survivors"], 1);
        assert_eq!(v["roman_script"], 0);
        assert_eq!(v["dedup"], 0);
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = FilterConfig {
            length_ratio_max: 0.5,
            ..FilterConfig::default()
        };
        assert!(filter_pipeline(vec![], &[], &cfg).is_err());
    }

    fn arb_pairs() -> impl Strategy<Value = Vec<BitextPair>> {
        let word = prop_oneof![Just("a"), Just("b"), Just("क"), Just("ख"), Just("ग")];
        let side = proptest::collection::vec(word, 1..6).prop_map(|w| w.join(" "));
        proptest::collection::vec((side.clone(), side), 0..25).prop_map(|v| {
            v.into_iter()
                .enumerate()
                .map(|(i, (s, t))| p(&format!("p{i}"), &s, &t))
                .collect()
        })
    }

    proptest! {
        #[test]
        fn pipeline_properties(pairs in arb_pairs(), multi in proptest::collection::vec(any::<bool>(), 25)) {
            let anns: Vec<_> = pairs.iter().enumerate().map(|(i, p)| {
                let mut a = one_block(&p.id);
                if multi[i] {
                    a.tokens.push(Token::new("x", Upos::NOUN, 0, "root"));
                    a.block_lengths = vec![1, 1];
                }
                a
            }).collect();
            let cfg = FilterConfig::default();
            let (once, report) = filter_pipeline(pairs.clone(), &anns, &cfg).unwrap();
            // reconciliation
            prop_assert_eq!(report.survivors + report.total_removed(), pairs.len());
            // subsequence of the input
            let mut it = pairs.iter();
            for kept in &once {
                prop_assert!(it.any(|q| q == kept));
            }
            // injective both ways
            let mut s2t: HashMap<&str, &str> = HashMap::new();
            let mut t2s: HashMap<&str, &str> = HashMap::new();
            for q in &once {
                prop_assert_eq!(*s2t.entry(&q.source).or_insert(&q.target), q.target.as_str());
                prop_assert_eq!(*t2s.entry(&q.target).or_insert(&q.source), q.source.as_str());
            }
            // idempotent
            let (twice, _) = filter_pipeline(once.clone(), &anns, &cfg).unwrap();
            prop_assert_eq!(twice, once);
        }
    }
}
