//! Gain schemes and assessor-label aggregation.
//!
//! A gain scheme maps integer relevance levels to real gain values. Schemes
//! must award zero gain at level 0 and be monotone non-decreasing, so a more
//! relevant document never earns less gain. This module also builds levels
//! and gains out of raw assessor labels: weighted sums, averages, majority
//! votes, a unanimity bonus, and duplicate suppression over equivalence
//! classes.

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Violation of a gain-scheme or aggregation contract.
#[derive(Debug, Clone, PartialEq)]
pub enum GainError {
    EmptyTable,
    /// Level tables must cover 0..=max with no holes.
    MissingLevel(u32),
    /// Level 0 must map to gain 0.
    NonZeroAtZero(f64),
    /// Gains must be monotone non-decreasing in the level.
    NotMonotone {
        level: u32,
    },
    NegativeGain {
        level: u32,
    },
    /// A judgment used a level the scheme does not cover.
    LevelOutOfRange {
        level: u32,
        max: u32,
    },
    /// A gain-scheme spec string could not be read.
    BadSpec(String),
    /// An assessor label had no entry in the weight table.
    UnknownLabel(String),
    /// A weighted label sum was not a non-negative integer level.
    NonIntegerSum(f64),
    /// An aggregate was requested over zero labels.
    EmptyLabels,
    /// Observed assessor disagreement exceeded the declared maximum.
    SpreadOutOfRange {
        spread: f64,
        max: f64,
    },
    /// Upgrade parameters must be finite and non-negative.
    BadUpgradeParams,
}

impl fmt::Display for GainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GainError::EmptyTable => write!(f, "gain table is empty"),
            GainError::MissingLevel(l) => write!(f, "gain table has no entry for level {l}"),
            GainError::NonZeroAtZero(g) => write!(f, "level 0 must have gain 0, got {g}"),
            GainError::NotMonotone { level } => {
                write!(f, "gain decreases from level {} to {level}", level - 1)
            }
            GainError::NegativeGain { level } => write!(f, "negative gain at level {level}"),
            GainError::LevelOutOfRange { level, max } => {
                write!(f, "level {level} exceeds the scheme maximum {max}")
            }
            GainError::BadSpec(s) => write!(f, "unreadable gain spec {s:?}"),
            GainError::UnknownLabel(l) => write!(f, "no weight declared for label {l:?}"),
            GainError::NonIntegerSum(s) => {
                write!(f, "label weights sum to {s}, not a usable level")
            }
            GainError::EmptyLabels => write!(f, "no labels to aggregate"),
            GainError::SpreadOutOfRange { spread, max } => {
                write!(
                    f,
                    "score spread {spread} exceeds the declared maximum {max}"
                )
            }
            GainError::BadUpgradeParams => write!(f, "upgrade parameters must be finite and >= 0"),
        }
    }
}

impl core::error::Error for GainError {}

/// Maps relevance levels 0..=max to gain values.
#[derive(Debug, Clone, PartialEq)]
pub struct GainScheme {
    gains: Vec<f64>,
}

impl GainScheme {
    /// Gain equal to the level: L0 -> 0, L1 -> 1, ...
    pub fn linear(max_level: u32) -> Self {
        GainScheme {
            gains: (0..=max_level).map(f64::from).collect(),
        }
    }

    /// Gain `2^level - 1`, which sharpens the reward for the top levels.
    pub fn quadratic(max_level: u32) -> Self {
        GainScheme {
            gains: (0..=max_level)
                .map(|x| {
                    if x < 63 {
                        ((1u64 << x) - 1) as f64
                    } else {
                        crate::math::powf(2.0, f64::from(x)) - 1.0
                    }
                })
                .collect(),
        }
    }

    /// Builds a scheme from explicit (level, gain) pairs.
    ///
    /// The pairs must cover every level from 0 to the highest one listed,
    /// level 0 must map to 0, and gains must be monotone non-decreasing.
    pub fn from_table(pairs: &[(u32, f64)]) -> Result<Self, GainError> {
        if pairs.is_empty() {
            return Err(GainError::EmptyTable);
        }
        let mut table: BTreeMap<u32, f64> = BTreeMap::new();
        for &(level, gain) in pairs {
            table.insert(level, gain);
        }
        let max = *table.keys().last().expect("table is non-empty");
        let mut gains = Vec::with_capacity(max as usize + 1);
        for level in 0..=max {
            let gain = *table.get(&level).ok_or(GainError::MissingLevel(level))?;
            if !gain.is_finite() || gain < 0.0 {
                return Err(GainError::NegativeGain { level });
            }
            if level == 0 && gain != 0.0 {
                return Err(GainError::NonZeroAtZero(gain));
            }
            if level > 0 && gain < gains[level as usize - 1] {
                return Err(GainError::NotMonotone { level });
            }
            gains.push(gain);
        }
        Ok(GainScheme { gains })
    }

    /// Gain for a level; levels beyond the table are an error.
    pub fn gain(&self, level: u32) -> Result<f64, GainError> {
        self.gains
            .get(level as usize)
            .copied()
            .ok_or(GainError::LevelOutOfRange {
                level,
                max: self.max_level(),
            })
    }

    pub fn max_level(&self) -> u32 {
        (self.gains.len() - 1) as u32
    }

    /// Gains indexed by level.
    pub fn gains(&self) -> &[f64] {
        &self.gains
    }
}

/// A gain-scheme request: a preset name or an explicit table.
///
/// Presets need the collection's maximum level before they become a concrete
/// [`GainScheme`]; explicit tables carry their own.
#[derive(Debug, Clone, PartialEq)]
pub enum GainSpec {
    Linear,
    Quadratic,
    Table(Vec<(u32, f64)>),
}

impl GainSpec {
    /// Parses `"linear"`, `"quadratic"`, or a `level:gain` comma list such
    /// as `"0:0,1:1,2:3"`.
    pub fn parse(s: &str) -> Result<Self, GainError> {
        let trimmed = s.trim();
        match trimmed.to_ascii_lowercase().as_str() {
            "linear" => return Ok(GainSpec::Linear),
            "quadratic" => return Ok(GainSpec::Quadratic),
            _ => {}
        }
        let mut pairs = Vec::new();
        for part in trimmed.split(',') {
            let mut it = part.splitn(2, ':');
            let (Some(level), Some(gain)) = (it.next(), it.next()) else {
                return Err(GainError::BadSpec(s.to_owned()));
            };
            let level: u32 = level
                .trim()
                .parse()
                .map_err(|_| GainError::BadSpec(s.to_owned()))?;
            let gain: f64 = gain
                .trim()
                .parse()
                .map_err(|_| GainError::BadSpec(s.to_owned()))?;
            pairs.push((level, gain));
        }
        Ok(GainSpec::Table(pairs))
    }

    /// Turns the parsed request into a concrete scheme covering `max_level`.
    ///
    /// Explicit tables ignore `max_level`; callers should check that the
    /// resulting scheme covers their data.
    pub fn resolve(&self, max_level: u32) -> Result<GainScheme, GainError> {
        match self {
            GainSpec::Linear => Ok(GainScheme::linear(max_level)),
            GainSpec::Quadratic => Ok(GainScheme::quadratic(max_level)),
            GainSpec::Table(pairs) => GainScheme::from_table(pairs),
        }
    }
}

/// Weight (in points) of each raw assessor label.
pub type LabelWeights = BTreeMap<String, f64>;

/// Maps raw labels to their weighted scores.
pub fn label_scores(labels: &[&str], weights: &LabelWeights) -> Result<Vec<f64>, GainError> {
    labels
        .iter()
        .map(|l| {
            weights
                .get(*l)
                .copied()
                .ok_or_else(|| GainError::UnknownLabel((*l).to_owned()))
        })
        .collect()
}

/// Sums weighted labels into a relevance level.
///
/// The weighted sum must land on a non-negative integer; with weights like
/// A=2, B=1, C=0 the pattern AAAB yields level 7.
pub fn aggregate_sum(labels: &[&str], weights: &LabelWeights) -> Result<u32, GainError> {
    if labels.is_empty() {
        return Err(GainError::EmptyLabels);
    }
    let sum: f64 = label_scores(labels, weights)?.iter().sum();
    let rounded = libm::round(sum);
    if sum < 0.0 || (sum - rounded).abs() > 1e-9 || rounded > f64::from(u32::MAX) {
        return Err(GainError::NonIntegerSum(sum));
    }
    Ok(rounded as u32)
}

/// Mean of per-assessor scores, used directly as a gain value.
pub fn aggregate_average(scores: &[f64]) -> Result<f64, GainError> {
    if scores.is_empty() {
        return Err(GainError::EmptyLabels);
    }
    Ok(scores.iter().sum::<f64>() / scores.len() as f64)
}

/// Weighted-label variant of [`aggregate_average`].
pub fn aggregate_average_labels(labels: &[&str], weights: &LabelWeights) -> Result<f64, GainError> {
    aggregate_average(&label_scores(labels, weights)?)
}

/// Strict-majority level, or `fallback` when no level wins more than half
/// the votes (all-distinct labels and even splits both fall back).
pub fn aggregate_majority(levels: &[u32], fallback: u32) -> Result<u32, GainError> {
    if levels.is_empty() {
        return Err(GainError::EmptyLabels);
    }
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for &l in levels {
        *counts.entry(l).or_insert(0) += 1;
    }
    for (&level, &count) in &counts {
        if 2 * count > levels.len() {
            return Ok(level);
        }
    }
    Ok(fallback)
}

/// [`aggregate_majority`] with the conventional level-0 fallback.
pub fn aggregate_majority_l0(levels: &[u32]) -> Result<u32, GainError> {
    aggregate_majority(levels, 0)
}

/// Parameters of the unanimity bonus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnanimityParams {
    /// Bonus rate per assessor per point of agreement headroom.
    pub rate: f64,
    /// Number of assessors.
    pub assessors: usize,
    /// Largest possible disagreement (highest score minus lowest).
    pub max_spread: f64,
}

impl UnanimityParams {
    pub fn new(rate: f64, assessors: usize, max_spread: f64) -> Self {
        UnanimityParams {
            rate,
            assessors,
            max_spread,
        }
    }
}

/// Default bonus rate for the unanimity upgrade.
pub const DEFAULT_UNANIMITY_RATE: f64 = 0.2;

/// Boosts a gain when assessors agreed.
///
/// With spread `D = max score - min score`, the upgraded gain is
/// `gv + rate * assessors * (max_spread - D)`: full agreement earns the
/// largest bonus, maximal disagreement earns none.
pub fn unanimity_upgrade(gv: f64, spread: f64, params: &UnanimityParams) -> Result<f64, GainError> {
    if !params.rate.is_finite() || params.rate < 0.0 || !params.max_spread.is_finite() {
        return Err(GainError::BadUpgradeParams);
    }
    if !spread.is_finite() || spread < 0.0 || spread > params.max_spread {
        return Err(GainError::SpreadOutOfRange {
            spread,
            max: params.max_spread,
        });
    }
    Ok(gv + params.rate * params.assessors as f64 * (params.max_spread - spread))
}

/// Sums raw scores and applies the unanimity bonus to the sum.
pub fn unanimity_upgrade_scores(
    scores: &[f64],
    rate: f64,
    max_spread: f64,
) -> Result<f64, GainError> {
    if scores.is_empty() {
        return Err(GainError::EmptyLabels);
    }
    let gv: f64 = scores.iter().sum();
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = scores.iter().copied().fold(f64::INFINITY, f64::min);
    unanimity_upgrade(
        gv,
        max - min,
        &UnanimityParams::new(rate, scores.len(), max_spread),
    )
}

/// Marks ranked documents whose equivalence class already appeared earlier.
///
/// The first-ranked member of each class keeps its judgment; every later
/// member is suppressed (scored as unjudged nonrelevant).
pub fn suppression_mask(ranking: &[&str], classes: &BTreeMap<String, String>) -> Vec<bool> {
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    ranking
        .iter()
        .map(|doc| match classes.get(*doc) {
            Some(class) => !seen.insert(class.as_str()),
            None => false,
        })
        .collect()
}

/// Zeroes the gains of later equivalence-class duplicates in a ranking.
pub fn dedup_gains(
    ranking: &[&str],
    classes: &BTreeMap<String, String>,
    gains: &[f64],
) -> Vec<f64> {
    debug_assert_eq!(ranking.len(), gains.len());
    suppression_mask(ranking, classes)
        .into_iter()
        .zip(gains)
        .map(|(suppressed, &g)| if suppressed { 0.0 } else { g })
        .collect()
}

/// Raw per-assessor scores for each (topic, document) pair.
///
/// All documents of one topic must carry the same number of scores.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AssessorLabels {
    topics: BTreeMap<String, BTreeMap<String, Vec<f64>>>,
}

/// Errors specific to assessor-score bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub enum LabelError {
    DuplicateDoc {
        topic: String,
        doc: String,
    },
    InconsistentCount {
        topic: String,
        doc: String,
        expected: usize,
        got: usize,
    },
    NonFiniteScore {
        topic: String,
        doc: String,
    },
    NoScores {
        topic: String,
        doc: String,
    },
}

impl fmt::Display for LabelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelError::DuplicateDoc { topic, doc } => {
                write!(f, "scores listed twice for topic {topic}, doc {doc}")
            }
            LabelError::InconsistentCount {
                topic,
                doc,
                expected,
                got,
            } => write!(
                f,
                "topic {topic}, doc {doc}: expected {expected} assessor scores, got {got}"
            ),
            LabelError::NonFiniteScore { topic, doc } => {
                write!(f, "non-finite assessor score for topic {topic}, doc {doc}")
            }
            LabelError::NoScores { topic, doc } => {
                write!(f, "no assessor scores for topic {topic}, doc {doc}")
            }
        }
    }
}

impl core::error::Error for LabelError {}

impl AssessorLabels {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, topic: &str, doc: &str, scores: &[f64]) -> Result<(), LabelError> {
        if scores.is_empty() {
            return Err(LabelError::NoScores {
                topic: topic.to_owned(),
                doc: doc.to_owned(),
            });
        }
        if scores.iter().any(|s| !s.is_finite()) {
            return Err(LabelError::NonFiniteScore {
                topic: topic.to_owned(),
                doc: doc.to_owned(),
            });
        }
        let docs = self.topics.entry(topic.to_owned()).or_default();
        if let Some(existing) = docs.values().next() {
            if existing.len() != scores.len() {
                return Err(LabelError::InconsistentCount {
                    topic: topic.to_owned(),
                    doc: doc.to_owned(),
                    expected: existing.len(),
                    got: scores.len(),
                });
            }
        }
        if docs.contains_key(doc) {
            return Err(LabelError::DuplicateDoc {
                topic: topic.to_owned(),
                doc: doc.to_owned(),
            });
        }
        docs.insert(doc.to_owned(), scores.to_vec());
        Ok(())
    }

    pub fn topics(&self) -> impl Iterator<Item = (&str, &BTreeMap<String, Vec<f64>>)> {
        self.topics.iter().map(|(t, m)| (t.as_str(), m))
    }

    pub fn is_empty(&self) -> bool {
        self.topics.is_empty()
    }

    /// Largest single score anywhere, handy as a default disagreement bound.
    pub fn max_score(&self) -> Option<f64> {
        self.topics
            .values()
            .flat_map(|docs| docs.values())
            .flat_map(|scores| scores.iter().copied())
            .fold(None, |acc, s| Some(acc.map_or(s, |a: f64| a.max(s))))
    }
}
