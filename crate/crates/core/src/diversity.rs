//! Intent-aware diversity measures.
//!
//! A topic may have several plausible intents, each with a probability and
//! its own judgments. A [`GlobalGainList`] collapses those per-intent gains
//! into one probability-weighted gain per rank and carries the global ideal
//! ranking (every judged document by decreasing global gain). On top of it:
//! intent recall, global-gain variants of the ad hoc measures, their blend,
//! a freshness-aware variant for navigational intents, a per-intent
//! blended-ratio expectation, and scores for vertical-aware and hierarchical
//! subtopic mining.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::adhoc::{build_scored_list, ScoreOptions, ScoredList};
use crate::corpus::{Intent, IntentKind};
use crate::gain::{GainError, GainScheme};

/// Per-intent judgments: intent id to (document id to level).
pub type IntentJudgments = BTreeMap<String, BTreeMap<String, u32>>;

/// Violation of a diversity-measure contract.
#[derive(Debug, Clone, PartialEq)]
pub enum DiversityError {
    /// The topic declares no intents.
    NoIntents,
    /// Judgments exist for an intent that has no declared probability.
    MissingProbability { intent: String },
    /// A ranked item lacks the vertical tag the measure needs.
    MissingVertical { doc: String },
    /// A ranked item has no subtopic-to-intent mapping.
    UnmappedItem { doc: String },
    /// A mapping referenced an intent that was never declared.
    UnknownIntent { intent: String },
    /// An intent has no positive vertical probability to normalize by.
    NoVerticalProfile { intent: String },
    /// A blending weight was outside [0, 1].
    WeightOutOfRange { value: f64 },
    /// A gain parameter was negative or non-finite.
    BadGainValue { value: f64 },
    /// Hierarchy scoring got an empty assignment set.
    EmptyAssignments,
    /// A scored item has no gold assignment.
    MissingGoldAssignment { item: String },
    /// A gain-scheme lookup failed.
    Gain(GainError),
}

impl fmt::Display for DiversityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiversityError::NoIntents => write!(f, "topic has no intents"),
            DiversityError::MissingProbability { intent } => {
                write!(f, "no probability declared for intent {intent}")
            }
            DiversityError::MissingVertical { doc } => {
                write!(f, "ranked item {doc} has no vertical tag")
            }
            DiversityError::UnmappedItem { doc } => {
                write!(f, "ranked item {doc} is not mapped to an intent")
            }
            DiversityError::UnknownIntent { intent } => {
                write!(f, "intent {intent} is not declared for this topic")
            }
            DiversityError::NoVerticalProfile { intent } => {
                write!(f, "intent {intent} has no positive vertical probability")
            }
            DiversityError::WeightOutOfRange { value } => {
                write!(f, "blending weight {value} is outside [0, 1]")
            }
            DiversityError::BadGainValue { value } => {
                write!(f, "gain value {value} must be finite and >= 0")
            }
            DiversityError::EmptyAssignments => write!(f, "no assignments to score"),
            DiversityError::MissingGoldAssignment { item } => {
                write!(f, "no gold assignment for item {item}")
            }
            DiversityError::Gain(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for DiversityError {}

impl From<GainError> for DiversityError {
    fn from(e: GainError) -> Self {
        DiversityError::Gain(e)
    }
}

fn check_weight(value: f64) -> Result<(), DiversityError> {
    if !value.is_finite() || !(0.0..=1.0).contains(&value) {
        return Err(DiversityError::WeightOutOfRange { value });
    }
    Ok(())
}

/// Checks that every judged intent has a declared probability.
fn check_intents(per_intent: &IntentJudgments, intents: &[Intent]) -> Result<(), DiversityError> {
    if intents.is_empty() {
        return Err(DiversityError::NoIntents);
    }
    for judged in per_intent.keys() {
        if !intents.iter().any(|i| &i.id == judged) {
            return Err(DiversityError::MissingProbability {
                intent: judged.clone(),
            });
        }
    }
    Ok(())
}

fn intent_level(per_intent: &IntentJudgments, intent: &Intent, doc: &str) -> u32 {
    per_intent
        .get(&intent.id)
        .and_then(|m| m.get(doc))
        .copied()
        .unwrap_or(0)
}

/// Probability-weighted gain of one document over all intents.
fn doc_global_gain(
    doc: &str,
    per_intent: &IntentJudgments,
    intents: &[Intent],
    scheme: &GainScheme,
) -> Result<f64, GainError> {
    let mut gg = 0.0;
    for intent in intents {
        gg += intent.prob * scheme.gain(intent_level(per_intent, intent, doc))?;
    }
    Ok(gg)
}

/// Global ideal gains: every judged document with positive global gain, by
/// decreasing gain, ties broken by document id.
fn ideal_global_gains(
    per_intent: &IntentJudgments,
    intents: &[Intent],
    scheme: &GainScheme,
) -> Result<Vec<f64>, GainError> {
    let docs: BTreeSet<&str> = per_intent
        .values()
        .flat_map(|m| m.keys().map(String::as_str))
        .collect();
    let mut entries: Vec<(f64, &str)> = Vec::new();
    for doc in docs {
        let gg = doc_global_gain(doc, per_intent, intents, scheme)?;
        if gg > 0.0 {
            entries.push((gg, doc));
        }
    }
    entries.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .expect("gains are finite")
            .then_with(|| a.1.cmp(b.1))
    });
    Ok(entries.into_iter().map(|(gg, _)| gg).collect())
}

fn covered_intents(per_intent: &IntentJudgments, intents: &[Intent], doc: &str) -> Vec<usize> {
    intents
        .iter()
        .enumerate()
        .filter(|(_, intent)| intent_level(per_intent, intent, doc) > 0)
        .map(|(idx, _)| idx)
        .collect()
}

/// A ranking scored by probability-weighted global gains, plus which
/// intents each rank covers.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalGainList {
    scored: ScoredList,
    covered: Vec<Vec<usize>>,
    n_intents: usize,
}

/// Base measure applied to global gains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiversityBase {
    /// Microsoft-style normalized discounted cumulative gain.
    MsNdcg,
    /// Cutoff blended-ratio measure.
    Q { beta: f64 },
}

/// Scores a ranking by plain global gains.
pub fn global_gain_list(
    ranking: &[&str],
    per_intent: &IntentJudgments,
    intents: &[Intent],
    scheme: &GainScheme,
) -> Result<GlobalGainList, DiversityError> {
    check_intents(per_intent, intents)?;
    let mut gains = Vec::with_capacity(ranking.len());
    let mut covered = Vec::with_capacity(ranking.len());
    for doc in ranking {
        gains.push(doc_global_gain(doc, per_intent, intents, scheme)?);
        covered.push(covered_intents(per_intent, intents, doc));
    }
    let ideal = ideal_global_gains(per_intent, intents, scheme)?;
    Ok(GlobalGainList {
        scored: ScoredList::from_gain_vectors(gains, ideal),
        covered,
        n_intents: intents.len(),
    })
}

/// Scores a ranking by global gains where navigational intents pay out only
/// on the first document relevant to them; later hits on an already-served
/// navigational intent earn nothing. The ideal ranking is the plain one.
pub fn din_global_gain_list(
    ranking: &[&str],
    per_intent: &IntentJudgments,
    intents: &[Intent],
    scheme: &GainScheme,
) -> Result<GlobalGainList, DiversityError> {
    check_intents(per_intent, intents)?;
    let mut served = alloc::vec![false; intents.len()];
    let mut gains = Vec::with_capacity(ranking.len());
    let mut covered = Vec::with_capacity(ranking.len());
    for doc in ranking {
        let mut gg = 0.0;
        for (idx, intent) in intents.iter().enumerate() {
            let gain = scheme.gain(intent_level(per_intent, intent, doc))?;
            match intent.kind {
                IntentKind::Informational => gg += intent.prob * gain,
                IntentKind::Navigational => {
                    if !served[idx] {
                        gg += intent.prob * gain;
                    }
                }
            }
        }
        let cov = covered_intents(per_intent, intents, doc);
        for &idx in &cov {
            served[idx] = true;
        }
        gains.push(gg);
        covered.push(cov);
    }
    let ideal = ideal_global_gains(per_intent, intents, scheme)?;
    Ok(GlobalGainList {
        scored: ScoredList::from_gain_vectors(gains, ideal),
        covered,
        n_intents: intents.len(),
    })
}

/// Scores a vertical-tagged ranking: each item's intentwise gain is scaled
/// by the probability that its vertical suits the intent, and an item whose
/// id equals its vertical tag is an embedded vertical result, rewarded with
/// `vertical_gain` on every intent. Missing vertical probabilities count as
/// zero. The ideal ranking is the plain, unscaled one.
pub fn vi_global_gain_list(
    entries: &[(&str, Option<&str>)],
    per_intent: &IntentJudgments,
    intents: &[Intent],
    scheme: &GainScheme,
    vertical_gain: f64,
) -> Result<GlobalGainList, DiversityError> {
    check_intents(per_intent, intents)?;
    if !vertical_gain.is_finite() || vertical_gain < 0.0 {
        return Err(DiversityError::BadGainValue {
            value: vertical_gain,
        });
    }
    let mut gains = Vec::with_capacity(entries.len());
    let mut covered = Vec::with_capacity(entries.len());
    for &(doc, vertical) in entries {
        let Some(vertical) = vertical else {
            return Err(DiversityError::MissingVertical {
                doc: String::from(doc),
            });
        };
        let is_vertical_entry = doc == vertical;
        let mut gg = 0.0;
        for intent in intents {
            let gain = if is_vertical_entry {
                vertical_gain
            } else {
                scheme.gain(intent_level(per_intent, intent, doc))?
            };
            let fit = intent.verticals.get(vertical).copied().unwrap_or(0.0);
            gg += intent.prob * fit * gain;
        }
        gains.push(gg);
        covered.push(covered_intents(per_intent, intents, doc));
    }
    let ideal = ideal_global_gains(per_intent, intents, scheme)?;
    Ok(GlobalGainList {
        scored: ScoredList::from_gain_vectors(gains, ideal),
        covered,
        n_intents: intents.len(),
    })
}

impl GlobalGainList {
    /// The global gains viewed as a plain scored list.
    pub fn scored(&self) -> &ScoredList {
        &self.scored
    }

    pub fn len(&self) -> usize {
        self.scored.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scored.is_empty()
    }

    /// Global gain at a rank (1-based).
    pub fn gain_at(&self, rank: usize) -> f64 {
        self.scored.gain_at(rank)
    }

    /// Number of declared intents.
    pub fn intent_count(&self) -> usize {
        self.n_intents
    }

    /// Fraction of the topic's intents covered by the top `l`.
    pub fn intent_recall_at(&self, l: usize) -> f64 {
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        for cov in self.covered.iter().take(l) {
            seen.extend(cov.iter().copied());
        }
        seen.len() as f64 / self.n_intents as f64
    }

    /// Ad hoc base measure applied to the global gains. `None` when no
    /// document has positive global gain.
    pub fn d_measure_at(&self, l: usize, base: DiversityBase) -> Option<f64> {
        match base {
            DiversityBase::MsNdcg => self.scored.ms_ndcg_at(l),
            DiversityBase::Q { beta } => self.scored.q_at(l, beta),
        }
    }

    /// Blend of intent recall and the base measure; see [`d_sharp`].
    pub fn d_sharp_at(
        &self,
        l: usize,
        base: DiversityBase,
        gamma: f64,
    ) -> Result<Option<f64>, DiversityError> {
        match self.d_measure_at(l, base) {
            None => {
                check_weight(gamma)?;
                Ok(None)
            }
            Some(d) => Ok(Some(d_sharp(self.intent_recall_at(l), d, gamma)?)),
        }
    }
}

/// Blends intent recall with a global-gain base measure:
/// `gamma * i_rec + (1 - gamma) * d_measure`.
pub fn d_sharp(i_rec: f64, d_measure: f64, gamma: f64) -> Result<f64, DiversityError> {
    check_weight(gamma)?;
    Ok(gamma * i_rec + (1.0 - gamma) * d_measure)
}

/// Expectation over intents of a per-intent measure: the cutoff
/// blended-ratio measure for informational intents and the
/// preferred-rank blended ratio for navigational ones, each weighted by the
/// intent's probability. Intents without relevant documents contribute 0.
pub fn p_plus_q_at(
    ranking: &[&str],
    per_intent: &IntentJudgments,
    intents: &[Intent],
    scheme: &GainScheme,
    l: usize,
    beta: f64,
) -> Result<f64, DiversityError> {
    let empty = BTreeMap::new();
    let mut sum = 0.0;
    for intent in intents {
        let judged = per_intent.get(&intent.id).unwrap_or(&empty);
        let sl = build_scored_list(ranking, judged, scheme, &ScoreOptions::default())?;
        let value = match intent.kind {
            IntentKind::Informational => sl.q_at(l, beta).unwrap_or(0.0),
            IntentKind::Navigational => sl.p_plus(l, beta),
        };
        sum += intent.prob * value;
    }
    Ok(sum)
}

/// Accuracy of second-level-to-first-level assignments against gold.
/// Every scored item must have a gold assignment.
pub fn h_score(
    system: &BTreeMap<String, String>,
    gold: &BTreeMap<String, String>,
) -> Result<f64, DiversityError> {
    if system.is_empty() {
        return Err(DiversityError::EmptyAssignments);
    }
    let mut matches = 0usize;
    for (item, parent) in system {
        let Some(expected) = gold.get(item) else {
            return Err(DiversityError::MissingGoldAssignment { item: item.clone() });
        };
        matches += usize::from(parent == expected);
    }
    Ok(matches as f64 / system.len() as f64)
}

/// Hierarchy score: assignment accuracy times a blend of the two levels'
/// diversity scores, `h * (alpha * first_level + (1 - alpha) * second_level)`.
pub fn h_measure(
    h_score: f64,
    first_level: f64,
    second_level: f64,
    alpha: f64,
) -> Result<f64, DiversityError> {
    check_weight(alpha)?;
    Ok(h_score * (alpha * first_level + (1.0 - alpha) * second_level))
}

/// How appropriate the returned verticals are for the intents of the
/// returned items: per rank, the vertical's probability under the item's
/// intent, normalized by the intent's best vertical, averaged over `l`
/// slots (short rankings are penalized).
pub fn v_score_at(
    entries: &[(&str, Option<&str>)],
    subtopic_intents: &BTreeMap<String, String>,
    intents: &[Intent],
    l: usize,
) -> Result<f64, DiversityError> {
    debug_assert!(l >= 1);
    let mut sum = 0.0;
    for &(doc, vertical) in entries.iter().take(l) {
        let Some(vertical) = vertical else {
            return Err(DiversityError::MissingVertical {
                doc: String::from(doc),
            });
        };
        let Some(intent_id) = subtopic_intents.get(doc) else {
            return Err(DiversityError::UnmappedItem {
                doc: String::from(doc),
            });
        };
        let Some(intent) = intents.iter().find(|i| &i.id == intent_id) else {
            return Err(DiversityError::UnknownIntent {
                intent: intent_id.clone(),
            });
        };
        let best = intent
            .verticals
            .values()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        if !best.is_finite() || best <= 0.0 {
            return Err(DiversityError::NoVerticalProfile {
                intent: intent.id.clone(),
            });
        }
        let fit = intent.verticals.get(vertical).copied().unwrap_or(0.0);
        sum += fit / best;
    }
    Ok(sum / l as f64)
}

/// Blend of a diversity score and a vertical-appropriateness score:
/// `lambda * d_sharp + (1 - lambda) * v_score`.
pub fn qu_score(d_sharp: f64, v_score: f64, lambda: f64) -> Result<f64, DiversityError> {
    check_weight(lambda)?;
    Ok(lambda * d_sharp + (1.0 - lambda) * v_score)
}
