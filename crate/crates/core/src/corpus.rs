//! In-memory judgment and ranking data.
//!
//! These types hold parsed evaluation inputs: graded judgments (optionally
//! split by intent), ranked runs, intent sets with probabilities and vertical
//! profiles, equivalence classes, and subtopic-to-intent mappings. Structural
//! invariants (no duplicates, probabilities in range) are enforced here so
//! the measure kernels can assume well-formed data.

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Tolerance allowed when checking that intent probabilities sum to at most 1.
pub const PROB_MASS_EPSILON: f64 = 1e-9;

/// Violation of a structural invariant on corpus data.
#[derive(Debug, Clone, PartialEq)]
pub enum CorpusError {
    /// An identifier was empty or contained whitespace.
    BadToken(String),
    /// The same (topic, intent, document) triple was judged twice.
    DuplicateJudgment {
        topic: String,
        intent: Option<String>,
        doc: String,
    },
    /// A document appeared twice in one topic's ranking.
    DuplicateRunDoc { topic: String, doc: String },
    /// A run entry carried a NaN or infinite score.
    NonFiniteScore { topic: String, doc: String },
    /// An intent id was declared twice for one topic.
    DuplicateIntent { topic: String, intent: String },
    /// A probability was outside [0, 1].
    ProbOutOfRange { value: f64 },
    /// A topic's intent probabilities sum to more than 1.
    ProbMassExceeded { topic: String, sum: f64 },
    /// A vertical or judgment referenced an intent that was never declared.
    UnknownIntent { topic: String, intent: String },
    /// A (topic, intent, vertical) probability was declared twice.
    DuplicateVertical {
        topic: String,
        intent: String,
        vertical: String,
    },
    /// A document was assigned to two different equivalence classes.
    ConflictingClass { topic: String, doc: String },
    /// A subtopic was mapped to two different intents.
    ConflictingSubtopic { topic: String, subtopic: String },
}

impl fmt::Display for CorpusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusError::BadToken(t) => {
                write!(f, "identifier {t:?} is empty or contains whitespace")
            }
            CorpusError::DuplicateJudgment { topic, intent, doc } => match intent {
                Some(i) => write!(
                    f,
                    "duplicate judgment for topic {topic}, intent {i}, doc {doc}"
                ),
                None => write!(f, "duplicate judgment for topic {topic}, doc {doc}"),
            },
            CorpusError::DuplicateRunDoc { topic, doc } => {
                write!(f, "doc {doc} ranked twice for topic {topic}")
            }
            CorpusError::NonFiniteScore { topic, doc } => {
                write!(f, "non-finite score for topic {topic}, doc {doc}")
            }
            CorpusError::DuplicateIntent { topic, intent } => {
                write!(f, "intent {intent} declared twice for topic {topic}")
            }
            CorpusError::ProbOutOfRange { value } => {
                write!(f, "probability {value} is outside [0, 1]")
            }
            CorpusError::ProbMassExceeded { topic, sum } => {
                write!(f, "intent probabilities for topic {topic} sum to {sum} > 1")
            }
            CorpusError::UnknownIntent { topic, intent } => {
                write!(f, "unknown intent {intent} for topic {topic}")
            }
            CorpusError::DuplicateVertical {
                topic,
                intent,
                vertical,
            } => write!(
                f,
                "vertical {vertical} declared twice for topic {topic}, intent {intent}"
            ),
            CorpusError::ConflictingClass { topic, doc } => {
                write!(f, "doc {doc} belongs to two classes for topic {topic}")
            }
            CorpusError::ConflictingSubtopic { topic, subtopic } => {
                write!(
                    f,
                    "subtopic {subtopic} mapped to two intents for topic {topic}"
                )
            }
        }
    }
}

impl core::error::Error for CorpusError {}

fn check_token(s: &str) -> Result<(), CorpusError> {
    if s.is_empty() || s.chars().any(char::is_whitespace) {
        return Err(CorpusError::BadToken(s.to_owned()));
    }
    Ok(())
}

/// Graded relevance judgments for a collection of topics.
///
/// Each topic holds a topic-level judgment map plus any number of per-intent
/// maps. Levels are non-negative integers where 0 means judged nonrelevant.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GradedQrels {
    topics: BTreeMap<String, TopicJudgments>,
}

/// One topic's judgments, split into topic-level and per-intent maps.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TopicJudgments {
    topic_level: BTreeMap<String, u32>,
    per_intent: BTreeMap<String, BTreeMap<String, u32>>,
}

impl TopicJudgments {
    /// Topic-level judgments: document id to relevance level.
    pub fn topic_level(&self) -> &BTreeMap<String, u32> {
        &self.topic_level
    }

    /// Per-intent judgment maps, keyed by intent id.
    pub fn per_intent(&self) -> &BTreeMap<String, BTreeMap<String, u32>> {
        &self.per_intent
    }

    /// Judgments for one intent, if any were recorded.
    pub fn intent(&self, intent: &str) -> Option<&BTreeMap<String, u32>> {
        self.per_intent.get(intent)
    }

    /// True when the document was judged at topic level or for any intent.
    pub fn is_judged(&self, doc: &str) -> bool {
        self.topic_level.contains_key(doc) || self.per_intent.values().any(|m| m.contains_key(doc))
    }

    /// Every judged document id, topic-level and per-intent combined.
    pub fn judged_docs(&self) -> BTreeSet<&str> {
        let mut docs: BTreeSet<&str> = self.topic_level.keys().map(String::as_str).collect();
        for m in self.per_intent.values() {
            docs.extend(m.keys().map(String::as_str));
        }
        docs
    }

    /// Highest level appearing anywhere in this topic's judgments.
    pub fn max_level(&self) -> u32 {
        let topic_max = self.topic_level.values().copied().max().unwrap_or(0);
        let intent_max = self
            .per_intent
            .values()
            .flat_map(|m| m.values().copied())
            .max()
            .unwrap_or(0);
        topic_max.max(intent_max)
    }
}

impl GradedQrels {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records one judgment. `intent` is `None` for topic-level judgments.
    pub fn add(
        &mut self,
        topic: &str,
        intent: Option<&str>,
        doc: &str,
        level: u32,
    ) -> Result<(), CorpusError> {
        check_token(topic)?;
        check_token(doc)?;
        if let Some(i) = intent {
            check_token(i)?;
        }
        let entry = self.topics.entry(topic.to_owned()).or_default();
        let map = match intent {
            None => &mut entry.topic_level,
            Some(i) => entry.per_intent.entry(i.to_owned()).or_default(),
        };
        if map.insert(doc.to_owned(), level).is_some() {
            return Err(CorpusError::DuplicateJudgment {
                topic: topic.to_owned(),
                intent: intent.map(str::to_owned),
                doc: doc.to_owned(),
            });
        }
        Ok(())
    }

    pub fn topic(&self, topic: &str) -> Option<&TopicJudgments> {
        self.topics.get(topic)
    }

    pub fn topics(&self) -> impl Iterator<Item = (&str, &TopicJudgments)> {
        self.topics.iter().map(|(t, j)| (t.as_str(), j))
    }

    pub fn topic_ids(&self) -> impl Iterator<Item = &str> {
        self.topics.keys().map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.topics.is_empty()
    }

    /// Highest relevance level anywhere in the collection.
    pub fn max_level(&self) -> u32 {
        self.topics
            .values()
            .map(TopicJudgments::max_level)
            .max()
            .unwrap_or(0)
    }
}

/// One entry of a ranked run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunEntry {
    pub doc: String,
    pub score: f64,
    /// Vertical tag from the optional seventh run-file column.
    pub vertical: Option<String>,
}

/// A system run: per topic, documents in ranked order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RankedRun {
    topics: BTreeMap<String, Vec<RunEntry>>,
    tag: Option<String>,
}

impl RankedRun {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends the next-ranked entry for a topic.
    pub fn push(
        &mut self,
        topic: &str,
        doc: &str,
        score: f64,
        vertical: Option<&str>,
    ) -> Result<(), CorpusError> {
        check_token(topic)?;
        check_token(doc)?;
        if let Some(v) = vertical {
            check_token(v)?;
        }
        if !score.is_finite() {
            return Err(CorpusError::NonFiniteScore {
                topic: topic.to_owned(),
                doc: doc.to_owned(),
            });
        }
        let entries = self.topics.entry(topic.to_owned()).or_default();
        if entries.iter().any(|e| e.doc == doc) {
            return Err(CorpusError::DuplicateRunDoc {
                topic: topic.to_owned(),
                doc: doc.to_owned(),
            });
        }
        entries.push(RunEntry {
            doc: doc.to_owned(),
            score,
            vertical: vertical.map(str::to_owned),
        });
        Ok(())
    }

    /// Ensures a topic exists even if it has no entries.
    pub fn ensure_topic(&mut self, topic: &str) -> Result<(), CorpusError> {
        check_token(topic)?;
        self.topics.entry(topic.to_owned()).or_default();
        Ok(())
    }

    pub fn set_tag(&mut self, tag: &str) {
        self.tag = Some(tag.to_owned());
    }

    pub fn tag(&self) -> Option<&str> {
        self.tag.as_deref()
    }

    pub fn topic(&self, topic: &str) -> Option<&[RunEntry]> {
        self.topics.get(topic).map(Vec::as_slice)
    }

    pub fn topics(&self) -> impl Iterator<Item = (&str, &[RunEntry])> {
        self.topics.iter().map(|(t, e)| (t.as_str(), e.as_slice()))
    }

    pub fn topic_ids(&self) -> impl Iterator<Item = &str> {
        self.topics.keys().map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.topics.is_empty()
    }
}

/// Whether an intent models an informational or a navigational need.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntentKind {
    Informational,
    Navigational,
}

/// One intent of a topic: probability, kind, and vertical profile.
#[derive(Debug, Clone, PartialEq)]
pub struct Intent {
    pub id: String,
    pub prob: f64,
    pub kind: IntentKind,
    /// Probability that each vertical is appropriate for this intent.
    pub verticals: BTreeMap<String, f64>,
}

/// Intents per topic, in declaration order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IntentSet {
    topics: BTreeMap<String, Vec<Intent>>,
}

fn check_prob(p: f64) -> Result<(), CorpusError> {
    if !p.is_finite() || !(0.0..=1.0).contains(&p) {
        return Err(CorpusError::ProbOutOfRange { value: p });
    }
    Ok(())
}

impl IntentSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares an intent. Per-topic probabilities may sum to at most 1.
    pub fn add_intent(
        &mut self,
        topic: &str,
        intent: &str,
        prob: f64,
        kind: IntentKind,
    ) -> Result<(), CorpusError> {
        check_token(topic)?;
        check_token(intent)?;
        check_prob(prob)?;
        let intents = self.topics.entry(topic.to_owned()).or_default();
        if intents.iter().any(|i| i.id == intent) {
            return Err(CorpusError::DuplicateIntent {
                topic: topic.to_owned(),
                intent: intent.to_owned(),
            });
        }
        let sum: f64 = intents.iter().map(|i| i.prob).sum::<f64>() + prob;
        if sum > 1.0 + PROB_MASS_EPSILON {
            return Err(CorpusError::ProbMassExceeded {
                topic: topic.to_owned(),
                sum,
            });
        }
        intents.push(Intent {
            id: intent.to_owned(),
            prob,
            kind,
            verticals: BTreeMap::new(),
        });
        Ok(())
    }

    /// Records the probability that a vertical suits an intent.
    pub fn set_vertical_prob(
        &mut self,
        topic: &str,
        intent: &str,
        vertical: &str,
        prob: f64,
    ) -> Result<(), CorpusError> {
        check_token(vertical)?;
        check_prob(prob)?;
        let Some(found) = self
            .topics
            .get_mut(topic)
            .and_then(|v| v.iter_mut().find(|i| i.id == intent))
        else {
            return Err(CorpusError::UnknownIntent {
                topic: topic.to_owned(),
                intent: intent.to_owned(),
            });
        };
        if found.verticals.insert(vertical.to_owned(), prob).is_some() {
            return Err(CorpusError::DuplicateVertical {
                topic: topic.to_owned(),
                intent: intent.to_owned(),
                vertical: vertical.to_owned(),
            });
        }
        Ok(())
    }

    pub fn topic(&self, topic: &str) -> Option<&[Intent]> {
        self.topics.get(topic).map(Vec::as_slice)
    }

    pub fn topics(&self) -> impl Iterator<Item = (&str, &[Intent])> {
        self.topics.iter().map(|(t, v)| (t.as_str(), v.as_slice()))
    }

    pub fn is_empty(&self) -> bool {
        self.topics.is_empty()
    }
}

/// Equivalence classes of interchangeable documents, per topic.
///
/// Stored as a document-to-class map; a document may belong to at most one
/// class per topic.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EquivalenceClasses {
    topics: BTreeMap<String, BTreeMap<String, String>>,
}

impl EquivalenceClasses {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, topic: &str, class: &str, doc: &str) -> Result<(), CorpusError> {
        check_token(topic)?;
        check_token(class)?;
        check_token(doc)?;
        let map = self.topics.entry(topic.to_owned()).or_default();
        match map.get(doc) {
            Some(existing) if existing != class => Err(CorpusError::ConflictingClass {
                topic: topic.to_owned(),
                doc: doc.to_owned(),
            }),
            _ => {
                map.insert(doc.to_owned(), class.to_owned());
                Ok(())
            }
        }
    }

    /// Document-to-class map for one topic.
    pub fn topic(&self, topic: &str) -> Option<&BTreeMap<String, String>> {
        self.topics.get(topic)
    }

    pub fn topics(&self) -> impl Iterator<Item = (&str, &BTreeMap<String, String>)> {
        self.topics.iter().map(|(t, m)| (t.as_str(), m))
    }

    pub fn is_empty(&self) -> bool {
        self.topics.is_empty()
    }
}

/// Which intent each returned subtopic string belongs to, per topic.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SubtopicMap {
    topics: BTreeMap<String, BTreeMap<String, String>>,
}

impl SubtopicMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, topic: &str, subtopic: &str, intent: &str) -> Result<(), CorpusError> {
        check_token(topic)?;
        check_token(subtopic)?;
        check_token(intent)?;
        let map = self.topics.entry(topic.to_owned()).or_default();
        match map.get(subtopic) {
            Some(existing) if existing != intent => Err(CorpusError::ConflictingSubtopic {
                topic: topic.to_owned(),
                subtopic: subtopic.to_owned(),
            }),
            _ => {
                map.insert(subtopic.to_owned(), intent.to_owned());
                Ok(())
            }
        }
    }

    /// Subtopic-to-intent map for one topic.
    pub fn topic(&self, topic: &str) -> Option<&BTreeMap<String, String>> {
        self.topics.get(topic)
    }

    pub fn topics(&self) -> impl Iterator<Item = (&str, &BTreeMap<String, String>)> {
        self.topics.iter().map(|(t, m)| (t.as_str(), m))
    }

    pub fn is_empty(&self) -> bool {
        self.topics.is_empty()
    }
}
