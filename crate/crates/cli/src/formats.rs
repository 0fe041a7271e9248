//! Whitespace-separated text formats with line-numbered diagnostics.
//!
//! Every parser either returns a fully validated value or an error naming
//! the offending line; nothing is silently dropped. Serializers normalize
//! whitespace to single spaces and emit one record per line, so
//! parse-serialize-parse is the identity on the parsed value.
//!
//! Formats:
//! - qrels: `topic intent doc level`, intent `0` for topic-level judgments
//! - run: `topic Q0 doc rank score tag` plus an optional vertical column
//! - intents: `topic intent prob [inf|nav]`
//! - verticals: `topic intent vertical prob`
//! - classes: `topic class doc`
//! - submap: `topic subtopic intent`
//! - labels: `topic doc score...` (one score per assessor)
//!
//! `#` starts a comment in every format except runs.

use gradeval_core::corpus::{
    EquivalenceClasses, GradedQrels, IntentKind, IntentSet, RankedRun, SubtopicMap,
};
use gradeval_core::gain::AssessorLabels;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

/// A rejected input line.
#[derive(Debug, Error, PartialEq)]
pub enum FormatError {
    /// The line does not have the format's shape (arity, numeric fields).
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// The line parses but breaks a domain invariant.
    #[error("line {line}: {msg}")]
    Invalid { line: usize, msg: String },
}

fn parse_err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        msg: msg.into(),
    }
}

fn invalid(line: usize, err: impl ToString) -> FormatError {
    FormatError::Invalid {
        line,
        msg: err.to_string(),
    }
}

/// Yields (1-based line number, fields) for non-empty lines, stripping `#`
/// comments when asked.
fn records(text: &str, comments: bool) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(move |(idx, raw)| {
        let content = if comments {
            raw.split('#').next().unwrap_or("")
        } else {
            raw
        };
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.is_empty() {
            None
        } else {
            Some((idx + 1, fields))
        }
    })
}

/// Intent column value `0` marks a topic-level judgment.
pub const TOPIC_LEVEL_INTENT: &str = "0";

/// Parses graded relevance judgments: `topic intent doc level`.
pub fn parse_qrels(text: &str) -> Result<GradedQrels, FormatError> {
    let mut qrels = GradedQrels::new();
    for (line, f) in records(text, true) {
        let [topic, intent, doc, level] = f.as_slice() else {
            return Err(parse_err(
                line,
                format!(
                    "expected `topic intent doc level`, found {} fields",
                    f.len()
                ),
            ));
        };
        let level: u32 = level.parse().map_err(|_| {
            parse_err(
                line,
                format!("relevance level {level:?} is not a non-negative integer"),
            )
        })?;
        let intent = (*intent != TOPIC_LEVEL_INTENT).then_some(*intent);
        qrels
            .add(topic, intent, doc, level)
            .map_err(|e| invalid(line, e))?;
    }
    Ok(qrels)
}

/// Serializes qrels: topic-level judgments first, then per-intent ones.
pub fn serialize_qrels(qrels: &GradedQrels) -> String {
    let mut out = String::new();
    for (topic, judgments) in qrels.topics() {
        for (doc, level) in judgments.topic_level() {
            let _ = writeln!(out, "{topic} {TOPIC_LEVEL_INTENT} {doc} {level}");
        }
        for (intent, docs) in judgments.per_intent() {
            for (doc, level) in docs {
                let _ = writeln!(out, "{topic} {intent} {doc} {level}");
            }
        }
    }
    out
}

/// Parses a run: `topic Q0 doc rank score tag [vertical]`.
///
/// File order is the ranking; the rank column is only cross-checked and a
/// disagreement is reported as a warning, not an error.
pub fn parse_run(text: &str) -> Result<(RankedRun, Vec<String>), FormatError> {
    let mut run = RankedRun::new();
    let mut warnings = Vec::new();
    let mut last_rank: BTreeMap<&str, u64> = BTreeMap::new();
    for (line, f) in records(text, false) {
        if f.len() != 6 && f.len() != 7 {
            return Err(parse_err(
                line,
                format!(
                    "expected `topic Q0 doc rank score tag [vertical]`, found {} fields",
                    f.len()
                ),
            ));
        }
        let (topic, doc, rank, score, tag) = (f[0], f[2], f[3], f[4], f[5]);
        let rank: u64 = rank
            .parse()
            .map_err(|_| parse_err(line, format!("rank {rank:?} is not a positive integer")))?;
        let score: f64 = score
            .parse()
            .map_err(|_| parse_err(line, format!("score {score:?} is not a number")))?;
        match run.tag() {
            None => run.set_tag(tag),
            Some(t) if t != tag => warnings.push(format!(
                "line {line}: run tag {tag:?} differs from {t:?}; keeping the first"
            )),
            _ => {}
        }
        if let Some(&prev) = last_rank.get(topic) {
            if rank <= prev {
                warnings.push(format!(
                    "line {line}: rank column goes {prev} -> {rank}; file order wins"
                ));
            }
        }
        last_rank.insert(topic, rank);
        run.push(topic, doc, score, f.get(6).copied())
            .map_err(|e| invalid(line, e))?;
    }
    Ok((run, warnings))
}

/// Serializes a run with ranks renumbered from 1 in file order.
pub fn serialize_run(run: &RankedRun) -> String {
    let tag = run.tag().unwrap_or("run");
    let mut out = String::new();
    for (topic, entries) in run.topics() {
        for (idx, entry) in entries.iter().enumerate() {
            let _ = write!(
                out,
                "{topic} Q0 {doc} {rank} {score} {tag}",
                doc = entry.doc,
                rank = idx + 1,
                score = entry.score
            );
            if let Some(v) = &entry.vertical {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
    }
    out
}

/// Parses intent declarations: `topic intent prob [tag]`, where the tag is
/// `inf`/`informational` (the default) or `nav`/`navigational`.
pub fn parse_intents(text: &str) -> Result<IntentSet, FormatError> {
    let mut intents = IntentSet::new();
    for (line, f) in records(text, true) {
        if f.len() != 3 && f.len() != 4 {
            return Err(parse_err(
                line,
                format!(
                    "expected `topic intent prob [tag]`, found {} fields",
                    f.len()
                ),
            ));
        }
        let prob: f64 = f[2]
            .parse()
            .map_err(|_| parse_err(line, format!("probability {:?} is not a number", f[2])))?;
        let kind = match f.get(3).copied() {
            None => IntentKind::Informational,
            Some(tag) => match tag.to_ascii_lowercase().as_str() {
                "inf" | "informational" => IntentKind::Informational,
                "nav" | "navigational" => IntentKind::Navigational,
                _ => {
                    return Err(parse_err(
                        line,
                        format!("intent tag {tag:?} is neither `inf` nor `nav`"),
                    ))
                }
            },
        };
        intents
            .add_intent(f[0], f[1], prob, kind)
            .map_err(|e| invalid(line, e))?;
    }
    Ok(intents)
}

/// Serializes intents in declaration order with explicit tags.
pub fn serialize_intents(intents: &IntentSet) -> String {
    let mut out = String::new();
    for (topic, list) in intents.topics() {
        for intent in list {
            let tag = match intent.kind {
                IntentKind::Informational => "inf",
                IntentKind::Navigational => "nav",
            };
            let _ = writeln!(
                out,
                "{topic} {id} {prob} {tag}",
                id = intent.id,
                prob = intent.prob
            );
        }
    }
    out
}

/// Parses vertical probabilities (`topic intent vertical prob`) into an
/// already-parsed intent set.
pub fn parse_verticals(intents: &mut IntentSet, text: &str) -> Result<(), FormatError> {
    for (line, f) in records(text, true) {
        let [topic, intent, vertical, prob] = f.as_slice() else {
            return Err(parse_err(
                line,
                format!(
                    "expected `topic intent vertical prob`, found {} fields",
                    f.len()
                ),
            ));
        };
        let prob: f64 = prob
            .parse()
            .map_err(|_| parse_err(line, format!("probability {prob:?} is not a number")))?;
        intents
            .set_vertical_prob(topic, intent, vertical, prob)
            .map_err(|e| invalid(line, e))?;
    }
    Ok(())
}

/// Serializes the vertical probabilities of an intent set.
pub fn serialize_verticals(intents: &IntentSet) -> String {
    let mut out = String::new();
    for (topic, list) in intents.topics() {
        for intent in list {
            for (vertical, prob) in &intent.verticals {
                let _ = writeln!(out, "{topic} {id} {vertical} {prob}", id = intent.id);
            }
        }
    }
    out
}

/// Parses equivalence classes: `topic class doc`.
pub fn parse_classes(text: &str) -> Result<EquivalenceClasses, FormatError> {
    let mut classes = EquivalenceClasses::new();
    for (line, f) in records(text, true) {
        let [topic, class, doc] = f.as_slice() else {
            return Err(parse_err(
                line,
                format!("expected `topic class doc`, found {} fields", f.len()),
            ));
        };
        classes
            .add(topic, class, doc)
            .map_err(|e| invalid(line, e))?;
    }
    Ok(classes)
}

/// Serializes equivalence classes, one `topic class doc` line per member.
pub fn serialize_classes(classes: &EquivalenceClasses) -> String {
    let mut out = String::new();
    for (topic, members) in classes.topics() {
        for (doc, class) in members {
            let _ = writeln!(out, "{topic} {class} {doc}");
        }
    }
    out
}

/// Parses the subtopic-to-intent mapping: `topic subtopic intent`.
pub fn parse_submap(text: &str) -> Result<SubtopicMap, FormatError> {
    let mut submap = SubtopicMap::new();
    for (line, f) in records(text, true) {
        let [topic, subtopic, intent] = f.as_slice() else {
            return Err(parse_err(
                line,
                format!("expected `topic subtopic intent`, found {} fields", f.len()),
            ));
        };
        submap
            .add(topic, subtopic, intent)
            .map_err(|e| invalid(line, e))?;
    }
    Ok(submap)
}

/// Serializes a subtopic-to-intent mapping.
pub fn serialize_submap(submap: &SubtopicMap) -> String {
    let mut out = String::new();
    for (topic, entries) in submap.topics() {
        for (subtopic, intent) in entries {
            let _ = writeln!(out, "{topic} {subtopic} {intent}");
        }
    }
    out
}

/// Parses per-document assessor scores: `topic doc score...`.
pub fn parse_labels(text: &str) -> Result<AssessorLabels, FormatError> {
    let mut labels = AssessorLabels::new();
    for (line, f) in records(text, true) {
        if f.len() < 3 {
            return Err(parse_err(
                line,
                format!("expected `topic doc score...`, found {} fields", f.len()),
            ));
        }
        let scores: Vec<f64> = f[2..]
            .iter()
            .map(|s| {
                s.parse()
                    .map_err(|_| parse_err(line, format!("score {s:?} is not a number")))
            })
            .collect::<Result<_, _>>()?;
        labels
            .add(f[0], f[1], &scores)
            .map_err(|e| invalid(line, e))?;
    }
    Ok(labels)
}
