//! Batch evaluation: wires parsed judgment, run, and metadata structures to
//! the measure kernels and assembles a deterministic report.
//!
//! Topics are scored independently (and in parallel), then reassembled in
//! lexicographic topic order, so the rendered report is byte-stable across
//! runs and thread counts.

use std::fmt::Write as _;
use std::str::FromStr;

use gradeval_core::adhoc::{build_scored_list, MeasureParams, ScoreOptions};
use gradeval_core::corpus::{
    EquivalenceClasses, GradedQrels, Intent, IntentSet, RankedRun, RunEntry, SubtopicMap,
    TopicJudgments,
};
use gradeval_core::diversity::{self, DiversityBase, GlobalGainList};
use gradeval_core::gain::{GainScheme, GainSpec};
use rayon::prelude::*;
use thiserror::Error;

use crate::measures::{MeasureKind, MeasureSpec};

/// Why an evaluation could not produce a report.
#[derive(Debug, Error)]
pub enum DriverError {
    /// The request itself is unusable: bad parameters, missing inputs.
    #[error("{0}")]
    Validation(String),
    /// One topic's data cannot be scored as requested.
    #[error("topic {topic}: {msg}")]
    Topic { topic: String, msg: String },
}

/// What to print for a topic where a measure is undefined (no relevant
/// documents, or required per-topic metadata is absent).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum R0Policy {
    /// Report the value as 0.
    #[default]
    Zero,
    /// Omit the row and leave the topic out of that measure's mean.
    Exclude,
}

impl FromStr for R0Policy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "zero" => Ok(R0Policy::Zero),
            "exclude" => Ok(R0Policy::Exclude),
            other => Err(format!("unknown policy {other:?}: use zero or exclude")),
        }
    }
}

/// Every numeric knob the measures take.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriverParams {
    /// Patience weight in the blended ratio.
    pub beta: f64,
    /// Intent-recall weight in the sharp diversity blend.
    pub gamma: f64,
    /// First-level weight in the hierarchy blend.
    pub alpha: f64,
    /// Diversity weight in the vertical-aware blend.
    pub lambda: f64,
    /// Logarithm base for the original discounted-gain measures.
    pub log_base: f64,
    /// Base of the exponential stop probability.
    pub err_base: f64,
    /// Gain awarded to an embedded vertical entry on every intent.
    pub vertical_gain: f64,
}

impl Default for DriverParams {
    fn default() -> Self {
        DriverParams {
            beta: 1.0,
            gamma: 0.5,
            alpha: 0.5,
            lambda: 0.5,
            log_base: 2.0,
            err_base: 2.0,
            vertical_gain: 2.0,
        }
    }
}

impl DriverParams {
    fn measure_params(&self) -> MeasureParams {
        MeasureParams {
            beta: self.beta,
            log_base: self.log_base,
            err_base: self.err_base,
        }
    }

    pub fn validate(&self) -> Result<(), DriverError> {
        self.measure_params()
            .validate()
            .map_err(|e| DriverError::Validation(e.into()))?;
        for (name, value) in [
            ("gamma", self.gamma),
            ("alpha", self.alpha),
            ("lambda", self.lambda),
        ] {
            if !value.is_finite() || !(0.0..=1.0).contains(&value) {
                return Err(DriverError::Validation(format!(
                    "{name} must be in [0, 1], got {value}"
                )));
            }
        }
        if !self.vertical_gain.is_finite() || self.vertical_gain < 0.0 {
            return Err(DriverError::Validation(format!(
                "vertical gain must be finite and >= 0, got {}",
                self.vertical_gain
            )));
        }
        Ok(())
    }
}

/// The full evaluation request.
#[derive(Debug, Clone)]
pub struct EvalOptions {
    pub measures: Vec<MeasureSpec>,
    pub gains: GainSpec,
    pub params: DriverParams,
    /// Drop unjudged documents from every ranking before scoring.
    pub condensed: bool,
    pub r0_policy: R0Policy,
    /// Skip the zero-filled rows for judged topics missing from the run.
    pub run_topics_only: bool,
}

/// Borrowed, already-parsed inputs.
#[derive(Clone, Copy)]
pub struct EvalInputs<'a> {
    pub qrels: &'a GradedQrels,
    pub run: &'a RankedRun,
    pub intents: Option<&'a IntentSet>,
    pub classes: Option<&'a EquivalenceClasses>,
    pub submap: Option<&'a SubtopicMap>,
}

/// One topic's value per requested measure; `None` marks an undefined value
/// that the exclude policy keeps out of the report.
#[derive(Debug, Clone, PartialEq)]
pub struct TopicScores {
    pub topic: String,
    pub values: Vec<Option<f64>>,
}

/// Scores per topic plus per-measure means, ready to render.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub measures: Vec<MeasureSpec>,
    pub topics: Vec<TopicScores>,
    /// Arithmetic mean over the topics that have a value; `None` when none do.
    pub means: Vec<Option<f64>>,
    /// Measure values that were undefined before the policy was applied.
    pub undefined: usize,
    /// Judged topics missing from the run, scored 0 across the board.
    pub qrels_only: usize,
    /// Run topics without judgments, handled per policy.
    pub run_only: usize,
}

impl EvalReport {
    /// Lines `topic<TAB>MEASURE<TAB>value` with four decimals, topics in
    /// lexicographic order and measures in request order, followed by one
    /// mean row per measure under the topic id `all`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for row in &self.topics {
            for (spec, value) in self.measures.iter().zip(&row.values) {
                if let Some(v) = value {
                    let _ = writeln!(out, "{}\t{}\t{:.4}", row.topic, spec, v);
                }
            }
        }
        for (spec, mean) in self.measures.iter().zip(&self.means) {
            if let Some(m) = mean {
                let _ = writeln!(out, "all\t{}\t{:.4}", spec, m);
            }
        }
        out
    }
}

enum Work<'a> {
    Scored(&'a str, &'a [RunEntry], &'a TopicJudgments),
    QrelsOnly(&'a str),
    RunOnly(&'a str),
}

impl Work<'_> {
    fn topic(&self) -> &str {
        match self {
            Work::Scored(t, _, _) | Work::QrelsOnly(t) | Work::RunOnly(t) => t,
        }
    }
}

/// Runs the whole evaluation.
///
/// Run topics with judgments are scored; judged topics missing from the run
/// are scored 0 everywhere (unless `run_topics_only`); run topics without
/// judgments are undefined and fall to the policy, as does any measure that
/// is undefined on a particular topic. An empty run yields an empty report.
pub fn evaluate(inputs: &EvalInputs, options: &EvalOptions) -> Result<EvalReport, DriverError> {
    options.params.validate()?;
    if options.measures.is_empty() {
        return Err(DriverError::Validation("no measures requested".into()));
    }
    if let Some(spec) = options.measures.iter().find(|s| s.kind.needs_intents()) {
        if inputs.intents.is_none() {
            return Err(DriverError::Validation(format!(
                "measure {spec} needs an intent file"
            )));
        }
    }
    if let Some(spec) = options.measures.iter().find(|s| s.kind.needs_submap()) {
        if inputs.submap.is_none() {
            return Err(DriverError::Validation(format!(
                "measure {spec} needs a subtopic-to-intent mapping file"
            )));
        }
    }

    let max_level = inputs.qrels.max_level();
    let scheme = options
        .gains
        .resolve(max_level)
        .map_err(|e| DriverError::Validation(e.to_string()))?;

    let mut work: Vec<Work> = Vec::new();
    let mut run_only = 0usize;
    let mut qrels_only = 0usize;
    if !inputs.run.is_empty() {
        for (topic, entries) in inputs.run.topics() {
            match inputs.qrels.topic(topic) {
                Some(judgments) => work.push(Work::Scored(topic, entries, judgments)),
                None => {
                    run_only += 1;
                    work.push(Work::RunOnly(topic));
                }
            }
        }
        if !options.run_topics_only {
            for topic in inputs.qrels.topic_ids() {
                if inputs.run.topic(topic).is_none() {
                    qrels_only += 1;
                    work.push(Work::QrelsOnly(topic));
                }
            }
        }
        work.sort_by(|a, b| a.topic().cmp(b.topic()));
    }

    let n = options.measures.len();
    let mut topics: Vec<TopicScores> = work
        .par_iter()
        .map(|item| {
            let values = match item {
                Work::RunOnly(_) => Ok(vec![None; n]),
                Work::QrelsOnly(_) => Ok(vec![Some(0.0); n]),
                Work::Scored(topic, entries, judgments) => score_topic(
                    topic, entries, judgments, inputs, options, &scheme, max_level,
                ),
            }?;
            Ok(TopicScores {
                topic: item.topic().to_owned(),
                values,
            })
        })
        .collect::<Result<_, DriverError>>()?;

    let undefined = topics
        .iter()
        .flat_map(|t| &t.values)
        .filter(|v| v.is_none())
        .count();
    if options.r0_policy == R0Policy::Zero {
        for row in &mut topics {
            for value in &mut row.values {
                value.get_or_insert(0.0);
            }
        }
    }

    let means = (0..n)
        .map(|i| {
            let defined: Vec<f64> = topics.iter().filter_map(|t| t.values[i]).collect();
            if defined.is_empty() {
                None
            } else {
                Some(defined.iter().sum::<f64>() / defined.len() as f64)
            }
        })
        .collect();

    Ok(EvalReport {
        measures: options.measures.clone(),
        topics,
        means,
        undefined,
        qrels_only,
        run_only,
    })
}

fn topic_err(topic: &str, err: impl std::fmt::Display) -> DriverError {
    DriverError::Topic {
        topic: topic.to_owned(),
        msg: err.to_string(),
    }
}

fn wants(measures: &[MeasureSpec], pred: impl Fn(MeasureKind) -> bool) -> bool {
    measures.iter().any(|s| pred(s.kind))
}

fn score_topic(
    topic: &str,
    entries: &[RunEntry],
    judgments: &TopicJudgments,
    inputs: &EvalInputs,
    options: &EvalOptions,
    scheme: &GainScheme,
    max_level: u32,
) -> Result<Vec<Option<f64>>, DriverError> {
    let p = &options.params;
    let effective: Vec<&RunEntry> = if options.condensed {
        entries
            .iter()
            .filter(|e| judgments.is_judged(&e.doc))
            .collect()
    } else {
        entries.iter().collect()
    };
    let ranking: Vec<&str> = effective.iter().map(|e| e.doc.as_str()).collect();
    let tagged: Vec<(&str, Option<&str>)> = effective
        .iter()
        .map(|e| (e.doc.as_str(), e.vertical.as_deref()))
        .collect();

    let scored = build_scored_list(
        &ranking,
        judgments.topic_level(),
        scheme,
        &ScoreOptions {
            condensed: false,
            classes: inputs.classes.and_then(|c| c.topic(topic)),
            max_level: Some(max_level),
        },
    )
    .map_err(|e| topic_err(topic, e))?;

    let intents: &[Intent] = inputs.intents.and_then(|s| s.topic(topic)).unwrap_or(&[]);
    let per_intent = judgments.per_intent();
    let submap = inputs.submap.and_then(|s| s.topic(topic));

    // Each global-gain flavor is built at most once per topic.
    let build = |wanted: bool,
                 f: &dyn Fn() -> Result<GlobalGainList, diversity::DiversityError>|
     -> Result<Option<GlobalGainList>, DriverError> {
        if wanted && !intents.is_empty() {
            f().map(Some).map_err(|e| topic_err(topic, e))
        } else {
            Ok(None)
        }
    };
    let plain = build(
        wants(&options.measures, |k| {
            matches!(
                k,
                MeasureKind::IntentRecall
                    | MeasureKind::DivNdcg
                    | MeasureKind::DivQ
                    | MeasureKind::DivSharpNdcg
                    | MeasureKind::DivSharpQ
                    | MeasureKind::Qu
            )
        }),
        &|| diversity::global_gain_list(&ranking, per_intent, intents, scheme),
    )?;
    let fresh = build(
        wants(&options.measures, |k| k == MeasureKind::DinNdcg),
        &|| diversity::din_global_gain_list(&ranking, per_intent, intents, scheme),
    )?;
    let vertical = build(
        wants(&options.measures, |k| {
            matches!(k, MeasureKind::ViNdcg | MeasureKind::ViSharpNdcg)
        }),
        &|| diversity::vi_global_gain_list(&tagged, per_intent, intents, scheme, p.vertical_gain),
    )?;

    let v_score = |l: usize| -> Result<Option<f64>, DriverError> {
        match submap {
            Some(map) if !intents.is_empty() => diversity::v_score_at(&tagged, map, intents, l)
                .map(Some)
                .map_err(|e| topic_err(topic, e)),
            _ => Ok(None),
        }
    };

    let mut values = Vec::with_capacity(options.measures.len());
    for spec in &options.measures {
        // Cutoff presence is enforced at parse time for every kind that
        // reaches an unwrap below.
        let l = spec.cutoff;
        let value = match spec.kind {
            MeasureKind::Ap => scored.average_precision(),
            MeasureKind::Q => match l {
                None => scored.q_measure(p.beta),
                Some(l) => scored.q_at(l, p.beta),
            },
            MeasureKind::RPrec => scored.r_precision(),
            MeasureKind::Precision => Some(scored.precision_at(l.unwrap())),
            MeasureKind::Rr => Some(scored.reciprocal_rank(l)),
            MeasureKind::Hit => Some(scored.hit_at_one()),
            MeasureKind::NGain => scored.normalized_gain_at_one(),
            MeasureKind::Ncg => scored.normalized_cumulative_gain_at(l.unwrap()),
            MeasureKind::Dcg => Some(scored.dcg_original(l.unwrap(), p.log_base)),
            MeasureKind::Ndcg => scored.ndcg_original(l.unwrap(), p.log_base),
            MeasureKind::MsNdcg => scored.ms_ndcg_at(l.unwrap()),
            MeasureKind::Err => Some(scored.err_at(l.unwrap(), p.err_base)),
            MeasureKind::NErr => scored.nerr_at(l.unwrap(), p.err_base),
            MeasureKind::PPlus => {
                let window = l.unwrap_or_else(|| scored.len().max(1));
                Some(scored.p_plus(window, p.beta))
            }
            MeasureKind::IntentRecall => plain.as_ref().map(|g| g.intent_recall_at(l.unwrap())),
            MeasureKind::DivNdcg => plain
                .as_ref()
                .and_then(|g| g.d_measure_at(l.unwrap(), DiversityBase::MsNdcg)),
            MeasureKind::DivQ => plain
                .as_ref()
                .and_then(|g| g.d_measure_at(l.unwrap(), DiversityBase::Q { beta: p.beta })),
            MeasureKind::DivSharpNdcg => match &plain {
                None => None,
                Some(g) => g
                    .d_sharp_at(l.unwrap(), DiversityBase::MsNdcg, p.gamma)
                    .map_err(|e| topic_err(topic, e))?,
            },
            MeasureKind::DivSharpQ => match &plain {
                None => None,
                Some(g) => g
                    .d_sharp_at(l.unwrap(), DiversityBase::Q { beta: p.beta }, p.gamma)
                    .map_err(|e| topic_err(topic, e))?,
            },
            MeasureKind::DinNdcg => fresh
                .as_ref()
                .and_then(|g| g.d_measure_at(l.unwrap(), DiversityBase::MsNdcg)),
            MeasureKind::PPlusQ => {
                if intents.is_empty() {
                    None
                } else {
                    Some(
                        diversity::p_plus_q_at(
                            &ranking,
                            per_intent,
                            intents,
                            scheme,
                            l.unwrap(),
                            p.beta,
                        )
                        .map_err(|e| topic_err(topic, e))?,
                    )
                }
            }
            MeasureKind::ViNdcg => vertical
                .as_ref()
                .and_then(|g| g.d_measure_at(l.unwrap(), DiversityBase::MsNdcg)),
            MeasureKind::ViSharpNdcg => match &vertical {
                None => None,
                Some(g) => g
                    .d_sharp_at(l.unwrap(), DiversityBase::MsNdcg, p.gamma)
                    .map_err(|e| topic_err(topic, e))?,
            },
            MeasureKind::VScore => v_score(l.unwrap())?,
            MeasureKind::Qu => {
                let sharp = match &plain {
                    None => None,
                    Some(g) => g
                        .d_sharp_at(l.unwrap(), DiversityBase::MsNdcg, p.gamma)
                        .map_err(|e| topic_err(topic, e))?,
                };
                match (sharp, v_score(l.unwrap())?) {
                    (Some(d), Some(v)) => {
                        Some(diversity::qu_score(d, v, p.lambda).map_err(|e| topic_err(topic, e))?)
                    }
                    _ => None,
                }
            }
        };
        values.push(value);
    }
    Ok(values)
}

/// What [`condense_run`] did.
#[derive(Debug, Clone, PartialEq)]
pub struct CondenseOutcome {
    pub run: RankedRun,
    /// Entries dropped for lacking any judgment.
    pub removed: usize,
    /// Topics left without a single entry (retained, empty).
    pub emptied: Vec<String>,
}

/// Removes every unjudged document from the run, preserving topic order,
/// within-topic order, scores, vertical tags, and the run tag. A topic whose
/// entries are all unjudged (or that has no judgments at all) stays in the
/// run with zero entries.
pub fn condense_run(run: &RankedRun, qrels: &GradedQrels) -> Result<CondenseOutcome, DriverError> {
    let mut out = RankedRun::new();
    if let Some(tag) = run.tag() {
        out.set_tag(tag);
    }
    let mut removed = 0usize;
    let mut emptied = Vec::new();
    for (topic, entries) in run.topics() {
        let judgments = qrels.topic(topic);
        let mut kept = 0usize;
        for entry in entries {
            if judgments.is_some_and(|j| j.is_judged(&entry.doc)) {
                out.push(topic, &entry.doc, entry.score, entry.vertical.as_deref())
                    .map_err(|e| topic_err(topic, e))?;
                kept += 1;
            } else {
                removed += 1;
            }
        }
        if kept == 0 {
            out.ensure_topic(topic).map_err(|e| topic_err(topic, e))?;
            emptied.push(topic.to_owned());
        }
    }
    Ok(CondenseOutcome {
        run: out,
        removed,
        emptied,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::expand;

    fn qrels() -> GradedQrels {
        let mut q = GradedQrels::new();
        // t1: two relevant of four judged; t2: one relevant; t3 is absent
        // from the run and should be zero-filled.
        q.add("t1", None, "d1", 2).unwrap();
        q.add("t1", None, "d2", 1).unwrap();
        q.add("t1", None, "d3", 0).unwrap();
        q.add("t1", None, "d4", 0).unwrap();
        q.add("t2", None, "d1", 1).unwrap();
        q.add("t3", None, "d9", 1).unwrap();
        q
    }

    fn run() -> RankedRun {
        let mut r = RankedRun::new();
        for (i, doc) in ["d2", "d4", "d1", "d3"].iter().enumerate() {
            r.push("t1", doc, 10.0 - i as f64, None).unwrap();
        }
        r.push("t2", "d7", 3.0, None).unwrap();
        r.push("t2", "d1", 2.0, None).unwrap();
        r.push("t9", "d1", 1.0, None).unwrap();
        r
    }

    fn options(measures: &[&str]) -> EvalOptions {
        let tokens: Vec<String> = measures.iter().map(|s| s.to_string()).collect();
        EvalOptions {
            measures: expand(&tokens, &[]).unwrap(),
            gains: GainSpec::parse("linear").unwrap(),
            params: DriverParams::default(),
            condensed: false,
            r0_policy: R0Policy::Zero,
            run_topics_only: false,
        }
    }

    fn inputs<'a>(q: &'a GradedQrels, r: &'a RankedRun) -> EvalInputs<'a> {
        EvalInputs {
            qrels: q,
            run: r,
            intents: None,
            classes: None,
            submap: None,
        }
    }

    #[test]
    fn zero_policy_fills_and_counts() {
        let (q, r) = (qrels(), run());
        let report = evaluate(&inputs(&q, &r), &options(&["ap", "q"])).unwrap();
        let ids: Vec<&str> = report.topics.iter().map(|t| t.topic.as_str()).collect();
        assert_eq!(ids, ["t1", "t2", "t3", "t9"]);
        assert_eq!(report.run_only, 1);
        assert_eq!(report.qrels_only, 1);
        assert_eq!(report.undefined, 2, "both measures undefined on t9");

        // t1: AP = (1/2)(1/1 + 2/3) = 5/6 with the relevant docs at ranks
        // 1 and 3.
        let ap_t1 = report.topics[0].values[0].unwrap();
        assert!((ap_t1 - (1.0 + 2.0 / 3.0) / 2.0).abs() < 1e-12);
        // t9 zero-filled by policy, and both means average over all four.
        assert_eq!(report.topics[3].values, vec![Some(0.0), Some(0.0)]);
        let ap_t2 = report.topics[1].values[0].unwrap();
        let expected_mean = (ap_t1 + ap_t2) / 4.0;
        assert!((report.means[0].unwrap() - expected_mean).abs() < 1e-12);
    }

    #[test]
    fn exclude_policy_omits_undefined_rows() {
        let (q, r) = (qrels(), run());
        let mut opts = options(&["ap"]);
        opts.r0_policy = R0Policy::Exclude;
        let report = evaluate(&inputs(&q, &r), &opts).unwrap();
        let rendered = report.render();
        assert!(
            !rendered.contains("t9"),
            "undefined topic row must be omitted"
        );
        // Mean over t1, t2, and the zero-filled t3 only.
        let ap_t1 = report.topics[0].values[0].unwrap();
        let ap_t2 = report.topics[1].values[0].unwrap();
        let expected_mean = (ap_t1 + ap_t2) / 3.0;
        assert!((report.means[0].unwrap() - expected_mean).abs() < 1e-12);
    }

    #[test]
    fn run_topics_only_skips_zero_fill() {
        let (q, r) = (qrels(), run());
        let mut opts = options(&["ap"]);
        opts.run_topics_only = true;
        let report = evaluate(&inputs(&q, &r), &opts).unwrap();
        let ids: Vec<&str> = report.topics.iter().map(|t| t.topic.as_str()).collect();
        assert_eq!(ids, ["t1", "t2", "t9"]);
        assert_eq!(report.qrels_only, 0);
    }

    #[test]
    fn empty_run_yields_empty_report() {
        let q = qrels();
        let r = RankedRun::new();
        let report = evaluate(&inputs(&q, &r), &options(&["ap"])).unwrap();
        assert!(report.topics.is_empty());
        assert_eq!(report.means, vec![None]);
        assert_eq!(report.render(), "");
    }

    #[test]
    fn condensed_flag_matches_precondensed_run() {
        let (q, r) = (qrels(), run());
        let mut opts = options(&["ap", "q", "ms-ndcg@3", "nerr@3"]);
        opts.condensed = true;
        let on_the_fly = evaluate(&inputs(&q, &r), &opts).unwrap();

        let condensed = condense_run(&r, &q).unwrap();
        assert_eq!(condensed.removed, 2, "d7 on t2 and d1 on t9");
        assert_eq!(condensed.emptied, vec!["t9".to_string()]);
        opts.condensed = false;
        let precondensed = evaluate(&inputs(&q, &condensed.run), &opts).unwrap();
        assert_eq!(on_the_fly.render(), precondensed.render());
    }

    #[test]
    fn condense_preserves_everything_judged() {
        let mut r = RankedRun::new();
        r.set_tag("sys");
        r.push("t1", "d1", 3.0, Some("Web")).unwrap();
        r.push("t1", "d2", 2.0, None).unwrap();
        let q = qrels();
        let outcome = condense_run(&r, &q).unwrap();
        assert_eq!(outcome.removed, 0);
        assert!(outcome.emptied.is_empty());
        assert_eq!(outcome.run, r);
    }

    #[test]
    fn rendering_is_tab_separated_with_means_last() {
        let (q, r) = (qrels(), run());
        let mut opts = options(&["ap"]);
        opts.run_topics_only = true;
        let report = evaluate(&inputs(&q, &r), &opts).unwrap();
        let rendered = report.render();
        let lines: Vec<&str> = rendered.lines().collect();
        assert_eq!(lines[0], "t1\tAP\t0.8333");
        assert_eq!(lines[1], "t2\tAP\t0.5000");
        assert_eq!(lines[2], "t9\tAP\t0.0000");
        assert_eq!(lines[3], format!("all\tAP\t{:.4}", (5.0 / 6.0 + 0.5) / 3.0));
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn intent_measures_require_the_intent_file() {
        let (q, r) = (qrels(), run());
        let err = evaluate(&inputs(&q, &r), &options(&["d#-ndcg@3"])).unwrap_err();
        assert!(matches!(err, DriverError::Validation(_)));
        assert!(err.to_string().contains("intent"));
    }

    #[test]
    fn diversity_values_flow_through_the_report() {
        let mut q = GradedQrels::new();
        q.add("t1", Some("i1"), "d1", 2).unwrap();
        q.add("t1", Some("i1"), "d2", 1).unwrap();
        q.add("t1", Some("i2"), "d3", 1).unwrap();
        let mut r = RankedRun::new();
        for (i, doc) in ["d1", "d3", "d2"].iter().enumerate() {
            r.push("t1", doc, 5.0 - i as f64, None).unwrap();
        }
        let mut intents = IntentSet::new();
        intents
            .add_intent(
                "t1",
                "i1",
                0.6,
                gradeval_core::corpus::IntentKind::Informational,
            )
            .unwrap();
        intents
            .add_intent(
                "t1",
                "i2",
                0.4,
                gradeval_core::corpus::IntentKind::Navigational,
            )
            .unwrap();
        let ins = EvalInputs {
            qrels: &q,
            run: &r,
            intents: Some(&intents),
            classes: None,
            submap: None,
        };
        let report = evaluate(&ins, &options(&["i-rec@2", "d-ndcg@3", "p+q@3"])).unwrap();
        let row = &report.topics[0];
        assert_eq!(row.values[0], Some(1.0), "both intents covered by rank 2");
        let d = row.values[1].unwrap();
        assert!(d > 0.0 && d <= 1.0);
        let ppq = row.values[2].unwrap();
        assert!(ppq > 0.0 && ppq <= 1.0);
    }
}
