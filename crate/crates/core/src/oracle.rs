//! Brute-force reference scoring for small instances.
//!
//! Everything here recomputes measures from their definitions with plain
//! nested loops, sharing no code with the optimized kernels, so the two
//! implementations can be checked against each other. [`exhaustive_max`]
//! additionally searches every permutation of a small ranking for the best
//! attainable score. Quadratic passes and factorial searches are fine at
//! this scale; none of this is meant for production scoring.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// A self-contained scoring problem small enough to brute-force.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallInstance {
    /// Ranked document ids, best first.
    pub ranking: Vec<String>,
    /// Topic-level judgments: document id to relevance level.
    pub judgments: BTreeMap<String, u32>,
    /// Gain per level, indexed by level; entry 0 must be 0 and entries must
    /// not decrease. The instance's level space is `0..level_gains.len()`,
    /// whether or not the top level is attained.
    pub level_gains: Vec<f64>,
    /// Intent layer, required by the diversity measures.
    pub intents: Option<InstanceIntents>,
}

/// Intent layer of a [`SmallInstance`]; the three vectors are parallel.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceIntents {
    pub probs: Vec<f64>,
    pub navigational: Vec<bool>,
    pub judgments: Vec<BTreeMap<String, u32>>,
}

/// Measures the reference scorer knows how to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMeasure {
    AveragePrecision,
    QMeasure,
    QAt(usize),
    RPrecision,
    PrecisionAt(usize),
    ReciprocalRank,
    HitAtOne,
    NormalizedGainAtOne,
    NormalizedCumulativeGainAt(usize),
    DcgOriginalAt(usize),
    NdcgOriginalAt(usize),
    MsNdcgAt(usize),
    ErrAt(usize),
    NErrAt(usize),
    PPlusAt(usize),
    IntentRecallAt(usize),
    DivNdcgAt(usize),
    DivQAt(usize),
    DivSharpNdcgAt(usize),
    DivSharpQAt(usize),
    FreshNdcgAt(usize),
    PPlusQAt(usize),
}

impl OracleMeasure {
    /// Whether the measure reads the instance's intent layer.
    pub fn needs_intents(&self) -> bool {
        matches!(
            self,
            OracleMeasure::IntentRecallAt(_)
                | OracleMeasure::DivNdcgAt(_)
                | OracleMeasure::DivQAt(_)
                | OracleMeasure::DivSharpNdcgAt(_)
                | OracleMeasure::DivSharpQAt(_)
                | OracleMeasure::FreshNdcgAt(_)
                | OracleMeasure::PPlusQAt(_)
        )
    }
}

/// Parameters shared by the reference computations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleParams {
    pub beta: f64,
    pub log_base: f64,
    pub err_base: f64,
    pub gamma: f64,
}

impl Default for OracleParams {
    fn default() -> Self {
        OracleParams {
            beta: 1.0,
            log_base: 2.0,
            err_base: 2.0,
            gamma: 0.5,
        }
    }
}

/// Why the reference scorer refused an instance.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    /// `level_gains` is empty, starts above zero, or decreases.
    MalformedGains,
    /// A judgment level has no gain entry.
    LevelOutOfRange { level: u32, max: u32 },
    /// The measure needs intents and the instance has none.
    NeedsIntents,
    /// The intent vectors disagree in length or hold bad probabilities.
    MalformedIntents,
    /// A parameter is outside its legal range.
    BadParams,
    /// Too many documents to search every permutation.
    TooManyDocuments { count: usize },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::MalformedGains => {
                write!(f, "level gains must start at 0 and never decrease")
            }
            OracleError::LevelOutOfRange { level, max } => {
                write!(f, "level {level} exceeds the gain table (max {max})")
            }
            OracleError::NeedsIntents => write!(f, "measure needs an intent layer"),
            OracleError::MalformedIntents => write!(f, "intent vectors are inconsistent"),
            OracleError::BadParams => write!(f, "parameter out of range"),
            OracleError::TooManyDocuments { count } => {
                write!(f, "{count} documents is too many to permute")
            }
        }
    }
}

impl core::error::Error for OracleError {}

/// Permutation search is capped at this many documents (factorial cost).
pub const MAX_EXHAUSTIVE_DOCS: usize = 7;

fn validate(inst: &SmallInstance, params: &OracleParams) -> Result<(), OracleError> {
    if inst.level_gains.is_empty() || inst.level_gains[0] != 0.0 {
        return Err(OracleError::MalformedGains);
    }
    for pair in inst.level_gains.windows(2) {
        // NaN compares as incomparable and is rejected along with decreases.
        let ordered = matches!(
            pair[0].partial_cmp(&pair[1]),
            Some(Ordering::Less | Ordering::Equal)
        );
        if !ordered {
            return Err(OracleError::MalformedGains);
        }
    }
    let max = (inst.level_gains.len() - 1) as u32;
    let check_levels = |judged: &BTreeMap<String, u32>| {
        for &level in judged.values() {
            if level > max {
                return Err(OracleError::LevelOutOfRange { level, max });
            }
        }
        Ok(())
    };
    check_levels(&inst.judgments)?;
    if let Some(intents) = &inst.intents {
        if intents.probs.len() != intents.navigational.len()
            || intents.probs.len() != intents.judgments.len()
            || intents.probs.is_empty()
            || intents.probs.iter().any(|p| !(0.0..=1.0).contains(p))
        {
            return Err(OracleError::MalformedIntents);
        }
        for judged in &intents.judgments {
            check_levels(judged)?;
        }
    }
    if !params.beta.is_finite()
        || params.beta < 0.0
        || !params.log_base.is_finite()
        || params.log_base < 2.0
        || !params.err_base.is_finite()
        || params.err_base <= 1.0
        || !params.gamma.is_finite()
        || !(0.0..=1.0).contains(&params.gamma)
    {
        return Err(OracleError::BadParams);
    }
    Ok(())
}

fn level_of(judged: &BTreeMap<String, u32>, doc: &str) -> u32 {
    judged.get(doc).copied().unwrap_or(0)
}

fn gain_of(level_gains: &[f64], level: u32) -> f64 {
    level_gains[level as usize]
}

/// Judged documents with positive levels, best level first, ties by id.
fn ideal_docs(judged: &BTreeMap<String, u32>) -> Vec<(u32, &str)> {
    let mut docs: Vec<(u32, &str)> = judged
        .iter()
        .filter(|(_, &level)| level > 0)
        .map(|(doc, &level)| (level, doc.as_str()))
        .collect();
    docs.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(b.1)));
    docs
}

/// Ideal cumulative gain at `r`, saturating past the last relevant document.
fn ideal_cum(ideal_gains: &[f64], r: usize) -> f64 {
    ideal_gains.iter().take(r).sum()
}

/// The gains-only view of a ranking plus its ideal counterpart, on which
/// every reference measure below operates.
struct Naive {
    gains: Vec<f64>,
    rel: Vec<bool>,
    ideal_gains: Vec<f64>,
    ideal_levels: Vec<u32>,
    relevant_total: usize,
    max_level: u32,
}

fn naive_topic(ranking: &[String], inst: &SmallInstance) -> Naive {
    let gains: Vec<f64> = ranking
        .iter()
        .map(|doc| gain_of(&inst.level_gains, level_of(&inst.judgments, doc)))
        .collect();
    let rel: Vec<bool> = ranking
        .iter()
        .map(|doc| level_of(&inst.judgments, doc) > 0)
        .collect();
    let ideal = ideal_docs(&inst.judgments);
    Naive {
        gains,
        rel,
        ideal_gains: ideal
            .iter()
            .map(|&(level, _)| gain_of(&inst.level_gains, level))
            .collect(),
        ideal_levels: ideal.iter().map(|&(level, _)| level).collect(),
        relevant_total: ideal.len(),
        max_level: (inst.level_gains.len() - 1) as u32,
    }
}

impl Naive {
    fn count(&self, r: usize) -> usize {
        self.rel.iter().take(r).filter(|&&x| x).count()
    }

    fn cum_gain(&self, r: usize) -> f64 {
        let mut sum = 0.0;
        for i in 0..r.min(self.gains.len()) {
            sum += self.gains[i];
        }
        sum
    }

    fn blended_ratio(&self, r: usize, beta: f64) -> f64 {
        (self.count(r) as f64 + beta * self.cum_gain(r))
            / (r as f64 + beta * ideal_cum(&self.ideal_gains, r))
    }

    fn average_precision(&self) -> Option<f64> {
        if self.relevant_total == 0 {
            return None;
        }
        let mut sum = 0.0;
        for r in 1..=self.gains.len() {
            if self.rel[r - 1] {
                sum += self.count(r) as f64 / r as f64;
            }
        }
        Some(sum / self.relevant_total as f64)
    }

    fn q_measure(&self, beta: f64) -> Option<f64> {
        if self.relevant_total == 0 {
            return None;
        }
        let mut sum = 0.0;
        for r in 1..=self.gains.len() {
            if self.rel[r - 1] {
                sum += self.blended_ratio(r, beta);
            }
        }
        Some(sum / self.relevant_total as f64)
    }

    fn q_at(&self, l: usize, beta: f64) -> Option<f64> {
        if self.relevant_total == 0 {
            return None;
        }
        let mut sum = 0.0;
        for r in 1..=self.gains.len().min(l) {
            if self.rel[r - 1] {
                sum += self.blended_ratio(r, beta);
            }
        }
        Some(sum / l.min(self.relevant_total) as f64)
    }

    fn precision_at(&self, l: usize) -> f64 {
        self.count(l) as f64 / l as f64
    }

    fn r_precision(&self) -> Option<f64> {
        if self.relevant_total == 0 {
            return None;
        }
        Some(self.count(self.relevant_total) as f64 / self.relevant_total as f64)
    }

    fn reciprocal_rank(&self) -> f64 {
        for r in 1..=self.gains.len() {
            if self.rel[r - 1] {
                return 1.0 / r as f64;
            }
        }
        0.0
    }

    fn hit_at_one(&self) -> f64 {
        if !self.rel.is_empty() && self.rel[0] {
            1.0
        } else {
            0.0
        }
    }

    fn normalized_gain_at_one(&self) -> Option<f64> {
        if self.ideal_gains.is_empty() || self.ideal_gains[0] <= 0.0 {
            return None;
        }
        let first = if self.gains.is_empty() {
            0.0
        } else {
            self.gains[0]
        };
        Some(first / self.ideal_gains[0])
    }

    fn normalized_cumulative_gain_at(&self, l: usize) -> Option<f64> {
        let denom = ideal_cum(&self.ideal_gains, l);
        if denom <= 0.0 {
            return None;
        }
        Some(self.cum_gain(l) / denom)
    }

    fn dcg_original(gains: &[f64], l: usize, log_base: f64) -> f64 {
        let mut sum = 0.0;
        for r in 1..=gains.len().min(l) {
            let discount = if (r as f64) < log_base {
                1.0
            } else {
                libm::log(r as f64) / libm::log(log_base)
            };
            sum += gains[r - 1] / discount;
        }
        sum
    }

    fn ndcg_original(&self, l: usize, log_base: f64) -> Option<f64> {
        let denom = Naive::dcg_original(&self.ideal_gains, l, log_base);
        if denom <= 0.0 {
            return None;
        }
        Some(Naive::dcg_original(&self.gains, l, log_base) / denom)
    }

    fn ms_dcg(gains: &[f64], l: usize) -> f64 {
        let mut sum = 0.0;
        for r in 1..=gains.len().min(l) {
            sum += gains[r - 1] / libm::log(1.0 + r as f64);
        }
        sum
    }

    fn ms_ndcg_at(&self, l: usize) -> Option<f64> {
        let denom = Naive::ms_dcg(&self.ideal_gains, l);
        if denom <= 0.0 {
            return None;
        }
        Some(Naive::ms_dcg(&self.gains, l) / denom)
    }

    fn stop_prob(level: u32, max_level: u32, err_base: f64) -> f64 {
        (libm::pow(err_base, level as f64) - 1.0) / libm::pow(err_base, max_level as f64)
    }

    fn err_over(levels: &[u32], l: usize, max_level: u32, err_base: f64) -> f64 {
        let mut sum = 0.0;
        let mut continue_prob = 1.0;
        for r in 1..=levels.len().min(l) {
            let p = Naive::stop_prob(levels[r - 1], max_level, err_base);
            sum += continue_prob * p / r as f64;
            continue_prob *= 1.0 - p;
        }
        sum
    }

    fn err_at(&self, levels: &[u32], l: usize, err_base: f64) -> f64 {
        Naive::err_over(levels, l, self.max_level, err_base)
    }

    fn nerr_at(&self, levels: &[u32], l: usize, err_base: f64) -> Option<f64> {
        let denom = Naive::err_over(&self.ideal_levels, l, self.max_level, err_base);
        if denom <= 0.0 {
            return None;
        }
        Some(Naive::err_over(levels, l, self.max_level, err_base) / denom)
    }

    fn preferred_rank(&self, l: usize) -> Option<usize> {
        let window = self.gains.len().min(l);
        let mut best: Option<(f64, usize)> = None;
        for r in 1..=window {
            if self.rel[r - 1] {
                let g = self.gains[r - 1];
                match best {
                    Some((bg, _)) if bg >= g => {}
                    _ => best = Some((g, r)),
                }
            }
        }
        best.map(|(_, r)| r)
    }

    fn p_plus(&self, l: usize, beta: f64) -> f64 {
        let Some(rp) = self.preferred_rank(l) else {
            return 0.0;
        };
        let mut sum = 0.0;
        for r in 1..=rp {
            if self.rel[r - 1] {
                sum += self.blended_ratio(r, beta);
            }
        }
        sum / self.count(rp) as f64
    }
}

/// One document's probability-weighted gain over all intents.
fn global_gain(doc: &str, intents: &InstanceIntents, level_gains: &[f64]) -> f64 {
    let mut gg = 0.0;
    for (i, judged) in intents.judgments.iter().enumerate() {
        gg += intents.probs[i] * gain_of(level_gains, level_of(judged, doc));
    }
    gg
}

/// The diversity measures reuse the ad hoc loops over a gain vector with no
/// level structure: relevant means positive global gain.
fn naive_from_gains(gains: Vec<f64>, ideal_gains: Vec<f64>) -> Naive {
    let rel: Vec<bool> = gains.iter().map(|&g| g > 0.0).collect();
    let relevant_total = ideal_gains.len();
    Naive {
        rel,
        ideal_levels: alloc::vec![1; ideal_gains.len()],
        gains,
        ideal_gains,
        relevant_total,
        max_level: 1,
    }
}

fn naive_diversity(ranking: &[String], inst: &SmallInstance) -> Result<Naive, OracleError> {
    let intents = inst.intents.as_ref().ok_or(OracleError::NeedsIntents)?;
    let gains: Vec<f64> = ranking
        .iter()
        .map(|doc| global_gain(doc, intents, &inst.level_gains))
        .collect();
    Ok(naive_from_gains(gains, ideal_global_gains(inst, intents)))
}

fn ideal_global_gains(inst: &SmallInstance, intents: &InstanceIntents) -> Vec<f64> {
    let mut docs: Vec<&str> = Vec::new();
    for judged in &intents.judgments {
        for doc in judged.keys() {
            if !docs.contains(&doc.as_str()) {
                docs.push(doc);
            }
        }
    }
    let mut entries: Vec<(f64, &str)> = docs
        .into_iter()
        .map(|doc| (global_gain(doc, intents, &inst.level_gains), doc))
        .filter(|&(gg, _)| gg > 0.0)
        .collect();
    entries.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .expect("gains are finite")
            .then_with(|| a.1.cmp(b.1))
    });
    entries.into_iter().map(|(gg, _)| gg).collect()
}

fn naive_fresh(ranking: &[String], inst: &SmallInstance) -> Result<Naive, OracleError> {
    let intents = inst.intents.as_ref().ok_or(OracleError::NeedsIntents)?;
    let mut served = alloc::vec![false; intents.probs.len()];
    let mut gains = Vec::with_capacity(ranking.len());
    for doc in ranking {
        let mut gg = 0.0;
        for (i, judged) in intents.judgments.iter().enumerate() {
            let gain = gain_of(&inst.level_gains, level_of(judged, doc));
            if !intents.navigational[i] || !served[i] {
                gg += intents.probs[i] * gain;
            }
        }
        for (i, judged) in intents.judgments.iter().enumerate() {
            if level_of(judged, doc) > 0 {
                served[i] = true;
            }
        }
        gains.push(gg);
    }
    Ok(naive_from_gains(gains, ideal_global_gains(inst, intents)))
}

fn intent_recall(ranking: &[String], inst: &SmallInstance, l: usize) -> Result<f64, OracleError> {
    let intents = inst.intents.as_ref().ok_or(OracleError::NeedsIntents)?;
    let mut covered = 0usize;
    for judged in &intents.judgments {
        if ranking.iter().take(l).any(|doc| level_of(judged, doc) > 0) {
            covered += 1;
        }
    }
    Ok(covered as f64 / intents.probs.len() as f64)
}

fn p_plus_q(
    ranking: &[String],
    inst: &SmallInstance,
    l: usize,
    beta: f64,
) -> Result<f64, OracleError> {
    let intents = inst.intents.as_ref().ok_or(OracleError::NeedsIntents)?;
    let mut sum = 0.0;
    for (i, judged) in intents.judgments.iter().enumerate() {
        let sub = SmallInstance {
            ranking: ranking.to_vec(),
            judgments: judged.clone(),
            level_gains: inst.level_gains.clone(),
            intents: None,
        };
        let naive = naive_topic(ranking, &sub);
        let value = if intents.navigational[i] {
            naive.p_plus(l, beta)
        } else {
            naive.q_at(l, beta).unwrap_or(0.0)
        };
        sum += intents.probs[i] * value;
    }
    Ok(sum)
}

fn measure_on(
    ranking: &[String],
    inst: &SmallInstance,
    measure: OracleMeasure,
    params: &OracleParams,
) -> Result<Option<f64>, OracleError> {
    use OracleMeasure::*;
    if measure.needs_intents() && inst.intents.is_none() {
        return Err(OracleError::NeedsIntents);
    }
    let value = match measure {
        AveragePrecision => naive_topic(ranking, inst).average_precision(),
        QMeasure => naive_topic(ranking, inst).q_measure(params.beta),
        QAt(l) => naive_topic(ranking, inst).q_at(l, params.beta),
        RPrecision => naive_topic(ranking, inst).r_precision(),
        PrecisionAt(l) => Some(naive_topic(ranking, inst).precision_at(l)),
        ReciprocalRank => Some(naive_topic(ranking, inst).reciprocal_rank()),
        HitAtOne => Some(naive_topic(ranking, inst).hit_at_one()),
        NormalizedGainAtOne => naive_topic(ranking, inst).normalized_gain_at_one(),
        NormalizedCumulativeGainAt(l) => {
            naive_topic(ranking, inst).normalized_cumulative_gain_at(l)
        }
        DcgOriginalAt(l) => {
            let naive = naive_topic(ranking, inst);
            Some(Naive::dcg_original(&naive.gains, l, params.log_base))
        }
        NdcgOriginalAt(l) => naive_topic(ranking, inst).ndcg_original(l, params.log_base),
        MsNdcgAt(l) => naive_topic(ranking, inst).ms_ndcg_at(l),
        ErrAt(l) => {
            let naive = naive_topic(ranking, inst);
            let levels: Vec<u32> = ranking
                .iter()
                .map(|doc| level_of(&inst.judgments, doc))
                .collect();
            Some(naive.err_at(&levels, l, params.err_base))
        }
        NErrAt(l) => {
            let naive = naive_topic(ranking, inst);
            let levels: Vec<u32> = ranking
                .iter()
                .map(|doc| level_of(&inst.judgments, doc))
                .collect();
            naive.nerr_at(&levels, l, params.err_base)
        }
        PPlusAt(l) => Some(naive_topic(ranking, inst).p_plus(l, params.beta)),
        IntentRecallAt(l) => Some(intent_recall(ranking, inst, l)?),
        DivNdcgAt(l) => naive_diversity(ranking, inst)?.ms_ndcg_at(l),
        DivQAt(l) => naive_diversity(ranking, inst)?.q_at(l, params.beta),
        DivSharpNdcgAt(l) => {
            let rec = intent_recall(ranking, inst, l)?;
            naive_diversity(ranking, inst)?
                .ms_ndcg_at(l)
                .map(|d| params.gamma * rec + (1.0 - params.gamma) * d)
        }
        DivSharpQAt(l) => {
            let rec = intent_recall(ranking, inst, l)?;
            naive_diversity(ranking, inst)?
                .q_at(l, params.beta)
                .map(|d| params.gamma * rec + (1.0 - params.gamma) * d)
        }
        FreshNdcgAt(l) => naive_fresh(ranking, inst)?.ms_ndcg_at(l),
        PPlusQAt(l) => Some(p_plus_q(ranking, inst, l, params.beta)?),
    };
    Ok(value)
}

/// Scores the instance's ranking from first principles. `Ok(None)` means
/// the measure is undefined on this instance (for example, no relevant
/// documents exist for a normalized measure).
pub fn naive_measure(
    inst: &SmallInstance,
    measure: OracleMeasure,
    params: &OracleParams,
) -> Result<Option<f64>, OracleError> {
    validate(inst, params)?;
    measure_on(&inst.ranking, inst, measure, params)
}

/// Finds the best attainable score over every permutation of the instance's
/// ranking, with the first permutation (in search order) that attains it.
/// `Ok(None)` means the measure is undefined on every permutation. Refuses
/// rankings longer than [`MAX_EXHAUSTIVE_DOCS`].
pub fn exhaustive_max(
    inst: &SmallInstance,
    measure: OracleMeasure,
    params: &OracleParams,
) -> Result<Option<(f64, Vec<String>)>, OracleError> {
    validate(inst, params)?;
    let n = inst.ranking.len();
    if n > MAX_EXHAUSTIVE_DOCS {
        return Err(OracleError::TooManyDocuments { count: n });
    }

    let mut items = inst.ranking.clone();
    let mut best: Option<(f64, Vec<String>)> = None;
    let track = |items: &[String], best: &mut Option<(f64, Vec<String>)>| match measure_on(
        items, inst, measure, params,
    ) {
        Err(e) => Err(e),
        Ok(None) => Ok(()),
        Ok(Some(value)) => {
            let better = match best {
                None => true,
                Some((b, _)) => value > *b,
            };
            if better {
                *best = Some((value, items.to_vec()));
            }
            Ok(())
        }
    };

    // Heap's algorithm, iterative form.
    track(&items, &mut best)?;
    let mut counters = alloc::vec![0usize; n];
    let mut i = 0;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(counters[i], i);
            }
            track(&items, &mut best)?;
            counters[i] += 1;
            i = 0;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    Ok(best)
}
