//! Graded-relevance effectiveness measures for a single ranked list.
//!
//! A [`ScoredList`] pairs one topic's ranking with its judgments under a
//! gain scheme: per-rank gains and relevance flags, plus the ideal ranking
//! (every relevant document by decreasing level) that normalizers compare
//! against. All measures are methods on it. Ranks are 1-based throughout.
//!
//! Measures that need at least one relevant document return `None` on
//! topics without any, so callers can apply their own policy for undefined
//! scores.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::gain::{suppression_mask, GainError, GainScheme};
use crate::math;

/// How rank-cutoff parameters and flags reach the list builder.
#[derive(Debug, Clone, Copy, Default)]
pub struct ScoreOptions<'a> {
    /// Remove unjudged documents before assigning ranks.
    pub condensed: bool,
    /// Equivalence classes for this topic (document id to class id): later
    /// class duplicates in the ranking are scored as nonrelevant.
    pub classes: Option<&'a BTreeMap<String, String>>,
    /// Highest relevance level of the judgment set this topic belongs to;
    /// defaults to the highest level judged on this topic.
    pub max_level: Option<u32>,
}

/// Validated per-measure parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureParams {
    /// Patience weight on cumulative gain in the blended ratio.
    pub beta: f64,
    /// Logarithm base of the original discounted-gain formulation.
    pub log_base: f64,
    /// Base of the exponential stop probability in expected reciprocal rank.
    pub err_base: f64,
}

impl Default for MeasureParams {
    fn default() -> Self {
        MeasureParams {
            beta: 1.0,
            log_base: 2.0,
            err_base: 2.0,
        }
    }
}

impl MeasureParams {
    /// Checks every parameter range.
    pub fn validate(&self) -> Result<(), &'static str> {
        if !self.beta.is_finite() || self.beta < 0.0 {
            return Err("beta must be finite and >= 0");
        }
        if !self.log_base.is_finite() || self.log_base < 2.0 {
            return Err("log base must be >= 2");
        }
        if !self.err_base.is_finite() || self.err_base <= 1.0 {
            return Err("err base must be > 1");
        }
        Ok(())
    }
}

/// One topic's ranking scored against its judgments.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredList {
    gains: Vec<f64>,
    levels: Vec<u32>,
    rel: Vec<bool>,
    cum_gain: Vec<f64>,
    cum_rel: Vec<usize>,
    ideal_gains: Vec<f64>,
    ideal_levels: Vec<u32>,
    ideal_cum: Vec<f64>,
    relevant_total: usize,
    max_level: u32,
}

/// Scores a ranking against one topic's judgments.
///
/// `judged` maps document ids to levels; ranked documents missing from it
/// count as nonrelevant with zero gain (or are dropped when
/// `opts.condensed` is set). The ideal ranking is derived from `judged`:
/// every document with a positive level, by decreasing level, ties broken
/// by document id. With equivalence classes, each class appears in the
/// ideal ranking once at its best level, and only the first-ranked class
/// member in the run keeps its judgment.
pub fn build_scored_list(
    ranking: &[&str],
    judged: &BTreeMap<String, u32>,
    scheme: &GainScheme,
    opts: &ScoreOptions,
) -> Result<ScoredList, GainError> {
    let effective: Vec<&str> = if opts.condensed {
        ranking
            .iter()
            .copied()
            .filter(|doc| judged.contains_key(*doc))
            .collect()
    } else {
        ranking.to_vec()
    };

    let suppressed = match opts.classes {
        Some(classes) => suppression_mask(&effective, classes),
        None => alloc::vec![false; effective.len()],
    };

    let mut gains = Vec::with_capacity(effective.len());
    let mut levels = Vec::with_capacity(effective.len());
    for (doc, &gone) in effective.iter().zip(&suppressed) {
        let level = if gone {
            0
        } else {
            judged.get(*doc).copied().unwrap_or(0)
        };
        gains.push(scheme.gain(level)?);
        levels.push(level);
    }

    // Ideal side: collapse each equivalence class to its best judged member.
    let mut ideal_entries: Vec<(u32, &str)> = match opts.classes {
        None => judged.iter().map(|(d, &l)| (l, d.as_str())).collect(),
        Some(classes) => {
            let mut best: BTreeMap<&str, (u32, &str)> = BTreeMap::new();
            let mut singles: Vec<(u32, &str)> = Vec::new();
            for (doc, &level) in judged {
                match classes.get(doc.as_str()) {
                    None => singles.push((level, doc)),
                    Some(class) => {
                        let entry = best.entry(class).or_insert((level, doc));
                        if level > entry.0 {
                            *entry = (level, doc);
                        }
                    }
                }
            }
            singles.extend(best.into_values());
            singles
        }
    };
    ideal_entries.retain(|&(level, _)| level > 0);
    ideal_entries.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(b.1)));

    let relevant_total = ideal_entries.len();
    let mut ideal_gains = Vec::with_capacity(relevant_total);
    let mut ideal_levels = Vec::with_capacity(relevant_total);
    for &(level, _) in &ideal_entries {
        ideal_gains.push(scheme.gain(level)?);
        ideal_levels.push(level);
    }

    let max_level = opts
        .max_level
        .unwrap_or_else(|| judged.values().copied().max().unwrap_or(0));

    Ok(ScoredList::assemble(
        gains,
        levels,
        ideal_gains,
        ideal_levels,
        relevant_total,
        max_level,
    ))
}

impl ScoredList {
    fn assemble(
        gains: Vec<f64>,
        levels: Vec<u32>,
        ideal_gains: Vec<f64>,
        ideal_levels: Vec<u32>,
        relevant_total: usize,
        max_level: u32,
    ) -> Self {
        let rel: Vec<bool> = levels.iter().map(|&l| l > 0).collect();
        let mut cum_gain = Vec::with_capacity(gains.len());
        let mut acc = 0.0;
        for &g in &gains {
            acc += g;
            cum_gain.push(acc);
        }
        let mut cum_rel = Vec::with_capacity(rel.len());
        let mut count = 0usize;
        for &r in &rel {
            count += usize::from(r);
            cum_rel.push(count);
        }
        let mut ideal_cum = Vec::with_capacity(ideal_gains.len());
        let mut acc = 0.0;
        for &g in &ideal_gains {
            acc += g;
            ideal_cum.push(acc);
        }
        ScoredList {
            gains,
            levels,
            rel,
            cum_gain,
            cum_rel,
            ideal_gains,
            ideal_levels,
            ideal_cum,
            relevant_total,
            max_level,
        }
    }

    /// Builds a list directly from per-rank gains, for gain sets that do not
    /// come from integer levels (for example global gains over intents).
    /// A rank is relevant when its gain is positive, and the ideal gains
    /// must already be sorted non-increasing.
    pub(crate) fn from_gain_vectors(gains: Vec<f64>, ideal_gains: Vec<f64>) -> Self {
        let levels = gains.iter().map(|&g| u32::from(g > 0.0)).collect();
        let ideal_levels = ideal_gains.iter().map(|&g| u32::from(g > 0.0)).collect();
        let relevant_total = ideal_gains.iter().filter(|&&g| g > 0.0).count();
        ScoredList::assemble(gains, levels, ideal_gains, ideal_levels, relevant_total, 1)
    }

    /// Number of ranked documents.
    pub fn len(&self) -> usize {
        self.gains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gains.is_empty()
    }

    /// Total number of relevant documents in the judgments (not the run).
    pub fn relevant_total(&self) -> usize {
        self.relevant_total
    }

    /// Length of the ideal ranking (= number of relevant documents).
    pub fn ideal_len(&self) -> usize {
        self.ideal_gains.len()
    }

    /// Highest relevance level of the judgment set.
    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    /// Gain at a rank; zero beyond the end of the list.
    pub fn gain_at(&self, rank: usize) -> f64 {
        debug_assert!(rank >= 1);
        self.gains.get(rank - 1).copied().unwrap_or(0.0)
    }

    /// Relevance flag at a rank.
    pub fn rel_at(&self, rank: usize) -> bool {
        self.rel.get(rank - 1).copied().unwrap_or(false)
    }

    /// Number of relevant documents in the top `rank` (saturating).
    pub fn count_at(&self, rank: usize) -> usize {
        if self.cum_rel.is_empty() || rank == 0 {
            return 0;
        }
        let idx = rank.min(self.cum_rel.len());
        self.cum_rel[idx - 1]
    }

    /// Cumulative gain over the top `rank` (saturating).
    pub fn cum_gain_at(&self, rank: usize) -> f64 {
        if self.cum_gain.is_empty() || rank == 0 {
            return 0.0;
        }
        let idx = rank.min(self.cum_gain.len());
        self.cum_gain[idx - 1]
    }

    /// Cumulative gain of the ideal ranking over the top `rank`; saturates
    /// at the total gain once every relevant document is listed.
    pub fn ideal_cum_gain_at(&self, rank: usize) -> f64 {
        if self.ideal_cum.is_empty() || rank == 0 {
            return 0.0;
        }
        let idx = rank.min(self.ideal_cum.len());
        self.ideal_cum[idx - 1]
    }

    /// Blended ratio at a rank: how the cumulated reward so far compares to
    /// an ideal user's, mixing counts and gains through `beta`.
    pub fn blended_ratio(&self, rank: usize, beta: f64) -> f64 {
        (self.count_at(rank) as f64 + beta * self.cum_gain_at(rank))
            / (rank as f64 + beta * self.ideal_cum_gain_at(rank))
    }

    /// Fraction of the top `l` that is relevant.
    pub fn precision_at(&self, l: usize) -> f64 {
        debug_assert!(l >= 1);
        self.count_at(l) as f64 / l as f64
    }

    /// Precision at rank R (the number of relevant documents).
    pub fn r_precision(&self) -> Option<f64> {
        if self.relevant_total == 0 {
            return None;
        }
        Some(self.count_at(self.relevant_total) as f64 / self.relevant_total as f64)
    }

    /// Mean of precision over the ranks of retrieved relevant documents,
    /// normalized by R.
    pub fn average_precision(&self) -> Option<f64> {
        if self.relevant_total == 0 {
            return None;
        }
        let mut sum = 0.0;
        for rank in 1..=self.len() {
            if self.rel_at(rank) {
                sum += self.count_at(rank) as f64 / rank as f64;
            }
        }
        Some(sum / self.relevant_total as f64)
    }

    /// Reciprocal of the first relevant rank within the cutoff; 0 if none.
    pub fn reciprocal_rank(&self, l: Option<usize>) -> f64 {
        let window = l.map_or(self.len(), |l| l.min(self.len()));
        for rank in 1..=window {
            if self.rel_at(rank) {
                return 1.0 / rank as f64;
            }
        }
        0.0
    }

    /// 1 when the top document is relevant, else 0.
    pub fn hit_at_one(&self) -> f64 {
        f64::from(self.rel_at(1))
    }

    /// Gain at rank 1 over the best possible first gain.
    pub fn normalized_gain_at_one(&self) -> Option<f64> {
        let best = *self.ideal_gains.first()?;
        if best <= 0.0 {
            return None;
        }
        Some(self.gain_at(1) / best)
    }

    /// Cumulative gain at the cutoff over the ideal cumulative gain there.
    pub fn normalized_cumulative_gain_at(&self, l: usize) -> Option<f64> {
        debug_assert!(l >= 1);
        let denom = self.ideal_cum_gain_at(l);
        if self.relevant_total == 0 || denom <= 0.0 {
            return None;
        }
        Some(self.cum_gain_at(l) / denom)
    }

    /// Discounted cumulative gain in the original formulation: gains are
    /// divided by `log_base(rank)`, with no discount at ranks up to the
    /// base.
    pub fn dcg_original(&self, l: usize, log_base: f64) -> f64 {
        debug_assert!(l >= 1 && log_base >= 2.0);
        Self::dcg_original_over(&self.gains, l, log_base)
    }

    fn dcg_original_over(gains: &[f64], l: usize, log_base: f64) -> f64 {
        let mut sum = 0.0;
        for (idx, &g) in gains.iter().take(l).enumerate() {
            let rank = (idx + 1) as f64;
            sum += g / math::log(log_base, rank).max(1.0);
        }
        sum
    }

    /// [`Self::dcg_original`] normalized by the ideal ranking's value.
    ///
    /// With a base at least as large as the cutoff, no rank in the window is
    /// discounted and this reduces to the normalized cumulative gain.
    pub fn ndcg_original(&self, l: usize, log_base: f64) -> Option<f64> {
        let denom = Self::dcg_original_over(&self.ideal_gains, l, log_base);
        if self.relevant_total == 0 || denom <= 0.0 {
            return None;
        }
        Some(self.dcg_original(l, log_base) / denom)
    }

    fn ms_dcg_over(gains: &[f64], l: usize) -> f64 {
        let mut sum = 0.0;
        for (idx, &g) in gains.iter().take(l).enumerate() {
            let rank = (idx + 1) as f64;
            sum += g / math::ln(1.0 + rank);
        }
        sum
    }

    /// Normalized discounted cumulative gain in the Microsoft formulation,
    /// which discounts every rank by `log(1 + rank)` and is invariant to
    /// the logarithm base.
    pub fn ms_ndcg_at(&self, l: usize) -> Option<f64> {
        debug_assert!(l >= 1);
        let denom = Self::ms_dcg_over(&self.ideal_gains, l);
        if self.relevant_total == 0 || denom <= 0.0 {
            return None;
        }
        Some(Self::ms_dcg_over(&self.gains, l) / denom)
    }

    fn stop_prob(level: u32, err_base: f64, max_level: u32) -> f64 {
        (math::powf(err_base, f64::from(level)) - 1.0) / math::powf(err_base, f64::from(max_level))
    }

    fn err_over(levels: &[u32], l: usize, err_base: f64, max_level: u32) -> f64 {
        let mut sum = 0.0;
        let mut continue_prob = 1.0;
        for (idx, &level) in levels.iter().take(l).enumerate() {
            let rank = (idx + 1) as f64;
            let stop = Self::stop_prob(level, err_base, max_level);
            sum += continue_prob * stop / rank;
            continue_prob *= 1.0 - stop;
        }
        sum
    }

    /// Expected reciprocal rank: the expectation of `1/rank` under a
    /// cascade user who stops at each relevant document with probability
    /// `(base^level - 1) / base^max_level`.
    pub fn err_at(&self, l: usize, err_base: f64) -> f64 {
        debug_assert!(l >= 1 && err_base > 1.0);
        Self::err_over(&self.levels, l, err_base, self.max_level)
    }

    /// [`Self::err_at`] normalized by the ideal ranking's value.
    pub fn nerr_at(&self, l: usize, err_base: f64) -> Option<f64> {
        let denom = Self::err_over(&self.ideal_levels, l, err_base, self.max_level);
        if self.relevant_total == 0 || denom <= 0.0 {
            return None;
        }
        Some(self.err_at(l, err_base) / denom)
    }

    /// Mean blended ratio over the ranks of retrieved relevant documents,
    /// normalized by R. At `beta = 0` this is exactly average precision.
    pub fn q_measure(&self, beta: f64) -> Option<f64> {
        if self.relevant_total == 0 {
            return None;
        }
        let mut sum = 0.0;
        for rank in 1..=self.len() {
            if self.rel_at(rank) {
                sum += self.blended_ratio(rank, beta);
            }
        }
        Some(sum / self.relevant_total as f64)
    }

    /// Cutoff variant of [`Self::q_measure`], normalized by `min(l, R)`.
    pub fn q_at(&self, l: usize, beta: f64) -> Option<f64> {
        debug_assert!(l >= 1);
        if self.relevant_total == 0 {
            return None;
        }
        let mut sum = 0.0;
        for rank in 1..=l.min(self.len()) {
            if self.rel_at(rank) {
                sum += self.blended_ratio(rank, beta);
            }
        }
        Some(sum / l.min(self.relevant_total) as f64)
    }

    /// Rank of the first document, within the top `l`, that carries the
    /// window's highest relevant gain. `None` when nothing relevant is
    /// there.
    pub fn preferred_rank(&self, l: usize) -> Option<usize> {
        let window = l.min(self.len());
        let mut best_gain = f64::NEG_INFINITY;
        let mut found = false;
        for rank in 1..=window {
            if self.rel_at(rank) && self.gain_at(rank) > best_gain {
                best_gain = self.gain_at(rank);
                found = true;
            }
        }
        if !found {
            return None;
        }
        (1..=window).find(|&rank| self.rel_at(rank) && self.gain_at(rank) == best_gain)
    }

    /// Mean blended ratio down to the first maximally-gained relevant
    /// document in the top `l`; 0 when the window has no relevant document.
    /// Models users who never read past the first fully satisfying hit.
    pub fn p_plus(&self, l: usize, beta: f64) -> f64 {
        debug_assert!(l >= 1);
        let Some(preferred) = self.preferred_rank(l) else {
            return 0.0;
        };
        let mut sum = 0.0;
        for rank in 1..=preferred {
            if self.rel_at(rank) {
                sum += self.blended_ratio(rank, beta);
            }
        }
        sum / self.count_at(preferred) as f64
    }

    /// Normalized cumulative utility: expected utility at the stopping rank.
    ///
    /// Each (stop distribution, utility) pair reproduces a familiar
    /// measure; see [`StopDistribution`] and [`Utility`].
    pub fn ncu(&self, stop: &StopDistribution, utility: &Utility) -> Option<f64> {
        match *stop {
            StopDistribution::UniformOverRelevant => {
                if self.relevant_total == 0 {
                    return None;
                }
                let mut sum = 0.0;
                for rank in 1..=self.len() {
                    if self.rel_at(rank) {
                        sum += self.utility_at(rank, utility);
                    }
                }
                Some(sum / self.relevant_total as f64)
            }
            StopDistribution::UniformOverRelevantAbovePreferred { cutoff } => {
                let Some(preferred) = self.preferred_rank(cutoff) else {
                    return Some(0.0);
                };
                let mut sum = 0.0;
                for rank in 1..=preferred {
                    if self.rel_at(rank) {
                        sum += self.utility_at(rank, utility);
                    }
                }
                Some(sum / self.count_at(preferred) as f64)
            }
            StopDistribution::StopAtRank { cutoff } => Some(self.utility_at(cutoff, utility)),
            StopDistribution::StopAtFirstRelevant => {
                match (1..=self.len()).find(|&rank| self.rel_at(rank)) {
                    Some(first) => Some(self.utility_at(first, utility)),
                    None => Some(0.0),
                }
            }
        }
    }

    fn utility_at(&self, rank: usize, utility: &Utility) -> f64 {
        match *utility {
            Utility::BlendedRatio { beta } => self.blended_ratio(rank, beta),
            Utility::Precision => self.count_at(rank) as f64 / rank as f64,
            Utility::ReciprocalRank => 1.0 / rank as f64,
        }
    }
}

/// Where the modeled user stops reading.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopDistribution {
    /// Uniformly at one of the R relevant documents (unretrieved ones
    /// contribute nothing).
    UniformOverRelevant,
    /// Uniformly at a retrieved relevant document at or above the first
    /// maximally-gained one in the top `cutoff`.
    UniformOverRelevantAbovePreferred { cutoff: usize },
    /// Always at `cutoff`.
    StopAtRank { cutoff: usize },
    /// At the first relevant document.
    StopAtFirstRelevant,
}

/// What the stopped user has gotten out of the ranking.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Utility {
    /// Blend of relevant counts and cumulated gains against the ideal.
    BlendedRatio { beta: f64 },
    /// Fraction of read documents that were relevant.
    Precision,
    /// `1/rank`.
    ReciprocalRank,
}

/// Convenience: scores a plain ranking without classes or condensation.
pub fn score_ranking(
    ranking: &[&str],
    judged: &BTreeMap<String, u32>,
    scheme: &GainScheme,
) -> Result<ScoredList, GainError> {
    build_scored_list(ranking, judged, scheme, &ScoreOptions::default())
}

/// Builds the judged-document map `doc -> level` used by the list builder.
pub fn judgment_map(pairs: &[(&str, u32)]) -> BTreeMap<String, u32> {
    pairs
        .iter()
        .map(|&(doc, level)| (doc.to_owned(), level))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    /// Four judged documents, two of them relevant: d1 at level 2, d2 at
    /// level 1, d3 and d4 judged nonrelevant.
    fn fixture() -> BTreeMap<String, u32> {
        judgment_map(&[("d1", 2), ("d2", 1), ("d3", 0), ("d4", 0)])
    }

    fn scheme() -> GainScheme {
        GainScheme::linear(2)
    }

    fn run_a() -> ScoredList {
        score_ranking(&["d2", "d3", "d1"], &fixture(), &scheme()).unwrap()
    }

    fn run_b() -> ScoredList {
        score_ranking(&["d1", "d2"], &fixture(), &scheme()).unwrap()
    }

    fn run_c() -> ScoredList {
        score_ranking(&["d3", "d4"], &fixture(), &scheme()).unwrap()
    }

    #[test]
    fn scored_list_arrays() {
        let sl = run_a();
        assert_eq!(sl.len(), 3);
        assert_eq!(sl.relevant_total(), 2);
        assert_eq!(sl.gains, &[1.0, 0.0, 2.0]);
        assert_eq!(sl.rel, &[true, false, true]);
        assert_eq!(sl.cum_rel, &[1, 1, 2]);
        assert_eq!(sl.cum_gain, &[1.0, 1.0, 3.0]);
        assert_eq!(sl.ideal_gains, &[2.0, 1.0]);
        // The ideal cumulative gain saturates past the ideal length.
        assert_eq!(sl.ideal_cum_gain_at(2), 3.0);
        assert_eq!(sl.ideal_cum_gain_at(9), 3.0);
        assert_eq!(sl.max_level(), 2);
    }

    #[test]
    fn unjudged_documents_score_zero() {
        let sl = score_ranking(&["d9", "d1"], &fixture(), &scheme()).unwrap();
        assert_eq!(sl.gains, &[0.0, 2.0]);
        assert_eq!(sl.rel, &[false, true]);
    }

    #[test]
    fn condensed_drops_unjudged_before_ranking() {
        let opts = ScoreOptions {
            condensed: true,
            ..ScoreOptions::default()
        };
        let sl = build_scored_list(&["d1", "d9", "d2"], &fixture(), &scheme(), &opts).unwrap();
        let direct = score_ranking(&["d1", "d2"], &fixture(), &scheme()).unwrap();
        assert_eq!(sl, direct);
    }

    #[test]
    fn condensed_on_fully_judged_run_is_identity() {
        let opts = ScoreOptions {
            condensed: true,
            ..ScoreOptions::default()
        };
        let sl = build_scored_list(&["d2", "d3", "d1"], &fixture(), &scheme(), &opts).unwrap();
        assert_eq!(sl, run_a());
    }

    #[test]
    fn precision_and_friends() {
        assert!(close(run_a().precision_at(3), 2.0 / 3.0));
        assert!(close(run_b().precision_at(1), 1.0));
        assert!(close(run_c().precision_at(2), 0.0));
        assert!(close(run_a().r_precision().unwrap(), 0.5));
        assert!(close(run_a().average_precision().unwrap(), 5.0 / 6.0));
        assert!(close(run_a().reciprocal_rank(Some(3)), 1.0));
        assert!(close(run_c().reciprocal_rank(None), 0.0));
        assert_eq!(run_a().hit_at_one(), 1.0);
        assert_eq!(run_c().hit_at_one(), 0.0);
        assert!(close(run_a().normalized_gain_at_one().unwrap(), 0.5));
    }

    #[test]
    fn first_relevant_at_rank_two() {
        let sl = score_ranking(&["d3", "d1"], &fixture(), &scheme()).unwrap();
        assert!(close(sl.reciprocal_rank(Some(2)), 0.5));
    }

    #[test]
    fn cumulative_gain_ratios() {
        assert!(close(
            run_a().normalized_cumulative_gain_at(2).unwrap(),
            1.0 / 3.0
        ));
        assert!(close(
            run_b().normalized_cumulative_gain_at(2).unwrap(),
            1.0
        ));
    }

    #[test]
    fn original_discounted_gain() {
        let sl = run_a();
        let dcg = sl.dcg_original(3, 2.0);
        assert!(close(dcg, 1.0 + 2.0 / math::log(2.0, 3.0)));
        // Ideal: 2 at rank 1, 1 at rank 2 (log2(2) = 1, so no discount).
        assert!(close(sl.ndcg_original(3, 2.0).unwrap(), dcg / 3.0));
    }

    #[test]
    fn no_discount_within_the_log_base() {
        // With base >= cutoff every divisor is 1, so the normalized value
        // collapses to the normalized cumulative gain.
        let sl = run_a();
        for l in 1..=4 {
            let ndcg = sl.ndcg_original(l, 4.0).unwrap();
            let ncg = sl.normalized_cumulative_gain_at(l).unwrap();
            assert_eq!(ndcg, ncg);
        }
    }

    #[test]
    fn microsoft_ndcg() {
        let sl = run_a();
        let num = 1.0 / math::ln(2.0) + 2.0 / math::ln(4.0);
        let den = 2.0 / math::ln(2.0) + 1.0 / math::ln(3.0);
        assert!(close(sl.ms_ndcg_at(3).unwrap(), num / den));
        // Spot value: about 0.7602.
        assert!((sl.ms_ndcg_at(3).unwrap() - 0.7602).abs() < 5e-5);
        assert!(close(run_b().ms_ndcg_at(2).unwrap(), 1.0));
    }

    #[test]
    fn expected_reciprocal_rank() {
        let sl = run_a();
        assert!(close(sl.err_at(3, 2.0), 0.4375));
        assert!(close(sl.nerr_at(3, 2.0).unwrap(), 0.56));
        assert!(close(run_b().nerr_at(2, 2.0).unwrap(), 1.0));
        assert!(close(run_c().err_at(2, 2.0), 0.0));
    }

    #[test]
    fn q_measure_and_cutoff() {
        let sl = run_a();
        assert!(close(sl.blended_ratio(1, 1.0), 2.0 / 3.0));
        assert!(close(sl.blended_ratio(3, 1.0), 5.0 / 6.0));
        assert!(close(sl.q_measure(1.0).unwrap(), 0.75));
        assert!(close(sl.q_at(2, 1.0).unwrap(), 1.0 / 3.0));
        // Cutoff at or past both the list length and R gives the uncut value.
        assert_eq!(sl.q_at(10, 1.0), sl.q_measure(1.0));
        assert!(close(run_b().q_measure(1.0).unwrap(), 1.0));
    }

    #[test]
    fn q_at_beta_zero_is_average_precision() {
        let sl = run_a();
        assert_eq!(sl.q_measure(0.0), sl.average_precision());
    }

    #[test]
    fn preferred_rank_and_p_plus() {
        let sl = run_a();
        // The level-2 document sits at rank 3, below the level-1 one.
        assert_eq!(sl.preferred_rank(3), Some(3));
        assert_eq!(sl.preferred_rank(2), Some(1));
        assert!(close(sl.p_plus(3, 1.0), 0.75));
        // Only the level-1 document is inside the window.
        assert!(close(sl.p_plus(2, 1.0), 2.0 / 3.0));
        assert_eq!(run_c().preferred_rank(2), None);
        assert!(close(run_c().p_plus(2, 1.0), 0.0));
    }

    #[test]
    fn undefined_without_relevant_documents() {
        let empty = judgment_map(&[("d1", 0)]);
        let sl = score_ranking(&["d1"], &empty, &scheme()).unwrap();
        assert_eq!(sl.relevant_total(), 0);
        assert_eq!(sl.average_precision(), None);
        assert_eq!(sl.r_precision(), None);
        assert_eq!(sl.q_measure(1.0), None);
        assert_eq!(sl.q_at(1, 1.0), None);
        assert_eq!(sl.normalized_gain_at_one(), None);
        assert_eq!(sl.normalized_cumulative_gain_at(1), None);
        assert_eq!(sl.ndcg_original(1, 2.0), None);
        assert_eq!(sl.ms_ndcg_at(1), None);
        assert_eq!(sl.nerr_at(1, 2.0), None);
        // Count-based measures stay defined.
        assert_eq!(sl.precision_at(1), 0.0);
        assert_eq!(sl.err_at(1, 2.0), 0.0);
        assert_eq!(sl.hit_at_one(), 0.0);
    }

    #[test]
    fn ncu_reproduces_the_classics() {
        let beta = 1.0;
        for sl in [run_a(), run_b(), run_c()] {
            assert_eq!(
                sl.ncu(
                    &StopDistribution::UniformOverRelevant,
                    &Utility::BlendedRatio { beta }
                ),
                sl.q_measure(beta)
            );
            assert_eq!(
                sl.ncu(&StopDistribution::UniformOverRelevant, &Utility::Precision),
                sl.average_precision()
            );
            assert_eq!(
                sl.ncu(
                    &StopDistribution::UniformOverRelevantAbovePreferred { cutoff: 2 },
                    &Utility::BlendedRatio { beta }
                ),
                Some(sl.p_plus(2, beta))
            );
            assert_eq!(
                sl.ncu(
                    &StopDistribution::StopAtRank { cutoff: 2 },
                    &Utility::Precision
                ),
                Some(sl.precision_at(2))
            );
            assert_eq!(
                sl.ncu(
                    &StopDistribution::StopAtFirstRelevant,
                    &Utility::ReciprocalRank
                ),
                Some(sl.reciprocal_rank(None))
            );
        }
    }

    #[test]
    fn equivalence_classes_suppress_duplicates() {
        // d1 and d5 are interchangeable; d5 is judged lower.
        let judged = judgment_map(&[("d1", 2), ("d2", 1), ("d5", 1)]);
        let mut classes = BTreeMap::new();
        classes.insert("d1".to_owned(), "c1".to_owned());
        classes.insert("d5".to_owned(), "c1".to_owned());
        let opts = ScoreOptions {
            classes: Some(&classes),
            ..ScoreOptions::default()
        };

        // The class counts once in the ideal, at its best level.
        let sl = build_scored_list(&["d1", "d5", "d2"], &judged, &scheme(), &opts).unwrap();
        assert_eq!(sl.relevant_total(), 2);
        assert_eq!(sl.ideal_gains, &[2.0, 1.0]);
        // d5 is a later duplicate: suppressed.
        assert_eq!(sl.gains, &[2.0, 0.0, 1.0]);
        assert_eq!(sl.rel, &[true, false, true]);

        // First occurrence keeps its own (lower) judgment.
        let sl = build_scored_list(&["d5", "d1", "d2"], &judged, &scheme(), &opts).unwrap();
        assert_eq!(sl.gains, &[1.0, 0.0, 1.0]);

        // A perfect arrangement still reaches 1.
        let sl = build_scored_list(&["d1", "d2"], &judged, &scheme(), &opts).unwrap();
        assert!(close(sl.q_measure(1.0).unwrap(), 1.0));
    }

    #[test]
    fn level_beyond_scheme_is_an_error() {
        let judged = judgment_map(&[("d1", 5)]);
        let err = score_ranking(&["d1"], &judged, &scheme()).unwrap_err();
        assert!(matches!(err, GainError::LevelOutOfRange { level: 5, .. }));
    }

    #[test]
    fn empty_ranking_scores_zero_everywhere_defined() {
        let sl = score_ranking(&[], &fixture(), &scheme()).unwrap();
        assert_eq!(sl.len(), 0);
        assert_eq!(sl.relevant_total(), 2);
        assert_eq!(sl.average_precision(), Some(0.0));
        assert_eq!(sl.q_measure(1.0), Some(0.0));
        assert_eq!(sl.precision_at(5), 0.0);
        assert_eq!(sl.normalized_cumulative_gain_at(1), Some(0.0));
    }

    #[test]
    fn max_level_override_controls_stop_probabilities() {
        let judged = judgment_map(&[("d1", 1)]);
        let opts = ScoreOptions {
            max_level: Some(2),
            ..ScoreOptions::default()
        };
        let sl = build_scored_list(&["d1"], &judged, &GainScheme::linear(2), &opts).unwrap();
        // (2^1 - 1) / 2^2 = 0.25 at rank 1.
        assert!(close(sl.err_at(1, 2.0), 0.25));
    }
}
