//! The measure vocabulary: parsing request tokens, cutoff handling, and
//! canonical display names for report rows.

use std::fmt;

/// Every measure the driver can compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasureKind {
    /// Mean precision at relevant ranks.
    Ap,
    /// Blended-ratio measure over the whole list, or at a cutoff.
    Q,
    /// Precision at the number of relevant documents.
    RPrec,
    /// Precision at a cutoff.
    Precision,
    /// Reciprocal rank of the first relevant document.
    Rr,
    /// 1 when rank 1 is relevant.
    Hit,
    /// Gain at rank 1 over the best possible gain.
    NGain,
    /// Cumulative gain at a cutoff over the ideal.
    Ncg,
    /// Log-discounted cumulative gain, no discount before the base rank.
    Dcg,
    /// Normalized [`MeasureKind::Dcg`].
    Ndcg,
    /// Gain discounted by ln(1+r) at every rank, normalized.
    MsNdcg,
    /// Expected reciprocal rank.
    Err,
    /// Normalized expected reciprocal rank.
    NErr,
    /// Blended ratio down to the first top-gain relevant document.
    PPlus,
    /// Fraction of intents covered in the window.
    IntentRecall,
    /// MS-style nDCG over probability-weighted global gains.
    DivNdcg,
    /// Cutoff blended-ratio measure over global gains.
    DivQ,
    /// Intent recall blended with [`MeasureKind::DivNdcg`].
    DivSharpNdcg,
    /// Intent recall blended with [`MeasureKind::DivQ`].
    DivSharpQ,
    /// [`MeasureKind::DivNdcg`] with navigational gains paid once.
    DinNdcg,
    /// Per-intent expectation: Q for informational, P+ for navigational.
    PPlusQ,
    /// [`MeasureKind::DivNdcg`] over vertical-scaled gains.
    ViNdcg,
    /// [`MeasureKind::DivSharpNdcg`] over vertical-scaled gains.
    ViSharpNdcg,
    /// Appropriateness of returned verticals for the mapped intents.
    VScore,
    /// Blend of the sharp diversity score and the vertical score.
    Qu,
}

/// What a measure does with a `@cutoff` suffix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutoffRule {
    /// Whole-list measure; a cutoff is an error.
    Never,
    /// Whole-list by default, windowed with a cutoff.
    Optional,
    /// A cutoff is mandatory (directly or via an expansion list).
    Required,
    /// Only rank 1 makes sense; `@1` is implied.
    FixedAtOne,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 25] = [
        MeasureKind::Ap,
        MeasureKind::Q,
        MeasureKind::RPrec,
        MeasureKind::Precision,
        MeasureKind::Rr,
        MeasureKind::Hit,
        MeasureKind::NGain,
        MeasureKind::Ncg,
        MeasureKind::Dcg,
        MeasureKind::Ndcg,
        MeasureKind::MsNdcg,
        MeasureKind::Err,
        MeasureKind::NErr,
        MeasureKind::PPlus,
        MeasureKind::IntentRecall,
        MeasureKind::DivNdcg,
        MeasureKind::DivQ,
        MeasureKind::DivSharpNdcg,
        MeasureKind::DivSharpQ,
        MeasureKind::DinNdcg,
        MeasureKind::PPlusQ,
        MeasureKind::ViNdcg,
        MeasureKind::ViSharpNdcg,
        MeasureKind::VScore,
        MeasureKind::Qu,
    ];

    /// Request token (lowercase).
    pub fn token(self) -> &'static str {
        match self {
            MeasureKind::Ap => "ap",
            MeasureKind::Q => "q",
            MeasureKind::RPrec => "r-prec",
            MeasureKind::Precision => "p",
            MeasureKind::Rr => "rr",
            MeasureKind::Hit => "hit",
            MeasureKind::NGain => "ng",
            MeasureKind::Ncg => "ncg",
            MeasureKind::Dcg => "dcg",
            MeasureKind::Ndcg => "ndcg",
            MeasureKind::MsNdcg => "ms-ndcg",
            MeasureKind::Err => "err",
            MeasureKind::NErr => "nerr",
            MeasureKind::PPlus => "p+",
            MeasureKind::IntentRecall => "i-rec",
            MeasureKind::DivNdcg => "d-ndcg",
            MeasureKind::DivQ => "d-q",
            MeasureKind::DivSharpNdcg => "d#-ndcg",
            MeasureKind::DivSharpQ => "d#-q",
            MeasureKind::DinNdcg => "din-ndcg",
            MeasureKind::PPlusQ => "p+q",
            MeasureKind::ViNdcg => "vi-ndcg",
            MeasureKind::ViSharpNdcg => "vi#-ndcg",
            MeasureKind::VScore => "v-score",
            MeasureKind::Qu => "qu",
        }
    }

    /// Report label (uppercase form of the token).
    pub fn label(self) -> &'static str {
        match self {
            MeasureKind::Ap => "AP",
            MeasureKind::Q => "Q",
            MeasureKind::RPrec => "R-PREC",
            MeasureKind::Precision => "P",
            MeasureKind::Rr => "RR",
            MeasureKind::Hit => "HIT",
            MeasureKind::NGain => "NG",
            MeasureKind::Ncg => "NCG",
            MeasureKind::Dcg => "DCG",
            MeasureKind::Ndcg => "NDCG",
            MeasureKind::MsNdcg => "MS-NDCG",
            MeasureKind::Err => "ERR",
            MeasureKind::NErr => "NERR",
            MeasureKind::PPlus => "P+",
            MeasureKind::IntentRecall => "I-REC",
            MeasureKind::DivNdcg => "D-NDCG",
            MeasureKind::DivQ => "D-Q",
            MeasureKind::DivSharpNdcg => "D#-NDCG",
            MeasureKind::DivSharpQ => "D#-Q",
            MeasureKind::DinNdcg => "DIN-NDCG",
            MeasureKind::PPlusQ => "P+Q",
            MeasureKind::ViNdcg => "VI-NDCG",
            MeasureKind::ViSharpNdcg => "VI#-NDCG",
            MeasureKind::VScore => "V-SCORE",
            MeasureKind::Qu => "QU",
        }
    }

    pub fn cutoff_rule(self) -> CutoffRule {
        match self {
            MeasureKind::Ap | MeasureKind::RPrec => CutoffRule::Never,
            MeasureKind::Hit | MeasureKind::NGain => CutoffRule::FixedAtOne,
            MeasureKind::Q | MeasureKind::Rr | MeasureKind::PPlus => CutoffRule::Optional,
            _ => CutoffRule::Required,
        }
    }

    /// Needs an intent file with per-topic probabilities.
    pub fn needs_intents(self) -> bool {
        matches!(
            self,
            MeasureKind::IntentRecall
                | MeasureKind::DivNdcg
                | MeasureKind::DivQ
                | MeasureKind::DivSharpNdcg
                | MeasureKind::DivSharpQ
                | MeasureKind::DinNdcg
                | MeasureKind::PPlusQ
                | MeasureKind::ViNdcg
                | MeasureKind::ViSharpNdcg
                | MeasureKind::VScore
                | MeasureKind::Qu
        )
    }

    /// Needs the run's vertical column.
    pub fn needs_run_verticals(self) -> bool {
        matches!(
            self,
            MeasureKind::ViNdcg | MeasureKind::ViSharpNdcg | MeasureKind::VScore | MeasureKind::Qu
        )
    }

    /// Needs the subtopic-to-intent mapping file.
    pub fn needs_submap(self) -> bool {
        matches!(self, MeasureKind::VScore | MeasureKind::Qu)
    }

    fn from_token(token: &str) -> Option<Self> {
        MeasureKind::ALL.into_iter().find(|k| k.token() == token)
    }
}

/// A requested measure, possibly windowed at a cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasureSpec {
    pub kind: MeasureKind,
    pub cutoff: Option<usize>,
}

impl MeasureSpec {
    /// Parses a request token such as `ap`, `q@10`, or `d#-ndcg@3`.
    ///
    /// A `Required`-cutoff measure may be given bare here; [`expand`] fills
    /// the cutoffs in or rejects the request.
    pub fn parse(token: &str) -> Result<Self, String> {
        let token = token.trim().to_ascii_lowercase();
        let (name, cutoff) = match token.rsplit_once('@') {
            None => (token.as_str(), None),
            Some((name, cutoff)) => {
                let cutoff: usize = cutoff
                    .parse()
                    .map_err(|_| format!("cutoff {cutoff:?} in {token:?} is not an integer"))?;
                if cutoff == 0 {
                    return Err(format!("cutoff in {token:?} must be at least 1"));
                }
                (name, Some(cutoff))
            }
        };
        let kind =
            MeasureKind::from_token(name).ok_or_else(|| format!("unknown measure {name:?}"))?;
        match (kind.cutoff_rule(), cutoff) {
            (CutoffRule::Never, Some(_)) => {
                Err(format!("measure `{}` takes no cutoff", kind.token()))
            }
            (CutoffRule::FixedAtOne, Some(c)) if c != 1 => Err(format!(
                "measure `{}` is only defined at rank 1",
                kind.token()
            )),
            (CutoffRule::FixedAtOne, _) => Ok(MeasureSpec {
                kind,
                cutoff: Some(1),
            }),
            _ => Ok(MeasureSpec { kind, cutoff }),
        }
    }

    /// Whether this spec still needs a cutoff from the expansion list.
    pub fn pending_cutoff(&self) -> bool {
        self.kind.cutoff_rule() == CutoffRule::Required && self.cutoff.is_none()
    }
}

impl fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.cutoff {
            None => write!(f, "{}", self.kind.label()),
            Some(c) => write!(f, "{}@{}", self.kind.label(), c),
        }
    }
}

/// Parses and expands a measure request: each cutoff-requiring token given
/// without `@N` is repeated once per entry of `cutoffs`, in request-major
/// order. Optional-cutoff measures are never expanded; bare means the whole
/// list.
pub fn expand(tokens: &[String], cutoffs: &[usize]) -> Result<Vec<MeasureSpec>, String> {
    if tokens.is_empty() {
        return Err("no measures requested".into());
    }
    if let Some(&bad) = cutoffs.iter().find(|&&c| c == 0) {
        return Err(format!("cutoff {bad} must be at least 1"));
    }
    let mut out = Vec::new();
    for token in tokens {
        let spec = MeasureSpec::parse(token)?;
        if spec.pending_cutoff() {
            if cutoffs.is_empty() {
                return Err(format!(
                    "measure `{token}` needs a cutoff: write {token}@N or pass --cutoffs"
                ));
            }
            out.extend(cutoffs.iter().map(|&c| MeasureSpec {
                kind: spec.kind,
                cutoff: Some(c),
            }));
        } else {
            out.push(spec);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_round_trip_through_display() {
        for kind in MeasureKind::ALL {
            let with_cutoff = match kind.cutoff_rule() {
                CutoffRule::Never => kind.token().to_string(),
                CutoffRule::FixedAtOne => format!("{}@1", kind.token()),
                _ => format!("{}@3", kind.token()),
            };
            let spec = MeasureSpec::parse(&with_cutoff).unwrap_or_else(|e| panic!("{e}"));
            assert_eq!(spec.kind, kind);
            let shown = spec.to_string().to_ascii_lowercase();
            assert_eq!(
                MeasureSpec::parse(&shown).unwrap(),
                spec,
                "display form must parse back"
            );
        }
    }

    #[test]
    fn cutoff_rules() {
        assert_eq!(
            MeasureSpec::parse("hit").unwrap(),
            MeasureSpec {
                kind: MeasureKind::Hit,
                cutoff: Some(1)
            }
        );
        assert_eq!(MeasureSpec::parse("hit@1").unwrap().cutoff, Some(1));
        assert!(MeasureSpec::parse("hit@2").is_err());
        assert!(MeasureSpec::parse("ap@5").is_err());
        assert!(MeasureSpec::parse("q@0").is_err());
        assert!(MeasureSpec::parse("wombat").is_err());
        assert_eq!(MeasureSpec::parse("Q@10").unwrap().cutoff, Some(10));
        assert_eq!(MeasureSpec::parse("q").unwrap().cutoff, None);
    }

    #[test]
    fn expansion_fills_missing_cutoffs() {
        let tokens: Vec<String> = ["ms-ndcg", "q", "nerr@5"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let specs = expand(&tokens, &[3, 10]).unwrap();
        let shown: Vec<String> = specs.iter().map(|s| s.to_string()).collect();
        assert_eq!(shown, ["MS-NDCG@3", "MS-NDCG@10", "Q", "NERR@5"]);

        assert!(expand(&tokens[..1], &[]).is_err());
        assert!(expand(&[], &[]).is_err());
    }
}
