//! Relatedness between articles by place, by time, and by both.
//!
//! Both similarities are exponential decays, `exp(-distance / scale)`, so they
//! lie in (0, 1] and equal 1 for coincident events. The combined score is a
//! convex combination of the two.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::corpus::Corpus;
use crate::error::QueryError;
use crate::model::Article;
use crate::spatial::haversine_km;
use crate::temporal::{span_gap_days, span_to_ordinal_range};

/// Tolerance for the weights summing to one.
const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelatednessParams {
    spatial_scale_km: f64,
    temporal_scale_days: f64,
    spatial_weight: f64,
    temporal_weight: f64,
}

impl Default for RelatednessParams {
    fn default() -> Self {
        RelatednessParams {
            spatial_scale_km: 250.0,
            temporal_scale_days: 3650.0,
            spatial_weight: 0.5,
            temporal_weight: 0.5,
        }
    }
}

impl RelatednessParams {
    pub fn new(
        spatial_scale_km: f64,
        temporal_scale_days: f64,
        spatial_weight: f64,
        temporal_weight: f64,
    ) -> Result<Self, QueryError> {
        let invalid = |m: String| Err(QueryError::InvalidArgument(m));
        if !(spatial_scale_km.is_finite() && spatial_scale_km > 0.0) {
            return invalid(format!(
                "spatial scale must be positive, got {spatial_scale_km}"
            ));
        }
        if !(temporal_scale_days.is_finite() && temporal_scale_days > 0.0) {
            return invalid(format!(
                "temporal scale must be positive, got {temporal_scale_days}"
            ));
        }
        if !(spatial_weight >= 0.0 && temporal_weight >= 0.0) {
            return invalid("weights must be non-negative".to_string());
        }
        if ((spatial_weight + temporal_weight) - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return invalid(format!(
                "weights must sum to 1, got {spatial_weight} + {temporal_weight}"
            ));
        }
        Ok(RelatednessParams {
            spatial_scale_km,
            temporal_scale_days,
            spatial_weight,
            temporal_weight,
        })
    }

    /// Rescales arbitrary non-negative weights to sum to one.
    pub fn with_relative_weights(
        spatial_scale_km: f64,
        temporal_scale_days: f64,
        spatial: f64,
        temporal: f64,
    ) -> Result<Self, QueryError> {
        let total = spatial + temporal;
        if !(total.is_finite() && total > 0.0) {
            return Err(QueryError::InvalidArgument(
                "weights must have a positive sum".to_string(),
            ));
        }
        Self::new(
            spatial_scale_km,
            temporal_scale_days,
            spatial / total,
            temporal / total,
        )
    }

    pub fn spatial_scale_km(&self) -> f64 {
        self.spatial_scale_km
    }

    pub fn temporal_scale_days(&self) -> f64 {
        self.temporal_scale_days
    }

    pub fn spatial_weight(&self) -> f64 {
        self.spatial_weight
    }

    pub fn temporal_weight(&self) -> f64 {
        self.temporal_weight
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Location,
    Time,
    Combined,
}

impl FromStr for Mode {
    type Err = QueryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "location" => Ok(Mode::Location),
            "time" => Ok(Mode::Time),
            "combined" => Ok(Mode::Combined),
            other => Err(QueryError::InvalidArgument(format!(
                "unknown mode `{other}` (expected location, time, or combined)"
            ))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Location => "location",
            Mode::Time => "time",
            Mode::Combined => "combined",
        })
    }
}

/// Temporal facet of a pair of events, strongest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    SameDate,
    Anniversary,
    Nearby,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelatedScore {
    #[serde(rename = "id")]
    pub article_id: String,
    pub score: f64,
    #[serde(rename = "spatial")]
    pub spatial_component: f64,
    #[serde(rename = "temporal")]
    pub temporal_component: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tier: Option<Tier>,
}

pub fn spatial_similarity(a: &Article, b: &Article, params: &RelatednessParams) -> f64 {
    (-haversine_km(&a.location, &b.location) / params.spatial_scale_km).exp()
}

pub fn temporal_similarity(a: &Article, b: &Article, params: &RelatednessParams) -> f64 {
    (-(gap_days(a, b) as f64) / params.temporal_scale_days).exp()
}

fn gap_days(a: &Article, b: &Article) -> i64 {
    span_gap_days(
        &span_to_ordinal_range(&a.span),
        &span_to_ordinal_range(&b.span),
    )
}

pub fn time_tier(a: &Article, b: &Article) -> Tier {
    if gap_days(a, b) == 0 {
        return Tier::SameDate;
    }
    match (a.span.start.month_day(), b.span.start.month_day()) {
        (Some(x), Some(y)) if x == y && a.span.start.year() != b.span.start.year() => {
            Tier::Anniversary
        }
        _ => Tier::Nearby,
    }
}

/// The `k` articles most related to `id` under `mode`, best first.
///
/// Location and combined modes sort by score descending then id. Time mode
/// sorts by tier, then by day gap ascending, then id; its score is the
/// temporal component.
pub fn rank_related(
    corpus: &Corpus,
    id: &str,
    mode: Mode,
    k: usize,
    params: &RelatednessParams,
) -> Result<Vec<RelatedScore>, QueryError> {
    if k == 0 {
        return Err(QueryError::InvalidArgument("k must be at least 1".into()));
    }
    let subject = corpus
        .article(id)
        .ok_or_else(|| QueryError::UnknownArticle(id.to_string()))?;

    let mut scored: Vec<(RelatedScore, i64)> = corpus
        .articles()
        .iter()
        .filter(|c| c.id != subject.id)
        .map(|c| {
            let spatial = spatial_similarity(subject, c, params);
            let temporal = temporal_similarity(subject, c, params);
            let (score, tier) = match mode {
                Mode::Location => (spatial, None),
                Mode::Time => (temporal, Some(time_tier(subject, c))),
                Mode::Combined => (
                    params.spatial_weight * spatial + params.temporal_weight * temporal,
                    None,
                ),
            };
            let entry = RelatedScore {
                article_id: c.id.clone(),
                score,
                spatial_component: spatial,
                temporal_component: temporal,
                tier,
            };
            (entry, gap_days(subject, c))
        })
        .collect();

    scored.sort_by(|(a, gap_a), (b, gap_b)| {
        let primary = match mode {
            Mode::Time => a.tier.cmp(&b.tier).then(gap_a.cmp(gap_b)),
            _ => Ordering::Equal,
        };
        primary
            .then(b.score.total_cmp(&a.score))
            .then_with(|| a.article_id.cmp(&b.article_id))
    });
    scored.truncate(k);
    Ok(scored.into_iter().map(|(s, _)| s).collect())
}
