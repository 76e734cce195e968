//! Ordinal-day time axis and the time-based queries over a corpus.

use serde::Serialize;

use crate::calendar::{days_in_month, HistoricalDate};
use crate::corpus::Corpus;
use crate::error::QueryError;
use crate::model::{Era, TimeSpan};

/// Inclusive range of Rata Die days.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct OrdinalRange {
    pub lo: i64,
    pub hi: i64,
}

impl OrdinalRange {
    pub fn new(lo: i64, hi: i64) -> Result<Self, QueryError> {
        if lo > hi {
            return Err(QueryError::InvalidRange { from: lo, to: hi });
        }
        Ok(OrdinalRange { lo, hi })
    }

    pub fn intersects(&self, other: &OrdinalRange) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn len_days(&self) -> i64 {
        self.hi - self.lo + 1
    }

    /// Day used to place the range on a timeline.
    pub fn midpoint(&self) -> i64 {
        (self.lo + self.hi).div_euclid(2)
    }
}

pub fn date_to_ordinal_range(date: &HistoricalDate) -> OrdinalRange {
    OrdinalRange {
        lo: date.first_day(),
        hi: date.last_day(),
    }
}

pub fn span_to_ordinal_range(span: &TimeSpan) -> OrdinalRange {
    OrdinalRange {
        lo: span.start.first_day(),
        hi: span.end.last_day(),
    }
}

/// Days between two ranges; zero when they share a day.
pub fn span_gap_days(a: &OrdinalRange, b: &OrdinalRange) -> i64 {
    if a.intersects(b) {
        0
    } else {
        a.lo.max(b.lo) - a.hi.min(b.hi)
    }
}

fn era_matches(corpus: &Corpus, index: usize, era: Option<Era>) -> bool {
    era.is_none_or(|e| corpus.era_at(index) == e)
}

/// Indices of articles whose span intersects `window`, in corpus order.
pub(crate) fn indices_in_window(
    corpus: &Corpus,
    window: OrdinalRange,
    era: Option<Era>,
) -> impl Iterator<Item = usize> + '_ {
    // Corpus order is by range.lo, so nothing past this point can start in time.
    let end = corpus.ranges().partition_point(|r| r.lo <= window.hi);
    (0..end).filter(move |&i| corpus.range_at(i).hi >= window.lo && era_matches(corpus, i, era))
}

/// Articles whose span intersects `[from, to]`, ordered by `(span.lo, id)`.
pub fn query_time_range(
    corpus: &Corpus,
    from: i64,
    to: i64,
    era: Option<Era>,
) -> Result<Vec<&str>, QueryError> {
    let window = OrdinalRange::new(from, to)?;
    Ok(indices_in_window(corpus, window, era)
        .map(|i| corpus.articles()[i].id.as_str())
        .collect())
}

fn check_month_day(month: u32, day: u32) -> Result<(u8, u8), QueryError> {
    // 2000 is a leap year, so Feb 29 counts as a possible day.
    let ok =
        (1..=12).contains(&month) && day >= 1 && day <= u32::from(days_in_month(2000, month as u8));
    if ok {
        Ok((month as u8, day as u8))
    } else {
        Err(QueryError::InvalidDate { month, day })
    }
}

/// Articles whose day-precision start falls on `month`/`day` of any year
/// (strictly before `before_year` when given), ordered by year then id.
pub fn anniversary_query(
    corpus: &Corpus,
    month: u32,
    day: u32,
    before_year: Option<i32>,
) -> Result<Vec<&str>, QueryError> {
    let target = check_month_day(month, day)?;
    let mut hits: Vec<(i32, &str)> = corpus
        .articles()
        .iter()
        .filter(|a| a.span.start.month_day() == Some(target))
        .filter(|a| before_year.is_none_or(|limit| a.span.start.year() < limit))
        .map(|a| (a.span.start.year(), a.id.as_str()))
        .collect();
    hits.sort_unstable();
    Ok(hits.into_iter().map(|(_, id)| id).collect())
}

/// One cell of a timeline histogram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TimelineBucket {
    pub lo: i64,
    pub hi: i64,
    pub count: usize,
    #[serde(rename = "ids")]
    pub article_ids: Vec<String>,
}

/// Splits `[from, to]` into `n` buckets of width `ceil(len / n)` (the last
/// one truncated) and drops each matching article into the bucket holding
/// its span midpoint, clamped into the range.
///
/// Fails when the width rule cannot yield `n` non-empty buckets, which
/// happens once `n` approaches the square root of the range length.
pub fn bucketize(
    corpus: &Corpus,
    from: i64,
    to: i64,
    n: usize,
    era: Option<Era>,
) -> Result<Vec<TimelineBucket>, QueryError> {
    if n == 0 {
        return Err(QueryError::InvalidArgument(
            "bucket count must be at least 1".into(),
        ));
    }
    let window = OrdinalRange::new(from, to)?;
    let len = window.len_days();
    let n_i = i64::try_from(n).unwrap_or(i64::MAX);
    let width = (len + n_i - 1) / n_i;
    if (n_i - 1).saturating_mul(width) >= len {
        return Err(QueryError::InvalidArgument(format!(
            "{n} buckets of width {width} cannot tile a {len}-day range"
        )));
    }

    let mut buckets: Vec<TimelineBucket> = (0..n_i)
        .map(|k| TimelineBucket {
            lo: from + k * width,
            hi: (from + (k + 1) * width - 1).min(to),
            count: 0,
            article_ids: Vec::new(),
        })
        .collect();
    for i in indices_in_window(corpus, window, era) {
        let mid = corpus.range_at(i).midpoint().clamp(from, to);
        let bucket = &mut buckets[((mid - from) / width) as usize];
        bucket.article_ids.push(corpus.articles()[i].id.clone());
        bucket.count += 1;
    }
    Ok(buckets)
}
