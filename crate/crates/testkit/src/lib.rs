//! Test-only oracles for histmap.
//!
//! Each oracle recomputes a query by direct enumeration from first
//! principles (its own calendar arithmetic, distance formula, and
//! tokenizer) so it can be compared against the indexed implementation.

use std::collections::BTreeMap;
use std::path::PathBuf;

use histmap_core::{Article, Corpus, Era, GeoPoint, Glossary, HistoricalDate, ImageRef, TimeSpan};
use rand::seq::IndexedRandom;
use rand::Rng;

pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// The checked-in 24-article fixture corpus.
pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/corpus")
}

/// Day count with day 1 = 0001-01-01, from the closed-form year sum.
pub fn rata_die_oracle(year: i64, month: i64, day: i64) -> i64 {
    const DAYS_BEFORE_MONTH: [i64; 12] = [0, 31, 59, 90, 120, 151, 181, 212, 243, 273, 304, 334];
    let leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    let p = year - 1;
    365 * p + p / 4 - p / 100
        + p / 400
        + DAYS_BEFORE_MONTH[(month - 1) as usize]
        + i64::from(leap && month > 2)
        + day
}

fn month_length_oracle(year: i64, month: i64) -> i64 {
    let next = if month == 12 {
        rata_die_oracle(year + 1, 1, 1)
    } else {
        rata_die_oracle(year, month + 1, 1)
    };
    next - rata_die_oracle(year, month, 1)
}

pub fn date_range_oracle(d: &HistoricalDate) -> (i64, i64) {
    let y = i64::from(d.year());
    match (d.month().map(i64::from), d.day().map(i64::from)) {
        (Some(m), Some(day)) => {
            let r = rata_die_oracle(y, m, day);
            (r, r)
        }
        (Some(m), None) => {
            let lo = rata_die_oracle(y, m, 1);
            (lo, lo + month_length_oracle(y, m) - 1)
        }
        _ => (rata_die_oracle(y, 1, 1), rata_die_oracle(y + 1, 1, 1) - 1),
    }
}

pub fn span_range_oracle(a: &Article) -> (i64, i64) {
    (
        date_range_oracle(&a.span.start).0,
        date_range_oracle(&a.span.end).1,
    )
}

pub fn gap_oracle(a: (i64, i64), b: (i64, i64)) -> i64 {
    if a.1 < b.0 {
        b.0 - a.1
    } else if b.1 < a.0 {
        a.0 - b.1
    } else {
        0
    }
}

fn era_of(corpus: &Corpus, a: &Article) -> Era {
    corpus
        .glossary(&a.glossary_id)
        .expect("resolved glossary")
        .era
}

fn sorted_by_start(mut rows: Vec<(i64, String)>) -> Vec<String> {
    rows.sort();
    rows.into_iter().map(|(_, id)| id).collect()
}

pub fn time_range_oracle(corpus: &Corpus, from: i64, to: i64, era: Option<Era>) -> Vec<String> {
    let rows = corpus
        .articles()
        .iter()
        .filter(|a| {
            let (lo, hi) = span_range_oracle(a);
            lo <= to && hi >= from && era.is_none_or(|e| era_of(corpus, a) == e)
        })
        .map(|a| (span_range_oracle(a).0, a.id.clone()))
        .collect();
    sorted_by_start(rows)
}

pub fn anniversary_oracle(
    corpus: &Corpus,
    month: u8,
    day: u8,
    before_year: Option<i32>,
) -> Vec<String> {
    let mut rows: Vec<(i32, String)> = corpus
        .articles()
        .iter()
        .filter(|a| a.span.start.month() == Some(month) && a.span.start.day() == Some(day))
        .filter(|a| before_year.is_none_or(|y| a.span.start.year() < y))
        .map(|a| (a.span.start.year(), a.id.clone()))
        .collect();
    rows.sort();
    rows.into_iter().map(|(_, id)| id).collect()
}

/// `(lo, hi, ids)` per bucket, or `None` when the width rule cannot
/// produce `n` non-empty buckets.
pub fn bucket_oracle(
    corpus: &Corpus,
    from: i64,
    to: i64,
    n: usize,
    era: Option<Era>,
) -> Option<Vec<(i64, i64, Vec<String>)>> {
    let len = to - from + 1;
    let n = n as i64;
    let width = (len as f64 / n as f64).ceil() as i64;
    let mut buckets = Vec::new();
    let mut lo = from;
    for _ in 0..n {
        if lo > to {
            return None;
        }
        let hi = (lo + width - 1).min(to);
        buckets.push((lo, hi, Vec::new()));
        lo = hi + 1;
    }
    let mut members: Vec<&Article> = corpus
        .articles()
        .iter()
        .filter(|a| {
            let (alo, ahi) = span_range_oracle(a);
            alo <= to && ahi >= from && era.is_none_or(|e| era_of(corpus, a) == e)
        })
        .collect();
    members.sort_by_key(|a| (span_range_oracle(a).0, a.id.clone()));
    for a in members {
        let (alo, ahi) = span_range_oracle(a);
        let mid = ((alo + ahi) as f64 / 2.0).floor() as i64;
        let mid = mid.max(from).min(to);
        let slot = buckets
            .iter_mut()
            .find(|(lo, hi, _)| *lo <= mid && mid <= *hi)
            .expect("buckets cover the range");
        slot.2.push(a.id.clone());
    }
    Some(buckets)
}

pub fn in_box_oracle(p: &GeoPoint, south: f64, west: f64, north: f64, east: f64) -> bool {
    if p.lat < south || p.lat > north {
        return false;
    }
    if west <= east {
        p.lon >= west && p.lon < east
    } else {
        p.lon >= west || p.lon < east
    }
}

pub fn bbox_oracle(
    corpus: &Corpus,
    (south, west, north, east): (f64, f64, f64, f64),
    from: Option<i64>,
    to: Option<i64>,
) -> Vec<String> {
    let rows = corpus
        .articles()
        .iter()
        .filter(|a| in_box_oracle(&a.location, south, west, north, east))
        .filter(|a| {
            let (lo, hi) = span_range_oracle(a);
            from.is_none_or(|f| hi >= f) && to.is_none_or(|t| lo <= t)
        })
        .map(|a| (span_range_oracle(a).0, a.id.clone()))
        .collect();
    sorted_by_start(rows)
}

/// `((row, col), ids)` per non-empty cell, cells in row-major order.
pub fn grid_oracle(corpus: &Corpus, ids: &[String], zoom: u8) -> Vec<((i64, i64), Vec<String>)> {
    let cell = 45.0 / 2f64.powi(i32::from(zoom));
    let rows = (180.0 / cell).round() as i64;
    let mut cells: BTreeMap<(i64, i64), Vec<(i64, String)>> = BTreeMap::new();
    for id in ids {
        let a = corpus.article(id).expect("id from corpus");
        let row = (((a.location.lat + 90.0) / cell).floor() as i64).min(rows - 1);
        let col = ((a.location.lon + 180.0) / cell).floor() as i64;
        cells
            .entry((row, col))
            .or_default()
            .push((span_range_oracle(a).0, id.clone()));
    }
    cells
        .into_iter()
        .map(|(k, v)| (k, sorted_by_start(v)))
        .collect()
}

/// Great-circle distance through the chord between unit vectors.
pub fn chord_distance_km(a: &GeoPoint, b: &GeoPoint) -> f64 {
    let unit = |p: &GeoPoint| {
        let (lat, lon) = (p.lat.to_radians(), p.lon.to_radians());
        [lat.cos() * lon.cos(), lat.cos() * lon.sin(), lat.sin()]
    };
    let (u, v) = (unit(a), unit(b));
    let chord = ((u[0] - v[0]).powi(2) + (u[1] - v[1]).powi(2) + (u[2] - v[2]).powi(2)).sqrt();
    2.0 * EARTH_RADIUS_KM * (chord / 2.0).min(1.0).asin()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    Location,
    Time,
    Combined,
}

/// Full ranking of every other article: `(id, score, spatial, temporal)`.
pub fn rank_oracle(
    corpus: &Corpus,
    id: &str,
    mode: OracleMode,
    (scale_km, scale_days, w_s, w_t): (f64, f64, f64, f64),
) -> Vec<(String, f64, f64, f64)> {
    let subject = corpus.article(id).expect("subject exists");
    let subject_range = span_range_oracle(subject);
    let mut rows: Vec<(u8, i64, String, f64, f64, f64)> = corpus
        .articles()
        .iter()
        .filter(|c| c.id != id)
        .map(|c| {
            let gap = gap_oracle(subject_range, span_range_oracle(c));
            let s = (-chord_distance_km(&subject.location, &c.location) / scale_km).exp();
            let t = (-(gap as f64) / scale_days).exp();
            let same_day = subject.span.start.day().is_some()
                && c.span.start.day().is_some()
                && subject.span.start.month() == c.span.start.month()
                && subject.span.start.day() == c.span.start.day()
                && subject.span.start.year() != c.span.start.year();
            let tier = if gap == 0 {
                0
            } else if same_day {
                1
            } else {
                2
            };
            let score = match mode {
                OracleMode::Location => s,
                OracleMode::Time => t,
                OracleMode::Combined => w_s * s + w_t * t,
            };
            (tier, gap, c.id.clone(), score, s, t)
        })
        .collect();
    match mode {
        OracleMode::Time => rows.sort_by(|a, b| (a.0, a.1, &a.2).cmp(&(b.0, b.1, &b.2))),
        _ => rows.sort_by(|a, b| b.3.partial_cmp(&a.3).unwrap().then(a.2.cmp(&b.2))),
    }
    rows.into_iter()
        .map(|(_, _, id, score, s, t)| (id, score, s, t))
        .collect()
}

/// Lowercased alphanumeric runs.
pub fn tokenize_oracle(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut current = String::new();
    for ch in text.to_lowercase().chars() {
        if ch.is_alphanumeric() {
            current.push(ch);
        } else if !current.is_empty() {
            out.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        out.push(current);
    }
    out
}

/// `(id, score)` where score = 2 per title occurrence + 1 per body
/// occurrence, summed over distinct query tokens.
pub fn search_oracle(corpus: &Corpus, query: &str) -> Vec<(String, u64)> {
    let mut terms = tokenize_oracle(query);
    terms.sort();
    terms.dedup();
    let mut hits: Vec<(String, u64)> = corpus
        .articles()
        .iter()
        .map(|a| {
            let title = tokenize_oracle(&a.title);
            let body = tokenize_oracle(&a.body);
            let score: u64 = terms
                .iter()
                .map(|t| {
                    2 * title.iter().filter(|w| *w == t).count() as u64
                        + body.iter().filter(|w| *w == t).count() as u64
                })
                .sum();
            (a.id.clone(), score)
        })
        .filter(|(_, s)| *s > 0)
        .collect();
    hits.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    hits
}

pub fn random_valid_date<R: Rng>(
    rng: &mut R,
    years: std::ops::RangeInclusive<i64>,
) -> HistoricalDate {
    let year = rng.random_range(years);
    match rng.random_range(0..4) {
        0 => HistoricalDate::year_only(year).unwrap(),
        1 => HistoricalDate::new(year, Some(rng.random_range(1..=12)), None).unwrap(),
        _ => {
            let month = rng.random_range(1..=12);
            let day = rng.random_range(1..=month_length_oracle(year, month));
            HistoricalDate::ymd(year, month, day).unwrap()
        }
    }
}

const WORDS: &[&str] = &[
    "sultan",
    "wali",
    "demak",
    "mosque",
    "java",
    "aceh",
    "pasai",
    "trade",
    "port",
    "kingdom",
    "islam",
    "scholar",
    "independence",
    "merdeka",
    "surabaya",
    "makassar",
];

fn random_text<R: Rng>(rng: &mut R, words: usize) -> String {
    let mut parts = Vec::with_capacity(words);
    for _ in 0..words {
        let w = *WORDS.choose(rng).unwrap();
        parts.push(if rng.random_bool(0.2) {
            w.to_uppercase()
        } else {
            w.to_string()
        });
    }
    parts.join(if rng.random_bool(0.5) { " " } else { ", " })
}

/// A corpus of up to `max_articles` random articles under three glossaries
/// (two classical, one modern), built from in-memory parts.
pub fn random_corpus<R: Rng>(rng: &mut R, max_articles: usize) -> Corpus {
    let glossaries = vec![
        glossary("g-a", Era::Classical),
        glossary("g-b", Era::Classical),
        glossary("g-c", Era::Modern),
    ];
    let n = rng.random_range(0..=max_articles);
    let mut articles: Vec<Article> = Vec::with_capacity(n);
    for i in 0..n {
        let start = random_valid_date(rng, 1200..=1960);
        let span = if rng.random_bool(0.25) {
            let end_year = i64::from(start.year()) + rng.random_range(0..40);
            TimeSpan::new(start, HistoricalDate::year_only(end_year).unwrap()).unwrap()
        } else {
            TimeSpan::at(start)
        };
        let location = if i > 0 && rng.random_bool(0.15) {
            articles[rng.random_range(0..i)].location
        } else {
            GeoPoint::new(rng.random_range(-11.0..6.0), rng.random_range(94.0..141.0)).unwrap()
        };
        let images = if rng.random_bool(0.3) {
            vec![ImageRef {
                path: format!("images/a{i}.png"),
                caption: format!("caption {i}"),
                credit: None,
            }]
        } else {
            Vec::new()
        };
        let title_words = rng.random_range(1..4);
        let title = random_text(rng, title_words);
        let body_words = rng.random_range(3..12);
        let body = random_text(rng, body_words);
        articles.push(Article {
            id: format!("a{i:02}"),
            title,
            body,
            glossary_id: glossaries[rng.random_range(0..glossaries.len())].id.clone(),
            span,
            location,
            place_name: format!("place {i}"),
            images,
            tags: Vec::new(),
        });
    }
    Corpus::from_parts(glossaries, articles).expect("generated corpus is valid")
}

fn glossary(id: &str, era: Era) -> Glossary {
    Glossary {
        id: id.into(),
        title: id.to_uppercase(),
        description: String::new(),
        era,
    }
}
