//! Endpoint logic shared by the HTTP server and the `query` CLI.
//!
//! Every endpoint is answered by [`Api::respond`], which renders the JSON
//! body bytes. The HTTP layer and the CLI only translate their inputs into a
//! [`Request`], so both surfaces produce identical bodies.

use std::collections::HashMap;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use histmap_core::calendar::rata_die;
use histmap_core::{
    anniversary_query, bucketize, grid_cluster, rank_related, Article, BoundingBox, Cluster,
    Corpus, Era, Glossary, HistoricalDate, Mode, QueryError, RelatedScore, RelatednessParams,
    TimeWindow, TimelineBucket,
};
use serde::Serialize;

use crate::search::{SearchHit, SearchIndex};

pub const DEFAULT_K: usize = 5;
pub const DEFAULT_BUCKETS: usize = 20;

/// Failure reported to clients as `{"error": {"code", "message"}}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiError {
    pub status: u16,
    pub code: &'static str,
    pub message: String,
}

impl ApiError {
    pub fn invalid(message: impl Into<String>) -> Self {
        ApiError {
            status: 400,
            code: "invalid_argument",
            message: message.into(),
        }
    }

    pub fn not_found(message: impl Into<String>) -> Self {
        ApiError {
            status: 404,
            code: "not_found",
            message: message.into(),
        }
    }

    pub fn body(&self) -> Vec<u8> {
        #[derive(Serialize)]
        struct Inner<'a> {
            code: &'a str,
            message: &'a str,
        }
        #[derive(Serialize)]
        struct Envelope<'a> {
            error: Inner<'a>,
        }
        render(&Envelope {
            error: Inner {
                code: self.code,
                message: &self.message,
            },
        })
    }
}

impl std::fmt::Display for ApiError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl std::error::Error for ApiError {}

impl From<QueryError> for ApiError {
    fn from(e: QueryError) -> Self {
        match e {
            QueryError::UnknownArticle(_) => ApiError::not_found(e.to_string()),
            _ => ApiError::invalid(e.to_string()),
        }
    }
}

fn render<T: Serialize>(value: &T) -> Vec<u8> {
    serde_json::to_vec(value).expect("response types serialize infallibly")
}

/// Engine settings that shape responses.
#[derive(Debug, Clone, PartialEq)]
pub struct ApiOptions {
    pub params: RelatednessParams,
    pub default_k: usize,
    /// Date used by `/api/today` when the request names none.
    pub fixed_today: Option<HistoricalDate>,
    /// Offset from UTC used to read the civil date off the system clock.
    pub utc_offset_minutes: i32,
}

impl Default for ApiOptions {
    fn default() -> Self {
        ApiOptions {
            params: RelatednessParams::default(),
            default_k: DEFAULT_K,
            fixed_today: None,
            utc_offset_minutes: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventsQuery {
    pub south: f64,
    pub west: f64,
    pub north: f64,
    pub east: f64,
    pub zoom: u8,
    pub from: Option<i64>,
    pub to: Option<i64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TimelineQuery {
    pub from: Option<i64>,
    pub to: Option<i64>,
    pub buckets: Option<usize>,
    pub era: Option<Era>,
}

/// One API call, independent of how it arrived.
#[derive(Debug, Clone, PartialEq)]
pub enum Request {
    Glossaries,
    Article {
        id: String,
        k: Option<usize>,
    },
    Related {
        id: String,
        mode: Mode,
        k: Option<usize>,
    },
    Events(EventsQuery),
    Timeline(TimelineQuery),
    Today {
        date: Option<String>,
    },
    Search {
        q: String,
    },
    Gallery,
}

/// Reads a typed query-string parameter; absent or empty means `None`.
pub fn param<T: FromStr>(
    params: &HashMap<String, String>,
    name: &str,
) -> Result<Option<T>, ApiError> {
    match params.get(name).map(|v| v.trim()) {
        None | Some("") => Ok(None),
        Some(raw) => raw
            .parse()
            .map(Some)
            .map_err(|_| ApiError::invalid(format!("parameter `{name}`: cannot parse `{raw}`"))),
    }
}

fn required<T: FromStr>(params: &HashMap<String, String>, name: &str) -> Result<T, ApiError> {
    param(params, name)?.ok_or_else(|| ApiError::invalid(format!("missing parameter `{name}`")))
}

impl EventsQuery {
    pub fn from_params(params: &HashMap<String, String>) -> Result<Self, ApiError> {
        Ok(EventsQuery {
            south: required(params, "south")?,
            west: required(params, "west")?,
            north: required(params, "north")?,
            east: required(params, "east")?,
            zoom: required(params, "zoom")?,
            from: param(params, "from")?,
            to: param(params, "to")?,
        })
    }
}

impl TimelineQuery {
    pub fn from_params(params: &HashMap<String, String>) -> Result<Self, ApiError> {
        let era = match params.get("era").map(|v| v.trim()) {
            None | Some("") => None,
            Some(raw) => Some(raw.parse::<Era>().map_err(ApiError::invalid)?),
        };
        Ok(TimelineQuery {
            from: param(params, "from")?,
            to: param(params, "to")?,
            buckets: param(params, "buckets")?,
            era,
        })
    }
}

pub fn parse_mode(raw: Option<&str>) -> Result<Mode, ApiError> {
    match raw.map(str::trim) {
        None | Some("") => Ok(Mode::Combined),
        Some(m) => Ok(m.parse::<Mode>()?),
    }
}

#[derive(Debug, Serialize)]
pub struct RelatedLists {
    pub location: Vec<RelatedScore>,
    pub time: Vec<RelatedScore>,
    pub combined: Vec<RelatedScore>,
}

#[derive(Debug, Serialize)]
pub struct ArticleView<'a> {
    pub article: &'a Article,
    pub glossary: &'a Glossary,
    pub related: RelatedLists,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TodayEvent {
    pub id: String,
    pub years_ago: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TodayFeed {
    pub date: String,
    pub events: Vec<TodayEvent>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GalleryItem {
    pub article_id: String,
    pub path: String,
    pub caption: String,
}

/// Read-only query facade over one corpus.
#[derive(Debug)]
pub struct Api {
    corpus: Corpus,
    search: SearchIndex,
    options: ApiOptions,
}

impl Api {
    pub fn new(corpus: Corpus, options: ApiOptions) -> Self {
        let search = SearchIndex::build(&corpus);
        Api {
            corpus,
            search,
            options,
        }
    }

    pub fn corpus(&self) -> &Corpus {
        &self.corpus
    }

    pub fn options(&self) -> &ApiOptions {
        &self.options
    }

    /// Renders the body for `request`.
    pub fn respond(&self, request: &Request) -> Result<Vec<u8>, ApiError> {
        Ok(match request {
            Request::Glossaries => render(&self.corpus.glossaries()),
            Request::Article { id, k } => render(&self.article_view(id, *k)?),
            Request::Related { id, mode, k } => render(&self.related(id, *mode, *k)?),
            Request::Events(q) => render(&self.events(q)?),
            Request::Timeline(q) => render(&self.timeline(q)?),
            Request::Today { date } => render(&self.today(date.as_deref())?),
            Request::Search { q } => render(&self.search(q)),
            Request::Gallery => render(&self.gallery()),
        })
    }

    fn k_or_default(&self, k: Option<usize>) -> Result<usize, ApiError> {
        match k.unwrap_or(self.options.default_k) {
            0 => Err(ApiError::invalid("k must be at least 1")),
            k => Ok(k),
        }
    }

    pub fn related(
        &self,
        id: &str,
        mode: Mode,
        k: Option<usize>,
    ) -> Result<Vec<RelatedScore>, ApiError> {
        let k = self.k_or_default(k)?;
        Ok(rank_related(
            &self.corpus,
            id,
            mode,
            k,
            &self.options.params,
        )?)
    }

    pub fn article_view(&self, id: &str, k: Option<usize>) -> Result<ArticleView<'_>, ApiError> {
        let article = self
            .corpus
            .article(id)
            .ok_or_else(|| ApiError::from(QueryError::UnknownArticle(id.to_string())))?;
        let glossary = self
            .corpus
            .glossary(&article.glossary_id)
            .expect("loaded articles resolve their glossary");
        Ok(ArticleView {
            article,
            glossary,
            related: RelatedLists {
                location: self.related(id, Mode::Location, k)?,
                time: self.related(id, Mode::Time, k)?,
                combined: self.related(id, Mode::Combined, k)?,
            },
        })
    }

    pub fn events(&self, q: &EventsQuery) -> Result<Vec<Cluster>, ApiError> {
        let bbox = BoundingBox::new(q.south, q.west, q.north, q.east)?;
        let window = TimeWindow::new(q.from, q.to)?;
        Ok(grid_cluster(&self.corpus, &bbox, q.zoom, &window)?)
    }

    /// Timeline buckets; `from`/`to` default to the corpus extent and the
    /// bucket count to the largest value up to 20 that tiles the range.
    pub fn timeline(&self, q: &TimelineQuery) -> Result<Vec<TimelineBucket>, ApiError> {
        let extent = self.corpus_extent();
        let (from, to) = match (q.from, q.to, extent) {
            (Some(f), Some(t), _) => (f, t),
            (f, t, Some((lo, hi))) => (f.unwrap_or(lo), t.unwrap_or(hi)),
            (Some(f), None, None) => (f, f),
            (None, Some(t), None) => (t, t),
            (None, None, None) => return Ok(Vec::new()),
        };
        let buckets = match q.buckets {
            Some(n) => n,
            None if from <= to => default_bucket_count(to - from + 1),
            None => 1,
        };
        Ok(bucketize(&self.corpus, from, to, buckets, q.era)?)
    }

    fn corpus_extent(&self) -> Option<(i64, i64)> {
        let ranges = self.corpus.ranges();
        let lo = ranges.first()?.lo;
        let hi = ranges.iter().map(|r| r.hi).max()?;
        Some((lo, hi))
    }

    pub fn today(&self, date: Option<&str>) -> Result<TodayFeed, ApiError> {
        let today = match date {
            Some(raw) => raw
                .trim()
                .parse::<HistoricalDate>()
                .map_err(|e| ApiError::invalid(e.to_string()))?,
            None => self.current_date(),
        };
        let (month, day) = today.month_day().expect("parsed dates have day precision");
        let ids = anniversary_query(
            &self.corpus,
            u32::from(month),
            u32::from(day),
            Some(today.year()),
        )?;
        let events = ids
            .into_iter()
            .map(|id| {
                let year = self
                    .corpus
                    .article(id)
                    .expect("id from corpus")
                    .span
                    .start
                    .year();
                TodayEvent {
                    id: id.to_string(),
                    years_ago: i64::from(today.year()) - i64::from(year),
                }
            })
            .collect();
        Ok(TodayFeed {
            date: today.to_string(),
            events,
        })
    }

    /// Configured date, or the civil date on the system clock at the
    /// configured UTC offset.
    pub fn current_date(&self) -> HistoricalDate {
        if let Some(d) = self.options.fixed_today {
            return d;
        }
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs() as i64)
            .unwrap_or(0);
        let local = secs + i64::from(self.options.utc_offset_minutes) * 60;
        HistoricalDate::from_rata_die(local.div_euclid(86_400) + rata_die(1970, 1, 1))
            .expect("system clock within calendar range")
    }

    pub fn search(&self, q: &str) -> Vec<SearchHit> {
        self.search.search(&self.corpus, q)
    }

    /// Every image in corpus order.
    pub fn gallery(&self) -> Vec<GalleryItem> {
        self.corpus
            .articles()
            .iter()
            .flat_map(|a| {
                a.images.iter().map(|img| GalleryItem {
                    article_id: a.id.clone(),
                    path: img.path.clone(),
                    caption: img.caption.clone(),
                })
            })
            .collect()
    }
}

/// Largest bucket count up to [`DEFAULT_BUCKETS`] whose width rule tiles a
/// range of `len` days.
pub fn default_bucket_count(len: i64) -> usize {
    (1..=DEFAULT_BUCKETS as i64)
        .rev()
        .find(|&n| {
            let width = (len + n - 1) / n;
            (n - 1) * width < len
        })
        .unwrap_or(1) as usize
}
