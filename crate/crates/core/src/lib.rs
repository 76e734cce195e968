//! Spatio-temporal engine over a corpus of dated, geolocated history articles.
//!
//! The corpus is loaded once and never mutated. Every query is a pure
//! function over it: time-range, anniversary, and timeline-bucket queries
//! ([`temporal`]), bounding-box lookups and zoom-level grid clustering
//! ([`spatial`]), and ranking of related articles ([`related`]).

pub mod calendar;
pub mod corpus;
mod error;
pub mod model;
pub mod related;
pub mod spatial;
pub mod temporal;

pub use calendar::{DateError, HistoricalDate, Precision};
pub use corpus::{
    load_corpus, parse_article, serialize_article, validate_corpus, Corpus, CorpusError, FieldError,
};
pub use error::QueryError;
pub use model::{Article, Diagnostic, Era, GeoPoint, Glossary, ImageRef, Severity, TimeSpan};
pub use related::{rank_related, Mode, RelatedScore, RelatednessParams, Tier};
pub use spatial::{grid_cluster, haversine_km, query_bbox, BoundingBox, Cluster, TimeWindow};
pub use temporal::{
    anniversary_query, bucketize, date_to_ordinal_range, query_time_range, span_gap_days,
    span_to_ordinal_range, OrdinalRange, TimelineBucket,
};
